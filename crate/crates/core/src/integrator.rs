//! Fixed-step Euclidean integration of the closed loop.
//!
//! States are advanced as plain elements of ℝ³ˣ³ × ℝ³ by explicit Euler or
//! classical RK4; attraction to SO(3) comes from the modified field alone.
//!
//! When the controller sees the exact state the PD law is part of the vector
//! field and is re-evaluated at every stage. With a sampled (noisy)
//! measurement the torque is computed once per step and held across stages.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::controller::{closed_loop_field, pd_torque, Gains};
use crate::dynamics::{ambient_field, v_tilde, AmbientDeriv, AmbientState, Reference};
use crate::error::{Error, Result};
use crate::linalg::{rodrigues_exp, Mat3, Vec3};
use crate::lyapunov::{admissible_region, classify_e_set, height_w_unchecked, w_dot_bound_unchecked, ESetTag};
use crate::scalar::Real;

/// Residual tolerance used to classify final states of a sweep.
pub const E_SET_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Euler,
    #[default]
    Rk4,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Euler => "euler",
            Self::Rk4 => "rk4",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "euler" => Ok(Self::Euler),
            "rk4" => Ok(Self::Rk4),
            other => Err(format!("unknown integrator `{other}` (expected euler or rk4)")),
        }
    }
}

/// One step of `method` for an autonomous field.
pub fn advance<T: Real, F>(s: &AmbientState<T>, dt: T, method: Method, field: F) -> AmbientState<T>
where
    F: Fn(&AmbientState<T>) -> AmbientDeriv<T>,
{
    match method {
        Method::Euler => s.advanced(&field(s), dt),
        Method::Rk4 => {
            let half = dt * T::lit(0.5);
            let k1 = field(s);
            let k2 = field(&s.advanced(&k1, half));
            let k3 = field(&s.advanced(&k2, half));
            let k4 = field(&s.advanced(&k3, dt));
            let sixth = T::one() / T::lit(6.0);
            let third = T::one() / T::lit(3.0);
            let d = AmbientDeriv::combine(&[(sixth, &k1), (third, &k2), (third, &k3), (sixth, &k4)]);
            s.advanced(&d, dt)
        }
    }
}

/// One step of the ambient field under a constant torque `u`.
///
/// `correction_gain` multiplies the manifold-attraction term; it is `k_e` for
/// the actual plant.
pub fn step_with_control<T: Real>(
    s: &AmbientState<T>,
    u: Vec3<T>,
    dt: T,
    correction_gain: T,
    method: Method,
) -> AmbientState<T> {
    advance(s, dt, method, |x| ambient_field(x, u, correction_gain))
}

/// Advances the closed loop by `dt`.
///
/// With `measured = None` the controller reads the integrated state at every
/// stage. Otherwise the torque is computed from `measured` and held for the
/// whole step, while the attraction term always acts on the true state.
///
/// A non-finite result yields [`Error::NonFiniteState`]; `last_valid_t` is
/// left as NaN since a single step has no clock, and [`simulate`] fills it in.
pub fn step<T: Real>(
    s: &AmbientState<T>,
    dt: T,
    g: &Gains<T>,
    reference: &Reference<T>,
    method: Method,
    measured: Option<&AmbientState<T>>,
) -> Result<AmbientState<T>> {
    let next = match measured {
        None => advance(s, dt, method, |x| closed_loop_field(x, reference, g)),
        Some(m) => step_with_control(s, pd_torque(m, reference, g), dt, g.k_e, method),
    };
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::NonFiniteState { last_valid_t: f64::NAN })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig<T> {
    /// Target attitude; must be a rotation.
    pub r0: Mat3<T>,
    pub r_init: Mat3<T>,
    pub omega_init: Vec3<T>,
    pub gains: Gains<T>,
    pub dt: T,
    pub t_end: T,
    pub method: Method,
    /// Relative standard deviation of the measurement noise; zero disables it.
    pub noise_rel: T,
    pub seed: u64,
    pub record_every: usize,
}

impl<T: Real> SimConfig<T> {
    pub fn initial_state(&self) -> AmbientState<T> {
        AmbientState::new(self.r_init, self.omega_init)
    }

    /// Number of integration steps, `round(t_end / dt)`.
    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round().to_usize().unwrap_or(0)
    }

    /// Checks the configuration and returns the validated reference.
    pub fn validate(&self) -> Result<Reference<T>> {
        fn invalid<R>(m: String) -> Result<R> {
            Err(Error::InvalidConfig(m))
        }
        if !(self.dt > T::zero() && self.dt.is_finite()) {
            return invalid(format!("dt must be positive and finite (got {})", self.dt));
        }
        if !(self.t_end.is_finite() && self.n_steps() >= 1) {
            return invalid(format!("t_end must be at least dt (got t_end = {}, dt = {})", self.t_end, self.dt));
        }
        if !(self.noise_rel >= T::zero() && self.noise_rel.is_finite()) {
            return invalid(format!("noise_rel must be non-negative (got {})", self.noise_rel));
        }
        if self.record_every == 0 {
            return invalid("record_every must be a positive integer".into());
        }
        if !self.initial_state().is_finite() {
            return invalid("initial state must be finite".into());
        }
        self.gains.check().map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Reference::new(self.r0).map_err(|e| Error::InvalidConfig(e.to_string()))
    }
}

/// One recorded row of a trajectory; diagnostics are taken on the true state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub t: T,
    pub r: Mat3<T>,
    pub omega: Vec3<T>,
    pub u_norm: T,
    pub err_r: T,
    pub err_omega: T,
    pub v_tilde: T,
    pub w: T,
    pub w_dot_bound: T,
}

impl<T: Real> Sample<T> {
    pub fn state(&self) -> AmbientState<T> {
        AmbientState::new(self.r, self.omega)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryRecord<T> {
    pub samples: Vec<Sample<T>>,
}

impl<T: Real> TrajectoryRecord<T> {
    pub fn last(&self) -> Option<&Sample<T>> {
        self.samples.last()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn sample<T: Real>(t: T, s: &AmbientState<T>, reference: &Reference<T>, g: &Gains<T>) -> Sample<T> {
    Sample {
        t,
        r: s.r,
        omega: s.omega,
        u_norm: pd_torque(s, reference, g).norm(),
        err_r: (s.r - *reference.matrix()).norm(),
        err_omega: s.omega.norm(),
        v_tilde: v_tilde(&s.r, g.k_e),
        w: height_w_unchecked(s, reference, g),
        w_dot_bound: w_dot_bound_unchecked(s, reference, g),
    }
}

/// Measurement: each entry perturbed by Gaussian noise with standard deviation
/// `noise_rel` times the Frobenius norm of `R` (resp. Euclidean norm of `Ω`).
/// Always draws twelve normals so step `k` uses a fixed slice of the stream.
fn measure<T: Real>(s: &AmbientState<T>, noise_rel: T, rng: &mut ChaCha8Rng) -> AmbientState<T> {
    let sigma_r = noise_rel * s.r.norm();
    let sigma_w = noise_rel * s.omega.norm();
    let mut m = *s;
    for x in m.r.m.iter_mut().flatten() {
        let n: f64 = rng.sample(StandardNormal);
        *x = *x + sigma_r * T::lit(n);
    }
    for i in 0..3 {
        let n: f64 = rng.sample(StandardNormal);
        m.omega[i] = m.omega[i] + sigma_w * T::lit(n);
    }
    m
}

/// Runs one closed-loop simulation.
///
/// Samples are taken every `record_every` steps starting at `t = 0`, and the
/// final state is always included. The run is a pure function of `cfg`.
pub fn simulate<T: Real>(cfg: &SimConfig<T>) -> Result<TrajectoryRecord<T>> {
    let reference = cfg.validate()?;
    let g = cfg.gains;
    let n = cfg.n_steps();
    let mut rng = (cfg.noise_rel > T::zero()).then(|| ChaCha8Rng::seed_from_u64(cfg.seed));

    let mut s = cfg.initial_state();
    let mut out = TrajectoryRecord {
        samples: Vec::with_capacity(n / cfg.record_every + 2),
    };
    for k in 0..n {
        let t = cfg.dt * T::from_usize(k).expect("step index fits");
        if k % cfg.record_every == 0 {
            out.samples.push(sample(t, &s, &reference, &g));
        }
        let measured = rng.as_mut().map(|r| measure(&s, cfg.noise_rel, r));
        s = step(&s, cfg.dt, &g, &reference, cfg.method, measured.as_ref()).map_err(|_| Error::NonFiniteState {
            last_valid_t: t.as_f64(),
        })?;
    }
    let t_final = cfg.dt * T::from_usize(n).expect("step count fits");
    out.samples.push(sample(t_final, &s, &reference, &g));
    Ok(out)
}

/// How a sweep draws initial states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitSampler<T> {
    /// Every trial starts from the base configuration's initial state.
    Fixed,
    /// `R = Q·S` with `Q` a random rotation and `S` a random symmetric stretch
    /// such that `‖RᵀR − I‖ < max_residual`; `Ω` uniform in the ball of radius
    /// `omega_max`.
    Admissible { max_residual: T, omega_max: T },
}

impl<T: Real> InitSampler<T> {
    /// Admissible sampler using the full admissible region for `k_e`.
    pub fn admissible(k_e: T, omega_max: T) -> Self {
        Self::Admissible {
            max_residual: admissible_region(k_e).delta,
            omega_max,
        }
    }

    /// Initial `(R, Ω)` for the trial with the given seed, as drawn by
    /// [`roa_sweep`].
    pub fn sample(&self, base: &SimConfig<T>, seed: u64) -> (Mat3<T>, Vec3<T>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        self.draw(base, &mut rng)
    }

    fn draw(&self, base: &SimConfig<T>, rng: &mut ChaCha8Rng) -> (Mat3<T>, Vec3<T>) {
        match *self {
            Self::Fixed => (base.r_init, base.omega_init),
            Self::Admissible { max_residual, omega_max } => {
                let q = rodrigues_exp(unit_vector(rng), T::lit(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)))
                    .expect("unit axis");
                let mut e = Mat3::<T>::zeros();
                for i in 0..3 {
                    for j in i..3 {
                        let x = T::lit(rng.random_range(-1.0..1.0));
                        e.m[i][j] = x;
                        e.m[j][i] = x;
                    }
                }
                let target = max_residual * T::lit(rng.random_range(0.0..1.0));
                let mut a = target / (T::lit(2.0) * e.norm()).max(T::epsilon());
                let mut r = q * (Mat3::identity() + e * a);
                while !(r.orthogonality_residual() < max_residual) {
                    a = a * T::lit(0.9);
                    r = q * (Mat3::identity() + e * a);
                }
                let om = unit_vector(rng) * (omega_max * T::lit(rng.random_range(0.0f64..1.0).cbrt()));
                (r, om)
            }
        }
    }
}

fn unit_vector<T: Real>(rng: &mut ChaCha8Rng) -> Vec3<T> {
    loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0f64..1.0),
        );
        let n = v.norm();
        if n > 1e-6 && n <= 1.0 {
            return (v * (1.0 / n)).cast();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    E1,
    E2,
    /// Finite final state outside both E-set components.
    Unclassified,
    Diverged,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::E1 => "E1",
            Self::E2 => "E2",
            Self::Unclassified => "none",
            Self::Diverged => "diverged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSummary<T> {
    pub index: usize,
    pub seed: u64,
    /// `‖R(0)ᵀR(0) − I‖`.
    pub initial_residual: T,
    pub outcome: Outcome,
    /// NaN when the trial diverged.
    pub final_err_r: T,
    pub final_err_omega: T,
}

/// Runs `n_trials` independent simulations from sampled initial states.
///
/// Trial `i` uses seed `base.seed + i` for both its initial-state draw and its
/// noise stream. Trials run in parallel; results are ordered by index.
pub fn roa_sweep<T: Real>(base: &SimConfig<T>, n_trials: usize, sampler: &InitSampler<T>) -> Result<Vec<TrialSummary<T>>> {
    if n_trials == 0 {
        return Err(Error::InvalidConfig("n_trials must be at least 1".into()));
    }
    let reference = base.validate()?;
    if let InitSampler::Admissible { max_residual, omega_max } = *sampler {
        let bound = (T::one() / T::lit(3.0)).sqrt();
        if !(max_residual > T::zero() && max_residual <= bound && omega_max >= T::zero()) {
            return Err(Error::InvalidConfig(format!(
                "sampler bounds out of range: max_residual = {max_residual} must lie in (0, √(1/3)], omega_max = {omega_max} must be ≥ 0"
            )));
        }
    }

    (0..n_trials)
        .into_par_iter()
        .map(|index| {
            let seed = base.seed.wrapping_add(index as u64);
            let (r_init, omega_init) = sampler.sample(base, seed);
            let cfg = SimConfig {
                r_init,
                omega_init,
                seed,
                ..*base
            };
            let initial_residual = r_init.orthogonality_residual();
            let summary = match simulate(&cfg) {
                Ok(rec) => {
                    let last = rec.last().expect("simulate records the final state");
                    let outcome = match classify_e_set(&last.state(), &reference, T::lit(E_SET_TOL)) {
                        Ok(c) => match c.tag {
                            ESetTag::E1 => Outcome::E1,
                            ESetTag::E2 => Outcome::E2,
                            ESetTag::NotInE => Outcome::Unclassified,
                        },
                        Err(_) => Outcome::Unclassified,
                    };
                    TrialSummary {
                        index,
                        seed,
                        initial_residual,
                        outcome,
                        final_err_r: last.err_r,
                        final_err_omega: last.err_omega,
                    }
                }
                Err(Error::NonFiniteState { .. }) => TrialSummary {
                    index,
                    seed,
                    initial_residual,
                    outcome: Outcome::Diverged,
                    final_err_r: T::nan(),
                    final_err_omega: T::nan(),
                },
                Err(e) => return Err(e),
            };
            Ok(summary)
        })
        .collect()
}
