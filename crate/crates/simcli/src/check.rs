//! Numerical self-checks of the model, run by `attitude-sim check`.

use std::f64::consts::PI;

use ambient_attitude::controller::closed_loop_field;
use ambient_attitude::dynamics::ambient_field;
use ambient_attitude::integrator::{advance, E_SET_TOL};
use ambient_attitude::lyapunov::trace_identity_residuals;
use ambient_attitude::{
    admissible_region, classify_e_set, grad_v_tilde, height_w, rodrigues_exp, scenarios, v_tilde, validate_gains,
    w_dot_analytic, ESetTag, Gainsd, Mat3d, Method, Reference, Stated, Vec3d,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Fault injection for exercising the checks themselves.
#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    /// Runs the descent check with the sign of the attraction term reversed.
    pub flip_correction_sign: bool,
    /// Replaces the nominal `ε` in every gain-dependent check.
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn result(name: &'static str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name, passed, detail: detail.into() }
}

fn unit3(rng: &mut impl Rng) -> Vec3d {
    let v = Vec3d::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
    v * (1.0 / v.norm())
}

fn random_rotation(rng: &mut impl Rng) -> Mat3d {
    rodrigues_exp(unit3(rng), rng.random_range(-PI..PI)).expect("unit axis")
}

/// Uniform point of the Frobenius ball of `radius` around zero.
fn ball9(rng: &mut impl Rng, radius: f64) -> Mat3d {
    let mut a = [0.0; 9];
    a.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
    let d = Mat3d::from_row_major(a);
    d * (radius * rng.random_range(0.0f64..1.0).powf(1.0 / 9.0) / d.norm())
}

fn gradient(rng: &mut ChaCha8Rng) -> CheckResult {
    let region = admissible_region(1.0f64);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 100 {
        let r = random_rotation(rng) * (Mat3d::identity() + ball9(rng, 0.3));
        if !region.contains(&r) {
            continue;
        }
        n += 1;
        let k_e = rng.random_range(0.5..2.0);
        let h = 1e-6;
        let mut fd = Mat3d::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let (mut p, mut m) = (r, r);
                p.m[i][j] += h;
                m.m[i][j] -= h;
                fd.m[i][j] = (v_tilde(&p, k_e) - v_tilde(&m, k_e)) / (2.0 * h);
            }
        }
        let g = grad_v_tilde(&r, k_e);
        worst = worst.max((g - fd).norm() / g.norm());
    }
    result("gradient of V~ vs finite differences", worst < 1e-6, format!("max rel err {worst:.3e}"))
}

fn trace_identities(rng: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let mut a = [0.0; 9];
        a.iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0));
        let (zs, zk) = Mat3d::from_row_major(a).sym_skew_split();
        let om = Vec3d::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        for (_, r) in trace_identity_residuals(&zs, &zk, om) {
            worst = worst.max(r.abs());
        }
    }
    result("trace identities", worst <= 1e-12, format!("max |residual| {worst:.3e}"))
}

fn w_dot(rng: &mut ChaCha8Rng, g: &Gainsd) -> CheckResult {
    let name = "W-dot vs finite differences along the flow";
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let reference = Reference::new(random_rotation(rng)).expect("rotation");
        let s = Stated::new(*reference.matrix() * random_rotation(rng), unit3(rng) * rng.random_range(0.1..3.0));
        let h = 1e-5;
        let flow = |dt: f64| advance(&s, dt, Method::Rk4, |x| closed_loop_field(x, &reference, g));
        let eval = || -> ambient_attitude::Result<f64> {
            let fd = (height_w(&flow(h), &reference, g)? - height_w(&flow(-h), &reference, g)?) / (2.0 * h);
            Ok((w_dot_analytic(&s, &reference, g)? - fd).abs() / fd.abs())
        };
        match eval() {
            Ok(rel) => worst = worst.max(rel),
            Err(e) => return result(name, false, e.to_string()),
        }
    }
    result(name, worst < 1e-4, format!("max rel err {worst:.3e}"))
}

fn dominance(rng: &mut ChaCha8Rng) -> CheckResult {
    let mut failures = 0;
    for _ in 0..100_000 {
        let a = Mat3d::identity() + ball9(rng, 0.57);
        if !a.is_strictly_diagonally_dominant() {
            failures += 1;
        }
    }
    result(
        "diagonal dominance near the identity",
        failures == 0,
        format!("{failures} counterexamples in 1e5 samples"),
    )
}

fn epsilon_window(g: &Gainsd) -> CheckResult {
    let name = "epsilon window gives a positive definite cross form";
    let lambda = g.cross_form_min_eigenvalue();
    match validate_gains(g) {
        Ok(()) => result(name, lambda > 1e-9, format!("epsilon {}, min eigenvalue {lambda:.3e}", g.epsilon)),
        Err(v) => {
            let why: Vec<String> = v.iter().map(ToString::to_string).collect();
            result(name, false, format!("{}; min eigenvalue {lambda:.3e}", why.join("; ")))
        }
    }
}

fn e_set_levels(rng: &mut ChaCha8Rng, g: &Gainsd) -> CheckResult {
    let name = "height function on the equilibrium sets";
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let reference = Reference::new(random_rotation(rng)).expect("rotation");
        let e1 = Stated::new(*reference.matrix(), Vec3d::zeros());
        let e2 = Stated::new(*reference.matrix() * rodrigues_exp(unit3(rng), PI).expect("unit axis"), Vec3d::zeros());
        for (s, tag, level) in [(e1, ESetTag::E1, 0.0), (e2, ESetTag::E2, 2.0 * g.k_p)] {
            let eval = || -> ambient_attitude::Result<(ESetTag, f64)> {
                Ok((classify_e_set(&s, &reference, E_SET_TOL)?.tag, height_w(&s, &reference, g)?))
            };
            match eval() {
                Ok((got, w)) if got == tag => worst = worst.max((w - level).abs()),
                Ok((got, _)) => {
                    return result(name, false, format!("expected {}, classified {}", tag.as_str(), got.as_str()))
                }
                Err(e) => return result(name, false, e.to_string()),
            }
        }
    }
    result(name, worst <= 1e-9, format!("max |W - level| {worst:.3e}"))
}

fn descent(rng: &mut ChaCha8Rng, g: &Gainsd, flip: bool) -> CheckResult {
    let correction = if flip { -g.k_e } else { g.k_e };
    let region = admissible_region(g.k_e);
    let (dt, steps) = (1e-3, 2000);
    let mut worst = f64::MIN;
    let mut n = 0;
    while n < 20 {
        let r = random_rotation(rng) * (Mat3d::identity() + ball9(rng, 0.3));
        if !region.contains(&r) || r.orthogonality_residual() < 1e-3 {
            continue;
        }
        n += 1;
        let u = unit3(rng) * rng.random_range(0.0..2.0);
        let mut s = Stated::new(r, unit3(rng));
        let mut prev = v_tilde(&s.r, g.k_e);
        for _ in 0..steps {
            s = advance(&s, dt, Method::Rk4, |x| ambient_field(x, u, correction));
            let v = v_tilde(&s.r, g.k_e);
            worst = worst.max(v - prev);
            prev = v;
        }
    }
    result("V~ decreases along the ambient field", worst <= 1e-15, format!("max step increase {worst:.3e}"))
}

/// Runs every check with a fixed seed.
pub fn run_checks(opts: &CheckOptions) -> Vec<CheckResult> {
    let mut g = scenarios::nominal_gains::<f64>();
    if let Some(eps) = opts.epsilon {
        g.epsilon = eps;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    vec![
        gradient(&mut rng),
        trace_identities(&mut rng),
        w_dot(&mut rng, &g),
        dominance(&mut rng),
        epsilon_window(&g),
        e_set_levels(&mut rng, &g),
        descent(&mut rng, &g, opts.flip_correction_sign),
    ]
}
