//! Built-in scenarios.

use crate::controller::Gains;
use crate::integrator::{Method, SimConfig};
use crate::linalg::{rodrigues_exp, Mat3, Vec3};
use crate::scalar::Real;

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_T_END: f64 = 20.0;
pub const DEFAULT_RECORD_EVERY: usize = 10;

/// Target `diag(−1, −1, 1)`.
pub fn target<T: Real>() -> Mat3<T> {
    Mat3::diag(-T::one(), -T::one(), T::one())
}

/// Gains `k_e = 1, k_p = 4, k_d = 2, ε = 0.99·1.6 = 1.584`.
pub fn nominal_gains<T: Real>() -> Gains<T> {
    Gains::with_auto_epsilon(T::one(), T::lit(4.0), T::lit(2.0)).expect("nominal gains are valid")
}

/// Rotation by 2π/3 about `e₂`.
pub fn ideal_r_init<T: Real>() -> Mat3<T> {
    rodrigues_exp(Vec3::basis(1), T::lit(2.0) * T::FRAC_PI_3()).expect("unit axis")
}

/// On-manifold start `R(0) = exp((2π/3) ê₂)`, `Ω(0) = (0, 1, 1)`, no noise.
pub fn ideal<T: Real>() -> SimConfig<T> {
    SimConfig {
        r0: target(),
        r_init: ideal_r_init(),
        omega_init: Vec3::new(T::zero(), T::one(), T::one()),
        gains: nominal_gains(),
        dt: T::lit(DEFAULT_DT),
        t_end: T::lit(DEFAULT_T_END),
        method: Method::Rk4,
        noise_rel: T::zero(),
        seed: 0,
        record_every: DEFAULT_RECORD_EVERY,
    }
}

/// The ideal scenario with `R(0)` scaled by 1.1 off SO(3) and relative
/// measurement noise `10⁻³`.
pub fn off_manifold<T: Real>() -> SimConfig<T> {
    let base = ideal::<T>();
    SimConfig {
        r_init: base.r_init * T::lit(1.1),
        noise_rel: T::lit(1e-3),
        ..base
    }
}

/// Half-turn `exp(π ξ̂) = 2ξξᵀ − I` about the unit axis `xi`, formed without
/// the `sin π` round-off of the series.
pub fn half_turn<T: Real>(xi: Vec3<T>) -> Mat3<T> {
    Mat3::outer(xi, xi) * T::lit(2.0) - Mat3::identity()
}

/// A rest state exactly on the half-turn set: `R(0) = R₀·exp(π ê₃) = I`,
/// `Ω(0) = 0`.
pub fn antipodal<T: Real>() -> SimConfig<T> {
    let base = ideal::<T>();
    SimConfig {
        r_init: base.r0 * half_turn(Vec3::basis(2)),
        omega_init: Vec3::zeros(),
        t_end: T::lit(40.0),
        ..base
    }
}
