//! Attitude stabilization of a fully actuated rigid body, designed and
//! simulated in the ambient space ℝ³ˣ³ × ℝ³.
//!
//! The rigid-body field is modified so that SO(3) × ℝ³ attracts nearby
//! states, which lets ordinary fixed-step integrators run on raw 3×3
//! matrices. A PD law on `Z = R₀ᵀ(R − R₀)` drives the body to `(R₀, 0)`, and a
//! height function `W` with its Lie derivative certifies the behaviour.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*d` and `*f`
//! aliases below fix the scalar.

// `!(x > 0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod controller;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod linalg;
pub mod lyapunov;
pub mod scalar;
pub mod scenarios;

pub use controller::{max_epsilon, pd_control, pd_torque, validate_gains, GainViolation, Gains};
pub use dynamics::{
    ambient_field, grad_v_tilde, linearized_field, v_tilde, z_transform, AmbientDeriv, AmbientState, LinearizedState,
    Reference,
};
pub use error::{Error, Result};
pub use integrator::{roa_sweep, simulate, step, InitSampler, Method, Outcome, Sample, SimConfig, TrajectoryRecord, TrialSummary};
pub use linalg::{hat, rodrigues_exp, vee, Mat3, Vec3};
pub use lyapunov::{
    admissible_region, classify_e_set, diag_dominance_holds, height_w, w_dot_analytic, w_dot_bound,
    z_dynamics_on_manifold, AdmissibleRegion, ESetClass, ESetTag,
};
pub use scalar::Real;

pub type Vec3d = Vec3<f64>;
pub type Mat3d = Mat3<f64>;
pub type Stated = AmbientState<f64>;
pub type Gainsd = Gains<f64>;
pub type SimConfigd = SimConfig<f64>;

pub type Vec3f = Vec3<f32>;
pub type Mat3f = Mat3<f32>;
pub type Statef = AmbientState<f32>;
pub type Gainsf = Gains<f32>;
pub type SimConfigf = SimConfig<f32>;
