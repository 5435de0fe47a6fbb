use thiserror::Error;

use crate::controller::GainViolation;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not skew-symmetric: ‖A + Aᵀ‖ = {residual:e} exceeds {tol:e}")]
    NotSkew { residual: f64, tol: f64 },

    #[error("rotation axis is not unit length: ‖axis‖ = {norm}")]
    NotUnitAxis { norm: f64 },

    #[error(
        "reference attitude is not a rotation: ‖RᵀR − I‖ = {orthogonality:e}, |det R − 1| = {det:e}"
    )]
    InvalidReference { orthogonality: f64, det: f64 },

    #[error("gain must be strictly positive: {name} = {value}")]
    NonPositiveGain { name: &'static str, value: f64 },

    #[error("invalid gains: {}", format_violations(.0))]
    InvalidGains(Vec<GainViolation>),

    #[error("state is off the manifold: ‖RᵀR − I‖ = {distance:e} exceeds {gate:e}")]
    OffManifold { distance: f64, gate: f64 },

    #[error("state became non-finite; last finite sample at t = {last_valid_t} s")]
    NonFiniteState { last_valid_t: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

fn format_violations(v: &[GainViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
