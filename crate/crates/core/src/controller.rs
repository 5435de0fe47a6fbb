//! PD feedback `u = −k_p Z_k^∨ − k_d Ω` and its gain set.

use std::fmt;

use crate::dynamics::{ambient_field, AmbientDeriv, AmbientState, Reference};
use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::scalar::Real;

/// Controller and analysis constants.
///
/// `epsilon` does not enter the control law; it weights the cross term of the
/// height function and must lie in `(0, max_epsilon(k_p, k_d))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gains<T> {
    pub k_e: T,
    pub k_p: T,
    pub k_d: T,
    pub epsilon: T,
}

/// One violated gain constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainViolation {
    NonPositive { name: &'static str, value: f64 },
    EpsilonNotPositive { epsilon: f64 },
    EpsilonAboveWindow { epsilon: f64, max: f64 },
}

impl fmt::Display for GainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonPositive { name, value } => write!(f, "{name} must be strictly positive (got {value})"),
            Self::EpsilonNotPositive { epsilon } => {
                write!(f, "epsilon must be strictly positive (got {epsilon})")
            }
            Self::EpsilonAboveWindow { epsilon, max } => {
                write!(f, "epsilon = {epsilon} is not strictly below the window bound {max}")
            }
        }
    }
}

/// Upper end of the admissible `ε` window, `4 k_p k_d / (4 k_p + k_d²)`.
pub fn max_epsilon<T: Real>(k_p: T, k_d: T) -> Result<T> {
    for (name, value) in [("k_p", k_p), ("k_d", k_d)] {
        if !(value > T::zero()) {
            return Err(Error::NonPositiveGain { name, value: value.as_f64() });
        }
    }
    let four = T::lit(4.0);
    Ok(four * k_p * k_d / (four * k_p + k_d * k_d))
}

impl<T: Real> Gains<T> {
    /// Gains with `ε = 0.99·max_epsilon(k_p, k_d)`, validated.
    pub fn with_auto_epsilon(k_e: T, k_p: T, k_d: T) -> Result<Self> {
        let epsilon = T::lit(0.99) * max_epsilon(k_p, k_d)?;
        let g = Self { k_e, k_p, k_d, epsilon };
        g.check()?;
        Ok(g)
    }

    /// Every violated constraint, in a fixed order. Empty iff the gains are valid.
    pub fn violations(&self) -> Vec<GainViolation> {
        let mut out = Vec::new();
        for (name, value) in [("k_e", self.k_e), ("k_p", self.k_p), ("k_d", self.k_d)] {
            if !(value > T::zero()) {
                out.push(GainViolation::NonPositive { name, value: value.as_f64() });
            }
        }
        if !(self.epsilon > T::zero()) {
            out.push(GainViolation::EpsilonNotPositive { epsilon: self.epsilon.as_f64() });
        }
        if let Ok(max) = max_epsilon(self.k_p, self.k_d) {
            if !(self.epsilon < max) {
                out.push(GainViolation::EpsilonAboveWindow {
                    epsilon: self.epsilon.as_f64(),
                    max: max.as_f64(),
                });
            }
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidGains(v))
        }
    }

    /// Smallest eigenvalue of the symmetric matrix of the quadratic form
    /// `q(a, b) = (k_d − ε)a² + ε k_d ab + ε k_p b²`; positive iff the form is
    /// positive definite.
    pub fn cross_form_min_eigenvalue(&self) -> T {
        let half = T::lit(0.5);
        let a = self.k_d - self.epsilon;
        let c = self.epsilon * self.k_p;
        let b = half * self.epsilon * self.k_d;
        let mean = half * (a + c);
        let rad = (half * (a - c)).hypot(b);
        mean - rad
    }
}

/// Validation report for a gain set: `Ok(())` or the list of violations.
pub fn validate_gains<T: Real>(g: &Gains<T>) -> std::result::Result<(), Vec<GainViolation>> {
    let v = g.violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// Control from an already validated reference.
#[inline]
pub fn pd_torque<T: Real>(s: &AmbientState<T>, reference: &Reference<T>, g: &Gains<T>) -> Vec3<T> {
    let zk_vee = reference.z(&s.r).skew_vee();
    -(zk_vee * g.k_p) - s.omega * g.k_d
}

/// `u = −k_p Z_k^∨ − k_d Ω` with `Z = R₀ᵀ(R − R₀)`.
pub fn pd_control<T: Real>(s: &AmbientState<T>, r0: &crate::linalg::Mat3<T>, g: &Gains<T>) -> Result<Vec3<T>> {
    Ok(pd_torque(s, &Reference::new(*r0)?, g))
}

/// The closed loop: ambient field driven by the PD law on the same state.
pub fn closed_loop_field<T: Real>(s: &AmbientState<T>, reference: &Reference<T>, g: &Gains<T>) -> AmbientDeriv<T> {
    ambient_field(s, pd_torque(s, reference, g), g.k_e)
}
