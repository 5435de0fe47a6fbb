//! Rigid-body kinematics lifted to the ambient space ℝ³ˣ³ × ℝ³.
//!
//! The plant is `Ṙ = RΩ̂, Ω̇ = u`. Off SO(3) it is modified by subtracting the
//! gradient of `Ṽ(R) = (k_e/4)‖RᵀR − I‖²`, which makes SO(3) × ℝ³ attractive
//! while leaving the field unchanged on it. Nothing here projects states back
//! onto the manifold.

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::scalar::Real;

/// A point `(R, Ω)` of the ambient space; `R` need not be a rotation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AmbientState<T> {
    pub r: Mat3<T>,
    pub omega: Vec3<T>,
}

/// Time derivative of an [`AmbientState`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AmbientDeriv<T> {
    pub dr: Mat3<T>,
    pub domega: Vec3<T>,
}

impl<T: Real> AmbientState<T> {
    pub fn new(r: Mat3<T>, omega: Vec3<T>) -> Self {
        Self { r, omega }
    }

    /// `self + h·d`.
    pub fn advanced(&self, d: &AmbientDeriv<T>, h: T) -> Self {
        Self {
            r: self.r + d.dr * h,
            omega: self.omega + d.domega * h,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.r.is_finite() && self.omega.is_finite()
    }

    /// `‖RᵀR − I‖`; zero exactly on the manifold.
    pub fn manifold_distance(&self) -> T {
        self.r.orthogonality_residual()
    }

    pub fn is_on_manifold(&self) -> bool {
        self.omega.is_finite() && self.r.is_rotation()
    }
}

impl<T: Real> AmbientDeriv<T> {
    pub fn zeros() -> Self {
        Self {
            dr: Mat3::zeros(),
            domega: Vec3::zeros(),
        }
    }

    /// Linear combination `Σ wᵢ dᵢ`, used by the Runge-Kutta stages.
    pub fn combine(parts: &[(T, &Self)]) -> Self {
        parts.iter().fold(Self::zeros(), |acc, (w, d)| Self {
            dr: acc.dr + d.dr * *w,
            domega: acc.domega + d.domega * *w,
        })
    }
}

/// Target attitude `R₀`, validated to lie in SO(3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference<T> {
    r0: Mat3<T>,
    r0_t: Mat3<T>,
}

impl<T: Real> Reference<T> {
    pub fn new(r0: Mat3<T>) -> Result<Self> {
        if !r0.is_rotation() {
            return Err(Error::InvalidReference {
                orthogonality: r0.orthogonality_residual().as_f64(),
                det: (r0.det() - T::one()).abs().as_f64(),
            });
        }
        Ok(Self {
            r0,
            r0_t: r0.transpose(),
        })
    }

    pub fn identity() -> Self {
        Self::new(Mat3::identity()).expect("identity is a rotation")
    }

    pub fn matrix(&self) -> &Mat3<T> {
        &self.r0
    }

    /// `R₀ᵀR`.
    pub fn relative(&self, r: &Mat3<T>) -> Mat3<T> {
        self.r0_t * *r
    }

    /// `Z = R₀ᵀ(R − R₀) = R₀ᵀR − I`.
    pub fn z(&self, r: &Mat3<T>) -> Mat3<T> {
        self.relative(r) - Mat3::identity()
    }
}

/// `Z = R₀ᵀ(R − R₀)`; fails if `r0` is not a rotation.
pub fn z_transform<T: Real>(r: &Mat3<T>, r0: &Mat3<T>) -> Result<Mat3<T>> {
    Ok(Reference::new(*r0)?.z(r))
}

/// `Ṽ(R) = (k_e/4)‖RᵀR − I‖²`.
pub fn v_tilde<T: Real>(r: &Mat3<T>, k_e: T) -> T {
    k_e * T::lit(0.25) * (r.transpose() * *r - Mat3::identity()).norm_squared()
}

/// `∇_R Ṽ = k_e R(RᵀR − I)`.
pub fn grad_v_tilde<T: Real>(r: &Mat3<T>, k_e: T) -> Mat3<T> {
    (*r * (r.transpose() * *r - Mat3::identity())) * k_e
}

/// The modified field `Ṙ = RΩ̂ − k_e R(RᵀR − I)`, `Ω̇ = u`.
///
/// `k_e` is the correction gain and is positive for the actual plant; other
/// values are accepted so the correction can be disabled or reversed.
pub fn ambient_field<T: Real>(s: &AmbientState<T>, u: Vec3<T>, k_e: T) -> AmbientDeriv<T> {
    AmbientDeriv {
        dr: s.r * s.omega.hat() - grad_v_tilde(&s.r, k_e),
        domega: u,
    }
}

/// Rate of change of `Ṽ` along `dr`: `⟨∇Ṽ, Ṙ⟩`.
pub fn v_tilde_rate<T: Real>(r: &Mat3<T>, dr: &Mat3<T>, k_e: T) -> T {
    grad_v_tilde(r, k_e).frob_inner(dr)
}

/// Coordinates of the linearization about `(R₀, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinearizedState<T> {
    /// Symmetric part of `Z`.
    pub zs: Mat3<T>,
    /// `Z_k^∨`.
    pub zk_vee: Vec3<T>,
    pub omega: Vec3<T>,
}

impl<T: Real> LinearizedState<T> {
    pub fn from_ambient(s: &AmbientState<T>, reference: &Reference<T>) -> Self {
        let z = reference.z(&s.r);
        Self {
            zs: z.sym(),
            zk_vee: z.skew_vee(),
            omega: s.omega,
        }
    }
}

/// `Ż_s = −2k_e Z_s, (Z_k^∨)˙ = Ω, Ω̇ = u`, returned in the state's own shape.
pub fn linearized_field<T: Real>(ls: &LinearizedState<T>, u: Vec3<T>, k_e: T) -> LinearizedState<T> {
    LinearizedState {
        zs: ls.zs * (-(k_e + k_e)),
        zk_vee: ls.omega,
        omega: u,
    }
}
