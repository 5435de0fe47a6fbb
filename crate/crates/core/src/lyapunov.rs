//! Height function diagnostics for the closed loop.
//!
//! With `Z = R₀ᵀ(R − R₀)` split into `Z_s + Z_k`, the height function is
//!
//! ```text
//! W(R, Ω) = (k_p/4)(‖Z_s‖² + ‖Z_k‖²) + ½‖Ω‖² + ε⟨Z_k^∨, Ω⟩
//! ```
//!
//! On SO(3) × ℝ³ its Lie derivative along the closed loop vanishes exactly on
//! `E = {Z_k^∨ = 0, Ω = 0}`, which splits into the target `E₁ = {(R₀, 0)}`
//! (level 0) and the half-turn set `E₂` (level `2k_p`).

use crate::controller::Gains;
use crate::dynamics::{AmbientState, Reference};
use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::scalar::Real;

/// Loose manifold gate for on-manifold formulas evaluated on simulated states.
fn loose_gate<T: Real>() -> T {
    T::so3_tol() * T::lit(1e3)
}

fn require_on_manifold<T: Real>(s: &AmbientState<T>, gate: T) -> Result<()> {
    let distance = s.manifold_distance();
    if !(distance <= gate) {
        return Err(Error::OffManifold {
            distance: distance.as_f64(),
            gate: gate.as_f64(),
        });
    }
    Ok(())
}

pub fn height_w<T: Real>(s: &AmbientState<T>, reference: &Reference<T>, g: &Gains<T>) -> Result<T> {
    g.check()?;
    Ok(height_w_unchecked(s, reference, g))
}

pub(crate) fn height_w_unchecked<T: Real>(s: &AmbientState<T>, reference: &Reference<T>, g: &Gains<T>) -> T {
    let z = reference.z(&s.r);
    let (zs, zk) = z.sym_skew_split();
    g.k_p * T::lit(0.25) * (zs.norm_squared() + zk.norm_squared())
        + T::lit(0.5) * s.omega.norm_squared()
        + g.epsilon * zk.skew_vee().dot(s.omega)
}

/// Upper bound on `Ẇ` over the manifold:
/// `−(k_d − ε)‖Ω‖² − ε k_d⟨Z_k^∨, Ω⟩ − ε k_p‖Z_k^∨‖²`.
pub fn w_dot_bound<T: Real>(s: &AmbientState<T>, reference: &Reference<T>, g: &Gains<T>) -> Result<T> {
    g.check()?;
    Ok(w_dot_bound_unchecked(s, reference, g))
}

pub(crate) fn w_dot_bound_unchecked<T: Real>(s: &AmbientState<T>, reference: &Reference<T>, g: &Gains<T>) -> T {
    let zk_vee = reference.z(&s.r).skew_vee();
    let om = s.omega;
    -(g.k_d - g.epsilon) * om.norm_squared()
        - g.epsilon * g.k_d * zk_vee.dot(om)
        - g.epsilon * g.k_p * zk_vee.norm_squared()
}

/// Exact `Ẇ` on the manifold: the bound plus `(ε/2) tr(Ω̂ᵀ Z_s Ω̂)`, which is
/// never positive there.
///
/// States within `10³·tol_so3` of the manifold are accepted; the result is
/// then accurate to first order in the distance.
pub fn w_dot_analytic<T: Real>(s: &AmbientState<T>, reference: &Reference<T>, g: &Gains<T>) -> Result<T> {
    g.check()?;
    require_on_manifold(s, loose_gate())?;
    let zs = reference.z(&s.r).sym();
    let oh = s.omega.hat();
    let trace_term = (oh.transpose() * zs * oh).trace();
    Ok(w_dot_bound_unchecked(s, reference, g) + g.epsilon * T::lit(0.5) * trace_term)
}

/// Right-hand sides of the closed loop in `Z` coordinates on the manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZRates<T> {
    pub dzs: Mat3<T>,
    pub dzk: Mat3<T>,
    pub domega: Vec3<T>,
}

/// ```text
/// Ż_s = ½(Z_sΩ̂ − Ω̂Z_s) + Z_kΩ̂ − ½(Z_k^∨ × Ω)^
/// Ż_k = ½(Z_sΩ̂ + Ω̂Z_s) + Ω̂ + ½(Z_k^∨ × Ω)^
/// Ω̇  = −k_p Z_k^∨ − k_d Ω
/// ```
pub fn z_dynamics_on_manifold<T: Real>(
    s: &AmbientState<T>,
    reference: &Reference<T>,
    g: &Gains<T>,
) -> Result<ZRates<T>> {
    require_on_manifold(s, loose_gate())?;
    let half = T::lit(0.5);
    let (zs, zk) = reference.z(&s.r).sym_skew_split();
    let zk_vee = zk.skew_vee();
    let oh = s.omega.hat();
    let cross = zk_vee.cross(s.omega).hat();
    Ok(ZRates {
        dzs: (zs * oh - oh * zs) * half + zk * oh - cross * half,
        dzk: (zs * oh + oh * zs) * half + oh + cross * half,
        domega: -(zk_vee * g.k_p) - s.omega * g.k_d,
    })
}

/// Residuals of the trace identities used to simplify `Ẇ`, for symmetric
/// `zs`, skew `zk` and any `omega`. Every entry is zero in exact arithmetic.
pub fn trace_identity_residuals<T: Real>(zs: &Mat3<T>, zk: &Mat3<T>, omega: Vec3<T>) -> [(&'static str, T); 8] {
    let oh = omega.hat();
    let zk_vee = zk.skew_vee();
    let cross = zk_vee.cross(omega);
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let sym_mix = *zs * oh + oh * *zs;
    [
        ("<Zs, Zs Ω^> = 0", zs.frob_inner(&(*zs * oh))),
        ("<Zs, Ω^ Zs> = 0", zs.frob_inner(&(oh * *zs))),
        ("<Zs, (Zk∨ × Ω)^> = 0", zs.frob_inner(&cross.hat())),
        ("<Zk, (Zk∨ × Ω)^> = 0", zk.frob_inner(&cross.hat())),
        ("<Ω, Zk∨ × Ω> = 0", omega.dot(cross)),
        ("<Zk, Ω^> = 2<Zk∨, Ω>", zk.frob_inner(&oh) - two * zk_vee.dot(omega)),
        (
            "<Zk, (ZsΩ^ + Ω^Zs)/2> = -<Zs, ZkΩ^>",
            zk.frob_inner(&(sym_mix * half)) + zs.frob_inner(&(*zk * oh)),
        ),
        (
            "<(ZsΩ^ + Ω^Zs)∨, Ω> = tr(Ω^ᵀ Zs Ω^)",
            sym_mix.skew_vee().dot(omega) - (oh.transpose() * *zs * oh).trace(),
        ),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ESetTag {
    E1,
    E2,
    NotInE,
}

impl ESetTag {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::E1 => "E1",
            Self::E2 => "E2",
            Self::NotInE => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ESetClass<T> {
    pub tag: ESetTag,
    /// `‖Z_k^∨‖`.
    pub zk_residual: T,
    /// `‖Ω‖`.
    pub omega_residual: T,
    /// `|tr(R₀ᵀR) − 3|` for E1, `|tr(R₀ᵀR) + 1|` for E2, the smaller of the two
    /// otherwise.
    pub trace_residual: T,
}

/// Classifies an on-manifold state against `E₁` and `E₂` with residual
/// tolerance `tol`. States farther than `tol` from the manifold are rejected.
pub fn classify_e_set<T: Real>(s: &AmbientState<T>, reference: &Reference<T>, tol: T) -> Result<ESetClass<T>> {
    require_on_manifold(s, tol.max(T::so3_tol()))?;
    let rel = reference.relative(&s.r);
    let z = rel - Mat3::identity();
    let zk = z.skew();
    let tr = rel.trace();
    let omega_residual = s.omega.norm();
    let zk_residual = zk.skew_vee().norm();
    let to_e1 = (tr - T::lit(3.0)).abs();
    let to_e2 = (tr + T::one()).abs();

    let (tag, trace_residual) = if (s.r - *reference.matrix()).norm() <= tol && omega_residual <= tol {
        (ESetTag::E1, to_e1)
    } else if omega_residual <= tol && zk.norm() <= tol && to_e2 <= tol {
        (ESetTag::E2, to_e2)
    } else {
        (ESetTag::NotInE, to_e1.min(to_e2))
    };
    Ok(ESetClass {
        tag,
        zk_residual,
        omega_residual,
        trace_residual,
    })
}

/// Sublevel set `Ṽ⁻¹([0, c])` of initial attitudes covered by the
/// convergence guarantee, with `c = k_e δ²/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleRegion<T> {
    pub c: T,
    pub delta: T,
}

/// Margin kept inside the strict bound `δ < √(1/3)`.
pub const ADMISSIBLE_MARGIN: f64 = 0.01;

/// Largest admissible region: `δ = √(1/3)(1 − η)` with `η = 0.01`.
pub fn admissible_region<T: Real>(k_e: T) -> AdmissibleRegion<T> {
    let delta = (T::one() / T::lit(3.0)).sqrt() * T::lit(1.0 - ADMISSIBLE_MARGIN);
    AdmissibleRegion {
        c: k_e * delta * delta * T::lit(0.25),
        delta,
    }
}

impl<T: Real> AdmissibleRegion<T> {
    /// `‖RᵀR − I‖ ≤ δ`, equivalently `Ṽ(R) ≤ c`.
    pub fn contains(&self, r: &Mat3<T>) -> bool {
        r.orthogonality_residual() <= self.delta
    }
}

/// `‖A − I‖ ≤ χ ⇒ A` strictly diagonally dominant. Vacuously true when the
/// hypothesis fails; for `χ < √(1/3)` it should hold for every `A`.
pub fn diag_dominance_holds<T: Real>(a: &Mat3<T>, chi: T) -> bool {
    (*a - Mat3::identity()).norm() > chi || a.is_strictly_diagonally_dominant()
}
