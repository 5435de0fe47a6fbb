//! Fixed-size linear algebra on ℝ³ and ℝ³ˣ³.
//!
//! Matrices are stored row-major; `m[i][j]` is row `i`, column `j`. The inner
//! product on matrices is the Frobenius one, `⟨A, B⟩ = tr(AᵀB)`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    #[inline]
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zeros() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// Standard basis vector `e_i` (`i` in `0..3`).
    pub fn basis(i: usize) -> Self {
        let mut v = Self::zeros();
        v[i] = T::one();
        v
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn cast<U: Real>(self) -> Vec3<U> {
        Vec3::new(
            U::lit(self.x.as_f64()),
            U::lit(self.y.as_f64()),
            U::lit(self.z.as_f64()),
        )
    }

    /// Skew-symmetric matrix `v̂` with `v̂ w = v × w`.
    pub fn hat(self) -> Mat3<T> {
        hat(self)
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl<T> IndexMut<usize> for Vec3<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        match i {
            0 => &mut self.x,
            1 => &mut self.y,
            2 => &mut self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> SubAssign for Vec3<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Real 3×3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat3<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Real> Mat3<T> {
    pub const fn from_rows(m: [[T; 3]; 3]) -> Self {
        Self { m }
    }

    /// Builds a matrix from nine entries in row-major order.
    pub fn from_row_major(a: [T; 9]) -> Self {
        Self::from_rows([[a[0], a[1], a[2]], [a[3], a[4], a[5]], [a[6], a[7], a[8]]])
    }

    /// Entries in row-major order, the fixed serialization order.
    pub fn to_row_major(&self) -> [T; 9] {
        let m = &self.m;
        [
            m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
        ]
    }

    pub fn zeros() -> Self {
        Self::from_rows([[T::zero(); 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag(T::one(), T::one(), T::one())
    }

    pub fn diag(a: T, b: T, c: T) -> Self {
        let mut r = Self::zeros();
        r.m[0][0] = a;
        r.m[1][1] = b;
        r.m[2][2] = c;
        r
    }

    /// Outer product `a bᵀ`.
    pub fn outer(a: Vec3<T>, b: Vec3<T>) -> Self {
        let mut r = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                r.m[i][j] = a[i] * b[j];
            }
        }
        r
    }

    pub fn transpose(&self) -> Self {
        let mut r = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                r.m[i][j] = self.m[j][i];
            }
        }
        r
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn det(&self) -> T {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn scale(&self, s: T) -> Self {
        let mut r = *self;
        r.m.iter_mut().flatten().for_each(|x| *x = *x * s);
        r
    }

    /// Frobenius inner product `Σ A_ij B_ij = tr(AᵀB)`.
    pub fn frob_inner(&self, o: &Self) -> T {
        self.m
            .iter()
            .flatten()
            .zip(o.m.iter().flatten())
            .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }

    pub fn norm_squared(&self) -> T {
        self.frob_inner(self)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|x| x.is_finite())
    }

    /// Symmetric part `(A + Aᵀ)/2`.
    pub fn sym(&self) -> Self {
        (*self + self.transpose()).scale(T::lit(0.5))
    }

    /// Skew-symmetric part `(A − Aᵀ)/2`.
    pub fn skew(&self) -> Self {
        (*self - self.transpose()).scale(T::lit(0.5))
    }

    /// `(A_s, A_k)` with `A = A_s + A_k`.
    pub fn sym_skew_split(&self) -> (Self, Self) {
        (self.sym(), self.skew())
    }

    /// The vector `a` with `â` equal to the skew part of `self`. Never fails.
    pub fn skew_vee(&self) -> Vec3<T> {
        let m = &self.m;
        let h = T::lit(0.5);
        Vec3::new(
            (m[2][1] - m[1][2]) * h,
            (m[0][2] - m[2][0]) * h,
            (m[1][0] - m[0][1]) * h,
        )
    }

    /// Inverse of the hat map.
    ///
    /// Fails with [`Error::NotSkew`] unless `‖A + Aᵀ‖ ≤ 1e-9·max(1, ‖A‖)`.
    /// Within tolerance the symmetric residue is discarded.
    pub fn vee(&self) -> Result<Vec3<T>> {
        let residual = (*self + self.transpose()).norm();
        let tol = T::lit(1e-9) * T::one().max(self.norm());
        if !(residual <= tol) {
            return Err(Error::NotSkew {
                residual: residual.as_f64(),
                tol: tol.as_f64(),
            });
        }
        Ok(self.skew_vee())
    }

    /// `‖RᵀR − I‖`, the Frobenius distance of the Gram matrix from identity.
    pub fn orthogonality_residual(&self) -> T {
        (self.transpose() * *self - Self::identity()).norm()
    }

    /// SO(3) membership within [`Real::so3_tol`] on orthogonality and
    /// determinant.
    pub fn is_rotation(&self) -> bool {
        self.is_finite()
            && self.orthogonality_residual() <= T::so3_tol()
            && (self.det() - T::one()).abs() <= T::so3_tol()
    }

    /// Strict row diagonal dominance, `|A_ii| > Σ_{j≠i} |A_ij|` for every row.
    pub fn is_strictly_diagonally_dominant(&self) -> bool {
        (0..3).all(|i| {
            let off = (0..3)
                .filter(|&j| j != i)
                .fold(T::zero(), |acc, j| acc + self.m[i][j].abs());
            self.m[i][i].abs() > off
        })
    }

    pub fn cast<U: Real>(&self) -> Mat3<U> {
        let mut r = Mat3::<U>::zeros();
        for i in 0..3 {
            for j in 0..3 {
                r.m[i][j] = U::lit(self.m[i][j].as_f64());
            }
        }
        r
    }
}

impl<T: Real> Add for Mat3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut r = self;
        for i in 0..3 {
            for j in 0..3 {
                r.m[i][j] = r.m[i][j] + o.m[i][j];
            }
        }
        r
    }
}

impl<T: Real> AddAssign for Mat3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Mat3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut r = self;
        for i in 0..3 {
            for j in 0..3 {
                r.m[i][j] = r.m[i][j] - o.m[i][j];
            }
        }
        r
    }
}

impl<T: Real> Neg for Mat3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul for Mat3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut r = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                r.m[i][j] = self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j] + self.m[i][2] * o.m[2][j];
            }
        }
        r
    }
}

impl<T: Real> Mul<Vec3<T>> for Mat3<T> {
    type Output = Vec3<T>;
    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        let m = &self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }
}

impl<T: Real> Mul<T> for Mat3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// Hat map ℝ³ → 𝔰𝔬(3).
pub fn hat<T: Real>(v: Vec3<T>) -> Mat3<T> {
    let z = T::zero();
    Mat3::from_rows([[z, -v.z, v.y], [v.z, z, -v.x], [-v.y, v.x, z]])
}

/// Vee map 𝔰𝔬(3) → ℝ³; see [`Mat3::vee`].
pub fn vee<T: Real>(a: &Mat3<T>) -> Result<Vec3<T>> {
    a.vee()
}

/// Rotation by `angle` radians about the unit `axis`:
/// `I + sin θ ξ̂ + (1 − cos θ) ξ̂²`.
pub fn rodrigues_exp<T: Real>(axis: Vec3<T>, angle: T) -> Result<Mat3<T>> {
    let norm = axis.norm();
    if !((norm - T::one()).abs() <= T::unit_tol()) {
        return Err(Error::NotUnitAxis { norm: norm.as_f64() });
    }
    let k = axis.hat();
    Ok(Mat3::identity() + k * angle.sin() + (k * k) * (T::one() - angle.cos()))
}
