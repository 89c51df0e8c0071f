use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Complex;

/// Real 2x2 matrix, row-major. Serializes as `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealMatrix2 {
    pub m: [[f64; 2]; 2],
}

impl RealMatrix2 {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0)
    }

    pub const fn diag(a: f64, d: f64) -> Self {
        Self::new(a, 0.0, 0.0, d)
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m[0][0], self.m[1][0], self.m[0][1], self.m[1][1])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.m[0][0] * s, self.m[0][1] * s, self.m[1][0] * s, self.m[1][1] * s)
    }

    /// Inverse, or `None` when the determinant is exactly zero.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == 0.0 {
            return None;
        }
        Some(Self::new(self.m[1][1] / d, -self.m[0][1] / d, -self.m[1][0] / d, self.m[0][0] / d))
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `(Tr)^2 - 4 det`; positive iff the eigenvalues are real and distinct.
    pub fn discriminant(&self) -> f64 {
        let (a, b, c, d) = (self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]);
        // (a-d)^2 + 4bc avoids cancellation in tr^2 - 4 det.
        (a - d) * (a - d) + 4.0 * b * c
    }

    /// Eigenvalues from the characteristic quadratic. Real pairs are sorted
    /// ascending; complex pairs are listed with negative imaginary part first.
    pub fn spectrum(&self) -> [Complex; 2] {
        let tr = self.trace();
        let disc = self.discriminant();
        if disc >= 0.0 {
            let s = disc.sqrt();
            // Stable form: the larger-magnitude root first, the other from det.
            let big = if tr >= 0.0 { (tr + s) / 2.0 } else { (tr - s) / 2.0 };
            let small = if big != 0.0 { self.det() / big } else { 0.0 };
            let (lo, hi) = if big <= small { (big, small) } else { (small, big) };
            [Complex::new(lo, 0.0), Complex::new(hi, 0.0)]
        } else {
            let s = (-disc).sqrt() / 2.0;
            [Complex::new(tr / 2.0, -s), Complex::new(tr / 2.0, s)]
        }
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// Maximum absolute entry difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut out: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                out = out.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        out
    }
}

impl Add for RealMatrix2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.m[0][0] + o.m[0][0],
            self.m[0][1] + o.m[0][1],
            self.m[1][0] + o.m[1][0],
            self.m[1][1] + o.m[1][1],
        )
    }
}

impl Sub for RealMatrix2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for RealMatrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for RealMatrix2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// Complex 2x2 matrix used for C-linear changes of coordinates on C^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexMatrix2 {
    pub m: [[Complex; 2]; 2],
}

impl ComplexMatrix2 {
    /// Matrix whose columns are `c0` and `c1`.
    pub fn from_columns(c0: [Complex; 2], c1: [Complex; 2]) -> Self {
        Self { m: [[c0[0], c1[0]], [c0[1], c1[1]]] }
    }

    pub fn det(&self) -> Complex {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        Some(Self {
            m: [[self.m[1][1] / d, -self.m[0][1] / d], [-self.m[1][0] / d, self.m[0][0] / d]],
        })
    }

    pub fn apply(&self, v: [Complex; 2]) -> [Complex; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    pub fn column(&self, j: usize) -> [Complex; 2] {
        [self.m[0][j], self.m[1][j]]
    }

    pub fn re(&self) -> RealMatrix2 {
        RealMatrix2::new(self.m[0][0].re, self.m[0][1].re, self.m[1][0].re, self.m[1][1].re)
    }

    pub fn im(&self) -> RealMatrix2 {
        RealMatrix2::new(self.m[0][0].im, self.m[0][1].im, self.m[1][0].im, self.m[1][1].im)
    }

    /// `A + iI` for real `A`.
    pub fn shifted_by_i(a: &RealMatrix2) -> Self {
        Self {
            m: [
                [Complex::new(a.m[0][0], 1.0), Complex::new(a.m[0][1], 0.0)],
                [Complex::new(a.m[1][0], 0.0), Complex::new(a.m[1][1], 1.0)],
            ],
        }
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self {
            m: [
                [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
                [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_real_sorted() {
        let s = RealMatrix2::new(2.0, 1.0, 1.0, 2.0).spectrum();
        assert!((s[0].re - 1.0).abs() < 1e-15 && (s[1].re - 3.0).abs() < 1e-15);
        assert_eq!(s[0].im, 0.0);
    }

    #[test]
    fn spectrum_rotation() {
        let s = RealMatrix2::new(0.0, -2.0, 2.0, 0.0).spectrum();
        assert_eq!(s[0], Complex::new(0.0, -2.0));
        assert_eq!(s[1], Complex::new(0.0, 2.0));
    }

    #[test]
    fn spectrum_zero_trace_real() {
        let s = RealMatrix2::new(0.0, 1.0, 1.0, 0.0).spectrum();
        assert_eq!(s[0].re, -1.0);
        assert_eq!(s[1].re, 1.0);
    }

    #[test]
    fn commutator_det_antisymmetric() {
        let a = RealMatrix2::new(0.3, -1.2, 2.0, 0.7);
        let b = RealMatrix2::new(-0.4, 0.9, 1.1, 2.5);
        assert_eq!(a.commutator(&b).det(), b.commutator(&a).det());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = RealMatrix2::new(0.3, -1.2, 2.0, 0.7);
        let i = a * a.inverse().unwrap();
        assert!(i.max_abs_diff(&RealMatrix2::identity()) < 1e-15);
    }
}
