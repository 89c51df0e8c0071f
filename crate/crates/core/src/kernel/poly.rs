use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Complex;
use crate::error::{Error, Result};

fn check_finite(c: Complex, what: &'static str) -> Result<()> {
    if c.re.is_finite() && c.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Integer power that accepts negative exponents.
fn ipow(z: Complex, k: i32) -> Complex {
    if k >= 0 {
        upow(z, k as u32)
    } else {
        upow(z, k.unsigned_abs()).inv()
    }
}

fn upow(z: Complex, k: u32) -> Complex {
    let mut out = Complex::new(1.0, 0.0);
    let mut base = z;
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            out *= base;
        }
        base *= base;
        e >>= 1;
    }
    out
}

/// Polynomial in `z` and `z̄`: `Σ c[m,n] z^m z̄^n`. Zero coefficients are not stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HermitianPolyRepr", into = "HermitianPolyRepr")]
pub struct HermitianPoly {
    terms: BTreeMap<(u32, u32), Complex>,
    degree: u32,
}

#[derive(Serialize, Deserialize)]
struct HermitianPolyRepr {
    degree: u32,
    /// `[m, n, [re, im]]` triples.
    terms: Vec<(u32, u32, Complex)>,
}

impl From<HermitianPoly> for HermitianPolyRepr {
    fn from(p: HermitianPoly) -> Self {
        Self { degree: p.degree, terms: p.terms.into_iter().map(|((m, n), c)| (m, n, c)).collect() }
    }
}

impl TryFrom<HermitianPolyRepr> for HermitianPoly {
    type Error = Error;
    fn try_from(r: HermitianPolyRepr) -> Result<Self> {
        let mut p = HermitianPoly::from_terms(r.terms.into_iter().map(|(m, n, c)| ((m, n), c)))?;
        if p.degree > r.degree {
            return Err(Error::InvalidParameter(format!(
                "term of degree {} exceeds declared degree {}",
                p.degree, r.degree
            )));
        }
        p.degree = r.degree;
        Ok(p)
    }
}

impl HermitianPoly {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new(), degree: 0 }
    }

    /// Builds a polynomial from `((m, n), c)` pairs; repeated keys are summed.
    /// The degree is the largest `m + n` among nonzero terms.
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Complex)>>(terms: I) -> Result<Self> {
        let mut map: BTreeMap<(u32, u32), Complex> = BTreeMap::new();
        for (k, c) in terms {
            check_finite(c, "polynomial coefficient")?;
            *map.entry(k).or_insert(Complex::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| *c != Complex::new(0.0, 0.0));
        let degree = map.keys().map(|(m, n)| m + n).max().unwrap_or(0);
        Ok(Self { terms: map, degree })
    }

    /// `p_t(z, z̄) = z²z̄ + t z z̄² + (t²/3) z̄³`.
    pub fn cubic_family(t: f64) -> Self {
        Self::cubic(Complex::new(1.0, 0.0), Complex::new(t, 0.0), Complex::new(t * t / 3.0, 0.0))
            .expect("finite t")
    }

    /// `a1 z²z̄ + a2 z z̄² + a3 z̄³`.
    pub fn cubic(a1: Complex, a2: Complex, a3: Complex) -> Result<Self> {
        let mut p = Self::from_terms([((2, 1), a1), ((1, 2), a2), ((0, 3), a3)])?;
        p.degree = 3;
        Ok(p)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Complex> {
        &self.terms
    }

    pub fn coeff(&self, m: u32, n: u32) -> Complex {
        self.terms.get(&(m, n)).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every nonzero term has total degree equal to `degree`.
    pub fn is_homogeneous(&self) -> bool {
        self.terms.keys().all(|(m, n)| m + n == self.degree)
    }

    /// No term carries a power of `z̄`.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|&(_, n)| n == 0)
    }

    /// Max absolute coefficient.
    pub fn norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex) -> Self {
        let mut out = Self::from_terms(self.terms.iter().map(|(&k, &c)| (k, c * s))).expect("finite");
        out.degree = self.degree;
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::from_terms(self.terms.iter().chain(other.terms.iter()).map(|(&k, &c)| (k, c)))
            .expect("finite");
        out.degree = self.degree.max(other.degree);
        out
    }

    /// `p(z, z̄)`.
    pub fn eval(&self, z: Complex) -> Complex {
        let zb = z.conj();
        self.terms.iter().map(|(&(m, n), &c)| c * upow(z, m) * upow(zb, n)).sum()
    }

    /// `p(z, w)` with `w` independent of `z`.
    pub fn eval2(&self, z: Complex, w: Complex) -> Complex {
        self.terms.iter().map(|(&(m, n), &c)| c * upow(z, m) * upow(w, n)).sum()
    }

    /// `∂/∂z̄`: `c z^m z̄^n ↦ c·n z^m z̄^{n-1}`.
    pub fn wirtinger_dbar(&self) -> Self {
        let out = Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(_, n), _)| n > 0)
                .map(|(&(m, n), &c)| ((m, n - 1), c * n as f64)),
        )
        .expect("finite");
        Self { degree: self.degree.saturating_sub(1), ..out }
    }

    /// `∂/∂z`: `c z^m z̄^n ↦ c·m z^{m-1} z̄^n`.
    pub fn wirtinger_d(&self) -> Self {
        let out = Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(m, _), _)| m > 0)
                .map(|(&(m, n), &c)| ((m - 1, n), c * m as f64)),
        )
        .expect("finite");
        Self { degree: self.degree.saturating_sub(1), ..out }
    }

    /// One-variable polynomial obtained by substituting `z̄ = 1`.
    pub fn restrict_conj_one(&self) -> ComplexPoly {
        let deg = self.terms.keys().map(|&(m, _)| m).max().unwrap_or(0) as usize;
        let mut c = vec![Complex::new(0.0, 0.0); deg + 1];
        for (&(m, _), &v) in &self.terms {
            c[m as usize] += v;
        }
        ComplexPoly::new(c)
    }

    pub fn to_laurent(&self) -> LaurentExpr {
        LaurentExpr::from_terms(self.terms.iter().map(|(&(m, n), &c)| ((m as i32, n as i32), c)))
    }
}

/// Finite sum `Σ c[m,n] z^m z̄^n` with integer (possibly negative) exponents.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "LaurentRepr", into = "LaurentRepr")]
pub struct LaurentExpr {
    terms: BTreeMap<(i32, i32), Complex>,
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    terms: Vec<(i32, i32, Complex)>,
}

impl From<LaurentExpr> for LaurentRepr {
    fn from(e: LaurentExpr) -> Self {
        Self { terms: e.terms.into_iter().map(|((m, n), c)| (m, n, c)).collect() }
    }
}

impl From<LaurentRepr> for LaurentExpr {
    fn from(r: LaurentRepr) -> Self {
        LaurentExpr::from_terms(r.terms.into_iter().map(|(m, n, c)| ((m, n), c)))
    }
}

impl LaurentExpr {
    pub fn from_terms<I: IntoIterator<Item = ((i32, i32), Complex)>>(terms: I) -> Self {
        let mut map: BTreeMap<(i32, i32), Complex> = BTreeMap::new();
        for (k, c) in terms {
            *map.entry(k).or_insert(Complex::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| *c != Complex::new(0.0, 0.0));
        Self { terms: map }
    }

    pub fn terms(&self) -> &BTreeMap<(i32, i32), Complex> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies by `z^a z̄^b`.
    pub fn shift(&self, a: i32, b: i32) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(m, n), &c)| ((m + a, n + b), c)))
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self::from_terms(self.terms.iter().map(|(&k, &c)| (k, c * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).map(|(&k, &c)| (k, c)))
    }

    /// Complex conjugate as a function of `z`: `c z^m z̄^n ↦ c̄ z^n z̄^m`.
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(m, n), &c)| ((n, m), c.conj())))
    }

    /// `∂²/∂z∂z̄`: `c z^m z̄^n ↦ c·m·n z^{m-1} z̄^{n-1}`.
    pub fn dz_dzbar(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&(m, n), _)| m != 0 && n != 0)
                .map(|(&(m, n), &c)| ((m - 1, n - 1), c * (m as f64 * n as f64))),
        )
    }

    /// Value at `z` (requires `z ≠ 0` when negative exponents are present).
    pub fn eval(&self, z: Complex) -> Complex {
        let zb = z.conj();
        self.terms.iter().map(|(&(m, n), &c)| c * ipow(z, m) * ipow(zb, n)).sum()
    }
}

/// One-variable complex polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoly {
    pub coeffs: Vec<Complex>,
}

impl ComplexPoly {
    /// Trailing (high-order) exact zeros are trimmed.
    pub fn new(mut coeffs: Vec<Complex>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == Complex::new(0.0, 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex]) -> Self {
        let mut c = vec![Complex::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex::new(0.0, 0.0); c.len() + 1];
            for (i, &v) in c.iter().enumerate() {
                next[i + 1] += v;
                next[i] -= v * r;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex::new(0.0, 0.0))
    }

    /// Max absolute coefficient.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `Σ |c_n| |z|^n`, the natural scale of rounding errors in `eval`.
    pub fn eval_scale(&self, z: Complex) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![Complex::new(0.0, 0.0)]);
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}
