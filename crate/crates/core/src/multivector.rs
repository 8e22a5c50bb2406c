//! Sparse multivectors over `Cl(p,q)` and the algebra operations on them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::blade::{involution_sign, product_sign, reversion_sign, BladeMask};
use crate::error::{Error, Result};
use crate::linalg;
use crate::par::{self, Exec};
use crate::signature::Signature;
use crate::tol;

/// Products with at least this many term pairs go through the dense gather kernel.
const GATHER_MIN_PAIRS: usize = 1 << 12;
/// Output blades per work unit in the gather kernel.
const GATHER_CHUNK: usize = 64;

/// Element of `Cl(p,q)` stored as coefficients of basis blades, sorted by mask.
///
/// Zero coefficients are never stored. Coefficients are complex; in a real
/// algebra every imaginary part is exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    sig: Signature,
    terms: Vec<(BladeMask, Complex64)>,
}

impl Multivector {
    pub fn zero(sig: Signature) -> Self {
        Multivector { sig, terms: Vec::new() }
    }

    pub fn scalar(sig: Signature, value: f64) -> Self {
        Self::blade_scaled(sig, BladeMask::IDENTITY, Complex64::new(value, 0.0))
    }

    /// The identity element `e`.
    pub fn one(sig: Signature) -> Self {
        Self::scalar(sig, 1.0)
    }

    pub fn blade(sig: Signature, mask: BladeMask) -> Self {
        Self::blade_scaled(sig, mask, Complex64::new(1.0, 0.0))
    }

    fn blade_scaled(sig: Signature, mask: BladeMask, c: Complex64) -> Self {
        assert!(mask.fits(sig.n()), "blade {mask} outside {sig}");
        let terms = if c == Complex64::new(0.0, 0.0) {
            Vec::new()
        } else {
            vec![(mask, c)]
        };
        Multivector { sig, terms }
    }

    /// Generator `e^a`, 1-based.
    pub fn basis(sig: Signature, a: usize) -> Self {
        Self::blade(sig, BladeMask::generator(a))
    }

    /// The pseudoscalar `e^{1...n}`.
    pub fn pseudoscalar(sig: Signature) -> Self {
        Self::blade(sig, BladeMask::full(sig.n()))
    }

    /// Grade-1 element `sum_a v[a-1] e^a`.
    pub fn vector(sig: Signature, components: &[f64]) -> Result<Self> {
        if components.len() != sig.n() {
            return Err(Error::DimensionMismatch {
                expected: sig.n(),
                got: components.len(),
            });
        }
        Self::from_terms(
            sig,
            components
                .iter()
                .enumerate()
                .map(|(i, &c)| (BladeMask::generator(i + 1), Complex64::new(c, 0.0))),
        )
    }

    /// Sums the given terms; duplicates are combined and exact zeros dropped.
    pub fn from_terms<I>(sig: Signature, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BladeMask, Complex64)>,
    {
        let mut dense = vec![Complex64::new(0.0, 0.0); sig.dim()];
        for (m, c) in terms {
            if !m.fits(sig.n()) {
                return Err(Error::IndexOutOfRange {
                    index: 32 - m.bits().leading_zeros() as usize,
                    n: sig.n(),
                });
            }
            if !sig.is_complex() && c.im != 0.0 {
                return Err(Error::FieldMismatch);
            }
            dense[m.bits() as usize] += c;
        }
        Ok(Self::from_dense(sig, &dense, 0.0))
    }

    /// Builds from a dense coefficient vector indexed by mask, pruning entries
    /// at or below `rel_tol` times the largest magnitude.
    pub(crate) fn from_dense(sig: Signature, dense: &[Complex64], rel_tol: f64) -> Self {
        debug_assert_eq!(dense.len(), sig.dim());
        let max = dense.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = rel_tol * max;
        let terms = dense
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > cut)
            .map(|(m, &c)| (BladeMask(m as u32), c))
            .collect();
        Multivector { sig, terms }
    }

    /// Like `from_dense`, but entries are also dropped when tiny relative to `scale`.
    pub(crate) fn from_dense_scaled(
        sig: Signature,
        dense: &[Complex64],
        rel_tol: f64,
        scale: f64,
    ) -> Self {
        let max = dense.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = rel_tol * max.max(scale);
        let terms = dense
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > cut)
            .map(|(m, &c)| (BladeMask(m as u32), c))
            .collect();
        Multivector { sig, terms }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn terms(&self) -> &[(BladeMask, Complex64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mask: BladeMask) -> Complex64 {
        match self.terms.binary_search_by_key(&mask, |t| t.0) {
            Ok(i) => self.terms[i].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut d = vec![Complex64::new(0.0, 0.0); self.sig.dim()];
        for &(m, c) in &self.terms {
            d[m.bits() as usize] = c;
        }
        d
    }

    /// Largest coefficient magnitude.
    pub fn norm_inf(&self) -> f64 {
        self.terms.iter().map(|t| t.1.norm()).fold(0.0, f64::max)
    }

    /// Sup-norm distance to `other`.
    pub fn distance(&self, other: &Multivector) -> f64 {
        let (a, b) = (self.to_dense(), other.to_dense());
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Removes coefficients at or below `rel_tol` times the largest one.
    pub fn pruned(&self, rel_tol: f64) -> Multivector {
        let cut = rel_tol * self.norm_inf();
        Multivector {
            sig: self.sig,
            terms: self.terms.iter().copied().filter(|t| t.1.norm() > cut).collect(),
        }
    }

    fn check_same(&self, other: &Multivector) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(
                self.sig.to_string(),
                other.sig.to_string(),
            ));
        }
        Ok(())
    }

    fn combine(&self, other: &Multivector, sign: f64) -> Multivector {
        let mut dense = self.to_dense();
        for &(m, c) in &other.terms {
            dense[m.bits() as usize] += c * sign;
        }
        Self::from_dense(self.sig, &dense, tol::ZERO)
    }

    pub fn try_add(&self, other: &Multivector) -> Result<Multivector> {
        self.check_same(other)?;
        Ok(self.combine(other, 1.0))
    }

    pub fn try_sub(&self, other: &Multivector) -> Result<Multivector> {
        self.check_same(other)?;
        Ok(self.combine(other, -1.0))
    }

    pub fn scale(&self, lambda: f64) -> Multivector {
        self.map_terms(|_, c| c * lambda)
    }

    /// Scales by a complex number; only allowed in complex algebras unless `lambda` is real.
    pub fn scale_complex(&self, lambda: Complex64) -> Result<Multivector> {
        if !self.sig.is_complex() && lambda.im != 0.0 {
            return Err(Error::FieldMismatch);
        }
        Ok(self.map_terms(|_, c| c * lambda))
    }

    fn map_terms(&self, f: impl Fn(BladeMask, Complex64) -> Complex64) -> Multivector {
        Multivector {
            sig: self.sig,
            terms: self
                .terms
                .iter()
                .map(|&(m, c)| (m, f(m, c)))
                .filter(|t| t.1 != Complex64::new(0.0, 0.0))
                .collect(),
        }
    }

    /// Clifford product.
    pub fn try_mul(&self, other: &Multivector) -> Result<Multivector> {
        self.try_mul_with(other, Exec::default())
    }

    pub fn try_mul_with(&self, other: &Multivector, exec: Exec) -> Result<Multivector> {
        self.check_same(other)?;
        let dense = mul_dense(exec, &self.sig, &self.terms, &other.terms);
        Ok(Self::from_dense(self.sig, &dense, tol::ZERO))
    }

    /// `<U>_k`.
    pub fn grade_project(&self, k: usize) -> Result<Multivector> {
        if k > self.sig.n() {
            return Err(Error::GradeOutOfRange { k, n: self.sig.n() });
        }
        Ok(self.filter(|m| m.grade() == k))
    }

    fn filter(&self, keep: impl Fn(BladeMask) -> bool) -> Multivector {
        Multivector {
            sig: self.sig,
            terms: self.terms.iter().copied().filter(|t| keep(t.0)).collect(),
        }
    }

    /// `U^` : grade-k part times `(-1)^k`.
    pub fn grade_involution(&self) -> Multivector {
        self.map_terms(|m, c| c * involution_sign(m.grade()))
    }

    /// `U~` : grade-k part times `(-1)^{k(k-1)/2}`.
    pub fn reversion(&self) -> Multivector {
        self.map_terms(|m, c| c * reversion_sign(m.grade()))
    }

    pub fn even_part(&self) -> Multivector {
        self.filter(|m| m.is_even())
    }

    pub fn odd_part(&self) -> Multivector {
        self.filter(|m| !m.is_even())
    }

    /// `(even, odd)` with `even + odd = U`.
    pub fn parity_decompose(&self) -> (Multivector, Multivector) {
        (self.even_part(), self.odd_part())
    }

    /// Coefficient of `e`.
    pub fn trace(&self) -> Complex64 {
        self.coeff(BladeMask::IDENTITY)
    }

    /// Inverse obtained by solving `L(U) x = e` in the left-regular representation.
    pub fn inverse(&self) -> Result<Multivector> {
        let dense = linalg::solve_left_regular(self, tol::ZERO)?;
        Ok(Self::from_dense(self.sig, &dense, tol::ZERO))
    }

    /// Whether the left-regular matrix is numerically nonsingular.
    pub fn is_invertible(&self) -> bool {
        !self.is_zero() && linalg::singular_ratio_of(self) > tol::ZERO
    }

    /// `sqrt(sum |c|^2)` over the coefficient vector.
    pub fn norm2(&self) -> f64 {
        self.terms.iter().map(|t| t.1.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Relative distance of `other` from the line spanned by `self`:
    /// `|other - lambda self| / |other|` with the least-squares `lambda`.
    pub fn colinearity_residual(&self, other: &Multivector) -> f64 {
        let (u, v) = (self.to_dense(), other.to_dense());
        let uu: f64 = u.iter().map(|x| x.norm_sqr()).sum();
        let vv: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if uu == 0.0 || vv == 0.0 {
            return if uu == vv { 0.0 } else { 1.0 };
        }
        let uv: Complex64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
        let lambda = uv / uu;
        let r: f64 = u
            .iter()
            .zip(&v)
            .map(|(x, y)| (y - lambda * x).norm_sqr())
            .sum();
        (r / vv).sqrt()
    }
}

/// Dense coefficients of the product of two sorted term lists.
///
/// For each output blade the contributions are accumulated in the order of the
/// left factor's terms, whichever kernel runs, so the result is bit-identical
/// across kernels and thread counts.
pub(crate) fn mul_dense(
    exec: Exec,
    sig: &Signature,
    u: &[(BladeMask, Complex64)],
    v: &[(BladeMask, Complex64)],
) -> Vec<Complex64> {
    let dim = sig.dim();
    let neg = sig.negative_mask();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    let pairs = u.len() * v.len();
    if pairs < GATHER_MIN_PAIRS || v.len() * 4 < dim {
        for &(a, x) in u {
            for &(b, y) in v {
                let s = product_sign(a.0, b.0, neg);
                out[(a.0 ^ b.0) as usize] += (x * y) * s;
            }
        }
        return out;
    }
    let mut vd = vec![Complex64::new(0.0, 0.0); dim];
    for &(b, y) in v {
        vd[b.0 as usize] = y;
    }
    par::for_each_chunk(exec, &mut out, GATHER_CHUNK, |chunk, offset| {
        for (j, slot) in chunk.iter_mut().enumerate() {
            let c = (offset + j) as u32;
            let mut acc = Complex64::new(0.0, 0.0);
            for &(a, x) in u {
                let b = a.0 ^ c;
                let y = vd[b as usize];
                if y != Complex64::new(0.0, 0.0) {
                    acc += (x * y) * product_sign(a.0, b, neg);
                }
            }
            *slot = acc;
        }
    });
    out
}

/// Blades spanning the center, found by testing commutation with every generator.
pub fn center_basis(sig: &Signature) -> Vec<BladeMask> {
    let neg = sig.negative_mask();
    (0..sig.dim() as u32)
        .filter(|&m| {
            (0..sig.n()).all(|i| {
                let g = 1u32 << i;
                product_sign(m, g, neg) == product_sign(g, m, neg)
            })
        })
        .map(BladeMask)
        .collect()
}

impl<'a> Add for &'a Multivector {
    type Output = Multivector;
    fn add(self, rhs: &'a Multivector) -> Multivector {
        self.try_add(rhs).expect("signature mismatch in +")
    }
}

impl<'a> Sub for &'a Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &'a Multivector) -> Multivector {
        self.try_sub(rhs).expect("signature mismatch in -")
    }
}

impl<'a> Mul for &'a Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &'a Multivector) -> Multivector {
        self.try_mul(rhs).expect("signature mismatch in *")
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            if m != BladeMask::IDENTITY {
                write!(f, "*{m}")?;
            } else {
                write!(f, "*e")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(p: usize, q: usize) -> Signature {
        Signature::real(p, q).unwrap()
    }

    fn e(s: Signature, idx: &[usize]) -> Multivector {
        Multivector::blade(s, BladeMask::from_indices(idx, s.n()).unwrap())
    }

    #[test]
    fn generator_squares() {
        let s = sig(1, 1);
        assert_eq!(&e(s, &[1]) * &e(s, &[1]), Multivector::one(s));
        assert_eq!(&e(s, &[2]) * &e(s, &[2]), Multivector::scalar(s, -1.0));
    }

    #[test]
    fn bivector_squares() {
        let s = sig(2, 0);
        assert_eq!(&e(s, &[1, 2]) * &e(s, &[1, 2]), Multivector::scalar(s, -1.0));
        let s = sig(1, 1);
        assert_eq!(&e(s, &[1, 2]) * &e(s, &[1, 2]), Multivector::one(s));
    }

    #[test]
    fn add_sub_scale() {
        let s = sig(2, 1);
        let one = Multivector::one(s);
        assert!((&one + &one.scale(-1.0)).is_zero());
        let e1 = e(s, &[1]);
        assert_eq!(e1.scale(2.0), &e1 + &e1);
        assert_eq!(e1.scale(2.0).coeff(BladeMask(1)), Complex64::new(2.0, 0.0));
        assert!(e1.scale_complex(Complex64::new(0.0, 1.0)).is_err());
        let other = Multivector::one(sig(3, 0));
        assert!(e1.try_add(&other).is_err());
        assert!(e1.try_mul(&other).is_err());
    }

    #[test]
    fn grades_and_trace() {
        let s = sig(2, 0);
        let u = &Multivector::one(s) + &e(s, &[1, 2]).scale(3.0);
        assert_eq!(u.grade_project(2).unwrap(), e(s, &[1, 2]).scale(3.0));
        assert!(e(s, &[1]).grade_project(0).unwrap().is_zero());
        assert!(u.grade_project(3).is_err());
        assert_eq!(Multivector::one(s).trace(), Complex64::new(1.0, 0.0));
        assert_eq!(e(s, &[1, 2]).trace(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn involutions() {
        let s = sig(3, 0);
        assert_eq!(e(s, &[1]).grade_involution(), e(s, &[1]).scale(-1.0));
        assert_eq!(e(s, &[1, 2]).reversion(), e(s, &[1, 2]).scale(-1.0));
        assert_eq!(e(s, &[1, 2, 3]).reversion(), e(s, &[1, 2, 3]).scale(-1.0));
    }

    #[test]
    fn parity_split() {
        let s = sig(2, 0);
        let u = &Multivector::one(s) + &e(s, &[1]);
        assert_eq!(u.parity_decompose(), (Multivector::one(s), e(s, &[1])));
        let (ev, od) = e(s, &[1, 2]).parity_decompose();
        assert_eq!(ev, e(s, &[1, 2]));
        assert!(od.is_zero());
    }

    #[test]
    fn inverse_examples() {
        let s = sig(2, 0);
        assert_eq!(Multivector::one(s).inverse().unwrap(), Multivector::one(s));
        let inv = e(s, &[1, 2]).inverse().unwrap();
        assert!(inv.distance(&e(s, &[1, 2]).scale(-1.0)) < 1e-12);
        let s = sig(1, 1);
        assert!(e(s, &[1]).inverse().unwrap().distance(&e(s, &[1])) < 1e-12);
        // 1 + e^1 is a zero divisor in Cl(1,1): (1 + e^1)(1 - e^1) = 0.
        let zd = &Multivector::one(s) + &e(s, &[1]);
        assert!(matches!(zd.inverse(), Err(Error::NonInvertible { .. })));
        assert!(Multivector::zero(s).inverse().is_err());
    }

    #[test]
    fn center_small_cases() {
        assert_eq!(center_basis(&sig(2, 0)), vec![BladeMask(0)]);
        assert_eq!(center_basis(&sig(3, 0)), vec![BladeMask(0), BladeMask(0b111)]);
        assert_eq!(center_basis(&sig(1, 0)), vec![BladeMask(0), BladeMask(1)]);
    }

    #[test]
    fn gather_and_scatter_kernels_agree_bitwise() {
        let s = sig(4, 3);
        let dense = |k: u32| {
            Multivector::from_terms(
                s,
                (0..s.dim() as u32).map(|m| {
                    let x = (m.wrapping_mul(2654435761u32).wrapping_add(k) % 1000) as f64 / 500.0 - 1.0;
                    (BladeMask(m), Complex64::new(x, 0.0))
                }),
            )
            .unwrap()
        };
        let (u, v) = (dense(1), dense(7));
        let gathered = mul_dense(Exec::Parallel, &s, u.terms(), v.terms());
        let sequential = mul_dense(Exec::Sequential, &s, u.terms(), v.terms());
        let mut scattered = vec![Complex64::new(0.0, 0.0); s.dim()];
        for &(a, x) in u.terms() {
            for &(b, y) in v.terms() {
                scattered[(a.0 ^ b.0) as usize] += (x * y) * product_sign(a.0, b.0, s.negative_mask());
            }
        }
        assert_eq!(gathered, scattered);
        assert_eq!(sequential, scattered);
    }

    #[test]
    fn real_field_rejects_imaginary_terms() {
        let s = sig(1, 0);
        let r = Multivector::from_terms(s, [(BladeMask(0), Complex64::new(0.0, 1.0))]);
        assert_eq!(r, Err(Error::FieldMismatch));
        let c = Signature::complex(1, 0).unwrap();
        assert!(Multivector::from_terms(c, [(BladeMask(0), Complex64::new(0.0, 1.0))]).is_ok());
    }
}
