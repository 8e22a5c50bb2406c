//! Dense linear algebra behind inversion and invertibility tests.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

use crate::blade::product_sign;
use crate::error::{Error, Result};
use crate::multivector::Multivector;

/// Left-regular matrix: column `b` holds the coefficients of `U e^B`.
pub(crate) fn left_regular_complex(u: &Multivector) -> DMatrix<Complex64> {
    let sig = u.signature();
    let dim = sig.dim();
    let neg = sig.negative_mask();
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for b in 0..dim as u32 {
        for &(a, x) in u.terms() {
            m[((a.0 ^ b) as usize, b as usize)] += x * product_sign(a.0, b, neg);
        }
    }
    m
}

pub(crate) fn left_regular_real(u: &Multivector) -> DMatrix<f64> {
    let sig = u.signature();
    let dim = sig.dim();
    let neg = sig.negative_mask();
    let mut m = DMatrix::zeros(dim, dim);
    for b in 0..dim as u32 {
        for &(a, x) in u.terms() {
            m[((a.0 ^ b) as usize, b as usize)] += x.re * product_sign(a.0, b, neg);
        }
    }
    m
}

/// `sigma_min / sigma_max`, or 0 for the zero matrix.
pub(crate) fn singular_ratio<T>(m: &DMatrix<T>) -> f64
where
    T: ComplexField<RealField = f64>,
{
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    sv.iter().copied().fold(f64::INFINITY, f64::min) / max
}

pub(crate) fn singular_ratio_of(u: &Multivector) -> f64 {
    if u.signature().is_complex() {
        singular_ratio(&left_regular_complex(u))
    } else {
        singular_ratio(&left_regular_real(u))
    }
}

/// Partial-pivot solve after a singular-value test against `rel_tol`.
pub(crate) fn solve_checked<T>(m: DMatrix<T>, rhs: DVector<T>, rel_tol: f64) -> Result<DVector<T>>
where
    T: ComplexField<RealField = f64>,
{
    let ratio = singular_ratio(&m);
    if ratio <= rel_tol {
        return Err(Error::NonInvertible { ratio });
    }
    m.lu().solve(&rhs).ok_or(Error::NonInvertible { ratio })
}

/// Dense coefficients of `U^{-1}`.
pub(crate) fn solve_left_regular(u: &Multivector, rel_tol: f64) -> Result<Vec<Complex64>> {
    let dim = u.signature().dim();
    if u.is_zero() {
        return Err(Error::NonInvertible { ratio: 0.0 });
    }
    if u.signature().is_complex() {
        let mut rhs = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        rhs[0] = Complex64::new(1.0, 0.0);
        let x = solve_checked(left_regular_complex(u), rhs, rel_tol)?;
        Ok(x.iter().copied().collect())
    } else {
        let mut rhs = DVector::zeros(dim);
        rhs[0] = 1.0;
        let x = solve_checked(left_regular_real(u), rhs, rel_tol)?;
        Ok(x.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }
}

/// Dimension of the numerical null space: singular values at or below
/// `rel_tol * sigma_max` (all of them when the matrix vanishes).
pub(crate) fn nullity<T>(m: &DMatrix<T>, rel_tol: f64) -> usize
where
    T: ComplexField<RealField = f64>,
{
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let rank = if max == 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > rel_tol * max).count()
    };
    m.ncols() - rank
}
