//! Pseudo-orthogonal matrices `P^T eta P = eta` and their connected components.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signature::Signature;
use crate::tol;

/// Connected component of `O(p,q)`.
///
/// When `p = 0` or `q = 0` one of the diagonal minors is empty (equal to 1)
/// and only two of the four tags occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentTag {
    /// Orthochronous and orthochorous: the identity component.
    #[serde(rename = "SO_up_down")]
    SoUpDown,
    /// Orthochronous, reverses parity.
    #[serde(rename = "O_up_prime")]
    OUpPrime,
    /// Orthochorous, reverses time orientation.
    #[serde(rename = "O_down_prime")]
    ODownPrime,
    /// Determinant one, reverses both.
    #[serde(rename = "SO_prime")]
    SoPrime,
}

impl ComponentTag {
    pub const ALL: [ComponentTag; 4] = [
        ComponentTag::SoUpDown,
        ComponentTag::OUpPrime,
        ComponentTag::ODownPrime,
        ComponentTag::SoPrime,
    ];

    pub fn from_orientations(orthochronous: bool, orthochorous: bool) -> Self {
        match (orthochronous, orthochorous) {
            (true, true) => ComponentTag::SoUpDown,
            (true, false) => ComponentTag::OUpPrime,
            (false, true) => ComponentTag::ODownPrime,
            (false, false) => ComponentTag::SoPrime,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ComponentTag::SoUpDown => "SO_up_down",
            ComponentTag::OUpPrime => "O_up_prime",
            ComponentTag::ODownPrime => "O_down_prime",
            ComponentTag::SoPrime => "SO_prime",
        }
    }

    pub fn determinant_sign(self) -> f64 {
        match self {
            ComponentTag::SoUpDown | ComponentTag::SoPrime => 1.0,
            _ => -1.0,
        }
    }
}

impl fmt::Display for ComponentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ComponentTag::SoUpDown => "SO↑↓",
            ComponentTag::OUpPrime => "O↑′",
            ComponentTag::ODownPrime => "O↓′",
            ComponentTag::SoPrime => "SO′",
        };
        f.write_str(s)
    }
}

/// Real `n x n` matrix `P = ||p^a_b||` (row `a`, column `b`) in `O(p,q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMatrix {
    sig: Signature,
    entries: DMatrix<f64>,
}

impl OrthogonalMatrix {
    /// Validates `|P^T eta P - eta|_inf <= 1e-8`.
    pub fn new(sig: Signature, entries: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(sig, entries, tol::REL)
    }

    pub fn with_tolerance(sig: Signature, entries: DMatrix<f64>, tolerance: f64) -> Result<Self> {
        let n = sig.n();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: entries.nrows().max(entries.ncols()),
            });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotOrthogonal { residual: f64::INFINITY });
        }
        let residual = orthogonality_residual(&sig, &entries);
        if !(residual <= tolerance) {
            return Err(Error::NotOrthogonal { residual });
        }
        Ok(OrthogonalMatrix { sig, entries })
    }

    pub fn from_rows(sig: Signature, rows: &[Vec<f64>]) -> Result<Self> {
        let n = sig.n();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        Self::new(sig, DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(sig: Signature) -> Self {
        OrthogonalMatrix {
            sig,
            entries: DMatrix::identity(sig.n(), sig.n()),
        }
    }

    /// The metric `eta` itself (parity reversal).
    pub fn eta(sig: Signature) -> Self {
        let n = sig.n();
        OrthogonalMatrix {
            sig,
            entries: DMatrix::from_fn(n, n, |i, j| if i == j { sig.metric(i + 1) } else { 0.0 }),
        }
    }

    /// `-eta` (time reversal).
    pub fn minus_eta(sig: Signature) -> Self {
        Self::eta(sig).negated()
    }

    pub fn minus_identity(sig: Signature) -> Self {
        Self::identity(sig).negated()
    }

    fn negated(&self) -> Self {
        OrthogonalMatrix {
            sig: self.sig,
            entries: -&self.entries,
        }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// `p^a_b`, both indices 1-based.
    pub fn entry(&self, a: usize, b: usize) -> f64 {
        self.entries[(a - 1, b - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }

    /// Determinant of the leading `p x p` block (1 when `p = 0`).
    pub fn time_minor(&self) -> f64 {
        let p = self.sig.p();
        block_det(&self.entries, 0, p)
    }

    /// Determinant of the trailing `q x q` block (1 when `q = 0`).
    pub fn space_minor(&self) -> f64 {
        let (p, q) = (self.sig.p(), self.sig.q());
        block_det(&self.entries, p, q)
    }

    pub fn is_orthochronous(&self) -> bool {
        self.time_minor() > 0.0
    }

    pub fn is_orthochorous(&self) -> bool {
        self.space_minor() > 0.0
    }

    pub fn residual(&self) -> f64 {
        orthogonality_residual(&self.sig, &self.entries)
    }

    /// Matrix product `self * other` (not re-validated).
    pub fn compose(&self, other: &OrthogonalMatrix) -> OrthogonalMatrix {
        OrthogonalMatrix {
            sig: self.sig,
            entries: &self.entries * &other.entries,
        }
    }

    pub fn distance(&self, other: &OrthogonalMatrix) -> f64 {
        (&self.entries - &other.entries).amax()
    }
}

fn block_det(m: &DMatrix<f64>, start: usize, len: usize) -> f64 {
    if len == 0 {
        return 1.0;
    }
    m.view((start, start), (len, len)).clone_owned().determinant()
}

/// `|P^T eta P - eta|_inf`.
pub fn orthogonality_residual(sig: &Signature, p: &DMatrix<f64>) -> f64 {
    let n = sig.n();
    let eta = DMatrix::from_fn(n, n, |i, j| if i == j { sig.metric(i + 1) } else { 0.0 });
    (p.transpose() * &eta * p - eta).amax()
}

/// Component of `O(p,q)` from the signs of the two diagonal minors.
pub fn classify_orthogonal(p: &OrthogonalMatrix) -> ComponentTag {
    ComponentTag::from_orientations(p.is_orthochronous(), p.is_orthochorous())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_examples() {
        let s = Signature::real(1, 1).unwrap();
        assert_eq!(classify_orthogonal(&OrthogonalMatrix::identity(s)), ComponentTag::SoUpDown);
        let t = OrthogonalMatrix::from_rows(s, &[vec![-1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(classify_orthogonal(&t), ComponentTag::ODownPrime);
        let p = OrthogonalMatrix::from_rows(s, &[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert_eq!(classify_orthogonal(&p), ComponentTag::OUpPrime);
        assert_eq!(classify_orthogonal(&OrthogonalMatrix::minus_identity(s)), ComponentTag::SoPrime);
    }

    #[test]
    fn boost_is_identity_component() {
        let s = Signature::real(1, 1).unwrap();
        let (c, h) = (2.0f64.cosh(), 2.0f64.sinh());
        let b = OrthogonalMatrix::from_rows(s, &[vec![c, h], vec![h, c]]).unwrap();
        assert_eq!(classify_orthogonal(&b), ComponentTag::SoUpDown);
    }

    #[test]
    fn degenerate_signatures_collapse() {
        let s = Signature::real(2, 0).unwrap();
        let r = OrthogonalMatrix::from_rows(s, &[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert_eq!(classify_orthogonal(&r), ComponentTag::ODownPrime);
        assert_eq!(classify_orthogonal(&OrthogonalMatrix::minus_identity(s)), ComponentTag::SoUpDown);
        let s = Signature::real(0, 2).unwrap();
        assert_eq!(classify_orthogonal(&r.clone_with(s)), ComponentTag::OUpPrime);
    }

    #[test]
    fn rejects_non_orthogonal() {
        let s = Signature::real(1, 1).unwrap();
        let bad = OrthogonalMatrix::from_rows(s, &[vec![2.0, 0.0], vec![0.0, 1.0]]);
        assert!(matches!(bad, Err(Error::NotOrthogonal { .. })));
        assert!(OrthogonalMatrix::from_rows(s, &[vec![1.0]]).is_err());
    }

    impl OrthogonalMatrix {
        fn clone_with(&self, sig: Signature) -> OrthogonalMatrix {
            OrthogonalMatrix::new(sig, self.entries.clone()).unwrap()
        }
    }
}
