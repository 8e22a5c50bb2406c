//! JSON documents for multivectors, orthogonal matrices, dense matrices and
//! lift results. Field order is fixed, so output is deterministic.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blade::BladeMask;
use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::orthogonal::{ComponentTag, OrthogonalMatrix};
use crate::rep::DenseMatrix;
use crate::signature::{Field, Signature};
use crate::spin::{GroupTag, LiftResult, NormType};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    /// Sorted 1-based generator indices; empty for the scalar blade.
    pub index: Vec<usize>,
    pub re: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultivectorDoc {
    pub p: usize,
    pub q: usize,
    #[serde(default = "real_field")]
    pub field: Field,
    pub terms: Vec<TermDoc>,
}

fn real_field() -> Field {
    Field::Real
}

impl From<&Multivector> for MultivectorDoc {
    fn from(u: &Multivector) -> Self {
        let sig = u.signature();
        let complex = sig.is_complex();
        MultivectorDoc {
            p: sig.p(),
            q: sig.q(),
            field: sig.field(),
            terms: u
                .terms()
                .iter()
                .map(|&(m, c)| TermDoc {
                    index: m.indices(),
                    re: c.re,
                    im: complex.then_some(c.im),
                })
                .collect(),
        }
    }
}

impl TryFrom<&MultivectorDoc> for Multivector {
    type Error = Error;

    fn try_from(doc: &MultivectorDoc) -> Result<Multivector> {
        let sig = Signature::new(doc.p, doc.q, doc.field)?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in &doc.terms {
            if t.index.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::BadMultiIndex(t.index.clone()));
            }
            let mask = BladeMask::from_indices(&t.index, sig.n())?;
            terms.push((mask, Complex64::new(t.re, t.im.unwrap_or(0.0))));
        }
        Multivector::from_terms(sig, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrthogonalDoc {
    pub p: usize,
    pub q: usize,
    /// Row-major `p^a_b`.
    pub matrix: Vec<Vec<f64>>,
}

impl From<&OrthogonalMatrix> for OrthogonalDoc {
    fn from(m: &OrthogonalMatrix) -> Self {
        let sig = m.signature();
        OrthogonalDoc {
            p: sig.p(),
            q: sig.q(),
            matrix: m.rows(),
        }
    }
}

impl OrthogonalDoc {
    pub fn to_matrix(&self, tolerance: f64) -> Result<OrthogonalMatrix> {
        let sig = Signature::real(self.p, self.q)?;
        let n = sig.n();
        if self.matrix.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.matrix.len(),
            });
        }
        if let Some(r) = self.matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.len(),
            });
        }
        let entries = nalgebra::DMatrix::from_fn(n, n, |i, j| self.matrix[i][j]);
        OrthogonalMatrix::with_tolerance(sig, entries, tolerance)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenseMatrixDoc {
    pub order: usize,
    pub complex: bool,
    pub rows: Vec<Vec<ComplexDoc>>,
}

impl From<&DenseMatrix> for DenseMatrixDoc {
    fn from(m: &DenseMatrix) -> Self {
        DenseMatrixDoc {
            order: m.order(),
            complex: m.is_complex(),
            rows: m
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(|c| ComplexDoc { re: c.re, im: c.im }).collect())
                .collect(),
        }
    }
}

impl TryFrom<&DenseMatrixDoc> for DenseMatrix {
    type Error = Error;

    fn try_from(doc: &DenseMatrixDoc) -> Result<DenseMatrix> {
        if doc.rows.len() != doc.order {
            return Err(Error::DimensionMismatch {
                expected: doc.order,
                got: doc.rows.len(),
            });
        }
        let rows: Vec<Vec<Complex64>> = doc
            .rows
            .iter()
            .map(|r| r.iter().map(|c| Complex64::new(c.re, c.im)).collect())
            .collect();
        DenseMatrix::from_rows(&rows)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftDoc {
    pub p: usize,
    pub q: usize,
    pub t_plus: MultivectorDoc,
    pub t_minus: MultivectorDoc,
    pub norm_type: NormType,
    pub groups: Vec<GroupTag>,
    pub component: ComponentTag,
    pub pin_component: GroupTag,
    pub residual: f64,
}

impl From<&LiftResult> for LiftDoc {
    fn from(r: &LiftResult) -> Self {
        let sig = r.t_plus.signature();
        LiftDoc {
            p: sig.p(),
            q: sig.q(),
            t_plus: (&r.t_plus).into(),
            t_minus: (&r.t_minus).into(),
            norm_type: r.norm_type,
            groups: r.membership.groups.clone(),
            component: r.component,
            pin_component: r.membership.component,
            residual: r.residual,
        }
    }
}

pub fn multivector_to_json(u: &Multivector) -> String {
    to_pretty(&MultivectorDoc::from(u))
}

pub fn multivector_from_json(text: &str) -> Result<Multivector> {
    let doc: MultivectorDoc = serde_json::from_str(text)?;
    Multivector::try_from(&doc)
}

pub fn orthogonal_to_json(m: &OrthogonalMatrix) -> String {
    to_pretty(&OrthogonalDoc::from(m))
}

pub fn orthogonal_from_json(text: &str, tolerance: f64) -> Result<OrthogonalMatrix> {
    let doc: OrthogonalDoc = serde_json::from_str(text)?;
    doc.to_matrix(tolerance)
}

pub fn dense_to_json(m: &DenseMatrix) -> String {
    to_pretty(&DenseMatrixDoc::from(m))
}

pub fn dense_from_json(text: &str) -> Result<DenseMatrix> {
    let doc: DenseMatrixDoc = serde_json::from_str(text)?;
    DenseMatrix::try_from(&doc)
}

pub fn lift_to_json(r: &LiftResult) -> String {
    to_pretty(&LiftDoc::from(r))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multivector_round_trip() {
        let sig = Signature::complex(1, 2).unwrap();
        let u = Multivector::from_terms(
            sig,
            [
                (BladeMask::IDENTITY, Complex64::new(0.1, -3.0)),
                (BladeMask(0b101), Complex64::new(1.0 / 3.0, 0.0)),
            ],
        )
        .unwrap();
        let text = multivector_to_json(&u);
        assert_eq!(multivector_from_json(&text).unwrap(), u);
        assert_eq!(multivector_to_json(&multivector_from_json(&text).unwrap()), text);
    }

    #[test]
    fn real_documents_omit_imaginary_parts() {
        let sig = Signature::real(2, 0).unwrap();
        let text = multivector_to_json(&Multivector::basis(sig, 2));
        assert!(!text.contains("im"));
        assert!(text.contains("\"field\": \"real\""));
    }

    #[test]
    fn rejects_bad_documents() {
        let bad_index = r#"{"p":2,"q":0,"terms":[{"index":[2,1],"re":1.0}]}"#;
        assert!(matches!(multivector_from_json(bad_index), Err(Error::BadMultiIndex(_))));
        let out_of_range = r#"{"p":2,"q":0,"terms":[{"index":[3],"re":1.0}]}"#;
        assert!(multivector_from_json(out_of_range).is_err());
        let imaginary = r#"{"p":2,"q":0,"field":"real","terms":[{"index":[],"re":1.0,"im":1.0}]}"#;
        assert_eq!(multivector_from_json(imaginary), Err(Error::FieldMismatch));
        assert!(matches!(multivector_from_json("{"), Err(Error::Json(_))));
    }

    #[test]
    fn orthogonal_round_trip() {
        let sig = Signature::real(1, 1).unwrap();
        let m = OrthogonalMatrix::minus_eta(sig);
        let text = orthogonal_to_json(&m);
        assert_eq!(orthogonal_from_json(&text, 1e-8).unwrap(), m);
        let skew = r#"{"p":1,"q":1,"matrix":[[1.0,1.0],[0.0,1.0]]}"#;
        assert!(matches!(orthogonal_from_json(skew, 1e-8), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn dense_round_trip() {
        let m = DenseMatrix::pauli(2);
        let text = dense_to_json(&m);
        assert!(text.contains("\"complex\": true"));
        assert_eq!(dense_from_json(&text).unwrap(), m);
    }
}
