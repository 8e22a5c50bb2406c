//! Packaged reference checks and their runner.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::json::{DenseMatrixDoc, MultivectorDoc};
use crate::multivector::Multivector;
use crate::orthogonal::{classify_orthogonal, ComponentTag, OrthogonalMatrix};
use crate::pauli::Parity;
use crate::rep::{self, DenseMatrix, GammaRep};
use crate::signature::Signature;
use crate::spin::{self, GroupTag, NormType};
use crate::tol;

/// Golden vectors shipped with the crate.
pub const PACKAGED: &str = include_str!("../data/golden.json");

/// Coefficient tolerance for golden comparisons.
pub const COEFF_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    Trace {
        left: MultivectorDoc,
        right: MultivectorDoc,
    },
    Reversion {
        input: MultivectorDoc,
        expected: MultivectorDoc,
    },
    Classify {
        p: usize,
        q: usize,
        matrix: Vec<Vec<f64>>,
        expected: ComponentTag,
    },
    Project {
        input: MultivectorDoc,
        expected: Vec<Vec<f64>>,
    },
    /// `lift(matrix) = ±expected` with `group` among the memberships.
    Lift {
        p: usize,
        q: usize,
        matrix: Vec<Vec<f64>>,
        expected: MultivectorDoc,
        group: GroupTag,
    },
    Membership {
        input: MultivectorDoc,
        component: GroupTag,
        norm: NormType,
        twisted_norm: NormType,
        odd: bool,
    },
    GammaMatrices {
        p: usize,
        q: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected: Option<Vec<DenseMatrixDoc>>,
    },
    /// Pauli matrices against their negatives.
    PauliSign { expected_sign: i8 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenItem {
    pub name: String,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{status} {}", self.name)
        } else {
            format!("{status} {}: {}", self.name, self.detail)
        }
    }
}

fn fail(detail: impl Into<String>) -> Result<String> {
    Err(Error::Unsupported(detail.into()))
}

fn matrix(p: usize, q: usize, rows: &[Vec<f64>]) -> Result<OrthogonalMatrix> {
    OrthogonalMatrix::from_rows(Signature::real(p, q)?, rows)
}

fn rows_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.len() != y.len()) {
        return f64::INFINITY;
    }
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

impl Check {
    /// Runs the check; `Ok` carries a short summary.
    pub fn run(&self) -> Result<String> {
        match self {
            Check::Trace { left, right } => {
                let u = Multivector::try_from(left)?;
                let v = Multivector::try_from(right)?;
                let d = ((&u * &v).trace() - (&v * &u).trace()).norm();
                if d > COEFF_TOL {
                    return fail(format!("Tr(UV) - Tr(VU) = {d:e}"));
                }
                Ok(format!("|Tr(UV) - Tr(VU)| = {d:e}"))
            }
            Check::Reversion { input, expected } => {
                let got = Multivector::try_from(input)?.reversion();
                let want = Multivector::try_from(expected)?;
                if got.distance(&want) > COEFF_TOL {
                    return fail(format!("got {got}, expected {want}"));
                }
                Ok(got.to_string())
            }
            Check::Classify { p, q, matrix: m, expected } => {
                let got = classify_orthogonal(&matrix(*p, *q, m)?);
                if got != *expected {
                    return fail(format!("got {got}, expected {expected}"));
                }
                Ok(got.to_string())
            }
            Check::Project { input, expected } => {
                let got = spin::project(&Multivector::try_from(input)?)?;
                let d = rows_distance(&got.rows(), expected);
                if d > COEFF_TOL {
                    return fail(format!("got {:?}", got.rows()));
                }
                Ok(format!("{:?}", got.rows()))
            }
            Check::Lift { p, q, matrix: m, expected, group } => {
                let r = spin::lift(&matrix(*p, *q, m)?)?;
                let want = Multivector::try_from(expected)?;
                if !spin::equal_up_to_sign(&r.t_plus, &want, COEFF_TOL) {
                    return fail(format!("got T = {}, expected ±{want}", r.t_plus));
                }
                if !r.groups().contains(group) {
                    return fail(format!("{group} not among {:?}", r.groups()));
                }
                Ok(format!("T = ±{} in {group}", r.t_plus))
            }
            Check::Membership { input, component, norm, twisted_norm, odd } => {
                let m = spin::membership(&Multivector::try_from(input)?)?;
                let parity = if *odd { Parity::Odd } else { Parity::Even };
                if m.component != *component
                    || m.norm != *norm
                    || m.twisted_norm != *twisted_norm
                    || m.parity != parity
                {
                    return fail(format!("got {m:?}"));
                }
                Ok(component.to_string())
            }
            Check::GammaMatrices { p, q, expected } => {
                let r = rep::gamma_complex(Signature::complex(*p, *q)?)?;
                let exact = exact_anticommutation(&r);
                if exact > 0.0 {
                    return fail(format!("anticommutation residual {exact:e}"));
                }
                if let Some(expected) = expected {
                    if expected.len() != r.mats().len() {
                        return fail("wrong number of matrices");
                    }
                    for (got, want) in r.mats().iter().zip(expected) {
                        let want = DenseMatrix::try_from(want)?;
                        if got.distance(&want) > COEFF_TOL {
                            return fail(format!("got {:?}", got.rows()));
                        }
                    }
                }
                Ok(format!("order {}", r.order()))
            }
            Check::PauliSign { expected_sign } => {
                let (beta, gamma) = pauli_pair()?;
                let (t, sign) = rep::matrix_intertwiner_odd_sign(&beta, &gamma)?;
                if sign != *expected_sign {
                    return fail(format!("sign {sign}"));
                }
                let c = t.colinearity_residual(&DenseMatrix::identity(t.order()));
                if c > tol::REL {
                    return fail(format!("T not proportional to identity ({c:e})"));
                }
                Ok(format!("sign {sign}, T ∝ 1"))
            }
        }
    }
}

/// Largest entry of `m_a m_b + m_b m_a - 2 eta^{ab} 1` in exact arithmetic
/// on the computed matrices.
fn exact_anticommutation(r: &GammaRep) -> f64 {
    let sig = r.signature();
    let id = DenseMatrix::identity(r.order());
    let mats = r.mats();
    let mut worst = 0.0f64;
    for a in 0..mats.len() {
        for b in a..mats.len() {
            let ac = mats[a].mul(&mats[b]).add(&mats[b].mul(&mats[a]));
            let eta = if a == b { 2.0 * sig.metric(a + 1) } else { 0.0 };
            worst = worst.max(ac.distance(&id.scale(num_complex::Complex64::new(eta, 0.0))));
        }
    }
    worst
}

/// `(sigma, -sigma)` as representations of `Cl(3,0)`.
pub fn pauli_pair() -> Result<(GammaRep, GammaRep)> {
    let sig = Signature::complex(3, 0)?;
    let sigma: Vec<DenseMatrix> = (1..=3).map(DenseMatrix::pauli).collect();
    let minus = sigma
        .iter()
        .map(|m| m.scale(num_complex::Complex64::new(-1.0, 0.0)))
        .collect();
    Ok((GammaRep::new(sig, sigma)?, GammaRep::new(sig, minus)?))
}

/// Parses a golden file item by item; an unreadable item becomes a failure
/// named after its `name` field (or its position).
pub fn run_text(text: &str) -> Result<Vec<Outcome>> {
    let values: Vec<Value> = serde_json::from_str(text)?;
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let name = v
                .get("name")
                .and_then(Value::as_str)
                .map(str::to_string)
                .unwrap_or_else(|| format!("item {i}"));
            match serde_json::from_value::<GoldenItem>(v) {
                Ok(item) => run_item(&item),
                Err(e) => Outcome {
                    name,
                    passed: false,
                    detail: format!("unreadable item: {e}"),
                },
            }
        })
        .collect())
}

pub fn run_item(item: &GoldenItem) -> Outcome {
    let (passed, detail) = match item.check.run() {
        Ok(s) => (true, s),
        Err(Error::Unsupported(s)) => (false, s),
        Err(e) => (false, e.to_string()),
    };
    Outcome {
        name: item.name.clone(),
        passed,
        detail,
    }
}

pub fn run_packaged() -> Vec<Outcome> {
    run_text(PACKAGED).expect("packaged golden file parses")
}
