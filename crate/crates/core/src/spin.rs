//! Spinor groups, the twisted adjoint `T -> (x -> T^ x T^{-1})` and the lift
//! of pseudo-orthogonal matrices to their two preimages `±T`.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blade::BladeMask;
use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::orthogonal::{classify_orthogonal, ComponentTag, OrthogonalMatrix};
use crate::par::{self, Exec};
use crate::pauli::{self, Candidate, GeneratorSet, Parity};
use crate::signature::Signature;
use crate::tol;

/// Sign of `T~ T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormType {
    #[serde(rename = "+e")]
    Plus,
    #[serde(rename = "-e")]
    Minus,
}

impl NormType {
    pub fn sign(self) -> f64 {
        match self {
            NormType::Plus => 1.0,
            NormType::Minus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NormType::Plus => "+e",
            NormType::Minus => "-e",
        }
    }
}

/// Spinor groups and the four components of `Pin(p,q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupTag {
    Pin,
    #[serde(rename = "Pin_up")]
    PinUp,
    #[serde(rename = "Pin_down")]
    PinDown,
    Spin,
    #[serde(rename = "Spin_up_down")]
    SpinUpDown,
    #[serde(rename = "Pin_up_prime")]
    PinUpPrime,
    #[serde(rename = "Pin_down_prime")]
    PinDownPrime,
    #[serde(rename = "Spin_prime")]
    SpinPrime,
}

impl GroupTag {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupTag::Pin => "Pin",
            GroupTag::PinUp => "Pin_up",
            GroupTag::PinDown => "Pin_down",
            GroupTag::Spin => "Spin",
            GroupTag::SpinUpDown => "Spin_up_down",
            GroupTag::PinUpPrime => "Pin_up_prime",
            GroupTag::PinDownPrime => "Pin_down_prime",
            GroupTag::SpinPrime => "Spin_prime",
        }
    }

    /// The `Pin` component covering the given `O(p,q)` component.
    pub fn covering(component: ComponentTag) -> GroupTag {
        match component {
            ComponentTag::SoUpDown => GroupTag::SpinUpDown,
            ComponentTag::OUpPrime => GroupTag::PinUpPrime,
            ComponentTag::ODownPrime => GroupTag::PinDownPrime,
            ComponentTag::SoPrime => GroupTag::SpinPrime,
        }
    }

    pub fn covered(self) -> Option<ComponentTag> {
        match self {
            GroupTag::SpinUpDown => Some(ComponentTag::SoUpDown),
            GroupTag::PinUpPrime => Some(ComponentTag::OUpPrime),
            GroupTag::PinDownPrime => Some(ComponentTag::ODownPrime),
            GroupTag::SpinPrime => Some(ComponentTag::SoPrime),
            _ => None,
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupTag::Pin => "Pin",
            GroupTag::PinUp => "Pin↑",
            GroupTag::PinDown => "Pin↓",
            GroupTag::Spin => "Spin",
            GroupTag::SpinUpDown => "Spin↑↓",
            GroupTag::PinUpPrime => "Pin↑′",
            GroupTag::PinDownPrime => "Pin↓′",
            GroupTag::SpinPrime => "Spin′",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    /// Sorted group tags, including exactly one component tag.
    pub groups: Vec<GroupTag>,
    pub component: GroupTag,
    /// Sign of `T~ T`.
    pub norm: NormType,
    /// Sign of `(T~)^ T`.
    pub twisted_norm: NormType,
    pub parity: Parity,
}

/// Matrix `p^a_b` of the twisted adjoint: `T^ e^a T^{-1} = p^a_b e^b`.
pub fn project(t: &Multivector) -> Result<OrthogonalMatrix> {
    let sig = t.signature();
    let n = sig.n();
    let inv = t.inverse()?;
    let hat = t.grade_involution();
    let mut entries = DMatrix::zeros(n, n);
    for a in 1..=n {
        let x = &(&hat * &Multivector::basis(sig, a)) * &inv;
        let scale = x.norm_inf().max(1.0);
        let mut off = 0.0f64;
        for &(m, c) in x.terms() {
            if m.grade() == 1 {
                off = off.max(c.im.abs());
                entries[(a - 1, m.bits().trailing_zeros() as usize)] = c.re;
            } else {
                off = off.max(c.norm());
            }
        }
        if off > tol::REL * scale {
            return Err(Error::NotLipschitz {
                index: a,
                residual: off / scale,
            });
        }
    }
    let scale = entries.amax().max(1.0);
    OrthogonalMatrix::with_tolerance(sig, entries, tol::REL * scale * scale)
}

/// Flips the sign so the first coefficient (in mask order) is positive.
fn canonical_sign(t: Multivector) -> Multivector {
    match t.terms().first() {
        Some(&(_, c)) if c.re < 0.0 || (c.re == 0.0 && c.im < 0.0) => -t,
        _ => t,
    }
}

/// Scales `T` so that `T~ T = ±e`, then fixes the sign canonically.
pub fn normalize(t: &Multivector) -> Result<(Multivector, NormType)> {
    if t.is_zero() {
        return Err(Error::NormalizationFailed("zero element".into()));
    }
    let tt = &t.reversion() * t;
    let lambda = tt.trace();
    let size = t.norm_inf() * t.norm_inf();
    if lambda.norm() <= tol::ZERO * size {
        return Err(Error::NormalizationFailed(format!("T~T = {tt} has no scalar part")));
    }
    let nonscalar = (&tt - &Multivector::from_terms(t.signature(), [(BladeMask::IDENTITY, lambda)])?)
        .norm_inf();
    if nonscalar > tol::REL * lambda.norm() {
        return Err(Error::NormalizationFailed(format!(
            "T~T has a non-scalar part of relative size {:e}",
            nonscalar / lambda.norm()
        )));
    }
    if lambda.im.abs() > tol::REL * lambda.norm() {
        return Err(Error::NormalizationFailed(format!("T~T = {lambda} is not real")));
    }
    let scaled = t.scale(1.0 / lambda.norm().sqrt());
    let norm = if lambda.re > 0.0 {
        NormType::Plus
    } else {
        NormType::Minus
    };
    Ok((canonical_sign(scaled), norm))
}

fn unit_sign(x: &Multivector, what: &str) -> Result<NormType> {
    let one = Multivector::one(x.signature());
    if x.distance(&one) <= tol::REL {
        Ok(NormType::Plus)
    } else if x.distance(&-&one) <= tol::REL {
        Ok(NormType::Minus)
    } else {
        Err(Error::NotInPin(format!("{what} = {x}")))
    }
}

fn membership_and_projection(t: &Multivector) -> Result<(Membership, OrthogonalMatrix)> {
    let rev = t.reversion();
    let norm = unit_sign(&(&rev * t), "T~T")?;
    let twisted_norm = unit_sign(&(&rev.grade_involution() * t), "(T~)^T")?;
    let parity = Parity::of(t);
    if parity == Parity::Mixed {
        return Err(Error::NotInPin("element has mixed parity".into()));
    }
    let p = project(t).map_err(|e| Error::NotInPin(format!("not in the Lipschitz group: {e}")))?;
    let even = parity == Parity::Even;
    let mut groups = BTreeSet::from([GroupTag::Pin]);
    if norm == NormType::Plus {
        groups.insert(GroupTag::PinDown);
    }
    if twisted_norm == NormType::Plus {
        groups.insert(GroupTag::PinUp);
    }
    if even {
        groups.insert(GroupTag::Spin);
    }
    let component = match (even, norm) {
        (true, NormType::Plus) => GroupTag::SpinUpDown,
        (true, NormType::Minus) => GroupTag::SpinPrime,
        (false, NormType::Plus) => GroupTag::PinDownPrime,
        (false, NormType::Minus) => GroupTag::PinUpPrime,
    };
    groups.insert(component);
    Ok((
        Membership {
            groups: groups.into_iter().collect(),
            component,
            norm,
            twisted_norm,
            parity,
        },
        p,
    ))
}

/// Group memberships of a normalized element of `Pin(p,q)`.
pub fn membership(t: &Multivector) -> Result<Membership> {
    membership_and_projection(t).map(|(m, _)| m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftResult {
    pub t_plus: Multivector,
    pub t_minus: Multivector,
    pub norm_type: NormType,
    pub membership: Membership,
    /// Component of the input matrix.
    pub component: ComponentTag,
    pub candidate: Candidate,
    /// `|project(T) - P|_inf`.
    pub residual: f64,
}

impl LiftResult {
    pub fn groups(&self) -> &[GroupTag] {
        &self.membership.groups
    }
}

/// The two elements `±T` of `Pin(p,q)` whose twisted adjoint is `P`.
///
/// Builds `beta^a = p^a_b e^b`, solves `e^a = (T^)^{-1} beta^a T`, normalizes
/// `T~T = ±e`, and checks that `T` projects back onto `P`.
pub fn lift(p: &OrthogonalMatrix) -> Result<LiftResult> {
    let sig = p.signature();
    let betas = GeneratorSet::from_orthogonal(p, sig)?;
    let gammas = GeneratorSet::standard(sig);
    let found = pauli::intertwiner_grade_involution(&betas, &gammas)?;
    let (t, norm_type) = normalize(&found.t)?;
    let (membership, back) = membership_and_projection(&t)?;
    let residual = back.distance(p);
    let scale = p.entries().amax().max(1.0);
    if !(residual <= tol::REL * scale) {
        return Err(Error::CertificateFailed { residual });
    }
    Ok(LiftResult {
        t_minus: -&t,
        t_plus: t,
        norm_type,
        membership,
        component: classify_orthogonal(p),
        candidate: found.candidate,
        residual,
    })
}

/// Lifts every matrix, in input order.
pub fn lift_all(exec: Exec, matrices: &[OrthogonalMatrix]) -> Vec<Result<LiftResult>> {
    par::map_range(exec, matrices.len(), |i| lift(&matrices[i]))
}

/// Normalizes `t`, projects it and lifts the projection back. Returns the
/// lift and `min |lift - (±t)|_inf / max(1, |t|_inf)`.
pub fn round_trip(t: &Multivector) -> Result<(LiftResult, f64)> {
    let (t, _) = normalize(t)?;
    let p = project(&t)?;
    let r = lift(&p)?;
    let d = r.t_plus.distance(&t).min(r.t_plus.distance(&-&t));
    Ok((r, d / t.norm_inf().max(1.0)))
}

/// Product `v_1 v_2 ... v_k`.
pub fn versor_from_vectors(sig: Signature, vectors: &[Multivector]) -> Multivector {
    vectors
        .iter()
        .fold(Multivector::one(sig), |acc, v| &acc * v)
}

const SAMPLING_ATTEMPTS: usize = 64;
/// Minimum `|v·v| / |v|^2` accepted for a sampled vector.
const MIN_NULL_DISTANCE: f64 = 0.25;

fn random_unit(rng: &mut ChaCha8Rng, range: std::ops::Range<usize>) -> Option<Vec<f64>> {
    let v: Vec<f64> = range.map(|_| rng.random_range(-1.0..1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > 1e-3).then(|| v.into_iter().map(|x| x / norm).collect())
}

/// Random grade-1 element `v` with `v v = square * e`.
fn random_vector(sig: Signature, square: f64, rng: &mut ChaCha8Rng) -> Result<Multivector> {
    let (p, n) = (sig.p(), sig.n());
    let (main, other) = if square > 0.0 { (0..p, p..n) } else { (p..n, 0..p) };
    if main.is_empty() {
        return Err(Error::DegenerateSampling);
    }
    for _ in 0..SAMPLING_ATTEMPTS {
        let Some(u) = random_unit(rng, main.clone()) else { continue };
        let mut comps = vec![0.0; n];
        for (i, x) in main.clone().zip(u) {
            comps[i] = x;
        }
        if !other.is_empty() {
            let mix: f64 = rng.random_range(0.0..0.7);
            let Some(w) = random_unit(rng, other.clone()) else { continue };
            for (i, x) in other.clone().zip(w) {
                comps[i] = mix * x;
            }
        }
        let quad: f64 = comps
            .iter()
            .enumerate()
            .map(|(i, x)| sig.metric(i + 1) * x * x)
            .sum();
        let euclid: f64 = comps.iter().map(|x| x * x).sum();
        if quad.abs() < MIN_NULL_DISTANCE * euclid || quad * square <= 0.0 {
            continue;
        }
        let s = quad.abs().sqrt();
        let comps: Vec<f64> = comps.into_iter().map(|x| x / s).collect();
        return Multivector::vector(sig, &comps);
    }
    Err(Error::DegenerateSampling)
}

/// Random versor with the vector squares given in `squares` (each ±1).
pub fn random_versor_with_squares(sig: Signature, squares: &[f64], seed: u64) -> Result<Multivector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors = squares
        .iter()
        .map(|&s| random_vector(sig, s, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(versor_from_vectors(sig, &vectors))
}

/// Product of `k` pseudo-random unit vectors; deterministic in `seed`.
pub fn random_versor(sig: Signature, k: usize, seed: u64) -> Result<Multivector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let squares: Vec<f64> = (0..k)
        .map(|_| match (sig.p(), sig.q()) {
            (0, _) => -1.0,
            (_, 0) => 1.0,
            _ => {
                if rng.random_bool(0.5) {
                    1.0
                } else {
                    -1.0
                }
            }
        })
        .collect();
    let vectors = squares
        .iter()
        .map(|&s| random_vector(sig, s, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(versor_from_vectors(sig, &vectors))
}

/// Random versor lying in the `Pin` component that covers `component`.
///
/// Uses between one and six vectors; the parity of the vector count fixes the
/// determinant and the number of negative-square vectors fixes `T~T`.
pub fn random_versor_in_component(
    sig: Signature,
    component: ComponentTag,
    seed: u64,
) -> Result<Multivector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let (odd_count, odd_negatives) = match component {
        ComponentTag::SoUpDown => (false, false),
        ComponentTag::SoPrime => (false, true),
        ComponentTag::ODownPrime => (true, false),
        ComponentTag::OUpPrime => (true, true),
    };
    let k = 2 * rng.random_range(1..=3usize) - usize::from(odd_count);
    let mut squares: Vec<f64> = (0..k)
        .map(|_| match (sig.p(), sig.q()) {
            (0, _) => -1.0,
            (_, 0) => 1.0,
            _ => {
                if rng.random_bool(0.5) {
                    1.0
                } else {
                    -1.0
                }
            }
        })
        .collect();
    let negatives = squares.iter().filter(|&&s| s < 0.0).count();
    if (negatives % 2 == 1) != odd_negatives {
        let i = rng.random_range(0..k);
        squares[i] = -squares[i];
    }
    random_versor_with_squares(sig, &squares, rng.random())
}

/// `true` when `a = ±b` coefficient-wise within `tolerance`.
pub fn equal_up_to_sign(a: &Multivector, b: &Multivector, tolerance: f64) -> bool {
    a.distance(b) <= tolerance || a.distance(&-b) <= tolerance
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: Signature, idx: &[usize]) -> Multivector {
        Multivector::blade(s, BladeMask::from_indices(idx, s.n()).unwrap())
    }

    #[test]
    fn project_examples() {
        let s = Signature::real(1, 1).unwrap();
        assert_eq!(project(&Multivector::one(s)).unwrap(), OrthogonalMatrix::identity(s));
        assert_eq!(project(&e(s, &[1])).unwrap(), OrthogonalMatrix::minus_eta(s));
        let s = Signature::real(2, 0).unwrap();
        let p = project(&e(s, &[1, 2])).unwrap();
        assert!(p.distance(&OrthogonalMatrix::minus_identity(s)) < 1e-15);
    }

    #[test]
    fn project_rejects_non_lipschitz() {
        let s = Signature::real(3, 0).unwrap();
        let u = &Multivector::one(s) + &e(s, &[1]).scale(0.5);
        assert!(matches!(project(&u), Err(Error::NotLipschitz { .. })));
    }

    #[test]
    fn normalize_examples() {
        let s = Signature::real(1, 1).unwrap();
        assert_eq!(normalize(&e(s, &[1, 2]).scale(3.0)).unwrap(), (e(s, &[1, 2]), NormType::Minus));
        assert_eq!(
            normalize(&Multivector::scalar(s, -2.0)).unwrap(),
            (Multivector::one(s), NormType::Plus)
        );
        let s = Signature::real(0, 1).unwrap();
        assert_eq!(normalize(&e(s, &[1])).unwrap(), (e(s, &[1]), NormType::Minus));
        assert!(normalize(&Multivector::zero(s)).is_err());
    }

    #[test]
    fn normalize_requires_scalar_norm() {
        let s = Signature::real(2, 0).unwrap();
        let u = &Multivector::one(s) + &e(s, &[1]);
        assert!(matches!(normalize(&u), Err(Error::NormalizationFailed(_))));
    }

    #[test]
    fn membership_examples() {
        let s = Signature::real(1, 1).unwrap();
        let m = membership(&Multivector::one(s)).unwrap();
        assert_eq!(
            m.groups,
            vec![GroupTag::Pin, GroupTag::PinUp, GroupTag::PinDown, GroupTag::Spin, GroupTag::SpinUpDown]
        );
        let m = membership(&e(s, &[1])).unwrap();
        assert_eq!(m.component, GroupTag::PinDownPrime);
        assert_eq!((m.norm, m.twisted_norm), (NormType::Plus, NormType::Minus));
        let m = membership(&e(s, &[1, 2])).unwrap();
        assert_eq!(m.component, GroupTag::SpinPrime);
        let mixed = &Multivector::one(s) + &e(s, &[1]);
        assert!(matches!(membership(&mixed), Err(Error::NotInPin(_))));
    }

    #[test]
    fn lift_examples() {
        let s = Signature::real(1, 1).unwrap();
        let r = lift(&OrthogonalMatrix::identity(s)).unwrap();
        assert_eq!(r.t_plus, Multivector::one(s));
        assert_eq!(r.norm_type, NormType::Plus);
        assert!(r.groups().contains(&GroupTag::SpinUpDown));
        let r = lift(&OrthogonalMatrix::minus_eta(s)).unwrap();
        assert!(r.t_plus.distance(&e(s, &[1])) < 1e-12);
        assert!(r.groups().contains(&GroupTag::PinDownPrime));
        let s = Signature::real(2, 0).unwrap();
        let r = lift(&OrthogonalMatrix::minus_identity(s)).unwrap();
        assert!(r.t_plus.distance(&e(s, &[1, 2])) < 1e-12);
        assert_eq!(r.t_minus, -&r.t_plus);
    }

    #[test]
    fn batch_lift_matches_single_lifts() {
        let s = Signature::real(2, 1).unwrap();
        let ms: Vec<_> = (0..6)
            .map(|seed| project(&random_versor(s, 3, seed).unwrap()).unwrap())
            .collect();
        let seq = lift_all(Exec::Sequential, &ms);
        assert_eq!(seq, lift_all(Exec::Parallel, &ms));
        for (m, r) in ms.iter().zip(seq) {
            assert_eq!(r.unwrap(), lift(m).unwrap());
        }
    }

    #[test]
    fn random_versor_examples() {
        let s = Signature::real(2, 2).unwrap();
        assert_eq!(random_versor(s, 0, 5).unwrap(), Multivector::one(s));
        let v = versor_from_vectors(s, &[e(s, &[1])]);
        assert_eq!(v, e(s, &[1]));
        for seed in 0..20 {
            let t = random_versor(s, 4, seed).unwrap();
            assert!(project(&t).is_ok());
            assert_eq!(t, random_versor(s, 4, seed).unwrap());
        }
    }

    #[test]
    fn component_sampler_hits_requested_component() {
        let s = Signature::real(2, 1).unwrap();
        for c in ComponentTag::ALL {
            for seed in 0..5 {
                let t = random_versor_in_component(s, c, seed).unwrap();
                let (t, _) = normalize(&t).unwrap();
                assert_eq!(membership(&t).unwrap().component, GroupTag::covering(c));
            }
        }
        let euclid = Signature::real(3, 0).unwrap();
        assert_eq!(
            random_versor_in_component(euclid, ComponentTag::SoPrime, 1),
            Err(Error::DegenerateSampling)
        );
    }
}
