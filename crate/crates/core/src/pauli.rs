//! Intertwiners between two sets of elements obeying the Clifford relations.
//!
//! Given generator sets `beta^a` and `gamma^a` with
//! `x^a x^b + x^b x^a = 2 eta^{ab} e`, the solvers build
//! `T = sum_A beta^A F gamma_A` for candidate elements `F`, where
//! `gamma_A = (gamma^A)^{-1}` is the reversed product of metric-lowered
//! generators, and return the first candidate giving an invertible `T`.
//! Every returned result carries a residual of its defining relation,
//! recomputed from `T` after the search.

use std::fmt;

use num_complex::Complex64;

use crate::blade::BladeMask;
use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::orthogonal::OrthogonalMatrix;
use crate::par::{self, Exec};
use crate::signature::Signature;
use crate::tol;

/// Low generator bits enumerated up front to split the 2^n-term sum into
/// independent tasks.
const SPLIT_BITS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorCheck {
    pub valid: bool,
    pub residual: f64,
}

/// Checks `gamma^a gamma^b + gamma^b gamma^a = 2 eta^{ab} e` for all pairs.
///
/// The residual of each pair is scaled by `max(1, |gamma^a| |gamma^b|)`.
pub fn check_generators(gens: &[Multivector], sig: &Signature) -> GeneratorCheck {
    if gens.len() != sig.n() || gens.iter().any(|g| g.signature() != *sig) {
        return GeneratorCheck {
            valid: false,
            residual: f64::INFINITY,
        };
    }
    let mut worst = 0.0f64;
    for a in 0..gens.len() {
        for b in a..gens.len() {
            let anti = &(&gens[a] * &gens[b]) + &(&gens[b] * &gens[a]);
            let target = if a == b {
                Multivector::scalar(*sig, 2.0 * sig.metric(a + 1))
            } else {
                Multivector::zero(*sig)
            };
            let scale = (gens[a].norm_inf() * gens[b].norm_inf()).max(1.0);
            worst = worst.max(anti.distance(&target) / scale);
        }
    }
    GeneratorCheck {
        valid: worst <= tol::REL,
        residual: worst,
    }
}

/// `n` elements of `Cl(p,q)` satisfying the anticommutation relations.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    sig: Signature,
    gens: Vec<Multivector>,
}

impl GeneratorSet {
    pub fn new(sig: Signature, gens: Vec<Multivector>) -> Result<Self> {
        if gens.len() != sig.n() {
            return Err(Error::DimensionMismatch {
                expected: sig.n(),
                got: gens.len(),
            });
        }
        let check = check_generators(&gens, &sig);
        if !check.valid {
            return Err(Error::InvalidGenerators {
                residual: check.residual,
            });
        }
        Ok(GeneratorSet { sig, gens })
    }

    /// `e^1, ..., e^n`.
    pub fn standard(sig: Signature) -> Self {
        GeneratorSet {
            sig,
            gens: (1..=sig.n()).map(|a| Multivector::basis(sig, a)).collect(),
        }
    }

    /// `beta^a = p^a_b e^b`, in the algebra of the given field.
    pub fn from_orthogonal(p: &OrthogonalMatrix, sig: Signature) -> Result<Self> {
        let n = sig.n();
        let gens = (1..=n)
            .map(|a| {
                let row: Vec<f64> = (1..=n).map(|b| p.entry(a, b)).collect();
                Multivector::vector(sig, &row)
            })
            .collect::<Result<Vec<_>>>()?;
        GeneratorSet::new(sig, gens)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn gens(&self) -> &[Multivector] {
        &self.gens
    }

    pub fn n(&self) -> usize {
        self.sig.n()
    }

    /// `gamma^a` inverse, which is `eta^{aa} gamma^a`.
    fn lowered(&self, a: usize) -> Multivector {
        self.gens[a - 1].scale(self.sig.metric(a))
    }

    /// Ordered product `gamma^{a_1} ... gamma^{a_k}` over the indices of `mask`.
    pub fn raised_blade(&self, mask: BladeMask) -> Multivector {
        mask.indices()
            .iter()
            .fold(Multivector::one(self.sig), |acc, &a| &acc * &self.gens[a - 1])
    }

    /// `gamma_A = (gamma^A)^{-1}`: reversed product of lowered generators.
    pub fn lowered_blade(&self, mask: BladeMask) -> Multivector {
        mask.indices()
            .iter()
            .fold(Multivector::one(self.sig), |acc, &a| &self.lowered(a) * &acc)
    }

    /// `gamma^1 gamma^2 ... gamma^n`.
    pub fn volume_element(&self) -> Multivector {
        self.raised_blade(BladeMask::full(self.n()))
    }

    fn check_odd(&self) -> Result<()> {
        for (i, g) in self.gens.iter().enumerate() {
            if g.even_part().norm_inf() > tol::REL * g.norm_inf().max(1.0) {
                return Err(Error::NotOddGraded { index: i + 1 });
            }
        }
        Ok(())
    }
}

/// Standalone form of [`GeneratorSet::volume_element`].
pub fn volume_element(gens: &GeneratorSet) -> Multivector {
    gens.volume_element()
}

/// Standalone form of [`GeneratorSet::lowered_blade`].
pub fn lowered_blade(gens: &GeneratorSet, mask: BladeMask) -> Multivector {
    gens.lowered_blade(mask)
}

/// Grade parity of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn of(u: &Multivector) -> Parity {
        let scale = u.norm_inf();
        let odd = u.odd_part().norm_inf() <= tol::ZERO * scale;
        let even = u.even_part().norm_inf() <= tol::ZERO * scale;
        match (odd, even) {
            (true, _) => Parity::Even,
            (false, true) => Parity::Odd,
            _ => Parity::Mixed,
        }
    }
}

/// Element `F` that seeds the sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Candidate {
    /// `F = gamma^A`.
    Blade(BladeMask),
    /// `F = gamma^A + gamma^B`, `A < B`.
    Pair(BladeMask, BladeMask),
}

impl Candidate {
    pub fn build(&self, gammas: &GeneratorSet) -> Multivector {
        match *self {
            Candidate::Blade(a) => gammas.raised_blade(a),
            Candidate::Pair(a, b) => &gammas.raised_blade(a) + &gammas.raised_blade(b),
        }
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |m: BladeMask| {
            if m == BladeMask::IDENTITY {
                "γ^∅".to_string()
            } else {
                m.to_string().replacen('e', "γ", 1)
            }
        };
        match *self {
            Candidate::Blade(a) => write!(f, "F = {}", name(a)),
            Candidate::Pair(a, b) => write!(f, "F = {} + {}", name(a), name(b)),
        }
    }
}

/// Admissible values of `beta^{1...n} gamma_{1...n}` for odd `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VolumeFactor {
    PlusOne,
    MinusOne,
    PlusPseudoscalar,
    MinusPseudoscalar,
    PlusI,
    MinusI,
    PlusIPseudoscalar,
    MinusIPseudoscalar,
}

impl VolumeFactor {
    const ALL: [VolumeFactor; 8] = [
        VolumeFactor::PlusOne,
        VolumeFactor::MinusOne,
        VolumeFactor::PlusPseudoscalar,
        VolumeFactor::MinusPseudoscalar,
        VolumeFactor::PlusI,
        VolumeFactor::MinusI,
        VolumeFactor::PlusIPseudoscalar,
        VolumeFactor::MinusIPseudoscalar,
    ];

    pub fn is_imaginary(self) -> bool {
        matches!(
            self,
            VolumeFactor::PlusI
                | VolumeFactor::MinusI
                | VolumeFactor::PlusIPseudoscalar
                | VolumeFactor::MinusIPseudoscalar
        )
    }

    pub fn to_multivector(self, sig: Signature) -> Multivector {
        use VolumeFactor::*;
        let (c, mask) = match self {
            PlusOne => (Complex64::new(1.0, 0.0), BladeMask::IDENTITY),
            MinusOne => (Complex64::new(-1.0, 0.0), BladeMask::IDENTITY),
            PlusPseudoscalar => (Complex64::new(1.0, 0.0), BladeMask::full(sig.n())),
            MinusPseudoscalar => (Complex64::new(-1.0, 0.0), BladeMask::full(sig.n())),
            PlusI => (Complex64::new(0.0, 1.0), BladeMask::IDENTITY),
            MinusI => (Complex64::new(0.0, -1.0), BladeMask::IDENTITY),
            PlusIPseudoscalar => (Complex64::new(0.0, 1.0), BladeMask::full(sig.n())),
            MinusIPseudoscalar => (Complex64::new(0.0, -1.0), BladeMask::full(sig.n())),
        };
        Multivector::from_terms(sig, [(mask, c)]).expect("admissible factor fits the field")
    }

    /// Matches `factor` against the values allowed for the field.
    pub fn classify(factor: &Multivector) -> Result<VolumeFactor> {
        let sig = factor.signature();
        let allowed = VolumeFactor::ALL
            .into_iter()
            .filter(|v| sig.is_complex() || !v.is_imaginary());
        for v in allowed {
            if factor.distance(&v.to_multivector(sig)) <= tol::REL {
                return Ok(v);
            }
        }
        Err(Error::FactorUnrecognized(factor.to_string()))
    }
}

impl fmt::Display for VolumeFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use VolumeFactor::*;
        let s = match self {
            PlusOne => "e",
            MinusOne => "-e",
            PlusPseudoscalar => "e^{1...n}",
            MinusPseudoscalar => "-e^{1...n}",
            PlusI => "ie",
            MinusI => "-ie",
            PlusIPseudoscalar => "ie^{1...n}",
            MinusIPseudoscalar => "-ie^{1...n}",
        };
        f.write_str(s)
    }
}

/// The equation a returned `T` satisfies for every `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `gamma^a = T^{-1} beta^a T`.
    Similar,
    /// `gamma^a = c T^{-1} beta^a T` with `c` central.
    Scaled(VolumeFactor),
    /// `gamma^a = (T^)^{-1} beta^a T`.
    Twisted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntertwinerResult {
    pub t: Multivector,
    /// `beta^{1...n} gamma_{1...n}`.
    pub factor: Multivector,
    pub relation: Relation,
    pub parity: Parity,
    pub candidate: Candidate,
    pub residual: f64,
}

/// Which multi-indices `A` enter the sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexSet {
    All,
    Even,
}

/// `sum_A w_A beta^A F gamma_A` with `w_A = (-1)^{|A|}` when `alternating`.
///
/// Terms whose coefficients fall below `1e-9` of the largest single term are
/// treated as cancellation noise and dropped.
pub fn intertwiner_sum(
    betas: &GeneratorSet,
    gammas: &GeneratorSet,
    f: &Multivector,
    indices: IndexSet,
    alternating: bool,
) -> Multivector {
    intertwiner_sum_with(betas, gammas, f, indices, alternating, Exec::default())
}

pub fn intertwiner_sum_with(
    betas: &GeneratorSet,
    gammas: &GeneratorSet,
    f: &Multivector,
    indices: IndexSet,
    alternating: bool,
    exec: Exec,
) -> Multivector {
    let sig = betas.signature();
    let n = sig.n();
    let split = n.min(SPLIT_BITS);
    let ctx = SumContext {
        betas,
        gamma_lowered: (1..=n).map(|a| gammas.lowered(a)).collect(),
        f,
        indices,
        alternating,
        n,
    };
    let partials = par::map_range(exec, 1 << split, |prefix| {
        let mut acc = vec![Complex64::new(0.0, 0.0); sig.dim()];
        let mut scale = 0.0f64;
        let prefix_mask = BladeMask(prefix as u32);
        let beta_a = betas.raised_blade(prefix_mask);
        let gamma_a = gammas.lowered_blade(prefix_mask);
        ctx.visit(split, prefix as u32, &beta_a, &gamma_a, &mut acc, &mut scale);
        (acc, scale)
    });
    let mut total = vec![Complex64::new(0.0, 0.0); sig.dim()];
    let mut scale = 0.0f64;
    for (acc, s) in partials {
        for (t, x) in total.iter_mut().zip(acc) {
            *t += x;
        }
        scale = scale.max(s);
    }
    Multivector::from_dense_scaled(sig, &total, tol::ZERO, scale)
}

struct SumContext<'a> {
    betas: &'a GeneratorSet,
    gamma_lowered: Vec<Multivector>,
    f: &'a Multivector,
    indices: IndexSet,
    alternating: bool,
    n: usize,
}

impl SumContext<'_> {
    /// Adds the term for `mask`, then extends `mask` by every generator at or above `next`.
    fn visit(
        &self,
        next: usize,
        mask: u32,
        beta_a: &Multivector,
        gamma_a: &Multivector,
        acc: &mut [Complex64],
        scale: &mut f64,
    ) {
        let odd = mask.count_ones() % 2 == 1;
        if self.indices == IndexSet::All || !odd {
            let inner = self
                .f
                .try_mul_with(gamma_a, Exec::Sequential)
                .expect("same signature");
            let term = beta_a
                .try_mul_with(&inner, Exec::Sequential)
                .expect("same signature");
            let sign = if self.alternating && odd { -1.0 } else { 1.0 };
            *scale = scale.max(term.norm_inf());
            for &(m, c) in term.terms() {
                acc[m.bits() as usize] += c * sign;
            }
        }
        for b in next..self.n {
            let beta_next = beta_a
                .try_mul_with(&self.betas.gens[b], Exec::Sequential)
                .expect("same signature");
            let gamma_next = self.gamma_lowered[b]
                .try_mul_with(gamma_a, Exec::Sequential)
                .expect("same signature");
            self.visit(b + 1, mask | 1 << b, &beta_next, &gamma_next, acc, scale);
        }
    }
}

fn check_pair(betas: &GeneratorSet, gammas: &GeneratorSet) -> Result<Signature> {
    if betas.signature() != gammas.signature() {
        return Err(Error::SignatureMismatch(
            betas.signature().to_string(),
            gammas.signature().to_string(),
        ));
    }
    Ok(betas.signature())
}

/// Relative residual of the relation, evaluated in multiplied-out form:
/// `T gamma^a = beta^a T`, `T c^{-1} gamma^a = beta^a T` or `T^ gamma^a = beta^a T`.
pub fn relation_residual(
    betas: &GeneratorSet,
    gammas: &GeneratorSet,
    t: &Multivector,
    relation: Relation,
) -> Result<f64> {
    let sig = check_pair(betas, gammas)?;
    let left = match relation {
        Relation::Similar => t.clone(),
        Relation::Scaled(c) => t * &c.to_multivector(sig).inverse()?,
        Relation::Twisted => t.grade_involution(),
    };
    let mut worst = 0.0f64;
    for (b, g) in betas.gens.iter().zip(&gammas.gens) {
        let lhs = &left * g;
        let rhs = b * t;
        let scale = lhs.norm_inf().max(rhs.norm_inf()).max(f64::MIN_POSITIVE);
        worst = worst.max(lhs.distance(&rhs) / scale);
    }
    Ok(worst)
}

fn finish(
    betas: &GeneratorSet,
    gammas: &GeneratorSet,
    t: Multivector,
    relation: Relation,
    candidate: Candidate,
) -> Result<IntertwinerResult> {
    let residual = relation_residual(betas, gammas, &t, relation)?;
    if !(residual <= tol::REL) {
        return Err(Error::CertificateFailed { residual });
    }
    let factor = &betas.volume_element() * &gammas.lowered_blade(BladeMask::full(betas.n()));
    Ok(IntertwinerResult {
        parity: Parity::of(&t),
        t,
        factor,
        relation,
        candidate,
        residual,
    })
}

/// Relation between the two volume elements.
fn volume_relation(betas: &GeneratorSet, gammas: &GeneratorSet) -> (bool, bool) {
    let (vb, vg) = (betas.volume_element(), gammas.volume_element());
    let scale = vb.norm_inf().max(vg.norm_inf()).max(1.0);
    let equal = vb.distance(&vg) <= tol::REL * scale;
    let opposite = vb.distance(&-&vg) <= tol::REL * scale;
    (equal, opposite)
}

/// The first candidate (in enumeration order) whose sum is invertible.
fn search(
    betas: &GeneratorSet,
    gammas: &GeneratorSet,
    candidates: impl IntoIterator<Item = Candidate>,
    indices: IndexSet,
    alternating: bool,
) -> Option<(Candidate, Multivector)> {
    candidates.into_iter().find_map(|c| {
        let f = c.build(gammas);
        let t = intertwiner_sum(betas, gammas, &f, indices, alternating);
        t.is_invertible().then_some((c, t))
    })
}

fn blades_with_parity(n: usize, even: bool) -> impl Iterator<Item = BladeMask> {
    (0..1u32 << n).map(BladeMask).filter(move |m| m.is_even() == even)
}

/// Candidates for even `n`: single blades in increasing mask order, restricted
/// to even grades unless `beta^{1..n} = -gamma^{1..n}` and to odd grades unless
/// `beta^{1..n} = gamma^{1..n}`.
pub fn even_n_candidates(betas: &GeneratorSet, gammas: &GeneratorSet) -> Vec<Candidate> {
    let (equal, opposite) = volume_relation(betas, gammas);
    (0..1u32 << betas.n())
        .map(BladeMask)
        .filter(|m| if m.is_even() { !opposite } else { !equal })
        .map(Candidate::Blade)
        .collect()
}

/// `T` with `gamma^a = T^{-1} beta^a T` for even `n`; unique up to a scalar.
pub fn intertwiner_even_n(betas: &GeneratorSet, gammas: &GeneratorSet) -> Result<IntertwinerResult> {
    let sig = check_pair(betas, gammas)?;
    if sig.n() % 2 != 0 {
        return Err(Error::Unsupported(format!("even-n solver called with n = {}", sig.n())));
    }
    let (c, t) = search(betas, gammas, even_n_candidates(betas, gammas), IndexSet::All, false)
        .ok_or(Error::NoIntertwiner)?;
    finish(betas, gammas, t, Relation::Similar, c)
}

/// Every candidate that yields an invertible intertwiner for even `n`.
pub fn all_even_n_intertwiners(
    betas: &GeneratorSet,
    gammas: &GeneratorSet,
) -> Result<Vec<IntertwinerResult>> {
    check_pair(betas, gammas)?;
    even_n_candidates(betas, gammas)
        .into_iter()
        .filter_map(|c| {
            let t = intertwiner_sum(betas, gammas, &c.build(gammas), IndexSet::All, false);
            t.is_invertible().then(|| finish(betas, gammas, t, Relation::Similar, c))
        })
        .collect()
}

/// Candidates for odd `n`: `gamma^A` for even `A` in increasing mask order,
/// then `gamma^A + gamma^B` for even `A < B` in lexicographic order.
pub fn odd_n_candidates(n: usize) -> Vec<Candidate> {
    let evens: Vec<BladeMask> = blades_with_parity(n, true).collect();
    let mut out: Vec<Candidate> = evens.iter().map(|&a| Candidate::Blade(a)).collect();
    for (i, &a) in evens.iter().enumerate() {
        for &b in &evens[i + 1..] {
            out.push(Candidate::Pair(a, b));
        }
    }
    out
}

/// `T` with `gamma^a = (beta^{1..n} gamma_{1..n}) T^{-1} beta^a T` for odd `n`.
pub fn intertwiner_odd_n(betas: &GeneratorSet, gammas: &GeneratorSet) -> Result<IntertwinerResult> {
    let sig = check_pair(betas, gammas)?;
    if sig.n() % 2 != 1 {
        return Err(Error::Unsupported(format!("odd-n solver called with n = {}", sig.n())));
    }
    let factor = &betas.volume_element() * &gammas.lowered_blade(BladeMask::full(sig.n()));
    let case = VolumeFactor::classify(&factor)?;
    let (c, t) = search(betas, gammas, odd_n_candidates(sig.n()), IndexSet::Even, false)
        .ok_or(Error::NoIntertwiner)?;
    finish(betas, gammas, t, Relation::Scaled(case), c)
}

/// Every candidate that yields an invertible intertwiner for odd `n`.
pub fn all_odd_n_intertwiners(
    betas: &GeneratorSet,
    gammas: &GeneratorSet,
) -> Result<Vec<IntertwinerResult>> {
    let sig = check_pair(betas, gammas)?;
    let factor = &betas.volume_element() * &gammas.lowered_blade(BladeMask::full(sig.n()));
    let case = VolumeFactor::classify(&factor)?;
    odd_n_candidates(sig.n())
        .into_iter()
        .filter_map(|c| {
            let t = intertwiner_sum(betas, gammas, &c.build(gammas), IndexSet::Even, false);
            t.is_invertible()
                .then(|| finish(betas, gammas, t, Relation::Scaled(case), c))
        })
        .collect()
}

/// Intertwiner between two sets of odd elements.
#[derive(Clone, Debug, PartialEq)]
pub struct OddIntertwiner {
    pub result: IntertwinerResult,
    /// `+1` iff `beta^{1..n} = gamma^{1..n}`; the relation is `gamma^a = sign T^{-1} beta^a T`.
    pub sign: i8,
}

/// Checks both sets are odd-graded and returns whether the volume elements agree.
fn odd_volumes(betas: &GeneratorSet, gammas: &GeneratorSet) -> Result<bool> {
    betas.check_odd()?;
    gammas.check_odd()?;
    let sig = betas.signature();
    let pseudo = Multivector::pseudoscalar(sig);
    for v in [betas.volume_element(), gammas.volume_element()] {
        let residual = v.distance(&pseudo).min(v.distance(&-&pseudo));
        if residual > tol::REL * v.norm_inf().max(1.0) {
            return Err(Error::VolumeMismatch { residual });
        }
    }
    let (equal, _) = volume_relation(betas, gammas);
    Ok(equal)
}

fn require_parity(r: &IntertwinerResult, expected: Parity) -> Result<()> {
    let off = match expected {
        Parity::Even => r.t.odd_part().norm_inf(),
        Parity::Odd => r.t.even_part().norm_inf(),
        Parity::Mixed => 0.0,
    };
    if off > tol::ZERO * r.t.norm_inf() {
        return Err(Error::CertificateFailed {
            residual: off / r.t.norm_inf(),
        });
    }
    Ok(())
}

/// `T` with `gamma^a = ±T^{-1} beta^a T` for odd-graded generator sets.
///
/// For even `n`, `T` is even when the volume elements agree and odd otherwise;
/// for odd `n` the even-graded representative is returned.
pub fn intertwiner_odd_generators(
    betas: &GeneratorSet,
    gammas: &GeneratorSet,
) -> Result<OddIntertwiner> {
    let sig = check_pair(betas, gammas)?;
    let n = sig.n();
    let equal = odd_volumes(betas, gammas)?;
    let sign: i8 = if equal { 1 } else { -1 };
    let relation = Relation::Scaled(if equal {
        VolumeFactor::PlusOne
    } else {
        VolumeFactor::MinusOne
    });
    let (candidates, indices, alternating, parity) = if n % 2 == 0 {
        if equal {
            (blades_with_parity(n, true).collect::<Vec<_>>(), IndexSet::All, false, Parity::Even)
        } else {
            (blades_with_parity(n, false).collect(), IndexSet::All, true, Parity::Odd)
        }
    } else {
        (blades_with_parity(n, true).collect(), IndexSet::Even, false, Parity::Even)
    };
    let (c, t) = search(
        betas,
        gammas,
        candidates.into_iter().map(Candidate::Blade),
        indices,
        alternating,
    )
    .ok_or(Error::NoIntertwiner)?;
    let result = finish(betas, gammas, t, relation, c)?;
    require_parity(&result, parity)?;
    Ok(OddIntertwiner { result, sign })
}

/// Candidate blades and sum layout for the twisted relation.
fn twisted_layout(n: usize, equal: bool) -> (Vec<BladeMask>, IndexSet, bool, Parity) {
    let parity = if equal { Parity::Even } else { Parity::Odd };
    let blades = blades_with_parity(n, equal).collect();
    if n % 2 == 0 {
        (blades, IndexSet::All, !equal, parity)
    } else {
        (blades, IndexSet::Even, false, parity)
    }
}

/// `T` with `gamma^a = (T^)^{-1} beta^a T` for odd-graded generator sets,
/// unique up to a scalar; even when the volume elements agree, odd otherwise.
pub fn intertwiner_grade_involution(
    betas: &GeneratorSet,
    gammas: &GeneratorSet,
) -> Result<IntertwinerResult> {
    let sig = check_pair(betas, gammas)?;
    let equal = odd_volumes(betas, gammas)?;
    let (blades, indices, alternating, parity) = twisted_layout(sig.n(), equal);
    let (c, t) = search(
        betas,
        gammas,
        blades.into_iter().map(Candidate::Blade),
        indices,
        alternating,
    )
    .ok_or(Error::NoIntertwiner)?;
    let result = finish(betas, gammas, t, Relation::Twisted, c)?;
    require_parity(&result, parity)?;
    Ok(result)
}

/// Every candidate that yields an invertible twisted intertwiner.
pub fn all_grade_involution_intertwiners(
    betas: &GeneratorSet,
    gammas: &GeneratorSet,
) -> Result<Vec<IntertwinerResult>> {
    let sig = check_pair(betas, gammas)?;
    let equal = odd_volumes(betas, gammas)?;
    let (blades, indices, alternating, _) = twisted_layout(sig.n(), equal);
    blades
        .into_iter()
        .filter_map(|m| {
            let c = Candidate::Blade(m);
            let t = intertwiner_sum(betas, gammas, &c.build(gammas), indices, alternating);
            t.is_invertible()
                .then(|| finish(betas, gammas, t, Relation::Twisted, c))
        })
        .collect()
}
