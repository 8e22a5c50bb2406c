//! Explicit complex matrix representations of Clifford generators and
//! matrix-level intertwiners.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::blade::BladeMask;
use crate::error::{Error, Result};
use crate::linalg;
use crate::multivector::Multivector;
use crate::signature::{Field, Signature};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square matrix over the reals or the complex numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    complex: bool,
    data: DMatrix<Complex64>,
}

impl DenseMatrix {
    pub fn new(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::DimensionMismatch {
                expected: data.nrows(),
                got: data.ncols(),
            });
        }
        let complex = data.iter().any(|c| c.im != 0.0);
        Ok(DenseMatrix { complex, data })
    }

    pub fn identity(order: usize) -> Self {
        DenseMatrix {
            complex: false,
            data: DMatrix::identity(order, order),
        }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let order = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != order) {
            return Err(Error::DimensionMismatch {
                expected: order,
                got: r.len(),
            });
        }
        Self::new(DMatrix::from_fn(order, order, |i, j| rows[i][j]))
    }

    /// Pauli matrix `sigma_k`, `k` in 1..=3.
    pub fn pauli(k: usize) -> Self {
        let rows = match k {
            1 => [[ZERO, ONE], [ONE, ZERO]],
            2 => [[ZERO, -I], [I, ZERO]],
            3 => [[ONE, ZERO], [ZERO, -ONE]],
            _ => panic!("Pauli index {k} out of range"),
        };
        DenseMatrix::new(DMatrix::from_fn(2, 2, |i, j| rows[i][j])).expect("square")
    }

    pub fn order(&self) -> usize {
        self.data.nrows()
    }

    pub fn is_complex(&self) -> bool {
        self.complex
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    fn wrap(data: DMatrix<Complex64>) -> DenseMatrix {
        DenseMatrix {
            complex: data.iter().any(|c| c.im != 0.0),
            data,
        }
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        Self::wrap(&self.data * &other.data)
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        Self::wrap(&self.data + &other.data)
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        Self::wrap(&self.data - &other.data)
    }

    pub fn scale(&self, c: Complex64) -> DenseMatrix {
        Self::wrap(&self.data * c)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        Self::wrap(self.data.kronecker(&other.data))
    }

    pub fn norm_inf(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &DenseMatrix) -> f64 {
        (&self.data - &other.data).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn singular_ratio(&self) -> f64 {
        linalg::singular_ratio(&self.data)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        let ratio = self.singular_ratio();
        if ratio <= tol::MATRIX {
            return Err(Error::NonInvertible { ratio });
        }
        let inv = self
            .data
            .clone()
            .try_inverse()
            .ok_or(Error::NonInvertible { ratio })?;
        Ok(Self::wrap(inv))
    }

    /// `min_c |self - c other| / |self|` for complex `c`, measured entrywise.
    pub fn colinearity_residual(&self, other: &DenseMatrix) -> f64 {
        let (i, j, _) = other
            .data
            .iter()
            .enumerate()
            .map(|(k, c)| (k % other.order(), k / other.order(), c.norm()))
            .fold((0, 0, -1.0), |best, x| if x.2 > best.2 { x } else { best });
        let pivot = other.data[(i, j)];
        let scale = self.norm_inf().max(other.norm_inf());
        if pivot.norm() == 0.0 || scale == 0.0 {
            return if self.norm_inf() == other.norm_inf() { 0.0 } else { 1.0 };
        }
        let c = self.data[(i, j)] / pivot;
        self.distance(&other.scale(c)) / self.norm_inf().max(f64::MIN_POSITIVE)
    }
}

/// Matrix of left multiplication by `u` in the blade basis.
pub fn left_regular_matrix(u: &Multivector) -> DenseMatrix {
    DenseMatrix {
        complex: u.signature().is_complex(),
        data: linalg::left_regular_complex(u),
    }
}

/// Matrices satisfying the Clifford relations of `(p,q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaRep {
    sig: Signature,
    mats: Vec<DenseMatrix>,
}

impl GammaRep {
    /// Validates `m_a m_b + m_b m_a = 2 eta^{ab} 1` to `1e-10`.
    pub fn new(sig: Signature, mats: Vec<DenseMatrix>) -> Result<Self> {
        let n = sig.n();
        if mats.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: mats.len(),
            });
        }
        let order = mats[0].order();
        if let Some(m) = mats.iter().find(|m| m.order() != order) {
            return Err(Error::DimensionMismatch {
                expected: order,
                got: m.order(),
            });
        }
        let id = DenseMatrix::identity(order);
        let mut residual = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let ac = mats[a].mul(&mats[b]).add(&mats[b].mul(&mats[a]));
                let eta = if a == b { 2.0 * sig.metric(a + 1) } else { 0.0 };
                let r = ac.distance(&id.scale(Complex64::new(eta, 0.0)));
                residual = residual.max(r / (mats[a].norm_inf() * mats[b].norm_inf()).max(1.0));
            }
        }
        if residual > tol::MATRIX {
            return Err(Error::InvalidGenerators { residual });
        }
        Ok(GammaRep { sig, mats })
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn mats(&self) -> &[DenseMatrix] {
        &self.mats
    }

    pub fn order(&self) -> usize {
        self.mats[0].order()
    }

    /// `m^{a_1} ... m^{a_k}` for the generators in `mask`.
    pub fn raised(&self, mask: BladeMask) -> DenseMatrix {
        mask.indices()
            .into_iter()
            .fold(DenseMatrix::identity(self.order()), |acc, a| acc.mul(&self.mats[a - 1]))
    }

    /// Inverse of [`GammaRep::raised`]: `eta^{a_k a_k} m^{a_k} ... eta^{a_1 a_1} m^{a_1}`.
    pub fn lowered(&self, mask: BladeMask) -> DenseMatrix {
        mask.indices().into_iter().fold(DenseMatrix::identity(self.order()), |acc, a| {
            self.mats[a - 1]
                .scale(Complex64::new(self.sig.metric(a), 0.0))
                .mul(&acc)
        })
    }

    /// `m^{1...n}`.
    pub fn volume(&self) -> DenseMatrix {
        self.raised(BladeMask::full(self.sig.n()))
    }
}

/// Euclidean generators of order `2^{m/2}` for even `m`.
fn euclidean_even(m: usize) -> Vec<DenseMatrix> {
    if m == 0 {
        return Vec::new();
    }
    let prev = euclidean_even(m - 2);
    let order = 1 << (m / 2 - 1);
    let id = DenseMatrix::identity(order);
    let mut gens: Vec<DenseMatrix> = prev.iter().map(|g| g.kron(&DenseMatrix::pauli(3))).collect();
    gens.push(id.kron(&DenseMatrix::pauli(1)));
    gens.push(id.kron(&DenseMatrix::pauli(2)));
    gens
}

/// Complex representation of `Cl(p,q)` of order `2^{floor(n/2)}`.
///
/// Uses tensor products of Pauli matrices for the Euclidean case, completes
/// odd `n` with a normalized product of the others, and multiplies the
/// negative-square slots by `i`.
pub fn gamma_complex(sig: Signature) -> Result<GammaRep> {
    let n = sig.n();
    let m = n - n % 2;
    let mut gens = euclidean_even(m);
    if n % 2 == 1 {
        let order = 1 << (m / 2);
        let prod = gens
            .iter()
            .fold(DenseMatrix::identity(order), |acc, g| acc.mul(g));
        let c = if (m / 2) % 2 == 0 { ONE } else { -I };
        gens.push(prod.scale(c));
    }
    let gens = gens
        .into_iter()
        .enumerate()
        .map(|(a, g)| if sig.metric(a + 1) < 0.0 { g.scale(I) } else { g })
        .collect();
    GammaRep::new(sig.with_field(Field::Complex), gens)
}

fn check_reps(betas: &GammaRep, gammas: &GammaRep, order: usize) -> Result<Signature> {
    if betas.signature().p() != gammas.signature().p() || betas.signature().q() != gammas.signature().q() {
        return Err(Error::SignatureMismatch(
            betas.signature().to_string(),
            gammas.signature().to_string(),
        ));
    }
    for r in [betas, gammas] {
        if r.order() != order {
            return Err(Error::DimensionMismatch {
                expected: order,
                got: r.order(),
            });
        }
    }
    Ok(betas.signature())
}

/// `sum_{A in I} beta^A F gamma_A`, with `I` all masks or the even ones.
fn matrix_sum(betas: &GammaRep, gammas: &GammaRep, f: &DenseMatrix, even_only: bool) -> DenseMatrix {
    let n = betas.signature().n();
    let order = betas.order();
    let mut total = DenseMatrix::new(DMatrix::zeros(order, order)).expect("square");
    for mask in 0..1u32 << n {
        if even_only && mask.count_ones() % 2 == 1 {
            continue;
        }
        let m = BladeMask(mask);
        total = total.add(&betas.raised(m).mul(f).mul(&gammas.lowered(m)));
    }
    total
}

/// Largest `|T x^a - s y^a T| / |T|` over the generators.
fn matrix_relation_residual(t: &DenseMatrix, gammas: &GammaRep, betas: &GammaRep, sign: f64) -> f64 {
    let s = Complex64::new(sign, 0.0);
    gammas
        .mats()
        .iter()
        .zip(betas.mats())
        .map(|(g, b)| t.mul(g).distance(&b.mul(t).scale(s)) / t.norm_inf().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

fn first_invertible(
    betas: &GammaRep,
    gammas: &GammaRep,
    even_only: bool,
    sign: f64,
) -> Result<DenseMatrix> {
    let n = betas.signature().n();
    for mask in (0..1u32 << n).filter(|m| m.count_ones() % 2 == 0) {
        let f = gammas.raised(BladeMask(mask));
        let t = matrix_sum(betas, gammas, &f, even_only);
        if t.singular_ratio() > tol::MATRIX {
            let residual = matrix_relation_residual(&t, gammas, betas, sign);
            if residual > tol::REL {
                return Err(Error::CertificateFailed { residual });
            }
            return Ok(t);
        }
    }
    Err(Error::NoIntertwiner)
}

/// Invertible `M` with `gamma^a = M^{-1} beta^a M` for two complex
/// representations of order `2^{n/2}`, `n` even.
pub fn matrix_intertwiner_even(betas: &GammaRep, gammas: &GammaRep) -> Result<DenseMatrix> {
    let n = betas.signature().n();
    if n % 2 == 1 {
        return Err(Error::Unsupported("matrix intertwiner requires even n".into()));
    }
    check_reps(betas, gammas, 1 << (n / 2))?;
    first_invertible(betas, gammas, false, 1.0)
}

/// `(M, s)` with `gamma^a = s M^{-1} beta^a M`, for odd `n` with
/// `p - q = 3 mod 4` and representations of order `2^{(n-1)/2}`.
pub fn matrix_intertwiner_odd_sign(betas: &GammaRep, gammas: &GammaRep) -> Result<(DenseMatrix, i8)> {
    let sig = betas.signature();
    let n = sig.n();
    if n % 2 == 0 || sig.p_minus_q_mod(4) != 3 {
        return Err(Error::Unsupported(
            "signed matrix intertwiner requires odd n and p - q = 3 mod 4".into(),
        ));
    }
    check_reps(betas, gammas, 1 << (n / 2))?;
    let full = BladeMask::full(n);
    let factor = betas.raised(full).mul(&gammas.lowered(full));
    let id = DenseMatrix::identity(betas.order());
    let plus = factor.distance(&id);
    let minus = factor.distance(&id.scale(-ONE));
    let sign: i8 = if plus <= tol::REL {
        1
    } else if minus <= tol::REL {
        -1
    } else {
        return Err(Error::VolumeMismatch {
            residual: plus.min(minus),
        });
    };
    let t = first_invertible(betas, gammas, true, f64::from(sign))?;
    Ok((t, sign))
}

/// Dimension of `{T : T gamma^a = sign beta^a T for all a}`.
pub fn intertwining_nullspace_dim(betas: &GammaRep, gammas: &GammaRep, sign: f64) -> Result<usize> {
    let order = betas.order();
    check_reps(betas, gammas, order)?;
    let n = betas.signature().n();
    let block = order * order;
    let id = DMatrix::<Complex64>::identity(order, order);
    let mut system = DMatrix::zeros(n * block, block);
    for (a, (g, b)) in gammas.mats().iter().zip(betas.mats()).enumerate() {
        let rows = g.data().transpose().kronecker(&id) - id.kronecker(b.data()) * Complex64::new(sign, 0.0);
        system.view_mut((a * block, 0), (block, block)).copy_from(&rows);
    }
    Ok(linalg::nullity(&system, tol::MATRIX))
}
