use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported dimension `n = p + q`.
pub const MAX_DIM: usize = 12;

/// Ground field of the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// Metric signature `(p, q)`: `p` generators square to `+e`, the remaining `q` to `-e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    p: usize,
    q: usize,
    field: Field,
}

impl Signature {
    pub fn new(p: usize, q: usize, field: Field) -> Result<Self> {
        let n = p + q;
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidSignature { p, q, max: MAX_DIM });
        }
        Ok(Signature { p, q, field })
    }

    pub fn real(p: usize, q: usize) -> Result<Self> {
        Self::new(p, q, Field::Real)
    }

    pub fn complex(p: usize, q: usize) -> Result<Self> {
        Self::new(p, q, Field::Complex)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_complex(&self) -> bool {
        self.field == Field::Complex
    }

    /// Same `(p, q)` over another field.
    pub fn with_field(&self, field: Field) -> Self {
        Signature { field, ..*self }
    }

    /// Number of basis blades, `2^n`.
    pub fn dim(&self) -> usize {
        1 << self.n()
    }

    /// Diagonal metric entry for the 1-based generator index `a`.
    pub fn metric(&self, a: usize) -> f64 {
        debug_assert!(a >= 1 && a <= self.n());
        if a <= self.p {
            1.0
        } else {
            -1.0
        }
    }

    /// Bits of the generators with negative square.
    pub fn negative_mask(&self) -> u32 {
        ((1u32 << self.n()) - 1) & !((1u32 << self.p) - 1)
    }

    /// `p - q` reduced into `0..modulus`.
    pub fn p_minus_q_mod(&self, modulus: i64) -> i64 {
        (self.p as i64 - self.q as i64).rem_euclid(modulus)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = match self.field {
            Field::Real => "R",
            Field::Complex => "C",
        };
        write!(f, "Cl^{}({},{})", field, self.p, self.q)
    }
}
