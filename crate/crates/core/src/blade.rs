//! Basis blades `e^A` encoded as bit masks: generator `a` (1-based) lives in bit `a - 1`.

use std::fmt;

use crate::error::{Error, Result};
use crate::signature::Signature;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BladeMask(pub u32);

impl BladeMask {
    /// The identity element `e`.
    pub const IDENTITY: BladeMask = BladeMask(0);

    /// Blade of a single generator, 1-based.
    pub fn generator(a: usize) -> BladeMask {
        debug_assert!(a >= 1);
        BladeMask(1 << (a - 1))
    }

    /// The pseudoscalar `e^{1...n}`.
    pub fn full(n: usize) -> BladeMask {
        BladeMask((1u32 << n) - 1)
    }

    /// Builds a mask from a strictly increasing list of 1-based indices.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<BladeMask> {
        let mut bits = 0u32;
        let mut last = 0;
        for &a in indices {
            if a == 0 || a > n {
                return Err(Error::IndexOutOfRange { index: a, n });
            }
            if a <= last {
                return Err(Error::BadMultiIndex(indices.to_vec()));
            }
            last = a;
            bits |= 1 << (a - 1);
        }
        Ok(BladeMask(bits))
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).map(|i| i + 1).collect()
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_even(self) -> bool {
        self.0.count_ones() % 2 == 0
    }

    pub fn fits(self, n: usize) -> bool {
        self.0 >> n == 0
    }

    pub fn contains(self, a: usize) -> bool {
        self.0 >> (a - 1) & 1 == 1
    }
}

impl fmt::Display for BladeMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "e");
        }
        let idx = self.indices();
        let sep = if idx.iter().any(|&a| a >= 10) { "," } else { "" };
        let body: Vec<String> = idx.iter().map(|a| a.to_string()).collect();
        write!(f, "e^{{{}}}", body.join(sep))
    }
}

/// Number of transpositions needed to bring `e^A e^B` into increasing order.
///
/// For every set bit of `b`, counts the bits of `a` strictly above it.
#[inline]
pub fn reorder_parity(a: u32, b: u32) -> u32 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> j >> 1).count_ones();
        rest &= rest - 1;
    }
    swaps & 1
}

/// Sign of `e^A e^B`, given the mask of negative-square generators.
#[inline]
pub fn product_sign(a: u32, b: u32, negative: u32) -> f64 {
    let flips = reorder_parity(a, b) + ((a & b & negative).count_ones() & 1);
    if flips & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `e^A e^B = sign * e^{A xor B}`.
pub fn blade_product(a: BladeMask, b: BladeMask, sig: &Signature) -> (f64, BladeMask) {
    debug_assert!(a.fits(sig.n()) && b.fits(sig.n()));
    (product_sign(a.0, b.0, sig.negative_mask()), BladeMask(a.0 ^ b.0))
}

/// Sign picked up by reversion of a grade-`k` blade.
#[inline]
pub fn reversion_sign(k: usize) -> f64 {
    if (k * k.saturating_sub(1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign picked up by grade involution of a grade-`k` blade.
#[inline]
pub fn involution_sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
