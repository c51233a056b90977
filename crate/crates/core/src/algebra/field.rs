//! Arithmetic in a prime field `F_p` with a runtime modulus `p < 2^63`.
//!
//! The default modulus is the Mersenne prime `2^61 - 1`, for which
//! multiplication uses a shift-and-add reduction instead of a 128-bit
//! division.

use std::fmt;

use crate::error::{Error, Result};

/// `2^61 - 1`.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// An element of `F_p`, always stored reduced into `[0, p)`.
///
/// Elements carry no reference to their field; mixing elements of different
/// fields is a logic error the type system does not catch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        Self::mersenne61()
    }
}

impl PrimeField {
    /// Builds `F_p`, rejecting composite or out-of-range moduli.
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p >= 1 << 63 {
            return Err(Error::InvalidArgument(format!(
                "modulus {p} must lie in [3, 2^63)"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("modulus {p} is not prime")));
        }
        Ok(Self { p })
    }

    pub const fn mersenne61() -> Self {
        Self { p: MERSENNE_61 }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn elem(&self, v: u64) -> FieldElement {
        FieldElement(v % self.p)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        self.from_i128(v as i128)
    }

    pub fn from_i128(&self, v: i128) -> FieldElement {
        let r = v.rem_euclid(self.p as i128);
        FieldElement(r as u64)
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn to_signed(&self, a: FieldElement) -> i128 {
        if a.0 > self.p / 2 {
            a.0 as i128 - self.p as i128
        } else {
            a.0 as i128
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a.0 + b.0;
        FieldElement(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            a.0 + self.p - b.0
        })
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let prod = a.0 as u128 * b.0 as u128;
        if self.p == MERSENNE_61 {
            let lo = (prod as u64) & MERSENNE_61;
            let hi = (prod >> 61) as u64;
            let s = lo + hi;
            let s = (s & MERSENNE_61) + (s >> 61);
            FieldElement(if s >= MERSENNE_61 { s - MERSENNE_61 } else { s })
        } else {
            FieldElement((prod % self.p as u128) as u64)
        }
    }

    pub fn pow(&self, mut base: FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
