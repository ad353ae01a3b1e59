//! Exact arithmetic in the ring of Laurent polynomials in one variable `q`
//! with arbitrary-precision integer coefficients.
//!
//! This ring is the scalar domain of every computation in the crate. All
//! coefficients appearing in the quantum matrix relations are of the form
//! `±q^k` or small sums thereof, so `Z[q, q^-1]` suffices and keeps every
//! equality test exact. There is no division anywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A Laurent polynomial in `q` over the integers, kept in canonical form:
/// no stored coefficient is zero, so equality is equality of term maps and
/// "is zero" is "the map is empty".
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentInt {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentInt {
    pub fn zero() -> Self {
        LaurentInt { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::q_pow(0)
    }

    /// `q^k`, for any integer `k` (negative exponents are first-class).
    pub fn q_pow(k: i64) -> Self {
        Self::term(BigInt::one(), k)
    }

    /// `(-q)^k = (-1)^k q^k`, valid for negative `k` as well since
    /// `(-q)(-q^-1) = 1`.
    pub fn neg_q_pow(k: i64) -> Self {
        let c = if k.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
        Self::term(c, k)
    }

    /// The monomial `c * q^k`.
    pub fn term(c: BigInt, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentInt { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::term(BigInt::from(n), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Exponent/coefficient pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Sign of the coefficient of the highest power of `q`; used by the
    /// renderer to pull a leading minus out of a term. Zero counts as
    /// non-negative.
    pub fn leading_is_negative(&self) -> bool {
        self.terms.iter().next_back().map(|(_, c)| c.is_negative()).unwrap_or(false)
    }

    fn insert_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }
}

impl Add for &LaurentInt {
    type Output = LaurentInt;

    fn add(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.insert_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentInt {
    type Output = LaurentInt;

    fn sub(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.insert_term(e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentInt {
    type Output = LaurentInt;

    fn mul(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = LaurentInt::zero();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                out.insert_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentInt {
    type Output = LaurentInt;

    fn neg(self) -> LaurentInt {
        LaurentInt { terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect() }
    }
}

impl Add for LaurentInt {
    type Output = LaurentInt;
    fn add(self, rhs: LaurentInt) -> LaurentInt {
        &self + &rhs
    }
}

impl Sub for LaurentInt {
    type Output = LaurentInt;
    fn sub(self, rhs: LaurentInt) -> LaurentInt {
        &self - &rhs
    }
}

impl Mul for LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: LaurentInt) -> LaurentInt {
        &self * &rhs
    }
}

impl Neg for LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        -&self
    }
}

/// Renders one monomial `c * q^e` without any leading sign; `c` must be
/// positive. Shared between `Display` and the expression renderer.
fn push_monomial(out: &mut String, c: &BigInt, e: i64) {
    debug_assert!(c.is_positive());
    if e == 0 {
        out.push_str(&c.to_string());
        return;
    }
    if !c.is_one() {
        out.push_str(&c.to_string());
        out.push('*');
    }
    out.push('q');
    if e != 1 {
        out.push('^');
        out.push_str(&e.to_string());
    }
}

impl fmt::Display for LaurentInt {
    /// Canonical text form: terms in decreasing powers of `q`, e.g.
    /// `q - q^-1`, `-q^3 + 2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            push_monomial(&mut out, &c.abs(), e);
        }
        write!(f, "{out}")
    }
}
