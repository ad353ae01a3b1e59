//! Noncommutative polynomials in the matrix entry generators `t[r,c]` and
//! their reduction to a canonical normal form.
//!
//! The generators satisfy three families of quadratic relations: same-row
//! and same-column entries q-commute, and entries in "crossing" position
//! either commute outright or commute up to a `(q - q^-1)` correction term,
//! depending on the orientation of the crossing. Orienting every relation
//! towards the `(row, col)`-lexicographically nondecreasing word yields a
//! terminating, confluent rewriting system; `normal_form` runs it to a
//! fixpoint.
//!
//! Labels are plain positive integers and no ambient matrix size is stored:
//! a polynomial over labels `{1,2}` reduces identically whether it is viewed
//! inside a 2x2 or a 4x4 matrix algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::laurent::LaurentInt;

/// A single generator `t[row, col]`; both labels are at least 1.
/// Generators are totally ordered by `(row, col)` lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    row: u32,
    col: u32,
}

impl Generator {
    pub fn new(row: u32, col: u32) -> Self {
        assert!(row >= 1 && col >= 1, "generator labels must be positive");
        Generator { row, col }
    }

    pub fn row(&self) -> u32 {
        self.row
    }

    pub fn col(&self) -> u32 {
        self.col
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t[{},{}]", self.row, self.col)
    }
}

/// A word in the generators; the empty word is the unit of the algebra.
/// A word is in normal order when its letters are nondecreasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn new(factors: Vec<Generator>) -> Self {
        Word(factors)
    }

    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn single(g: Generator) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[Generator] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_normal_order(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Positions `i` such that the adjacent pair `(w[i], w[i+1])` is inverted.
    fn redexes(&self) -> Vec<usize> {
        (0..self.0.len().saturating_sub(1)).filter(|&i| self.0[i] > self.0[i + 1]).collect()
    }

    /// Sorted multiset of row labels; reductions preserve it.
    pub fn row_labels(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.0.iter().map(|g| g.row).collect();
        v.sort_unstable();
        v
    }

    /// Sorted multiset of column labels; reductions preserve it.
    pub fn col_labels(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.0.iter().map(|g| g.col).collect();
        v.sort_unstable();
        v
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("pair {0}*{1} is already in normal order")]
    AlreadyOrdered(Generator, Generator),
}

/// Rewrites the inverted two-letter word `g1*g2` (so `g1 > g2`) into its
/// normal-ordered equivalent.
///
/// With `a = g2` (the smaller letter) and `b = g1`, the cases are:
/// - same row: `b*a -> q^-1 a*b`
/// - same column: `b*a -> q^-1 a*b`
/// - `b.row > a.row` and `b.col > a.col`:
///   `b*a -> a*b - (q - q^-1) t[a.row, b.col]*t[b.row, a.col]`
/// - `b.row > a.row` and `b.col < a.col`: `b*a -> a*b` (the letters commute)
pub fn reduce_pair(g1: Generator, g2: Generator) -> Result<NCPoly, ReduceError> {
    if g1 <= g2 {
        return Err(ReduceError::AlreadyOrdered(g1, g2));
    }
    let swapped = Word(vec![g2, g1]);
    let q_inv = LaurentInt::q_pow(-1);
    let out = if g1.row == g2.row || g1.col == g2.col {
        NCPoly::from_term(swapped, q_inv)
    } else if g1.col > g2.col {
        // crossing oriented with the correction term; the correction word
        // t[a.row, b.col]*t[b.row, a.col] is already in normal order
        let corr = Word(vec![Generator::new(g2.row, g1.col), Generator::new(g1.row, g2.col)]);
        let coeff = -(LaurentInt::q_pow(1) - LaurentInt::q_pow(-1));
        let mut p = NCPoly::from_term(swapped, LaurentInt::one());
        p.add_term(corr, coeff);
        p
    } else {
        NCPoly::from_term(swapped, LaurentInt::one())
    };
    Ok(out)
}

/// A noncommutative polynomial: a finite map from words to coefficients,
/// with no zero coefficient stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, LaurentInt>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly { terms: BTreeMap::new() }
    }

    pub fn unit() -> Self {
        NCPoly::from_term(Word::unit(), LaurentInt::one())
    }

    pub fn generator(row: u32, col: u32) -> Self {
        NCPoly::from_term(Word::single(Generator::new(row, col)), LaurentInt::one())
    }

    pub fn from_term(word: Word, coeff: LaurentInt) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn from_word(word: Word) -> Self {
        NCPoly::from_term(word, LaurentInt::one())
    }

    pub fn add_term(&mut self, word: Word, coeff: LaurentInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(c) => {
                let sum = &*c + &coeff;
                if sum.is_zero() {
                    self.terms.remove(&word);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(word, coeff);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &LaurentInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, word: &Word) -> LaurentInt {
        self.terms.get(word).cloned().unwrap_or_else(LaurentInt::zero)
    }

    pub fn scale(&self, c: &LaurentInt) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a * c);
        }
        out
    }

    pub fn is_normal_form(&self) -> bool {
        self.terms.keys().all(Word::is_normal_order)
    }

    /// Reduces every word to normal order, rewriting the leftmost inverted
    /// pair first. The result does not depend on the choice of redex (see
    /// `normal_form_with`), and the map is idempotent.
    pub fn normal_form(&self) -> NCPoly {
        self.normal_form_with(|_| 0)
    }

    /// Like `normal_form`, but the caller picks which redex to rewrite at
    /// every step: `pick` receives the number of inverted adjacent pairs in
    /// the current word and must return an index below it. Used to exercise
    /// confluence; `pick` is called exactly once per rewrite step.
    pub fn normal_form_with<F: FnMut(usize) -> usize>(&self, mut pick: F) -> NCPoly {
        let mut out = NCPoly::zero();
        let mut stack: Vec<(Word, LaurentInt)> =
            self.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        while let Some((word, coeff)) = stack.pop() {
            let redexes = word.redexes();
            if redexes.is_empty() {
                out.add_term(word, coeff);
                continue;
            }
            let choice = pick(redexes.len());
            assert!(choice < redexes.len(), "redex index out of range");
            let i = redexes[choice];
            let g1 = word.factors()[i];
            let g2 = word.factors()[i + 1];
            let replacement = reduce_pair(g1, g2).expect("redex positions are inverted pairs");
            for (mid, c) in replacement.terms() {
                let mut v = Vec::with_capacity(word.len());
                v.extend_from_slice(&word.factors()[..i]);
                v.extend_from_slice(mid.factors());
                v.extend_from_slice(&word.factors()[i + 2..]);
                stack.push((Word(v), &coeff * c));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.normal_form().terms.is_empty()
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;

    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;

    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;

    fn neg(self) -> NCPoly {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect() }
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;

    /// Bilinear extension of word concatenation, followed by `normal_form`.
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut raw = NCPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                raw.add_term(wa.concat(wb), ca * cb);
            }
        }
        raw.normal_form()
    }
}

impl Add for NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: NCPoly) -> NCPoly {
        &self + &rhs
    }
}

impl Sub for NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: NCPoly) -> NCPoly {
        &self - &rhs
    }
}

impl Mul for NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: NCPoly) -> NCPoly {
        &self * &rhs
    }
}

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -&self
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                if w.is_empty() {
                    format!("({c})")
                } else if c.is_one() {
                    w.to_string()
                } else {
                    format!("({c})*{w}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(r: u32, c: u32) -> Generator {
        Generator::new(r, c)
    }

    fn word(gens: &[(u32, u32)]) -> Word {
        Word::new(gens.iter().map(|&(r, c)| t(r, c)).collect())
    }

    fn q() -> LaurentInt {
        LaurentInt::q_pow(1)
    }

    #[test]
    fn reduce_same_row() {
        // t[1,2]*t[1,1] -> q^-1 t[1,1]*t[1,2]
        let p = reduce_pair(t(1, 2), t(1, 1)).unwrap();
        let mut expected = NCPoly::zero();
        expected.add_term(word(&[(1, 1), (1, 2)]), LaurentInt::q_pow(-1));
        assert_eq!(p, expected);
    }

    #[test]
    fn reduce_plain_swap() {
        // t[2,1]*t[1,2] -> t[1,2]*t[2,1]
        let p = reduce_pair(t(2, 1), t(1, 2)).unwrap();
        assert_eq!(p, NCPoly::from_word(word(&[(1, 2), (2, 1)])));
    }

    #[test]
    fn reduce_crossing_with_correction() {
        // t[2,2]*t[1,1] -> t[1,1]*t[2,2] - (q - q^-1) t[1,2]*t[2,1]
        let p = reduce_pair(t(2, 2), t(1, 1)).unwrap();
        let mut expected = NCPoly::from_word(word(&[(1, 1), (2, 2)]));
        expected.add_term(word(&[(1, 2), (2, 1)]), -(q() - LaurentInt::q_pow(-1)));
        assert_eq!(p, expected);
    }

    #[test]
    fn reduce_rejects_ordered_input() {
        assert_eq!(
            reduce_pair(t(1, 1), t(1, 2)),
            Err(ReduceError::AlreadyOrdered(t(1, 1), t(1, 2)))
        );
        assert_eq!(
            reduce_pair(t(1, 1), t(1, 1)),
            Err(ReduceError::AlreadyOrdered(t(1, 1), t(1, 1)))
        );
    }

    #[test]
    fn normal_form_kills_same_row_relation() {
        // t[1,1]t[1,2] - q t[1,2]t[1,1] = 0
        let mut p = NCPoly::from_word(word(&[(1, 1), (1, 2)]));
        p.add_term(word(&[(1, 2), (1, 1)]), -q());
        assert!(p.is_zero());
    }

    #[test]
    fn normal_form_fixes_unit() {
        assert_eq!(NCPoly::unit().normal_form(), NCPoly::unit());
        assert_eq!(NCPoly::zero().normal_form(), NCPoly::zero());
    }

    #[test]
    fn normal_form_three_letters() {
        // t[2,2]t[1,1]t[1,1] -> t[1,1]t[1,1]t[2,2] - (q - q^-3) t[1,1]t[1,2]t[2,1]
        let p = NCPoly::from_word(word(&[(2, 2), (1, 1), (1, 1)])).normal_form();
        let mut expected = NCPoly::from_word(word(&[(1, 1), (1, 1), (2, 2)]));
        expected.add_term(word(&[(1, 1), (1, 2), (2, 1)]), -(q() - LaurentInt::q_pow(-3)));
        assert_eq!(p, expected);
    }

    #[test]
    fn mul_unit_and_ordered() {
        let p = NCPoly::generator(1, 1);
        assert_eq!(&NCPoly::unit() * &p, p);
        assert_eq!(
            &NCPoly::generator(1, 1) * &NCPoly::generator(1, 2),
            NCPoly::from_word(word(&[(1, 1), (1, 2)]))
        );
        // t[1,2] * t[1,1] = q^-1 t[1,1]t[1,2]
        assert_eq!(
            &NCPoly::generator(1, 2) * &NCPoly::generator(1, 1),
            NCPoly::from_term(word(&[(1, 1), (1, 2)]), LaurentInt::q_pow(-1))
        );
    }

    #[test]
    fn is_zero_cases() {
        assert!(NCPoly::zero().is_zero());
        assert!(!NCPoly::generator(1, 1).is_zero());
        // t[1,1]t[2,2] - t[2,2]t[1,1] - (q - q^-1) t[2,1]t[1,2] = 0
        let mut p = NCPoly::from_word(word(&[(1, 1), (2, 2)]));
        p.add_term(word(&[(2, 2), (1, 1)]), -LaurentInt::one());
        p.add_term(word(&[(2, 1), (1, 2)]), -(q() - LaurentInt::q_pow(-1)));
        assert!(p.is_zero());
    }

    #[test]
    fn bigrading_preserved() {
        let w = word(&[(2, 2), (1, 3), (2, 1), (1, 1)]);
        let rows = w.row_labels();
        let cols = w.col_labels();
        let nf = NCPoly::from_word(w).normal_form();
        assert!(nf.num_terms() > 0);
        for (key, _) in nf.terms() {
            assert_eq!(key.row_labels(), rows);
            assert_eq!(key.col_labels(), cols);
        }
    }
}
