//! The quantum exterior algebra on generators `e_1, ..., e_n`, its normal
//! form, and the two canonical coactions of the matrix bialgebra on it.
//!
//! The defining relations are `e_i ∧ e_j = -q^-1 e_j ∧ e_i` for `i < j` and
//! `e_i ∧ e_i = 0`; the strictly increasing words form a basis. Applying the
//! right coaction `e_i -> Σ_j e_j ⊗ t[j,i]` (or its left mirror) to the top
//! form `e_1 ∧ ... ∧ e_n` leaves a single tensor key whose matrix-side
//! coefficient is the quantum determinant; `extract_colike` performs that
//! extraction and fails loudly if any other key survives.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::laurent::LaurentInt;
use crate::ncpoly::{NCPoly, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("generator index {index} exceeds the rank {n}")]
    IndexOutOfRange { index: u32, n: u32 },
    #[error("coaction of the top form produced an unexpected wedge key {0}")]
    UnexpectedKey(ExtWord),
}

/// A word in the wedge generators, stored as its index sequence.
/// Normal form is a strictly increasing sequence; a repeated index makes
/// the word zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExtWord(Vec<u32>);

impl ExtWord {
    pub fn new(indices: Vec<u32>) -> Self {
        assert!(indices.iter().all(|&i| i >= 1), "wedge indices must be positive");
        ExtWord(indices)
    }

    pub fn unit() -> Self {
        ExtWord(Vec::new())
    }

    /// The top form `e_1 ∧ ... ∧ e_n`.
    pub fn top(n: u32) -> Self {
        ExtWord((1..=n).collect())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    fn concat(&self, other: &ExtWord) -> ExtWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        ExtWord(v)
    }
}

impl fmt::Display for ExtWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("e[{i}]")).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// An element of the exterior algebra: wedge words with Laurent coefficients,
/// no zero coefficient stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExtPoly {
    terms: BTreeMap<ExtWord, LaurentInt>,
}

impl ExtPoly {
    pub fn zero() -> Self {
        ExtPoly { terms: BTreeMap::new() }
    }

    pub fn unit() -> Self {
        ExtPoly::from_term(ExtWord::unit(), LaurentInt::one())
    }

    pub fn generator(i: u32) -> Self {
        ExtPoly::from_term(ExtWord::new(vec![i]), LaurentInt::one())
    }

    pub fn from_term(word: ExtWord, coeff: LaurentInt) -> Self {
        let mut p = ExtPoly::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn from_word(word: ExtWord) -> Self {
        ExtPoly::from_term(word, LaurentInt::one())
    }

    pub fn add_term(&mut self, word: ExtWord, coeff: LaurentInt) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&ExtWord, &LaurentInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.normal_form().terms.is_empty()
    }

    /// Rewrites every word to the strictly increasing basis: a repeated
    /// adjacent index kills the word, an inverted adjacent pair swaps and
    /// picks up a factor of `-q`.
    pub fn normal_form(&self) -> ExtPoly {
        let mut out = ExtPoly::zero();
        let neg_q = LaurentInt::neg_q_pow(1);
        for (word, coeff) in &self.terms {
            let mut w = word.0.clone();
            let mut c = coeff.clone();
            'reduce: loop {
                let mut changed = false;
                for i in 0..w.len().saturating_sub(1) {
                    if w[i] == w[i + 1] {
                        break 'reduce; // word is zero
                    }
                    if w[i] > w[i + 1] {
                        w.swap(i, i + 1);
                        c = &c * &neg_q;
                        changed = true;
                        break;
                    }
                }
                if !changed {
                    out.add_term(ExtWord(w), c);
                    break;
                }
            }
        }
        out
    }

    /// Wedge product: concatenation, bilinear, then normal form.
    pub fn wedge(&self, other: &ExtPoly) -> ExtPoly {
        let mut raw = ExtPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                raw.add_term(wa.concat(wb), ca * cb);
            }
        }
        raw.normal_form()
    }
}

impl fmt::Display for ExtPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| if c.is_one() { w.to_string() } else { format!("({c})*{w}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Which tensor factor carries the matrix algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Matrix factor on the left: `t ⊗ e`.
    Left,
    /// Matrix factor on the right: `e ⊗ t`.
    Right,
}

/// An element of the tensor product of the exterior algebra with the matrix
/// algebra. Keys are stored as (wedge word, matrix word) pairs regardless of
/// side; `side` records which factor is written first. Multiplication is
/// componentwise in both factors with no braiding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    side: Side,
    terms: BTreeMap<(ExtWord, Word), LaurentInt>,
}

impl TensorElement {
    pub fn zero(side: Side) -> Self {
        TensorElement { side, terms: BTreeMap::new() }
    }

    pub fn unit(side: Side) -> Self {
        let mut t = TensorElement::zero(side);
        t.add_term(ExtWord::unit(), Word::unit(), LaurentInt::one());
        t
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn add_term(&mut self, ext: ExtWord, word: Word, coeff: LaurentInt) {
        if coeff.is_zero() {
            return;
        }
        let key = (ext, word);
        match self.terms.get_mut(&key) {
            Some(c) => {
                let sum = &*c + &coeff;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(ExtWord, Word), &LaurentInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        assert_eq!(self.side, other.side, "tensor sides must agree");
        let mut out = self.clone();
        for ((e, w), c) in &other.terms {
            out.add_term(e.clone(), w.clone(), c.clone());
        }
        out
    }

    /// `(a ⊗ x)(b ⊗ y) = (a ∧ b) ⊗ (x y)`, extended bilinearly; both
    /// components are normal-formed.
    pub fn mul(&self, other: &TensorElement) -> TensorElement {
        assert_eq!(self.side, other.side, "tensor sides must agree");
        let mut out = TensorElement::zero(self.side);
        for ((ea, wa), ca) in &self.terms {
            for ((eb, wb), cb) in &other.terms {
                let ext = ExtPoly::from_word(ea.concat(eb)).normal_form();
                if ext.num_terms() == 0 {
                    continue;
                }
                let matrix = NCPoly::from_word(wa.concat(wb)).normal_form();
                let c = ca * cb;
                for (ew, ec) in ext.terms() {
                    for (mw, mc) in matrix.terms() {
                        out.add_term(ew.clone(), mw.clone(), &(&c * ec) * mc);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((e, w), c)| {
                let pair = match self.side {
                    Side::Right => format!("({e})ox({w})"),
                    Side::Left => format!("({w})ox({e})"),
                };
                if c.is_one() {
                    pair
                } else {
                    format!("({c})*{pair}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_indices(p: &ExtPoly, n: u32) -> Result<(), ExteriorError> {
    for (word, _) in p.terms() {
        for &i in word.indices() {
            if i > n {
                return Err(ExteriorError::IndexOutOfRange { index: i, n });
            }
        }
    }
    Ok(())
}

fn coact_generator(i: u32, n: u32, side: Side) -> TensorElement {
    let mut out = TensorElement::zero(side);
    for j in 1..=n {
        match side {
            // e_i -> Σ_j e_j ⊗ t[j,i]
            Side::Right => out.add_term(
                ExtWord::new(vec![j]),
                Word::single(crate::ncpoly::Generator::new(j, i)),
                LaurentInt::one(),
            ),
            // e_i -> Σ_j t[i,j] ⊗ e_j
            Side::Left => out.add_term(
                ExtWord::new(vec![j]),
                Word::single(crate::ncpoly::Generator::new(i, j)),
                LaurentInt::one(),
            ),
        }
    }
    out
}

fn coact(p: &ExtPoly, n: u32, side: Side) -> Result<TensorElement, ExteriorError> {
    check_indices(p, n)?;
    let mut out = TensorElement::zero(side);
    for (word, coeff) in p.terms() {
        let mut acc = TensorElement::unit(side);
        for &i in word.indices() {
            acc = acc.mul(&coact_generator(i, n, side));
        }
        for ((e, w), c) in acc.terms() {
            out.add_term(e.clone(), w.clone(), coeff * c);
        }
    }
    Ok(out)
}

/// The right coaction, the unique algebra-map extension of
/// `e_i -> Σ_{j=1..n} e_j ⊗ t[j,i]`.
pub fn coact_right(p: &ExtPoly, n: u32) -> Result<TensorElement, ExteriorError> {
    coact(p, n, Side::Right)
}

/// The left coaction, the unique algebra-map extension of
/// `e_i -> Σ_{j=1..n} t[i,j] ⊗ e_j`.
pub fn coact_left(p: &ExtPoly, n: u32) -> Result<TensorElement, ExteriorError> {
    coact(p, n, Side::Left)
}

/// Applies the chosen coaction to the top form and returns the matrix-side
/// coefficient of the top-form key. Any surviving key other than the top
/// form would falsify the grouplike property and is reported as an error.
pub fn extract_colike(n: u32, side: Side) -> Result<NCPoly, ExteriorError> {
    assert!(n >= 1, "rank must be at least 1");
    let top = ExtPoly::from_word(ExtWord::top(n));
    let image = coact(&top, n, side)?;
    let mut out = NCPoly::zero();
    let top_word = ExtWord::top(n);
    for ((e, w), c) in image.terms() {
        if *e != top_word {
            return Err(ExteriorError::UnexpectedKey(e.clone()));
        }
        out.add_term(w.clone(), c.clone());
    }
    Ok(out.normal_form())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::Generator;

    fn q() -> LaurentInt {
        LaurentInt::q_pow(1)
    }

    #[test]
    fn wedge_swap_picks_up_neg_q() {
        // e_2 ∧ e_1 = -q e_1 ∧ e_2
        let p = ExtPoly::from_word(ExtWord::new(vec![2, 1])).normal_form();
        assert_eq!(p, ExtPoly::from_term(ExtWord::new(vec![1, 2]), -q()));
    }

    #[test]
    fn wedge_square_is_zero() {
        let p = ExtPoly::from_word(ExtWord::new(vec![1, 1])).normal_form();
        assert_eq!(p, ExtPoly::zero());
    }

    #[test]
    fn reversed_triple() {
        // e_3 ∧ e_2 ∧ e_1 = (-q)^3 e_1 ∧ e_2 ∧ e_3
        let p = ExtPoly::from_word(ExtWord::new(vec![3, 2, 1])).normal_form();
        assert_eq!(p, ExtPoly::from_term(ExtWord::new(vec![1, 2, 3]), LaurentInt::neg_q_pow(3)));
    }

    #[test]
    fn coact_right_generator() {
        // e_1 (n=2) -> e_1 ⊗ t[1,1] + e_2 ⊗ t[2,1]
        let image = coact_right(&ExtPoly::generator(1), 2).unwrap();
        let mut expected = TensorElement::zero(Side::Right);
        expected.add_term(
            ExtWord::new(vec![1]),
            Word::single(Generator::new(1, 1)),
            LaurentInt::one(),
        );
        expected.add_term(
            ExtWord::new(vec![2]),
            Word::single(Generator::new(2, 1)),
            LaurentInt::one(),
        );
        assert_eq!(image, expected);
    }

    #[test]
    fn coact_left_generator() {
        // e_1 (n=2) -> t[1,1] ⊗ e_1 + t[1,2] ⊗ e_2
        let image = coact_left(&ExtPoly::generator(1), 2).unwrap();
        let mut expected = TensorElement::zero(Side::Left);
        expected.add_term(
            ExtWord::new(vec![1]),
            Word::single(Generator::new(1, 1)),
            LaurentInt::one(),
        );
        expected.add_term(
            ExtWord::new(vec![2]),
            Word::single(Generator::new(1, 2)),
            LaurentInt::one(),
        );
        assert_eq!(image, expected);
    }

    #[test]
    fn coact_of_unit() {
        let image = coact_right(&ExtPoly::unit(), 2).unwrap();
        assert_eq!(image, TensorElement::unit(Side::Right));
        let image = coact_left(&ExtPoly::unit(), 3).unwrap();
        assert_eq!(image, TensorElement::unit(Side::Left));
    }

    #[test]
    fn coact_rejects_out_of_range() {
        let err = coact_right(&ExtPoly::generator(3), 2).unwrap_err();
        assert_eq!(err, ExteriorError::IndexOutOfRange { index: 3, n: 2 });
    }

    #[test]
    fn top_form_coefficient_is_the_determinant() {
        // n=2: e_1 ∧ e_2 -> (e_1 ∧ e_2) ⊗ (t[1,1]t[2,2] - q t[1,2]t[2,1])
        let c = extract_colike(2, Side::Right).unwrap();
        let mut expected =
            NCPoly::from_word(Word::new(vec![Generator::new(1, 1), Generator::new(2, 2)]));
        expected.add_term(Word::new(vec![Generator::new(1, 2), Generator::new(2, 1)]), -q());
        assert_eq!(c, expected);
        assert_eq!(extract_colike(2, Side::Left).unwrap(), expected);
    }

    #[test]
    fn rank_one_colike() {
        assert_eq!(extract_colike(1, Side::Right).unwrap(), NCPoly::generator(1, 1));
        assert_eq!(extract_colike(1, Side::Left).unwrap(), NCPoly::generator(1, 1));
    }
}
