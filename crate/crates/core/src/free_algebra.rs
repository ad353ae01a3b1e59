//! The free algebra on decorated minor symbols and its projection to the
//! matrix algebra.
//!
//! A symbol `D[K;L]@i` is a formal quantum minor with row multilabel `K`,
//! column multilabel `L` and a nonnegative integer decoration `i` used to
//! address replacement rules at specific factors. Undecorated symbols are
//! decoration 0. An expression is an *identity* when its projection (erase
//! decorations, expand every symbol into its permutation sum, multiply in
//! the matrix algebra) reduces to zero.
//!
//! Multilabels may repeat labels: a symbol with a repeated row label
//! projects through the repeated-row expansion and therefore to zero.
//! Monomial equality is syntactic; nothing is reordered or collected beyond
//! merging identical symbol sequences, so the algebra is genuinely free.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::laurent::LaurentInt;
use crate::minors::det_row_expansion;
use crate::ncpoly::NCPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FreeError {
    #[error("row and column multilabels have different sizes ({rows} vs {cols})")]
    SizeMismatch { rows: usize, cols: usize },
    #[error("multilabels must be nonempty")]
    EmptyLabel,
    #[error("labels must be positive")]
    ZeroLabel,
    #[error("multilabels must be nondecreasing")]
    NotSorted,
    #[error("the zero expression has no homogeneity profile")]
    ZeroProfile,
    #[error("a replacement rule must change at least one side")]
    TrivialRule,
    #[error("replacement sides must have equal lengths ({from} vs {to})")]
    RuleLengthMismatch { from: usize, to: usize },
}

/// A nondecreasing, nonempty sequence of positive labels; repetitions are
/// allowed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiLabel(Vec<u32>);

impl MultiLabel {
    pub fn new(labels: Vec<u32>) -> Result<Self, FreeError> {
        if labels.is_empty() {
            return Err(FreeError::EmptyLabel);
        }
        if labels.contains(&0) {
            return Err(FreeError::ZeroLabel);
        }
        if !labels.windows(2).all(|w| w[0] <= w[1]) {
            return Err(FreeError::NotSorted);
        }
        Ok(MultiLabel(labels))
    }

    /// Builds from any order by sorting.
    pub fn from_unsorted(mut labels: Vec<u32>) -> Result<Self, FreeError> {
        labels.sort_unstable();
        Self::new(labels)
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, label: u32) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    /// Multiset containment: every label of `other` occurs here at least as
    /// many times as it occurs in `other`.
    pub fn contains_multiset(&self, other: &MultiLabel) -> bool {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &l in &self.0 {
            *counts.entry(l).or_insert(0) += 1;
        }
        for &l in &other.0 {
            match counts.get_mut(&l) {
                Some(c) if *c > 0 => *c -= 1,
                _ => return false,
            }
        }
        true
    }

    /// Removes one occurrence of each label of `pattern` and inserts the
    /// labels of `replacement`, re-sorting. The caller must have verified
    /// multiset containment of `pattern`.
    pub fn replace_multiset(&self, pattern: &MultiLabel, replacement: &MultiLabel) -> MultiLabel {
        let mut v = self.0.clone();
        for &l in &pattern.0 {
            let pos = v.iter().position(|&x| x == l).expect("containment checked by caller");
            v.remove(pos);
        }
        v.extend_from_slice(&replacement.0);
        v.sort_unstable();
        MultiLabel(v)
    }

    /// Inserts extra labels (a multiset union), keeping the sequence sorted.
    pub fn union_with(&self, extra: &[u32]) -> MultiLabel {
        let mut v = self.0.clone();
        v.extend_from_slice(extra);
        v.sort_unstable();
        MultiLabel(v)
    }

    /// Removes one occurrence of `label`, if present.
    pub fn remove_one(&self, label: u32) -> Option<MultiLabel> {
        let pos = self.0.iter().position(|&x| x == label)?;
        let mut v = self.0.clone();
        v.remove(pos);
        if v.is_empty() {
            None
        } else {
            Some(MultiLabel(v))
        }
    }
}

impl fmt::Display for MultiLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A decorated minor symbol `D[rows; cols]@decoration`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinorSymbol {
    rows: MultiLabel,
    cols: MultiLabel,
    decoration: u32,
}

impl MinorSymbol {
    pub fn new(rows: MultiLabel, cols: MultiLabel, decoration: u32) -> Result<Self, FreeError> {
        if rows.len() != cols.len() {
            return Err(FreeError::SizeMismatch { rows: rows.len(), cols: cols.len() });
        }
        Ok(MinorSymbol { rows, cols, decoration })
    }

    /// A 1x1 symbol.
    pub fn entry(row: u32, col: u32, decoration: u32) -> Self {
        MinorSymbol { rows: MultiLabel(vec![row]), cols: MultiLabel(vec![col]), decoration }
    }

    pub fn rows(&self) -> &MultiLabel {
        &self.rows
    }

    pub fn cols(&self) -> &MultiLabel {
        &self.cols
    }

    pub fn decoration(&self) -> u32 {
        self.decoration
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn with_decoration(&self, decoration: u32) -> MinorSymbol {
        MinorSymbol { rows: self.rows.clone(), cols: self.cols.clone(), decoration }
    }

    /// Projection of a single symbol: the row-expansion determinant over its
    /// (possibly repeating) multilabels. Decorations are ignored.
    pub fn project(&self) -> NCPoly {
        det_row_expansion(self.rows.labels(), self.cols.labels())
    }
}

impl fmt::Display for MinorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D[{};{}]", self.rows, self.cols)?;
        if self.decoration != 0 {
            write!(f, "@{}", self.decoration)?;
        }
        Ok(())
    }
}

/// A free monomial: an ordered sequence of symbols.
pub type Monomial = Vec<MinorSymbol>;

/// An element of the free algebra: a finite map from monomials to Laurent
/// coefficients, no zero coefficient stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreeExpr {
    terms: BTreeMap<Monomial, LaurentInt>,
}

impl FreeExpr {
    pub fn zero() -> Self {
        FreeExpr { terms: BTreeMap::new() }
    }

    pub fn from_symbol(symbol: MinorSymbol) -> Self {
        FreeExpr::from_monomial(vec![symbol], LaurentInt::one())
    }

    pub fn from_monomial(monomial: Monomial, coeff: LaurentInt) -> Self {
        let mut f = FreeExpr::zero();
        f.add_monomial(monomial, coeff);
        f
    }

    pub fn add_monomial(&mut self, monomial: Monomial, coeff: LaurentInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&monomial) {
            Some(c) => {
                let sum = &*c + &coeff;
                if sum.is_zero() {
                    self.terms.remove(&monomial);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(monomial, coeff);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &LaurentInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &FreeExpr) -> FreeExpr {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_monomial(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FreeExpr) -> FreeExpr {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_monomial(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &LaurentInt) -> FreeExpr {
        let mut out = FreeExpr::zero();
        for (m, a) in &self.terms {
            out.add_monomial(m.clone(), a * c);
        }
        out
    }

    /// Free (concatenation) product.
    pub fn mul(&self, other: &FreeExpr) -> FreeExpr {
        let mut out = FreeExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                out.add_monomial(m, ca * cb);
            }
        }
        out
    }

    /// Forgets all decorations (the canonical projection onto the
    /// undecorated free algebra); monomials that become equal are merged.
    pub fn erase_decorations(&self) -> FreeExpr {
        let mut out = FreeExpr::zero();
        for (m, c) in &self.terms {
            let erased: Monomial = m.iter().map(|s| s.with_decoration(0)).collect();
            out.add_monomial(erased, c.clone());
        }
        out
    }

    /// Applies `f` to every symbol, keeping coefficients and factor order.
    pub fn map_symbols<F: Fn(&MinorSymbol) -> MinorSymbol>(&self, f: F) -> FreeExpr {
        let mut out = FreeExpr::zero();
        for (m, c) in &self.terms {
            out.add_monomial(m.iter().map(&f).collect(), c.clone());
        }
        out
    }
}

impl fmt::Display for FreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::render_expr(self))
    }
}

/// Projects to the matrix algebra: decorations are erased, every symbol is
/// expanded into its permutation sum, and the factors are multiplied in
/// order. The result is in normal form.
pub fn project_pi(f: &FreeExpr) -> NCPoly {
    let mut cache: BTreeMap<(MultiLabel, MultiLabel), NCPoly> = BTreeMap::new();
    let mut out = NCPoly::zero();
    for (monomial, coeff) in f.terms() {
        let mut acc = NCPoly::unit();
        for symbol in monomial {
            let key = (symbol.rows().clone(), symbol.cols().clone());
            let projected = cache.entry(key).or_insert_with(|| symbol.project()).clone();
            acc = &acc * &projected;
            if acc == NCPoly::zero() {
                break;
            }
        }
        out = &out + &acc.scale(coeff);
    }
    out.normal_form()
}

/// Whether the projection of `f` is zero.
pub fn is_identity(f: &FreeExpr) -> bool {
    project_pi(f).is_zero()
}

/// Whether every monomial has the same count of factors of each size. The
/// zero expression has no profile and is rejected.
pub fn is_homogeneous(f: &FreeExpr) -> Result<bool, FreeError> {
    let mut profiles = f.terms().map(|(m, _)| {
        let mut profile: BTreeMap<usize, usize> = BTreeMap::new();
        for s in m {
            *profile.entry(s.size()).or_insert(0) += 1;
        }
        profile
    });
    let first = profiles.next().ok_or(FreeError::ZeroProfile)?;
    Ok(profiles.all(|p| p == first))
}

/// One label-replacement rule `(K, L -> K', L')`; either side may be
/// omitted, meaning no constraint and no change there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplacementRule {
    rows: Option<(MultiLabel, MultiLabel)>,
    cols: Option<(MultiLabel, MultiLabel)>,
}

impl ReplacementRule {
    pub fn new(
        rows: Option<(MultiLabel, MultiLabel)>,
        cols: Option<(MultiLabel, MultiLabel)>,
    ) -> Result<Self, FreeError> {
        for (from, to) in rows.iter().chain(cols.iter()) {
            if from.len() != to.len() {
                return Err(FreeError::RuleLengthMismatch { from: from.len(), to: to.len() });
            }
        }
        let row_change = rows.as_ref().is_some_and(|(a, b)| a != b);
        let col_change = cols.as_ref().is_some_and(|(a, b)| a != b);
        if !row_change && !col_change {
            return Err(FreeError::TrivialRule);
        }
        Ok(ReplacementRule { rows, cols })
    }

    pub fn rows_only(from: MultiLabel, to: MultiLabel) -> Result<Self, FreeError> {
        Self::new(Some((from, to)), None)
    }

    pub fn cols_only(from: MultiLabel, to: MultiLabel) -> Result<Self, FreeError> {
        Self::new(None, Some((from, to)))
    }

    pub fn row_pattern(&self) -> Option<&(MultiLabel, MultiLabel)> {
        self.rows.as_ref()
    }

    pub fn col_pattern(&self) -> Option<&(MultiLabel, MultiLabel)> {
        self.cols.as_ref()
    }

    /// Whether the rule's patterns are contained in the symbol's labels.
    fn matches(&self, symbol: &MinorSymbol) -> bool {
        self.rows.as_ref().is_none_or(|(from, _)| symbol.rows().contains_multiset(from))
            && self.cols.as_ref().is_none_or(|(from, _)| symbol.cols().contains_multiset(from))
    }

    fn apply(&self, symbol: &MinorSymbol) -> MinorSymbol {
        let rows = match &self.rows {
            Some((from, to)) => symbol.rows().replace_multiset(from, to),
            None => symbol.rows().clone(),
        };
        let cols = match &self.cols {
            Some((from, to)) => symbol.cols().replace_multiset(from, to),
            None => symbol.cols().clone(),
        };
        MinorSymbol::new(rows, cols, symbol.decoration())
            .expect("rule sides have equal lengths, so sizes are preserved")
    }
}

/// A finite sequence of rules; the rule at position `i` (1-based) targets
/// symbols with decoration `i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RuleSequence {
    rules: Vec<ReplacementRule>,
}

impl RuleSequence {
    pub fn new(rules: Vec<ReplacementRule>) -> Self {
        RuleSequence { rules }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    fn rule_for(&self, decoration: u32) -> Option<&ReplacementRule> {
        if decoration == 0 {
            return None;
        }
        self.rules.get(decoration as usize - 1)
    }

    /// Whether every monomial has, for each rule index `i`, exactly one
    /// factor with decoration `i`, occurring exactly once and satisfying the
    /// rule's label containment.
    pub fn is_injective_match(&self, f: &FreeExpr) -> bool {
        f.terms().all(|(monomial, _)| {
            (1..=self.rules.len()).all(|i| {
                let mut hits = monomial.iter().filter(|s| s.decoration() as usize == i);
                match (hits.next(), hits.next()) {
                    (Some(symbol), None) => self.rules[i - 1].matches(symbol),
                    _ => false,
                }
            })
        })
    }

    /// The substitution endomorphism: each decorated symbol whose rule
    /// matches is replaced; everything else is fixed. Coefficients and
    /// factor order never change.
    pub fn apply(&self, f: &FreeExpr) -> FreeExpr {
        f.map_symbols(|symbol| match self.rule_for(symbol.decoration()) {
            Some(rule) if rule.matches(symbol) => rule.apply(symbol),
            _ => symbol.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ml(labels: &[u32]) -> MultiLabel {
        MultiLabel::new(labels.to_vec()).unwrap()
    }

    fn sym(rows: &[u32], cols: &[u32], dec: u32) -> MinorSymbol {
        MinorSymbol::new(ml(rows), ml(cols), dec).unwrap()
    }

    fn q() -> LaurentInt {
        LaurentInt::q_pow(1)
    }

    #[test]
    fn project_simple_minor() {
        let f = FreeExpr::from_symbol(sym(&[1, 2], &[1, 2], 0));
        let expected = crate::minors::det_q(2);
        assert_eq!(project_pi(&f), expected);
    }

    #[test]
    fn project_repeated_rows_vanishes() {
        let f = FreeExpr::from_symbol(sym(&[3, 3], &[2, 3], 2));
        assert_eq!(project_pi(&f), NCPoly::zero());
        assert!(is_identity(&f));
    }

    #[test]
    fn project_respects_relations_across_decorations() {
        // f[1,2]@1 * f[1,1]@0 - q^-1 f[1,1]@0 * f[1,2]@1 projects to zero
        let a = FreeExpr::from_monomial(
            vec![MinorSymbol::entry(1, 2, 1), MinorSymbol::entry(1, 1, 0)],
            LaurentInt::one(),
        );
        let b = FreeExpr::from_monomial(
            vec![MinorSymbol::entry(1, 1, 0), MinorSymbol::entry(1, 2, 1)],
            LaurentInt::q_pow(-1),
        );
        assert!(is_identity(&a.sub(&b)));
    }

    #[test]
    fn identity_examples() {
        assert!(is_identity(&FreeExpr::zero()));
        // f[1,1] f[1,2] - q f[1,2] f[1,1]
        let a = FreeExpr::from_monomial(
            vec![MinorSymbol::entry(1, 1, 0), MinorSymbol::entry(1, 2, 0)],
            LaurentInt::one(),
        );
        let b = FreeExpr::from_monomial(
            vec![MinorSymbol::entry(1, 2, 0), MinorSymbol::entry(1, 1, 0)],
            q(),
        );
        assert!(is_identity(&a.sub(&b)));
        // f[1,1] + f[2,2] is not
        let c = FreeExpr::from_symbol(MinorSymbol::entry(1, 1, 0))
            .add(&FreeExpr::from_symbol(MinorSymbol::entry(2, 2, 0)));
        assert!(!is_identity(&c));
    }

    #[test]
    fn homogeneity() {
        // one 1x1 and one 2x2 factor in each monomial
        let m1 = vec![MinorSymbol::entry(1, 2, 1), sym(&[1, 2], &[1, 2], 0)];
        let m2 = vec![sym(&[1, 2], &[1, 2], 0), MinorSymbol::entry(1, 2, 1)];
        let f = FreeExpr::from_monomial(m1, LaurentInt::one())
            .sub(&FreeExpr::from_monomial(m2, LaurentInt::one()));
        assert!(is_homogeneous(&f).unwrap());

        // two 1x1 factors vs one 2x2
        let g = FreeExpr::from_monomial(
            vec![MinorSymbol::entry(1, 1, 0), MinorSymbol::entry(2, 2, 0)],
            LaurentInt::one(),
        )
        .sub(&FreeExpr::from_symbol(sym(&[1, 2], &[1, 2], 0)));
        assert!(!is_homogeneous(&g).unwrap());

        // single monomial is homogeneous; zero has no profile
        assert!(is_homogeneous(&FreeExpr::from_symbol(sym(&[1], &[1], 0))).unwrap());
        assert_eq!(is_homogeneous(&FreeExpr::zero()), Err(FreeError::ZeroProfile));
    }

    #[test]
    fn injective_match_worked_example() {
        // A = ((2,1 -> 3,1), (33,23 -> 23,23)) matches
        // D[3,3;2,3]@2 f[3,3] f[2,1]@1 f[3,3]
        let rules = RuleSequence::new(vec![
            ReplacementRule::new(Some((ml(&[2]), ml(&[3]))), Some((ml(&[1]), ml(&[1])))).unwrap(),
            ReplacementRule::new(
                Some((ml(&[3, 3]), ml(&[2, 3]))),
                Some((ml(&[2, 3]), ml(&[2, 3]))),
            )
            .unwrap(),
        ]);
        let f = FreeExpr::from_monomial(
            vec![
                sym(&[3, 3], &[2, 3], 2),
                MinorSymbol::entry(3, 3, 0),
                MinorSymbol::entry(2, 1, 1),
                MinorSymbol::entry(3, 3, 0),
            ],
            LaurentInt::one(),
        );
        assert!(rules.is_injective_match(&f));

        let applied = rules.apply(&f);
        let expected = FreeExpr::from_monomial(
            vec![
                sym(&[2, 3], &[2, 3], 2),
                MinorSymbol::entry(3, 3, 0),
                MinorSymbol::entry(3, 1, 1),
                MinorSymbol::entry(3, 3, 0),
            ],
            LaurentInt::one(),
        );
        assert_eq!(applied, expected);
    }

    #[test]
    fn injective_match_counts_decorations() {
        let rules =
            RuleSequence::new(vec![ReplacementRule::rows_only(ml(&[1]), ml(&[2])).unwrap()]);
        // exactly one decoration-1 factor per monomial
        let good = FreeExpr::from_monomial(
            vec![MinorSymbol::entry(1, 2, 1), sym(&[1, 2], &[1, 2], 0)],
            LaurentInt::one(),
        )
        .sub(&FreeExpr::from_monomial(
            vec![sym(&[1, 2], &[1, 2], 0), MinorSymbol::entry(1, 2, 1)],
            LaurentInt::one(),
        ));
        assert!(rules.is_injective_match(&good));

        // two decoration-1 factors in one monomial
        let bad = FreeExpr::from_monomial(
            vec![MinorSymbol::entry(1, 2, 1), MinorSymbol::entry(1, 3, 1)],
            LaurentInt::one(),
        );
        assert!(!rules.is_injective_match(&bad));
    }

    #[test]
    fn apply_fixes_unrelated_decorations() {
        let rules =
            RuleSequence::new(vec![ReplacementRule::rows_only(ml(&[1]), ml(&[2])).unwrap()]);
        // decoration 0 is never targeted
        let f = FreeExpr::from_symbol(MinorSymbol::entry(1, 2, 0));
        assert_eq!(rules.apply(&f), f);
        // row-only rule leaves columns alone
        let g = FreeExpr::from_symbol(MinorSymbol::entry(1, 2, 1));
        assert_eq!(rules.apply(&g), FreeExpr::from_symbol(MinorSymbol::entry(2, 2, 1)));
        // non-matching containment is fixed
        let h = FreeExpr::from_symbol(MinorSymbol::entry(3, 2, 1));
        assert_eq!(rules.apply(&h), h);
    }

    #[test]
    fn erase_decorations_after_zero_decoration_is_identity() {
        let f = FreeExpr::from_monomial(
            vec![sym(&[1, 2], &[1, 2], 0), MinorSymbol::entry(1, 1, 0)],
            q(),
        );
        assert_eq!(f.erase_decorations(), f);
    }

    #[test]
    fn rules_reject_degenerate_input() {
        assert_eq!(ReplacementRule::new(None, None), Err(FreeError::TrivialRule));
        assert_eq!(ReplacementRule::rows_only(ml(&[1]), ml(&[1])), Err(FreeError::TrivialRule));
        assert!(matches!(
            ReplacementRule::rows_only(ml(&[1, 2]), ml(&[3])),
            Err(FreeError::RuleLengthMismatch { .. })
        ));
    }
}
