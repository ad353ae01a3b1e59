//! Quantum minors and determinants: the permutation-sum expansion of a
//! minor, the full determinant, row/column permuted determinants with their
//! `(-q)` prefactors, determinants of matrices with repeated rows, and the
//! sequential label-replacement notation.

use std::fmt;

use thiserror::Error;

use crate::laurent::LaurentInt;
use crate::ncpoly::{Generator, NCPoly, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinorError {
    #[error("row and column selections have different sizes ({rows} vs {cols})")]
    SizeMismatch { rows: usize, cols: usize },
    #[error("labels must be strictly increasing")]
    NotIncreasing,
    #[error("label {0} is not in the set")]
    LabelAbsent(u32),
    #[error("label {0} is already in the set")]
    LabelPresent(u32),
    #[error("images do not form a permutation of 1..={0}")]
    NotBijective(usize),
    #[error("labels must be positive")]
    ZeroLabel,
}

/// A strictly increasing sequence of positive labels. The empty set is legal
/// (it arises as a complement); most operations require nonempty inputs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelSet(Vec<u32>);

impl LabelSet {
    pub fn new(labels: Vec<u32>) -> Result<Self, MinorError> {
        if labels.contains(&0) {
            return Err(MinorError::ZeroLabel);
        }
        if !labels.windows(2).all(|w| w[0] < w[1]) {
            return Err(MinorError::NotIncreasing);
        }
        Ok(LabelSet(labels))
    }

    pub fn empty() -> Self {
        LabelSet(Vec::new())
    }

    /// The full range `{1, ..., n}`.
    pub fn range(n: u32) -> Self {
        LabelSet((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    pub fn contains(&self, label: u32) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    /// The `i`-th smallest element, 1-based (the counting function).
    pub fn nth(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().map(|&l| l as i64).sum()
    }

    pub fn is_subset_of_range(&self, n: u32) -> bool {
        self.0.iter().all(|&l| l <= n)
    }

    /// Complement within `{1, ..., n}`; the caller must ensure containment.
    pub fn complement_in(&self, n: u32) -> LabelSet {
        LabelSet((1..=n).filter(|l| !self.contains(*l)).collect())
    }

    pub fn is_disjoint(&self, other: &LabelSet) -> bool {
        self.0.iter().all(|&l| !other.contains(l))
    }

    /// Union of two disjoint sets.
    pub fn union_disjoint(&self, other: &LabelSet) -> LabelSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        LabelSet(v)
    }

    /// All `m`-element subsets of `{1, ..., n}` in lexicographic order.
    pub fn subsets(n: u32, m: usize) -> Vec<LabelSet> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(m);
        fn rec(start: u32, n: u32, m: usize, current: &mut Vec<u32>, out: &mut Vec<LabelSet>) {
            if current.len() == m {
                out.push(LabelSet(current.clone()));
                return;
            }
            for l in start..=n {
                current.push(l);
                rec(l + 1, n, m, current, out);
                current.pop();
            }
        }
        rec(1, n, m, &mut current, &mut out);
        out
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A permutation of `{1, ..., m}`, stored as its image sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, MinorError> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in &images {
            if x < 1 || x > m || seen[x - 1] {
                return Err(MinorError::NotBijective(m));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(m: usize) -> Self {
        Permutation((1..=m).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Image of `i`, 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// Number of inversions.
    pub fn length(&self) -> i64 {
        let mut count = 0;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] > self.0[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Composition `self . other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation((1..=other.len()).map(|i| self.apply(other.apply(i))).collect())
    }

    /// All permutations of `{1, ..., m}`.
    pub fn all(m: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut items: Vec<usize> = (1..=m).collect();
        fn rec(k: usize, items: &mut Vec<usize>, out: &mut Vec<Permutation>) {
            if k == items.len() {
                out.push(Permutation(items.clone()));
                return;
            }
            for i in k..items.len() {
                items.swap(k, i);
                rec(k + 1, items, out);
                items.swap(k, i);
            }
        }
        rec(0, &mut items, &mut out);
        out
    }
}

/// An arbitrary row selection `{1..m} -> {1..}`, repetitions allowed; this
/// is the row list of a permuted quantum matrix, possibly with repeated rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowMap(Vec<u32>);

impl RowMap {
    pub fn new(images: Vec<u32>) -> Result<Self, MinorError> {
        if images.contains(&0) {
            return Err(MinorError::ZeroLabel);
        }
        Ok(RowMap(images))
    }

    pub fn identity(m: u32) -> Self {
        RowMap((1..=m).collect())
    }

    pub fn from_label_set(set: &LabelSet) -> Self {
        RowMap(set.labels().to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Image of `i`, 1-based.
    pub fn apply(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn is_injective(&self) -> bool {
        let mut v = self.0.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }
}

/// The row-expansion determinant of the square array whose `(i, j)` entry is
/// `t[rows[i], cols[j]]`: the signed permutation sum with weights
/// `(-q)^{inversions}`, returned in normal form. The sequences may contain
/// repeats; both must have the same length.
pub fn det_row_expansion(rows: &[u32], cols: &[u32]) -> NCPoly {
    assert_eq!(rows.len(), cols.len(), "square selection required");
    let m = rows.len();
    let mut acc = NCPoly::zero();
    for sigma in Permutation::all(m) {
        let word = Word::new(
            (1..=m).map(|i| Generator::new(rows[i - 1], cols[sigma.apply(i) - 1])).collect(),
        );
        acc.add_term(word, LaurentInt::neg_q_pow(sigma.length()));
    }
    acc.normal_form()
}

/// The quantum minor with row set `K` and column set `L`.
pub fn minor(k: &LabelSet, l: &LabelSet) -> Result<NCPoly, MinorError> {
    if k.len() != l.len() || k.is_empty() {
        return Err(MinorError::SizeMismatch { rows: k.len(), cols: l.len() });
    }
    Ok(det_row_expansion(k.labels(), l.labels()))
}

/// The quantum determinant of the full `n x n` matrix.
pub fn det_q(n: u32) -> NCPoly {
    assert!(n >= 1, "determinant rank must be at least 1");
    minor(&LabelSet::range(n), &LabelSet::range(n)).expect("full ranges have equal size")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetKind {
    Row,
    Col,
}

/// Row/column permuted determinant of the matrix whose rows are selected by
/// `rows` (entry `(i, j)` is `h[i,j] = t[rows[sigma(i)], tau(j)]`):
///
/// - kind `Row`: `(-q)^{-l(sigma)+l(tau)} Σ_ρ (-q)^{l(tau.ρ)-l(tau)} h[1,ρ(1)] ... h[n,ρ(n)]`
/// - kind `Col`: `(-q)^{l(sigma)-l(tau)} Σ_ρ (-q)^{l(sigma.ρ)-l(sigma)} h[ρ(1),1] ... h[ρ(n),n]`
///
/// The summation weight sits on the composed permutation actually selecting
/// the entries (the selecting permutation composed with ρ, normalized by the
/// selecting permutation's own length); it degenerates to the plain
/// `(-q)^{l(ρ)}` whenever the composition is length-additive, in particular
/// for identity `sigma`/`tau`. With these weights both variants equal
/// `det_q` on the unpermuted matrix for every `(sigma, tau)` pair.
pub fn det_permuted(
    kind: DetKind,
    sigma: &Permutation,
    tau: &Permutation,
    rows: &RowMap,
) -> Result<NCPoly, MinorError> {
    let n = sigma.len();
    if tau.len() != n || rows.len() != n {
        return Err(MinorError::SizeMismatch { rows: rows.len(), cols: tau.len() });
    }
    let entry = |i: usize, j: usize| -> Generator {
        Generator::new(rows.apply(sigma.apply(i)), tau.apply(j) as u32)
    };
    let mut acc = NCPoly::zero();
    for rho in Permutation::all(n) {
        let (word, weight) = match kind {
            DetKind::Row => (
                Word::new((1..=n).map(|i| entry(i, rho.apply(i))).collect()),
                tau.compose(&rho).length() - tau.length(),
            ),
            DetKind::Col => (
                Word::new((1..=n).map(|j| entry(rho.apply(j), j)).collect()),
                sigma.compose(&rho).length() - sigma.length(),
            ),
        };
        acc.add_term(word, LaurentInt::neg_q_pow(weight));
    }
    let exp = match kind {
        DetKind::Row => tau.length() - sigma.length(),
        DetKind::Col => sigma.length() - tau.length(),
    };
    Ok(acc.normal_form().scale(&LaurentInt::neg_q_pow(exp)))
}

/// Row-expansion determinant of the matrix with rows selected by `phi` and
/// columns `1..=phi.len()`; zero exactly when `phi` repeats a row.
pub fn det_repeated_rows(phi: &RowMap) -> NCPoly {
    let n = phi.len();
    det_permuted(DetKind::Row, &Permutation::identity(n), &Permutation::identity(n), phi)
        .expect("identity permutations match phi's size")
}

/// Sequential replacement of labels in a set: each move `(old, new)` removes
/// `old` (which must be present) and inserts `new` (which must be absent),
/// re-sorting after every move.
pub fn replace_labels(set: &LabelSet, moves: &[(u32, u32)]) -> Result<LabelSet, MinorError> {
    let mut labels = set.labels().to_vec();
    for &(old, new) in moves {
        let pos = labels.iter().position(|&l| l == old).ok_or(MinorError::LabelAbsent(old))?;
        if labels.contains(&new) {
            return Err(MinorError::LabelPresent(new));
        }
        labels.remove(pos);
        labels.push(new);
        labels.sort_unstable();
    }
    LabelSet::new(labels)
}
