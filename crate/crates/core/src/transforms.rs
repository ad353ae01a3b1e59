//! Identity generators and identity-to-identity transforms: the four
//! Laplace expansions, extension of a homogeneous identity by fresh rows and
//! columns, and the included-row exchange with full hypothesis checking and
//! a machine-verified proof trace.

use std::fmt;

use thiserror::Error;

use crate::free_algebra::{
    is_homogeneous, is_identity, project_pi, FreeError, FreeExpr, MinorSymbol, MultiLabel,
    ReplacementRule, RuleSequence,
};
use crate::laurent::LaurentInt;
use crate::minors::{LabelSet, MinorError};

#[derive(Debug, Error)]
pub enum TransformError {
    #[error(transparent)]
    Free(#[from] FreeError),
    #[error(transparent)]
    Minor(#[from] MinorError),
    #[error("label sets must be nonempty proper subsets of 1..={n} with equal sizes")]
    LaplaceRange { n: u32 },
    #[error("the two new label sets must have the same size")]
    ExtensionSizeMismatch,
    #[error("the expression is not homogeneous")]
    NotHomogeneous,
    #[error("symbol {symbol} uses labels outside the ambient selection")]
    OutsideAmbient { symbol: String },
    #[error("new labels must be disjoint from the ambient selection")]
    AmbientOverlap,
    #[error("factor {symbol} lacks required label {label}")]
    MissingIncludedLabel { symbol: String, label: u32 },
    #[error("erasing a row and a column from {symbol} would empty it")]
    ErasureEmptiesSymbol { symbol: String },
    #[error("exchange row labels must differ")]
    EqualRowLabels,
    #[error("exchange hypotheses failed:\n{0}")]
    HypothesesFailed(Box<HypothesisReport>),
    #[error("monomials place their free column on both sides of the included column; the proof trace requires a uniform side")]
    MixedColumnSides,
    #[error("{stage} failed to verify as an identity")]
    NotAnIdentity { stage: String },
}

/// Which of the four displayed Laplace sums to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaplaceForm {
    /// `Σ_J (-q)^{J-L} D[K;J] D[comp L; comp J]`
    RowFirst,
    /// `Σ_J (-q)^{J-L} D[J;K] D[comp J; comp L]`
    ColFirst,
    /// `Σ_J (-q)^{L-J} D[comp L; comp J] D[K;J]`
    RowLast,
    /// `Σ_J (-q)^{L-J} D[comp J; comp L] D[J;K]`
    ColLast,
}

impl LaplaceForm {
    pub const ALL: [LaplaceForm; 4] =
        [LaplaceForm::RowFirst, LaplaceForm::ColFirst, LaplaceForm::RowLast, LaplaceForm::ColLast];

    pub fn name(&self) -> &'static str {
        match self {
            LaplaceForm::RowFirst => "row-first",
            LaplaceForm::ColFirst => "col-first",
            LaplaceForm::RowLast => "row-last",
            LaplaceForm::ColLast => "col-last",
        }
    }
}

impl std::str::FromStr for LaplaceForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "row-first" => Ok(LaplaceForm::RowFirst),
            "col-first" => Ok(LaplaceForm::ColFirst),
            "row-last" => Ok(LaplaceForm::RowLast),
            "col-last" => Ok(LaplaceForm::ColLast),
            other => Err(format!(
                "unknown form `{other}` (expected row-first, col-first, row-last or col-last)"
            )),
        }
    }
}

fn multilabel(set: &LabelSet) -> MultiLabel {
    MultiLabel::new(set.labels().to_vec()).expect("label sets are nonempty and increasing")
}

fn symbol(rows: &LabelSet, cols: &LabelSet) -> MinorSymbol {
    MinorSymbol::new(multilabel(rows), multilabel(cols), 0)
        .expect("row and column sets have equal sizes")
}

/// The Laplace expansion of the determinant along the selection `(K, L)`,
/// returned as a free expression that projects to zero: the J-sum minus
/// (when `K = L`) the full determinant symbol.
pub fn laplace_identity(
    n: u32,
    k: &LabelSet,
    l: &LabelSet,
    form: LaplaceForm,
) -> Result<FreeExpr, TransformError> {
    let m = k.len();
    if m == 0 || m != l.len() || m >= n as usize {
        return Err(TransformError::LaplaceRange { n });
    }
    if !k.is_subset_of_range(n) || !l.is_subset_of_range(n) {
        return Err(TransformError::LaplaceRange { n });
    }
    let l_comp = l.complement_in(n);
    let mut out = FreeExpr::zero();
    for j in LabelSet::subsets(n, m) {
        let j_comp = j.complement_in(n);
        let exponent = match form {
            LaplaceForm::RowFirst | LaplaceForm::ColFirst => j.sum() - l.sum(),
            LaplaceForm::RowLast | LaplaceForm::ColLast => l.sum() - j.sum(),
        };
        let factors = match form {
            LaplaceForm::RowFirst => vec![symbol(k, &j), symbol(&l_comp, &j_comp)],
            LaplaceForm::ColFirst => vec![symbol(&j, k), symbol(&j_comp, &l_comp)],
            LaplaceForm::RowLast => vec![symbol(&l_comp, &j_comp), symbol(k, &j)],
            LaplaceForm::ColLast => vec![symbol(&j_comp, &l_comp), symbol(&j, k)],
        };
        out.add_monomial(factors, LaurentInt::neg_q_pow(exponent));
    }
    if k == l {
        let full = LabelSet::range(n);
        out.add_monomial(vec![symbol(&full, &full)], -LaurentInt::one());
    }
    Ok(out)
}

/// Extends every symbol of a homogeneous identity living inside rows `I` and
/// columns `J` by the fresh labels `new_rows` / `new_cols`: each
/// `D[U;V]` becomes `D[U ∪ new_rows; V ∪ new_cols]`. Coefficients, factor
/// order and decorations are untouched. Whether the result projects to zero
/// is for the caller to verify; the structural side conditions are enforced
/// here.
pub fn muir_extend(
    f: &FreeExpr,
    ambient_rows: &LabelSet,
    ambient_cols: &LabelSet,
    new_rows: &LabelSet,
    new_cols: &LabelSet,
) -> Result<FreeExpr, TransformError> {
    if new_rows.len() != new_cols.len() {
        return Err(TransformError::ExtensionSizeMismatch);
    }
    if !is_homogeneous(f)? {
        return Err(TransformError::NotHomogeneous);
    }
    if !new_rows.is_disjoint(ambient_rows) || !new_cols.is_disjoint(ambient_cols) {
        return Err(TransformError::AmbientOverlap);
    }
    for (monomial, _) in f.terms() {
        for s in monomial {
            let rows_ok = s.rows().labels().iter().all(|&r| ambient_rows.contains(r));
            let cols_ok = s.cols().labels().iter().all(|&c| ambient_cols.contains(c));
            if !rows_ok || !cols_ok {
                return Err(TransformError::OutsideAmbient { symbol: s.to_string() });
            }
        }
    }
    Ok(f.map_symbols(|s| {
        MinorSymbol::new(
            s.rows().union_with(new_rows.labels()),
            s.cols().union_with(new_cols.labels()),
            s.decoration(),
        )
        .expect("both sides grow by the same number of labels")
    }))
}

/// Row labels `k != k'` and the included column `l0` of an exchange.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExchangeSpec {
    k: u32,
    kprime: u32,
    l0: u32,
}

impl ExchangeSpec {
    pub fn new(k: u32, kprime: u32, l0: u32) -> Result<Self, TransformError> {
        if k == kprime {
            return Err(TransformError::EqualRowLabels);
        }
        assert!(k >= 1 && kprime >= 1 && l0 >= 1, "labels must be positive");
        Ok(ExchangeSpec { k, kprime, l0 })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn kprime(&self) -> u32 {
        self.kprime
    }

    pub fn l0(&self) -> u32 {
        self.l0
    }

    fn rules(&self) -> RuleSequence {
        let from = MultiLabel::new(vec![self.k]).expect("labels are positive");
        let to = MultiLabel::new(vec![self.kprime]).expect("labels are positive");
        RuleSequence::new(vec![
            ReplacementRule::rows_only(from, to).expect("k != k' makes the rule nontrivial")
        ])
    }
}

/// Removes one occurrence of row `k'` and column `l0` from every
/// decoration-0 factor; decorated factors are untouched. Every decoration-0
/// factor must contain both labels.
pub fn erase_included(f: &FreeExpr, spec: &ExchangeSpec) -> Result<FreeExpr, TransformError> {
    let mut out = FreeExpr::zero();
    for (monomial, coeff) in f.terms() {
        let mut erased = Vec::with_capacity(monomial.len());
        for s in monomial {
            if s.decoration() != 0 {
                erased.push(s.clone());
                continue;
            }
            if s.size() == 1 {
                return Err(TransformError::ErasureEmptiesSymbol { symbol: s.to_string() });
            }
            let rows = s.rows().remove_one(spec.kprime).ok_or_else(|| {
                TransformError::MissingIncludedLabel { symbol: s.to_string(), label: spec.kprime }
            })?;
            let cols = s.cols().remove_one(spec.l0).ok_or_else(|| {
                TransformError::MissingIncludedLabel { symbol: s.to_string(), label: spec.l0 }
            })?;
            erased.push(MinorSymbol::new(rows, cols, 0).expect("one label removed from each side"));
        }
        out.add_monomial(erased, coeff.clone());
    }
    Ok(out)
}

/// Pass/fail for one hypothesis, with an explanation on failure.
#[derive(Clone, Debug)]
pub struct Condition {
    pub passed: bool,
    pub detail: String,
}

impl Condition {
    fn pass() -> Self {
        Condition { passed: true, detail: String::new() }
    }

    fn fail(detail: String) -> Self {
        Condition { passed: false, detail }
    }
}

/// Outcome of checking the three exchange hypotheses plus the requirement
/// that the input itself is an identity.
#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub input_identity: Condition,
    pub linearity: Condition,
    pub included_row: Condition,
    pub hierarchy: Condition,
}

impl HypothesisReport {
    pub fn all_passed(&self) -> bool {
        self.input_identity.passed
            && self.linearity.passed
            && self.included_row.passed
            && self.hierarchy.passed
    }

    pub fn conditions(&self) -> [(&'static str, &Condition); 4] {
        [
            ("input identity", &self.input_identity),
            ("linearity", &self.linearity),
            ("included row", &self.included_row),
            ("hierarchy", &self.hierarchy),
        ]
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, cond) in self.conditions() {
            if cond.passed {
                writeln!(f, "  {name}: ok")?;
            } else {
                writeln!(f, "  {name}: FAILED ({})", cond.detail)?;
            }
        }
        Ok(())
    }
}

/// Checks the exchange hypotheses:
/// 1. linearity: each monomial consists of decoration-0 factors plus exactly
///    one 1x1 decoration-1 factor with row `k` and column different from `l0`;
/// 2. included row: rows `k`, `k'` and column `l0` appear in every
///    decoration-0 factor;
/// 3. hierarchy: erasing row `k'` and column `l0` from the decoration-0
///    factors leaves an identity.
///
/// The input itself being an identity is checked as well. Failures are
/// reported, never raised.
pub fn check_exchange_hypotheses(f: &FreeExpr, spec: &ExchangeSpec) -> HypothesisReport {
    let input_identity = if is_identity(f) {
        Condition::pass()
    } else {
        Condition::fail("the input does not project to zero".into())
    };

    let mut linearity = Condition::pass();
    'outer: for (monomial, _) in f.terms() {
        let mut seen_marked = 0usize;
        for s in monomial {
            match s.decoration() {
                0 => continue,
                1 => {
                    seen_marked += 1;
                    if seen_marked > 1 {
                        linearity = Condition::fail(
                            "a monomial has more than one decoration-1 factor".into(),
                        );
                        break 'outer;
                    }
                    if s.size() != 1 {
                        linearity = Condition::fail(format!(
                            "decoration-1 factor {s} is not a single entry"
                        ));
                        break 'outer;
                    }
                    if s.rows().labels() != [spec.k] {
                        linearity = Condition::fail(format!(
                            "decoration-1 factor {s} does not sit in row {}",
                            spec.k
                        ));
                        break 'outer;
                    }
                    if s.cols().labels() == [spec.l0] {
                        linearity = Condition::fail(format!(
                            "decoration-1 factor {s} sits in the included column {}",
                            spec.l0
                        ));
                        break 'outer;
                    }
                }
                other => {
                    linearity = Condition::fail(format!(
                        "factor {s} carries unexpected decoration {other}"
                    ));
                    break 'outer;
                }
            }
        }
        if seen_marked != 1 {
            linearity = Condition::fail("a monomial has no decoration-1 factor".into());
            break;
        }
    }

    let mut included_row = Condition::pass();
    'outer2: for (monomial, _) in f.terms() {
        for s in monomial.iter().filter(|s| s.decoration() == 0) {
            for (label, side, present) in [
                (spec.k, "row", s.rows().contains(spec.k)),
                (spec.kprime, "row", s.rows().contains(spec.kprime)),
                (spec.l0, "column", s.cols().contains(spec.l0)),
            ] {
                if !present {
                    included_row = Condition::fail(format!("factor {s} lacks {side} {label}"));
                    break 'outer2;
                }
            }
        }
    }

    let hierarchy = match erase_included(f, spec) {
        Ok(erased) => {
            if is_identity(&erased) {
                Condition::pass()
            } else {
                Condition::fail("the erased expression does not project to zero".into())
            }
        }
        Err(e) => Condition::fail(e.to_string()),
    };

    HypothesisReport { input_identity, linearity, included_row, hierarchy }
}

/// The included-row exchange: relabels the single decoration-1 factor
/// `D[k;l]@1` of every monomial to `D[k';l]@1`, leaving every coefficient
/// and every other factor unchanged. The hypotheses are checked first;
/// when `verify` is set the output is re-verified as an identity.
pub fn exchange(
    f: &FreeExpr,
    spec: &ExchangeSpec,
    verify: bool,
) -> Result<FreeExpr, TransformError> {
    let report = check_exchange_hypotheses(f, spec);
    if !report.all_passed() {
        return Err(TransformError::HypothesesFailed(Box::new(report)));
    }
    let rules = spec.rules();
    assert!(rules.is_injective_match(f), "linearity guarantees an injective match");
    let out = rules.apply(f);
    if verify && !is_identity(&out) {
        return Err(TransformError::NotAnIdentity { stage: "exchanged output".into() });
    }
    Ok(out)
}

/// One verified step of the exchange proof.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub name: &'static str,
    pub passed: bool,
    /// Rendered nonzero residual when the step failed.
    pub residual: Option<String>,
}

impl TraceStep {
    fn checked(name: &'static str, residual: crate::ncpoly::NCPoly) -> Self {
        let nf = residual.normal_form();
        if nf.num_terms() == 0 {
            TraceStep { name, passed: true, residual: None }
        } else {
            TraceStep { name, passed: false, residual: Some(nf.to_string()) }
        }
    }
}

/// The full proof pipeline of an exchange, with every intermediate
/// expression and the verification status of each step.
#[derive(Clone, Debug)]
pub struct ExchangeTrace {
    pub steps: Vec<TraceStep>,
    pub erased: FreeExpr,
    pub lifted: FreeExpr,
    pub exchanged: FreeExpr,
}

impl ExchangeTrace {
    pub fn all_passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }
}

/// Runs and machine-verifies every step of the exchange proof:
///
/// (a) erasing row `k'`/column `l0` leaves an identity;
/// (b) extending that identity back by `k'` and `l0` turns the marked entry
///     into a 2x2 decorated minor and yields an identity;
/// (c) expanding the 2x2 minor splits the lifted identity into two pieces,
///     exactly;
/// (d) each piece differs from the original (resp. exchanged) identity
///     multiplied by the pushed-out extra entry only by a unit factor — both
///     residuals project to zero;
/// (e) the exchanged expression is an identity with coefficients preserved.
///
/// The 2x2 expansion carries sorted labels, so the two claim residuals in
/// (d) are compared with the unit factor (`1` or `-q`) belonging to each
/// piece; for this to be a single global scalar the marked column must sit
/// on the same side of `l0` in every monomial.
pub fn exchange_trace(f: &FreeExpr, spec: &ExchangeSpec) -> Result<ExchangeTrace, TransformError> {
    let report = check_exchange_hypotheses(f, spec);
    if !report.all_passed() {
        return Err(TransformError::HypothesesFailed(Box::new(report)));
    }

    // The marked column, uniform across monomials relative to l0.
    let mut column_side: Option<bool> = None;
    for (monomial, _) in f.terms() {
        let marked = monomial
            .iter()
            .find(|s| s.decoration() == 1)
            .expect("linearity guarantees a marked factor");
        let l = marked.cols().labels()[0];
        let side = l < spec.l0;
        if *column_side.get_or_insert(side) != side {
            return Err(TransformError::MixedColumnSides);
        }
    }
    // Split units: the sorted 2x2 expansion gives the diagonal summand
    // coefficient 1 and the antidiagonal -q; which summand is the k-piece
    // depends on whether the row and column orderings agree.
    let neg_q = LaurentInt::neg_q_pow(1);
    let same_side = column_side.map(|l_below| (spec.k < spec.kprime) == l_below).unwrap_or(true);
    let (unit_k, unit_kp) = if same_side {
        (LaurentInt::one(), neg_q.clone())
    } else {
        (neg_q.clone(), LaurentInt::one())
    };

    let mut steps = Vec::new();

    // (a) hierarchy: the erased expression is an identity.
    let erased = erase_included(f, spec)?;
    steps.push(TraceStep::checked("erased expression projects to zero", project_pi(&erased)));

    // (b) extend back by the erased row and column; the marked 1x1 entry
    // becomes the decorated 2x2 minor.
    let mut ambient_rows: Vec<u32> = Vec::new();
    let mut ambient_cols: Vec<u32> = Vec::new();
    for (monomial, _) in erased.terms() {
        for s in monomial {
            ambient_rows.extend_from_slice(s.rows().labels());
            ambient_cols.extend_from_slice(s.cols().labels());
        }
    }
    ambient_rows.sort_unstable();
    ambient_rows.dedup();
    ambient_cols.sort_unstable();
    ambient_cols.dedup();
    if ambient_rows.contains(&spec.kprime) || ambient_cols.contains(&spec.l0) {
        return Err(TransformError::AmbientOverlap);
    }
    let lifted = muir_extend(
        &erased,
        &LabelSet::new(ambient_rows).expect("deduped sorted labels"),
        &LabelSet::new(ambient_cols).expect("deduped sorted labels"),
        &LabelSet::new(vec![spec.kprime]).expect("positive label"),
        &LabelSet::new(vec![spec.l0]).expect("positive label"),
    )?;
    steps.push(TraceStep::checked("lifted expression projects to zero", project_pi(&lifted)));

    // (c) split the lifted expression at the decorated 2x2 factor into the
    // two expansion summands. The summand pairing row k with the marked
    // column is the k-piece; its sibling is the k'-piece.
    let mut piece_k = FreeExpr::zero();
    let mut piece_kp = FreeExpr::zero();
    for (monomial, coeff) in lifted.terms() {
        let idx = monomial
            .iter()
            .position(|s| s.decoration() == 1)
            .expect("the lift preserves the marked factor");
        let marked = &monomial[idx];
        debug_assert_eq!(marked.size(), 2);
        let l = *marked
            .cols()
            .labels()
            .iter()
            .find(|&&c| c != spec.l0)
            .expect("the marked column differs from l0");

        let by_row = |a: MinorSymbol, b: MinorSymbol| {
            if spec.k < spec.kprime {
                vec![a, b]
            } else {
                vec![b, a]
            }
        };
        // k-piece: (k, l) marked, together with (k', l0)
        let k_factors =
            by_row(MinorSymbol::entry(spec.k, l, 1), MinorSymbol::entry(spec.kprime, spec.l0, 0));
        // k'-piece: (k', l) marked, together with (k, l0)
        let kp_factors =
            by_row(MinorSymbol::entry(spec.k, spec.l0, 0), MinorSymbol::entry(spec.kprime, l, 1));

        let splice = |pieces: &mut FreeExpr, factors: Vec<MinorSymbol>, alpha: &LaurentInt| {
            let mut m = monomial[..idx].to_vec();
            m.extend(factors);
            m.extend_from_slice(&monomial[idx + 1..]);
            pieces.add_monomial(m, coeff * alpha);
        };
        splice(&mut piece_k, k_factors, &unit_k);
        splice(&mut piece_kp, kp_factors, &unit_kp);
    }
    let split_residual = lifted.sub(&piece_k).sub(&piece_kp);
    steps.push(TraceStep::checked(
        "split reassembles the lifted expression",
        project_pi(&split_residual),
    ));

    // (d) both claim residuals project to zero: the k-piece against the
    // original identity with the extra entry pushed to the right, and the
    // k'-piece against the exchanged identity likewise.
    let rules = spec.rules();
    assert!(rules.is_injective_match(f), "linearity guarantees an injective match");
    let exchanged = rules.apply(f);

    let pushed_k =
        f.mul(&FreeExpr::from_symbol(MinorSymbol::entry(spec.kprime, spec.l0, 0))).scale(&unit_k);
    let claim1 = project_pi(&piece_k.sub(&pushed_k)).normal_form();
    let pushed_kp = exchanged
        .mul(&FreeExpr::from_symbol(MinorSymbol::entry(spec.k, spec.l0, 0)))
        .scale(&unit_kp);
    let claim2 = project_pi(&piece_kp.sub(&pushed_kp)).normal_form();
    // both residuals must vanish individually
    let claim_step = if claim1.num_terms() != 0 {
        TraceStep::checked("claim residuals project to zero", claim1)
    } else {
        TraceStep::checked("claim residuals project to zero", claim2)
    };
    steps.push(claim_step);

    // (e) conclusion: the exchanged expression is an identity and no
    // coefficient changed.
    let coefficients_preserved = exchanged.num_terms() == f.num_terms();
    let conclusion = project_pi(&exchanged);
    let mut final_step = TraceStep::checked("exchanged expression projects to zero", conclusion);
    if !coefficients_preserved {
        final_step.passed = false;
        final_step.residual = Some("monomial count changed".into());
    }
    steps.push(final_step);

    Ok(ExchangeTrace { steps, erased, lifted, exchanged })
}
