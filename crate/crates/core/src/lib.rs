//! Exact symbolic computation in the quantum matrix bialgebra: normal forms
//! for the defining relations, quantum minors and determinants, the quantum
//! exterior algebra with its coactions, a free algebra of decorated minor
//! symbols for stating identities, and identity-to-identity transforms
//! (Laplace expansions, extension by fresh labels, included-row exchange).
//!
//! Everything is computed over `Z[q, q^-1]` with arbitrary-precision integer
//! coefficients, so every verification is exact: an expression is an
//! identity precisely when its normal form is the zero polynomial.

pub mod exterior;
pub mod free_algebra;
pub mod laurent;
pub mod minors;
pub mod ncpoly;
pub mod text;
pub mod transforms;

pub use exterior::{
    coact_left, coact_right, extract_colike, ExtPoly, ExtWord, Side, TensorElement,
};
pub use free_algebra::{
    is_homogeneous, is_identity, project_pi, FreeExpr, MinorSymbol, MultiLabel, ReplacementRule,
    RuleSequence,
};
pub use laurent::LaurentInt;
pub use minors::{
    det_permuted, det_q, det_repeated_rows, minor, replace_labels, DetKind, LabelSet, Permutation,
    RowMap,
};
pub use ncpoly::{reduce_pair, Generator, NCPoly, Word};
pub use text::{parse_expr, render_expr, render_poly, ParseError};
pub use transforms::{
    check_exchange_hypotheses, erase_included, exchange, exchange_trace, laplace_identity,
    muir_extend, ExchangeSpec, ExchangeTrace, HypothesisReport, LaplaceForm, TraceStep,
    TransformError,
};
