//! Structured output for `--json` mode. Every payload carries a `schema`
//! field so batch consumers can detect format changes; coefficients are
//! exponent/integer pairs with the integer rendered as a decimal string.

use serde::Serialize;

use qmx_core::free_algebra::FreeExpr;
use qmx_core::laurent::LaurentInt;
use qmx_core::ncpoly::NCPoly;
use qmx_core::transforms::{ExchangeTrace, HypothesisReport};

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
pub struct CoeffTerm(pub i64, pub String);

pub fn coeff_terms(c: &LaurentInt) -> Vec<CoeffTerm> {
    c.terms().map(|(e, n)| CoeffTerm(e, n.to_string())).collect()
}

#[derive(Serialize)]
pub struct PolyTerm {
    pub coeff: Vec<CoeffTerm>,
    pub word: Vec<(u32, u32)>,
}

#[derive(Serialize)]
pub struct Poly {
    pub text: String,
    pub terms: Vec<PolyTerm>,
}

impl Poly {
    pub fn new(p: &NCPoly) -> Self {
        Poly {
            text: qmx_core::render_poly(p),
            terms: p
                .terms()
                .map(|(w, c)| PolyTerm {
                    coeff: coeff_terms(c),
                    word: w.factors().iter().map(|g| (g.row(), g.col())).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct ExprFactor {
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
    pub decoration: u32,
}

#[derive(Serialize)]
pub struct ExprTerm {
    pub coeff: Vec<CoeffTerm>,
    pub factors: Vec<ExprFactor>,
}

#[derive(Serialize)]
pub struct Expr {
    pub text: String,
    pub terms: Vec<ExprTerm>,
}

impl Expr {
    pub fn new(f: &FreeExpr) -> Self {
        Expr {
            text: qmx_core::render_expr(f),
            terms: f
                .terms()
                .map(|(m, c)| ExprTerm {
                    coeff: coeff_terms(c),
                    factors: m
                        .iter()
                        .map(|s| ExprFactor {
                            rows: s.rows().labels().to_vec(),
                            cols: s.cols().labels().to_vec(),
                            decoration: s.decoration(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct Conditions {
    pub input_identity: ConditionOut,
    pub linearity: ConditionOut,
    pub included_row: ConditionOut,
    pub hierarchy: ConditionOut,
}

#[derive(Serialize)]
pub struct ConditionOut {
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Conditions {
    pub fn new(report: &HypothesisReport) -> Self {
        let conv = |c: &qmx_core::transforms::Condition| ConditionOut {
            passed: c.passed,
            detail: c.detail.clone(),
        };
        Conditions {
            input_identity: conv(&report.input_identity),
            linearity: conv(&report.linearity),
            included_row: conv(&report.included_row),
            hierarchy: conv(&report.hierarchy),
        }
    }
}

#[derive(Serialize)]
pub struct TraceStepOut {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

pub fn trace_steps(trace: &ExchangeTrace) -> Vec<TraceStepOut> {
    trace
        .steps
        .iter()
        .map(|s| TraceStepOut {
            name: s.name.to_string(),
            passed: s.passed,
            residual: s.residual.clone(),
        })
        .collect()
}

#[derive(Serialize)]
pub struct PolyOutput {
    pub schema: u32,
    pub command: &'static str,
    pub result: Poly,
}

#[derive(Serialize)]
pub struct ExprOutput {
    pub schema: u32,
    pub command: &'static str,
    pub result: Expr,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

#[derive(Serialize)]
pub struct VerifyOutput {
    pub schema: u32,
    pub command: &'static str,
    pub identity: bool,
    pub normal_form: Poly,
}

#[derive(Serialize)]
pub struct BatchEntry {
    pub file: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Serialize)]
pub struct BatchOutput {
    pub schema: u32,
    pub command: &'static str,
    pub batch: Vec<BatchEntry>,
}

#[derive(Serialize)]
pub struct ExchangeOutput {
    pub schema: u32,
    pub command: &'static str,
    pub hypotheses: Conditions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStepOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Expr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

#[derive(Serialize)]
pub struct MatchOutput {
    pub schema: u32,
    pub command: &'static str,
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub applied: Option<Expr>,
}

pub fn print<T: Serialize>(value: &T) {
    crate::emit(serde_json::to_string_pretty(value).expect("serializable output"));
}
