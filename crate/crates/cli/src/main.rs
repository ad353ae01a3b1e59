//! Command-line front end for the quantum minor engine.
//!
//! Exit codes: 0 = success/verified; 1 = well-formed input that fails
//! verification (a non-identity, failed exchange hypotheses, a failed
//! match); 2 = parse or validation errors.

mod json;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qmx_core::exterior::Side;
use qmx_core::free_algebra::{FreeExpr, MultiLabel, ReplacementRule, RuleSequence};
use qmx_core::minors::{DetKind, LabelSet, Permutation, RowMap};
use qmx_core::transforms::LaplaceForm;
use qmx_core::{
    check_exchange_hypotheses, det_permuted, det_q, det_repeated_rows, exchange, exchange_trace,
    extract_colike, is_identity, laplace_identity, minor, muir_extend, parse_expr, project_pi,
    render_expr, render_poly, ExchangeSpec,
};

#[derive(Parser)]
#[command(name = "qmx", version, about = "Exact computations with quantum minors", long_about = None)]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ExprInput {
    /// Inline expression (see the grammar in the README)
    expr: Option<String>,
    /// Read the expression from a file instead
    #[arg(short = 'f', long = "file")]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce an expression to its normal form in the matrix algebra
    Nf(ExprInput),
    /// Check whether an expression projects to zero
    Verify {
        #[command(flatten)]
        input: ExprInput,
        /// Verify every `.qid` file in a directory
        #[arg(long, conflicts_with_all = ["expr", "file"])]
        batch: Option<PathBuf>,
    },
    /// Expand a quantum minor
    Minor {
        /// Row labels, e.g. 1,2
        #[arg(long = "K")]
        rows: String,
        /// Column labels, e.g. 1,3
        #[arg(long = "L")]
        cols: String,
    },
    /// Expand the quantum determinant
    Detq {
        #[arg(long)]
        n: u32,
    },
    /// Expand a row/column permuted determinant
    Detperm {
        /// `r` (row) or `c` (column) variant
        #[arg(long)]
        kind: String,
        /// Row permutation images, e.g. 2,1
        #[arg(long)]
        sigma: String,
        /// Column permutation images, e.g. 1,2
        #[arg(long)]
        tau: String,
        #[arg(long)]
        n: usize,
        /// Optional row selection (defaults to 1..n; repetitions allowed)
        #[arg(long)]
        rows: Option<String>,
    },
    /// Expand the determinant of the matrix with rows selected by phi
    Detphi {
        /// Row images, e.g. 1,1 (repetitions allowed)
        #[arg(long)]
        phi: String,
        #[arg(long)]
        n: usize,
    },
    /// Coefficient of the top wedge form under a coaction
    Colike {
        #[arg(long)]
        n: u32,
        /// `left` or `right`
        #[arg(long)]
        side: String,
    },
    /// Generate a Laplace expansion identity
    Laplace {
        #[arg(long)]
        n: u32,
        #[arg(long = "K")]
        rows: String,
        #[arg(long = "L")]
        cols: String,
        /// row-first, col-first, row-last or col-last
        #[arg(long)]
        form: String,
        /// Skip re-verifying the generated identity
        #[arg(long)]
        no_verify: bool,
    },
    /// Extend an identity by fresh rows and columns
    Muir {
        #[command(flatten)]
        input: ExprInput,
        /// Ambient row labels of the seed identity
        #[arg(long = "I")]
        ambient_rows: String,
        /// Ambient column labels of the seed identity
        #[arg(long = "J")]
        ambient_cols: String,
        /// Fresh row labels to adjoin
        #[arg(long)]
        rows: String,
        /// Fresh column labels to adjoin
        #[arg(long)]
        cols: String,
        /// Skip verifying the input and output as identities
        #[arg(long)]
        no_verify: bool,
    },
    /// Apply the included-row exchange to an identity
    Exchange {
        #[command(flatten)]
        input: ExprInput,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        kprime: u32,
        #[arg(long)]
        l0: u32,
        /// Emit and verify the full proof pipeline
        #[arg(long)]
        trace: bool,
        /// Skip verifying the exchanged output as an identity
        #[arg(long)]
        no_verify: bool,
    },
    /// Check a replacement rule sequence for an injective match
    Match {
        #[command(flatten)]
        input: ExprInput,
        /// One rule per flag: `rows:2,1->3,1`, `cols:2->3` or
        /// `rows:2,1->3,1;cols:2,3->2,3`; the i-th flag targets decoration i
        #[arg(long = "rule", required = true)]
        rules: Vec<String>,
        /// Also print the substituted expression
        #[arg(long)]
        apply: bool,
    },
}

/// Writes a line to stdout, exiting quietly if the consumer closed the pipe.
pub(crate) fn emit(text: impl std::fmt::Display) {
    use std::io::Write;
    if writeln!(std::io::stdout(), "{text}").is_err() {
        std::process::exit(0);
    }
}

/// User-facing failure that stops a command with exit code 2.
struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

type CliResult = Result<u8, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Nf(input) => cmd_nf(cli, input),
        Command::Verify { input, batch } => match batch {
            Some(dir) => cmd_verify_batch(cli, dir),
            None => cmd_verify(cli, input),
        },
        Command::Minor { rows, cols } => {
            let p = minor(&parse_label_set(rows)?, &parse_label_set(cols)?)?;
            print_poly(cli, "minor", &p);
            Ok(0)
        }
        Command::Detq { n } => {
            if *n == 0 {
                return Err(CliError("n must be at least 1".into()));
            }
            print_poly(cli, "detq", &det_q(*n));
            Ok(0)
        }
        Command::Detperm { kind, sigma, tau, n, rows } => {
            let kind = match kind.as_str() {
                "r" | "row" => DetKind::Row,
                "c" | "col" => DetKind::Col,
                other => return Err(CliError(format!("unknown kind `{other}` (expected r or c)"))),
            };
            let sigma = parse_permutation(sigma)?;
            let tau = parse_permutation(tau)?;
            if sigma.len() != *n || tau.len() != *n {
                return Err(CliError(format!("sigma and tau must have length {n}")));
            }
            let rows = match rows {
                Some(text) => RowMap::new(parse_labels(text)?)?,
                None => RowMap::identity(*n as u32),
            };
            let p = det_permuted(kind, &sigma, &tau, &rows)?;
            print_poly(cli, "detperm", &p);
            Ok(0)
        }
        Command::Detphi { phi, n } => {
            let phi = RowMap::new(parse_labels(phi)?)?;
            if phi.len() != *n {
                return Err(CliError(format!("phi must have length {n}")));
            }
            print_poly(cli, "detphi", &det_repeated_rows(&phi));
            Ok(0)
        }
        Command::Colike { n, side } => {
            if *n == 0 {
                return Err(CliError("n must be at least 1".into()));
            }
            let side = match side.as_str() {
                "left" => Side::Left,
                "right" => Side::Right,
                other => {
                    return Err(CliError(format!(
                        "unknown side `{other}` (expected left or right)"
                    )))
                }
            };
            let p = extract_colike(*n, side)?;
            print_poly(cli, "colike", &p);
            Ok(0)
        }
        Command::Laplace { n, rows, cols, form, no_verify } => {
            let form: LaplaceForm = form.parse().map_err(CliError)?;
            let f = laplace_identity(*n, &parse_label_set(rows)?, &parse_label_set(cols)?, form)?;
            let verified = if *no_verify { None } else { Some(is_identity(&f)) };
            print_expr(cli, "laplace", &f, verified);
            Ok(if verified == Some(false) { 1 } else { 0 })
        }
        Command::Muir { input, ambient_rows, ambient_cols, rows, cols, no_verify } => {
            let f = load_expr(input)?;
            if !*no_verify && !is_identity(&f) {
                return fail_not_identity(cli, "muir", &f);
            }
            let g = muir_extend(
                &f,
                &parse_label_set(ambient_rows)?,
                &parse_label_set(ambient_cols)?,
                &parse_label_set(rows)?,
                &parse_label_set(cols)?,
            )?;
            let verified = if *no_verify { None } else { Some(is_identity(&g)) };
            print_expr(cli, "muir", &g, verified);
            Ok(if verified == Some(false) { 1 } else { 0 })
        }
        Command::Exchange { input, k, kprime, l0, trace, no_verify } => {
            cmd_exchange(cli, input, *k, *kprime, *l0, *trace, *no_verify)
        }
        Command::Match { input, rules, apply } => cmd_match(cli, input, rules, *apply),
    }
}

fn read_input_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))
}

fn load_expr(input: &ExprInput) -> Result<FreeExpr, CliError> {
    let text = match (&input.expr, &input.file) {
        (Some(text), None) => text.clone(),
        (None, Some(path)) => read_input_file(path)?,
        (Some(_), Some(_)) => {
            return Err(CliError("give either an inline expression or --file, not both".into()))
        }
        (None, None) => {
            return Err(CliError("an expression is required (inline or via --file)".into()))
        }
    };
    Ok(parse_expr(&text)?)
}

fn parse_labels(text: &str) -> Result<Vec<u32>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| CliError(format!("`{part}` is not a valid label")))
        })
        .collect()
}

fn parse_label_set(text: &str) -> Result<LabelSet, CliError> {
    Ok(LabelSet::new(parse_labels(text)?)?)
}

fn parse_permutation(text: &str) -> Result<Permutation, CliError> {
    let images = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| CliError(format!("`{part}` is not a valid image")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Permutation::new(images)?)
}

/// Rule syntax: `rows:2,1->3,1`, `cols:2->3`, or both sides separated by
/// `;`. The i-th `--rule` flag targets decoration i.
fn parse_rule(text: &str) -> Result<ReplacementRule, CliError> {
    let mut rows = None;
    let mut cols = None;
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (side, body) = part.split_once(':').ok_or_else(|| {
            CliError(format!("rule part `{part}` lacks a `rows:`/`cols:` prefix"))
        })?;
        let (from, to) = body
            .split_once("->")
            .ok_or_else(|| CliError(format!("rule part `{part}` lacks `->`")))?;
        let from = MultiLabel::from_unsorted(parse_labels(from.trim())?)?;
        let to = MultiLabel::from_unsorted(parse_labels(to.trim())?)?;
        match side.trim() {
            "rows" => rows = Some((from, to)),
            "cols" => cols = Some((from, to)),
            other => return Err(CliError(format!("unknown rule side `{other}`"))),
        }
    }
    Ok(ReplacementRule::new(rows, cols)?)
}

fn print_poly(cli: &Cli, command: &'static str, p: &qmx_core::NCPoly) {
    if cli.json {
        json::print(&json::PolyOutput {
            schema: json::SCHEMA,
            command,
            result: json::Poly::new(p),
        });
    } else {
        emit(render_poly(p));
    }
}

fn print_expr(cli: &Cli, command: &'static str, f: &FreeExpr, verified: Option<bool>) {
    if cli.json {
        json::print(&json::ExprOutput {
            schema: json::SCHEMA,
            command,
            result: json::Expr::new(f),
            verified,
        });
    } else {
        emit(render_expr(f));
        if verified == Some(false) {
            eprintln!("warning: the result does not verify as an identity");
        }
    }
}

fn fail_not_identity(cli: &Cli, command: &'static str, f: &FreeExpr) -> CliResult {
    let nf = project_pi(f);
    if cli.json {
        json::print(&json::VerifyOutput {
            schema: json::SCHEMA,
            command,
            identity: false,
            normal_form: json::Poly::new(&nf),
        });
    } else {
        eprintln!("not an identity; normal form: {}", render_poly(&nf));
    }
    Ok(1)
}

fn cmd_nf(cli: &Cli, input: &ExprInput) -> CliResult {
    let f = load_expr(input)?;
    let p = project_pi(&f);
    print_poly(cli, "nf", &p);
    Ok(0)
}

fn cmd_verify(cli: &Cli, input: &ExprInput) -> CliResult {
    let f = load_expr(input)?;
    let nf = project_pi(&f);
    let identity = nf.num_terms() == 0;
    if cli.json {
        json::print(&json::VerifyOutput {
            schema: json::SCHEMA,
            command: "verify",
            identity,
            normal_form: json::Poly::new(&nf),
        });
    } else if identity {
        emit("identity");
    } else {
        emit(format!("not an identity; normal form: {}", render_poly(&nf)));
    }
    Ok(if identity { 0 } else { 1 })
}

fn cmd_verify_batch(cli: &Cli, dir: &Path) -> CliResult {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "qid"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError(format!("no .qid files in {}", dir.display())));
    }
    let mut entries = Vec::new();
    let mut worst = 0u8;
    for path in &files {
        let name = path.display().to_string();
        match read_input_file(path).and_then(|text| Ok(parse_expr(&text)?)) {
            Ok(f) => {
                if is_identity(&f) {
                    entries.push(json::BatchEntry {
                        file: name,
                        status: "identity",
                        message: None,
                    });
                } else {
                    worst = worst.max(1);
                    entries.push(json::BatchEntry {
                        file: name,
                        status: "not-identity",
                        message: None,
                    });
                }
            }
            Err(CliError(message)) => {
                worst = 2;
                entries.push(json::BatchEntry {
                    file: name,
                    status: "error",
                    message: Some(message),
                });
            }
        }
    }
    if cli.json {
        json::print(&json::BatchOutput { schema: json::SCHEMA, command: "verify", batch: entries });
    } else {
        for e in &entries {
            match &e.message {
                Some(m) => emit(format!("{}: {} ({m})", e.file, e.status)),
                None => emit(format!("{}: {}", e.file, e.status)),
            }
        }
    }
    Ok(worst)
}

fn cmd_exchange(
    cli: &Cli,
    input: &ExprInput,
    k: u32,
    kprime: u32,
    l0: u32,
    trace: bool,
    no_verify: bool,
) -> CliResult {
    let f = load_expr(input)?;
    let spec = ExchangeSpec::new(k, kprime, l0)?;
    let report = check_exchange_hypotheses(&f, &spec);
    if !report.all_passed() {
        if cli.json {
            json::print(&json::ExchangeOutput {
                schema: json::SCHEMA,
                command: "exchange",
                hypotheses: json::Conditions::new(&report),
                trace: None,
                result: None,
                verified: None,
            });
        } else {
            eprintln!("exchange hypotheses failed:\n{report}");
        }
        return Ok(1);
    }
    if trace {
        let t = exchange_trace(&f, &spec)?;
        let all_passed = t.all_passed();
        if cli.json {
            json::print(&json::ExchangeOutput {
                schema: json::SCHEMA,
                command: "exchange",
                hypotheses: json::Conditions::new(&report),
                trace: Some(json::trace_steps(&t)),
                result: Some(json::Expr::new(&t.exchanged)),
                verified: Some(all_passed),
            });
        } else {
            emit(format!("erased:    {}", render_expr(&t.erased)));
            emit(format!("lifted:    {}", render_expr(&t.lifted)));
            for step in &t.steps {
                let mark = if step.passed { "ok " } else { "FAIL" };
                match &step.residual {
                    Some(r) => emit(format!("[{mark}] {} (residual: {r})", step.name)),
                    None => emit(format!("[{mark}] {}", step.name)),
                }
            }
            emit(format!("exchanged: {}", render_expr(&t.exchanged)));
        }
        Ok(if all_passed { 0 } else { 1 })
    } else {
        let out = exchange(&f, &spec, !no_verify)?;
        let verified = if no_verify { None } else { Some(true) };
        if cli.json {
            json::print(&json::ExchangeOutput {
                schema: json::SCHEMA,
                command: "exchange",
                hypotheses: json::Conditions::new(&report),
                trace: None,
                result: Some(json::Expr::new(&out)),
                verified,
            });
        } else {
            emit(render_expr(&out));
        }
        Ok(0)
    }
}

fn cmd_match(cli: &Cli, input: &ExprInput, rule_texts: &[String], apply: bool) -> CliResult {
    let f = load_expr(input)?;
    let rules =
        RuleSequence::new(rule_texts.iter().map(|t| parse_rule(t)).collect::<Result<Vec<_>, _>>()?);
    let matches = rules.is_injective_match(&f);
    let applied = if apply && matches { Some(rules.apply(&f)) } else { None };
    if cli.json {
        json::print(&json::MatchOutput {
            schema: json::SCHEMA,
            command: "match",
            matches,
            applied: applied.as_ref().map(json::Expr::new),
        });
    } else {
        emit(if matches { "injective match" } else { "no injective match" });
        if let Some(g) = &applied {
            emit(render_expr(g));
        }
    }
    Ok(if matches { 0 } else { 1 })
}
