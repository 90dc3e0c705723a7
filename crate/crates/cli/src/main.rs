//! `ultradiff`: exact difference calculus over F_p((X)) from the command
//! line.
//!
//! Exit status: 0 on success with all identity checks passing; 1 when an
//! identity check found a mismatch (engine worked, identity violated); 2 on
//! usage or configuration errors; 3 on precision errors. Diagnostics go to
//! stderr, data to stdout.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use ultradiff_core::calculus::{
    check_fviaphi, check_recursion, check_simpfml, check_symmetry, check_transport,
    divided_difference, iterated_quotient, ludkovsky_quotient, CheckConfig,
};
use ultradiff_core::domains::{
    bracket_len, multi_indices_up_to, BallDomain, BlockPoint, MultiIndex,
};
use ultradiff_core::expr::{infer_arity, parse_expr, random_polynomial, Expr};
use ultradiff_core::field::{parse_series, LaurentSeries, PrimeField};
use ultradiff_core::regularity::{
    blowup_probe, counterexample_report, dd_boundedness_scan, holder_estimate,
};
use ultradiff_core::report::{IdentityReport, ProbeReport};
use ultradiff_core::{EngineError, MapKd};

#[derive(Parser)]
#[command(name = "ultradiff", version, about = "Exact difference calculus over F_p((X))")]
struct Cli {
    /// Prime modulus of the coefficient field
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,

    /// Working precision: known coefficients per sampled series (>= 4)
    #[arg(long, global = true, default_value_t = 64)]
    prec: i64,

    /// Seed for all sampling
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sample count for checks and probes
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Domain: `O^d` or `ball(c_1,r_1;...;c_d,r_d)` with series-literal
    /// centers (defaults to O^d)
    #[arg(long, global = true)]
    domain: Option<String>,

    /// Number of variables (inferred from the expression when omitted)
    #[arg(long, global = true)]
    arity: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct ExprSource {
    /// Expression text
    #[arg(long, conflicts_with = "expr_file")]
    expr: Option<String>,

    /// File holding one expression (UTF-8)
    #[arg(long)]
    expr_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a map at a point
    Eval {
        #[command(flatten)]
        source: ExprSource,
        /// Semicolon-separated series literals
        #[arg(long)]
        at: String,
    },
    /// Partial divided difference f^{>alpha<} at a block point
    Dd {
        #[command(flatten)]
        source: ExprSource,
        /// Multi-index, e.g. `2` or `1,0`
        #[arg(long)]
        alpha: String,
        /// d + |alpha| series literals; block structure inferred from alpha
        #[arg(long)]
        at: String,
    },
    /// Iterated directional difference quotient f^{]k[} at a flat tuple
    Dq {
        #[command(flatten)]
        source: ExprSource,
        #[arg(long)]
        k: usize,
        /// 2^k(d+1)-1 series literals, depth-first (x-block, y-block, t)
        #[arg(long)]
        at: String,
    },
    /// Fixed-direction iterated quotient at (x; xi_1; ...; xi_k; t_1; ...; t_k)
    Phi {
        #[command(flatten)]
        source: ExprSource,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        at: String,
    },
    /// Sampled exact-identity checks (exit 1 on any mismatch)
    Check {
        #[command(subcommand)]
        target: CheckTarget,
    },
    /// Regularity probes
    Probe {
        #[command(subcommand)]
        target: ProbeTarget,
    },
    /// The packaged separation demonstration
    Counterexample {
        /// Largest (even) coalescing index in the blow-up table
        #[arg(long, default_value_t = 20)]
        n_max: i64,
    },
}

#[derive(Subcommand)]
enum CheckTarget {
    /// First quotient against the weighted sum of first partial differences
    Fviaphi {
        #[command(flatten)]
        source: ExprSource,
        /// Check this many random polynomial maps instead of --expr
        #[arg(long, default_value_t = 10)]
        random: usize,
        #[arg(long, default_value_t = 4)]
        degree: u32,
    },
    /// Composition of divided differences against the flattened multi-index
    Simpfml {
        #[command(flatten)]
        source: ExprSource,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
    /// Transport of divided differences through iterated quotients
    Theta {
        #[command(flatten)]
        source: ExprSource,
        #[arg(long, default_value_t = 3)]
        max_order: u32,
        #[arg(long, default_value_t = 5)]
        random: usize,
        #[arg(long, default_value_t = 4)]
        degree: u32,
    },
    /// Block-permutation invariance of divided differences
    Symmetry {
        #[command(flatten)]
        source: ExprSource,
        #[arg(long)]
        alpha: String,
    },
    /// Direct sum formula against the recursion
    Recursion {
        #[command(flatten)]
        source: ExprSource,
        #[arg(long, default_value_t = 3)]
        max_order: u32,
        #[arg(long, default_value_t = 5)]
        random: usize,
        #[arg(long, default_value_t = 4)]
        degree: u32,
    },
}

#[derive(Subcommand)]
enum ProbeTarget {
    /// Hölder exponent estimate from engineered valuation pairs
    Holder {
        #[command(flatten)]
        source: ExprSource,
    },
    /// Blow-up table of second divided differences of the spreading map
    C2 {
        #[arg(long, default_value_t = 20)]
        n_max: i64,
    },
    /// Sup of |f^{>alpha<}| over a separation sweep
    Bcnorm {
        #[command(flatten)]
        source: ExprSource,
        #[arg(long)]
        alpha: String,
        /// Comma-separated separation levels (valuation bounds)
        #[arg(long, default_value = "0,2,4,6,8,10")]
        levels: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ultradiff: {e}");
            if e.is_precision() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

struct Session {
    field: PrimeField,
    prec: i64,
    seed: u64,
    samples: usize,
    format: Format,
}

impl Session {
    fn series(&self, text: &str) -> Result<LaurentSeries, EngineError> {
        parse_series(text.trim(), self.field, self.prec)
    }

    fn point(&self, at: &str) -> Result<Vec<LaurentSeries>, EngineError> {
        at.split(';').map(|s| self.series(s)).collect()
    }

    fn config(&self) -> CheckConfig {
        CheckConfig {
            samples: self.samples,
            prec: self.prec,
            seed: self.seed,
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, EngineError> {
    let field = PrimeField::new(cli.p)?;
    if cli.prec < 4 {
        return Err(EngineError::InvalidConfig(
            "prec must be at least 4".into(),
        ));
    }
    let session = Session {
        field,
        prec: cli.prec,
        seed: cli.seed,
        samples: cli.samples,
        format: cli.format,
    };

    match &cli.cmd {
        Cmd::Eval { source, at } => {
            let f = load_expr(&session, cli, source)?;
            let point = session.point(at)?;
            require_len(point.len(), f.arity(), "point coordinates")?;
            let values = f.eval(&point)?;
            emit_values(&session, "eval", &values);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Dd { source, alpha, at } => {
            let f = load_expr(&session, cli, source)?;
            let alpha = parse_alpha(alpha, f.arity())?;
            let point = session.point(at)?;
            let block = BlockPoint::new(alpha, point)?;
            let values = divided_difference(&f, &block)?;
            emit_values(&session, "dd", &values);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Dq { source, k, at } => {
            let f = load_expr(&session, cli, source)?;
            let z = session.point(at)?;
            require_len(z.len(), bracket_len(f.arity(), *k), "tuple scalars")?;
            let values = iterated_quotient(&f, *k, &z)?;
            emit_values(&session, "dq", &values);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Phi { source, k, at } => {
            let f = load_expr(&session, cli, source)?;
            let d = f.arity();
            let flat = session.point(at)?;
            require_len(flat.len(), d + k * d + k, "phi arguments")?;
            let x = flat[0..d].to_vec();
            let xis: Vec<Vec<LaurentSeries>> = (0..*k)
                .map(|i| flat[d + i * d..d + (i + 1) * d].to_vec())
                .collect();
            let ts = flat[d + k * d..].to_vec();
            let values = ludkovsky_quotient(&f, &x, &xis, &ts)?;
            emit_values(&session, "phi", &values);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check { target } => run_check(&session, cli, target),
        Cmd::Probe { target } => run_probe(&session, cli, target),
        Cmd::Counterexample { n_max } => {
            let report =
                counterexample_report(field, *n_max, session.samples.max(500), session.prec, session.seed)?;
            let passed = report.passed();
            emit_probe(&session, &report.to_probe());
            Ok(exit_identity(passed))
        }
    }
}

fn run_check(session: &Session, cli: &Cli, target: &CheckTarget) -> Result<ExitCode, EngineError> {
    let mut all_passed = true;
    let emit = |report: &IdentityReport, passed: &mut bool| {
        *passed &= report.passed();
        emit_identity(session, report);
    };
    match target {
        CheckTarget::Fviaphi {
            source,
            random,
            degree,
        } => {
            let maps = maps_for_check(session, cli, source, *random, 2, *degree)?;
            for f in &maps {
                let u = domain_for(session, cli, f.arity())?;
                let report = check_fviaphi(f, &u, &session.config())?;
                emit(&report, &mut all_passed);
            }
        }
        CheckTarget::Simpfml {
            source,
            alpha,
            beta,
        } => {
            let f = load_expr(session, cli, source)?;
            let alpha = parse_alpha(alpha, f.arity())?;
            let beta = parse_alpha(beta, alpha.flat_len())?;
            let u = domain_for(session, cli, f.arity())?;
            let report = check_simpfml(&f, &alpha, &beta, &u, &session.config())?;
            emit(&report, &mut all_passed);
        }
        CheckTarget::Theta {
            source,
            max_order,
            random,
            degree,
        } => {
            let maps = maps_for_check(session, cli, source, *random, 1, *degree)?;
            for f in &maps {
                let u = domain_for(session, cli, f.arity())?;
                for alpha in multi_indices_up_to(f.arity(), *max_order) {
                    let report = check_transport(f, &alpha, &u, &session.config())?;
                    emit(&report, &mut all_passed);
                }
            }
        }
        CheckTarget::Symmetry { source, alpha } => {
            let f = load_expr(session, cli, source)?;
            let alpha = parse_alpha(alpha, f.arity())?;
            let u = domain_for(session, cli, f.arity())?;
            let report = check_symmetry(&f, &alpha, &u, &session.config())?;
            emit(&report, &mut all_passed);
        }
        CheckTarget::Recursion {
            source,
            max_order,
            random,
            degree,
        } => {
            let maps = maps_for_check(session, cli, source, *random, 2, *degree)?;
            for f in &maps {
                let u = domain_for(session, cli, f.arity())?;
                for alpha in multi_indices_up_to(f.arity(), *max_order) {
                    let report = check_recursion(f, &alpha, &u, &session.config())?;
                    emit(&report, &mut all_passed);
                }
            }
        }
    }
    Ok(exit_identity(all_passed))
}

fn run_probe(session: &Session, cli: &Cli, target: &ProbeTarget) -> Result<ExitCode, EngineError> {
    match target {
        ProbeTarget::Holder { source } => {
            let f = load_expr(session, cli, source)?;
            let u = domain_for(session, cli, f.arity())?;
            let report = holder_estimate(&f, &u, session.samples.max(100), session.prec, session.seed)?;
            emit_probe(session, &report.to_probe());
        }
        ProbeTarget::C2 { n_max } => {
            let report = blowup_probe(session.field, *n_max, session.prec)?;
            emit_probe(session, &report);
        }
        ProbeTarget::Bcnorm {
            source,
            alpha,
            levels,
        } => {
            let f = load_expr(session, cli, source)?;
            let alpha = parse_alpha(alpha, f.arity())?;
            let u = domain_for(session, cli, f.arity())?;
            let levels = parse_levels(levels)?;
            let rows = dd_boundedness_scan(
                &f,
                &alpha,
                &u,
                &levels,
                session.samples,
                session.prec,
                session.seed,
            )?;
            let report = ProbeReport {
                check: "bcnorm".into(),
                params: serde_json::json!({
                    "field_p": session.field.modulus(),
                    "prec": session.prec,
                    "seed": session.seed,
                    "alpha": alpha.to_string(),
                }),
                rows: rows
                    .iter()
                    .map(|r| serde_json::json!({
                        "level": r.level,
                        "max_log_abs": r.max_log_abs,
                        "samples": r.samples,
                    }))
                    .collect(),
                verdict: "sup of |dd| per separation level; growth across levels signals unboundedness".into(),
            };
            emit_probe(session, &report);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_identity(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn load_expr(session: &Session, cli: &Cli, source: &ExprSource) -> Result<Expr, EngineError> {
    let text = match (&source.expr, &source.expr_file) {
        (Some(t), None) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| {
            EngineError::InvalidConfig(format!("cannot read {}: {e}", path.display()))
        })?,
        _ => {
            return Err(EngineError::InvalidConfig(
                "exactly one of --expr and --expr-file is required".into(),
            ))
        }
    };
    let text = text.trim();
    let arity = cli.arity.unwrap_or_else(|| infer_arity(text));
    parse_expr(text, session.field, arity)
}

fn maps_for_check(
    session: &Session,
    cli: &Cli,
    source: &ExprSource,
    random: usize,
    default_d: usize,
    degree: u32,
) -> Result<Vec<Expr>, EngineError> {
    if source.expr.is_some() || source.expr_file.is_some() {
        return Ok(vec![load_expr(session, cli, source)?]);
    }
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(session.seed ^ 0x706f6c79);
    let d = cli.arity.unwrap_or(default_d);
    Ok((0..random.max(1))
        .map(|i| random_polynomial(&mut rng, session.field, d, 1 + (i % 2), degree))
        .collect())
}

fn domain_for(session: &Session, cli: &Cli, d: usize) -> Result<BallDomain, EngineError> {
    let Some(spec) = &cli.domain else {
        return Ok(BallDomain::unit_ball(session.field, d));
    };
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("O^") {
        let dim: usize = rest.parse().map_err(|_| bad_domain(spec))?;
        require_len(dim, d, "domain dimensions")?;
        return Ok(BallDomain::unit_ball(session.field, dim));
    }
    let inner = spec
        .strip_prefix("ball(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| bad_domain(spec))?;
    let coords: Result<Vec<(LaurentSeries, i64)>, EngineError> = inner
        .split(';')
        .map(|pair| {
            let (c, r) = pair.rsplit_once(',').ok_or_else(|| bad_domain(spec))?;
            let center = session.series(c)?;
            let radius: i64 = r.trim().parse().map_err(|_| bad_domain(spec))?;
            Ok((center, radius))
        })
        .collect();
    let coords = coords?;
    require_len(coords.len(), d, "domain dimensions")?;
    Ok(BallDomain::new(session.field, coords))
}

fn bad_domain(spec: &str) -> EngineError {
    EngineError::InvalidConfig(format!(
        "domain must be O^d or ball(c_1,r_1;...;c_d,r_d): got `{spec}`"
    ))
}

fn parse_alpha(text: &str, d: usize) -> Result<MultiIndex, EngineError> {
    let entries: Result<Vec<u32>, _> = text.split(',').map(|s| s.trim().parse::<u32>()).collect();
    let entries =
        entries.map_err(|_| EngineError::InvalidConfig(format!("bad multi-index `{text}`")))?;
    require_len(entries.len(), d, "multi-index entries")?;
    Ok(MultiIndex::new(entries))
}

fn parse_levels(text: &str) -> Result<Vec<i64>, EngineError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| EngineError::InvalidConfig(format!("bad level list `{text}`")))
        })
        .collect()
}

fn require_len(got: usize, want: usize, what: &str) -> Result<(), EngineError> {
    if got == want {
        Ok(())
    } else {
        Err(EngineError::Shape(format!("expected {want} {what}, got {got}")))
    }
}

fn emit_values(session: &Session, op: &str, values: &[LaurentSeries]) {
    match session.format {
        Format::Text => {
            let line = values
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            println!("{line}");
        }
        Format::Json => {
            let rendered: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            let doc = serde_json::json!({ "op": op, "values": rendered });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        Format::Csv => {
            println!("component,value");
            for (i, v) in values.iter().enumerate() {
                println!("{},{v}", i + 1);
            }
        }
    }
}

fn emit_identity(session: &Session, report: &IdentityReport) {
    match session.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(report).unwrap()),
        Format::Csv => print!("{}", report.to_csv()),
    }
}

fn emit_probe(session: &Session, report: &ProbeReport) {
    match session.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(report).unwrap()),
        Format::Csv => print!("{}", report.to_csv()),
    }
}
