use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;

use lfmoments::asymptotics::{
    component_main, g_deriv_series, ghat_exact, n_main_exact, s_main_exact, PredictionKind,
};
use lfmoments::ensemble::{
    apply_error_constant, ensemble_a_sums, fit_error_constant, moment_reports, s_from_sums,
    t_from_sums, ExecOpts,
};
use lfmoments::{
    build_l, exact_m_sum, exact_n_sum, rational_string, rh_roots_check, run_verify, CharCache,
    Error, FieldCtx, Parity, QuadValue,
};

/// Exact mean values of derivatives of quadratic Dirichlet L-functions
/// over F_q(t), compared against their closed-form main terms.
#[derive(Parser)]
#[command(name = "lfmoments", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact-identity suites and print one verdict per suite.
    Verify(VerifyArgs),
    /// Ensemble moment vs main-term prediction, one row per (g, mu).
    Moments(MomentsArgs),
    /// Component sums (S, T, M, N) vs their lemma-level main terms.
    Components(ComponentsArgs),
    /// Partial sums and tail bounds for the normalized derivatives of G.
    Gvalues(GvaluesArgs),
    /// Root-modulus deviations from the Weil circle, per ensemble.
    Zeros(ZerosArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    q: u64,
    #[arg(long, default_value_t = 3)]
    g_max: usize,
    #[arg(long, default_value_t = 3)]
    mu_max: u32,
    #[arg(long, default_value_t = 14)]
    cutoff: usize,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long, default_value_t = 3)]
    q: u64,
    #[arg(long, value_enum)]
    parity: ParityArg,
    /// Genus range, e.g. `3` or `2..5` (inclusive).
    #[arg(long)]
    g: RangeArg,
    /// Derivative order range, e.g. `1` or `1..3` (inclusive).
    #[arg(long)]
    mu: RangeArg,
    #[arg(long, default_value_t = 14)]
    cutoff: usize,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct ComponentsArgs {
    #[arg(long, default_value_t = 3)]
    q: u64,
    #[arg(long, value_enum)]
    parity: ParityArg,
    #[arg(long)]
    g: RangeArg,
    /// Weight exponent range for the S and M sums.
    #[arg(long, default_value = "0..2")]
    m: RangeArg,
    #[arg(long, default_value_t = 14)]
    cutoff: usize,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct GvaluesArgs {
    #[arg(long, default_value_t = 3)]
    q: u64,
    /// Derivative order range.
    #[arg(long, default_value = "0..3")]
    m: RangeArg,
    #[arg(long, default_value_t = 14)]
    cutoff: usize,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct ZerosArgs {
    #[arg(long, default_value_t = 3)]
    q: u64,
    #[arg(long, value_enum)]
    parity: ParityArg,
    #[arg(long)]
    g: RangeArg,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct IoArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Worker threads; the LFMOMENTS_WORKERS environment variable
    /// overrides this flag.
    #[arg(long)]
    workers: Option<usize>,
    /// Refusal threshold in estimated character evaluations.
    #[arg(long, default_value_t = 5_000_000_000)]
    budget: u128,
}

impl IoArgs {
    fn exec_opts(&self) -> ExecOpts {
        let env_workers = std::env::var("LFMOMENTS_WORKERS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok());
        ExecOpts {
            workers: env_workers.or(self.workers),
            budget: self.budget,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Odd,
    Even,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Parity {
        match p {
            ParityArg::Odd => Parity::Odd,
            ParityArg::Even => Parity::Even,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum FormatArg {
    Csv,
    Json,
}

/// Inclusive `a..b` range, or a single value.
#[derive(Clone, Copy)]
struct RangeArg {
    start: u64,
    end: u64,
}

impl RangeArg {
    fn values(&self) -> impl Iterator<Item = u64> + Clone {
        self.start..=self.end
    }
}

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |v: &str| {
            v.parse::<u64>()
                .map_err(|_| format!("invalid range bound `{v}`"))
        };
        if let Some((a, b)) = s.split_once("..") {
            let start = parse(a)?;
            let end = parse(b)?;
            if start > end {
                return Err(format!("empty range `{s}`"));
            }
            Ok(RangeArg { start, end })
        } else {
            let v = parse(s)?;
            Ok(RangeArg { start: v, end: v })
        }
    }
}

#[derive(Serialize)]
struct MomentRow {
    q: u64,
    parity: String,
    g: usize,
    mu: u32,
    ensemble_size: u64,
    empirical_a: String,
    empirical_b: String,
    empirical_float: f64,
    predicted_float: f64,
    abs_dev: f64,
    rel_dev: f64,
    error_budget: f64,
    runtime_ms: u64,
}

const MOMENT_HEADER: &str = "q,parity,g,mu,ensemble_size,empirical_a,empirical_b,\
empirical_float,predicted_float,abs_dev,rel_dev,error_budget,runtime_ms";

impl MomentRow {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.q,
            self.parity,
            self.g,
            self.mu,
            self.ensemble_size,
            self.empirical_a,
            self.empirical_b,
            self.empirical_float,
            self.predicted_float,
            self.abs_dev,
            self.rel_dev,
            self.error_budget,
            self.runtime_ms
        )
    }
}

#[derive(Serialize)]
struct ComponentRow {
    kind: String,
    q: u64,
    parity: String,
    g: usize,
    h: usize,
    m: String,
    empirical_a: String,
    empirical_b: String,
    empirical_float: f64,
    predicted_float: f64,
    abs_dev: f64,
    rel_dev: f64,
    error_budget: f64,
    runtime_ms: u64,
}

const COMPONENT_HEADER: &str = "kind,q,parity,g,h,m,empirical_a,empirical_b,empirical_float,\
predicted_float,abs_dev,rel_dev,error_budget,runtime_ms";

impl ComponentRow {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.q,
            self.parity,
            self.g,
            self.h,
            self.m,
            self.empirical_a,
            self.empirical_b,
            self.empirical_float,
            self.predicted_float,
            self.abs_dev,
            self.rel_dev,
            self.error_budget,
            self.runtime_ms
        )
    }
}

#[derive(Serialize)]
struct GvalueRow {
    q: u64,
    m: u32,
    cutoff: usize,
    partial: String,
    partial_float: f64,
    tail_bound: f64,
}

const GVALUE_HEADER: &str = "q,m,cutoff,partial,partial_float,tail_bound";

impl GvalueRow {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.q, self.m, self.cutoff, self.partial, self.partial_float, self.tail_bound
        )
    }
}

#[derive(Serialize)]
struct ZeroRow {
    q: u64,
    parity: String,
    g: usize,
    ensemble_size: u64,
    max_circle_dev: f64,
    unit_root_violations: u64,
    pass: bool,
}

const ZERO_HEADER: &str = "q,parity,g,ensemble_size,max_circle_dev,unit_root_violations,pass";

impl ZeroRow {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.q,
            self.parity,
            self.g,
            self.ensemble_size,
            self.max_circle_dev,
            self.unit_root_violations,
            self.pass
        )
    }
}

fn emit<T: Serialize>(
    io: &IoArgs,
    header: &str,
    rows: &[T],
    csv_rows: Vec<String>,
) -> Result<(), String> {
    let text = match io.format {
        FormatArg::Csv => {
            let mut out = String::new();
            writeln!(out, "{header}").unwrap();
            for row in csv_rows {
                writeln!(out, "{row}").unwrap();
            }
            out
        }
        FormatArg::Json => {
            let mut out = serde_json::to_string_pretty(rows).map_err(|e| e.to_string())?;
            out.push('\n');
            out
        }
    };
    match &io.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn quad_parts(v: &QuadValue) -> (String, String, f64) {
    (
        rational_string(v.rational_part()),
        rational_string(v.surd_part()),
        v.to_f64(),
    )
}

enum CliError {
    Lib(Error),
    Io(String),
    CheckFailed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

fn run_moments(args: &MomentsArgs) -> Result<(), CliError> {
    let opts = args.io.exec_opts();
    let parity: Parity = args.parity.into();
    let mut reports = moment_reports(
        args.q,
        parity,
        args.g.values().map(|g| g as usize),
        args.mu.values().map(|m| m as u32),
        args.cutoff,
        &opts,
    )?;
    let fitted = fit_error_constant(&reports);
    apply_error_constant(&mut reports, fitted);
    let rows: Vec<MomentRow> = reports
        .iter()
        .map(|r| {
            let (ea, eb, ef) = quad_parts(&r.empirical);
            MomentRow {
                q: r.spec.q,
                parity: r.spec.parity.to_string(),
                g: r.spec.g,
                mu: r.spec.mu,
                ensemble_size: r.ensemble_size,
                empirical_a: ea,
                empirical_b: eb,
                empirical_float: ef,
                predicted_float: r.predicted,
                abs_dev: r.abs_dev,
                rel_dev: r.rel_dev,
                error_budget: r.error_budget,
                runtime_ms: r.runtime_ms,
            }
        })
        .collect();
    let csv_rows = rows.iter().map(MomentRow::csv).collect();
    emit(&args.io, MOMENT_HEADER, &rows, csv_rows).map_err(CliError::Io)
}

fn run_components(args: &ComponentsArgs) -> Result<(), CliError> {
    let opts = args.io.exec_opts();
    let parity: Parity = args.parity.into();
    let q = args.q;
    let max_m = args.m.end as u32;
    let ghat = ghat_exact(q, args.cutoff, max_m + 1);
    let mut rows: Vec<ComponentRow> = Vec::new();
    for g in args.g.values() {
        let g = g as usize;
        let start = Instant::now();
        let (_, sums) = ensemble_a_sums(q, parity, g, g, &opts)?;
        let sweep_ms = start.elapsed().as_millis() as u64;
        let deg = parity.discriminant_degree(g);
        let hs: Vec<usize> = if g >= 1 { vec![g - 1, g] } else { vec![0] };
        for &h in &hs {
            for m in args.m.values() {
                let m = m as u32;
                // Empirical shifted sum vs its main term.
                let s_val = s_from_sums(q, h, m, &sums);
                let s_pred = s_main_exact(q, deg, h, m, &ghat).to_f64().unwrap();
                let s_budget =
                    (q as f64).powf(deg as f64 * 7.0 / 8.0) * (deg as f64).powi(m as i32);
                rows.push(component_row(
                    "S",
                    q,
                    parity,
                    g,
                    h,
                    Some(m),
                    &s_val,
                    s_pred,
                    s_budget,
                    sweep_ms,
                ));
                // Exact coprime-count sum vs its main term.
                let m_val = QuadValue::from_rational(q, exact_m_sum(q, parity, g, h, m)?);
                let m_pred =
                    component_main(PredictionKind::ComponentM, q, parity, g, h, m, args.cutoff)?;
                rows.push(component_row(
                    "M",
                    q,
                    parity,
                    g,
                    h,
                    Some(m),
                    &m_val,
                    m_pred.value,
                    m_pred.error_budget,
                    0,
                ));
            }
            let n_val = exact_n_sum(q, parity, g, h)?;
            let n_pred =
                component_main(PredictionKind::ComponentN, q, parity, g, h, 0, args.cutoff)?;
            rows.push(component_row(
                "N",
                q,
                parity,
                g,
                h,
                None,
                &n_val,
                n_pred.value,
                n_pred.error_budget,
                0,
            ));
            if parity == Parity::Even {
                let t_val = t_from_sums(q, h, &sums);
                let t_pred = n_main_exact(q, deg, h, &ghat[0]).to_f64();
                let budget = (q as f64).powf(deg as f64 * 7.0 / 8.0) * deg as f64;
                rows.push(component_row(
                    "T", q, parity, g, h, None, &t_val, t_pred, budget, sweep_ms,
                ));
            }
        }
    }
    let csv_rows = rows.iter().map(ComponentRow::csv).collect();
    emit(&args.io, COMPONENT_HEADER, &rows, csv_rows).map_err(CliError::Io)
}

#[allow(clippy::too_many_arguments)]
fn component_row(
    kind: &str,
    q: u64,
    parity: Parity,
    g: usize,
    h: usize,
    m: Option<u32>,
    value: &QuadValue,
    predicted: f64,
    error_budget: f64,
    runtime_ms: u64,
) -> ComponentRow {
    let (ea, eb, ef) = quad_parts(value);
    let abs_dev = (ef - predicted).abs();
    ComponentRow {
        kind: kind.into(),
        q,
        parity: parity.to_string(),
        g,
        h,
        m: m.map(|v| v.to_string()).unwrap_or_default(),
        empirical_a: ea,
        empirical_b: eb,
        empirical_float: ef,
        predicted_float: predicted,
        abs_dev,
        rel_dev: if predicted != 0.0 {
            abs_dev / predicted.abs()
        } else {
            f64::INFINITY
        },
        error_budget,
        runtime_ms,
    }
}

fn run_gvalues(args: &GvaluesArgs) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for m in args.m.values() {
        for cutoff in 0..=args.cutoff {
            let v = g_deriv_series(args.q, m as u32, cutoff);
            rows.push(GvalueRow {
                q: args.q,
                m: m as u32,
                cutoff,
                partial: rational_string(&v.partial),
                partial_float: v.partial.to_f64().unwrap(),
                tail_bound: v.tail_bound,
            });
        }
    }
    let csv_rows = rows.iter().map(GvalueRow::csv).collect();
    emit(&args.io, GVALUE_HEADER, &rows, csv_rows).map_err(CliError::Io)
}

fn run_zeros(args: &ZerosArgs) -> Result<(), CliError> {
    let parity: Parity = args.parity.into();
    let field = FieldCtx::new(args.q)?;
    let mut rows = Vec::new();
    for g in args.g.values() {
        let g = g as usize;
        let deg = parity.discriminant_degree(g);
        let needed = match parity {
            Parity::Odd => g,
            Parity::Even => 2 * g + 1,
        };
        let cache = CharCache::build(field, needed.max(1));
        let mut max_dev = 0.0f64;
        let mut unit_violations = 0u64;
        let mut size = 0u64;
        let mut all_pass = true;
        for d in lfmoments::squarefree_polys(field, deg) {
            let l = build_l(&cache, &d)?;
            let report = rh_roots_check(&l, args.tol)?;
            size += 1;
            max_dev = max_dev.max(report.max_circle_dev);
            let expected_units = match parity {
                Parity::Odd => 0,
                Parity::Even => 1,
            };
            if report.unit_root_count != expected_units {
                unit_violations += 1;
            }
            all_pass &= report.pass;
        }
        rows.push(ZeroRow {
            q: args.q,
            parity: parity.to_string(),
            g,
            ensemble_size: size,
            max_circle_dev: max_dev,
            unit_root_violations: unit_violations,
            pass: all_pass,
        });
    }
    let ok = rows.iter().all(|r| r.pass);
    let csv_rows = rows.iter().map(ZeroRow::csv).collect();
    emit(&args.io, ZERO_HEADER, &rows, csv_rows).map_err(CliError::Io)?;
    if !ok {
        return Err(CliError::CheckFailed("root-location check failed".into()));
    }
    Ok(())
}

/// Flag-level validation beyond what the parser can express: q must be an
/// odd prime, and prediction cutoffs below 4 are never meaningful.
fn validate(cli: &Cli) -> Result<(), String> {
    let (q, cutoff) = match &cli.command {
        Command::Verify(a) => (a.q, Some(a.cutoff)),
        Command::Moments(a) => (a.q, Some(a.cutoff)),
        Command::Components(a) => (a.q, Some(a.cutoff)),
        Command::Gvalues(a) => (a.q, None),
        Command::Zeros(a) => (a.q, None),
    };
    if FieldCtx::new(q).is_err() {
        return Err(format!("--q {q} is not an odd prime"));
    }
    if let Some(c) = cutoff {
        if c < 4 {
            return Err(format!("--cutoff {c} is below the minimum of 4"));
        }
    }
    if let Command::Moments(a) = &cli.command {
        if a.g.start == 0 {
            return Err("--g must start at 1: mean-value predictions need genus >= 1".into());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = validate(&cli) {
        eprintln!("usage error: {msg}");
        return ExitCode::from(2);
    }
    let result = match &cli.command {
        Command::Verify(args) => match run_verify(args.q, args.g_max, args.mu_max, args.cutoff) {
            Ok(reports) => {
                let mut all = true;
                for r in &reports {
                    println!(
                        "{} {}: {}",
                        if r.pass { "PASS" } else { "FAIL" },
                        r.name,
                        r.detail
                    );
                    all &= r.pass;
                }
                if all {
                    return ExitCode::SUCCESS;
                }
                return ExitCode::FAILURE;
            }
            Err(e) => Err(CliError::Lib(e)),
        },
        Command::Moments(args) => run_moments(args),
        Command::Components(args) => run_components(args),
        Command::Gvalues(args) => run_gvalues(args),
        Command::Zeros(args) => run_zeros(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Lib(Error::BudgetExceeded { estimate, budget })) => {
            eprintln!(
                "refused: estimated {estimate} character evaluations exceeds budget {budget}"
            );
            ExitCode::from(3)
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        Err(CliError::Io(msg)) | Err(CliError::CheckFailed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
