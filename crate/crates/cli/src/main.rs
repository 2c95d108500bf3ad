//! `hyperwell`: spectra, quasi-exact pairs, wavefunction samples and table
//! reproduction for `V_m(z; v) = -v sinh^(2m) z / cosh^(2m+2) z`.
//!
//! Exit codes: 0 ok, 1 usage, 2 non-convergence or mismatch, 3 empty result.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hyperwell::aim::{aim_find_eigenvalues, m1_wavefunction_with_tolerance, AimOptions, AimProblem};
use hyperwell::heun::{build_solution, find_tau0_roots, necessary_tau1, ode_residual, HeunCoefficients, RootSearch};
use hyperwell::poschl_teller::{pt_spectrum, pt_wavefunction};
use hyperwell::potential::exact_bound_state_count_pt;
use hyperwell::qes::{qes_enumerate, qes_wavefunction, EnumerateOptions};
use hyperwell::reference::{parse_strength, reproduce_table, RowKind, TableSettings, TABLE_IDS};
use hyperwell::{BigReal, EigenResult, Error, Parity, Precision};

#[derive(Parser, Debug)]
#[command(name = "hyperwell", version, about = "Bound states of hyperbolic double-well potentials")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Working precision in decimal digits (at least 30).
    #[arg(long, global = true, env = "HYPERWELL_DIGITS", default_value_t = 100)]
    digits: u32,
    /// Expansion point of the iteration, in (0, 1).
    #[arg(long, global = true, default_value = "0.5")]
    r0: String,
    /// Largest iteration count.
    #[arg(long = "n-max", global = true, default_value_t = 100)]
    n_max: usize,
    /// Convergence tolerance exponent: successive roots agree to 10^-TOL.
    #[arg(long, global = true, default_value_t = 25)]
    tol: i32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bound energies by asymptotic iteration.
    Solve {
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=2))]
        m: u32,
        /// Strength, a decimal or `a+b*sqrt(c)`.
        #[arg(long)]
        v: String,
        /// 0 (even states) or 0.5 (odd states).
        #[arg(long)]
        beta: String,
        /// Report only the lowest LEVELS states.
        #[arg(long)]
        levels: Option<usize>,
        /// Override of the Gaussian exponent used in the factorization.
        #[arg(long)]
        gamma: Option<String>,
    },
    /// Closed-form levels of the m = 0 well.
    Exact {
        #[arg(long)]
        v: String,
        #[arg(long)]
        beta: String,
    },
    /// Quasi-exact (ε, v) pairs of the m = 2 well with a degree-N polynomial factor.
    Qes {
        #[arg(long = "N", alias = "degree")]
        degree: usize,
        #[arg(long)]
        beta: String,
        /// Upper end of the √v scan.
        #[arg(long)]
        tmax: Option<String>,
    },
    /// Polynomial solutions of (a2 z² + a1 z) f'' + (b2 z² + b1 z + b0) f' - (τ1 z + τ0) f = 0.
    Heun {
        #[arg(long, allow_hyphen_values = true)]
        a1: String,
        #[arg(long, allow_hyphen_values = true)]
        a2: String,
        #[arg(long, allow_hyphen_values = true)]
        b0: String,
        #[arg(long, allow_hyphen_values = true)]
        b1: String,
        #[arg(long, allow_hyphen_values = true)]
        b2: String,
        #[arg(long = "N", alias = "degree")]
        degree: usize,
        /// Lower end of the τ0 bracket.
        #[arg(long, allow_hyphen_values = true)]
        lo: String,
        /// Upper end of the τ0 bracket.
        #[arg(long, allow_hyphen_values = true)]
        hi: String,
        #[arg(long = "scan-points", default_value_t = 512)]
        scan_points: usize,
    },
    /// Samples ψ(z) on a uniform grid (always `z,psi`).
    Wavefunction {
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=2))]
        m: u32,
        /// Strength (m = 0, 1).
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        beta: String,
        /// Level within the parity sector (m = 0, 1).
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Polynomial degree of the quasi-exact state (m = 2).
        #[arg(long = "N", alias = "degree")]
        degree: Option<usize>,
        /// Which of the degree-N pairs, by ascending v (m = 2).
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-5")]
        zmin: String,
        #[arg(long, allow_hyphen_values = true, default_value = "5")]
        zmax: String,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Recomputes a published table and compares digit by digit.
    Table {
        /// One of 1..6 or A2.
        #[arg(long)]
        id: String,
    },
}

/// What went wrong, mapped onto the exit-code contract.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Mismatch(String),
    Empty(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Mismatch(_) => 2,
            Failure::Empty(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Mismatch(m) | Failure::Empty(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let text = e.to_string();
        match e {
            Error::NoSuchState { .. } | Error::NoPolynomialState { .. } => Failure::Empty(text),
            Error::Sufficiency { .. } | Error::PochhammerZero(_) | Error::IterationBudget(_) | Error::Truncation { .. } => {
                Failure::Mismatch(text)
            }
            _ => Failure::Usage(text),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Mismatch(format!("write failed: {e}"))
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Context {
    prec: Precision,
    r0: BigReal,
    n_max: usize,
    tol: i32,
    format: Format,
}

impl Context {
    fn from_config(config: &RunConfig) -> std::result::Result<Self, Failure> {
        let prec = Precision::new(config.digits)?;
        let r0 = BigReal::parse(&config.r0, prec)?;
        if !(r0 > 0 && r0 < 1) {
            return Err(Failure::Usage(format!("--r0 must lie in (0, 1), got {}", config.r0)));
        }
        if config.n_max == 0 {
            return Err(Failure::Usage("--n-max must be positive".into()));
        }
        if config.tol <= 0 || config.tol as u32 >= config.digits {
            return Err(Failure::Usage(format!("--tol must be in 1..{}", config.digits)));
        }
        Ok(Context {
            prec,
            r0,
            n_max: config.n_max,
            tol: config.tol,
            format: config.format,
        })
    }

    fn number(&self, text: &str) -> std::result::Result<BigReal, Failure> {
        Ok(parse_strength(text, self.prec)?)
    }

    fn full(&self, x: &BigReal) -> String {
        x.to_significant(self.prec.digits() as usize)
    }
}

fn parse_beta(text: &str) -> std::result::Result<Parity, Failure> {
    Ok(Parity::parse(text)?)
}

/// Writes rows in the requested format; `text` is tab-separated with a header.
fn emit<T: Serialize>(rows: &[T], format: Format) -> Outcome {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Failure::Mismatch(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Csv | Format::Text => {
            let delimiter = if format == Format::Csv { b',' } else { b'\t' };
            let mut writer = csv::WriterBuilder::new().delimiter(delimiter).from_writer(&mut out);
            for row in rows {
                writer.serialize(row).map_err(|e| Failure::Mismatch(e.to_string()))?;
            }
            writer.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct LevelRow {
    m: u32,
    v: String,
    beta: &'static str,
    n: usize,
    epsilon: String,
    method: &'static str,
    iterations: Option<usize>,
    residual: Option<String>,
    converged: bool,
}

fn level_row(ctx: &Context, m: u32, v: &BigReal, r: &EigenResult, places: Option<usize>) -> LevelRow {
    LevelRow {
        m,
        v: ctx.full(v),
        beta: r.parity.as_str(),
        n: r.n,
        epsilon: match places {
            Some(p) => r.epsilon.to_fixed(p),
            None => ctx.full(&r.epsilon),
        },
        method: r.method.as_str(),
        iterations: r.iterations,
        residual: r.residual.as_ref().map(|x| x.to_significant(6)),
        converged: r.converged,
    }
}

fn aim_levels(ctx: &Context, m: u32, v: &BigReal, parity: Parity, gamma: Option<BigReal>) -> std::result::Result<Vec<EigenResult>, Failure> {
    let mut problem = AimProblem::with_r0(m, parity, v.clone(), ctx.r0.clone(), ctx.n_max)?;
    if let Some(g) = gamma {
        problem = problem.with_gamma(g)?;
    }
    let options = AimOptions::new(&problem)
        .with_n_max(ctx.n_max)
        .with_tol(BigReal::pow10(-ctx.tol, ctx.prec));
    Ok(aim_find_eigenvalues(&problem, &options)?)
}

fn cmd_solve(ctx: &Context, m: u32, v: &str, beta: &str, levels: Option<usize>, gamma: Option<&str>) -> Outcome {
    let parity = parse_beta(beta)?;
    let v = ctx.number(v)?;
    let gamma = gamma.map(|g| ctx.number(g)).transpose()?;
    let mut found = aim_levels(ctx, m, &v, parity, gamma)?;
    if let Some(k) = levels {
        found.truncate(k);
    }
    if found.is_empty() {
        return Err(Failure::Empty(format!("no β={parity} bound state found for m={m}, v={}", ctx.full(&v))));
    }
    let rows: Vec<LevelRow> = found.iter().map(|r| level_row(ctx, m, &v, r, Some(ctx.tol as usize))).collect();
    emit(&rows, ctx.format)?;
    let unsettled = found.iter().filter(|r| !r.converged).count();
    if unsettled > 0 {
        return Err(Failure::Mismatch(format!("{unsettled} state(s) did not converge within {} iterations", ctx.n_max)));
    }
    Ok(())
}

#[derive(Serialize)]
struct ExactRow {
    v: String,
    beta: &'static str,
    n: usize,
    epsilon: String,
    method: &'static str,
    count: usize,
}

fn cmd_exact(ctx: &Context, v: &str, beta: &str) -> Outcome {
    let parity = parse_beta(beta)?;
    let v = ctx.number(v)?;
    let count = exact_bound_state_count_pt(&v, parity);
    if count == 0 {
        return Err(Failure::Empty(format!("count=0: no β={parity} state at v={}", ctx.full(&v))));
    }
    let rows: Vec<ExactRow> = pt_spectrum(&v, parity)
        .iter()
        .map(|r| ExactRow {
            v: ctx.full(&v),
            beta: parity.as_str(),
            n: r.n,
            epsilon: ctx.full(&r.epsilon),
            method: r.method.as_str(),
            count,
        })
        .collect();
    emit(&rows, ctx.format)
}

#[derive(Serialize)]
struct QesRow {
    degree: usize,
    beta: &'static str,
    index: usize,
    v: String,
    epsilon: String,
}

fn cmd_qes(ctx: &Context, degree: usize, beta: &str, tmax: Option<&str>) -> Outcome {
    let parity = parse_beta(beta)?;
    let options = EnumerateOptions {
        t_max: tmax.map(|t| ctx.number(t)).transpose()?,
        precision: ctx.prec,
        ..EnumerateOptions::default()
    };
    let found = qes_enumerate(degree, parity, &options)?;
    if found.pairs.is_empty() {
        let (lo, hi) = &found.t_range;
        return Err(Failure::Empty(format!(
            "no degree-{degree} β={parity} pair with √v in [{}, {}]",
            lo.to_significant(12),
            hi.to_significant(12)
        )));
    }
    let rows: Vec<QesRow> = found
        .pairs
        .iter()
        .enumerate()
        .map(|(index, p)| QesRow {
            degree,
            beta: parity.as_str(),
            index,
            v: ctx.full(&p.v),
            epsilon: ctx.full(&p.epsilon),
        })
        .collect();
    emit(&rows, ctx.format)
}

#[derive(Serialize)]
struct HeunRow {
    degree: usize,
    tau0: String,
    tau1: String,
    /// `c_0 .. c_N`, space separated.
    coefficients: String,
    /// Largest ODE residual over sample points in the domain.
    residual: String,
}

#[allow(clippy::too_many_arguments)]
fn cmd_heun(ctx: &Context, a: [&str; 5], degree: usize, lo: &str, hi: &str, scan_points: usize) -> Outcome {
    let [a1, a2, b0, b1, b2] = a.map(|x| ctx.number(x));
    let (a1, a2, b0, b1, b2) = (a1?, a2?, b0?, b1?, b2?);
    let tau1 = necessary_tau1(degree, &b2);
    let coeffs = HeunCoefficients {
        a1,
        a2,
        b0,
        b1,
        b2,
        tau0: BigReal::zero(ctx.prec),
        tau1,
    };
    let search = RootSearch {
        scan_points,
        ..RootSearch::default()
    };
    let roots = find_tau0_roots(&coeffs, degree, &ctx.number(lo)?, &ctx.number(hi)?, &search)?;
    if roots.is_empty() {
        return Err(Failure::Empty(format!("no τ0 root of P_{} in [{lo}, {hi}]", degree + 1)));
    }
    let samples: Vec<BigReal> = (1..=5).map(|k| BigReal::from_ratio(k, 6, ctx.prec)).collect();
    let mut rows = Vec::with_capacity(roots.len());
    for tau0 in roots {
        let c = coeffs.with_tau0(tau0);
        let sol = build_solution(&c, degree)?;
        let residual = samples
            .iter()
            .map(|z| ode_residual(&c, &sol, z).abs())
            .fold(BigReal::zero(ctx.prec), BigReal::max);
        rows.push(HeunRow {
            degree,
            tau0: ctx.full(&c.tau0),
            tau1: ctx.full(&c.tau1),
            coefficients: sol.coeffs.iter().map(|x| ctx.full(x)).collect::<Vec<_>>().join(" "),
            residual: residual.to_significant(6),
        });
    }
    emit(&rows, ctx.format)
}

#[derive(Serialize)]
struct SampleRow {
    z: String,
    psi: String,
}

#[allow(clippy::too_many_arguments)]
fn cmd_wavefunction(
    ctx: &Context,
    m: u32,
    v: Option<&str>,
    beta: &str,
    n: usize,
    degree: Option<usize>,
    index: usize,
    range: (&str, &str),
    points: usize,
) -> Outcome {
    let parity = parse_beta(beta)?;
    let (zmin, zmax) = (ctx.number(range.0)?, ctx.number(range.1)?);
    if points < 2 || !(zmin < zmax) {
        return Err(Failure::Usage("need --points ≥ 2 and --zmin < --zmax".into()));
    }
    let step = (&zmax - &zmin) / (points as i64 - 1);
    let grid: Vec<BigReal> = (0..points).map(|i| &zmin + &(&step * i as i64)).collect();

    let psi: Box<dyn Fn(&BigReal) -> std::result::Result<BigReal, Failure>> = match m {
        0 => {
            let v = ctx.number(v.ok_or_else(|| Failure::Usage("--v is required for m = 0".into()))?)?;
            Box::new(move |z| Ok(pt_wavefunction(&v, parity, n, z)?))
        }
        1 => {
            let v = ctx.number(v.ok_or_else(|| Failure::Usage("--v is required for m = 1".into()))?)?;
            let found = aim_levels(ctx, 1, &v, parity, None)?;
            let level = found
                .get(n)
                .ok_or_else(|| Failure::Empty(format!("only {} β={parity} state(s) found", found.len())))?;
            if !level.converged {
                return Err(Failure::Mismatch(format!("level {n} did not converge")));
            }
            let eps = level.epsilon.clone();
            let tail = BigReal::pow10(-(ctx.tol.min(ctx.prec.digits() as i32 / 2)), ctx.prec);
            Box::new(move |z| Ok(m1_wavefunction_with_tolerance(parity, &eps, &v, z, 20_000, &tail)?))
        }
        _ => {
            let degree = degree.ok_or_else(|| Failure::Usage("--N is required for m = 2".into()))?;
            let options = EnumerateOptions {
                precision: ctx.prec,
                ..EnumerateOptions::default()
            };
            let pairs = qes_enumerate(degree, parity, &options)?.pairs;
            let pair = pairs
                .get(index)
                .cloned()
                .ok_or_else(|| Failure::Empty(format!("only {} degree-{degree} β={parity} pair(s)", pairs.len())))?;
            Box::new(move |z| Ok(qes_wavefunction(&pair, z)))
        }
    };

    let mut rows = Vec::with_capacity(points);
    for z in &grid {
        rows.push(SampleRow {
            z: ctx.full(z),
            psi: ctx.full(&psi(z)?),
        });
    }
    emit(&rows, ctx.format)
}

#[derive(Serialize)]
struct TableRow {
    table: String,
    m: u32,
    beta: &'static str,
    v: String,
    level: usize,
    kind: &'static str,
    printed: String,
    computed: Option<String>,
    exact: Option<String>,
    strength: Option<String>,
    iterations: Option<usize>,
    printed_iterations: Option<usize>,
    deviation: Option<String>,
    matched_digits: Option<i64>,
    gated: bool,
    pass: bool,
    note: String,
}

fn cmd_table(ctx: &Context, id: &str) -> Outcome {
    if !TABLE_IDS.contains(&id) {
        return Err(Failure::Usage(format!("unknown table {id:?}; expected one of {}", TABLE_IDS.join(", "))));
    }
    let settings = TableSettings {
        precision: ctx.prec,
        r0: Some(ctx.r0.clone()),
    };
    let report = reproduce_table(id, &settings)?;
    let rows: Vec<TableRow> = report
        .rows
        .iter()
        .map(|r| TableRow {
            table: r.row.table.clone(),
            m: r.row.m,
            beta: r.row.parity.as_str(),
            v: r.row.v_text.clone(),
            level: r.row.level,
            kind: match r.row.kind {
                RowKind::Aim => "aim",
                RowKind::Exact => "exact",
                RowKind::Qes => "qes",
            },
            printed: r.row.epsilon_text.clone(),
            computed: r.computed.as_ref().map(|x| x.to_significant(40)),
            exact: r.exact.as_ref().map(|x| x.to_significant(40)),
            strength: r.strength.as_ref().map(|x| x.to_significant(40)),
            iterations: r.iterations,
            printed_iterations: r.row.iterations,
            deviation: r.deviation.as_ref().map(|x| x.to_significant(3)),
            matched_digits: r.deviation.as_ref().map(matched_digits),
            gated: r.gated,
            pass: r.pass,
            note: r.note.clone(),
        })
        .collect();
    emit(&rows, ctx.format)?;
    eprintln!(
        "table {id}: {} rows, {} gated failures, {:.1}s",
        report.rows.len(),
        report.gated_failures(),
        report.elapsed.as_secs_f64()
    );
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{} row(s) below the acceptance threshold", report.gated_failures())))
    }
}

/// `floor(-log10 deviation)`: decimal places (or, for relative deviations,
/// significant digits) in agreement.
fn matched_digits(deviation: &BigReal) -> i64 {
    if deviation.is_zero() {
        return i64::from(deviation.precision().digits());
    }
    (-deviation.log10()).floor().to_i64().unwrap_or(0)
}

fn run(cli: Cli) -> Outcome {
    let ctx = Context::from_config(&cli.config)?;
    match &cli.command {
        Command::Solve { m, v, beta, levels, gamma } => cmd_solve(&ctx, *m, v, beta, *levels, gamma.as_deref()),
        Command::Exact { v, beta } => cmd_exact(&ctx, v, beta),
        Command::Qes { degree, beta, tmax } => cmd_qes(&ctx, *degree, beta, tmax.as_deref()),
        Command::Heun {
            a1,
            a2,
            b0,
            b1,
            b2,
            degree,
            lo,
            hi,
            scan_points,
        } => cmd_heun(&ctx, [a1, a2, b0, b1, b2], *degree, lo, hi, *scan_points),
        Command::Wavefunction {
            m,
            v,
            beta,
            n,
            degree,
            index,
            zmin,
            zmax,
            points,
        } => cmd_wavefunction(&ctx, *m, v.as_deref(), beta, *n, *degree, *index, (zmin, zmax), *points),
        Command::Table { id } => cmd_table(&ctx, id),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("hyperwell: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
