//! Command-line front end for the `grasstat` library.
//!
//! Scalar and structured results are printed as JSON documents on standard
//! output; grids and sweeps are printed as CSV with a leading schema comment.
//! Every JSON payload carries a versioned `schema` field and validates
//! against the matching document in `schemas/`. Domain errors print a
//! structured JSON document on standard error and exit with status 1; usage
//! errors exit with status 2.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use grasstat::bounds::{self, UnionBoundQuery};
use grasstat::codefile::{load_code, save_code};
use grasstat::density::{cdf_eval, invert_cdf, pdf_eval};
use grasstat::designer::{optimize_code, DesignSpec, Objective};
use grasstat::grassmann::{code_energy, min_pairwise_product, Code, GrassmannPoint};
use grasstat::moments::{chordal_moment, chordal_moment_exact, MomentQuery};
use grasstat::pep::{asymptotic_pep, estimate_pep, ChannelConfig};
use grasstat::rng::shard_rng;
use grasstat::sampling::sample_uniform;
use grasstat::Error;

#[derive(Parser)]
#[command(
    name = "grasstat",
    version,
    about = "Chordal-product statistics on the complex Grassmannian",
    after_help = "Set GRASSTAT_THREADS to cap the worker thread count (default: all cores)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw uniform random subspaces and write them as a JSON code file
    Sample(SampleArgs),
    /// Moments of the chordal product of a uniform random pair
    Moments(MomentsArgs),
    /// Chordal-product probability density on a regular grid (CSV)
    Pdf(GridArgs),
    /// Chordal-product distribution function on a regular grid (CSV)
    Cdf(GridArgs),
    /// Abscissa at which the distribution function reaches a given mass
    Invert(InvertArgs),
    /// Gilbert-Varshamov existence bound: separation from cardinality or back
    Gv(GvArgs),
    /// Expected random-code energy and the union bound on error probability
    EnergyBound(EnergyBoundArgs),
    /// Monte-Carlo pairwise error probability for two words of a code file
    Pep(PepArgs),
    /// Pairwise error probability swept over an SNR grid (CSV)
    Sweep(SweepArgs),
    /// Optimize a code by hill climbing with random restarts
    Design(DesignArgs),
    /// Energy and minimum pairwise product of a code file
    Energy(EnergyArgs),
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let payload = ErrorPayload {
                schema: "grasstat.error.v1",
                kind: error_kind(&err),
                message: err.to_string(),
            };
            eprintln!("{}", to_pretty(&payload));
            ExitCode::FAILURE
        }
    }
}

/// Honors GRASSTAT_THREADS before rayon builds its implicit global pool. An
/// unparsable value is reported and ignored rather than aborting the run.
fn init_thread_pool() {
    let Ok(raw) = std::env::var("GRASSTAT_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n >= 1 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("warning: ignoring GRASSTAT_THREADS={raw:?}; expected a positive integer"),
    }
}

fn run(command: Command) -> grasstat::Result<()> {
    match command {
        Command::Sample(args) => run_sample(args),
        Command::Moments(args) => run_moments(args),
        Command::Pdf(args) => run_grid(args, GridKind::Pdf),
        Command::Cdf(args) => run_grid(args, GridKind::Cdf),
        Command::Invert(args) => run_invert(args),
        Command::Gv(args) => run_gv(args),
        Command::EnergyBound(args) => run_energy_bound(args),
        Command::Pep(args) => run_pep(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Design(args) => run_design(args),
        Command::Energy(args) => run_energy(args),
    }
}

#[derive(Serialize)]
struct ErrorPayload {
    schema: &'static str,
    kind: &'static str,
    message: String,
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::RankDeficient { .. } => "rank-deficient",
        Error::DimensionMismatch { .. } => "dimension-mismatch",
        Error::InvalidDimensions { .. } => "invalid-dimensions",
        Error::ChartSingular => "chart-singular",
        Error::MomentDiverges { .. } => "moment-diverges",
        Error::InvalidCardinality { .. } => "invalid-cardinality",
        Error::DomainError { .. } => "domain-error",
        Error::IntersectingSubspaces => "intersecting-subspaces",
        Error::InvalidCodeFile(_) => "invalid-code-file",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

fn to_pretty<T: Serialize>(payload: &T) -> String {
    serde_json::to_string_pretty(payload).expect("payload serializes")
}

fn emit<T: Serialize>(payload: &T) {
    println!("{}", to_pretty(payload));
}

/// Converts a command-line SNR to the linear scale used by the library.
fn linear_snr(rho: f64, db: bool) -> f64 {
    if db {
        10f64.powf(rho / 10.0)
    } else {
        rho
    }
}

/// Rejects a non-finite intermediate value before it reaches a JSON payload,
/// where it would serialize as null and break the declared schema.
fn finite(what: &'static str, value: f64) -> grasstat::Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::DomainError { what, value })
    }
}

// ---------------------------------------------------------------------------
// sample

#[derive(Args)]
struct SampleArgs {
    /// Ambient dimension T
    #[arg(long = "T")]
    t: usize,
    /// Subspace dimension M
    #[arg(long = "M")]
    m: usize,
    /// Number of subspaces to draw (at least 2)
    #[arg(long)]
    count: usize,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output code file path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct SamplePayload {
    schema: &'static str,
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "K")]
    k: usize,
    seed: u64,
    out: String,
    min_product: f64,
}

fn run_sample(args: SampleArgs) -> grasstat::Result<()> {
    let mut rng = shard_rng(args.seed, 0);
    let mut points = Vec::with_capacity(args.count);
    for _ in 0..args.count {
        points.push(sample_uniform(args.t, args.m, &mut rng)?);
    }
    let code = Code::new(points)?;
    save_code(&code, &args.out)?;
    let (min_product, _) = min_pairwise_product(&code);
    emit(&SamplePayload {
        schema: "grasstat.sample.v1",
        t: args.t,
        m: args.m,
        k: args.count,
        seed: args.seed,
        out: args.out.display().to_string(),
        min_product,
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// moments

#[derive(Args)]
struct MomentsArgs {
    /// Ambient dimension T
    #[arg(long = "T")]
    t: usize,
    /// Subspace dimension M
    #[arg(long = "M")]
    m: usize,
    /// Moment order; repeat the flag for a table of several orders
    #[arg(long = "p", required = true, allow_negative_numbers = true)]
    p: Vec<f64>,
    /// Also report the exact rational value (integer orders only)
    #[arg(long)]
    exact: bool,
}

#[derive(Serialize)]
struct MomentsPayload {
    schema: &'static str,
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "M")]
    m: usize,
    entries: Vec<MomentEntry>,
}

#[derive(Serialize)]
struct MomentEntry {
    p: f64,
    moment: f64,
    exact: Option<String>,
}

fn run_moments(args: MomentsArgs) -> grasstat::Result<()> {
    let mut entries = Vec::with_capacity(args.p.len());
    for &p in &args.p {
        let moment = chordal_moment(&MomentQuery::new(args.t, args.m, p)?);
        let exact = if args.exact {
            if p.fract() != 0.0 || p.abs() > 1e6 {
                return Err(Error::DomainError { what: "p", value: p });
            }
            Some(chordal_moment_exact(args.t, args.m, p as i64)?.to_string())
        } else {
            None
        };
        entries.push(MomentEntry { p, moment, exact });
    }
    emit(&MomentsPayload { schema: "grasstat.moments.v1", t: args.t, m: args.m, entries });
    Ok(())
}

// ---------------------------------------------------------------------------
// pdf / cdf

#[derive(Args)]
struct GridArgs {
    /// Subspace dimension M
    #[arg(long = "M")]
    m: usize,
    /// Ambient dimension T
    #[arg(long = "T")]
    t: usize,
    /// Number of rows; abscissae are k/n for k = 1..n
    #[arg(long)]
    grid: usize,
}

enum GridKind {
    Pdf,
    Cdf,
}

fn run_grid(args: GridArgs, kind: GridKind) -> grasstat::Result<()> {
    if args.grid < 1 {
        return Err(Error::DomainError { what: "grid", value: args.grid as f64 });
    }
    let (name, eval): (&str, fn(usize, usize, f64) -> grasstat::Result<f64>) = match kind {
        GridKind::Pdf => ("pdf-grid", pdf_eval),
        GridKind::Cdf => ("cdf-grid", cdf_eval),
    };
    let mut rows = Vec::with_capacity(args.grid);
    for k in 1..=args.grid {
        let x = k as f64 / args.grid as f64;
        rows.push((x, eval(args.m, args.t, x)?));
    }
    println!("# schema: grasstat.{name}.v1");
    println!("x,value");
    for (x, value) in rows {
        println!("{x},{value}");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// invert

#[derive(Args)]
struct InvertArgs {
    /// Subspace dimension M
    #[arg(long = "M")]
    m: usize,
    /// Ambient dimension T
    #[arg(long = "T")]
    t: usize,
    /// Probability mass to the left of the returned abscissa
    #[arg(long)]
    q: f64,
}

#[derive(Serialize)]
struct InvertPayload {
    schema: &'static str,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "T")]
    t: usize,
    q: f64,
    x: f64,
}

fn run_invert(args: InvertArgs) -> grasstat::Result<()> {
    let x = invert_cdf(args.m, args.t, args.q)?;
    emit(&InvertPayload { schema: "grasstat.invert.v1", m: args.m, t: args.t, q: args.q, x });
    Ok(())
}

// ---------------------------------------------------------------------------
// gv

#[derive(Args)]
#[command(group(ArgGroup::new("target").required(true).args(["k", "delta"])))]
struct GvArgs {
    /// Ambient dimension T
    #[arg(long = "T")]
    t: usize,
    /// Subspace dimension M
    #[arg(long = "M")]
    m: usize,
    /// Code cardinality; the bound returns the guaranteed separation delta
    #[arg(long = "K")]
    k: Option<u64>,
    /// Separation delta; the bound returns the guaranteed cardinality K
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Serialize)]
struct GvPayload {
    schema: &'static str,
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "K")]
    k: u64,
    delta: f64,
}

fn run_gv(args: GvArgs) -> grasstat::Result<()> {
    let (k, delta) = match (args.k, args.delta) {
        (Some(k), None) => (k, bounds::gv_min_product(args.t, args.m, k)?),
        (None, Some(delta)) => (bounds::gv_min_cardinality(args.t, args.m, delta)?, delta),
        _ => unreachable!("clap enforces exactly one of --K/--delta"),
    };
    emit(&GvPayload { schema: "grasstat.gv.v1", t: args.t, m: args.m, k, delta });
    Ok(())
}

// ---------------------------------------------------------------------------
// energy-bound

#[derive(Args)]
struct EnergyBoundArgs {
    /// Ambient dimension T
    #[arg(long = "T")]
    t: usize,
    /// Subspace dimension M
    #[arg(long = "M")]
    m: usize,
    /// Receive antennas N
    #[arg(long = "N")]
    n: u32,
    /// Code cardinality K
    #[arg(long = "K")]
    k: u64,
    /// Signal-to-noise ratio, linear scale unless --db is given
    #[arg(long, allow_negative_numbers = true)]
    rho: f64,
    /// Interpret --rho as decibels
    #[arg(long)]
    db: bool,
}

#[derive(Serialize)]
struct EnergyBoundPayload {
    schema: &'static str,
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "K")]
    k: u64,
    rho: f64,
    rho_db: f64,
    expected_energy: f64,
    #[serde(rename = "C")]
    c: f64,
    union_bound: f64,
}

fn run_energy_bound(args: EnergyBoundArgs) -> grasstat::Result<()> {
    let rho = linear_snr(args.rho, args.db);
    let query = UnionBoundQuery::new(args.t, args.m, args.n, args.k, rho)?;
    let expected_energy = finite(
        "expected_energy",
        bounds::expected_random_energy(args.t, args.m, args.n, args.k)?,
    )?;
    let c = bounds::union_bound_constant(args.t, args.m, args.n);
    let union = finite("union_bound", bounds::union_bound(&query, expected_energy)?)?;
    emit(&EnergyBoundPayload {
        schema: "grasstat.energy-bound.v1",
        t: args.t,
        m: args.m,
        n: args.n,
        k: args.k,
        rho,
        rho_db: 10.0 * rho.log10(),
        expected_energy,
        c,
        union_bound: union,
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// pep

#[derive(Args)]
struct PepArgs {
    /// Code file holding the candidate words
    #[arg(long)]
    code: PathBuf,
    /// Index of the transmitted word
    #[arg(long)]
    i: usize,
    /// Index of the competing word
    #[arg(long)]
    j: usize,
    /// Receive antennas N
    #[arg(long = "N")]
    n: usize,
    /// Signal-to-noise ratio, linear scale unless --db is given
    #[arg(long, allow_negative_numbers = true)]
    rho: f64,
    /// Interpret --rho as decibels
    #[arg(long)]
    db: bool,
    /// Number of simulated transmissions
    #[arg(long)]
    trials: u64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Re-orthonormalize drifted code file bases instead of rejecting them
    #[arg(long)]
    repair: bool,
}

#[derive(Serialize)]
struct PepPayload {
    schema: &'static str,
    i: usize,
    j: usize,
    #[serde(rename = "N")]
    n: usize,
    rho: f64,
    rho_db: f64,
    trials: u64,
    seed: u64,
    p_hat: f64,
    stderr: f64,
    upper_confidence: f64,
    asymptotic: f64,
    ratio: f64,
}

/// Looks up a distinct pair of words by index, rejecting out-of-range or
/// equal indices before any simulation starts.
fn word_pair(code: &Code, i: usize, j: usize) -> grasstat::Result<(&GrassmannPoint, &GrassmannPoint)> {
    if i >= code.len() {
        return Err(Error::DomainError { what: "i", value: i as f64 });
    }
    if j >= code.len() || j == i {
        return Err(Error::DomainError { what: "j", value: j as f64 });
    }
    Ok((&code.points()[i], &code.points()[j]))
}

fn run_pep(args: PepArgs) -> grasstat::Result<()> {
    let rho = linear_snr(args.rho, args.db);
    let code = load_code(&args.code, args.repair)?;
    let (x1, x2) = word_pair(&code, args.i, args.j)?;
    let cfg = ChannelConfig::new(code.ambient_dim(), code.subspace_dim(), args.n, rho)?;
    let estimate = estimate_pep(x1, x2, &cfg, args.trials, args.seed)?;
    let asymptotic = finite("asymptotic", asymptotic_pep(x1, x2, args.n, rho)?)?;
    emit(&PepPayload {
        schema: "grasstat.pep.v1",
        i: args.i,
        j: args.j,
        n: args.n,
        rho,
        rho_db: 10.0 * rho.log10(),
        trials: args.trials,
        seed: args.seed,
        p_hat: estimate.p_hat,
        stderr: estimate.stderr,
        upper_confidence: estimate.upper_confidence(),
        asymptotic,
        ratio: estimate.p_hat / asymptotic,
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep

#[derive(Args)]
struct SweepArgs {
    /// Code file holding the candidate words
    #[arg(long)]
    code: PathBuf,
    /// Index of the transmitted word
    #[arg(long)]
    i: usize,
    /// Index of the competing word
    #[arg(long)]
    j: usize,
    /// Receive antennas N
    #[arg(long = "N")]
    n: usize,
    /// Lower end of the SNR grid, linear scale unless --db is given
    #[arg(long = "rho-min", allow_negative_numbers = true)]
    rho_min: f64,
    /// Upper end of the SNR grid, linear scale unless --db is given
    #[arg(long = "rho-max", allow_negative_numbers = true)]
    rho_max: f64,
    /// Number of grid rows, spaced uniformly in dB
    #[arg(long)]
    points: usize,
    /// Interpret --rho-min/--rho-max as decibels
    #[arg(long)]
    db: bool,
    /// Number of simulated transmissions per row
    #[arg(long)]
    trials: u64,
    /// RNG seed; row r uses seed + r
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Re-orthonormalize drifted code file bases instead of rejecting them
    #[arg(long)]
    repair: bool,
}

fn run_sweep(args: SweepArgs) -> grasstat::Result<()> {
    if args.points < 2 {
        return Err(Error::DomainError { what: "points", value: args.points as f64 });
    }
    let lo = linear_snr(args.rho_min, args.db);
    let hi = linear_snr(args.rho_max, args.db);
    if !(lo > 0.0) {
        return Err(Error::DomainError { what: "rho-min", value: lo });
    }
    if !(hi > lo) {
        return Err(Error::DomainError { what: "rho-max", value: hi });
    }
    let code = load_code(&args.code, args.repair)?;
    let (x1, x2) = word_pair(&code, args.i, args.j)?;
    let (db_lo, db_hi) = (10.0 * lo.log10(), 10.0 * hi.log10());
    let mut rows = Vec::with_capacity(args.points);
    for row in 0..args.points {
        let frac = row as f64 / (args.points - 1) as f64;
        let rho_db = db_lo + frac * (db_hi - db_lo);
        let rho = 10f64.powf(rho_db / 10.0);
        let cfg = ChannelConfig::new(code.ambient_dim(), code.subspace_dim(), args.n, rho)?;
        let estimate = estimate_pep(x1, x2, &cfg, args.trials, args.seed.wrapping_add(row as u64))?;
        let asymptotic = finite("asymptotic", asymptotic_pep(x1, x2, args.n, rho)?)?;
        rows.push((rho, rho_db, estimate.p_hat, estimate.stderr, asymptotic));
    }
    println!("# schema: grasstat.pep-sweep.v1");
    println!("rho,rho_db,p_hat,stderr,asymptotic,ratio");
    for (rho, rho_db, p_hat, stderr, asymptotic) in rows {
        let ratio = p_hat / asymptotic;
        println!("{rho},{rho_db},{p_hat},{stderr},{asymptotic},{ratio}");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// design

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    /// Maximize the minimum pairwise chordal product
    MaxMinProduct,
    /// Minimize the code energy at diversity order N
    MinEnergy,
}

#[derive(Args)]
struct DesignArgs {
    /// Ambient dimension T
    #[arg(long = "T")]
    t: usize,
    /// Subspace dimension M
    #[arg(long = "M")]
    m: usize,
    /// Code cardinality K
    #[arg(long = "K")]
    k: usize,
    /// Optimization objective
    #[arg(long, value_enum)]
    objective: ObjectiveArg,
    /// Diversity order (required for the min-energy objective)
    #[arg(long = "N", required_if_eq("objective", "min-energy"))]
    n: Option<u32>,
    /// Hill-climbing iterations per restart
    #[arg(long, default_value_t = 2000)]
    iters: u32,
    /// Independent restarts; the best run wins
    #[arg(long, default_value_t = 4)]
    restarts: u32,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output code file path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct DesignPayload {
    schema: &'static str,
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "K")]
    k: usize,
    objective: &'static str,
    #[serde(rename = "N")]
    n: Option<u32>,
    iters: u32,
    restarts: u32,
    seed: u64,
    value: f64,
    min_product: f64,
    out: String,
}

fn run_design(args: DesignArgs) -> grasstat::Result<()> {
    let (objective, name) = match args.objective {
        ObjectiveArg::MaxMinProduct => (Objective::MaxMinProduct, "max-min-product"),
        ObjectiveArg::MinEnergy => {
            let n = args.n.expect("clap requires --N for min-energy");
            (Objective::MinEnergy { n }, "min-energy")
        }
    };
    let spec = DesignSpec::new(
        args.t,
        args.m,
        args.k,
        objective,
        args.iters,
        args.restarts,
        args.seed,
    )?;
    let (code, value) = optimize_code(&spec);
    save_code(&code, &args.out)?;
    let (min_product, _) = min_pairwise_product(&code);
    emit(&DesignPayload {
        schema: "grasstat.design.v1",
        t: args.t,
        m: args.m,
        k: args.k,
        objective: name,
        n: args.n,
        iters: args.iters,
        restarts: args.restarts,
        seed: args.seed,
        value,
        min_product,
        out: args.out.display().to_string(),
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// energy

#[derive(Args)]
struct EnergyArgs {
    /// Code file to evaluate
    #[arg(long)]
    code: PathBuf,
    /// Diversity order for the energy exponent
    #[arg(long = "N")]
    n: u32,
    /// Re-orthonormalize drifted code file bases instead of rejecting them
    #[arg(long)]
    repair: bool,
}

#[derive(Serialize)]
struct EnergyPayload {
    schema: &'static str,
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "N")]
    n: u32,
    finite: bool,
    energy: Option<f64>,
    min_product: f64,
    argmin: [usize; 2],
}

fn run_energy(args: EnergyArgs) -> grasstat::Result<()> {
    if args.n < 1 {
        return Err(Error::DomainError { what: "N", value: args.n as f64 });
    }
    let code = load_code(&args.code, args.repair)?;
    let energy = code_energy(&code, args.n);
    let (min_product, pair) = min_pairwise_product(&code);
    emit(&EnergyPayload {
        schema: "grasstat.energy.v1",
        t: code.ambient_dim(),
        m: code.subspace_dim(),
        k: code.len(),
        n: args.n,
        finite: energy.is_finite(),
        energy: energy.is_finite().then(|| energy.as_f64()),
        min_product,
        argmin: [pair.0, pair.1],
    });
    Ok(())
}
