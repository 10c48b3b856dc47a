//! Batch front end: reductions, certificate verification, witness probes,
//! homology, enclosing-ball geometry, and the finite case analysis.
//!
//! Exit codes: 0 success/valid, 1 mathematical failure (stuck reduction,
//! invalid certificate, failed decision, violated property), 2 usage or
//! resource error.

mod io;
mod schema;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lattice_rips::ball::{enclosing_ball, jung_ratio};
use lattice_rips::cases::{conjecture_search, CaseOutcome};
use lattice_rips::crush::{
    crush_with_stats, verify_certificate, CrushOptions, CrushResult, GridSpec, WitnessSource,
};
use lattice_rips::exact::{format_rational, parse_rational, rat, rat_int, Rational};
use lattice_rips::homology::{enumerate_skeleton_with_cap, DEFAULT_SIMPLEX_CAP};
use lattice_rips::lec::{lec_center_construct, lec_verify, sample_admissible_set};
use lattice_rips::metric::Metric;
use lattice_rips::point::{lex_compare, LatticePoint, RationalPoint};
use lattice_rips::reduce::find_witness;
use lattice_rips::rng::SplitMix64;

use schema::ToolInfo;

/// Environment variable overriding the default homology simplex cap.
const SIMPLEX_CAP_ENV: &str = "LATTICE_RIPS_MAX_SIMPLICES";

#[derive(Parser)]
#[command(name = "lattice-rips", version, about = "Contractibility certificates for Rips complexes of lattice boxes")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a grid and emit a contractibility certificate.
    Crush(CrushArgs),
    /// Re-check a certificate with the independent verifier.
    Verify(VerifyArgs),
    /// Search a witness for one anchor in a point set.
    Witness(WitnessArgs),
    /// Reduced F2 Betti numbers of the Rips complex of a point set or grid.
    Homology(HomologyArgs),
    /// Enclosing-ball radius/diameter ratios, single-set or randomized.
    Jung(JungArgs),
    /// Near-center feasibility and construction in the half-space.
    Lec(LecArgs),
    /// Enumerate clipped residual windows and witness each one.
    Cases(CasesArgs),
    /// Timed reduction runs with memoization statistics.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Grid dimension.
    #[arg(long)]
    dim: usize,
    /// Per-axis inclusive range `LO..HI`; give once for all axes or repeat
    /// per axis.
    #[arg(long = "range", required = true)]
    ranges: Vec<String>,
    /// Metric: d1, d2, or dinf.
    #[arg(long, default_value = "d1")]
    metric: String,
    /// Rips scale, in true units: an integer or `p/q`.
    #[arg(long)]
    scale: String,
    /// Lattice denominator: coordinates are multiples of 1/m.
    #[arg(long, default_value_t = 1)]
    m: u64,
}

impl GridArgs {
    fn build(&self) -> Result<GridSpec> {
        if self.dim == 0 || self.dim > 6 {
            bail!("dimension must be between 1 and 6");
        }
        let ranges = parse_ranges(&self.ranges, self.dim)?;
        let metric: Metric = self.metric.parse().map_err(|e| anyhow!("{e}"))?;
        let scale = parse_positive_scale(&self.scale)?;
        GridSpec::new(ranges, metric, scale, self.m).map_err(|e| anyhow!("{e}"))
    }
}

#[derive(Args)]
struct CrushArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Witness size bound (default: the dimension).
    #[arg(long)]
    max_witness_size: Option<usize>,
    /// Disable pattern memoization.
    #[arg(long)]
    no_memoize: bool,
    /// Witness source: `search` or `snap-box`.
    #[arg(long, default_value = "search")]
    witness_source: String,
    /// Certificate (or failure report) path.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Print the JSON to stdout instead of the summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate file to check.
    certificate: PathBuf,
    /// Verification report path.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct WitnessArgs {
    /// Point-set file (one point per line; optional `# dim=.. m=..`).
    #[arg(long)]
    input: PathBuf,
    /// Anchor coordinates, comma-separated.
    #[arg(long)]
    anchor: String,
    #[arg(long, default_value = "d1")]
    metric: String,
    /// Rips scale in true units.
    #[arg(long)]
    scale: String,
    /// Witness size bound (default: the dimension).
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct HomologyArgs {
    /// Point-set file; alternative to --dim/--range.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long = "range")]
    ranges: Vec<String>,
    #[arg(long, default_value = "d1")]
    metric: String,
    #[arg(long)]
    scale: String,
    #[arg(long, default_value_t = 1)]
    m: u64,
    /// Skeleton cap dimension: Betti numbers are reported for degrees
    /// below it.
    #[arg(long, default_value_t = 4)]
    k_max: usize,
    /// Simplex-count cap (default from LATTICE_RIPS_MAX_SIMPLICES or
    /// 5000000).
    #[arg(long)]
    max_simplices: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct JungArgs {
    /// Point-set file for single-set mode.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Metric: d1 or dinf.
    #[arg(long, default_value = "d1")]
    metric: String,
    /// Randomized bound-testing mode: number of trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Randomized mode: maximum dimension.
    #[arg(long, default_value_t = 4)]
    dim_max: usize,
    /// Randomized mode: maximum points per set.
    #[arg(long, default_value_t = 10)]
    points_max: usize,
    /// Randomized mode: coordinate bound.
    #[arg(long, default_value_t = 5)]
    coord_bound: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LecArgs {
    /// Rational point-set file for single-set modes.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Construct a near-center with this shrink parameter (default
    /// n/(n+1)).
    #[arg(long)]
    kappa: Option<String>,
    /// Verify feasibility at this redundancy instead of constructing.
    #[arg(long)]
    rho: Option<String>,
    /// Randomized constructive suite: trials per run.
    #[arg(long)]
    trials: Option<usize>,
    /// Randomized mode: dimension.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CasesArgs {
    #[arg(long)]
    dim: usize,
    /// Integer scale.
    #[arg(long)]
    scale: String,
    #[arg(long, default_value = "d1")]
    metric: String,
    /// Witness size bound (default: the dimension).
    #[arg(long)]
    max_witness_size: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value = "3")]
    scale: String,
    #[arg(long, default_value = "d1")]
    metric: String,
    /// Smallest cube size `{0..N}`.
    #[arg(long, default_value_t = 4)]
    from: i64,
    /// Largest cube size.
    #[arg(long, default_value_t = 10)]
    to: i64,
    /// Timing repetitions per size (the best is reported).
    #[arg(long, default_value_t = 3)]
    repeat: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Ignore the error when a pool already exists (tests call run()
        // repeatedly in one process).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let outcome = match cli.command {
        Command::Crush(args) => cmd_crush(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Witness(args) => cmd_witness(args),
        Command::Homology(args) => cmd_homology(args),
        Command::Jung(args) => cmd_jung(args),
        Command::Lec(args) => cmd_lec(args),
        Command::Cases(args) => cmd_cases(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_ranges(specs: &[String], dim: usize) -> Result<Vec<(i64, i64)>> {
    let parse_one = |s: &str| -> Result<(i64, i64)> {
        let (lo, hi) = s
            .split_once("..")
            .with_context(|| format!("range `{s}` is not of the form LO..HI"))?;
        Ok((
            lo.trim().parse().with_context(|| format!("bad range `{s}`"))?,
            hi.trim().parse().with_context(|| format!("bad range `{s}`"))?,
        ))
    };
    let parsed: Vec<(i64, i64)> = specs.iter().map(|s| parse_one(s)).collect::<Result<_>>()?;
    if parsed.len() == 1 {
        Ok(vec![parsed[0]; dim])
    } else if parsed.len() == dim {
        Ok(parsed)
    } else {
        bail!("expected 1 or {dim} --range arguments, got {}", parsed.len());
    }
}

fn parse_positive_scale(s: &str) -> Result<Rational> {
    let scale = parse_rational(s).map_err(|e| anyhow!("{e}"))?;
    if scale <= rat_int(0) {
        bail!("scale must be positive");
    }
    Ok(scale)
}

fn simplex_cap(cli: Option<usize>) -> usize {
    cli.or_else(|| {
        std::env::var(SIMPLEX_CAP_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_SIMPLEX_CAP)
}

/// Writes a report: to `--output` when given, to stdout when `--json`.
fn emit_report<T: Serialize>(output: &Option<PathBuf>, json: bool, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    if let Some(path) = output {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    if json {
        print!("{text}");
    }
    Ok(())
}

fn cmd_crush(args: CrushArgs) -> Result<ExitCode> {
    let spec = args.grid.build()?;
    let source = match args.witness_source.as_str() {
        "search" => WitnessSource::Search,
        "snap-box" => WitnessSource::SnapBox,
        other => bail!("unknown witness source `{other}`"),
    };
    let opts = CrushOptions {
        max_witness_size: args.max_witness_size,
        memoize: !args.no_memoize,
        witness_source: source,
    };
    let started = Instant::now();
    let (result, stats) = crush_with_stats(&spec, &opts).map_err(|e| anyhow!("{e}"))?;
    let elapsed = started.elapsed();
    match result {
        CrushResult::Complete(cert) => {
            let bytes = schema::certificate_bytes(&cert)?;
            if let Some(path) = &args.output {
                fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?;
            }
            if args.json {
                print!("{}", String::from_utf8_lossy(&bytes));
            } else {
                println!(
                    "crushed {} points in {} steps ({} dominated, {} locally dominated) in {:?}",
                    spec.point_count(),
                    cert.steps.len(),
                    cert.steps
                        .iter()
                        .filter(|s| s.mode == lattice_rips::crush::StepMode::Dominated)
                        .count(),
                    cert.steps
                        .iter()
                        .filter(|s| s.mode == lattice_rips::crush::StepMode::LocallyDominated)
                        .count(),
                    elapsed,
                );
                println!(
                    "patterns {} searches {} probe hits {} reuses {}",
                    stats.distinct_patterns,
                    stats.witness_searches,
                    stats.probe_hits,
                    stats.pattern_reuses,
                );
                match &args.output {
                    Some(path) => println!("certificate written to {}", path.display()),
                    None => println!("certificate discarded (pass --output or --json to keep it)"),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        CrushResult::Stuck(report) => {
            let file = schema::failure_to_file(&spec, &report)?;
            emit_report(&args.output, args.json, &file)?;
            if !args.json {
                println!(
                    "stuck at step {} on point {:?}: no witness within the size bound",
                    report.step_index, report.stuck_point
                );
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.certificate)
        .with_context(|| format!("reading {}", args.certificate.display()))?;
    let file: schema::CertificateFile =
        serde_json::from_str(&text).context("malformed certificate (schema violation)")?;
    let cert = schema::certificate_from_file(&file)?;
    let report = verify_certificate(&cert)
        .map_err(|e| anyhow!("malformed certificate (schema violation): {e}"))?;
    let out = schema::VerificationReportFile::from(&report);
    emit_report(&args.output, args.json, &out)?;
    if !args.json {
        if report.valid {
            println!("valid: {} steps re-checked", report.steps_checked);
        } else {
            println!(
                "INVALID at step {:?}: {}",
                report.failing_step,
                report.reason.as_deref().unwrap_or("unknown"),
            );
        }
    }
    Ok(if report.valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct WitnessReport {
    tool: ToolInfo,
    metric: String,
    scale: String,
    m: u64,
    anchor: Vec<i64>,
    found: bool,
    witness: Vec<Vec<i64>>,
    mode: Option<String>,
}

fn cmd_witness(args: WitnessArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let file = io::parse_points(&text)?;
    let metric: Metric = args.metric.parse().map_err(|e| anyhow!("{e}"))?;
    let scale = parse_positive_scale(&args.scale)?;
    let effective = &scale * rat_int(file.m as i64);
    let anchor_coords: Vec<i64> = args
        .anchor
        .split(',')
        .map(|t| t.trim().parse::<i64>().context("bad anchor coordinate"))
        .collect::<Result<_>>()?;
    if anchor_coords.len() != file.dim {
        bail!("anchor has {} coordinates, points have {}", anchor_coords.len(), file.dim);
    }
    let anchor_point = LatticePoint::new(anchor_coords);
    let graph = lattice_rips::graph::NeighborhoodGraph::build(
        file.points.clone(),
        metric,
        effective,
    )
    .map_err(|e| anyhow!("{e}"))?;
    let anchor = (0..graph.len())
        .find(|&v| graph.point(v) == &anchor_point)
        .context("anchor is not one of the input points")?;
    let candidates: Vec<usize> = graph.neighbors(anchor).collect();
    let max_size = args.max_size.unwrap_or(file.dim);
    let witness = find_witness(&graph, anchor, max_size, &candidates).map_err(|e| anyhow!("{e}"))?;
    let (found, members, mode) = match &witness {
        Some(w) => {
            let mut pts: Vec<&LatticePoint> =
                w.members().iter().map(|&v| graph.point(v)).collect();
            pts.sort_by(|a, b| lex_compare(a, b).expect("uniform dims"));
            (
                true,
                pts.iter().map(|p| p.coords().to_vec()).collect(),
                Some(if w.len() == 1 { "dominated" } else { "locally-dominated" }.to_string()),
            )
        }
        None => (false, Vec::new(), None),
    };
    let report = WitnessReport {
        tool: ToolInfo::current(),
        metric: metric.as_str().into(),
        scale: format_rational(&scale),
        m: file.m,
        anchor: anchor_point.coords().to_vec(),
        found,
        witness: members,
        mode,
    };
    emit_report(&args.output, args.json, &report)?;
    if !args.json {
        match witness {
            Some(w) => println!("witness of size {} found", w.len()),
            None => println!("no witness within size bound {max_size}"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct HomologyReport {
    tool: ToolInfo,
    metric: String,
    scale: String,
    m: u64,
    points: usize,
    k_max: usize,
    simplex_counts: Vec<usize>,
    /// Reported degrees 0..k_max-1, all exact.
    reduced_betti: Vec<u64>,
    /// Degrees above the top reported one are not computed.
    top_degree: Option<usize>,
    euler_characteristic: i64,
}

fn cmd_homology(args: HomologyArgs) -> Result<ExitCode> {
    let metric: Metric = args.metric.parse().map_err(|e| anyhow!("{e}"))?;
    let scale = parse_positive_scale(&args.scale)?;
    let (points, m) = match (&args.input, args.dim) {
        (Some(path), _) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file = io::parse_points(&text)?;
            (file.points, file.m)
        }
        (None, Some(dim)) => {
            let spec = GridArgs {
                dim,
                ranges: args.ranges.clone(),
                metric: args.metric.clone(),
                scale: args.scale.clone(),
                m: args.m,
            }
            .build()?;
            (spec.points_lex(), spec.m())
        }
        (None, None) => bail!("either --input or --dim/--range is required"),
    };
    let effective = &scale * rat_int(m as i64);
    let graph = lattice_rips::graph::NeighborhoodGraph::build(points, metric, effective)
        .map_err(|e| anyhow!("{e}"))?;
    let cap = simplex_cap(args.max_simplices);
    let skeleton = enumerate_skeleton_with_cap(&graph, args.k_max, cap)
        .map_err(|e| anyhow!("resource limit: {e}"))?;
    let betti = lattice_rips::homology::betti_from_skeleton(&skeleton).map_err(|e| anyhow!("{e}"))?;
    let report = HomologyReport {
        tool: ToolInfo::current(),
        metric: metric.as_str().into(),
        scale: format_rational(&scale),
        m,
        points: graph.len(),
        k_max: args.k_max,
        simplex_counts: (0..=args.k_max).map(|d| skeleton.count(d)).collect(),
        reduced_betti: betti.reduced().to_vec(),
        top_degree: betti.top_degree(),
        euler_characteristic: skeleton.euler_characteristic(),
    };
    emit_report(&args.output, args.json, &report)?;
    if !args.json {
        println!(
            "reduced F2 betti (degrees 0..{}): {:?}",
            args.k_max.saturating_sub(1),
            betti.reduced()
        );
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct JungSingleReport {
    tool: ToolInfo,
    metric: String,
    points: usize,
    radius: String,
    center: Vec<String>,
    diameter: String,
    ratio: String,
    bound: String,
    within_bound: bool,
}

#[derive(Serialize)]
struct JungRandomReport {
    tool: ToolInfo,
    metric: String,
    trials: usize,
    dim_max: usize,
    points_max: usize,
    coord_bound: i64,
    seed: u64,
    violations: usize,
    max_ratio: String,
}

fn cmd_jung(args: JungArgs) -> Result<ExitCode> {
    let metric: Metric = args.metric.parse().map_err(|e| anyhow!("{e}"))?;
    if let Some(trials) = args.trials {
        let mut rng = SplitMix64::new(args.seed);
        let mut violations = 0usize;
        let mut max_ratio = rat_int(0);
        let mut done = 0usize;
        while done < trials {
            let n = 1 + rng.below(args.dim_max as u64) as usize;
            let k = 2 + rng.below(args.points_max as u64 - 1) as usize;
            let pts: Vec<RationalPoint> = (0..k)
                .map(|_| {
                    RationalPoint::from_integers(
                        &(0..n)
                            .map(|_| rng.int_in(-args.coord_bound, args.coord_bound))
                            .collect::<Vec<_>>(),
                    )
                })
                .collect();
            let ratio = match jung_ratio(&pts, metric) {
                Ok(r) => r,
                Err(lattice_rips::ball::BallError::ZeroDiameter) => continue,
                Err(e) => bail!("{e}"),
            };
            done += 1;
            let bound = rat(n as i64, n as i64 + 1);
            if ratio > bound {
                violations += 1;
            }
            if ratio > max_ratio {
                max_ratio = ratio;
            }
            // The center-in-box invariant is asserted inside enclosing_ball.
        }
        let report = JungRandomReport {
            tool: ToolInfo::current(),
            metric: metric.as_str().into(),
            trials,
            dim_max: args.dim_max,
            points_max: args.points_max,
            coord_bound: args.coord_bound,
            seed: args.seed,
            violations,
            max_ratio: format_rational(&max_ratio),
        };
        emit_report(&args.output, args.json, &report)?;
        if !args.json {
            println!(
                "{} trials, {} bound violations, max ratio {}",
                trials, violations, report.max_ratio
            );
        }
        return Ok(if violations == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        });
    }

    let path = args.input.as_ref().context("--input or --trials is required")?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let pts = io::parse_rational_points(&text)?;
    let n = pts[0].dim();
    let ball = enclosing_ball(&pts, metric).map_err(|e| anyhow!("{e}"))?;
    let ratio = jung_ratio(&pts, metric).map_err(|e| anyhow!("{e}"))?;
    let bound = rat(n as i64, n as i64 + 1);
    let diam = &ball.radius / &ratio;
    let report = JungSingleReport {
        tool: ToolInfo::current(),
        metric: metric.as_str().into(),
        points: pts.len(),
        radius: format_rational(&ball.radius),
        center: ball.center.coords().iter().map(format_rational).collect(),
        diameter: format_rational(&diam),
        ratio: format_rational(&ratio),
        bound: format_rational(&bound),
        within_bound: ratio <= bound,
    };
    let within = report.within_bound;
    emit_report(&args.output, args.json, &report)?;
    if !args.json {
        println!(
            "radius {} diameter {} ratio {} (bound {})",
            report.radius, report.diameter, report.ratio, report.bound
        );
    }
    Ok(if within { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct LecVerifyReport {
    tool: ToolInfo,
    dim: usize,
    rho: String,
    holds: bool,
}

#[derive(Serialize)]
struct LecConstructReport {
    tool: ToolInfo,
    dim: usize,
    kappa: String,
    rho: String,
    lambda: String,
    center: Vec<String>,
    inner_center: Vec<String>,
    inner_radius: String,
    budget: String,
    rows: Vec<LecRowReport>,
}

#[derive(Serialize)]
struct LecRowReport {
    point: Vec<String>,
    distance: String,
    convex_bound: String,
}

#[derive(Serialize)]
struct LecTrialsReport {
    tool: ToolInfo,
    dim: usize,
    trials: usize,
    seed: u64,
    kappa: String,
    rho: String,
    failures: usize,
}

fn cmd_lec(args: LecArgs) -> Result<ExitCode> {
    if let Some(trials) = args.trials {
        let n = args.dim.context("--dim is required with --trials")?;
        if n < 2 {
            bail!("--dim must be at least 2");
        }
        let kappa = match &args.kappa {
            Some(s) => parse_rational(s).map_err(|e| anyhow!("{e}"))?,
            None => rat(n as i64, n as i64 + 1),
        };
        let mut rng = SplitMix64::new(args.seed);
        let mut failures = 0usize;
        let mut rho = rat_int(0);
        for _ in 0..trials {
            let tau = sample_admissible_set(&mut rng, n, 8);
            match lec_center_construct(&tau, &kappa) {
                Ok(c) => {
                    rho = c.rho.clone();
                    if !lec_verify(n, &c.rho, &tau).map_err(|e| anyhow!("{e}"))? {
                        failures += 1;
                    }
                }
                Err(e) => bail!("construction failed: {e}"),
            }
        }
        let report = LecTrialsReport {
            tool: ToolInfo::current(),
            dim: n,
            trials,
            seed: args.seed,
            kappa: format_rational(&kappa),
            rho: format_rational(&rho),
            failures,
        };
        emit_report(&args.output, args.json, &report)?;
        if !args.json {
            println!("{} constructions, {} failures", trials, failures);
        }
        return Ok(if failures == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        });
    }

    let path = args.input.as_ref().context("--input or --trials is required")?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let tau = io::parse_rational_points(&text)?;
    let n = tau[0].dim();

    if let Some(rho_text) = &args.rho {
        let rho = parse_rational(rho_text).map_err(|e| anyhow!("{e}"))?;
        let holds = lec_verify(n, &rho, &tau).map_err(|e| anyhow!("{e}"))?;
        let report = LecVerifyReport {
            tool: ToolInfo::current(),
            dim: n,
            rho: format_rational(&rho),
            holds,
        };
        emit_report(&args.output, args.json, &report)?;
        if !args.json {
            println!("holds: {holds}");
        }
        return Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }

    let kappa = match &args.kappa {
        Some(s) => parse_rational(s).map_err(|e| anyhow!("{e}"))?,
        None => rat(n as i64, n as i64 + 1),
    };
    let construction = lec_center_construct(&tau, &kappa).map_err(|e| anyhow!("{e}"))?;
    let budget = construction
        .trace
        .first()
        .map(|r| format_rational(&r.budget))
        .unwrap_or_else(|| "0".into());
    let report = LecConstructReport {
        tool: ToolInfo::current(),
        dim: n,
        kappa: format_rational(&construction.kappa),
        rho: format_rational(&construction.rho),
        lambda: format_rational(&construction.lambda),
        center: construction.center.coords().iter().map(format_rational).collect(),
        inner_center: construction
            .inner_center
            .coords()
            .iter()
            .map(format_rational)
            .collect(),
        inner_radius: format_rational(&construction.inner_radius),
        budget,
        rows: construction
            .trace
            .iter()
            .map(|r| LecRowReport {
                point: r.point.coords().iter().map(format_rational).collect(),
                distance: format_rational(&r.distance),
                convex_bound: format_rational(&r.convex_bound),
            })
            .collect(),
    };
    emit_report(&args.output, args.json, &report)?;
    if !args.json {
        println!(
            "center ({}) with rho {}",
            report.center.join(", "),
            report.rho
        );
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CasesReportFile {
    tool: ToolInfo,
    dim: usize,
    scale: String,
    metric: String,
    max_witness_size: usize,
    total: usize,
    witnessed: usize,
    terminal: usize,
    stuck: usize,
    rows: Vec<CaseRowFile>,
}

#[derive(Serialize)]
struct CaseRowFile {
    below: Vec<i64>,
    above: Vec<i64>,
    status: String,
    witness: Vec<Vec<i64>>,
}

fn cmd_cases(args: CasesArgs) -> Result<ExitCode> {
    if args.dim == 0 || args.dim > 6 {
        bail!("dimension must be between 1 and 6");
    }
    let metric: Metric = args.metric.parse().map_err(|e| anyhow!("{e}"))?;
    let scale = parse_positive_scale(&args.scale)?;
    let max_size = args.max_witness_size.unwrap_or(args.dim);
    let report = conjecture_search(args.dim, &scale, max_size, metric)
        .map_err(|e| anyhow!("{e}"))?;
    let rows: Vec<CaseRowFile> = report
        .rows
        .iter()
        .map(|row| {
            let (status, witness) = match &row.outcome {
                CaseOutcome::Witnessed { witness, .. } => (
                    "witnessed",
                    witness.iter().map(|p| p.coords().to_vec()).collect(),
                ),
                CaseOutcome::Terminal => ("terminal", Vec::new()),
                CaseOutcome::Stuck => ("stuck", Vec::new()),
            };
            CaseRowFile {
                below: row.config.below().to_vec(),
                above: row.config.above().to_vec(),
                status: status.to_string(),
                witness,
            }
        })
        .collect();
    let file = CasesReportFile {
        tool: ToolInfo::current(),
        dim: args.dim,
        scale: format_rational(&scale),
        metric: metric.as_str().into(),
        max_witness_size: max_size,
        total: report.rows.len(),
        witnessed: report.witnessed,
        terminal: report.terminal,
        stuck: report.stuck,
        rows,
    };
    emit_report(&args.output, args.json, &file)?;
    if !args.json {
        println!(
            "{} configurations: {} witnessed, {} terminal, {} stuck",
            file.total, file.witnessed, file.terminal, file.stuck
        );
    }
    Ok(if report.stuck == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct BenchReportFile {
    tool: ToolInfo,
    dim: usize,
    scale: String,
    metric: String,
    repeat: usize,
    runs: Vec<BenchRunFile>,
    /// (t_last / points_last) / (t_first / points_first), exact over the
    /// measured nanoseconds.
    linearity_ratio: String,
}

#[derive(Serialize)]
struct BenchRunFile {
    size: i64,
    points: u64,
    steps: usize,
    elapsed_ns: u64,
    distinct_patterns: usize,
    witness_searches: usize,
    probe_hits: usize,
    pattern_reuses: usize,
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    if args.from > args.to || args.from < 1 {
        bail!("--from must be between 1 and --to");
    }
    let metric: Metric = args.metric.parse().map_err(|e| anyhow!("{e}"))?;
    let scale = parse_positive_scale(&args.scale)?;
    let mut runs = Vec::new();
    for size in args.from..=args.to {
        let spec = GridSpec::cube(args.dim, size, metric, scale.clone())
            .map_err(|e| anyhow!("{e}"))?;
        let mut best: Option<(u64, lattice_rips::crush::CrushStats, usize)> = None;
        for _ in 0..args.repeat.max(1) {
            let started = Instant::now();
            let (result, stats) = crush_with_stats(&spec, &CrushOptions::default())
                .map_err(|e| anyhow!("{e}"))?;
            let ns = started.elapsed().as_nanos() as u64;
            let steps = match result {
                CrushResult::Complete(cert) => cert.steps.len(),
                CrushResult::Stuck(report) => {
                    println!("stuck at {:?} for size {size}", report.stuck_point);
                    return Ok(ExitCode::from(1));
                }
            };
            if best.as_ref().is_none_or(|(b, _, _)| ns < *b) {
                best = Some((ns, stats, steps));
            }
        }
        let (ns, stats, steps) = best.expect("at least one repetition");
        runs.push(BenchRunFile {
            size,
            points: spec.point_count() as u64,
            steps,
            elapsed_ns: ns,
            distinct_patterns: stats.distinct_patterns,
            witness_searches: stats.witness_searches,
            probe_hits: stats.probe_hits,
            pattern_reuses: stats.pattern_reuses,
        });
    }
    let linearity = {
        let first = runs.first().expect("non-empty range");
        let last = runs.last().expect("non-empty range");
        let num = rat_int(last.elapsed_ns as i64) * rat_int(first.points as i64);
        let den = rat_int(first.elapsed_ns as i64) * rat_int(last.points as i64);
        num / den
    };
    let report = BenchReportFile {
        tool: ToolInfo::current(),
        dim: args.dim,
        scale: format_rational(&scale),
        metric: metric.as_str().into(),
        repeat: args.repeat,
        runs,
        linearity_ratio: format_rational(&linearity),
    };
    emit_report(&args.output, args.json, &report)?;
    if !args.json {
        for run in &report.runs {
            println!(
                "size {:>3} points {:>7} steps {:>7} time {:>12} ns patterns {:>5} searches {:>5} reuses {:>7}",
                run.size, run.points, run.steps, run.elapsed_ns, run.distinct_patterns,
                run.witness_searches, run.pattern_reuses
            );
        }
        println!("linearity ratio {}", report.linearity_ratio);
    }
    Ok(ExitCode::SUCCESS)
}
