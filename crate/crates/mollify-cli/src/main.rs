//! `mollify`: generate regularity fixtures, estimate Hölder–Zygmund exponents
//! from mollifier scale sweeps, cross-check with the band-pass oracle, fit
//! convergence rates, and run the full validation suite.
//!
//! Exit codes: 0 success, 1 computation error, 2 usage error, 3 saturation
//! (the probe order must be raised).

mod suite;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mollify_core::report::{EstimateReport, RunConfig};
use mollify_core::{
    bump_test_function, estimate_from_sweep, estimate_rate, gen_bump, gen_constant, gen_delta,
    gen_heaviside, gen_power_cusp, gen_weierstrass, geometric_ladder, k_consistency, load_signal,
    lp_decompose, lp_estimate_alpha, scale_sweep, smoothness_test, store_signal, ApproxSequence,
    Error, GridSpec, LpFamily, MollifierKernel, SampleFormat, SmoothnessVerdict, Window,
};

const EXIT_COMPUTE: u8 = 1;
const EXIT_SATURATED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mollify",
    version,
    about = "Multiscale Hölder-Zygmund regularity estimation",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic fixture and write it as a signal file
    Generate(GenerateArgs),
    /// Estimate the regularity exponent from a mollifier scale sweep
    Estimate(EstimateArgs),
    /// Estimate the exponent from the dyadic band-pass decomposition
    Lp(LpArgs),
    /// Fit the convergence rate of the regularization pairings
    Rate(RateArgs),
    /// Per-order smoothness test
    Smooth(SmoothArgs),
    /// Run the whole validation corpus and emit a cross-validation table
    Suite(suite::SuiteArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct BoxArgs {
    /// Number of grid samples (power of two)
    #[arg(long, default_value_t = 65536)]
    n: usize,
    /// Left edge of the computational box
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    box_min: f64,
    /// Right edge of the computational box
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    box_max: f64,
}

impl BoxArgs {
    fn spec(&self) -> Result<GridSpec, Error> {
        GridSpec::new(self.n, self.box_min, self.box_max)
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Coarsest scale of the ladder
    #[arg(long, default_value_t = 4.0)]
    n_min: f64,
    /// Finest scale of the ladder
    #[arg(long, default_value_t = 512.0)]
    n_max: f64,
    /// Ladder points per octave
    #[arg(long, default_value_t = 2)]
    per_octave: usize,
    /// Analysis window "a,b"
    #[arg(long, default_value = "-1.5,1.5", value_parser = parse_window, allow_hyphen_values = true)]
    window: Window,
    /// Fraction of the ladder tail used by the fit
    #[arg(long, default_value_t = 0.5)]
    tail: f64,
    /// Kernel: "gauss" or "vanish:K"
    #[arg(long, default_value = "gauss", value_parser = parse_kernel_spec)]
    kernel: KernelSpec,
}

#[derive(Clone, Debug)]
struct KernelSpec {
    name: String,
}

impl KernelSpec {
    fn build(&self) -> Result<MollifierKernel, Error> {
        if self.name == "gauss" {
            Ok(MollifierKernel::gaussian())
        } else {
            let k: usize = self.name.strip_prefix("vanish:").unwrap().parse().unwrap();
            MollifierKernel::moment_vanishing(k)
        }
    }
}

fn parse_kernel_spec(s: &str) -> Result<KernelSpec, String> {
    if s == "gauss" {
        return Ok(KernelSpec { name: s.into() });
    }
    if let Some(rest) = s.strip_prefix("vanish:") {
        let k: usize = rest
            .parse()
            .map_err(|_| format!("bad vanishing order in kernel spec '{s}'"))?;
        if !(1..=12).contains(&k) {
            return Err(format!("vanishing order {k} out of range 1..=12"));
        }
        return Ok(KernelSpec {
            name: format!("vanish:{k}"),
        });
    }
    Err(format!("unknown kernel '{s}' (use 'gauss' or 'vanish:K')"))
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("window '{s}' must be 'a,b'"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("bad window edge: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("bad window edge: {e}"))?;
    Window::new(a, b).map_err(|e| e.to_string())
}

#[derive(Args)]
struct GenerateArgs {
    /// Fixture kind
    #[arg(value_parser = ["cusp", "weierstrass", "heaviside", "bump", "constant", "delta"])]
    kind: String,
    /// Cusp exponent in (0,2), non-integer
    #[arg(long)]
    alpha: Option<f64>,
    /// Lacunary amplitude ratio in (0,1)
    #[arg(long)]
    a: Option<f64>,
    /// Lacunary frequency ratio (> 1, with a*b > 1)
    #[arg(long)]
    b: Option<f64>,
    /// Series length (default: enough for 1e-12 truncation)
    #[arg(long)]
    terms: Option<usize>,
    /// Point-mass derivative order
    #[arg(long, default_value_t = 0)]
    order: usize,
    /// Point-mass location
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    location: f64,
    /// Constant value
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    value: f64,
    #[command(flatten)]
    grid: BoxArgs,
    /// Sample encoding: json (binary sidecar) or csv (inline)
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Output signal file
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    /// Signal file
    signal: PathBuf,
    /// Probe derivative order
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated probe orders for the consistency check
    #[arg(long, value_delimiter = ',')]
    k_list: Option<Vec<usize>>,
    #[command(flatten)]
    sweep: SweepArgs,
    /// Report file (a .csv sidecar with the fit points is written next to it)
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// What to print on stdout
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args)]
struct LpArgs {
    /// Signal file
    signal: PathBuf,
    /// Number of dyadic levels (default: all the grid resolves)
    #[arg(long)]
    levels: Option<usize>,
    /// Vanishing-moment order of the band-pass kernel
    #[arg(long, default_value_t = 8)]
    m_order: usize,
    /// Annulus parameter of the family
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// Analysis window "a,b"
    #[arg(long, default_value = "-1.5,1.5", value_parser = parse_window, allow_hyphen_values = true)]
    window: Window,
    /// Fraction of the level tail used by the fit
    #[arg(long, default_value_t = 0.5)]
    tail: f64,
    /// Report file (levels go to a .csv sidecar)
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args)]
struct RateArgs {
    /// Signal file
    signal: PathBuf,
    /// Kernel: "gauss" or "vanish:K"
    #[arg(long, default_value = "gauss", value_parser = parse_kernel_spec)]
    kernel: KernelSpec,
    /// Coarsest scale
    #[arg(long, default_value_t = 2.0)]
    n_min: f64,
    /// Finest scale
    #[arg(long, default_value_t = 64.0)]
    n_max: f64,
    #[arg(long, default_value_t = 2)]
    per_octave: usize,
    #[arg(long, default_value_t = 0.5)]
    tail: f64,
    /// Test functions "center,width;center,width;..."
    #[arg(long, default_value = "0,1;0,1.3;0,1.6", allow_hyphen_values = true)]
    rho: String,
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args)]
struct SmoothArgs {
    /// Signal file
    signal: PathBuf,
    /// Highest probed derivative order
    #[arg(long, default_value_t = 6)]
    k_max: usize,
    /// Slope cap below which every order counts as bounded
    #[arg(long, default_value_t = 0.1)]
    s_cap: f64,
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("MOLLIFY_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Lp(args) => cmd_lp(args),
        Command::Rate(args) => cmd_rate(args),
        Command::Smooth(args) => cmd_smooth(args),
        Command::Suite(args) => suite::cmd_suite(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::AllSaturated => EXIT_SATURATED,
                _ => EXIT_COMPUTE,
            };
            ExitCode::from(code)
        }
    }
}

fn sidecar_csv(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<u8, Error> {
    let spec = args.grid.spec()?;
    let rep = match args.kind.as_str() {
        "cusp" => {
            let alpha = args
                .alpha
                .ok_or_else(|| Error::Validation("cusp needs --alpha".into()))?;
            gen_power_cusp(alpha, spec)?
        }
        "weierstrass" => {
            let a = args
                .a
                .ok_or_else(|| Error::Validation("weierstrass needs --a".into()))?;
            let b = args
                .b
                .ok_or_else(|| Error::Validation("weierstrass needs --b".into()))?;
            gen_weierstrass(a, b, args.terms, spec)?
        }
        "heaviside" => gen_heaviside(spec)?,
        "bump" => gen_bump(spec)?,
        "constant" => gen_constant(args.value, spec)?,
        "delta" => gen_delta(args.order, args.location, spec)?,
        other => return Err(Error::Validation(format!("unknown fixture kind {other}"))),
    };
    let format = match args.format {
        OutputFormat::Json => SampleFormat::Bin,
        OutputFormat::Csv => SampleFormat::Csv,
    };
    store_signal(&rep, &args.out, format)?;
    println!(
        "wrote {}: label={} n={} box=[{},{}) atoms={}",
        args.out.display(),
        rep.label(),
        spec.n,
        spec.x_min,
        spec.x_max,
        rep.atoms().len()
    );
    Ok(0)
}

fn base_config(command: &str, fixture: &str, spec: GridSpec, sweep: &SweepArgs) -> RunConfig {
    RunConfig {
        command: command.into(),
        fixture: fixture.into(),
        n: spec.n,
        x_min: spec.x_min,
        x_max: spec.x_max,
        window_a: sweep.window.a,
        window_b: sweep.window.b,
        kernel: sweep.kernel.name.clone(),
        n_min: sweep.n_min,
        n_max: sweep.n_max,
        per_octave: sweep.per_octave,
        tail_fraction: sweep.tail,
        k: None,
        k_list: None,
        levels: None,
        m_order: None,
        epsilon: None,
        k_max: None,
        s_cap: None,
    }
}

fn cmd_estimate(args: EstimateArgs) -> Result<u8, Error> {
    let rep = load_signal(&args.signal)?;
    let spec = rep.spec();
    let kernel = args.sweep.kernel.build()?;
    let scales = geometric_ladder(args.sweep.n_min, args.sweep.n_max, args.sweep.per_octave)?;
    let mut config = base_config("estimate", rep.label(), spec, &args.sweep);

    match (&args.k_list, args.k) {
        (Some(k_list), _) if k_list.len() > 1 => {
            config.k_list = Some(k_list.clone());
            let report = k_consistency(
                &rep,
                &kernel,
                k_list,
                &scales,
                args.sweep.window,
                args.sweep.tail,
            )?;
            let entries: Vec<EstimateReport> = report
                .estimates
                .iter()
                .map(|e| {
                    EstimateReport::new(
                        rep.label(),
                        e,
                        scales.clone(),
                        config.clone(),
                        kernel.descriptor(),
                    )
                })
                .collect();
            let doc = serde_json::json!({
                "fixture": rep.label(),
                "estimates": entries,
                "spread": report.spread,
                "config": config,
                "kernel": kernel.descriptor(),
            });
            if let Some(out) = &args.out {
                write_json(out, &doc)?;
            }
            for e in &report.estimates {
                println!(
                    "alpha = {:.4} (k={}, slope={:.4}, r2={:.6}){}",
                    e.alpha,
                    e.k_used,
                    e.growth.slope,
                    e.growth.r_squared,
                    if e.saturated { " [saturated]" } else { "" }
                );
            }
            println!("spread = {:.4}", report.spread);
            Ok(0)
        }
        (maybe_single, k) => {
            let k = match maybe_single {
                Some(list) => list[0],
                None => k.ok_or_else(|| {
                    Error::Validation("estimate needs --k or --k-list".into())
                })?,
            };
            config.k = Some(k);
            let sweep = scale_sweep(&rep, &kernel, k, &scales, args.sweep.window)?;
            let estimate = estimate_from_sweep(&sweep, args.sweep.tail)?;
            let report = EstimateReport::new(
                rep.label(),
                &estimate,
                scales.clone(),
                config,
                kernel.descriptor(),
            );
            if let Some(out) = &args.out {
                write_json(out, &report)?;
                std::fs::write(sidecar_csv(out), mollify_core::loglog_csv(&sweep))?;
            }
            match args.format {
                OutputFormat::Json => println!(
                    "alpha = {:.4} (k={}, slope={:.4}, r2={:.6}){}",
                    estimate.alpha,
                    k,
                    estimate.growth.slope,
                    estimate.growth.r_squared,
                    if estimate.saturated { " [saturated]" } else { "" }
                ),
                OutputFormat::Csv => print!("{}", mollify_core::loglog_csv(&sweep)),
            }
            if estimate.saturated {
                eprintln!(
                    "saturated at k={k}: only alpha >= {:.2} is claimable; raise k",
                    k as f64 - mollify_core::estimator::SATURATION_THRESHOLD
                );
                return Ok(EXIT_SATURATED);
            }
            Ok(0)
        }
    }
}

fn cmd_lp(args: LpArgs) -> Result<u8, Error> {
    let rep = load_signal(&args.signal)?;
    let spec = rep.spec();
    let family = LpFamily::new(args.m_order, args.epsilon)?;
    let levels = args
        .levels
        .unwrap_or_else(|| mollify_core::corpus::lp_levels_for(spec));
    let decomp = lp_decompose(&rep, &family, levels, args.window)?;
    let estimate = lp_estimate_alpha(&decomp, args.tail)?;
    let config = RunConfig {
        command: "lp".into(),
        fixture: rep.label().into(),
        n: spec.n,
        x_min: spec.x_min,
        x_max: spec.x_max,
        window_a: args.window.a,
        window_b: args.window.b,
        kernel: format!("gauss_lp:{}", args.m_order),
        n_min: 1.0,
        n_max: (2.0f64).powi(levels as i32),
        per_octave: 1,
        tail_fraction: args.tail,
        k: None,
        k_list: None,
        levels: Some(levels),
        m_order: Some(args.m_order),
        epsilon: Some(args.epsilon),
        k_max: None,
        s_cap: None,
    };
    let doc = serde_json::json!({
        "fixture": rep.label(),
        "method": "littlewood_paley",
        "alpha": estimate.alpha,
        "slope": estimate.growth.slope,
        "stderr": estimate.growth.stderr,
        "r2": estimate.growth.r_squared,
        "saturated": estimate.saturated,
        "levels": decomp.levels,
        "family": decomp.family,
        "config": config,
    });
    if let Some(out) = &args.out {
        write_json(out, &doc)?;
        std::fs::write(sidecar_csv(out), decomp.to_csv())?;
    }
    match args.format {
        OutputFormat::Json => println!(
            "alpha = {:.4} (levels={}, stderr={:.4}, r2={:.6})",
            estimate.alpha, levels, estimate.growth.stderr, estimate.growth.r_squared
        ),
        OutputFormat::Csv => print!("{}", decomp.to_csv()),
    }
    Ok(0)
}

fn parse_rhos(
    spec: GridSpec,
    text: &str,
) -> Result<Vec<(String, mollify_core::GridSignal)>, Error> {
    let mut out = Vec::new();
    for part in text.split(';') {
        let (c, w) = part.split_once(',').ok_or_else(|| {
            Error::Validation(format!("test function '{part}' must be 'center,width'"))
        })?;
        let c: f64 = c
            .trim()
            .parse()
            .map_err(|e| Error::Validation(format!("bad test function center: {e}")))?;
        let w: f64 = w
            .trim()
            .parse()
            .map_err(|e| Error::Validation(format!("bad test function width: {e}")))?;
        out.push((
            format!("bump(center={c},width={w})"),
            bump_test_function(c, w, spec)?,
        ));
    }
    Ok(out)
}

fn cmd_rate(args: RateArgs) -> Result<u8, Error> {
    let rep = load_signal(&args.signal)?;
    let spec = rep.spec();
    let kernel = args.kernel.build()?;
    let scales = geometric_ladder(args.n_min, args.n_max, args.per_octave)?;
    let rhos = parse_rhos(spec, &args.rho)?;
    let seq = ApproxSequence::Regularization {
        target: &rep,
        kernel: &kernel,
    };
    let rate = estimate_rate(&seq, &scales, &rhos, args.tail)?;
    let config = RunConfig {
        command: "rate".into(),
        fixture: rep.label().into(),
        n: spec.n,
        x_min: spec.x_min,
        x_max: spec.x_max,
        window_a: spec.x_min,
        window_b: spec.x_max,
        kernel: args.kernel.name.clone(),
        n_min: args.n_min,
        n_max: args.n_max,
        per_octave: args.per_octave,
        tail_fraction: args.tail,
        k: None,
        k_list: None,
        levels: None,
        m_order: None,
        epsilon: None,
        k_max: None,
        s_cap: None,
    };
    let doc = serde_json::json!({
        "fixture": rep.label(),
        "b": rate.b,
        "per_test": rate.per_test,
        "config": config,
        "kernel": kernel.descriptor(),
    });
    if let Some(out) = &args.out {
        write_json(out, &doc)?;
    }
    println!(
        "b = {:.4} (over {} test functions)",
        rate.b,
        rate.per_test.len()
    );
    for t in &rate.per_test {
        println!(
            "  {}: decay {:.4} (r2={:.6}, points={})",
            t.label, t.decay, t.r_squared, t.points_used
        );
    }
    Ok(0)
}

fn cmd_smooth(args: SmoothArgs) -> Result<u8, Error> {
    let rep = load_signal(&args.signal)?;
    let spec = rep.spec();
    let kernel = args.sweep.kernel.build()?;
    let scales = geometric_ladder(args.sweep.n_min, args.sweep.n_max, args.sweep.per_octave)?;
    let mut config = base_config("smooth", rep.label(), spec, &args.sweep);
    config.k_max = Some(args.k_max);
    config.s_cap = Some(args.s_cap);
    let report = smoothness_test(
        &rep,
        &kernel,
        args.k_max,
        &scales,
        args.sweep.window,
        args.s_cap,
        args.sweep.tail,
    )?;
    let doc = serde_json::json!({
        "fixture": rep.label(),
        "result": report,
        "config": config,
        "kernel": kernel.descriptor(),
    });
    if let Some(out) = &args.out {
        write_json(out, &doc)?;
    }
    match &report.verdict {
        SmoothnessVerdict::Smooth => println!(
            "verdict = smooth (all per-order slopes <= {})",
            args.s_cap
        ),
        SmoothnessVerdict::NotSmooth { alpha } => {
            println!("verdict = not_smooth (alpha = {alpha:.4})")
        }
        SmoothnessVerdict::Inconclusive => println!("verdict = inconclusive"),
    }
    println!(
        "per-order slopes: [{}]",
        report
            .per_order_slopes
            .iter()
            .map(|s| format!("{s:.4}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(0)
}
