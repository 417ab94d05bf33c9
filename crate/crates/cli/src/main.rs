mod input;

use std::io::{self, IsTerminal, Write};
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use skewkurt::boundary::{boundary_curve, unimodal_floor, LVariant};
use skewkurt::families::biu::biu_varsigma2;
use skewkurt::{
    sample_moment_vector, simulate_power_with, t_statistic, unimodality_test_with, verify_all,
    DistributionSpec, M2Divisor, Sample, Sign, VarianceMode,
};

const TOOL: &str = "skewkurt";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "skewkurt",
    version,
    about = "Kurtosis minus squared skewness: statistic, unimodality test, families, power, boundary"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; JSON unless given.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Master seed for sampling and simulation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample moments and T_n of the input data.
    Moments(InputArgs),
    /// Asymptotic test of unimodality on the input data.
    Test(TestArgs),
    /// Exact statistics of a family member, or a seeded sample from it.
    Dist(DistArgs),
    /// Monte Carlo power of the test, with optional comma-separated sweeps.
    Power(PowerArgs),
    /// The unimodal skewness-kurtosis boundary b(τ) on a grid.
    Boundary(BoundaryArgs),
    /// Cross-check every closed form against the moment oracle.
    Verify,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Data file, or `-` for standard input.
    #[arg(long, default_value = "-")]
    input: String,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum VarianceArg {
    Null,
    Plugin,
}

#[derive(Args, Debug)]
struct TestArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    #[arg(long, value_enum, default_value = "null")]
    variance: VarianceArg,
    /// Divisor of m2 inside T_n: `n` (as defined) or `n-1` (sample variance).
    #[arg(long, default_value = "n")]
    m2_divisor: M2Divisor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Family {
    Biu,
    Mn,
    Mixexp,
    Threepoint,
    Uniformatom,
    Wmix,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(value_enum)]
    family: Option<Family>,
    #[arg(long = "family", value_enum)]
    family_flag: Option<Family>,
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    d: Vec<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    z: Option<f64>,
    #[arg(long, value_enum, default_value = "plus")]
    sign: SignArg,
}

#[derive(Args, Debug)]
struct DistArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Print τ, κ, Δ (and ς² where defined).
    #[arg(long, conflicts_with = "sample")]
    stats: bool,
    /// Print N seeded draws, one per line.
    #[arg(long, value_name = "N")]
    sample: Option<usize>,
}

#[derive(Args, Debug)]
struct PowerArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = skewkurt::power::DEFAULT_REPS)]
    reps: usize,
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    /// Divisor of m2 inside T_n: `n` (as defined) or `n-1` (sample variance).
    #[arg(long, default_value = "n")]
    m2_divisor: M2Divisor,
}

#[derive(Args, Debug)]
struct BoundaryArgs {
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    tau_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    tau_max: f64,
    #[arg(long, default_value_t = 121)]
    steps: usize,
    #[arg(long, default_value = "rederived", value_parser = parse_variant)]
    which: LVariant,
}

fn parse_variant(s: &str) -> Result<LVariant, String> {
    s.parse()
}

/// Exit status classes: 2 usage or parse error, 3 degenerate data, 1 anything else.
#[derive(Debug)]
enum Failure {
    Usage(anyhow::Error),
    Degenerate(anyhow::Error),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Degenerate(_) => 3,
            Failure::Other(_) => 1,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Usage(e) | Failure::Degenerate(e) | Failure::Other(e) => e,
        }
    }
}

impl From<skewkurt::Error> for Failure {
    fn from(e: skewkurt::Error) -> Self {
        use skewkurt::Error as E;
        match e {
            E::DegenerateSample | E::PlugInVarianceUnavailable(_) | E::NonPositiveVariance(_) => {
                Failure::Degenerate(e.into())
            }
            E::InsufficientSample { .. }
            | E::NonFinite(_)
            | E::ParameterOutOfRange { .. }
            | E::MomentOrder(_)
            | E::BelowPearsonBoundary { .. } => Failure::Usage(e.into()),
            _ => Failure::Other(e.into()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Other(e.into())
    }
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(anyhow!("{msg}"))
}

type CmdResult = Result<(), Failure>;

/// A tabular or structured report with provenance.
struct Report {
    command: &'static str,
    config: Value,
    result: Value,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Report {
    fn emit(&self, format: Format) -> CmdResult {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match format {
            Format::Json => {
                let doc = json!({
                    "tool": TOOL,
                    "version": VERSION,
                    "command": self.command,
                    "config": self.config,
                    "result": self.result,
                });
                serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Failure::Other(e.into()))?;
                writeln!(out)?;
            }
            Format::Csv => {
                writeln!(out, "# {TOOL} {VERSION} {}", self.command)?;
                writeln!(out, "# config {}", self.config)?;
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn read_sample(path: &str) -> Result<Sample, Failure> {
    let text = input::read_source(path).map_err(Failure::Usage)?;
    let values = input::parse_numbers(&text).map_err(Failure::Usage)?;
    Ok(Sample::new(values)?)
}

fn cmd_moments(args: &InputArgs, format: Format) -> CmdResult {
    let sample = read_sample(&args.input)?;
    let delta = t_statistic(&sample)?;
    let mv = sample_moment_vector(&sample)?;
    let result = json!({
        "n": sample.len(),
        "mean": mv.mu,
        "sd": mv.sigma2.sqrt(),
        "skewness": mv.skewness(),
        "kurtosis": mv.kurtosis(),
        "excess_kurtosis": mv.kurtosis() - 3.0,
        "delta": delta,
    });
    let columns = vec![
        "n",
        "mean",
        "sd",
        "skewness",
        "kurtosis",
        "excess_kurtosis",
        "delta",
    ];
    let rows = vec![columns.iter().map(|c| result[c].to_string()).collect()];
    Report {
        command: "moments",
        config: json!({ "input": args.input }),
        result,
        columns,
        rows,
    }
    .emit(format)
}

fn cmd_test(args: &TestArgs, format: Format) -> CmdResult {
    if !(args.level > 0.0 && args.level < 1.0) {
        return Err(usage(format!("--level {} must lie in (0, 1)", args.level)));
    }
    let sample = read_sample(&args.input.input)?;
    let mode = match args.variance {
        VarianceArg::Null => VarianceMode::NullBiu,
        VarianceArg::Plugin => VarianceMode::PlugIn,
    };
    let res = unimodality_test_with(&sample, args.level, mode, args.m2_divisor)?;
    let result = serde_json::to_value(&res).map_err(|e| Failure::Other(e.into()))?;
    let columns = vec![
        "t_n",
        "delta_ref",
        "varsigma",
        "variance_mode",
        "z",
        "p_value",
        "reject",
        "level",
        "n",
    ];
    let rows = vec![columns
        .iter()
        .map(|c| match &result[c] {
            Value::String(s) => s.clone(),
            v => v.to_string(),
        })
        .collect()];
    Report {
        command: "test",
        config: json!({
            "input": args.input.input,
            "level": args.level,
            "variance": args.variance,
            "m2_divisor": args.m2_divisor,
        }),
        result,
        columns,
        rows,
    }
    .emit(format)
}

impl FamilyArgs {
    fn family(&self) -> Result<Family, Failure> {
        match (self.family, self.family_flag) {
            (Some(a), Some(b)) if a != b => Err(usage("conflicting family names")),
            (Some(a), _) | (None, Some(a)) => Ok(a),
            (None, None) => Err(usage(
                "a family is required (biu, mn, mixexp, threepoint, uniformatom, wmix)",
            )),
        }
    }

    fn single(values: &[f64], name: &str) -> Result<Option<f64>, Failure> {
        match values {
            [] => Ok(None),
            [v] => Ok(Some(*v)),
            _ => Err(usage(format!("--{name} takes a single value here"))),
        }
    }

    fn sign(&self) -> Sign {
        match self.sign {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }

    fn config(&self) -> Result<Value, Failure> {
        Ok(json!({
            "family": self.family()?,
            "p": self.p,
            "d": self.d,
            "alpha": self.alpha,
            "z": self.z,
            "sign": self.sign,
        }))
    }
}

fn need(v: Option<f64>, name: &str) -> Result<f64, Failure> {
    v.ok_or_else(|| usage(format!("--{name} is required for this family")))
}

fn build_spec(
    family: Family,
    p: Option<f64>,
    d: Option<f64>,
    args: &FamilyArgs,
) -> Result<DistributionSpec, Failure> {
    let spec = match family {
        Family::Biu => DistributionSpec::Biu { p: need(p, "p")? },
        Family::Mn => DistributionSpec::MixedNormal {
            p: need(p, "p")?,
            d: need(d, "d")?,
        },
        Family::Mixexp => DistributionSpec::MixedExponential {
            p: need(p, "p")?,
            d: need(d, "d")?,
        },
        Family::Threepoint => DistributionSpec::ThreePoint {
            alpha: need(args.alpha, "alpha")?,
            z: need(args.z, "z")?,
            sign: args.sign(),
        },
        Family::Uniformatom => DistributionSpec::UniformAtom { p: need(p, "p")? },
        Family::Wmix => DistributionSpec::TwoPointUniformMix { p: need(p, "p")? },
    };
    spec.validate()?;
    Ok(spec)
}

fn cmd_dist(args: &DistArgs, format: Format, seed: u64) -> CmdResult {
    let fam = &args.family;
    let spec = build_spec(
        fam.family()?,
        FamilyArgs::single(&fam.p, "p")?,
        FamilyArgs::single(&fam.d, "d")?,
        fam,
    )?;
    if let Some(n) = args.sample {
        let sample = spec.sample(n, seed)?;
        let stdout = io::stdout();
        let mut out = io::BufWriter::new(stdout.lock());
        for v in sample.values() {
            writeln!(out, "{v}")?;
        }
        out.flush()?;
        return Ok(());
    }
    if !args.stats {
        return Err(usage("dist needs --stats or --sample N"));
    }
    let stats = spec.stats()?;
    let varsigma2 = match spec {
        DistributionSpec::Biu { p } => Some(biu_varsigma2(p)?),
        _ => spec.varsigma2().ok(),
    };
    let result = json!({
        "distribution": spec.to_string(),
        "spec": spec,
        "tau": stats.tau,
        "kappa": stats.kappa,
        "delta": stats.delta,
        "varsigma2": varsigma2,
    });
    let columns = vec!["distribution", "tau", "kappa", "delta", "varsigma2"];
    let rows = vec![vec![
        spec.to_string(),
        stats.tau.to_string(),
        stats.kappa.to_string(),
        stats.delta.to_string(),
        varsigma2.map(|v| v.to_string()).unwrap_or_default(),
    ]];
    let mut config = fam.config()?;
    config["seed"] = json!(seed);
    Report {
        command: "dist",
        config,
        result,
        columns,
        rows,
    }
    .emit(format)
}

fn cmd_power(args: &PowerArgs, format: Format, seed: u64) -> CmdResult {
    let fam = &args.family;
    let family = fam.family()?;
    if args.reps < skewkurt::power::MIN_REPS {
        return Err(usage(format!(
            "--reps {} is below the floor of {}",
            args.reps,
            skewkurt::power::MIN_REPS
        )));
    }
    let opt = |v: &[f64]| -> Vec<Option<f64>> {
        if v.is_empty() {
            vec![None]
        } else {
            v.iter().copied().map(Some).collect()
        }
    };
    let mut rows_json = Vec::new();
    let mut rows = Vec::new();
    for &n in &args.n {
        for p in opt(&fam.p) {
            for d in opt(&fam.d) {
                let spec = build_spec(family, p, d, fam)?;
                let est = simulate_power_with(&spec, n, args.reps, args.level, seed, args.m2_divisor)?;
                let param = match (fam.p.len() > 1, fam.d.len() > 1) {
                    (_, true) => d,
                    _ => p.or(d).or(fam.alpha),
                };
                rows.push(vec![
                    spec.to_string(),
                    param.map(|v| v.to_string()).unwrap_or_default(),
                    n.to_string(),
                    est.ci_lower.to_string(),
                    est.beta_hat.to_string(),
                    est.ci_upper.to_string(),
                    est.rejections.to_string(),
                    est.degenerate.to_string(),
                ]);
                rows_json.push(json!({
                    "distribution": spec.to_string(),
                    "param": param,
                    "n": n,
                    "lower": est.ci_lower,
                    "beta_hat": est.beta_hat,
                    "upper": est.ci_upper,
                    "rejections": est.rejections,
                    "degenerate": est.degenerate,
                    "spec": spec,
                }));
            }
        }
    }
    let mut config = fam.config()?;
    config["n"] = json!(args.n);
    config["reps"] = json!(args.reps);
    config["level"] = json!(args.level);
    config["seed"] = json!(seed);
    config["variance"] = json!("null");
    config["m2_divisor"] = json!(args.m2_divisor);
    Report {
        command: "power",
        config,
        result: Value::Array(rows_json),
        columns: vec![
            "distribution",
            "param",
            "n",
            "lower",
            "beta_hat",
            "upper",
            "rejections",
            "degenerate",
        ],
        rows,
    }
    .emit(format)
}

fn cmd_boundary(args: &BoundaryArgs, format: Format) -> CmdResult {
    let curve = boundary_curve(args.tau_min, args.tau_max, args.steps, args.which)?;
    let mut rows = Vec::new();
    let mut rows_json = Vec::new();
    for i in 0..curve.len() {
        let tau = curve.taus[i];
        let f = unimodal_floor(tau);
        let b = curve.b[i];
        rows.push(vec![
            tau.to_string(),
            f.to_string(),
            b.to_string(),
            curve.alpha_star[i].to_string(),
            (b - f).to_string(),
        ]);
        rows_json.push(json!({
            "tau": tau,
            "f_tau": f,
            "b_tau": b,
            "alpha_star": curve.alpha_star[i],
            "b_minus_f": b - f,
        }));
    }
    Report {
        command: "boundary",
        config: json!({
            "tau_min": args.tau_min,
            "tau_max": args.tau_max,
            "steps": args.steps,
            "which": args.which,
        }),
        result: Value::Array(rows_json),
        columns: vec!["tau", "f_tau", "b_tau", "alpha_star", "b_minus_f"],
        rows,
    }
    .emit(format)
}

fn cmd_verify(format: Option<Format>) -> CmdResult {
    let report = verify_all()?;
    let passed = report.all_passed();
    match format {
        Some(f) => {
            let rows = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.check.clone(),
                        r.params.clone(),
                        r.quantity.clone(),
                        r.closed.to_string(),
                        r.oracle.to_string(),
                        r.rel_err.to_string(),
                        r.pass.to_string(),
                    ]
                })
                .collect();
            Report {
                command: "verify",
                config: json!({ "tolerance": report.tolerance }),
                result: serde_json::to_value(&report).map_err(|e| Failure::Other(e.into()))?,
                columns: vec![
                    "check", "params", "quantity", "closed", "oracle", "rel_err", "pass",
                ],
                rows,
            }
            .emit(f)?;
        }
        None => print_verify_table(&report)?,
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Other(anyhow!(
            "{} of {} checks failed",
            report.failures().count(),
            report.rows.len()
        )))
    }
}

fn print_verify_table(report: &skewkurt::VerifyReport) -> io::Result<()> {
    let color = std::env::var_os("NO_COLOR").is_none() && io::stdout().is_terminal();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    writeln!(
        out,
        "{:<16} {:<36} {:<22} {:>22} {:>22} {:>10}  status",
        "check", "params", "quantity", "closed", "oracle", "rel_err"
    )?;
    for r in &report.rows {
        let status = match (r.pass, color) {
            (true, true) => "\x1b[32mPASS\x1b[0m",
            (false, true) => "\x1b[31mFAIL\x1b[0m",
            (true, false) => "PASS",
            (false, false) => "FAIL",
        };
        writeln!(
            out,
            "{:<16} {:<36} {:<22} {:>22.15e} {:>22.15e} {:>10.2e}  {status}",
            r.check, r.params, r.quantity, r.closed, r.oracle, r.rel_err
        )?;
    }
    let failed = report.failures().count();
    writeln!(
        out,
        "{} checks, {} passed, {} failed (tolerance {:e})",
        report.rows.len(),
        report.rows.len() - failed,
        failed,
        report.tolerance
    )?;
    out.flush()
}

fn run(cli: &Cli) -> CmdResult {
    let format = cli.format.unwrap_or(Format::Json);
    match &cli.command {
        Command::Moments(a) => cmd_moments(a, format),
        Command::Test(a) => cmd_test(a, format),
        Command::Dist(a) => cmd_dist(a, format, cli.seed),
        Command::Power(a) => cmd_power(a, format, cli.seed),
        Command::Boundary(a) => cmd_boundary(a, format),
        Command::Verify => cmd_verify(cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(e) = f.error().downcast_ref::<io::Error>() {
                if e.kind() == io::ErrorKind::BrokenPipe {
                    return ExitCode::SUCCESS;
                }
            }
            eprintln!("{TOOL}: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}
