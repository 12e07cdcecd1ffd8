use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use idealmoments::characters::{parse_ratio, DeltaMode};
use idealmoments::config::{parse_bound, parse_l_list, ConfigError, RunConfig};
use idealmoments::fit::{select_degree, FitReport, SelectionRule};
use idealmoments::moments::{geometric_checkpoints, partial_sums, sieve_a_values, MomentSeries, DEFAULT_SPAN};
use idealmoments::report::{analyze_group, expected_densities, splitting_summary, GroupReport, GroupRequest, SplittingSummary};
use idealmoments::splitting::PrimeSplittingCache;
use idealmoments::verify::{run_suite, Suite, VerifyOptions};

#[derive(Parser)]
#[command(name = "idealmoments", version, about = "Moments of ideal counts in number fields")]
struct Cli {
    /// INI file with [field], [group], [theta] and [run] sections
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Characters, assumptions, α/β, δ and the Euler table for a preset
    Group(GroupArgs),
    /// Build the prime cache and compare splitting frequencies with class densities
    Splitting(SplittingArgs),
    /// Sieve a(m) and write checkpointed moment sums as CSV
    Moments(MomentsArgs),
    /// Fit S(X)/X as a polynomial in log X and select its degree
    Fit(FitArgs),
    /// Run a verification suite
    Verify(VerifyArgs),
    /// Group analysis, splitting summary and fits in one JSON document
    Report(ReportArgs),
}

#[derive(Args, Default)]
struct GroupOpts {
    /// dihedral:K, symmetric:K, a4, galois:cyclic:K or galois:table:PATH
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    nprime: Option<String>,
}

#[derive(Args, Default)]
struct ThetaOpts {
    #[arg(long)]
    theta1: Option<String>,
    #[arg(long)]
    theta2: Option<String>,
    #[arg(long)]
    theta3: Option<String>,
    #[arg(long)]
    theta4: Option<String>,
    /// direct or dedekind
    #[arg(long)]
    mode: Option<String>,
    /// Do not declare L(s, χ₁⊗χ₂) entire
    #[arg(long)]
    no_declare_ii: bool,
}

#[derive(Args)]
struct GroupArgs {
    preset: Option<String>,
    #[arg(long)]
    nprime: Option<String>,
    /// Exponents, e.g. 2,3 or 1-6
    #[arg(long)]
    l: Option<String>,
    #[command(flatten)]
    theta: ThetaOpts,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Default)]
struct FieldOpts {
    /// Monic polynomial, "x^3-2" or constant-first coefficients "-2,0,0,1"
    polynomial: Option<String>,
    /// Residue degrees for primes dividing the discriminant
    #[arg(long)]
    overrides: Option<PathBuf>,
}

#[derive(Args)]
struct SplittingArgs {
    #[command(flatten)]
    field: FieldOpts,
    #[arg(long)]
    pmax: Option<String>,
    /// Write the cache file here
    #[arg(long)]
    cache: Option<PathBuf>,
    #[command(flatten)]
    group: GroupOpts,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    field: FieldOpts,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    checkpoints: Option<usize>,
    /// Directory for one S_l CSV per exponent; stdout when absent and a single l is given
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Persist the sieve table
    #[arg(long)]
    sieve: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    field: FieldOpts,
    /// Read checkpoints from a CSV instead of sieving
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    checkpoints: Option<usize>,
    #[arg(long)]
    max_degree: Option<usize>,
    /// Predicted degree; taken from the group preset when omitted
    #[arg(long)]
    predicted: Option<u64>,
    #[command(flatten)]
    group: GroupOpts,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// euler, characters, divisibility, oracle, chebotarev, fit, delta or all
    suite: String,
    #[arg(long)]
    pmax: Option<String>,
    #[arg(long)]
    oracle_bound: Option<String>,
    #[arg(long)]
    fit_x: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    field: FieldOpts,
    #[command(flatten)]
    group: GroupOpts,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    l: Option<String>,
    #[command(flatten)]
    theta: ThetaOpts,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Verification,
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.to_string())
    }
}

type Run<T> = Result<T, Failure>;

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

struct Ctx {
    cfg: RunConfig,
}

impl Ctx {
    fn apply_field(&mut self, f: &FieldOpts) {
        if let Some(p) = &f.polynomial {
            self.cfg.field = Some(p.clone());
        }
        if let Some(o) = &f.overrides {
            self.cfg.overrides = Some(o.clone());
        }
    }

    fn apply_group(&mut self, g: &GroupOpts) {
        if let Some(p) = &g.preset {
            self.cfg.preset = Some(p.clone());
        }
        if let Some(n) = &g.nprime {
            self.cfg.n_prime = n.clone();
        }
    }

    fn apply_theta(&mut self, t: &ThetaOpts) -> Run<()> {
        let ratio = |s: &Option<String>| s.as_deref().map(parse_ratio).transpose();
        if let Some(v) = ratio(&t.theta1)? {
            self.cfg.theta.theta1 = Some(v);
        }
        if let Some(v) = ratio(&t.theta2)? {
            self.cfg.theta.theta2 = Some(v);
        }
        if let Some(v) = ratio(&t.theta3)? {
            self.cfg.theta.theta3 = Some(v);
        }
        if let Some(v) = ratio(&t.theta4)? {
            self.cfg.theta.theta4 = Some(v);
        }
        if let Some(m) = &t.mode {
            self.cfg.mode = m.parse::<DeltaMode>()?;
        }
        if t.no_declare_ii {
            self.cfg.declared_ii = false;
        }
        Ok(())
    }

    fn apply_l(&mut self, l: &Option<String>) -> Run<()> {
        if let Some(l) = l {
            self.cfg.l_values = parse_l_list(l)?;
        }
        Ok(())
    }

    fn apply_x(&mut self, x: &Option<String>) -> Run<()> {
        if let Some(x) = x {
            self.cfg.x = parse_bound(x)?;
        }
        Ok(())
    }

    fn cache(&self, pmax: u64) -> Run<PrimeSplittingCache> {
        let field = self.cfg.field_presentation()?;
        let ov = self.cfg.bad_prime_overrides(&field)?;
        Ok(PrimeSplittingCache::build(&field, pmax, &ov)?)
    }

    fn group_report(&self) -> Run<GroupReport> {
        let p = self.cfg.group_preset()?;
        let req = GroupRequest {
            preset: &p,
            n_prime: &self.cfg.n_prime,
            l_values: &self.cfg.l_values,
            declared_ii: self.cfg.declared_ii,
            mode: self.cfg.mode,
            theta: self.cfg.theta,
        };
        Ok(analyze_group(&req)?)
    }

    fn splitting(&self, cache: &PrimeSplittingCache) -> Run<SplittingSummary> {
        let expected = match self.cfg.preset_name() {
            Some(_) => {
                let p = self.cfg.group_preset()?;
                let choice = p.n_prime(&self.cfg.n_prime)?;
                let g_prime = p.presentation.subgroup_over(&choice.subgroup)?;
                Some(expected_densities(&p.presentation, &g_prime))
            }
            None => None,
        };
        Ok(splitting_summary(cache, expected.as_ref()))
    }

    fn predicted_degree(&self, l: u32) -> Option<u64> {
        let report = self.group_report().ok()?;
        report.entry(l)?.predicted_degree.map(|d| d as u64)
    }
}

fn emit(output: &Option<PathBuf>, value: &impl Serialize) -> Run<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    write_out(output.as_deref(), &text)
}

fn write_out(output: Option<&Path>, text: &str) -> Run<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct SplittingOutput {
    field: String,
    fingerprint: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    summary: SplittingSummary,
}

#[derive(Serialize)]
struct VerifyOutput {
    seed: u64,
    passed: bool,
    suites: Vec<idealmoments::verify::SuiteReport>,
}

#[derive(Serialize)]
struct FullReport {
    field: String,
    seed: u64,
    group: GroupReport,
    splitting: SplittingSummary,
    fits: Vec<FitReport>,
}

fn series_for(ctx: &Ctx, x: u64) -> Run<Vec<MomentSeries>> {
    let cache = ctx.cache(x)?;
    let table = sieve_a_values(&cache, x)?;
    let grid = geometric_checkpoints(x, ctx.cfg.checkpoints, DEFAULT_SPAN);
    ctx.cfg.l_values.iter().map(|&l| Ok(partial_sums(&table, l, &grid)?)).collect()
}

fn run(cli: Cli) -> Run<()> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(w) = cli.workers {
        cfg.workers = Some(w);
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(w) = cfg.workers {
        if w == 0 {
            return Err(config_err("workers must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().map_err(|e| config_err(e.to_string()))?;
    }
    let mut ctx = Ctx { cfg };

    match cli.command {
        Command::Group(args) => {
            if let Some(p) = &args.preset {
                ctx.cfg.preset = Some(p.clone());
            }
            if let Some(n) = &args.nprime {
                ctx.cfg.n_prime = n.clone();
            }
            ctx.apply_l(&args.l)?;
            ctx.apply_theta(&args.theta)?;
            ctx.cfg.validate()?;
            emit(&args.output, &ctx.group_report()?)
        }
        Command::Splitting(args) => {
            ctx.apply_field(&args.field);
            ctx.apply_group(&args.group);
            if let Some(p) = &args.pmax {
                ctx.cfg.pmax = Some(parse_bound(p)?);
            }
            ctx.cfg.validate()?;
            let cache = ctx.cache(ctx.cfg.pmax())?;
            if let Some(path) = &args.cache {
                cache.save(path)?;
            }
            let out = SplittingOutput {
                field: ctx.cfg.field_presentation()?.poly().to_string(),
                fingerprint: cache.fingerprint().to_string(),
                preset: ctx.cfg.preset_name(),
                summary: ctx.splitting(&cache)?,
            };
            emit(&args.output, &out)
        }
        Command::Moments(args) => {
            ctx.apply_field(&args.field);
            ctx.apply_x(&args.x)?;
            ctx.apply_l(&args.l)?;
            if let Some(c) = args.checkpoints {
                ctx.cfg.checkpoints = c;
            }
            ctx.cfg.validate()?;
            let x = ctx.cfg.x;
            let cache = ctx.cache(x)?;
            let table = sieve_a_values(&cache, x)?;
            if let Some(path) = &args.sieve {
                table.save(path)?;
            }
            let grid = geometric_checkpoints(x, ctx.cfg.checkpoints, DEFAULT_SPAN);
            let series: Vec<MomentSeries> =
                ctx.cfg.l_values.iter().map(|&l| partial_sums(&table, l, &grid)).collect::<Result<_, _>>()?;
            match &args.out_dir {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    for s in &series {
                        s.save_csv(&dir.join(format!("S{}.csv", s.l)))?;
                    }
                }
                None if series.len() == 1 => {
                    let mut buf = Vec::new();
                    series[0].write_csv(&mut buf)?;
                    std::io::stdout().write_all(&buf)?;
                }
                None => return Err(config_err("several exponents need --out-dir")),
            }
            Ok(())
        }
        Command::Fit(args) => {
            ctx.apply_field(&args.field);
            ctx.apply_group(&args.group);
            ctx.apply_x(&args.x)?;
            ctx.apply_l(&args.l)?;
            if let Some(c) = args.checkpoints {
                ctx.cfg.checkpoints = c;
            }
            if let Some(m) = args.max_degree {
                ctx.cfg.max_degree = m;
            }
            ctx.cfg.validate()?;
            let series = match &args.csv {
                Some(path) => {
                    let [l] = ctx.cfg.l_values[..] else {
                        return Err(config_err("a CSV fit needs exactly one l"));
                    };
                    vec![MomentSeries::load_csv(path, l)?]
                }
                None => series_for(&ctx, ctx.cfg.x)?,
            };
            let reports: Vec<FitReport> = series
                .iter()
                .map(|s| {
                    let predicted = args.predicted.or_else(|| ctx.predicted_degree(s.l));
                    select_degree(s, ctx.cfg.max_degree, SelectionRule::default(), predicted)
                })
                .collect::<Result<_, _>>()?;
            match &reports[..] {
                [one] => emit(&args.output, one),
                many => emit(&args.output, &many),
            }
        }
        Command::Verify(args) => {
            let suite: Suite = args.suite.parse().map_err(config_err)?;
            let mut opts = VerifyOptions { seed: ctx.cfg.seed, ..VerifyOptions::default() };
            if let Some(p) = &args.pmax {
                opts.pmax = parse_bound(p)?;
            }
            if let Some(b) = &args.oracle_bound {
                opts.oracle_bound = parse_bound(b)?;
            }
            if let Some(x) = &args.fit_x {
                opts.fit_x = parse_bound(x)?;
            }
            let suites = run_suite(suite, &opts);
            for s in &suites {
                for c in &s.checks {
                    eprintln!("[{}] {} {}: {}", s.suite, if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                }
            }
            let passed = suites.iter().all(|s| s.passed());
            emit(&args.output, &VerifyOutput { seed: opts.seed, passed, suites })?;
            if passed { Ok(()) } else { Err(Failure::Verification) }
        }
        Command::Report(args) => {
            ctx.apply_field(&args.field);
            ctx.apply_group(&args.group);
            ctx.apply_x(&args.x)?;
            ctx.apply_l(&args.l)?;
            ctx.apply_theta(&args.theta)?;
            ctx.cfg.validate()?;
            if ctx.cfg.preset_name().is_none() {
                return Err(ConfigError::MissingPreset.into());
            }
            let group = ctx.group_report()?;
            let x = ctx.cfg.x;
            let cache = ctx.cache(x.max(ctx.cfg.pmax()))?;
            let splitting = ctx.splitting(&cache)?;
            let fits = series_for(&ctx, x)?
                .iter()
                .map(|s| {
                    let predicted = group.entry(s.l).and_then(|e| e.predicted_degree).map(|d| d as u64);
                    select_degree(s, ctx.cfg.max_degree, SelectionRule::default(), predicted)
                })
                .collect::<Result<_, _>>()?;
            let out = FullReport {
                field: ctx.cfg.field_presentation()?.poly().to_string(),
                seed: ctx.cfg.seed,
                group,
                splitting,
                fits,
            };
            emit(&args.output, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
