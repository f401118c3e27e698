use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use idtsub::bernstein::{levy_from_distribution, stieltjes_from_distribution};
use idtsub::infdiv::{sample_cp_from_g, BondessonSampler, DualitySampler, Remainder};
use idtsub::maxstable::CopulaSampler;
use idtsub::samplers::{DirectSampler, Kernel, LepageSampler, PathSample};
use idtsub::verify::par_replicates;
use idtsub::{lookup, Error, FamilySpec, Suite, SuiteConfig};

const SEED_ENV: &str = "IDTSUB_SEED";

#[derive(Parser)]
#[command(name = "idtsub", version, about = "Simulation and verification for IDT subordinators")]
struct Cli {
    /// Flat key=value file with defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Catalog of families.
    Families {
        #[command(subcommand)]
        cmd: FamiliesCmd,
    },
    /// Draw samples; CSV on stdout.
    Sample {
        #[command(subcommand)]
        cmd: SampleCmd,
    },
    /// Evaluate closed forms.
    Eval {
        #[command(subcommand)]
        cmd: EvalCmd,
    },
    /// Run a verification suite; exit code 1 when it fails.
    Verify {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, value_enum)]
        suite: Option<SuiteArg>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FamiliesCmd {
    List,
}

#[derive(Subcommand)]
enum SampleCmd {
    /// Rows `seed,stream,u1..ud` of the max-stable copula.
    Copula {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rows `seed,stream,t,value` of `H` on `[0, horizon]`.
    Path {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long, value_enum)]
        sampler: Option<PathSampler>,
        /// Number of paths.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Extra evaluation times per path when `H` moves between epochs.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Rows `seed,stream,value,terms,exact` of an infinitely divisible law.
    Infdiv {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, value_enum)]
        law: Option<Law>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Subcommand)]
enum EvalCmd {
    /// Stable tail dependence function at `t`.
    Ell {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        t: Vec<f64>,
        /// Use the model rescaled to `Psi_H(1) = 1`.
        #[arg(long)]
        normalize: bool,
        /// Ignore registered closed forms.
        #[arg(long)]
        quadrature: bool,
    },
    /// `Psi_H` at each `x`.
    Psi {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
    },
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    theta: Option<f64>,
    /// Extra family parameter, `key=value`.
    #[arg(long = "param")]
    params: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Full,
    Closed,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum PathSampler {
    Direct,
    Lepage,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Law {
    Duality,
    Bondesson,
    Cp,
}

/// Bad input: exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Library errors raised while setting a run up are the caller's fault.
fn setup(e: Error) -> anyhow::Error {
    match e {
        Error::NonConvergence { .. } | Error::Io(_) => anyhow!(e),
        other => usage(other.to_string()),
    }
}

struct CheckFailed;

impl std::fmt::Debug for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for CheckFailed {}

#[derive(Default)]
struct Config(BTreeMap<String, String>);

impl Config {
    fn load(path: Option<&PathBuf>) -> anyhow::Result<Config> {
        let Some(path) = path else { return Ok(Config::default()) };
        let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
            map.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        Ok(Config(map))
    }

    /// Flag value, else the config entry.
    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> anyhow::Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| usage(format!("config `{key}`: {e}"))),
        }
    }

    fn pick_enum<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> anyhow::Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => T::from_str(v, true).map(Some).map_err(|e| usage(format!("config `{key}`: {e}"))),
        }
    }

    /// Flag, then config, then `IDTSUB_SEED`, then 1.
    fn seed(&self, flag: Option<u64>) -> anyhow::Result<u64> {
        if let Some(s) = self.pick(flag, "seed")? {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse().map_err(|e| usage(format!("{SEED_ENV}: {e}"))),
            Err(_) => Ok(1),
        }
    }

    fn family(&self, args: &FamilyArgs) -> anyhow::Result<FamilySpec<f64>> {
        let id = self
            .pick(args.family.clone(), "family")?
            .ok_or_else(|| usage("missing --family (see `idtsub families list`)"))?;
        let mut params = BTreeMap::new();
        if let Some(t) = self.pick(args.theta, "theta")? {
            params.insert("theta".to_string(), t);
        }
        for p in &args.params {
            let (k, v) = p.split_once('=').ok_or_else(|| usage(format!("--param expects key=value, got `{p}`")))?;
            let v: f64 = v.parse().map_err(|e| usage(format!("--param {k}: {e}")))?;
            params.insert(k.to_string(), v);
        }
        lookup(&id, &params).map_err(setup)
    }
}

fn positive<T: PartialOrd + Default + std::fmt::Display>(v: T, name: &str) -> anyhow::Result<T> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<CheckFailed>() => ExitCode::from(1),
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = Config::load(cli.config.as_ref())?;
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    match cli.cmd {
        Cmd::Families { cmd: FamiliesCmd::List } => {
            writeln!(out, "id\tparameters\tdescription")?;
            for s in idtsub::catalog::<f64>() {
                let params: Vec<String> = s.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "{}\t{}\t{}", s.id(), params.join(","), s.description())?;
            }
        }
        Cmd::Sample { cmd } => sample(&cfg, cmd, &mut out)?,
        Cmd::Eval { cmd } => eval(&cfg, cmd, &mut out)?,
        Cmd::Verify {
            fam,
            suite,
            n,
            seed,
            dim,
            tol,
            format,
            out: path,
        } => {
            let spec = cfg.family(&fam)?;
            let defaults = SuiteConfig::default();
            let sc = SuiteConfig {
                suite: match cfg.pick_enum(suite, "suite")?.unwrap_or(SuiteArg::Full) {
                    SuiteArg::Full => Suite::Full,
                    SuiteArg::Closed => Suite::Closed,
                },
                n: positive(cfg.pick(n, "n")?.unwrap_or(defaults.n), "n")?,
                seed: cfg.seed(seed)?,
                dim: cfg.pick(dim, "dim")?.unwrap_or(defaults.dim),
                tol: positive(cfg.pick(tol, "tol")?.unwrap_or(defaults.tol), "tol")?,
                ..defaults
            };
            if sc.dim < 2 {
                return Err(usage("--dim must be at least 2"));
            }
            let report = idtsub::run_suite(&spec, &sc);
            let format = cfg.pick_enum(format, "format")?.unwrap_or(Format::Json);
            let mut buf = Vec::new();
            match format {
                Format::Json => {
                    buf.extend_from_slice(report.to_json().as_bytes());
                    buf.push(b'\n');
                }
                Format::Csv => report.write_csv(&mut buf)?,
            }
            match cfg.pick(path, "out")? {
                Some(p) => fs::write(&p, &buf).with_context(|| format!("writing {}", p.display()))?,
                None => out.write_all(&buf)?,
            }
            out.flush()?;
            let failed = report.failures().count();
            eprintln!(
                "{}: {} checks, {} failed, overall {}",
                report.model_id,
                report.checks.len(),
                failed,
                if report.overall_pass { "PASS" } else { "FAIL" }
            );
            if !report.overall_pass {
                return Err(CheckFailed.into());
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn eval(cfg: &Config, cmd: EvalCmd, out: &mut impl Write) -> anyhow::Result<()> {
    match cmd {
        EvalCmd::Ell {
            fam,
            t,
            normalize,
            quadrature,
        } => {
            let spec = cfg.family(&fam)?;
            let t = if t.is_empty() {
                let raw = cfg.0.get("t").ok_or_else(|| usage("missing --t"))?;
                parse_list(raw)?
            } else {
                t
            };
            if t.is_empty() || t.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                return Err(usage("--t needs finite non-negative values"));
            }
            let mut model = spec.model().map_err(setup)?;
            if normalize {
                model = model.normalized().map_err(setup)?;
            }
            let v = if quadrature { model.ell_quadrature(&t)? } else { model.ell(&t)? };
            writeln!(out, "{v:.6}")?;
        }
        EvalCmd::Psi { fam, x } => {
            let spec = cfg.family(&fam)?;
            if x.is_empty() || x.iter().any(|v| !(*v >= 0.0)) {
                return Err(usage("--x needs non-negative values"));
            }
            let model = spec.model().map_err(setup)?;
            writeln!(out, "x,psi_h")?;
            for v in x {
                writeln!(out, "{v},{}", model.psi_h(v)?)?;
            }
        }
    }
    Ok(())
}

fn parse_list(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| usage(format!("bad number `{p}`: {e}"))))
        .collect()
}

fn sample(cfg: &Config, cmd: SampleCmd, out: &mut impl Write) -> anyhow::Result<()> {
    match cmd {
        SampleCmd::Copula { fam, dim, n, seed } => {
            let spec = cfg.family(&fam)?;
            let d = cfg.pick(dim, "dim")?.unwrap_or(2);
            if d < 2 {
                return Err(usage("--dim must be at least 2"));
            }
            let n = positive(cfg.pick(n, "n")?.unwrap_or(1000), "n")?;
            let seed = cfg.seed(seed)?;
            let model = spec.model().and_then(|m| m.normalized()).map_err(setup)?;
            let sampler = CopulaSampler::new(&model, d).map_err(setup)?;
            let rows = par_replicates(seed, n, |r| sampler.sample(r).map(|c| c.uniforms()));
            let mut header = String::from("seed,stream");
            for j in 1..=d {
                write!(header, ",u{j}")?;
            }
            writeln!(out, "{header}")?;
            for (i, row) in rows.into_iter().enumerate() {
                let u = row?;
                let mut line = format!("{seed},{i}");
                for v in u {
                    write!(line, ",{v}")?;
                }
                writeln!(out, "{line}")?;
            }
        }
        SampleCmd::Path {
            fam,
            horizon,
            sampler,
            n,
            seed,
            tol,
            points,
        } => {
            let spec = cfg.family(&fam)?;
            let horizon = positive(cfg.pick(horizon, "horizon")?.unwrap_or(1.0), "horizon")?;
            let n = positive(cfg.pick(n, "n")?.unwrap_or(1), "n")?;
            let tol = positive(cfg.pick(tol, "tol")?.unwrap_or(1e-8), "tol")?;
            let points = cfg.pick(points, "points")?.unwrap_or(100);
            let seed = cfg.seed(seed)?;
            let model = spec.model().map_err(setup)?;
            let kind = cfg.pick_enum(sampler, "sampler")?.unwrap_or(PathSampler::Direct);
            let paths: Vec<idtsub::Result<PathSample<f64>>> = match kind {
                PathSampler::Direct => {
                    let s = DirectSampler::new(&model, horizon, tol).map_err(setup)?;
                    par_replicates(seed, n, |r| s.sample(r))
                }
                PathSampler::Lepage => {
                    let s = LepageSampler::new(&model, horizon, tol).map_err(setup)?;
                    par_replicates(seed, n, |r| s.sample(r))
                }
            };
            writeln!(out, "seed,stream,t,value")?;
            for (i, p) in paths.into_iter().enumerate() {
                let p = p?;
                for t in epochs(&p, points) {
                    writeln!(out, "{seed},{i},{t},{}", p.eval(t))?;
                }
            }
        }
        SampleCmd::Infdiv { fam, law, n, seed, tol } => {
            let spec = cfg.family(&fam)?;
            let n = positive(cfg.pick(n, "n")?.unwrap_or(1000), "n")?;
            let tol = positive(cfg.pick(tol, "tol")?.unwrap_or(1e-4), "tol")?;
            let seed = cfg.seed(seed)?;
            let law = cfg.pick_enum(law, "law")?.unwrap_or(Law::Bondesson);
            let f = spec.distribution();
            let rho = || match spec.stieltjes() {
                Some(r) => Ok(r.clone()),
                None => stieltjes_from_distribution(f).map_err(setup),
            };
            let draws = match law {
                Law::Duality => {
                    let s = DualitySampler::new(&levy_from_distribution(f), tol, Remainder::Compensate).map_err(setup)?;
                    par_replicates(seed, n, |r| Ok(s.sample(r)))
                }
                Law::Bondesson => {
                    let s = BondessonSampler::new(&rho()?, tol, Remainder::Compensate).map_err(setup)?;
                    par_replicates(seed, n, |r| Ok(s.sample(r)))
                }
                Law::Cp => {
                    let rho = rho()?;
                    let beta = rho.total_mass();
                    if !beta.is_finite() {
                        return Err(usage(format!("{}: the Stieltjes measure is infinite, use --law bondesson", spec.id())));
                    }
                    par_replicates(seed, n, |r| sample_cp_from_g(beta, |u| 1.0 / rho.g_inverse(beta * u), r))
                }
            };
            writeln!(out, "seed,stream,value,terms,exact")?;
            for (i, d) in draws.into_iter().enumerate() {
                let d = d?;
                writeln!(out, "{seed},{i},{},{},{}", d.value, d.terms_used, d.exact)?;
            }
        }
    }
    Ok(())
}

/// Jump epochs of a step path; otherwise the times where a jump starts to
/// contribute, plus an even grid. Always ends at the horizon.
fn epochs(p: &PathSample<f64>, points: usize) -> Vec<f64> {
    let h = p.horizon();
    let mut ts: Vec<f64> = match p.kernel() {
        Kernel::Step => p.jump_times().iter().copied().filter(|&t| t > 0.0 && t <= h).collect(),
        Kernel::Distribution(f) => {
            let uf = f.right_support();
            let mut v: Vec<f64> = (1..=points).map(|i| h * i as f64 / points as f64).collect();
            if uf.is_finite() {
                v.extend(p.jump_times().iter().map(|&s| s / uf).filter(|&t| t > 0.0 && t <= h));
            }
            v
        }
    };
    ts.push(h);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}
