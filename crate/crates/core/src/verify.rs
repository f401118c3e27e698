//! Statistical checks and machine-readable reports.
//!
//! Every check compares a statistic with a threshold and passes when
//! `statistic <= threshold`. For Kolmogorov-Smirnov checks the threshold is
//! the critical distance at the 1% level, so the rule is equivalent to
//! `p >= 0.01`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::bernstein::{distribution_from_levy, distribution_from_stieltjes, levy_from_distribution, stieltjes_from_distribution, DistributionF};
use crate::error::{invalid, Error, Result};
use crate::families::FamilySpec;
use crate::idt::IdtModel;
use crate::infdiv::{BondessonSampler, Remainder, SeriesSample};
use crate::maxstable::{expected_stopping, CopulaSampler, PickandsSampler};
use crate::samplers::{DirectSampler, LepageSampler};
use crate::rng::RngStream;

/// Largest expected number of LePage terms spent on the `H_1` check; above
/// it the check is left out.
const LEPAGE_BUDGET: f64 = 2e7;

/// Sample size cap of the path checks, which cost far more per draw.
const MAX_PATHS: usize = 20_000;

/// `lambda` with `Q_KS(lambda) = 0.01`.
pub const KS_LAMBDA_1PCT: f64 = 1.627_61;

/// Runs `f` on substreams `0..n` of `RngStream::new(seed)` in parallel.
/// The output is ordered by replicate index.
pub fn par_replicates<R, F>(seed: u64, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(&mut RngStream) -> R + Sync,
{
    let root = RngStream::new(seed);
    (0..n as u64).into_par_iter().map(|i| f(&mut root.substream(i))).collect()
}

/// [`par_replicates`] in blocks: block `b` uses substream `b` and produces
/// `block` consecutive replicates. Cheaper than one stream per draw.
pub fn par_blocks<R, F>(seed: u64, n: usize, block: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(&mut RngStream) -> R + Sync,
{
    let block = block.max(1);
    let root = RngStream::new(seed);
    let nb = n.div_ceil(block);
    let parts: Vec<Vec<R>> = (0..nb as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = root.substream(b);
            let len = block.min(n - b as usize * block);
            (0..len).map(|_| f(&mut rng)).collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// `-log` of the empirical Laplace transform at each `x`, with a delta-method
/// standard error. Infinite samples contribute zero.
pub fn empirical_bernstein(samples: &[f64], xs: &[f64]) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(invalid("no samples"));
    }
    if xs.iter().any(|&x| !(x > 0.0)) {
        return Err(invalid("evaluation points must be positive"));
    }
    let n = samples.len() as f64;
    let all_inf = samples.iter().all(|s| s.is_infinite());
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        if all_inf {
            return Err(Error::AllInfinite(x));
        }
        let w: Vec<f64> = samples.iter().map(|&s| if s.is_infinite() { 0.0 } else { (-x * s).exp() }).collect();
        let m = w.iter().sum::<f64>() / n;
        if m == 0.0 {
            out.push((f64::INFINITY, f64::INFINITY));
            continue;
        }
        let var = if samples.len() > 1 {
            w.iter().map(|a| (a - m) * (a - m)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        out.push((-m.ln(), (var / n).sqrt() / m));
    }
    Ok(out)
}

/// Kolmogorov distribution tail `P(K > lambda)`.
pub fn ks_q(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    if lambda < 1.18 {
        // theta function form of the cdf, accurate for small lambda
        let y = (-std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp();
        let s = y + y.powi(9) + y.powi(25) + y.powi(49);
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let t = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { t } else { -t };
        if t < 1e-17 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

fn ks_scale(ne: f64) -> f64 {
    let r = ne.sqrt();
    r + 0.12 + 0.11 / r
}

/// Critical distance at the 1% level for effective sample size `ne`.
pub fn ks_critical_1pct(ne: f64) -> f64 {
    KS_LAMBDA_1PCT / ks_scale(ne)
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// One-sample statistic against the uniform law on `[0, 1]`.
pub fn ks_uniform(u: &[f64]) -> (f64, f64) {
    ks_one_sample(u, |x| x.clamp(0.0, 1.0))
}

/// One-sample statistic against a continuous cdf.
pub fn ks_one_sample(v: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    if v.is_empty() {
        return (0.0, 1.0);
    }
    let s = sorted(v);
    let n = s.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in s.iter().enumerate() {
        let c = cdf(x);
        d = d.max((i + 1) as f64 / n - c).max(c - i as f64 / n);
    }
    (d, ks_q(ks_scale(n) * d))
}

/// Two-sample statistic; ties are stepped over together.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    if a.is_empty() || b.is_empty() {
        return (0.0, 1.0);
    }
    let (sa, sb) = (sorted(a), sorted(b));
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < sa.len() && j < sb.len() {
        let x = sa[i].min(sb[j]);
        while i < sa.len() && sa[i] <= x {
            i += 1;
        }
        while j < sb.len() && sb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    (d, ks_q(ks_scale(na * nb / (na + nb)) * d))
}

/// z-score of the sample mean against `1 / rate`, using the exponential
/// standard deviation `1 / rate`; passes when `|z| < 3`.
pub fn exp_rate_test(samples: &[f64], rate: f64) -> (f64, bool) {
    let n = samples.len() as f64;
    if samples.is_empty() || !(rate > 0.0) {
        return (f64::NAN, false);
    }
    let m = samples.iter().sum::<f64>() / n;
    let z = (m - 1.0 / rate) * rate * n.sqrt();
    (z, z.abs() < 3.0)
}

/// Mean and standard error.
pub fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, (var / n).sqrt())
}

/// Sup-norm distance between two distribution functions on a grid of
/// `n` points: half equispaced over the bulk, half at quantiles.
pub fn cdf_distance(a: &DistributionF<f64>, b: &DistributionF<f64>, n: usize) -> f64 {
    let lo = a.left_support();
    let hi = if a.right_support().is_finite() {
        a.right_support()
    } else {
        a.quantile(1.0 - 1e-9)
    };
    let half = (n / 2).max(1);
    let mut grid: Vec<f64> = (0..half).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / half as f64).collect();
    grid.extend((1..=n - half).map(|i| a.quantile(i as f64 / (n - half + 1) as f64)));
    grid.push(hi * 1.5 + 1.0);
    grid.iter()
        .filter(|x| x.is_finite())
        .map(|&x| (a.cdf(x) - b.cdf(x)).abs())
        .fold(0.0, f64::max)
}

/// One row of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// What the statistic is compared with.
    pub oracle: String,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub n: usize,
    pub seed: u64,
    /// Monte Carlo checks may fail by chance; closed-form checks may not.
    pub stochastic: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, oracle: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            oracle: oracle.into(),
            statistic,
            threshold,
            pass: statistic <= threshold,
            n: 0,
            seed: 0,
            stochastic: false,
        }
    }

    /// Marks the check as Monte Carlo with its sample size and seed.
    pub fn mc(mut self, n: usize, seed: u64) -> Self {
        self.n = n;
        self.seed = seed;
        self.stochastic = true;
        self
    }

    fn failed(name: impl Into<String>, oracle: impl Into<String>, err: &Error) -> Self {
        let mut c = Check::new(name, format!("{} (error: {err})", oracle.into()), f64::NAN, 0.0);
        c.pass = false;
        c
    }

    /// `|est - target| <= max(k se, floor)`.
    pub fn within_se(name: impl Into<String>, oracle: impl Into<String>, est: f64, target: f64, se: f64, k: f64, floor: f64) -> Self {
        Check::new(name, oracle, (est - target).abs(), (k * se).max(floor))
    }

    /// Relative error `|a - b| / |b|` against `tol`.
    pub fn relative(name: impl Into<String>, oracle: impl Into<String>, a: f64, b: f64, tol: f64) -> Self {
        let r = if a == b { 0.0 } else { (a - b).abs() / b.abs() };
        Check::new(name, oracle, if r.is_nan() { f64::INFINITY } else { r }, tol)
    }

    /// Kolmogorov-Smirnov distance against the 1% critical value.
    pub fn ks(name: impl Into<String>, oracle: impl Into<String>, d: f64, ne: f64) -> Self {
        Check::new(name, oracle, d, ks_critical_1pct(ne))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub model_id: String,
    pub checks: Vec<Check>,
    /// At least 95% of the Monte Carlo checks pass and every closed-form
    /// check passes. See [`VerificationReport::all_checks_pass`] for the
    /// strict rule.
    pub overall_pass: bool,
}

impl VerificationReport {
    pub fn new(model_id: impl Into<String>, checks: Vec<Check>) -> Self {
        let overall_pass = Self::tolerant_pass(&checks);
        VerificationReport {
            model_id: model_id.into(),
            checks,
            overall_pass,
        }
    }

    fn tolerant_pass(checks: &[Check]) -> bool {
        if checks.iter().any(|c| !c.stochastic && !c.pass) {
            return false;
        }
        let mc: Vec<&Check> = checks.iter().filter(|c| c.stochastic).collect();
        if mc.is_empty() {
            return true;
        }
        let ok = mc.iter().filter(|c| c.pass).count();
        ok as f64 >= 0.95 * mc.len() as f64
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Columns `check, statistic, threshold, pass, n, seed`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(["check", "statistic", "threshold", "pass", "n", "seed"]).map_err(io)?;
        for c in &self.checks {
            out.write_record([
                c.name.clone(),
                format!("{}", c.statistic),
                format!("{}", c.threshold),
                c.pass.to_string(),
                c.n.to_string(),
                c.seed.to_string(),
            ])
            .map_err(io)?;
        }
        out.flush().map_err(|e| Error::Io(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Closed-form and quadrature checks only.
    Closed,
    /// Closed-form checks plus the Monte Carlo checks that apply.
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// Sample size of the Monte Carlo checks.
    pub n: usize,
    pub seed: u64,
    /// Dimension of the copula checks.
    pub dim: usize,
    /// Points of the empirical Bernstein curve.
    pub xs: Vec<f64>,
    /// Truncation tolerance of infinite series.
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::Full,
            n: 100_000,
            seed: 1,
            dim: 3,
            xs: (1..=20).map(f64::from).collect(),
            tol: 1e-4,
        }
    }
}

/// Empirical Bernstein curve of `samples` against `psi` at `xs`, one check
/// per point with 3 standard errors and an absolute floor of 0.02.
pub fn bernstein_checks(tag: &str, oracle: &str, samples: &[f64], xs: &[f64], psi: impl Fn(f64) -> Result<f64>, seed: u64) -> Vec<Check> {
    let n = samples.len();
    let est = match empirical_bernstein(samples, xs) {
        Ok(e) => e,
        Err(e) => return vec![Check::failed(format!("{tag}/bernstein"), oracle, &e).mc(n, seed)],
    };
    xs.iter()
        .zip(est)
        .map(|(&x, (e, se))| {
            let name = format!("{tag}/bernstein x={x}");
            match psi(x) {
                Ok(p) => Check::within_se(name, oracle, e, p, se, 3.0, 0.02).mc(n, seed),
                Err(err) => Check::failed(name, oracle, &err).mc(n, seed),
            }
        })
        .collect()
}

fn check_or(name: &str, oracle: &str, r: Result<Check>) -> Check {
    r.unwrap_or_else(|e| Check::failed(name, oracle, &e))
}

/// Runs the checks that apply to `spec` with its default subordinator.
/// Failures are recorded, never returned as errors.
pub fn run_suite(spec: &FamilySpec<f64>, cfg: &SuiteConfig) -> VerificationReport {
    let mut checks = Vec::new();
    let model = match spec.model() {
        Ok(m) => m,
        Err(e) => return VerificationReport::new(spec.id(), vec![Check::failed("model", "admissibility", &e)]),
    };
    closed_checks(spec, &model, &mut checks);
    if cfg.suite == Suite::Full {
        mc_checks(spec, &model, cfg, &mut checks);
    }
    VerificationReport::new(spec.id(), checks)
}

fn closed_checks(spec: &FamilySpec<f64>, model: &IdtModel<f64>, checks: &mut Vec<Check>) {
    let f = spec.distribution();
    checks.push(check_or("round_trip levy", "F -> nu_F -> F, sup norm on 1000 points", (|| {
        let back = distribution_from_levy(&levy_from_distribution(f))?;
        Ok(Check::new("round_trip levy", "F -> nu_F -> F, sup norm on 1000 points", cdf_distance(f, &back, 1000), 1e-9))
    })()));
    if f.left_support() == 0.0 {
        let o = "F -> rho_F -> F, sup norm on 1000 points";
        checks.push(check_or("round_trip stieltjes", o, (|| {
            let back = distribution_from_stieltjes(&stieltjes_from_distribution(f)?)?;
            Ok(Check::new("round_trip stieltjes", o, cdf_distance(f, &back, 1000), 1e-9))
        })()));
    }
    for d in 1..=8usize {
        let name = format!("ell(1^{d}) = Psi_H({d})");
        let o = "quadrature ell against Psi_H";
        checks.push(check_or(&name, o, (|| {
            let l = model.ell_quadrature(&vec![1.0; d])?;
            Ok(Check::relative(name.clone(), o, l, model.psi_h(d as f64)?, 1e-6))
        })()));
    }
    if model.has_closed_ell() {
        let mut rng = RngStream::new(0xe11);
        for d in 2..=4usize {
            for k in 0..5 {
                let t: Vec<f64> = (0..d).map(|_| 0.1 + 2.0 * rng.uniform::<f64>()).collect();
                let name = format!("closed ell d={d} #{k}");
                let o = "registered closed ell against quadrature";
                checks.push(check_or(&name, o, (|| {
                    Ok(Check::relative(name.clone(), o, model.ell(&t)?, model.ell_quadrature(&t)?, 1e-4))
                })()));
            }
        }
    }
    if let Some(theta) = spec.params().get("theta").filter(|_| spec.id() == "frechet") {
        let o = "Psi_H(1) 2^theta";
        checks.push(check_or("frechet ell(1,1)", o, (|| {
            let m = model.normalized()?;
            Ok(Check::relative("frechet ell(1,1)", o, m.ell_quadrature(&[1.0, 1.0])?, 2f64.powf(*theta), 1e-5))
        })()));
    }
    if let Some(rho) = spec.stieltjes() {
        let o = "Stieltjes transform of rho against quadrature Psi_H";
        for x in [0.5, 1.0, 4.0] {
            let name = format!("bondesson psi x={x}");
            checks.push(check_or(&name, o, (|| {
                Ok(Check::relative(name.clone(), o, rho.psi(x)?, model.psi_h_quadrature(x)?, 1e-6))
            })()));
        }
    }
}

fn mc_checks(spec: &FamilySpec<f64>, model: &IdtModel<f64>, cfg: &SuiteConfig, checks: &mut Vec<Check>) {
    let n = cfg.n.max(2);
    let seed = cfg.seed;
    if let Some(rho) = spec.stieltjes() {
        let o = "Stieltjes transform of rho";
        match BondessonSampler::new(rho, cfg.tol, Remainder::Compensate) {
            Ok(s) => {
                let v: Vec<f64> = par_blocks(seed, n, 4096, |r| s.sample(r).value);
                checks.extend(bernstein_checks("id", o, &v, &cfg.xs, |x| rho.psi(x), seed));
            }
            Err(e) => checks.push(Check::failed("id/bernstein", o, &e)),
        }
    }
    // H_1 from the jump-epoch samplers
    let path_o = "Psi_H of the model";
    let n_path = n.min(MAX_PATHS);
    let xs: Vec<f64> = [0.5, 1.0, 2.0, 5.0].to_vec();
    let h1 = (|| -> Result<Vec<f64>> {
        if f_bounded(model) {
            let s = DirectSampler::new(model, 1.0, cfg.tol)?;
            par_blocks(seed ^ 0xd1, n_path, 4096, |r| s.sample(r).map(|p| p.eval(1.0))).into_iter().collect()
        } else {
            let s = LepageSampler::new(model, 1.0, cfg.tol)?;
            if s.stop_level() * n_path as f64 > LEPAGE_BUDGET {
                return Ok(Vec::new());
            }
            par_blocks(seed ^ 0x1e, n_path, 4096, |r| s.sample(r).map(|p| p.eval(1.0))).into_iter().collect()
        }
    })();
    match h1 {
        Ok(v) if v.is_empty() => {}
        Ok(v) => checks.extend(bernstein_checks("H_1", path_o, &v, &xs, |x| model.psi_h(x), seed)),
        Err(e) => checks.push(Check::failed("H_1/bernstein", path_o, &e)),
    }

    let d = cfg.dim.max(2);
    let norm = match model.normalized() {
        Ok(m) => m,
        Err(e) => {
            checks.push(Check::failed("normalize", "Psi_H(1) = 1", &e));
            return;
        }
    };
    let pickands = PickandsSampler::new(&norm, d);
    if matches!(pickands, Err(Error::MSamplerUnavailable(_) | Error::ZSamplerUnavailable(_))) {
        // the copula checks do not apply without the required samplers
        return;
    }
    match pickands {
        Ok(q) => {
            let draws: Vec<Result<Vec<f64>>> = par_blocks(seed ^ 0x9c, n, 4096, |r| q.sample(r).map(|p| p.into_vec()));
            match draws.into_iter().collect::<Result<Vec<_>>>() {
                Ok(qs) => {
                    let exact = qs.iter().all(|q| q.iter().fold(0.0, |a, &b| a + b) == 1.0);
                    checks.push(Check::new("pickands sum", "sum Q = 1 in floating point", if exact { 0.0 } else { 1.0 }, 0.0));
                    for k in 0..d {
                        let col: Vec<f64> = qs.iter().map(|q| q[k]).collect();
                        let (m, se) = mean_se(&col);
                        checks.push(Check::within_se(format!("pickands E[Q_{}]", k + 1), "1/d", m, 1.0 / d as f64, se, 3.0, 0.0).mc(n, seed));
                    }
                }
                Err(e) => checks.push(Check::failed("pickands", "1/d", &e)),
            }
        }
        Err(e) => checks.push(Check::failed("pickands", "1/d", &e)),
    }
    match CopulaSampler::new(&norm, d) {
        Ok(c) => {
            let draws: Result<Vec<_>> = par_blocks(seed ^ 0xc0, n, 4096, |r| c.sample(r)).into_iter().collect();
            match draws {
                Ok(draws) => copula_checks(&norm, &draws, d, n, seed, checks),
                Err(e) => checks.push(Check::failed("copula", "uniform margins", &e)),
            }
        }
        Err(e) => checks.push(Check::failed("copula", "uniform margins", &e)),
    }
}

fn f_bounded(model: &IdtModel<f64>) -> bool {
    model.distribution().right_support().is_finite()
}

fn copula_checks(model: &IdtModel<f64>, draws: &[crate::maxstable::CopulaDraw<f64>], d: usize, n: usize, seed: u64, checks: &mut Vec<Check>) {
    let us: Vec<Vec<f64>> = draws.iter().map(|c| c.uniforms()).collect();
    for k in 0..d {
        let col: Vec<f64> = us.iter().map(|u| u[k]).collect();
        let (stat, _) = ks_uniform(&col);
        checks.push(Check::ks(format!("copula margin {} uniform", k + 1), "uniform cdf", stat, n as f64).mc(n, seed));
    }
    let m = 10_000.min(draws.len());
    let stops: Vec<f64> = draws[..m].iter().map(|c| c.stopping as f64).collect();
    let o = "-d sum_k C(d,k) (-1)^k / Psi_H(k), 5% band";
    match expected_stopping(model, d) {
        Ok(e) => {
            let (mean, _) = mean_se(&stops);
            checks.push(Check::new("stopping bound", "E[N] <= d^2", e, (d * d) as f64));
            checks.push(Check::new("stopping mean", o, (mean - e).abs() / e, 0.05).mc(m, seed));
        }
        Err(err) => checks.push(Check::failed("stopping mean", o, &err)),
    }
    let t: Vec<f64> = (0..d).map(|j| 0.5 + j as f64 / d as f64).collect();
    let o = "1 / ell(t) by quadrature";
    let mins: Vec<f64> = draws.iter().map(|c| c.minstable().iter().zip(&t).map(|(y, tj)| y / tj).fold(f64::INFINITY, f64::min)).collect();
    checks.push(check_or("min-stability", o, (|| {
        let l = model.ell(&t)?;
        let (z, _) = exp_rate_test(&mins, l);
        Ok(Check::new("min-stability", o, z.abs(), 3.0).mc(n, seed))
    })()));
    for (g, uv) in [[0.3, 0.5, 0.7], [0.6, 0.8, 0.4], [0.9, 0.9, 0.9]].iter().enumerate() {
        let u: Vec<f64> = (0..d).map(|j| uv[j % 3]).collect();
        let o = "exp(-ell(-log u)) by quadrature";
        let name = format!("copula cdf #{g}");
        checks.push(check_or(&name, o, (|| {
            let target = (-model.ell(&u.iter().map(|x: &f64| -x.ln()).collect::<Vec<_>>())?).exp();
            let hits: Vec<f64> = us.iter().map(|w| if w.iter().zip(&u).all(|(a, b)| a <= b) { 1.0 } else { 0.0 }).collect();
            let (p, _) = mean_se(&hits);
            let se = (target * (1.0 - target) / n as f64).sqrt();
            Ok(Check::within_se(name.clone(), o, p, target, se, 3.0, 0.0).mc(n, seed))
        })()));
    }
}

/// Value column of a batch of series draws.
pub fn values<T: Copy>(draws: &[SeriesSample<T>]) -> Vec<T> {
    draws.iter().map(|d| d.value).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::family;

    #[test]
    fn bernstein_trivial_laws() {
        let z = empirical_bernstein(&[0.0; 10], &[1.0, 5.0]).unwrap();
        assert!(z.iter().all(|&(e, _)| e == 0.0));
        let c = empirical_bernstein(&[2.5; 10], &[1.0, 3.0]).unwrap();
        assert!((c[0].0 - 2.5).abs() < 1e-12 && (c[1].0 - 7.5).abs() < 1e-12);
        assert!(matches!(empirical_bernstein(&[f64::INFINITY; 3], &[1.0]), Err(Error::AllInfinite(_))));
        let mixed = empirical_bernstein(&[f64::INFINITY, 0.0], &[1.0]).unwrap();
        assert!((mixed[0].0 - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn ks_trivial() {
        let a = [0.1, 0.4, 0.2, 0.9];
        assert_eq!(ks_two_sample(&a, &a).0, 0.0);
        let n = 50;
        let u: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        assert!(ks_uniform(&u).0 <= 1.0 / n as f64);
        assert!((ks_q(KS_LAMBDA_1PCT) - 0.01).abs() < 1e-5);
        // both branches agree at the switch point
        assert!((ks_q(1.1799999) - ks_q(1.18)).abs() < 1e-6);
    }

    #[test]
    fn ks_detects_shift() {
        let a: Vec<f64> = (0..2000).map(|i| i as f64 / 2000.0).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 0.1).collect();
        let (d, p) = ks_two_sample(&a, &b);
        assert!((d - 0.1).abs() < 1e-3 && p < 1e-6);
    }

    #[test]
    fn exp_rate() {
        let v = par_replicates(3, 20_000, |r| r.exp1::<f64>() / 2.0);
        let (z, pass) = exp_rate_test(&v, 2.0);
        assert!(pass, "{z}");
        assert!(!exp_rate_test(&v, 1.5).1);
    }

    #[test]
    fn replicates_are_ordered_and_deterministic() {
        let a = par_blocks(9, 1000, 64, |r| r.uniform::<f64>());
        let b = par_blocks(9, 1000, 64, |r| r.uniform::<f64>());
        assert_eq!(a, b);
        assert_eq!(a.len(), 1000);
        let c = par_replicates(9, 10, |r| r.path().to_vec());
        assert_eq!(c[7], vec![7]);
    }

    #[test]
    fn empty_report_passes() {
        let r = VerificationReport::new("none", vec![]);
        assert!(r.overall_pass && r.all_checks_pass());
    }

    #[test]
    fn tolerant_rule() {
        let mut checks: Vec<Check> = (0..40).map(|i| Check::new(format!("c{i}"), "o", 0.0, 1.0).mc(10, 1)).collect();
        checks[0].pass = false;
        let r = VerificationReport::new("m", checks.clone());
        assert!(r.overall_pass && !r.all_checks_pass());
        checks.push(Check::new("closed", "o", 2.0, 1.0));
        assert!(!VerificationReport::new("m", checks).overall_pass);
    }

    #[test]
    fn csv_and_json() {
        let r = VerificationReport::new("m", vec![Check::new("a", "o", 0.5, 1.0).mc(10, 3)]);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "check,statistic,threshold,pass,n,seed\na,0.5,1,true,10,3\n");
        let j: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(j["overall_pass"], true);
        assert_eq!(j["checks"][0]["oracle"], "o");
    }

    #[test]
    fn closed_suite_frechet() {
        let spec = family::<f64>("frechet").unwrap();
        let cfg = SuiteConfig {
            suite: Suite::Closed,
            ..SuiteConfig::default()
        };
        let r = run_suite(&spec, &cfg);
        assert!(r.checks.iter().any(|c| c.name == "frechet ell(1,1)"));
        for c in &r.checks {
            assert!(c.pass, "{c:?}");
        }
        assert_eq!(r, run_suite(&spec, &cfg));
    }
}
