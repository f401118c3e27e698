//! Path samplers for `L` and `H`, the LePage series of `H`, and the tilted
//! jump law `Psi_F(z) nu_L(dz) / Psi_H(1)`.

use std::sync::Arc;

use crate::bernstein::{BernsteinFunction, DistributionF, LevyMeasure};
use crate::error::{invalid, Error, Result};
use crate::idt::IdtModel;
use crate::numerics::Quadrature;
use crate::real::Real;
use crate::rng::RngStream;

const MAX_REJECTIONS: usize = 50_000_000;

/// How the jumps of a path enter its value at time `t`.
#[derive(Clone)]
pub enum Kernel<T> {
    /// `X_t = sum_k w_k 1{p_k <= t}`.
    Step,
    /// `H_t = sum_k w_k (-log F(p_k / t -))`.
    Distribution(Arc<DistributionF<T>>),
}

/// A finite marked point configuration that can be evaluated at any time
/// `t` in `(0, horizon]`.
#[derive(Clone)]
pub struct PathSample<T> {
    jump_times: Vec<T>,
    jump_values: Vec<T>,
    horizon: T,
    kernel: Kernel<T>,
    exact: bool,
    truncation_error_bound: T,
}

impl<T: Real> PathSample<T> {
    pub fn jump_times(&self) -> &[T] {
        &self.jump_times
    }

    pub fn jump_values(&self) -> &[T] {
        &self.jump_values
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn kernel(&self) -> &Kernel<T> {
        &self.kernel
    }

    /// True when no mass was discarded and the path equals the target in law.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Bound on `E[1 - exp(-R)]` for the discarded remainder `R` at the horizon.
    pub fn truncation_error_bound(&self) -> T {
        self.truncation_error_bound
    }

    pub fn len(&self) -> usize {
        self.jump_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jump_times.is_empty()
    }

    pub fn eval(&self, t: T) -> T {
        if !(t > T::zero()) {
            return T::zero();
        }
        let mut acc = T::zero();
        match &self.kernel {
            Kernel::Step => {
                for (&p, &w) in self.jump_times.iter().zip(&self.jump_values) {
                    if p > t {
                        break;
                    }
                    acc += w;
                }
            }
            Kernel::Distribution(f) => {
                let uf = f.right_support();
                for (&p, &w) in self.jump_times.iter().zip(&self.jump_values) {
                    let x = p / t;
                    if x > uf {
                        break;
                    }
                    acc += T::mul0(w, f.neg_log_left_limit(x));
                }
            }
        }
        acc
    }

    pub fn eval_many(&self, ts: &[T]) -> Vec<T> {
        ts.iter().map(|&t| self.eval(t)).collect()
    }
}

fn check_horizon<T: Real>(horizon: T) -> Result<()> {
    if horizon >= T::zero() && horizon.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("horizon must be finite and non-negative, got {horizon}")))
    }
}

/// Compound Poisson path of `L` on `[0, horizon]`.
///
/// Killed jumps carry the value `inf`.
pub fn sample_levy_path_cp<T: Real>(l: &BernsteinFunction<T>, horizon: T, rng: &mut RngStream) -> Result<PathSample<T>> {
    let nu = l.levy();
    if !nu.is_finite() {
        return Err(Error::NotCompoundPoisson);
    }
    check_horizon(horizon)?;
    let n = rng.poisson((nu.total_mass() * horizon).as_f64()) as usize;
    let mut times: Vec<T> = (0..n).map(|_| horizon * rng.uniform::<T>()).collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let values = (0..n).map(|_| nu.sample_jump(rng)).collect::<Result<Vec<T>>>()?;
    Ok(PathSample {
        jump_times: times,
        jump_values: values,
        horizon,
        kernel: Kernel::Step,
        exact: true,
        truncation_error_bound: T::zero(),
    })
}

/// Samples `H` on `[0, horizon]` from a simulated compound Poisson path of `L`.
#[derive(Clone)]
pub struct DirectSampler<T> {
    f: Arc<DistributionF<T>>,
    levy: BernsteinFunction<T>,
    horizon: T,
    span: T,
    exact: bool,
    bound: T,
}

impl<T: Real> DirectSampler<T> {
    /// With `u_F` finite, jumps of `L` after `u_F * horizon` do not move
    /// `H` before the horizon and the sampler is exact. Otherwise `L` is
    /// simulated on `[0, s * horizon]` with `s` doubled until
    /// `horizon * int_s^inf Psi_L(-log F(u)) du <= tol`.
    pub fn new(model: &IdtModel<T>, horizon: T, tol: T) -> Result<Self> {
        let levy = model.levy().clone();
        if !levy.bounded() {
            return Err(Error::NotCompoundPoisson);
        }
        check_horizon(horizon)?;
        if !(tol > T::zero()) {
            return Err(invalid("tolerance must be positive"));
        }
        let f = model.distribution().clone();
        let uf = f.right_support();
        if uf.is_finite() || horizon == T::zero() {
            let span = if horizon == T::zero() { T::zero() } else { uf * horizon };
            return Ok(DirectSampler {
                f: Arc::new(f),
                levy,
                horizon,
                span,
                exact: true,
                bound: T::zero(),
            });
        }
        let mut s = if f.mean().is_finite() { f.mean().max(T::one()) } else { T::one() };
        for _ in 0..200 {
            let q = Quadrature::new(T::lit(1e-6)).with_abs_tol(tol * T::lit(1e-3)).with_tail_scale(s);
            let tail = q.integrate(
                |u| {
                    levy.eval(f.neg_log_cdf(u)).unwrap_or_else(|_| T::nan())
                },
                s,
                T::infinity(),
            )?;
            let b = horizon * tail.value;
            if b <= tol {
                return Ok(DirectSampler {
                    f: Arc::new(f),
                    levy,
                    horizon,
                    span: s * horizon,
                    exact: false,
                    bound: b,
                });
            }
            s = s * T::lit(2.0);
        }
        Err(Error::NonConvergence {
            value: s.as_f64(),
            abs_error: f64::INFINITY,
            evaluations: 200,
        })
    }

    /// Time span of the simulated Levy path.
    pub fn span(&self) -> T {
        self.span
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<PathSample<T>> {
        let l = sample_levy_path_cp(&self.levy, self.span, rng)?;
        Ok(PathSample {
            jump_times: l.jump_times,
            jump_values: l.jump_values,
            horizon: self.horizon,
            kernel: Kernel::Distribution(self.f.clone()),
            exact: self.exact,
            truncation_error_bound: self.bound,
        })
    }
}

/// One direct draw of `H` on `[0, horizon]` with remainder bound `1e-8`.
pub fn sample_h_direct<T: Real>(model: &IdtModel<T>, horizon: T, rng: &mut RngStream) -> Result<PathSample<T>> {
    DirectSampler::new(model, horizon, T::lit(1e-8))?.sample(rng)
}

/// Strategy used by a [`ZSampler`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZStrategy {
    Closed,
    Constant,
    /// Proposal `nu / |nu|`, accepted with probability `Psi_F(z) / u_F`.
    RejectBounded,
    /// Proposal proportional to `(1 + z) nu(dz)`, accepted with
    /// probability `Psi_F(z) / ((1 + z) Psi_F(1))`.
    RejectMixture,
    /// Piecewise envelope on the quantile axis of `nu`.
    Table,
}

#[derive(Clone)]
enum ZKind<T> {
    Closed(crate::bernstein::Sampler<T>),
    Constant { z: T, psi: T },
    Bounded { levy: LevyMeasure<T>, uf: T },
    Mixture { levy: LevyMeasure<T>, p_plain: T, psi1: T },
    Table(Arc<ZTable<T>>),
}

/// Sampler of the law `Psi_F(z) nu_L(dz) / Psi_H(1)`, returning `Psi_F(z)`
/// of the unscaled pair along with `z`.
#[derive(Clone)]
pub struct ZSampler<T> {
    kind: ZKind<T>,
    f: Arc<DistributionF<T>>,
}

impl<T: Real> ZSampler<T> {
    pub fn new(model: &IdtModel<T>) -> Result<Self> {
        let f = Arc::new(model.pair().distribution().clone());
        let nu = model.levy().levy();
        let kind = if let Some(s) = &model.closed_forms().z_sampler {
            ZKind::Closed(s.clone())
        } else if let Some((_, at)) = nu.as_point_mass() {
            ZKind::Constant { z: at, psi: f.psi(at)? }
        } else if nu.is_finite() && nu.has_jump_sampler() && f.right_support().is_finite() {
            ZKind::Bounded {
                levy: nu.clone(),
                uf: f.right_support(),
            }
        } else if nu.is_finite()
            && nu.has_jump_sampler()
            && nu.has_size_biased_sampler()
            && nu.atom_at_infinity() == T::zero()
            && nu.jump_mean().is_finite()
        {
            let total = nu.total_mass();
            ZKind::Mixture {
                levy: nu.clone(),
                p_plain: total / (total + nu.jump_mean()),
                psi1: f.psi(T::one())?,
            }
        } else {
            ZKind::Table(Arc::new(ZTable::build(&f, nu)?))
        };
        Ok(ZSampler { kind, f })
    }

    /// Forces the tabulated envelope, whatever else is available.
    pub fn tabulated(model: &IdtModel<T>) -> Result<Self> {
        let f = Arc::new(model.pair().distribution().clone());
        let table = ZTable::build(&f, model.levy().levy())?;
        Ok(ZSampler {
            kind: ZKind::Table(Arc::new(table)),
            f,
        })
    }

    pub fn strategy(&self) -> ZStrategy {
        match self.kind {
            ZKind::Closed(_) => ZStrategy::Closed,
            ZKind::Constant { .. } => ZStrategy::Constant,
            ZKind::Bounded { .. } => ZStrategy::RejectBounded,
            ZKind::Mixture { .. } => ZStrategy::RejectMixture,
            ZKind::Table(_) => ZStrategy::Table,
        }
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<T> {
        Ok(self.sample_with_psi(rng)?.0)
    }

    pub fn sample_with_psi(&self, rng: &mut RngStream) -> Result<(T, T)> {
        match &self.kind {
            ZKind::Closed(s) => {
                let z = s(rng);
                Ok((z, self.f.psi(z)?))
            }
            ZKind::Constant { z, psi } => Ok((*z, *psi)),
            ZKind::Bounded { levy, uf } => {
                for _ in 0..MAX_REJECTIONS {
                    let z = levy.sample_jump(rng)?;
                    let psi = self.f.psi(z)?;
                    if rng.uniform::<T>() * *uf <= psi {
                        return Ok((z, psi));
                    }
                }
                Err(Error::ZSamplerUnavailable("acceptance rate too small".into()))
            }
            ZKind::Mixture { levy, p_plain, psi1 } => {
                for _ in 0..MAX_REJECTIONS {
                    let z = if rng.uniform::<T>() < *p_plain {
                        levy.sample_jump(rng)?
                    } else {
                        levy.sample_size_biased(rng).ok_or_else(|| Error::ZSamplerUnavailable("size-biased jump".into()))?
                    };
                    let psi = self.f.psi(z)?;
                    if rng.uniform::<T>() * (T::one() + z) * *psi1 <= psi {
                        return Ok((z, psi));
                    }
                }
                Err(Error::ZSamplerUnavailable("acceptance rate too small".into()))
            }
            ZKind::Table(t) => t.sample(&self.f, rng),
        }
    }
}

/// Cells `[y_i, y_{i+1}]` on the quantile axis of `nu`; the density of
/// `y` is `h(y) = Psi_F(S^{-1}(y))`, decreasing, so `h(y_i)` is an
/// envelope on each cell.
struct ZTable<T> {
    edges: Vec<T>,
    sup: Vec<T>,
    cum: Vec<T>,
    atom_mass: T,
    levy: LevyMeasure<T>,
    uf: T,
}

impl<T: Real> ZTable<T> {
    fn build(f: &DistributionF<T>, nu: &LevyMeasure<T>) -> Result<Self> {
        let a = nu.atom_at_infinity();
        let b = nu.total_mass();
        let uf = f.right_support();
        if a > T::zero() && !uf.is_finite() {
            return Err(Error::ZSamplerUnavailable("killing with unbounded support".into()));
        }
        let h = |y: T| f.psi(nu.survival_inverse(y)).unwrap_or_else(|_| T::nan());
        let q = Quadrature::new(T::lit(1e-9));
        let cell_mass = |lo: T, hi: T| -> Result<T> { Ok(q.integrate(h, lo, hi)?.value) };

        let two = T::lit(2.0);
        let mut edges: Vec<T> = Vec::new();
        if b.is_finite() {
            let n = 64;
            let w = b - a;
            // geometric refinement near the singular left end
            for j in (1..=40).rev() {
                edges.push(a + w / T::lit(64.0) * two.powi(-j));
            }
            for k in 1..=n {
                edges.push(a + w * T::from_usize_lossy(k) / T::from_usize_lossy(n));
            }
        } else {
            for j in -40..=20 {
                edges.push(a + two.powi(j));
            }
        }

        // residual cell at the left end
        let mut lo_mass = T::zero();
        let left_sup;
        if uf.is_finite() {
            left_sup = uf;
            lo_mass = cell_mass(a, edges[0])?;
            edges.insert(0, a);
        } else {
            let r = cell_mass(a, edges[0]).unwrap_or(T::infinity());
            left_sup = T::nan();
            if r > T::lit(1e-13) {
                return Err(Error::ZSamplerUnavailable("mass concentrates at the left end of the quantile axis".into()));
            }
        }
        // residual tail on the right when nu is infinite
        if !b.is_finite() {
            let mut right = *edges.last().unwrap();
            for _ in 0..200 {
                let r = q.with_tail_scale(right).integrate(h, right, T::infinity())?.value;
                if r <= T::lit(1e-13) {
                    break;
                }
                right = right * two;
                edges.push(right);
            }
        }

        let mut sup = Vec::with_capacity(edges.len());
        let mut cum = Vec::with_capacity(edges.len());
        let mut acc = T::zero();
        for i in 0..edges.len() - 1 {
            let m = if uf.is_finite() && i == 0 { lo_mass } else { cell_mass(edges[i], edges[i + 1])? };
            acc += m;
            cum.push(acc);
            sup.push(if uf.is_finite() && i == 0 { left_sup } else { h(edges[i]) });
        }
        let atom_mass = a * uf;
        if !(acc + atom_mass > T::zero()) || !acc.is_finite() {
            return Err(Error::ZSamplerUnavailable("tilted law has no mass".into()));
        }
        Ok(ZTable {
            edges,
            sup,
            cum,
            atom_mass,
            levy: nu.clone(),
            uf,
        })
    }

    fn sample(&self, f: &DistributionF<T>, rng: &mut RngStream) -> Result<(T, T)> {
        let total = *self.cum.last().unwrap_or(&T::zero());
        let u = rng.uniform::<T>() * (total + self.atom_mass);
        if u >= total {
            return Ok((T::infinity(), self.uf));
        }
        let i = self.cum.partition_point(|&c| c <= u).min(self.cum.len() - 1);
        let (lo, hi) = (self.edges[i], self.edges[i + 1]);
        for _ in 0..MAX_REJECTIONS {
            let y = lo + (hi - lo) * rng.uniform::<T>();
            let z = self.levy.survival_inverse(y);
            let psi = f.psi(z)?;
            if rng.uniform::<T>() * self.sup[i] <= psi {
                return Ok((z, psi));
            }
        }
        Err(Error::ZSamplerUnavailable("acceptance rate too small".into()))
    }
}

/// Samples `H` on `[0, horizon]` from the series
/// `H_t = sum_k Z_k (-log F(Gamma_k Psi_F(Z_k) / (Psi_H(1) t) -))`.
#[derive(Clone)]
pub struct LepageSampler<T> {
    f: Arc<DistributionF<T>>,
    z: ZSampler<T>,
    c_pair: T,
    horizon: T,
    stop: T,
    exact: bool,
    bound: T,
}

impl<T: Real> LepageSampler<T> {
    /// The series stops at the first `Gamma_k` above a level `gamma`.
    ///
    /// When `u_F < inf` and `Psi_F` is bounded away from zero on the support
    /// of `nu_L` the level is chosen so that no later point can reach the
    /// horizon. Otherwise it is the smallest level (found by bisection) with
    /// `horizon * int nu(dz) int_{gamma Psi_F(z) / (c horizon)}^{u_F} (1 - F(s)^z) ds <= tol`,
    /// the mean of the neglected part of `H_horizon`.
    pub fn new(model: &IdtModel<T>, horizon: T, tol: T) -> Result<Self> {
        check_horizon(horizon)?;
        if !(tol > T::zero()) {
            return Err(invalid("tolerance must be positive"));
        }
        let z = ZSampler::new(model)?;
        let f = model.distribution().clone();
        let pair_f = model.pair().distribution();
        let nu = model.levy().levy();
        let c_pair = model.psi_h1() * model.scale_c();
        let uf = f.right_support();
        let built = |stop: T, exact: bool, bound: T, z: ZSampler<T>, f: DistributionF<T>| LepageSampler {
            f: Arc::new(f),
            z,
            c_pair,
            horizon,
            stop,
            exact,
            bound,
        };
        if horizon == T::zero() {
            return Ok(built(T::zero(), true, T::zero(), z, f));
        }
        if uf.is_finite() {
            let zmin = match nu.as_point_mass() {
                Some((_, at)) => at,
                None => nu.support_lower(),
            };
            let psi_min = pair_f.psi(zmin)?;
            if psi_min > T::zero() {
                return Ok(built(uf * horizon * c_pair / psi_min, true, T::zero(), z, f));
            }
        }

        let inner_q = Quadrature::new(T::lit(1e-7)).with_abs_tol(tol * T::lit(1e-4));
        let outer_q = Quadrature::new(T::lit(1e-6)).with_abs_tol(tol * T::lit(1e-3));
        let upf = pair_f.right_support();
        let bound_at = |gamma: T| -> Result<T> {
            let inner = |zz: T| -> T {
                let psi = if zz.is_infinite() { upf } else { pair_f.psi(zz).unwrap_or_else(|_| T::nan()) };
                let a = gamma * psi / (c_pair * horizon);
                if zz.is_infinite() {
                    return (uf - a).max(T::zero());
                }
                if a >= uf {
                    return T::zero();
                }
                let q = inner_q.with_tail_scale(a.max(T::one()));
                match q.integrate(|s| f.one_minus_power(s, zz), a, uf) {
                    Ok(r) => r.value,
                    Err(_) => T::nan(),
                }
            };
            Ok(horizon * nu.integrate(inner, &outer_q)?)
        };
        let mut hi = c_pair.max(T::one());
        let mut b_hi = bound_at(hi)?;
        let mut doublings = 0;
        while b_hi > tol {
            hi = hi * T::lit(2.0);
            b_hi = bound_at(hi)?;
            doublings += 1;
            if doublings > 80 {
                return Err(Error::NonConvergence {
                    value: b_hi.as_f64(),
                    abs_error: f64::INFINITY,
                    evaluations: doublings,
                });
            }
        }
        let mut lo = if doublings == 0 { T::zero() } else { hi / T::lit(2.0) };
        for _ in 0..10 {
            let mid = (lo + hi) / T::lit(2.0);
            let b = bound_at(mid)?;
            if b <= tol {
                hi = mid;
                b_hi = b;
            } else {
                lo = mid;
            }
        }
        Ok(built(hi, false, b_hi, z, f))
    }

    /// Level of `Gamma` at which the series is cut.
    pub fn stop_level(&self) -> T {
        self.stop
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<PathSample<T>> {
        let limit = self.f.right_support() * self.horizon;
        let mut pts: Vec<(T, T)> = Vec::new();
        let mut gamma = T::zero();
        loop {
            gamma += rng.exp1::<T>();
            if gamma > self.stop {
                break;
            }
            let (z, psi) = self.z.sample_with_psi(rng)?;
            let p = gamma * psi / self.c_pair;
            if p <= limit {
                pts.push((p, z));
            }
        }
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let (jump_times, jump_values) = pts.into_iter().unzip();
        Ok(PathSample {
            jump_times,
            jump_values,
            horizon: self.horizon,
            kernel: Kernel::Distribution(self.f.clone()),
            exact: self.exact,
            truncation_error_bound: self.bound,
        })
    }
}

pub fn sample_h_lepage<T: Real>(model: &IdtModel<T>, horizon: T, tol: T, rng: &mut RngStream) -> Result<PathSample<T>> {
    LepageSampler::new(model, horizon, tol)?.sample(rng)
}

/// Draws of the two-part decomposition `H_{t+x} - H_t = X_1 + X_2`, where
/// `X_2` collects the contribution of jumps of `L` before `u_F t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IncrementSample<T> {
    pub h_t: T,
    pub h_tx: T,
    pub x1: T,
    pub x2: T,
    /// `L_{u_F t}`.
    pub l_uf_t: T,
}

pub fn sample_increment<T: Real>(model: &IdtModel<T>, t: T, x: T, rng: &mut RngStream) -> Result<IncrementSample<T>> {
    let f = model.distribution();
    let uf = f.right_support();
    if !uf.is_finite() {
        return Err(Error::UnboundedSupport);
    }
    if !(t > T::zero() && x >= T::zero() && (t + x).is_finite()) {
        return Err(invalid("need t > 0 and x >= 0"));
    }
    let l = sample_levy_path_cp(model.levy(), uf * (t + x), rng)?;
    let cut = uf * t;
    let mut before_t = T::zero();
    let mut before_tx = T::zero();
    let mut after = T::zero();
    let mut l_cut = T::zero();
    for (&p, &w) in l.jump_times.iter().zip(&l.jump_values) {
        let g = T::mul0(w, f.neg_log_left_limit(p / (t + x)));
        if p <= cut {
            before_t += T::mul0(w, f.neg_log_left_limit(p / t));
            before_tx += g;
            l_cut += w;
        } else {
            after += g;
        }
    }
    Ok(IncrementSample {
        h_t: before_t,
        h_tx: before_tx + after,
        x1: after,
        x2: before_tx - before_t,
        l_uf_t: l_cut,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::{DistributionF, LevyMeasure};
    use crate::idt::check_admissible;

    fn linear_model(levy: LevyMeasure<f64>) -> IdtModel<f64> {
        let f = DistributionF::builder("linear", |x: f64| x.clamp(0.0, 1.0))
            .support(0.0, 1.0)
            .mean(0.5)
            .neg_log_cdf(|x: f64| if x <= 0.0 { f64::INFINITY } else if x >= 1.0 { 0.0 } else { -x.ln() })
            .psi(|y: f64| y / (y + 1.0))
            .build()
            .unwrap();
        IdtModel::new(check_admissible(&f, &levy.into()).unwrap()).unwrap()
    }

    #[test]
    fn step_path_counts_poisson() {
        let l: BernsteinFunction<f64> = LevyMeasure::standard_poisson().into();
        let rng = RngStream::new(3);
        let n = 4000;
        let mean = (0..n)
            .map(|i| sample_levy_path_cp(&l, 2.0, &mut rng.substream(i)).unwrap().eval(2.0))
            .sum::<f64>()
            / n as f64;
        assert!((mean - 2.0).abs() < 4.0 * (2.0f64 / n as f64).sqrt());
    }

    #[test]
    fn direct_mean_matches_laplace_slope() {
        // E[H_t] = t Psi_L'(0) Psi_F'(0) = t * 1 * 1 for the uniform F and unit exp jumps
        let m = linear_model(LevyMeasure::exponential(1.0, 1.0).unwrap());
        let s = DirectSampler::new(&m, 1.0, 1e-8).unwrap();
        assert!(s.is_exact());
        let rng = RngStream::new(11);
        let n = 4000;
        let v: Vec<f64> = (0..n).map(|i| s.sample(&mut rng.substream(i)).unwrap().eval(1.0)).collect();
        let mean = v.iter().sum::<f64>() / n as f64;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 4.0 * (var / n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn z_strategies_agree_on_mean() {
        let nu = LevyMeasure::exponential(1.0, 1.0).unwrap();
        let m = linear_model(nu);
        let a = ZSampler::new(&m).unwrap();
        assert_eq!(a.strategy(), ZStrategy::RejectBounded);
        let b = ZSampler::tabulated(&m).unwrap();
        assert_eq!(b.strategy(), ZStrategy::Table);
        // E[1/Psi_F(Z)] = |nu| / Psi_H(1)
        let target = 1.0 / m.psi_h1();
        let mut rng = RngStream::new(5);
        let n = 20_000;
        for s in [&a, &b] {
            let est = (0..n).map(|_| 1.0 / s.sample_with_psi(&mut rng).unwrap().1).sum::<f64>() / n as f64;
            assert!((est - target).abs() < 0.05 * target, "{est} vs {target}");
        }
    }

    #[test]
    fn lepage_exact_stop_for_point_mass() {
        let m = linear_model(LevyMeasure::standard_poisson());
        let s = LepageSampler::new(&m, 1.0, 1e-6).unwrap();
        assert!(s.is_exact());
        let mut rng = RngStream::new(8);
        let p = s.sample(&mut rng).unwrap();
        assert!(p.jump_times().windows(2).all(|w| w[0] <= w[1]));
        assert!(p.jump_times().iter().all(|&t| t <= 1.0));
    }

    #[test]
    fn increment_parts_add_up() {
        let m = linear_model(LevyMeasure::exponential(2.0, 1.0).unwrap());
        let mut rng = RngStream::new(1);
        for _ in 0..200 {
            let s = sample_increment(&m, 0.7, 0.4, &mut rng).unwrap();
            assert!((s.x1 + s.x2 - (s.h_tx - s.h_t)).abs() < 1e-12 * (1.0 + s.h_tx));
            assert!(s.x1 >= 0.0);
        }
    }
}
