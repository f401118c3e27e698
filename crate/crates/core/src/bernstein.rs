//! Distribution functions, Bernstein functions, Levy measures and Stieltjes
//! measures, together with the bijections between them.
//!
//! Measures are represented by their survival functions and generalized
//! inverses. The killing atom is the value `+inf` in jump samples.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{
    bisect_inverse_strict, first_true, probe_grid, Direction, MonotoneFn, Quadrature, RealFn,
};
use crate::real::Real;
use crate::rng::RngStream;

pub type PsiFn<T> = Arc<dyn Fn(T) -> Result<T> + Send + Sync>;
pub type Sampler<T> = Arc<dyn Fn(&mut RngStream) -> T + Send + Sync>;
/// Sampler parameterized by an exponent `z > 0`.
pub type PowerSampler<T> = Arc<dyn Fn(T, &mut RngStream) -> T + Send + Sync>;

fn sorted_finite<T: Real>(mut v: Vec<T>) -> Vec<T> {
    v.retain(|x| x.is_finite() && *x > T::zero());
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    v
}

#[inline]
pub(crate) fn neg_ln<T: Real>(p: T) -> T {
    if p <= T::zero() {
        T::infinity()
    } else if p >= T::one() {
        T::zero()
    } else {
        -p.ln()
    }
}

/// A distribution function on `[0, inf)` with finite positive mean.
#[derive(Clone)]
pub struct DistributionF<T> {
    label: String,
    cdf: RealFn<T>,
    neg_log_cdf: RealFn<T>,
    neg_log_left: RealFn<T>,
    left_limit: RealFn<T>,
    quantile: RealFn<T>,
    mean: T,
    left_support: T,
    right_support: T,
    breakpoints: Vec<T>,
    psi: Option<PsiFn<T>>,
    psi_closed: bool,
    neg_log_mean: Option<T>,
    power_sampler: Option<PowerSampler<T>>,
    size_biased: Option<PowerSampler<T>>,
    quad: Quadrature<T>,
}

/// Builder for [`DistributionF`]. Only the cdf is mandatory.
pub struct DistributionBuilder<T> {
    label: String,
    cdf: RealFn<T>,
    neg_log_cdf: Option<RealFn<T>>,
    neg_log_left: Option<RealFn<T>>,
    left_limit: Option<RealFn<T>>,
    quantile: Option<RealFn<T>>,
    mean: Option<T>,
    support: (T, T),
    breakpoints: Vec<T>,
    psi: Option<(PsiFn<T>, bool)>,
    neg_log_mean: Option<T>,
    power_sampler: Option<PowerSampler<T>>,
    size_biased: Option<PowerSampler<T>>,
}

impl<T: Real> DistributionBuilder<T> {
    pub fn left_limit(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.left_limit = Some(Arc::new(f));
        self
    }

    pub fn quantile(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.quantile = Some(Arc::new(f));
        self
    }

    /// `-log F(x)` evaluated directly, for accuracy where `F` is close to one.
    pub fn neg_log_cdf(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.neg_log_cdf = Some(Arc::new(f));
        self
    }

    /// `-log F(x-)`.
    pub fn neg_log_left_limit(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.neg_log_left = Some(Arc::new(f));
        self
    }

    pub fn mean(mut self, m: T) -> Self {
        self.mean = Some(m);
        self
    }

    /// Left and right end points of the support of `dF`.
    pub fn support(mut self, lo: T, hi: T) -> Self {
        self.support = (lo, hi);
        self
    }

    /// Points where the cdf is not smooth; used to split quadratures.
    pub fn breakpoints(mut self, b: Vec<T>) -> Self {
        self.breakpoints = b;
        self
    }

    /// Closed form of `Psi_F`.
    pub fn psi(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.psi = Some((Arc::new(move |x| Ok(f(x))), true));
        self
    }

    pub(crate) fn psi_fallible(mut self, f: PsiFn<T>, closed: bool) -> Self {
        self.psi = Some((f, closed));
        self
    }

    /// Value of `int -log F`, the derivative of `Psi_F` at zero.
    pub fn neg_log_mean(mut self, v: T) -> Self {
        self.neg_log_mean = Some(v);
        self
    }

    /// Sampler for the law `F^z`.
    pub fn power_sampler(mut self, f: impl Fn(T, &mut RngStream) -> T + Send + Sync + 'static) -> Self {
        self.power_sampler = Some(Arc::new(f));
        self
    }

    /// Sampler for the size-biased law `x dF^z(x) / Psi_F(z)`.
    pub fn size_biased_sampler(mut self, f: impl Fn(T, &mut RngStream) -> T + Send + Sync + 'static) -> Self {
        self.size_biased = Some(Arc::new(f));
        self
    }

    pub fn build(self) -> Result<DistributionF<T>> {
        let (lo, hi) = self.support;
        if !(lo >= T::zero() && hi > T::zero() && lo <= hi) || lo.is_infinite() {
            return Err(Error::NotInF(format!("bad support [{lo}, {hi}]")));
        }
        let cdf = self.cdf.clone();
        {
            let f = MonotoneFn::from_arc(Direction::Increasing, T::zero(), hi, cdf.clone());
            if !f.spot_check(64) {
                return Err(Error::NotInF(format!("{}: cdf is not monotone", self.label)));
            }
            for x in probe_grid(T::zero(), hi, 32) {
                let v = cdf(x);
                if !(v >= T::zero() && v <= T::one()) {
                    return Err(Error::NotInF(format!("{}: cdf({x}) = {v}", self.label)));
                }
            }
        }
        let quantile = match self.quantile {
            Some(q) => q,
            None => {
                let c = cdf.clone();
                Arc::new(move |p: T| {
                    if p <= T::zero() {
                        return lo;
                    }
                    first_true(|x| c(x) >= p, lo, hi)
                }) as RealFn<T>
            }
        };
        let neg_log_cdf = self.neg_log_cdf.unwrap_or_else(|| {
            let c = cdf.clone();
            Arc::new(move |x| neg_ln(c(x)))
        });
        let neg_log_left = match (self.neg_log_left, &self.left_limit) {
            (Some(f), _) => f,
            (None, Some(ll)) => {
                let ll = ll.clone();
                Arc::new(move |x| neg_ln(ll(x)))
            }
            (None, None) => neg_log_cdf.clone(),
        };
        let left_limit = self.left_limit.unwrap_or_else(|| cdf.clone());
        let mut breakpoints = self.breakpoints;
        breakpoints.push(lo);
        breakpoints.push(hi);
        let breakpoints = sorted_finite(breakpoints);
        let (psi, psi_closed) = match self.psi {
            Some((p, c)) => (Some(p), c),
            None => (None, false),
        };
        let mut out = DistributionF {
            label: self.label,
            cdf,
            neg_log_cdf,
            neg_log_left,
            left_limit,
            quantile,
            mean: T::nan(),
            left_support: lo,
            right_support: hi,
            breakpoints,
            psi,
            psi_closed,
            neg_log_mean: self.neg_log_mean,
            power_sampler: self.power_sampler,
            size_biased: self.size_biased,
            quad: Quadrature::default(),
        };
        let mean = match self.mean {
            Some(m) => m,
            None => out.tail_integral_quadrature(T::one())?,
        };
        if !(mean > T::zero() && mean.is_finite()) {
            return Err(Error::NotInF(format!("{}: mean {mean} not in (0, inf)", out.label)));
        }
        out.mean = mean;
        if out.quad.tail_scale == T::one() {
            out.quad = out.quad.with_tail_scale(mean);
        }
        Ok(out)
    }
}

impl<T: Real> DistributionF<T> {
    pub fn builder(label: impl Into<String>, cdf: impl Fn(T) -> T + Send + Sync + 'static) -> DistributionBuilder<T> {
        Self::builder_arc(label, Arc::new(cdf))
    }

    pub fn builder_arc(label: impl Into<String>, cdf: RealFn<T>) -> DistributionBuilder<T> {
        DistributionBuilder {
            label: label.into(),
            cdf,
            neg_log_cdf: None,
            neg_log_left: None,
            left_limit: None,
            quantile: None,
            mean: None,
            support: (T::zero(), T::infinity()),
            breakpoints: Vec::new(),
            psi: None,
            neg_log_mean: None,
            power_sampler: None,
            size_biased: None,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn cdf(&self, x: T) -> T {
        if x < T::zero() {
            T::zero()
        } else if x.is_infinite() {
            T::one()
        } else {
            (self.cdf)(x)
        }
    }

    /// `-log F(x)`.
    #[inline]
    pub fn neg_log_cdf(&self, x: T) -> T {
        if x < T::zero() {
            T::infinity()
        } else if x.is_infinite() {
            T::zero()
        } else {
            (self.neg_log_cdf)(x)
        }
    }

    /// `-log F(x-)`, infinite for `x <= 0`.
    #[inline]
    pub fn neg_log_left_limit(&self, x: T) -> T {
        if x <= T::zero() {
            T::infinity()
        } else if x.is_infinite() {
            T::zero()
        } else {
            (self.neg_log_left)(x)
        }
    }

    /// `1 - F(x)^y`.
    #[inline]
    pub fn one_minus_power(&self, x: T, y: T) -> T {
        let n = self.neg_log_cdf(x);
        if n.is_infinite() {
            T::one()
        } else {
            -(-y * n).exp_m1()
        }
    }

    /// `F(x-)`.
    #[inline]
    pub fn left_limit(&self, x: T) -> T {
        if x <= T::zero() {
            T::zero()
        } else if x.is_infinite() {
            T::one()
        } else {
            (self.left_limit)(x)
        }
    }

    /// Generalized inverse `F^{-1}(p) = inf{x : F(x) >= p}`.
    #[inline]
    pub fn quantile(&self, p: T) -> T {
        (self.quantile)(p)
    }

    /// `F^{-1}(e^{-v})`, evaluated through `-log F` when `e^{-v}` is too close
    /// to one for the quantile to resolve.
    pub fn quantile_neg_log(&self, v: T) -> T {
        if !(v > T::zero()) {
            return self.right_support;
        }
        if v >= T::lit(1e-3) {
            return self.quantile((-v).exp());
        }
        let lo = self.quantile((-T::lit(1e-3)).exp());
        first_true(|x| self.neg_log_cdf(x) <= v, lo, self.right_support)
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    pub fn left_support(&self) -> T {
        self.left_support
    }

    /// `u_F`, the right end point of the support.
    pub fn right_support(&self) -> T {
        self.right_support
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn has_closed_psi(&self) -> bool {
        self.psi_closed
    }

    pub fn has_size_biased_sampler(&self) -> bool {
        self.size_biased.is_some()
    }

    pub fn quadrature(&self) -> Quadrature<T> {
        self.quad
    }

    /// `Psi_F(x) = int (1 - F(s)^x) ds`, closed form when registered.
    pub fn psi(&self, x: T) -> Result<T> {
        if x <= T::zero() {
            return Ok(T::zero());
        }
        if x.is_infinite() {
            return Ok(self.right_support);
        }
        match &self.psi {
            Some(p) => p(x),
            None => self.psi_quadrature(x),
        }
    }

    /// `Psi_F(x)` by quadrature, ignoring any closed form.
    pub fn psi_quadrature(&self, x: T) -> Result<T> {
        if x <= T::zero() {
            return Ok(T::zero());
        }
        if x.is_infinite() {
            return Ok(self.right_support);
        }
        self.tail_integral_quadrature(x)
    }

    fn tail_integral_quadrature(&self, x: T) -> Result<T> {
        let f = |s: T| self.one_minus_power(s, x);
        let q = self.quad.with_tail_scale(if self.mean.is_finite() { self.mean / x.max(T::one()) } else { T::one() });
        Ok(q.integrate_with_breaks(f, T::zero(), self.right_support, &self.breakpoints)?.value)
    }

    /// `Psi_F'(0) = int -log F(s) ds`, possibly infinite.
    ///
    /// Uses the registered value if present, otherwise quadrature; a
    /// quadrature that fails to converge is reported as infinite.
    pub fn psi_derivative_at_zero(&self) -> T {
        if let Some(v) = self.neg_log_mean {
            return v;
        }
        if self.left_support > T::zero() {
            return T::infinity();
        }
        let f = |s: T| self.neg_log_cdf(s);
        match self
            .quad
            .with_max_intervals(600)
            .integrate_with_breaks(f, T::zero(), self.right_support, &self.breakpoints)
        {
            Ok(r) => r.value,
            Err(_) => T::infinity(),
        }
    }

    /// Draw from `F^z` (the maximum of `z` iid copies when `z` is an integer).
    pub fn sample_power(&self, z: T, rng: &mut RngStream) -> T {
        if z.is_infinite() {
            return self.right_support;
        }
        match &self.power_sampler {
            Some(s) => s(z, rng),
            None => {
                let u: T = rng.uniform();
                self.quantile(u.powf(T::one() / z))
            }
        }
    }

    /// Draw from the size-biased law `x dF^z(x) / Psi_F(z)`.
    pub fn sample_size_biased(&self, z: T, rng: &mut RngStream) -> Result<T> {
        match &self.size_biased {
            Some(s) => Ok(s(z, rng)),
            None => Err(Error::MSamplerUnavailable(self.label.clone())),
        }
    }

    /// The distribution function `x -> F(c x)`.
    pub fn rescaled(&self, c: T) -> DistributionF<T> {
        if c == T::one() {
            return self.clone();
        }
        let inv = T::one() / c;
        let cdf = self.cdf.clone();
        let nlc = self.neg_log_cdf.clone();
        let nll = self.neg_log_left.clone();
        let ll = self.left_limit.clone();
        let q = self.quantile.clone();
        let psi = self.psi.clone().map(|p| Arc::new(move |x: T| p(x).map(|v| v * inv)) as PsiFn<T>);
        let ps = self.power_sampler.clone().map(|s| Arc::new(move |z: T, r: &mut RngStream| s(z, r) * inv) as PowerSampler<T>);
        let sb = self.size_biased.clone().map(|s| Arc::new(move |z: T, r: &mut RngStream| s(z, r) * inv) as PowerSampler<T>);
        DistributionF {
            label: self.label.clone(),
            cdf: Arc::new(move |x| cdf(c * x)),
            neg_log_cdf: Arc::new(move |x| nlc(c * x)),
            neg_log_left: Arc::new(move |x| nll(c * x)),
            left_limit: Arc::new(move |x| ll(c * x)),
            quantile: Arc::new(move |p| q(p) * inv),
            mean: self.mean * inv,
            left_support: self.left_support * inv,
            right_support: self.right_support * inv,
            breakpoints: self.breakpoints.iter().map(|b| *b * inv).collect(),
            psi,
            psi_closed: self.psi_closed,
            neg_log_mean: self.neg_log_mean.map(|v| v * inv),
            power_sampler: ps,
            size_biased: sb,
            quad: self.quad.with_tail_scale(self.quad.tail_scale * inv),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Registers a closed form of `Psi_F` on an existing distribution.
    pub fn with_closed_psi(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.psi = Some(Arc::new(move |x| Ok(f(x))));
        self.psi_closed = true;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Shape<T> {
    PointMass { mass: T, at: T },
    General,
}

/// A Levy measure on `(0, inf]`, given by `S(t) = nu((t, inf])`.
#[derive(Clone)]
pub struct LevyMeasure<T> {
    label: String,
    shape: Shape<T>,
    survival: RealFn<T>,
    survival_inverse: RealFn<T>,
    inverse_continuous: bool,
    atom: T,
    total: T,
    jump_mean: T,
    support_lower: T,
    y_breaks: Vec<T>,
    jump_sampler: Option<Sampler<T>>,
    size_biased: Option<Sampler<T>>,
    psi: Option<PsiFn<T>>,
    psi_closed: bool,
    quad: Quadrature<T>,
}

/// Builder for a [`LevyMeasure`] from its survival function.
pub struct LevyBuilder<T> {
    label: String,
    survival: RealFn<T>,
    inverse: Option<RealFn<T>>,
    inverse_continuous: bool,
    atom: Option<T>,
    total: Option<T>,
    jump_mean: Option<T>,
    support_lower: Option<T>,
    y_breaks: Vec<T>,
    jump_sampler: Option<Sampler<T>>,
    size_biased: Option<Sampler<T>>,
    psi: Option<(PsiFn<T>, bool)>,
}

impl<T: Real> LevyBuilder<T> {
    /// Closed-form inverse `inf{t : S(t) <= y}`; `continuous` declares it
    /// continuous on `(atom, total)`.
    pub fn inverse(mut self, f: impl Fn(T) -> T + Send + Sync + 'static, continuous: bool) -> Self {
        self.inverse = Some(Arc::new(f));
        self.inverse_continuous = continuous;
        self
    }

    pub fn atom_at_infinity(mut self, a: T) -> Self {
        self.atom = Some(a);
        self
    }

    pub fn total_mass(mut self, m: T) -> Self {
        self.total = Some(m);
        self
    }

    pub fn jump_mean(mut self, m: T) -> Self {
        self.jump_mean = Some(m);
        self
    }

    pub fn support_lower(mut self, m: T) -> Self {
        self.support_lower = Some(m);
        self
    }

    /// Points on the mass axis where the inverse is not smooth.
    pub fn mass_breakpoints(mut self, b: Vec<T>) -> Self {
        self.y_breaks = b;
        self
    }

    pub fn jump_sampler(mut self, f: impl Fn(&mut RngStream) -> T + Send + Sync + 'static) -> Self {
        self.jump_sampler = Some(Arc::new(f));
        self
    }

    /// Sampler of the size-biased law `u nu(du) / int u nu(du)`.
    pub fn size_biased_sampler(mut self, f: impl Fn(&mut RngStream) -> T + Send + Sync + 'static) -> Self {
        self.size_biased = Some(Arc::new(f));
        self
    }

    pub fn psi(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.psi = Some((Arc::new(move |x| Ok(f(x))), true));
        self
    }

    pub(crate) fn psi_fallible(mut self, f: PsiFn<T>, closed: bool) -> Self {
        self.psi = Some((f, closed));
        self
    }

    pub fn build(self) -> Result<LevyMeasure<T>> {
        let s = self.survival.clone();
        let atom = self.atom.unwrap_or_else(|| s(T::infinity()).max(T::zero()));
        let total = self.total.unwrap_or_else(|| s(T::zero()));
        if !(total > T::zero()) || atom < T::zero() || atom > total {
            return Err(Error::InvalidArgument(format!("{}: total mass {total}, atom {atom}", self.label)));
        }
        let mono = MonotoneFn::from_arc(Direction::Decreasing, T::zero(), T::infinity(), s.clone());
        if !mono.spot_check(64) {
            return Err(Error::InvalidArgument(format!("{}: survival function not monotone", self.label)));
        }
        let inverse_continuous = self.inverse.is_some() && self.inverse_continuous;
        let survival_inverse: RealFn<T> = match self.inverse {
            Some(f) => f,
            None => {
                let s2 = s.clone();
                Arc::new(move |y: T| {
                    if y < atom {
                        return T::infinity();
                    }
                    if y >= total {
                        return T::zero();
                    }
                    first_true(|t| s2(t) <= y, T::zero(), T::infinity())
                })
            }
        };
        let mut m = LevyMeasure {
            label: self.label,
            shape: Shape::General,
            survival: s,
            survival_inverse,
            inverse_continuous,
            atom,
            total,
            jump_mean: T::nan(),
            support_lower: T::zero(),
            y_breaks: sorted_finite(self.y_breaks),
            jump_sampler: self.jump_sampler,
            size_biased: self.size_biased,
            psi: None,
            psi_closed: false,
            quad: Quadrature::default(),
        };
        if let Some((p, c)) = self.psi {
            m.psi = Some(p);
            m.psi_closed = c;
        }
        if m.jump_sampler.is_none() && total.is_finite() {
            let inv = m.survival_inverse.clone();
            m.jump_sampler = Some(Arc::new(move |r: &mut RngStream| {
                let u: T = r.uniform();
                inv(u * total)
            }));
        }
        // int_0^1 nu((t, inf)) dt must be finite
        let small = m.quad.with_max_intervals(800).integrate(|t| (m.survival(t) - atom).max(T::zero()), T::zero(), T::one());
        match small {
            Ok(r) if r.value.is_finite() => {}
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "{}: int min(u, 1) nu(du) is not finite",
                    m.label
                )))
            }
        }
        m.jump_mean = match self.jump_mean {
            Some(v) => v,
            None if atom > T::zero() => T::infinity(),
            None => m
                .quad
                .with_max_intervals(800)
                .integrate(|t| m.survival(t), T::zero(), T::infinity())
                .map(|r| r.value)
                .unwrap_or(T::infinity()),
        };
        m.support_lower = match self.support_lower {
            Some(v) => v,
            None => {
                if total.is_finite() {
                    (m.survival_inverse)(total * (T::one() - T::epsilon())).max(T::zero())
                } else {
                    T::zero()
                }
            }
        };
        Ok(m)
    }
}

impl<T: Real> LevyMeasure<T> {
    pub fn builder(label: impl Into<String>, survival: impl Fn(T) -> T + Send + Sync + 'static) -> LevyBuilder<T> {
        Self::builder_arc(label, Arc::new(survival))
    }

    pub fn builder_arc(label: impl Into<String>, survival: RealFn<T>) -> LevyBuilder<T> {
        LevyBuilder {
            label: label.into(),
            survival,
            inverse: None,
            inverse_continuous: false,
            atom: None,
            total: None,
            jump_mean: None,
            support_lower: None,
            y_breaks: Vec::new(),
            jump_sampler: None,
            size_biased: None,
            psi: None,
        }
    }

    /// `mass * delta_at`; `at = inf` gives a pure killing measure.
    pub fn point_mass(mass: T, at: T) -> Result<Self> {
        if !(mass > T::zero() && mass.is_finite() && at > T::zero()) {
            return Err(Error::InvalidArgument(format!("point mass {mass} at {at}")));
        }
        let atom = if at.is_infinite() { mass } else { T::zero() };
        let psi: PsiFn<T> = if at.is_infinite() {
            Arc::new(move |x: T| Ok(if x > T::zero() { mass } else { T::zero() }))
        } else {
            Arc::new(move |x: T| Ok(-mass * (-x * at).exp_m1()))
        };
        Ok(LevyMeasure {
            label: if at.is_infinite() { format!("killing({mass})") } else { format!("{mass}*delta({at})") },
            shape: Shape::PointMass { mass, at },
            survival: Arc::new(move |t| if t < at || at.is_infinite() { mass } else { T::zero() }),
            survival_inverse: Arc::new(move |y| if y < mass { at } else { T::zero() }),
            inverse_continuous: true,
            atom,
            total: mass,
            jump_mean: T::mul0(mass, at),
            support_lower: at,
            y_breaks: vec![],
            jump_sampler: Some(Arc::new(move |_| at)),
            size_biased: if at.is_finite() { Some(Arc::new(move |_| at)) } else { None },
            psi: Some(psi),
            psi_closed: true,
            quad: Quadrature::default(),
        })
    }

    /// Standard Poisson process: unit mass at one.
    pub fn standard_poisson() -> Self {
        Self::point_mass(T::one(), T::one()).expect("valid")
    }

    pub fn killing(rate: T) -> Result<Self> {
        Self::point_mass(rate, T::infinity())
    }

    /// Compound Poisson with intensity `beta` and Exp(`rate`) jumps.
    pub fn exponential(beta: T, rate: T) -> Result<Self> {
        if !(beta > T::zero() && beta.is_finite() && rate > T::zero() && rate.is_finite()) {
            return Err(Error::InvalidArgument(format!("exponential jumps: beta {beta}, rate {rate}")));
        }
        Self::builder(format!("exp-cp({beta},{rate})"), move |t: T| beta * (-rate * t).exp())
            .inverse(
                move |y: T| {
                    if y >= beta {
                        T::zero()
                    } else if y <= T::zero() {
                        T::infinity()
                    } else {
                        (beta / y).ln() / rate
                    }
                },
                true,
            )
            .atom_at_infinity(T::zero())
            .total_mass(beta)
            .jump_mean(beta / rate)
            .support_lower(T::zero())
            .jump_sampler(move |r| r.exp1::<T>() / rate)
            .size_biased_sampler(move |r| (r.exp1::<T>() + r.exp1::<T>()) / rate)
            .psi(move |x| beta * x / (x + rate))
            .build()
    }

    /// Compound Poisson with intensity `beta` and Uniform(0, `upper`) jumps.
    pub fn uniform_jumps(beta: T, upper: T) -> Result<Self> {
        if !(beta > T::zero() && beta.is_finite() && upper > T::zero() && upper.is_finite()) {
            return Err(Error::InvalidArgument(format!("uniform jumps: beta {beta}, upper {upper}")));
        }
        Self::builder(format!("uniform-cp({beta},{upper})"), move |t: T| {
            beta * (T::one() - t / upper).max(T::zero())
        })
        .inverse(move |y: T| upper * (T::one() - y / beta).max(T::zero()), true)
        .atom_at_infinity(T::zero())
        .total_mass(beta)
        .jump_mean(beta * upper / T::lit(2.0))
        .support_lower(T::zero())
        .jump_sampler(move |r| upper * r.uniform::<T>())
        .size_biased_sampler(move |r| upper * r.uniform::<T>().sqrt())
        .psi(move |x| {
            let bx = upper * x;
            if bx < T::lit(1e-8) {
                beta * bx / T::lit(2.0)
            } else {
                beta * (T::one() + bx.neg().exp_m1() / bx)
            }
        })
        .build()
    }

    /// Compound Poisson with intensity `beta` and Pareto(`alpha`, `lower`)
    /// jumps, i.e. `S(t) = beta (lower / t)^alpha` for `t >= lower`.
    pub fn pareto(beta: T, alpha: T, lower: T) -> Result<Self> {
        if !(beta > T::zero() && alpha > T::zero() && lower > T::zero()) {
            return Err(Error::InvalidArgument("pareto parameters must be positive".into()));
        }
        let jm = if alpha > T::one() {
            beta * alpha * lower / (alpha - T::one())
        } else {
            T::infinity()
        };
        Self::builder(format!("pareto-cp({beta},{alpha},{lower})"), move |t: T| {
            if t < lower {
                beta
            } else {
                beta * (lower / t).powf(alpha)
            }
        })
        .inverse(
            move |y: T| {
                if y >= beta {
                    T::zero()
                } else if y <= T::zero() {
                    T::infinity()
                } else {
                    lower * (beta / y).powf(T::one() / alpha)
                }
            },
            true,
        )
        .atom_at_infinity(T::zero())
        .total_mass(beta)
        .jump_mean(jm)
        .support_lower(lower)
        .jump_sampler(move |r| lower * r.uniform::<T>().powf(-T::one() / alpha))
        .build()
    }

    /// Stable measure with `S(t) = scale * t^{-theta}`, `theta` in (0, 1).
    pub fn stable(theta: T, scale: T) -> Result<Self> {
        if !(theta > T::zero() && theta < T::one() && scale > T::zero()) {
            return Err(Error::InvalidArgument(format!("stable: theta {theta}, scale {scale}")));
        }
        let g = T::lit(crate::special::gamma(1.0 - theta.as_f64()));
        Self::builder(format!("stable({theta},{scale})"), move |t: T| {
            if t <= T::zero() {
                T::infinity()
            } else {
                scale * t.powf(-theta)
            }
        })
        .inverse(
            move |y: T| {
                if y <= T::zero() {
                    T::infinity()
                } else {
                    (scale / y).powf(T::one() / theta)
                }
            },
            true,
        )
        .atom_at_infinity(T::zero())
        .total_mass(T::infinity())
        .jump_mean(T::infinity())
        .support_lower(T::zero())
        .psi(move |x| scale * g * x.powf(theta))
        .build()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `nu((t, inf])`; `survival(inf)` is the killing atom.
    #[inline]
    pub fn survival(&self, t: T) -> T {
        if t.is_infinite() {
            self.atom
        } else {
            (self.survival)(t)
        }
    }

    /// `inf{t : S(t) <= y}`, equal to `inf` below the atom.
    #[inline]
    pub fn survival_inverse(&self, y: T) -> T {
        if y < self.atom {
            T::infinity()
        } else {
            (self.survival_inverse)(y)
        }
    }

    /// `inf{t : S(t) < y}`, the left limit of the inverse at `y`.
    pub fn survival_inverse_left(&self, y: T) -> T {
        if self.inverse_continuous || matches!(self.shape, Shape::PointMass { .. }) {
            return self.survival_inverse(y);
        }
        if y <= self.atom {
            return T::infinity();
        }
        let s = self.survival.clone();
        let g = MonotoneFn::from_arc(Direction::Decreasing, T::zero(), T::infinity(), s);
        bisect_inverse_strict(&g, y.min(self.total)).unwrap_or(T::zero())
    }

    pub fn atom_at_infinity(&self) -> T {
        self.atom
    }

    pub fn total_mass(&self) -> T {
        self.total
    }

    /// `int u nu(du)`, infinite when the measure has an atom at infinity.
    pub fn jump_mean(&self) -> T {
        self.jump_mean
    }

    /// Infimum of the support of `nu`.
    pub fn support_lower(&self) -> T {
        self.support_lower
    }

    pub fn is_finite(&self) -> bool {
        self.total.is_finite()
    }

    /// `Some((mass, location))` for a single point mass.
    pub fn as_point_mass(&self) -> Option<(T, T)> {
        match self.shape {
            Shape::PointMass { mass, at } => Some((mass, at)),
            Shape::General => None,
        }
    }

    pub fn has_closed_psi(&self) -> bool {
        self.psi_closed
    }

    pub fn has_size_biased_sampler(&self) -> bool {
        self.size_biased.is_some()
    }

    pub fn has_jump_sampler(&self) -> bool {
        self.jump_sampler.is_some()
    }

    pub fn mass_breakpoints(&self) -> &[T] {
        &self.y_breaks
    }

    /// Draw from `nu / |nu|`; `inf` marks a killed jump.
    pub fn sample_jump(&self, rng: &mut RngStream) -> Result<T> {
        match &self.jump_sampler {
            Some(s) => Ok(s(rng)),
            None => Err(Error::NotCompoundPoisson),
        }
    }

    pub fn sample_size_biased(&self, rng: &mut RngStream) -> Option<T> {
        self.size_biased.as_ref().map(|s| s(rng))
    }

    /// `int_{(0, inf]} g(u) nu(du)` through the quantile representation
    /// `atom g(inf) + int_atom^total g(S^{-1}(y)) dy`.
    pub fn integrate(&self, g: impl Fn(T) -> T, quad: &Quadrature<T>) -> Result<T> {
        if let Shape::PointMass { mass, at } = self.shape {
            return Ok(T::mul0(mass, g(at)));
        }
        let mut acc = T::zero();
        if self.atom > T::zero() {
            acc += T::mul0(self.atom, g(T::infinity()));
        }
        if self.total > self.atom {
            let q = if self.total.is_finite() {
                *quad
            } else {
                quad.with_tail_scale(T::one().max(self.atom))
            };
            let r = q.integrate_with_breaks(
                |y| {
                    let u = self.survival_inverse(y);
                    g(u)
                },
                self.atom,
                self.total,
                &self.y_breaks,
            )?;
            acc += r.value;
        }
        Ok(acc)
    }

    /// `Psi(x) = int (1 - e^{-x u}) nu(du)`, closed form when registered.
    pub fn psi(&self, x: T) -> Result<T> {
        if x <= T::zero() {
            return Ok(T::zero());
        }
        if x.is_infinite() {
            return Ok(self.total);
        }
        match &self.psi {
            Some(p) => p(x),
            None => self.psi_quadrature(x),
        }
    }

    pub fn psi_quadrature(&self, x: T) -> Result<T> {
        if x <= T::zero() {
            return Ok(T::zero());
        }
        self.integrate(
            |u| {
                if u.is_infinite() {
                    T::one()
                } else {
                    -(-x * u).exp_m1()
                }
            },
            &self.quad,
        )
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Bernstein function `Psi(x) = int (1 - e^{-x u}) nu(du)` of a driftless,
/// possibly killed, Levy subordinator.
#[derive(Clone)]
pub struct BernsteinFunction<T> {
    levy: LevyMeasure<T>,
}

impl<T: Real> BernsteinFunction<T> {
    pub fn new(levy: LevyMeasure<T>) -> Self {
        BernsteinFunction { levy }
    }

    pub fn eval(&self, x: T) -> Result<T> {
        self.levy.psi(x)
    }

    pub fn levy(&self) -> &LevyMeasure<T> {
        &self.levy
    }

    pub fn bounded(&self) -> bool {
        self.levy.is_finite()
    }

    pub fn killing(&self) -> bool {
        self.levy.atom > T::zero()
    }

    pub fn derivative_at_zero(&self) -> T {
        self.levy.jump_mean
    }

    /// `lim_{x -> inf} Psi(x)`, the total mass of the Levy measure.
    pub fn limit_at_infinity(&self) -> T {
        self.levy.total
    }

    pub fn label(&self) -> &str {
        &self.levy.label
    }
}

impl<T: Real> From<LevyMeasure<T>> for BernsteinFunction<T> {
    fn from(l: LevyMeasure<T>) -> Self {
        BernsteinFunction::new(l)
    }
}

/// Stieltjes measure `rho`, given by `g(x) = rho((0, 1/x))` and its inverse.
#[derive(Clone)]
pub struct StieltjesMeasure<T> {
    label: String,
    g: RealFn<T>,
    g_inverse: RealFn<T>,
    total: T,
    tail: Option<RealFn<T>>,
    psi: Option<RealFn<T>>,
    breaks: Vec<T>,
    quad: Quadrature<T>,
}

impl<T: Real> StieltjesMeasure<T> {
    /// Builds the measure and checks `int (1 + u)^{-1} rho(du) < inf`.
    pub fn new(
        label: impl Into<String>,
        g: impl Fn(T) -> T + Send + Sync + 'static,
        g_inverse: impl Fn(T) -> T + Send + Sync + 'static,
        total_mass: T,
    ) -> Result<Self> {
        Self::with_kinks(label, g, g_inverse, total_mass, Vec::new())
    }

    /// As [`StieltjesMeasure::new`], with points of `(0, inf)` where the
    /// density of `rho` is singular or vanishes; quadrature splits there.
    pub fn with_kinks(
        label: impl Into<String>,
        g: impl Fn(T) -> T + Send + Sync + 'static,
        g_inverse: impl Fn(T) -> T + Send + Sync + 'static,
        total_mass: T,
        kinks: Vec<T>,
    ) -> Result<Self> {
        let m = StieltjesMeasure {
            label: label.into(),
            g: Arc::new(g),
            g_inverse: Arc::new(g_inverse),
            total: total_mass,
            tail: None,
            psi: None,
            breaks: sorted_finite(kinks),
            quad: Quadrature::default(),
        };
        if !(total_mass >= T::zero()) {
            return Err(Error::InvalidArgument("negative Stieltjes mass".into()));
        }
        // only finiteness is decided here, so an inaccurate finite value is enough
        match m.psi_quadrature(T::one()) {
            Ok(v) if v.is_finite() => Ok(m),
            Err(Error::NonConvergence { value, abs_error, .. }) if value.is_finite() && abs_error < value.abs() => Ok(m),
            _ => Err(Error::InvalidArgument(format!(
                "{}: int (1+u)^-1 rho(du) is not finite",
                m.label
            ))),
        }
    }

    /// Closed form of `y -> int_y^total g^{-1}(x) dx`.
    pub fn with_tail(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.tail = Some(Arc::new(f));
        self
    }

    /// Closed form of `x -> int x/(x+u) rho(du)`.
    pub fn with_psi(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.psi = Some(Arc::new(f));
        self
    }

    pub fn with_breakpoints(mut self, b: Vec<T>) -> Self {
        self.breaks = sorted_finite(b);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn g(&self, x: T) -> T {
        if x.is_infinite() {
            T::zero()
        } else if x <= T::zero() {
            self.total
        } else {
            (self.g)(x)
        }
    }

    #[inline]
    pub fn g_inverse(&self, y: T) -> T {
        if y >= self.total {
            T::zero()
        } else if y < T::zero() {
            T::infinity()
        } else {
            // at y = 0 this is finite only when rho lives away from zero
            let v = (self.g_inverse)(y);
            if v.is_nan() {
                T::infinity()
            } else {
                v
            }
        }
    }

    pub fn total_mass(&self) -> T {
        self.total
    }

    pub fn has_closed_tail(&self) -> bool {
        self.tail.is_some()
    }

    /// `int_y^total g^{-1}(x) dx`, the expected remainder of the series.
    pub fn tail_integral(&self, y: T) -> Result<T> {
        if y >= self.total {
            return Ok(T::zero());
        }
        if let Some(t) = &self.tail {
            return Ok(t(y));
        }
        Ok(self
            .quad
            .integrate_with_breaks(|x| self.g_inverse(x), y, self.total, &self.breaks)?
            .value)
    }

    /// `int x/(x+u) rho(du)`, closed form when registered.
    pub fn psi(&self, x: T) -> Result<T> {
        if x <= T::zero() {
            return Ok(T::zero());
        }
        match &self.psi {
            Some(p) => Ok(p(x)),
            None => self.psi_quadrature(x),
        }
    }

    /// `int x g(v) / (1 + x v)^2 dv`, obtained by integrating by parts.
    pub fn psi_quadrature(&self, x: T) -> Result<T> {
        if x <= T::zero() {
            return Ok(T::zero());
        }
        let f = |v: T| {
            let w = T::one() + x * v;
            let gv = self.g(v);
            if gv == T::zero() {
                T::zero()
            } else {
                x * gv / (w * w)
            }
        };
        let b: Vec<T> = self.breaks.iter().map(|b| T::one() / *b).collect();
        Ok(self
            .quad
            .with_tail_scale(T::one() / x)
            .integrate_with_breaks(f, T::zero(), T::infinity(), &b)?
            .value)
    }
}

/// `Psi_F` as a Bernstein function; its Levy measure is `nu_F`.
pub fn psi_from_distribution<T: Real>(f: &DistributionF<T>) -> BernsteinFunction<T> {
    BernsteinFunction::new(levy_from_distribution(f))
}

/// `nu_F((t, inf]) = F^{-1}(e^{-t})`, with atom at infinity equal to the
/// left end point of the support and inverse `y -> -log F(y)`.
pub fn levy_from_distribution<T: Real>(f: &DistributionF<T>) -> LevyMeasure<T> {
    let fq = f.clone();
    let fc = f.clone();
    let fp = f.clone();
    let total = f.right_support();
    let atom = f.left_support();
    let support_lower = if total.is_finite() {
        neg_ln(f.left_limit(total))
    } else {
        T::zero()
    };
    let psi: PsiFn<T> = Arc::new(move |x| fp.psi(x));
    let inv: RealFn<T> = Arc::new(move |y: T| fc.neg_log_cdf(y));
    let jump_sampler: Option<Sampler<T>> = if total.is_finite() {
        let inv2 = inv.clone();
        Some(Arc::new(move |r: &mut RngStream| {
            let u: T = r.uniform();
            inv2(u * total)
        }))
    } else {
        None
    };
    LevyMeasure {
        label: format!("levy({})", f.label()),
        shape: Shape::General,
        survival: Arc::new(move |t: T| {
            if t <= T::zero() {
                fq.right_support()
            } else {
                fq.quantile_neg_log(t)
            }
        }),
        survival_inverse: inv,
        inverse_continuous: false,
        atom,
        total,
        jump_mean: f.psi_derivative_at_zero(),
        support_lower,
        y_breaks: f.breakpoints().to_vec(),
        jump_sampler,
        size_biased: None,
        psi: Some(psi),
        psi_closed: f.has_closed_psi(),
        quad: f.quadrature(),
    }
}

/// `F_nu(t) = exp(-S^{-1}(t))` on `[atom, total)`, zero below, one above.
pub fn distribution_from_levy<T: Real>(nu: &LevyMeasure<T>) -> Result<DistributionF<T>> {
    let atom = nu.atom_at_infinity();
    let total = nu.total_mass();
    let n1 = nu.clone();
    let cdf = move |t: T| {
        if t < atom {
            T::zero()
        } else if t >= total {
            T::one()
        } else {
            (-n1.survival_inverse(t)).exp()
        }
    };
    let n2 = nu.clone();
    let left = move |t: T| {
        if t <= atom {
            T::zero()
        } else if t > total {
            T::one()
        } else if t == total {
            (-n2.support_lower()).exp()
        } else {
            (-n2.survival_inverse_left(t)).exp()
        }
    };
    let n3 = nu.clone();
    let quantile = move |p: T| {
        if p <= T::zero() {
            atom
        } else {
            n3.survival(-p.ln())
        }
    };
    let n4 = nu.clone();
    let psi: PsiFn<T> = Arc::new(move |x| n4.psi(x));
    let n6 = nu.clone();
    let nll = move |t: T| {
        if t <= atom {
            T::infinity()
        } else if t > total {
            T::zero()
        } else if t == total {
            n6.support_lower()
        } else {
            n6.survival_inverse_left(t)
        }
    };
    let n5 = nu.clone();
    let nlc = move |t: T| {
        if t < atom {
            T::infinity()
        } else if t >= total {
            T::zero()
        } else {
            n5.survival_inverse(t)
        }
    };
    let mean = nu.psi(T::one())?;
    let mut breaks = nu.mass_breakpoints().to_vec();
    breaks.push(atom);
    breaks.push(total);
    DistributionF::builder(format!("dist({})", nu.label()), cdf)
        .left_limit(left)
        .quantile(quantile)
        .neg_log_cdf(nlc)
        .neg_log_left_limit(nll)
        .support(atom, total)
        .mean(mean)
        .breakpoints(breaks)
        .psi_fallible(psi, nu.has_closed_psi())
        .neg_log_mean(nu.jump_mean())
        .build()
}

/// `rho_F` with `g(x) = nu_F((x, inf])`; requires `F(0) > 0`-type support,
/// i.e. left end point zero.
pub fn stieltjes_from_distribution<T: Real>(f: &DistributionF<T>) -> Result<StieltjesMeasure<T>> {
    if f.left_support() > T::zero() {
        return Err(Error::NotInFhat(f.left_support().as_f64()));
    }
    let fq = f.clone();
    let fc = f.clone();
    let total = f.right_support();
    Ok(StieltjesMeasure::new(
        format!("rho({})", f.label()),
        move |x: T| fq.quantile_neg_log(x),
        move |y: T| fc.neg_log_cdf(y),
        total,
    )?
    .with_breakpoints(f.breakpoints().to_vec()))
}

/// `F_rho(x) = exp(-g^{-1}(x))` for `x < rho((0, inf))`, one above; rejects
/// the degenerate zero measure.
pub fn distribution_from_stieltjes<T: Real>(rho: &StieltjesMeasure<T>) -> Result<DistributionF<T>> {
    let total = rho.total_mass();
    if !(total > T::zero()) {
        return Err(Error::NotInF("zero Stieltjes measure gives a law degenerate at zero".into()));
    }
    let r1 = rho.clone();
    let r2 = rho.clone();
    let r3 = rho.clone();
    let cdf = move |x: T| {
        if x >= total {
            T::one()
        } else if x < T::zero() {
            T::zero()
        } else {
            (-r1.g_inverse(x)).exp()
        }
    };
    let left = move |x: T| {
        if x > total {
            T::one()
        } else if x == total {
            (-r2.g_inverse(total * (T::one() - T::epsilon()))).exp()
        } else {
            (-r2.g_inverse(x)).exp()
        }
    };
    let quantile = move |p: T| {
        if p <= T::zero() {
            T::zero()
        } else {
            r3.g(-p.ln())
        }
    };
    let r4 = rho.clone();
    let nlc = move |x: T| if x >= total { T::zero() } else { r4.g_inverse(x) };
    let mut breaks = rho.breaks.clone();
    breaks.push(total);
    DistributionF::builder(format!("dist({})", rho.label()), cdf)
        .left_limit(left)
        .quantile(quantile)
        .neg_log_cdf(nlc)
        .support(T::zero(), total)
        .breakpoints(breaks)
        .build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn german_linear() -> DistributionF<f64> {
        DistributionF::builder("min(x,1)", |x: f64| x.clamp(0.0, 1.0))
            .support(0.0, 1.0)
            .build()
            .unwrap()
    }

    fn bernoulli() -> DistributionF<f64> {
        let e = (-1.0f64).exp();
        DistributionF::builder("bernoulli", move |x: f64| if x >= 1.0 { 1.0 } else { e })
            .left_limit(move |x| if x > 1.0 { 1.0 } else { e })
            .support(0.0, 1.0)
            .breakpoints(vec![1.0])
            .build()
            .unwrap()
    }

    #[test]
    fn psi_of_bernoulli_is_levy_case() {
        let f = bernoulli();
        for x in [0.5, 1.0, 3.0] {
            let v = f.psi(x).unwrap();
            assert!((v - (1.0 - (-x).exp())).abs() < 1e-12, "{x} {v}");
        }
        assert_eq!(f.psi(0.0).unwrap(), 0.0);
        let nu = levy_from_distribution(&f);
        assert!((nu.support_lower() - 1.0).abs() < 1e-12);
        assert!((nu.jump_mean() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn german_linear_quadrature_matches_closed_form() {
        let f = german_linear();
        for y in [0.1, 1.0, 2.0, 20.0] {
            assert!((f.psi(y).unwrap() - y / (y + 1.0)).abs() < 1e-10);
        }
        assert!((f.mean() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn levy_of_uniform_is_exponential() {
        let f = german_linear();
        let nu = levy_from_distribution(&f);
        for t in [0.1, 1.0, 4.0] {
            assert!((nu.survival(t) - (-t).exp()).abs() < 1e-10);
        }
        let back = distribution_from_levy(&nu).unwrap();
        for i in 0..=100 {
            let x = i as f64 / 80.0;
            assert!((back.cdf(x) - f.cdf(x)).abs() < 1e-10, "{x}");
        }
    }

    #[test]
    fn unit_point_mass_gives_bernoulli() {
        let nu = LevyMeasure::<f64>::standard_poisson();
        let f = distribution_from_levy(&nu).unwrap();
        let e = (-1.0f64).exp();
        assert!((f.cdf(0.3) - e).abs() < 1e-15);
        assert_eq!(f.cdf(1.0), 1.0);
        assert!((f.left_limit(1.0) - e).abs() < 1e-15);
        assert!((f.psi_quadrature(2.0).unwrap() - (1.0 - (-2.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn killing_atom_shifts_support() {
        let nu = LevyMeasure::<f64>::builder("exp+kill", |t: f64| if t.is_infinite() { 0.4 } else { 0.4 + (-t).exp() })
            .build()
            .unwrap();
        assert!((nu.atom_at_infinity() - 0.4).abs() < 1e-15);
        let f = distribution_from_levy(&nu).unwrap();
        assert_eq!(f.cdf(0.39), 0.0);
        assert!(f.cdf(0.41) > 0.0);
        assert!((f.left_support() - 0.4).abs() < 1e-15);
        let back = levy_from_distribution(&f);
        assert!((back.atom_at_infinity() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn exponential_measure_closed_forms() {
        let nu = LevyMeasure::<f64>::exponential(2.0, 1.0).unwrap();
        for x in [0.5, 1.0, 2.0] {
            assert!((nu.psi(x).unwrap() - nu.psi_quadrature(x).unwrap()).abs() < 1e-9);
        }
        assert!((nu.survival_inverse(1.0) - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn stable_psi_quadrature() {
        let nu = LevyMeasure::<f64>::stable(0.5, 1.0).unwrap();
        let c = nu.psi(2.0).unwrap();
        let q = nu.psi_quadrature(2.0).unwrap();
        assert!((c - q).abs() < 1e-7 * c, "{c} {q}");
    }

    #[test]
    fn stieltjes_rejects_positive_left_support() {
        let f = DistributionF::builder("shifted", |x: f64| if x < 0.3 { 0.0 } else { x.min(1.0) })
            .support(0.3, 1.0)
            .breakpoints(vec![0.3])
            .build()
            .unwrap();
        assert!(matches!(stieltjes_from_distribution(&f), Err(Error::NotInFhat(_))));
    }

    #[test]
    fn zero_stieltjes_measure_rejected() {
        let r = StieltjesMeasure::<f64>::new("zero", |_| 0.0, |_| f64::INFINITY, 0.0).unwrap();
        assert!(matches!(distribution_from_stieltjes(&r), Err(Error::NotInF(_))));
    }

    #[test]
    fn stieltjes_round_trip_uniform() {
        let f = german_linear();
        let rho = stieltjes_from_distribution(&f).unwrap();
        assert!((rho.g(1.0) - (-1.0f64).exp()).abs() < 1e-10);
        let back = distribution_from_stieltjes(&rho).unwrap();
        for i in 0..=50 {
            let x = i as f64 / 40.0;
            assert!((back.cdf(x) - f.cdf(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn rescaling() {
        let f = german_linear().rescaled(2.0);
        assert!((f.right_support() - 0.5).abs() < 1e-15);
        assert!((f.psi(1.0).unwrap() - 0.25).abs() < 1e-10);
        assert!((f.cdf(0.25) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn non_monotone_cdf_rejected() {
        let r = DistributionF::builder("bad", |x: f64| (x * 5.0).sin().abs().min(1.0)).support(0.0, 2.0).build();
        assert!(matches!(r, Err(Error::NotInF(_))));
    }

    #[test]
    fn pareto_divergent_mean() {
        let nu = LevyMeasure::<f64>::pareto(2.0, 0.5, 1.0).unwrap();
        assert!(nu.jump_mean().is_infinite());
        assert!((nu.survival(4.0) - 1.0).abs() < 1e-15);
        assert!((nu.survival_inverse(1.0) - 4.0).abs() < 1e-12);
    }
}
