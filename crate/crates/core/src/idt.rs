//! Admissible pairs `(F, L)`, the Laplace exponent `Psi_H`, the stable tail
//! dependence function `ell`, normalization and duality.

use std::cell::RefCell;
use std::sync::Arc;

use crate::bernstein::{
    distribution_from_levy, psi_from_distribution, BernsteinFunction, DistributionF,
    LevyMeasure, Sampler,
};
use crate::error::{Error, Result};
use crate::numerics::{Quadrature, RealFn};
use crate::real::Real;

/// Closed-form `ell` evaluator for the unscaled pair.
pub type EllFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

/// Why a pair was accepted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Certificate<T> {
    /// `L` compound Poisson with finite jump mean.
    CompoundPoissonFiniteMean,
    /// `Psi_F` bounded with finite slope at zero.
    BoundedPsiFiniteSlope,
    /// `Psi_H(1)` computed and finite.
    Value { psi_h1: T },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Admissibility<T> {
    Admissible(Certificate<T>),
    /// The partial sums of `int Psi_F dnu_L` diverge.
    NotAdmissible { partial_sum: T },
}

/// A distribution function `F` paired with a driftless subordinator `L`.
#[derive(Clone)]
pub struct IdtPair<T> {
    f: DistributionF<T>,
    l: BernsteinFunction<T>,
    admissibility: Admissibility<T>,
}

impl<T: Real> IdtPair<T> {
    pub fn distribution(&self) -> &DistributionF<T> {
        &self.f
    }

    pub fn levy(&self) -> &BernsteinFunction<T> {
        &self.l
    }

    pub fn admissibility(&self) -> Admissibility<T> {
        self.admissibility
    }

    pub fn is_admissible(&self) -> bool {
        matches!(self.admissibility, Admissibility::Admissible(_))
    }
}

const DIVERGENCE_CAP: f64 = 1e12;

enum Shells<T> {
    Converged(T),
    Divergent(T),
    Inconclusive(String),
}

fn run_shells<T: Real>(mut shell: impl FnMut(usize) -> Result<T>) -> Shells<T> {
    let cap = T::lit(DIVERGENCE_CAP);
    let mut sum = T::zero();
    let mut prev = T::zero();
    let mut decaying = 0usize;
    let mut flat = 0usize;
    let mut zeros = 0usize;
    for k in 0..400 {
        let d = match shell(k) {
            Ok(v) if v.is_finite() => v.max(T::zero()),
            Ok(v) => return Shells::Divergent(v),
            Err(e) => return Shells::Inconclusive(e.to_string()),
        };
        sum += d;
        if sum > cap {
            return Shells::Divergent(sum);
        }
        if d == T::zero() {
            zeros += 1;
            if zeros >= 4 {
                return Shells::Converged(sum);
            }
            prev = d;
            continue;
        }
        zeros = 0;
        if k > 0 && prev > T::zero() {
            let r = d / prev;
            if r <= T::lit(0.9) {
                decaying += 1;
                flat = 0;
                let tail = d * r / (T::one() - r);
                if decaying >= 6 && tail <= T::lit(1e-13) * sum {
                    return Shells::Converged(sum + tail);
                }
            } else if r >= T::lit(0.999) {
                flat += 1;
                decaying = 0;
                if flat >= 16 {
                    return Shells::Divergent(sum);
                }
            } else {
                decaying = 0;
                flat = 0;
            }
        }
        prev = d;
    }
    Shells::Inconclusive(format!("shell sums neither settled nor diverged (partial {sum})"))
}

/// `int g dnu` on dyadic shells of the mass axis, classifying the outcome.
fn shell_integral<T: Real>(nu: &LevyMeasure<T>, g: &dyn Fn(T) -> T, quad: &Quadrature<T>) -> Shells<T> {
    let a = nu.atom_at_infinity();
    let b = nu.total_mass();
    let mut acc = T::zero();
    if a > T::zero() {
        let v = g(T::infinity());
        if !v.is_finite() {
            return Shells::Divergent(T::infinity());
        }
        acc += a * v;
    }
    let two = T::lit(2.0);
    let piece = |lo: T, hi: T| -> Result<T> {
        Ok(quad
            .integrate_with_breaks(|y| g(nu.survival_inverse(y)), lo, hi, nu.mass_breakpoints())?
            .value)
    };
    let m = if b.is_finite() { a + (b - a) / two } else { a + T::one() };
    let w = m - a;
    // shells accumulating at the atom (large jumps)
    let low = run_shells(|k| {
        let hi = a + w / two.powi(k as i32);
        let lo = a + w / two.powi(k as i32 + 1);
        piece(lo, hi)
    });
    let low = match low {
        Shells::Converged(v) => v,
        other => return other,
    };
    let high = if b.is_finite() {
        let w2 = b - m;
        run_shells(|k| {
            let lo = b - w2 / two.powi(k as i32);
            let hi = b - w2 / two.powi(k as i32 + 1);
            piece(lo, hi)
        })
    } else {
        run_shells(|k| piece(m * two.powi(k as i32), m * two.powi(k as i32 + 1)))
    };
    match high {
        Shells::Converged(v) => Shells::Converged(acc + low + v),
        Shells::Divergent(v) => Shells::Divergent(acc + low + v),
        other => other,
    }
}

/// Decides whether `int Psi_F(y) nu_L(dy) < inf`.
///
/// Fast paths cover compound Poisson `L` with finite jump mean and bounded
/// `Psi_F` with finite slope at zero; everything else goes through a dyadic
/// shell quadrature that either converges, exceeds the cap `1e12`, or shows
/// non-decaying shell contributions.
pub fn check_admissible<T: Real>(f: &DistributionF<T>, l: &BernsteinFunction<T>) -> Result<IdtPair<T>> {
    let nu = l.levy();
    let pair = |adm| IdtPair {
        f: f.clone(),
        l: l.clone(),
        admissibility: adm,
    };
    if let Some((mass, at)) = nu.as_point_mass() {
        let v = if at.is_infinite() { f.right_support() } else { f.psi(at)? };
        let v = T::mul0(mass, v);
        return Ok(pair(if v.is_finite() {
            Admissibility::Admissible(Certificate::Value { psi_h1: v })
        } else {
            Admissibility::NotAdmissible { partial_sum: v }
        }));
    }
    if nu.is_finite() && nu.jump_mean().is_finite() {
        return Ok(pair(Admissibility::Admissible(Certificate::CompoundPoissonFiniteMean)));
    }
    if f.right_support().is_finite() && f.psi_derivative_at_zero().is_finite() {
        return Ok(pair(Admissibility::Admissible(Certificate::BoundedPsiFiniteSlope)));
    }
    let failure = RefCell::new(None);
    let g = |y: T| -> T {
        if y.is_infinite() {
            return f.right_support();
        }
        match f.psi(y) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                T::zero()
            }
        }
    };
    let quad = Quadrature::new(T::lit(1e-6)).with_max_intervals(400);
    let out = shell_integral(nu, &g, &quad);
    if let Some(e) = failure.into_inner() {
        return Err(Error::Inconclusive(e.to_string()));
    }
    match out {
        Shells::Converged(v) => Ok(pair(Admissibility::Admissible(Certificate::Value { psi_h1: v }))),
        Shells::Divergent(v) => Ok(pair(Admissibility::NotAdmissible { partial_sum: v })),
        Shells::Inconclusive(msg) => Err(Error::Inconclusive(msg)),
    }
}

/// Closed forms registered for the unscaled pair.
#[derive(Clone, Default)]
pub struct ClosedForms<T> {
    pub psi_h: Option<RealFn<T>>,
    pub ell: Option<EllFn<T>>,
    /// Sampler of `Psi_F(z) nu_L(dz) / Psi_H(1)`; invariant under rescaling of `F`.
    pub z_sampler: Option<Sampler<T>>,
}

/// An admissible pair with `F` possibly rescaled to `F(c .)`.
#[derive(Clone)]
pub struct IdtModel<T> {
    label: String,
    pair: IdtPair<T>,
    f: DistributionF<T>,
    scale_c: T,
    psi_h1: T,
    normalized: bool,
    closed: ClosedForms<T>,
    outer: Quadrature<T>,
    inner: Quadrature<T>,
}

fn validate_t<T: Real>(t: &[T]) -> Result<Vec<T>> {
    if t.is_empty() {
        return Err(Error::InvalidArgument("empty argument vector".into()));
    }
    let mut out = Vec::with_capacity(t.len());
    for &v in t {
        if !(v >= T::zero()) || !v.is_finite() {
            return Err(Error::InvalidArgument(format!("arguments must be finite and non-negative, got {v}")));
        }
        if v > T::zero() {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("all arguments are zero".into()));
    }
    Ok(out)
}

impl<T: Real> IdtModel<T> {
    pub fn new(pair: IdtPair<T>) -> Result<Self> {
        Self::with_closed_forms(pair, ClosedForms::default())
    }

    pub fn with_closed_forms(pair: IdtPair<T>, closed: ClosedForms<T>) -> Result<Self> {
        if let Admissibility::NotAdmissible { partial_sum } = pair.admissibility {
            return Err(Error::NotAdmissible(format!("partial sum {partial_sum}")));
        }
        let f = pair.f.clone();
        let mut m = IdtModel {
            label: format!("({}, {})", pair.f.label(), pair.l.label()),
            pair,
            f,
            scale_c: T::one(),
            psi_h1: T::nan(),
            normalized: false,
            closed,
            outer: Quadrature::new(T::lit(1e-9)),
            inner: Quadrature::new(T::lit(1e-11)),
        };
        m.psi_h1 = match (&m.closed.psi_h, m.pair.admissibility) {
            (Some(p), _) => p(T::one()),
            (None, Admissibility::Admissible(Certificate::Value { psi_h1 })) if m.pair.l.levy().as_point_mass().is_some() => psi_h1,
            _ => m.psi_h_quadrature(T::one())?,
        };
        if !(m.psi_h1 > T::zero() && m.psi_h1.is_finite()) {
            return Err(Error::NotAdmissible(format!("Psi_H(1) = {}", m.psi_h1)));
        }
        Ok(m)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Model with `F` replaced by `F(c .)` relative to the original pair.
    pub fn rescaled(&self, c: T) -> Result<Self> {
        if !(c > T::zero() && c.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale {c}")));
        }
        let mut m = self.clone();
        m.scale_c = c;
        m.f = self.pair.f.rescaled(c);
        m.psi_h1 = self.psi_h1 * self.scale_c / c;
        m.normalized = false;
        Ok(m)
    }

    /// Rescales `F` so that `Psi_H(1) = 1`.
    pub fn normalized(&self) -> Result<Self> {
        let c = self.scale_c * self.psi_h1;
        let mut m = self.rescaled(c)?;
        m.psi_h1 = m.psi_h(T::one())?;
        let tol = T::lit(1e-9).max(T::epsilon() * T::lit(16.0));
        if (m.psi_h1 - T::one()).abs() > tol {
            return Err(Error::NonConvergence {
                value: m.psi_h1.as_f64(),
                abs_error: (m.psi_h1 - T::one()).abs().as_f64(),
                evaluations: 0,
            });
        }
        m.psi_h1 = T::one();
        m.normalized = true;
        Ok(m)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn pair(&self) -> &IdtPair<T> {
        &self.pair
    }

    /// The effective distribution function `F(c .)`.
    pub fn distribution(&self) -> &DistributionF<T> {
        &self.f
    }

    pub fn levy(&self) -> &BernsteinFunction<T> {
        &self.pair.l
    }

    pub fn scale_c(&self) -> T {
        self.scale_c
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn psi_h1(&self) -> T {
        self.psi_h1
    }

    pub fn closed_forms(&self) -> &ClosedForms<T> {
        &self.closed
    }

    pub fn has_closed_psi_h(&self) -> bool {
        self.closed.psi_h.is_some()
    }

    pub fn has_closed_ell(&self) -> bool {
        self.closed.ell.is_some()
    }

    /// `Psi_H(x) = int Psi_F(x y) nu_L(dy)`, closed form when registered.
    pub fn psi_h(&self, x: T) -> Result<T> {
        if x <= T::zero() {
            return Ok(T::zero());
        }
        match &self.closed.psi_h {
            Some(p) => Ok(p(x) / self.scale_c),
            None => self.psi_h_quadrature(x),
        }
    }

    /// `Psi_H` by quadrature over the mass axis of `nu_L`.
    pub fn psi_h_quadrature(&self, x: T) -> Result<T> {
        if x <= T::zero() {
            return Ok(T::zero());
        }
        let failure = RefCell::new(None);
        let uf = self.f.right_support();
        let v = self.pair.l.levy().integrate(
            |y| {
                if y.is_infinite() {
                    return uf;
                }
                match self.f.psi(x * y) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        T::zero()
                    }
                }
            },
            &self.outer,
        )?;
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    /// `Psi_H(x) = int Psi_L(-x log F(s)) ds`, an independent route.
    pub fn psi_h_time_integral(&self, x: T) -> Result<T> {
        if x <= T::zero() {
            return Ok(T::zero());
        }
        let failure = RefCell::new(None);
        let l = self.pair.l.clone();
        let g = |s: T| -> T {
            let e = self.f.neg_log_cdf(s);
            if e == T::zero() {
                return T::zero();
            }
            match l.eval(x * e) {
                Ok(v) => v,
                Err(err) => {
                    failure.borrow_mut().get_or_insert(err);
                    T::zero()
                }
            }
        };
        let q = self.inner.with_tail_scale(self.f.mean());
        let r = q.integrate_with_breaks(g, T::zero(), self.f.right_support(), self.f.breakpoints())?;
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(r.value),
        }
    }

    /// `Psi_H` as a Bernstein function with Levy measure `nu_H`, the image of
    /// `nu_F x nu_L` under multiplication. Its survival function is evaluated
    /// by quadrature and is meant for checks, not for hot loops.
    pub fn psi_h_bernstein(&self) -> Result<BernsteinFunction<T>> {
        let nu_l = self.pair.l.levy().clone();
        let f = self.f.clone();
        let uf = f.right_support();
        let a_f = f.left_support();
        let tot_l = nu_l.total_mass();
        let atom = T::mul0(a_f, tot_l) + T::mul0(nu_l.atom_at_infinity(), uf);
        let total = if tot_l.is_finite() && uf.is_finite() { tot_l * uf } else { T::infinity() };
        let q = self.outer;
        let nu_l2 = nu_l.clone();
        let survival = move |t: T| -> T {
            if t.is_infinite() {
                return atom;
            }
            if t <= T::zero() {
                return total;
            }
            let main = nu_l2
                .integrate(
                    |u| {
                        if u.is_infinite() {
                            uf
                        } else {
                            let s = t / u;
                            if s <= T::zero() {
                                uf
                            } else {
                                f.quantile((-s).exp())
                            }
                        }
                    },
                    &q,
                )
                .unwrap_or(T::nan());
            main
        };
        let me = self.clone();
        let lm = LevyMeasure::builder(format!("nu_H{}", self.label), survival)
            .atom_at_infinity(atom)
            .total_mass(total)
            .jump_mean(T::mul0(nu_l.jump_mean(), self.f.psi_derivative_at_zero()))
            .psi_fallible(Arc::new(move |x| me.psi_h(x)), self.closed.psi_h.is_some())
            .build()?;
        Ok(BernsteinFunction::new(lm))
    }

    /// `ell(t) = int int (1 - prod_k F(s/t_k)^y) ds nu_L(dy)`; zero entries are
    /// dropped, infinite ones rejected.
    pub fn ell(&self, t: &[T]) -> Result<T> {
        let ts = validate_t(t)?;
        match &self.closed.ell {
            Some(e) => Ok(e(&ts) / self.scale_c),
            None => self.ell_quadrature_checked(&ts),
        }
    }

    /// `ell` by nested quadrature, ignoring any closed form.
    pub fn ell_quadrature(&self, t: &[T]) -> Result<T> {
        let ts = validate_t(t)?;
        self.ell_quadrature_checked(&ts)
    }

    fn ell_quadrature_checked(&self, ts: &[T]) -> Result<T> {
        let f = &self.f;
        let uf = f.right_support();
        let tmax = ts.iter().copied().fold(T::zero(), T::max);
        let mut breaks = Vec::new();
        for &tk in ts {
            for &b in f.breakpoints() {
                breaks.push(tk * b);
            }
        }
        let hi = uf * tmax;
        let q_inner = self.inner.with_tail_scale(tmax * f.mean());
        let failure = RefCell::new(None);
        let inner = |y: T| -> T {
            if y.is_infinite() {
                return hi;
            }
            let g = |s: T| {
                let mut nl = T::zero();
                for &tk in ts {
                    let e = f.neg_log_cdf(s / tk);
                    if e.is_infinite() {
                        return T::one();
                    }
                    nl += e;
                }
                -(-y * nl).exp_m1()
            };
            match q_inner.integrate_with_breaks(g, T::zero(), hi, &breaks) {
                Ok(r) => r.value,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    T::zero()
                }
            }
        };
        let v = self.pair.l.levy().integrate(inner, &self.outer)?;
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    /// `Psi_L` bounded and `u_F < inf`.
    pub fn is_compound_poisson(&self) -> bool {
        self.pair.l.bounded() && self.f.right_support().is_finite()
    }

    /// `F` has positive left end point or `L` is killed.
    pub fn has_killing(&self) -> bool {
        self.f.left_support() > T::zero() || self.pair.l.killing()
    }

    /// Bernstein function of the first part `X_1` in the decomposition of the
    /// increment `H_{t+x} - H_t`:
    /// `x int_0^{u_F} Psi_L(-alpha log F((x y + u_F t)/(x + t))) dy`.
    pub fn increment_psi1(&self, t: T, x: T, alpha: T) -> Result<T> {
        let uf = self.f.right_support();
        if !uf.is_finite() {
            return Err(Error::UnboundedSupport);
        }
        if !(t > T::zero() && x > T::zero() && alpha >= T::zero()) {
            return Err(Error::InvalidArgument(format!("t {t}, x {x}, alpha {alpha}")));
        }
        if alpha == T::zero() {
            return Ok(T::zero());
        }
        let failure = RefCell::new(None);
        let l = &self.pair.l;
        let g = |y: T| -> T {
            let arg = (x * y + uf * t) / (x + t);
            let e = self.f.neg_log_cdf(arg);
            match l.eval(alpha * e) {
                Ok(v) => v,
                Err(err) => {
                    failure.borrow_mut().get_or_insert(err);
                    T::zero()
                }
            }
        };
        let breaks: Vec<T> = self
            .f
            .breakpoints()
            .iter()
            .map(|&b| (b * (x + t) - uf * t) / x)
            .collect();
        let r = self.inner.integrate_with_breaks(g, T::zero(), uf, &breaks)?;
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(x * r.value),
        }
    }
}

/// Normalized model of an admissible pair.
pub fn normalize<T: Real>(pair: IdtPair<T>) -> Result<IdtModel<T>> {
    IdtModel::new(pair)?.normalized()
}

/// The pair `(F^{(L)}, L^{(F)})` with the roles of `F` and `L` exchanged.
pub fn dual_pair<T: Real>(pair: &IdtPair<T>) -> Result<IdtPair<T>> {
    if !pair.is_admissible() {
        return Err(Error::NotAdmissible("dual of a non-admissible pair".into()));
    }
    let f_l = distribution_from_levy(pair.levy().levy())?;
    let l_f = psi_from_distribution(pair.distribution());
    check_admissible(&f_l, &l_f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn german_linear() -> DistributionF<f64> {
        DistributionF::builder("min(x,1)", |x: f64| x.clamp(0.0, 1.0))
            .support(0.0, 1.0)
            .psi(|y| y / (y + 1.0))
            .neg_log_mean(1.0)
            .build()
            .unwrap()
    }

    fn frechet(theta: f64) -> DistributionF<f64> {
        let c = crate::special::gamma(1.0 - theta).powf(-1.0 / theta);
        DistributionF::builder("frechet", move |x: f64| if x <= 0.0 { 0.0 } else { (-c * x.powf(-1.0 / theta)).exp() })
            .quantile(move |p: f64| c.powf(theta) * (-p.ln()).powf(-theta))
            .neg_log_cdf(move |x: f64| if x <= 0.0 { f64::INFINITY } else { c * x.powf(-1.0 / theta) })
            .mean(crate::special::gamma(1.0 - theta) * c.powf(theta))
            .psi(move |x| x.powf(theta))
            .build()
            .unwrap()
    }

    #[test]
    fn german_linear_any_l_fast_path() {
        let l = BernsteinFunction::new(LevyMeasure::stable(0.5, 1.0).unwrap());
        let p = check_admissible(&german_linear(), &l).unwrap();
        assert_eq!(
            p.admissibility(),
            Admissibility::Admissible(Certificate::BoundedPsiFiniteSlope)
        );
    }

    #[test]
    fn frechet_with_heavy_pareto_is_not_admissible() {
        let l = BernsteinFunction::new(LevyMeasure::pareto(2.0, 0.5, 1.0).unwrap());
        let p = check_admissible(&frechet(0.5), &l).unwrap();
        assert!(!p.is_admissible());
        assert!(matches!(IdtModel::new(p), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn frechet_with_lighter_pareto_is_admissible() {
        let l = BernsteinFunction::new(LevyMeasure::pareto(1.0, 0.8, 1.0).unwrap());
        let p = check_admissible(&frechet(0.5), &l).unwrap();
        // int_1^inf y^{0.5} 0.8 y^{-1.8} dy = 0.8 / 0.3
        match p.admissibility() {
            Admissibility::Admissible(Certificate::Value { psi_h1 }) => {
                assert!((psi_h1 - 0.8 / 0.3).abs() < 1e-4, "{psi_h1}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn poisson_l_certificate_is_psi_f_one() {
        let l = BernsteinFunction::new(LevyMeasure::standard_poisson());
        let p = check_admissible(&frechet(0.3), &l).unwrap();
        assert_eq!(
            p.admissibility(),
            Admissibility::Admissible(Certificate::Value { psi_h1: 1.0 })
        );
    }

    #[test]
    fn frechet_poisson_ell_and_normalization() {
        let l = BernsteinFunction::new(LevyMeasure::standard_poisson());
        let m = normalize(check_admissible(&frechet(0.5), &l).unwrap()).unwrap();
        assert!((m.scale_c() - 1.0).abs() < 1e-12);
        let v = m.ell(&[1.0, 1.0]).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-7 * 2f64.sqrt(), "{v}");
        let x = m.psi_h_quadrature(3.0).unwrap();
        assert!((x - 3f64.sqrt()).abs() < 1e-8 * x);
    }

    #[test]
    fn ell_of_single_coordinate() {
        let l = BernsteinFunction::new(LevyMeasure::exponential(1.0, 1.0).unwrap());
        let m = IdtModel::new(check_admissible(&german_linear(), &l).unwrap()).unwrap();
        let v = m.ell(&[2.5, 0.0, 0.0]).unwrap();
        assert!((v - 2.5 * m.psi_h1()).abs() < 1e-8 * v);
        assert!(m.ell(&[0.0, 0.0]).is_err());
        assert!(m.ell(&[1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn time_integral_route_agrees() {
        let l = BernsteinFunction::new(LevyMeasure::exponential(1.0, 1.0).unwrap());
        let m = normalize(check_admissible(&german_linear(), &l).unwrap()).unwrap();
        for x in [0.5, 1.0, 4.0] {
            let a = m.psi_h(x).unwrap();
            let b = m.psi_h_time_integral(x).unwrap();
            assert!((a - b).abs() < 1e-8 * a, "{x}: {a} {b}");
        }
        assert!((m.psi_h(1.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn predicates() {
        let l = BernsteinFunction::new(LevyMeasure::exponential(1.0, 1.0).unwrap());
        let m = IdtModel::new(check_admissible(&german_linear(), &l).unwrap()).unwrap();
        assert!(m.is_compound_poisson());
        assert!(!m.has_killing());
        let n = BernsteinFunction::new(LevyMeasure::standard_poisson());
        let fr = IdtModel::new(check_admissible(&frechet(0.5), &n).unwrap()).unwrap();
        assert!(!fr.is_compound_poisson());
        let shifted = DistributionF::builder("shift", |x: f64| if x < 0.3 { 0.0 } else { x.min(1.0) })
            .support(0.3, 1.0)
            .breakpoints(vec![0.3])
            .build()
            .unwrap();
        let k = IdtModel::new(check_admissible(&shifted, &n).unwrap()).unwrap();
        assert!(k.has_killing());
    }

    #[test]
    fn increment_psi1_bounded_support_only() {
        let n = BernsteinFunction::new(LevyMeasure::standard_poisson());
        let fr = IdtModel::new(check_admissible(&frechet(0.5), &n).unwrap()).unwrap();
        assert_eq!(fr.increment_psi1(1.0, 1.0, 1.0), Err(Error::UnboundedSupport));
        let gl = IdtModel::new(check_admissible(&german_linear(), &n).unwrap()).unwrap();
        assert_eq!(gl.increment_psi1(1.0, 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn duality_swaps_bernstein_functions() {
        let l = BernsteinFunction::new(LevyMeasure::exponential(1.0, 1.0).unwrap());
        let p = check_admissible(&german_linear(), &l).unwrap();
        let d = dual_pair(&p).unwrap();
        for x in [0.5, 2.0] {
            let a = d.distribution().psi(x).unwrap();
            let b = l.eval(x).unwrap();
            assert!((a - b).abs() < 1e-10);
            let c = d.levy().eval(x).unwrap();
            assert!((c - x / (x + 1.0)).abs() < 1e-10);
        }
        let m1 = IdtModel::new(p).unwrap();
        let m2 = IdtModel::new(d).unwrap();
        for x in [0.5, 1.0, 3.0] {
            let a = m1.psi_h(x).unwrap();
            let b = m2.psi_h(x).unwrap();
            assert!((a - b).abs() < 1e-7 * a, "{a} {b}");
        }
    }
}
