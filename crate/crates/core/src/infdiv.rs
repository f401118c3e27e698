//! Series samplers for infinitely divisible laws on `[0, inf]`.
//!
//! All series are driven by the arrival times `tau_k` of a unit Poisson
//! process. When the driving measure is infinite the series is cut at a
//! fixed level computed once per sampler.

use crate::bernstein::{BernsteinFunction, LevyMeasure, StieltjesMeasure};
use crate::error::{invalid, Error, Result};
use crate::families::bernoulli_f;
use crate::idt::{check_admissible, IdtModel};
use crate::numerics::Quadrature;
use crate::real::Real;
use crate::rng::RngStream;
use crate::samplers::LepageSampler;

/// One draw of a series representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesSample<T> {
    pub value: T,
    pub terms_used: usize,
    pub exact: bool,
    /// Zero when exact; otherwise the bound described by the sampler's
    /// [`Remainder`] mode.
    pub truncation_error_bound: T,
}

/// Treatment of the neglected tail of an infinite series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Remainder {
    /// Drop the tail; the bound is its mean.
    Drop,
    /// Add the mean of the tail; the bound is its standard deviation.
    Compensate,
}

fn check_tol<T: Real>(tol: T) -> Result<()> {
    if tol > T::zero() && tol.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("tolerance must be positive, got {tol}")))
    }
}

/// Smallest level `y` on the doubling grid from `start` with `pred(y)`.
fn doubling_level<T: Real>(start: T, pred: impl Fn(T) -> Result<bool>) -> Result<T> {
    let mut y = start;
    for _ in 0..200 {
        if pred(y)? {
            return Ok(y);
        }
        y = y * T::lit(2.0);
    }
    Err(Error::NonConvergence {
        value: y.as_f64(),
        abs_error: f64::INFINITY,
        evaluations: 200,
    })
}

/// `sum_k S^{-1}(tau_k) 1{tau_k <= nu((0, inf])}`.
#[derive(Clone)]
pub struct DualitySampler<T> {
    nu: LevyMeasure<T>,
    level: T,
    exact: bool,
    mode: Remainder,
    tail_mean: T,
    bound: T,
}

impl<T: Real> DualitySampler<T> {
    /// For an infinite measure the series stops at the first level `y` (on a
    /// doubling grid) where both `S^{-1}(y) < tol` and the remainder bound is
    /// below `tol`.
    pub fn new(nu: &LevyMeasure<T>, tol: T, mode: Remainder) -> Result<Self> {
        check_tol(tol)?;
        let total = nu.total_mass();
        if total.is_finite() {
            return Ok(DualitySampler {
                nu: nu.clone(),
                level: total,
                exact: true,
                mode,
                tail_mean: T::zero(),
                bound: T::zero(),
            });
        }
        let q = Quadrature::new(T::lit(1e-8)).with_abs_tol(tol * T::lit(1e-3));
        let tail = |y: T, p: i32| -> Result<T> {
            Ok(q.with_tail_scale(y).integrate(|s| nu.survival_inverse(s).powi(p), y, T::infinity())?.value)
        };
        let start = nu.atom_at_infinity().max(T::one());
        let level = doubling_level(start, |y| {
            if !(nu.survival_inverse(y) < tol) {
                return Ok(false);
            }
            let b = match mode {
                Remainder::Drop => tail(y, 1)?,
                Remainder::Compensate => tail(y, 2)?.sqrt(),
            };
            Ok(b <= tol)
        })?;
        let tail_mean = tail(level, 1)?;
        let bound = match mode {
            Remainder::Drop => tail_mean,
            Remainder::Compensate => tail(level, 2)?.sqrt(),
        };
        Ok(DualitySampler {
            nu: nu.clone(),
            level,
            exact: false,
            mode,
            tail_mean,
            bound,
        })
    }

    pub fn level(&self) -> T {
        self.level
    }

    pub fn sample(&self, rng: &mut RngStream) -> SeriesSample<T> {
        let mut tau = T::zero();
        let mut acc = T::zero();
        let mut n = 0;
        loop {
            tau += rng.exp1::<T>();
            if tau > self.level {
                break;
            }
            acc += self.nu.survival_inverse(tau);
            n += 1;
        }
        if !self.exact && self.mode == Remainder::Compensate {
            acc += self.tail_mean;
        }
        SeriesSample {
            value: acc,
            terms_used: n,
            exact: self.exact,
            truncation_error_bound: self.bound,
        }
    }
}

pub fn sample_id_duality<T: Real>(nu: &LevyMeasure<T>, rng: &mut RngStream, tol: T) -> Result<SeriesSample<T>> {
    Ok(DualitySampler::new(nu, tol, Remainder::Drop)?.sample(rng))
}

/// `sum_k J_k g^{-1}(tau_k) 1{tau_k <= rho((0, inf))}` with unit
/// exponential `J_k`.
#[derive(Clone)]
pub struct BondessonSampler<T> {
    rho: StieltjesMeasure<T>,
    level: T,
    exact: bool,
    mode: Remainder,
    tail_mean: T,
    bound: T,
}

impl<T: Real> BondessonSampler<T> {
    /// Infinite `rho`: the tail beyond level `y` has mean
    /// `int_y^inf g^{-1}` and variance `2 int_y^inf (g^{-1})^2`; the level is
    /// the first point of a doubling grid where the chosen bound is `<= tol`.
    pub fn new(rho: &StieltjesMeasure<T>, tol: T, mode: Remainder) -> Result<Self> {
        check_tol(tol)?;
        let total = rho.total_mass();
        if total.is_finite() {
            return Ok(BondessonSampler {
                rho: rho.clone(),
                level: total,
                exact: true,
                mode,
                tail_mean: T::zero(),
                bound: T::zero(),
            });
        }
        let q = Quadrature::new(T::lit(1e-8)).with_abs_tol(tol * tol * T::lit(1e-3));
        let sd = |y: T| -> Result<T> {
            let v = q
                .with_tail_scale(y)
                .integrate(|s| {
                    let g = rho.g_inverse(s);
                    g * g
                }, y, T::infinity())?
                .value;
            Ok((T::lit(2.0) * v).sqrt())
        };
        let level = doubling_level(T::one(), |y| {
            Ok(match mode {
                Remainder::Drop => rho.tail_integral(y)? <= tol,
                Remainder::Compensate => sd(y)? <= tol,
            })
        })?;
        let tail_mean = rho.tail_integral(level)?;
        let bound = match mode {
            Remainder::Drop => tail_mean,
            Remainder::Compensate => sd(level)?,
        };
        Ok(BondessonSampler {
            rho: rho.clone(),
            level,
            exact: false,
            mode,
            tail_mean,
            bound,
        })
    }

    pub fn level(&self) -> T {
        self.level
    }

    pub fn sample(&self, rng: &mut RngStream) -> SeriesSample<T> {
        let mut tau = T::zero();
        let mut acc = T::zero();
        let mut n = 0;
        loop {
            tau += rng.exp1::<T>();
            if tau > self.level {
                break;
            }
            let j: T = rng.exp1();
            acc += j * self.rho.g_inverse(tau);
            n += 1;
        }
        if !self.exact && self.mode == Remainder::Compensate {
            acc += self.tail_mean;
        }
        SeriesSample {
            value: acc,
            terms_used: n,
            exact: self.exact,
            truncation_error_bound: self.bound,
        }
    }
}

pub fn sample_bondesson<T: Real>(rho: &StieltjesMeasure<T>, rng: &mut RngStream, tol: T) -> Result<SeriesSample<T>> {
    Ok(BondessonSampler::new(rho, tol, Remainder::Drop)?.sample(rng))
}

/// Compound Poisson law with intensity `beta` and jump density `-phi_G'`:
/// `sum_k J_k / G^{-1}(tau_k / beta) 1{tau_k <= beta}`. Always exact.
pub fn sample_cp_from_g<T: Real>(beta: T, g_inverse: impl Fn(T) -> T, rng: &mut RngStream) -> Result<SeriesSample<T>> {
    if !(beta > T::zero() && beta.is_finite()) {
        return Err(invalid(format!("intensity must be positive and finite, got {beta}")));
    }
    let mut tau = T::zero();
    let mut acc = T::zero();
    let mut n = 0;
    loop {
        tau += rng.exp1::<T>();
        if tau > beta {
            break;
        }
        let j: T = rng.exp1();
        acc += j / g_inverse(tau / beta);
        n += 1;
    }
    Ok(SeriesSample {
        value: acc,
        terms_used: n,
        exact: true,
        truncation_error_bound: T::zero(),
    })
}

/// `sum_k Z_k 1{(eps_1 + ... + eps_k)(1 - e^{-Z_k}) <= Psi(1)}` with `Z_k`
/// iid from `(1 - e^{-z}) nu(dz) / Psi(1)`: the LePage series of `H_1` for
/// `F = e^{-1}` on `[0, 1)` and `L` with Levy measure `nu`.
#[derive(Clone)]
pub struct IdLepageSampler<T> {
    inner: LepageSampler<T>,
}

impl<T: Real> IdLepageSampler<T> {
    pub fn new(nu: &LevyMeasure<T>, tol: T) -> Result<Self> {
        check_tol(tol)?;
        let l: BernsteinFunction<T> = nu.clone().into();
        let model = IdtModel::new(check_admissible(&bernoulli_f()?, &l)?)?;
        Ok(IdLepageSampler {
            inner: LepageSampler::new(&model, T::one(), tol)?,
        })
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<SeriesSample<T>> {
        let p = self.inner.sample(rng)?;
        Ok(SeriesSample {
            value: p.eval(T::one()),
            terms_used: p.len(),
            exact: p.is_exact(),
            truncation_error_bound: p.truncation_error_bound(),
        })
    }
}

pub fn sample_id_lepage<T: Real>(nu: &LevyMeasure<T>, rng: &mut RngStream, tol: T) -> Result<SeriesSample<T>> {
    IdLepageSampler::new(nu, tol)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::family;

    fn emp_psi(v: &[f64], x: f64) -> (f64, f64) {
        let n = v.len() as f64;
        let e: Vec<f64> = v.iter().map(|s| (-x * s).exp()).collect();
        let m = e.iter().sum::<f64>() / n;
        let var = e.iter().map(|a| (a - m).powi(2)).sum::<f64>() / (n - 1.0);
        (-m.ln(), (var / n).sqrt() / m)
    }

    #[test]
    fn duality_exp_measure() {
        let beta = 2.0;
        let nu = LevyMeasure::exponential(beta, 1.0).unwrap();
        let s = DualitySampler::new(&nu, 1e-6, Remainder::Drop).unwrap();
        let mut rng = RngStream::new(12);
        let n = 20_000;
        let draws: Vec<SeriesSample<f64>> = (0..n).map(|_| s.sample(&mut rng)).collect();
        assert!(draws.iter().all(|d| d.exact));
        let v: Vec<f64> = draws.iter().map(|d| d.value).collect();
        for x in [0.5, 1.0, 2.0] {
            let (est, se) = emp_psi(&v, x);
            let target = beta * x / (x + 1.0);
            assert!((est - target).abs() < 3.5 * se, "x={x}: {est} vs {target}");
        }
        // E[terms] = total mass
        let terms = draws.iter().map(|d| d.terms_used as f64).sum::<f64>() / n as f64;
        assert!((terms - beta).abs() < 4.0 * (beta / n as f64).sqrt());
    }

    #[test]
    fn duality_first_arrival_beyond_mass() {
        let nu = LevyMeasure::exponential(1e-300, 1.0).unwrap();
        let s = DualitySampler::new(&nu, 1e-6, Remainder::Drop).unwrap();
        let d = s.sample(&mut RngStream::new(0));
        assert_eq!(d.value, 0.0);
        assert_eq!(d.terms_used, 0);
    }

    #[test]
    fn cp_from_g_family_45() {
        let mut rng = RngStream::new(3);
        let n = 40_000;
        let v: Vec<f64> = (0..n)
            .map(|_| sample_cp_from_g(0.5, |x: f64| 1.0 - (1.0 - x).sqrt(), &mut rng).unwrap().value)
            .collect();
        let (est, se) = emp_psi(&v, 1.0);
        let target = 2.0 * 2f64.ln() - 1.0;
        assert!((est - target).abs() < 3.5 * se, "{est} vs {target}");
    }

    #[test]
    fn bondesson_infinite_bounds() {
        let rho = family::<f64>("bondesson-64").unwrap().stieltjes().unwrap().clone();
        let s = BondessonSampler::new(&rho, 1e-4, Remainder::Compensate).unwrap();
        assert!(s.level() < 2000.0);
        let d = s.sample(&mut RngStream::new(1));
        assert!(!d.exact && d.truncation_error_bound <= 1e-4);
        let drop = BondessonSampler::new(&rho, 1e-2, Remainder::Drop).unwrap();
        assert!(drop.sample(&mut RngStream::new(1)).truncation_error_bound <= 1e-2);
    }

    #[test]
    fn lepage_poisson_count() {
        // nu = delta_1: the series counts arrivals below Psi(1) / (1 - e^{-1}) = 1
        let nu = LevyMeasure::standard_poisson();
        let s = IdLepageSampler::new(&nu, 1e-6).unwrap();
        let mut rng = RngStream::new(6);
        let n = 20_000;
        let v: Vec<f64> = (0..n).map(|_| s.sample(&mut rng).unwrap().value).collect();
        assert!(v.iter().all(|x| x.fract() == 0.0));
        let m = v.iter().sum::<f64>() / n as f64;
        assert!((m - 1.0).abs() < 4.0 / (n as f64).sqrt());
    }
}
