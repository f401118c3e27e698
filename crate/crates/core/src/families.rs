//! Catalog of `(F, L)` families with closed forms.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bernstein::{distribution_from_stieltjes, BernsteinFunction, DistributionF, LevyMeasure, StieltjesMeasure};
use crate::error::{invalid, Error, Result};
use crate::idt::{check_admissible, ClosedForms, IdtModel};
use crate::numerics::{compensated_sum, Quadrature};
use crate::real::Real;
use crate::rng::RngStream;
use crate::special;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    Frechet { theta: f64 },
    GermanExp,
    Other,
}

/// A named distribution function with a default subordinator and the closed
/// forms known for the default pair.
#[derive(Clone)]
pub struct FamilySpec<T> {
    id: String,
    description: String,
    params: BTreeMap<String, f64>,
    f: DistributionF<T>,
    default_l: BernsteinFunction<T>,
    closed: ClosedForms<T>,
    stieltjes: Option<StieltjesMeasure<T>>,
    kind: Kind,
}

impl<T: Real> FamilySpec<T> {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn distribution(&self) -> &DistributionF<T> {
        &self.f
    }

    pub fn default_levy(&self) -> &BernsteinFunction<T> {
        &self.default_l
    }

    pub fn closed_forms(&self) -> &ClosedForms<T> {
        &self.closed
    }

    /// Stieltjes measure of `F`, registered for the Bondesson families.
    pub fn stieltjes(&self) -> Option<&StieltjesMeasure<T>> {
        self.stieltjes.as_ref()
    }

    /// The pair `(F, default L)` with its closed forms.
    pub fn model(&self) -> Result<IdtModel<T>> {
        let pair = check_admissible(&self.f, &self.default_l)?;
        Ok(IdtModel::with_closed_forms(pair, self.closed.clone())?.with_label(self.id.clone()))
    }

    /// The pair `(F, l)`. Closed forms that hold for every `L` are kept.
    pub fn model_with(&self, l: BernsteinFunction<T>) -> Result<IdtModel<T>> {
        let pair = check_admissible(&self.f, &l)?;
        let closed = match self.kind {
            Kind::Frechet { theta } => {
                let th = T::lit(theta);
                let q = Quadrature::new(T::lit(1e-11));
                let m = l
                    .levy()
                    .integrate(|y| if y.is_infinite() { T::infinity() } else { y.powf(th) }, &q)?;
                let ell: crate::idt::EllFn<T> = Arc::new(move |t: &[T]| closed_ell_frechet(th, m, t));
                ClosedForms {
                    psi_h: Some(Arc::new(move |x: T| m * x.powf(th))),
                    ell: Some(ell),
                    z_sampler: None,
                }
            }
            Kind::GermanExp => {
                let base = IdtModel::new(pair.clone())?;
                let ell: crate::idt::EllFn<T> =
                    Arc::new(move |t: &[T]| closed_ell_exp_family(|x| base.psi_h(x), t).unwrap_or_else(|_| T::nan()));
                ClosedForms {
                    psi_h: None,
                    ell: Some(ell),
                    z_sampler: None,
                }
            }
            Kind::Other => ClosedForms::default(),
        };
        Ok(IdtModel::with_closed_forms(pair, closed)?.with_label(format!("{}+{}", self.id, l.label())))
    }
}

/// `Psi_H(1) (sum_k t_k^{1/theta})^theta`.
pub fn closed_ell_frechet<T: Real>(theta: T, psi_h1: T, t: &[T]) -> T {
    let s: T = compensated_sum(t.iter().filter(|&&x| x > T::zero()).map(|&x| x.powf(T::one() / theta)));
    psi_h1 * s.powf(theta)
}

/// Closed `ell` for `-log F(x) = (1 - x)_+`, in terms of `Psi_H`.
///
/// With `x_[1] <= ... <= x_[d]` the positive arguments and
/// `A_i = sum_{j >= i} 1 / x_[j]`, `b_i = (d - i) - sum_{j > i} x_[i] / x_[j]`:
/// `ell = d Psi_H(d) / A_1 - sum_{i < d} ((d-i+1)/A_i - (d-i)/A_{i+1}) Psi_H(b_i)`.
pub fn closed_ell_exp_family<T: Real>(psi_h: impl Fn(T) -> Result<T>, t: &[T]) -> Result<T> {
    let mut x: Vec<T> = t.iter().copied().filter(|&v| v > T::zero()).collect();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(invalid("arguments must be finite"));
    }
    if x.is_empty() {
        return Ok(T::zero());
    }
    x.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let d = x.len();
    // suffix sums of reciprocals
    let mut a = vec![T::zero(); d + 1];
    for i in (0..d).rev() {
        a[i] = a[i + 1] + T::one() / x[i];
    }
    let dd = T::from_usize_lossy(d);
    let mut terms = vec![dd * psi_h(dd)? / a[0]];
    for i in 0..d - 1 {
        // 1-based index i + 1
        let rem = T::from_usize_lossy(d - i - 1);
        let b = (rem - x[i] * a[i + 1]).max(T::zero());
        let coef = (rem + T::one()) / a[i] - rem / a[i + 1];
        terms.push(-coef * psi_h(b)?);
    }
    Ok(compensated_sum(terms))
}

fn unit_exp_cp<T: Real>() -> BernsteinFunction<T> {
    LevyMeasure::exponential(T::one(), T::one()).expect("valid").into()
}

fn poisson_l<T: Real>() -> BernsteinFunction<T> {
    LevyMeasure::standard_poisson().into()
}

fn neg_ln<T: Real>(p: T) -> T {
    if p <= T::zero() {
        T::infinity()
    } else {
        -p.ln()
    }
}

pub(crate) fn bernoulli_f<T: Real>() -> Result<DistributionF<T>> {
    let e = (-T::one()).exp();
    DistributionF::builder("bernoulli-exp", move |x: T| {
        if x < T::zero() {
            T::zero()
        } else if x >= T::one() {
            T::one()
        } else {
            e
        }
    })
    .left_limit(move |x: T| {
        if x <= T::zero() {
            T::zero()
        } else if x > T::one() {
            T::one()
        } else {
            e
        }
    })
    .neg_log_cdf(|x: T| {
        if x < T::zero() {
            T::infinity()
        } else if x >= T::one() {
            T::zero()
        } else {
            T::one()
        }
    })
    .neg_log_left_limit(|x: T| {
        if x <= T::zero() {
            T::infinity()
        } else if x > T::one() {
            T::zero()
        } else {
            T::one()
        }
    })
    .quantile(move |p: T| if p <= e { T::zero() } else { T::one() })
    .support(T::zero(), T::one())
    .breakpoints(vec![T::one()])
    .mean(T::one() - e)
    .neg_log_mean(T::one())
    .psi(|z: T| -(-z).exp_m1())
    .power_sampler(|z: T, r: &mut RngStream| if r.uniform::<T>() < (-z).exp() { T::zero() } else { T::one() })
    .size_biased_sampler(|_z: T, _r: &mut RngStream| T::one())
    .build()
}

fn german_linear_f<T: Real>() -> Result<DistributionF<T>> {
    DistributionF::builder("min(x,1)", |x: T| x.max(T::zero()).min(T::one()))
        .neg_log_cdf(|x: T| if x <= T::zero() { T::infinity() } else if x >= T::one() { T::zero() } else { -x.ln() })
        .quantile(|p: T| p.max(T::zero()).min(T::one()))
        .support(T::zero(), T::one())
        .mean(T::lit(0.5))
        .neg_log_mean(T::one())
        .psi(|y: T| y / (y + T::one()))
        .power_sampler(|z: T, r: &mut RngStream| r.uniform::<T>().powf(T::one() / z))
        .size_biased_sampler(|z: T, r: &mut RngStream| r.uniform::<T>().powf(T::one() / (z + T::one())))
        .build()
}

fn german_exp_psi<T: Real>(y: T) -> T {
    if y < T::lit(1e-4) {
        // 1 - (1 - e^{-y}) / y = y/2 - y^2/6 + y^3/24
        y / T::lit(2.0) - y * y / T::lit(6.0) + y * y * y / T::lit(24.0)
    } else {
        T::one() + (-y).exp_m1() / y
    }
}

fn german_exp_f<T: Real>() -> Result<DistributionF<T>> {
    DistributionF::builder("min(exp(x-1),1)", |x: T| {
        if x < T::zero() {
            T::zero()
        } else {
            (x - T::one()).min(T::zero()).exp()
        }
    })
    .neg_log_cdf(|x: T| if x < T::zero() { T::infinity() } else { (T::one() - x).max(T::zero()) })
    .neg_log_left_limit(|x: T| if x <= T::zero() { T::infinity() } else { (T::one() - x).max(T::zero()) })
    .left_limit(|x: T| if x <= T::zero() { T::zero() } else { (x - T::one()).min(T::zero()).exp() })
    .quantile(|p: T| if p <= T::zero() { T::zero() } else { (T::one() + p.ln()).max(T::zero()) })
    .support(T::zero(), T::one())
    .mean((-T::one()).exp())
    .neg_log_mean(T::lit(0.5))
    .psi(german_exp_psi)
    .power_sampler(|z: T, r: &mut RngStream| (T::one() + r.uniform::<T>().ln() / z).max(T::zero()))
    .size_biased_sampler(|z: T, r: &mut RngStream| {
        // proposal density z e^{z(x-1)} / (1 - e^{-z}) on (0, 1), accepted with probability x
        let ez = (-z).exp();
        loop {
            let v: T = r.uniform();
            let x = T::one() + (ez + v * (T::one() - ez)).ln() / z;
            if r.uniform::<T>() <= x {
                return x.min(T::one());
            }
        }
    })
    .build()
}

fn frechet_f<T: Real>(theta: f64) -> Result<DistributionF<T>> {
    let c = (-special::ln_gamma(1.0 - theta) / theta).exp();
    let (th, ct) = (T::lit(theta), T::lit(c));
    let one_minus = T::lit(1.0 - theta);
    DistributionF::builder(format!("frechet({theta})"), move |x: T| {
        if x <= T::zero() {
            T::zero()
        } else {
            (-ct * x.powf(-T::one() / th)).exp()
        }
    })
    .neg_log_cdf(move |x: T| if x <= T::zero() { T::infinity() } else { ct * x.powf(-T::one() / th) })
    .quantile(move |p: T| {
        if p <= T::zero() {
            T::zero()
        } else if p >= T::one() {
            T::infinity()
        } else {
            (ct / -p.ln()).powf(th)
        }
    })
    .support(T::zero(), T::infinity())
    .mean(T::one())
    .neg_log_mean(T::infinity())
    .psi(move |x: T| x.powf(th))
    .power_sampler(move |z: T, r: &mut RngStream| (z * ct / r.exp1::<T>()).powf(th))
    .size_biased_sampler(move |z: T, r: &mut RngStream| (z * ct).powf(th) * r.gamma(one_minus, T::one()).powf(-th))
    .build()
}

fn galambos_psi<T: Real>(z: T) -> T {
    T::lit(special::digamma(z.as_f64() + 1.0) + EULER_GAMMA)
}

fn galambos_f<T: Real>() -> Result<DistributionF<T>> {
    DistributionF::builder("1-exp(-x)", |x: T| if x <= T::zero() { T::zero() } else { -(-x).exp_m1() })
        .neg_log_cdf(|x: T| if x <= T::zero() { T::infinity() } else { neg_ln(-(-x).exp_m1()) })
        .quantile(|p: T| if p >= T::one() { T::infinity() } else { -(-p).ln_1p() })
        .support(T::zero(), T::infinity())
        .mean(T::one())
        .neg_log_mean(T::PI() * T::PI() / T::lit(6.0))
        .psi(galambos_psi)
        .power_sampler(|z: T, r: &mut RngStream| {
            let u: T = r.uniform();
            -(-(u.powf(T::one() / z))).ln_1p()
        })
        .size_biased_sampler(|z: T, r: &mut RngStream| {
            if z >= T::one() {
                // Gamma(2) proposal, accepted with (1 - e^{-x})^{z-1}
                loop {
                    let x = r.exp1::<T>() + r.exp1::<T>();
                    let acc = ((z - T::one()) * (-(-x).exp_m1()).ln()).exp();
                    if r.uniform::<T>() <= acc {
                        return x;
                    }
                }
            } else {
                // envelope x^z (1 + x) e^{-x}: a Gamma(1+z), Gamma(2+z) mixture
                let p1 = T::one() / (T::lit(2.0) + z);
                loop {
                    let shape = if r.uniform::<T>() < p1 { T::one() + z } else { T::lit(2.0) + z };
                    let x = r.gamma(shape, T::one());
                    let target = x * ((z - T::one()) * (-(-x).exp_m1()).ln()).exp();
                    let env = x.powf(z) * (T::one() + x);
                    if r.uniform::<T>() * env <= target {
                        return x;
                    }
                }
            }
        })
        .build()
}

fn molchanov_floor_psi<T: Real>(z: T) -> T {
    let q = (-z).exp();
    let one_minus_q = -(-z).exp_m1();
    let neg_log_one_minus_q = if q < T::lit(0.5) { -(-q).ln_1p() } else { -one_minus_q.ln() };
    one_minus_q * neg_log_one_minus_q / q
}

fn molchanov_floor_f<T: Real>() -> Result<DistributionF<T>> {
    // right-continuous version exp(-(ceil(1/x) - 1)); the left limit is exp(-floor(1/x))
    let nlc = |x: T| {
        if x <= T::zero() {
            T::infinity()
        } else if x >= T::one() {
            T::zero()
        } else {
            (T::one() / x).ceil() - T::one()
        }
    };
    let nll = |x: T| {
        if x <= T::zero() {
            T::infinity()
        } else if x > T::one() {
            T::zero()
        } else {
            (T::one() / x).floor()
        }
    };
    let breaks: Vec<T> = (1..=64).map(|n| T::one() / T::from_usize_lossy(n)).collect();
    DistributionF::builder("exp(-floor(1/x))", move |x: T| (-nlc(x)).exp())
        .left_limit(move |x: T| (-nll(x)).exp())
        .neg_log_cdf(nlc)
        .neg_log_left_limit(nll)
        .quantile(|p: T| {
            if p <= T::zero() {
                T::zero()
            } else {
                T::one() / (T::one() + (-p.ln()).floor())
            }
        })
        .support(T::zero(), T::one())
        .breakpoints(breaks)
        .mean(molchanov_floor_psi(T::one()))
        .neg_log_mean(T::infinity())
        .psi(molchanov_floor_psi)
        .power_sampler(|z: T, r: &mut RngStream| T::one() / (T::one() + (r.exp1::<T>() / z).floor()))
        .size_biased_sampler(|z: T, r: &mut RngStream| loop {
            let n = T::one() + (r.exp1::<T>() / z).floor();
            if r.uniform::<T>() * n <= T::one() {
                return T::one() / n;
            }
        })
        .build()
}

fn molchanov_exp_psi<T: Real>(z: T) -> T {
    T::lit(z.as_f64() * special::exp_e1(z.as_f64()))
}

fn molchanov_exp_f<T: Real>() -> Result<DistributionF<T>> {
    DistributionF::builder("min(1,exp(1-1/x))", |x: T| {
        if x <= T::zero() {
            T::zero()
        } else {
            (T::one() - T::one() / x).min(T::zero()).exp()
        }
    })
    .neg_log_cdf(|x: T| if x <= T::zero() { T::infinity() } else { (T::one() / x - T::one()).max(T::zero()) })
    .quantile(|p: T| if p <= T::zero() { T::zero() } else { T::one() / (T::one() - p.ln()) })
    .support(T::zero(), T::one())
    .mean(molchanov_exp_psi(T::one()))
    .neg_log_mean(T::infinity())
    .psi(molchanov_exp_psi)
    .power_sampler(|z: T, r: &mut RngStream| T::one() / (T::one() + r.exp1::<T>() / z))
    .size_biased_sampler(|z: T, r: &mut RngStream| loop {
        let w = r.exp1::<T>() / z;
        let m = T::one() / (T::one() + w);
        if r.uniform::<T>() <= m {
            return m;
        }
    })
    .build()
}

/// `x (1 + x) log(1 + 1/x) - x`.
fn bondesson45_psi<T: Real>(x: T) -> T {
    if x > T::lit(100.0) {
        let u = T::one() / x;
        let mut acc = T::zero();
        let mut p = T::one();
        for m in 0..14 {
            let sign = if m % 2 == 0 { T::one() } else { -T::one() };
            acc += sign * p / T::from_usize_lossy((m + 1) * (m + 2));
            p = p * u;
        }
        acc
    } else {
        x * (T::one() + x) * (T::one() / x).ln_1p() - x
    }
}

fn bondesson33_psi<T: Real>(x: T, th: T) -> T {
    let r = x / th;
    let e = r - T::one();
    if e.abs() < T::lit(1e-8) {
        r * (T::one() - e / T::lit(2.0))
    } else {
        // r / (1 - r) * (-ln r) = r * ln(1 + e) / e
        r * e.ln_1p() / e
    }
}

fn bondesson_rho<T: Real>(family: u32, theta: f64) -> Result<StieltjesMeasure<T>> {
    let th = T::lit(theta);
    let sq = th.sqrt();
    let half_pi = T::FRAC_PI_2();
    match family {
        45 => {
            let half = T::lit(0.5);
            Ok(StieltjesMeasure::with_kinks(
                "rho-45",
                move |x: T| if x <= T::one() { half } else { T::one() / x - half / (x * x) },
                move |y: T| T::one() / (T::one() - (T::one() - T::lit(2.0) * y).max(T::zero()).sqrt()),
                half,
                vec![T::one()],
            )?
            .with_tail(move |y: T| {
                if y >= half {
                    return T::zero();
                }
                let w = (T::one() - T::lit(2.0) * y).max(T::zero()).sqrt();
                -w - (-w).ln_1p()
            })
            .with_psi(bondesson45_psi))
        }
        5 => Ok(StieltjesMeasure::with_kinks(
            format!("rho-5({theta})"),
            move |x: T| {
                let v = T::one() / x - th;
                if v <= T::zero() {
                    T::zero()
                } else {
                    v.sqrt() / half_pi
                }
            },
            move |y: T| T::one() / (th + (half_pi * y) * (half_pi * y)),
            T::infinity(),
            vec![th],
        )?
        .with_tail(move |y: T| (half_pi - (half_pi * y / sq).atan()) / (half_pi * sq))
        .with_psi(move |x: T| x / (x + th).sqrt())),
        33 => Ok(StieltjesMeasure::with_kinks(
            format!("rho-33({theta})"),
            move |x: T| (T::one() / (th * x)).ln_1p(),
            move |y: T| T::one() / (th * y.exp_m1()),
            T::infinity(),
            Vec::new(),
        )?
        .with_tail(move |y: T| -(-(-y).exp_m1()).ln() / th)
        .with_psi(move |x: T| bondesson33_psi(x, th))),
        64 => Ok(StieltjesMeasure::with_kinks(
            format!("rho-64({theta})"),
            move |x: T| (T::one() / x.sqrt() - sq).max(T::zero()),
            move |y: T| T::one() / ((y + sq) * (y + sq)),
            T::infinity(),
            vec![th],
        )?
        .with_tail(move |y: T| T::one() / (y + sq))
        .with_psi(move |x: T| x.sqrt() * (x / th).sqrt().atan())),
        other => Err(Error::UnknownFamily(format!("bondesson-{other}"))),
    }
}

fn spec<T: Real>(
    id: &str,
    description: &str,
    params: BTreeMap<String, f64>,
    f: DistributionF<T>,
    default_l: BernsteinFunction<T>,
    psi_h: Option<crate::numerics::RealFn<T>>,
    kind: Kind,
) -> FamilySpec<T> {
    let ell: Option<crate::idt::EllFn<T>> = match kind {
        Kind::Frechet { theta } => {
            let th = T::lit(theta);
            Some(Arc::new(move |t: &[T]| closed_ell_frechet(th, T::one(), t)))
        }
        Kind::GermanExp => Some(Arc::new(|t: &[T]| {
            closed_ell_exp_family(|x| Ok(german_exp_psi(x)), t).unwrap_or_else(|_| T::nan())
        })),
        Kind::Other => None,
    };
    FamilySpec {
        id: id.to_string(),
        description: description.to_string(),
        params,
        f,
        default_l,
        closed: ClosedForms {
            psi_h,
            ell,
            z_sampler: None,
        },
        stieltjes: None,
        kind,
    }
}

/// Identifiers accepted by [`lookup`], with their parameter names.
pub const FAMILY_IDS: [(&str, &str); 12] = [
    ("levy-bernoulli", ""),
    ("standard-poisson", ""),
    ("german-linear", ""),
    ("german-exp", ""),
    ("frechet", "theta"),
    ("galambos", ""),
    ("molchanov-floor", ""),
    ("molchanov-exp", ""),
    ("bondesson-45", ""),
    ("bondesson-5", "theta"),
    ("bondesson-33", "theta"),
    ("bondesson-64", "theta"),
];

/// Every family with default parameters (`theta = 0.5` for Frechet,
/// `theta = 1` for the Bondesson families).
pub fn catalog<T: Real>() -> Vec<FamilySpec<T>> {
    FAMILY_IDS
        .iter()
        .map(|(id, _)| lookup(id, &BTreeMap::new()).expect("catalog entries build"))
        .collect()
}

fn param(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

/// Builds a family by identifier. A numeric suffix such as `frechet-0.3`
/// sets `theta`.
pub fn lookup<T: Real>(id: &str, params: &BTreeMap<String, f64>) -> Result<FamilySpec<T>> {
    let mut params = params.clone();
    let mut base = id.to_string();
    if let Some((head, tail)) = id.rsplit_once('-') {
        let takes_theta = FAMILY_IDS.iter().any(|(n, p)| *n == head && *p == "theta");
        if takes_theta {
            if let Ok(v) = tail.parse::<f64>() {
                params.insert("theta".into(), v);
                base = head.to_string();
            }
        }
    }
    let base = base.as_str();
    let only = |p: &BTreeMap<String, f64>, allowed: &[&str]| -> Result<()> {
        for k in p.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(invalid(format!("family {base} takes no parameter `{k}`")));
            }
        }
        Ok(())
    };
    match base {
        "levy-bernoulli" => {
            only(&params, &[])?;
            Ok(spec(
                base,
                "F = e^{-1} on [0,1), H = L: the subordinator itself",
                params,
                bernoulli_f()?,
                unit_exp_cp(),
                Some(Arc::new(|x: T| x / (T::one() + x))),
                Kind::Other,
            ))
        }
        "standard-poisson" => {
            only(&params, &[])?;
            Ok(spec(
                base,
                "F = e^{-1} on [0,1) with L = N: H is the standard Poisson process",
                params,
                bernoulli_f()?,
                poisson_l(),
                Some(Arc::new(|x: T| -(-x).exp_m1())),
                Kind::Other,
            ))
        }
        "german-linear" => {
            only(&params, &[])?;
            Ok(spec(
                base,
                "F(x) = min{x,1} with unit exponential compound Poisson L",
                params,
                german_linear_f()?,
                unit_exp_cp(),
                Some(Arc::new(|x: T| {
                    let v = T::one() / x;
                    T::one() - T::lit(special::exp_e1(v.as_f64())) * v
                })),
                Kind::Other,
            ))
        }
        "german-exp" => {
            only(&params, &[])?;
            Ok(spec(
                base,
                "F(x) = min{exp(x-1),1} with L = N, closed ell",
                params,
                german_exp_f()?,
                poisson_l(),
                Some(Arc::new(german_exp_psi)),
                Kind::GermanExp,
            ))
        }
        "frechet" => {
            only(&params, &["theta"])?;
            let theta = param(&params, "theta", 0.5);
            if !(theta > 0.0 && theta < 1.0) {
                return Err(invalid(format!("frechet needs theta in (0,1), got {theta}")));
            }
            params.insert("theta".into(), theta);
            let th = T::lit(theta);
            Ok(spec(
                base,
                "Frechet F = exp(-c x^{-1/theta}) with Psi_F(x) = x^theta and L = N",
                params,
                frechet_f(theta)?,
                poisson_l(),
                Some(Arc::new(move |x: T| x.powf(th))),
                Kind::Frechet { theta },
            ))
        }
        "galambos" => {
            only(&params, &[])?;
            Ok(spec(
                base,
                "F(x) = 1 - exp(-x) with L = N",
                params,
                galambos_f()?,
                poisson_l(),
                Some(Arc::new(galambos_psi)),
                Kind::Other,
            ))
        }
        "molchanov-floor" => {
            only(&params, &[])?;
            Ok(spec(
                base,
                "F(x) = exp(-floor(1/x)) (right-continuous version) with L = N",
                params,
                molchanov_floor_f()?,
                poisson_l(),
                Some(Arc::new(molchanov_floor_psi)),
                Kind::Other,
            ))
        }
        "molchanov-exp" => {
            only(&params, &[])?;
            Ok(spec(
                base,
                "F(x) = min{1, exp(1-1/x)} with L = N",
                params,
                molchanov_exp_f()?,
                poisson_l(),
                Some(Arc::new(molchanov_exp_psi)),
                Kind::Other,
            ))
        }
        "bondesson-45" | "bondesson-5" | "bondesson-33" | "bondesson-64" => {
            let n: u32 = base["bondesson-".len()..].parse().expect("checked id");
            let theta = if n == 45 {
                only(&params, &[])?;
                0.5
            } else {
                only(&params, &["theta"])?;
                let th = param(&params, "theta", 1.0);
                if !(th > 0.0 && th.is_finite()) {
                    return Err(invalid(format!("theta must be positive, got {th}")));
                }
                params.insert("theta".into(), th);
                th
            };
            let rho = bondesson_rho::<T>(n, theta)?;
            let r2 = rho.clone();
            let f = distribution_from_stieltjes(&rho)?.with_label(format!("F_rho({})", rho.label()));
            // with unit exponential jumps Psi_H is the complete Bernstein function of rho
            let mut s = spec(
                base,
                "Bondesson class law given by its Stieltjes measure, F = F_rho with unit exponential compound Poisson L",
                params,
                f,
                unit_exp_cp(),
                Some(Arc::new(move |x| r2.psi(x).unwrap_or_else(|_| T::nan()))),
                Kind::Other,
            );
            s.stieltjes = Some(rho);
            Ok(s)
        }
        _ => Err(Error::UnknownFamily(id.to_string())),
    }
}

/// [`lookup`] with default parameters.
pub fn family<T: Real>(id: &str) -> Result<FamilySpec<T>> {
    lookup(id, &BTreeMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GRID: [f64; 7] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];

    #[test]
    fn closed_psi_matches_quadrature() {
        for fam in catalog::<f64>() {
            let f = fam.distribution();
            for &x in &GRID {
                let a = f.psi(x).unwrap();
                let b = f.psi_quadrature(x).unwrap();
                assert!((a - b).abs() <= 1e-6 * b.abs().max(1e-300), "{} at {x}: {a} vs {b}", fam.id());
            }
        }
    }

    #[test]
    fn closed_psi_h_matches_quadrature() {
        for fam in catalog::<f64>() {
            let m = fam.model().unwrap();
            if fam.closed_forms().psi_h.is_none() {
                continue;
            }
            for &x in &GRID {
                let a = m.psi_h(x).unwrap();
                let b = m.psi_h_quadrature(x).unwrap();
                assert!((a - b).abs() <= 1e-6 * b, "{} at {x}: {a} vs {b}", fam.id());
            }
        }
    }

    #[test]
    fn lookup_examples() {
        let f = lookup::<f64>("frechet", &BTreeMap::from([("theta".to_string(), 0.5)])).unwrap();
        assert!((f.distribution().psi(4.0).unwrap() - 2.0).abs() < 1e-15);
        let g = family::<f64>("german-linear").unwrap();
        assert!((g.distribution().psi(3.0).unwrap() - 0.75).abs() < 1e-15);
        assert!(matches!(family::<f64>("nonexistent"), Err(Error::UnknownFamily(_))));
        let s = family::<f64>("frechet-0.3").unwrap();
        assert_eq!(s.params()["theta"], 0.3);
        assert!(family::<f64>("galambos-0.3").is_err());
        assert!(lookup::<f64>("german-exp", &BTreeMap::from([("theta".to_string(), 1.0)])).is_err());
    }

    #[test]
    fn frechet_closed_ell() {
        assert!((closed_ell_frechet(0.5, 1.0, &[1.0, 1.0]) - 2f64.sqrt()).abs() < 1e-15);
        assert!((closed_ell_frechet(0.3f64, 2.0, &[1.5, 0.0, 0.0]) - 3.0).abs() < 1e-14);
        let m = family::<f64>("frechet").unwrap().model().unwrap();
        let t = [0.4, 1.3, 2.0];
        let a = m.ell(&t).unwrap();
        let b = m.ell_quadrature(&t).unwrap();
        assert!((a - b).abs() < 1e-5 * a);
    }

    #[test]
    fn frechet_law_invariance_across_l() {
        let fam = family::<f64>("frechet-0.5").unwrap();
        let a = fam.model().unwrap().normalized().unwrap();
        let b = fam.model_with(unit_exp_cp()).unwrap().normalized().unwrap();
        let mut rng = RngStream::new(21);
        for _ in 0..20 {
            let t: Vec<f64> = (0..3).map(|_| 0.1 + 2.0 * rng.uniform::<f64>()).collect();
            let x = a.ell_quadrature(&t).unwrap();
            let y = b.ell_quadrature(&t).unwrap();
            assert!((x - y).abs() < 1e-5 * x, "{x} vs {y}");
        }
    }

    #[test]
    fn exp_family_trivial_cases() {
        let p = |x: f64| Ok(german_exp_psi(x));
        assert!((closed_ell_exp_family(p, &[2.0]).unwrap() - 2.0 * german_exp_psi(1.0)).abs() < 1e-15);
        for d in 1..6 {
            let v = closed_ell_exp_family(p, &vec![1.0; d]).unwrap();
            assert!((v - german_exp_psi(d as f64)).abs() < 1e-13, "{d}");
        }
    }

    #[test]
    fn bondesson_tails_match_quadrature() {
        for id in ["bondesson-45", "bondesson-5", "bondesson-33", "bondesson-64"] {
            let rho = family::<f64>(id).unwrap().stieltjes().unwrap().clone();
            for &x in &GRID {
                let a = rho.psi(x).unwrap();
                let b = rho.psi_quadrature(x).unwrap();
                assert!((a - b).abs() < 1e-6 * b, "{id} psi at {x}: {a} vs {b}");
            }
            for y in [0.05, 0.2, 0.4, 1.0, 3.0] {
                if y >= rho.total_mass() {
                    continue;
                }
                let a = rho.tail_integral(y).unwrap();
                let q = Quadrature::new(1e-11);
                let b = q.integrate(|x| rho.g_inverse(x), y, rho.total_mass()).unwrap().value;
                assert!((a - b).abs() < 1e-7 * b, "{id} tail at {y}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn size_biased_samplers_have_right_mean() {
        // E[M] = int x^2 dF^z / Psi_F(z), checked against quadrature of 2 int x (1 - F^z)
        let mut rng = RngStream::new(77);
        for id in ["german-linear", "german-exp", "frechet-0.3", "galambos", "molchanov-floor", "molchanov-exp"] {
            let fam = family::<f64>(id).unwrap();
            let f = fam.distribution();
            for z in [0.4, 1.0, 3.0] {
                let psi = f.psi(z).unwrap();
                let q = Quadrature::new(1e-10).with_tail_scale(1.0);
                let second = q
                    .integrate_with_breaks(|x| 2.0 * x * f.one_minus_power(x, z), 0.0, f.right_support(), f.breakpoints())
                    .unwrap()
                    .value;
                let n = 40_000;
                let draws: Vec<f64> = (0..n).map(|_| f.sample_size_biased(z, &mut rng).unwrap()).collect();
                let mean = draws.iter().sum::<f64>() / n as f64;
                if !second.is_finite() {
                    continue;
                }
                let target = second / psi;
                let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
                assert!((mean - target).abs() < 4.5 * (var / n as f64).sqrt() + 1e-9, "{id} z={z}: {mean} vs {target}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn exp_family_is_homogeneous(t in proptest::collection::vec(0.05f64..5.0, 1..5), c in 0.1f64..10.0) {
            let p = |x: f64| Ok(german_exp_psi(x));
            let a = closed_ell_exp_family(p, &t).unwrap();
            let ct: Vec<f64> = t.iter().map(|v| v * c).collect();
            let b = closed_ell_exp_family(p, &ct).unwrap();
            prop_assert!((b - c * a).abs() < 1e-10 * b.max(1.0));
            // bounds: max t_k Psi_H(1) <= ell <= sum t_k Psi_H(1)
            let p1 = german_exp_psi(1.0);
            let mx = t.iter().copied().fold(0.0, f64::max);
            prop_assert!(a >= mx * p1 * (1.0 - 1e-12));
            prop_assert!(a <= t.iter().sum::<f64>() * p1 * (1.0 + 1e-12));
        }

        #[test]
        fn frechet_ell_ignores_zeros(t in proptest::collection::vec(0.0f64..5.0, 1..6), th in 0.05f64..0.95) {
            let nz: Vec<f64> = t.iter().copied().filter(|&x| x > 0.0).collect();
            prop_assert_eq!(closed_ell_frechet(th, 1.0, &t), closed_ell_frechet(th, 1.0, &nz));
        }
    }
}
