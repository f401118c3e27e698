//! Pickands vectors and exact simulation of the max-stable copula whose
//! stable tail dependence function is `ell`.

use crate::bernstein::DistributionF;
use crate::error::{invalid, Error, Result};
use crate::idt::IdtModel;
use crate::numerics::compensated_sum;
use crate::real::Real;
use crate::rng::RngStream;
use crate::samplers::ZSampler;

/// A point of the unit simplex whose components sum to exactly one in
/// sequential floating point addition.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexPoint<T>(Vec<T>);

impl<T: Real> SimplexPoint<T> {
    /// Normalizes non-negative weights with a positive finite sum.
    pub fn from_weights(w: &[T]) -> Result<Self> {
        if w.is_empty() || w.iter().any(|&x| !(x >= T::zero()) || !x.is_finite()) {
            return Err(invalid("weights must be finite and non-negative"));
        }
        let s: T = compensated_sum(w.iter().copied());
        if !(s > T::zero()) {
            return Err(invalid("weights sum to zero"));
        }
        let mut q: Vec<T> = w.iter().map(|&x| x / s).collect();
        let last = q.len() - 1;
        if last == 0 {
            return Ok(SimplexPoint(vec![T::one()]));
        }
        // with head = fl(q_0 + ... + q_{d-2}) <= 1, the last entry 1 - head
        // closes the sequential sum exactly
        for _ in 0..8 {
            let head = seq_sum(&q[..last]);
            if head <= T::one() {
                q[last] = T::one() - head;
                if seq_sum(&q) == T::one() {
                    return Ok(SimplexPoint(q));
                }
                break;
            }
            let imax = (0..last).fold(0, |b, i| if q[i] > q[b] { i } else { b });
            q[imax] = (q[imax] - (head - T::one())).max(T::zero());
        }
        let imax = (0..q.len()).fold(0, |b, i| if q[i] > q[b] { i } else { b });
        for idx in [last, imax] {
            if seq_sum(&q) == T::one() {
                break;
            }
            ulp_search(&mut q, idx);
        }
        Ok(SimplexPoint(q))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

fn seq_sum<T: Real>(q: &[T]) -> T {
    q.iter().fold(T::zero(), |a, &b| a + b)
}

// walks q[idx] through neighbouring floats until the sequential sum is 1
fn ulp_search<T: Real>(q: &mut [T], idx: usize) {
    let x0 = q[idx];
    let step = (T::epsilon() * x0.abs() / T::lit(2.0)).max(T::epsilon() * T::epsilon());
    for k in 1..=256 {
        for sign in [T::one(), -T::one()] {
            let x = x0 + sign * T::from_usize_lossy(k) * step;
            if x < T::zero() {
                continue;
            }
            q[idx] = x;
            if seq_sum(q) == T::one() {
                return;
            }
        }
    }
    q[idx] = x0;
}

/// Draw from `x dF^z(x) / Psi_F(z)`.
///
/// Uses the registered sampler when present, the point `u_F` for
/// `z = inf`, rejection from `F^z` with acceptance `x / u_F` when `u_F` is
/// finite, and fails otherwise.
pub fn sample_m<T: Real>(f: &DistributionF<T>, z: T, rng: &mut RngStream) -> Result<T> {
    if z.is_infinite() {
        return Ok(f.right_support());
    }
    if f.has_size_biased_sampler() {
        return f.sample_size_biased(z, rng);
    }
    let uf = f.right_support();
    if !uf.is_finite() {
        return Err(Error::MSamplerUnavailable(f.label().to_string()));
    }
    for _ in 0..50_000_000usize {
        let x = f.sample_power(z, rng);
        if rng.uniform::<T>() * uf <= x {
            return Ok(x);
        }
    }
    Err(Error::MSamplerUnavailable("acceptance rate too small".into()))
}

/// Sampler of the Pickands vector `Q = W / sum W`, where `W` has one
/// coordinate (chosen uniformly) drawn from the size-biased law and the rest
/// iid from `F^Z`.
#[derive(Clone)]
pub struct PickandsSampler<T> {
    f: DistributionF<T>,
    z: ZSampler<T>,
    d: usize,
}

impl<T: Real> PickandsSampler<T> {
    pub fn new(model: &IdtModel<T>, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(invalid("dimension must be at least 2"));
        }
        if !model.is_normalized() {
            return Err(invalid("the model must be normalized so that Psi_H(1) = 1"));
        }
        let f = model.distribution().clone();
        if !f.has_size_biased_sampler() && !f.right_support().is_finite() {
            return Err(Error::MSamplerUnavailable(f.label().to_string()));
        }
        Ok(PickandsSampler {
            f,
            z: ZSampler::new(model)?,
            d,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// The raw vector `W` before normalization.
    pub fn sample_w(&self, rng: &mut RngStream) -> Result<Vec<T>> {
        let big_d = rng.index(self.d);
        let z = self.z.sample(rng)?;
        let mut w = Vec::with_capacity(self.d);
        for k in 0..self.d {
            w.push(if k == big_d { sample_m(&self.f, z, rng)? } else { self.f.sample_power(z, rng) });
        }
        Ok(w)
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<SimplexPoint<T>> {
        let w = self.sample_w(rng)?;
        SimplexPoint::from_weights(&w)
    }
}

/// One vector with unit Frechet margins and the number of Pickands draws used.
#[derive(Clone, Debug, PartialEq)]
pub struct CopulaDraw<T> {
    pub frechet: Vec<T>,
    pub stopping: usize,
}

impl<T: Real> CopulaDraw<T> {
    /// `U_j = exp(-1 / Z_j)`, clamped to the largest value below 1.
    pub fn uniforms(&self) -> Vec<T> {
        let below_one = T::one() - T::epsilon() / T::lit(2.0);
        self.frechet.iter().map(|&z| (-T::one() / z).exp().min(below_one)).collect()
    }

    /// `Y_j = 1 / Z_j`, a min-stable vector with unit exponential margins.
    pub fn minstable(&self) -> Vec<T> {
        self.frechet.iter().map(|&z| T::one() / z).collect()
    }
}

/// Exact sampler of `Z_j = max_k d Q_j^(k) / Gamma_k`.
#[derive(Clone)]
pub struct CopulaSampler<T> {
    q: PickandsSampler<T>,
}

impl<T: Real> CopulaSampler<T> {
    pub fn new(model: &IdtModel<T>, d: usize) -> Result<Self> {
        Ok(CopulaSampler {
            q: PickandsSampler::new(model, d)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<CopulaDraw<T>> {
        let d = self.q.dim();
        let dd = T::from_usize_lossy(d);
        let mut z = vec![T::zero(); d];
        let mut zmin = T::zero();
        let mut gamma = T::zero();
        let mut n = 0usize;
        loop {
            gamma += rng.exp1::<T>();
            if n > 0 && dd / gamma < zmin {
                break;
            }
            let q = self.q.sample(rng)?;
            for (zj, &qj) in z.iter_mut().zip(q.as_slice()) {
                let v = dd * qj / gamma;
                if v > *zj {
                    *zj = v;
                }
            }
            zmin = z.iter().copied().fold(T::infinity(), T::min);
            n += 1;
        }
        Ok(CopulaDraw { frechet: z, stopping: n })
    }
}

/// Draw of the min-stable exponential vector `Y = 1 / Z`.
pub fn sample_minstable<T: Real>(model: &IdtModel<T>, d: usize, rng: &mut RngStream) -> Result<Vec<T>> {
    Ok(CopulaSampler::new(model, d)?.sample(rng)?.minstable())
}

/// `E[N] = -d sum_{k=1}^d C(d, k) (-1)^k / Psi_H(k)` for a normalized model.
pub fn expected_stopping<T: Real>(model: &IdtModel<T>, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(invalid("dimension must be positive"));
    }
    let mut terms = Vec::with_capacity(d);
    let mut binom = 1.0f64;
    for k in 1..=d {
        binom = binom * (d - k + 1) as f64 / k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let p = model.psi_h(T::from_usize_lossy(k))?.as_f64();
        terms.push(sign * binom / p);
    }
    Ok(-(d as f64) * compensated_sum(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::LevyMeasure;
    use crate::idt::check_admissible;
    use proptest::prelude::*;

    fn linear_normalized() -> IdtModel<f64> {
        let f = DistributionF::builder("linear", |x: f64| x.clamp(0.0, 1.0))
            .support(0.0, 1.0)
            .mean(0.5)
            .neg_log_cdf(|x: f64| if x <= 0.0 { f64::INFINITY } else if x >= 1.0 { 0.0 } else { -x.ln() })
            .psi(|y: f64| y / (y + 1.0))
            .power_sampler(|z: f64, r: &mut RngStream| r.uniform::<f64>().powf(1.0 / z))
            .size_biased_sampler(|z: f64, r: &mut RngStream| r.uniform::<f64>().powf(1.0 / (z + 1.0)))
            .build()
            .unwrap();
        let l = LevyMeasure::exponential(1.0, 1.0).unwrap().into();
        IdtModel::new(check_admissible(&f, &l).unwrap()).unwrap().normalized().unwrap()
    }

    proptest! {
        #[test]
        fn simplex_sums_to_one(w in proptest::collection::vec(0.0f64..1e6, 2..12)) {
            prop_assume!(w.iter().sum::<f64>() > 0.0);
            let p = SimplexPoint::from_weights(&w).unwrap();
            let s = p.as_slice().iter().fold(0.0, |a, &b| a + b);
            prop_assert_eq!(s, 1.0);
            prop_assert!(p.as_slice().iter().all(|&q| q >= 0.0));
        }

        #[test]
        fn simplex_sums_to_one_wide_range(e in proptest::collection::vec(-60.0f64..60.0, 2..10)) {
            let w: Vec<f64> = e.iter().map(|x| x.exp()).collect();
            let p = SimplexPoint::from_weights(&w).unwrap();
            prop_assert_eq!(p.as_slice().iter().fold(0.0, |a, &b| a + b), 1.0);
            for (q, x) in p.as_slice().iter().zip(&w) {
                prop_assert!((q - x / w.iter().sum::<f64>()).abs() < 1e-14);
            }
        }

        #[test]
        fn simplex_sums_to_one_f32(w in proptest::collection::vec(0.0f32..1e3, 2..8)) {
            prop_assume!(w.iter().sum::<f32>() > 0.0);
            let p = SimplexPoint::from_weights(&w).unwrap();
            let s = p.as_slice().iter().fold(0.0f32, |a, &b| a + b);
            prop_assert_eq!(s, 1.0f32);
            prop_assert!(p.as_slice().iter().all(|&q| q >= 0.0));
        }
    }

    #[test]
    fn pickands_mean_is_uniform() {
        let m = linear_normalized();
        let s = PickandsSampler::new(&m, 3).unwrap();
        let mut rng = RngStream::new(2);
        let n = 30_000;
        let mut acc = [0.0; 3];
        for _ in 0..n {
            let q = s.sample(&mut rng).unwrap();
            for j in 0..3 {
                acc[j] += q.as_slice()[j];
            }
        }
        for a in acc {
            let mean = a / n as f64;
            assert!((mean - 1.0 / 3.0).abs() < 0.01, "{mean}");
        }
    }

    #[test]
    fn generic_m_matches_registered() {
        let m = linear_normalized();
        let f = m.distribution();
        let plain = DistributionF::builder("linear", |x: f64| x.clamp(0.0, 1.0)).support(0.0, 1.0).build().unwrap();
        let mut rng = RngStream::new(4);
        let n = 40_000;
        let z = 1.7;
        let a = (0..n).map(|_| sample_m(&plain, z, &mut rng).unwrap()).sum::<f64>() / n as f64;
        // E[M] = (z + 1) / (z + 2) for the uniform F
        assert!((a - (z + 1.0) / (z + 2.0)).abs() < 0.01);
        assert!(f.has_size_biased_sampler());
    }

    #[test]
    fn stopping_bound() {
        let m = linear_normalized();
        for d in 2..6 {
            let e = expected_stopping(&m, d).unwrap();
            assert!(e > 0.0 && e <= (d * d) as f64, "{d}: {e}");
        }
    }
}
