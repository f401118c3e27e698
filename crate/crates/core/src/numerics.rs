//! Adaptive quadrature and generalized inverses of monotone functions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::real::Real;

/// Shared scalar callable.
pub type RealFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationResult<T> {
    pub value: T,
    pub abs_error_estimate: T,
    pub evaluations: usize,
}

// Gauss-Kronrod 7/15 nodes and weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Rule<T> {
    value: T,
    error: T,
}

fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Rule<T> {
    let half = T::lit(0.5);
    let centr = half * (a + b);
    let hlgth = half * (b - a);
    let fc = f(centr);
    let mut resg = fc * T::lit(WG[3]);
    let mut resk = fc * T::lit(WGK[7]);
    let mut resabs = resk.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..3 {
        let jtw = 2 * j + 1;
        let absc = hlgth * T::lit(XGK[jtw]);
        let f1 = f(centr - absc);
        let f2 = f(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += T::lit(WG[j]) * (f1 + f2);
        resk += T::lit(WGK[jtw]) * (f1 + f2);
        resabs += T::lit(WGK[jtw]) * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let absc = hlgth * T::lit(XGK[jtwm1]);
        let f1 = f(centr - absc);
        let f2 = f(centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += T::lit(WGK[jtwm1]) * (f1 + f2);
        resabs += T::lit(WGK[jtwm1]) * (f1.abs() + f2.abs());
    }
    let reskh = resk * half;
    let mut resasc = T::lit(WGK[7]) * (fc - reskh).abs();
    for j in 0..7 {
        resasc += T::lit(WGK[j]) * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let h = hlgth.abs();
    let value = resk * hlgth;
    let resabs = resabs * h;
    let resasc = resasc * h;
    let mut err = ((resk - resg) * hlgth).abs();
    if resasc != T::zero() && err != T::zero() {
        err = resasc * T::one().min((T::lit(200.0) * err / resasc).powf(T::lit(1.5)));
    }
    let eps50 = T::epsilon() * T::lit(50.0);
    if resabs > T::min_positive_value() / eps50 {
        err = err.max(eps50 * resabs);
    }
    Rule { value, error: err }
}

#[derive(Clone, Copy)]
enum Piece<T> {
    Direct,
    Tail { base: T },
}

struct Interval<T> {
    a: T,
    b: T,
    piece: Piece<T>,
    value: T,
    error: T,
}

struct ByError(f64, usize);

impl PartialEq for ByError {
    fn eq(&self, o: &Self) -> bool {
        self.0 == o.0 && self.1 == o.1
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for ByError {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0).then(o.1.cmp(&self.1))
    }
}

/// Configuration of the global adaptive Gauss-Kronrod integrator.
///
/// Semi-infinite pieces `[p, inf)` are mapped onto `(0, 1)` through
/// `s = p + scale * (exp(u / (1 - u)) - 1)`, which keeps algebraically
/// decaying integrands bounded after the substitution.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_intervals: usize,
    pub tail_scale: T,
}

impl<T: Real> Default for Quadrature<T> {
    fn default() -> Self {
        Quadrature {
            rel_tol: T::attainable(T::lit(1e-8)),
            abs_tol: T::tiny_tol(),
            max_intervals: 4000,
            tail_scale: T::one(),
        }
    }
}

impl<T: Real> Quadrature<T> {
    pub fn new(rel_tol: T) -> Self {
        Quadrature {
            rel_tol: T::attainable(rel_tol),
            ..Self::default()
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: T) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_tail_scale(mut self, scale: T) -> Self {
        if scale > T::zero() && scale.is_finite() {
            self.tail_scale = scale;
        }
        self
    }

    pub fn with_max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n.max(1);
        self
    }

    pub fn integrate<F: Fn(T) -> T>(&self, f: F, lo: T, hi: T) -> Result<IntegrationResult<T>> {
        self.integrate_with_breaks(f, lo, hi, &[])
    }

    /// Integrates `f` over `[lo, hi]`, splitting at the interior points of `breaks`.
    pub fn integrate_with_breaks<F: Fn(T) -> T>(
        &self,
        f: F,
        lo: T,
        hi: T,
        breaks: &[T],
    ) -> Result<IntegrationResult<T>> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidArgument("integration limits are NaN".into()));
        }
        if lo > hi {
            let r = self.integrate_with_breaks(f, hi, lo, breaks)?;
            return Ok(IntegrationResult { value: -r.value, ..r });
        }
        if lo.is_infinite() {
            return Err(Error::InvalidArgument("lower limit must be finite".into()));
        }
        if lo == hi {
            return Ok(IntegrationResult {
                value: T::zero(),
                abs_error_estimate: T::zero(),
                evaluations: 1,
            });
        }
        let mut cuts: Vec<T> = breaks
            .iter()
            .copied()
            .filter(|b| b.is_finite() && *b > lo && *b < hi)
            .collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        cuts.dedup();
        let mut pts = Vec::with_capacity(cuts.len() + 2);
        pts.push(lo);
        pts.extend(cuts);
        let mut pieces: Vec<(T, T, Piece<T>)> = Vec::new();
        if hi.is_finite() {
            pts.push(hi);
            for w in pts.windows(2) {
                pieces.push((w[0], w[1], Piece::Direct));
            }
        } else {
            if pts.len() == 1 {
                // a finite first piece keeps endpoint singularities out of the tail map
                pts.push(lo + self.tail_scale.max(lo.abs() * T::epsilon()));
            }
            for w in pts.windows(2) {
                pieces.push((w[0], w[1], Piece::Direct));
            }
            let base = *pts.last().unwrap();
            pieces.push((T::zero(), T::one(), Piece::Tail { base }));
        }
        self.run(&f, pieces)
    }

    fn run<F: Fn(T) -> T>(&self, f: &F, pieces: Vec<(T, T, Piece<T>)>) -> Result<IntegrationResult<T>> {
        let scale = self.tail_scale;
        let tail_base = pieces.iter().find_map(|p| match p.2 {
            Piece::Tail { base } => Some(base),
            Piece::Direct => None,
        });
        let w_cap = T::max_value().ln() * T::lit(0.9);
        let eval = |piece: Piece<T>, x: T| -> T {
            match piece {
                Piece::Direct => f(x),
                Piece::Tail { base } => {
                    let one_minus = T::one() - x;
                    if one_minus <= T::zero() {
                        return T::zero();
                    }
                    let w = x / one_minus;
                    if w > w_cap {
                        return T::zero();
                    }
                    let e = w.exp();
                    let s = base + scale * (e - T::one());
                    let jac = scale * e / (one_minus * one_minus);
                    if !s.is_finite() || !jac.is_finite() {
                        return T::zero();
                    }
                    let v = f(s);
                    if v == T::zero() {
                        T::zero()
                    } else {
                        v * jac
                    }
                }
            }
        };
        let mut evaluations = 0usize;
        let mut intervals: Vec<Interval<T>> = Vec::new();
        let mut heap = BinaryHeap::new();
        let push = |a: T, b: T, piece: Piece<T>, intervals: &mut Vec<Interval<T>>, evaluations: &mut usize| {
            let r = gk15(&|x| eval(piece, x), a, b);
            *evaluations += 15;
            intervals.push(Interval {
                a,
                b,
                piece,
                value: r.value,
                error: r.error,
            });
            (r.value, r.error)
        };
        let mut total = T::zero();
        let mut total_err = T::zero();
        for (a, b, piece) in pieces {
            let (v, e) = push(a, b, piece, &mut intervals, &mut evaluations);
            total += v;
            total_err += e;
            heap.push(ByError(e.as_f64(), intervals.len() - 1));
        }
        let mut refreshed = 0usize;
        loop {
            if !total.is_finite() || total_err.is_nan() {
                return Err(Error::NonConvergence {
                    value: total.as_f64(),
                    abs_error: f64::INFINITY,
                    evaluations,
                });
            }
            let target = (self.rel_tol * total.abs()).max(self.abs_tol);
            if total_err <= target {
                break;
            }
            if intervals.len() >= self.max_intervals {
                // recompute sums exactly before giving up
                let (v, e) = exact_totals(&intervals);
                if e <= (self.rel_tol * v.abs()).max(self.abs_tol) {
                    total_err = e;
                    break;
                }
                return Err(Error::NonConvergence {
                    value: v.as_f64(),
                    abs_error: e.as_f64(),
                    evaluations,
                });
            }
            let Some(ByError(_, idx)) = heap.pop() else { break };
            let (a, b, piece, old_v, old_e) = {
                let iv = &intervals[idx];
                (iv.a, iv.b, iv.piece, iv.value, iv.error)
            };
            let m = a + (b - a) * T::lit(0.5);
            if !(m > a && m < b) {
                // cannot subdivide further; keep its contribution as is
                if heap.is_empty() {
                    let (v, e) = exact_totals(&intervals);
                    return Err(Error::NonConvergence {
                        value: v.as_f64(),
                        abs_error: e.as_f64(),
                        evaluations,
                    });
                }
                continue;
            }
            let (v1, e1) = push(a, m, piece, &mut intervals, &mut evaluations);
            let i1 = intervals.len() - 1;
            let (v2, e2) = push(m, b, piece, &mut intervals, &mut evaluations);
            let i2 = intervals.len() - 1;
            intervals[idx].value = T::zero();
            intervals[idx].error = T::zero();
            total += v1 + v2 - old_v;
            total_err += e1 + e2 - old_e;
            heap.push(ByError(e1.as_f64(), i1));
            heap.push(ByError(e2.as_f64(), i2));
            refreshed += 1;
            if refreshed % 64 == 0 {
                let (v, e) = exact_totals(&intervals);
                total = v;
                total_err = e;
            }
        }
        let (value, err) = exact_totals(&intervals);
        if let Some(base) = tail_base {
            // mass beyond the largest representable abscissa, per unit of log s
            let s_max = base + scale * w_cap.exp();
            let beyond = (f(s_max) * s_max).abs();
            if beyond.is_nan() || beyond > (self.rel_tol * value.abs()).max(self.abs_tol) {
                return Err(Error::NonConvergence {
                    value: value.as_f64(),
                    abs_error: f64::INFINITY,
                    evaluations,
                });
            }
        }
        Ok(IntegrationResult {
            value,
            abs_error_estimate: err.min(total_err.max(T::zero())).max(T::zero()),
            evaluations: evaluations.max(1),
        })
    }
}

fn exact_totals<T: Real>(iv: &[Interval<T>]) -> (T, T) {
    let v = compensated_sum(iv.iter().map(|i| i.value));
    let e = compensated_sum(iv.iter().map(|i| i.error));
    (v, e)
}

/// Integrates `f` over `[lo, hi]` (`hi` may be infinite) at relative tolerance `rel_tol`.
pub fn integrate_adaptive<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, rel_tol: T) -> Result<IntegrationResult<T>> {
    if !(rel_tol > T::zero() && rel_tol <= T::lit(1e-2)) {
        return Err(Error::InvalidArgument(format!("rel_tol {rel_tol} outside (0, 1e-2]")));
    }
    Quadrature::new(rel_tol).integrate(f, lo, hi)
}

/// Neumaier compensated summation.
pub fn compensated_sum<T: Real, I: IntoIterator<Item = T>>(it: I) -> T {
    let mut sum = T::zero();
    let mut c = T::zero();
    for x in it {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A monotone callable on an interval of `[0, inf]`, optionally with a
/// registered closed-form generalized inverse.
#[derive(Clone)]
pub struct MonotoneFn<T> {
    direction: Direction,
    lo: T,
    hi: T,
    eval: RealFn<T>,
    inverse: Option<RealFn<T>>,
}

impl<T: Real> MonotoneFn<T> {
    pub fn new(direction: Direction, lo: T, hi: T, eval: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self::from_arc(direction, lo, hi, Arc::new(eval))
    }

    pub fn from_arc(direction: Direction, lo: T, hi: T, eval: RealFn<T>) -> Self {
        MonotoneFn {
            direction,
            lo,
            hi,
            eval,
            inverse: None,
        }
    }

    pub fn with_inverse(mut self, inv: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.inverse = Some(Arc::new(inv));
        self
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn domain(&self) -> (T, T) {
        (self.lo, self.hi)
    }

    #[inline]
    pub fn eval(&self, x: T) -> T {
        (self.eval)(x)
    }

    pub fn has_closed_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    fn value_at_end(&self, x: T) -> T {
        let v = self.eval(x);
        if v.is_nan() && x.is_infinite() {
            self.eval(T::max_value())
        } else {
            v
        }
    }

    /// Closure of the range as `(min, max)`.
    pub fn range(&self) -> (T, T) {
        let a = self.value_at_end(self.lo);
        let b = self.value_at_end(self.hi);
        match self.direction {
            Direction::Increasing => (a, b),
            Direction::Decreasing => (b, a),
        }
    }

    /// Checks monotonicity on `n` points spread over the domain.
    pub fn spot_check(&self, n: usize) -> bool {
        let grid = probe_grid(self.lo, self.hi, n);
        let vals: Vec<T> = grid.iter().map(|&x| self.eval(x)).collect();
        vals.windows(2).all(|w| match self.direction {
            Direction::Increasing => w[1] >= w[0],
            Direction::Decreasing => w[1] <= w[0],
        })
    }
}

/// Points spread over `[lo, hi]`, geometric when the interval is long.
pub(crate) fn probe_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    let n = n.max(2);
    let top = if hi.is_finite() { hi } else { lo.max(T::one()) * T::lit(1e6) };
    let mut g = Vec::with_capacity(2 * n);
    for i in 0..n {
        let f = T::from_usize_lossy(i) / T::from_usize_lossy(n - 1);
        g.push(lo + (top - lo) * f);
    }
    if !hi.is_finite() || top - lo > T::lit(100.0) {
        let base = if lo > T::zero() { lo } else { T::lit(1e-6) };
        for i in 0..n {
            let f = T::from_usize_lossy(i) / T::from_usize_lossy(n - 1);
            g.push(base * (top / base).powf(f));
        }
    }
    g.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    g.dedup();
    g
}

/// Generalized inverse: `inf{x : g(x) >= y}` for increasing `g` and
/// `inf{x : g(x) <= y}` for decreasing `g`.
pub fn generalized_inverse<T: Real>(g: &MonotoneFn<T>, y: T) -> Result<T> {
    check_range(g, y)?;
    match &g.inverse {
        Some(inv) => Ok(inv(y)),
        None => Ok(bisect(g, y, false)),
    }
}

/// Same as [`generalized_inverse`] but always by bisection.
pub fn bisect_inverse<T: Real>(g: &MonotoneFn<T>, y: T) -> Result<T> {
    check_range(g, y)?;
    Ok(bisect(g, y, false))
}

/// Strict variant: `inf{x : g(x) > y}` (increasing) or `inf{x : g(x) < y}`
/// (decreasing). Gives left limits of the generalized inverse.
pub fn bisect_inverse_strict<T: Real>(g: &MonotoneFn<T>, y: T) -> Result<T> {
    check_range(g, y)?;
    Ok(bisect(g, y, true))
}

fn check_range<T: Real>(g: &MonotoneFn<T>, y: T) -> Result<()> {
    let (a, b) = g.range();
    let slack = T::tiny_tol() * (T::one() + y.abs());
    if y.is_nan() || y < a - slack || y > b + slack {
        return Err(Error::OutOfRange {
            value: y.as_f64(),
            lo: a.as_f64(),
            hi: b.as_f64(),
        });
    }
    Ok(())
}

fn bisect<T: Real>(g: &MonotoneFn<T>, y: T, strict: bool) -> T {
    let pred = |x: T| -> bool {
        let v = g.eval(x);
        match (g.direction, strict) {
            (Direction::Increasing, false) => v >= y,
            (Direction::Increasing, true) => v > y,
            (Direction::Decreasing, false) => v <= y,
            (Direction::Decreasing, true) => v < y,
        }
    };
    first_true(pred, g.lo, g.hi)
}

/// Smallest point of `[lo, hi]` where a monotone predicate (false then true)
/// holds, to `max(1e-12, 4 eps |x|)`. Returns `hi` when it never holds.
pub fn first_true<T: Real, P: Fn(T) -> bool>(pred: P, lo: T, hi: T) -> T {
    if pred(lo) {
        return lo;
    }
    let mut a = lo;
    let mut b;
    if hi.is_finite() {
        b = hi;
        if !pred(b) {
            return hi;
        }
    } else {
        b = if lo > T::zero() { lo * T::lit(2.0) } else { T::one() };
        while !pred(b) {
            a = b;
            b = b * T::lit(2.0);
            if !b.is_finite() {
                return T::infinity();
            }
        }
    }
    let two = T::lit(2.0);
    for _ in 0..4000 {
        let tol = T::tiny_tol().max(T::lit(4.0) * T::epsilon() * b.abs());
        if b - a <= tol {
            break;
        }
        let m = a + (b - a) / two;
        if !(m > a && m < b) {
            break;
        }
        if pred(m) {
            b = m;
        } else {
            a = m;
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_on_half_line() {
        let r = integrate_adaptive(|s: f64| (-s).exp(), 0.0, f64::INFINITY, 1e-10).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
        assert!(r.evaluations >= 1 && r.abs_error_estimate >= 0.0);
    }

    #[test]
    fn triangle_area() {
        let r = integrate_adaptive(|s: f64| 1.0 - s.min(1.0), 0.0, f64::INFINITY, 1e-8).unwrap();
        assert!((r.value - 0.5).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn german_linear_psi_at_two() {
        let r = integrate_adaptive(|s: f64| 1.0 - s.min(1.0).powi(2), 0.0, f64::INFINITY, 1e-8).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn algebraic_tail() {
        // int_1^inf s^{-1.25} ds = 4
        let r = Quadrature::default()
            .integrate(|s: f64| s.powf(-1.25), 1.0, f64::INFINITY)
            .unwrap();
        assert!((r.value - 4.0).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn endpoint_singularity() {
        let r = Quadrature::default().integrate(|s: f64| 1.0 / s.sqrt(), 0.0, 1.0).unwrap();
        assert!((r.value - 2.0).abs() < 1e-7, "{}", r.value);
    }

    #[test]
    fn breaks_handle_jumps() {
        let f = |s: f64| if s < 0.3 { 1.0 } else { 0.0 };
        let r = Quadrature::default().integrate_with_breaks(f, 0.0, 1.0, &[0.3]).unwrap();
        assert!((r.value - 0.3).abs() < 1e-14);
    }

    #[test]
    fn reversed_and_empty() {
        let q = Quadrature::<f64>::default();
        assert_eq!(q.integrate(|s| s, 1.0, 1.0).unwrap().value, 0.0);
        let r = q.integrate(|s| s, 1.0, 0.0).unwrap();
        assert!((r.value + 0.5).abs() < 1e-14);
    }

    #[test]
    fn divergent_integral_reports() {
        let q = Quadrature::<f64>::default().with_max_intervals(200);
        let e = q.integrate(|s| 1.0 / s, 1.0, f64::INFINITY).unwrap_err();
        assert!(matches!(e, Error::NonConvergence { .. }));
    }

    #[test]
    fn deterministic() {
        let f = |s: f64| (s * 3.0).sin().abs() * (-s).exp();
        let a = Quadrature::default().integrate(f, 0.0, f64::INFINITY).unwrap();
        let b = Quadrature::default().integrate(f, 0.0, f64::INFINITY).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_precision() {
        let r = Quadrature::<f32>::default().integrate(|s| (-s).exp(), 0.0, f32::INFINITY).unwrap();
        assert!((r.value - 1.0).abs() < 1e-5);
    }

    #[test]
    fn inverse_of_exponential_survival() {
        let g = MonotoneFn::new(Direction::Decreasing, 0.0, f64::INFINITY, |t: f64| (-t).exp());
        let x = generalized_inverse(&g, 0.5).unwrap();
        assert!((x - 2f64.ln()).abs() < 1e-11);
    }

    #[test]
    fn inverse_of_uniform_cdf() {
        let g = MonotoneFn::new(Direction::Increasing, 0.0, f64::INFINITY, |x: f64| x.min(1.0));
        assert!((generalized_inverse(&g, 0.25).unwrap() - 0.25).abs() < 1e-12);
        assert!((generalized_inverse(&g, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(generalized_inverse(&g, 0.0).unwrap(), 0.0);
        assert!(matches!(generalized_inverse(&g, 1.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn inverse_with_flat_piece_takes_infimum() {
        // jumps from 0.2 to 0.6 at x = 1, flat at 0.6 on [1, 2)
        let g = MonotoneFn::new(Direction::Increasing, 0.0, 4.0, |x: f64| {
            if x < 1.0 {
                0.2 * x
            } else if x < 2.0 {
                0.6
            } else {
                (0.6 + 0.1 * (x - 2.0)).min(0.8)
            }
        });
        assert!((bisect_inverse(&g, 0.4).unwrap() - 1.0).abs() < 1e-11);
        assert!((bisect_inverse(&g, 0.6).unwrap() - 1.0).abs() < 1e-11);
        assert!((bisect_inverse_strict(&g, 0.6).unwrap() - 2.0).abs() < 1e-11);
    }

    #[test]
    fn compensated_alternating() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v.iter().copied()), 2.0);
    }

    #[test]
    fn rejects_silly_tolerance() {
        assert!(integrate_adaptive(|s: f64| s, 0.0, 1.0, 0.5).is_err());
    }
}
