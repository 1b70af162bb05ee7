//! One-dimensional quadrature: adaptive Gauss–Kronrod, mapped infinite ranges,
//! product integration against power weights, and compensated summation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// 15-point Kronrod nodes on [0, 1] (symmetric), with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate and |Kronrod − Gauss| on one interval.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let dx = hl * XGK[j];
        let s = f(c - dx) + f(c + dx);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * hl, ((rk - rg) * hl).abs())
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-13,
            rel: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            ..Default::default()
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive G7–K15 on a finite interval, bisecting the worst segment
/// until the summed error estimate meets the tolerance.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> QuadResult {
    integrate_pieces(&mut f, &[a, b], tol)
}

/// Like [`integrate`], but starts from the given breakpoints (sorted, ≥ 2 entries),
/// which is how kinks and sharp peaks are handed to the integrator.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(f: &mut F, points: &[f64], tol: Tolerance) -> QuadResult {
    let mut heap = BinaryHeap::new();
    let mut evals = 0;
    let mut total = 0.0;
    let mut err = 0.0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gk15(f, w[0], w[1]);
            evals += 15;
            total += value;
            err += error;
            heap.push(Segment { a: w[0], b: w[1], value, error });
        }
    }
    while err > tol.abs.max(tol.rel * total.abs()) && heap.len() < tol.max_intervals {
        let worst = heap.pop().expect("non-empty");
        total -= worst.value;
        err -= worst.error;
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // Interval cannot be split further in floating point.
            total += worst.value;
            heap.push(Segment { error: 0.0, ..worst });
            continue;
        }
        for (a, b) in [(worst.a, m), (m, worst.b)] {
            let (value, error) = gk15(f, a, b);
            evals += 15;
            total += value;
            err += error;
            heap.push(Segment { a, b, value, error });
        }
        // The running error drifts through cancellation; keep it honest.
        err = err.max(0.0);
    }
    QuadResult {
        value: sum_compensated(heap.iter().map(|s| s.value)),
        error: heap.iter().map(|s| s.error).sum(),
        evaluations: evals,
    }
}

/// `∫_x0^∞ f`, `x0 > 0`, via `x = x0/w²` which maps power-law tails to smooth
/// integrands on `(0, 1]`.
pub fn integrate_tail<F: FnMut(f64) -> f64>(mut f: F, x0: f64, tol: Tolerance) -> QuadResult {
    assert!(x0 > 0.0, "tail start must be positive");
    let g = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let x = x0 / (w * w);
        if !x.is_finite() {
            return 0.0;
        }
        let v = f(x) * 2.0 * x0 / (w * w * w);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, tol)
}

/// `∫_a^b f` in the variable `t = ln x`, for `0 < a < b` spanning many decades.
pub fn integrate_log<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> QuadResult {
    let g = |t: f64| {
        let x = t.exp();
        f(x) * x
    };
    integrate(g, a.ln(), b.ln(), tol)
}

/// `∫_{−∞}^{∞} f` with the finite part split at `breakpoints` (sorted) and both
/// tails mapped. The outermost breakpoints should bracket all structure of `f`.
pub fn integrate_real_line<F: FnMut(f64) -> f64>(mut f: F, breakpoints: &[f64], tol: Tolerance) -> QuadResult {
    assert!(breakpoints.len() >= 2);
    let lo = breakpoints[0];
    let hi = breakpoints[breakpoints.len() - 1];
    let mid = integrate_pieces(&mut f, breakpoints, tol);
    // Shift tails to start at distance ≥ 1 from the origin so the map is well scaled.
    let right = {
        let off = if hi > 1.0 { 0.0 } else { 1.0 - hi };
        let head = if off > 0.0 {
            integrate(&mut f, hi, hi + off, tol)
        } else {
            QuadResult { value: 0.0, error: 0.0, evaluations: 0 }
        };
        let x0 = hi + off;
        let t = integrate_tail(|x| f(x), x0, tol);
        QuadResult {
            value: head.value + t.value,
            error: head.error + t.error,
            evaluations: head.evaluations + t.evaluations,
        }
    };
    let left = {
        let off = if lo < -1.0 { 0.0 } else { lo + 1.0 };
        let head = if off > 0.0 {
            integrate(&mut f, lo - off, lo, tol)
        } else {
            QuadResult { value: 0.0, error: 0.0, evaluations: 0 }
        };
        let x0 = -(lo - off);
        let t = integrate_tail(|x| f(-x), x0, tol);
        QuadResult {
            value: head.value + t.value,
            error: head.error + t.error,
            evaluations: head.evaluations + t.evaluations,
        }
    };
    QuadResult {
        value: left.value + mid.value + right.value,
        error: left.error + mid.error + right.error,
        evaluations: left.evaluations + mid.evaluations + right.evaluations,
    }
}

/// Breakpoints `c ± w·2^j` for `j` in `[−fine, coarse]` plus `c` itself: resolves
/// a peak at `c` of width `w` together with its algebraic decay.
pub fn geometric_breakpoints(c: f64, w: f64, fine: i32, coarse: i32) -> Vec<f64> {
    let mut pts = vec![c];
    for j in -fine..=coarse {
        let d = w * 2f64.powi(j);
        pts.push(c - d);
        pts.push(c + d);
    }
    pts
}

/// Sorts, drops non-finite values and merges points closer than `eps` relative.
pub fn normalize_breakpoints(mut pts: Vec<f64>) -> Vec<f64> {
    pts.retain(|x| x.is_finite());
    pts.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    for x in pts {
        match out.last() {
            Some(&y) if (x - y).abs() <= 1e-14 * x.abs().max(y.abs()).max(1e-300) => {}
            _ => out.push(x),
        }
    }
    out
}

/// Weights `(w_lo, w_hi)` such that `∫_a^b g(x) x^e dx = w_lo g(a) + w_hi g(b)`
/// exactly for `g` linear on `[a, b]`. Requires `0 ≤ a < b` and `e > −1`.
pub fn power_weight_linear(a: f64, b: f64, e: f64) -> (f64, f64) {
    // M_k = ∫_a^b x^{e+k} dx.
    let m = |k: f64| (b.powf(e + k + 1.0) - a.powf(e + k + 1.0)) / (e + k + 1.0);
    let (m0, m1) = (m(0.0), m(1.0));
    let d = b - a;
    ((b * m0 - m1) / d, (m1 - a * m0) / d)
}

/// Neumaier-compensated sum; independent of chunking, so results do not depend
/// on how work was scheduled as long as the input order is fixed.
pub fn sum_compensated<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for x in it {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

/// Surface area of the unit sphere `S^{N−1}`.
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(h) / statrs::function::gamma::gamma(h)
}
