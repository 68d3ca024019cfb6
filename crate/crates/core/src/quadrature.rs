//! Adaptive quadrature used by the spectral and dynamics modules.
//!
//! Integrals run over a list of [`Segment`]s refined together under one
//! global error budget (21-point Gauss-Kronrod rule, QUADPACK error
//! heuristic). A semi-infinite tail `[w, ∞)` is mapped to `u ∈ (0, 1]` by
//! `ω = w/u`, which turns a `1/ω²` decay into a bounded integrand.
//!
//! Fourier-type tails `∫_w^∞ f(ω) cos ωt dω` are summed over the
//! half-periods between consecutive zeros of the kernel; the partial sums
//! form an alternating sequence that is extrapolated with Wynn's epsilon
//! algorithm.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64) -> Self {
        Tolerance { rel, abs }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-7,
            abs: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Finite(f64, f64),
    /// `[start, ∞)`.
    Tail(f64),
}

const MAX_REFINEMENTS: usize = 20_000;
const MAX_FOURIER_PANELS: usize = 20_000;

// Gauss-Kronrod 21-point abscissae and weights (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_048,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss 10-point weights for the odd Kronrod nodes (indices 1, 3, ..., 9).
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Panel {
    seg: Segment,
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One GK21 application on `[lo, hi]` of `g`. Returns (value, error).
fn gk21<F: FnMut(f64) -> f64>(g: &mut F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = g(center);
    if !fc.is_finite() {
        return Err(Error::NonFinite(center));
    }
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = g(center - dx);
        let f2 = g(center + dx);
        if !f1.is_finite() {
            return Err(Error::NonFinite(center - dx));
        }
        if !f2.is_finite() {
            return Err(Error::NonFinite(center + dx));
        }
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    resasc *= half.abs();
    resabs *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let eps = f64::EPSILON;
    if resabs > f64::MIN_POSITIVE / (50.0 * eps) {
        err = err.max(50.0 * eps * resabs);
    }
    Ok((value, err))
}

fn eval_panel<F: FnMut(f64) -> f64>(f: &mut F, seg: Segment, lo: f64, hi: f64) -> Result<Panel> {
    let (value, error) = match seg {
        Segment::Finite(..) => gk21(f, lo, hi)?,
        Segment::Tail(w) => {
            let mut g = |u: f64| {
                let x = w / u;
                f(x) * w / (u * u)
            };
            gk21(&mut g, lo, hi)?
        }
    };
    Ok(Panel {
        seg,
        lo,
        hi,
        value,
        error,
    })
}

/// Integrates `f` over the union of `segments` to the requested tolerance.
pub fn integrate_segments<F: FnMut(f64) -> f64>(
    mut f: F,
    segments: &[Segment],
    tol: Tolerance,
) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for &seg in segments {
        let (lo, hi) = match seg {
            Segment::Finite(a, b) => (a, b),
            Segment::Tail(_) => (0.0, 1.0),
        };
        if hi <= lo {
            continue;
        }
        heap.push(eval_panel(&mut f, seg, lo, hi)?);
        evaluations += 21;
    }
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    for _ in 0..MAX_REFINEMENTS {
        let total: f64 = heap.iter().map(|p| p.value).sum::<f64>() + frozen_value;
        let err: f64 = heap.iter().map(|p| p.error).sum::<f64>() + frozen_error;
        if err <= tol.target(total) || heap.is_empty() {
            return Ok(Estimate {
                value: total,
                error: err,
                evaluations,
            });
        }
        let worst = heap.pop().unwrap();
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) || (worst.hi - worst.lo) < 1e-14 * worst.hi.abs() {
            // cannot split further; keep its contribution as-is
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        let left = eval_panel(&mut f, worst.seg, worst.lo, mid)?;
        let right = eval_panel(&mut f, worst.seg, mid, worst.hi)?;
        evaluations += 42;
        heap.push(left);
        heap.push(right);
    }
    let total: f64 = heap.iter().map(|p| p.value).sum::<f64>() + frozen_value;
    let err: f64 = heap.iter().map(|p| p.error).sum::<f64>() + frozen_error;
    if err <= tol.target(total) {
        Ok(Estimate {
            value: total,
            error: err,
            evaluations,
        })
    } else {
        Err(Error::QuadratureFailed {
            what: "adaptive Gauss-Kronrod".into(),
            error: err,
            tolerance: tol.target(total),
        })
    }
}

pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    integrate_segments(f, &[Segment::Finite(a, b)], tol)
}

/// Segments covering `[a, ∞)`, split at the given interior breakpoints.
pub fn semi_infinite_segments(a: f64, breakpoints: &[f64]) -> Vec<Segment> {
    let mut pts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x.is_finite())
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs());
    let mut segs = Vec::with_capacity(pts.len() + 1);
    let mut lo = a;
    for &p in &pts {
        segs.push(Segment::Finite(lo, p));
        lo = p;
    }
    if lo <= 0.0 {
        segs.push(Segment::Finite(lo, 1.0));
        lo = 1.0;
    }
    segs.push(Segment::Tail(lo));
    segs
}

pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<Estimate> {
    integrate_segments(f, &semi_infinite_segments(a, breakpoints), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Cos,
    Sin,
}

impl Kernel {
    fn eval(self, x: f64) -> f64 {
        match self {
            Kernel::Cos => x.cos(),
            Kernel::Sin => x.sin(),
        }
    }

    /// Phase offset of the kernel zeros in units of π: zeros at (m + offset)π.
    fn zero_offset(self) -> f64 {
        match self {
            Kernel::Cos => 0.5,
            Kernel::Sin => 0.0,
        }
    }
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
pub fn wynn_epsilon(sums: &[f64]) -> f64 {
    let n = sums.len();
    if n < 3 {
        return *sums.last().unwrap_or(&0.0);
    }
    // column k holds ε_k^{(j)} for j = 0..n-k
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = sums.to_vec();
    let mut best = sums[n - 1];
    for k in 1..n {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for j in 0..cur.len() - 1 {
            let diff = cur[j + 1] - cur[j];
            if diff == 0.0 || !diff.is_finite() {
                return if k % 2 == 1 { cur[j + 1] } else { best };
            }
            next.push(prev[j + 1] + 1.0 / diff);
        }
        prev = cur;
        cur = next;
        if k % 2 == 0 {
            if let Some(&v) = cur.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
        if cur.len() < 2 {
            break;
        }
    }
    best
}

/// `∫_start^∞ f(ω) k(ωt) dω` for `t > 0`, with `f` decaying at least like `1/ω`.
pub fn fourier_tail<F: FnMut(f64) -> f64>(
    mut f: F,
    start: f64,
    t: f64,
    kernel: Kernel,
    tol: Tolerance,
) -> Result<Estimate> {
    assert!(t > 0.0);
    let half = PI / t;
    let off = kernel.zero_offset();
    // first kernel zero strictly above `start`
    let m0 = ((start / half) - off).floor() + 1.0;
    let mut edges_lo = start;
    let mut edges_hi = (m0 + off) * half;
    let mut sums: Vec<f64> = Vec::new();
    let mut running = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut last_extrapolated = f64::NAN;
    let mut stable = 0;
    // panel tolerance: a small share of the absolute target
    let panel_tol = Tolerance::new(tol.rel * 1e-2, tol.abs * 1e-2);
    for _ in 0..MAX_FOURIER_PANELS {
        let est = integrate(|w| f(w) * kernel.eval(w * t), edges_lo, edges_hi, panel_tol)?;
        running += est.value;
        error += est.error;
        evaluations += est.evaluations;
        sums.push(running);
        edges_lo = edges_hi;
        edges_hi += half;
        if sums.len() >= 6 {
            let window = &sums[sums.len().saturating_sub(40)..];
            let extrapolated = wynn_epsilon(window);
            let target = tol.target(extrapolated).max(1e-300);
            if (extrapolated - last_extrapolated).abs() <= 0.1 * target {
                stable += 1;
                if stable >= 3 {
                    return Ok(Estimate {
                        value: extrapolated,
                        error: error + (extrapolated - last_extrapolated).abs(),
                        evaluations,
                    });
                }
            } else {
                stable = 0;
            }
            last_extrapolated = extrapolated;
        }
    }
    Err(Error::QuadratureFailed {
        what: format!("Fourier tail from omega = {start} at t = {t}"),
        error: (running - last_extrapolated).abs(),
        tolerance: tol.target(running),
    })
}

/// Chebyshev-Fourier moments `∫₋₁¹ T_k(u) e^{iκu} du` for `k = 0..=n` by
/// forward recurrence, accurate for `κ ≥ n`.
fn chebyshev_fourier_moments(kappa: f64, n: usize) -> Vec<Complex64> {
    let ik = Complex64::new(0.0, kappa);
    let (ep, em) = (
        Complex64::from_polar(1.0, kappa),
        Complex64::from_polar(1.0, -kappa),
    );
    // [T_k(u) e^{iκu}] between −1 and 1
    let bracket = |k: usize| {
        if k.is_multiple_of(2) {
            ep - em
        } else {
            ep + em
        }
    };
    let mut m = vec![Complex64::new(0.0, 0.0); n + 1];
    // d_k = ∫ T_k'(u) e^{iκu} du
    let mut d = vec![Complex64::new(0.0, 0.0); n + 2];
    m[0] = Complex64::from(2.0 * kappa.sin() / kappa);
    m[1] = (bracket(1) - m[0]) / ik;
    d[1] = bracket(1) - ik * m[1];
    if n >= 2 {
        d[2] = 4.0 * m[1];
        m[2] = (bracket(2) - d[2]) / ik;
    }
    for k in 2..n {
        d[k + 1] = (k + 1) as f64 * (2.0 * m[k] + d[k - 1] / (k - 1) as f64);
        m[k + 1] = (bracket(k + 1) - d[k + 1]) / ik;
    }
    m
}

const FILON_N: usize = 32;

/// `Σ'' a_k I_k` for the Chebyshev interpolant through `values` at the
/// Lobatto points `cos(πj/n)`.
fn filon_sum(values: &[f64], moments: &[Complex64]) -> Complex64 {
    let n = values.len() - 1;
    let halve = |i: usize| if i == 0 || i == n { 0.5 } else { 1.0 };
    let mut total = Complex64::new(0.0, 0.0);
    for (k, mk) in moments.iter().enumerate().take(n + 1) {
        let mut a = 0.0;
        for (j, v) in values.iter().enumerate() {
            a += halve(j) * v * (PI * (j * k) as f64 / n as f64).cos();
        }
        total += halve(k) * (2.0 / n as f64) * a * mk;
    }
    total
}

struct OscPanel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for OscPanel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for OscPanel {}
impl PartialOrd for OscPanel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OscPanel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Clenshaw-Curtis-Filon on one panel when it spans many periods, GK21 on
/// its half-periods otherwise.
fn osc_panel<F: FnMut(f64) -> f64>(
    f: &mut F,
    lo: f64,
    hi: f64,
    t: f64,
    kernel: Kernel,
) -> Result<OscPanel> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let kappa = t * half;
    if kappa < FILON_N as f64 {
        let edges = oscillatory_edges(lo, hi, t, kernel.zero_offset(), &[]);
        let (mut value, mut error) = (0.0, 0.0);
        for w in edges.windows(2) {
            let (v, e) = gk21(&mut |x| f(x) * kernel.eval(x * t), w[0], w[1])?;
            value += v;
            error += e;
        }
        return Ok(OscPanel {
            lo,
            hi,
            value,
            error,
        });
    }
    let mut values = Vec::with_capacity(FILON_N + 1);
    for j in 0..=FILON_N {
        let x = mid + half * (PI * j as f64 / FILON_N as f64).cos();
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite(x));
        }
        values.push(v);
    }
    let moments = chebyshev_fourier_moments(kappa, FILON_N);
    let coarse: Vec<f64> = values.iter().step_by(2).copied().collect();
    let phase = Complex64::from_polar(half, t * mid);
    let pick = |z: Complex64| match kernel {
        Kernel::Cos => z.re,
        Kernel::Sin => z.im,
    };
    let fine = pick(phase * filon_sum(&values, &moments));
    let rough = pick(phase * filon_sum(&coarse, &moments[..=FILON_N / 2]));
    let scale: f64 = values.iter().map(|v| v.abs()).sum::<f64>() * 2.0 * half / FILON_N as f64;
    Ok(OscPanel {
        lo,
        hi,
        value: fine,
        error: (fine - rough).abs().max(50.0 * f64::EPSILON * scale),
    })
}

/// `∫_a^b f(ω) k(ωt) dω` for a smooth, non-oscillating `f`. Panels are
/// refined by the smoothness of `f` alone, so the cost does not grow with
/// the number of periods in `[a, b]`.
pub fn oscillatory_integral<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    t: f64,
    kernel: Kernel,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<Estimate> {
    if !(b > a) {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut edges = vec![a, b];
    edges.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in edges.windows(2) {
        heap.push(osc_panel(&mut f, w[0], w[1], t, kernel)?);
        evaluations += FILON_N + 1;
    }
    let mut frozen = (0.0, 0.0);
    for _ in 0..MAX_REFINEMENTS {
        let total: f64 = heap.iter().map(|p| p.value).sum::<f64>() + frozen.0;
        let err: f64 = heap.iter().map(|p| p.error).sum::<f64>() + frozen.1;
        if err <= tol.target(total) || heap.is_empty() {
            return Ok(Estimate {
                value: total,
                error: err,
                evaluations,
            });
        }
        let worst = heap.pop().unwrap();
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) || (worst.hi - worst.lo) < 1e-14 * worst.hi.abs() {
            frozen.0 += worst.value;
            frozen.1 += worst.error;
            continue;
        }
        heap.push(osc_panel(&mut f, worst.lo, mid, t, kernel)?);
        heap.push(osc_panel(&mut f, mid, worst.hi, t, kernel)?);
        evaluations += 2 * (FILON_N + 1);
    }
    let total: f64 = heap.iter().map(|p| p.value).sum::<f64>() + frozen.0;
    let err: f64 = heap.iter().map(|p| p.error).sum::<f64>() + frozen.1;
    if err <= tol.target(total) {
        Ok(Estimate {
            value: total,
            error: err,
            evaluations,
        })
    } else {
        Err(Error::QuadratureFailed {
            what: "Filon oscillatory quadrature".into(),
            error: err,
            tolerance: tol.target(total),
        })
    }
}

/// Zeros of the kernel (half-period boundaries) in `(lo, hi)` together with
/// extra breakpoints, sorted. Used to panel the oscillatory part of `[0, W]`.
pub fn oscillatory_edges(lo: f64, hi: f64, t: f64, kernel_offset: f64, extra: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    if t > 0.0 {
        let half = PI / t;
        let mut m = ((lo / half) - kernel_offset).floor() + 1.0;
        loop {
            let z = (m + kernel_offset) * half;
            if z >= hi {
                break;
            }
            if z > lo {
                pts.push(z);
            }
            m += 1.0;
        }
    }
    pts.extend(extra.iter().copied().filter(|&x| x > lo && x < hi));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs().max(1e-300));
    pts
}

pub fn edges_to_segments(edges: &[f64]) -> Vec<Segment> {
    edges
        .windows(2)
        .map(|w| Segment::Finite(w[0], w[1]))
        .collect()
}
