//! Adaptive 21-point Gauss–Kronrod integration on a finite interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

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
    0.123_491_976_262_065_851_077_208_732_886_470,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Weights of the embedded 10-point Gauss rule (nodes `XGK[1], XGK[3], …`).
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_146,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub error: f64,
    /// `∫|f|` over the panel.
    pub mass: f64,
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Applies the 21-point Kronrod rule and the embedded 10-point Gauss rule
/// on `[a, b]`; the error is rescaled the QUADPACK way.
pub(crate) fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Panel {
        a,
        b,
        value,
        error,
        mass: res_abs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Adaptive {
    pub value: f64,
    pub error: f64,
    pub mass: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
    /// Measure the relative error against `∫|f|` instead of `|∫f|`, for
    /// integrands that cancel.
    pub against_mass: bool,
}

impl Tolerance {
    fn met(&self, value: f64, error: f64, mass: f64) -> bool {
        let scale = if self.against_mass { mass } else { value.abs() };
        error <= self.abs.max(self.rel * scale)
    }
}

/// Globally adaptive bisection of the panel with the largest error until
/// the summed error meets `max(abs, rel·|value|)`.
pub(crate) fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    initial_panels: usize,
    tol: Tolerance,
) -> Adaptive {
    let n = initial_panels.max(1);
    let width = (b - a) / n as f64;
    let mut heap = BinaryHeap::with_capacity(tol.max_subdivisions + n);
    let mut finished: Vec<Panel> = Vec::new();
    let mut evaluations = 0usize;
    for i in 0..n {
        let lo = a + width * i as f64;
        let hi = if i + 1 == n {
            b
        } else {
            a + width * (i + 1) as f64
        };
        heap.push(gk21(&mut f, lo, hi));
        evaluations += 21;
    }
    let totals = |heap: &BinaryHeap<Panel>, finished: &[Panel]| {
        heap.iter()
            .chain(finished)
            .fold((0.0, 0.0, 0.0), |(v, e, m), p| {
                (v + p.value, e + p.error, m + p.mass)
            })
    };
    let (mut value, mut error, mut mass) = totals(&heap, &finished);
    let mut panels = n;
    let mut converged = false;
    loop {
        if tol.met(value, error, mass) {
            converged = true;
            break;
        }
        if panels >= tol.max_subdivisions {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) < 1e-15 * (worst.a.abs() + worst.b.abs())
        {
            // cannot be resolved further in double precision
            finished.push(worst);
            continue;
        }
        let left = gk21(&mut f, worst.a, mid);
        let right = gk21(&mut f, mid, worst.b);
        evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        mass += left.mass + right.mass - worst.mass;
        heap.push(left);
        heap.push(right);
        panels += 1;
        if panels.is_multiple_of(64) {
            (value, error, mass) = totals(&heap, &finished);
        }
    }
    // deterministic final reduction, ordered by position
    let mut all: Vec<Panel> = heap.into_vec();
    all.extend(finished);
    all.sort_by(|p, q| p.a.total_cmp(&q.a));
    let (value, error, mass) = totals(&BinaryHeap::new(), &all);
    let converged = converged || tol.met(value, error, mass);
    Adaptive {
        value,
        error,
        mass,
        evaluations,
        converged,
    }
}
