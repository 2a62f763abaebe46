//! Maps each support onto finite intervals and drives the adaptive rule
//! (or the lattice sweep for counting measure).

use crate::expfam::Support;
use crate::series::{find_mode, log_sum_lattice};

use super::quadrature::{adaptive, Tolerance};
use super::{InfiniteTransform, QuadratureConfig};

/// Where an integrand is evaluated.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Location<'a> {
    Point(&'a [f64]),
    /// `upper − gap` on a bounded support, with `gap` kept exactly.
    BelowUpper(f64),
}

/// Integrand weighted by the Jacobian: receives the location and the log
/// of the Jacobian of the map, returns `f(x)·|dx/dt|`.
pub(crate) type Weighted<'f> = dyn Fn(Location<'_>, f64) -> f64 + 'f;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
enum Map {
    /// `x = t/(1 − t²)`, `t ∈ (−1, 1)`
    Rational,
    /// `x = lo + e^u`, `u = t/(1 − t²)`, `t ∈ (−1, 1)`
    ShiftedLog { lo: f64 },
    /// `x = lo + s/(1 − s)`, `s ∈ (0, 1)`
    ShiftedRational { lo: f64 },
    /// `x = lo + w e^u`, `u = −s/(1 − s)`, `s ∈ (0, 1)`
    LowerEnd { lo: f64, w: f64 },
    /// `x = hi − w e^u`, `u = −s/(1 − s)`, `s ∈ (0, 1)`
    UpperEnd { w: f64 },
}

enum At {
    X(f64),
    Gap(f64),
}

impl Map {
    fn range(&self) -> (f64, f64) {
        match self {
            Map::Rational | Map::ShiftedLog { .. } => (-1.0, 1.0),
            _ => (0.0, 1.0),
        }
    }

    fn eval(&self, t: f64) -> (At, f64) {
        match *self {
            Map::Rational => {
                let q = 1.0 - t * t;
                (At::X(t / q), (1.0 + t * t).ln() - 2.0 * q.ln())
            }
            Map::ShiftedLog { lo } => {
                let q = 1.0 - t * t;
                let u = t / q;
                (At::X(lo + u.exp()), u + (1.0 + t * t).ln() - 2.0 * q.ln())
            }
            Map::ShiftedRational { lo } => {
                let q = 1.0 - t;
                (At::X(lo + t / q), -2.0 * q.ln())
            }
            Map::LowerEnd { lo, w } => {
                let q = 1.0 - t;
                let u = -t / q;
                (At::X(lo + w * u.exp()), w.ln() + u - 2.0 * q.ln())
            }
            Map::UpperEnd { w } => {
                let q = 1.0 - t;
                let u = -t / q;
                (At::Gap(w * u.exp()), w.ln() + u - 2.0 * q.ln())
            }
        }
    }
}

const INITIAL_PANELS: usize = 16;
const NESTED_INITIAL_PANELS: usize = 4;
const SCAN_POINTS: usize = 512;
const NESTED_SCAN_POINTS: usize = 33;
/// Consecutive negligible terms that end a lattice sweep.
const LATTICE_QUIET_RUN: usize = 8;

/// Neumaier-compensated running sum that also tracks `Σ|v|`.
#[derive(Default)]
struct LatticeAccumulator {
    sum: f64,
    compensation: f64,
    mass: f64,
    terms: usize,
}

impl LatticeAccumulator {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        self.compensation += if self.sum.abs() >= v.abs() {
            (self.sum - t) + v
        } else {
            (v - t) + self.sum
        };
        self.sum = t;
        self.mass += v.abs();
        self.terms += 1;
    }
}

pub(crate) struct Engine {
    support: Support,
    cfg: QuadratureConfig,
    anchors: Vec<u64>,
}

impl Engine {
    pub fn new(support: Support, cfg: &QuadratureConfig) -> Self {
        Engine {
            support,
            cfg: *cfg,
            anchors: Vec::new(),
        }
    }

    /// Lattice points the sweep must cover, such as the modes of the
    /// component densities of a multimodal integrand.
    pub fn anchored(mut self, anchors: Vec<u64>) -> Self {
        self.anchors = anchors;
        self
    }

    fn pieces(&self) -> Vec<Map> {
        match self.support {
            Support::RealLine { .. } => vec![Map::Rational],
            Support::HalfLine { lower, .. } => match self.cfg.transform {
                InfiniteTransform::LogSubstitution => vec![Map::ShiftedLog { lo: lower }],
                InfiniteTransform::RationalMap => vec![Map::ShiftedRational { lo: lower }],
            },
            Support::Interval { lower, upper } => {
                let w = 0.5 * (upper - lower);
                vec![Map::LowerEnd { lo: lower, w }, Map::UpperEnd { w }]
            }
            Support::NonNegativeIntegers => Vec::new(),
        }
    }

    fn tolerance(&self, share: f64) -> Tolerance {
        Tolerance {
            abs: self.cfg.abs_tol * share,
            rel: self.cfg.rel_tol * share,
            max_subdivisions: self.cfg.max_subdivisions,
            against_mass: false,
        }
    }

    /// `∫ f dμ` over the support, `f` already multiplied by the Jacobian.
    /// `share` scales the tolerances when this integral is one term of a
    /// composite estimate.
    pub fn integrate(&self, f: &Weighted<'_>, share: f64) -> Integral {
        match self.support {
            Support::NonNegativeIntegers => self.lattice(f),
            Support::RealLine { dim } if dim > 1 => self.nested(f, share),
            _ => {
                let pieces = self.pieces();
                let tol = self.tolerance(share / pieces.len() as f64);
                let mut total = Integral {
                    value: 0.0,
                    error: 0.0,
                    evaluations: 0,
                    converged: true,
                };
                for map in pieces {
                    let (a, b) = map.range();
                    let r = adaptive(|t| eval_1d(&map, t, f), a, b, INITIAL_PANELS, tol);
                    total.value += r.value;
                    total.error += r.error;
                    total.evaluations += r.evaluations;
                    total.converged &= r.converged;
                }
                total
            }
        }
    }

    /// `log ∫ exp(g) dμ`, with `g` a log-integrand (no Jacobian). The
    /// returned error is relative to `∫ exp(g)`, i.e. absolute in log units.
    pub fn log_integrate_exp(&self, g: &dyn Fn(Location<'_>) -> f64, share: f64) -> Integral {
        if let Support::NonNegativeIntegers = self.support {
            let s = log_sum_lattice(
                |i| g(Location::Point(&[i as f64])),
                self.cfg.series_term_ratio_cutoff,
                self.cfg.series_max_terms,
            );
            return Integral {
                value: s.log_value,
                error: self.cfg.series_term_ratio_cutoff * s.terms as f64,
                evaluations: s.terms,
                converged: !s.cap_reached,
            };
        }
        let shift = self.scan_max(g);
        if !shift.is_finite() {
            return Integral {
                value: shift,
                error: f64::INFINITY,
                evaluations: 0,
                converged: false,
            };
        }
        let weighted = |loc: Location<'_>, lj: f64| (g(loc) + lj - shift).exp();
        let r = self.integrate(&weighted, share);
        Integral {
            value: shift + r.value.ln(),
            error: r.error / r.value.abs(),
            evaluations: r.evaluations,
            converged: r.converged && r.value > 0.0,
        }
    }

    fn scan_max(&self, g: &dyn Fn(Location<'_>) -> f64) -> f64 {
        let mut best = f64::NEG_INFINITY;
        let mut keep = |v: f64| {
            if v.is_finite() && v > best {
                best = v;
            }
        };
        match self.support {
            Support::RealLine { dim } if dim > 1 => {
                let n = NESTED_SCAN_POINTS;
                let nodes: Vec<(f64, f64)> = (0..n)
                    .map(|i| {
                        let t = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
                        match Map::Rational.eval(t) {
                            (At::X(x), lj) => (x, lj),
                            (At::Gap(_), _) => unreachable!(),
                        }
                    })
                    .collect();
                let mut idx = vec![0usize; dim];
                let mut x = vec![0.0; dim];
                'outer: loop {
                    let mut lj = 0.0;
                    for (k, &i) in idx.iter().enumerate() {
                        x[k] = nodes[i].0;
                        lj += nodes[i].1;
                    }
                    keep(g(Location::Point(&x)) + lj);
                    for k in (0..dim).rev() {
                        idx[k] += 1;
                        if idx[k] < n {
                            continue 'outer;
                        }
                        idx[k] = 0;
                    }
                    break;
                }
            }
            _ => {
                for map in self.pieces() {
                    let (a, b) = map.range();
                    for i in 0..SCAN_POINTS {
                        let t = a + (b - a) * (i as f64 + 0.5) / SCAN_POINTS as f64;
                        let (at, lj) = map.eval(t);
                        let v = match at {
                            At::X(x) => g(Location::Point(&[x])),
                            At::Gap(gap) => g(Location::BelowUpper(gap)),
                        };
                        keep(v + lj);
                    }
                }
            }
        }
        best
    }

    fn lattice(&self, f: &Weighted<'_>) -> Integral {
        let term = |i: u64| f(Location::Point(&[i as f64]), 0.0);
        let mode = find_mode(|i| term(i).abs().ln());
        let lo = self.anchors.iter().copied().fold(mode, u64::min);
        let hi = self.anchors.iter().copied().fold(mode, u64::max);
        let cutoff = self.cfg.series_term_ratio_cutoff;
        let mut acc = LatticeAccumulator::default();
        let mut cap_reached = false;
        for i in lo..=hi {
            if acc.terms >= self.cfg.series_max_terms {
                cap_reached = true;
                break;
            }
            acc.add(term(i));
        }
        for down in [true, false] {
            let mut i = if down { lo } else { hi };
            let mut quiet = 0;
            while quiet < LATTICE_QUIET_RUN && !cap_reached {
                if down {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                } else {
                    i += 1;
                }
                if acc.terms >= self.cfg.series_max_terms {
                    cap_reached = true;
                    break;
                }
                let v = term(i);
                acc.add(v);
                quiet = if v.abs() < cutoff * acc.mass {
                    quiet + 1
                } else {
                    0
                };
            }
        }
        let value = acc.sum + acc.compensation;
        Integral {
            value,
            error: cutoff * acc.terms as f64 * acc.mass,
            evaluations: acc.terms,
            converged: !cap_reached && value.is_finite(),
        }
    }

    fn nested(&self, f: &Weighted<'_>, share: f64) -> Integral {
        let dim = self.support.dim();
        let mut stats = NestedStats::default();
        let mut prefix = Vec::with_capacity(dim);
        let outer = self.tolerance(0.9 * share);
        let inner = Tolerance {
            abs: outer.abs * 1e-2,
            rel: outer.rel * 0.1,
            max_subdivisions: outer.max_subdivisions,
            against_mass: true,
        };
        let r = nested_level(f, dim, &mut prefix, 0.0, outer, inner, &mut stats);
        if !stats.cancelled {
            // converged inner integrals err by at most `inner.rel` of their value
            return Integral {
                value: r.value,
                error: r.error + inner.rel * r.value.abs(),
                evaluations: stats.evaluations + r.evaluations,
                converged: r.converged && stats.converged,
            };
        }
        // a cancelling integrand: inner errors scale with ∫|f|
        let abs_f = |loc: Location<'_>, lj: f64| f(loc, lj).abs();
        let mut mass_stats = NestedStats::default();
        let m = nested_level(&abs_f, dim, &mut prefix, 0.0, outer, inner, &mut mass_stats);
        let mut evaluations =
            stats.evaluations + r.evaluations + mass_stats.evaluations + m.evaluations;
        let mass = m.value;
        let budget = (self.cfg.abs_tol * share).max(self.cfg.rel_tol * share * r.value.abs());
        if r.error + inner.rel * mass <= budget || mass <= 0.0 {
            return Integral {
                value: r.value,
                error: r.error + inner.rel * mass,
                evaluations,
                converged: r.converged && stats.converged,
            };
        }
        let tight = Tolerance {
            rel: (0.1 * budget / mass).max(20.0 * f64::EPSILON),
            ..inner
        };
        let mut retry = NestedStats::default();
        let r = nested_level(f, dim, &mut prefix, 0.0, outer, tight, &mut retry);
        evaluations += retry.evaluations + r.evaluations;
        Integral {
            value: r.value,
            error: r.error + tight.rel * mass,
            evaluations,
            converged: r.converged && retry.converged,
        }
    }
}

fn eval_1d(map: &Map, t: f64, f: &Weighted<'_>) -> f64 {
    let (at, lj) = map.eval(t);
    let v = match at {
        At::X(x) => f(Location::Point(&[x]), lj),
        At::Gap(g) => f(Location::BelowUpper(g), lj),
    };
    if v.is_nan() {
        0.0
    } else {
        v
    }
}

struct NestedStats {
    evaluations: usize,
    converged: bool,
    cancelled: bool,
}

impl Default for NestedStats {
    fn default() -> Self {
        NestedStats {
            evaluations: 0,
            converged: true,
            cancelled: false,
        }
    }
}

fn nested_level(
    f: &Weighted<'_>,
    dim: usize,
    prefix: &mut Vec<f64>,
    log_jac: f64,
    tol: Tolerance,
    inner: Tolerance,
    stats: &mut NestedStats,
) -> super::quadrature::Adaptive {
    let last = prefix.len() + 1 == dim;
    adaptive(
        |t| {
            let q = 1.0 - t * t;
            let x = t / q;
            let lj = log_jac + (1.0 + t * t).ln() - 2.0 * q.ln();
            prefix.push(x);
            let v = if last {
                let v = f(Location::Point(prefix), lj);
                if v.is_nan() {
                    0.0
                } else {
                    v
                }
            } else {
                let r = nested_level(f, dim, prefix, lj, inner, inner, stats);
                stats.evaluations += r.evaluations;
                stats.converged &= r.converged;
                stats.cancelled |= r.mass > (1.0 + 1e-9) * r.value.abs();
                r.value
            };
            prefix.pop();
            v
        },
        -1.0,
        1.0,
        NESTED_INITIAL_PANELS,
        tol,
    )
}
