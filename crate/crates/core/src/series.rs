//! Truncated summation over the nonnegative-integer lattice.
//!
//! Terms are supplied in the log domain and must be unimodal in the index
//! (log-concave families satisfy this). The sweep starts at the mode and
//! walks outward in both directions, stopping in each direction once a term
//! falls below `ratio_cutoff` times the running sum.

/// Truncation rule of lattice sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    pub ratio_cutoff: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            ratio_cutoff: 1e-15,
            max_terms: 1_000_000,
        }
    }
}

impl SeriesConfig {
    pub fn sum<F: Fn(u64) -> f64>(&self, log_term: F) -> LatticeSum {
        log_sum_lattice(log_term, self.ratio_cutoff, self.max_terms)
    }
}

/// Result of a lattice sum, kept in the log domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSum {
    pub log_value: f64,
    pub terms: usize,
    pub cap_reached: bool,
    /// Index of the largest term.
    pub mode: u64,
}

impl LatticeSum {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Smallest index `i` with `f(i + 1) < f(i)`, assuming unimodality.
pub fn find_mode<F: Fn(u64) -> f64>(log_term: F) -> u64 {
    let f = |i: u64| sanitize(log_term(i));
    let dec = |i: u64| f(i + 1) < f(i);
    if dec(0) {
        return 0;
    }
    let (mut lo, mut hi) = (0u64, 1u64);
    while !dec(hi) {
        lo = hi;
        if hi >= 1 << 52 {
            return hi;
        }
        hi *= 2;
    }
    // dec(lo) is false, dec(hi) is true
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if dec(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `log Σ_{i ≥ 0} exp(log_term(i))`.
pub fn log_sum_lattice<F: Fn(u64) -> f64>(
    log_term: F,
    ratio_cutoff: f64,
    max_terms: usize,
) -> LatticeSum {
    let f = |i: u64| sanitize(log_term(i));
    let mode = find_mode(f);
    let peak = f(mode);
    if peak == f64::NEG_INFINITY {
        return LatticeSum {
            log_value: f64::NEG_INFINITY,
            terms: 1,
            cap_reached: false,
            mode,
        };
    }
    if peak == f64::INFINITY {
        return LatticeSum {
            log_value: f64::INFINITY,
            terms: 1,
            cap_reached: false,
            mode,
        };
    }

    let mut acc = 1.0;
    let mut terms = 1usize;
    let mut cap_reached = false;

    let mut i = mode;
    while i > 0 {
        if terms >= max_terms {
            cap_reached = true;
            break;
        }
        i -= 1;
        let r = (f(i) - peak).exp();
        acc += r;
        terms += 1;
        if r < ratio_cutoff * acc {
            break;
        }
    }

    let mut i = mode;
    loop {
        if terms >= max_terms {
            cap_reached = true;
            break;
        }
        i += 1;
        let r = (f(i) - peak).exp();
        acc += r;
        terms += 1;
        if r < ratio_cutoff * acc {
            break;
        }
    }

    LatticeSum {
        log_value: peak + acc.ln(),
        terms,
        cap_reached,
        mode,
    }
}
