//! Valley threshold between the two mixture means.

use serde::Serialize;

use super::gmm::GmmFit;

const GRID_CELLS: usize = 2048;
const GOLDEN_WIDTH: f64 = 1e-10;
/// A component carrying fewer than this many effective samples is a
/// collapsed spike, not a mode.
const MIN_COMPONENT_MASS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    Valley,
    DegenerateSkip,
    Fixed,
}

impl ThresholdMode {
    pub fn name(self) -> &'static str {
        match self {
            ThresholdMode::Valley => "valley",
            ThresholdMode::DegenerateSkip => "degenerate_skip",
            ThresholdMode::Fixed => "fixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub beta: Option<f64>,
    pub mode: ThresholdMode,
    /// Grid point with the smallest density, before refinement.
    pub grid_argmin: Option<f64>,
    pub density_at_beta: Option<f64>,
}

impl ThresholdResult {
    pub fn skip() -> Self {
        ThresholdResult {
            beta: None,
            mode: ThresholdMode::DegenerateSkip,
            grid_argmin: None,
            density_at_beta: None,
        }
    }

    pub fn fixed(beta: f64) -> Self {
        ThresholdResult {
            beta: Some(beta),
            mode: ThresholdMode::Fixed,
            grid_argmin: None,
            density_at_beta: None,
        }
    }
}

/// Location of the density minimum strictly between `mu1` and `mu2`.
///
/// The density is scanned on a 2049-point grid over `[mu1, mu2]` (in log
/// space, so deep valleys do not underflow into ties), and the best cell is
/// refined by golden-section search. An argmin within one cell of either
/// mean means there is no interior valley and the result is
/// `DegenerateSkip`.
pub fn find_threshold(fit: &GmmFit) -> ThresholdResult {
    let (lo, hi) = (fit.mu1, fit.mu2);
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return ThresholdResult::skip();
    }
    if let Some(n) = fit.sample_size {
        if fit.pi1.min(fit.pi2) * (n as f64) < MIN_COMPONENT_MASS {
            return ThresholdResult::skip();
        }
    }
    let step = (hi - lo) / GRID_CELLS as f64;
    let at = |k: usize| if k == GRID_CELLS { hi } else { lo + step * k as f64 };
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for k in 0..=GRID_CELLS {
        let val = fit.log_density(at(k));
        if val < best_val {
            best_val = val;
            best = k;
        }
    }
    if best <= 1 || best >= GRID_CELLS - 1 {
        return ThresholdResult::skip();
    }
    let beta = golden_section(|x| fit.log_density(x), at(best - 1), at(best + 1));
    ThresholdResult {
        beta: Some(beta),
        mode: ThresholdMode::Valley,
        grid_argmin: Some(at(best)),
        density_at_beta: Some(fit.density(beta)),
    }
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_WIDTH {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    0.5 * (a + b)
}
