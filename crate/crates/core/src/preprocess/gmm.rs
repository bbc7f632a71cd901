//! Two-component one-dimensional Gaussian mixture fitted by EM.

use serde::Serialize;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GmmConfig {
    pub max_iter: usize,
    pub tol: f64,
    pub variance_floor_scale: f64,
}

impl Default for GmmConfig {
    fn default() -> Self {
        GmmConfig {
            max_iter: 500,
            tol: 1e-8,
            variance_floor_scale: 1e-6,
        }
    }
}

/// Fitted mixture `pi1 N(mu1, sigma1²) + pi2 N(mu2, sigma2²)` with `mu1 <= mu2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GmmFit {
    pub pi1: f64,
    pub pi2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Number of values fitted; `None` for hand-built mixtures.
    pub sample_size: Option<usize>,
    /// Log-likelihood after every EM update, starting at the initial guess.
    #[serde(skip)]
    pub trace: Vec<f64>,
}

impl GmmFit {
    /// Mixture with the given parameters and no fit history.
    pub fn from_parameters(pi1: f64, mu1: f64, sigma1: f64, mu2: f64, sigma2: f64) -> Self {
        GmmFit {
            pi1,
            pi2: 1.0 - pi1,
            mu1,
            mu2,
            sigma1,
            sigma2,
            log_likelihood: f64::NAN,
            iterations: 0,
            converged: true,
            sample_size: None,
            trace: Vec::new(),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        self.pi1 * normal_pdf(x, self.mu1, self.sigma1)
            + self.pi2 * normal_pdf(x, self.mu2, self.sigma2)
    }

    /// `ln density(x)`, accurate far into the tails.
    pub fn log_density(&self, x: f64) -> f64 {
        log_sum_exp(
            self.pi1.ln() + normal_ln_pdf(x, self.mu1, self.sigma1),
            self.pi2.ln() + normal_ln_pdf(x, self.mu2, self.sigma2),
        )
    }
}

pub fn mixture_density(fit: &GmmFit, x: f64) -> f64 {
    fit.density(x)
}

fn normal_ln_pdf(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    -0.5 * z * z - sigma.ln() - LN_SQRT_2PI
}

fn normal_pdf(x: f64, mu: f64, sigma: f64) -> f64 {
    normal_ln_pdf(x, mu, sigma).exp()
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var)
}

struct Params {
    pi1: f64,
    mu: [f64; 2],
    var: [f64; 2],
}

/// E-step: fills responsibilities of component 1 and returns the
/// log-likelihood of the current parameters.
fn expectation(values: &[f64], p: &Params, resp: &mut [f64]) -> f64 {
    let (lp1, lp2) = (p.pi1.ln(), (1.0 - p.pi1).ln());
    let (s1, s2) = (p.var[0].sqrt(), p.var[1].sqrt());
    let mut ll = 0.0;
    for (r, &x) in resp.iter_mut().zip(values) {
        let a = lp1 + normal_ln_pdf(x, p.mu[0], s1);
        let b = lp2 + normal_ln_pdf(x, p.mu[1], s2);
        let total = log_sum_exp(a, b);
        *r = (a - total).exp();
        ll += total;
    }
    ll
}

fn maximization(values: &[f64], resp: &[f64], floor: f64) -> Result<Params> {
    let n = values.len() as f64;
    let mut w = [0.0f64; 2];
    let mut sx = [0.0f64; 2];
    for (&r, &x) in resp.iter().zip(values) {
        w[0] += r;
        w[1] += 1.0 - r;
        sx[0] += r * x;
        sx[1] += (1.0 - r) * x;
    }
    if w[0] <= 0.0 || w[1] <= 0.0 {
        return Err(Error::DegenerateData(
            "a mixture component lost all of its mass".into(),
        ));
    }
    let mu = [sx[0] / w[0], sx[1] / w[1]];
    let mut ss = [0.0f64; 2];
    for (&r, &x) in resp.iter().zip(values) {
        ss[0] += r * (x - mu[0]) * (x - mu[0]);
        ss[1] += (1.0 - r) * (x - mu[1]) * (x - mu[1]);
    }
    Ok(Params {
        pi1: w[0] / n,
        mu,
        var: [(ss[0] / w[0]).max(floor), (ss[1] / w[1]).max(floor)],
    })
}

/// Fits the mixture by EM from a deterministic half-split start: the lower
/// half of the sorted values seeds component 1, the upper half component 2,
/// with equal weights.
pub fn fit_gmm2(values: &[f64], config: &GmmConfig) -> Result<GmmFit> {
    if values.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "a two-component fit needs at least 10 values, got {}",
            values.len()
        )));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::DegenerateData("non-finite value".into()));
    }
    let (_, total_var) = mean_var(values);
    if total_var == 0.0 {
        return Err(Error::DegenerateData("all values are identical".into()));
    }
    let floor = config.variance_floor_scale * total_var;

    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let half = sorted.len() / 2;
    let (lo, hi) = sorted.split_at(half);
    let (m1, v1) = mean_var(lo);
    let (m2, v2) = mean_var(hi);
    let mut params = Params {
        pi1: 0.5,
        mu: [m1, m2],
        var: [v1.max(floor), v2.max(floor)],
    };

    let mut resp = vec![0.0; values.len()];
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut ll = expectation(values, &params, &mut resp);
    trace.push(ll);
    while iterations < config.max_iter {
        params = maximization(values, &resp, floor)?;
        iterations += 1;
        let next = expectation(values, &params, &mut resp);
        debug_assert!(
            next >= ll - 1e-9 * (1.0 + ll.abs()),
            "EM log-likelihood decreased: {ll} -> {next}"
        );
        trace.push(next);
        let delta = (next - ll).abs();
        ll = next;
        if delta < config.tol * (1.0 + ll.abs()) {
            converged = true;
            break;
        }
    }

    let (s1, s2) = (params.var[0].sqrt(), params.var[1].sqrt());
    let mut fit = GmmFit {
        pi1: params.pi1,
        pi2: 1.0 - params.pi1,
        mu1: params.mu[0],
        mu2: params.mu[1],
        sigma1: s1,
        sigma2: s2,
        log_likelihood: ll,
        iterations,
        converged,
        sample_size: Some(values.len()),
        trace,
    };
    if fit.mu1 > fit.mu2 {
        std::mem::swap(&mut fit.mu1, &mut fit.mu2);
        std::mem::swap(&mut fit.sigma1, &mut fit.sigma2);
        std::mem::swap(&mut fit.pi1, &mut fit.pi2);
    }
    Ok(fit)
}
