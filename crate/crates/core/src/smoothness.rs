//! The generalized modulus of smoothness built on the asymmetric
//! translation, and the modulus-of-continuity-type function machinery.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spaces::{weighted_norm, Func, SpaceParams};
use crate::translation::{asymmetric_translate, TranslationConfig};

/// A modulus-of-continuity-type function on (0, 1].
///
/// The admissibility conditions (continuity, quasi-monotonicity, doubling) are
/// measured empirically, not proven; see [`phi_measured_constants`].
#[derive(Clone)]
pub struct PhiFunction {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub label: String,
}

impl std::fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PhiFunction").field("label", &self.label).finish()
    }
}

impl PhiFunction {
    pub fn new<G: Fn(f64) -> f64 + Send + Sync + 'static>(label: &str, g: G) -> Self {
        Self {
            eval: Arc::new(g),
            label: label.to_string(),
        }
    }

    /// The power function `phi(t) = t^lambda`.
    pub fn power(lambda: f64) -> Self {
        Self::new(&format!("t^{lambda}"), move |t| t.powf(lambda))
    }

    /// Parses labels of the form `t^LAMBDA` or `const`.
    pub fn parse(label: &str) -> Result<Self> {
        let s = label.trim();
        if s == "const" || s == "1" {
            return Ok(Self::new("const", |_| 1.0));
        }
        if let Some(rest) = s.strip_prefix("t^") {
            let lambda: f64 = rest
                .parse()
                .map_err(|_| Error::Config(format!("cannot parse phi exponent from {label:?}")))?;
            return Ok(Self::power(lambda));
        }
        Err(Error::Config(format!("unknown phi label {label:?}")))
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }
}

/// Measured quasi-monotonicity and doubling constants on a sampled grid.
#[derive(Debug, Clone, Copy)]
pub struct PhiConstants {
    pub quasi_monotone: f64, // C_{phi,1}
    pub doubling: f64,       // C_{phi,2}
}

/// Samples phi on a logarithmic grid of `samples` points and measures
/// C_{phi,1} = max phi(t1)/phi(t2) over t1 <= t2 and
/// C_{phi,2} = max phi(2t)/phi(t) over t <= 1/2.
pub fn phi_measured_constants(phi: &PhiFunction, samples: usize) -> Result<PhiConstants> {
    let n = samples.max(8);
    let grid: Vec<f64> = (0..n)
        .map(|i| 10f64.powf(-4.0 + 4.0 * i as f64 / (n - 1) as f64))
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&t| phi.eval(t)).collect();
    for (&t, &v) in grid.iter().zip(vals.iter()) {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::DegeneratePhi(format!(
                "phi({t}) = {v} is not finite nonnegative"
            )));
        }
    }
    let mut c1: f64 = 0.0;
    let mut running_min = f64::INFINITY;
    // scan from large t downward: C1 = max over t1 <= t2 of phi(t1)/phi(t2)
    for i in (0..n).rev() {
        running_min = running_min.min(vals[i]);
        if running_min > 0.0 {
            c1 = c1.max(vals[i] / running_min);
        }
    }
    let mut c2: f64 = 0.0;
    for &t in grid.iter().filter(|&&t| t <= 0.5) {
        let denom = phi.eval(t);
        if denom > 0.0 {
            c2 = c2.max(phi.eval(2.0 * t) / denom);
        }
    }
    Ok(PhiConstants {
        quasi_monotone: c1,
        doubling: c2,
    })
}

/// A computed modulus curve: nondecreasing values over decreasing deltas.
#[derive(Debug, Clone)]
pub struct ModulusCurve {
    pub deltas: Vec<f64>,
    pub values: Vec<f64>,
    pub space: SpaceParams,
}

fn translation_deviation(f: &Func, t: f64, sp: &SpaceParams, cfg: &TranslationConfig) -> Result<f64> {
    let f2 = f.clone();
    let cfg2 = *cfg;
    let diff = Func::from_fn("T_t f - f", move |x| {
        asymmetric_translate(&f2, t, x, &cfg2).unwrap_or(f64::NAN) - f2.eval(x)
    });
    weighted_norm(&diff, sp)
}

/// `omega(f, delta) = sup_{|t| <= delta} || T_t f - f ||_{p,alpha,beta}`,
/// approximated by a grid in t refined three times around the argmax.
///
/// T_t is even in t (the inner integral is symmetric in z), so the grid
/// only needs (0, delta].
pub fn modulus(f: &Func, delta: f64, sp: &SpaceParams, t_samples: usize) -> Result<f64> {
    modulus_with(f, delta, sp, t_samples, &TranslationConfig::default())
}

pub fn modulus_with(
    f: &Func,
    delta: f64,
    sp: &SpaceParams,
    t_samples: usize,
    cfg: &TranslationConfig,
) -> Result<f64> {
    if !(delta > 0.0 && delta <= std::f64::consts::PI) {
        return Err(Error::ParamDomain(format!(
            "delta must lie in (0, pi], got {delta}"
        )));
    }
    let n = t_samples.max(8);
    let grid: Vec<f64> = (1..=n).map(|i| delta * i as f64 / n as f64).collect();
    let mut best = 0.0;
    let mut best_t = grid[0];
    for &t in &grid {
        let v = translation_deviation(f, t, sp, cfg)?;
        if v > best {
            best = v;
            best_t = t;
        }
    }
    // refine 3x around the argmax
    let mut lo = (best_t - delta / n as f64).max(0.0);
    let mut hi = (best_t + delta / n as f64).min(delta);
    for _ in 0..3 {
        let mut local_best_t = best_t;
        for i in 0..=6 {
            let t = lo + (hi - lo) * i as f64 / 6.0;
            if t <= 0.0 {
                continue;
            }
            let v = translation_deviation(f, t, sp, cfg)?;
            if v > best {
                best = v;
                local_best_t = t;
            }
        }
        let span = (hi - lo) / 6.0;
        best_t = local_best_t;
        lo = (best_t - span).max(0.0);
        hi = (best_t + span).min(delta);
    }
    Ok(best)
}

/// Computes the modulus on a list of deltas from one shared master grid of
/// t values, taking running sups over nested subsets; the curve is
/// nondecreasing in delta by construction.
pub fn modulus_curve(
    f: &Func,
    deltas: &[f64],
    sp: &SpaceParams,
    t_samples: usize,
    cfg: &TranslationConfig,
) -> Result<ModulusCurve> {
    let mut sorted: Vec<f64> = deltas.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let delta_max = *sorted.last().ok_or_else(|| {
        Error::ParamDomain("modulus curve needs at least one delta".into())
    })?;
    if !(sorted[0] > 0.0 && delta_max <= std::f64::consts::PI) {
        return Err(Error::ParamDomain("deltas must lie in (0, pi]".into()));
    }
    // master grid: for each delta, t_samples points in (0, delta]
    let mut ts: Vec<f64> = Vec::new();
    let n = t_samples.max(8);
    for &d in &sorted {
        for i in 1..=n {
            ts.push(d * i as f64 / n as f64);
        }
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup();
    let devs: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| translation_deviation(f, t, sp, cfg).map(|v| (t, v)))
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(sorted.len());
    let mut running = 0.0f64;
    let mut idx = 0;
    for &d in &sorted {
        while idx < devs.len() && devs[idx].0 <= d + 1e-15 {
            running = running.max(devs[idx].1);
            idx += 1;
        }
        values.push(running);
    }
    // report in the caller's order (typically decreasing deltas)
    let mut deltas_out = Vec::with_capacity(deltas.len());
    let mut values_out = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let j = sorted
            .iter()
            .position(|&s| (s - d).abs() <= 1e-15)
            .expect("delta present");
        deltas_out.push(d);
        values_out.push(values[j]);
    }
    Ok(ModulusCurve {
        deltas: deltas_out,
        values: values_out,
        space: *sp,
    })
}

/// Outcome of a summation-condition measurement.
#[derive(Debug, Clone, Copy)]
pub struct PhiSumCheck {
    /// The measured constant (max ratio over n <= n_max).
    pub constant: f64,
    /// Relative growth of the constant when the series cap doubles;
    /// large growth flags a divergent condition.
    pub cap_growth: f64,
    /// True when the measured constant keeps growing with the cap.
    pub flagged_divergent: bool,
}

/// Series cap for the infinite sum in the (phi-3) condition.
pub const PHI_SUM_CAP: usize = 100_000;
/// Cap-doubling growth above this fraction flags divergence.
pub const PHI_DIVERGENCE_THRESHOLD: f64 = 0.02;

/// Measures `C_{phi,3}`: max over n <= n_max of
/// `sum_{j=n+1}^{cap} j^{2 lambda0 - 1} phi(1/j) / (n^{2 lambda0} phi(1/n))`.
pub fn phi_check_sum3(phi: &PhiFunction, lambda0: f64, n_max: usize) -> Result<PhiSumCheck> {
    phi_check_sum3_capped(phi, lambda0, n_max, PHI_SUM_CAP)
}

pub fn phi_check_sum3_capped(
    phi: &PhiFunction,
    lambda0: f64,
    n_max: usize,
    cap: usize,
) -> Result<PhiSumCheck> {
    if lambda0 < 0.0 {
        return Err(Error::ParamDomain(format!("lambda0 must be >= 0, got {lambda0}")));
    }
    let max_ratio = |cap: usize| -> Result<f64> {
        // suffix sums of j^{2 lambda0 - 1} phi(1/j)
        let mut tail = 0.0;
        let mut tails = vec![0.0; cap + 2];
        for j in (2..=cap).rev() {
            let jf = j as f64;
            tail += jf.powf(2.0 * lambda0 - 1.0) * phi.eval(1.0 / jf);
            tails[j] = tail;
        }
        let mut worst: f64 = 0.0;
        for n in 1..=n_max.min(cap - 1) {
            let nf = n as f64;
            let denom = nf.powf(2.0 * lambda0) * phi.eval(1.0 / nf);
            if denom <= 0.0 || !denom.is_finite() {
                return Err(Error::DegeneratePhi(format!("phi(1/{n}) vanishes")));
            }
            worst = worst.max(tails[n + 1] / denom);
        }
        Ok(worst)
    };
    let c = max_ratio(cap)?;
    let c2 = max_ratio(2 * cap)?;
    let growth = if c > 0.0 { (c2 - c) / c } else { 0.0 };
    Ok(PhiSumCheck {
        constant: c2,
        cap_growth: growth,
        flagged_divergent: growth > PHI_DIVERGENCE_THRESHOLD,
    })
}

/// Measures `C_{phi,4}`: max over n <= n_max of
/// `sum_{j=1}^{n} j phi(1/j) / (n^2 phi(1/n))`.
pub fn phi_check_sum4(phi: &PhiFunction, n_max: usize) -> Result<PhiSumCheck> {
    let ratios = |n_max: usize| -> Result<(f64, f64)> {
        let mut partial = 0.0;
        let mut worst: f64 = 0.0;
        let mut last = 0.0;
        for n in 1..=n_max {
            let nf = n as f64;
            partial += nf * phi.eval(1.0 / nf);
            let denom = nf * nf * phi.eval(1.0 / nf);
            if denom <= 0.0 || !denom.is_finite() {
                return Err(Error::DegeneratePhi(format!("phi(1/{n}) vanishes")));
            }
            last = partial / denom;
            worst = worst.max(last);
        }
        Ok((worst, last))
    };
    let (c, _) = ratios(n_max)?;
    let (c2, _) = ratios(2 * n_max)?;
    let growth = if c > 0.0 { (c2 - c) / c } else { 0.0 };
    Ok(PhiSumCheck {
        constant: c2,
        cap_growth: growth,
        flagged_divergent: growth > PHI_DIVERGENCE_THRESHOLD,
    })
}
