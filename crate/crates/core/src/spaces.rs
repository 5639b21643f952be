//! Weighted Lp norms on (-1,1), the function abstraction, and the parameter
//! validation predicates for every regime the lemmas and theorems impose.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ortho::{gauss_jacobi_rule_cached, JacobiExpansion, JacobiParams};

/// Lebesgue exponent; infinity is encoded distinctly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl PExponent {
    pub fn is_infinite(&self) -> bool {
        matches!(self, PExponent::Infinity)
    }

    /// `1/p`, with the convention `1/inf = 0`.
    pub fn reciprocal(&self) -> f64 {
        match self {
            PExponent::Finite(p) => 1.0 / p,
            PExponent::Infinity => 0.0,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(PExponent::Infinity);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::Config(format!("cannot parse p from {s:?}")))?;
        Ok(PExponent::Finite(v))
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExponent::Finite(p) => write!(f, "{p}"),
            PExponent::Infinity => write!(f, "inf"),
        }
    }
}

/// The triple (p, alpha, beta) defining the weighted Lp space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceParams {
    pub p: PExponent,
    pub alpha: f64,
    pub beta: f64,
}

impl SpaceParams {
    pub fn new(p: PExponent, alpha: f64, beta: f64) -> Result<Self> {
        let sp = Self { p, alpha, beta };
        sp.validate()?;
        Ok(sp)
    }

    pub fn finite(p: f64, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(PExponent::Finite(p), alpha, beta)
    }

    pub fn sup(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(PExponent::Infinity, alpha, beta)
    }

    pub fn validate(&self) -> Result<()> {
        match self.p {
            PExponent::Finite(p) => {
                if !(p >= 1.0) || !p.is_finite() {
                    return Err(Error::ParamDomain(format!("p must be >= 1, got {p}")));
                }
                if self.alpha <= -1.0 / p || self.beta <= -1.0 / p {
                    return Err(Error::ParamDomain(format!(
                        "need alpha, beta > -1/p for p = {p}, got ({}, {})",
                        self.alpha, self.beta
                    )));
                }
            }
            PExponent::Infinity => {
                if self.alpha < 0.0 || self.beta < 0.0 {
                    return Err(Error::ParamDomain(format!(
                        "need alpha, beta >= 0 for p = inf, got ({}, {})",
                        self.alpha, self.beta
                    )));
                }
            }
        }
        Ok(())
    }

    /// `(1-x)^alpha (1+x)^beta` at `x`.
    pub fn weight(&self, x: f64) -> f64 {
        (1.0 - x).powf(self.alpha) * (1.0 + x).powf(self.beta)
    }
}

/// A real-valued function on (-1,1): a callable sampler, optionally backed
/// by a finite Jacobi expansion.
#[derive(Clone)]
pub struct Func {
    sampler: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub expansion: Option<JacobiExpansion>,
    pub label: String,
}

impl fmt::Debug for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Func").field("label", &self.label).finish()
    }
}

impl Func {
    pub fn from_fn<G: Fn(f64) -> f64 + Send + Sync + 'static>(label: &str, g: G) -> Self {
        Self {
            sampler: Arc::new(g),
            expansion: None,
            label: label.to_string(),
        }
    }

    pub fn from_expansion(label: &str, e: JacobiExpansion) -> Self {
        let e2 = e.clone();
        Self {
            sampler: Arc::new(move |x| e2.eval(x)),
            expansion: Some(e),
            label: label.to_string(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.sampler)(x)
    }

    pub fn eval_checked(&self, x: f64) -> Result<f64> {
        let v = self.eval(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Sampling {
                x,
                context: self.label.clone(),
            })
        }
    }

    /// Projects the sampler onto the first `n` Jacobi modes.
    pub fn expand(&self, n: usize, params: &JacobiParams) -> Result<JacobiExpansion> {
        crate::ortho::expand_in_jacobi(|x| self.eval(x), n, params)
    }
}

/// Default node count for finite-p norm quadrature.
pub const NORM_QUAD_NODES: usize = 256;
/// Grid size for the p = infinity norm (Chebyshev-distributed).
pub const SUP_GRID_SIZE: usize = 4097;
/// Grids never request samples closer than this to the endpoints.
pub const ENDPOINT_MARGIN: f64 = 1e-6;

/// Chebyshev-distributed grid of `n` points, kept away from the endpoints.
pub fn chebyshev_grid(n: usize) -> Vec<f64> {
    let scale = 1.0 - ENDPOINT_MARGIN;
    (0..n)
        .map(|j| -scale * (std::f64::consts::PI * j as f64 / (n - 1) as f64).cos())
        .collect()
}

/// The weighted norm `|| f (1-x)^alpha (1+x)^beta ||_p`.
///
/// For finite p this is Gauss-Jacobi quadrature with weight exponents
/// `(alpha p, beta p)`; for p = infinity a max over a dense Chebyshev grid.
pub fn weighted_norm(f: &Func, sp: &SpaceParams) -> Result<f64> {
    weighted_norm_with(f, sp, NORM_QUAD_NODES)
}

/// [`weighted_norm`] with an explicit quadrature resolution.
pub fn weighted_norm_with(f: &Func, sp: &SpaceParams, nodes: usize) -> Result<f64> {
    sp.validate()?;
    match sp.p {
        PExponent::Finite(p) => {
            let rule = gauss_jacobi_rule_cached(nodes.max(NORM_QUAD_NODES), sp.alpha * p, sp.beta * p)?;
            let mut acc = 0.0;
            for (&x, &w) in rule.nodes.iter().zip(rule.weights.iter()) {
                let v = f.eval_checked(x)?;
                acc += w * v.abs().powf(p);
            }
            Ok(acc.powf(1.0 / p))
        }
        PExponent::Infinity => {
            let mut best: f64 = 0.0;
            for x in chebyshev_grid(SUP_GRID_SIZE) {
                let v = f.eval_checked(x)?;
                best = best.max((v * sp.weight(x)).abs());
            }
            Ok(best)
        }
    }
}

/// Norm of a difference `f - g` without allocating a combined `Func`.
pub fn weighted_norm_diff(f: &Func, g: &Func, sp: &SpaceParams) -> Result<f64> {
    let f = f.clone();
    let g = g.clone();
    let diff = Func::from_fn("diff", move |x| f.eval(x) - g.eval(x));
    weighted_norm(&diff, sp)
}

/// `lambda_0 = max{ |alpha-beta|, alpha - 3/2 + 1/(2p), beta - 3/2 + 1/(2p) }`.
pub fn lambda0_for_theorems(sp: &SpaceParams) -> f64 {
    let half_rp = 0.5 * sp.p.reciprocal();
    (sp.alpha - sp.beta)
        .abs()
        .max(sp.alpha - 1.5 + half_rp)
        .max(sp.beta - 1.5 + half_rp)
}

/// Exponent bookkeeping for the translation norm bound: gamma = min(alpha,
/// beta) and the derived gamma_1, gamma_2, gamma_3.
#[derive(Debug, Clone, Copy)]
pub struct TranslationBoundParams {
    pub gamma: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub epsilon: f64,
}

impl TranslationBoundParams {
    pub fn derive(sp: &SpaceParams, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::ParamDomain(format!(
                "epsilon must lie in (0, 1/2), got {epsilon}"
            )));
        }
        let (alpha, beta) = (sp.alpha, sp.beta);
        let gamma = alpha.min(beta);
        let (gamma1, gamma2) = if alpha > beta {
            (alpha - beta, 0.0)
        } else {
            (0.0, beta - alpha)
        };
        let gamma3 = match sp.p {
            PExponent::Finite(p) if p == 1.0 => {
                if gamma >= 1.0 {
                    gamma - 1.0
                } else {
                    0.0
                }
            }
            _ => {
                let cut = 1.5 - 0.5 * sp.p.reciprocal();
                if gamma >= cut {
                    gamma - cut + epsilon
                } else {
                    0.0
                }
            }
        };
        Ok(Self {
            gamma,
            gamma1,
            gamma2,
            gamma3,
            epsilon,
        })
    }
}

/// The parameter regimes whose admissibility conditions differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Jackson inequality via the differential operator.
    JacksonDiff,
    /// Direct (Jackson-type) theorem.
    ThmDirect,
    /// Inverse (Bernstein-type) theorem.
    ThmInverse,
    /// Equivalence of E_n decay and modulus decay.
    ThmEquiv,
    /// Characterization through derivatives of the differential operator.
    ThmEWD,
}

const EQ_TOL: f64 = 1e-12;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQ_TOL
}

/// The alpha (resp. beta) window shared by the four-case conditions:
/// p = 1: lo < v <= cap; 1 < p < inf: lo < v < cap + 1/2 - 1/(2p);
/// p = inf: lo <= v < cap + 1/2.
fn case_window(p: &PExponent, v: f64, cap: f64, name: &str) -> Option<String> {
    match p {
        PExponent::Finite(q) if *q == 1.0 => {
            if !(v > -0.5) {
                return Some(format!("{name} must be > -1/2 for p = 1, got {v}"));
            }
            if !(v <= cap) {
                return Some(format!("{name} must be <= {cap} for p = 1, got {v}"));
            }
        }
        PExponent::Finite(q) => {
            let half_rp = 0.5 / q;
            if !(v > -half_rp) {
                return Some(format!("{name} must be > -1/(2p) = {}, got {v}", -half_rp));
            }
            let hi = cap + 0.5 - half_rp;
            if !(v < hi) {
                return Some(format!("{name} must be < {hi}, got {v}"));
            }
        }
        PExponent::Infinity => {
            if !(v >= 0.0) {
                return Some(format!("{name} must be >= 0 for p = inf, got {v}"));
            }
            let hi = cap + 0.5;
            if !(v < hi) {
                return Some(format!("{name} must be < {hi}, got {v}"));
            }
        }
    }
    None
}

/// Case enumeration shared by the Jackson-inequality lemma and the
/// derivative theorems: selects on the (nu, mu) corner cases and the bound
/// caps (`nu`/`mu` for the lemma; clipped `nu_0`/`mu_0` when `clip` is set).
fn four_case_conditions(
    sp: &SpaceParams,
    jp: &JacobiParams,
    clip: bool,
    excl_half: bool,
) -> Option<String> {
    let half_rp = 0.5 * sp.p.reciprocal();
    let (nu, mu) = (jp.nu, jp.mu);
    let clip_at = 2.5 - half_rp;
    let (nu_cap, mu_cap) = if clip {
        (nu.min(clip_at), mu.min(clip_at))
    } else {
        (nu, mu)
    };
    if !jp.is_standard() {
        return Some(format!("need nu >= mu >= -1/2, got ({nu}, {mu})"));
    }
    if excl_half {
        // derivative-theorem variant: cases require mu > 1/2
        if close(nu, mu) {
            if !(mu > 0.5) {
                return Some(format!("case nu = mu requires nu > 1/2, got {nu}"));
            }
            if !close(sp.alpha, sp.beta) {
                return Some(format!(
                    "case nu = mu requires alpha = beta, got ({}, {})",
                    sp.alpha, sp.beta
                ));
            }
            return case_window(&sp.p, sp.alpha, nu_cap, "alpha");
        }
        if !(mu > 0.5) {
            return Some(format!("case nu > mu requires mu > 1/2, got {mu}"));
        }
        let d = sp.alpha - sp.beta;
        if !(d >= 0.0 && d < nu - mu) {
            return Some(format!(
                "need nu - mu > alpha - beta >= 0, got alpha - beta = {d}, nu - mu = {}",
                nu - mu
            ));
        }
        return case_window(&sp.p, sp.beta, mu_cap, "beta");
    }
    // Jackson-inequality variant (mu may reach -1/2)
    if close(nu, -0.5) && close(mu, -0.5) {
        let want = -half_rp;
        if !(close(sp.alpha, want) && close(sp.beta, want)) {
            return Some(format!(
                "case nu = mu = -1/2 requires alpha = beta = -1/(2p) = {want}, got ({}, {})",
                sp.alpha, sp.beta
            ));
        }
        return None;
    }
    if close(nu, mu) {
        if !close(sp.alpha, sp.beta) {
            return Some(format!(
                "case nu = mu requires alpha = beta, got ({}, {})",
                sp.alpha, sp.beta
            ));
        }
        return case_window(&sp.p, sp.alpha, nu, "alpha");
    }
    if close(mu, -0.5) {
        let want = -half_rp;
        if !close(sp.beta, want) {
            return Some(format!(
                "case nu > mu = -1/2 requires beta = -1/(2p) = {want}, got {}",
                sp.beta
            ));
        }
        return case_window(&sp.p, sp.alpha, nu, "alpha");
    }
    let d = sp.alpha - sp.beta;
    if !(d >= 0.0 && d < nu - mu) {
        return Some(format!(
            "need nu - mu > alpha - beta >= 0, got alpha - beta = {d}, nu - mu = {}",
            nu - mu
        ));
    }
    case_window(&sp.p, sp.beta, mu, "beta")
}

/// The derivative-theorem cases tighten the lower bounds of the shared
/// window from -1/(2p) style to 1 - 1/(2p) style; checked after the window.
fn derivative_case_lower_bound(sp: &SpaceParams, v: f64, name: &str) -> Option<String> {
    match sp.p {
        PExponent::Finite(q) if q == 1.0 => {
            if !(v > 0.5) {
                return Some(format!("{name} must be > 1/2 for p = 1, got {v}"));
            }
        }
        PExponent::Finite(q) => {
            let lo = 1.0 - 0.5 / q;
            if !(v > lo) {
                return Some(format!("{name} must be > 1 - 1/(2p) = {lo}, got {v}"));
            }
        }
        PExponent::Infinity => {
            if !(v >= 1.0) {
                return Some(format!("{name} must be >= 1 for p = inf, got {v}"));
            }
        }
    }
    None
}

/// Evaluates the regime admissibility conditions; returns pass/fail plus the first
/// violated inequality as text.
pub fn validate_regime(sp: &SpaceParams, jp: &JacobiParams, regime: Regime) -> (bool, String) {
    if let Err(e) = sp.validate() {
        return (false, e.to_string());
    }
    let violation = match regime {
        Regime::JacksonDiff => four_case_conditions(sp, jp, false, false),
        Regime::ThmDirect => {
            let rp = sp.p.reciprocal();
            match sp.p {
                PExponent::Finite(q) if q == 1.0 => {
                    if sp.alpha > 2.0 {
                        Some(format!("alpha must be <= 2 for p = 1, got {}", sp.alpha))
                    } else if sp.beta > 2.0 {
                        Some(format!("beta must be <= 2 for p = 1, got {}", sp.beta))
                    } else {
                        None
                    }
                }
                _ => {
                    let hi = 3.0 - rp;
                    if !(sp.alpha < hi) {
                        Some(format!("alpha must be < 3 - 1/p = {hi}, got {}", sp.alpha))
                    } else if !(sp.beta < hi) {
                        Some(format!("beta must be < 3 - 1/p = {hi}, got {}", sp.beta))
                    } else {
                        None
                    }
                }
            }
        }
        Regime::ThmInverse => match sp.p {
            PExponent::Finite(q) => {
                let lo = 1.0 - 0.5 / q;
                if !(sp.alpha > lo) {
                    Some(format!("alpha must be > 1 - 1/(2p) = {lo}, got {}", sp.alpha))
                } else if !(sp.beta > lo) {
                    Some(format!("beta must be > 1 - 1/(2p) = {lo}, got {}", sp.beta))
                } else {
                    None
                }
            }
            PExponent::Infinity => {
                if !(sp.alpha >= 1.0) {
                    Some(format!("alpha must be >= 1 for p = inf, got {}", sp.alpha))
                } else if !(sp.beta >= 1.0) {
                    Some(format!("beta must be >= 1 for p = inf, got {}", sp.beta))
                } else {
                    None
                }
            }
        },
        Regime::ThmEquiv => {
            let (d, expl_d) = validate_regime(sp, jp, Regime::ThmDirect);
            let (i, expl_i) = validate_regime(sp, jp, Regime::ThmInverse);
            if !d {
                Some(expl_d)
            } else if !i {
                Some(expl_i)
            } else {
                None
            }
        }
        Regime::ThmEWD => {
            let base = four_case_conditions(sp, jp, true, true);
            if base.is_some() {
                base
            } else if close(jp.nu, jp.mu) {
                derivative_case_lower_bound(sp, sp.alpha, "alpha")
            } else {
                derivative_case_lower_bound(sp, sp.beta, "beta")
            }
        }
    };
    match violation {
        Some(v) => (false, v),
        None => (true, "ok".to_string()),
    }
}
