//! Jacobi polynomials normalized at x = 1, Gauss quadrature rules, and
//! finite Jacobi-basis expansions.
//!
//! The polynomial recurrence is generic over the scalar type; everything
//! quadrature-related is `f64` (node solving relies on double precision).

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::Float;
use once_cell::sync::Lazy;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::Real;

/// Pair (nu, mu) indexing the Jacobi weight `(1-x)^nu (1+x)^mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub nu: f64,
    pub mu: f64,
}

impl JacobiParams {
    /// Parameters satisfying the standing assumption `nu >= mu >= -1/2`
    /// required by the translation and differential machinery.
    pub fn new(nu: f64, mu: f64) -> Result<Self> {
        if !(nu.is_finite() && mu.is_finite()) || !(nu >= mu && mu >= -0.5) {
            return Err(Error::ParamDomain(format!(
                "Jacobi parameters must satisfy nu >= mu >= -1/2, got nu = {nu}, mu = {mu}"
            )));
        }
        Ok(Self { nu, mu })
    }

    /// Weight exponents for expansion purposes only; requires integrability
    /// (`nu > -1`, `mu > -1`) but not the standing assumption.
    pub fn basis(nu: f64, mu: f64) -> Result<Self> {
        if !(nu.is_finite() && mu.is_finite()) || nu <= -1.0 || mu <= -1.0 {
            return Err(Error::ParamDomain(format!(
                "basis exponents must be > -1, got ({nu}, {mu})"
            )));
        }
        Ok(Self { nu, mu })
    }

    /// Whether the standing assumption `nu >= mu >= -1/2` holds.
    pub fn is_standard(&self) -> bool {
        self.nu >= self.mu && self.mu >= -0.5
    }
}

/// Magnitude `n (n + nu + mu + 1)` of the eigenvalue of the Jacobi
/// differential operator on `P_n`.
pub fn jacobi_eigenvalue(n: usize, params: &JacobiParams) -> f64 {
    let nf = n as f64;
    nf * (nf + params.nu + params.mu + 1.0)
}

/// Value of the *standard* (unnormalized) Jacobi polynomial together with
/// its first two derivatives, by the differentiated three-term recurrence.
fn jacobi_raw_derivs<F: Float>(n: usize, a: F, b: F, x: F) -> (F, F, F) {
    let one = F::one();
    let two = one + one;
    if n == 0 {
        return (one, F::zero(), F::zero());
    }
    // P_1 = (a - b)/2 + (a + b + 2) x / 2
    let mut pm1 = one;
    let mut dm1 = F::zero();
    let mut sm1 = F::zero();
    let mut p = (a - b) / two + (a + b + two) * x / two;
    let mut d = (a + b + two) / two;
    let mut s = F::zero();
    for k in 2..=n {
        let kf = F::from(k).unwrap();
        let apb = a + b;
        let c1 = two * kf * (kf + apb) * (two * kf + apb - two);
        let c2 = two * kf + apb - one;
        let c3 = (two * kf + apb) * (two * kf + apb - two);
        let c4 = a * a - b * b;
        let c5 = two * (kf + a - one) * (kf + b - one) * (two * kf + apb);
        // c1 P_k = c2 (c3 x + c4) P_{k-1} - c5 P_{k-2}
        let lin = c2 * (c3 * x + c4);
        let pk = (lin * p - c5 * pm1) / c1;
        let dk = (lin * d + c2 * c3 * p - c5 * dm1) / c1;
        let sk = (lin * s + two * c2 * c3 * d - c5 * sm1) / c1;
        pm1 = p;
        dm1 = d;
        sm1 = s;
        p = pk;
        d = dk;
        s = sk;
    }
    (p, d, s)
}

/// `P_n^{(nu,mu)}(x)` normalized so that `P_n(1) = 1`, generic over the
/// floating-point scalar.
pub fn jacobi_eval_generic<F: Float>(n: usize, a: F, b: F, x: F) -> F {
    let (p, _, _) = jacobi_raw_derivs(n, a, b, x);
    let (p1, _, _) = jacobi_raw_derivs(n, a, b, F::one());
    p / p1
}

/// `P_n^{(nu,mu)}(x)` under the normalization `P_n(1) = 1`.
pub fn jacobi_eval(n: usize, params: &JacobiParams, x: Real) -> Real {
    jacobi_eval_generic(n, params.nu, params.mu, x)
}

/// Normalized value plus first and second derivatives at `x`.
pub fn jacobi_derivs(n: usize, params: &JacobiParams, x: Real) -> (Real, Real, Real) {
    let (p, d, s) = jacobi_raw_derivs(n, params.nu, params.mu, x);
    let (p1, _, _) = jacobi_raw_derivs(n, params.nu, params.mu, 1.0);
    (p / p1, d / p1, s / p1)
}

/// Values `P_0(x), ..., P_{n_max}(x)` (normalized at 1) in one recurrence
/// pass; O(n_max) total.
pub fn jacobi_eval_all(n_max: usize, params: &JacobiParams, x: Real) -> Vec<Real> {
    let at = |x: f64| -> Vec<f64> {
        let (a, b) = (params.nu, params.mu);
        let mut out = Vec::with_capacity(n_max + 1);
        out.push(1.0);
        if n_max == 0 {
            return out;
        }
        out.push((a - b) / 2.0 + (a + b + 2.0) * x / 2.0);
        for k in 2..=n_max {
            let kf = k as f64;
            let apb = a + b;
            let c1 = 2.0 * kf * (kf + apb) * (2.0 * kf + apb - 2.0);
            let c2 = 2.0 * kf + apb - 1.0;
            let c3 = (2.0 * kf + apb) * (2.0 * kf + apb - 2.0);
            let c4 = a * a - b * b;
            let c5 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * (2.0 * kf + apb);
            let pk = (c2 * (c3 * x + c4) * out[k - 1] - c5 * out[k - 2]) / c1;
            out.push(pk);
        }
        out
    };
    let raw = at(x);
    let at1 = at(1.0);
    raw.iter().zip(at1.iter()).map(|(p, p1)| p / p1).collect()
}

/// Which weight a quadrature rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleKind {
    /// Weight `(1-x)^a (1+x)^b`.
    GaussJacobi { a: f64, b: f64 },
    /// Weight `1/sqrt(1-x^2)`.
    GaussChebyshev,
}

/// Nodes/weights with a declared polynomial exactness degree.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sum of the weights, i.e. the total mass of the rule's weight.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Integrates `g` against the rule's weight.
    pub fn integrate<G: FnMut(f64) -> f64>(&self, mut g: G) -> f64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

/// Total mass of the Jacobi weight: `2^{a+b+1} B(a+1, b+1)`.
fn jacobi_weight_mass(a: f64, b: f64) -> f64 {
    ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(a + b + 2.0))
        .exp()
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix, by the implicit-shift QL algorithm (Golub-Welsch style: only the
/// first row of the eigenvector matrix is accumulated).
fn tridiag_eigen_first_components(diag: &mut [f64], off: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    // `off` holds the subdiagonal in positions 0..n-1 with off[n-1] unused.
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::Domain(
                    "tridiagonal QL failed to converge".to_string(),
                ));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * off[i];
                let bb = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - bb;
                // first-row eigenvector update
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if r == 0.0 && m > l + 1 {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Gauss-Jacobi rule with `n_pts` points against weight `(1-x)^a (1+x)^b`,
/// exact for polynomials of degree `2 n_pts - 1`.
pub fn gauss_jacobi_rule(n_pts: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if a <= -1.0 || b <= -1.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::ParamDomain(format!(
            "Gauss-Jacobi exponents must be > -1, got ({a}, {b})"
        )));
    }
    if n_pts == 0 {
        return Err(Error::ParamDomain("rule needs at least one point".into()));
    }
    // Monic Jacobi recurrence coefficients (Gautschi).
    let mut diag = Vec::with_capacity(n_pts);
    let mut off = vec![0.0; n_pts];
    diag.push((b - a) / (a + b + 2.0));
    for k in 1..n_pts {
        let kf = k as f64;
        let den = (2.0 * kf + a + b) * (2.0 * kf + a + b + 2.0);
        diag.push((b * b - a * a) / den);
        let beta = if k == 1 {
            4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0).powi(2) * (a + b + 3.0))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + a + b)
                / ((2.0 * kf + a + b).powi(2) * (2.0 * kf + a + b + 1.0) * (2.0 * kf + a + b - 1.0))
        };
        off[k - 1] = beta.sqrt();
    }
    let mut z = vec![0.0; n_pts];
    z[0] = 1.0;
    tridiag_eigen_first_components(&mut diag, &mut off, &mut z)?;
    let mass = jacobi_weight_mass(a, b);
    let mut pairs: Vec<(f64, f64)> = diag
        .iter()
        .zip(z.iter())
        .map(|(&x, &zi)| (x, mass * zi * zi))
        .collect();
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    let (nodes, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    Ok(QuadratureRule {
        nodes,
        weights,
        kind: RuleKind::GaussJacobi { a, b },
        exactness_degree: 2 * n_pts - 1,
    })
}

/// Gauss-Chebyshev rule (weight `1/sqrt(1-x^2)`): closed-form nodes/weights.
pub fn gauss_chebyshev_rule(n_pts: usize) -> QuadratureRule {
    let n = n_pts.max(1);
    let w = std::f64::consts::PI / n as f64;
    let mut nodes: Vec<f64> = (1..=n)
        .map(|i| ((2.0 * i as f64 - 1.0) * std::f64::consts::PI / (2.0 * n as f64)).cos())
        .collect();
    nodes.reverse();
    QuadratureRule {
        weights: vec![w; n],
        nodes,
        kind: RuleKind::GaussChebyshev,
        exactness_degree: 2 * n - 1,
    }
}

static RULE_CACHE: Lazy<Mutex<HashMap<(usize, u64, u64), Arc<QuadratureRule>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached Gauss-Jacobi rule; hot paths (translations, norms) rebuild the
/// same rules constantly.
pub fn gauss_jacobi_rule_cached(n_pts: usize, a: f64, b: f64) -> Result<Arc<QuadratureRule>> {
    let key = (n_pts, a.to_bits(), b.to_bits());
    if let Some(rule) = RULE_CACHE.lock().unwrap().get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(gauss_jacobi_rule(n_pts, a, b)?);
    RULE_CACHE.lock().unwrap().insert(key, rule.clone());
    Ok(rule)
}

/// Finite expansion `f ~ sum c_k P_k^{(nu,mu)}` in the normalized-at-1 basis.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiExpansion {
    pub params: JacobiParams,
    pub coeffs: Vec<f64>,
}

impl JacobiExpansion {
    pub fn new(params: JacobiParams, coeffs: Vec<f64>) -> Self {
        Self { params, coeffs }
    }

    /// Highest retained coefficient index.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.coeffs.is_empty() {
            return 0.0;
        }
        let basis = jacobi_eval_all(self.degree(), &self.params, x);
        self.coeffs.iter().zip(basis.iter()).map(|(c, p)| c * p).sum()
    }

    /// Value, first and second derivative at `x`.
    pub fn eval_with_derivs(&self, x: f64) -> (f64, f64, f64) {
        let mut v = (0.0, 0.0, 0.0);
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let (p, d, s) = jacobi_derivs(k, &self.params, x);
            v.0 += c * p;
            v.1 += c * d;
            v.2 += c * s;
        }
        v
    }

    /// Drops coefficients at index >= `n`.
    pub fn truncated(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(n);
        Self::new(self.params, coeffs)
    }
}

/// Quadrature-consistent squared norms `h_k = int P_k^2 (1-x)^nu (1+x)^mu dx`
/// for `k = 0..n_max`, using a rule exact through degree `2 n_max`.
pub fn jacobi_squared_norms(params: &JacobiParams, n_max: usize, n_pts: usize) -> Result<Vec<f64>> {
    let pts = n_pts.max(n_max + 2);
    let rule = gauss_jacobi_rule_cached(pts, params.nu, params.mu)?;
    let mut h = vec![0.0; n_max + 1];
    for (&x, &w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let basis = jacobi_eval_all(n_max, params, x);
        for (k, p) in basis.iter().enumerate() {
            h[k] += w * p * p;
        }
    }
    Ok(h)
}

/// Projects a sampler onto `span{P_0 .. P_{n-1}}` by Gauss-Jacobi quadrature
/// with at least `n + 8` points (default `max(64, n + 16)`).
pub fn expand_in_jacobi<G: Fn(f64) -> f64>(
    f: G,
    n: usize,
    params: &JacobiParams,
) -> Result<JacobiExpansion> {
    expand_in_jacobi_with(f, n, params, (n + 16).max(64))
}

/// Same as [`expand_in_jacobi`] with an explicit node count.
pub fn expand_in_jacobi_with<G: Fn(f64) -> f64>(
    f: G,
    n: usize,
    params: &JacobiParams,
    n_pts: usize,
) -> Result<JacobiExpansion> {
    if n == 0 {
        return Err(Error::ParamDomain("expansion needs n >= 1".into()));
    }
    let pts = n_pts.max(n + 8);
    let rule = gauss_jacobi_rule_cached(pts, params.nu, params.mu)?;
    let n_max = n - 1;
    let mut num = vec![0.0; n];
    let mut den = vec![0.0; n];
    for (&x, &w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::Sampling {
                x,
                context: "expand_in_jacobi".to_string(),
            });
        }
        let basis = jacobi_eval_all(n_max, params, x);
        for (k, p) in basis.iter().enumerate() {
            num[k] += w * fx * p;
            den[k] += w * p * p;
        }
    }
    let coeffs = num.iter().zip(den.iter()).map(|(a, b)| a / b).collect();
    Ok(JacobiExpansion::new(*params, coeffs))
}

/// Expands samples already taken at a rule's nodes (avoids re-sampling).
pub fn expand_samples(
    samples: &[f64],
    rule: &QuadratureRule,
    n: usize,
    params: &JacobiParams,
) -> JacobiExpansion {
    let n_max = n - 1;
    let mut num = vec![0.0; n];
    let mut den = vec![0.0; n];
    for ((&x, &w), &fx) in rule.nodes.iter().zip(rule.weights.iter()).zip(samples) {
        let basis = jacobi_eval_all(n_max, params, x);
        for (k, p) in basis.iter().enumerate() {
            num[k] += w * fx * p;
            den[k] += w * p * p;
        }
    }
    let coeffs = num.iter().zip(den.iter()).map(|(a, b)| a / b).collect();
    JacobiExpansion::new(*params, coeffs)
}
