//! Weighted best approximation E_n(f) and the two Jackson-kernel smoothing
//! operators, plus the dyadic block decomposition.
//!
//! The solver is chosen by the exponent: p = 2 is an orthogonal projection
//! in the (2 alpha, 2 beta) Gauss-Jacobi inner product, p = inf is a
//! discrete minimax exchange on a fixed dense grid, and other p run
//! iteratively reweighted least squares on the quadrature grid.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::ortho::{
    expand_in_jacobi_with, gauss_jacobi_rule_cached, jacobi_eval_all, jacobi_squared_norms,
    JacobiExpansion, JacobiParams,
};
use crate::spaces::{
    chebyshev_grid, validate_regime, Func, PExponent, Regime, SpaceParams, NORM_QUAD_NODES,
    SUP_GRID_SIZE,
};
use crate::translation::{asymmetric_translate, symmetric_translate, TranslationConfig};

/// Which solver (or construction) produced an [`ApproxResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ProjectionP2,
    ExchangePInf,
    IrlsGeneralP,
    JacksonAsym,
    JacksonSym,
}

/// A polynomial approximant with its achieved weighted error.
#[derive(Debug, Clone)]
pub struct ApproxResult {
    /// Approximated from polynomials of degree <= degree_bound - 1.
    pub degree_bound: usize,
    pub poly: JacobiExpansion,
    pub error: f64,
    pub method: Method,
}

/// Parameters of the generalized Jackson kernel
/// `(sin(mt/2) / sin(t/2))^{2q}`.
#[derive(Debug, Clone, Copy)]
pub struct JacksonKernelSpec {
    pub q: usize,
    pub m: usize,
}

impl JacksonKernelSpec {
    pub fn new(q: usize, m: usize) -> Result<Self> {
        if q < 1 || m < 1 {
            return Err(Error::ParamDomain(format!(
                "Jackson kernel needs q >= 1 and m >= 1, got q = {q}, m = {m}"
            )));
        }
        Ok(Self { q, m })
    }

    /// The algebraic degree of the induced smoothing operator.
    pub fn degree_bound(&self) -> usize {
        (self.q + 2) * (self.m - 1)
    }
}

/// `(sin(mt/2)/sin(t/2))^{2q}` for t in [0, pi], with the removable
/// singularity at t = 0 evaluated as m^{2q}.
pub fn jackson_kernel(spec: &JacksonKernelSpec, t: f64) -> f64 {
    let s = (t / 2.0).sin();
    let ratio = if s.abs() < 1e-12 {
        spec.m as f64
    } else {
        (spec.m as f64 * t / 2.0).sin() / s
    };
    ratio.powi(2 * spec.q as i32)
}

/// The expansion basis every solver shares for a given space: p = 2 uses the
/// (2 alpha, 2 beta) Jacobi family (in whose inner product the projection is
/// orthogonal), general finite p the (alpha p, beta p) family matching the
/// quadrature grid, and p = inf the Chebyshev family.
fn solver_basis(sp: &SpaceParams) -> Result<JacobiParams> {
    match sp.p {
        PExponent::Finite(p) => JacobiParams::new(sp.alpha * p, sp.beta * p),
        PExponent::Infinity => JacobiParams::new(-0.5, -0.5),
    }
}

/// Best weighted approximation of `f` by polynomials of degree <= n-1.
pub fn best_approx(f: &Func, n: usize, sp: &SpaceParams) -> Result<ApproxResult> {
    if n < 1 {
        return Err(Error::ParamDomain("best_approx needs n >= 1".into()));
    }
    sp.validate()?;
    match sp.p {
        PExponent::Finite(p) if (p - 2.0).abs() <= 1e-12 => best_approx_p2(f, n, sp),
        PExponent::Finite(_) => best_approx_irls(f, n, sp),
        PExponent::Infinity => best_approx_exchange(f, n, sp),
    }
}

fn finish(
    f: &Func,
    poly: JacobiExpansion,
    n: usize,
    sp: &SpaceParams,
    method: Method,
) -> Result<ApproxResult> {
    let g = Func::from_expansion("approximant", poly.clone());
    let error = crate::spaces::weighted_norm_diff(f, &g, sp)?;
    Ok(ApproxResult {
        degree_bound: n,
        poly,
        error,
        method,
    })
}

fn best_approx_p2(f: &Func, n: usize, sp: &SpaceParams) -> Result<ApproxResult> {
    let basis = solver_basis(sp)?;
    let fc = f.clone();
    let poly = expand_in_jacobi_with(move |x| fc.eval(x), n, &basis, NORM_QUAD_NODES)?;
    finish(f, poly, n, sp, Method::ProjectionP2)
}

const IRLS_MAX_ITERS: usize = 200;
const IRLS_COEFF_TOL: f64 = 1e-9;
const IRLS_WEIGHT_FLOOR: f64 = 1e-12;

fn best_approx_irls(f: &Func, n: usize, sp: &SpaceParams) -> Result<ApproxResult> {
    let p = match sp.p {
        PExponent::Finite(p) => p,
        PExponent::Infinity => unreachable!(),
    };
    let basis = solver_basis(sp)?;
    let rule = gauss_jacobi_rule_cached(NORM_QUAD_NODES.max(n + 8), basis.nu, basis.mu)?;
    let npts = rule.len();
    let fx: Vec<f64> = rule.nodes.iter().map(|&x| f.eval(x)).collect();
    if fx.iter().any(|v| !v.is_finite()) {
        return Err(Error::Sampling {
            x: f64::NAN,
            context: "best_approx_irls".into(),
        });
    }
    let mut design = DMatrix::zeros(npts, n);
    for (i, &x) in rule.nodes.iter().enumerate() {
        for (k, v) in jacobi_eval_all(n - 1, &basis, x).into_iter().enumerate() {
            design[(i, k)] = v;
        }
    }

    let mut coeffs = DVector::zeros(n);
    let mut residual: Vec<f64> = fx.clone();
    let mut change = f64::INFINITY;
    for _ in 0..IRLS_MAX_ITERS {
        // weighted least squares with weights w_i |r_i|^{p-2}, floored
        let mut a = DMatrix::zeros(npts, n);
        let mut y = DVector::zeros(npts);
        for i in 0..npts {
            let u = residual[i].abs().max(IRLS_WEIGHT_FLOOR);
            let w = (rule.weights[i] * u.powf(p - 2.0).max(IRLS_WEIGHT_FLOOR)).sqrt();
            for k in 0..n {
                a[(i, k)] = w * design[(i, k)];
            }
            y[i] = w * fx[i];
        }
        let ls = a
            .svd(true, true)
            .solve(&y, 1e-14)
            .map_err(|e| Error::Domain(format!("IRLS solve failed: {e}")))?;
        // undamped IRLS oscillates for p > 2; the classical 1/(p-1) step is
        // a contraction there
        let theta = if p > 2.0 { 1.0 / (p - 1.0) } else { 1.0 };
        let next = &coeffs + (ls - &coeffs) * theta;
        change = (&next - &coeffs).amax();
        coeffs = next;
        for i in 0..npts {
            let mut v = 0.0;
            for k in 0..n {
                v += coeffs[k] * design[(i, k)];
            }
            residual[i] = fx[i] - v;
        }
        if change < IRLS_COEFF_TOL {
            let poly = JacobiExpansion::new(basis, coeffs.iter().copied().collect());
            return finish(f, poly, n, sp, Method::IrlsGeneralP);
        }
    }
    Err(Error::IterationLimit {
        iterations: IRLS_MAX_ITERS,
        last_error: change,
    })
}

const EXCHANGE_MAX_ITERS: usize = 200;
const EXCHANGE_DEFECT_TOL: f64 = 1e-8;

fn best_approx_exchange(f: &Func, n: usize, sp: &SpaceParams) -> Result<ApproxResult> {
    let basis = solver_basis(sp)?;
    let grid = chebyshev_grid(SUP_GRID_SIZE);
    let npts = grid.len();
    if n + 1 > npts {
        return Err(Error::ParamDomain(format!(
            "exchange grid of {npts} points cannot support degree bound {n}"
        )));
    }
    let fx: Vec<f64> = grid.iter().map(|&x| f.eval(x)).collect();
    if fx.iter().any(|v| !v.is_finite()) {
        return Err(Error::Sampling {
            x: f64::NAN,
            context: "best_approx_exchange".into(),
        });
    }
    let wx: Vec<f64> = grid.iter().map(|&x| sp.weight(x)).collect();
    let table: Vec<Vec<f64>> = grid
        .iter()
        .map(|&x| jacobi_eval_all(n - 1, &basis, x))
        .collect();

    // initial reference: n+1 interior indices spread over the grid (the
    // extreme grid points can carry near-vanishing weights)
    let mut reference: Vec<usize> = (0..=n).map(|j| (j + 1) * (npts - 1) / (n + 2)).collect();
    let mut coeffs = vec![0.0; n];
    let mut defect = f64::INFINITY;
    for _ in 0..EXCHANGE_MAX_ITERS {
        // level the weighted error on the reference with alternating signs:
        // sum_k c_k P_k(x_j) + (-1)^j h / w(x_j) = f(x_j)
        let mut a = DMatrix::zeros(n + 1, n + 1);
        let mut y = DVector::zeros(n + 1);
        for (j, &idx) in reference.iter().enumerate() {
            for k in 0..n {
                a[(j, k)] = table[idx][k];
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            a[(j, n)] = sign / wx[idx];
            y[j] = fx[idx];
        }
        let sol = a
            .svd(true, true)
            .solve(&y, 1e-14)
            .map_err(|e| Error::Domain(format!("exchange solve failed: {e}")))?;
        coeffs = sol.iter().take(n).copied().collect();
        let h = sol[n].abs();

        let err: Vec<f64> = (0..npts)
            .map(|i| {
                let mut v = 0.0;
                for k in 0..n {
                    v += coeffs[k] * table[i][k];
                }
                wx[i] * (fx[i] - v)
            })
            .collect();
        let max_abs = err.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        if max_abs < 1e-13 {
            // f is (numerically) a feasible polynomial
            let poly = JacobiExpansion::new(basis, coeffs);
            return finish(f, poly, n, sp, Method::ExchangePInf);
        }
        defect = (max_abs - h) / max_abs;
        if defect < EXCHANGE_DEFECT_TOL {
            let poly = JacobiExpansion::new(basis, coeffs);
            return finish(f, poly, n, sp, Method::ExchangePInf);
        }

        // single-point exchange: swap the worst grid point into the
        // reference, replacing a same-signed neighbor so the signs keep
        // alternating
        let worst = (0..npts)
            .max_by(|&i, &j| err[i].abs().total_cmp(&err[j].abs()))
            .unwrap();
        let pos = reference.partition_point(|&r| r < worst);
        if reference.get(pos) == Some(&worst) {
            break; // worst point already referenced: leveling has stalled
        }
        let s = err[worst].signum();
        if pos == 0 {
            if err[reference[0]].signum() == s {
                reference[0] = worst;
            } else {
                reference.insert(0, worst);
                reference.pop();
            }
        } else if pos == reference.len() {
            if err[*reference.last().unwrap()].signum() == s {
                *reference.last_mut().unwrap() = worst;
            } else {
                reference.remove(0);
                reference.push(worst);
            }
        } else if err[reference[pos - 1]].signum() == s {
            reference[pos - 1] = worst;
        } else {
            reference[pos] = worst;
        }
    }
    if defect < EXCHANGE_DEFECT_TOL * 10.0 {
        let poly = JacobiExpansion::new(basis, coeffs);
        return finish(f, poly, n, sp, Method::ExchangePInf);
    }
    Err(Error::IterationLimit {
        iterations: EXCHANGE_MAX_ITERS,
        last_error: defect,
    })
}

/// Relative coefficient-tail energy of `e` beyond `deg`, measured in the
/// expansion's own inner product.
fn relative_tail_energy(e: &JacobiExpansion, deg: usize) -> Result<f64> {
    let n_max = e.coeffs.len().saturating_sub(1);
    let h = jacobi_squared_norms(&e.params, n_max, NORM_QUAD_NODES)?;
    let mut total = 0.0;
    let mut tail = 0.0;
    for (k, &c) in e.coeffs.iter().enumerate() {
        let energy = c * c * h[k];
        total += energy;
        if k > deg {
            tail += energy;
        }
    }
    if total < 1e-28 {
        return Ok(0.0);
    }
    Ok(tail / total)
}

const JACKSON_TAIL_TOL: f64 = 1e-7;
/// Extra coefficients retained past the claimed degree so the tail test has
/// something to look at.
const JACKSON_TAIL_PAD: usize = 8;

fn jackson_pipeline(
    f: &Func,
    q_sample: impl Fn(f64) -> Result<f64>,
    deg: usize,
    basis: &JacobiParams,
    sp: &SpaceParams,
    method: Method,
) -> Result<ApproxResult> {
    let n_exp = deg + 1 + JACKSON_TAIL_PAD;
    // sample once on the projection rule, surfacing quadrature errors
    let rule = gauss_jacobi_rule_cached((n_exp + 16).max(64), basis.nu, basis.mu)?;
    let mut samples = Vec::with_capacity(rule.len());
    for &x in rule.nodes.iter() {
        samples.push(q_sample(x)?);
    }
    let full = crate::ortho::expand_samples(&samples, &rule, n_exp, basis);
    let tail = relative_tail_energy(&full, deg)?;
    if tail >= JACKSON_TAIL_TOL {
        return Err(Error::DegreeViolation(format!(
            "Jackson operator tail energy {tail:.3e} beyond degree {deg} (bound {JACKSON_TAIL_TOL:.0e})"
        )));
    }
    let poly = full.truncated(deg + 1);
    finish(f, poly, deg + 1, sp, method)
}

/// The asymmetric Jackson smoothing operator
/// `Q(x) = (1/gamma_m) int_0^pi T_t(f, x) K(t) sin^3 t dt`,
/// a polynomial of degree <= (q+2)(m-1).
///
/// The outer integral substitutes s = cos t, turning sin^3 t dt into the
/// (1,1) Gauss-Jacobi measure; the kernel is then a polynomial in s and the
/// degree cancellation happens to quadrature precision.
pub fn jackson_operator_asym(
    f: &Func,
    spec: &JacksonKernelSpec,
    sp: &SpaceParams,
    cfg: &TranslationConfig,
) -> Result<ApproxResult> {
    sp.validate()?;
    // the degree-tail gate below needs the inner z-integral resolved well
    // past the norm tolerance even for merely continuous f, so the node
    // count is floored far above the translation default
    let cfg = TranslationConfig {
        inner_nodes: cfg.inner_nodes.max(512),
        outer_nodes: cfg.outer_nodes,
    };
    let cfg = &cfg;
    let deg = spec.degree_bound();
    // for merely continuous f the integrand decays only algebraically in the
    // outer node count, and the degree-tail gate needs the slack
    let outer = gauss_jacobi_rule_cached((8 * spec.q * spec.m).max(192), 1.0, 1.0)?;
    let ts: Vec<f64> = outer.nodes.iter().map(|&s| s.clamp(-1.0, 1.0).acos()).collect();
    let kvals: Vec<f64> = ts.iter().map(|&t| jackson_kernel(spec, t)).collect();
    let gamma_m: f64 = outer
        .weights
        .iter()
        .zip(kvals.iter())
        .map(|(w, k)| w * k)
        .sum();
    let sample = |x: f64| -> Result<f64> {
        let mut acc = 0.0;
        for ((&w, &k), &t) in outer.weights.iter().zip(kvals.iter()).zip(ts.iter()) {
            acc += w * k * asymmetric_translate(f, t, x, cfg)?;
        }
        Ok(acc / gamma_m)
    };
    let basis = JacobiParams::new(0.0, 0.0)?;
    jackson_pipeline(f, sample, deg, &basis, sp, Method::JacksonAsym)
}

/// The symmetric Jackson smoothing operator
/// `Q(x) = (1/gamma_m) int_0^pi tau_t(f, x) K(t) sin^{2nu+1}(t/2)
/// cos^{2mu+1}(t/2) dt`, a polynomial of degree <= (q+2)(m-1).
///
/// With s = cos t the angular weight is exactly the (nu, mu) Jacobi measure
/// (times a constant that cancels against gamma_m).
pub fn jackson_operator_sym(
    f: &Func,
    spec: &JacksonKernelSpec,
    jp: &JacobiParams,
    sp: &SpaceParams,
    cfg: &TranslationConfig,
) -> Result<ApproxResult> {
    sp.validate()?;
    let (ok, why) = validate_regime(sp, jp, Regime::JacksonDiff);
    if !ok {
        return Err(Error::ParamDomain(format!(
            "inadmissible regime for the symmetric Jackson operator: {why}"
        )));
    }
    let deg = spec.degree_bound();
    let outer = gauss_jacobi_rule_cached((4 * spec.q * spec.m).max(48), jp.nu, jp.mu)?;
    let ts: Vec<f64> = outer.nodes.iter().map(|&s| s.clamp(-1.0, 1.0).acos()).collect();
    let kvals: Vec<f64> = ts.iter().map(|&t| jackson_kernel(spec, t)).collect();
    let gamma_m: f64 = outer
        .weights
        .iter()
        .zip(kvals.iter())
        .map(|(w, k)| w * k)
        .sum();
    let sample = |x: f64| -> Result<f64> {
        let mut acc = 0.0;
        for ((&w, &k), &t) in outer.weights.iter().zip(kvals.iter()).zip(ts.iter()) {
            acc += w * k * symmetric_translate(f, t, x, jp, cfg)?;
        }
        Ok(acc / gamma_m)
    };
    jackson_pipeline(f, sample, deg, jp, sp, Method::JacksonSym)
}

/// Difference of two expansions sharing a basis, padded to the longer one.
fn expansion_diff(a: &JacobiExpansion, b: &JacobiExpansion) -> Result<JacobiExpansion> {
    if (a.params.nu - b.params.nu).abs() > 1e-12 || (a.params.mu - b.params.mu).abs() > 1e-12 {
        return Err(Error::BasisMismatch(
            "dyadic blocks need a shared expansion basis".into(),
        ));
    }
    let len = a.coeffs.len().max(b.coeffs.len());
    let mut coeffs = vec![0.0; len];
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c = a.coeffs.get(k).copied().unwrap_or(0.0) - b.coeffs.get(k).copied().unwrap_or(0.0);
    }
    Ok(JacobiExpansion::new(a.params, coeffs))
}

/// Dyadic blocks `Q_k = P_{2^k} - P_{2^{k-1}}` of best approximants,
/// `Q_0 = P_1`, for k = 0..=N. Their sum telescopes to `P_{2^N}` exactly in
/// coefficients.
pub fn dyadic_blocks(f: &Func, n_levels: usize, sp: &SpaceParams) -> Result<Vec<JacobiExpansion>> {
    if n_levels > 10 {
        return Err(Error::ParamDomain(format!(
            "dyadic_blocks caps at N = 10 (degree 1024), got {n_levels}"
        )));
    }
    let mut prev: Option<ApproxResult> = None;
    let mut blocks = Vec::with_capacity(n_levels + 1);
    for k in 0..=n_levels {
        let res = best_approx(f, 1 << k, sp)?;
        if let Some(ref prev) = prev {
            if res.error > prev.error + 1e-10 {
                return Err(Error::Domain(format!(
                    "best approximation error increased with degree: E_{} = {} > E_{} = {}",
                    1 << k,
                    res.error,
                    1 << (k - 1),
                    prev.error
                )));
            }
            blocks.push(expansion_diff(&res.poly, &prev.poly)?);
        } else {
            blocks.push(res.poly.clone());
        }
        prev = Some(res);
    }
    Ok(blocks)
}
