//! The second-order Jacobi differential operator
//! `D = (1-x^2) d^2/dx^2 + (mu - nu - (nu+mu+2) x) d/dx`
//! and its iterates, applied spectrally on expansions (where D is diagonal)
//! and pointwise by finite differences as an independent cross-check.

use crate::error::{Error, Result};
use crate::ortho::{jacobi_eigenvalue, JacobiExpansion, JacobiParams};
use crate::spaces::Func;

/// The operator D^r for a fixed parameter pair.
#[derive(Debug, Clone, Copy)]
pub struct DOperator {
    pub params: JacobiParams,
    pub order: usize,
}

impl DOperator {
    pub fn new(params: JacobiParams, order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::ParamDomain("operator order must be >= 1".into()));
        }
        if !params.is_standard() {
            return Err(Error::ParamDomain(format!(
                "operator needs nu >= mu >= -1/2, got ({}, {})",
                params.nu, params.mu
            )));
        }
        Ok(Self { params, order })
    }
}

/// Applies D^r to an expansion: `c_k -> (-k (k + nu + mu + 1))^r c_k`.
pub fn apply_d_expansion(e: &JacobiExpansion, r: usize, params: &JacobiParams) -> Result<JacobiExpansion> {
    if e.params != *params {
        return Err(Error::BasisMismatch(format!(
            "expansion basis ({}, {}) != operator basis ({}, {})",
            e.params.nu, e.params.mu, params.nu, params.mu
        )));
    }
    if r == 0 {
        return Ok(e.clone());
    }
    let coeffs = e
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| (-jacobi_eigenvalue(k, params)).powi(r as i32) * c)
        .collect();
    Ok(JacobiExpansion::new(*params, coeffs))
}

/// The first-order coefficient `mu - nu - (nu + mu + 2) x`.
fn drift(params: &JacobiParams, x: f64) -> f64 {
    params.mu - params.nu - (params.nu + params.mu + 2.0) * x
}

/// Combines given first and second derivatives into `D f` at `x`.
pub fn combine_d(params: &JacobiParams, x: f64, d1: f64, d2: f64) -> f64 {
    (1.0 - x * x) * d2 + drift(params, x) * d1
}

/// Applies D pointwise to an expansion through its exact derivative
/// recurrences (no finite-difference truncation error).
pub fn apply_d_exact(e: &JacobiExpansion, params: &JacobiParams, x: f64) -> f64 {
    let (_, d1, d2) = e.eval_with_derivs(x);
    combine_d(params, x, d1, d2)
}

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Central finite differences for `f'` and `f''` combined into `D f(x)`;
/// O(h^2) accurate for C^4 functions.
pub fn apply_d_pointwise(f: &Func, jp: &JacobiParams, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::ParamDomain(format!("step must be positive, got {h}")));
    }
    if x.abs() + 2.0 * h >= 1.0 {
        return Err(Error::Domain(format!(
            "finite-difference stencil leaves (-1,1): x = {x}, h = {h}"
        )));
    }
    let fm = f.eval_checked(x - h)?;
    let f0 = f.eval_checked(x)?;
    let fp = f.eval_checked(x + h)?;
    let d1 = (fp - fm) / (2.0 * h);
    let d2 = (fp - 2.0 * f0 + fm) / (h * h);
    Ok(combine_d(jp, x, d1, d2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ortho::{expand_in_jacobi, jacobi_eval};
    use approx::assert_relative_eq;

    #[test]
    fn annihilates_constants() {
        let p = JacobiParams::new(1.0, 0.5).unwrap();
        let e = JacobiExpansion::new(p, vec![3.0]);
        let de = apply_d_expansion(&e, 1, &p).unwrap();
        assert_eq!(de.coeffs, vec![0.0]);

        let f = Func::from_fn("const", |_| 3.0);
        let v = apply_d_pointwise(&f, &p, 0.2, 1e-4).unwrap();
        assert!(v.abs() < 1e-7);
    }

    #[test]
    fn single_mode_eigen_action() {
        // D P_3^{(1,0)} = -3 (3+1+0+1) P_3 = -15 P_3
        let p = JacobiParams::new(1.0, 0.0).unwrap();
        let mut coeffs = vec![0.0; 4];
        coeffs[3] = 1.0;
        let e = JacobiExpansion::new(p, coeffs);
        let de = apply_d_expansion(&e, 1, &p).unwrap();
        assert_relative_eq!(de.coeffs[3], -15.0, epsilon = 1e-12);

        // iterate: D^2 P_2^{(0,0)} = (-2*3)^2 P_2 = 36 P_2
        let p0 = JacobiParams::new(0.0, 0.0).unwrap();
        let e2 = JacobiExpansion::new(p0, vec![0.0, 0.0, 1.0]);
        let d2 = apply_d_expansion(&e2, 2, &p0).unwrap();
        assert_relative_eq!(d2.coeffs[2], 36.0, epsilon = 1e-12);
    }

    #[test]
    fn pointwise_linear_closed_form() {
        let p = JacobiParams::new(1.5, 0.5).unwrap();
        let f = Func::from_fn("x", |x| x);
        for &x in &[-0.4, 0.0, 0.6] {
            let v = apply_d_pointwise(&f, &p, x, 1e-4).unwrap();
            let expect = p.mu - p.nu - (p.nu + p.mu + 2.0) * x;
            assert_relative_eq!(v, expect, epsilon = 1e-6);
        }
    }

    #[test]
    fn pointwise_matches_eigenvalue_on_mode() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let f = Func::from_fn("p4", move |x| jacobi_eval(4, &p, x));
        let x = 0.3;
        let v = apply_d_pointwise(&f, &p, x, 1e-4).unwrap();
        let expect = -20.0 * jacobi_eval(4, &p, x);
        assert_relative_eq!(v, expect, max_relative = 1e-5);
    }

    #[test]
    fn spectral_and_pointwise_agree_on_polynomials() {
        let p = JacobiParams::new(1.0, 0.5).unwrap();
        let poly = |x: f64| 0.2 + x - 0.5 * x.powi(3) + 0.05 * x.powi(12);
        let e = expand_in_jacobi(poly, 13, &p).unwrap();
        let de = apply_d_expansion(&e, 1, &p).unwrap();
        let f = Func::from_fn("poly", poly);
        let h = 1e-4;
        for i in 0..=18 {
            let x = -0.9 + 1.8 * i as f64 / 18.0;
            let spectral = de.eval(x);
            let pointwise = apply_d_pointwise(&f, &p, x, h).unwrap();
            let scale = spectral.abs().max(1.0);
            assert!(
                (spectral - pointwise).abs() <= (10.0 * h * h * scale).max(1e-6) * scale.max(1.0),
                "x={x}: {spectral} vs {pointwise}"
            );
        }
    }

    #[test]
    fn eigen_relation_exact_derivatives() {
        for &(nu, mu) in &[(0.0, 0.0), (1.0, 0.5), (2.0, -0.5)] {
            let p = JacobiParams::new(nu, mu).unwrap();
            for n in 0..=32usize {
                let mut coeffs = vec![0.0; n + 1];
                coeffs[n] = 1.0;
                let e = JacobiExpansion::new(p, coeffs);
                let lambda = jacobi_eigenvalue(n, &p);
                for i in 0..=16 {
                    let x = -0.95 + 1.9 * i as f64 / 16.0;
                    let dp = apply_d_exact(&e, &p, x);
                    let resid = dp + lambda * jacobi_eval(n, &p, x);
                    assert!(
                        resid.abs() / (1.0 + (n * n) as f64) < 1e-7,
                        "n={n} x={x} resid={resid}"
                    );
                }
            }
        }
    }

    #[test]
    fn commutes_with_truncation() {
        let p = JacobiParams::new(1.0, 1.0).unwrap();
        let e = JacobiExpansion::new(p, vec![1.0, -0.5, 0.25, 0.1, 0.7]);
        let a = apply_d_expansion(&e.truncated(3), 1, &p).unwrap();
        let b = apply_d_expansion(&e, 1, &p).unwrap().truncated(3);
        assert_eq!(a.coeffs, b.coeffs);
    }

    #[test]
    fn basis_mismatch_rejected() {
        let p = JacobiParams::new(1.0, 1.0).unwrap();
        let q = JacobiParams::new(1.0, 0.0).unwrap();
        let e = JacobiExpansion::new(p, vec![1.0]);
        assert!(matches!(
            apply_d_expansion(&e, 1, &q),
            Err(Error::BasisMismatch(_))
        ));
    }

    #[test]
    fn stencil_domain_error() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let f = Func::from_fn("x", |x| x);
        assert!(apply_d_pointwise(&f, &p, 0.9999, 1e-4).is_err());
    }
}
