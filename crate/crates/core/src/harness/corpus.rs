//! The named test-function corpus the experiments run over.

use crate::error::{Error, Result};
use crate::ortho::{jacobi_eigenvalue, jacobi_squared_norms, JacobiExpansion, JacobiParams};
use crate::spaces::{Func, NORM_QUAD_NODES};

/// Labels resolvable by [`corpus_function`], in presentation order.
pub const CORPUS_LABELS: &[(&str, &str)] = &[
    ("one", "constant 1"),
    ("x", "identity"),
    ("x2", "x^2"),
    ("x3", "x^3"),
    ("abs_x", "|x|"),
    ("abs_x_0.5", "|x|^{1/2}"),
    ("abs_x_1.5", "|x|^{3/2}"),
    ("x_abs_x", "x |x|"),
    ("abs_x_2.5", "|x|^{5/2}"),
    ("runge", "1/(1 + x^2)"),
    ("exp", "e^x"),
    ("cosine", "cos(x)"),
];

/// Resolves a corpus label to its function.
pub fn corpus_function(label: &str) -> Result<Func> {
    let f = match label {
        "one" => Func::from_fn("one", |_| 1.0),
        "x" => Func::from_fn("x", |x| x),
        "x2" => Func::from_fn("x2", |x| x * x),
        "x3" => Func::from_fn("x3", |x| x * x * x),
        "abs_x" => Func::from_fn("abs_x", f64::abs),
        "abs_x_0.5" => Func::from_fn("abs_x_0.5", |x| x.abs().sqrt()),
        "abs_x_1.5" => Func::from_fn("abs_x_1.5", |x| x.abs().powf(1.5)),
        "x_abs_x" => Func::from_fn("x_abs_x", |x| x * x.abs()),
        "abs_x_2.5" => Func::from_fn("abs_x_2.5", |x| x.abs().powf(2.5)),
        "runge" => Func::from_fn("runge", |x| 1.0 / (1.0 + x * x)),
        "exp" => Func::from_fn("exp", f64::exp),
        "cosine" => Func::from_fn("cosine", f64::cos),
        _ => {
            return Err(Error::Config(format!(
                "unknown corpus label {label:?}; see `corpus list`"
            )))
        }
    };
    Ok(f)
}

/// A single Jacobi mode `P_k^{(nu, mu)}` as a corpus function.
pub fn jacobi_mode(k: usize, jp: &JacobiParams) -> Func {
    let mut coeffs = vec![0.0; k + 1];
    coeffs[k] = 1.0;
    Func::from_expansion(
        &format!("P_{k}^{{({}, {})}}", jp.nu, jp.mu),
        JacobiExpansion::new(*jp, coeffs),
    )
}

/// A function with an exactly known p = 2 best-approximation curve: the
/// expansion with coefficients `c_k = k^{-(2r + lambda) - 1/2} / sqrt(h_k)`
/// (k >= 1, truncated at `modes`), where h_k are the basis's squared norms.
///
/// In the space whose weight squares to the basis measure (alpha = nu/2,
/// beta = mu/2, p = 2), `E_n(f) = sqrt(sum_{k >= n} c_k^2 h_k)` exactly, and
/// the normalization by sqrt(h_k) makes that tail a bare power sum
/// `sum_{k >= n} k^{-2(2r + lambda) - 1}`, so E_n decays like
/// `n^{-(2r + lambda)}`.
pub struct DesignedTail {
    pub func: Func,
    pub coeffs: Vec<f64>,
    pub squared_norms: Vec<f64>,
    pub params: JacobiParams,
    pub r: usize,
    pub lambda: f64,
}

pub const DESIGNED_TAIL_MODES: usize = 256;

impl DesignedTail {
    pub fn new(r: usize, lambda: f64, jp: &JacobiParams) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::ParamDomain(format!(
                "designed tail needs lambda > 0, got {lambda}"
            )));
        }
        let modes = DESIGNED_TAIL_MODES;
        let h = jacobi_squared_norms(jp, modes, NORM_QUAD_NODES.max(modes + 16))?;
        let decay = 2.0 * r as f64 + lambda + 0.5;
        let mut coeffs = vec![0.0; modes + 1];
        for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
            *c = (k as f64).powf(-decay) / h[k].sqrt();
        }
        let expansion = JacobiExpansion::new(*jp, coeffs.clone());
        Ok(Self {
            func: Func::from_expansion(&format!("designed_r{r}_l{lambda}"), expansion),
            coeffs,
            squared_norms: h,
            params: *jp,
            r,
            lambda,
        })
    }

    /// Exact `E_n` of the expansion with the given coefficients, in the
    /// p = 2 space matching the basis measure.
    pub fn exact_tail_error(coeffs: &[f64], h: &[f64], n: usize) -> f64 {
        coeffs
            .iter()
            .zip(h.iter())
            .skip(n)
            .map(|(c, hk)| c * c * hk)
            .sum::<f64>()
            .sqrt()
    }

    /// Exact `E_n(f)`.
    pub fn error_of_f(&self, n: usize) -> f64 {
        Self::exact_tail_error(&self.coeffs, &self.squared_norms, n)
    }

    /// The spectral image `D^r f` (coefficients scaled by the eigenvalues)
    /// and its exact `E_n` curve.
    pub fn d_power(&self, r: usize) -> (Func, Vec<f64>) {
        let coeffs: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| (-jacobi_eigenvalue(k, &self.params)).powi(r as i32) * c)
            .collect();
        let e = JacobiExpansion::new(self.params, coeffs.clone());
        (
            Func::from_expansion(&format!("D^{r} designed"), e),
            coeffs,
        )
    }

    /// Exact `E_n(D^r f)`.
    pub fn error_of_df(&self, n: usize) -> f64 {
        let (_, coeffs) = self.d_power(self.r);
        Self::exact_tail_error(&coeffs, &self.squared_norms, n)
    }
}
