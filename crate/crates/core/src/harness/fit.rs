//! Log-log rate fitting.

/// Least-squares slope of log(value) against log(scale).
#[derive(Debug, Clone, Copy)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the log-space residuals.
    pub residual: f64,
    /// Points actually used (values above the fit floor).
    pub used: usize,
}

/// Values at or below this are treated as exact zeros and excluded.
pub const FIT_FLOOR: f64 = 1e-13;

/// Fits `value ~ C * scale^slope`; `None` if fewer than two points survive
/// the floor.
pub fn fit_log_slope(pairs: &[(f64, f64)]) -> Option<RateFit> {
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(s, v)| *s > 0.0 && *v > FIT_FLOOR)
        .map(|&(s, v)| (s.ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let ss: f64 = pts
        .iter()
        .map(|&(x, y)| {
            let r = y - slope * x - intercept;
            r * r
        })
        .sum();
    Some(RateFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
        used: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_powers() {
        for s in [-2.0, -0.5, 0.0, 1.7] {
            let pairs: Vec<(f64, f64)> = (1..=10)
                .map(|i| {
                    let x = 2f64.powi(i);
                    (x, 3.0 * x.powf(s))
                })
                .collect();
            let fit = fit_log_slope(&pairs).unwrap();
            assert!((fit.slope - s).abs() < 1e-10, "{s}: {}", fit.slope);
            assert!((fit.intercept.exp() - 3.0).abs() < 1e-9);
            assert!(fit.residual < 1e-10);
        }
    }

    #[test]
    fn floors_zero_values() {
        let pairs = vec![(2.0, 0.5), (4.0, 0.25), (8.0, 0.0), (16.0, 1e-14)];
        let fit = fit_log_slope(&pairs).unwrap();
        assert_eq!(fit.used, 2);
        assert!((fit.slope + 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_log_slope(&[(2.0, 0.0)]).is_none());
        assert!(fit_log_slope(&[(2.0, 1.0), (2.0, 2.0)]).is_none());
    }
}
