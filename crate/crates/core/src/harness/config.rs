//! Flat key-value experiment configuration.
//!
//! Format: one `key = value` per line; `#` starts a comment; unknown keys
//! are errors. Recognized keys: `p`, `alpha`, `beta`, `nu`, `mu`, `r`, `q`,
//! `n_list`, `delta_list`, `phi`, `corpus`, `seed`, `tolerances`.

use crate::error::{Error, Result};
use crate::ortho::JacobiParams;
use crate::smoothness::PhiFunction;
use crate::spaces::{PExponent, SpaceParams};

/// Pass/fail thresholds, overridable via the `tolerances` key
/// (`slope=0.15,residual=0.1,stability=10`).
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Max |slope_E - slope_omega| for equivalence verdicts.
    pub slope: f64,
    /// Max RMS log-residual of a rate fit.
    pub residual: f64,
    /// Max ratio between the largest and smallest measured constant.
    pub stability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            slope: 0.15,
            residual: 0.1,
            stability: 10.0,
        }
    }
}

/// A parsed experiment configuration with defaults filled in.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub sp: SpaceParams,
    pub jp: JacobiParams,
    pub r: usize,
    pub q: usize,
    pub n_list: Vec<usize>,
    pub delta_list: Vec<f64>,
    pub phi: PhiFunction,
    pub corpus: Vec<String>,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            sp: SpaceParams::finite(2.0, 1.5, 1.5).expect("default space"),
            jp: JacobiParams::new(2.0, 2.0).expect("default basis"),
            r: 1,
            q: 2,
            n_list: vec![4, 8, 16, 32, 64],
            delta_list: parse_delta_spec("0.4:0.0125:halve").expect("default deltas"),
            phi: PhiFunction::power(1.0),
            corpus: vec!["abs_x".into()],
            seed: 1,
            tolerances: Tolerances::default(),
        }
    }
}

/// `start:stop:halve` generates the halving sequence from start down to
/// stop; otherwise a comma-separated list of reals.
pub fn parse_delta_spec(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 && parts[2].trim() == "halve" {
        let start: f64 = parse_num(parts[0], "delta start")?;
        let stop: f64 = parse_num(parts[1], "delta stop")?;
        if !(start > stop && stop > 0.0) {
            return Err(Error::Config(format!(
                "delta spec needs start > stop > 0, got {spec:?}"
            )));
        }
        let mut out = Vec::new();
        let mut d = start;
        while d >= stop * (1.0 - 1e-12) {
            out.push(d);
            d /= 2.0;
        }
        return Ok(out);
    }
    let out: Vec<f64> = spec
        .split(',')
        .map(|s| parse_num(s, "delta"))
        .collect::<Result<_>>()?;
    for w in out.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::Config("delta_list must be strictly decreasing".into()));
        }
    }
    if out.is_empty() || out.last().copied().unwrap_or(0.0) <= 0.0 {
        return Err(Error::Config("delta_list must be positive".into()));
    }
    Ok(out)
}

fn parse_num(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {what} from {:?}", s.trim())))
}

fn parse_int(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {what} from {:?}", s.trim())))
}

impl ExperimentConfig {
    /// Parses the flat key-value text, rejecting unknown keys.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut p: Option<PExponent> = None;
        let mut alpha: Option<f64> = None;
        let mut beta: Option<f64> = None;
        let mut nu: Option<f64> = None;
        let mut mu: Option<f64> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`, got {raw:?}", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "p" => p = Some(PExponent::parse(value)?),
                "alpha" => alpha = Some(parse_num(value, "alpha")?),
                "beta" => beta = Some(parse_num(value, "beta")?),
                "nu" => nu = Some(parse_num(value, "nu")?),
                "mu" => mu = Some(parse_num(value, "mu")?),
                "r" => cfg.r = parse_int(value, "r")?,
                "q" => cfg.q = parse_int(value, "q")?,
                "n_list" => {
                    cfg.n_list = value
                        .split(',')
                        .map(|s| parse_int(s, "n"))
                        .collect::<Result<_>>()?;
                    if cfg.n_list.is_empty() || cfg.n_list.windows(2).any(|w| w[1] <= w[0]) {
                        return Err(Error::Config(
                            "n_list must be nonempty and strictly increasing".into(),
                        ));
                    }
                }
                "delta_list" => cfg.delta_list = parse_delta_spec(value)?,
                "phi" => cfg.phi = PhiFunction::parse(value)?,
                "corpus" => {
                    cfg.corpus = value.split(',').map(|s| s.trim().to_string()).collect()
                }
                "seed" => {
                    cfg.seed = value.trim().parse().map_err(|_| {
                        Error::Config(format!("cannot parse seed from {value:?}"))
                    })?
                }
                "tolerances" => {
                    for item in value.split(',') {
                        let (k, v) = item.split_once('=').ok_or_else(|| {
                            Error::Config(format!("tolerances items look like name=value, got {item:?}"))
                        })?;
                        let v = parse_num(v, "tolerance")?;
                        match k.trim() {
                            "slope" => cfg.tolerances.slope = v,
                            "residual" => cfg.tolerances.residual = v,
                            "stability" => cfg.tolerances.stability = v,
                            other => {
                                return Err(Error::Config(format!(
                                    "unknown tolerance {other:?}"
                                )))
                            }
                        }
                    }
                }
                other => return Err(Error::Config(format!("unknown config key {other:?}"))),
            }
        }
        let d = Self::default();
        cfg.sp = SpaceParams::new(
            p.unwrap_or(d.sp.p),
            alpha.unwrap_or(d.sp.alpha),
            beta.unwrap_or(d.sp.beta),
        )?;
        cfg.jp = JacobiParams::new(nu.unwrap_or(d.jp.nu), mu.unwrap_or(d.jp.mu))?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The resolved configuration, one `key = value` per line, embedded in
    /// every report so a run can be reproduced.
    pub fn resolved(&self) -> String {
        let p = match self.sp.p {
            PExponent::Finite(p) => format!("{p}"),
            PExponent::Infinity => "inf".into(),
        };
        let deltas: Vec<String> = self.delta_list.iter().map(|d| format!("{d}")).collect();
        let ns: Vec<String> = self.n_list.iter().map(|n| format!("{n}")).collect();
        format!(
            "p = {p}\nalpha = {}\nbeta = {}\nnu = {}\nmu = {}\nr = {}\nq = {}\nn_list = {}\ndelta_list = {}\nphi = {}\ncorpus = {}\nseed = {}\ntolerances = slope={},residual={},stability={}",
            self.sp.alpha,
            self.sp.beta,
            self.jp.nu,
            self.jp.mu,
            self.r,
            self.q,
            ns.join(","),
            deltas.join(","),
            self.phi.label,
            self.corpus.join(","),
            self.seed,
            self.tolerances.slope,
            self.tolerances.residual,
            self.tolerances.stability,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_roundtrips() {
        let text = "p = 2\nalpha = 1.5\nbeta = 1.5\nnu = 2\nmu = 2\nn_list = 4,8,16\ndelta_list = 0.4:0.1:halve\nphi = t^1\ncorpus = abs_x, x2\nseed = 7\ntolerances = slope=0.2,residual=0.05,stability=8\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.n_list, vec![4, 8, 16]);
        assert_eq!(cfg.delta_list, vec![0.4, 0.2, 0.1]);
        assert_eq!(cfg.corpus, vec!["abs_x", "x2"]);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.tolerances.slope, 0.2);
        assert_eq!(cfg.tolerances.stability, 8.0);
        // the resolved form re-parses to the same thing
        let again = ExperimentConfig::parse(&cfg.resolved()).unwrap();
        assert_eq!(again.n_list, cfg.n_list);
        assert_eq!(again.delta_list, cfg.delta_list);
        assert_eq!(again.corpus, cfg.corpus);
    }

    #[test]
    fn unknown_key_is_an_error() {
        assert!(matches!(
            ExperimentConfig::parse("banana = 3\n"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ExperimentConfig::parse("tolerances = wiggle=3\n"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn delta_specs() {
        assert_eq!(parse_delta_spec("0.4:0.1:halve").unwrap(), vec![0.4, 0.2, 0.1]);
        assert_eq!(parse_delta_spec("0.5,0.25").unwrap(), vec![0.5, 0.25]);
        assert!(parse_delta_spec("0.1:0.4:halve").is_err());
        assert!(parse_delta_spec("0.25,0.5").is_err());
        assert!(parse_delta_spec("").is_err());
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let cfg = ExperimentConfig::parse("# a comment\n\nseed = 3 # trailing\n").unwrap();
        assert_eq!(cfg.seed, 3);
    }

    #[test]
    fn bad_space_rejected() {
        assert!(ExperimentConfig::parse("p = 2\nalpha = -4\n").is_err());
    }
}
