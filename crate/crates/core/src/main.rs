//! `japprox`: weighted best approximation, generalized translations and
//! moduli, Jackson smoothing, and the empirical theorem-verification
//! experiments.
//!
//! Exit codes: 0 pass, 1 fail, 2 inconclusive, 64 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jacobi_approx::approx::{
    best_approx, jackson_operator_asym, jackson_operator_sym, JacksonKernelSpec,
};
use jacobi_approx::harness::config::{parse_delta_spec, ExperimentConfig};
use jacobi_approx::harness::report::fmt_float;
use jacobi_approx::harness::verify::{
    overall_verdict, verify_bernstein_markov, verify_derivative_theorems, verify_direct_theorem,
    verify_equivalence, verify_inverse_theorem, NamedReport,
};
use jacobi_approx::harness::{corpus_function, CORPUS_LABELS};
use jacobi_approx::ortho::JacobiParams;
use jacobi_approx::smoothness::modulus;
use jacobi_approx::spaces::{PExponent, SpaceParams};
use jacobi_approx::translation::{translate, TranslationConfig};
use jacobi_approx::{Error, Result};

#[derive(Parser)]
#[command(name = "japprox", about = "Weighted polynomial approximation toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpaceArgs {
    /// Lebesgue exponent (a number or `inf`)
    #[arg(long, default_value = "2")]
    p: String,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
}

impl SpaceArgs {
    fn space(&self) -> Result<SpaceParams> {
        SpaceParams::new(PExponent::parse(&self.p)?, self.alpha, self.beta)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Best weighted approximation by polynomials of degree <= n-1
    Bestapprox {
        /// Corpus label of the target function
        #[arg(long)]
        f: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        space: SpaceArgs,
        /// Write the coefficient list here (stdout summary either way)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generalized modulus of smoothness over a delta list
    Modulus {
        #[arg(long)]
        f: String,
        #[command(flatten)]
        space: SpaceArgs,
        /// `start:stop:halve` or comma-separated values
        #[arg(long)]
        deltas: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a generalized translation at one point
    Translate {
        #[arg(long)]
        f: String,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        x: f64,
        /// Jacobi nu (with --mu selects the symmetric operator)
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Jackson-kernel smoothing operator
    Jackson {
        #[arg(long)]
        f: String,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        space: SpaceArgs,
        /// Use the symmetric construction with this nu (needs --mu)
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Run a verification experiment from a config file
    Verify {
        #[command(subcommand)]
        which: VerifyKind,
    },
    /// Corpus inspection
    Corpus {
        #[command(subcommand)]
        which: CorpusCmd,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Flat key-value configuration file
    #[arg(long)]
    config: PathBuf,
    /// Report file; companion `<out>.<label>.curve` files hold the raw
    /// curves. Without it the report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyKind {
    Bernstein(VerifyArgs),
    Direct(VerifyArgs),
    Inverse(VerifyArgs),
    Equivalence(VerifyArgs),
    Derivative(VerifyArgs),
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// List the known corpus labels
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config(_) | Error::ParamDomain(_) => 64,
                _ => 1,
            };
            ExitCode::from(code as u8)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Bestapprox { f, n, space, out } => {
            let func = corpus_function(&f)?;
            let sp = space.space()?;
            let res = best_approx(&func, n, &sp)?;
            println!("f = {f}");
            println!("degree_bound = {}", res.degree_bound);
            println!("method = {:?}", res.method);
            println!("error = {}", fmt_float(res.error));
            if let Some(path) = out {
                let mut body = String::from("k,coefficient\n");
                for (k, c) in res.poly.coeffs.iter().enumerate() {
                    body.push_str(&format!("{k},{}\n", fmt_float(*c)));
                }
                std::fs::write(path, body)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Modulus { f, space, deltas, out } => {
            let func = corpus_function(&f)?;
            let sp = space.space()?;
            let deltas = parse_delta_spec(&deltas)?;
            let mut body = String::from("delta,omega\n");
            for &d in &deltas {
                let w = modulus(&func, d, &sp, 8)?;
                body.push_str(&format!("{},{}\n", fmt_float(d), fmt_float(w)));
            }
            match out {
                Some(path) => std::fs::write(path, body)?,
                None => print!("{body}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Translate { f, t, x, nu, mu } => {
            let func = corpus_function(&f)?;
            let jp = match (nu, mu) {
                (Some(nu), Some(mu)) => Some(JacobiParams::new(nu, mu)?),
                (None, None) => None,
                _ => {
                    return Err(Error::Config(
                        "--nu and --mu must be given together".into(),
                    ))
                }
            };
            let v = translate(&func, t, x, jp.as_ref(), &TranslationConfig::default())?;
            println!("{}", fmt_float(v));
            Ok(ExitCode::SUCCESS)
        }
        Command::Jackson { f, q, m, space, nu, mu } => {
            let func = corpus_function(&f)?;
            let sp = space.space()?;
            let spec = JacksonKernelSpec::new(q, m)?;
            let cfg = TranslationConfig::default();
            let res = match (nu, mu) {
                (Some(nu), Some(mu)) => {
                    let jp = JacobiParams::new(nu, mu)?;
                    jackson_operator_sym(&func, &spec, &jp, &sp, &cfg)?
                }
                (None, None) => jackson_operator_asym(&func, &spec, &sp, &cfg)?,
                _ => {
                    return Err(Error::Config(
                        "--nu and --mu must be given together".into(),
                    ))
                }
            };
            println!("degree_bound = {}", res.degree_bound);
            println!("method = {:?}", res.method);
            println!("error = {}", fmt_float(res.error));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { which } => {
            let (args, reports) = match &which {
                VerifyKind::Bernstein(a) => {
                    let cfg = ExperimentConfig::load(&a.config)?;
                    let report = verify_bernstein_markov(&cfg, 8, 0.5, 0.5)?;
                    (
                        a,
                        vec![NamedReport {
                            label: "bernstein".into(),
                            report,
                        }],
                    )
                }
                VerifyKind::Direct(a) => {
                    let cfg = ExperimentConfig::load(&a.config)?;
                    (a, verify_direct_theorem(&cfg)?)
                }
                VerifyKind::Inverse(a) => {
                    let cfg = ExperimentConfig::load(&a.config)?;
                    (a, verify_inverse_theorem(&cfg)?)
                }
                VerifyKind::Equivalence(a) => {
                    let cfg = ExperimentConfig::load(&a.config)?;
                    (a, verify_equivalence(&cfg)?)
                }
                VerifyKind::Derivative(a) => {
                    let cfg = ExperimentConfig::load(&a.config)?;
                    let r = cfg.r;
                    (a, verify_derivative_theorems(&cfg, r)?)
                }
            };
            let mut body = String::new();
            for nr in &reports {
                body.push_str(&nr.report.render());
                body.push('\n');
            }
            match &args.out {
                Some(path) => {
                    std::fs::write(path, &body)?;
                    for nr in &reports {
                        let curve_path = path.with_extension(format!("{}.curve", nr.label));
                        std::fs::write(curve_path, nr.report.render_curve())?;
                    }
                }
                None => print!("{body}"),
            }
            let verdict = overall_verdict(&reports);
            eprintln!("verdict: {}", verdict.as_str());
            Ok(ExitCode::from(verdict.exit_code() as u8))
        }
        Command::Corpus { which } => match which {
            CorpusCmd::List => {
                for (label, desc) in CORPUS_LABELS {
                    println!("{label:12} {desc}");
                }
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}
