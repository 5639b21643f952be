//! Experiment harness: corpus, configuration, rate fitting, reports, and
//! the verification experiments themselves.

pub mod config;
pub mod corpus;
pub mod fit;
pub mod report;
pub mod verify;

pub use config::{ExperimentConfig, Tolerances};
pub use corpus::{corpus_function, jacobi_mode, DesignedTail, CORPUS_LABELS};
pub use fit::{fit_log_slope, RateFit};
pub use report::{RateReport, RateRow, Verdict};
pub use verify::{
    overall_verdict, verify_bernstein_markov, verify_derivative_theorems, verify_direct_theorem,
    verify_equivalence, verify_inverse_theorem, NamedReport,
};
