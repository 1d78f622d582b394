//! Approximate weighted model counting for DNF formulas.

pub mod baselines;
pub mod cli;
pub mod engine;
pub mod error;
pub mod estimate;
pub mod formula;
pub mod numeric;
pub mod sampling;
pub mod stats;

pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use estimate::{estimate, Algorithm, Estimate, RunParams};
pub use formula::{Clause, Formula, Literal, Weights};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/estimator.md")]
    mod estimator {}
    #[doc = include_str!("../../../book/src/threshold.md")]
    mod threshold {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/randomness.md")]
    mod randomness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
