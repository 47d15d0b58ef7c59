//! Estimators of a finite population mean under simple random sampling
//! without replacement, using two auxiliary variables directly or through
//! their first principal component.
//!
//! - [`population`]: populations, summaries and SRSWOR sampling
//! - [`pca`]: two-variable principal components
//! - [`estimators`]: point estimates, first-order bias and MSE, PRE
//! - [`diagnostics`]: VIF, eigenvalues and condition index
//! - [`simulation`]: Monte Carlo comparison on tri-variate normal populations
//! - [`presets`]: summary-statistics input

pub mod diagnostics;
pub mod error;
pub mod estimators;
pub mod moments;
pub mod pca;
pub mod population;
pub mod presets;
pub mod simulation;

pub use error::{Error, Category, Result};
pub use estimators::{EstimatorKind, Psi, PsiChoice, PsiConfig};
pub use population::{theta, FinitePopulation, PopulationSummary};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/estimators.md")]
    mod estimators {}
    #[doc = include_str!("../../../book/src/pca.md")]
    mod pca {}
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    mod diagnostics {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
