//! Continuous cohomology of profinite groups with trivial coefficients,
//! E₂ pages of homotopy fixed point spectral sequences, and sufficient
//! criteria for the comparison map `X^{hG} ← colim_N X^{hG/N}` to be a
//! weak equivalence.

pub mod abelian;
pub mod checker;
pub mod cohomology;
pub mod config;
pub mod error;
pub mod exec;
pub mod hfpss;
pub mod primes;
pub mod profinite;
pub mod scenario;
pub mod spectra;

pub use config::{Budgets, Config, Execution};
pub use error::{Error, Result};
