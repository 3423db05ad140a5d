//! Gaussian-restricted unique information.
//!
//! With every variable whitened, the optimal extractor for `T - M - (X, Y)`
//! with `T` independent of `Y` has cross-covariance `Sigma_MT = V`, an
//! orthonormal basis of `Ker(Sigma_YM)`, and
//! `UI = -1/2 log det(I - V^T Sigma_MX Sigma_XM V)`. The `MYXT` variant
//! exchanges the roles of `M` and `X`.
//!
//! All values here are optima over jointly Gaussian extractors only.

mod closed_form;
mod counterexample;
mod extractor;
mod kernel;
mod numeric;
mod pid;

pub use closed_form::{ui_gaussian, GaussianDiagnostics, GaussianUiResult, GAUSSIAN_RESTRICTION};
pub use counterexample::{counterexample_family, DEFAULT_COUNTEREXAMPLE_PARAMS};
pub use extractor::{optimal_extractor, GaussianExtractor};
pub use kernel::{kernel_basis, KernelBasis};
pub use numeric::{numeric_ui_verify, AscentConfig, NumericCheck};
pub use pid::{pid_terms_gaussian, GaussianPid};
