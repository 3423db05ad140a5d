//! Unique information through Markov relations.
//!
//! Two measures of the information about a message `M` that a source `X`
//! carries and a second source `Y` does not, each realized by an explicit
//! extractor `T` independent of `Y`:
//!
//! * [`Definition::Tmxy`]: `T` is a stochastic function of `M`, maximizing `I(T; X)`.
//! * [`Definition::Myxt`]: `T` is a stochastic function of `X`, maximizing `I(T; M)`.
//!
//! [`gaussian_ui`] evaluates the Gaussian-restricted measures in closed form
//! from kernels of whitened cross-covariances. [`discrete_ui`] solves the
//! finite-alphabet problems exactly by enumerating vertices of the channel
//! polytope. [`verify`] holds randomized suites that check the bounds,
//! counterexamples and proof steps numerically.

pub mod definition;
pub mod discrete_ui;
pub mod error;
pub mod gaussian_ui;
pub mod linalg;
pub mod pid;
pub mod prob;
pub mod units;
pub mod verify;

pub use definition::Definition;
pub use error::{Error, Result};
pub use pid::PidTerms;
pub use units::InfoUnit;
