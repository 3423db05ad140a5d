use super::discrete_suites::{discrete_duality_suite, discrete_nonnegativity, discrete_sums_probe};
use super::gaussian_suites::{gaussian_duality_suite, gaussian_nonnegativity, gaussian_sums_probe};
use super::{Domain, SuiteReport};
use crate::error::Result;
use crate::units::InfoUnit;

/// Upper bounds `UI <= I(M;source)`, `UI <= I(M;source|other)` and
/// non-negativity of every decomposition term, under both definitions.
pub fn nonnegativity_suite(domain: Domain, trials: usize, seed: u64) -> Result<SuiteReport> {
    match domain {
        Domain::Gaussian => gaussian_nonnegativity(trials, seed),
        Domain::Discrete => discrete_nonnegativity(trials, seed),
    }
}

/// Agreement of MYXT with TMXY after exchanging `M` and `X`.
pub fn duality_suite(domain: Domain, trials: usize, seed: u64) -> Result<SuiteReport> {
    match domain {
        Domain::Gaussian => gaussian_duality_suite(trials, seed),
        Domain::Discrete => discrete_duality_suite(trials, seed),
    }
}

/// `UI(whole) - UI(part 1) - UI(part 2)` on independent products. Reports
/// deviations only; additivity is conjectural.
pub fn independent_sums_probe(domain: Domain, trials: usize, seed: u64, unit: InfoUnit) -> Result<SuiteReport> {
    match domain {
        Domain::Gaussian => gaussian_sums_probe(trials, seed, unit),
        Domain::Discrete => discrete_sums_probe(trials, seed, unit),
    }
}
