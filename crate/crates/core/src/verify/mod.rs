//! Randomized and targeted checks of the bounds, counterexamples, proof
//! steps and the conjectured additivity.
//!
//! Every suite is a pure function of its seed. Trial `i` draws from its own
//! generator seeded with [`trial_seed`]`(seed, i)`, and failure records carry
//! that seed plus a fingerprint of the instance, so any failure can be
//! rebuilt in isolation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};

pub mod generators;
mod discrete_suites;
mod gaussian_suites;

pub use discrete_suites::{discrete_duality_suite, discrete_trial_instance, lemma_b1_suite, SUITE_T_CARD};
pub use gaussian_suites::{
    determinant_step_suite, extractor_suite, extractor_trial_instance, gaussian_closed_form_vs_numeric_suite,
    gaussian_duality_suite, gaussian_trial_instance,
    symmetry_counterexample_suite,
};

mod shared;
pub use shared::{duality_suite, independent_sums_probe, nonnegativity_suite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Gaussian,
    Discrete,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Gaussian => "gaussian",
            Domain::Discrete => "discrete",
        })
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(Domain::Gaussian),
            "discrete" => Ok(Domain::Discrete),
            other => Err(Error::Usage(format!("unknown domain {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub trial_seed: u64,
    pub fingerprint: String,
    pub check: String,
    pub observed: f64,
    pub bound: f64,
}

/// One row of the additivity probe: `whole - sum(parts)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deviation {
    pub label: String,
    pub trial_seed: Option<u64>,
    pub definition: crate::Definition,
    pub t_card: Option<usize>,
    pub whole: f64,
    pub parts: [f64; 2],
    pub deviation: f64,
    /// Every value in the row came from exhaustive enumeration (always true
    /// for closed forms).
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite_name: String,
    pub trials: usize,
    pub rng_seed: u64,
    pub passed: bool,
    /// Report-only suites never record failures.
    pub report_only: bool,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub deviations: Vec<Deviation>,
    pub metrics: BTreeMap<String, f64>,
    /// Wall time; left out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub(crate) fn new(name: impl Into<String>, trials: usize, seed: u64) -> Self {
        Self {
            suite_name: name.into(),
            trials,
            rng_seed: seed,
            passed: true,
            report_only: false,
            failures: Vec::new(),
            deviations: Vec::new(),
            metrics: BTreeMap::new(),
            elapsed: Duration::ZERO,
        }
    }

    /// Record a failure unless `ok`.
    pub(crate) fn check(&mut self, ok: bool, ctx: &TrialContext, check: &str, observed: f64, bound: f64) {
        if !ok {
            self.failures.push(Failure {
                trial: ctx.trial,
                trial_seed: ctx.seed,
                fingerprint: ctx.fingerprint.clone(),
                check: check.into(),
                observed,
                bound,
            });
            self.passed = false;
        }
    }

    pub(crate) fn metric_max(&mut self, name: &str, v: f64) {
        let e = self.metrics.entry(name.into()).or_insert(f64::NEG_INFINITY);
        if v > *e || v.is_nan() {
            *e = v;
        }
    }

    pub(crate) fn metric(&mut self, name: &str, v: f64) {
        self.metrics.insert(name.into(), v);
    }

    pub(crate) fn finish(mut self, started: std::time::Instant) -> Self {
        self.passed = self.failures.is_empty();
        self.elapsed = started.elapsed();
        self
    }

    /// One line for terminals and logs.
    pub fn summary_line(&self) -> String {
        let status = if self.report_only {
            "REPORT"
        } else if self.passed {
            "PASS"
        } else {
            "FAIL"
        };
        let mut line = format!(
            "{status} {} trials={} failures={} seed={}",
            self.suite_name,
            self.trials,
            self.failures.len(),
            self.rng_seed
        );
        if !self.deviations.is_empty() {
            let worst = self.deviations.iter().map(|d| d.deviation.abs()).fold(0.0, f64::max);
            line.push_str(&format!(" max|deviation|={worst:.3e}"));
        }
        line
    }
}

/// Identity of one trial, copied into any failure it produces.
#[derive(Debug, Clone)]
pub(crate) struct TrialContext {
    pub trial: usize,
    pub seed: u64,
    pub fingerprint: String,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` in a suite run with `seed`.
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    splitmix64(splitmix64(seed) ^ index as u64)
}

/// FNV-1a over the bit patterns of `values`.
pub fn fingerprint_hash(values: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for b in v.to_bits().to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

pub(crate) fn require_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::Usage("trials must be at least 1".into()));
    }
    Ok(())
}
