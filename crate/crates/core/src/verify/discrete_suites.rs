use std::time::Instant;

use rand::RngExt;

use super::gaussian_suites::{check_pid_bounds, record_error};
use super::generators::{binary_chain, random_discrete, random_sizes, random_sparse_discrete, rng};
use super::{fingerprint_hash, require_trials, trial_seed, Deviation, SuiteReport, TrialContext};
use crate::definition::Definition;
use crate::discrete_ui::{
    canonical_example, lemma_b1_verify, pid_terms_discrete, ui_discrete, CanonicalExample, DiscreteUiResult,
    SolverConfig,
};
use crate::error::{Error, Result};
use crate::prob::{DiscreteJoint, Role};
use crate::units::InfoUnit;

/// Extractor alphabet size used by the randomized bound checks.
pub const SUITE_T_CARD: usize = 4;

/// The instance of discrete trial `seed`: alphabets up to `max_size`, half
/// of them with zeroed atoms.
pub fn discrete_trial_instance(seed: u64, max_size: usize) -> (DiscreteJoint, bool) {
    let mut r = rng(seed);
    let sizes = random_sizes(&mut r, max_size);
    let sparse = r.random::<bool>();
    let j = if sparse { random_sparse_discrete(&mut r, sizes) } else { random_discrete(&mut r, sizes) };
    (j, sparse)
}

fn discrete_context(trial: usize, seed: u64, j: &DiscreteJoint, sparse: bool) -> TrialContext {
    TrialContext {
        trial,
        seed,
        fingerprint: format!(
            "discrete shape={:?} sparse={sparse} p_hash={:016x}",
            j.shape(),
            fingerprint_hash(j.probs())
        ),
    }
}

pub(crate) fn discrete_nonnegativity(trials: usize, seed: u64) -> Result<SuiteReport> {
    require_trials(trials)?;
    let started = Instant::now();
    let mut report = SuiteReport::new("nonneg_discrete", trials, seed);
    let cfg = SolverConfig::default().with_t_card(SUITE_T_CARD).with_unit(InfoUnit::Nats);
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let (j, sparse) = discrete_trial_instance(ts, 3);
        let ctx = discrete_context(i, ts, &j, sparse);
        for def in Definition::ALL {
            match pid_terms_discrete(&j, def, &cfg) {
                Ok(pid) => {
                    check_pid_bounds(&mut report, &ctx, def, &pid.terms);
                    report.check(pid.ui_x.certified && pid.ui_y.certified, &ctx, &format!("{def}: certified"), 0.0, 0.0);
                }
                Err(e) => record_error(&mut report, &ctx, def.name(), &e),
            }
        }
    }
    Ok(report.finish(started))
}

/// Attempts per trial before giving up on finding an instance that meets
/// the hypothesis.
const LEMMA_ATTEMPTS: usize = 100_000;

/// Binary chains with `X ⟂ Z` (to 1e-9 bits) and `Y` dependent on `Z`:
/// `I(X; Y)` must stay below 1e-6 bits.
pub fn lemma_b1_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    require_trials(trials)?;
    let started = Instant::now();
    let mut report = SuiteReport::new("lemmab1", trials, seed);
    let mut attempts = 0usize;
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let mut r = rng(ts);
        let mut found = None;
        for k in 0..LEMMA_ATTEMPTS {
            let j = binary_chain(&mut r);
            let rep = lemma_b1_verify(&j, 1e-9)?;
            if rep.hypothesis {
                found = Some((j, rep, k + 1));
                break;
            }
        }
        let Some((j, rep, used)) = found else {
            let ctx = TrialContext { trial: i, seed: ts, fingerprint: "no instance accepted".into() };
            report.check(false, &ctx, "rejection sampling found an instance", LEMMA_ATTEMPTS as f64, 0.0);
            continue;
        };
        attempts += used;
        let ctx = TrialContext {
            trial: i,
            seed: ts,
            fingerprint: format!("chain attempt={used} shape={:?} p_hash={:016x}", j.shape(), fingerprint_hash(j.probs())),
        };
        report.check(rep.mi_xy <= 1e-6, &ctx, "I(X;Y) <= 1e-6 bits", rep.mi_xy, 1e-6);
        report.metric_max("max_mi_xy_bits", rep.mi_xy);
        report.metric_max("max_mi_xz_bits", rep.mi_xz);
    }
    report.metric("mean_attempts", attempts as f64 / trials as f64);
    Ok(report.finish(started))
}

/// MYXT on a joint equals TMXY on the joint with `M` and `X` exchanged.
pub fn discrete_duality_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    require_trials(trials)?;
    let started = Instant::now();
    let mut report = SuiteReport::new("duality_discrete", trials, seed);
    let cfg = SolverConfig::default().with_unit(InfoUnit::Nats);
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let (j, sparse) = discrete_trial_instance(ts, 3);
        let ctx = discrete_context(i, ts, &j, sparse);
        let pair = ui_discrete(&j, Definition::Myxt, &cfg)
            .and_then(|a| Ok((a.value, ui_discrete(&j.swap_roles(Role::M, Role::X), Definition::Tmxy, &cfg)?.value)));
        match pair {
            Ok((a, b)) => {
                report.check((a - b).abs() <= 1e-9, &ctx, "MYXT(p) = TMXY(swap M, X)", a, b);
                report.metric_max("max_abs_difference", (a - b).abs());
            }
            Err(e) => record_error(&mut report, &ctx, "duality", &e),
        }
    }
    Ok(report.finish(started))
}

/// Exact when the polytope is small enough, sampled otherwise.
fn solve_adaptive(j: &DiscreteJoint, def: Definition, cfg: &SolverConfig) -> Result<DiscreteUiResult> {
    match ui_discrete(j, def, cfg) {
        Err(Error::EnumerationCap { .. }) => ui_discrete(j, def, &cfg.sampled(cfg.samples, cfg.seed)),
        other => other,
    }
}

fn push_product(
    report: &mut SuiteReport,
    label: &str,
    trial_seed: Option<u64>,
    parts: [&DiscreteJoint; 2],
    cfg: &SolverConfig,
    whole_t_card: Option<usize>,
) -> Result<()> {
    let whole = parts[0].product(parts[1]);
    for def in Definition::ALL {
        let w = solve_adaptive(&whole, def, &SolverConfig { t_card: whole_t_card, ..*cfg })?;
        let a = solve_adaptive(parts[0], def, cfg)?;
        let b = solve_adaptive(parts[1], def, cfg)?;
        report.deviations.push(Deviation {
            label: label.into(),
            trial_seed,
            definition: def,
            t_card: Some(w.t_card),
            whole: w.value,
            parts: [a.value, b.value],
            deviation: w.value - a.value - b.value,
            certified: w.certified && a.certified && b.certified,
        });
    }
    Ok(())
}

pub(crate) fn discrete_sums_probe(trials: usize, seed: u64, unit: InfoUnit) -> Result<SuiteReport> {
    require_trials(trials)?;
    let started = Instant::now();
    let mut report = SuiteReport::new("sums_discrete", trials, seed);
    report.report_only = true;
    let cfg = SolverConfig { unit, seed, ..SolverConfig::default() };
    let rdn = canonical_example(CanonicalExample::Rdn);
    let unq = canonical_example(CanonicalExample::Unq);
    for t in 2..=5 {
        push_product(&mut report, &format!("RDN x UNQ t_card={t}"), None, [&rdn, &unq], &cfg, Some(t))?;
    }
    let constant = DiscreteJoint::from_fn([1, 1, 1], |_, _, _| 1.0)?;
    push_product(&mut report, "UNQ x constant", None, [&unq, &constant], &cfg, None)?;
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let mut r = rng(ts);
        let sizes = random_sizes(&mut r, 2);
        let a = random_discrete(&mut r, sizes);
        let sizes = random_sizes(&mut r, 2);
        let b = random_discrete(&mut r, sizes);
        push_product(&mut report, &format!("random pair {i}"), Some(ts), [&a, &b], &cfg, None)?;
    }
    let worst = report.deviations.iter().map(|d| d.deviation.abs()).fold(0.0, f64::max);
    report.metric("max_abs_deviation", worst);
    Ok(report.finish(started))
}
