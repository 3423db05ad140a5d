use std::time::Instant;

use nalgebra::DMatrix;
use rand::RngExt;

use super::generators::{random_covariance, random_dims, random_low_rank_covariance, random_orthogonal, rng};
use super::{fingerprint_hash, require_trials, trial_seed, Deviation, SuiteReport, TrialContext};
use crate::definition::Definition;
use crate::error::{Error, Result};
use crate::gaussian_ui::{
    counterexample_family, numeric_ui_verify, optimal_extractor, pid_terms_gaussian, ui_gaussian,
    DEFAULT_COUNTEREXAMPLE_PARAMS,
};
use crate::pid::PidTerms;
use crate::prob::{GaussianJoint, Role};
use crate::units::InfoUnit;

/// Bound slack for the information inequalities, in nats.
pub(crate) const BOUND_TOL: f64 = 1e-9;

/// The instance of Gaussian trial `seed`: dims up to `max_dims`, and one
/// trial in four drawn from the singular-block generator.
pub fn gaussian_trial_instance(seed: u64, max_dims: [usize; 3]) -> (GaussianJoint, bool) {
    let mut r = rng(seed);
    let dims = random_dims(&mut r, max_dims);
    let low_rank = r.random_range(0..4u8) == 0;
    let g = if low_rank { random_low_rank_covariance(&mut r, dims) } else { random_covariance(&mut r, dims) };
    (g, low_rank)
}

pub(crate) fn gaussian_context(trial: usize, seed: u64, g: &GaussianJoint, low_rank: bool) -> TrialContext {
    TrialContext {
        trial,
        seed,
        fingerprint: format!(
            "gaussian dims={:?} low_rank={low_rank} cov_hash={:016x}",
            g.dims(),
            fingerprint_hash(g.cov().as_slice())
        ),
    }
}

/// Upper bounds on both unique terms and non-negativity of every term.
pub(crate) fn check_pid_bounds(report: &mut SuiteReport, ctx: &TrialContext, def: Definition, t: &PidTerms) {
    let tag = def.name();
    let c = |name: &str| format!("{tag}: {name}");
    report.check(t.ui_x <= t.i_mx + BOUND_TOL, ctx, &c("UI_X <= I(M;X)"), t.ui_x, t.i_mx);
    report.check(t.ui_x <= t.i_mx_given_y + BOUND_TOL, ctx, &c("UI_X <= I(M;X|Y)"), t.ui_x, t.i_mx_given_y);
    report.check(t.ui_y <= t.i_my + BOUND_TOL, ctx, &c("UI_Y <= I(M;Y)"), t.ui_y, t.i_my);
    report.check(t.ui_y <= t.i_my_given_x + BOUND_TOL, ctx, &c("UI_Y <= I(M;Y|X)"), t.ui_y, t.i_my_given_x);
    for (name, v) in t.named() {
        report.check(v >= -BOUND_TOL, ctx, &c(&format!("{name} >= 0")), v, -BOUND_TOL);
    }
    report.metric_max("max_ui_excess_nats", t.ui_x - t.i_mx.min(t.i_mx_given_y));
    report.metric_max("max_ui_excess_nats", t.ui_y - t.i_my.min(t.i_my_given_x));
}

pub(crate) fn record_error(report: &mut SuiteReport, ctx: &TrialContext, what: &str, e: &Error) {
    report.check(false, ctx, &format!("{what}: {e}"), f64::NAN, f64::NAN);
}

pub(crate) fn gaussian_nonnegativity(trials: usize, seed: u64) -> Result<SuiteReport> {
    require_trials(trials)?;
    let started = Instant::now();
    let mut report = SuiteReport::new("nonneg_gaussian", trials, seed);
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let (g, low_rank) = gaussian_trial_instance(ts, [3, 3, 3]);
        let ctx = gaussian_context(i, ts, &g, low_rank);
        for def in Definition::ALL {
            match pid_terms_gaussian(&g, def, InfoUnit::Nats) {
                Ok(pid) => check_pid_bounds(&mut report, &ctx, def, &pid.terms),
                Err(e) => record_error(&mut report, &ctx, def.name(), &e),
            }
        }
    }
    Ok(report.finish(started))
}

/// Both asymmetry families at the default parameters: unique terms vanish
/// and the two redundancies differ by more than 0.1 bits.
pub fn symmetry_counterexample_suite(unit: InfoUnit) -> Result<SuiteReport> {
    let started = Instant::now();
    let params = DEFAULT_COUNTEREXAMPLE_PARAMS;
    let mut report = SuiteReport::new("symmetry", Definition::ALL.len(), 0);
    let gap_floor = unit.from_nats(InfoUnit::Bits.to_nats(0.1));
    let zero_tol = 1e-9;
    for (i, def) in Definition::ALL.into_iter().enumerate() {
        let ctx = TrialContext {
            trial: i,
            seed: 0,
            fingerprint: format!("family={} params=({}, {})", def.name(), params.0, params.1),
        };
        let tag = def.name().to_ascii_lowercase();
        let terms = match counterexample_family(def, params).and_then(|g| pid_terms_gaussian(&g, def, unit)) {
            Ok(pid) => pid.terms,
            Err(e) => {
                record_error(&mut report, &ctx, def.name(), &e);
                continue;
            }
        };
        report.check(terms.ui_x.abs() <= zero_tol, &ctx, "UI_X = 0", terms.ui_x, zero_tol);
        report.check(terms.ui_y.abs() <= zero_tol, &ctx, "UI_Y = 0", terms.ui_y, zero_tol);
        let gap = (terms.r_x - terms.r_y).abs();
        report.check(gap > gap_floor, &ctx, "|R_X - R_Y| > 0.1 bits", gap, gap_floor);
        if def == Definition::Tmxy {
            let rx = unit.from_nats(-0.5 * (1.0 - params.0 * params.0).ln());
            let ry = unit.from_nats(-0.5 * (1.0 - params.1 * params.1).ln());
            report.check((terms.r_x - rx).abs() <= 1e-6, &ctx, "R_X = -1/2 log(1 - a^2)", terms.r_x, rx);
            report.check((terms.r_y - ry).abs() <= 1e-6, &ctx, "R_Y = -1/2 log(1 - b^2)", terms.r_y, ry);
        }
        report.metric(&format!("{tag}_r_x"), terms.r_x);
        report.metric(&format!("{tag}_r_y"), terms.r_y);
        report.metric(&format!("{tag}_r_gap"), gap);
        report.metric(&format!("{tag}_ui_x"), terms.ui_x);
        report.metric(&format!("{tag}_ui_y"), terms.ui_y);
        // The origin is symmetric and deliberately left out of the checks.
        let origin = counterexample_family(def, (0.0, 0.0)).and_then(|g| pid_terms_gaussian(&g, def, unit))?;
        report.metric(&format!("{tag}_origin_r_gap"), (origin.terms.r_x - origin.terms.r_y).abs());
    }
    Ok(report.finish(started))
}

fn det_gap(a: &DMatrix<f64>, s: &DMatrix<f64>) -> (f64, f64) {
    let n = a.nrows();
    let k = s.ncols();
    let lhs = (DMatrix::identity(k, k) - s.transpose() * a * s).determinant();
    let rhs = (DMatrix::identity(n, n) - a).determinant();
    (lhs, rhs)
}

/// `det(I - S^T A S) >= det(I - A)` for `0 <= A <= I` and contractions `S`,
/// with equality for orthogonal `S`.
pub fn determinant_step_suite(trials: usize, max_dim: usize, seed: u64) -> Result<SuiteReport> {
    require_trials(trials)?;
    if !(1..=8).contains(&max_dim) {
        return Err(Error::Usage(format!("max_dim must lie in 1..=8, got {max_dim}")));
    }
    let started = Instant::now();
    let mut report = SuiteReport::new("detstep", trials, seed);
    let mut min_slack = f64::INFINITY;
    let mut max_equality_error = 0.0f64;

    let fixed = TrialContext { trial: 0, seed, fingerprint: format!("fixed dim={max_dim}") };
    let mut r = rng(seed);
    let u = random_orthogonal(&mut r, max_dim);
    let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(max_dim, |_, _| r.random_range(0.0..1.0)));
    let a = &u * lambda * u.transpose();
    let (lhs, rhs) = det_gap(&a, &DMatrix::identity(max_dim, max_dim));
    report.check((lhs - rhs).abs() <= 1e-14, &fixed, "S = I: equality", lhs - rhs, 1e-14);
    let (lhs, rhs) = det_gap(&a, &DMatrix::zeros(max_dim, max_dim));
    report.check(lhs == 1.0 && lhs >= rhs, &fixed, "S = 0: 1 >= det(I - A)", lhs, rhs);

    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let mut r = rng(ts);
        let n = r.random_range(1..=max_dim);
        let k = r.random_range(1..=n);
        let u = random_orthogonal(&mut r, n);
        let lambda: Vec<f64> = (0..n).map(|_| r.random_range(0.0..1.0)).collect();
        let a = &u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lambda)) * u.transpose();
        let p = random_orthogonal(&mut r, n).columns(0, k).into_owned();
        let q = random_orthogonal(&mut r, k);
        let sv: Vec<f64> = (0..k).map(|_| r.random_range(0.0..1.0)).collect();
        let s = p * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(sv)) * q.transpose();
        let ctx = TrialContext {
            trial: i,
            seed: ts,
            fingerprint: format!(
                "detstep n={n} k={k} hash={:016x}",
                fingerprint_hash(a.as_slice().iter().chain(s.as_slice()).copied().collect::<Vec<_>>().as_slice())
            ),
        };
        let (lhs, rhs) = det_gap(&a, &s);
        min_slack = min_slack.min(lhs - rhs);
        report.check(lhs >= rhs - 1e-12, &ctx, "det(I - S^T A S) >= det(I - A)", lhs, rhs);

        let o = random_orthogonal(&mut r, n);
        let (lhs, rhs) = det_gap(&a, &o);
        max_equality_error = max_equality_error.max((lhs - rhs).abs());
        report.check((lhs - rhs).abs() <= 1e-12, &ctx, "orthogonal S: equality", lhs, rhs);
    }
    report.metric("min_slack", min_slack);
    report.metric("max_equality_error", max_equality_error);
    Ok(report.finish(started))
}

/// Closed form against projected ascent over the kernel parametrization.
pub fn gaussian_closed_form_vs_numeric_suite(trials: usize, dims: [usize; 3], seed: u64) -> Result<SuiteReport> {
    require_trials(trials)?;
    if dims.iter().any(|&d| !(1..=4).contains(&d)) {
        return Err(Error::Usage(format!("block dims must lie in 1..=4, got {dims:?}")));
    }
    let started = Instant::now();
    let mut report = SuiteReport::new("closedform", trials, seed);
    let mut trivial = 0usize;
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let (g, low_rank) = gaussian_trial_instance(ts, dims);
        let ctx = gaussian_context(i, ts, &g, low_rank);
        for def in Definition::ALL {
            match numeric_ui_verify(&g, def, 32, ts) {
                Ok(check) => {
                    report.check(check.consistent(), &ctx, &format!("{def}: closed form - numeric in [-1e-9, 1e-6]"), check.gap, 1e-6);
                    report.metric_max("max_gap_nats", check.gap);
                    report.metric_max("max_negative_gap_nats", -check.gap);
                    if check.kernel_dim == 0 {
                        trivial += 1;
                    }
                }
                Err(e) => record_error(&mut report, &ctx, def.name(), &e),
            }
        }
    }
    report.metric("trivial_kernel_cases", trivial as f64);
    Ok(report.finish(started))
}

/// Random instances whose protected block is one-dimensional, so both
/// kernels are non-trivial.
pub fn extractor_trial_instance(seed: u64) -> GaussianJoint {
    let mut r = rng(seed);
    let dims = [r.random_range(2..=3), r.random_range(2..=3), 1];
    random_covariance(&mut r, dims)
}

/// The optimal extractor is a valid Markov extractor, independent of `Y`,
/// and attains the closed form.
pub fn extractor_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    require_trials(trials)?;
    let started = Instant::now();
    let mut report = SuiteReport::new("extractor", trials, seed);
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let g = extractor_trial_instance(ts);
        let ctx = gaussian_context(i, ts, &g, false);
        for def in Definition::ALL {
            let ext = match optimal_extractor(&g, def, InfoUnit::Nats) {
                Ok(e) => e,
                Err(e) => {
                    record_error(&mut report, &ctx, def.name(), &e);
                    continue;
                }
            };
            report.check(!ext.degenerate, &ctx, &format!("{def}: non-trivial kernel"), ext.dims[0] as f64, 1.0);
            let markov = ext.markov_check(1e-9);
            report.check(markov.holds, &ctx, &format!("{def}: Markov chain through the source"), markov.residual, 1e-9);
            let leak = ext.protected_cross_norm();
            report.check(leak <= 1e-9, &ctx, &format!("{def}: |Sigma_TY| <= 1e-9"), leak, 1e-9);
            match ext.extracted_information() {
                Ok(v) => {
                    let err = (v - ext.value).abs();
                    report.check(err <= 1e-9, &ctx, &format!("{def}: I(T; target) = closed form"), v, ext.value);
                    report.metric_max("max_value_error_nats", err);
                }
                Err(e) => record_error(&mut report, &ctx, def.name(), &e),
            }
            let psd = ext.min_relative_eigenvalue();
            report.check(psd >= -1e-9, &ctx, &format!("{def}: extractor covariance PSD"), psd, -1e-9);
            report.metric_max("max_markov_residual", markov.residual);
            report.metric_max("max_protected_cross_norm", leak);
        }
    }
    Ok(report.finish(started))
}

/// MYXT on a joint equals TMXY on the joint with `M` and `X` exchanged,
/// bit for bit.
pub fn gaussian_duality_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    require_trials(trials)?;
    let started = Instant::now();
    let mut report = SuiteReport::new("duality_gaussian", trials, seed);
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let (g, low_rank) = gaussian_trial_instance(ts, [3, 3, 3]);
        let ctx = gaussian_context(i, ts, &g, low_rank);
        let pair = ui_gaussian(&g, Definition::Myxt, InfoUnit::Nats)
            .and_then(|a| Ok((a.value, ui_gaussian(&g.swap_roles(Role::M, Role::X), Definition::Tmxy, InfoUnit::Nats)?.value)));
        match pair {
            Ok((a, b)) => {
                report.check(a.to_bits() == b.to_bits(), &ctx, "MYXT(g) == TMXY(swap M, X)", a, b);
                report.metric_max("max_abs_difference", (a - b).abs());
            }
            Err(e) => record_error(&mut report, &ctx, "duality", &e),
        }
    }
    Ok(report.finish(started))
}

pub(crate) fn gaussian_sums_probe(trials: usize, seed: u64, unit: InfoUnit) -> Result<SuiteReport> {
    require_trials(trials)?;
    let started = Instant::now();
    let mut report = SuiteReport::new("sums_gaussian", trials, seed);
    report.report_only = true;
    let push = |report: &mut SuiteReport, label: String, trial_seed: Option<u64>, a: &GaussianJoint, b: &GaussianJoint| -> Result<()> {
        let whole = a.direct_sum(b);
        for def in Definition::ALL {
            let w = ui_gaussian(&whole, def, unit)?.value;
            let parts = [ui_gaussian(a, def, unit)?.value, ui_gaussian(b, def, unit)?.value];
            report.deviations.push(Deviation {
                label: label.clone(),
                trial_seed,
                definition: def,
                t_card: None,
                whole: w,
                parts,
                deviation: w - parts[0] - parts[1],
                certified: true,
            });
        }
        Ok(())
    };
    let f1 = counterexample_family(Definition::Tmxy, (0.6, 0.0))?;
    let f2 = counterexample_family(Definition::Tmxy, (0.8, 0.0))?;
    push(&mut report, "scalar families with Sigma_MY = 0".into(), None, &f1, &f2)?;
    for i in 0..trials {
        let ts = trial_seed(seed, i);
        let mut r = rng(ts);
        let dims = random_dims(&mut r, [2, 2, 2]);
        let a = random_covariance(&mut r, dims);
        let dims = random_dims(&mut r, [2, 2, 2]);
        let b = random_covariance(&mut r, dims);
        push(&mut report, format!("random pair {i}"), Some(ts), &a, &b)?;
    }
    let worst = report.deviations.iter().map(|d| d.deviation.abs()).fold(0.0, f64::max);
    report.metric("max_abs_deviation", worst);
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_step_holds() {
        let r = determinant_step_suite(200, 4, 1).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        assert!(determinant_step_suite(1, 9, 0).is_err());
        assert!(determinant_step_suite(0, 4, 0).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&gaussian_nonnegativity(10, 4).unwrap()).unwrap();
        let b = serde_json::to_string(&gaussian_nonnegativity(10, 4).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn extractors_and_duality() {
        let e = extractor_suite(10, 2).unwrap();
        assert!(e.passed, "{:?}", e.failures);
        let d = gaussian_duality_suite(10, 2).unwrap();
        assert!(d.passed, "{:?}", d.failures);
    }

    #[test]
    fn closed_form_agrees_with_ascent() {
        for dims in [[2, 2, 2], [3, 2, 1]] {
            let r = gaussian_closed_form_vs_numeric_suite(50, dims, 9).unwrap();
            assert!(r.passed, "{dims:?}: {:?}", r.failures);
        }
        assert!(gaussian_closed_form_vs_numeric_suite(1, [5, 1, 1], 0).is_err());
    }

    #[test]
    fn gaussian_bounds_hold() {
        let r = gaussian_nonnegativity(100, 0).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        assert!(gaussian_nonnegativity(0, 0).is_err());
    }

    #[test]
    fn tmxy_family_is_asymmetric() {
        let r = symmetry_counterexample_suite(InfoUnit::Bits).unwrap();
        assert!(r.failures.iter().all(|f| !f.fingerprint.contains("TMXY")));
        assert!((r.metrics["tmxy_r_gap"] - 0.253898).abs() < 1e-6);
        assert_eq!(r.metrics["tmxy_origin_r_gap"], 0.0);
    }

    #[test]
    fn block_diagonal_sums_are_additive() {
        let r = gaussian_sums_probe(10, 0, InfoUnit::Bits).unwrap();
        assert!(r.report_only && r.failures.is_empty());
        assert!(r.metrics["max_abs_deviation"] <= 1e-9);
    }
}
