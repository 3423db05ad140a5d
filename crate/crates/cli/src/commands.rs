use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;

use markov_ui::discrete_ui::{
    canonical_example, pid_terms_discrete, t_card_check, CanonicalExample, DiscretePid, SolverConfig, TCardCheck,
};
use markov_ui::gaussian_ui::{pid_terms_gaussian, GAUSSIAN_RESTRICTION};
use markov_ui::prob::io::{read_discrete, read_gaussian};
use markov_ui::verify::{
    determinant_step_suite, duality_suite, extractor_suite, gaussian_closed_form_vs_numeric_suite,
    independent_sums_probe, lemma_b1_suite, nonnegativity_suite, symmetry_counterexample_suite, Domain, SuiteReport,
};
use markov_ui::{Definition, Error, PidTerms, Result};

use crate::table::{num, Table};
use crate::{OutputArg, RunConfig, SuiteArg, TCard};

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool_version: &'static str,
    command: &'static str,
    config: &'a RunConfig,
    result: T,
}

fn emit<T: Serialize>(cfg: &RunConfig, command: &'static str, result: T, table: impl FnOnce(&T) -> String) -> Result<()> {
    match cfg.output {
        OutputArg::Json => {
            let env = Envelope { tool_version: env!("CARGO_PKG_VERSION"), command, config: cfg, result };
            let text = serde_json::to_string_pretty(&env).map_err(|e| Error::Internal(format!("serializing report: {e}")))?;
            println!("{text}");
        }
        OutputArg::Table => println!("{}", table(&result)),
    }
    Ok(())
}

fn input_path(cfg: &RunConfig) -> Result<&Path> {
    cfg.input_path.as_deref().ok_or_else(|| Error::Usage("--input is required for this command".into()))
}

fn solver_config(cfg: &RunConfig) -> SolverConfig {
    SolverConfig {
        t_card: match cfg.t_card {
            TCard::Auto => None,
            TCard::Fixed(n) => Some(n),
        },
        mode: cfg.mode,
        unit: cfg.unit,
        seed: cfg.seed,
        ..SolverConfig::default()
    }
}

fn pid_table(terms: &PidTerms) -> String {
    let mut t = Table::new(["quantity", &format!("value ({})", terms.unit)]);
    for (name, v) in terms.named() {
        t.row([name.to_string(), num(v)]);
    }
    t.row(["I(M;X,Y)".to_string(), num(terms.i_m_xy)]);
    t.render()
}

pub fn gaussian(cfg: &RunConfig) -> Result<ExitCode> {
    let g = read_gaussian(input_path(cfg)?)?;
    let pid = pid_terms_gaussian(&g, cfg.definition, cfg.unit)?;
    emit(cfg, "gaussian", &pid, |pid| {
        format!(
            "{} Gaussian unique information ({GAUSSIAN_RESTRICTION}), dims {:?}\n{}\nkernel dims: UI_X {}, UI_Y {}",
            cfg.definition,
            g.dims(),
            pid_table(&pid.terms),
            pid.ui_x.kernel_dim,
            pid.ui_y.kernel_dim
        )
    })?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DiscreteReport {
    #[serde(flatten)]
    pid: DiscretePid,
    /// Present in exact mode when the larger polytope fits the vertex cap.
    t_card_check: Option<TCardCheck>,
}

pub fn discrete(cfg: &RunConfig) -> Result<ExitCode> {
    let joint = read_discrete(input_path(cfg)?)?;
    let solver = solver_config(cfg);
    let pid = pid_terms_discrete(&joint, cfg.definition, &solver)?;
    let check = match (solver.mode, t_card_check(&joint, cfg.definition, &solver, cfg.tol)) {
        (markov_ui::discrete_ui::SolveMode::Exact, Ok(c)) => Some(c),
        (_, Err(e)) if !matches!(e, Error::EnumerationCap { .. }) => return Err(e),
        _ => None,
    };
    let report = DiscreteReport { pid, t_card_check: check };
    emit(cfg, "discrete", &report, |r| {
        let mut t = Table::new(["term", "t_card", "method", "certified", "vertices"]);
        for (name, res) in [("UI_X", &r.pid.ui_x), ("UI_Y", &r.pid.ui_y)] {
            t.row([
                name.to_string(),
                res.t_card.to_string(),
                serde_json::to_value(res.method).map(|v| v.as_str().unwrap_or_default().to_string()).unwrap_or_default(),
                res.certified.to_string(),
                res.vertices_examined.to_string(),
            ]);
        }
        let mut out = format!("{} discrete unique information, shape {:?}\n{}\n\n{}", cfg.definition, joint.shape(), pid_table(&r.pid.terms), t.render());
        if let Some(c) = &r.t_card_check {
            out.push_str(&format!(
                "\nUI_X at t_card {}: {}; at t_card {}: {}{}",
                c.t_card,
                num(c.value),
                c.t_card + 1,
                num(c.value_next),
                if c.increased { " (increased: t_card may be insufficient)" } else { "" }
            ));
        }
        out
    })?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ExampleRow {
    example: CanonicalExample,
    definition: Definition,
    ui_x: f64,
    ui_y: f64,
    r_x: f64,
    r_y: f64,
    s_x: f64,
    s_y: f64,
    certified: bool,
    /// Commonly quoted `(UI_X, UI_Y, R, S)` in bits.
    reference: [f64; 4],
}

pub fn examples(cfg: &RunConfig, which: &[CanonicalExample]) -> Result<ExitCode> {
    let solver = solver_config(cfg);
    let mut rows = Vec::new();
    for def in Definition::ALL {
        for &ex in which {
            let pid = pid_terms_discrete(&canonical_example(ex), def, &solver)?;
            let t = pid.terms;
            rows.push(ExampleRow {
                example: ex,
                definition: def,
                ui_x: t.ui_x,
                ui_y: t.ui_y,
                r_x: t.r_x,
                r_y: t.r_y,
                s_x: t.s_x,
                s_y: t.s_y,
                certified: pid.ui_x.certified && pid.ui_y.certified,
                reference: ex.reference_values(),
            });
        }
    }
    emit(cfg, "examples", &rows, |rows| {
        let mut t = Table::new(["definition", "example", "UI_X", "UI_Y", "R_X", "R_Y", "S_X", "S_Y", "reference (UI_X, UI_Y, R, S)"]);
        for r in rows.iter() {
            let reference: Vec<String> = r.reference.iter().map(|v| format!("{v}")).collect();
            t.row([
                r.definition.to_string(),
                r.example.to_string(),
                num(r.ui_x),
                num(r.ui_y),
                num(r.r_x),
                num(r.r_y),
                num(r.s_x),
                num(r.s_y),
                reference.join(", "),
            ]);
        }
        format!("values in {}\n{}", cfg.unit, t.render())
    })?;
    Ok(ExitCode::SUCCESS)
}

fn run_suites(cfg: &RunConfig, suite: SuiteArg) -> Result<Vec<SuiteReport>> {
    let trials = |default: usize| cfg.trials.unwrap_or(default);
    let seed = cfg.seed;
    let all = suite == SuiteArg::All;
    let mut reports = Vec::new();
    if all || suite == SuiteArg::Nonneg {
        reports.push(nonnegativity_suite(Domain::Gaussian, trials(100), seed)?);
        reports.push(nonnegativity_suite(Domain::Discrete, trials(50), seed)?);
    }
    if all || suite == SuiteArg::Symmetry {
        reports.push(symmetry_counterexample_suite(cfg.unit)?);
    }
    if all || suite == SuiteArg::Detstep {
        reports.push(determinant_step_suite(trials(200), 4, seed)?);
    }
    if all || suite == SuiteArg::Closedform {
        reports.push(gaussian_closed_form_vs_numeric_suite(trials(50), [3, 3, 3], seed)?);
    }
    if all || suite == SuiteArg::Lemmab1 {
        reports.push(lemma_b1_suite(trials(100), seed)?);
    }
    if all || suite == SuiteArg::Extractor {
        reports.push(extractor_suite(trials(25), seed)?);
    }
    if all || suite == SuiteArg::Duality {
        reports.push(duality_suite(Domain::Gaussian, trials(25), seed)?);
        reports.push(duality_suite(Domain::Discrete, trials(25), seed)?);
    }
    if all || suite == SuiteArg::Sums {
        reports.push(independent_sums_probe(Domain::Gaussian, trials(10), seed, cfg.unit)?);
        reports.push(independent_sums_probe(Domain::Discrete, trials(5), seed, cfg.unit)?);
    }
    Ok(reports)
}

pub fn verify(cfg: &RunConfig, suite: SuiteArg) -> Result<ExitCode> {
    let reports = run_suites(cfg, suite)?;
    let passed = reports.iter().all(|r| r.report_only || r.passed);
    emit(cfg, "verify", &reports, |reports| {
        let mut out: Vec<String> = reports.iter().map(SuiteReport::summary_line).collect();
        for r in reports.iter() {
            for f in &r.failures {
                out.push(format!(
                    "  {} trial {} seed {} [{}]: {} (observed {}, bound {})",
                    r.suite_name, f.trial, f.trial_seed, f.fingerprint, f.check, f.observed, f.bound
                ));
            }
            if !r.deviations.is_empty() {
                let mut t = Table::new(["instance", "definition", "t_card", "whole", "part 1", "part 2", "deviation", "certified"]);
                for d in &r.deviations {
                    t.row([
                        d.label.clone(),
                        d.definition.to_string(),
                        d.t_card.map_or("-".into(), |t| t.to_string()),
                        num(d.whole),
                        num(d.parts[0]),
                        num(d.parts[1]),
                        num(d.deviation),
                        d.certified.to_string(),
                    ]);
                }
                out.push(format!("{} deviations ({}):\n{}", r.suite_name, cfg.unit, t.render()));
            }
        }
        out.join("\n")
    })?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
