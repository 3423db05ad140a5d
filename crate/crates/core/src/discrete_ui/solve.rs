use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::channel::Channel;
use super::polytope::{build_polytope, ChannelPolytope};
use super::vertices::{distinct, enumerate_vertices, sample_vertices};
use crate::definition::Definition;
use crate::error::{Error, Result};
use crate::pid::{PidInputs, PidTerms};
use crate::prob::{clamp_nonneg, cmi_nats, mi_nats, DiscreteJoint, Role};
use crate::units::InfoUnit;

/// Largest polytope (in variables) enumerated exhaustively.
pub const DEFAULT_VERTEX_CAP: usize = 24;
/// Stop enumerating after this many distinct vertices.
pub const DEFAULT_VERTEX_LIMIT: usize = 100_000;
/// Random objectives solved in sampling mode.
pub const DEFAULT_SAMPLES: usize = 64;

/// Objectives within this many nats of the best count as ties.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    #[default]
    Exact,
    Sample,
}

impl fmt::Display for SolveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMode::Exact => "exact",
            SolveMode::Sample => "sample",
        })
    }
}

impl FromStr for SolveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(SolveMode::Exact),
            "sample" => Ok(SolveMode::Sample),
            other => Err(Error::Usage(format!("unknown mode {other:?} (expected exact or sample)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExhaustiveVertex,
    SampledVertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Extractor alphabet size; `None` means `|source| + 1`.
    pub t_card: Option<usize>,
    pub mode: SolveMode,
    pub unit: InfoUnit,
    pub seed: u64,
    pub vertex_cap: usize,
    pub vertex_limit: usize,
    pub samples: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            t_card: None,
            mode: SolveMode::Exact,
            unit: InfoUnit::Bits,
            seed: 0,
            vertex_cap: DEFAULT_VERTEX_CAP,
            vertex_limit: DEFAULT_VERTEX_LIMIT,
            samples: DEFAULT_SAMPLES,
        }
    }
}

impl SolverConfig {
    pub fn with_t_card(self, t_card: usize) -> Self {
        Self { t_card: Some(t_card), ..self }
    }

    pub fn with_unit(self, unit: InfoUnit) -> Self {
        Self { unit, ..self }
    }

    pub fn sampled(self, samples: usize, seed: u64) -> Self {
        Self { mode: SolveMode::Sample, samples, seed, ..self }
    }

    fn resolve_t_card(&self, joint: &DiscreteJoint, definition: Definition) -> Result<usize> {
        let t = self.t_card.unwrap_or(joint.shape()[definition.source().axis()] + 1);
        if t == 0 {
            return Err(Error::Usage("t_card must be at least 1".into()));
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteUiResult {
    pub value: f64,
    pub unit: InfoUnit,
    pub definition: Definition,
    pub t_card: usize,
    pub method: Method,
    /// True only when every vertex was evaluated.
    pub certified: bool,
    pub optimal_channel: Channel,
    pub vertices_examined: usize,
}

impl DiscreteUiResult {
    pub fn nats(&self) -> f64 {
        self.unit.to_nats(self.value)
    }
}

fn best_vertex(p: &ChannelPolytope, vertices: Vec<Channel>) -> (f64, Channel) {
    let values: Vec<f64> = vertices.iter().map(|c| p.objective_nats(c)).collect();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // Vertices arrive in lexicographic order, so the first near-tie wins.
    let k = values.iter().position(|&v| v >= best - TIE_TOL).unwrap_or(0);
    (values[k], vertices.into_iter().nth(k).expect("non-empty vertex set"))
}

/// Maximize the definition's objective over the channel polytope.
pub fn ui_discrete(joint: &DiscreteJoint, definition: Definition, cfg: &SolverConfig) -> Result<DiscreteUiResult> {
    let t_card = cfg.resolve_t_card(joint, definition)?;
    let (source, target) = (definition.source(), definition.target());
    let source_size = joint.shape()[source.axis()];
    let trivial = DiscreteUiResult {
        value: 0.0,
        unit: cfg.unit,
        definition,
        t_card,
        method: Method::ExhaustiveVertex,
        certified: true,
        optimal_channel: Channel::constant(t_card, source_size),
        vertices_examined: 1,
    };
    if t_card == 1 || joint.support(source).len() == 1 || joint.support(target).len() == 1 {
        return Ok(trivial);
    }

    let p = build_polytope(joint, definition, t_card)?;
    let (vertices, method, certified) = match cfg.mode {
        SolveMode::Exact => {
            let set = enumerate_vertices(&p, cfg.vertex_limit, cfg.vertex_cap)?;
            (set.vertices, Method::ExhaustiveVertex, set.exhaustive)
        }
        SolveMode::Sample => {
            let sampled = sample_vertices(&p, cfg.samples, cfg.seed)?;
            (distinct(&p, &sampled), Method::SampledVertex, false)
        }
    };
    if vertices.is_empty() {
        return Err(Error::Internal("channel polytope has no vertices".into()));
    }
    let vertices_examined = vertices.len();
    let (nats, optimal_channel) = best_vertex(&p, vertices);
    let nats = clamp_nonneg("unique information", nats)?;
    Ok(DiscreteUiResult {
        value: cfg.unit.from_nats(nats),
        method,
        certified,
        optimal_channel,
        vertices_examined,
        ..trivial
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscretePid {
    pub terms: PidTerms,
    pub ui_x: DiscreteUiResult,
    /// Computed on the joint with `X` and `Y` exchanged.
    pub ui_y: DiscreteUiResult,
}

/// Unsymmetrized decomposition with both unique terms from `definition`.
pub fn pid_terms_discrete(joint: &DiscreteJoint, definition: Definition, cfg: &SolverConfig) -> Result<DiscretePid> {
    use Role::{M, X, Y};
    let ui_x = ui_discrete(joint, definition, cfg)?;
    let ui_y = ui_discrete(&joint.swap_roles(X, Y), definition, cfg)?;
    let inputs = PidInputs {
        i_mx: mi_nats(joint, &[M], &[X])?,
        i_my: mi_nats(joint, &[M], &[Y])?,
        i_mx_given_y: cmi_nats(joint, &[M], &[X], &[Y])?,
        i_my_given_x: cmi_nats(joint, &[M], &[Y], &[X])?,
        i_m_xy: mi_nats(joint, &[M], &[X, Y])?,
        ui_x: ui_x.nats(),
        ui_y: ui_y.nats(),
    };
    Ok(DiscretePid { terms: PidTerms::from_nats(inputs, cfg.unit)?, ui_x, ui_y })
}

/// Whether one more extractor symbol raises the value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TCardCheck {
    pub t_card: usize,
    pub value: f64,
    pub value_next: f64,
    pub increased: bool,
}

/// Solve at `t_card` and `t_card + 1` and compare.
pub fn t_card_check(joint: &DiscreteJoint, definition: Definition, cfg: &SolverConfig, tol: f64) -> Result<TCardCheck> {
    let t_card = cfg.resolve_t_card(joint, definition)?;
    let here = ui_discrete(joint, definition, &cfg.with_t_card(t_card))?;
    let next = ui_discrete(joint, definition, &cfg.with_t_card(t_card + 1))?;
    Ok(TCardCheck {
        t_card,
        value: here.value,
        value_next: next.value,
        increased: next.value > here.value + tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete_ui::{canonical_example, CanonicalExample};
    use crate::prob::mutual_information;
    use proptest::prelude::*;

    fn exact() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn unique_gate_both_definitions() {
        let j = canonical_example(CanonicalExample::Unq);
        for d in Definition::ALL {
            let pid = pid_terms_discrete(&j, d, &exact()).unwrap();
            assert!((pid.terms.ui_x - 1.0).abs() < 1e-9, "{d}: {}", pid.terms.ui_x);
            assert!((pid.terms.ui_y - 1.0).abs() < 1e-9);
            assert!(pid.ui_x.certified);
            assert!(pid.terms.r_x.abs() < 1e-9 && pid.terms.s_x.abs() < 1e-9);
        }
    }

    #[test]
    fn redundant_and_xor_under_tmxy() {
        let rdn = pid_terms_discrete(&canonical_example(CanonicalExample::Rdn), Definition::Tmxy, &exact()).unwrap();
        assert_eq!((rdn.terms.ui_x, rdn.terms.ui_y), (0.0, 0.0));
        assert!((rdn.terms.r_x - 1.0).abs() < 1e-12 && (rdn.terms.r_y - 1.0).abs() < 1e-12);
        let xor = pid_terms_discrete(&canonical_example(CanonicalExample::Xor), Definition::Tmxy, &exact()).unwrap();
        assert!(xor.terms.ui_x < 1e-12 && (xor.terms.s_x - 1.0).abs() < 1e-12 && (xor.terms.s_y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn and_gate_under_tmxy() {
        let and = pid_terms_discrete(&canonical_example(CanonicalExample::And), Definition::Tmxy, &exact()).unwrap();
        let t = and.terms;
        assert!(t.ui_x < 1e-12 && t.ui_y < 1e-12);
        assert!((t.r_x - 0.311278).abs() < 1e-6);
        assert!((t.s_x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn and_gate_under_myxt_extracts_all_of_x() {
        // X and Y are independent, so T = X is admissible and reaches I(M; X).
        let j = canonical_example(CanonicalExample::And);
        let r = ui_discrete(&j, Definition::Myxt, &exact()).unwrap();
        let imx = mutual_information(&j, &[Role::M], &[Role::X], InfoUnit::Bits).unwrap();
        assert!((r.value - imx).abs() < 1e-12);
    }

    #[test]
    fn single_symbol_extractor_is_zero() {
        let r = ui_discrete(&canonical_example(CanonicalExample::Unq), Definition::Tmxy, &exact().with_t_card(1)).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.certified);
        assert_eq!(r.optimal_channel.row_major(), vec![1.0; 4]);
    }

    #[test]
    fn sampling_is_not_certified() {
        let j = canonical_example(CanonicalExample::Unq);
        let r = ui_discrete(&j, Definition::Tmxy, &exact().sampled(64, 3)).unwrap();
        assert_eq!(r.method, Method::SampledVertex);
        assert!(!r.certified);
        assert!(r.value <= 1.0 + 1e-9);
        assert_eq!(r, ui_discrete(&j, Definition::Tmxy, &exact().sampled(64, 3)).unwrap());
    }

    #[test]
    fn cap_is_reported() {
        let j = canonical_example(CanonicalExample::Unq);
        let cfg = SolverConfig { vertex_cap: 8, ..exact() };
        assert!(matches!(ui_discrete(&j, Definition::Tmxy, &cfg), Err(Error::EnumerationCap { .. })));
    }

    #[test]
    fn t_card_flag() {
        let c = t_card_check(&canonical_example(CanonicalExample::Unq), Definition::Myxt, &exact(), 1e-9).unwrap();
        assert_eq!(c.t_card, 3);
        assert!(!c.increased);
    }

    fn small_joint() -> impl Strategy<Value = DiscreteJoint> {
        (1usize..=3, 1usize..=3, 1usize..=3).prop_flat_map(|(a, b, c)| {
            prop::collection::vec(0.05f64..1.0, a * b * c).prop_map(move |w| {
                let total: f64 = w.iter().sum();
                DiscreteJoint::from_fn([a, b, c], |m, x, y| w[(m * b + x) * c + y] / total).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn bounded_by_mutual_and_conditional(j in small_joint(), d in prop::sample::select(Definition::ALL.to_vec())) {
            let cfg = exact().with_unit(InfoUnit::Nats);
            let r = ui_discrete(&j, d, &cfg).unwrap();
            let mi = mutual_information(&j, &[Role::M], &[Role::X], InfoUnit::Nats).unwrap();
            let cmi = crate::prob::conditional_mutual_information(&j, &[Role::M], &[Role::X], &[Role::Y], InfoUnit::Nats).unwrap();
            prop_assert!(r.value <= mi.min(cmi) + 1e-9);
        }

        #[test]
        fn duality_is_exact(j in small_joint()) {
            let a = ui_discrete(&j, Definition::Myxt, &exact()).unwrap();
            let b = ui_discrete(&j.swap_roles(Role::M, Role::X), Definition::Tmxy, &exact()).unwrap();
            prop_assert!((a.value - b.value).abs() <= 1e-9);
        }

        #[test]
        fn monotone_in_t_card(j in small_joint(), t in 1usize..=3) {
            let lo = ui_discrete(&j, Definition::Tmxy, &exact().with_t_card(t)).unwrap();
            let hi = ui_discrete(&j, Definition::Tmxy, &exact().with_t_card(t + 1)).unwrap();
            prop_assert!(hi.value >= lo.value - 1e-9);
        }

        #[test]
        fn argmax_is_feasible(j in small_joint()) {
            let r = ui_discrete(&j, Definition::Tmxy, &exact()).unwrap();
            let p = build_polytope(&j, Definition::Tmxy, r.t_card).unwrap();
            prop_assert!(p.independence_residual(&r.optimal_channel) <= 1e-9);
            for col in r.optimal_channel.probs().column_iter() {
                prop_assert!((col.sum() - 1.0).abs() <= 1e-12);
            }
        }

        #[test]
        fn vertices_dominate_mixtures(j in small_joint(), w in prop::collection::vec(0.0f64..1.0, 8)) {
            let r = ui_discrete(&j, Definition::Tmxy, &exact().with_t_card(3)).unwrap();
            let p = build_polytope(&j, Definition::Tmxy, 3).unwrap();
            let verts = enumerate_vertices(&p, DEFAULT_VERTEX_LIMIT, DEFAULT_VERTEX_CAP).unwrap().vertices;
            let total: f64 = w.iter().take(verts.len()).sum::<f64>().max(1e-12);
            let mut mix = nalgebra::DMatrix::zeros(3, j.shape()[0]);
            for (v, wi) in verts.iter().zip(&w) {
                mix += v.probs() * (*wi / total);
            }
            if let Ok(c) = Channel::new(mix) {
                prop_assert!(InfoUnit::Bits.from_nats(p.objective_nats(&c)) <= r.value + 1e-9);
            }
        }

        #[test]
        fn relabel_invariance(j in small_joint()) {
            let n = j.shape()[0];
            let perm: Vec<usize> = (0..n).rev().collect();
            let a = ui_discrete(&j, Definition::Tmxy, &exact()).unwrap();
            let b = ui_discrete(&j.relabel(Role::M, &perm).unwrap(), Definition::Tmxy, &exact()).unwrap();
            prop_assert!((a.value - b.value).abs() <= 1e-12);
        }
    }
}
