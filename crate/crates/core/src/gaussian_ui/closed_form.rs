use nalgebra::DMatrix;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::kernel::{kernel_basis_with_floor, KernelBasis};
use crate::definition::Definition;
use crate::error::{Error, Result};
use crate::linalg::{self, RANK_TOL};
use crate::prob::{whiten, GaussianJoint, Role, WhitenTransform};
use crate::units::InfoUnit;

/// Tag carried by every Gaussian result.
pub const GAUSSIAN_RESTRICTION: &str = "optimum over jointly Gaussian extractors";

/// Singular values this close to one make the closed form diverge.
const SIGMA_CEILING: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianDiagnostics {
    /// Singular values of `V^T Sigma_source,target` in white coordinates.
    pub canonical_correlations: Vec<f64>,
    /// Retained (M, X, Y) ranks after whitening.
    pub whitened_dims: [usize; 3],
    pub restriction: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianUiResult {
    pub value: f64,
    pub unit: InfoUnit,
    pub definition: Definition,
    /// `Sigma_MT` (TMXY) or `Sigma_XT` (MYXT) in white coordinates; equal to
    /// the kernel basis.
    pub extractor_cross_cov: DMatrix<f64>,
    pub whiten_record: WhitenTransform,
    pub kernel_dim: usize,
    pub diagnostics: GaussianDiagnostics,
}

impl GaussianUiResult {
    pub fn nats(&self) -> f64 {
        self.unit.to_nats(self.value)
    }
}

impl Serialize for GaussianUiResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Diagnostics<'a> {
            canonical_correlations: &'a [f64],
            whitened_dims: [usize; 3],
            original_dims: [usize; 3],
            restriction: &'static str,
        }
        let mut st = s.serialize_struct("GaussianUiResult", 6)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("unit", &self.unit)?;
        st.serialize_field("definition", &self.definition)?;
        st.serialize_field("kernel_dim", &self.kernel_dim)?;
        st.serialize_field("extractor_cross_cov", &linalg::to_rows(&self.extractor_cross_cov))?;
        st.serialize_field(
            "diagnostics",
            &Diagnostics {
                canonical_correlations: &self.diagnostics.canonical_correlations,
                whitened_dims: self.diagnostics.whitened_dims,
                original_dims: self.whiten_record.dims,
                restriction: self.diagnostics.restriction,
            },
        )?;
        st.end()
    }
}

/// Pieces of the closed form computed on an already white joint.
pub(crate) struct ClosedForm {
    pub nats: f64,
    pub kernel: KernelBasis,
    pub sigmas: Vec<f64>,
}

/// Closed form on white coordinates: the kernel of `Sigma_{Y,source}` and
/// the singular values of `V^T Sigma_{source,target}`. The value is summed as
/// `-1/2 sum log(1 - sigma^2)` rather than through a determinant.
pub(crate) fn closed_form_white(white: &GaussianJoint, definition: Definition) -> Result<ClosedForm> {
    let (source, target) = (definition.source(), definition.target());
    let kernel = kernel_basis_with_floor(&white.block(Role::Y, source), RANK_TOL, 1.0);
    let reduced = kernel.basis.transpose() * white.block(source, target);
    let sigmas = linalg::singular_values(&reduced);
    let mut nats = 0.0;
    for &s in &sigmas {
        if s >= SIGMA_CEILING {
            return Err(Error::IllConditioned { sigma: s });
        }
        nats += -0.5 * (-s * s).ln_1p();
    }
    Ok(ClosedForm { nats, kernel, sigmas })
}

/// Gaussian unique information of `X` over `Y` about `M` under `definition`.
pub fn ui_gaussian(g: &GaussianJoint, definition: Definition, unit: InfoUnit) -> Result<GaussianUiResult> {
    let (white, record) = whiten(g);
    let cf = closed_form_white(&white, definition)?;
    Ok(GaussianUiResult {
        value: unit.from_nats(cf.nats),
        unit,
        definition,
        kernel_dim: cf.kernel.dim(),
        extractor_cross_cov: cf.kernel.basis,
        whiten_record: record,
        diagnostics: GaussianDiagnostics {
            canonical_correlations: cf.sigmas,
            whitened_dims: white.dims(),
            restriction: GAUSSIAN_RESTRICTION,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::gaussian_mi;
    use proptest::prelude::*;
    use Role::{M, X, Y};

    fn scalar(cov: [[f64; 3]; 3]) -> GaussianJoint {
        let flat: Vec<f64> = cov.iter().flatten().copied().collect();
        GaussianJoint::new([1, 1, 1], DMatrix::from_row_slice(3, 3, &flat)).unwrap()
    }

    #[test]
    fn full_rank_protected_block_kills_unique_information() {
        let g = scalar([[1.0, 0.6, 0.3], [0.6, 1.0, 0.0], [0.3, 0.0, 1.0]]);
        let r = ui_gaussian(&g, Definition::Tmxy, InfoUnit::Bits).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.kernel_dim, 0);
        let swapped = g.swap_roles(X, Y);
        assert_eq!(ui_gaussian(&swapped, Definition::Tmxy, InfoUnit::Bits).unwrap().value, 0.0);
    }

    #[test]
    fn independent_protected_variable_gives_full_information() {
        let g = scalar([[1.0, 0.6, 0.0], [0.6, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let r = ui_gaussian(&g, Definition::Tmxy, InfoUnit::Bits).unwrap();
        let mi = gaussian_mi(&g, &[M], &[X], InfoUnit::Bits).unwrap();
        assert!((r.value - mi).abs() < 1e-12);
        assert!((r.value - 0.3219).abs() < 1e-4);
        assert_eq!(r.kernel_dim, 1);
        assert_eq!(r.extractor_cross_cov, DMatrix::identity(1, 1));
    }

    #[test]
    fn message_equal_to_protected_variable() {
        let g = scalar([[1.0, 0.5, 1.0], [0.5, 1.0, 0.5], [1.0, 0.5, 1.0]]);
        let r = ui_gaussian(&g, Definition::Tmxy, InfoUnit::Bits).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.kernel_dim, 0);
    }

    #[test]
    fn serializes_expected_fields() {
        let g = scalar([[1.0, 0.6, 0.0], [0.6, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let r = ui_gaussian(&g, Definition::Myxt, InfoUnit::Nats).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["value", "unit", "definition", "kernel_dim", "extractor_cross_cov", "diagnostics"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["definition"], "MYXT");
        assert_eq!(v["unit"], "nats");
    }

    fn arb_joint() -> impl Strategy<Value = GaussianJoint> {
        (1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(a, b, c)| {
            let n = a + b + c;
            prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| {
                let g = DMatrix::from_vec(n, n, v);
                GaussianJoint::new([a, b, c], &g * g.transpose() + DMatrix::identity(n, n) * 0.05).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn bounded_by_mutual_and_conditional_information(g in arb_joint()) {
            for d in Definition::ALL {
                let ui = ui_gaussian(&g, d, InfoUnit::Nats).unwrap().value;
                let mi = gaussian_mi(&g, &[M], &[X], InfoUnit::Nats).unwrap();
                let cmi = crate::prob::gaussian_conditional_mi(&g, &[M], &[X], &[Y], InfoUnit::Nats).unwrap();
                prop_assert!(ui >= 0.0);
                prop_assert!(ui <= mi + 1e-9, "{} > I(M;X) = {}", ui, mi);
                prop_assert!(ui <= cmi + 1e-9, "{} > I(M;X|Y) = {}", ui, cmi);
            }
        }

        #[test]
        fn duality_is_exact(g in arb_joint()) {
            let a = ui_gaussian(&g, Definition::Myxt, InfoUnit::Nats).unwrap().value;
            let b = ui_gaussian(&g.swap_roles(M, X), Definition::Tmxy, InfoUnit::Nats).unwrap().value;
            prop_assert_eq!(a, b);
        }

        #[test]
        fn trivial_kernel_means_zero(g in arb_joint()) {
            let r = ui_gaussian(&g, Definition::Tmxy, InfoUnit::Nats).unwrap();
            if r.kernel_dim == 0 {
                prop_assert_eq!(r.value, 0.0);
            }
        }

        #[test]
        fn invariant_under_block_maps(g in arb_joint(), seed in prop::collection::vec(-1.0f64..1.0, 27)) {
            let mut moved = g.clone();
            for (k, r) in Role::ALL.into_iter().enumerate() {
                let d = g.dim(r);
                let map = DMatrix::from_fn(d, d, |i, j| seed[k * 9 + i * 3 + j]) + DMatrix::identity(d, d) * 3.0;
                moved = moved.transform_block(r, &map).unwrap();
            }
            for d in Definition::ALL {
                let a = ui_gaussian(&g, d, InfoUnit::Nats).unwrap().value;
                let b = ui_gaussian(&moved, d, InfoUnit::Nats).unwrap().value;
                prop_assert!((a - b).abs() <= 1e-8 * a.max(1e-2), "{} vs {}", a, b);
            }
        }
    }
}
