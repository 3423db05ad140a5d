use nalgebra::DMatrix;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::closed_form::closed_form_white;
use crate::definition::Definition;
use crate::error::Result;
use crate::linalg::{self, select};
use crate::prob::{cov_mi_nats, markov_residual, whiten, GaussianJoint, MarkovCheck, Role};
use crate::units::InfoUnit;

/// Joint covariance of `(T, M, X, Y)` in white coordinates realizing the
/// Gaussian unique information.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianExtractor {
    pub definition: Definition,
    /// Block sizes in `[T, M, X, Y]` order.
    pub dims: [usize; 4],
    pub cov: DMatrix<f64>,
    /// No admissible direction exists; `T` is zero-dimensional.
    pub degenerate: bool,
    /// Closed-form value the extractor should attain.
    pub value: f64,
    pub unit: InfoUnit,
}

impl GaussianExtractor {
    fn range(&self, block: usize) -> Vec<usize> {
        let start: usize = self.dims[..block].iter().sum();
        (start..start + self.dims[block]).collect()
    }

    pub fn t_indices(&self) -> Vec<usize> {
        self.range(0)
    }

    pub fn role_indices(&self, role: Role) -> Vec<usize> {
        self.range(1 + role.axis())
    }

    /// `I(T; X)` for TMXY, `I(T; M)` for MYXT, in the result unit.
    pub fn extracted_information(&self) -> Result<f64> {
        if self.degenerate {
            return Ok(0.0);
        }
        let nats = cov_mi_nats(&self.cov, &self.t_indices(), &self.role_indices(self.definition.target()))?;
        Ok(self.unit.from_nats(nats))
    }

    /// `I(T; Y)`, zero for a valid extractor.
    pub fn leaked_information(&self) -> Result<f64> {
        if self.degenerate {
            return Ok(0.0);
        }
        Ok(self.unit.from_nats(cov_mi_nats(&self.cov, &self.t_indices(), &self.role_indices(Role::Y))?))
    }

    /// Frobenius norm of `Sigma_TY`.
    pub fn protected_cross_norm(&self) -> f64 {
        select(&self.cov, &self.t_indices(), &self.role_indices(Role::Y)).norm()
    }

    /// The chain `T - source - (other two)`.
    pub fn markov_check(&self, tol: f64) -> MarkovCheck {
        let source = self.definition.source();
        let rest: Vec<usize> = Role::ALL
            .into_iter()
            .filter(|&r| r != source)
            .flat_map(|r| self.role_indices(r))
            .collect();
        markov_residual(&self.cov, &self.t_indices(), &self.role_indices(source), &rest, tol)
    }

    /// Smallest eigenvalue relative to the largest.
    pub fn min_relative_eigenvalue(&self) -> f64 {
        let (lo, hi) = linalg::eigen_range(&self.cov);
        if hi > 0.0 { lo / hi } else { 0.0 }
    }
}

impl Serialize for GaussianExtractor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GaussianExtractor", 6)?;
        st.serialize_field("definition", &self.definition)?;
        st.serialize_field("dims", &self.dims)?;
        st.serialize_field("degenerate", &self.degenerate)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("unit", &self.unit)?;
        st.serialize_field("cov", &linalg::to_rows(&self.cov))?;
        st.end()
    }
}

/// Build the extractor with `Sigma_T = I`, `Sigma_{T,source} = V^T` and the
/// remaining cross blocks fixed by the Markov relation
/// `Sigma_{T,rest} = Sigma_{T,source} Sigma_{source,rest}`.
pub fn optimal_extractor(g: &GaussianJoint, definition: Definition, unit: InfoUnit) -> Result<GaussianExtractor> {
    let (white, _) = whiten(g);
    let cf = closed_form_white(&white, definition)?;
    let t = cf.kernel.dim();
    let [dm, dx, dy] = white.dims();
    let n = t + dm + dx + dy;
    let mut cov = DMatrix::zeros(n, n);
    cov.view_mut((t, t), (n - t, n - t)).copy_from(white.cov());
    for k in 0..t {
        cov[(k, k)] = 1.0;
    }
    let source = definition.source();
    let vt = cf.kernel.basis.transpose();
    for role in Role::ALL {
        let cross = if role == source { vt.clone() } else { &vt * white.block(source, role) };
        let offset = t + white.offset(role);
        cov.view_mut((0, offset), cross.shape()).copy_from(&cross);
        cov.view_mut((offset, 0), (cross.ncols(), cross.nrows())).copy_from(&cross.transpose());
    }
    Ok(GaussianExtractor {
        definition,
        dims: [t, dm, dx, dy],
        cov,
        degenerate: t == 0,
        value: unit.from_nats(cf.nats),
        unit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian_ui::numeric_ui_verify;

    fn scalar(cov: [[f64; 3]; 3]) -> GaussianJoint {
        let flat: Vec<f64> = cov.iter().flatten().copied().collect();
        GaussianJoint::new([1, 1, 1], DMatrix::from_row_slice(3, 3, &flat)).unwrap()
    }

    #[test]
    fn independent_protected_variable_extracts_message() {
        let g = scalar([[1.0, 0.6, 0.0], [0.6, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let e = optimal_extractor(&g, Definition::Tmxy, InfoUnit::Bits).unwrap();
        assert!(!e.degenerate);
        assert_eq!(e.cov[(0, 1)], 1.0);
        let got = e.extracted_information().unwrap();
        assert!((got - e.value).abs() < 1e-9);
        assert!((got - 0.3219).abs() < 1e-4);
    }

    #[test]
    fn counterexample_has_no_extractor() {
        let g = scalar([[1.0, 0.6, 0.3], [0.6, 1.0, 0.0], [0.3, 0.0, 1.0]]);
        let e = optimal_extractor(&g, Definition::Tmxy, InfoUnit::Bits).unwrap();
        assert!(e.degenerate);
        assert_eq!(e.dims[0], 0);
        assert_eq!(e.extracted_information().unwrap(), 0.0);
    }

    #[test]
    fn two_dimensional_message() {
        // White M in R^2, Sigma_YM = [1 0] up to scale, Sigma_MX = [0.3; 0.5].
        let cov = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.0, 0.3, 0.7, //
                0.0, 1.0, 0.5, 0.0, //
                0.3, 0.5, 1.0, 0.21, //
                0.7, 0.0, 0.21, 1.0,
            ],
        );
        let g = GaussianJoint::new([2, 1, 1], cov).unwrap();
        let e = optimal_extractor(&g, Definition::Tmxy, InfoUnit::Nats).unwrap();
        assert_eq!(e.dims[0], 1);
        assert!((e.cov[(0, 1)]).abs() < 1e-15);
        assert!((e.cov[(0, 2)] - 1.0).abs() < 1e-15);
        let expected = -0.5 * (1.0f64 - 0.25).ln();
        assert!((e.extracted_information().unwrap() - expected).abs() < 1e-12);
        let numeric = numeric_ui_verify(&g, Definition::Tmxy, 8, 3).unwrap();
        assert!((numeric.numeric_nats - expected).abs() < 1e-6);
        assert!(e.markov_check(1e-9).holds);
        assert!(e.protected_cross_norm() < 1e-12);
        assert!(e.min_relative_eigenvalue() > -1e-10);
    }
}
