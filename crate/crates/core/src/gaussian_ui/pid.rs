use serde::Serialize;

use super::closed_form::{ui_gaussian, GaussianUiResult};
use crate::definition::Definition;
use crate::error::Result;
use crate::pid::{PidInputs, PidTerms};
use crate::prob::{cov_conditional_mi_nats, cov_mi_nats, GaussianJoint, Role};
use crate::units::InfoUnit;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianPid {
    pub terms: PidTerms,
    pub ui_x: GaussianUiResult,
    /// Computed on the joint with `X` and `Y` exchanged.
    pub ui_y: GaussianUiResult,
}

/// Unsymmetrized decomposition with both unique terms from `definition`.
pub fn pid_terms_gaussian(g: &GaussianJoint, definition: Definition, unit: InfoUnit) -> Result<GaussianPid> {
    use Role::{M, X, Y};
    let ui_x = ui_gaussian(g, definition, unit)?;
    let ui_y = ui_gaussian(&g.swap_roles(X, Y), definition, unit)?;
    let cov = g.cov();
    let (m, x, y) = (g.indices(&[M]), g.indices(&[X]), g.indices(&[Y]));
    let inputs = PidInputs {
        i_mx: cov_mi_nats(cov, &m, &x)?,
        i_my: cov_mi_nats(cov, &m, &y)?,
        i_mx_given_y: cov_conditional_mi_nats(cov, &m, &x, &y)?,
        i_my_given_x: cov_conditional_mi_nats(cov, &m, &y, &x)?,
        i_m_xy: cov_mi_nats(cov, &m, &g.indices(&[X, Y]))?,
        ui_x: ui_x.nats(),
        ui_y: ui_y.nats(),
    };
    Ok(GaussianPid { terms: PidTerms::from_nats(inputs, unit)?, ui_x, ui_y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian_ui::counterexample_family;
    use nalgebra::DMatrix;

    #[test]
    fn counterexample_redundancy_is_asymmetric() {
        let g = counterexample_family(Definition::Tmxy, (0.6, 0.3)).unwrap();
        let t = pid_terms_gaussian(&g, Definition::Tmxy, InfoUnit::Bits).unwrap().terms;
        assert_eq!((t.ui_x, t.ui_y), (0.0, 0.0));
        let rx = -0.5 * (1.0f64 - 0.36).log2();
        let ry = -0.5 * (1.0f64 - 0.09).log2();
        assert!((t.r_x - rx).abs() < 1e-12 && (t.r_y - ry).abs() < 1e-12);
        assert!((t.r_x - 0.3219).abs() < 1e-4 && (t.r_y - 0.0680).abs() < 1e-4);
        let (a, b) = t.sum_residuals();
        assert!(a.abs() < 1e-12 && b.abs() < 1e-12);
    }

    #[test]
    fn identity_covariance_is_all_zero() {
        let g = GaussianJoint::new([2, 1, 1], DMatrix::identity(4, 4)).unwrap();
        let t = pid_terms_gaussian(&g, Definition::Myxt, InfoUnit::Bits).unwrap().terms;
        assert!(t.named().iter().all(|(_, v)| *v == 0.0));
    }

    #[test]
    fn independent_protected_variable() {
        let g = counterexample_family(Definition::Tmxy, (0.6, 0.0)).unwrap();
        let t = pid_terms_gaussian(&g, Definition::Tmxy, InfoUnit::Bits).unwrap().terms;
        assert!((t.ui_x - t.i_mx).abs() < 1e-12);
        assert!(t.r_x.abs() < 1e-12 && t.s_x.abs() < 1e-12);
    }
}
