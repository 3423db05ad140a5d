use nalgebra::DMatrix;

use crate::definition::Definition;
use crate::error::{Error, Result};
use crate::prob::GaussianJoint;

pub const DEFAULT_COUNTEREXAMPLE_PARAMS: (f64, f64) = (0.6, 0.3);

/// Scalar families on which the unique information vanishes for both
/// sources while `I(M;X) != I(M;Y)`.
///
/// * TMXY, `(rho_x, rho_y)`: `X` and `Y` independent, `corr(M,X) = rho_x`,
///   `corr(M,Y) = rho_y`.
/// * MYXT, `(rho, eps)`: `corr(X,Y) = rho`, `corr(X,M) = eps`, `M` independent
///   of `Y`.
///
/// Both require `p0^2 + p1^2 < 1`.
pub fn counterexample_family(definition: Definition, params: (f64, f64)) -> Result<GaussianJoint> {
    let (a, b) = params;
    if !(a.is_finite() && b.is_finite()) || a * a + b * b >= 1.0 {
        return Err(Error::Domain(format!(
            "parameters ({a}, {b}) must satisfy p0^2 + p1^2 < 1"
        )));
    }
    // [M; X; Y] block order.
    let cov = match definition {
        Definition::Tmxy => [1.0, a, b, a, 1.0, 0.0, b, 0.0, 1.0],
        Definition::Myxt => [1.0, b, 0.0, b, 1.0, a, 0.0, a, 1.0],
    };
    GaussianJoint::new([1, 1, 1], DMatrix::from_row_slice(3, 3, &cov))
}
