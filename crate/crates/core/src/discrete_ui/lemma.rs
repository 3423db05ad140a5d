use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::{cmi_nats, mi_nats, DiscreteJoint, Role};
use crate::units::InfoUnit;

/// Independence pattern of a chain `X - Y - Z` with binary `Y` and `Z`.
/// Mutual informations are in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaB1Report {
    pub mi_xz: f64,
    pub mi_yz: f64,
    pub mi_xy: f64,
    /// `I(X; Z | Y)`, zero for an exact chain.
    pub chain_residual: f64,
    pub x_indep_z: bool,
    pub y_indep_z: bool,
    pub x_indep_y: bool,
    /// `X ⟂ Z` and `Y` not independent of `Z`.
    pub hypothesis: bool,
    /// The implication `hypothesis => X ⟂ Y`.
    pub holds: bool,
}

/// Check that independence of `X` and `Z` propagates back to `Y` along a
/// binary chain. The joint's axes are read as `(X, Y, Z)`; independence
/// means mutual information at most `tol` bits.
pub fn lemma_b1_verify(joint: &DiscreteJoint, tol: f64) -> Result<LemmaB1Report> {
    let (x, y, z) = (Role::M, Role::X, Role::Y);
    let shape = joint.shape();
    if shape[1] != 2 || shape[2] != 2 {
        return Err(Error::Usage(format!(
            "middle and last variables must be binary, got alphabets of size {} and {}",
            shape[1], shape[2]
        )));
    }
    let bits = |v: f64| InfoUnit::Bits.from_nats(v);
    let chain_residual = bits(cmi_nats(joint, &[x], &[z], &[y])?);
    if chain_residual > tol {
        return Err(Error::Usage(format!("not a Markov chain: I(X;Z|Y) = {chain_residual:e} bits")));
    }
    let mi_xz = bits(mi_nats(joint, &[x], &[z])?);
    let mi_yz = bits(mi_nats(joint, &[y], &[z])?);
    let mi_xy = bits(mi_nats(joint, &[x], &[y])?);
    let (x_indep_z, y_indep_z, x_indep_y) = (mi_xz <= tol, mi_yz <= tol, mi_xy <= tol);
    let hypothesis = x_indep_z && !y_indep_z;
    Ok(LemmaB1Report {
        mi_xz,
        mi_yz,
        mi_xy,
        chain_residual,
        x_indep_z,
        y_indep_z,
        x_indep_y,
        hypothesis,
        holds: !hypothesis || x_indep_y,
    })
}
