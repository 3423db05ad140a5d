//! Joint distributions over the three base variables and the information
//! measures computed on them.

mod discrete;
mod gaussian;
pub mod io;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use discrete::{cmi_nats, mi_nats};
pub use discrete::{
    conditional_mutual_information, entropy, mutual_information, table_mutual_information,
    DiscreteJoint,
};
pub use gaussian::{
    canonical_correlations, cov_conditional_mi_nats, cov_mi_nats, gaussian_conditional_mi,
    gaussian_mi, gaussian_mi_report, markov_check_gaussian, markov_residual, whiten, GaussianJoint,
    GaussianMiReport, MarkovCheck, WhitenTransform,
};

/// Role of a base variable: the message `M` and the two sources `X`, `Y`.
/// The role also fixes the axis (discrete) or block (Gaussian) position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    M,
    X,
    Y,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::M, Role::X, Role::Y];

    pub fn axis(self) -> usize {
        match self {
            Role::M => 0,
            Role::X => 1,
            Role::Y => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Role::M => "M",
            Role::X => "X",
            Role::Y => "Y",
        }
    }
}

/// Sorted, deduplicated copy of a role list.
pub(crate) fn normalize(roles: &[Role]) -> Vec<Role> {
    let mut v = roles.to_vec();
    v.sort();
    v.dedup();
    v
}

pub(crate) fn require_nonempty(roles: &[Role], what: &str) -> Result<()> {
    if roles.is_empty() {
        return Err(Error::Usage(format!("{what} must name at least one variable")));
    }
    Ok(())
}

pub(crate) fn require_disjoint(sets: &[&[Role]]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if let Some(r) = a.iter().find(|r| b.contains(r)) {
                return Err(Error::Usage(format!(
                    "variable sets overlap on {}",
                    r.name()
                )));
            }
        }
    }
    Ok(())
}

/// Round-off allowance for quantities that are non-negative in exact arithmetic.
pub const NEGATIVE_CLAMP: f64 = 1e-9;

/// Clamp tiny negative round-off to zero; anything further below zero is a bug.
pub(crate) fn clamp_nonneg(quantity: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -NEGATIVE_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeInformation { quantity, value })
    }
}
