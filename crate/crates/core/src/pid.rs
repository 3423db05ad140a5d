use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::NEGATIVE_CLAMP;
use crate::units::InfoUnit;

/// Unsymmetrized decomposition terms. Redundancy and synergy are computed
/// once per source, so `r_x` and `r_y` need not agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PidTerms {
    pub unit: InfoUnit,
    pub i_mx: f64,
    pub i_my: f64,
    pub i_mx_given_y: f64,
    pub i_my_given_x: f64,
    /// `I(M; X, Y)`, used for the whole-information consistency check.
    pub i_m_xy: f64,
    pub ui_x: f64,
    pub ui_y: f64,
    pub r_x: f64,
    pub r_y: f64,
    pub s_x: f64,
    pub s_y: f64,
}

/// Information quantities in nats feeding [`PidTerms::from_nats`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidInputs {
    pub i_mx: f64,
    pub i_my: f64,
    pub i_mx_given_y: f64,
    pub i_my_given_x: f64,
    pub i_m_xy: f64,
    pub ui_x: f64,
    pub ui_y: f64,
}

impl PidTerms {
    /// Convert the measured quantities to `unit` first and subtract after,
    /// so `r_x + ui_x == i_mx` (and the other three identities) hold exactly
    /// in the reported unit.
    pub fn from_nats(inputs: PidInputs, unit: InfoUnit) -> Result<Self> {
        let c = |v: f64| unit.from_nats(v);
        let (i_mx, i_my) = (c(inputs.i_mx), c(inputs.i_my));
        let (i_mx_given_y, i_my_given_x) = (c(inputs.i_mx_given_y), c(inputs.i_my_given_x));
        let (ui_x, ui_y) = (c(inputs.ui_x), c(inputs.ui_y));
        let terms = Self {
            unit,
            i_mx,
            i_my,
            i_mx_given_y,
            i_my_given_x,
            i_m_xy: c(inputs.i_m_xy),
            ui_x,
            ui_y,
            r_x: i_mx - ui_x,
            r_y: i_my - ui_y,
            s_x: i_mx_given_y - ui_x,
            s_y: i_my_given_x - ui_y,
        };
        let floor = -unit.from_nats(NEGATIVE_CLAMP);
        for (name, v) in terms.named() {
            if v < floor {
                return Err(Error::NegativeInformation { quantity: name, value: v });
            }
        }
        Ok(terms)
    }

    /// All ten decomposition fields, in declaration order.
    pub fn named(&self) -> [(&'static str, f64); 10] {
        [
            ("I(M;X)", self.i_mx),
            ("I(M;Y)", self.i_my),
            ("I(M;X|Y)", self.i_mx_given_y),
            ("I(M;Y|X)", self.i_my_given_x),
            ("UI_X", self.ui_x),
            ("UI_Y", self.ui_y),
            ("R_X", self.r_x),
            ("R_Y", self.r_y),
            ("S_X", self.s_x),
            ("S_Y", self.s_y),
        ]
    }

    /// Residuals of `I(M;X,Y) = R + UI_X + UI_Y + S` read with each source's
    /// redundancy: `(R_X, S_Y)` and `(R_Y, S_X)`. Both vanish by the chain
    /// rule whenever the four mutual informations are mutually consistent.
    pub fn sum_residuals(&self) -> (f64, f64) {
        (
            self.i_m_xy - (self.r_x + self.ui_x + self.ui_y + self.s_y),
            self.i_m_xy - (self.r_y + self.ui_y + self.ui_x + self.s_x),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_exactly_after_conversion() {
        let inputs = PidInputs {
            i_mx: 0.3,
            i_my: 0.2,
            i_mx_given_y: 0.4,
            i_my_given_x: 0.3,
            i_m_xy: 0.6,
            ui_x: 0.1,
            ui_y: 0.05,
        };
        let t = PidTerms::from_nats(inputs, InfoUnit::Bits).unwrap();
        assert_eq!(t.r_x + t.ui_x, t.i_mx);
        assert_eq!(t.s_y, t.i_my_given_x - t.ui_y);
        let (a, b) = t.sum_residuals();
        assert!(a.abs() < 1e-12 && b.abs() < 1e-12);
    }

    #[test]
    fn rejects_unique_above_mutual() {
        let inputs = PidInputs {
            i_mx: 0.1,
            i_my: 0.0,
            i_mx_given_y: 0.5,
            i_my_given_x: 0.0,
            i_m_xy: 0.5,
            ui_x: 0.2,
            ui_y: 0.0,
        };
        assert!(matches!(
            PidTerms::from_nats(inputs, InfoUnit::Nats),
            Err(Error::NegativeInformation { quantity: "R_X", .. })
        ));
    }
}
