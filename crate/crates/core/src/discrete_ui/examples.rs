use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::prob::DiscreteJoint;

/// The four standard two-bit gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CanonicalExample {
    /// `M = X = Y`, a uniform bit.
    Rdn,
    /// `M = (X, Y)` for independent uniform bits.
    Unq,
    /// `M = X xor Y`.
    Xor,
    /// `M = X and Y`.
    And,
}

impl CanonicalExample {
    pub const ALL: [CanonicalExample; 4] =
        [CanonicalExample::Rdn, CanonicalExample::Unq, CanonicalExample::Xor, CanonicalExample::And];

    pub fn name(self) -> &'static str {
        match self {
            CanonicalExample::Rdn => "RDN",
            CanonicalExample::Unq => "UNQ",
            CanonicalExample::Xor => "XOR",
            CanonicalExample::And => "AND",
        }
    }

    /// Expected `(UI_X, UI_Y, R, S)` in bits as usually quoted, rounded to
    /// three decimals.
    pub fn reference_values(self) -> [f64; 4] {
        match self {
            CanonicalExample::Rdn => [0.0, 0.0, 1.0, 0.0],
            CanonicalExample::Unq => [1.0, 1.0, 0.0, 0.0],
            CanonicalExample::Xor => [0.0, 0.0, 0.0, 1.0],
            CanonicalExample::And => [0.0, 0.0, 0.311, 0.5],
        }
    }
}

impl fmt::Display for CanonicalExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CanonicalExample {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rdn" => Ok(CanonicalExample::Rdn),
            "unq" => Ok(CanonicalExample::Unq),
            "xor" => Ok(CanonicalExample::Xor),
            "and" => Ok(CanonicalExample::And),
            other => Err(Error::Usage(format!("unknown example {other:?} (expected rdn, unq, xor or and)"))),
        }
    }
}

fn bits() -> Vec<String> {
    vec!["0".into(), "1".into()]
}

/// Build the joint law of an example with exact dyadic probabilities.
pub fn canonical_example(which: CanonicalExample) -> DiscreteJoint {
    let joint = match which {
        CanonicalExample::Rdn => DiscreteJoint::new(
            [bits(), bits(), bits()],
            (0..8).map(|i| if i == 0 || i == 7 { 0.5 } else { 0.0 }).collect(),
        ),
        CanonicalExample::Unq => {
            let m: Vec<String> = ["00", "01", "10", "11"].iter().map(|s| s.to_string()).collect();
            let mut probs = vec![0.0; 16];
            for x in 0..2 {
                for y in 0..2 {
                    probs[(2 * x + y) * 4 + 2 * x + y] = 0.25;
                }
            }
            DiscreteJoint::new([m, bits(), bits()], probs)
        }
        CanonicalExample::Xor => gate(|x, y| x ^ y),
        CanonicalExample::And => gate(|x, y| x & y),
    };
    joint.expect("canonical examples are valid")
}

fn gate(f: fn(usize, usize) -> usize) -> crate::error::Result<DiscreteJoint> {
    DiscreteJoint::from_fn([2, 2, 2], |m, x, y| if f(x, y) == m { 0.25 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{entropy, Role};
    use crate::units::InfoUnit;

    fn atoms(j: &DiscreteJoint) -> Vec<f64> {
        j.probs().iter().copied().filter(|&p| p > 0.0).collect()
    }

    #[test]
    fn supports() {
        assert_eq!(atoms(&canonical_example(CanonicalExample::Rdn)), vec![0.5, 0.5]);
        let xor = canonical_example(CanonicalExample::Xor);
        assert_eq!(atoms(&xor), vec![0.25; 4]);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(xor.get(x ^ y, x, y), 0.25);
            }
        }
        let and = canonical_example(CanonicalExample::And);
        assert_eq!(and.marginal(&[Role::M]), vec![0.75, 0.25]);
        let unq = canonical_example(CanonicalExample::Unq);
        assert_eq!(unq.shape(), [4, 2, 2]);
        assert_eq!(entropy(&unq, &[Role::M], InfoUnit::Bits).unwrap(), 2.0);
    }

    #[test]
    fn parsing() {
        assert_eq!("AND".parse::<CanonicalExample>().unwrap(), CanonicalExample::And);
        assert!("nand".parse::<CanonicalExample>().is_err());
    }
}
