use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Unit of an information quantity. Everything is computed in nats and
/// converted only when a value leaves the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum InfoUnit {
    #[default]
    Bits,
    Nats,
}

impl InfoUnit {
    /// Convert a value in nats into this unit.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            InfoUnit::Bits => nats / std::f64::consts::LN_2,
            InfoUnit::Nats => nats,
        }
    }

    /// Convert a value expressed in this unit into nats.
    pub fn to_nats(self, value: f64) -> f64 {
        match self {
            InfoUnit::Bits => value * std::f64::consts::LN_2,
            InfoUnit::Nats => value,
        }
    }
}

impl fmt::Display for InfoUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfoUnit::Bits => "bits",
            InfoUnit::Nats => "nats",
        })
    }
}

impl FromStr for InfoUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bits" | "bit" => Ok(InfoUnit::Bits),
            "nats" | "nat" => Ok(InfoUnit::Nats),
            other => Err(Error::Usage(format!("unknown unit {other:?} (expected bits or nats)"))),
        }
    }
}
