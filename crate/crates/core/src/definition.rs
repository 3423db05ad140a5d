use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::prob::Role;

/// Which Markov structure the extractor `T` obeys.
///
/// * `Tmxy`: `T - M - (X, Y)`, `T` independent of `Y`, objective `I(T; X)`.
/// * `Myxt`: `(M, Y) - X - T`, `T` independent of `Y`, objective `I(T; M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Definition {
    #[default]
    #[serde(rename = "TMXY")]
    Tmxy,
    #[serde(rename = "MYXT")]
    Myxt,
}

impl Definition {
    pub const ALL: [Definition; 2] = [Definition::Tmxy, Definition::Myxt];

    /// The variable the extractor is a stochastic function of.
    pub fn source(self) -> Role {
        match self {
            Definition::Tmxy => Role::M,
            Definition::Myxt => Role::X,
        }
    }

    /// The variable whose information the extractor should carry.
    pub fn target(self) -> Role {
        match self {
            Definition::Tmxy => Role::X,
            Definition::Myxt => Role::M,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Definition::Tmxy => "TMXY",
            Definition::Myxt => "MYXT",
        }
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Definition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tmxy" => Ok(Definition::Tmxy),
            "myxt" => Ok(Definition::Myxt),
            other => Err(Error::Usage(format!(
                "unknown definition {other:?} (expected tmxy or myxt)"
            ))),
        }
    }
}
