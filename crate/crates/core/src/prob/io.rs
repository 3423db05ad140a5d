//! JSON input formats.
//!
//! Discrete: `{"variables": {"M": [..], "X": [..], "Y": [..]}, "p": [[[..]]]}`
//! with `p` indexed `[m][x][y]`.
//!
//! Gaussian: `{"dims": {"M": dm, "X": dx, "Y": dy}, "cov": [..]}` with `cov`
//! the row-major covariance of `[M; X; Y]`. Any mean vector in the file is
//! ignored; all Gaussian quantities here are mean-free.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{DiscreteJoint, GaussianJoint, Role};
use crate::error::{Error, Result};

/// Tolerance on total probability mass accepted from files.
pub const FILE_MASS_TOL: f64 = 1e-6;
/// Relative symmetry and PSD tolerance accepted from files.
pub const FILE_MATRIX_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Symbol {
    Text(String),
    Integer(i64),
    Real(f64),
    Flag(bool),
}

impl Symbol {
    fn label(&self) -> String {
        match self {
            Symbol::Text(s) => s.clone(),
            Symbol::Integer(i) => i.to_string(),
            Symbol::Real(r) => r.to_string(),
            Symbol::Flag(b) => b.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerRole<T> {
    #[serde(rename = "M")]
    pub m: T,
    #[serde(rename = "X")]
    pub x: T,
    #[serde(rename = "Y")]
    pub y: T,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteFile {
    pub variables: PerRole<Vec<Symbol>>,
    pub p: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianFile {
    pub dims: PerRole<usize>,
    pub cov: Vec<f64>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("{e}"))
}

impl DiscreteFile {
    pub fn into_joint(self) -> Result<DiscreteJoint> {
        let alphabets = [self.variables.m, self.variables.x, self.variables.y]
            .map(|v| v.iter().map(Symbol::label).collect::<Vec<_>>());
        let [nm, nx, ny] = [alphabets[0].len(), alphabets[1].len(), alphabets[2].len()];
        if self.p.len() != nm {
            return Err(Error::Parse(format!("field p has {} entries, M has {nm} symbols", self.p.len())));
        }
        let mut probs = Vec::with_capacity(nm * nx * ny);
        for (i, plane) in self.p.iter().enumerate() {
            if plane.len() != nx {
                return Err(Error::Parse(format!("field p[{i}] has {} entries, X has {nx} symbols", plane.len())));
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != ny {
                    return Err(Error::Parse(format!(
                        "field p[{i}][{j}] has {} entries, Y has {ny} symbols",
                        row.len()
                    )));
                }
                probs.extend_from_slice(row);
            }
        }
        if let Some(k) = probs.iter().position(|v| *v < 0.0 || !v.is_finite()) {
            return Err(Error::Validation(format!(
                "field p[{}][{}][{}] = {} is not a probability",
                k / (nx * ny),
                (k / ny) % nx,
                k % ny,
                probs[k]
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > FILE_MASS_TOL {
            return Err(Error::Validation(format!("probabilities sum to {total}, not 1")));
        }
        probs.iter_mut().for_each(|v| *v /= total);
        DiscreteJoint::new(alphabets, probs)
    }

    pub fn from_joint(joint: &DiscreteJoint) -> Self {
        let [nm, nx, ny] = joint.shape();
        let labels = |r: Role| joint.alphabet(r).iter().cloned().map(Symbol::Text).collect();
        Self {
            variables: PerRole { m: labels(Role::M), x: labels(Role::X), y: labels(Role::Y) },
            p: (0..nm)
                .map(|m| (0..nx).map(|x| (0..ny).map(|y| joint.get(m, x, y)).collect()).collect())
                .collect(),
        }
    }
}

impl GaussianFile {
    pub fn into_joint(self) -> Result<GaussianJoint> {
        let dims = [self.dims.m, self.dims.x, self.dims.y];
        let n: usize = dims.iter().sum();
        if self.cov.len() != n * n {
            return Err(Error::Parse(format!(
                "field cov has {} entries, dims require {}",
                self.cov.len(),
                n * n
            )));
        }
        let cov = DMatrix::from_row_slice(n, n, &self.cov);
        GaussianJoint::with_tolerances(dims, cov, FILE_MATRIX_TOL, FILE_MATRIX_TOL)
    }

    pub fn from_joint(g: &GaussianJoint) -> Self {
        let [m, x, y] = g.dims();
        let cov = g.cov();
        let n = cov.nrows();
        Self {
            dims: PerRole { m, x, y },
            cov: (0..n).flat_map(|i| (0..n).map(move |j| cov[(i, j)])).collect(),
        }
    }
}

pub fn parse_discrete(text: &str) -> Result<DiscreteJoint> {
    serde_json::from_str::<DiscreteFile>(text).map_err(json_error)?.into_joint()
}

pub fn parse_gaussian(text: &str) -> Result<GaussianJoint> {
    serde_json::from_str::<GaussianFile>(text).map_err(json_error)?.into_joint()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn read_discrete(path: &Path) -> Result<DiscreteJoint> {
    parse_discrete(&read(path)?)
}

pub fn read_gaussian(path: &Path) -> Result<GaussianJoint> {
    parse_gaussian(&read(path)?)
}
