use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;

/// Column-stochastic matrix `p(t | s)`: rows index `T`, columns the source.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    probs: DMatrix<f64>,
}

impl Channel {
    pub const COLUMN_TOL: f64 = 1e-12;

    pub fn new(probs: DMatrix<f64>) -> Result<Self> {
        if probs.nrows() == 0 || probs.ncols() == 0 {
            return Err(Error::Validation("channel must have at least one row and column".into()));
        }
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Validation("channel entries must lie in [0, 1]".into()));
        }
        for (j, col) in probs.column_iter().enumerate() {
            let total = col.sum();
            if (total - 1.0).abs() > Self::COLUMN_TOL {
                return Err(Error::Validation(format!("channel column {j} sums to {total}")));
            }
        }
        Ok(Self { probs })
    }

    /// Every source symbol goes to `T = 0`.
    pub fn constant(t_size: usize, source_size: usize) -> Self {
        let mut probs = DMatrix::zeros(t_size.max(1), source_size);
        probs.row_mut(0).fill(1.0);
        Self { probs }
    }

    pub fn t_size(&self) -> usize {
        self.probs.nrows()
    }

    pub fn source_size(&self) -> usize {
        self.probs.ncols()
    }

    pub fn probs(&self) -> &DMatrix<f64> {
        &self.probs
    }

    pub fn get(&self, t: usize, s: usize) -> f64 {
        self.probs[(t, s)]
    }

    pub fn row_major(&self) -> Vec<f64> {
        linalg::to_rows(&self.probs).concat()
    }

    /// Order used to break ties between equally good channels.
    pub fn lex_cmp(&self, other: &Channel) -> std::cmp::Ordering {
        let (a, b) = (self.row_major(), other.row_major());
        a.iter()
            .zip(&b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| a.len().cmp(&b.len()))
    }
}

impl Serialize for Channel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        linalg::to_rows(&self.probs).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Channel::new(DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 0.5, 0.0])).is_ok());
        assert!(Channel::new(DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 0.4, 0.0])).is_err());
        assert!(Channel::new(DMatrix::from_row_slice(1, 1, &[1.5])).is_err());
        let c = Channel::constant(3, 2);
        assert_eq!(c.row_major(), vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }
}
