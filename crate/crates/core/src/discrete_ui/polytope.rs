use nalgebra::{DMatrix, DVector};

use super::channel::Channel;
use crate::definition::Definition;
use crate::error::{Error, Result};
use crate::prob::{table_mutual_information, DiscreteJoint, Role};

/// Independence coefficients this small are round-off of exact zeros.
const ROUNDOFF_SNAP: f64 = 1e-14;

/// Channels `p(t | source)` with `T ⟂ Y`, written as `A q = b, q >= 0`
/// over the entries `q[t * s + j]` (row-major in the channel, support
/// symbols of the source only). Upper bounds are implied by the column
/// sums.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPolytope {
    pub definition: Definition,
    pub t_card: usize,
    /// Size of the full source alphabet.
    pub source_size: usize,
    /// Source symbols with positive mass; the channel is only free on these.
    pub source_support: Vec<usize>,
    /// `p(s)` on the support.
    pub source_marginal: Vec<f64>,
    /// `p(s, y)` on the support, `Y` restricted to its support.
    pub source_protected: DMatrix<f64>,
    /// `p(y)` on the support.
    pub protected_marginal: Vec<f64>,
    /// `p(s, target)` on the source support, full target alphabet.
    pub source_target: DMatrix<f64>,
    pub a_eq: DMatrix<f64>,
    pub b_eq: DVector<f64>,
}

impl ChannelPolytope {
    pub fn n_vars(&self) -> usize {
        self.t_card * self.source_support.len()
    }

    /// Number of stochasticity rows followed by independence rows.
    pub fn row_counts(&self) -> (usize, usize) {
        let s = self.source_support.len();
        (s, self.a_eq.nrows() - s)
    }

    /// Expand a solution vector to a channel on the full source alphabet;
    /// zero-mass symbols are sent to `T = 0`.
    pub fn channel_from(&self, q: &[f64]) -> Channel {
        let s = self.source_support.len();
        let mut probs = DMatrix::zeros(self.t_card, self.source_size);
        probs.row_mut(0).fill(1.0);
        for (j, &col) in self.source_support.iter().enumerate() {
            let mut column: Vec<f64> = (0..self.t_card).map(|t| q[t * s + j].max(0.0)).collect();
            let total: f64 = column.iter().sum();
            column.iter_mut().for_each(|v| *v /= total);
            for (t, v) in column.into_iter().enumerate() {
                probs[(t, col)] = v;
            }
        }
        Channel::new(probs).expect("renormalized columns are stochastic")
    }

    /// Solution vector of a channel over the full alphabet.
    pub fn vector_of(&self, channel: &Channel) -> Vec<f64> {
        let s = self.source_support.len();
        let mut q = vec![0.0; self.n_vars()];
        for t in 0..self.t_card {
            for (j, &col) in self.source_support.iter().enumerate() {
                q[t * s + j] = channel.get(t, col);
            }
        }
        q
    }

    /// `max |A q - b|`.
    pub fn equality_residual(&self, q: &[f64]) -> f64 {
        let q = DVector::from_column_slice(q);
        (&self.a_eq * q - &self.b_eq).amax()
    }

    /// `max_{t,y} |p(t, y) - p(t) p(y)|`.
    pub fn independence_residual(&self, channel: &Channel) -> f64 {
        let mut worst = 0.0f64;
        for t in 0..channel.t_size() {
            let pt: f64 = self
                .source_support
                .iter()
                .enumerate()
                .map(|(j, &col)| channel.get(t, col) * self.source_marginal[j])
                .sum();
            for (k, &py) in self.protected_marginal.iter().enumerate() {
                let pty: f64 = self
                    .source_support
                    .iter()
                    .enumerate()
                    .map(|(j, &col)| channel.get(t, col) * self.source_protected[(j, k)])
                    .sum();
                worst = worst.max((pty - pt * py).abs());
            }
        }
        worst
    }

    /// Objective in nats: `I(T; X)` (TMXY) or `I(T; M)` (MYXT).
    pub fn objective_nats(&self, channel: &Channel) -> f64 {
        let table = DMatrix::from_fn(channel.t_size(), self.source_target.ncols(), |t, x| {
            self.source_support
                .iter()
                .enumerate()
                .map(|(j, &col)| channel.get(t, col) * self.source_target[(j, x)])
                .sum()
        });
        table_mutual_information(&table)
    }
}

/// Linear description of the feasible extractors for `definition`.
pub fn build_polytope(joint: &DiscreteJoint, definition: Definition, t_card: usize) -> Result<ChannelPolytope> {
    if t_card == 0 {
        return Err(Error::Usage("t_card must be at least 1".into()));
    }
    let (source, target) = (definition.source(), definition.target());
    let source_support = joint.support(source);
    let y_support = joint.support(Role::Y);
    let marginal = joint.marginal(&[source]);
    let sy = joint.pair_table(source, Role::Y);
    let st = joint.pair_table(source, target);
    let y_marginal = joint.marginal(&[Role::Y]);

    let source_marginal: Vec<f64> = source_support.iter().map(|&j| marginal[j]).collect();
    let protected_marginal: Vec<f64> = y_support.iter().map(|&k| y_marginal[k]).collect();
    let source_protected = DMatrix::from_fn(source_support.len(), y_support.len(), |j, k| {
        sy[(source_support[j], y_support[k])]
    });
    let source_target = DMatrix::from_fn(source_support.len(), st.ncols(), |j, x| st[(source_support[j], x)]);

    let s = source_support.len();
    let n = t_card * s;
    // One y per t is dropped: the rows for a fixed t sum to zero over y.
    let independence_rows = t_card * y_support.len().saturating_sub(1);
    let mut a_eq = DMatrix::zeros(s + independence_rows, n);
    let mut b_eq = DVector::zeros(s + independence_rows);
    for j in 0..s {
        for t in 0..t_card {
            a_eq[(j, t * s + j)] = 1.0;
        }
        b_eq[j] = 1.0;
    }
    let mut row = s;
    for t in 0..t_card {
        for k in 0..y_support.len().saturating_sub(1) {
            for j in 0..s {
                let c = source_protected[(j, k)] - source_marginal[j] * protected_marginal[k];
                a_eq[(row, t * s + j)] = if c.abs() <= ROUNDOFF_SNAP { 0.0 } else { c };
            }
            row += 1;
        }
    }

    Ok(ChannelPolytope {
        definition,
        t_card,
        source_size: joint.shape()[source.axis()],
        source_support,
        source_marginal,
        source_protected,
        protected_marginal,
        source_target,
        a_eq,
        b_eq,
    })
}
