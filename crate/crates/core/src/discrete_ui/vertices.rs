use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::channel::Channel;
use super::polytope::ChannelPolytope;
use super::simplex::{minimize, reduce_system};
use super::FEASIBILITY_TOL;
use crate::error::{Error, Result};

const BASIS_PIVOT_TOL: f64 = 1e-10;

/// Vertices found in a polytope, deduplicated and in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSet {
    pub vertices: Vec<Channel>,
    /// All vertices were found (the limit was not hit).
    pub exhaustive: bool,
    pub bases_tried: usize,
}

/// Solve the `r x r` system in `m` (row-major, augmented with the right-hand
/// side as column `r`) in place by partial pivoting. Returns false when a
/// pivot falls below tolerance.
fn solve_in_place(m: &mut [f64], r: usize) -> bool {
    let w = r + 1;
    for col in 0..r {
        let (p, best) = (col..r)
            .map(|i| (i, m[i * w + col].abs()))
            .fold((col, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if best <= BASIS_PIVOT_TOL {
            return false;
        }
        if p != col {
            for j in 0..w {
                m.swap(p * w + j, col * w + j);
            }
        }
        let pivot = m[col * w + col];
        for i in col + 1..r {
            let f = m[i * w + col] / pivot;
            if f != 0.0 {
                for j in col..w {
                    m[i * w + j] -= f * m[col * w + j];
                }
            }
        }
    }
    for i in (0..r).rev() {
        let mut v = m[i * w + r];
        for j in i + 1..r {
            v -= m[i * w + j] * m[j * w + r];
        }
        m[i * w + r] = v / m[i * w + i];
    }
    true
}

fn push_unique(found: &mut Vec<Vec<f64>>, q: Vec<f64>) -> bool {
    let dup = found
        .iter()
        .any(|v| v.iter().zip(&q).all(|(a, b)| (a - b).abs() <= FEASIBILITY_TOL));
    if !dup {
        found.push(q);
    }
    !dup
}

fn sorted_channels(p: &ChannelPolytope, found: &[Vec<f64>]) -> Vec<Channel> {
    let mut channels: Vec<Channel> = found.iter().map(|q| p.channel_from(q)).collect();
    channels.sort_by(|a, b| a.lex_cmp(b));
    channels
}

/// Every basic feasible solution of the polytope, by trying each choice of
/// basis columns. Refuses polytopes with more than `cap` variables; stops
/// early (non-exhaustive) once `limit` vertices are found.
pub fn enumerate_vertices(p: &ChannelPolytope, limit: usize, cap: usize) -> Result<VertexSet> {
    let n = p.n_vars();
    if n > cap {
        return Err(Error::EnumerationCap { vars: n, cap });
    }
    let (a, b) = reduce_system(&p.a_eq, &p.b_eq)?;
    let r = a.nrows();
    let mut found: Vec<Vec<f64>> = Vec::new();
    let mut bases_tried = 0;
    let mut exhaustive = true;
    let mut buffer = vec![0.0; r * (r + 1)];
    let mut combo: Vec<usize> = (0..r).collect();

    'outer: loop {
        bases_tried += 1;
        for i in 0..r {
            for (k, &col) in combo.iter().enumerate() {
                buffer[i * (r + 1) + k] = a[(i, col)];
            }
            buffer[i * (r + 1) + r] = b[i];
        }
        if solve_in_place(&mut buffer, r) {
            let basic: Vec<f64> = (0..r).map(|i| buffer[i * (r + 1) + r]).collect();
            if basic.iter().all(|&v| v >= -FEASIBILITY_TOL) {
                let mut q = vec![0.0; n];
                for (k, &col) in combo.iter().enumerate() {
                    q[col] = basic[k].max(0.0);
                }
                if p.equality_residual(&q) <= FEASIBILITY_TOL && push_unique(&mut found, q) && found.len() >= limit {
                    exhaustive = false;
                    break 'outer;
                }
            }
        }
        // Next r-combination of 0..n in lexicographic order.
        let mut i = r;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if combo[i] < n - r + i {
                combo[i] += 1;
                for k in i + 1..r {
                    combo[k] = combo[k - 1] + 1;
                }
                break;
            }
        }
        if r == 0 {
            break;
        }
    }
    Ok(VertexSet { vertices: sorted_channels(p, &found), exhaustive, bases_tried })
}

/// Vertices reached by minimizing `n` random linear objectives. The list
/// keeps one entry per objective, in draw order.
pub fn sample_vertices(p: &ChannelPolytope, n: usize, seed: u64) -> Result<Vec<Channel>> {
    if n == 0 {
        return Err(Error::Usage("at least one sample is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let c = DVector::from_fn(p.n_vars(), |_, _| StandardNormal.sample(&mut rng));
        let x = minimize(&p.a_eq, &p.b_eq, &c)?;
        if p.equality_residual(x.as_slice()) > FEASIBILITY_TOL {
            return Err(Error::Internal("simplex returned an infeasible point".into()));
        }
        out.push(p.channel_from(x.as_slice()));
    }
    Ok(out)
}

/// Deduplicate and order a sampled list.
pub(crate) fn distinct(p: &ChannelPolytope, channels: &[Channel]) -> Vec<Channel> {
    let mut found = Vec::new();
    for c in channels {
        push_unique(&mut found, p.vector_of(c));
    }
    sorted_channels(p, &found)
}

#[allow(dead_code)]
fn basis_matrix(a: &DMatrix<f64>, cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), cols.len(), |i, k| a[(i, cols[k])])
}
