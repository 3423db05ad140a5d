//! Seeded random instances for the suites.

use nalgebra::DMatrix;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::prob::{DiscreteJoint, GaussianJoint};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_matrix(rng: &mut SuiteRng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// Haar-distributed orthogonal matrix.
pub fn random_orthogonal(rng: &mut SuiteRng, n: usize) -> DMatrix<f64> {
    let qr = normal_matrix(rng, n, n).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Rescale a positive definite matrix to unit diagonal.
fn to_correlation(c: &DMatrix<f64>) -> DMatrix<f64> {
    let n = c.nrows();
    let d: Vec<f64> = (0..n).map(|i| c[(i, i)].sqrt()).collect();
    let mut out = DMatrix::identity(n, n);
    for i in 0..n {
        for j in 0..i {
            let v = c[(i, j)] / (d[i] * d[j]);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

/// `G G^T + 1e-6 I` for square standard normal `G`, scaled to unit diagonal.
pub fn random_covariance(rng: &mut SuiteRng, dims: [usize; 3]) -> GaussianJoint {
    let n: usize = dims.iter().sum();
    let g = normal_matrix(rng, n, n);
    let c = &g * g.transpose() + DMatrix::identity(n, n) * 1e-6;
    GaussianJoint::new(dims, to_correlation(&c)).expect("generated covariance is valid")
}

/// A full-rank covariance on fewer coordinates whose blocks are then lifted
/// by thin random maps, so every block of size above one is singular.
pub fn random_low_rank_covariance(rng: &mut SuiteRng, dims: [usize; 3]) -> GaussianJoint {
    let inner = dims.map(|d| d.div_ceil(2));
    let base = random_covariance(rng, inner);
    let n: usize = dims.iter().sum();
    let mut lift = DMatrix::zeros(n, inner.iter().sum());
    let (mut r, mut c) = (0, 0);
    for (d, k) in dims.iter().zip(inner) {
        lift.view_mut((r, c), (*d, k)).copy_from(&normal_matrix(rng, *d, k));
        r += d;
        c += k;
    }
    let cov = &lift * base.cov() * lift.transpose();
    GaussianJoint::new(dims, to_correlation(&cov)).expect("lifted covariance is valid")
}

pub fn random_dims(rng: &mut SuiteRng, max: [usize; 3]) -> [usize; 3] {
    max.map(|m| rng.random_range(1..=m.max(1)))
}

/// Exponentials of standard normals, normalized.
pub fn random_discrete(rng: &mut SuiteRng, sizes: [usize; 3]) -> DiscreteJoint {
    let n: usize = sizes.iter().product();
    let w: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).map(|z: f64| z.exp()).collect();
    from_weights(sizes, w)
}

/// As [`random_discrete`] with each atom zeroed with probability 0.3.
pub fn random_sparse_discrete(rng: &mut SuiteRng, sizes: [usize; 3]) -> DiscreteJoint {
    let n: usize = sizes.iter().product();
    let mut w: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).map(|z: f64| z.exp()).collect();
    for v in w.iter_mut() {
        if rng.random::<f64>() < 0.3 {
            *v = 0.0;
        }
    }
    if w.iter().all(|&v| v == 0.0) {
        w[rng.random_range(0..n)] = 1.0;
    }
    from_weights(sizes, w)
}

fn from_weights(sizes: [usize; 3], w: Vec<f64>) -> DiscreteJoint {
    let total: f64 = w.iter().sum();
    let [_, b, c] = sizes;
    DiscreteJoint::from_fn(sizes, |m, x, y| w[(m * b + x) * c + y] / total).expect("normalized weights")
}

pub fn random_sizes(rng: &mut SuiteRng, max: usize) -> [usize; 3] {
    std::array::from_fn(|_| rng.random_range(1..=max))
}

/// Chain `X - Y - Z` with binary `Y`, `Z`, read on axes `(X, Y, Z)`.
///
/// `p(y = 1 | x)` is a constant plus a perturbation of size `delta`, drawn
/// from `{0, 1e-7, 1e-6, 1e-5}` or uniformly up to 0.3; the two rows of
/// `p(z | y)` differ by at least 0.1.
pub fn binary_chain(rng: &mut SuiteRng) -> DiscreteJoint {
    let nx = rng.random_range(2..=4usize);
    let px: Vec<f64> = (0..nx).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = px.iter().sum();
    let delta = match rng.random_range(0..5u8) {
        0 => 0.0,
        1 => 1e-7,
        2 => 1e-6,
        3 => 1e-5,
        _ => rng.random_range(0.0..0.3),
    };
    let base = rng.random_range(0.35..0.65);
    let py1: Vec<f64> = (0..nx).map(|_| base + delta * rng.random_range(-1.0..1.0)).collect();
    let (a, b) = loop {
        let (a, b): (f64, f64) = (rng.random(), rng.random());
        if (a - b).abs() >= 0.1 {
            break (a, b);
        }
    };
    let pz1 = [a, b];
    DiscreteJoint::from_fn([nx, 2, 2], |x, y, z| {
        let p_y = if y == 1 { py1[x] } else { 1.0 - py1[x] };
        let p_z = if z == 1 { pz1[y] } else { 1.0 - pz1[y] };
        px[x] / total * p_y * p_z
    })
    .expect("chain probabilities are normalized")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigen_range;

    #[test]
    fn covariances_are_unit_diagonal_and_deterministic() {
        let a = random_covariance(&mut rng(5), [2, 3, 1]);
        assert_eq!(a, random_covariance(&mut rng(5), [2, 3, 1]));
        assert!(a.cov().diagonal().iter().all(|&d| d == 1.0));
        assert!(eigen_range(a.cov()).0 > 0.0);
    }

    #[test]
    fn low_rank_blocks_are_singular() {
        let g = random_low_rank_covariance(&mut rng(1), [3, 2, 1]);
        let (lo, _) = eigen_range(&g.block(crate::prob::Role::M, crate::prob::Role::M));
        assert!(lo.abs() < 1e-10);
    }

    #[test]
    fn orthogonal() {
        let q = random_orthogonal(&mut rng(2), 4);
        assert!((q.transpose() * &q - DMatrix::identity(4, 4)).amax() < 1e-12);
    }

    #[test]
    fn sparse_joints_keep_mass() {
        for s in 0..20 {
            let j = random_sparse_discrete(&mut rng(s), [2, 2, 2]);
            assert!((j.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
