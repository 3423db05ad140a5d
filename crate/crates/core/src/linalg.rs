//! Small dense linear-algebra helpers shared by the Gaussian code paths.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Singular values (or PSD eigenvalues) at or below this fraction of the
/// largest one are treated as zero.
pub const RANK_TOL: f64 = 1e-10;

/// Copy the sub-matrix with the given row and column index lists.
pub fn select(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Largest asymmetry `|m_ij - m_ji|` relative to the largest entry.
pub fn relative_asymmetry(m: &DMatrix<f64>) -> f64 {
    let scale = max_abs(m);
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst / scale
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Eigenvalues of a symmetric matrix, smallest and largest.
pub fn eigen_range(m: &DMatrix<f64>) -> (f64, f64) {
    if m.nrows() == 0 {
        return (0.0, 0.0);
    }
    let ev = SymmetricEigen::new(m.clone()).eigenvalues;
    let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Rank-revealing factorization of a PSD block `S = root * root^T`, with
/// `whitener * S * whitener^T = I_rank` and `whitener * root = I_rank`.
#[derive(Debug, Clone)]
pub struct PsdFactor {
    pub whitener: DMatrix<f64>,
    pub root: DMatrix<f64>,
    pub rank: usize,
    pub largest: f64,
}

impl PsdFactor {
    /// Moore-Penrose pseudo-inverse of the factored block.
    pub fn pinv(&self) -> DMatrix<f64> {
        self.whitener.transpose() * &self.whitener
    }
}

/// Factor a symmetric PSD block, dropping eigen-directions at or below
/// `RANK_TOL * scale`. `scale` defaults to the block's own largest
/// eigenvalue; conditional covariances pass the unconditional scale so that
/// round-off left by a Schur complement is not mistaken for signal.
pub fn psd_factor(block: &DMatrix<f64>, scale: Option<f64>) -> PsdFactor {
    let d = block.nrows();
    if d == 0 {
        return PsdFactor {
            whitener: DMatrix::zeros(0, 0),
            root: DMatrix::zeros(0, 0),
            rank: 0,
            largest: 0.0,
        };
    }
    let identity = DMatrix::<f64>::identity(d, d);
    if (block - &identity).amax() <= 1e-12 {
        return PsdFactor {
            whitener: identity.clone(),
            root: identity,
            rank: d,
            largest: 1.0,
        };
    }

    let eig = SymmetricEigen::new(symmetrize(block));
    let largest = eig.eigenvalues.iter().copied().fold(0.0f64, f64::max);
    let threshold = RANK_TOL * scale.unwrap_or(largest).max(largest);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let kept: Vec<usize> = order
        .into_iter()
        .filter(|&k| eig.eigenvalues[k] > threshold && largest > 0.0)
        .collect();

    let rank = kept.len();
    let mut whitener = DMatrix::zeros(rank, d);
    let mut root = DMatrix::zeros(d, rank);
    for (r, &k) in kept.iter().enumerate() {
        let mut v: DVector<f64> = eig.eigenvectors.column(k).into_owned();
        canonical_sign(&mut v);
        let lambda = eig.eigenvalues[k];
        let sqrt = lambda.sqrt();
        for i in 0..d {
            whitener[(r, i)] = v[i] / sqrt;
            root[(i, r)] = v[i] * sqrt;
        }
    }
    PsdFactor { whitener, root, rank, largest }
}

/// Flip `v` so that its first entry of non-negligible magnitude is positive.
pub fn canonical_sign(v: &mut DVector<f64>) {
    if let Some(first) = v.iter().copied().find(|x| x.abs() > 1e-12) {
        if first < 0.0 {
            v.neg_mut();
        }
    }
}

/// Singular values of `m` in descending order; empty for degenerate shapes.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Clip the singular values of `m` into `[0, 1]`, the projection onto the
/// spectral-norm unit ball.
pub fn clip_to_contraction(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return m.clone();
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let clipped = DMatrix::from_diagonal(&svd.singular_values.map(|s| s.clamp(0.0, 1.0)));
    u * clipped * vt
}

/// Row-major nested copy, the layout used in JSON reports.
pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_of_rank_one_block() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let f = psd_factor(&b, None);
        assert_eq!(f.rank, 1);
        let back = &f.root * f.root.transpose();
        assert!((back - &b).amax() < 1e-12);
        let white = &f.whitener * &b * f.whitener.transpose();
        assert!((white[(0, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_block_is_left_alone() {
        let f = psd_factor(&DMatrix::identity(3, 3), None);
        assert_eq!(f.whitener, DMatrix::identity(3, 3));
    }

    #[test]
    fn scale_suppresses_round_off() {
        let b = DMatrix::from_element(1, 1, 1e-17);
        assert_eq!(psd_factor(&b, None).rank, 1);
        assert_eq!(psd_factor(&b, Some(1.0)).rank, 0);
    }

    #[test]
    fn contraction_projection_caps_norm() {
        let m = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 0.5]);
        let p = clip_to_contraction(&m);
        assert!((p[(0, 0)] - 1.0).abs() < 1e-12);
        assert!((p[(1, 1)] - 0.5).abs() < 1e-12);
    }
}
