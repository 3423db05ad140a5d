use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::linalg::{self, canonical_sign};

/// Orthonormal basis of the null space of a matrix, one basis vector per column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelBasis {
    #[serde(serialize_with = "serialize_rows")]
    pub basis: DMatrix<f64>,
    pub source_shape: (usize, usize),
    pub rel_tol: f64,
}

fn serialize_rows<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&linalg::to_rows(m), s)
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// Null space of `m`: singular values at or below `rel_tol` times the
/// largest are zero. Each column's first non-negligible entry is positive.
pub fn kernel_basis(m: &DMatrix<f64>, rel_tol: f64) -> KernelBasis {
    kernel_basis_with_floor(m, rel_tol, 0.0)
}

/// As [`kernel_basis`], but the threshold never drops below
/// `rel_tol * floor`. Whitened cross-covariances live on the unit scale, so
/// their kernels are taken with `floor = 1`.
pub(crate) fn kernel_basis_with_floor(m: &DMatrix<f64>, rel_tol: f64, floor: f64) -> KernelBasis {
    let (k, n) = m.shape();
    let done = |basis| KernelBasis { basis, source_shape: (k, n), rel_tol };
    if n == 0 {
        return done(DMatrix::zeros(0, 0));
    }
    let largest = linalg::max_abs(m);
    if k == 0 || largest == 0.0 {
        return done(DMatrix::identity(n, n));
    }

    // Pad to at least n rows so the decomposition returns a full V.
    let padded = if k < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (k, n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sv = &svd.singular_values;
    let sigma_max = sv.iter().copied().fold(0.0f64, f64::max);
    let threshold = rel_tol * sigma_max.max(floor);

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]).then(a.cmp(&b)));
    let columns: Vec<DVector<f64>> = order
        .into_iter()
        .filter(|&i| sv[i] <= threshold)
        .map(|i| {
            let mut v: DVector<f64> = v_t.row(i).transpose();
            canonical_sign(&mut v);
            v
        })
        .collect();
    if columns.is_empty() {
        return done(DMatrix::zeros(n, 0));
    }
    done(DMatrix::from_columns(&columns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let k = kernel_basis(&DMatrix::zeros(2, 3), 1e-10);
        assert_eq!(k.basis, DMatrix::identity(3, 3));
    }

    #[test]
    fn coordinate_kernel() {
        let k = kernel_basis(&DMatrix::from_row_slice(1, 2, &[1.0, 0.0]), 1e-10);
        assert_eq!(k.dim(), 1);
        assert!((k.basis[(0, 0)]).abs() < 1e-15);
        assert!((k.basis[(1, 0)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn full_rank_square_has_empty_kernel() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 1.0]);
        assert_eq!(kernel_basis(&m, 1e-10).dim(), 0);
    }

    #[test]
    fn floor_catches_round_off() {
        let m = DMatrix::from_element(1, 1, 1e-17);
        assert_eq!(kernel_basis(&m, 1e-10).dim(), 0);
        assert_eq!(kernel_basis_with_floor(&m, 1e-10, 1.0).dim(), 1);
    }

    proptest! {
        #[test]
        fn random_wide_matrix(v in prop::collection::vec(-1.0f64..1.0, 8)) {
            let m = DMatrix::from_row_slice(2, 4, &v);
            prop_assume!(linalg::singular_values(&m).last().copied().unwrap_or(0.0) > 1e-3);
            let k = kernel_basis(&m, 1e-10);
            prop_assert_eq!(k.dim(), 2);
            prop_assert!((&m * &k.basis).amax() <= 1e-10 * m.norm());
            let gram = k.basis.transpose() * &k.basis;
            prop_assert!((gram - DMatrix::<f64>::identity(2, 2)).amax() < 1e-10);
            for c in 0..k.dim() {
                let first = k.basis.column(c).iter().copied().find(|x| x.abs() > 1e-12).unwrap();
                prop_assert!(first > 0.0);
            }
        }
    }
}
