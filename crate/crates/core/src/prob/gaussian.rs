use nalgebra::DMatrix;
use serde::Serialize;

use super::{clamp_nonneg, normalize, require_disjoint, require_nonempty, Role};
use crate::error::{Error, Result};
use crate::linalg::{self, psd_factor, select};
use crate::units::InfoUnit;

/// Canonical correlations at or above this are treated as exactly one.
pub const UNIT_CORRELATION_TOL: f64 = 1e-12;

/// Zero-mean jointly Gaussian `(M, X, Y)` described by its covariance in
/// `[M; X; Y]` block order.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianJoint {
    dims: [usize; 3],
    cov: DMatrix<f64>,
}

impl GaussianJoint {
    pub const SYMMETRY_TOL: f64 = 1e-12;
    pub const PSD_TOL: f64 = 1e-10;

    pub fn new(dims: [usize; 3], cov: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerances(dims, cov, Self::SYMMETRY_TOL, Self::PSD_TOL)
    }

    /// Validate with caller-chosen relative tolerances, then store the
    /// symmetrized matrix.
    pub fn with_tolerances(
        dims: [usize; 3],
        cov: DMatrix<f64>,
        symmetry_tol: f64,
        psd_tol: f64,
    ) -> Result<Self> {
        if let Some(r) = Role::ALL.iter().find(|r| dims[r.axis()] == 0) {
            return Err(Error::Validation(format!("dimension of {} must be positive", r.name())));
        }
        let n: usize = dims.iter().sum();
        if cov.nrows() != n || cov.ncols() != n {
            return Err(Error::Validation(format!(
                "covariance is {}x{}, dims require {n}x{n}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if cov.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("covariance has a non-finite entry".into()));
        }
        if linalg::relative_asymmetry(&cov) > symmetry_tol {
            return Err(Error::Validation("covariance not symmetric".into()));
        }
        let cov = linalg::symmetrize(&cov);
        let (lo, hi) = linalg::eigen_range(&cov);
        if lo < -psd_tol * hi.max(0.0) || hi < 0.0 {
            return Err(Error::Validation(format!(
                "covariance not positive semidefinite (smallest eigenvalue {lo:.3e})"
            )));
        }
        Ok(Self { dims, cov })
    }

    /// Internal constructor for matrices PSD by construction; zero-sized
    /// blocks are allowed here (fully degenerate variables after whitening).
    pub(crate) fn from_parts(dims: [usize; 3], cov: DMatrix<f64>) -> Self {
        debug_assert_eq!(cov.nrows(), dims.iter().sum::<usize>());
        Self { dims, cov }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn dim(&self, role: Role) -> usize {
        self.dims[role.axis()]
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn offset(&self, role: Role) -> usize {
        self.dims[..role.axis()].iter().sum()
    }

    /// Covariance indices of the listed roles, in role order.
    pub fn indices(&self, roles: &[Role]) -> Vec<usize> {
        normalize(roles)
            .into_iter()
            .flat_map(|r| {
                let o = self.offset(r);
                o..o + self.dim(r)
            })
            .collect()
    }

    /// Cross-covariance block `Sigma_ab`.
    pub fn block(&self, a: Role, b: Role) -> DMatrix<f64> {
        select(&self.cov, &self.indices(&[a]), &self.indices(&[b]))
    }

    /// Axis `i` of the result is the variable that played role `order[i]`.
    pub fn permute_roles(&self, order: [Role; 3]) -> Self {
        let idx: Vec<usize> = order.iter().flat_map(|&r| self.indices(&[r])).collect();
        Self {
            dims: order.map(|r| self.dim(r)),
            cov: select(&self.cov, &idx, &idx),
        }
    }

    pub fn swap_roles(&self, a: Role, b: Role) -> Self {
        let mut order = Role::ALL;
        order.swap(a.axis(), b.axis());
        self.permute_roles(order)
    }

    /// Replace the variable in `role` by `map * variable`.
    pub fn transform_block(&self, role: Role, map: &DMatrix<f64>) -> Result<Self> {
        let d = self.dim(role);
        if map.ncols() != d || map.nrows() == 0 {
            return Err(Error::Usage(format!(
                "map has {} columns, {} has dimension {d}",
                map.ncols(),
                role.name()
            )));
        }
        let n: usize = self.dims.iter().sum();
        let mut lift = DMatrix::zeros(n - d + map.nrows(), n);
        let mut row = 0;
        for r in Role::ALL {
            let o = self.offset(r);
            if r == role {
                lift.view_mut((row, o), (map.nrows(), d)).copy_from(map);
                row += map.nrows();
            } else {
                for k in 0..self.dim(r) {
                    lift[(row + k, o + k)] = 1.0;
                }
                row += self.dim(r);
            }
        }
        let mut dims = self.dims;
        dims[role.axis()] = map.nrows();
        let cov = linalg::symmetrize(&(&lift * &self.cov * lift.transpose()));
        Ok(Self { dims, cov })
    }

    /// Covariance of the independent pair `((M1,M2), (X1,X2), (Y1,Y2))`.
    pub fn direct_sum(&self, other: &GaussianJoint) -> Self {
        let dims: [usize; 3] = std::array::from_fn(|k| self.dims[k] + other.dims[k]);
        let n: usize = dims.iter().sum();
        let mut cov = DMatrix::zeros(n, n);
        // New index of coordinate `k` of role `r` from the first or second factor.
        let place = |r: Role, second: bool, k: usize| -> usize {
            let base: usize = dims[..r.axis()].iter().sum();
            if second { base + self.dims[r.axis()] + k } else { base + k }
        };
        for (second, g) in [(false, self), (true, other)] {
            for ra in Role::ALL {
                for rb in Role::ALL {
                    let blk = g.block(ra, rb);
                    for i in 0..blk.nrows() {
                        for j in 0..blk.ncols() {
                            cov[(place(ra, second, i), place(rb, second, j))] = blk[(i, j)];
                        }
                    }
                }
            }
        }
        Self { dims, cov }
    }
}

fn largest_eigen(block: &DMatrix<f64>) -> f64 {
    linalg::eigen_range(block).1.max(0.0)
}

/// Canonical correlations between index sets `a` and `b` of `cov`, with the
/// rank of each side retained after projecting onto its image.
pub fn canonical_correlations(
    cov: &DMatrix<f64>,
    a: &[usize],
    b: &[usize],
    scales: (Option<f64>, Option<f64>),
) -> (Vec<f64>, usize, usize) {
    let fa = psd_factor(&select(cov, a, a), scales.0);
    let fb = psd_factor(&select(cov, b, b), scales.1);
    let cross = &fa.whitener * select(cov, a, b) * fb.whitener.transpose();
    (linalg::singular_values(&cross), fa.rank, fb.rank)
}

pub(crate) fn information_from_correlations(sigmas: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for &s in sigmas {
        if s >= 1.0 - UNIT_CORRELATION_TOL {
            return Err(Error::IllConditioned { sigma: s });
        }
        total += -0.5 * (-s * s).ln_1p();
    }
    Ok(total)
}

/// `I(A; B)` in nats for index sets of an arbitrary covariance matrix.
pub fn cov_mi_nats(cov: &DMatrix<f64>, a: &[usize], b: &[usize]) -> Result<f64> {
    let (sigmas, _, _) = canonical_correlations(cov, a, b, (None, None));
    clamp_nonneg("Gaussian mutual information", information_from_correlations(&sigmas)?)
}

/// `I(A; B | C)` in nats through the Schur complement of the `C` block.
pub fn cov_conditional_mi_nats(
    cov: &DMatrix<f64>,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<f64> {
    if c.is_empty() {
        return cov_mi_nats(cov, a, b);
    }
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    let cross = select(cov, &ab, c);
    let fc = psd_factor(&select(cov, c, c), None);
    let conditional = linalg::symmetrize(&(select(cov, &ab, &ab) - &cross * fc.pinv() * cross.transpose()));
    let scale_a = largest_eigen(&select(cov, a, a));
    let scale_b = largest_eigen(&select(cov, b, b));
    let ia: Vec<usize> = (0..a.len()).collect();
    let ib: Vec<usize> = (a.len()..ab.len()).collect();
    let (sigmas, _, _) = canonical_correlations(&conditional, &ia, &ib, (Some(scale_a), Some(scale_b)));
    clamp_nonneg(
        "Gaussian conditional mutual information",
        information_from_correlations(&sigmas)?,
    )
}

/// Mutual information together with how much of each block survived the
/// rank reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianMiReport {
    pub value: f64,
    pub unit: InfoUnit,
    pub dims: (usize, usize),
    pub retained: (usize, usize),
    pub rank_deficient: bool,
}

pub fn gaussian_mi_report(
    g: &GaussianJoint,
    a: &[Role],
    b: &[Role],
    unit: InfoUnit,
) -> Result<GaussianMiReport> {
    require_nonempty(a, "first argument")?;
    require_nonempty(b, "second argument")?;
    require_disjoint(&[a, b])?;
    let (ia, ib) = (g.indices(a), g.indices(b));
    let (sigmas, ra, rb) = canonical_correlations(&g.cov, &ia, &ib, (None, None));
    let nats = clamp_nonneg("Gaussian mutual information", information_from_correlations(&sigmas)?)?;
    Ok(GaussianMiReport {
        value: unit.from_nats(nats),
        unit,
        dims: (ia.len(), ib.len()),
        retained: (ra, rb),
        rank_deficient: ra < ia.len() || rb < ib.len(),
    })
}

/// `I(A; B)` for jointly Gaussian blocks.
pub fn gaussian_mi(g: &GaussianJoint, a: &[Role], b: &[Role], unit: InfoUnit) -> Result<f64> {
    Ok(gaussian_mi_report(g, a, b, unit)?.value)
}

/// `I(A; B | C)` for jointly Gaussian blocks; empty `C` falls back to `I(A; B)`.
pub fn gaussian_conditional_mi(
    g: &GaussianJoint,
    a: &[Role],
    b: &[Role],
    c: &[Role],
    unit: InfoUnit,
) -> Result<f64> {
    require_nonempty(a, "first argument")?;
    require_nonempty(b, "second argument")?;
    require_disjoint(&[a, b, c])?;
    let nats = cov_conditional_mi_nats(&g.cov, &g.indices(a), &g.indices(b), &g.indices(c))?;
    Ok(unit.from_nats(nats))
}

/// Per-variable whitening maps recorded so results can be mapped back.
#[derive(Debug, Clone, PartialEq)]
pub struct WhitenTransform {
    /// Original block dimensions.
    pub dims: [usize; 3],
    /// Retained rank per block.
    pub ranks: [usize; 3],
    /// `rank x dim` maps taking each variable to white coordinates.
    pub whiteners: [DMatrix<f64>; 3],
    /// `dim x rank` maps back, `root * root^T` equals the original block.
    pub roots: [DMatrix<f64>; 3],
}

impl WhitenTransform {
    pub fn is_identity(&self) -> bool {
        self.whiteners
            .iter()
            .all(|w| w.is_square() && *w == DMatrix::identity(w.nrows(), w.ncols()))
    }

    /// Covariance in original coordinates of a whitened joint.
    pub fn reconstruct(&self, white: &GaussianJoint) -> DMatrix<f64> {
        let n: usize = self.dims.iter().sum();
        let mut out = DMatrix::zeros(n, n);
        let offset = |r: Role| -> usize { self.dims[..r.axis()].iter().sum() };
        for a in Role::ALL {
            for b in Role::ALL {
                let blk = &self.roots[a.axis()] * white.block(a, b) * self.roots[b.axis()].transpose();
                out.view_mut((offset(a), offset(b)), blk.shape()).copy_from(&blk);
            }
        }
        out
    }
}

/// Map each variable to coordinates where its covariance is the identity.
/// Singular blocks are projected onto their image; each ordered cross block
/// `W_a Sigma_ab W_b^T` is formed independently so that relabelling roles
/// reproduces the same numbers.
pub fn whiten(g: &GaussianJoint) -> (GaussianJoint, WhitenTransform) {
    let factors = Role::ALL.map(|r| psd_factor(&g.block(r, r), None));
    let ranks = [factors[0].rank, factors[1].rank, factors[2].rank];
    let n: usize = ranks.iter().sum();
    let mut cov = DMatrix::zeros(n, n);
    let offset = |r: Role| -> usize { ranks[..r.axis()].iter().sum() };
    for a in Role::ALL {
        let oa = offset(a);
        for b in Role::ALL {
            let ob = offset(b);
            if a == b {
                for k in 0..ranks[a.axis()] {
                    cov[(oa + k, oa + k)] = 1.0;
                }
            } else {
                let blk = &factors[a.axis()].whitener * g.block(a, b) * factors[b.axis()].whitener.transpose();
                cov.view_mut((oa, ob), blk.shape()).copy_from(&blk);
            }
        }
    }
    let transform = WhitenTransform {
        dims: g.dims,
        ranks,
        whiteners: factors.clone().map(|f| f.whitener),
        roots: factors.map(|f| f.root),
    };
    (GaussianJoint::from_parts(ranks, cov), transform)
}

/// Outcome of the conditional-covariance test for `A - W - B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkovCheck {
    pub holds: bool,
    /// Frobenius norm of `Sigma_AB - Sigma_AW Sigma_W^+ Sigma_WB`.
    pub residual: f64,
    /// `sqrt(|Sigma_A| |Sigma_B|)`, which bounds `|Sigma_AB|` for PSD input.
    pub scale: f64,
}

/// Residual of the Gaussian Markov identity for index sets of `cov`.
pub fn markov_residual(cov: &DMatrix<f64>, a: &[usize], w: &[usize], b: &[usize], tol: f64) -> MarkovCheck {
    let fw = psd_factor(&select(cov, w, w), None);
    let predicted = select(cov, a, w) * fw.pinv() * select(cov, w, b);
    let residual = (select(cov, a, b) - predicted).norm();
    let scale = (select(cov, a, a).norm() * select(cov, b, b).norm()).sqrt();
    MarkovCheck { holds: residual <= tol * scale, residual, scale }
}

/// Test the chain `chain[0] - chain[1] - chain[2]`.
pub fn markov_check_gaussian(g: &GaussianJoint, chain: [Role; 3], tol: f64) -> Result<MarkovCheck> {
    require_disjoint(&[&chain[0..1], &chain[1..2], &chain[2..3]])?;
    Ok(markov_residual(
        &g.cov,
        &g.indices(&[chain[0]]),
        &g.indices(&[chain[1]]),
        &g.indices(&[chain[2]]),
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Role::{M, X, Y};

    fn scalar(cov: [[f64; 3]; 3]) -> GaussianJoint {
        let flat: Vec<f64> = cov.iter().flatten().copied().collect();
        GaussianJoint::new([1, 1, 1], DMatrix::from_row_slice(3, 3, &flat)).unwrap()
    }

    #[test]
    fn scalar_mi_examples() {
        let g = scalar([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(gaussian_mi(&g, &[M], &[X], InfoUnit::Bits).unwrap(), 0.0);

        let g = scalar([[1.0, 0.6, 0.0], [0.6, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let expected = -0.5 * (1.0f64 - 0.36).log2();
        let got = gaussian_mi(&g, &[M], &[X], InfoUnit::Bits).unwrap();
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 0.3219).abs() < 1e-4);
    }

    #[test]
    fn block_diagonal_is_independent() {
        let mut cov = DMatrix::<f64>::identity(5, 5);
        cov[(0, 1)] = 0.3;
        cov[(1, 0)] = 0.3;
        let g = GaussianJoint::new([2, 2, 1], cov).unwrap();
        assert_eq!(gaussian_mi(&g, &[M], &[X, Y], InfoUnit::Nats).unwrap(), 0.0);
    }

    #[test]
    fn conditional_mi_examples() {
        // (X, Y, M) order in the counterexample becomes [M; X; Y] here.
        let g = scalar([[1.0, 0.6, 0.3], [0.6, 1.0, 0.0], [0.3, 0.0, 1.0]]);
        let expected = 0.5 * ((1.0f64 - 0.09) / (1.0 - 0.36 - 0.09)).log2();
        let got = gaussian_conditional_mi(&g, &[M], &[X], &[Y], InfoUnit::Bits).unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
        // I(M;X,Y) - I(M;Y) with X, Y independent.
        let chain = -0.5 * (1.0f64 - 0.36 - 0.09).log2() + 0.5 * (1.0f64 - 0.09).log2();
        assert!((got - chain).abs() < 1e-12);
        assert!((got - 0.36322).abs() < 1e-5);

        let unconditional = gaussian_mi(&g, &[M], &[X], InfoUnit::Bits).unwrap();
        let empty = gaussian_conditional_mi(&g, &[M], &[X], &[], InfoUnit::Bits).unwrap();
        assert_eq!(unconditional, empty);

        // Y is a copy of X.
        let g = scalar([[1.0, 0.5, 0.5], [0.5, 1.0, 1.0], [0.5, 1.0, 1.0]]);
        assert_eq!(gaussian_conditional_mi(&g, &[M], &[X], &[Y], InfoUnit::Bits).unwrap(), 0.0);
    }

    #[test]
    fn deterministic_link_is_unbounded() {
        let g = scalar([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(matches!(gaussian_mi(&g, &[M], &[X], InfoUnit::Bits), Err(Error::IllConditioned { .. })));
    }

    #[test]
    fn validation_errors() {
        let bad = DMatrix::from_row_slice(3, 3, &[1.0, 0.5, 0.0, 0.4, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let e = GaussianJoint::new([1, 1, 1], bad).unwrap_err();
        assert!(e.to_string().contains("not symmetric"));
        let indefinite = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 2.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(GaussianJoint::new([1, 1, 1], indefinite).is_err());
        assert!(GaussianJoint::new([0, 2, 1], DMatrix::identity(3, 3)).is_err());
        let g = scalar([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(gaussian_mi(&g, &[M], &[M, X], InfoUnit::Bits).is_err());
    }

    #[test]
    fn whiten_examples() {
        let g = scalar([[1.0, 0.2, 0.1], [0.2, 1.0, 0.3], [0.1, 0.3, 1.0]]);
        let (w, t) = whiten(&g);
        assert!(t.is_identity());
        assert_eq!(w.cov(), g.cov());

        // Variance 4 everywhere: each factor-2 standard deviation halves a cross term.
        let g = scalar([[4.0, 2.0, 1.0], [2.0, 4.0, 0.4], [1.0, 0.4, 4.0]]);
        let (w, _) = whiten(&g);
        assert!((w.cov()[(0, 1)] - 0.5).abs() < 1e-12);
        assert!((w.cov()[(0, 2)] - 0.25).abs() < 1e-12);
        assert!((w.cov()[(1, 2)] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn whiten_rank_deficient_block() {
        // M = (Z, Z) duplicates one coordinate.
        let base = DMatrix::from_row_slice(3, 3, &[2.0, 0.6, 0.2, 0.6, 1.0, 0.1, 0.2, 0.1, 1.0]);
        let lift = DMatrix::from_row_slice(4, 3, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let g = GaussianJoint::new([2, 1, 1], &lift * base * lift.transpose()).unwrap();
        let (w, t) = whiten(&g);
        assert_eq!(t.ranks, [1, 1, 1]);
        assert!((t.reconstruct(&w) - g.cov()).amax() < 1e-10);
        for r in Role::ALL {
            let d = w.dim(r);
            assert!((w.block(r, r) - DMatrix::<f64>::identity(d, d)).amax() < 1e-10);
        }
        let before = gaussian_mi(&g, &[M], &[X, Y], InfoUnit::Nats).unwrap();
        let after = gaussian_mi(&w, &[M], &[X, Y], InfoUnit::Nats).unwrap();
        assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn markov_examples() {
        // X duplicates M.
        let g = scalar([[1.0, 1.0, 0.4], [1.0, 1.0, 0.4], [0.4, 0.4, 1.0]]);
        let c = markov_check_gaussian(&g, [X, M, Y], 1e-9).unwrap();
        assert!(c.holds);
        assert!(c.residual < 1e-15);

        // X = 0.8 W + noise, Y = -0.5 W + noise.
        let (a, b) = (0.8, -0.5);
        let g = scalar([[1.0, a, b], [a, a * a + 0.3, a * b], [b, a * b, b * b + 0.7]]);
        assert!(markov_check_gaussian(&g, [X, M, Y], 1e-9).unwrap().holds);

        // Counterexample family: Sigma_XY = 0 but rho_X rho_Y != 0.
        let g = scalar([[1.0, 0.6, 0.3], [0.6, 1.0, 0.0], [0.3, 0.0, 1.0]]);
        let c = markov_check_gaussian(&g, [X, M, Y], 1e-9).unwrap();
        assert!(!c.holds);
        assert!((c.residual - 0.18).abs() < 1e-12);
        let g = scalar([[1.0, 0.6, 0.0], [0.6, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(markov_check_gaussian(&g, [X, M, Y], 1e-9).unwrap().holds);
    }

    #[test]
    fn direct_sum_places_blocks() {
        let a = scalar([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let b = scalar([[2.0, 0.0, 0.3], [0.0, 1.0, 0.0], [0.3, 0.0, 1.0]]);
        let s = a.direct_sum(&b);
        assert_eq!(s.dims(), [2, 2, 2]);
        assert_eq!(s.block(M, X), DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.0]));
        assert_eq!(s.block(M, Y), DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 0.3]));
    }

    fn arb_psd(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
        prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| {
            let g = DMatrix::from_vec(n, n, v);
            &g * g.transpose() + DMatrix::identity(n, n) * 0.05
        })
    }

    fn arb_invertible(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
        prop::collection::vec(-1.0f64..1.0, n * n)
            .prop_map(move |v| DMatrix::from_vec(n, n, v) + DMatrix::identity(n, n) * 2.5)
    }

    proptest! {
        #[test]
        fn mi_invariant_under_block_maps(cov in arb_psd(5), map in arb_invertible(2)) {
            let g = GaussianJoint::new([2, 2, 1], cov).unwrap();
            let before = gaussian_mi(&g, &[M], &[X], InfoUnit::Nats).unwrap();
            let moved = g.transform_block(X, &map).unwrap();
            let after = gaussian_mi(&moved, &[M], &[X], InfoUnit::Nats).unwrap();
            prop_assert!((before - after).abs() <= 1e-8 * before.max(1e-3));
        }

        #[test]
        fn whitening_preserves_mi(cov in arb_psd(5)) {
            let g = GaussianJoint::new([1, 2, 2], cov).unwrap();
            let (w, _) = whiten(&g);
            for (a, b) in [(M, X), (M, Y), (X, Y)] {
                let before = gaussian_mi(&g, &[a], &[b], InfoUnit::Nats).unwrap();
                let after = gaussian_mi(&w, &[a], &[b], InfoUnit::Nats).unwrap();
                prop_assert!((before - after).abs() <= 1e-8 * before.max(1e-3));
            }
        }

        #[test]
        fn linear_channel_is_markov(cov in arb_psd(3), map in prop::collection::vec(-1.0f64..1.0, 2 * 2), noise in 0.01f64..1.0) {
            // (M, X) arbitrary, Y = A M + independent noise, so X - M - Y.
            let a = DMatrix::from_vec(2, 2, map);
            let mx = cov;
            let sm = mx.view((0, 0), (2, 2)).into_owned();
            let sxm = mx.view((2, 0), (1, 2)).into_owned();
            let mut full = DMatrix::zeros(5, 5);
            full.view_mut((0, 0), (3, 3)).copy_from(&mx);
            let smy = &sm * a.transpose();
            let sxy = &sxm * a.transpose();
            let sy = &a * &sm * a.transpose() + DMatrix::identity(2, 2) * noise;
            full.view_mut((0, 3), (2, 2)).copy_from(&smy);
            full.view_mut((3, 0), (2, 2)).copy_from(&smy.transpose());
            full.view_mut((2, 3), (1, 2)).copy_from(&sxy);
            full.view_mut((3, 2), (2, 1)).copy_from(&sxy.transpose());
            full.view_mut((3, 3), (2, 2)).copy_from(&sy);
            let g = GaussianJoint::new([2, 1, 2], full).unwrap();
            prop_assert!(markov_check_gaussian(&g, [X, M, Y], 1e-9).unwrap().holds);
        }
    }
}
