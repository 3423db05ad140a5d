//! Dense two-phase simplex with Bland's rule, for the small systems the
//! channel polytopes produce.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 50_000;

/// Reduced row echelon form of `[A | b]` with dependent rows removed.
/// Rows are rescaled to unit max-norm first so the pivot tolerance is
/// meaningful for the small coefficients of independence constraints.
pub(crate) fn reduce_system(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let (rows, n) = a.shape();
    let mut m = DMatrix::zeros(rows, n + 1);
    for i in 0..rows {
        let scale = a.row(i).amax().max(b[i].abs());
        if scale == 0.0 {
            continue;
        }
        for j in 0..n {
            m[(i, j)] = a[(i, j)] / scale;
        }
        m[(i, n)] = b[i] / scale;
    }
    let mut rank = 0;
    for col in 0..n {
        if rank == rows {
            break;
        }
        let (p, best) = (rank..rows)
            .map(|i| (i, m[(i, col)].abs()))
            .fold((rank, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if best <= PIVOT_TOL {
            continue;
        }
        m.swap_rows(p, rank);
        let pivot = m[(rank, col)];
        for j in 0..=n {
            m[(rank, j)] /= pivot;
        }
        for i in 0..rows {
            if i != rank && m[(i, col)] != 0.0 {
                let f = m[(i, col)];
                for j in 0..=n {
                    m[(i, j)] -= f * m[(rank, j)];
                }
            }
        }
        rank += 1;
    }
    if (rank..rows).any(|i| m[(i, n)].abs() > 1e-9) {
        return Err(Error::Internal("equality system is inconsistent".into()));
    }
    let a_red = m.view((0, 0), (rank, n)).into_owned();
    let b_red = m.view((0, n), (rank, 1)).column(0).into_owned();
    Ok((a_red, b_red))
}

struct Tableau {
    t: DMatrix<f64>,
    basis: Vec<usize>,
    rows: usize,
    rhs: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[(row, col)];
        for j in 0..=self.rhs {
            self.t[(row, j)] /= p;
        }
        for i in 0..=self.rows {
            if i != row {
                let f = self.t[(i, col)];
                if f != 0.0 {
                    for j in 0..=self.rhs {
                        self.t[(i, j)] -= f * self.t[(row, j)];
                    }
                }
            }
        }
        self.basis[row] = col;
    }

    /// Minimize over columns `0..allowed`; the last tableau row holds the
    /// reduced costs.
    fn run(&mut self, allowed: usize) -> Result<()> {
        for _ in 0..MAX_PIVOTS {
            let Some(col) = (0..allowed).find(|&j| self.t[(self.rows, j)] < -COST_TOL) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.t[(i, col)];
                if a > PIVOT_TOL {
                    let ratio = self.t[(i, self.rhs)] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((r, best)) => {
                            if ratio < best - 1e-12
                                || (ratio <= best + 1e-12 && self.basis[i] < self.basis[r])
                            {
                                Some((i, ratio))
                            } else {
                                Some((r, best))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::Internal("linear program is unbounded".into()));
            };
            self.pivot(row, col);
        }
        Err(Error::Internal("simplex pivot limit reached".into()))
    }
}

/// Minimize `c^T x` subject to `A x = b`, `x >= 0`, returning an optimal
/// basic feasible solution.
pub fn minimize(a: &DMatrix<f64>, b: &DVector<f64>, c: &DVector<f64>) -> Result<DVector<f64>> {
    let (a, b) = reduce_system(a, b)?;
    let (rows, n) = a.shape();
    let rhs = n + rows;
    let mut t = DMatrix::zeros(rows + 1, rhs + 1);
    for i in 0..rows {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[(i, j)] = sign * a[(i, j)];
        }
        t[(i, n + i)] = 1.0;
        t[(i, rhs)] = sign * b[i];
    }
    // Phase one: minimize the sum of artificials.
    for j in 0..n {
        t[(rows, j)] = -(0..rows).map(|i| t[(i, j)]).sum::<f64>();
    }
    t[(rows, rhs)] = -(0..rows).map(|i| t[(i, rhs)]).sum::<f64>();
    let mut tab = Tableau { t, basis: (n..n + rows).collect(), rows, rhs };
    tab.run(n + rows)?;
    if -tab.t[(rows, rhs)] > 1e-9 {
        return Err(Error::Internal("linear program is infeasible".into()));
    }
    for i in 0..rows {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| tab.t[(i, j)].abs() > PIVOT_TOL) {
                tab.pivot(i, j);
            }
        }
    }
    // Phase two: reduced costs of the real objective.
    for j in 0..=rhs {
        let mut d = if j < n { c[j] } else { 0.0 };
        for i in 0..rows {
            let cb = if tab.basis[i] < n { c[tab.basis[i]] } else { 0.0 };
            d -= cb * tab.t[(i, j)];
        }
        tab.t[(rows, j)] = d;
    }
    tab.run(n)?;
    let mut x = DVector::zeros(n);
    for i in 0..rows {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.t[(i, rhs)].max(0.0);
        }
    }
    Ok(x)
}
