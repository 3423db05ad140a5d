use nalgebra::DMatrix;

use super::{clamp_nonneg, normalize, require_disjoint, require_nonempty, Role};
use crate::error::{Error, Result};
use crate::units::InfoUnit;

/// Tolerance on the total mass of a discrete joint.
pub const MASS_TOL: f64 = 1e-9;

/// Tabular joint law `p(m, x, y)` stored densely in `[m][x][y]` order.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteJoint {
    names: [String; 3],
    alphabets: [Vec<String>; 3],
    probs: Vec<f64>,
}

impl DiscreteJoint {
    /// Build a joint with variable names `M`, `X`, `Y`.
    pub fn new(alphabets: [Vec<String>; 3], probs: Vec<f64>) -> Result<Self> {
        Self::with_names(["M".into(), "X".into(), "Y".into()], alphabets, probs)
    }

    pub fn with_names(
        names: [String; 3],
        alphabets: [Vec<String>; 3],
        probs: Vec<f64>,
    ) -> Result<Self> {
        for (role, alphabet) in Role::ALL.iter().zip(&alphabets) {
            if alphabet.is_empty() {
                return Err(Error::Validation(format!(
                    "alphabet of {} is empty",
                    role.name()
                )));
            }
            let mut sorted = alphabet.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != alphabet.len() {
                return Err(Error::Validation(format!(
                    "alphabet of {} repeats a symbol",
                    role.name()
                )));
            }
        }
        let expected: usize = alphabets.iter().map(Vec::len).product();
        if probs.len() != expected {
            return Err(Error::Validation(format!(
                "probability tensor has {} entries, alphabets require {expected}",
                probs.len()
            )));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::Validation(format!("probability {bad} is not a non-negative real")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::Validation(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { names, alphabets, probs })
    }

    /// Joint over integer-labelled alphabets of the given sizes.
    pub fn from_fn(sizes: [usize; 3], f: impl Fn(usize, usize, usize) -> f64) -> Result<Self> {
        let alphabets = sizes.map(|n| (0..n).map(|i| i.to_string()).collect::<Vec<_>>());
        let mut probs = Vec::with_capacity(sizes.iter().product());
        for m in 0..sizes[0] {
            for x in 0..sizes[1] {
                for y in 0..sizes[2] {
                    probs.push(f(m, x, y));
                }
            }
        }
        Self::new(alphabets, probs)
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.alphabets[0].len(), self.alphabets[1].len(), self.alphabets[2].len()]
    }

    pub fn names(&self) -> &[String; 3] {
        &self.names
    }

    pub fn alphabet(&self, role: Role) -> &[String] {
        &self.alphabets[role.axis()]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, m: usize, x: usize, y: usize) -> f64 {
        let [_, nx, ny] = self.shape();
        self.probs[(m * nx + x) * ny + y]
    }

    fn entries(&self) -> impl Iterator<Item = ([usize; 3], f64)> + '_ {
        let [_, nx, ny] = self.shape();
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| ([i / (nx * ny), (i / ny) % nx, i % ny], p))
    }

    /// Marginal over `roles`, flattened in role order (M before X before Y).
    pub fn marginal(&self, roles: &[Role]) -> Vec<f64> {
        let roles = normalize(roles);
        let shape = self.shape();
        let size: usize = roles.iter().map(|r| shape[r.axis()]).product();
        let mut out = vec![0.0; size];
        for (idx, p) in self.entries() {
            let mut flat = 0;
            for r in &roles {
                flat = flat * shape[r.axis()] + idx[r.axis()];
            }
            out[flat] += p;
        }
        out
    }

    /// Pairwise table `p(a, b)` with rows indexed by `a`.
    pub fn pair_table(&self, a: Role, b: Role) -> DMatrix<f64> {
        let shape = self.shape();
        let mut t = DMatrix::zeros(shape[a.axis()], shape[b.axis()]);
        for (idx, p) in self.entries() {
            t[(idx[a.axis()], idx[b.axis()])] += p;
        }
        t
    }

    /// Indices of the symbols of `role` that carry positive mass.
    pub fn support(&self, role: Role) -> Vec<usize> {
        self.marginal(&[role])
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Reassign roles: axis `i` of the result is the variable that played
    /// role `order[i]` here.
    pub fn permute_roles(&self, order: [Role; 3]) -> Self {
        let old_shape = self.shape();
        let new_shape = order.map(|r| old_shape[r.axis()]);
        let mut probs = vec![0.0; self.probs.len()];
        for (idx, p) in self.entries() {
            let n = order.map(|r| idx[r.axis()]);
            probs[(n[0] * new_shape[1] + n[1]) * new_shape[2] + n[2]] = p;
        }
        Self {
            names: order.map(|r| self.names[r.axis()].clone()),
            alphabets: order.map(|r| self.alphabets[r.axis()].clone()),
            probs,
        }
    }

    /// Exchange the roles of two variables.
    pub fn swap_roles(&self, a: Role, b: Role) -> Self {
        let mut order = Role::ALL;
        order.swap(a.axis(), b.axis());
        self.permute_roles(order)
    }

    /// Relabel the alphabet of `role`: new symbol `k` is old symbol `perm[k]`.
    pub fn relabel(&self, role: Role, perm: &[usize]) -> Result<Self> {
        let n = self.shape()[role.axis()];
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&k| k >= n || std::mem::replace(&mut seen[k], true)) {
            return Err(Error::Usage(format!("not a permutation of 0..{n}")));
        }
        let mut out = self.clone();
        out.alphabets[role.axis()] = perm.iter().map(|&k| self.alphabets[role.axis()][k].clone()).collect();
        let shape = self.shape();
        let mut inverse = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        for (mut idx, p) in self.entries() {
            idx[role.axis()] = inverse[idx[role.axis()]];
            out.probs[(idx[0] * shape[1] + idx[1]) * shape[2] + idx[2]] = p;
        }
        Ok(out)
    }

    /// Joint of the independent pair `((M1,M2), (X1,X2), (Y1,Y2))`.
    pub fn product(&self, other: &DiscreteJoint) -> Self {
        let a = self.shape();
        let b = other.shape();
        let alphabets: [Vec<String>; 3] = std::array::from_fn(|k| {
            let mut v = Vec::with_capacity(a[k] * b[k]);
            for s in &self.alphabets[k] {
                for t in &other.alphabets[k] {
                    v.push(format!("({s},{t})"));
                }
            }
            v
        });
        let shape = [a[0] * b[0], a[1] * b[1], a[2] * b[2]];
        let mut probs = vec![0.0; shape.iter().product()];
        for (i, p) in self.entries() {
            for (j, q) in other.entries() {
                let n: [usize; 3] = std::array::from_fn(|k| i[k] * b[k] + j[k]);
                probs[(n[0] * shape[1] + n[1]) * shape[2] + n[2]] = p * q;
            }
        }
        Self {
            names: std::array::from_fn(|k| format!("{}x{}", self.names[k], other.names[k])),
            alphabets,
            probs,
        }
    }
}

fn shannon_nats(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.ln()).sum()
}

pub(crate) fn entropy_nats(joint: &DiscreteJoint, vars: &[Role]) -> f64 {
    if vars.is_empty() {
        return 0.0;
    }
    shannon_nats(&joint.marginal(vars))
}

/// Shannon entropy of the marginal over `vars`.
pub fn entropy(joint: &DiscreteJoint, vars: &[Role], unit: InfoUnit) -> Result<f64> {
    require_nonempty(vars, "entropy subset")?;
    Ok(unit.from_nats(entropy_nats(joint, vars)))
}

pub(crate) fn mi_nats(joint: &DiscreteJoint, a: &[Role], b: &[Role]) -> Result<f64> {
    require_nonempty(a, "first argument")?;
    require_nonempty(b, "second argument")?;
    require_disjoint(&[a, b])?;
    let ab: Vec<Role> = a.iter().chain(b).copied().collect();
    let v = entropy_nats(joint, a) + entropy_nats(joint, b) - entropy_nats(joint, &ab);
    clamp_nonneg("mutual information", v)
}

/// `I(A; B)`.
pub fn mutual_information(
    joint: &DiscreteJoint,
    a: &[Role],
    b: &[Role],
    unit: InfoUnit,
) -> Result<f64> {
    Ok(unit.from_nats(mi_nats(joint, a, b)?))
}

pub(crate) fn cmi_nats(joint: &DiscreteJoint, a: &[Role], b: &[Role], c: &[Role]) -> Result<f64> {
    require_nonempty(a, "first argument")?;
    require_nonempty(b, "second argument")?;
    require_disjoint(&[a, b, c])?;
    if c.is_empty() {
        return mi_nats(joint, a, b);
    }
    let ac: Vec<Role> = a.iter().chain(c).copied().collect();
    let bc: Vec<Role> = b.iter().chain(c).copied().collect();
    let abc: Vec<Role> = a.iter().chain(b).chain(c).copied().collect();
    let v = entropy_nats(joint, &ac) + entropy_nats(joint, &bc)
        - entropy_nats(joint, &abc)
        - entropy_nats(joint, c);
    clamp_nonneg("conditional mutual information", v)
}

/// `I(A; B | C)`; an empty `C` gives `I(A; B)`.
pub fn conditional_mutual_information(
    joint: &DiscreteJoint,
    a: &[Role],
    b: &[Role],
    c: &[Role],
    unit: InfoUnit,
) -> Result<f64> {
    Ok(unit.from_nats(cmi_nats(joint, a, b, c)?))
}

/// Mutual information in nats of a two-way table of joint probabilities.
pub fn table_mutual_information(table: &DMatrix<f64>) -> f64 {
    let rows: Vec<f64> = table.row_iter().map(|r| r.sum()).collect();
    let cols: Vec<f64> = table.column_iter().map(|c| c.sum()).collect();
    let mut mi = 0.0;
    for i in 0..table.nrows() {
        for j in 0..table.ncols() {
            let p = table[(i, j)];
            if p > 0.0 {
                mi += p * (p / (rows[i] * cols[j])).ln();
            }
        }
    }
    mi.max(0.0)
}
