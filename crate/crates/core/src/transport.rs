//! Finitely supported probability measures and the exact q-Wasserstein
//! distance, solved as a transportation problem.

use std::fmt;

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, Subset};

/// Atoms lighter than this are pruned.
pub const PRUNE_THRESHOLD: f64 = 1e-12;
/// Allowed deviation of total mass (and coupling marginals) from target.
pub const MASS_TOLERANCE: f64 = 1e-9;
/// Reduced costs above `-PIVOT_TOLERANCE` count as optimal.
const PIVOT_TOLERANCE: f64 = 1e-12;

/// `Σ λ_i δ_{x_i}` with every `λ_i > 0`, atoms sorted by point index.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<(usize, f64)>,
}

impl DiscreteMeasure {
    /// Merges repeated points, prunes atoms below [`PRUNE_THRESHOLD`] and
    /// renormalizes. Total mass must be within [`MASS_TOLERANCE`] of one.
    pub fn new(atoms: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut atoms: Vec<(usize, f64)> = atoms.into_iter().collect();
        if let Some(&(i, w)) = atoms.iter().find(|a| !(a.1 >= 0.0) || !a.1.is_finite()) {
            return Err(Error::InvalidMeasure(format!("atom at {i} has weight {w}")));
        }
        atoms.sort_by_key(|a| a.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(atoms.len());
        for (i, w) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += w,
                _ => merged.push((i, w)),
            }
        }
        let total: f64 = merged.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        merged.retain(|a| a.1 >= PRUNE_THRESHOLD);
        let kept: f64 = merged.iter().map(|a| a.1).sum();
        if merged.is_empty() {
            return Err(Error::InvalidMeasure("no atom has positive weight".into()));
        }
        if kept != 1.0 {
            for a in &mut merged {
                a.1 /= kept;
            }
        }
        Ok(DiscreteMeasure { atoms: merged })
    }

    /// Uniform measure on `s`.
    pub fn uniform(s: &Subset) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptySubset);
        }
        let w = 1.0 / s.len() as f64;
        Self::new(s.indices().iter().map(|&i| (i, w)))
    }

    pub fn atoms(&self) -> &[(usize, f64)] {
        &self.atoms
    }

    pub fn support(&self) -> Subset {
        Subset::new(self.atoms.iter().map(|a| a.0).collect())
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.1).collect()
    }

    pub fn weight_at(&self, i: usize) -> f64 {
        self.atoms
            .binary_search_by_key(&i, |a| a.0)
            .map_or(0.0, |k| self.atoms[k].1)
    }

    pub fn check_range(&self, len: usize) -> Result<()> {
        match self.atoms.last() {
            Some(&(index, _)) if index >= len => Err(Error::IndexOutOfRange { index, len }),
            _ => Ok(()),
        }
    }

    /// Same atoms with weights equal within `tol`.
    pub fn approx_eq(&self, other: &DiscreteMeasure, tol: f64) -> bool {
        self.atoms.len() == other.atoms.len()
            && self
                .atoms
                .iter()
                .zip(&other.atoms)
                .all(|(a, b)| a.0 == b.0 && (a.1 - b.1).abs() <= tol)
    }

    /// `μ(s)`: total weight of atoms in `s`.
    pub fn measure_of_set(&self, s: &Subset) -> f64 {
        self.atoms
            .iter()
            .filter(|a| s.contains(a.0))
            .map(|a| a.1)
            .sum()
    }

    /// `μ(f) = Σ λ_i f(x_i)`.
    pub fn integrate(&self, f: impl Fn(usize) -> f64) -> f64 {
        self.atoms.iter().map(|&(i, w)| w * f(i)).sum()
    }

    /// Renders as `idx:weight;idx:weight;...`.
    pub fn to_record(&self) -> String {
        self.atoms
            .iter()
            .map(|(i, w)| format!("{i}:{w}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for DiscreteMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (i, w)) in self.atoms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{w}·δ{i}")?;
        }
        Ok(())
    }
}

pub fn dirac(x: usize) -> DiscreteMeasure {
    DiscreteMeasure {
        atoms: vec![(x, 1.0)],
    }
}

/// `(1 - t) μ + t ν`.
pub fn convex_combination(
    t: f64,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
) -> Result<DiscreteMeasure> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "t must lie in [0, 1], got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(mu.clone());
    }
    if t == 1.0 {
        return Ok(nu.clone());
    }
    let scaled = mu
        .atoms
        .iter()
        .map(|&(i, w)| (i, (1.0 - t) * w))
        .chain(nu.atoms.iter().map(|&(i, w)| (i, t * w)));
    DiscreteMeasure::new(scaled)
}

/// A joint measure on `supp μ × supp ν` with marginals `μ` and `ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct Coupling {
    mu: DiscreteMeasure,
    nu: DiscreteMeasure,
    /// `entries[a][b]`: mass moved from the `a`-th atom of `μ` to the `b`-th atom of `ν`.
    entries: Vec<Vec<f64>>,
}

impl Coupling {
    pub fn new(mu: DiscreteMeasure, nu: DiscreteMeasure, entries: Vec<Vec<f64>>) -> Result<Self> {
        let c = Coupling { mu, nu, entries };
        c.check_marginals()?;
        Ok(c)
    }

    pub fn product(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Self {
        let entries = mu
            .atoms
            .iter()
            .map(|a| nu.atoms.iter().map(|b| a.1 * b.1).collect())
            .collect();
        Coupling {
            mu: mu.clone(),
            nu: nu.clone(),
            entries,
        }
    }

    /// Diagonal coupling of a measure with itself.
    pub fn identity(mu: &DiscreteMeasure) -> Self {
        let k = mu.atoms.len();
        let entries = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| if a == b { mu.atoms[a].1 } else { 0.0 })
                    .collect()
            })
            .collect();
        Coupling {
            mu: mu.clone(),
            nu: mu.clone(),
            entries,
        }
    }

    pub fn source(&self) -> &DiscreteMeasure {
        &self.mu
    }

    pub fn target(&self) -> &DiscreteMeasure {
        &self.nu
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn check_marginals(&self) -> Result<()> {
        let (m, n) = (self.mu.atoms.len(), self.nu.atoms.len());
        if self.entries.len() != m || self.entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidCoupling(format!("expected a {m}x{n} matrix")));
        }
        if self
            .entries
            .iter()
            .flatten()
            .any(|&x| !(x >= -MASS_TOLERANCE))
        {
            return Err(Error::InvalidCoupling("negative entry".into()));
        }
        for (a, row) in self.entries.iter().enumerate() {
            let s: f64 = row.iter().sum();
            if (s - self.mu.atoms[a].1).abs() > MASS_TOLERANCE {
                return Err(Error::InvalidCoupling(format!(
                    "row {a} sums to {s}, expected {}",
                    self.mu.atoms[a].1
                )));
            }
        }
        for b in 0..n {
            let s: f64 = self.entries.iter().map(|r| r[b]).sum();
            if (s - self.nu.atoms[b].1).abs() > MASS_TOLERANCE {
                return Err(Error::InvalidCoupling(format!(
                    "column {b} sums to {s}, expected {}",
                    self.nu.atoms[b].1
                )));
            }
        }
        Ok(())
    }
}

fn check_q(q: f64) -> Result<()> {
    if q >= 1.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "q must lie in [1, ∞), got {q}"
        )))
    }
}

/// `(Σ π_ab d(x_a, y_b)^q)^{1/q}` for a coupling with valid marginals.
pub fn coupling_cost(space: &FiniteMetricSpace, c: &Coupling, q: f64) -> Result<f64> {
    check_q(q)?;
    c.check_marginals()?;
    c.mu.check_range(space.len())?;
    c.nu.check_range(space.len())?;
    let mut total = 0.0;
    for (a, row) in c.entries.iter().enumerate() {
        for (b, &x) in row.iter().enumerate() {
            if x > 0.0 {
                total += x * space.d(c.mu.atoms[a].0, c.nu.atoms[b].0).powf(q);
            }
        }
    }
    Ok(total.max(0.0).powf(1.0 / q))
}

/// Exact `d_{W^q}(μ, ν)` together with an optimal coupling.
pub fn wasserstein(
    space: &FiniteMetricSpace,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    q: f64,
) -> Result<(f64, Coupling)> {
    check_q(q)?;
    mu.check_range(space.len())?;
    nu.check_range(space.len())?;
    let cost: Vec<Vec<f64>> = mu
        .atoms
        .iter()
        .map(|&(i, _)| {
            nu.atoms
                .iter()
                .map(|&(j, _)| space.d(i, j).powf(q))
                .collect()
        })
        .collect();
    let flow = transportation_simplex(&mu.weights(), &nu.weights(), &cost);
    let total: f64 = flow
        .iter()
        .zip(&cost)
        .flat_map(|(f, c)| f.iter().zip(c).map(|(x, y)| x * y))
        .sum();
    let coupling = Coupling {
        mu: mu.clone(),
        nu: nu.clone(),
        entries: flow,
    };
    Ok((total.max(0.0).powf(1.0 / q), coupling))
}

/// `d_{W^q}` without the coupling.
pub fn wasserstein_distance(
    space: &FiniteMetricSpace,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    q: f64,
) -> Result<f64> {
    wasserstein(space, mu, nu, q).map(|r| r.0)
}

/// Minimizes `Σ c_ij x_ij` subject to row sums `supply`, column sums
/// `demand`, `x >= 0`. North-west-corner start, MODI potentials, and
/// Bland's rule for both entering and leaving variables.
fn transportation_simplex(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (m, n) = (supply.len(), demand.len());
    let mut flow = vec![vec![0.0; n]; m];
    let mut basic = vec![vec![false; n]; m];

    // north-west corner: a staircase of exactly m + n - 1 basic cells
    let (mut a, mut b) = (supply.to_vec(), demand.to_vec());
    let (mut i, mut j) = (0, 0);
    loop {
        let x = a[i].min(b[j]);
        flow[i][j] = x;
        basic[i][j] = true;
        a[i] -= x;
        b[j] -= x;
        if i == m - 1 && j == n - 1 {
            break;
        }
        if i == m - 1 {
            j += 1;
        } else if j == n - 1 || a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }

    // Bland's rule guarantees termination; the cap only guards against
    // floating-point pathologies.
    let max_iter = 50 * (m + n) * (m * n).max(1);
    let mut u = vec![0.0; m];
    let mut v = vec![0.0; n];
    for _ in 0..max_iter {
        potentials(cost, &basic, &mut u, &mut v);
        let entering = (0..m)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !basic[i][j] && cost[i][j] - u[i] - v[j] < -PIVOT_TOLERANCE);
        let Some((ei, ej)) = entering else { break };
        let cycle = basis_cycle(&basic, ei, ej);
        // cycle[0] is the entering cell; odd positions lose flow
        let theta = cycle
            .iter()
            .skip(1)
            .step_by(2)
            .map(|&(i, j)| flow[i][j])
            .fold(f64::INFINITY, f64::min);
        let leaving = cycle
            .iter()
            .skip(1)
            .step_by(2)
            .copied()
            .filter(|&(i, j)| flow[i][j] == theta)
            .min()
            .expect("cycle has a donor cell");
        for (k, &(i, j)) in cycle.iter().enumerate() {
            if k % 2 == 0 {
                flow[i][j] += theta;
            } else {
                flow[i][j] = (flow[i][j] - theta).max(0.0);
            }
        }
        basic[ei][ej] = true;
        basic[leaving.0][leaving.1] = false;
        flow[leaving.0][leaving.1] = 0.0;
    }
    flow
}

/// Solves `u_i + v_j = c_ij` on the basis tree with `u_0 = 0`.
fn potentials(cost: &[Vec<f64>], basic: &[Vec<bool>], u: &mut [f64], v: &mut [f64]) {
    let (m, n) = (u.len(), v.len());
    let mut seen_u = vec![false; m];
    let mut seen_v = vec![false; n];
    let mut stack: Vec<(bool, usize)> = vec![(true, 0)];
    u[0] = 0.0;
    seen_u[0] = true;
    while let Some((is_row, k)) = stack.pop() {
        if is_row {
            for j in 0..n {
                if basic[k][j] && !seen_v[j] {
                    v[j] = cost[k][j] - u[k];
                    seen_v[j] = true;
                    stack.push((false, j));
                }
            }
        } else {
            for i in 0..m {
                if basic[i][k] && !seen_u[i] {
                    u[i] = cost[i][k] - v[k];
                    seen_u[i] = true;
                    stack.push((true, i));
                }
            }
        }
    }
}

/// The unique cycle formed by adding non-basic cell `(ei, ej)` to the
/// basis tree, starting at that cell and alternating row/column moves.
fn basis_cycle(basic: &[Vec<bool>], ei: usize, ej: usize) -> Vec<(usize, usize)> {
    let (m, n) = (basic.len(), basic[0].len());
    // BFS over the bipartite tree from column ej to row ei
    // nodes: rows 0..m, columns m..m+n
    let mut parent = vec![usize::MAX; m + n];
    let start = m + ej;
    parent[start] = start;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        if node == ei {
            break;
        }
        if node < m {
            for j in 0..n {
                if basic[node][j] && parent[m + j] == usize::MAX {
                    parent[m + j] = node;
                    queue.push_back(m + j);
                }
            }
        } else {
            let j = node - m;
            for i in 0..m {
                if basic[i][j] && parent[i] == usize::MAX {
                    parent[i] = node;
                    queue.push_back(i);
                }
            }
        }
    }
    // walk back from row ei to column ej collecting tree edges
    let mut cells = vec![(ei, ej)];
    let mut node = ei;
    while node != start {
        let p = parent[node];
        let cell = if node < m {
            (node, p - m)
        } else {
            (p, node - m)
        };
        cells.push(cell);
        node = p;
    }
    cells
}
