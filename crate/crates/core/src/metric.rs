//! Finite metric spaces, Euclidean point clouds and the basic metric
//! operations (diameters, open balls, nets, Hausdorff distance).
//!
//! All comparisons against a radius are literal strict floating-point
//! comparisons: `d < r`, never `d <= r + tol`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when validating symmetry, the zero diagonal and the
/// triangle inequality.
pub const METRIC_TOLERANCE: f64 = 1e-9;

/// A sorted set of point indices without duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subset(Vec<usize>);

impl Subset {
    /// Builds a subset from arbitrary indices, sorting and deduplicating them.
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Subset(indices)
    }

    /// Wraps indices that are already strictly increasing.
    pub fn from_sorted(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "subset indices must be strictly increasing: {indices:?}"
            )));
        }
        Ok(Subset(indices))
    }

    pub fn singleton(i: usize) -> Self {
        Subset(vec![i])
    }

    /// The subset `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        Subset((0..n).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Simplex dimension, `len - 1`. Undefined for the empty set.
    pub fn dim(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        let mut it = other.0.iter();
        'outer: for &x in &self.0 {
            for &y in it.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Subset::new(v)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        Subset(
            self.0
                .iter()
                .copied()
                .filter(|&i| other.contains(i))
                .collect(),
        )
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.0.iter().all(|&i| !other.contains(i))
    }

    /// The codimension-one faces, in the order obtained by deleting the
    /// vertex at position 0, 1, ...
    pub fn facets(&self) -> impl Iterator<Item = Subset> + '_ {
        (0..self.0.len()).map(move |skip| {
            Subset(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }

    /// Returns a copy with `v` inserted.
    pub fn with(&self, v: usize) -> Subset {
        let mut out = self.0.clone();
        if let Err(pos) = out.binary_search(&v) {
            out.insert(pos, v);
        }
        Subset(out)
    }

    pub fn check_range(&self, len: usize) -> Result<()> {
        match self.0.last() {
            Some(&index) if index >= len => Err(Error::IndexOutOfRange { index, len }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Subset::new(iter.into_iter().collect())
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A finite metric space stored as a dense symmetric distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl FiniteMetricSpace {
    /// Builds a space from a square matrix. Symmetry and the zero diagonal
    /// are always enforced (within [`METRIC_TOLERANCE`]); the O(n³)
    /// triangle-inequality check only runs when `check_triangle` is set.
    pub fn from_matrix(rows: Vec<Vec<f64>>, check_triangle: bool) -> Result<Self> {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMetric(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            dist.extend_from_slice(row);
        }
        Self::from_flat(n, dist, check_triangle)
    }

    /// Builds a space from a row-major `n*n` buffer.
    pub fn from_flat(n: usize, mut dist: Vec<f64>, check_triangle: bool) -> Result<Self> {
        if dist.len() != n * n {
            return Err(Error::InvalidMetric(format!(
                "expected {} entries, got {}",
                n * n,
                dist.len()
            )));
        }
        for i in 0..n {
            let d = dist[i * n + i];
            if !d.is_finite() || d.abs() > METRIC_TOLERANCE {
                return Err(Error::InvalidMetric(format!(
                    "nonzero diagonal at {i}: {d}"
                )));
            }
            dist[i * n + i] = 0.0;
            for j in (i + 1)..n {
                let a = dist[i * n + j];
                let b = dist[j * n + i];
                if !a.is_finite() || !b.is_finite() || a < 0.0 || b < 0.0 {
                    return Err(Error::InvalidMetric(format!(
                        "distance ({i},{j}) must be finite and non-negative"
                    )));
                }
                if (a - b).abs() > METRIC_TOLERANCE {
                    return Err(Error::InvalidMetric(format!(
                        "asymmetric entries at ({i},{j}): {a} vs {b}"
                    )));
                }
                dist[j * n + i] = a;
            }
        }
        let space = FiniteMetricSpace {
            n,
            dist,
            labels: None,
        };
        if check_triangle {
            if let Some((i, j, k)) = space.triangle_violation() {
                return Err(Error::InvalidMetric(format!(
                    "triangle inequality fails for ({i},{j},{k})"
                )));
            }
        }
        Ok(space)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} points",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// First triple with `d(i,k) > d(i,j) + d(j,k) + tol`, if any.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.d(i, k) > self.d(i, j) + self.d(j, k) + METRIC_TOLERANCE {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Distance between points `i` and `j`. Panics when out of range.
    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.dist.chunks(self.n.max(1)).take(self.n)
    }

    /// Restriction of the metric to `s`; point `k` of the result is `s[k]`.
    pub fn subspace(&self, s: &Subset) -> Result<FiniteMetricSpace> {
        s.check_range(self.n)?;
        let idx = s.indices();
        let m = idx.len();
        let mut dist = Vec::with_capacity(m * m);
        for &i in idx {
            for &j in idx {
                dist.push(self.d(i, j));
            }
        }
        Ok(FiniteMetricSpace {
            n: m,
            dist,
            labels: None,
        })
    }

    /// Largest pairwise distance in `s`; zero for singletons.
    pub fn diameter(&self, s: &Subset) -> Result<f64> {
        if s.is_empty() {
            return Err(Error::EmptySubset);
        }
        s.check_range(self.n)?;
        Ok(self.diameter_unchecked(s.indices()))
    }

    pub(crate) fn diameter_unchecked(&self, idx: &[usize]) -> f64 {
        let mut best = 0.0f64;
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                best = best.max(self.d(i, j));
            }
        }
        best
    }

    /// Diameter of the whole space (zero when empty).
    pub fn space_diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// `B(center; r) = { y : d(y, center) < r }`.
    pub fn open_ball(&self, center: usize, r: f64) -> Result<Subset> {
        if center >= self.n {
            return Err(Error::IndexOutOfRange {
                index: center,
                len: self.n,
            });
        }
        if !(r > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {r}"
            )));
        }
        Ok(Subset(
            self.row(center)
                .iter()
                .enumerate()
                .filter(|&(_, &d)| d < r)
                .map(|(j, _)| j)
                .collect(),
        ))
    }

    /// Greedy farthest-point net: starting from `seed_index`, repeatedly adds
    /// the point farthest from the current net until every point lies at
    /// distance `< eps` from it. Ties go to the lowest index.
    pub fn epsilon_net(&self, eps: f64, seed_index: usize) -> Result<Subset> {
        if !(eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "eps must be positive, got {eps}"
            )));
        }
        if seed_index >= self.n {
            return Err(Error::IndexOutOfRange {
                index: seed_index,
                len: self.n,
            });
        }
        let mut net = vec![seed_index];
        let mut to_net: Vec<f64> = self.row(seed_index).to_vec();
        loop {
            let (far, far_d) =
                to_net
                    .iter()
                    .copied()
                    .enumerate()
                    .fold(
                        (0, f64::NEG_INFINITY),
                        |acc, (j, d)| if d > acc.1 { (j, d) } else { acc },
                    );
            if far_d < eps {
                break;
            }
            net.push(far);
            for (j, slot) in to_net.iter_mut().enumerate() {
                *slot = slot.min(self.d(far, j));
            }
        }
        Ok(Subset::new(net))
    }

    /// Symmetric Hausdorff distance between two nonempty subsets.
    pub fn hausdorff_distance(&self, a: &Subset, b: &Subset) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySubset);
        }
        a.check_range(self.n)?;
        b.check_range(self.n)?;
        let directed = |from: &Subset, to: &Subset| {
            from.indices()
                .iter()
                .map(|&i| {
                    to.indices()
                        .iter()
                        .map(|&j| self.d(i, j))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        Ok(directed(a, b).max(directed(b, a)))
    }

    /// Smallest positive pairwise distance, `None` when all points coincide.
    pub fn min_positive_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let d = self.d(i, j);
                if d > 0.0 && best.is_none_or(|b| d < b) {
                    best = Some(d);
                }
            }
        }
        best
    }
}

/// A cloud of points in `R^D` with a shared dimension `D >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).unwrap_or(0);
        if points.is_empty() {
            return Err(Error::InvalidParameter("point cloud is empty".into()));
        }
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "points must have dimension >= 1".into(),
            ));
        }
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(Error::InvalidParameter(format!(
                "point {i} has dimension {}, expected {dim}",
                p.len()
            )));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("coordinates must be finite".into()));
        }
        Ok(PointCloud { points, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// The induced Euclidean metric space. Euclidean distances always
    /// satisfy the triangle inequality, so it is not re-checked.
    pub fn to_metric(&self) -> FiniteMetricSpace {
        let n = self.points.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(&self.points[i], &self.points[j]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        FiniteMetricSpace {
            n,
            dist,
            labels: None,
        }
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Vertices of a regular `n`-gon on the circle of radius `radius`,
/// starting at angle zero.
pub fn regular_polygon(n: usize, radius: f64) -> PointCloud {
    let points = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            vec![radius * t.cos(), radius * t.sin()]
        })
        .collect();
    PointCloud { points, dim: 2 }
}
