//! Metric thickenings `V^m(𝒲)`: probability measures whose support lies in
//! a cover element, metrized by optimal transport.

use rayon::prelude::*;

use crate::complex::vietoris_complex;
use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, Subset};
use crate::transport::{convex_combination, wasserstein_distance, DiscreteMeasure};

/// Default cap on the number of sampled measures.
pub const DEFAULT_SIZE_CAP: usize = 4000;

/// A ground space, a cover, and the transport exponent.
#[derive(Clone, Debug)]
pub struct ThickeningSpec {
    pub space: FiniteMetricSpace,
    pub cover: Cover,
    pub q: f64,
}

impl ThickeningSpec {
    /// Validates the cover and uses `q = 1`.
    pub fn new(space: FiniteMetricSpace, cover: Cover) -> Result<Self> {
        Self::with_exponent(space, cover, 1.0)
    }

    pub fn with_exponent(space: FiniteMetricSpace, cover: Cover, q: f64) -> Result<Self> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "q must lie in [1, ∞), got {q}"
            )));
        }
        let report = cover.validate(&space);
        if !report.is_valid() {
            return Err(Error::InvalidCover(format!(
                "cover is not a uniformly bounded cover (uncovered points: {:?})",
                report.uncovered
            )));
        }
        Ok(ThickeningSpec { space, cover, q })
    }

    /// Whether `μ ∈ V^m(𝒲)`, i.e. some cover element contains `supp μ`.
    pub fn member(&self, mu: &DiscreteMeasure) -> bool {
        mu.check_range(self.space.len()).is_ok()
            && self
                .cover
                .contains_unchecked(&self.space, mu.support().indices())
    }

    pub fn distance(&self, a: &DiscreteMeasure, b: &DiscreteMeasure) -> Result<f64> {
        wasserstein_distance(&self.space, a, b, self.q)
    }
}

/// Inverse of the natural bijection: the simplex `supp μ` together with the
/// barycentric coordinates of `μ` in it.
pub fn support_point(mu: &DiscreteMeasure) -> (Subset, Vec<f64>) {
    (mu.support(), mu.weights())
}

/// A finite sample of `V^m(𝒲)` with its pairwise transport distances.
#[derive(Clone, Debug)]
pub struct SampledThickening {
    measures: Vec<DiscreteMeasure>,
    metric: FiniteMetricSpace,
}

impl SampledThickening {
    pub fn measures(&self) -> &[DiscreteMeasure] {
        &self.measures
    }

    /// Pairwise transport distances; index `k` is `measures()[k]`.
    pub fn metric(&self) -> &FiniteMetricSpace {
        &self.metric
    }

    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }

    /// Index of the Dirac measure at `x`. Diracs are stored first, in point order.
    pub fn dirac_index(&self, x: usize) -> Option<usize> {
        (x < self.metric.len() && self.measures[x].atoms() == [(x, 1.0)]).then_some(x)
    }

    /// Largest nearest-neighbor distance among sampled measures.
    pub fn nearest_neighbor_radius(&self) -> f64 {
        let n = self.metric.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| self.metric.d(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of free coordinates of a measure with `support_size` atoms in a
/// `dim`-dimensional cloud: positions plus barycentric weights.
pub fn free_parameters(support_size: usize, dim: usize) -> usize {
    support_size * dim + support_size.saturating_sub(1)
}

/// All measures with at most `max_support` atoms, support in a cover
/// element, and weights in `{j / grid_m : j = 1..grid_m}`.
pub fn sample_thickening(
    spec: &ThickeningSpec,
    grid_m: usize,
    max_support: usize,
) -> Result<SampledThickening> {
    sample_thickening_with_cap(spec, grid_m, max_support, DEFAULT_SIZE_CAP)
}

pub fn sample_thickening_with_cap(
    spec: &ThickeningSpec,
    grid_m: usize,
    max_support: usize,
    cap: usize,
) -> Result<SampledThickening> {
    if grid_m == 0 || max_support == 0 {
        return Err(Error::InvalidParameter(
            "grid_m and max_support must be at least 1".into(),
        ));
    }
    let k_max = max_support.min(grid_m);
    let complex = vietoris_complex(&spec.space, &spec.cover, k_max - 1)?;
    let estimate: u128 = (1..=k_max)
        .map(|k| complex.simplices(k - 1).len() as u128 * binomial(grid_m as u64 - 1, k as u64 - 1))
        .sum();
    if estimate > cap as u128 {
        return Err(Error::SampleTooLarge { estimate, cap });
    }
    let mut measures = Vec::with_capacity(estimate as usize);
    for k in 1..=k_max {
        for simplex in complex.simplices(k - 1) {
            let mut parts = Vec::with_capacity(k);
            compositions(grid_m, k, &mut parts, &mut |parts| {
                let atoms = simplex
                    .indices()
                    .iter()
                    .zip(parts)
                    .map(|(&i, &p)| (i, p as f64 / grid_m as f64));
                measures.push(DiscreteMeasure::new(atoms).expect("grid weights sum to one"));
            });
        }
    }
    let n = measures.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j <= i {
                        0.0
                    } else {
                        spec.distance(&measures[i], &measures[j])
                            .expect("indices checked")
                    }
                })
                .collect()
        })
        .collect();
    let mut flat = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            flat[i * n + j] = rows[i][j];
            flat[j * n + i] = rows[i][j];
        }
    }
    let metric = FiniteMetricSpace::from_flat(n, flat, false)?;
    Ok(SampledThickening { measures, metric })
}

/// Calls `f` with every composition of `total` into `parts` positive
/// integers, in lexicographic order.
fn compositions(total: usize, parts: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if parts == 1 {
        acc.push(total);
        f(acc);
        acc.pop();
        return;
    }
    for first in 1..=(total - (parts - 1)) {
        acc.push(first);
        compositions(total - first, parts - 1, acc, f);
        acc.pop();
    }
}

/// `(1 - t) ζ + t · target` at `t = i / steps`, `i = 0..=steps`. The target
/// support must lie inside `supp ζ`, so every step stays in the thickening.
pub fn straight_line_path(
    spec: &ThickeningSpec,
    zeta: &DiscreteMeasure,
    target: &DiscreteMeasure,
    steps: usize,
) -> Result<Vec<DiscreteMeasure>> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    if !spec.member(zeta) || !spec.member(target) {
        return Err(Error::PathMayExit(
            "endpoints must lie in the thickening".into(),
        ));
    }
    if !target.support().is_subset_of(&zeta.support()) {
        return Err(Error::PathMayExit(format!(
            "supp target {} is not contained in supp ζ {}",
            target.support(),
            zeta.support()
        )));
    }
    (0..=steps)
        .map(|i| convex_combination(i as f64 / steps as f64, zeta, target))
        .collect()
}
