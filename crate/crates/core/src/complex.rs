//! Vietoris complexes of covers (with Vietoris–Rips and Čech complexes as
//! special cases) and nerves of explicit covers, truncated at `max_dim`.

use serde::{Deserialize, Serialize};

use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, Subset};

/// Dimension cap used when callers do not choose one.
pub const DEFAULT_MAX_DIM: usize = 2;

/// A finite simplicial complex, stored dimension by dimension with every
/// simplex sorted and each dimension in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    n_vertices: usize,
    max_dim: usize,
    simplices: Vec<Vec<Subset>>,
}

impl SimplicialComplex {
    /// Downward closure of `generators`, truncated at `max_dim`.
    pub fn from_generators(
        n_vertices: usize,
        max_dim: usize,
        generators: &[Subset],
    ) -> Result<Self> {
        let mut by_dim: Vec<std::collections::BTreeSet<Subset>> =
            vec![Default::default(); max_dim + 1];
        for g in generators {
            if g.is_empty() {
                continue;
            }
            g.check_range(n_vertices)?;
            let idx = g.indices();
            let k = idx.len();
            // enumerate all nonempty faces of size <= max_dim + 1
            for mask in 1u64..(1u64 << k.min(63)) {
                let size = mask.count_ones() as usize;
                if size > max_dim + 1 {
                    continue;
                }
                let face = Subset::new(
                    (0..k)
                        .filter(|b| mask >> b & 1 == 1)
                        .map(|b| idx[b])
                        .collect(),
                );
                by_dim[size - 1].insert(face);
            }
        }
        Ok(SimplicialComplex {
            n_vertices,
            max_dim,
            simplices: by_dim
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
        })
    }

    fn from_lists(n_vertices: usize, max_dim: usize, mut simplices: Vec<Vec<Subset>>) -> Self {
        simplices.resize(max_dim + 1, Vec::new());
        for level in &mut simplices {
            level.sort();
            level.dedup();
        }
        SimplicialComplex {
            n_vertices,
            max_dim,
            simplices,
        }
    }

    /// Size of the ambient vertex set (points of the space, or cover elements
    /// for a nerve).
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Simplices of dimension `k` (empty beyond `max_dim`).
    pub fn simplices(&self, k: usize) -> &[Subset] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Subset> {
        self.simplices.iter().flatten()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, s: &Subset) -> bool {
        !s.is_empty() && self.simplices(s.dim()).binary_search(s).is_ok()
    }

    pub fn is_downward_closed(&self) -> bool {
        self.iter()
            .filter(|s| s.len() > 1)
            .all(|s| s.facets().all(|f| self.contains(&f)))
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    /// Alternating sum of simplex counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(k, level)| {
                if k % 2 == 0 {
                    level.len() as i64
                } else {
                    -(level.len() as i64)
                }
            })
            .sum()
    }

    pub fn to_dump(&self) -> ComplexDump {
        ComplexDump {
            max_dim: self.max_dim,
            simplices: self.iter().map(|s| s.indices().to_vec()).collect(),
        }
    }

    pub fn from_dump(n_vertices: usize, dump: &ComplexDump) -> Result<Self> {
        let mut lists = vec![Vec::new(); dump.max_dim + 1];
        for s in &dump.simplices {
            let s = Subset::new(s.clone());
            if s.is_empty() || s.dim() > dump.max_dim {
                return Err(Error::Parse(format!(
                    "simplex {s} does not fit max_dim {}",
                    dump.max_dim
                )));
            }
            s.check_range(n_vertices)?;
            lists[s.dim()].push(s);
        }
        Ok(Self::from_lists(n_vertices, dump.max_dim, lists))
    }
}

/// JSON form of a complex: simplices sorted by (dimension, lexicographic).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDump {
    pub max_dim: usize,
    pub simplices: Vec<Vec<usize>>,
}

/// `V(𝒲)`: all `σ` with `|σ| <= max_dim + 1` contained in an element of the
/// cover. Diameter covers are built as the clique expansion of the graph
/// `d(x, y) < r`; other covers test containment on every candidate.
pub fn vietoris_complex(
    space: &FiniteMetricSpace,
    cover: &Cover,
    max_dim: usize,
) -> Result<SimplicialComplex> {
    if let Cover::AmbientBall { coords, .. } = cover {
        if coords.len() != space.len() {
            return Err(Error::InvalidCover(
                "embedding size does not match the space".into(),
            ));
        }
    }
    if let Some(e) = cover.as_explicit() {
        for w in e.elements() {
            w.check_range(space.len())?;
        }
    }
    let n = space.len();
    let vertices: Vec<usize> = (0..n)
        .filter(|&v| cover.contains_unchecked(space, &[v]))
        .collect();
    // upper neighbors in the 1-skeleton
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
    if max_dim >= 1 {
        for (a, &u) in vertices.iter().enumerate() {
            for &v in &vertices[a + 1..] {
                if cover.contains_unchecked(space, &[u, v]) {
                    up[u].push(v);
                }
            }
        }
    }
    let is_flag = matches!(cover, Cover::Diameter { .. });
    let mut lists: Vec<Vec<Subset>> = vec![Vec::new(); max_dim + 1];
    let mut current = Vec::with_capacity(max_dim + 1);
    for &v in &vertices {
        current.push(v);
        lists[0].push(Subset::singleton(v));
        expand(
            space,
            cover,
            is_flag,
            &up,
            &mut current,
            &up[v],
            max_dim,
            &mut lists,
        );
        current.pop();
    }
    Ok(SimplicialComplex::from_lists(n, max_dim, lists))
}

#[allow(clippy::too_many_arguments)]
fn expand(
    space: &FiniteMetricSpace,
    cover: &Cover,
    is_flag: bool,
    up: &[Vec<usize>],
    current: &mut Vec<usize>,
    candidates: &[usize],
    max_dim: usize,
    lists: &mut [Vec<Subset>],
) {
    if current.len() > max_dim {
        return;
    }
    for (k, &v) in candidates.iter().enumerate() {
        current.push(v);
        if current.len() == 2 || is_flag || cover.contains_unchecked(space, current) {
            lists[current.len() - 1].push(Subset::new(current.clone()));
            let next: Vec<usize> = candidates[k + 1..]
                .iter()
                .copied()
                .filter(|w| up[v].binary_search(w).is_ok())
                .collect();
            expand(space, cover, is_flag, up, current, &next, max_dim, lists);
        }
        current.pop();
    }
}

/// Nerve of an explicit cover: one vertex per element, a simplex for every
/// family of elements with a common point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nerve {
    pub complex: SimplicialComplex,
}

pub fn nerve_complex(space: &FiniteMetricSpace, cover: &Cover, max_dim: usize) -> Result<Nerve> {
    let explicit = cover.as_explicit().ok_or(Error::NerveRequiresExplicit)?;
    let elements = explicit.elements();
    for w in elements {
        w.check_range(space.len())?;
    }
    let m = elements.len();
    let mut lists: Vec<Vec<Subset>> = vec![Vec::new(); max_dim + 1];
    let mut current = Vec::new();
    fn grow(
        elements: &[Subset],
        start: usize,
        common: &Subset,
        current: &mut Vec<usize>,
        max_dim: usize,
        lists: &mut [Vec<Subset>],
    ) {
        if current.len() > max_dim {
            return;
        }
        for k in start..elements.len() {
            let meet = common.intersection(&elements[k]);
            if meet.is_empty() {
                continue;
            }
            current.push(k);
            lists[current.len() - 1].push(Subset::new(current.clone()));
            grow(elements, k + 1, &meet, current, max_dim, lists);
            current.pop();
        }
    }
    for k in 0..m {
        current.push(k);
        lists[0].push(Subset::singleton(k));
        grow(
            elements,
            k + 1,
            &elements[k],
            &mut current,
            max_dim,
            &mut lists,
        );
        current.pop();
    }
    Ok(Nerve {
        complex: SimplicialComplex::from_lists(m, max_dim, lists),
    })
}
