//! Filtrations, Z/2 persistent homology and static Betti numbers.
//!
//! Simplices are indexed by their diameter. Because membership in the
//! open complex `VR(X; r)` is `diam < r`, a bar `(b, d)` reported here
//! means the class is present in `VR(X; r)` exactly for `b < r <= d`.

mod bottleneck;
pub mod reduction;

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

pub use bottleneck::bottleneck_distance;

use crate::complex::{vietoris_complex, SimplicialComplex};
use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, Subset};
use reduction::{reduce_block, Column};

/// A filtered simplicial complex: simplices with entry values, ordered by
/// (value, dimension, lexicographic vertex order).
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    entries: Vec<(Subset, f64)>,
    max_dim: usize,
    r_max: f64,
    source: String,
}

impl Filtration {
    /// Wraps entries as given. `max_dim` is the top homology dimension to
    /// report; simplices up to dimension `max_dim + 1` are used. Order and
    /// monotonicity are checked by [`Filtration::validate`].
    pub fn from_entries(
        entries: Vec<(Subset, f64)>,
        max_dim: usize,
        r_max: f64,
        source: impl Into<String>,
    ) -> Self {
        Filtration {
            entries,
            max_dim,
            r_max,
            source: source.into(),
        }
    }

    /// Sorts `entries` into canonical order before wrapping them.
    pub fn from_unsorted(
        mut entries: Vec<(Subset, f64)>,
        max_dim: usize,
        r_max: f64,
        source: impl Into<String>,
    ) -> Self {
        entries.sort_by(|a, b| {
            a.1.total_cmp(&b.1)
                .then(a.0.len().cmp(&b.0.len()))
                .then_with(|| a.0.cmp(&b.0))
        });
        Self::from_entries(entries, max_dim, r_max, source)
    }

    pub fn entries(&self) -> &[(Subset, f64)] {
        &self.entries
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Values at which the complex changes, ascending and distinct.
    pub fn critical_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.entries.iter().map(|e| e.1).collect();
        v.dedup();
        v
    }

    /// The static complex of simplices with value `<= v`.
    pub fn complex_at(&self, n_vertices: usize, v: f64) -> Result<SimplicialComplex> {
        let gens: Vec<Subset> = self
            .entries
            .iter()
            .filter(|e| e.1 <= v)
            .map(|e| e.0.clone())
            .collect();
        SimplicialComplex::from_generators(n_vertices, self.max_dim + 1, &gens)
    }

    /// Checks that every face precedes its cofaces with a value no larger.
    pub fn validate(&self) -> Result<()> {
        let mut position: HashMap<&Subset, usize> = HashMap::with_capacity(self.entries.len());
        for (k, (s, v)) in self.entries.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::NotAFiltration("empty simplex".into()));
            }
            if !v.is_finite() {
                return Err(Error::NotAFiltration(format!("simplex {s} has value {v}")));
            }
            if position.insert(s, k).is_some() {
                return Err(Error::NotAFiltration(format!("simplex {s} appears twice")));
            }
            if s.len() > 1 {
                for face in s.facets() {
                    match position.get(&face) {
                        Some(&p) if self.entries[p].1 <= *v => {}
                        Some(_) => {
                            return Err(Error::NotAFiltration(format!(
                                "face {face} has a larger value than {s}"
                            )))
                        }
                        None => {
                            return Err(Error::NotAFiltration(format!(
                                "face {face} does not precede {s}"
                            )))
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Every simplex of dimension `<= max_dim + 1` with diameter `< r_max`,
/// entering at its diameter.
pub fn build_vr_filtration(
    space: &FiniteMetricSpace,
    max_dim: usize,
    r_max: f64,
) -> Result<Filtration> {
    if !(r_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "r_max must be positive, got {r_max}"
        )));
    }
    let cover = Cover::diameter(r_max)?;
    let complex = vietoris_complex(space, &cover, max_dim + 1)?;
    let entries = complex
        .iter()
        .map(|s| (s.clone(), space.diameter_unchecked(s.indices())))
        .collect();
    Ok(Filtration::from_unsorted(
        entries,
        max_dim,
        r_max,
        format!("vietoris-rips r_max={r_max}"),
    ))
}

/// A bar; `death` is `f64::INFINITY` for essential classes.
pub type Bar = (f64, f64);

/// Birth/death multisets per homology dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceDiagram {
    dims: Vec<Vec<Bar>>,
    r_max: f64,
}

impl PersistenceDiagram {
    /// Builds a diagram, dropping zero-length bars and sorting each dimension.
    pub fn new(mut dims: Vec<Vec<Bar>>, r_max: f64) -> Self {
        for bars in &mut dims {
            bars.retain(|&(b, d)| b < d);
            bars.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        }
        PersistenceDiagram { dims, r_max }
    }

    pub fn bars(&self, dim: usize) -> &[Bar] {
        self.dims.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn max_dim(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn n_dims(&self) -> usize {
        self.dims.len()
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Number of bars of dimension `dim` containing the parameter value `v`
    /// in the closed-sublevel sense `birth <= v < death`.
    pub fn rank_at(&self, dim: usize, v: f64) -> usize {
        self.bars(dim)
            .iter()
            .filter(|&&(b, d)| b <= v && v < d)
            .count()
    }

    /// Bars born by `lo` and still alive past `hi`.
    pub fn alive_over(&self, dim: usize, lo: f64, hi: f64) -> usize {
        self.bars(dim)
            .iter()
            .filter(|&&(b, d)| b <= lo && d > hi)
            .count()
    }

    pub fn to_json(&self) -> Value {
        let mut dims = serde_json::Map::new();
        for (k, bars) in self.dims.iter().enumerate() {
            let list: Vec<Value> = bars
                .iter()
                .map(|&(b, d)| {
                    if d.is_finite() {
                        json!([b, d])
                    } else {
                        json!([b, "inf"])
                    }
                })
                .collect();
            dims.insert(k.to_string(), Value::Array(list));
        }
        json!({ "dims": dims, "r_max": self.r_max })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("diagram JSON: {m}"));
        let dims_obj = value
            .get("dims")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing \"dims\" object"))?;
        let r_max = match value.get("r_max") {
            Some(Value::String(s)) if s == "inf" => f64::INFINITY,
            Some(v) => v
                .as_f64()
                .ok_or_else(|| bad("\"r_max\" must be a number"))?,
            None => return Err(bad("missing \"r_max\"")),
        };
        let mut by_dim: BTreeMap<usize, Vec<Bar>> = BTreeMap::new();
        for (key, bars) in dims_obj {
            let dim: usize = key
                .parse()
                .map_err(|_| bad("dimension keys must be integers"))?;
            let mut list = Vec::new();
            for bar in bars.as_array().ok_or_else(|| bad("bars must be arrays"))? {
                let pair = bar
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| bad("bar must be [birth, death]"))?;
                let birth = pair[0]
                    .as_f64()
                    .ok_or_else(|| bad("birth must be a number"))?;
                let death = match &pair[1] {
                    Value::String(s) if s == "inf" => f64::INFINITY,
                    v => v
                        .as_f64()
                        .ok_or_else(|| bad("death must be a number or \"inf\""))?,
                };
                list.push((birth, death));
            }
            by_dim.insert(dim, list);
        }
        let n = by_dim.keys().next_back().map_or(0, |m| m + 1);
        let mut dims = vec![Vec::new(); n];
        for (k, v) in by_dim {
            dims[k] = v;
        }
        Ok(PersistenceDiagram::new(dims, r_max))
    }
}

/// Z/2 persistence of a filtration by column reduction with clearing:
/// blocks are reduced from the top dimension down, and every pivot found
/// in dimension `k` zeroes the matching column of dimension `k - 1`.
pub fn persistence(f: &Filtration) -> Result<PersistenceDiagram> {
    f.validate()?;
    let top = f.max_dim + 1;
    // per-dimension filtration positions, in filtration order
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for (k, (s, _)) in f.entries.iter().enumerate() {
        if s.dim() <= top {
            by_dim[s.dim()].push(k);
        }
    }
    let mut local: HashMap<&Subset, u32> = HashMap::with_capacity(f.entries.len());
    for positions in &by_dim {
        for (i, &p) in positions.iter().enumerate() {
            local.insert(&f.entries[p].0, i as u32);
        }
    }
    // paired_as_birth[k][i]: the i-th simplex of dimension k is the pivot of some column
    let mut paired: Vec<Vec<bool>> = by_dim.iter().map(|v| vec![false; v.len()]).collect();
    let mut negative: Vec<Vec<bool>> = paired.clone();
    let mut bars: Vec<Vec<Bar>> = vec![Vec::new(); f.max_dim + 1];

    for k in (1..=top).rev() {
        let n_rows = by_dim[k - 1].len();
        let mut columns: Vec<Column> = by_dim[k]
            .iter()
            .map(|&p| {
                let rows = f.entries[p].0.facets().map(|face| local[&face]).collect();
                Column::from_rows(rows, n_rows)
            })
            .collect();
        let lows = reduce_block(&mut columns, &paired[k]);
        for (j, low) in lows.into_iter().enumerate() {
            if let Some(i) = low {
                let i = i as usize;
                paired[k - 1][i] = true;
                negative[k][j] = true;
                let birth = f.entries[by_dim[k - 1][i]].1;
                let death = f.entries[by_dim[k][j]].1;
                if k - 1 <= f.max_dim {
                    bars[k - 1].push((birth, death));
                }
            }
        }
    }
    for k in 0..=f.max_dim.min(top) {
        for (i, &p) in by_dim[k].iter().enumerate() {
            if !paired[k][i] && !negative[k][i] {
                bars[k].push((f.entries[p].1, f64::INFINITY));
            }
        }
    }
    Ok(PersistenceDiagram::new(bars, f.r_max))
}

/// Z/2 Betti numbers `b_0..=b_max_dim` of a static complex. The top stored
/// dimension of `c` has no coboundary block, so `b_{c.max_dim()}` is that of
/// the truncated skeleton; dimensions above `c.max_dim()` report zero.
pub fn betti_numbers(c: &SimplicialComplex, max_dim: usize) -> Vec<usize> {
    let mut ranks = vec![0usize; c.max_dim() + 2];
    for k in 1..=c.max_dim() {
        let rows: HashMap<&Subset, u32> = c
            .simplices(k - 1)
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i as u32))
            .collect();
        let cols = c
            .simplices(k)
            .iter()
            .map(|s| s.facets().map(|f| rows[&f]).collect())
            .collect();
        ranks[k] = reduction::rank(cols, rows.len());
    }
    (0..=max_dim)
        .map(|k| {
            if k > c.max_dim() {
                0
            } else {
                c.simplices(k).len() - ranks[k] - ranks[k + 1]
            }
        })
        .collect()
}
