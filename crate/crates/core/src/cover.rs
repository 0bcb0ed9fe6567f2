//! Uniformly bounded covers of a finite metric space and the containment
//! test `σ ⊆ W for some W` that drives Vietoris complex construction.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{euclidean, FiniteMetricSpace, PointCloud, Subset};
use crate::miniball::minimal_enclosing_ball;

/// Explicit covers with more elements than this get a point → elements index.
pub const INDEX_THRESHOLD: usize = 10_000;

/// Slack added to the largest element diameter of an explicit cover to
/// produce a strict uniform bound.
pub const EXPLICIT_BOUND_SLACK: f64 = 1e-9;

/// Where ambient ball centers may be placed.
#[derive(Clone, Debug, PartialEq)]
pub enum Witnesses {
    /// Any point of `R^D` (the exact ambient Čech condition).
    Continuum,
    /// Only the listed points of `R^D`.
    Finite(PointCloud),
}

#[derive(Clone, Debug)]
pub struct ExplicitCover {
    elements: Vec<Subset>,
    by_point: Option<Vec<Vec<usize>>>,
}

impl ExplicitCover {
    pub fn elements(&self) -> &[Subset] {
        &self.elements
    }

    fn candidates(&self, first: usize) -> Box<dyn Iterator<Item = &Subset> + '_> {
        match &self.by_point {
            Some(index) => match index.get(first) {
                Some(ids) => Box::new(ids.iter().map(|&k| &self.elements[k])),
                None => Box::new(std::iter::empty()),
            },
            None => Box::new(self.elements.iter()),
        }
    }
}

/// A cover `𝒲` of a finite metric space, either as an explicit list of
/// sets or implicitly through a containment predicate.
#[derive(Clone, Debug)]
pub enum Cover {
    Explicit(ExplicitCover),
    /// All subsets of diameter `< r`; yields the Vietoris–Rips complex.
    Diameter {
        r: f64,
    },
    /// The balls `B_X(x; r)` for `x ∈ X`; yields the intrinsic Čech complex.
    Ball {
        r: f64,
    },
    /// Traces on `X` of Euclidean balls `B(z; r)`; `coords` embeds the
    /// points of `X` in `R^D` and `witnesses` restricts the centers `z`.
    AmbientBall {
        coords: PointCloud,
        r: f64,
        witnesses: Witnesses,
    },
}

fn positive(r: f64) -> Result<f64> {
    if r > 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(Error::InvalidParameter(format!(
            "cover radius must be positive and finite, got {r}"
        )))
    }
}

impl Cover {
    pub fn explicit(elements: Vec<Subset>) -> Result<Cover> {
        if elements.iter().any(Subset::is_empty) {
            return Err(Error::InvalidCover(
                "cover elements must be nonempty".into(),
            ));
        }
        let by_point = (elements.len() > INDEX_THRESHOLD).then(|| {
            let n = elements
                .iter()
                .filter_map(|e| e.indices().last())
                .max()
                .map_or(0, |m| m + 1);
            let mut index = vec![Vec::new(); n];
            for (k, e) in elements.iter().enumerate() {
                for &p in e.indices() {
                    index[p].push(k);
                }
            }
            index
        });
        Ok(Cover::Explicit(ExplicitCover { elements, by_point }))
    }

    pub fn diameter(r: f64) -> Result<Cover> {
        Ok(Cover::Diameter { r: positive(r)? })
    }

    pub fn ball(r: f64) -> Result<Cover> {
        Ok(Cover::Ball { r: positive(r)? })
    }

    pub fn ambient_ball(coords: PointCloud, r: f64) -> Result<Cover> {
        Ok(Cover::AmbientBall {
            coords,
            r: positive(r)?,
            witnesses: Witnesses::Continuum,
        })
    }

    /// Ambient balls whose centers are restricted to `centers`.
    pub fn ambient_ball_with_centers(
        coords: PointCloud,
        r: f64,
        centers: PointCloud,
    ) -> Result<Cover> {
        if centers.dim() != coords.dim() {
            return Err(Error::InvalidCover(format!(
                "centers live in R^{} but points in R^{}",
                centers.dim(),
                coords.dim()
            )));
        }
        Ok(Cover::AmbientBall {
            coords,
            r: positive(r)?,
            witnesses: Witnesses::Finite(centers),
        })
    }

    /// The scale parameter of a parametric cover, `None` for explicit covers.
    pub fn radius(&self) -> Option<f64> {
        match self {
            Cover::Explicit(_) => None,
            Cover::Diameter { r } | Cover::Ball { r } | Cover::AmbientBall { r, .. } => Some(*r),
        }
    }

    /// Same family at a different scale. Explicit covers are returned unchanged.
    pub fn at_radius(&self, r: f64) -> Result<Cover> {
        let r = positive(r)?;
        Ok(match self {
            Cover::Explicit(_) => self.clone(),
            Cover::Diameter { .. } => Cover::Diameter { r },
            Cover::Ball { .. } => Cover::Ball { r },
            Cover::AmbientBall {
                coords, witnesses, ..
            } => Cover::AmbientBall {
                coords: coords.clone(),
                r,
                witnesses: witnesses.clone(),
            },
        })
    }

    pub fn as_explicit(&self) -> Option<&ExplicitCover> {
        match self {
            Cover::Explicit(e) => Some(e),
            _ => None,
        }
    }

    /// Whether some element of the cover contains `s`.
    pub fn contains_set(&self, space: &FiniteMetricSpace, s: &Subset) -> Result<bool> {
        if s.is_empty() {
            return Err(Error::EmptySubset);
        }
        s.check_range(space.len())?;
        if let Cover::AmbientBall { coords, .. } = self {
            if coords.len() != space.len() {
                return Err(Error::InvalidCover(format!(
                    "embedding has {} points but the space has {}",
                    coords.len(),
                    space.len()
                )));
            }
        }
        Ok(self.contains_unchecked(space, s.indices()))
    }

    pub(crate) fn contains_unchecked(&self, space: &FiniteMetricSpace, idx: &[usize]) -> bool {
        match self {
            Cover::Explicit(cover) => {
                let s = Subset::new(idx.to_vec());
                cover.candidates(idx[0]).any(|w| s.is_subset_of(w))
            }
            Cover::Diameter { r } => space.diameter_unchecked(idx) < *r,
            Cover::Ball { r } => (0..space.len()).any(|x| idx.iter().all(|&p| space.d(x, p) < *r)),
            Cover::AmbientBall {
                coords,
                r,
                witnesses,
            } => match witnesses {
                Witnesses::Continuum => {
                    let pts: Vec<&[f64]> = idx.iter().map(|&p| coords.point(p)).collect();
                    minimal_enclosing_ball(&pts).radius < *r
                }
                Witnesses::Finite(centers) => centers
                    .points()
                    .iter()
                    .any(|z| idx.iter().all(|&p| euclidean(z, coords.point(p)) < *r)),
            },
        }
    }

    /// Checks the covering property and reports the uniform bound.
    pub fn validate(&self, space: &FiniteMetricSpace) -> CoverReport {
        let n = space.len();
        let uncovered: Vec<usize> = (0..n)
            .filter(|&p| match self {
                Cover::AmbientBall { coords, .. } if coords.len() != n => true,
                _ => !self.contains_unchecked(space, &[p]),
            })
            .collect();
        let (bound, element_count) = match self {
            Cover::Explicit(cover) => {
                let in_range = cover.elements.iter().all(|e| e.check_range(n).is_ok());
                let max_diam = if in_range {
                    cover
                        .elements
                        .iter()
                        .map(|e| space.diameter_unchecked(e.indices()))
                        .fold(0.0, f64::max)
                } else {
                    f64::INFINITY
                };
                (max_diam + EXPLICIT_BOUND_SLACK, Some(cover.elements.len()))
            }
            Cover::Diameter { r } => (*r, None),
            Cover::Ball { r } | Cover::AmbientBall { r, .. } => (2.0 * r, None),
        };
        CoverReport {
            covers: uncovered.is_empty(),
            uncovered,
            bound,
            element_count,
        }
    }
}

/// Result of [`Cover::validate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverReport {
    pub covers: bool,
    pub uncovered: Vec<usize>,
    /// Every element has diameter strictly below this value.
    pub bound: f64,
    pub element_count: Option<usize>,
}

impl CoverReport {
    pub fn is_valid(&self) -> bool {
        self.covers && self.bound.is_finite()
    }
}
