//! Vietoris complexes of finite metric spaces, their persistent homology,
//! metric thickenings by finitely supported measures, and the neighborhood
//! constructions of those thickenings.

pub mod audit;
pub mod complex;
pub mod cover;
pub mod error;
pub mod experiments;
pub mod homology;
pub mod io;
pub mod local;
pub mod metric;
pub mod miniball;
pub mod sampling;
pub mod thickening;
pub mod transport;

pub use complex::{nerve_complex, vietoris_complex, Nerve, SimplicialComplex};
pub use cover::{Cover, CoverReport, ExplicitCover, Witnesses};
pub use error::{Error, Result};
pub use homology::{
    betti_numbers, bottleneck_distance, build_vr_filtration, persistence, Bar, Filtration,
    PersistenceDiagram,
};
pub use metric::{FiniteMetricSpace, PointCloud, Subset};
pub use thickening::{sample_thickening, SampledThickening, ThickeningSpec};
pub use transport::{dirac, wasserstein, wasserstein_distance, Coupling, DiscreteMeasure};
