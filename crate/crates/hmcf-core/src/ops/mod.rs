//! Discrete geometric quantities on a [`TriMesh`](crate::hmesh::TriMesh):
//! areas, enclosed volume, mean curvature, Willmore energies, intrinsic
//! Gauss curvature, diameter and inter-surface distance.
//!
//! Every operation is a pure function over an immutable mesh snapshot and
//! sums in a fixed order, so results are bit-reproducible run to run.

mod area;
mod curvature;
mod distance;
mod volume;

pub use area::{face_area, face_areas, total_area, AreaField, FaceArea};
pub use curvature::{
    conformal_energy, curvature_field, gauss_curvature_intrinsic, willmore_euclidean_style,
    willmore_hyperbolic, CurvatureField,
};
pub use distance::{diameter, surface_distance};
pub use volume::enclosed_volume;

use thiserror::Error;

/// Ambient metric used for length/area/curvature evaluation in the
/// conformal-invariance test. Both act on the same Poincaré-ball image of
/// the surface; they differ by the conformal factor `2/(1-|u|^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceMetric {
    /// The hyperbolic metric of H³ (sectional curvature -1).
    Hyperbolic,
    /// The flat metric of the ball the Poincaré model lives in.
    EuclideanBall,
}

#[derive(Debug, Error)]
pub enum OpsError {
    #[error("area gradient is not finite at vertex {vertex}")]
    NonFiniteGradient { vertex: usize },
    #[error("vertex {vertex} lies too close to the Klein ball boundary")]
    KleinBoundary { vertex: usize },
    #[error("mesh has flagged (degenerate) faces incident to vertex {vertex}")]
    DegenerateStar { vertex: usize },
}
