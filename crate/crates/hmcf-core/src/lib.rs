//! Mean curvature flow of closed surfaces in hyperbolic 3-space.
//!
//! The crate is organized around immutable snapshots: [`hgeom`] provides the
//! hyperboloid model of H³, [`hmesh`] closed oriented triangle meshes on it,
//! [`ops`] the discrete geometric quantities (area, volume, curvature,
//! bending energies, distances), [`analytic`] the closed-form sphere
//! solutions and isoperimetric profile used as oracles, [`flow`] explicit
//! geodesic time stepping with singularity detection, [`shapes`] the
//! parametric initial data (spheres, ellipsoids, drilled tori, dumbbells),
//! and [`certify`] the inequality certificates evaluated over all of it.

pub mod analytic;
pub mod certify;
pub mod flow;
pub mod hgeom;
pub mod hmesh;
pub mod ops;
pub mod shapes;

pub use certify::Certificate;
pub use flow::{DiagnosticsRecord, FlowConfig, FlowState, FlowStatus};
pub use hgeom::{HPoint, HTangent};
pub use hmesh::TriMesh;
pub use shapes::{ShapeKind, ShapeSpec};
