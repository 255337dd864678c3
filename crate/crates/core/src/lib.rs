//! Admissible simplex space-time meshes for moving domains.
//!
//! A `d`-dimensional simplicial mesh is extruded slab by slab into a
//! `(d+1)`-dimensional simplex mesh ([`extrusion`]), optionally following a
//! prescribed boundary motion ([`motion`]). The result can be cut by
//! hyperplanes for visualisation ([`slicing`]) and used to assemble and solve
//! a space-time discontinuous Galerkin discretisation of transient Stokes
//! flow ([`dg`]).
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the common choices.

pub mod dg;
pub mod extrusion;
pub mod io;
pub mod krylov;
pub mod linalg;
pub mod mesh;
pub mod meshgen;
pub mod motion;
pub mod scalar;
pub mod slicing;
pub mod sparse;

pub use mesh::{
    BoundaryClass, BoundaryTag, MeshError, NodeId, Points, Simplex, SimplexMesh, SpaceTimeMesh,
    SpatialMesh,
};
pub use scalar::Real;

pub type SpatialMesh64 = SpatialMesh<f64>;
pub type SpaceTimeMesh64 = SpaceTimeMesh<f64>;
pub type SpatialMesh32 = SpatialMesh<f32>;
pub type SpaceTimeMesh32 = SpaceTimeMesh<f32>;
pub type CsrMatrix64 = sparse::CsrMatrix<f64>;
pub type BlockSystem64 = dg::BlockSystem<f64>;
pub type SliceComplex64 = slicing::SliceComplex<f64>;
