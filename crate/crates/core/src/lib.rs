//! Worsey-Farin refined tetrahedral meshes and vector Lagrange finite
//! elements for the Maxwell eigenvalue problem
//! `curl curl u = λ u` in a box with `u × n = 0` on the boundary.
//!
//! The pipeline is: [`mesh::build_box_mesh`] → [`wf_refine::worsey_farin_refine`]
//! → [`lagrange`] assembly of the curl–curl and mass forms → [`hcurl_bc`]
//! tangential constraints → [`eigensolve`] → [`experiments`] tables.

// `!(x > 0.0)` style guards intentionally reject NaN; index loops mirror the
// formulas in dense numeric kernels.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod eigensolve;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod hcurl_bc;
pub mod lagrange;
pub mod mesh;
pub mod mesh_io;
pub mod wf_refine;

pub use error::{Error, Result};
pub use geometry::Point3;
pub use mesh::{Aabb, Mesh, Tetra};
pub use wf_refine::{worsey_farin_refine, WorseyFarinMesh};
