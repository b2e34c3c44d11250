//! Vector Lagrange finite elements: reference bases, quadrature, node
//! numbering, and assembly of the curl–curl and mass forms.

pub mod assembly;
pub mod basis;
pub mod dofmap;
pub mod quadrature;
pub mod sparse;

pub use assembly::{assemble_curl_curl, assemble_mass};
pub use basis::{reference_basis, ReferenceBasis};
pub use dofmap::{build_dof_map, DofMap, NodeEntity};
pub use quadrature::{quadrature, QuadratureRule};
pub use sparse::SymmetricSparseMatrix;
