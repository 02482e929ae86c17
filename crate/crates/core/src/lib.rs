//! Exact volumes of the Birkhoff polytope `B_n` and its faces.
//!
//! Two independent routes are provided:
//!
//! * [`triangulate`]: relative volumes of any face by counting the simplices of
//!   a standard triangulation, organised as a leveled lattice of canonical faces;
//! * [`ehrhart`]: the Ehrhart polynomial of `B_n` from counts of magic squares,
//!   whose leading binomial coefficient is again the relative volume.
//!
//! [`montecarlo`] gives a rough statistical check of the same volumes and
//! [`young`] exercises the triangulation on the staircase faces.

pub mod ehrhart;
pub mod error;
pub mod known;
pub mod matrix;
pub mod montecarlo;
pub mod triangulate;
pub mod young;

pub use ehrhart::{ehrhart_polynomial, magic_count, EhrhartPoly, SumVector};
pub use error::{Error, Result};
pub use known::known_relative_volume;
pub use matrix::{BinaryMatrix, PermutationMatrix, MAX_ORDER};
pub use montecarlo::{estimate_alpha, exact_alpha, SampleReport};
pub use triangulate::{build_lattice, relative_volume, BuildOptions, FaceLattice};
pub use young::{catalan_product, staircase_face};
