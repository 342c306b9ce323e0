//! Finite simplicial complexes, their de Rham and connection differential
//! complexes, and exact checks of the index identities that relate
//! dimension counts, cohomology, curvature and fixed points.

pub mod complex;
mod error;
pub mod forms;
pub mod index;
pub mod io;
pub mod lax;
pub mod lefschetz;
pub mod rational;
pub mod sparse;
pub mod spectral;

pub use complex::{Complex, Graph, Simplex, Vertex};
pub use error::{Error, Result};
