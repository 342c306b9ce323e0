//! Oriented form bases and the operators built on them: exterior derivative,
//! connection derivatives, Dirac and Hodge operators, chains.
//!
//! Every simplex is oriented by its increasing vertex order. No compatible
//! orientation is attempted.

mod basis;
mod chain;
mod operator;

pub use basis::{connection_basis, connection_basis_limited, graded_basis, GradedBasis, Tuple};
pub use chain::{boundary_chain, stokes_check, Chain, StokesCheck};
pub use operator::{
    coboundary, connection_derivative, dirac, exterior_derivative, hodge, hodge_of,
    GradedOperator, OperatorExport,
};
