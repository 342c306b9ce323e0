use std::sync::Arc;

use serde::Serialize;

use super::basis::{connection_basis, graded_basis, GradedBasis};
use crate::complex::{Complex, Vertex};
use crate::error::{contract, Result};
use crate::sparse::SparseMatrix;

/// An integer operator on a graded space of forms.
///
/// `shift` is the change of degree (`Some(1)` for an exterior derivative,
/// `Some(0)` for a Laplacian, `None` for a mixed-degree operator such as the
/// Dirac operator).
#[derive(Clone, Debug, PartialEq)]
pub struct GradedOperator {
    basis: Arc<GradedBasis>,
    matrix: SparseMatrix,
    shift: Option<i32>,
}

impl GradedOperator {
    pub fn new(basis: Arc<GradedBasis>, matrix: SparseMatrix, shift: Option<i32>) -> Self {
        assert_eq!(matrix.nrows(), basis.len());
        assert_eq!(matrix.ncols(), basis.len());
        GradedOperator {
            basis,
            matrix,
            shift,
        }
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn basis_arc(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn shift(&self) -> Option<i32> {
        self.shift
    }

    /// Entries from degree `from` into degree `to`.
    pub fn block(&self, to: usize, from: usize) -> SparseMatrix {
        self.matrix
            .submatrix(self.basis.block(to), self.basis.block(from))
    }

    /// `d_k : Λ_k -> Λ_{k+1}` of a derivative.
    pub fn derivative_block(&self, k: usize) -> SparseMatrix {
        self.block(k + 1, k)
    }

    /// Diagonal block `L_k` of a degree-preserving operator.
    pub fn diagonal_block(&self, k: usize) -> SparseMatrix {
        self.block(k, k)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.matrix.mul(&self.matrix).is_zero()
    }

    pub fn compose(&self, other: &GradedOperator) -> GradedOperator {
        let shift = match (self.shift, other.shift) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        GradedOperator::new(self.basis.clone(), self.matrix.mul(&other.matrix), shift)
    }

    pub fn transpose(&self) -> GradedOperator {
        GradedOperator::new(
            self.basis.clone(),
            self.matrix.transpose(),
            self.shift.map(|s| -s),
        )
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.matrix.mul_vec(x)
    }

    /// `row col value` lines, one per non-zero entry.
    pub fn to_triplet_text(&self) -> String {
        let mut s = String::new();
        for (i, j, v) in self.matrix.triplets() {
            s.push_str(&format!("{i} {j} {v}\n"));
        }
        s
    }

    pub fn export(&self, label: impl Fn(Vertex) -> String) -> OperatorExport {
        let basis = self
            .basis
            .elements()
            .iter()
            .map(|t| {
                t.iter()
                    .map(|s| s.vertices().iter().map(|&v| label(v)).collect())
                    .collect()
            })
            .collect();
        OperatorExport {
            size: self.basis.len(),
            order: self.basis.order(),
            shift: self.shift,
            basis,
            degrees: self.basis.degrees().to_vec(),
            entries: self.matrix.triplets().collect(),
        }
    }
}

/// Serializable form of an operator with its labelled basis.
#[derive(Clone, Debug, Serialize)]
pub struct OperatorExport {
    pub size: usize,
    pub order: usize,
    pub shift: Option<i32>,
    /// Each basis element is a tuple of simplices given by vertex labels.
    pub basis: Vec<Vec<Vec<String>>>,
    pub degrees: Vec<usize>,
    pub entries: Vec<(usize, usize, i64)>,
}

/// Signed-incidence derivative of any tuple basis.
///
/// `(df)(y) = sum_i (-1)^(dim y_1 + ... + dim y_{i-1}) sum_j (-1)^j f(y with
/// the j-th vertex of y_i removed)`, where faces whose tuple is no longer
/// pairwise intersecting are dropped.
pub fn coboundary(basis: Arc<GradedBasis>) -> GradedOperator {
    let n = basis.len();
    let mut triplets = Vec::new();
    for (row, y) in basis.elements().iter().enumerate() {
        let mut prefix_dim = 0usize;
        for (slot, x) in y.iter().enumerate() {
            let slot_sign = if prefix_dim % 2 == 0 { 1 } else { -1 };
            for (j, face) in x.faces() {
                let mut t = y.clone();
                t[slot] = face;
                if let Some(col) = basis.index_of(&t) {
                    let sign = if j % 2 == 0 { slot_sign } else { -slot_sign };
                    triplets.push((row, col, sign));
                }
            }
            prefix_dim += x.dim();
        }
    }
    GradedOperator::new(basis, SparseMatrix::from_triplets(n, n, triplets), Some(1))
}

pub fn exterior_derivative(c: &Complex) -> GradedOperator {
    coboundary(Arc::new(graded_basis(c)))
}

pub fn connection_derivative(c: &Complex, k: usize) -> Result<GradedOperator> {
    Ok(coboundary(Arc::new(connection_basis(c, k)?)))
}

/// `D = d + d*`.
pub fn dirac(d: &GradedOperator) -> Result<GradedOperator> {
    if !d.is_nilpotent() {
        return contract("d o d is not zero");
    }
    Ok(GradedOperator::new(
        d.basis.clone(),
        d.matrix.add(&d.matrix.transpose()),
        None,
    ))
}

/// `L = D^2`.
pub fn hodge(dirac: &GradedOperator) -> Result<GradedOperator> {
    if !dirac.matrix.is_symmetric() {
        return contract("Dirac operator is not symmetric");
    }
    Ok(GradedOperator::new(
        dirac.basis.clone(),
        dirac.matrix.mul(&dirac.matrix),
        Some(0),
    ))
}

/// `L` straight from `d`.
pub fn hodge_of(d: &GradedOperator) -> Result<GradedOperator> {
    hodge(&dirac(d)?)
}
