//! Betti numbers, Hodge spectra, harmonic projectors and heat super-traces.
//!
//! Betti numbers come from exact integer ranks. Spectra come from a symmetric
//! eigen-decomposition of each degree block of the Hodge operator; the kernel
//! count of every block is checked against the exact nullity.

mod rank;

use std::collections::BTreeSet;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{contract, invalid, Error, Result};
use crate::forms::GradedOperator;
use crate::sparse::SparseMatrix;

pub use rank::exact_rank;

/// Eigenvalues below `KERNEL_TOLERANCE * max(1, largest eigenvalue)` count as zero.
pub const KERNEL_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn alternating_sum(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

/// `b_k = v_k - rank(d_k) - rank(d_{k-1})`, computed exactly.
pub fn betti(d: &GradedOperator) -> Result<BettiVector> {
    if !d.is_nilpotent() {
        return contract("d o d is not zero");
    }
    let basis = d.basis();
    let n = basis.num_degrees();
    let ranks: Vec<usize> = (0..n).map(|k| exact_rank(&d.derivative_block(k))).collect();
    Ok(BettiVector(
        (0..n)
            .map(|k| basis.block(k).len() - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 })
            .collect(),
    ))
}

fn kernel_threshold(eigenvalues: &[f64]) -> f64 {
    let top = eigenvalues.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
    KERNEL_TOLERANCE * top
}

/// Eigen-decomposition of one symmetric block.
#[derive(Clone, Debug)]
pub struct BlockSpectrum {
    /// ascending
    pub eigenvalues: Vec<f64>,
    /// columns match `eigenvalues`
    pub eigenvectors: DMatrix<f64>,
}

impl BlockSpectrum {
    pub fn of(block: &SparseMatrix) -> Result<Self> {
        if !block.is_symmetric() {
            return contract("block is not symmetric");
        }
        Ok(Self::of_dense(block.to_dense()))
    }

    /// Caller guarantees symmetry.
    pub fn of_dense(m: DMatrix<f64>) -> Self {
        let n = m.nrows();
        if n == 0 {
            return BlockSpectrum {
                eigenvalues: Vec::new(),
                eigenvectors: DMatrix::zeros(0, 0),
            };
        }
        let eig = SymmetricEigen::new(m);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        BlockSpectrum {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn kernel_dim(&self) -> usize {
        let tol = kernel_threshold(&self.eigenvalues);
        self.eigenvalues.iter().filter(|x| x.abs() < tol).count()
    }

    pub fn nonzero(&self) -> Vec<f64> {
        let tol = kernel_threshold(&self.eigenvalues);
        self.eigenvalues
            .iter()
            .copied()
            .filter(|x| x.abs() >= tol)
            .collect()
    }

    /// Orthogonal projector onto the kernel.
    pub fn kernel_projector(&self) -> DMatrix<f64> {
        let n = self.eigenvalues.len();
        let k = self.kernel_dim();
        // kernel eigenvalues are the smallest since the block is PSD
        let v = self.eigenvectors.columns(0, k);
        if n == 0 {
            return DMatrix::zeros(0, 0);
        }
        &v * v.transpose()
    }

    /// `trace(exp(-t B) U)`; `U = None` means the identity.
    pub fn heat_trace(&self, t: f64, u: Option<&DMatrix<f64>>) -> f64 {
        match u {
            None => self.eigenvalues.iter().map(|&x| (-t * x).exp()).sum(),
            Some(u) => {
                let v = &self.eigenvectors;
                let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    self.eigenvalues.len(),
                    self.eigenvalues.iter().map(|&x| (-t * x).exp()),
                ));
                let heat = v * diag * v.transpose();
                (heat * u).trace()
            }
        }
    }
}

/// Per-degree spectra of a Hodge operator.
#[derive(Clone, Debug)]
pub struct HodgeSpectra {
    pub blocks: Vec<BlockSpectrum>,
}

impl HodgeSpectra {
    pub fn new(l: &GradedOperator) -> Result<Self> {
        if l.shift() != Some(0) {
            return contract("Hodge operator must preserve degree");
        }
        if !l.matrix().is_symmetric() {
            return contract("Hodge operator is not symmetric");
        }
        let n = l.basis().num_degrees();
        let blocks = (0..n)
            .map(|k| BlockSpectrum::of(&l.diagonal_block(k)))
            .collect::<Result<_>>()?;
        Ok(HodgeSpectra { blocks })
    }

    pub fn kernel_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(BlockSpectrum::kernel_dim).collect()
    }

    pub fn heat_supertrace(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self
            .blocks
            .iter()
            .enumerate()
            .map(|(k, b)| sign(k) * b.heat_trace(t, None))
            .sum())
    }

    pub fn report(&self) -> SpectrumReport {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        let degrees = self
            .blocks
            .iter()
            .enumerate()
            .map(|(k, b)| {
                if k % 2 == 0 {
                    even.extend(b.nonzero());
                } else {
                    odd.extend(b.nonzero());
                }
                DegreeSpectrum {
                    degree: k,
                    eigenvalues: b.eigenvalues.clone(),
                    kernel_dim: b.kernel_dim(),
                }
            })
            .collect();
        even.sort_by(f64::total_cmp);
        odd.sort_by(f64::total_cmp);
        SpectrumReport {
            degrees,
            even_nonzero: even,
            odd_nonzero: odd,
        }
    }
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return invalid(format!("time must be finite and non-negative, got {t}"));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeSpectrum {
    pub degree: usize,
    pub eigenvalues: Vec<f64>,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub degrees: Vec<DegreeSpectrum>,
    pub even_nonzero: Vec<f64>,
    pub odd_nonzero: Vec<f64>,
}

/// Sorted eigenvalues of `L_k`.
pub fn spectrum(l: &GradedOperator, k: usize) -> Result<Vec<f64>> {
    Ok(BlockSpectrum::of(&l.diagonal_block(k))?.eigenvalues)
}

/// `sum_k (-1)^k trace(exp(-t L_k))`.
pub fn heat_supertrace(l: &GradedOperator, t: f64) -> Result<f64> {
    check_time(t)?;
    HodgeSpectra::new(l)?.heat_supertrace(t)
}

pub fn harmonic_projector(l: &GradedOperator, k: usize) -> Result<DMatrix<f64>> {
    Ok(BlockSpectrum::of(&l.diagonal_block(k))?.kernel_projector())
}

/// Exact nullity per block next to the numerical kernel count; they must agree.
pub fn cross_validate_kernels(d: &GradedOperator, l: &GradedOperator) -> Result<(BettiVector, Vec<usize>)> {
    let b = betti(d)?;
    let numeric = HodgeSpectra::new(l)?.kernel_dims();
    if b.0 != numeric {
        return Err(Error::ContractViolation(format!(
            "exact Betti numbers {:?} disagree with numerical kernels {:?}",
            b.0, numeric
        )));
    }
    Ok((b, numeric))
}

/// Result of comparing the non-zero spectra on the two sides of a complex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupersymmetryReport {
    pub even_count: usize,
    pub odd_count: usize,
    /// Largest difference between paired eigenvalues (over the shorter list).
    pub max_mismatch: f64,
    pub multiplicity_mismatch: bool,
    pub elliptic: bool,
}

/// Tolerance for pairing even and odd eigenvalues.
pub const SUPERSYMMETRY_TOLERANCE: f64 = 1e-9;

/// Compares the non-zero spectrum of `L` on the degrees in `even` with the one
/// on the degrees in `odd`.
pub fn supersymmetry_check_split(
    l: &GradedOperator,
    even: &BTreeSet<usize>,
    odd: &BTreeSet<usize>,
) -> Result<SupersymmetryReport> {
    let spectra = HodgeSpectra::new(l)?;
    let collect = |set: &BTreeSet<usize>| {
        let mut v: Vec<f64> = set
            .iter()
            .filter_map(|&k| spectra.blocks.get(k))
            .flat_map(BlockSpectrum::nonzero)
            .collect();
        v.sort_by(f64::total_cmp);
        v
    };
    Ok(compare_spectra(&collect(even), &collect(odd)))
}

/// Even degrees against odd degrees.
pub fn supersymmetry_check(l: &GradedOperator) -> Result<SupersymmetryReport> {
    let n = l.basis().num_degrees();
    let even = (0..n).filter(|k| k % 2 == 0).collect();
    let odd = (0..n).filter(|k| k % 2 == 1).collect();
    supersymmetry_check_split(l, &even, &odd)
}

pub fn compare_spectra(even: &[f64], odd: &[f64]) -> SupersymmetryReport {
    let max_mismatch = even
        .iter()
        .zip(odd)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let multiplicity_mismatch = even.len() != odd.len();
    let scale = even.iter().chain(odd).fold(1.0f64, |m, x| m.max(x.abs()));
    SupersymmetryReport {
        even_count: even.len(),
        odd_count: odd.len(),
        max_mismatch,
        multiplicity_mismatch,
        elliptic: !multiplicity_mismatch && max_mismatch < SUPERSYMMETRY_TOLERANCE * scale,
    }
}

/// A complex that is not elliptic: the exterior derivative scaled by
/// `coefficients[i]` on degree `2i`, zero on odd degrees, with `E` the even
/// forms and `F` the zero space. Returns the Hodge operator and the `(E, F)` degree
/// split to feed [`supersymmetry_check_split`].
pub fn even_only_complex(
    d: &GradedOperator,
    coefficients: &[i64],
) -> Result<(GradedOperator, BTreeSet<usize>, BTreeSet<usize>)> {
    let basis = d.basis();
    let n = basis.len();
    let triplets = d.matrix().triplets().filter_map(|(i, j, v)| {
        let p = basis.degree(j);
        if p % 2 == 1 {
            return None;
        }
        let a = coefficients.get(p / 2).copied().unwrap_or(1);
        Some((i, j, a * v))
    });
    let scaled = GradedOperator::new(
        d.basis_arc().clone(),
        SparseMatrix::from_triplets(n, n, triplets),
        Some(1),
    );
    if coefficients.iter().any(|&a| a == 0) {
        return invalid("coefficients must be non-zero");
    }
    let l = crate::forms::hodge_of(&scaled)?;
    let even = (0..basis.num_degrees()).filter(|k| k % 2 == 0).collect();
    Ok((l, even, BTreeSet::new()))
}
