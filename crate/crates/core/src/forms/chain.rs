use std::collections::BTreeMap;

use serde::Serialize;

use super::basis::GradedBasis;
use super::operator::GradedOperator;
use crate::complex::Simplex;
use crate::error::{invalid, Result};

/// Finitely supported integer combination of basis elements, keyed by basis
/// index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Chain {
    coefficients: BTreeMap<usize, i64>,
}

impl Chain {
    pub fn new() -> Self {
        Self::default()
    }

    /// Chain over de Rham basis elements given as simplices.
    pub fn from_simplices(
        basis: &GradedBasis,
        terms: impl IntoIterator<Item = (Simplex, i64)>,
    ) -> Result<Self> {
        Self::from_tuples(basis, terms.into_iter().map(|(s, c)| (vec![s], c)))
    }

    pub fn from_tuples(
        basis: &GradedBasis,
        terms: impl IntoIterator<Item = (Vec<Simplex>, i64)>,
    ) -> Result<Self> {
        let mut chain = Chain::new();
        for (t, c) in terms {
            let Some(i) = basis.index_of(&t) else {
                return invalid(format!("{t:?} is not a basis element"));
            };
            chain.add(i, c);
        }
        Ok(chain)
    }

    pub fn add(&mut self, i: usize, c: i64) {
        let e = self.coefficients.entry(i).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coefficients.remove(&i);
        }
    }

    pub fn get(&self, i: usize) -> i64 {
        self.coefficients.get(&i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coefficients.iter().map(|(&i, &c)| (i, c))
    }

    pub fn to_dense(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for (i, c) in self.iter() {
            v[i] = c;
        }
        v
    }

    pub fn from_dense(v: &[i64]) -> Self {
        let mut chain = Chain::new();
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                chain.add(i, c);
            }
        }
        chain
    }
}

/// `δA`, the transpose action of `d` on chains.
pub fn boundary_chain(d: &GradedOperator, a: &Chain) -> Result<Chain> {
    let n = d.basis().len();
    if let Some((i, _)) = a.iter().find(|&(i, _)| i >= n) {
        return invalid(format!("chain index {i} outside a basis of size {n}"));
    }
    let mut out = Chain::new();
    for (row, c) in a.iter() {
        for &(col, v) in d.matrix().row(row) {
            out.add(col, v * c);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StokesCheck {
    /// `f(δA)`
    pub lhs: i64,
    /// `df(A)`
    pub rhs: i64,
    pub equal: bool,
}

/// Evaluates both sides of `f(δA) = df(A)` independently.
pub fn stokes_check(d: &GradedOperator, f: &[i64], a: &Chain) -> Result<StokesCheck> {
    if f.len() != d.basis().len() {
        return invalid("form length does not match the basis");
    }
    let delta = boundary_chain(d, a)?;
    let lhs = delta.iter().map(|(i, c)| f[i] * c).sum();
    let df = d.apply(f);
    let rhs = a.iter().map(|(i, c)| df[i] * c).sum();
    Ok(StokesCheck {
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}
