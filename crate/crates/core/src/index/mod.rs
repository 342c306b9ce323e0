//! Analytic, cohomological and topological indices, valuations, Wu
//! characteristics, curvature and Poincare-Hopf indices.

mod curvature;
mod poincare_hopf;

use std::sync::Arc;

use serde::Serialize;

use crate::complex::Complex;
use crate::error::{invalid, Result};
use crate::forms::{coboundary, connection_basis};
use crate::rational::{Rational, RationalJson};
use crate::spectral::{betti, BettiVector};

pub use curvature::{
    averaged_tuple_curvature, for_each_tuple, gauss_bonnet_curvature, gauss_bonnet_from_spheres,
    multilinear_curvature, CurvatureField,
};
pub use poincare_hopf::{
    index_expectation, index_expectation_exhaustive, index_expectation_sampled, poincare_hopf,
    random_function, Expectation, ExpectationMode, IndexField, SampledExpectation,
    MAX_EXHAUSTIVE_VERTICES,
};

/// `dim E - dim F`.
pub fn analytic_index(e_dims: &[usize], f_dims: &[usize]) -> i64 {
    e_dims.iter().sum::<usize>() as i64 - f_dims.iter().sum::<usize>() as i64
}

/// `sum_k (-1)^k b_k`.
pub fn cohomological_index(b: &BettiVector) -> i64 {
    b.alternating_sum()
}

/// A linear valuation `X(A) = <X, f(A)>` or a bilinear one
/// `X(A) = sum_ij X_ij v_ij(A)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Valuation {
    Linear(Vec<Rational>),
    Bilinear(Vec<Vec<Rational>>),
}

impl Valuation {
    pub fn euler(d: usize) -> Self {
        Valuation::Linear((0..=d).map(|k| Rational::from(alt(k))).collect())
    }

    pub fn wu(d: usize) -> Self {
        Valuation::Bilinear(
            (0..=d)
                .map(|i| (0..=d).map(|j| Rational::from(alt(i + j))).collect())
                .collect(),
        )
    }

    /// Counts top-dimensional simplices.
    pub fn volume(d: usize) -> Self {
        Valuation::Linear((0..=d).map(|k| Rational::from((k == d) as i64)).collect())
    }
}

fn alt(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Evaluates `x` on `sub` (or on `c` itself), where `x` is sized for `c`.
pub fn valuation_evaluate(x: &Valuation, c: &Complex, sub: Option<&Complex>) -> Result<Rational> {
    let size = c.dim().map_or(0, |d| d + 1);
    let target = match sub {
        Some(s) if !s.is_subcomplex_of(c) => return invalid("argument is not a sub-complex"),
        Some(s) => s,
        None => c,
    };
    match x {
        Valuation::Linear(coef) => {
            if coef.len() != size {
                return invalid(format!("valuation has {} coefficients, expected {size}", coef.len()));
            }
            let f = target.f_vector();
            Ok(f.0
                .iter()
                .zip(coef)
                .map(|(&v, &a)| a * Rational::from(v as i64))
                .sum())
        }
        Valuation::Bilinear(coef) => {
            if coef.len() != size || coef.iter().any(|r| r.len() != size) {
                return invalid(format!("bilinear valuation must be {size} x {size}"));
            }
            let m = target.f_matrix();
            let mut total = Rational::from(0);
            for (i, row) in m.0.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    total += coef[i][j] * Rational::from(v as i64);
                }
            }
            Ok(total)
        }
    }
}

/// `sum over ordered pairwise intersecting k-tuples of prod omega(x_j)`.
pub fn wu_characteristic(c: &Complex, k: usize) -> Result<i64> {
    if k < 1 {
        return invalid("Wu characteristic order must be at least 1");
    }
    let mut total = 0i64;
    for_each_tuple(c, k, |t| {
        total += t.iter().map(|&i| c.simplex(i).omega()).product::<i64>();
    });
    Ok(total)
}

/// Wu intersection number `omega(A, B) = sum_{x in A, y in B, x ∩ y ≠ ∅} omega(x) omega(y)`.
pub fn wu_intersection(a: &Complex, b: &Complex) -> i64 {
    let mut total = 0;
    for x in a.simplices() {
        for y in b.simplices() {
            if x.intersects(y) {
                total += x.omega() * y.omega();
            }
        }
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremOneReport {
    pub order: usize,
    pub analytic: i64,
    pub cohomological: i64,
    pub topological: RationalJson,
    pub betti: BettiVector,
    pub equal: bool,
}

/// Computes the three indices of the order-`k` connection complex (de Rham
/// for `k = 1`) by independent routes: dimension counts, exact Betti numbers,
/// and the vertex curvature sum.
pub fn theorem_one_report(c: &Complex, k: usize) -> Result<TheoremOneReport> {
    let basis = Arc::new(connection_basis(c, k)?);
    let analytic = basis.alternating_dimension();
    let d = coboundary(basis);
    let b = betti(&d)?;
    let cohomological = cohomological_index(&b);
    let topological = multilinear_curvature(c, k)?.total();
    Ok(TheoremOneReport {
        order: k,
        analytic,
        cohomological,
        topological: topological.into(),
        betti: b,
        equal: Rational::from(analytic) == topological && analytic == cohomological,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generate::{generate, Family};

    #[test]
    fn analytic_index_examples() {
        assert_eq!(analytic_index(&[3, 1], &[3]), 1);
        assert_eq!(analytic_index(&[5], &[]), 5);
        assert_eq!(analytic_index(&[2, 7], &[2, 7]), 0);
    }

    #[test]
    fn cohomological_examples() {
        assert_eq!(cohomological_index(&BettiVector(vec![1, 1])), 0);
        assert_eq!(cohomological_index(&BettiVector(vec![1, 0, 0])), 1);
    }

    #[test]
    fn valuations_on_triangle() {
        let k3 = generate(Family::Simplex, 3, 0).unwrap();
        assert_eq!(valuation_evaluate(&Valuation::euler(2), &k3, None).unwrap(), Rational::from(1));
        assert_eq!(valuation_evaluate(&Valuation::volume(2), &k3, None).unwrap(), Rational::from(1));
        assert_eq!(
            valuation_evaluate(&Valuation::wu(2), &k3, None).unwrap(),
            Rational::from(wu_characteristic(&k3, 2).unwrap())
        );
        let sub = k3.skeleton(1);
        assert_eq!(valuation_evaluate(&Valuation::euler(2), &k3, Some(&sub)).unwrap(), Rational::from(0));
        assert!(valuation_evaluate(&Valuation::euler(1), &k3, None).is_err());
        let other = generate(Family::Simplex, 4, 0).unwrap();
        assert!(valuation_evaluate(&Valuation::euler(2), &k3, Some(&other)).is_err());
    }

    #[test]
    fn wu_examples() {
        let k4 = generate(Family::Simplex, 4, 0).unwrap();
        assert_eq!(wu_characteristic(&k4, 2).unwrap(), -1);
        let w4 = generate(Family::Wheel, 4, 0).unwrap();
        assert_eq!(wu_characteristic(&w4, 2).unwrap(), 1);
        let e = generate(Family::Simplex, 2, 0).unwrap();
        assert_eq!(wu_characteristic(&e, 3).unwrap(), 1);
        assert_eq!(wu_characteristic(&e, 1).unwrap(), 1);
        assert!(wu_characteristic(&e, 0).is_err());
        assert_eq!(wu_intersection(&w4, &w4), 1);
    }

    #[test]
    fn theorem_one_examples() {
        let k3 = generate(Family::Simplex, 3, 0).unwrap();
        let r = theorem_one_report(&k3, 1).unwrap();
        assert_eq!((r.analytic, r.cohomological, r.equal), (1, 1, true));
        let w4 = generate(Family::Wheel, 4, 0).unwrap();
        let r = theorem_one_report(&w4, 2).unwrap();
        assert_eq!((r.analytic, r.cohomological, r.equal), (1, 1, true));
        let r = theorem_one_report(&k3.skeleton(1), 1).unwrap();
        assert_eq!((r.analytic, r.cohomological, r.equal), (0, 0, true));
    }
}
