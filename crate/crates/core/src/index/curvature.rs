use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{Complex, Vertex};
use crate::error::{invalid, Result};
use crate::rational::Rational;

/// Rational value per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurvatureField {
    #[serde(serialize_with = "crate::rational::serialize_map")]
    pub values: BTreeMap<Vertex, Rational>,
}

impl CurvatureField {
    pub fn zero(c: &Complex) -> Self {
        CurvatureField {
            values: c.base().iter().map(|&v| (v, Rational::from(0))).collect(),
        }
    }

    pub fn total(&self) -> Rational {
        self.values.values().copied().sum()
    }

    pub fn get(&self, v: Vertex) -> Rational {
        self.values.get(&v).copied().unwrap_or_default()
    }
}

/// Visits every ordered `k`-tuple of pairwise intersecting simplices, given as
/// indices into [`Complex::simplices`].
pub fn for_each_tuple(c: &Complex, k: usize, mut f: impl FnMut(&[usize])) {
    let n = c.len();
    if k == 0 || n == 0 {
        return;
    }
    let s = c.simplices();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| s[i].intersects(&s[j])).collect())
        .collect();
    let mut tuple = Vec::with_capacity(k);
    fn rec(adj: &[Vec<bool>], k: usize, tuple: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if tuple.len() == k {
            f(tuple);
            return;
        }
        for j in 0..adj.len() {
            if tuple.iter().all(|&i| adj[i][j]) {
                tuple.push(j);
                rec(adj, k, tuple, f);
                tuple.pop();
            }
        }
    }
    rec(&adj, k, &mut tuple, &mut f);
}

/// `K(v) = sum_{x ∋ v} omega(x) / (dim x + 1)`.
pub fn gauss_bonnet_curvature(c: &Complex) -> CurvatureField {
    let mut field = CurvatureField::zero(c);
    for x in c.simplices() {
        let w = Rational::new(x.omega(), x.vertices().len() as i64);
        for v in x.vertices() {
            *field.values.get_mut(v).unwrap() += w;
        }
    }
    field
}

/// `K(v) = 1 - V_0/2 + V_1/3 - V_2/4 + ...` with `V_k` the number of
/// `k`-simplices in the unit sphere of `v`.
pub fn gauss_bonnet_from_spheres(c: &Complex) -> CurvatureField {
    let values = c
        .base()
        .iter()
        .map(|&v| {
            let sphere = c.unit_sphere(v).expect("vertex of the complex");
            let k = sphere
                .f_vector()
                .0
                .iter()
                .enumerate()
                .map(|(k, &n)| {
                    let sign = if k % 2 == 0 { -1 } else { 1 };
                    Rational::new(sign * n as i64, k as i64 + 2)
                })
                .sum::<Rational>();
            (v, Rational::from(1) + k)
        })
        .collect();
    CurvatureField { values }
}

/// Each tuple's weight `prod omega(x_j)` spread evenly over the vertices of the
/// union of its members. Sums to the Wu characteristic of order `k`.
pub fn multilinear_curvature(c: &Complex, k: usize) -> Result<CurvatureField> {
    if k < 1 {
        return invalid("curvature order must be at least 1");
    }
    let mut field = CurvatureField::zero(c);
    let s = c.simplices();
    let mut support: Vec<Vertex> = Vec::new();
    for_each_tuple(c, k, |t| {
        support.clear();
        for &i in t {
            support.extend_from_slice(s[i].vertices());
        }
        support.sort_unstable();
        support.dedup();
        let w: i64 = t.iter().map(|&i| s[i].omega()).product();
        let share = Rational::new(w, support.len() as i64);
        for v in &support {
            *field.values.get_mut(v).unwrap() += share;
        }
    });
    Ok(field)
}

/// Per vertex, the average of `prod omega(x_j)` over the tuples whose union
/// contains the vertex. A diagnostic: this does not sum to `omega_k` in general.
pub fn averaged_tuple_curvature(c: &Complex, k: usize) -> Result<CurvatureField> {
    if k < 1 {
        return invalid("curvature order must be at least 1");
    }
    let mut sums: BTreeMap<Vertex, (i64, i64)> = c.base().iter().map(|&v| (v, (0, 0))).collect();
    let s = c.simplices();
    for_each_tuple(c, k, |t| {
        let w: i64 = t.iter().map(|&i| s[i].omega()).product();
        for (v, acc) in sums.iter_mut() {
            if t.iter().any(|&i| s[i].contains(*v)) {
                acc.0 += w;
                acc.1 += 1;
            }
        }
    });
    Ok(CurvatureField {
        values: sums
            .into_iter()
            .map(|(v, (w, n))| (v, Rational::new(w, n.max(1))))
            .collect(),
    })
}
