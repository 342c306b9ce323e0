//! Automorphisms, their action on forms, Lefschetz numbers and fixed-point
//! indices.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::complex::{Complex, Simplex, Vertex};
use crate::error::{contract, invalid, Error, Result};
use crate::forms::{GradedBasis, GradedOperator};
use crate::rational::{Rational, RationalJson};
use crate::sparse::SparseMatrix;
use crate::spectral::HodgeSpectra;

/// Residual allowed when snapping a Lefschetz number to an integer.
pub const SNAP_TOLERANCE: f64 = 1e-7;

/// A vertex bijection mapping simplices to simplices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Automorphism {
    map: BTreeMap<Vertex, Vertex>,
}

impl Automorphism {
    pub fn identity(c: &Complex) -> Self {
        Automorphism {
            map: c.base().iter().map(|&v| (v, v)).collect(),
        }
    }

    pub fn apply_vertex(&self, v: Vertex) -> Vertex {
        self.map[&v]
    }

    pub fn map(&self) -> &BTreeMap<Vertex, Vertex> {
        &self.map
    }

    /// Image simplex and the parity of the permutation that sorts the
    /// image of the increasing vertex list.
    pub fn apply(&self, s: &Simplex) -> (Simplex, i64) {
        let img: Vec<Vertex> = s.vertices().iter().map(|&v| self.map[&v]).collect();
        let sign = permutation_sign(&img);
        (Simplex::new(img).expect("non-empty"), sign)
    }

    pub fn fixes(&self, s: &Simplex) -> bool {
        s.vertices().iter().all(|v| s.contains(self.map[v]))
    }
}

/// Parity of the permutation that sorts distinct values.
fn permutation_sign(v: &[Vertex]) -> i64 {
    let mut inversions = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Validates that `map` is a bijection of the base that maps every simplex
/// onto a simplex.
pub fn check_automorphism(c: &Complex, map: &BTreeMap<Vertex, Vertex>) -> Result<Automorphism> {
    let base: BTreeSet<Vertex> = c.base().iter().copied().collect();
    let domain: BTreeSet<Vertex> = map.keys().copied().collect();
    if domain != base {
        return invalid("permutation domain differs from the vertex set");
    }
    let image: BTreeSet<Vertex> = map.values().copied().collect();
    if image != base {
        return invalid("map is not a bijection of the vertex set");
    }
    let t = Automorphism { map: map.clone() };
    for s in c.simplices() {
        let (img, _) = t.apply(s);
        if !c.contains(&img) {
            return invalid(format!(
                "simplex {:?} maps to {:?}, which is not in the complex",
                s.vertices(),
                img.vertices()
            ));
        }
    }
    Ok(t)
}

/// Signed permutation action `U e_x = sign e_{T x}` on a tuple basis.
pub fn induced_map(t: &Automorphism, basis: Arc<GradedBasis>) -> Result<GradedOperator> {
    let n = basis.len();
    let mut triplets = Vec::with_capacity(n);
    for (col, tuple) in basis.elements().iter().enumerate() {
        let mut sign = 1;
        let mut image = Vec::with_capacity(tuple.len());
        for s in tuple {
            let (img, sg) = t.apply(s);
            sign *= sg;
            image.push(img);
        }
        let Some(row) = basis.index_of(&image) else {
            return invalid("automorphism does not preserve the basis");
        };
        triplets.push((row, col, sign));
    }
    Ok(GradedOperator::new(
        basis,
        SparseMatrix::from_triplets(n, n, triplets),
        Some(0),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedSimplex {
    pub simplex: Simplex,
    pub index: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointData {
    pub fixed: Vec<FixedSimplex>,
    pub total: i64,
    #[serde(skip)]
    pub vertex_indices: BTreeMap<Vertex, Rational>,
}

impl FixedPointData {
    pub fn vertex_indices_json(&self) -> BTreeMap<Vertex, RationalJson> {
        self.vertex_indices.iter().map(|(&v, &r)| (v, r.into())).collect()
    }
}

/// `i(x) = (-1)^dim(x) sign(T|x)` for each simplex with `T(x) = x`, and the
/// vertex localization `i(v) = sum_{x ∋ v} i(x) / (dim x + 1)`.
pub fn fixed_point_indices(t: &Automorphism, c: &Complex) -> FixedPointData {
    let mut fixed = Vec::new();
    let mut vertex_indices: BTreeMap<Vertex, Rational> = BTreeMap::new();
    for s in c.simplices().iter().filter(|s| t.fixes(s)) {
        let (_, sign) = t.apply(s);
        let index = s.omega() * sign;
        let share = Rational::new(index, s.vertices().len() as i64);
        for &v in s.vertices() {
            *vertex_indices.entry(v).or_default() += share;
        }
        fixed.push(FixedSimplex {
            simplex: s.clone(),
            index,
        });
    }
    let total = fixed.iter().map(|f| f.index).sum();
    FixedPointData {
        fixed,
        total,
        vertex_indices,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LefschetzReport {
    pub lefschetz_number: i64,
    /// Unsnapped super trace on cohomology.
    pub raw: f64,
    /// Trace of `T` on the harmonic forms of each degree.
    pub cohomology_traces: Vec<f64>,
    pub fixed: FixedPointData,
    pub equal: bool,
}

fn dense_block(u: &GradedOperator, k: usize) -> DMatrix<f64> {
    u.diagonal_block(k).to_dense()
}

/// Super trace of `T` on cohomology, computed from harmonic projectors, next
/// to the sum of fixed-simplex indices.
pub fn lefschetz_number(t: &Automorphism, c: &Complex, d: &GradedOperator) -> Result<LefschetzReport> {
    let l = crate::forms::hodge_of(d)?;
    let u = induced_map(t, d.basis_arc().clone())?;
    if u.matrix().mul(l.matrix()) != l.matrix().mul(u.matrix()) {
        return contract("induced map does not commute with the Hodge operator");
    }
    let spectra = HodgeSpectra::new(&l)?;
    let traces: Vec<f64> = spectra
        .blocks
        .iter()
        .enumerate()
        .map(|(k, b)| (b.kernel_projector() * dense_block(&u, k)).trace())
        .collect();
    let raw: f64 = traces
        .iter()
        .enumerate()
        .map(|(k, x)| if k % 2 == 0 { *x } else { -x })
        .sum();
    let snapped = raw.round();
    if (raw - snapped).abs() > SNAP_TOLERANCE {
        return Err(Error::ContractViolation(format!(
            "Lefschetz super trace {raw} is not an integer"
        )));
    }
    let fixed = fixed_point_indices(t, c);
    let lefschetz_number = snapped as i64;
    Ok(LefschetzReport {
        lefschetz_number,
        raw,
        cohomology_traces: traces,
        equal: lefschetz_number == fixed.total,
        fixed,
    })
}

/// `sum_k (-1)^k trace(exp(-t L_k) U_k)`.
pub fn heat_lefschetz(t: &Automorphism, l: &GradedOperator, time: f64) -> Result<f64> {
    if !(time >= 0.0) || !time.is_finite() {
        return invalid(format!("time must be finite and non-negative, got {time}"));
    }
    let u = induced_map(t, l.basis_arc().clone())?;
    if u.matrix().mul(l.matrix()) != l.matrix().mul(u.matrix()) {
        return contract("induced map does not commute with the Hodge operator");
    }
    let spectra = HodgeSpectra::new(l)?;
    Ok(spectra
        .blocks
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let x = b.heat_trace(time, Some(&dense_block(&u, k)));
            if k % 2 == 0 {
                x
            } else {
                -x
            }
        })
        .sum())
}

/// Up to `limit` automorphisms of `c`, identity first, found by assigning
/// vertex images in order and pruning on edges.
pub fn find_automorphisms(c: &Complex, limit: usize) -> Vec<Automorphism> {
    let base = c.base();
    let n = base.len();
    let edge = |a: Vertex, b: Vertex| c.contains(&Simplex::new([a, b]).unwrap());
    let mut out = Vec::new();
    let mut image: Vec<Vertex> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        c: &Complex,
        edge: &dyn Fn(Vertex, Vertex) -> bool,
        image: &mut Vec<Vertex>,
        used: &mut [bool],
        limit: usize,
        out: &mut Vec<Automorphism>,
    ) {
        let base = c.base();
        if out.len() >= limit {
            return;
        }
        let i = image.len();
        if i == base.len() {
            let map = base.iter().copied().zip(image.iter().copied()).collect();
            if let Ok(t) = check_automorphism(c, &map) {
                out.push(t);
            }
            return;
        }
        for j in 0..base.len() {
            if used[j] {
                continue;
            }
            let w = base[j];
            if (0..i).any(|p| edge(base[p], base[i]) != edge(image[p], w)) {
                continue;
            }
            used[j] = true;
            image.push(w);
            rec(c, edge, image, used, limit, out);
            image.pop();
            used[j] = false;
        }
    }
    rec(c, &edge, &mut image, &mut used, limit, &mut out);
    out
}
