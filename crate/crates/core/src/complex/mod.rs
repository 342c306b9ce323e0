//! Finite abstract simplicial complexes.
//!
//! A [`Complex`] stores its simplices sorted degree-major and lexicographically
//! within a degree. That order is the basis order used by every operator
//! assembled downstream, so it is part of the contract of this module.

mod counts;
pub mod generate;
mod graph;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use counts::{barycentric_operator, stirling2, FMatrix, FVector};
pub use graph::Graph;

/// Dense vertex id.
pub type Vertex = usize;

/// A non-empty finite vertex set, stored as a strictly increasing sequence.
///
/// The increasing order doubles as the orientation of the simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return invalid("empty simplex");
        }
        Ok(Simplex(v))
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    /// Caller guarantees `v` is non-empty and strictly increasing.
    pub(crate) fn from_sorted(v: Vec<Vertex>) -> Self {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Simplex(v)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// `(-1)^dim`.
    pub fn omega(&self) -> i64 {
        if self.dim() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn intersects(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().all(|v| other.contains(*v))
    }

    /// Codimension-one faces as `(position of removed vertex, face)`.
    /// A vertex has no faces.
    pub fn faces(&self) -> impl Iterator<Item = (usize, Simplex)> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |j| {
            let mut f = self.0.clone();
            f.remove(j);
            (j, Simplex(f))
        })
    }

    /// All non-empty subsets, including the simplex itself.
    pub fn subsets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (1u64..(1u64 << n)).map(move |mask| {
            Simplex(
                (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| self.0[i])
                    .collect(),
            )
        })
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let s: BTreeSet<Vertex> = self.0.iter().chain(other.0.iter()).copied().collect();
        Simplex(s.into_iter().collect())
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite set of simplices closed under taking non-empty subsets.
#[derive(Clone, Debug, Default)]
pub struct Complex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    base: Vec<Vertex>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}

impl Eq for Complex {}

impl Complex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Smallest complex containing every facet.
    pub fn from_facets<I, F>(facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = Vertex>,
    {
        let mut set = BTreeSet::new();
        for f in facets {
            let s = Simplex::new(f)?;
            if s.0.len() > 24 {
                return invalid(format!("facet with {} vertices is too large", s.0.len()));
            }
            if set.contains(&s) {
                continue;
            }
            set.extend(s.subsets());
        }
        Ok(Self::from_closed_set(set))
    }

    /// Builds a complex from a set of simplices, failing if the set is not
    /// closed under taking faces.
    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let set: BTreeSet<Simplex> = simplices.into_iter().collect();
        for s in &set {
            for (_, f) in s.faces() {
                if !set.contains(&f) {
                    return invalid(format!(
                        "face {:?} of {:?} is missing",
                        f.vertices(),
                        s.vertices()
                    ));
                }
            }
        }
        Ok(Self::from_closed_set(set))
    }

    pub(crate) fn from_closed_set(set: BTreeSet<Simplex>) -> Self {
        let simplices: Vec<Simplex> = set.into_iter().collect();
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let base = simplices
            .iter()
            .take_while(|s| s.dim() == 0)
            .map(|s| s.0[0])
            .collect();
        Complex {
            simplices,
            index,
            base,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Number of simplices.
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    /// Simplices in canonical order (by dimension, then lexicographic).
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Vertex set, sorted.
    pub fn base(&self) -> &[Vertex] {
        &self.base
    }

    /// Maximal simplex dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(Simplex::dim)
    }

    /// Checks the closure invariant exhaustively.
    pub fn is_closed(&self) -> bool {
        self.simplices
            .iter()
            .all(|s| s.subsets().all(|f| self.contains(&f)))
    }

    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered = vec![false; self.len()];
        for s in &self.simplices {
            for (_, f) in s.faces() {
                covered[self.index[&f]] = true;
            }
        }
        self.simplices
            .iter()
            .zip(covered)
            .filter(|(_, c)| !c)
            .map(|(s, _)| s.clone())
            .collect()
    }

    pub fn f_vector(&self) -> FVector {
        let mut counts = vec![0u64; self.dim().map_or(0, |d| d + 1)];
        for s in &self.simplices {
            counts[s.dim()] += 1;
        }
        FVector(counts)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().map(Simplex::omega).sum()
    }

    /// Ordered intersecting pairs counted by dimension pair.
    pub fn f_matrix(&self) -> FMatrix {
        let n = self.dim().map_or(0, |d| d + 1);
        let mut m = vec![vec![0u64; n]; n];
        for a in &self.simplices {
            for b in &self.simplices {
                if a.intersects(b) {
                    m[a.dim()][b.dim()] += 1;
                }
            }
        }
        FMatrix(m)
    }

    /// Sub-complex of simplices with dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> Complex {
        let set = self
            .simplices
            .iter()
            .filter(|s| s.dim() <= k)
            .cloned()
            .collect();
        Self::from_closed_set(set)
    }

    /// Link of `v`: simplices not containing `v` whose join with `v` is in the
    /// complex.
    pub fn unit_sphere(&self, v: Vertex) -> Result<Complex> {
        if self.base.binary_search(&v).is_err() {
            return invalid(format!("vertex {v} is not in the complex"));
        }
        let set = self
            .simplices
            .iter()
            .filter(|s| s.dim() >= 1 && s.contains(v))
            .map(|s| Simplex(s.0.iter().copied().filter(|&w| w != v).collect()))
            .collect();
        Ok(Self::from_closed_set(set))
    }

    /// Refinement whose vertices are the simplices of `self` (labelled by
    /// their index in [`Complex::simplices`]) and whose simplices are the
    /// chains under inclusion.
    pub fn barycentric_refinement(&self) -> Complex {
        // Proper supersets one dimension up; chains are built by walking up.
        let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for (i, s) in self.simplices.iter().enumerate() {
            for (_, f) in s.faces() {
                cofaces[self.index[&f]].push(i);
            }
        }
        // Every superset of s is reachable through a tower of cofaces, but a
        // chain may skip dimensions, so collect all strict supersets.
        let mut supersets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.len()];
        for i in (0..self.len()).rev() {
            let mut acc = BTreeSet::new();
            for &c in &cofaces[i] {
                acc.insert(c);
                acc.extend(supersets[c].iter().copied());
            }
            supersets[i] = acc;
        }
        let mut chains = BTreeSet::new();
        let mut stack: Vec<Vec<usize>> = (0..self.len()).map(|i| vec![i]).collect();
        while let Some(chain) = stack.pop() {
            let top = *chain.last().unwrap();
            for &up in &supersets[top] {
                let mut next = chain.clone();
                next.push(up);
                stack.push(next);
            }
            chains.insert(Simplex::from_sorted(chain));
        }
        Self::from_closed_set(chains)
    }

    pub fn union(&self, other: &Complex) -> Complex {
        let set = self
            .simplices
            .iter()
            .chain(other.simplices.iter())
            .cloned()
            .collect();
        Self::from_closed_set(set)
    }

    pub fn intersection(&self, other: &Complex) -> Complex {
        let set = self
            .simplices
            .iter()
            .filter(|s| other.contains(s))
            .cloned()
            .collect();
        Self::from_closed_set(set)
    }

    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.simplices.iter().all(|s| other.contains(s))
    }

    /// Sub-complex generated by the given simplices of `self`.
    pub fn generated_by<'a>(&self, gens: impl IntoIterator<Item = &'a Simplex>) -> Complex {
        let mut set = BTreeSet::new();
        for g in gens {
            if !set.contains(g) {
                set.extend(g.subsets());
            }
        }
        Self::from_closed_set(set)
    }

    /// Relabels vertices by an injective map. Simplices are re-sorted.
    pub fn relabel(&self, map: impl Fn(Vertex) -> Vertex) -> Complex {
        let set = self
            .simplices
            .iter()
            .map(|s| {
                let mut v: Vec<Vertex> = s.0.iter().map(|&x| map(x)).collect();
                v.sort_unstable();
                Simplex(v)
            })
            .collect();
        Self::from_closed_set(set)
    }
}
