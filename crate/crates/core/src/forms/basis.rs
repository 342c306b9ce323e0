use std::collections::HashMap;
use std::ops::Range;

use serde::Serialize;

use crate::complex::{Complex, Simplex};
use crate::error::{invalid, Error, Result};

/// An element of a form basis: one simplex for the de Rham complex, or an
/// ordered tuple of pairwise intersecting simplices for a connection complex.
pub type Tuple = Vec<Simplex>;

/// Ordered basis of a graded space of forms.
///
/// Elements are sorted by degree and lexicographically within a degree, so
/// every degree occupies a contiguous index range.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradedBasis {
    order: usize,
    elements: Vec<Tuple>,
    degrees: Vec<usize>,
    #[serde(skip)]
    index: HashMap<Tuple, usize>,
    #[serde(skip)]
    blocks: Vec<Range<usize>>,
}

impl GradedBasis {
    fn from_elements(order: usize, mut elements: Vec<Tuple>) -> Self {
        let degree = |t: &Tuple| t.iter().map(Simplex::dim).sum::<usize>();
        elements.sort_by(|a, b| degree(a).cmp(&degree(b)).then_with(|| a.cmp(b)));
        let degrees: Vec<usize> = elements.iter().map(degree).collect();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let top = degrees.last().map_or(0, |&d| d + 1);
        let mut blocks = Vec::with_capacity(top);
        let mut start = 0;
        for p in 0..top {
            let end = start + degrees[start..].iter().take_while(|&&d| d == p).count();
            blocks.push(start..end);
            start = end;
        }
        GradedBasis {
            order,
            elements,
            degrees,
            index,
            blocks,
        }
    }

    /// Number of simplices per tuple; 1 for the de Rham basis.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Tuple] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Tuple {
        &self.elements[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn index_of(&self, t: &[Simplex]) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// One past the highest degree present.
    pub fn num_degrees(&self) -> usize {
        self.blocks.len()
    }

    /// Index range of degree `p` (empty past the top degree).
    pub fn block(&self, p: usize) -> Range<usize> {
        self.blocks
            .get(p)
            .cloned()
            .unwrap_or(self.len()..self.len())
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|r| r.len()).collect()
    }

    /// `sum_p (-1)^p dim(block p)`.
    pub fn alternating_dimension(&self) -> i64 {
        self.block_dims()
            .iter()
            .enumerate()
            .map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

/// Basis of `Λ(G)`: one element per simplex.
pub fn graded_basis(c: &Complex) -> GradedBasis {
    GradedBasis::from_elements(1, c.simplices().iter().map(|s| vec![s.clone()]).collect())
}

/// Ordered `k`-tuples of pairwise intersecting simplices.
pub fn connection_basis(c: &Complex, k: usize) -> Result<GradedBasis> {
    connection_basis_limited(c, k, usize::MAX)
}

/// Like [`connection_basis`], failing with a resource-limit error once more
/// than `max_elements` tuples have been produced.
pub fn connection_basis_limited(c: &Complex, k: usize, max_elements: usize) -> Result<GradedBasis> {
    if k < 1 {
        return invalid("connection order must be at least 1");
    }
    let s = c.simplices();
    let mut out: Vec<Tuple> = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == k {
            if out.len() == max_elements {
                return Err(Error::ResourceLimit(format!(
                    "connection basis of order {k} exceeds {max_elements} tuples"
                )));
            }
            out.push(prefix.iter().map(|&i| s[i].clone()).collect());
            continue;
        }
        for j in 0..s.len() {
            if prefix.iter().all(|&i| s[i].intersects(&s[j])) {
                let mut next = prefix.clone();
                next.push(j);
                stack.push(next);
            }
        }
    }
    Ok(GradedBasis::from_elements(k, out))
}
