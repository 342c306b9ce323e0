use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::curvature::CurvatureField;
use crate::complex::{Complex, Vertex};
use crate::error::{invalid, Error, Result};
use crate::rational::Rational;

/// Exhaustive expectation enumerates `|V|!` orderings; refuse beyond this.
pub const MAX_EXHAUSTIVE_VERTICES: usize = 8;

/// Integer index per vertex together with the function that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexField {
    pub values: BTreeMap<Vertex, i64>,
    pub function: BTreeMap<Vertex, f64>,
}

impl IndexField {
    pub fn total(&self) -> i64 {
        self.values.values().sum()
    }
}

/// Link simplices of each vertex, as `(vertex positions, omega)`.
struct Links {
    base: Vec<Vertex>,
    links: Vec<Vec<(Vec<usize>, i64)>>,
}

impl Links {
    fn new(c: &Complex) -> Self {
        let base = c.base().to_vec();
        let pos = |v: Vertex| base.binary_search(&v).unwrap();
        let mut links = vec![Vec::new(); base.len()];
        for s in c.simplices().iter().filter(|s| s.dim() >= 1) {
            for &v in s.vertices() {
                let rest: Vec<usize> = s.vertices().iter().filter(|&&w| w != v).map(|&w| pos(w)).collect();
                // omega of the link simplex is -omega(s)
                links[pos(v)].push((rest, -s.omega()));
            }
        }
        Links { base, links }
    }

    /// `i(v) = 1 - chi(S^-(v))` for the ordering given by `rank`.
    fn indices(&self, rank: &[usize], out: &mut [i64]) {
        for (v, link) in self.links.iter().enumerate() {
            let rv = rank[v];
            let chi: i64 = link
                .iter()
                .filter(|(x, _)| x.iter().all(|&w| rank[w] < rv))
                .map(|(_, o)| o)
                .sum();
            out[v] = 1 - chi;
        }
    }
}

/// Poincare-Hopf indices `i_f(v) = 1 - chi(S^-_f(v))`, where `S^-_f(v)` is the
/// part of the unit sphere of `v` on which `f < f(v)`.
pub fn poincare_hopf(c: &Complex, f: &BTreeMap<Vertex, f64>) -> Result<IndexField> {
    if let Some(v) = c.base().iter().find(|v| !f.contains_key(v)) {
        return invalid(format!("function is undefined at vertex {v}"));
    }
    if let Some(v) = f.keys().find(|v| c.base().binary_search(v).is_err()) {
        return invalid(format!("function is defined at unknown vertex {v}"));
    }
    if f.values().any(|x| !x.is_finite()) {
        return invalid("function values must be finite");
    }
    let mut order: Vec<(f64, Vertex)> = f.iter().map(|(&v, &x)| (x, v)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    if order.windows(2).any(|w| w[0].0 == w[1].0) {
        return invalid("function is not injective");
    }
    let links = Links::new(c);
    let mut rank = vec![0; links.base.len()];
    for (r, (_, v)) in order.iter().enumerate() {
        rank[links.base.binary_search(v).unwrap()] = r;
    }
    let mut out = vec![0; rank.len()];
    links.indices(&rank, &mut out);
    Ok(IndexField {
        values: links.base.iter().copied().zip(out).collect(),
        function: f.clone(),
    })
}

/// A uniformly random injective function: a random permutation of ranks.
pub fn random_function(c: &Complex, seed: u64) -> BTreeMap<Vertex, f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ranks: Vec<usize> = (0..c.base().len()).collect();
    ranks.shuffle(&mut rng);
    c.base()
        .iter()
        .zip(ranks)
        .map(|(&v, r)| (v, r as f64))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectationMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct SampledExpectation {
    pub samples: usize,
    pub mean: BTreeMap<Vertex, f64>,
    pub std_error: BTreeMap<Vertex, f64>,
}

#[derive(Clone, Debug)]
pub enum Expectation {
    Exact(CurvatureField),
    Sampled(SampledExpectation),
}

pub fn index_expectation(c: &Complex, mode: ExpectationMode) -> Result<Expectation> {
    match mode {
        ExpectationMode::Exhaustive => index_expectation_exhaustive(c).map(Expectation::Exact),
        ExpectationMode::Sampled { samples, seed } => {
            index_expectation_sampled(c, samples, seed).map(Expectation::Sampled)
        }
    }
}

/// Average of the index field over all `|V|!` vertex orderings, exactly.
pub fn index_expectation_exhaustive(c: &Complex) -> Result<CurvatureField> {
    let n = c.base().len();
    if n > MAX_EXHAUSTIVE_VERTICES {
        return Err(Error::ResourceLimit(format!(
            "exhaustive expectation over {n} vertices exceeds {MAX_EXHAUSTIVE_VERTICES}"
        )));
    }
    let links = Links::new(c);
    let mut sums = vec![0i64; n];
    let mut out = vec![0i64; n];
    let mut rank: Vec<usize> = (0..n).collect();
    let mut count = 0i64;
    // Heap's algorithm
    let mut stack = vec![0usize; n];
    let mut visit = |rank: &[usize]| {
        links.indices(rank, &mut out);
        for (s, o) in sums.iter_mut().zip(&out) {
            *s += o;
        }
        count += 1;
    };
    visit(&rank);
    let mut i = 1;
    while i < n {
        if stack[i] < i {
            if i % 2 == 0 {
                rank.swap(0, i);
            } else {
                rank.swap(stack[i], i);
            }
            visit(&rank);
            stack[i] += 1;
            i = 1;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    Ok(CurvatureField {
        values: c
            .base()
            .iter()
            .zip(sums)
            .map(|(&v, s)| (v, Rational::new(s, count.max(1))))
            .collect(),
    })
}

/// Monte Carlo estimate of the expected index field with standard errors.
pub fn index_expectation_sampled(c: &Complex, samples: usize, seed: u64) -> Result<SampledExpectation> {
    if samples < 2 {
        return invalid("sampled expectation needs at least two samples");
    }
    let n = c.base().len();
    let links = Links::new(c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rank: Vec<usize> = (0..n).collect();
    let mut out = vec![0i64; n];
    let mut sum = vec![0f64; n];
    let mut sum_sq = vec![0f64; n];
    for _ in 0..samples {
        rank.shuffle(&mut rng);
        links.indices(&rank, &mut out);
        for v in 0..n {
            sum[v] += out[v] as f64;
            sum_sq[v] += (out[v] * out[v]) as f64;
        }
    }
    let m = samples as f64;
    let mut mean = BTreeMap::new();
    let mut std_error = BTreeMap::new();
    for (i, &v) in c.base().iter().enumerate() {
        let mu = sum[i] / m;
        let var = ((sum_sq[i] - m * mu * mu) / (m - 1.0)).max(0.0);
        mean.insert(v, mu);
        std_error.insert(v, (var / m).sqrt());
    }
    Ok(SampledExpectation {
        samples,
        mean,
        std_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generate::{generate, Family};
    use crate::index::gauss_bonnet_curvature;

    fn func(values: &[(Vertex, f64)]) -> BTreeMap<Vertex, f64> {
        values.iter().copied().collect()
    }

    #[test]
    fn circle_height_function() {
        let c4 = generate(Family::Cycle, 4, 0).unwrap();
        let f = func(&[(0, 0.0), (1, 1.0), (2, 2.0), (3, 3.0)]);
        let r = poincare_hopf(&c4, &f).unwrap();
        assert_eq!(r.values.values().copied().collect::<Vec<_>>(), vec![1, 0, 0, -1]);
        assert_eq!(r.total(), 0);
    }

    #[test]
    fn single_vertex_and_star() {
        let v = generate(Family::Simplex, 1, 0).unwrap();
        assert_eq!(poincare_hopf(&v, &func(&[(0, 4.2)])).unwrap().values[&0], 1);
        let star = generate(Family::Star, 3, 0).unwrap();
        let f = func(&[(0, 0.0), (1, 1.0), (2, 2.0), (3, 3.0)]);
        let r = poincare_hopf(&star, &f).unwrap();
        assert_eq!(r.values.values().copied().collect::<Vec<_>>(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn bad_functions() {
        let c4 = generate(Family::Cycle, 4, 0).unwrap();
        let tie = func(&[(0, 0.0), (1, 1.0), (2, 1.0), (3, 3.0)]);
        assert!(poincare_hopf(&c4, &tie).is_err());
        assert!(poincare_hopf(&c4, &func(&[(0, 0.0)])).is_err());
        let extra = func(&[(0, 0.0), (1, 1.0), (2, 2.0), (3, 3.0), (9, 4.0)]);
        assert!(poincare_hopf(&c4, &extra).is_err());
    }

    #[test]
    fn exhaustive_expectation_is_curvature() {
        for (f, n) in [(Family::Cycle, 4), (Family::Star, 3), (Family::Simplex, 3), (Family::Wheel, 4)] {
            let c = generate(f, n, 0).unwrap();
            assert_eq!(index_expectation_exhaustive(&c).unwrap(), gauss_bonnet_curvature(&c));
        }
        let big = generate(Family::Cycle, 9, 0).unwrap();
        assert!(matches!(index_expectation_exhaustive(&big), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn sampled_expectation_on_triangle() {
        let k3 = generate(Family::Simplex, 3, 0).unwrap();
        let s = index_expectation_sampled(&k3, 10_000, 1).unwrap();
        for v in 0..3 {
            let err = (s.mean[&v] - 1.0 / 3.0).abs();
            assert!(err < 3.0 * s.std_error[&v], "vertex {v}: {err} vs {}", s.std_error[&v]);
        }
    }
}
