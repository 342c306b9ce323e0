//! Small deterministic complexes used as test corpora and demo inputs.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Complex, Graph};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Full simplex on `n` vertices.
    Simplex,
    /// Circular graph `C_n`, `n >= 4`.
    Cycle,
    /// Linear graph on `n` vertices.
    Path,
    /// Wheel: a hub joined to every vertex of `C_n`, `n >= 4`.
    Wheel,
    /// Hub with `n` leaves.
    Star,
    /// Octahedron graph; `n` is ignored.
    Octahedron,
    /// Whitney complex of an Erdos-Renyi graph on `n` vertices.
    Random,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "simplex" => Family::Simplex,
            "cycle" => Family::Cycle,
            "path" => Family::Path,
            "wheel" => Family::Wheel,
            "star" => Family::Star,
            "octahedron" => Family::Octahedron,
            "random" => Family::Random,
            other => return invalid(format!("unknown family {other:?}")),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Simplex => "simplex",
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::Wheel => "wheel",
            Family::Star => "star",
            Family::Octahedron => "octahedron",
            Family::Random => "random",
        };
        f.write_str(s)
    }
}

/// Edge probability used by [`Family::Random`] through [`generate`].
pub const DEFAULT_EDGE_PROBABILITY: f64 = 0.5;

pub fn generate(family: Family, n: usize, seed: u64) -> Result<Complex> {
    Ok(graph(family, n, seed)?.whitney_complex())
}

/// The underlying graph of a family member.
pub fn graph(family: Family, n: usize, seed: u64) -> Result<Graph> {
    match family {
        Family::Simplex => {
            check(n, 1, 24, family)?;
            Graph::new(0..n, pairs(n))
        }
        Family::Cycle => {
            check(n, 4, 4096, family)?;
            Graph::new(0..n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Family::Path => {
            check(n, 1, 4096, family)?;
            Graph::new(0..n, (1..n).map(|i| (i - 1, i)))
        }
        Family::Wheel => {
            check(n, 4, 4096, family)?;
            let rim = (0..n).map(|i| (i, (i + 1) % n));
            let spokes = (0..n).map(|i| (i, n));
            Graph::new(0..=n, rim.chain(spokes))
        }
        Family::Star => {
            check(n, 1, 4096, family)?;
            Graph::new(0..=n, (1..=n).map(|i| (0, i)))
        }
        Family::Octahedron => Graph::new(0..6, pairs(6).filter(|&(a, b)| b != a + 3)),
        Family::Random => random_graph(n, DEFAULT_EDGE_PROBABILITY, seed),
    }
}

pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check(n, 1, 64, Family::Random)?;
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("edge probability {p} outside [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = pairs(n).filter(|_| rng.random_bool(p)).collect();
    Graph::new(0..n, edges)
}

/// A random sub-complex generated by a random subset of the simplices of `c`.
pub fn random_subcomplex<R: Rng>(c: &Complex, rng: &mut R) -> Complex {
    let pick: Vec<_> = c
        .simplices()
        .iter()
        .filter(|_| rng.random_bool(0.3))
        .collect();
    c.generated_by(pick)
}

/// Named test corpus: simplices up to five vertices, cycles `C_4..C_8`, a
/// path, `star(3)`, wheels `W_4..W_6`, the octahedron, the 1-skeleton of `K_3`
/// and twenty seeded random complexes on 3 to 8 vertices, followed by the
/// Barycentric refinements of the deterministic members with at most four
/// vertices.
pub fn reference_suite() -> Vec<(String, Complex)> {
    let mut out = Vec::new();
    let mut add = |name: String, c: Complex| out.push((name, c));
    let named = |f: Family, n: usize| (format!("{f}({n})"), generate(f, n, 0).expect("suite member"));
    let mut fixed = Vec::new();
    fixed.extend((1..=5).map(|n| named(Family::Simplex, n)));
    fixed.extend((4..=8).map(|n| named(Family::Cycle, n)));
    fixed.push(named(Family::Path, 4));
    fixed.push(named(Family::Star, 3));
    fixed.extend((4..=6).map(|n| named(Family::Wheel, n)));
    fixed.push(("octahedron".into(), generate(Family::Octahedron, 0, 0).unwrap()));
    fixed.push(("skeleton1(simplex(3))".into(), generate(Family::Simplex, 3, 0).unwrap().skeleton(1)));
    let small: Vec<_> = fixed
        .iter()
        .filter(|(_, c)| c.base().len() <= 4)
        .map(|(name, c)| (format!("refine({name})"), c.barycentric_refinement()))
        .collect();
    for (name, c) in fixed {
        add(name, c);
    }
    for seed in 0..20u64 {
        let n = 3 + (seed % 6) as usize;
        add(format!("random({n}, seed {seed})"), generate(Family::Random, n, seed).unwrap());
    }
    for (name, c) in small {
        add(name, c);
    }
    out
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

fn check(n: usize, lo: usize, hi: usize, family: Family) -> Result<()> {
    if n < lo || n > hi {
        return invalid(format!("{family} needs {lo} <= n <= {hi}, got {n}"));
    }
    Ok(())
}
