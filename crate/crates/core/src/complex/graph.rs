use std::collections::BTreeSet;

use super::{Complex, Simplex, Vertex};
use crate::error::{invalid, Result};

/// Finite simple graph on explicit vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Graph {
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self> {
        let vs: BTreeSet<Vertex> = vertices.into_iter().collect();
        let mut es = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return invalid(format!("loop at vertex {a}"));
            }
            if !vs.contains(&a) || !vs.contains(&b) {
                return invalid(format!("edge ({a}, {b}) references an unknown vertex"));
            }
            if !es.insert((a.min(b), a.max(b))) {
                return invalid(format!("duplicate edge ({a}, {b})"));
            }
        }
        Ok(Graph {
            vertices: vs.into_iter().collect(),
            edges: es.into_iter().collect(),
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    fn neighbours(&self) -> Vec<BTreeSet<usize>> {
        let pos = |v: Vertex| self.vertices.binary_search(&v).unwrap();
        let mut adj = vec![BTreeSet::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[pos(a)].insert(pos(b));
            adj[pos(b)].insert(pos(a));
        }
        adj
    }

    /// Maximal cliques by Bron-Kerbosch with Tomita pivoting.
    pub fn maximal_cliques(&self) -> Vec<Vec<Vertex>> {
        let adj = self.neighbours();
        let mut out = Vec::new();
        let p: BTreeSet<usize> = (0..self.vertices.len()).collect();
        bron_kerbosch(&adj, &mut Vec::new(), p, BTreeSet::new(), &mut out);
        out.into_iter()
            .map(|c| {
                let mut c: Vec<Vertex> = c.into_iter().map(|i| self.vertices[i]).collect();
                c.sort_unstable();
                c
            })
            .collect()
    }

    /// Complex of all cliques.
    pub fn whitney_complex(&self) -> Complex {
        Complex::from_facets(self.maximal_cliques()).expect("cliques are non-empty")
    }

    /// Complex whose vertices are edge indices (into [`Graph::edges`]) and
    /// whose simplices are the non-empty forests.
    pub fn graphical_complex(&self) -> Complex {
        let m = self.edges.len();
        let n = self.vertices.len();
        let pos = |v: Vertex| self.vertices.binary_search(&v).unwrap();
        let ends: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (pos(a), pos(b))).collect();
        let mut set = BTreeSet::new();
        // DFS over edge subsets in increasing index order; the union-find is
        // cloned per branch, which is fine at the sizes this is used for.
        let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), (0..n).collect())];
        while let Some((subset, parent)) = stack.pop() {
            let start = subset.last().map_or(0, |&e| e + 1);
            for e in start..m {
                let mut parent = parent.clone();
                let (a, b) = (find(&mut parent, ends[e].0), find(&mut parent, ends[e].1));
                if a == b {
                    continue;
                }
                parent[a] = b;
                let mut next = subset.clone();
                next.push(e);
                set.insert(Simplex::from_sorted(next.clone()));
                stack.push((next, parent));
            }
        }
        Complex::from_closed_set(set)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn bron_kerbosch(
    adj: &[BTreeSet<usize>],
    r: &mut Vec<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = *p
        .union(&x)
        .max_by_key(|&&u| adj[u].intersection(&p).count())
        .unwrap();
    let candidates: Vec<usize> = p.difference(&adj[pivot]).copied().collect();
    for v in candidates {
        r.push(v);
        let np = p.intersection(&adj[v]).copied().collect();
        let nx = x.intersection(&adj[v]).copied().collect();
        bron_kerbosch(adj, r, np, nx, out);
        r.pop();
        p.remove(&v);
        x.insert(v);
    }
}
