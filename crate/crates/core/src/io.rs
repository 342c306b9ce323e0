//! Text formats.
//!
//! Facet lists: one facet per line, whitespace-separated vertex labels, `#`
//! starts a comment. A line with no labels that is not a pure comment line is
//! an empty facet and rejected.
//!
//! Edge lists: `v a b ...` declares vertices, `e a b` declares an edge between
//! declared vertices. Blank and comment lines are ignored.
//!
//! Labels are interned to dense ids in natural order: numerically when every
//! label is an unsigned integer, lexicographically otherwise.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::complex::{Complex, Graph, Simplex, Vertex};
use crate::error::{invalid, Error, Result};
use crate::forms::{Chain, GradedBasis};

/// Vertex label table; id `i` carries label `names[i]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
    ids: HashMap<String, Vertex>,
}

impl Labels {
    pub fn from_names(names: impl IntoIterator<Item = String>) -> Self {
        let set: BTreeSet<String> = names.into_iter().collect();
        let mut names: Vec<String> = set.into_iter().collect();
        if names.iter().all(|s| s.parse::<u64>().is_ok()) {
            names.sort_by_key(|s| s.parse::<u64>().unwrap());
        }
        let ids = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Labels { names, ids }
    }

    /// Labels `0..n`.
    pub fn numeric(n: usize) -> Self {
        Self::from_names((0..n).map(|i| i.to_string()))
    }

    pub fn name(&self, v: Vertex) -> String {
        self.names.get(v).cloned().unwrap_or_else(|| v.to_string())
    }

    pub fn id(&self, label: &str) -> Option<Vertex> {
        self.ids.get(label).copied()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

fn strip_comment(line: &str) -> (&str, bool) {
    match line.find('#') {
        Some(i) => (&line[..i], true),
        None => (line, false),
    }
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

pub fn parse_facets(text: &str) -> Result<(Complex, Labels)> {
    let mut facets: Vec<Vec<&str>> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let (body, commented) = strip_comment(raw);
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.is_empty() {
            if commented {
                continue;
            }
            return parse_err(no + 1, "empty facet");
        }
        if tokens.len() > 24 {
            return parse_err(no + 1, "facet has more than 24 vertices");
        }
        facets.push(tokens);
    }
    let labels = Labels::from_names(facets.iter().flatten().map(|s| s.to_string()));
    let complex = Complex::from_facets(
        facets
            .iter()
            .map(|f| f.iter().map(|s| labels.id(s).unwrap()).collect::<Vec<_>>()),
    )?;
    Ok((complex, labels))
}

pub fn parse_edges(text: &str) -> Result<(Graph, Labels)> {
    let mut vertices: Vec<&str> = Vec::new();
    let mut declared = BTreeSet::new();
    let mut edges: Vec<(&str, &str, usize)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let (body, _) = strip_comment(raw);
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens.split_first() {
            None => continue,
            Some((&"v", rest)) if !rest.is_empty() => {
                for &v in rest {
                    if declared.insert(v) {
                        vertices.push(v);
                    }
                }
            }
            Some((&"e", &[a, b])) => {
                for x in [a, b] {
                    if !declared.contains(x) {
                        return parse_err(no + 1, format!("edge uses undeclared vertex {x:?}"));
                    }
                }
                if a == b {
                    return parse_err(no + 1, format!("loop at vertex {a:?}"));
                }
                edges.push((a, b, no + 1));
            }
            Some(_) => return parse_err(no + 1, format!("expected `v ...` or `e a b`, got {body:?}")),
        }
    }
    let labels = Labels::from_names(vertices.iter().map(|s| s.to_string()));
    let mut seen = BTreeSet::new();
    let mut ids = Vec::with_capacity(edges.len());
    for (a, b, line) in edges {
        let (x, y) = (labels.id(a).unwrap(), labels.id(b).unwrap());
        if !seen.insert((x.min(y), x.max(y))) {
            return parse_err(line, format!("duplicate edge {a} {b}"));
        }
        ids.push((x, y));
    }
    let graph = Graph::new(0..labels.len(), ids)?;
    Ok((graph, labels))
}

/// Facets, one per line, in canonical order.
pub fn serialize_facets(c: &Complex, labels: &Labels) -> String {
    let mut s = String::new();
    for f in c.facets() {
        let line: Vec<String> = f.vertices().iter().map(|&v| labels.name(v)).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

pub fn serialize_edges(g: &Graph, labels: &Labels) -> String {
    let mut s = String::new();
    if !g.vertices().is_empty() {
        let vs: Vec<String> = g.vertices().iter().map(|&v| labels.name(v)).collect();
        s.push_str(&format!("v {}\n", vs.join(" ")));
    }
    for &(a, b) in g.edges() {
        s.push_str(&format!("e {} {}\n", labels.name(a), labels.name(b)));
    }
    s
}

fn lookup(labels: &Labels, s: &str, line: usize) -> Result<Vertex> {
    labels
        .id(s)
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("unknown vertex {s:?}"),
        })
}

/// Permutation in cycle notation (`(1 2 3)(4 5)`) or as `a->b` lines.
/// Vertices that are not mentioned are fixed.
pub fn parse_permutation(text: &str, labels: &Labels) -> Result<BTreeMap<Vertex, Vertex>> {
    let mut map: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let set = |map: &mut BTreeMap<Vertex, Vertex>, a: Vertex, b: Vertex, line: usize| {
        if map.insert(a, b).is_some_and(|old| old != b) {
            return parse_err(line, format!("vertex {} mapped twice", labels.name(a)));
        }
        Ok(())
    };
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let (body, _) = strip_comment(raw);
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        if let Some((a, b)) = body.split_once("->") {
            let a = lookup(labels, a.trim(), line)?;
            let b = lookup(labels, b.trim(), line)?;
            set(&mut map, a, b, line)?;
            continue;
        }
        let mut rest = body;
        while !rest.is_empty() {
            let Some(open) = rest.strip_prefix('(') else {
                return parse_err(line, "expected `(` or `a->b`");
            };
            let Some(close) = open.find(')') else {
                return parse_err(line, "unclosed cycle");
            };
            let cycle: Vec<Vertex> = open[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| lookup(labels, s, line))
                .collect::<Result<_>>()?;
            for (i, &a) in cycle.iter().enumerate() {
                set(&mut map, a, cycle[(i + 1) % cycle.len()], line)?;
            }
            rest = open[close + 1..].trim_start();
        }
    }
    for v in 0..labels.len() {
        map.entry(v).or_insert(v);
    }
    Ok(map)
}

/// `label value` lines.
pub fn parse_function(text: &str, labels: &Labels) -> Result<BTreeMap<Vertex, f64>> {
    let mut f = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let (body, _) = strip_comment(raw);
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens.as_slice() {
            [] => continue,
            [v, x] => {
                let v = lookup(labels, v, no + 1)?;
                let x: f64 = x.parse().map_err(|_| Error::Parse {
                    line: no + 1,
                    message: format!("bad number {x:?}"),
                })?;
                if f.insert(v, x).is_some() {
                    return parse_err(no + 1, "vertex given twice");
                }
            }
            _ => return parse_err(no + 1, "expected `label value`"),
        }
    }
    Ok(f)
}

/// Oriented 1-chain walking the closed vertex loop `cycle`.
pub fn cycle_chain(basis: &GradedBasis, cycle: &[Vertex]) -> Result<Chain> {
    if cycle.len() < 3 {
        return invalid("a loop needs at least three vertices");
    }
    let mut chain = Chain::new();
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        let e = Simplex::new([a, b])?;
        let Some(idx) = basis.index_of(std::slice::from_ref(&e)) else {
            return invalid(format!("({a}, {b}) is not an edge"));
        };
        chain.add(idx, if a < b { 1 } else { -1 });
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facet_file_triangle() {
        let (c, labels) = parse_facets("# triangle\n1 2 3\n").unwrap();
        assert_eq!(c.f_vector().0, vec![3, 3, 1]);
        assert_eq!(labels.name(0), "1");
    }

    #[test]
    fn empty_facet_line_is_an_error() {
        let err = parse_facets("1 2\n\n2 3\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, message: "empty facet".into() });
    }

    #[test]
    fn natural_label_order() {
        let (_, labels) = parse_facets("10 9\n2 1\n").unwrap();
        assert_eq!(labels.name(0), "1");
        assert_eq!(labels.name(3), "10");
        let (_, labels) = parse_facets("b a\nc\n").unwrap();
        assert_eq!(labels.id("a"), Some(0));
    }

    #[test]
    fn edge_file_square() {
        let (g, labels) = parse_edges("v a b c d\ne a b\ne b c\ne c d\ne d a\n").unwrap();
        let w = g.whitney_complex();
        assert_eq!(w.len(), 8);
        assert_eq!(parse_edges(&serialize_edges(&g, &labels)).unwrap().0, g);
    }

    #[test]
    fn edge_file_errors() {
        let e = parse_edges("v a b\ne a c\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(matches!(parse_edges("v a\nx\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edges("v a b\ne a b\ne b a\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn permutations() {
        let labels = Labels::numeric(5);
        let p = parse_permutation("(0 1 2)(3 4)", &labels).unwrap();
        assert_eq!(p[&2], 0);
        assert_eq!(p[&4], 3);
        let q = parse_permutation("0->1\n1->0\n", &labels).unwrap();
        assert_eq!(q[&2], 2);
        assert!(parse_permutation("(0 9)", &labels).is_err());
        assert!(parse_permutation("0->1\n0->2\n", &labels).is_err());
    }

    #[test]
    fn functions() {
        let labels = Labels::numeric(3);
        let f = parse_function("0 1.5\n2 -1 # low\n", &labels).unwrap();
        assert_eq!(f[&2], -1.0);
        assert!(matches!(parse_function("0 x\n", &labels), Err(Error::Parse { line: 1, .. })));
    }
}
