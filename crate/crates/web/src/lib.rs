//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes an edge list in the `v ...` / `e a b` format and returns
//! a JSON string; the page parses it and draws on canvases.

use std::collections::BTreeMap;

use dindex::forms::{dirac, exterior_derivative, hodge_of};
use dindex::index::{gauss_bonnet_curvature, poincare_hopf, random_function};
use dindex::io::{parse_edges, Labels};
use dindex::lax::{sorted_eigenvalues, LaxFlow};
use dindex::rational::to_f64;
use dindex::spectral::{betti, HodgeSpectra};
use dindex::Complex;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Demo graphs stay small; the Lax flow is dense and runs on the main thread.
const MAX_VERTICES: usize = 24;
const MAX_LAX_BASIS: usize = 120;
const MAX_LAX_STEPS: usize = 20_000;

fn load(edges: &str) -> Result<(Complex, Labels, Vec<(usize, usize)>), String> {
    let (g, labels) = parse_edges(edges).map_err(|e| e.to_string())?;
    if labels.is_empty() {
        return Err("declare at least one vertex with `v`".into());
    }
    if labels.len() > MAX_VERTICES {
        return Err(format!("the demo accepts at most {MAX_VERTICES} vertices"));
    }
    let edge_list = g.edges().to_vec();
    Ok((g.whitney_complex(), labels, edge_list))
}

/// Counts, Betti numbers, curvature and the Poincare-Hopf indices of a
/// random function determined by `seed`.
pub fn analyze_json(edges: &str, seed: u64) -> Result<Value, String> {
    let (c, labels, edge_list) = load(edges)?;
    let d = exterior_derivative(&c);
    let b = betti(&d).map_err(|e| e.to_string())?;
    let k = gauss_bonnet_curvature(&c);
    let f = random_function(&c, seed);
    let ph = poincare_hopf(&c, &f).map_err(|e| e.to_string())?;
    let vertices: Vec<Value> = c
        .base()
        .iter()
        .map(|&v| {
            let r = k.get(v);
            json!({
                "label": labels.name(v),
                "curvature": to_f64(r),
                "curvature_text": if *r.denom() == 1 { r.numer().to_string() } else { format!("{}/{}", r.numer(), r.denom()) },
                "height": f[&v],
                "index": ph.values[&v],
            })
        })
        .collect();
    Ok(json!({
        "vertices": vertices,
        "edges": edge_list,
        "f_vector": c.f_vector(),
        "chi": c.euler_characteristic(),
        "betti": b,
        "index_total": ph.total(),
    }))
}

/// Per-degree heat traces `tr exp(-t L_k)` and their alternating sum on
/// `samples` points of `[0, t_max]`.
pub fn heat_json(edges: &str, t_max: f64, samples: usize) -> Result<Value, String> {
    if !(t_max > 0.0) || !t_max.is_finite() || !(2..=1000).contains(&samples) {
        return Err("need t_max > 0 and 2 to 1000 samples".into());
    }
    let (c, _, _) = load(edges)?;
    let l = hodge_of(&exterior_derivative(&c)).map_err(|e| e.to_string())?;
    let spectra = HodgeSpectra::new(&l).map_err(|e| e.to_string())?;
    let times: Vec<f64> = (0..samples).map(|i| t_max * i as f64 / (samples - 1) as f64).collect();
    let traces: Vec<Vec<f64>> = spectra
        .blocks
        .iter()
        .map(|b| times.iter().map(|&t| b.heat_trace(t, None)).collect())
        .collect();
    let supertrace: Vec<f64> = (0..samples)
        .map(|i| {
            traces
                .iter()
                .enumerate()
                .map(|(k, tr)| if k % 2 == 0 { tr[i] } else { -tr[i] })
                .sum()
        })
        .collect();
    Ok(json!({
        "t": times,
        "traces": traces,
        "supertrace": supertrace,
        "chi": c.euler_characteristic(),
        "spectrum": spectra.report(),
    }))
}

/// Eigenvalues and `|b_t|` along the isospectral deformation of the Dirac
/// operator, sampled about `frames` times.
pub fn lax_json(edges: &str, t_end: f64, dt: f64, frames: usize) -> Result<Value, String> {
    let (c, _, _) = load(edges)?;
    let d = exterior_derivative(&c);
    if d.basis().len() > MAX_LAX_BASIS {
        return Err(format!("the demo flow needs at most {MAX_LAX_BASIS} simplices"));
    }
    if dt > 0.0 && t_end / dt > MAX_LAX_STEPS as f64 {
        return Err(format!("at most {MAX_LAX_STEPS} steps"));
    }
    let dd = dirac(&d).map_err(|e| e.to_string())?;
    let flow = LaxFlow::for_operator(&dd);
    let steps = (t_end / dt).round().max(1.0) as usize;
    let stride = (steps / frames.max(1)).max(1);
    let traj = flow
        .integrate(&dd.matrix().to_dense(), t_end, dt, stride)
        .map_err(|e| e.to_string())?;
    let mut series: BTreeMap<&str, Vec<Value>> = BTreeMap::new();
    for s in &traj {
        let split = flow.split(&s.dirac).map_err(|e| e.to_string())?;
        series.entry("t").or_default().push(json!(s.t));
        series.entry("eigenvalues").or_default().push(json!(sorted_eigenvalues(&s.dirac)));
        series.entry("b_norm").or_default().push(json!(split.diagonal.norm()));
        series
            .entry("d2_norm")
            .or_default()
            .push(json!(flow.nilpotency_defect(&s.dirac).map_err(|e| e.to_string())?));
    }
    Ok(json!(series))
}

fn wrap(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn analyze(edges: &str, seed: u32) -> Result<String, JsError> {
    wrap(analyze_json(edges, seed as u64))
}

#[wasm_bindgen]
pub fn heat(edges: &str, t_max: f64, samples: u32) -> Result<String, JsError> {
    wrap(heat_json(edges, t_max, samples as usize))
}

#[wasm_bindgen]
pub fn lax(edges: &str, t_end: f64, dt: f64, frames: u32) -> Result<String, JsError> {
    wrap(lax_json(edges, t_end, dt, frames as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    const C4: &str = "v 0 1 2 3\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n";
    const OCTAHEDRON: &str = "v 0 1 2 3 4 5\ne 0 1\ne 0 2\ne 0 4\ne 0 5\ne 1 2\ne 1 3\ne 1 5\ne 2 3\ne 2 4\ne 3 4\ne 3 5\ne 4 5\n";

    #[test]
    fn analyze_octahedron() {
        let v = analyze_json(OCTAHEDRON, 1).unwrap();
        assert_eq!(v["chi"], 2);
        assert_eq!(v["index_total"], 2);
        assert_eq!(v["betti"], json!([1, 0, 1]));
        for x in v["vertices"].as_array().unwrap() {
            assert_eq!(x["curvature_text"], "1/3");
        }
    }

    #[test]
    fn heat_curve_is_flat() {
        let v = heat_json(C4, 5.0, 11).unwrap();
        for s in v["supertrace"].as_array().unwrap() {
            assert!(s.as_f64().unwrap().abs() < 1e-9);
        }
        assert_eq!(v["traces"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn lax_keeps_spectrum() {
        let v = lax_json(C4, 2.0, 0.01, 20).unwrap();
        let eig = v["eigenvalues"].as_array().unwrap();
        let first = eig.first().unwrap().as_array().unwrap();
        let last = eig.last().unwrap().as_array().unwrap();
        for (a, b) in first.iter().zip(last) {
            assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() < 1e-8);
        }
        assert!(v["b_norm"].as_array().unwrap().last().unwrap().as_f64().unwrap() > 1e-3);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(analyze_json("e 0 1\n", 0).is_err());
        assert!(analyze_json("", 0).is_err());
        assert!(heat_json(C4, -1.0, 10).is_err());
        let big: String = format!("v {}\n", (0..30).map(|i| i.to_string()).collect::<Vec<_>>().join(" "));
        assert!(analyze_json(&big, 0).is_err());
    }
}
