use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use dindex::complex::{barycentric_operator, Simplex};
use dindex::forms::{coboundary, connection_basis_limited, dirac, hodge_of, GradedOperator};
use dindex::index::{
    averaged_tuple_curvature, gauss_bonnet_curvature, gauss_bonnet_from_spheres, index_expectation_exhaustive,
    index_expectation_sampled, multilinear_curvature, poincare_hopf, random_function, theorem_one_report,
    wu_characteristic, CurvatureField,
};
use dindex::io::{parse_function, parse_permutation, serialize_facets, Labels};
use dindex::lax::{write_csv, LaxFlow};
use dindex::lefschetz::{check_automorphism, heat_lefschetz, lefschetz_number, Automorphism};
use dindex::rational::{Rational, RationalJson};
use dindex::spectral::{betti, heat_supertrace, supersymmetry_check, HodgeSpectra};
use dindex::{Complex, Vertex};
use serde_json::{json, Value};

use crate::args::{Command, Mode, OperatorKind};
use crate::{in_file, read, write_atomic, CliError, CliResult, Loaded};

/// Connection bases above this size are refused for orders three and up.
pub const MAX_ORDER3_TUPLES: usize = 2000;
/// The Lax flow works on dense matrices; refuse larger bases.
pub const MAX_LAX_BASIS: usize = 400;
const HEAT_TOLERANCE: f64 = 1e-9;

pub fn dispatch(command: &Command, l: &Loaded) -> CliResult<Value> {
    let c = &l.complex;
    match command {
        Command::Report { .. } => report(c, &l.labels),
        Command::Betti { order, .. } => betti_cmd(c, *order),
        Command::Curvature { order, .. } => curvature(c, &l.labels, *order),
        Command::Ph { input, function, mode } => ph(l, function.as_deref(), *mode, input.seed),
        Command::Lefschetz { perm, t, .. } => lefschetz(l, perm.as_deref(), t),
        Command::Heat { order, t, .. } => heat(c, *order, t),
        Command::Lax { dt, t_end, stride, csv, .. } => lax(c, *dt, *t_end, *stride, csv.as_deref()),
        Command::Refine { emit, .. } => refine(l, emit.as_deref()),
        Command::Skeleton { dim, emit, .. } => skeleton(l, *dim, emit.as_deref()),
        Command::Export { order, operator, .. } => export(l, *order, *operator),
    }
}

fn derivative(c: &Complex, order: usize) -> CliResult<GradedOperator> {
    let limit = if order >= 3 { MAX_ORDER3_TUPLES } else { usize::MAX };
    let basis = connection_basis_limited(c, order, limit)?;
    Ok(coboundary(Arc::new(basis)))
}

fn labelled(labels: &Labels, s: &Simplex) -> Vec<String> {
    s.vertices().iter().map(|&v| labels.name(v)).collect()
}

fn field_json(labels: &Labels, f: &CurvatureField) -> Value {
    let entries: Vec<Value> = f
        .values
        .iter()
        .map(|(&v, &x)| json!({"vertex": labels.name(v), "value": RationalJson::from(x)}))
        .collect();
    Value::Array(entries)
}

fn per_vertex<T: serde::Serialize>(labels: &Labels, m: &BTreeMap<Vertex, T>) -> Value {
    m.iter()
        .map(|(&v, x)| json!({"vertex": labels.name(v), "value": x}))
        .collect()
}

fn report(c: &Complex, labels: &Labels) -> CliResult<Value> {
    let chi = c.euler_characteristic();
    let d1 = derivative(c, 1)?;
    let d2 = derivative(c, 2)?;
    let t1 = theorem_one_report(c, 1)?;
    let t2 = theorem_one_report(c, 2)?;
    let k = gauss_bonnet_curvature(c);
    let gauss_bonnet = k.total() == Rational::from(chi);
    Ok(json!({
        "vertices": c.base().len(),
        "dim": c.dim(),
        "f_vector": c.f_vector(),
        "f_matrix": c.f_matrix(),
        "chi": chi,
        "wu2": wu_characteristic(c, 2)?,
        "wu3": wu_characteristic(c, 3)?,
        "betti": {
            "de_rham": betti(&d1)?,
            "connection2": betti(&d2)?,
        },
        "curvature": field_json(labels, &k),
        "theorem1": {
            "equal": t1.equal && t2.equal,
            "de_rham": t1,
            "connection2": t2,
        },
        "checks": {
            "gauss_bonnet": gauss_bonnet,
            "theorem1": t1.equal && t2.equal,
        },
    }))
}

fn betti_cmd(c: &Complex, order: usize) -> CliResult<Value> {
    let d = derivative(c, order)?;
    let b = betti(&d)?;
    let l = hodge_of(&d)?;
    let kernels = HodgeSpectra::new(&l)?.kernel_dims();
    let analytic = d.basis().alternating_dimension();
    Ok(json!({
        "order": order,
        "betti": b,
        "kernel_dims": kernels,
        "block_dims": d.basis().block_dims(),
        "analytic_index": analytic,
        "cohomological_index": b.alternating_sum(),
        "checks": {
            "exact_matches_numeric": b.0 == kernels,
            "euler_poincare": analytic == b.alternating_sum(),
        },
    }))
}

fn curvature(c: &Complex, labels: &Labels, order: usize) -> CliResult<Value> {
    let field = if order == 1 { gauss_bonnet_curvature(c) } else { multilinear_curvature(c, order)? };
    let target = wu_characteristic(c, order)?;
    let total = field.total();
    let mut checks = json!({ "total_matches": total == Rational::from(target) });
    if order == 1 {
        checks["sphere_formula_matches"] = json!(gauss_bonnet_from_spheres(c) == field);
    }
    Ok(json!({
        "order": order,
        "curvature": field_json(labels, &field),
        "total": RationalJson::from(total),
        "target": target,
        "averaged_diagnostic": field_json(labels, &averaged_tuple_curvature(c, order)?),
        "checks": checks,
    }))
}

fn ph(l: &Loaded, function: Option<&Path>, mode: Option<Mode>, seed: u64) -> CliResult<Value> {
    let c = &l.complex;
    let f = match function {
        Some(path) => {
            let text = read(path)?;
            in_file(path, parse_function(&text, &l.labels))?
        }
        None => random_function(c, seed),
    };
    let field = poincare_hopf(c, &f)?;
    let chi = c.euler_characteristic();
    let mut out = json!({
        "function": per_vertex(&l.labels, &field.function),
        "indices": per_vertex(&l.labels, &field.values),
        "total": field.total(),
        "chi": chi,
        "checks": { "poincare_hopf": field.total() == chi },
    });
    let k = gauss_bonnet_curvature(c);
    match mode {
        None => {}
        Some(Mode::Exhaustive) => {
            let e = index_expectation_exhaustive(c)?;
            out["expectation"] = json!({ "mode": "exhaustive", "values": field_json(&l.labels, &e) });
            out["checks"]["expectation_is_curvature"] = json!(e == k);
        }
        Some(Mode::Sampled(n)) => {
            let s = index_expectation_sampled(c, n, seed)?;
            let z = s
                .mean
                .iter()
                .map(|(v, m)| {
                    let err = (m - dindex::rational::to_f64(k.get(*v))).abs();
                    err / s.std_error[v].max(f64::MIN_POSITIVE)
                })
                .fold(0.0, f64::max);
            out["expectation"] = json!({
                "mode": "sampled",
                "samples": n,
                "mean": per_vertex(&l.labels, &s.mean),
                "std_error": per_vertex(&l.labels, &s.std_error),
                "curvature": field_json(&l.labels, &k),
                "max_z": if z.is_finite() { json!(z) } else { Value::Null },
            });
        }
    }
    Ok(out)
}

fn lefschetz(l: &Loaded, perm: Option<&Path>, times: &[f64]) -> CliResult<Value> {
    let c = &l.complex;
    let t = match perm {
        Some(path) => {
            let text = read(path)?;
            let map = in_file(path, parse_permutation(&text, &l.labels))?;
            in_file(path, check_automorphism(c, &map))?
        }
        None => Automorphism::identity(c),
    };
    let d = derivative(c, 1)?;
    let r = lefschetz_number(&t, c, &d)?;
    let hodge = hodge_of(&d)?;
    let heat: Vec<(f64, f64)> = times
        .iter()
        .map(|&time| Ok((time, heat_lefschetz(&t, &hodge, time)?)))
        .collect::<dindex::Result<_>>()?;
    let heat_constant = heat.iter().all(|(_, h)| (h - r.lefschetz_number as f64).abs() < HEAT_TOLERANCE);
    let fixed: Vec<Value> = r
        .fixed
        .fixed
        .iter()
        .map(|f| json!({"simplex": labelled(&l.labels, &f.simplex), "index": f.index}))
        .collect();
    Ok(json!({
        "permutation": t.map().iter().map(|(&a, &b)| [l.labels.name(a), l.labels.name(b)]).collect::<Vec<_>>(),
        "lefschetz_number": r.lefschetz_number,
        "raw": r.raw,
        "cohomology_traces": r.cohomology_traces,
        "fixed": fixed,
        "fixed_total": r.fixed.total,
        "vertex_indices": per_vertex(&l.labels, &r.fixed.vertex_indices_json()),
        "heat": heat.iter().map(|(t, h)| json!({"t": t, "value": h})).collect::<Vec<_>>(),
        "checks": { "equal": r.equal, "heat_constant": heat_constant },
    }))
}

fn heat(c: &Complex, order: usize, times: &[f64]) -> CliResult<Value> {
    let d = derivative(c, order)?;
    let l = hodge_of(&d)?;
    let target = d.basis().alternating_dimension();
    let values: Vec<(f64, f64)> = times
        .iter()
        .map(|&t| Ok((t, heat_supertrace(&l, t)?)))
        .collect::<dindex::Result<_>>()?;
    let deviation = values.iter().map(|(_, s)| (s - target as f64).abs()).fold(0.0, f64::max);
    let susy = supersymmetry_check(&l)?;
    Ok(json!({
        "order": order,
        "target": target,
        "values": values.iter().map(|(t, s)| json!({"t": t, "value": s})).collect::<Vec<_>>(),
        "max_deviation": deviation,
        "supersymmetry": susy,
        "checks": { "constant": deviation < HEAT_TOLERANCE, "elliptic": susy.elliptic },
    }))
}

fn lax(c: &Complex, dt: f64, t_end: f64, stride: usize, csv: Option<&Path>) -> CliResult<Value> {
    let d = derivative(c, 1)?;
    if d.basis().len() > MAX_LAX_BASIS {
        return Err(dindex::Error::ResourceLimit(format!(
            "Lax flow on {} basis elements exceeds {MAX_LAX_BASIS}",
            d.basis().len()
        ))
        .into());
    }
    let dd = dirac(&d)?;
    let flow = LaxFlow::for_operator(&dd);
    let traj = flow.integrate(&dd.matrix().to_dense(), t_end, dt, stride)?;
    let rows = traj
        .iter()
        .map(|s| flow.diagnostics(&traj[0], s))
        .collect::<dindex::Result<Vec<_>>>()?;
    if let Some(path) = csv {
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        write_atomic(path, &buf)?;
    }
    let last = rows.last().expect("trajectory has a first state");
    let max = |f: fn(&dindex::lax::Diagnostics) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    Ok(json!({
        "dt": dt,
        "t_end": t_end,
        "basis_size": d.basis().len(),
        "rows": rows,
        "final_drift": last.drift,
        "final_b_norm": last.diagonal_norm,
        "max_nilpotency_defect": max(|r| r.nilpotency_defect),
        "max_asymmetry": max(|r| r.asymmetry),
        "checks": {
            "isospectral": last.drift < 1e-6,
            "nilpotent": max(|r| r.nilpotency_defect) < 1e-8,
            "symmetric": max(|r| r.asymmetry) < 1e-10,
        },
    }))
}

fn refine(l: &Loaded, emit: Option<&Path>) -> CliResult<Value> {
    let c = &l.complex;
    let r = c.barycentric_refinement();
    let s = barycentric_operator(c.dim().unwrap_or(0));
    let predicted = c.f_vector().apply(&s);
    if let Some(path) = emit {
        let names = c.simplices().iter().map(|x| labelled(&l.labels, x).join("_"));
        let labels = Labels::from_names(names.clone());
        // Labels sort their names, so map each chain vertex through its name.
        let ids: Vec<Vertex> = names.map(|n| labels.id(&n).unwrap()).collect();
        write_atomic(path, serialize_facets(&r.relabel(|v| ids[v]), &labels).as_bytes())?;
    }
    Ok(json!({
        "f_vector": c.f_vector(),
        "refined_f_vector": r.f_vector(),
        "predicted_f_vector": predicted,
        "operator": s,
        "chi": c.euler_characteristic(),
        "refined_chi": r.euler_characteristic(),
        "checks": {
            "f_vector_matches": predicted == r.f_vector(),
            "chi_preserved": c.euler_characteristic() == r.euler_characteristic(),
        },
    }))
}

fn skeleton(l: &Loaded, dim: usize, emit: Option<&Path>) -> CliResult<Value> {
    let s = l.complex.skeleton(dim);
    if let Some(path) = emit {
        write_atomic(path, serialize_facets(&s, &l.labels).as_bytes())?;
    }
    Ok(json!({
        "dim": s.dim(),
        "f_vector": s.f_vector(),
        "chi": s.euler_characteristic(),
        "checks": { "subcomplex": s.is_subcomplex_of(&l.complex) },
    }))
}

fn export(l: &Loaded, order: usize, kind: OperatorKind) -> CliResult<Value> {
    let d = derivative(&l.complex, order)?;
    let op = match kind {
        OperatorKind::D => d,
        OperatorKind::Dirac => dirac(&d)?,
        OperatorKind::Hodge => hodge_of(&d)?,
    };
    let nilpotent = op.is_nilpotent();
    let mut v = serde_json::to_value(op.export(|v| l.labels.name(v))).expect("export serializes");
    v["checks"] = match kind {
        OperatorKind::D => json!({ "nilpotent": nilpotent }),
        _ => json!({ "symmetric": op.matrix().is_symmetric() }),
    };
    Ok(v)
}
