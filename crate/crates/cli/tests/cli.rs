use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dindex::complex::generate::{graph, reference_suite, Family};
use dindex::io::{parse_edges, parse_facets, parse_permutation, serialize_edges, serialize_facets, Labels};
use dindex_cli::CliError;
use serde_json::Value;

fn dindex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dindex"))
        .args(args)
        .env_remove(dindex_cli::OUT_DIR_VAR)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn facet_round_trip_over_suite() {
    for (name, c) in reference_suite() {
        let labels = Labels::numeric(c.base().len());
        let text = serialize_facets(&c, &labels);
        let (back, _) = parse_facets(&text).unwrap();
        assert_eq!(back, c, "{name}");
        assert_eq!(serialize_facets(&back, &labels), text);
    }
}

#[test]
fn edge_round_trip_and_named_labels() {
    for (f, n) in [(Family::Cycle, 6), (Family::Wheel, 5), (Family::Random, 8)] {
        let g = graph(f, n, 3).unwrap();
        let labels = Labels::numeric(n + 1);
        let (back, _) = parse_edges(&serialize_edges(&g, &labels)).unwrap();
        assert_eq!(back, g);
    }
    let text = "north south\nsouth east\neast north\n";
    let (c, labels) = parse_facets(text).unwrap();
    let (again, labels2) = parse_facets(&serialize_facets(&c, &labels)).unwrap();
    assert_eq!(again, c);
    assert_eq!(labels, labels2);
    let p = parse_permutation("(north south east)", &labels).unwrap();
    assert_eq!(labels.name(p[&labels.id("east").unwrap()]), "north");
}

#[test]
fn report_on_triangle_edges() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "k3.edges", "v 1 2 3\ne 1 2\ne 2 3\ne 1 3\n");
    let r = json(&dindex(&["report", "--input", &input, "--format", "edges"]));
    assert_eq!(r["schema"], "dindex.report/1");
    assert_eq!(r["results"]["chi"], 1);
    assert_eq!(r["results"]["theorem1"]["equal"], true);
    assert_eq!(r["results"]["betti"]["de_rham"], serde_json::json!([1, 0, 0]));
    let facets = write(dir.path(), "k3.facets", "1 2 3\n");
    let f = json(&dindex(&["report", "--input", &facets]));
    assert_eq!(f["results"], r["results"]);
}

#[test]
fn lefschetz_and_heat_on_square() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c4", "a b\nb c\nc d\nd a\n");
    let rot = write(dir.path(), "rot", "(a b c d)\n");
    let r = json(&dindex(&["lefschetz", "--input", &input, "--perm", &rot]));
    assert_eq!(r["results"]["lefschetz_number"], 0);
    assert_eq!(r["results"]["fixed"], serde_json::json!([]));
    let refl = write(dir.path(), "refl", "b->d\nd->b\n");
    let r = json(&dindex(&["lefschetz", "--input", &input, "--perm", &refl]));
    assert_eq!(r["results"]["lefschetz_number"], 2);
    assert_eq!(r["results"]["checks"]["equal"], true);

    let h = json(&dindex(&["heat", "--input", &input, "--t", "0,1,10"]));
    let values = h["results"]["values"].as_array().unwrap();
    assert_eq!(values.len(), 3);
    for v in values {
        assert!(v["value"].as_f64().unwrap().abs() < 1e-9);
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["ph", "--generate", "random:8", "--seed", "5", "--mode", "sampled:500"],
        vec!["report", "--generate", "wheel:5"],
        vec!["lax", "--generate", "cycle:4", "--t-end", "1", "--dt", "0.05", "--stride", "5"],
        vec!["curvature", "--generate", "random:7", "--seed", "9", "--order", "2"],
    ] {
        let mut payloads = Vec::new();
        for i in 0..2 {
            let out = dir.path().join(format!("{}-{i}.json", args[0]));
            let mut full = args.clone();
            full.extend(["--out", out.to_str().unwrap()]);
            let o = dindex(&full);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
            payloads.push((serde_json::to_string(&v["results"]).unwrap(), v["input_digest"].clone()));
        }
        assert_eq!(payloads[0], payloads[1], "{args:?}");
    }
}

#[test]
fn out_dir_variable() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_dindex"))
        .args(["betti", "--generate", "octahedron"])
        .env(dindex_cli::OUT_DIR_VAR, dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("betti.json")).unwrap()).unwrap();
    assert_eq!(v["results"]["betti"], serde_json::json!([1, 0, 1]));
}

#[test]
fn refine_and_skeleton_emit_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("refined.facets");
    let r = json(&dindex(&["refine", "--generate", "simplex:3", "--emit", out.to_str().unwrap()]));
    assert_eq!(r["results"]["checks"]["f_vector_matches"], true);
    let (refined, _) = parse_facets(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(refined.f_vector().0, vec![7, 12, 6]);

    let sk = dir.path().join("sk.facets");
    let r = json(&dindex(&["skeleton", "--generate", "simplex:4", "--dim", "1", "--emit", sk.to_str().unwrap()]));
    assert_eq!(r["results"]["f_vector"], serde_json::json!([4, 6]));
    assert_eq!(fs::read_to_string(&sk).unwrap().lines().count(), 6);
}

#[test]
fn export_and_lax_csv() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(&dindex(&["export", "--generate", "simplex:2", "--operator", "hodge"]));
    assert_eq!(r["results"]["size"], 3);
    assert_eq!(r["results"]["checks"]["symmetric"], true);
    let csv = dir.path().join("traj.csv");
    let r = json(&dindex(&[
        "lax", "--generate", "cycle:4", "--t-end", "1", "--dt", "0.01", "--stride", "10", "--csv",
        csv.to_str().unwrap(),
    ]));
    assert_eq!(r["results"]["checks"]["isospectral"], true);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,lambda_0,"));
    assert_eq!(text.lines().count(), 1 + 11);
}

fn code(args: &[&str]) -> i32 {
    dindex(args).status.code().unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let empty_line = write(d, "gap.facets", "1 2\n\n2 3\n");
    let o = dindex(&["betti", "--input", &empty_line]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let undeclared = write(d, "bad.edges", "v a b\ne a c\n");
    assert_eq!(code(&["report", "--input", &undeclared, "--format", "edges"]), 2);
    let garbage = write(d, "junk.edges", "v a b\nedge a b\n");
    assert_eq!(code(&["report", "--input", &garbage, "--format", "edges"]), 2);
    let c4 = write(d, "c4", "0 1\n1 2\n2 3\n3 0\n");
    let not_auto = write(d, "swap", "(0 1)\n");
    assert_eq!(code(&["lefschetz", "--input", &c4, "--perm", &not_auto]), 2);
    let unknown = write(d, "unknown", "(0 7)\n");
    assert_eq!(code(&["lefschetz", "--input", &c4, "--perm", &unknown]), 2);
    let tie = write(d, "tie", "0 1\n1 1\n2 2\n3 3\n");
    assert_eq!(code(&["ph", "--input", &c4, "--function", &tie]), 2);
    let nan = write(d, "nan", "0 x\n");
    assert_eq!(code(&["ph", "--input", &c4, "--function", &nan]), 2);
    assert_eq!(code(&["heat", "--input", &c4, "--t", "-1"]), 2);
    assert_eq!(code(&["report", "--generate", "torus:3"]), 2);
    assert_eq!(code(&["report"]), 2);
    assert_eq!(code(&["ph", "--input", &c4, "--mode", "often"]), 2);

    assert_eq!(code(&["ph", "--generate", "cycle:9", "--mode", "exhaustive"]), 4);
    assert_eq!(code(&["betti", "--generate", "simplex:6", "--order", "3"]), 4);
    assert_eq!(code(&["lax", "--generate", "simplex:9"]), 4);

    assert_eq!(code(&["report", "--input", d.join("missing").to_str().unwrap()]), 1);
    assert_eq!(code(&["--version"]), 0);
}

#[test]
fn contract_violations_map_to_three() {
    let e = CliError::Core(dindex::Error::ContractViolation("d is not nilpotent".into()));
    assert_eq!(e.exit_code(), 3);
    let e = CliError::Core(dindex::Error::Divergence { t: 1.0, last_good_t: 0.9, last_good: vec![] });
    assert_eq!(e.exit_code(), 1);
}
