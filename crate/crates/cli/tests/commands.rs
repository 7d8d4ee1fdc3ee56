use std::collections::BTreeSet;
use std::process::Command;

use polyptych_cli::context::{Family, FamilyCtx};
use polyptych_cli::main_with_args;
use polyptych_cli::manifest::{
    emit_manifest, lattice_from_data, lattice_to_data, parse_manifest, polytope_from_halfspaces, polytope_to_halfspaces,
    LatticeRef,
};
use serde_json::{json, Value};

fn run(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["plyp"];
    full.extend_from_slice(args);
    let (text, code) = main_with_args(full);
    (serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")), code)
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()
}

#[test]
fn running_example_vertices_in_both_charts() {
    let (v, code) = run(&["vertices", "--family", "a1", "--polytope", "builtin"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 5);
    let pairs: BTreeSet<(Vec<i64>, Vec<i64>)> = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (ints(&e["charts"]["1"]), ints(&e["charts"]["2"])))
        .collect();
    let expected: BTreeSet<(Vec<i64>, Vec<i64>)> = [
        (vec![-2, -1], vec![1, -1]),
        (vec![-1, 0], vec![1, 0]),
        (vec![0, -1], vec![-1, -1]),
        (vec![1, 0], vec![-1, 0]),
        (vec![1, 2], vec![-1, 2]),
    ]
    .into_iter()
    .collect();
    assert_eq!(pairs, expected);
}

#[test]
fn gorenstein_fano_check_for_m22() {
    let (v, code) = run(&["gf-check", "--family", "mdr:2,2", "--polytope", "builtin"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({ "chart_gorenstein_fano": true, "integral": true, "tu_matrix": true }));
}

#[test]
fn valuate_defining_relation() {
    let (v, code) = run(&["valuate", "x1*x2", "2", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["expansion"], "t1 + t2");
    let vals: BTreeSet<(Vec<i64>, Vec<i64>)> =
        v["valuation"].as_array().unwrap().iter().map(|t| (ints(&t["a"]), ints(&t["b"]))).collect();
    let expected: BTreeSet<_> = [(vec![1, 0], vec![1, 1]), (vec![0, 1], vec![1, 1])].into_iter().collect();
    assert_eq!(vals, expected);
    let (z, _) = run(&["valuate", "x1 - x1", "2", "2"]);
    assert_eq!(z["valuation"], "inf");
}

#[test]
fn running_example_dual() {
    let (v, code) = run(&["dual", "--family", "a1", "--polytope", "builtin"]);
    assert_eq!(code, 0);
    assert_eq!(v["dual_polytope"]["integral"], false);
    let c2: Vec<Value> = v["dual_polytope"]["chart_images"]["2"].as_array().unwrap().clone();
    assert!(c2.contains(&json!(["1/2", "0"])));
    assert_eq!(v["dual"]["cone_of_m_chart"], json!({ "1": 0, "2": 1 }));
}

#[test]
fn counts_and_levels_agree() {
    let (v, code) = run(&["points-count", "--family", "mdr:2,2", "--polytope", "builtin", "-k", "1"]);
    assert_eq!((code, v["count"].as_u64()), (0, Some(23)));
    let (v, code) = run(&["level-dim", "--family", "a1", "--polytope", "builtin", "-k", "2"]);
    assert_eq!((code, v["dim"].as_u64(), v["equal"].as_bool()), (0, Some(25), Some(true)));
    let (v, code) = run(&["no-body", "--family", "mdr:2,2", "--polytope", "builtin", "--chart", "2", "--kmax", "1"]);
    assert_eq!((code, v["passed"].as_bool()), (0, Some(true)));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["vertices", "--family", "mdr:2,3", "--polytope", "builtin"],
        vec!["fan", "--family", "mdr:3,2"],
        vec!["export", "--family", "a1", "--kind", "polytope"],
    ] {
        let mut full = vec!["plyp"];
        full.extend(args);
        assert_eq!(main_with_args(full.clone()), main_with_args(full));
    }
}

#[test]
fn built_in_objects_round_trip() {
    for fam in [Family::A1, Family::Mdr(2, 2), Family::Mdr(2, 3), Family::Trivial(3)] {
        let ctx = FamilyCtx::new(fam).unwrap();
        let d = lattice_to_data(ctx.lattice());
        assert_eq!(lattice_to_data(&lattice_from_data(&d).unwrap()), d, "{fam}");
        let hs = polytope_to_halfspaces(&ctx.builtin_polytope().unwrap());
        let p = polytope_from_halfspaces(ctx.lattice(), Some(&ctx), &hs).unwrap();
        assert_eq!(polytope_to_halfspaces(&p), hs, "{fam}");
        for kind in ["lattice", "polytope", "dual-pair"] {
            let fam_s = fam.to_string();
            let (text, code) = main_with_args(["plyp", "export", "--family", fam_s.as_str(), "--kind", kind]);
            assert_eq!(code, 0);
            let m = parse_manifest(&text).unwrap();
            assert_eq!(emit_manifest(&m), text);
        }
    }
}

#[test]
fn manifest_files_drive_commands() {
    let dir = tempfile::tempdir().unwrap();
    let (text, _) = main_with_args(["plyp", "export", "--family", "a1", "--kind", "polytope"]);
    let good = dir.path().join("p.json");
    std::fs::write(&good, &text).unwrap();
    let (v, code) = run(&["vertices", good.to_str().unwrap()]);
    assert_eq!((code, v["count"].as_u64()), (0, Some(5)));

    let mut m: Value = serde_json::from_str(&text).unwrap();
    for h in m["halfspaces"].as_array_mut().unwrap() {
        h["threshold"] = json!(-2);
    }
    let scaled = dir.path().join("q.json");
    std::fs::write(&scaled, serde_json::to_string(&m).unwrap()).unwrap();
    let (v, code) = run(&["gf-check", scaled.to_str().unwrap()]);
    assert_eq!((code, v["chart_gorenstein_fano"].as_bool()), (2, Some(false)));

    let point = json!({ "version": 1, "kind": "point", "lattice": { "family": "a1" }, "point": { "a1": [1, -1, 1] } });
    let pf = dir.path().join("pt.json");
    std::fs::write(&pf, point.to_string()).unwrap();
    let (v, code) = run(&["validate", pf.to_str().unwrap()]);
    assert_eq!((code, v["point"]["ok"].as_bool()), (0, Some(true)));
}

#[test]
fn broken_lattice_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let m = json!({
        "version": 1,
        "kind": "lattice",
        "lattice": {
            "rank": 1,
            "charts": ["a", "b"],
            "mutations": [
                { "from": "a", "to": "b", "cones": [{ "ineqs": [] }], "matrices": [[[1]]] },
                { "from": "b", "to": "a", "cones": [{ "ineqs": [] }], "matrices": [[[-1]]] }
            ]
        }
    });
    let f = dir.path().join("l.json");
    std::fs::write(&f, m.to_string()).unwrap();
    let (v, code) = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["lattice"]["passed"], false);
    assert!(v["lattice"]["failures"].as_array().unwrap().iter().any(|x| x["axiom"] == "Inverse"));
}

#[test]
fn errors_carry_codes_and_positions() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, "{\n  \"version\": 1,\n  \"kind\": ,\n}").unwrap();
    let (v, code) = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "E_PARSE");
    assert_eq!(v["error"]["line"], 3);

    let (v, code) = run(&["valuate", "x1 +", "2", "2"]);
    assert_eq!((code, v["error"]["code"].as_str()), (1, Some("E_PARSE")));
    let (v, code) = run(&["vertices", "--family", "b7"]);
    assert_eq!((code, v["error"]["code"].as_str()), (1, Some("E_USAGE")));
    let (v, code) = run(&["vertices", "--family", "a1"]);
    assert_eq!((code, v["error"]["code"].as_str()), (1, Some("E_USAGE")));
    let (v, code) = run(&["valuate", "x1", "1", "2"]);
    assert_eq!((code, v["error"]["code"].as_str()), (1, Some("E_BAD_PARAMS")));
    let (v, code) = run(&["render", "--family", "mdr:2,2", "--polytope", "builtin", "--chart", "1", "--out", "/dev/null"]);
    assert_eq!((code, v["error"]["code"].as_str()), (1, Some("E_NOT_RANK_2")));
}

#[test]
fn render_writes_the_vertex_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p2.svg");
    let (v, code) = run(&["render", "--family", "a1", "--polytope", "builtin", "--chart", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let svg = std::fs::read_to_string(&out).unwrap();
    let meta = polyptych_cli::svg::parse_vertex_metadata(&svg).unwrap();
    let listed: Vec<Vec<String>> = serde_json::from_value(v["vertices"].clone()).unwrap();
    let meta_s: Vec<Vec<String>> =
        meta.iter().map(|p| p.iter().map(polyptych::polyhedra::rat::fmt_rat).collect()).collect();
    assert_eq!(meta_s, listed);
    let as_set: BTreeSet<Vec<String>> = listed.into_iter().collect();
    let expected: BTreeSet<Vec<String>> = [["-1", "-1"], ["-1", "2"], ["1", "-1"], ["1", "0"]]
        .iter()
        .map(|p| p.iter().map(|s| s.to_string()).collect())
        .collect();
    assert_eq!(as_set, expected);
    let d = svg.split(" d=\"").nth(1).unwrap().split('"').next().unwrap();
    assert_eq!(d.matches(['M', 'L']).count(), 4);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_plyp");
    let ok = Command::new(bin).args(["gf-check", "--family", "mdr:2,2", "--polytope", "builtin"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let usage = Command::new(bin).args(["no-such-command"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&usage.stdout).unwrap();
    assert_eq!(v["error"]["code"], "E_USAGE");
}

#[test]
fn family_lattice_refs_parse() {
    let m = parse_manifest(r#"{"version": 1, "kind": "lattice", "lattice": {"family": "mdr:2,3"}}"#).unwrap();
    assert_eq!(m.lattice, Some(LatticeRef::Family { family: "mdr:2,3".into() }));
}
