use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", self.stdout))
    }
}

fn run(args: &[&str]) -> Run {
    let Output {
        status,
        stdout,
        stderr,
    } = Command::new(env!("CARGO_BIN_EXE_l0-affine"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: status.code().expect("exited normally"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        let files = Files(TempDir::new().unwrap());
        files.write(
            "s2.json",
            &json!({"atoms": [{"id": "a1", "prob": "1/2"}, {"id": "a2", "prob": "1/2"}]}),
        );
        files
    }

    fn write(&self, name: &str, v: &Value) -> String {
        self.write_raw(name, &v.to_string())
    }

    fn write_raw(&self, name: &str, text: &str) -> String {
        let p: PathBuf = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.0.path().join(name).display().to_string()
    }
}

fn vector(a1: &[&str], a2: &[&str]) -> Value {
    json!({"points": {"a1": a1, "a2": a2}})
}

fn identity_map() -> Value {
    json!({"kind": "affine", "A": {"a1": [["1", "0"], ["0", "1"]], "a2": [["1", "0"], ["0", "1"]]}})
}

fn swap_map() -> Value {
    json!({"kind": "semilinear", "sigma": {"a1": "a2", "a2": "a1"}, "affine": identity_map()})
}

fn members(v: &Value) -> Vec<String> {
    serde_json::from_value(v["members"].clone()).unwrap()
}

#[test]
fn decompose_constant_unit_vectors() {
    let f = Files::new();
    let pair = f.write(
        "p.json",
        &json!({"x": vector(&["1", "0"], &["1", "0"]), "y": vector(&["0", "1"], &["0", "1"])}),
    );
    let r = run(&["decompose", "--space", &f.path("s2.json"), &pair]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let d = r.json();
    assert_eq!(members(&d["independent"]), ["a1", "a2"]);
    assert!(members(&d["dependent"]).is_empty());
}

#[test]
fn decompose_splits_where_rank_drops() {
    let f = Files::new();
    let pair = f.write(
        "p.json",
        &json!({"x": vector(&["1", "0"], &["1", "2"]), "y": vector(&["0", "1"], &["2", "4"])}),
    );
    let d = run(&["decompose", "--space", &f.path("s2.json"), &pair]).json();
    assert_eq!(members(&d["independent"]), ["a1"]);
    assert_eq!(members(&d["dependent"]), ["a2"]);
    // the relation on a2: xi * (1, 2) + eta * (2, 4) = 0, not both zero
    let xi = d["xi"]["values"]["a2"].as_str().unwrap().to_string();
    let eta = d["eta"]["values"]["a2"].as_str().unwrap().to_string();
    assert_eq!((xi.as_str(), eta.as_str()), ("2", "-1"));
    assert_eq!(d["xi"]["values"]["a1"], "0");
}

#[test]
fn decompose_rejects_mismatched_dims() {
    let f = Files::new();
    let pair = f.write("p.json", &json!({"x": vector(&["1", "0"], &["1", "0"]), "y": vector(&["0", "1", "0"], &["0", "1", "0"])}));
    let r = run(&["decompose", "--space", &f.path("s2.json"), &pair]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("DimMismatch"), "{}", r.stderr);
}

#[test]
fn check_map_identity_passes() {
    let f = Files::new();
    let map = f.write("id.json", &identity_map());
    let r = run(&["check-map", "--space", &f.path("s2.json"), &map]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v = r.json();
    assert_eq!(v["passed"], true);
    assert_eq!(v["stability"]["exhaustive"], true);
    assert_eq!(v["stability"]["events"], 4);
}

#[test]
fn check_map_swap_is_not_local_but_keeps_lines() {
    let f = Files::new();
    let map = f.write("swap.json", &swap_map());
    let r = run(&["check-map", "--space", &f.path("s2.json"), &map]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_eq!(v["locality"]["verdict"], false);
    assert_eq!(v["stability"]["stable"], false);
    assert_eq!(v["lines"]["forward_ok"], true);
    assert_eq!(v["lines"]["onto_status"], "exact-pass");
}

#[test]
fn check_map_names_the_singular_atom() {
    let f = Files::new();
    let map = f.write(
        "sing.json",
        &json!({"kind": "affine", "A": {"a1": [["1", "0"], ["0", "1"]], "a2": [["1", "2"], ["2", "4"]]}}),
    );
    let r = run(&["check-map", "--space", &f.path("s2.json"), &map]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_eq!(v["injectivity"]["injective"], false);
    assert_eq!(v["injectivity"]["witness"]["atom"], "a2");
}

#[test]
fn certify_translation() {
    let f = Files::new();
    let mut map = identity_map();
    map["b"] = json!({"a1": ["1", "-2"], "a2": ["1/2", "3"]});
    let path = f.write("t.json", &map);
    let r = run(&[
        "certify",
        "--space",
        &f.path("s2.json"),
        &path,
        "--seed",
        "3",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let c = r.json();
    assert_eq!(c["b"]["points"]["a2"], json!(["1/2", "3"]));
    assert_eq!(c["A"]["a1"], json!([["1", "0"], ["0", "1"]]));
    assert_eq!(c["provenance"]["seed"], 3);
    assert_eq!(c["hypotheses"]["representation"], "exact");

    let seg = run(&[
        "certify",
        "--from-segments",
        "--space",
        &f.path("s2.json"),
        &path,
        "--seed",
        "3",
    ]);
    assert_eq!(seg.code, 0);
    assert_eq!(seg.stdout, r.stdout);
}

#[test]
fn certify_swap_gives_a_replayable_locality_witness() {
    let f = Files::new();
    let map = f.write("swap.json", &swap_map());
    let r = run(&["certify", "--space", &f.path("s2.json"), &map]);
    assert_eq!(r.code, 1);
    let w = r.json();
    assert_eq!(w["failed_hypothesis"], "locality");
    assert_eq!(
        w["data"]["x"]["points"],
        json!({"a1": ["1", "0"], "a2": ["2", "0"]})
    );

    let wpath = f.write_raw("w.json", &r.stdout);
    let replay = run(&[
        "check-map",
        "--space",
        &f.path("s2.json"),
        &map,
        "--replay",
        &wpath,
    ]);
    assert_eq!(replay.code, 1);
    assert_eq!(replay.json()["reproduces"], true);
    // the same witness does not fire on the identity
    let id = f.write("id.json", &identity_map());
    let clean = run(&[
        "check-map",
        "--space",
        &f.path("s2.json"),
        &id,
        "--replay",
        &wpath,
    ]);
    assert_eq!(clean.code, 0);
}

#[test]
fn certify_rejects_dimension_one() {
    let f = Files::new();
    let map = f.write(
        "m.json",
        &json!({"kind": "affine", "A": {"a1": [["2"]], "a2": [["3"]]}}),
    );
    let r = run(&["certify", "--space", &f.path("s2.json"), &map]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("DimensionTooSmall"), "{}", r.stderr);
}

#[test]
fn fuzz_affine_certifies_everything() {
    let r = run(&[
        "fuzz",
        "--profile",
        "affine",
        "--trials",
        "200",
        "--seed",
        "5",
    ]);
    assert_eq!(r.code, 0);
    let counts = &r.json()["counts"];
    assert_eq!(counts["certificates"], 200);
    assert_eq!(counts["surprises"], 0);
}

#[test]
fn fuzz_semilinear_only_finds_locality() {
    let r = run(&[
        "fuzz",
        "--profile",
        "semilinear-nontrivial",
        "--trials",
        "40",
        "--seed",
        "5",
    ]);
    assert_eq!(r.code, 0);
    let counts = &r.json()["counts"];
    assert_eq!(counts["certificates"], 0);
    assert_eq!(counts["by_hypothesis"], json!({"locality": 40}));
}

#[test]
fn fuzz_exploration_only_reports() {
    let r = run(&["fuzz", "--profile", "remark-3.8", "--trials", "12"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["counts"]["surprises"], 0);
    assert!(v["trials"]
        .as_array()
        .unwrap()
        .iter()
        .all(|t| t["verdict"] == "explored"));
}

#[test]
fn fuzz_rejects_unknown_profiles_and_zero_trials() {
    assert_eq!(run(&["fuzz", "--profile", "cubic"]).code, 2);
    assert_eq!(
        run(&["fuzz", "--profile", "affine", "--trials", "0"]).code,
        2
    );
}

#[test]
fn fuzz_trials_replay_byte_for_byte() {
    let report = run(&[
        "fuzz",
        "--profile",
        "corrupted",
        "--trials",
        "9",
        "--seed",
        "21",
    ])
    .json();
    for t in report["trials"].as_array().unwrap() {
        let i = t["trial"].as_u64().unwrap().to_string();
        let again = run(&[
            "fuzz",
            "--profile",
            "corrupted",
            "--seed",
            "21",
            "--trial",
            &i,
        ]);
        assert_eq!(again.json(), *t);
        assert_eq!(
            again.stdout,
            format!("{}\n", serde_json::to_string_pretty(t).unwrap())
        );
    }
}

#[test]
fn fuzz_witnesses_replay_through_check_map() {
    let f = Files::new();
    let report = run(&[
        "fuzz",
        "--profile",
        "corrupted",
        "--trials",
        "6",
        "--seed",
        "2",
    ])
    .json();
    for t in report["trials"].as_array().unwrap() {
        let space = f.write("space.json", &t["space"]);
        let map = f.write("map.json", &t["map"]);
        let w = f.write("w.json", &t["witness"]);
        let r = run(&["check-map", "--space", &space, &map, "--replay", &w]);
        assert_eq!(r.code, 1, "trial {}: {}", t["trial"], r.stdout);
        assert_eq!(r.json()["reproduces"], true);
    }
}

#[test]
fn endo_examples() {
    let f = Files::new();
    let s = f.path("s2.json");
    let id = f.write("id.json", &json!({"kind": "identity"}));
    assert_eq!(run(&["endo", "--space", &s, &id]).code, 0);

    let swap = f.write(
        "swap.json",
        &json!({"kind": "pullback", "sigma": {"a1": "a2", "a2": "a1"}}),
    );
    let r = run(&["endo", "--space", &s, &swap]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_eq!(v["axioms"]["locality"]["pass"], false);
    assert_eq!(v["axioms"]["additivity"]["pass"], true);

    let square = f.write(
        "sq.json",
        &json!({"kind": "polynomial", "coeffs": {"a1": ["0", "0", "1"], "a2": ["0", "0", "1"]}}),
    );
    let r = run(&["endo", "--space", &s, &square]);
    assert_eq!(r.code, 1);
    let w = &r.json()["axioms"]["additivity"]["witness"];
    let one = json!({"values": {"a1": "1", "a2": "1"}});
    assert_eq!((&w["xi"], &w["eta"]), (&one, &one));
}

#[test]
fn swap_map_needs_a_mass_preserving_pairing() {
    let f = Files::new();
    let r = run(&["example-34", "--space", &f.path("s2.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["map"]["sigma"], json!({"a1": "a2", "a2": "a1"}));
    let odd = f.write(
        "odd.json",
        &json!({"atoms": [{"id": "a", "prob": "1/2"}, {"id": "b", "prob": "1/3"}, {"id": "c", "prob": "1/6"}]}),
    );
    let r = run(&["example-34", "--space", &odd]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("NoMassPreservingPairing"), "{}", r.stderr);
}

#[test]
fn identical_runs_are_byte_identical_and_out_matches_stdout() {
    let f = Files::new();
    let map = f.write("swap.json", &swap_map());
    let args = [
        "check-map",
        "--space",
        &f.path("s2.json"),
        &map,
        "--seed",
        "9",
        "--budget",
        "4",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let out = f.path("out.json");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", &out]);
    let c = run(&with_out);
    assert_eq!(c.code, a.code);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(Path::new(&out)).unwrap(), a.stdout);
}

#[test]
fn malformed_inputs_exit_2_without_panicking() {
    let f = Files::new();
    let s = f.path("s2.json");
    let cases: Vec<(&str, &str)> = vec![
        ("not json", "{"),
        ("not an object", "[1, 2]"),
        ("unknown kind", r#"{"kind": "moebius"}"#),
        ("missing A", r#"{"kind": "affine"}"#),
        (
            "missing atom",
            r#"{"kind": "affine", "A": {"a1": [["1"]]}}"#,
        ),
        (
            "unknown atom",
            r#"{"kind": "affine", "A": {"a1": [["1"]], "zz": [["1"]]}}"#,
        ),
        (
            "bad rational",
            r#"{"kind": "affine", "A": {"a1": [["1/0"]], "a2": [["x"]]}}"#,
        ),
        (
            "ragged matrix",
            r#"{"kind": "affine", "A": {"a1": [["1", "0"], ["1"]], "a2": [["1", "0"], ["0", "1"]]}}"#,
        ),
        (
            "non-square",
            r#"{"kind": "affine", "A": {"a1": [["1", "0"]], "a2": [["1", "0"]]}}"#,
        ),
        (
            "offset dim",
            r#"{"kind": "affine", "A": {"a1": [["1", "0"], ["0", "1"]], "a2": [["1", "0"], ["0", "1"]]}, "b": {"a1": ["1"], "a2": ["1"]}}"#,
        ),
        (
            "empty matrix",
            r#"{"kind": "affine", "A": {"a1": [], "a2": []}}"#,
        ),
        (
            "bad sigma",
            r#"{"kind": "semilinear", "sigma": {"a1": "a1", "a2": "a1"}, "affine": {"kind": "affine", "A": {"a1": [["1"]], "a2": [["1"]]}}}"#,
        ),
        (
            "bad piece",
            r#"{"kind": "peratom", "pieces": {"a1": {"op": "warp"}}}"#,
        ),
        (
            "huge exponent",
            r#"{"kind": "peratom", "dim": 2, "pieces": {"a1": {"op": "pow", "exp": 100000}}}"#,
        ),
        (
            "negative dim",
            r#"{"kind": "peratom", "dim": -1, "pieces": {}}"#,
        ),
        ("zero dim", r#"{"kind": "peratom", "dim": 0, "pieces": {}}"#),
    ];
    for (what, text) in cases {
        let map = f.write_raw("bad.json", text);
        for cmd in ["check-map", "certify"] {
            let r = run(&[cmd, "--space", &s, &map]);
            assert_eq!(r.code, 2, "{cmd} {what}: {}{}", r.stdout, r.stderr);
            assert!(!r.stderr.contains("panicked"), "{cmd} {what}: {}", r.stderr);
        }
    }

    let spaces = [
        "{}",
        r#"{"atoms": []}"#,
        r#"{"atoms": [{"id": "a", "prob": "1/2"}]}"#,
        r#"{"atoms": [{"id": "a", "prob": "-1"}, {"id": "b", "prob": "2"}]}"#,
        r#"{"atoms": [{"id": "a", "prob": "1/2"}, {"id": "a", "prob": "1/2"}]}"#,
    ];
    let map = f.write("id.json", &identity_map());
    for text in spaces {
        let bad = f.write_raw("bad_space.json", text);
        let r = run(&["check-map", "--space", &bad, &map]);
        assert_eq!(r.code, 2, "{text}: {}", r.stderr);
    }
    assert_eq!(run(&["check-map", &map]).code, 2, "missing --space");
    assert_eq!(
        run(&["check-map", "--space", &s, &f.path("nope.json")]).code,
        2
    );

    let bad_phi = f.write_raw(
        "phi.json",
        r#"{"kind": "polynomial", "coeffs": {"a1": ["1"]}}"#,
    );
    assert_eq!(run(&["endo", "--space", &s, &bad_phi]).code, 2);
    let bad_witness = f.write_raw("w.json", r#"{"failed_hypothesis": "locality", "data": {}}"#);
    let r = run(&["check-map", "--space", &s, &map, "--replay", &bad_witness]);
    assert_eq!(r.code, 2);
}
