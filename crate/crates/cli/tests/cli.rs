use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn data(name: &str) -> String {
    root().join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parafeyn"))
        .args(args)
        .env_remove("PARAFEYN_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn validate(schema: &str, instance: &Value) {
    let text = std::fs::read_to_string(root().join("schemas").join(format!("{schema}.schema.json"))).unwrap();
    let schema_json: Value = serde_json::from_str(&text).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema_json).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(instance) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{schema}: {msgs:?}");
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, out: &Output) {
    let path = root().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let expected = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&expected), "{name}");
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

#[test]
fn symbolic_commands_match_golden_files() {
    let dunce = data("dunce.json");
    let cases: [(&str, Vec<&str>, &str); 6] = [
        ("polys_dunce.json", vec!["polys", &dunce], "polys"),
        ("power_count_dunce.json", vec!["power-count", &dunce, "--d", "4"], "power_count"),
        ("forests_dunce.json", vec!["forests", &dunce, "--d", "4", "--log-only"], "forests"),
        ("faces_dunce.json", vec!["faces", &dunce, "--d", "4"], "faces"),
        ("cells_1_2.json", vec!["cells", "1", "2"], "cells"),
        ("cells_2_0.json", vec!["cells", "2", "0"], "cells"),
    ];
    for (file, args, schema) in cases {
        let out = ok(&args);
        validate(schema, &stdout_json(&out));
        golden(file, &out);
    }
}

#[test]
fn cells_report_f_vector() {
    let v = stdout_json(&ok(&["cells", "1", "2"]));
    assert_eq!(v["f_vector"], serde_json::json!([2, 1]));
    assert_eq!(v["face_relations"].as_array().unwrap().len(), 2);
    let v = stdout_json(&ok(&["cells", "2", "0"]));
    // three two-petal roses and the theta graph
    assert_eq!(v["f_vector"], serde_json::json!([0, 3, 1]));
}

#[test]
fn input_files_match_schemas() {
    for g in ["dunce.json", "bubble.json", "triangle.json", "dangling.json", "repeated_colour.json"] {
        validate("graph", &serde_json::from_str(&std::fs::read_to_string(data(g)).unwrap()).unwrap());
    }
    for k in ["dunce_kin.json", "dunce_mu.json", "bubble_kin.json", "bubble_mu.json", "triangle_kin.json", "conflict_kin.json"] {
        validate("kinematics", &serde_json::from_str(&std::fs::read_to_string(data(k)).unwrap()).unwrap());
    }
}

#[test]
fn graph_fixtures_round_trip() {
    use parafeyn::fixtures;
    for g in [fixtures::dunce_cap(), fixtures::bubble(), fixtures::triangle(), fixtures::sunrise(), fixtures::dunce_with_bubble(), fixtures::rose(3)] {
        let text = serde_json::to_string(&g).unwrap();
        validate("graph", &serde_json::from_str(&text).unwrap());
        assert_eq!(parafeyn_cli::parse_graph_str(&text).unwrap(), g);
    }
    let dunce = parafeyn_cli::parse_graph_file(Path::new(&data("dunce.json"))).unwrap();
    assert_eq!(dunce, fixtures::dunce_cap());
}

#[test]
fn numerical_reports_validate_and_rerun_identically() {
    let (dunce, kin, mu) = (data("dunce.json"), data("dunce_kin.json"), data("dunce_mu.json"));
    let (bubble, bkin, bmu) = (data("bubble.json"), data("bubble_kin.json"), data("bubble_mu.json"));
    let triangle = data("triangle.json");
    let tkin = data("triangle_kin.json");
    let cases: [(Vec<&str>, &str); 5] = [
        (vec!["integrate", &triangle, &tkin, "--samples", "20000", "--seed", "4"], "integrate"),
        (vec!["integrate", &bubble, &bkin, "--method", "quad"], "integrate"),
        (vec!["renormalize", &dunce, &kin, &mu, "--samples", "20000", "--seed", "9", "--jobs", "2"], "renormalize"),
        (vec!["amplitude", "1", "2", &bkin, &bmu, "--method", "quad"], "amplitude"),
        (vec!["amplitude", "1", "2", &bkin, &bmu, "--samples", "5000"], "amplitude"),
    ];
    for (args, schema) in cases {
        let a = ok(&args);
        let b = ok(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        validate(schema, &stdout_json(&a));
    }
}

#[test]
fn seed_flag_and_environment() {
    let (t, k) = (data("triangle.json"), data("triangle_kin.json"));
    let flag = ok(&["integrate", &t, &k, "--samples", "5000", "--seed", "31"]);
    let env = Command::new(env!("CARGO_BIN_EXE_parafeyn"))
        .args(["integrate", &t, &k, "--samples", "5000"])
        .env("PARAFEYN_SEED", "31")
        .output()
        .unwrap();
    assert!(env.status.success());
    assert_eq!(flag.stdout, env.stdout);
    let other = ok(&["integrate", &t, &k, "--samples", "5000", "--seed", "32"]);
    assert_ne!(flag.stdout, other.stdout);
    let jobs = ok(&["integrate", &t, &k, "--samples", "5000", "--seed", "31", "--jobs", "3"]);
    assert_eq!(flag.stdout, jobs.stdout);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("parafeyn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("polys.json");
    let out = ok(&["polys", &data("bubble.json"), "--output", path.to_str().unwrap()]);
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["psi"], "x1 + x2");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn refusals_exit_with_two() {
    let out = run(&["integrate", &data("dunce.json"), &data("dunce_kin.json")]);
    assert_eq!(out.status.code(), Some(2));
    let report = stdout_json(&out);
    validate("refusal", &report);
    assert_eq!(report["kind"], "divergent");
    assert_eq!(report["subgraphs"], serde_json::json!([[3, 4]]));
    assert!(String::from_utf8_lossy(&out.stderr).contains("{e3,e4}"));

    let out = run(&["amplitude", "2", "2", &data("bubble_kin.json"), &data("bubble_mu.json"), "--d", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let report = stdout_json(&out);
    validate("refusal", &report);
    assert_eq!(report["kind"], "non_logarithmic");

    let out = run(&["forests", &data("triangle.json"), "--d", "8", "--log-only"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["kind"], "non_logarithmic");

    // a quadrature budget too small to converge
    let out = run(&["integrate", &data("triangle.json"), &data("triangle_kin.json"), "--method", "quad", "--depth", "1"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["kind"], "not_converged");
}

#[test]
fn input_errors_exit_with_one_and_name_the_field() {
    let cases: [(Vec<String>, &str); 6] = [
        (vec!["polys".into(), data("dangling.json")], "edges[0] (id 1)"),
        (vec!["polys".into(), data("repeated_colour.json")], "colour 1"),
        (vec!["polys".into(), data("missing.json")], "missing.json"),
        (vec!["integrate".into(), data("triangle.json"), data("conflict_kin.json")], "invariants.[2,3,4]"),
        (vec!["integrate".into(), data("bubble.json"), data("triangle_kin.json")], "conflicting values"),
        (vec!["integrate".into(), data("triangle.json"), data("bubble_kin.json"), "--samples".into(), "10".into(), "--depth".into(), "3".into()], "--depth"),
    ];
    for (args, needle) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&args);
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {stderr}");
        assert!(out.stdout.is_empty());
        assert!(stderr.contains(needle), "{args:?}: {stderr}");
    }
}

#[test]
fn complementary_invariants_merge() {
    let dir = std::env::temp_dir().join(format!("parafeyn-merge-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let split = dir.join("split.json");
    std::fs::write(&split, r#"{"d": 4, "masses": {"1": 1.0, "2": 1.0, "3": 1.0}, "invariants": {"[1]": 1.37, "[1,3]": 1.74, "[1,2]": 2.11}}"#).unwrap();
    let a = ok(&["integrate", &data("triangle.json"), split.to_str().unwrap(), "--samples", "3000"]);
    let b = ok(&["integrate", &data("triangle.json"), &data("triangle_kin.json"), "--samples", "3000"]);
    assert_eq!(a.stdout, b.stdout);
    std::fs::remove_dir_all(dir).unwrap();
}
