use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cubeterm::json::{AlgebraJson, ChippedCubeSpecJson, CommandResult};
use cubeterm_core::decide::{decide_cube, CubeVerdict, DecideOptions};
use cubeterm_core::fixtures::{self, FIXTURE_NAMES};
use cubeterm_core::relation::{chipped_cube, is_compatible};
use cubeterm_core::{Budget, FiniteAlgebra};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn cubeterm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubeterm")).args(args).env_remove("CUBETERM_BUDGET_BYTES").output().unwrap()
}

fn parse(out: &Output) -> CommandResult {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn run(args: &[&str]) -> (i32, CommandResult) {
    let out = cubeterm(args);
    (out.status.code().unwrap(), parse(&out))
}

fn write_fixture(dir: &TempDir, name: &str) -> PathBuf {
    let path = dir.path().join(format!("{name}.json"));
    let out = cubeterm(&["gen", "fixture", name, "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn documented_examples() {
    let dir = TempDir::new().unwrap();
    let lattice = write_fixture(&dir, "lattice2");
    let semi = write_fixture(&dir, "semilattice2");

    let (code, r) = run(&["decide-cube", s(&lattice)]);
    assert_eq!(code, 0);
    assert_eq!(r.command, "decide-cube");
    assert_eq!(r.payload["verdict"], "has_cube_term");

    let (code, r) = run(&["find-blocker", s(&semi)]);
    assert_eq!(code, 0);
    assert_eq!(r.payload, json!({"C": [0], "D": [0, 1]}));

    let (code, r) = run(&["check-cube-dim", s(&lattice), "-d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r.payload, json!({"result": false}));
}

#[test]
fn digest_is_sha256_of_input() {
    let dir = TempDir::new().unwrap();
    let lattice = write_fixture(&dir, "lattice2");
    let (_, r) = run(&["bounds", s(&lattice)]);
    let expected = hex::encode(Sha256::digest(std::fs::read(&lattice).unwrap()));
    assert_eq!(r.input_digest.as_deref(), Some(expected.as_str()));
    assert_eq!(r.payload["general"], 16);
}

#[test]
fn payloads_are_stable() {
    let dir = TempDir::new().unwrap();
    let q = dir.path().join("q5.json");
    assert_eq!(cubeterm(&["gen", "quasigroup", "5", "-o", s(&q)]).status.code(), Some(0));
    for args in [
        vec!["decide-cube", s(&q)],
        vec!["decide-nu", s(&q), "--cap", "3"],
        vec!["oracle", "blockers", s(&q)],
        vec!["check-edge-dim", s(&q), "-d", "2"],
    ] {
        let first = parse(&cubeterm(&args));
        let second = parse(&cubeterm(&args));
        assert_eq!(
            serde_json::to_string(&first.payload).unwrap(),
            serde_json::to_string(&second.payload).unwrap(),
            "{args:?}"
        );
        assert_eq!(first.input_digest, second.input_digest);
    }
}

#[test]
fn verdicts_match_library() {
    let dir = TempDir::new().unwrap();
    for name in FIXTURE_NAMES {
        let path = write_fixture(&dir, name);
        let (code, r) = run(&["decide-cube", s(&path)]);
        let lib = decide_cube(&fixtures::fixture(name).unwrap(), &DecideOptions::default()).unwrap();
        let expected = match lib.verdict {
            CubeVerdict::HasCubeTerm => "has_cube_term",
            CubeVerdict::NoCubeTerm => "no_cube_term",
            CubeVerdict::Undecided => "undecided",
        };
        assert_eq!(r.payload["verdict"], expected, "{name}");
        assert_eq!(r.payload["dimension_bound"], lib.dimension_bound, "{name}");
        assert_eq!(code, i32::from(lib.verdict == CubeVerdict::Undecided), "{name}");
    }
}

#[test]
fn general_decisions() {
    let dir = TempDir::new().unwrap();
    let constant = write_fixture(&dir, "constant0_2");
    let (code, r) = run(&["decide-cube", s(&constant)]);
    assert_eq!(code, 0);
    assert_eq!(r.payload["verdict"], "no_cube_term");
    assert_eq!(r.payload["dimension_bound"], 8);
    assert!(r.payload["failing_pair"].is_array());

    let (code, r) = run(&["decide-cube", s(&constant), "--cap", "4"]);
    assert_eq!(code, 1);
    assert_eq!(r.payload["verdict"], "undecided");

    let lattice = write_fixture(&dir, "lattice2");
    let (code, r) = run(&["decide-cube", s(&lattice), "--force-general"]);
    assert_eq!(code, 0);
    assert_eq!(r.payload["verdict"], "has_cube_term");
    assert_eq!(r.payload["witness_dimension"], 2);
    assert_eq!(r.payload["dimension_bound"], 16);
}

#[test]
fn near_unanimity_and_dimensions() {
    let dir = TempDir::new().unwrap();
    let lattice = write_fixture(&dir, "lattice2");
    let (code, r) = run(&["decide-nu", s(&lattice)]);
    assert_eq!(code, 0);
    assert_eq!(r.payload["verdict"], "has_nu");
    assert_eq!(r.payload["arity"], 3);
    let (_, r) = run(&["check-nu", s(&lattice), "-k", "3"]);
    assert_eq!(r.payload, json!({"result": true}));
    let (_, r) = run(&["min-cube-dim", s(&lattice)]);
    assert_eq!(r.payload["dimension"], 3);
    let (_, r) = run(&["check-edge-dim", s(&lattice), "-d", "3"]);
    assert_eq!(r.payload, json!({"result": true}));

    let semi = write_fixture(&dir, "semilattice2");
    let (code, r) = run(&["decide-nu", s(&semi)]);
    assert_eq!(code, 0);
    assert_eq!(r.payload["verdict"], "no_nu");
    let (_, r) = run(&["min-cube-dim", s(&semi)]);
    assert_eq!(r.payload["dimension"], Value::Null);
}

#[test]
fn generated_algebras_round_trip() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("tight.json");
    let (code, r) = run(&["gen", "tight", "3", "2,2", "-o", s(&path)]);
    assert_eq!(code, 0);
    let written: AlgebraJson = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let printed: AlgebraJson = serde_json::from_value(r.payload).unwrap();
    assert_eq!(written, printed);
    let params = fixtures::TightExampleParams::new(3, vec![2, 2]).unwrap();
    let lib = fixtures::tight_example(&params).unwrap();
    assert_eq!(FiniteAlgebra::from_description(&(&written).into()).unwrap(), lib);

    let (code, r) = run(&["validate", s(&path)]);
    assert_eq!(code, 0);
    assert_eq!(r.payload["valid"], true);
    let (_, r) = run(&["check-cube-dim", s(&path), "-d", "3"]);
    assert_eq!(r.payload["result"], true);
    let (_, r) = run(&["check-cube-dim", s(&path), "-d", "2"]);
    assert_eq!(r.payload["result"], false);
}

#[test]
fn oracle_outputs() {
    let dir = TempDir::new().unwrap();
    let semi = write_fixture(&dir, "semilattice2");
    let (code, r) = run(&["oracle", "chipped-cubes", s(&semi), "-d", "2"]);
    assert_eq!(code, 0);
    let spec: ChippedCubeSpecJson = serde_json::from_value(r.payload).unwrap();
    let rel = chipped_cube(&spec.to_spec().unwrap(), 2).unwrap();
    assert!(is_compatible(&fixtures::semilattice2(), &rel, &Budget::default()).unwrap());

    let (_, r) = run(&["oracle", "blockers", s(&semi)]);
    assert_eq!(r.payload, json!({"C": [0], "D": [0, 1]}));

    let lattice = write_fixture(&dir, "lattice2");
    let (_, r) = run(&["oracle", "clone", s(&lattice), "-k", "3"]);
    assert_eq!(r.payload["near_unanimity"], true);
    assert_eq!(r.payload["maltsev"], false);
    assert_eq!(r.payload["table_width"], 8);
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"size":2,"operations":[{"name":"f","arity":2,"table":[0,1,5]}]}"#).unwrap();
    let (code, r) = run(&["validate", s(&bad)]);
    assert_eq!(code, 2);
    assert_eq!(r.payload["violations"].as_array().unwrap().len(), 2);

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    assert_eq!(run(&["decide-cube", s(&garbage)]).0, 2);
    assert_eq!(run(&["decide-cube", s(&dir.path().join("missing.json"))]).0, 2);

    let constant = write_fixture(&dir, "constant3");
    assert_eq!(run(&["find-blocker", s(&constant)]).0, 2);
    assert_eq!(run(&["check-nu", s(&constant), "-k", "2"]).0, 2);
    assert_eq!(cubeterm(&["decide-cube"]).status.code(), Some(2));
    assert_eq!(cubeterm(&["gen", "fixture", "nope"]).status.code(), Some(2));
}

#[test]
fn budget_override_truncates() {
    let dir = TempDir::new().unwrap();
    let lattice = write_fixture(&dir, "lattice2");
    let out = Command::new(env!("CARGO_BIN_EXE_cubeterm"))
        .args(["check-nu", s(&lattice), "-k", "3"])
        .env("CUBETERM_BUDGET_BYTES", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(parse(&out).payload["truncated"], true);

    let out = Command::new(env!("CARGO_BIN_EXE_cubeterm"))
        .args(["bounds", s(&lattice)])
        .env("CUBETERM_BUDGET_BYTES", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pretty_output_leads_with_summary() {
    let dir = TempDir::new().unwrap();
    let semi = write_fixture(&dir, "semilattice2");
    let out = cubeterm(&["find-blocker", s(&semi), "--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let (summary, body) = text.split_once('\n').unwrap();
    assert_eq!(summary, "blocker C=[0] D=[0, 1]");
    let r: CommandResult = serde_json::from_str(body).unwrap();
    assert_eq!(r.command, "find-blocker");
}
