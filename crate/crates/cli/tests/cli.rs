use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn topocyl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topocyl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn equiv_sweep_reports_equal() {
    let out = topocyl(&[
        "modal",
        "equiv",
        "--max-size",
        "4",
        "--depth",
        "3",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["verdict"], "equal");
    assert_eq!(doc["result"]["equal"], true);
    assert_eq!(doc["config"]["seed"], 7);
    assert_eq!(doc["config"]["max_size"], 4);
}

#[test]
fn nonadditive_witness_fixture() {
    let doc = report(&topocyl(&["setalg", "witness-nonadditive"]));
    let r = &doc["result"];
    assert_eq!(doc["verdict"], "non-additive");
    // codes: (0,0) -> 0, (1,0) -> 1
    assert_eq!(r["x"]["members"], serde_json::json!([0]));
    assert_eq!(r["y"]["members"], serde_json::json!([1]));
    assert_eq!(r["union_of_interiors"]["members"], serde_json::json!([]));
    assert_eq!(r["interior_of_union"]["members"], serde_json::json!([0, 1]));
}

#[test]
fn nontermdef_witness_names_an_element() {
    let doc = report(&topocyl(&["setalg", "witness-nontermdef"]));
    assert_eq!(doc["verdict"], "interiors-differ");
    assert_ne!(
        doc["result"]["interior_discrete"],
        doc["result"]["interior_indiscrete"]
    );
}

#[test]
fn script_artifact_replays() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("script.json");
    let out = topocyl(&[
        "game",
        "script",
        "--n",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = read(&path);
    assert_eq!(doc["verdict"], "forall-wins");
    assert_eq!(doc["result"]["tree"]["nodes"], 6);
    let check = topocyl(&["game", "verify-transcript", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(report(&check)["verdict"], "valid");
}

#[test]
fn solve_artifact_replays_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("solve.json");
    let out = topocyl(&[
        "game",
        "solve",
        "--structure",
        "space:2:2",
        "--nodes",
        "4",
        "--rounds",
        "2",
        "--expect",
        "exists",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let check = topocyl(&["game", "verify-transcript", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0));

    let mut doc = read(&path);
    doc["result"]["certificate"]["winner"] = "forall".into();
    doc["result"]["winner"] = "forall".into();
    doc["verdict"] = "forall".into();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let check = topocyl(&["game", "verify-transcript", bad.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(1));
    assert_eq!(report(&check)["verdict"], "invalid");
}

#[test]
fn inconclusive_and_refuted_artifacts_replay() {
    let dir = tempfile::tempdir().unwrap();
    let inc = dir.path().join("inc.json");
    topocyl(&[
        "game",
        "solve",
        "--budget",
        "1",
        "--out",
        inc.to_str().unwrap(),
    ]);
    assert_eq!(read(&inc)["verdict"], "inconclusive");
    assert_eq!(
        topocyl(&["game", "verify-transcript", inc.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );

    let refuted = dir.path().join("refuted.json");
    topocyl(&[
        "game",
        "script",
        "--tints",
        "1,3,4",
        "--out",
        refuted.to_str().unwrap(),
    ]);
    assert_eq!(read(&refuted)["verdict"], "refuted");
    assert_eq!(
        topocyl(&["game", "verify-transcript", refuted.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = |p: &str| {
        vec![
            "bao".to_string(),
            "check".into(),
            "--structure".into(),
            "space:2:2:t1".into(),
            "--suite".into(),
            "TCA".into(),
            "--check".into(),
            "sampled".into(),
            "--samples".into(),
            "500".into(),
            "--seed".into(),
            "3".into(),
            "--out".into(),
            p.into(),
        ]
    };
    let run = || {
        let a = args(path.to_str().unwrap());
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert_eq!(topocyl(&a).status.code(), Some(0));
        std::fs::read(&path).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn axiom_report_is_keyed_by_suite_and_index() {
    let doc = report(&topocyl(&[
        "setalg",
        "axioms",
        "--dim",
        "2",
        "--base",
        "2",
        "--samples",
        "200",
    ]));
    assert_eq!(doc["verdict"], "holds");
    let topologies = doc["result"]["topologies"].as_array().unwrap();
    assert_eq!(topologies.len(), 4);
    for t in topologies {
        assert_eq!(t["suites"]["CA"]["axioms"]["1"]["verdict"], "holds");
        assert_eq!(t["suites"]["TCA"]["axioms"]["7"]["verdict"], "holds");
    }
}

#[test]
fn exit_status_contract() {
    assert_eq!(
        topocyl(&["topo", "enum", "--size", "3", "--expect", "29"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        topocyl(&["topo", "enum", "--size", "3", "--expect", "30"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(topocyl(&["topo", "enum"]).status.code(), Some(2));
    assert_eq!(topocyl(&["frobnicate"]).status.code(), Some(2));
    let bad = topocyl(&["topo", "check", "--topology", "{not json"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
    let invalid = topocyl(&["topo", "check", "--topology", r#"{"size":2,"opens":[[0]]}"#]);
    assert_eq!(invalid.status.code(), Some(0));
    assert_eq!(report(&invalid)["verdict"], "invalid");
}

#[test]
fn config_file_sets_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"seed": 11, "max_size": 2, "expect": "equal"}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let out = topocyl(&[
        "modal",
        "equiv",
        "--depth",
        "2",
        "--formulas",
        "20",
        "--config",
        c,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["config"]["seed"], 11);
    assert_eq!(doc["matches_expectation"], true);
    let out = topocyl(&[
        "modal",
        "equiv",
        "--depth",
        "2",
        "--formulas",
        "20",
        "--config",
        c,
        "--seed",
        "5",
    ]);
    assert_eq!(report(&out)["config"]["seed"], 5);
    std::fs::write(&cfg, r#"{"sede": 1}"#).unwrap();
    assert_eq!(
        topocyl(&["topo", "enum", "--size", "1", "--config", c])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn modal_commands() {
    let t = r#"{"size":2,"opens":[[],[0],[0,1]]}"#;
    let doc = report(&topocyl(&[
        "modal",
        "eval",
        "--formula",
        "I p -> p",
        "--topology",
        t,
        "--valuation",
        r#"{"0":[1]}"#,
    ]));
    assert_eq!(doc["verdict"], "valid");
    let doc = report(&topocyl(&[
        "modal",
        "eval",
        "--formula",
        "p -> I p",
        "--topology",
        t,
        "--valuation",
        r#"{"0":[1]}"#,
    ]));
    assert_eq!(doc["verdict"], "not-valid");
    assert_eq!(doc["result"]["truth"], serde_json::json!([0]));
    let out = topocyl(&[
        "modal",
        "countermodel",
        "--formula",
        "I I p <-> I p",
        "--mode",
        "kripke",
        "--max-size",
        "3",
    ]);
    assert_eq!(report(&out)["verdict"], "no-countermodel");
}

#[test]
fn bao_and_rainbow_commands() {
    assert_eq!(
        topocyl(&["rainbow", "atoms", "--expect", "1851"])
            .status
            .code(),
        Some(0)
    );
    let doc = report(&topocyl(&[
        "bao",
        "represent",
        "--structure",
        "space:2:2:indiscrete",
    ]));
    assert_eq!(doc["verdict"], "represented");
    let doc = report(&topocyl(&[
        "bao",
        "nr",
        "--structure",
        "space:3:2",
        "--m",
        "2",
    ]));
    assert_eq!(doc["result"]["size"], 16);
    let doc = report(&topocyl(&[
        "bao",
        "sg",
        "--structure",
        "space:2:2",
        "--gens",
        "[[0]]",
    ]));
    assert_eq!(doc["result"]["dim"], 2);
    let doc = report(&topocyl(&[
        "bao",
        "check",
        "--structure",
        "space:2:2:indiscrete",
        "--equation",
        "I0(p + q) = I0(p) + I0(q)",
    ]));
    assert_eq!(doc["verdict"], "fails");
    let doc = report(&topocyl(&[
        "bao",
        "cm",
        "--structure",
        "space:2:2",
        "--dump",
    ]));
    assert_eq!(doc["result"]["dump"]["atoms"], 4);
}
