use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn inqlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inqlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_string()
}

fn model_and_team(dir: &TempDir, team_rows: &str) -> (String, String) {
    let model = write(
        dir.path(),
        "m.json",
        r#"{"domain": 3, "predicates": {"P": [[0], [2]]}}"#,
    );
    let team = write(
        dir.path(),
        "t.json",
        &format!(r#"{{"vars": ["x", "y"], "rows": {team_rows}}}"#),
    );
    (model, team)
}

#[test]
fn eval_dependence_on_functional_team() {
    let dir = TempDir::new().unwrap();
    let (m, t) = model_and_team(&dir, "[[0, 1], [1, 1], [2, 0]]");
    let out = inqlab(&["eval", "--model", &m, "--team", &t, "--formula", "dep(x;y)"]);
    assert_eq!(out.status.code(), Some(0));
    let j = stdout_json(&out);
    assert_eq!(j["verdict"], true);
    assert_eq!(j["evaluator"], "fast");
    assert!(j["stats"]["pattern_hits"].as_u64().unwrap() >= 1);
    assert!(j.get("artifact").is_none());
}

#[test]
fn failing_implication_reports_witness_and_bundle() {
    let dir = TempDir::new().unwrap();
    let (m, t) = model_and_team(&dir, "[[0, 1], [0, 2], [2, 0]]");
    let bundle = dir.path().join("bundle");
    for evaluator in ["fast", "reference"] {
        let out = inqlab(&[
            "eval",
            "--model",
            &m,
            "--team",
            &t,
            "--formula",
            "dep(x;y)",
            "--evaluator",
            evaluator,
            "--artifacts",
            bundle.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let j = stdout_json(&out);
        assert_eq!(j["verdict"], false);
        let rows = j["witness"]["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 2, "{evaluator}: {}", j["witness"]);
        assert_eq!(j["artifact"]["formula"], j["formula"]);
    }
    // The bundle replays to the same verdict.
    let replay = inqlab(&[
        "eval",
        "--model",
        bundle.join("model.json").to_str().unwrap(),
        "--team",
        bundle.join("team.json").to_str().unwrap(),
        "--formula",
        fs::read_to_string(bundle.join("formula.txt"))
            .unwrap()
            .trim(),
    ]);
    assert_eq!(stdout_json(&replay)["verdict"], false);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let (m, t) = model_and_team(&dir, "[[0, 1], [1, 1], [2, 0]]");
    let args = [
        "eval",
        "--model",
        &m,
        "--team",
        &t,
        "--formula",
        "forall z. ?P(z) -> lam y",
    ];
    assert_eq!(inqlab(&args).stdout, inqlab(&args).stdout);
    let suite = [
        "suite",
        "--max-domain",
        "1",
        "--samples",
        "30",
        "--cross-samples",
        "10",
    ];
    let (a, b) = (inqlab(&suite), inqlab(&suite));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timing_is_opt_in() {
    let out = inqlab(&["paper", "phi_xy", "--timing"]);
    assert!(stdout_json(&out)["elapsed_ms"].is_number());
    assert!(stdout_json(&inqlab(&["paper", "phi_xy"]))
        .get("elapsed_ms")
        .is_none());
}

#[test]
fn reduce3sat_agreement() {
    let dir = TempDir::new().unwrap();
    let uns = write(
        dir.path(),
        "uns.cnf",
        "c p and not p\np cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n",
    );
    let out = inqlab(&["reduce3sat", "--cnf", &uns, "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "supports=true, sat=false, AGREE"
    );

    let sat = write(dir.path(), "sat.cnf", "p cnf 3 2\n1 -2 3 0\n-1 2 2 0\n");
    let j = stdout_json(&inqlab(&["reduce3sat", "--cnf", &sat]));
    assert_eq!(j["supports"], false);
    assert_eq!(j["sat"], true);
    assert_eq!(j["agree"], true);
    assert_eq!(j["assignment_satisfies"], true);
}

#[test]
fn paper_prints_rendered_formula() {
    let out = inqlab(&["paper", "psi_finiteness", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("[x][y]("), "{text}");
    assert!(text.contains("iexists u. (u = x -> bot)"));
}

#[test]
fn finiteness_demo_and_translate_check() {
    let j = stdout_json(&inqlab(&["finiteness-demo", "--n", "3"]));
    assert_eq!(j["psi_satisfied"], true);
    assert_eq!(j["neg_psi_satisfied"], false);
    assert_eq!(j["teams"], 512);
    assert_eq!(j["dedekind_witnesses"], 0);
    let out = inqlab(&["translate-check"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["passed"], true);
}

#[test]
fn inqbq_eval_at_states() {
    let dir = TempDir::new().unwrap();
    let model = write(
        dir.path(),
        "im.json",
        r#"{"worlds": 2, "domain": 2, "interpretation": [
            {"domain": 2, "predicates": {"P": [[0]]}, "functions": {"a": {"()": 0}}},
            {"domain": 2, "predicates": {"P": [[1]]}, "functions": {"a": {"()": 0}}}
        ]}"#,
    );
    let full = stdout_json(&inqlab(&[
        "inqbq-eval",
        "--model",
        &model,
        "--formula",
        "?P(a)",
    ]));
    assert_eq!(full["verdict"], false);
    let one = stdout_json(&inqlab(&[
        "inqbq-eval",
        "--model",
        &model,
        "--formula",
        "?P(a)",
        "--state",
        "1",
    ]));
    assert_eq!(one["verdict"], true);
    assert_eq!(one["state"], serde_json::json!([1]));
    let open = stdout_json(&inqlab(&[
        "inqbq-eval",
        "--model",
        &model,
        "--formula",
        "P(x)",
        "--assign",
        "x=0",
        "--state",
        "0",
    ]));
    assert_eq!(open["verdict"], true);
}

#[test]
fn usage_and_input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let (m, t) = model_and_team(&dir, "[[0, 1]]");
    let parse_err = inqlab(&["eval", "--model", &m, "--team", &t, "--formula", "P(x"]);
    assert_eq!(parse_err.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse_err.stderr).contains("formula:1:"));

    let arity = inqlab(&["eval", "--model", &m, "--team", &t, "--formula", "P(x, y)"]);
    assert_eq!(arity.status.code(), Some(2));

    let missing = inqlab(&[
        "eval",
        "--model",
        "/nonexistent.json",
        "--team",
        &t,
        "--formula",
        "bot",
    ]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent.json"));

    let bad_team = write(dir.path(), "bad.json", r#"{"vars": ["x"], "rows": [[7]]}"#);
    let out = inqlab(&[
        "eval",
        "--model",
        &m,
        "--team",
        &bad_team,
        "--formula",
        "P(x)",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let wide = write(dir.path(), "wide.cnf", "p cnf 4 1\n1 2 3 4 0\n");
    let out = inqlab(&["reduce3sat", "--cnf", &wide]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    assert_eq!(inqlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        inqlab(&["suite", "--property", "nonsense"]).status.code(),
        Some(2)
    );
}
