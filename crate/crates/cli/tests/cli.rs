use std::process::{Command, Output};

fn pqml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pqml"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn diversity_of_a_cycle() {
    let out = pqml(&["diversity", "--frame", "cyclic:5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "5\n");
}

#[test]
fn atomicity_is_valid_on_a_clique() {
    let out = pqml(&["valid", "--frame", "clique:3", "--formula", "@At:1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "valid\n");
}

#[test]
fn quantified_truth_at_a_world() {
    let out = pqml(&["eval", "--frame", "chain:2", "--formula", "E p0. <>p0 & ~p0", "--at", "0"]);
    assert_eq!(stdout(&out), "true\n");
    let oracle = pqml(&["eval", "--frame", "chain:2", "--formula", "E p0. <>p0 & ~p0", "--oracle"]);
    assert_eq!(stdout(&oracle), "{0}\n");
}

#[test]
fn invalid_formulas_exit_with_one() {
    let out = pqml(&["valid", "--frame", "chain:3", "--formula", "@T"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("invalid\n"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(pqml(&["eval", "--frame", "nosuch:1", "--formula", "p0"]).status.code(), Some(2));
    assert_eq!(pqml(&["eval", "--frame", "clique:2", "--formula", "p0 &"]).status.code(), Some(2));
    assert_eq!(pqml(&["eval", "--frame", "clique:2", "--formula", "p0"]).status.code(), Some(2));
    assert_eq!(pqml(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pqml(&["sahlqvist", "--formula", "E p0. p0"]).status.code(), Some(2));
}

#[test]
fn guardrails_exit_with_three() {
    let args = ["eval", "--frame", "clique:22", "--formula", "E p0. p0", "--oracle"];
    assert_eq!(pqml(&args).status.code(), Some(3));
    let raised = pqml(&["eval", "--frame", "clique:2", "--formula", "E p0. p0", "--oracle", "--max-worlds", "1"]);
    assert_eq!(raised.status.code(), Some(3));
}

#[test]
fn valuations_from_the_command_line() {
    let out = pqml(&["eval", "--frame", "chain:3", "--formula", "<>p0", "--val", "p0=2"]);
    assert_eq!(stdout(&out), "{1}\n");
    let out = pqml(&["eval", "--frame", "chain:3", "--formula", "<>p0", "--val", "p0="]);
    assert_eq!(stdout(&out), "{}\n");
}

#[test]
fn classes_of_the_euclidean_example() {
    let out = pqml(&["classes", "--frame", "k5:1,2"]);
    let lines: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("D0 {r}"));
    assert!(lines[1].starts_with("D1 {u0}"));
    assert!(lines[2].starts_with("D2 {x0, x1}"));
    let dot = stdout(&pqml(&["classes", "--frame", "k5:1,2", "--dot"]));
    assert!(dot.starts_with("digraph quotient {"));
}

#[test]
fn invariance_failure_is_reported() {
    let dir = std::env::temp_dir().join(format!("pqml-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("two.json");
    std::fs::write(
        &path,
        r#"{"worlds":["a","b"],"relation":[["a","a"],["a","b"],["b","a"],["b","b"]],"admissible":[[],["a","b"]]}"#,
    )
    .unwrap();
    let path = path.to_str().unwrap();
    let out = pqml(&["invariant-check", "--frame", path, "--formula", "E p0. p0 & <>~p0"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("over the family: {}"));
    assert!(text.contains("over all sets:   {a, b}"));
    let full = pqml(&["invariant-check", "--frame", "clique:2"]);
    assert_eq!(full.status.code(), Some(0));
    assert!(stdout(&full).starts_with("passed corpus"));
}

#[test]
fn sahlqvist_verdicts() {
    let yes = pqml(&["sahlqvist", "--formula", "<><>p0 -> []<>p0"]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).starts_with("sahlqvist\n"));
    let no = pqml(&["sahlqvist", "--formula", "@M"]);
    assert_eq!(no.status.code(), Some(1));
    assert!(stdout(&no).starts_with("not sahlqvist\n"));
}

#[test]
fn axioms_print_in_the_text_grammar() {
    assert_eq!(stdout(&pqml(&["axiom", "Trs", "--n", "0"])), "p0 -> p0 | <>p0\n");
    assert_eq!(pqml(&["axiom", "At"]).status.code(), Some(2));
    let bc = stdout(&pqml(&["axiom", "Bc", "--phi", "<>p0"]));
    assert_eq!(bc, "<>(E p0. <>p0) -> (E p0. <><>p0)\n");
}

#[test]
fn gallery_json_round_trips_through_the_loader() {
    let json = stdout(&pqml(&["gallery", "div4:1,1,1", "--json"]));
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(doc["provenance"].as_str().is_some());
    let dir = std::env::temp_dir().join(format!("pqml-gallery-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("div4.json");
    std::fs::write(&path, serde_json::to_string(&doc["frame"]).unwrap()).unwrap();
    let out = pqml(&["diversity", "--frame", path.to_str().unwrap(), "--generated"]);
    assert_eq!(stdout(&out), "4\n");
    let caveat = pqml(&["eval", "--frame", "euclid:2", "--formula", "<>p0", "--val", "p0=0"]);
    assert!(String::from_utf8_lossy(&caveat.stderr).contains("caveat:"));
}

#[test]
fn truncation_keeps_the_near_worlds() {
    let out = stdout(&pqml(&["truncate", "--frame", "chain:4", "--at", "1", "--depth", "1"]));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["worlds"], serde_json::json!(["1", "2"]));
}

#[test]
fn selfcheck_passes() {
    let out = pqml(&["selfcheck"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
}
