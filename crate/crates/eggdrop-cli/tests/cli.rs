//! End-to-end tests against the compiled binary.

use std::io::Write as _;
use std::process::{Command, Output, Stdio};

fn eggdrop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eggdrop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn eggdrop_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_eggdrop"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .expect("stdin piped")
        .write_all(input.as_bytes())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary exits")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "expected success, got {:?}\nstderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn solve_plain_prints_bare_number() {
    let out = eggdrop(&["solve", "--floors", "100", "--items", "2"]);
    assert_eq!(stdout_of(&out).trim(), "14");
}

#[test]
fn solve_floors_zero() {
    let out = eggdrop(&["solve", "--floors", "0", "--items", "3"]);
    assert_eq!(stdout_of(&out).trim(), "0");
}

#[test]
fn solve_json_trivial_instance() {
    let out = eggdrop(&["solve", "--floors", "1", "--items", "9", "--json"]);
    let json: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(json["floors"], 1);
    assert_eq!(json["items"], 9);
    assert_eq!(json["algo"], "analytic");
    assert_eq!(json["t_star"], 1);
    assert_eq!(json["phase"], "trivial");
}

#[test]
fn solve_json_round_trips_library_values() {
    let out = eggdrop(&["solve", "--floors", "100", "--items", "2", "--json"]);
    let json: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();

    let inst = eggdrop::ProblemInstance::new(100, 2).unwrap();
    let outcome = eggdrop::solve_analytic(inst);
    assert_eq!(json["t_star"].as_u64(), Some(outcome.t_star));
    assert_eq!(json["phase"], "phase3");
    assert_eq!(
        json["phase2_splits"].as_u64(),
        Some(u64::from(outcome.phase2_splits))
    );
    assert_eq!(
        json["phase3_steps"].as_u64(),
        Some(u64::from(outcome.phase3_steps))
    );
}

#[test]
fn solve_all_algorithms_agree() {
    for algo in ["analytic", "binomial-bsearch", "dp", "dp-capacity"] {
        let out = eggdrop(&["solve", "--floors", "100", "--items", "2", "--algo", algo]);
        assert_eq!(stdout_of(&out).trim(), "14", "algo {algo}");
    }
}

#[test]
fn solve_dp_guard_is_an_argument_error() {
    let out = eggdrop(&["solve", "--floors", "10000", "--items", "2", "--algo", "dp"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn solve_rejects_zero_items() {
    let out = eggdrop(&["solve", "--floors", "10", "--items", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn policy_trace_for_lowest_threshold() {
    let out = eggdrop(&["policy", "--floors", "100", "--items", "2", "--crit", "0"]);
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].contains("floor 14 -> broke"));
    assert_eq!(*lines.last().unwrap(), "highest safe floor: 0");
}

#[test]
fn policy_requires_exactly_one_mode() {
    let out = eggdrop(&["policy", "--floors", "100", "--items", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = eggdrop(&[
        "policy",
        "--floors",
        "100",
        "--items",
        "2",
        "--crit",
        "3",
        "--interactive",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn policy_rejects_crit_above_floors() {
    let out = eggdrop(&["policy", "--floors", "10", "--items", "2", "--crit", "11"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn policy_rejects_zero_floors() {
    let out = eggdrop(&["policy", "--floors", "0", "--items", "2", "--crit", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn interactive_all_survivals_identifies_top() {
    let out = eggdrop_with_stdin(
        &["policy", "--floors", "7", "--items", "3", "--interactive"],
        "n\nn\nn\n",
    );
    let text = stdout_of(&out);
    assert_eq!(text.matches("did it break?").count(), 3);
    assert!(text.contains("highest safe floor: 7"));
}

#[test]
fn interactive_single_floor() {
    let out = eggdrop_with_stdin(
        &["policy", "--floors", "1", "--items", "1", "--interactive"],
        "y\n",
    );
    let text = stdout_of(&out);
    assert_eq!(text.matches("did it break?").count(), 1);
    assert!(text.contains("Drop from floor 1"));
    assert!(text.contains("highest safe floor: 0"));
}

#[test]
fn interactive_reprompts_on_garbage() {
    let out = eggdrop_with_stdin(
        &["policy", "--floors", "1", "--items", "1", "--interactive"],
        "maybe\n\ny\n",
    );
    let text = stdout_of(&out);
    assert_eq!(text.matches("did it break?").count(), 3);
    assert!(text.contains("highest safe floor: 0"));
}

#[test]
fn interactive_eof_exits_2() {
    let out = eggdrop_with_stdin(
        &["policy", "--floors", "100", "--items", "2", "--interactive"],
        "",
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn interactive_matches_batch_drop_sequence() {
    let threshold = 27u64;
    let batch = eggdrop(&[
        "policy", "--floors", "100", "--items", "2", "--crit", "27",
    ]);
    let batch_text = stdout_of(&batch);
    let batch_floors: Vec<u64> = batch_text
        .lines()
        .filter(|line| line.starts_with("drop "))
        .map(|line| {
            line.split_whitespace()
                .nth(3)
                .unwrap()
                .parse()
                .expect("floor number")
        })
        .collect();
    let outcomes: Vec<&str> = batch_floors
        .iter()
        .map(|&floor| if floor > threshold { "y" } else { "n" })
        .collect();

    let interactive = eggdrop_with_stdin(
        &["policy", "--floors", "100", "--items", "2", "--interactive"],
        &(outcomes.join("\n") + "\n"),
    );
    let interactive_text = stdout_of(&interactive);
    let prompted_floors: Vec<u64> = interactive_text
        .lines()
        .flat_map(|line| {
            line.split("Drop from floor ")
                .skip(1)
                .map(|rest| rest.split(' ').next().unwrap().parse().expect("floor"))
        })
        .collect();

    assert_eq!(prompted_floors, batch_floors);
    assert!(interactive_text.contains(&format!("highest safe floor: {threshold}")));
    assert!(batch_text.contains(&format!("highest safe floor: {threshold}")));
}

#[test]
fn map_reports_tree_statistics() {
    let out = eggdrop(&["map", "--floors", "100", "--items", "2", "--json"]);
    let json: serde_json::Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(json["total_leaves"], 101);
    assert_eq!(json["max_tests"], 14);
    assert_eq!(json["t_star"], 14);
    assert_eq!(json["nodes_visited"], 201);
}

#[test]
fn map_rejects_zero_floors() {
    let out = eggdrop(&["map", "--floors", "0", "--items", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_small_grid_passes() {
    let out = eggdrop(&[
        "verify",
        "--max-floors",
        "50",
        "--max-items",
        "4",
        "--seed",
        "7",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("all checks passed"));
}

#[test]
fn bench_emits_csv() {
    let out = eggdrop(&[
        "bench",
        "--floors-list",
        "100,1000",
        "--items-list",
        "2,3",
        "--repeat",
        "3",
    ]);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("algo,floors,items,median_ns"));
    let rows: Vec<&str> = lines.collect();
    // four cells, all four algorithms in range on each
    assert_eq!(rows.len(), 16);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4);
        assert!(["analytic", "binomial-bsearch", "dp", "dp-capacity"].contains(&fields[0]));
        fields[1].parse::<u64>().unwrap();
        fields[2].parse::<u32>().unwrap();
        fields[3].parse::<u128>().unwrap();
    }
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = eggdrop(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
