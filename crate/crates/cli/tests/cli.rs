use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use tourney::colorability::smallest_non_two_colorable;
use tourney::format::{write_tournament, GraphFormat};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tourney"))
}

fn run(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out: Output = bin().current_dir(dir).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn value<'a>(report: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key} = ");
    report
        .lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("no `{key}` in\n{report}"))
}

const C3: &str = "3\nedges\n1 2\n2 3\n3 1\n";

fn hard(dir: &TempDir) -> PathBuf {
    file(dir, "hard.txt", &write_tournament(smallest_non_two_colorable(), GraphFormat::Edges))
}

#[test]
fn classify_cyclic_triangle_is_easy() {
    let d = TempDir::new().unwrap();
    file(&d, "c3.txt", C3);
    let (code, out, _) = run(d.path(), &["classify", "c3.txt"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "class"), "easy");
    hard(&d);
    let (code, out, _) = run(d.path(), &["classify", "hard.txt"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "class"), "hard");
}

#[test]
fn gadget_verify_reports_the_full_sweep() {
    let d = TempDir::new().unwrap();
    let (code, out, _) = run(d.path(), &["gadget-verify"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "colorings"), "128");
    assert_eq!(value(&out, "uv_same_color"), "true");
    assert_eq!(value(&out, "standard_split_proper"), "true");
}

#[test]
fn count_with_larger_pattern_is_negative() {
    let d = TempDir::new().unwrap();
    file(&d, "c3.txt", C3);
    file(&d, "edge.txt", "2\nedges\n1 2\n");
    let (code, out, _) = run(d.path(), &["count", "edge.txt", "c3.txt"]);
    assert_eq!(code, 1);
    assert_eq!(value(&out, "copies"), "0");
    let (code, out, _) = run(d.path(), &["count", "c3.txt", "edge.txt"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "copies"), "3");
}

#[test]
fn input_errors_exit_three_with_line_numbers() {
    let d = TempDir::new().unwrap();
    file(&d, "bad.txt", "3\nmatrix\n011\n001\n110\n");
    let (code, _, err) = run(d.path(), &["color", "bad.txt"]);
    assert_eq!(code, 3);
    assert!(err.contains("line 5"), "{err}");
    let (code, _, _) = run(d.path(), &["no-such-command"]);
    assert_eq!(code, 3);
    let (code, _, _) = run(d.path(), &["color", "missing.txt"]);
    assert_eq!(code, 3);
    let (code, _, _) = run(d.path(), &["rsgraph", "--k", "3", "--cycle", "1,2", "--n-max", "4"]);
    assert_eq!(code, 3);
}

#[test]
fn budget_exhaustion_exits_two() {
    let d = TempDir::new().unwrap();
    hard(&d);
    let (code, _, err) = run(d.path(), &["--budget", "5", "audit-copies", "hard.txt", "--n", "75"]);
    assert_eq!(code, 2, "{err}");
    let (code, out, _) = run(d.path(), &["--budget", "1", "kofh", "hard.txt"]);
    assert_eq!(code, 2);
    assert!(out.contains("status = exhausted"));
}

#[test]
fn coloring_decisions() {
    let d = TempDir::new().unwrap();
    hard(&d);
    let (code, out, _) = run(d.path(), &["color", "hard.txt"]);
    assert_eq!(code, 1);
    assert_eq!(value(&out, "colorable"), "false");
    let (code, out, _) = run(d.path(), &["color", "hard.txt", "--k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "colorable"), "true");
    let (code, out, _) = run(d.path(), &["chromatic", "hard.txt"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "chromatic_number"), "3");
}

#[test]
fn distance_of_a_triangle_to_triangle_freeness() {
    let d = TempDir::new().unwrap();
    file(&d, "c3.txt", C3);
    let (code, out, _) = run(d.path(), &["distance", "c3.txt", "c3.txt"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "distance"), "1");
    assert_eq!(value(&out, "distance_fraction"), "1/9 (0.111111)");
    file(&d, "edge.txt", "2\nedges\n1 2\n");
    let (code, out, _) = run(d.path(), &["distance", "c3.txt", "edge.txt"]);
    assert_eq!(code, 1);
    assert_eq!(value(&out, "unavoidable"), "true");
}

#[test]
fn cores_and_k_of_h() {
    let d = TempDir::new().unwrap();
    file(&d, "g.txt", "vertices: 1 2 3 4\n1 3\n2 4\n");
    let (code, out, _) = run(d.path(), &["core", "g.txt", "--emit", "core.txt"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "core_order"), "2");
    let core = std::fs::read_to_string(d.path().join("core.txt")).unwrap();
    assert!(core.starts_with("vertices:"));
    hard(&d);
    let (code, out, _) = run(d.path(), &["kofh", "hard.txt"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "antisymmetry_violations"), "0");
    assert_eq!(value(&out, "odd_cycle").split(' ').count() % 2, 1);
}

#[test]
fn forcing_search_then_check() {
    let d = TempDir::new().unwrap();
    file(&d, "c3.txt", C3);
    let (code, out, _) = run(d.path(), &["forcing-search", "c3.txt", "--m-max", "2", "--emit", "f.txt"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "part_size"), "2");
    let (code, out, _) = run(d.path(), &["forcing-check", "f.txt", "c3.txt"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "forces"), "true");
    file(&d, "one_way.txt", "parts: 2 2\n1.1 2.1\n1.1 2.2\n1.2 2.1\n1.2 2.2\n");
    let (code, out, _) = run(d.path(), &["forcing-check", "one_way.txt", "c3.txt", "--emit", "cx.txt"]);
    assert_eq!(code, 1);
    assert_eq!(value(&out, "forces"), "false");
    assert!(d.path().join("cx.txt").exists());
    let (code, out, _) = run(d.path(), &["forcing-build", "c3.txt", "--m", "4", "--emit", "fb.txt"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "parts"), "2");
    assert!(std::fs::read_to_string(d.path().join("fb.txt")).unwrap().starts_with("parts: 4 2"));
}

#[test]
fn regularity_on_a_matrix() {
    let d = TempDir::new().unwrap();
    let rows: Vec<String> = (0..8).map(|i| (0..8).map(|j| if j > i { '1' } else { '0' }).collect()).collect();
    file(&d, "a.txt", &format!("8\n{}\n", rows.join("\n")));
    file(&d, "b.txt", "2\n10\n01\n");
    let (code, out, _) = run(d.path(), &["regularity", "a.txt", "--pattern", "b.txt", "--delta", "1/4"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "homogeneous"), "true");
}

#[test]
fn behrend_and_rs_graph() {
    let d = TempDir::new().unwrap();
    let (code, out, _) = run(d.path(), &["behrend", "--n-max", "5"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "members"), "1 2 4 5");
    let (code, out, _) = run(d.path(), &["rsgraph", "--k", "3", "--cycle", "1,2,3", "--n-max", "6"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "edge_disjoint"), "true");
}

#[test]
fn blowup_reports_are_deterministic() {
    let d = TempDir::new().unwrap();
    hard(&d);
    let args = ["--seed", "3", "blowup", "hard.txt", "--n", "1600", "--farness", "--emit", "t.txt"];
    let (code, first, _) = run(d.path(), &args);
    assert_eq!(code, 0, "{first}");
    let t1 = std::fs::read(d.path().join("t.txt")).unwrap();
    let p1 = std::fs::read(d.path().join("t.txt.provenance")).unwrap();
    let (_, second, _) = run(d.path(), &args);
    assert_eq!(first, second);
    assert_eq!(t1, std::fs::read(d.path().join("t.txt")).unwrap());
    assert_eq!(p1, std::fs::read(d.path().join("t.txt.provenance")).unwrap());
    assert_eq!(value(&first, "audit_passes"), "true");
    assert_eq!(value(&first, "cut_disjoint"), "true");
    assert_eq!(value(&first, "family"), value(&first, "surviving"));
}

#[test]
fn audit_copies_finds_no_violation() {
    let d = TempDir::new().unwrap();
    hard(&d);
    let (code, out, _) = run(d.path(), &["audit-copies", "hard.txt", "--n", "75"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "missing_tuple"), "0");
    assert_eq!(value(&out, "non_cycle_tuples"), "0");
}

#[test]
fn reduction_round_trip() {
    let d = TempDir::new().unwrap();
    file(&d, "k4.txt", "4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n");
    let (code, out, _) = run(d.path(), &["--format", "edges", "reduce", "k4.txt", "--emit", "t.txt"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "vertices"), "76");
    let roles = std::fs::read_to_string(d.path().join("t.txt.roles")).unwrap();
    assert_eq!(roles.lines().count(), 76);
    assert!(std::fs::read_to_string(d.path().join("t.txt")).unwrap().starts_with("76\nedges\n"));
    let (code, out, _) = run(d.path(), &["check-reduction", "k4.txt"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "has_cut"), "true");
    assert_eq!(value(&out, "agrees"), "true");
}

#[test]
fn lift_preserves_colorability() {
    let d = TempDir::new().unwrap();
    hard(&d);
    let (code, out, _) = run(d.path(), &["lift", "hard.txt", "--k", "3", "--verify", "--out", "report.txt"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let report = std::fs::read_to_string(d.path().join("report.txt")).unwrap();
    assert_eq!(value(&report, "input_colorable"), "false");
    assert_eq!(value(&report, "lift_colorable"), "false");
    assert_eq!(value(&report, "vertices"), "15");
}
