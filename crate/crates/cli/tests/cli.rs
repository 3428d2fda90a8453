use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use framestarter::corpus::printed_table;
use framestarter::format::{parse_starter_file, write_starter};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_framestarter"));
    c.env_remove("FRAMESTARTER_BUDGET_MS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(format!("{name}.st"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_exit_codes() {
    let z10 = corpus("z10_h2");
    let o = run(&["verify", path_str(&z10), "--expect", "strong"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("strong: ok"));

    let t4 = corpus("z5t_t04");
    assert_eq!(run(&["verify", path_str(&t4), "--expect", "strong"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let mutated = dir.path().join("bad.st");
    std::fs::write(&mutated, std::fs::read_to_string(&z10).unwrap().replace("2 , 6", "2 , 5")).unwrap();
    let o = run(&["verify", path_str(&mutated), "--expect", "strong"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("lies in the subgroup"), "{}", stdout(&o));

    let garbled = dir.path().join("garbled.st");
    std::fs::write(&garbled, "group Z(10)\nsubgroup (5)\n3 4\n").unwrap();
    let o = run(&["verify", path_str(&garbled)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn verify_with_mate_prints_adder() {
    let o = run(&["verify", path_str(&corpus("z15_h3_s1")), "--mate", path_str(&corpus("z15_h3_s2"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("strong: no"));
    assert!(out.contains("{8,12} | 11 | {4,8}"), "{out}");
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["search"]).status.code(), Some(2));
    assert_eq!(run(&["search", "Z(10", "--order", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["survey", "--gmax", "x"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "/nonexistent/file.st"]).status.code(), Some(2));
}

#[test]
fn selftest_passes_and_detects_corruption() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("z5t_t20: as-printed: invalid"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("t08.st");
    let text = std::fs::read_to_string(corpus("z5t_t08")).unwrap();
    std::fs::write(&bad, text.replace("17 , 19", "17 , 18")).unwrap();
    let o = run(&["selftest", "--override", &format!("z5t_t08={}", path_str(&bad))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL z5t_t08"), "{}", stdout(&o));

    let o = run(&["selftest", "--table-extra", "2,12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("listed but excluded: (2,12)"));
}

#[test]
fn search_echoes_seed_and_respects_rules() {
    let o = run(&["search", "Z(40)", "--order", "8", "--seed", "17"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("# seed 17\n"), "{out}");
    let s = parse_starter_file(&out).unwrap().to_starter().unwrap();
    assert!(s.is_strong());
    assert_eq!(s.type_signature(), (8, 5));

    let o = run(&["search", "Z(15)", "--order", "3", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("strong-5h"));
    assert_eq!(stdout(&o), "# seed 4\n");

    let o = run(&["search", "Z(15)", "--order", "3", "--mode", "frame", "--exhaustive", "--orthogonal"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# adder"));

    let o = run(&["search", "Z(16)", "--order", "4", "--exhaustive", "--count-all"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("outcome=none") && stdout(&o).contains("solutions=0"));
}

#[test]
fn budget_from_environment() {
    // Z(9) has no strong starter; forcing the search runs until the budget is spent.
    let o = bin()
        .env("FRAMESTARTER_BUDGET_MS", "200")
        .args(["search", "Z(9)", "--force", "--seed", "2"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("outcome=timeout"), "{}", stdout(&o));
    assert!(stdout(&o).contains("# seed 2"));
}

#[test]
fn search_output_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.st");
    let b = dir.path().join("b.st");
    for p in [&a, &b] {
        let o = run(&["search", "Z(50)", "--order", "2", "--seed", "9", "-o", path_str(p)]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("# seed 9"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn written_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.st");
    let o = run(&["construct", "patterned", "Z(15)", "--subgroup", "(5)", "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let s = parse_starter_file(&text).unwrap().to_starter().unwrap();
    assert_eq!(write_starter(&s), text);
    assert_eq!(s.type_signature(), (3, 5));
}

#[test]
fn constructions() {
    let o = run(&["construct", "mult", "--starter", path_str(&corpus("z10_h2")), "--scm", "gf:4:x"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = parse_starter_file(&stdout(&o)).unwrap().to_starter().unwrap();
    assert_eq!(s.type_signature(), (8, 5));
    assert!(s.is_strong());

    let o = run(&["construct", "grossleonard", "Z(2,14)", "--subgroup", "(1,0);(0,7)", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("# seed 3\n"));
    let s = parse_starter_file(&stdout(&o)).unwrap().to_starter().unwrap();
    assert_eq!(s.type_signature(), (4, 7));

    let o = run(&[
        "construct",
        "grossleonard",
        "Z(2,14)",
        "--subgroup",
        "(1,0);(0,7)",
        "--quotient-starter",
        path_str(&corpus("z7")),
        "--scm",
        "gf:4:x",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    // The inner context (H x Z7) \ (H x {0}) is Z14 \ Z2, where no frame starter exists.
    let o = run(&["construct", "multvar", "--starter", path_str(&corpus("z10_h2")), "--scm", "double:Z(7)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("anderson"), "{}", stderr(&o));

    let o = run(&["construct", "scm", "search:Z(4)"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["construct", "scm", "double:Z(5)"]);
    assert_eq!(stdout(&o).trim(), "Z(5): 0->0, 1->2, 2->4, 3->1, 4->3");
}

#[test]
fn classify_reports_rules_and_notes() {
    let o = run(&["classify", "Z(15)", "--order", "3", "--seed", "1", "--budget-ms", "5000"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("# seed 1"));
    assert!(out.contains("verdict: strong-impossible"));
    assert!(out.contains("orthogonal frame starters exist"), "{out}");

    let o = run(&["classify", "Z(4,4)", "--subgroup", "(0,2);(2,0)", "--no-search"]);
    let out = stdout(&o);
    assert!(out.contains("verdict: open"), "{out}");

    let o = run(&["classify", "Z(16)", "--order", "4", "--no-search"]);
    assert!(stdout(&o).contains("[strong-z4]"));
}

#[test]
fn mate_command() {
    let o = run(&["mate", path_str(&corpus("z15_h3_s1")), "--seed", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = parse_starter_file(&stdout(&o)).unwrap().to_starter().unwrap();
    assert_eq!(s.type_signature(), (3, 5));
    let o = run(&["search", "--mate", path_str(&corpus("z10_h2"))]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn survey_matches_printed_table_up_to_50() {
    let o = run(&["survey", "--gmax", "50", "--seed", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("# seed 0\n"));
    let found: Vec<(u64, u64)> = out
        .lines()
        .filter_map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f.len() == 3 && f[2] == "found").then(|| (f[0].parse().unwrap(), f[1].parse().unwrap()))
        })
        .collect();
    let printed: Vec<(u64, u64)> = printed_table().into_iter().filter(|&(_, g)| g <= 50).collect();
    assert_eq!(found, printed);
    assert!(out.contains(" 2 | 10, 16, 18, 24, 26, 32, 34, 40, 42, 48, 50\n"), "{out}");
    assert!(out.contains("5 25 excluded"));
}
