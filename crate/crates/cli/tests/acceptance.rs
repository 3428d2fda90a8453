//! One line per acceptance criterion. Exits nonzero if any criterion other than
//! the documented table discrepancy fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use framestarter::construct::{gross_leonard, mult_construction, scm_exists, scm_search, Scm, SCM_SEARCH_CAP};
use framestarter::corpus::{self, printed_table, TABLE_ERRATA};
use framestarter::feasibility::conjectured_admissible;
use framestarter::format::parse_starter_file;
use framestarter::search::{exhaustive, exhaustive_orthogonal_pair, hill_climb};
use framestarter::starter::{compute_adder, verify_strong};
use framestarter::{FrameStarter, Group, Mode, Outcome, SearchParams, Subgroup};

struct Line {
    pass: bool,
    detail: String,
    /// A failure recorded in the decisions ledger rather than a regression.
    known: bool,
}

fn pass(detail: impl Into<String>) -> Line {
    Line { pass: true, detail: detail.into(), known: false }
}

fn fail(detail: impl Into<String>) -> Line {
    Line { pass: false, detail: detail.into(), known: false }
}

fn check(ok: bool, detail: impl Into<String>) -> Line {
    if ok { pass(detail) } else { fail(detail) }
}

fn starter(name: &str) -> FrameStarter {
    let e = corpus::entry(name).unwrap();
    parse_starter_file(e.text).unwrap().to_starter().unwrap()
}

fn cyc(n: u32, h: usize) -> Subgroup {
    Group::cyclic(n).unwrap().cyclic_subgroup(h).unwrap()
}

fn criterion_1() -> Line {
    let strong: Vec<bool> = ["z10_h2", "z7", "z4x4_h4"].iter().map(|n| starter(n).is_strong()).collect();
    let (s1, s2) = (starter("z15_h3_s1"), starter("z15_h3_s2"));
    let adder: Vec<String> = match compute_adder(&s1, &s2) {
        Ok(a) => a.values().iter().map(ToString::to_string).collect(),
        Err(r) => return fail(format!("Z15 starters not orthogonal: {r}")),
    };
    let ok = strong.iter().all(|&b| b) && adder == ["1", "2", "6", "11", "3", "7"];
    check(ok, format!("Z10 \\ Z2, Z7, Z4xZ4 \\ H4 strong: {strong:?}; Z15 \\ Z3 adder {}", adder.join(",")))
}

fn criterion_2() -> Line {
    let mut verified = Vec::new();
    let mut flagged = Vec::new();
    let mut bad = Vec::new();
    for t in (4..=20).step_by(2) {
        let name = format!("z5t_t{t:02}");
        let e = corpus::entry(&name).unwrap();
        let f = parse_starter_file(e.text).unwrap();
        let report = verify_strong(&f.subgroup, &f.pairs).unwrap();
        match (report.is_valid(), e.printed_invalid) {
            (true, None) => verified.push(t),
            (false, Some(expected)) if report.to_string() == expected => {
                flagged.push(format!("t={t} [{}]", report.to_string().replace('\n', "; ")))
            }
            _ => bad.push(t),
        }
    }
    check(
        bad.is_empty(),
        format!("strong as printed: t={verified:?}; flagged invalid as printed: {}", flagged.join(" ")),
    )
}

fn criterion_3() -> Line {
    let mut results = Vec::new();
    let mut ok = true;
    for (n, h) in [(9, 1), (15, 3), (8, 2), (16, 4), (12, 2)] {
        let r = exhaustive(&cyc(n, h), Mode::Strong).unwrap();
        ok &= r.outcome == Outcome::ProvedNone;
        results.push(format!("Z{n}\\Z{h} strong:{}", r.outcome.label()));
    }
    let r = exhaustive_orthogonal_pair(&cyc(8, 2)).unwrap();
    ok &= r.outcome == Outcome::ProvedNone;
    results.push(format!(
        "Z8\\Z2 orthogonal pair:{} ({} frame starters tried)",
        r.outcome.label(),
        r.solutions.unwrap_or(0)
    ));
    check(ok, results.join(", "))
}

fn criterion_4() -> Line {
    let mut found = Vec::new();
    for n in 4..=9u32 {
        let r = exhaustive(&cyc(2 * n, 2), Mode::Frame).unwrap();
        if r.outcome.found().is_some() {
            found.push(n);
        }
    }
    check(found == [4, 5, 8, 9], format!("frame starters in Z_2n \\ {{0,n}} exist for n in {found:?}"))
}

fn criterion_5() -> Line {
    let admissible: BTreeSet<(u64, u64)> = conjectured_admissible(100).into_iter().collect();
    let printed = printed_table();
    let missing: Vec<_> = admissible.difference(&printed).copied().collect();
    let extra: Vec<_> = printed.difference(&admissible).copied().collect();

    let start = Instant::now();
    let mut not_found = Vec::new();
    let mut max_seed = 0;
    for &(h, g) in printed.iter().filter(|&&(_, g)| g <= 50) {
        let sub = cyc(g as u32, h as usize);
        let hit = (0..5u64).find(|&seed| {
            let p = SearchParams::default().with_seed(seed).with_budget(Duration::from_secs(60));
            hill_climb(&sub, &p).unwrap().outcome.found().is_some()
        });
        match hit {
            Some(s) => max_seed = max_seed.max(s),
            None => not_found.push((h, g)),
        }
    }
    let elapsed = start.elapsed();
    let climb_ok = not_found.is_empty() && elapsed <= Duration::from_secs(60);
    let climb = format!(
        "hill-climb found all {} entries with g <= 50 in {:.1}s (highest seed used {max_seed}); not found {not_found:?}",
        printed.iter().filter(|&&(_, g)| g <= 50).count(),
        elapsed.as_secs_f64()
    );

    if missing.is_empty() && extra.is_empty() {
        return check(climb_ok, format!("admissible set equals the printed table ({} entries); {climb}", printed.len()));
    }
    let witness = starter("witness_z56_h8");
    let erratum_only = extra.is_empty() && missing == TABLE_ERRATA && witness.is_strong();
    Line {
        pass: false,
        known: erratum_only && climb_ok,
        detail: format!(
            "admissible set differs from the printed table: admissible but not printed {missing:?}, printed but excluded {extra:?}; \
             no rule excludes (8,56) and the committed witness in Z56 \\ Z8 is strong: {}; {climb}",
            witness.is_strong()
        ),
    }
}

fn criterion_6() -> Line {
    let z10 = starter("z10_h2");
    let a = mult_construction(&z10, &Scm::from_spec("gf:4:x").unwrap()).unwrap();
    let b = mult_construction(&z10, &Scm::from_spec("double:Z(7)").unwrap()).unwrap();
    let g = Group::new(&[2, 14]).unwrap();
    let h = Subgroup::closure(&g, &[g.element(&[1, 0]).unwrap(), g.element(&[0, 7]).unwrap()]).unwrap();
    let q = h.quotient();
    let (habs, _) = h.as_group();
    let phi = scm_search(&habs, SCM_SEARCH_CAP).unwrap().unwrap();
    let c = gross_leonard(&starter("z7"), &phi, &q).unwrap();
    let ok = a.type_signature() == (8, 5)
        && a.is_strong()
        && b.group().order() == 70
        && b.subgroup().order() == 14
        && b.is_strong()
        && c.type_signature() == (4, 7)
        && c.is_strong();
    check(
        ok,
        format!(
            "mult with GF(4): {} type {:?}; mult with doubling on Z7: order {}, |H| = {}; Gross-Leonard: {} type {:?}",
            a.group(),
            a.type_signature(),
            b.group().order(),
            b.subgroup().order(),
            c.group(),
            c.type_signature()
        ),
    )
}

/// Divisibility chains n1 | n2 | ... with product n: one per abelian group of order n.
fn chains(n: u32, min: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for d in (2..=n).filter(|d| n % d == 0 && d % min == 0) {
        for mut rest in chains(n / d, d) {
            if rest.first().is_none_or(|&r| r % d == 0) {
                rest.insert(0, d);
                out.push(rest);
            }
        }
    }
    out
}

fn criterion_7() -> Line {
    let mut groups = 0;
    let mut disagree = Vec::new();
    for n in 1..=24u32 {
        for factors in chains(n, 1) {
            let g = if factors.is_empty() { Group::trivial() } else { Group::new(&factors).unwrap() };
            groups += 1;
            let searched = scm_search(&g, SCM_SEARCH_CAP).unwrap().is_some();
            if searched != scm_exists(&g) {
                disagree.push(g.to_string());
            }
        }
    }
    check(
        disagree.is_empty(),
        format!("{groups} abelian groups of order <= 24 checked; disagreements: {disagree:?}"),
    )
}

fn criterion_8() -> Line {
    let dir = tempfile::tempdir().unwrap();
    let run = |file: &str| {
        let path = dir.path().join(file);
        let status = Command::new(env!("CARGO_BIN_EXE_framestarter"))
            .args(["search", "Z(60)", "--order", "4", "--seed", "11", "--budget-ms", "60000", "-o"])
            .arg(&path)
            .output()
            .unwrap();
        (status.status.code(), std::fs::read(&path).unwrap_or_default())
    };
    let (c1, a) = run("a.st");
    let (c2, b) = run("b.st");
    let p = SearchParams::default().with_seed(5);
    let x = hill_climb(&cyc(45, 5), &p).unwrap();
    let y = hill_climb(&cyc(45, 5), &p).unwrap();
    let lib_same = x.summary() == y.summary() && x.outcome == y.outcome;
    check(
        c1 == Some(0) && c2 == Some(0) && !a.is_empty() && a == b && lib_same,
        format!("two CLI runs with seed 11 wrote {} and {} bytes, identical: {}; library runs identical: {lib_same}", a.len(), b.len(), a == b),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Line); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut unexpected = 0;
    for (n, f) in criteria {
        let line = f();
        let status = match (line.pass, line.known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {n}: {status}: {}", line.detail);
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
