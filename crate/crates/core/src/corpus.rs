//! Published starters and the admissibility table, kept as golden data, and the
//! self-test that re-verifies all of it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::feasibility::conjectured_admissible;
use crate::format::parse_starter_file;
use crate::group::Element;
use crate::starter::{compute_adder, verify_frame_starter, verify_strong};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    Strong,
    /// A frame starter; orthogonality is checked separately.
    Frame,
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    pub claim: Claim,
    /// For rows that do not verify as printed: the verifier's exact findings.
    pub printed_invalid: Option<&'static str>,
}

const T20_FINDINGS: &str = "repeated element 36 (#10 {36,48}, #25 {36,67})
repeated element 48 (#9 {48,59}, #10 {36,48})
missing element 62
missing element 74";

macro_rules! entry {
    ($name:literal, $claim:expr) => {
        entry!($name, $claim, None)
    };
    ($name:literal, $claim:expr, $invalid:expr) => {
        CorpusEntry {
            name: $name,
            text: include_str!(concat!("../corpus/", $name, ".st")),
            claim: $claim,
            printed_invalid: $invalid,
        }
    };
}

pub const ENTRIES: &[CorpusEntry] = &[
    entry!("z10_h2", Claim::Strong),
    entry!("z7", Claim::Strong),
    entry!("z15_h3_s1", Claim::Frame),
    entry!("z15_h3_s2", Claim::Frame),
    entry!("z4x4_h4", Claim::Strong),
    entry!("z5t_t04", Claim::Strong),
    entry!("z5t_t06", Claim::Strong),
    entry!("z5t_t08", Claim::Strong),
    entry!("z5t_t10", Claim::Strong),
    entry!("z5t_t12", Claim::Strong),
    entry!("z5t_t14", Claim::Strong),
    entry!("z5t_t16", Claim::Strong),
    entry!("z5t_t18", Claim::Strong),
    entry!("z5t_t20", Claim::Strong, Some(T20_FINDINGS)),
    entry!("witness_z56_h8", Claim::Strong),
];

pub fn entry(name: &str) -> Option<&'static CorpusEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

/// The adder printed next to the two orthogonal starters in `Z15 \ {0,5,10}`.
pub const Z15_ADDER: [u32; 6] = [1, 2, 6, 11, 3, 7];

/// The admissibility table for `g ≤ 100` as printed, with each `…` expanded by
/// the step between the two entries before it.
pub const ADMISSIBLE_TABLE: &[(u64, &str)] = &[
    (1, "7, 11, 13, 15, ..., 99"),
    (2, "10, 16, 18, 24, 26, 32, 34, 40, 42, 48, 50, 56, 58, 64, 66, 72, 74, 80, 82, 88, 90, 96, 98"),
    (3, "21, 27, ..., 99"),
    (4, "20, 28, 32, ..., 100"),
    (5, "35, 45, 55, 65, 75, 85, 95"),
    (6, "30, 48, 54, 72, 78, 96"),
    (7, "49, 63, 77, 91"),
    (8, "40, 64, 72, 80, 88, 96"),
    (9, "63, 81, 99"),
    (10, "50, 80, 90"),
    (11, "77, 99"),
    (12, "60, 84, 96"),
    (13, "91"),
    (14, "70"),
    (16, "80"),
    (18, "90"),
    (20, "100"),
];

/// Entries missing from the printed table. `(8, 56)` is admissible and a strong
/// frame starter for it is in the corpus (`witness_z56_h8`).
pub const TABLE_ERRATA: &[(u64, u64)] = &[(8, 56)];

fn expand_row(row: &str) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    let mut ellipsis = false;
    for tok in row.split(',').map(str::trim) {
        if tok == "..." {
            ellipsis = true;
            continue;
        }
        let v: u64 = tok.parse().expect("table entries are integers");
        if ellipsis {
            let n = out.len();
            let step = out[n - 1] - out[n - 2];
            let mut x = out[n - 1] + step;
            while x < v {
                out.push(x);
                x += step;
            }
            ellipsis = false;
        }
        out.push(v);
    }
    out
}

/// The printed table as `(h, g)` pairs.
pub fn printed_table() -> BTreeSet<(u64, u64)> {
    ADMISSIBLE_TABLE
        .iter()
        .flat_map(|&(h, row)| expand_row(row).into_iter().map(move |g| (h, g)))
        .collect()
}

/// Replacement corpus texts and extra table entries, used to check that the
/// self-test notices corrupted data.
#[derive(Clone, Debug, Default)]
pub struct SelfTestOptions {
    pub overrides: BTreeMap<String, String>,
    pub table_extra: Vec<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfTestLine {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct SelfTestReport {
    pub lines: Vec<SelfTestLine>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }

    pub fn line(&self, name: &str) -> Option<&SelfTestLine> {
        self.lines.iter().find(|l| l.name == name)
    }
}

impl fmt::Display for SelfTestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            let status = if l.ok { "ok  " } else { "FAIL" };
            let mut detail = l.detail.lines();
            writeln!(f, "{status} {}: {}", l.name, detail.next().unwrap_or(""))?;
            for more in detail {
                writeln!(f, "       {more}")?;
            }
        }
        Ok(())
    }
}

pub fn selftest(opts: &SelfTestOptions) -> SelfTestReport {
    let mut report = SelfTestReport::default();
    let text_of = |e: &CorpusEntry| opts.overrides.get(e.name).cloned().unwrap_or_else(|| e.text.to_owned());
    for e in ENTRIES {
        let (ok, detail) = check_entry(e, &text_of(e));
        report.lines.push(SelfTestLine {
            name: e.name.to_owned(),
            ok,
            detail,
        });
    }
    let (ok, detail) = check_adder(&text_of(entry("z15_h3_s1").unwrap()), &text_of(entry("z15_h3_s2").unwrap()));
    report.lines.push(SelfTestLine {
        name: "z15_adder".into(),
        ok,
        detail,
    });
    let (ok, detail) = check_printed_table(&opts.table_extra);
    report.lines.push(SelfTestLine {
        name: "admissible_table".into(),
        ok,
        detail,
    });
    report
}

fn check_entry(e: &CorpusEntry, text: &str) -> (bool, String) {
    let file = match parse_starter_file(text) {
        Ok(f) => f,
        Err(err) => return (false, format!("parse error: {err}")),
    };
    let report = match e.claim {
        Claim::Strong => verify_strong(&file.subgroup, &file.pairs),
        Claim::Frame => verify_frame_starter(&file.subgroup, &file.pairs),
    };
    let report = match report {
        Ok(r) => r,
        Err(err) => return (false, err.to_string()),
    };
    let claim = match e.claim {
        Claim::Strong => "strong frame starter",
        Claim::Frame => "frame starter",
    };
    match (report.is_valid(), e.printed_invalid) {
        (true, None) => (true, format!("{claim}, {} pairs", file.pairs.len())),
        (false, Some(expected)) if report.to_string() == expected => {
            (true, format!("as-printed: invalid, findings as recorded\n{report}"))
        }
        (false, Some(expected)) => (
            false,
            format!("as-printed findings changed\nexpected:\n{expected}\nfound:\n{report}"),
        ),
        (true, Some(_)) => (false, "recorded as invalid as printed, but it verifies".into()),
        (false, None) => (false, format!("not a {claim}\n{report}")),
    }
}

fn check_adder(s1: &str, s2: &str) -> (bool, String) {
    let starter = |t: &str| parse_starter_file(t).and_then(|f| f.to_starter());
    let (s1, s2) = match (starter(s1), starter(s2)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return (false, e.to_string()),
    };
    match compute_adder(&s1, &s2) {
        Ok(adder) => {
            let expected: Vec<Element> = Z15_ADDER.iter().map(|&a| Element::from_coords(vec![a])).collect();
            let got = adder.values();
            let show = |v: &[Element]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            if got == expected {
                (true, format!("orthogonal, adder {}", show(&got)))
            } else {
                (false, format!("adder {} differs from printed {}", show(&got), show(&expected)))
            }
        }
        Err(r) => (false, format!("not orthogonal\n{r}")),
    }
}

fn check_printed_table(extra: &[(u64, u64)]) -> (bool, String) {
    let mut printed = printed_table();
    printed.extend(extra.iter().copied());
    let corrected: BTreeSet<_> = printed.iter().copied().chain(TABLE_ERRATA.iter().copied()).collect();
    let admissible: BTreeSet<_> = conjectured_admissible(100).into_iter().collect();
    if corrected == admissible {
        let errata: Vec<String> = TABLE_ERRATA.iter().map(|(h, g)| format!("({h},{g})")).collect();
        return (
            true,
            format!(
                "{} entries match the admissible set; missing from the printed table: {}",
                admissible.len(),
                errata.join(" ")
            ),
        );
    }
    let fmt = |s: Vec<&(u64, u64)>| s.iter().map(|(h, g)| format!("({h},{g})")).collect::<Vec<_>>().join(" ");
    let mut detail = String::from("table differs from the admissible set");
    let extra_in_table: Vec<_> = corrected.difference(&admissible).collect();
    if !extra_in_table.is_empty() {
        detail.push_str(&format!("\nlisted but excluded: {}", fmt(extra_in_table)));
    }
    let missing: Vec<_> = admissible.difference(&corrected).collect();
    if !missing.is_empty() {
        detail.push_str(&format!("\nadmissible but not listed: {}", fmt(missing)));
    }
    (false, detail)
}
