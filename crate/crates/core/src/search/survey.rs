use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{hill_climb, SearchParams};
use crate::error::Result;
use crate::feasibility::{conjecture_classify, VerdictKind};
use crate::group::Group;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurveyOutcome {
    /// Hill-climbing found a strong frame starter; `seed` is the attempt that won.
    Found { seed: u64, restarts: u64 },
    /// Every attempt ran out of budget.
    NotFound,
    /// A nonexistence rule applies; the rule names are listed.
    Excluded(Vec<&'static str>),
}

impl SurveyOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            SurveyOutcome::Found { .. } => "found",
            SurveyOutcome::NotFound => "notfound",
            SurveyOutcome::Excluded(_) => "excluded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyCell {
    pub h: u64,
    pub g: u64,
    pub outcome: SurveyOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurveyTable {
    pub g_max: u64,
    pub cells: Vec<SurveyCell>,
}

impl SurveyTable {
    /// `(h, g)` pairs where a strong frame starter was found.
    pub fn found(&self) -> Vec<(u64, u64)> {
        self.cells
            .iter()
            .filter(|c| matches!(c.outcome, SurveyOutcome::Found { .. }))
            .map(|c| (c.h, c.g))
            .collect()
    }

    /// `(h, g)` pairs not excluded by any rule.
    pub fn admissible(&self) -> Vec<(u64, u64)> {
        self.cells
            .iter()
            .filter(|c| !matches!(c.outcome, SurveyOutcome::Excluded(_)))
            .map(|c| (c.h, c.g))
            .collect()
    }

    /// One `h g outcome` line per cell.
    pub fn machine_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            let _ = writeln!(out, "{} {} {}", c.h, c.g, c.outcome.label());
        }
        out
    }

    /// Admissible `g` listed per `h`, as in the published table. Entries the search
    /// did not reach are marked with `*`.
    pub fn render(&self) -> String {
        let mut rows: BTreeMap<u64, Vec<String>> = BTreeMap::new();
        for c in &self.cells {
            let entry = match c.outcome {
                SurveyOutcome::Found { .. } => c.g.to_string(),
                SurveyOutcome::NotFound => format!("{}*", c.g),
                SurveyOutcome::Excluded(_) => continue,
            };
            rows.entry(c.h).or_default().push(entry);
        }
        let width = rows.keys().last().map_or(1, |h| h.to_string().len()).max(1);
        let mut out = format!("{:>width$} | g (g <= {})\n", "h", self.g_max);
        let _ = writeln!(out, "{}-+-{}", "-".repeat(width), "-".repeat(24));
        for (h, gs) in &rows {
            let _ = writeln!(out, "{h:>width$} | {}", gs.join(", "));
        }
        if self.cells.iter().any(|c| c.outcome == SurveyOutcome::NotFound) {
            out.push_str("* not found within the search budget\n");
        }
        out
    }
}

/// Classifies every `Z_g \ Z_h` with `g ≤ g_max`, `g - h` even and `g ≥ 4h`, and
/// hill-climbs each admissible case with up to `attempts` consecutive seeds
/// starting at `params.seed`. Restrict to a single `h` with `h_filter`.
pub fn survey(g_max: u64, h_filter: Option<u64>, params: &SearchParams, attempts: u32) -> Result<SurveyTable> {
    params.validate()?;
    let mut cells = Vec::new();
    for h in 1..=g_max / 4 {
        if h_filter.is_some_and(|f| f != h) {
            continue;
        }
        for g in (4 * h..=g_max).step_by(h as usize) {
            if (g - h) % 2 == 1 {
                continue;
            }
            let v = conjecture_classify(g, h)?;
            let outcome = match v.kind {
                VerdictKind::Open => search_cell(g, h, params, attempts)?,
                _ => SurveyOutcome::Excluded(v.reasons.iter().map(|r| r.rule).collect()),
            };
            cells.push(SurveyCell { h, g, outcome });
        }
    }
    Ok(SurveyTable { g_max, cells })
}

fn search_cell(g: u64, h: u64, params: &SearchParams, attempts: u32) -> Result<SurveyOutcome> {
    let grp = Group::cyclic(g as u32)?;
    let sub = grp.cyclic_subgroup(h as usize)?;
    for k in 0..attempts.max(1) as u64 {
        let p = SearchParams {
            seed: params.seed.wrapping_add(k),
            ..params.clone()
        };
        let r = hill_climb(&sub, &p)?;
        if r.outcome.found().is_some() {
            return Ok(SurveyOutcome::Found {
                seed: p.seed,
                restarts: r.restarts,
            });
        }
    }
    Ok(SurveyOutcome::NotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    #[test]
    fn small_survey() {
        let params = SearchParams::default().with_budget(Duration::from_secs(5));
        let t = survey(20, None, &params, 3).unwrap();
        assert_eq!(
            t.admissible(),
            vec![(1, 7), (1, 11), (1, 13), (1, 15), (1, 17), (1, 19), (2, 10), (2, 16), (2, 18), (4, 20)]
        );
        assert_eq!(t.found(), t.admissible());
        let lines = t.machine_lines();
        assert!(lines.contains("1 9 excluded\n"));
        assert!(lines.contains("2 10 found\n"));
        let table = t.render();
        assert!(table.contains("1 | 7, 11, 13, 15, 17, 19\n"), "{table}");
        assert!(table.contains("2 | 10, 16, 18\n"));
    }
}
