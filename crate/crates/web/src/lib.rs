//! Browser bindings: verify, hill-climb and classify, each returning JSON.
//!
//! Every result carries a `drawing` (elements in index order, which ones lie in
//! `H`, and the pairs) for the chord diagram on the demo page. Errors come back
//! as `{"error": "..."}`. Time budgets do not apply in the browser; hill-climbing
//! is bounded by its restart count instead.

use framestarter::feasibility::{self, ClassifyOptions};
use framestarter::format::{parse_group, parse_starter_file, parse_subgroup, write_starter};
use framestarter::search;
use framestarter::{FrameStarter, Mode, SearchParams, Subgroup};
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

#[derive(Serialize)]
struct Drawing {
    labels: Vec<String>,
    in_h: Vec<bool>,
    pairs: Vec<[usize; 2]>,
}

impl Drawing {
    fn new(h: &Subgroup, pairs: Vec<[usize; 2]>) -> Self {
        let g = h.parent();
        Drawing {
            labels: g.elements().map(|e| e.to_string()).collect(),
            in_h: h.mask().to_vec(),
            pairs,
        }
    }

    fn of(s: &FrameStarter) -> Self {
        Self::new(s.subgroup(), s.pair_indices().iter().map(|&(x, y)| [x, y]).collect())
    }
}

#[derive(Serialize)]
struct VerifyResult {
    group: String,
    subgroup_order: usize,
    frame: bool,
    strong: bool,
    report: String,
    drawing: Drawing,
}

#[derive(Serialize)]
struct ClimbResult {
    summary: String,
    found: bool,
    starter: Option<String>,
    drawing: Option<Drawing>,
}

#[derive(Serialize)]
struct ClassifyResult {
    kind: String,
    reasons: Vec<[String; 2]>,
    notes: Vec<String>,
    text: String,
}

fn json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).expect("plain data serializes"),
        Err(e) => serde_json::json!({ "error": e }).to_string(),
    }
}

fn target(group: &str, subgroup: &str) -> Result<Subgroup, String> {
    let g = parse_group(group).map_err(|e| e.to_string())?;
    parse_subgroup(&g, subgroup).map_err(|e| e.to_string())
}

/// Verifies a starter file (the CLI format).
#[wasm_bindgen]
pub fn verify(text: &str) -> String {
    json((|| {
        let file = parse_starter_file(text).map_err(|e| e.to_string())?;
        let g = file.group();
        let idx: Vec<[usize; 2]> = file.pairs.iter().map(|(x, y)| [g.index_of(x), g.index_of(y)]).collect();
        let frame = framestarter::starter::verify_frame_starter(&file.subgroup, &file.pairs).map_err(|e| e.to_string())?;
        let strong = framestarter::starter::verify_strong(&file.subgroup, &file.pairs).map_err(|e| e.to_string())?;
        Ok(VerifyResult {
            group: g.to_string(),
            subgroup_order: file.subgroup.order(),
            frame: frame.is_valid(),
            strong: strong.is_valid(),
            report: strong.to_string(),
            drawing: Drawing::new(&file.subgroup, idx),
        })
    })())
}

/// Hill-climbs in `group \ <subgroup>`; `mode` is "frame" or "strong".
#[wasm_bindgen]
pub fn hill_climb(group: &str, subgroup: &str, mode: &str, seed: u32, max_restarts: u32) -> String {
    json((|| {
        let h = target(group, subgroup)?;
        let params = SearchParams {
            mode: mode.parse::<Mode>().map_err(|e| e.to_string())?,
            max_restarts: max_restarts.max(1) as u64,
            ..SearchParams::default().with_seed(seed as u64)
        };
        let r = search::hill_climb(&h, &params).map_err(|e| e.to_string())?;
        let found = r.outcome.found();
        Ok(ClimbResult {
            summary: r.summary(),
            found: found.is_some(),
            starter: found.map(write_starter),
            drawing: found.map(Drawing::of),
        })
    })())
}

/// Rules and families for `group \ <subgroup>`; `search` adds witness searches.
#[wasm_bindgen]
pub fn classify(group: &str, subgroup: &str, search: bool) -> String {
    json((|| {
        let h = target(group, subgroup)?;
        let opts = ClassifyOptions {
            search,
            ..ClassifyOptions::default()
        };
        let v = feasibility::classify(&h, &opts);
        Ok(ClassifyResult {
            kind: v.kind.to_string(),
            reasons: v.reasons.iter().map(|r| [r.rule.to_string(), r.citation.clone()]).collect(),
            notes: v.notes.clone(),
            text: v.to_string(),
        })
    })())
}
