use std::time::Duration;

use super::{Outcome, SearchReport};
use crate::clock::Stopwatch;
use crate::error::{Error, Result};
use crate::starter::{compute_adder, FrameStarter};

#[derive(Clone, Debug, Default)]
pub struct MateBudget {
    pub time: Option<Duration>,
    pub node_limit: Option<u64>,
}

impl MateBudget {
    pub fn unlimited() -> Self {
        MateBudget::default()
    }

    pub fn with_time(time: Duration) -> Self {
        MateBudget {
            time: Some(time),
            node_limit: None,
        }
    }
}

/// Looks for a frame starter orthogonal to `s1`.
///
/// A mate is `{{x_i + a_i, y_i + a_i}}` for distinct translates `a_i ∉ H` whose
/// translated pairs again partition `G \ H`. When `s1` is strong its negation is
/// such a mate and is returned directly. Otherwise the search backtracks over
/// translates, always extending the pair with the fewest options; `ProvedNone`
/// means no mate exists, `TimedOut` that the budget ran out first.
pub fn find_orthogonal_mate(s1: &FrameStarter, budget: &MateBudget) -> Result<SearchReport> {
    let clock = Stopwatch::start();
    let (outcome, nodes) = if s1.is_strong() {
        (Some(Some(s1.negate())), 0)
    } else {
        mate_search(s1, budget)
    };
    let mut report = match outcome {
        Some(Some(s2)) => {
            let adder = compute_adder(s1, &s2).map_err(Error::Invalid)?;
            let mut r = SearchReport::new(Outcome::Found(s2), 0);
            r.adder = Some(adder);
            r
        }
        Some(None) => SearchReport::new(Outcome::ProvedNone, 0),
        None => SearchReport::new(Outcome::TimedOut, 0),
    };
    report.iterations = nodes;
    report.elapsed = clock.elapsed();
    Ok(report)
}

/// `None` when the budget ran out; `Some(None)` when no mate exists.
pub(crate) fn mate_search(s1: &FrameStarter, budget: &MateBudget) -> (Option<Option<FrameStarter>>, u64) {
    let g = s1.group();
    let h = s1.subgroup();
    let n = g.order();
    assert!(n <= 128, "mate search supports groups of order at most 128");
    let mut h_mask = 0u128;
    for &i in h.indices() {
        h_mask |= 1 << i;
    }
    let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut add = vec![0u8; n * n];
    for a in 0..n {
        for b in 0..n {
            add[a * n + b] = g.add_idx(a, b) as u8;
        }
    }
    let mut m = MateSearch {
        n,
        add,
        pairs: s1.pair_indices().to_vec(),
        translate: vec![None; s1.len()],
        free: full & !h_mask,
        used: h_mask,
        full,
        nodes: 0,
        budget: budget.clone(),
        clock: Stopwatch::start(),
        aborted: false,
    };
    let found = m.rec();
    if m.aborted {
        return (None, m.nodes);
    }
    if !found {
        return (Some(None), m.nodes);
    }
    let pairs = m
        .pairs
        .iter()
        .zip(&m.translate)
        .map(|(&(x, y), a)| {
            let a = a.expect("complete");
            (m.add[x * n + a] as usize, m.add[y * n + a] as usize)
        })
        .collect();
    let s2 = FrameStarter::from_indices(h, pairs).expect("translated pairs partition G \\ H");
    (Some(Some(s2)), m.nodes)
}

struct MateSearch {
    n: usize,
    add: Vec<u8>,
    pairs: Vec<(usize, usize)>,
    translate: Vec<Option<usize>>,
    free: u128,
    used: u128,
    full: u128,
    nodes: u64,
    budget: MateBudget,
    clock: Stopwatch,
    aborted: bool,
}

impl MateSearch {
    fn options(&self, i: usize) -> u128 {
        let (x, y) = self.pairs[i];
        let mut out = 0u128;
        let mut avail = self.full & !self.used;
        while avail != 0 {
            let a = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            let u = self.add[x * self.n + a];
            let v = self.add[y * self.n + a];
            if self.free >> u & 1 == 1 && self.free >> v & 1 == 1 {
                out |= 1 << a;
            }
        }
        out
    }

    fn out_of_budget(&mut self) -> bool {
        if self.budget.node_limit.is_some_and(|l| self.nodes > l) {
            self.aborted = true;
        }
        if self.nodes % 1024 == 0 && self.budget.time.is_some_and(|t| self.clock.elapsed() > t) {
            self.aborted = true;
        }
        self.aborted
    }

    fn rec(&mut self) -> bool {
        self.nodes += 1;
        if self.out_of_budget() {
            return false;
        }
        let mut best: Option<(u32, usize, u128)> = None;
        for i in 0..self.pairs.len() {
            if self.translate[i].is_some() {
                continue;
            }
            let opts = self.options(i);
            let k = opts.count_ones();
            if k == 0 {
                return false;
            }
            if best.is_none_or(|b| k < b.0) {
                best = Some((k, i, opts));
                if k == 1 {
                    break;
                }
            }
        }
        let Some((_, i, mut opts)) = best else {
            return true;
        };
        let (x, y) = self.pairs[i];
        while opts != 0 {
            let a = opts.trailing_zeros() as usize;
            opts &= opts - 1;
            let cover = (1u128 << self.add[x * self.n + a]) | (1u128 << self.add[y * self.n + a]);
            self.translate[i] = Some(a);
            self.free &= !cover;
            self.used |= 1 << a;
            if self.rec() {
                return true;
            }
            self.used &= !(1u128 << a);
            self.free |= cover;
            self.translate[i] = None;
            if self.aborted {
                return false;
            }
        }
        false
    }
}
