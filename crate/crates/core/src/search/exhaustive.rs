use std::ops::ControlFlow;

use super::mate::{mate_search, MateBudget};
use super::{Mode, Outcome, SearchReport};
use crate::clock::Stopwatch;
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::starter::{compute_adder, FrameStarter};

/// Largest group order accepted by the strong-mode oracle.
pub const EXHAUSTIVE_STRONG_CAP: usize = 30;
/// Largest group order accepted by frame-mode oracles (search, count, enumerate).
pub const EXHAUSTIVE_FRAME_CAP: usize = 24;

fn default_cap(mode: Mode) -> usize {
    match mode {
        Mode::Frame => EXHAUSTIVE_FRAME_CAP,
        Mode::Strong => EXHAUSTIVE_STRONG_CAP,
    }
}

/// Backtracking oracle: `Found` with the first starter in canonical order, or
/// `ProvedNone`.
pub fn exhaustive(h: &Subgroup, mode: Mode) -> Result<SearchReport> {
    let clock = Stopwatch::start();
    let mut first = None;
    let nodes = exhaustive_for_each(h, mode, default_cap(mode), &mut |pairs| {
        first = Some(pairs.to_vec());
        ControlFlow::Break(())
    })?;
    let outcome = match first {
        Some(pairs) => Outcome::Found(FrameStarter::from_indices(h, pairs)?),
        None => Outcome::ProvedNone,
    };
    let mut report = SearchReport::new(outcome, 0);
    report.iterations = nodes;
    report.elapsed = clock.elapsed();
    Ok(report)
}

/// Counts every starter. The outcome is the first one found, or `ProvedNone`.
pub fn exhaustive_count(h: &Subgroup, mode: Mode) -> Result<SearchReport> {
    let clock = Stopwatch::start();
    let mut first = None;
    let mut count = 0u64;
    let nodes = exhaustive_for_each(h, mode, default_cap(mode), &mut |pairs| {
        if first.is_none() {
            first = Some(pairs.to_vec());
        }
        count += 1;
        ControlFlow::Continue(())
    })?;
    let outcome = match first {
        Some(pairs) => Outcome::Found(FrameStarter::from_indices(h, pairs)?),
        None => Outcome::ProvedNone,
    };
    let mut report = SearchReport::new(outcome, 0);
    report.iterations = nodes;
    report.solutions = Some(count);
    report.elapsed = clock.elapsed();
    Ok(report)
}

/// Calls `visit` on every (strong) frame starter in `G \ H`, as index pairs.
///
/// The smallest unpaired element is always paired next, with a larger partner, so
/// each starter is produced exactly once. Difference classes and, in strong mode,
/// sums are tracked in bitmasks. Returns the number of search nodes.
pub fn exhaustive_for_each(
    h: &Subgroup,
    mode: Mode,
    cap: usize,
    visit: &mut dyn FnMut(&[(usize, usize)]) -> ControlFlow<()>,
) -> Result<u64> {
    let g = h.parent();
    let n = g.order();
    if n > cap || n > 128 {
        return Err(Error::CapExceeded {
            order: n,
            cap: cap.min(128),
        });
    }
    let mut h_mask = 0u128;
    for &i in h.indices() {
        h_mask |= 1 << i;
    }
    let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut add = vec![0u8; n * n];
    let mut sub = vec![0u8; n * n];
    for a in 0..n {
        for b in 0..n {
            add[a * n + b] = g.add_idx(a, b) as u8;
            sub[a * n + b] = g.sub_idx(a, b) as u8;
        }
    }
    let mut bt = Backtrack {
        n,
        strong: mode == Mode::Strong,
        add,
        sub,
        neg: (0..n).map(|x| g.neg_idx(x) as u8).collect(),
        free: full & !h_mask,
        diffs: h_mask,
        sums: h_mask,
        pairs: Vec::with_capacity(n / 2),
        nodes: 0,
    };
    if (n - h.order()) % 2 == 1 {
        return Ok(0);
    }
    let _ = bt.rec(visit);
    Ok(bt.nodes)
}

struct Backtrack {
    n: usize,
    strong: bool,
    add: Vec<u8>,
    sub: Vec<u8>,
    neg: Vec<u8>,
    free: u128,
    diffs: u128,
    sums: u128,
    pairs: Vec<(usize, usize)>,
    nodes: u64,
}

impl Backtrack {
    fn rec(&mut self, visit: &mut dyn FnMut(&[(usize, usize)]) -> ControlFlow<()>) -> ControlFlow<()> {
        self.nodes += 1;
        if self.free == 0 {
            return visit(&self.pairs);
        }
        let x = self.free.trailing_zeros() as usize;
        let mut cand = self.free & !(1u128 << x);
        while cand != 0 {
            let y = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let d = self.sub[y * self.n + x] as usize;
            let nd = self.neg[d] as usize;
            if d == nd || self.diffs >> d & 1 == 1 {
                continue;
            }
            let s = self.add[x * self.n + y] as usize;
            if self.strong && self.sums >> s & 1 == 1 {
                continue;
            }
            let dmask = (1u128 << d) | (1u128 << nd);
            let smask = if self.strong { 1u128 << s } else { 0 };
            self.free &= !((1u128 << x) | (1u128 << y));
            self.diffs |= dmask;
            self.sums |= smask;
            self.pairs.push((x, y));
            let flow = self.rec(visit);
            self.pairs.pop();
            self.sums &= !smask;
            self.diffs &= !dmask;
            self.free |= (1u128 << x) | (1u128 << y);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Decides whether any two orthogonal frame starters exist in `G \ H` by running
/// an exhaustive mate search on every frame starter. `Found` carries the first
/// starter that has a mate, with the adder.
pub fn exhaustive_orthogonal_pair(h: &Subgroup) -> Result<SearchReport> {
    let clock = Stopwatch::start();
    let mut hit = None;
    let mut nodes = 0u64;
    let mut starters = 0u64;
    exhaustive_for_each(h, Mode::Frame, EXHAUSTIVE_FRAME_CAP, &mut |pairs| {
        starters += 1;
        let s1 = FrameStarter::from_indices(h, pairs.to_vec()).expect("oracle output is valid");
        let (mate, n) = mate_search(&s1, &MateBudget::unlimited());
        nodes += n;
        match mate {
            Some(Some(s2)) => {
                hit = Some((s1, s2));
                ControlFlow::Break(())
            }
            _ => ControlFlow::Continue(()),
        }
    })?;
    let mut report = match hit {
        Some((s1, s2)) => {
            let adder = compute_adder(&s1, &s2).map_err(Error::Invalid)?;
            let mut r = SearchReport::new(Outcome::Found(s1), 0);
            r.adder = Some(adder);
            r
        }
        None => SearchReport::new(Outcome::ProvedNone, 0),
    };
    report.iterations = nodes;
    report.solutions = Some(starters);
    report.elapsed = clock.elapsed();
    Ok(report)
}
