use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Mode, Outcome, SearchParams, SearchReport};
use crate::clock::Stopwatch;
use crate::error::{Error, Result};
use crate::feasibility::{frame_obstructions, strong_obstructions};
use crate::group::Subgroup;
use crate::starter::FrameStarter;

const NONE: usize = usize::MAX;

/// Randomized hill-climbing for a (strong) frame starter in `G \ H`.
///
/// Each step picks a uniformly random unpaired element `x` and a uniformly random
/// difference class `±d` not yet realized, and sets `y = x + d` or `x - d` (random
/// sign, the other sign if the first puts `y` or, in strong mode, `x + y` in `H`).
/// The pair holding `y`, or in strong mode the pair with sum `x + y`, is evicted
/// before `{x, y}` is added; a move that would evict two different pairs is
/// skipped, so the pair count never drops. A restart happens after
/// `max_iterations` steps without a new best pair count.
///
/// Restart `r` draws from ChaCha8 seeded with `seed` on stream `r`. The reported
/// starter comes from the lowest-numbered successful restart, so the result does
/// not depend on how restarts are scheduled across threads.
pub fn hill_climb(h: &Subgroup, params: &SearchParams) -> Result<SearchReport> {
    params.validate()?;
    if !params.allow_infeasible {
        let mut obstructions = frame_obstructions(h);
        if params.mode == Mode::Strong {
            obstructions.extend(strong_obstructions(h));
        }
        if let Some(r) = obstructions.first() {
            return Err(Error::Precondition(format!("[{}] {}", r.rule, r.citation)));
        }
    }
    let clock = Stopwatch::start();
    let ctx = Context::new(h, params.mode);
    let restarts = params.max_restarts.min(1 << 24);
    let iterations: Vec<AtomicU64> = (0..restarts).map(|_| AtomicU64::new(0)).collect();
    let winner = AtomicU64::new(u64::MAX);
    let timed_out = AtomicBool::new(false);

    let run = |r: u64| -> Option<Vec<(usize, usize)>> {
        if timed_out.load(Ordering::Relaxed) || winner.load(Ordering::Relaxed) < r {
            return None;
        }
        let out = climb(&ctx, params, r, &clock, &winner, &timed_out);
        iterations[r as usize].store(out.iterations, Ordering::Relaxed);
        if out.pairs.is_some() {
            winner.fetch_min(r, Ordering::Relaxed);
        }
        out.pairs
    };

    #[cfg(feature = "parallel")]
    let found = {
        use rayon::prelude::*;
        (0..restarts as usize)
            .into_par_iter()
            .with_max_len(1)
            .find_map_first(|r| run(r as u64).map(|p| (r as u64, p)))
    };
    #[cfg(not(feature = "parallel"))]
    let found = (0..restarts).find_map(|r| run(r).map(|p| (r, p)));

    let mut report;
    match found {
        Some((r, pairs)) => {
            let starter = FrameStarter::from_indices(h, pairs)?;
            if params.mode == Mode::Strong {
                let check = starter.strong_report();
                if !check.is_valid() {
                    return Err(Error::Invalid(check));
                }
            }
            report = SearchReport::new(Outcome::Found(starter.sorted()), params.seed);
            report.restarts = r + 1;
            report.iterations = iterations[..=r as usize]
                .iter()
                .map(|a| a.load(Ordering::Relaxed))
                .sum();
        }
        None => {
            let outcome = if timed_out.load(Ordering::Relaxed) {
                Outcome::TimedOut
            } else {
                Outcome::Exhausted
            };
            report = SearchReport::new(outcome, params.seed);
            report.iterations = iterations.iter().map(|a| a.load(Ordering::Relaxed)).sum();
            report.restarts = iterations.iter().filter(|a| a.load(Ordering::Relaxed) > 0).count() as u64;
        }
    }
    report.elapsed = clock.elapsed();
    Ok(report)
}

/// Read-only tables shared by all restarts.
struct Context {
    mode: Mode,
    n: usize,
    outside: Vec<usize>,
    /// One representative per difference class `{d, -d}` outside `H`.
    classes: Vec<usize>,
    in_h: Vec<bool>,
    add: Vec<usize>,
    sub: Vec<usize>,
    neg: Vec<usize>,
}

impl Context {
    fn new(h: &Subgroup, mode: Mode) -> Self {
        let g = h.parent();
        let n = g.order();
        let mut add = vec![0; n * n];
        let mut sub = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = g.add_idx(a, b);
                sub[a * n + b] = g.sub_idx(a, b);
            }
        }
        Context {
            mode,
            n,
            outside: (0..n).filter(|&x| !h.contains_idx(x)).collect(),
            classes: (0..n)
                .filter(|&d| !h.contains_idx(d) && g.neg_idx(d) > d)
                .collect(),
            in_h: h.mask().to_vec(),
            add,
            sub,
            neg: (0..n).map(|x| g.neg_idx(x)).collect(),
        }
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b]
    }

    fn sub(&self, a: usize, b: usize) -> usize {
        self.sub[a * self.n + b]
    }

    fn class_of(&self, d: usize) -> usize {
        d.min(self.neg[d])
    }
}

/// A set of indices below `n` with O(1) insert, remove and uniform sampling.
struct Pool {
    items: Vec<usize>,
    pos: Vec<usize>,
}

impl Pool {
    fn new(n: usize, items: &[usize]) -> Self {
        let mut pos = vec![NONE; n];
        for (i, &x) in items.iter().enumerate() {
            pos[x] = i;
        }
        Pool {
            items: items.to_vec(),
            pos,
        }
    }

    fn remove(&mut self, x: usize) {
        let i = self.pos[x];
        let last = *self.items.last().expect("x is present");
        self.items.swap_remove(i);
        if last != x {
            self.pos[last] = i;
        }
        self.pos[x] = NONE;
    }

    fn insert(&mut self, x: usize) {
        self.pos[x] = self.items.len();
        self.items.push(x);
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        self.items[rng.random_range(0..self.items.len())]
    }
}

struct ClimbOutcome {
    pairs: Option<Vec<(usize, usize)>>,
    iterations: u64,
}

struct State {
    partner: Vec<usize>,
    /// Sum -> a member of the pair with that sum.
    sum_owner: Vec<usize>,
    unused: Pool,
    free_classes: Pool,
    pairs: usize,
}

impl State {
    fn new(ctx: &Context) -> Self {
        State {
            partner: vec![NONE; ctx.n],
            sum_owner: vec![NONE; ctx.n],
            unused: Pool::new(ctx.n, &ctx.outside),
            free_classes: Pool::new(ctx.n, &ctx.classes),
            pairs: 0,
        }
    }

    fn add_pair(&mut self, ctx: &Context, x: usize, y: usize) {
        self.unused.remove(x);
        self.unused.remove(y);
        self.partner[x] = y;
        self.partner[y] = x;
        self.free_classes.remove(ctx.class_of(ctx.sub(x, y)));
        if ctx.mode == Mode::Strong {
            self.sum_owner[ctx.add(x, y)] = x;
        }
        self.pairs += 1;
    }

    fn remove_pair(&mut self, ctx: &Context, x: usize) {
        let y = self.partner[x];
        self.partner[x] = NONE;
        self.partner[y] = NONE;
        self.free_classes.insert(ctx.class_of(ctx.sub(x, y)));
        if ctx.mode == Mode::Strong {
            self.sum_owner[ctx.add(x, y)] = NONE;
        }
        self.unused.insert(x);
        self.unused.insert(y);
        self.pairs -= 1;
    }
}

fn climb(
    ctx: &Context,
    params: &SearchParams,
    restart: u64,
    clock: &Stopwatch,
    winner: &AtomicU64,
    timed_out: &AtomicBool,
) -> ClimbOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(restart);
    let target = ctx.outside.len() / 2;
    let mut st = State::new(ctx);
    let mut best = 0usize;
    let mut stall = 0u64;
    let mut iterations = 0u64;
    let strong = ctx.mode == Mode::Strong;
    let abandon = |iterations: u64| ClimbOutcome {
        pairs: None,
        iterations,
    };

    while st.pairs < target {
        iterations += 1;
        if iterations % 256 == 0 {
            if winner.load(Ordering::Relaxed) < restart || timed_out.load(Ordering::Relaxed) {
                return abandon(iterations);
            }
            if clock.elapsed() > params.time_budget {
                timed_out.store(true, Ordering::Relaxed);
                return abandon(iterations);
            }
        }
        let x = st.unused.sample(&mut rng);
        let d = st.free_classes.sample(&mut rng);
        let ok = |y: usize| y != x && !ctx.in_h[y] && !(strong && ctx.in_h[ctx.add(x, y)]);
        let (a, b) = (ctx.add(x, d), ctx.sub(x, d));
        let (a, b) = if rng.random::<bool>() { (a, b) } else { (b, a) };
        let y = if ok(a) { Some(a) } else if ok(b) { Some(b) } else { None };
        if let Some(y) = y {
            let holder = st.partner[y];
            let sum_owner = if strong { st.sum_owner[ctx.add(x, y)] } else { NONE };
            // Evicting two different pairs would lose ground; such moves are skipped.
            let two = holder != NONE && sum_owner != NONE && sum_owner != y && sum_owner != holder;
            if !two {
                if holder != NONE {
                    st.remove_pair(ctx, y);
                } else if sum_owner != NONE {
                    st.remove_pair(ctx, sum_owner);
                }
                st.add_pair(ctx, x, y);
            }
        }
        if st.pairs > best {
            best = st.pairs;
            stall = 0;
        } else {
            stall += 1;
            if stall > params.max_iterations {
                return abandon(iterations);
            }
        }
    }
    let pairs = ctx
        .outside
        .iter()
        .filter(|&&x| st.partner[x] > x)
        .map(|&x| (x, st.partner[x]))
        .collect();
    ClimbOutcome {
        pairs: Some(pairs),
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::write_starter;
    use crate::group::Group;

    fn sub(n: u32, h: usize) -> Subgroup {
        Group::cyclic(n).unwrap().cyclic_subgroup(h).unwrap()
    }

    #[test]
    fn finds_small_strong_starters() {
        for (n, h) in [(7, 1), (10, 2), (20, 4), (35, 5), (40, 8)] {
            let r = hill_climb(&sub(n, h), &SearchParams::default()).unwrap();
            let s = r.outcome.found().unwrap_or_else(|| panic!("Z{n} \\ {h}: {}", r.summary()));
            assert!(s.is_strong());
        }
    }

    #[test]
    fn frame_mode() {
        let params = SearchParams::default().with_mode(Mode::Frame);
        let r = hill_climb(&sub(16, 2), &params).unwrap();
        assert!(r.outcome.found().is_some());
    }

    #[test]
    fn deterministic() {
        let p = SearchParams::default().with_seed(42);
        let a = hill_climb(&sub(30, 6), &p).unwrap();
        let b = hill_climb(&sub(30, 6), &p).unwrap();
        assert_eq!(a.summary(), b.summary());
        assert_eq!(
            write_starter(a.outcome.found().unwrap()),
            write_starter(b.outcome.found().unwrap())
        );
    }

    #[test]
    fn rejects_ruled_out_inputs() {
        assert!(matches!(
            hill_climb(&sub(15, 3), &SearchParams::default()),
            Err(Error::Precondition(_))
        ));
        let p = SearchParams {
            allow_infeasible: true,
            max_restarts: 3,
            max_iterations: 2_000,
            ..SearchParams::default()
        };
        let r = hill_climb(&sub(15, 3), &p).unwrap();
        assert_eq!(r.outcome, Outcome::Exhausted);
        assert_eq!(r.restarts, 3);
    }
}
