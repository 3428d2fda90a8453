use std::time::Duration;

use framestarter::construct::{mult_construction, patterned_starter, Scm};
use framestarter::feasibility::{frame_obstructions, strong_obstructions};
use framestarter::format::{parse_starter_file, write_starter};
use framestarter::search::{exhaustive, find_orthogonal_mate, hill_climb, MateBudget};
use framestarter::starter::{are_orthogonal, compute_adder};
use framestarter::{FrameStarter, Group, Mode, SearchParams, Subgroup};
use proptest::prelude::*;

/// Cyclic cases with a frame starter, by the elementary conditions and Anderson.
fn frame_cases() -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for n in 7..=40u32 {
        for h in (1..=n as usize / 4).filter(|h| n as usize % h == 0) {
            let sub = Group::cyclic(n).unwrap().cyclic_subgroup(h).unwrap();
            if frame_obstructions(&sub).is_empty() {
                out.push((n, h));
            }
        }
    }
    out
}

fn climb(n: u32, h: usize, mode: Mode, seed: u64) -> Option<FrameStarter> {
    let sub = Group::cyclic(n).unwrap().cyclic_subgroup(h).unwrap();
    if mode == Mode::Strong && !strong_obstructions(&sub).is_empty() {
        return None;
    }
    let p = SearchParams::default()
        .with_seed(seed)
        .with_mode(mode)
        .with_budget(Duration::from_secs(20));
    hill_climb(&sub, &p).unwrap().outcome.found().cloned()
}

fn case() -> impl Strategy<Value = ((u32, usize), u64)> {
    (prop::sample::select(frame_cases()), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn written_files_reparse_identically(((n, h), seed) in case()) {
        let s = climb(n, h, Mode::Frame, seed).expect("frame starters exist here");
        let text = write_starter(&s);
        let back = parse_starter_file(&text).unwrap().to_starter().unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(write_starter(&back), text);
    }

    #[test]
    fn strong_iff_orthogonal_to_negation(((n, h), seed) in case()) {
        let s = climb(n, h, Mode::Frame, seed).unwrap();
        prop_assert_eq!(s.is_strong(), are_orthogonal(&s, &s.negate()));
        prop_assert_eq!(s.negate().negate(), s);
    }

    #[test]
    fn adder_translates_rows(((n, h), seed) in case()) {
        if let Some(s) = climb(n, h, Mode::Strong, seed) {
            let t = s.negate();
            let adder = compute_adder(&s, &t).unwrap();
            let g = s.group();
            for row in &adder.rows {
                let moved = (g.add(&row.first_pair.0, &row.translate).unwrap(), g.add(&row.first_pair.1, &row.translate).unwrap());
                prop_assert_eq!(&moved, &row.second_pair);
                prop_assert!(!s.subgroup().contains(&row.translate));
            }
            let mut values = adder.values();
            values.sort();
            values.dedup();
            prop_assert_eq!(values.len(), s.len());
        }
    }

    #[test]
    fn mult_keeps_strongness(((n, h), seed) in case(), q in prop::sample::select(vec!["double:Z(5)", "double:Z(7)", "gf:4:x", "gf:9:x"])) {
        if let Some(s) = climb(n, h, Mode::Strong, seed) {
            let phi = Scm::from_spec(q).unwrap();
            let m = mult_construction(&s, &phi).unwrap();
            prop_assert!(m.is_strong());
            prop_assert_eq!(m.type_signature(), (h * phi.group().order(), n as usize / h));
        }
    }

    #[test]
    fn mates_are_orthogonal(seed in any::<u64>()) {
        let s = climb(15, 3, Mode::Frame, seed).unwrap();
        let r = find_orthogonal_mate(&s, &MateBudget::unlimited()).unwrap();
        if let Some(t) = r.outcome.found() {
            prop_assert!(are_orthogonal(&s, t));
        }
    }
}

#[test]
fn hill_climbing_reaches_what_exhaustive_search_finds() {
    let mut groups: Vec<Subgroup> = Vec::new();
    for n in 7..=24u32 {
        let g = Group::cyclic(n).unwrap();
        for h in (1..=n as usize / 4).filter(|h| n as usize % h == 0) {
            groups.push(g.cyclic_subgroup(h).unwrap());
        }
    }
    for f in [[2u32, 8], [4, 4], [2, 10], [3, 6]] {
        groups.extend(Group::new(&f).unwrap().all_subgroups());
    }
    for h in groups.iter().filter(|h| h.parent().order() >= 4 * h.order()) {
        let exact = exhaustive(h, Mode::Strong).unwrap();
        let Some(_) = exact.outcome.found() else { continue };
        for seed in 0..5 {
            let p = SearchParams::default().with_seed(seed).with_budget(Duration::from_secs(20));
            let r = hill_climb(h, &p).unwrap_or_else(|e| panic!("{} \\ {h}: {e}", h.parent()));
            assert!(r.outcome.found().is_some(), "{} \\ {h} seed {seed}: {}", h.parent(), r.summary());
        }
    }
}

#[test]
fn patterned_starters_exist_exactly_when_all_orders_are_odd() {
    for n in 3..=30u32 {
        let g = Group::cyclic(n).unwrap();
        for h in g.all_subgroups() {
            let odd = (0..g.order()).all(|x| h.contains_idx(x) || g.element_order_idx(x) % 2 == 1);
            assert_eq!(patterned_starter(&h).is_ok(), odd, "Z{n} \\ {h}");
        }
    }
}
