//! Frame starters and their verification predicates.
//!
//! A frame starter in `G \ H` is a set of `(g - h) / 2` unordered pairs whose
//! members partition `G \ H` and whose differences `±(x - y)` also partition
//! `G \ H`. It is *strong* when the pair sums are distinct and avoid `H`. Two frame
//! starters are *orthogonal* when, after matching pairs by difference, the
//! translates carrying one onto the other (the adder) are distinct and avoid `H`.
//!
//! Verification never stops at the first problem: a [`VerificationReport`] lists
//! every violation found.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{Element, Group, Subgroup};

/// A pair as cited in a report: its position in the pair list and its members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRef {
    pub index: usize,
    pub x: Element,
    pub y: Element,
}

impl fmt::Display for PairRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} {{{},{}}}", self.index + 1, self.x, self.y)
    }
}

fn list(refs: &[PairRef]) -> String {
    refs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongPairCount { expected: usize, found: usize },
    ElementInSubgroup { element: Element, pair: PairRef },
    RepeatedElement { element: Element, pairs: Vec<PairRef> },
    MissingElement { element: Element },
    DifferenceInSubgroup { difference: Element, pair: PairRef },
    RepeatedDifference { difference: Element, pairs: Vec<PairRef> },
    MissingDifference { difference: Element },
    SumInSubgroup { sum: Element, pair: PairRef },
    SumCollision { sum: Element, pairs: Vec<PairRef> },
    ContextMismatch { detail: String },
    UnmatchedDifference { difference: Element, pair: PairRef },
    AdderInSubgroup { translate: Element, pair: PairRef },
    AdderCollision { translate: Element, pairs: Vec<PairRef> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            WrongPairCount { expected, found } => {
                write!(f, "wrong pair count: expected {expected}, found {found}")
            }
            ElementInSubgroup { element, pair } => {
                write!(f, "element {element} lies in the subgroup ({pair})")
            }
            RepeatedElement { element, pairs } => {
                write!(f, "repeated element {element} ({})", list(pairs))
            }
            MissingElement { element } => write!(f, "missing element {element}"),
            DifferenceInSubgroup { difference, pair } => {
                write!(f, "difference {difference} lies in the subgroup ({pair})")
            }
            RepeatedDifference { difference, pairs } => {
                write!(f, "repeated difference {difference} ({})", list(pairs))
            }
            MissingDifference { difference } => write!(f, "missing difference {difference}"),
            SumInSubgroup { sum, pair } => write!(f, "sum {sum} lies in the subgroup ({pair})"),
            SumCollision { sum, pairs } => write!(f, "sum collision {sum} ({})", list(pairs)),
            ContextMismatch { detail } => write!(f, "context mismatch: {detail}"),
            UnmatchedDifference { difference, pair } => {
                write!(f, "no pair with difference ±{difference} to match ({pair})")
            }
            AdderInSubgroup { translate, pair } => {
                write!(f, "adder entry {translate} lies in the subgroup ({pair})")
            }
            AdderCollision { translate, pairs } => {
                write!(f, "adder collision {translate} ({})", list(pairs))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn extend(&mut self, other: VerificationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

struct IndexedPairs<'a> {
    g: &'a Group,
    pairs: &'a [(usize, usize)],
}

impl IndexedPairs<'_> {
    fn pair_ref(&self, i: usize) -> PairRef {
        let (x, y) = self.pairs[i];
        PairRef {
            index: i,
            x: self.g.element_at(x),
            y: self.g.element_at(y),
        }
    }

    fn refs(&self, idx: &[usize]) -> Vec<PairRef> {
        idx.iter().map(|&i| self.pair_ref(i)).collect()
    }
}

/// Checks both partition properties of a frame starter in `G \ H`.
pub fn verify_frame_starter(h: &Subgroup, pairs: &[(Element, Element)]) -> Result<VerificationReport> {
    let idx = to_indices(h.parent(), pairs)?;
    Ok(frame_report(h, &idx))
}

/// Frame checks followed by the strong-starter sum checks.
pub fn verify_strong(h: &Subgroup, pairs: &[(Element, Element)]) -> Result<VerificationReport> {
    let idx = to_indices(h.parent(), pairs)?;
    let mut report = frame_report(h, &idx);
    report.extend(sum_report(h, &idx));
    Ok(report)
}

fn to_indices(g: &Group, pairs: &[(Element, Element)]) -> Result<Vec<(usize, usize)>> {
    pairs
        .iter()
        .map(|(x, y)| {
            g.element(x.coords())?;
            g.element(y.coords())?;
            Ok((g.index_of(x), g.index_of(y)))
        })
        .collect()
}

pub(crate) fn frame_report(h: &Subgroup, pairs: &[(usize, usize)]) -> VerificationReport {
    let g = h.parent();
    let ip = IndexedPairs { g, pairs };
    let mut out = Vec::new();
    let expected = (g.order() - h.order()) / 2;
    if pairs.len() != expected || (g.order() - h.order()) % 2 == 1 {
        out.push(Violation::WrongPairCount {
            expected,
            found: pairs.len(),
        });
    }

    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.order()];
    let mut diffs: Vec<Vec<usize>> = vec![Vec::new(); g.order()];
    for (i, &(x, y)) in pairs.iter().enumerate() {
        holders[x].push(i);
        holders[y].push(i);
        diffs[g.sub_idx(x, y)].push(i);
        diffs[g.sub_idx(y, x)].push(i);
    }

    for (i, &(x, y)) in pairs.iter().enumerate() {
        for z in [x, y] {
            if h.contains_idx(z) {
                out.push(Violation::ElementInSubgroup {
                    element: g.element_at(z),
                    pair: ip.pair_ref(i),
                });
            }
        }
    }
    for (z, who) in holders.iter().enumerate() {
        if who.len() > 1 {
            out.push(Violation::RepeatedElement {
                element: g.element_at(z),
                pairs: ip.refs(who),
            });
        } else if who.is_empty() && !h.contains_idx(z) {
            out.push(Violation::MissingElement {
                element: g.element_at(z),
            });
        }
    }

    for (i, &(x, y)) in pairs.iter().enumerate() {
        let d = g.sub_idx(x, y);
        if h.contains_idx(d) {
            out.push(Violation::DifferenceInSubgroup {
                difference: g.element_at(d),
                pair: ip.pair_ref(i),
            });
        }
    }
    for (d, who) in diffs.iter().enumerate() {
        if h.contains_idx(d) {
            continue;
        }
        if who.len() > 1 {
            out.push(Violation::RepeatedDifference {
                difference: g.element_at(d),
                pairs: ip.refs(who),
            });
        } else if who.is_empty() {
            out.push(Violation::MissingDifference {
                difference: g.element_at(d),
            });
        }
    }
    VerificationReport { violations: out }
}

pub(crate) fn sum_report(h: &Subgroup, pairs: &[(usize, usize)]) -> VerificationReport {
    let g = h.parent();
    let ip = IndexedPairs { g, pairs };
    let mut out = Vec::new();
    let mut sums: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &(x, y)) in pairs.iter().enumerate() {
        let s = g.add_idx(x, y);
        if h.contains_idx(s) {
            out.push(Violation::SumInSubgroup {
                sum: g.element_at(s),
                pair: ip.pair_ref(i),
            });
        }
        sums.entry(s).or_default().push(i);
    }
    for (s, who) in sums {
        if who.len() > 1 {
            out.push(Violation::SumCollision {
                sum: g.element_at(s),
                pairs: ip.refs(&who),
            });
        }
    }
    VerificationReport { violations: out }
}

/// A verified frame starter in `G \ H` of type `h^(g/h)`.
///
/// Pairs keep their input order, each stored with the lexicographically smaller
/// element first. Equality compares the pair sets, not their order.
#[derive(Clone, Debug)]
pub struct FrameStarter {
    subgroup: Subgroup,
    pairs: Vec<(usize, usize)>,
}

impl PartialEq for FrameStarter {
    fn eq(&self, other: &Self) -> bool {
        let sorted = |s: &Self| {
            let mut p = s.pairs.clone();
            p.sort_unstable();
            p
        };
        self.subgroup.parent() == other.subgroup.parent()
            && self.subgroup.indices() == other.subgroup.indices()
            && sorted(self) == sorted(other)
    }
}

impl Eq for FrameStarter {}

fn orient((x, y): (usize, usize)) -> (usize, usize) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

impl FrameStarter {
    /// Verifies the pairs and wraps them; fails with the full report otherwise.
    pub fn new(subgroup: &Subgroup, pairs: &[(Element, Element)]) -> Result<Self> {
        let idx = to_indices(subgroup.parent(), pairs)?;
        Self::from_indices(subgroup, idx)
    }

    pub fn from_indices(subgroup: &Subgroup, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let report = frame_report(subgroup, &pairs);
        if !report.is_valid() {
            return Err(Error::Invalid(report));
        }
        Ok(Self::from_valid_indices(subgroup, pairs))
    }

    pub(crate) fn from_valid_indices(subgroup: &Subgroup, pairs: Vec<(usize, usize)>) -> Self {
        let pairs: Vec<_> = pairs.into_iter().map(orient).collect();
        debug_assert!(frame_report(subgroup, &pairs).is_valid());
        FrameStarter {
            subgroup: subgroup.clone(),
            pairs,
        }
    }

    pub fn group(&self) -> &Group {
        self.subgroup.parent()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `(h, g/h)` of the type `h^(g/h)`.
    pub fn type_signature(&self) -> (usize, usize) {
        (self.subgroup.order(), self.subgroup.index())
    }

    pub fn pair_indices(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pairs(&self) -> Vec<(Element, Element)> {
        let g = self.group();
        self.pairs
            .iter()
            .map(|&(x, y)| (g.element_at(x), g.element_at(y)))
            .collect()
    }

    pub fn sums(&self) -> Vec<Element> {
        let g = self.group();
        self.pairs.iter().map(|&(x, y)| g.element_at(g.add_idx(x, y))).collect()
    }

    pub fn strong_report(&self) -> VerificationReport {
        sum_report(&self.subgroup, &self.pairs)
    }

    pub fn is_strong(&self) -> bool {
        self.strong_report().is_valid()
    }

    /// `{{-x, -y}}`; again a frame starter in `G \ H`.
    pub fn negate(&self) -> FrameStarter {
        let g = self.group();
        let pairs = self
            .pairs
            .iter()
            .map(|&(x, y)| orient((g.neg_idx(x), g.neg_idx(y))))
            .collect();
        FrameStarter {
            subgroup: self.subgroup.clone(),
            pairs,
        }
    }

    /// Same pairs, reordered lexicographically.
    pub fn sorted(&self) -> FrameStarter {
        let mut pairs = self.pairs.clone();
        pairs.sort_unstable();
        FrameStarter {
            subgroup: self.subgroup.clone(),
            pairs,
        }
    }
}

/// One row of a difference matching: `S1`'s pair `(x, y)` and `S2`'s pair
/// `(u, v)` oriented so that `y - x = v - u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedRow {
    pub first: usize,
    pub second: usize,
    pub first_pair: (usize, usize),
    pub second_pair: (usize, usize),
}

fn same_context(s1: &FrameStarter, s2: &FrameStarter) -> Result<(), VerificationReport> {
    if s1.group() != s2.group() || s1.subgroup.indices() != s2.subgroup.indices() {
        return Err(VerificationReport {
            violations: vec![Violation::ContextMismatch {
                detail: format!(
                    "{} \\ {} vs {} \\ {}",
                    s1.group(),
                    s1.subgroup,
                    s2.group(),
                    s2.subgroup
                ),
            }],
        });
    }
    Ok(())
}

/// Pairs each pair of `s1` (in its stored orientation) with the pair of `s2`
/// realizing the same difference.
pub fn match_by_differences(
    s1: &FrameStarter,
    s2: &FrameStarter,
) -> Result<Vec<MatchedRow>, VerificationReport> {
    same_context(s1, s2)?;
    let g = s1.group();
    let mut by_diff: BTreeMap<usize, (usize, (usize, usize))> = BTreeMap::new();
    for (j, &(u, v)) in s2.pairs.iter().enumerate() {
        by_diff.insert(g.sub_idx(v, u), (j, (u, v)));
        by_diff.insert(g.sub_idx(u, v), (j, (v, u)));
    }
    let ip = IndexedPairs { g, pairs: &s1.pairs };
    let mut rows = Vec::with_capacity(s1.len());
    let mut missing = Vec::new();
    for (i, &(x, y)) in s1.pairs.iter().enumerate() {
        let d = g.sub_idx(y, x);
        match by_diff.get(&d) {
            Some(&(j, uv)) => rows.push(MatchedRow {
                first: i,
                second: j,
                first_pair: (x, y),
                second_pair: uv,
            }),
            None => missing.push(Violation::UnmatchedDifference {
                difference: g.element_at(d),
                pair: ip.pair_ref(i),
            }),
        }
    }
    if !missing.is_empty() {
        return Err(VerificationReport { violations: missing });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdderRow {
    pub first_pair: (Element, Element),
    pub translate: Element,
    pub second_pair: (Element, Element),
}

/// The translates carrying the pairs of one starter onto the difference-matched
/// pairs of another: `(x, y) + a = (u, v)`, listed in the first starter's order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adder {
    pub rows: Vec<AdderRow>,
}

impl Adder {
    pub fn values(&self) -> Vec<Element> {
        self.rows.iter().map(|r| r.translate.clone()).collect()
    }
}

/// The adder of `s1` and `s2`, or the report of why they are not orthogonal.
///
/// With rows oriented so that `y - x = v - u`, the entry is `a = v - y = u - x`.
/// Reversing both orientations leaves `a` unchanged, so the values do not depend
/// on how `s1`'s pairs are stored.
pub fn compute_adder(s1: &FrameStarter, s2: &FrameStarter) -> Result<Adder, VerificationReport> {
    let rows = match_by_differences(s1, s2)?;
    let g = s1.group();
    let h = &s1.subgroup;
    let ip = IndexedPairs { g, pairs: &s1.pairs };
    let mut out = Vec::new();
    let mut seen: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let translates: Vec<usize> = rows
        .iter()
        .map(|r| g.sub_idx(r.second_pair.1, r.first_pair.1))
        .collect();
    for (r, &a) in rows.iter().zip(&translates) {
        if h.contains_idx(a) {
            out.push(Violation::AdderInSubgroup {
                translate: g.element_at(a),
                pair: ip.pair_ref(r.first),
            });
        }
        seen.entry(a).or_default().push(r.first);
    }
    for (a, who) in seen {
        if who.len() > 1 {
            out.push(Violation::AdderCollision {
                translate: g.element_at(a),
                pairs: ip.refs(&who),
            });
        }
    }
    if !out.is_empty() {
        return Err(VerificationReport { violations: out });
    }
    Ok(Adder {
        rows: rows
            .iter()
            .zip(translates)
            .map(|(r, a)| AdderRow {
                first_pair: (g.element_at(r.first_pair.0), g.element_at(r.first_pair.1)),
                translate: g.element_at(a),
                second_pair: (g.element_at(r.second_pair.0), g.element_at(r.second_pair.1)),
            })
            .collect(),
    })
}

pub fn orthogonality_report(s1: &FrameStarter, s2: &FrameStarter) -> VerificationReport {
    match compute_adder(s1, s2) {
        Ok(_) => VerificationReport::default(),
        Err(r) => r,
    }
}

pub fn are_orthogonal(s1: &FrameStarter, s2: &FrameStarter) -> bool {
    compute_adder(s1, s2).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: u32, h: usize) -> Subgroup {
        Group::cyclic(n).unwrap().cyclic_subgroup(h).unwrap()
    }

    fn pairs(list: &[(u32, u32)]) -> Vec<(Element, Element)> {
        list.iter()
            .map(|&(x, y)| (Element::from_coords(vec![x]), Element::from_coords(vec![y])))
            .collect()
    }

    fn starter(n: u32, h: usize, list: &[(u32, u32)]) -> FrameStarter {
        FrameStarter::new(&cyc(n, h), &pairs(list)).unwrap()
    }

    const Z10: &[(u32, u32)] = &[(3, 4), (7, 9), (8, 1), (2, 6)];
    const Z15_S1: &[(u32, u32)] = &[(1, 2), (9, 11), (3, 6), (8, 12), (13, 4), (7, 14)];
    const Z15_S2: &[(u32, u32)] = &[(2, 3), (11, 13), (9, 12), (4, 8), (1, 7), (14, 6)];

    /// Independent oracle: both multisets equal G \ H, by sorting.
    fn multiset_oracle(n: u32, h: usize, list: &[(u32, u32)]) -> bool {
        let step = n / h as u32;
        let mut expect: Vec<u32> = (0..n).filter(|x| x % step != 0).collect();
        expect.sort();
        let mut members: Vec<u32> = list.iter().flat_map(|&(x, y)| [x, y]).collect();
        members.sort();
        let mut diffs: Vec<u32> = list
            .iter()
            .flat_map(|&(x, y)| [(x + n - y) % n, (y + n - x) % n])
            .collect();
        diffs.sort();
        members == expect && diffs == expect
    }

    #[test]
    fn verifies_known_starters() {
        let r = verify_frame_starter(&cyc(10, 2), &pairs(Z10)).unwrap();
        assert!(r.is_valid(), "{r}");
        assert!(verify_frame_starter(&cyc(15, 3), &pairs(Z15_S1)).unwrap().is_valid());
        assert!(multiset_oracle(10, 2, Z10));
        assert!(multiset_oracle(15, 3, Z15_S1));
    }

    #[test]
    fn reports_every_violation() {
        let bad = [(3, 4), (7, 9), (8, 1), (2, 7)];
        assert!(!multiset_oracle(10, 2, &bad));
        let r = verify_frame_starter(&cyc(10, 2), &pairs(&bad)).unwrap();
        let text = r.to_string();
        assert!(text.contains("repeated element 7 (#2 {7,9}, #4 {2,7})"), "{text}");
        assert!(text.contains("missing element 6"), "{text}");
        // {2,7} has difference 5 in H
        assert!(text.contains("difference 5 lies in the subgroup"), "{text}");
    }

    #[test]
    fn strongness() {
        let s = starter(10, 2, Z10);
        assert!(s.is_strong());
        let mut sums: Vec<_> = s.sums().iter().map(|e| e.coords()[0]).collect();
        sums.sort();
        assert_eq!(sums, vec![6, 7, 8, 9]);
        let patterned = starter(7, 1, &[(1, 6), (2, 5), (3, 4)]);
        assert!(!patterned.is_strong());
        assert_eq!(patterned.strong_report().violations.len(), 4);
    }

    #[test]
    fn negation() {
        let s = starter(10, 2, Z10);
        assert_eq!(s.negate(), starter(10, 2, &[(7, 6), (3, 1), (2, 9), (8, 4)]));
        let p = starter(7, 1, &[(1, 6), (2, 5), (3, 4)]);
        assert_eq!(p.negate(), p);
        let s = starter(7, 1, &[(2, 3), (5, 1), (6, 4)]);
        assert_eq!(s.negate(), starter(7, 1, &[(5, 4), (2, 6), (1, 3)]));
    }

    #[test]
    fn adder_of_orthogonal_pair() {
        let s1 = starter(15, 3, Z15_S1);
        let s2 = starter(15, 3, Z15_S2);
        let rows = match_by_differences(&s1, &s2).unwrap();
        assert_eq!(rows.iter().map(|r| r.second).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4, 5]);
        let adder = compute_adder(&s1, &s2).unwrap();
        let values: Vec<u32> = adder.values().iter().map(|e| e.coords()[0]).collect();
        assert_eq!(values, vec![1, 2, 6, 11, 3, 7]);
        assert!(are_orthogonal(&s2, &s1));
    }

    #[test]
    fn self_is_never_orthogonal() {
        let s = starter(15, 3, Z15_S1);
        let rows = match_by_differences(&s, &s).unwrap();
        assert!(rows.iter().all(|r| r.first == r.second));
        let err = compute_adder(&s, &s).unwrap_err();
        assert!(err
            .violations
            .iter()
            .any(|v| matches!(v, Violation::AdderInSubgroup { .. })));
        assert!(!are_orthogonal(&s, &s));
    }

    #[test]
    fn strong_iff_orthogonal_to_negation() {
        let s = starter(10, 2, Z10);
        let neg = s.negate();
        let rows = match_by_differences(&s, &neg).unwrap();
        // orientation flips: (x, y) matches (-y, -x)
        assert!(rows.iter().all(|r| r.second_pair.0 != s.group().neg_idx(r.first_pair.0)));
        assert!(are_orthogonal(&s, &neg));
        let p = starter(7, 1, &[(1, 6), (2, 5), (3, 4)]);
        assert!(!are_orthogonal(&p, &p.negate()));
    }

    #[test]
    fn context_mismatch() {
        let a = starter(10, 2, Z10);
        let b = starter(15, 3, Z15_S1);
        assert!(matches!(
            match_by_differences(&a, &b).unwrap_err().violations[0],
            Violation::ContextMismatch { .. }
        ));
    }
}
