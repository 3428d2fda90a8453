//! Nonexistence rules, known existence families, and the cyclic-group classifier.
//!
//! Each predicate tests exactly the hypotheses of the corresponding result and
//! nothing more; inputs outside every rule are reported as open.

use std::fmt;
use std::time::Duration;

use crate::arith::{factorize, is_prime, is_squarefree, prime_power};
use crate::error::{Error, Result};
use crate::group::{Group, Subgroup};
use crate::search::{self, MateBudget, Mode, Outcome, SearchParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictKind {
    /// No frame starter exists.
    FrameImpossible,
    /// No pair of orthogonal frame starters exists (so no strong one either).
    OrthPairImpossible,
    /// No strong frame starter exists.
    StrongImpossible,
    /// A strong frame starter is known to exist.
    KnownExists,
    Open,
}

impl VerdictKind {
    pub fn label(self) -> &'static str {
        match self {
            VerdictKind::FrameImpossible => "frame-impossible",
            VerdictKind::OrthPairImpossible => "orth-pair-impossible",
            VerdictKind::StrongImpossible => "strong-impossible",
            VerdictKind::KnownExists => "known-exists",
            VerdictKind::Open => "open",
        }
    }

    /// True for every kind that rules out a strong frame starter.
    pub fn excludes_strong(self) -> bool {
        matches!(
            self,
            VerdictKind::FrameImpossible | VerdictKind::OrthPairImpossible | VerdictKind::StrongImpossible
        )
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reason {
    pub rule: &'static str,
    pub citation: String,
}

impl Reason {
    fn new(rule: &'static str, citation: impl Into<String>) -> Self {
        Reason {
            rule,
            citation: citation.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub reasons: Vec<Reason>,
    pub notes: Vec<String>,
}

impl Verdict {
    fn open() -> Self {
        Verdict {
            kind: VerdictKind::Open,
            reasons: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.reasons.iter().any(|r| r.rule == rule)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verdict: {}", self.kind)?;
        for r in &self.reasons {
            write!(f, "\n  [{}] {}", r.rule, r.citation)?;
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

fn orders(h: &Subgroup) -> (u64, u64) {
    (h.parent().order() as u64, h.order() as u64)
}

/// The three necessary conditions every frame starter obeys, each failed clause
/// reported separately.
pub fn elementary_reasons(h: &Subgroup) -> Vec<Reason> {
    let g = h.parent();
    let (go, ho) = orders(h);
    let mut out = Vec::new();
    if (go - ho) % 2 == 1 {
        out.push(Reason::new(
            "parity",
            format!("g - h = {} is odd, so G \\ H cannot be split into pairs", go - ho),
        ));
    }
    if let Some(x) = (0..g.order()).find(|&x| !h.contains_idx(x) && g.element_order_idx(x) == 2) {
        out.push(Reason::new(
            "involution",
            format!(
                "G \\ H contains {} of order 2, a difference that would occur twice",
                g.element_at(x)
            ),
        ));
    }
    if go < 4 * ho {
        out.push(Reason::new(
            "index",
            format!("g = {go} < 4h = {}: a frame starter needs g >= 4h", 4 * ho),
        ));
    }
    out
}

pub fn elementary_feasible(h: &Subgroup) -> Verdict {
    let reasons = elementary_reasons(h);
    Verdict {
        kind: if reasons.is_empty() {
            VerdictKind::Open
        } else {
            VerdictKind::FrameImpossible
        },
        reasons,
        notes: Vec::new(),
    }
}

/// `|G| = 2u`, `|H| = 2t`, `t` odd and `u/t ≡ 2, 3 (mod 4)`.
pub fn anderson_rules_out_frame(h: &Subgroup) -> bool {
    let (g, h) = orders(h);
    g % 2 == 0 && h % 2 == 0 && (h / 2) % 2 == 1 && matches!((g / h) % 4, 2 | 3)
}

/// `|H| = t` odd and `|G| = 5t`.
pub fn strong_rules_out_5h(h: &Subgroup) -> bool {
    let (g, h) = orders(h);
    h % 2 == 1 && g == 5 * h
}

/// `|G| = 4t`, `|H| = t` even and `G/H ≅ Z4`.
pub fn strong_rules_out_z4_quotient(h: &Subgroup) -> bool {
    let (g, ho) = orders(h);
    g == 4 * ho && ho % 2 == 0 && h.quotient().structure().factors() == [4]
}

/// `|G| = 6|H|`.
pub fn strong_rules_out_6h(h: &Subgroup) -> bool {
    let (g, h) = orders(h);
    g == 6 * h
}

/// `|G| = 4t`, `|H| = t ≡ 2 (mod 4)`, and `G` cyclic or `t` squarefree.
pub fn orth_rules_out_4t(h: &Subgroup) -> bool {
    let (g, t) = orders(h);
    g == 4 * t && t % 4 == 2 && (h.parent().is_cyclic() || is_squarefree(t))
}

fn is_z9_exception(h: &Subgroup) -> bool {
    h.parent().factors() == [9] && h.is_trivial()
}

/// Rules that exclude every frame starter.
pub fn frame_obstructions(h: &Subgroup) -> Vec<Reason> {
    let mut out = elementary_reasons(h);
    if anderson_rules_out_frame(h) {
        let (g, ho) = orders(h);
        out.push(Reason::new(
            "anderson",
            format!(
                "Anderson: |G| = 2u, |H| = 2t with t = {} odd and u/t = {} ≡ {} (mod 4) admit no frame starter",
                ho / 2,
                g / ho,
                (g / ho) % 4
            ),
        ));
    }
    out
}

/// Rules that exclude strong frame starters (including the orthogonal-pair rule).
pub fn strong_obstructions(h: &Subgroup) -> Vec<Reason> {
    let mut out = Vec::new();
    let (g, ho) = orders(h);
    if orth_rules_out_4t(h) {
        out.push(Reason::new(
            "orth-4t",
            format!(
                "|G| = 4t, |H| = t = {ho} ≡ 2 (mod 4){}: no pair of orthogonal frame starters, hence no strong one",
                if h.parent().is_cyclic() { ", G cyclic" } else { ", t squarefree" }
            ),
        ));
    }
    if strong_rules_out_5h(h) {
        out.push(Reason::new(
            "strong-5h",
            format!("|G| = 5|H| with |H| = {ho} odd: no strong frame starter"),
        ));
    }
    if strong_rules_out_z4_quotient(h) {
        out.push(Reason::new(
            "strong-z4",
            format!("|G| = 4|H| with |H| = {ho} even and G/H ≅ Z4: no strong frame starter"),
        ));
    }
    if strong_rules_out_6h(h) {
        out.push(Reason::new(
            "strong-6h",
            format!("|G| = 6|H| = {g}: no strong frame starter"),
        ));
    }
    if is_z9_exception(h) {
        out.push(Reason::new("z9", "there is no strong starter in Z9 (well known)"));
    }
    out
}

/// Every element of `G \ H` has odd order, so `{{x, -x}}` is a frame starter
/// (Wang).
pub fn patterned_applies(h: &Subgroup) -> bool {
    let g = h.parent();
    (0..g.order()).all(|x| h.contains_idx(x) || g.element_order_idx(x) % 2 == 1)
}

/// `G = Z_2n`, `H = {0, n}` with `n ≡ 0, 1 (mod 4)`: a frame starter exists (Rosa).
pub fn rosa_applies(h: &Subgroup) -> bool {
    let (g, ho) = orders(h);
    h.parent().is_cyclic() && ho == 2 && g % 2 == 0 && matches!((g / 2) % 4, 0 | 1) && g >= 8
}

/// `G = Z_2n`, `H = {0, n}`, `n > 1` with every prime factor `≡ 1 (mod 4)`: a
/// strong frame starter exists (Wang).
pub fn wang_strong_applies(h: &Subgroup) -> bool {
    let (g, ho) = orders(h);
    let n = g / 2;
    h.parent().is_cyclic() && ho == 2 && n > 1 && factorize(n).iter().all(|&(p, _)| p % 4 == 1)
}

/// `G ≅ F_q × (Z_2)^t`, `H = {0} × (Z_2)^t`, `q ≡ 1 (mod 4)`, `t ≥ 1`.
pub fn fq_z2_family_applies(h: &Subgroup) -> bool {
    let (g, ho) = orders(h);
    let Some((2, _)) = prime_power(ho) else {
        return false;
    };
    let q = g / ho;
    let Some((p, _)) = prime_power(q) else {
        return false;
    };
    let grp = h.parent();
    // H elementary abelian, the whole Sylow 2-subgroup; G/H elementary abelian of odd order
    p != 2
        && q % 4 == 1
        && h.indices().iter().all(|&x| grp.element_order_idx(x) <= 2)
        && h.quotient().structure().factors().iter().all(|&f| f as u64 == p)
}

/// `G ≅ Z_p × Z_3`, `H = {0} × Z_3`, `p ≡ 1 (mod 6)` prime, `p ≥ 19`.
pub fn zp_z3_family_applies(h: &Subgroup) -> bool {
    let (g, ho) = orders(h);
    let p = g / 3;
    ho == 3 && g % 3 == 0 && is_prime(p) && p % 6 == 1 && p >= 19
}

/// If `G ≅ Z_5 × G'` with `gcd(|G'|, 6) = 1`, returns `G'`: a strong starter in
/// `G'` then yields one in `G` (Horton).
pub fn horton_reduction(g: &Group) -> Option<Group> {
    let n = g.order() as u64;
    if n % 5 != 0 || n % 2 == 0 || n % 3 == 0 {
        return None;
    }
    let mut rest: Vec<u32> = g.factors().to_vec();
    let i = rest.iter().position(|&f| f % 5 == 0)?;
    rest[i] /= 5;
    let rest: Vec<u32> = rest.into_iter().filter(|&f| f > 1).collect();
    Group::new(&rest).ok()
}

/// Classification of `Z_g \ Z_h` by the elementary rules and the four conditions
/// conjectured to be the only obstructions to strong frame starters.
///
/// Returns `FrameImpossible` when `g - h` is odd or `g < 4h`, `StrongImpossible`
/// when one of the conditions holds, and `Open` with a "conjectured" reason
/// otherwise.
pub fn conjecture_classify(g: u64, h: u64) -> Result<Verdict> {
    if h == 0 || g == 0 || g % h != 0 {
        return Err(Error::invalid(format!("h = {h} must divide g = {g}")));
    }
    let mut v = Verdict::open();
    if (g - h) % 2 == 1 {
        v.reasons.push(Reason::new("parity", format!("g - h = {} is odd", g - h)));
    }
    if g < 4 * h {
        v.reasons.push(Reason::new("index", format!("g/h = {} < 4", g / h)));
    }
    if !v.reasons.is_empty() {
        v.kind = VerdictKind::FrameImpossible;
        return Ok(v);
    }
    let r = g / h;
    if h % 2 == 0 && (h / 2) % 2 == 1 && matches!(r % 4, 2 | 3) {
        v.reasons.push(Reason::new(
            "conj-parity",
            format!("h = 2t with t = {} odd and g/h = {r} ≡ {} (mod 4)", h / 2, r % 4),
        ));
    }
    if h % 2 == 1 && g == 5 * h {
        v.reasons.push(Reason::new("conj-5h", format!("h = {h} odd and g = 5h")));
    }
    if g == 4 * h || g == 6 * h {
        v.reasons.push(Reason::new("conj-4h-6h", format!("g = {r}h")));
    }
    if h == 1 && g == 9 {
        v.reasons.push(Reason::new("conj-z9", "h = 1 and g = 9"));
    }
    if v.reasons.is_empty() {
        v.reasons.push(Reason::new(
            "conjectured",
            "none of the known obstructions applies; a strong frame starter is conjectured to exist",
        ));
    } else {
        v.kind = VerdictKind::StrongImpossible;
    }
    Ok(v)
}

/// All `(h, g)` with `g ≤ g_max` that [`conjecture_classify`] leaves open.
pub fn conjectured_admissible(g_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for h in 1..=g_max {
        for g in (h..=g_max).step_by(h as usize) {
            if conjecture_classify(g, h).is_ok_and(|v| v.kind == VerdictKind::Open) {
                out.push((h, g));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Look for witnesses (hill-climbing, mate search, exhaustive search).
    pub search: bool,
    pub seed: u64,
    pub budget: Duration,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            search: true,
            seed: 0,
            budget: Duration::from_secs(5),
        }
    }
}

/// Every applicable rule, existence family and (optionally) search witness,
/// combined into the strongest supported verdict.
pub fn classify(h: &Subgroup, opts: &ClassifyOptions) -> Verdict {
    let g = h.parent();
    let mut v = Verdict::open();
    v.reasons = frame_obstructions(h);
    if !v.reasons.is_empty() {
        v.kind = VerdictKind::FrameImpossible;
        return v;
    }

    if patterned_applies(h) {
        v.notes.push("a patterned frame starter {x, -x} exists: every element of G \\ H has odd order".into());
    }
    if rosa_applies(h) {
        v.notes.push("a frame starter exists (Rosa: Z_2n \\ {0, n} with n ≡ 0, 1 mod 4)".into());
    }
    if h.is_trivial() {
        if let Some(rest) = horton_reduction(g) {
            v.notes.push(format!(
                "Horton: a strong starter in {rest} would give one in {g}"
            ));
        }
    }

    let strong = strong_obstructions(h);
    if !strong.is_empty() {
        v.kind = if strong.iter().any(|r| r.rule == "orth-4t") {
            VerdictKind::OrthPairImpossible
        } else {
            VerdictKind::StrongImpossible
        };
        v.reasons = strong;
        if opts.search && v.kind == VerdictKind::StrongImpossible {
            if let Some(note) = orthogonal_pair_witness(h, opts) {
                v.notes.push(note);
            }
        }
        return v;
    }

    if wang_strong_applies(h) {
        v.reasons.push(Reason::new(
            "family-wang",
            "Wang: Z_2n \\ {0, n} with every prime factor of n ≡ 1 (mod 4) has a strong frame starter",
        ));
    }
    if fq_z2_family_applies(h) {
        v.reasons.push(Reason::new(
            "family-fq-z2",
            "F_q × (Z_2)^t \\ {0} × (Z_2)^t with q ≡ 1 (mod 4) has a strong frame starter",
        ));
    }
    if zp_z3_family_applies(h) {
        v.reasons.push(Reason::new(
            "family-zp-z3",
            "Z_p × Z_3 \\ {0} × Z_3 with p ≡ 1 (mod 6) prime, p >= 19, has a strong frame starter",
        ));
    }
    if opts.search {
        let params = SearchParams::default()
            .with_seed(opts.seed)
            .with_budget(opts.budget);
        if let Ok(report) = search::hill_climb(h, &params) {
            if report.outcome.found().is_some() {
                v.reasons.push(Reason::new(
                    "witness",
                    format!(
                        "hill-climbing found a strong frame starter (seed {}, restart {})",
                        report.seed,
                        report.restarts - 1
                    ),
                ));
            }
        }
    }
    if !v.reasons.is_empty() {
        v.kind = VerdictKind::KnownExists;
        return v;
    }
    if opts.search && g.order() <= search::EXHAUSTIVE_STRONG_CAP {
        if let Ok(r) = search::exhaustive(h, Mode::Strong) {
            match r.outcome {
                Outcome::ProvedNone => {
                    v.kind = VerdictKind::StrongImpossible;
                    v.reasons.push(Reason::new(
                        "exhaustive",
                        "exhaustive search finds no strong frame starter",
                    ));
                    return v;
                }
                Outcome::Found(_) => {
                    v.kind = VerdictKind::KnownExists;
                    v.reasons.push(Reason::new("witness", "exhaustive search found a strong frame starter"));
                    return v;
                }
                _ => {}
            }
        }
    }
    if g.is_cyclic() {
        if let Ok(c) = conjecture_classify(g.order() as u64, h.order() as u64) {
            if c.kind == VerdictKind::Open {
                v.notes.push("conjectured to exist: none of the known obstructions applies".into());
            }
        }
    }
    v
}

/// Tries a few hill-climbed frame starters and looks for an orthogonal mate.
fn orthogonal_pair_witness(h: &Subgroup, opts: &ClassifyOptions) -> Option<String> {
    for k in 0..8u64 {
        let params = SearchParams {
            mode: Mode::Frame,
            seed: opts.seed.wrapping_add(k),
            time_budget: opts.budget,
            ..SearchParams::default()
        };
        let report = search::hill_climb(h, &params).ok()?;
        let s1 = report.outcome.found()?.clone();
        let budget = MateBudget::with_time(opts.budget / 8);
        if let Ok(m) = search::find_orthogonal_mate(&s1, &budget) {
            if m.outcome.found().is_some() {
                return Some(format!(
                    "orthogonal frame starters exist (mate search witness from seed {})",
                    params.seed
                ));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(n: u32, h: usize) -> Subgroup {
        Group::cyclic(n).unwrap().cyclic_subgroup(h).unwrap()
    }

    #[test]
    fn elementary() {
        assert_eq!(elementary_feasible(&sub(10, 2)).kind, VerdictKind::Open);
        let v = elementary_feasible(&sub(8, 1));
        assert_eq!(v.kind, VerdictKind::FrameImpossible);
        assert!(v.has_rule("parity") && v.has_rule("involution"));
        let v = elementary_feasible(&sub(6, 2));
        assert!(v.has_rule("index"));
    }

    #[test]
    fn anderson() {
        assert!(anderson_rules_out_frame(&sub(12, 2)));
        assert!(!anderson_rules_out_frame(&sub(16, 2)));
        assert!(!anderson_rules_out_frame(&sub(10, 2)));
        assert!(anderson_rules_out_frame(&sub(14, 2)));
    }

    #[test]
    fn strong_rules() {
        assert!(strong_rules_out_5h(&sub(15, 3)));
        assert!(!strong_rules_out_5h(&sub(10, 2)));
        assert!(strong_rules_out_5h(&sub(35, 7)));

        assert!(strong_rules_out_z4_quotient(&sub(8, 2)));
        assert!(strong_rules_out_z4_quotient(&sub(16, 4)));
        let g = Group::new(&[4, 4]).unwrap();
        let h = Subgroup::closure(&g, &[g.element(&[0, 2]).unwrap(), g.element(&[2, 0]).unwrap()]).unwrap();
        assert!(!strong_rules_out_z4_quotient(&h));

        assert!(strong_rules_out_6h(&sub(12, 2)));
        assert!(strong_rules_out_6h(&sub(30, 5)));
        assert!(!strong_rules_out_6h(&sub(30, 3)));
    }

    #[test]
    fn orth_rule() {
        assert!(orth_rules_out_4t(&sub(8, 2)));
        assert!(orth_rules_out_4t(&sub(24, 6)));
        assert!(!orth_rules_out_4t(&sub(16, 4)));
        // Z2 × Z12 with |H| = 6: t = 6 is squarefree
        let g = Group::new(&[2, 12]).unwrap();
        let h = g.all_subgroups().into_iter().find(|s| s.order() == 6 && s.quotient().structure().factors() == [4]);
        if let Some(h) = h {
            assert!(orth_rules_out_4t(&h));
        }
    }

    #[test]
    fn conjecture() {
        assert_eq!(conjecture_classify(10, 2).unwrap().kind, VerdictKind::Open);
        let v = conjecture_classify(9, 1).unwrap();
        assert_eq!(v.kind, VerdictKind::StrongImpossible);
        assert!(v.has_rule("conj-z9"));
        assert!(conjecture_classify(25, 5).unwrap().has_rule("conj-5h"));
        assert!(conjecture_classify(12, 2).unwrap().has_rule("conj-parity"));
        assert_eq!(conjecture_classify(9, 3).unwrap().kind, VerdictKind::FrameImpossible);
        assert!(conjecture_classify(10, 3).is_err());
    }

    #[test]
    fn families() {
        assert!(patterned_applies(&sub(15, 3)));
        assert!(!patterned_applies(&sub(10, 2)));
        assert!(rosa_applies(&sub(16, 2)));
        assert!(!rosa_applies(&sub(12, 2)));
        assert!(wang_strong_applies(&sub(10, 2)));
        assert!(wang_strong_applies(&sub(26, 2)));
        assert!(!wang_strong_applies(&sub(18, 2)));
        assert!(fq_z2_family_applies(&sub(10, 2)));
        assert!(fq_z2_family_applies(&sub(26, 2)));
        let g = Group::new(&[2, 2, 5]).unwrap();
        let h = g.all_subgroups().into_iter().find(|s| s.order() == 4).unwrap();
        assert!(fq_z2_family_applies(&h));
        assert!(zp_z3_family_applies(&sub(57, 3)));
        assert!(!zp_z3_family_applies(&sub(39, 3)));
        assert_eq!(horton_reduction(&Group::cyclic(35).unwrap()).unwrap(), Group::cyclic(7).unwrap());
        assert!(horton_reduction(&Group::cyclic(15).unwrap()).is_none());
    }

    #[test]
    fn classify_examples() {
        let quick = ClassifyOptions {
            budget: Duration::from_secs(2),
            ..ClassifyOptions::default()
        };
        let v = classify(&sub(15, 3), &quick);
        assert_eq!(v.kind, VerdictKind::StrongImpossible);
        assert!(v.notes.iter().any(|n| n.contains("orthogonal frame starters exist")), "{v}");

        let v = classify(&sub(9, 1), &quick);
        assert_eq!(v.kind, VerdictKind::StrongImpossible);
        assert!(v.has_rule("z9"));

        let v = classify(&sub(7, 1), &quick);
        assert_eq!(v.kind, VerdictKind::KnownExists);
        assert!(v.notes.iter().any(|n| n.contains("patterned")));

        assert_eq!(classify(&sub(8, 2), &quick).kind, VerdictKind::OrthPairImpossible);
        assert_eq!(classify(&sub(12, 2), &quick).kind, VerdictKind::FrameImpossible);
    }
}
