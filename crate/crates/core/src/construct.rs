//! Constructions: patterned frame starters, strong complete mappings, the two
//! multiplication constructions and the Gross–Leonard quotient lift.
//!
//! Every starter returned here has been re-verified as a (strong) frame starter
//! before it is handed back; a failed check is reported as [`Error::Invalid`].

use std::fmt;

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::group::{DirectProduct, Element, Group, QuotientView, Subgroup};
use crate::starter::FrameStarter;

/// Default order cap for [`scm_search`].
pub const SCM_SEARCH_CAP: usize = 32;

/// A strong complete mapping: `φ`, `x ↦ φ(x) - x` and `x ↦ φ(x) + x` are all
/// bijections of the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scm {
    group: Group,
    table: Vec<usize>,
}

impl Scm {
    /// Checks the three bijection conditions exhaustively.
    pub fn from_indices(group: &Group, table: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if table.len() != n || table.iter().any(|&v| v >= n) {
            return Err(Error::invalid(format!("mapping table must have {n} entries below {n}")));
        }
        let mut seen = [vec![false; n], vec![false; n], vec![false; n]];
        for (x, &y) in table.iter().enumerate() {
            for (which, v) in [y, group.sub_idx(y, x), group.add_idx(y, x)].into_iter().enumerate() {
                if std::mem::replace(&mut seen[which][v], true) {
                    let what = ["φ", "φ(x) - x", "φ(x) + x"][which];
                    return Err(Error::invalid(format!(
                        "{what} is not a bijection (value {} repeats at x = {})",
                        group.element_at(v),
                        group.element_at(x)
                    )));
                }
            }
        }
        Ok(Scm {
            group: group.clone(),
            table,
        })
    }

    pub fn new(group: &Group, images: &[Element]) -> Result<Self> {
        for e in images {
            group.element(e.coords())?;
        }
        Self::from_indices(group, images.iter().map(|e| group.index_of(e)).collect())
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply_idx(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn apply(&self, x: &Element) -> Element {
        self.group.element_at(self.table[self.group.index_of(x)])
    }

    /// Builds a mapping from a short description:
    ///
    /// - `double:Z(n1,...)`: `x ↦ 2x`;
    /// - `gf:q:α`: multiplication by `α` in `GF(q)`, where `α` is `x` (the
    ///   polynomial generator), a coefficient tuple `(c0,c1,...)`, or an integer
    ///   read as base-`p` digits;
    /// - `search:Z(n1,...)`: the first mapping found by [`scm_search`].
    pub fn from_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(g) = spec.strip_prefix("double:") {
            return scm_doubling(&crate::format::parse_group(g)?);
        }
        if let Some(g) = spec.strip_prefix("search:") {
            let g = crate::format::parse_group(g)?;
            return scm_search(&g, SCM_SEARCH_CAP)?
                .ok_or_else(|| Error::Precondition(format!("{g} has no strong complete mapping")));
        }
        if let Some(rest) = spec.strip_prefix("gf:") {
            let (q, alpha) = rest
                .split_once(':')
                .ok_or_else(|| Error::invalid("expected gf:q:alpha"))?;
            let q: u32 = q.trim().parse().map_err(|_| Error::invalid(format!("bad field order {q:?}")))?;
            let f = FiniteField::of_order(q)?;
            let alpha = parse_field_element(&f, alpha.trim())?;
            return scm_field(&f, &alpha);
        }
        Err(Error::invalid(format!(
            "unknown mapping {spec:?}; expected double:Z(..), gf:q:alpha or search:Z(..)"
        )))
    }
}

fn parse_field_element(f: &FiniteField, s: &str) -> Result<FieldElement> {
    if s == "x" {
        if f.degree() < 2 {
            return Err(Error::invalid("`x` names the generator of a proper extension"));
        }
        return f.element(&[0, 1]);
    }
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let coeffs = inner
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::invalid(format!("bad coefficient {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        return f.element(&coeffs);
    }
    let i: u32 = s.parse().map_err(|_| Error::invalid(format!("bad field element {s:?}")))?;
    if i >= f.order() {
        return Err(Error::invalid(format!("{i} is not below {}", f.order())));
    }
    Ok(f.from_index(i))
}

impl fmt::Display for Scm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, &y) in self.table.iter().enumerate() {
            if x > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", self.group.element_at(x), self.group.element_at(y))?;
        }
        Ok(())
    }
}

/// `{{x, -x} : x ∈ G \ H}`; requires every element of `G \ H` to have odd order.
pub fn patterned_starter(h: &Subgroup) -> Result<FrameStarter> {
    let g = h.parent();
    let mut pairs = Vec::with_capacity((g.order() - h.order()) / 2);
    for x in 0..g.order() {
        if h.contains_idx(x) {
            continue;
        }
        let ord = g.element_order_idx(x);
        if ord % 2 == 0 {
            return Err(Error::Precondition(format!(
                "element {} of G \\ H has even order {ord}",
                g.element_at(x)
            )));
        }
        let nx = g.neg_idx(x);
        if x < nx {
            pairs.push((x, nx));
        }
    }
    FrameStarter::from_indices(h, pairs)
}

/// `x ↦ 2x`, an SCM whenever `gcd(|G|, 6) = 1`.
pub fn scm_doubling(g: &Group) -> Result<Scm> {
    if gcd(g.order() as u64, 6) != 1 {
        return Err(Error::Precondition(format!("gcd(|{g}|, 6) = gcd({}, 6) != 1", g.order())));
    }
    Scm::from_indices(g, (0..g.order()).map(|x| g.add_idx(x, x)).collect())
}

/// `x ↦ αx` on the additive group of `F`, for `q ≥ 4` and `α ∉ {0, 1, -1}`.
pub fn scm_field(f: &FiniteField, alpha: &FieldElement) -> Result<Scm> {
    if f.order() < 4 {
        return Err(Error::Precondition(format!("{f} has fewer than 4 elements")));
    }
    let alpha = f.element(alpha.coeffs())?;
    if alpha == f.zero() || alpha == f.one() || alpha == f.neg(&f.one()) {
        return Err(Error::Precondition(format!("α = {alpha} is one of 0, 1, -1")));
    }
    let add = f.additive_group();
    let g = add.group();
    let table = g
        .elements()
        .map(|e| g.index_of(&add.to_group(&f.mul(&alpha, &add.from_group(&e)))))
        .collect();
    Scm::from_indices(g, table)
}

/// Evans' criterion: neither the Sylow 2- nor the Sylow 3-subgroup is nontrivial
/// and cyclic.
pub fn scm_exists(g: &Group) -> bool {
    !g.sylow_cyclic_nontrivial(2).expect("2 is prime") && !g.sylow_cyclic_nontrivial(3).expect("3 is prime")
}

/// Exhaustive search for an SCM. `Ok(None)` certifies that none exists.
///
/// Exact cover with four column families (domain, image, difference, sum), each
/// element covered once per family; branching is on the column with the fewest
/// live rows. Translating `φ` by a constant preserves all three bijections, so
/// `φ(0) = 0` is fixed up front.
///
/// Besides the local cover constraints, every node checks two identities that each
/// row `(x, y)` with `d = y - x`, `s = y + x` satisfies under any coordinate
/// projection `χ` onto `Z_n`: `χ(s) = χ(y) + χ(x)`, `χ(d) = χ(y) - χ(x)` and
/// `χ(s)² + χ(d)² = 2χ(y)² + 2χ(x)²`. Summed over the rows still to be placed they
/// relate the free columns of each family, so a violation prunes the node.
pub fn scm_search(g: &Group, cap: usize) -> Result<Option<Scm>> {
    scm_search_with(g, cap, true)
}

#[doc(hidden)]
pub fn scm_search_with(g: &Group, cap: usize, invariants: bool) -> Result<Option<Scm>> {
    let n = g.order();
    if n > cap || n > 64 {
        return Err(Error::CapExceeded { order: n, cap: cap.min(64) });
    }
    let mut s = ScmSearch::new(g, invariants);
    s.place(0, 0);
    if s.solve() {
        let table = s.table.iter().map(|v| v.expect("complete")).collect();
        Ok(Some(Scm::from_indices(g, table)?))
    } else {
        Ok(None)
    }
}

const X: usize = 0;
const V: usize = 1;
const D: usize = 2;
const S: usize = 3;

struct ScmSearch {
    n: usize,
    moduli: Vec<u64>,
    coords: Vec<Vec<u64>>,
    add: Vec<usize>,
    sub: Vec<usize>,
    table: Vec<Option<usize>>,
    free: [u64; 4],
    invariants: bool,
    /// Per family and coordinate: sum of `χ` and of `χ²` over free columns.
    lin: [Vec<u64>; 4],
    quad: [Vec<u64>; 4],
}

impl ScmSearch {
    fn new(g: &Group, invariants: bool) -> Self {
        let n = g.order();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut add = vec![0; n * n];
        let mut sub = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = g.add_idx(a, b);
                sub[a * n + b] = g.sub_idx(a, b);
            }
        }
        let moduli: Vec<u64> = g.factors().iter().map(|&m| m as u64).collect();
        let coords: Vec<Vec<u64>> = g
            .elements()
            .map(|e| e.coords().iter().map(|&c| c as u64).collect())
            .collect();
        let mut lin0 = vec![0u64; moduli.len()];
        let mut quad0 = vec![0u64; moduli.len()];
        for c in &coords {
            for (i, &m) in moduli.iter().enumerate() {
                lin0[i] = (lin0[i] + c[i]) % m;
                quad0[i] = (quad0[i] + c[i] * c[i]) % m;
            }
        }
        ScmSearch {
            n,
            moduli,
            coords,
            add,
            sub,
            table: vec![None; n],
            free: [all; 4],
            invariants,
            lin: std::array::from_fn(|_| lin0.clone()),
            quad: std::array::from_fn(|_| quad0.clone()),
        }
    }

    fn cols(&self, x: usize, y: usize) -> [usize; 4] {
        [x, y, self.sub[y * self.n + x], self.add[y * self.n + x]]
    }

    fn live(&self, x: usize, y: usize) -> bool {
        self.cols(x, y)
            .iter()
            .zip(&self.free)
            .all(|(&c, &mask)| mask >> c & 1 == 1)
    }

    fn toggle(&mut self, x: usize, y: usize, placing: bool) {
        let cols = self.cols(x, y);
        self.table[x] = placing.then_some(y);
        for (f, &c) in cols.iter().enumerate() {
            self.free[f] ^= 1 << c;
            for (i, &m) in self.moduli.iter().enumerate() {
                let v = self.coords[c][i];
                let (l, q) = (v, v * v % m);
                if placing {
                    self.lin[f][i] = (self.lin[f][i] + m - l) % m;
                    self.quad[f][i] = (self.quad[f][i] + m - q) % m;
                } else {
                    self.lin[f][i] = (self.lin[f][i] + l) % m;
                    self.quad[f][i] = (self.quad[f][i] + q) % m;
                }
            }
        }
    }

    fn place(&mut self, x: usize, y: usize) {
        self.toggle(x, y, true);
    }

    fn unplace(&mut self, x: usize, y: usize) {
        self.toggle(x, y, false);
    }

    fn invariants_hold(&self) -> bool {
        self.moduli.iter().enumerate().all(|(i, &m)| {
            let (x, v, d, s) = (self.lin[X][i], self.lin[V][i], self.lin[D][i], self.lin[S][i]);
            let q = |f: usize| self.quad[f][i];
            s == (v + x) % m && d == (v + m - x) % m && (q(S) + q(D)) % m == 2 * (q(V) + q(X)) % m
        })
    }

    /// Row `(x, y)` number `t` of a column.
    fn row(&self, fam: usize, c: usize, t: usize) -> (usize, usize) {
        let n = self.n;
        match fam {
            X => (c, t),
            V => (t, c),
            D => (t, self.add[t * n + c]),
            _ => (t, self.sub[c * n + t]),
        }
    }

    fn count(&self, fam: usize, c: usize, limit: usize) -> usize {
        let mut k = 0;
        for t in 0..self.n {
            let (x, y) = self.row(fam, c, t);
            if self.live(x, y) {
                k += 1;
                if k >= limit {
                    break;
                }
            }
        }
        k
    }

    fn solve(&mut self) -> bool {
        if self.free[X] == 0 {
            return true;
        }
        if self.invariants && !self.invariants_hold() {
            return false;
        }
        let mut best: Option<(usize, usize, usize)> = None;
        'scan: for fam in [X, V, D, S] {
            let mut m = self.free[fam];
            while m != 0 {
                let c = m.trailing_zeros() as usize;
                m &= m - 1;
                let k = self.count(fam, c, best.map_or(usize::MAX, |b| b.0));
                if k == 0 {
                    return false;
                }
                if best.is_none_or(|b| k < b.0) {
                    best = Some((k, fam, c));
                    if k == 1 {
                        break 'scan;
                    }
                }
            }
        }
        let (_, fam, c) = best.expect("an open column");
        let rows: Vec<(usize, usize)> = (0..self.n)
            .map(|t| self.row(fam, c, t))
            .filter(|&(x, y)| self.live(x, y))
            .collect();
        for (x, y) in rows {
            self.place(x, y);
            if self.solve() {
                return true;
            }
            self.unplace(x, y);
        }
        false
    }
}

fn ensure_strong(s: FrameStarter) -> Result<FrameStarter> {
    let report = s.strong_report();
    if report.is_valid() {
        Ok(s)
    } else {
        Err(Error::Invalid(report))
    }
}

fn require_strong(s: &FrameStarter, what: &str) -> Result<()> {
    let report = s.strong_report();
    if !report.is_valid() {
        return Err(Error::Precondition(format!("{what} is not strong:\n{report}")));
    }
    Ok(())
}

/// Generators of `H × G2` inside the product.
fn product_subgroup(dp: &DirectProduct, h: &Subgroup, whole_right: bool) -> Result<Subgroup> {
    let mut gens: Vec<Element> = h.generators().iter().map(|e| dp.embed_left(e)).collect();
    if whole_right {
        let r = dp.right();
        for i in 0..r.rank() {
            let mut c = vec![0; r.rank()];
            c[i] = 1;
            gens.push(dp.embed_right(&Element::from_coords(c)));
        }
    }
    Subgroup::closure(dp.group(), &gens)
}

fn mult_pairs(dp: &DirectProduct, s: &FrameStarter, phi: &Scm) -> Vec<(usize, usize)> {
    let (g1, g2) = (s.group(), phi.group());
    let pg = dp.group();
    let mut pairs = Vec::with_capacity(s.len() * g2.order());
    for &(x, y) in s.pair_indices() {
        let (x, y) = (g1.element_at(x), g1.element_at(y));
        for z in 0..g2.order() {
            let a = dp.pair(&x, &g2.element_at(z));
            let b = dp.pair(&y, &g2.element_at(phi.apply_idx(z)));
            pairs.push((pg.index_of(&a), pg.index_of(&b)));
        }
    }
    pairs
}

/// Strong frame starter in `(G1 × G2) \ (H × G2)` from a strong frame starter `S`
/// in `G1 \ H` and an SCM `φ` on `G2`: each stored pair `(x, y)` becomes the pairs
/// `{(x, z), (y, φ(z))}` for all `z ∈ G2`.
pub fn mult_construction(s: &FrameStarter, phi: &Scm) -> Result<FrameStarter> {
    require_strong(s, "input starter")?;
    let dp = s.group().direct_product(phi.group());
    let h = product_subgroup(&dp, s.subgroup(), true)?;
    ensure_strong(FrameStarter::from_indices(&h, mult_pairs(&dp, s, phi))?)
}

/// The product group `H × G2` in which the second input of
/// [`mult_var_construction`] must live, and its subgroup `H × {0}`.
pub fn mult_var_inner_context(h: &Subgroup, g2: &Group) -> Result<Subgroup> {
    let (habs, _) = h.as_group();
    let dp = habs.direct_product(g2);
    let gens: Vec<Element> = (0..habs.rank())
        .map(|i| {
            let mut c = vec![0; habs.rank()];
            c[i] = 1;
            dp.embed_left(&Element::from_coords(c))
        })
        .collect();
    Subgroup::closure(dp.group(), &gens)
}

/// Strong frame starter in `(G1 × G2) \ (H × {0})`: the output of
/// [`mult_construction`] together with `S2`, a strong frame starter in
/// `(H × G2) \ (H × {0})` over the group of [`mult_var_inner_context`].
pub fn mult_var_construction(s1: &FrameStarter, s2: &FrameStarter, phi: &Scm) -> Result<FrameStarter> {
    require_strong(s1, "first starter")?;
    require_strong(s2, "second starter")?;
    let h = s1.subgroup();
    let g2 = phi.group();
    let inner_h = mult_var_inner_context(h, g2)?;
    if s2.group() != inner_h.parent() || s2.subgroup().indices() != inner_h.indices() {
        return Err(Error::Incompatible(format!(
            "second starter lives in {} \\ {}, expected {} \\ {}",
            s2.group(),
            s2.subgroup(),
            inner_h.parent(),
            inner_h
        )));
    }
    let (habs, basis) = h.as_group();
    let inner = habs.direct_product(g2);
    let dp = s1.group().direct_product(g2);
    let pg = dp.group();
    let mut pairs = mult_pairs(&dp, s1, phi);
    let lift = |e: usize| {
        let (a, z) = inner.split(&inner.group().element_at(e));
        pg.index_of(&dp.pair(&h.map_from_abstract(&basis, &a), &z))
    };
    pairs.extend(s2.pair_indices().iter().map(|&(x, y)| (lift(x), lift(y))));
    let out_h = product_subgroup(&dp, h, false)?;
    ensure_strong(FrameStarter::from_indices(&out_h, pairs)?)
}

/// Strong frame starter in `G \ H` from a strong starter in `G/H` and an SCM on
/// `H`.
///
/// `quotient_starter` lives in `Z(structure)` of the quotient view with trivial
/// subgroup; `φ` lives on the abstract copy of `H` returned by
/// [`Subgroup::as_group`]. Each quotient pair `(X, Y)` is lifted to the least coset
/// representatives `(x, y)` and replaced by `(z + x, φ(z) + y)` for all `z ∈ H`.
pub fn gross_leonard(quotient_starter: &FrameStarter, phi: &Scm, q: &QuotientView) -> Result<FrameStarter> {
    let structure = q.structure();
    if quotient_starter.group() != structure || !quotient_starter.subgroup().is_trivial() {
        return Err(Error::Incompatible(format!(
            "quotient starter must be a starter in {structure} \\ {{0}}"
        )));
    }
    require_strong(quotient_starter, "quotient starter")?;
    let h = q.kernel();
    let (habs, basis) = h.as_group();
    if phi.group() != &habs {
        return Err(Error::Incompatible(format!(
            "mapping is on {}, the subgroup is {habs}",
            phi.group()
        )));
    }
    let g = q.parent();
    let rep = |e: usize| g.index_of(&q.coset_rep(q.coset_of_structure(&structure.element_at(e))));
    let mut pairs = Vec::with_capacity(quotient_starter.len() * h.order());
    for &(xq, yq) in quotient_starter.pair_indices() {
        let (x, y) = (rep(xq), rep(yq));
        for z in 0..habs.order() {
            let zg = g.index_of(&h.map_from_abstract(&basis, &habs.element_at(z)));
            let fz = g.index_of(&h.map_from_abstract(&basis, &habs.element_at(phi.apply_idx(z))));
            pairs.push((g.add_idx(zg, x), g.add_idx(fz, y)));
        }
    }
    ensure_strong(FrameStarter::from_indices(h, pairs)?)
}
