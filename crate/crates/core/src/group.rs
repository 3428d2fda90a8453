//! Finite abelian groups in invariant-factor form.
//!
//! A [`Group`] is `Z(n1) x ... x Z(nk)` with `n1 | n2 | ... | nk`, each `ni >= 2`.
//! Elements are mixed-radix coordinate vectors and also have a dense index in
//! `0..order`; the index order coincides with lexicographic order on coordinates,
//! so "least element" means the same thing in both views.
//!
//! Subgroups store their full element set. Quotients carry the coset partition,
//! the invariant factors of `G/H` and an explicit isomorphism onto `Z(structure)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{crt, factorize, gcd, is_prime, lcm};
use crate::error::{Error, Result};

/// Largest group order accepted by [`Group::new`].
pub const MAX_ORDER: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(Vec<u32>);

impl Element {
    /// Wraps raw coordinates. Membership in a particular group is checked by
    /// [`Group::element`] or [`Group::contains`].
    pub fn from_coords(coords: Vec<u32>) -> Self {
        Element(coords)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// How the cyclic factors of a raw product map onto canonical invariant factors.
///
/// Each raw factor splits into prime-power parts by CRT; each canonical factor is
/// assembled from exactly one prime-power part per prime dividing it.
#[derive(Clone, Debug)]
struct Layout {
    raw: Vec<u32>,
    canonical: Vec<u32>,
    /// For raw factor `i`: `(p^e, canonical index)` for each prime dividing it.
    raw_parts: Vec<Vec<(u64, usize)>>,
    /// For canonical factor `j`: `(p^f, raw index)` for each prime dividing it.
    canon_parts: Vec<Vec<(u64, usize)>>,
}

impl Layout {
    fn new(raw: &[u32]) -> Result<Self> {
        if let Some(&bad) = raw.iter().find(|&&n| n < 2) {
            return Err(Error::invalid(format!("cyclic factor {bad} is < 2")));
        }
        let order = raw
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize))
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| Error::invalid(format!("group order exceeds {MAX_ORDER}")))?;
        debug_assert!(order >= 1);

        // prime -> [(exponent, raw index)]
        let mut by_prime: BTreeMap<u64, Vec<(u32, usize)>> = BTreeMap::new();
        for (i, &n) in raw.iter().enumerate() {
            for (p, e) in factorize(n as u64) {
                by_prime.entry(p).or_default().push((e, i));
            }
        }
        let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut canonical = vec![1u32; rank];
        let mut raw_parts = vec![Vec::new(); raw.len()];
        let mut canon_parts = vec![Vec::new(); rank];
        for (&p, parts) in by_prime.iter_mut() {
            // largest exponent first; ties broken by raw position
            parts.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            for (r, &(e, i)) in parts.iter().enumerate() {
                let j = rank - 1 - r;
                let q = p.pow(e);
                canonical[j] *= q as u32;
                raw_parts[i].push((q, j));
                canon_parts[j].push((q, i));
            }
        }
        Ok(Layout {
            raw: raw.to_vec(),
            canonical,
            raw_parts,
            canon_parts,
        })
    }

    fn to_canonical(&self, raw: &[u32]) -> Vec<u32> {
        self.canon_parts
            .iter()
            .map(|parts| {
                let residues: Vec<(u64, u64)> =
                    parts.iter().map(|&(q, i)| (raw[i] as u64 % q, q)).collect();
                crt(&residues) as u32
            })
            .collect()
    }

    fn to_raw(&self, canonical: &[u32]) -> Vec<u32> {
        self.raw_parts
            .iter()
            .map(|parts| {
                let residues: Vec<(u64, u64)> = parts
                    .iter()
                    .map(|&(q, j)| (canonical[j] as u64 % q, q))
                    .collect();
                crt(&residues) as u32
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    factors: Vec<u32>,
    order: usize,
}

impl Group {
    /// Builds the group `Z(f1) x ... x Z(fm)` and normalizes it to canonical
    /// invariant factors, e.g. `[2, 5] -> [10]` and `[4, 2] -> [2, 4]`.
    pub fn new(factors: &[u32]) -> Result<Self> {
        let layout = Layout::new(factors)?;
        Ok(Self::from_canonical(layout.canonical))
    }

    fn from_canonical(factors: Vec<u32>) -> Self {
        let order = factors.iter().map(|&n| n as usize).product();
        Group { factors, order }
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        if n == 1 {
            return Ok(Self::trivial());
        }
        Self::new(&[n])
    }

    pub fn trivial() -> Self {
        Self::from_canonical(Vec::new())
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    /// Largest element order.
    pub fn exponent(&self) -> u64 {
        self.factors.last().map_or(1, |&n| n as u64)
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    /// Validated element from coordinates.
    pub fn element(&self, coords: &[u32]) -> Result<Element> {
        let e = Element(coords.to_vec());
        self.check(&e)?;
        Ok(e)
    }

    pub fn contains(&self, a: &Element) -> bool {
        self.check(a).is_ok()
    }

    fn check(&self, a: &Element) -> Result<()> {
        if a.0.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: a.0.len(),
            });
        }
        if let Some((c, n)) = a.0.iter().zip(&self.factors).find(|(c, n)| c >= n) {
            return Err(Error::invalid(format!(
                "coordinate {c} out of range for Z({n}) in {a}"
            )));
        }
        Ok(())
    }

    /// Dense index; coordinate 0 is the most significant digit.
    pub fn index_of(&self, a: &Element) -> usize {
        a.0.iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
    }

    pub fn element_at(&self, mut index: usize) -> Element {
        let mut coords = vec![0u32; self.rank()];
        for (c, &n) in coords.iter_mut().zip(&self.factors).rev() {
            *c = (index % n as usize) as u32;
            index /= n as usize;
        }
        Element(coords)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(|i| self.element_at(i))
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.neg_unchecked(a))
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, &self.neg_unchecked(b)))
    }

    pub(crate) fn add_unchecked(&self, a: &Element, b: &Element) -> Element {
        Element(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        )
    }

    pub(crate) fn neg_unchecked(&self, a: &Element) -> Element {
        Element(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        )
    }

    /// `m * a`.
    pub fn scale(&self, m: u64, a: &Element) -> Element {
        Element(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &n)| ((x as u64 * (m % n as u64)) % n as u64) as u32)
                .collect(),
        )
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        if let [n] = self.factors[..] {
            let s = a + b;
            return if s >= n as usize { s - n as usize } else { s };
        }
        let (mut a, mut b, mut mult, mut out) = (a, b, 1usize, 0usize);
        for &n in self.factors.iter().rev() {
            let n = n as usize;
            out += ((a % n + b % n) % n) * mult;
            mult *= n;
            a /= n;
            b /= n;
        }
        out
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        if let [n] = self.factors[..] {
            return if a == 0 { 0 } else { n as usize - a };
        }
        let (mut a, mut mult, mut out) = (a, 1usize, 0usize);
        for &n in self.factors.iter().rev() {
            let n = n as usize;
            out += ((n - a % n) % n) * mult;
            mult *= n;
            a /= n;
        }
        out
    }

    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    /// Least `m >= 1` with `m * a = 0`.
    pub fn element_order(&self, a: &Element) -> u64 {
        a.0.iter()
            .zip(&self.factors)
            .map(|(&x, &n)| n as u64 / gcd(n as u64, x as u64))
            .fold(1, lcm)
    }

    pub fn element_order_idx(&self, a: usize) -> u64 {
        self.element_order(&self.element_at(a))
    }

    /// True iff the Sylow `p`-subgroup is nontrivial and cyclic, i.e. `p` divides
    /// exactly one invariant factor.
    pub fn sylow_cyclic_nontrivial(&self, p: u64) -> Result<bool> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let dividing = self.factors.iter().filter(|&&n| n as u64 % p == 0).count();
        Ok(dividing == 1)
    }

    /// Direct product with embeddings of both factors.
    pub fn direct_product(&self, other: &Group) -> DirectProduct {
        let raw: Vec<u32> = self.factors.iter().chain(&other.factors).copied().collect();
        let layout = Layout::new(&raw).expect("factors of valid groups are valid");
        DirectProduct {
            group: Group::from_canonical(layout.canonical.clone()),
            left: self.clone(),
            right: other.clone(),
            layout,
        }
    }

    /// The unique subgroup of order `h` of a cyclic group.
    pub fn cyclic_subgroup(&self, h: usize) -> Result<Subgroup> {
        if !self.is_cyclic() {
            return Err(Error::invalid(format!("{self} is not cyclic")));
        }
        if h == 0 || self.order % h != 0 {
            return Err(Error::invalid(format!("{h} does not divide {}", self.order)));
        }
        if h == 1 {
            return Ok(Subgroup::trivial(self));
        }
        let step = (self.order / h) as u32;
        Subgroup::closure(self, &[Element(vec![step])])
    }

    /// Every subgroup, in order of increasing size. Intended for small groups.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: Vec<Subgroup> = vec![Subgroup::trivial(self)];
        let mut frontier = found.clone();
        while let Some(sub) = frontier.pop() {
            for x in 0..self.order {
                if sub.contains_idx(x) {
                    continue;
                }
                let mut gens = sub.generators.clone();
                gens.push(self.element_at(x));
                let bigger = Subgroup::closure(self, &gens).expect("elements of self");
                if !found.iter().any(|s| s.members == bigger.members) {
                    found.push(bigger.clone());
                    frontier.push(bigger);
                }
            }
        }
        found.sort_by_key(|s| (s.order(), s.indices.clone()));
        found
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z(")?;
        for (i, n) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// `G1 x G2` in canonical form together with the coordinate maps.
#[derive(Clone, Debug)]
pub struct DirectProduct {
    group: Group,
    left: Group,
    right: Group,
    layout: Layout,
}

impl DirectProduct {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn left(&self) -> &Group {
        &self.left
    }

    pub fn right(&self) -> &Group {
        &self.right
    }

    /// The element `(a, b)`.
    pub fn pair(&self, a: &Element, b: &Element) -> Element {
        debug_assert!(self.left.contains(a) && self.right.contains(b));
        let raw: Vec<u32> = a.0.iter().chain(&b.0).copied().collect();
        Element(self.layout.to_canonical(&raw))
    }

    pub fn embed_left(&self, a: &Element) -> Element {
        self.pair(a, &self.right.zero())
    }

    pub fn embed_right(&self, b: &Element) -> Element {
        self.pair(&self.left.zero(), b)
    }

    /// Inverse of [`DirectProduct::pair`].
    pub fn split(&self, x: &Element) -> (Element, Element) {
        let raw = self.layout.to_raw(&x.0);
        let (a, b) = raw.split_at(self.left.rank());
        (Element(a.to_vec()), Element(b.to_vec()))
    }

    #[doc(hidden)]
    pub fn raw_factors(&self) -> &[u32] {
        &self.layout.raw
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: Group,
    generators: Vec<Element>,
    /// Sorted element indices.
    indices: Vec<usize>,
    members: Vec<bool>,
}

impl Subgroup {
    pub fn trivial(parent: &Group) -> Self {
        Self::closure(parent, &[]).expect("empty generator list")
    }

    pub fn whole(parent: &Group) -> Self {
        let gens: Vec<Element> = (0..parent.rank())
            .map(|i| {
                let mut c = vec![0; parent.rank()];
                c[i] = 1;
                Element(c)
            })
            .collect();
        Self::closure(parent, &gens).expect("unit vectors")
    }

    /// The subgroup generated by `generators`.
    pub fn closure(parent: &Group, generators: &[Element]) -> Result<Self> {
        for g in generators {
            parent.check(g)?;
        }
        let gen_idx: Vec<usize> = generators.iter().map(|g| parent.index_of(g)).collect();
        let mut members = vec![false; parent.order()];
        let mut stack = vec![0usize];
        members[0] = true;
        while let Some(x) = stack.pop() {
            for &g in &gen_idx {
                let y = parent.add_idx(x, g);
                if !members[y] {
                    members[y] = true;
                    stack.push(y);
                }
            }
        }
        let indices = (0..parent.order()).filter(|&i| members[i]).collect();
        Ok(Subgroup {
            parent: parent.clone(),
            generators: generators.to_vec(),
            indices,
            members,
        })
    }

    /// Checks that `elements` is closed under addition and negation.
    pub fn from_elements(parent: &Group, elements: &[Element]) -> Result<Self> {
        let sub = Self::closure(parent, elements)?;
        let given: std::collections::BTreeSet<usize> =
            elements.iter().map(|e| parent.index_of(e)).collect();
        let mut given_with_zero = given.clone();
        given_with_zero.insert(0);
        if given_with_zero.len() != sub.order() || !given.contains(&0) {
            return Err(Error::invalid("element set is not a subgroup"));
        }
        Ok(sub)
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.indices.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, a: &Element) -> bool {
        self.parent.contains(a) && self.members[self.parent.index_of(a)]
    }

    pub fn contains_idx(&self, a: usize) -> bool {
        self.members[a]
    }

    /// Sorted element indices.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.indices.iter().map(|&i| self.parent.element_at(i))
    }

    /// Membership bitmap over the parent's element indices.
    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// An abstract copy `Z(factors)` of this subgroup together with the images of
    /// its unit vectors, so that `Σ c_i e_i -> Σ c_i basis_i` is an isomorphism.
    pub fn as_group(&self) -> (Group, Vec<Element>) {
        let local: Vec<usize> = self.indices.clone();
        let pos: BTreeMap<usize, usize> = local.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let op = |a: usize, b: usize| pos[&self.parent.add_idx(local[a], local[b])];
        let factors = classify_abelian(local.len(), 0, &op, false).expect("subgroup is a group");
        let basis = find_basis(local.len(), 0, &op, &factors).expect("basis always exists");
        (
            Group::from_canonical(factors),
            basis.into_iter().map(|b| self.parent.element_at(local[b])).collect(),
        )
    }

    /// Image in the parent of an element of [`Subgroup::as_group`]'s abstract group.
    pub fn map_from_abstract(&self, basis: &[Element], coords: &Element) -> Element {
        coords
            .0
            .iter()
            .zip(basis)
            .fold(self.parent.zero(), |acc, (&c, b)| {
                self.parent.add_unchecked(&acc, &self.parent.scale(c as u64, b))
            })
    }

    /// The cosets of this subgroup and the structure of `G/H`.
    pub fn quotient(&self) -> QuotientView {
        QuotientView::new(self)
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// `G/H` with its coset partition and an identification with `Z(structure)`.
#[derive(Clone, Debug)]
pub struct QuotientView {
    kernel: Subgroup,
    /// Coset id of each element index.
    coset_of: Vec<usize>,
    /// Least element index of each coset; coset ids follow representative order.
    reps: Vec<usize>,
    structure: Group,
    /// Structure element index -> coset id.
    from_structure: Vec<usize>,
    /// Coset id -> structure element index.
    to_structure: Vec<usize>,
}

impl QuotientView {
    fn new(kernel: &Subgroup) -> Self {
        let g = kernel.parent();
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        for x in 0..g.order() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &h in kernel.indices() {
                coset_of[g.add_idx(x, h)] = id;
            }
        }
        let n = reps.len();
        let op = |a: usize, b: usize| coset_of[g.add_idx(reps[a], reps[b])];
        let factors = classify_abelian(n, 0, &op, false).expect("quotient is a group");
        let basis = find_basis(n, 0, &op, &factors).expect("basis always exists");
        let structure = Group::from_canonical(factors);
        let mut from_structure = vec![0usize; n];
        let mut to_structure = vec![0usize; n];
        for (i, e) in structure.elements().enumerate() {
            let mut c = 0usize;
            for (&k, &b) in e.0.iter().zip(&basis) {
                for _ in 0..k {
                    c = op(c, b);
                }
            }
            from_structure[i] = c;
            to_structure[c] = i;
        }
        QuotientView {
            kernel: kernel.clone(),
            coset_of,
            reps,
            structure,
            from_structure,
            to_structure,
        }
    }

    pub fn parent(&self) -> &Group {
        self.kernel.parent()
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn num_cosets(&self) -> usize {
        self.reps.len()
    }

    pub fn coset_index(&self, a: &Element) -> usize {
        self.coset_of[self.parent().index_of(a)]
    }

    pub fn coset_index_idx(&self, a: usize) -> usize {
        self.coset_of[a]
    }

    /// Lexicographically least member of coset `id`.
    pub fn coset_rep(&self, id: usize) -> Element {
        self.parent().element_at(self.reps[id])
    }

    pub fn coset_reps(&self) -> impl Iterator<Item = Element> + '_ {
        self.reps.iter().map(|&r| self.parent().element_at(r))
    }

    /// Invariant factors of `G/H`.
    pub fn structure(&self) -> &Group {
        &self.structure
    }

    pub fn coset_add(&self, a: usize, b: usize) -> usize {
        self.coset_of[self.parent().add_idx(self.reps[a], self.reps[b])]
    }

    /// The image of `a` under `G -> G/H ≅ Z(structure)`.
    pub fn project(&self, a: &Element) -> Element {
        self.structure
            .element_at(self.to_structure[self.coset_index(a)])
    }

    /// Coset id of an element of `Z(structure)`.
    pub fn coset_of_structure(&self, q: &Element) -> usize {
        self.from_structure[self.structure.index_of(q)]
    }
}

/// Invariant factors (ascending, divisibility chain) of a finite abelian group given
/// by its composition law on `0..order`.
///
/// Repeatedly splits off the cyclic subgroup generated by an element of maximal
/// order and continues in the quotient. With `validate`, the law is first checked
/// to be a commutative group operation (cubic time; meant for debugging).
pub fn classify_abelian(
    order: usize,
    identity: usize,
    op: &dyn Fn(usize, usize) -> usize,
    validate: bool,
) -> Result<Vec<u32>> {
    if order == 0 {
        return Err(Error::invalid("empty group"));
    }
    if validate {
        validate_law(order, identity, op)?;
    }
    let mut factors = Vec::new();
    // Current level as an explicit table once we leave the caller's law.
    let mut n = order;
    let mut id = identity;
    let mut table: Option<Vec<usize>> = None;
    while n > 1 {
        let law = |a: usize, b: usize| match &table {
            Some(t) => t[a * n + b],
            None => op(a, b),
        };
        let orders = element_orders(n, id, &law);
        let (gen, &m) = orders
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("nonempty");
        factors.push(m as u32);
        let mut cyclic = Vec::with_capacity(m);
        let mut x = id;
        for _ in 0..m {
            cyclic.push(x);
            x = law(x, gen);
        }
        let mut coset = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if coset[x] == usize::MAX {
                for &c in &cyclic {
                    coset[law(x, c)] = reps.len();
                }
                reps.push(x);
            }
        }
        let k = reps.len();
        let mut next = vec![0usize; k * k];
        for a in 0..k {
            for b in 0..k {
                next[a * k + b] = coset[law(reps[a], reps[b])];
            }
        }
        id = coset[id];
        n = k;
        table = Some(next);
    }
    factors.reverse();
    debug_assert!(factors.windows(2).all(|w| w[1] % w[0] == 0));
    Ok(factors)
}

fn validate_law(n: usize, id: usize, op: &dyn Fn(usize, usize) -> usize) -> Result<()> {
    for a in 0..n {
        if op(a, id) != a {
            return Err(Error::invalid(format!("{id} is not an identity")));
        }
        for b in 0..n {
            let ab = op(a, b);
            if ab >= n {
                return Err(Error::invalid("operation is not closed"));
            }
            if ab != op(b, a) {
                return Err(Error::invalid("operation is not commutative"));
            }
            for c in 0..n {
                if op(ab, c) != op(a, op(b, c)) {
                    return Err(Error::invalid("operation is not associative"));
                }
            }
        }
        if !(0..n).any(|b| op(a, b) == id) {
            return Err(Error::invalid(format!("{a} has no inverse")));
        }
    }
    Ok(())
}

fn element_orders(n: usize, id: usize, law: &dyn Fn(usize, usize) -> usize) -> Vec<usize> {
    (0..n)
        .map(|a| {
            let mut x = a;
            let mut m = 1;
            while x != id {
                x = law(x, a);
                m += 1;
            }
            m
        })
        .collect()
}

/// Elements `b_1..b_k` with `ord(b_i) = factors[i]` generating the whole group, so
/// that `Z(factors) -> G` via the `b_i` is an isomorphism. Backtracks over choices.
fn find_basis(
    n: usize,
    id: usize,
    op: &dyn Fn(usize, usize) -> usize,
    factors: &[u32],
) -> Option<Vec<usize>> {
    let orders = element_orders(n, id, op);
    let mut span = vec![false; n];
    span[id] = true;
    let mut chosen = vec![0usize; factors.len()];
    fn go(
        level: usize,
        n: usize,
        op: &dyn Fn(usize, usize) -> usize,
        orders: &[usize],
        factors: &[u32],
        span: &[bool],
        chosen: &mut [usize],
    ) -> bool {
        // fill from the largest factor down
        let Some(slot) = level.checked_sub(1) else {
            return true;
        };
        let m = factors[slot] as usize;
        let size = span.iter().filter(|&&s| s).count();
        for cand in 0..n {
            if orders[cand] != m || span[cand] {
                continue;
            }
            let mut next = span.to_vec();
            let members: Vec<usize> = (0..n).filter(|&x| span[x]).collect();
            let mut shift = cand;
            for _ in 1..m {
                for &x in &members {
                    next[op(x, shift)] = true;
                }
                shift = op(shift, cand);
            }
            if next.iter().filter(|&&s| s).count() != size * m {
                continue;
            }
            chosen[slot] = cand;
            if go(slot, n, op, orders, factors, &next, chosen) {
                return true;
            }
        }
        false
    }
    go(factors.len(), n, op, &orders, factors, &span, &mut chosen).then_some(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(f: &[u32]) -> Group {
        Group::new(f).unwrap()
    }

    fn e(c: &[u32]) -> Element {
        Element(c.to_vec())
    }

    #[test]
    fn canonical_factors() {
        assert_eq!(z(&[10]).factors(), &[10]);
        assert_eq!(z(&[4, 4]).order(), 16);
        assert_eq!(z(&[2, 4]).factors(), &[2, 4]);
        assert_eq!(z(&[4, 2]).factors(), &[2, 4]);
        assert_eq!(z(&[2, 5]).factors(), &[10]);
        assert_eq!(z(&[6, 4]).factors(), &[2, 12]);
        assert!(Group::new(&[1]).is_err());
        assert!(Group::new(&[0, 3]).is_err());
        assert!(z(&[]).is_cyclic());
    }

    #[test]
    fn arithmetic() {
        let g = z(&[10]);
        assert_eq!(g.add(&e(&[3]), &e(&[4])).unwrap(), e(&[7]));
        assert_eq!(g.sub(&e(&[1]), &e(&[8])).unwrap(), e(&[3]));
        let g = z(&[4, 4]);
        assert_eq!(g.neg(&e(&[1, 1])).unwrap(), e(&[3, 3]));
        assert!(matches!(
            g.add(&e(&[1]), &e(&[1, 1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn index_arithmetic_matches_coordinates() {
        for g in [z(&[12]), z(&[2, 6]), z(&[2, 2, 4])] {
            for a in 0..g.order() {
                for b in 0..g.order() {
                    let (ea, eb) = (g.element_at(a), g.element_at(b));
                    assert_eq!(g.element_at(g.add_idx(a, b)), g.add(&ea, &eb).unwrap());
                    assert_eq!(g.element_at(g.sub_idx(a, b)), g.sub(&ea, &eb).unwrap());
                }
                assert_eq!(g.index_of(&g.element_at(a)), a);
            }
        }
    }

    #[test]
    fn orders() {
        let g = z(&[10]);
        assert_eq!(g.element_order(&e(&[5])), 2);
        assert_eq!(g.element_order(&e(&[2])), 5);
        assert_eq!(z(&[4, 4]).element_order(&e(&[0, 2])), 2);
    }

    #[test]
    fn closures() {
        let s = Subgroup::closure(&z(&[10]), &[e(&[5])]).unwrap();
        assert_eq!(s.elements().collect::<Vec<_>>(), vec![e(&[0]), e(&[5])]);
        let s = Subgroup::closure(&z(&[15]), &[e(&[5])]).unwrap();
        assert_eq!(s.order(), 3);
        assert_eq!(s.indices(), &[0, 5, 10]);
        assert_eq!(Subgroup::closure(&z(&[4, 4]), &[]).unwrap().order(), 1);
        assert!(Subgroup::from_elements(&z(&[10]), &[e(&[0]), e(&[5])]).is_ok());
        assert!(Subgroup::from_elements(&z(&[10]), &[e(&[0]), e(&[2])]).is_err());
    }

    #[test]
    fn quotients() {
        let g = z(&[15]);
        let q = g.cyclic_subgroup(3).unwrap().quotient();
        assert_eq!(q.num_cosets(), 5);
        assert_eq!(q.structure().factors(), &[5]);

        let g = z(&[4, 4]);
        let h = Subgroup::closure(&g, &[e(&[0, 2]), e(&[2, 0])]).unwrap();
        assert_eq!(h.order(), 4);
        let q = h.quotient();
        assert_eq!(q.num_cosets(), 4);
        assert_eq!(q.structure().factors(), &[2, 2]);

        let q = z(&[8]).cyclic_subgroup(2).unwrap().quotient();
        assert_eq!(q.structure().factors(), &[4]);
        assert_eq!(q.coset_rep(1), e(&[1]));
    }

    #[test]
    fn quotient_projection_is_a_homomorphism() {
        let g = z(&[2, 12]);
        for h in g.all_subgroups() {
            let q = h.quotient();
            let s = q.structure().clone();
            for a in g.elements() {
                for b in g.elements() {
                    let lhs = q.project(&g.add(&a, &b).unwrap());
                    let rhs = s.add(&q.project(&a), &q.project(&b)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn classify_tables() {
        // Klein four-group as xor on 0..4
        let klein = |a: usize, b: usize| a ^ b;
        assert_eq!(classify_abelian(4, 0, &klein, true).unwrap(), vec![2, 2]);
        let z9 = |a: usize, b: usize| (a + b) % 9;
        assert_eq!(classify_abelian(9, 0, &z9, true).unwrap(), vec![9]);
        let bad = |a: usize, b: usize| a.saturating_sub(b);
        assert!(classify_abelian(3, 0, &bad, true).is_err());
    }

    #[test]
    fn products() {
        let p = z(&[10]).direct_product(&z(&[7]));
        assert_eq!(p.group().factors(), &[70]);
        let p = z(&[10]).direct_product(&Group::trivial());
        assert_eq!(p.group().factors(), &[10]);
        assert_eq!(p.embed_left(&e(&[3])), e(&[3]));
        let p = z(&[2]).direct_product(&z(&[4]));
        assert_eq!(p.group().factors(), &[2, 4]);
        let p = z(&[10]).direct_product(&z(&[2, 2]));
        assert_eq!(p.group().factors(), &[2, 2, 10]);
        for a in z(&[10]).elements() {
            for b in z(&[2, 2]).elements() {
                assert_eq!(p.split(&p.pair(&a, &b)), (a.clone(), b.clone()));
            }
        }
    }

    #[test]
    fn sylow() {
        assert!(z(&[10]).sylow_cyclic_nontrivial(2).unwrap());
        assert!(!z(&[4, 4]).sylow_cyclic_nontrivial(2).unwrap());
        assert!(!z(&[7]).sylow_cyclic_nontrivial(2).unwrap());
        assert!(matches!(
            z(&[7]).sylow_cyclic_nontrivial(4),
            Err(Error::NotPrime(4))
        ));
    }

    #[test]
    fn abstract_copy_of_subgroup() {
        let g = z(&[4, 4]);
        let h = Subgroup::closure(&g, &[e(&[0, 2]), e(&[2, 0])]).unwrap();
        let (abs, basis) = h.as_group();
        assert_eq!(abs.factors(), &[2, 2]);
        let images: std::collections::BTreeSet<Element> =
            abs.elements().map(|x| h.map_from_abstract(&basis, &x)).collect();
        assert_eq!(images, h.elements().collect());
    }
}
