//! Finite fields `GF(p^k)` in polynomial representation.
//!
//! Elements are coefficient vectors `c0 + c1 x + ... + c_{k-1} x^{k-1}` reduced by a
//! monic irreducible modulus. The modulus is the least irreducible polynomial of
//! degree `k` when coefficient vectors are compared from the constant term up.

use std::fmt;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::group::{Element, Group};

/// Largest supported field size.
pub const MAX_FIELD_ORDER: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(Vec<u32>);

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
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

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, `k + 1` coefficients from the constant term up.
    modulus: Vec<u32>,
}

impl FiniteField {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k < 1 {
            return Err(Error::invalid("extension degree must be >= 1"));
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::invalid(format!("GF({p}^{k}) exceeds {MAX_FIELD_ORDER}")))?
            as u32;
        let modulus = least_irreducible(p, k);
        Ok(FiniteField { p, k, q, modulus })
    }

    /// `GF(q)` for a prime power `q`.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, k) = crate::arith::prime_power(q as u64)
            .ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
        Self::new(p as u32, k)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(vec![0; self.k as usize])
    }

    pub fn one(&self) -> FieldElement {
        let mut c = vec![0; self.k as usize];
        c[0] = 1;
        FieldElement(c)
    }

    /// Element from coefficients (constant term first); missing high coefficients
    /// are zero.
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.k as usize {
            return Err(Error::invalid(format!(
                "{} coefficients for a degree-{} extension",
                coeffs.len(),
                self.k
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::invalid(format!("coefficient {c} not reduced mod {}", self.p)));
        }
        let mut c = coeffs.to_vec();
        c.resize(self.k as usize, 0);
        Ok(FieldElement(c))
    }

    /// Base-`p` digits of `i`, least significant first.
    pub fn from_index(&self, mut i: u32) -> FieldElement {
        let mut c = vec![0; self.k as usize];
        for slot in c.iter_mut() {
            *slot = i % self.p;
            i /= self.p;
        }
        FieldElement(c)
    }

    pub fn index(&self, a: &FieldElement) -> u32 {
        a.0.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| self.from_index(i))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.p).collect())
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p as u64;
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.0.iter().enumerate() {
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let t = prod[d - k + i] + (p - c) * m as u64;
                prod[d - k + i] = t % p;
            }
        }
        FieldElement(prod[..k].iter().map(|&c| c as u32).collect())
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a == &self.zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    /// The additive group `Z(p, ..., p)` (k copies) and the coordinate bijection.
    pub fn additive_group(&self) -> AdditiveGroup {
        let group = Group::new(&vec![self.p; self.k as usize]).expect("p >= 2");
        AdditiveGroup {
            field: self.clone(),
            group,
        }
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

/// `(F, +)` as a [`Group`]: coefficient `i` is coordinate `i`.
#[derive(Clone, Debug)]
pub struct AdditiveGroup {
    field: FiniteField,
    group: Group,
}

impl AdditiveGroup {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn to_group(&self, a: &FieldElement) -> Element {
        Element::from_coords(a.0.clone())
    }

    pub fn from_group(&self, a: &Element) -> FieldElement {
        FieldElement(a.coords().to_vec())
    }
}

fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    // den is monic
    let p = p as u64;
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    while r.len() > dd {
        let c = *r.last().expect("nonempty");
        let shift = r.len() - 1 - dd;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * d as u64) % p;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

fn monic_polys(p: u32, degree: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(degree);
    (0..count).map(move |mut i| {
        let mut c = vec![0u32; degree as usize + 1];
        // constant term is the most significant digit of the enumeration order
        for slot in c[..degree as usize].iter_mut().rev() {
            *slot = (i % p as u64) as u32;
            i /= p as u64;
        }
        c[degree as usize] = 1;
        c
    })
}

pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let degree = poly.len() as u32 - 1;
    (1..=degree / 2).all(|d| {
        monic_polys(p, d).all(|f| poly_rem(poly, &f, p).iter().any(|&c| c != 0))
    })
}

fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    monic_polys(p, k)
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}
