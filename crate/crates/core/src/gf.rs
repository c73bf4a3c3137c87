//! Exact arithmetic in GF(p^e) for small prime powers.
//!
//! An element is an integer index in `[0, q)`. The base-`p` digits of the
//! index, little-endian, are the coefficients of the element written in the
//! power basis `1, α, α², …` where `α` is a root of the field modulus. So
//! index 0 is zero, index 1 is one, and in a prime field the index is just
//! the residue.
//!
//! Multiplication goes through discrete log / antilog tables built for the
//! smallest-index primitive element. Addition is digit-wise.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    CompositeP(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{e} exceeds the supported limit of 2^16")]
    FieldTooLarge { p: u64, e: u64 },
    #[error("modulus must be monic of degree {expected} (got {got:?})")]
    NonMonicModulus { expected: u32, got: Vec<u32> },
    #[error("modulus coefficient {coeff} is not a residue mod {p}")]
    BadModulusCoefficient { coeff: u32, p: u32 },
    #[error("modulus {0:?} is reducible")]
    ReducibleModulus(Vec<u32>),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {index} out of range for GF({q})")]
    ElementOutOfRange { index: u64, q: u32 },
    #[error("cannot embed GF({from}) into GF({to})")]
    IncompatibleFields { from: u32, to: u32 },
}

/// An element of some GF(q), identified by its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw index without range checking; use [`FieldSpec::element`]
    /// for validated construction.
    #[inline]
    pub const fn from_index_unchecked(index: u32) -> Self {
        FieldElement(index)
    }

    #[inline]
    pub const fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serialized description of a field: `{"p": .., "e": .., "modulus": [c0, …, ce]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescription {
    pub p: u32,
    pub e: u32,
    /// Empty means the default modulus.
    #[serde(default)]
    pub modulus: Vec<u32>,
}

/// A validated finite field together with its arithmetic tables.
///
/// Immutable after construction.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    /// `exp[k] = g^k` for `k in 0..q-1`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q` into `(p, e)`; `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while q % p != 0 {
        p += 1;
    }
    let mut rest = q;
    let mut e = 0u32;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

impl FieldSpec {
    /// Builds GF(p^e). When `modulus` is `None` the lexicographically smallest
    /// monic irreducible of degree `e` is used, ordering candidates by the
    /// integer whose little-endian base-`p` digits are `c0, …, c(e-1)`.
    pub fn new(p: u64, e: u64, modulus: Option<&[u32]>) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::CompositeP(p));
        }
        if e == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = p
            .checked_pow(u32::try_from(e).map_err(|_| GfError::FieldTooLarge { p, e })?)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(GfError::FieldTooLarge { p, e })?;
        let (p, e, q) = (p as u32, e as u32, q as u32);

        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 {
                    return Err(GfError::NonMonicModulus { expected: e, got: m.to_vec() });
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(GfError::BadModulusCoefficient { coeff: c, p });
                }
                if !fp_poly::is_irreducible(m, p) {
                    return Err(GfError::ReducibleModulus(m.to_vec()));
                }
                m.to_vec()
            }
            None => default_modulus(p, e),
        };

        let mut spec = FieldSpec { p, e, q, modulus, generator: 0, exp: Vec::new(), log: Vec::new() };
        spec.build_tables();
        Ok(spec)
    }

    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Self, GfError> {
        Self::new(p, 1, None)
    }

    /// GF(q) for a prime power `q` with the default modulus.
    pub fn of_order(q: u64) -> Result<Self, GfError> {
        let (p, e) = prime_power(q).ok_or(GfError::CompositeP(q))?;
        Self::new(p as u64, e as u64, None)
    }

    pub fn from_description(desc: &FieldDescription) -> Result<Self, GfError> {
        let modulus = (!desc.modulus.is_empty()).then_some(desc.modulus.as_slice());
        Self::new(desc.p as u64, desc.e as u64, modulus)
    }

    pub fn description(&self) -> FieldDescription {
        FieldDescription { p: self.p, e: self.e, modulus: self.modulus.clone() }
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let n = (q - 1) as usize;
        // Smallest-index element whose powers hit every nonzero element.
        let mut exp = vec![0u32; n];
        for g in 1..q {
            exp[0] = 1;
            let mut x = 1u32;
            let mut order = 0usize;
            loop {
                x = self.mul_slow(x, g);
                order += 1;
                if x == 1 || order >= n {
                    break;
                }
                exp[order] = x;
            }
            if x == 1 && order == n {
                self.generator = g;
                break;
            }
        }
        debug_assert!(self.generator != 0, "multiplicative group is cyclic");
        let mut log = vec![0u32; q as usize];
        for (k, &x) in exp.iter().enumerate() {
            log[x as usize] = k as u32;
        }
        self.exp = exp;
        self.log = log;
    }

    /// Polynomial multiplication modulo the modulus; only used to build tables.
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let da = self.digits(a);
        let db = self.digits(b);
        let e = self.e as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * e];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (e..2 * e).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            // x^k = x^(k-e) * x^e and x^e = -(c0 + … + c(e-1) x^(e-1))
            prod[k] = 0;
            for (i, &m) in self.modulus[..e].iter().enumerate() {
                prod[k - e + i] = (prod[k - e + i] + (p - m as u64) * c) % p;
            }
        }
        self.from_digits(prod[..e].iter().map(|&c| c as u32))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element used for the log tables.
    pub fn generator(&self) -> FieldElement {
        FieldElement(self.generator)
    }

    pub fn element(&self, index: u64) -> Result<FieldElement, GfError> {
        if index < self.q as u64 {
            Ok(FieldElement(index as u32))
        } else {
            Err(GfError::ElementOutOfRange { index, q: self.q })
        }
    }

    /// The image of the integer `n` in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    /// Base-`p` digits of an index, little-endian, always `e` long.
    pub fn digits(&self, x: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.e as usize);
        let mut rest = x;
        for _ in 0..self.e {
            out.push(rest % self.p);
            rest /= self.p;
        }
        out
    }

    fn from_digits(&self, digits: impl DoubleEndedIterator<Item = u32>) -> u32 {
        digits.rev().fold(0u32, |acc, d| acc * self.p + d)
    }

    /// All elements in increasing index order.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl ExactSizeIterator<Item = FieldElement> + Clone {
        (1..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.e == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while x != 0 || y != 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        if self.e == 1 {
            return FieldElement(self.p - a.0);
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while x != 0 {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.q - 1;
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[(if k >= n { k - n } else { k }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.0 == 0 {
            return Err(GfError::DivisionByZero);
        }
        let n = self.q - 1;
        let k = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((n - k) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n` with the convention `0^0 = 1`.
    #[inline]
    pub fn pow(&self, a: FieldElement, n: u64) -> FieldElement {
        if n == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let order = (self.q - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (n % order)) % order;
        FieldElement(self.exp[k as usize])
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: FieldElement, k: u32) -> FieldElement {
        if a.0 == 0 {
            return a;
        }
        let order = (self.q - 1) as u64;
        let mut exponent = 1u64;
        for _ in 0..(k % self.e) {
            exponent = exponent * self.p as u64 % order.max(1);
        }
        self.pow(a, exponent.max(1))
    }

    /// Builds the embedding of `self` into `target`, sending the modulus root
    /// to its smallest-index root in `target`.
    pub fn embedding_into(&self, target: &FieldSpec) -> Result<Embedding, GfError> {
        let incompatible = GfError::IncompatibleFields { from: self.q, to: target.q };
        if self.p != target.p || target.e % self.e != 0 {
            return Err(incompatible);
        }
        let root = target
            .elements()
            .find(|&b| {
                let value = self.modulus.iter().rev().fold(FieldElement::ZERO, |acc, &c| {
                    target.add(target.mul(acc, b), target.from_int(c as i64))
                });
                value.is_zero()
            })
            .ok_or(incompatible)?;
        let mut root_powers = Vec::with_capacity(self.e as usize);
        let mut acc = FieldElement::ONE;
        for _ in 0..self.e {
            root_powers.push(acc);
            acc = target.mul(acc, root);
        }
        let image = self
            .elements()
            .map(|x| {
                self.digits(x.0).iter().zip(&root_powers).fold(FieldElement::ZERO, |s, (&c, &rp)| {
                    target.add(s, target.mul(target.from_int(c as i64), rp))
                })
            })
            .collect();
        Ok(Embedding { root, image })
    }

    /// Embeds a single element; see [`FieldSpec::embedding_into`].
    pub fn embed(&self, x: FieldElement, target: &FieldSpec) -> Result<FieldElement, GfError> {
        Ok(self.embedding_into(target)?.apply(x))
    }

    /// `GF(q^m)` with its default modulus.
    pub fn extension(&self, m: u32) -> Result<FieldSpec, GfError> {
        FieldSpec::new(self.p as u64, self.e as u64 * m as u64, None)
    }
}

/// A precomputed ring embedding GF(p^e) → GF(p^(em)).
#[derive(Debug, Clone)]
pub struct Embedding {
    root: FieldElement,
    image: Vec<FieldElement>,
}

impl Embedding {
    /// The image of the source modulus root.
    pub fn root(&self) -> FieldElement {
        self.root
    }

    #[inline]
    pub fn apply(&self, x: FieldElement) -> FieldElement {
        self.image[x.0 as usize]
    }
}

fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(e);
    (0..count)
        .map(|n| {
            let mut coeffs = Vec::with_capacity(e as usize + 1);
            let mut rest = n;
            for _ in 0..e {
                coeffs.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            coeffs.push(1);
            coeffs
        })
        .find(|m| fp_poly::is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Dense polynomials over GF(p), coefficients low-to-high. Only what modulus
/// validation needs.
pub(crate) mod fp_poly {
    fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut result = 1u64;
        let mut base = a % p;
        let mut n = p - 2;
        while n > 0 {
            if n & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            n >>= 1;
        }
        result
    }

    fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let k = r.len() - 1;
            let c = r[k] * lead_inv % p;
            for (i, &mi) in m.iter().enumerate() {
                let idx = k - dm + i;
                r[idx] = (r[idx] + (p - c) * mi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    fn pow_mod(a: &[u64], mut n: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = rem(&[1], m, p);
        let mut base = rem(a, m, p);
        while n > 0 {
            if n & 1 == 1 {
                result = mul_mod(&result, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            n >>= 1;
        }
        result
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or test: `f` of degree `e` is irreducible iff
    /// `gcd(x^(p^k) - x, f) = 1` for every `1 <= k <= e/2`.
    pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
        let p = p as u64;
        let f: Vec<u64> = f.iter().map(|&c| c as u64).collect();
        let e = f.len() - 1;
        if e == 0 {
            return false;
        }
        if e == 1 {
            return true;
        }
        let x = [0u64, 1];
        let mut frob = rem(&x, &f, p);
        for _ in 1..=e / 2 {
            frob = pow_mod(&frob, p, &f, p);
            let mut diff = frob.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            if diff.is_empty() {
                return false;
            }
            if gcd(&f, &diff, p).len() > 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> FieldSpec {
        FieldSpec::new(2, 2, Some(&[1, 1, 1])).unwrap()
    }

    fn fe(i: u32) -> FieldElement {
        FieldElement::from_index_unchecked(i)
    }

    /// Irreducibility by exhaustive search for a monic factor of degree ≤ e/2.
    fn irreducible_by_trial_division(f: &[u32], p: u32) -> bool {
        let e = f.len() - 1;
        let p64 = p as u64;
        for deg in 1..=e / 2 {
            for n in 0..p64.pow(deg as u32) {
                let mut g: Vec<u64> = (0..deg).map(|i| (n / p64.pow(i as u32)) % p64).collect();
                g.push(1);
                // long division of f by monic g
                let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
                for k in (deg..=e).rev() {
                    let c = r[k];
                    if c == 0 {
                        continue;
                    }
                    for (i, &gi) in g.iter().enumerate() {
                        r[k - deg + i] = (r[k - deg + i] + (p64 - c) * gi) % p64;
                    }
                }
                if r.iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn prime_field_construction() {
        let f = FieldSpec::new(2, 1, None).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![fe(0), fe(1)]);
    }

    #[test]
    fn gf4_explicit_modulus() {
        let f = gf4();
        assert_eq!(f.q(), 4);
        assert_eq!(f.mul(fe(2), fe(2)), fe(3));
        assert_eq!(f.inv(fe(2)).unwrap(), fe(3));
        assert_eq!(f.elements().map(|x| x.index()).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn reducible_and_malformed_moduli() {
        assert!(matches!(FieldSpec::new(2, 2, Some(&[0, 0, 1])), Err(GfError::ReducibleModulus(_))));
        assert!(matches!(FieldSpec::new(2, 2, Some(&[1, 1, 0])), Err(GfError::NonMonicModulus { .. })));
        assert!(matches!(FieldSpec::new(2, 2, Some(&[1, 1])), Err(GfError::NonMonicModulus { .. })));
        assert!(matches!(FieldSpec::new(3, 2, Some(&[1, 5, 1])), Err(GfError::BadModulusCoefficient { .. })));
        assert_eq!(FieldSpec::new(4, 1, None).unwrap_err(), GfError::CompositeP(4));
        assert_eq!(FieldSpec::new(2, 17, None).unwrap_err(), GfError::FieldTooLarge { p: 2, e: 17 });
        assert_eq!(FieldSpec::new(3, 0, None).unwrap_err(), GfError::ZeroDegree);
        assert!(FieldSpec::new(2, 16, None).is_ok());
    }

    #[test]
    fn fermat_in_gf5() {
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(f.pow(fe(3), 4), fe(1));
        assert_eq!(f.elements().count(), 5);
    }

    #[test]
    fn gf9_has_nine_elements() {
        let f = FieldSpec::of_order(9).unwrap();
        assert_eq!(f.elements().count(), 9);
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn default_moduli_are_smallest_irreducibles() {
        assert_eq!(FieldSpec::of_order(4).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldSpec::of_order(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldSpec::of_order(16).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(FieldSpec::of_order(25).unwrap().modulus(), &[2, 0, 1]);
        assert_eq!(FieldSpec::of_order(27).unwrap().modulus(), &[1, 2, 0, 1]);
    }

    #[test]
    fn ben_or_matches_trial_division() {
        for (p, e) in [(2u32, 2u32), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let total = (p as u64).pow(e);
            for n in 0..total {
                let mut f: Vec<u32> = (0..e).map(|i| ((n / (p as u64).pow(i)) % p as u64) as u32).collect();
                f.push(1);
                assert_eq!(
                    fp_poly::is_irreducible(&f, p),
                    irreducible_by_trial_division(&f, p),
                    "p={p} f={f:?}"
                );
            }
        }
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert_eq!(gf4().inv(FieldElement::ZERO), Err(GfError::DivisionByZero));
    }

    fn small_fields() -> Vec<FieldSpec> {
        [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16].iter().map(|&q| FieldSpec::of_order(q).unwrap()).collect()
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in small_fields() {
            for a in f.elements() {
                assert_eq!(f.add(a, FieldElement::ZERO), a);
                assert_eq!(f.mul(a, FieldElement::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, b), FieldElement(f.mul_slow(a.0, b.0)));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn power_identities() {
        for f in small_fields() {
            let q = f.q() as u64;
            for a in f.elements() {
                assert_eq!(f.pow(a, q), a);
                if !a.is_zero() {
                    assert_eq!(f.pow(a, q - 1), FieldElement::ONE);
                }
            }
        }
    }

    #[test]
    fn frobenius_is_a_ring_homomorphism() {
        for f in small_fields() {
            for k in 0..=f.e() {
                for a in f.elements() {
                    assert_eq!(f.frobenius(a, k), f.pow(a, (f.p() as u64).pow(k)));
                    for b in f.elements() {
                        assert_eq!(f.frobenius(f.add(a, b), k), f.add(f.frobenius(a, k), f.frobenius(b, k)));
                        assert_eq!(f.frobenius(f.mul(a, b), k), f.mul(f.frobenius(a, k), f.frobenius(b, k)));
                    }
                }
            }
        }
    }

    #[test]
    fn embedding_examples() {
        let gf2 = FieldSpec::prime(2).unwrap();
        let gf4 = gf4();
        let gf16 = FieldSpec::of_order(16).unwrap();
        assert_eq!(gf2.embed(FieldElement::ONE, &gf4).unwrap(), FieldElement::ONE);
        assert_eq!(gf4.embed(FieldElement::ZERO, &gf16).unwrap(), FieldElement::ZERO);

        // smallest-index root of x^2 + x + 1 in GF(16), by exhaustive search
        let root = gf16
            .elements()
            .find(|&b| gf16.add(gf16.add(gf16.mul(b, b), b), FieldElement::ONE).is_zero())
            .unwrap();
        assert_eq!(gf4.embed(fe(2), &gf16).unwrap(), root);

        let gf8 = FieldSpec::of_order(8).unwrap();
        assert!(matches!(gf4.embed(fe(1), &gf8), Err(GfError::IncompatibleFields { .. })));
        let gf9 = FieldSpec::of_order(9).unwrap();
        assert!(matches!(gf4.embedding_into(&gf9), Err(GfError::IncompatibleFields { .. })));
    }

    #[test]
    fn embedding_commutes_with_arithmetic() {
        let pairs = [
            (FieldSpec::prime(2).unwrap(), gf4()),
            (gf4(), FieldSpec::of_order(16).unwrap()),
            (FieldSpec::prime(3).unwrap(), FieldSpec::of_order(9).unwrap()),
        ];
        for (src, dst) in &pairs {
            let emb = src.embedding_into(dst).unwrap();
            assert_eq!(emb.apply(FieldElement::ZERO), FieldElement::ZERO);
            assert_eq!(emb.apply(FieldElement::ONE), FieldElement::ONE);
            for a in src.elements() {
                for b in src.elements() {
                    assert_eq!(emb.apply(src.add(a, b)), dst.add(emb.apply(a), emb.apply(b)));
                    assert_eq!(emb.apply(src.mul(a, b)), dst.mul(emb.apply(a), emb.apply(b)));
                }
            }
        }
    }

    #[test]
    fn generator_is_smallest_primitive() {
        for f in small_fields() {
            let n = f.q() as u64 - 1;
            let g = f.generator();
            let is_primitive = |x: FieldElement| (1..n).all(|k| f.pow(x, k) != FieldElement::ONE);
            assert!(is_primitive(g));
            for smaller in 1..g.index() {
                assert!(!is_primitive(fe(smaller)));
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
