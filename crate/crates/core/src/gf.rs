//! Arithmetic in GF(p^h).
//!
//! Elements are stored as their base-p digit index: the coefficient of `x^i`
//! in the representative polynomial is digit `i`. Index order is the
//! canonical element order used for every deterministic enumeration in the
//! crate (evaluation points, directions, roots).
//!
//! Multiplication goes through discrete log/exp tables built once per field.
//! Addition uses XOR for characteristic 2, a full table for small fields and
//! digit-wise arithmetic otherwise.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 8;

const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("field GF({p}^{h}) is outside the supported range (h <= {MAX_DEGREE}, q <= 2^20)")]
    FieldTooLarge { p: u32, h: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("candidates span only {found} dimensions over the prime field, {wanted} requested")]
    InsufficientRank { wanted: usize, found: usize },
    #[error("modulus {0:?} is not a monic irreducible polynomial of the requested degree")]
    BadModulus(Vec<u32>),
    #[error("element index {index} out of range for field of size {q}")]
    BadElement { index: u32, q: u32 },
}

/// A field element, identified by its canonical index in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    /// `exp[i] = g^i` for the chosen primitive element `g`, `i < q - 1`.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// A finite field GF(p^h) under a fixed monic irreducible modulus.
///
/// Cloning is cheap; the arithmetic tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    h: u32,
    q: u32,
    /// Coefficients of the modulus, low degree first, including the leading 1.
    modulus: Vec<u32>,
    tables: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.h == other.h && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec").field("p", &self.p).field("h", &self.h).field("modulus", &self.modulus).finish()
    }
}

/// Serialized form of a field: `(p, h, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldRecord {
    pub p: u32,
    pub h: u32,
    pub modulus: Vec<u32>,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, h)` with `q = p^h`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut h = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

/// Builds GF(p^h) with the lexicographically smallest monic irreducible
/// modulus, coefficients compared from the constant term upward.
pub fn build_field(p: u32, h: u32) -> Result<FieldSpec, GfError> {
    if !is_prime(p) {
        return Err(GfError::NonPrime(p));
    }
    check_size(p, h)?;
    let modulus = smallest_irreducible(p, h);
    Ok(FieldSpec::from_parts(p, h, modulus))
}

fn check_size(p: u32, h: u32) -> Result<(), GfError> {
    if h == 0 || h > MAX_DEGREE || (p as u64).pow(h) > MAX_FIELD_SIZE {
        return Err(GfError::FieldTooLarge { p, h });
    }
    Ok(())
}

fn smallest_irreducible(p: u32, h: u32) -> Vec<u32> {
    let count = p.pow(h);
    for idx in 0..count {
        // c_0 is the most significant digit of the enumeration index.
        let mut coeffs = vec![0u32; h as usize + 1];
        let mut rest = idx;
        for i in (0..h as usize).rev() {
            coeffs[i] = rest % p;
            rest /= p;
        }
        coeffs[h as usize] = 1;
        if is_irreducible_mod_p(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible_mod_p(poly: &[u32], p: u32) -> bool {
    let deg = match poly.iter().rposition(|&c| c % p != 0) {
        Some(d) => d,
        None => return false,
    };
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d as u32) {
            let mut divisor = vec![0u32; d + 1];
            let mut rest = idx;
            for c in divisor.iter_mut().take(d) {
                *c = rest % p;
                rest /= p;
            }
            divisor[d] = 1;
            if poly_rem_mod_p(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem_mod_p(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r: Vec<u32> = a.iter().map(|&c| c % p).collect();
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let off = r.len() - dm;
            for (i, &mc) in m[..dm].iter().enumerate() {
                let sub = (lead * mc) % p;
                r[off + i] = (r[off + i] + p - sub) % p;
            }
        }
    }
    r
}

impl FieldSpec {
    /// Builds a field from an explicit modulus, checking irreducibility.
    pub fn with_modulus(p: u32, h: u32, modulus: Vec<u32>) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NonPrime(p));
        }
        check_size(p, h)?;
        let ok = modulus.len() == h as usize + 1
            && modulus[h as usize] == 1
            && modulus.iter().all(|&c| c < p)
            && is_irreducible_mod_p(&modulus, p);
        if !ok {
            return Err(GfError::BadModulus(modulus));
        }
        Ok(Self::from_parts(p, h, modulus))
    }

    pub fn from_record(record: &FieldRecord) -> Result<Self, GfError> {
        Self::with_modulus(record.p, record.h, record.modulus.clone())
    }

    pub fn record(&self) -> FieldRecord {
        FieldRecord { p: self.p, h: self.h, modulus: self.modulus.clone() }
    }

    fn from_parts(p: u32, h: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(h);
        let slow = SlowArith { p, h, modulus: &modulus };
        let neg: Vec<u32> = (0..q).map(|a| slow.neg(a)).collect();
        let generator = (1..q).find(|&g| slow.is_primitive(g, q)).expect("GF(q)* is cyclic");
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..q - 1 {
            exp.push(cur);
            log[cur as usize] = i;
            cur = slow.mul(cur, generator);
        }
        let add = (p != 2 && q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = slow.add(a, b);
                }
            }
            t
        });
        FieldSpec { p, h, q, modulus, tables: Arc::new(Tables { exp, log, neg, add }) }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.h
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn element(&self, index: u32) -> Result<FieldElement, GfError> {
        if index < self.q {
            Ok(FieldElement(index))
        } else {
            Err(GfError::BadElement { index, q: self.q })
        }
    }

    /// The prime-field element `k mod p`.
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid(self.p as i64) as u32)
    }

    /// All `q` elements in canonical (ascending index) order.
    pub fn all_elements(&self) -> impl ExactSizeIterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    /// Base-p coefficient vector of `a`, length `h`.
    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        let mut rest = a.0;
        (0..self.h)
            .map(|_| {
                let d = rest % self.p;
                rest /= self.p;
                d
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if let Some(t) = &self.tables.add {
            return FieldElement(t[(a.0 * self.q + b.0) as usize]);
        }
        FieldElement(add_digits(a.0, b.0, self.p))
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.tables.neg[a.0 as usize])
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
        let t = &self.tables;
        let s = t.log[a.0 as usize] + t.log[b.0 as usize];
        let order = self.q - 1;
        FieldElement(t.exp[(if s >= order { s - order } else { s }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let t = &self.tables;
        let order = self.q - 1;
        let l = t.log[a.0 as usize];
        Ok(FieldElement(t.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` by square-and-multiply; negative exponents go through the inverse.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement, GfError> {
        let (mut base, mut e) = if e < 0 { (self.inv(a)?, e.unsigned_abs()) } else { (a, e as u64) };
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Non-negative power; never fails.
    #[inline]
    pub fn pow_u(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = self.tables.log[a.0 as usize] as u64;
        FieldElement(self.tables.exp[((l * (e % order)) % order) as usize])
    }

    /// Evaluates a polynomial (coefficients low degree first) by Horner's rule.
    pub fn eval_poly(&self, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
        coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// All roots of a univariate polynomial, by exhaustive scan, ascending.
    pub fn poly_roots(&self, coeffs: &[FieldElement]) -> Result<Vec<FieldElement>, GfError> {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(GfError::ZeroPolynomial);
        }
        Ok(self.all_elements().filter(|&x| self.eval_poly(coeffs, x).is_zero()).collect())
    }

    /// Greedily picks the first `count` candidates that are linearly
    /// independent over the prime field.
    pub fn subfield_linear_independent(
        &self,
        candidates: &[FieldElement],
        count: usize,
    ) -> Result<Vec<FieldElement>, GfError> {
        let mut sorted = candidates.to_vec();
        sorted.sort();
        sorted.dedup();
        let mut chosen = Vec::new();
        let mut echelon: Vec<Vec<u32>> = Vec::new();
        for &c in &sorted {
            if chosen.len() == count {
                break;
            }
            if let Some(row) = reduce_mod_p(&echelon, self.digits(c), self.p) {
                echelon.push(row);
                chosen.push(c);
            }
        }
        if chosen.len() < count {
            return Err(GfError::InsufficientRank { wanted: count, found: chosen.len() });
        }
        Ok(chosen)
    }
}

fn add_digits(mut a: u32, mut b: u32, p: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Reduces `v` against an echelon basis over GF(p); returns the normalized
/// residual if it is nonzero.
fn reduce_mod_p(echelon: &[Vec<u32>], mut v: Vec<u32>, p: u32) -> Option<Vec<u32>> {
    for row in echelon {
        let pivot = row.iter().position(|&c| c != 0).unwrap();
        let coef = v[pivot];
        if coef != 0 {
            for (x, &r) in v.iter_mut().zip(row) {
                *x = (*x + p - (coef * r) % p) % p;
            }
        }
    }
    let pivot = v.iter().position(|&c| c != 0)?;
    let inv = (1..p).find(|&i| (i * v[pivot]) % p == 1).unwrap();
    for x in v.iter_mut() {
        *x = (*x * inv) % p;
    }
    Some(v)
}

/// Polynomial arithmetic on digit indices, used only while building tables.
struct SlowArith<'a> {
    p: u32,
    h: u32,
    modulus: &'a [u32],
}

impl SlowArith<'_> {
    fn to_digits(&self, mut a: u32) -> Vec<u32> {
        (0..self.h)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn index_of_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        add_digits(a, b, self.p)
    }

    fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.to_digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.index_of_digits(&d)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.to_digits(a), self.to_digits(b));
        let mut prod = vec![0u32; 2 * self.h as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let r = poly_rem_mod_p(&prod, self.modulus, self.p);
        self.index_of_digits(&r)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn is_primitive(&self, g: u32, q: u32) -> bool {
        let order = (q - 1) as u64;
        if order == 1 {
            return g == 1;
        }
        let mut n = order;
        let mut d = 2u64;
        let mut factors = Vec::new();
        while d * d <= n {
            if n.is_multiple_of(d) {
                factors.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            factors.push(n);
        }
        factors.iter().all(|&r| self.pow(g, order / r) != 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(i: u32) -> FieldElement {
        FieldElement(i)
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = build_field(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn gf4_modulus() {
        let f = build_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // omega = x; x * x = x + 1
        assert_eq!(f.mul(fe(2), fe(2)), fe(3));
    }

    #[test]
    fn gf9_modulus_has_no_root() {
        let f = build_field(3, 2).unwrap();
        let m = f.modulus();
        for x in 0..3u32 {
            let v = (m[0] + m[1] * x + m[2] * x * x) % 3;
            assert_ne!(v, 0);
        }
        // x^2 + 1 is the lex-smallest irreducible quadratic over GF(3)
        assert_eq!(m, &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(build_field(4, 1).unwrap_err(), GfError::NonPrime(4));
        assert!(matches!(build_field(2, 21), Err(GfError::FieldTooLarge { .. })));
        assert!(matches!(build_field(3, 13), Err(GfError::FieldTooLarge { .. })));
        assert!(matches!(build_field(2, 0), Err(GfError::FieldTooLarge { .. })));
    }

    #[test]
    fn inverse_in_gf5() {
        let f = build_field(5, 1).unwrap();
        assert_eq!(f.inv(fe(2)).unwrap(), fe(3));
        assert_eq!(f.inv(fe(0)), Err(GfError::DivisionByZero));
    }

    #[test]
    fn pow_semantics() {
        for (p, h) in [(2, 3), (3, 2), (5, 1), (7, 1), (2, 4)] {
            let f = build_field(p, h).unwrap();
            let q = f.q() as i64;
            for a in f.all_elements().skip(1) {
                assert_eq!(f.pow(a, q - 1).unwrap(), FieldElement::ONE);
                assert_eq!(f.pow(a, -1).unwrap(), f.inv(a).unwrap());
                assert_eq!(f.pow(a, 0).unwrap(), FieldElement::ONE);
                for e in 0..2 * q as u64 {
                    assert_eq!(f.pow_u(a, e), f.pow(a, e as i64).unwrap());
                }
            }
            assert_eq!(f.pow(FieldElement::ZERO, -2), Err(GfError::DivisionByZero));
            assert_eq!(f.pow_u(FieldElement::ZERO, 0), FieldElement::ONE);
        }
    }

    #[test]
    fn all_elements_order() {
        let f3 = build_field(3, 1).unwrap();
        assert_eq!(f3.all_elements().collect::<Vec<_>>(), vec![fe(0), fe(1), fe(2)]);
        let f4 = build_field(2, 2).unwrap();
        let e4: Vec<_> = f4.all_elements().collect();
        assert_eq!(e4.len(), 4);
        assert_eq!(e4[0], FieldElement::ZERO);
        let f9 = build_field(3, 2).unwrap();
        let mut e9: Vec<_> = f9.all_elements().collect();
        e9.dedup();
        assert_eq!(e9.len(), 9);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, h) in [(2, 1), (2, 2), (3, 1), (2, 3), (5, 1), (7, 1), (3, 2), (2, 4), (3, 3), (3, 4)] {
            let f = build_field(p, h).unwrap();
            let els: Vec<_> = f.all_elements().collect();
            let step = if f.q() > 27 { 5 } else { 1 };
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                assert_eq!(f.add(a, FieldElement::ZERO), a);
                assert_eq!(f.mul(a, FieldElement::ONE), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for &c in els.iter().step_by(step) {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for (p, h) in [(2, 3), (3, 2), (5, 1), (3, 4), (2, 6)] {
            let f = build_field(p, h).unwrap();
            for a in f.all_elements() {
                for b in f.all_elements() {
                    let lhs = f.pow_u(f.add(a, b), p as u64);
                    let rhs = f.add(f.pow_u(a, p as u64), f.pow_u(b, p as u64));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn large_field_uses_digit_addition() {
        let f = build_field(3, 6).unwrap();
        assert_eq!(f.q(), 729);
        for a in f.all_elements().step_by(7) {
            for b in f.all_elements().step_by(11) {
                let da = f.digits(a);
                let db = f.digits(b);
                let ds = f.digits(f.add(a, b));
                for i in 0..6 {
                    assert_eq!(ds[i], (da[i] + db[i]) % 3);
                }
            }
        }
    }

    #[test]
    fn roots_examples() {
        let f9 = build_field(3, 2).unwrap();
        // X^3 + X
        let poly = [fe(0), fe(1), fe(0), fe(1)];
        let a = f9.poly_roots(&poly).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a[0], FieldElement::ZERO);

        let f4 = build_field(2, 2).unwrap();
        // X^3 - 1
        let poly = [f4.neg(FieldElement::ONE), fe(0), fe(0), fe(1)];
        assert_eq!(f4.poly_roots(&poly).unwrap(), vec![fe(1), fe(2), fe(3)]);

        let f5 = build_field(5, 1).unwrap();
        assert_eq!(f5.poly_roots(&[fe(1), fe(0), fe(1)]).unwrap(), vec![fe(2), fe(3)]);
        assert_eq!(f5.poly_roots(&[fe(0), fe(0)]), Err(GfError::ZeroPolynomial));
    }

    #[test]
    fn trace_zero_set_has_size_q() {
        for (p, h) in [(3, 1), (3, 2), (5, 1)] {
            let f = build_field(p, 2 * h).unwrap();
            let q = p.pow(h) as usize;
            let mut poly = vec![FieldElement::ZERO; q + 1];
            poly[1] = FieldElement::ONE;
            poly[q] = FieldElement::ONE;
            assert_eq!(f.poly_roots(&poly).unwrap().len(), q);
        }
    }

    #[test]
    fn independent_subset() {
        let f9 = build_field(3, 2).unwrap();
        let a = f9.poly_roots(&[fe(0), fe(1), fe(0), fe(1)]).unwrap();
        let pick = f9.subfield_linear_independent(&a, 1).unwrap();
        assert_eq!(pick, vec![a[1]]);
        assert!(f9.subfield_linear_independent(&a, 0).unwrap().is_empty());
        assert!(matches!(
            f9.subfield_linear_independent(&a, 2),
            Err(GfError::InsufficientRank { wanted: 2, found: 1 })
        ));

        let f81 = build_field(3, 4).unwrap();
        let mut poly = vec![FieldElement::ZERO; 10];
        poly[1] = FieldElement::ONE;
        poly[9] = FieldElement::ONE;
        let a = f81.poly_roots(&poly).unwrap();
        assert_eq!(a.len(), 9);
        let pick = f81.subfield_linear_independent(&a, 2).unwrap();
        assert_eq!(pick.len(), 2);
        // rank 2 over GF(3): no multiple of one equals the other
        for k in 0..3 {
            assert_ne!(f81.mul(f81.from_int(k), pick[0]), pick[1]);
        }
    }

    #[test]
    fn record_round_trip() {
        let f = build_field(3, 3).unwrap();
        let g = FieldSpec::from_record(&f.record()).unwrap();
        assert_eq!(f, g);
        assert!(FieldSpec::with_modulus(2, 2, vec![1, 0, 1]).is_err());
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(12), None);
    }

    proptest::proptest! {
        #[test]
        fn roots_match_direct_evaluation(coeffs in proptest::collection::vec(0u32..16, 1..6)) {
            let f = build_field(2, 4).unwrap();
            let poly: Vec<_> = coeffs.iter().map(|&c| FieldElement(c)).collect();
            match f.poly_roots(&poly) {
                Ok(roots) => {
                    for x in f.all_elements() {
                        let is_root = f.eval_poly(&poly, x).is_zero();
                        proptest::prop_assert_eq!(is_root, roots.contains(&x));
                    }
                }
                Err(e) => {
                    proptest::prop_assert_eq!(e, GfError::ZeroPolynomial);
                    proptest::prop_assert!(coeffs.iter().all(|&c| c == 0));
                }
            }
        }

        #[test]
        fn random_axioms_gf3_6(a in 0u32..729, b in 0u32..729, c in 0u32..729) {
            let f = build_field(3, 6).unwrap();
            let (a, b, c) = (FieldElement(a), FieldElement(b), FieldElement(c));
            proptest::prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            proptest::prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        }
    }
}
