//! Finite fields `F_{p^k}` as `F_p[x] / (f)` with `f` the lexicographically least
//! monic irreducible of degree `k`, plus orders and baby-step/giant-step logs.

use std::collections::HashMap;

use super::OracleError;
use crate::arith::{is_prime, mul_mod, pow_mod, prime_divisors};

pub const MAX_DEGREE: usize = 12;
/// Largest group order handled by [`FiniteField::discrete_log`].
pub const MAX_DLOG_ORDER: u64 = 1 << 40;

/// An element of some [`FiniteField`]: coefficients of a polynomial of degree `< k`,
/// constant term first. Arithmetic goes through the owning field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: [u64; MAX_DEGREE],
}

impl FieldElement {
    pub fn coeffs(&self, degree: usize) -> &[u64] {
        &self.coeffs[..degree]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    degree: usize,
    /// Monic modulus, constant term first, length `degree + 1`.
    modulus: Vec<u64>,
    size: u64,
    unit_primes: Vec<u64>,
}

// Dense polynomials over F_p, constant term first, no trailing zeros.
type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = crate::arith::inv_mod(f[df], p).expect("nonzero leading coefficient");
    while r.len() > df {
        let shift = r.len() - 1 - df;
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        for (j, &fj) in f.iter().enumerate() {
            let sub = mul_mod(c, fj, p);
            r[shift + j] = (r[shift + j] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = poly_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `f` of degree `k` is irreducible iff `x^{p^k} ≡ x (mod f)` and
/// `gcd(x^{p^{k/r}} - x, f) = 1` for every prime `r | k`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    // frob[i] = x^{p^i} mod f
    let mut frob = vec![poly_rem(&x, f, p)];
    for i in 1..=k {
        let next = poly_powmod(&frob[i - 1], p, f, p);
        frob.push(next);
    }
    if poly_sub(&frob[k], &x, p) != Vec::<u64>::new() {
        return false;
    }
    prime_divisors(k as u64).into_iter().all(|r| {
        let g = poly_gcd(&poly_sub(&frob[k / r as usize], &x, p), f, p);
        g.len() == 1
    })
}

impl FiniteField {
    /// The field with `p^k` elements. Requires `p` prime, `1 <= k <= 12`, `p^k < 2^63`.
    pub fn new(p: u64, k: usize) -> Result<Self, OracleError> {
        if !is_prime(p) {
            return Err(OracleError::NotPrime(p));
        }
        if k == 0 || k > MAX_DEGREE {
            return Err(OracleError::DegreeOutOfRange(k));
        }
        let size = p
            .checked_pow(k as u32)
            .filter(|&s| s < 1 << 63)
            .ok_or(OracleError::FieldTooLarge { p, k })?;
        let modulus = Self::least_irreducible(p, k);
        Ok(FiniteField { p, degree: k, modulus, size, unit_primes: prime_divisors(size - 1) })
    }

    /// Least monic irreducible of degree `k`, ordering the non-leading coefficients
    /// lexicographically from `x^{k-1}` down to the constant term.
    fn least_irreducible(p: u64, k: usize) -> Poly {
        let mut lower = vec![0u64; k];
        loop {
            let mut f = lower.clone();
            f.push(1);
            if is_irreducible(&f, p) {
                return f;
            }
            // increment as a base-p counter whose least significant digit is the constant term
            let mut i = 0;
            loop {
                lower[i] += 1;
                if lower[i] < p {
                    break;
                }
                lower[i] = 0;
                i += 1;
                assert!(i < k, "an irreducible polynomial of every degree exists");
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: [0; MAX_DEGREE] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, a: i64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = a.rem_euclid(self.p as i64) as u64;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, OracleError> {
        if coeffs.len() > self.degree {
            return Err(OracleError::DegreeOutOfRange(coeffs.len()));
        }
        let mut e = self.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            e.coeffs[i] = c % self.p;
        }
        Ok(e)
    }

    /// The element whose coefficients are the base-`p` digits of `index`.
    pub fn element_from_index(&self, mut index: u64) -> FieldElement {
        let mut e = self.zero();
        for c in e.coeffs.iter_mut().take(self.degree) {
            *c = index % self.p;
            index /= self.p;
        }
        e
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size).map(|i| self.element_from_index(i))
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.coeffs[..self.degree].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut r = self.zero();
        for i in 0..self.degree {
            r.coeffs[i] = ((a.coeffs[i] as u128 + b.coeffs[i] as u128) % self.p as u128) as u64;
        }
        r
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let mut r = self.zero();
        for i in 0..self.degree {
            r.coeffs[i] = (self.p - a.coeffs[i]) % self.p;
        }
        r
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let (k, p) = (self.degree, self.p as u128);
        let mut prod = [0u128; 2 * MAX_DEGREE - 1];
        for i in 0..k {
            if a.coeffs[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + a.coeffs[i] as u128 * b.coeffs[j] as u128) % p;
            }
        }
        for top in (k..2 * k - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for j in 0..k {
                let sub = c * self.modulus[j] as u128 % p;
                prod[top - k + j] = (prod[top - k + j] + p - sub) % p;
            }
        }
        let mut r = self.zero();
        for i in 0..k {
            r.coeffs[i] = prod[i] as u64;
        }
        r
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        if self.degree == 1 {
            let mut r = self.zero();
            r.coeffs[0] = pow_mod(a.coeffs[0], e, self.p);
            return r;
        }
        let mut acc = self.one();
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, OracleError> {
        if self.is_zero(a) {
            return Err(OracleError::ZeroElement);
        }
        Ok(self.pow(a, self.size - 2))
    }

    /// `x -> x^p`
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p)
    }

    /// Least `n >= 1` with `x^n = 1`.
    pub fn multiplicative_order(&self, x: &FieldElement) -> Result<u64, OracleError> {
        if self.is_zero(x) {
            return Err(OracleError::ZeroElement);
        }
        let mut ord = self.size - 1;
        for &r in &self.unit_primes {
            while ord % r == 0 && self.pow(x, ord / r) == self.one() {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// The generator of the unit group with least index.
    pub fn primitive_element(&self) -> FieldElement {
        (1..self.size)
            .map(|i| self.element_from_index(i))
            .find(|x| self.multiplicative_order(x).ok() == Some(self.size - 1))
            .expect("the unit group of a finite field is cyclic")
    }

    /// Least `n >= 0` with `base^n = x`, by baby-step/giant-step over `⟨base⟩`.
    pub fn discrete_log(&self, base: &FieldElement, x: &FieldElement) -> Result<u64, OracleError> {
        let ord = self.multiplicative_order(base)?;
        if self.is_zero(x) {
            return Err(OracleError::ZeroElement);
        }
        if ord >= MAX_DLOG_ORDER {
            return Err(OracleError::GroupTooLarge(ord));
        }
        let m = (ord as f64).sqrt().ceil() as u64;
        let mut baby: HashMap<FieldElement, u64> = HashMap::with_capacity(m as usize);
        let mut cur = self.one();
        for j in 0..m {
            baby.entry(cur).or_insert(j);
            cur = self.mul(&cur, base);
        }
        let giant = self.inv(&self.pow(base, m))?;
        let mut gamma = *x;
        for i in 0..=m {
            if let Some(&j) = baby.get(&gamma) {
                let n = i * m + j;
                if n < ord {
                    return Ok(n);
                }
            }
            gamma = self.mul(&gamma, &giant);
        }
        Err(OracleError::NotInSubgroup)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_small_fields() {
        let f7 = FiniteField::new(7, 1).unwrap();
        assert_eq!(f7.size(), 7);
        let f25 = FiniteField::new(5, 2).unwrap();
        assert_eq!(f25.size(), 25);
        // x^2 + 2 is the least irreducible quadratic over F_5
        assert_eq!(f25.modulus(), &[2, 0, 1]);
        let f243 = FiniteField::new(3, 5).unwrap();
        assert_eq!(f243.size() - 1, 242);
        assert!(matches!(FiniteField::new(6, 1), Err(OracleError::NotPrime(6))));
        assert!(matches!(FiniteField::new(3, 13), Err(OracleError::DegreeOutOfRange(13))));
        assert!(matches!(
            FiniteField::new(1_000_003, 4),
            Err(OracleError::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn modulus_is_least_irreducible_by_brute_force() {
        // an element count check: x^{p^k} = x for every element and the multiplicative
        // group is cyclic of order p^k - 1
        for (p, k) in [(2u64, 3usize), (2, 4), (3, 2), (3, 3), (5, 3), (7, 2)] {
            let f = FiniteField::new(p, k).unwrap();
            for x in f.elements() {
                assert_eq!(f.pow(&x, f.size()), x);
            }
            let g = f.primitive_element();
            assert_eq!(f.multiplicative_order(&g).unwrap(), f.size() - 1);
            // every smaller monic candidate of degree <= 3 has a root, the modulus has none
            if k <= 3 {
                let has_root = |coeffs: &[u64]| {
                    (0..p).any(|r| coeffs.iter().rev().fold(1u64, |acc, &c| (acc * r + c) % p) == 0)
                };
                assert!(!has_root(&f.modulus()[..k]));
                let idx = f.modulus()[..k].iter().rev().fold(0u64, |acc, &c| acc * p + c);
                for lower in 0..idx {
                    let coeffs: Vec<u64> = (0..k).map(|i| lower / p.pow(i as u32) % p).collect();
                    assert!(has_root(&coeffs), "p={p} k={k} lower={lower}");
                }
            }
        }
    }

    #[test]
    fn frobenius_is_an_automorphism() {
        let f = FiniteField::new(3, 4).unwrap();
        let elems: Vec<_> = f.elements().collect();
        let mut images: Vec<_> = elems.iter().map(|x| f.frobenius(x)).collect();
        for x in elems.iter().step_by(7) {
            for y in elems.iter().step_by(11) {
                assert_eq!(f.frobenius(&f.mul(x, y)), f.mul(&f.frobenius(x), &f.frobenius(y)));
                assert_eq!(f.frobenius(&f.add(x, y)), f.add(&f.frobenius(x), &f.frobenius(y)));
            }
        }
        images.sort();
        images.dedup();
        assert_eq!(images.len(), elems.len());
    }

    #[test]
    fn orders_and_logs_in_f7() {
        let f = FiniteField::new(7, 1).unwrap();
        assert_eq!(f.multiplicative_order(&f.from_int(3)).unwrap(), 6);
        assert_eq!(f.multiplicative_order(&f.from_int(1)).unwrap(), 1);
        assert_eq!(f.multiplicative_order(&f.from_int(2)).unwrap(), 3);
        assert!(matches!(f.multiplicative_order(&f.zero()), Err(OracleError::ZeroElement)));
        assert_eq!(f.discrete_log(&f.from_int(3), &f.from_int(2)).unwrap(), 2);
        assert_eq!(f.discrete_log(&f.from_int(3), &f.one()).unwrap(), 0);
        assert!(matches!(
            f.discrete_log(&f.from_int(2), &f.from_int(5)),
            Err(OracleError::NotInSubgroup)
        ));
    }

    #[test]
    fn discrete_log_round_trips_in_extension() {
        let f = FiniteField::new(5, 4).unwrap();
        let g = f.primitive_element();
        for i in (1..f.size()).step_by(13) {
            let x = f.element_from_index(i);
            let n = f.discrete_log(&g, &x).unwrap();
            assert_eq!(f.pow(&g, n), x);
            assert!(n < f.size() - 1);
        }
    }

    #[test]
    fn large_prime_field_arithmetic() {
        let p = 9_223_372_036_854_775_783; // largest prime below 2^63
        let f = FiniteField::new(p, 1).unwrap();
        let a = f.from_int(-2);
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
    }
}
