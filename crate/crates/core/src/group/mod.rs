//! Finite groups stored as full Cayley tables, with the named constructors
//! and the eligibility predicates built on top of them.

mod classify;
mod iso;
mod spec;

use std::collections::HashMap;

use itertools::Itertools;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::multiplicative_order_mod;

pub use classify::{
    classify, detect_obstructions, frobenius_cyclic_decomposition, sylow_shape, sylow_subgroup,
    ClassificationReport, FrobeniusDecomposition, ObstructionKind, ObstructionWitness, SylowShape,
};
pub use iso::{is_isomorphic, minimal_generating_set};
pub use spec::parse_group_spec;

/// Largest group order accepted by any constructor.
pub const MAX_ORDER: usize = 2048;

/// Orders up to this bound get a full associativity check in [`FiniteGroup::from_table`].
const FULL_ASSOCIATIVITY_LIMIT: usize = 256;
const SPOT_CHECK_TRIPLES: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order {0} exceeds the cap of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("group order must be positive")]
    EmptyGroup,
    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("row or column {0} of the Cayley table is not a permutation")]
    NotLatinSquare(usize),
    #[error("element 0 is not a two-sided identity")]
    IdentityNotZero,
    #[error("table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("semidirect product C{p} x| C{q} with k={k}: {reason}")]
    SemidirectPrecondition { p: u64, q: u64, k: i64, reason: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{p} does not divide the group order {order}")]
    PrimeDoesNotDivide { p: u64, order: usize },
    #[error("cannot parse group spec `{spec}`: {reason}")]
    Parse { spec: String, reason: String },
}

/// A finite group given by its multiplication table. Element `0` is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
    orders: Vec<u32>,
}

/// On-disk form of a group: `{"order": n, "table": [[...]]}` with an optional label.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupTable {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl FiniteGroup {
    /// Builds a group from a trusted multiplication rule (constructors whose
    /// group laws hold by construction).
    fn from_rule(
        label: impl Into<String>,
        order: usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::EmptyGroup);
        }
        if order > MAX_ORDER {
            return Err(GroupError::OrderTooLarge(order));
        }
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let c = mul(a, b);
                debug_assert!(c < order);
                table.push(c as u16);
            }
        }
        Ok(Self::finish(label.into(), order, table))
    }

    fn finish(label: String, order: usize, table: Vec<u16>) -> Self {
        let mut inverses = vec![0u16; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            let b = row.iter().position(|&c| c == 0).expect("latin square row");
            inverses[a] = b as u16;
        }
        let mut orders = vec![0u32; order];
        for g in 0..order {
            let mut x = g;
            let mut n = 1u32;
            while x != 0 {
                x = table[x * order + g] as usize;
                n += 1;
            }
            orders[g] = n;
        }
        FiniteGroup { label, order, table, inverses, orders }
    }

    /// Validates an arbitrary Cayley table: Latin square, identity at index 0 and
    /// associativity (exhaustive up to order 256, spot-checked above).
    pub fn from_table(label: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::EmptyGroup);
        }
        if n > MAX_ORDER {
            return Err(GroupError::OrderTooLarge(n));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotLatinSquare(i));
            }
            for &c in row {
                if c >= n {
                    return Err(GroupError::IndexOutOfRange { index: c, order: n });
                }
                table.push(c as u16);
            }
        }
        let mut seen = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                let c = table[i * n + j] as usize;
                if seen[c] == 2 * i {
                    return Err(GroupError::NotLatinSquare(i));
                }
                seen[c] = 2 * i;
            }
            for j in 0..n {
                let c = table[j * n + i] as usize;
                if seen[c] == 2 * i + 1 {
                    return Err(GroupError::NotLatinSquare(i));
                }
                seen[c] = 2 * i + 1;
            }
        }
        for a in 0..n {
            if table[a] as usize != a || table[a * n] as usize != a {
                return Err(GroupError::IdentityNotZero);
            }
        }
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = at(a, b);
                    for c in 0..n {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..SPOT_CHECK_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(GroupError::NotAssociative(a, b, c));
                }
            }
        }
        Ok(Self::finish(label.into(), n, table))
    }

    pub fn from_json_str(text: &str) -> Result<Self, GroupError> {
        let parsed: GroupTable = serde_json::from_str(text).map_err(|e| GroupError::Parse {
            spec: "<json>".into(),
            reason: e.to_string(),
        })?;
        if parsed.table.len() != parsed.order {
            return Err(GroupError::Parse {
                spec: "<json>".into(),
                reason: format!("order {} but {} table rows", parsed.order, parsed.table.len()),
            });
        }
        let label = parsed.label.unwrap_or_else(|| format!("table{}", parsed.order));
        Self::from_table(label, &parsed.table)
    }

    pub fn to_table(&self) -> GroupTable {
        GroupTable {
            order: self.order,
            table: (0..self.order)
                .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
                .collect(),
            label: Some(self.label.clone()),
        }
    }

    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        Self::from_rule(format!("C{n}"), n, |a, b| (a + b) % n)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("trivial group")
    }

    /// Dihedral group of order `2n`; element `j*n + i` is `r^i s^j`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::EmptyGroup);
        }
        Self::from_rule(format!("D{n}"), 2 * n, |a, b| {
            let (i, s) = (a % n, a / n);
            let (j, t) = (b % n, b / n);
            let rot = if s == 0 { (i + j) % n } else { (i + n - j) % n };
            ((s + t) % 2) * n + rot
        })
    }

    /// Generalized quaternion group of the given order (a power of two, at least 8):
    /// `x^{m} = 1, y^2 = x^{m/2}, y^-1 x y = x^-1` with `m = order / 2`.
    pub fn quaternion(order: usize) -> Result<Self, GroupError> {
        if order < 8 || !order.is_power_of_two() {
            return Err(GroupError::Parse {
                spec: format!("Q{order}"),
                reason: "generalized quaternion order must be a power of two, at least 8".into(),
            });
        }
        let m = order / 2;
        Self::from_rule(format!("Q{order}"), order, |a, b| {
            let (i, s) = (a % m, a / m);
            let (j, t) = (b % m, b / m);
            match (s, t) {
                (0, _) => t * m + (i + j) % m,
                (1, 0) => m + (i + m - j) % m,
                _ => (i + m - j + m / 2) % m,
            }
        })
    }

    /// Symmetric group on `n` points, elements in lexicographic order of images.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        Self::from_permutations(format!("S{n}"), perms)
    }

    /// Alternating group on `n` points.
    pub fn alternating(n: usize) -> Result<Self, GroupError> {
        let perms: Vec<Vec<usize>> = (0..n)
            .permutations(n)
            .filter(|p| permutation_is_even(p))
            .collect();
        Self::from_permutations(format!("A{n}"), perms)
    }

    /// Group of a closed list of permutations whose first entry is the identity.
    /// The product `a * b` applies `a` first.
    fn from_permutations(label: String, perms: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        if perms.len() > MAX_ORDER {
            return Err(GroupError::OrderTooLarge(perms.len()));
        }
        let index: HashMap<&[usize], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        Self::from_rule(label, perms.len().max(1), |a, b| {
            if perms.is_empty() {
                return 0;
            }
            let composed: Vec<usize> = perms[a].iter().map(|&x| perms[b][x]).collect();
            index[composed.as_slice()]
        })
    }

    /// `C_P ⋊ C_Q` with presentation `a^P = b^Q = 1, b^-1 a b = a^k`;
    /// element `j*P + i` is `a^i b^j`.
    pub fn semidirect_cyclic(p: u64, q: u64, k: i64) -> Result<Self, GroupError> {
        let err = |reason: String| GroupError::SemidirectPrecondition { p, q, k, reason };
        if p == 0 || q == 0 {
            return Err(err("orders must be positive".into()));
        }
        let order = p.checked_mul(q).ok_or(GroupError::OrderTooLarge(usize::MAX))?;
        if order > MAX_ORDER as u64 {
            return Err(GroupError::OrderTooLarge(order as usize));
        }
        let kk = k.rem_euclid(p as i64) as u64;
        if p > 1 && kk.gcd(&p) != 1 {
            return Err(err(format!("gcd({k}, {p}) != 1")));
        }
        let ord = multiplicative_order_mod(kk, p).unwrap_or(1);
        if q % ord != 0 {
            return Err(err(format!(
                "{k} has multiplicative order {ord} mod {p}, which does not divide {q}"
            )));
        }
        let (p, q) = (p as usize, q as usize);
        // b^j a^i = a^{i k^{-j}} b^j
        let kinv = crate::arith::inv_mod(kk, p as u64).unwrap_or(0) as usize;
        let mut twist = vec![1usize % p.max(1); q];
        for j in 1..q {
            twist[j] = twist[j - 1] * kinv % p;
        }
        Self::from_rule(format!("SD:{p},{q},{k}"), p * q, |x, y| {
            let (i, j) = (x % p, x / p);
            let (i2, j2) = (y % p, y / p);
            ((j + j2) % q) * p + (i + i2 * twist[j]) % p
        })
    }

    /// Direct product; element `g * |H| + h` is `(g, h)`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self, GroupError> {
        let m = h.order;
        Self::from_rule(format!("{}x{}", g.label, h.label), g.order * m, |a, b| {
            g.mul(a / m, b / m) * m + h.mul(a % m, b % m)
        })
    }

    /// The subgroup on `elements` as a group in its own right. `elements` must be
    /// closed under multiplication; the identity is moved to index 0.
    pub fn induced_subgroup(&self, label: impl Into<String>, elements: &[usize]) -> Self {
        let mut elems = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        debug_assert_eq!(elems.first(), Some(&0));
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Self::from_rule(label, elems.len(), |a, b| pos[&self.mul(elems[a], elems[b])])
            .expect("subgroup within order cap")
    }

    /// The same group with elements renamed: new index `perm[g]` stands for old `g`.
    /// `perm` must be a bijection fixing 0.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self, GroupError> {
        let n = self.order;
        if perm.len() != n || perm.first() != Some(&0) {
            return Err(GroupError::IdentityNotZero);
        }
        let mut inv = vec![usize::MAX; n];
        for (old, &new) in perm.iter().enumerate() {
            if new >= n || inv[new] != usize::MAX {
                return Err(GroupError::NotLatinSquare(old));
            }
            inv[new] = old;
        }
        Self::from_rule(format!("{}'", self.label), n, |a, b| perm[self.mul(inv[a], inv[b])])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `g^-1 x g`
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, g: usize, n: u64) -> usize {
        let n = (n % self.orders[g] as u64) as usize;
        (0..n).fold(0, |acc, _| self.mul(acc, g))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn check_index(&self, g: usize) -> Result<(), GroupError> {
        if g < self.order {
            Ok(())
        } else {
            Err(GroupError::IndexOutOfRange { index: g, order: self.order })
        }
    }

    /// Smallest `n >= 1` with `g^n = 1`.
    pub fn element_order(&self, g: usize) -> Result<u64, GroupError> {
        self.check_index(g)?;
        Ok(self.orders[g] as u64)
    }

    #[inline]
    pub(crate) fn order_of(&self, g: usize) -> u64 {
        self.orders[g] as u64
    }

    pub fn element_orders(&self) -> impl Iterator<Item = u64> + '_ {
        self.orders.iter().map(|&o| o as u64)
    }

    pub fn exponent(&self) -> u64 {
        self.element_orders().fold(1, |acc, o| acc.lcm(&o))
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.iter().any(|&o| o as usize == self.order)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.commute(a, b)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.commute(z, g)))
            .collect()
    }

    /// `[1, g, g^2, ...]`
    pub fn cyclic_subgroup(&self, g: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut x = g;
        while x != 0 {
            out.push(x);
            x = self.mul(x, g);
        }
        out
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut elems = vec![0];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }

    pub fn is_normal(&self, subgroup: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &h in subgroup {
            member[h] = true;
        }
        subgroup
            .iter()
            .all(|&h| (0..self.order).all(|g| member[self.conjugate(h, g)]))
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

fn permutation_is_even(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_group_axioms(g: &FiniteGroup) {
        let n = g.order();
        for a in 0..n {
            assert_eq!(g.mul(0, a), a);
            assert_eq!(g.mul(a, 0), a);
            assert_eq!(g.mul(a, g.inv(a)), 0);
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
        let rows = g.to_table().table;
        FiniteGroup::from_table(g.label(), &rows).unwrap();
    }

    #[test]
    fn constructors_satisfy_group_axioms() {
        for g in [
            FiniteGroup::cyclic(6).unwrap(),
            FiniteGroup::dihedral(5).unwrap(),
            FiniteGroup::quaternion(8).unwrap(),
            FiniteGroup::quaternion(16).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::alternating(4).unwrap(),
            FiniteGroup::semidirect_cyclic(7, 3, 2).unwrap(),
            FiniteGroup::semidirect_cyclic(5, 4, 2).unwrap(),
            FiniteGroup::semidirect_cyclic(9, 6, 2).unwrap(),
            FiniteGroup::direct_product(
                &FiniteGroup::cyclic(2).unwrap(),
                &FiniteGroup::symmetric(3).unwrap(),
            )
            .unwrap(),
        ] {
            assert_group_axioms(&g);
        }
    }

    #[test]
    fn semidirect_relation_holds() {
        let (p, q, k) = (7usize, 3usize, 2i64);
        let g = FiniteGroup::semidirect_cyclic(p as u64, q as u64, k).unwrap();
        let (a, b) = (1, p);
        assert_eq!(g.element_order(a).unwrap(), 7);
        assert_eq!(g.element_order(b).unwrap(), 3);
        assert_eq!(g.conjugate(a, b), g.pow(a, k as u64));
        assert_eq!(g.center(), vec![0]);
    }

    #[test]
    fn semidirect_preconditions() {
        assert!(matches!(
            FiniteGroup::semidirect_cyclic(7, 2, 2),
            Err(GroupError::SemidirectPrecondition { .. })
        ));
        assert!(matches!(
            FiniteGroup::semidirect_cyclic(9, 2, 3),
            Err(GroupError::SemidirectPrecondition { .. })
        ));
        let c5 = FiniteGroup::semidirect_cyclic(5, 1, 1).unwrap();
        assert!(c5.is_cyclic());
        assert_eq!(c5.order(), 5);
    }

    #[test]
    fn element_orders() {
        let c6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(c6.element_order(1).unwrap(), 6);
        assert_eq!(c6.element_order(0).unwrap(), 1);
        assert!(c6.element_order(6).is_err());
        let q8 = FiniteGroup::quaternion(8).unwrap();
        // x = i in the standard presentation
        assert_eq!(q8.element_order(1).unwrap(), 4);
        let profile: Vec<u64> = q8.element_orders().collect();
        assert_eq!(profile.iter().filter(|&&o| o == 4).count(), 6);
        assert_eq!(profile.iter().filter(|&&o| o == 2).count(), 1);
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(matches!(
            FiniteGroup::from_table("x", &[vec![0, 1], vec![1, 1]]),
            Err(GroupError::NotLatinSquare(_))
        ));
        assert!(matches!(
            FiniteGroup::from_table("x", &[vec![1, 0], vec![0, 1]]),
            Err(GroupError::IdentityNotZero)
        ));
        // Latin square with identity 0 that is not associative (order 5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_table("loop", &loop5),
            Err(GroupError::NotAssociative(..))
        ));
        assert!(matches!(FiniteGroup::cyclic(4096), Err(GroupError::OrderTooLarge(4096))));
    }

    #[test]
    fn json_round_trip() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let text = serde_json::to_string(&s3.to_table()).unwrap();
        let back = FiniteGroup::from_json_str(&text).unwrap();
        assert_eq!(back.to_table().table, s3.to_table().table);
    }
}
