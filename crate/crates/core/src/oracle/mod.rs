//! Ground truth for tame Kummer extensions: the ramification index and residue
//! degree of the splitting field of `X^d - u` over an unramified extension of
//! `Q_p`, computed from finite-field discrete logarithms.
//!
//! Write `u = p^v · w` with `w` a unit whose residue lies in `F_q`. With
//! `f0 = ord_d(q)`, the field `K0` obtained by adjoining the `d`-th roots of unity
//! is unramified of degree `f0`, and Kummer theory over `K0` identifies the
//! splitting field with the class of `u` in
//! `K0^× / K0^{×d} ≅ Z/d × F_{q^{f0}}^× / (F_{q^{f0}}^×)^d`.
//! If that class has order `n`, then `e = d / gcd(d, v)` and `f = f0 · n / e`.

mod field;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use field::{FieldElement, FiniteField, MAX_DEGREE, MAX_DLOG_ORDER};

use crate::arith::multiplicative_order_mod;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} outside 1..={MAX_DEGREE}")]
    DegreeOutOfRange(usize),
    #[error("field of {p}^{k} elements does not fit below 2^63")]
    FieldTooLarge { p: u64, k: usize },
    #[error("zero has no multiplicative order or logarithm")]
    ZeroElement,
    #[error("element is not in the subgroup generated by the base")]
    NotInSubgroup,
    #[error("group order {0} is too large for baby-step/giant-step")]
    GroupTooLarge(u64),
    #[error("wild case: p = {p} divides d = {d}")]
    Wild { p: u64, d: u64 },
    #[error("degree d must be positive")]
    ZeroDegree,
}

/// Local invariants of the splitting field of `X^d - u`, relative to the base field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KummerLocalInvariants {
    pub e: u64,
    pub f: u64,
    pub total_degree: u64,
    /// Degree of the unramified layer generated by the `d`-th roots of unity.
    pub f0: u64,
}

fn assemble(d: u64, v: i64, f0: u64, unit_class_order: u64) -> KummerLocalInvariants {
    let e = d / d.gcd(&v.unsigned_abs());
    let n = e.lcm(&unit_class_order);
    let f = f0 * (n / e);
    KummerLocalInvariants { e, f, total_degree: e * f, f0 }
}

/// Invariants of `X^d - p^v w` over the unramified extension of `Q_p` whose residue
/// field is `field` (`F_q`); `w` is the residue of the unit part.
///
/// The unit class is evaluated inside `F_q` itself: if `w = h^y` for a generator `h`
/// of `F_q^×`, its image in `F_{q^{f0}}^×` is `g^{y·S}` with `S = (q^{f0}-1)/(q-1)`,
/// so its order modulo `d`-th powers is `d / gcd(d, y·S)`. This keeps every discrete
/// log in `F_q` however large `q^{f0}` is.
pub fn kummer_local_invariants(
    field: &FiniteField,
    d: u64,
    v: i64,
    w: &FieldElement,
) -> Result<KummerLocalInvariants, OracleError> {
    let p = field.characteristic();
    if d == 0 {
        return Err(OracleError::ZeroDegree);
    }
    if d % p == 0 {
        return Err(OracleError::Wild { p, d });
    }
    if field.is_zero(w) {
        return Err(OracleError::ZeroElement);
    }
    let q = field.size();
    let f0 = multiplicative_order_mod(q % d, d).expect("q is coprime to d");
    let norm_index = (0..f0)
        .scan(1u128, |pw, _| {
            let cur = *pw;
            *pw = *pw * (q % d) as u128 % d as u128;
            Some(cur)
        })
        .sum::<u128>()
        % d as u128;
    let h = field.primitive_element();
    let y = field.discrete_log(&h, w)? as u128;
    let exponent = (y % d as u128) * norm_index % d as u128;
    let class_order = d / d.gcd(&(exponent as u64));
    Ok(assemble(d, v, f0, class_order))
}

/// Convenience form over `Q_p` with `w` given as an integer residue.
pub fn kummer_local_invariants_prime(
    p: u64,
    d: u64,
    v: i64,
    w: i64,
) -> Result<KummerLocalInvariants, OracleError> {
    let field = FiniteField::new(p, 1)?;
    let w = field.from_int(w);
    kummer_local_invariants(&field, d, v, &w)
}

/// The same invariants over `Q_p`, computed by building `F_{p^{f0}}` and taking the
/// discrete log of `w` to a primitive root there. Limited to fields that fit the
/// 64-bit caps and logs below [`MAX_DLOG_ORDER`].
pub fn kummer_local_invariants_in_extension(
    p: u64,
    d: u64,
    v: i64,
    w: i64,
) -> Result<KummerLocalInvariants, OracleError> {
    if d == 0 {
        return Err(OracleError::ZeroDegree);
    }
    if d % p == 0 {
        return Err(OracleError::Wild { p, d });
    }
    let f0 = multiplicative_order_mod(p % d, d).expect("p is coprime to d");
    let ext = FiniteField::new(p, f0 as usize)?;
    let w = ext.from_int(w);
    if ext.is_zero(&w) {
        return Err(OracleError::ZeroElement);
    }
    let g = ext.primitive_element();
    let x = ext.discrete_log(&g, &w)?;
    let class_order = d / d.gcd(&(x % d));
    Ok(assemble(d, v, f0, class_order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        let r = kummer_local_invariants_prime(7, 3, 1, 1).unwrap();
        assert_eq!((r.e, r.f, r.f0), (3, 1, 1));
        let r = kummer_local_invariants_prime(7, 3, 0, 2).unwrap();
        assert_eq!((r.e, r.f, r.f0), (1, 3, 1));
        let r = kummer_local_invariants_prime(5, 3, 1, 1).unwrap();
        assert_eq!((r.e, r.f, r.f0), (3, 2, 2));
        assert_eq!(r.total_degree, 6);
    }

    #[test]
    fn rejects_wild_and_zero() {
        assert!(matches!(
            kummer_local_invariants_prime(3, 9, 1, 1),
            Err(OracleError::Wild { p: 3, d: 9 })
        ));
        assert!(matches!(kummer_local_invariants_prime(7, 3, 0, 7), Err(OracleError::ZeroElement)));
    }

    #[test]
    fn both_routes_agree_on_small_cases() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for d in 1..=12u64 {
                if d % p == 0 {
                    continue;
                }
                let f0 = multiplicative_order_mod(p % d, d).unwrap() as u32;
                if (p as f64).powi(f0 as i32) > 1e9 {
                    continue;
                }
                for v in -2..=3 {
                    for w in 1..p.min(8) as i64 {
                        let a = kummer_local_invariants_prime(p, d, v, w).unwrap();
                        match kummer_local_invariants_in_extension(p, d, v, w) {
                            Ok(b) => assert_eq!(a, b, "p={p} d={d} v={v} w={w}"),
                            Err(OracleError::FieldTooLarge { .. })
                            | Err(OracleError::GroupTooLarge(_))
                            | Err(OracleError::DegreeOutOfRange(_)) => {}
                            Err(e) => panic!("{e}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn extension_base_field() {
        // F_49 contains the 48th roots of unity, so f0 = 1 for d | 48
        let f49 = FiniteField::new(7, 2).unwrap();
        let g = f49.primitive_element();
        // g is not a cube in F_49 (3 | 48), so X^3 - g is unramified of degree 3
        let r = kummer_local_invariants(&f49, 3, 0, &g).unwrap();
        assert_eq!((r.e, r.f, r.f0), (1, 3, 1));
        let cube = f49.pow(&g, 3);
        let r = kummer_local_invariants(&f49, 3, 0, &cube).unwrap();
        assert_eq!((r.e, r.f), (1, 1));
    }

    #[test]
    fn residue_degree_matches_root_count() {
        const LIMIT: u64 = 1_000_000;
        for p in [3u64, 5, 7, 11, 13, 31] {
            for d in 2..=10u64 {
                if d % p == 0 {
                    continue;
                }
                let residues: Vec<i64> = (1..p.min(6) as i64).collect();
                // least k with d roots of X^d - w in F_{p^k}, by counting x^d over the field
                let mut split_at: Vec<Option<u64>> = vec![None; residues.len()];
                for k in 1..=MAX_DEGREE {
                    if p.checked_pow(k as u32).map_or(true, |n| n > LIMIT) || split_at.iter().all(Option::is_some) {
                        break;
                    }
                    let field = FiniteField::new(p, k).unwrap();
                    let mut counts = std::collections::HashMap::new();
                    for x in field.elements() {
                        *counts.entry(field.pow(&x, d)).or_insert(0u64) += 1;
                    }
                    for (slot, &w) in split_at.iter_mut().zip(&residues) {
                        if slot.is_none() && counts.get(&field.from_int(w)) == Some(&d) {
                            *slot = Some(k as u64);
                        }
                    }
                }
                for (slot, &w) in split_at.iter().zip(&residues) {
                    let f = kummer_local_invariants_prime(p, d, 0, w).unwrap().f;
                    match slot {
                        Some(k) => assert_eq!(f, *k, "p={p} d={d} w={w}"),
                        None => assert!(p.checked_pow(f as u32).map_or(true, |n| n > LIMIT)),
                    }
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn invariants_are_tame_and_consistent(
            i in 0usize..12, d in 1u64..=40, v in -50i64..=50, w in 1i64..10_000
        ) {
            let p = [3u64, 5, 7, 11, 13, 101, 257, 1009, 7919, 65537, 999_983, 4_294_967_291][i];
            proptest::prop_assume!(d % p != 0 && w % p as i64 != 0);
            let r = kummer_local_invariants_prime(p, d, v, w).unwrap();
            proptest::prop_assert_eq!(d % r.e, 0);
            proptest::prop_assert_eq!(r.f % r.f0, 0);
            proptest::prop_assert_eq!(r.total_degree, r.e * r.f);
            proptest::prop_assert_eq!(crate::arith::pow_mod(p % r.e, r.f, r.e.max(2)) % r.e, 1 % r.e);
        }

        #[test]
        fn discrete_log_round_trip(i in 0usize..4, a in 1u64..1_000_000, b in 1u64..1_000_000) {
            let (p, k) = [(7u64, 1usize), (3, 5), (5, 4), (1_000_003, 1)][i];
            let field = FiniteField::new(p, k).unwrap();
            let g = field.primitive_element();
            let x = field.element_from_index(1 + a % (field.size() - 1));
            let n = field.discrete_log(&g, &x).unwrap();
            proptest::prop_assert_eq!(field.pow(&g, n), x);
            let base = field.element_from_index(1 + b % (field.size() - 1));
            if let Ok(m) = field.discrete_log(&base, &x) {
                proptest::prop_assert_eq!(field.pow(&base, m), x);
            }
        }
    }
}
