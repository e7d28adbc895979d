#![allow(dead_code)]

use hgkit::arith::multiplicative_order_mod;
use hgkit::FiniteGroup;
use num_integer::Integer;

/// `(P, Q, k)` for every valid `C_P ⋊ C_Q` with `P, Q >= 2`, `PQ <= max_order`
/// and `1 <= k < P`.
pub fn semidirect_params(max_order: u64) -> Vec<(u64, u64, i64)> {
    let mut out = Vec::new();
    for p in 2..=max_order / 2 {
        for q in 2..=max_order / p {
            for k in 1..p {
                if k.gcd(&p) != 1 {
                    continue;
                }
                if q % multiplicative_order_mod(k, p).unwrap() == 0 {
                    out.push((p, q, k as i64));
                }
            }
        }
    }
    out
}

/// Named groups of the classification corpus, excluding the semidirect products.
pub fn named_specs(max_cyclic: usize, max_dihedral: usize) -> Vec<String> {
    let mut specs: Vec<String> = (2..=max_cyclic).map(|n| format!("C{n}")).collect();
    specs.extend((2..=max_dihedral).map(|n| format!("D{n}")));
    specs.extend(["Q8", "Q16", "Q32", "S4", "A4", "A5"].map(String::from));
    specs
}

/// Direct products of small corpus members with order at most 512.
pub fn product_specs() -> Vec<String> {
    let factors = [
        "C2", "C3", "C4", "C5", "C7", "C8", "C9", "D3", "D4", "D5", "Q8", "Q16", "S4", "A4", "SD:7,3,2",
        "SD:5,4,2", "SD:11,5,3",
    ];
    let mut specs = Vec::new();
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i..] {
            let g = format!("X:{a}*{b}");
            if hgkit::group::parse_group_spec(&g).map_or(false, |g| g.order() <= 512) {
                specs.push(g);
            }
        }
    }
    specs
}

pub fn frobenius_expected(p: u64, q: u64, k: i64) -> bool {
    hgkit::arith::prime_divisors(p)
        .into_iter()
        .all(|l| multiplicative_order_mod(k.rem_euclid(l as i64) as u64, l) == Some(q))
}

pub fn sd(p: u64, q: u64, k: i64) -> FiniteGroup {
    FiniteGroup::semidirect_cyclic(p, q, k).unwrap()
}
