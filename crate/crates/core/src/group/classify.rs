use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GroupError};
use crate::arith::{factorize, is_prime, is_prime_power, prime_divisors};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ObstructionKind {
    /// A commuting pair of equal prime order generating `C_q x C_q`.
    NonCyclicAbelian,
    /// An element whose order has at least two prime divisors.
    CompositeOrderElement,
    /// An element of order exactly 4.
    OrderFourElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionWitness {
    pub kind: ObstructionKind,
    pub witness: Vec<usize>,
}

impl ObstructionWitness {
    /// Recomputes orders and commutation from the Cayley table.
    pub fn verify(&self, g: &FiniteGroup) -> bool {
        if self.witness.iter().any(|&x| x >= g.order()) {
            return false;
        }
        match (self.kind, self.witness.as_slice()) {
            (ObstructionKind::NonCyclicAbelian, &[a, b]) => {
                let q = g.order_of(a);
                is_prime(q)
                    && g.order_of(b) == q
                    && g.commute(a, b)
                    && !g.cyclic_subgroup(a).contains(&b)
            }
            (ObstructionKind::CompositeOrderElement, &[a]) => prime_divisors(g.order_of(a)).len() >= 2,
            (ObstructionKind::OrderFourElement, &[a]) => g.order_of(a) == 4,
            _ => false,
        }
    }
}

/// The three element-level obstructions, each reported at most once with a witness,
/// in the order `NonCyclicAbelian`, `CompositeOrderElement`, `OrderFourElement`.
pub fn detect_obstructions(g: &FiniteGroup) -> Vec<ObstructionWitness> {
    let mut out = Vec::new();
    if let Some(pair) = non_cyclic_abelian_pair(g) {
        out.push(ObstructionWitness {
            kind: ObstructionKind::NonCyclicAbelian,
            witness: vec![pair.0, pair.1],
        });
    }
    if let Some(x) = (0..g.order()).find(|&x| prime_divisors(g.order_of(x)).len() >= 2) {
        out.push(ObstructionWitness {
            kind: ObstructionKind::CompositeOrderElement,
            witness: vec![x],
        });
    }
    if let Some(x) = (0..g.order()).find(|&x| g.order_of(x) == 4) {
        out.push(ObstructionWitness { kind: ObstructionKind::OrderFourElement, witness: vec![x] });
    }
    out
}

fn non_cyclic_abelian_pair(g: &FiniteGroup) -> Option<(usize, usize)> {
    for q in prime_divisors(g.order() as u64) {
        let of_order_q: Vec<usize> = (0..g.order()).filter(|&x| g.order_of(x) == q).collect();
        for (i, &a) in of_order_q.iter().enumerate() {
            let span = g.cyclic_subgroup(a);
            if let Some(&b) = of_order_q[i + 1..]
                .iter()
                .find(|&&b| g.commute(a, b) && !span.contains(&b))
            {
                return Some((a, b));
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SylowShape {
    Cyclic(u64),
    GeneralizedQuaternion(u64),
    Other(u64),
}

impl SylowShape {
    pub fn order(&self) -> u64 {
        match *self {
            SylowShape::Cyclic(n) | SylowShape::GeneralizedQuaternion(n) | SylowShape::Other(n) => n,
        }
    }
}

/// Elements of one Sylow `p`-subgroup, sorted.
///
/// Grows a `p`-subgroup `S` one factor of `p` at a time by an element `x` of
/// `p`-power order that normalizes `S` with `x^p ∈ S`. Such an `x` exists while
/// `S` is not Sylow (the normalizer of `S` inside a Sylow subgroup containing it
/// is strictly larger), so the search never has to backtrack.
pub fn sylow_subgroup(g: &FiniteGroup, p: u64) -> Result<Vec<usize>, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    let n = g.order() as u64;
    let target = match factorize(n).get(&p) {
        Some(&a) => p.pow(a as u32) as usize,
        None => return Err(GroupError::PrimeDoesNotDivide { p, order: g.order() }),
    };
    let p_elements: Vec<usize> = (1..g.order())
        .filter(|&x| prime_divisors(g.order_of(x)) == [p])
        .collect();
    let mut member = vec![false; g.order()];
    member[0] = true;
    let mut elems = vec![0usize];
    let mut gens: Vec<usize> = Vec::new();
    while elems.len() < target {
        let x = p_elements
            .iter()
            .copied()
            .find(|&x| {
                !member[x]
                    && member[g.pow(x, p)]
                    && gens.iter().all(|&s| member[g.conjugate(s, x)])
            })
            .expect("a p-subgroup below Sylow order has a proper normalizing extension");
        let mut coset_rep = x;
        let base = elems.clone();
        for _ in 1..p {
            for &s in &base {
                let y = g.mul(s, coset_rep);
                debug_assert!(!member[y]);
                member[y] = true;
                elems.push(y);
            }
            coset_rep = g.mul(coset_rep, x);
        }
        gens.push(x);
    }
    elems.sort_unstable();
    Ok(elems)
}

/// Shape of a Sylow `p`-subgroup: cyclic, generalized quaternion (order at least 8,
/// unique involution, cyclic index-2 subgroup inverted by an element of order 4), or other.
pub fn sylow_shape(g: &FiniteGroup, p: u64) -> Result<SylowShape, GroupError> {
    let s = sylow_subgroup(g, p)?;
    Ok(shape_of_p_subgroup(g, p, &s))
}

fn shape_of_p_subgroup(g: &FiniteGroup, p: u64, s: &[usize]) -> SylowShape {
    let n = s.len() as u64;
    if s.iter().any(|&x| g.order_of(x) == n) {
        return SylowShape::Cyclic(n);
    }
    if p == 2 && n >= 8 && is_generalized_quaternion(g, s) {
        return SylowShape::GeneralizedQuaternion(n);
    }
    SylowShape::Other(n)
}

fn is_generalized_quaternion(g: &FiniteGroup, s: &[usize]) -> bool {
    let n = s.len() as u64;
    if s.iter().filter(|&&x| g.order_of(x) == 2).count() != 1 {
        return false;
    }
    let Some(&x) = s.iter().find(|&&x| g.order_of(x) == n / 2) else {
        return false;
    };
    let span = g.cyclic_subgroup(x);
    let x_inv = g.inv(x);
    s.iter()
        .any(|&y| !span.contains(&y) && g.order_of(y) == 4 && g.conjugate(x, y) == x_inv)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusDecomposition {
    pub kernel_order: u64,
    pub complement_order: u64,
    pub kernel: Vec<usize>,
    pub complement: Vec<usize>,
}

/// Searches for `G = K ⋊ H` with `K` cyclic normal, `H` cyclic, `|K|, |H| > 1` coprime,
/// and `C_G(k) ∩ H = 1` for every `k ∈ K \ {1}`.
///
/// A normal Hall subgroup is the only one of its order and all its complements are
/// conjugate, so one complement per candidate kernel decides the question.
pub fn frobenius_cyclic_decomposition(g: &FiniteGroup) -> Option<FrobeniusDecomposition> {
    let n = g.order() as u64;
    let mut tried_orders = Vec::new();
    for k_gen in 1..g.order() {
        let p = g.order_of(k_gen);
        let q = n / p;
        if q == 1 || p.gcd(&q) != 1 || tried_orders.contains(&p) {
            continue;
        }
        let kernel = g.cyclic_subgroup(k_gen);
        if !g.is_normal(&kernel) {
            continue;
        }
        tried_orders.push(p);
        let Some(h_gen) = (1..g.order()).find(|&h| g.order_of(h) == q) else {
            continue;
        };
        let complement = g.cyclic_subgroup(h_gen);
        let fixed_point_free = kernel[1..]
            .iter()
            .all(|&k| complement[1..].iter().all(|&h| !g.commute(k, h)));
        if fixed_point_free {
            let mut kernel = kernel;
            let mut complement = complement;
            kernel.sort_unstable();
            complement.sort_unstable();
            return Some(FrobeniusDecomposition {
                kernel_order: p,
                complement_order: q,
                kernel,
                complement,
            });
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub group_label: String,
    pub order: u64,
    pub is_trivial: bool,
    /// Cyclic of order 2 or an odd prime power, or Frobenius with such cyclic
    /// kernel and complement: the groups admitting a Hilbert–Grunwald
    /// extension over real fields like the rationals.
    pub hg_real: bool,
    /// Cyclic of prime power order, Frobenius with cyclic prime-power kernel and
    /// complement, or generalized quaternion: the necessary list over fields
    /// containing a square root of -1.
    pub hg_sqrt_minus1: bool,
    /// `C_p`, `D_p` with `p >= 3`, or `C_p ⋊ C_3` with `p ≡ 1 mod 3`.
    pub pd1_candidate: bool,
    pub frobenius_decomposition: Option<(u64, u64)>,
    pub sylow_shapes: BTreeMap<u64, SylowShape>,
    pub obstructions: Vec<ObstructionWitness>,
}

pub fn classify(g: &FiniteGroup) -> ClassificationReport {
    let n = g.order() as u64;
    if n == 1 {
        return ClassificationReport {
            group_label: g.label().to_string(),
            order: 1,
            is_trivial: true,
            hg_real: false,
            hg_sqrt_minus1: false,
            pd1_candidate: false,
            frobenius_decomposition: None,
            sylow_shapes: BTreeMap::new(),
            obstructions: Vec::new(),
        };
    }
    let sylow_shapes: BTreeMap<u64, SylowShape> = prime_divisors(n)
        .into_iter()
        .map(|p| (p, sylow_shape(g, p).expect("p divides the order")))
        .collect();
    let frob = frobenius_cyclic_decomposition(g).map(|f| (f.kernel_order, f.complement_order));
    let cyclic = g.is_cyclic();
    let two_or_odd_pp = |x: u64| x == 2 || (x % 2 == 1 && is_prime_power(x));

    let hg_real = (cyclic && two_or_odd_pp(n))
        || frob.is_some_and(|(p, q)| two_or_odd_pp(p) && two_or_odd_pp(q));
    let is_gq = matches!(sylow_shapes.get(&2), Some(SylowShape::GeneralizedQuaternion(m)) if *m == n);
    let hg_sqrt_minus1 = (cyclic && is_prime_power(n))
        || frob.is_some_and(|(p, q)| is_prime_power(p) && is_prime_power(q))
        || is_gq;
    let pd1_candidate = (cyclic && is_prime(n))
        || frob.is_some_and(|(p, q)| is_prime(p) && ((p >= 3 && q == 2) || (q == 3 && p % 3 == 1)));

    ClassificationReport {
        group_label: g.label().to_string(),
        order: n,
        is_trivial: false,
        hg_real,
        hg_sqrt_minus1,
        pd1_candidate,
        frobenius_decomposition: frob,
        sylow_shapes,
        obstructions: detect_obstructions(g),
    }
}
