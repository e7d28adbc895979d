//! Brute-force isomorphism testing by generator-image search. Intended for
//! small groups (tests and decomposition-group matching).

use itertools::Itertools;

use super::FiniteGroup;

/// A generating set built greedily from elements of largest order.
pub fn minimal_generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut by_order: Vec<usize> = (1..g.order()).collect();
    by_order.sort_by_key(|&x| std::cmp::Reverse(g.order_of(x)));
    let mut gens = Vec::new();
    let mut span = vec![0usize];
    for x in by_order {
        if span.len() == g.order() {
            break;
        }
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = g.closure(&gens);
        }
    }
    gens
}

fn fingerprint(g: &FiniteGroup) -> (usize, Vec<u64>, usize) {
    let mut orders: Vec<u64> = g.element_orders().collect();
    orders.sort_unstable();
    (g.order(), orders, g.center().len())
}

/// Extends `gens[i] -> images[i]` along the Cayley graph; returns the map if it is
/// a well-defined bijective homomorphism.
fn extend(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = a.order();
    let mut phi = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    phi[0] = 0;
    hit[0] = true;
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for (&s, &t) in gens.iter().zip(images) {
            let y = a.mul(x, s);
            let image = b.mul(phi[x], t);
            if phi[y] == usize::MAX {
                if hit[image] {
                    return None;
                }
                phi[y] = image;
                hit[image] = true;
                queue.push(y);
            } else if phi[y] != image {
                return None;
            }
        }
    }
    (queue.len() == n).then_some(phi)
}

/// An isomorphism `a -> b` as an index map, if one exists.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    if fingerprint(a) != fingerprint(b) {
        return None;
    }
    let gens = minimal_generating_set(a);
    if gens.is_empty() {
        return Some(vec![0]);
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (0..b.order()).filter(|&t| b.order_of(t) == a.order_of(s)).collect())
        .collect();
    candidates
        .iter()
        .multi_cartesian_product()
        .find_map(|images| {
            let images: Vec<usize> = images.into_iter().copied().collect();
            extend(a, b, &gens, &images)
        })
}

pub fn is_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    find_isomorphism(a, b).is_some()
}
