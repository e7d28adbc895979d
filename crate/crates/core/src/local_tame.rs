//! Tame local Galois theory over `Q_p`: the two-generator relation
//! `σ^-1 τ σ = τ^q`, existence of cyclic tame extensions, local Grunwald
//! feasibility and the `C_4`-embedding test for quadratic fields.

use std::collections::HashMap;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factorize, is_prime, is_square_rational, valuation, Rational};
use crate::group::{is_isomorphic, parse_group_spec, FiniteGroup, GroupError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalTameError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("e = {e} does not divide d = {d}")]
    NotDivisor { e: u64, d: u64 },
    #[error("d = {d} is not coprime to q = {q}")]
    NotCoprime { d: u64, q: u64 },
    #[error("wild ramification: p = {p} divides e = {e}")]
    Wild { p: u64, e: u64 },
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("zero has no quadratic extension")]
    ZeroRational,
    #[error("cannot parse local spec `{spec}`: {reason}")]
    Parse { spec: String, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Residue data of a tame local field: its residue field has `q` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameLocalField {
    pub q: u64,
}

impl TameLocalField {
    pub fn new(q: u64) -> Result<Self, LocalTameError> {
        if !is_prime(q) {
            return Err(LocalTameError::NotPrime(q));
        }
        Ok(Self { q })
    }
}

/// Elements `sigma` (Frobenius lift) and `tau` (inertia generator) of a group with
/// `sigma^-1 tau sigma = tau^q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TamePair {
    pub sigma: usize,
    pub tau: usize,
    pub q: u64,
}

impl TamePair {
    /// Rechecks the relation and that `ord(tau)` is prime to `q`.
    pub fn verify(&self, g: &FiniteGroup) -> bool {
        let (Ok(ord_tau), Ok(_)) = (g.element_order(self.tau), g.element_order(self.sigma)) else {
            return false;
        };
        ord_tau.gcd(&self.q) == 1 && g.conjugate(self.tau, self.sigma) == g.pow(self.tau, self.q)
    }

    /// Order of the subgroup the pair generates.
    pub fn generated_order(&self, g: &FiniteGroup) -> usize {
        g.closure(&[self.sigma, self.tau]).len()
    }
}

/// Whether a cyclic extension of degree `d` with ramification index `e` exists
/// over the local field with residue field `F_q`.
pub fn cyclic_tame_exists(q: u64, d: u64, e: u64) -> Result<bool, LocalTameError> {
    if !is_prime(q) {
        return Err(LocalTameError::NotPrime(q));
    }
    if d == 0 {
        return Err(LocalTameError::NotPositive("d"));
    }
    if e == 0 {
        return Err(LocalTameError::NotPositive("e"));
    }
    if d % e != 0 {
        return Err(LocalTameError::NotDivisor { e, d });
    }
    if d.gcd(&q) != 1 {
        return Err(LocalTameError::NotCoprime { d, q });
    }
    Ok((q - 1) % e == 0)
}

/// Scans `g` for pairs satisfying the tame relation for `q`, calling `visit` with
/// each pair and the order of the subgroup it generates. Stops early when `visit`
/// returns `true`.
fn scan_pairs(
    g: &FiniteGroup,
    q: u64,
    mut keep_tau: impl FnMut(u64) -> bool,
    mut visit: impl FnMut(TamePair, usize) -> bool,
) {
    let n = g.order();
    let mut in_tau = vec![false; n];
    for tau in 0..n {
        let ord_tau = g.order_of(tau);
        if ord_tau.gcd(&q) != 1 || !keep_tau(ord_tau) {
            continue;
        }
        let target = g.pow(tau, q);
        let tau_group = g.cyclic_subgroup(tau);
        for &x in &tau_group {
            in_tau[x] = true;
        }
        for sigma in 0..n {
            if g.conjugate(tau, sigma) != target {
                continue;
            }
            // sigma normalizes <tau>, so <sigma, tau> = <tau><sigma>
            let mut meet = 0u64;
            let mut x = 0usize;
            loop {
                if in_tau[x] {
                    meet += 1;
                }
                x = g.mul(x, sigma);
                if x == 0 {
                    break;
                }
            }
            let size = (ord_tau * g.order_of(sigma) / meet) as usize;
            if visit(TamePair { sigma, tau, q }, size) {
                for &x in &tau_group {
                    in_tau[x] = false;
                }
                return;
            }
        }
        for &x in &tau_group {
            in_tau[x] = false;
        }
    }
}

/// All pairs `(sigma, tau)` generating `g` with `sigma^-1 tau sigma = tau^q` and
/// `ord(tau)` prime to `q`, ordered by `(tau, sigma)`.
pub fn enumerate_tame_pairs(g: &FiniteGroup, q: u64) -> Vec<TamePair> {
    let mut out = Vec::new();
    scan_pairs(g, q, |_| true, |pair, size| {
        if size == g.order() {
            out.push(pair);
        }
        false
    });
    out
}

/// One local problem: a tame extension of `Q_p` with ramification index `e`,
/// residue degree `f` and, optionally, a prescribed Galois group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalExtensionSpec {
    pub p: u64,
    pub e: u64,
    pub f: u64,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
}

impl LocalExtensionSpec {
    pub fn new(p: u64, e: u64, f: u64) -> Self {
        Self { p, e, f, group: None }
    }

    pub fn validate(&self) -> Result<(), LocalTameError> {
        if !is_prime(self.p) {
            return Err(LocalTameError::NotPrime(self.p));
        }
        if self.e == 0 {
            return Err(LocalTameError::NotPositive("e"));
        }
        if self.f == 0 {
            return Err(LocalTameError::NotPositive("f"));
        }
        if self.e % self.p == 0 {
            return Err(LocalTameError::Wild { p: self.p, e: self.e });
        }
        if let Some(spec) = &self.group {
            parse_group_spec(spec)?;
        }
        Ok(())
    }

    /// Parses a JSON array whose entries are spec strings or `{p, e, f, D}` objects.
    pub fn parse_batch(json: &str) -> Result<Vec<Self>, LocalTameError> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Entry {
            Text(String),
            Object(LocalExtensionSpec),
        }
        let entries: Vec<Entry> = serde_json::from_str(json).map_err(|err| LocalTameError::Parse {
            spec: json.chars().take(60).collect(),
            reason: err.to_string(),
        })?;
        entries
            .into_iter()
            .map(|entry| match entry {
                Entry::Text(s) => s.parse(),
                Entry::Object(spec) => Ok(spec),
            })
            .collect()
    }
}

impl FromStr for LocalExtensionSpec {
    type Err = LocalTameError;

    /// `p=<prime>,e=<int>,f=<int>[,D=<group-spec>]`; `D` takes the rest of the line.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| LocalTameError::Parse { spec: s.to_string(), reason: reason.to_string() };
        let (head, group) = match s.find("D=") {
            Some(i) => (s[..i].trim_end_matches(',').trim(), Some(s[i + 2..].trim().to_string())),
            None => (s.trim(), None),
        };
        let mut p = None;
        let mut e = None;
        let mut f = None;
        for part in head.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| err("expected key=value"))?;
            let value: u64 = value.trim().parse().map_err(|_| err("expected a nonnegative integer"))?;
            let slot = match key.trim() {
                "p" => &mut p,
                "e" => &mut e,
                "f" => &mut f,
                _ => return Err(err("unknown key")),
            };
            if slot.replace(value).is_some() {
                return Err(err("repeated key"));
            }
        }
        Ok(Self {
            p: p.ok_or_else(|| err("missing p"))?,
            e: e.ok_or_else(|| err("missing e"))?,
            f: f.ok_or_else(|| err("missing f"))?,
            group,
        })
    }
}

/// Result of one local problem. `decomposition` lists the elements of the
/// realizing subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalOutcome {
    pub spec: LocalExtensionSpec,
    pub feasible: bool,
    pub witness: Option<TamePair>,
    pub decomposition: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrunwaldReport {
    pub outcomes: Vec<LocalOutcome>,
    pub all_feasible: bool,
}

fn solve_local(g: &FiniteGroup, spec: &LocalExtensionSpec) -> Result<LocalOutcome, LocalTameError> {
    let wanted = spec.group.as_deref().map(parse_group_spec).transpose()?;
    let degree = spec.e.checked_mul(spec.f).unwrap_or(u64::MAX);
    let mut found = None;
    if degree as usize <= g.order() && g.order() as u64 % degree == 0 {
        let mut rejected: HashMap<Vec<usize>, ()> = HashMap::new();
        scan_pairs(g, spec.p, |ord| ord == spec.e, |pair, size| {
            if size as u64 != degree {
                return false;
            }
            let d = g.closure(&[pair.sigma, pair.tau]);
            if let Some(h) = &wanted {
                if rejected.contains_key(&d) {
                    return false;
                }
                if !is_isomorphic(&g.induced_subgroup("D", &d), h) {
                    rejected.insert(d, ());
                    return false;
                }
            }
            found = Some((pair, d));
            true
        });
    }
    Ok(LocalOutcome {
        spec: spec.clone(),
        feasible: found.is_some(),
        witness: found.as_ref().map(|(pair, _)| *pair),
        decomposition: found.map(|(_, d)| d),
    })
}

/// Decides each local problem for `g`: feasible when some subgroup of `g` is
/// generated by a tame pair over `p` with inertia of order `e` and Frobenius of
/// order `f` modulo inertia (and isomorphic to the prescribed group, if any).
pub fn grunwald_feasible(
    g: &FiniteGroup,
    problems: &[LocalExtensionSpec],
) -> Result<GrunwaldReport, LocalTameError> {
    for spec in problems {
        spec.validate()?;
    }
    let outcomes = problems
        .iter()
        .map(|spec| solve_local(g, spec))
        .collect::<Result<Vec<_>, _>>()?;
    let all_feasible = outcomes.iter().all(|o| o.feasible);
    Ok(GrunwaldReport { outcomes, all_feasible })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C4Embedding {
    pub embeddable: bool,
    /// `a` is a square, so the quadratic extension is trivial.
    pub degenerate: bool,
}

/// Whether `Q(sqrt a)` embeds in a cyclic quartic extension, i.e. whether `a` is a
/// sum of two rational squares: `a > 0` and every prime `3 mod 4` divides `a` to
/// an even power.
pub fn c4_embeddable_quadratic(a: &Rational) -> Result<C4Embedding, LocalTameError> {
    if *a.numer() == 0 {
        return Err(LocalTameError::ZeroRational);
    }
    let degenerate = is_square_rational(a);
    if degenerate {
        return Ok(C4Embedding { embeddable: true, degenerate });
    }
    let even_at_3_mod_4 = |n: i128| {
        factorize(n.unsigned_abs() as u64)
            .into_iter()
            .all(|(l, _)| l % 4 != 3 || valuation(n, l) % 2 == 0)
    };
    let embeddable = *a.numer() > 0 && even_at_3_mod_4(*a.numer()) && even_at_3_mod_4(*a.denom());
    Ok(C4Embedding { embeddable, degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All `(sigma, tau)` with the relation and generation, by direct closure.
    fn brute_pairs(g: &FiniteGroup, q: u64) -> Vec<TamePair> {
        let mut out = Vec::new();
        for tau in 0..g.order() {
            for sigma in 0..g.order() {
                let pair = TamePair { sigma, tau, q };
                if pair.verify(g) && pair.generated_order(g) == g.order() {
                    out.push(pair);
                }
            }
        }
        out
    }

    #[test]
    fn cyclic_criterion_examples() {
        assert!(cyclic_tame_exists(7, 6, 6).unwrap());
        assert!(!cyclic_tame_exists(7, 4, 4).unwrap());
        for (q, d) in [(3, 4), (5, 12), (11, 7)] {
            assert!(cyclic_tame_exists(q, d, 1).unwrap());
        }
        assert_eq!(cyclic_tame_exists(7, 6, 4), Err(LocalTameError::NotDivisor { e: 4, d: 6 }));
        assert_eq!(cyclic_tame_exists(3, 6, 2), Err(LocalTameError::NotCoprime { d: 6, q: 3 }));
        assert_eq!(cyclic_tame_exists(9, 4, 2), Err(LocalTameError::NotPrime(9)));
    }

    #[test]
    fn quaternion_pairs() {
        let q8 = FiniteGroup::quaternion(8).unwrap();
        let pairs = enumerate_tame_pairs(&q8, 3);
        assert!(!pairs.is_empty());
        assert!(pairs.iter().all(|p| p.verify(&q8) && q8.order_of(p.tau) == 4));
        assert!(enumerate_tame_pairs(&q8, 5).is_empty());
        assert_eq!(pairs, brute_pairs(&q8, 3));
    }

    #[test]
    fn fast_scan_matches_closure() {
        for spec in ["S3", "SD:7,3,2", "D4", "Q16", "X:C2*C4", "A4", "SD:5,4,2"] {
            let g = parse_group_spec(spec).unwrap();
            for q in [3, 5, 7, 11, 13] {
                assert_eq!(enumerate_tame_pairs(&g, q), brute_pairs(&g, q), "{spec} q={q}");
            }
        }
    }

    #[test]
    fn cyclic_pairs_commute_when_q_is_one_mod_n() {
        let c6 = FiniteGroup::cyclic(6).unwrap();
        let pairs = enumerate_tame_pairs(&c6, 7);
        let expected = (0..6)
            .flat_map(|tau| (0..6).map(move |sigma| (sigma, tau)))
            .filter(|&(s, t)| c6.closure(&[s, t]).len() == 6)
            .count();
        assert_eq!(pairs.len(), expected);
    }

    #[test]
    fn grunwald_examples() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let c4 = FiniteGroup::cyclic(4).unwrap();
        let report = grunwald_feasible(
            &s3,
            &[LocalExtensionSpec::new(7, 3, 1), LocalExtensionSpec::new(5, 3, 2), LocalExtensionSpec::new(11, 1, 2)],
        )
        .unwrap();
        assert!(report.all_feasible);
        assert_eq!(report.outcomes[1].decomposition.as_ref().unwrap().len(), 6);
        for p in [3, 7, 11, 19] {
            assert!(!grunwald_feasible(&c4, &[LocalExtensionSpec::new(p, 4, 1)]).unwrap().all_feasible);
        }
        assert!(grunwald_feasible(&c4, &[LocalExtensionSpec::new(5, 4, 1)]).unwrap().all_feasible);
        assert_eq!(
            grunwald_feasible(&c4, &[LocalExtensionSpec::new(3, 3, 1)]),
            Err(LocalTameError::Wild { p: 3, e: 3 })
        );
    }

    #[test]
    fn prescribed_decomposition_group() {
        let g = FiniteGroup::symmetric(4).unwrap();
        let mut spec: LocalExtensionSpec = "p=5,e=2,f=2,D=X:C2*C2".parse().unwrap();
        assert!(grunwald_feasible(&g, &[spec.clone()]).unwrap().all_feasible);
        spec.group = Some("C4".into());
        // a cyclic D of order 4 with inertia of order 2 needs 2 | 5 - 1: fine
        assert!(grunwald_feasible(&g, &[spec.clone()]).unwrap().all_feasible);
        spec.group = Some("Q8".into());
        assert!(!grunwald_feasible(&g, &[spec]).unwrap().all_feasible);
    }

    #[test]
    fn parses_specs() {
        let s: LocalExtensionSpec = "p=7, e=3, f=1".parse().unwrap();
        assert_eq!(s, LocalExtensionSpec::new(7, 3, 1));
        let s: LocalExtensionSpec = "p=5,e=3,f=2,D=SD:3,2,-1".parse().unwrap();
        assert_eq!(s.group.as_deref(), Some("SD:3,2,-1"));
        assert!("p=5,e=3".parse::<LocalExtensionSpec>().is_err());
        assert!("p=5,e=3,f=1,p=7".parse::<LocalExtensionSpec>().is_err());
        let batch = LocalExtensionSpec::parse_batch(r#"["p=7,e=3,f=1", {"p": 11, "e": 1, "f": 2, "D": "C2"}]"#)
            .unwrap();
        assert_eq!(batch.len(), 2);
        assert_eq!(batch[1].group.as_deref(), Some("C2"));
    }

    #[test]
    fn c4_examples() {
        let r = |n, d| c4_embeddable_quadratic(&Rational::new(n, d)).unwrap();
        assert!(r(13, 1).embeddable);
        assert!(!r(-1, 1).embeddable);
        assert!(!r(3, 1).embeddable);
        assert!(r(9, 1).degenerate && r(9, 1).embeddable);
        assert!(r(5, 9).embeddable);
        assert!(!r(2, 3).embeddable);
        assert!(r(18, 1).embeddable);
        assert_eq!(c4_embeddable_quadratic(&Rational::new(0, 1)), Err(LocalTameError::ZeroRational));
    }
}
