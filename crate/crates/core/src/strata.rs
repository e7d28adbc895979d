//! Primes sorted by how many `d`-th roots of unity `Q_p` contains
//! (`gcd(d, p - 1)`), cyclotomic congruence sets, and splitting of odd primes
//! in biquadratic fields.

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime, is_prime_power, is_square_int, is_squarefree, jacobi};
use crate::oracle::{kummer_local_invariants_prime, OracleError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrataError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p must be odd")]
    EvenPrime,
    #[error("p = {p} divides d = {d}")]
    DividesModulus { p: u64, d: u64 },
    #[error("e = {e} does not divide d = {d}")]
    NotDivisor { e: u64, d: u64 },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("q = 2 gives a vacuous non-splitting condition")]
    QIsTwo,
    #[error("q and r must be distinct")]
    EqualPrimes,
    #[error("no primes up to {bound} satisfy the conditions")]
    Empty { bound: u64 },
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("degenerate biquadratic data: {0}")]
    Degenerate(String),
    #[error("p = {p} ramifies: it divides 2ab = {two_ab}")]
    Ramified { p: u64, two_ab: i128 },
    #[error("d = {0} is not an odd prime power")]
    NotOddPrimePower(u64),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Odd primes `p ∤ d` up to `bound` with `gcd(d, p - 1) = e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeStratum {
    pub d: u64,
    pub e: u64,
    pub bound: u64,
    pub primes: Vec<u64>,
    /// Share of the stratum among odd primes `p ∤ d` up to `bound`.
    #[serde(with = "crate::arith::ratio_u64_str")]
    pub empirical_density: Ratio<u64>,
    #[serde(with = "crate::arith::ratio_u64_str")]
    pub predicted_density: Ratio<u64>,
}

impl PrimeStratum {
    /// `|empirical - predicted| / predicted`.
    pub fn relative_error(&self) -> f64 {
        let emp = *self.empirical_density.numer() as f64 / *self.empirical_density.denom() as f64;
        let pred = *self.predicted_density.numer() as f64 / *self.predicted_density.denom() as f64;
        (emp - pred).abs() / pred
    }
}

pub fn stratum_of(p: u64, d: u64) -> Result<u64, StrataError> {
    if d == 0 {
        return Err(StrataError::ZeroModulus);
    }
    if !is_prime(p) {
        return Err(StrataError::NotPrime(p));
    }
    if p == 2 {
        return Err(StrataError::EvenPrime);
    }
    if d % p == 0 {
        return Err(StrataError::DividesModulus { p, d });
    }
    Ok(d.gcd(&(p - 1)))
}

/// Share of residues `a ∈ (Z/d)^×` with `gcd(d, a - 1) = e`.
pub fn predicted_density(d: u64, e: u64) -> Result<Ratio<u64>, StrataError> {
    if d == 0 {
        return Err(StrataError::ZeroModulus);
    }
    if e == 0 || d % e != 0 {
        return Err(StrataError::NotDivisor { e, d });
    }
    let units: Vec<u64> = (0..d).filter(|a| a.gcd(&d) == 1).collect();
    let hits = units.iter().filter(|&&a| d.gcd(&((a + d - 1) % d)) == e).count();
    Ok(Ratio::new(hits as u64, units.len() as u64))
}

/// Odd primes up to `bound` not dividing `d`, in increasing order.
fn odd_primes_prime_to(d: u64, bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let sieve = primal::Sieve::new(bound as usize);
    sieve
        .primes_from(3)
        .take_while(|&p| p as u64 <= bound)
        .map(|p| p as u64)
        .filter(|&p| d % p != 0)
        .collect()
}

pub fn enumerate_stratum(d: u64, e: u64, bound: u64) -> Result<PrimeStratum, StrataError> {
    let predicted = predicted_density(d, e)?;
    let pool = odd_primes_prime_to(d, bound);
    let primes: Vec<u64> = pool
        .par_chunks(4096)
        .flat_map_iter(|chunk| chunk.iter().copied().filter(|&p| d.gcd(&(p - 1)) == e))
        .collect();
    let empirical = if pool.is_empty() {
        Ratio::from_integer(0)
    } else {
        Ratio::new(primes.len() as u64, pool.len() as u64)
    };
    Ok(PrimeStratum { d, e, bound, primes, empirical_density: empirical, predicted_density: predicted })
}

/// Every stratum of `d` up to `bound`, one per divisor `e` of `d`.
pub fn all_strata(d: u64, bound: u64) -> Result<Vec<PrimeStratum>, StrataError> {
    if d == 0 {
        return Err(StrataError::ZeroModulus);
    }
    (1..=d).filter(|e| d % e == 0).map(|e| enumerate_stratum(d, e, bound)).collect()
}

/// Primes `p <= bound` with `p ≡ 1 mod r` and `p ≢ 1 mod q`, `p ≠ q`: split
/// completely in the `r`-th cyclotomic field and not in the `q`-th.
///
/// Only the cyclotomic conditions are modelled; any further Frobenius condition
/// in an auxiliary field is outside this function.
pub fn lemma32_prime_set(q: u64, r: u64, bound: u64) -> Result<Vec<u64>, StrataError> {
    for x in [q, r] {
        if !is_prime(x) {
            return Err(StrataError::NotPrime(x));
        }
    }
    if q == r {
        return Err(StrataError::EqualPrimes);
    }
    if q == 2 {
        return Err(StrataError::QIsTwo);
    }
    let out: Vec<u64> = odd_primes_prime_to(1, bound)
        .into_iter()
        .filter(|&p| p != q && p % r == 1 && p % q != 1)
        .collect();
    if out.is_empty() {
        return Err(StrataError::Empty { bound });
    }
    Ok(out)
}

/// Legendre symbol `(a | p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i8 {
    jacobi(a, p)
}

/// Indices (1 for `√a`, 2 for `√b`, 3 for `√(ab)`) of the quadratic subfields of
/// `Q(√a, √b)` in which the odd prime `p` splits.
pub fn biquadratic_split(a: i64, b: i64, p: u64) -> Result<Vec<u8>, StrataError> {
    for x in [a, b] {
        if !is_squarefree(x) {
            return Err(StrataError::NotSquarefree(x));
        }
    }
    let g = (a as i128).gcd(&(b as i128));
    let c = a as i128 * b as i128 / (g * g);
    for (name, x) in [("a", a as i128), ("b", b as i128), ("ab", c)] {
        if is_square_int(x) {
            return Err(StrataError::Degenerate(format!("{name} = {x} is a square")));
        }
    }
    if !is_prime(p) {
        return Err(StrataError::NotPrime(p));
    }
    if p == 2 {
        return Err(StrataError::EvenPrime);
    }
    let two_ab = 2 * a as i128 * b as i128;
    if two_ab % p as i128 == 0 {
        return Err(StrataError::Ramified { p, two_ab });
    }
    let symbols = [legendre(a, p), legendre(b, p), legendre(c as i64, p)];
    Ok((1..=3u8).zip(symbols).filter(|&(_, s)| s == 1).map(|(j, _)| j).collect())
}

/// Comparison of the oracle residue degree of `X^d - p` over `Q_p` against
/// `d / gcd(d, p - 1)` for all primes `p ∤ d` below a bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeLawReport {
    pub d: u64,
    pub bound: u64,
    pub primes_checked: usize,
    pub matches: usize,
    /// Primes with `gcd(d, p - 1) > 1`, i.e. some nontrivial root of unity of order dividing `d`.
    pub nontrivial_stratum: usize,
    pub nontrivial_matches: usize,
    /// Up to ten `(p, oracle f, d / gcd(d, p - 1))` with a mismatch.
    pub mismatch_examples: Vec<(u64, u64, u64)>,
}

/// Runs the degree comparison for an odd prime power `d` and primes `p < bound`.
pub fn degree_law_report(d: u64, bound: u64) -> Result<DegreeLawReport, StrataError> {
    if d % 2 == 0 || !is_prime_power(d) {
        return Err(StrataError::NotOddPrimePower(d));
    }
    let primes: Vec<u64> = primal::Primes::all()
        .take_while(|&p| (p as u64) < bound)
        .map(|p| p as u64)
        .filter(|&p| d % p != 0)
        .collect();
    let rows = primes
        .par_iter()
        .map(|&p| {
            let f = kummer_local_invariants_prime(p, d, 1, 1)?.f;
            Ok((p, f, d / d.gcd(&(p - 1))))
        })
        .collect::<Result<Vec<_>, OracleError>>()?;
    let matches = rows.iter().filter(|(_, f, g)| f == g).count();
    let nontrivial: Vec<_> = rows.iter().filter(|(p, _, _)| d.gcd(&(p - 1)) > 1).collect();
    Ok(DegreeLawReport {
        d,
        bound,
        primes_checked: rows.len(),
        matches,
        nontrivial_stratum: nontrivial.len(),
        nontrivial_matches: nontrivial.iter().filter(|(_, f, g)| f == g).count(),
        mismatch_examples: rows.iter().filter(|(_, f, g)| f != g).take(10).copied().collect(),
    })
}
