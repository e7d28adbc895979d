//! Kummer covers `X^d - c t^m` of the projective line: branch data at `t = 0`
//! and `t = ∞`, intersection multiplicities of specialization points, and the
//! prediction of local invariants at specializations, checked against
//! [`crate::oracle`].

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{
    format_rational, is_prime, mul_mod, parse_rational, pow_mod, rational_valuation, unit_residue,
    Rational,
};
use crate::oracle::{kummer_local_invariants, FiniteField, OracleError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoversError {
    #[error("cannot parse cover `{spec}`: {reason}")]
    Parse { spec: String, reason: String },
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("t0 = {0} is a branch point")]
    BranchPoint(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no non-exceptional primes up to {0}")]
    NoPrimes(u64),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// The cover of the `t`-line given by `X^d = c t^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerCover {
    pub d: u64,
    pub m: u64,
    #[serde(with = "crate::arith::rational_str")]
    pub c: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BranchPoint {
    Zero,
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchDatum {
    pub point: BranchPoint,
    pub inertia_order: u64,
}

impl KummerCover {
    pub fn new(d: u64, m: u64, c: Rational) -> Result<Self, CoversError> {
        if d < 2 {
            return Err(CoversError::InvalidCover(format!("degree d = {d} must be at least 2")));
        }
        if m == 0 {
            return Err(CoversError::InvalidCover("m must be positive".into()));
        }
        if *c.numer() == 0 {
            return Err(CoversError::InvalidCover("c must be nonzero".into()));
        }
        Ok(Self { d, m, c })
    }

    /// Order of inertia at either branch point.
    pub fn branch_inertia(&self) -> u64 {
        self.d / self.d.gcd(&self.m)
    }

    /// Branch points with their inertia orders; empty when the cover is unbranched.
    pub fn branch_data(&self) -> Vec<BranchDatum> {
        let e = self.branch_inertia();
        if e == 1 {
            return Vec::new();
        }
        [BranchPoint::Zero, BranchPoint::Infinity]
            .into_iter()
            .map(|point| BranchDatum { point, inertia_order: e })
            .collect()
    }

    /// Primes excluded from the comparison: 2 and the divisors of `d`, `num(c)`, `den(c)`.
    pub fn is_exceptional(&self, p: u64) -> bool {
        let pp = p as i128;
        p == 2 || self.d % p == 0 || self.c.numer() % pp == 0 || self.c.denom() % pp == 0
    }
}

impl fmt::Display for KummerCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={},m={},c={}", self.d, self.m, format_rational(&self.c))
    }
}

impl FromStr for KummerCover {
    type Err = CoversError;

    /// `d=<int>,m=<int>,c=<rational>`, keys in any order; `m` and `c` default to 1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| CoversError::Parse { spec: s.to_string(), reason };
        let (mut d, mut m, mut c) = (None, None, None);
        for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{part}`")))?;
            let value = value.trim();
            match key.trim() {
                "d" => d = Some(value.parse::<u64>().map_err(|_| err(format!("bad degree `{value}`")))?),
                "m" => m = Some(value.parse::<u64>().map_err(|_| err(format!("bad exponent `{value}`")))?),
                "c" => c = Some(parse_rational(value).map_err(err)?),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let d = d.ok_or_else(|| err("missing d".into()))?;
        Self::new(d, m.unwrap_or(1), c.unwrap_or_else(|| Rational::from_integer(1)))
    }
}

/// `v_p(t0)` clamped at 0 for [`BranchPoint::Zero`], `v_p(1/t0)` clamped for
/// [`BranchPoint::Infinity`].
pub fn intersection_multiplicity(t0: &Rational, point: BranchPoint, p: u64) -> Result<u64, CoversError> {
    if *t0.numer() == 0 {
        return Err(CoversError::BranchPoint(format_rational(t0)));
    }
    let v = rational_valuation(t0, p);
    Ok(match point {
        BranchPoint::Zero => v.max(0) as u64,
        BranchPoint::Infinity => (-v).max(0) as u64,
    })
}

/// The branch point `t0` meets `p`-adically, with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Intersection {
    pub point: Option<BranchPoint>,
    pub multiplicity: u64,
}

pub fn meeting_point(t0: &Rational, p: u64) -> Result<Intersection, CoversError> {
    let zero = intersection_multiplicity(t0, BranchPoint::Zero, p)?;
    let inf = intersection_multiplicity(t0, BranchPoint::Infinity, p)?;
    Ok(match (zero, inf) {
        (0, 0) => Intersection { point: None, multiplicity: 0 },
        (k, 0) => Intersection { point: Some(BranchPoint::Zero), multiplicity: k },
        (_, k) => Intersection { point: Some(BranchPoint::Infinity), multiplicity: k },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub intersection: Intersection,
    pub predicted_e: u64,
    pub predicted_f: Option<u64>,
    pub exceptional: bool,
}

fn check_prime(p: u64) -> Result<(), CoversError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(CoversError::NotPrime(p))
    }
}

/// Predicted ramification index (and residue degree where it is determined) of the
/// specialization of `cover` at `t0`, above `p`.
///
/// With `k` the intersection multiplicity and `e_i` the branch inertia order, inertia
/// is generated by the `k`-th power of a branch inertia generator, giving
/// `e_i / gcd(e_i, k)`. When `gcd(k, e_i) = 1` the residue degree is that of the
/// constant extension `X^d - c^{d/gcd(d,m)}` over `F_p`.
pub fn predict_specialization(cover: &KummerCover, t0: &Rational, p: u64) -> Result<Prediction, CoversError> {
    check_prime(p)?;
    let intersection = meeting_point(t0, p)?;
    let e_i = cover.branch_inertia();
    let k = intersection.multiplicity;
    let predicted_e = e_i / e_i.gcd(&k);
    let exceptional = cover.is_exceptional(p);
    let residue_regime = e_i > 1 && k > 0 && k.gcd(&e_i) == 1;
    let c_is_unit = rational_valuation(&cover.c, p) == 0;
    let predicted_f = if residue_regime && c_is_unit && cover.d % p != 0 {
        let field = FiniteField::new(p, 1)?;
        let power = cover.d / cover.d.gcd(&cover.m);
        let w = field.from_int(pow_mod(unit_residue(&cover.c, p), power, p) as i64);
        Some(kummer_local_invariants(&field, cover.d, 0, &w)?.f)
    } else {
        None
    };
    Ok(Prediction { intersection, predicted_e, predicted_f, exceptional })
}

/// Invariants of the splitting field of `X^d - c t0^m` over `Q_p`, read from
/// `v_p(c t0^m)` and the residue of its unit part.
pub fn specialization_invariants(
    cover: &KummerCover,
    t0: &Rational,
    p: u64,
) -> Result<crate::oracle::KummerLocalInvariants, CoversError> {
    check_prime(p)?;
    if *t0.numer() == 0 {
        return Err(CoversError::BranchPoint(format_rational(t0)));
    }
    let v = rational_valuation(&cover.c, p) + cover.m as i64 * rational_valuation(t0, p);
    let w = mul_mod(unit_residue(&cover.c, p), pow_mod(unit_residue(t0, p), cover.m, p), p);
    let field = FiniteField::new(p, 1)?;
    Ok(kummer_local_invariants(&field, cover.d, v, &field.from_int(w as i64))?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecializationReport {
    pub cover: String,
    pub t0: String,
    pub p: u64,
    pub intersection: Intersection,
    pub predicted_e: u64,
    pub predicted_f: Option<u64>,
    pub oracle_e: u64,
    pub oracle_f: u64,
    pub exceptional: bool,
    pub agree: bool,
}

impl SpecializationReport {
    /// A disagreement that counts against the prediction.
    pub fn is_failure(&self) -> bool {
        !self.agree && !self.exceptional
    }
}

pub fn verify_beckmann(cover: &KummerCover, t0: &Rational, p: u64) -> Result<SpecializationReport, CoversError> {
    let prediction = predict_specialization(cover, t0, p)?;
    let oracle = specialization_invariants(cover, t0, p)?;
    let agree = prediction.predicted_e == oracle.e && prediction.predicted_f.map_or(true, |f| f == oracle.f);
    Ok(SpecializationReport {
        cover: cover.to_string(),
        t0: format_rational(t0),
        p,
        intersection: prediction.intersection,
        predicted_e: prediction.predicted_e,
        predicted_f: prediction.predicted_f,
        oracle_e: oracle.e,
        oracle_f: oracle.f,
        exceptional: prediction.exceptional,
        agree,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub samples: usize,
    pub agree: usize,
    pub disagree: usize,
    pub exceptional: usize,
    pub ramified: usize,
    pub residue_degree_checked: usize,
}

impl SweepSummary {
    pub fn from_reports(reports: &[SpecializationReport]) -> Self {
        let mut s = SweepSummary { samples: reports.len(), ..Default::default() };
        for r in reports {
            if r.exceptional {
                s.exceptional += 1;
            } else if r.agree {
                s.agree += 1;
            } else {
                s.disagree += 1;
            }
            s.ramified += usize::from(r.oracle_e > 1);
            s.residue_degree_checked += usize::from(r.predicted_f.is_some());
        }
        s
    }
}

/// Exponent range for the `p`-part of sampled specialization points.
pub const SWEEP_VALUATION_RANGE: std::ops::RangeInclusive<i32> = -4..=4;
const SWEEP_COFACTOR_MAX: i128 = 1000;

/// Samples `(t0, p)` with `p` a non-exceptional prime up to `max_prime` and
/// `t0 = ± p^k s / r`, `k` in [`SWEEP_VALUATION_RANGE`], `s, r` prime to `p`.
/// Draws come from ChaCha20 seeded with `seed`, so a seed fixes the sample.
pub fn sample_specializations(
    cover: &KummerCover,
    max_prime: u64,
    samples: usize,
    seed: u64,
) -> Result<Vec<(Rational, u64)>, CoversError> {
    let primes: Vec<u64> = primal::Primes::all()
        .take_while(|&p| p as u64 <= max_prime)
        .map(|p| p as u64)
        .filter(|&p| !cover.is_exceptional(p))
        .collect();
    if primes.is_empty() {
        return Err(CoversError::NoPrimes(max_prime));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let p = primes[rng.gen_range(0..primes.len())];
        let k = rng.gen_range(SWEEP_VALUATION_RANGE);
        let s = rng.gen_range(1..=SWEEP_COFACTOR_MAX);
        let r = rng.gen_range(1..=SWEEP_COFACTOR_MAX);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let pp = p as i128;
        if s % pp == 0 || r % pp == 0 {
            continue;
        }
        let Some(pk) = pp.checked_pow(k.unsigned_abs()) else { continue };
        let (num, den) = if k >= 0 { (s.checked_mul(pk), Some(r)) } else { (Some(s), r.checked_mul(pk)) };
        let (Some(num), Some(den)) = (num, den) else { continue };
        out.push((Rational::new(sign * num, den), p));
    }
    Ok(out)
}

/// Runs [`verify_beckmann`] over a seeded sample, in parallel; reports keep sample order.
pub fn sweep(
    cover: &KummerCover,
    max_prime: u64,
    samples: usize,
    seed: u64,
) -> Result<(Vec<SpecializationReport>, SweepSummary), CoversError> {
    let points = sample_specializations(cover, max_prime, samples, seed)?;
    let reports = points
        .par_iter()
        .map(|(t0, p)| verify_beckmann(cover, t0, *p))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = SweepSummary::from_reports(&reports);
    Ok((reports, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn cover(s: &str) -> KummerCover {
        s.parse().unwrap()
    }

    #[test]
    fn branch_data_examples() {
        let b = cover("d=3,m=1,c=1").branch_data();
        assert_eq!(
            b,
            vec![
                BranchDatum { point: BranchPoint::Zero, inertia_order: 3 },
                BranchDatum { point: BranchPoint::Infinity, inertia_order: 3 }
            ]
        );
        assert!(cover("d=4,m=2,c=1").branch_data().iter().all(|b| b.inertia_order == 2));
        assert!(cover("d=2,m=2,c=1").branch_data().is_empty());
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(intersection_multiplicity(&q(49, 3), BranchPoint::Zero, 7).unwrap(), 2);
        assert_eq!(intersection_multiplicity(&q(5, 1), BranchPoint::Zero, 7).unwrap(), 0);
        assert_eq!(intersection_multiplicity(&q(3, 125), BranchPoint::Infinity, 5).unwrap(), 3);
        assert_eq!(intersection_multiplicity(&q(3, 125), BranchPoint::Zero, 5).unwrap(), 0);
        assert!(intersection_multiplicity(&q(0, 1), BranchPoint::Zero, 5).is_err());
    }

    #[test]
    fn prediction_examples() {
        let x9 = cover("d=9,m=1,c=1");
        let pr = predict_specialization(&x9, &q(7, 1), 7).unwrap();
        assert_eq!((pr.predicted_e, pr.predicted_f), (9, Some(3)));
        let x3 = cover("d=3,m=1,c=1");
        let pr = predict_specialization(&x3, &q(7 * 7 * 7 * 2, 1), 7).unwrap();
        assert_eq!((pr.predicted_e, pr.intersection.multiplicity), (1, 3));
        let pr = predict_specialization(&x3, &q(5, 1), 7).unwrap();
        assert_eq!((pr.predicted_e, pr.intersection.point), (1, None));
        assert!(predict_specialization(&x3, &q(5, 1), 3).unwrap().exceptional);
        assert!(predict_specialization(&x3, &q(5, 1), 2).unwrap().exceptional);
    }

    #[test]
    fn verify_examples() {
        let x3 = cover("d=3,m=1,c=1");
        let r = verify_beckmann(&x3, &q(7, 1), 7).unwrap();
        assert_eq!((r.predicted_e, r.predicted_f, r.oracle_e, r.oracle_f), (3, Some(1), 3, 1));
        assert!(r.agree);
        let r = verify_beckmann(&x3, &q(2, 1), 7).unwrap();
        assert_eq!((r.predicted_e, r.oracle_e, r.oracle_f), (1, 1, 3));
        assert!(r.agree);
        let r = verify_beckmann(&x3, &q(5, 1), 5).unwrap();
        assert_eq!((r.predicted_e, r.predicted_f, r.oracle_e, r.oracle_f), (3, Some(2), 3, 2));
        assert!(r.agree);
    }

    #[test]
    fn parse_and_display() {
        let c = cover("d=6, m=4, c=-3/2");
        assert_eq!((c.d, c.m, c.c), (6, 4, q(-3, 2)));
        assert_eq!(c.to_string().parse::<KummerCover>().unwrap(), c);
        assert_eq!(cover("d=5").m, 1);
        for bad in ["", "m=1", "d=1", "d=3,m=0", "d=3,c=0", "d=3,x=2", "d=3,c=1/0"] {
            assert!(bad.parse::<KummerCover>().is_err(), "{bad}");
        }
    }

    #[test]
    fn exceptional_set() {
        let c = cover("d=6,m=1,c=10/7");
        for p in [2, 3, 5, 7] {
            assert!(c.is_exceptional(p));
        }
        assert!(!c.is_exceptional(11));
    }

    #[test]
    fn sweep_is_reproducible() {
        let c = cover("d=3,m=1,c=1");
        let (a, sa) = sweep(&c, 1000, 50, 7).unwrap();
        let (b, _) = sweep(&c, 1000, 50, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(sa.disagree, 0);
        assert_eq!(sa.samples, 50);
        assert!(a.iter().all(|r| !r.exceptional));
    }

    #[test]
    fn degenerate_cover_never_ramifies() {
        let (reports, _) = sweep(&cover("d=2,m=2,c=1"), 1000, 100, 3).unwrap();
        assert!(reports.iter().all(|r| r.oracle_e == 1 && r.predicted_e == 1));
    }

    fn cover_strategy() -> impl Strategy<Value = KummerCover> {
        (2u64..=12, 1u64..=6, -20i128..=20, 1i128..=20)
            .prop_filter("c nonzero", |&(_, _, n, _)| n != 0)
            .prop_map(|(d, m, n, den)| KummerCover::new(d, m, Rational::new(n, den)).unwrap())
    }

    fn point_strategy() -> impl Strategy<Value = (usize, i32, i128, i128)> {
        (0usize..40, -4i32..=4, 1i128..=500, 1i128..=500)
    }

    const PRIMES: [u64; 40] = [
        3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
        101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
    ];

    fn make_point(p: u64, k: i32, s: i128, r: i128) -> Rational {
        let pk = (p as i128).pow(k.unsigned_abs());
        if k >= 0 {
            Rational::new(s * pk, r)
        } else {
            Rational::new(s, r * pk)
        }
    }

    proptest! {
        #[test]
        fn ramification_law(c in cover_strategy(), (i, k, s, r) in point_strategy()) {
            let p = PRIMES[i];
            prop_assume!(!c.is_exceptional(p) && s % p as i128 != 0 && r % p as i128 != 0);
            let t0 = make_point(p, k, s, r);
            let rep = verify_beckmann(&c, &t0, p).unwrap();
            let e_i = c.branch_inertia();
            prop_assert_eq!(rep.oracle_e, e_i / e_i.gcd(&rep.intersection.multiplicity));
            if rep.intersection.multiplicity == 0 {
                prop_assert_eq!(rep.oracle_e, 1);
            }
            if let Some(f) = rep.predicted_f {
                prop_assert_eq!(f, rep.oracle_f);
            }
            prop_assert!(rep.agree);
        }

        #[test]
        fn scaling_by_dth_powers(c in cover_strategy(), (i, k, s, r) in point_strategy(), u in 1i128..=6) {
            let p = PRIMES[i];
            prop_assume!(!c.is_exceptional(p) && s % p as i128 != 0 && r % p as i128 != 0 && u % p as i128 != 0);
            prop_assume!(c.d <= 6);
            let t0 = make_point(p, k, s, r);
            let scaled = t0 * Rational::from_integer(u.pow(c.d as u32));
            let a = verify_beckmann(&c, &t0, p).unwrap();
            let b = verify_beckmann(&c, &scaled, p).unwrap();
            prop_assert_eq!(
                (a.intersection, a.predicted_e, a.predicted_f, a.oracle_e, a.oracle_f),
                (b.intersection, b.predicted_e, b.predicted_f, b.oracle_e, b.oracle_f)
            );
        }
    }
}
