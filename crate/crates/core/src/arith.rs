//! Integer and rational helpers shared by the group, local and cover modules.

use std::collections::BTreeMap;

use num_integer::{Integer, Roots};
use num_prime::nt_funcs::{factorize64, is_prime64};
use num_rational::Ratio;

/// Exact rationals used for specialization points and cover constants.
pub type Rational = Ratio<i128>;

pub fn is_prime(n: u64) -> bool {
    is_prime64(n)
}

/// Prime factorization as an ordered map `prime -> exponent`. `factorize(1)` is empty.
pub fn factorize(n: u64) -> BTreeMap<u64, usize> {
    if n <= 1 {
        return BTreeMap::new();
    }
    factorize64(n)
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_keys().collect()
}

/// `Some(p)` when `n = p^a` for a prime `p` and `a >= 1`.
pub fn prime_power_base(n: u64) -> Option<u64> {
    let f = factorize(n);
    if f.len() == 1 {
        f.keys().next().copied()
    } else {
        None
    }
}

pub fn is_prime_power(n: u64) -> bool {
    prime_power_base(n).is_some()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128 % m as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Multiplicative order of `a` modulo `n`; `None` when `gcd(a, n) != 1`.
pub fn multiplicative_order_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    let a = a % n;
    if a.gcd(&n) != 1 {
        return None;
    }
    let mut ord = euler_phi(n);
    for r in prime_divisors(ord) {
        while ord % r == 0 && pow_mod(a, ord / r, n) == 1 {
            ord /= r;
        }
    }
    Some(ord)
}

/// Exponent of `p` in the nonzero integer `n`.
pub fn valuation(n: i128, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let p = p as i128;
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `p`-adic valuation of a nonzero rational.
pub fn rational_valuation(x: &Rational, p: u64) -> i64 {
    valuation(*x.numer(), p) as i64 - valuation(*x.denom(), p) as i64
}

/// Residue modulo `p` of the unit part `x / p^{v_p(x)}`.
pub fn unit_residue(x: &Rational, p: u64) -> u64 {
    let pp = p as i128;
    let strip = |mut n: i128| {
        while n % pp == 0 {
            n /= pp;
        }
        n.rem_euclid(pp) as u64
    };
    let num = strip(*x.numer());
    let den = strip(*x.denom());
    mul_mod(num, inv_mod(den, p).expect("unit denominator"), p)
}

/// Residue of a `p`-integral rational modulo `p` (zero when `p` divides the numerator).
pub fn rational_mod(x: &Rational, p: u64) -> Option<u64> {
    let pp = p as i128;
    let den = x.denom().rem_euclid(pp) as u64;
    let inv = inv_mod(den, p)?;
    Some(mul_mod(x.numer().rem_euclid(pp) as u64, inv, p))
}

pub fn is_square_int(n: i128) -> bool {
    n >= 0 && {
        let r = n.sqrt();
        r * r == n
    }
}

pub fn is_square_rational(x: &Rational) -> bool {
    is_square_int(*x.numer()) && is_square_int(*x.denom())
}

pub fn is_squarefree(n: i64) -> bool {
    n != 0 && factorize(n.unsigned_abs()).values().all(|&e| e == 1)
}

/// Jacobi symbol `(a | n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> i8 {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Parses `"a"` or `"a/b"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i128 = num.parse().map_err(|_| format!("bad rational `{s}`"))?;
    let den: i128 = den.parse().map_err(|_| format!("bad rational `{s}`"))?;
    if den == 0 {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(x: &Rational) -> String {
    if *x.denom() == 1 {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapter writing rationals as `"n/d"` strings.
pub mod rational_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for unsigned densities, written as `"n/d"`.
pub mod ratio_u64_str {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", x.numer(), x.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<u64>, D::Error> {
        let s = String::deserialize(d)?;
        let (n, den) = s.split_once('/').unwrap_or((&s, "1"));
        let n: u64 = n.parse().map_err(serde::de::Error::custom)?;
        let den: u64 = den.parse().map_err(serde::de::Error::custom)?;
        if den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Ratio::new(n, den))
    }
}
