//! Small integer helpers: primality, p-adic valuation, binomials, factoring.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Largest `i` with `p^i | m`.
pub fn valuation(m: &BigInt, p: u64) -> Result<u32> {
    require_prime(p)?;
    if m.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let p = BigInt::from(p);
    let mut m = m.clone();
    let mut i = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Ok(i);
        }
        m = q;
        i += 1;
    }
}

/// [`valuation`] for machine integers.
pub fn valuation_u64(m: u64, p: u64) -> Result<u32> {
    require_prime(p)?;
    if m == 0 {
        return Err(Error::ZeroValuation);
    }
    let mut m = m;
    let mut i = 0;
    while m % p == 0 {
        m /= p;
        i += 1;
    }
    Ok(i)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Distinct prime divisors of `m`, ascending. Empty for `m` in {0, 1}.
pub fn prime_divisors(m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = m;
    if m == 0 {
        return out;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub(crate) fn pow_big(base: u64, exp: u64) -> BigInt {
    num_traits::pow::pow(BigInt::from(base), exp as usize)
}
