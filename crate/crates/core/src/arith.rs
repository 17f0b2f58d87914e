//! Small integer helpers shared by the modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime factorization of a positive big integer by trial division.
pub fn factor_big(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive(), "factor_big needs a positive integer");
    if let Some(small) = n.to_u64() {
        return factor_u64(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect();
    }
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let mut e = 0;
            while (&n % &d).is_zero() {
                n /= &d;
                e += 1;
            }
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// l-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, l: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let l = BigInt::from(l);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &l).is_zero() {
        n /= &l;
        v += 1;
    }
    v
}

/// `n` with every factor of `p` removed; `p == 0` leaves `n` unchanged.
pub fn strip_prime(n: &BigInt, p: u64) -> BigInt {
    if p < 2 {
        return n.clone();
    }
    let pb = BigInt::from(p);
    let mut n = n.clone();
    while !n.is_zero() && (&n % &pb).is_zero() {
        n /= &pb;
    }
    n
}

pub fn strip_prime_u64(mut n: u64, p: u64) -> u64 {
    if p < 2 {
        return n;
    }
    while n != 0 && n % p == 0 {
        n /= p;
    }
    n
}

/// If `q` is a prime power `p^k` with `k ≥ 1`, returns `p`.
pub fn prime_power_base(q: u64) -> Option<u64> {
    let f = factor_u64(q);
    if f.len() == 1 {
        Some(f[0].0)
    } else {
        None
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc as usize
}

pub fn pow_big(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Inverse of `a` modulo `m > 1`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Nonnegative residue; a modulus of zero means "no reduction".
pub fn reduce(x: &BigInt, m: &BigInt) -> BigInt {
    if m.is_zero() {
        x.clone()
    } else {
        x.mod_floor(m)
    }
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Smallest prime not contained in `avoid`.
pub fn smallest_prime_avoiding(avoid: &[u64]) -> u64 {
    (2..)
        .filter(|&n| is_prime(n) && !avoid.contains(&n))
        .next()
        .expect("infinitely many primes")
}
