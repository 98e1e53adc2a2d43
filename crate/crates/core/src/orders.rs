//! Integer number theory: valuations, lifting the exponent, and
//! multiplicative orders of `q` modulo prime powers and general moduli.
//!
//! The prime-power orders are evaluated in closed form from the valuations
//! of `q - 1`, `q + 1` and `q^2 - 1`; [`ord_bruteforce`] is the iterated
//! multiplication oracle they are tested against.
//!
//! For `p = 2` the order follows three regimes:
//!
//! ```text
//! ord_{2^k}(q) = 1             if k <= v_2(q - 1)
//!              = 2             if v_2(q - 1) < k <= v_2(q^2 - 1)
//!              = 2^(k - w + 1) if k > w = v_2(q^2 - 1)
//! ```
//!
//! which collapses to the two-regime `2^(k - v_2(q - 1))` form only when
//! `q = 1 (mod 4)`. For `q = 3`, `ord_8(3) = 2`.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Splits `q = r^k` with `r` prime; `None` if `q` is not a prime power.
pub fn prime_power_parts(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(r, k)] => Some((*r, *k)),
        _ => None,
    }
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

/// p-adic valuation of `n >= 1`.
pub fn vp(p: u64, mut n: u64) -> u32 {
    debug_assert!(p >= 2 && n >= 1);
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

fn vp_u128(p: u64, mut n: u128) -> u32 {
    let p = p as u128;
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// `v_p(a^k - 1)` by lifting the exponent, without forming `a^k`.
///
/// Odd `p` requires `p | a - 1`; `p = 2` requires `a` odd.
pub fn lte_v(p: u64, a: u64, k: u64) -> Result<u32> {
    if a < 2 || k == 0 || !is_prime(p) {
        return Err(Error::LtePreconditionFailed { p, a });
    }
    if p == 2 {
        if a.is_multiple_of(2) {
            return Err(Error::LtePreconditionFailed { p, a });
        }
        if k % 2 == 1 {
            Ok(vp(2, a - 1))
        } else {
            let a_sq_minus_one = (a as u128) * (a as u128) - 1;
            Ok(vp_u128(2, a_sq_minus_one) + vp(2, k) - 1)
        }
    } else {
        if !(a - 1).is_multiple_of(p) {
            return Err(Error::LtePreconditionFailed { p, a });
        }
        Ok(vp(p, a - 1) + vp(p, k))
    }
}

/// Valuations of `q - 1`, `q + 1` and `q^2 - 1` relevant to one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderProfile {
    pub q: u64,
    pub p: u64,
    /// `v_2(q - 1)`.
    pub k0: u32,
    /// `v_p(q - 1)`.
    pub k1: u32,
    /// `v_p(q + 1)`.
    pub k2: u32,
    /// `v_p(q^2 - 1)`.
    pub w: u32,
}

impl OrderProfile {
    pub fn new(q: u64, p: u64) -> Self {
        let k1 = vp(p, q - 1);
        let k2 = vp(p, q + 1);
        OrderProfile {
            q,
            p,
            k0: vp(2, q - 1),
            k1,
            k2,
            w: k1 + k2,
        }
    }
}

/// How a prime-power order was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderMethod {
    ClosedForm,
    /// `p` does not divide `q^2 - 1`; no closed form applies.
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePowerOrder {
    pub order: u64,
    pub method: OrderMethod,
}

/// Multiplicative order of `q` modulo `p^k`.
pub fn ord_prime_power(q: u64, p: u64, k: u32) -> Result<PrimePowerOrder> {
    if q < 2 || k == 0 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!(
            "ord_prime_power needs q >= 2, prime p and k >= 1 (got q={q}, p={p}, k={k})"
        )));
    }
    if q.is_multiple_of(p) {
        return Err(Error::NotCoprime { a: q, m: p });
    }
    let prof = OrderProfile::new(q, p);
    let closed = |order| PrimePowerOrder {
        order,
        method: OrderMethod::ClosedForm,
    };
    if p == 2 {
        let order = if k <= prof.k0 {
            1
        } else if k <= prof.w {
            2
        } else {
            1u64 << (k - prof.w + 1)
        };
        return Ok(closed(order));
    }
    if prof.k1 > 0 {
        let order = if k <= prof.k1 { 1 } else { p.pow(k - prof.k1) };
        Ok(closed(order))
    } else if prof.k2 > 0 {
        let order = if k <= prof.k2 {
            2
        } else {
            2 * p.pow(k - prof.k2)
        };
        Ok(closed(order))
    } else {
        let modulus = p
            .checked_pow(k)
            .ok_or_else(|| Error::InvalidArgument(format!("{p}^{k} overflows")))?;
        Ok(PrimePowerOrder {
            order: ord_bruteforce(q, modulus)?,
            method: OrderMethod::BruteForce,
        })
    }
}

/// `ord_d(q)` as the lcm of the prime-power orders of the factors of `d`.
pub fn ord_general(q: u64, d: u64) -> Result<u64> {
    if d == 0 || q < 2 {
        return Err(Error::InvalidArgument(format!(
            "ord_general needs q >= 2 and d >= 1 (got q={q}, d={d})"
        )));
    }
    if gcd(q, d) != 1 {
        return Err(Error::NotCoprime { a: q, m: d });
    }
    factorize(d).into_iter().try_fold(1u64, |acc, (p, e)| {
        Ok(lcm(acc, ord_prime_power(q, p, e)?.order))
    })
}

/// Least `t >= 1` with `q^t = 1 (mod d)`, by iterated multiplication.
pub fn ord_bruteforce(q: u64, d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    if gcd(q, d) != 1 {
        return Err(Error::NotCoprime { a: q, m: d });
    }
    if d == 1 {
        return Ok(1);
    }
    let base = q % d;
    let mut acc = base;
    let mut t = 1;
    while acc != 1 {
        acc = mul_mod(acc, base, d);
        t += 1;
    }
    Ok(t)
}
