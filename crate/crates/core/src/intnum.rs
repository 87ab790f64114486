//! Integer helpers: primality, factorization of group orders, divisor
//! lattices, and the Möbius function.
//!
//! Orders of matrices over finite fields divide lcm's of `q^d - 1` values,
//! which the crate caps below `2^63`, so plain `u64` arithmetic with `u128`
//! intermediates is enough here.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple, guarded against `u64` overflow.
pub fn lcm_checked(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    let g = gcd_u64(a, b);
    let wide = (a / g) as u128 * b as u128;
    u64::try_from(wide)
        .map_err(|_| Error::DegreeTooLarge(format!("lcm({a}, {b}) exceeds the 64-bit order cap")))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

/// Deterministic Miller–Rabin, exact for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64, seed: u64) -> u64 {
    // Brent's cycle variant; n must be odd, composite, and not a prime power
    // caught earlier by trial division.
    let mut c = seed % n;
    loop {
        c = (c + 1) % n;
        if c == 0 {
            continue;
        }
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
}

/// Prime factorization of `n >= 1` as an exponent map.
pub fn factor_u64(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    if n <= 1 {
        return out;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(m, 1);
        stack.push(d);
        stack.push(m / d);
    }
    out
}

/// All divisors of `n`, ascending.
pub fn divisors_sorted(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (&p, &e) in &factor_u64(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for &d in &divs {
            let mut pk = 1u64;
            for _ in 0..=e {
                next.push(d * pk);
                if pk <= u64::MAX / p {
                    pk *= p;
                } else {
                    break;
                }
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    divs
}

/// Möbius function.
pub fn moebius(n: u64) -> i64 {
    let fac = factor_u64(n);
    if fac.values().any(|&e| e > 1) {
        return 0;
    }
    if fac.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for &p in factor_u64(n).keys() {
        phi = phi / p * (p - 1);
    }
    phi
}
