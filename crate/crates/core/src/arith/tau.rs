//! Ramanujan's `τ(n)` from `Δ = (E₄³ − E₆²)/1728`.
//!
//! The intermediate coefficients grow like `n¹¹` and overflow 128 bits well
//! before `n = 10⁴`, so the series products run modulo four primes just below
//! `2³¹` and the signed result is rebuilt by Garner's CRT. `|τ(n)| ≤ d(n) n^{11/2}`
//! stays far below the 123-bit symmetric range this recovers.

use super::sieve::isqrt;

const CRT_PRIMES: usize = 4;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    (2..=isqrt(n)).all(|q| n % q != 0)
}

/// The four largest primes below 2³¹.
fn crt_primes() -> [u64; CRT_PRIMES] {
    let mut out = [0; CRT_PRIMES];
    let mut c = (1u64 << 31) - 1;
    let mut i = 0;
    while i < CRT_PRIMES {
        if is_prime(c) {
            out[i] = c;
            i += 1;
        }
        c -= 1;
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Truncated product of two series mod `p`, coefficients `0..len`.
fn mul_series(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().min(b.len());
    let mut out = vec![0u64; len];
    for (n, o) in out.iter_mut().enumerate() {
        // products are < 2^62, so a u128 accumulator never overflows here
        let mut acc: u128 = 0;
        for i in 0..=n {
            acc += (a[i] * b[n - i]) as u128;
        }
        *o = (acc % p as u128) as u64;
    }
    out
}

/// `σ_j(n) mod p` for `n ≤ len - 1`.
fn sigma_mod(j: u32, len: usize, p: u64) -> Vec<u64> {
    let mut s = vec![0u64; len];
    for m in 1..len {
        let mj = pow_mod(m as u64, j as u64, p);
        let mut n = m;
        while n < len {
            s[n] = (s[n] + mj) % p;
            n += m;
        }
    }
    s
}

/// `1728·τ` residues mod `p` for indices `0..len`, divided by 1728.
fn tau_mod(len: usize, p: u64) -> Vec<u64> {
    let s3 = sigma_mod(3, len, p);
    let s5 = sigma_mod(5, len, p);
    let mut e4 = vec![0u64; len];
    let mut e6 = vec![0u64; len];
    e4[0] = 1;
    e6[0] = 1;
    for n in 1..len {
        e4[n] = 240 * s3[n] % p;
        e6[n] = (p - 504 * s5[n] % p) % p;
    }
    let e4sq = mul_series(&e4, &e4, p);
    let e4cube = mul_series(&e4sq, &e4, p);
    let e6sq = mul_series(&e6, &e6, p);
    let inv = inv_mod(1728, p);
    e4cube
        .iter()
        .zip(&e6sq)
        .map(|(&a, &b)| (a + p - b) % p * inv % p)
        .collect()
}

/// `τ(n)` for `n = 0..=limit` (`τ(0) = 0`).
pub fn tau_table(limit: usize) -> Vec<i128> {
    if limit == 0 {
        return vec![0];
    }
    let len = limit + 1;
    let primes = crt_primes();
    let residues: Vec<Vec<u64>> = {
        use rayon::prelude::*;
        primes.par_iter().map(|&p| tau_mod(len, p)).collect()
    };

    // Garner: x = a0 + p0*(a1' + p1*(a2' + ...)), mixed-radix digits.
    let mut coef_inv = [[0u64; CRT_PRIMES]; CRT_PRIMES];
    for i in 0..CRT_PRIMES {
        for j in 0..i {
            coef_inv[i][j] = inv_mod(primes[j] % primes[i], primes[i]);
        }
    }
    let modulus: i128 = primes.iter().map(|&p| p as i128).product();
    let half = modulus / 2;

    (0..len)
        .map(|n| {
            let mut digits = [0u64; CRT_PRIMES];
            for i in 0..CRT_PRIMES {
                let p = primes[i];
                let mut v = residues[i][n] % p;
                for j in 0..i {
                    v = (v + p - digits[j] % p) % p * coef_inv[i][j] % p;
                }
                digits[i] = v;
            }
            let mut x: i128 = 0;
            let mut radix: i128 = 1;
            for i in 0..CRT_PRIMES {
                x += digits[i] as i128 * radix;
                radix *= primes[i] as i128;
            }
            if x > half {
                x - modulus
            } else {
                x
            }
        })
        .collect()
}
