//! Segmented sieve for `d(n)`, `r(n)`, `μ(n)` and the squarefree kernel.
//!
//! `d` and `r` come from divisor pairs `(m, n/m)` with `m ≤ √n`, so a segment
//! `[lo, hi)` costs `O((hi - lo) log hi + √hi)`. `r(n) = 4 Σ_{m | n} χ₄(m)` with
//! `χ₄` the non-principal character mod 4. `μ` and the kernel come from trial
//! division by the primes up to `√hi`.

pub const DEFAULT_SEGMENT: usize = 1 << 22;

/// Output slices for one segment `[lo, lo + len)`.
pub struct SegmentOut<'a> {
    pub d: &'a mut [u32],
    pub r: &'a mut [i32],
    pub mu: &'a mut [i8],
    pub kernel: &'a mut [u64],
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

#[inline]
fn chi4(m: u64) -> i32 {
    match m & 3 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// Sieves `[lo, lo + out.d.len())`. `primes` must contain every prime up to
/// `√(hi - 1)`.
pub fn sieve_segment(lo: u64, primes: &[u64], out: SegmentOut<'_>) {
    let len = out.d.len();
    assert!(lo >= 1);
    assert!(out.r.len() == len && out.mu.len() == len && out.kernel.len() == len);
    if len == 0 {
        return;
    }
    let hi = lo + len as u64;
    let SegmentOut { d, r, mu, kernel } = out;
    d.fill(0);
    let mut rsum = vec![0i32; len];

    let root = isqrt(hi - 1);
    for m in 1..=root {
        let start = lo.max(m * m);
        let mut n = start.div_ceil(m) * m;
        let cm = chi4(m);
        while n < hi {
            let idx = (n - lo) as usize;
            let c = n / m;
            if c == m {
                d[idx] += 1;
                rsum[idx] += cm;
            } else {
                d[idx] += 2;
                rsum[idx] += cm + chi4(c);
            }
            n += m;
        }
    }
    for (ri, s) in r.iter_mut().zip(&rsum) {
        *ri = 4 * s;
    }

    let mut rem: Vec<u64> = (lo..hi).collect();
    mu.fill(1);
    kernel.fill(1);
    for &p in primes {
        if p * p > hi - 1 {
            break;
        }
        let mut n = lo.div_ceil(p) * p;
        while n < hi {
            let idx = (n - lo) as usize;
            let mut e = 0u32;
            while rem[idx] % p == 0 {
                rem[idx] /= p;
                e += 1;
            }
            if e >= 2 {
                mu[idx] = 0;
            } else {
                mu[idx] = -mu[idx];
            }
            if e % 2 == 1 {
                kernel[idx] *= p;
            }
            n += p;
        }
    }
    for idx in 0..len {
        if rem[idx] > 1 {
            mu[idx] = -mu[idx];
            kernel[idx] *= rem[idx];
        }
    }
}

/// Sieves `[lo, hi)` into freshly allocated vectors.
pub fn sieve_range(lo: u64, hi: u64) -> (Vec<u32>, Vec<i32>, Vec<i8>, Vec<u64>) {
    let len = (hi - lo) as usize;
    let primes = primes_up_to(isqrt(hi.saturating_sub(1)));
    let mut d = vec![0u32; len];
    let mut r = vec![0i32; len];
    let mut mu = vec![0i8; len];
    let mut kernel = vec![0u64; len];
    sieve_segment(
        lo,
        &primes,
        SegmentOut {
            d: &mut d,
            r: &mut r,
            mu: &mut mu,
            kernel: &mut kernel,
        },
    );
    (d, r, mu, kernel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|m| n % m == 0).collect()
    }

    fn r_by_lattice(n: u64) -> i32 {
        let b = isqrt(n) as i64;
        let mut c = 0;
        for x in -b..=b {
            for y in -b..=b {
                if (x * x + y * y) as u64 == n {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn isqrt_edges() {
        for n in 0..2000u64 {
            let s = isqrt(n);
            assert!(s * s <= n && (s + 1) * (s + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX), 4294967295);
    }

    #[test]
    fn segments_agree_with_brute_force() {
        // An awkward offset so segment boundaries are not aligned to anything.
        let (d, r, mu, ker) = sieve_range(937, 1400);
        for (i, n) in (937..1400u64).enumerate() {
            let divs = divisors(n);
            assert_eq!(d[i] as usize, divs.len(), "d({n})");
            assert_eq!(r[i], r_by_lattice(n), "r({n})");
            let square_free = (2..=isqrt(n)).all(|q| n % (q * q) != 0);
            assert_eq!(mu[i] == 0, !square_free, "mu({n})");
            let k = ker[i];
            assert!((2..=isqrt(k)).all(|q| k % (q * q) != 0));
            let sq = n / k;
            assert_eq!(n % k, 0);
            assert_eq!(isqrt(sq) * isqrt(sq), sq);
        }
    }

    #[test]
    fn mobius_signs() {
        let (_, _, mu, _) = sieve_range(1, 31);
        assert_eq!(mu[0], 1);
        assert_eq!(mu[29], -1); // 30 = 2·3·5
        assert_eq!(mu[5], 1); // 6
        assert_eq!(mu[11], 0); // 12
    }
}
