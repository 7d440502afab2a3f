//! Independent reference computations for the integration and acceptance
//! tests. Nothing here calls into the library; the point is to have a second,
//! deliberately naive route to each number.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Euler's constant to double precision, as a literal reference.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `d(n)` for `n ≤ limit` by marking multiples.
pub fn divisor_counts(limit: usize) -> Vec<u32> {
    let mut d = vec![0u32; limit + 1];
    for m in 1..=limit {
        for n in (m..=limit).step_by(m) {
            d[n] += 1;
        }
    }
    d
}

/// `r(n)` for `n ≤ limit` by counting lattice points on circles.
pub fn two_square_counts(limit: usize) -> Vec<u32> {
    let mut r = vec![0u32; limit + 1];
    let b = (limit as f64).sqrt() as i64 + 1;
    for x in -b..=b {
        for y in -b..=b {
            let n = (x * x + y * y) as usize;
            if n <= limit {
                r[n] += 1;
            }
        }
    }
    r
}

/// Squarefree kernel of every `n ≤ limit` via smallest prime factors.
pub fn kernels(limit: usize) -> Vec<u64> {
    let mut spf = vec![0usize; limit + 1];
    for p in 2..=limit {
        if spf[p] == 0 {
            for n in (p..=limit).step_by(p) {
                if spf[n] == 0 {
                    spf[n] = p;
                }
            }
        }
    }
    let mut k = vec![1u64; limit + 1];
    for n in 2..=limit {
        let p = spf[n];
        let m = n / p;
        k[n] = if k[m] % p as u64 == 0 { k[m] / p as u64 } else { k[m] * p as u64 };
    }
    k
}

/// `ζ(s)` for real `s > 1` by Euler–Maclaurin with three correction terms.
pub fn zeta(s: f64) -> f64 {
    let n = 1000u32;
    let mut sum = 0.0;
    for m in (1..n).rev() {
        sum += (m as f64).powf(-s);
    }
    let nf = n as f64;
    sum + nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s * nf.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * nf.powf(-s - 3.0) / 720.0
}

/// `ζ⁴(3/2)/ζ(3) = Σ d²(n) n^{-3/2}`.
pub fn divisor_square_series() -> f64 {
    zeta(1.5).powi(4) / zeta(3.0)
}

/// Weights `w(s) = d(s²h)(s²h)^{-3/4}` for `s ≥ 1`, `s²h ≤ y`, per kernel `h`.
fn kernel_weights(d: &[u32], ker: &[u64], y: usize) -> Vec<(u64, Vec<f64>)> {
    let mut by: std::collections::BTreeMap<u64, Vec<f64>> = Default::default();
    for n in 1..=y {
        by.entry(ker[n]).or_default().push(d[n] as f64 * (n as f64).powf(-0.75));
    }
    // within a kernel the n = s²h come in increasing s, so index s−1 is w(s)
    by.into_iter().collect()
}

/// `s_{3;1}(d; y)`: ordered `(n₁, n₂, n₃)` with `√n₁ = √n₂ + √n₃`.
pub fn s31(d: &[u32], ker: &[u64], y: usize) -> f64 {
    let mut total = 0.0;
    for (_, w) in kernel_weights(d, ker, y) {
        let m = w.len();
        for a in 1..=m {
            for b in 1..=m {
                if a + b > m {
                    break;
                }
                total += w[a + b - 1] * w[a - 1] * w[b - 1];
            }
        }
    }
    total
}

/// `s_{4;2}(d; y)`: ordered tuples with `√n₁ + √n₂ = √n₃ + √n₄`.
///
/// Either all four share a kernel, or the two kernels on each side are
/// distinct and the sides agree as multisets.
pub fn s42(d: &[u32], ker: &[u64], y: usize) -> f64 {
    let groups = kernel_weights(d, ker, y);
    let mut same = 0.0;
    let mut sq_per_kernel = 0.0;
    let mut sq_total = 0.0;
    for (_, w) in &groups {
        let m = w.len();
        let mut conv = vec![0.0; 2 * m + 1];
        for a in 1..=m {
            for b in 1..=m {
                conv[a + b] += w[a - 1] * w[b - 1];
            }
        }
        same += conv.iter().map(|c| c * c).sum::<f64>();
        let q: f64 = w.iter().map(|x| x * x).sum();
        sq_per_kernel += q * q;
        sq_total += q;
    }
    same + 2.0 * (sq_total * sq_total - sq_per_kernel)
}

/// `Σ_{n ≤ y} f(n)² n^{-3/2}`.
pub fn square_sum(f: &[u32], y: usize) -> f64 {
    (1..=y).rev().map(|n| (f[n] as f64).powi(2) * (n as f64).powf(-1.5)).sum()
}

/// `Σ r²(n) n^{-3/2}` over all `n`: the sum to `y` plus the tail implied by
/// `Σ_{n≤x} r²(n) = 4x log x + c x + o(x)` with `c` read off at `x = y`.
pub fn two_square_series(r: &[u32], y: usize) -> f64 {
    let head = square_sum(r, y);
    let yf = y as f64;
    let partial: f64 = (1..=y).map(|n| (r[n] as f64).powi(2)).sum();
    let c = partial / yf - 4.0 * yf.ln();
    // ∫_y^∞ (4 log t + 4 + c) t^{-3/2} dt
    let tail = (8.0 * yf.ln() + 16.0 + 2.0 * (4.0 + c)) / yf.sqrt();
    head + tail
}

/// `∫₁ᵀ Δ(x) dx` in closed form: `Σ_{n≤T} d(n)(T − n)` minus the integral of
/// the main term.
pub fn first_moment(d: &[u32], t: f64) -> f64 {
    let top = t.floor() as usize;
    let step: f64 = (1..=top).map(|n| d[n] as f64 * (t - n as f64)).sum();
    let g = 2.0 * EULER_GAMMA - 1.0;
    let main = |x: f64| x * x / 2.0 * x.ln() - x * x / 4.0 + g * x * x / 2.0;
    step - (main(t) - main(1.0))
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        // the floor keeps the recursion from chasing rounding noise
        if depth == 0 || delta.abs() <= 15.0 * tol.max(1e-14 * (b - a)) {
            return left + right + delta / 15.0;
        }
        rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    // split first so the recursion starts below the oscillation scale
    let pieces = 256;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = lo + h;
            let (fa, fb) = (f(lo), f(hi));
            let (m, fm, whole) = simpson(f, lo, fa, hi, fb);
            rec(f, lo, fa, hi, fb, m, fm, whole, tol / pieces as f64, 24)
        })
        .sum()
}

/// `B_k` from `s_{k;l}` values: `Σ_l C(k−1,l) s_{k;l} cos(π(k − 2l)/4)`.
pub fn bk_from(k: usize, s: &[f64]) -> f64 {
    let mut c = 1.0;
    let mut total = 0.0;
    for l in 1..k {
        c = c * (k - l) as f64 / l as f64;
        total += c * s[l - 1] * (PI * (k as f64 - 2.0 * l as f64) / 4.0).cos();
    }
    total
}

/// `τ(n)` for `n ≤ limit` from `q ∏ (1 − qⁿ)²⁴ = q (Σ (−1)^m (2m+1) q^{m(m+1)/2})⁸`.
pub fn ramanujan_tau(limit: usize) -> Vec<i128> {
    let mut cube = vec![0i128; limit];
    let mut m = 0usize;
    while m * (m + 1) / 2 < limit {
        cube[m * (m + 1) / 2] = if m % 2 == 0 { 1 } else { -1 } * (2 * m as i128 + 1);
        m += 1;
    }
    let sparse: Vec<(usize, i128)> = cube.iter().enumerate().filter(|x| *x.1 != 0).map(|(i, &v)| (i, v)).collect();
    let mut acc = cube.clone();
    for _ in 1..8 {
        let mut next = vec![0i128; limit];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(j, b) in &sparse {
                if i + j >= limit {
                    break;
                }
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    let mut tau = vec![0i128; limit + 1];
    tau[1..].copy_from_slice(&acc);
    tau
}
