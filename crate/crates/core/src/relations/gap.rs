//! Near-cancellation among signed sums of square roots.
//!
//! `min_gap` splits the terms into a plus group and a minus group, lists the
//! sums of each group over multisets (order within a group does not change
//! the value), sorts them and meets in the middle. Whether a candidate is
//! exactly zero is decided by kernel balance, never by rounding; nonzero
//! candidates are evaluated in double-double (≈ 32 digits).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::sieve::{isqrt, sieve_range};
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Work guard for `min_gap`: total number of group sums listed.
pub const GAP_GUARD: u128 = 20_000_000;

/// Signs `(i₁,…,i_{k−1})`: term `j+1` enters with sign `(−1)^{i_j}`; the first
/// term is always positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern(pub Vec<bool>);

impl SignPattern {
    pub fn k(&self) -> usize {
        self.0.len() + 1
    }

    /// Sign of position `p` (0-based), `true` for minus.
    pub fn is_minus(&self, p: usize) -> bool {
        p > 0 && self.0[p - 1]
    }

    pub fn all_plus(&self) -> bool {
        self.0.iter().all(|&b| !b)
    }
}

impl FromStr for SignPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::invalid(format!("sign pattern must be 0/1, got '{s}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.is_empty() {
            return Err(Error::invalid("empty sign pattern"));
        }
        Ok(SignPattern(bits))
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for SignPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapResult {
    /// Smallest nonzero `|√n₁ ± √n₂ ± ⋯|` with all `n_j ≤ N`.
    pub alpha_min: f64,
    /// A minimizing tuple in positional order.
    pub witness: Vec<u64>,
    /// Bound on the absolute error of `alpha_min` as computed (before the
    /// final rounding to `f64`).
    pub error_bound: f64,
}

/// Non-decreasing tuples of width `w` over `1..=n`, flattened.
fn multisets(w: usize, n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    if w == 0 {
        return out;
    }
    let mut cur = vec![1u32; w];
    loop {
        out.extend_from_slice(&cur);
        let mut p = w;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if cur[p] < n {
                cur[p] += 1;
                let v = cur[p];
                for q in &mut cur[p + 1..] {
                    *q = v;
                }
                break;
            }
        }
    }
}

fn multiset_count(w: usize, n: u64) -> u128 {
    // C(n + w − 1, w)
    let mut c: u128 = 1;
    for i in 0..w as u128 {
        c = c.saturating_mul(n as u128 + i) / (i + 1);
    }
    c
}

struct Group {
    width: usize,
    tuples: Vec<u32>,
    /// `(value, index)` sorted by value.
    sorted: Vec<(f64, u32)>,
}

impl Group {
    fn new(width: usize, n: u32, sqrt: &[f64]) -> Self {
        let tuples = multisets(width, n);
        let count = if width == 0 { 1 } else { tuples.len() / width };
        let mut sorted: Vec<(f64, u32)> = (0..count)
            .map(|i| {
                let t = &tuples[i * width..(i + 1) * width];
                (t.iter().map(|&m| sqrt[m as usize]).sum(), i as u32)
            })
            .collect();
        sorted.par_sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        Group { width, tuples, sorted }
    }

    fn tuple(&self, i: u32) -> &[u32] {
        let i = i as usize;
        &self.tuples[i * self.width..(i + 1) * self.width]
    }
}

/// Minimum of `|√n₁ + (−1)^{i₁}√n₂ + ⋯|` over tuples with `1 ≤ n_j ≤ n_max`
/// whose value is not zero.
pub fn min_gap(pattern: &SignPattern, n_max: u64) -> Result<GapResult> {
    min_gap_with_guard(pattern, n_max, GAP_GUARD)
}

pub fn min_gap_with_guard(pattern: &SignPattern, n_max: u64, guard: u128) -> Result<GapResult> {
    let k = pattern.k();
    if k < 2 {
        return Err(Error::invalid("min_gap needs k ≥ 2"));
    }
    if n_max == 0 || n_max > u32::MAX as u64 {
        return Err(Error::invalid(format!("N must be in 1..2^32, got {n_max}")));
    }
    let minus_w = pattern.0.iter().filter(|&&b| b).count();
    let plus_w = k - minus_w;
    let cost = multiset_count(plus_w, n_max).saturating_add(multiset_count(minus_w, n_max));
    if cost > guard {
        return Err(Error::GuardExceeded { cost, guard });
    }

    let (_, _, _, kern) = sieve_range(1, n_max + 1);
    let mut sqrt = vec![0.0; n_max as usize + 1];
    let mut split = vec![(0u64, 0u64); n_max as usize + 1];
    for n in 1..=n_max {
        sqrt[n as usize] = (n as f64).sqrt();
        let h = kern[(n - 1) as usize];
        split[n as usize] = (isqrt(n / h), h);
    }
    let plus = Group::new(plus_w, n_max as u32, &sqrt);
    let minus = Group::new(minus_w, n_max as u32, &sqrt);

    let is_zero = |p: &[u32], m: &[u32]| {
        let mut acc: Vec<(u64, i64)> = Vec::with_capacity(k);
        for (&t, sign) in p.iter().map(|t| (t, 1i64)).chain(m.iter().map(|t| (t, -1i64))) {
            let (s, h) = split[t as usize];
            match acc.iter_mut().find(|e| e.0 == h) {
                Some(e) => e.1 += sign * s as i64,
                None => acc.push((h, sign * s as i64)),
            }
        }
        acc.iter().all(|e| e.1 == 0)
    };
    let dd_value = |p: &[u32], m: &[u32]| {
        let mut v = DoubleDouble::ZERO;
        for &t in p {
            v = v + DoubleDouble::sqrt_u64(t as u64);
        }
        for &t in m {
            v = v - DoubleDouble::sqrt_u64(t as u64);
        }
        v.abs()
    };

    let scale = k as f64 * (n_max as f64).sqrt();
    let margin = 64.0 * f64::EPSILON * scale;

    type Best = Option<(DoubleDouble, Vec<u32>, Vec<u32>)>;
    let better = |a: &Best, b: &Best| -> bool {
        match (a, b) {
            (Some(_), None) => true,
            (Some((va, pa, ma)), Some((vb, pb, mb))) => {
                va < vb || (va == vb && (pa, ma) < (pb, mb))
            }
            _ => false,
        }
    };

    let best: Best = plus
        .sorted
        .par_chunks(4096)
        .map(|chunk| {
            let mut best: Best = None;
            let mut best_f = f64::INFINITY;
            for &(v, pi) in chunk {
                let p = plus.tuple(pi);
                let start = minus.sorted.partition_point(|e| e.0 < v);
                let consider = |j: usize, best: &mut Best, best_f: &mut f64| {
                    let mi = minus.sorted[j].1;
                    let m = minus.tuple(mi);
                    if is_zero(p, m) {
                        return;
                    }
                    let dv = dd_value(p, m);
                    let cand: Best = Some((dv, p.to_vec(), m.to_vec()));
                    if better(&cand, best) {
                        *best = cand;
                        *best_f = dv.to_f64();
                    }
                };
                let mut j = start;
                while j < minus.sorted.len() && minus.sorted[j].0 - v <= best_f + margin {
                    consider(j, &mut best, &mut best_f);
                    j += 1;
                }
                let mut j = start;
                while j > 0 && v - minus.sorted[j - 1].0 <= best_f + margin {
                    consider(j - 1, &mut best, &mut best_f);
                    j -= 1;
                }
            }
            best
        })
        .reduce(|| None, |a, b| if better(&b, &a) { b } else { a });

    let (value, p, m) = best.ok_or_else(|| Error::invalid("no nonzero value in range"))?;
    let (mut pi, mut mi) = (p.iter(), m.iter());
    let witness = (0..k)
        .map(|pos| {
            let it = if pattern.is_minus(pos) { &mut mi } else { &mut pi };
            *it.next().expect("group sizes match the pattern") as u64
        })
        .collect();
    Ok(GapResult {
        alpha_min: value.to_f64(),
        witness,
        error_bound: 8.0 * scale * 2f64.powi(-104),
    })
}

/// `Δ E^{-1/2} N₁⋯N_k + E^{-1} N₁⋯N_k` with `E = max N_j`.
pub fn count_bound(ns: &[u64], delta: f64) -> f64 {
    let prod: f64 = ns.iter().map(|&n| n as f64).product();
    let e = ns.iter().copied().max().unwrap_or(1) as f64;
    delta * prod / e.sqrt() + prod / e
}

/// Number of tuples with `N_j < n_j ≤ 2N_j` and
/// `|√n₁ + (−1)^{i₁}√n₂ + ⋯| < Δ`.
///
/// The first `k − 1` coordinates are scanned; the admissible last coordinates
/// form an integer interval whose ends are located in double-double.
pub fn count_inequality_solutions(ns: &[u64], pattern: &SignPattern, delta: f64) -> Result<u64> {
    let k = ns.len();
    if pattern.k() != k {
        return Err(Error::invalid(format!(
            "sign pattern has {} entries, expected {}",
            pattern.0.len(),
            k - 1
        )));
    }
    if k < 2 {
        return Err(Error::invalid("need at least two ranges"));
    }
    if ns.iter().any(|&n| n == 0 || n > u32::MAX as u64) {
        return Err(Error::invalid("each N_j must be in 1..2^32"));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::invalid(format!("delta must be positive, got {delta}")));
    }
    let cost = ns.iter().fold(1u128, |a, &n| a.saturating_mul(n as u128));
    if cost > super::DEFAULT_GUARD {
        return Err(Error::GuardExceeded {
            cost,
            guard: super::DEFAULT_GUARD,
        });
    }
    let sign = |p: usize| if pattern.is_minus(p) { -1.0 } else { 1.0 };
    let dd_delta = DoubleDouble::from_f64(delta);
    let last = k - 1;
    let (lo_n, hi_n) = (ns[last] + 1, 2 * ns[last]);
    let sig_last = sign(last);

    let count = (ns[0] + 1..=2 * ns[0])
        .into_par_iter()
        .map(|n1| {
            let mut idx: Vec<u64> = ns[..last].iter().map(|&n| n + 1).collect();
            idx[0] = n1;
            let mut total = 0u64;
            loop {
                let mut v = DoubleDouble::ZERO;
                for (p, &n) in idx.iter().enumerate() {
                    let r = DoubleDouble::sqrt_u64(n);
                    v = if sign(p) < 0.0 { v - r } else { v + r };
                }
                let pred = |n: u64| {
                    let r = DoubleDouble::sqrt_u64(n);
                    let w = if sig_last < 0.0 { v - r } else { v + r };
                    w.abs() < dd_delta
                };
                // √n must lie in (c − Δ, c + Δ), c = −σ v.
                let c = -sig_last * v.to_f64();
                let (a, b) = (c - delta, c + delta);
                if b > 0.0 {
                    let lo_f = if a > 0.0 { a * a } else { 0.0 };
                    let hi_f = b * b;
                    let lo_start = ((lo_f.floor() as u64).saturating_sub(2)).max(lo_n);
                    let hi_start = ((hi_f.ceil() as u64).saturating_add(2)).min(hi_n);
                    if lo_start <= hi_start {
                        let mut lo = lo_start;
                        while lo <= hi_start && !pred(lo) {
                            lo += 1;
                        }
                        if lo <= hi_start {
                            let mut hi = hi_start;
                            while hi > lo && !pred(hi) {
                                hi -= 1;
                            }
                            total += hi - lo + 1;
                        }
                    }
                }
                let mut p = last;
                loop {
                    if p <= 1 {
                        return total;
                    }
                    p -= 1;
                    idx[p] += 1;
                    if idx[p] <= 2 * ns[p] {
                        break;
                    }
                    idx[p] = ns[p] + 1;
                }
            }
        })
        .sum();
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> SignPattern {
        s.parse().unwrap()
    }

    #[test]
    fn multisets_are_complete() {
        let m = multisets(3, 4);
        assert_eq!(m.len() / 3, multiset_count(3, 4) as usize);
        assert_eq!(&m[..3], &[1, 1, 1]);
        assert_eq!(&m[m.len() - 3..], &[4, 4, 4]);
    }

    #[test]
    fn two_terms_adjacent() {
        let g = min_gap(&pat("1"), 100).unwrap();
        let want = 10.0 - 99f64.sqrt();
        assert!((g.alpha_min - want).abs() < 1e-15, "{g:?}");
        let mut w = g.witness.clone();
        w.sort();
        assert_eq!(w, vec![99, 100]);
    }

    #[test]
    fn all_plus_is_trivial() {
        let g = min_gap(&pat("00"), 10).unwrap();
        assert_eq!(g.alpha_min, 3.0);
    }

    #[test]
    fn exact_zeros_skipped() {
        // √4 − √1 − √1 = 0 must not be reported
        let g = min_gap(&pat("11"), 4).unwrap();
        assert!(g.alpha_min > 0.0);
        let brute = {
            let mut best = f64::INFINITY;
            for a in 1..=4u64 {
                for b in 1..=4u64 {
                    for c in 1..=4u64 {
                        if Relation::from_values(1, &[a, b, c]).is_some() {
                            continue;
                        }
                        let v = ((a as f64).sqrt() - (b as f64).sqrt() - (c as f64).sqrt()).abs();
                        best = best.min(v);
                    }
                }
            }
            best
        };
        assert!((g.alpha_min - brute).abs() < 1e-14);
    }

    use super::super::Relation;

    #[test]
    fn vacuous_count() {
        let ns = [3u64, 4, 5];
        let c = count_inequality_solutions(&ns, &pat("11"), 1e6).unwrap();
        assert_eq!(c, 60);
        assert!(count_inequality_solutions(&ns, &pat("1"), 1.0).is_err());
    }

    #[test]
    fn count_against_scan() {
        let ns = [8u64, 8, 8];
        for (p, delta) in [("11", 0.01), ("01", 0.3), ("10", 0.05)] {
            let pattern = pat(p);
            let c = count_inequality_solutions(&ns, &pattern, delta).unwrap();
            let mut brute = 0;
            for c3 in (9..=16u64).rev() {
                for b in (9..=16u64).rev() {
                    for a in (9..=16u64).rev() {
                        let t = [a, b, c3];
                        let v: f64 = t
                            .iter()
                            .enumerate()
                            .map(|(i, &n)| if pattern.is_minus(i) { -(n as f64).sqrt() } else { (n as f64).sqrt() })
                            .sum();
                        if v.abs() < delta {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(c, brute, "pattern {p}");
        }
    }
}
