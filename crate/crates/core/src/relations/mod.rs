//! Linear relations among square roots of integers.
//!
//! Every `n` is written as `s²h` with `h` squarefree. Square roots of distinct
//! squarefree numbers are linearly independent over `ℚ`, so
//! `√n₁+⋯+√n_l = √n_{l+1}+⋯+√n_k` holds iff for every kernel `h` the `s`
//! values on the left with kernel `h` sum to those on the right. All
//! membership decisions below are made this way, in integers.

mod gap;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::sieve::{isqrt, sieve_range};
use crate::error::{Error, Result};

pub use gap::{
    count_inequality_solutions, count_bound, min_gap, min_gap_with_guard, GapResult,
    SignPattern,
};

/// Default upper bound on `k` accepted by the enumerators.
pub const DEFAULT_MAX_K: usize = 9;

/// Default work guard for brute-force routines, in tuples visited.
pub const DEFAULT_GUARD: u128 = 1_000_000_000;

/// `n = s²h` with `h` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SqrtInteger {
    pub s: u64,
    pub h: u64,
}

impl SqrtInteger {
    /// Splits `n` by trial division.
    pub fn from_n(n: u64) -> Self {
        assert!(n >= 1, "SqrtInteger needs n ≥ 1");
        let (mut m, mut s, mut h) = (n, 1u64, 1u64);
        let mut p = 2u64;
        while p * p <= m {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            for _ in 0..e / 2 {
                s *= p;
            }
            if e % 2 == 1 {
                h *= p;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        SqrtInteger { s, h: h * m }
    }

    /// Uses a known kernel `h` of `n`.
    pub fn with_kernel(n: u64, h: u64) -> Self {
        let s = isqrt(n / h);
        debug_assert_eq!(s * s * h, n);
        SqrtInteger { s, h }
    }

    pub fn n(self) -> u64 {
        self.s * self.s * self.h
    }
}

/// Positions (1-based) sharing one kernel within a relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelClass {
    pub h: u64,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl fmt::Display for KernelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}:L{{{}}}R{{{}}}", self.h, list(&self.left), list(&self.right))
    }
}

/// One ordered solution `(n₁,…,n_k)` of
/// `√n₁+⋯+√n_l = √n_{l+1}+⋯+√n_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    l: usize,
    terms: Vec<SqrtInteger>,
}

impl Relation {
    /// Builds a relation from integers, `None` unless it is balanced.
    pub fn from_values(l: usize, ns: &[u64]) -> Option<Self> {
        if l == 0 || l >= ns.len() || ns.contains(&0) {
            return None;
        }
        let rel = Relation {
            l,
            terms: ns.iter().map(|&n| SqrtInteger::from_n(n)).collect(),
        };
        rel.is_balanced().then_some(rel)
    }

    pub fn k(&self) -> usize {
        self.terms.len()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn terms(&self) -> &[SqrtInteger] {
        &self.terms
    }

    pub fn values(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.n()).collect()
    }

    /// Per-kernel integer balance check.
    pub fn is_balanced(&self) -> bool {
        let mut acc: BTreeMap<u64, i128> = BTreeMap::new();
        for (i, t) in self.terms.iter().enumerate() {
            let v = if i < self.l { t.s as i128 } else { -(t.s as i128) };
            *acc.entry(t.h).or_default() += v;
        }
        acc.values().all(|&v| v == 0)
    }

    /// Kernel classes in ascending `h`.
    pub fn kernel_classes(&self) -> Vec<KernelClass> {
        let mut m: BTreeMap<u64, KernelClass> = BTreeMap::new();
        for (i, t) in self.terms.iter().enumerate() {
            let c = m.entry(t.h).or_insert_with(|| KernelClass {
                h: t.h,
                left: Vec::new(),
                right: Vec::new(),
            });
            if i < self.l {
                c.left.push(i + 1);
            } else {
                c.right.push(i + 1);
            }
        }
        m.into_values().collect()
    }

    pub fn coordinate_sum(&self) -> u64 {
        self.terms.iter().map(|t| t.n()).sum()
    }
}

/// Whether the coordinates of `rel` have even sum; true for every balanced
/// relation.
pub fn parity_check(rel: &Relation) -> bool {
    rel.coordinate_sum() % 2 == 0
}

fn check_kl(k: usize, l: usize, max_k: usize) -> Result<()> {
    if k < 2 || k > max_k {
        return Err(Error::invalid(format!("k must be in 2..={max_k}, got {k}")));
    }
    if l == 0 || l >= k {
        return Err(Error::invalid(format!("l must be in 1..{k}, got {l}")));
    }
    Ok(())
}

/// Squarefree numbers in `1..=y`, ascending.
pub fn squarefree_up_to(y: u64) -> Vec<u64> {
    if y == 0 {
        return Vec::new();
    }
    let (_, _, mu, _) = sieve_range(1, y + 1);
    (1..=y).filter(|&n| mu[(n - 1) as usize] != 0).collect()
}

/// All tuples in `[1, s_max]^len` with sum `m`, lexicographic.
fn compositions(len: usize, m: u64, s_max: u64, out: &mut Vec<Vec<u64>>) {
    fn go(len: usize, m: u64, s_max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if len == 0 {
            if m == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest = len as u64 - 1;
        if m < len as u64 || m > len as u64 * s_max {
            return;
        }
        let lo = m.saturating_sub(rest * s_max).max(1);
        let hi = (m - rest).min(s_max);
        for s in lo..=hi {
            cur.push(s);
            go(len - 1, m - s, s_max, cur, out);
            cur.pop();
        }
    }
    go(len, m, s_max, &mut Vec::with_capacity(len), out);
}

fn mask_positions(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

struct Enumerator<'a, F> {
    kernels: &'a [u64],
    y: u64,
    l: usize,
    slots: Vec<SqrtInteger>,
    visit: F,
}

impl<F: FnMut(&Relation)> Enumerator<'_, F> {
    fn rec(&mut self, from: usize, left: u32, right: u32) {
        if left == 0 && right == 0 {
            let rel = Relation {
                l: self.l,
                terms: self.slots.clone(),
            };
            (self.visit)(&rel);
            return;
        }
        if left == 0 || right == 0 {
            return;
        }
        let (nl, nr) = (left.count_ones() as u64, right.count_ones() as u64);
        for idx in from..self.kernels.len() {
            let h = self.kernels[idx];
            let s_max = isqrt(self.y / h);
            // Later kernels only have smaller s ranges; with s ≤ 1 each class
            // needs as many left as right positions.
            if s_max <= 1 && nl != nr {
                break;
            }
            for a_set in submasks(left) {
                for b_set in submasks(right) {
                    let (a, b) = (a_set.count_ones() as u64, b_set.count_ones() as u64);
                    if a.max(b) > s_max * a.min(b) {
                        continue;
                    }
                    let (pa, pb) = (mask_positions(a_set), mask_positions(b_set));
                    for m in a.max(b)..=s_max * a.min(b) {
                        let mut ls = Vec::new();
                        let mut rs = Vec::new();
                        compositions(a as usize, m, s_max, &mut ls);
                        compositions(b as usize, m, s_max, &mut rs);
                        for lt in &ls {
                            for (p, &s) in pa.iter().zip(lt) {
                                self.slots[*p] = SqrtInteger { s, h };
                            }
                            for rt in &rs {
                                for (p, &s) in pb.iter().zip(rt) {
                                    self.slots[*p] = SqrtInteger { s, h };
                                }
                                self.rec(idx + 1, left & !a_set, right & !b_set);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Nonempty submasks of `mask` in increasing numeric order.
fn submasks(mask: u32) -> Vec<u32> {
    let mut v = Vec::new();
    let mut s = mask;
    while s != 0 {
        v.push(s);
        s = (s - 1) & mask;
    }
    v.reverse();
    v
}

/// Streams every ordered `k`-tuple with all `n_j ≤ y` satisfying the balanced
/// relation with `l` terms on the left, to `visit`.
///
/// Kernels are processed in ascending order; for each kernel the positions it
/// occupies are chosen, then balanced `s`-tuples are generated. Each tuple is
/// produced exactly once. `max_k` lifts the default cap on `k`.
pub fn visit_relations<F: FnMut(&Relation)>(
    k: usize,
    l: usize,
    y: u64,
    max_k: usize,
    visit: F,
) -> Result<()> {
    check_kl(k, l, max_k.min(31))?;
    if y == 0 {
        return Ok(());
    }
    let kernels = squarefree_up_to(y);
    let left = (1u32 << l) - 1;
    let right = ((1u32 << k) - 1) & !left;
    let mut e = Enumerator {
        kernels: &kernels,
        y,
        l,
        slots: vec![SqrtInteger { s: 0, h: 0 }; k],
        visit,
    };
    e.rec(0, left, right);
    Ok(())
}

/// All relations for `(k, l, y)`, sorted by their coordinate tuples.
pub fn enumerate_relations(k: usize, l: usize, y: u64) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    visit_relations(k, l, y, DEFAULT_MAX_K, |r| out.push(r.clone()))?;
    out.sort_by_cached_key(|r| r.values());
    Ok(out)
}

/// Work estimate `y^k` for [`brute_force_enumerate`].
pub fn brute_force_cost(k: usize, y: u64) -> u128 {
    (y as u128).checked_pow(k as u32).unwrap_or(u128::MAX)
}

/// Oracle: tests every tuple in `[1, y]^k`, in lexicographic order.
pub fn brute_force_enumerate(k: usize, l: usize, y: u64) -> Result<Vec<Relation>> {
    brute_force_enumerate_with_guard(k, l, y, DEFAULT_GUARD)
}

pub fn brute_force_enumerate_with_guard(
    k: usize,
    l: usize,
    y: u64,
    guard: u128,
) -> Result<Vec<Relation>> {
    check_kl(k, l, usize::MAX)?;
    let cost = brute_force_cost(k, y);
    if cost > guard {
        return Err(Error::GuardExceeded { cost, guard });
    }
    if y == 0 {
        return Ok(Vec::new());
    }
    let (_, _, _, kern) = sieve_range(1, y + 1);
    let split: Vec<SqrtInteger> = (1..=y)
        .map(|n| SqrtInteger::with_kernel(n, kern[(n - 1) as usize]))
        .collect();

    let per_first: Vec<Vec<Relation>> = (0..y as usize)
        .into_par_iter()
        .map(|first| {
            let mut acc = vec![0i64; y as usize + 1];
            let mut idx = vec![0usize; k];
            idx[0] = first;
            let mut found = Vec::new();
            loop {
                for (p, &i) in idx.iter().enumerate() {
                    let t = split[i];
                    acc[t.h as usize] += if p < l { t.s as i64 } else { -(t.s as i64) };
                }
                let balanced = idx.iter().all(|&i| acc[split[i].h as usize] == 0);
                for &i in &idx {
                    acc[split[i].h as usize] = 0;
                }
                if balanced {
                    found.push(Relation {
                        l,
                        terms: idx.iter().map(|&i| split[i]).collect(),
                    });
                }
                // odometer over positions 1..k
                let mut p = k - 1;
                loop {
                    if p == 0 {
                        return found;
                    }
                    idx[p] += 1;
                    if idx[p] < y as usize {
                        break;
                    }
                    idx[p] = 0;
                    p -= 1;
                }
            }
        })
        .collect();
    Ok(per_first.into_iter().flatten().collect())
}
