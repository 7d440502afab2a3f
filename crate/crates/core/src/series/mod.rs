//! Truncated square-root relation series and their binomial-cosine
//! combinations.
//!
//! `s_{k;l}(f;y)` sums `Π f(n_j) n_j^{-3/4}` over the balanced tuples with all
//! `n_j ≤ y`. Grouping positions by kernel, each tuple splits into kernel
//! classes that balance independently, so
//!
//! `s_{k;l} = Σ over assignments of positions to kernels Π_h T_h(a_h, b_h)`
//!
//! where `T_h(a, b)` sums over balanced `s`-tuples of one kernel. Kernels are
//! folded in ascending order into a DP over (left slots used, right slots
//! used); the binomials count which positions a kernel takes.

mod coeff;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use nalgebra::{Matrix5, Vector5};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::sieve::isqrt;
use crate::arith::ArithTable;
use crate::error::{Error, Result};
use crate::kind::CoefficientKind;
use crate::sum::NeumaierSum;

pub use coeff::{
    explicit_formula_text, explicit_theorem1, k2_reduction, main_term_coefficient,
    K2Check, K2Reduction, MainTermCoefficient, Theorem,
};

/// Default truncation for displayed constants.
pub const DEFAULT_Y: u64 = 100_000;

/// Number of kernels whose class tables are built in one parallel block.
const BLOCK: usize = 4096;

/// How the truncation tail `s(∞) − s(y)` is extrapolated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailModel {
    /// `s(y') = s∞ − c·y'^{-1/2}` through `y/2` and `y`.
    PowerLaw,
    /// `s(y') = s∞ − y'^{-1/2}(c₀ + c₁L + c₂L² + c₃L³)`, `L = log y'`, through
    /// `y/16, y/8, y/4, y/2, y`. The logarithmic factors absorb the divisor
    /// bound `y^ε`, which is far from negligible at desk-scale `y`.
    LogCubic,
}

impl TailModel {
    /// Smallest `y` for which the model has enough distinct truncations.
    pub fn min_y(self) -> u64 {
        match self {
            TailModel::PowerLaw => 4,
            TailModel::LogCubic => 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesEstimate {
    pub k: usize,
    pub l: usize,
    pub kind: CoefficientKind,
    pub y: u64,
    /// `s_{k;l}(f; y)`
    pub value: f64,
    /// Extrapolated `s_{k;l}(f) − s_{k;l}(f; y)`; `None` when `y` is too
    /// small for the model.
    pub tail_estimate: Option<f64>,
    pub tail_model: TailModel,
    /// Squarefree kernels `h ≤ y` that carry nonzero weight.
    pub kernels: usize,
}

impl SeriesEstimate {
    /// `value + tail_estimate` when a tail is available.
    pub fn extrapolated(&self) -> Option<f64> {
        self.tail_estimate.map(|t| self.value + t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BkTerm {
    pub l: usize,
    pub binomial: u64,
    pub s_value: f64,
    pub cosine: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BkValue {
    pub k: usize,
    pub kind: CoefficientKind,
    pub y: u64,
    pub value: f64,
    pub breakdown: Vec<BkTerm>,
}

/// `cos(πm/4)`, exactly zero when `m ≡ 2 (mod 4)`.
pub fn cos_quarter_pi(m: i64) -> f64 {
    let c = std::f64::consts::FRAC_1_SQRT_2;
    match m.rem_euclid(8) {
        0 => 1.0,
        1 | 7 => c,
        2 | 6 => 0.0,
        3 | 5 => -c,
        _ => -1.0,
    }
}

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `w(s) = f(s²h)(s²h)^{-3/4}` for `s = 1..=⌊√(y/h)⌋`, index 0 unused.
fn class_weights(table: &ArithTable, kind: CoefficientKind, h: u64, y: u64) -> Vec<f64> {
    let s_max = isqrt(y / h);
    let mut w = vec![0.0; s_max as usize + 1];
    for s in 1..=s_max {
        w[s as usize] = kind.scaled_weight(table, s * s * h);
    }
    w
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `T_h(a, b)` for `1 ≤ a, b ≤ m`, flattened row-major; `None` when every
/// weight of the class is zero.
fn class_table(w: &[f64], m: usize) -> Option<Vec<f64>> {
    if w.iter().all(|&x| x == 0.0) {
        return None;
    }
    let mut t = vec![0.0; m * m];
    if w.len() == 2 {
        // One admissible s: only a = b contributes.
        let mut p = 1.0;
        for a in 1..=m {
            p *= w[1] * w[1];
            t[(a - 1) * m + (a - 1)] = p;
        }
        return Some(t);
    }
    let mut powers: Vec<Vec<f64>> = Vec::with_capacity(m);
    powers.push(w.to_vec());
    for a in 1..m {
        let next = convolve(&powers[a - 1], w);
        powers.push(next);
    }
    for a in 0..m {
        for b in a..m {
            let (pa, pb) = (&powers[a], &powers[b]);
            let len = pa.len().min(pb.len());
            let v = neumaier_dot(&pa[..len], &pb[..len]);
            t[a * m + b] = v;
            t[b * m + a] = v;
        }
    }
    Some(t)
}

fn neumaier_dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = NeumaierSum::new();
    for (x, y) in a.iter().zip(b) {
        s.add(x * y);
    }
    s.value()
}

fn check_squarefree(table: &ArithTable, h: u64) -> Result<()> {
    let sf = if h <= table.limit() {
        table.mu(h) != 0
    } else {
        crate::relations::SqrtInteger::from_n(h).s == 1
    };
    if h == 0 || !sf {
        return Err(Error::invalid(format!("kernel {h} is not squarefree")));
    }
    Ok(())
}

/// `T_h(a, b)`: the sum over ordered `(s₁..s_a)`, `(t₁..t_b)` with
/// `Σs = Σt` and every `s²h, t²h ≤ y` of the product of the weights.
pub fn class_sum(
    table: &ArithTable,
    kind: CoefficientKind,
    h: u64,
    a: usize,
    b: usize,
    y: u64,
) -> Result<f64> {
    check_squarefree(table, h)?;
    if a == 0 && b == 0 {
        return Ok(1.0);
    }
    if a == 0 || b == 0 || h > y {
        return Ok(0.0);
    }
    kind.check_range(table, y)?;
    let w = class_weights(table, kind, h, y);
    let m = a.max(b);
    Ok(class_table(&w, m).map_or(0.0, |t| t[(a - 1) * m + (b - 1)]))
}

/// Compensated DP state for one `(k, l)`.
struct Dp {
    l: usize,
    r: usize,
    cells: Vec<NeumaierSum>,
}

impl Dp {
    fn new(k: usize, l: usize) -> Self {
        let r = k - l;
        let mut cells = vec![NeumaierSum::new(); (l + 1) * (r + 1)];
        cells[0] = NeumaierSum::with_value(1.0);
        Dp { l, r, cells }
    }

    fn fold(&mut self, t: &[f64], m: usize) {
        let (l, r) = (self.l, self.r);
        let w = r + 1;
        for i in (0..l).rev() {
            for j in (0..r).rev() {
                let v = self.cells[i * w + j].value();
                if v == 0.0 {
                    continue;
                }
                for a in 1..=l - i {
                    let ca = binomial((l - i) as u64, a as u64) as f64;
                    for b in 1..=r - j {
                        let tv = t[(a - 1) * m + (b - 1)];
                        if tv == 0.0 {
                            continue;
                        }
                        let cb = binomial((r - j) as u64, b as u64) as f64;
                        self.cells[(i + a) * w + (j + b)].add(v * ca * cb * tv);
                    }
                }
            }
        }
    }

    fn value(&self) -> f64 {
        self.cells[self.l * (self.r + 1) + self.r].value()
    }
}

type Key = (CoefficientKind, usize, u64);

/// Computes and caches `s_{k;l}(f; y)` for all `l` of a given `k` at once,
/// since the per-kernel class tables are shared.
pub struct SeriesEngine<'a> {
    table: &'a ArithTable,
    tail_model: TailModel,
    cache: RwLock<HashMap<Key, Arc<Profile>>>,
}

#[derive(Debug)]
struct Profile {
    values: Vec<f64>,
    kernels: usize,
}

impl<'a> SeriesEngine<'a> {
    pub fn new(table: &'a ArithTable) -> Self {
        SeriesEngine {
            table,
            tail_model: TailModel::LogCubic,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_tail_model(mut self, model: TailModel) -> Self {
        self.tail_model = model;
        self
    }

    pub fn table(&self) -> &'a ArithTable {
        self.table
    }

    fn profile(&self, kind: CoefficientKind, k: usize, y: u64) -> Result<Arc<Profile>> {
        if k < 2 {
            return Err(Error::invalid(format!("k must be at least 2, got {k}")));
        }
        if y == 0 {
            return Err(Error::invalid("truncation y must be at least 1"));
        }
        kind.check_range(self.table, y)?;
        if y > self.table.limit() {
            return Err(Error::out_of_range("kernel table", y, self.table.limit()));
        }
        let key = (kind, k, y);
        if let Some(p) = self.cache.read().expect("series cache poisoned").get(&key) {
            return Ok(p.clone());
        }
        let p = Arc::new(self.compute_profile(kind, k, y));
        self.cache
            .write()
            .expect("series cache poisoned")
            .entry(key)
            .or_insert(p.clone());
        Ok(p)
    }

    fn compute_profile(&self, kind: CoefficientKind, k: usize, y: u64) -> Profile {
        let table = self.table;
        let m = k - 1;
        let kernels: Vec<u64> = (1..=y).filter(|&h| table.mu(h) != 0).collect();
        let mut dps: Vec<Dp> = (1..k).map(|l| Dp::new(k, l)).collect();
        let mut used = 0;
        for block in kernels.chunks(BLOCK) {
            let tables: Vec<Option<Vec<f64>>> = block
                .par_iter()
                .map(|&h| class_table(&class_weights(table, kind, h, y), m))
                .collect();
            for t in tables.iter().flatten() {
                used += 1;
                for dp in &mut dps {
                    dp.fold(t, m);
                }
            }
        }
        Profile {
            values: dps.iter().map(Dp::value).collect(),
            kernels: used,
        }
    }

    /// `s_{k;l}(f; y)` without tail extrapolation.
    pub fn value(&self, kind: CoefficientKind, k: usize, l: usize, y: u64) -> Result<f64> {
        check_l(k, l)?;
        Ok(self.profile(kind, k, y)?.values[l - 1])
    }

    pub fn series_skl(
        &self,
        kind: CoefficientKind,
        k: usize,
        l: usize,
        y: u64,
    ) -> Result<SeriesEstimate> {
        check_l(k, l)?;
        let p = self.profile(kind, k, y)?;
        let value = p.values[l - 1];
        let tail_estimate = if y >= self.tail_model.min_y() {
            Some(self.tail(kind, k, l, y, value)?)
        } else {
            None
        };
        Ok(SeriesEstimate {
            k,
            l,
            kind,
            y,
            value,
            tail_estimate,
            tail_model: self.tail_model,
            kernels: p.kernels,
        })
    }

    fn tail(&self, kind: CoefficientKind, k: usize, l: usize, y: u64, at_y: f64) -> Result<f64> {
        match self.tail_model {
            TailModel::PowerLaw => {
                let y2 = y / 2;
                let s2 = self.value(kind, k, l, y2)?;
                let (a, b) = ((y2 as f64).powf(-0.5), (y as f64).powf(-0.5));
                let c = (at_y - s2) / (a - b);
                Ok(c * b)
            }
            TailModel::LogCubic => {
                let ln_y = (y as f64).ln();
                let mut m = Matrix5::zeros();
                let mut rhs = Vector5::zeros();
                for (row, shift) in (0..5).rev().enumerate() {
                    let yi = y >> shift;
                    let s = if shift == 0 { at_y } else { self.value(kind, k, l, yi)? };
                    let (yf, lc) = (yi as f64, (yi as f64).ln() - ln_y);
                    let inv = yf.powf(-0.5);
                    m[(row, 0)] = 1.0;
                    for j in 0..4 {
                        m[(row, j + 1)] = -inv * lc.powi(j as i32);
                    }
                    rhs[row] = s;
                }
                let sol = m
                    .lu()
                    .solve(&rhs)
                    .ok_or_else(|| Error::invalid("tail fit is singular"))?;
                Ok(sol[0] - at_y)
            }
        }
    }

    /// `B_k(f; y) = Σ_l C(k−1, l) s_{k;l}(f; y) cos(π(k−2l)/4)`.
    pub fn bk(&self, kind: CoefficientKind, k: usize, y: u64) -> Result<BkValue> {
        let p = self.profile(kind, k, y)?;
        let breakdown: Vec<BkTerm> = (1..k)
            .map(|l| {
                let binomial = binomial(k as u64 - 1, l as u64);
                let cosine = cos_quarter_pi(k as i64 - 2 * l as i64);
                let s_value = p.values[l - 1];
                let contribution = if cosine == 0.0 {
                    0.0
                } else {
                    binomial as f64 * s_value * cosine
                };
                BkTerm {
                    l,
                    binomial,
                    s_value,
                    cosine,
                    contribution,
                }
            })
            .collect();
        let value = breakdown.iter().map(|t| t.contribution).collect::<NeumaierSum>().value();
        Ok(BkValue {
            k,
            kind,
            y,
            value,
            breakdown,
        })
    }
}

fn check_l(k: usize, l: usize) -> Result<()> {
    if k < 2 || l == 0 || l >= k {
        return Err(Error::invalid(format!("need 1 ≤ l < k, got k={k}, l={l}")));
    }
    Ok(())
}
