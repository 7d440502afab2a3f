//! Exact error terms and their truncated Voronoi expansions.

use std::f64::consts::PI;

use crate::arith::{constants, ArithTable};
use crate::error::{Error, Result};
use crate::kind::{CoefficientKind, ErrorTermKind};
use crate::sum::NeumaierSum;

/// Smooth main term subtracted from the cumulative sum.
#[inline]
pub fn main_term(kind: ErrorTermKind, x: f64) -> f64 {
    let g = constants().gamma;
    match kind {
        ErrorTermKind::Delta => x * x.ln() + (2.0 * g - 1.0) * x,
        ErrorTermKind::P => PI * x,
        ErrorTermKind::A => 0.0,
        ErrorTermKind::DeltaStar => x * (x.ln() + 2.0 * g - 1.0),
    }
}

/// Index of the step containing `x`: `⌊x⌋`, or `⌊4x⌋` for `Δ*`.
#[inline]
pub fn step_index(kind: ErrorTermKind, x: f64) -> u64 {
    let v = match kind {
        ErrorTermKind::DeltaStar => 4.0 * x,
        _ => x,
    };
    if v <= 0.0 {
        0
    } else {
        v.floor() as u64
    }
}

/// Largest step index the table can serve for `kind`.
pub fn max_step_index(table: &ArithTable, kind: ErrorTermKind) -> u64 {
    match kind {
        ErrorTermKind::A => table.tau_limit(),
        _ => table.limit(),
    }
}

/// Largest `x` at which `error_term` can be evaluated.
pub fn max_x(table: &ArithTable, kind: ErrorTermKind) -> f64 {
    let m = max_step_index(table, kind) as f64;
    match kind {
        ErrorTermKind::DeltaStar => m / 4.0,
        _ => m,
    }
}

pub(crate) fn check_x(table: &ArithTable, kind: ErrorTermKind, x: f64) -> Result<u64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::invalid(format!("x must be positive and finite, got {x}")));
    }
    let idx = step_index(kind, x);
    let max = max_step_index(table, kind);
    if idx > max {
        let what = match kind {
            ErrorTermKind::A => "tau table (raise --tau-limit)",
            ErrorTermKind::DeltaStar => "arithmetic table at 4x (raise --limit)",
            _ => "arithmetic table (raise --limit)",
        };
        return Err(Error::out_of_range(what, idx, max));
    }
    Ok(idx)
}

/// The cumulative sum at step `idx`, i.e. the constant value of the step
/// part on `[idx, idx+1)` (or `[idx/4, (idx+1)/4)` for `Δ*`).
#[inline]
pub fn step_value(table: &ArithTable, kind: ErrorTermKind, idx: u64) -> f64 {
    let c = table.cumulative();
    let i = idx as usize;
    match kind {
        ErrorTermKind::Delta => c.d[i] as f64,
        ErrorTermKind::P => c.r[i] as f64,
        ErrorTermKind::A => c.a[i] as f64,
        ErrorTermKind::DeltaStar => 0.5 * c.alt[i] as f64,
    }
}

/// `Δ(x)`, `P(x)`, `A(x)` or `Δ*(x)` evaluated exactly from the tables.
pub fn error_term(table: &ArithTable, kind: ErrorTermKind, x: f64) -> Result<f64> {
    let idx = check_x(table, kind, x)?;
    Ok(step_value(table, kind, idx) - main_term(kind, x))
}

/// `Δ*(x) − (−Δ(x) + 2Δ(2x) − ½Δ(4x))`, which vanishes identically.
pub fn delta_star_identity_check(table: &ArithTable, x: f64) -> Result<f64> {
    let ds = error_term(table, ErrorTermKind::DeltaStar, x)?;
    let d1 = error_term(table, ErrorTermKind::Delta, x)?;
    let d2 = error_term(table, ErrorTermKind::Delta, 2.0 * x)?;
    let d4 = error_term(table, ErrorTermKind::Delta, 4.0 * x)?;
    Ok(ds - (-d1 + 2.0 * d2 - 0.5 * d4))
}

/// A truncated Voronoi cosine sum
/// `amplitude · x^power · Σ_{n ≤ y} f(n) n^{-3/4} cos(4π√(nx) + phase)`
/// with its coefficients precomputed.
#[derive(Debug, Clone)]
pub struct TruncatedExpansion {
    kind: CoefficientKind,
    y: f64,
    /// `(4π√n, f(n) n^{-3/4})` for the nonzero terms, in ascending `n`.
    terms: Vec<(f64, f64)>,
}

impl TruncatedExpansion {
    pub fn new(table: &ArithTable, kind: CoefficientKind, y: f64) -> Result<Self> {
        if !(y >= 0.0) || !y.is_finite() {
            return Err(Error::invalid(format!("truncation y must be finite and ≥ 0, got {y}")));
        }
        let ny = y.floor() as u64;
        if ny >= 1 {
            kind.check_range(table, ny)?;
        }
        let terms = (1..=ny)
            .filter_map(|n| {
                let c = kind.scaled_weight(table, n);
                (c != 0.0).then(|| (4.0 * PI * (n as f64).sqrt(), c))
            })
            .collect();
        Ok(TruncatedExpansion { kind, y, terms })
    }

    pub fn kind(&self) -> CoefficientKind {
        self.kind
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `R₁(x, y)`.
    pub fn eval(&self, x: f64) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        let sx = x.sqrt();
        let phase = self.kind.phase();
        let mut s = NeumaierSum::new();
        for &(w, c) in &self.terms {
            s.add(c * (w * sx + phase).cos());
        }
        self.kind.amplitude() * x.powf(self.kind.x_power()) * s.value()
    }
}

/// `R₁(x, y)` for a single point. Build a [`TruncatedExpansion`] when
/// evaluating many points.
pub fn voronoi_truncated(
    table: &ArithTable,
    kind: CoefficientKind,
    x: f64,
    y: f64,
) -> Result<f64> {
    Ok(TruncatedExpansion::new(table, kind, y)?.eval(x))
}

/// `R₂(x, y) = Δ(x) − R₁(x, y)` for the divisor problem.
pub fn remainder_r2(table: &ArithTable, x: f64, y: f64) -> Result<f64> {
    let delta = error_term(table, ErrorTermKind::Delta, x)?;
    Ok(delta - voronoi_truncated(table, CoefficientKind::Divisor, x, y)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> ArithTable {
        ArithTable::build(5000, 100).unwrap()
    }

    #[test]
    fn small_values() {
        let t = table();
        let g = 0.5772156649015329;
        let want = 3.0 - 2.0 * 2f64.ln() - 2.0 * (2.0 * g - 1.0);
        assert!((error_term(&t, ErrorTermKind::Delta, 2.0).unwrap() - want).abs() < 1e-12);
        assert!((want - 1.30484).abs() < 1e-5);
        let p = error_term(&t, ErrorTermKind::P, 1.0).unwrap();
        assert!((p - (4.0 - PI)).abs() < 1e-14);
        assert_eq!(error_term(&t, ErrorTermKind::A, 1.0).unwrap(), 1.0);
        // A(3) = 1 − 24 + 252
        assert_eq!(error_term(&t, ErrorTermKind::A, 3.5).unwrap(), 229.0);
    }

    #[test]
    fn delta_star_by_hand() {
        let t = table();
        // ½(d(2) − d(1) − d(3) + d(4)) at x = 1: ½(2 − 1 − 2 + 3) = 1
        let g = constants().gamma;
        let v = error_term(&t, ErrorTermKind::DeltaStar, 1.0).unwrap();
        assert!((v - (1.0 - (2.0 * g - 1.0))).abs() < 1e-14);
    }

    #[test]
    fn identity_holds() {
        let t = table();
        for x in [1.0, 10.0, 1000.5, 1249.9, 0.3] {
            let r = delta_star_identity_check(&t, x).unwrap();
            let ds = error_term(&t, ErrorTermKind::DeltaStar, x).unwrap();
            assert!(r.abs() <= 1e-9 * (1.0 + ds.abs()), "x={x} residual {r}");
        }
    }

    #[test]
    fn range_errors() {
        let t = table();
        assert!(matches!(
            error_term(&t, ErrorTermKind::Delta, 5001.0),
            Err(Error::OutOfRange { needed: 5001, available: 5000, .. })
        ));
        assert!(matches!(
            error_term(&t, ErrorTermKind::DeltaStar, 1250.5),
            Err(Error::OutOfRange { needed: 5002, .. })
        ));
        assert!(error_term(&t, ErrorTermKind::A, 101.0).is_err());
        assert!(voronoi_truncated(&t, CoefficientKind::Divisor, 10.0, 5001.0).is_err());
        assert!(error_term(&t, ErrorTermKind::Delta, -1.0).is_err());
    }

    #[test]
    fn empty_expansion() {
        let t = table();
        assert_eq!(voronoi_truncated(&t, CoefficientKind::Divisor, 123.4, 0.5).unwrap(), 0.0);
        let d = error_term(&t, ErrorTermKind::Delta, 77.7).unwrap();
        assert_eq!(remainder_r2(&t, 77.7, 0.5).unwrap(), d);
    }

    #[test]
    fn single_term_by_hand() {
        let t = table();
        let x: f64 = 3.3;
        let v = voronoi_truncated(&t, CoefficientKind::TwoSquares, x, 1.0).unwrap();
        let want = -1.0 / PI * x.powf(0.25) * 4.0 * (4.0 * PI * x.sqrt() + PI / 4.0).cos();
        assert!((v - want).abs() < 1e-13);
    }

    #[test]
    fn jumps_are_divisor_counts() {
        let t = table();
        for n in [2u64, 12, 360, 4999] {
            let x = n as f64;
            let right = error_term(&t, ErrorTermKind::Delta, x).unwrap();
            let left = error_term(&t, ErrorTermKind::Delta, x - 1e-9).unwrap();
            assert!((right - left - t.d(n) as f64).abs() < 1e-4);
        }
    }
}
