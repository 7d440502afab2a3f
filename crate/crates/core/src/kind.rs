//! Selectors for the weight `f(n)` and the shape of each truncated Voronoi
//! expansion.
//!
//! All four expansions have the form
//! `amplitude · x^power · Σ_{n ≤ y} f(n) n^{-3/4} cos(4π√(nx) + phase)`, so the
//! kinds differ only by data.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::arith::ArithTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientKind {
    /// `f = d`
    Divisor,
    /// `f = r`
    TwoSquares,
    /// `f(n) = a(n) n^{-(κ-1)/2}` for a cusp form of weight `κ`
    CuspNormalized(u32),
    /// `f(n) = (−1)^n d(n)`
    AlternatingDivisor,
}

impl CoefficientKind {
    pub fn phase(self) -> f64 {
        match self {
            CoefficientKind::TwoSquares => FRAC_PI_4,
            _ => -FRAC_PI_4,
        }
    }

    pub fn amplitude(self) -> f64 {
        match self {
            CoefficientKind::TwoSquares => -1.0 / PI,
            _ => 1.0 / (SQRT_2 * PI),
        }
    }

    /// Power of `x` in front of the cosine sum.
    pub fn x_power(self) -> f64 {
        match self {
            CoefficientKind::CuspNormalized(kappa) => kappa as f64 / 2.0 - 0.25,
            _ => 0.25,
        }
    }

    /// Largest `n` for which `f(n)` can be evaluated from `table`.
    pub fn coefficient_limit(self, table: &ArithTable) -> Result<u64> {
        match self {
            CoefficientKind::CuspNormalized(kappa) => table.cusp_limit(kappa),
            _ => Ok(table.limit()),
        }
    }

    pub fn check_range(self, table: &ArithTable, n: u64) -> Result<()> {
        let lim = self.coefficient_limit(table)?;
        if n > lim {
            return Err(Error::out_of_range(
                format!("coefficients of kind {self}"),
                n,
                lim,
            ));
        }
        Ok(())
    }

    /// `f(n)`. The caller guarantees `n` is in range.
    #[inline]
    pub fn weight(self, table: &ArithTable, n: u64) -> f64 {
        match self {
            CoefficientKind::Divisor => table.d(n) as f64,
            CoefficientKind::TwoSquares => table.r(n) as f64,
            CoefficientKind::AlternatingDivisor => {
                if n % 2 == 0 {
                    table.d(n) as f64
                } else {
                    -(table.d(n) as f64)
                }
            }
            CoefficientKind::CuspNormalized(kappa) => table
                .cusp_normalized(kappa, n)
                .expect("cusp coefficient in range"),
        }
    }

    /// `f(n) n^{-3/4}`
    #[inline]
    pub fn scaled_weight(self, table: &ArithTable, n: u64) -> f64 {
        self.weight(table, n) * (n as f64).powf(-0.75)
    }

    pub fn short_name(self) -> String {
        match self {
            CoefficientKind::Divisor => "d".into(),
            CoefficientKind::TwoSquares => "r".into(),
            CoefficientKind::CuspNormalized(12) => "a".into(),
            CoefficientKind::CuspNormalized(k) => format!("a{k}"),
            CoefficientKind::AlternatingDivisor => "dstar".into(),
        }
    }
}

impl fmt::Display for CoefficientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.short_name())
    }
}

impl Serialize for CoefficientKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.short_name())
    }
}

impl FromStr for CoefficientKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d" | "divisor" => Ok(CoefficientKind::Divisor),
            "r" | "two-squares" => Ok(CoefficientKind::TwoSquares),
            "a" | "cusp" => Ok(CoefficientKind::CuspNormalized(12)),
            "dstar" | "alternating" => Ok(CoefficientKind::AlternatingDivisor),
            other => match other.strip_prefix('a').map(str::parse::<u32>) {
                Some(Ok(k)) => Ok(CoefficientKind::CuspNormalized(k)),
                _ => Err(Error::invalid(format!("unknown coefficient kind '{s}'"))),
            },
        }
    }
}

/// The four exactly computable error terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorTermKind {
    /// Dirichlet divisor problem
    Delta,
    /// Gauss circle problem
    P,
    /// Coefficient sums of the weight-12 cusp form (Ramanujan `τ`)
    A,
    /// `½ Σ_{n ≤ 4x} (−1)^n d(n) − x(log x + 2γ − 1)`
    DeltaStar,
}

impl ErrorTermKind {
    pub fn coefficient_kind(self) -> CoefficientKind {
        match self {
            ErrorTermKind::Delta => CoefficientKind::Divisor,
            ErrorTermKind::P => CoefficientKind::TwoSquares,
            ErrorTermKind::A => CoefficientKind::CuspNormalized(12),
            ErrorTermKind::DeltaStar => CoefficientKind::AlternatingDivisor,
        }
    }

    /// Spacing of the jump points of the step part.
    pub fn step(self) -> f64 {
        match self {
            ErrorTermKind::DeltaStar => 0.25,
            _ => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorTermKind::Delta => "delta",
            ErrorTermKind::P => "p",
            ErrorTermKind::A => "a",
            ErrorTermKind::DeltaStar => "delta-star",
        }
    }
}

impl fmt::Display for ErrorTermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for ErrorTermKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for ErrorTermKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(ErrorTermKind::Delta),
            "p" => Ok(ErrorTermKind::P),
            "a" => Ok(ErrorTermKind::A),
            "delta-star" | "dstar" => Ok(ErrorTermKind::DeltaStar),
            _ => Err(Error::invalid(format!("unknown error term '{s}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_pair_up() {
        for k in [
            ErrorTermKind::Delta,
            ErrorTermKind::P,
            ErrorTermKind::A,
            ErrorTermKind::DeltaStar,
        ] {
            let back: ErrorTermKind = k.name().parse().unwrap();
            assert_eq!(back, k);
        }
        assert_eq!(ErrorTermKind::A.coefficient_kind(), CoefficientKind::CuspNormalized(12));
        assert_eq!(CoefficientKind::CuspNormalized(12).x_power(), 5.75);
        assert_eq!("a16".parse::<CoefficientKind>().unwrap(), CoefficientKind::CuspNormalized(16));
        assert!("q".parse::<CoefficientKind>().is_err());
    }
}
