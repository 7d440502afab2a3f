//! Main-term coefficients of the power moments.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::SeriesEngine;
use crate::error::{Error, Result};
use crate::kind::CoefficientKind;
use crate::sum::NeumaierSum;

/// Which moment the coefficient belongs to: `Δ` (1), `P` (3), `A` (4) or the
/// mean-square error term `E` of the zeta function (5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    One,
    Three,
    Four,
    Five,
}

impl Theorem {
    pub fn number(self) -> u8 {
        match self {
            Theorem::One => 1,
            Theorem::Three => 3,
            Theorem::Four => 4,
            Theorem::Five => 5,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Theorem::One),
            3 => Ok(Theorem::Three),
            4 => Ok(Theorem::Four),
            5 => Ok(Theorem::Five),
            _ => Err(Error::invalid(format!("theorem must be 1, 3, 4 or 5, got {n}"))),
        }
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let n: u8 = s
            .parse()
            .map_err(|_| Error::invalid(format!("theorem must be 1, 3, 4 or 5, got '{s}'")))?;
        Theorem::from_number(n)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl Serialize for Theorem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MainTermCoefficient {
    pub theorem: Theorem,
    pub k: usize,
    pub kappa: Option<u32>,
    pub kind: CoefficientKind,
    pub y: u64,
    /// `B_k(f; y)`
    pub bk: f64,
    /// Positive denominator the (signed) `B_k` is divided by.
    pub denominator: f64,
    pub value: f64,
    /// Power of `T` the coefficient multiplies.
    pub t_exponent: f64,
    pub formula: String,
}

/// `s_{k;l}` written compactly, e.g. `s52`.
fn s_name(k: usize, l: usize) -> String {
    format!("s{k}{l}")
}

fn pi_pow(k: usize) -> String {
    const SUP: [&str; 10] = ["⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"];
    if k == 1 {
        "π".into()
    } else if k < 10 {
        format!("π{}", SUP[k])
    } else {
        format!("π^{k}")
    }
}

/// Closed combinations of `s_{k;l}(d)` for the divisor problem, `2 ≤ k ≤ 9`.
pub fn explicit_formula_text(k: usize) -> Option<String> {
    let s = |l| s_name(k, l);
    let p = pi_pow(k);
    Some(match k {
        2 => format!("{}/(6{p})", s(1)),
        3 => format!("3·{}/(28{p})", s(1)),
        4 => format!("3·{}/(64{p})", s(2)),
        5 => format!("5·(2·{} − {})/(288{p})", s(2), s(1)),
        6 => format!("(5·{} − 3·{})/(320{p})", s(3), s(1)),
        7 => format!("7·(5·{} − 3·{} − {})/(2816{p})", s(3), s(2), s(1)),
        8 => format!("7·(5·{} − 4·{})/(6144{p})", s(4), s(2)),
        9 => format!(
            "3·(3·{} − 12·{} − 28·{} + 42·{})/(26624{p})",
            s(1),
            s(2),
            s(3),
            s(4)
        ),
        _ => return None,
    })
}

/// Evaluates [`explicit_formula_text`] with `s[l − 1] = s_{k;l}`.
pub fn explicit_theorem1(k: usize, s: &[f64]) -> Option<f64> {
    if s.len() + 1 != k {
        return None;
    }
    let v = |l: usize| s[l - 1];
    let pk = PI.powi(k as i32);
    Some(match k {
        2 => v(1) / (6.0 * pk),
        3 => 3.0 * v(1) / (28.0 * pk),
        4 => 3.0 * v(2) / (64.0 * pk),
        5 => 5.0 * (2.0 * v(2) - v(1)) / (288.0 * pk),
        6 => (5.0 * v(3) - 3.0 * v(1)) / (320.0 * pk),
        7 => 7.0 * (5.0 * v(3) - 3.0 * v(2) - v(1)) / (2816.0 * pk),
        8 => 7.0 * (5.0 * v(4) - 4.0 * v(2)) / (6144.0 * pk),
        9 => {
            3.0 * (3.0 * v(1) - 12.0 * v(2) - 28.0 * v(3) + 42.0 * v(4)) / (26624.0 * pk)
        }
        _ => return None,
    })
}

/// The coefficient of `T^{1+k/4}` (or `T^{1+k(2κ−1)/4}`) in `∫₁ᵀ F^k`.
pub fn main_term_coefficient(
    engine: &SeriesEngine<'_>,
    theorem: Theorem,
    k: usize,
    kappa: Option<u32>,
    y: u64,
) -> Result<MainTermCoefficient> {
    if k < 2 {
        return Err(Error::invalid(format!("k must be at least 2, got {k}")));
    }
    let kf = k as f64;
    let (kind, sign, denominator, t_exponent, formula) = match (theorem, kappa) {
        (Theorem::Four, None) => {
            return Err(Error::invalid("theorem 4 needs the weight kappa"));
        }
        (Theorem::Four, Some(kappa)) => {
            let e = kf * (2.0 * kappa as f64 - 1.0) / 4.0;
            (
                CoefficientKind::CuspNormalized(kappa),
                1.0,
                (1.0 + e) * 2f64.powf(1.5 * kf - 1.0) * PI.powi(k as i32),
                1.0 + e,
                format!(
                    "B{k}(ã)/((1+{k}·{}/4)·2^({}/2)·{})",
                    2 * kappa - 1,
                    3 * k - 2,
                    pi_pow(k)
                ),
            )
        }
        (_, Some(_)) => {
            return Err(Error::invalid("kappa only applies to theorem 4"));
        }
        (Theorem::One, None) => (
            CoefficientKind::Divisor,
            1.0,
            (1.0 + kf / 4.0) * 2f64.powf(1.5 * kf - 1.0) * PI.powi(k as i32),
            1.0 + kf / 4.0,
            explicit_formula_text(k).unwrap_or_else(|| {
                format!("B{k}(d)/((1+{k}/4)·2^({}/2)·{})", 3 * k - 2, pi_pow(k))
            }),
        ),
        (Theorem::Three, None) => (
            CoefficientKind::TwoSquares,
            if k % 2 == 0 { 1.0 } else { -1.0 },
            (1.0 + kf / 4.0) * 2f64.powi(k as i32 - 1) * PI.powi(k as i32),
            1.0 + kf / 4.0,
            format!(
                "{}B{k}(r)/((1+{k}/4)·2^{}·{})",
                if k % 2 == 0 { "" } else { "−" },
                k - 1,
                pi_pow(k)
            ),
        ),
        (Theorem::Five, None) => (
            CoefficientKind::Divisor,
            1.0,
            (1.0 + kf / 4.0) * 2f64.powf(0.75 * kf - 1.0) * PI.powf(kf / 4.0),
            1.0 + kf / 4.0,
            format!("B{k}(d)/((1+{k}/4)·2^({}/4)·π^({k}/4))", 3 * k - 4),
        ),
    };
    let bk = engine.bk(kind, k, y)?.value;
    Ok(MainTermCoefficient {
        theorem,
        k,
        kappa,
        kind,
        y,
        bk,
        denominator,
        value: sign * bk / denominator,
        t_exponent,
        formula,
    })
}

/// The four mean-square constants written as direct sums over `n ≤ y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum K2Reduction {
    /// `Σ d²(n) n^{-3/2} / (6π²)`
    Delta,
    /// `Σ r²(n) n^{-3/2} / (3π²)`
    P,
    /// `Σ a²(n) n^{-κ-1/2} / ((4κ+2)π²)`
    A(u32),
    /// `2 Σ d²(n) n^{-3/2} / (3√(2π))`
    E,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct K2Check {
    pub reduction: K2Reduction,
    /// From the generic coefficient at `k = 2`.
    pub generic: f64,
    /// From the direct sum.
    pub direct: f64,
    pub relative_difference: f64,
}

/// Evaluates one mean-square constant both through `B₂` and as a direct sum.
pub fn k2_reduction(engine: &SeriesEngine<'_>, which: K2Reduction, y: u64) -> Result<K2Check> {
    let table = engine.table();
    let (theorem, kappa, kind) = match which {
        K2Reduction::Delta => (Theorem::One, None, CoefficientKind::Divisor),
        K2Reduction::P => (Theorem::Three, None, CoefficientKind::TwoSquares),
        K2Reduction::A(kappa) => (Theorem::Four, Some(kappa), CoefficientKind::CuspNormalized(kappa)),
        K2Reduction::E => (Theorem::Five, None, CoefficientKind::Divisor),
    };
    let generic = main_term_coefficient(engine, theorem, 2, kappa, y)?.value;
    kind.check_range(table, y)?;
    let mut sum = NeumaierSum::new();
    for n in 1..=y {
        let f = match which {
            K2Reduction::A(kappa) => {
                // a(n)² n^{-κ-1/2}, from the raw coefficients
                let a = table.cusp_coefficient(kappa, n)?;
                sum.add(a * a * (n as f64).powf(-(kappa as f64) - 0.5));
                continue;
            }
            _ => kind.weight(table, n),
        };
        sum.add(f * f * (n as f64).powf(-1.5));
    }
    let s = sum.value();
    let direct = match which {
        K2Reduction::Delta => s / (6.0 * PI * PI),
        K2Reduction::P => s / (3.0 * PI * PI),
        K2Reduction::A(kappa) => s / ((4.0 * kappa as f64 + 2.0) * PI * PI),
        K2Reduction::E => 2.0 * s / (3.0 * (2.0 * PI).sqrt()),
    };
    Ok(K2Check {
        reduction: which,
        generic,
        direct,
        relative_difference: (generic - direct).abs() / direct.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ArithTable;

    #[test]
    fn explicit_forms_match_generic() {
        let t = ArithTable::build(400, 0).unwrap();
        let e = SeriesEngine::new(&t);
        for k in 2..=9 {
            let c = main_term_coefficient(&e, Theorem::One, k, None, 60).unwrap();
            let s: Vec<f64> = (1..k)
                .map(|l| e.value(CoefficientKind::Divisor, k, l, 60).unwrap())
                .collect();
            let x = explicit_theorem1(k, &s).unwrap();
            assert!((c.value - x).abs() <= 1e-12 * x.abs(), "k={k}: {} vs {x}", c.value);
        }
        assert!(explicit_theorem1(10, &[0.0; 9]).is_none());
    }

    #[test]
    fn texts() {
        assert_eq!(explicit_formula_text(4).unwrap(), "3·s42/(64π⁴)");
        assert_eq!(
            explicit_formula_text(9).unwrap(),
            "3·(3·s91 − 12·s92 − 28·s93 + 42·s94)/(26624π⁹)"
        );
    }

    #[test]
    fn kappa_rules() {
        let t = ArithTable::build(100, 50).unwrap();
        let e = SeriesEngine::new(&t);
        assert!(main_term_coefficient(&e, Theorem::Four, 3, None, 10).is_err());
        assert!(main_term_coefficient(&e, Theorem::One, 3, Some(12), 10).is_err());
        let c = main_term_coefficient(&e, Theorem::Four, 3, Some(12), 10).unwrap();
        assert_eq!(c.t_exponent, 1.0 + 3.0 * 23.0 / 4.0);
        assert!("2".parse::<Theorem>().is_err());
    }

    #[test]
    fn k2_reductions_agree() {
        let t = ArithTable::build(2000, 2000).unwrap();
        let e = SeriesEngine::new(&t);
        for w in [K2Reduction::Delta, K2Reduction::P, K2Reduction::A(12), K2Reduction::E] {
            let c = k2_reduction(&e, w, 2000).unwrap();
            assert!(c.relative_difference < 1e-12, "{c:?}");
        }
    }
}
