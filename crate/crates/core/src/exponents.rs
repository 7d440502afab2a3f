//! Exact bookkeeping of the error-term exponents `δ₁`, `δ₂`.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

/// Values of `A₀` for which the moment bound `∫|F|^{A₀} ≪ T^{1+A₀/4+ε}` is
/// known for `Δ`/`P` (`184/19`), `E` (`576/61`) and `A` (`8`).
pub const A0_DIVISOR: (i128, i128) = (184, 19);
pub const A0_ZETA: (i128, i128) = (576, 61);
pub const A0_CUSP: (i128, i128) = (8, 1);

/// A rational serialized as `"p/q"` (or `"p"` for integers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Exact(pub Q);

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Exact {
    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentBook {
    pub k: u32,
    pub a0: Exact,
    pub k0: u32,
    /// `b(k) = 2^{k−2} + (k−6)/4`
    pub b_k: Exact,
    /// `b(K₀)`
    pub b_k0: Exact,
    pub sigma: Exact,
    pub delta1: Exact,
    pub delta2: Exact,
}

/// `b(k) = 2^{k−2} + (k−6)/4`.
pub fn b(k: u32) -> Q {
    Q::from_integer(1i128 << (k - 2)) + Q::new(k as i128 - 6, 4)
}

/// Parses `p/q`, an integer or a finite decimal exactly.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::invalid(format!("not a rational number: '{s}'"));
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Q::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.len() > 30 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let ip: i128 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10i128.pow(frac.len() as u32);
        let fp: i128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let v = Q::from_integer(ip.abs()) + Q::new(fp, den);
        return Ok(if neg { -v } else { v });
    }
    Ok(Q::from_integer(t.parse().map_err(|_| bad())?))
}

/// `K₀`, `b`, `σ(k, A₀)`, `δ₁` and `δ₂` for `3 ≤ k < A₀`, `A₀ > 2`.
pub fn exponent_book(k: u32, a0: Q) -> Result<ExponentBook> {
    let two = Q::from_integer(2);
    if a0 <= two {
        return Err(Error::invalid(format!("A0 must exceed 2, got {}", Exact(a0))));
    }
    if k < 3 {
        return Err(Error::invalid(format!("k must be at least 3, got {k}")));
    }
    let kq = Q::from_integer(k as i128);
    if kq >= a0 {
        return Err(Error::invalid(format!("k = {k} must be below A0 = {}", Exact(a0))));
    }
    // k < A₀ and K₀ are small, so 2^{K₀} stays far inside i128.
    let ceil = a0.ceil().to_integer();
    let k0 = if ceil % 2 == 0 { ceil } else { ceil + 1 };
    let k0 = u32::try_from(k0).map_err(|_| Error::invalid("A0 too large"))?;
    if k0 > 100 {
        return Err(Error::invalid("A0 too large for exact bookkeeping"));
    }
    let sigma = if kq - Q::one() < a0 / two {
        Q::new(1, 4)
    } else {
        (a0 - kq) / (two * (a0 - two))
    };
    debug_assert!(sigma.is_positive() && !sigma.is_zero());
    let (b_k, b_k0) = (b(k), b(k0));
    Ok(ExponentBook {
        k,
        a0: Exact(a0),
        k0,
        b_k: Exact(b_k),
        b_k0: Exact(b_k0),
        sigma: Exact(sigma),
        delta1: Exact(sigma / (two * b_k0)),
        delta2: Exact(sigma / (two * b_k + two * sigma)),
    })
}
