//! `γ`, `ζ(3/2)` and `ζ(3)` by Euler–Maclaurin summation.

use std::sync::OnceLock;

use serde::Serialize;

use crate::sum::NeumaierSum;

/// `B_{2j}` for `j = 1..=10`.
const BERNOULLI_EVEN: [(f64, f64); 10] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
];

/// A computed constant together with a bound on its truncation error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
}

fn bernoulli(j: usize) -> f64 {
    let (p, q) = BERNOULLI_EVEN[j - 1];
    p / q
}

/// `ζ(s)` for real `s > 1`: the first `n - 1` terms summed directly, the rest
/// by Euler–Maclaurin with `terms` Bernoulli corrections. The error bound is
/// the magnitude of the first omitted correction.
pub fn zeta_em(s: f64, n: u64, terms: usize) -> Estimate {
    assert!(s > 1.0 && n >= 2 && (1..BERNOULLI_EVEN.len()).contains(&terms));
    let mut acc = NeumaierSum::new();
    for m in (1..n).rev() {
        acc.add((m as f64).powf(-s));
    }
    let nf = n as f64;
    acc.add(nf.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * nf.powf(-s));

    // B_{2j}/(2j)! · s(s+1)…(s+2j-2) · N^{-s-2j+1}
    let correction = |j: usize| -> f64 {
        let mut rising = 1.0;
        for i in 0..(2 * j - 1) {
            rising *= s + i as f64;
        }
        let mut fact = 1.0;
        for i in 1..=(2 * j) {
            fact *= i as f64;
        }
        bernoulli(j) / fact * rising * nf.powf(-s - 2.0 * j as f64 + 1.0)
    };
    for j in 1..=terms {
        acc.add(correction(j));
    }
    Estimate {
        value: acc.value(),
        error_bound: correction(terms + 1).abs(),
    }
}

/// `γ = H_N − ln N − 1/(2N) + Σ_j B_{2j}/(2j N^{2j})`.
pub fn euler_gamma_em(n: u64, terms: usize) -> Estimate {
    assert!(n >= 2 && (1..BERNOULLI_EVEN.len()).contains(&terms));
    let nf = n as f64;
    let mut acc = NeumaierSum::new();
    for m in (1..=n).rev() {
        acc.add(1.0 / m as f64);
    }
    acc.add(-nf.ln());
    acc.add(-0.5 / nf);
    let correction = |j: usize| bernoulli(j) / (2.0 * j as f64 * nf.powi(2 * j as i32));
    for j in 1..=terms {
        acc.add(correction(j));
    }
    Estimate {
        value: acc.value(),
        error_bound: correction(terms + 1).abs(),
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Constants {
    pub gamma: f64,
    pub zeta_3_2: f64,
    pub zeta_3: f64,
    pub pi: f64,
}

impl Constants {
    /// `ζ⁴(3/2)/ζ(3) = Σ d²(n) n^{-3/2}`.
    pub fn divisor_square_series(&self) -> f64 {
        self.zeta_3_2.powi(4) / self.zeta_3
    }

    /// `ζ⁴(3/2)/(6π²ζ(3))`, the mean-square constant of `Δ`.
    pub fn delta_mean_square(&self) -> f64 {
        self.divisor_square_series() / (6.0 * self.pi * self.pi)
    }

    /// `2ζ⁴(3/2)/(3ζ(3)√(2π))`, the mean-square constant of `E(t)`.
    pub fn e_mean_square(&self) -> f64 {
        2.0 * self.divisor_square_series() / (3.0 * (2.0 * self.pi).sqrt())
    }
}

pub fn constants() -> &'static Constants {
    static CONSTANTS: OnceLock<Constants> = OnceLock::new();
    CONSTANTS.get_or_init(|| {
        let gamma = euler_gamma_em(20, 8);
        let z32 = zeta_em(1.5, 20, 8);
        let z3 = zeta_em(3.0, 20, 8);
        debug_assert!(gamma.error_bound < 1e-14);
        debug_assert!(z32.error_bound < 1e-14 && z3.error_bound < 1e-14);
        Constants {
            gamma: gamma.value,
            zeta_3_2: z32.value,
            zeta_3: z3.value,
            pi: std::f64::consts::PI,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_bounds_are_tiny() {
        assert!(euler_gamma_em(20, 8).error_bound < 1e-14);
        assert!(zeta_em(1.5, 20, 8).error_bound < 1e-14);
    }

    #[test]
    fn different_cutoffs_agree() {
        let a = zeta_em(1.5, 20, 8).value;
        let b = zeta_em(1.5, 50, 4).value;
        assert!((a - b).abs() < 1e-13, "{a} {b}");
        let g1 = euler_gamma_em(20, 8).value;
        let g2 = euler_gamma_em(200, 3).value;
        assert!((g1 - g2).abs() < 1e-13);
    }
}
