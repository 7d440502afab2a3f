//! Frozen empirical constants for bounds whose implied constants are not
//! explicit.
//!
//! Each value was measured once by `examples/calibrate.rs` (ChaCha8 seed
//! `0xca1b`) and rounded up; the measured value is quoted next to it. They
//! are never recomputed at test time.

/// `|Δ(x) − R₁(x, x)| ≤ C·x^{0.05}` for `x ∈ [10³, 10⁵]`. Measured maximum
/// over 1000 random points: 19.67. The error concentrates next to integers
/// with many divisors, where the truncated series cannot follow the jump.
pub const VORONOI_ENVELOPE: f64 = 25.0;
pub const VORONOI_EXPONENT: f64 = 0.05;

/// `|Δ*(x) − R₁*(x, 2000)|` for `x ∈ [400, 600]`. Measured maximum: 8.82.
pub const DELTA_STAR_ENVELOPE: f64 = 12.0;

/// `∫_T^{2T} R₂²(x, y) dx ≤ C·T^{3/2}log³T/√y`, calibrated at
/// `(T, y) = (10⁴, 10)` where the ratio is 0.003655.
pub const REMAINDER_MEAN_SQUARE: f64 = 0.004;

/// Solution count `≤ C·(Δ E^{-1/2} ΠN_j + E^{-1} ΠN_j)`. Measured maximum
/// over 200 random configurations: 3.52.
pub const COUNT_BOUND: f64 = 5.0;

/// Required lower bound on `g(N)N^e / (g(N/2)(N/2)^e)` for the minimal gap
/// `g` and `e = 2^{k−2} − 1/2`.
pub const GAP_SCALING_FACTOR: f64 = 0.5;

/// `|∫₁ᵀ Δ − T/4| ≤ C·T^{3/4}`. Measured `|·|/T^{3/4}` at `T = 10⁴, 10⁵, 10⁶`:
/// 0.07, 0.06, 0.04.
pub const FIRST_MOMENT_ENVELOPE: f64 = 50.0;
