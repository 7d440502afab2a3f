//! Named batteries of invariant checks, run by `vmoments verify`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{constants, ArithTable};
use crate::calibration as cal;
use crate::error::{Error, Result};
use crate::error_terms::{error_term, TruncatedExpansion};
use crate::kind::{CoefficientKind, ErrorTermKind};
use crate::moment::{self, integrate_moment, integrate_truncated_moment};
use crate::quad::{GaussLegendre, QuadratureSpec};
use crate::relations::{self, SignPattern};
use crate::series::{self, K2Reduction, SeriesEngine, Theorem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Identities,
    Parity,
    Gap,
    Count,
    Truncation,
    MeanSquare,
    /// Closed form and bound of `∫ cos(A√t + B) dt`.
    Oscillatory,
    Tails,
    Moments,
}

pub const ALL_SUITES: [Suite; 9] = [
    Suite::Identities,
    Suite::Parity,
    Suite::Gap,
    Suite::Count,
    Suite::Truncation,
    Suite::MeanSquare,
    Suite::Oscillatory,
    Suite::Tails,
    Suite::Moments,
];

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Parity => "parity",
            Suite::Gap => "gap",
            Suite::Count => "count",
            Suite::Truncation => "truncation",
            Suite::MeanSquare => "meansquare",
            Suite::Oscillatory => "oscillatory",
            Suite::Tails => "tails",
            Suite::Moments => "moments",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "lemma23" {
            return Ok(Suite::Oscillatory);
        }
        ALL_SUITES
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// Truncation for the coefficient identities and positivity.
    pub y: u64,
    /// Upper limit of the moment integrals.
    pub moment_t: f64,
    /// Truncation for predicted moment coefficients of order ≥ 3.
    pub moment_y: u64,
    pub seed: u64,
    pub quadrature: QuadratureSpec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            y: 10_000,
            moment_t: 1e6,
            moment_y: series::DEFAULT_Y,
            seed: 0x5eed,
            quadrature: QuadratureSpec::default(),
        }
    }
}

/// `(limit, tau_limit)` a suite needs.
pub fn required_limits(suite: Suite, cfg: &VerifyConfig) -> (u64, u64) {
    match suite {
        Suite::Identities => (cfg.y, cfg.y.min(10_000)),
        Suite::Parity | Suite::Gap | Suite::Count | Suite::Oscillatory => (1, 0),
        Suite::Truncation => (100_000, 0),
        Suite::MeanSquare => (20_000, 0),
        Suite::Tails => (1_000_000, 0),
        Suite::Moments => ((cfg.moment_t.ceil() as u64).max(cfg.moment_y), 0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn run_suite(table: &ArithTable, suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let (limit, tau) = required_limits(suite, cfg);
    if table.limit() < limit {
        return Err(Error::out_of_range(format!("suite {suite}"), limit, table.limit()));
    }
    if table.tau_limit() < tau {
        return Err(Error::out_of_range(format!("suite {suite} (tau)"), tau, table.tau_limit()));
    }
    let checks = match suite {
        Suite::Identities => identities(table, cfg)?,
        Suite::Parity => parity()?,
        Suite::Gap => gap()?,
        Suite::Count => count(cfg)?,
        Suite::Truncation => truncation(table, cfg)?,
        Suite::MeanSquare => mean_square(table, cfg)?,
        Suite::Oscillatory => oscillatory(cfg)?,
        Suite::Tails => tails(table)?,
        Suite::Moments => moments(table, cfg)?,
    };
    Ok(SuiteReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn identities(table: &ArithTable, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let e = SeriesEngine::new(table);
    let mut out = Vec::new();
    let d = CoefficientKind::Divisor;
    for k in 2..=9 {
        let c = series::main_term_coefficient(&e, Theorem::One, k, None, cfg.y)?;
        let s: Vec<f64> = (1..k).map(|l| e.value(d, k, l, cfg.y)).collect::<Result<_>>()?;
        let x = series::explicit_theorem1(k, &s).expect("k ≤ 9");
        let r = rel(c.value, x);
        out.push(check(
            format!("generic coefficient = {} at k={k}", c.formula),
            r <= 1e-12,
            format!("generic {:.15e}, explicit {x:.15e}, rel {r:.2e}", c.value),
        ));
    }
    let mut reductions = vec![K2Reduction::Delta, K2Reduction::P, K2Reduction::E];
    if table.tau_limit() >= 1 {
        reductions.push(K2Reduction::A(12));
    }
    for w in reductions {
        let y = match w {
            K2Reduction::A(_) => cfg.y.min(table.tau_limit()),
            _ => cfg.y,
        };
        let c = series::k2_reduction(&e, w, y)?;
        out.push(check(
            format!("mean-square constant {w:?} as a direct sum"),
            c.relative_difference <= 1e-12,
            format!("generic {:.15e}, direct {:.15e}", c.generic, c.direct),
        ));
    }
    for k in [3, 5, 7, 9] {
        let b = e.bk(d, k, cfg.y)?.value;
        out.push(check(format!("B{k}(d; {}) > 0", cfg.y), b > 0.0, format!("{b:.10e}")));
    }
    for k in [3, 4, 5] {
        let a = e.bk(d, k, 200)?.value;
        let b = e.bk(CoefficientKind::AlternatingDivisor, k, 200)?.value;
        out.push(check(
            format!("B{k}(d*) = B{k}(d) at y=200"),
            rel(b, a) <= 1e-12,
            format!("{b:.15e} vs {a:.15e}"),
        ));
    }
    let (a, b) = (e.value(d, 5, 2, 100)?, e.value(d, 5, 3, 100)?);
    out.push(check(
        "s52 = s53 at y=100",
        rel(a, b) <= 1e-12,
        format!("{a:.15e} vs {b:.15e}"),
    ));
    Ok(out)
}

fn parity() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in 2..=5 {
        for l in 1..k {
            let mut total = 0u64;
            let mut odd = 0u64;
            relations::visit_relations(k, l, 30, relations::DEFAULT_MAX_K, |r| {
                total += 1;
                if !relations::parity_check(r) {
                    odd += 1;
                }
            })?;
            out.push(check(
                format!("even coordinate sums, k={k} l={l} y=30"),
                odd == 0,
                format!("{total} relations, {odd} odd"),
            ));
        }
    }
    Ok(out)
}

/// Sign patterns up to reordering of the non-leading terms.
fn gap_patterns(k: usize) -> Vec<SignPattern> {
    (1..k)
        .map(|minus| SignPattern((0..k - 1).map(|i| i + minus >= k - 1).collect()))
        .collect()
}

fn gap() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in [3usize, 4] {
        let e = 2f64.powi(k as i32 - 2) - 0.5;
        for p in gap_patterns(k) {
            let mut scaled = Vec::new();
            for n in [25u64, 50, 100, 200] {
                scaled.push((n, relations::min_gap(&p, n)?.alpha_min * (n as f64).powf(e)));
            }
            for w in scaled.windows(2) {
                let ratio = w[1].1 / w[0].1;
                out.push(check(
                    format!("gap scaling k={k} pattern {p} N={}", w[1].0),
                    ratio >= cal::GAP_SCALING_FACTOR,
                    format!(
                        "g·N^{e} = {:.4} at N={}, {:.4} at N={}; ratio {ratio:.4}",
                        w[1].1, w[1].0, w[0].1, w[0].0
                    ),
                ));
            }
        }
    }
    Ok(out)
}

/// A random counting configuration: `k ∈ {3, 4}`, moderate boxes, `Δ` log-uniform
/// in `[1/E, √E/4]`.
pub fn random_count_config<R: Rng>(rng: &mut R) -> (Vec<u64>, SignPattern, f64) {
    let k = rng.gen_range(3..=4usize);
    let top = if k == 3 { 60 } else { 20 };
    let ns: Vec<u64> = (0..k).map(|_| rng.gen_range(2..=top)).collect();
    let mut bits: Vec<bool> = (0..k - 1).map(|_| rng.gen_bool(0.5)).collect();
    if bits.iter().all(|&b| !b) {
        bits[k - 2] = true;
    }
    let e = *ns.iter().max().expect("k ≥ 3") as f64;
    let delta = rng.gen_range((1.0 / e).ln()..(e.sqrt() / 4.0).ln()).exp();
    (ns, SignPattern(bits), delta)
}

fn count(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for i in 0..50 {
        let (ns, p, delta) = random_count_config(&mut rng);
        let c = relations::count_inequality_solutions(&ns, &p, delta)?;
        let bound = cal::COUNT_BOUND * relations::count_bound(&ns, delta);
        out.push(check(
            format!("solution count bound #{i}"),
            (c as f64) <= bound,
            format!("N={ns:?} pattern {p} Δ={delta:.4e}: count {c} ≤ {bound:.2}"),
        ));
    }
    Ok(out)
}

fn truncation(table: &ArithTable, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 1);
    let mut out = Vec::new();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let x: f64 = rng.gen_range(1e3..1e5);
        let r1 = TruncatedExpansion::new(table, CoefficientKind::Divisor, x)?;
        let d = error_term(table, ErrorTermKind::Delta, x)?;
        worst = worst.max((d - r1.eval(x)).abs() / x.powf(cal::VORONOI_EXPONENT));
    }
    out.push(check(
        "|Δ(x) − R₁(x,x)| ≤ C·x^0.05 at 200 points",
        worst <= cal::VORONOI_ENVELOPE,
        format!("max ratio {worst:.3}, C = {}", cal::VORONOI_ENVELOPE),
    ));
    let r1 = TruncatedExpansion::new(table, CoefficientKind::AlternatingDivisor, 2000.0)?;
    let mut worst: f64 = 0.0;
    for x in std::iter::once(500.0).chain((0..50).map(|_| rng.gen_range(400.0..600.0))) {
        let d = error_term(table, ErrorTermKind::DeltaStar, x)?;
        worst = worst.max((d - r1.eval(x)).abs());
    }
    out.push(check(
        "|Δ*(x) − R₁*(x,2000)| near x=500",
        worst <= cal::DELTA_STAR_ENVELOPE,
        format!("max {worst:.3}, C = {}", cal::DELTA_STAR_ENVELOPE),
    ));
    for (h, tol) in [(2u32, 0.03), (3, 0.10)] {
        let r = integrate_truncated_moment(table, CoefficientKind::Divisor, h, 1e5, 50.0, &cfg.quadrature)?;
        let ratio = r.ratio.unwrap_or(f64::NAN);
        out.push(check(
            format!("∫ R₁^{h} over [T,2T], y=50, T=1e5"),
            (ratio - 1.0).abs() <= tol,
            format!("empirical {:.6e}, predicted {:.6e}, ratio {ratio:.5}", r.empirical, r.predicted.unwrap_or(f64::NAN)),
        ));
    }
    Ok(out)
}

fn mean_square(table: &ArithTable, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let t = 1e4;
    let m = |y: f64| moment::mean_square_remainder(table, t, y, &cfg.quadrature);
    let (m1, m100) = (m(1.0)?, m(100.0)?);
    let mut out = vec![check(
        "remainder mean square drops ≥ 3× from y=1 to y=100 at T=1e4",
        m1 / m100 >= 3.0,
        format!("{m1:.6e} → {m100:.6e}, factor {:.3}", m1 / m100),
    )];
    for y in [10.0, 100.0, 1000.0] {
        let v = if y == 100.0 { m100 } else { m(y)? };
        let bound = cal::REMAINDER_MEAN_SQUARE * moment::mean_square_envelope(t, y);
        out.push(check(
            format!("remainder mean square envelope at y={y}"),
            v <= bound,
            format!("{v:.6e} ≤ {bound:.6e} (ratio to envelope {:.5})", v / moment::mean_square_envelope(t, y)),
        ));
    }
    Ok(out)
}

/// Composite Gauss–Legendre over panels shorter than a quarter period.
fn cos_sqrt_numeric(a: f64, b: f64, t1: f64, t2: f64) -> f64 {
    let g = GaussLegendre::new(20);
    // phase velocity |A|/(2√t) is largest at t1
    let rate = a.abs() / (2.0 * t1.sqrt());
    let panels = (((t2 - t1) * rate / (PI / 2.0)).ceil() as usize).max(8);
    let h = (t2 - t1) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = t1 + i as f64 * h;
            g.integrate(lo, lo + h, |t| (a * t.sqrt() + b).cos())
        })
        .sum()
}

fn oscillatory(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 2);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a = rng.gen_range(0.5..20.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let b = rng.gen_range(-PI..PI);
        let t = rng.gen_range(1.0..1e4);
        let exact = moment::cos_sqrt_integral(a, b, t, 2.0 * t)?;
        worst = worst.max(rel(exact, cos_sqrt_numeric(a, b, t, 2.0 * t)));
    }
    let mut violations = 0;
    let mut max_ratio: f64 = 0.0;
    for _ in 0..100 {
        let t: f64 = rng.gen_range(1.0..1e6);
        let a = rng.gen_range(t.powf(-0.5)..50.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let b = rng.gen_range(-PI..PI);
        let v = moment::cos_sqrt_integral(a, b, t, 2.0 * t)?;
        let r = v.abs() / moment::cos_sqrt_bound(a, t);
        max_ratio = max_ratio.max(r);
        if r > 1.0 {
            violations += 1;
        }
    }
    Ok(vec![
        check(
            "closed form matches quadrature at 20 random (A,B,T)",
            worst <= 1e-8,
            format!("max relative difference {worst:.2e}"),
        ),
        check(
            "|∫_T^{2T} cos(A√t+B)| ≤ 6√T/|A| when A²T ≥ 1",
            violations == 0,
            format!("100 cases, largest |value|/bound {max_ratio:.4}"),
        ),
    ])
}

fn tails(table: &ArithTable) -> Result<Vec<Check>> {
    let e = SeriesEngine::new(table);
    let d = CoefficientKind::Divisor;
    let mut out = Vec::new();
    for (k, l) in [(3usize, 1usize), (4, 2)] {
        let mut q = Vec::new();
        for y in [100u64, 1000, 10_000] {
            let diff = (e.value(d, k, l, y)? - e.value(d, k, l, 4 * y)?).abs();
            q.push(diff * (y as f64).sqrt());
        }
        let (lo, hi) = q.iter().fold((f64::INFINITY, 0f64), |(a, b), &v| (a.min(v), b.max(v)));
        let steps: Vec<f64> = q.windows(2).map(|w| w[1] / w[0]).collect();
        out.push(check(
            format!("|s(y) − s(4y)|·√y for s{k}{l} varies < 5×"),
            hi / lo < 5.0,
            format!("values {q:.4?}, spread {:.3}, consecutive ratios {steps:.3?}", hi / lo),
        ));
    }
    let s = e.series_skl(d, 2, 1, 1_000_000)?;
    let target = constants().divisor_square_series();
    let est = s.extrapolated().unwrap_or(f64::NAN);
    out.push(check(
        "s21(d; 1e6) + tail = ζ⁴(3/2)/ζ(3) within 1e-2",
        (est - target).abs() <= 1e-2,
        format!("value {:.6}, tail {:.6}, target {target:.6}", s.value, s.tail_estimate.unwrap_or(f64::NAN)),
    ));
    Ok(out)
}

fn moments(table: &ArithTable, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let spec = &cfg.quadrature;
    let big = cfg.moment_t;
    let mut out = Vec::new();
    let mut ts: Vec<f64> = [1e4, 1e5].into_iter().filter(|&t| t < big).collect();
    ts.push(big);
    for t in ts {
        let r = integrate_moment(table, ErrorTermKind::Delta, 1, t, spec, None)?;
        let dev = (r.empirical - t / 4.0).abs();
        out.push(check(
            format!("|∫Δ − T/4| ≤ 50·T^3/4 at T={t:e}"),
            dev <= cal::FIRST_MOMENT_ENVELOPE * t.powf(0.75),
            format!("deviation / T^3/4 = {:.4}", dev / t.powf(0.75)),
        ));
    }
    let gates: [(ErrorTermKind, u32, f64, f64); 4] = [
        (ErrorTermKind::Delta, 2, 0.85, 1.15),
        (ErrorTermKind::P, 2, 0.8, 1.2),
        (ErrorTermKind::Delta, 3, 0.7, 1.3),
        (ErrorTermKind::Delta, 4, 0.7, 1.3),
    ];
    for (kind, k, lo, hi) in gates {
        let r = integrate_moment(table, kind, k, big, spec, Some(cfg.moment_y))?;
        let ratio = r.ratio.unwrap_or(f64::NAN);
        out.push(check(
            format!("∫{kind}^{k} / prediction in [{lo}, {hi}] at T={big:e}"),
            (lo..=hi).contains(&ratio),
            format!("empirical {:.6e}, predicted {:.6e}, ratio {ratio:.4}", r.empirical, r.predicted.unwrap_or(f64::NAN)),
        ));
    }
    for k in 5..=9 {
        let r = integrate_moment(table, ErrorTermKind::Delta, k, big, spec, Some(cfg.moment_y.min(10_000)))?;
        out.push(check(
            format!("∫Δ^{k} at T={big:e}"),
            true,
            format!(
                "empirical {:.6e}, predicted {:.6e}, ratio {:.4} ({})",
                r.empirical,
                r.predicted.unwrap_or(f64::NAN),
                r.ratio.unwrap_or(f64::NAN),
                moment::UNGATED_NOTE
            ),
        ));
    }
    Ok(out)
}
