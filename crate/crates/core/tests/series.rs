mod common;

use vmoments::series::{class_sum, cos_quarter_pi, SeriesEngine, TailModel};
use vmoments::{ArithTable, CoefficientKind, Error};

fn table() -> ArithTable {
    ArithTable::build(40_000, 1000).unwrap()
}

#[test]
fn dp_matches_kernel_oracles() {
    let t = table();
    let e = SeriesEngine::new(&t);
    let d = common::divisor_counts(40_000);
    let ker = common::kernels(40_000);
    for y in [50usize, 777, 10_000] {
        let s21 = e.value(CoefficientKind::Divisor, 2, 1, y as u64).unwrap();
        let s31 = e.value(CoefficientKind::Divisor, 3, 1, y as u64).unwrap();
        let s42 = e.value(CoefficientKind::Divisor, 4, 2, y as u64).unwrap();
        assert!((s21 / common::square_sum(&d, y) - 1.0).abs() < 1e-13);
        assert!((s31 / common::s31(&d, &ker, y) - 1.0).abs() < 1e-12, "s31 at {y}");
        assert!((s42 / common::s42(&d, &ker, y) - 1.0).abs() < 1e-12, "s42 at {y}");
    }
}

#[test]
fn dp_matches_enumeration() {
    let t = table();
    let e = SeriesEngine::new(&t);
    for (k, l, y) in [(3, 1, 30u64), (4, 1, 20), (4, 2, 20), (5, 2, 12), (5, 1, 12)] {
        let direct: f64 = vmoments::relations::enumerate_relations(k, l, y)
            .unwrap()
            .iter()
            .map(|r| r.values().iter().map(|&n| t.d(n) as f64 * (n as f64).powf(-0.75)).product::<f64>())
            .sum();
        let dp = e.value(CoefficientKind::Divisor, k, l, y).unwrap();
        assert!((dp - direct).abs() <= 1e-12 * direct, "k={k} l={l}: {dp} vs {direct}");
    }
}

#[test]
fn symmetry_and_alternating_kind() {
    let t = table();
    let e = SeriesEngine::new(&t);
    for (k, l) in [(5, 2), (6, 1), (7, 3)] {
        let a = e.value(CoefficientKind::Divisor, k, l, 60).unwrap();
        let b = e.value(CoefficientKind::Divisor, k, k - l, 60).unwrap();
        assert!((a - b).abs() <= 1e-13 * a);
    }
    for k in 3..=6 {
        let a = e.bk(CoefficientKind::Divisor, k, 300).unwrap().value;
        let b = e.bk(CoefficientKind::AlternatingDivisor, k, 300).unwrap().value;
        assert!((a - b).abs() <= 1e-12 * a.abs(), "k={k}");
    }
}

#[test]
fn bk_breakdown_and_oracle() {
    let t = table();
    let e = SeriesEngine::new(&t);
    let b = e.bk(CoefficientKind::Divisor, 4, 500).unwrap();
    let sum: f64 = b.breakdown.iter().map(|x| x.contribution).sum();
    assert!((sum - b.value).abs() <= 1e-13 * b.value.abs());
    let s: Vec<f64> = (1..4).map(|l| e.value(CoefficientKind::Divisor, 4, l, 500).unwrap()).collect();
    assert!((common::bk_from(4, &s) - b.value).abs() <= 1e-12 * b.value.abs());
    // cos(π(4−2l)/4) vanishes for l = 1, 3
    assert_eq!(b.breakdown[0].cosine, 0.0);
    assert_eq!(cos_quarter_pi(2), 0.0);
}

#[test]
fn tail_models() {
    let t = ArithTable::build(1_000_000, 0).unwrap();
    let target = common::divisor_square_series();
    let cubic = SeriesEngine::new(&t).series_skl(CoefficientKind::Divisor, 2, 1, 1_000_000).unwrap();
    let pow = SeriesEngine::new(&t)
        .with_tail_model(TailModel::PowerLaw)
        .series_skl(CoefficientKind::Divisor, 2, 1, 1_000_000)
        .unwrap();
    let ec = (cubic.extrapolated().unwrap() - target).abs();
    let ep = (pow.extrapolated().unwrap() - target).abs();
    assert!(ec < 1e-2 && ec < ep, "log-cubic {ec}, power law {ep}");
    let small = SeriesEngine::new(&t).series_skl(CoefficientKind::Divisor, 2, 1, 10).unwrap();
    assert!(small.tail_estimate.is_none());
}

#[test]
fn class_sum_and_errors() {
    let t = table();
    // a single kernel h = 1, one term each side: Σ_s w(s)² with w(s) = d(s²) s^{-3/2}
    let v = class_sum(&t, CoefficientKind::Divisor, 1, 1, 1, 100).unwrap();
    let want: f64 = (1..=10u64).map(|s| (t.d(s * s) as f64).powi(2) * (s as f64).powf(-3.0)).sum();
    assert!((v - want).abs() < 1e-14);
    assert!(class_sum(&t, CoefficientKind::Divisor, 4, 1, 1, 100).is_err());
    let e = SeriesEngine::new(&t);
    assert!(matches!(e.value(CoefficientKind::Divisor, 3, 1, 50_000), Err(Error::OutOfRange { .. })));
    assert!(e.value(CoefficientKind::CuspNormalized(12), 3, 1, 2000).is_err());
}
