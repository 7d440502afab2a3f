//! Measures the empirical constants frozen in `vmoments::calibration`.
//!
//! Run with `cargo run --release -p vmoments --example calibrate`. Each line
//! prints the largest observed ratio; the frozen constants round these up.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vmoments::error_terms::{error_term, TruncatedExpansion};
use vmoments::moment::{mean_square_envelope, mean_square_remainder};
use vmoments::quad::QuadratureSpec;
use vmoments::relations::{count_inequality_solutions, count_bound, min_gap, SignPattern};
use vmoments::{ArithTable, CoefficientKind, ErrorTermKind};

fn main() {
    let table = ArithTable::build(200_000, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xca1b);

    // Truncated Voronoi with N = x: |Δ(x) − R₁(x, x)| / x^{0.05}
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(1e3..1e5);
        let r1 = TruncatedExpansion::new(&table, CoefficientKind::Divisor, x).unwrap();
        let d = error_term(&table, ErrorTermKind::Delta, x).unwrap();
        worst = worst.max((d - r1.eval(x)).abs() / x.powf(0.05));
    }
    println!("voronoi N=x envelope: max |Δ−R₁|/x^0.05 = {worst:.4}");

    // Δ* against its expansion at x = 500, y = 2000, and nearby points
    let r = TruncatedExpansion::new(&table, CoefficientKind::AlternatingDivisor, 2000.0).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(400.0..600.0);
        let d = error_term(&table, ErrorTermKind::DeltaStar, x).unwrap();
        worst = worst.max((d - r.eval(x)).abs());
    }
    println!("delta-star y=2000 near x=500: max |Δ*−R₁| = {worst:.4}");

    // Remainder mean square at T = 10⁴
    let spec = QuadratureSpec::default();
    for y in [1.0, 10.0, 100.0, 1000.0] {
        let m = mean_square_remainder(&table, 1e4, y, &spec).unwrap();
        println!(
            "remainder mean square T=1e4 y={y}: {m:.6e}  ratio to envelope {:.6}",
            m / mean_square_envelope(1e4, y)
        );
    }

    // Gap scaling: g(N)·N^e / (g(N/2)·(N/2)^e)
    for k in [3usize, 4] {
        let e = 2f64.powi(k as i32 - 2) - 0.5;
        for bits in 1..(1u32 << (k - 1)) {
            let p = SignPattern((0..k - 1).map(|i| bits >> i & 1 == 1).collect());
            let mut line = format!("gap k={k} pattern {p}:");
            let mut prev: Option<f64> = None;
            for n in [25u64, 50, 100, 200] {
                let g = min_gap(&p, n).unwrap();
                let scaled = g.alpha_min * (n as f64).powf(e);
                if let Some(q) = prev {
                    line += &format!(" N={n} step {:.3};", scaled / q);
                }
                prev = Some(scaled);
            }
            println!("{line}");
        }
    }

    // Counting bound constant
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (ns, p, delta) = random_count_config(&mut rng);
        let c = count_inequality_solutions(&ns, &p, delta).unwrap();
        worst = worst.max(c as f64 / count_bound(&ns, delta));
    }
    println!("count bound: max A / bound = {worst:.4}");
}

fn random_count_config(rng: &mut ChaCha8Rng) -> (Vec<u64>, SignPattern, f64) {
    let k = rng.gen_range(3..=4usize);
    let ns: Vec<u64> = (0..k).map(|_| rng.gen_range(2..=if k == 3 { 60 } else { 20 })).collect();
    let mut bits: Vec<bool> = (0..k - 1).map(|_| rng.gen_bool(0.5)).collect();
    if bits.iter().all(|&b| !b) {
        bits[k - 2] = true;
    }
    let e = *ns.iter().max().unwrap() as f64;
    let delta = (rng.gen_range((1.0 / e).ln()..(e.sqrt() / 4.0).ln())).exp();
    (ns, SignPattern(bits), delta)
}
