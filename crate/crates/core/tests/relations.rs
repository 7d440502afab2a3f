mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vmoments::relations::{
    self, brute_force_enumerate_with_guard, count_inequality_solutions, min_gap, min_gap_with_guard, Relation,
    SignPattern, SqrtInteger,
};
use vmoments::Error;

fn values(rs: &[Relation]) -> Vec<Vec<u64>> {
    let mut v: Vec<_> = rs.iter().map(|r| r.values()).collect();
    v.sort();
    v
}

/// Balanced tuples by floating comparison, for small boxes only.
fn float_relations(k: usize, l: usize, y: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut idx = vec![1u64; k];
    loop {
        let left: f64 = idx[..l].iter().map(|&n| (n as f64).sqrt()).sum();
        let right: f64 = idx[l..].iter().map(|&n| (n as f64).sqrt()).sum();
        if (left - right).abs() < 1e-9 {
            out.push(idx.clone());
        }
        let mut p = k;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if idx[p] < y {
                idx[p] += 1;
                break;
            }
            idx[p] = 1;
        }
    }
}

#[test]
fn enumeration_matches_float_search() {
    for (k, l, y) in [(3, 1, 40), (3, 2, 40), (4, 2, 20), (4, 1, 20), (5, 2, 9)] {
        let got = values(&relations::enumerate_relations(k, l, y).unwrap());
        assert_eq!(got, float_relations(k, l, y), "k={k} l={l} y={y}");
    }
}

#[test]
fn known_counts() {
    assert_eq!(relations::enumerate_relations(3, 1, 4).unwrap().len(), 1);
    assert_eq!(relations::enumerate_relations(3, 1, 16).unwrap().len(), 8);
    // k = 2: only the diagonal n₁ = n₂
    assert_eq!(relations::enumerate_relations(2, 1, 50).unwrap().len(), 50);
}

#[test]
fn enumeration_is_sorted_and_deterministic() {
    let a = relations::enumerate_relations(4, 2, 25).unwrap();
    let b = relations::enumerate_relations(4, 2, 25).unwrap();
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| w[0].values() <= w[1].values()));
}

#[test]
fn sqrt_integer_split() {
    let s = SqrtInteger::from_n(360);
    assert_eq!((s.s, s.h), (6, 10));
    assert_eq!(s.n(), 360);
    assert_eq!(SqrtInteger::from_n(1).h, 1);
}

#[test]
fn from_values_rejects_unbalanced() {
    assert!(Relation::from_values(1, &[9, 1, 4]).is_some());
    assert!(Relation::from_values(1, &[9, 1, 3]).is_none());
    // √8 + √2 = √18
    assert!(Relation::from_values(2, &[8, 2, 18]).is_some());
    assert!(Relation::from_values(1, &[8, 2, 18]).is_none());
}

#[test]
fn min_gap_matches_brute_force() {
    for (pattern, n) in [("01", 30u64), ("11", 30), ("001", 12), ("011", 12)] {
        let p: SignPattern = pattern.parse().unwrap();
        let k = p.k();
        let g = min_gap(&p, n).unwrap();
        let mut best = f64::INFINITY;
        let mut idx = vec![1u64; k];
        'outer: loop {
            let mut v = (idx[0] as f64).sqrt();
            for j in 1..k {
                let s = (idx[j] as f64).sqrt();
                v += if p.is_minus(j) { -s } else { s };
            }
            if v.abs() > 1e-9 {
                best = best.min(v.abs());
            }
            let mut q = k;
            loop {
                if q == 0 {
                    break 'outer;
                }
                q -= 1;
                if idx[q] < n {
                    idx[q] += 1;
                    break;
                }
                idx[q] = 1;
            }
        }
        assert!((g.alpha_min - best).abs() <= 1e-12 * best.max(1.0), "{pattern}: {} vs {best}", g.alpha_min);
        // the witness attains the minimum
        let w = &g.witness;
        let mut v = (w[0] as f64).sqrt();
        for j in 1..k {
            let s = (w[j] as f64).sqrt();
            v += if p.is_minus(j) { -s } else { s };
        }
        assert!((v.abs() - g.alpha_min).abs() < 1e-9);
    }
}

#[test]
fn counts_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let k = rng.gen_range(2..=4usize);
        let ns: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=15)).collect();
        let mut bits: Vec<bool> = (0..k - 1).map(|_| rng.gen_bool(0.5)).collect();
        bits[0] = true;
        let p = SignPattern(bits);
        let delta = rng.gen_range(0.01..2.0);
        let mut count = 0;
        let mut idx: Vec<u64> = ns.iter().map(|n| n + 1).collect();
        'outer: loop {
            let mut v = (idx[0] as f64).sqrt();
            for j in 1..k {
                let s = (idx[j] as f64).sqrt();
                v += if p.0[j - 1] { -s } else { s };
            }
            if v.abs() < delta {
                count += 1;
            }
            let mut q = k;
            loop {
                if q == 0 {
                    break 'outer;
                }
                q -= 1;
                if idx[q] < 2 * ns[q] {
                    idx[q] += 1;
                    break;
                }
                idx[q] = ns[q] + 1;
            }
        }
        assert_eq!(count_inequality_solutions(&ns, &p, delta).unwrap(), count, "{ns:?} {p} {delta}");
    }
}

#[test]
fn example_count() {
    let p: SignPattern = "11".parse().unwrap();
    let c = count_inequality_solutions(&[8, 8, 8], &p, 0.01).unwrap();
    // √n₁ − √n₂ − √n₃ with all n in 9..=16 is at most 4 − 6 < 0: no solutions
    assert_eq!(c, 0);
    // one minus sign keeps the value ≥ 3 + 3 − 4 = 2, reached only at (9, 9, 16)
    let q: SignPattern = "01".parse().unwrap();
    assert_eq!(count_inequality_solutions(&[8, 8, 8], &q, 2.0).unwrap(), 0);
    assert_eq!(count_inequality_solutions(&[8, 8, 8], &q, 2.0 + 1e-9).unwrap(), 1);
}

#[test]
fn guards() {
    assert!(matches!(brute_force_enumerate_with_guard(5, 2, 100, 1000), Err(Error::GuardExceeded { .. })));
    assert!(matches!(min_gap_with_guard(&"011".parse().unwrap(), 500, 1000), Err(Error::GuardExceeded { .. })));
    assert!(matches!(relations::enumerate_relations(3, 3, 10), Err(Error::InvalidArgument(_))));
}
