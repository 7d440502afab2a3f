//! Fixed-order Gauss–Legendre rules.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 8;
/// Unit intervals per chunk.
pub const DEFAULT_CHUNK: u64 = 1 << 16;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from Chebyshev-like starting points.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_a^b f` with this rule on a single panel.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(mid + half * x);
        }
        half * s
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Per-interval rule and chunking used by the moment integrators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadratureSpec {
    pub order: usize,
    /// Intervals per chunk; chunks are integrated in parallel.
    pub chunk: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            order: DEFAULT_ORDER,
            chunk: DEFAULT_CHUNK,
        }
    }
}

impl QuadratureSpec {
    pub fn new(order: usize, chunk: u64) -> Result<Self> {
        if order == 0 || order > 64 {
            return Err(Error::invalid(format!("quadrature order must be in 1..=64, got {order}")));
        }
        if chunk == 0 {
            return Err(Error::invalid("chunk size must be positive"));
        }
        Ok(QuadratureSpec { order, chunk })
    }

    /// Chunk size that splits `intervals` into `chunks` nearly equal parts.
    pub fn with_chunk_count(order: usize, intervals: u64, chunks: u64) -> Result<Self> {
        if chunks == 0 {
            return Err(Error::invalid("chunk count must be positive"));
        }
        Self::new(order, intervals.div_ceil(chunks).max(1))
    }
}
