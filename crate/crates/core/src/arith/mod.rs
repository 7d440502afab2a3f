//! Sieved arithmetic functions and constants.

mod cache;
pub mod constants;
pub mod sieve;
pub mod tau;

use std::sync::OnceLock;

use rayon::prelude::*;

pub use cache::{read_cache, write_cache, CACHE_MAGIC};
pub use constants::{constants, Constants};

use crate::error::{Error, Result};

/// Default number of `τ` values computed at build time.
pub const DEFAULT_TAU_LIMIT: u64 = 10_000;

/// Values of `d`, `r`, `μ`, the squarefree kernel and `τ` up to fixed limits.
///
/// All tables are indexed directly by `n` (slot 0 is unused). The table is
/// immutable after construction apart from lazily built cumulative sums.
#[derive(Debug)]
pub struct ArithTable {
    limit: u64,
    tau_limit: u64,
    d: Vec<u32>,
    r: Vec<i32>,
    mu: Vec<i8>,
    kernel: Vec<u64>,
    tau: Vec<i128>,
    cusp: Option<CuspForm>,
    cumulative: OnceLock<Cumulative>,
}

/// User-supplied Fourier coefficients `a(n)` of a cusp form of weight `kappa`.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspForm {
    pub kappa: u32,
    /// `a(n)` for `n = 0..coeffs.len()`; `a(0)` is ignored.
    pub coeffs: Vec<f64>,
}

/// Prefix sums used by the error terms.
#[derive(Debug)]
pub(crate) struct Cumulative {
    pub d: Vec<u64>,
    pub r: Vec<i64>,
    /// `Σ_{m ≤ n} (−1)^m d(m)`
    pub alt: Vec<i64>,
    pub a: Vec<i128>,
}

impl PartialEq for ArithTable {
    fn eq(&self, o: &Self) -> bool {
        self.limit == o.limit
            && self.tau_limit == o.tau_limit
            && self.d == o.d
            && self.r == o.r
            && self.mu == o.mu
            && self.kernel == o.kernel
            && self.tau == o.tau
            && self.cusp == o.cusp
    }
}

fn try_zeroed<T: Clone + Default>(len: usize, limit: u64, bytes: u128) -> Result<Vec<T>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len)
        .map_err(|_| Error::Resource { limit, bytes })?;
    v.resize(len, T::default());
    Ok(v)
}

impl ArithTable {
    /// Bytes needed by the value tables for the given limits.
    pub fn table_bytes(limit: u64, tau_limit: u64) -> u128 {
        (limit as u128 + 1) * (4 + 4 + 1 + 8) + (tau_limit as u128 + 1) * 16
    }

    pub fn build(limit: u64, tau_limit: u64) -> Result<Self> {
        Self::build_with(limit, tau_limit, sieve::DEFAULT_SEGMENT)
    }

    /// Builds all tables, sieving `[1, limit]` in segments of `segment` values.
    /// Segments are sieved in parallel.
    pub fn build_with(limit: u64, tau_limit: u64, segment: usize) -> Result<Self> {
        if limit == 0 {
            return Err(Error::invalid("table limit must be at least 1"));
        }
        if tau_limit > limit {
            return Err(Error::invalid(format!(
                "tau limit {tau_limit} exceeds table limit {limit}"
            )));
        }
        if segment == 0 {
            return Err(Error::invalid("segment size must be positive"));
        }
        let bytes = Self::table_bytes(limit, tau_limit);
        let len = usize::try_from(limit)
            .ok()
            .and_then(|l| l.checked_add(1))
            .ok_or(Error::Resource { limit, bytes })?;

        let mut d: Vec<u32> = try_zeroed(len, limit, bytes)?;
        let mut r: Vec<i32> = try_zeroed(len, limit, bytes)?;
        let mut mu: Vec<i8> = try_zeroed(len, limit, bytes)?;
        let mut kernel: Vec<u64> = try_zeroed(len, limit, bytes)?;

        let primes = sieve::primes_up_to(sieve::isqrt(limit));
        d[1..]
            .par_chunks_mut(segment)
            .zip(r[1..].par_chunks_mut(segment))
            .zip(mu[1..].par_chunks_mut(segment))
            .zip(kernel[1..].par_chunks_mut(segment))
            .enumerate()
            .for_each(|(i, (((d, r), mu), kernel))| {
                let lo = 1 + (i * segment) as u64;
                sieve::sieve_segment(lo, &primes, sieve::SegmentOut { d, r, mu, kernel });
            });

        let tau = tau::tau_table(tau_limit as usize);
        Ok(Self::from_parts(limit, tau_limit, d, r, mu, kernel, tau))
    }

    pub(crate) fn from_parts(
        limit: u64,
        tau_limit: u64,
        d: Vec<u32>,
        r: Vec<i32>,
        mu: Vec<i8>,
        kernel: Vec<u64>,
        tau: Vec<i128>,
    ) -> Self {
        ArithTable {
            limit,
            tau_limit,
            d,
            r,
            mu,
            kernel,
            tau,
            cusp: None,
            cumulative: OnceLock::new(),
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn tau_limit(&self) -> u64 {
        self.tau_limit
    }

    fn check(&self, what: &str, n: u64, bound: u64) -> Result<usize> {
        if n == 0 || n > bound {
            if n == 0 {
                return Err(Error::invalid(format!("{what}: index must be positive")));
            }
            return Err(Error::out_of_range(what, n, bound));
        }
        Ok(n as usize)
    }

    /// `d(n)`; panics outside `1..=limit`.
    #[inline]
    pub fn d(&self, n: u64) -> u32 {
        self.d[n as usize]
    }

    #[inline]
    pub fn r(&self, n: u64) -> i32 {
        self.r[n as usize]
    }

    #[inline]
    pub fn mu(&self, n: u64) -> i8 {
        self.mu[n as usize]
    }

    /// Squarefree kernel `h(n)`, so that `n / h(n)` is a perfect square.
    #[inline]
    pub fn kernel(&self, n: u64) -> u64 {
        self.kernel[n as usize]
    }

    pub fn try_d(&self, n: u64) -> Result<u32> {
        Ok(self.d[self.check("d(n)", n, self.limit)?])
    }

    pub fn try_r(&self, n: u64) -> Result<i32> {
        Ok(self.r[self.check("r(n)", n, self.limit)?])
    }

    pub fn try_mu(&self, n: u64) -> Result<i8> {
        Ok(self.mu[self.check("mu(n)", n, self.limit)?])
    }

    pub fn try_kernel(&self, n: u64) -> Result<u64> {
        Ok(self.kernel[self.check("kernel(n)", n, self.limit)?])
    }

    /// Ramanujan `τ(n)`, the n-th coefficient of the weight-12 cusp form.
    pub fn tau(&self, n: u64) -> Result<i128> {
        Ok(self.tau[self.check("tau(n)", n, self.tau_limit)?])
    }

    pub(crate) fn raw_d(&self) -> &[u32] {
        &self.d
    }
    pub(crate) fn raw_r(&self) -> &[i32] {
        &self.r
    }
    pub(crate) fn raw_mu(&self) -> &[i8] {
        &self.mu
    }
    pub(crate) fn raw_kernel(&self) -> &[u64] {
        &self.kernel
    }
    pub(crate) fn raw_tau(&self) -> &[i128] {
        &self.tau
    }

    /// Attaches coefficients of a cusp form of weight `kappa`. They are used
    /// for `CoefficientKind::CuspNormalized(kappa)` instead of the built-in
    /// weight-12 source; their correctness is the caller's responsibility.
    pub fn attach_cusp_form(&mut self, kappa: u32, coeffs: Vec<f64>) -> Result<()> {
        if kappa < 12 || kappa % 2 != 0 {
            return Err(Error::invalid(format!(
                "cusp form weight must be even and at least 12, got {kappa}"
            )));
        }
        self.cusp = Some(CuspForm { kappa, coeffs });
        Ok(())
    }

    /// Largest `n` for which the normalized coefficient `ã(n)` of weight
    /// `kappa` is available.
    pub fn cusp_limit(&self, kappa: u32) -> Result<u64> {
        match &self.cusp {
            Some(c) if c.kappa == kappa => Ok(c.coeffs.len().saturating_sub(1) as u64),
            _ if kappa == 12 => Ok(self.tau_limit),
            _ => Err(Error::invalid(format!(
                "no coefficient source for cusp forms of weight {kappa}; attach one first"
            ))),
        }
    }

    /// Raw coefficient `a(n)` of the weight-`kappa` form as a float.
    pub fn cusp_coefficient(&self, kappa: u32, n: u64) -> Result<f64> {
        let lim = self.cusp_limit(kappa)?;
        let idx = self.check("cusp coefficient a(n)", n, lim)?;
        match &self.cusp {
            Some(c) if c.kappa == kappa => Ok(c.coeffs[idx]),
            _ => Ok(self.tau[idx] as f64),
        }
    }

    /// `ã(n) = a(n) n^{-(κ-1)/2}`; `|ã(n)| ≤ d(n)` by Deligne.
    pub fn cusp_normalized(&self, kappa: u32, n: u64) -> Result<f64> {
        let a = self.cusp_coefficient(kappa, n)?;
        Ok(a * (n as f64).powf(-(kappa as f64 - 1.0) / 2.0))
    }

    pub(crate) fn cumulative(&self) -> &Cumulative {
        self.cumulative.get_or_init(|| {
            let mut d = Vec::with_capacity(self.d.len());
            let mut r = Vec::with_capacity(self.d.len());
            let mut alt = Vec::with_capacity(self.d.len());
            let (mut sd, mut sr, mut sa) = (0u64, 0i64, 0i64);
            for n in 0..self.d.len() {
                sd += self.d[n] as u64;
                sr += self.r[n] as i64;
                sa += if n % 2 == 0 {
                    self.d[n] as i64
                } else {
                    -(self.d[n] as i64)
                };
                d.push(sd);
                r.push(sr);
                alt.push(sa);
            }
            let mut a = Vec::with_capacity(self.tau.len());
            let mut s = 0i128;
            for &t in &self.tau {
                s += t;
                a.push(s);
            }
            Cumulative { d, r, alt, a }
        })
    }

    /// `Σ_{n ≤ m} d(n)`.
    pub fn divisor_summatory(&self, m: u64) -> Result<u64> {
        if m > self.limit {
            return Err(Error::out_of_range("divisor summatory function", m, self.limit));
        }
        Ok(self.cumulative().d[m as usize])
    }
}
