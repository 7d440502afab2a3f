//! Binary table cache.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "VMAT1\0"                      6 bytes
//! limit                          u64
//! tau_limit                      u64
//! d(1..=limit)                   u32 each
//! r(1..=limit)                   i32 each
//! mu(1..=limit)                  i8 each
//! kernel(1..=limit)              u64 each
//! tau(1..=tau_limit)             i128 each
//! checksum                       u64
//! ```
//!
//! The checksum is the wrapping 64-bit sum of every stored value widened to 64
//! bits (signed values sign-extended), counting `limit` and `tau_limit`, with
//! each `tau` entry contributing its low and high 64-bit halves.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::ArithTable;
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 6] = b"VMAT1\0";

struct Checksum(u64);

impl Checksum {
    fn word(&mut self, w: u64) {
        self.0 = self.0.wrapping_add(w);
    }
}

pub fn write_cache(table: &ArithTable, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let mut sum = Checksum(0);
    w.write_all(CACHE_MAGIC)?;
    for v in [table.limit(), table.tau_limit()] {
        w.write_all(&v.to_le_bytes())?;
        sum.word(v);
    }
    for &v in &table.raw_d()[1..] {
        w.write_all(&v.to_le_bytes())?;
        sum.word(v as u64);
    }
    for &v in &table.raw_r()[1..] {
        w.write_all(&v.to_le_bytes())?;
        sum.word(v as i64 as u64);
    }
    for &v in &table.raw_mu()[1..] {
        w.write_all(&v.to_le_bytes())?;
        sum.word(v as i64 as u64);
    }
    for &v in &table.raw_kernel()[1..] {
        w.write_all(&v.to_le_bytes())?;
        sum.word(v);
    }
    for &v in &table.raw_tau()[1..] {
        w.write_all(&v.to_le_bytes())?;
        let u = v as u128;
        sum.word(u as u64);
        sum.word((u >> 64) as u64);
    }
    w.write_all(&sum.0.to_le_bytes())?;
    w.flush()?;
    Ok(())
}

fn read_array<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            Error::Cache("file is truncated".into())
        } else {
            Error::Io(e)
        }
    })?;
    Ok(buf)
}

pub fn read_cache(path: &Path) -> Result<ArithTable> {
    let file = File::open(path)?;
    let file_len = file.metadata()?.len() as u128;
    let mut r = BufReader::new(file);
    let magic: [u8; 6] = read_array(&mut r)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let mut sum = Checksum(0);
    let limit = u64::from_le_bytes(read_array(&mut r)?);
    let tau_limit = u64::from_le_bytes(read_array(&mut r)?);
    sum.word(limit);
    sum.word(tau_limit);
    if limit == 0 || tau_limit > limit {
        return Err(Error::Cache(format!(
            "inconsistent header: limit {limit}, tau_limit {tau_limit}"
        )));
    }
    let expected = 6 + 16 + limit as u128 * 17 + tau_limit as u128 * 16 + 8;
    if expected != file_len {
        return Err(Error::Cache(format!(
            "expected {expected} bytes for limit {limit}, found {file_len}"
        )));
    }
    let len = limit as usize + 1;

    let mut d = vec![0u32; len];
    for v in &mut d[1..] {
        *v = u32::from_le_bytes(read_array(&mut r)?);
        sum.word(*v as u64);
    }
    let mut rr = vec![0i32; len];
    for v in &mut rr[1..] {
        *v = i32::from_le_bytes(read_array(&mut r)?);
        sum.word(*v as i64 as u64);
    }
    let mut mu = vec![0i8; len];
    for v in &mut mu[1..] {
        *v = i8::from_le_bytes(read_array(&mut r)?);
        sum.word(*v as i64 as u64);
    }
    let mut kernel = vec![0u64; len];
    for v in &mut kernel[1..] {
        *v = u64::from_le_bytes(read_array(&mut r)?);
        sum.word(*v);
    }
    let mut tau = vec![0i128; tau_limit as usize + 1];
    for v in &mut tau[1..] {
        *v = i128::from_le_bytes(read_array(&mut r)?);
        let u = *v as u128;
        sum.word(u as u64);
        sum.word((u >> 64) as u64);
    }
    let stored = u64::from_le_bytes(read_array(&mut r)?);
    if stored != sum.0 {
        return Err(Error::Cache(format!(
            "checksum mismatch: stored {stored:#x}, computed {:#x}",
            sum.0
        )));
    }
    Ok(ArithTable::from_parts(limit, tau_limit, d, rr, mu, kernel, tau))
}
