//! Run configuration: defaults, then an optional `key = value` file, then flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format '{s}' (expected csv or json)")),
        }
    }
}

/// Resolved settings, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// Table limit; `None` sizes the table to the command.
    pub limit: Option<u64>,
    /// `τ` limit; `None` sizes it to the command.
    pub tau_limit: Option<u64>,
    pub table_cache: Option<PathBuf>,
    /// Default truncation for series and coefficients.
    pub y: u64,
    /// Number of quadrature chunks; `None` uses fixed-size chunks.
    pub chunks: Option<u64>,
    pub quad_order: usize,
    pub format: Format,
    /// Worker threads, 0 = one per core.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            limit: None,
            tau_limit: None,
            table_cache: None,
            y: vmoments::series::DEFAULT_Y,
            chunks: None,
            quad_order: 8,
            format: Format::Json,
            threads: 0,
        }
    }
}

/// Flag values; `None` means "not given".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub limit: Option<u64>,
    pub tau_limit: Option<u64>,
    pub table_cache: Option<PathBuf>,
    pub y: Option<u64>,
    pub chunks: Option<u64>,
    pub quad_order: Option<usize>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

fn parse<T: FromStr>(key: &str, v: &str, line: usize) -> Result<T, String> {
    v.parse().map_err(|_| format!("config line {line}: bad value '{v}' for {key}"))
}

impl RunConfig {
    /// Applies a config file in `key = value` form. Blank lines and `#`
    /// comments are ignored; unknown keys are errors.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        self.apply_text(&text)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
            let (key, value) = (key.trim().replace('_', "-"), value.trim());
            let n = i + 1;
            match key.as_str() {
                "limit" => self.limit = Some(parse(&key, value, n)?),
                "tau-limit" => self.tau_limit = Some(parse(&key, value, n)?),
                "table-cache" => self.table_cache = Some(PathBuf::from(value)),
                "y" => self.y = parse(&key, value, n)?,
                "chunks" => self.chunks = Some(parse(&key, value, n)?),
                "quad-order" => self.quad_order = parse(&key, value, n)?,
                "format" => self.format = value.parse().map_err(|e| format!("config line {n}: {e}"))?,
                "threads" => self.threads = parse(&key, value, n)?,
                _ => return Err(format!("config line {n}: unknown key '{key}'")),
            }
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        if o.limit.is_some() {
            self.limit = o.limit;
        }
        if o.tau_limit.is_some() {
            self.tau_limit = o.tau_limit;
        }
        if o.table_cache.is_some() {
            self.table_cache = o.table_cache.clone();
        }
        if let Some(y) = o.y {
            self.y = y;
        }
        if o.chunks.is_some() {
            self.chunks = o.chunks;
        }
        if let Some(q) = o.quad_order {
            self.quad_order = q;
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        if let Some(t) = o.threads {
            self.threads = t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut c = RunConfig::default();
        c.apply_text("# comment\nlimit = 5000\nquad_order=4 # trailing\n\nformat = csv\n").unwrap();
        assert_eq!((c.limit, c.quad_order, c.format), (Some(5000), 4, Format::Csv));
        c.apply_overrides(&Overrides { limit: Some(10), format: Some(Format::Json), ..Default::default() });
        assert_eq!((c.limit, c.quad_order, c.format), (Some(10), 4, Format::Json));
    }

    #[test]
    fn bad_lines() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("limit 5").is_err());
        assert!(c.apply_text("colour = red").is_err());
        assert!(c.apply_text("y = lots").is_err());
    }
}
