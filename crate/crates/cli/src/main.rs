//! `vmoments` command-line front end.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use vmoments::arith::{read_cache, write_cache, DEFAULT_TAU_LIMIT};
use vmoments::error_terms::{error_term, TruncatedExpansion};
use vmoments::exponents::{exponent_book, parse_rational};
use vmoments::moment::{integrate_moment, integrate_moment_streaming, integrate_truncated_moment};
use vmoments::quad::QuadratureSpec;
use vmoments::relations::{self, SignPattern};
use vmoments::series::{main_term_coefficient, SeriesEngine, Theorem};
use vmoments::verify::{self, Suite, VerifyConfig};
use vmoments::{ArithTable, CoefficientKind, Error, ErrorTermKind};

use config::{Format, Overrides, RunConfig};
use report::{Report, VERSION};

#[derive(Parser, Debug)]
#[command(name = "vmoments", version = VERSION, about = "Error terms, square-root relation series and power moments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Sieve limit (default: sized to the command)
    #[arg(long, global = true)]
    limit: Option<u64>,
    /// Number of τ values (default: sized to the command)
    #[arg(long, global = true)]
    tau_limit: Option<u64>,
    /// Binary table cache, read if it covers the limits and rewritten otherwise
    #[arg(long, global = true, env = "VM_TABLE_CACHE")]
    table_cache: Option<PathBuf>,
    /// `key = value` config file; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Truncation for series and coefficients
    #[arg(long, global = true)]
    y: Option<u64>,
    /// Number of quadrature chunks
    #[arg(long, global = true)]
    chunks: Option<u64>,
    /// Gauss–Legendre order per unit interval
    #[arg(long, global = true)]
    quad_order: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (0 = one per core)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sieved d, r, μ, kernel and τ over a range
    Sieve {
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Exact error term, optionally with its truncated expansion
    ErrorTerm {
        #[arg(long)]
        kind: ErrorTermKind,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        /// Truncation of the expansion (omit for the exact value only)
        #[arg(long = "trunc", alias = "expansion-y")]
        trunc: Option<f64>,
    },
    /// Square-root relations
    #[command(subcommand)]
    Relations(RelationsCmd),
    /// Truncated series s_{k;l}(f; y) with its tail estimate
    Series {
        #[arg(long)]
        kind: CoefficientKind,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
    },
    /// B_k(f; y)
    Bk {
        #[arg(long)]
        kind: CoefficientKind,
        #[arg(long)]
        k: usize,
        /// Include the per-l terms
        #[arg(long)]
        breakdown: bool,
    },
    /// Main-term coefficient of the k-th moment
    Coeff {
        #[arg(long)]
        theorem: Theorem,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        kappa: Option<u32>,
    },
    /// Exponent bookkeeping K₀, b(k), σ, δ₁, δ₂ as exact rationals
    Exponents {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "184/19")]
        a0: String,
    },
    /// ∫₁ᵀ F^k against its predicted main term
    Moment {
        #[arg(long)]
        kind: ErrorTermKind,
        #[arg(long)]
        k: u32,
        #[arg(long = "T", alias = "t")]
        t: f64,
        /// Sieve segment by segment instead of building a table (delta and p)
        #[arg(long)]
        stream: bool,
    },
    /// ∫_T^{2T} R₁(x, y)^h against its predicted main term
    MomentR1 {
        #[arg(long)]
        h: u32,
        #[arg(long = "T", alias = "t")]
        t: f64,
    },
    /// Run a named battery of checks
    Verify {
        /// identities, parity, gap, count, truncation, meansquare, oscillatory, tails, moments
        #[arg(long)]
        suite: Suite,
        /// Upper limit for the moments suite
        #[arg(long = "moment-T", alias = "moment-t")]
        moment_t: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum RelationsCmd {
    /// All balanced tuples with entries ≤ y
    Enumerate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        /// Use the brute-force scan instead of the kernel search
        #[arg(long)]
        brute: bool,
    },
    /// Smallest nonzero |√n₁ ± √n₂ ± ⋯| with n_j ≤ N
    Gap {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        pattern: SignPattern,
        #[arg(long = "N")]
        n: u64,
    },
    /// Number of tuples with N_j < n_j ≤ 2N_j and |√n₁ ± ⋯| < delta
    Count {
        #[arg(long = "N", value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(long)]
        pattern: SignPattern,
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
    Checks(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// What a command produced, plus the table and truncation it used.
struct Outcome {
    result: Value,
    table: Option<(u64, u64)>,
    y: Option<u64>,
}

fn ceil(x: f64) -> u64 {
    if x.is_finite() && x > 0.0 {
        x.ceil() as u64
    } else {
        1
    }
}

/// Builds or loads a table covering `need`, unless the user fixed the limits.
fn table(cfg: &RunConfig, need: (u64, u64)) -> Result<ArithTable, Failure> {
    let limit = cfg.limit.unwrap_or(need.0.max(1));
    let tau = cfg.tau_limit.unwrap_or(need.1).min(limit);
    if let Some(path) = &cfg.table_cache {
        let (mut limit, mut tau) = (limit, tau);
        if path.exists() {
            let t = read_cache(path)?;
            if t.limit() >= limit && t.tau_limit() >= tau {
                return Ok(t);
            }
            // Grow rather than replace, so the cache never shrinks.
            limit = limit.max(t.limit());
            tau = tau.max(t.tau_limit());
        }
        let t = ArithTable::build(limit, tau)?;
        write_cache(&t, path)?;
        return Ok(t);
    }
    Ok(ArithTable::build(limit, tau)?)
}

fn spec(cfg: &RunConfig, intervals: u64) -> Result<QuadratureSpec, Failure> {
    Ok(match cfg.chunks {
        Some(c) => QuadratureSpec::with_chunk_count(cfg.quad_order, intervals, c)?,
        None => QuadratureSpec::new(cfg.quad_order, QuadratureSpec::default().chunk)?,
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn tau_need(kind: CoefficientKind, y: u64) -> u64 {
    match kind {
        CoefficientKind::CuspNormalized(_) => y,
        _ => 0,
    }
}

fn run(cmd: &Command, cfg: &RunConfig, y_given: bool) -> Result<Outcome, Failure> {
    let y = cfg.y;
    Ok(match cmd {
        Command::Sieve { from, to } => {
            if from > to || *from == 0 {
                return Err(Failure::Usage(format!("need 1 ≤ from ≤ to, got {from}..{to}")));
            }
            let t = table(cfg, (*to, (*to).min(DEFAULT_TAU_LIMIT)))?;
            let mut rows = Vec::new();
            for n in *from..=*to {
                let mut m = Map::new();
                m.insert("n".into(), json!(n));
                m.insert("d".into(), json!(t.try_d(n)?));
                m.insert("r".into(), json!(t.try_r(n)?));
                m.insert("mu".into(), json!(t.try_mu(n)?));
                m.insert("kernel".into(), json!(t.try_kernel(n)?));
                m.insert("tau".into(), t.tau(n).map_or(Value::Null, |v| json!(v.to_string())));
                rows.push(Value::Object(m));
            }
            Outcome { result: json!({ "rows": rows }), table: Some((t.limit(), t.tau_limit())), y: None }
        }
        Command::ErrorTerm { kind, x, trunc } => {
            let reach = if *kind == ErrorTermKind::DeltaStar { 4.0 * x } else { *x };
            let top = ceil(reach).max(trunc.map_or(0, ceil));
            let tau = if *kind == ErrorTermKind::A { top } else { 0 };
            let t = table(cfg, (top, tau))?;
            let exact = error_term(&t, *kind, *x)?;
            let mut m = Map::new();
            m.insert("kind".into(), json!(kind));
            m.insert("x".into(), json!(x));
            m.insert("exact".into(), json!(exact));
            if let Some(ty) = trunc {
                let r1 = TruncatedExpansion::new(&t, kind.coefficient_kind(), *ty)?;
                let v = r1.eval(*x);
                m.insert("truncation".into(), json!(ty));
                m.insert("truncated".into(), json!(v));
                m.insert("difference".into(), json!(exact - v));
            }
            Outcome { result: Value::Object(m), table: Some((t.limit(), t.tau_limit())), y: None }
        }
        Command::Relations(r) => relations_cmd(r, cfg)?,
        Command::Series { kind, k, l } => {
            let t = table(cfg, (y, tau_need(*kind, y)))?;
            let s = SeriesEngine::new(&t).series_skl(*kind, *k, *l, y)?;
            let mut v = to_value(&s);
            v["extrapolated"] = json!(s.extrapolated());
            Outcome { result: v, table: Some((t.limit(), t.tau_limit())), y: Some(y) }
        }
        Command::Bk { kind, k, breakdown } => {
            let t = table(cfg, (y, tau_need(*kind, y)))?;
            let b = SeriesEngine::new(&t).bk(*kind, *k, y)?;
            let mut v = to_value(&b);
            if !breakdown {
                v.as_object_mut().expect("object").remove("breakdown");
            }
            Outcome { result: v, table: Some((t.limit(), t.tau_limit())), y: Some(y) }
        }
        Command::Coeff { theorem, k, kappa } => {
            let tau = if *theorem == Theorem::Four { y } else { 0 };
            let t = table(cfg, (y, tau))?;
            let c = main_term_coefficient(&SeriesEngine::new(&t), *theorem, *k, *kappa, y)?;
            Outcome { result: to_value(&c), table: Some((t.limit(), t.tau_limit())), y: Some(y) }
        }
        Command::Exponents { k, a0 } => {
            let book = exponent_book(*k, parse_rational(a0)?)?;
            let mut v = to_value(&book);
            let m = v.as_object_mut().expect("object");
            for (name, x) in [
                ("b_k", book.b_k),
                ("b_k0", book.b_k0),
                ("sigma", book.sigma),
                ("delta1", book.delta1),
                ("delta2", book.delta2),
            ] {
                m.insert(format!("{name}_decimal"), json!(x.to_f64()));
            }
            Outcome { result: v, table: None, y: None }
        }
        Command::Moment { kind, k, t: big_t, stream } => {
            let step_count = ceil((big_t - 1.0) / kind.step());
            let sp = spec(cfg, step_count)?;
            if *stream {
                if !matches!(kind, ErrorTermKind::Delta | ErrorTermKind::P) {
                    return Err(Failure::Usage("--stream supports delta and p only".into()));
                }
                let v = integrate_moment_streaming(*kind, *k, *big_t, &sp, vmoments::arith::sieve::DEFAULT_SEGMENT as u64)?;
                let result = json!({ "subject": kind, "k": k, "from": 1.0, "to": big_t, "empirical": v,
                    "quadrature_order": sp.order, "chunk": sp.chunk });
                return Ok(Outcome { result, table: None, y: None });
            }
            let reach = if *kind == ErrorTermKind::DeltaStar { 4.0 * big_t } else { *big_t };
            let pred_y = if y_given { y } else { y.min(vmoments::series::DEFAULT_Y) };
            let top = ceil(reach).max(if *k >= 2 { pred_y } else { 0 });
            let tau = if *kind == ErrorTermKind::A { top } else { 0 };
            let t = table(cfg, (top, tau))?;
            let r = integrate_moment(&t, *kind, *k, *big_t, &sp, Some(pred_y.min(t.limit())))?;
            let used = r.y.map(|v| v as u64);
            Outcome { result: to_value(&r), table: Some((t.limit(), t.tau_limit())), y: used }
        }
        Command::MomentR1 { h, t: big_t } => {
            let t = table(cfg, (y, 0))?;
            let sp = spec(cfg, ceil(*big_t))?;
            let r = integrate_truncated_moment(&t, CoefficientKind::Divisor, *h, *big_t, y as f64, &sp)?;
            Outcome { result: to_value(&r), table: Some((t.limit(), t.tau_limit())), y: Some(y) }
        }
        Command::Verify { suite, moment_t, seed } => {
            let mut vc = VerifyConfig::default();
            if y_given {
                vc.y = y;
            }
            if let Some(mt) = moment_t {
                vc.moment_t = *mt;
            }
            if let Some(s) = seed {
                vc.seed = *s;
            }
            vc.quadrature = QuadratureSpec::new(cfg.quad_order, QuadratureSpec::default().chunk)?;
            let t = table(cfg, verify::required_limits(*suite, &vc))?;
            let rep = verify::run_suite(&t, *suite, &vc)?;
            let v = json!({ "suite": rep.suite, "passed": rep.passed, "rows": rep.checks });
            if !rep.passed {
                return Err(Failure::Checks(v));
            }
            Outcome { result: v, table: Some((t.limit(), t.tau_limit())), y: Some(vc.y) }
        }
    })
}

fn relations_cmd(r: &RelationsCmd, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let result = match r {
        RelationsCmd::Enumerate { k, l, brute } => {
            let y = cfg.y;
            let list = if *brute {
                relations::brute_force_enumerate(*k, *l, y)?
            } else {
                relations::enumerate_relations(*k, *l, y)?
            };
            let rows: Vec<Value> = list
                .iter()
                .map(|rel| {
                    let mut m = Map::new();
                    for (i, n) in rel.values().iter().enumerate() {
                        m.insert(format!("n{}", i + 1), json!(n));
                    }
                    let classes: Vec<String> = rel.kernel_classes().iter().map(|c| c.to_string()).collect();
                    m.insert("classes".into(), json!(classes.join(" ")));
                    m.insert("even".into(), json!(relations::parity_check(rel)));
                    Value::Object(m)
                })
                .collect();
            return Ok(Outcome { result: json!({ "count": rows.len(), "rows": rows }), table: None, y: Some(y) });
        }
        RelationsCmd::Gap { k, pattern, n } => {
            if pattern.k() != *k {
                return Err(Failure::Usage(format!("pattern {pattern} has {} signs, --k {k} needs {}", pattern.0.len(), k - 1)));
            }
            to_value(&relations::min_gap(pattern, *n)?)
        }
        RelationsCmd::Count { n, pattern, delta } => {
            let c = relations::count_inequality_solutions(n, pattern, *delta)?;
            json!({ "N": n, "pattern": pattern, "delta": delta, "count": c,
                    "bound_shape": relations::count_bound(n, *delta) })
        }
    };
    Ok(Outcome { result, table: None, y: None })
}

fn command_line() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let start = Instant::now();
    let g = &cli.global;
    let mut cfg = RunConfig::default();
    if let Some(path) = &g.config {
        if let Err(msg) = cfg.apply_file(path) {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    }
    cfg.apply_overrides(&Overrides {
        limit: g.limit,
        tau_limit: g.tau_limit,
        table_cache: g.table_cache.clone(),
        y: g.y,
        chunks: g.chunks,
        quad_order: g.quad_order,
        format: g.format,
        threads: g.threads,
    });
    if cfg.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let y_given = g.y.is_some() || cfg.y != RunConfig::default().y;
    let name = command_line();
    let outcome = run(&cli.command, &cfg, y_given);
    let wall = start.elapsed().as_secs_f64();
    let emit = |result: Value, table: Option<(u64, u64)>, y: Option<u64>| {
        let r = Report {
            version: VERSION,
            command: name.clone(),
            config: &cfg,
            table_limit: table.map(|t| t.0),
            tau_limit: table.map(|t| t.1),
            y,
            wall_time_s: wall,
            result,
        };
        print!("{}", report::render(&r, cfg.format));
    };
    match outcome {
        Ok(o) => {
            emit(o.result, o.table, o.y);
            ExitCode::SUCCESS
        }
        Err(Failure::Checks(v)) => {
            emit(v, None, None);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            if cfg.format == Format::Json {
                println!("{}", json!({ "error": { "kind": e.kind_tag(), "message": e.to_string() } }));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
