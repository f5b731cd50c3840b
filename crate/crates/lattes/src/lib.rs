//! Command implementations behind the `lattes` binary. Each command writes
//! its table to a caller-supplied writer so the same code serves the binary
//! and the tests.

use std::io::Write;
use std::ops::RangeInclusive;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lattes_core::cm_catalog;
use lattes_core::endosearch::{self, CandidateFraction, CurveClass};
use lattes_core::families::{self, DensityReport, Mode};
use lattes_core::{Field, Poly, RatFrac, DEFAULT_ENUMERATION_CAP};
use rayon::prelude::*;
use serde::Serialize;

/// Version tag carried by every JSON record.
pub const SCHEMA_VERSION: u32 = 1;

/// Exit code for searches that hit their budget and printed partial output.
pub const EXIT_TRUNCATED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "lattes", version, about = "Search and evaluate rational fractions that generate irreducible polynomial families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Census of Verschiebung x-maps over all ordinary curves.
    Verschiebung(VerschiebungArgs),
    /// Endomorphisms of prime degree, or composites along isogeny cycles.
    Endo(EndoArgs),
    /// Lifespan densities of a fraction over irreducibles of given degrees.
    Density(DensityArgs),
    /// Conjugation orbit and canonical representative of a fraction.
    Canonicalize(CanonicalizeArgs),
    /// Iterate T_S on a polynomial.
    Transform(TransformArgs),
    /// Seed conditions of the Q- and R-transforms.
    Seedcheck(SeedcheckArgs),
    /// Reduce a CM catalog entry to a finite field.
    CmReduce(CmReduceArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Field order, as `q` or `p^n`.
    #[arg(long = "q", visible_alias = "field")]
    pub q: String,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Enumeration budget.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
}

impl Common {
    fn field(&self) -> Result<Field> {
        Field::parse(&self.q).with_context(|| format!("bad field `{}`", self.q))
    }
}

#[derive(Args, Debug, Clone)]
pub struct VerschiebungArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct EndoArgs {
    #[command(flatten)]
    pub common: Common,
    /// Prime degree for the single-isogeny search.
    #[arg(long)]
    pub l: Option<u32>,
    /// Include supersingular curves in the prime-degree search.
    #[arg(long)]
    pub supersingular: bool,
    /// Search cycles in the isogeny graph instead.
    #[arg(long)]
    pub cycles: bool,
    #[arg(long, default_value_t = 12)]
    pub degmax: usize,
    /// Isogeny degrees allowed along a cycle.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub primes: Vec<u32>,
    /// Maximum number of isogeny steps explored.
    #[arg(long, default_value_t = 100_000)]
    pub path_cap: u64,
}

#[derive(Args, Debug, Clone)]
pub struct DensityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Degrees, as `d` or `a..b` (inclusive).
    #[arg(long, value_parser = parse_range)]
    pub d: RangeInclusive<usize>,
    /// The fraction S.
    #[arg(long, conflicts_with = "cm", required_unless_present = "cm")]
    pub s: Option<String>,
    /// CM catalog entry in place of S.
    #[arg(long)]
    pub cm: Option<String>,
    /// Which square-root branch of a CM entry to use.
    #[arg(long, default_value_t = 0)]
    pub branch: usize,
    #[arg(long, default_value_t = families::DEFAULT_DEPTH)]
    pub depth: usize,
    #[arg(long, default_value_t = families::DEFAULT_SAMPLES)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    /// Print the full lifespan histogram instead of the density.
    #[arg(long)]
    pub histogram: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Exhaustive when q^d is within the cap, sampled otherwise.
    Auto,
    Exact,
    Sampled,
}

#[derive(Args, Debug, Clone)]
pub struct CanonicalizeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub s: String,
}

#[derive(Args, Debug, Clone)]
pub struct TransformArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub s: String,
    #[arg(long)]
    pub f: String,
    #[arg(long, default_value_t = 3)]
    pub iters: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeedKind {
    Q,
    R,
}

#[derive(Args, Debug, Clone)]
pub struct SeedcheckArgs {
    #[arg(value_enum)]
    pub kind: SeedKind,
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub f: String,
}

#[derive(Args, Debug, Clone)]
pub struct CmReduceArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub cm: String,
}

pub fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad degree `{t}`: {e}"));
    let r = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.trim_start_matches('='))?,
        None => {
            let d = num(s)?;
            d..=d
        }
    };
    if r.is_empty() || *r.start() == 0 {
        return Err(format!("empty or zero degree range `{s}`"));
    }
    Ok(r)
}

/// What a command reports besides its output.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub truncated: bool,
}

pub fn run(cmd: &Command, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Verschiebung(a) => verschiebung(a, out),
        Command::Endo(a) => endo(a, out),
        Command::Density(a) => density(a, out),
        Command::Canonicalize(a) => canonicalize(a, out),
        Command::Transform(a) => transform(a, out),
        Command::Seedcheck(a) => seedcheck(a, out),
        Command::CmReduce(a) => cm_reduce(a, out),
    }
}

#[derive(Serialize)]
struct CandidateRecord {
    schema: u32,
    q: u32,
    degree: usize,
    fraction: String,
    orbit_size: usize,
    source: String,
    cyclic_square: bool,
    odd_degree: bool,
    curve: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    census: Option<usize>,
}

impl CandidateRecord {
    fn new(field: &Field, c: &CandidateFraction, census: Option<usize>) -> Self {
        CandidateRecord {
            schema: SCHEMA_VERSION,
            q: field.order(),
            degree: c.degree,
            fraction: c.fraction.to_string(),
            orbit_size: c.orbit_size,
            source: c.source.describe(field),
            cyclic_square: c.cyclic_square,
            odd_degree: c.odd_degree,
            curve: c.curve.to_string(),
            census,
        }
    }
}

#[derive(Serialize)]
struct CandidateCsv<'a> {
    q: u32,
    degree: usize,
    fraction: &'a str,
    orbit_size: usize,
    source: &'a str,
    cyclic_square: bool,
    odd_degree: bool,
}

fn write_candidates(format: Format, field: &Field, cands: &[CandidateFraction], census: Option<usize>, out: &mut dyn Write) -> Result<()> {
    let records: Vec<CandidateRecord> = cands.iter().map(|c| CandidateRecord::new(field, c, census)).collect();
    match format {
        Format::Human => {
            if let Some(n) = census {
                writeln!(out, "q={} N={}", field.order(), n)?;
            }
            for r in &records {
                writeln!(
                    out,
                    "{}  degree={} orbit={} cyclic_square={} source={}",
                    r.fraction, r.degree, r.orbit_size, r.cyclic_square, r.source
                )?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in &records {
                w.serialize(CandidateCsv {
                    q: r.q,
                    degree: r.degree,
                    fraction: &r.fraction,
                    orbit_size: r.orbit_size,
                    source: &r.source,
                    cyclic_square: r.cyclic_square,
                    odd_degree: r.odd_degree,
                })?;
            }
            w.flush()?;
        }
        Format::Json => {
            for r in &records {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
    }
    Ok(())
}

fn verschiebung(a: &VerschiebungArgs, out: &mut dyn Write) -> Result<Outcome> {
    let field = a.common.field()?;
    let census = endosearch::verschiebung_census(&field, a.common.cap)?;
    write_candidates(a.common.format, &field, &census.candidates, Some(census.n), out)?;
    Ok(Outcome::default())
}

fn endo(a: &EndoArgs, out: &mut dyn Write) -> Result<Outcome> {
    let field = a.common.field()?;
    if a.cycles {
        let r = endosearch::endo_cycle_search(&field, a.degmax, &a.primes, a.path_cap, a.common.cap)?;
        write_candidates(a.common.format, &field, &r.candidates, None, out)?;
        if r.truncated {
            eprintln!("warning: path budget of {} steps exhausted; output is partial", a.path_cap);
        }
        return Ok(Outcome { truncated: r.truncated });
    }
    let l = a.l.ok_or_else(|| anyhow!("either --l or --cycles is required"))?;
    let class = if a.supersingular { CurveClass::All } else { CurveClass::Ordinary };
    let cands = endosearch::endo_prime_search(&field, l, class, a.common.cap)?;
    write_candidates(a.common.format, &field, &cands, None, out)?;
    Ok(Outcome::default())
}

/// Resolves `--s` or `--cm` to a fraction over `field`.
pub fn resolve_fraction(field: &Field, s: Option<&str>, cm: Option<&str>, branch: usize) -> Result<RatFrac> {
    match (s, cm) {
        (Some(s), _) => Ok(RatFrac::parse(field, s)?),
        (None, Some(key)) => {
            let entry = cm_catalog::lookup(key).ok_or_else(|| anyhow!("unknown CM entry `{key}`"))?;
            let branches = entry.reduce_mod_q(field)?;
            let n = branches.len();
            branches.into_iter().nth(branch).ok_or_else(|| anyhow!("entry {key} has {n} branch(es) over F_{}", field.order()))
        }
        (None, None) => bail!("either --s or --cm is required"),
    }
}

/// Parallel evaluation with the same result as `families::density`.
pub fn density_report(s: &RatFrac, d: usize, depth: usize, mode: Mode, cap: u64) -> Result<DensityReport> {
    let field = s.field();
    let starts: Vec<Poly> = match mode {
        Mode::Exhaustive => lattes_core::poly::enumerate_monic_irreducible(field, d, cap)?.collect(),
        Mode::Sampled { n, seed } => (0..n)
            .into_par_iter()
            .map(|i| families::sample_polynomial(field, d, seed, i))
            .collect::<lattes_core::Result<_>>()?,
    };
    let steps: Vec<families::Steps> = starts
        .par_iter()
        .map(|f| families::lifespan(f, s, depth).map(|r| r.steps))
        .collect::<lattes_core::Result<_>>()?;
    let mut rep = DensityReport::new(s, d, depth, mode);
    for st in steps {
        rep.record(st);
    }
    Ok(rep)
}

/// A density cell as printed: `a/b` when exact, `0.xxxx~n=N` when sampled.
pub fn format_value(rep: &DensityReport, bucket: Option<usize>) -> String {
    let count = rep.histogram[bucket.unwrap_or(rep.depth)];
    match rep.mode {
        Mode::Exhaustive => num_rational_string(count, rep.total),
        Mode::Sampled { n, .. } => format!("{:.4}~n={}", count as f64 / rep.total.max(1) as f64, n),
    }
}

fn num_rational_string(num: u64, den: u64) -> String {
    if den == 0 {
        return "0".into();
    }
    let g = gcd(num, den);
    if den / g == 1 {
        format!("{}", num / g)
    } else {
        format!("{}/{}", num / g, den / g)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Exhaustive => "exact",
        Mode::Sampled { .. } => "sampled",
    }
}

#[derive(Serialize)]
struct DensityCsv {
    q: u32,
    d: usize,
    value: String,
    mode: &'static str,
    n: u64,
}

#[derive(Serialize)]
struct HistogramCsv {
    q: u32,
    d: usize,
    i: String,
    value: String,
    mode: &'static str,
    n: u64,
}

#[derive(Serialize)]
struct DensityJson {
    schema: u32,
    q: u32,
    d: usize,
    s: String,
    depth: usize,
    mode: &'static str,
    n: u64,
    value: String,
    estimate: f64,
    histogram: Vec<u64>,
}

fn density(a: &DensityArgs, out: &mut dyn Write) -> Result<Outcome> {
    let field = a.common.field()?;
    let s = resolve_fraction(&field, a.s.as_deref(), a.cm.as_deref(), a.branch)?;
    let reports: Vec<DensityReport> = a
        .d
        .clone()
        .map(|d| {
            let mode = match a.mode {
                ModeArg::Auto => families::auto_mode(&field, d, a.common.cap, a.samples, a.seed),
                ModeArg::Exact => Mode::Exhaustive,
                ModeArg::Sampled => Mode::Sampled { n: a.samples, seed: a.seed },
            };
            density_report(&s, d, a.depth, mode, a.common.cap).map_err(anyhow::Error::from)
        })
        .collect::<Result<_>>()?;
    let bucket_label = |i: usize, k: usize| if i == k { format!(">={k}") } else { i.to_string() };
    match a.common.format {
        Format::Human => {
            writeln!(out, "S = {} over F_{}, K = {}", s, field.order(), a.depth)?;
            for r in &reports {
                if a.histogram {
                    let cells: Vec<String> =
                        (0..=r.depth).map(|i| format!("{}: {}", bucket_label(i, r.depth), format_value(r, Some(i)))).collect();
                    writeln!(out, "d={}  {}", r.d, cells.join("  "))?;
                } else {
                    writeln!(out, "d={}  {}", r.d, format_value(r, None))?;
                }
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in &reports {
                if a.histogram {
                    for i in 0..=r.depth {
                        w.serialize(HistogramCsv {
                            q: r.q,
                            d: r.d,
                            i: bucket_label(i, r.depth),
                            value: format_value(r, Some(i)),
                            mode: mode_name(r.mode),
                            n: r.total,
                        })?;
                    }
                } else {
                    w.serialize(DensityCsv { q: r.q, d: r.d, value: format_value(r, None), mode: mode_name(r.mode), n: r.total })?;
                }
            }
            w.flush()?;
        }
        Format::Json => {
            for r in &reports {
                let rec = DensityJson {
                    schema: SCHEMA_VERSION,
                    q: r.q,
                    d: r.d,
                    s: s.to_string(),
                    depth: r.depth,
                    mode: mode_name(r.mode),
                    n: r.total,
                    value: format_value(r, None),
                    estimate: r.estimate(),
                    histogram: r.histogram.clone(),
                };
                writeln!(out, "{}", serde_json::to_string(&rec)?)?;
            }
        }
    }
    Ok(Outcome::default())
}

#[derive(Serialize)]
struct OrbitJson {
    schema: u32,
    q: u32,
    input: String,
    canonical: String,
    orbit_size: usize,
    degree: usize,
}

fn canonicalize(a: &CanonicalizeArgs, out: &mut dyn Write) -> Result<Outcome> {
    let field = a.common.field()?;
    let s = RatFrac::parse(&field, &a.s)?;
    let orbit = s.orbit(a.common.cap)?;
    let rec = OrbitJson {
        schema: SCHEMA_VERSION,
        q: field.order(),
        input: s.to_string(),
        canonical: orbit.canonical.to_string(),
        orbit_size: orbit.members.len(),
        degree: s.map_degree(),
    };
    match a.common.format {
        Format::Human => writeln!(out, "{}  orbit={} degree={}", rec.canonical, rec.orbit_size, rec.degree)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["q", "input", "canonical", "orbit_size", "degree"])?;
            w.write_record([rec.q.to_string(), rec.input, rec.canonical, rec.orbit_size.to_string(), rec.degree.to_string()])?;
            w.flush()?;
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string(&rec)?)?,
    }
    Ok(Outcome::default())
}

#[derive(Serialize)]
struct StepJson {
    schema: u32,
    step: usize,
    degree: usize,
    irreducible: bool,
    poly: String,
}

fn transform(a: &TransformArgs, out: &mut dyn Write) -> Result<Outcome> {
    let field = a.common.field()?;
    let s = RatFrac::parse(&field, &a.s)?;
    let mut f = Poly::parse(&field, &a.f)?;
    let mut rows = Vec::new();
    for step in 0..=a.iters {
        if step > 0 {
            f = s.ts_transform(&f)?;
        }
        rows.push(StepJson {
            schema: SCHEMA_VERSION,
            step,
            degree: f.degree().unwrap_or(0),
            irreducible: f.is_irreducible().unwrap_or(false),
            poly: f.to_string(),
        });
    }
    match a.common.format {
        Format::Human => {
            for r in &rows {
                writeln!(out, "step {}  degree {}  {}", r.step, r.degree, if r.irreducible { "irreducible" } else { "reducible" })?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["step", "degree", "irreducible"])?;
            for r in &rows {
                w.write_record([r.step.to_string(), r.degree.to_string(), r.irreducible.to_string()])?;
            }
            w.flush()?;
        }
        Format::Json => {
            for r in &rows {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
    }
    Ok(Outcome::default())
}

fn seedcheck(a: &SeedcheckArgs, out: &mut dyn Write) -> Result<Outcome> {
    let field = a.common.field()?;
    let f = Poly::parse(&field, &a.f)?;
    let ok = match a.kind {
        SeedKind::Q => families::q_seed_check(&f)?,
        SeedKind::R => families::r_seed_check(&f)?,
    };
    match a.common.format {
        Format::Json => writeln!(out, "{}", serde_json::json!({ "schema": SCHEMA_VERSION, "f": f.to_string(), "seed": ok }))?,
        _ => writeln!(out, "{ok}")?,
    }
    Ok(Outcome::default())
}

fn cm_reduce(a: &CmReduceArgs, out: &mut dyn Write) -> Result<Outcome> {
    let field = a.common.field()?;
    let entry = cm_catalog::lookup(&a.cm).ok_or_else(|| anyhow!("unknown CM entry `{}`", a.cm))?;
    let curve = entry.reduce_curve(&field)?;
    let branches = entry.reduce_mod_q(&field)?;
    match a.common.format {
        Format::Json => {
            let fr: Vec<String> = branches.iter().map(|b| b.to_string()).collect();
            writeln!(
                out,
                "{}",
                serde_json::json!({ "schema": SCHEMA_VERSION, "entry": entry.name, "q": field.order(), "curve": curve.to_string(), "branches": fr })
            )?;
        }
        _ => {
            writeln!(out, "curve {curve}")?;
            for b in &branches {
                writeln!(out, "{b}")?;
            }
        }
    }
    Ok(Outcome::default())
}
