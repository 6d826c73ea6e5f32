//! Command-line front end: classification, Streit inner products,
//! quotient equations, Frobenius pipelines, and CM verdicts, with a
//! persistent point-count cache.
//!
//! Exit codes: 0 success / all verdicts match, 1 verdict mismatch,
//! 2 inconclusive verdict present, 3 usage error.

mod cache;

use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cache::{poly_hash, CountCache};
use manyauto::cmcrit::{
    default_primes, frobenius_at_prime_obs, frobenius_evidence_obs, verdict_obs, CMVerdict,
    CountObserver, Evidence, FrobeniusOptions, Verdict,
};
use manyauto::curves::{curve_by_id, family_curve, CurveSpec};
use manyauto::quotient::{
    expected_quotient_genus, hbar_label, j_invariant_for, quotient_for, rational_quotient_poly,
};
use manyauto::streit::{sym2_class_values, sym2_inner_product};

/// Empirically calibrated counting speed, for ETA display only.
const POINTS_PER_SEC: f64 = 9.0e5;
const Q_LIMIT_MAX: u64 = 1_000_000_000;
const DEFAULT_CACHE: &str = ".manyauto-cache.jsonl";
const CACHE_ENV: &str = "MANYAUTO_CACHE";

#[derive(Parser)]
#[command(
    name = "manyauto",
    version,
    about = "Hyperelliptic curves with many automorphisms: classification and CM verdicts"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(clap::Args)]
struct CountingArgs {
    /// Comma-separated primes; defaults to the per-curve reference primes.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Search further odd good primes when the given ones do not certify.
    #[arg(long)]
    auto: bool,
    /// Maximum number of primes examined during a search.
    #[arg(long, default_value_t = 25)]
    budget: usize,
    /// Largest field size q = p^g allowed for counting (<= 10^9).
    #[arg(long, default_value_t = Q_LIMIT_MAX)]
    qlimit: u64,
    /// Worker threads for per-prime counting.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Count-cache path; MANYAUTO_CACHE overrides the default.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Disable the on-disk cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// The 18-row classification table, optionally materializing the
    /// genus-parameterized families X1-X3.
    Classify {
        /// Genus or inclusive range (e.g. 3 or 2..5) for X1-X3.
        #[arg(long)]
        genus: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Streit's character criterion for one curve.
    Streit {
        id: String,
        /// Genus at which to materialize X1-X3.
        #[arg(long)]
        genus: Option<usize>,
    },
    /// Quotient-curve equation H\X for one curve.
    Quotient { id: String },
    /// Frobenius characteristic-polynomial pipeline for one curve.
    Frobenius {
        id: String,
        #[command(flatten)]
        counting: CountingArgs,
    },
    /// CM verdict for one curve or for `all`.
    Verdict {
        id: String,
        #[command(flatten)]
        counting: CountingArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are not usage errors
            use clap::error::ErrorKind::*;
            let _ = e.print();
            match e.kind() {
                DisplayHelp | DisplayVersion => std::process::exit(0),
                _ => std::process::exit(3),
            }
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(3)
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Classify { genus, format } => cmd_classify(genus.as_deref(), format),
        Cmd::Streit { id, genus } => cmd_streit(&id, genus),
        Cmd::Quotient { id } => cmd_quotient(&id),
        Cmd::Frobenius { id, counting } => cmd_frobenius(&id, &counting),
        Cmd::Verdict {
            id,
            counting,
            format,
        } => cmd_verdict(&id, &counting, format),
    }
}

// ---------------------------------------------------------------- classify

struct Row {
    id: &'static str,
    gbar: &'static str,
    genus: &'static str,
    equation: &'static str,
    aut: &'static str,
    cm: &'static str,
}

/// The classification table; CM column carried as the reference the
/// verdict command must reproduce.
const TABLE: [Row; 18] = [
    Row { id: "X1", gbar: "C_{2g+1}", genus: "g >= 2", equation: "y^2 = x^(2g+1) - 1", aut: "C_{4g+2}", cm: "CM" },
    Row { id: "X2", gbar: "D_{2g+2}", genus: "g >= 2", equation: "y^2 = x^(2g+2) - 1", aut: "V_{2g+2}", cm: "CM" },
    Row { id: "X3", gbar: "D_{2g}", genus: "g >= 3", equation: "y^2 = x^(2g+1) - x", aut: "U_{2g}", cm: "CM" },
    Row { id: "X4", gbar: "A4", genus: "4", equation: "y^2 = t4 * p4", aut: "SL2(3)", cm: "CM" },
    Row { id: "X5", gbar: "S4", genus: "2", equation: "y^2 = t4", aut: "GL2(3)", cm: "CM" },
    Row { id: "X6", gbar: "S4", genus: "3", equation: "y^2 = s4", aut: "C2xS4", cm: "no CM" },
    Row { id: "X7", gbar: "S4", genus: "5", equation: "y^2 = r4", aut: "W2", cm: "CM" },
    Row { id: "X8", gbar: "S4", genus: "6", equation: "y^2 = s4 * t4", aut: "GL2(3)", cm: "no CM" },
    Row { id: "X9", gbar: "S4", genus: "8", equation: "y^2 = r4 * t4", aut: "W3", cm: "CM" },
    Row { id: "X10", gbar: "S4", genus: "9", equation: "y^2 = r4 * s4", aut: "W2", cm: "no CM" },
    Row { id: "X11", gbar: "S4", genus: "12", equation: "y^2 = r4 * s4 * t4", aut: "W3", cm: "no CM" },
    Row { id: "X12", gbar: "A5", genus: "5", equation: "y^2 = s5", aut: "C2xA5", cm: "no CM" },
    Row { id: "X13", gbar: "A5", genus: "9", equation: "y^2 = r5", aut: "C2xA5", cm: "no CM" },
    Row { id: "X14", gbar: "A5", genus: "14", equation: "y^2 = t5", aut: "SL2(5)", cm: "CM" },
    Row { id: "X15", gbar: "A5", genus: "15", equation: "y^2 = r5 * s5", aut: "C2xA5", cm: "no CM" },
    Row { id: "X16", gbar: "A5", genus: "20", equation: "y^2 = s5 * t5", aut: "SL2(5)", cm: "no CM" },
    Row { id: "X17", gbar: "A5", genus: "24", equation: "y^2 = r5 * t5", aut: "SL2(5)", cm: "no CM" },
    Row { id: "X18", gbar: "A5", genus: "30", equation: "y^2 = r5 * s5 * t5", aut: "SL2(5)", cm: "no CM" },
];

fn expected_cm(id: &str) -> &'static str {
    TABLE.iter().find(|r| r.id == id).map(|r| r.cm).unwrap()
}

fn parse_genus_range(s: &str) -> Result<(usize, usize)> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().context("bad genus range")?;
        let hi: usize = hi.trim().parse().context("bad genus range")?;
        if lo < 2 || hi < lo {
            bail!("genus range must satisfy 2 <= lo <= hi");
        }
        Ok((lo, hi))
    } else {
        let g: usize = s.trim().parse().context("bad genus")?;
        if g < 2 {
            bail!("genus must be >= 2");
        }
        Ok((g, g))
    }
}

fn cmd_classify(genus: Option<&str>, format: Format) -> Result<i32> {
    let range = genus.map(parse_genus_range).transpose()?;
    // materialized family rows for the requested range
    let mut family_rows: Vec<CurveSpec> = vec![];
    if let Some((lo, hi)) = range {
        for id in ["X1", "X2", "X3"] {
            for g in lo..=hi {
                if let Ok(c) = family_curve(id, g) {
                    family_rows.push(c);
                }
            }
        }
    }
    match format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = TABLE
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "id": r.id,
                        "reduced_group": r.gbar,
                        "genus": r.genus,
                        "equation": r.equation,
                        "automorphism_group": r.aut,
                    })
                })
                .collect();
            let materialized: Vec<serde_json::Value> =
                family_rows.iter().map(|c| c.to_json()).collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "rows": rows,
                    "materialized_families": materialized,
                }))?
            );
        }
        Format::Csv => {
            println!("id,reduced_group,genus,equation,automorphism_group");
            for r in &TABLE {
                println!(
                    "{},{},{},{},{}",
                    r.id,
                    r.gbar,
                    r.genus.replace(' ', ""),
                    r.equation.replace(' ', ""),
                    r.aut
                );
            }
            for c in &family_rows {
                println!(
                    "{},{},{},{},{}",
                    c.id,
                    c.group,
                    c.genus,
                    family_equation(&c.id, c.genus),
                    c.aut_label
                );
            }
        }
        Format::Table => {
            println!(
                "{:<4} {:<9} {:<7} {:<22} {:<8}",
                "X", "Gbar", "genus", "equation", "G"
            );
            for r in &TABLE {
                println!(
                    "{:<4} {:<9} {:<7} {:<22} {:<8}",
                    r.id, r.gbar, r.genus, r.equation, r.aut
                );
            }
            for c in &family_rows {
                println!(
                    "{:<4} {:<9} {:<7} {:<22} {:<8}",
                    c.id,
                    c.group.to_string(),
                    c.genus,
                    family_equation(&c.id, c.genus),
                    c.aut_label
                );
            }
        }
    }
    Ok(0)
}

fn family_equation(id: &str, g: usize) -> String {
    match id {
        "X1" => format!("y^2 = x^{} - 1", 2 * g + 1),
        "X2" => format!("y^2 = x^{} - 1", 2 * g + 2),
        "X3" => format!("y^2 = x^{} - x", 2 * g + 1),
        _ => unreachable!(),
    }
}

// ------------------------------------------------------------------ streit

fn cmd_streit(id: &str, genus: Option<usize>) -> Result<i32> {
    let curve = curve_by_id(id, genus).map_err(|e| anyhow!("{e}"))?;
    let inner = sym2_inner_product(&curve).map_err(|e| anyhow!("{e}"))?;
    let classes = sym2_class_values(&curve).map_err(|e| anyhow!("{e}"))?;
    let per_class: Vec<serde_json::Value> = classes
        .iter()
        .map(|(order, value, count)| {
            serde_json::json!({
                "element_order": order,
                "sym2_value": value,
                "count": count,
            })
        })
        .collect();
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({
            "curve": curve.to_json(),
            "inner_product": inner.to_string(),
            "per_class_values": per_class,
        }))?
    );
    Ok(0)
}

// ---------------------------------------------------------------- quotient

fn cmd_quotient(id: &str) -> Result<i32> {
    let hbar = hbar_label(id)
        .ok_or_else(|| anyhow!("{id} has no designated quotient (rows X6, X8, X10-X13, X15-X18)"))?;
    let out = quotient_for(id).map_err(|e| anyhow!("{e}"))?;
    let genus = out.genus;
    debug_assert_eq!(Some(genus), expected_quotient_genus(id));
    let coeffs: Vec<String> = (0..=out.selected.degree().unwrap_or(0))
        .map(|i| format!("{:?}", out.selected.coeff(i)))
        .collect();
    let mut report = serde_json::json!({
        "curve": id,
        "Hbar": hbar,
        "quotient_poly": coeffs,
        "genus": genus,
    });
    if genus == 1 {
        let j = j_invariant_for(id).map_err(|e| anyhow!("{e}"))?;
        report["j_invariant"] = serde_json::json!(format!("{j:?}"));
        report["j_minpoly"] = serde_json::json!(j
            .minimal_polynomial()
            .coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>());
        report["j_integral"] = serde_json::json!(j.is_algebraic_integer());
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(0)
}

// --------------------------------------------------------------- frobenius

fn open_cache(args: &CountingArgs) -> Result<CountCache> {
    if args.no_cache {
        return Ok(CountCache::in_memory());
    }
    let path = args
        .cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE));
    CountCache::open(path)
}

fn frobenius_options(args: &CountingArgs) -> Result<FrobeniusOptions> {
    if args.qlimit > Q_LIMIT_MAX {
        bail!("--qlimit must be <= {Q_LIMIT_MAX}");
    }
    if args.budget == 0 {
        bail!("--budget must be positive");
    }
    Ok(FrobeniusOptions {
        primes: args.primes.clone(),
        auto: args.auto,
        budget: args.budget,
        qlimit: args.qlimit,
    })
}

/// Progress display plus cache read-through for one curve model.
struct CliObserver<'a> {
    id: String,
    hash: u64,
    cache: &'a mut CountCache,
    started: Instant,
}

impl<'a> CliObserver<'a> {
    fn new(id: &str, cache: &'a mut CountCache) -> Option<CliObserver<'a>> {
        let fbar = rational_quotient_poly(id)?;
        Some(CliObserver {
            id: id.to_string(),
            hash: poly_hash(&fbar),
            cache,
            started: Instant::now(),
        })
    }
}

impl CountObserver for CliObserver<'_> {
    fn progress(&mut self, p: u64, k: usize, q: u64) {
        eprintln!(
            "[{} +{:.0?}] counting over F_{{{p}^{k}}} (q = {q}, est. {:.0}s)",
            self.id,
            self.started.elapsed(),
            q as f64 / POINTS_PER_SEC
        );
    }
    fn lookup(&mut self, p: u64, k: usize) -> Option<u64> {
        let hit = self.cache.get(self.hash, p, k);
        if hit.is_some() {
            eprintln!("[{}] cache hit for F_{{{p}^{k}}}", self.id);
        }
        hit
    }
    fn store(&mut self, p: u64, k: usize, n: u64) {
        self.cache.put(self.hash, p, k, n);
    }
}

/// Thread-safe observer used to warm the cache from parallel workers.
struct SharedObserver<'a> {
    id: String,
    hash: u64,
    cache: &'a Mutex<CountCache>,
}

impl CountObserver for SharedObserver<'_> {
    fn progress(&mut self, p: u64, k: usize, q: u64) {
        eprintln!(
            "[{}] counting over F_{{{p}^{k}}} (q = {q}, est. {:.0}s)",
            self.id,
            q as f64 / POINTS_PER_SEC
        );
    }
    fn lookup(&mut self, p: u64, k: usize) -> Option<u64> {
        self.cache.lock().unwrap().get(self.hash, p, k)
    }
    fn store(&mut self, p: u64, k: usize, n: u64) {
        self.cache.lock().unwrap().put(self.hash, p, k, n);
    }
}

/// Fan per-prime pipelines out over `jobs` threads, filling the cache so
/// the subsequent sequential assembly only reads it.
fn warm_cache(id: &str, opts: &FrobeniusOptions, jobs: usize, cache: CountCache) -> CountCache {
    let primes: Vec<u64> = match (&opts.primes, default_primes(id)) {
        (Some(ps), _) => ps.clone(),
        (None, Some(ps)) => ps.to_vec(),
        (None, None) => vec![],
    };
    let (fbar, gbar) = match (rational_quotient_poly(id), expected_quotient_genus(id)) {
        (Some(f), Some(g)) => (f, g),
        _ => return cache,
    };
    if primes.len() < 2 || jobs < 2 {
        return cache;
    }
    let hash = poly_hash(&fbar);
    let shared = Mutex::new(cache);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| {
        use rayon::prelude::*;
        primes.par_iter().for_each(|&p| {
            let mut obs = SharedObserver {
                id: id.to_string(),
                hash,
                cache: &shared,
            };
            // errors resurface with diagnostics in the sequential pass
            let _ = frobenius_at_prime_obs(id, &fbar, gbar, p, opts.qlimit, &mut obs);
        });
    });
    shared.into_inner().unwrap()
}

fn cmd_frobenius(id: &str, args: &CountingArgs) -> Result<i32> {
    if rational_quotient_poly(id).is_none() {
        bail!("{id} is not Frobenius-routed (rows X10, X11, X16, X17, X18)");
    }
    let opts = frobenius_options(args)?;
    let mut cache = open_cache(args)?;
    cache = warm_cache(id, &opts, args.jobs, cache);
    let mut obs = CliObserver::new(id, &mut cache).unwrap();
    let (verdict, evidence) = frobenius_evidence_obs(id, &opts, &mut obs).map_err(|e| anyhow!("{e}"))?;
    let Evidence::Frobenius {
        data,
        outcome,
        simple,
        notes,
    } = &evidence
    else {
        bail!("unexpected evidence shape");
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({
            "curve": id,
            "data": data.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
            "verdict": verdict.as_str(),
            "product": outcome.product.to_string(),
            "bound": outcome.bound.to_string(),
            "compositum": outcome.compositum.iter()
                .map(|(a, b, d)| serde_json::json!([a, b, d])).collect::<Vec<_>>(),
            "jacobian_simple": simple,
            "notes": notes,
            "diagnostics": outcome.diagnostics,
        }))?
    );
    Ok(match verdict {
        Verdict::Inconclusive => 2,
        _ => 0,
    })
}

// ----------------------------------------------------------------- verdict

fn verdict_for(id: &str, opts: &FrobeniusOptions, cache: &mut CountCache) -> Result<CMVerdict> {
    let curve = curve_by_id(id, None).map_err(|e| anyhow!("{e}"))?;
    Ok(match CliObserver::new(id, cache) {
        Some(mut obs) => verdict_obs(&curve, opts, &mut obs),
        None => verdict_obs(&curve, opts, &mut manyauto::cmcrit::NoObserver),
    })
}

fn x18_substituted(v: &CMVerdict) -> bool {
    match &v.evidence {
        Evidence::Frobenius { notes, .. } => notes.iter().any(|n| n.contains("out of desk scale")),
        _ => false,
    }
}

fn cmd_verdict(id: &str, args: &CountingArgs, format: Format) -> Result<i32> {
    let opts = frobenius_options(args)?;
    let ids: Vec<&str> = if id == "all" {
        TABLE.iter().map(|r| r.id).collect()
    } else {
        if !TABLE.iter().any(|r| r.id == id) {
            bail!("unknown curve id {id}");
        }
        vec![TABLE.iter().find(|r| r.id == id).unwrap().id]
    };
    let mut cache = open_cache(args)?;
    for one in &ids {
        cache = warm_cache(one, &opts, args.jobs, cache);
    }
    let mut verdicts = vec![];
    for one in &ids {
        eprintln!("deciding {one} ...");
        verdicts.push(verdict_for(one, &opts, &mut cache)?);
    }
    let mut mismatch = false;
    let mut inconclusive = false;
    for v in &verdicts {
        match v.verdict {
            Verdict::Inconclusive => inconclusive = true,
            Verdict::Cm if expected_cm(&v.id) != "CM" => mismatch = true,
            Verdict::NoCm if expected_cm(&v.id) != "no CM" => mismatch = true,
            _ => {}
        }
    }
    match format {
        Format::Json | Format::Csv => {
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "verdicts": verdicts.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
                }))?
            );
        }
        Format::Table => {
            println!(
                "{:<4} {:<9} {:<7} {:<22} {:<8} {:<12} {}",
                "X", "Gbar", "genus", "equation", "G", "Jac(X) has", "method"
            );
            for v in &verdicts {
                let row = TABLE.iter().find(|r| r.id == v.id).unwrap();
                let mut shown = match v.verdict {
                    Verdict::Cm => "CM".to_string(),
                    Verdict::NoCm => "no CM".to_string(),
                    Verdict::Inconclusive => "inconclusive".to_string(),
                };
                if v.id == "X18" && x18_substituted(v) {
                    shown.push_str(" (*)");
                }
                println!(
                    "{:<4} {:<9} {:<7} {:<22} {:<8} {:<12} {}",
                    row.id,
                    row.gbar,
                    row.genus,
                    row.equation,
                    row.aut,
                    shown,
                    v.method.as_str()
                );
            }
            if verdicts.iter().any(|v| v.id == "X18" && x18_substituted(v)) {
                println!(
                    "(*) X18: reference primes 131 and 211 are out of desk scale; \
                     the verdict uses substitute primes <= 31"
                );
            }
        }
    }
    Ok(if mismatch {
        1
    } else if inconclusive {
        2
    } else {
        0
    })
}
