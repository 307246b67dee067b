//! `s2sq` — drive the sum-of-two-squares race experiments from the shell.
//!
//! Exit codes: 0 success, 2 usage, 3 resource, 4 precision, 5
//! internal-consistency failure (e.g. a dual-sieve mismatch).

mod config;
mod emit;
mod svg;

use clap::{Parser, Subcommand};
use config::{load_file, parse_pair, RunConfig, CACHE_DIR_ENV};
use emit::SieveSource;
use s2sq::characters::{build_group, chi_minus4};
use s2sq::constants;
use s2sq::lfunc;
use s2sq::race::{self, Weight};
use s2sq::sieve::{self, SieveBlock};
use serde::Serialize;
use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(s2sq::Error),
    Consistency(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Consistency(msg) => write!(f, "consistency failure: {msg}"),
        }
    }
}

impl From<s2sq::Error> for CliError {
    fn from(e: s2sq::Error) -> Self {
        CliError::Core(e)
    }
}

fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Usage(_) => 2,
        CliError::Consistency(_) => 5,
        CliError::Core(err) => match err {
            s2sq::Error::InvalidModulus | s2sq::Error::Domain(_) => 2,
            s2sq::Error::Resource(_) | s2sq::Error::Cache(_) | s2sq::Error::Io(_) => 3,
            s2sq::Error::Pole(_) | s2sq::Error::Precision { .. } => 4,
            s2sq::Error::NegativeLProduct(_) => 5,
        },
    }
}

#[derive(Parser)]
#[command(
    name = "s2sq",
    version,
    about = "Residue-class races for sums of two squares: sieves, L-values, bias constants"
)]
struct Cli {
    /// key=value config file; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// sieve cache directory (default $S2SQ_CACHE_DIR or .s2sq-cache)
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// output directory for CSV/JSON/SVG reports
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// sieve segment length (rounded up to a multiple of 64)
    #[arg(long, global = true)]
    segment_len: Option<u64>,
    /// worker threads for the sieve pool
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// L-value evaluation tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the character table modulo q as CSV
    Chars {
        #[arg(long)]
        modulus: u64,
    },
    /// Evaluate L(s, χ) for one character, with a persistent value cache
    Lvalue {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        char_index: usize,
        #[arg(long)]
        s: f64,
    },
    /// Landau–Ramanujan constant, Γ(1/4), C_q and race constants as JSON
    Constants {
        #[arg(long)]
        modulus: u64,
        /// residue pair a,b for C_{q,a,b} (or D_{q,a,b} with --omega)
        #[arg(long)]
        pair: Option<String>,
        /// compute the ω-race constant D_{q,a,b} instead of C_{q,a,b}
        #[arg(long)]
        omega: bool,
        #[arg(long, default_value_t = constants::DEFAULT_K_MAX)]
        k_max: u32,
    },
    /// Sieve [1, N] and store the block cache
    Sieve {
        #[arg(long)]
        limit: Option<u64>,
        /// split the range into this many segments
        #[arg(long)]
        segments: Option<u64>,
        /// alias for --cache-dir
        #[arg(long, value_name = "DIR")]
        cache: Option<PathBuf>,
    },
    /// Race residue classes a vs b modulo q
    Race {
        #[arg(long)]
        modulus: u64,
        /// residue pair a,b (repeatable)
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
        #[arg(long)]
        limit: Option<u64>,
        /// indicator-s (default), omega, or big-omega
        #[arg(long)]
        weight: Option<String>,
        #[arg(long)]
        stride: Option<u64>,
        /// also emit an SVG plot per pair
        #[arg(long)]
        svg: bool,
    },
    /// Lead densities for all published mod-15 pairs
    Table2 {
        #[arg(long)]
        limit: Option<u64>,
    },
    /// The ω/Ω races (default modulus 4, pair 1,3)
    Martin {
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long)]
        pair: Option<String>,
    },
    /// The mod-3 difference series at plot density, with SVG
    Figure3 {
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Check the generating-function identity at Euler factors
    VerifyIdentity {
        #[arg(long, default_value_t = 2.0)]
        s: f64,
        #[arg(long, default_value_t = 100)]
        p_max: u64,
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long)]
        char_index: Option<usize>,
    },
    /// Run the full desk-scale reproduction and write every report
    Report {
        #[arg(long)]
        limit: Option<u64>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Ok(dir) = std::env::var(CACHE_DIR_ENV) {
        if !dir.is_empty() {
            cfg.cache_dir = PathBuf::from(dir);
        }
    }
    if let Some(path) = &cli.config {
        let file = load_file(path)?;
        if let Some(v) = file.limit {
            cfg.limit = v;
        }
        if let Some(v) = file.modulus {
            cfg.modulus = Some(v);
        }
        if let Some(v) = file.pairs {
            cfg.pairs = v;
        }
        if let Some(v) = file.weight {
            cfg.weight = v;
        }
        if let Some(v) = file.segment_len {
            cfg.segment_len = v;
        }
        if let Some(v) = file.workers {
            cfg.workers = Some(v);
        }
        if let Some(v) = file.cache_dir {
            cfg.cache_dir = v;
        }
        if let Some(v) = file.out_dir {
            cfg.out_dir = v;
        }
        if let Some(v) = file.tol {
            cfg.tol = v;
        }
        if let Some(v) = file.stride {
            cfg.stride = Some(v);
        }
    }
    if let Some(v) = &cli.cache_dir {
        cfg.cache_dir = v.clone();
    }
    if let Some(v) = &cli.out_dir {
        cfg.out_dir = v.clone();
    }
    if let Some(v) = cli.segment_len {
        cfg.segment_len = v;
    }
    if let Some(v) = cli.workers {
        cfg.workers = Some(v);
    }
    if let Some(v) = cli.tol {
        cfg.tol = v;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let t0 = Instant::now();
    let mut cfg = resolve_config(&cli)?;
    if let Some(n) = cfg.workers {
        if let Err(e) = sieve::set_worker_threads(n) {
            eprintln!("warning: {e}");
        }
    }
    match &cli.cmd {
        Cmd::Chars { modulus } => cmd_chars(*modulus),
        Cmd::Lvalue {
            modulus,
            char_index,
            s,
        } => cmd_lvalue(&cfg, *modulus, *char_index, *s),
        Cmd::Constants {
            modulus,
            pair,
            omega,
            k_max,
        } => cmd_constants(*modulus, pair.as_deref(), *omega, *k_max),
        Cmd::Sieve {
            limit,
            segments,
            cache,
        } => {
            if let Some(v) = limit {
                cfg.limit = *v;
            }
            if let Some(dir) = cache {
                cfg.cache_dir = dir.clone();
            }
            if let Some(k) = segments {
                if *k == 0 {
                    return Err(CliError::Usage("--segments must be positive".into()));
                }
                cfg.segment_len = cfg.limit.div_ceil(*k);
            }
            cfg.validate()?;
            cmd_sieve(&cfg, t0)
        }
        Cmd::Race {
            modulus,
            pairs,
            limit,
            weight,
            stride,
            svg,
        } => {
            cfg.modulus = Some(*modulus);
            cfg.pairs = pairs
                .iter()
                .map(|p| parse_pair(p))
                .collect::<Result<_, _>>()?;
            if let Some(v) = limit {
                cfg.limit = *v;
            }
            if let Some(w) = weight {
                cfg.weight = w.parse().map_err(CliError::Usage)?;
            }
            if let Some(v) = stride {
                cfg.stride = Some(*v);
            }
            cfg.validate()?;
            cmd_race(&cfg, *svg, t0)
        }
        Cmd::Table2 { limit } => {
            if let Some(v) = limit {
                cfg.limit = *v;
            }
            cfg.modulus = Some(15);
            cfg.validate()?;
            cmd_table2(&cfg, t0)
        }
        Cmd::Martin {
            limit,
            modulus,
            pair,
        } => {
            if let Some(v) = limit {
                cfg.limit = *v;
            }
            cfg.modulus = Some(modulus.unwrap_or(4));
            cfg.pairs = vec![match pair {
                Some(p) => parse_pair(p)?,
                None => (1, 3),
            }];
            cfg.validate()?;
            cmd_martin(&cfg, t0)
        }
        Cmd::Figure3 { limit } => {
            if let Some(v) = limit {
                cfg.limit = *v;
            }
            cfg.modulus = Some(3);
            cfg.pairs = vec![(1, 2)];
            cfg.validate()?;
            cmd_figure3(&cfg, t0)
        }
        Cmd::VerifyIdentity {
            s,
            p_max,
            modulus,
            char_index,
        } => cmd_verify_identity(*s, *p_max, *modulus, *char_index),
        Cmd::Report { limit } => {
            if let Some(v) = limit {
                cfg.limit = *v;
            }
            cfg.validate()?;
            cmd_report(&cfg, t0)
        }
    }
}

// ─────────────────────────────────────────────── sieve data acquisition ──

fn cache_path(cfg: &RunConfig) -> PathBuf {
    cfg.cache_dir.join(format!("sieve-{}.s2sq", cfg.limit))
}

/// Load the sieve for `[1, limit]` from cache, or compute and cache it.
fn load_or_sieve(cfg: &RunConfig) -> Result<(Vec<SieveBlock>, SieveSource, f64), CliError> {
    let t0 = Instant::now();
    let path = cache_path(cfg);
    if path.is_file() {
        match sieve::cache::load(&path) {
            Ok(block) if block.lo() == 1 && block.hi() == cfg.limit + 1 => {
                return Ok((vec![block], SieveSource::Cache, t0.elapsed().as_secs_f64()));
            }
            Ok(_) => eprintln!(
                "cache {} covers a different range; recomputing",
                path.display()
            ),
            Err(e) => eprintln!("ignoring unusable cache {}: {e}", path.display()),
        }
    }
    let blocks = sieve::sieve_range(cfg.limit, cfg.segment_len)?;
    let merged = sieve::merge_blocks(blocks)?;
    if std::fs::create_dir_all(&cfg.cache_dir).is_ok() {
        if let Err(e) = sieve::cache::store(&merged, &path) {
            eprintln!("warning: could not write cache {}: {e}", path.display());
        }
    }
    Ok((
        vec![merged],
        SieveSource::Computed,
        t0.elapsed().as_secs_f64(),
    ))
}

// ──────────────────────────────────────────────────────── subcommands ──

fn cmd_chars(modulus: u64) -> Result<(), CliError> {
    let group = build_group(modulus)?;
    print!("{}", emit::characters_csv(&group));
    Ok(())
}

fn cmd_lvalue(cfg: &RunConfig, modulus: u64, char_index: usize, s: f64) -> Result<(), CliError> {
    let group = build_group(modulus)?;
    let chi = group.get(char_index).ok_or_else(|| {
        CliError::Usage(format!(
            "char index {char_index} out of range (φ({modulus}) = {})",
            group.order()
        ))
    })?;
    let key_s = format!("{s}");
    let cache_file = cfg.cache_dir.join("lvalues.csv");
    if let Ok(text) = std::fs::read_to_string(&cache_file) {
        let mut hit = None;
        for line in text.lines().skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() == 6
                && fields[0] == modulus.to_string()
                && fields[1] == char_index.to_string()
                && fields[2] == key_s
            {
                if let Ok(bound) = fields[5].parse::<f64>() {
                    if bound <= cfg.tol {
                        hit = Some(line.to_string());
                    }
                }
            }
        }
        if let Some(line) = hit {
            println!("modulus,char_index,s,value_re,value_im,error_bound");
            println!("{line}");
            return Ok(());
        }
    }
    let result = lfunc::l_value(chi, s, cfg.tol)?;
    let line = format!(
        "{modulus},{char_index},{key_s},{},{},{:e}",
        result.value_re, result.value_im, result.error_bound
    );
    if std::fs::create_dir_all(&cfg.cache_dir).is_ok() {
        let mut contents = std::fs::read_to_string(&cache_file)
            .unwrap_or_else(|_| "modulus,char_index,s,value_re,value_im,error_bound\n".into());
        contents.push_str(&line);
        contents.push('\n');
        let _ = std::fs::write(&cache_file, contents);
    }
    println!("modulus,char_index,s,value_re,value_im,error_bound");
    println!("{line}");
    Ok(())
}

#[derive(Serialize)]
struct MainTermRow {
    char_index: usize,
    coefficient: f64,
    two_routes_residual: f64,
}

#[derive(Serialize)]
struct PairConstants {
    constant: constants::BiasConstant,
    primitive_variant: constants::BiasConstant,
}

#[derive(Serialize)]
struct ConstantsReport {
    modulus: u64,
    k_max: u32,
    landau_ramanujan: f64,
    gamma_quarter: f64,
    c_q: f64,
    /// Per real non-principal character: main-term coefficient and the
    /// two-routes residual.
    main_term: Vec<MainTermRow>,
    pair: Option<PairConstants>,
}

fn constants_report(
    modulus: u64,
    pair: Option<(u64, u64)>,
    omega: bool,
    k_max: u32,
) -> Result<ConstantsReport, CliError> {
    let group = build_group(modulus)?;
    let mut main_term = Vec::new();
    for (char_index, chi) in group.characters().iter().enumerate() {
        // only characters that can carry a main term: real, non-principal,
        // and with a non-principal mod-4 twist
        if chi.is_real() && !chi.is_principal() && !chi.twist_minus4().is_principal() {
            let (coefficient, two_routes_residual) =
                constants::main_term_coefficient(modulus, chi)?;
            main_term.push(MainTermRow {
                char_index,
                coefficient,
                two_routes_residual,
            });
        }
    }
    let pair = match pair {
        None => None,
        Some((a, b)) => Some(if omega {
            PairConstants {
                constant: constants::d_qab(modulus, a, b)?,
                primitive_variant: constants::d_qab_primitive(modulus, a, b)?,
            }
        } else {
            PairConstants {
                constant: constants::c_qab(modulus, a, b)?,
                primitive_variant: constants::c_qab_primitive(modulus, a, b)?,
            }
        }),
    };
    Ok(ConstantsReport {
        modulus,
        k_max,
        landau_ramanujan: constants::landau_ramanujan(k_max)?,
        gamma_quarter: constants::gamma_quarter(),
        c_q: constants::c_q(modulus)?,
        main_term,
        pair,
    })
}

fn cmd_constants(
    modulus: u64,
    pair: Option<&str>,
    omega: bool,
    k_max: u32,
) -> Result<(), CliError> {
    let pair = pair.map(parse_pair).transpose()?;
    let report = constants_report(modulus, pair, omega, k_max)?;
    println!("{}", emit::to_json(&report)?);
    Ok(())
}

/// Cross-validate the block against the independent multiplicative sieve on
/// a few windows; a mismatch means corrupted data or a sieve defect.
fn spot_check_dual_sieve(blocks: &[SieveBlock], limit: u64) -> Result<(), CliError> {
    let window = 20_000.min(limit);
    let starts = [1, (limit / 2).max(1), (limit + 1).saturating_sub(window).max(1)];
    for lo in starts {
        let hi = (lo + window).min(limit + 1);
        let expected = sieve::sieve_two_squares_multiplicative(lo, hi)?;
        for (k, n) in (lo..hi).enumerate() {
            let bit = expected[k / 64] >> (k % 64) & 1 == 1;
            let block = blocks
                .iter()
                .find(|b| b.lo() <= n && n < b.hi())
                .expect("windows lie inside the sieved range");
            if block.in_s(n) != bit {
                return Err(CliError::Consistency(format!(
                    "dual-sieve mismatch at n = {n}"
                )));
            }
        }
    }
    Ok(())
}

fn cmd_sieve(cfg: &RunConfig, t0: Instant) -> Result<(), CliError> {
    let (blocks, source, sieve_seconds) = load_or_sieve(cfg)?;
    let count: u64 = blocks.iter().map(|b| b.count_in_s()).sum();
    spot_check_dual_sieve(&blocks, cfg.limit)?;
    println!(
        "sieved [1, {}]: {count} integers are sums of two squares",
        cfg.limit
    );
    println!("cache: {}", cache_path(cfg).display());
    emit::ensure_dir(&cfg.out_dir)?;
    emit::write_manifest(
        &cfg.out_dir,
        "sieve",
        cfg,
        t0.elapsed().as_secs_f64(),
        sieve_seconds,
        source,
        &[cache_path(cfg)],
    )?;
    Ok(())
}

fn precheck_pairs(cfg: &RunConfig) -> Result<(), CliError> {
    let q = cfg.modulus.expect("modulus set by caller");
    if cfg.weight == Weight::IndicatorS {
        let g4 = s2sq::arith::gcd(4, q);
        for &(a, b) in &cfg.pairs {
            if a % g4 != 1 % g4 || b % g4 != 1 % g4 {
                return Err(CliError::Usage(format!(
                    "pair ({a}, {b}) must be ≡ 1 (mod {g4}) for the sum-of-two-squares race"
                )));
            }
        }
    }
    Ok(())
}

fn cmd_race(cfg: &RunConfig, svg: bool, t0: Instant) -> Result<(), CliError> {
    precheck_pairs(cfg)?;
    let q = cfg.modulus.expect("modulus is mandatory for race");
    let stride = cfg
        .stride
        .unwrap_or((cfg.limit / race::PLOT_CHECKPOINTS).max(1));
    let (blocks, source, sieve_seconds) = load_or_sieve(cfg)?;
    let series = race::run_races(&blocks, q, &cfg.pairs, cfg.weight, stride)?;
    emit::ensure_dir(&cfg.out_dir)?;
    let mut outputs = Vec::new();
    let mut reports = Vec::new();
    for s in &series {
        let fit = race::main_term_fit(s)?;
        let csv_path = cfg
            .out_dir
            .join(format!("race_q{}_{}_{}.csv", s.q, s.a, s.b));
        emit::write_file(&csv_path, &emit::race_csv(s, fit.predicted_coefficient))?;
        outputs.push(csv_path);
        if svg {
            let svg_path = cfg
                .out_dir
                .join(format!("race_q{}_{}_{}.svg", s.q, s.a, s.b));
            emit::write_file(&svg_path, &emit::race_svg(s, &fit))?;
            outputs.push(svg_path);
        }
        println!(
            "mod {} ({} vs {}), weight {}: lead {:.2}%, ties {:.2}%, diff({}) = {}",
            s.q,
            s.a,
            s.b,
            s.weight,
            race::percent_2dp(s.lead_density()),
            race::percent_2dp(s.tie_density()),
            s.limit,
            s.final_diff()
        );
        reports.push(fit);
    }
    let json_path = cfg.out_dir.join("race.json");
    emit::write_file(&json_path, &format!("{}\n", emit::to_json(&reports)?))?;
    outputs.push(json_path);
    emit::write_manifest(
        &cfg.out_dir,
        "race",
        cfg,
        t0.elapsed().as_secs_f64(),
        sieve_seconds,
        source,
        &outputs,
    )?;
    Ok(())
}

fn cmd_table2(cfg: &RunConfig, t0: Instant) -> Result<(), CliError> {
    let (blocks, source, sieve_seconds) = load_or_sieve(cfg)?;
    let report = race::table2(&blocks)?;
    emit::ensure_dir(&cfg.out_dir)?;
    let csv_path = cfg.out_dir.join("table2.csv");
    emit::write_file(&csv_path, &emit::table2_csv(&report))?;
    let json_path = cfg.out_dir.join("table2.json");
    emit::write_file(&json_path, &format!("{}\n", emit::to_json(&report)?))?;
    for e in &report.entries {
        println!(
            "mod 15 ({:2} vs {:2}): C = {:+8.4}, lead {:6.2}%",
            e.a,
            e.b,
            e.constant,
            race::percent_2dp(e.lead_density)
        );
    }
    emit::write_manifest(
        &cfg.out_dir,
        "table2",
        cfg,
        t0.elapsed().as_secs_f64(),
        sieve_seconds,
        source,
        &[csv_path, json_path],
    )?;
    Ok(())
}

fn cmd_martin(cfg: &RunConfig, t0: Instant) -> Result<(), CliError> {
    let q = cfg.modulus.expect("modulus defaulted for martin");
    let (a, b) = cfg.pairs[0];
    let stride = cfg
        .stride
        .unwrap_or((cfg.limit / race::RESIDUAL_CHECKPOINTS).max(1));
    let (blocks, source, sieve_seconds) = load_or_sieve(cfg)?;
    emit::ensure_dir(&cfg.out_dir)?;
    let mut outputs = Vec::new();
    let mut reports = Vec::new();
    for weight in [Weight::Omega, Weight::BigOmega] {
        let series = race::run_race(&blocks, q, a, b, weight, stride)?;
        let fit = race::main_term_fit(&series)?;
        let path = cfg.out_dir.join(format!("martin_{weight}.csv"));
        emit::write_file(&path, &emit::race_csv(&series, fit.predicted_coefficient))?;
        outputs.push(path);
        let direction = match weight {
            Weight::Omega => "sum over a < sum over b",
            _ => "sum over a > sum over b",
        };
        println!(
            "mod {q} ({a} vs {b}), weight {weight}: {direction} for {:.2}% of n ≤ {}",
            race::percent_2dp(series.lead_density()),
            series.limit
        );
        reports.push(fit);
    }
    let json_path = cfg.out_dir.join("martin.json");
    emit::write_file(&json_path, &format!("{}\n", emit::to_json(&reports)?))?;
    outputs.push(json_path);
    emit::write_manifest(
        &cfg.out_dir,
        "martin",
        cfg,
        t0.elapsed().as_secs_f64(),
        sieve_seconds,
        source,
        &outputs,
    )?;
    Ok(())
}

fn cmd_figure3(cfg: &RunConfig, t0: Instant) -> Result<(), CliError> {
    let (blocks, source, sieve_seconds) = load_or_sieve(cfg)?;
    let series = race::figure3_series(&blocks)?;
    let fit = race::main_term_fit(&series)?;
    emit::ensure_dir(&cfg.out_dir)?;
    let csv_path = cfg.out_dir.join("figure3.csv");
    emit::write_file(
        &csv_path,
        &emit::race_csv(&series, fit.predicted_coefficient),
    )?;
    let svg_path = cfg.out_dir.join("figure3.svg");
    emit::write_file(&svg_path, &emit::race_svg(&series, &fit))?;
    println!(
        "mod 3 (1 vs 2) up to {}: lead {:.2}%, diff({}) = {}",
        series.limit,
        race::percent_2dp(series.lead_density()),
        series.limit,
        series.final_diff()
    );
    emit::write_manifest(
        &cfg.out_dir,
        "figure3",
        cfg,
        t0.elapsed().as_secs_f64(),
        sieve_seconds,
        source,
        &[csv_path, svg_path],
    )?;
    Ok(())
}

fn cmd_verify_identity(
    s: f64,
    p_max: u64,
    modulus: Option<u64>,
    char_index: Option<usize>,
) -> Result<(), CliError> {
    let mut chars = Vec::new();
    match modulus {
        Some(q) => {
            let group = build_group(q)?;
            match char_index {
                Some(i) => {
                    let chi = group
                        .get(i)
                        .ok_or_else(|| CliError::Usage(format!("char index {i} out of range")))?;
                    chars.push((format!("q{q}#{i}"), chi.clone()));
                }
                None => {
                    for (i, chi) in group.characters().iter().enumerate() {
                        chars.push((format!("q{q}#{i}"), chi.clone()));
                    }
                }
            }
        }
        None => {
            chars.push((
                "principal_mod_1".into(),
                build_group(1)?.principal().clone(),
            ));
            chars.push(("chi_minus4".into(), chi_minus4()));
            chars.push((
                "quadratic_mod_3".into(),
                build_group(3)?.characters()[1].clone(),
            ));
        }
    }
    println!("character,p,residual");
    let mut worst: f64 = 0.0;
    for p in sieve::base_primes(p_max) {
        for (name, chi) in &chars {
            let residual = constants::verify_local_identity(p as u64, s, chi)?;
            worst = worst.max(residual);
            println!("{name},{p},{residual:e}");
        }
    }
    if worst >= 1e-12 {
        return Err(CliError::Consistency(format!(
            "local identity residual {worst:e} exceeds 1e-12"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct FullReport {
    limit: u64,
    constants_mod3: ConstantsReport,
    constants_mod5: ConstantsReport,
    constants_mod15: ConstantsReport,
    table2: race::Table2Report,
    mod5_races: Vec<race::BiasReport>,
    figure3: race::BiasReport,
    martin: Vec<race::BiasReport>,
}

fn cmd_report(cfg: &RunConfig, t0: Instant) -> Result<(), CliError> {
    let (blocks, source, sieve_seconds) = load_or_sieve(cfg)?;
    emit::ensure_dir(&cfg.out_dir)?;
    let mut outputs = Vec::new();

    let table2 = race::table2(&blocks)?;
    let csv_path = cfg.out_dir.join("table2.csv");
    emit::write_file(&csv_path, &emit::table2_csv(&table2))?;
    outputs.push(csv_path);

    let mod5_pairs = [(1u64, 2u64), (1, 3), (4, 2), (4, 3)];
    let stride5 = (cfg.limit / race::RESIDUAL_CHECKPOINTS).max(1);
    let mut mod5_races = Vec::new();
    for s in race::run_races(&blocks, 5, &mod5_pairs, Weight::IndicatorS, stride5)? {
        let fit = race::main_term_fit(&s)?;
        let path = cfg.out_dir.join(format!("race_q5_{}_{}.csv", s.a, s.b));
        emit::write_file(&path, &emit::race_csv(&s, fit.predicted_coefficient))?;
        outputs.push(path);
        mod5_races.push(fit);
    }

    let fig3 = race::figure3_series(&blocks)?;
    let fig3_fit = race::main_term_fit(&fig3)?;
    let csv_path = cfg.out_dir.join("figure3.csv");
    emit::write_file(
        &csv_path,
        &emit::race_csv(&fig3, fig3_fit.predicted_coefficient),
    )?;
    outputs.push(csv_path);
    let svg_path = cfg.out_dir.join("figure3.svg");
    emit::write_file(&svg_path, &emit::race_svg(&fig3, &fig3_fit))?;
    outputs.push(svg_path);

    let stride_m = (cfg.limit / race::RESIDUAL_CHECKPOINTS).max(1);
    let mut martin = Vec::new();
    for weight in [Weight::Omega, Weight::BigOmega] {
        let series = race::run_race(&blocks, 4, 1, 3, weight, stride_m)?;
        let fit = race::main_term_fit(&series)?;
        let path = cfg.out_dir.join(format!("martin_{weight}.csv"));
        emit::write_file(&path, &emit::race_csv(&series, fit.predicted_coefficient))?;
        outputs.push(path);
        martin.push(fit);
    }

    let report = FullReport {
        limit: cfg.limit,
        constants_mod3: constants_report(3, Some((1, 2)), false, constants::DEFAULT_K_MAX)?,
        constants_mod5: constants_report(5, Some((1, 2)), false, constants::DEFAULT_K_MAX)?,
        constants_mod15: constants_report(15, Some((1, 2)), false, constants::DEFAULT_K_MAX)?,
        table2,
        mod5_races,
        figure3: fig3_fit,
        martin,
    };
    let json_path = cfg.out_dir.join("report.json");
    emit::write_file(&json_path, &format!("{}\n", emit::to_json(&report)?))?;
    outputs.push(json_path);
    println!(
        "full report for N = {} written to {}",
        cfg.limit,
        cfg.out_dir.display()
    );
    emit::write_manifest(
        &cfg.out_dir,
        "report",
        cfg,
        t0.elapsed().as_secs_f64(),
        sieve_seconds,
        source,
        &outputs,
    )?;
    Ok(())
}
