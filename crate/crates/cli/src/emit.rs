//! Report emission: CSV series, JSON reports, SVG plots and the run manifest.
//!
//! Stable interfaces (documented in the README):
//! * race CSV columns: `x,count_a,count_b,diff,predicted_main_term,residual`
//! * character CSV columns: `char_index,residue,value_re,value_im,is_real,is_principal`
//! * L-value CSV columns: `modulus,char_index,s,value_re,value_im,error_bound`
//! * mod-15 table CSV columns: `a,b,constant,lead_count,tie_count,lead_percent`
//!
//! CSV and JSON payloads are deterministic for a fixed configuration; wall
//! times live only in the manifest.

use crate::config::RunConfig;
use crate::svg::LinePlot;
use crate::CliError;
use s2sq::race::{percent_2dp, predicted_main_term, BiasReport, RaceSeries, Table2Report};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// How the sieve data for a run was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SieveSource {
    Computed,
    Cache,
}

/// Run manifest: version, config echo, wall times, outputs.
#[derive(Serialize)]
pub struct Manifest<'a> {
    pub tool_version: &'static str,
    pub subcommand: &'a str,
    pub config: &'a RunConfig,
    pub wall_seconds: f64,
    pub sieve_seconds: f64,
    pub sieve_source: SieveSource,
    pub outputs: Vec<String>,
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| {
        CliError::Core(s2sq::Error::Resource(format!(
            "cannot create output directory {}: {e}",
            dir.display()
        )))
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| {
        CliError::Core(s2sq::Error::Resource(format!(
            "cannot write {}: {e}",
            path.display()
        )))
    })
}

/// Race series CSV with the predicted main term of the given normalized
/// coefficient.
pub fn race_csv(series: &RaceSeries, coefficient: f64) -> String {
    let mut out = String::from("x,count_a,count_b,diff,predicted_main_term,residual\n");
    for (i, &x) in series.checkpoints.iter().enumerate() {
        let predicted = predicted_main_term(series.weight, coefficient, x as f64);
        let residual = series.diffs[i] as f64 - predicted;
        let _ = writeln!(
            out,
            "{x},{},{},{},{predicted:.6},{residual:.6}",
            series.counts_a[i], series.counts_b[i], series.diffs[i]
        );
    }
    out
}

/// Plot of a race series with the predicted main-term curve overlaid.
pub fn race_svg(series: &RaceSeries, report: &BiasReport) -> String {
    let data: Vec<(f64, f64)> = series
        .checkpoints
        .iter()
        .zip(&series.diffs)
        .map(|(&x, &d)| (x as f64, d as f64))
        .collect();
    let overlay: Vec<(f64, f64)> = series
        .checkpoints
        .iter()
        .map(|&x| {
            (
                x as f64,
                predicted_main_term(series.weight, report.predicted_coefficient, x as f64),
            )
        })
        .collect();
    let title = format!(
        "race mod {} ({} vs {}), weight {}, N = {}",
        series.q, series.a, series.b, series.weight, series.limit
    );
    let series_label = format!("count({}) − count({})", series.a, series.b);
    LinePlot {
        title: &title,
        x_label: "x",
        y_label: "difference",
        series: &data,
        series_label: &series_label,
        overlay: Some(("predicted main term", &overlay)),
    }
    .render()
}

pub fn characters_csv(group: &s2sq::CharacterGroup) -> String {
    let mut out = String::from("char_index,residue,value_re,value_im,is_real,is_principal\n");
    for (index, chi) in group.characters().iter().enumerate() {
        for residue in 0..group.modulus() {
            let v = chi.eval(residue as i64);
            let _ = writeln!(
                out,
                "{index},{residue},{},{},{},{}",
                v.re,
                v.im,
                chi.is_real(),
                chi.is_principal()
            );
        }
    }
    out
}

pub fn table2_csv(report: &Table2Report) -> String {
    let mut out = String::from("a,b,constant,lead_count,tie_count,lead_percent\n");
    for e in &report.entries {
        let _ = writeln!(
            out,
            "{},{},{:.12},{},{},{:.2}",
            e.a,
            e.b,
            e.constant,
            e.lead_count,
            e.tie_count,
            percent_2dp(e.lead_density)
        );
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Core(s2sq::Error::Resource(format!("JSON encoding failed: {e}"))))
}

/// Write the manifest next to the other outputs.
pub fn write_manifest(
    out_dir: &Path,
    subcommand: &str,
    config: &RunConfig,
    wall_seconds: f64,
    sieve_seconds: f64,
    sieve_source: SieveSource,
    outputs: &[PathBuf],
) -> Result<PathBuf, CliError> {
    let manifest = Manifest {
        tool_version: env!("CARGO_PKG_VERSION"),
        subcommand,
        config,
        wall_seconds,
        sieve_seconds,
        sieve_source,
        outputs: outputs
            .iter()
            .map(|p| p.display().to_string())
            .collect(),
    };
    let path = out_dir.join("manifest.json");
    write_file(&path, &format!("{}\n", to_json(&manifest)?))?;
    Ok(path)
}
