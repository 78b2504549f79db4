// SPDX-License-Identifier: Apache-2.0

//! CSV time series, summary and run manifest.
//!
//! Floating values are written as `{:.16e}`, i.e. 17 significant digits,
//! which round-trips every `f64` exactly.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::runner::{RunSummary, TimeSeriesRecord};
use crate::scenario::ScenarioConfig;

pub const TIMESERIES_HEADER: &str = "t,corr,concurrence,e_total,e_c,e_e,e_int,purity,norm_err";
pub const SUMMARY_HEADER: &str = "e_psi,e0,min_corr,t_at_min,corr0,max_concurrence";

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const MANIFEST_FILE: &str = "manifest.txt";

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| format_float(v))
        .collect::<Vec<_>>()
        .join(",")
}

fn record_fields(r: &TimeSeriesRecord) -> [f64; 9] {
    [
        r.t,
        r.corr,
        r.concurrence,
        r.e_total,
        r.e_c,
        r.e_e,
        r.e_int,
        r.purity,
        r.norm_err,
    ]
}

fn summary_fields(s: &RunSummary) -> [f64; 6] {
    [
        s.e_psi,
        s.e0,
        s.min_corr,
        s.t_at_min,
        s.corr0,
        s.max_concurrence,
    ]
}

pub fn timeseries_csv(records: &[TimeSeriesRecord]) -> String {
    let mut out = String::with_capacity(32 + records.len() * 220);
    out.push_str(TIMESERIES_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&join(&record_fields(r)));
        out.push('\n');
    }
    out
}

pub fn summary_csv(summary: &RunSummary) -> String {
    format!("{SUMMARY_HEADER}\n{}\n", join(&summary_fields(summary)))
}

pub fn manifest(config: &ScenarioConfig) -> String {
    format!(
        "# spinbath {}\n# seed {}\n{}",
        env!("CARGO_PKG_VERSION"),
        config.seed,
        config.to_text()
    )
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

/// Writes `timeseries.csv`, `summary.csv` and `manifest.txt` into `dir`.
pub fn emit_csv(
    records: &[TimeSeriesRecord],
    summary: &RunSummary,
    config: &ScenarioConfig,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = [
        (dir.join(TIMESERIES_FILE), timeseries_csv(records)),
        (dir.join(SUMMARY_FILE), summary_csv(summary)),
        (dir.join(MANIFEST_FILE), manifest(config)),
    ];
    for (path, text) in &files {
        write_file(path, text)?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}

fn parse_rows<const N: usize>(text: &str, header: &str) -> Result<Vec<[f64; N]>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == header => {}
        other => {
            return Err(Error::Config(format!(
                "expected header `{header}`, got `{}`",
                other.unwrap_or("")
            )))
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let values: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Config(format!("row {}: {e}", i + 1)))?;
            values.try_into().map_err(|v: Vec<f64>| {
                Error::Config(format!(
                    "row {}: expected {N} fields, got {}",
                    i + 1,
                    v.len()
                ))
            })
        })
        .collect()
}

pub fn parse_timeseries(text: &str) -> Result<Vec<TimeSeriesRecord>> {
    Ok(parse_rows::<9>(text, TIMESERIES_HEADER)?
        .into_iter()
        .map(
            |[t, corr, concurrence, e_total, e_c, e_e, e_int, purity, norm_err]| TimeSeriesRecord {
                t,
                corr,
                concurrence,
                e_total,
                e_c,
                e_e,
                e_int,
                purity,
                norm_err,
            },
        )
        .collect())
}

pub fn parse_summary(text: &str) -> Result<RunSummary> {
    let rows = parse_rows::<6>(text, SUMMARY_HEADER)?;
    match rows.as_slice() {
        [[e_psi, e0, min_corr, t_at_min, corr0, max_concurrence]] => Ok(RunSummary {
            e_psi: *e_psi,
            e0: *e0,
            min_corr: *min_corr,
            t_at_min: *t_at_min,
            corr0: *corr0,
            max_concurrence: *max_concurrence,
        }),
        _ => Err(Error::Config(format!(
            "expected one summary row, got {}",
            rows.len()
        ))),
    }
}

pub fn read_timeseries(path: &Path) -> Result<Vec<TimeSeriesRecord>> {
    parse_timeseries(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

pub fn read_summary(path: &Path) -> Result<RunSummary> {
    parse_summary(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_series_is_header_only() {
        assert_eq!(timeseries_csv(&[]), format!("{TIMESERIES_HEADER}\n"));
        assert!(parse_timeseries(&timeseries_csv(&[])).unwrap().is_empty());
    }

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(format_float(-0.25), "-2.5000000000000000e-1");
        assert_eq!(
            format_float(0.1)
                .trim_start_matches('-')
                .split('e')
                .next()
                .unwrap()
                .len(),
            18
        );
    }

    #[test]
    fn bad_inputs() {
        assert!(parse_timeseries("t,corr\n").is_err());
        assert!(parse_summary(&format!("{SUMMARY_HEADER}\n1,2,3\n")).is_err());
        assert!(parse_summary(&format!("{SUMMARY_HEADER}\n")).is_err());
    }

    #[test]
    fn unwritable_directory_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let summary = RunSummary {
            e_psi: 0.0,
            e0: 0.0,
            min_corr: 0.0,
            t_at_min: 0.0,
            corr0: 0.0,
            max_concurrence: 0.0,
        };
        let err = emit_csv(
            &[],
            &summary,
            &ScenarioConfig::default(),
            &blocker.join("sub"),
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    proptest! {
        #[test]
        fn records_round_trip(values in prop::collection::vec(prop::array::uniform9(-1e6f64..1e6), 0..8)) {
            let records: Vec<TimeSeriesRecord> = values
                .iter()
                .map(|v| TimeSeriesRecord {
                    t: v[0], corr: v[1], concurrence: v[2], e_total: v[3], e_c: v[4],
                    e_e: v[5], e_int: v[6], purity: v[7], norm_err: v[8],
                })
                .collect();
            let back = parse_timeseries(&timeseries_csv(&records)).unwrap();
            prop_assert_eq!(back, records);
        }
    }
}
