//! Benchmark tables as CSV or JSON.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use migc_core::scenarios::{BattleshipBench, DnaRow, Fig5Report};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Csv,
    Json,
}

impl TableFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TableFormat::Csv => "csv",
            TableFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig5Record {
    pub n: usize,
    pub mean_huffman: f64,
    pub mean_migc: f64,
    pub mean_shannon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapRow {
    pub sample: usize,
    pub symbol: usize,
    pub shannon_minus_migc: i64,
    pub migc_minus_huffman: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DnaRecord {
    pub sample: usize,
    pub migc: f64,
    pub bruteforce: f64,
    pub gbsc: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriesRow {
    pub game: usize,
    pub tries: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub game: usize,
    pub t: usize,
    pub entropy_trits: f64,
}

pub fn fig5_records(report: &Fig5Report) -> Vec<Fig5Record> {
    report
        .rows
        .iter()
        .map(|r| Fig5Record {
            n: r.n,
            mean_huffman: r.mean_huffman,
            mean_migc: r.mean_migc,
            mean_shannon: r.mean_shannon,
        })
        .collect()
}

pub fn gap_rows(report: &Fig5Report) -> Vec<GapRow> {
    report
        .gaps
        .iter()
        .map(|g| GapRow {
            sample: g.sample,
            symbol: g.symbol,
            shannon_minus_migc: g.shannon_minus_migc,
            migc_minus_huffman: g.migc_minus_huffman,
        })
        .collect()
}

pub fn dna_records(rows: &[DnaRow]) -> Vec<DnaRecord> {
    rows.iter()
        .map(|r| DnaRecord {
            sample: r.sample,
            migc: r.migc,
            bruteforce: r.bruteforce,
            gbsc: r.gbsc,
        })
        .collect()
}

pub fn tries_rows(bench: &BattleshipBench) -> Vec<TriesRow> {
    bench
        .games
        .iter()
        .enumerate()
        .map(|(game, g)| TriesRow {
            game,
            tries: g.tries,
        })
        .collect()
}

pub fn trace_rows(bench: &BattleshipBench) -> Vec<TraceRow> {
    bench
        .games
        .iter()
        .enumerate()
        .flat_map(|(game, g)| {
            g.trace.iter().enumerate().map(move |(t, &h)| TraceRow {
                game,
                t,
                entropy_trits: h,
            })
        })
        .collect()
}

pub fn write_table<T: Serialize, W: Write>(out: W, rows: &[T], format: TableFormat) -> Result<()> {
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush().map_err(|e| Error::io("csv", e))?;
        }
        TableFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            out.write_all(b"\n").map_err(|e| Error::io("json", e))?;
        }
    }
    Ok(())
}

/// Writes `<dir>/<stem>.<ext>` and returns its path.
pub fn write_table_file<T: Serialize>(
    dir: &Path,
    stem: &str,
    rows: &[T],
    format: TableFormat,
) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    let file = File::create(&path).map_err(|e| Error::io(path.display().to_string(), e))?;
    write_table(BufWriter::new(file), rows, format)?;
    Ok(path)
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_round_trip() {
        let rows = vec![
            TraceRow {
                game: 0,
                t: 0,
                entropy_trits: 12.0,
            },
            TraceRow {
                game: 0,
                t: 1,
                entropy_trits: 11.25,
            },
        ];
        let mut buf = Vec::new();
        write_table(&mut buf, &rows, TableFormat::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "game,t,entropy_trits\n0,0,12.0\n0,1,11.25\n");
        let back: Vec<TraceRow> = csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<std::result::Result<_, _>>()
            .unwrap();
        assert_eq!(back, rows);
    }
}
