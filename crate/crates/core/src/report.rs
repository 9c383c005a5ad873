//! CSV profiles, plot data and report metadata.

use serde::Serialize;

use crate::divergence::DivergenceSample;
use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = concat!("reldiv ", env!("CARGO_PKG_VERSION"));

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is UTF-8")
}

/// Divergence samples as CSV: `r,value,pair_count,flag,witness`, with ∞
/// written `inf` and the witness pair as `x | y`.
pub fn divergence_csv(samples: &[DivergenceSample]) -> String {
    let mut w = csv_writer();
    w.write_record(["r", "value", "pair_count", "flag", "witness"])
        .expect("in-memory write");
    for s in samples {
        let witness = s
            .witness
            .as_ref()
            .map(|(x, y)| format!("{x} | {y}"))
            .unwrap_or_default();
        w.write_record([
            s.r.to_string(),
            s.value.to_string(),
            s.pair_count.to_string(),
            s.flag.to_string(),
            witness,
        ])
        .expect("in-memory write");
    }
    finish(w)
}

/// A CSV table from a header and rows of displayable cells.
pub fn table_csv<S: AsRef<str>>(header: &[&str], rows: &[Vec<S>]) -> String {
    let mut w = csv_writer();
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(|c| c.as_ref())).expect("in-memory write");
    }
    finish(w)
}

/// `# key: value` comment lines placed ahead of a CSV body. Readers in
/// this crate skip lines starting with `#`.
pub fn comment_header(entries: &[(&str, &str)]) -> String {
    entries.iter().map(|(k, v)| format!("# {k}: {v}\n")).collect()
}

/// Two-column data for one CSV column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlotSeries {
    pub column: String,
    /// `r value` lines.
    pub data: String,
    pub rows: usize,
    pub infinite_dropped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlotData {
    pub series: Vec<PlotSeries>,
    pub warnings: Vec<String>,
}

/// Splits a profile CSV into gnuplot-style `r value` series, one per
/// numeric column besides `r`. Rows with ∞ are dropped and counted.
pub fn emit_plot_data(text: &str) -> Result<PlotData> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            reason: e.to_string(),
        })?
        .clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Ok(PlotData {
            series: Vec::new(),
            warnings: vec!["empty profile".into()],
        });
    }
    let rc = headers.iter().position(|h| h == "r").ok_or_else(|| Error::Parse {
        line: 1,
        reason: "missing column \"r\"".into(),
    })?;
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != headers.len() {
            return Err(Error::Parse {
                line,
                reason: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        let r = &record[rc];
        if r.parse::<u64>().is_err() {
            return Err(Error::Parse {
                line,
                reason: format!("bad radius {r:?}"),
            });
        }
        rows.push((line, record.iter().map(str::to_string).collect()));
    }
    let numeric = |s: &str| s == "inf" || s == "∞" || s.parse::<f64>().is_ok();
    let mut series = Vec::new();
    for (c, name) in headers.iter().enumerate() {
        if c == rc || !rows.iter().all(|(_, row)| numeric(&row[c])) {
            continue;
        }
        let mut data = String::new();
        let mut dropped = 0;
        let mut kept = 0;
        for (_, row) in &rows {
            if row[c] == "inf" || row[c] == "∞" {
                dropped += 1;
            } else {
                data.push_str(&format!("{} {}\n", row[rc], row[c]));
                kept += 1;
            }
        }
        series.push(PlotSeries {
            column: name.to_string(),
            data,
            rows: kept,
            infinite_dropped: dropped,
        });
    }
    let mut warnings = Vec::new();
    if rows.is_empty() {
        warnings.push("empty profile".into());
    }
    for s in &series {
        if s.infinite_dropped > 0 {
            warnings.push(format!("{}: {} infinite", s.column, s.infinite_dropped));
        }
    }
    Ok(PlotData { series, warnings })
}
