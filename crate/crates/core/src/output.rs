//! CSV and JSON encodings of sweep results.
//!
//! CSV cells carry 9 significant digits; missing Monte Carlo fields are empty
//! cells. Figure output adds a leading `series` column.

use crate::error::{Error, Result};
use crate::sweep::{ResultRecord, Row};

pub const HEADER: &str = "varied,analytic_diff,analytic_clamped,mc_mean,mc_stderr";
pub const SERIES_HEADER: &str = "series,varied,analytic_diff,analytic_clamped,mc_mean,mc_stderr";

/// 9 significant digits in scientific notation.
pub fn format_value(x: f64) -> String {
    format!("{x:.8e}")
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_value).unwrap_or_default()
}

fn record_cells(r: &ResultRecord) -> [String; 5] {
    [
        format_value(r.varied),
        format_value(r.analytic_diff),
        format_value(r.analytic_clamped),
        format_opt(r.mc_mean),
        format_opt(r.mc_stderr),
    ]
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Config(format!("CSV: {e}"))
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}

/// Writes records without a series column.
pub fn records_to_csv(records: &[ResultRecord]) -> Result<String> {
    let mut w = writer();
    w.write_record(HEADER.split(',')).map_err(csv_error)?;
    for r in records {
        w.write_record(record_cells(r)).map_err(csv_error)?;
    }
    finish(w)
}

/// Writes rows, with a series column when any row is labelled.
pub fn rows_to_csv(rows: &[Row]) -> Result<String> {
    let labelled = rows.iter().any(|r| r.series.is_some());
    let mut w = writer();
    let header = if labelled { SERIES_HEADER } else { HEADER };
    w.write_record(header.split(',')).map_err(csv_error)?;
    for row in rows {
        let cells = record_cells(&row.record);
        if labelled {
            let label = row.series.clone().unwrap_or_default();
            w.write_record(std::iter::once(label).chain(cells)).map_err(csv_error)?;
        } else {
            w.write_record(cells).map_err(csv_error)?;
        }
    }
    finish(w)
}

fn parse_field(cell: &str, line: u64, name: &str) -> Result<f64> {
    cell.parse::<f64>()
        .map_err(|_| Error::Config(format!("line {line}: bad {name} value {cell:?}")))
}

fn parse_opt(cell: &str, line: u64, name: &str) -> Result<Option<f64>> {
    if cell.is_empty() {
        Ok(None)
    } else {
        parse_field(cell, line, name).map(Some)
    }
}

/// Parses either CSV layout back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().map_err(csv_error)?.iter().map(str::to_owned).collect();
    let labelled = if header.join(",") == HEADER {
        false
    } else if header.join(",") == SERIES_HEADER {
        true
    } else {
        return Err(Error::Config(format!("unrecognized CSV header {:?}", header.join(","))));
    };
    let skip = usize::from(labelled);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |i: usize| record.get(i + skip).unwrap_or_default();
        let mc_mean = parse_opt(cell(3), line, "mc_mean")?;
        let mc_stderr = parse_opt(cell(4), line, "mc_stderr")?;
        if mc_mean.is_some() != mc_stderr.is_some() {
            return Err(Error::Config(format!(
                "line {line}: mc_mean and mc_stderr must both be present or both empty"
            )));
        }
        rows.push(Row {
            series: labelled.then(|| record[0].to_string()),
            record: ResultRecord {
                varied: parse_field(cell(0), line, "varied")?,
                analytic_diff: parse_field(cell(1), line, "analytic_diff")?,
                analytic_clamped: parse_field(cell(2), line, "analytic_clamped")?,
                mc_mean,
                mc_stderr,
            },
        });
    }
    Ok(rows)
}

fn at_output_precision(x: f64) -> f64 {
    format_value(x).parse().unwrap_or(x)
}

/// JSON array mirroring the CSV columns, at the same precision.
pub fn rows_to_json(rows: &[Row]) -> Result<String> {
    let rounded: Vec<Row> = rows
        .iter()
        .map(|row| {
            let r = &row.record;
            Row {
                series: row.series.clone(),
                record: ResultRecord {
                    varied: at_output_precision(r.varied),
                    analytic_diff: at_output_precision(r.analytic_diff),
                    analytic_clamped: at_output_precision(r.analytic_clamped),
                    mc_mean: r.mc_mean.map(at_output_precision),
                    mc_stderr: r.mc_stderr.map(at_output_precision),
                },
            }
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rounded)
        .map_err(|e| Error::Config(format!("JSON encoding failed: {e}")))?;
    s.push('\n');
    Ok(s)
}
