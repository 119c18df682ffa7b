//! Rendering of result tables and sweep series.
//!
//! Tables print money values truncated (not rounded) to two decimals. Sweep
//! series print full precision so they can be re-plotted. Lines starting with
//! `#` carry run metadata such as the random seed.

use std::io::Write;

use crate::backtest::SweepResult;
use crate::error::{Error, Result};
use crate::metrics::PerformanceReport;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Printed truncated to two decimals.
    Value(f64),
    Text(String),
}

/// Rows of labelled cells under a header of column names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub notes: Vec<String>,
    pub corner: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<Cell>)>,
}

impl ResultTable {
    pub fn new(corner: impl Into<String>, columns: Vec<String>) -> Self {
        Self {
            corner: corner.into(),
            columns,
            ..Self::default()
        }
    }

    pub fn push_row(&mut self, label: impl Into<String>, cells: Vec<Cell>) {
        self.rows.push((label.into(), cells));
    }

    pub fn cell(&self, row: &str, column: &str) -> Option<&Cell> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows
            .iter()
            .find(|(r, _)| r == row)
            .and_then(|(_, cells)| cells.get(j))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReportData {
    Table(ResultTable),
    Sweep(SweepResult),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Tsv,
    Csv,
    SvgLines,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(Self::Tsv),
            "csv" => Ok(Self::Csv),
            "svg-lines" | "svg" => Ok(Self::SvgLines),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// `v` truncated toward zero at two decimals, e.g. `27.0799 -> "27.07"`.
pub fn truncate2(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    // go through a 12-decimal rendering so 27.07 stored as 27.06999... stays 27.07
    let s = format!("{v:.12}");
    let dot = s.find('.').expect("fixed-point rendering has a decimal point");
    let out = &s[..dot + 3];
    if out.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.00".into()
    } else {
        out.into()
    }
}

/// Whole percentage points, truncated: `0.0896 -> "8"`.
pub fn percent(v: f64) -> String {
    if !v.is_finite() {
        return "-".into();
    }
    let p = (v * 100.0 * 1e9).round() / 1e9;
    format!("{}", p.trunc() as i64)
}

/// Summary cells `"ret ± risk%"` and `"sharpe%"` in whole percentage points.
pub fn metric_cells(r: &PerformanceReport) -> (String, String) {
    let sharpe = r
        .sharpe
        .map_or_else(|| "undefined".to_string(), |s| format!("{}%", percent(s)));
    (
        format!("{} ± {}%", percent(r.annualized_return), percent(r.annualized_risk)),
        sharpe,
    )
}

pub fn emit_report<W: Write>(data: &ReportData, format: ReportFormat, out: W) -> Result<()> {
    match (data, format) {
        (ReportData::Table(t), ReportFormat::Tsv) => write_delimited(&table_records(t), &t.notes, b'\t', out),
        (ReportData::Table(t), ReportFormat::Csv) => write_delimited(&table_records(t), &t.notes, b',', out),
        (ReportData::Sweep(s), ReportFormat::Tsv) => write_delimited(&sweep_records(s), &[], b'\t', out),
        (ReportData::Sweep(s), ReportFormat::Csv) => write_delimited(&sweep_records(s), &[], b',', out),
        (ReportData::Table(t), ReportFormat::SvgLines) => write_svg(&table_lines(t), &t.corner, &t.notes, out),
        (ReportData::Sweep(s), ReportFormat::SvgLines) => write_svg(&sweep_lines(s), &s.axis_name, &[], out),
    }
}

/// Renders into a string; handy for tests and the CLI.
pub fn render(data: &ReportData, format: ReportFormat) -> Result<String> {
    let mut buf = Vec::new();
    emit_report(data, format, &mut buf)?;
    Ok(String::from_utf8(buf).expect("reports are UTF-8"))
}

fn table_records(t: &ResultTable) -> Vec<Vec<String>> {
    let mut records = vec![std::iter::once(t.corner.clone())
        .chain(t.columns.iter().cloned())
        .collect()];
    for (label, cells) in &t.rows {
        let mut rec = vec![label.clone()];
        rec.extend(cells.iter().map(|c| match c {
            Cell::Value(v) => truncate2(*v),
            Cell::Text(s) => s.clone(),
        }));
        records.push(rec);
    }
    records
}

fn sweep_records(s: &SweepResult) -> Vec<Vec<String>> {
    let mut records = vec![std::iter::once(s.axis_name.clone())
        .chain(s.series.iter().map(|(n, _)| n.clone()))
        .collect::<Vec<_>>()];
    for (k, a) in s.axis.iter().enumerate() {
        let mut rec = vec![a.to_string()];
        rec.extend(s.series.iter().map(|(_, v)| v[k].to_string()));
        records.push(rec);
    }
    records
}

fn write_delimited<W: Write>(records: &[Vec<String>], notes: &[String], delimiter: u8, mut out: W) -> Result<()> {
    for note in notes {
        writeln!(out, "# {note}")?;
    }
    let mut writer = csv::WriterBuilder::new().delimiter(delimiter).from_writer(out);
    for rec in records {
        writer
            .write_record(rec)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    writer.flush()?;
    Ok(())
}

struct Line {
    name: String,
    points: Vec<(f64, f64)>,
}

fn table_lines(t: &ResultTable) -> (Vec<String>, Vec<Line>) {
    let lines = t
        .rows
        .iter()
        .map(|(label, cells)| Line {
            name: label.clone(),
            points: cells
                .iter()
                .enumerate()
                .filter_map(|(j, c)| match c {
                    Cell::Value(v) => Some((j as f64, *v)),
                    Cell::Text(_) => None,
                })
                .collect(),
        })
        .collect();
    (t.columns.clone(), lines)
}

fn sweep_lines(s: &SweepResult) -> (Vec<String>, Vec<Line>) {
    let lines = s
        .series
        .iter()
        .map(|(name, values)| Line {
            name: name.clone(),
            points: s.axis.iter().copied().zip(values.iter().copied()).collect(),
        })
        .collect();
    (Vec::new(), lines)
}

const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Minimal self-contained line chart with a log10 value axis.
fn write_svg<W: Write>(chart: &(Vec<String>, Vec<Line>), x_label: &str, notes: &[String], mut out: W) -> Result<()> {
    let (categories, lines) = chart;
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let pts = lines.iter().flat_map(|l| l.points.iter()).filter(|(_, y)| *y > 0.0);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y.log10());
        y1 = y1.max(y.log10());
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        (y0, y1) = (y0 - 0.5, y1 + 0.5);
    }
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y.log10() - y0) / (y1 - y0) * (h - 2.0 * pad);

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )?;
    for note in notes {
        writeln!(out, "<desc>{}</desc>", escape(note))?;
    }
    writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#)?;
    writeln!(
        out,
        r#"<path d="M{pad} {top} V{bottom} H{right}" stroke="black" fill="none"/>"#,
        top = pad,
        bottom = h - pad,
        right = w - pad
    )?;
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
        w / 2.0,
        h - 10.0,
        escape(x_label)
    )?;
    writeln!(
        out,
        r#"<text x="12" y="{:.2}" font-size="12" transform="rotate(-90 12 {:.2})" text-anchor="middle">log10 return</text>"#,
        h / 2.0,
        h / 2.0
    )?;
    for (j, c) in categories.iter().enumerate() {
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
            sx(j as f64),
            h - pad + 14.0,
            escape(c)
        )?;
    }
    for (k, line) in lines.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let coords: Vec<String> = line
            .points
            .iter()
            .filter(|(_, y)| *y > 0.0)
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        )?;
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" fill="{color}">{}</text>"#,
            w - pad - 120.0,
            pad + 14.0 * k as f64,
            escape(&line.name)
        )?;
    }
    writeln!(out, "</svg>")?;
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
