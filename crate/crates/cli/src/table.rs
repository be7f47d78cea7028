//! Tabular output in csv, json, and svg-polyline form.
//!
//! All writers are deterministic: metadata keeps insertion order,
//! floats go through the shortest round-trip formatting, and NaN cells
//! carry an explicit marker instead of a bare NaN literal.

use std::io::{self, Write};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) if v.is_nan() => "nan".to_string(),
            Cell::Float(v) => format!("{v}"),
            Cell::Int(v) => format!("{v}"),
            Cell::Text(t) => {
                if t.contains(',') || t.contains('"') || t.contains('\n') {
                    format!("\"{}\"", t.replace('"', "\"\""))
                } else {
                    t.clone()
                }
            }
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Float(v) if v.is_nan() => serde_json::Value::Null,
            Cell::Float(v) => serde_json::json!(v),
            Cell::Int(v) => serde_json::json!(v),
            Cell::Text(t) => serde_json::json!(t),
        }
    }

    fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Text(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown format {other:?} (expected csv, json, or svg)")),
        }
    }
}

/// One result set: a versioned schema tag, free-form metadata, and rows.
#[derive(Debug, Clone)]
pub struct Table {
    /// Stable schema name, e.g. `spinslab.resonant-gp.v1`.
    pub schema: String,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(schema: &str, columns: &[&str]) -> Self {
        Table {
            schema: format!("spinslab.{schema}"),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, w: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
            Format::Svg => self.write_svg(w),
        }
    }

    fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "# schema: {}", self.schema)?;
        for (k, v) in &self.meta {
            writeln!(w, "# {k}: {v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    fn write_json(&self, w: &mut dyn Write) -> io::Result<()> {
        let meta: serde_json::Map<String, serde_json::Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::json!(v)))
            .collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let rec: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row.iter())
                    .map(|(c, cell)| (c.to_string(), cell.json()))
                    .collect();
                serde_json::Value::Object(rec)
            })
            .collect();
        let doc = serde_json::json!({
            "schema": self.schema,
            "meta": serde_json::Value::Object(meta),
            "rows": rows,
        });
        writeln!(w, "{}", serde_json::to_string_pretty(&doc)?)
    }

    /// Plots the second column against the first as a pre-scaled
    /// polyline. Rows with a NaN in either column break the line.
    fn write_svg(&self, w: &mut dyn Write) -> io::Result<()> {
        const W: f64 = 800.0;
        const H: f64 = 500.0;
        const M: f64 = 50.0;

        let points: Vec<(f64, Option<f64>)> = self
            .rows
            .iter()
            .filter_map(|row| {
                let x = row.first().and_then(Cell::as_f64)?;
                let y = row.get(1).and_then(Cell::as_f64);
                Some((x, y.filter(|v| v.is_finite())))
            })
            .filter(|(x, _)| x.is_finite())
            .collect();

        let finite: Vec<(f64, f64)> = points
            .iter()
            .filter_map(|(x, y)| y.map(|y| (*x, y)))
            .collect();
        let (x0, x1, y0, y1) = if finite.is_empty() {
            (0.0, 1.0, 0.0, 1.0)
        } else {
            let mut b = (finite[0].0, finite[0].0, finite[0].1, finite[0].1);
            for (x, y) in &finite {
                b.0 = b.0.min(*x);
                b.1 = b.1.max(*x);
                b.2 = b.2.min(*y);
                b.3 = b.3.max(*y);
            }
            b
        };
        let xs = if x1 > x0 { (W - 2.0 * M) / (x1 - x0) } else { 1.0 };
        let ys = if y1 > y0 { (H - 2.0 * M) / (y1 - y0) } else { 1.0 };
        let px = |x: f64| M + (x - x0) * xs;
        let py = |y: f64| H - M - (y - y0) * ys;

        writeln!(
            w,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\">"
        )?;
        writeln!(w, "<!-- schema: {} -->", self.schema)?;
        for (k, v) in &self.meta {
            writeln!(w, "<!-- {k}: {v} -->")?;
        }
        writeln!(
            w,
            "<rect x=\"{M}\" y=\"{M}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>",
            W - 2.0 * M,
            H - 2.0 * M
        )?;
        // break the polyline at NaN rows so gaps stay visible
        let mut segment: Vec<String> = Vec::new();
        let mut segments: Vec<Vec<String>> = Vec::new();
        for (x, y) in &points {
            match y {
                Some(y) => segment.push(format!("{:.3},{:.3}", px(*x), py(*y))),
                None => {
                    if !segment.is_empty() {
                        segments.push(std::mem::take(&mut segment));
                    }
                }
            }
        }
        if !segment.is_empty() {
            segments.push(segment);
        }
        for seg in &segments {
            writeln!(
                w,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>",
                seg.join(" ")
            )?;
        }
        let label = |v: f64| format!("{v:.6}");
        writeln!(
            w,
            "<text x=\"{M}\" y=\"{}\" font-size=\"12\">{}</text>",
            H - M + 16.0,
            label(x0)
        )?;
        writeln!(
            w,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            W - M,
            H - M + 16.0,
            label(x1)
        )?;
        writeln!(
            w,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            M - 4.0,
            H - M,
            label(y0)
        )?;
        writeln!(
            w,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            M - 4.0,
            M + 8.0,
            label(y1)
        )?;
        writeln!(w, "</svg>")
    }
}
