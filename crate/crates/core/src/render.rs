//! Text and SVG drawings of grid diagrams.
//!
//! Row `n - 1` is drawn at the top. Vertical edges are unbroken; a
//! horizontal edge is interrupted wherever a vertical edge crosses it.
//! SVG output carries the grid JSON in a `<metadata>` element, which
//! [`embedded_grid`] reads back.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::grid::GridDiagram;
use crate::io;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "svg" => Ok(Format::Svg),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn render(d: &GridDiagram, format: Format) -> String {
    match format {
        Format::Ascii => ascii(d),
        Format::Svg => svg(d),
    }
}

const STEP: usize = 3;

fn ascii(d: &GridDiagram) -> String {
    let n = d.n();
    let size = STEP * (n - 1) + 1;
    let mut canvas = vec![vec![' '; size]; size];
    // Canvas line 0 is the top row.
    let line = |row: usize| STEP * (n - 1 - row);
    for (row, &(a, b)) in d.rows().iter().enumerate() {
        for x in STEP * a..=STEP * b {
            canvas[line(row)][x] = '-';
        }
    }
    for (col, (lo, hi)) in d.cols().enumerate() {
        let x = STEP * col;
        for y in line(hi)..=line(lo) {
            canvas[y][x] = '|';
        }
        canvas[line(lo)][x] = '+';
        canvas[line(hi)][x] = '+';
    }
    let mut out = String::new();
    for row in canvas {
        let text: String = row.into_iter().collect();
        out.push_str(text.trim_end());
        out.push('\n');
    }
    out
}

fn svg(d: &GridDiagram) -> String {
    const UNIT: usize = 40;
    const PAD: usize = 20;
    let n = d.n();
    let side = UNIT * (n - 1) + 2 * PAD;
    let x = |c: usize| PAD + UNIT * c;
    let y = |r: usize| PAD + UNIT * (n - 1 - r);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#
    );
    let _ = writeln!(out, "<metadata id=\"gridknot\">{}</metadata>", io::to_json(d));
    let _ = writeln!(out, r#"<rect width="{side}" height="{side}" fill="white"/>"#);
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="3" stroke-linecap="square">"#);
    for (row, &(a, b)) in d.rows().iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<line class="h" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            x(a),
            y(row),
            x(b),
            y(row)
        );
    }
    for c in d.crossings() {
        let _ = writeln!(
            out,
            r#"<rect class="gap" x="{}" y="{}" width="16" height="8" fill="white" stroke="none"/>"#,
            x(c.col) - 8,
            y(c.row) - 4
        );
    }
    for (col, (lo, hi)) in d.cols().enumerate() {
        let _ = writeln!(
            out,
            r#"<line class="v" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            x(col),
            y(hi),
            x(col),
            y(lo)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// The diagram stored in an SVG drawing made by [`render`].
pub fn embedded_grid(svg: &str) -> Result<GridDiagram> {
    const OPEN: &str = "<metadata id=\"gridknot\">";
    let start = svg
        .find(OPEN)
        .ok_or_else(|| Error::Parse("no embedded grid".into()))?
        + OPEN.len();
    let len = svg[start..]
        .find("</metadata>")
        .ok_or_else(|| Error::Parse("unterminated metadata".into()))?;
    let v: serde_json::Value = serde_json::from_str(&svg[start..start + len])
        .map_err(|e| Error::Parse(e.to_string()))?;
    io::from_json(&v)
}
