//! Grid text and JSON formats.
//!
//! Text: first line `n`, second line the one-based column spans `lo-hi`
//! separated by single spaces, e.g.
//!
//! ```text
//! 2
//! 1-2 1-2
//! ```
//!
//! JSON: `{"n": 2, "columns": [[1, 2], [1, 2]]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridDiagram;

#[derive(Serialize, Deserialize)]
struct GridJson {
    n: usize,
    columns: Vec<[usize; 2]>,
}

pub fn to_text(d: &GridDiagram) -> String {
    let spans: Vec<String> = d
        .one_based()
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect();
    format!("{}\n{}\n", d.n(), spans.join(" "))
}

pub fn parse_text(s: &str) -> Result<GridDiagram> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("size line: {e}")))?;
    let spans = lines
        .next()
        .ok_or_else(|| Error::Parse("missing column line".into()))?;
    let mut cols = Vec::new();
    for tok in spans.split_whitespace() {
        let (a, b) = tok
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("bad span {tok:?}")))?;
        let p = |x: &str| {
            x.parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad span {tok:?}: {e}")))
        };
        cols.push((p(a)?, p(b)?));
    }
    GridDiagram::from_one_based(n, &cols)
}

pub fn to_json(d: &GridDiagram) -> serde_json::Value {
    serde_json::to_value(GridJson {
        n: d.n(),
        columns: d.one_based().iter().map(|&(a, b)| [a, b]).collect(),
    })
    .expect("grid JSON")
}

pub fn from_json(v: &serde_json::Value) -> Result<GridDiagram> {
    let g: GridJson = serde_json::from_value(v.clone())?;
    let cols: Vec<_> = g.columns.iter().map(|c| (c[0], c[1])).collect();
    GridDiagram::from_one_based(g.n, &cols)
}

/// Accepts either format, detected by the first non-blank character.
pub fn parse_any(s: &str) -> Result<GridDiagram> {
    if s.trim_start().starts_with('{') {
        from_json(&serde_json::from_str(s)?)
    } else {
        parse_text(s)
    }
}
