//! Grid serialization.
//!
//! * JSON: `{"m": .., "n": .., "cells": [{"r": .., "c": .., "v": ..}, ..]}`
//!   listing filled cells only, 1-based, row-major.
//! * CSV: a `m,n` header, one record with the sizes, then one record per
//!   row with an empty field for every empty cell. A stored zero is `0`.
//! * Pretty: right-aligned columns with blanks for empty cells.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "pretty" => Ok(Format::Pretty),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Cell {
    r: usize,
    c: usize,
    v: i64,
}

#[derive(Serialize, Deserialize)]
struct GridDoc {
    m: usize,
    n: usize,
    cells: Vec<Cell>,
}

pub fn to_json(g: &Grid) -> String {
    let doc = GridDoc {
        m: g.rows(),
        n: g.cols(),
        cells: g.iter().map(|(r, c, v)| Cell { r, c, v }).collect(),
    };
    serde_json::to_string(&doc).expect("grid documents always serialize")
}

pub fn from_json(text: &str) -> Result<Grid> {
    let doc: GridDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut g = Grid::new(doc.m, doc.n);
    for cell in doc.cells {
        if g.is_filled(cell.r, cell.c) {
            return Err(Error::Parse(format!("cell ({},{}) listed twice", cell.r, cell.c)));
        }
        g.set_any(cell.r, cell.c, cell.v)
            .map_err(|e| Error::Parse(e.to_string()))?;
    }
    Ok(g)
}

pub fn to_csv(g: &Grid) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>, rec: Vec<String>| {
        w.write_record(&rec).expect("writing to memory cannot fail");
    };
    write(&mut w, vec!["m".into(), "n".into()]);
    write(&mut w, vec![g.rows().to_string(), g.cols().to_string()]);
    for r in 1..=g.rows() {
        let rec = (1..=g.cols())
            .map(|c| g.get(r, c).map(|v| v.to_string()).unwrap_or_default())
            .collect();
        write(&mut w, rec);
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is utf-8")
}

pub fn from_csv(text: &str) -> Result<Grid> {
    let parse_err = |e: csv::Error| Error::Parse(e.to_string());
    let mut rd = csv::ReaderBuilder::new()
        .flexible(true)
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = rd.headers().map_err(parse_err)?.clone();
    if header.len() != 2 || &header[0] != "m" || &header[1] != "n" {
        return Err(Error::Parse("csv header must be `m,n`".into()));
    }
    let mut records = rd.records();
    let dims = records
        .next()
        .ok_or_else(|| Error::Parse("missing size record".into()))?
        .map_err(parse_err)?;
    let num = |s: &str| -> Result<usize> {
        s.trim().parse().map_err(|_| Error::Parse(format!("bad size {s:?}")))
    };
    if dims.len() != 2 {
        return Err(Error::Parse("size record must have two fields".into()));
    }
    let (m, n) = (num(&dims[0])?, num(&dims[1])?);
    let mut g = Grid::new(m, n);
    let mut r = 0;
    for rec in records {
        let rec = rec.map_err(parse_err)?;
        r += 1;
        if r > m {
            return Err(Error::Parse(format!("more than {m} rows")));
        }
        if rec.len() != n {
            return Err(Error::Parse(format!("row {r} has {} fields, expected {n}", rec.len())));
        }
        for (c, field) in rec.iter().enumerate() {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let v: i64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("row {r}: bad entry {field:?}")))?;
            g.set_any(r, c + 1, v)?;
        }
    }
    if r != m {
        return Err(Error::Parse(format!("expected {m} rows, found {r}")));
    }
    Ok(g)
}

pub fn to_pretty(g: &Grid) -> String {
    let width = g
        .iter()
        .map(|(_, _, v)| v.to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for r in 1..=g.rows() {
        let cells: Vec<String> = (1..=g.cols())
            .map(|c| match g.get(r, c) {
                Some(v) => format!("{v:>width$}"),
                None => " ".repeat(width),
            })
            .collect();
        let _ = writeln!(out, "{}", cells.join(" ").trim_end());
    }
    out
}

pub fn render(g: &Grid, format: Format) -> String {
    match format {
        Format::Json => to_json(g) + "\n",
        Format::Csv => to_csv(g),
        Format::Pretty => to_pretty(g),
    }
}

/// Parses JSON or CSV, guessing from the first non-blank character.
pub fn parse_grid(text: &str) -> Result<Grid> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_csv(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Grid {
        let mut g = Grid::from_rows(&[[1, -1, 0], [0, 2, -2]]).unwrap();
        g.set_zero(1, 3).unwrap();
        g
    }

    #[test]
    fn json_round_trip() {
        let g = sample();
        let text = to_json(&g);
        assert!(text.starts_with(r#"{"m":2,"n":3,"cells":[{"r":1,"c":1,"v":1}"#));
        assert!(text.contains(r#"{"r":1,"c":3,"v":0}"#));
        assert_eq!(from_json(&text).unwrap(), g);
    }

    #[test]
    fn csv_round_trip() {
        let g = sample();
        let text = to_csv(&g);
        assert_eq!(text, "m,n\n2,3\n1,-1,0\n,2,-2\n");
        assert_eq!(from_csv(&text).unwrap(), g);
        assert_eq!(parse_grid(&text).unwrap(), g);
    }

    #[test]
    fn pretty_alignment() {
        let g = Grid::from_rows(&[[1, -10, 0], [0, 2, -2]]).unwrap();
        assert_eq!(to_pretty(&g), "  1 -10\n      2  -2\n");
    }

    #[test]
    fn malformed_input() {
        assert!(from_json("{\"m\":1}").is_err());
        assert!(from_json(r#"{"m":1,"n":1,"cells":[{"r":2,"c":1,"v":3}]}"#).is_err());
        assert!(from_json(r#"{"m":1,"n":1,"cells":[{"r":1,"c":1,"v":3},{"r":1,"c":1,"v":4}]}"#).is_err());
        assert!(from_csv("a,b\n1,1\n3\n").is_err());
        assert!(from_csv("m,n\n1,2\n3\n").is_err());
        assert!(from_csv("m,n\n2,1\n3\n").is_err());
        assert!(from_csv("m,n\n1,1\nx\n").is_err());
        assert!("xml".parse::<Format>().is_err());
        assert_eq!("JSON".parse::<Format>().unwrap(), Format::Json);
    }
}
