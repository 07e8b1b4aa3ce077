//! Text formats for complexes, samples and fields, and JSON exports.
//!
//! Inputs:
//! - OFF: optional `OFF` line, a counts line `nv nf [ne]`, `nv` coordinate
//!   lines (ignored), then `nf` facet lines `k v1 .. vk`.
//! - facets: one facet per line as whitespace- or comma-separated vertex ids.
//! - grid: header `grid d e1 .. ed` (cubes per axis) followed by the
//!   `(e1+1) * .. * (ed+1)` vertex values in row-major order.
//! - values CSV: `vertex_id,value` per line; a non-numeric first line is a
//!   header.
//! - field JSON: `{"complex": {"cells": [{"dim", "faces"}]}, "pairs", "critical"}`.
//!
//! `#` starts a comment in every text format.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{CellComplex, CellId, ComplexStats};
use crate::morse::{FieldJson, GradientField, MorseError};
use crate::pathfind::Route;
use crate::regions::{Decomposition, RepairReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number; 0 when the error concerns the whole input.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap().trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::at(line, format!("invalid {what} '{tok}'")))
}

pub fn parse_off(text: &str) -> Result<Vec<Vec<u32>>, ParseError> {
    let mut lines = content_lines(text).peekable();
    if let Some(&(_, l)) = lines.peek() {
        if l.starts_with("OFF") {
            lines.next();
        }
    }
    let (ln, counts) = lines
        .next()
        .ok_or_else(|| ParseError::at(0, "missing counts line"))?;
    let counts: Vec<usize> = tokens(counts)
        .map(|t| parse_num(t, ln, "count"))
        .collect::<Result<_, _>>()?;
    if counts.len() < 2 {
        return Err(ParseError::at(
            ln,
            "counts line needs vertex and facet counts",
        ));
    }
    let (nv, nf) = (counts[0], counts[1]);
    for _ in 0..nv {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| ParseError::at(0, format!("expected {nv} vertex lines")))?;
        for t in tokens(l) {
            parse_num::<f64>(t, ln, "coordinate")?;
        }
    }
    let mut facets = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| ParseError::at(0, format!("expected {nf} facet lines")))?;
        let toks: Vec<&str> = tokens(l).collect();
        let k: usize = parse_num(toks[0], ln, "facet size")?;
        if toks.len() < k + 1 {
            return Err(ParseError::at(
                ln,
                format!("facet lists fewer than {k} vertices"),
            ));
        }
        let facet = toks[1..=k]
            .iter()
            .map(|t| parse_num(t, ln, "vertex index"))
            .collect::<Result<Vec<u32>, _>>()?;
        if nv > 0 {
            if let Some(&bad) = facet.iter().find(|&&x| x as usize >= nv) {
                return Err(ParseError::at(
                    ln,
                    format!("vertex index {bad} out of range"),
                ));
            }
        }
        facets.push(facet);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(ParseError::at(ln, "unexpected content after the facets"));
    }
    Ok(facets)
}

pub fn parse_facets(text: &str) -> Result<Vec<Vec<u32>>, ParseError> {
    let facets: Vec<Vec<u32>> = content_lines(text)
        .map(|(ln, l)| {
            tokens(l)
                .map(|t| parse_num(t, ln, "vertex index"))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if facets.is_empty() {
        return Err(ParseError::at(0, "no facets"));
    }
    Ok(facets)
}

/// Grid extents (cubes per axis) and row-major vertex values.
#[derive(Clone, Debug, PartialEq)]
pub struct GridData {
    pub extents: Vec<usize>,
    pub values: Vec<f64>,
}

pub fn parse_grid(text: &str) -> Result<GridData, ParseError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| ParseError::at(0, "missing grid header"))?;
    let mut head = tokens(header);
    if head.next() != Some("grid") {
        return Err(ParseError::at(ln, "header must start with 'grid'"));
    }
    let d: usize = parse_num(
        head.next()
            .ok_or_else(|| ParseError::at(ln, "missing dimension"))?,
        ln,
        "dimension",
    )?;
    let extents: Vec<usize> = head
        .map(|t| parse_num(t, ln, "extent"))
        .collect::<Result<_, _>>()?;
    if extents.len() != d {
        return Err(ParseError::at(
            ln,
            format!("dimension {d} but {} extents", extents.len()),
        ));
    }
    if let Some(axis) = extents.iter().position(|&e| e == 0) {
        return Err(ParseError::at(
            ln,
            format!("extent along axis {axis} is zero"),
        ));
    }
    let expected: usize = extents.iter().map(|e| e + 1).product();
    let mut values = Vec::with_capacity(expected);
    let mut last_line = ln;
    for (ln, l) in lines {
        last_line = ln;
        for t in tokens(l) {
            if values.len() == expected {
                return Err(ParseError::at(ln, format!("more than {expected} values")));
            }
            values.push(parse_num(t, ln, "value")?);
        }
    }
    if values.len() != expected {
        return Err(ParseError::at(
            last_line,
            format!("expected {expected} values, found {}", values.len()),
        ));
    }
    Ok(GridData { extents, values })
}

/// `(vertex key, value)` rows.
pub fn parse_values_csv(text: &str) -> Result<Vec<(u32, f64)>, ParseError> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, (ln, l)) in content_lines(text).enumerate() {
        let toks: Vec<&str> = tokens(l).collect();
        if i == 0 && toks.first().is_some_and(|t| t.parse::<u32>().is_err()) {
            continue;
        }
        if toks.len() != 2 {
            return Err(ParseError::at(ln, "expected 'vertex_id,value'"));
        }
        let key: u32 = parse_num(toks[0], ln, "vertex id")?;
        let value: f64 = parse_num(toks[1], ln, "value")?;
        if !value.is_finite() {
            return Err(ParseError::at(
                ln,
                format!("value of vertex {key} is not finite"),
            ));
        }
        if !seen.insert(key) {
            return Err(ParseError::at(ln, format!("vertex {key} listed twice")));
        }
        out.push((key, value));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub dim: usize,
    pub faces: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub cells: Vec<CellJson>,
}

/// A complex with a gradient field on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldFile {
    pub complex: ComplexJson,
    #[serde(flatten)]
    pub field: FieldJson,
}

#[derive(Debug)]
pub enum FieldFileError {
    Parse(ParseError),
    Complex(crate::complex::ComplexError),
    Field(MorseError),
}

impl fmt::Display for FieldFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldFileError::Parse(e) => e.fmt(f),
            FieldFileError::Complex(e) => e.fmt(f),
            FieldFileError::Field(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for FieldFileError {}

pub fn parse_field_json(text: &str) -> Result<(CellComplex, GradientField), FieldFileError> {
    let file: FieldFile = serde_json::from_str(text)
        .map_err(|e| FieldFileError::Parse(ParseError::at(e.line(), e.to_string())))?;
    let dims = file.complex.cells.iter().map(|c| c.dim).collect();
    let faces = file
        .complex
        .cells
        .iter()
        .map(|c| c.faces.iter().map(|&f| CellId(f)).collect())
        .collect();
    let k = CellComplex::from_incidence(dims, faces).map_err(FieldFileError::Complex)?;
    let v = GradientField::from_json(k.len(), &file.field).map_err(FieldFileError::Field)?;
    Ok((k, v))
}

pub fn field_file(k: &CellComplex, v: &GradientField) -> FieldFile {
    FieldFile {
        complex: ComplexJson {
            cells: k
                .cells()
                .map(|c| CellJson {
                    dim: k.dim(c),
                    faces: k.faces(c).iter().map(|f| f.0).collect(),
                })
                .collect(),
        },
        field: v.to_json(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalJson {
    pub id: u32,
    pub dim: usize,
    pub kind: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionJson {
    pub critical: u32,
    pub kind: &'static str,
    pub via_boundary: bool,
    pub cells: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelJson {
    pub cell: u32,
    pub pairs: Vec<[u32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CancellationJson {
    pub upper: u32,
    pub lower: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepairJson {
    pub pushes: Vec<[u32; 2]>,
    pub residual_merges: Vec<u32>,
    pub partial: bool,
    pub cells_added: usize,
}

impl RepairJson {
    pub fn new(report: &RepairReport, cells_added: usize) -> Self {
        RepairJson {
            pushes: report
                .pushes
                .iter()
                .map(|(c, &n)| [c.0, n as u32])
                .collect(),
            residual_merges: report.residual.iter().map(|m| m.cell.0).collect(),
            partial: report.partial,
            cells_added,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionJson {
    pub critical: Vec<CriticalJson>,
    pub regions: Vec<RegionJson>,
    pub ms_labels: Vec<LabelJson>,
    pub stats: ComplexStats,
    pub pair_visits: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cancelled: Vec<CancellationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repair: Option<RepairJson>,
}

impl DecompositionJson {
    pub fn new(decomp: &Decomposition, stats: ComplexStats) -> Self {
        let region = |r: &crate::regions::Region| RegionJson {
            critical: r.critical.0,
            kind: r.kind.as_str(),
            via_boundary: r.via_boundary,
            cells: r.cells.iter().map(|c| c.0).collect(),
        };
        DecompositionJson {
            critical: decomp
                .critical
                .iter()
                .map(|c| CriticalJson {
                    id: c.id.0,
                    dim: c.dim,
                    kind: c.kind.as_str(),
                })
                .collect(),
            regions: decomp
                .descending
                .iter()
                .chain(&decomp.ascending)
                .map(region)
                .collect(),
            ms_labels: decomp
                .ms_label
                .iter()
                .map(|(c, pairs)| LabelJson {
                    cell: c.0,
                    pairs: pairs.iter().map(|(d, a)| [d.0, a.0]).collect(),
                })
                .collect(),
            stats,
            pair_visits: decomp.pair_visits,
            cancelled: Vec::new(),
            repair: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RouteJson {
    pub cells: Vec<u32>,
    pub waypoints: Vec<u32>,
    pub cost: f64,
}

impl From<&Route> for RouteJson {
    fn from(r: &Route) -> Self {
        RouteJson {
            cells: r.cells.iter().map(|c| c.0).collect(),
            waypoints: r.waypoints.iter().map(|c| c.0).collect(),
            cost: r.cost,
        }
    }
}
