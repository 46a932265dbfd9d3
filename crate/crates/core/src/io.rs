//! Readers and writers for point sets, matrices and graph lists.
//!
//! Point-set JSON:
//!
//! ```json
//! {"dim": 2, "mode": "exact", "points": [["0", "1/2"], [1, 0.25]]}
//! ```
//!
//! `mode` defaults to `"float"`. Coordinates are JSON numbers or strings
//! holding integers, decimals or fractions `p/q`. In exact mode a JSON number
//! is read as its shortest decimal representation, so `0.1` means 1/10.
//!
//! Point-set CSV and matrix CSV are float-only, one row per line, with `#`
//! comment lines.
//!
//! Graph lists hold one graph per line: `n m u1 v1 u2 v2 … um vm` with
//! 0-based vertices. Blank lines and `#` comments are skipped.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{
    format_rational, parse_rational, rational_from_f64_decimal, Field, Mode, Rational,
};
use crate::geometry::{ExactSet, FloatSet, PointSet};
use crate::matrix::Matrix;
use crate::tdgraph::Graph;

/// A point set whose arithmetic mode is known only at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyPointSet {
    Float(FloatSet),
    Exact(ExactSet),
}

impl AnyPointSet {
    pub fn mode(&self) -> Mode {
        match self {
            AnyPointSet::Float(_) => Mode::Float,
            AnyPointSet::Exact(_) => Mode::Exact,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyPointSet::Float(s) => s.len(),
            AnyPointSet::Exact(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyPointSet::Float(s) => s.dim(),
            AnyPointSet::Exact(s) => s.dim(),
        }
    }

    pub fn to_float(&self) -> FloatSet {
        match self {
            AnyPointSet::Float(s) => s.clone(),
            AnyPointSet::Exact(s) => s.to_float(),
        }
    }

    /// Converts float coordinates through their shortest decimal form.
    pub fn to_exact(&self) -> Result<ExactSet> {
        match self {
            AnyPointSet::Exact(s) => Ok(s.clone()),
            AnyPointSet::Float(s) => {
                let pts = s
                    .points()
                    .iter()
                    .map(|p| p.iter().map(|&x| rational_from_f64_decimal(x)).collect())
                    .collect::<Result<Vec<Vec<_>>>>()?;
                PointSet::new(s.dim(), pts)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyPointSet::Float(s) => point_set_to_json(s),
            AnyPointSet::Exact(s) => point_set_to_json(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    dim: usize,
    #[serde(default = "default_mode")]
    mode: Mode,
    points: Vec<Vec<Value>>,
}

fn default_mode() -> Mode {
    Mode::Float
}

fn coord_to_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => {
            let x = n.as_f64().ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("bad number {n}"),
            })?;
            rational_from_f64_decimal(x)
        }
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse {
            line: 0,
            msg: format!("coordinate must be a number or string, got {other}"),
        }),
    }
}

fn coord_to_f64(v: &Value) -> Result<f64> {
    let x = match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => Some(parse_rational(s)?.to_f64()),
        _ => None,
    };
    match x {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(Error::Parse {
            line: 0,
            msg: format!("coordinate {v} is not a finite number"),
        }),
    }
}

pub fn parse_point_set_json(text: &str) -> Result<AnyPointSet> {
    let wire: Wire = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    match wire.mode {
        Mode::Float => {
            let pts = wire
                .points
                .iter()
                .map(|p| p.iter().map(coord_to_f64).collect())
                .collect::<Result<Vec<Vec<f64>>>>()?;
            Ok(AnyPointSet::Float(PointSet::new(wire.dim, pts)?))
        }
        Mode::Exact => {
            let pts = wire
                .points
                .iter()
                .map(|p| p.iter().map(coord_to_rational).collect())
                .collect::<Result<Vec<Vec<Rational>>>>()?;
            Ok(AnyPointSet::Exact(PointSet::new(wire.dim, pts)?))
        }
    }
}

fn coord_json<T: Field>(x: &T) -> Value {
    match T::MODE {
        Mode::Float => serde_json::json!(x.to_f64()),
        Mode::Exact => Value::String(format_rational(&x.to_rational().expect("exact value"))),
    }
}

pub fn point_set_to_json<T: Field>(s: &PointSet<T>) -> Value {
    let pts: Vec<Value> = s
        .points()
        .iter()
        .map(|p| Value::Array(p.iter().map(coord_json).collect()))
        .collect();
    serde_json::json!({
        "dim": s.dim(),
        "mode": T::MODE,
        "points": pts,
    })
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes())
}

/// Rows of finite floats, rejecting ragged input.
fn parse_float_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in csv_reader(text).records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let row = rec
            .iter()
            .map(|f| match f.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(Error::Parse {
                    line,
                    msg: format!("not a finite number: {f:?}"),
                }),
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Ragged {
                    row: rows.len(),
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn parse_point_set_csv(text: &str) -> Result<FloatSet> {
    let rows = parse_float_rows(text)?;
    let dim = rows.first().map(Vec::len).ok_or(Error::Empty)?;
    PointSet::new(dim, rows)
}

pub fn point_set_to_csv(s: &FloatSet) -> String {
    let mut out = String::new();
    for p in s.points() {
        let line: Vec<String> = p.iter().map(|x| format!("{x:?}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// A dense square matrix, one row per line.
pub fn parse_matrix_csv(text: &str) -> Result<Matrix<f64>> {
    let rows = parse_float_rows(text)?;
    if rows.is_empty() {
        return Err(Error::Empty);
    }
    if rows.len() != rows[0].len() {
        return Err(Error::SizeMismatch(format!(
            "matrix has {} rows and {} columns",
            rows.len(),
            rows[0].len()
        )));
    }
    Matrix::from_rows(rows)
}

pub fn parse_graph_list(text: &str) -> Result<Vec<Graph>> {
    let mut graphs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("not a nonnegative integer: {t:?}"),
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        let (n, m) = match nums.as_slice() {
            [n, m, ..] => (*n, *m),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "expected header `n m`".into(),
                })
            }
        };
        if nums.len() != 2 + 2 * m {
            return Err(Error::Parse {
                line: line_no,
                msg: format!(
                    "header announces {m} edges, found {} numbers",
                    nums.len() - 2
                ),
            });
        }
        let edges = nums[2..].chunks(2).map(|e| (e[0], e[1])).collect();
        let g = Graph::new(n, edges).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        graphs.push(g);
    }
    Ok(graphs)
}

pub fn graph_to_line(g: &Graph) -> String {
    let mut parts = vec![g.n().to_string(), g.edges().len().to_string()];
    for (u, v) in g.edges() {
        parts.push(u.to_string());
        parts.push(v.to_string());
    }
    parts.join(" ")
}

/// Serde adapter for point-set fields inside larger reports.
pub fn serialize_point_set<T: Field, S: serde::Serializer>(
    s: &PointSet<T>,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    point_set_to_json(s).serialize(ser)
}
