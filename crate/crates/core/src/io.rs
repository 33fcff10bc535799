//! Reading and writing spaces, trees and ball graphs.
//!
//! Space documents come as JSON,
//! `{"points": ["p1", ...], "matrix": [["0", "3", ...], ...]}`,
//! or as CSV with a header row of point names over a square body of
//! numerals. Distances are strings (`"3"`, `"0.5"`, `"7/4"`); JSON integers
//! are accepted too, JSON floats are not.

use serde_json::{json, Value};

use crate::balls::GammaGraph;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::space::Space;
use crate::tree::{ReprTree, TreeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// `.csv` files are CSV, everything else JSON.
    pub fn from_path(path: &str) -> Format {
        if path.to_ascii_lowercase().ends_with(".csv") {
            Format::Csv
        } else {
            Format::Json
        }
    }
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn dist_at(value: &Value, location: String) -> Result<Dist> {
    let text = match value {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_u64() || n.is_i64() => n.to_string(),
        Value::Number(_) => {
            return Err(parse_err(location, "floating-point numbers are not exact; quote the value"))
        }
        other => return Err(parse_err(location, format!("expected a distance, found {other}"))),
    };
    text.parse::<Dist>()
        .map_err(|e| parse_err(location, e.to_string()))
}

/// Maps table errors raised by [`Space::new`] to positioned parse errors.
fn positioned(err: Error, names: &[String]) -> Error {
    let at = |i: usize, j: usize| format!("matrix[{i}][{j}] ({}, {})", names[i], names[j]);
    match err {
        Error::Asymmetric(i, j) => parse_err(at(i, j), "table is not symmetric"),
        Error::ZeroOffDiagonal(i, j) => parse_err(at(i, j), "zero distance between distinct points"),
        Error::NonzeroDiagonal(i) => parse_err(at(i, i), "diagonal entry must be 0"),
        other => other,
    }
}

pub fn parse(text: &str, format: Format) -> Result<Space> {
    match format {
        Format::Json => parse_json(text),
        Format::Csv => parse_csv(text),
    }
}

pub fn parse_json(text: &str) -> Result<Space> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    let points = doc
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("points", "expected an array of point names"))?;
    let names = points
        .iter()
        .enumerate()
        .map(|(i, p)| match p {
            Value::String(s) => Ok(s.clone()),
            _ => Err(parse_err(format!("points[{i}]"), "point names must be strings")),
        })
        .collect::<Result<Vec<String>>>()?;
    let matrix = doc
        .get("matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("matrix", "expected an array of rows"))?;
    if matrix.len() != names.len() {
        return Err(parse_err(
            "matrix",
            format!("{} rows for {} points", matrix.len(), names.len()),
        ));
    }
    let mut rows = Vec::with_capacity(names.len());
    for (i, row) in matrix.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| parse_err(format!("matrix[{i}]"), "expected an array"))?;
        if row.len() != names.len() {
            return Err(parse_err(
                format!("matrix[{i}]"),
                format!("{} entries for {} points", row.len(), names.len()),
            ));
        }
        rows.push(
            row.iter()
                .enumerate()
                .map(|(j, v)| dist_at(v, format!("matrix[{i}][{j}]")))
                .collect::<Result<Vec<Dist>>>()?,
        );
    }
    Space::new(names.clone(), rows).map_err(|e| positioned(e, &names))
}

pub fn parse_csv(text: &str) -> Result<Space> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let names: Vec<String> = reader
        .headers()
        .map_err(|e| parse_err("row 1", e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::with_capacity(names.len());
    for (r, record) in reader.records().enumerate() {
        // header is row 1
        let row_no = r + 2;
        let record = record.map_err(|e| parse_err(format!("row {row_no}"), e.to_string()))?;
        if record.len() != names.len() {
            return Err(parse_err(
                format!("row {row_no}"),
                format!("{} fields for {} points", record.len(), names.len()),
            ));
        }
        rows.push(
            record
                .iter()
                .enumerate()
                .map(|(c, field)| {
                    field
                        .parse::<Dist>()
                        .map_err(|e| parse_err(format!("row {row_no}, column {}", c + 1), e.to_string()))
                })
                .collect::<Result<Vec<Dist>>>()?,
        );
    }
    if rows.len() != names.len() {
        return Err(parse_err(
            format!("row {}", rows.len() + 2),
            format!("{} data rows for {} points", rows.len(), names.len()),
        ));
    }
    Space::new(names.clone(), rows).map_err(|e| positioned(e, &names))
}

pub fn space_to_value(space: &Space) -> Value {
    let matrix: Vec<Vec<String>> = space
        .rows()
        .into_iter()
        .map(|row| row.into_iter().map(|d| d.to_string()).collect())
        .collect();
    json!({ "points": space.names(), "matrix": matrix })
}

pub fn emit(space: &Space, format: Format) -> String {
    match format {
        Format::Json => {
            serde_json::to_string_pretty(&space_to_value(space)).expect("JSON value serializes") + "\n"
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(space.names()).expect("in-memory write");
            for row in space.rows() {
                writer
                    .write_record(row.iter().map(Dist::to_string))
                    .expect("in-memory write");
            }
            String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
        }
    }
}

/// Nested `{"label": "3", "children": [...]}`, with `"point"` on leaves.
pub fn tree_to_value(tree: &ReprTree) -> Value {
    fn go(spec: &TreeSpec) -> Value {
        match spec {
            TreeSpec::Leaf(name) => json!({ "label": "0", "point": name }),
            TreeSpec::Inner(label, children) => json!({
                "label": label.to_string(),
                "children": children.iter().map(go).collect::<Vec<_>>(),
            }),
        }
    }
    go(&tree.to_spec())
}

pub fn tree_from_value(value: &Value) -> Result<ReprTree> {
    fn go(v: &Value, path: String) -> Result<TreeSpec> {
        if let Some(point) = v.get("point") {
            let name = point
                .as_str()
                .ok_or_else(|| parse_err(&path, "point must be a string"))?;
            if let Some(label) = v.get("label") {
                if !dist_at(label, format!("{path}.label"))?.is_zero() {
                    return Err(parse_err(format!("{path}.label"), "leaves are labeled 0"));
                }
            }
            return Ok(TreeSpec::Leaf(name.to_string()));
        }
        let label = dist_at(
            v.get("label").ok_or_else(|| parse_err(&path, "missing label"))?,
            format!("{path}.label"),
        )?;
        let children = v
            .get("children")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(&path, "inner node needs a children array"))?
            .iter()
            .enumerate()
            .map(|(i, c)| go(c, format!("{path}.children[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(TreeSpec::Inner(label, children))
    }
    ReprTree::from_spec(&go(value, "root".to_string())?)
}

pub fn parse_tree_json(text: &str) -> Result<ReprTree> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    tree_from_value(&value)
}

fn leaf_set(tree: &ReprTree, points: &[usize]) -> String {
    let names: Vec<&str> = points.iter().map(|&p| tree.names()[p].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// One DOT node per tree vertex, annotated with its label and leaf set.
pub fn tree_to_dot(tree: &ReprTree) -> String {
    let mut out = String::from("digraph repr_tree {\n");
    for (id, node) in tree.nodes().iter().enumerate() {
        out.push_str(&format!(
            "  n{id} [label=\"label={}\\n{}\"];\n",
            node.label,
            leaf_set(tree, &node.leaves)
        ));
    }
    for (parent, child) in tree.edges() {
        out.push_str(&format!("  n{parent} -> n{child};\n"));
    }
    out.push_str("}\n");
    out
}

pub fn gamma_to_value(space: &Space, gamma: &GammaGraph) -> Value {
    let balls: Vec<Vec<&str>> = gamma
        .balls
        .iter()
        .map(|b| b.members().iter().map(|&p| space.name(p)).collect())
        .collect();
    json!({
        "balls": balls,
        "edges": gamma.edges,
        "root": gamma.root,
    })
}

pub fn gamma_to_dot(space: &Space, gamma: &GammaGraph) -> String {
    let mut out = String::from("graph gamma {\n");
    for (i, ball) in gamma.balls.iter().enumerate() {
        let names: Vec<&str> = ball.members().iter().map(|&p| space.name(p)).collect();
        out.push_str(&format!("  b{i} [label=\"{{{}}}\"];\n", names.join(",")));
    }
    for &(a, b) in &gamma.edges {
        out.push_str(&format!("  b{a} -- b{b};\n"));
    }
    out.push_str("}\n");
    out
}
