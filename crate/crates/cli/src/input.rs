//! Parsing of matrices, Schur functions and coefficient functions from the command line.

use std::fs;

use serde::Deserialize;
use serde_json::Value;

use schur_order::numeric::{Complex64, ComplexMatrix};
use schur_order::redheffer::{diagonal_inner_family, RedhefferCoefficients};
use schur_order::schur::{Node, SchurFunction};

use crate::CliError;

#[derive(Debug, Clone)]
pub enum Input {
    Matrix(ComplexMatrix),
    Function(SchurFunction),
}

impl Input {
    /// The value when the input does not depend on `λ`.
    pub fn constant(&self) -> Option<ComplexMatrix> {
        match self {
            Input::Matrix(m) => Some(m.clone()),
            Input::Function(f) => match f.node() {
                Node::Const(m) => Some(m.clone()),
                _ => None,
            },
        }
    }

    pub fn into_function(self) -> Result<SchurFunction, CliError> {
        match self {
            Input::Matrix(m) => SchurFunction::constant(m).map_err(|e| CliError::input(e.to_string())),
            Input::Function(f) => Ok(f),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

fn nested_matrix(v: &Value) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<Entry>> = serde_json::from_value(v.clone())
        .map_err(|e| CliError::input(format!("matrix must be a list of rows of numbers or [re, im] pairs: {e}")))?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::input("matrix rows must be non-empty and of equal length"));
    }
    let data: Vec<Complex64> = rows
        .into_iter()
        .flatten()
        .map(|e| match e {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        })
        .collect();
    let rows = data.len() / cols;
    ComplexMatrix::new(rows, cols, data).map_err(|e| CliError::input(e.to_string()))
}

fn syntax(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::input(format!("malformed JSON at line {}, column {}: {e}", e.line(), e.column()))
    })
}

fn typed<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::input(format!("invalid input at line {}, column {}: {e}", e.line(), e.column()))
    })
}

/// Inline JSON, `@path` or a bare path to a JSON file.
fn read_source(raw: &str) -> Result<String, CliError> {
    let s = raw.trim();
    if s.starts_with('{') || s.starts_with('[') {
        return Ok(s.to_string());
    }
    let path = s.strip_prefix('@').unwrap_or(s);
    fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {path}: {e}")))
}

/// Accepts `[[0.5]]-const`, a nested row list, matrix JSON `{"rows", "cols", "data"}`,
/// a function tree `{"kind": ...}`, or a file holding one of these.
pub fn parse_input(raw: &str) -> Result<Input, CliError> {
    if let Some(body) = raw.trim().strip_suffix("-const") {
        return nested_matrix(&syntax(body)?).map(Input::Matrix);
    }
    let text = read_source(raw)?;
    let text = text.trim();
    if let Some(body) = text.strip_suffix("-const") {
        return nested_matrix(&syntax(body)?).map(Input::Matrix);
    }
    match syntax(text)? {
        v @ Value::Array(_) => nested_matrix(&v).map(Input::Matrix),
        Value::Object(map) if map.contains_key("kind") => typed(text).map(Input::Function),
        Value::Object(map) if map.contains_key("rows") => typed(text).map(Input::Matrix),
        _ => Err(CliError::input("expected a matrix or a function object with a \"kind\" field")),
    }
}

/// `family:d1,d2,..`, coefficient JSON `{"phi11", ..}`, or a constant matrix with `split`.
pub fn parse_coefficients(raw: &str, split: Option<(usize, usize)>) -> Result<RedhefferCoefficients, CliError> {
    if let Some(list) = raw.trim().strip_prefix("family:") {
        let deltas = parse_list(list)?;
        return diagonal_inner_family(&deltas).map(|f| f.coefficients).map_err(|e| CliError::input(e.to_string()));
    }
    let text = read_source(raw)?;
    if let Value::Object(map) = syntax(text.trim())? {
        if map.contains_key("phi11") {
            return typed(text.trim());
        }
    }
    let m = parse_input(raw)?
        .constant()
        .ok_or_else(|| CliError::input("a coefficient function must be block JSON, family:.. or a constant"))?;
    let (e, e_prime) = split.ok_or_else(|| CliError::input("a constant coefficient matrix needs --split E,E'"))?;
    RedhefferCoefficients::constant(&m, e, e_prime).map_err(|e| CliError::input(e.to_string()))
}

pub fn parse_list(raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::input(format!("bad number {s:?}: {e}"))))
        .collect()
}

pub fn parse_split(raw: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(CliError::input(format!("bad split {raw:?}"))),
        },
        _ => Err(CliError::input(format!("split must be E,E' (got {raw:?})"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthand_and_nested() {
        let Input::Matrix(m) = parse_input("[[0.5]]-const").unwrap() else { panic!() };
        assert_eq!(m.get(0, 0), Complex64::new(0.5, 0.0));
        let Input::Matrix(m) = parse_input("[[1, [0, 2]], [3, 4]]").unwrap() else { panic!() };
        assert_eq!(m.shape(), (2, 2));
        assert_eq!(m.get(0, 1), Complex64::new(0.0, 2.0));
        assert!(parse_input("[[1, 2], [3]]").is_err());
    }

    #[test]
    fn functions_and_errors() {
        let f = parse_input(r#"{"kind": "blaschke", "omega": [0.3, 0], "alpha": 0}"#).unwrap();
        assert!(matches!(f, Input::Function(_)));
        let err = parse_input(r#"{"kind": "const", "value": "#).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        assert!(parse_input("/no/such/file.json").is_err());
    }

    #[test]
    fn coefficients() {
        let phi = parse_coefficients("family:0.5,0.8", None).unwrap();
        assert_eq!(phi.dims(), (2, 2, 2, 2));
        assert!(parse_coefficients("[[0.1, 0.2], [0.3, 0.4]]", None).is_err());
        let phi = parse_coefficients("[[0.1, 0.2], [0.3, 0.4]]", Some((1, 1))).unwrap();
        assert_eq!(phi.dims(), (1, 1, 1, 1));
    }
}
