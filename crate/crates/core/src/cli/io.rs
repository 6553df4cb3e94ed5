//! Matrix file format: `{"rows": r, "cols": c, "data": [[...], ...]}` where each
//! entry is a JSON number, a `"p/q"` string or a `[re, im]` pair.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational, RationalMatrix};
use crate::float::ComplexMatrix;

/// A parsed matrix file. Integer numbers and `"p/q"` strings give an exact
/// matrix; any non-integer number or complex pair makes it floating.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixInput {
    Exact(RationalMatrix),
    Float { m: ComplexMatrix, complex: bool },
}

impl MatrixInput {
    pub fn to_float(&self) -> ComplexMatrix {
        match self {
            MatrixInput::Exact(m) => ComplexMatrix::from_rational(m),
            MatrixInput::Float { m, .. } => m.clone(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, MatrixInput::Float { complex: true, .. })
    }
}

enum Entry {
    Int(Rational),
    Ratio(Rational),
    Real(f64),
    Complex(Complex64),
}

fn number(v: &Value) -> Option<f64> {
    v.as_f64().filter(|x| x.is_finite())
}

fn entry(v: &Value, i: usize, j: usize) -> Result<Entry> {
    let bad = |what: &str| Error::Parse(format!("entry ({i}, {j}): {what}"));
    match v {
        Value::Number(n) => {
            if let Some(k) = n.as_i64() {
                Ok(Entry::Int(Rational::from_integer(k.into())))
            } else if let Some(k) = n.as_u64() {
                Ok(Entry::Int(Rational::from_integer(k.into())))
            } else {
                number(v)
                    .map(Entry::Real)
                    .ok_or_else(|| bad("not a finite number"))
            }
        }
        Value::String(s) => parse_rational(s)
            .map(Entry::Ratio)
            .map_err(|e| bad(&e.to_string())),
        Value::Array(pair) if pair.len() == 2 => match (number(&pair[0]), number(&pair[1])) {
            (Some(re), Some(im)) => Ok(Entry::Complex(Complex64::new(re, im))),
            _ => Err(bad("complex entries must be [re, im] with finite numbers")),
        },
        _ => Err(bad("expected a number, a \"p/q\" string or [re, im]")),
    }
}

fn dimension(obj: &serde_json::Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| Error::Parse(format!("missing or invalid '{key}'")))
}

pub fn parse_matrix_value(v: &Value) -> Result<MatrixInput> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("matrix file must be a JSON object".into()))?;
    let rows = dimension(obj, "rows")?;
    let cols = dimension(obj, "cols")?;
    let grid = obj
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing or invalid 'data'".into()))?;
    if rows == 0 || cols == 0 {
        return Err(Error::Parse("rows and cols must be positive".into()));
    }
    if grid.len() != rows {
        return Err(Error::Parse(format!(
            "expected {rows} rows, found {}",
            grid.len()
        )));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in grid.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("row {i} is not an array")))?;
        if row.len() != cols {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for (j, v) in row.iter().enumerate() {
            entries.push(entry(v, i, j)?);
        }
    }
    let has_ratio = entries.iter().any(|e| matches!(e, Entry::Ratio(_)));
    let has_complex = entries.iter().any(|e| matches!(e, Entry::Complex(_)));
    if has_ratio && has_complex {
        return Err(Error::Parse(
            "rational and complex entries cannot be mixed".into(),
        ));
    }
    if entries
        .iter()
        .all(|e| matches!(e, Entry::Int(_) | Entry::Ratio(_)))
    {
        let data = entries
            .into_iter()
            .map(|e| match e {
                Entry::Int(q) | Entry::Ratio(q) => q,
                _ => unreachable!(),
            })
            .collect();
        return Ok(MatrixInput::Exact(RationalMatrix::new(rows, cols, data)?));
    }
    let data = entries
        .into_iter()
        .map(|e| match e {
            Entry::Int(q) | Entry::Ratio(q) => Complex64::new(rational_to_f64(&q), 0.0),
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex(z) => z,
        })
        .collect();
    Ok(MatrixInput::Float {
        m: ComplexMatrix::new(rows, cols, data)?,
        complex: has_complex,
    })
}

pub fn parse_matrix(text: &str) -> Result<MatrixInput> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    parse_matrix_value(&v)
}

pub fn read_matrix_file(path: &std::path::Path) -> Result<MatrixInput> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}

fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn rational_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

/// A real number when the imaginary part is exactly zero and `complex` is not
/// forced, otherwise `[re, im]`.
pub fn complex_json(z: Complex64, complex: bool) -> Value {
    if complex || z.im != 0.0 {
        json!([z.re, z.im])
    } else {
        json!(z.re)
    }
}

pub fn exact_matrix_json(m: &RationalMatrix) -> Value {
    let data: Vec<Vec<Value>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(rational_json).collect())
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "data": data })
}

/// Entries are written as real numbers unless `complex` is set or some entry
/// has a nonzero imaginary part, in which case every entry is `[re, im]`.
pub fn float_matrix_json(m: &ComplexMatrix, complex: bool) -> Value {
    let complex = complex || m.data().iter().any(|z| z.im != 0.0);
    let data: Vec<Vec<Value>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| complex_json(m[(i, j)], complex))
                .collect()
        })
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "data": data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn integers_and_ratios_are_exact() {
        let m = parse_matrix(r#"{"rows":2,"cols":2,"data":[[1,"-3/4"],[0,"5"]]}"#).unwrap();
        let MatrixInput::Exact(m) = m else { panic!() };
        assert_eq!(m[(0, 1)], ratio(-3, 4));
        assert_eq!(m[(1, 1)], ratio(5, 1));
    }

    #[test]
    fn decimals_and_pairs_are_float() {
        let m = parse_matrix(r#"{"rows":1,"cols":2,"data":[[0.5, 2]]}"#).unwrap();
        assert!(matches!(m, MatrixInput::Float { complex: false, .. }));
        let m = parse_matrix(r#"{"rows":1,"cols":2,"data":[[[1, -2], 2]]}"#).unwrap();
        assert!(m.is_complex());
        assert_eq!(m.to_float()[(0, 0)], Complex64::new(1.0, -2.0));
    }

    #[test]
    fn rejects_bad_files() {
        for text in [
            r#"{"rows":1,"cols":2,"data":[["1/2", [1, 0]]]}"#,
            r#"{"rows":2,"cols":2,"data":[[1, 2]]}"#,
            r#"{"rows":1,"cols":2,"data":[[1, 2, 3]]}"#,
            r#"{"rows":1,"cols":1,"data":[["1/0"]]}"#,
            r#"{"rows":1,"cols":1,"data":[[true]]}"#,
            r#"{"rows":0,"cols":0,"data":[]}"#,
            r#"[1, 2]"#,
            "not json",
        ] {
            assert!(matches!(parse_matrix(text), Err(Error::Parse(_))), "{text}");
        }
    }

    #[test]
    fn round_trips() {
        let e = RationalMatrix::new(1, 2, vec![ratio(-7, 3), ratio(0, 1)]).unwrap();
        assert_eq!(
            parse_matrix(&exact_matrix_json(&e).to_string()).unwrap(),
            MatrixInput::Exact(e)
        );

        let f = ComplexMatrix::new(
            1,
            2,
            vec![
                Complex64::new(0.1 + 0.2, 0.0),
                Complex64::new(-1e-300, 3.0f64.sqrt()),
            ],
        )
        .unwrap();
        let back = parse_matrix(&float_matrix_json(&f, false).to_string()).unwrap();
        assert_eq!(back.to_float(), f);
    }
}
