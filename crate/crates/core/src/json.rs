//! JSON representations shared by the CLI and the browser demo.
//!
//! Rationals travel as decimal strings `"n"` or `"n/d"`; integers are also
//! accepted on input.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::HermGram;
use crate::matrix::Matrix;
use crate::padic::{format_rational, parse_rational, Place, Rational};
use crate::ramified::{OhElement, RamifiedContext};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalRepr {
    Text(String),
    Int(i64),
}

impl RationalRepr {
    pub fn parse(s: &str) -> Result<Rational> {
        parse_rational(s)
    }

    pub fn into_rational(self) -> Result<Rational> {
        match self {
            RationalRepr::Text(s) => parse_rational(&s),
            RationalRepr::Int(n) => Ok(crate::padic::rat(n)),
        }
    }
}

/// `#[serde(with = "crate::json::rational")]` adapter.
pub mod rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        RationalRepr::deserialize(d)?
            .into_rational()
            .map_err(serde::de::Error::custom)
    }
}

/// Converts nested JSON rows into a square matrix.
pub fn square_matrix<E: Clone>(rows: Vec<Vec<E>>) -> Result<Matrix<E>> {
    let m = Matrix::from_rows(rows)?;
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::Dimension(format!(
            "expected a nonempty square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

/// A rational that serializes as a string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RationalString(#[serde(with = "rational")] pub Rational);

fn schema(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        location: location.into(),
        message: message.into(),
    }
}

/// Parses a request document, reporting syntax errors by position.
pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        schema(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

/// Deserializes `value` into `T`, reporting failures at `location`.
pub fn from_value<T: DeserializeOwned>(value: &Value, location: &str) -> Result<T> {
    T::deserialize(value).map_err(|e| schema(location, e.to_string()))
}

/// A rational given as `"n"`, `"n/d"` or a JSON integer.
pub fn rational_at(value: &Value, location: &str) -> Result<Rational> {
    match value {
        Value::String(s) => parse_rational(s).map_err(|e| schema(location, e.to_string())),
        Value::Number(n) => n.as_i64().map(crate::padic::rat).ok_or_else(|| {
            schema(
                location,
                format!("{n} is not an integer; use a string \"n/d\""),
            )
        }),
        _ => Err(schema(location, "expected a rational")),
    }
}

/// A matrix entry: `{"a": .., "b": ..}` for `a + bπ`, or a bare rational.
pub fn element_at(value: &Value, location: &str) -> Result<OhElement> {
    match value {
        Value::Object(_) => from_value(value, location),
        _ => rational_at(value, location).map(OhElement::from_rational),
    }
}

/// Rejects keys of `obj` outside `allowed`.
pub fn check_keys(value: &Value, allowed: &[&str], location: &str) -> Result<()> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema(location, "expected an object"))?;
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema(
                format!("{location}.{key}"),
                format!("unknown field; expected one of {allowed:?}"),
            ));
        }
    }
    Ok(())
}

/// Rows of a local matrix document: either a bare array of rows or
/// `{"matrix": rows}`.
pub fn matrix_rows(doc: &Value) -> Result<Vec<Vec<OhElement>>> {
    let (rows, base) = match doc {
        Value::Array(_) => (doc, "$".to_string()),
        Value::Object(obj) => {
            check_keys(doc, &["matrix"], "$")?;
            let m = obj
                .get("matrix")
                .ok_or_else(|| schema("$", "missing field `matrix`"))?;
            (m, "$.matrix".to_string())
        }
        _ => return Err(schema("$", "expected a matrix or {\"matrix\": ...}")),
    };
    let rows = rows
        .as_array()
        .ok_or_else(|| schema(base.as_str(), "expected an array of rows"))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let loc = format!("{base}[{i}]");
            let row = row
                .as_array()
                .ok_or_else(|| schema(loc.as_str(), "expected an array"))?;
            row.iter()
                .enumerate()
                .map(|(j, v)| element_at(v, &format!("{loc}[{j}]")))
                .collect()
        })
        .collect()
}

/// A Hermitian Gram matrix over `ctx` from a matrix document.
pub fn local_gram(doc: &Value, ctx: &RamifiedContext) -> Result<HermGram> {
    HermGram::from_rows(ctx.clone(), matrix_rows(doc)?)
}

/// `{"a": .., "b": .., "place": "real" | p}`.
pub fn hilbert_request(doc: &Value) -> Result<(Rational, Rational, Place)> {
    check_keys(doc, &["a", "b", "place"], "$")?;
    let field = |k: &str| {
        doc.get(k)
            .ok_or_else(|| schema("$", format!("missing field `{k}`")))
    };
    let a = rational_at(field("a")?, "$.a")?;
    let b = rational_at(field("b")?, "$.b")?;
    let place = match field("place")? {
        Value::String(s) if matches!(s.as_str(), "real" | "inf" | "infinity") => Place::Real,
        Value::String(s) => Place::Prime(s.parse().map_err(|_| {
            schema(
                "$.place",
                format!("expected \"real\" or a prime, got {s:?}"),
            )
        })?),
        Value::Number(n) => Place::Prime(
            n.as_u64()
                .ok_or_else(|| schema("$.place", format!("expected a prime, got {n}")))?,
        ),
        _ => return Err(schema("$.place", "expected \"real\" or a prime")),
    };
    Ok((a, b, place))
}

/// Location string for errors that point at a matrix entry.
pub fn error_location(e: &Error) -> Option<String> {
    match e {
        Error::Schema { location, .. } => Some(location.clone()),
        _ => e.location().map(|(r, c)| format!("$.matrix[{r}][{c}]")),
    }
}
