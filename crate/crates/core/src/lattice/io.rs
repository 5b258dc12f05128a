//! JSON lattice files:
//! `{"shape": [..], "axes": [[..], ..], "values": [..], "interpretation": "pmf" | "density"}`.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use super::{Interpretation, LatticeDensity};
use crate::error::{Error, Result};

pub fn to_json_string(density: &LatticeDensity) -> String {
    let doc = json!({
        "shape": density.shape(),
        "axes": density.axes(),
        "values": density.values(),
        "interpretation": density.interpretation().as_str(),
    });
    serde_json::to_string_pretty(&doc).expect("lattice values are finite")
}

pub fn write_lattice(density: &LatticeDensity, path: impl AsRef<Path>) -> Result<()> {
    let mut text = to_json_string(density);
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_lattice(path: impl AsRef<Path>) -> Result<LatticeDensity> {
    from_json_str(&fs::read_to_string(path)?)
}

/// Parses a lattice document, naming the offending field on failure.
pub fn from_json_str(text: &str) -> Result<LatticeDensity> {
    let doc: Value = serde_json::from_str(text)?;
    let obj = doc.as_object().ok_or(Error::InvalidLattice {
        field: "document",
        reason: "expected a JSON object".into(),
    })?;

    let shape = field(obj, "shape")?
        .as_array()
        .ok_or_else(|| invalid("shape", "expected an array"))?
        .iter()
        .map(|v| match v.as_u64() {
            Some(n) if n > 0 => Ok(n as usize),
            _ => Err(invalid("shape", format!("{v} is not a positive integer"))),
        })
        .collect::<Result<Vec<usize>>>()?;

    let axes_raw = field(obj, "axes")?
        .as_array()
        .ok_or_else(|| invalid("axes", "expected an array of arrays"))?;
    if axes_raw.len() != shape.len() {
        return Err(invalid(
            "axes",
            format!(
                "{} axes for a shape of rank {}",
                axes_raw.len(),
                shape.len()
            ),
        ));
    }
    let mut axes = Vec::with_capacity(shape.len());
    for (k, (axis, &n)) in axes_raw.iter().zip(&shape).enumerate() {
        let coords = number_array(axis, "axes")?;
        if coords.len() != n {
            return Err(invalid(
                "axes",
                format!("axis {k} has {} coordinates, shape says {n}", coords.len()),
            ));
        }
        axes.push(coords);
    }

    let values = number_array(field(obj, "values")?, "values")?;

    let interpretation = field(obj, "interpretation")?
        .as_str()
        .ok_or_else(|| invalid("interpretation", "expected a string"))?
        .parse::<Interpretation>()?;

    LatticeDensity::new(axes, values, interpretation)
}

fn field<'a>(obj: &'a Map<String, Value>, name: &'static str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| invalid(name, "missing field"))
}

fn number_array(v: &Value, name: &'static str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| invalid(name, "expected an array of numbers"))?
        .iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| invalid(name, format!("{x} is not a number")))
        })
        .collect()
}

fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidLattice {
        field,
        reason: reason.into(),
    }
}
