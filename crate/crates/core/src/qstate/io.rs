//! `mcb-state/1` state files.
//!
//! ```text
//! { "format": "mcb-state/1", "dims": [d1, ..., dN], "kind": "pure" | "density", "data": ... }
//! ```
//!
//! `pure` data is a flat list of `[re, im]` pairs in canonical (last party
//! fastest) order; `density` data is a list of rows of `[re, im]` pairs.

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use super::{DensityMatrix, DimensionVector, PureState, QuantumState};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub const FORMAT_TAG: &str = "mcb-state/1";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStateFile {
    format: String,
    dims: Vec<usize>,
    kind: String,
    data: Value,
}

fn load_err(msg: impl Into<String>) -> Error {
    Error::Load(msg.into())
}

fn parse_pair(v: &Value, at: &str) -> Result<Complex64> {
    let pair = v.as_array().ok_or_else(|| load_err(format!("{at}: expected [re, im] pair")))?;
    if pair.len() != 2 {
        return Err(load_err(format!("{at}: expected 2 numbers, found {}", pair.len())));
    }
    let num = |k: usize| -> Result<f64> {
        let x = pair[k].as_f64().ok_or_else(|| load_err(format!("{at}[{k}]: not a number")))?;
        if !x.is_finite() {
            return Err(load_err(format!("{at}[{k}]: non-finite number")));
        }
        Ok(x)
    };
    Ok(Complex64::new(num(0)?, num(1)?))
}

fn parse_list<'a>(v: &'a Value, at: &str, expected: usize) -> Result<&'a Vec<Value>> {
    let list = v.as_array().ok_or_else(|| load_err(format!("{at}: expected a list")))?;
    if list.len() != expected {
        return Err(load_err(format!("{at}: expected {expected} entries, found {}", list.len())));
    }
    Ok(list)
}

/// Parses and validates a state file. `dim_cap` bounds the total dimension.
pub fn parse_state(text: &str, dim_cap: usize) -> Result<QuantumState> {
    let raw: RawStateFile =
        serde_json::from_str(text).map_err(|e| load_err(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if raw.format != FORMAT_TAG {
        return Err(load_err(format!("format tag {:?}, expected {FORMAT_TAG:?}", raw.format)));
    }
    let dims = DimensionVector::with_cap(raw.dims, dim_cap).map_err(|e| load_err(format!("dims: {e}")))?;
    let n = dims.total();
    match raw.kind.as_str() {
        "pure" => {
            let list = parse_list(&raw.data, "data", n)?;
            let amps = list
                .iter()
                .enumerate()
                .map(|(i, v)| parse_pair(v, &format!("data[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let state = PureState::new(dims, amps).map_err(|e| load_err(format!("data: {e}")))?;
            Ok(QuantumState::Pure(state))
        }
        "density" => {
            let rows = parse_list(&raw.data, "data", n)?;
            let mut entries = Vec::with_capacity(n * n);
            for (r, row) in rows.iter().enumerate() {
                let row = parse_list(row, &format!("data[{r}]"), n)?;
                for (c, v) in row.iter().enumerate() {
                    entries.push(parse_pair(v, &format!("data[{r}][{c}]"))?);
                }
            }
            let matrix = ComplexMatrix::from_vec(n, n, entries).map_err(|e| load_err(format!("data: {e}")))?;
            let rho = DensityMatrix::new(dims, matrix).map_err(|e| load_err(format!("data: {e}")))?;
            Ok(QuantumState::Density(rho))
        }
        other => Err(load_err(format!("kind {other:?}, expected \"pure\" or \"density\""))),
    }
}

fn write_pair(out: &mut String, z: &Complex64) {
    out.push('[');
    out.push_str(&serde_json::to_string(&z.re).expect("finite"));
    out.push(',');
    out.push_str(&serde_json::to_string(&z.im).expect("finite"));
    out.push(']');
}

fn write_row(out: &mut String, row: &[Complex64]) {
    out.push('[');
    for (i, z) in row.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_pair(out, z);
    }
    out.push(']');
}

/// Serializes a state. Floats use the shortest round-trip representation,
/// so parse-then-write reproduces the same bytes.
pub fn write_state(state: &QuantumState) -> String {
    let dims = state.dims();
    let dims_json = serde_json::to_string(dims.dims()).expect("dims serialize");
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"format\": \"{FORMAT_TAG}\",\n"));
    out.push_str(&format!("  \"dims\": {dims_json},\n"));
    match state {
        QuantumState::Pure(phi) => {
            out.push_str("  \"kind\": \"pure\",\n  \"data\": ");
            write_row(&mut out, phi.amplitudes());
            out.push('\n');
        }
        QuantumState::Density(rho) => {
            out.push_str("  \"kind\": \"density\",\n  \"data\": [\n");
            let m = rho.matrix();
            for r in 0..m.rows() {
                out.push_str("    ");
                write_row(&mut out, m.row(r));
                out.push_str(if r + 1 < m.rows() { ",\n" } else { "\n" });
            }
            out.push_str("  ]\n");
        }
    }
    out.push_str("}\n");
    out
}
