//! File formats and literal helpers shared by the subcommands.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::Value;

use ruminlab_core::currents::Window;
use ruminlab_core::graphs::{GraphFunction, GraphSample};
use ruminlab_core::parse::{parse_multivector, parse_polynomials};
use ruminlab_core::quadrature::QuadratureSpec;
use ruminlab_core::scalar::{parse_q, Q};
use ruminlab_core::{Error, Splitting};

/// A flag or input that is malformed before any computation starts.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct Usage(pub String);

/// A check that ran and did not pass.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct Failure(pub String);

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    if let Some(Error::Parse { .. }) = e.downcast_ref::<Error>() {
        return 2;
    }
    1
}

pub fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

pub fn graph_from_text(s: Splitting, text: &str) -> Result<GraphFunction> {
    let polys = parse_polynomials(text, s.n)?;
    Ok(GraphFunction::symbolic(s, polys)?)
}

pub fn rationals_from_list(text: &str) -> Result<Vec<Q>> {
    text.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| parse_q(x).ok_or_else(|| Usage(format!("`{x}` is not a rational")).into()))
        .collect()
}

/// A JSON array whose entries are integers or rational strings.
pub fn rationals_from_json(text: &str) -> Result<Vec<Q>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Usage(format!("zeta JSON: {e}")))?;
    let arr = v.as_array().ok_or_else(|| Usage("zeta must be a JSON array".into()))?;
    arr.iter()
        .map(|x| {
            let s = match x {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() => n.to_string(),
                _ => return Err(Usage(format!("`{x}` is not an exact rational")).into()),
            };
            parse_q(&s).ok_or_else(|| Usage(format!("`{s}` is not a rational")).into())
        })
        .collect()
}

/// `;`-separated grade-one multivector literals as coordinate vectors.
pub fn vectors_from_text(n: usize, text: &str) -> Result<Vec<Vec<Q>>> {
    text.split(';')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            let m = parse_multivector(x, Some(n))?;
            if m.grade() != Some(1) {
                return Err(Usage(format!("`{x}` is not a vector")).into());
            }
            Ok(m.to_vector()?)
        })
        .collect()
}

pub fn window_from_json(s: Splitting, v: &Value) -> Result<Window> {
    let floats = |key: &str| -> Result<Vec<f64>> {
        v[key]
            .as_array()
            .ok_or_else(|| Usage(format!("window needs an array `{key}`")))?
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| Usage(format!("window `{key}` entries must be numbers")).into()))
            .collect()
    };
    Ok(Window::new(s, floats("center")?, floats("radius")?)?)
}

pub fn quad_from_file(p: &Path) -> Result<QuadratureSpec> {
    let q: QuadratureSpec = serde_json::from_str(&read(p)?).map_err(|e| Usage(format!("quadrature JSON: {e}")))?;
    q.validate()?;
    Ok(q)
}

pub fn samples_from_file(p: &Path) -> Result<Vec<GraphSample>> {
    read(p)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Usage(format!("{}:{}: {e}", p.display(), i + 1)).into()))
        .collect()
}

pub fn write_samples(p: &Path, samples: &[GraphSample]) -> Result<()> {
    let mut f = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
    for s in samples {
        writeln!(f, "{}", serde_json::to_string(s)?)?;
    }
    Ok(())
}
