//! Command-line plumbing: JSON persistence, error reporting with exit codes, reports on
//! fans and SVG rendering of rank-2 fans.

pub mod svg;

use serde_json::{json, Value};

use crate::building_compactification::TreePoint;
use crate::building_kernel::{Chamber, Vertex};
use crate::core_facade::{core, facade};
use crate::error::{ChambrierError, Result};
use crate::exact_geometry::linalg::{parse_q, Q};
use crate::fan_kernel::{check_hypotheses, Ambient, Fan, FanJson};

pub use svg::{count_class, render_fan, Region, Shape, SvgScene, Viewport};

pub const SCHEMA: &str = "chambrier/1";

/// Exit status of a failed command.
pub fn exit_code(e: &ChambrierError) -> i32 {
    match e {
        ChambrierError::HypothesisViolation { .. } | ChambrierError::WindowExhausted(_) => 3,
        ChambrierError::Invariant(_) => 1,
        _ => 2,
    }
}

fn error_kind(e: &ChambrierError) -> &'static str {
    match e {
        ChambrierError::UnsupportedType(_) => "unsupported_type",
        ChambrierError::DimensionMismatch { .. } => "dimension_mismatch",
        ChambrierError::EmptyCone => "empty_cone",
        ChambrierError::HypothesisViolation { .. } => "hypothesis_violation",
        ChambrierError::ZeroDirection => "zero_direction",
        ChambrierError::WindowExhausted(_) => "window_exhausted",
        ChambrierError::ModelMismatch(_) => "model_mismatch",
        ChambrierError::RankUnsupported(_) => "rank_unsupported",
        ChambrierError::Invariant(_) => "invariant",
        ChambrierError::Validation(_) => "validation",
    }
}

/// Machine-readable error, with the witness that caused it.
pub fn error_json(e: &ChambrierError) -> Value {
    let witness = match e {
        ChambrierError::HypothesisViolation { hypothesis, witness } => {
            let w = serde_json::from_str::<Value>(witness).unwrap_or_else(|_| Value::String(witness.clone()));
            json!({"hypothesis": hypothesis, "witness": w})
        }
        ChambrierError::DimensionMismatch { expected, got } => json!({"expected": expected, "got": got}),
        ChambrierError::RankUnsupported(r) => json!({"rank": r}),
        ChambrierError::EmptyCone | ChambrierError::ZeroDirection => Value::Null,
        ChambrierError::UnsupportedType(s)
        | ChambrierError::WindowExhausted(s)
        | ChambrierError::ModelMismatch(s)
        | ChambrierError::Invariant(s)
        | ChambrierError::Validation(s) => Value::String(s.clone()),
    };
    json!({
        "schema": SCHEMA,
        "error": error_kind(e),
        "message": e.to_string(),
        "exit_code": exit_code(e),
        "witness": witness,
    })
}

pub fn fan_to_string(fan: &Fan) -> String {
    serde_json::to_string_pretty(&fan.to_json()).expect("fans serialize") + "\n"
}

/// Parses and re-canonicalizes a fan file.
pub fn fan_from_str(s: &str) -> Result<Fan> {
    let fj: FanJson = serde_json::from_str(s).map_err(|e| ChambrierError::Validation(format!("bad fan JSON: {e}")))?;
    if fj.schema != SCHEMA {
        return Err(ChambrierError::Validation(format!("unknown schema {:?}", fj.schema)));
    }
    Fan::from_json(&fj)
}

/// Parses a comma-separated rational vector such as `1/2,-3`.
pub fn parse_vector(s: &str, dim: usize) -> Result<Vec<Q>> {
    let v = s.split(',').map(|x| parse_q(x.trim())).collect::<Result<Vec<Q>>>()?;
    if v.len() != dim {
        return Err(ChambrierError::DimensionMismatch { expected: dim, got: v.len() });
    }
    Ok(v)
}

/// Index of a cone given by id or by position in the fan.
pub fn resolve_cone(fan: &Fan, key: &str) -> Result<usize> {
    if let Some(i) = fan.index_of(key) {
        return Ok(i);
    }
    match key.parse::<usize>() {
        Ok(i) if i < fan.len() => Ok(i),
        _ => Err(ChambrierError::Validation(format!("unknown cone {key}"))),
    }
}

/// Parses a tree chamber `a-b`, `base` for the base chamber.
pub fn parse_chamber(s: &str) -> Result<Chamber> {
    if s == "base" {
        return Ok(Chamber::Base);
    }
    let (a, b) = s.split_once('-').ok_or_else(|| ChambrierError::Validation(format!("bad chamber name {s}")))?;
    Chamber::between(&Vertex::parse(a)?, &Vertex::parse(b)?).ok_or_else(|| ChambrierError::Validation(format!("{s} is not an edge")))
}

/// Parses a tree point: a vertex `a01`, a chamber `a0-a01` or an end `end(a011)`.
pub fn parse_tree_point(s: &str) -> Result<TreePoint> {
    if let Some(inner) = s.strip_prefix("end(").and_then(|r| r.strip_suffix(')')) {
        return Ok(TreePoint::End(Vertex::parse(inner)?));
    }
    if s == "base" || s.contains('-') {
        return Ok(TreePoint::Chamber(parse_chamber(s)?));
    }
    Ok(TreePoint::Vertex(Vertex::parse(s)?))
}

/// Hypotheses, cores and facades of every cone of a fan.
pub fn report(fan: &Fan, amb: &Ambient) -> Result<Value> {
    let hyp = check_hypotheses(fan, amb);
    let mut cones = Vec::new();
    for i in 0..fan.len() {
        let c = core(fan, amb, i)?;
        let f = facade(fan, amb, i)?;
        cones.push(json!({
            "id": fan.cones[i].id,
            "span_dim": fan.cones[i].span_dim,
            "core": c.to_json(amb),
            "facade": f.to_json(),
        }));
    }
    Ok(json!({
        "schema": SCHEMA,
        "label": fan.label,
        "J": fan.j_string(),
        "dim": fan.dim,
        "hypotheses": hyp,
        "all_pass": hyp.all_pass(),
        "cones": cones,
    }))
}

/// Human-readable summary of a report.
pub fn report_text(r: &Value) -> String {
    let mut s = format!("{} J={{{}}}\n", r["label"].as_str().unwrap_or(""), r["J"].as_str().unwrap_or(""));
    for h in r["hypotheses"]["statuses"].as_array().into_iter().flatten() {
        let mark = if h["pass"].as_bool() == Some(true) { "pass" } else { "FAIL" };
        s.push_str(&format!("  {} {mark}\n", h["name"].as_str().unwrap_or("?")));
    }
    for c in r["cones"].as_array().into_iter().flatten() {
        s.push_str(&format!(
            "  cone {} dim {}: core dim {}, facade dim {}\n",
            c["id"].as_str().unwrap_or(""),
            c["span_dim"],
            c["core"]["span_dim"],
            c["facade"]["dim"]
        ));
    }
    s
}
