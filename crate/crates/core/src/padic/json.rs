//! JSON form of field elements:
//! `{"p", "N", "P", "prec", "valuation", "coeffs": [[val, [digits...]], ...]}`.
//!
//! `val` is the p-adic valuation of the coefficient of `π^i` (or `"inf"`),
//! digits are the base-p digits of its unit part, least significant first,
//! and `prec` is the absolute precision in units of `v(π)` (`null` = exact).

use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::{CycloElement, CyclotomicField, PadicError, PadicScalar};
use crate::scalar::ResidueInt;

pub fn element_to_json<I: ResidueInt>(a: &CycloElement<I>) -> Value {
    let f = a.field();
    let coeffs: Vec<Value> = (0..f.degree())
        .map(|i| {
            let c = a.coefficient(i);
            match c.valuation_int() {
                Some(v) => json!([v, c.digits()]),
                None => json!(["inf", []]),
            }
        })
        .collect();
    json!({
        "p": f.p(),
        "N": f.level(),
        "P": f.precision(),
        "prec": a.precision_pi(),
        "valuation": a.valuation().to_string(),
        "coeffs": coeffs,
    })
}

/// Rebuild an element, creating its field from the stored `(p, N, P)`.
pub fn element_from_json<I: ResidueInt>(v: &Value) -> Result<CycloElement<I>, PadicError> {
    let bad = |what: &str| PadicError::Parse(format!("element JSON: {what}"));
    let p = v["p"].as_u64().ok_or_else(|| bad("missing p"))?;
    let n = v["N"].as_u64().ok_or_else(|| bad("missing N"))? as u32;
    let w = v["P"].as_u64().ok_or_else(|| bad("missing P"))? as u32;
    let field = CyclotomicField::new(p, n, w)?;
    element_from_json_in(&field, v)
}

/// Rebuild an element inside an existing field.
pub fn element_from_json_in<I: ResidueInt>(
    field: &Arc<CyclotomicField<I>>,
    v: &Value,
) -> Result<CycloElement<I>, PadicError> {
    let bad = |what: &str| PadicError::Parse(format!("element JSON: {what}"));
    if v["p"].as_u64() != Some(field.p()) || v["N"].as_u64() != Some(field.level() as u64) {
        return Err(PadicError::FieldMismatch);
    }
    let prec = match &v["prec"] {
        Value::Null => None,
        x => Some(x.as_i64().ok_or_else(|| bad("prec"))?),
    };
    let raw = v["coeffs"].as_array().ok_or_else(|| bad("coeffs"))?;
    if raw.len() != field.degree() {
        return Err(bad("coefficient count differs from the degree"));
    }
    let mut scalars = Vec::with_capacity(raw.len());
    for entry in raw {
        let pair = entry.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("pair"))?;
        if pair[0].as_str() == Some("inf") {
            scalars.push(None);
            continue;
        }
        let val = pair[0].as_i64().ok_or_else(|| bad("valuation"))?;
        let digits = pair[1]
            .as_array()
            .ok_or_else(|| bad("digits"))?
            .iter()
            .map(|d| d.as_u64().filter(|&d| d < field.p()).map(|d| d as u32))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| bad("digit"))?;
        scalars.push(Some(PadicScalar::from_digits(field.p(), val, &digits, true)));
    }
    let shift = scalars
        .iter()
        .flatten()
        .filter_map(|s| s.valuation_int())
        .min()
        .unwrap_or(0);
    let coeffs: Vec<BigInt> = scalars
        .iter()
        .map(|s| match s {
            Some(s) if !s.is_zero() => {
                let k = s.valuation_int().unwrap() - shift;
                s.unit() * crate::rational::p_pow(field.p(), k as u32)
            }
            _ => BigInt::from(0),
        })
        .collect();
    let out = CycloElement::from_raw_parts(field, shift, &coeffs, prec);
    Ok(match prec {
        None if out.is_zero() => CycloElement::zero(field),
        _ => out,
    })
}
