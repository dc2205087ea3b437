//! JSON encodings of exact values.
//!
//! Big integers are written as decimal strings so nothing is rounded.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{AlgebraElement, MultiIndex};
use crate::geometry::{Ambient5, ModuleVec};
use crate::localization::{CentralDenominator, LocalElement};
use crate::scalar::{GaussianRational, QScalar};
use crate::trace::{EulerCharacteristic, TraceValue};

pub const SCHEMA: &str = "ncs4/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed JSON value: {0}")]
pub struct JsonError(pub String);

fn bad(what: &str) -> JsonError {
    JsonError(what.to_string())
}

/// `[[n, re_num, re_den, im_num, im_den], ...]` for `Σ cₙ qⁿ`.
pub fn qscalar_to_json(c: &QScalar) -> Value {
    Value::Array(
        c.terms()
            .map(|(n, g)| {
                json!([
                    n,
                    g.re.numer().to_string(),
                    g.re.denom().to_string(),
                    g.im.numer().to_string(),
                    g.im.denom().to_string()
                ])
            })
            .collect(),
    )
}

fn big(v: &Value) -> Result<BigInt, JsonError> {
    match v {
        Value::String(s) => s.parse().map_err(|_| bad("integer string")),
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| bad("integer")),
        _ => Err(bad("integer")),
    }
}

fn fraction(n: &Value, d: &Value) -> Result<BigRational, JsonError> {
    let d = big(d)?;
    if d == BigInt::from(0) {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(big(n)?, d))
}

pub fn qscalar_from_json(v: &Value) -> Result<QScalar, JsonError> {
    let mut out = QScalar::default();
    for term in v.as_array().ok_or_else(|| bad("coefficient list"))? {
        let t = term.as_array().filter(|t| t.len() == 5).ok_or_else(|| bad("coefficient term"))?;
        let n = t[0].as_i64().ok_or_else(|| bad("q exponent"))?;
        let g = GaussianRational::new(fraction(&t[1], &t[2])?, fraction(&t[3], &t[4])?);
        out.add_term(n, &g);
    }
    Ok(out)
}

pub fn algebra_to_json(a: &AlgebraElement) -> Value {
    Value::Array(
        a.terms()
            .map(|(i, c)| json!({"j": i.j, "k": i.k, "l": i.l, "m": i.m, "eps": i.eps, "coeff": qscalar_to_json(c)}))
            .collect(),
    )
}

fn field_u32(obj: &Map<String, Value>, key: &str) -> Result<u32, JsonError> {
    obj.get(key)
        .and_then(Value::as_u64)
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| bad(key))
}

pub fn algebra_from_json(v: &Value) -> Result<AlgebraElement, JsonError> {
    let mut out = AlgebraElement::default();
    for rec in v.as_array().ok_or_else(|| bad("term list"))? {
        let obj = rec.as_object().ok_or_else(|| bad("term record"))?;
        let eps = field_u32(obj, "eps")?;
        if eps > 1 {
            return Err(bad("eps"));
        }
        let idx = MultiIndex::new(
            field_u32(obj, "j")?,
            field_u32(obj, "k")?,
            field_u32(obj, "l")?,
            field_u32(obj, "m")?,
            eps as u8,
        );
        out.add_term(idx, &qscalar_from_json(obj.get("coeff").ok_or_else(|| bad("coeff"))?)?);
    }
    Ok(out)
}

pub fn local_to_json(x: &LocalElement) -> Value {
    let d = x.den();
    json!({
        "num": algebra_to_json(x.num()),
        "den": {"a": d.a, "b": d.b, "c": d.c, "e": d.e},
        "delta_pow": x.delta_pow(),
    })
}

pub fn local_from_json(v: &Value) -> Result<LocalElement, JsonError> {
    let obj = v.as_object().ok_or_else(|| bad("localized element"))?;
    let num = algebra_from_json(obj.get("num").ok_or_else(|| bad("num"))?)?;
    let den = obj.get("den").and_then(Value::as_object).ok_or_else(|| bad("den"))?;
    let den = CentralDenominator::new(
        field_u32(den, "a")?,
        field_u32(den, "b")?,
        field_u32(den, "c")?,
        field_u32(den, "e")?,
    );
    let delta_pow = obj
        .get("delta_pow")
        .and_then(Value::as_i64)
        .and_then(|n| i32::try_from(n).ok())
        .ok_or_else(|| bad("delta_pow"))?;
    Ok(LocalElement::new(num, den, delta_pow))
}

pub fn module_vec_to_json(u: &ModuleVec) -> Value {
    Value::Array(u.coeffs.iter().map(local_to_json).collect())
}

pub fn ambient_to_json(u: &Ambient5) -> Value {
    Value::Array(u.comps.iter().map(local_to_json).collect())
}

pub fn trace_value_to_json(t: &TraceValue) -> Value {
    json!({
        "pi2": qscalar_to_json(&t.coeff),
        "pi3": qscalar_to_json(&t.pi_cubed),
        "text": t.to_string(),
    })
}

pub fn euler_to_json(e: &EulerCharacteristic) -> Value {
    json!({
        "chi": e.chi.to_string(),
        "exact": e.exact,
        "alpha_at_1": e.alpha_at_1.to_string(),
        "alpha_at_minus1": e.alpha_at_minus1.to_string(),
        "integrand": local_to_json(&e.integrand),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_local;

    #[test]
    fn algebra_layout() {
        let a = AlgebraElement::basis_scaled(MultiIndex::new(1, 0, 0, 1, 0), QScalar::q_pow(-1));
        let v = algebra_to_json(&a);
        assert_eq!(v, json!([{"j": 1, "k": 0, "l": 0, "m": 1, "eps": 0, "coeff": [[-1, "1", "1", "0", "1"]]}]));
    }

    #[test]
    fn local_round_trip() {
        let x = parse_local("(3/4 q - i) Z Ws T / ((1-T^2)^2 Z Zs) Delta^-1").unwrap();
        let v = local_to_json(&x);
        assert_eq!(v["den"], json!({"a": 1, "b": 0, "c": 2, "e": 0}));
        assert_eq!(v["delta_pow"], json!(-1));
        assert_eq!(local_from_json(&v).unwrap(), x);
    }

    #[test]
    fn rejects_malformed() {
        assert!(algebra_from_json(&json!([{"j": 1}])).is_err());
        assert!(qscalar_from_json(&json!([[0, "1", "0", "0", "1"]])).is_err());
        assert!(local_from_json(&json!({"num": []})).is_err());
    }
}
