//! JSON forms of scalars, matrices, contexts, elements and witnesses.
//!
//! Scalars travel as literal strings (`"3/4"`, `"1-2i+k"`); integer JSON
//! numbers are accepted on input. Indices are 1-based wherever they appear.

use serde_json::{json, Map, Value};

use crate::commutator::{RefutationCertificate, XiReport};
use crate::error::{MunnError, Result};
use crate::matrix::Matrix;
use crate::munn::{CommTerm, JordanTerm, MunnContext, MunnElement, Sign, Witness, WitnessKind, WordTerm};
use crate::scalars::{Scalar, ScalarDomain};

fn schema(msg: impl Into<String>) -> MunnError {
    MunnError::Json(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| schema(format!("missing field {key:?}")))
}

fn as_usize(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?.as_u64().map(|x| x as usize).ok_or_else(|| schema(format!("{key:?} must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{what} must be an array")))
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    Value::String(x.to_string())
}

pub fn scalar_from_json(domain: ScalarDomain, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => domain.parse(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => domain.parse(&n.to_string()),
        other => Err(schema(format!("expected a scalar literal, got {other}"))),
    }
}

pub fn domain_to_json(d: ScalarDomain) -> Value {
    serde_json::to_value(d).expect("domain serializes")
}

pub fn domain_from_json(v: &Value) -> Result<ScalarDomain> {
    serde_json::from_value(v.clone()).map_err(|e| schema(format!("domain: {e}")))
}

fn grid_to_json(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(scalar_to_json).collect())).collect())
}

fn grid_from_json(domain: ScalarDomain, v: &Value) -> Result<Matrix> {
    let rows = as_array(v, "entries")?;
    if rows.is_empty() {
        return Err(schema("entries must have at least one row"));
    }
    let parsed = rows
        .iter()
        .map(|r| as_array(r, "each row of entries")?.iter().map(|x| scalar_from_json(domain, x)).collect())
        .collect::<Result<Vec<Vec<Scalar>>>>()?;
    Matrix::from_rows(domain, parsed)
}

/// `{"rows": .., "cols": .., "entries": [[..], ..]}`.
pub fn matrix_to_json(m: &Matrix) -> Value {
    json!({"rows": m.rows(), "cols": m.cols(), "entries": grid_to_json(m)})
}

pub fn matrix_from_json(domain: ScalarDomain, v: &Value) -> Result<Matrix> {
    let m = grid_from_json(domain, field(v, "entries")?)?;
    for (key, want) in [("rows", m.rows()), ("cols", m.cols())] {
        if v.get(key).is_some() && as_usize(v, key)? != want {
            return Err(schema(format!("{key:?} disagrees with entries")));
        }
    }
    Ok(m)
}

/// `{"domain": .., "m": .., "n": .., "P": <matrix>}`.
pub fn context_to_json(ctx: &MunnContext) -> Value {
    json!({
        "domain": domain_to_json(ctx.domain()),
        "m": ctx.m(),
        "n": ctx.n(),
        "P": matrix_to_json(ctx.sandwich()),
    })
}

/// Accepts `"P"` or, for the canonical sandwich, `"r"`.
pub fn context_from_json(v: &Value) -> Result<MunnContext> {
    let domain = domain_from_json(field(v, "domain")?)?;
    let (m, n) = (as_usize(v, "m")?, as_usize(v, "n")?);
    match (v.get("P"), v.get("r")) {
        (Some(p), None) => MunnContext::new(domain, m, n, matrix_from_json(domain, p)?),
        (None, Some(_)) => MunnContext::canonical(domain, m, n, as_usize(v, "r")?),
        _ => Err(schema("context needs exactly one of \"P\" and \"r\"")),
    }
}

/// `{"entries": [[..], ..]}`.
pub fn element_to_json(a: &MunnElement) -> Value {
    json!({"entries": grid_to_json(a.matrix())})
}

/// Accepts `{"entries": ..}` or a bare grid.
pub fn element_from_json(ctx: &MunnContext, v: &Value) -> Result<MunnElement> {
    let grid = if v.is_array() { v } else { field(v, "entries")? };
    ctx.element(grid_from_json(ctx.domain(), grid)?)
}

fn sign_to_json(s: Sign) -> Value {
    serde_json::to_value(s).expect("sign serializes")
}

fn sign_from_json(v: &Value) -> Result<Sign> {
    match v.get("sign") {
        None => Ok(Sign::Plus),
        Some(s) => serde_json::from_value(s.clone()).map_err(|_| schema("sign must be \"+\" or \"-\"")),
    }
}

fn elements_from_json(ctx: &MunnContext, v: &Value, what: &str) -> Result<Vec<MunnElement>> {
    as_array(v, what)?.iter().map(|e| element_from_json(ctx, e)).collect()
}

/// `{"kind": .., "terms": [..]}`; terms are `{"sign", "factors": [x, y, z, w]}`,
/// `{"sign", "coefficient"?, "letters": [..]}` or `{"sign", "pair": [e, f]}`.
pub fn witness_to_json(w: &Witness) -> Value {
    let terms: Vec<Value> = match w {
        Witness::CommProductSum(ts) => ts
            .iter()
            .map(|t| json!({"sign": sign_to_json(t.sign), "factors": t.factors.iter().map(element_to_json).collect::<Vec<_>>()}))
            .collect(),
        Witness::IdempotentWordSum(ts) => ts
            .iter()
            .map(|t| {
                let mut o = Map::new();
                o.insert("sign".into(), sign_to_json(t.sign));
                if let Some(c) = &t.coefficient {
                    o.insert("coefficient".into(), scalar_to_json(c));
                }
                o.insert("letters".into(), Value::Array(t.letters.iter().map(element_to_json).collect()));
                Value::Object(o)
            })
            .collect(),
        Witness::JordanIdempotentSpan(ts) => ts
            .iter()
            .map(|t| json!({"sign": sign_to_json(t.sign), "pair": [element_to_json(&t.e), element_to_json(&t.f)]}))
            .collect(),
    };
    json!({"kind": serde_json::to_value(w.kind()).expect("kind serializes"), "terms": terms})
}

pub fn witness_from_json(ctx: &MunnContext, v: &Value) -> Result<Witness> {
    let kind: WitnessKind =
        serde_json::from_value(field(v, "kind")?.clone()).map_err(|e| schema(format!("witness kind: {e}")))?;
    let terms = as_array(field(v, "terms")?, "terms")?;
    Ok(match kind {
        WitnessKind::CommProductSum => Witness::CommProductSum(
            terms
                .iter()
                .map(|t| {
                    let fs = elements_from_json(ctx, field(t, "factors")?, "factors")?;
                    let factors: [MunnElement; 4] =
                        fs.try_into().map_err(|_| MunnError::MalformedWitness("a term needs four factors".into()))?;
                    Ok(CommTerm { sign: sign_from_json(t)?, factors })
                })
                .collect::<Result<_>>()?,
        ),
        WitnessKind::IdempotentWordSum => Witness::IdempotentWordSum(
            terms
                .iter()
                .map(|t| {
                    let coefficient = t.get("coefficient").map(|c| scalar_from_json(ctx.domain(), c)).transpose()?;
                    let letters = elements_from_json(ctx, field(t, "letters")?, "letters")?;
                    Ok(WordTerm { sign: sign_from_json(t)?, coefficient, letters })
                })
                .collect::<Result<_>>()?,
        ),
        WitnessKind::JordanIdempotentSpan => Witness::JordanIdempotentSpan(
            terms
                .iter()
                .map(|t| {
                    let pair = elements_from_json(ctx, field(t, "pair")?, "pair")?;
                    let [e, f]: [MunnElement; 2] =
                        pair.try_into().map_err(|_| MunnError::MalformedWitness("a pair needs two elements".into()))?;
                    Ok(JordanTerm { sign: sign_from_json(t)?, e, f })
                })
                .collect::<Result<_>>()?,
        ),
    })
}

/// Adds `lower`, `algebra_lower`, `upper` and `witness` to `out`.
pub fn xi_report_into(rep: &XiReport, out: &mut Map<String, Value>) {
    out.insert("lower".into(), json!(rep.lower));
    out.insert("algebra_lower".into(), json!(rep.algebra_lower));
    out.insert("upper".into(), json!(rep.upper));
    out.insert("witness".into(), witness_to_json(&rep.witness));
}

pub fn refutation_to_json(c: &RefutationCertificate) -> Value {
    json!({
        "functional": matrix_to_json(&c.functional),
        "unit_pairs_checked": c.unit_pairs_checked,
        "annihilates_commutators": c.annihilates_commutators,
        "multiplicative": c.multiplicative,
        "witness": element_to_json(&c.witness),
        "witness_image": scalar_to_json(&c.witness_image),
    })
}

pub fn refutation_from_json(ctx: &MunnContext, v: &Value) -> Result<RefutationCertificate> {
    let flag = |key: &str| field(v, key)?.as_bool().ok_or_else(|| schema(format!("{key:?} must be a boolean")));
    Ok(RefutationCertificate {
        functional: matrix_from_json(ctx.domain(), field(v, "functional")?)?,
        unit_pairs_checked: as_usize(v, "unit_pairs_checked")?,
        annihilates_commutators: flag("annihilates_commutators")?,
        multiplicative: flag("multiplicative")?,
        witness: element_from_json(ctx, field(v, "witness")?)?,
        witness_image: scalar_from_json(ctx.domain(), field(v, "witness_image")?)?,
    })
}

/// `{"error": {"code": .., "detail": ..}}`.
pub fn error_to_json(e: &MunnError) -> Value {
    json!({"error": {"code": e.code(), "detail": e.to_string()}})
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn context_round_trip() {
        let v: Value = serde_json::from_str(
            r#"{"domain": {"kind": "prime_field", "p": 5}, "m": 2, "n": 3,
                "P": {"rows": 3, "cols": 2, "entries": [[1, 0], ["0", "1"], ["2", "3"]]}}"#,
        )
        .unwrap();
        let ctx = context_from_json(&v).unwrap();
        assert_eq!(ctx.rank(), 2);
        let back = context_from_json(&context_to_json(&ctx)).unwrap();
        assert_eq!(back.sandwich(), ctx.sandwich());
        let short: Value = serde_json::from_str(r#"{"domain": {"kind": "h"}, "m": 2, "n": 2, "r": 1}"#).unwrap();
        assert_eq!(context_from_json(&short).unwrap().domain(), ScalarDomain::RationalQuaternions);
    }

    #[test]
    fn schema_errors() {
        let bad: Value = serde_json::from_str(r#"{"domain": {"kind": "q"}, "m": 2}"#).unwrap();
        assert_eq!(context_from_json(&bad).unwrap_err().code(), "MALFORMED_JSON");
        let lit: Value = serde_json::from_str(r#"{"domain": {"kind": "q"}, "m": 2, "n": 2,
            "P": {"entries": [["1/0", "0"], ["0", "1"]]}}"#)
        .unwrap();
        assert_eq!(context_from_json(&lit).unwrap_err().code(), "MALFORMED_LITERAL");
    }

    #[test]
    fn witness_round_trip() {
        let ctx = MunnContext::canonical(ScalarDomain::RationalQuaternions, 2, 3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = ctx.random_element(&mut rng, 5);
        for w in [
            crate::commutator::decompose_xi2(&ctx, &a).unwrap().witness,
            crate::idempotent::decompose_ring_idempotents(&ctx, &a).unwrap(),
        ] {
            assert_eq!(witness_from_json(&ctx, &witness_to_json(&w)).unwrap(), w);
        }
        let f = MunnContext::canonical(ScalarDomain::prime_field(7).unwrap(), 3, 3, 2).unwrap();
        let b = f.random_element(&mut rng, 5);
        let w = crate::idempotent::decompose_jordan_idempotents(&f, &b).unwrap();
        assert_eq!(witness_from_json(&f, &witness_to_json(&w)).unwrap(), w);
    }
}
