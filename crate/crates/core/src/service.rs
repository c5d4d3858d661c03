//! JSON-in, JSON-out operations behind the command line and the C ABI.

use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::commutator::{
    decompose_comm_squares, decompose_r1, decompose_xi1, decompose_xi2, decompose_xi_blocks, refute_r1_field,
    verify_refutation, xi_lower_bound, XiReport, DEFAULT_BUDGET,
};
use crate::error::{ErrorClass, MunnError, Result};
use crate::idempotent::{decompose_algebra_idempotents, decompose_jordan_idempotents, decompose_ring_idempotents};
use crate::json::*;
use crate::matrix::Matrix;
use crate::munn::{inspect_witness, BracketKind, MunnContext, Witness};
use crate::scalars::ScalarDomain;
use crate::zpd::{self, ProductKind, Verdict, DEFAULT_MAX_CONSTRAINTS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecomposeMode {
    IdempotentAlgebra,
    IdempotentRing,
    JordanIdempotent,
    CommSquares,
    R1Quaternion,
    RefuteR1,
    Xi2,
    XiBlocks,
    Xi1,
}

impl DecomposeMode {
    pub const ALL: [DecomposeMode; 9] = [
        DecomposeMode::IdempotentAlgebra,
        DecomposeMode::IdempotentRing,
        DecomposeMode::JordanIdempotent,
        DecomposeMode::CommSquares,
        DecomposeMode::R1Quaternion,
        DecomposeMode::RefuteR1,
        DecomposeMode::Xi2,
        DecomposeMode::XiBlocks,
        DecomposeMode::Xi1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecomposeMode::IdempotentAlgebra => "idempotent-algebra",
            DecomposeMode::IdempotentRing => "idempotent-ring",
            DecomposeMode::JordanIdempotent => "jordan-idempotent",
            DecomposeMode::CommSquares => "comm-squares",
            DecomposeMode::R1Quaternion => "r1-quaternion",
            DecomposeMode::RefuteR1 => "refute-r1",
            DecomposeMode::Xi2 => "xi2",
            DecomposeMode::XiBlocks => "xi-blocks",
            DecomposeMode::Xi1 => "xi1",
        }
    }
}

impl FromStr for DecomposeMode {
    type Err = MunnError;

    fn from_str(s: &str) -> Result<Self> {
        DecomposeMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| MunnError::Json(format!("unknown decompose mode {s:?}")))
    }
}

/// Knobs shared by the verbs.
#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub budget: u64,
    pub max_constraints: usize,
    pub require_certified: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, budget: DEFAULT_BUDGET, max_constraints: DEFAULT_MAX_CONSTRAINTS, require_certified: false }
    }
}

/// A result document, flagged when it records a soft failure
/// (an INCONCLUSIVE certificate under `require_certified`).
#[derive(Clone, Debug, PartialEq)]
pub struct Response {
    pub value: Value,
    pub soft_failure: bool,
}

impl From<Value> for Response {
    fn from(value: Value) -> Self {
        Response { value, soft_failure: false }
    }
}

/// Process exit status for an error: 1 input, 2 precondition, 3 soft.
pub fn exit_code(e: &MunnError) -> i32 {
    match e.class() {
        ErrorClass::Input => 1,
        ErrorClass::Precondition => 2,
        ErrorClass::Soft => 3,
    }
}

/// The `"context"` member of a document, or the document itself.
pub fn context_of(doc: &Value) -> Result<MunnContext> {
    context_from_json(doc.get("context").unwrap_or(doc))
}

fn member<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| MunnError::Json(format!("missing field {key:?}")))
}

pub fn canonicalize(ctx: &MunnContext) -> Value {
    let c = ctx.canonical_data();
    let vpw = &(&c.v * ctx.sandwich()) * &c.w;
    let er = Matrix::canonical_form(ctx.domain(), ctx.n(), ctx.m(), ctx.rank());
    json!({
        "V": matrix_to_json(&c.v),
        "W": matrix_to_json(&c.w),
        "r": ctx.rank(),
        "VPW_equals_Er": vpw == er,
    })
}

pub fn multiply(ctx: &MunnContext, left: &Value, right: &Value) -> Result<Value> {
    let (a, b) = (element_from_json(ctx, left)?, element_from_json(ctx, right)?);
    Ok(json!({"product": element_to_json(&ctx.sandwich_product(&a, &b)?)}))
}

pub fn bracket(ctx: &MunnContext, left: &Value, right: &Value, kind: BracketKind) -> Result<Value> {
    let (a, b) = (element_from_json(ctx, left)?, element_from_json(ctx, right)?);
    let kind_name = serde_json::to_value(kind).expect("kind serializes");
    Ok(json!({"kind": kind_name, "result": element_to_json(&ctx.bracket(&a, &b, kind)?)}))
}

/// Runs one engine. The output repeats the context and element so it can
/// be fed to [`verify`] unchanged.
pub fn decompose(ctx: &MunnContext, element: Option<&Value>, mode: DecomposeMode, opts: &Options) -> Result<Value> {
    let mut out = Map::new();
    out.insert("mode".into(), json!(mode.name()));
    out.insert("context".into(), context_to_json(ctx));
    if mode == DecomposeMode::RefuteR1 {
        let cert = refute_r1_field(ctx)?;
        out.insert("certificate".into(), refutation_to_json(&cert));
        return Ok(Value::Object(out));
    }
    let element = element.ok_or_else(|| MunnError::Json("missing field \"element\"".into()))?;
    let a = element_from_json(ctx, element)?;
    out.insert("element".into(), element_to_json(&a));
    let xi = |rep: XiReport, out: &mut Map<String, Value>| xi_report_into(&rep, out);
    match mode {
        DecomposeMode::IdempotentAlgebra => {
            out.insert("witness".into(), witness_to_json(&decompose_algebra_idempotents(ctx, &a)?));
        }
        DecomposeMode::IdempotentRing => {
            out.insert("witness".into(), witness_to_json(&decompose_ring_idempotents(ctx, &a)?));
        }
        DecomposeMode::JordanIdempotent => {
            out.insert("witness".into(), witness_to_json(&decompose_jordan_idempotents(ctx, &a)?));
        }
        DecomposeMode::CommSquares => xi(decompose_comm_squares(ctx, &a)?, &mut out),
        DecomposeMode::R1Quaternion => xi(decompose_r1(ctx, &a)?, &mut out),
        DecomposeMode::Xi2 => xi(decompose_xi2(ctx, &a)?, &mut out),
        DecomposeMode::XiBlocks => xi(decompose_xi_blocks(ctx, &a)?, &mut out),
        DecomposeMode::Xi1 => xi(decompose_xi1(ctx, &a, opts.budget, opts.seed)?, &mut out),
        DecomposeMode::RefuteR1 => unreachable!(),
    }
    Ok(Value::Object(out))
}

/// Checks a witness against its claimed element, or a refutation
/// certificate against its context.
pub fn verify(ctx: &MunnContext, doc: &Value) -> Result<Value> {
    if let Some(cert) = doc.get("certificate") {
        let cert = refutation_from_json(ctx, cert)?;
        return Ok(json!({"certificate_valid": verify_refutation(ctx, &cert)?}));
    }
    let witness = witness_from_json(ctx, member(doc, "witness")?)?;
    let claimed = element_from_json(ctx, member(doc, "element")?)?;
    let count = witness.len();
    let mut out = Map::new();
    out.insert("terms".into(), json!(count));
    out.insert("term_count".into(), json!(count));

    // Each product [x, y] • [z, w] has ordinary rank at most r.
    let consistent = match &witness {
        Witness::CommProductSum(_) => {
            let (rank, r) = (claimed.matrix().row_rank(), ctx.rank());
            Some(if r == 0 { rank == 0 } else { count >= rank.div_ceil(r) })
        }
        _ => None,
    };
    out.insert("rank_lower_bound_consistent".into(), json!(consistent));
    if consistent == Some(false) {
        out.insert("recombines".into(), json!(false));
        out.insert("evaluated".into(), json!(false));
        out.insert("idempotency_failures".into(), json!([]));
        return Ok(Value::Object(out));
    }
    let inspection = inspect_witness(ctx, &witness)?;
    let recombines = inspection.value == claimed;
    out.insert("recombines".into(), json!(recombines));
    out.insert("evaluated".into(), json!(true));
    let failures: Vec<Value> = inspection.idempotency_failures.iter().map(|&(t, f)| json!([t + 1, f + 1])).collect();
    out.insert("idempotency_failures".into(), Value::Array(failures));
    if !recombines {
        out.insert("difference".into(), element_to_json(&(&inspection.value - &claimed)));
    }
    Ok(Value::Object(out))
}

pub fn check_zpd(ctx: &MunnContext, kind: ProductKind, opts: &Options) -> Result<Response> {
    let cert = zpd::check_zpd(ctx, kind, opts.seed, opts.max_constraints)?;
    Ok(Response {
        soft_failure: opts.require_certified && cert.verdict == Verdict::Inconclusive,
        value: serde_json::to_value(cert).expect("certificate serializes"),
    })
}

pub fn scalar_lemma(p: u64, n: usize) -> Result<Value> {
    let domain = ScalarDomain::prime_field(p)?;
    let passing = zpd::scalar_lemma_oracle(domain, n)?;
    Ok(json!({
        "p": p,
        "n": n,
        "count": passing.len(),
        "matrices": passing.iter().map(matrix_to_json).collect::<Vec<_>>(),
    }))
}

/// The rank lower bound for one element next to the best applicable
/// constructive upper bound for the algebra.
pub fn xi_bounds(ctx: &MunnContext, element: &Value) -> Result<Value> {
    let a = element_from_json(ctx, element)?;
    let lower = xi_lower_bound(ctx, &a)?;
    let (min, r) = (ctx.m().min(ctx.n()), ctx.rank());
    let (upper, route) = if r == min {
        (Some(2), Some(DecomposeMode::Xi2))
    } else if r >= 2 {
        (Some(min.div_ceil(r) + 3), Some(DecomposeMode::XiBlocks))
    } else if !ctx.domain().is_commutative() {
        (None, Some(DecomposeMode::R1Quaternion))
    } else {
        (None, None)
    };
    let achieved = match route {
        Some(DecomposeMode::Xi2) => Some(decompose_xi2(ctx, &a)?.upper),
        Some(DecomposeMode::XiBlocks) => Some(decompose_xi_blocks(ctx, &a)?.upper),
        Some(DecomposeMode::R1Quaternion) => Some(decompose_r1(ctx, &a)?.upper),
        _ => None,
    };
    Ok(json!({
        "lower": lower.bound,
        "ordinary_rank": lower.ordinary_rank,
        "sandwich_rank": lower.sandwich_rank,
        "algebra_lower": min.div_ceil(r.max(1)),
        "upper": upper,
        "route": route.map(DecomposeMode::name),
        "achieved": achieved,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Canonicalize,
    Mul,
    Bracket,
    Decompose,
    Verify,
    CheckZpd,
    ScalarLemma,
    XiBounds,
}

/// Per-invocation arguments beyond the input document.
#[derive(Clone, Debug, Default)]
pub struct Request {
    pub mode: Option<String>,
    pub kind: Option<String>,
    pub p: Option<u64>,
    pub n: Option<usize>,
    pub options: Options,
}

/// Dispatches a verb. `input` is ignored by `scalar-lemma`.
pub fn run(verb: Verb, input: Option<&Value>, req: &Request) -> Result<Response> {
    let input = || input.ok_or_else(|| MunnError::Json("this verb reads a JSON document".into()));
    let opts = &req.options;
    match verb {
        Verb::ScalarLemma => {
            let p = req.p.ok_or_else(|| MunnError::Json("scalar-lemma needs --p".into()))?;
            let n = req.n.ok_or_else(|| MunnError::Json("scalar-lemma needs --n".into()))?;
            scalar_lemma(p, n).map(Response::from)
        }
        Verb::Canonicalize => Ok(canonicalize(&context_of(input()?)?).into()),
        Verb::Mul => {
            let doc = input()?;
            multiply(&context_of(doc)?, member(doc, "left")?, member(doc, "right")?).map(Response::from)
        }
        Verb::Bracket => {
            let doc = input()?;
            let kind = match req.kind.as_deref().unwrap_or("commutator") {
                "commutator" => BracketKind::Commutator,
                "jordan" => BracketKind::Jordan,
                other => return Err(MunnError::Json(format!("bracket kind must be commutator or jordan, got {other:?}"))),
            };
            bracket(&context_of(doc)?, member(doc, "left")?, member(doc, "right")?, kind).map(Response::from)
        }
        Verb::Decompose => {
            let doc = input()?;
            let mode = req.mode.as_deref().ok_or_else(|| MunnError::Json("decompose needs --mode".into()))?;
            decompose(&context_of(doc)?, doc.get("element"), mode.parse()?, opts).map(Response::from)
        }
        Verb::Verify => {
            let doc = input()?;
            verify(&context_of(doc)?, doc).map(Response::from)
        }
        Verb::CheckZpd => {
            let kind = match req.kind.as_deref() {
                None => ProductKind::Associative,
                Some(k) => k.parse::<ProductKind>().map_err(|_| MunnError::Json(format!("zpd kind must be assoc or jordan, got {k:?}")))?,
            };
            check_zpd(&context_of(input()?)?, kind, opts)
        }
        Verb::XiBounds => {
            let doc = input()?;
            xi_bounds(&context_of(doc)?, member(doc, "element")?).map(Response::from)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn canonicalize_permutation() {
        let v = canonicalize(
            &context_of(&doc(r#"{"domain": {"kind": "gf", "p": 5}, "m": 2, "n": 2, "P": {"entries": [[0, 1], [1, 0]]}}"#))
                .unwrap(),
        );
        assert_eq!(v["r"], 2);
        assert_eq!(v["VPW_equals_Er"], true);
    }

    #[test]
    fn flipped_sign_reports_difference() {
        let d = doc(r#"{"context": {"domain": {"kind": "gf", "p": 5}, "m": 2, "n": 2, "r": 2},
                        "element": {"entries": [[1, 2], [3, 4]]}}"#);
        let req = Request { mode: Some("comm-squares".into()), ..Default::default() };
        let mut out = run(Verb::Decompose, Some(&d), &req).unwrap().value;
        let good = run(Verb::Verify, Some(&out), &req).unwrap().value;
        assert_eq!(good["recombines"], true);
        out["witness"]["terms"][0]["sign"] = json!("-");
        let bad = run(Verb::Verify, Some(&out), &req).unwrap().value;
        assert_eq!(bad["recombines"], false);
        assert!(bad["difference"]["entries"].is_array());
    }

    #[test]
    fn short_commutator_witness_flagged() {
        // A rank-2 element cannot be one product when r = 1.
        let d = doc(r#"{"context": {"domain": {"kind": "h"}, "m": 2, "n": 2, "r": 1},
                        "element": {"entries": [[1, 0], [0, 1]]},
                        "witness": {"kind": "comm_product_sum", "terms": [{"sign": "+", "factors": [
                            {"entries": [[1, 0], [0, 0]]}, {"entries": [[0, 1], [0, 0]]},
                            {"entries": [[1, 0], [0, 0]]}, {"entries": [[0, 0], [1, 0]]}]}]}}"#);
        let v = run(Verb::Verify, Some(&d), &Request::default()).unwrap().value;
        assert_eq!(v["rank_lower_bound_consistent"], false);
        assert_eq!(v["recombines"], false);
        assert_eq!(v["evaluated"], false);
    }

    #[test]
    fn exit_codes() {
        let d = doc(r#"{"context": {"domain": {"kind": "gf", "p": 2}, "m": 2, "n": 2, "r": 2},
                        "element": {"entries": [[1, 0], [0, 1]]}}"#);
        let req = Request { mode: Some("jordan-idempotent".into()), ..Default::default() };
        let e = run(Verb::Decompose, Some(&d), &req).unwrap_err();
        assert_eq!(e.code(), "CHAR_2_UNSUPPORTED");
        assert_eq!(exit_code(&e), 2);
        let req = Request { mode: Some("xi1".into()), ..Default::default() };
        let e = run(Verb::Decompose, Some(&d), &Request { options: Options { budget: 5, ..Default::default() }, ..req })
            .unwrap_err();
        assert_eq!(exit_code(&e), 3);
        assert_eq!(exit_code(&run(Verb::Verify, Some(&json!({})), &Request::default()).unwrap_err()), 1);
    }
}
