use serde::{Deserialize, Serialize};

use super::{MunnContext, MunnElement};
use crate::error::{MunnError, Result};
use crate::scalars::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn apply(self, x: MunnElement) -> MunnElement {
        match self {
            Sign::Plus => x,
            Sign::Minus => -&x,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    CommProductSum,
    IdempotentWordSum,
    JordanIdempotentSpan,
}

/// `± [x, y] • [z, w]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommTerm {
    pub sign: Sign,
    pub factors: [MunnElement; 4],
}

/// `± c · e_1 • e_2 • ... • e_k`, every `e_i` a claimed idempotent.
#[derive(Clone, Debug, PartialEq)]
pub struct WordTerm {
    pub sign: Sign,
    pub coefficient: Option<Scalar>,
    pub letters: Vec<MunnElement>,
}

/// `± e ∘ f` with `e`, `f` claimed idempotents.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanTerm {
    pub sign: Sign,
    pub e: MunnElement,
    pub f: MunnElement,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    CommProductSum(Vec<CommTerm>),
    IdempotentWordSum(Vec<WordTerm>),
    JordanIdempotentSpan(Vec<JordanTerm>),
}

impl Witness {
    pub fn kind(&self) -> WitnessKind {
        match self {
            Witness::CommProductSum(_) => WitnessKind::CommProductSum,
            Witness::IdempotentWordSum(_) => WitnessKind::IdempotentWordSum,
            Witness::JordanIdempotentSpan(_) => WitnessKind::JordanIdempotentSpan,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Witness::CommProductSum(t) => t.len(),
            Witness::IdempotentWordSum(t) => t.len(),
            Witness::JordanIdempotentSpan(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Applies `f` to every constituent element; coefficients and signs are kept.
    pub fn map_elements(&self, f: impl Fn(&MunnElement) -> MunnElement) -> Witness {
        match self {
            Witness::CommProductSum(terms) => Witness::CommProductSum(
                terms
                    .iter()
                    .map(|t| CommTerm { sign: t.sign, factors: t.factors.each_ref().map(&f) })
                    .collect(),
            ),
            Witness::IdempotentWordSum(terms) => Witness::IdempotentWordSum(
                terms
                    .iter()
                    .map(|t| WordTerm {
                        sign: t.sign,
                        coefficient: t.coefficient.clone(),
                        letters: t.letters.iter().map(&f).collect(),
                    })
                    .collect(),
            ),
            Witness::JordanIdempotentSpan(terms) => Witness::JordanIdempotentSpan(
                terms.iter().map(|t| JordanTerm { sign: t.sign, e: f(&t.e), f: f(&t.f) }).collect(),
            ),
        }
    }

    /// Concatenates two witnesses of the same kind.
    pub fn concat(self, other: Witness) -> Result<Witness> {
        match (self, other) {
            (Witness::CommProductSum(mut a), Witness::CommProductSum(b)) => {
                a.extend(b);
                Ok(Witness::CommProductSum(a))
            }
            (Witness::IdempotentWordSum(mut a), Witness::IdempotentWordSum(b)) => {
                a.extend(b);
                Ok(Witness::IdempotentWordSum(a))
            }
            (Witness::JordanIdempotentSpan(mut a), Witness::JordanIdempotentSpan(b)) => {
                a.extend(b);
                Ok(Witness::JordanIdempotentSpan(a))
            }
            _ => Err(MunnError::MalformedWitness("cannot concatenate witnesses of different kinds".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessInspection {
    pub value: MunnElement,
    /// `(term, factor)` positions, 0-based, of claimed idempotents with `e • e != e`.
    pub idempotency_failures: Vec<(usize, usize)>,
}

/// Evaluates every term and records idempotency failures instead of
/// stopping at the first one.
pub fn inspect_witness(ctx: &MunnContext, w: &Witness) -> Result<WitnessInspection> {
    let mut total = ctx.zero();
    let mut failures = Vec::new();
    match w {
        Witness::CommProductSum(terms) => {
            for t in terms {
                for x in &t.factors {
                    ctx.check(x)?;
                }
                let [x, y, z, u] = &t.factors;
                let v = ctx.mul(&ctx.commutator(x, y), &ctx.commutator(z, u));
                total = &total + &t.sign.apply(v);
            }
        }
        Witness::IdempotentWordSum(terms) => {
            for (ti, t) in terms.iter().enumerate() {
                if t.letters.is_empty() {
                    return Err(MunnError::MalformedWitness(format!("term {ti} has no letters")));
                }
                for (fi, e) in t.letters.iter().enumerate() {
                    ctx.check(e)?;
                    if !ctx.is_idempotent(e) {
                        failures.push((ti, fi));
                    }
                }
                let mut v = ctx.mul_all(&t.letters).expect("nonempty word");
                if let Some(c) = &t.coefficient {
                    if c.domain() != ctx.domain() {
                        return Err(MunnError::MalformedWitness(format!("term {ti} coefficient domain")));
                    }
                    v = v.scale_left(c);
                }
                total = &total + &t.sign.apply(v);
            }
        }
        Witness::JordanIdempotentSpan(terms) => {
            for (ti, t) in terms.iter().enumerate() {
                for (fi, e) in [&t.e, &t.f].into_iter().enumerate() {
                    ctx.check(e)?;
                    if !ctx.is_idempotent(e) {
                        failures.push((ti, fi));
                    }
                }
                total = &total + &t.sign.apply(ctx.jordan(&t.e, &t.f));
            }
        }
    }
    Ok(WitnessInspection { value: total, idempotency_failures: failures })
}

/// The element a witness denotes; fails if a claimed idempotent is not one.
pub fn evaluate_witness(ctx: &MunnContext, w: &Witness) -> Result<MunnElement> {
    let report = inspect_witness(ctx, w)?;
    if let Some(&(term, factor)) = report.idempotency_failures.first() {
        return Err(MunnError::IdempotencyFailure { term, factor });
    }
    Ok(report.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::scalars::ScalarDomain;

    fn ctx22() -> MunnContext {
        let f = ScalarDomain::prime_field(5).unwrap();
        MunnContext::new(f, 2, 2, Matrix::identity(f, 2)).unwrap()
    }

    #[test]
    fn empty_is_zero() {
        let ctx = ctx22();
        for w in [
            Witness::CommProductSum(vec![]),
            Witness::IdempotentWordSum(vec![]),
            Witness::JordanIdempotentSpan(vec![]),
        ] {
            assert!(evaluate_witness(&ctx, &w).unwrap().is_zero());
        }
    }

    #[test]
    fn corrected_square_witness() {
        let ctx = ctx22();
        let u = |i, s| ctx.unit_int(1, i, s);
        let target = &u(1, 2) + &u(2, 1);
        let w = Witness::CommProductSum(vec![CommTerm {
            sign: Sign::Plus,
            factors: [u(1, 2), u(2, 1), u(1, 1), target.clone()],
        }]);
        assert_eq!(evaluate_witness(&ctx, &w).unwrap(), target);

        // The uncorrected last factor (1,1,1)+(1,2,1) only yields (1,2,1).
        let printed = &u(1, 1) + &u(2, 1);
        let w = Witness::CommProductSum(vec![CommTerm { sign: Sign::Plus, factors: [u(1, 2), u(2, 1), u(1, 1), printed] }]);
        assert_eq!(evaluate_witness(&ctx, &w).unwrap(), u(2, 1));
    }

    #[test]
    fn idempotency_is_checked() {
        let ctx = ctx22();
        let not_idem = ctx.unit_int(2, 1, 1);
        let w = Witness::IdempotentWordSum(vec![WordTerm {
            sign: Sign::Plus,
            coefficient: None,
            letters: vec![ctx.unit_int(1, 1, 1), not_idem.clone()],
        }]);
        assert_eq!(evaluate_witness(&ctx, &w).unwrap_err(), MunnError::IdempotencyFailure { term: 0, factor: 1 });
        let report = inspect_witness(&ctx, &w).unwrap();
        assert_eq!(report.idempotency_failures, vec![(0, 1)]);
        assert_eq!(report.value, ctx.unit_int(2, 1, 1));

        let j = Witness::JordanIdempotentSpan(vec![JordanTerm { sign: Sign::Minus, e: not_idem.clone(), f: not_idem }]);
        assert_eq!(inspect_witness(&ctx, &j).unwrap().idempotency_failures, vec![(0, 0), (0, 1)]);
    }

    #[test]
    fn sign_and_coefficient() {
        let ctx = ctx22();
        let f = ctx.domain();
        let e = ctx.unit_int(1, 1, 1);
        let w = Witness::IdempotentWordSum(vec![WordTerm {
            sign: Sign::Minus,
            coefficient: Some(f.from_i64(3)),
            letters: vec![e.clone(), e],
        }]);
        assert_eq!(evaluate_witness(&ctx, &w).unwrap(), ctx.unit_int(-3, 1, 1));
    }

    #[test]
    fn malformed_terms() {
        let ctx = ctx22();
        let w = Witness::IdempotentWordSum(vec![WordTerm { sign: Sign::Plus, coefficient: None, letters: vec![] }]);
        assert_eq!(evaluate_witness(&ctx, &w).unwrap_err().code(), "MALFORMED_WITNESS");
        let other = MunnContext::canonical(ctx.domain(), 2, 3, 2).unwrap();
        let z = other.zero();
        let w = Witness::CommProductSum(vec![CommTerm { sign: Sign::Plus, factors: [z.clone(), z.clone(), z.clone(), z] }]);
        assert_eq!(evaluate_witness(&ctx, &w).unwrap_err().code(), "CONTEXT_MISMATCH");
    }
}
