//! Scalar literal grammar.
//!
//! * `GF(p)`: a decimal integer, reduced modulo `p`.
//! * `Q`: `[-]num[/den]`.
//! * `H(Q)`: `a±bi±cj±dk`, each coefficient a `Q` literal; omitted terms are 0
//!   and a bare unit (`i`, `-k`) has coefficient 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Quaternion, Scalar, ScalarDomain};
use crate::error::{MunnError, Result};

fn err(text: &str, reason: &str) -> MunnError {
    MunnError::Parse {
        literal: text.to_string(),
        reason: reason.to_string(),
    }
}

fn parse_integer(text: &str, whole: &str) -> Result<BigInt> {
    let digits = text.strip_prefix('+').unwrap_or(text);
    let body = digits.strip_prefix('-').unwrap_or(digits);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(whole, "expected a decimal integer"));
    }
    digits.parse::<BigInt>().map_err(|e| err(whole, &e.to_string()))
}

fn parse_rational(text: &str, whole: &str) -> Result<BigRational> {
    match text.split_once('/') {
        None => Ok(BigRational::from_integer(parse_integer(text, whole)?)),
        Some((num, den)) => {
            let num = parse_integer(num, whole)?;
            if den.starts_with('-') || den.starts_with('+') {
                return Err(err(whole, "denominator must be unsigned"));
            }
            let den = parse_integer(den, whole)?;
            if den.is_zero() {
                return Err(err(whole, "zero denominator"));
            }
            Ok(BigRational::new(num, den))
        }
    }
}

fn parse_quaternion(text: &str) -> Result<Quaternion> {
    let mut terms: Vec<&str> = Vec::new();
    let mut start = 0;
    for (idx, ch) in text.char_indices() {
        if (ch == '+' || ch == '-') && idx > start {
            terms.push(&text[start..idx]);
            start = idx;
        }
    }
    terms.push(&text[start..]);

    let mut parts: [Option<BigRational>; 4] = [None, None, None, None];
    for term in terms {
        let (negative, body) = match term.as_bytes().first() {
            Some(b'-') => (true, &term[1..]),
            Some(b'+') => (false, &term[1..]),
            _ => (false, term),
        };
        if body.is_empty() {
            return Err(err(text, "dangling sign"));
        }
        let (slot, coeff) = match body.as_bytes()[body.len() - 1] {
            b'i' => (1, &body[..body.len() - 1]),
            b'j' => (2, &body[..body.len() - 1]),
            b'k' => (3, &body[..body.len() - 1]),
            _ => (0, body),
        };
        if coeff.starts_with('+') || coeff.starts_with('-') {
            return Err(err(text, "repeated sign"));
        }
        let mut value = if coeff.is_empty() {
            if slot == 0 {
                return Err(err(text, "empty term"));
            }
            BigRational::one()
        } else {
            parse_rational(coeff, text)?
        };
        if negative {
            value = -value;
        }
        if parts[slot].replace(value).is_some() {
            return Err(err(text, "basis element repeated"));
        }
    }
    let [re, i, j, k] = parts.map(|p| p.unwrap_or_else(BigRational::zero));
    Ok(Quaternion::new(re, i, j, k))
}

pub(super) fn parse(domain: ScalarDomain, raw: &str) -> Result<Scalar> {
    let text: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(err(raw, "empty literal"));
    }
    match domain {
        ScalarDomain::PrimeField { .. } => Ok(domain.from_bigint(&parse_integer(&text, raw)?)),
        ScalarDomain::Rationals => Ok(Scalar::Q(parse_rational(&text, raw)?)),
        ScalarDomain::RationalQuaternions => Ok(Scalar::H(parse_quaternion(&text)?)),
    }
}

fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn format_quaternion(h: &Quaternion) -> String {
    let mut out = String::new();
    for (coeff, unit) in h.coords().into_iter().zip(["", "i", "j", "k"]) {
        if coeff.is_zero() {
            continue;
        }
        let magnitude = coeff.abs();
        if coeff.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if !(magnitude.is_one() && !unit.is_empty()) {
            out.push_str(&format_rational(&magnitude));
        }
        out.push_str(unit);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(super) fn format(x: &Scalar) -> String {
    match x {
        Scalar::Fp { v, .. } => v.to_string(),
        Scalar::Q(q) => format_rational(q),
        Scalar::H(h) => format_quaternion(h),
    }
}
