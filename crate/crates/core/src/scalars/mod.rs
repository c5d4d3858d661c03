//! Exact scalars: prime fields `GF(p)`, the rationals, and the rational
//! quaternion division ring.
//!
//! Every [`Scalar`] is stored in canonical form (least nonnegative residue,
//! reduced fraction with positive denominator), so equality is structural.

mod literal;
mod quaternion;
mod sample;

pub use quaternion::Quaternion;
pub use sample::random_scalar;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{MunnError, Result};

/// Largest supported prime modulus (exclusive); keeps residue products in `u128`-free range.
pub const MAX_PRIME: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DomainSpec", into = "DomainSpec")]
pub enum ScalarDomain {
    PrimeField { p: u64 },
    Rationals,
    RationalQuaternions,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum DomainSpec {
    #[serde(alias = "gf")]
    PrimeField { p: u64 },
    #[serde(alias = "q")]
    Rationals,
    #[serde(alias = "h", alias = "quaternions")]
    RationalQuaternions,
}

impl TryFrom<DomainSpec> for ScalarDomain {
    type Error = MunnError;
    fn try_from(spec: DomainSpec) -> Result<Self> {
        match spec {
            DomainSpec::PrimeField { p } => ScalarDomain::prime_field(p),
            DomainSpec::Rationals => Ok(ScalarDomain::Rationals),
            DomainSpec::RationalQuaternions => Ok(ScalarDomain::RationalQuaternions),
        }
    }
}

impl From<ScalarDomain> for DomainSpec {
    fn from(d: ScalarDomain) -> Self {
        match d {
            ScalarDomain::PrimeField { p } => DomainSpec::PrimeField { p },
            ScalarDomain::Rationals => DomainSpec::Rationals,
            ScalarDomain::RationalQuaternions => DomainSpec::RationalQuaternions,
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl ScalarDomain {
    pub fn prime_field(p: u64) -> Result<Self> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(MunnError::InvalidDomain(format!(
                "modulus {p} is not a prime below 2^32"
            )));
        }
        Ok(ScalarDomain::PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            ScalarDomain::PrimeField { p } => *p,
            _ => 0,
        }
    }

    pub fn is_commutative(&self) -> bool {
        !matches!(self, ScalarDomain::RationalQuaternions)
    }

    pub fn has_infinite_center(&self) -> bool {
        !matches!(self, ScalarDomain::PrimeField { .. })
    }

    pub fn zero(&self) -> Scalar {
        match *self {
            ScalarDomain::PrimeField { p } => Scalar::Fp { p, v: 0 },
            ScalarDomain::Rationals => Scalar::Q(BigRational::zero()),
            ScalarDomain::RationalQuaternions => Scalar::H(Quaternion::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match *self {
            ScalarDomain::PrimeField { p } => Scalar::Fp { p, v: reduce_mod(n, p) },
            ScalarDomain::Rationals => Scalar::Q(BigRational::from_integer(n.clone())),
            ScalarDomain::RationalQuaternions => {
                Scalar::H(Quaternion::from_rational(BigRational::from_integer(n.clone())))
            }
        }
    }

    /// Image of a rational number; fails in `GF(p)` when `p` divides the denominator.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match *self {
            ScalarDomain::PrimeField { .. } => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                Ok(&num * &den.inverse()?)
            }
            ScalarDomain::Rationals => Ok(Scalar::Q(q.clone())),
            ScalarDomain::RationalQuaternions => Ok(Scalar::H(Quaternion::from_rational(q.clone()))),
        }
    }

    /// The prime subfield of the center: `GF(p)` itself or `Q`.
    pub fn center(&self) -> ScalarDomain {
        match self {
            ScalarDomain::PrimeField { .. } => *self,
            _ => ScalarDomain::Rationals,
        }
    }

    /// A basis of the domain as a (left) vector space over [`Self::center`].
    pub fn center_basis(&self) -> Vec<Scalar> {
        match self {
            ScalarDomain::RationalQuaternions => vec![
                Scalar::H(Quaternion::one()),
                Scalar::H(Quaternion::unit_i()),
                Scalar::H(Quaternion::unit_j()),
                Scalar::H(Quaternion::unit_k()),
            ],
            _ => vec![self.one()],
        }
    }

    pub fn center_dim(&self) -> usize {
        match self {
            ScalarDomain::RationalQuaternions => 4,
            _ => 1,
        }
    }

    pub fn parse(&self, text: &str) -> Result<Scalar> {
        literal::parse(*self, text)
    }
}

impl fmt::Display for ScalarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarDomain::PrimeField { p } => write!(f, "GF({p})"),
            ScalarDomain::Rationals => write!(f, "Q"),
            ScalarDomain::RationalQuaternions => write!(f, "H(Q)"),
        }
    }
}

fn reduce_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { p: u64, v: u64 },
    Q(BigRational),
    H(Quaternion),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl Scalar {
    pub fn domain(&self) -> ScalarDomain {
        match self {
            Scalar::Fp { p, .. } => ScalarDomain::PrimeField { p: *p },
            Scalar::Q(_) => ScalarDomain::Rationals,
            Scalar::H(_) => ScalarDomain::RationalQuaternions,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Q(q) => q.is_zero(),
            Scalar::H(h) => h.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.domain().one()
    }

    /// Checked arithmetic; the operator impls panic on mismatched domains instead.
    pub fn arith(&self, other: &Scalar, op: ArithOp) -> Result<Scalar> {
        if self.domain() != other.domain() {
            return Err(MunnError::DomainMismatch {
                left: self.domain(),
                right: other.domain(),
            });
        }
        Ok(match op {
            ArithOp::Add => self + other,
            ArithOp::Sub => self - other,
            ArithOp::Mul => self * other,
        })
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(MunnError::ZeroInverse);
        }
        Ok(match self {
            Scalar::Fp { p, v } => Scalar::Fp { p: *p, v: pow_mod(*v, p - 2, *p) },
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::H(h) => Scalar::H(h.inverse().expect("nonzero quaternion")),
        })
    }

    /// Quaternion conjugation; the identity on commutative domains.
    pub fn conjugate(&self) -> Scalar {
        match self {
            Scalar::H(h) => Scalar::H(h.conjugate()),
            other => other.clone(),
        }
    }

    /// True when the scalar commutes with every element of its domain.
    pub fn is_central(&self) -> bool {
        match self {
            Scalar::H(h) => h.is_rational(),
            _ => true,
        }
    }

    /// Coordinates over the center basis, as elements of the center field.
    pub fn center_coords(&self) -> Vec<Scalar> {
        match self {
            Scalar::H(h) => h.coords().iter().map(|c| Scalar::Q((*c).clone())).collect(),
            other => vec![other.clone()],
        }
    }

    /// Inverse of [`Self::center_coords`].
    pub fn from_center_coords(domain: ScalarDomain, coords: &[Scalar]) -> Scalar {
        assert_eq!(coords.len(), domain.center_dim(), "coordinate count");
        match domain {
            ScalarDomain::RationalQuaternions => {
                let q: Vec<BigRational> = coords
                    .iter()
                    .map(|c| match c {
                        Scalar::Q(q) => q.clone(),
                        other => panic!("expected a rational coordinate, got {other}"),
                    })
                    .collect();
                Scalar::H(Quaternion::new(q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()))
            }
            _ => {
                assert_eq!(coords[0].domain(), domain, "coordinate domain");
                coords[0].clone()
            }
        }
    }

    /// Real part (the scalar itself on commutative domains).
    pub fn real_part(&self) -> Scalar {
        match self {
            Scalar::H(h) => Scalar::H(Quaternion::from_rational(h.re.clone())),
            other => other.clone(),
        }
    }

    /// Largest absolute numerator or denominator; 0 for prime field elements.
    pub fn height(&self) -> BigInt {
        fn h(q: &BigRational) -> BigInt {
            std::cmp::max(q.numer().abs(), q.denom().abs())
        }
        match self {
            Scalar::Fp { .. } => BigInt::zero(),
            Scalar::Q(q) => h(q),
            Scalar::H(x) => x.coords().iter().map(|c| h(c)).max().unwrap_or_default(),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar domain mismatch: {} vs {}", a.domain(), b.domain())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Fp { p, v }, Scalar::Fp { p: q, v: w }) if p == q => Scalar::Fp { p: *p, v: (v + w) % p },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::H(a), Scalar::H(b)) => Scalar::H(a + b),
            _ => mismatch(self, o),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Fp { p, v }, Scalar::Fp { p: q, v: w }) if p == q => {
                Scalar::Fp { p: *p, v: (v + p - w) % p }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::H(a), Scalar::H(b)) => Scalar::H(a - b),
            _ => mismatch(self, o),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Fp { p, v }, Scalar::Fp { p: q, v: w }) if p == q => Scalar::Fp { p: *p, v: v * w % p },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::H(a), Scalar::H(b)) => Scalar::H(a * b),
            _ => mismatch(self, o),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Fp { p, v } => Scalar::Fp { p: *p, v: (p - v) % p },
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::H(a) => Scalar::H(-a),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&literal::format(self))
    }
}

#[cfg(test)]
pub(crate) fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> ScalarDomain {
        ScalarDomain::prime_field(p).unwrap()
    }

    #[test]
    fn prime_field_arith() {
        let f = gf(5);
        assert_eq!(&f.from_i64(3) * &f.from_i64(4), f.from_i64(2));
        assert_eq!(f.from_i64(3).inverse().unwrap(), f.from_i64(2));
        assert_eq!(f.from_i64(-1), f.from_i64(4));
    }

    #[test]
    fn rational_arith() {
        let q = ScalarDomain::Rationals;
        let sum = &q.parse("1/2").unwrap() + &q.parse("1/3").unwrap();
        assert_eq!(sum, q.parse("5/6").unwrap());
        assert_eq!(q.parse("-4/7").unwrap().inverse().unwrap(), q.parse("-7/4").unwrap());
    }

    #[test]
    fn quaternion_products_and_inverse() {
        let h = ScalarDomain::RationalQuaternions;
        let (i, j, k) = (h.parse("i").unwrap(), h.parse("j").unwrap(), h.parse("k").unwrap());
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &i, -&k);
        let two_k = h.parse("2k").unwrap();
        assert_eq!(two_k.inverse().unwrap(), h.parse("-1/2k").unwrap());
    }

    #[test]
    fn domain_errors() {
        assert!(ScalarDomain::prime_field(4).is_err());
        assert!(ScalarDomain::prime_field(1).is_err());
        let f = gf(5);
        let q = ScalarDomain::Rationals;
        let err = f.one().arith(&q.one(), ArithOp::Add).unwrap_err();
        assert_eq!(err.code(), "DOMAIN_MISMATCH");
        assert_eq!(f.zero().inverse().unwrap_err(), MunnError::ZeroInverse);
    }

    #[test]
    fn characteristic_and_commutativity() {
        assert_eq!(gf(7).characteristic(), 7);
        assert_eq!(ScalarDomain::Rationals.characteristic(), 0);
        assert!(!ScalarDomain::RationalQuaternions.is_commutative());
        assert!(gf(2).is_commutative());
    }

    #[test]
    fn rational_images_in_prime_field() {
        let f = gf(7);
        assert_eq!(f.from_rational(&rational(1, 2)).unwrap(), f.from_i64(4));
        assert!(f.from_rational(&rational(1, 7)).is_err());
    }

    #[test]
    fn center_coordinates_round_trip() {
        let h = ScalarDomain::RationalQuaternions;
        let x = h.parse("1/2-3i+7/5k").unwrap();
        assert_eq!(Scalar::from_center_coords(h, &x.center_coords()), x);
    }

    #[test]
    fn domain_json() {
        let d: ScalarDomain = serde_json::from_str(r#"{"kind":"prime_field","p":5}"#).unwrap();
        assert_eq!(d, gf(5));
        assert!(serde_json::from_str::<ScalarDomain>(r#"{"kind":"prime_field","p":6}"#).is_err());
        let text = serde_json::to_string(&ScalarDomain::RationalQuaternions).unwrap();
        assert_eq!(text, r#"{"kind":"rational_quaternions"}"#);
    }
}
