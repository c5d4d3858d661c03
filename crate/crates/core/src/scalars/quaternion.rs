//! Rational quaternions `a + bi + cj + dk`.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quaternion {
    pub re: BigRational,
    pub i: BigRational,
    pub j: BigRational,
    pub k: BigRational,
}

impl Quaternion {
    pub fn new(re: BigRational, i: BigRational, j: BigRational, k: BigRational) -> Self {
        Quaternion { re, i, j, k }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Quaternion::new(q, BigRational::zero(), BigRational::zero(), BigRational::zero())
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn unit_i() -> Self {
        Quaternion::new(BigRational::zero(), BigRational::one(), BigRational::zero(), BigRational::zero())
    }

    pub fn unit_j() -> Self {
        Quaternion::new(BigRational::zero(), BigRational::zero(), BigRational::one(), BigRational::zero())
    }

    pub fn unit_k() -> Self {
        Quaternion::new(BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.i.is_zero() && self.j.is_zero() && self.k.is_zero()
    }

    /// True when the element lies in the center `Q`.
    pub fn is_rational(&self) -> bool {
        self.i.is_zero() && self.j.is_zero() && self.k.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Quaternion::new(self.re.clone(), -&self.i, -&self.j, -&self.k)
    }

    /// Reduced norm `a^2 + b^2 + c^2 + d^2`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.i * &self.i + &self.j * &self.j + &self.k * &self.k
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Quaternion::new(&self.re * q, &self.i * q, &self.j * q, &self.k * q)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(self.conjugate().scale(&n.recip()))
    }

    pub fn coords(&self) -> [&BigRational; 4] {
        [&self.re, &self.i, &self.j, &self.k]
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, o: &Quaternion) -> Quaternion {
        Quaternion::new(&self.re + &o.re, &self.i + &o.i, &self.j + &o.j, &self.k + &o.k)
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, o: &Quaternion) -> Quaternion {
        Quaternion::new(&self.re - &o.re, &self.i - &o.i, &self.j - &o.j, &self.k - &o.k)
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-&self.re, -&self.i, -&self.j, -&self.k)
    }
}

impl Mul for &Quaternion {
    type Output = Quaternion;
    fn mul(self, o: &Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (&self.re, &self.i, &self.j, &self.k);
        let (a2, b2, c2, d2) = (&o.re, &o.i, &o.j, &o.k);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}
