use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::{Quaternion, Scalar, ScalarDomain};

fn small_rational<R: Rng + ?Sized>(rng: &mut R, height: i64) -> BigRational {
    let h = height.max(1);
    let num = rng.gen_range(-h..=h);
    let den = rng.gen_range(1..=h);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Uniform residue in `GF(p)`; otherwise numerators in `[-height, height]`
/// and denominators in `[1, height]` for each rational coordinate.
pub fn random_scalar<R: Rng + ?Sized>(domain: ScalarDomain, rng: &mut R, height: i64) -> Scalar {
    match domain {
        ScalarDomain::PrimeField { p } => Scalar::Fp { p, v: rng.gen_range(0..p) },
        ScalarDomain::Rationals => Scalar::Q(small_rational(rng, height)),
        ScalarDomain::RationalQuaternions => Scalar::H(Quaternion::new(
            small_rational(rng, height),
            small_rational(rng, height),
            small_rational(rng, height),
            small_rational(rng, height),
        )),
    }
}
