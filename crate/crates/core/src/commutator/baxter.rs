//! Every rational quaternion as a sum of products of two commutators.

use super::linear::center_solve;
use crate::error::{MunnError, Result};
use crate::scalars::{Quaternion, Scalar, ScalarDomain};

/// `sum_k [a_k, b_k] [c_k, d_k]` over the scalar domain.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarCommutatorWitness {
    pub terms: Vec<[Scalar; 4]>,
}

fn comm(x: &Scalar, y: &Scalar) -> Scalar {
    &(x * y) - &(y * x)
}

impl ScalarCommutatorWitness {
    pub fn evaluate(&self, domain: ScalarDomain) -> Scalar {
        self.terms
            .iter()
            .fold(domain.zero(), |acc, [a, b, c, d]| &acc + &(&comm(a, b) * &comm(c, d)))
    }
}

/// Writes `x` as `sum [a, b] [c, d]` using the products `[i, j][c, d]` and
/// `[i, k][c, d]` with `c, d` in `{1, i, j, k}`, which span `H(Q)` over `Q`.
pub fn baxter_decompose_scalar(x: &Scalar) -> Result<ScalarCommutatorWitness> {
    let domain = x.domain();
    if domain != ScalarDomain::RationalQuaternions {
        return Err(MunnError::CommutativeDomain(
            "commutators vanish over a field, so no nonzero scalar is a sum of their products".into(),
        ));
    }
    if x.is_zero() {
        return Ok(ScalarCommutatorWitness { terms: vec![] });
    }
    let units = [Quaternion::one(), Quaternion::unit_i(), Quaternion::unit_j(), Quaternion::unit_k()].map(Scalar::H);
    let [_, i, j, k] = &units;

    let mut chosen: Vec<([Scalar; 4], Scalar)> = Vec::new();
    'outer: for (a, b) in [(i, j), (i, k)] {
        for c in &units {
            for d in &units {
                let v = &comm(a, b) * &comm(c, d);
                if v.is_zero() {
                    continue;
                }
                let images: Vec<Vec<Scalar>> = chosen.iter().map(|(_, w)| vec![w.clone()]).collect();
                if chosen.is_empty() || center_solve(domain, &images, std::slice::from_ref(&v)).is_none() {
                    chosen.push(([a.clone(), b.clone(), c.clone(), d.clone()], v));
                    if chosen.len() == 4 {
                        break 'outer;
                    }
                }
            }
        }
    }
    let images: Vec<Vec<Scalar>> = chosen.iter().map(|(_, w)| vec![w.clone()]).collect();
    let coeffs = center_solve(domain, &images, std::slice::from_ref(x)).expect("spanning products");
    let terms = chosen
        .into_iter()
        .zip(coeffs)
        .filter(|(_, q)| !q.is_zero())
        .map(|(([a, b, c, d], _), q)| {
            let q = super::linear::lift_center(domain, &q);
            [a, b, c, &q * &d]
        })
        .collect();
    let w = ScalarCommutatorWitness { terms };
    debug_assert_eq!(&w.evaluate(domain), x);
    Ok(w)
}
