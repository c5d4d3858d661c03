//! Small linear-algebra helpers over the center field of a scalar domain.

use rand::Rng;

use crate::matrix::Matrix;
use crate::scalars::{random_scalar, Scalar, ScalarDomain};

/// Center-field coefficients `c` with `sum_k c_k images[k] = target`, where
/// each image is a flat list of domain scalars.
pub(crate) fn center_solve(domain: ScalarDomain, images: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let center = domain.center();
    let flat = |v: &[Scalar]| v.iter().flat_map(Scalar::center_coords).collect::<Vec<_>>();
    let columns: Vec<Vec<Scalar>> = images.iter().map(|v| flat(v)).collect();
    let rhs = flat(target);
    let a = Matrix::from_fn(center, rhs.len(), columns.len(), |i, j| columns[j][i].clone());
    a.solve_right(&rhs)
}

/// A center-field scalar viewed inside `domain`.
pub(crate) fn lift_center(domain: ScalarDomain, c: &Scalar) -> Scalar {
    match c {
        Scalar::Q(q) => domain.from_rational(q).expect("rationals embed"),
        other => other.clone(),
    }
}

/// Real part of the trace, as a center-field scalar.
pub(crate) fn re_trace(m: &Matrix) -> Scalar {
    m.trace().center_coords().swap_remove(0)
}

pub(crate) fn random_nonzero_center<R: Rng + ?Sized>(domain: ScalarDomain, rng: &mut R, height: i64) -> Scalar {
    loop {
        let c = random_scalar(domain.center(), rng, height);
        if !c.is_zero() {
            return c;
        }
    }
}

/// `x` with `d x - x e = y`, or `None` when the map is singular at `y`.
pub(crate) fn solve_sylvester_scalar(d: &Scalar, e: &Scalar, y: &Scalar) -> Option<Scalar> {
    let domain = y.domain();
    if d.is_central() && e.is_central() {
        let gap = d - e;
        return gap.inverse().ok().map(|g| &g * y);
    }
    let basis = domain.center_basis();
    let images: Vec<Vec<Scalar>> = basis.iter().map(|b| vec![&(d * b) - &(b * e)]).collect();
    let coeffs = center_solve(domain, &images, std::slice::from_ref(y))?;
    Some(Scalar::from_center_coords(domain, &coeffs))
}
