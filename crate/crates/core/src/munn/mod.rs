//! The Munn algebra `M(D, m, n, P)`: `m x n` matrices with `A • B = A P B`.

mod witness;

pub use witness::{
    evaluate_witness, inspect_witness, CommTerm, JordanTerm, Sign, Witness, WitnessInspection, WitnessKind,
    WordTerm,
};

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Neg, Sub};

use crate::error::{MunnError, Result};
use crate::matrix::Matrix;
use crate::scalars::{random_scalar, Scalar, ScalarDomain};

/// Largest supported index-set size.
pub const MAX_DIM: usize = 64;

/// An element of a Munn algebra. Carries no context; operations on a
/// [`MunnContext`] check shape and domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MunnElement(Matrix);

impl MunnElement {
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn scale_left(&self, c: &Scalar) -> MunnElement {
        MunnElement(self.0.scale_left(c))
    }

    /// Entry at the 1-based cell `(i, s)`.
    pub fn entry(&self, i: usize, s: usize) -> &Scalar {
        self.0.get(i - 1, s - 1)
    }
}

impl Add for &MunnElement {
    type Output = MunnElement;
    fn add(self, o: &MunnElement) -> MunnElement {
        MunnElement(&self.0 + &o.0)
    }
}

impl Sub for &MunnElement {
    type Output = MunnElement;
    fn sub(self, o: &MunnElement) -> MunnElement {
        MunnElement(&self.0 - &o.0)
    }
}

impl Neg for &MunnElement {
    type Output = MunnElement;
    fn neg(self) -> MunnElement {
        MunnElement(-&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketKind {
    Commutator,
    Jordan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `A -> W^-1 A V^-1`, into the context with sandwich `V P W`.
    Forward,
    /// `A -> W A V`.
    Backward,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Canonical {
    pub v: Matrix,
    pub w: Matrix,
    pub v_inv: Matrix,
    pub w_inv: Matrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MunnContext {
    domain: ScalarDomain,
    m: usize,
    n: usize,
    sandwich: Matrix,
    rank: usize,
    canonical: Canonical,
}

impl MunnContext {
    /// Builds `M(domain, m, n, P)` for an `n x m` sandwich matrix `P`,
    /// computing its rank and the normalization `V P W = E_r` eagerly.
    pub fn new(domain: ScalarDomain, m: usize, n: usize, sandwich: Matrix) -> Result<MunnContext> {
        check_dims(m, n)?;
        if sandwich.domain() != domain {
            return Err(MunnError::DomainMismatch { left: domain, right: sandwich.domain() });
        }
        if sandwich.shape() != (n, m) {
            return Err(MunnError::ShapeMismatch { expected: (n, m), found: sandwich.shape() });
        }
        let eq = sandwich.equivalence_normalize();
        let v_inv = eq.v.invert().expect("row transform is invertible");
        let w_inv = eq.w.invert().expect("column transform is invertible");
        Ok(MunnContext {
            domain,
            m,
            n,
            sandwich,
            rank: eq.rank,
            canonical: Canonical { v: eq.v, w: eq.w, v_inv, w_inv },
        })
    }

    /// The context with sandwich `E_r^{n,m}` and identity transforms.
    pub fn canonical(domain: ScalarDomain, m: usize, n: usize, r: usize) -> Result<MunnContext> {
        check_dims(m, n)?;
        if r > m.min(n) {
            return Err(MunnError::InvalidContext(format!("rank {r} exceeds min({m}, {n})")));
        }
        Ok(MunnContext {
            domain,
            m,
            n,
            sandwich: Matrix::canonical_form(domain, n, m, r),
            rank: r,
            canonical: Canonical {
                v: Matrix::identity(domain, n),
                w: Matrix::identity(domain, m),
                v_inv: Matrix::identity(domain, n),
                w_inv: Matrix::identity(domain, m),
            },
        })
    }

    pub fn domain(&self) -> ScalarDomain {
        self.domain
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sandwich(&self) -> &Matrix {
        &self.sandwich
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn canonical_data(&self) -> &Canonical {
        &self.canonical
    }

    pub fn is_canonical(&self) -> bool {
        self.sandwich == Matrix::canonical_form(self.domain, self.n, self.m, self.rank)
    }

    pub fn canonical_context(&self) -> MunnContext {
        MunnContext::canonical(self.domain, self.m, self.n, self.rank).expect("dimensions already validated")
    }

    /// True when the normalizing transforms have central entries, so the
    /// transport map is linear for left scalar multiplication as well.
    pub fn transforms_are_central(&self) -> bool {
        [&self.canonical.v, &self.canonical.w]
            .iter()
            .all(|t| t.entries().iter().all(Scalar::is_central))
    }

    pub fn element(&self, matrix: Matrix) -> Result<MunnElement> {
        self.check_matrix(&matrix)?;
        Ok(MunnElement(matrix))
    }

    fn check_matrix(&self, matrix: &Matrix) -> Result<()> {
        if matrix.domain() != self.domain {
            return Err(MunnError::ContextMismatch(format!(
                "element over {} in a context over {}",
                matrix.domain(),
                self.domain
            )));
        }
        if matrix.shape() != (self.m, self.n) {
            return Err(MunnError::ContextMismatch(format!(
                "element of shape {:?} in a context with m = {}, n = {}",
                matrix.shape(),
                self.m,
                self.n
            )));
        }
        Ok(())
    }

    pub fn check(&self, a: &MunnElement) -> Result<()> {
        self.check_matrix(&a.0)
    }

    pub fn zero(&self) -> MunnElement {
        MunnElement(Matrix::zeros(self.domain, self.m, self.n))
    }

    /// `(g, i, s)`: the element with `g` at the 1-based cell `(i, s)`.
    pub fn unit(&self, g: Scalar, i: usize, s: usize) -> Result<MunnElement> {
        if i == 0 || s == 0 || i > self.m || s > self.n {
            return Err(MunnError::IndexOutOfRange { i, s, m: self.m, n: self.n });
        }
        if g.domain() != self.domain {
            return Err(MunnError::DomainMismatch { left: self.domain, right: g.domain() });
        }
        let mut out = Matrix::zeros(self.domain, self.m, self.n);
        out.set(i - 1, s - 1, g);
        Ok(MunnElement(out))
    }

    /// `(g, i, s)` for an integer `g`; indices must be in range.
    pub fn unit_int(&self, g: i64, i: usize, s: usize) -> MunnElement {
        self.unit(self.domain.from_i64(g), i, s).expect("unit index in range")
    }

    /// `A • B = A P B`.
    pub fn sandwich_product(&self, a: &MunnElement, b: &MunnElement) -> Result<MunnElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Unchecked sandwich product; panics on shape mismatch.
    pub fn mul(&self, a: &MunnElement, b: &MunnElement) -> MunnElement {
        MunnElement(&(&a.0 * &self.sandwich) * &b.0)
    }

    pub fn mul_all<'a>(&self, factors: impl IntoIterator<Item = &'a MunnElement>) -> Option<MunnElement> {
        factors.into_iter().fold(None, |acc, f| match acc {
            None => Some(f.clone()),
            Some(x) => Some(self.mul(&x, f)),
        })
    }

    pub fn commutator(&self, a: &MunnElement, b: &MunnElement) -> MunnElement {
        &self.mul(a, b) - &self.mul(b, a)
    }

    pub fn jordan(&self, a: &MunnElement, b: &MunnElement) -> MunnElement {
        &self.mul(a, b) + &self.mul(b, a)
    }

    pub fn bracket(&self, a: &MunnElement, b: &MunnElement, kind: BracketKind) -> Result<MunnElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(match kind {
            BracketKind::Commutator => self.commutator(a, b),
            BracketKind::Jordan => self.jordan(a, b),
        })
    }

    pub fn is_idempotent(&self, e: &MunnElement) -> bool {
        self.mul(e, e) == *e
    }

    /// `W^-1 A V^-1`: coordinates in [`Self::canonical_context`].
    pub fn to_canonical(&self, a: &MunnElement) -> MunnElement {
        MunnElement(&(&self.canonical.w_inv * &a.0) * &self.canonical.v_inv)
    }

    /// `W A V`: inverse of [`Self::to_canonical`].
    pub fn from_canonical(&self, a: &MunnElement) -> MunnElement {
        MunnElement(&(&self.canonical.w * &a.0) * &self.canonical.v)
    }

    /// Runs a decomposition in the canonical context and maps the witness
    /// back through `W (.) V`.
    pub fn via_canonical(
        &self,
        a: &MunnElement,
        engine: impl FnOnce(&MunnContext, &MunnElement) -> Result<Witness>,
    ) -> Result<Witness> {
        self.check(a)?;
        if self.is_canonical() {
            return engine(self, a);
        }
        let canon = self.canonical_context();
        let w = engine(&canon, &self.to_canonical(a))?;
        Ok(w.map_elements(|e| self.from_canonical(e)))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> MunnElement {
        MunnElement(Matrix::from_fn(self.domain, self.m, self.n, |_, _| {
            random_scalar(self.domain, rng, height)
        }))
    }
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m < 2 || n < 2 {
        return Err(MunnError::InvalidContext(format!("need 2 <= m, n; got m = {m}, n = {n}")));
    }
    if m > MAX_DIM || n > MAX_DIM {
        return Err(MunnError::InvalidContext(format!("m, n must not exceed {MAX_DIM}")));
    }
    Ok(())
}

/// The isomorphism `A -> W^-1 A V^-1` from `M(D, m, n, P)` onto
/// `M(D, m, n, V P W)`, or its inverse.
pub fn transport(
    source: &MunnContext,
    target: &MunnContext,
    a: &MunnElement,
    direction: Direction,
) -> Result<MunnElement> {
    let c = &source.canonical;
    let expected = &(&c.v * &source.sandwich) * &c.w;
    if target.domain != source.domain || target.m != source.m || target.n != source.n || target.sandwich != expected {
        return Err(MunnError::ContextMismatch(
            "target sandwich is not V P W for the stored transforms".into(),
        ));
    }
    match direction {
        Direction::Forward => {
            source.check(a)?;
            Ok(source.to_canonical(a))
        }
        Direction::Backward => {
            target.check(a)?;
            Ok(source.from_canonical(a))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> ScalarDomain {
        ScalarDomain::prime_field(p).unwrap()
    }

    #[test]
    fn make_context_examples() {
        let f = gf(5);
        let ctx = MunnContext::new(f, 2, 2, Matrix::identity(f, 2)).unwrap();
        assert_eq!(ctx.rank(), 2);

        let q = ScalarDomain::Rationals;
        let p = Matrix::parse(q, &[&["1", "0"], &["0", "1"], &["0", "0"]]).unwrap();
        let ctx = MunnContext::new(q, 2, 3, p).unwrap();
        assert_eq!(ctx.rank(), 2);
        assert!(ctx.is_canonical());

        let f7 = gf(7);
        let ctx = MunnContext::new(f7, 3, 3, Matrix::zeros(f7, 3, 3)).unwrap();
        assert_eq!(ctx.rank(), 0);

        assert!(MunnContext::new(f, 1, 2, Matrix::zeros(f, 2, 1)).is_err());
        assert_eq!(
            MunnContext::new(f, 2, 3, Matrix::zeros(f, 2, 3)).unwrap_err().code(),
            "SHAPE_MISMATCH"
        );
    }

    #[test]
    fn units() {
        let f = gf(5);
        let ctx = MunnContext::canonical(f, 2, 3, 2).unwrap();
        let u = ctx.unit(f.from_i64(3), 2, 1).unwrap();
        assert_eq!(u.entry(2, 1), &f.from_i64(3));
        assert!(ctx.unit(f.zero(), 2, 2).unwrap().is_zero());
        assert_eq!(ctx.unit(f.one(), 3, 1).unwrap_err().code(), "INDEX_OUT_OF_RANGE");
    }

    #[test]
    fn unit_product_law() {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = Matrix::from_fn(f, 3, 2, |_, _| random_scalar(f, &mut rng, 1));
        let ctx = MunnContext::new(f, 2, 3, p.clone()).unwrap();
        for _ in 0..50 {
            let (g, h) = (random_scalar(f, &mut rng, 1), random_scalar(f, &mut rng, 1));
            let (i, j) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let (s, t) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let lhs = ctx.mul(&ctx.unit(g.clone(), i, s).unwrap(), &ctx.unit(h.clone(), j, t).unwrap());
            let coeff = &(&g * p.get(s - 1, j - 1)) * &h;
            assert_eq!(lhs, ctx.unit(coeff, i, t).unwrap());
        }
    }

    #[test]
    fn brackets() {
        let f = gf(5);
        let ctx = MunnContext::new(f, 2, 2, Matrix::identity(f, 2)).unwrap();
        let (e12, e21) = (ctx.unit_int(1, 1, 2), ctx.unit_int(1, 2, 1));
        let c = ctx.bracket(&e12, &e21, BracketKind::Commutator).unwrap();
        assert_eq!(c, &ctx.unit_int(1, 1, 1) - &ctx.unit_int(1, 2, 2));
        assert!(ctx.commutator(&e12, &e12).is_zero());
        assert_eq!(ctx.jordan(&e12, &e21), ctx.jordan(&e21, &e12));

        let other = MunnContext::canonical(f, 2, 3, 2).unwrap();
        assert_eq!(
            ctx.bracket(&e12, &other.zero(), BracketKind::Jordan).unwrap_err().code(),
            "CONTEXT_MISMATCH"
        );
    }

    #[test]
    fn transport_is_multiplicative() {
        let f = gf(5);
        let p = Matrix::parse(f, &[&["0", "1"], &["1", "0"]]).unwrap();
        let ctx = MunnContext::new(f, 2, 2, p).unwrap();
        let canon = ctx.canonical_context();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = ctx.random_element(&mut rng, 1);
            let b = ctx.random_element(&mut rng, 1);
            let lhs = transport(&ctx, &canon, &ctx.mul(&a, &b), Direction::Forward).unwrap();
            let fa = transport(&ctx, &canon, &a, Direction::Forward).unwrap();
            let fb = transport(&ctx, &canon, &b, Direction::Forward).unwrap();
            assert_eq!(lhs, canon.mul(&fa, &fb));
            assert_eq!(transport(&ctx, &canon, &fa, Direction::Backward).unwrap(), a);
        }
        // An unrelated context is refused.
        let wrong = MunnContext::canonical(f, 2, 2, 1).unwrap();
        assert!(transport(&ctx, &wrong, &ctx.zero(), Direction::Forward).is_err());
    }

    #[test]
    fn identity_transport_when_canonical() {
        let q = ScalarDomain::Rationals;
        let ctx = MunnContext::canonical(q, 3, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = ctx.random_element(&mut rng, 5);
        assert_eq!(ctx.to_canonical(&a), a);
    }
}
