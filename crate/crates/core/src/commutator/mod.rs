//! Writing elements as sums of products of pairs of commutators
//! `[x, y] • [z, w]`, and bounding how many such products are needed.

mod baxter;
mod linear;
mod xi;
mod xi1;

pub use baxter::{baxter_decompose_scalar, ScalarCommutatorWitness};
pub use xi::{decompose_xi2, decompose_xi_blocks};
pub use xi1::{decompose_xi1, search_inner_factorization, InnerFactorization, DEFAULT_BUDGET};

use crate::error::{MunnError, Result};
use crate::matrix::Matrix;
use crate::munn::{CommTerm, MunnContext, MunnElement, Sign, Witness};
use crate::scalars::{Quaternion, Scalar};

/// Bounds on the number of commutator products needed for one element.
#[derive(Clone, Debug, PartialEq)]
pub struct XiReport {
    /// `ceil(rank(A) / r)`: no shorter witness for `A` exists.
    pub lower: usize,
    /// `ceil(min(m, n) / r)`: a lower bound for the whole algebra.
    pub algebra_lower: usize,
    /// Length of `witness`.
    pub upper: usize,
    pub witness: Witness,
}

pub(crate) fn report(ctx: &MunnContext, a: &MunnElement, witness: Witness) -> XiReport {
    let r = ctx.rank().max(1);
    XiReport {
        lower: a.matrix().row_rank().div_ceil(r),
        algebra_lower: ctx.m().min(ctx.n()).div_ceil(r),
        upper: witness.len(),
        witness,
    }
}

/// Rank certificate behind [`xi_lower_bound`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub bound: usize,
    pub ordinary_rank: usize,
    pub sandwich_rank: usize,
}

/// `ceil(rank(A) / r)`. Each product `[x, y] • [z, w] = [x, y] P [z, w]`
/// factors through `P`, so has ordinary rank at most `r`.
pub fn xi_lower_bound(ctx: &MunnContext, a: &MunnElement) -> Result<LowerBound> {
    ctx.check(a)?;
    if ctx.rank() == 0 {
        return Err(MunnError::RankRequirement { rank: 0, requirement: "the bound needs r >= 1".into() });
    }
    let rank = a.matrix().row_rank();
    Ok(LowerBound { bound: rank.div_ceil(ctx.rank()), ordinary_rank: rank, sandwich_rank: ctx.rank() })
}

pub(crate) fn term(sign: Sign, x: MunnElement, y: MunnElement, z: MunnElement, w: MunnElement) -> CommTerm {
    CommTerm { sign, factors: [x, y, z, w] }
}

fn conj_t(ctx: &MunnContext, a: &MunnElement) -> MunnElement {
    ctx.element(a.matrix().conj_transpose()).expect("transposed shape")
}

/// Runs `engine` on a canonical context with `m <= n`. When `m > n` the
/// conjugate transpose maps `M(D, m, n, E_r)` anti-isomorphically onto
/// `M(D, n, m, E_r)`; a dual term `[x, y] • [z, w]` pulls back to
/// `[w*, z*] • [y*, x*]`.
pub(crate) fn oriented(
    ctx: &MunnContext,
    a: &MunnElement,
    engine: impl FnOnce(&MunnContext, &MunnElement) -> Result<Witness>,
) -> Result<Witness> {
    if ctx.m() <= ctx.n() {
        return engine(ctx, a);
    }
    let dual = MunnContext::canonical(ctx.domain(), ctx.n(), ctx.m(), ctx.rank())?;
    let w = engine(&dual, &conj_t(&dual, a))?;
    let Witness::CommProductSum(terms) = w else {
        return Err(MunnError::MalformedWitness("expected a commutator witness".into()));
    };
    Ok(Witness::CommProductSum(
        terms
            .into_iter()
            .map(|t| {
                let [x, y, z, w] = t.factors;
                term(t.sign, conj_t(ctx, &w), conj_t(ctx, &z), conj_t(ctx, &y), conj_t(ctx, &x))
            })
            .collect(),
    ))
}

fn cells(a: &MunnElement) -> Vec<(usize, usize, Scalar)> {
    let m = a.matrix();
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m.get(i, j).is_zero() {
                out.push((i + 1, j + 1, m.get(i, j).clone()));
            }
        }
    }
    out
}

/// One product per cell, `(a, i, j) = [(a, i, k), (1, k, k)] • [(1, k, k), (1, k, j)]`
/// with `k` in `{1, 2}` avoiding `i` and `j`; the cells `(1, 2)` and `(2, 1)`
/// share the product `[(1,1,2), (1,2,1)] • [(1,1,1), (b,1,2) + (c,2,1)]`.
pub fn decompose_comm_squares(ctx: &MunnContext, a: &MunnElement) -> Result<XiReport> {
    if ctx.rank() < 2 {
        return Err(MunnError::RankRequirement {
            rank: ctx.rank(),
            requirement: "this route needs r >= 2".into(),
        });
    }
    let w = ctx.via_canonical(a, |c, a| {
        let one = c.domain().one();
        let u = |g: &Scalar, i, s| c.unit(g.clone(), i, s);
        let mut terms = Vec::new();
        let mut residual = c.zero();
        for (i, j, g) in cells(a) {
            let k = if i != 1 && j != 1 {
                1
            } else if i != 2 && j != 2 {
                2
            } else {
                residual = &residual + &u(&g, i, j)?;
                continue;
            };
            terms.push(term(Sign::Plus, u(&g, i, k)?, u(&one, k, k)?, u(&one, k, k)?, u(&one, k, j)?));
        }
        if !residual.is_zero() {
            terms.push(term(Sign::Plus, u(&one, 1, 2)?, u(&one, 2, 1)?, u(&one, 1, 1)?, residual));
        }
        Ok(Witness::CommProductSum(terms))
    })?;
    Ok(report(ctx, a, w))
}

/// The rank-one case over the quaternions, built on `[i, j] = 2k`.
pub fn decompose_r1(ctx: &MunnContext, a: &MunnElement) -> Result<XiReport> {
    if ctx.rank() != 1 {
        return Err(MunnError::RankRequirement { rank: ctx.rank(), requirement: "this route needs r = 1".into() });
    }
    if ctx.domain().is_commutative() {
        return Err(MunnError::CommutativeDomain(
            "with r = 1 over a field, the (1,1) entry in canonical coordinates annihilates every \
             product of commutators; see refute-r1"
                .into(),
        ));
    }
    let w = ctx.via_canonical(a, |c, a| {
        let d = c.domain();
        let one = d.one();
        let (qa, qb) = (Scalar::H(Quaternion::unit_i()), Scalar::H(Quaternion::unit_j()));
        let kappa_inv = (&(&qa * &qb) - &(&qb * &qa)).inverse()?;
        let u = |g: &Scalar, i, s| c.unit(g.clone(), i, s);
        let mut terms = Vec::new();
        for (i, j, x) in cells(a) {
            match (i == 1, j == 1) {
                (true, true) => {
                    for [p, q, r, s] in baxter_decompose_scalar(&x)?.terms {
                        terms.push(term(Sign::Plus, u(&p, 1, 1)?, u(&q, 1, 1)?, u(&r, 1, 1)?, u(&s, 1, 1)?));
                    }
                }
                (true, false) => terms.push(term(
                    Sign::Plus,
                    u(&qa, 1, 1)?,
                    u(&qb, 1, 1)?,
                    u(&one, 1, 1)?,
                    u(&(&kappa_inv * &x), 1, j)?,
                )),
                (false, true) => terms.push(term(
                    Sign::Plus,
                    u(&(&x * &kappa_inv), i, 1)?,
                    u(&one, 1, 1)?,
                    u(&qa, 1, 1)?,
                    u(&qb, 1, 1)?,
                )),
                (false, false) => {
                    terms.push(term(Sign::Plus, u(&x, i, 1)?, u(&one, 1, 1)?, u(&one, 1, 1)?, u(&one, 1, j)?))
                }
            }
        }
        Ok(Witness::CommProductSum(terms))
    })?;
    Ok(report(ctx, a, w))
}

/// Evidence that a rank-one Munn algebra over a field is not spanned by
/// products of commutators: a linear functional `tau` that is multiplicative
/// (`tau(u • v) = tau(u) tau(v)`), hence kills every `[x, y]` and every
/// `[x, y] • [z, w]`, yet is nonzero on `witness`.
#[derive(Clone, Debug, PartialEq)]
pub struct RefutationCertificate {
    /// `tau(A) = sum_{a,b} functional[a][b] * A[a][b]`.
    pub functional: Matrix,
    pub unit_pairs_checked: usize,
    pub annihilates_commutators: bool,
    pub multiplicative: bool,
    pub witness: MunnElement,
    pub witness_image: Scalar,
}

fn apply_functional(tau: &Matrix, a: &MunnElement) -> Scalar {
    tau.entries()
        .iter()
        .zip(a.matrix().entries())
        .fold(tau.domain().zero(), |acc, (c, x)| &acc + &(c * x))
}

fn structure_checks(ctx: &MunnContext, tau: &Matrix) -> (usize, bool, bool) {
    let units: Vec<MunnElement> = (1..=ctx.m())
        .flat_map(|i| (1..=ctx.n()).map(move |s| (i, s)))
        .map(|(i, s)| ctx.unit_int(1, i, s))
        .collect();
    let images: Vec<Scalar> = units.iter().map(|u| apply_functional(tau, u)).collect();
    let (mut count, mut kills, mut mult) = (0, true, true);
    for (u, tu) in units.iter().zip(&images) {
        for (v, tv) in units.iter().zip(&images) {
            count += 1;
            kills &= apply_functional(tau, &ctx.commutator(u, v)).is_zero();
            mult &= apply_functional(tau, &ctx.mul(u, v)) == tu * tv;
        }
    }
    (count, kills, mult)
}

/// `tau(T) = (W^-1 T V^-1)_{11}`, checked exhaustively on all pairs of unit
/// elements.
pub fn refute_r1_field(ctx: &MunnContext) -> Result<RefutationCertificate> {
    if ctx.rank() != 1 {
        return Err(MunnError::RankRequirement { rank: ctx.rank(), requirement: "refutation needs r = 1".into() });
    }
    if !ctx.domain().is_commutative() {
        return Err(MunnError::NoncommutativeDomain("refutation applies over fields only".into()));
    }
    let c = ctx.canonical_data();
    let functional = Matrix::from_fn(ctx.domain(), ctx.m(), ctx.n(), |a, b| c.w_inv.get(0, a) * c.v_inv.get(b, 0));
    let (unit_pairs_checked, annihilates_commutators, multiplicative) = structure_checks(ctx, &functional);
    let witness = ctx.from_canonical(&ctx.canonical_context().unit_int(1, 1, 1));
    let witness_image = apply_functional(&functional, &witness);
    Ok(RefutationCertificate {
        functional,
        unit_pairs_checked,
        annihilates_commutators,
        multiplicative,
        witness,
        witness_image,
    })
}

/// Rechecks a certificate from scratch; true when every claim holds.
pub fn verify_refutation(ctx: &MunnContext, cert: &RefutationCertificate) -> Result<bool> {
    if !ctx.domain().is_commutative() {
        return Err(MunnError::NoncommutativeDomain("refutation applies over fields only".into()));
    }
    if cert.functional.domain() != ctx.domain() || cert.functional.shape() != (ctx.m(), ctx.n()) {
        return Err(MunnError::ContextMismatch("functional shape".into()));
    }
    ctx.check(&cert.witness)?;
    let (count, kills, mult) = structure_checks(ctx, &cert.functional);
    let image = apply_functional(&cert.functional, &cert.witness);
    Ok(count == cert.unit_pairs_checked
        && kills
        && mult
        && cert.annihilates_commutators
        && cert.multiplicative
        && !image.is_zero()
        && image == cert.witness_image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::munn::evaluate_witness;
    use crate::scalars::ScalarDomain;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> ScalarDomain {
        ScalarDomain::prime_field(p).unwrap()
    }

    #[test]
    fn squares_examples() {
        let f = gf(5);
        let ctx = MunnContext::canonical(f, 2, 2, 2).unwrap();
        let a = ctx.unit_int(3, 2, 2);
        let rep = decompose_comm_squares(&ctx, &a).unwrap();
        assert_eq!(rep.upper, 1);
        let Witness::CommProductSum(t) = &rep.witness else { panic!() };
        assert_eq!(t[0].factors, [ctx.unit_int(3, 2, 1), ctx.unit_int(1, 1, 1), ctx.unit_int(1, 1, 1), ctx.unit_int(1, 1, 2)]);
        assert_eq!(evaluate_witness(&ctx, &rep.witness).unwrap(), a);

        let b = &ctx.unit_int(1, 1, 2) + &ctx.unit_int(1, 2, 1);
        let rep = decompose_comm_squares(&ctx, &b).unwrap();
        assert_eq!(rep.upper, 1);
        assert_eq!(evaluate_witness(&ctx, &rep.witness).unwrap(), b);
        assert!(decompose_comm_squares(&ctx, &ctx.zero()).unwrap().witness.is_empty());

        let r1 = MunnContext::canonical(f, 2, 2, 1).unwrap();
        assert_eq!(decompose_comm_squares(&r1, &r1.zero()).unwrap_err().code(), "RANK_UNSUPPORTED");
    }

    #[test]
    fn r1_examples() {
        let h = ScalarDomain::RationalQuaternions;
        let ctx = MunnContext::canonical(h, 2, 2, 1).unwrap();
        let x = h.parse("2-i+3k").unwrap();
        let a = ctx.unit(x.clone(), 2, 2).unwrap();
        let rep = decompose_r1(&ctx, &a).unwrap();
        let Witness::CommProductSum(t) = &rep.witness else { panic!() };
        assert_eq!(t[0].factors, [ctx.unit(x, 2, 1).unwrap(), ctx.unit_int(1, 1, 1), ctx.unit_int(1, 1, 1), ctx.unit_int(1, 1, 2)]);
        for a in [ctx.unit_int(1, 1, 1), ctx.unit(h.parse("i").unwrap(), 1, 2).unwrap()] {
            assert_eq!(evaluate_witness(&ctx, &decompose_r1(&ctx, &a).unwrap().witness).unwrap(), a);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ctx = MunnContext::canonical(h, 3, 2, 1).unwrap();
        for _ in 0..10 {
            let a = ctx.random_element(&mut rng, 5);
            assert_eq!(evaluate_witness(&ctx, &decompose_r1(&ctx, &a).unwrap().witness).unwrap(), a);
        }
        let q = MunnContext::canonical(ScalarDomain::Rationals, 2, 2, 1).unwrap();
        assert_eq!(decompose_r1(&q, &q.zero()).unwrap_err().code(), "COMMUTATIVE_DOMAIN");
    }

    #[test]
    fn refutation() {
        let f = gf(5);
        let ctx = MunnContext::canonical(f, 2, 2, 1).unwrap();
        let cert = refute_r1_field(&ctx).unwrap();
        assert_eq!(cert.unit_pairs_checked, 16);
        assert!(verify_refutation(&ctx, &cert).unwrap());

        let q = ScalarDomain::Rationals;
        let p = Matrix::parse(q, &[&["2", "4"], &["1", "2"], &["-1", "-2"]]).unwrap();
        let ctx = MunnContext::new(q, 2, 3, p).unwrap();
        let cert = refute_r1_field(&ctx).unwrap();
        assert!(verify_refutation(&ctx, &cert).unwrap());

        let mut forged = cert.clone();
        forged.functional.set(1, 2, q.one());
        assert!(!verify_refutation(&ctx, &forged).unwrap());

        let r2 = MunnContext::canonical(f, 2, 2, 2).unwrap();
        assert_eq!(refute_r1_field(&r2).unwrap_err().code(), "RANK_UNSUPPORTED");
    }

    #[test]
    fn lower_bound() {
        let f = gf(5);
        let ctx = MunnContext::canonical(f, 5, 5, 2).unwrap();
        let full = ctx.element(Matrix::identity(f, 5)).unwrap();
        assert_eq!(xi_lower_bound(&ctx, &full).unwrap().bound, 3);
        assert_eq!(xi_lower_bound(&ctx, &ctx.zero()).unwrap().bound, 0);
    }
}
