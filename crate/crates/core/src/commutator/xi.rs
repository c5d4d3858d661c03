//! At most two products when `r = min(m, n)`, and a banded construction
//! with at most `ceil(min(m, n) / r) + 3` products below full rank.

use super::{oriented, report, term, XiReport};
use crate::error::{MunnError, Result};
use crate::matrix::Matrix;
use crate::munn::{MunnContext, MunnElement, Sign, Witness};
use crate::scalars::Scalar;

fn el(ctx: &MunnContext, f: impl FnMut(usize, usize) -> Scalar) -> MunnElement {
    ctx.element(Matrix::from_fn(ctx.domain(), ctx.m(), ctx.n(), f)).expect("shape")
}

fn ind(ctx: &MunnContext, hit: impl Fn(usize, usize) -> bool) -> MunnElement {
    let (zero, one) = (ctx.domain().zero(), ctx.domain().one());
    el(ctx, |i, j| if hit(i, j) { one.clone() } else { zero.clone() })
}

/// Full rank, `m = 2 <= n`, `P = E_2`.
fn two_rows(ctx: &MunnContext, a: &MunnElement) -> Vec<crate::munn::CommTerm> {
    let a = a.matrix();
    let zero = ctx.domain().zero();
    let mut terms = Vec::new();
    // [(1,1,2), (1,2,1)] • [(1,1,1), Z1] covers the off-diagonal pattern.
    let z1 = el(ctx, |i, j| match (i, j) {
        (0, j) if j > 0 => a.get(0, j).clone(),
        (1, 0) => a.get(1, 0).clone(),
        _ => zero.clone(),
    });
    if !z1.is_zero() {
        terms.push(term(Sign::Plus, ctx.unit_int(1, 1, 2), ctx.unit_int(1, 2, 1), ctx.unit_int(1, 1, 1), z1));
    }
    // [(1,1,1), (1,1,2) - (1,2,1)] swaps the rows of [(1,1,1), Z2].
    let z2 = el(ctx, |i, j| match (i, j) {
        (0, j) if j > 0 => a.get(1, j).clone(),
        (1, 0) => -a.get(0, 0),
        _ => zero.clone(),
    });
    if !z2.is_zero() {
        let zs = &ctx.unit_int(1, 1, 2) - &ctx.unit_int(1, 2, 1);
        terms.push(term(Sign::Plus, ctx.unit_int(1, 1, 1), zs, ctx.unit_int(1, 1, 1), z2));
    }
    terms
}

/// `J A diag(J, I)`, with `J` the order-reversing permutation on `m` points;
/// an involutive automorphism of `M(D, m, n, E_m)`.
fn reverse(ctx: &MunnContext, a: &MunnElement) -> MunnElement {
    let m = ctx.m();
    let col = |j: usize| if j < m { m - 1 - j } else { j };
    el(ctx, |i, j| a.matrix().get(m - 1 - i, col(j)).clone())
}

/// Full rank, `3 <= m <= n`. With shifts `x`, `y` (`y • x = sum_{j<m} (1,j,j)`)
/// and `c = sum_k x^k • a • y^k`, `[y, x • c]` agrees with `a` off the last row,
/// and `d = [d1, d2]` is `diag(1, -1, ...)` on the first `m - p` rows.
fn shift_term(ctx: &MunnContext, t: &MunnElement, p: usize) -> Option<crate::munn::CommTerm> {
    if t.is_zero() {
        return None;
    }
    let m = ctx.m();
    let covered = m - p;
    let x = ind(ctx, |i, j| i == j + 1 && i < m);
    let y = ind(ctx, |i, j| j == i + 1 && j < m);
    let d1 = ind(ctx, |i, j| i < covered && i % 2 == 0 && j == i + 1);
    let d2 = ind(ctx, |i, j| i < covered && i % 2 == 1 && j + 1 == i);
    let zero = ctx.domain().zero();
    let a = el(ctx, |i, j| {
        let v = t.matrix().get(i, j);
        match i {
            i if i >= covered => zero.clone(),
            i if i % 2 == 0 => v.clone(),
            _ => -v,
        }
    });
    let mut c = a.clone();
    let mut shifted = a;
    for _ in 1..m {
        shifted = ctx.mul(&ctx.mul(&x, &shifted), &y);
        c = &c + &shifted;
    }
    Some(term(Sign::Plus, d1, d2, y, ctx.mul(&x, &c)))
}

/// `r = m <= n`, canonical.
pub(super) fn xi2_core(ctx: &MunnContext, a: &MunnElement) -> Result<Witness> {
    let m = ctx.m();
    debug_assert!(m <= ctx.n() && ctx.rank() == m && ctx.is_canonical());
    if m == 2 {
        return Ok(Witness::CommProductSum(two_rows(ctx, a)));
    }
    let p = 2 - m % 2;
    let zero = ctx.domain().zero();
    let top = el(ctx, |i, j| if i < m - p { a.matrix().get(i, j).clone() } else { zero.clone() });
    let bottom = &a.clone() - &top;
    let mut terms = Vec::new();
    terms.extend(shift_term(ctx, &top, p));
    if let Some(t) = shift_term(ctx, &reverse(ctx, &bottom), p) {
        terms.push(crate::munn::CommTerm { sign: t.sign, factors: t.factors.each_ref().map(|f| reverse(ctx, f)) });
    }
    Ok(Witness::CommProductSum(terms))
}

/// At most two products; requires `r = min(m, n)`.
pub fn decompose_xi2(ctx: &MunnContext, a: &MunnElement) -> Result<XiReport> {
    if ctx.rank() != ctx.m().min(ctx.n()) {
        return Err(MunnError::RankRequirement {
            rank: ctx.rank(),
            requirement: format!("this route needs r = min(m, n) = {}", ctx.m().min(ctx.n())),
        });
    }
    let w = ctx.via_canonical(a, |c, a| oriented(c, a, xi2_core))?;
    Ok(report(ctx, a, w))
}

fn embed_terms(w: Witness, target: &MunnContext) -> Result<Vec<crate::munn::CommTerm>> {
    let Witness::CommProductSum(terms) = w else {
        return Err(MunnError::MalformedWitness("expected a commutator witness".into()));
    };
    let (m, n) = (target.m(), target.n());
    terms
        .into_iter()
        .map(|t| {
            let [x, y, z, u] = t.factors.map(|f| target.element(f.matrix().embed(m, n, 0, 0)));
            Ok(term(t.sign, x?, y?, z?, u?))
        })
        .collect()
}

/// `2 <= r < m <= n`, canonical.
fn blocks_core(ctx: &MunnContext, a: &MunnElement) -> Result<Witness> {
    let (m, n, r) = (ctx.m(), ctx.n(), ctx.rank());
    let d = ctx.domain();
    let am = a.matrix();
    let mut terms = Vec::new();

    // Top band: rows < r inside M(D, r, n, E_r).
    let top_ctx = MunnContext::canonical(d, r, n, r)?;
    let top = top_ctx.element(am.block(0, 0, r, n))?;
    terms.extend(embed_terms(xi2_core(&top_ctx, &top)?, ctx)?);

    // Left band: rows >= r, columns < r inside M(D, m, r, E_r).
    let left_ctx = MunnContext::canonical(d, m, r, r)?;
    let left = left_ctx.element(am.block(r, 0, m - r, r).embed(m, r, r, 0))?;
    terms.extend(embed_terms(oriented(&left_ctx, &left, xi2_core)?, ctx)?);

    // Remaining bands of r rows, columns >= r: one product each,
    // [S, I'] • [I', Y] = S • Y with S shifting rows down by lo.
    let zero = d.zero();
    let one = d.one();
    let ident = ind(ctx, |i, j| i == j && i < r);
    let mut lo = r;
    while lo < m {
        let hi = (lo + r).min(m);
        let y = el(ctx, |i, j| {
            if lo + i < hi && j >= r {
                am.get(lo + i, j).clone()
            } else {
                zero.clone()
            }
        });
        if !y.is_zero() {
            let s = el(ctx, |i, j| if i >= lo && i < hi && j == i - lo { one.clone() } else { zero.clone() });
            terms.push(term(Sign::Plus, s, ident.clone(), ident.clone(), y));
        }
        lo = hi;
    }
    Ok(Witness::CommProductSum(terms))
}

/// At most `ceil(min(m, n) / r) + 3` products; requires `r >= 2`.
pub fn decompose_xi_blocks(ctx: &MunnContext, a: &MunnElement) -> Result<XiReport> {
    let (min, r) = (ctx.m().min(ctx.n()), ctx.rank());
    if r < 2 {
        return Err(MunnError::RankRequirement { rank: r, requirement: "the banded route needs r >= 2".into() });
    }
    if r == min {
        return decompose_xi2(ctx, a);
    }
    let w = ctx.via_canonical(a, |c, a| oriented(c, a, blocks_core))?;
    Ok(report(ctx, a, w))
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

    fn check(ctx: &MunnContext, a: &MunnElement, rep: &XiReport) {
        assert_eq!(&evaluate_witness(ctx, &rep.witness).unwrap(), a);
        assert!(rep.lower <= rep.upper);
    }

    #[test]
    fn xi2_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (m, n) in [(2, 2), (2, 4), (4, 2), (3, 3), (3, 5), (4, 4), (5, 5), (6, 4), (5, 6)] {
            for d in [gf(5), gf(7), ScalarDomain::Rationals, ScalarDomain::RationalQuaternions] {
                let ctx = MunnContext::canonical(d, m, n, m.min(n)).unwrap();
                for _ in 0..5 {
                    let a = ctx.random_element(&mut rng, 4);
                    let rep = decompose_xi2(&ctx, &a).unwrap();
                    assert!(rep.upper <= 2, "{m}x{n} over {d}");
                    check(&ctx, &a, &rep);
                }
            }
        }
    }

    #[test]
    fn xi2_examples() {
        let f7 = gf(7);
        let ctx = MunnContext::canonical(f7, 3, 3, 3).unwrap();
        let ones = ctx.element(Matrix::from_fn(f7, 3, 3, |_, _| f7.one())).unwrap();
        let rep = decompose_xi2(&ctx, &ones).unwrap();
        assert!(rep.upper <= 2);
        check(&ctx, &ones, &rep);
        let rep = decompose_xi2(&ctx, &ctx.zero()).unwrap();
        assert_eq!((rep.upper, rep.lower), (0, 0));
        let low = MunnContext::canonical(f7, 3, 3, 2).unwrap();
        assert_eq!(decompose_xi2(&low, &low.zero()).unwrap_err().code(), "RANK_UNSUPPORTED");
    }

    #[test]
    fn blocks_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (m, n, r) in [(5, 5, 2), (4, 6, 2), (6, 4, 2), (6, 6, 3), (6, 5, 4), (3, 3, 2), (5, 6, 2)] {
            for d in [gf(5), ScalarDomain::Rationals, ScalarDomain::RationalQuaternions] {
                let ctx = MunnContext::canonical(d, m, n, r).unwrap();
                let bound = m.min(n).div_ceil(r) + 3;
                for _ in 0..4 {
                    let a = ctx.random_element(&mut rng, 3);
                    let rep = decompose_xi_blocks(&ctx, &a).unwrap();
                    assert!(rep.upper <= bound);
                    check(&ctx, &a, &rep);
                }
            }
        }
    }

    #[test]
    fn blocks_top_band_only() {
        let f7 = gf(7);
        let ctx = MunnContext::canonical(f7, 4, 6, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let full = ctx.random_element(&mut rng, 1);
        let top = ctx.element(full.matrix().block(0, 0, 2, 6).embed(4, 6, 0, 0)).unwrap();
        let rep = decompose_xi_blocks(&ctx, &top).unwrap();
        assert!(rep.upper <= 2);
        check(&ctx, &top, &rep);
    }

    #[test]
    fn general_sandwich() {
        let q = ScalarDomain::Rationals;
        let p = Matrix::parse(q, &[&["1", "2", "3"], &["0", "1", "1"], &["1", "3", "4"], &["2", "0", "1"]]).unwrap();
        let ctx = MunnContext::new(q, 3, 4, p).unwrap();
        assert_eq!(ctx.rank(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let a = ctx.random_element(&mut rng, 3);
            check(&ctx, &a, &decompose_xi2(&ctx, &a).unwrap());
        }
    }
}
