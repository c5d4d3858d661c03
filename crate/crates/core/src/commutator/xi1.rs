//! A single product `[x, y] • [z, w]` in full rank, lifted from a square
//! factorization `M = [B, C] [D, E]` with `[B, C]` and `D` invertible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linear::{lift_center, random_nonzero_center, re_trace, solve_sylvester_scalar};
use super::{oriented, report, term, XiReport};
use crate::error::{MunnError, Result};
use crate::matrix::Matrix;
use crate::munn::{MunnContext, MunnElement, Sign, Witness};
use crate::scalars::{random_scalar, Quaternion, Scalar, ScalarDomain};

pub const DEFAULT_BUDGET: u64 = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct InnerFactorization {
    pub b: Matrix,
    pub c: Matrix,
    pub d: Matrix,
    pub e: Matrix,
}

fn comm(x: &Matrix, y: &Matrix) -> Matrix {
    &(x * y) - &(y * x)
}

fn column(m: &Matrix, j: usize) -> Vec<Scalar> {
    (0..m.rows()).map(|i| m.get(i, j).clone()).collect()
}

fn from_columns(domain: ScalarDomain, rows: usize, cols: &[Vec<Scalar>]) -> Matrix {
    Matrix::from_fn(domain, rows, cols.len(), |i, j| cols[j][i].clone())
}

fn candidate_vectors<R: Rng + ?Sized>(domain: ScalarDomain, k: usize, rng: &mut R) -> Vec<Vec<Scalar>> {
    let unit = |t: usize, c: Scalar| {
        let mut v = vec![domain.zero(); k];
        v[t] = c;
        v
    };
    let mut out: Vec<Vec<Scalar>> = (0..k).map(|t| unit(t, domain.one())).collect();
    let mut twists = vec![domain.one()];
    if domain == ScalarDomain::RationalQuaternions {
        twists.push(Scalar::H(Quaternion::unit_i()));
        twists.push(Scalar::H(Quaternion::unit_j()));
    }
    for t in 1..k {
        for c in &twists {
            let mut v = unit(t, c.clone());
            v[0] = domain.one();
            out.push(v);
        }
    }
    for _ in 0..4 {
        out.push((0..k).map(|_| random_scalar(domain, rng, 3)).collect());
    }
    out
}

/// Invertible `S` with `S^-1 N S` zero on the diagonal except possibly the
/// last entry (which then has zero real part when `N` has zero real trace).
fn zero_diagonalize<R: Rng + ?Sized>(n: &Matrix, rng: &mut R) -> Option<(Matrix, Matrix)> {
    let domain = n.domain();
    let k = n.rows();
    let mut s = Matrix::identity(domain, k);
    let mut cur = n.clone();
    for t in 0..k.saturating_sub(1) {
        if cur.get(t, t).is_zero() {
            continue;
        }
        let size = k - t;
        let blk = cur.block(t, t, size, size);
        let pair = candidate_vectors(domain, size, rng).into_iter().find_map(|v| {
            let vm = from_columns(domain, size, std::slice::from_ref(&v));
            let nv = column(&(&blk * &vm), 0);
            (from_columns(domain, size, &[v.clone(), nv.clone()]).row_rank() == 2).then_some((v, nv))
        })?;
        let mut cols = vec![pair.0, pair.1];
        for e in 0..size {
            if cols.len() == size {
                break;
            }
            let mut v = vec![domain.zero(); size];
            v[e] = domain.one();
            let mut trial = cols.clone();
            trial.push(v);
            if from_columns(domain, size, &trial).row_rank() == trial.len() {
                cols = trial;
            }
        }
        let local = from_columns(domain, size, &cols);
        let mut full = Matrix::identity(domain, k);
        for i in 0..size {
            for j in 0..size {
                full.set(t + i, t + j, local.get(i, j).clone());
            }
        }
        let inv = full.invert().ok()?;
        cur = &(&inv * &cur) * &full;
        s = &s * &full;
    }
    (0..k.saturating_sub(1)).all(|t| cur.get(t, t).is_zero()).then_some((s, cur))
}

/// `(D, E)` with `D E - E D = N` and `D` invertible, when `N` has zero real trace.
fn solve_commutator<R: Rng + ?Sized>(n: &Matrix, rng: &mut R) -> Option<(Matrix, Matrix)> {
    let domain = n.domain();
    let k = n.rows();
    if n.is_zero() {
        return Some((Matrix::identity(domain, k), Matrix::zeros(domain, k, k)));
    }
    let (s, np) = zero_diagonalize(n, rng)?;
    let p = domain.characteristic();
    if p != 0 && k as u64 >= p {
        return None;
    }
    let mut d: Vec<Scalar> = (1..=k as i64).map(|v| domain.from_i64(v)).collect();
    let last = np.get(k - 1, k - 1).clone();
    if !last.is_zero() {
        if last.is_central() {
            return None;
        }
        // A nonzero pure quaternion w orthogonal to u, so that u lies in [w, H].
        let half = domain.from_i64(2).inverse().ok()?;
        let w = [Quaternion::unit_i(), Quaternion::unit_j(), Quaternion::unit_k()]
            .into_iter()
            .map(|e| {
                let e = Scalar::H(e);
                &(&(&last * &e) - &(&e * &last)) * &half
            })
            .find(|w| !w.is_zero())?;
        d[k - 1] = &d[k - 1] + &w;
    }
    let mut e0 = Matrix::zeros(domain, k, k);
    for i in 0..k {
        for j in 0..k {
            let y = np.get(i, j);
            if y.is_zero() {
                continue;
            }
            e0.set(i, j, solve_sylvester_scalar(&d[i], &d[j], y)?);
        }
    }
    let d0 = Matrix::from_fn(domain, k, k, |i, j| if i == j { d[i].clone() } else { domain.zero() });
    let s_inv = s.invert().ok()?;
    let dm = &(&s * &d0) * &s_inv;
    let em = &(&s * &e0) * &s_inv;
    (comm(&dm, &em) == *n && dm.invert().is_ok()).then_some((dm, em))
}

/// Invertible candidate `K` with zero real trace and `ReTr(K^-1 M) = 0`.
fn candidate_k<R: Rng + ?Sized>(m: &Matrix, rng: &mut R, height: i64) -> Option<Matrix> {
    let domain = m.domain();
    let k = m.rows();
    let center = domain.center();
    if domain.is_commutative() && k == 2 {
        // For trace-zero 2x2 K, K^-1 = -K / det K, so tr(K^-1 M) = 0 iff tr(K M) = 0.
        let images: Vec<Vec<Scalar>> = (0..4)
            .map(|t| {
                let mut e = Matrix::zeros(domain, 2, 2);
                e.set(t / 2, t % 2, domain.one());
                vec![e.trace(), (&e * m).trace()]
            })
            .collect();
        let a = Matrix::from_fn(center, 2, 4, |i, j| images[j][i].clone());
        let basis = a.right_nullspace();
        let mut coords = vec![center.zero(); 4];
        for v in &basis {
            let c = random_scalar(center, rng, height);
            for (slot, x) in coords.iter_mut().zip(v) {
                *slot = &*slot + &(&c * x);
            }
        }
        let kmat = Matrix::from_fn(domain, 2, 2, |i, j| lift_center(domain, &coords[2 * i + j]));
        return kmat.invert().is_ok().then_some(kmat);
    }
    // K = diag(mu)^-1 Q with ReTr-free diagonal Q; the two trace conditions
    // become sum_i mu_i Re((M Q^-1)_ii) = 0.
    let q = Matrix::from_fn(domain, k, k, |i, j| {
        if i != j {
            random_scalar(domain, rng, height)
        } else if domain.is_commutative() {
            domain.zero()
        } else {
            let x = random_scalar(domain, rng, height);
            &x - &x.real_part()
        }
    });
    let q_inv = q.invert().ok()?;
    let x = m * &q_inv;
    let b: Vec<Scalar> = (0..k).map(|i| x.get(i, i).center_coords().swap_remove(0)).collect();
    let mut mu: Vec<Scalar> = (0..k).map(|_| random_nonzero_center(domain, rng, height)).collect();
    if let Some(pivot) = (0..k).rev().find(|&i| !b[i].is_zero()) {
        let rest = (0..k).filter(|&i| i != pivot).fold(center.zero(), |acc, i| &acc + &(&b[i] * &mu[i]));
        mu[pivot] = -&(&rest * &b[pivot].inverse().ok()?);
        if mu[pivot].is_zero() {
            return None;
        }
    }
    let kmat = Matrix::from_fn(domain, k, k, |i, j| &lift_center(domain, &mu[i].inverse().expect("nonzero")) * q.get(i, j));
    Some(kmat)
}

/// Randomized search, deterministic in `(seed, budget)`, for
/// `M = [B, C] [D, E]` with `[B, C]` and `D` invertible.
pub fn search_inner_factorization(m: &Matrix, budget: u64, seed: u64) -> Result<InnerFactorization> {
    if !m.is_square() {
        return Err(MunnError::ShapeMismatch { expected: (m.rows(), m.rows()), found: m.shape() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..budget {
        let height = 2 + (attempt / 32).min(8) as i64;
        let Some(k) = candidate_k(m, &mut rng, height) else { continue };
        let Ok(k_inv) = k.invert() else { continue };
        let n = &k_inv * m;
        if !re_trace(&k).is_zero() || !re_trace(&n).is_zero() {
            continue;
        }
        let Some((b, c)) = solve_commutator(&k, &mut rng) else { continue };
        let Some((d, e)) = solve_commutator(&n, &mut rng) else { continue };
        if comm(&b, &c) == k && &k * &comm(&d, &e) == *m && d.invert().is_ok() {
            return Ok(InnerFactorization { b, c, d, e });
        }
    }
    Err(MunnError::BudgetExhausted { attempts: budget })
}

/// `r = m <= n`, canonical: `[(B 0), (C 0)] • [(D 0), (E | D^-1 K^-1 A12)]`.
fn xi1_core(ctx: &MunnContext, a: &MunnElement, budget: u64, seed: u64) -> Result<Witness> {
    if a.is_zero() {
        return Ok(Witness::CommProductSum(vec![]));
    }
    let (m, n) = (ctx.m(), ctx.n());
    let am = a.matrix();
    let f = search_inner_factorization(&am.block(0, 0, m, m), budget, seed)?;
    let k = comm(&f.b, &f.c);
    let corr = &(&f.d.invert()? * &k.invert()?) * &am.block(0, m, m, n - m);
    let pad = |x: &Matrix| ctx.element(x.embed(m, n, 0, 0));
    let last = &f.e.embed(m, n, 0, 0) + &corr.embed(m, n, 0, m);
    Ok(Witness::CommProductSum(vec![term(Sign::Plus, pad(&f.b)?, pad(&f.c)?, pad(&f.d)?, ctx.element(last)?)]))
}

/// A single product when `r = min(m, n)` and either `min(m, n) = 2` or the
/// center is infinite.
pub fn decompose_xi1(ctx: &MunnContext, a: &MunnElement, budget: u64, seed: u64) -> Result<XiReport> {
    let min = ctx.m().min(ctx.n());
    if ctx.rank() != min {
        return Err(MunnError::RankRequirement {
            rank: ctx.rank(),
            requirement: format!("a single product needs r = min(m, n) = {min}"),
        });
    }
    if min != 2 && !ctx.domain().has_infinite_center() {
        return Err(MunnError::HypothesisUnmet(
            "a single product is only constructed when min(m, n) = 2 or the center is infinite".into(),
        ));
    }
    let w = ctx.via_canonical(a, |c, a| oriented(c, a, |c, a| xi1_core(c, a, budget, seed)))?;
    let rep = report(ctx, a, w);
    debug_assert!(rep.upper <= 1);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::munn::evaluate_witness;

    fn gf(p: u64) -> ScalarDomain {
        ScalarDomain::prime_field(p).unwrap()
    }

    fn check_inner(m: &Matrix, f: &InnerFactorization) {
        let k = comm(&f.b, &f.c);
        assert!(k.invert().is_ok());
        assert!(f.d.invert().is_ok());
        assert_eq!(&k * &comm(&f.d, &f.e), *m);
    }

    #[test]
    fn inner_examples() {
        let f5 = gf(5);
        let m = Matrix::parse(f5, &[&["1", "0"], &["0", "-1"]]).unwrap();
        check_inner(&m, &search_inner_factorization(&m, 1000, 0).unwrap());
        let f7 = gf(7);
        let m = Matrix::parse(f7, &[&["0", "1"], &["0", "0"]]).unwrap();
        check_inner(&m, &search_inner_factorization(&m, 1000, 0).unwrap());
        let z = Matrix::zeros(f5, 2, 2);
        check_inner(&z, &search_inner_factorization(&z, 1000, 0).unwrap());
    }

    #[test]
    fn every_2x2_over_gf5() {
        let f5 = gf(5);
        let ctx = MunnContext::canonical(f5, 2, 2, 2).unwrap();
        for code in 0..625u32 {
            let digits: Vec<i64> = (0..4).map(|t| ((code / 5u32.pow(t)) % 5) as i64).collect();
            let a = ctx.element(Matrix::from_fn(f5, 2, 2, |i, j| f5.from_i64(digits[2 * i + j]))).unwrap();
            let rep = decompose_xi1(&ctx, &a, 200, 7).unwrap();
            assert_eq!(rep.upper, usize::from(!a.is_zero()));
            assert_eq!(evaluate_witness(&ctx, &rep.witness).unwrap(), a);
        }
    }

    #[test]
    fn larger_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (d, m, n) in [
            (ScalarDomain::Rationals, 2, 4),
            (ScalarDomain::Rationals, 3, 3),
            (ScalarDomain::Rationals, 4, 3),
            (ScalarDomain::RationalQuaternions, 2, 3),
            (ScalarDomain::RationalQuaternions, 3, 3),
            (gf(7), 2, 5),
            (gf(3), 3, 2),
        ] {
            let ctx = MunnContext::canonical(d, m, n, m.min(n)).unwrap();
            for _ in 0..4 {
                let a = ctx.random_element(&mut rng, 3);
                let rep = decompose_xi1(&ctx, &a, 500, 1).unwrap();
                assert_eq!(rep.upper, 1);
                assert_eq!(evaluate_witness(&ctx, &rep.witness).unwrap(), a);
            }
        }
    }

    #[test]
    fn refusals() {
        let f5 = gf(5);
        let ctx = MunnContext::canonical(f5, 3, 3, 3).unwrap();
        assert_eq!(decompose_xi1(&ctx, &ctx.zero(), 10, 0).unwrap_err().code(), "HYPOTHESIS_UNMET");
        let ctx = MunnContext::canonical(f5, 3, 3, 2).unwrap();
        assert_eq!(decompose_xi1(&ctx, &ctx.zero(), 10, 0).unwrap_err().code(), "RANK_UNSUPPORTED");
        let f2 = gf(2);
        let ctx = MunnContext::canonical(f2, 2, 2, 2).unwrap();
        let a = ctx.unit_int(1, 1, 1);
        assert_eq!(decompose_xi1(&ctx, &a, 20, 0).unwrap_err().code(), "BUDGET_EXHAUSTED");
    }
}
