//! Zero-product determinedness: bilinear functionals on `M(F, m, n, P)`
//! that vanish on zero-product pairs, checked by exact rank computations.

mod rank;

pub use rank::RankAccumulator;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{MunnError, Result};
use crate::matrix::Matrix;
use crate::munn::{MunnContext, MunnElement};
use crate::scalars::{random_scalar, Scalar, ScalarDomain};

/// Default cap on constraint rows for [`check_zpd`].
pub const DEFAULT_MAX_CONSTRAINTS: usize = 20_000;

const ENUMERATION_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductKind {
    Associative,
    Jordan,
}

impl std::str::FromStr for ProductKind {
    type Err = MunnError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "assoc" | "associative" => Ok(ProductKind::Associative),
            "jordan" => Ok(ProductKind::Jordan),
            other => Err(MunnError::Parse { literal: other.into(), reason: "expected assoc or jordan".into() }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Certified,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairStrategy {
    Structured,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZpdCertificate {
    pub kind: ProductKind,
    pub constraints_used: usize,
    pub solution_dim: usize,
    pub target_dim: usize,
    pub verdict: Verdict,
}

/// `phi` on `M(F, m, n, P)`, stored as an `mn x mn` grid whose entry at
/// `(cell(i, j), cell(p, q))` is `phi((1,i,j), (1,p,q)) = lambda^{iq}_{jp}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearFunctional {
    m: usize,
    n: usize,
    coefficients: Matrix,
}

/// `tau` on `M(F, m, n, P)` with `tau((a,i,q)) = a tau_{iq}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFunctional {
    coefficients: Matrix,
}

fn cell(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

fn flatten(a: &MunnElement) -> &[Scalar] {
    a.matrix().entries()
}

fn dot(x: &[Scalar], y: &[Scalar], zero: Scalar) -> Scalar {
    x.iter().zip(y).fold(zero, |acc, (a, b)| &acc + &(a * b))
}

impl BilinearFunctional {
    pub fn new(ctx: &MunnContext, coefficients: Matrix) -> Result<Self> {
        let d = ctx.m() * ctx.n();
        if coefficients.shape() != (d, d) {
            return Err(MunnError::ShapeMismatch { expected: (d, d), found: coefficients.shape() });
        }
        if coefficients.domain() != ctx.domain() {
            return Err(MunnError::DomainMismatch { left: ctx.domain(), right: coefficients.domain() });
        }
        Ok(BilinearFunctional { m: ctx.m(), n: ctx.n(), coefficients })
    }

    /// Builds `phi` from `lambda(i, q, j, p)` with 1-based indices.
    pub fn from_lambda(ctx: &MunnContext, mut lambda: impl FnMut(usize, usize, usize, usize) -> Scalar) -> Self {
        let (m, n) = (ctx.m(), ctx.n());
        let d = m * n;
        let coefficients = Matrix::from_fn(ctx.domain(), d, d, |a, b| {
            let (i, j, p, q) = (a / n, a % n, b / n, b % n);
            lambda(i + 1, q + 1, j + 1, p + 1)
        });
        BilinearFunctional { m, n, coefficients }
    }

    pub fn coefficients(&self) -> &Matrix {
        &self.coefficients
    }

    /// `lambda^{iq}_{jp}`, 1-based.
    pub fn lambda(&self, i: usize, q: usize, j: usize, p: usize) -> &Scalar {
        assert!((1..=self.m).contains(&i) && (1..=self.m).contains(&p), "row index out of range");
        assert!((1..=self.n).contains(&j) && (1..=self.n).contains(&q), "column index out of range");
        self.coefficients.get(cell(self.n, i - 1, j - 1), cell(self.n, p - 1, q - 1))
    }

    pub fn eval(&self, x: &MunnElement, y: &MunnElement) -> Scalar {
        let (x, y) = (flatten(x), flatten(y));
        let zero = self.coefficients.domain().zero();
        x.iter().enumerate().filter(|(_, a)| !a.is_zero()).fold(zero.clone(), |acc, (a, xa)| {
            &acc + &(xa * &dot(self.coefficients.row(a), y, zero.clone()))
        })
    }
}

impl LinearFunctional {
    pub fn new(ctx: &MunnContext, coefficients: Matrix) -> Result<Self> {
        if coefficients.shape() != (ctx.m(), ctx.n()) {
            return Err(MunnError::ShapeMismatch { expected: (ctx.m(), ctx.n()), found: coefficients.shape() });
        }
        if coefficients.domain() != ctx.domain() {
            return Err(MunnError::DomainMismatch { left: ctx.domain(), right: coefficients.domain() });
        }
        Ok(LinearFunctional { coefficients })
    }

    pub fn coefficients(&self) -> &Matrix {
        &self.coefficients
    }

    pub fn eval(&self, x: &MunnElement) -> Scalar {
        dot(self.coefficients.entries(), flatten(x), self.coefficients.domain().zero())
    }

    /// `phi(x, y) = tau(x * y)`.
    pub fn compose(&self, ctx: &MunnContext, kind: ProductKind) -> BilinearFunctional {
        let units = unit_basis(ctx);
        let d = units.len();
        let coefficients =
            Matrix::from_fn(ctx.domain(), d, d, |a, b| self.eval(&product(ctx, kind, &units[a], &units[b])));
        BilinearFunctional { m: ctx.m(), n: ctx.n(), coefficients }
    }
}

pub fn product(ctx: &MunnContext, kind: ProductKind, x: &MunnElement, y: &MunnElement) -> MunnElement {
    match kind {
        ProductKind::Associative => ctx.mul(x, y),
        ProductKind::Jordan => ctx.jordan(x, y),
    }
}

fn unit_basis(ctx: &MunnContext) -> Vec<MunnElement> {
    (1..=ctx.m()).flat_map(|i| (1..=ctx.n()).map(move |j| (i, j))).map(|(i, j)| ctx.unit_int(1, i, j)).collect()
}

fn require_field(domain: ScalarDomain) -> Result<()> {
    if !domain.is_commutative() {
        return Err(MunnError::NoncommutativeDomain(
            "zero-product analysis works with bilinear functionals over a field".into(),
        ));
    }
    Ok(())
}

fn require_char(domain: ScalarDomain) -> Result<()> {
    match domain.characteristic() {
        c @ (2 | 3) => Err(MunnError::UnsupportedCharacteristic {
            characteristic: c,
            reason: "the zero-product arguments divide by 2 and 3".into(),
        }),
        _ => Ok(()),
    }
}

/// Every `n x n` matrix `C` over `GF(p)` with `a^T C b = 0` whenever
/// `a^T b = 0`, by exhaustive search.
pub fn scalar_lemma_oracle(domain: ScalarDomain, n: usize) -> Result<Vec<Matrix>> {
    let ScalarDomain::PrimeField { p } = domain else {
        return Err(MunnError::InvalidDomain("the scalar-lemma oracle enumerates a prime field".into()));
    };
    require_char(domain)?;
    if n == 0 {
        return Err(MunnError::InvalidContext("n must be positive".into()));
    }
    let within = |e: usize| p.checked_pow(e as u32).is_some_and(|v| v <= ENUMERATION_LIMIT);
    if !within(2 * n) || !within(n * n) {
        return Err(MunnError::EnumerationTooLarge(format!(
            "GF({p}) with n = {n} exceeds the {ENUMERATION_LIMIT} enumeration guard"
        )));
    }
    let vectors: Vec<Vec<u64>> = (0..p.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = k % p;
                    k /= p;
                    d
                })
                .collect()
        })
        .collect();
    let dot = |a: &[u64], b: &[u64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<u64>() % p;
    let form = |c: &[u64], a: &[u64], b: &[u64]| {
        let mut s = 0u64;
        for i in 0..n {
            for j in 0..n {
                s = (s + a[i] * c[i * n + j] % p * b[j]) % p;
            }
        }
        s
    };
    let units: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..n).filter(move |&k| k != j).map(move |k| (j, k))).collect();

    let mut passing = Vec::new();
    for c in (0..p.pow((n * n) as u32)).map(|mut k| {
        (0..n * n)
            .map(|_| {
                let d = k % p;
                k /= p;
                d
            })
            .collect::<Vec<u64>>()
    }) {
        if units.iter().any(|&(j, k)| c[j * n + k] != 0) {
            continue;
        }
        let ok = vectors.iter().all(|a| vectors.iter().all(|b| dot(a, b) != 0 || form(&c, a, b) == 0));
        if ok {
            let rows = (0..n).map(|i| (0..n).map(|j| domain.from_i64(c[i * n + j] as i64)).collect()).collect();
            passing.push(Matrix::from_rows(domain, rows)?);
        }
    }
    Ok(passing)
}

/// Dimension of the span of all products of basis units.
pub fn multiplication_image_dim(ctx: &MunnContext, kind: ProductKind) -> Result<usize> {
    require_field(ctx.domain())?;
    let units = unit_basis(ctx);
    let mut acc = RankAccumulator::new(ctx.domain(), units.len());
    for u in &units {
        for v in &units {
            let w = product(ctx, kind, u, v);
            if !w.is_zero() {
                acc.insert(flatten(&w));
            }
        }
    }
    Ok(acc.rank())
}

/// A structured constraint: a zero-product pair, or the difference of the
/// rows of two earlier pairs.
#[derive(Clone, Debug)]
enum Item {
    Pair(MunnElement, MunnElement),
    Difference(usize, usize),
}

fn structured_items(canon: &MunnContext, kind: ProductKind) -> Vec<Item> {
    let (m, n, r) = (canon.m(), canon.n(), canon.rank());
    let jordan = kind == ProductKind::Jordan;
    let u = |g: i64, i: usize, j: usize| canon.unit_int(g, i, j);
    let mut items = Vec::new();
    let push = |items: &mut Vec<Item>, x: MunnElement, y: MunnElement| {
        items.push(Item::Pair(x, y));
        items.len() - 1
    };

    // (a) unit pairs killed by the sandwich.
    for i in 1..=m {
        for j in 1..=n {
            for p in 1..=m {
                for q in 1..=n {
                    let left = j != p || j > r;
                    let right = q != i || q > r;
                    if left && (!jordan || right) {
                        push(&mut items, u(1, i, j), u(1, p, q));
                    }
                }
            }
        }
    }

    // (b) a row of X against a column of Y with orthogonal coefficient
    // vectors `e_1 + e_k`, `e_1 - e_k`.
    for k in 2..=r {
        for i in 1..=m {
            for q in 1..=n {
                if !jordan || q != i || q > r {
                    let x = &u(1, i, 1) + &u(1, i, k);
                    let y = &u(1, 1, q) - &u(1, k, q);
                    push(&mut items, x, y);
                }
            }
        }
        if jordan {
            // A column of X against a row of Y.
            for j in 1..=n {
                for p in 1..=m {
                    if j > r || p > r {
                        let x = &u(1, 1, j) + &u(1, k, j);
                        let y = &u(1, p, 1) - &u(1, p, k);
                        push(&mut items, x, y);
                    }
                }
            }
        }
    }

    // (c) Jordan pairs whose rows relate the blocks outside `M_r`.
    if jordan {
        for i in 1..=r {
            for k in (1..=r).filter(|&k| k != i) {
                for j in r + 1..=n {
                    let e = &(&u(1, k, i) + &u(1, i, k)) + &u(1, k, j);
                    let f = &(&u(-1, k, i) + &u(1, i, k)) + &u(-1, k, j);
                    let a = push(&mut items, e, f);
                    let b = push(&mut items, &u(1, k, i) + &u(1, i, k), &u(-1, k, i) + &u(1, i, k));
                    items.push(Item::Difference(a, b));
                }
                for j in r + 1..=m {
                    let e = &(&u(1, i, k) + &u(1, k, i)) + &u(1, j, k);
                    let f = &(&u(-1, i, k) + &u(1, k, i)) + &u(-1, j, k);
                    let a = push(&mut items, e, f);
                    let b = push(&mut items, &u(1, i, k) + &u(1, k, i), &u(-1, i, k) + &u(1, k, i));
                    items.push(Item::Difference(a, b));
                }
            }
        }
        for i in r + 1..=m {
            for j in r + 1..=n {
                for k in 1..=r {
                    push(&mut items, &u(1, i, k) - &u(1, k, j), &u(1, i, k) + &u(1, k, j));
                }
            }
        }
    }
    items
}

fn check_pair(ctx: &MunnContext, kind: ProductKind, x: &MunnElement, y: &MunnElement) {
    assert!(product(ctx, kind, x, y).is_zero(), "emitted pair does not multiply to zero");
}

/// Zero-product pairs of `ctx`, each checked before it is returned.
/// Structured pairs are built for `E_r` and carried over by `W (.) V`.
pub fn generate_zero_product_pairs(
    ctx: &MunnContext,
    kind: ProductKind,
    strategy: PairStrategy,
    seed: u64,
    count: usize,
) -> Result<Vec<(MunnElement, MunnElement)>> {
    require_field(ctx.domain())?;
    let pairs: Vec<_> = match strategy {
        PairStrategy::Structured => {
            let canon = ctx.canonical_context();
            structured_items(&canon, kind)
                .into_iter()
                .filter_map(|item| match item {
                    Item::Pair(x, y) => Some((ctx.from_canonical(&x), ctx.from_canonical(&y))),
                    Item::Difference(..) => None,
                })
                .take(count)
                .collect()
        }
        PairStrategy::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::new();
            // Random X with a trivial annihilator yields nothing; bound the draws.
            for _ in 0..count.saturating_mul(4).max(16) {
                if out.len() >= count {
                    break;
                }
                out.extend(sampled_pairs(ctx, kind, &mut rng).into_iter().take(count - out.len()));
            }
            out
        }
    };
    for (x, y) in &pairs {
        check_pair(ctx, kind, x, y);
    }
    Ok(pairs)
}

fn sampled_pairs<R: Rng + ?Sized>(ctx: &MunnContext, kind: ProductKind, rng: &mut R) -> Vec<(MunnElement, MunnElement)> {
    let domain = ctx.domain();
    let (m, n) = (ctx.m(), ctx.n());
    let r = ctx.rank().max(1);
    let block = rng.gen_bool(0.5);
    let x = Matrix::from_fn(domain, m, n, |i, j| {
        let inside = !block || (i < r && j < r);
        if inside && rng.gen_bool(0.5) {
            random_scalar(domain, rng, 3)
        } else {
            domain.zero()
        }
    });
    let x = ctx.element(x).expect("shape");
    // Block samples target the `M_r` corner of the canonical coordinates.
    let x = if block { ctx.from_canonical(&x) } else { x };
    let units = unit_basis(ctx);
    let d = units.len();
    let images: Vec<MunnElement> = units.iter().map(|e| product(ctx, kind, &x, e)).collect();
    let map = Matrix::from_fn(domain, d, d, |a, b| flatten(&images[b])[a].clone());
    map.right_nullspace()
        .into_iter()
        .map(|y| {
            let y = Matrix::from_fn(domain, m, n, |i, j| y[i * n + j].clone());
            (x.clone(), ctx.element(y).expect("shape"))
        })
        .collect()
}

/// The linear system `{phi : phi(X, Y) = 0}` over accumulated pairs.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    ctx: MunnContext,
    kind: ProductKind,
    acc: RankAccumulator,
    rows: Vec<Vec<Scalar>>,
    target_dim: usize,
}

fn pair_row(x: &MunnElement, y: &MunnElement) -> Vec<Scalar> {
    let (x, y) = (flatten(x), flatten(y));
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

impl ConstraintSystem {
    pub fn new(ctx: &MunnContext, kind: ProductKind) -> Result<Self> {
        require_field(ctx.domain())?;
        require_char(ctx.domain())?;
        let d = ctx.m() * ctx.n();
        Ok(ConstraintSystem {
            ctx: ctx.clone(),
            kind,
            acc: RankAccumulator::new(ctx.domain(), d * d),
            rows: Vec::new(),
            target_dim: multiplication_image_dim(ctx, kind)?,
        })
    }

    /// Adds the row of a zero-product pair.
    pub fn add_pair(&mut self, x: &MunnElement, y: &MunnElement) -> Result<()> {
        self.ctx.check(x)?;
        self.ctx.check(y)?;
        if !product(&self.ctx, self.kind, x, y).is_zero() {
            return Err(MunnError::HypothesisUnmet("the pair does not multiply to zero".into()));
        }
        self.push_row(pair_row(x, y));
        Ok(())
    }

    fn push_row(&mut self, row: Vec<Scalar>) {
        self.acc.insert(&row);
        self.rows.push(row);
    }

    pub fn kind(&self) -> ProductKind {
        self.kind
    }

    /// Constraint rows in insertion order; entry `a * mn + b` multiplies the
    /// grid coefficient at `(a, b)`.
    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn constraints_used(&self) -> usize {
        self.rows.len()
    }

    pub fn solution_dim(&self) -> usize {
        self.acc.width() - self.acc.rank()
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn is_certified(&self) -> bool {
        self.solution_dim() == self.target_dim
    }

    pub fn certificate(&self) -> ZpdCertificate {
        ZpdCertificate {
            kind: self.kind,
            constraints_used: self.constraints_used(),
            solution_dim: self.solution_dim(),
            target_dim: self.target_dim,
            verdict: if self.is_certified() { Verdict::Certified } else { Verdict::Inconclusive },
        }
    }

    /// A basis of the functionals satisfying every constraint so far.
    pub fn solution_basis(&self) -> Vec<BilinearFunctional> {
        let domain = self.ctx.domain();
        let d = self.ctx.m() * self.ctx.n();
        self.acc
            .basis_matrix(domain)
            .right_nullspace()
            .into_iter()
            .map(|v| BilinearFunctional {
                m: self.ctx.m(),
                n: self.ctx.n(),
                coefficients: Matrix::from_fn(domain, d, d, |a, b| v[a * d + b].clone()),
            })
            .collect()
    }
}

/// Feeds the structured families, then sampled pairs until the system
/// certifies or `max_constraints` rows are in.
pub fn build_constraint_system(
    ctx: &MunnContext,
    kind: ProductKind,
    seed: u64,
    max_constraints: usize,
) -> Result<ConstraintSystem> {
    let mut sys = ConstraintSystem::new(ctx, kind)?;
    let canon = ctx.canonical_context();
    let mut emitted: Vec<Vec<Scalar>> = Vec::new();
    for item in structured_items(&canon, kind) {
        if sys.constraints_used() >= max_constraints {
            return Ok(sys);
        }
        let row = match item {
            Item::Pair(x, y) => {
                let (x, y) = (ctx.from_canonical(&x), ctx.from_canonical(&y));
                check_pair(ctx, kind, &x, &y);
                pair_row(&x, &y)
            }
            Item::Difference(a, b) => emitted[a].iter().zip(&emitted[b]).map(|(s, t)| s - t).collect(),
        };
        emitted.push(row.clone());
        sys.push_row(row);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stale = 0usize;
    while !sys.is_certified() && sys.constraints_used() < max_constraints {
        let before = sys.solution_dim();
        for (x, y) in sampled_pairs(ctx, kind, &mut rng) {
            if sys.constraints_used() >= max_constraints {
                break;
            }
            sys.add_pair(&x, &y)?;
        }
        // An empty annihilator adds nothing; give up after many idle draws.
        stale = if sys.solution_dim() < before { 0 } else { stale + 1 };
        if stale > 64 * ctx.m() * ctx.n() {
            break;
        }
    }
    Ok(sys)
}

pub fn check_zpd(ctx: &MunnContext, kind: ProductKind, seed: u64, max_constraints: usize) -> Result<ZpdCertificate> {
    Ok(build_constraint_system(ctx, kind, seed, max_constraints)?.certificate())
}

/// Solves `phi(x, y) = tau(x * y)` for `tau` after checking that `phi`
/// vanishes on the structured zero-product pairs.
pub fn factor_functional(ctx: &MunnContext, phi: &BilinearFunctional, kind: ProductKind) -> Result<LinearFunctional> {
    require_field(ctx.domain())?;
    let d = ctx.m() * ctx.n();
    if phi.coefficients.shape() != (d, d) || phi.m != ctx.m() {
        return Err(MunnError::ContextMismatch("functional belongs to another context".into()));
    }
    if phi.coefficients.domain() != ctx.domain() {
        return Err(MunnError::DomainMismatch { left: ctx.domain(), right: phi.coefficients.domain() });
    }
    let pairs = generate_zero_product_pairs(ctx, kind, PairStrategy::Structured, 0, usize::MAX)?;
    if let Some(pair) = pairs.iter().position(|(x, y)| !phi.eval(x, y).is_zero()) {
        return Err(MunnError::NotVanishing { pair });
    }
    let units = unit_basis(ctx);
    let domain = ctx.domain();
    let mut rows = Vec::with_capacity(d * d);
    let mut rhs = Vec::with_capacity(d * d);
    for (a, u) in units.iter().enumerate() {
        for (b, v) in units.iter().enumerate() {
            rows.push(flatten(&product(ctx, kind, u, v)).to_vec());
            rhs.push(phi.coefficients.get(a, b).clone());
        }
    }
    let system = Matrix::from_rows(domain, rows)?;
    let tau = system.solve_right(&rhs).ok_or(MunnError::NoFactorization)?;
    let tau = LinearFunctional { coefficients: Matrix::from_fn(domain, ctx.m(), ctx.n(), |i, j| tau[i * ctx.n() + j].clone()) };
    if tau.compose(ctx, kind) != *phi {
        return Err(MunnError::NoFactorization);
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::random_scalar;

    fn gf(p: u64) -> ScalarDomain {
        ScalarDomain::prime_field(p).unwrap()
    }

    fn ctx(p: u64, m: usize, n: usize, r: usize) -> MunnContext {
        MunnContext::canonical(gf(p), m, n, r).unwrap()
    }

    #[test]
    fn scalar_lemma_counts() {
        let five = scalar_lemma_oracle(gf(5), 2).unwrap();
        assert_eq!(five.len(), 5);
        for c in &five {
            assert!(c.get(0, 1).is_zero() && c.get(1, 0).is_zero() && c.get(0, 0) == c.get(1, 1));
        }
        assert_eq!(scalar_lemma_oracle(gf(7), 2).unwrap().len(), 7);
        assert_eq!(scalar_lemma_oracle(gf(5), 1).unwrap().len(), 5);
        assert_eq!(scalar_lemma_oracle(gf(3), 2).unwrap_err().code(), "CHAR_3_UNSUPPORTED");
        assert_eq!(scalar_lemma_oracle(gf(2), 2).unwrap_err().code(), "CHAR_2_UNSUPPORTED");
        assert_eq!(scalar_lemma_oracle(gf(101), 4).unwrap_err().code(), "ENUMERATION_TOO_LARGE");
    }

    #[test]
    fn image_dims() {
        assert_eq!(multiplication_image_dim(&ctx(5, 3, 3, 2), ProductKind::Associative).unwrap(), 9);
        assert_eq!(multiplication_image_dim(&ctx(5, 3, 3, 0), ProductKind::Associative).unwrap(), 0);
        // Brute span of all products of random elements agrees.
        let c = ctx(7, 2, 3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut acc = RankAccumulator::new(c.domain(), 6);
        for _ in 0..40 {
            let (x, y) = (c.random_element(&mut rng, 6), c.random_element(&mut rng, 6));
            acc.insert(flatten(&c.jordan(&x, &y)));
        }
        assert_eq!(multiplication_image_dim(&c, ProductKind::Jordan).unwrap(), acc.rank());
        let h = MunnContext::canonical(ScalarDomain::RationalQuaternions, 2, 2, 1).unwrap();
        assert_eq!(multiplication_image_dim(&h, ProductKind::Associative).unwrap_err().code(), "NONCOMMUTATIVE_DOMAIN");
    }

    #[test]
    fn listed_pairs_vanish() {
        let c = ctx(5, 3, 4, 2);
        let u = |g, i, j| c.unit_int(g, i, j);
        assert!(c.mul(&u(1, 1, 3), &u(1, 2, 2)).is_zero());
        let (i, k, j) = (1, 2, 3);
        let e = &(&u(1, k, i) + &u(1, i, k)) + &u(1, k, j);
        let f = &(&u(-1, k, i) + &u(1, i, k)) + &u(-1, k, j);
        assert!(c.jordan(&e, &f).is_zero());
        let (i, j, k) = (3, 4, 1);
        let g = &u(1, i, k) - &u(1, k, j);
        let h = &u(1, i, k) + &u(1, k, j);
        assert!(c.jordan(&g, &h).is_zero());
    }

    #[test]
    fn generated_pairs_are_sound() {
        let p = Matrix::parse(gf(7), &[&["1", "2", "3"], &["2", "4", "6"]]).unwrap();
        let general = MunnContext::new(gf(7), 3, 2, p).unwrap();
        for c in [ctx(5, 3, 3, 2), ctx(7, 2, 3, 1), general] {
            for kind in [ProductKind::Associative, ProductKind::Jordan] {
                for strategy in [PairStrategy::Structured, PairStrategy::Sampled] {
                    let pairs = generate_zero_product_pairs(&c, kind, strategy, 11, 40).unwrap();
                    assert!(!pairs.is_empty());
                    for (x, y) in pairs {
                        assert!(product(&c, kind, &x, &y).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn certifies_desk_examples() {
        for (c, dim) in [(ctx(5, 2, 2, 2), 4), (ctx(5, 3, 3, 2), 9), (ctx(7, 2, 3, 2), 6)] {
            let cert = check_zpd(&c, ProductKind::Associative, 0, DEFAULT_MAX_CONSTRAINTS).unwrap();
            assert_eq!(cert.verdict, Verdict::Certified, "{cert:?}");
            assert_eq!(cert.solution_dim, dim);
            let cert = check_zpd(&c, ProductKind::Jordan, 0, DEFAULT_MAX_CONSTRAINTS).unwrap();
            assert_eq!(cert.verdict, Verdict::Certified, "{cert:?}");
        }
    }

    #[test]
    fn structured_suffices_for_associative() {
        for c in [ctx(5, 2, 2, 2), ctx(5, 3, 3, 2), ctx(7, 2, 3, 2)] {
            let sys = build_constraint_system(&c, ProductKind::Associative, 0, usize::MAX).unwrap();
            let structured = structured_items(&c, ProductKind::Associative).len();
            assert_eq!(sys.constraints_used(), structured);
            assert!(sys.is_certified());
        }
    }

    #[test]
    fn refuses_bad_domains() {
        let h = MunnContext::canonical(ScalarDomain::RationalQuaternions, 2, 2, 2).unwrap();
        assert_eq!(check_zpd(&h, ProductKind::Associative, 0, 10).unwrap_err().code(), "NONCOMMUTATIVE_DOMAIN");
        assert_eq!(check_zpd(&ctx(3, 2, 2, 2), ProductKind::Jordan, 0, 10).unwrap_err().code(), "CHAR_3_UNSUPPORTED");
        assert_eq!(check_zpd(&ctx(2, 2, 2, 2), ProductKind::Jordan, 0, 10).unwrap_err().code(), "CHAR_2_UNSUPPORTED");
    }

    #[test]
    fn monotone_and_stable() {
        let c = ctx(5, 3, 3, 2);
        let mut sys = ConstraintSystem::new(&c, ProductKind::Jordan).unwrap();
        let mut last = sys.solution_dim();
        let mut pairs = generate_zero_product_pairs(&c, ProductKind::Jordan, PairStrategy::Structured, 0, usize::MAX).unwrap();
        pairs.extend(generate_zero_product_pairs(&c, ProductKind::Jordan, PairStrategy::Sampled, 5, 400).unwrap());
        let mut certified_at = None;
        for (x, y) in &pairs {
            sys.add_pair(x, y).unwrap();
            assert!(sys.solution_dim() <= last);
            assert!(sys.solution_dim() >= sys.target_dim());
            last = sys.solution_dim();
            if sys.is_certified() && certified_at.is_none() {
                certified_at = Some(last);
            }
            if let Some(d) = certified_at {
                assert_eq!(sys.solution_dim(), d);
            }
        }
        assert!(certified_at.is_some());
    }

    #[test]
    fn certified_solution_space_has_scalar_blocks() {
        let c = ctx(5, 3, 3, 2);
        let sys = build_constraint_system(&c, ProductKind::Associative, 0, usize::MAX).unwrap();
        let basis = sys.solution_basis();
        assert_eq!(basis.len(), 9);
        let r = 2;
        for phi in &basis {
            for i in 1..=3 {
                for q in 1..=3 {
                    for j in 1..=r {
                        for p in 1..=r {
                            if j != p {
                                assert!(phi.lambda(i, q, j, p).is_zero());
                            }
                        }
                        assert_eq!(phi.lambda(i, q, j, j), phi.lambda(i, q, 1, 1));
                    }
                    // Columns or rows outside the sandwich support vanish.
                    for j in 1..=3 {
                        for p in 1..=3 {
                            if j > r || p > r {
                                assert!(phi.lambda(i, q, j, p).is_zero());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn jordan_rows_contain_relations() {
        let c = ctx(5, 3, 3, 2);
        let sys = build_constraint_system(&c, ProductKind::Jordan, 0, usize::MAX).unwrap();
        let d = 9;
        let index = |i: usize, q: usize, j: usize, p: usize| ((i - 1) * 3 + (j - 1)) * d + (p - 1) * 3 + (q - 1);
        let row_of = |terms: &[(i64, [usize; 4])]| {
            let mut row = vec![c.domain().zero(); d * d];
            for &(s, [i, q, j, p]) in terms {
                row[index(i, q, j, p)] = &row[index(i, q, j, p)] + &c.domain().from_i64(s);
            }
            row
        };
        let (i, k, j) = (1, 2, 3);
        let first = row_of(&[(-1, [k, i, j, k]), (1, [k, k, j, i]), (-1, [k, j, j, k]), (-1, [k, j, i, k]), (-1, [i, j, k, k])]);
        assert!(sys.rows().contains(&first));
        let (i, j, k) = (3, 3, 1);
        let second = row_of(&[(1, [i, k, k, i]), (-1, [k, k, j, i]), (1, [i, j, k, k]), (-1, [k, j, j, k])]);
        assert!(sys.rows().contains(&second));
    }

    #[test]
    fn factor_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (c, kind) in [
            (ctx(5, 3, 3, 2), ProductKind::Associative),
            (ctx(5, 3, 3, 2), ProductKind::Jordan),
            (MunnContext::canonical(ScalarDomain::Rationals, 2, 3, 2).unwrap(), ProductKind::Jordan),
        ] {
            for _ in 0..100 {
                let t = Matrix::from_fn(c.domain(), c.m(), c.n(), |_, _| random_scalar(c.domain(), &mut rng, 4));
                let tau = LinearFunctional::new(&c, t).unwrap();
                let phi = tau.compose(&c, kind);
                let back = factor_functional(&c, &phi, kind).unwrap();
                assert_eq!(back.compose(&c, kind), phi);
            }
        }
    }

    #[test]
    fn factors_lambda_pattern() {
        let c = ctx(5, 3, 3, 2);
        let d = c.domain();
        let lam_iq = |i: usize, q: usize| d.from_i64((i * 3 + q) as i64);
        let phi = BilinearFunctional::from_lambda(&c, |i, q, j, p| if j == p && j <= 2 { lam_iq(i, q) } else { d.zero() });
        let tau = factor_functional(&c, &phi, ProductKind::Associative).unwrap();
        for i in 1..=3 {
            for q in 1..=3 {
                assert_eq!(tau.eval(&c.unit_int(1, i, q)), lam_iq(i, q));
            }
        }
        let bad = BilinearFunctional::from_lambda(&c, |i, q, j, p| if (i, q, j, p) == (1, 1, 3, 1) { d.one() } else { d.zero() });
        assert_eq!(factor_functional(&c, &bad, ProductKind::Associative).unwrap_err().code(), "NOT_VANISHING");
    }

    #[test]
    fn jordan_solutions_factor() {
        let c = ctx(5, 3, 3, 2);
        let sys = build_constraint_system(&c, ProductKind::Jordan, 1, usize::MAX).unwrap();
        assert!(sys.is_certified());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let basis = sys.solution_basis();
        for _ in 0..5 {
            let weights: Vec<Scalar> = basis.iter().map(|_| random_scalar(c.domain(), &mut rng, 4)).collect();
            let coeffs = Matrix::from_fn(c.domain(), 9, 9, |a, b| {
                basis.iter().zip(&weights).fold(c.domain().zero(), |acc, (phi, w)| &acc + &(w * phi.coefficients().get(a, b)))
            });
            let phi = BilinearFunctional::new(&c, coeffs).unwrap();
            let tau = factor_functional(&c, &phi, ProductKind::Jordan).unwrap();
            assert_eq!(tau.compose(&c, ProductKind::Jordan), phi);
        }
    }
}
