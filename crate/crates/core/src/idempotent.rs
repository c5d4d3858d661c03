//! Standard idempotents of `M(D, m, n, E_r)` and three ways of writing an
//! element in terms of them: as a `D`-algebra, as a ring, and as a span of
//! Jordan products.

use crate::error::{MunnError, Result};
use crate::munn::{JordanTerm, MunnContext, MunnElement, Sign, Witness, WordTerm};
use crate::scalars::Scalar;

/// A parameterized standard idempotent. Indices are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub enum IdempotentFamily {
    /// `(1, s, s)`, `s <= r`.
    Diag { s: usize },
    /// `(1, s, s) + (h, s, t)`, `s <= r`, `t != s`.
    Right { s: usize, t: usize, h: Scalar },
    /// `(1, s, s) + (h, t, s)`, `s <= r`, `t != s`.
    Left { s: usize, t: usize, h: Scalar },
    /// `(h, s, s) + (h, t, s) + (1 - h, s, t) + (1 - h, t, t)`, `s != t <= r`.
    Square { s: usize, t: usize, h: Scalar },
    /// `(1, 1, 1) + (h, s, 1)`, `s != 1`.
    Corner { s: usize, h: Scalar },
}

/// Builds standard idempotents in a canonical context.
pub struct IdempotentCatalog<'a> {
    ctx: &'a MunnContext,
}

impl<'a> IdempotentCatalog<'a> {
    pub fn new(ctx: &'a MunnContext) -> Result<Self> {
        if !ctx.is_canonical() {
            return Err(MunnError::ContextMismatch("catalog needs a canonical sandwich matrix".into()));
        }
        if ctx.rank() == 0 {
            return Err(rank_error(ctx, "standard idempotents need r >= 1"));
        }
        Ok(IdempotentCatalog { ctx })
    }

    fn unit(&self, g: Scalar, i: usize, s: usize) -> Result<MunnElement> {
        self.ctx.unit(g, i, s)
    }

    fn one(&self) -> Scalar {
        self.ctx.domain().one()
    }

    fn pivot(&self, s: usize) -> Result<()> {
        if s == 0 || s > self.ctx.rank() {
            return Err(MunnError::IndexOutOfRange { i: s, s, m: self.ctx.rank(), n: self.ctx.rank() });
        }
        Ok(())
    }

    fn distinct(s: usize, t: usize) -> Result<()> {
        if s == t {
            return Err(MunnError::HypothesisUnmet(format!("indices must differ, got s = t = {s}")));
        }
        Ok(())
    }

    pub fn diag(&self, s: usize) -> Result<MunnElement> {
        self.pivot(s)?;
        self.unit(self.one(), s, s)
    }

    pub fn right(&self, s: usize, t: usize, h: &Scalar) -> Result<MunnElement> {
        self.pivot(s)?;
        Self::distinct(s, t)?;
        Ok(&self.diag(s)? + &self.unit(h.clone(), s, t)?)
    }

    pub fn left(&self, s: usize, t: usize, h: &Scalar) -> Result<MunnElement> {
        self.pivot(s)?;
        Self::distinct(s, t)?;
        Ok(&self.diag(s)? + &self.unit(h.clone(), t, s)?)
    }

    pub fn square(&self, s: usize, t: usize, h: &Scalar) -> Result<MunnElement> {
        if self.ctx.rank() < 2 {
            return Err(rank_error(self.ctx, "the square family needs r >= 2"));
        }
        self.pivot(s)?;
        self.pivot(t)?;
        Self::distinct(s, t)?;
        let g = &self.one() - h;
        let parts = [
            self.unit(h.clone(), s, s)?,
            self.unit(h.clone(), t, s)?,
            self.unit(g.clone(), s, t)?,
            self.unit(g, t, t)?,
        ];
        Ok(parts.iter().fold(self.ctx.zero(), |acc, x| &acc + x))
    }

    pub fn corner(&self, s: usize, h: &Scalar) -> Result<MunnElement> {
        self.left(1, s, h)
    }

    pub fn build(&self, family: &IdempotentFamily) -> Result<MunnElement> {
        match family {
            IdempotentFamily::Diag { s } => self.diag(*s),
            IdempotentFamily::Right { s, t, h } => self.right(*s, *t, h),
            IdempotentFamily::Left { s, t, h } => self.left(*s, *t, h),
            IdempotentFamily::Square { s, t, h } => self.square(*s, *t, h),
            IdempotentFamily::Corner { s, h } => self.corner(*s, h),
        }
    }
}

fn rank_error(ctx: &MunnContext, requirement: &str) -> MunnError {
    MunnError::RankRequirement { rank: ctx.rank(), requirement: requirement.to_string() }
}

/// The requested generators, expressed in `ctx` (transported from the
/// canonical context) and each checked to satisfy `e • e = e`.
pub fn standard_idempotents(ctx: &MunnContext, params: &[IdempotentFamily]) -> Result<Vec<MunnElement>> {
    let canon = ctx.canonical_context();
    let catalog = IdempotentCatalog::new(&canon)?;
    params
        .iter()
        .map(|f| {
            let e = ctx.from_canonical(&catalog.build(f)?);
            assert!(ctx.is_idempotent(&e), "catalog produced a non-idempotent for {f:?}");
            Ok(e)
        })
        .collect()
}

fn nonzero_cells(a: &MunnElement) -> impl Iterator<Item = (usize, usize, &Scalar)> {
    let m = a.matrix();
    (0..m.rows()).flat_map(move |i| (0..m.cols()).map(move |s| (i, s))).filter_map(move |(i, s)| {
        let v = m.get(i, s);
        (!v.is_zero()).then_some((i + 1, s + 1, v))
    })
}

fn word(sign: Sign, coefficient: Option<&Scalar>, letters: &[&MunnElement]) -> WordTerm {
    WordTerm {
        sign,
        coefficient: coefficient.filter(|c| !c.is_one()).cloned(),
        letters: letters.iter().map(|&e| e.clone()).collect(),
    }
}

/// `A` as a sum of scalar multiples of words in idempotents, via
/// `(h, s, t) = h (1, s, 1) • (1, 1, t)`.
pub fn decompose_algebra_idempotents(ctx: &MunnContext, a: &MunnElement) -> Result<Witness> {
    if ctx.rank() == 0 {
        return Err(rank_error(ctx, "idempotent generation needs r >= 1"));
    }
    if !ctx.domain().is_commutative() && !ctx.transforms_are_central() {
        return Err(MunnError::HypothesisUnmet(
            "normalizing transforms have non-central entries, so scalar coefficients do not transport".into(),
        ));
    }
    ctx.via_canonical(a, |canon, a| {
        let cat = IdempotentCatalog::new(canon)?;
        let one = canon.domain().one();
        let d = cat.diag(1)?;
        let mut terms = Vec::new();
        for (s, t, h) in nonzero_cells(a) {
            let h = Some(h);
            match (s == 1, t == 1) {
                (true, true) => terms.push(word(Sign::Plus, h, &[&d])),
                (true, false) => {
                    let r = cat.right(1, t, &one)?;
                    terms.push(word(Sign::Plus, h, &[&r]));
                    terms.push(word(Sign::Minus, h, &[&d]));
                }
                (false, true) => {
                    let l = cat.left(1, s, &one)?;
                    terms.push(word(Sign::Plus, h, &[&l]));
                    terms.push(word(Sign::Minus, h, &[&d]));
                }
                (false, false) => {
                    // (L - D) • (R - D) with L • D = L, D • R = R, D • D = D.
                    let l = cat.left(1, s, &one)?;
                    let r = cat.right(1, t, &one)?;
                    terms.push(word(Sign::Plus, h, &[&l, &r]));
                    terms.push(word(Sign::Minus, h, &[&l]));
                    terms.push(word(Sign::Minus, h, &[&r]));
                    terms.push(word(Sign::Plus, h, &[&d]));
                }
            }
        }
        Ok(Witness::IdempotentWordSum(terms))
    })
}

/// `A` as a signed sum of words in idempotents with no scalar coefficients.
pub fn decompose_ring_idempotents(ctx: &MunnContext, a: &MunnElement) -> Result<Witness> {
    if ctx.rank() < 2 {
        return Err(rank_error(ctx, "ring generation by idempotents needs r >= 2"));
    }
    ctx.via_canonical(a, |canon, a| {
        let cat = IdempotentCatalog::new(canon)?;
        let one = canon.domain().one();
        let d = cat.diag(1)?;
        let mut terms = Vec::new();
        for (s, t, h) in nonzero_cells(a) {
            match (s == 1, t == 1) {
                (true, true) => {
                    // (h, 1, 2) • (1, 2, 1) = ((1,1,1)+(h,1,2) - D) • ((1,1,1)+(1,2,1) - D)
                    //                       = right(1,2,h) • left(1,2,1) - D.
                    let r = cat.right(1, 2, h)?;
                    let l = cat.left(1, 2, &one)?;
                    terms.push(word(Sign::Plus, None, &[&r, &l]));
                    terms.push(word(Sign::Minus, None, &[&d]));
                }
                (true, false) => {
                    terms.push(word(Sign::Plus, None, &[&cat.right(1, t, h)?]));
                    terms.push(word(Sign::Minus, None, &[&d]));
                }
                (false, true) => {
                    terms.push(word(Sign::Plus, None, &[&cat.left(1, s, h)?]));
                    terms.push(word(Sign::Minus, None, &[&d]));
                }
                (false, false) => {
                    // (h, s, 1) • (1, 1, t).
                    let l = cat.left(1, s, h)?;
                    let r = cat.right(1, t, &one)?;
                    terms.push(word(Sign::Plus, None, &[&l, &r]));
                    terms.push(word(Sign::Minus, None, &[&l]));
                    terms.push(word(Sign::Minus, None, &[&r]));
                    terms.push(word(Sign::Plus, None, &[&d]));
                }
            }
        }
        Ok(Witness::IdempotentWordSum(terms))
    })
}

fn jordan(sign: Sign, e: &MunnElement, f: &MunnElement) -> JordanTerm {
    JordanTerm { sign, e: e.clone(), f: f.clone() }
}

/// `A` as a signed sum of Jordan products `e ∘ f` of idempotents.
pub fn decompose_jordan_idempotents(ctx: &MunnContext, a: &MunnElement) -> Result<Witness> {
    let domain = ctx.domain();
    if domain.characteristic() == 2 {
        return Err(MunnError::UnsupportedCharacteristic {
            characteristic: 2,
            reason: "the Jordan formulas divide by 2".into(),
        });
    }
    if ctx.rank() < 2 {
        return Err(rank_error(ctx, "Jordan generation by idempotents needs r >= 2"));
    }
    let half = domain.from_i64(2).inverse()?;
    let quarter = domain.from_i64(4).inverse()?;
    ctx.via_canonical(a, |canon, a| {
        let cat = IdempotentCatalog::new(canon)?;
        let r = canon.rank();
        let one = domain.one();
        let mut terms = Vec::new();
        for (s, t, h) in nonzero_cells(a) {
            if s == t && s <= r {
                let u = if s == 1 { 2 } else { 1 };
                let d = cat.diag(s)?;
                let q = cat.square(s, u, &(h * &half))?;
                let lw = cat.left(s, u, &(h * &quarter))?;
                let rw = cat.right(s, u, &(&half - &(h * &quarter)))?;
                terms.push(jordan(Sign::Plus, &q, &d));
                terms.push(jordan(Sign::Minus, &lw, &lw));
                terms.push(jordan(Sign::Plus, &d, &d));
                terms.push(jordan(Sign::Minus, &rw, &rw));
                terms.push(jordan(Sign::Plus, &d, &d));
            } else if s <= r {
                // e ∘ e = 2e for an idempotent e.
                let e = cat.right(s, t, &(h * &half))?;
                let d = cat.diag(s)?;
                terms.push(jordan(Sign::Plus, &e, &e));
                terms.push(jordan(Sign::Minus, &d, &d));
            } else if t <= r {
                let e = cat.left(t, s, &(h * &half))?;
                let d = cat.diag(t)?;
                terms.push(jordan(Sign::Plus, &e, &e));
                terms.push(jordan(Sign::Minus, &d, &d));
            } else {
                let lh = cat.corner(s, h)?;
                let rt = cat.right(1, t, &one)?;
                let e1 = cat.diag(1)?;
                terms.push(jordan(Sign::Plus, &lh, &rt));
                terms.push(jordan(Sign::Minus, &e1, &rt));
                terms.push(jordan(Sign::Minus, &lh, &e1));
                terms.push(jordan(Sign::Plus, &e1, &e1));
            }
        }
        Ok(Witness::JordanIdempotentSpan(terms))
    })
}
