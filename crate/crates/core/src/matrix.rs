//! Dense exact matrices over a [`ScalarDomain`].
//!
//! Elimination always left-multiplies rows by pivot inverses, which keeps
//! every routine valid over the quaternions. Pivoting is fixed: leftmost
//! nonzero column, lowest-index row.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{MunnError, Result};
use crate::scalars::{Scalar, ScalarDomain};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    domain: ScalarDomain,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form `reduced = transform * original`.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    pub transform: Matrix,
}

/// Invertible `v`, `w` with `v * P * w = E_rank`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equivalence {
    pub v: Matrix,
    pub w: Matrix,
    pub rank: usize,
}

impl Matrix {
    pub fn zeros(domain: ScalarDomain, rows: usize, cols: usize) -> Matrix {
        Matrix {
            domain,
            rows,
            cols,
            data: vec![domain.zero(); rows * cols],
        }
    }

    pub fn identity(domain: ScalarDomain, n: usize) -> Matrix {
        Matrix::canonical_form(domain, n, n, n)
    }

    /// `E_r`: the identity block `I_r` in the top-left corner, zeros elsewhere.
    pub fn canonical_form(domain: ScalarDomain, rows: usize, cols: usize, r: usize) -> Matrix {
        let mut m = Matrix::zeros(domain, rows, cols);
        for t in 0..r.min(rows).min(cols) {
            m.set(t, t, domain.one());
        }
        m
    }

    pub fn from_fn(domain: ScalarDomain, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                assert_eq!(x.domain(), domain, "entry domain");
                data.push(x);
            }
        }
        Matrix { domain, rows, cols, data }
    }

    pub fn from_rows(domain: ScalarDomain, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(MunnError::ShapeMismatch { expected: (1, 1), found: (r, c) });
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(MunnError::ShapeMismatch { expected: (r, c), found: (r, row.len()) });
            }
            for x in row {
                if x.domain() != domain {
                    return Err(MunnError::DomainMismatch { left: domain, right: x.domain() });
                }
                data.push(x);
            }
        }
        Ok(Matrix { domain, rows: r, cols: c, data })
    }

    /// Parses a grid of literals; convenient in tests.
    pub fn parse(domain: ScalarDomain, rows: &[&[&str]]) -> Result<Matrix> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| domain.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(domain, parsed)
    }

    pub fn domain(&self) -> ScalarDomain {
        self.domain
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        assert_eq!(x.domain(), self.domain, "entry domain");
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_same(&self, other: &Matrix) -> Result<()> {
        if self.domain != other.domain {
            return Err(MunnError::DomainMismatch { left: self.domain, right: other.domain });
        }
        if self.shape() != other.shape() {
            return Err(MunnError::ShapeMismatch { expected: self.shape(), found: other.shape() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.domain != other.domain {
            return Err(MunnError::DomainMismatch { left: self.domain, right: other.domain });
        }
        if self.cols != other.rows {
            return Err(MunnError::ShapeMismatch {
                expected: (self.cols, other.cols),
                found: other.shape(),
            });
        }
        let mut out = Matrix::zeros(self.domain, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        Matrix {
            domain: self.domain,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix {
            domain: self.domain,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Left scalar multiplication `c * A`.
    pub fn scale_left(&self, c: &Scalar) -> Matrix {
        assert_eq!(c.domain(), self.domain, "scalar domain");
        self.map(|x| c * x)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.domain, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose; an anti-automorphism `(AB)* = B* A*` over every supported domain.
    pub fn conj_transpose(&self) -> Matrix {
        Matrix::from_fn(self.domain, self.cols, self.rows, |i, j| self.get(j, i).conjugate())
    }

    /// Copy of the block `rows x cols` starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.domain, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// `self` placed at `(r0, c0)` inside a zero `rows x cols` matrix.
    pub fn embed(&self, rows: usize, cols: usize, r0: usize, c0: usize) -> Matrix {
        let mut out = Matrix::zeros(self.domain, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(r0 + i, c0 + j, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(self.domain.zero(), |acc, t| &acc + self.get(t, t))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row_left(&mut self, i: usize, c: &Scalar) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = c * &self.data[idx];
        }
    }

    /// `row[target] -= factor * row[source]`.
    fn sub_row_multiple(&mut self, target: usize, factor: &Scalar, source: usize) {
        for j in 0..self.cols {
            let s = self.get(source, j);
            if s.is_zero() {
                continue;
            }
            let delta = factor * s;
            let idx = target * self.cols + j;
            self.data[idx] = &self.data[idx] - &delta;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `col[target] -= col[source] * factor`.
    fn sub_col_multiple(&mut self, target: usize, source: usize, factor: &Scalar) {
        for i in 0..self.rows {
            let s = self.get(i, source);
            if s.is_zero() {
                continue;
            }
            let delta = s * factor;
            let idx = i * self.cols + target;
            self.data[idx] = &self.data[idx] - &delta;
        }
    }

    fn reduce(&mut self, mut transform: Option<&mut Matrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot_row) = (rank..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            self.swap_rows(rank, pivot_row);
            if let Some(t) = transform.as_deref_mut() {
                t.swap_rows(rank, pivot_row);
            }
            let pivot = self.get(rank, col).clone();
            if !pivot.is_one() {
                let inv = pivot.inverse().expect("nonzero pivot");
                self.scale_row_left(rank, &inv);
                if let Some(t) = transform.as_deref_mut() {
                    t.scale_row_left(rank, &inv);
                }
            }
            for i in 0..self.rows {
                if i == rank {
                    continue;
                }
                let factor = self.get(i, col).clone();
                if factor.is_zero() {
                    continue;
                }
                self.sub_row_multiple(i, &factor, rank);
                if let Some(t) = transform.as_deref_mut() {
                    t.sub_row_multiple(i, &factor, rank);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        pivots
    }

    pub fn echelon(&self) -> Echelon {
        let mut reduced = self.clone();
        let mut transform = Matrix::identity(self.domain, self.rows);
        let pivots = reduced.reduce(Some(&mut transform));
        Echelon { reduced, pivots, transform }
    }

    /// Rank by row reduction; over a division ring this is the left row rank,
    /// which is invariant under two-sided invertible transforms.
    pub fn row_rank(&self) -> usize {
        let mut reduced = self.clone();
        reduced.reduce(None).len()
    }

    pub fn invert(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(MunnError::ShapeMismatch {
                expected: (self.rows, self.rows),
                found: self.shape(),
            });
        }
        let e = self.echelon();
        if e.pivots.len() < self.rows {
            return Err(MunnError::Singular);
        }
        Ok(e.transform)
    }

    /// Invertible `V` (rows x rows) and `W` (cols x cols) with `V * self * W = E_r`.
    pub fn equivalence_normalize(&self) -> Equivalence {
        let Echelon { mut reduced, pivots, transform } = self.echelon();
        let mut w = Matrix::identity(self.domain, self.cols);
        for (t, &c) in pivots.iter().enumerate() {
            reduced.swap_cols(t, c);
            w.swap_cols(t, c);
        }
        let rank = pivots.len();
        for t in 0..rank {
            for j in rank..self.cols {
                let factor = reduced.get(t, j).clone();
                if factor.is_zero() {
                    continue;
                }
                reduced.sub_col_multiple(j, t, &factor);
                w.sub_col_multiple(j, t, &factor);
            }
        }
        debug_assert_eq!(reduced, Matrix::canonical_form(self.domain, self.rows, self.cols, rank));
        Equivalence { v: transform, w, rank }
    }

    /// Basis of the right null space `{x : A x = 0}`.
    pub fn right_nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut reduced = self.clone();
        let pivots = reduced.reduce(None);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut x = vec![self.domain.zero(); self.cols];
            x[free] = self.domain.one();
            for (t, &c) in pivots.iter().enumerate() {
                x[c] = -reduced.get(t, free);
            }
            basis.push(x);
        }
        basis
    }

    /// Some solution of `A x = b`, or `None` when inconsistent.
    pub fn solve_right(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Matrix::from_fn(self.domain, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.reduce(None);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.domain.zero(); self.cols];
        for (t, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(t, self.cols).clone();
        }
        Some(x)
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        self.checked_add(o).expect("matrix add")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        self.checked_sub(o).expect("matrix sub")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        self.checked_mul(o).expect("matrix mul")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.map(|x| -x)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> ScalarDomain {
        ScalarDomain::prime_field(p).unwrap()
    }

    #[test]
    fn products() {
        let q = ScalarDomain::Rationals;
        let swap = Matrix::parse(q, &[&["0", "1"], &["1", "0"]]).unwrap();
        let m = Matrix::parse(q, &[&["1/2", "2"], &["3", "-4"]]).unwrap();
        assert_eq!(&swap * &m, Matrix::parse(q, &[&["3", "-4"], &["1/2", "2"]]).unwrap());
        assert_eq!(&Matrix::identity(q, 2) * &m, m);

        let h = ScalarDomain::RationalQuaternions;
        let i = Matrix::parse(h, &[&["i"]]).unwrap();
        let j = Matrix::parse(h, &[&["j"]]).unwrap();
        assert_eq!(&i * &j, Matrix::parse(h, &[&["k"]]).unwrap());
        assert_eq!(&j * &i, Matrix::parse(h, &[&["-k"]]).unwrap());
    }

    #[test]
    fn shape_and_domain_errors() {
        let a = Matrix::zeros(gf(5), 2, 3);
        let b = Matrix::zeros(gf(5), 2, 3);
        assert_eq!(a.checked_mul(&b).unwrap_err().code(), "SHAPE_MISMATCH");
        let c = Matrix::zeros(gf(7), 2, 3);
        assert_eq!(a.checked_add(&c).unwrap_err().code(), "DOMAIN_MISMATCH");
        assert_eq!(a.invert().unwrap_err().code(), "SHAPE_MISMATCH");
    }

    #[test]
    fn ranks() {
        let q = ScalarDomain::Rationals;
        assert_eq!(Matrix::canonical_form(q, 3, 3, 2).row_rank(), 2);
        assert_eq!(Matrix::parse(q, &[&["1", "2"], &["2", "4"]]).unwrap().row_rank(), 1);
        assert_eq!(Matrix::zeros(q, 3, 4).row_rank(), 0);
    }

    #[test]
    fn inverses() {
        let f = gf(5);
        let m = Matrix::parse(f, &[&["1", "1"], &["0", "1"]]).unwrap();
        assert_eq!(m.invert().unwrap(), Matrix::parse(f, &[&["1", "4"], &["0", "1"]]).unwrap());
        assert_eq!(Matrix::identity(f, 3).invert().unwrap(), Matrix::identity(f, 3));
        let q = ScalarDomain::Rationals;
        let singular = Matrix::parse(q, &[&["1", "2"], &["2", "4"]]).unwrap();
        assert_eq!(singular.invert().unwrap_err(), MunnError::Singular);

        let h = ScalarDomain::RationalQuaternions;
        // Left-dependent rows: k * (i, 1) = (j, k).
        let dependent = Matrix::parse(h, &[&["i", "1"], &["j", "k"]]).unwrap();
        assert_eq!(dependent.invert().unwrap_err(), MunnError::Singular);
        let m = Matrix::parse(h, &[&["i", "1"], &["j", "1"]]).unwrap();
        let inv = m.invert().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(h, 2));
        assert_eq!(&inv * &m, Matrix::identity(h, 2));
    }

    #[test]
    fn normalization_examples() {
        let f = gf(5);
        let er = Matrix::canonical_form(f, 3, 4, 2);
        let eq = er.equivalence_normalize();
        assert_eq!((eq.v.clone(), eq.w.clone(), eq.rank), (Matrix::identity(f, 3), Matrix::identity(f, 4), 2));

        let swap = Matrix::parse(f, &[&["0", "1"], &["1", "0"]]).unwrap();
        let eq = swap.equivalence_normalize();
        assert_eq!(eq.v, swap);
        assert_eq!(eq.w, Matrix::identity(f, 2));
        assert_eq!(eq.rank, 2);

        let q = ScalarDomain::Rationals;
        let p = Matrix::parse(q, &[&["1", "2"], &["2", "4"]]).unwrap();
        let eq = p.equivalence_normalize();
        assert_eq!(eq.rank, 1);
        assert_eq!(&(&eq.v * &p) * &eq.w, Matrix::canonical_form(q, 2, 2, 1));
        assert!(eq.v.invert().is_ok() && eq.w.invert().is_ok());

        let zero = Matrix::zeros(q, 2, 3);
        assert_eq!(zero.equivalence_normalize().rank, 0);
    }

    #[test]
    fn quaternion_normalization() {
        let h = ScalarDomain::RationalQuaternions;
        let p = Matrix::parse(h, &[&["i", "j", "1"], &["k", "-i", "j"]]).unwrap();
        let eq = p.equivalence_normalize();
        assert_eq!(&(&eq.v * &p) * &eq.w, Matrix::canonical_form(h, 2, 3, eq.rank));
    }

    #[test]
    fn null_space_and_solve() {
        let h = ScalarDomain::RationalQuaternions;
        let a = Matrix::parse(h, &[&["i", "j", "k"], &["1", "i", "0"]]).unwrap();
        for x in a.right_nullspace() {
            let col = Matrix::from_fn(h, 3, 1, |i, _| x[i].clone());
            assert!((&a * &col).is_zero());
        }
        let b = vec![h.parse("1").unwrap(), h.parse("j").unwrap()];
        let x = a.solve_right(&b).unwrap();
        let col = Matrix::from_fn(h, 3, 1, |i, _| x[i].clone());
        assert_eq!((&a * &col).entries(), &b[..]);

        let q = ScalarDomain::Rationals;
        let a = Matrix::parse(q, &[&["1", "1"], &["1", "1"]]).unwrap();
        assert!(a.solve_right(&[q.one(), q.zero()]).is_none());
    }
}
