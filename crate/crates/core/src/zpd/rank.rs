//! Incremental row-rank over `GF(p)` (word arithmetic) and `Q` (fraction-free).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::Matrix;
use crate::scalars::{Scalar, ScalarDomain};

#[derive(Clone, Debug)]
enum Rows {
    Fp { p: u64, rows: Vec<(usize, Vec<u64>)> },
    Q { rows: Vec<(usize, Vec<BigInt>)> },
}

/// Keeps an echelon basis of the rows inserted so far.
#[derive(Clone, Debug)]
pub struct RankAccumulator {
    width: usize,
    rows: Rows,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

impl RankAccumulator {
    /// Panics on quaternion domains; rank here is over a field.
    pub fn new(domain: ScalarDomain, width: usize) -> Self {
        let rows = match domain {
            ScalarDomain::PrimeField { p } => Rows::Fp { p, rows: vec![] },
            ScalarDomain::Rationals => Rows::Q { rows: vec![] },
            ScalarDomain::RationalQuaternions => panic!("rank accumulator needs a field"),
        };
        RankAccumulator { width, rows }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        match &self.rows {
            Rows::Fp { rows, .. } => rows.len(),
            Rows::Q { rows } => rows.len(),
        }
    }

    /// Adds a row; true when the rank grew.
    pub fn insert(&mut self, row: &[Scalar]) -> bool {
        assert_eq!(row.len(), self.width, "row width");
        match &mut self.rows {
            Rows::Fp { p, rows } => {
                let p = *p;
                let mut v: Vec<u64> = row
                    .iter()
                    .map(|x| match x {
                        Scalar::Fp { v, .. } => *v,
                        other => panic!("expected GF({p}), got {other}"),
                    })
                    .collect();
                for (c, r) in rows.iter() {
                    let f = v[*c];
                    if f != 0 {
                        for (x, y) in v.iter_mut().zip(r) {
                            *x = (*x + p - mul_mod(f, *y, p)) % p;
                        }
                    }
                }
                let Some(c) = v.iter().position(|&x| x != 0) else { return false };
                let inv = inv_mod(v[c], p);
                for x in v.iter_mut() {
                    *x = mul_mod(*x, inv, p);
                }
                rows.push((c, v));
                true
            }
            Rows::Q { rows } => {
                let den = row.iter().fold(BigInt::one(), |l, x| match x {
                    Scalar::Q(q) => l.lcm(q.denom()),
                    other => panic!("expected a rational, got {other}"),
                });
                let mut v: Vec<BigInt> = row
                    .iter()
                    .map(|x| match x {
                        Scalar::Q(q) => q.numer() * (&den / q.denom()),
                        _ => unreachable!(),
                    })
                    .collect();
                for (c, r) in rows.iter() {
                    if v[*c].is_zero() {
                        continue;
                    }
                    let (a, b) = (r[*c].clone(), v[*c].clone());
                    for (x, y) in v.iter_mut().zip(r) {
                        *x = &a * &*x - &b * y;
                    }
                    primitive(&mut v);
                }
                let Some(c) = v.iter().position(|x| !x.is_zero()) else { return false };
                primitive(&mut v);
                if v[c].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                rows.push((c, v));
                true
            }
        }
    }

    /// The echelon basis as a matrix over `domain`.
    pub fn basis_matrix(&self, domain: ScalarDomain) -> Matrix {
        let rows: Vec<Vec<Scalar>> = match &self.rows {
            Rows::Fp { rows, .. } => rows.iter().map(|(_, r)| r.iter().map(|&x| domain.from_i64(x as i64)).collect()).collect(),
            Rows::Q { rows } => rows.iter().map(|(_, r)| r.iter().map(|x| domain.from_bigint(x)).collect()).collect(),
        };
        if rows.is_empty() {
            return Matrix::zeros(domain, 1, self.width);
        }
        Matrix::from_rows(domain, rows).expect("uniform rows")
    }
}
