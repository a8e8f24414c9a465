//! Exact rational matrices, F_p rank and orthogonal complements under a
//! diagonal pairing.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::ffield::PrimeField;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                got: bad.len(),
            });
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Rank by exact elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(None)
    }

    /// Row-reduces in place, optionally applying the same operations to `rhs`.
    /// Returns the rank. Pivots are the first nonzero entry in column order.
    fn eliminate(&mut self, mut rhs: Option<&mut RationalMatrix>) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(piv, rank);
            if let Some(b) = rhs.as_deref_mut() {
                b.swap_rows(piv, rank);
            }
            let inv = self[(rank, col)].recip();
            self.scale_row(rank, &inv);
            if let Some(b) = rhs.as_deref_mut() {
                b.scale_row(rank, &inv);
            }
            for r in 0..self.rows {
                if r == rank || self[(r, col)].is_zero() {
                    continue;
                }
                let f = self[(r, col)].clone();
                self.axpy_row(r, rank, &f);
                if let Some(b) = rhs.as_deref_mut() {
                    b.axpy_row(r, rank, &f);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: &BigRational) {
        for j in 0..self.cols {
            let v = &mut self.data[r * self.cols + j];
            if !v.is_zero() {
                *v *= s;
            }
        }
    }

    /// row[dst] -= f * row[src]
    fn axpy_row(&mut self, dst: usize, src: usize, f: &BigRational) {
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                self.data[dst * self.cols + j] -= f * s;
            }
        }
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Solves `A·X = B` exactly for square invertible `A`.
pub fn solve_exact(a: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix> {
    if a.rows != a.cols {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            got: a.cols,
        });
    }
    if b.rows != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            got: b.rows,
        });
    }
    let mut lhs = a.clone();
    let mut rhs = b.clone();
    let rank = lhs.eliminate(Some(&mut rhs));
    if rank < a.rows {
        return Err(Error::Singular { rank, size: a.rows });
    }
    Ok(rhs)
}

/// Row echelon reduction over `F_p`; returns the pivot columns and leaves
/// `m` in reduced form.
fn rref_fp(m: &mut [Vec<u32>], f: &PrimeField) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(piv, r);
        let inv = f.inv_raw(m[r][c]);
        for v in m[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in 0..cols {
                    let sub = f.mul(factor, m[r][j]);
                    m[i][j] = f.sub(m[i][j], sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Rank of a matrix over `F_p` (entries already reduced).
pub fn rank_fp(m: &[Vec<u32>], f: &PrimeField) -> usize {
    let mut work = m.to_vec();
    rref_fp(&mut work, f).len()
}

/// Basis of the null space `{y : m·y = 0}` over `F_p`.
fn null_space_fp(m: &[Vec<u32>], n: usize, f: &PrimeField) -> Vec<Vec<u32>> {
    let mut work = m.to_vec();
    let pivots = if work.is_empty() {
        Vec::new()
    } else {
        rref_fp(&mut work, f)
    };
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u32; n];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(work[r][fc]);
            }
            v
        })
        .collect()
}

/// A subspace of `F_p^n` given by an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpSubspace {
    field: PrimeField,
    n: usize,
    basis: Vec<Vec<u32>>,
}

impl FpSubspace {
    pub fn new(field: &PrimeField, n: usize, basis: Vec<Vec<u32>>) -> Result<Self> {
        if let Some(bad) = basis.iter().find(|b| b.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        let basis: Vec<Vec<u32>> = basis
            .into_iter()
            .map(|b| b.into_iter().map(|c| c % field.p()).collect())
            .collect();
        if rank_fp(&basis, field) != basis.len() {
            return Err(Error::InvalidArgument("subspace basis is linearly dependent".into()));
        }
        Ok(FpSubspace {
            field: field.clone(),
            n,
            basis,
        })
    }

    /// Span of the unit vectors at the set positions of `mask`.
    pub fn coordinate(field: &PrimeField, mask: &[bool]) -> Self {
        let n = mask.len();
        let basis = mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(k, _)| {
                let mut v = vec![0u32; n];
                v[k] = 1;
                v
            })
            .collect();
        FpSubspace {
            field: field.clone(),
            n,
            basis,
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    /// Coordinate mask if the subspace is a coordinate span.
    pub fn coordinate_mask(&self) -> Option<Vec<bool>> {
        let mut mask = vec![false; self.n];
        let mut rows = self.basis.clone();
        rref_fp(&mut rows, &self.field);
        for row in &rows {
            let nz: Vec<usize> = (0..self.n).filter(|&k| row[k] != 0).collect();
            if nz.len() != 1 {
                return None;
            }
            mask[nz[0]] = true;
        }
        Some(mask)
    }

    /// Whether two subspaces coincide.
    pub fn same_as(&self, other: &Self) -> bool {
        if self.n != other.n || self.dim() != other.dim() {
            return false;
        }
        let mut both = self.basis.clone();
        both.extend(other.basis.iter().cloned());
        rank_fp(&both, &self.field) == self.dim()
    }
}

/// `{y : Σ_k w_k x_k y_k = 0 for all x ∈ W}`. Weights are residues mod p and
/// must all be nonzero.
pub fn orth_complement(w: &FpSubspace, weights: &[u32]) -> Result<FpSubspace> {
    if weights.len() != w.n {
        return Err(Error::DimensionMismatch {
            expected: w.n,
            got: weights.len(),
        });
    }
    if weights.iter().any(|&c| c % w.field.p() == 0) {
        return Err(Error::BadPrime {
            rep: "pairing".into(),
            p: w.field.p() as u64,
        });
    }
    let f = &w.field;
    let rows: Vec<Vec<u32>> = w
        .basis
        .iter()
        .map(|b| b.iter().zip(weights).map(|(&x, &c)| f.mul(x, c)).collect())
        .collect();
    let basis = null_space_fp(&rows, w.n, f);
    Ok(FpSubspace {
        field: f.clone(),
        n: w.n,
        basis,
    })
}
