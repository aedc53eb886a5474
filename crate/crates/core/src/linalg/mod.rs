//! Dense exact matrices over a [`FieldSpec`].
//!
//! Entries are stored row-major. Every matrix carries its field and all
//! binary operations check that both operands agree on it.

mod elim;
mod poly;

pub use elim::{
    span_dimension, subspace_intersection, Echelon, EchelonSpan,
};
pub use poly::{poly_eval_jacobian, MultiPoly, UniPoly};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|s| s.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_ints(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|row| row.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, data).expect("rectangular integer rows")
    }

    /// Column vector `e_i` of length `n` (0-based index).
    pub fn unit_vector(field: FieldSpec, n: usize, i: usize) -> Self {
        let mut v = Self::zeros(field, n, 1);
        v.data[i] = field.one();
        v
    }

    /// The matrix unit `e_i e_j^T` of size `rows x cols` (0-based indices).
    pub fn unit(field: FieldSpec, rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        m.data[i * cols + j] = field.one();
        m
    }

    pub fn column_vector(field: FieldSpec, entries: Vec<Scalar>) -> Result<Self> {
        let n = entries.len();
        Self::new(field, n, 1, entries)
    }

    pub fn random<R: Rng + ?Sized>(field: FieldSpec, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Uniformly random invertible matrix, by rejection.
    pub fn random_invertible<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Self {
        loop {
            let p = Self::random(field, n, n, rng);
            if p.rank() == n {
                return p;
            }
        }
    }

    /// `p^{-1} self p`.
    pub fn conjugate(&self, p: &Matrix) -> Result<Matrix> {
        p.inverse()?.mul(self)?.mul(p)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "entry from a different field");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Matrix {
        let data = (0..self.rows).map(|i| self.get(i, j).clone()).collect();
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: 1,
            data,
        }
    }

    pub fn columns(&self) -> Vec<Matrix> {
        (0..self.cols).map(|j| self.column(j)).collect()
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

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = match self.field {
            FieldSpec::Prime(p) => mul_residues(self, other, p as u64),
            FieldSpec::Rationals => mul_rationals(self, other),
        };
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn scale(&self, s: &Scalar) -> Result<Matrix> {
        if s.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let data = self.data.iter().map(|a| a * s).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(Scalar::neg).collect();
        Matrix { data, ..*self }
    }

    pub fn pow(&self, k: u32) -> Result<Matrix> {
        let n = self.require_square()?;
        let mut acc = Matrix::identity(self.field, n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn commutes_with(&self, other: &Matrix) -> Result<bool> {
        Ok(self.commutator(other)?.is_zero())
    }

    pub fn trace(&self) -> Result<Scalar> {
        let n = self.require_square()?;
        Ok((0..n).fold(self.field.zero(), |acc, i| &acc + self.get(i, i)))
    }

    /// Row-major flattening, used to treat matrices as vectors of length `rows * cols`.
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_vector(field: FieldSpec, rows: usize, cols: usize, v: Vec<Scalar>) -> Result<Matrix> {
        Self::new(field, rows, cols, v)
    }

    /// Copy of the `rows x cols` block at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        let mut data = Vec::with_capacity(rows * cols);
        for i in r0..r0 + rows {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c0 + cols]);
        }
        Matrix {
            field: self.field,
            rows,
            cols,
            data,
        }
    }

    /// Overwrites the block at `(r0, c0)` with `b`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        assert_eq!(b.field, self.field, "block from a different field");
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = b.get(i, j).clone();
            }
        }
    }

    pub fn hstack(parts: &[&Matrix]) -> Result<Matrix> {
        let first = parts
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty hstack".into()))?;
        if parts.iter().any(|p| p.rows != first.rows) {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        if parts.iter().any(|p| p.field != first.field) {
            return Err(Error::FieldMismatch);
        }
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(first.field, first.rows, cols);
        let mut c0 = 0;
        for p in parts {
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        Ok(out)
    }

    pub fn vstack(parts: &[&Matrix]) -> Result<Matrix> {
        let first = parts
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty vstack".into()))?;
        if parts.iter().any(|p| p.cols != first.cols) {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        if parts.iter().any(|p| p.field != first.field) {
            return Err(Error::FieldMismatch);
        }
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Matrix::zeros(first.field, rows, first.cols);
        let mut r0 = 0;
        for p in parts {
            out.set_block(r0, 0, p);
            r0 += p.rows;
        }
        Ok(out)
    }

    /// Block-diagonal matrix with the given square or rectangular blocks.
    pub fn direct_sum(field: FieldSpec, parts: &[Matrix]) -> Result<Matrix> {
        if parts.iter().any(|p| p.field != field) {
            return Err(Error::FieldMismatch);
        }
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            out.set_block(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        Ok(out)
    }

    /// Linear combination `sum coeffs[i] * mats[i]`; all matrices share a shape.
    pub fn linear_combination(coeffs: &[Scalar], mats: &[Matrix]) -> Result<Matrix> {
        let first = mats
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty combination".into()))?;
        if coeffs.len() != mats.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} matrices",
                coeffs.len(),
                mats.len()
            )));
        }
        let mut acc = Matrix::zeros(first.field, first.rows, first.cols);
        for (c, m) in coeffs.iter().zip(mats) {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&m.scale(c)?)?;
        }
        Ok(acc)
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

/// Dot products accumulated in `u64`, reduced only when the next product
/// could overflow.
fn mul_residues(a: &Matrix, b: &Matrix, p: u64) -> Vec<Scalar> {
    let val = |s: &Scalar| s.residue_value().expect("residue") as u64;
    let bv: Vec<u64> = b.data.iter().map(val).collect();
    let limit = u64::MAX - (p - 1) * (p - 1);
    let mut out = Vec::with_capacity(a.rows * b.cols);
    let mut row = vec![0u64; b.cols];
    for i in 0..a.rows {
        row.iter_mut().for_each(|x| *x = 0);
        for k in 0..a.cols {
            let x = val(a.get(i, k));
            if x == 0 {
                continue;
            }
            for (j, acc) in row.iter_mut().enumerate() {
                *acc += x * bv[k * b.cols + j];
                if *acc >= limit {
                    *acc %= p;
                }
            }
        }
        out.extend(row.iter().map(|&x| Scalar::Residue {
            value: (x % p) as u32,
            modulus: p as u32,
        }));
    }
    out
}

/// Integer numerators over a common denominator.
fn common_denominator<'a>(entries: impl Iterator<Item = &'a Scalar> + Clone) -> (Vec<BigInt>, BigInt) {
    let rat = |s: &'a Scalar| s.to_rational().expect("rational");
    let den = entries
        .clone()
        .fold(BigInt::one(), |acc, s| acc.lcm(rat(s).denom()));
    let nums = entries
        .map(|s| {
            let r = rat(s);
            r.numer() * (&den / r.denom())
        })
        .collect();
    (nums, den)
}

/// Each row of `a` and column of `b` is scaled to integers, so every entry
/// of the product costs integer multiplications and a single reduction.
fn mul_rationals(a: &Matrix, b: &Matrix) -> Vec<Scalar> {
    let rows: Vec<(Vec<BigInt>, BigInt)> = (0..a.rows)
        .map(|i| common_denominator(a.row(i).iter()))
        .collect();
    let cols: Vec<(Vec<BigInt>, BigInt)> = (0..b.cols)
        .map(|j| common_denominator((0..b.rows).map(|k| b.get(k, j))))
        .collect();
    let mut out = Vec::with_capacity(a.rows * b.cols);
    for (rn, rd) in &rows {
        for (cn, cd) in &cols {
            let mut acc = BigInt::zero();
            for (x, y) in rn.iter().zip(cn) {
                if !x.is_zero() && !y.is_zero() {
                    acc += x * y;
                }
            }
            out.push(Scalar::Rational(BigRational::new(acc, rd * cd)));
        }
    }
    out
}
