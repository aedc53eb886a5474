//! Row reduction, rank, kernels and linear solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Matrix;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Reduced row echelon form with the pivot column of each nonzero row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    /// Gauss-Jordan elimination, always choosing the leftmost available pivot
    /// and the topmost nonzero row for it.
    pub fn rref(&self) -> Echelon {
        match self.field {
            FieldSpec::Prime(p) => rref_residues(self, p as u64),
            FieldSpec::Rationals => rref_fraction_free(self).unwrap_or_else(|| self.rref_scalar()),
        }
    }

    /// Field-generic elimination on [`Scalar`] entries.
    pub(crate) fn rref_scalar(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Exact rank. Over `Q` this clears denominators row by row and runs
    /// fraction-free (Bareiss) elimination on integers; over `F_p` it is
    /// ordinary Gaussian elimination on machine residues.
    pub fn rank(&self) -> usize {
        match self.field {
            FieldSpec::Rationals => bareiss_rank(self),
            FieldSpec::Prime(p) => modular_rank(self, p as u64),
        }
    }

    /// Rank read off the Gauss-Jordan form; an independent route to [`Matrix::rank`].
    pub fn rank_gauss_jordan(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel as column vectors, one per free column in
    /// increasing order; the free variable is set to 1 and the others to 0.
    pub fn kernel_basis(&self) -> Vec<Matrix> {
        let Echelon { reduced, pivots } = self.rref();
        let f = self.field;
        let mut basis = Vec::new();
        let mut pivot_iter = pivots.iter().peekable();
        let mut free = Vec::new();
        for c in 0..self.cols {
            if pivot_iter.peek() == Some(&&c) {
                pivot_iter.next();
            } else {
                free.push(c);
            }
        }
        for &fc in &free {
            let mut v = vec![f.zero(); self.cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = reduced.get(r, fc).neg();
            }
            basis.push(Matrix::column_vector(f, v).expect("entries from one field"));
        }
        basis
    }

    /// One solution `x` of `self * x = b` (free variables set to zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if self.field != b.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "system has {} equations but right-hand side has {} rows",
                self.rows, b.rows
            )));
        }
        let aug = Matrix::hstack(&[self, b])?;
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, reduced.get(r, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.require_square()?;
        let id = Matrix::identity(self.field, n);
        let aug = Matrix::hstack(&[self, &id])?;
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::NotInvertible);
        }
        Ok(reduced.block(0, n, n, n))
    }

    /// Least `k` with `self^k = 0`, or `None` if the matrix is not nilpotent.
    pub fn nilpotency_index(&self) -> Result<Option<usize>> {
        let n = self.require_square()?;
        if !self.is_nilpotent()? {
            return Ok(None);
        }
        let mut power = Matrix::identity(self.field, n);
        for k in 1..=n.max(1) {
            power = power.mul(self)?;
            if power.is_zero() {
                return Ok(Some(k));
            }
        }
        Ok(Some(if n == 0 { 0 } else { n }))
    }

    /// `self^n = 0`, tested by repeated squaring.
    pub fn is_nilpotent(&self) -> Result<bool> {
        self.require_square()?;
        // Rows spanning im(N^k), transposed so that applying N is a right
        // multiplication by N^T. Nilpotent iff the rank reaches zero.
        let nt = self.transpose();
        let mut span = nt.clone();
        let mut rank = usize::MAX;
        loop {
            let ech = span.rref();
            let r = ech.pivots.len();
            if r == 0 {
                return Ok(true);
            }
            if r >= rank {
                return Ok(false);
            }
            rank = r;
            span = ech.reduced.block(0, 0, r, self.cols).mul(&nt)?;
        }
    }

    /// Coefficients of `det(xI - self)` from the leading `1` down to the
    /// constant term, computed with Berkowitz's division-free recurrence.
    pub fn characteristic_polynomial(&self) -> Result<Vec<Scalar>> {
        let n = self.require_square()?;
        let f = self.field;
        let mut coeffs = vec![f.one()];
        for r in 1..=n {
            let k = r - 1;
            let lead = self.block(0, 0, k, k);
            let row = self.block(k, 0, 1, k);
            let col = self.block(0, k, k, 1);
            let mut toeplitz = vec![f.one(), self.get(k, k).neg()];
            let mut v = col;
            for _ in 2..=r {
                let rs = row.mul(&v)?;
                toeplitz.push(rs.get(0, 0).neg());
                v = lead.mul(&v)?;
            }
            let mut next = vec![f.zero(); r + 1];
            for (i, out) in next.iter_mut().enumerate() {
                for (j, c) in coeffs.iter().enumerate() {
                    if i >= j {
                        *out = &*out + &(&toeplitz[i - j] * c);
                    }
                }
            }
            coeffs = next;
        }
        Ok(coeffs)
    }
}

/// Rows scaled by the lcm of their denominators.
fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, s| {
                acc.lcm(s.to_rational().expect("rational entry").denom())
            });
            row.iter()
                .map(|s| {
                    let r = s.to_rational().expect("rational entry");
                    r.numer() * (&lcm / r.denom())
                })
                .collect()
        })
        .collect()
}

/// Fraction-free Gauss-Jordan on integer rows: every row other than the
/// pivot row becomes `(p a_ij - a_ic a_rj) / prev`. The divisions are exact
/// in theory; `None` is returned if one is not, and the caller falls back to
/// rational elimination.
fn rref_fraction_free(m: &Matrix) -> Option<Echelon> {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().expect("row r exists");
        let pv = pivot_row[c].clone();
        for row in head.iter_mut().chain(tail.iter_mut()) {
            let factor = row[c].clone();
            for j in 0..cols {
                let mut v = &pv * &row[j];
                if !factor.is_zero() && !pivot_row[j].is_zero() {
                    v -= &factor * &pivot_row[j];
                }
                let (q, rem) = v.div_rem(&prev);
                if !rem.is_zero() {
                    return None;
                }
                row[j] = q;
            }
        }
        prev = pv;
        pivots.push(c);
        r += 1;
    }
    let f = m.field;
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in a.iter().enumerate() {
        if i < r {
            let d = &row[pivots[i]];
            data.extend(
                row.iter()
                    .map(|x| Scalar::Rational(num_rational::BigRational::new(x.clone(), d.clone()))),
            );
        } else {
            data.extend((0..cols).map(|_| f.zero()));
        }
    }
    Some(Echelon {
        reduced: Matrix::new(f, rows, cols, data).expect("shape"),
        pivots,
    })
}

fn rref_residues(m: &Matrix, p: u64) -> Echelon {
    let mut a: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|s| s.residue_value().expect("residue entry") as u64)
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = mod_inv(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            let factor = a[i][c];
            if i == r || factor == 0 {
                continue;
            }
            for j in c..cols {
                a[i][j] = (a[i][j] + p - factor * a[r][j] % p) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let data = a
        .into_iter()
        .flatten()
        .map(|value| Scalar::Residue {
            value: value as u32,
            modulus: p as u32,
        })
        .collect();
    Echelon {
        reduced: Matrix::new(m.field, rows, cols, data).expect("shape"),
        pivots,
    }
}

fn bareiss_rank(m: &Matrix) -> usize {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division must be exact");
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

fn modular_rank(m: &Matrix, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|s| s.residue_value().expect("residue entry") as u64)
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = mod_inv(a[r][c], p);
        for j in c..cols {
            a[r][j] = a[r][j] * inv % p;
        }
        for i in r + 1..rows {
            let factor = a[i][c];
            if factor == 0 {
                continue;
            }
            for j in c..cols {
                a[i][j] = (a[i][j] + p - factor * a[r][j] % p) % p;
            }
        }
        r += 1;
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Incrementally built echelon basis of a span of vectors.
///
/// Each stored row has a leading 1 in its pivot column and zeros in the
/// pivot columns of all earlier rows, so a single sweep in insertion order
/// reduces any candidate vector.
#[derive(Clone, Debug)]
pub struct EchelonSpan {
    field: FieldSpec,
    len: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl EchelonSpan {
    pub fn new(field: FieldSpec, len: usize) -> Self {
        EchelonSpan {
            field,
            len,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current basis; returns the residue.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let factor = v[*pc].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&factor * y);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v` to the span; returns `true` when it was independent.
    pub fn insert(&mut self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.len {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in a span of length {}",
                v.len(),
                self.len
            )));
        }
        if v.iter().any(|s| s.field() != self.field) {
            return Err(Error::FieldMismatch);
        }
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|s| !s.is_zero()) else {
            return Ok(false);
        };
        let inv = r[pc].inv()?;
        for x in r.iter_mut() {
            *x = &*x * &inv;
        }
        self.rows.push((pc, r));
        Ok(true)
    }
}

/// Dimension of the span of the given column vectors (or flattened matrices).
pub fn span_dimension(vectors: &[Matrix]) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let len = first.rows() * first.cols();
    let mut span = EchelonSpan::new(first.field(), len);
    for v in vectors {
        span.insert(v.entries())?;
    }
    Ok(span.dim())
}

/// Basis of `span(b1) ∩ span(b2)` for column vectors of a common length.
///
/// Solves `B1 c = B2 d` through the kernel of `[B1 | -B2]` and maps each
/// kernel vector to `B1 c`; the images are then thinned to a basis.
pub fn subspace_intersection(b1: &[Matrix], b2: &[Matrix]) -> Result<Vec<Matrix>> {
    let (Some(first), Some(_)) = (b1.first(), b2.first()) else {
        return Ok(Vec::new());
    };
    let field = first.field();
    let n = first.rows();
    for v in b1.iter().chain(b2) {
        if v.field() != field {
            return Err(Error::FieldMismatch);
        }
        if v.rows() != n || v.cols() != 1 {
            return Err(Error::DimensionMismatch(
                "intersection expects column vectors of one length".into(),
            ));
        }
    }
    let left: Vec<&Matrix> = b1.iter().collect();
    let neg_right: Vec<Matrix> = b2.iter().map(Matrix::neg).collect();
    let mut parts = left.clone();
    parts.extend(neg_right.iter());
    let stacked = Matrix::hstack(&parts)?;
    let b1_mat = Matrix::hstack(&left)?;
    let mut span = EchelonSpan::new(field, n);
    let mut out = Vec::new();
    for k in stacked.kernel_basis() {
        let coeffs = k.block(0, 0, b1.len(), 1);
        let image = b1_mat.mul(&coeffs)?;
        if span.insert(image.entries())? {
            out.push(image);
        }
    }
    Ok(out)
}
