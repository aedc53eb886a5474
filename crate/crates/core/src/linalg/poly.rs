//! Univariate and multivariate polynomials with exact coefficients.

use std::collections::BTreeMap;

use super::Matrix;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Polynomial in one variable, `coeffs[i]` being the coefficient of `t^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: FieldSpec, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let mut p = UniPoly { field, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn from_ints(field: FieldSpec, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| field.from_i64(c)).collect();
        Self::new(field, coeffs).expect("coefficients from one field")
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn has_zero_constant(&self) -> bool {
        self.coeffs.first().is_none_or(Scalar::is_zero)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Result<Matrix> {
        let n = m.require_square()?;
        if m.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let mut acc = Matrix::zeros(self.field, n, n);
        let id = Matrix::identity(self.field, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m)?.add(&id.scale(c)?)?;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &UniPoly) -> Result<UniPoly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        UniPoly::new(self.field, coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn mul(&self, other: &UniPoly) -> Result<UniPoly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return UniPoly::new(self.field, Vec::new());
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        UniPoly::new(self.field, coeffs)
    }
}

/// Sparse polynomial in `nvars` variables; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        MultiPoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: FieldSpec, nvars: usize, c: Scalar) -> Result<Self> {
        let mut p = Self::zero(field, nvars);
        p.add_term(vec![0; nvars], c)?;
        Ok(p)
    }

    /// The variable `x_i`.
    pub fn var(field: FieldSpec, nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::DimensionMismatch(format!(
                "variable {i} out of {nvars}"
            )));
        }
        let mut exp = vec![0; nvars];
        exp[i] = 1;
        let mut p = Self::zero(field, nvars);
        p.add_term(exp, field.one())?;
        Ok(p)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * x^exp` in place.
    pub fn add_term(&mut self, exp: Vec<u32>, c: Scalar) -> Result<()> {
        if exp.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "exponent of length {} in {} variables",
                exp.len(),
                self.nvars
            )));
        }
        if c.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let sum = match self.terms.get(&exp) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, sum);
        }
        Ok(())
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: &Scalar) -> Result<MultiPoly> {
        if s.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let mut out = Self::zero(self.field, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2)?;
            }
        }
        Ok(out)
    }

    fn check_point(&self, point: &[Scalar]) -> Result<()> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        if point.iter().any(|s| s.field() != self.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        self.check_point(point)?;
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term = &term * &x.pow(k as u64);
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to `x_i`; the exponent factor
    /// is reduced into the field, so `d/dx x^p = 0` over `F_p`.
    pub fn derivative(&self, i: usize) -> Result<MultiPoly> {
        if i >= self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "variable {i} out of {}",
                self.nvars
            )));
        }
        let mut out = Self::zero(self.field, self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c.scale_int(e[i] as i64))?;
        }
        Ok(out)
    }
}

/// Values of `polys` at `point` together with the Jacobian
/// (one row per polynomial, one column per variable).
pub fn poly_eval_jacobian(polys: &[MultiPoly], point: &[Scalar]) -> Result<(Vec<Scalar>, Matrix)> {
    let field = point
        .first()
        .map(Scalar::field)
        .or_else(|| polys.first().map(MultiPoly::field))
        .ok_or_else(|| Error::DimensionMismatch("no polynomials and no point".into()))?;
    let mut values = Vec::with_capacity(polys.len());
    let mut jac = Matrix::zeros(field, polys.len(), point.len());
    for (r, p) in polys.iter().enumerate() {
        values.push(p.eval(point)?);
        for i in 0..point.len() {
            jac.set(r, i, p.derivative(i)?.eval(point)?);
        }
    }
    Ok((values, jac))
}
