//! Closure dimensions, reduction transforms, 1-regular samplers, parameter
//! families and the certificates built from them.

use rand::Rng;
use serde_json::{json, Value};

use crate::algebra::{algebra_dim_closure, NilTuple};
use crate::certificate::{Certificate, Verdict};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::io::{matrix_from_json_at, matrix_to_json, field_from_json};
use crate::jordan::{centralizer_dim_formula, is_r_regular, jordan_block, jordan_matrix, Partition};
use crate::linalg::{Matrix, MultiPoly, UniPoly};
use crate::parallel::{map_trials, trial_rng};

/// Number of random span combinations tried per parameter value in
/// [`curve_verify`], in addition to the first matrix.
pub const SPAN_COMBINATIONS: usize = 16;

/// `(n + d - 1)(n - 1)`.
pub fn r1_closure_dim(d: usize, n: usize) -> usize {
    (n + d).saturating_sub(1) * n.saturating_sub(1)
}

/// `dim C(A) - dim ker A + n - 1` for `A = J_λ`.
pub fn d2_closure_dim(lambda: &Partition) -> usize {
    centralizer_dim_formula(lambda) + lambda.n() - lambda.len() - 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TupleTransform {
    /// `A_i ↦ P^{-1} A_i P`.
    Conjugate(Matrix),
    /// `A_i ↦ Σ_j g_{ji} A_j` for invertible `g`.
    SpanChange(Matrix),
    /// `A_i ↦ A_i - p_i(A_1)` for `i ≥ 2`, each `p_i` without constant term.
    PolyShift(Vec<UniPoly>),
    Transpose,
    /// `A_i ↦ Q^{-1} A_i^T Q`, requiring `Q^{-1} A_1^T Q = A_1`.
    TwistedTranspose(Matrix),
}

impl TupleTransform {
    pub fn apply(&self, t: &NilTuple) -> Result<NilTuple> {
        let (f, n) = (t.field(), t.n());
        let mats = t.mats();
        let out: Vec<Matrix> = match self {
            TupleTransform::Conjugate(p) => {
                mats.iter().map(|a| a.conjugate(p)).collect::<Result<_>>()?
            }
            TupleTransform::SpanChange(g) => {
                let d = t.d();
                if g.rows() != d || g.cols() != d {
                    return Err(Error::DimensionMismatch(format!("g must be {d}x{d}")));
                }
                g.inverse()?;
                (0..d)
                    .map(|i| {
                        let coeffs: Vec<Scalar> = (0..d).map(|j| g.get(j, i).clone()).collect();
                        Matrix::linear_combination(&coeffs, mats)
                    })
                    .collect::<Result<_>>()?
            }
            TupleTransform::PolyShift(polys) => {
                if polys.len() + 1 != t.d() {
                    return Err(Error::DimensionMismatch(format!(
                        "expected {} polynomials, got {}",
                        t.d().saturating_sub(1),
                        polys.len()
                    )));
                }
                if polys.iter().any(|p| !p.has_zero_constant()) {
                    return Err(Error::ConstantTerm);
                }
                let mut out = vec![mats[0].clone()];
                for (a, p) in mats[1..].iter().zip(polys) {
                    out.push(a.sub(&p.eval_matrix(&mats[0])?)?);
                }
                out
            }
            TupleTransform::Transpose => mats.iter().map(Matrix::transpose).collect(),
            TupleTransform::TwistedTranspose(q) => {
                let first = mats
                    .first()
                    .ok_or_else(|| Error::Precondition("empty tuple".into()))?;
                if first.transpose().conjugate(q)? != *first {
                    return Err(Error::BadQ);
                }
                mats.iter()
                    .map(|a| a.transpose().conjugate(q))
                    .collect::<Result<_>>()?
            }
        };
        NilTuple::new(f, n, out)
    }

    pub fn inverse(&self) -> Result<TupleTransform> {
        Ok(match self {
            TupleTransform::Conjugate(p) => TupleTransform::Conjugate(p.inverse()?),
            TupleTransform::SpanChange(g) => TupleTransform::SpanChange(g.inverse()?),
            TupleTransform::PolyShift(ps) => {
                TupleTransform::PolyShift(ps.iter().map(UniPoly::neg).collect())
            }
            TupleTransform::Transpose => TupleTransform::Transpose,
            TupleTransform::TwistedTranspose(q) => TupleTransform::TwistedTranspose(q.transpose()),
        })
    }
}

/// The anti-diagonal permutation matrix, which conjugates `J_n^T` to `J_n`.
pub fn flip_matrix(f: FieldSpec, n: usize) -> Matrix {
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n {
        m.set(i, n - 1 - i, f.one());
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairTransform {
    Swap,
    /// `(B, C) ↦ (B, p(A, B) + C)` for `p(t, u)` without constant term.
    Shift(MultiPoly),
}

fn check_n2(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<()> {
    let n = a.require_square()?;
    for (name, m) in [("B", b), ("C", c)] {
        if m.rows() != n || m.cols() != n || m.field() != a.field() {
            return Err(Error::NotInN2(format!("{name} has the wrong shape or field")));
        }
        if !m.commutes_with(a)? {
            return Err(Error::NotInN2(format!("{name} does not commute with A")));
        }
        if !m.is_nilpotent()? {
            return Err(Error::NotInN2(format!("{name} is not nilpotent")));
        }
    }
    if !b.commutes_with(c)? {
        return Err(Error::NotInN2("B and C do not commute".into()));
    }
    Ok(())
}

/// `Σ c_{ij} A^i B^j` for a polynomial in two variables.
pub fn eval_bivariate(p: &MultiPoly, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if p.nvars() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected a polynomial in 2 variables, got {}",
            p.nvars()
        )));
    }
    let n = a.require_square()?;
    let mut acc = Matrix::zeros(a.field(), n, n);
    for (e, c) in p.terms() {
        let m = a.pow(e[0])?.mul(&b.pow(e[1])?)?;
        acc = acc.add(&m.scale(c)?)?;
    }
    Ok(acc)
}

impl PairTransform {
    pub fn apply(&self, a: &Matrix, pair: (&Matrix, &Matrix)) -> Result<(Matrix, Matrix)> {
        let (b, c) = pair;
        check_n2(a, b, c)?;
        let out = match self {
            PairTransform::Swap => (c.clone(), b.clone()),
            PairTransform::Shift(p) => {
                let zero_exp = vec![0u32; p.nvars()];
                if p.terms().get(&zero_exp).is_some_and(|c| !c.is_zero()) {
                    return Err(Error::ConstantTerm);
                }
                (b.clone(), eval_bivariate(p, a, b)?.add(c)?)
            }
        };
        check_n2(a, &out.0, &out.1)
            .map_err(|e| Error::Invariant(format!("transform left N2(A): {e}")))?;
        Ok(out)
    }

    pub fn inverse(&self) -> PairTransform {
        match self {
            PairTransform::Swap => PairTransform::Swap,
            PairTransform::Shift(p) => PairTransform::Shift(p.neg()),
        }
    }
}

/// `(A, A p_1(A), …, A p_{d-1}(A))` with `A = P^{-1} J_n P`.
pub fn r1_phi(p: &Matrix, polys: &[UniPoly]) -> Result<NilTuple> {
    let n = p.require_square()?;
    let f = p.field();
    let a = jordan_block(f, n).conjugate(p)?;
    let mut mats = vec![a.clone()];
    for q in polys {
        mats.push(a.mul(&q.eval_matrix(&a)?)?);
    }
    NilTuple::new(f, n, mats)
}

/// Random polynomial of degree at most `n - 2`.
pub fn random_r1_poly<R: Rng + ?Sized>(f: FieldSpec, n: usize, rng: &mut R) -> UniPoly {
    let coeffs = (0..n.saturating_sub(1)).map(|_| f.random(rng)).collect();
    UniPoly::new(f, coeffs).expect("one field")
}

/// Random element of `R_1(d, n)`.
pub fn sample_r1(d: usize, n: usize, seed: u64, f: FieldSpec) -> Result<NilTuple> {
    if d == 0 || n < 2 {
        return Err(Error::BadSize(format!("need d >= 1 and n >= 2, got d={d}, n={n}")));
    }
    let mut rng = trial_rng(seed, 0);
    let p = Matrix::random_invertible(f, n, &mut rng);
    let polys: Vec<UniPoly> = (1..d).map(|_| random_r1_poly(f, n, &mut rng)).collect();
    r1_phi(&p, &polys)
}

/// `d` matrices whose entries are polynomials in one parameter `t`,
/// stored as coefficient matrices: `coeffs[i][k]` multiplies `t^k` in the
/// `i`-th matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamFamily {
    field: FieldSpec,
    n: usize,
    coeffs: Vec<Vec<Matrix>>,
}

impl ParamFamily {
    pub fn new(field: FieldSpec, n: usize, coeffs: Vec<Vec<Matrix>>) -> Result<Self> {
        for (i, cs) in coeffs.iter().enumerate() {
            if cs.is_empty() {
                return Err(Error::Precondition(format!("matrix {i} has no coefficients")));
            }
            for m in cs {
                if m.field() != field {
                    return Err(Error::FieldMismatch);
                }
                if m.rows() != n || m.cols() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "coefficient of matrix {i} is {}x{}, expected {n}x{n}",
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        Ok(ParamFamily { field, n, coeffs })
    }

    pub fn constant(t: &NilTuple) -> Self {
        let coeffs = t.mats().iter().map(|m| vec![m.clone()]).collect();
        ParamFamily {
            field: t.field(),
            n: t.n(),
            coeffs,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.coeffs.len()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().map(|c| c.len() - 1).max().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Vec<Matrix>] {
        &self.coeffs
    }

    /// Appends `extra` constant zero matrices.
    pub fn extend_by_zeros(mut self, extra: usize) -> Self {
        let z = Matrix::zeros(self.field, self.n, self.n);
        self.coeffs.extend((0..extra).map(|_| vec![z.clone()]));
        self
    }

    pub fn eval(&self, t: &Scalar) -> Result<Vec<Matrix>> {
        self.coeffs
            .iter()
            .map(|cs| {
                // Horner
                let mut acc = Matrix::zeros(self.field, self.n, self.n);
                for c in cs.iter().rev() {
                    acc = acc.scale(t)?.add(c)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Vec<Value>> = self
            .coeffs
            .iter()
            .map(|cs| cs.iter().map(matrix_to_json).collect())
            .collect();
        json!({
            "field": self.field,
            "n": self.n,
            "d": self.d(),
            "degree": self.degree(),
            "coeffs": coeffs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let schema = |path: &str, msg: &str| Error::Schema {
            path: path.into(),
            msg: msg.into(),
        };
        let f = field_from_json(v.get("field").ok_or_else(|| schema("field", "missing"))?, "field")?;
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| schema("n", "expected a nonnegative integer"))? as usize;
        let arr = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| schema("coeffs", "expected an array"))?;
        let mut coeffs = Vec::with_capacity(arr.len());
        for (i, cs) in arr.iter().enumerate() {
            let cs = cs
                .as_array()
                .ok_or_else(|| schema(&format!("coeffs[{i}]"), "expected an array"))?;
            let mats = cs
                .iter()
                .enumerate()
                .map(|(k, m)| matrix_from_json_at(m, &format!("coeffs[{i}][{k}]"), Some(f)))
                .collect::<Result<Vec<_>>>()?;
            coeffs.push(mats);
        }
        if let Some(d) = v.get("d").and_then(Value::as_u64) {
            if d as usize != coeffs.len() {
                return Err(schema("d", "does not match the number of matrices"));
            }
        }
        ParamFamily::new(f, n, coeffs).map_err(|e| match e {
            Error::Schema { .. } => e,
            other => schema("coeffs", &other.to_string()),
        })
    }
}

/// `A(t) = J_λ + t E`, where `E` joins the last row of each Jordan block to
/// the first column of the next.
pub fn regularization_family(lambda: &Partition, f: FieldSpec) -> ParamFamily {
    let n = lambda.n();
    let mut e = Matrix::zeros(f, n, n);
    let mut offset = 0;
    for &part in &lambda.parts()[..lambda.len().saturating_sub(1)] {
        offset += part;
        e.set(offset - 1, offset, f.one());
    }
    ParamFamily {
        field: f,
        n,
        coeffs: vec![vec![jordan_matrix(lambda, f), e]],
    }
}

struct CurveTrial {
    commuting_nilpotent: bool,
    one_regular: bool,
}

/// Sampled evidence that `target` lies in the closure of the tuples with a
/// 1-regular element in their span, along the curve `fam`.
pub fn curve_verify(fam: &ParamFamily, target: &NilTuple, trials: u64, seed: u64) -> Result<Certificate> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let f = fam.field();
    let mut cert = Certificate::new("curve-verify", f, seed, trials);
    let base_ok = f == target.field()
        && fam.n() == target.n()
        && fam.d() == target.d()
        && fam.eval(&f.zero())? == target.mats();
    if !base_ok {
        cert.push("basepoint", "basepoint mismatch");
        cert.verdict = Verdict::Fail;
        return Ok(cert);
    }
    cert.push("basepoint", "exact");
    let results = map_trials(trials, seed, |_, rng| -> Result<CurveTrial> {
        let t = f.random_nonzero(rng);
        let mats = fam.eval(&t)?;
        let mut ok = true;
        for (i, m) in mats.iter().enumerate() {
            ok &= m.is_nilpotent()?;
            for other in &mats[i + 1..] {
                ok &= m.commutes_with(other)?;
            }
        }
        if !ok {
            return Ok(CurveTrial {
                commuting_nilpotent: false,
                one_regular: false,
            });
        }
        let mut regular = is_r_regular(&mats[0], 1)?;
        for _ in 0..SPAN_COMBINATIONS {
            if regular {
                break;
            }
            let coeffs: Vec<Scalar> = mats.iter().map(|_| f.random(rng)).collect();
            let comb = Matrix::linear_combination(&coeffs, &mats)?;
            regular = is_r_regular(&comb, 1)?;
        }
        Ok(CurveTrial {
            commuting_nilpotent: true,
            one_regular: regular,
        })
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let good = results.iter().filter(|r| r.commuting_nilpotent).count() as u64;
    let regular = results.iter().filter(|r| r.one_regular).count() as u64;
    cert.push("span_combinations", SPAN_COMBINATIONS);
    cert.push("samples_commuting_nilpotent", good);
    cert.push("samples_one_regular", regular);
    cert.verdict = if good < trials {
        Verdict::Fail
    } else if regular < trials {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(cert)
}

/// Pass iff `dim F[A_1, …, A_d] > n`, which keeps the tuple out of the
/// closure of the 1-regular locus.
pub fn certify_reducible(t: &NilTuple) -> Result<Certificate> {
    let dim = algebra_dim_closure(t.mats())?;
    let mut cert = Certificate::new("certify-reducible", t.field(), 0, 0);
    cert.push("n", t.n());
    cert.push("d", t.d());
    cert.push("algebra_dim", dim);
    if dim > t.n() {
        cert.verdict = Verdict::Pass;
        cert.push(
            "conclusion",
            "algebra dimension exceeds n: tuple is outside the closure of the 1-regular locus",
        );
    } else {
        cert.verdict = Verdict::Inconclusive;
        cert.push("conclusion", "no dimension obstruction");
    }
    Ok(cert)
}

/// Whether `(b, c) ∈ N_2(a)` has `dim F[a, b] = n`.
pub fn is_in_d2(a: &Matrix, b: &Matrix, c: &Matrix, lambda: &Partition) -> Result<bool> {
    if *a != jordan_matrix(lambda, a.field()) {
        return Err(Error::Precondition(format!("a is not the Jordan matrix of {lambda}")));
    }
    check_n2(a, b, c)?;
    Ok(algebra_dim_closure(&[a.clone(), b.clone()])? == lambda.n())
}
