//! Unital algebras generated by commuting matrices.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::jordan::{centralizer_basis, commutator_system, jordan_matrix, Partition};
use crate::linalg::{subspace_intersection, EchelonSpan, Matrix};

/// A tuple of pairwise commuting nilpotent `n x n` matrices, validated once
/// on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilTuple {
    field: FieldSpec,
    n: usize,
    mats: Vec<Matrix>,
}

impl NilTuple {
    pub fn new(field: FieldSpec, n: usize, mats: Vec<Matrix>) -> Result<Self> {
        check_square_family(field, n, &mats)?;
        for (i, m) in mats.iter().enumerate() {
            if !m.is_nilpotent()? {
                return Err(Error::Precondition(format!("matrix {i} is not nilpotent")));
            }
        }
        check_commuting(&mats)?;
        Ok(NilTuple { field, n, mats })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn into_mats(self) -> Vec<Matrix> {
        self.mats
    }
}

fn check_square_family(field: FieldSpec, n: usize, mats: &[Matrix]) -> Result<()> {
    for (i, m) in mats.iter().enumerate() {
        if m.field() != field {
            return Err(Error::FieldMismatch);
        }
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "matrix {i} is {}x{}, expected {n}x{n}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(())
}

fn check_commuting(mats: &[Matrix]) -> Result<()> {
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            if !mats[i].commutes_with(&mats[j])? {
                return Err(Error::NotCommuting(format!("matrices {i} and {j}")));
            }
        }
    }
    Ok(())
}

/// Field and size shared by a nonempty list of commuting square matrices.
fn commuting_family(mats: &[Matrix]) -> Result<(FieldSpec, usize)> {
    let first = mats
        .first()
        .ok_or_else(|| Error::Precondition("at least one generator is required".into()))?;
    let n = first.require_square()?;
    check_square_family(first.field(), n, mats)?;
    check_commuting(mats)?;
    Ok((first.field(), n))
}

/// Dimension of `F[A_1, …, A_d]` as the rank of the vectorized monomials
/// `A_1^{k_1} ⋯ A_d^{k_d}` with `0 ≤ k_i ≤ n-1`.
///
/// Monomials are enumerated in non-decreasing variable order, and a branch
/// is abandoned once its product vanishes since every extension of it is zero.
pub fn algebra_dim_monomial(mats: &[Matrix]) -> Result<usize> {
    let (f, n) = commuting_family(mats)?;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut exps = vec![0usize; mats.len()];
    monomials(mats, n, 0, Matrix::identity(f, n), &mut exps, &mut rows)?;
    let m = Matrix::from_rows(f, rows)?;
    Ok(m.rank())
}

fn monomials(
    mats: &[Matrix],
    n: usize,
    start: usize,
    current: Matrix,
    exps: &mut [usize],
    out: &mut Vec<Vec<Scalar>>,
) -> Result<()> {
    out.push(current.vectorize());
    for v in start..mats.len() {
        if exps[v] + 1 >= n {
            continue;
        }
        let next = current.mul(&mats[v])?;
        if next.is_zero() {
            continue;
        }
        exps[v] += 1;
        monomials(mats, n, v, next, exps, out)?;
        exps[v] -= 1;
    }
    Ok(())
}

/// A monomial basis of the algebra generated by commuting matrices.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    pub generators: Vec<Matrix>,
    pub basis: Vec<Matrix>,
    /// Exponent vector of each basis element.
    pub tags: Vec<Vec<usize>>,
}

impl AlgebraBasis {
    /// Breadth-first closure: every accepted monomial is multiplied by every
    /// generator and kept when it enlarges the span. The span of the accepted
    /// monomials is then closed under the generators and contains `I`.
    pub fn compute(mats: &[Matrix]) -> Result<Self> {
        let (f, n) = commuting_family(mats)?;
        let mut span = EchelonSpan::new(f, n * n);
        let id = Matrix::identity(f, n);
        span.insert(id.entries())?;
        let mut basis = vec![id];
        let mut tags = vec![vec![0; mats.len()]];
        let mut head = 0;
        while head < basis.len() {
            for (v, g) in mats.iter().enumerate() {
                let next = basis[head].mul(g)?;
                if span.insert(next.entries())? {
                    let mut tag = tags[head].clone();
                    tag[v] += 1;
                    basis.push(next);
                    tags.push(tag);
                }
            }
            head += 1;
        }
        Ok(AlgebraBasis {
            generators: mats.to_vec(),
            basis,
            tags,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn algebra_dim_closure(mats: &[Matrix]) -> Result<usize> {
    Ok(AlgebraBasis::compute(mats)?.dim())
}

/// `dim (C(a) ∩ C(b))`.
pub fn self_centralizing_dim(a: &Matrix, b: &Matrix) -> Result<usize> {
    let (_, n) = commuting_family(&[a.clone(), b.clone()])?;
    let as_columns = |basis: Vec<Matrix>| -> Result<Vec<Matrix>> {
        basis
            .into_iter()
            .map(|m| Matrix::column_vector(a.field(), m.vectorize()))
            .collect()
    };
    let ca = as_columns(centralizer_basis(a)?)?;
    let cb = as_columns(centralizer_basis(b)?)?;
    let dim = subspace_intersection(&ca, &cb)?.len();
    debug_assert!(dim >= 1 && dim <= n * n);
    Ok(dim)
}

/// Basis of the matrices commuting with every element of `C(x)`.
pub fn double_centralizer_basis(x: &Matrix) -> Result<Vec<Matrix>> {
    let n = x.require_square()?;
    let f = x.field();
    let systems = centralizer_basis(x)?
        .iter()
        .map(commutator_system)
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Matrix> = systems.iter().collect();
    let stacked = Matrix::vstack(&refs)?;
    stacked
        .kernel_basis()
        .into_iter()
        .map(|v| Matrix::from_vector(f, n, n, v.vectorize()))
        .collect()
}

/// Coefficients `c_{ij}` of `c = Σ c_{ij} a^i b^j` over the index set
/// `{(i, j) : j < k, i < n_{j+1}}` of a Jordan type with `k` parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraCoefficients {
    pub entries: Vec<((usize, usize), Scalar)>,
}

impl AlgebraCoefficients {
    pub fn get(&self, i: usize, j: usize) -> Option<&Scalar> {
        self.entries
            .iter()
            .find(|((a, b), _)| (*a, *b) == (i, j))
            .map(|(_, c)| c)
    }
}

/// Index set `{(i, j) : 0 ≤ j < k, 0 ≤ i < n_{j+1}}`.
pub fn monomial_index_set(lambda: &Partition) -> Vec<(usize, usize)> {
    lambda
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(j, &nj)| (0..nj).map(move |i| (i, j)))
        .collect()
}

pub fn express_in_algebra(
    c: &Matrix,
    a: &Matrix,
    b: &Matrix,
    lambda: &Partition,
) -> Result<AlgebraCoefficients> {
    let (f, n) = commuting_family(&[a.clone(), b.clone(), c.clone()]).map_err(|e| match e {
        // c failing to commute means it cannot lie in F[a, b]
        Error::NotCommuting(_) if a.commutes_with(b).unwrap_or(false) => Error::NotInAlgebra,
        other => other,
    })?;
    if lambda.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "Jordan type {lambda} does not have size {n}"
        )));
    }
    let dim = algebra_dim_closure(&[a.clone(), b.clone()])?;
    if dim < n {
        return Err(Error::NotSelfCentralizing { dim, n });
    }
    let index = monomial_index_set(lambda);
    let max_i = lambda.parts()[0];
    let a_pows: Vec<Matrix> = (0..max_i as u32).map(|k| a.pow(k)).collect::<Result<_>>()?;
    let b_pows: Vec<Matrix> = (0..lambda.len() as u32).map(|k| b.pow(k)).collect::<Result<_>>()?;
    let cols: Vec<Matrix> = index
        .iter()
        .map(|&(i, j)| {
            let m = a_pows[i].mul(&b_pows[j])?;
            Matrix::column_vector(f, m.vectorize())
        })
        .collect::<Result<_>>()?;
    let refs: Vec<&Matrix> = cols.iter().collect();
    let system = Matrix::hstack(&refs)?;
    if system.rank() != index.len() {
        return Err(Error::Invariant(format!(
            "monomials a^i b^j over type {lambda} are not independent"
        )));
    }
    let rhs = Matrix::column_vector(f, c.vectorize())?;
    let sol = system.solve(&rhs)?.ok_or(Error::NotInAlgebra)?;
    let entries: Vec<((usize, usize), Scalar)> = index
        .iter()
        .enumerate()
        .map(|(r, &ij)| (ij, sol.get(r, 0).clone()))
        .collect();
    let coeffs: Vec<Scalar> = entries.iter().map(|(_, s)| s.clone()).collect();
    let mats: Vec<Matrix> = index
        .iter()
        .map(|&(i, j)| a_pows[i].mul(&b_pows[j]))
        .collect::<Result<_>>()?;
    if Matrix::linear_combination(&coeffs, &mats)? != *c {
        return Err(Error::Invariant("reassembly does not reproduce c".into()));
    }
    Ok(AlgebraCoefficients { entries })
}

/// Random polynomial (zero constant term) in a random nilpotent matrix.
pub fn random_polynomial_in<R: Rng + ?Sized>(x: &Matrix, rng: &mut R) -> Result<Matrix> {
    let n = x.require_square()?;
    let f = x.field();
    let mut acc = Matrix::zeros(f, n, n);
    let mut power = x.clone();
    for _ in 1..n.max(2) {
        acc = acc.add(&power.scale(&f.random(rng))?)?;
        power = power.mul(x)?;
    }
    Ok(acc)
}

/// A conjugate of `J_λ` for a uniformly chosen Jordan type `λ` of `n`.
pub fn random_nilpotent<R: Rng + ?Sized>(f: FieldSpec, n: usize, rng: &mut R) -> Result<Matrix> {
    let types = Partition::all(n);
    let lambda = types
        .choose(rng)
        .ok_or_else(|| Error::BadSize("n must be positive".into()))?;
    let p = Matrix::random_invertible(f, n, rng);
    jordan_matrix(lambda, f).conjugate(&p)
}

/// `d` random polynomials in one random nilpotent `n x n` matrix.
pub fn random_commuting_tuple<R: Rng + ?Sized>(
    f: FieldSpec,
    n: usize,
    d: usize,
    rng: &mut R,
) -> Result<NilTuple> {
    let x = random_nilpotent(f, n, rng)?;
    let mats = (0..d)
        .map(|_| random_polynomial_in(&x, rng))
        .collect::<Result<Vec<_>>>()?;
    NilTuple::new(f, n, mats)
}
