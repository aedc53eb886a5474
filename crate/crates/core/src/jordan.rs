//! Jordan types, centralizers and their structured parametrizations.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;

/// A weakly decreasing list of positive block orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts into decreasing order and validates them.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for part in (1..=rest.min(max)).rev() {
                cur.push(part);
                go(rest - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            go(n, n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Accepts `3,2,1` with or without surrounding parentheses.
impl std::str::FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("bad part {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Nilpotent Jordan block `J_n`.
pub fn jordan_block(f: FieldSpec, n: usize) -> Matrix {
    let mut m = Matrix::zeros(f, n, n);
    for i in 1..n {
        m.set(i - 1, i, f.one());
    }
    m
}

/// Block-diagonal `J_{n_1} ⊕ … ⊕ J_{n_k}` in the order of the parts.
pub fn jordan_matrix(lambda: &Partition, f: FieldSpec) -> Matrix {
    let blocks: Vec<Matrix> = lambda.parts().iter().map(|&k| jordan_block(f, k)).collect();
    Matrix::direct_sum(f, &blocks).expect("blocks share the field")
}

pub fn kernel_dim_of_type(lambda: &Partition) -> usize {
    lambda.len()
}

/// Whether the nilpotent matrix `m` has at most `r` Jordan blocks.
pub fn is_r_regular(m: &Matrix, r: usize) -> Result<bool> {
    if !m.is_nilpotent()? {
        return Err(Error::NotNilpotent);
    }
    Ok(m.cols() - m.rank() <= r)
}

/// Matrix of the linear map `X ↦ aX - Xa` acting on row-major vec(X).
pub(crate) fn commutator_system(a: &Matrix) -> Result<Matrix> {
    let n = a.require_square()?;
    let mut sys = Matrix::zeros(a.field(), n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                let aik = a.get(i, k);
                if !aik.is_zero() {
                    let col = k * n + j;
                    sys.set(row, col, sys.get(row, col) + aik);
                }
                let akj = a.get(k, j);
                if !akj.is_zero() {
                    let col = i * n + k;
                    sys.set(row, col, sys.get(row, col) - akj);
                }
            }
        }
    }
    Ok(sys)
}

/// Basis of `{X : aX = Xa}`, read off the kernel of [`commutator_system`].
pub fn centralizer_basis(a: &Matrix) -> Result<Vec<Matrix>> {
    let n = a.require_square()?;
    commutator_system(a)?
        .kernel_basis()
        .into_iter()
        .map(|v| Matrix::from_vector(a.field(), n, n, v.vectorize()))
        .collect()
}

/// `Σ_{i,j} min(λ_i, λ_j)`.
pub fn centralizer_dim_formula(lambda: &Partition) -> usize {
    let p = lambda.parts();
    p.iter()
        .flat_map(|&a| p.iter().map(move |&b| a.min(b)))
        .sum()
}

/// Dimension of the nilpotent part of the centralizer.
pub fn nilpotent_centralizer_dim(lambda: &Partition) -> usize {
    centralizer_dim_formula(lambda) - lambda.len()
}

/// Jordan blocks grouped by distinct order: group `i` consists of `s_i`
/// blocks of order `m_i`, written as an `m_i x m_i` block matrix with
/// `s_i x s_i` identities on the block superdiagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupedJordan {
    sizes: Vec<usize>,
    mults: Vec<usize>,
}

/// Toeplitz parameters of a centralizer element: `blocks[i][j]` holds the
/// `min(m_i, m_j)` matrices `B_ij^(1), B_ij^(2), …` of size `s_i x s_j`.
pub type GroupedParams = Vec<Vec<Vec<Matrix>>>;

impl GroupedJordan {
    pub fn new(sizes: Vec<usize>, mults: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.len() != mults.len() {
            return Err(Error::InvalidPartition(
                "sizes and multiplicities must be nonempty and of equal length".into(),
            ));
        }
        if sizes.windows(2).any(|w| w[0] <= w[1]) || sizes.last() == Some(&0) {
            return Err(Error::InvalidPartition(
                "sizes must be strictly decreasing and positive".into(),
            ));
        }
        if mults.contains(&0) {
            return Err(Error::InvalidPartition("multiplicities must be positive".into()));
        }
        Ok(GroupedJordan { sizes, mults })
    }

    pub fn from_partition(lambda: &Partition) -> Self {
        let mut sizes: Vec<usize> = Vec::new();
        let mut mults: Vec<usize> = Vec::new();
        for &p in lambda.parts() {
            if sizes.last() == Some(&p) {
                *mults.last_mut().expect("nonempty") += 1;
            } else {
                sizes.push(p);
                mults.push(1);
            }
        }
        GroupedJordan { sizes, mults }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    pub fn groups(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().zip(&self.mults).map(|(m, s)| m * s).sum()
    }

    pub fn partition(&self) -> Partition {
        let parts = self
            .sizes
            .iter()
            .zip(&self.mults)
            .flat_map(|(&m, &s)| std::iter::repeat_n(m, s))
            .collect();
        Partition::new(parts).expect("grouped form is a valid partition")
    }

    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.sizes
            .iter()
            .zip(&self.mults)
            .map(|(m, s)| {
                let o = acc;
                acc += m * s;
                o
            })
            .collect()
    }

    pub fn matrix(&self, f: FieldSpec) -> Matrix {
        let n = self.n();
        let mut a = Matrix::zeros(f, n, n);
        for (g, off) in self.offsets().into_iter().enumerate() {
            let (m, s) = (self.sizes[g], self.mults[g]);
            for blk in 1..m {
                for e in 0..s {
                    a.set(off + (blk - 1) * s + e, off + blk * s + e, f.one());
                }
            }
        }
        a
    }

    /// Parameter index used by block `(a, b)` of group pair `(i, j)`, if any.
    fn param_index(&self, i: usize, j: usize, a: usize, b: usize) -> Option<usize> {
        let shift = self.sizes[j].saturating_sub(self.sizes[i]);
        b.checked_sub(shift)?.checked_sub(a)
    }

    pub fn zero_params(&self, f: FieldSpec) -> GroupedParams {
        let l = self.groups();
        (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| {
                        let count = self.sizes[i].min(self.sizes[j]);
                        vec![Matrix::zeros(f, self.mults[i], self.mults[j]); count]
                    })
                    .collect()
            })
            .collect()
    }

    /// Random parameters; when `nilpotent_diagonal` is set, each leading
    /// diagonal parameter `B_ii^(1)` is a conjugated strictly upper
    /// triangular matrix.
    pub fn random_params<R: Rng + ?Sized>(
        &self,
        f: FieldSpec,
        nilpotent_diagonal: bool,
        rng: &mut R,
    ) -> GroupedParams {
        let mut params = self.zero_params(f);
        for (i, row) in params.iter_mut().enumerate() {
            for (j, list) in row.iter_mut().enumerate() {
                for (idx, b) in list.iter_mut().enumerate() {
                    *b = if i == j && idx == 0 && nilpotent_diagonal {
                        random_nilpotent(f, self.mults[i], rng)
                    } else {
                        Matrix::random(f, self.mults[i], self.mults[j], rng)
                    };
                }
            }
        }
        params
    }

    fn check_params(&self, params: &GroupedParams, f: FieldSpec) -> Result<()> {
        let l = self.groups();
        let bad = |msg: String| Err(Error::DimensionMismatch(msg));
        if params.len() != l || params.iter().any(|r| r.len() != l) {
            return bad(format!("expected {l}x{l} parameter groups"));
        }
        for i in 0..l {
            for j in 0..l {
                let list = &params[i][j];
                let count = self.sizes[i].min(self.sizes[j]);
                if list.len() != count {
                    return bad(format!(
                        "group pair ({i},{j}) needs {count} parameter blocks, got {}",
                        list.len()
                    ));
                }
                for b in list {
                    if b.field() != f {
                        return Err(Error::FieldMismatch);
                    }
                    if b.rows() != self.mults[i] || b.cols() != self.mults[j] {
                        return bad(format!(
                            "parameter block for ({i},{j}) must be {}x{}",
                            self.mults[i], self.mults[j]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Assembles the centralizer element with the given Toeplitz parameters.
    pub fn centralizer_element(&self, f: FieldSpec, params: &GroupedParams) -> Result<Matrix> {
        self.check_params(params, f)?;
        let n = self.n();
        let offsets = self.offsets();
        let mut x = Matrix::zeros(f, n, n);
        for i in 0..self.groups() {
            for j in 0..self.groups() {
                let (si, sj) = (self.mults[i], self.mults[j]);
                for a in 0..self.sizes[i] {
                    for b in 0..self.sizes[j] {
                        if let Some(idx) = self.param_index(i, j, a, b) {
                            x.set_block(offsets[i] + a * si, offsets[j] + b * sj, &params[i][j][idx]);
                        }
                    }
                }
            }
        }
        if !x.commutes_with(&self.matrix(f))? {
            return Err(Error::Invariant(
                "assembled Toeplitz element does not commute with the grouped Jordan matrix".into(),
            ));
        }
        Ok(x)
    }

    /// Reads the Toeplitz parameters off a matrix commuting with [`GroupedJordan::matrix`].
    pub fn extract_params(&self, x: &Matrix) -> Result<GroupedParams> {
        let f = x.field();
        if x.rows() != self.n() || x.cols() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "expected {}x{} matrix",
                self.n(),
                self.n()
            )));
        }
        if !x.commutes_with(&self.matrix(f))? {
            return Err(Error::NotInCentralizer);
        }
        let offsets = self.offsets();
        let mut params = self.zero_params(f);
        for (i, row) in params.iter_mut().enumerate() {
            for (j, list) in row.iter_mut().enumerate() {
                let shift = self.sizes[j].saturating_sub(self.sizes[i]);
                for (idx, b) in list.iter_mut().enumerate() {
                    *b = x.block(
                        offsets[i],
                        offsets[j] + (shift + idx) * self.mults[j],
                        self.mults[i],
                        self.mults[j],
                    );
                }
            }
        }
        Ok(params)
    }
}

fn random_nilpotent<R: Rng + ?Sized>(f: FieldSpec, s: usize, rng: &mut R) -> Matrix {
    let mut t = Matrix::zeros(f, s, s);
    for i in 0..s {
        for j in i + 1..s {
            t.set(i, j, f.random(rng));
        }
    }
    let p = Matrix::random_invertible(f, s, rng);
    t.conjugate(&p).expect("p is invertible")
}

/// Convenience wrapper for [`GroupedJordan::centralizer_element`].
pub fn grouped_centralizer_element(
    g: &GroupedJordan,
    f: FieldSpec,
    params: &GroupedParams,
) -> Result<Matrix> {
    g.centralizer_element(f, params)
}

/// Basili's criterion: a centralizer element is nilpotent iff every leading
/// diagonal Toeplitz parameter `B_ii^(1)` is nilpotent.
pub fn basili_nilpotency_check(g: &GroupedJordan, m: &Matrix) -> Result<bool> {
    let params = g.extract_params(m)?;
    for (i, row) in params.iter().enumerate() {
        if !row[i][0].is_nilpotent()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Polynomial-matrix coordinates of an element of `C(J_k ⊕ J_m)` with `k > m`,
/// written `[[p, t^{k-m} q], [r, s]]`; `p` lives mod `t^k`, the rest mod `t^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoBlockPolyRep {
    pub k: usize,
    pub m: usize,
    pub p: Vec<Scalar>,
    pub q: Vec<Scalar>,
    pub r: Vec<Scalar>,
    pub s: Vec<Scalar>,
}

fn check_orders(k: usize, m: usize) -> Result<()> {
    if k <= m || m == 0 {
        return Err(Error::BadOrders { k, m });
    }
    Ok(())
}

/// Truncated product of two coefficient vectors.
fn mul_trunc(a: &[Scalar], b: &[Scalar], len: usize, f: FieldSpec) -> Vec<Scalar> {
    let mut out = vec![f.zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// `t^shift * a`, truncated to `len`.
fn shift_trunc(a: &[Scalar], shift: usize, len: usize, f: FieldSpec) -> Vec<Scalar> {
    let mut out = vec![f.zero(); len];
    for (i, x) in a.iter().enumerate() {
        if i + shift < len {
            out[i + shift] = x.clone();
        }
    }
    out
}

fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl TwoBlockPolyRep {
    pub fn field(&self) -> FieldSpec {
        self.p[0].field()
    }

    pub fn identity(f: FieldSpec, k: usize, m: usize) -> Result<Self> {
        check_orders(k, m)?;
        let unit = |len| {
            let mut v = vec![f.zero(); len];
            v[0] = f.one();
            v
        };
        Ok(TwoBlockPolyRep {
            k,
            m,
            p: unit(k),
            q: vec![f.zero(); m],
            r: vec![f.zero(); m],
            s: unit(m),
        })
    }

    pub fn encode(k: usize, m: usize, x: &Matrix) -> Result<Self> {
        check_orders(k, m)?;
        let f = x.field();
        let n = k + m;
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch(format!("expected {n}x{n} matrix")));
        }
        let a = jordan_matrix(&Partition::new(vec![k, m])?, f);
        if !x.commutes_with(&a)? {
            return Err(Error::NotInCentralizer);
        }
        Ok(TwoBlockPolyRep {
            k,
            m,
            p: (0..k).map(|j| x.get(0, j).clone()).collect(),
            q: (0..m).map(|j| x.get(0, k + j).clone()).collect(),
            r: (0..m).map(|j| x.get(k, k - m + j).clone()).collect(),
            s: (0..m).map(|j| x.get(k, k + j).clone()).collect(),
        })
    }

    pub fn decode(&self) -> Matrix {
        let (k, m) = (self.k, self.m);
        let f = self.field();
        let mut x = Matrix::zeros(f, k + m, k + m);
        for row in 0..k {
            for j in 0..k - row {
                x.set(row, row + j, self.p[j].clone());
            }
        }
        for row in 0..m {
            for j in 0..m - row {
                x.set(row, k + row + j, self.q[j].clone());
                x.set(k + row, k - m + row + j, self.r[j].clone());
                x.set(k + row, k + row + j, self.s[j].clone());
            }
        }
        x
    }

    /// Product of polynomial matrices with the first row reduced mod `t^k`
    /// and the second mod `t^m`.
    pub fn mul(&self, other: &TwoBlockPolyRep) -> Result<TwoBlockPolyRep> {
        if (self.k, self.m) != (other.k, other.m) {
            return Err(Error::DimensionMismatch("block orders differ".into()));
        }
        let f = self.field();
        if other.field() != f {
            return Err(Error::FieldMismatch);
        }
        let (k, m) = (self.k, self.m);
        let d = k - m;
        // top-left: p p' + t^{k-m} q r'  (mod t^k)
        let p = add_vec(
            &mul_trunc(&self.p, &other.p, k, f),
            &shift_trunc(&mul_trunc(&self.q, &other.r, k, f), d, k, f),
        );
        // top-right / t^{k-m}: p q' + q s'  (mod t^m)
        let q = add_vec(
            &mul_trunc(&self.p, &other.q, m, f),
            &mul_trunc(&self.q, &other.s, m, f),
        );
        // bottom-left: r p' + s r'  (mod t^m)
        let r = add_vec(
            &mul_trunc(&self.r, &other.p, m, f),
            &mul_trunc(&self.s, &other.r, m, f),
        );
        // bottom-right: t^{k-m} r q' + s s'  (mod t^m)
        let s = add_vec(
            &shift_trunc(&mul_trunc(&self.r, &other.q, m, f), d, m, f),
            &mul_trunc(&self.s, &other.s, m, f),
        );
        Ok(TwoBlockPolyRep { k, m, p, q, r, s })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::span_dimension;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn partition_parsing() {
        assert_eq!("3,2,1".parse::<Partition>().unwrap(), part(&[3, 2, 1]));
        assert_eq!("(2, 3)".parse::<Partition>().unwrap(), part(&[3, 2]));
        for bad in ["", "3,,1", "0", "a,b"] {
            assert!(bad.parse::<Partition>().is_err(), "{bad}");
        }
    }

    #[test]
    fn partitions_are_canonical() {
        assert_eq!(part(&[1, 3, 2]).parts(), &[3, 2, 1]);
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        let counts: Vec<usize> = (1..=8).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(serde_json::to_string(&part(&[2, 3])).unwrap(), "[3,2]");
        assert!(serde_json::from_str::<Partition>("[1,0]").is_err());
    }

    #[test]
    fn jordan_matrix_examples() {
        assert_eq!(jordan_matrix(&part(&[3]), q()), jordan_block(q(), 3));
        assert!(jordan_matrix(&part(&[1, 1]), q()).is_zero());
        let a = jordan_matrix(&part(&[3, 2, 1]), q());
        let mut expect = Matrix::zeros(q(), 6, 6);
        for (i, j) in [(0, 1), (1, 2), (3, 4)] {
            expect.set(i, j, q().one());
        }
        assert_eq!(a, expect);
        assert!(is_r_regular(&a, 3).unwrap());
        assert!(!is_r_regular(&a, 2).unwrap());
    }

    #[test]
    fn kernel_dims() {
        assert_eq!(kernel_dim_of_type(&part(&[5])), 1);
        assert_eq!(kernel_dim_of_type(&part(&[3, 2, 1])), 3);
        assert_eq!(kernel_dim_of_type(&part(&[2, 2, 1, 1])), 4);
    }

    #[test]
    fn regularity_examples() {
        assert!(is_r_regular(&jordan_block(q(), 6), 1).unwrap());
        let j22 = jordan_matrix(&part(&[2, 2]), q());
        assert!(!is_r_regular(&j22, 1).unwrap());
        assert!(is_r_regular(&j22, 2).unwrap());
        assert_eq!(is_r_regular(&Matrix::identity(q(), 2), 2), Err(Error::NotNilpotent));
    }

    #[test]
    fn regularity_matches_number_of_parts() {
        for n in 1..=8 {
            for lambda in Partition::all(n) {
                let a = jordan_matrix(&lambda, FieldSpec::Prime(7));
                for r in 0..=n {
                    assert_eq!(is_r_regular(&a, r).unwrap(), r >= lambda.len(), "{lambda} r={r}");
                }
            }
        }
    }

    #[test]
    fn centralizer_examples() {
        let j = jordan_block(q(), 4);
        let basis = centralizer_basis(&j).unwrap();
        assert_eq!(basis.len(), 4);
        let mut all = basis.clone();
        all.extend((0..4).map(|k| j.pow(k).unwrap()));
        assert_eq!(span_dimension(&all).unwrap(), 4);

        assert_eq!(centralizer_basis(&Matrix::zeros(q(), 3, 3)).unwrap().len(), 9);
        let a = jordan_matrix(&part(&[3, 2, 1]), q());
        let basis = centralizer_basis(&a).unwrap();
        assert_eq!(basis.len(), 14);
        for x in &basis {
            assert!(x.commutes_with(&a).unwrap());
        }
        assert!(matches!(
            centralizer_basis(&Matrix::zeros(q(), 2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn dimension_formulas() {
        assert_eq!(centralizer_dim_formula(&part(&[7])), 7);
        assert_eq!(centralizer_dim_formula(&part(&[3, 2, 1])), 14);
        assert_eq!(centralizer_dim_formula(&part(&[1; 5])), 25);
        assert_eq!(nilpotent_centralizer_dim(&part(&[7])), 6);
        assert_eq!(nilpotent_centralizer_dim(&part(&[3, 2, 1])), 11);
        assert_eq!(nilpotent_centralizer_dim(&part(&[1, 1])), 2);
    }

    #[test]
    fn centralizer_dimension_matches_formula_up_to_six() {
        for n in 1..=6 {
            for lambda in Partition::all(n) {
                let a = jordan_matrix(&lambda, q());
                assert_eq!(centralizer_basis(&a).unwrap().len(), centralizer_dim_formula(&lambda));
            }
        }
    }

    #[test]
    fn grouped_form_examples() {
        let g = GroupedJordan::from_partition(&part(&[3, 3, 1]));
        assert_eq!(g.sizes(), &[3, 1]);
        assert_eq!(g.mults(), &[2, 1]);
        assert_eq!(g.partition(), part(&[3, 3, 1]));
        assert!(GroupedJordan::new(vec![2, 2], vec![1, 1]).is_err());
        assert!(GroupedJordan::new(vec![2, 1], vec![1, 0]).is_err());

        let f = q();
        assert!(g.centralizer_element(f, &g.zero_params(f)).unwrap().is_zero());

        let single = GroupedJordan::new(vec![3], vec![2]).unwrap();
        let mut params = single.zero_params(f);
        params[0][0][0] = Matrix::identity(f, 2);
        assert_eq!(single.centralizer_element(f, &params).unwrap(), Matrix::identity(f, 6));

        let mut wrong = g.zero_params(f);
        wrong[0][1].pop();
        assert!(matches!(g.centralizer_element(f, &wrong), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn grouped_params_count_and_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            for lambda in Partition::all(n) {
                let g = GroupedJordan::from_partition(&lambda);
                let f = FieldSpec::Prime(101);
                // the parameter count equals the centralizer dimension
                let count: usize = g
                    .zero_params(f)
                    .iter()
                    .flatten()
                    .flatten()
                    .map(|b| b.rows() * b.cols())
                    .sum();
                assert_eq!(count, centralizer_dim_formula(&lambda));
                assert_eq!(centralizer_basis(&g.matrix(f)).unwrap().len(), count);
                let params = g.random_params(f, false, &mut rng);
                let x = g.centralizer_element(f, &params).unwrap();
                assert_eq!(g.extract_params(&x).unwrap(), params);
            }
        }
    }

    #[test]
    fn basili_check_examples() {
        let g = GroupedJordan::from_partition(&part(&[3, 2, 2, 1]));
        let a = g.matrix(q());
        assert!(basili_nilpotency_check(&g, &a).unwrap());
        assert!(!basili_nilpotency_check(&g, &Matrix::identity(q(), 8)).unwrap());
        let outside = Matrix::unit(q(), 8, 8, 7, 0);
        assert_eq!(basili_nilpotency_check(&g, &outside), Err(Error::NotInCentralizer));
    }

    #[test]
    fn basili_check_agrees_with_nilpotency() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for f in [FieldSpec::Prime(2), FieldSpec::Prime(5), q()] {
            for lambda in Partition::all(5) {
                let g = GroupedJordan::from_partition(&lambda);
                for trial in 0..20 {
                    let params = g.random_params(f, trial % 2 == 0, &mut rng);
                    let x = g.centralizer_element(f, &params).unwrap();
                    assert_eq!(basili_nilpotency_check(&g, &x).unwrap(), x.is_nilpotent().unwrap());
                }
            }
        }
    }

    #[test]
    fn polyrep_examples() {
        let f = q();
        let a = jordan_matrix(&part(&[4, 2]), f);
        let rep = TwoBlockPolyRep::encode(4, 2, &a).unwrap();
        let t = |len| {
            let mut v = vec![f.zero(); len];
            v[1] = f.one();
            v
        };
        assert_eq!(rep.p, t(4));
        assert_eq!(rep.s, t(2));
        assert!(rep.q.iter().chain(&rep.r).all(Scalar::is_zero));
        let id = TwoBlockPolyRep::encode(4, 2, &Matrix::identity(f, 6)).unwrap();
        assert_eq!(id, TwoBlockPolyRep::identity(f, 4, 2).unwrap());
        assert_eq!(
            TwoBlockPolyRep::encode(2, 2, &Matrix::identity(f, 4)),
            Err(Error::BadOrders { k: 2, m: 2 })
        );
        assert_eq!(
            TwoBlockPolyRep::encode(4, 2, &Matrix::unit(f, 6, 6, 5, 0)),
            Err(Error::NotInCentralizer)
        );
    }

    #[test]
    fn polyrep_is_a_multiplicative_bijection() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (k, m) in [(4, 2), (3, 1), (5, 3), (2, 1)] {
            let lambda = part(&[k, m]);
            let g = GroupedJordan::from_partition(&lambda);
            for f in [q(), FieldSpec::Prime(3)] {
                for _ in 0..25 {
                    let x = g.centralizer_element(f, &g.random_params(f, false, &mut rng)).unwrap();
                    let y = g.centralizer_element(f, &g.random_params(f, false, &mut rng)).unwrap();
                    let ex = TwoBlockPolyRep::encode(k, m, &x).unwrap();
                    let ey = TwoBlockPolyRep::encode(k, m, &y).unwrap();
                    assert_eq!(ex.decode(), x);
                    let xy = TwoBlockPolyRep::encode(k, m, &x.mul(&y).unwrap()).unwrap();
                    assert_eq!(xy, ex.mul(&ey).unwrap());
                }
            }
        }
    }
}
