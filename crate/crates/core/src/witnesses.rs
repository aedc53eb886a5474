//! Explicit constructions: reducibility witnesses, Basili pairs, the shaped
//! pair variety in the centralizer of `J_3 ⊕ J_2 ⊕ J_1`, square-zero
//! commutants, perturbation pairs and the solution tables of the 3+2+1 case.
//!
//! Matrix indices in code are 0-based; comments use the usual 1-based `e_i`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::NilTuple;
use crate::certificate::{Certificate, Verdict};
use crate::closure::d2_closure_dim;
use crate::error::{Error, Result};
use crate::field::{find_omega, FieldSpec, Scalar};
use crate::io::matrix_to_json;
use crate::jordan::{is_r_regular, jordan_block, jordan_matrix, Partition};
use crate::linalg::{poly_eval_jacobian, EchelonSpan, Matrix, MultiPoly};
use crate::parallel::map_trials;

/// `A_1 = J_{n-2} ⊕ J_2`, `A_2 = e_1 e_n^T`, `A_3 = e_{n-1} e_{n-2}^T`, `A_4 = e_{n-1} e_n^T`.
pub fn gerstenhaber_quadruple(n: usize, f: FieldSpec) -> Result<NilTuple> {
    if n < 4 {
        return Err(Error::BadSize(format!("the quadruple needs n >= 4, got {n}")));
    }
    let a1 = jordan_matrix(&Partition::new(vec![n - 2, 2])?, f);
    let a2 = Matrix::unit(f, n, n, 0, n - 1);
    let a3 = Matrix::unit(f, n, n, n - 2, n - 3);
    let a4 = Matrix::unit(f, n, n, n - 2, n - 1);
    NilTuple::new(f, n, vec![a1, a2, a3, a4])
}

/// `a = J_λ` and `b` with truncated identities `K_i = [I; 0]` (`n_i x n_{i+1}`)
/// on the block superdiagonal.
pub fn basili_pair(lambda: &Partition, f: FieldSpec) -> (Matrix, Matrix) {
    let a = jordan_matrix(lambda, f);
    let n = lambda.n();
    let parts = lambda.parts();
    let mut b = Matrix::zeros(f, n, n);
    let mut offset = 0;
    for w in parts.windows(2) {
        let (ni, nj) = (w[0], w[1]);
        for r in 0..nj {
            b.set(offset + r, offset + ni + r, f.one());
        }
        offset += ni;
    }
    (a, b)
}

/// Variable names of the shaped pair, unprimed first.
pub const N2RED_VARS: [&str; 18] = [
    "a", "b", "c", "d", "e", "f", "g", "h", "i", "a'", "b'", "c'", "d'", "e'", "f'", "g'", "h'",
    "i'",
];

/// A point of `F^18` holding the coordinates of the two shaped matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct N2redPoint {
    coords: Vec<Scalar>,
}

/// The shaped matrix
/// `[[0,a,b,c,d,e],[0,0,a,0,c,0],0,[0,0,f,0,g,0],0,[0,0,h,0,i,0]]`.
pub fn n2red_shaped(f: FieldSpec, c: &[Scalar]) -> Matrix {
    assert_eq!(c.len(), 9, "nine coordinates");
    let mut m = Matrix::zeros(f, 6, 6);
    for (j, v) in c[..5].iter().enumerate() {
        m.set(0, j + 1, v.clone());
    }
    m.set(1, 2, c[0].clone());
    m.set(1, 4, c[2].clone());
    m.set(3, 2, c[5].clone());
    m.set(3, 4, c[6].clone());
    m.set(5, 2, c[7].clone());
    m.set(5, 4, c[8].clone());
    m
}

/// Coordinates of a matrix if it has the shape of [`n2red_shaped`].
pub fn n2red_unshape(m: &Matrix) -> Option<Vec<Scalar>> {
    if m.rows() != 6 || m.cols() != 6 {
        return None;
    }
    let mut c: Vec<Scalar> = (1..6).map(|j| m.get(0, j).clone()).collect();
    c.extend([(3, 2), (3, 4), (5, 2), (5, 4)].iter().map(|&(i, j)| m.get(i, j).clone()));
    (n2red_shaped(m.field(), &c) == *m).then_some(c)
}

impl N2redPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() != 18 {
            return Err(Error::DimensionMismatch(format!(
                "expected 18 coordinates, got {}",
                coords.len()
            )));
        }
        let f = coords[0].field();
        if coords.iter().any(|c| c.field() != f) {
            return Err(Error::FieldMismatch);
        }
        Ok(N2redPoint { coords })
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].field()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn matrices(&self) -> (Matrix, Matrix) {
        let f = self.field();
        (
            n2red_shaped(f, &self.coords[..9]),
            n2red_shaped(f, &self.coords[9..]),
        )
    }
}

fn bilinear(f: FieldSpec, terms: &[(i64, usize, usize)]) -> MultiPoly {
    let mut p = MultiPoly::zero(f, 18);
    for &(c, u, v) in terms {
        let mut e = vec![0u32; 18];
        e[u] += 1;
        e[v] += 1;
        p.add_term(e, f.from_i64(c)).expect("18 variables");
    }
    p
}

/// `cf' + eh' - c'f - e'h` and `ac' + cg' + ei' - a'c - c'g - e'i`.
pub fn n2red_equations(f: FieldSpec) -> [MultiPoly; 2] {
    let (a, c, e, fv, g, h, i) = (0, 2, 4, 5, 6, 7, 8);
    let p = 9;
    [
        bilinear(f, &[(1, c, p + fv), (1, e, p + h), (-1, p + c, fv), (-1, p + e, h)]),
        bilinear(
            f,
            &[
                (1, a, p + c),
                (1, c, p + g),
                (1, e, p + i),
                (-1, p + a, c),
                (-1, p + c, g),
                (-1, p + e, i),
            ],
        ),
    ]
}

/// Whether both equations vanish at `p`. Also checks that this agrees with
/// the commutator of the assembled pair, and reports an invariant violation
/// otherwise.
pub fn n2red_membership(p: &N2redPoint) -> Result<bool> {
    let eqs = n2red_equations(p.field());
    let vanish = eqs
        .iter()
        .map(|q| q.eval(p.coords()).map(|v| v.is_zero()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|z| z);
    let (x, y) = p.matrices();
    let commute = x.commutes_with(&y)?;
    if vanish != commute {
        return Err(Error::Invariant(format!(
            "equations vanish: {vanish}, pair commutes: {commute}"
        )));
    }
    Ok(vanish)
}

/// Random point of the shaped pair variety: unprimed coordinates uniform,
/// primed coordinates a random vector corrected by a particular solution of
/// the (linear in primed) equations.
pub fn n2red_sample<R: Rng + ?Sized>(f: FieldSpec, rng: &mut R) -> Result<N2redPoint> {
    const ATTEMPTS: usize = 16;
    let eqs = n2red_equations(f);
    for _ in 0..ATTEMPTS {
        let mut point: Vec<Scalar> = (0..9).map(|_| f.random(rng)).collect();
        point.extend((0..9).map(|_| f.zero()));
        let (_, jac) = poly_eval_jacobian(&eqs, &point)?;
        let m = jac.block(0, 9, 2, 9);
        let r = Matrix::column_vector(f, (0..9).map(|_| f.random(rng)).collect())?;
        let rhs = m.mul(&r)?.neg();
        let Some(y) = m.solve(&rhs)? else {
            continue;
        };
        let x = r.add(&y)?;
        for (k, v) in x.entries().iter().enumerate() {
            point[9 + k] = v.clone();
        }
        let p = N2redPoint::new(point)?;
        if n2red_membership(&p)? {
            return Ok(p);
        }
    }
    Err(Error::ResolutionFailure(ATTEMPTS))
}

/// The Basili partner of `J_3 ⊕ J_2 ⊕ J_1`, `e_1e_4^T + e_2e_5^T + e_4e_6^T`.
/// Its `(4,6)` entry is forced to zero by the shape.
pub fn n2red_properness_witness(f: FieldSpec) -> Matrix {
    let lambda = Partition::new(vec![3, 2, 1]).expect("valid");
    basili_pair(&lambda, f).1
}

/// Dimension evidence that `N_2(J_3 ⊕ J_2 ⊕ J_1)` is reducible.
pub fn n2red_certificate(f: FieldSpec, trials: u64, seed: u64) -> Result<Certificate> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let lambda = Partition::new(vec![3, 2, 1])?;
    let a = jordan_matrix(&lambda, f);
    let eqs = n2red_equations(f);
    let results = map_trials(trials, seed, |_, rng| -> Result<(bool, usize)> {
        let p = n2red_sample(f, rng)?;
        let (x, y) = p.matrices();
        let valid = n2red_membership(&p)?
            && x.commutes_with(&a)?
            && y.commutes_with(&a)?
            && x.is_nilpotent()?
            && y.is_nilpotent()?;
        let (_, jac) = poly_eval_jacobian(&eqs, p.coords())?;
        Ok((valid, jac.rank()))
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let valid = results.iter().filter(|r| r.0).count() as u64;
    let rank2 = results.iter().filter(|r| r.1 == 2).count() as u64;
    let threshold = (trials * 95).div_ceil(100);

    let closure_dim = d2_closure_dim(&lambda);
    let local_dim = 18 - 2;
    let w = n2red_properness_witness(f);
    let witness_in_n2 = w.commutes_with(&a)? && w.is_nilpotent()?;
    let witness_outside_shape = n2red_unshape(&w).is_none();

    let mut cert = Certificate::new("n2red", f, seed, trials);
    cert.push("d2_closure_dim", closure_dim);
    cert.push("witness_variety_local_dim", local_dim);
    cert.push("samples_valid", valid);
    cert.push("jacobian_rank2_samples", rank2);
    cert.push("jacobian_rank2_threshold", threshold);
    cert.push("properness_witness", matrix_to_json(&w));
    cert.push("properness_witness_partner", matrix_to_json(&Matrix::zeros(f, 6, 6)));
    cert.push("witness_in_n2", witness_in_n2);
    cert.push("witness_violates_shape_at", json!([4, 6]));
    cert.push("witness_outside_shape", witness_outside_shape);
    let ok = closure_dim == 16
        && valid == trials
        && rank2 >= threshold
        && witness_in_n2
        && witness_outside_shape;
    cert.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    cert.push(
        "conclusion",
        if ok {
            "dimension obstruction consistent with reducibility"
        } else {
            "dimension obstruction not established"
        },
    );
    Ok(cert)
}

/// The `(n-k) x (n-k)` blocks `X`, `X'` with `β = s^2`, `γ = t^2`.
pub fn prop1nonzero_blocks(size: usize, s: &Scalar, t: &Scalar) -> Result<(Matrix, Matrix)> {
    if size < 2 {
        return Err(Error::BadShape(format!("block size {size} < 2")));
    }
    if s.is_zero() {
        return Err(Error::ZeroParameter("s"));
    }
    if t.is_zero() {
        return Err(Error::ZeroParameter("t"));
    }
    let f = s.field();
    if t.field() != f {
        return Err(Error::FieldMismatch);
    }
    let (s2, t2) = (s * s, t * t);
    let mut x = Matrix::zeros(f, size, size);
    x.set(0, 0, &s2 * t);
    x.set(0, 1, &s2 * s);
    x.set(1, 0, (&t2 * s).neg());
    x.set(1, 1, (&s2 * t).neg());
    let mut xp = Matrix::zeros(f, size, size);
    xp.set(0, 0, (&t2 * s).neg());
    xp.set(0, 1, (&s2 * t).neg());
    xp.set(1, 0, &t2 * t);
    xp.set(1, 1, &t2 * s);
    Ok((x, xp))
}

fn check_k_n(k: usize, n: usize, min_k: usize) -> Result<()> {
    if k < min_k || n < k + 2 {
        return Err(Error::BadShape(format!(
            "need {min_k} <= k <= n-2, got k={k}, n={n}"
        )));
    }
    Ok(())
}

/// `Y = 0_k ⊕ X` and `Z = 0_k ⊕ X'`.
pub fn prop1nonzero_pair(k: usize, n: usize, s: &Scalar, t: &Scalar) -> Result<(Matrix, Matrix)> {
    check_k_n(k, n, 1)?;
    let f = s.field();
    let (x, xp) = prop1nonzero_blocks(n - k, s, t)?;
    let zk = Matrix::zeros(f, k, k);
    Ok((
        Matrix::direct_sum(f, &[zk.clone(), x])?,
        Matrix::direct_sum(f, &[zk, xp])?,
    ))
}

/// `e_1^T X' = e_2^T X` and `β X' e_1 = -γ X e_2`.
pub fn prop1nonzero_boundary_identities(
    x: &Matrix,
    xp: &Matrix,
    beta: &Scalar,
    gamma: &Scalar,
) -> Result<bool> {
    let row = xp.block(0, 0, 1, xp.cols()) == x.block(1, 0, 1, x.cols());
    let left = xp.column(0).scale(beta)?;
    let right = x.column(1).scale(&gamma.neg())?;
    Ok(row && left == right)
}

/// The normalized triple `A = J_k ⊕ 0`, `B = e_1e_{k+1}^T + β e_{k+1}e_k^T`,
/// `C = e_1e_{k+2}^T - γ e_{k+2}e_k^T`.
pub fn prop1nonzero_base_triple(
    k: usize,
    n: usize,
    beta: &Scalar,
    gamma: &Scalar,
) -> Result<(Matrix, Matrix, Matrix)> {
    check_k_n(k, n, 2)?;
    let f = beta.field();
    let a = Matrix::direct_sum(f, &[jordan_block(f, k), Matrix::zeros(f, n - k, n - k)])?;
    let mut b = Matrix::unit(f, n, n, 0, k);
    b.set(k, k - 1, beta.clone());
    let mut c = Matrix::unit(f, n, n, 0, k + 1);
    c.set(k + 1, k - 1, gamma.neg());
    Ok((a, b, c))
}

/// Which part of the commutant construction produced the output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareZeroBranch {
    VNotInjective,
    W2NotInjective { steps: usize },
    Terminal { steps: usize },
    RankOneDeficient,
}

impl SquareZeroBranch {
    /// Short label such as `terminal(2)`.
    pub fn label(&self) -> String {
        match self {
            SquareZeroBranch::VNotInjective => "v_not_injective".into(),
            SquareZeroBranch::W2NotInjective { steps } => format!("w2_not_injective({steps})"),
            SquareZeroBranch::Terminal { steps } => format!("terminal({steps})"),
            SquareZeroBranch::RankOneDeficient => "rank_one_deficient".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SquareZeroCommutant {
    pub a: Matrix,
    pub b: Matrix,
    pub n: Matrix,
    pub branch: SquareZeroBranch,
}

impl SquareZeroCommutant {
    /// `N ≠ 0`, `N` nilpotent, `[N, A] = 0` and `[N, B] = 0`.
    pub fn verify(&self) -> Result<bool> {
        Ok(!self.n.is_zero()
            && self.n.is_nilpotent()?
            && self.n.commutes_with(&self.a)?
            && self.n.commutes_with(&self.b)?)
    }
}

/// `A = [[0,I,0],[0,0,0],[0,0,0]]` and `B = [[0,W,V],[0,0,0],[0,0,0]]` with
/// block sizes `l, l, m`.
pub fn squarezero_blocks(w: &Matrix, v: &Matrix) -> Result<(Matrix, Matrix)> {
    let l = w.require_square()?;
    if v.rows() != l {
        return Err(Error::BadShape(format!(
            "V must have {l} rows, got {}",
            v.rows()
        )));
    }
    if v.field() != w.field() {
        return Err(Error::FieldMismatch);
    }
    let (f, m) = (w.field(), v.cols());
    let n = 2 * l + m;
    let mut a = Matrix::zeros(f, n, n);
    a.set_block(0, l, &Matrix::identity(f, l));
    let mut b = Matrix::zeros(f, n, n);
    b.set_block(0, l, w);
    b.set_block(0, 2 * l, v);
    Ok((a, b))
}

/// `[[Q,0,0],[0,Q,0],[0,T,I]]`, which commutes with `A`. Such matrices are
/// closed under products and `(Q, T)^{-1} = (Q^{-1}, -T Q^{-1})`.
#[derive(Clone, Debug)]
struct CentralizerConjugator {
    q: Matrix,
    t: Matrix,
}

impl CentralizerConjugator {
    fn matrix(&self) -> Matrix {
        let (f, l, m) = (self.q.field(), self.q.rows(), self.t.rows());
        let mut p = Matrix::zeros(f, 2 * l + m, 2 * l + m);
        p.set_block(0, 0, &self.q);
        p.set_block(l, l, &self.q);
        p.set_block(2 * l, l, &self.t);
        p.set_block(2 * l, 2 * l, &Matrix::identity(f, m));
        p
    }

    fn then(&self, next: &CentralizerConjugator) -> Result<CentralizerConjugator> {
        Ok(CentralizerConjugator {
            q: self.q.mul(&next.q)?,
            t: self.t.mul(&next.q)?.add(&next.t)?,
        })
    }

    fn inverse(&self) -> Result<CentralizerConjugator> {
        let qi = self.q.inverse()?;
        Ok(CentralizerConjugator {
            t: self.t.mul(&qi)?.neg(),
            q: qi,
        })
    }

    /// Blocks of `P^{-1} B P` for `B = [[0,W,V],0,0]`:
    /// `W' = Q^{-1}(WQ + VT)` and `V' = Q^{-1}V`.
    fn conjugate_blocks(&self, w: &Matrix, v: &Matrix) -> Result<(Matrix, Matrix)> {
        let qi = self.q.inverse()?;
        Ok((
            qi.mul(&w.mul(&self.q)?.add(&v.mul(&self.t)?)?)?,
            qi.mul(v)?,
        ))
    }
}

/// For injective `v` (`r x m`), returns invertible `Q` and `R` (`m x r`) such
/// that `Q^{-1}(WQ + vR)` has zero last `m` rows and `Q^{-1}v = [0; I]`.
/// `Q` is `v` preceded by the first standard vectors completing it to a basis.
fn normalize_pair(w: &Matrix, v: &Matrix) -> Result<(Matrix, Matrix)> {
    let (f, r, m) = (w.field(), w.rows(), v.cols());
    let mut span = EchelonSpan::new(f, r);
    for c in v.columns() {
        span.insert(c.entries())?;
    }
    let mut completion = Vec::new();
    for i in 0..r {
        if completion.len() + m == r {
            break;
        }
        let e = Matrix::unit_vector(f, r, i);
        if span.insert(e.entries())? {
            completion.push(e);
        }
    }
    let mut cols: Vec<&Matrix> = completion.iter().collect();
    cols.push(v);
    let q = Matrix::hstack(&cols)?;
    let qwq = q.inverse()?.mul(w)?.mul(&q)?;
    let rr = qwq.block(r - m, 0, m, r).neg();
    Ok((q, rr))
}

/// Checks that `[W V]` has the normal form reached after `t` steps and
/// returns `(W_1, W_2)`.
fn read_normal_form(w: &Matrix, v: &Matrix, m: usize, t: usize) -> Result<(Matrix, Matrix)> {
    let (f, l) = (w.field(), w.rows());
    let wv = Matrix::hstack(&[w, v])?;
    let r = l - t * m;
    let mut expect = Matrix::zeros(f, l, l + m);
    expect.set_block(0, 0, &wv.block(0, 0, r, r + m));
    for i in 0..t {
        expect.set_block(r + i * m, r + (i + 1) * m, &Matrix::identity(f, m));
    }
    if wv != expect {
        return Err(Error::Invariant(format!(
            "conjugation did not reach the normal form after {t} steps"
        )));
    }
    Ok((wv.block(0, 0, r, r), wv.block(0, r, r, m)))
}

/// Nonzero nilpotent `N = [[N1,0,0],[0,N1,0],[0,N2,N3]]` commuting with the
/// `A` and `B` of [`squarezero_blocks`], for `m ≥ 2`.
pub fn squarezero_commutant(w: &Matrix, v: &Matrix) -> Result<SquareZeroCommutant> {
    let m = v.cols();
    if m < 2 {
        return Err(Error::BadShape(format!("m must be at least 2, got {m}")));
    }
    let (a, b) = squarezero_blocks(w, v)?;
    let (f, l) = (w.field(), w.rows());
    let n = 2 * l + m;

    if v.rank() < m {
        let k = v.kernel_basis().remove(0);
        let x = k.mul(&Matrix::unit_vector(f, l, 0).transpose())?;
        let mut nn = Matrix::zeros(f, n, n);
        nn.set_block(2 * l, l, &x);
        return Ok(SquareZeroCommutant {
            a,
            b,
            n: nn,
            branch: SquareZeroBranch::VNotInjective,
        });
    }

    let (q, r) = normalize_pair(w, v)?;
    let mut p_total = CentralizerConjugator { q, t: r };
    let (mut w_cur, mut v_cur) = p_total.conjugate_blocks(w, v)?;
    let mut t = 1;
    let (n_cur, branch) = loop {
        let (w1, w2) = read_normal_form(&w_cur, &v_cur, m, t)?;
        let rdim = l - t * m;
        if rdim == 0 {
            let np = Matrix::unit(f, m, m, 0, 1);
            let npp = Matrix::direct_sum(f, &vec![np.clone(); t])?;
            break (
                Matrix::direct_sum(f, &[npp.clone(), npp, np])?,
                SquareZeroBranch::Terminal { steps: t },
            );
        }
        if w2.rank() < m {
            let k = w2.kernel_basis().remove(0);
            let u = k.transpose().kernel_basis().remove(0);
            let np = k.mul(&u.transpose())?;
            let mut blocks = vec![Matrix::zeros(f, rdim, rdim)];
            blocks.extend(std::iter::repeat_n(np.clone(), t));
            let npp = Matrix::direct_sum(f, &blocks)?;
            break (
                Matrix::direct_sum(f, &[npp.clone(), npp, np])?,
                SquareZeroBranch::W2NotInjective { steps: t },
            );
        }
        let (s, rr) = normalize_pair(&w1, &w2)?;
        let s_inv = s.inverse()?;
        let w1_hat = s_inv.mul(&w1.mul(&s)?.add(&w2.mul(&rr)?)?)?;
        let w2_hat = s_inv.mul(&w2)?;
        let (qq, tt) = induction_conjugator(&s, &rr, &w1_hat, &w2_hat, t, m)?;
        let step = CentralizerConjugator { q: qq, t: tt };
        (w_cur, v_cur) = step.conjugate_blocks(&w_cur, &v_cur)?;
        p_total = p_total.then(&step)?;
        t += 1;
    };
    let nn = p_total
        .matrix()
        .mul(&n_cur)?
        .mul(&p_total.inverse()?.matrix())?;
    Ok(SquareZeroCommutant { a, b, n: nn, branch })
}

/// The block matrices `Q` (`l x l`) and `T` (`m x l`) of one induction step:
/// row block `i ≥ 1` of `Q` is `[R Ŵ1^{i-1}, R Ŵ1^{i-2} Ŵ2, …, R Ŵ2, I]`,
/// and `T = [R Ŵ1^t, R Ŵ1^{t-1} Ŵ2, …, R Ŵ2]`.
fn induction_conjugator(
    s: &Matrix,
    r: &Matrix,
    w1_hat: &Matrix,
    w2_hat: &Matrix,
    t: usize,
    m: usize,
) -> Result<(Matrix, Matrix)> {
    let f = s.field();
    let rdim = s.rows();
    let l = rdim + t * m;
    // r_pows[k] = R Ŵ1^k
    let mut r_pows = vec![r.clone()];
    for _ in 0..t {
        let next = r_pows.last().expect("nonempty").mul(w1_hat)?;
        r_pows.push(next);
    }
    let col_offset = |j: usize| if j == 0 { 0 } else { rdim + (j - 1) * m };
    let mut q = Matrix::zeros(f, l, l);
    q.set_block(0, 0, s);
    for i in 1..=t {
        let row = rdim + (i - 1) * m;
        q.set_block(row, 0, &r_pows[i - 1]);
        for j in 1..i {
            q.set_block(row, col_offset(j), &r_pows[i - 1 - j].mul(w2_hat)?);
        }
        q.set_block(row, col_offset(i), &Matrix::identity(f, m));
    }
    let mut tt = Matrix::zeros(f, m, l);
    tt.set_block(0, 0, &r_pows[t]);
    for j in 1..=t {
        tt.set_block(0, col_offset(j), &r_pows[t - j].mul(w2_hat)?);
    }
    Ok((q, tt))
}

/// The `m = 1` case: requires `rank [E F] ≤ l - 1` and returns
/// `N = [[y x^T,0,0],[0,y x^T,0],[0,ζ x^T,0]]` with `x^T[E F] = 0`,
/// `Ey + ζF = 0` and `x^T y = 0`.
pub fn squarezero_commutant_m1(e: &Matrix, fcol: &Matrix) -> Result<SquareZeroCommutant> {
    let l = e.require_square()?;
    if fcol.rows() != l || fcol.cols() != 1 {
        return Err(Error::BadShape(format!("F must be {l}x1")));
    }
    let ef = Matrix::hstack(&[e, fcol])?;
    let rank = ef.rank();
    if rank + 1 > l {
        return Err(Error::RankTooHigh {
            rank,
            max: l.saturating_sub(1),
        });
    }
    let f = e.field();
    let x = ef.transpose().kernel_basis().remove(0);
    let mut xrow = x.transpose();
    let mut zero = Matrix::zeros(f, 1, 1);
    let constraint = Matrix::hstack(&[&xrow, &zero])?;
    let system = Matrix::vstack(&[&ef, &constraint])?;
    let yz = system
        .kernel_basis()
        .into_iter()
        .next()
        .ok_or_else(|| Error::Invariant("kernel of [E F; x^T 0] is trivial".into()))?;
    let y = yz.block(0, 0, l, 1);
    zero.set(0, 0, yz.get(l, 0).clone());
    let yx = y.mul(&xrow)?;
    xrow = xrow.scale(zero.get(0, 0))?;
    let n = 2 * l + 1;
    let mut nn = Matrix::zeros(f, n, n);
    nn.set_block(0, 0, &yx);
    nn.set_block(l, l, &yx);
    nn.set_block(2 * l, l, &xrow);
    let (a, b) = squarezero_blocks(e, fcol)?;
    Ok(SquareZeroCommutant {
        a,
        b,
        n: nn,
        branch: SquareZeroBranch::RankOneDeficient,
    })
}

/// Fixed data `x_i = e_i` and the three `3 x 2` matrices `Z_i`.
pub fn prop321_fixed_data(f: FieldSpec) -> ([Matrix; 3], [Matrix; 3]) {
    let x = [0, 1, 2].map(|i| Matrix::unit_vector(f, 3, i));
    let z = [
        Matrix::from_ints(f, &[&[0, 1], &[0, 0], &[1, 0]]),
        Matrix::from_ints(f, &[&[0, 0], &[1, 0], &[0, 1]]),
        Matrix::from_ints(f, &[&[1, 0], &[0, 1], &[0, 0]]),
    ];
    (x, z)
}

/// The four-parameter family obtained from the linear constraints:
/// the matrices `Y_1, Y_2, Y_3` and `ζ = (δ, -3α, 3γ)`.
pub fn prop321_family(
    alpha: &Scalar,
    beta: &Scalar,
    gamma: &Scalar,
    delta: &Scalar,
) -> Result<([Matrix; 3], [Scalar; 3])> {
    let f = alpha.field();
    if [beta, gamma, delta].iter().any(|s| s.field() != f) {
        return Err(Error::FieldMismatch);
    }
    let m2a = alpha.scale_int(-2);
    let bd = beta - delta;
    let y1 = [
        [alpha.clone(), beta.clone(), gamma.clone()],
        [gamma.clone(), m2a.clone(), beta.clone()],
        [bd.clone(), gamma.clone(), alpha.clone()],
    ];
    let y2 = [
        [gamma.clone(), m2a.clone(), beta.clone()],
        [bd.clone(), gamma.scale_int(-2), m2a.clone()],
        [m2a.clone(), bd.clone(), gamma.clone()],
    ];
    let y3 = [
        [bd.clone(), gamma.clone(), alpha.clone()],
        [m2a.clone(), bd.clone(), gamma.clone()],
        [gamma.scale_int(4), m2a, bd],
    ];
    let to_matrix = |rows: [[Scalar; 3]; 3]| {
        Matrix::from_rows(f, rows.into_iter().map(Vec::from).collect()).expect("3x3")
    };
    Ok((
        [to_matrix(y1), to_matrix(y2), to_matrix(y3)],
        [delta.clone(), alpha.scale_int(-3), gamma.scale_int(3)],
    ))
}

/// Outcome of each constraint family for a candidate `(Y, ζ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub x_y: bool,
    pub y_z: bool,
    pub commute: bool,
    pub trace: bool,
    pub nilpotent: bool,
}

impl ConstraintReport {
    pub fn all(&self) -> bool {
        self.x_y && self.y_z && self.commute && self.trace && self.nilpotent
    }

    /// The linear families only (everything except commutation and nilpotency).
    pub fn linear(&self) -> bool {
        self.x_y && self.y_z && self.trace
    }
}

/// Evaluates `x_i^T Y_j = x_j^T Y_i`, `Y_iZ_j + ζ_jZ_iJ = Y_jZ_i + ζ_iZ_jJ`,
/// `Y_iY_j = Y_jY_i`, `Tr Y_i = 0` and nilpotency of each `Y_i`.
pub fn prop321_constraints(y: &[Matrix; 3], zeta: &[Scalar; 3]) -> Result<ConstraintReport> {
    let f = y[0].field();
    let (x, z) = prop321_fixed_data(f);
    let j2 = jordan_block(f, 2);
    let mut rep = ConstraintReport {
        x_y: true,
        y_z: true,
        commute: true,
        trace: true,
        nilpotent: true,
    };
    for i in 0..3 {
        rep.trace &= y[i].trace()?.is_zero();
        rep.nilpotent &= y[i].is_nilpotent()?;
        for j in i + 1..3 {
            rep.x_y &= x[i].transpose().mul(&y[j])? == x[j].transpose().mul(&y[i])?;
            let lhs = y[i].mul(&z[j])?.add(&z[i].mul(&j2)?.scale(&zeta[j])?)?;
            let rhs = y[j].mul(&z[i])?.add(&z[j].mul(&j2)?.scale(&zeta[i])?)?;
            rep.y_z &= lhs == rhs;
            rep.commute &= y[i].commutes_with(&y[j])?;
        }
    }
    Ok(rep)
}

/// `X_i = [[0, x_i^T, 0], [0, Y_i, Z_i], [0, 0, ζ_i J]]` (block sizes 1, 3, 2).
pub fn prop321_assemble(y: &[Matrix; 3], zeta: &[Scalar; 3]) -> Result<[Matrix; 3]> {
    let f = y[0].field();
    let (x, z) = prop321_fixed_data(f);
    let j2 = jordan_block(f, 2);
    let build = |i: usize| -> Result<Matrix> {
        let mut m = Matrix::zeros(f, 6, 6);
        m.set_block(0, 1, &x[i].transpose());
        m.set_block(1, 1, &y[i]);
        m.set_block(1, 4, &z[i]);
        m.set_block(4, 4, &j2.scale(&zeta[i])?);
        Ok(m)
    };
    Ok([build(0)?, build(1)?, build(2)?])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prop321Case {
    Generic,
    Char2,
    Char3,
}

impl std::str::FromStr for Prop321Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(Prop321Case::Generic),
            "char2" => Ok(Prop321Case::Char2),
            "char3" => Ok(Prop321Case::Char3),
            other => Err(Error::Schema {
                path: "case".into(),
                msg: format!("expected generic, char2 or char3, got {other:?}"),
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Prop321Solution {
    pub case: Prop321Case,
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
    pub delta: Scalar,
    pub omega: Option<Scalar>,
    pub y: [Matrix; 3],
    pub zeta: [Scalar; 3],
    pub x: [Matrix; 3],
    pub report: ConstraintReport,
    /// `None` when `X_1` is not nilpotent, so regularity is not defined.
    pub x1_one_regular: Option<bool>,
}

fn omega_poly(w: &Scalar) -> Scalar {
    let f = w.field();
    &(&w.pow(3).scale_int(27) - &f.from_i64(8)) * w
}

/// Default `ω` for the generic table: `2/3` over Q, otherwise the least
/// nonzero root in the field, falling back to `0`.
pub fn default_omega(f: FieldSpec) -> Result<Scalar> {
    let roots = find_omega(f)?;
    Ok(roots
        .iter()
        .find(|w| !w.is_zero())
        .cloned()
        .unwrap_or_else(|| f.zero()))
}

/// Builds and checks the solution table for `case`. For the generic case,
/// `α = βω`, `γ = -3/2 βω^2`, `δ = β`; for characteristics 2 and 3,
/// `α = γ = 0`, `δ = β`.
pub fn prop321_solution(
    case: Prop321Case,
    beta: &Scalar,
    omega: Option<&Scalar>,
    f: FieldSpec,
) -> Result<Prop321Solution> {
    let ch = f.characteristic();
    let matches = match case {
        Prop321Case::Generic => ch != 2 && ch != 3,
        Prop321Case::Char2 => ch == 2,
        Prop321Case::Char3 => ch == 3,
    };
    if !matches {
        return Err(Error::CharacteristicMismatch {
            case: format!("{case:?}").to_lowercase(),
            characteristic: ch,
        });
    }
    if beta.field() != f {
        return Err(Error::FieldMismatch);
    }
    let (alpha, gamma, omega) = match case {
        Prop321Case::Generic => {
            let w = match omega {
                Some(w) => w.clone(),
                None => default_omega(f)?,
            };
            if w.field() != f {
                return Err(Error::FieldMismatch);
            }
            if !omega_poly(&w).is_zero() {
                return Err(Error::OmegaNotRoot);
            }
            let alpha = beta * &w;
            let three_halves = f.ratio(-3, 2)?;
            let gamma = &(&three_halves * beta) * &(&w * &w);
            (alpha, gamma, Some(w))
        }
        _ => (f.zero(), f.zero(), None),
    };
    let delta = beta.clone();
    let (y, zeta) = prop321_family(&alpha, beta, &gamma, &delta)?;
    let report = prop321_constraints(&y, &zeta)?;
    let x = prop321_assemble(&y, &zeta)?;
    let x1_one_regular = if x[0].is_nilpotent()? {
        Some(is_r_regular(&x[0], 1)?)
    } else {
        None
    };
    Ok(Prop321Solution {
        case,
        alpha,
        beta: beta.clone(),
        gamma,
        delta,
        omega,
        y,
        zeta,
        x,
        report,
        x1_one_regular,
    })
}

/// Largest prime accepted by [`prop321_fiber_bruteforce`].
pub const FIBER_MAX_PRIME: u64 = 11;

/// All `(α, β, γ, δ) ∈ F_p^4` whose family member satisfies `3(β - δ) = 0`,
/// pairwise commutation and nilpotency.
pub fn prop321_fiber_bruteforce(p: u64) -> Result<Vec<[Scalar; 4]>> {
    if p > FIBER_MAX_PRIME {
        return Err(Error::PrimeTooLarge(p));
    }
    let f = FieldSpec::prime(p)?;
    let elems = f.elements()?;
    let mut out = Vec::new();
    for a in &elems {
        for b in &elems {
            for c in &elems {
                for d in &elems {
                    if !(b - d).scale_int(3).is_zero() {
                        continue;
                    }
                    let (y, zeta) = prop321_family(a, b, c, d)?;
                    let rep = prop321_constraints(&y, &zeta)?;
                    if rep.commute && rep.nilpotent {
                        out.push([a.clone(), b.clone(), c.clone(), d.clone()]);
                    }
                }
            }
        }
    }
    Ok(out)
}
