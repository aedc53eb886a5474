//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any of them fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nilcommute::algebra::{
    algebra_dim_closure, algebra_dim_monomial, double_centralizer_basis, random_nilpotent,
    self_centralizing_dim,
};
use nilcommute::closure::{curve_verify, d2_closure_dim, r1_closure_dim, regularization_family};
use nilcommute::field::find_omega;
use nilcommute::jordan::{
    centralizer_basis, jordan_matrix, nilpotent_centralizer_dim, GroupedJordan, Partition,
};
use nilcommute::linalg::{span_dimension, subspace_intersection, MultiPoly};
use nilcommute::parallel::trial_rng;
use nilcommute::witnesses::{
    basili_pair, gerstenhaber_quadruple, n2red_certificate, n2red_sample, n2red_unshape,
    prop1nonzero_base_triple, prop1nonzero_pair, prop321_family, prop321_fiber_bruteforce,
    prop321_solution, squarezero_commutant, squarezero_commutant_m1, Prop321Case, N2redPoint,
};
use nilcommute::{algebra::NilTuple, FieldSpec, Matrix, Scalar};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))
}

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn fp(p: u32) -> FieldSpec {
    FieldSpec::Prime(p)
}

fn is_nilpotent_by_power(m: &Matrix) -> bool {
    m.pow(m.rows() as u32).unwrap().is_zero()
}

fn commute(a: &Matrix, b: &Matrix) -> bool {
    a.mul(b).unwrap() == b.mul(a).unwrap()
}

fn c1_gerstenhaber() -> Check {
    let start = Instant::now();
    for f in [q(), fp(101), fp(2)] {
        for n in 4..=12 {
            let t = gerstenhaber_quadruple(n, f).map_err(|e| e.to_string())?;
            let mono = algebra_dim_monomial(t.mats()).unwrap();
            let clos = algebra_dim_closure(t.mats()).unwrap();
            ensure(mono == n + 1 && clos == n + 1, || {
                format!("n={n} over {f}: monomial {mono}, closure {clos}")
            })?;
        }
    }
    within(start, Duration::from_secs(10), "criterion 1")?;
    Ok(format!("n = 4..12 over q, fp:101, fp:2 in {:?}", start.elapsed()))
}

fn c2_formulas() -> Check {
    ensure(r1_closure_dim(3, 13) == 180, || "r1(3,13) != 180".into())?;
    for n in 1..=20 {
        ensure(r1_closure_dim(1, n) == n * n - n, || format!("r1(1,{n})"))?;
    }
    let lambda: Partition = "3,2,1".parse().unwrap();
    ensure(d2_closure_dim(&lambda) == 16, || "d2((3,2,1)) != 16".into())?;
    // the same number from a computed centralizer: dim C(A) - dim ker A + n - 1
    let a = jordan_matrix(&lambda, q());
    let computed = centralizer_basis(&a).unwrap().len() - a.kernel_basis().len() + 6 - 1;
    ensure(computed == 16, || format!("computed d2 value {computed}"))?;
    Ok("r1(3,13)=180, r1(1,n)=n^2-n for n<=20, d2((3,2,1))=16".into())
}

fn sum_min(lambda: &Partition) -> usize {
    let p = lambda.parts();
    p.iter().flat_map(|a| p.iter().map(move |b| (*a).min(*b))).sum()
}

fn c3_centralizer() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for n in 1..=8 {
        for lambda in Partition::all(n) {
            let dim = centralizer_basis(&jordan_matrix(&lambda, q())).unwrap().len();
            let expect = sum_min(&lambda);
            ensure(dim == expect, || format!("{lambda}: {dim} != {expect}"))?;
            ensure(nilpotent_centralizer_dim(&lambda) == expect - lambda.len(), || {
                format!("{lambda}: nilpotent centralizer dim")
            })?;
            count += 1;
        }
    }
    within(start, Duration::from_secs(60), "criterion 3")?;
    Ok(format!("{count} partitions in {:?}", start.elapsed()))
}

fn c4_basili() -> Check {
    let mut count = 0;
    for n in 1..=8 {
        for lambda in Partition::all(n) {
            let (a, b) = basili_pair(&lambda, q());
            let cap = subspace_intersection(&a.kernel_basis(), &b.kernel_basis()).unwrap().len();
            let alg = algebra_dim_closure(&[a.clone(), b.clone()]).unwrap();
            let sc = self_centralizing_dim(&a, &b).unwrap();
            ensure(commute(&a, &b) && is_nilpotent_by_power(&b), || format!("{lambda}: pair"))?;
            ensure(cap == 1 && alg == n && sc == n, || {
                format!("{lambda}: ker cap {cap}, alg {alg}, self-centralizing {sc}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} partitions"))
}

/// Hand-written Jacobian of the two shaped-pair equations.
fn n2red_jacobian(x: &[Scalar]) -> Matrix {
    let f = x[0].field();
    let v = |i: usize| x[i].clone();
    let p = 9;
    let (a, c, e, ff, g, h, i) = (0, 2, 4, 5, 6, 7, 8);
    let mut j = Matrix::zeros(f, 2, 18);
    // cf' + eh' - c'f - e'h
    j.set(0, c, v(p + ff));
    j.set(0, p + ff, v(c));
    j.set(0, e, v(p + h));
    j.set(0, p + h, v(e));
    j.set(0, p + c, v(ff).neg());
    j.set(0, ff, v(p + c).neg());
    j.set(0, p + e, v(h).neg());
    j.set(0, h, v(p + e).neg());
    // ac' + cg' + ei' - a'c - c'g - e'i
    j.set(1, a, v(p + c));
    j.set(1, p + a, v(c).neg());
    j.set(1, c, &v(p + g) - &v(p + a));
    j.set(1, p + c, &v(a) - &v(g));
    j.set(1, g, v(p + c).neg());
    j.set(1, p + g, v(c));
    j.set(1, e, v(p + i));
    j.set(1, p + e, v(i).neg());
    j.set(1, i, v(p + e).neg());
    j.set(1, p + i, v(e));
    j
}

fn c5_n2red() -> Check {
    let f = fp(101);
    let (trials, seed) = (100, 7);
    let a = jordan_matrix(&"3,2,1".parse().unwrap(), f);
    let mut rank2 = 0;
    for t in 0..trials {
        let p: N2redPoint = n2red_sample(f, &mut trial_rng(seed, t)).map_err(|e| e.to_string())?;
        let x = p.coords();
        let eq1 = &(&(&x[2] * &x[14]) + &(&x[4] * &x[16])) - &(&(&x[11] * &x[5]) + &(&x[13] * &x[7]));
        let eq2 = &(&(&(&x[0] * &x[11]) + &(&x[2] * &x[15])) + &(&x[4] * &x[17]))
            - &(&(&(&x[9] * &x[2]) + &(&x[11] * &x[6])) + &(&x[13] * &x[8]));
        ensure(eq1.is_zero() && eq2.is_zero(), || format!("sample {t} off the equations"))?;
        let (b, c) = p.matrices();
        ensure(
            commute(&a, &b) && commute(&a, &c) && commute(&b, &c),
            || format!("sample {t} does not commute"),
        )?;
        ensure(is_nilpotent_by_power(&b) && is_nilpotent_by_power(&c), || {
            format!("sample {t} not nilpotent")
        })?;
        if n2red_jacobian(x).rank() == 2 {
            rank2 += 1;
        }
    }
    ensure(rank2 >= 95, || format!("Jacobian rank 2 at only {rank2}/100"))?;
    let w = basili_pair(&"3,2,1".parse().unwrap(), f).1;
    ensure(commute(&w, &a) && is_nilpotent_by_power(&w), || "witness not in N2(A)".into())?;
    ensure(n2red_unshape(&w).is_none() && !w.get(3, 5).is_zero(), || {
        "witness fits the shape".into()
    })?;
    let cert = n2red_certificate(f, trials, seed).map_err(|e| e.to_string())?;
    ensure(cert.passed(), || "certificate verdict is not pass".into())?;
    let get = |l: &str| cert.get(l).cloned().unwrap_or_default();
    ensure(get("d2_closure_dim") == 16 && get("witness_variety_local_dim") == 16, || {
        "certificate dimensions".into()
    })?;
    ensure(get("jacobian_rank2_samples") == rank2, || "certificate rank count differs".into())?;
    Ok(format!("100/100 samples valid, Jacobian rank 2 at {rank2}/100, witness checked"))
}

/// 6x6 assembled matrices pairwise commute and are nilpotent; `X_1` has rank 5.
fn assembled_ok(x: &[Matrix; 3]) -> (bool, bool) {
    let ok = (0..3).all(|i| is_nilpotent_by_power(&x[i]) && (0..3).all(|j| commute(&x[i], &x[j])));
    (ok, x[0].rank() == 5)
}

/// The linear constraints on `(Y_1, Y_2, Y_3, ζ)` as a 30-column system.
fn prop321_linear_system(f: FieldSpec) -> Matrix {
    let y = |i: usize, r: usize, c: usize| 9 * i + 3 * r + c;
    let z = |i: usize| 27 + i;
    // Z_i entries
    let zm: [[[i64; 2]; 3]; 3] = [
        [[0, 1], [0, 0], [1, 0]],
        [[0, 0], [1, 0], [0, 1]],
        [[1, 0], [0, 1], [0, 0]],
    ];
    let mut rows: Vec<[i64; 30]> = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            // row i of Y_j equals row j of Y_i
            for c in 0..3 {
                let mut r = [0; 30];
                r[y(j, i, c)] += 1;
                r[y(i, j, c)] -= 1;
                rows.push(r);
            }
            // Y_i Z_j + ζ_j Z_i J - Y_j Z_i - ζ_i Z_j J, with (Z J)[r][1] = Z[r][0]
            for rr in 0..3 {
                for c in 0..2 {
                    let mut r = [0; 30];
                    for k in 0..3 {
                        r[y(i, rr, k)] += zm[j][k][c];
                        r[y(j, rr, k)] -= zm[i][k][c];
                    }
                    if c == 1 {
                        r[z(j)] += zm[i][rr][0];
                        r[z(i)] -= zm[j][rr][0];
                    }
                    rows.push(r);
                }
            }
        }
        let mut r = [0; 30];
        for d in 0..3 {
            r[y(i, d, d)] = 1;
        }
        rows.push(r);
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| &r[..]).collect();
    Matrix::from_ints(f, &refs)
}

fn ys_from_vector(f: FieldSpec, v: &[Scalar]) -> [Matrix; 3] {
    [0, 1, 2].map(|i| Matrix::from_vector(f, 3, 3, v[9 * i..9 * i + 9].to_vec()).unwrap())
}

fn family_vector(s: &[Scalar; 4]) -> Vec<Scalar> {
    let (y, zeta) = prop321_family(&s[0], &s[1], &s[2], &s[3]).unwrap();
    let mut v: Vec<Scalar> = y.iter().flat_map(|m| m.vectorize()).collect();
    v.extend(zeta);
    v
}

fn c6_prop321() -> Check {
    // (i) generic tables
    let mut generic = Vec::new();
    generic.push((q(), q().zero()));
    generic.push((q(), q().ratio(2, 3).unwrap()));
    for p in [5, 7, 11] {
        for w in find_omega(fp(p)).unwrap() {
            generic.push((fp(p), w));
        }
    }
    for (f, w) in &generic {
        for beta in [f.one(), f.from_i64(2)] {
            let sol = prop321_solution(Prop321Case::Generic, &beta, Some(w), *f)
                .map_err(|e| format!("{f} ω={w}: {e}"))?;
            ensure(sol.report.all(), || format!("{f} ω={w}: {:?}", sol.report))?;
            let (ok, regular) = assembled_ok(&sol.x);
            ensure(ok, || format!("{f} ω={w}: assembled matrices"))?;
            ensure(sol.y.iter().all(is_nilpotent_by_power), || format!("{f} ω={w}: Y"))?;
            if !w.is_zero() {
                ensure(regular, || format!("{f} ω={w}: X1 not 1-regular"))?;
            }
        }
    }
    // (ii) characteristic 2 and 3
    for (case, f) in [(Prop321Case::Char2, fp(2)), (Prop321Case::Char3, fp(3))] {
        for b in f.elements().unwrap().into_iter().filter(|b| !b.is_zero()) {
            let sol = prop321_solution(case, &b, None, f).map_err(|e| e.to_string())?;
            ensure(sol.report.all() && assembled_ok(&sol.x).0, || format!("{case:?} β={b}"))?;
        }
    }
    // (iii) fibers against the kernel of the linear constraints
    let mut counts = Vec::new();
    for p in [2u32, 3] {
        let f = fp(p);
        let kernel = prop321_linear_system(f).kernel_basis();
        let dim = kernel.len();
        let mut expected = BTreeSet::new();
        let elems = f.elements().unwrap();
        for idx in 0..(p as usize).pow(dim as u32) {
            let mut v = vec![f.zero(); 30];
            let mut rest = idx;
            for k in &kernel {
                let c = &elems[rest % p as usize];
                rest /= p as usize;
                for (slot, e) in v.iter_mut().zip(k.entries()) {
                    *slot = &*slot + &(c * e);
                }
            }
            let ys = ys_from_vector(f, &v);
            let ok = (0..3).all(|i| {
                is_nilpotent_by_power(&ys[i]) && (0..3).all(|j| commute(&ys[i], &ys[j]))
            });
            if ok {
                expected.insert(v.iter().map(ToString::to_string).collect::<Vec<_>>());
            }
        }
        let brute = prop321_fiber_bruteforce(p as u64).map_err(|e| e.to_string())?;
        let got: BTreeSet<Vec<String>> = brute
            .iter()
            .map(|s| family_vector(s).iter().map(ToString::to_string).collect())
            .collect();
        ensure(got.len() == brute.len(), || format!("F_{p}: family map not injective"))?;
        ensure(got == expected, || {
            format!("F_{p}: brute force {} vs oracle {}", got.len(), expected.len())
        })?;
        if p == 3 {
            ensure(
                brute.iter().all(|s| (&s[0] * &s[3]).is_zero() && (&s[2] * &s[3]).is_zero()),
                || "F_3: αδ or γδ nonzero".into(),
            )?;
        }
        counts.push(format!("F_{p}: {} solutions (linear space dim {dim})", brute.len()));
    }
    Ok(format!("{} generic tables; {}", generic.len(), counts.join(", ")))
}

fn squarezero_ok(n: &Matrix, a: &Matrix, b: &Matrix) -> bool {
    !n.is_zero() && is_nilpotent_by_power(n) && commute(n, a) && commute(n, b)
}

fn lemma_blocks(w: &Matrix, v: &Matrix) -> (Matrix, Matrix) {
    let (f, l, m) = (w.field(), w.rows(), v.cols());
    let mut a = Matrix::zeros(f, 2 * l + m, 2 * l + m);
    a.set_block(0, l, &Matrix::identity(f, l));
    let mut b = Matrix::zeros(f, 2 * l + m, 2 * l + m);
    b.set_block(0, l, w);
    b.set_block(0, 2 * l, v);
    (a, b)
}

fn c7_squarezero() -> Check {
    let start = Instant::now();
    let mut runs = 0;
    for (fi, f) in [q(), fp(2)].into_iter().enumerate() {
        for l in 1..=6 {
            for m in 2..=4 {
                for t in 0..100u64 {
                    let mut rng = trial_rng(1000 * fi as u64 + 10 * l as u64 + m as u64, t);
                    let w = Matrix::random(f, l, l, &mut rng);
                    let v = Matrix::random(f, l, m, &mut rng);
                    let res = squarezero_commutant(&w, &v)
                        .map_err(|e| format!("{f} l={l} m={m} trial {t}: {e}"))?;
                    let (a, b) = lemma_blocks(&w, &v);
                    ensure(squarezero_ok(&res.n, &a, &b), || {
                        format!("{f} l={l} m={m} trial {t}: {:?}", res.branch)
                    })?;
                    runs += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for t in 0..100 {
        let f = if t % 2 == 0 { q() } else { fp(3) };
        let l = 1 + t % 6;
        let ef = Matrix::random(f, l, l - 1, &mut rng)
            .mul(&Matrix::random(f, l - 1, l + 1, &mut rng))
            .unwrap();
        let (e, fc) = (ef.block(0, 0, l, l), ef.block(0, l, l, 1));
        let res = squarezero_commutant_m1(&e, &fc).map_err(|e| format!("m=1 trial {t}: {e}"))?;
        let (a, b) = lemma_blocks(&e, &fc);
        ensure(squarezero_ok(&res.n, &a, &b), || format!("m=1 trial {t}"))?;
        runs += 1;
    }
    within(start, Duration::from_secs(60), "criterion 7")?;
    Ok(format!("{runs} instances in {:?}", start.elapsed()))
}

fn c8_prop1nonzero() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for trial in 0..50 {
        let f = if trial % 2 == 0 { fp(101) } else { q() };
        let n = rng.gen_range(4..=9);
        let k = rng.gen_range(2..=n - 2);
        let (s, t) = (f.random_nonzero(&mut rng), f.random_nonzero(&mut rng));
        let (y, z) = prop1nonzero_pair(k, n, &s, &t).map_err(|e| e.to_string())?;
        let ctx = || format!("trial {trial}: k={k} n={n} over {f}");
        ensure(y.mul(&y).unwrap().is_zero() && z.mul(&z).unwrap().is_zero(), || ctx() + ": square")?;
        ensure(commute(&y, &z), || ctx() + ": [Y,Z]")?;
        let (beta, gamma) = (&s * &s, &t * &t);
        let size = n - k;
        let x = y.block(k, k, size, size);
        let xp = z.block(k, k, size, size);
        ensure(xp.block(0, 0, 1, size) == x.block(1, 0, 1, size), || ctx() + ": e1^T X' = e2^T X")?;
        ensure(
            xp.block(0, 0, size, 1).scale(&beta).unwrap()
                == x.block(0, 1, size, 1).scale(&gamma.neg()).unwrap(),
            || ctx() + ": beta X' e1 = -gamma X e2",
        )?;
        let (a, b, c) = prop1nonzero_base_triple(k, n, &beta, &gamma).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let lam = f.random_nonzero(&mut rng);
            let mats = vec![
                a.clone(),
                b.add(&y.scale(&lam).unwrap()).unwrap(),
                c.add(&z.scale(&lam).unwrap()).unwrap(),
            ];
            let direct = mats.iter().all(is_nilpotent_by_power)
                && mats.iter().all(|m| mats.iter().all(|o| commute(m, o)));
            ensure(direct, || ctx() + &format!(": λ={lam}"))?;
            NilTuple::new(f, n, mats).map_err(|e| ctx() + &format!(": {e}"))?;
        }
    }
    Ok("50 parameter draws, 10 values of λ each".into())
}

fn c9_curves() -> Check {
    let f = fp(101);
    let mut count = 0;
    for n in 1..=7 {
        for lambda in Partition::all(n) {
            let fam = regularization_family(&lambda, f).extend_by_zeros(2);
            let z = Matrix::zeros(f, n, n);
            let target = NilTuple::new(f, n, vec![jordan_matrix(&lambda, f), z.clone(), z]).unwrap();
            let cert = curve_verify(&fam, &target, 20, count).map_err(|e| e.to_string())?;
            ensure(cert.passed(), || format!("{lambda}: {:?}", cert.verdict))?;
            ensure(
                cert.get("basepoint").unwrap() == "exact"
                    && cert.get("samples_one_regular").unwrap() == 20,
                || format!("{lambda}: evidence"),
            )?;
            // regularity along the curve, checked by rank
            let mut rng = trial_rng(count, 0);
            for _ in 0..20 {
                let at = &fam.eval(&f.random_nonzero(&mut rng)).unwrap()[0];
                ensure(at.rank() + 1 == n, || format!("{lambda}: rank along the curve"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} partitions, 20 samples each"))
}

/// A random commuting tuple: `A` in grouped Jordan form, `B` a random
/// nilpotent element of its centralizer, further generators polynomials in
/// `A` and `B`, all conjugated by a random invertible matrix.
fn random_tuple(f: FieldSpec, n: usize, d: usize, rng: &mut ChaCha8Rng) -> Vec<Matrix> {
    let types = Partition::all(n);
    let lambda = &types[rng.gen_range(0..types.len())];
    let g = GroupedJordan::from_partition(lambda);
    let a = g.matrix(f);
    let b = g.centralizer_element(f, &g.random_params(f, true, rng)).unwrap();
    let mut mats = vec![a.clone(), b.clone()];
    while mats.len() < d {
        let mut p = MultiPoly::zero(f, 2);
        for _ in 0..3 {
            let e = vec![rng.gen_range(0..3u32), rng.gen_range(0..3u32)];
            if e != [0, 0] {
                p.add_term(e, f.random(rng)).unwrap();
            }
        }
        mats.push(nilcommute::closure::eval_bivariate(&p, &a, &b).unwrap());
    }
    mats.truncate(d);
    let p = Matrix::random_invertible(f, n, rng);
    mats.iter().map(|m| m.conjugate(&p).unwrap()).collect()
}

fn c10_algebra_oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut pairs = 0;
    for trial in 0..200 {
        let f = if trial % 2 == 0 { q() } else { fp(3) };
        let n = rng.gen_range(1..=6);
        let d = rng.gen_range(1..=4);
        let mats = random_tuple(f, n, d, &mut rng);
        let mono = algebra_dim_monomial(&mats).unwrap();
        let clos = algebra_dim_closure(&mats).unwrap();
        ensure(mono == clos, || format!("trial {trial}: {mono} != {clos}"))?;
        if d == 2 {
            ensure(clos <= n, || format!("trial {trial}: pair with dim {clos} > {n}"))?;
            pairs += 1;
        }
    }
    Ok(format!("200 tuples agree, {pairs} pairs within the bound"))
}

fn c11_double_centralizer() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    for f in [q(), fp(2)] {
        for trial in 0..50 {
            let n = 1 + trial % 6;
            let x = random_nilpotent(f, n, &mut rng).unwrap();
            let dc = double_centralizer_basis(&x).unwrap();
            let powers: Vec<Matrix> = (0..n as u32).map(|k| x.pow(k).unwrap()).collect();
            let mut all = dc.clone();
            all.extend(powers.iter().cloned());
            let (a, b, c) = (
                span_dimension(&dc).unwrap(),
                span_dimension(&powers).unwrap(),
                span_dimension(&all).unwrap(),
            );
            ensure(a == b && b == c, || format!("{f} trial {trial}: {a}, {b}, {c}"))?;
        }
    }
    Ok("50 matrices per field over q and fp:2".into())
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/tests")
}

fn c12_determinism() -> Check {
    let dir = golden_dir();
    let fixtures = dir.join("fixtures");
    let text = std::fs::read_to_string(dir.join("golden/cases.txt")).map_err(|e| e.to_string())?;
    let mut commands = BTreeSet::new();
    let mut cases = 0;
    for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let (name, args) = line.split_once('|').ok_or("malformed case line")?;
        let name = name.trim();
        let argv: Vec<String> = std::iter::once("nilcommute".to_string())
            .chain(args.split_whitespace().map(|a| a.replace("{fixtures}", fixtures.to_str().unwrap())))
            .collect();
        commands.insert(argv[1].clone());
        let first = nilcommute_cli::run(&argv);
        let second = nilcommute_cli::run(&argv);
        ensure(first.code == 0, || format!("{name}: exit {} {}", first.code, first.stderr))?;
        ensure(first == second, || format!("{name}: runs differ"))?;
        let golden = std::fs::read_to_string(dir.join("golden").join(format!("{name}.json")))
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(first.stdout == golden, || format!("{name}: differs from golden file"))?;
        cases += 1;
    }
    let all = [
        "gerstenhaber", "basili", "centralizer", "algebra-dim", "n2red", "prop321",
        "squarezero", "prop1nonzero", "curve-verify", "sample-r1", "dims",
        "certify-reducible", "transform",
    ];
    let missing: Vec<&str> = all.iter().copied().filter(|c| !commands.contains(*c)).collect();
    ensure(missing.is_empty(), || format!("no golden case for {missing:?}"))?;
    Ok(format!("{cases} golden cases covering {} subcommands", commands.len()))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 12] = [
        ("Gerstenhaber witness dimension n+1", c1_gerstenhaber),
        ("closure dimension formulas", c2_formulas),
        ("centralizer dimension oracle", c3_centralizer),
        ("Basili pairs", c4_basili),
        ("N2red certificate", c5_n2red),
        ("3+2+1 solution tables and fibers", c6_prop321),
        ("square-zero commutant", c7_squarezero),
        ("perturbation pair", c8_prop1nonzero),
        ("curve verification", c9_curves),
        ("algebra dimension oracles", c10_algebra_oracles),
        ("double centralizer", c11_double_centralizer),
        ("CLI determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
