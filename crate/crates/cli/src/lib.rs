//! Command-line front end. [`run`] takes an argument vector and returns the
//! exit code together with what would be written to stdout and stderr.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nilcommute::algebra::{algebra_dim_closure, algebra_dim_monomial, self_centralizing_dim, NilTuple};
use nilcommute::certificate::{Certificate, Verdict};
use nilcommute::closure::{
    certify_reducible, curve_verify, d2_closure_dim, flip_matrix, r1_closure_dim,
    regularization_family, sample_r1, ParamFamily, TupleTransform,
};
use nilcommute::io::{matrices_from_json, matrix_to_json, tuple_from_json, tuple_to_json};
use nilcommute::jordan::{
    centralizer_basis, centralizer_dim_formula, jordan_matrix, nilpotent_centralizer_dim, Partition,
};
use nilcommute::linalg::{subspace_intersection, UniPoly};
use nilcommute::parallel::{map_trials, trial_rng};
use nilcommute::witnesses::{
    basili_pair, gerstenhaber_quadruple, n2red_certificate, prop1nonzero_base_triple,
    prop1nonzero_blocks, prop1nonzero_boundary_identities, prop1nonzero_pair,
    prop321_fiber_bruteforce, prop321_solution, squarezero_commutant, squarezero_commutant_m1,
    Prop321Case,
};
use nilcommute::{Error, FieldSpec, Matrix, Result, Scalar};

#[derive(Parser, Debug)]
#[command(name = "nilcommute", version, about = "Exact checks for commuting nilpotent matrices")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// `q` or `fp:<p>`
    #[arg(long, global = true, default_value = "q")]
    pub field: FieldSpec,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Algebra dimension of the four-generator witness.
    Gerstenhaber {
        #[arg(long)]
        n: usize,
    },
    /// Checks on the Basili pair of a Jordan type.
    Basili {
        #[arg(long)]
        partition: Partition,
    },
    /// Centralizer dimensions of `J_λ` against the formulas.
    Centralizer {
        #[arg(long)]
        partition: Partition,
    },
    /// Dimension of the algebra generated by a tuple file.
    AlgebraDim {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Reducibility evidence for the pair variety over `J_3 ⊕ J_2 ⊕ J_1`.
    N2red,
    /// Solution tables (`--case`) or brute-force fibers (`--fiber p`).
    Prop321 {
        #[arg(long, conflicts_with = "fiber")]
        case: Option<Prop321Case>,
        #[arg(long)]
        fiber: Option<u64>,
        #[arg(long, default_value = "1")]
        beta: String,
        #[arg(long)]
        omega: Option<String>,
    },
    /// Random square-zero commutant instances.
    Squarezero {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
    },
    /// Random perturbation pairs of the rank-one triple.
    Prop1nonzero {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Curve evidence for closure membership. Defaults to the
    /// regularization family of `--partition` padded with zero matrices.
    CurveVerify {
        #[arg(long, required_unless_present = "family")]
        partition: Option<Partition>,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long, requires = "target")]
        family: Option<PathBuf>,
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// A random tuple with a 1-regular first matrix.
    SampleR1 {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
    },
    /// Table of the closure dimension formulas.
    Dims {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        max_d: usize,
    },
    /// Algebra-dimension obstruction for a tuple file.
    CertifyReducible {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Applies a reduction transform and checks its inverse.
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        kind: TransformKind,
        /// Matrix file for `conjugate` or `twisted-transpose`; random or the
        /// flip matrix when absent.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum TransformKind {
    Conjugate,
    SpanChange,
    PolyShift,
    Transpose,
    TwistedTranspose,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Output {
    Cert(Certificate),
    Data(Value),
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = execute(&cli.config, &cli.command).and_then(|out| {
        let (text, code) = match out {
            Output::Cert(c) => {
                let code = if c.verdict == Verdict::Fail { 1 } else { 0 };
                (c.to_json(), code)
            }
            Output::Data(v) => (serde_json::to_string_pretty(&v).expect("serializable"), 0),
        };
        let text = text + "\n";
        match &cli.config.out {
            Some(path) => {
                std::fs::write(path, &text).map_err(|e| {
                    Error::Precondition(format!("cannot write {}: {e}", path.display()))
                })?;
                Ok((String::new(), code))
            }
            None => Ok((text, code)),
        }
    });
    match result {
        Ok((stdout, code)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Schema {
        path: String::new(),
        msg: e.to_string(),
    })
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn execute(cfg: &RunConfig, cmd: &Command) -> Result<Output> {
    let f = cfg.field;
    Ok(match cmd {
        Command::Gerstenhaber { n } => {
            let t = gerstenhaber_quadruple(*n, f)?;
            let mono = algebra_dim_monomial(t.mats())?;
            let closure = algebra_dim_closure(t.mats())?;
            let mut c = Certificate::new("gerstenhaber", f, cfg.seed, 0);
            c.push("n", *n);
            c.push("algebra_dim", closure);
            c.push("algebra_dim_monomial", mono);
            c.push("tuple", tuple_to_json(&t));
            c.verdict = verdict(mono == closure && closure == n + 1);
            Output::Cert(c)
        }
        Command::Basili { partition } => {
            let (a, b) = basili_pair(partition, f);
            let n = partition.n();
            let cap = subspace_intersection(&a.kernel_basis(), &b.kernel_basis())?.len();
            let alg = algebra_dim_closure(&[a.clone(), b.clone()])?;
            let sc = self_centralizing_dim(&a, &b)?;
            let mut c = Certificate::new("basili", f, cfg.seed, 0);
            c.push("partition", partition.to_string());
            c.push("kernel_intersection_dim", cap);
            c.push("algebra_dim", alg);
            c.push("self_centralizing_dim", sc);
            c.push("a", matrix_to_json(&a));
            c.push("b", matrix_to_json(&b));
            c.verdict = verdict(cap == 1 && alg == n && sc == n);
            Output::Cert(c)
        }
        Command::Centralizer { partition } => {
            let a = jordan_matrix(partition, f);
            let dim = centralizer_basis(&a)?.len();
            let formula = centralizer_dim_formula(partition);
            let nil = nilpotent_centralizer_dim(partition);
            let mut c = Certificate::new("centralizer", f, cfg.seed, 0);
            c.push("partition", partition.to_string());
            c.push("centralizer_dim", dim);
            c.push("formula", formula);
            c.push("nilpotent_centralizer_dim", nil);
            c.verdict = verdict(dim == formula && nil + partition.len() == formula);
            Output::Cert(c)
        }
        Command::AlgebraDim { input } => {
            let t = tuple_from_json(&read_json(input)?)?;
            let mono = algebra_dim_monomial(t.mats())?;
            let closure = algebra_dim_closure(t.mats())?;
            let mut c = Certificate::new("algebra-dim", t.field(), cfg.seed, 0);
            c.push("n", t.n());
            c.push("d", t.d());
            c.push("algebra_dim_monomial", mono);
            c.push("algebra_dim_closure", closure);
            c.verdict = verdict(mono == closure && closure <= t.n().max(1).pow(2));
            Output::Cert(c)
        }
        Command::N2red => Output::Cert(n2red_certificate(f, cfg.trials, cfg.seed)?),
        Command::Prop321 { case, fiber, beta, omega } => match (case, fiber) {
            (_, Some(p)) => {
                let sols = prop321_fiber_bruteforce(*p)?;
                let fp = FieldSpec::prime(*p)?;
                let mut c = Certificate::new("prop321-fiber", fp, cfg.seed, 0);
                let text: Vec<Vec<String>> = sols
                    .iter()
                    .map(|s| s.iter().map(ToString::to_string).collect())
                    .collect();
                let products_vanish = sols
                    .iter()
                    .all(|s| (&s[0] * &s[3]).is_zero() && (&s[2] * &s[3]).is_zero());
                c.push("p", *p);
                c.push("parameter_tuples", p.pow(4));
                c.push("solutions", text.len());
                c.push("alpha_delta_gamma_delta_vanish", products_vanish);
                c.push("solutions_alpha_beta_gamma_delta", json!(text));
                c.verdict = Verdict::Pass;
                Output::Cert(c)
            }
            (Some(case), None) => {
                let b = f.parse_scalar(beta)?;
                let w = omega.as_deref().map(|s| f.parse_scalar(s)).transpose()?;
                let sol = prop321_solution(*case, &b, w.as_ref(), f)?;
                let mut c = Certificate::new("prop321", f, cfg.seed, 0);
                c.push("case", serde_json::to_value(case).expect("serializable"));
                for (label, v) in [
                    ("alpha", &sol.alpha),
                    ("beta", &sol.beta),
                    ("gamma", &sol.gamma),
                    ("delta", &sol.delta),
                ] {
                    c.push(label, v.to_string());
                }
                c.push("omega", sol.omega.as_ref().map(ToString::to_string));
                c.push("constraints", serde_json::to_value(sol.report).expect("serializable"));
                c.push("x1_one_regular", sol.x1_one_regular);
                c.push("y", json!(sol.y.iter().map(matrix_to_json).collect::<Vec<_>>()));
                c.push("zeta", json!(sol.zeta.iter().map(ToString::to_string).collect::<Vec<_>>()));
                c.push("x", json!(sol.x.iter().map(matrix_to_json).collect::<Vec<_>>()));
                c.verdict = verdict(sol.report.all());
                Output::Cert(c)
            }
            (None, None) => {
                return Err(Error::Precondition("one of --case or --fiber is required".into()))
            }
        },
        Command::Squarezero { l, m } => {
            let (l, m) = (*l, *m);
            if l == 0 {
                return Err(Error::BadShape("l must be positive".into()));
            }
            let results = map_trials(cfg.trials, cfg.seed, |_, rng| -> Result<(bool, String)> {
                let w = Matrix::random(f, l, l, rng);
                let res = if m == 1 {
                    let ef = Matrix::random(f, l, l - 1, rng).mul(&Matrix::random(f, l - 1, l + 1, rng))?;
                    squarezero_commutant_m1(&ef.block(0, 0, l, l), &ef.block(0, l, l, 1))?
                } else {
                    squarezero_commutant(&w, &Matrix::random(f, l, m, rng))?
                };
                Ok((res.verify()?, res.branch.label()))
            });
            let results = results.into_iter().collect::<Result<Vec<_>>>()?;
            let verified = results.iter().filter(|r| r.0).count() as u64;
            let mut branches = std::collections::BTreeMap::<String, u64>::new();
            for (_, b) in &results {
                *branches.entry(b.clone()).or_default() += 1;
            }
            let mut c = Certificate::new("squarezero", f, cfg.seed, cfg.trials);
            c.push("l", l);
            c.push("m", m);
            c.push("verified", verified);
            c.push("branches", json!(branches));
            c.verdict = verdict(verified == cfg.trials);
            Output::Cert(c)
        }
        Command::Prop1nonzero { k, n } => {
            let (k, n) = (*k, *n);
            prop1nonzero_base_triple(k, n, &f.one(), &f.one())?;
            let results = map_trials(cfg.trials, cfg.seed, |_, rng| -> Result<bool> {
                let (s, t) = (f.random_nonzero(rng), f.random_nonzero(rng));
                prop1nonzero_trial(k, n, &s, &t, &f.random_nonzero(rng))
            });
            let ok = results.into_iter().collect::<Result<Vec<_>>>()?;
            let passed = ok.iter().filter(|&&b| b).count() as u64;
            let mut c = Certificate::new("prop1nonzero", f, cfg.seed, cfg.trials);
            c.push("k", k);
            c.push("n", n);
            c.push("verified", passed);
            c.verdict = verdict(passed == cfg.trials);
            Output::Cert(c)
        }
        Command::CurveVerify { partition, extra, family, target } => {
            let (fam, tgt) = match (family, target) {
                (Some(fp), Some(tp)) => {
                    let fam = ParamFamily::from_json(&read_json(fp)?)?;
                    (fam, tuple_from_json(&read_json(tp)?)?)
                }
                _ => {
                    let lambda = partition.as_ref().expect("clap enforces presence");
                    let fam = regularization_family(lambda, f).extend_by_zeros(*extra);
                    let n = lambda.n();
                    let mut mats = vec![jordan_matrix(lambda, f)];
                    mats.extend((0..*extra).map(|_| Matrix::zeros(f, n, n)));
                    (fam, NilTuple::new(f, n, mats)?)
                }
            };
            Output::Cert(curve_verify(&fam, &tgt, cfg.trials, cfg.seed)?)
        }
        Command::SampleR1 { d, n } => Output::Data(tuple_to_json(&sample_r1(*d, *n, cfg.seed, f)?)),
        Command::Dims { max_n, max_d } => {
            let r1: Vec<Value> = (1..=*max_d)
                .flat_map(|d| {
                    (1..=*max_n).map(move |n| json!({"d": d, "n": n, "dim": r1_closure_dim(d, n)}))
                })
                .collect();
            let d2: Vec<Value> = (1..=*max_n)
                .flat_map(Partition::all)
                .map(|l| json!({"partition": l.to_string(), "dim": d2_closure_dim(&l)}))
                .collect();
            Output::Data(json!({"r1_closure_dim": r1, "d2_closure_dim": d2}))
        }
        Command::CertifyReducible { input } => {
            Output::Cert(certify_reducible(&tuple_from_json(&read_json(input)?)?)?)
        }
        Command::Transform { input, kind, matrix } => {
            let t = tuple_from_json(&read_json(input)?)?;
            let mut rng = trial_rng(cfg.seed, 0);
            let tf = t.field();
            let given = |path: &PathBuf| -> Result<Matrix> {
                let (_, _, mut ms) = matrices_from_json(&json!({
                    "field": tf, "n": t.n(), "mats": [read_json(path)?]
                }))?;
                Ok(ms.remove(0))
            };
            let tr = match kind {
                TransformKind::Conjugate => TupleTransform::Conjugate(match matrix {
                    Some(p) => given(p)?,
                    None => Matrix::random_invertible(tf, t.n(), &mut rng),
                }),
                TransformKind::SpanChange => {
                    TupleTransform::SpanChange(Matrix::random_invertible(tf, t.d(), &mut rng))
                }
                TransformKind::PolyShift => TupleTransform::PolyShift(
                    (1..t.d())
                        .map(|_| {
                            let mut cs: Vec<Scalar> = (0..t.n().max(1)).map(|_| tf.random(&mut rng)).collect();
                            cs[0] = tf.zero();
                            UniPoly::new(tf, cs)
                        })
                        .collect::<Result<_>>()?,
                ),
                TransformKind::Transpose => TupleTransform::Transpose,
                TransformKind::TwistedTranspose => TupleTransform::TwistedTranspose(match matrix {
                    Some(q) => given(q)?,
                    None => flip_matrix(tf, t.n()),
                }),
            };
            let out = tr.apply(&t)?;
            if tr.inverse()?.apply(&out)? != t {
                return Err(Error::Invariant("inverse transform did not recover the input".into()));
            }
            Output::Data(tuple_to_json(&out))
        }
    })
}

/// One sample of the perturbation check: square-zero commuting `Y, Z`, the
/// boundary identities, and validity of `(A, B + λY, C + λZ)`.
fn prop1nonzero_trial(k: usize, n: usize, s: &Scalar, t: &Scalar, lambda: &Scalar) -> Result<bool> {
    let f = s.field();
    let (y, z) = prop1nonzero_pair(k, n, s, t)?;
    let (beta, gamma) = (s * s, t * t);
    let (x, xp) = prop1nonzero_blocks(n - k, s, t)?;
    let mut ok = y.mul(&y)?.is_zero() && z.mul(&z)?.is_zero() && y.commutes_with(&z)?;
    ok &= prop1nonzero_boundary_identities(&x, &xp, &beta, &gamma)?;
    let (a, b, c) = prop1nonzero_base_triple(k, n, &beta, &gamma)?;
    let mats = vec![a, b.add(&y.scale(lambda)?)?, c.add(&z.scale(lambda)?)?];
    ok &= NilTuple::new(f, n, mats).is_ok();
    Ok(ok)
}
