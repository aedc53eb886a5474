//! Exact scalars over the rationals and over prime fields.
//!
//! A [`FieldSpec`] names the ground field; a [`Scalar`] is an element of one
//! such field. Rationals are arbitrary precision and always kept in lowest
//! terms; residues are canonical representatives in `[0, p)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible prime modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

/// Range of the integers drawn when sampling "random" rationals.
const RATIONAL_SAMPLE_BOUND: i64 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p as u64,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Residue {
                value: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    /// The element `num / den`.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        self.from_i64(num).div(&self.from_i64(den))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(v.clone())),
            FieldSpec::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Residue {
                    value: r.to_u32().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    /// Uniform residue over `F_p`; a small integer in `[-9, 9]` over `Q`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match *self {
            FieldSpec::Rationals => {
                self.from_i64(rng.gen_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND))
            }
            FieldSpec::Prime(p) => Scalar::Residue {
                value: rng.gen_range(0..p),
                modulus: p,
            },
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// All elements of a prime field, in increasing residue order.
    pub fn elements(&self) -> Result<Vec<Scalar>> {
        match *self {
            FieldSpec::Rationals => Err(Error::Precondition(
                "the rationals cannot be enumerated".into(),
            )),
            FieldSpec::Prime(p) => Ok((0..p)
                .map(|value| Scalar::Residue { value, modulus: p })
                .collect()),
        }
    }

    /// Parses `"a"`, `"-a"` or `"a/b"` into an element of this field.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let bad = |msg: &str| Error::Schema {
            path: String::new(),
            msg: format!("{msg}: {s:?}"),
        };
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| bad("malformed numerator"))?;
        let den = BigInt::from_str(den).map_err(|_| bad("malformed denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        let d = self.from_bigint(&den);
        if d.is_zero() {
            return Err(bad("denominator vanishes in this field"));
        }
        self.from_bigint(&num).div(&d)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `q` or `fp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p.parse().map_err(|_| Error::Schema {
                path: "field".into(),
                msg: format!("malformed prime in {s:?}"),
            })?;
            return FieldSpec::prime(p);
        }
        Err(Error::Schema {
            path: "field".into(),
            msg: format!("expected `q` or `fp:<p>`, got {s:?}"),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct FieldSpecJson {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p: Option<u64>,
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match self {
            FieldSpec::Rationals => FieldSpecJson { kind: "q".into(), p: None },
            FieldSpec::Prime(p) => FieldSpecJson {
                kind: "fp".into(),
                p: Some(*p as u64),
            },
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = FieldSpecJson::deserialize(d)?;
        match (json.kind.as_str(), json.p) {
            ("q", None) => Ok(FieldSpec::Rationals),
            ("fp", Some(p)) => FieldSpec::prime(p).map_err(D::Error::custom),
            (kind, _) => Err(D::Error::custom(format!(
                "bad field spec: kind {kind:?}, p {:?}",
                json.p
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u32, modulus: u32 },
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    fn residues(&self, other: &Scalar) -> Result<Option<(u64, u64, u64)>> {
        match (self, other) {
            (Scalar::Rational(_), Scalar::Rational(_)) => Ok(None),
            (
                Scalar::Residue { value: a, modulus: p },
                Scalar::Residue { value: b, modulus: q },
            ) if p == q => Ok(Some((*a as u64, *b as u64, *p as u64))),
            _ => Err(Error::FieldMismatch),
        }
    }

    fn residue(value: u64, p: u64) -> Scalar {
        Scalar::Residue {
            value: value as u32,
            modulus: p as u32,
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.residues(other)? {
            Some((a, b, p)) => Scalar::residue((a + b) % p, p),
            None => Scalar::Rational(self.as_rational() + other.as_rational()),
        })
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.residues(other)? {
            Some((a, b, p)) => Scalar::residue((a + p - b) % p, p),
            None => Scalar::Rational(self.as_rational() - other.as_rational()),
        })
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.residues(other)? {
            Some((a, b, p)) => Scalar::residue(a * b % p, p),
            None => Scalar::Rational(self.as_rational() * other.as_rational()),
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        let inv = other.inv()?;
        self.mul(&inv)
    }

    pub fn arith(&self, other: &Scalar, op: ArithOp) -> Result<Scalar> {
        match op {
            ArithOp::Add => self.add(other),
            ArithOp::Sub => self.sub(other),
            ArithOp::Mul => self.mul(other),
            ArithOp::Div => self.div(other),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, modulus } => {
                let p = *modulus as u64;
                Scalar::residue(mod_pow(*value as u64, p - 2, p), p)
            }
        })
    }

    pub fn pow(&self, exp: u64) -> Scalar {
        match self {
            Scalar::Rational(r) => {
                let mut acc = BigRational::one();
                for _ in 0..exp {
                    acc *= r;
                }
                Scalar::Rational(acc)
            }
            Scalar::Residue { value, modulus } => {
                let p = *modulus as u64;
                Scalar::residue(mod_pow(*value as u64, exp, p), p)
            }
        }
    }

    /// Multiplies by a machine integer, reduced into the field.
    pub fn scale_int(&self, k: i64) -> Scalar {
        self * &self.field().from_i64(k)
    }

    fn as_rational(&self) -> &BigRational {
        match self {
            Scalar::Rational(r) => r,
            Scalar::Residue { .. } => unreachable!("residue used as rational"),
        }
    }

    /// The rational value, when this scalar lives in `Q`.
    pub fn to_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Residue { .. } => None,
        }
    }

    /// Canonical residue, when this scalar lives in `F_p`.
    pub fn residue_value(&self) -> Option<u32> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Residue { value, .. } => Some(*value),
        }
    }

    /// A total order used only to make outputs deterministic.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Residue { value: a, .. }, Scalar::Residue { value: b, .. }) => a.cmp(b),
            (Scalar::Rational(_), _) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar operands from one field")
            }
        }
    };
}

panicking_op!(Add, add, add);
panicking_op!(Sub, sub, sub);
panicking_op!(Mul, mul, mul);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

/// All `w` in the field with `w (27 w^3 - 8) = 0`, sorted, always starting with `0`.
///
/// Over `Q` the candidates come from the rational root theorem. Over `F_p`
/// small fields are enumerated; large ones use `w = (2/3) z` with `z^3 = 1`.
pub fn find_omega(f: FieldSpec) -> Result<Vec<Scalar>> {
    let ch = f.characteristic();
    if ch == 2 || ch == 3 {
        return Err(Error::UnsupportedCharacteristic(ch));
    }
    let is_root = |w: &Scalar| {
        let w3 = w.pow(3);
        let inner = &w3.scale_int(27) - &f.from_i64(8);
        (w * &inner).is_zero()
    };
    let mut roots: Vec<Scalar> = match f {
        FieldSpec::Rationals => {
            let mut out = vec![f.zero()];
            for num in [1i64, 2, 4, 8] {
                for den in [1i64, 3, 9, 27] {
                    for sign in [1i64, -1] {
                        let w = f.ratio(sign * num, den)?;
                        if is_root(&w) && !out.contains(&w) {
                            out.push(w);
                        }
                    }
                }
            }
            out
        }
        FieldSpec::Prime(p) if p <= (1 << 16) => {
            f.elements()?.into_iter().filter(|w| is_root(w)).collect()
        }
        FieldSpec::Prime(p) => {
            let p64 = p as u64;
            let two_thirds = f.ratio(2, 3)?;
            let mut cube_roots_of_unity = vec![f.one()];
            if (p64 - 1).is_multiple_of(3) {
                let e = (p64 - 1) / 3;
                let zeta = (2..p64)
                    .map(|g| mod_pow(g, e, p64))
                    .find(|&z| z != 1)
                    .expect("a non-cube exists when 3 | p - 1");
                cube_roots_of_unity.push(f.from_i64(zeta as i64));
                cube_roots_of_unity.push(f.from_i64((zeta * zeta % p64) as i64));
            }
            let mut out = vec![f.zero()];
            out.extend(cube_roots_of_unity.iter().map(|z| &two_thirds * z));
            out
        }
    };
    roots.sort_by(|a, b| a.canonical_cmp(b));
    roots.dedup();
    debug_assert!(roots.iter().all(is_root));
    Ok(roots)
}

/// Height `max(|a|, b)` of a rational `a/b`; `None` over `F_p`.
pub fn rational_height(s: &Scalar) -> Option<BigInt> {
    s.to_rational()
        .map(|r| r.numer().abs().max(r.denom().clone()))
}
