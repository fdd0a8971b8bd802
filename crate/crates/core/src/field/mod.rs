//! Exact scalars over `Q`, number fields `Q[x]/(m(x))` and prime fields `F_p`.
//!
//! Every scalar carries its field, arithmetic between scalars of different
//! fields is an error, and representations are canonical: fractions are in
//! lowest terms, extension elements are reduced modulo the minimal
//! polynomial and prime-field residues lie in `[0, p)`. Two scalars are
//! equal exactly when their representations are identical.

pub mod modular;
mod numberfield;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use numberfield::NumberField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field mismatch: {left} vs {right}")]
    Mismatch { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("reducible modulus witness: factor {factor}")]
    ReducibleModulus { factor: String },
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("{root} is not a root of the minimal polynomial mod {p}")]
    NotARoot { p: u64, root: u64 },
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("cannot parse scalar `{token}`: {reason}")]
    Parse { token: String, reason: String },
}

/// Which exact field the scalars of an arrangement live in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    Extension(Arc<NumberField>),
    Prime(u64),
}

impl FieldDescriptor {
    pub fn extension(modulus: Vec<BigRational>) -> Result<Self, FieldError> {
        Ok(Self::Extension(Arc::new(NumberField::new(modulus)?)))
    }

    /// Extension from integer coefficients `c0, c1, ..., ck`.
    pub fn extension_from_integers(coeffs: &[i64]) -> Result<Self, FieldError> {
        Ok(Self::Extension(Arc::new(NumberField::from_integers(coeffs)?)))
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= modular::MAX_PRIME || !modular::is_prime(p) {
            return Err(FieldError::InvalidDescriptor(format!(
                "{p} is not a supported prime"
            )));
        }
        Ok(Self::Prime(p))
    }

    /// Prime fields must have characteristic larger than the arrangement
    /// degree, otherwise derivatives and binomials degenerate.
    pub fn check_characteristic(&self, degree: usize) -> Result<(), FieldError> {
        match self {
            Self::Prime(p) if *p <= degree as u64 => Err(FieldError::BadPrime {
                p: *p,
                reason: format!("characteristic must exceed the degree {degree}"),
            }),
            _ => Ok(()),
        }
    }

    pub fn zero(&self) -> FieldScalar {
        self.from_integer(&BigInt::zero())
    }

    pub fn one(&self) -> FieldScalar {
        self.from_integer(&BigInt::one())
    }

    pub fn from_i64(&self, n: i64) -> FieldScalar {
        self.from_integer(&BigInt::from(n))
    }

    pub fn from_integer(&self, n: &BigInt) -> FieldScalar {
        self.from_rational(&BigRational::from_integer(n.clone()))
            .expect("integers embed in every field")
    }

    /// Image of a rational number; fails in `F_p` when `p` divides the
    /// denominator.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldScalar, FieldError> {
        Ok(match self {
            Self::Rationals => FieldScalar::Rational(q.clone()),
            Self::Extension(k) => {
                let mut coeffs = vec![BigRational::zero(); k.degree()];
                coeffs[0] = q.clone();
                FieldScalar::Extension {
                    field: k.clone(),
                    coeffs,
                }
            }
            Self::Prime(p) => FieldScalar::Prime {
                p: *p,
                value: rational_mod_p(q, *p)?,
            },
        })
    }

    /// The generator `a` of an extension field.
    pub fn generator(&self) -> Option<FieldScalar> {
        match self {
            Self::Extension(k) => {
                let mut coeffs = vec![BigRational::zero(); k.degree()];
                coeffs[1] = BigRational::one();
                Some(FieldScalar::Extension {
                    field: k.clone(),
                    coeffs,
                })
            }
            _ => None,
        }
    }

    /// Parse a scalar token: `p/q` or `n` over `Q`, `[c0,...,c_{k-1}]` or a
    /// plain rational over an extension, a decimal residue over `F_p`.
    pub fn parse_scalar(&self, token: &str) -> Result<FieldScalar, FieldError> {
        let token = token.trim();
        match self {
            Self::Rationals => Ok(FieldScalar::Rational(parse_rational(token)?)),
            Self::Extension(k) => {
                let Some(inner) = token.strip_prefix('[').and_then(|t| t.strip_suffix(']')) else {
                    return self.from_rational(&parse_rational(token)?);
                };
                let coeffs = inner
                    .split(',')
                    .map(parse_rational)
                    .collect::<Result<Vec<_>, _>>()?;
                if coeffs.len() != k.degree() {
                    return Err(FieldError::Parse {
                        token: token.into(),
                        reason: format!("expected {} coefficients", k.degree()),
                    });
                }
                Ok(FieldScalar::Extension {
                    field: k.clone(),
                    coeffs,
                })
            }
            Self::Prime(p) => {
                let n: BigInt = token.parse().map_err(|_| FieldError::Parse {
                    token: token.into(),
                    reason: "expected a decimal residue".into(),
                })?;
                let v = n.mod_floor(&BigInt::from(*p)).to_u64().unwrap();
                Ok(FieldScalar::Prime { p: *p, value: v })
            }
        }
    }

    /// Field degree over the prime field (1 for `Q` and `F_p`).
    pub fn degree(&self) -> usize {
        match self {
            Self::Extension(k) => k.degree(),
            _ => 1,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    /// The header syntax of the arrangement file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rationals => write!(f, "rational"),
            Self::Prime(p) => write!(f, "prime {p}"),
            Self::Extension(k) => {
                write!(f, "extension {}", k.degree())?;
                for c in k.modulus() {
                    write!(f, " {c}")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_rational(token: &str) -> Result<BigRational, FieldError> {
    let token = token.trim();
    let err = |reason: &str| FieldError::Parse {
        token: token.into(),
        reason: reason.into(),
    };
    let digits_ok = |s: &str| {
        let s = s.strip_prefix(['+', '-']).unwrap_or(s);
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
    };
    match token.split_once('/') {
        Some((n, d)) => {
            if !digits_ok(n) || !d.bytes().all(|b| b.is_ascii_digit()) || d.is_empty() {
                return Err(err("expected p/q with decimal digits"));
            }
            let n: BigInt = n.parse().map_err(|_| err("bad numerator"))?;
            let d: BigInt = d.parse().map_err(|_| err("bad denominator"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            if !digits_ok(token) {
                return Err(err("expected an integer or p/q"));
            }
            Ok(BigRational::from_integer(
                token.parse().map_err(|_| err("bad integer"))?,
            ))
        }
    }
}

pub(crate) fn rational_mod_p(q: &BigRational, p: u64) -> Result<u64, FieldError> {
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb).to_u64().unwrap();
    let inv = modular::inv_mod(den, p).ok_or_else(|| FieldError::BadPrime {
        p,
        reason: format!("denominator of {q} vanishes"),
    })?;
    let num = q.numer().mod_floor(&pb).to_u64().unwrap();
    Ok(modular::mul_mod(num, inv, p))
}

/// An exact scalar tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    Extension {
        field: Arc<NumberField>,
        coeffs: Vec<BigRational>,
    },
    Prime {
        p: u64,
        value: u64,
    },
}

impl FieldScalar {
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            Self::Rational(_) => FieldDescriptor::Rationals,
            Self::Extension { field, .. } => FieldDescriptor::Extension(field.clone()),
            Self::Prime { p, .. } => FieldDescriptor::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Rational(q) => q.is_zero(),
            Self::Extension { coeffs, .. } => coeffs.iter().all(Zero::is_zero),
            Self::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Self::Rational(q) => q.is_one(),
            Self::Extension { coeffs, .. } => {
                coeffs[0].is_one() && coeffs[1..].iter().all(Zero::is_zero)
            }
            Self::Prime { value, .. } => *value == 1,
        }
    }

    fn mismatch(&self, other: &Self) -> FieldError {
        FieldError::Mismatch {
            left: self.descriptor().to_string(),
            right: other.descriptor().to_string(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        match (self, other) {
            (Self::Rational(a), Self::Rational(b)) => Ok(Self::Rational(a + b)),
            (Self::Extension { field, coeffs: a }, Self::Extension { field: g, coeffs: b })
                if field == g =>
            {
                Ok(Self::Extension {
                    field: field.clone(),
                    coeffs: a.iter().zip(b).map(|(x, y)| x + y).collect(),
                })
            }
            (Self::Prime { p, value: a }, Self::Prime { p: q, value: b }) if p == q => {
                Ok(Self::Prime {
                    p: *p,
                    value: modular::add_mod(*a, *b, *p),
                })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        match (self, other) {
            (Self::Rational(a), Self::Rational(b)) => Ok(Self::Rational(a * b)),
            (Self::Extension { field, coeffs: a }, Self::Extension { field: g, coeffs: b })
                if field == g =>
            {
                Ok(Self::Extension {
                    field: field.clone(),
                    coeffs: field.mul(a, b),
                })
            }
            (Self::Prime { p, value: a }, Self::Prime { p: q, value: b }) if p == q => {
                Ok(Self::Prime {
                    p: *p,
                    value: modular::mul_mod(*a, *b, *p),
                })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_mul(&other.invert()?)
    }

    fn neg_ref(&self) -> Self {
        match self {
            Self::Rational(a) => Self::Rational(-a),
            Self::Extension { field, coeffs } => Self::Extension {
                field: field.clone(),
                coeffs: coeffs.iter().map(|c| -c).collect(),
            },
            Self::Prime { p, value } => Self::Prime {
                p: *p,
                value: modular::sub_mod(0, *value, *p),
            },
        }
    }

    pub fn invert(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Self::Rational(a) => Self::Rational(a.recip()),
            Self::Extension { field, coeffs } => Self::Extension {
                field: field.clone(),
                coeffs: field.inverse(coeffs)?,
            },
            Self::Prime { p, value } => Self::Prime {
                p: *p,
                value: modular::inv_mod(*value, *p).ok_or(FieldError::DivisionByZero)?,
            },
        })
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = self.descriptor().one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Number of nonzero coefficients, a cheap complexity measure used for
    /// pivot selection.
    pub fn term_count(&self) -> usize {
        match self {
            Self::Extension { coeffs, .. } => coeffs.iter().filter(|c| !c.is_zero()).count(),
            _ => usize::from(!self.is_zero()),
        }
    }

    /// Rational coordinates (length 1 for `Q`). `None` for prime fields.
    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        match self {
            Self::Rational(q) => Some(vec![q.clone()]),
            Self::Extension { coeffs, .. } => Some(coeffs.clone()),
            Self::Prime { .. } => None,
        }
    }

    /// Image under the ring homomorphism to `F_p` sending the generator to
    /// `root`.
    pub fn specialize(&self, target: &Specialization) -> Result<Self, FieldError> {
        let p = target.p;
        let value = match self {
            Self::Rational(q) => rational_mod_p(q, p)?,
            Self::Extension { coeffs, .. } => {
                let root = target.root.ok_or(FieldError::InvalidDescriptor(
                    "extension specialization needs a root".into(),
                ))?;
                let mut acc = 0u64;
                for c in coeffs.iter().rev() {
                    acc = modular::add_mod(modular::mul_mod(acc, root, p), rational_mod_p(c, p)?, p);
                }
                acc
            }
            Self::Prime { .. } => {
                return Err(FieldError::InvalidDescriptor(
                    "prime-field scalars cannot be specialized again".into(),
                ))
            }
        };
        Ok(Self::Prime { p, value })
    }

    /// Residue of a prime-field scalar.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Self::Prime { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// Reduction of `Q` or `Q[x]/(m)` to `F_p` along a chosen root of `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Specialization {
    pub p: u64,
    pub root: Option<u64>,
}

impl Specialization {
    /// Checks that `p` is prime, that the minimal polynomial is `p`-integral
    /// and that `root` is one of its roots mod `p`.
    pub fn new(field: &FieldDescriptor, p: u64, root: Option<u64>) -> Result<Self, FieldError> {
        if p >= modular::MAX_PRIME || !modular::is_prime(p) {
            return Err(FieldError::BadPrime {
                p,
                reason: "not a supported prime".into(),
            });
        }
        match field {
            FieldDescriptor::Rationals => Ok(Self { p, root: None }),
            FieldDescriptor::Prime(_) => Err(FieldError::InvalidDescriptor(
                "prime fields cannot be specialized".into(),
            )),
            FieldDescriptor::Extension(k) => {
                let root = root.ok_or(FieldError::InvalidDescriptor(
                    "extension specialization needs a root".into(),
                ))?;
                let m = reduce_modulus(k, p)?;
                if modular::eval_mod(&m, root % p, p) != 0 {
                    return Err(FieldError::NotARoot { p, root });
                }
                Ok(Self {
                    p,
                    root: Some(root % p),
                })
            }
        }
    }

    /// All admissible specializations at `p` (one per root of `m` mod `p`).
    pub fn all_at(field: &FieldDescriptor, p: u64) -> Result<Vec<Self>, FieldError> {
        match field {
            FieldDescriptor::Extension(k) => {
                let m = reduce_modulus(k, p)?;
                Ok(modular::roots_mod_p(&m, p)
                    .into_iter()
                    .map(|r| Self { p, root: Some(r) })
                    .collect())
            }
            _ => Ok(vec![Self::new(field, p, None)?]),
        }
    }

    pub fn target(&self) -> FieldDescriptor {
        FieldDescriptor::Prime(self.p)
    }
}

fn reduce_modulus(k: &NumberField, p: u64) -> Result<Vec<u64>, FieldError> {
    k.modulus().iter().map(|c| rational_mod_p(c, p)).collect()
}

/// Convenience wrapper: specialize one scalar at `(p, root)`.
pub fn specialize_mod_p(a: &FieldScalar, p: u64, root: Option<u64>) -> Result<FieldScalar, FieldError> {
    let target = Specialization::new(&a.descriptor(), p, root)?;
    a.specialize(&target)
}

impl fmt::Display for FieldScalar {
    /// Token syntax of the arrangement file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational(q) => write!(f, "{q}"),
            Self::Extension { coeffs, .. } => {
                write!(f, "[")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
            Self::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

impl PartialOrd for FieldScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A fixed total order used for deterministic point ordering: by value over
/// `Q`, lexicographic on coefficient vectors over extensions, by residue
/// over `F_p`. Scalars of different fields are ordered by field kind.
impl Ord for FieldScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Rational(a), Self::Rational(b)) => a.cmp(b),
            (Self::Extension { coeffs: a, .. }, Self::Extension { coeffs: b, .. }) => a.cmp(b),
            (Self::Prime { value: a, .. }, Self::Prime { value: b, .. }) => a.cmp(b),
            _ => self.kind_rank().cmp(&other.kind_rank()),
        }
    }
}

impl FieldScalar {
    fn kind_rank(&self) -> u8 {
        match self {
            Self::Rational(_) => 0,
            Self::Extension { .. } => 1,
            Self::Prime { .. } => 2,
        }
    }

    /// Sign-aware absolute bit size, for pivot heuristics.
    pub fn bit_size(&self) -> u64 {
        match self {
            Self::Rational(q) => q.numer().abs().bits() + q.denom().bits(),
            Self::Extension { coeffs, .. } => coeffs
                .iter()
                .map(|q| q.numer().abs().bits() + q.denom().bits())
                .sum(),
            Self::Prime { .. } => 1,
        }
    }
}

// Operator impls panic on field mismatch; use the `try_*` methods when the
// operands come from unrelated sources.
impl Add for &FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: Self) -> FieldScalar {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: Self) -> FieldScalar {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: Self) -> FieldScalar {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> FieldScalar {
        FieldScalar::Rational(BigRational::new(n.into(), d.into()))
    }

    fn sqrt_minus3() -> FieldDescriptor {
        FieldDescriptor::extension_from_integers(&[3, 0, 1]).unwrap()
    }

    #[test]
    fn rational_arithmetic() {
        assert_eq!(rat(1, 2).try_add(&rat(1, 3)).unwrap(), rat(5, 6));
        assert_eq!(rat(2, 3).invert().unwrap(), rat(3, 2));
        assert_eq!(rat(4, 6), rat(2, 3));
    }

    #[test]
    fn extension_arithmetic() {
        let k = sqrt_minus3();
        let a = k.generator().unwrap();
        assert_eq!(&a * &a, k.from_i64(-3));
        let inv = a.invert().unwrap();
        assert_eq!(inv, k.parse_scalar("[0,-1/3]").unwrap());
        assert!((&a * &inv).is_one());
    }

    #[test]
    fn prime_arithmetic() {
        let f = FieldDescriptor::prime(101).unwrap();
        assert_eq!(&f.from_i64(100) + &f.from_i64(2), f.from_i64(1));
        let f7 = FieldDescriptor::prime(7).unwrap();
        assert_eq!(f7.from_i64(3).invert().unwrap(), f7.from_i64(5));
    }

    #[test]
    fn errors() {
        let f = FieldDescriptor::prime(7).unwrap();
        let err = rat(1, 2).try_add(&f.one()).unwrap_err();
        assert!(err.to_string().starts_with("field mismatch"));
        assert_eq!(rat(0, 1).invert().unwrap_err(), FieldError::DivisionByZero);
        assert!(FieldDescriptor::prime(91).is_err());
        assert!(f.check_characteristic(9).is_err());
    }

    #[test]
    fn specialization_examples() {
        let k = sqrt_minus3();
        let a = k.generator().unwrap();
        let a1 = &a + &k.one();
        assert_eq!(specialize_mod_p(&a1, 7, Some(2)).unwrap().residue(), Some(3));
        assert_eq!(specialize_mod_p(&rat(1, 2), 7, None).unwrap().residue(), Some(4));
        let a2 = &a * &a;
        assert_eq!(specialize_mod_p(&a2, 7, Some(2)).unwrap().residue(), Some(4));
        assert!(matches!(
            specialize_mod_p(&a, 7, Some(3)),
            Err(FieldError::NotARoot { .. })
        ));
        assert!(matches!(
            specialize_mod_p(&rat(1, 7), 7, None),
            Err(FieldError::BadPrime { .. })
        ));
    }

    #[test]
    fn parsing() {
        let q = FieldDescriptor::Rationals;
        assert_eq!(q.parse_scalar("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(q.parse_scalar("+7").unwrap(), rat(7, 1));
        assert!(q.parse_scalar("1.5").is_err());
        assert!(q.parse_scalar("1/0").is_err());
        let k = sqrt_minus3();
        assert!(k.parse_scalar("[1,2,3]").is_err());
        assert_eq!(k.parse_scalar("[1, 2]").unwrap().to_string(), "[1,2]");
        let f = FieldDescriptor::prime(7).unwrap();
        assert_eq!(f.parse_scalar("-1").unwrap().residue(), Some(6));
    }
}
