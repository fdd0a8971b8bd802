//! Simple algebraic extensions `Q[x]/(m(x))` with `m` monic.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::FieldError;

/// Polynomial over `Q`, coefficients low to high, no trailing zeros.
pub(crate) type PolyQ = Vec<BigRational>;

pub(crate) fn trim(mut a: PolyQ) -> PolyQ {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> PolyQ {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> PolyQ {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (PolyQ, PolyQ) {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = &r[top] / lead;
        let shift = top - db;
        for (i, bi) in b.iter().enumerate() {
            let t = &c * bi;
            r[shift + i] -= t;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

/// A number field given by a monic minimal polynomial of degree `k >= 2`.
///
/// Irreducibility is not checked; a zero divisor met during inversion is
/// reported as [`FieldError::ReducibleModulus`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    modulus: PolyQ,
}

impl NumberField {
    pub fn new(modulus: Vec<BigRational>) -> Result<Self, FieldError> {
        let modulus = trim(modulus);
        if modulus.len() < 3 {
            return Err(FieldError::InvalidDescriptor(
                "extension minimal polynomial must have degree >= 2".into(),
            ));
        }
        if !modulus.last().unwrap().is_one() {
            return Err(FieldError::InvalidDescriptor(
                "extension minimal polynomial must be monic".into(),
            ));
        }
        Ok(Self { modulus })
    }

    pub fn from_integers(coeffs: &[i64]) -> Result<Self, FieldError> {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// Degree `k` of the extension.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Coefficients `c0..ck` of the minimal polynomial.
    pub fn modulus(&self) -> &[BigRational] {
        &self.modulus
    }

    /// Reduce an arbitrary polynomial to the canonical length-`k` vector.
    pub(crate) fn reduce(&self, poly: PolyQ) -> Vec<BigRational> {
        let (_, r) = poly_divrem(&poly, &self.modulus);
        self.pad(r)
    }

    pub(crate) fn pad(&self, mut r: PolyQ) -> Vec<BigRational> {
        r.resize(self.degree(), BigRational::zero());
        r
    }

    pub(crate) fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        self.reduce(poly_mul(&trim(a.to_vec()), &trim(b.to_vec())))
    }

    /// Inverse via the extended Euclidean algorithm against the modulus.
    pub(crate) fn inverse(&self, a: &[BigRational]) -> Result<Vec<BigRational>, FieldError> {
        let a = trim(a.to_vec());
        if a.is_empty() {
            return Err(FieldError::DivisionByZero);
        }
        // invariant: s_i * a = r_i (mod m)
        let (mut r0, mut r1) = (self.modulus.clone(), a);
        let (mut s0, mut s1): (PolyQ, PolyQ) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.len() > 1 {
            let lead = r0.last().unwrap().clone();
            let factor: PolyQ = r0.iter().map(|c| c / &lead).collect();
            return Err(FieldError::ReducibleModulus {
                factor: format_poly(&factor),
            });
        }
        let g = &r0[0];
        Ok(self.reduce(s0.iter().map(|c| c / g).collect()))
    }
}

/// Renders a polynomial in the generator `a`, highest power first.
pub(crate) fn format_poly(p: &[BigRational]) -> String {
    let mut terms = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "a".to_string(),
            _ => format!("a^{i}"),
        };
        let coeff = if mono.is_empty() {
            c.to_string()
        } else if c.is_one() {
            String::new()
        } else if *c == -BigRational::one() {
            "-".to_string()
        } else {
            format!("{c}*")
        };
        terms.push(format!("{coeff}{mono}"));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[a]/({})", format_poly(&self.modulus))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(NumberField::from_integers(&[1, 1]).is_err());
        assert!(NumberField::from_integers(&[1, 0, 2]).is_err());
        assert!(NumberField::from_integers(&[3, 0, 1]).is_ok());
    }

    #[test]
    fn zero_divisor_reports_factor() {
        // x^2 - 1 = (x - 1)(x + 1); x + 1 is a zero divisor
        let k = NumberField::from_integers(&[-1, 0, 1]).unwrap();
        let err = k.inverse(&[q(1), q(1)]).unwrap_err();
        assert_eq!(
            err,
            FieldError::ReducibleModulus {
                factor: "a + 1".into()
            }
        );
    }
}
