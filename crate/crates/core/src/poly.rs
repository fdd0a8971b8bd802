//! Homogeneous polynomials in `x, y, z` over a [`FieldDescriptor`].
//!
//! Monomials of degree `k` are indexed in graded-lexicographic order
//! `x > y > z`: `x^k, x^{k-1}y, x^{k-1}z, x^{k-2}y^2, ...`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Roots;

use crate::arrangement::{Arrangement, ProjectiveLine};
use crate::field::{FieldDescriptor, FieldScalar};

/// Exponent triple `(i, j, l)` of `x^i y^j z^l`.
pub type Exponent = (u32, u32, u32);

/// Number of monomials of degree `k` in three variables.
pub fn monomial_count(k: usize) -> usize {
    (k + 1) * (k + 2) / 2
}

/// Position of `x^i y^j z^l` among the monomials of degree `i + j + l`.
pub fn monomial_index(e: Exponent) -> usize {
    let a = (e.1 + e.2) as usize;
    a * (a + 1) / 2 + e.2 as usize
}

/// Monomials of degree `k` in index order.
pub fn monomials(k: u32) -> Vec<Exponent> {
    let mut out = Vec::with_capacity(monomial_count(k as usize));
    for a in 0..=k {
        for l in 0..=a {
            out.push((k - a, a - l, l));
        }
    }
    out
}

/// Index of `var · m` in degree `k + 1`, for `m` of degree `k` at `idx`
/// (`var` is 0, 1, 2 for `x`, `y`, `z`).
pub fn shift_index(idx: usize, var: usize) -> usize {
    // idx = a(a+1)/2 + l with a = j + l
    let mut a = (2 * idx).sqrt();
    while a * (a + 1) / 2 > idx {
        a -= 1;
    }
    let l = idx - a * (a + 1) / 2;
    match var {
        0 => idx,
        1 => (a + 1) * (a + 2) / 2 + l,
        _ => (a + 1) * (a + 2) / 2 + l + 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPoly {
    field: FieldDescriptor,
    degree: u32,
    coeffs: BTreeMap<Exponent, FieldScalar>,
}

impl HomogeneousPoly {
    pub fn zero(field: &FieldDescriptor, degree: u32) -> Self {
        Self {
            field: field.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// Build from `(exponent, coefficient)` pairs; zero coefficients are
    /// dropped and repeated exponents summed.
    pub fn from_terms(field: &FieldDescriptor, degree: u32, terms: impl IntoIterator<Item = (Exponent, FieldScalar)>) -> Self {
        let mut p = Self::zero(field, degree);
        for (e, c) in terms {
            assert_eq!(e.0 + e.1 + e.2, degree, "monomial of wrong degree");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: FieldScalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&e) {
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.coeffs.insert(e, s);
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    pub fn linear(line: &ProjectiveLine) -> Self {
        let [a, b, c] = line.coefficients().clone();
        Self::from_terms(&line.field(), 1, [((1, 0, 0), a), ((0, 1, 0), b), ((0, 0, 1), c)])
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero coefficients keyed by exponent.
    pub fn terms(&self) -> &BTreeMap<Exponent, FieldScalar> {
        &self.coeffs
    }

    pub fn coeff(&self, e: Exponent) -> FieldScalar {
        self.coeffs.get(&e).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Dense coefficient vector in monomial index order.
    pub fn dense(&self) -> Vec<FieldScalar> {
        let mut v = vec![self.field.zero(); monomial_count(self.degree as usize)];
        for (&e, c) in &self.coeffs {
            v[monomial_index(e)] = c.clone();
        }
        v
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(&self.field, self.degree + other.degree);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                p.add_term((e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2), c1 * c2);
            }
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding polynomials of different degrees");
        let mut p = self.clone();
        for (&e, c) in &other.coeffs {
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn scale(&self, s: &FieldScalar) -> Self {
        Self::from_terms(&self.field, self.degree, self.coeffs.iter().map(|(&e, c)| (e, c * s)))
    }

    /// Formal partial derivative in variable `var` (0, 1, 2).
    pub fn partial(&self, var: usize) -> Self {
        let degree = self.degree.saturating_sub(1);
        let mut p = Self::zero(&self.field, degree);
        for (&(i, j, l), c) in &self.coeffs {
            let (n, e) = match var {
                0 => (i, (i.wrapping_sub(1), j, l)),
                1 => (j, (i, j.wrapping_sub(1), l)),
                _ => (l, (i, j, l.wrapping_sub(1))),
            };
            if n > 0 {
                p.add_term(e, c * &self.field.from_i64(n as i64));
            }
        }
        p
    }

    /// Multiply by `x`, `y` or `z`.
    pub fn times_var(&self, var: usize) -> Self {
        let mut p = Self::zero(&self.field, self.degree + 1);
        for (&(i, j, l), c) in &self.coeffs {
            let e = match var {
                0 => (i + 1, j, l),
                1 => (i, j + 1, l),
                _ => (i, j, l + 1),
            };
            p.coeffs.insert(e, c.clone());
        }
        p
    }

    /// Leading coefficient in graded-lex order (coefficient of the
    /// largest monomial present).
    pub fn leading_coefficient(&self) -> Option<&FieldScalar> {
        self.coeffs
            .iter()
            .min_by_key(|(&e, _)| monomial_index(e))
            .map(|(_, c)| c)
    }

    /// Rescale so that the leading coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.leading_coefficient() {
            Some(lc) if !lc.is_one() => self.scale(&lc.invert().expect("nonzero")),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.coeffs.iter().collect();
        terms.sort_by_key(|(&e, _)| monomial_index(e));
        for (n, (&(i, j, l), c)) in terms.into_iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let mut mono = String::new();
            for (v, p) in [("x", i), ("y", j), ("z", l)] {
                match p {
                    0 => {}
                    1 => mono.push_str(v),
                    _ => mono.push_str(&format!("{v}^{p}")),
                }
            }
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "({c})*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Product of the line forms, normalized to leading coefficient 1.
pub fn defining_polynomial(arr: &Arrangement) -> HomogeneousPoly {
    let field = arr.field();
    let mut f = HomogeneousPoly::from_terms(field, 0, [((0, 0, 0), field.one())]);
    for line in arr.lines() {
        f = f.mul(&HomogeneousPoly::linear(line));
    }
    f.normalized()
}

/// `(f_x, f_y, f_z)`.
pub fn jacobian(f: &HomogeneousPoly) -> [HomogeneousPoly; 3] {
    [f.partial(0), f.partial(1), f.partial(2)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rationals
    }

    fn lines(f: &FieldDescriptor, data: &[(i64, i64, i64)]) -> Arrangement {
        Arrangement::build_lattice(
            data.iter()
                .map(|&(a, b, c)| ProjectiveLine::from_i64(f, a, b, c).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn monomial_indexing() {
        for k in 0..8 {
            let ms = monomials(k);
            assert_eq!(ms.len(), monomial_count(k as usize));
            for (n, &e) in ms.iter().enumerate() {
                assert_eq!(monomial_index(e), n);
                for var in 0..3 {
                    let shifted = match var {
                        0 => (e.0 + 1, e.1, e.2),
                        1 => (e.0, e.1 + 1, e.2),
                        _ => (e.0, e.1, e.2 + 1),
                    };
                    assert_eq!(shift_index(n, var), monomial_index(shifted));
                }
            }
        }
        assert_eq!(monomials(2), vec![(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]);
    }

    #[test]
    fn triangle_polynomial() {
        let f = defining_polynomial(&lines(&q(), &[(1, 0, 0), (0, 1, 0), (0, 0, 1)]));
        assert_eq!(f.to_string(), "xyz");
        let [fx, fy, fz] = jacobian(&f);
        assert_eq!((fx.to_string(), fy.to_string(), fz.to_string()), ("yz".into(), "xz".into(), "xy".into()));
    }

    #[test]
    fn pencil_polynomial() {
        let f = defining_polynomial(&lines(&q(), &[(1, 0, 0), (0, 1, 0), (1, 1, 0)]));
        assert_eq!(f.to_string(), "x^2y + xy^2");
    }

    #[test]
    fn cube_partials() {
        let f = HomogeneousPoly::from_terms(&q(), 3, [((3, 0, 0), q().one())]);
        let [fx, fy, fz] = jacobian(&f);
        assert_eq!(fx.to_string(), "(3)*x^2");
        assert!(fy.is_zero() && fz.is_zero());
    }

    #[test]
    fn euler_relation_mod_p() {
        let fp = FieldDescriptor::prime(1_000_003).unwrap();
        let f = defining_polynomial(&lines(&fp, &[(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3)]));
        let [fx, fy, fz] = jacobian(&f);
        let euler = fx.times_var(0).add(&fy.times_var(1)).add(&fz.times_var(2));
        assert_eq!(euler, f.scale(&fp.from_i64(5)));
    }

    #[test]
    fn dual_hesse_polynomial() {
        let k = FieldDescriptor::extension_from_integers(&[1, 1, 1]).unwrap();
        let w = k.generator().unwrap();
        let powers = [k.one(), w.clone(), &w * &w];
        let mut ls = Vec::new();
        for p in &powers {
            let m = -p.clone();
            ls.push(ProjectiveLine::new(k.one(), m.clone(), k.zero()).unwrap());
            ls.push(ProjectiveLine::new(k.zero(), k.one(), m.clone()).unwrap());
            ls.push(ProjectiveLine::new(m, k.zero(), k.one()).unwrap());
        }
        let f = defining_polynomial(&Arrangement::build_lattice(ls).unwrap());
        // (x^3 - y^3)(y^3 - z^3)(z^3 - x^3), normalized
        let cube = |e1: Exponent, e2: Exponent| HomogeneousPoly::from_terms(&k, 3, [(e1, k.one()), (e2, k.from_i64(-1))]);
        let expected = cube((3, 0, 0), (0, 3, 0))
            .mul(&cube((0, 3, 0), (0, 0, 3)))
            .mul(&cube((0, 0, 3), (3, 0, 0)))
            .normalized();
        assert_eq!(f, expected);
    }
}
