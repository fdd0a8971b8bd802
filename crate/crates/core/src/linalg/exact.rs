use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Engine, EngineLabel, Kernel};
use crate::field::{FieldDescriptor, FieldScalar, NumberField};

/// Element of `Z[β]`, coefficients of `1, β, ..., β^{k-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZElem(pub Vec<BigInt>);

impl ZElem {
    fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn cost(&self) -> (usize, u64) {
        let terms = self.0.iter().filter(|c| !c.is_zero()).count();
        let bits = self.0.iter().map(|c| c.bits()).sum();
        (terms, bits)
    }
}

/// Fraction-free elimination over `Z[β]`, where `β = D·α` for the generator
/// `α` of the field and `D` clears the denominators of its minimal
/// polynomial, so that `β` is an algebraic integer with monic integral
/// minimal polynomial. Over `Q` this is plain Bareiss over `Z`.
#[derive(Clone, Debug)]
pub struct ExactEngine {
    k: usize,
    /// Monic minimal polynomial of `β`, `c_0..c_k` (empty over `Q`).
    modulus: Vec<BigInt>,
    scale: BigInt,
    beta_field: Option<NumberField>,
}

/// Precomputed exact division by the previous pivot.
enum Divisor {
    One,
    Int(BigInt),
    /// `1/prev = num/den`
    Alg { num: ZElem, den: BigInt },
}

impl ExactEngine {
    pub fn for_field(field: &FieldDescriptor) -> Self {
        match field {
            FieldDescriptor::Rationals => Self {
                k: 1,
                modulus: Vec::new(),
                scale: BigInt::one(),
                beta_field: None,
            },
            FieldDescriptor::Extension(kf) => {
                let coeffs = kf.modulus();
                let k = kf.degree();
                let scale = coeffs
                    .iter()
                    .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
                let modulus: Vec<BigInt> = coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let v = c * BigRational::from_integer(num_traits::pow(scale.clone(), k - i));
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect();
                let beta_field = NumberField::new(
                    modulus.iter().map(|c| BigRational::from_integer(c.clone())).collect(),
                )
                .expect("monic of degree >= 2");
                Self {
                    k,
                    modulus,
                    scale,
                    beta_field: Some(beta_field),
                }
            }
            FieldDescriptor::Prime(_) => panic!("prime fields use the modular engine"),
        }
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// Monic integral minimal polynomial of `β`, `c_0..c_k` (empty over `Q`).
    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub(crate) fn mul_pub(&self, a: &ZElem, b: &ZElem) -> ZElem {
        self.mul(a, b)
    }

    fn mul(&self, a: &ZElem, b: &ZElem) -> ZElem {
        if self.k == 1 {
            return ZElem(vec![&a.0[0] * &b.0[0]]);
        }
        let k = self.k;
        let mut prod = vec![BigInt::zero(); 2 * k - 1];
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if !bj.is_zero() {
                    prod[i + j] += ai * bj;
                }
            }
        }
        for deg in (k..2 * k - 1).rev() {
            let c = std::mem::take(&mut prod[deg]);
            if c.is_zero() {
                continue;
            }
            for i in 0..k {
                if !self.modulus[i].is_zero() {
                    prod[deg - k + i] -= &c * &self.modulus[i];
                }
            }
        }
        prod.truncate(k);
        ZElem(prod)
    }

    fn sub(&self, a: &ZElem, b: &ZElem) -> ZElem {
        ZElem(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    fn divisor(&self, prev: &ZElem) -> Divisor {
        if self.k == 1 {
            if prev.0[0].is_one() {
                Divisor::One
            } else {
                Divisor::Int(prev.0[0].clone())
            }
        } else if prev.0[0].is_one() && prev.0[1..].iter().all(Zero::is_zero) {
            Divisor::One
        } else {
            let field = self.beta_field.as_ref().unwrap();
            let q: Vec<BigRational> = prev.0.iter().map(|c| BigRational::from_integer(c.clone())).collect();
            let inv = field.inverse(&q).expect("pivot is invertible in a field");
            let den = inv.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let num = inv
                .iter()
                .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                .collect();
            Divisor::Alg { num: ZElem(num), den }
        }
    }

    fn divide(&self, x: ZElem, div: &Divisor) -> ZElem {
        match div {
            Divisor::One => x,
            Divisor::Int(d) => ZElem(
                x.0.into_iter()
                    .map(|c| {
                        debug_assert!((&c % d).is_zero(), "inexact Bareiss division");
                        c / d
                    })
                    .collect(),
            ),
            Divisor::Alg { num, den } => {
                let prod = self.mul(&x, num);
                ZElem(
                    prod.0
                        .into_iter()
                        .map(|c| {
                            debug_assert!((&c % den).is_zero(), "inexact Bareiss division");
                            c / den
                        })
                        .collect(),
                )
            }
        }
    }

    /// `(piv·x - a·y) / prev`, exact by Sylvester's identity.
    fn combine(&self, piv: &ZElem, x: &ZElem, a: &ZElem, y: &ZElem, div: &Divisor) -> ZElem {
        let x_zero = x.is_zero();
        let ay_zero = a.is_zero() || y.is_zero();
        if x_zero && ay_zero {
            return self.zero();
        }
        let t = if ay_zero {
            self.mul(piv, x)
        } else if x_zero {
            let ay = self.mul(a, y);
            ZElem(ay.0.into_iter().map(|c| -c).collect())
        } else {
            self.sub(&self.mul(piv, x), &self.mul(a, y))
        };
        self.divide(t, div)
    }

    /// Fraction-free elimination. With `jordan` the rows above each pivot
    /// are reduced too, so that all pivot entries end up equal to the last
    /// pivot. Returns `(pivot_cols, rows, last_pivot)`.
    fn eliminate(&self, mut rows: Vec<Vec<ZElem>>, ncols: usize, jordan: bool) -> (Vec<usize>, Vec<Vec<ZElem>>, ZElem) {
        let nrows = rows.len();
        let mut prev = self.one();
        let mut div = Divisor::One;
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by_key(|&i| rows[i][c].cost())
            else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = std::mem::take(&mut rows[r]);
            let piv = pivot_row[c].clone();
            let targets: Box<dyn Iterator<Item = usize>> = if jordan {
                Box::new((0..r).chain(r + 1..nrows))
            } else {
                Box::new(r + 1..nrows)
            };
            for i in targets {
                let row = &mut rows[i];
                let a = row[c].clone();
                // entries left of c in rows below are zero; rows above may
                // carry nonzero entries there, scaled by piv/prev
                let start = if i > r { c } else { 0 };
                for j in start..ncols {
                    let y = &pivot_row[j];
                    let x = std::mem::take(&mut row[j]);
                    row[j] = self.combine(&piv, &x, &a, y, &div);
                }
            }
            rows[r] = pivot_row;
            pivot_cols.push(c);
            div = self.divisor(&piv);
            prev = piv;
            r += 1;
        }
        (pivot_cols, rows, prev)
    }

    pub fn one(&self) -> ZElem {
        let mut v = vec![BigInt::zero(); self.k];
        v[0] = BigInt::one();
        ZElem(v)
    }

    fn scalar_of(&self, e: &ZElem, field: &FieldDescriptor) -> FieldScalar {
        match field {
            FieldDescriptor::Rationals => FieldScalar::Rational(BigRational::from_integer(e.0[0].clone())),
            FieldDescriptor::Extension(_) => {
                let mut acc = field.zero();
                let alpha = field.generator().unwrap();
                let beta = &alpha * &field.from_integer(&self.scale);
                let mut power = field.one();
                for c in &e.0 {
                    acc = &acc + &(&power * &field.from_integer(c));
                    power = &power * &beta;
                }
                acc
            }
            FieldDescriptor::Prime(_) => panic!("prime fields use the modular engine"),
        }
    }
}

impl Engine for ExactEngine {
    type Elem = ZElem;

    fn zero(&self) -> ZElem {
        ZElem(vec![BigInt::zero(); self.k])
    }

    fn is_zero(&self, e: &ZElem) -> bool {
        e.is_zero()
    }

    fn convert_row(&self, row: &[FieldScalar]) -> Vec<ZElem> {
        let coeffs: Vec<Vec<BigRational>> = row
            .iter()
            .map(|s| {
                let mut c = s.rational_coeffs().expect("exact engine needs Q or a number field");
                // α^i = β^i / D^i
                let mut power = BigInt::one();
                for ci in c.iter_mut().skip(1) {
                    power *= &self.scale;
                    *ci = &*ci / BigRational::from_integer(power.clone());
                }
                c
            })
            .collect();
        let lcm = coeffs
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut out: Vec<ZElem> = coeffs
            .into_iter()
            .map(|c| {
                ZElem(
                    c.into_iter()
                        .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer())
                        .collect(),
                )
            })
            .collect();
        // strip the integer content of the row
        let content = out
            .iter()
            .flat_map(|e| e.0.iter())
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !content.is_zero() && !content.is_one() {
            for e in out.iter_mut() {
                for c in e.0.iter_mut() {
                    *c = &*c / &content;
                }
            }
        }
        out
    }

    fn kernel(&self, rows: Vec<Vec<ZElem>>, ncols: usize) -> Kernel<ZElem> {
        let (pivot_cols, rows, det) = self.eliminate(rows, ncols, true);
        let mut is_pivot = vec![false; ncols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let free_cols: Vec<usize> = (0..ncols).filter(|&c| !is_pivot[c]).collect();
        let basis = free_cols
            .iter()
            .map(|&j| {
                let mut v = vec![self.zero(); ncols];
                v[j] = det.clone();
                for (i, &c) in pivot_cols.iter().enumerate() {
                    v[c] = ZElem(rows[i][j].0.iter().map(|x| -x).collect());
                }
                v
            })
            .collect();
        Kernel {
            ncols,
            free_cols,
            basis,
        }
    }

    fn rank(&self, rows: Vec<Vec<ZElem>>, ncols: usize) -> usize {
        self.eliminate(rows, ncols, false).0.len()
    }

    fn to_scalar(&self, e: &ZElem, field: &FieldDescriptor) -> FieldScalar {
        self.scalar_of(e, field)
    }
}

impl EngineLabel for ExactEngine {
    fn label(&self) -> String {
        "exact".into()
    }
}

impl fmt::Display for ZElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}
