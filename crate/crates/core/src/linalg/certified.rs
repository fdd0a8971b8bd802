use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::exact::{ExactEngine, ZElem};
use super::{Engine, EngineLabel, Kernel, ModularEngine};
use crate::field::modular::{inv_mod, mul_mod, next_prime, roots_mod_p, sub_mod};
use crate::field::{FieldDescriptor, FieldScalar};

/// Free columns and, per root of the defining polynomial, the kernel basis mod p.
type ModKernel = (Vec<usize>, Vec<Vec<Vec<u64>>>);

/// First prime tried for reconstruction.
const PRIME_START: u64 = (1 << 62) - (1 << 40);
/// Give up reconstructing and fall back to fraction-free elimination after
/// this many primes.
const MAX_PRIMES: usize = 400;

/// Exact kernels by multi-modular reconstruction with an exact
/// certificate.
///
/// For primes `p` over which the minimal polynomial of `β` splits into
/// distinct linear factors, the matrix is reduced at every root. Rank can
/// only drop under reduction, so the modular nullity bounds the exact
/// nullity from above. The reduced row echelon kernel basis is then lifted
/// by Chinese remaindering and rational reconstruction, and every lifted
/// vector is checked against the original rows over `Z[β]`. A verified
/// basis of the modular size proves the nullity, so the result is exact.
/// Ranks of small matrices go through [`ExactEngine`] directly.
#[derive(Clone, Debug)]
pub struct CertifiedEngine {
    exact: ExactEngine,
}

/// Residues of the lifted entries modulo the product of the primes used.
struct Accumulator {
    pivots: Vec<usize>,
    free_cols: Vec<usize>,
    modulus: BigInt,
    /// `values[v][i][c]`: coefficient `c` of the entry of kernel vector `v`
    /// in pivot column `pivots[i]`.
    values: Vec<Vec<Vec<BigInt>>>,
    primes: usize,
}

fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    // extended Euclid on (m, a) stopped at r < sqrt(m/2)
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

impl CertifiedEngine {
    pub fn for_field(field: &FieldDescriptor) -> Self {
        Self {
            exact: ExactEngine::for_field(field),
        }
    }

    fn roots(&self, p: u64) -> Option<Vec<u64>> {
        let k = self.exact.degree();
        if k == 1 {
            return Some(vec![0]);
        }
        let poly: Vec<u64> = self
            .exact
            .modulus()
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(p)).try_into().unwrap())
            .collect();
        let roots = roots_mod_p(&poly, p);
        (roots.len() == k).then_some(roots)
    }

    fn eval(e: &ZElem, root: u64, p: u64) -> u64 {
        let pb = BigInt::from(p);
        let mut acc = 0u64;
        for c in e.0.iter().rev() {
            let c: u64 = c.mod_floor(&pb).try_into().unwrap();
            acc = (mul_mod(acc, root, p) + c) % p;
        }
        acc
    }

    /// Inverse of the Vandermonde matrix `V[i][c] = root_i^c` mod `p`, by
    /// Gauss-Jordan.
    fn vandermonde_inverse(roots: &[u64], p: u64) -> Option<Vec<Vec<u64>>> {
        let k = roots.len();
        let mut m: Vec<Vec<u64>> = roots
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let mut row = Vec::with_capacity(2 * k);
                let mut pw = 1u64;
                for _ in 0..k {
                    row.push(pw);
                    pw = mul_mod(pw, r, p);
                }
                row.extend((0..k).map(|j| u64::from(i == j)));
                row
            })
            .collect();
        for c in 0..k {
            let piv = (c..k).find(|&i| m[i][c] != 0)?;
            m.swap(c, piv);
            let inv = inv_mod(m[c][c], p)?;
            for x in m[c].iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
            for i in 0..k {
                if i != c && m[i][c] != 0 {
                    let f = m[i][c];
                    for j in 0..2 * k {
                        m[i][j] = sub_mod(m[i][j], mul_mod(f, m[c][j], p), p);
                    }
                }
            }
        }
        Some(m.into_iter().map(|row| row[k..].to_vec()).collect())
    }

    /// Kernel mod `p` at every root; `None` if the pivot structure differs
    /// between roots.
    fn modular_kernel(&self, rows: &[Vec<ZElem>], ncols: usize, p: u64, roots: &[u64]) -> Option<ModKernel> {
        let engine = ModularEngine::new(p);
        let mut free: Option<Vec<usize>> = None;
        let mut per_root = Vec::new();
        for &r in roots {
            let reduced: Vec<Vec<u64>> = rows
                .iter()
                .map(|row| row.iter().map(|e| Self::eval(e, r, p)).collect())
                .collect();
            let k = engine.kernel(reduced, ncols);
            match &free {
                None => free = Some(k.free_cols.clone()),
                Some(f) if *f != k.free_cols => return None,
                Some(_) => {}
            }
            per_root.push(k.basis);
        }
        Some((free.unwrap(), per_root))
    }

    fn reconstruct(&self, acc: &Accumulator) -> Option<Vec<Vec<BigRational>>> {
        // entries in β-coordinates, flattened per vector: pivots × k
        acc.values
            .iter()
            .map(|vec| {
                vec.iter()
                    .flat_map(|coeffs| coeffs.iter())
                    .map(|a| rational_reconstruction(a, &acc.modulus))
                    .collect::<Option<Vec<_>>>()
            })
            .collect()
    }

    /// Scale reconstructed rational coordinates to an integral kernel
    /// vector over `Z[β]`.
    fn integral_vector(&self, acc: &Accumulator, v: usize, flat: &[BigRational], ncols: usize) -> Vec<ZElem> {
        let k = self.exact.degree();
        let den = flat.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let mut out = vec![ZElem(vec![BigInt::zero(); k]); ncols];
        let mut lead = vec![BigInt::zero(); k];
        lead[0] = den.clone();
        out[acc.free_cols[v]] = ZElem(lead);
        for (i, &col) in acc.pivots.iter().enumerate() {
            out[col] = ZElem(
                flat[i * k..(i + 1) * k]
                    .iter()
                    .map(|q| (q * BigRational::from_integer(den.clone())).to_integer())
                    .collect(),
            );
        }
        out
    }

    fn verifies(&self, rows: &[Vec<ZElem>], v: &[ZElem]) -> bool {
        let nz: Vec<usize> = (0..v.len()).filter(|&j| !self.exact.is_zero(&v[j])).collect();
        rows.iter().all(|row| {
            let mut acc = self.exact.zero();
            for &j in &nz {
                if !self.exact.is_zero(&row[j]) {
                    let t = self.exact.mul_pub(&row[j], &v[j]);
                    for (a, b) in acc.0.iter_mut().zip(t.0) {
                        *a += b;
                    }
                }
            }
            self.exact.is_zero(&acc)
        })
    }

    fn lift(&self, rows: &[Vec<ZElem>], ncols: usize) -> Option<Kernel<ZElem>> {
        let k = self.exact.degree();
        let mut acc: Option<Accumulator> = None;
        let mut last: Option<Vec<Vec<BigRational>>> = None;
        let mut p = PRIME_START;
        let mut tried = 0;
        while tried < MAX_PRIMES {
            p = next_prime(p + 1);
            tried += 1;
            let Some(roots) = self.roots(p) else { continue };
            let Some(vinv) = Self::vandermonde_inverse(&roots, p) else { continue };
            let Some((free_cols, per_root)) = self.modular_kernel(rows, ncols, p, &roots) else { continue };
            let mut is_free = vec![false; ncols];
            for &c in &free_cols {
                is_free[c] = true;
            }
            let pivots: Vec<usize> = (0..ncols).filter(|&c| !is_free[c]).collect();
            if free_cols.is_empty() {
                // modular nullity 0 bounds the exact nullity
                return Some(Kernel {
                    ncols,
                    free_cols,
                    basis: Vec::new(),
                });
            }
            // coefficient vectors mod p: values at roots → β-coordinates
            let values: Vec<Vec<Vec<u64>>> = (0..free_cols.len())
                .map(|v| {
                    pivots
                        .iter()
                        .map(|&col| {
                            let at: Vec<u64> = per_root.iter().map(|basis| basis[v][col]).collect();
                            (0..k)
                                .map(|c| (0..k).fold(0, |s, i| (s + mul_mod(vinv[c][i], at[i], p)) % p))
                                .collect()
                        })
                        .collect()
                })
                .collect();
            let restart = match &acc {
                None => true,
                Some(a) => {
                    if free_cols.len() < a.free_cols.len() || (free_cols.len() == a.free_cols.len() && pivots < a.pivots) {
                        true
                    } else if free_cols != a.free_cols {
                        // this prime lost rank
                        continue;
                    } else {
                        false
                    }
                }
            };
            if restart {
                acc = Some(Accumulator {
                    pivots,
                    free_cols,
                    modulus: BigInt::from(p),
                    values: values
                        .into_iter()
                        .map(|vec| vec.into_iter().map(|c| c.into_iter().map(BigInt::from).collect()).collect())
                        .collect(),
                    primes: 1,
                });
                last = None;
                continue;
            }
            let a = acc.as_mut().unwrap();
            let pb = BigInt::from(p);
            let m_inv = BigInt::from(inv_mod((&a.modulus % &pb).try_into().unwrap(), p).unwrap());
            for (vec, new) in a.values.iter_mut().zip(values) {
                for (coeffs, new) in vec.iter_mut().zip(new) {
                    for (x, r) in coeffs.iter_mut().zip(new) {
                        let diff = (BigInt::from(r) - &*x).mod_floor(&pb);
                        let t = (diff * &m_inv).mod_floor(&pb);
                        *x += &a.modulus * t;
                    }
                }
            }
            a.modulus *= &pb;
            a.primes += 1;
            let Some(rec) = self.reconstruct(a) else { continue };
            if last.as_ref() == Some(&rec) {
                let basis: Vec<Vec<ZElem>> = rec
                    .iter()
                    .enumerate()
                    .map(|(v, flat)| self.integral_vector(a, v, flat, ncols))
                    .collect();
                if basis.iter().all(|v| self.verifies(rows, v)) {
                    log::debug!("kernel lifted with {} primes", a.primes);
                    return Some(Kernel {
                        ncols,
                        free_cols: a.free_cols.clone(),
                        basis,
                    });
                }
            }
            last = Some(rec);
        }
        None
    }
}

impl Engine for CertifiedEngine {
    type Elem = ZElem;

    fn zero(&self) -> ZElem {
        self.exact.zero()
    }

    fn is_zero(&self, e: &ZElem) -> bool {
        self.exact.is_zero(e)
    }

    fn convert_row(&self, row: &[FieldScalar]) -> Vec<ZElem> {
        self.exact.convert_row(row)
    }

    fn kernel(&self, rows: Vec<Vec<ZElem>>, ncols: usize) -> Kernel<ZElem> {
        if rows.is_empty() {
            return self.exact.kernel(rows, ncols);
        }
        match self.lift(&rows, ncols) {
            Some(k) => k,
            None => {
                log::warn!("multi-modular lifting did not converge; using fraction-free elimination");
                self.exact.kernel(rows, ncols)
            }
        }
    }

    fn rank(&self, rows: Vec<Vec<ZElem>>, ncols: usize) -> usize {
        self.exact.rank(rows, ncols)
    }

    fn to_scalar(&self, e: &ZElem, field: &FieldDescriptor) -> FieldScalar {
        self.exact.to_scalar(e, field)
    }
}

impl EngineLabel for CertifiedEngine {
    fn label(&self) -> String {
        "exact (certified multi-modular)".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_small_fractions() {
        let m = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        for (n, d) in [(3, 7), (-5, 11), (0, 1), (123, 1)] {
            let q = BigRational::new(n.into(), d.into());
            let e = BigInt::from(d).extended_gcd(&m);
            assert!(e.gcd.is_one());
            let inv_d = e.x;
            let a = (BigInt::from(n) * inv_d).mod_floor(&m);
            assert_eq!(rational_reconstruction(&a, &m), Some(q));
        }
    }

    #[test]
    fn agrees_with_fraction_free_elimination() {
        let f = FieldDescriptor::extension_from_integers(&[2, 1, 1]).unwrap();
        let b = f.generator().unwrap();
        let s = |n: i64, m: i64| &f.from_i64(n) + &(&b * &f.from_i64(m));
        let data = [vec![s(1, 0), s(0, 1), s(2, -1), s(3, 3)],
            vec![s(0, 1), s(-2, -1), s(1, 3), s(3, -3)],
            vec![s(1, 1), s(-2, 0), s(3, 2), s(6, 0)]];
        let exact = ExactEngine::for_field(&f);
        let cert = CertifiedEngine::for_field(&f);
        let rows: Vec<_> = data.iter().map(|r| exact.convert_row(r)).collect();
        let k1 = exact.kernel(rows.clone(), 4);
        let k2 = cert.kernel(rows.clone(), 4);
        assert_eq!(k1.free_cols, k2.free_cols);
        assert_eq!(k1.nullity(), 2);
        for v in &k2.basis {
            assert!(cert.verifies(&rows, v));
        }
    }
}
