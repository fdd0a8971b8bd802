use super::{Engine, EngineLabel, Kernel};
use crate::field::modular::inv_mod;
use crate::field::{rational_mod_p, FieldDescriptor, FieldScalar};

/// Gauss-Jordan elimination over `F_p` with word-sized residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModularEngine {
    p: u64,
}

/// Multiplier with a precomputed quotient, for repeated products `w·x mod p`.
#[derive(Clone, Copy)]
struct Shoup {
    w: u64,
    w_pre: u64,
}

impl Shoup {
    fn new(w: u64, p: u64) -> Self {
        Self {
            w,
            w_pre: (((w as u128) << 64) / p as u128) as u64,
        }
    }

    #[inline]
    fn mul(self, x: u64, p: u64) -> u64 {
        let q = ((self.w_pre as u128 * x as u128) >> 64) as u64;
        let r = self.w.wrapping_mul(x).wrapping_sub(q.wrapping_mul(p));
        if r >= p {
            r - p
        } else {
            r
        }
    }
}

/// `row += w·pivot mod p` on 32-bit residues, `p < 2^32`. Every product
/// is 32×32→64 bits with a precomputed quotient, so the loop vectorizes.
fn axpy32(row: &mut [u32], pivot: &[u32], w: u64, p: u64) {
    let w_pre = (w << 32) / p;
    for (x, &y) in row.iter_mut().zip(pivot) {
        let y = y as u64;
        let q = w_pre.wrapping_mul(y) >> 32;
        let mut s = (*x as u64).wrapping_add(w.wrapping_mul(y).wrapping_sub(q.wrapping_mul(p)));
        if s >= p {
            s -= p;
        }
        if s >= p {
            s -= p;
        }
        *x = s as u32;
    }
}

fn axpy(row: &mut [u64], pivot: &[u64], f: Shoup, p: u64) {
    for (x, &y) in row.iter_mut().zip(pivot) {
        if y != 0 {
            let s = *x + f.mul(y, p);
            *x = if s >= p { s - p } else { s };
        }
    }
}

impl ModularEngine {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < crate::field::modular::MAX_PRIME, "unsupported prime {p}");
        Self { p }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn eliminate(&self, rows: Vec<Vec<u64>>, ncols: usize, jordan: bool) -> (Vec<usize>, Vec<Vec<u64>>) {
        if self.p < 1 << 32 {
            let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x as u32).collect()).collect();
            let (pivots, rows) = self.eliminate32(rows, ncols, jordan);
            let rows = rows.into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect();
            return (pivots, rows);
        }
        let mut rows = rows;
        let p = self.p;
        let nrows = rows.len();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == nrows {
                break;
            }
            let Some(piv) = (r..nrows).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, piv);
            let mut pivot_row = std::mem::take(&mut rows[r]);
            let inv = Shoup::new(inv_mod(pivot_row[c], p).unwrap(), p);
            for x in pivot_row[c..].iter_mut() {
                *x = inv.mul(*x, p);
            }
            let range: Box<dyn Iterator<Item = usize>> = if jordan {
                Box::new((0..r).chain(r + 1..nrows))
            } else {
                Box::new(r + 1..nrows)
            };
            for i in range {
                let row = &mut rows[i];
                let f = row[c];
                if f == 0 {
                    continue;
                }
                axpy(&mut row[c..], &pivot_row[c..], Shoup::new(p - f, p), p);
            }
            rows[r] = pivot_row;
            pivot_cols.push(c);
            r += 1;
        }
        (pivot_cols, rows)
    }

    fn eliminate32(&self, mut rows: Vec<Vec<u32>>, ncols: usize, jordan: bool) -> (Vec<usize>, Vec<Vec<u32>>) {
        let p = self.p;
        let nrows = rows.len();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == nrows {
                break;
            }
            let Some(piv) = (r..nrows).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, piv);
            let mut pivot_row = std::mem::take(&mut rows[r]);
            let inv = inv_mod(pivot_row[c] as u64, p).unwrap();
            for x in pivot_row[c..].iter_mut() {
                *x = ((*x as u64 * inv) % p) as u32;
            }
            for i in 0..nrows {
                if i == r || (!jordan && i < r) {
                    continue;
                }
                let f = rows[i][c] as u64;
                if f != 0 {
                    axpy32(&mut rows[i][c..], &pivot_row[c..], p - f, p);
                }
            }
            rows[r] = pivot_row;
            pivot_cols.push(c);
            r += 1;
        }
        (pivot_cols, rows)
    }
}

impl Engine for ModularEngine {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn is_zero(&self, e: &u64) -> bool {
        *e == 0
    }

    fn convert_row(&self, row: &[FieldScalar]) -> Vec<u64> {
        row.iter()
            .map(|s| match s {
                FieldScalar::Prime { p, value } => {
                    assert_eq!(*p, self.p, "scalar from a different prime field");
                    *value
                }
                FieldScalar::Rational(q) => rational_mod_p(q, self.p).expect("p-integral rational"),
                FieldScalar::Extension { .. } => panic!("specialize extension scalars before modular elimination"),
            })
            .collect()
    }

    fn kernel(&self, rows: Vec<Vec<u64>>, ncols: usize) -> Kernel<u64> {
        let p = self.p;
        let (pivot_cols, rows) = self.eliminate(rows, ncols, true);
        let mut is_pivot = vec![false; ncols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let free_cols: Vec<usize> = (0..ncols).filter(|&c| !is_pivot[c]).collect();
        let basis = free_cols
            .iter()
            .map(|&j| {
                let mut v = vec![0u64; ncols];
                v[j] = 1;
                for (i, &c) in pivot_cols.iter().enumerate() {
                    let x = rows[i][j];
                    v[c] = if x == 0 { 0 } else { p - x };
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

    fn rank(&self, rows: Vec<Vec<u64>>, ncols: usize) -> usize {
        self.eliminate(rows, ncols, false).0.len()
    }

    fn to_scalar(&self, e: &u64, _field: &FieldDescriptor) -> FieldScalar {
        FieldScalar::Prime { p: self.p, value: *e }
    }
}

impl EngineLabel for ModularEngine {
    fn label(&self) -> String {
        format!("mod {}", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::modular::mul_mod;

    #[test]
    fn shoup_matches_u128() {
        let p = 2_147_483_647u64;
        for &(w, x) in &[(1, 1), (p - 1, p - 1), (12345, 987654321), (p / 2, 3)] {
            assert_eq!(Shoup::new(w, p).mul(x, p), mul_mod(w, x, p));
        }
        let p = (1u64 << 62) + 135;
        assert_eq!(Shoup::new(p - 1, p).mul(p - 1, p), 1);
        for p in [2_147_483_647u64, 4_294_967_291] {
            for &(w, x, y) in &[(1, 1, 0), (p - 1, p - 1, p - 1), (12345, 987654321, 5), (p / 2, 3, p - 2), (p - 2, p / 3, 1)] {
                let mut row = [y as u32];
                axpy32(&mut row, &[x as u32], w, p);
                assert_eq!(row[0] as u64, (y + mul_mod(w, x, p)) % p);
            }
        }
    }

    #[test]
    fn kernel_vectors_are_null() {
        let e = ModularEngine::new(101);
        let rows = vec![vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 1]];
        let k = e.kernel(rows.clone(), 4);
        assert_eq!(k.nullity(), 2);
        for v in &k.basis {
            for r in &rows {
                let s = r.iter().zip(v).fold(0, |acc, (&a, &b)| (acc + mul_mod(a, b, 101)) % 101);
                assert_eq!(s, 0);
            }
        }
    }
}
