//! Test-only oracles, written independently of the library: a dense
//! rational elimination on the literal map `(a, b, c) ↦ a f_x + b f_y + c f_z`
//! and generators of random arrangements.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use pogline::{Arrangement, FieldDescriptor, ProjectiveLine};
use rand::Rng;

type Mono = [u32; 3];
type Poly = BTreeMap<Mono, BigRational>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
            let e = out.entry(m).or_insert_with(BigRational::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn partial(p: &Poly, var: usize) -> Poly {
    p.iter()
        .filter(|(m, _)| m[var] > 0)
        .map(|(m, c)| {
            let mut n = *m;
            n[var] -= 1;
            (n, c * q(m[var] as i64))
        })
        .collect()
}

/// `Π (a x + b y + c z)` over the given integer lines.
pub fn product(lines: &[[i64; 3]]) -> Poly {
    let mut f: Poly = [([0, 0, 0], BigRational::one())].into_iter().collect();
    for l in lines {
        let lin: Poly = (0..3)
            .filter(|&i| l[i] != 0)
            .map(|i| {
                let mut m = [0; 3];
                m[i] = 1;
                (m, q(l[i]))
            })
            .collect();
        f = mul(&f, &lin);
    }
    f
}

fn monos(k: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for i in 0..=k {
        for j in 0..=k - i {
            out.push([i, j, k - i - j]);
        }
    }
    out
}

/// Row-reduce; returns the rank and a basis of the null space.
fn nullspace(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> (usize, Vec<Vec<BigRational>>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); ncols];
            v[fc] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][fc].clone();
            }
            v
        })
        .collect();
    (pivots.len(), basis)
}

/// Basis of the degree-`k` syzygies of the partials of `f` (degree `d`),
/// as vectors over `3 × monos(k)`.
fn syzygies(partials: &[Poly; 3], d: u32, k: u32) -> Vec<Vec<BigRational>> {
    let cols = monos(k);
    let target: HashMap<Mono, usize> = monos(k + d - 1).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = cols.len();
    let mut rows = vec![vec![BigRational::zero(); 3 * n]; target.len()];
    for (comp, p) in partials.iter().enumerate() {
        for (j, m) in cols.iter().enumerate() {
            for (pm, c) in p {
                let t = [pm[0] + m[0], pm[1] + m[1], pm[2] + m[2]];
                rows[target[&t]][comp * n + j] += c;
            }
        }
    }
    nullspace(rows, 3 * n).1
}

/// Minimal generator degrees of `AR(f)` in degrees `0..=d-1`, by
/// dimension counting: generators in degree `k` are
/// `dim AR_k - dim (S_1 · AR_{k-1})`.
pub fn generator_degrees(lines: &[[i64; 3]]) -> Vec<i64> {
    let f = product(lines);
    let d = lines.len() as u32;
    let partials = [partial(&f, 0), partial(&f, 1), partial(&f, 2)];
    let mut out = Vec::new();
    let mut prev: Vec<Vec<BigRational>> = Vec::new();
    for k in 0..d {
        let basis = syzygies(&partials, d, k);
        let cols = monos(k);
        let index: HashMap<Mono, usize> = cols.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let n = cols.len();
        let below = if k == 0 { Vec::new() } else { monos(k - 1) };
        let mut products = Vec::new();
        for v in &prev {
            for var in 0..3 {
                let mut w = vec![BigRational::zero(); 3 * n];
                for comp in 0..3 {
                    for (j, m) in below.iter().enumerate() {
                        let c = &v[comp * below.len() + j];
                        if !c.is_zero() {
                            let mut t = *m;
                            t[var] += 1;
                            w[comp * n + index[&t]] = c.clone();
                        }
                    }
                }
                products.push(w);
            }
        }
        let spanned = if products.is_empty() { 0 } else { nullspace(products, 3 * n).0 };
        for _ in 0..basis.len() - spanned {
            out.push(k as i64);
        }
        prev = basis;
    }
    out
}

/// Intersection-point multiplicities by brute force over pairs of lines.
pub fn multiplicities(lines: &[[i64; 3]]) -> BTreeMap<u32, u64> {
    let cross = |a: &[i64; 3], b: &[i64; 3]| {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    };
    let on = |l: &[i64; 3], p: &[i64; 3]| l[0] * p[0] + l[1] * p[1] + l[2] * p[2] == 0;
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let p = cross(&lines[i], &lines[j]);
            let through: Vec<usize> = (0..lines.len()).filter(|&k| on(&lines[k], &p)).collect();
            if !seen.contains(&through) {
                seen.push(through);
            }
        }
    }
    let mut counts = BTreeMap::new();
    for s in seen {
        *counts.entry(s.len() as u32).or_insert(0) += 1;
    }
    counts
}

fn proportional(a: &[i64; 3], b: &[i64; 3]) -> bool {
    a[0] * b[1] == a[1] * b[0] && a[0] * b[2] == a[2] * b[0] && a[1] * b[2] == a[2] * b[1]
}

/// `d` distinct lines with small integer coefficients. Small ranges make
/// multiple points common; with probability 1/8 the lines form a pencil.
pub fn random_lines<R: Rng>(rng: &mut R, d: usize) -> Vec<[i64; 3]> {
    let pencil = rng.gen_ratio(1, 8);
    let mut lines: Vec<[i64; 3]> = Vec::new();
    while lines.len() < d {
        let l = if pencil {
            [rng.gen_range(-4..=4), rng.gen_range(-4..=4), 0]
        } else {
            [rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(-2..=2)]
        };
        if l != [0, 0, 0] && !lines.iter().any(|m| proportional(m, &l)) {
            lines.push(l);
        }
    }
    lines
}

pub fn arrangement(lines: &[[i64; 3]]) -> Arrangement {
    let field = FieldDescriptor::Rationals;
    let lines = lines
        .iter()
        .map(|l| ProjectiveLine::from_i64(&field, l[0], l[1], l[2]).unwrap())
        .collect();
    Arrangement::build_lattice(lines).unwrap()
}

/// `Σ (r-1)^2 t_r`, summed directly.
pub fn tau_by_hand(t_from_two: &[u64]) -> i64 {
    t_from_two
        .iter()
        .enumerate()
        .map(|(i, &t)| ((i + 1) * (i + 1)) as i64 * t as i64)
        .sum()
}

/// Lines `x - i y` for `i = 0..d`, all through `(0 : 0 : 1)`.
pub fn pencil(d: usize) -> Vec<[i64; 3]> {
    (0..d as i64).map(|i| [1, -i, 0]).collect()
}
