//! Word-sized prime field helpers: primality, modular arithmetic and root
//! finding for polynomials over `F_p`.

/// Largest characteristic accepted for prime fields. Products of two
/// residues are formed in `u128`, so anything below `2^63` is safe.
pub const MAX_PRIME: u64 = 1 << 63;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `p` by the extended Euclidean algorithm.
/// Returns `None` when `a ≡ 0`.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(p as i128) as u64)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(mut n: u64) -> u64 {
    if n <= 2 {
        return 2;
    }
    if n.is_multiple_of(2) {
        n += 1;
    }
    while !is_prime(n) {
        n += 2;
    }
    n
}

/// Polynomials over `F_p`, coefficients low to high, no trailing zeros.
type PolyP = Vec<u64>;

fn trim(mut a: PolyP) -> PolyP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p).expect("nonzero leading coefficient");
    while r.len() > db {
        let top = r.len() - 1;
        let c = mul_mod(r[top], lead_inv, p);
        if c != 0 {
            let shift = top - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = sub_mod(r[shift + i], mul_mod(c, bi, p), p);
            }
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(ai, bj, p), p);
        }
    }
    poly_rem(&trim(out), m, p)
}

fn poly_pow_mod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> PolyP {
    let mut acc: PolyP = vec![1];
    let mut b = poly_rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, m, p);
        }
        b = poly_mul_mod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = inv_mod(lead, p).expect("nonzero");
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

pub fn eval_mod(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter()
        .rev()
        .fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

/// All roots in `F_p` of `poly` (coefficients already reduced mod `p`),
/// sorted ascending.
pub fn roots_mod_p(poly: &[u64], p: u64) -> Vec<u64> {
    let f = trim(poly.iter().map(|c| c % p).collect());
    if f.len() <= 1 {
        return Vec::new();
    }
    if p < 5000 {
        return (0..p).filter(|&x| eval_mod(&f, x, p) == 0).collect();
    }
    // Product of the distinct linear factors: gcd(f, x^p - x).
    let xp = poly_pow_mod(&[0, 1], p, &f, p);
    let mut xp_minus_x = xp;
    if xp_minus_x.len() < 2 {
        xp_minus_x.resize(2, 0);
    }
    xp_minus_x[1] = sub_mod(xp_minus_x[1], 1, p);
    let g = poly_gcd(&f, &trim(xp_minus_x), p);
    let mut roots = Vec::new();
    split_linear(g, p, 1, &mut roots);
    roots.sort_unstable();
    roots
}

/// Equal-degree splitting of a squarefree product of linear factors.
fn split_linear(g: PolyP, p: u64, mut shift: u64, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => {
            let inv = inv_mod(g[1], p).expect("monic");
            out.push(sub_mod(0, mul_mod(g[0], inv, p), p));
        }
        _ => loop {
            let h = poly_pow_mod(&[shift % p, 1], (p - 1) / 2, &g, p);
            shift += 1;
            let mut h1 = h;
            if h1.is_empty() {
                h1.push(0);
            }
            h1[0] = sub_mod(h1[0], 1, p);
            let d = poly_gcd(&g, &trim(h1), p);
            if d.len() > 1 && d.len() < g.len() {
                let mut q = g.clone();
                // g / d by long division
                let mut quotient = vec![0u64; g.len() - d.len() + 1];
                while q.len() >= d.len() {
                    let top = q.len() - 1;
                    let c = q[top];
                    let shift_deg = top - (d.len() - 1);
                    quotient[shift_deg] = c;
                    for (i, &di) in d.iter().enumerate() {
                        q[shift_deg + i] = sub_mod(q[shift_deg + i], mul_mod(c, di, p), p);
                    }
                    q.pop();
                }
                split_linear(d, p, shift, out);
                split_linear(trim(quotient), p, shift, out);
                return;
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1_000_001));
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime(561));
        assert_eq!(next_prime(1_000_000), 1_000_003);
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(0, 7), None);
        let p = 2_147_483_647;
        assert_eq!(mul_mod(inv_mod(123_456, p).unwrap(), 123_456, p), 1);
    }

    #[test]
    fn roots_small_and_large() {
        // x^2 + 3 over F_7 has the double root 2 and 5
        assert_eq!(roots_mod_p(&[3, 0, 1], 7), vec![2, 5]);
        // x^2 + x + 1 splits mod p iff p = 1 mod 3
        let p = 1_000_003; // 1_000_003 = 1 mod 3
        let r = roots_mod_p(&[1, 1, 1], p);
        assert_eq!(r.len(), 2);
        for x in r {
            assert_eq!(eval_mod(&[1, 1, 1], x, p), 0);
        }
        // x^2 + 1 has no root when p = 3 mod 4
        assert!(roots_mod_p(&[1, 0, 1], 1_000_003).is_empty());
    }
}
