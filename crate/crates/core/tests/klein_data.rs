//! Rebuilds `data/klein.arr` from the simple group of order 168 acting on
//! the plane over `Q(ζ)`, `ζ^7 = 1`, and checks it against the shipped file.
//! Set `POGLINE_REGENERATE=1` to rewrite the file.

use std::collections::BTreeSet;
use std::path::PathBuf;

use pogline::arrangement::canonicalize;
use pogline::{parse_arrangement, Arrangement, FieldDescriptor, FieldScalar, ProjectiveLine};

type Mat = [[FieldScalar; 3]; 3];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = &a[i][0] * &b[0][j];
            for k in 1..3 {
                acc = &acc + &(&a[i][k] * &b[k][j]);
            }
            acc
        })
    })
}

fn inverse(m: &Mat) -> Mat {
    let cof = |i: usize, j: usize| {
        let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
        let c: Vec<usize> = (0..3).filter(|&x| x != j).collect();
        let v = &(&m[r[0]][c[0]] * &m[r[1]][c[1]]) - &(&m[r[0]][c[1]] * &m[r[1]][c[0]]);
        if (i + j) % 2 == 1 {
            -v
        } else {
            v
        }
    };
    let mut det = &m[0][0] * &cof(0, 0);
    for j in 1..3 {
        det = &det + &(&m[0][j] * &cof(0, j));
    }
    let inv = det.invert().unwrap();
    std::array::from_fn(|i| std::array::from_fn(|j| &cof(j, i) * &inv))
}

fn row_times(v: &[FieldScalar; 3], m: &Mat) -> [FieldScalar; 3] {
    std::array::from_fn(|j| {
        let mut acc = &v[0] * &m[0][j];
        for i in 1..3 {
            acc = &acc + &(&v[i] * &m[i][j]);
        }
        acc
    })
}

/// The 21 mirrors of the involutions, as lines over `Q(ζ)`.
fn mirrors() -> Vec<[FieldScalar; 3]> {
    let k = FieldDescriptor::extension_from_integers(&[1, 1, 1, 1, 1, 1, 1]).unwrap();
    let z = k.generator().unwrap();
    let zp = |e: u32| z.pow(e);
    let (o, l) = (k.zero(), k.one());
    let g: Mat = [
        [zp(4), o.clone(), o.clone()],
        [o.clone(), zp(2), o.clone()],
        [o.clone(), o.clone(), zp(1)],
    ];
    let c: Mat = [
        [o.clone(), l.clone(), o.clone()],
        [o.clone(), o.clone(), l.clone()],
        [l.clone(), o.clone(), o.clone()],
    ];
    let sqrt_m7 = &(&(&zp(1) + &zp(2)) + &zp(4)) - &(&(&zp(3) + &zp(5)) + &zp(6));
    let s = -sqrt_m7.invert().unwrap();
    let a = &(&zp(1) - &zp(6)) * &s;
    let b = &(&zp(2) - &zp(5)) * &s;
    let cc = &(&zp(4) - &zp(3)) * &s;
    let h: Mat = [
        [a.clone(), b.clone(), cc.clone()],
        [b.clone(), cc.clone(), a.clone()],
        [cc.clone(), a.clone(), b.clone()],
    ];
    let id: Mat = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { l.clone() } else { o.clone() }));
    assert_eq!(mat_mul(&h, &h), id, "h is an involution");
    let mut group: BTreeSet<Mat> = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id.clone()];
    while let Some(m) = frontier.pop() {
        for gen in [&g, &c, &h] {
            let n = mat_mul(&m, gen);
            if group.insert(n.clone()) {
                frontier.push(n);
            }
        }
    }
    assert_eq!(group.len(), 168);
    let mut lines = BTreeSet::new();
    for m in &group {
        if *m != id && mat_mul(m, m) == id {
            let plus: Mat = std::array::from_fn(|i| std::array::from_fn(|j| &m[i][j] + &id[i][j]));
            let row = plus.iter().find(|r| r.iter().any(|x| !x.is_zero())).unwrap().clone();
            lines.insert(canonicalize(row).unwrap());
        }
    }
    assert_eq!(lines.len(), 21);
    lines.into_iter().collect()
}

/// `u + v β` with `β = ζ + ζ^2 + ζ^4`, when the element lies in `Q(β)`.
fn descend(c: &FieldScalar, target: &FieldDescriptor) -> Option<FieldScalar> {
    let q = c.rational_coeffs().unwrap();
    if q[1] != q[2] || q[1] != q[4] || !num_traits::Zero::is_zero(&q[3]) || !num_traits::Zero::is_zero(&q[5]) {
        return None;
    }
    let beta = target.generator().unwrap();
    Some(&target.from_rational(&q[0]).unwrap() + &(&beta * &target.from_rational(&q[1]).unwrap()))
}

fn build() -> Arrangement {
    let lines = mirrors();
    let target = FieldDescriptor::extension_from_integers(&[2, 1, 1]).unwrap();
    let n = lines.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let b: Mat = [lines[i].clone(), lines[j].clone(), lines[k].clone()];
                let det_zero = {
                    let m = &b;
                    let d = &(&(&m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1])))
                        - &(&m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]))))
                        + &(&m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0])));
                    d.is_zero()
                };
                if det_zero {
                    continue;
                }
                let b_inv = inverse(&b);
                for l in k + 1..n {
                    let w = row_times(&lines[l], &b_inv);
                    if w.iter().any(FieldScalar::is_zero) {
                        continue;
                    }
                    let scale: Vec<FieldScalar> = w.iter().map(|x| x.invert().unwrap()).collect();
                    let moved: Option<Vec<ProjectiveLine>> = lines
                        .iter()
                        .map(|line| {
                            let v = row_times(line, &b_inv);
                            let v: [FieldScalar; 3] = std::array::from_fn(|t| &v[t] * &scale[t]);
                            let v = canonicalize(v).unwrap();
                            let [a, b, c] = [descend(&v[0], &target)?, descend(&v[1], &target)?, descend(&v[2], &target)?];
                            Some(ProjectiveLine::new(a, b, c).unwrap())
                        })
                        .collect();
                    if let Some(mut moved) = moved {
                        moved.sort();
                        return Arrangement::build_lattice(moved).unwrap();
                    }
                }
            }
        }
    }
    panic!("no frame with coordinates in Q(β)");
}

fn data_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/klein.arr")
}

#[test]
fn klein_coordinates_match_shipped_file() {
    let arr = build();
    assert_eq!(arr.weak_combinatorics().to_string(), "d=21;t3=28,t4=21");
    let header = "# Klein arrangement: the 21 mirrors of the simple group of order 168,\n\
                  # in a frame where four of them are x, y, z, x+y+z.\n\
                  # Field Q(b), b^2 + b + 2 = 0, b = (-1 + sqrt(-7))/2.\n";
    let text = format!("{header}{}", arr.to_file_string());
    if std::env::var_os("POGLINE_REGENERATE").is_some() {
        std::fs::write(data_path(), &text).unwrap();
    }
    let shipped = std::fs::read_to_string(data_path()).expect("data/klein.arr");
    assert_eq!(parse_arrangement(&shipped).unwrap(), arr);
}
