//! Fixtures shared by the benchmarks in `benches/`.

use pogline::{Arrangement, FieldDescriptor, ProjectiveLine};

/// `d` lines `x - i y` through `(0 : 0 : 1)`.
pub fn pencil(d: usize) -> Arrangement {
    from_integers(&(0..d as i64).map(|i| [1, -i, 0]).collect::<Vec<_>>())
}

/// The braid-type arrangement `xyz Π (x - i y)(y - i z)(x - i z)` for
/// `i = 1..=n`, rich in triple points.
pub fn braid_like(n: i64) -> Arrangement {
    let mut lines = vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for i in 1..=n {
        lines.extend([[1, -i, 0], [0, 1, -i], [1, 0, -i]]);
    }
    from_integers(&lines)
}

pub fn from_integers(lines: &[[i64; 3]]) -> Arrangement {
    let field = FieldDescriptor::Rationals;
    let lines = lines
        .iter()
        .map(|l| ProjectiveLine::from_i64(&field, l[0], l[1], l[2]).expect("nonzero line"))
        .collect();
    Arrangement::build_lattice(lines).expect("distinct lines")
}
