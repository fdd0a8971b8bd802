//! Rank and kernel computations for the syzygy module.
//!
//! Two engines share one interface: [`ExactEngine`] runs fraction-free
//! Gauss-Jordan elimination over `Z[β]` (an order in `Q` or a number field)
//! and [`ModularEngine`] runs ordinary Gauss-Jordan over a word-sized prime
//! field. Rows may be rescaled by nonzero constants on entry; ranks and
//! kernels are unaffected.

mod certified;
mod exact;
mod modp;

pub use certified::CertifiedEngine;
pub use exact::{ExactEngine, ZElem};
pub use modp::ModularEngine;

use crate::field::{FieldDescriptor, FieldScalar};

/// Kernel basis normalized on the free columns: `basis[i]` is nonzero at
/// `free_cols[i]` and zero at every other free column.
#[derive(Clone, Debug)]
pub struct Kernel<E> {
    pub ncols: usize,
    pub free_cols: Vec<usize>,
    pub basis: Vec<Vec<E>>,
}

impl<E> Kernel<E> {
    pub fn nullity(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.ncols - self.basis.len()
    }
}

pub trait Engine: Sync {
    type Elem: Clone + Send + Sync;

    fn zero(&self) -> Self::Elem;

    /// Convert one row of field scalars, possibly rescaling it.
    fn convert_row(&self, row: &[FieldScalar]) -> Vec<Self::Elem>;

    fn kernel(&self, rows: Vec<Vec<Self::Elem>>, ncols: usize) -> Kernel<Self::Elem>;

    fn rank(&self, rows: Vec<Vec<Self::Elem>>, ncols: usize) -> usize;

    fn is_zero(&self, e: &Self::Elem) -> bool;

    /// Map an element back into `field` (the field the engine was built for).
    fn to_scalar(&self, e: &Self::Elem, field: &FieldDescriptor) -> FieldScalar;
}

/// Plain-text label of an engine, for reports.
pub trait EngineLabel {
    fn label(&self) -> String;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(f: &FieldDescriptor, data: &[&[i64]]) -> Vec<Vec<FieldScalar>> {
        data.iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
            .collect()
    }

    fn check_kernel<E: Engine>(engine: &E, m: &[Vec<FieldScalar>], ncols: usize, nullity: usize) {
        let converted: Vec<_> = m.iter().map(|r| engine.convert_row(r)).collect();
        let k = engine.kernel(converted.clone(), ncols);
        assert_eq!(k.nullity(), nullity);
        assert_eq!(engine.rank(converted, ncols), ncols - nullity);
        for (i, v) in k.basis.iter().enumerate() {
            assert!(!engine.is_zero(&v[k.free_cols[i]]));
            for (j, &fc) in k.free_cols.iter().enumerate() {
                if j != i {
                    assert!(engine.is_zero(&v[fc]));
                }
            }
        }
    }

    #[test]
    fn small_kernels() {
        let q = FieldDescriptor::Rationals;
        let m = rows(&q, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        check_kernel(&ExactEngine::for_field(&q), &m, 3, 1);
        let f = FieldDescriptor::prime(1_000_003).unwrap();
        let m = rows(&f, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        check_kernel(&ModularEngine::new(1_000_003), &m, 3, 1);
        let m = rows(&q, &[&[0, 0, 0, 0]]);
        check_kernel(&ExactEngine::for_field(&q), &m, 4, 4);
    }
}
