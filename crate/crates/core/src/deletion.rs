//! Deleting one line from a free arrangement: the result is free or plus-one
//! generated, decided by the number `r` of intersection points on the
//! removed line. For a free parent with exponents `(d1, d2)`, the deletion
//! is free iff `r >= d1' + 1` (with `ε = 0` for line arrangements), and
//! otherwise plus-one generated with exponents `(d1, d2, d - 1 - r)`.
//!
//! The cheap route bounds `d1'` from below by `⌈2(d-1)/m' - 2⌉`; when that
//! bound already exceeds `r - 1` no syzygy computation is needed.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError, WeakCombinatorics};
use crate::combinatorics::{non_pog_screen, ScreenVerdict};
use crate::syzygy::{classify_exponents, classify_with, Classification, ClassifyOptions, SyzygyError};

#[derive(Debug, Error)]
pub enum DeletionError {
    #[error("dichotomy inapplicable: parent is {0}, not free")]
    ParentNotFree(String),
    #[error("supplied parent exponents {supplied:?} differ from computed {computed:?}")]
    ParentMismatch { supplied: (i64, i64), computed: Vec<i64> },
    #[error("deletion needs at least 4 lines, got {0}")]
    TooFewLines(usize),
    #[error("bad line profile: {0}")]
    BadProfile(String),
    #[error("bound inconclusive (r = {r} >= L + 1 = {}); coordinates are needed for an mdr computation", .bound + 1)]
    Undecided { r: i64, bound: i64 },
    #[error("deletion classified as {computed:?} but the dichotomy predicts third exponent {predicted}")]
    Inconsistent { computed: Vec<i64>, predicted: i64 },
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Syzygy(#[from] SyzygyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeletionVerdict {
    Free,
    POG,
}

impl fmt::Display for DeletionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Free => write!(f, "Free"),
            Self::POG => write!(f, "POG"),
        }
    }
}

/// How `d1'` of the deletion was determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeletionRoute {
    /// `r < L + 1`: the lower bound on `mdr` rules out freeness.
    Bound,
    /// The bound was inconclusive and `mdr` of the deletion was computed.
    Computed,
    /// The parent is a pencil; so is the deletion.
    Pencil,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeletionAnalysis {
    pub parent_exponents: (i64, i64),
    /// `None` when only combinatorial data was supplied.
    pub removed_line: Option<usize>,
    pub restriction_count: i64,
    /// Quasi-homogeneity correction, identically 0 for line arrangements.
    pub epsilon: i64,
    pub deletion_weak: WeakCombinatorics,
    /// `⌈2(d-1)/m' - 2⌉`
    pub mdr_lower_bound: i64,
    pub route: DeletionRoute,
    pub verdict: DeletionVerdict,
    pub deletion_exponents: Vec<i64>,
    pub classification: Classification,
    pub parent_verified: bool,
    pub proof_trace: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct DeletionOptions {
    /// Trust the supplied parent exponents instead of classifying the parent.
    pub assume_free: bool,
    pub classify: ClassifyOptions,
}

/// Weak combinatorics after removing a line whose points have the given
/// multiplicity histogram.
pub fn deleted_weak(parent: &WeakCombinatorics, line_profile: &BTreeMap<u32, u64>) -> Result<WeakCombinatorics, String> {
    let mut counts = parent.counts().clone();
    for (&m, &n) in line_profile {
        let have = counts.get(&m).copied().unwrap_or(0);
        if have < n {
            return Err(format!("line profile needs {n} points of multiplicity {m}, parent has {have}"));
        }
        counts.insert(m, have - n);
        if m > 2 {
            *counts.entry(m - 1).or_insert(0) += n;
        }
    }
    WeakCombinatorics::new(parent.d() - 1, counts)
}

/// `⌈2(d-1)/m' - 2⌉` for a deletion with `d - 1` lines and maximal
/// multiplicity `m'`.
pub fn mdr_lower_bound(deletion_lines: i64, max_mult: i64) -> i64 {
    Integer::div_ceil(&(2 * deletion_lines - 2 * max_mult), &max_mult)
}

struct Setup {
    d: i64,
    r: i64,
    deletion_weak: WeakCombinatorics,
    bound: i64,
    trace: Vec<String>,
}

fn setup(parent: &WeakCombinatorics, (d1, d2): (i64, i64), line_profile: &BTreeMap<u32, u64>) -> Result<Setup, DeletionError> {
    let d = parent.d() as i64;
    if d < 4 {
        return Err(DeletionError::TooFewLines(d as usize));
    }
    let r: u64 = line_profile.values().sum();
    let deletion_weak = deleted_weak(parent, line_profile).map_err(DeletionError::BadProfile)?;
    let m = deletion_weak.max_multiplicity() as i64;
    let bound = mdr_lower_bound(d - 1, m);
    let trace = vec![
        format!("parent free with exponents ({d1}, {d2}), d = {d}"),
        format!("r = {r} points on the removed line, epsilon = 0"),
        format!("deletion {} has m' = {m}", deletion_weak.vector_string()),
        format!("d1' >= L = ceil(2(d-1)/m' - 2) = ceil(2*{}/{m} - 2) = {bound}", d - 1),
    ];
    Ok(Setup {
        d,
        r: r as i64,
        deletion_weak,
        bound,
        trace,
    })
}

fn pog_by_bound(s: Setup, parent: (i64, i64), removed_line: Option<usize>, parent_verified: bool) -> DeletionAnalysis {
    let (d1, d2) = parent;
    let d3 = s.d - 1 - s.r;
    let mut trace = s.trace;
    trace.push(format!(
        "r = {} < L + 1 = {}, so r < d1' + 1 and the deletion is not free",
        s.r,
        s.bound + 1
    ));
    trace.push(format!("plus-one generated with exponents ({d1}, {d2}, d - 1 - r = {d3})"));
    let exps = vec![d1, d2, d3];
    DeletionAnalysis {
        parent_exponents: parent,
        removed_line,
        restriction_count: s.r,
        epsilon: 0,
        deletion_weak: s.deletion_weak,
        mdr_lower_bound: s.bound,
        route: DeletionRoute::Bound,
        verdict: DeletionVerdict::POG,
        classification: classify_exponents(s.d - 1, &exps),
        deletion_exponents: exps,
        parent_verified,
        proof_trace: trace,
    }
}

/// The lattice-free route: parent weak combinatorics, parent exponents and
/// the multiplicity histogram of the removed line. Succeeds only when the
/// bound decides.
pub fn analyze_deletion_weak(
    parent: &WeakCombinatorics,
    parent_exponents: (i64, i64),
    line_profile: &BTreeMap<u32, u64>,
) -> Result<DeletionAnalysis, DeletionError> {
    let s = setup(parent, parent_exponents, line_profile)?;
    if s.r < s.bound + 1 {
        Ok(pog_by_bound(s, parent_exponents, None, false))
    } else {
        Err(DeletionError::Undecided { r: s.r, bound: s.bound })
    }
}

/// Parent exponents, classifying the parent unless trusted.
pub fn parent_exponents(arr: &Arrangement, supplied: Option<(i64, i64)>, options: &DeletionOptions) -> Result<((i64, i64), bool), DeletionError> {
    match supplied {
        Some(e) if options.assume_free => Ok((e, false)),
        _ => {
            let profile = classify_with(arr, &options.classify)?;
            if profile.classification != Classification::Free {
                return Err(DeletionError::ParentNotFree(profile.classification.to_string()));
            }
            let computed = (profile.exponents[0], profile.exponents[1]);
            if let Some(e) = supplied {
                if e != computed {
                    return Err(DeletionError::ParentMismatch {
                        supplied: e,
                        computed: profile.exponents,
                    });
                }
            }
            Ok((computed, true))
        }
    }
}

/// Decide free versus plus-one generated for the deletion of line `i`.
pub fn analyze_deletion(
    arr: &Arrangement,
    parent: Option<(i64, i64)>,
    i: usize,
    options: &DeletionOptions,
) -> Result<DeletionAnalysis, DeletionError> {
    let d = arr.degree();
    if d < 4 {
        return Err(DeletionError::TooFewLines(d));
    }
    let (exps, verified) = parent_exponents(arr, parent, options)?;
    analyze_deletion_verified(arr, exps, verified, i, options)
}

/// [`analyze_deletion`] with parent exponents already settled, so that
/// per-line analyses of one parent classify it once.
pub fn analyze_deletion_verified(
    arr: &Arrangement,
    exps: (i64, i64),
    verified: bool,
    i: usize,
    options: &DeletionOptions,
) -> Result<DeletionAnalysis, DeletionError> {
    let profile = arr.line_profile(i)?;
    let deletion = arr.delete_line(i)?;
    let s = setup(&arr.weak_combinatorics(), exps, &profile)?;
    if arr.is_pencil() {
        let d = s.d;
        let mut trace = s.trace;
        trace.push("parent is a pencil; the deletion is a pencil, hence free".into());
        let deletion_exponents = vec![0, d - 2];
        return Ok(DeletionAnalysis {
            parent_exponents: exps,
            removed_line: Some(i),
            restriction_count: s.r,
            epsilon: 0,
            deletion_weak: s.deletion_weak,
            mdr_lower_bound: s.bound,
            route: DeletionRoute::Pencil,
            verdict: DeletionVerdict::Free,
            classification: Classification::Free,
            deletion_exponents,
            parent_verified: verified,
            proof_trace: trace,
        });
    }
    if s.r < s.bound + 1 {
        return Ok(pog_by_bound(s, exps, Some(i), verified));
    }
    let computed = classify_with(&deletion, &options.classify)?;
    let d1p = computed.mdr;
    let mut trace = s.trace;
    trace.push(format!("r = {} >= L + 1 = {}: bound inconclusive, computed d1' = {d1p}", s.r, s.bound + 1));
    let (verdict, route) = if s.r > d1p {
        trace.push(format!("r = {} >= d1' + 1 = {}: free", s.r, d1p + 1));
        (DeletionVerdict::Free, DeletionRoute::Computed)
    } else {
        let predicted = s.d - 1 - s.r;
        trace.push(format!("r = {} < d1' + 1 = {}: plus-one generated with d3' = {predicted}", s.r, d1p + 1));
        if computed.exponents.len() != 3 || computed.exponents[2] != predicted {
            return Err(DeletionError::Inconsistent {
                computed: computed.exponents,
                predicted,
            });
        }
        (DeletionVerdict::POG, DeletionRoute::Computed)
    };
    if (verdict == DeletionVerdict::Free) != (computed.classification == Classification::Free) {
        return Err(DeletionError::Inconsistent {
            computed: computed.exponents,
            predicted: s.d - 1 - s.r,
        });
    }
    Ok(DeletionAnalysis {
        parent_exponents: exps,
        removed_line: Some(i),
        restriction_count: s.r,
        epsilon: 0,
        deletion_weak: s.deletion_weak,
        mdr_lower_bound: s.bound,
        route,
        verdict,
        classification: computed.classification,
        deletion_exponents: computed.exponents,
        parent_verified: verified,
        proof_trace: trace,
    })
}

/// Non-POG screen of a deletion; with parent exponents, keep only the
/// candidates whose `(d1, d2)` equal the parent's.
pub fn deletion_screen(weak: &WeakCombinatorics, parent: Option<(i64, i64)>) -> ScreenVerdict {
    let base = non_pog_screen(weak);
    match parent {
        None => base,
        Some((d1, d2)) => ScreenVerdict::from_candidates(
            base.candidates
                .into_iter()
                .filter(|c| c.d1 == d1 && c.d2 == d2)
                .collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{defect, tjurina, Candidate};

    fn w(d: u64, t: &[u64]) -> WeakCombinatorics {
        WeakCombinatorics::from_vector(d, t)
    }

    #[test]
    fn klein_by_bound() {
        let profile = BTreeMap::from([(3, 4), (4, 4)]);
        let a = analyze_deletion_weak(&w(21, &[0, 28, 21]), (9, 11), &profile).unwrap();
        assert_eq!(a.restriction_count, 8);
        assert_eq!(a.mdr_lower_bound, 8);
        assert_eq!(a.deletion_weak, w(20, &[4, 28, 17]));
        assert_eq!(a.deletion_exponents, vec![9, 11, 12]);
        assert_eq!(a.classification, Classification::MPOG);
        assert_eq!(tjurina(&a.deletion_weak), 269);
    }

    #[test]
    fn wiman_by_bound() {
        let profile = BTreeMap::from([(3, 8), (4, 4), (5, 4)]);
        let a = analyze_deletion_weak(&w(45, &[0, 120, 45, 36]), (19, 25), &profile).unwrap();
        assert_eq!(a.restriction_count, 16);
        assert_eq!(a.mdr_lower_bound, 16);
        assert_eq!(a.deletion_weak, w(44, &[8, 116, 45, 32]));
        assert_eq!(a.deletion_exponents, vec![19, 25, 28]);
        assert_eq!(a.classification, Classification::POG);
        assert_eq!(tjurina(&a.deletion_weak), 1389);
        assert_eq!(defect(44, 19, 1389).unwrap(), 4);
    }

    #[test]
    fn dual_hesse_deletion_screen() {
        let weak = w(8, &[4, 8]);
        let plain = deletion_screen(&weak, None);
        assert_eq!(
            plain.candidates,
            vec![Candidate { h: 4, d1: 4, d2: 4 }, Candidate { h: 5, d1: 3, d2: 5 }]
        );
        let ctx = deletion_screen(&weak, Some((4, 4)));
        assert_eq!(ctx.candidates, vec![Candidate { h: 4, d1: 4, d2: 4 }]);
    }

    #[test]
    fn undecided_without_coordinates() {
        // a generic line in a near pencil: r is large
        let profile = BTreeMap::from([(2, 3)]);
        let e = analyze_deletion_weak(&w(4, &[3, 1]), (1, 2), &profile).unwrap_err();
        assert!(matches!(e, DeletionError::Undecided { .. }));
    }
}
