//! Invariants and criteria that depend only on the weak combinatorics
//! `(d; t_2, t_3, ...)` of an arrangement.

use std::fmt;
use std::ops::RangeInclusive;

use num_integer::{Integer, Roots};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::WeakCombinatorics;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("criterion undefined for a pencil of lines (t_d != 0)")]
    Pencil,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("branch undefined for this artifact: d1 = {d1} > d/2 = {d}/2")]
    BranchUndefined { d: i64, d1: i64 },
    #[error("exponents are not plus-one generated: d1 + d2 = {sum} != d = {d}")]
    NotPogExponents { d: i64, sum: i64 },
}

/// Whether a weak-combinatorics vector was computed from coordinates or
/// entered by hand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    LatticeDerived,
    Asserted,
}

fn sum_over(w: &WeakCombinatorics, weight: impl Fn(i64) -> i64) -> i64 {
    w.counts().iter().map(|(&r, &t)| weight(r as i64) * t as i64).sum()
}

/// Total Tjurina number `Σ (r-1)^2 t_r` (all singularities of a line
/// arrangement are ordinary, hence quasi-homogeneous).
pub fn tjurina(w: &WeakCombinatorics) -> i64 {
    sum_over(w, |r| (r - 1) * (r - 1))
}

/// `Σ (r-1) t_r`.
pub fn sum_r_minus_one(w: &WeakCombinatorics) -> i64 {
    sum_over(w, |r| r - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaiveCount {
    /// `d^2 - d`
    pub pairs: i64,
    /// `Σ (r^2 - r) t_r`
    pub incidences: i64,
    /// `pairs - incidences`
    pub residual: i64,
    pub pass: bool,
}

/// Every pair of lines meets exactly once: `d^2 - d = Σ (r^2 - r) t_r`.
pub fn naive_count_check(w: &WeakCombinatorics) -> NaiveCount {
    let d = w.d() as i64;
    let pairs = d * d - d;
    let incidences = sum_over(w, |r| r * r - r);
    NaiveCount {
        pairs,
        incidences,
        residual: pairs - incidences,
        pass: pairs == incidences,
    }
}

fn melchior_sides(w: &WeakCombinatorics) -> Result<(i64, i64), CombinatoricsError> {
    if w.is_pencil() {
        return Err(CombinatoricsError::Pencil);
    }
    let rhs = 3 + w
        .counts()
        .iter()
        .filter(|(&r, _)| r >= 4)
        .map(|(&r, &t)| (r as i64 - 3) * t as i64)
        .sum::<i64>();
    Ok((w.t(2) as i64, rhs))
}

/// Simpliciality: `t_2 = 3 + Σ_{r>=4} (r-3) t_r`.
pub fn simplicial_check(w: &WeakCombinatorics) -> Result<bool, CombinatoricsError> {
    let (lhs, rhs) = melchior_sides(w)?;
    Ok(lhs == rhs)
}

/// Melchior's inequality `t_2 >= 3 + Σ_{r>=4} (r-3) t_r`, which every real
/// arrangement satisfies.
pub fn melchior_check(w: &WeakCombinatorics) -> Result<bool, CombinatoricsError> {
    let (lhs, rhs) = melchior_sides(w)?;
    Ok(lhs >= rhs)
}

/// Hirzebruch's inequality `t_2 + t_3 >= d + Σ_{r>=4} (r-4) t_r`, valid for
/// complex arrangements of `d >= 6` lines with `t_d = t_{d-1} = 0`.
pub fn hirzebruch_check(w: &WeakCombinatorics) -> Result<bool, CombinatoricsError> {
    let d = w.d();
    if d < 6 {
        return Err(CombinatoricsError::Precondition(format!("needs d >= 6, got d = {d}")));
    }
    if w.t(d as u32) != 0 || w.t(d as u32 - 1) != 0 {
        return Err(CombinatoricsError::Precondition(
            "needs t_d = t_(d-1) = 0 (supersolvable arrangements are excluded)".into(),
        ));
    }
    let lhs = (w.t(2) + w.t(3)) as i64;
    let rhs = d as i64
        + w.counts()
            .iter()
            .filter(|(&r, _)| r >= 4)
            .map(|(&r, &t)| (r as i64 - 4) * t as i64)
            .sum::<i64>();
    Ok(lhs >= rhs)
}

/// `⌈4d / (d + 4)⌉`, a lower bound for the maximal multiplicity of a
/// plus-one generated arrangement of `d` lines.
pub fn max_multiplicity_bound(d: i64) -> i64 {
    Integer::div_ceil(&(4 * d), &(d + 4))
}

/// Admissible third exponents `⌈2d/m - 2⌉ ..= d - 2`.
pub fn h_range(w: &WeakCombinatorics) -> RangeInclusive<i64> {
    let d = w.d() as i64;
    let m = w.max_multiplicity() as i64;
    if m < 2 {
        // no points: nothing is admissible
        return RangeInclusive::new(1, 0);
    }
    let lower = Integer::div_ceil(&(2 * d - 2 * m), &m);
    lower..=d - 2
}

/// `1 + d·t + (Σ (r-1) t_r - h)·t^2` with its rational splitting, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareQuadratic {
    pub d: i64,
    pub h: i64,
    pub quad_coeff: i64,
    /// `(d1, d2)` with `d1 <= d2` when the polynomial equals
    /// `(1 + d1 t)(1 + d2 t)`.
    pub split: Option<(i64, i64)>,
}

impl fmt::Display for PoincareQuadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1 + {}t + {}t^2", self.d, self.quad_coeff)
    }
}

pub fn poincare_poly(w: &WeakCombinatorics, h: i64) -> PoincareQuadratic {
    let mut poly = PoincareQuadratic {
        d: w.d() as i64,
        h,
        quad_coeff: sum_r_minus_one(w) - h,
        split: None,
    };
    poly.split = split_over_rationals(&poly);
    poly
}

/// The monic integer quadratic `z^2 - d z + c` has rational roots only when
/// they are integers, so splitting reduces to a perfect-square discriminant
/// with nonnegative integer roots.
pub fn split_over_rationals(p: &PoincareQuadratic) -> Option<(i64, i64)> {
    let disc = p.d * p.d - 4 * p.quad_coeff;
    if disc < 0 {
        return None;
    }
    let s = disc.sqrt();
    if s * s != disc || (p.d + s) % 2 != 0 {
        return None;
    }
    let (d1, d2) = ((p.d - s) / 2, (p.d + s) / 2);
    (d1 >= 0).then_some((d1, d2))
}

/// A surviving `(h; d1, d2)` triple of the non-POG screen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Candidate {
    pub h: i64,
    pub d1: i64,
    pub d2: i64,
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}, {})", self.h, self.d1, self.d2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScreenStatus {
    NotPOG,
    Candidates,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenVerdict {
    pub status: ScreenStatus,
    pub candidates: Vec<Candidate>,
}

impl ScreenVerdict {
    pub fn from_candidates(candidates: Vec<Candidate>) -> Self {
        let status = if candidates.is_empty() {
            ScreenStatus::NotPOG
        } else {
            ScreenStatus::Candidates
        };
        Self { status, candidates }
    }

    pub fn is_not_pog(&self) -> bool {
        self.status == ScreenStatus::NotPOG
    }
}

/// Every `h` in [`h_range`] whose polynomial splits, before any ordering
/// filter.
pub fn splitting_candidates(w: &WeakCombinatorics) -> Vec<Candidate> {
    h_range(w)
        .filter_map(|h| {
            poincare_poly(w, h)
                .split
                .map(|(d1, d2)| Candidate { h, d1, d2 })
        })
        .collect()
}

/// Non-plus-one-generatedness criterion: if no admissible `h` gives a
/// rational splitting with `d1 <= d2 <= h`, the arrangement (assumed not
/// free) cannot be plus-one generated.
pub fn non_pog_screen(w: &WeakCombinatorics) -> ScreenVerdict {
    let all = splitting_candidates(w);
    log::info!(
        "splittings before the d2 <= h filter: {}",
        all.iter().map(|c| format!("(h={}; {}, {})", c.h, c.d1, c.d2)).collect::<Vec<_>>().join(" ")
    );
    ScreenVerdict::from_candidates(all.into_iter().filter(|c| c.d2 <= c.h).collect())
}

/// Integer roots `0 <= r <= d/2` of `r^2 - r(d-1) + (d-1)^2 = τ + 2`.
pub fn mpog_quadratic_screen(d: i64, tau: i64) -> Vec<i64> {
    let b = d - 1;
    let c = b * b - tau - 2;
    let disc = b * b - 4 * c;
    if disc < 0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    if s * s != disc || (b + s) % 2 != 0 {
        return Vec::new();
    }
    let mut roots = vec![(b - s) / 2];
    if s != 0 {
        roots.push((b + s) / 2);
    }
    roots.retain(|&r| r >= 0 && 2 * r <= d);
    roots
}

/// Exponents `(d1, d2, d2 + 1)` of every non-POG screen candidate whose
/// `d1` solves the MPOG quadratic and whose `h` is `d2 + 1`. The weak
/// combinatorics alone can leave more than one.
pub fn mpog_candidates(w: &WeakCombinatorics) -> Vec<Vec<i64>> {
    let roots = mpog_quadratic_screen(w.d() as i64, tjurina(w));
    non_pog_screen(w)
        .candidates
        .iter()
        .filter(|c| roots.contains(&c.d1) && c.h == c.d2 + 1)
        .map(|c| vec![c.d1, c.d2, c.h])
        .collect()
}

/// Defect `ν` from `d`, `d1 = mdr` and `τ`:
/// `(d-1)^2 - d1(d-1-d1) - τ` when `2 d1 < d`, and `⌈3(d-1)^2/4⌉ - τ`
/// when `2 d1 = d`.
pub fn defect(d: i64, d1: i64, tau: i64) -> Result<i64, CombinatoricsError> {
    if 2 * d1 < d {
        Ok((d - 1) * (d - 1) - d1 * (d - 1 - d1) - tau)
    } else if 2 * d1 == d {
        Ok(Integer::div_ceil(&(3 * (d - 1) * (d - 1)), &4) - tau)
    } else {
        Err(CombinatoricsError::BranchUndefined { d, d1 })
    }
}

/// `τ = (d-1)^2 - d1(d-d1-1) - (d3-d2+1)` for exponents with `d1 + d2 = d`.
pub fn pog_tau_identity(d: i64, d1: i64, d2: i64, d3: i64, tau: i64) -> Result<bool, CombinatoricsError> {
    if d1 + d2 != d {
        return Err(CombinatoricsError::NotPogExponents { d, sum: d1 + d2 });
    }
    Ok(tau == (d - 1) * (d - 1) - d1 * (d - d1 - 1) - (d3 - d2 + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentIdentityCheck {
    /// `Σ (r-1) t_r`
    pub sum: i64,
    /// `d1 d2 + d3`
    pub expected: i64,
    /// `(d1+1)(d2+1) - 3`
    pub upper_bound: i64,
    pub identity_holds: bool,
    pub bound_holds: bool,
}

impl ExponentIdentityCheck {
    pub fn pass(&self) -> bool {
        self.identity_holds && self.bound_holds
    }
}

/// `Σ (r-1) t_r = d1 d2 + d3`, together with the bound
/// `Σ (r-1) t_r <= (d1+1)(d2+1) - 3` coming from `d3 <= d - 2`.
pub fn exponent_sum_identity(w: &WeakCombinatorics, d1: i64, d2: i64, d3: i64) -> ExponentIdentityCheck {
    let sum = sum_r_minus_one(w);
    let expected = d1 * d2 + d3;
    let upper_bound = (d1 + 1) * (d2 + 1) - 3;
    ExponentIdentityCheck {
        sum,
        expected,
        upper_bound,
        identity_holds: sum == expected,
        bound_holds: sum <= upper_bound,
    }
}

/// `⌈(d1 d2 + d1 + d2 + d3)/3⌉`, a lower bound for the number of
/// intersection points of a plus-one generated arrangement with
/// `d = d1 + d2 >= 6` lines.
pub fn point_count_lower_bound(d1: i64, d2: i64, d3: i64) -> Result<i64, CombinatoricsError> {
    if d1 + d2 < 6 {
        return Err(CombinatoricsError::Precondition(format!(
            "needs d = d1 + d2 >= 6, got {}",
            d1 + d2
        )));
    }
    Ok(Integer::div_ceil(&(d1 * d2 + d1 + d2 + d3), &3))
}
