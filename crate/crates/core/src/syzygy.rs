//! Graded pieces of the syzygy module `AR(f)` of the Jacobian ideal,
//! minimal generator degrees and the free / plus-one generated
//! classification.
//!
//! Two linear systems compute the same graded dimensions:
//!
//! * the literal map `(a, b, c) ↦ a f_x + b f_y + c f_z` on `(S_k)^3`, used
//!   by the polynomial-level functions ([`ar_dimension`], [`mdr`],
//!   [`generator_degrees`], [`tau_from_milnor`]);
//! * the module of logarithmic derivations vanishing on one line `H_0`,
//!   `D_0 = {θ : θ(α_H) ∈ (α_H) for all H, θ(α_0) = 0}`, which is
//!   isomorphic to `AR(f)` as a graded module. After a linear change of
//!   coordinates taking `α_0` to `z`, a derivation is a pair `(a, b)` and
//!   each other line contributes `k + 1` restriction conditions, so the
//!   matrices are much smaller. [`classify`] uses this system.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError, WeakCombinatorics};
use crate::combinatorics::{self, tjurina};
use crate::field::modular::{is_prime, next_prime};
use crate::field::{FieldDescriptor, FieldError, FieldScalar, Specialization};
use crate::linalg::{CertifiedEngine, Engine, ExactEngine, Kernel, ModularEngine};
use crate::poly::{jacobian, monomial_count, monomial_index, monomials, shift_index, HomogeneousPoly};

/// Smallest prime accepted for modular verification.
pub const MIN_MODULAR_PRIME: u64 = 1_000_000;
/// Where the default prime search starts.
pub const DEFAULT_PRIME_START: u64 = 1 << 31;
pub const DEFAULT_PRIME_COUNT: usize = 3;

#[derive(Debug, Error)]
pub enum SyzygyError {
    #[error("arrangement needs at least 3 lines, got {0}")]
    TooFewLines(usize),
    #[error("no syzygy of degree <= {cap} (non-reduced or corrupt input)")]
    NoSyzygy { cap: usize },
    #[error("prime {p} rejected: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("modular results disagree between primes: {0}")]
    PrimeDisagreement(String),
    #[error("consistency failure: {}", .0.summary())]
    Inconsistent(Box<Evidence>),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// A triple `(a, b, c)` of forms of equal degree with
/// `a f_x + b f_y + c f_z = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyTriple {
    pub a: HomogeneousPoly,
    pub b: HomogeneousPoly,
    pub c: HomogeneousPoly,
}

impl SyzygyTriple {
    pub fn degree(&self) -> u32 {
        self.a.degree()
    }

    /// Whether `a f_x + b f_y + c f_z` vanishes identically.
    pub fn annihilates(&self, f: &HomogeneousPoly) -> bool {
        let [fx, fy, fz] = jacobian(f);
        self.a.mul(&fx).add(&self.b.mul(&fy)).add(&self.c.mul(&fz)).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Free,
    NearlyFree,
    MPOG,
    POG,
    MSyzygy(usize),
}

impl Classification {
    /// Plus-one generated in the broad sense (includes nearly free and
    /// minimal plus-one generated).
    pub fn is_pog(&self) -> bool {
        matches!(self, Self::NearlyFree | Self::MPOG | Self::POG)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Free => write!(f, "Free"),
            Self::NearlyFree => write!(f, "NearlyFree"),
            Self::MPOG => write!(f, "MPOG"),
            Self::POG => write!(f, "POG"),
            Self::MSyzygy(m) => write!(f, "{m}-syzygy"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VerificationMode {
    Exact,
    /// Probabilistic: agreement of the ranks over every listed prime.
    Modular {
        #[serde(with = "crate::serde_int::seq")]
        primes: Vec<u64>,
    },
}

impl fmt::Display for VerificationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact => write!(f, "exact"),
            Self::Modular { primes } => {
                let list: Vec<String> = primes.iter().map(u64::to_string).collect();
                write!(f, "modular (probabilistic, {}-prime agreement: {})", primes.len(), list.join(", "))
            }
        }
    }
}

/// One pass/fail line of the internal consistency suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyCheck {
    pub name: String,
    pub claim: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionProfile {
    pub d: i64,
    pub mdr: i64,
    pub exponents: Vec<i64>,
    pub tau: i64,
    /// `None` when the defect formula does not apply (`2 mdr > d`).
    pub defect: Option<i64>,
    pub classification: Classification,
    pub mode: VerificationMode,
    pub checks: Vec<ConsistencyCheck>,
    pub warnings: Vec<String>,
}

impl ResolutionProfile {
    /// Equality of everything but the verification mode.
    pub fn same_invariants(&self, other: &Self) -> bool {
        let strip = |p: &Self| Self {
            mode: VerificationMode::Exact,
            ..p.clone()
        };
        strip(self) == strip(other)
    }
}

/// Everything known when a consistency assertion failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub profile: ResolutionProfile,
    pub stats: Vec<DegreeStat>,
}

impl Evidence {
    pub fn summary(&self) -> String {
        let failed: Vec<&str> = self
            .profile
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.claim.as_str())
            .collect();
        format!(
            "d={} exponents={:?} tau={} classification={}; failed: {}",
            self.profile.d,
            self.profile.exponents,
            self.profile.tau,
            self.profile.classification,
            failed.join("; ")
        )
    }
}

/// Dimension of one graded piece and the number of minimal generators in
/// that degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStat {
    pub k: usize,
    pub dim: usize,
    pub generators: usize,
}

fn exponents_of(stats: &[DegreeStat]) -> Vec<i64> {
    stats
        .iter()
        .flat_map(|s| std::iter::repeat_n(s.k as i64, s.generators))
        .collect()
}

/// A family of linear systems indexed by degree; the kernel in degree `k`
/// is a graded piece of a module of `components`-tuples of forms, with
/// columns ordered component-major and monomials in graded-lex order.
trait GradedSystem {
    fn components(&self) -> usize;
    fn rows(&self, k: usize) -> Vec<Vec<FieldScalar>>;
}

/// Sweep `k = 0..=kmax`, counting minimal generators in each degree as
/// `dim M_k - dim span(x M_{k-1} + y M_{k-1} + z M_{k-1})`. The span is
/// measured on the free columns of the degree-`k` kernel, which determine
/// a kernel vector uniquely. `stop` sees the stats after each degree.
fn sweep<E: Engine, S: GradedSystem>(
    engine: &E,
    system: &S,
    kmax: usize,
    mut stop: impl FnMut(&[DegreeStat]) -> bool,
) -> Vec<DegreeStat> {
    let comps = system.components();
    let mut prev: Option<Kernel<E::Elem>> = None;
    let mut stats = Vec::new();
    for k in 0..=kmax {
        let ncols = comps * monomial_count(k);
        let rows = system.rows(k).iter().map(|r| engine.convert_row(r)).collect();
        let kernel = engine.kernel(rows, ncols);
        let dim = kernel.nullity();
        let mut generators = dim;
        if let Some(p) = prev.as_ref().filter(|p| p.nullity() > 0 && dim > 0) {
            let n_prev = monomial_count(k - 1);
            let n_k = monomial_count(k);
            let mut position = vec![usize::MAX; ncols];
            for (t, &c) in kernel.free_cols.iter().enumerate() {
                position[c] = t;
            }
            let mut products = Vec::with_capacity(3 * p.nullity());
            for v in &p.basis {
                for var in 0..3 {
                    let mut w = vec![engine.zero(); dim];
                    for comp in 0..comps {
                        for idx in 0..n_prev {
                            let e = &v[comp * n_prev + idx];
                            if engine.is_zero(e) {
                                continue;
                            }
                            let t = position[comp * n_k + shift_index(idx, var)];
                            if t != usize::MAX {
                                w[t] = e.clone();
                            }
                        }
                    }
                    products.push(w);
                }
            }
            generators = dim - engine.rank(products, dim);
        }
        log::debug!("degree {k}: dim {dim}, {generators} new generators");
        stats.push(DegreeStat { k, dim, generators });
        prev = Some(kernel);
        if stop(&stats) {
            break;
        }
    }
    stats
}

/// The literal system `(a, b, c) ↦ a f_x + b f_y + c f_z`; in degree `k`
/// it has `3·C(k+2,2)` columns and `C(k+d+1,2)` rows.
struct JacobianSystem {
    partials: [HomogeneousPoly; 3],
    field: FieldDescriptor,
}

impl JacobianSystem {
    fn new(f: &HomogeneousPoly) -> Self {
        Self {
            partials: jacobian(f),
            field: f.field().clone(),
        }
    }

    fn row_degree(&self, k: usize) -> usize {
        k + self.partials[0].degree() as usize
    }
}

impl GradedSystem for JacobianSystem {
    fn components(&self) -> usize {
        3
    }

    fn rows(&self, k: usize) -> Vec<Vec<FieldScalar>> {
        let n_k = monomial_count(k);
        let mut rows = vec![vec![self.field.zero(); 3 * n_k]; monomial_count(self.row_degree(k))];
        for (comp, partial) in self.partials.iter().enumerate() {
            for (idx, m) in monomials(k as u32).into_iter().enumerate() {
                for (e, c) in partial.terms() {
                    let r = monomial_index((m.0 + e.0, m.1 + e.1, m.2 + e.2));
                    rows[r][comp * n_k + idx] = c.clone();
                }
            }
        }
        rows
    }
}

/// How a line other than `H_0` is parametrized after `α_0` became `z`.
enum Restriction {
    /// `x + b y + c z`: points `(-b s - c t, s, t)`; `θ(α) = a_θ + b b_θ`.
    General { b: FieldScalar, c: FieldScalar },
    /// `y + c z`: points `(s, -c t, t)`; `θ(α) = b_θ`.
    NoX { c: FieldScalar },
}

/// Derivations `θ = a ∂_x + b ∂_y` in transformed coordinates, tangent to
/// every line.
struct LogDerivationSystem {
    field: FieldDescriptor,
    restrictions: Vec<Restriction>,
}

fn inverse3(m: &[[FieldScalar; 3]; 3]) -> Option<[[FieldScalar; 3]; 3]> {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0]);
    let cof = |i: usize, j: usize| {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let v = minor(rows[0], rows[1], cols[0], cols[1]);
        if (i + j) % 2 == 1 {
            -v
        } else {
            v
        }
    };
    let det = (0..3).fold(m[0][0].descriptor().zero(), |acc, j| &acc + &(&m[0][j] * &cof(0, j)));
    let inv_det = det.invert().ok()?;
    // inverse = adj / det, adj[i][j] = cof(j, i)
    Some(std::array::from_fn(|i| std::array::from_fn(|j| &cof(j, i) * &inv_det)))
}

impl LogDerivationSystem {
    fn new(arr: &Arrangement) -> Self {
        let field = arr.field().clone();
        let lines = arr.lines();
        let alpha0 = lines[0].coefficients();
        let q = (0..3).rev().find(|&i| !alpha0[i].is_zero()).expect("nonzero line");
        // rows of T^{-1}: the unit vectors other than e_q, then α_0
        let mut t_inv: [[FieldScalar; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| field.zero()));
        for (r, i) in (0..3).filter(|&i| i != q).enumerate() {
            t_inv[r][i] = field.one();
        }
        t_inv[2] = alpha0.clone();
        let t = inverse3(&t_inv).expect("α_0 completes to a basis");
        let restrictions = lines[1..]
            .iter()
            .map(|line| {
                let a = line.coefficients();
                let v: [FieldScalar; 3] = std::array::from_fn(|j| {
                    (0..3).fold(field.zero(), |acc, i| &acc + &(&a[i] * &t[i][j]))
                });
                if !v[0].is_zero() {
                    let inv = v[0].invert().unwrap();
                    Restriction::General {
                        b: &v[1] * &inv,
                        c: &v[2] * &inv,
                    }
                } else {
                    let inv = v[1].invert().expect("line distinct from H_0");
                    Restriction::NoX { c: &v[2] * &inv }
                }
            })
            .collect();
        Self { field, restrictions }
    }
}

impl GradedSystem for LogDerivationSystem {
    fn components(&self) -> usize {
        2
    }

    fn rows(&self, k: usize) -> Vec<Vec<FieldScalar>> {
        let n_k = monomial_count(k);
        let monos = monomials(k as u32);
        let zero = self.field.zero();
        let mut rows = Vec::with_capacity(self.restrictions.len() * (k + 1));
        for restriction in &self.restrictions {
            // block[m] is the coefficient row of s^m t^{k-m}
            let mut block = vec![vec![zero.clone(); 2 * n_k]; k + 1];
            match restriction {
                Restriction::General { b, c } => {
                    // powers of X = -b s - c t as coefficient lists in s
                    let (xs, xt) = (-b.clone(), -c.clone());
                    let mut powers: Vec<Vec<FieldScalar>> = vec![vec![self.field.one()]];
                    for i in 1..=k {
                        let p = &powers[i - 1];
                        let mut next = vec![zero.clone(); i + 1];
                        for (u, coef) in p.iter().enumerate() {
                            next[u] = &next[u] + &(coef * &xt);
                            next[u + 1] = &next[u + 1] + &(coef * &xs);
                        }
                        powers.push(next);
                    }
                    for (idx, &(i, j, _)) in monos.iter().enumerate() {
                        for (u, coef) in powers[i as usize].iter().enumerate() {
                            if coef.is_zero() {
                                continue;
                            }
                            let m = u + j as usize;
                            block[m][idx] = coef.clone();
                            block[m][n_k + idx] = coef * b;
                        }
                    }
                }
                Restriction::NoX { c } => {
                    let mc = -c.clone();
                    let mut powers = vec![self.field.one()];
                    for j in 1..=k {
                        powers.push(&powers[j - 1] * &mc);
                    }
                    for (idx, &(i, j, _)) in monos.iter().enumerate() {
                        block[i as usize][n_k + idx] = powers[j as usize].clone();
                    }
                }
            }
            rows.extend(block);
        }
        rows
    }
}

macro_rules! with_engine {
    ($field:expr, |$e:ident| $body:expr) => {
        match $field {
            FieldDescriptor::Prime(p) => {
                let $e = ModularEngine::new(*p);
                $body
            }
            other => {
                let $e = ExactEngine::for_field(other);
                $body
            }
        }
    };
}

/// `dim AR(f)_k`, by elimination on the literal map.
pub fn ar_dimension(f: &HomogeneousPoly, k: usize) -> usize {
    let system = JacobianSystem::new(f);
    let rows = system.rows(k);
    with_engine!(f.field(), |e| {
        let rows = rows.iter().map(|r| e.convert_row(r)).collect();
        e.kernel(rows, 3 * monomial_count(k)).nullity()
    })
}

/// A basis of `AR(f)_k` as syzygy triples.
pub fn syzygy_basis(f: &HomogeneousPoly, k: usize) -> Vec<SyzygyTriple> {
    let system = JacobianSystem::new(f);
    let rows = system.rows(k);
    let field = f.field();
    let n_k = monomial_count(k);
    let monos = monomials(k as u32);
    with_engine!(field, |e| {
        let rows = rows.iter().map(|r| e.convert_row(r)).collect();
        e.kernel(rows, 3 * n_k)
            .basis
            .iter()
            .map(|v| {
                let part = |comp: usize| {
                    HomogeneousPoly::from_terms(
                        field,
                        k as u32,
                        monos
                            .iter()
                            .enumerate()
                            .map(|(idx, &m)| (m, e.to_scalar(&v[comp * n_k + idx], field))),
                    )
                };
                SyzygyTriple {
                    a: part(0),
                    b: part(1),
                    c: part(2),
                }
            })
            .collect()
    })
}

/// Least `k` with `AR(f)_k != 0`. The search starts at `k = 0` (pencils
/// have a constant syzygy) and is capped at `d - 2`.
pub fn mdr(f: &HomogeneousPoly) -> Result<usize, SyzygyError> {
    let cap = (f.degree() as usize).saturating_sub(2);
    (0..=cap)
        .find(|&k| ar_dimension(f, k) > 0)
        .ok_or(SyzygyError::NoSyzygy { cap })
}

/// Minimal generator degrees of `AR(f)` by a full sweep of the literal
/// map up to `d - 2` (`d - 1` for a pencil).
pub fn generator_degrees(f: &HomogeneousPoly) -> Result<Vec<i64>, SyzygyError> {
    let d = f.degree() as usize;
    let system = JacobianSystem::new(f);
    let stats = with_engine!(f.field(), |e| sweep(&e, &system, d.saturating_sub(1), |_| false));
    exponents_from_full_sweep(&stats, d)
}

fn exponents_from_full_sweep(stats: &[DegreeStat], d: usize) -> Result<Vec<i64>, SyzygyError> {
    let cap = d.saturating_sub(2);
    let pencil = stats.first().is_some_and(|s| s.dim > 0);
    let kept: Vec<DegreeStat> = stats.iter().copied().filter(|s| pencil || s.k <= cap).collect();
    let exps = exponents_of(&kept);
    if exps.is_empty() {
        return Err(SyzygyError::NoSyzygy { cap });
    }
    Ok(exps)
}

/// Result of [`tau_from_milnor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauProbe {
    pub value: i64,
    /// `k < 3(d-2)`: the value is only an upper-bound probe.
    pub probe: bool,
}

/// `dim S_k - rank((S_{k-d+1})^3 → S_k)` for the multiplication by the
/// partials; equals the Tjurina number for `k >= 3(d-2)`.
pub fn tau_from_milnor(f: &HomogeneousPoly, k: usize) -> TauProbe {
    let d = f.degree() as usize;
    let n_k = monomial_count(k) as i64;
    let probe = k < 3 * d.saturating_sub(2);
    if k + 1 < d {
        return TauProbe { value: n_k, probe };
    }
    let kk = k + 1 - d;
    let rank = 3 * monomial_count(kk) as i64 - ar_dimension(f, kk) as i64;
    TauProbe { value: n_k - rank, probe }
}

/// How [`classify_with`] verifies ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModeRequest {
    Exact,
    /// Use these primes, or [`DEFAULT_PRIME_COUNT`] primes from
    /// [`DEFAULT_PRIME_START`] when `None`.
    Modular(Option<Vec<u64>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub mode: ModeRequest,
    /// Ignore the early-termination certificates and sweep every degree
    /// up to `d - 2`.
    pub full_sweep: bool,
    /// In exact mode, use fraction-free elimination throughout instead of
    /// certified multi-modular kernels.
    pub fraction_free: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            mode: ModeRequest::Exact,
            full_sweep: false,
            fraction_free: false,
        }
    }
}

impl ClassifyOptions {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn modular(primes: Option<Vec<u64>>) -> Self {
        Self {
            mode: ModeRequest::Modular(primes),
            ..Self::default()
        }
    }
}

/// Free: two generators with `d1 + d2 = d - 1` and `τ = (d-1)^2 - d1 d2`.
/// Plus-one generated: three with `d1 + d2 = d` and
/// `τ = (d-1)^2 - d1(d-d1-1) - (d3-d2+1)`.
fn certified(exps: &[i64], d: i64, tau: i64) -> bool {
    match *exps {
        [d1, d2] => d1 + d2 == d - 1 && tau == (d - 1) * (d - 1) - d1 * d2,
        [d1, d2, d3] => d1 + d2 == d && combinatorics::pog_tau_identity(d, d1, d2, d3, tau).unwrap_or(false),
        _ => false,
    }
}

fn sweep_arrangement<E: Engine>(engine: &E, arr: &Arrangement, tau: i64, full: bool) -> Vec<DegreeStat> {
    let d = arr.degree();
    let system = LogDerivationSystem::new(arr);
    sweep(engine, &system, d - 1, |stats| {
        let k = stats.last().unwrap().k;
        let exps = exponents_of(stats);
        let pencil = stats[0].dim > 0;
        if k + 2 >= d && !pencil {
            return true;
        }
        !full && certified(&exps, d as i64, tau)
    })
}

/// Primes for modular verification, each with a specialization that
/// preserves the intersection lattice.
pub fn choose_primes(arr: &Arrangement, requested: Option<&[u64]>) -> Result<Vec<Specialization>, SyzygyError> {
    let field = arr.field();
    let good = |p: u64| -> Result<Option<Specialization>, SyzygyError> {
        for spec in Specialization::all_at(field, p)? {
            if arr.specialize(&spec).is_ok() {
                return Ok(Some(spec));
            }
        }
        Ok(None)
    };
    match requested {
        Some(primes) => primes
            .iter()
            .map(|&p| {
                if p < MIN_MODULAR_PRIME || !is_prime(p) {
                    return Err(SyzygyError::BadPrime {
                        p,
                        reason: format!("need a prime above {MIN_MODULAR_PRIME}"),
                    });
                }
                good(p)?.ok_or_else(|| SyzygyError::BadPrime {
                    p,
                    reason: "no root of the minimal polynomial preserves the lattice".into(),
                })
            })
            .collect(),
        None => {
            let mut out = Vec::new();
            let mut p = DEFAULT_PRIME_START;
            while out.len() < DEFAULT_PRIME_COUNT {
                p = next_prime(p + 1);
                if let Some(spec) = good(p)? {
                    out.push(spec);
                }
            }
            Ok(out)
        }
    }
}

/// Graded dimensions and generator counts of `AR(f)` for an arrangement,
/// computed through the log-derivation system.
pub fn degree_stats(arr: &Arrangement, options: &ClassifyOptions) -> Result<(Vec<DegreeStat>, VerificationMode), SyzygyError> {
    let d = arr.degree();
    if d < 3 {
        return Err(SyzygyError::TooFewLines(d));
    }
    let tau = tjurina(&arr.weak_combinatorics());
    match &options.mode {
        ModeRequest::Exact => {
            if let FieldDescriptor::Prime(p) = arr.field() {
                let stats = sweep_arrangement(&ModularEngine::new(*p), arr, tau, options.full_sweep);
                return Ok((stats, VerificationMode::Modular { primes: vec![*p] }));
            }
            let stats = if options.fraction_free {
                sweep_arrangement(&ExactEngine::for_field(arr.field()), arr, tau, options.full_sweep)
            } else {
                sweep_arrangement(&CertifiedEngine::for_field(arr.field()), arr, tau, options.full_sweep)
            };
            Ok((stats, VerificationMode::Exact))
        }
        ModeRequest::Modular(requested) => {
            let specs = if let FieldDescriptor::Prime(p) = arr.field() {
                vec![Specialization { p: *p, root: None }]
            } else {
                choose_primes(arr, requested.as_deref())?
            };
            let mut result: Option<Vec<DegreeStat>> = None;
            for spec in &specs {
                let local = if matches!(arr.field(), FieldDescriptor::Prime(_)) {
                    arr.clone()
                } else {
                    arr.specialize(spec)?
                };
                let stats = sweep_arrangement(&ModularEngine::new(spec.p), &local, tau, options.full_sweep);
                match &result {
                    None => result = Some(stats),
                    Some(first) if *first != stats => {
                        return Err(SyzygyError::PrimeDisagreement(format!(
                            "{:?} at {} vs {:?} at {}",
                            exponents_of(first),
                            specs[0].p,
                            exponents_of(&stats),
                            spec.p
                        )))
                    }
                    Some(_) => {}
                }
            }
            let primes = specs.iter().map(|s| s.p).collect();
            Ok((result.unwrap(), VerificationMode::Modular { primes }))
        }
    }
}

/// Classify an arrangement from its minimal generator degrees and run the
/// internal consistency suite.
pub fn classify(arr: &Arrangement) -> Result<ResolutionProfile, SyzygyError> {
    classify_with(arr, &ClassifyOptions::default())
}

pub fn classify_with(arr: &Arrangement, options: &ClassifyOptions) -> Result<ResolutionProfile, SyzygyError> {
    let (stats, mode) = degree_stats(arr, options)?;
    let d = arr.degree();
    let exponents = exponents_from_full_sweep(&stats, d)?;
    let weak = arr.weak_combinatorics();
    let profile = assemble_profile(&weak, exponents, mode);
    if profile.checks.iter().all(|c| c.pass) {
        Ok(profile)
    } else {
        Err(SyzygyError::Inconsistent(Box::new(Evidence { profile, stats })))
    }
}

/// Classification of a sorted exponent list for `d` lines.
pub fn classify_exponents(d: i64, exponents: &[i64]) -> Classification {
    match *exponents {
        [_, _] => Classification::Free,
        [d1, d2, d3] if d1 + d2 == d => {
            if d3 == d2 {
                Classification::NearlyFree
            } else if d3 == d2 + 1 {
                Classification::MPOG
            } else {
                Classification::POG
            }
        }
        _ => Classification::MSyzygy(exponents.len()),
    }
}

/// Build a profile from exponents and the weak combinatorics, recording
/// every consistency check that applies.
pub fn assemble_profile(weak: &WeakCombinatorics, exponents: Vec<i64>, mode: VerificationMode) -> ResolutionProfile {
    let d = weak.d() as i64;
    let tau = tjurina(weak);
    let mdr = exponents[0];
    let classification = classify_exponents(d, &exponents);
    let defect = combinatorics::defect(d, mdr, tau).ok();
    let mut checks = Vec::new();
    let mut check = |name: &str, claim: String, pass: bool| {
        checks.push(ConsistencyCheck {
            name: name.into(),
            claim,
            pass,
        })
    };
    let pencil = weak.is_pencil();
    let dmax = *exponents.last().unwrap();
    if !pencil {
        check(
            "exponent-cap",
            format!("every exponent is at most d - 2 = {}", d - 2),
            dmax <= d - 2,
        );
    }
    match classification {
        Classification::Free => {
            let (d1, d2) = (exponents[0], exponents[1]);
            check("free-sum", format!("free exponents satisfy d1 + d2 = d - 1: {d1} + {d2} = {}", d - 1), d1 + d2 == d - 1);
            check(
                "free-tau",
                format!("free curves have tau = (d-1)^2 - d1 d2 = {}", (d - 1) * (d - 1) - d1 * d2),
                tau == (d - 1) * (d - 1) - d1 * d2,
            );
        }
        Classification::NearlyFree | Classification::MPOG | Classification::POG => {
            let (d1, d2, d3) = (exponents[0], exponents[1], exponents[2]);
            check(
                "pog-tau",
                format!("plus-one generated: tau = (d-1)^2 - d1(d-d1-1) - (d3-d2+1) = {tau}"),
                combinatorics::pog_tau_identity(d, d1, d2, d3, tau).unwrap_or(false),
            );
            let ident = combinatorics::exponent_sum_identity(weak, d1, d2, d3);
            check(
                "pog-exponent-sum",
                format!("sum (r-1) t_r = d1 d2 + d3: {} = {}", ident.sum, ident.expected),
                ident.identity_holds,
            );
            if classification == Classification::MPOG {
                let lhs = d1 * d1 - d1 * (d - 1) + (d - 1) * (d - 1);
                check(
                    "mpog-quadratic",
                    format!("minimal plus-one generated: r^2 - r(d-1) + (d-1)^2 = tau + 2: {lhs} = {}", tau + 2),
                    lhs == tau + 2,
                );
            }
        }
        Classification::MSyzygy(_) => {}
    }
    if let Some(nu) = defect {
        let (pass, claim) = match classification {
            Classification::Free => (nu == 0, "free iff defect 0".to_string()),
            Classification::NearlyFree => (nu == 1, "nearly free has defect 1".to_string()),
            Classification::MPOG => (nu == 2, "minimal plus-one generated has defect 2".to_string()),
            Classification::POG => {
                let expected = exponents[2] - exponents[1] + 1;
                (nu == expected, format!("plus-one generated has defect d3 - d2 + 1 = {expected}"))
            }
            Classification::MSyzygy(_) => (nu != 0, "non-free curves have nonzero defect".to_string()),
        };
        check("defect", format!("{claim} (computed {nu})"), pass);
    }
    let mut warnings = Vec::new();
    let m = weak.max_multiplicity() as i64;
    if m > 0 {
        let bound = num_integer::Integer::div_ceil(&(2 * d - 2 * m), &m);
        if mdr < bound {
            warnings.push(format!("mdr {mdr} below the lower bound ceil(2d/m - 2) = {bound}"));
        }
    }
    ResolutionProfile {
        d,
        mdr,
        exponents,
        tau,
        defect,
        classification,
        mode,
        checks,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::ProjectiveLine;
    use crate::poly::defining_polynomial;

    fn arr(f: &FieldDescriptor, data: &[(i64, i64, i64)]) -> Arrangement {
        Arrangement::build_lattice(
            data.iter()
                .map(|&(a, b, c)| ProjectiveLine::from_i64(f, a, b, c).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rationals
    }

    fn triangle() -> Arrangement {
        arr(&q(), &[(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    }

    #[test]
    fn triangle_dimensions() {
        let f = defining_polynomial(&triangle());
        assert_eq!(ar_dimension(&f, 0), 0);
        assert_eq!(ar_dimension(&f, 1), 2);
        assert_eq!(mdr(&f).unwrap(), 1);
        assert_eq!(generator_degrees(&f).unwrap(), vec![1, 1]);
        for s in syzygy_basis(&f, 1) {
            assert!(s.annihilates(&f));
        }
    }

    #[test]
    fn generic_four_lines() {
        let f = defining_polynomial(&arr(&q(), &[(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]));
        assert_eq!(ar_dimension(&f, 1), 0);
        assert_eq!(mdr(&f).unwrap(), 2);
    }

    #[test]
    fn triangle_profile() {
        let p = classify(&triangle()).unwrap();
        assert_eq!(p.classification, Classification::Free);
        assert_eq!(p.exponents, vec![1, 1]);
        assert_eq!(p.tau, 3);
        assert_eq!(p.defect, Some(0));
    }

    #[test]
    fn pencil_profile() {
        let a = arr(&q(), &[(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, -1, 0)]);
        let f = defining_polynomial(&a);
        assert_eq!(mdr(&f).unwrap(), 0);
        assert_eq!(generator_degrees(&f).unwrap(), vec![0, 3]);
        let p = classify(&a).unwrap();
        assert_eq!(p.exponents, vec![0, 3]);
        assert_eq!(p.tau, 9);
        assert_eq!(p.classification, Classification::Free);
    }

    #[test]
    fn tau_probes() {
        let f = defining_polynomial(&triangle());
        assert_eq!(tau_from_milnor(&f, 3), TauProbe { value: 3, probe: false });
        let pencil = defining_polynomial(&arr(&q(), &[(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, -1, 0)]));
        assert_eq!(tau_from_milnor(&pencil, 6).value, 9);
        assert!(tau_from_milnor(&pencil, 2).probe);
    }

    #[test]
    fn log_derivation_dims_match_literal_map() {
        let a = arr(
            &q(),
            &[(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3), (1, -1, 0), (2, 0, 1)],
        );
        let f = defining_polynomial(&a);
        let system = LogDerivationSystem::new(&a);
        let e = ExactEngine::for_field(&q());
        let stats = sweep(&e, &system, 5, |_| false);
        for s in &stats {
            assert_eq!(s.dim, ar_dimension(&f, s.k), "degree {}", s.k);
        }
        assert_eq!(exponents_from_full_sweep(&stats, 7).unwrap(), generator_degrees(&f).unwrap());
    }

    #[test]
    fn modular_prime_validation() {
        let t = triangle();
        assert!(matches!(
            choose_primes(&t, Some(&[1_000_003, 7])),
            Err(SyzygyError::BadPrime { p: 7, .. })
        ));
        assert_eq!(choose_primes(&t, None).unwrap().len(), 3);
        let p = classify_with(&t, &ClassifyOptions::modular(None)).unwrap();
        assert!(p.same_invariants(&classify(&t).unwrap()));
        assert!(matches!(p.mode, VerificationMode::Modular { ref primes } if primes.len() == 3));
    }
}
