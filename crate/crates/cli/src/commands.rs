//! Command implementations. Each returns a [`Report`] or a [`Failure`]
//! carrying the exit code.

use std::fmt;
use std::path::Path;

use pogline::arrangement::ArrangementError;
use pogline::catalog::{self, CatalogEntry, CatalogError, CoordinateSource, ScreenOptions};
use pogline::combinatorics::{
    h_range, hirzebruch_check, max_multiplicity_bound, melchior_check, mpog_candidates, mpog_quadratic_screen, naive_count_check,
    non_pog_screen, poincare_poly, simplicial_check, sum_r_minus_one, tjurina,
};
use pogline::deletion::{self, DeletionError, DeletionOptions};
use pogline::syzygy::{self, generator_degrees, tau_from_milnor, ConsistencyCheck, ModeRequest, SyzygyError};
use pogline::{classify_with, defining_polynomial, Arrangement, ClassifyOptions, FieldDescriptor, WeakCombinatorics};

use crate::report::{
    CatalogSection, DeletionGroup, EntryDetail, EntrySummary, InvariantTable, PointStarSection, PointSummary, Report, ScreenSection,
};

/// Bad input: unreadable or malformed files, invalid indices or primes.
pub const EXIT_VALIDATION: u8 = 2;
/// A mathematical consistency assertion failed.
pub const EXIT_INCONSISTENT: u8 = 3;

/// Above this many lines the default verification mode is modular.
pub const EXACT_DEFAULT_MAX_LINES: usize = 21;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    /// Partial report, when one was assembled before the failure.
    pub report: Option<Box<Report>>,
}

impl Failure {
    fn validation(message: impl fmt::Display) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.to_string(),
            report: None,
        }
    }

    fn inconsistent(message: impl fmt::Display, report: Option<Report>) -> Self {
        Self {
            code: EXIT_INCONSISTENT,
            message: message.to_string(),
            report: report.map(Box::new),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<SyzygyError> for Failure {
    fn from(e: SyzygyError) -> Self {
        match &e {
            SyzygyError::Inconsistent(_) | SyzygyError::PrimeDisagreement(_) | SyzygyError::NoSyzygy { .. } => {
                Self::inconsistent(&e, None)
            }
            _ => Self::validation(e),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Syzygy(s) => s.into(),
            other => Self::validation(other),
        }
    }
}

impl From<DeletionError> for Failure {
    fn from(e: DeletionError) -> Self {
        match e {
            DeletionError::Syzygy(s) => s.into(),
            DeletionError::Inconsistent { .. } => Self::inconsistent(e, None),
            other => Self::validation(other),
        }
    }
}

impl From<ArrangementError> for Failure {
    fn from(e: ArrangementError) -> Self {
        Self::validation(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Modular,
}

/// Flags shared by all commands.
#[derive(Clone, Debug, Default)]
pub struct Global {
    pub mode: Option<Mode>,
    pub primes: Option<Vec<u64>>,
}

impl Global {
    /// Exact up to [`EXACT_DEFAULT_MAX_LINES`] lines, modular above, unless
    /// a mode was requested. Supplying primes implies modular.
    pub fn classify_options(&self, d: usize) -> ClassifyOptions {
        let mode = self.mode.unwrap_or(if self.primes.is_some() || d > EXACT_DEFAULT_MAX_LINES {
            Mode::Modular
        } else {
            Mode::Exact
        });
        match mode {
            Mode::Exact => ClassifyOptions::exact(),
            Mode::Modular => ClassifyOptions::modular(self.primes.clone()),
        }
    }
}

fn check(name: &str, claim: String, pass: bool) -> ConsistencyCheck {
    ConsistencyCheck {
        name: name.into(),
        claim,
        pass,
    }
}

pub fn invariant_table(w: &WeakCombinatorics) -> InvariantTable {
    let range = h_range(w);
    InvariantTable {
        d: w.d() as i64,
        point_count: w.point_count() as i64,
        max_multiplicity: w.max_multiplicity() as i64,
        tau: tjurina(w),
        sum_r_minus_one: sum_r_minus_one(w),
        naive_count: naive_count_check(w),
        mdr_lower_bound: (!range.is_empty()).then(|| *range.start()),
        pog_max_multiplicity_bound: max_multiplicity_bound(w.d() as i64),
        melchior: melchior_check(w).ok(),
        hirzebruch: hirzebruch_check(w).ok(),
        simplicial: simplicial_check(w).ok(),
    }
}

pub fn screen_section(w: &WeakCombinatorics) -> ScreenSection {
    let range = h_range(w);
    ScreenSection {
        h_range: (!range.is_empty()).then(|| (*range.start(), *range.end())),
        polynomials: range.map(|h| poincare_poly(w, h)).collect(),
        verdict: non_pog_screen(w),
        mpog_roots: mpog_quadratic_screen(w.d() as i64, tjurina(w)),
        mpog_candidates: mpog_candidates(w),
    }
}

fn point_summaries(arr: &Arrangement) -> Vec<PointSummary> {
    arr.points()
        .iter()
        .enumerate()
        .map(|(index, p)| PointSummary {
            index,
            lines: p.incident_lines.clone(),
        })
        .collect()
}

fn load(path: &Path) -> Result<CatalogEntry, Failure> {
    Ok(catalog::ingest(path)?)
}

fn coordinates(entry: &CatalogEntry, command: &str) -> Result<Arrangement, Failure> {
    entry
        .coordinates
        .as_ref()
        .map(CoordinateSource::load)
        .ok_or_else(|| Failure::validation(format!("`{command}` needs an arrangement file with coordinates")))
}

/// Classify and turn a consistency failure into an exit-3 failure that
/// still carries the report with the offending profile.
fn classify_into(report: &mut Report, arr: &Arrangement, options: &ClassifyOptions) -> Result<(), Failure> {
    match classify_with(arr, options) {
        Ok(p) => {
            report.mode = Some(p.mode.clone());
            report.profile = Some(p);
            Ok(())
        }
        Err(SyzygyError::Inconsistent(evidence)) => {
            let message = format!("consistency failure: {}", evidence.summary());
            report.mode = Some(evidence.profile.mode.clone());
            report.profile = Some(evidence.profile);
            Err(Failure::inconsistent(message, Some(report.clone())))
        }
        Err(e) => Err(e.into()),
    }
}

/// Combinatorial invariants, screens, and (when coordinates are present)
/// the syzygy classification.
pub fn analyze(path: &Path, global: &Global) -> Result<Report, Failure> {
    let entry = load(path)?;
    let mut report = Report::new("analyze", &path.display().to_string());
    report.invariants = Some(invariant_table(&entry.weak));
    report.screen = Some(screen_section(&entry.weak));
    report.weak = Some(entry.weak.clone());
    match &entry.coordinates {
        Some(src) => {
            let arr = src.load();
            report.points = point_summaries(&arr);
            classify_into(&mut report, &arr, &global.classify_options(arr.degree()))?;
        }
        None => report
            .warnings
            .push("no coordinates: syzygy classification skipped".into()),
    }
    Ok(report)
}

/// Combinatorial screen of an inline spec `d=..;t2=..` or a file.
pub fn screen(input: &str) -> Result<Report, Failure> {
    let weak = if input.trim_start().starts_with("d=") {
        let weak: WeakCombinatorics = input
            .trim()
            .parse()
            .map_err(|e| Failure::validation(format!("spec: {e}")))?;
        let naive = naive_count_check(&weak);
        if !naive.pass {
            return Err(Failure::validation(format!(
                "pair count fails: d^2 - d - sum (r^2 - r) t_r = {}",
                naive.residual
            )));
        }
        weak
    } else {
        load(Path::new(input))?.weak
    };
    let mut report = Report::new("screen", input);
    report.invariants = Some(invariant_table(&weak));
    report.screen = Some(screen_section(&weak));
    report.weak = Some(weak);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    Line(usize),
    AllLines,
    PointStar(usize),
}

#[derive(Clone, Debug, Default)]
pub struct DeleteFlags {
    /// Parent exponents to trust with `assume_free`, or to check against.
    pub parent: Option<(i64, i64)>,
    pub assume_free: bool,
    /// Classify every deletion by syzygies and compare with the analysis.
    pub confirm: bool,
}

pub fn delete(path: &Path, selection: &Selection, flags: &DeleteFlags, global: &Global) -> Result<Report, Failure> {
    let entry = load(path)?;
    let arr = coordinates(&entry, "delete")?;
    let mut report = Report::new("delete", &path.display().to_string());
    report.weak = Some(entry.weak.clone());
    if let Selection::PointStar(p) = *selection {
        let point = arr.points().get(p).ok_or_else(|| {
            Failure::validation(format!("point index {p} out of range (arrangement has {} points)", arr.points().len()))
        })?;
        let rest = arr.delete_point_star(p)?;
        let remaining = rest.weak_combinatorics();
        report.point_star = Some(PointStarSection {
            point: p,
            multiplicity: point.multiplicity(),
            removed_lines: point.incident_lines.clone(),
            screen: screen_section(&remaining),
            remaining,
        });
        return Ok(report);
    }
    let options = DeletionOptions {
        assume_free: flags.assume_free,
        classify: global.classify_options(arr.degree()),
    };
    if flags.assume_free && flags.parent.is_none() {
        return Err(Failure::validation("--assume-free needs --parent d1,d2"));
    }
    let (exps, verified) = deletion::parent_exponents(&arr, flags.parent, &options)?;
    let lines: Vec<usize> = match *selection {
        Selection::Line(i) => vec![i],
        _ => (0..arr.degree()).collect(),
    };
    let mut groups: Vec<DeletionGroup> = Vec::new();
    for i in lines {
        let mut analysis = deletion::analyze_deletion_verified(&arr, exps, verified, i, &options)?;
        analysis.removed_line = None;
        let profile = if flags.confirm {
            let p = classify_with(&arr.delete_line(i)?, &options.classify)?;
            report.checks.push(check(
                "deletion-confirmed",
                format!(
                    "line {i}: syzygy exponents {:?} equal the dichotomy exponents {:?}",
                    p.exponents, analysis.deletion_exponents
                ),
                p.exponents == analysis.deletion_exponents && p.classification == analysis.classification,
            ));
            report.mode = Some(p.mode.clone());
            Some(p)
        } else {
            None
        };
        match groups
            .iter_mut()
            .find(|g| g.analysis == analysis && g.profile == profile)
        {
            Some(g) => g.lines.push(i),
            None => groups.push(DeletionGroup {
                lines: vec![i],
                analysis,
                profile,
            }),
        }
    }
    report.deletions = groups;
    if report.all_pass() {
        Ok(report)
    } else {
        Err(Failure::inconsistent("deletion analysis disagrees with the syzygy classification", Some(report)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogCommand {
    List,
    Show(String),
    Screen {
        confirm: bool,
        /// `(entry name, arrangement file)` pairs supplying coordinates.
        coordinates: Vec<(String, String)>,
    },
}

fn summary(e: &CatalogEntry) -> EntrySummary {
    EntrySummary {
        name: e.name.clone(),
        weak: e.weak.clone(),
        coordinates: e.coordinates.as_ref().map(|c| c.describe().to_string()),
        expected: e.expected.clone(),
        notes: e.notes.clone(),
    }
}

pub fn catalog(command: &CatalogCommand, global: &Global) -> Result<Report, Failure> {
    match command {
        CatalogCommand::List => {
            let mut report = Report::new("catalog list", "");
            report.catalog = Some(CatalogSection::List(catalog::embedded_entries().iter().map(summary).collect()));
            Ok(report)
        }
        CatalogCommand::Show(name) => {
            let e = catalog::find_entry(name)?;
            let mut report = Report::new("catalog show", name);
            report.catalog = Some(CatalogSection::Show(Box::new(EntryDetail {
                summary: summary(&e),
                naive_count: naive_count_check(&e.weak),
                tau: tjurina(&e.weak),
                simplicial: simplicial_check(&e.weak).ok(),
                arrangement: e.coordinates.as_ref().map(|c| c.load().to_file_string()),
            })));
            Ok(report)
        }
        CatalogCommand::Screen { confirm, coordinates } => {
            let mut entries = catalog::simplicial_entries();
            for (name, file) in coordinates {
                let loaded = load(Path::new(file))?;
                let entry = entries
                    .iter_mut()
                    .find(|e| &e.name == name)
                    .ok_or_else(|| Failure::validation(format!("`{name}` is not on the screening list")))?;
                if loaded.weak != entry.weak {
                    return Err(Failure::validation(format!(
                        "{file} has weak combinatorics {}, but {name} is {}",
                        loaded.weak.vector_string(),
                        entry.weak.vector_string()
                    )));
                }
                if loaded.coordinates.is_none() {
                    return Err(Failure::validation(format!("{file} has no coordinates")));
                }
                entry.coordinates = loaded.coordinates;
            }
            let max_d = entries.iter().map(|e| e.weak.d() as usize).max().unwrap_or(0);
            let options = ScreenOptions {
                confirm: *confirm,
                classify: global.classify_options(max_d),
            };
            let screened = catalog::screen_catalog(&entries, &options)?;
            let mut report = Report::new("catalog screen", "");
            for row in &screened.rows {
                if let (Some(expected), true) = (&row.expected_exponents, row.status.is_positive()) {
                    report.checks.push(check(
                        "expected-exponents",
                        format!(
                            "{}: the recorded exponents {expected:?} are among the screen candidates {:?}",
                            row.name, row.candidate_exponents
                        ),
                        row.candidate_exponents.contains(expected),
                    ));
                }
            }
            report.catalog = Some(CatalogSection::Screen(screened));
            Ok(report)
        }
    }
}

/// Largest arrangement for which `verify` runs the literal Jacobian sweep
/// in exact arithmetic.
const LITERAL_SWEEP_MAX_LINES: usize = 8;
/// Largest arrangement for which `verify` computes the Tjurina number from
/// the Milnor algebra (modulo a prime).
const MILNOR_MAX_LINES: usize = 12;

/// The full invariant suite: lattice, combinatorial identities and
/// inequalities, classification, and independent cross-checks.
pub fn verify(path: &Path, global: &Global) -> Result<Report, Failure> {
    let entry = load(path)?;
    let arr = coordinates(&entry, "verify")?;
    let w = entry.weak.clone();
    let d = w.d() as i64;
    let mut report = Report::new("verify", &path.display().to_string());
    report.invariants = Some(invariant_table(&w));
    report.screen = Some(screen_section(&w));
    report.weak = Some(w.clone());

    let naive = naive_count_check(&w);
    report.checks.push(check(
        "pair-count",
        format!("d^2 - d = {} = sum (r^2 - r) t_r = {}", naive.pairs, naive.incidences),
        naive.pass,
    ));
    for i in 0..arr.degree() {
        let through: i64 = arr
            .points_on_line(i)?
            .iter()
            .map(|&p| arr.points()[p].multiplicity() as i64 - 1)
            .sum();
        if through != d - 1 {
            report.checks.push(check(
                "line-incidences",
                format!("line {i} meets the other {} lines in points accounting for {through}", d - 1),
                false,
            ));
        }
    }
    report.checks.push(check(
        "line-incidences",
        format!("every line meets the other {} lines exactly once", d - 1),
        report.checks.iter().all(|c| c.name != "line-incidences"),
    ));
    let tau = tjurina(&w);
    report.checks.push(check(
        "tau-formula",
        format!("tau = sum (r-1)^2 t_r = {tau} = d^2 - d - sum (r-1) t_r = {}", d * d - d - sum_r_minus_one(&w)),
        tau == d * d - d - sum_r_minus_one(&w),
    ));
    if matches!(arr.field(), FieldDescriptor::Rationals) {
        if let Ok(holds) = melchior_check(&w) {
            report.checks.push(check(
                "melchior",
                "real arrangement: t_2 >= 3 + sum_{r>=4} (r-3) t_r".into(),
                holds,
            ));
        }
    }
    if !matches!(arr.field(), FieldDescriptor::Prime(_)) {
        if let Ok(holds) = hirzebruch_check(&w) {
            report.checks.push(check(
                "hirzebruch",
                "complex arrangement: t_2 + t_3 >= d + sum_{r>=4} (r-4) t_r".into(),
                holds,
            ));
        }
    }

    let options = global.classify_options(arr.degree());
    classify_into(&mut report, &arr, &options)?;
    let profile = report.profile.clone().expect("classified");

    if arr.degree() <= EXACT_DEFAULT_MAX_LINES && !matches!(arr.field(), FieldDescriptor::Prime(_)) {
        let other = match options.mode {
            ModeRequest::Exact => ClassifyOptions::modular(global.primes.clone()),
            ModeRequest::Modular(_) => ClassifyOptions::exact(),
        };
        let alt = classify_with(&arr, &other)?;
        report.checks.push(check(
            "mode-agreement",
            format!("{} and {} give the same profile", profile.mode, alt.mode),
            profile.same_invariants(&alt),
        ));
    }
    if arr.degree() <= LITERAL_SWEEP_MAX_LINES {
        let literal = generator_degrees(&defining_polynomial(&arr))?;
        report.checks.push(check(
            "literal-system",
            format!(
                "generator degrees of the Jacobian syzygies {literal:?} equal those of the logarithmic system {:?}",
                profile.exponents
            ),
            literal == profile.exponents,
        ));
    }
    if arr.degree() <= MILNOR_MAX_LINES {
        let spec = syzygy::choose_primes(&arr, None)?.remove(0);
        let local = if matches!(arr.field(), FieldDescriptor::Prime(_)) {
            arr.clone()
        } else {
            arr.specialize(&spec)?
        };
        let k = 3 * (arr.degree() - 2);
        let probe = tau_from_milnor(&defining_polynomial(&local), k);
        report.checks.push(check(
            "milnor-tau",
            format!(
                "dim (S/J)_{k} = {} equals the combinatorial tau = {tau} (modulo {})",
                probe.value, spec.p
            ),
            probe.value == tau,
        ));
    }
    report.warnings.extend(profile.warnings.iter().cloned());
    if report.all_pass() {
        Ok(report)
    } else {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.claim.clone())
            .collect();
        Err(Failure::inconsistent(format!("verification failed: {}", failed.join("; ")), Some(report)))
    }
}

/// Parse `d1,d2`.
pub fn parse_pair(text: &str) -> Result<(i64, i64), String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts[..] {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(format!("`{text}` is not a pair of integers")),
        },
        _ => Err(format!("expected d1,d2, got `{text}`")),
    }
}

/// Parse `NAME=PATH`.
pub fn parse_assignment(text: &str) -> Result<(String, String), String> {
    text.split_once('=')
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .ok_or_else(|| format!("expected NAME=FILE, got `{text}`"))
}
