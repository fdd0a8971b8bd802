//! Reference arrangements and weak-combinatorics vectors, file ingestion,
//! and the MPOG screen over a list of entries.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{parse_arrangement, Arrangement, ParseError, ProjectiveLine, WeakCombinatorics};
use crate::combinatorics::{
    melchior_check, mpog_candidates, mpog_quadratic_screen, naive_count_check, non_pog_screen, pog_tau_identity, simplicial_check, tjurina,
    ScreenVerdict,
};
use crate::field::FieldDescriptor;
use crate::syzygy::{classify_with, Classification, ClassifyOptions, SyzygyError};

const KLEIN_FILE: &str = include_str!("../../../data/klein.arr");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{}:{}: {}", .source.line, .source.column, .source.message)]
    Parse { path: String, source: ParseError },
    #[error("{name}: pair count fails, d^2 - d - sum (r^2 - r) t_r = {residual}")]
    NaiveCount { name: String, residual: i64 },
    #[error("{name}: {message}")]
    Invalid { name: String, message: String },
    #[error(transparent)]
    Syzygy(#[from] SyzygyError),
}

/// Where the coordinates of an entry come from.
#[derive(Clone, Debug)]
pub enum CoordinateSource {
    /// Built in code from closed-form line equations.
    Generated(fn() -> Arrangement),
    /// Arrangement file text shipped with the crate.
    Embedded(&'static str),
    /// Arrangement read from disk.
    Loaded(Box<Arrangement>),
}

impl CoordinateSource {
    pub fn load(&self) -> Arrangement {
        match self {
            Self::Generated(f) => f(),
            Self::Embedded(text) => parse_arrangement(text).expect("embedded arrangement parses"),
            Self::Loaded(a) => (**a).clone(),
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Self::Generated(_) => "generated",
            Self::Embedded(_) => "embedded file",
            Self::Loaded(_) => "ingested file",
        }
    }
}

/// A claim about an entry, stored with the statement it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedFacts {
    pub classification: Classification,
    pub exponents: Vec<i64>,
    pub claim: String,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub weak: WeakCombinatorics,
    pub coordinates: Option<CoordinateSource>,
    pub notes: Vec<String>,
    pub expected: Option<ExpectedFacts>,
    /// Entry belongs to the simplicial screening list.
    pub simplicial_list: bool,
}

impl CatalogEntry {
    fn weak_entry(name: &str, d: u64, t: &[u64]) -> Self {
        Self {
            name: name.into(),
            weak: WeakCombinatorics::from_vector(d, t),
            coordinates: None,
            notes: Vec::new(),
            expected: None,
            simplicial_list: false,
        }
    }

    fn expect(mut self, classification: Classification, exponents: &[i64], claim: &str) -> Self {
        self.expected = Some(ExpectedFacts {
            classification,
            exponents: exponents.to_vec(),
            claim: claim.into(),
        });
        self
    }

    fn mpog(name: &str, d: u64, t: &[u64], exps: [i64; 3]) -> Self {
        let claim = format!(
            "minimal plus-one generated with exponents ({}, {}, {})",
            exps[0], exps[1], exps[2]
        );
        let mut e = Self::weak_entry(name, d, t).expect(Classification::MPOG, &exps, &claim);
        e.simplicial_list = true;
        e
    }

    fn note(mut self, n: &str) -> Self {
        self.notes.push(n.into());
        self
    }

    /// Validate the vector and the expected facts against it.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let naive = naive_count_check(&self.weak);
        if !naive.pass && self.notes.is_empty() {
            return Err(CatalogError::NaiveCount {
                name: self.name.clone(),
                residual: naive.residual,
            });
        }
        if let Some(exp) = &self.expected {
            let d = self.weak.d() as i64;
            let tau = tjurina(&self.weak);
            let ok = match (&exp.classification, exp.exponents.as_slice()) {
                (Classification::Free, &[d1, d2]) => d1 + d2 == d - 1 && tau == (d - 1) * (d - 1) - d1 * d2,
                (Classification::MPOG, &[d1, d2, d3]) => {
                    d3 == d2 + 1
                        && pog_tau_identity(d, d1, d2, d3, tau).unwrap_or(false)
                        && d1 * d1 - d1 * (d - 1) + (d - 1) * (d - 1) == tau + 2
                }
                _ => false,
            };
            if !ok {
                return Err(CatalogError::Invalid {
                    name: self.name.clone(),
                    message: format!("expected exponents {:?} inconsistent with tau = {tau}", exp.exponents),
                });
            }
        }
        Ok(())
    }
}

/// `x - ω^i y`, `y - ω^i z`, `z - ω^i x` over `Q[ω]/(ω^2 + ω + 1)`.
pub fn dual_hesse() -> Arrangement {
    let k = FieldDescriptor::extension_from_integers(&[1, 1, 1]).unwrap();
    let w = k.generator().unwrap();
    let mut lines = Vec::new();
    for i in 0..3 {
        let m = -w.pow(i);
        lines.push(ProjectiveLine::new(k.one(), m.clone(), k.zero()).unwrap());
        lines.push(ProjectiveLine::new(k.zero(), k.one(), m.clone()).unwrap());
        lines.push(ProjectiveLine::new(m, k.zero(), k.one()).unwrap());
    }
    Arrangement::build_lattice(lines).unwrap()
}

/// The Klein arrangement of 21 lines over `Q(b)`, `b^2 + b + 2 = 0`.
pub fn klein() -> Arrangement {
    parse_arrangement(KLEIN_FILE).expect("shipped Klein file parses")
}

/// The Wiman vector as printed in the source claim, kept for the
/// discrepancy check.
pub fn wiman_printed() -> WeakCombinatorics {
    WeakCombinatorics::from_vector(45, &[0, 120, 28, 36])
}

pub const WIMAN_NOTE: &str = "printed t4 = 28 fails the pair count by 204; every line carries 4 quadruple points, \
                              so t4 = 45 * 4 / 4 = 45 is stored";

/// All built-in entries, in listing order.
pub fn embedded_entries() -> Vec<CatalogEntry> {
    let mut hesse = CatalogEntry::weak_entry("dualHesse", 9, &[0, 12]).expect(
        Classification::Free,
        &[4, 4],
        "free with exponents (4, 4); deleting a line gives a nearly free arrangement",
    );
    hesse.coordinates = Some(CoordinateSource::Generated(dual_hesse));
    hesse
        .notes
        .push("field Q[w]/(w^2 + w + 1); lines x - w^i y, y - w^i z, z - w^i x".into());
    let mut klein = CatalogEntry::weak_entry("Klein", 21, &[0, 28, 21]).expect(
        Classification::Free,
        &[9, 11],
        "free with exponents (9, 11); every deletion is minimal plus-one generated with exponents (9, 11, 12)",
    );
    klein.coordinates = Some(CoordinateSource::Embedded(KLEIN_FILE));
    klein.notes.push(
        "field Q[b]/(b^2 + b + 2); mirrors of the simple group of order 168, rebuilt by the klein_data test".into(),
    );
    let wiman = CatalogEntry::weak_entry("Wiman", 45, &[0, 120, 45, 36])
        .expect(
            Classification::Free,
            &[19, 25],
            "free with exponents (19, 25); every deletion is plus-one generated with exponents (19, 25, 28)",
        )
        .note(WIMAN_NOTE);
    let a13 = {
        let mut e = CatalogEntry::weak_entry("A(13,3)", 13, &[10, 10, 3, 2])
            .note("no integer root of the MPOG quadratic; with coordinates mdr = 5, so not plus-one generated");
        e.simplicial_list = true;
        e
    };
    vec![
        hesse,
        klein,
        wiman,
        a13,
        CatalogEntry::mpog("A(14,3)", 14, &[9, 16, 4, 1], [7, 7, 8]),
        CatalogEntry::mpog("A(15,3)", 15, &[12, 13, 9], [7, 8, 9]),
        CatalogEntry::mpog("A(15,5)", 15, &[9, 22, 0, 3], [7, 8, 9]),
        CatalogEntry::mpog("A(16,7)", 16, &[12, 19, 6, 0, 1], [8, 8, 9]),
        CatalogEntry::mpog("A(18,6)", 18, &[18, 16, 12, 0, 1], [9, 9, 10]),
        CatalogEntry::mpog("A(18,8)", 18, &[16, 22, 6, 2, 1], [9, 9, 10])
            .note("resolution head printed as S(-29) while the other entries satisfy -(d + d3) = -28; exponents unaffected"),
        CatalogEntry::mpog("A(19,7)", 19, &[21, 15, 15, 0, 1], [9, 10, 11]),
        CatalogEntry::mpog("A(24,2)", 24, &[32, 32, 0, 12, 0, 0, 1], [9, 15, 16]),
        CatalogEntry::mpog("A(24,3)", 24, &[31, 32, 9, 5, 3], [11, 13, 14]),
    ]
}

pub fn find_entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    embedded_entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::UnknownName(name.into()))
}

/// The ten simplicial entries screened for minimal plus-one generation.
pub fn simplicial_entries() -> Vec<CatalogEntry> {
    embedded_entries().into_iter().filter(|e| e.simplicial_list).collect()
}

/// Read an arrangement file or a one-line weak vector `d=..;t2=..`.
pub fn ingest(path: &Path) -> Result<CatalogEntry, CatalogError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: shown.clone(),
        source,
    })?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    ingest_text(&name, &text).map_err(|e| match e {
        CatalogError::Parse { source, .. } => CatalogError::Parse { path: shown, source },
        other => other,
    })
}

/// [`ingest`] on text already in memory.
pub fn ingest_text(name: &str, text: &str) -> Result<CatalogEntry, CatalogError> {
    let content: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let weak_form = content.len() == 1 && content[0].1.starts_with("d=");
    let entry = if weak_form {
        let (line, spec) = content[0];
        let weak: WeakCombinatorics = spec.parse().map_err(|mut e: ParseError| {
            e.line = line + 1;
            CatalogError::Parse {
                path: name.into(),
                source: e,
            }
        })?;
        CatalogEntry {
            name: name.into(),
            weak,
            coordinates: None,
            notes: Vec::new(),
            expected: None,
            simplicial_list: false,
        }
    } else {
        let arr = parse_arrangement(text).map_err(|source| CatalogError::Parse {
            path: name.into(),
            source,
        })?;
        CatalogEntry {
            name: name.into(),
            weak: arr.weak_combinatorics(),
            coordinates: Some(CoordinateSource::Loaded(Box::new(arr))),
            notes: Vec::new(),
            expected: None,
            simplicial_list: false,
        }
    };
    entry.validate()?;
    if matches!(melchior_check(&entry.weak), Ok(false)) {
        log::info!("{name}: Melchior inequality fails, so no real realization exists");
    }
    Ok(entry)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScreenStatus {
    ConfirmedMPOG,
    CandidateOnly,
    Excluded,
}

impl ScreenStatus {
    pub fn is_positive(self) -> bool {
        self != Self::Excluded
    }
}

impl fmt::Display for ScreenStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ConfirmedMPOG => "ConfirmedMPOG",
            Self::CandidateOnly => "CandidateOnly",
            Self::Excluded => "Excluded",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenRow {
    pub name: String,
    pub weak: WeakCombinatorics,
    pub tau: i64,
    pub roots: Vec<i64>,
    pub non_pog: ScreenVerdict,
    pub simplicial: Option<bool>,
    /// `(d1, d2, h)` of each surviving candidate with `d1` a root and
    /// `h = d2 + 1`.
    pub candidate_exponents: Vec<Vec<i64>>,
    /// Exponents from a syzygy computation, when coordinates were used.
    pub confirmed_exponents: Option<Vec<i64>>,
    pub expected_exponents: Option<Vec<i64>>,
    pub status: ScreenStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenReport {
    pub rows: Vec<ScreenRow>,
}

impl ScreenReport {
    pub fn positives(&self) -> Vec<&ScreenRow> {
        self.rows.iter().filter(|r| r.status.is_positive()).collect()
    }

    /// Plain-text table in listing order.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<10} {:<28} {:>5} {:<8} {:<13} {:<14}\n",
            "name", "weak combinatorics", "tau", "roots", "status", "exponents"
        );
        for r in &self.rows {
            let roots: Vec<String> = r.roots.iter().map(i64::to_string).collect();
            let exps = match (&r.confirmed_exponents, r.candidate_exponents.is_empty()) {
                (Some(e), _) => format!("{e:?}"),
                (None, true) => "-".into(),
                (None, false) => r
                    .candidate_exponents
                    .iter()
                    .map(|e| format!("{e:?}"))
                    .collect::<Vec<_>>()
                    .join(" or "),
            };
            out.push_str(&format!(
                "{:<10} {:<28} {:>5} {:<8} {:<13} {:<14}\n",
                r.name,
                r.weak.vector_string(),
                r.tau,
                format!("[{}]", roots.join(",")),
                r.status.to_string(),
                exps
            ));
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct ScreenOptions {
    /// Run the syzygy classification on entries with coordinates.
    pub confirm: bool,
    pub classify: ClassifyOptions,
}

/// Tjurina number, MPOG quadratic, non-POG screen, then (optionally) a
/// syzygy confirmation. An entry is excluded when the quadratic has no
/// admissible root or no screen candidate `(h; d1, d2)` has `d1` among the
/// roots and `h = d2 + 1`.
pub fn screen_catalog(entries: &[CatalogEntry], options: &ScreenOptions) -> Result<ScreenReport, CatalogError> {
    let mut rows = Vec::new();
    for e in entries {
        e.validate()?;
        let d = e.weak.d() as i64;
        let tau = tjurina(&e.weak);
        let roots = mpog_quadratic_screen(d, tau);
        let non_pog = non_pog_screen(&e.weak);
        let candidate_exponents = mpog_candidates(&e.weak);
        let mut status = if !candidate_exponents.is_empty() {
            ScreenStatus::CandidateOnly
        } else {
            ScreenStatus::Excluded
        };
        let mut confirmed_exponents = None;
        if options.confirm {
            if let Some(src) = &e.coordinates {
                let profile = classify_with(&src.load(), &options.classify)?;
                if status == ScreenStatus::CandidateOnly {
                    status = if profile.classification == Classification::MPOG {
                        ScreenStatus::ConfirmedMPOG
                    } else {
                        ScreenStatus::Excluded
                    };
                }
                confirmed_exponents = Some(profile.exponents);
            }
        }
        rows.push(ScreenRow {
            name: e.name.clone(),
            weak: e.weak.clone(),
            tau,
            roots,
            non_pog,
            simplicial: simplicial_check(&e.weak).ok(),
            candidate_exponents,
            confirmed_exponents,
            expected_exponents: e.expected.as_ref().map(|x| x.exponents.clone()),
            status,
        });
    }
    Ok(ScreenReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Candidate;

    #[test]
    fn entries_validate() {
        for e in embedded_entries() {
            e.validate().unwrap_or_else(|err| panic!("{err}"));
        }
        assert_eq!(simplicial_entries().len(), 10);
    }

    #[test]
    fn lookups() {
        assert_eq!(find_entry("A(16,7)").unwrap().weak, WeakCombinatorics::from_vector(16, &[12, 19, 6, 0, 1]));
        assert_eq!(find_entry("A(24,3)").unwrap().expected.unwrap().exponents, vec![11, 13, 14]);
        assert!(matches!(find_entry("nope"), Err(CatalogError::UnknownName(_))));
        assert_eq!(dual_hesse().weak_combinatorics(), WeakCombinatorics::from_vector(9, &[0, 12]));
        assert_eq!(klein().weak_combinatorics(), WeakCombinatorics::from_vector(21, &[0, 28, 21]));
    }

    #[test]
    fn wiman_discrepancy() {
        let printed = naive_count_check(&wiman_printed());
        assert!(!printed.pass);
        assert_eq!(printed.residual, 204);
        let w = find_entry("Wiman").unwrap();
        assert!(naive_count_check(&w.weak).pass);
        assert!(w.notes.iter().any(|n| n.contains("204")));
    }

    #[test]
    fn screen_rows() {
        let report = screen_catalog(&simplicial_entries(), &ScreenOptions::default()).unwrap();
        let a13 = &report.rows[0];
        assert_eq!((a13.tau, a13.status), (109, ScreenStatus::Excluded));
        assert!(a13.roots.is_empty());
        assert_eq!(a13.non_pog.candidates, vec![Candidate { h: 11, d1: 4, d2: 9 }]);
        let a153 = report.rows.iter().find(|r| r.name == "A(15,3)").unwrap();
        assert_eq!((a153.tau, a153.roots.clone()), (145, vec![7]));
        let a186 = report.rows.iter().find(|r| r.name == "A(18,6)").unwrap();
        assert_eq!((a186.roots.clone(), a186.status), (vec![8, 9], ScreenStatus::CandidateOnly));
        assert_eq!(report.positives().len(), 9);
        for row in report.positives() {
            let expected = row.expected_exponents.as_ref().unwrap();
            assert!(row.candidate_exponents.contains(expected), "{}", row.name);
        }
        let a243 = report.rows.iter().find(|r| r.name == "A(24,3)").unwrap();
        assert_eq!(a243.candidate_exponents, vec![vec![12, 12, 13], vec![11, 13, 14]]);
    }

    #[test]
    fn ingest_forms() {
        let e = ingest_text("triangle", "field rational\nline 1 0 0\nline 0 1 0\nline 0 0 1\n").unwrap();
        assert_eq!(e.weak.to_string(), "d=3;t2=3");
        let e = ingest_text("w", "# weak vector\nd=14;t2=9,t3=16,t4=4,t5=1\n").unwrap();
        assert_eq!(e.weak, find_entry("A(14,3)").unwrap().weak);
        let err = ingest_text("dup", "field rational\nline 1 0 0\nline 2 0 0\nline 0 0 1\n").unwrap_err();
        assert!(err.to_string().contains("lines 0 and 1"), "{err}");
        let err = ingest_text("bad", "d=45;t3=120,t4=28,t5=36\n").unwrap_err();
        assert!(matches!(err, CatalogError::NaiveCount { residual: 204, .. }));
    }
}
