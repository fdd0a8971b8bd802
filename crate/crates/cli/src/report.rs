//! The report every command produces, in text and JSON form.
//!
//! Field order is fixed by declaration order and every map is a
//! `BTreeMap`, so output is byte-identical across runs. Sections that do
//! not apply to a command are omitted from the JSON.

use std::fmt::Write as _;

use pogline::catalog::{ExpectedFacts, ScreenReport};
use pogline::combinatorics::{NaiveCount, PoincareQuadratic, ScreenVerdict};
use pogline::deletion::DeletionAnalysis;
use pogline::syzygy::ConsistencyCheck;
use pogline::{ResolutionProfile, VerificationMode, WeakCombinatorics};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// The file path or spec string given on the command line.
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<VerificationMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weak: Option<WeakCombinatorics>,
    /// Intersection points in lattice order, the indices `--point-star`
    /// refers to.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screen: Option<ScreenSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ResolutionProfile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub deletions: Vec<DeletionGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_star: Option<PointStarSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<CatalogSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<ConsistencyCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input: &str) -> Self {
        Self {
            command: command.into(),
            input: input.into(),
            mode: None,
            weak: None,
            points: Vec::new(),
            invariants: None,
            screen: None,
            profile: None,
            deletions: Vec::new(),
            point_star: None,
            catalog: None,
            checks: Vec::new(),
            warnings: Vec::new(),
        }
    }

    /// Every check recorded anywhere in the report passed.
    pub fn all_pass(&self) -> bool {
        let profile_ok = |p: &ResolutionProfile| p.checks.iter().all(|c| c.pass);
        self.checks.iter().all(|c| c.pass)
            && self.profile.as_ref().is_none_or(profile_ok)
            && self.deletions.iter().all(|g| g.profile.as_ref().is_none_or(profile_ok))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        if self.input.is_empty() {
            let _ = writeln!(w, "{}", self.command);
        } else {
            let _ = writeln!(w, "{} {}", self.command, self.input);
        }
        if let Some(weak) = &self.weak {
            let _ = writeln!(w, "weak combinatorics: {} = {weak}", weak.vector_string());
        }
        if let Some(inv) = &self.invariants {
            inv.write_text(w);
        }
        let multiple: Vec<String> = self
            .points
            .iter()
            .filter(|p| p.lines.len() > 2)
            .map(|p| format!("{}:{:?}", p.index, p.lines))
            .collect();
        if !multiple.is_empty() {
            let _ = writeln!(w, "points of multiplicity >= 3 (index:lines): {}", multiple.join(" "));
        }
        if let Some(s) = &self.screen {
            s.write_text(w);
        }
        if let Some(mode) = &self.mode {
            let _ = writeln!(w, "mode: {mode}");
        }
        if let Some(p) = &self.profile {
            write_profile(w, "", p);
        }
        for g in &self.deletions {
            g.write_text(w);
        }
        if let Some(ps) = &self.point_star {
            ps.write_text(w);
        }
        if let Some(c) = &self.catalog {
            c.write_text(w);
        }
        if !self.checks.is_empty() {
            let _ = writeln!(w, "checks:");
            for c in &self.checks {
                let _ = writeln!(w, "  [{}] {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.claim);
            }
        }
        for warning in &self.warnings {
            let _ = writeln!(w, "warning: {warning}");
        }
        out
    }
}

fn write_profile(w: &mut String, indent: &str, p: &ResolutionProfile) {
    let _ = writeln!(w, "{indent}classification: {}", p.classification);
    let _ = writeln!(w, "{indent}exponents: {:?}", p.exponents);
    let _ = writeln!(w, "{indent}mdr: {}", p.mdr);
    let _ = writeln!(w, "{indent}tau: {}", p.tau);
    match p.defect {
        Some(nu) => {
            let _ = writeln!(w, "{indent}defect: {nu}");
        }
        None => {
            let _ = writeln!(w, "{indent}defect: n/a (2 mdr > d)");
        }
    }
    for c in &p.checks {
        let _ = writeln!(w, "{indent}  [{}] {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.claim);
    }
    for warning in &p.warnings {
        let _ = writeln!(w, "{indent}  warning: {warning}");
    }
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "holds",
        Some(false) => "fails",
        None => "n/a",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSummary {
    pub index: usize,
    pub lines: Vec<usize>,
}

/// Combinatorial invariants of the weak combinatorics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantTable {
    pub d: i64,
    pub point_count: i64,
    pub max_multiplicity: i64,
    pub tau: i64,
    pub sum_r_minus_one: i64,
    pub naive_count: NaiveCount,
    /// `⌈2d/m - 2⌉`, a lower bound for `mdr` of a line arrangement.
    pub mdr_lower_bound: Option<i64>,
    /// `⌈4d/(d+4)⌉`, the least `m` a plus-one generated arrangement can have.
    pub pog_max_multiplicity_bound: i64,
    pub melchior: Option<bool>,
    pub hirzebruch: Option<bool>,
    pub simplicial: Option<bool>,
}

impl InvariantTable {
    fn write_text(&self, w: &mut String) {
        let _ = writeln!(w, "d: {}", self.d);
        let _ = writeln!(w, "points: {}", self.point_count);
        let _ = writeln!(w, "m(L): {}", self.max_multiplicity);
        let _ = writeln!(w, "tau: {}", self.tau);
        let _ = writeln!(w, "sum (r-1) t_r: {}", self.sum_r_minus_one);
        let n = &self.naive_count;
        let _ = writeln!(
            w,
            "pair count: d^2 - d = {}, sum (r^2 - r) t_r = {}, residual {}",
            n.pairs, n.incidences, n.residual
        );
        if let Some(b) = self.mdr_lower_bound {
            let _ = writeln!(w, "mdr lower bound: {b}");
        }
        let _ = writeln!(w, "m bound for POG: {}", self.pog_max_multiplicity_bound);
        let _ = writeln!(w, "Melchior: {}", flag(self.melchior));
        let _ = writeln!(w, "Hirzebruch: {}", flag(self.hirzebruch));
        let _ = writeln!(w, "simplicial: {}", flag(self.simplicial));
    }
}

/// Poincaré polynomials over the admissible third exponents and the
/// resulting screens.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenSection {
    pub h_range: Option<(i64, i64)>,
    pub polynomials: Vec<PoincareQuadratic>,
    pub verdict: ScreenVerdict,
    /// Integer roots `d1` of `d1^2 - d1(d-1) + (d-1)^2 = tau + 2`.
    pub mpog_roots: Vec<i64>,
    /// `(d1, d2, h)` of each candidate with `d1` a root and `h = d2 + 1`.
    pub mpog_candidates: Vec<Vec<i64>>,
}

impl ScreenSection {
    fn write_text(&self, w: &mut String) {
        if let Some((lo, hi)) = self.h_range {
            let _ = writeln!(w, "h range: {lo}..={hi}");
        }
        for p in &self.polynomials {
            let split = match p.split {
                Some((a, b)) => format!("(1 + {a}t)(1 + {b}t)"),
                None => "irreducible over Q".into(),
            };
            let _ = writeln!(w, "  h = {:>3}: {p}  {split}", p.h);
        }
        let cands: Vec<String> = self.verdict.candidates.iter().map(ToString::to_string).collect();
        let _ = writeln!(w, "non-POG screen: {:?} [{}]", self.verdict.status, cands.join(", "));
        let roots: Vec<String> = self.mpog_roots.iter().map(i64::to_string).collect();
        let _ = writeln!(w, "MPOG quadratic roots: {{{}}}", roots.join(", "));
        if self.mpog_candidates.is_empty() {
            let _ = writeln!(w, "MPOG candidates: none");
        } else {
            let list: Vec<String> = self.mpog_candidates.iter().map(|e| format!("{e:?}")).collect();
            let _ = writeln!(w, "MPOG candidates: {}", list.join(" or "));
        }
    }
}

/// Deletions of one or more lines that gave the same analysis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeletionGroup {
    pub lines: Vec<usize>,
    /// Shared analysis; `removed_line` is cleared.
    pub analysis: DeletionAnalysis,
    /// Syzygy classification of the deletion, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ResolutionProfile>,
}

impl DeletionGroup {
    fn write_text(&self, w: &mut String) {
        let a = &self.analysis;
        let lines: Vec<String> = self.lines.iter().map(usize::to_string).collect();
        let _ = writeln!(w, "deleting line(s) {}:", lines.join(", "));
        let _ = writeln!(w, "  verdict: {} ({:?})", a.verdict, a.route);
        let _ = writeln!(w, "  classification: {}", a.classification);
        let _ = writeln!(w, "  exponents: {:?}", a.deletion_exponents);
        let _ = writeln!(w, "  deletion: {}", a.deletion_weak.vector_string());
        let _ = writeln!(
            w,
            "  parent exponents: {:?} ({})",
            a.parent_exponents,
            if a.parent_verified { "verified" } else { "assumed" }
        );
        for step in &a.proof_trace {
            let _ = writeln!(w, "    {step}");
        }
        if let Some(p) = &self.profile {
            let _ = writeln!(w, "  syzygy classification of the deletion:");
            write_profile(w, "    ", p);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointStarSection {
    pub point: usize,
    pub multiplicity: usize,
    pub removed_lines: Vec<usize>,
    pub remaining: WeakCombinatorics,
    pub screen: ScreenSection,
}

impl PointStarSection {
    fn write_text(&self, w: &mut String) {
        let lines: Vec<String> = self.removed_lines.iter().map(usize::to_string).collect();
        let _ = writeln!(
            w,
            "removing the {} lines through point {}: {}",
            self.multiplicity,
            self.point,
            lines.join(", ")
        );
        let _ = writeln!(w, "remaining: {}", self.remaining.vector_string());
        self.screen.write_text(w);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntrySummary {
    pub name: String,
    pub weak: WeakCombinatorics,
    /// How coordinates are provided, if they are.
    pub coordinates: Option<String>,
    pub expected: Option<ExpectedFacts>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDetail {
    pub summary: EntrySummary,
    pub naive_count: NaiveCount,
    pub tau: i64,
    pub simplicial: Option<bool>,
    /// Arrangement file text, for entries with coordinates.
    pub arrangement: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "kebab-case")]
pub enum CatalogSection {
    List(Vec<EntrySummary>),
    Show(Box<EntryDetail>),
    Screen(ScreenReport),
}

impl CatalogSection {
    fn write_text(&self, w: &mut String) {
        match self {
            Self::List(entries) => {
                for e in entries {
                    let coords = e.coordinates.as_deref().unwrap_or("-");
                    let _ = writeln!(w, "{:<10} {:<34} {coords}", e.name, e.weak.vector_string());
                }
            }
            Self::Show(detail) => {
                let e = &detail.summary;
                let _ = writeln!(w, "name: {}", e.name);
                let _ = writeln!(w, "weak combinatorics: {} = {}", e.weak.vector_string(), e.weak);
                let _ = writeln!(w, "coordinates: {}", e.coordinates.as_deref().unwrap_or("none"));
                if let Some(x) = &e.expected {
                    let _ = writeln!(w, "expected: {} {:?} ({})", x.classification, x.exponents, x.claim);
                }
                let _ = writeln!(w, "tau: {}", detail.tau);
                let _ = writeln!(w, "pair count residual: {}", detail.naive_count.residual);
                let _ = writeln!(w, "simplicial: {}", flag(detail.simplicial));
                for n in &e.notes {
                    let _ = writeln!(w, "note: {n}");
                }
                if let Some(text) = &detail.arrangement {
                    let _ = writeln!(w, "arrangement:");
                    w.push_str(text);
                }
            }
            Self::Screen(report) => {
                w.push_str(&report.table());
                let _ = writeln!(w, "positive: {}", report.positives().len());
            }
        }
    }
}
