//! Line arrangements in the projective plane over an exact field and their
//! intersection lattices.

mod format;
mod weak;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::field::{FieldDescriptor, FieldError, FieldScalar, Specialization};

pub use format::{parse_arrangement, ParseError};
pub use weak::WeakCombinatorics;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("coincident lines")]
    CoincidentLines,
    #[error("duplicate line: lines {first} and {second} coincide")]
    DuplicateLine { first: usize, second: usize },
    #[error("the zero triple does not define a line")]
    ZeroLine,
    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("need at least {needed} lines, got {got}")]
    TooFewLines { needed: usize, got: usize },
    #[error("line {index} is not defined over {expected}")]
    ForeignLine { index: usize, expected: String },
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Projective coordinates scaled so the first nonzero entry is 1.
pub type Coordinates = [FieldScalar; 3];

/// Scale a nonzero triple so its first nonzero entry equals 1.
pub fn canonicalize(v: [FieldScalar; 3]) -> Result<Coordinates, ArrangementError> {
    let lead = v
        .iter()
        .find(|c| !c.is_zero())
        .ok_or(ArrangementError::ZeroLine)?
        .invert()?;
    Ok(v.map(|c| &c * &lead))
}

/// The line `a·x + b·y + c·z = 0`, stored in canonical scale.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectiveLine {
    coefficients: Coordinates,
}

impl ProjectiveLine {
    pub fn new(a: FieldScalar, b: FieldScalar, c: FieldScalar) -> Result<Self, ArrangementError> {
        let field = a.descriptor();
        if b.descriptor() != field || c.descriptor() != field {
            return Err(FieldError::Mismatch {
                left: field.to_string(),
                right: if b.descriptor() != field { b.descriptor() } else { c.descriptor() }.to_string(),
            }
            .into());
        }
        Ok(Self {
            coefficients: canonicalize([a, b, c])?,
        })
    }

    pub fn from_i64(field: &FieldDescriptor, a: i64, b: i64, c: i64) -> Result<Self, ArrangementError> {
        Self::new(field.from_i64(a), field.from_i64(b), field.from_i64(c))
    }

    pub fn coefficients(&self) -> &Coordinates {
        &self.coefficients
    }

    pub fn field(&self) -> FieldDescriptor {
        self.coefficients[0].descriptor()
    }

    /// Value of the linear form at a point.
    pub fn eval(&self, point: &Coordinates) -> FieldScalar {
        let [a, b, c] = &self.coefficients;
        let ax = a * &point[0];
        let by = b * &point[1];
        let cz = c * &point[2];
        &(&ax + &by) + &cz
    }

    pub fn contains(&self, point: &Coordinates) -> bool {
        self.eval(point).is_zero()
    }

    pub fn specialize(&self, target: &Specialization) -> Result<Self, ArrangementError> {
        let [a, b, c] = &self.coefficients;
        Self::new(a.specialize(target)?, b.specialize(target)?, c.specialize(target)?)
    }
}

/// Meeting point of two distinct lines (cross product of coefficients).
pub fn intersect(l1: &ProjectiveLine, l2: &ProjectiveLine) -> Result<Coordinates, ArrangementError> {
    let [a1, b1, c1] = l1.coefficients();
    let [a2, b2, c2] = l2.coefficients();
    let cross = [
        &(b1 * c2) - &(c1 * b2),
        &(c1 * a2) - &(a1 * c2),
        &(a1 * b2) - &(b1 * a2),
    ];
    if cross.iter().all(FieldScalar::is_zero) {
        return Err(ArrangementError::CoincidentLines);
    }
    canonicalize(cross)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntersectionPoint {
    pub coordinates: Coordinates,
    /// Sorted indices of the lines through the point.
    pub incident_lines: Vec<usize>,
}

impl IntersectionPoint {
    pub fn multiplicity(&self) -> usize {
        self.incident_lines.len()
    }
}

/// Distinct lines over one field together with their intersection lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    field: FieldDescriptor,
    lines: Vec<ProjectiveLine>,
    lattice: Vec<IntersectionPoint>,
}

impl Arrangement {
    /// Build the lattice of at least two distinct lines.
    pub fn build_lattice(lines: Vec<ProjectiveLine>) -> Result<Self, ArrangementError> {
        if lines.len() < 2 {
            return Err(ArrangementError::TooFewLines {
                needed: 2,
                got: lines.len(),
            });
        }
        let field = lines[0].field();
        Self::with_field(field, lines)
    }

    /// Like [`Arrangement::build_lattice`] but accepts fewer than two lines;
    /// deletions may leave such degenerate arrangements behind.
    pub fn with_field(field: FieldDescriptor, lines: Vec<ProjectiveLine>) -> Result<Self, ArrangementError> {
        for (index, line) in lines.iter().enumerate() {
            if line.field() != field {
                return Err(ArrangementError::ForeignLine {
                    index,
                    expected: field.to_string(),
                });
            }
        }
        let mut seen: BTreeMap<&ProjectiveLine, usize> = BTreeMap::new();
        for (i, line) in lines.iter().enumerate() {
            if let Some(&first) = seen.get(line) {
                return Err(ArrangementError::DuplicateLine { first, second: i });
            }
            seen.insert(line, i);
        }
        let mut groups: BTreeMap<Coordinates, BTreeSet<usize>> = BTreeMap::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let p = intersect(&lines[i], &lines[j])?;
                let entry = groups.entry(p).or_default();
                entry.insert(i);
                entry.insert(j);
            }
        }
        let lattice = groups
            .into_iter()
            .map(|(coordinates, set)| IntersectionPoint {
                coordinates,
                incident_lines: set.into_iter().collect(),
            })
            .collect();
        Ok(Self { field, lines, lattice })
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn lines(&self) -> &[ProjectiveLine] {
        &self.lines
    }

    pub fn points(&self) -> &[IntersectionPoint] {
        &self.lattice
    }

    /// Number of lines `d`.
    pub fn degree(&self) -> usize {
        self.lines.len()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.lattice.iter().map(IntersectionPoint::multiplicity).max().unwrap_or(0)
    }

    /// All lines through one point.
    pub fn is_pencil(&self) -> bool {
        self.lattice.len() == 1
    }

    pub fn weak_combinatorics(&self) -> WeakCombinatorics {
        let mut counts = BTreeMap::new();
        for p in &self.lattice {
            *counts.entry(p.multiplicity() as u32).or_insert(0u64) += 1;
        }
        WeakCombinatorics::new(self.degree() as u64, counts).expect("lattice counts are valid")
    }

    fn check_line(&self, i: usize) -> Result<(), ArrangementError> {
        if i >= self.lines.len() {
            return Err(ArrangementError::IndexOutOfRange {
                index: i,
                len: self.lines.len(),
            });
        }
        Ok(())
    }

    /// Indices of lattice points lying on line `i`.
    pub fn points_on_line(&self, i: usize) -> Result<Vec<usize>, ArrangementError> {
        self.check_line(i)?;
        Ok(self
            .lattice
            .iter()
            .enumerate()
            .filter(|(_, p)| p.incident_lines.binary_search(&i).is_ok())
            .map(|(k, _)| k)
            .collect())
    }

    /// Multiplicity histogram of the points on line `i`.
    pub fn line_profile(&self, i: usize) -> Result<BTreeMap<u32, u64>, ArrangementError> {
        let mut profile = BTreeMap::new();
        for k in self.points_on_line(i)? {
            *profile.entry(self.lattice[k].multiplicity() as u32).or_insert(0) += 1;
        }
        Ok(profile)
    }

    /// Remove line `i` and recompute the lattice.
    pub fn delete_line(&self, i: usize) -> Result<Self, ArrangementError> {
        self.check_line(i)?;
        let lines = self
            .lines
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, l)| l.clone())
            .collect();
        Self::with_field(self.field.clone(), lines)
    }

    /// Remove every line through lattice point `p`.
    pub fn delete_point_star(&self, p: usize) -> Result<Self, ArrangementError> {
        let point = self.lattice.get(p).ok_or(ArrangementError::IndexOutOfRange {
            index: p,
            len: self.lattice.len(),
        })?;
        let lines = self
            .lines
            .iter()
            .enumerate()
            .filter(|(k, _)| point.incident_lines.binary_search(k).is_err())
            .map(|(_, l)| l.clone())
            .collect();
        Self::with_field(self.field.clone(), lines)
    }

    /// Reduce the arrangement modulo a prime. The prime is rejected unless
    /// the reduction preserves the whole incidence structure.
    pub fn specialize(&self, target: &Specialization) -> Result<Self, ArrangementError> {
        let bad = |reason: String| ArrangementError::BadPrime { p: target.p, reason };
        let lines = self
            .lines
            .iter()
            .map(|l| l.specialize(target))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(e.to_string()))?;
        let reduced = Self::with_field(target.target(), lines).map_err(|e| bad(e.to_string()))?;
        let incidences = |a: &Self| {
            a.lattice
                .iter()
                .map(|p| p.incident_lines.clone())
                .collect::<BTreeSet<_>>()
        };
        if incidences(&reduced) != incidences(self) {
            return Err(bad("reduction changes the intersection lattice".into()));
        }
        Ok(reduced)
    }

    /// Serialize in the line-oriented arrangement file format.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("field {}\n", self.field);
        for l in &self.lines {
            let [a, b, c] = l.coefficients();
            out.push_str(&format!("line {a} {b} {c}\n"));
        }
        out
    }
}
