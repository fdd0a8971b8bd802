use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ParseError;

/// Line count `d` and the nonzero counts `t_r` of `r`-fold points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeakCombinatorics {
    d: u64,
    counts: BTreeMap<u32, u64>,
}

impl WeakCombinatorics {
    /// Zero counts are dropped; multiplicities below 2 are rejected.
    pub fn new(d: u64, counts: BTreeMap<u32, u64>) -> Result<Self, String> {
        if let Some(r) = counts.keys().find(|&&r| r < 2) {
            return Err(format!("multiplicity {r} is below 2"));
        }
        let counts = counts.into_iter().filter(|&(_, t)| t > 0).collect();
        Ok(Self { d, counts })
    }

    /// Build from `(d; t_2, t_3, ...)` as vectors are usually printed.
    pub fn from_vector(d: u64, t_from_two: &[u64]) -> Self {
        let counts = t_from_two
            .iter()
            .enumerate()
            .map(|(i, &t)| (i as u32 + 2, t))
            .collect();
        Self::new(d, counts).expect("indices start at 2")
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn counts(&self) -> &BTreeMap<u32, u64> {
        &self.counts
    }

    pub fn t(&self, r: u32) -> u64 {
        self.counts.get(&r).copied().unwrap_or(0)
    }

    /// `m(L)`, the largest multiplicity present (0 when there are no points).
    pub fn max_multiplicity(&self) -> u32 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn point_count(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `t_d = 1`: all lines pass through one point.
    pub fn is_pencil(&self) -> bool {
        self.t(self.d as u32) > 0
    }

    /// `(d; t_2, ..., t_m)`.
    pub fn vector_string(&self) -> String {
        let m = self.max_multiplicity().max(2);
        let ts: Vec<String> = (2..=m).map(|r| self.t(r).to_string()).collect();
        format!("({}; {})", self.d, ts.join(", "))
    }
}

impl fmt::Display for WeakCombinatorics {
    /// Inline spec syntax `d=<int>;t2=<int>,t3=<int>,...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}", self.d)?;
        for (i, (r, t)) in self.counts.iter().enumerate() {
            write!(f, "{}t{r}={t}", if i == 0 { ';' } else { ',' })?;
        }
        Ok(())
    }
}

impl FromStr for WeakCombinatorics {
    type Err = ParseError;

    /// Parses `d=<int>;t2=<int>,t3=<int>,...`; missing `t_r` are zero.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let err = |column: usize, message: String| ParseError {
            line: 1,
            column,
            message,
        };
        let s = s.trim();
        let (head, tail) = match s.split_once(';') {
            Some((h, t)) => (h, Some(t)),
            None => (s, None),
        };
        let d_str = head
            .trim()
            .strip_prefix("d=")
            .ok_or_else(|| err(1, "expected `d=<int>`".into()))?;
        let d: u64 = d_str
            .trim()
            .parse()
            .map_err(|_| err(3, format!("bad line count `{d_str}`")))?;
        let mut counts = BTreeMap::new();
        let mut column = head.len() + 2;
        for item in tail.into_iter().flat_map(|t| t.split(',')) {
            let trimmed = item.trim();
            if trimmed.is_empty() {
                column += item.len() + 1;
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| err(column, format!("expected `t<r>=<int>`, got `{trimmed}`")))?;
            let r: u32 = key
                .trim()
                .strip_prefix('t')
                .and_then(|r| r.parse().ok())
                .ok_or_else(|| err(column, format!("bad multiplicity key `{key}`")))?;
            if r < 2 {
                return Err(err(column, format!("multiplicity {r} is below 2")));
            }
            let t: u64 = value
                .trim()
                .parse()
                .map_err(|_| err(column, format!("bad count `{value}`")))?;
            if counts.insert(r, t).is_some() {
                return Err(err(column, format!("t{r} given twice")));
            }
            column += item.len() + 1;
        }
        Ok(Self::new(d, counts).expect("validated above"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let w: WeakCombinatorics = "d=14;t2=9,t3=16,t4=4,t5=1".parse().unwrap();
        assert_eq!(w, WeakCombinatorics::from_vector(14, &[9, 16, 4, 1]));
        assert_eq!(w.to_string(), "d=14;t2=9,t3=16,t4=4,t5=1");
        assert_eq!(w.vector_string(), "(14; 9, 16, 4, 1)");
        let w: WeakCombinatorics = "d=24;t2=32,t3=32,t5=12,t8=1".parse().unwrap();
        assert_eq!(w.t(4), 0);
        assert_eq!(w.max_multiplicity(), 8);
        assert_eq!("d=3".parse::<WeakCombinatorics>().unwrap().point_count(), 0);
    }

    #[test]
    fn parse_errors() {
        assert!("t2=3".parse::<WeakCombinatorics>().is_err());
        assert!("d=3;t1=3".parse::<WeakCombinatorics>().is_err());
        assert!("d=3;t2=x".parse::<WeakCombinatorics>().is_err());
        assert!("d=3;t2=1,t2=2".parse::<WeakCombinatorics>().is_err());
    }
}
