//! The line-oriented arrangement file format:
//!
//! ```text
//! # comment
//! field rational | field prime <p> | field extension <k> <c0> <c1> ... <ck>
//! line <a> <b> <c>
//! ```

use std::fmt;

use num_rational::BigRational;

use super::{Arrangement, ProjectiveLine};
use crate::field::FieldDescriptor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_field(toks: &[(usize, &str)], lineno: usize) -> Result<FieldDescriptor, ParseError> {
    let err = |column: usize, message: String| ParseError {
        line: lineno,
        column,
        message,
    };
    let (col, kind) = toks.get(1).copied().ok_or_else(|| err(1, "missing field kind".into()))?;
    match kind {
        "rational" if toks.len() == 2 => Ok(FieldDescriptor::Rationals),
        "prime" if toks.len() == 3 => {
            let (c, tok) = toks[2];
            let p: u64 = tok.parse().map_err(|_| err(c, format!("bad prime `{tok}`")))?;
            FieldDescriptor::prime(p).map_err(|e| err(c, e.to_string()))
        }
        "extension" if toks.len() >= 3 => {
            let (c, tok) = toks[2];
            let k: usize = tok.parse().map_err(|_| err(c, format!("bad degree `{tok}`")))?;
            if toks.len() != k + 4 {
                return Err(err(c, format!("expected {} coefficients c0..c{k}", k + 1)));
            }
            let coeffs = toks[3..]
                .iter()
                .map(|&(c, t)| {
                    FieldDescriptor::Rationals
                        .parse_scalar(t)
                        .map(|s| s.rational_coeffs().unwrap().remove(0))
                        .map_err(|e| err(c, e.to_string()))
                })
                .collect::<Result<Vec<BigRational>, _>>()?;
            FieldDescriptor::extension(coeffs).map_err(|e| err(c, e.to_string()))
        }
        _ => Err(err(col, format!("unrecognized field declaration `{kind}`"))),
    }
}

/// Parse an arrangement file. Errors carry 1-based line and column.
pub fn parse_arrangement(text: &str) -> Result<Arrangement, ParseError> {
    let mut field: Option<FieldDescriptor> = None;
    let mut lines = Vec::new();
    let mut origins = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        let err = |column: usize, message: String| ParseError {
            line: lineno,
            column,
            message,
        };
        match keyword {
            "field" => {
                if field.is_some() {
                    return Err(err(col, "field declared twice".into()));
                }
                field = Some(parse_field(&toks, lineno)?);
            }
            "line" => {
                let f = field
                    .as_ref()
                    .ok_or_else(|| err(col, "`line` before `field` declaration".into()))?;
                if toks.len() != 4 {
                    return Err(err(col, "expected `line <a> <b> <c>`".into()));
                }
                let coeffs = toks[1..]
                    .iter()
                    .map(|&(c, t)| f.parse_scalar(t).map_err(|e| err(c, e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                let [a, b, c]: [_; 3] = coeffs.try_into().unwrap();
                let line = ProjectiveLine::new(a, b, c).map_err(|e| err(col, e.to_string()))?;
                lines.push(line);
                origins.push(lineno);
            }
            other => return Err(err(col, format!("unknown directive `{other}`"))),
        }
    }
    let field = field.ok_or(ParseError {
        line: 1,
        column: 1,
        message: "missing `field` declaration".into(),
    })?;
    if lines.len() < 2 {
        return Err(ParseError {
            line: text.lines().count().max(1),
            column: 1,
            message: format!("need at least 2 lines, got {}", lines.len()),
        });
    }
    Arrangement::with_field(field, lines).map_err(|e| {
        let line = match &e {
            super::ArrangementError::DuplicateLine { second, .. } => origins[*second],
            _ => 1,
        };
        ParseError {
            line,
            column: 1,
            message: e.to_string(),
        }
    })
}
