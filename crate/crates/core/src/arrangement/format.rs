//! The plain-text arrangement format.
//!
//! ```text
//! # three concurrent lines
//! P 2 Q
//! 1 0 0
//! 0 1 0
//! 1 1 0
//! ```
//!
//! The header gives the projective dimension n and the field (`Q` or `F<p>`); every other
//! non-blank line holds the n+1 coefficients of one hyperplane, as integers or `num/den`.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{normalize, Arrangement};
use crate::algebra::scalar::{parse_rational, Field};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rational);
        }
        let p: u64 = s
            .strip_prefix('F')
            .or_else(|| s.strip_prefix("GF"))
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::UnsupportedField(s.to_string()))?;
        if !is_prime(p) {
            return Err(Error::UnsupportedField(format!("{s} ({p} is not prime)")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => p,
        }
    }

    pub fn label(self) -> String {
        match self {
            FieldSpec::Rational => "Q".into(),
            FieldSpec::Prime(p) => format!("F{p}"),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A parsed arrangement file, before choosing the coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementData {
    pub n: usize,
    pub field: FieldSpec,
    pub forms: Vec<Vec<BigRational>>,
    /// Source line of each form (1-based).
    pub lines: Vec<usize>,
    pub name: Option<String>,
}

impl ArrangementData {
    /// Builds the arrangement over `K`, reporting problems against source lines.
    pub fn instantiate<K: Field>(&self) -> Result<Arrangement<K>> {
        let mut forms: Vec<Vec<K>> = Vec::with_capacity(self.forms.len());
        for (row, &line) in self.forms.iter().zip(&self.lines) {
            let mut v = Vec::with_capacity(row.len());
            for q in row {
                let c = K::from_rational(q).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("coefficient {q} is undefined over {}", K::label()),
                })?;
                v.push(c);
            }
            let v = normalize(v).ok_or_else(|| Error::Parse {
                line,
                message: format!("hyperplane is zero over {}", K::label()),
            })?;
            if let Some(j) = forms.iter().position(|g| *g == v) {
                return Err(Error::Parse {
                    line,
                    message: format!("hyperplane coincides with the one on line {}", self.lines[j]),
                });
            }
            forms.push(v);
        }
        let a = Arrangement::new(self.n, forms)?;
        Ok(match &self.name {
            Some(name) => a.with_name(name.clone()),
            None => a,
        })
    }
}

/// Parses the arrangement format; errors carry the 1-based line number.
pub fn parse_arrangement(text: &str) -> Result<ArrangementData> {
    let mut header: Option<(usize, FieldSpec)> = None;
    let mut forms = Vec::new();
    let mut lines = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((n, _)) = header else {
            if tokens.len() != 3 || tokens[0] != "P" {
                return Err(Error::Parse {
                    line,
                    message: format!("expected header 'P <n> <field>', found '{content}'"),
                });
            }
            let n: usize = tokens[1].parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid dimension '{}'", tokens[1]),
            })?;
            if n == 0 {
                return Err(Error::Parse {
                    line,
                    message: "dimension must be at least 1".into(),
                });
            }
            let field = FieldSpec::parse(tokens[2]).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            header = Some((n, field));
            continue;
        };
        if tokens.len() != n + 1 {
            return Err(Error::Parse {
                line,
                message: format!("expected {} coefficients, found {}", n + 1, tokens.len()),
            });
        }
        let row = tokens
            .iter()
            .map(|t| parse_rational(t).map_err(|message| Error::Parse { line, message }))
            .collect::<Result<Vec<_>>>()?;
        forms.push(row);
        lines.push(line);
    }
    let Some((n, field)) = header else {
        return Err(Error::Parse {
            line: last_line.max(1),
            message: "missing header 'P <n> <field>'".into(),
        });
    };
    if forms.is_empty() {
        return Err(Error::Parse {
            line: last_line.max(1),
            message: "no hyperplanes".into(),
        });
    }
    Ok(ArrangementData {
        n,
        field,
        forms,
        lines,
        name: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Fp, Rational};

    #[test]
    fn parses_comments_and_fractions() {
        let d = parse_arrangement("# test\nP 2 Q\n1 0 0  # x\n\n0 1 0\n1/2 -1 0\n").unwrap();
        assert_eq!(d.n, 2);
        assert_eq!(d.field, FieldSpec::Rational);
        assert_eq!(d.lines, vec![3, 5, 6]);
        let a: Arrangement<Rational> = d.instantiate().unwrap();
        assert_eq!(a.form_to_string(2), "x - 2*y");
    }

    #[test]
    fn zero_denominator_reports_line() {
        let e = parse_arrangement("P 2 Q\n1 0 0\n1/0 1 0\n").unwrap_err();
        match e {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("1/0"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_arity_and_bad_header() {
        assert!(matches!(parse_arrangement("P 2 Q\n1 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_arrangement("Q 2 P\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_arrangement("P 2 F4\n1 0 0\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn reduction_mod_p_can_collapse_hyperplanes() {
        let d = parse_arrangement("P 1 F3\n1 0\n1 3\n").unwrap();
        assert_eq!(d.field, FieldSpec::Prime(3));
        assert!(matches!(d.instantiate::<Fp<3>>(), Err(Error::Parse { line: 3, .. })));
        let d = parse_arrangement("P 1 F3\n1 1/3\n").unwrap();
        assert!(matches!(d.instantiate::<Fp<3>>(), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn file_string_round_trips() {
        let d = parse_arrangement("P 2 F5\n1 0 0\n0 1 0\n1 1 1\n").unwrap();
        let a: Arrangement<Fp<5>> = d.instantiate().unwrap();
        let again = parse_arrangement(&a.to_file_string()).unwrap();
        assert_eq!(again.instantiate::<Fp<5>>().unwrap(), a);
    }
}
