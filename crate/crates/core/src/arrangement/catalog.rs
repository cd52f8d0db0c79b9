//! Named arrangements with integer coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::format::{ArrangementData, FieldSpec};
use crate::algebra::linalg::determinant;
use crate::error::{Error, Result};

pub struct CatalogEntry {
    pub pattern: &'static str,
    pub description: &'static str,
}

pub fn catalog_names() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            pattern: "boolean-<n>",
            description: "the n+1 coordinate hyperplanes of P^n",
        },
        CatalogEntry {
            pattern: "concurrent-3",
            description: "three lines through one point: x, y, x+y",
        },
        CatalogEntry {
            pattern: "generic-<k>-<n>",
            description: "k hyperplanes of P^n in general position (small integer coefficients)",
        },
        CatalogEntry {
            pattern: "pencil-<k>",
            description: "k concurrent lines x + a*y in P^2",
        },
        CatalogEntry {
            pattern: "one-triple-4",
            description: "four lines with exactly one triple point: x, y, x+y, z",
        },
        CatalogEntry {
            pattern: "braid-<n>",
            description: "x_i and x_i - x_j in P^n (a cone over the braid arrangement)",
        },
        CatalogEntry {
            pattern: "deleted-braid-<n>",
            description: "braid-<n> without the hyperplane x_0 - x_1",
        },
    ]
}

fn known() -> String {
    catalog_names()
        .iter()
        .map(|e| e.pattern)
        .collect::<Vec<_>>()
        .join(", ")
}

fn unknown(name: &str) -> Error {
    Error::UnknownCatalogName {
        name: name.to_string(),
        known: known(),
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n + 1];
    v[i] = 1;
    v
}

fn boolean(n: usize) -> Vec<Vec<i64>> {
    (0..=n).map(|i| unit(n, i)).collect()
}

fn braid(n: usize) -> Vec<Vec<i64>> {
    let mut rows = boolean(n);
    for i in 0..=n {
        for j in i + 1..=n {
            let mut v = vec![0; n + 1];
            v[i] = 1;
            v[j] = -1;
            rows.push(v);
        }
    }
    rows
}

fn is_independent(rows: &[&Vec<i64>]) -> bool {
    let m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();
    !num_traits::Zero::is_zero(&determinant(&m))
}

fn subsets(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, k: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            go(i + 1, k, r, cur, out);
            cur.pop();
        }
    }
    go(0, k, r, &mut cur, &mut out);
    out
}

/// Integer vectors of max-norm h whose first nonzero entry is positive, in a fixed order.
fn candidates(len: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-h; len];
    loop {
        let first = v.iter().find(|&&c| c != 0);
        if first.is_some_and(|&c| c > 0) && v.iter().any(|c| c.abs() == h) {
            out.push(v.clone());
        }
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if v[i] < h {
                v[i] += 1;
                for c in v.iter_mut().skip(i + 1) {
                    *c = -h;
                }
                break;
            }
        }
    }
}

/// Greedy search for k forms in P^n with every n+1 of them independent.
fn generic(k: usize, n: usize) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = boolean(n).into_iter().take(k).collect();
    if rows.len() < k {
        rows.push(vec![1; n + 1]);
    }
    let mut h = 1;
    while rows.len() < k {
        for cand in candidates(n + 1, h) {
            if rows.len() == k {
                break;
            }
            if rows.contains(&cand) {
                continue;
            }
            let ok = subsets(rows.len(), n).into_iter().all(|s| {
                let mut pick: Vec<&Vec<i64>> = s.iter().map(|&i| &rows[i]).collect();
                pick.push(&cand);
                is_independent(&pick)
            });
            if ok {
                rows.push(cand);
            }
        }
        h += 1;
    }
    rows
}

fn parse_usize(s: &str) -> Option<usize> {
    s.parse().ok().filter(|&v| v > 0)
}

fn rows_for(name: &str) -> Option<(usize, Vec<Vec<i64>>)> {
    let parts: Vec<&str> = name.split('-').collect();
    match parts.as_slice() {
        ["boolean", n] => parse_usize(n).filter(|&n| n < 8).map(|n| (n, boolean(n))),
        ["concurrent", "3"] => Some((2, vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]])),
        ["one", "triple", "4"] => Some((2, vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]])),
        ["generic", k, n] => {
            let (k, n) = (parse_usize(k)?, parse_usize(n)?);
            (n < 8 && k <= 16).then(|| (n, generic(k, n)))
        }
        ["pencil", k] => {
            let k = parse_usize(k)?;
            let mut rows = vec![vec![0, 1, 0]];
            rows.extend((0..k as i64 - 1).map(|a| vec![1, a, 0]));
            (k <= 16).then_some((2, rows))
        }
        ["braid", n] => parse_usize(n).filter(|&n| n < 8).map(|n| (n, braid(n))),
        ["deleted", "braid", n] => parse_usize(n).filter(|&n| n < 8).map(|n| {
            let mut rows = braid(n);
            rows.remove(n + 1);
            (n, rows)
        }),
        _ => None,
    }
}

/// The named arrangement over Q.
pub fn catalog(name: &str) -> Result<ArrangementData> {
    let (n, rows) = rows_for(name).ok_or_else(|| unknown(name))?;
    let forms = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect::<Vec<_>>();
    Ok(ArrangementData {
        n,
        field: FieldSpec::Rational,
        lines: (1..=forms.len()).collect(),
        forms,
        name: Some(name.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn generic_four_lines() {
        assert_eq!(generic(4, 2), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn generic_forms_are_in_general_position() {
        for (k, n) in [(5, 2), (6, 2), (6, 3), (6, 4)] {
            let rows = generic(k, n);
            assert_eq!(rows.len(), k);
            for s in subsets(k, n + 1) {
                let pick: Vec<&Vec<i64>> = s.iter().map(|&i| &rows[i]).collect();
                assert!(is_independent(&pick), "{k} {n} {s:?}");
            }
        }
    }

    #[test]
    fn named_entries() {
        let b = catalog("boolean-2").unwrap().instantiate::<Rational>().unwrap();
        assert_eq!(b.to_string(), "{x, y, z} in P^2 over Q");
        let c = catalog("concurrent-3").unwrap().instantiate::<Rational>().unwrap();
        assert_eq!(c.to_string(), "{x, y, x + y} in P^2 over Q");
        assert_eq!(catalog("braid-2").unwrap().forms.len(), 6);
        assert_eq!(catalog("deleted-braid-2").unwrap().forms.len(), 5);
        assert_eq!(catalog("pencil-4").unwrap().forms.len(), 4);
    }

    #[test]
    fn unknown_name_lists_alternatives() {
        match catalog("cube") {
            Err(Error::UnknownCatalogName { known, .. }) => assert!(known.contains("boolean-<n>")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
