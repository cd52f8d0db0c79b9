//! Dense linear algebra over a field.

use super::scalar::Field;

/// Reduced row echelon form in place; zero rows are dropped. Returns the pivot columns.
pub fn rref<K: Field>(rows: &mut Vec<Vec<K>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &(f.clone() * pv.clone());
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank<K: Field>(rows: &[Vec<K>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

#[allow(clippy::needless_range_loop)]
pub fn determinant<K: Field>(m: &[Vec<K>]) -> K {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = K::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return K::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() * inv.clone();
            for j in c..n {
                let t = f.clone() * a[c][j].clone();
                a[i][j] -= &t;
            }
        }
    }
    det
}

/// Row vector times matrix.
pub fn vec_mul<K: Field>(v: &[K], m: &[Vec<K>]) -> Vec<K> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| {
            let mut acc = K::zero();
            for (i, vi) in v.iter().enumerate() {
                if !vi.is_zero() {
                    acc += &(vi.clone() * m[i][j].clone());
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Fp, Rational};

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&q(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]])), 2);
        assert_eq!(rank(&q(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn determinant_matches_expansion() {
        let m = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        // 2*(12-1) - 1*(4-0) = 18
        assert_eq!(determinant(&m), Rational::from_integer(18.into()));
        let f: Vec<Vec<Fp<5>>> = vec![vec![Fp::new(1), Fp::new(2)], vec![Fp::new(3), Fp::new(1)]];
        assert_eq!(determinant(&f), Fp::from_signed(-5));
    }

    #[test]
    fn rref_is_canonical() {
        let mut a = q(&[&[2, 4, 2], &[1, 1, 0]]);
        let mut b = q(&[&[1, 3, 2], &[0, 2, 2]]);
        rref(&mut a);
        rref(&mut b);
        assert_eq!(a, b);
    }
}
