//! Independent oracles shared by the integration tests. Nothing here calls the Gröbner,
//! syzygy or resolution code; it is plain linear algebra and counting.

#![allow(dead_code)]

use logfree::algebra::monomial::Monomial;
use logfree::arrangement::Arrangement;
use logfree::resolution::BettiTable;
use logfree::{Field, Poly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Rank of a matrix by naive Gaussian elimination.
#[allow(clippy::needless_range_loop)]
pub fn rank_of<K: Field>(mut rows: Vec<Vec<K>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = K::one() / rows[rank][col].clone();
        let pivot: Vec<K> = rows[rank].iter().map(|x| x.clone() * inv.clone()).collect();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let c = rows[r][col].clone();
                for j in col..ncols {
                    let v = rows[r][j].clone() - c.clone() * pivot[j].clone();
                    rows[r][j] = v;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

/// dim_K of the degree-d piece of the kernel of (df/dx_0, ..., df/dx_n) acting on S_d^{n+1},
/// where d is the degree of the coefficient polynomials.
pub fn jacobian_kernel_dim<K: Field>(a: &Arrangement<K>, d: u32) -> usize {
    let nv = a.nvars();
    let f = a.defining_polynomial();
    let partials: Vec<Poly<K>> = (0..nv).map(|i| f.derivative(i)).collect();
    let basis = Monomial::all_of_degree(nv, d);
    let target = Monomial::all_of_degree(nv, d + a.k() as u32 - 1);
    let index: HashMap<Monomial, usize> = target.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut rows = Vec::new();
    for p in &partials {
        for m in &basis {
            let img = p.mul_term(m, &K::one());
            let mut row = vec![K::zero(); target.len()];
            for (mon, c) in img.terms() {
                row[index[mon]] = c.clone();
            }
            rows.push(row);
        }
    }
    nv * basis.len() - rank_of(rows)
}

/// C(m + n, n) for the integer m, as a polynomial in m (zero for -n <= m < 0, can be
/// negative below that).
pub fn binomial_poly(m: i64, n: usize) -> i64 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for t in 1..=n as i128 {
        num *= m as i128 + t;
        den *= t;
    }
    (num / den) as i64
}

/// dim S_m with S = K[x_0..x_n].
pub fn dim_s(m: i64, n: usize) -> i64 {
    if m < 0 {
        0
    } else {
        binomial_poly(m, n)
    }
}

/// Hilbert polynomial of a module from its graded Betti numbers:
/// P(d) = sum_i (-1)^i sum_j beta_ij C(d - j + n, n).
pub fn hilbert_polynomial_from_betti(b: &BettiTable, n: usize, d: i64) -> i64 {
    b.entries()
        .iter()
        .map(|&(i, j, beta)| {
            let s = if i % 2 == 0 { 1 } else { -1 };
            s * beta as i64 * binomial_poly(d - j as i64, n)
        })
        .sum()
}

/// Random arrangement of k distinct hyperplanes in P^n with coefficients from `lo..=hi`.
pub fn random_arrangement<K: Field>(rng: &mut ChaCha8Rng, n: usize, k: usize, lo: i64, hi: i64) -> Arrangement<K> {
    loop {
        let forms: Vec<Vec<K>> = (0..k)
            .map(|_| (0..=n).map(|_| K::from_i64(rng.gen_range(lo..=hi))).collect())
            .collect();
        if let Ok(a) = Arrangement::new(n, forms) {
            return a;
        }
    }
}

/// Random invertible (n+1) x (n+1) matrix with small entries.
pub fn random_invertible<K: Field>(rng: &mut ChaCha8Rng, nv: usize) -> Vec<Vec<K>> {
    loop {
        let g: Vec<Vec<K>> = (0..nv)
            .map(|_| (0..nv).map(|_| K::from_i64(rng.gen_range(-2..=2))).collect())
            .collect();
        let rows: Vec<Vec<K>> = g.clone();
        if rank_of(rows) == nv {
            return g;
        }
    }
}

pub fn random_permutation(rng: &mut ChaCha8Rng, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}
