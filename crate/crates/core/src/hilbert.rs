//! Hilbert series N(t)/(1-t)^v of graded modules over a polynomial ring in v variables.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::monomial::{Monomial, MAX_VARS};

/// Laurent polynomial with integer coefficients, keyed by exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly(BTreeMap<i32, i64>);

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(exp: i32, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.0.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in o.terms() {
            r.add_term(e, c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in o.terms() {
            r.add_term(e, -c);
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in o.terms() {
                r.add_term(a + b, ca * cb);
            }
        }
        r
    }

    pub fn shift(&self, by: i32) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e + by, c)).collect())
    }

    pub fn eval_at_one(&self) -> i64 {
        self.0.values().sum()
    }

    /// Divides by (1 - t) if exact.
    pub fn div_one_minus_t(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.eval_at_one() != 0 {
            return None;
        }
        // N(t) = (1 - t) Q(t): running sums give Q's coefficients.
        let lo = *self.0.keys().next().unwrap();
        let hi = *self.0.keys().next_back().unwrap();
        let mut q = Self::zero();
        let mut acc = 0;
        for e in lo..hi {
            acc += self.0.get(&e).copied().unwrap_or(0);
            q.add_term(e, acc);
        }
        Some(q)
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.0.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.0.keys().next_back().copied()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let (neg, mag) = (c < 0, c.abs());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => f.write_str("t")?,
                (1, m) => write!(f, "{m}t")?,
                (e, 1) => write!(f, "t^{e}")?,
                (e, m) => write!(f, "{m}t^{e}")?,
            }
        }
        Ok(())
    }
}

/// Hilbert series `numerator / (1 - t)^nvars`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    pub nvars: usize,
    pub numerator: LaurentPoly,
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r as i64
}

impl HilbertSeries {
    pub fn new(nvars: usize, numerator: LaurentPoly) -> Self {
        HilbertSeries { nvars, numerator }
    }

    /// Series of the free module with the given basis degrees.
    pub fn free(nvars: usize, degrees: &[i32]) -> Self {
        let mut n = LaurentPoly::zero();
        for &d in degrees {
            n.add_term(d, 1);
        }
        HilbertSeries::new(nvars, n)
    }

    /// Series of a cokernel F/N from the leading terms of a Gröbner basis of N:
    /// sum over components c of t^{a_c} * HS(S / LT_c).
    pub fn from_leading_terms(nvars: usize, degrees: &[i32], leading: &[(Monomial, usize)]) -> Self {
        let mut n = LaurentPoly::zero();
        for (c, &a) in degrees.iter().enumerate() {
            let gens: Vec<Monomial> = leading
                .iter()
                .filter(|(_, comp)| *comp == c)
                .map(|(m, _)| *m)
                .collect();
            n = n.add(&monomial_ideal_numerator(nvars, gens).shift(a));
        }
        HilbertSeries::new(nvars, n)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        HilbertSeries::new(self.nvars, self.numerator.add(&o.numerator))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        HilbertSeries::new(self.nvars, self.numerator.sub(&o.numerator))
    }

    /// dim_k M_d.
    pub fn hilbert_function(&self, d: i32) -> i64 {
        let v = self.nvars as i64;
        self.numerator
            .terms()
            .map(|(j, c)| {
                let s = (d - j) as i64;
                if s < 0 {
                    0
                } else {
                    c * binomial(s + v - 1, v - 1)
                }
            })
            .sum()
    }

    /// Cancels common factors (1 - t): returns (reduced numerator, Krull dimension).
    pub fn reduced(&self) -> (LaurentPoly, usize) {
        let mut num = self.numerator.clone();
        let mut dim = self.nvars;
        if num.is_zero() {
            return (num, 0);
        }
        while dim > 0 {
            match num.div_one_minus_t() {
                Some(q) => {
                    num = q;
                    dim -= 1;
                }
                None => break,
            }
        }
        (num, dim)
    }

    /// Finite length iff the Hilbert polynomial vanishes (the series is a polynomial).
    pub fn is_finite_length(&self) -> bool {
        self.reduced().1 == 0
    }

    pub fn hilbert_polynomial(&self) -> HilbertPolynomial {
        let v = self.nvars;
        let mut coeffs = vec![BigRational::zero(); v.max(1)];
        // sum_j N_j * binom(d - j + v - 1, v - 1), expanded in d.
        for (j, c) in self.numerator.terms() {
            let mut poly = vec![BigRational::one()];
            for s in 1..v {
                // multiply by (d - j + s)
                let shift = BigRational::from_integer(BigInt::from(s as i64 - j as i64));
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (i, a) in poly.iter().enumerate() {
                    next[i + 1] += a;
                    next[i] += a * &shift;
                }
                poly = next;
            }
            let mut fact = BigInt::one();
            for s in 1..v {
                fact *= BigInt::from(s);
            }
            for (i, a) in poly.iter().enumerate() {
                coeffs[i] += a * BigRational::from_integer(BigInt::from(c)) / BigRational::from_integer(fact.clone());
            }
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        HilbertPolynomial { coeffs }
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, dim) = self.reduced();
        if dim == 0 {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/(1-t)^{dim}")
        }
    }
}

/// Polynomial in d with rational coefficients (lowest degree first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    coeffs: Vec<BigRational>,
}

impl HilbertPolynomial {
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, d: i64) -> i64 {
        let x = BigRational::from_integer(BigInt::from(d));
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        assert!(acc.is_integer(), "Hilbert polynomial takes integer values");
        acc.to_integer().to_i64().expect("fits in i64")
    }
}

impl fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = crate::algebra::scalar::format_rational(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match i {
                0 => cs,
                1 if c.abs().is_one() => "d".to_string(),
                1 => format!("{cs}*d"),
                _ if c.abs().is_one() => format!("d^{i}"),
                _ => format!("{cs}*d^{i}"),
            };
            parts.push((sign, body));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        for (k, (sign, body)) in parts.iter().enumerate() {
            if k == 0 {
                if *sign == "-" {
                    f.write_str("-")?;
                }
                f.write_str(body)?;
            } else {
                write!(f, " {sign} {body}")?;
            }
        }
        Ok(())
    }
}

/// Numerator of HS(S / I) for a monomial ideal I in `nvars` variables.
pub fn monomial_ideal_numerator(nvars: usize, gens: Vec<Monomial>) -> LaurentPoly {
    let gens = minimize_monomials(gens);
    numerator_rec(nvars, gens)
}

fn minimize_monomials(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|o| o.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn numerator_rec(nvars: usize, gens: Vec<Monomial>) -> LaurentPoly {
    if gens.is_empty() {
        return LaurentPoly::monomial(0, 1);
    }
    if gens.iter().any(|g| g.is_one()) {
        return LaurentPoly::zero();
    }
    // Pairwise coprime generators: product of (1 - t^deg).
    let coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if coprime {
        let mut r = LaurentPoly::monomial(0, 1);
        for g in &gens {
            let mut f = LaurentPoly::monomial(0, 1);
            f.add_term(g.degree() as i32, -1);
            r = r.mul(&f);
        }
        return r;
    }
    // Pivot on a power of the variable occurring in most mixed (non pure power)
    // generators; after minimization that power is not in the ideal.
    let mixed: Vec<&Monomial> = gens.iter().filter(|g| g.exponents().iter().filter(|&&e| e > 0).count() > 1).collect();
    let mut counts = [0usize; MAX_VARS];
    for g in &mixed {
        for (i, c) in counts.iter_mut().enumerate().take(nvars) {
            if g.exponent(i) > 0 {
                *c += 1;
            }
        }
    }
    let var = (0..nvars).max_by_key(|&i| (counts[i], std::cmp::Reverse(i))).expect("nvars > 0");
    let mut exps: Vec<u16> = mixed.iter().map(|g| g.exponent(var)).filter(|&e| e > 0).collect();
    exps.sort_unstable();
    let e = exps[(exps.len() - 1) / 2];
    let mut pe = [0u16; MAX_VARS];
    pe[var] = e;
    let pivot = Monomial::from_exponents(&pe[..nvars.max(var + 1)]);
    // HS(S/I) = HS(S/(I + p)) + t^deg(p) HS(S/(I : p))
    let mut with_p = gens.clone();
    with_p.push(pivot);
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| g.gcd(&pivot).quotient_of(g).expect("gcd divides"))
        .collect();
    let a = numerator_rec(nvars, minimize_monomials(with_p));
    let b = numerator_rec(nvars, minimize_monomials(colon)).shift(e as i32);
    a.add(&b)
}
