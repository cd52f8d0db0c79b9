//! Sparse multivariate polynomials with terms sorted in descending grevlex order.

use std::cmp::Ordering;
use std::fmt;

use super::monomial::{variable_names, Monomial, MAX_VARS};
use super::scalar::Field;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<K> {
    nvars: usize,
    terms: Vec<(Monomial, K)>,
}

impl<K: Field> Poly<K> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        Poly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        Self::monomial(nvars, Monomial::ONE, c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, K::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable x{i} outside a ring of {nvars} variables");
        Self::monomial(nvars, Monomial::var(i), K::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: K) -> Self {
        let mut p = Self::zero(nvars);
        debug_assert!(m.support_len() <= nvars);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Linear form sum c_i x_i.
    pub fn linear(coeffs: &[K]) -> Self {
        let nvars = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Monomial::var(i), c.clone()))
            .collect();
        Poly { nvars, terms }
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(nvars: usize, mut terms: Vec<(Monomial, K)>) -> Self {
        terms.sort_by(|a, b| b.0.grevlex(&a.0));
        let mut out: Vec<(Monomial, K)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert!(m.support_len() <= nvars);
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { nvars, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, K)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, K)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, K)> {
        self.terms.first()
    }

    /// Total degree of the leading monomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    /// Constant coefficient (the coefficient of 1).
    pub fn constant_term(&self) -> K {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => K::zero(),
        }
    }

    fn check_ring(&self, o: &Self) -> Result<()> {
        if self.nvars != o.nvars {
            return Err(Error::RingMismatch(format!(
                "{} vs {} variables",
                self.nvars, o.nvars
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check_ring(o)?;
        Ok(self.add(o))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check_ring(o)?;
        Ok(self.mul(o))
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars, "ring mismatch");
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[j];
            match ma.grevlex(mb) {
                Ordering::Greater => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((*mb, cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let mut c = ca.clone();
                    c += cb;
                    if !c.is_zero() {
                        out.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Poly {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn neg(&self) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| {
                    let mut a = a.clone();
                    a *= c;
                    (*m, a)
                })
                .collect(),
        }
    }

    /// Product with the term c*m.
    pub fn mul_term(&self, m: &Monomial, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(t, a)| {
                    let mut a = a.clone();
                    a *= c;
                    (t.mul(m), a)
                })
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars, "ring mismatch");
        let mut acc = Self::zero(self.nvars);
        // Multiply the shorter operand term by term.
        let (a, b) = if self.terms.len() <= o.terms.len() {
            (self, o)
        } else {
            (o, self)
        };
        for (m, c) in &a.terms {
            acc = acc.add(&b.mul_term(m, c));
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to x_i.
    pub fn derivative(&self, i: usize) -> Self {
        assert!(i < self.nvars, "variable x{i} outside the ring");
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let (e, q) = m.derivative(i)?;
                let mut c = c.clone();
                c *= &K::from_i64(e as i64);
                Some((q, c))
            })
            .collect();
        // Differentiation preserves the relative order of surviving terms only
        // within a fixed degree, so re-normalize.
        Self::from_terms(self.nvars, terms)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn eval(&self, point: &[K]) -> K {
        let mut acc = K::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate().take(self.nvars) {
                for _ in 0..m.exponent(i) {
                    t *= x;
                }
            }
            acc += &t;
        }
        acc
    }

    /// Linear substitution x_i -> sum_j m[i][j] x_j.
    pub fn substitute_linear(&self, m: &[Vec<K>]) -> Self {
        let images: Vec<Poly<K>> = m.iter().map(|row| Poly::linear(row)).collect();
        let mut acc = Self::zero(self.nvars);
        for (mon, c) in &self.terms {
            let mut t = Self::constant(self.nvars, c.clone());
            for (i, img) in images.iter().enumerate() {
                for _ in 0..mon.exponent(i) {
                    t = t.mul(img);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&mag);
            } else {
                if mag != "1" {
                    s.push_str(&mag);
                    s.push('*');
                }
                m.fmt_with(names, &mut s).expect("string write");
            }
        }
        s
    }
}

impl<K: Field> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&variable_names(self.nvars)))
    }
}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Fp, Rational};
    use num_traits::One;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn xyz() -> (Poly<Rational>, Poly<Rational>, Poly<Rational>) {
        (Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2))
    }

    #[test]
    fn derivative_of_monomial_product() {
        let (x, y, z) = xyz();
        let f = x.mul(&y).mul(&z);
        assert_eq!(f.derivative(0), y.mul(&z));
    }

    #[test]
    fn binomial_square() {
        let (x, y, _) = xyz();
        let s = x.add(&y).pow(2);
        let expected = x
            .mul(&x)
            .add(&x.mul(&y).scale(&q(2)))
            .add(&y.mul(&y));
        assert_eq!(s, expected);
        assert_eq!(s.to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn euler_identity_on_three_concurrent_lines() {
        // sum x_i d_i f = deg(f) f, expanded on both sides
        let (x, y, z) = xyz();
        let f = x.mul(&y).mul(&x.add(&y));
        let vars = [x, y, z];
        let mut lhs = Poly::zero(3);
        for (i, v) in vars.iter().enumerate() {
            lhs = lhs.add(&v.mul(&f.derivative(i)));
        }
        assert_eq!(lhs, f.scale(&q(3)));
    }

    #[test]
    fn derivative_lowers_degree_by_one() {
        let (x, y, z) = xyz();
        let f = x.pow(3).add(&y.mul(&z).mul(&x));
        for i in 0..3 {
            let d = f.derivative(i);
            assert!(d.is_homogeneous());
            if !d.is_zero() {
                assert_eq!(d.degree(), Some(2));
            }
        }
    }

    #[test]
    fn mixed_rings_rejected() {
        let a: Poly<Rational> = Poly::var(2, 0);
        let b: Poly<Rational> = Poly::var(3, 0);
        assert!(matches!(a.checked_add(&b), Err(Error::RingMismatch(_))));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn characteristic_p_derivative_can_vanish() {
        let x: Poly<Fp<3>> = Poly::var(2, 0);
        assert!(x.pow(3).derivative(0).is_zero());
        assert_eq!(x.pow(2).derivative(0).leading_term().unwrap().1, Fp::<3>::new(2));
        assert!(Fp::<3>::one() + Fp::<3>::new(2) == Fp::<3>::new(0));
    }
}
