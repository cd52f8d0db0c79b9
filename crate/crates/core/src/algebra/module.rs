//! Graded free modules S^r with degree shifts, their elements, and homogeneous maps.

use std::cmp::Ordering;
use std::fmt;

use super::monomial::{variable_names, Monomial};
use super::poly::Poly;
use super::scalar::Field;
use crate::error::{Error, Result};

/// Free module over k[x_0..x_{nvars-1}]; basis element `i` sits in degree `degrees[i]`,
/// i.e. the module is the direct sum of S(-degrees[i]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeModule {
    nvars: usize,
    degrees: Vec<i32>,
}

impl FreeModule {
    pub fn new(nvars: usize, degrees: Vec<i32>) -> Self {
        FreeModule { nvars, degrees }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    /// The graded dual: basis degrees negated.
    pub fn dual(&self) -> FreeModule {
        FreeModule::new(self.nvars, self.degrees.iter().map(|d| -d).collect())
    }

    pub fn order(&self) -> TermOrder {
        TermOrder::top(self.degrees.clone())
    }

    /// Basis vector e_i.
    pub fn unit<K: Field>(&self, i: usize) -> ModElem<K> {
        ModElem::term(Monomial::ONE, i, K::one())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Compare total degree, then grevlex on the monomial, then position.
    TermOverPosition,
    /// Compare position first (lower index is larger), then grevlex.
    PositionOverTerm,
}

/// Module monomial order on terms m*e_i, extending grevlex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    pub kind: OrderKind,
    pub shifts: Vec<i32>,
}

impl TermOrder {
    pub fn top(shifts: Vec<i32>) -> Self {
        TermOrder {
            kind: OrderKind::TermOverPosition,
            shifts,
        }
    }

    pub fn pot(shifts: Vec<i32>) -> Self {
        TermOrder {
            kind: OrderKind::PositionOverTerm,
            shifts,
        }
    }

    #[inline]
    pub fn cmp(&self, am: &Monomial, ac: u32, bm: &Monomial, bc: u32) -> Ordering {
        match self.kind {
            OrderKind::TermOverPosition => {
                let da = am.degree() as i64 + self.shifts[ac as usize] as i64;
                let db = bm.degree() as i64 + self.shifts[bc as usize] as i64;
                da.cmp(&db)
                    .then_with(|| am.grevlex(bm))
                    .then_with(|| bc.cmp(&ac))
            }
            OrderKind::PositionOverTerm => bc.cmp(&ac).then_with(|| am.grevlex(bm)),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term<K> {
    pub mon: Monomial,
    pub comp: u32,
    pub coeff: K,
}

/// Element of a free module as a list of nonzero terms, sorted descending under some
/// [`TermOrder`] (the term-over-position order of its module unless stated otherwise).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModElem<K> {
    terms: Vec<Term<K>>,
}

impl<K: Field> ModElem<K> {
    pub fn zero() -> Self {
        ModElem { terms: Vec::new() }
    }

    pub fn term(mon: Monomial, comp: usize, coeff: K) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        ModElem {
            terms: vec![Term {
                mon,
                comp: comp as u32,
                coeff,
            }],
        }
    }

    /// Builds the element with the given coordinate polynomials.
    pub fn from_polys(free: &FreeModule, polys: &[Poly<K>]) -> Self {
        assert_eq!(polys.len(), free.rank(), "coordinate count must match rank");
        let mut terms = Vec::new();
        for (i, p) in polys.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(Term {
                    mon: *m,
                    comp: i as u32,
                    coeff: c.clone(),
                });
            }
        }
        Self::from_terms(terms, &free.order())
    }

    /// Sorts and merges arbitrary terms under `ord`.
    pub fn from_terms(mut terms: Vec<Term<K>>, ord: &TermOrder) -> Self {
        terms.sort_by(|a, b| ord.cmp(&b.mon, b.comp, &a.mon, a.comp));
        let mut out: Vec<Term<K>> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(l) if l.mon == t.mon && l.comp == t.comp => l.coeff += &t.coeff,
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        ModElem { terms: out }
    }

    pub fn resort(&self, ord: &TermOrder) -> Self {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| ord.cmp(&b.mon, b.comp, &a.mon, a.comp));
        ModElem { terms }
    }

    pub fn terms(&self) -> &[Term<K>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// All terms but the leading one (order is preserved).
    pub fn tail(&self) -> Self {
        ModElem {
            terms: self.terms.get(1..).unwrap_or(&[]).to_vec(),
        }
    }

    pub fn lead(&self) -> Option<&Term<K>> {
        self.terms.first()
    }

    /// Coordinate `i` as a polynomial.
    pub fn component(&self, i: usize, nvars: usize) -> Poly<K> {
        Poly::from_terms(
            nvars,
            self.terms
                .iter()
                .filter(|t| t.comp as usize == i)
                .map(|t| (t.mon, t.coeff.clone()))
                .collect(),
        )
    }

    pub fn to_polys(&self, free: &FreeModule) -> Vec<Poly<K>> {
        let mut buckets: Vec<Vec<(Monomial, K)>> = vec![Vec::new(); free.rank()];
        for t in &self.terms {
            buckets[t.comp as usize].push((t.mon, t.coeff.clone()));
        }
        buckets
            .into_iter()
            .map(|b| Poly::from_terms(free.nvars(), b))
            .collect()
    }

    /// Degree of the leading term (the degree, if homogeneous).
    pub fn degree(&self, free: &FreeModule) -> Option<i32> {
        self.terms
            .first()
            .map(|t| t.mon.degree() as i32 + free.degree(t.comp as usize))
    }

    pub fn is_homogeneous(&self, free: &FreeModule) -> bool {
        match self.degree(free) {
            None => true,
            Some(d) => self
                .terms
                .iter()
                .all(|t| t.mon.degree() as i32 + free.degree(t.comp as usize) == d),
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ModElem {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut coeff = t.coeff.clone();
                    coeff *= c;
                    Term {
                        mon: t.mon,
                        comp: t.comp,
                        coeff,
                    }
                })
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-K::one()))
    }

    /// Makes the leading coefficient 1; returns the factor applied.
    pub fn make_monic(&mut self) -> K {
        let Some(t) = self.terms.first() else {
            return K::one();
        };
        let inv = t.coeff.inv().expect("nonzero leading coefficient");
        for t in &mut self.terms {
            t.coeff *= &inv;
        }
        inv
    }

    /// `self + c * m * o`, both sorted under `ord`.
    pub fn add_scaled(&self, c: &K, m: &Monomial, o: &ModElem<K>, ord: &TermOrder) -> Self {
        if c.is_zero() || o.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &o.terms;
        let mut pending: Option<Term<K>> = None;
        loop {
            if pending.is_none() && j < b.len() {
                let mut coeff = b[j].coeff.clone();
                coeff *= c;
                pending = Some(Term {
                    mon: b[j].mon.mul(m),
                    comp: b[j].comp,
                    coeff,
                });
                j += 1;
            }
            match (a.get(i), pending.take()) {
                (None, None) => break,
                (Some(x), None) => {
                    out.push(x.clone());
                    i += 1;
                }
                (None, Some(y)) => out.push(y),
                (Some(x), Some(y)) => match ord.cmp(&x.mon, x.comp, &y.mon, y.comp) {
                    Ordering::Greater => {
                        out.push(x.clone());
                        i += 1;
                        pending = Some(y);
                    }
                    Ordering::Less => out.push(y),
                    Ordering::Equal => {
                        let mut coeff = x.coeff.clone();
                        coeff += &y.coeff;
                        if !coeff.is_zero() {
                            out.push(Term {
                                mon: x.mon,
                                comp: x.comp,
                                coeff,
                            });
                        }
                        i += 1;
                    }
                },
            }
        }
        ModElem { terms: out }
    }

    pub fn add(&self, o: &Self, ord: &TermOrder) -> Self {
        self.add_scaled(&K::one(), &Monomial::ONE, o, ord)
    }

    pub fn sub(&self, o: &Self, ord: &TermOrder) -> Self {
        self.add_scaled(&(-K::one()), &Monomial::ONE, o, ord)
    }

    pub fn mul_poly(&self, p: &Poly<K>, ord: &TermOrder) -> Self {
        let mut acc = Self::zero();
        for (m, c) in p.terms() {
            acc = acc.add_scaled(c, m, self, ord);
        }
        acc
    }

    /// Applies `f` to the component indices (must keep them distinct), then re-sorts.
    pub fn map_components(&self, ord: &TermOrder, f: impl Fn(u32) -> Option<u32>) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                f(t.comp).map(|comp| Term {
                    mon: t.mon,
                    comp,
                    coeff: t.coeff.clone(),
                })
            })
            .collect();
        Self::from_terms(terms, ord)
    }

    /// Coefficient of the constant monomial in coordinate `i`.
    pub fn unit_entry(&self, i: usize) -> Option<&K> {
        self.terms
            .iter()
            .find(|t| t.comp as usize == i && t.mon.is_one())
            .map(|t| &t.coeff)
    }

    pub fn max_comp(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.comp).max()
    }

    pub fn display(&self, free: &FreeModule) -> String {
        let names = variable_names(free.nvars());
        let parts: Vec<String> = self
            .to_polys(free)
            .iter()
            .map(|p| p.to_string_with(&names))
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// Homogeneous map of graded free modules given by the images of the source basis
/// (the columns of its matrix). A column for a source generator of degree `a` must be
/// homogeneous of degree `a` in the target, so entry (r, c) has degree a_c - b_r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap<K> {
    source: FreeModule,
    target: FreeModule,
    columns: Vec<ModElem<K>>,
}

impl<K: Field> GradedMap<K> {
    pub fn new(source: FreeModule, target: FreeModule, columns: Vec<ModElem<K>>) -> Result<Self> {
        if source.nvars() != target.nvars() {
            return Err(Error::RingMismatch("source and target rings differ".into()));
        }
        if columns.len() != source.rank() {
            return Err(Error::DegreeMismatch(format!(
                "{} columns for a source of rank {}",
                columns.len(),
                source.rank()
            )));
        }
        for (j, col) in columns.iter().enumerate() {
            if let Some(c) = col.max_comp() {
                if c as usize >= target.rank() {
                    return Err(Error::DegreeMismatch(format!(
                        "column {j} has a coordinate outside the target"
                    )));
                }
            }
            if !col.is_homogeneous(&target) {
                return Err(Error::NotHomogeneous(format!("column {j}")));
            }
            if let Some(d) = col.degree(&target) {
                if d != source.degree(j) {
                    return Err(Error::DegreeMismatch(format!(
                        "column {j} has degree {d}, source generator has degree {}",
                        source.degree(j)
                    )));
                }
            }
        }
        Ok(GradedMap {
            source,
            target,
            columns,
        })
    }

    /// Builds a map from a row-major matrix of polynomials (`rows` = target rank).
    pub fn from_matrix(source: FreeModule, target: FreeModule, rows: &[Vec<Poly<K>>]) -> Result<Self> {
        if rows.len() != target.rank() || rows.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::DegreeMismatch("matrix shape does not match modules".into()));
        }
        let columns = (0..source.rank())
            .map(|c| {
                let col: Vec<Poly<K>> = rows.iter().map(|r| r[c].clone()).collect();
                ModElem::from_polys(&target, &col)
            })
            .collect();
        Self::new(source, target, columns)
    }

    pub fn source(&self) -> &FreeModule {
        &self.source
    }

    pub fn target(&self) -> &FreeModule {
        &self.target
    }

    pub fn columns(&self) -> &[ModElem<K>] {
        &self.columns
    }

    pub fn entry(&self, row: usize, col: usize) -> Poly<K> {
        self.columns[col].component(row, self.target.nvars())
    }

    /// Applies the map to an element of the source.
    pub fn apply(&self, v: &ModElem<K>) -> ModElem<K> {
        let ord = self.target.order();
        let mut acc = ModElem::zero();
        for t in v.terms() {
            acc = acc.add_scaled(&t.coeff, &t.mon, &self.columns[t.comp as usize], &ord);
        }
        acc
    }

    /// The dual map Hom(target, S) -> Hom(source, S).
    pub fn transpose(&self) -> GradedMap<K> {
        let columns = transpose_columns(&self.columns, self.target.rank(), &self.source.dual());
        GradedMap {
            source: self.target.dual(),
            target: self.source.dual(),
            columns,
        }
    }

    pub fn compose(&self, inner: &GradedMap<K>) -> Result<GradedMap<K>> {
        if inner.target != self.source {
            return Err(Error::DegreeMismatch("maps are not composable".into()));
        }
        let columns = inner.columns.iter().map(|c| self.apply(c)).collect();
        GradedMap::new(inner.source.clone(), self.target.clone(), columns)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }
}

/// Transposes a matrix given by columns: the result has one column per row of the input,
/// living in `new_target` (whose rank is the number of input columns).
pub fn transpose_columns<K: Field>(columns: &[ModElem<K>], rows: usize, new_target: &FreeModule) -> Vec<ModElem<K>> {
    let mut buckets: Vec<Vec<Term<K>>> = vec![Vec::new(); rows];
    for (j, col) in columns.iter().enumerate() {
        for t in col.terms() {
            buckets[t.comp as usize].push(Term {
                mon: t.mon,
                comp: j as u32,
                coeff: t.coeff.clone(),
            });
        }
    }
    let ord = new_target.order();
    buckets
        .into_iter()
        .map(|b| ModElem::from_terms(b, &ord))
        .collect()
}

impl<K: Field> fmt::Display for GradedMap<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = variable_names(self.target.nvars());
        for r in 0..self.target.rank() {
            let row: Vec<String> = (0..self.source.rank())
                .map(|c| self.entry(r, c).to_string_with(&names))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn top_order_prefers_degree_then_position() {
        let ord = TermOrder::top(vec![0, 1]);
        let x = Monomial::var(0);
        // x*e_0 (degree 1) vs 1*e_1 (degree 1): equal degree, x > 1 in grevlex
        assert_eq!(ord.cmp(&x, 0, &Monomial::ONE, 1), Ordering::Greater);
        assert_eq!(ord.cmp(&x, 0, &x, 1), Ordering::Less);
    }

    #[test]
    fn degree_checked_maps() {
        let s3 = FreeModule::new(3, vec![0, 0, 0]);
        let t = FreeModule::new(3, vec![-1]);
        let x: Poly<Rational> = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let z = Poly::var(3, 2);
        let ok = GradedMap::from_matrix(s3.clone(), t.clone(), &[vec![x.clone(), y.clone(), z.clone()]]);
        assert!(ok.is_ok());
        let bad = GradedMap::from_matrix(s3, t, &[vec![x.clone(), y.mul(&y), z]]);
        assert!(matches!(bad, Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn transpose_is_involutive() {
        let s2 = FreeModule::new(2, vec![1, 2]);
        let t = FreeModule::new(2, vec![0, 0]);
        let x: Poly<Rational> = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let m = GradedMap::from_matrix(
            s2,
            t,
            &[vec![x.clone(), y.mul(&y)], vec![y.clone(), x.mul(&y)]],
        )
        .unwrap();
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.transpose().entry(1, 0), m.entry(0, 1));
    }
}
