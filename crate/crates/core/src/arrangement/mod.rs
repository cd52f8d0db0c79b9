//! Hyperplane arrangements in projective space and their logarithmic tangent modules.

pub mod catalog;
pub mod format;

use std::fmt;

use crate::algebra::groebner::Budget;
use crate::algebra::linalg::{determinant, rank, vec_mul};
use crate::algebra::module::{FreeModule, GradedMap, ModElem};
use crate::algebra::monomial::{variable_names, MAX_VARS};
use crate::algebra::poly::Poly;
use crate::algebra::scalar::Field;
use crate::algebra::syzygy::kernel;
use crate::error::{Error, Result};
use crate::resolution::GradedModule;

pub use catalog::{catalog, catalog_names, CatalogEntry};
pub use format::{parse_arrangement, ArrangementData, FieldSpec};

/// k pairwise distinct hyperplanes in P^n, each a linear form normalized so that its
/// first nonzero coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrangement<K> {
    n: usize,
    forms: Vec<Vec<K>>,
    name: Option<String>,
}

impl<K: Field> Arrangement<K> {
    pub fn new(n: usize, forms: Vec<Vec<K>>) -> Result<Self> {
        if n == 0 || n + 1 > MAX_VARS {
            return Err(Error::InvalidArrangement(format!(
                "ambient dimension must be between 1 and {}",
                MAX_VARS - 1
            )));
        }
        if forms.is_empty() {
            return Err(Error::InvalidArrangement("an arrangement needs at least one hyperplane".into()));
        }
        let mut out: Vec<Vec<K>> = Vec::with_capacity(forms.len());
        for (i, f) in forms.into_iter().enumerate() {
            if f.len() != n + 1 {
                return Err(Error::InvalidArrangement(format!(
                    "hyperplane {} has {} coefficients, expected {}",
                    i + 1,
                    f.len(),
                    n + 1
                )));
            }
            let f = normalize(f).ok_or_else(|| Error::InvalidArrangement(format!("hyperplane {} is zero", i + 1)))?;
            if let Some(j) = out.iter().position(|g| *g == f) {
                return Err(Error::InvalidArrangement(format!(
                    "hyperplanes {} and {} coincide",
                    j + 1,
                    i + 1
                )));
            }
            out.push(f);
        }
        Ok(Arrangement { n, forms: out, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    /// Number of hyperplanes.
    pub fn k(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[Vec<K>] {
        &self.forms
    }

    pub fn linear_form(&self, i: usize) -> Poly<K> {
        Poly::linear(&self.forms[i])
    }

    /// Rank of the span of the forms; equals n + 1 iff the arrangement is essential.
    pub fn rank(&self) -> usize {
        rank(&self.forms)
    }

    pub fn is_essential(&self) -> bool {
        self.rank() == self.nvars()
    }

    /// f = product of the linear forms.
    pub fn defining_polynomial(&self) -> Poly<K> {
        let mut f = Poly::one(self.nvars());
        for i in 0..self.k() {
            f = f.mul(&self.linear_form(i));
        }
        f
    }

    /// The row of partial derivatives of f, from S^{n+1} to S(k-1).
    pub fn jacobian_map(&self) -> GradedMap<K> {
        let nv = self.nvars();
        let f = self.defining_polynomial();
        let target = FreeModule::new(nv, vec![-(self.k() as i32 - 1)]);
        let source = FreeModule::new(nv, vec![0; nv]);
        let cols = (0..nv)
            .map(|i| ModElem::from_polys(&target, &[f.derivative(i)]))
            .collect();
        GradedMap::new(source, target, cols).expect("partials of a homogeneous polynomial")
    }

    /// Module of sections of the logarithmic tangent sheaf: the kernel of the Jacobian row.
    pub fn log_tangent_module(&self, budget: &Budget) -> Result<GradedModule<K>> {
        kernel(&self.jacobian_map(), budget)
    }

    /// Image under the coordinate change given by an invertible matrix: each form a
    /// becomes the row vector a * g.
    pub fn transform(&self, g: &[Vec<K>]) -> Result<Self> {
        if g.len() != self.nvars() || g.iter().any(|r| r.len() != self.nvars()) {
            return Err(Error::InvalidArrangement("coordinate change has the wrong size".into()));
        }
        if determinant(g).is_zero() {
            return Err(Error::InvalidArrangement("coordinate change is singular".into()));
        }
        let forms = self.forms.iter().map(|a| vec_mul(a, g)).collect();
        let mut out = Arrangement::new(self.n, forms)?;
        out.name = self.name.clone();
        Ok(out)
    }

    /// Reorders the hyperplanes: form i of the result is form perm[i] of self.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.k(), "permutation length");
        Arrangement {
            n: self.n,
            forms: perm.iter().map(|&i| self.forms[i].clone()).collect(),
            name: self.name.clone(),
        }
    }

    pub fn form_to_string(&self, i: usize) -> String {
        self.linear_form(i).to_string_with(&variable_names(self.nvars()))
    }

    /// The arrangement in the input file format.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        if let Some(name) = &self.name {
            s.push_str(&format!("# {name}\n"));
        }
        s.push_str(&format!("P {} {}\n", self.n, K::label()));
        for f in &self.forms {
            let cells: Vec<String> = f.iter().map(|c| c.to_string()).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }
}

impl<K: Field> fmt::Display for Arrangement<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let forms: Vec<String> = (0..self.k()).map(|i| self.form_to_string(i)).collect();
        write!(f, "{{{}}} in P^{} over {}", forms.join(", "), self.n, K::label())
    }
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize<K: Field>(mut v: Vec<K>) -> Option<Vec<K>> {
    let lead = v.iter().find(|c| !c.is_zero())?.clone();
    let inv = lead.inv()?;
    for c in v.iter_mut() {
        *c *= &inv;
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn arr(rows: &[&[i64]]) -> Arrangement<Rational> {
        let n = rows[0].len() - 1;
        Arrangement::new(n, rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn rejects_proportional_and_zero_forms() {
        let e = Arrangement::new(2, vec![vec![q(1), q(1), q(0)], vec![q(2), q(2), q(0)]]);
        assert!(matches!(e, Err(Error::InvalidArrangement(_))));
        let e = Arrangement::new(1, vec![vec![q(0), q(0)]]);
        assert!(matches!(e, Err(Error::InvalidArrangement(_))));
    }

    #[test]
    fn defining_polynomial_of_concurrent_triple() {
        let a = arr(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        assert_eq!(a.defining_polynomial().to_string(), "x^2*y + x*y^2");
        let j = a.jacobian_map();
        let partials: Vec<String> = (0..3).map(|c| j.entry(0, c).to_string()).collect();
        assert_eq!(partials, vec!["2*x*y + y^2", "x^2 + 2*x*y", "0"]);
    }

    #[test]
    fn kernel_generators_contract_to_zero() {
        let a = arr(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        let m = a.log_tangent_module(&Budget::unlimited()).unwrap();
        let j = a.jacobian_map();
        for g in m.ambient_images().unwrap() {
            assert!(j.apply(g).is_zero());
        }
        assert_eq!(m.generator_degrees().iter().filter(|&&d| d > 3).count(), 0);
    }

    #[test]
    fn coordinate_change_preserves_count_and_checks_invertibility() {
        let a = arr(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        let g = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]];
        let b = a.transform(&g).unwrap();
        assert_eq!(b.k(), 3);
        assert_eq!(b.rank(), 2);
        let sing = vec![vec![q(1), q(1), q(0)], vec![q(1), q(1), q(0)], vec![q(0), q(0), q(1)]];
        assert!(a.transform(&sing).is_err());
    }
}
