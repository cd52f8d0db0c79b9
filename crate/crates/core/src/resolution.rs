//! Finitely presented graded modules, minimal free resolutions and Betti tables.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::groebner::{minimal_generators, Budget, GroebnerBasis};
use crate::algebra::module::{FreeModule, GradedMap, ModElem, OrderKind};
use crate::algebra::scalar::Field;
use crate::algebra::syzygy::{evaluate_relation, syzygy_generators};
use crate::error::{Error, Result};
use crate::hilbert::HilbertSeries;

/// Cokernel of a homogeneous presentation F1 -> F0, optionally remembering the images
/// of its generators in an ambient free module (for submodules such as kernels).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule<K> {
    generators: FreeModule,
    relations: Vec<ModElem<K>>,
    ambient: Option<(FreeModule, Vec<ModElem<K>>)>,
}

impl<K: Field> GradedModule<K> {
    /// Module with the given generators and relations (columns); zero columns are pruned.
    pub fn new(generators: FreeModule, relations: Vec<ModElem<K>>) -> Result<Self> {
        for (j, r) in relations.iter().enumerate() {
            if let Some(c) = r.max_comp() {
                if c as usize >= generators.rank() {
                    return Err(Error::DegreeMismatch(format!("relation {j} outside the generators")));
                }
            }
            if !r.is_homogeneous(&generators) {
                return Err(Error::NotHomogeneous(format!("relation {j}")));
            }
        }
        let relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Ok(GradedModule {
            generators,
            relations,
            ambient: None,
        })
    }

    pub fn free(generators: FreeModule) -> Self {
        GradedModule {
            generators,
            relations: Vec::new(),
            ambient: None,
        }
    }

    pub fn cokernel(map: &GradedMap<K>) -> Result<Self> {
        Self::new(map.target().clone(), map.columns().to_vec())
    }

    /// The submodule of `ambient` generated by `gens`, presented by their relations.
    pub fn from_submodule(ambient: &FreeModule, gens: Vec<ModElem<K>>, budget: &Budget) -> Result<Self> {
        let degrees: Vec<i32> = gens
            .iter()
            .map(|g| {
                g.degree(ambient)
                    .ok_or_else(|| Error::DegreeMismatch("zero submodule generator".into()))
            })
            .collect::<Result<_>>()?;
        let relations = syzygy_generators(ambient, &gens, &degrees, budget)?;
        let mut m = Self::new(FreeModule::new(ambient.nvars(), degrees), relations)?;
        m.ambient = Some((ambient.clone(), gens));
        Ok(m)
    }

    pub fn nvars(&self) -> usize {
        self.generators.nvars()
    }

    pub fn generators(&self) -> &FreeModule {
        &self.generators
    }

    pub fn generator_degrees(&self) -> &[i32] {
        self.generators.degrees()
    }

    pub fn relations(&self) -> &[ModElem<K>] {
        &self.relations
    }

    pub fn relation_degrees(&self) -> Vec<i32> {
        self.relations
            .iter()
            .map(|r| r.degree(&self.generators).expect("nonzero relation"))
            .collect()
    }

    pub fn ambient(&self) -> Option<&FreeModule> {
        self.ambient.as_ref().map(|a| &a.0)
    }

    /// Images of the generators in the ambient free module, when known.
    pub fn ambient_images(&self) -> Option<&[ModElem<K>]> {
        self.ambient.as_ref().map(|a| a.1.as_slice())
    }

    pub fn presentation(&self) -> GradedMap<K> {
        let source = FreeModule::new(self.nvars(), self.relation_degrees());
        GradedMap::new(source, self.generators.clone(), self.relations.clone())
            .expect("relations are homogeneous by construction")
    }

    /// Removes generators cancelled by unit entries of the presentation, then keeps a
    /// minimal generating set of the relations. The result presents the same module
    /// with minimal generators and minimal relations.
    pub fn minimize(&self, budget: &Budget) -> Result<Self> {
        let mut degrees = self.generators.degrees().to_vec();
        let mut rels = self.relations.clone();
        let mut images = self.ambient.as_ref().map(|a| a.1.clone());
        let nvars = self.nvars();
        loop {
            let hit = rels.iter().enumerate().find_map(|(c, rel)| {
                rel.terms()
                    .iter()
                    .find(|t| t.mon.is_one())
                    .map(|t| (c, t.comp as usize, t.coeff.clone()))
            });
            let Some((c, r, u)) = hit else { break };
            let free = FreeModule::new(nvars, degrees.clone());
            let ord = free.order();
            let pivot = rels.swap_remove(c);
            let uinv = u.inv().expect("unit");
            rels = rels
                .into_iter()
                .map(|rel| {
                    let coef = rel.component(r, nvars);
                    if coef.is_zero() {
                        rel
                    } else {
                        rel.sub(&pivot.mul_poly(&coef.scale(&uinv), &ord), &ord)
                    }
                })
                .collect();
            degrees.remove(r);
            let new_free = FreeModule::new(nvars, degrees.clone());
            let new_ord = new_free.order();
            let r32 = r as u32;
            rels = rels
                .into_iter()
                .map(|rel| {
                    debug_assert!(rel.terms().iter().all(|t| t.comp != r32));
                    rel.map_components(&new_ord, |k| Some(if k > r32 { k - 1 } else { k }))
                })
                .filter(|rel| !rel.is_zero())
                .collect();
            if let Some(imgs) = images.as_mut() {
                imgs.remove(r);
            }
        }
        let free = FreeModule::new(nvars, degrees);
        let keep = minimal_generators(&free, &rels, budget)?;
        let rels = keep.into_iter().map(|i| rels[i].clone()).collect();
        let mut m = Self::new(free, rels)?;
        m.ambient = match (&self.ambient, images) {
            (Some((amb, _)), Some(imgs)) => Some((amb.clone(), imgs)),
            _ => None,
        };
        Ok(m)
    }

    /// Gröbner basis of the relation submodule of the generators' free module.
    pub fn relation_basis(&self, budget: &Budget) -> Result<GroebnerBasis<K>> {
        GroebnerBasis::compute(&self.generators, &self.relations, OrderKind::TermOverPosition, budget)
    }

    /// True iff the module is zero: every unit vector lies in the relation module.
    pub fn is_zero(&self, budget: &Budget) -> Result<bool> {
        if self.generators.rank() == 0 {
            return Ok(true);
        }
        Ok(self.relation_basis(budget)?.is_everything())
    }

    /// Hilbert series from the leading terms of a Gröbner basis of the relations.
    pub fn hilbert_series_from_basis(&self, budget: &Budget) -> Result<HilbertSeries> {
        let gb = self.relation_basis(budget)?;
        Ok(HilbertSeries::from_leading_terms(
            self.nvars(),
            self.generator_degrees(),
            &gb.leading_terms(),
        ))
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("generators in degrees {:?}\n", self.generator_degrees()));
        if let Some((amb, imgs)) = &self.ambient {
            for g in imgs {
                s.push_str(&format!("  {}\n", g.display(amb)));
            }
        }
        s.push_str(&format!("relations in degrees {:?}\n", self.relation_degrees()));
        for r in &self.relations {
            s.push_str(&format!("  {}\n", r.display(&self.generators)));
        }
        s
    }
}

/// Graded Betti numbers beta_{i,j} = number of degree-j generators of F_i.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    entries: BTreeMap<usize, BTreeMap<i32, usize>>,
}

impl BettiTable {
    pub fn from_free_modules(mods: &[FreeModule]) -> Self {
        let mut entries: BTreeMap<usize, BTreeMap<i32, usize>> = BTreeMap::new();
        for (i, f) in mods.iter().enumerate() {
            for &d in f.degrees() {
                *entries.entry(i).or_default().entry(d).or_insert(0) += 1;
            }
        }
        BettiTable { entries }
    }

    pub fn get(&self, i: usize, j: i32) -> usize {
        self.entries.get(&i).and_then(|r| r.get(&j)).copied().unwrap_or(0)
    }

    /// Total rank of F_i.
    pub fn total(&self, i: usize) -> usize {
        self.entries.get(&i).map_or(0, |r| r.values().sum())
    }

    /// (i, j, beta_{i,j}) with beta nonzero, sorted by (i, j).
    pub fn entries(&self) -> Vec<(usize, i32, usize)> {
        self.entries
            .iter()
            .flat_map(|(&i, r)| r.iter().map(move |(&j, &b)| (i, j, b)))
            .collect()
    }

    pub fn length(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    /// Castelnuovo-Mumford regularity: max over nonzero beta_{i,j} of j - i.
    pub fn regularity(&self) -> Option<i32> {
        self.entries().iter().map(|&(i, j, _)| j - i as i32).max()
    }

    pub fn hilbert_series(&self, nvars: usize) -> HilbertSeries {
        let mut num = crate::hilbert::LaurentPoly::zero();
        for (i, j, b) in self.entries() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            num.add_term(j, sign * b as i64);
        }
        HilbertSeries::new(nvars, num)
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self.entries();
        if entries.is_empty() {
            return writeln!(f, "(zero module)");
        }
        let cols = self.length() + 1;
        let rows: Vec<i32> = {
            let lo = entries.iter().map(|&(i, j, _)| j - i as i32).min().unwrap();
            let hi = entries.iter().map(|&(i, j, _)| j - i as i32).max().unwrap();
            (lo..=hi).collect()
        };
        let width = entries
            .iter()
            .map(|e| e.2.to_string().len())
            .chain((0..cols).map(|i| self.total(i).to_string().len()))
            .max()
            .unwrap_or(1);
        let label_w = rows.iter().map(|r| r.to_string().len() + 1).max().unwrap_or(2).max(6);
        write!(f, "{:>label_w$}", "")?;
        for i in 0..cols {
            write!(f, " {:>width$}", i)?;
        }
        writeln!(f)?;
        write!(f, "{:>label_w$}", "total:")?;
        for i in 0..cols {
            write!(f, " {:>width$}", self.total(i))?;
        }
        writeln!(f)?;
        for r in rows {
            write!(f, "{:>label_w$}", format!("{r}:"))?;
            for i in 0..cols {
                let b = self.get(i, r + i as i32);
                if b == 0 {
                    write!(f, " {:>width$}", ".")?;
                } else {
                    write!(f, " {:>width$}", b)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// F_0 <- F_1 <- ... <- F_l with maps given column-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution<K> {
    modules: Vec<FreeModule>,
    maps: Vec<Vec<ModElem<K>>>,
    minimal: bool,
}

impl<K: Field> Resolution<K> {
    pub fn free_modules(&self) -> &[FreeModule] {
        &self.modules
    }

    /// The differential d_i : F_i -> F_{i-1}, for 1 <= i <= length.
    pub fn differential(&self, i: usize) -> GradedMap<K> {
        assert!(i >= 1 && i <= self.maps.len(), "no differential d_{i}");
        GradedMap::new(self.modules[i].clone(), self.modules[i - 1].clone(), self.maps[i - 1].clone())
            .expect("resolution maps are homogeneous")
    }

    pub fn columns(&self, i: usize) -> &[ModElem<K>] {
        &self.maps[i - 1]
    }

    /// Projective dimension (number of nonzero differentials).
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn betti(&self) -> BettiTable {
        BettiTable::from_free_modules(&self.modules)
    }

    pub fn hilbert_series(&self) -> HilbertSeries {
        let nvars = self.modules.first().map_or(0, |f| f.nvars());
        self.betti().hilbert_series(nvars)
    }

    /// Exact check that consecutive differentials compose to zero.
    pub fn is_complex(&self) -> bool {
        (1..self.maps.len()).all(|i| {
            self.maps[i]
                .iter()
                .all(|col| evaluate_relation(&self.modules[i - 1], &self.maps[i - 1], col).is_zero())
        })
    }

    /// True iff no differential has a nonzero constant entry.
    pub fn has_no_unit_entries(&self) -> bool {
        self.maps
            .iter()
            .all(|cols| cols.iter().all(|c| c.terms().iter().all(|t| !t.mon.is_one())))
    }
}

/// Minimal graded free resolution, computed step by step until the syzygies vanish.
pub fn minimal_free_resolution<K: Field>(m: &GradedModule<K>, budget: &Budget) -> Result<Resolution<K>> {
    resolve_minimal(&m.minimize(budget)?, budget)
}

/// Like [`minimal_free_resolution`] for a module whose presentation is already minimal
/// (the output of [`GradedModule::minimize`]).
pub fn resolve_minimal<K: Field>(m: &GradedModule<K>, budget: &Budget) -> Result<Resolution<K>> {
    let nvars = m.nvars();
    let mut modules = vec![m.generators().clone()];
    let mut maps: Vec<Vec<ModElem<K>>> = Vec::new();
    if !m.relations().is_empty() {
        modules.push(FreeModule::new(nvars, m.relation_degrees()));
        maps.push(m.relations().to_vec());
    }
    while let Some(last) = maps.last() {
        let target = &modules[modules.len() - 2];
        let source = &modules[modules.len() - 1];
        let syz = syzygy_generators(target, last, source.degrees(), budget)?;
        if syz.is_empty() {
            break;
        }
        if maps.len() + 1 > nvars {
            return Err(Error::Invariant(format!(
                "resolution longer than the number of variables ({nvars})"
            )));
        }
        let degrees = syz
            .iter()
            .map(|s| s.degree(source).expect("nonzero syzygy"))
            .collect();
        modules.push(FreeModule::new(nvars, degrees));
        maps.push(syz);
    }
    let res = Resolution {
        modules,
        maps,
        minimal: true,
    };
    if !res.has_no_unit_entries() {
        return Err(Error::Invariant("minimal resolution has a unit entry".into()));
    }
    Ok(res)
}

/// Generator degrees (sorted) if the module is free, read off a minimal resolution.
pub fn is_free_module<K: Field>(res: &Resolution<K>) -> Option<Vec<i32>> {
    if res.length() == 0 {
        let mut d = res.free_modules()[0].degrees().to_vec();
        d.sort_unstable();
        Some(d)
    } else {
        None
    }
}

pub fn hilbert_series<K: Field>(res: &Resolution<K>) -> HilbertSeries {
    res.hilbert_series()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Poly;
    use crate::Rational;

    fn maximal_ideal_quotient(n: usize) -> GradedModule<Rational> {
        let f0 = FreeModule::new(n, vec![0]);
        let rels = (0..n)
            .map(|i| ModElem::from_polys(&f0, &[Poly::var(n, i)]))
            .collect();
        GradedModule::new(f0, rels).unwrap()
    }

    #[test]
    fn free_module_has_length_zero() {
        let m = GradedModule::<Rational>::free(FreeModule::new(3, vec![1, 1]));
        let res = minimal_free_resolution(&m, &Budget::unlimited()).unwrap();
        assert_eq!(res.length(), 0);
        assert_eq!(res.betti().get(0, 1), 2);
        assert_eq!(is_free_module(&res), Some(vec![1, 1]));
        assert_eq!(res.hilbert_series().numerator, crate::hilbert::LaurentPoly::monomial(1, 2));
    }

    #[test]
    fn koszul_resolution_of_residue_field() {
        let m = maximal_ideal_quotient(3);
        let res = minimal_free_resolution(&m, &Budget::unlimited()).unwrap();
        assert_eq!(res.length(), 3);
        let b = res.betti();
        assert_eq!((b.get(0, 0), b.get(1, 1), b.get(2, 2), b.get(3, 3)), (1, 3, 3, 1));
        assert!(res.is_complex());
        assert!(res.hilbert_series().is_finite_length());
        assert_eq!(b.regularity(), Some(0));
    }

    #[test]
    fn redundant_presentation_gives_same_betti_table() {
        // S/(x,y,z) presented with an extra generator e_1 and relation e_1 - x e_0... made
        // redundant by a unit entry.
        let n = 3;
        let f0 = FreeModule::new(n, vec![0, 1]);
        let x = Poly::<Rational>::var(n, 0);
        let y = Poly::var(n, 1);
        let z = Poly::var(n, 2);
        let zero = Poly::zero(n);
        let one = Poly::one(n);
        let rels = vec![
            ModElem::from_polys(&f0, &[x.clone(), one.neg()]),
            ModElem::from_polys(&f0, &[x.clone(), zero.clone()]),
            ModElem::from_polys(&f0, &[y.clone(), zero.clone()]),
            ModElem::from_polys(&f0, &[z.clone(), zero.clone()]),
            ModElem::from_polys(&f0, &[x.mul(&y), zero.clone()]),
        ];
        let m = GradedModule::new(f0, rels).unwrap();
        let res = minimal_free_resolution(&m, &Budget::unlimited()).unwrap();
        let plain = minimal_free_resolution(&maximal_ideal_quotient(3), &Budget::unlimited()).unwrap();
        assert_eq!(res.betti(), plain.betti());
    }

    #[test]
    fn zero_module_detection() {
        let f0 = FreeModule::new(2, vec![0]);
        let id = GradedModule::<Rational>::new(f0.clone(), vec![f0.unit(0)]).unwrap();
        assert!(id.is_zero(&Budget::unlimited()).unwrap());
        assert!(!maximal_ideal_quotient(3).is_zero(&Budget::unlimited()).unwrap());
    }

    #[test]
    fn betti_table_display() {
        let res = minimal_free_resolution(&maximal_ideal_quotient(2), &Budget::unlimited()).unwrap();
        let s = res.betti().to_string();
        assert!(s.contains("total: 1 2 1"), "{s}");
    }
}
