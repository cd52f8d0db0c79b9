//! Syzygies, kernels of graded maps, and the `modulo` construction for subquotients.

use super::groebner::{minimal_generators, Budget, Engine};
use super::module::{FreeModule, GradedMap, ModElem};
use super::scalar::Field;
use crate::error::{Error, Result};
use crate::resolution::GradedModule;

/// Minimal generators of the relations among homogeneous `gens` in `free`.
///
/// The relations live in the free module with basis degrees `degrees` (the intended
/// degree of each generator, which matters when a generator is zero).
pub fn syzygy_generators<K: Field>(
    free: &FreeModule,
    gens: &[ModElem<K>],
    degrees: &[i32],
    budget: &Budget,
) -> Result<Vec<ModElem<K>>> {
    if gens.len() != degrees.len() {
        return Err(Error::DegreeMismatch("one degree per generator required".into()));
    }
    for (i, g) in gens.iter().enumerate() {
        if !g.is_homogeneous(free) {
            return Err(Error::NotHomogeneous(format!("generator {i}")));
        }
        if let Some(d) = g.degree(free) {
            if d != degrees[i] {
                return Err(Error::DegreeMismatch(format!(
                    "generator {i} has degree {d}, expected {}",
                    degrees[i]
                )));
            }
        }
    }
    let relation_space = FreeModule::new(free.nvars(), degrees.to_vec());
    let mut engine = Engine::new(free.order(), true, budget);
    engine.run_with_degrees(gens.to_vec(), degrees.iter().map(|&d| d as i64).collect())?;
    debug_assert_eq!(engine.aug_order(), &relation_space.order());
    let syz: Vec<ModElem<K>> = engine
        .take_syzygies()
        .into_iter()
        .filter(|s| !s.is_zero())
        .collect();
    let keep = minimal_generators(&relation_space, &syz, budget)?;
    Ok(keep.into_iter().map(|i| syz[i].clone()).collect())
}

/// Evaluates the relation `rel` against `gens`: sum rel_i * gens_i.
pub fn evaluate_relation<K: Field>(free: &FreeModule, gens: &[ModElem<K>], rel: &ModElem<K>) -> ModElem<K> {
    let ord = free.order();
    let mut acc = ModElem::zero();
    for t in rel.terms() {
        acc = acc.add_scaled(&t.coeff, &t.mon, &gens[t.comp as usize], &ord);
    }
    acc
}

/// The module of relations among `gens`, with its own presentation.
pub fn syzygies<K: Field>(free: &FreeModule, gens: &[ModElem<K>], budget: &Budget) -> Result<GradedModule<K>> {
    let degrees: Vec<i32> = gens
        .iter()
        .map(|g| {
            g.degree(free)
                .ok_or_else(|| Error::DegreeMismatch("zero generator has no degree".into()))
        })
        .collect::<Result<_>>()?;
    let space = FreeModule::new(free.nvars(), degrees.clone());
    let rels = syzygy_generators(free, gens, &degrees, budget)?;
    GradedModule::from_submodule(&space, rels, budget)
}

/// Kernel of a graded map between free modules, as a submodule of the source.
pub fn kernel<K: Field>(map: &GradedMap<K>, budget: &Budget) -> Result<GradedModule<K>> {
    let gens = syzygy_generators(map.target(), map.columns(), map.source().degrees(), budget)?;
    GradedModule::from_submodule(map.source(), gens, budget)
}

/// Subquotient (gens + im) / im of a free module, presented on `gens`.
///
/// A relation r on `gens` holds iff sum r_i gens_i lies in the span of `im`, i.e. iff
/// (r, -s) is a syzygy of the concatenation for some s.
pub fn modulo<K: Field>(
    free: &FreeModule,
    gens: &[ModElem<K>],
    gen_degrees: &[i32],
    im: &[ModElem<K>],
    im_degrees: &[i32],
    budget: &Budget,
) -> Result<GradedModule<K>> {
    let k = gens.len();
    let space = FreeModule::new(free.nvars(), gen_degrees.to_vec());
    if im.iter().all(|v| v.is_zero()) {
        let rels = syzygy_generators(free, gens, gen_degrees, budget)?;
        return GradedModule::new(space, rels);
    }
    let mut all = gens.to_vec();
    all.extend_from_slice(im);
    let mut degrees = gen_degrees.to_vec();
    degrees.extend_from_slice(im_degrees);
    let syz = syzygy_generators(free, &all, &degrees, budget)?;
    let ord = space.order();
    let rels: Vec<ModElem<K>> = syz
        .iter()
        .map(|s| s.map_components(&ord, |c| ((c as usize) < k).then_some(c)))
        .filter(|r| !r.is_zero())
        .collect();
    GradedModule::new(space, rels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Poly;
    use crate::{Fp, Rational};

    fn vars(n: usize) -> Vec<Poly<Rational>> {
        (0..n).map(|i| Poly::var(n, i)).collect()
    }

    fn as_ideal(gens: &[Poly<Rational>]) -> (FreeModule, Vec<ModElem<Rational>>) {
        let free = FreeModule::new(gens[0].nvars(), vec![0]);
        let e = gens
            .iter()
            .map(|g| ModElem::from_polys(&free, std::slice::from_ref(g)))
            .collect();
        (free, e)
    }

    #[test]
    fn koszul_relation_of_two_variables() {
        let v = vars(2);
        let (free, gens) = as_ideal(&v);
        let syz = syzygy_generators(&free, &gens, &[1, 1], &Budget::unlimited()).unwrap();
        assert_eq!(syz.len(), 1);
        let space = FreeModule::new(2, vec![1, 1]);
        let polys = syz[0].to_polys(&space);
        // (y, -x) up to scalar
        let lc = polys[0].leading_term().unwrap().1.clone();
        assert_eq!(polys[0].scale(&lc.inv().unwrap()), v[1]);
        assert_eq!(polys[1].scale(&lc.inv().unwrap()), v[0].neg());
    }

    #[test]
    fn partials_of_xyz_have_two_linear_syzygies() {
        let v = vars(3);
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let (free, gens) = as_ideal(&[y.mul(z), x.mul(z), x.mul(y)]);
        let syz = syzygy_generators(&free, &gens, &[2, 2, 2], &Budget::unlimited()).unwrap();
        assert_eq!(syz.len(), 2);
        let space = FreeModule::new(3, vec![2, 2, 2]);
        for s in &syz {
            assert_eq!(s.degree(&space), Some(3));
            assert!(evaluate_relation(&free, &gens, s).is_zero());
        }
        let module = syzygies(&free, &gens, &Budget::unlimited()).unwrap();
        assert!(module.relations().is_empty(), "syzygy module is free");
    }

    #[test]
    fn single_generator_has_no_syzygies() {
        let v = vars(3);
        let (free, gens) = as_ideal(&[v[0].mul(&v[1]).add(&v[2].mul(&v[2]))]);
        assert!(syzygy_generators(&free, &gens, &[2], &Budget::unlimited()).unwrap().is_empty());
    }

    #[test]
    fn zero_generator_is_its_own_syzygy() {
        let free = FreeModule::new(2, vec![0]);
        let x = Poly::<Fp<3>>::var(2, 0);
        let gens = vec![ModElem::zero(), ModElem::from_polys(&free, &[x])];
        let syz = syzygy_generators(&free, &gens, &[0, 1], &Budget::unlimited()).unwrap();
        assert_eq!(syz.len(), 1);
        assert_eq!(syz[0], ModElem::term(crate::Monomial::ONE, 0, Fp::<3>::new(1)));
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let src = FreeModule::new(2, vec![0, 0]);
        let tgt = FreeModule::new(2, vec![0]);
        let map = GradedMap::<Rational>::new(src, tgt, vec![ModElem::zero(), ModElem::zero()]).unwrap();
        let k = kernel(&map, &Budget::unlimited()).unwrap();
        assert_eq!(k.generator_degrees(), &[0, 0]);
        assert!(k.relations().is_empty());
    }

    #[test]
    fn kernel_of_three_variables_is_koszul() {
        let v = vars(3);
        let src = FreeModule::new(3, vec![0, 0, 0]);
        let tgt = FreeModule::new(3, vec![-1]);
        let map = GradedMap::from_matrix(src.clone(), tgt, std::slice::from_ref(&v)).unwrap();
        let k = kernel(&map, &Budget::unlimited()).unwrap();
        assert_eq!(k.generator_degrees(), &[1, 1, 1]);
        assert_eq!(k.relation_degrees(), vec![2]);
        for g in k.ambient_images().unwrap() {
            assert!(map.apply(g).is_zero());
        }
    }

    #[test]
    fn modulo_gives_quotient_presentation() {
        // (x, y) / (x^2) inside S over k[x, y]
        let v = vars(2);
        let (free, gens) = as_ideal(&v);
        let im = vec![ModElem::from_polys(&free, &[v[0].mul(&v[0])])];
        let m = modulo(&free, &gens, &[1, 1], &im, &[2], &Budget::unlimited()).unwrap();
        assert_eq!(m.generator_degrees(), &[1, 1]);
        assert!(!m.relations().is_empty());
    }
}
