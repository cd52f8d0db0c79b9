//! Buchberger's algorithm for homogeneous submodules of graded free modules.
//!
//! Pairs are processed by increasing degree (the normal strategy, exact for homogeneous
//! input) with the Gebauer-Moeller chain criteria. The engine can optionally track how
//! each basis element is built from the inputs; every S-pair that reduces to zero then
//! yields a syzygy of the inputs. It also records which inputs survive reduction when
//! fed in degree order, which is exactly a minimal generating subset.

use std::cell::Cell;

use super::module::{FreeModule, ModElem, OrderKind, TermOrder};
use super::monomial::Monomial;
use super::scalar::Field;
use crate::error::{Error, Result};

/// Cap on the number of S-pairs a computation may process.
#[derive(Debug, Default)]
pub struct Budget {
    max_pairs: Option<u64>,
    used: Cell<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_max_pairs(max: u64) -> Self {
        Budget {
            max_pairs: Some(max),
            used: Cell::new(0),
        }
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    pub fn limit(&self) -> Option<u64> {
        self.max_pairs
    }

    fn charge(&self) -> Result<()> {
        let used = self.used.get() + 1;
        self.used.set(used);
        match self.max_pairs {
            Some(max) if used > max => Err(Error::BudgetExhausted { pairs: used - 1 }),
            _ => Ok(()),
        }
    }
}

struct Elem<K> {
    v: ModElem<K>,
    aug: ModElem<K>,
    lt: Monomial,
}

#[derive(Clone, Debug)]
struct Pair {
    deg: i64,
    lcm: Monomial,
    comp: u32,
    i: usize,
    j: usize,
}

pub(crate) struct Engine<'b, K> {
    ord: TermOrder,
    aug_ord: TermOrder,
    track: bool,
    product_criterion: bool,
    basis: Vec<Elem<K>>,
    by_comp: Vec<Vec<usize>>,
    pairs: Vec<Pair>,
    syzygies: Vec<ModElem<K>>,
    kept: Vec<usize>,
    budget: &'b Budget,
}

impl<'b, K: Field> Engine<'b, K> {
    pub(crate) fn new(ord: TermOrder, track: bool, budget: &'b Budget) -> Self {
        let rank = ord.shifts.len();
        Engine {
            product_criterion: rank == 1 && !track,
            ord,
            aug_ord: TermOrder::top(Vec::new()),
            track,
            basis: Vec::new(),
            by_comp: vec![Vec::new(); rank],
            pairs: Vec::new(),
            syzygies: Vec::new(),
            kept: Vec::new(),
            budget,
        }
    }

    fn degree_of(&self, m: &Monomial, comp: u32) -> i64 {
        m.degree() as i64 + self.ord.shifts[comp as usize] as i64
    }

    pub(crate) fn run(&mut self, inputs: Vec<ModElem<K>>) -> Result<()> {
        let degrees = inputs
            .iter()
            .map(|g| g.lead().map_or(0, |t| self.degree_of(&t.mon, t.comp)))
            .collect();
        self.run_with_degrees(inputs, degrees)
    }

    /// Runs the algorithm on homogeneous inputs (sorted under `self.ord`) of the given
    /// degrees; the degrees matter for zero inputs only.
    pub(crate) fn run_with_degrees(&mut self, inputs: Vec<ModElem<K>>, input_degrees: Vec<i64>) -> Result<()> {
        self.aug_ord = TermOrder::top(input_degrees.iter().map(|&d| d as i32).collect());
        let mut order: Vec<usize> = (0..inputs.len()).collect();
        order.sort_by_key(|&i| input_degrees[i]);
        let mut inputs: Vec<Option<ModElem<K>>> = inputs.into_iter().map(Some).collect();
        let mut next_input = 0;
        loop {
            let pair_deg = self.pairs.iter().map(|p| p.deg).min();
            let input_deg = order.get(next_input).map(|&i| input_degrees[i]);
            let d = match (pair_deg, input_deg) {
                (None, None) => break,
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (Some(a), Some(b)) => a.min(b),
            };
            while let Some(pos) = self.next_pair(d) {
                let p = self.pairs.swap_remove(pos);
                self.budget.charge()?;
                self.process_pair(p);
            }
            while next_input < order.len() && input_degrees[order[next_input]] == d {
                let idx = order[next_input];
                next_input += 1;
                let g = inputs[idx].take().expect("input used once");
                let aug = if self.track {
                    ModElem::term(Monomial::ONE, idx, K::one())
                } else {
                    ModElem::zero()
                };
                let (v, aug) = self.reduce(g, aug);
                if v.is_zero() {
                    if self.track {
                        self.syzygies.push(aug);
                    }
                } else {
                    self.kept.push(idx);
                    self.insert(v, aug);
                }
            }
        }
        Ok(())
    }

    fn next_pair(&self, d: i64) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (k, p) in self.pairs.iter().enumerate() {
            if p.deg != d {
                continue;
            }
            best = match best {
                None => Some(k),
                Some(b) => {
                    let q = &self.pairs[b];
                    let key_p = (p.i.max(p.j), p.i.min(p.j));
                    let key_q = (q.i.max(q.j), q.i.min(q.j));
                    if key_p < key_q {
                        Some(k)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }

    fn process_pair(&mut self, p: Pair) {
        let (bi, bj) = (&self.basis[p.i], &self.basis[p.j]);
        let qi = bi.lt.quotient_of(&p.lcm).expect("lcm divisible");
        let qj = bj.lt.quotient_of(&p.lcm).expect("lcm divisible");
        let one = K::one();
        let mone = -K::one();
        let empty = ModElem::zero();
        let v = empty.add_scaled(&one, &qi, &bi.v, &self.ord).add_scaled(&mone, &qj, &bj.v, &self.ord);
        let aug = if self.track {
            empty
                .add_scaled(&one, &qi, &bi.aug, &self.aug_ord)
                .add_scaled(&mone, &qj, &bj.aug, &self.aug_ord)
        } else {
            empty
        };
        let (v, aug) = self.reduce(v, aug);
        if v.is_zero() {
            if self.track && !aug.is_zero() {
                self.syzygies.push(aug);
            }
        } else {
            self.insert(v, aug);
        }
    }

    fn find_reducer(&self, m: &Monomial, comp: u32) -> Option<usize> {
        self.by_comp[comp as usize]
            .iter()
            .copied()
            .find(|&b| self.basis[b].lt.divides(m))
    }

    /// Top-reduces `v` until its leading term is not divisible by any basis leading term.
    fn reduce(&self, mut v: ModElem<K>, mut aug: ModElem<K>) -> (ModElem<K>, ModElem<K>) {
        while let Some(t) = v.lead() {
            let Some(b) = self.find_reducer(&t.mon, t.comp) else {
                break;
            };
            let be = &self.basis[b];
            let q = be.lt.quotient_of(&t.mon).expect("divides");
            let c = -t.coeff.clone();
            v = v.add_scaled(&c, &q, &be.v, &self.ord);
            if self.track {
                aug = aug.add_scaled(&c, &q, &be.aug, &self.aug_ord);
            }
        }
        (v, aug)
    }

    fn insert(&mut self, mut v: ModElem<K>, mut aug: ModElem<K>) {
        let f = v.make_monic();
        if self.track {
            aug = aug.scale(&f);
        }
        let lead = v.lead().expect("nonzero");
        let (lt, comp) = (lead.mon, lead.comp);
        let t = self.basis.len();
        self.update_pairs(t, &lt, comp);
        self.basis.push(Elem { v, aug, lt });
        self.by_comp[comp as usize].push(t);
    }

    fn update_pairs(&mut self, t: usize, lt: &Monomial, comp: u32) {
        // Candidates with every earlier element sharing the component.
        let mut cands: Vec<(usize, Monomial, bool)> = self.by_comp[comp as usize]
            .iter()
            .map(|&i| {
                let m = &self.basis[i].lt;
                (i, m.lcm(lt), m.is_coprime(lt))
            })
            .collect();

        // Chain criterion on old pairs.
        self.pairs.retain(|p| {
            if p.comp != comp || !lt.divides(&p.lcm) {
                return true;
            }
            let li = self.basis[p.i].lt.lcm(lt);
            let lj = self.basis[p.j].lt.lcm(lt);
            li == p.lcm || lj == p.lcm
        });

        // M criterion: drop (i,t) if some lcm(j,t) properly divides lcm(i,t).
        let lcms: Vec<Monomial> = cands.iter().map(|c| c.1).collect();
        cands.retain(|(_, l, _)| !lcms.iter().any(|o| o != l && o.divides(l)));

        // F criterion: one pair per distinct lcm.
        cands.sort_by(|a, b| a.1.grevlex(&b.1).then(a.0.cmp(&b.0)));
        let mut groups: Vec<Vec<(usize, Monomial, bool)>> = Vec::new();
        for c in cands {
            match groups.last_mut() {
                Some(g) if g[0].1 == c.1 => g.push(c),
                _ => groups.push(vec![c]),
            }
        }
        for g in groups {
            if self.product_criterion && g.iter().any(|c| c.2) {
                continue;
            }
            let (i, l, _) = g[0];
            self.pairs.push(Pair {
                deg: self.degree_of(&l, comp),
                lcm: l,
                comp,
                i,
                j: t,
            });
        }
    }

    pub(crate) fn basis_elems(&self) -> Vec<ModElem<K>> {
        self.basis.iter().map(|e| e.v.clone()).collect()
    }

    pub(crate) fn take_syzygies(&mut self) -> Vec<ModElem<K>> {
        std::mem::take(&mut self.syzygies)
    }

    pub(crate) fn kept_inputs(&self) -> &[usize] {
        &self.kept
    }

    pub(crate) fn aug_order(&self) -> &TermOrder {
        &self.aug_ord
    }
}

/// A Gröbner basis of a homogeneous submodule of a graded free module, in the
/// term-over-position order of that module unless built otherwise.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<K> {
    free: FreeModule,
    ord: TermOrder,
    elems: Vec<ModElem<K>>,
}

impl<K: Field> GroebnerBasis<K> {
    /// Computes the reduced Gröbner basis of the submodule generated by `gens`.
    pub fn compute(free: &FreeModule, gens: &[ModElem<K>], kind: OrderKind, budget: &Budget) -> Result<Self> {
        let ord = match kind {
            OrderKind::TermOverPosition => TermOrder::top(free.degrees().to_vec()),
            OrderKind::PositionOverTerm => TermOrder::pot(free.degrees().to_vec()),
        };
        check_homogeneous(free, gens)?;
        let inputs: Vec<ModElem<K>> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.resort(&ord))
            .collect();
        let mut engine = Engine::new(ord.clone(), false, budget);
        engine.run(inputs)?;
        let elems = interreduce(engine.basis_elems(), &ord);
        Ok(GroebnerBasis {
            free: free.clone(),
            ord,
            elems,
        })
    }

    pub fn free(&self) -> &FreeModule {
        &self.free
    }

    pub fn order(&self) -> &TermOrder {
        &self.ord
    }

    /// Basis elements, monic, by ascending degree and descending leading term within a degree.
    pub fn elements(&self) -> &[ModElem<K>] {
        &self.elems
    }

    pub fn leading_terms(&self) -> Vec<(Monomial, usize)> {
        self.elems
            .iter()
            .map(|e| {
                let t = e.lead().expect("nonzero");
                (t.mon, t.comp as usize)
            })
            .collect()
    }

    /// Full normal form of `v` (given in the module's canonical order).
    pub fn normal_form(&self, v: &ModElem<K>) -> ModElem<K> {
        normal_form(&v.resort(&self.ord), &self.elems, &self.ord).resort(&self.free.order())
    }

    pub fn contains(&self, v: &ModElem<K>) -> bool {
        self.normal_form(v).is_zero()
    }

    /// True when the submodule is the whole free module, i.e. the cokernel vanishes.
    pub fn is_everything(&self) -> bool {
        let lts = self.leading_terms();
        (0..self.free.rank()).all(|c| lts.iter().any(|(m, comp)| *comp == c && m.is_one()))
    }
}

fn check_homogeneous<K: Field>(free: &FreeModule, gens: &[ModElem<K>]) -> Result<()> {
    for (i, g) in gens.iter().enumerate() {
        if let Some(c) = g.max_comp() {
            if c as usize >= free.rank() {
                return Err(Error::DegreeMismatch(format!("generator {i} outside the free module")));
            }
        }
        if !g.is_homogeneous(free) {
            return Err(Error::NotHomogeneous(format!("generator {i}")));
        }
    }
    Ok(())
}

/// Fully reduces `v` modulo `basis` (all sorted under `ord`, basis monic).
pub fn normal_form<K: Field>(v: &ModElem<K>, basis: &[ModElem<K>], ord: &TermOrder) -> ModElem<K> {
    let mut rest = v.clone();
    let mut done: Vec<super::module::Term<K>> = Vec::new();
    'outer: while let Some(t) = rest.lead().cloned() {
        for b in basis {
            let bl = b.lead().expect("nonzero");
            if bl.comp == t.comp {
                if let Some(q) = bl.mon.quotient_of(&t.mon) {
                    let c = -(t.coeff.clone() / bl.coeff.clone());
                    rest = rest.add_scaled(&c, &q, b, ord);
                    continue 'outer;
                }
            }
        }
        done.push(t);
        rest = rest.tail();
    }
    ModElem::from_terms(done, ord)
}

fn interreduce<K: Field>(elems: Vec<ModElem<K>>, ord: &TermOrder) -> Vec<ModElem<K>> {
    let leads: Vec<(Monomial, u32)> = elems
        .iter()
        .map(|e| {
            let t = e.lead().expect("nonzero");
            (t.mon, t.comp)
        })
        .collect();
    let mut minimal: Vec<ModElem<K>> = Vec::new();
    for (i, e) in elems.iter().enumerate() {
        let (m, c) = leads[i];
        let redundant = leads.iter().enumerate().any(|(j, (mj, cj))| {
            j != i && *cj == c && mj.divides(&m) && (mj != &m || j < i)
        });
        if !redundant {
            minimal.push(e.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<ModElem<K>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, e)| e.clone())
            .collect();
        let mut r = normal_form_tail(&minimal[i], &others, ord);
        r.make_monic();
        out.push(r);
    }
    out.sort_by(|a, b| {
        let (ta, tb) = (a.lead().unwrap(), b.lead().unwrap());
        let da = ta.mon.degree() as i64 + ord.shifts[ta.comp as usize] as i64;
        let db = tb.mon.degree() as i64 + ord.shifts[tb.comp as usize] as i64;
        da.cmp(&db).then_with(|| ord.cmp(&tb.mon, tb.comp, &ta.mon, ta.comp))
    });
    out
}

/// Reduces the non-leading terms only.
fn normal_form_tail<K: Field>(v: &ModElem<K>, basis: &[ModElem<K>], ord: &TermOrder) -> ModElem<K> {
    let Some(head) = v.lead().cloned() else {
        return v.clone();
    };
    let tail = v.tail();
    let reduced = normal_form(&tail, basis, ord);
    let mut terms = vec![head];
    terms.extend(reduced.terms().iter().cloned());
    ModElem::from_terms(terms, ord)
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub fn groebner_basis<K: Field>(free: &FreeModule, gens: &[ModElem<K>], order: OrderKind) -> Result<Vec<ModElem<K>>> {
    let gb = GroebnerBasis::compute(free, gens, order, &Budget::unlimited())?;
    Ok(gb.elems.iter().map(|e| e.resort(&free.order())).collect())
}

/// Indices of a minimal generating subset of the homogeneous elements `gens`
/// (graded Nakayama: keep an element iff it is not in the span of earlier-kept
/// elements together with everything of lower degree).
pub fn minimal_generators<K: Field>(free: &FreeModule, gens: &[ModElem<K>], budget: &Budget) -> Result<Vec<usize>> {
    check_homogeneous(free, gens)?;
    let ord = free.order();
    let mut engine = Engine::new(ord, false, budget);
    engine.run(gens.to_vec())?;
    let mut kept = engine.kept_inputs().to_vec();
    kept.sort_unstable();
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Poly;
    use crate::{Fp, Rational};

    fn ideal(gens: &[Poly<Rational>]) -> (FreeModule, Vec<ModElem<Rational>>) {
        let free = FreeModule::new(gens[0].nvars(), vec![0]);
        let elems = gens
            .iter()
            .map(|g| ModElem::from_polys(&free, std::slice::from_ref(g)))
            .collect();
        (free, elems)
    }

    #[test]
    fn variables_are_their_own_basis() {
        let x = Poly::<Rational>::var(2, 0);
        let y = Poly::<Rational>::var(2, 1);
        let (free, gens) = ideal(&[x.clone(), y.clone()]);
        let gb = groebner_basis(&free, &gens, OrderKind::TermOverPosition).unwrap();
        let got: Vec<Poly<Rational>> = gb.iter().map(|g| g.component(0, 2)).collect();
        assert_eq!(got, vec![x, y]);
    }

    #[test]
    fn s_pair_produces_cubic() {
        // {x^2, xy + y^2} -> {x^2, xy + y^2, y^3}
        let x = Poly::<Rational>::var(2, 0);
        let y = Poly::<Rational>::var(2, 1);
        let g1 = x.mul(&x);
        let g2 = x.mul(&y).add(&y.mul(&y));
        let (free, gens) = ideal(&[g1.clone(), g2.clone()]);
        let gb = groebner_basis(&free, &gens, OrderKind::TermOverPosition).unwrap();
        let got: Vec<Poly<Rational>> = gb.iter().map(|g| g.component(0, 2)).collect();
        assert_eq!(got, vec![g1, g2, y.pow(3)]);
    }

    #[test]
    fn unit_vectors_generate_everything() {
        let free = FreeModule::new(2, vec![0, 0]);
        let x = Poly::<Fp<5>>::var(2, 0);
        let gens = vec![
            free.unit::<Fp<5>>(0),
            free.unit(1),
            ModElem::from_polys(&free, &[x.clone(), x]),
        ];
        let gb = GroebnerBasis::compute(&free, &gens, OrderKind::TermOverPosition, &Budget::unlimited()).unwrap();
        assert!(gb.is_everything());
    }

    #[test]
    fn generators_reduce_to_zero() {
        let x = Poly::<Rational>::var(3, 0);
        let y = Poly::<Rational>::var(3, 1);
        let z = Poly::<Rational>::var(3, 2);
        let gens = [x.mul(&y).sub(&z.mul(&z)), y.mul(&z).sub(&x.mul(&x)), x.mul(&z).add(&y.mul(&y))];
        let (free, elems) = ideal(&gens);
        for kind in [OrderKind::TermOverPosition, OrderKind::PositionOverTerm] {
            let gb = GroebnerBasis::compute(&free, &elems, kind, &Budget::unlimited()).unwrap();
            for g in &elems {
                assert!(gb.contains(g));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let x = Poly::<Rational>::var(3, 0);
        let y = Poly::<Rational>::var(3, 1);
        let z = Poly::<Rational>::var(3, 2);
        let gens = [x.mul(&y).sub(&z.mul(&z)), y.mul(&z).sub(&x.mul(&x)), x.mul(&z).add(&y.mul(&y))];
        let (free, elems) = ideal(&gens);
        let res = GroebnerBasis::compute(&free, &elems, OrderKind::TermOverPosition, &Budget::with_max_pairs(0));
        assert!(matches!(res, Err(Error::BudgetExhausted { .. })));
    }

    #[test]
    fn minimal_generators_drop_redundant_elements() {
        let x = Poly::<Rational>::var(2, 0);
        let y = Poly::<Rational>::var(2, 1);
        let (free, elems) = ideal(&[x.clone(), x.mul(&y), y.clone(), x.add(&y)]);
        assert_eq!(minimal_generators(&free, &elems, &Budget::unlimited()).unwrap(), vec![0, 2]);
    }

    #[test]
    fn rejects_inhomogeneous_generators() {
        let x = Poly::<Rational>::var(2, 0);
        let (free, elems) = ideal(&[x.add(&x.mul(&x))]);
        assert!(matches!(
            GroebnerBasis::compute(&free, &elems, OrderKind::TermOverPosition, &Budget::unlimited()),
            Err(Error::NotHomogeneous(_))
        ));
    }
}
