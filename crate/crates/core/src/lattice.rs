//! Intersection lattices: flats, Möbius function, characteristic and Poincaré polynomials,
//! canonical forms and isomorphism.
//!
//! A flat is stored as the set of hyperplanes containing it (a bitmask over the atoms) and its
//! codimension. The bottom element (the ambient space, empty intersection) is included; the
//! empty projective intersection is not.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::linalg::rref;
use crate::algebra::scalar::Field;
use crate::arrangement::Arrangement;
use crate::error::{Error, Result};

// atom colour plus the sorted (rank, neighbour colours) signature
type ColorKey = (u64, Vec<(usize, Vec<u64>)>);
// canonical code and the atom order producing it
type Labelling = (Vec<(usize, u64)>, Vec<usize>);

pub const MAX_ATOMS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flat {
    pub rank: usize,
    pub mask: u64,
}

impl Flat {
    pub fn atoms(&self) -> Vec<usize> {
        (0..64).filter(|i| self.mask >> i & 1 == 1).collect()
    }

    pub fn contains_atom(&self, a: usize) -> bool {
        self.mask >> a & 1 == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    k: usize,
    n: usize,
    /// Sorted by (rank, mask); index 0 is the bottom.
    flats: Vec<Flat>,
    central_rank: usize,
}

/// Orders the elements of the lattice of an arrangement by incremental closure.
pub fn intersection_lattice<K: Field>(a: &Arrangement<K>) -> Result<Lattice> {
    let k = a.k();
    if k > MAX_ATOMS {
        return Err(Error::InvalidArrangement(format!(
            "lattices are limited to {MAX_ATOMS} hyperplanes"
        )));
    }
    let forms = a.forms();
    let n = a.n();
    let contains = |rows: &[Vec<K>], pivots: &[usize], v: &[K]| -> bool {
        let mut v = v.to_vec();
        for (row, &p) in rows.iter().zip(pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x -= &(f.clone() * r.clone());
            }
        }
        v.iter().all(|x| x.is_zero())
    };
    let mut flats = vec![Flat { rank: 0, mask: 0 }];
    let mut level: Vec<(Vec<Vec<K>>, u64)> = vec![(Vec::new(), 0)];
    let mut central_rank = 0;
    for r in 0..=n {
        let mut seen: HashSet<u64> = HashSet::new();
        let mut next: Vec<(Vec<Vec<K>>, u64)> = Vec::new();
        for (rows, mask) in &level {
            for h in 0..k {
                if mask >> h & 1 == 1 {
                    continue;
                }
                let mut m = rows.clone();
                m.push(forms[h].clone());
                let pivots = rref(&mut m);
                let full: u64 = (0..k)
                    .filter(|&g| contains(&m, &pivots, &forms[g]))
                    .fold(0, |acc, g| acc | 1 << g);
                if seen.insert(full) {
                    next.push((m, full));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        central_rank = r + 1;
        if r < n {
            flats.extend(next.iter().map(|(_, mask)| Flat { rank: r + 1, mask: *mask }));
        }
        level = next;
    }
    flats.sort();
    Ok(Lattice {
        k,
        n,
        flats,
        central_rank,
    })
}

impl Lattice {
    /// Builds a lattice directly from flats (bottom optional); used for relabelings.
    pub fn from_flats(k: usize, n: usize, central_rank: usize, mut flats: Vec<Flat>) -> Self {
        if !flats.iter().any(|f| f.rank == 0) {
            flats.push(Flat { rank: 0, mask: 0 });
        }
        flats.sort();
        flats.dedup();
        Lattice {
            k,
            n,
            flats,
            central_rank,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Rank of the central arrangement (n + 1 iff essential).
    pub fn central_rank(&self) -> usize {
        self.central_rank
    }

    pub fn is_essential(&self) -> bool {
        self.central_rank == self.n + 1
    }

    pub fn max_rank(&self) -> usize {
        self.flats.iter().map(|f| f.rank).max().unwrap_or(0)
    }

    /// Number of flats of each rank 0..=max_rank.
    pub fn rank_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.max_rank() + 1];
        for f in &self.flats {
            c[f.rank] += 1;
        }
        c
    }

    /// X <= Y iff X contains Y as a subspace iff mask(X) is a subset of mask(Y).
    pub fn leq(&self, x: usize, y: usize) -> bool {
        let (a, b) = (self.flats[x].mask, self.flats[y].mask);
        a & b == a
    }

    /// Möbius values mu(bottom, X) on the central lattice, which adds the origin as top
    /// when the arrangement is essential. Returns (flat, mu) pairs sorted by rank.
    pub fn mobius(&self) -> Vec<(Flat, i64)> {
        let mut elems = self.flats.clone();
        if self.is_essential() {
            elems.push(Flat {
                rank: self.n + 1,
                mask: if self.k == 64 { u64::MAX } else { (1u64 << self.k) - 1 },
            });
        }
        let mut mu: Vec<i64> = Vec::with_capacity(elems.len());
        for (j, y) in elems.iter().enumerate() {
            if y.rank == 0 {
                mu.push(1);
                continue;
            }
            let s: i64 = elems[..j]
                .iter()
                .zip(&mu)
                .filter(|(x, _)| x.rank < y.rank && x.mask & y.mask == x.mask)
                .map(|(_, &m)| m)
                .sum();
            mu.push(-s);
        }
        elems.into_iter().zip(mu).collect()
    }

    /// Whitney numbers of the first kind of the central lattice, w_r = sum of mu over rank r.
    pub fn whitney_first_kind(&self) -> Vec<i64> {
        let mut w = vec![0; self.central_rank + 1];
        for (f, m) in self.mobius() {
            w[f.rank] += m;
        }
        w
    }

    /// chi(t) = sum_X mu(X) t^{n+1-rank X}, coefficients indexed by the power of t.
    pub fn characteristic_polynomial(&self) -> Vec<i64> {
        let mut c = vec![0; self.n + 2];
        for (f, m) in self.mobius() {
            c[self.n + 1 - f.rank] += m;
        }
        c
    }

    /// Poincaré polynomial of the complement in C^{n+1}: sum_X mu(X) (-t)^{rank X}.
    pub fn central_poincare_polynomial(&self) -> Vec<i64> {
        let mut p = vec![0; self.n + 2];
        for (f, m) in self.mobius() {
            let sign = if f.rank % 2 == 0 { 1 } else { -1 };
            p[f.rank] += sign * m;
        }
        p
    }

    /// Poincaré polynomial of the complement in P^n: the central one divided by 1 + t.
    pub fn poincare_polynomial(&self) -> Vec<i64> {
        let c = self.central_poincare_polynomial();
        let mut q = vec![0; self.n + 1];
        let mut carry = 0;
        for i in 0..=self.n {
            q[i] = c[i] - carry;
            carry = q[i];
        }
        debug_assert_eq!(c[self.n + 1], carry, "1 + t divides the central Poincaré polynomial");
        q
    }

    /// Betti numbers b_0..b_n of the complement in P^n.
    pub fn complement_betti_numbers(&self) -> Vec<i64> {
        self.poincare_polynomial()
    }

    /// Per-atom signature: number of flats of each rank containing the atom.
    fn atom_signature(&self, a: usize) -> Vec<usize> {
        let mut s = vec![0; self.max_rank() + 1];
        for f in &self.flats {
            if f.contains_atom(a) {
                s[f.rank] += 1;
            }
        }
        s
    }

    pub fn incidence_multiset(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = (0..self.k).map(|a| self.atom_signature(a)).collect();
        v.sort();
        v
    }

    fn mask_set(&self) -> HashSet<u64> {
        self.flats.iter().map(|f| f.mask).collect()
    }

    fn relabel_mask(mask: u64, perm: &[usize]) -> u64 {
        let mut out = 0;
        let mut m = mask;
        while m != 0 {
            let a = m.trailing_zeros() as usize;
            out |= 1 << perm[a];
            m &= m - 1;
        }
        out
    }

    /// The lattice with atom a renamed perm[a].
    pub fn relabel(&self, perm: &[usize]) -> Lattice {
        let flats = self
            .flats
            .iter()
            .map(|f| Flat {
                rank: f.rank,
                mask: Self::relabel_mask(f.mask, perm),
            })
            .collect();
        Lattice::from_flats(self.k, self.n, self.central_rank, flats)
    }

    fn is_automorphism(&self, set: &HashSet<u64>, perm: &[usize]) -> bool {
        self.flats
            .iter()
            .all(|f| set.contains(&Self::relabel_mask(f.mask, perm)))
    }

    /// Colour refinement of the atoms by iterated incidence structure.
    fn refine(&self, mut colors: Vec<u64>) -> Vec<u64> {
        loop {
            let mut keys: Vec<ColorKey> = Vec::with_capacity(self.k);
            for a in 0..self.k {
                let mut around: Vec<(usize, Vec<u64>)> = self
                    .flats
                    .iter()
                    .filter(|f| f.contains_atom(a))
                    .map(|f| {
                        let mut cs: Vec<u64> = f.atoms().iter().map(|&b| colors[b]).collect();
                        cs.sort_unstable();
                        (f.rank, cs)
                    })
                    .collect();
                around.sort();
                keys.push((colors[a], around));
            }
            let mut distinct: Vec<&ColorKey> = keys.iter().collect();
            distinct.sort();
            distinct.dedup();
            let new: Vec<u64> = keys
                .iter()
                .map(|key| distinct.binary_search(&key).expect("present") as u64)
                .collect();
            let before = colors.iter().collect::<HashSet<_>>().len();
            let after = distinct.len();
            colors = new;
            if after == before {
                return colors;
            }
        }
    }

    fn code_of(&self, perm: &[usize]) -> Vec<(usize, u64)> {
        let mut code: Vec<(usize, u64)> = self
            .flats
            .iter()
            .map(|f| (f.rank, Self::relabel_mask(f.mask, perm)))
            .collect();
        code.sort_unstable();
        code
    }

    fn search(
        &self,
        colors: Vec<u64>,
        set: &HashSet<u64>,
        best: &mut Option<Labelling>,
    ) {
        let colors = self.refine(colors);
        let mut cells: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (a, &c) in colors.iter().enumerate() {
            cells.entry(c).or_default().push(a);
        }
        let Some(cell) = cells.values().find(|c| c.len() > 1).cloned() else {
            // Discrete: the colour order is the labelling.
            let mut order: Vec<usize> = (0..self.k).collect();
            order.sort_by_key(|&a| colors[a]);
            let mut perm = vec![0; self.k];
            for (label, &a) in order.iter().enumerate() {
                perm[a] = label;
            }
            let code = self.code_of(&perm);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, perm));
            }
            return;
        };
        let first = cell[0];
        for &a in &cell {
            if a != first {
                let mut swap: Vec<usize> = (0..self.k).collect();
                swap.swap(first, a);
                if self.is_automorphism(set, &swap) {
                    continue;
                }
            }
            let mut c = colors.clone();
            // Individualized atoms sort before the rest of their cell.
            for x in c.iter_mut() {
                *x *= 2;
                *x += 1;
            }
            c[a] -= 1;
            self.search(c, set, best);
        }
    }

    /// Canonical labelling: (code, perm) where perm[a] is the canonical label of atom a and
    /// code is the sorted list of relabelled (rank, mask) pairs. Isomorphic lattices have
    /// equal codes.
    pub fn canonical_labelling(&self) -> (Vec<(usize, u64)>, Vec<usize>) {
        let set = self.mask_set();
        let start: Vec<u64> = vec![0; self.k];
        let mut best = None;
        self.search(start, &set, &mut best);
        best.unwrap_or_else(|| (self.code_of(&[]), Vec::new()))
    }

    /// Hex SHA-256 digest (first 16 hex digits) of the canonical code.
    pub fn canonical_hash(&self) -> String {
        let (code, _) = self.canonical_labelling();
        let mut text = format!("k={};", self.k);
        for (r, m) in &code {
            text.push_str(&format!("{r}:{m:x},"));
        }
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// Rank-grouped flats with 1-based hyperplane labels.
    pub fn export(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out = vec![Vec::new(); self.max_rank() + 1];
        for f in &self.flats {
            out[f.rank].push(f.atoms().iter().map(|a| a + 1).collect());
        }
        out
    }

    pub fn summary(&self) -> LatticeSummary {
        LatticeSummary {
            hyperplanes: self.k,
            elements: self.len(),
            rank_counts: self.rank_counts(),
            essential: self.is_essential(),
            characteristic_polynomial: self.characteristic_polynomial(),
            poincare_polynomial: self.poincare_polynomial(),
            complement_betti: self.complement_betti_numbers(),
            canonical_hash: self.canonical_hash(),
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} elements (bottom = ambient space included)", self.len())?;
        for (r, flats) in self.export().iter().enumerate() {
            let items: Vec<String> = flats
                .iter()
                .map(|s| {
                    let labels: Vec<String> = s.iter().map(|a| a.to_string()).collect();
                    format!("{{{}}}", labels.join(","))
                })
                .collect();
            writeln!(f, "rank {r} ({}): {}", flats.len(), items.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub hyperplanes: usize,
    pub elements: usize,
    pub rank_counts: Vec<usize>,
    pub essential: bool,
    /// Coefficients of t^0, t^1, ... of the characteristic polynomial of the central lattice.
    pub characteristic_polynomial: Vec<i64>,
    /// Coefficients of the Poincaré polynomial of the projective complement.
    pub poincare_polynomial: Vec<i64>,
    pub complement_betti: Vec<i64>,
    pub canonical_hash: String,
}

/// Why two lattices are not isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Mismatch {
    Size { left: usize, right: usize },
    RankCount { rank: usize, left: usize, right: usize },
    Incidence,
    Whitney { left: Vec<i64>, right: Vec<i64> },
    NoBijection,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::Size { left, right } => write!(f, "{left} vs {right} elements"),
            Mismatch::RankCount { rank, left, right } => write!(f, "rank-{rank} counts {left} vs {right}"),
            Mismatch::Incidence => write!(f, "atom incidence signatures differ"),
            Mismatch::Whitney { left, right } => write!(f, "Whitney numbers {left:?} vs {right:?}"),
            Mismatch::NoBijection => write!(f, "no atom bijection extends to an isomorphism"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum IsoVerdict {
    /// atom_map[i] is the atom of the second lattice matched with atom i of the first.
    Isomorphic { atom_map: Vec<usize> },
    NotIsomorphic { reason: Mismatch },
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic { .. })
    }
}

/// Decides isomorphism, returning an explicit atom bijection or a distinguishing invariant.
pub fn lattices_isomorphic(l1: &Lattice, l2: &Lattice) -> IsoVerdict {
    let (c1, c2) = (l1.rank_counts(), l2.rank_counts());
    let top = c1.len().max(c2.len());
    for r in 0..top {
        let (a, b) = (c1.get(r).copied().unwrap_or(0), c2.get(r).copied().unwrap_or(0));
        if a != b {
            return IsoVerdict::NotIsomorphic {
                reason: Mismatch::RankCount { rank: r, left: a, right: b },
            };
        }
    }
    if l1.len() != l2.len() {
        return IsoVerdict::NotIsomorphic {
            reason: Mismatch::Size {
                left: l1.len(),
                right: l2.len(),
            },
        };
    }
    if l1.incidence_multiset() != l2.incidence_multiset() {
        return IsoVerdict::NotIsomorphic {
            reason: Mismatch::Incidence,
        };
    }
    let (w1, w2) = (l1.whitney_first_kind(), l2.whitney_first_kind());
    if w1 != w2 {
        return IsoVerdict::NotIsomorphic {
            reason: Mismatch::Whitney { left: w1, right: w2 },
        };
    }
    let (code1, p1) = l1.canonical_labelling();
    let (code2, p2) = l2.canonical_labelling();
    if code1 != code2 {
        return IsoVerdict::NotIsomorphic {
            reason: Mismatch::NoBijection,
        };
    }
    let mut inv2 = vec![0; l2.k()];
    for (a, &lab) in p2.iter().enumerate() {
        inv2[lab] = a;
    }
    let atom_map: Vec<usize> = p1.iter().map(|&lab| inv2[lab]).collect();
    debug_assert_eq!(l1.relabel(&atom_map).flats, l2.flats);
    IsoVerdict::Isomorphic { atom_map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::catalog;
    use crate::Rational;

    fn lat(name: &str) -> Lattice {
        intersection_lattice(&catalog(name).unwrap().instantiate::<Rational>().unwrap()).unwrap()
    }

    #[test]
    fn generic_and_concurrent_triples() {
        let g = lat("generic-3-2");
        let c = lat("concurrent-3");
        assert_eq!(g.len(), 7);
        assert_eq!(c.len(), 5);
        assert_eq!(g.rank_counts(), vec![1, 3, 3]);
        assert_eq!(c.rank_counts(), vec![1, 3, 1]);
        assert_eq!(g.complement_betti_numbers(), vec![1, 2, 1]);
        assert_eq!(c.complement_betti_numbers(), vec![1, 2, 0]);
        let v = lattices_isomorphic(&g, &c);
        assert_eq!(
            v,
            IsoVerdict::NotIsomorphic {
                reason: Mismatch::RankCount { rank: 2, left: 3, right: 1 }
            }
        );
    }

    #[test]
    fn boolean_two_is_generic() {
        assert!(lattices_isomorphic(&lat("boolean-2"), &lat("generic-3-2")).is_isomorphic());
        assert_eq!(lat("boolean-2").canonical_hash(), lat("generic-3-2").canonical_hash());
    }

    #[test]
    fn single_hyperplane() {
        let q = |v: i64| Rational::from_integer(v.into());
        let a = Arrangement::new(2, vec![vec![q(1), q(0), q(0)]]).unwrap();
        let l = intersection_lattice(&a).unwrap();
        assert_eq!(l.poincare_polynomial(), vec![1, 0, 0]);
    }

    #[test]
    fn generic_four_vs_one_triple() {
        let g = lat("generic-4-2");
        let t = lat("one-triple-4");
        assert_eq!(g.rank_counts()[2], 6);
        assert_eq!(t.rank_counts()[2], 4);
        assert!(!lattices_isomorphic(&g, &t).is_isomorphic());
    }

    #[test]
    fn relabelling_is_recovered() {
        let l = lat("braid-2");
        let perm = vec![3, 5, 0, 1, 4, 2];
        let m = l.relabel(&perm);
        match lattices_isomorphic(&l, &m) {
            IsoVerdict::Isomorphic { atom_map } => assert_eq!(l.relabel(&atom_map), m),
            other => panic!("{other:?}"),
        }
        assert_eq!(l.canonical_hash(), m.canonical_hash());
    }

    #[test]
    fn mobius_sums_vanish() {
        let l = lat("braid-3");
        let mu = l.mobius();
        for (y, _) in &mu {
            if y.rank == 0 {
                continue;
            }
            let s: i64 = mu.iter().filter(|(x, _)| x.mask & y.mask == x.mask && x.rank <= y.rank).map(|(_, m)| m).sum();
            assert_eq!(s, 0);
        }
    }
}
