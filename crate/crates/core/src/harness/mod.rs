//! Exhaustive enumeration of small arrangements, grouping by lattice class, and invariance
//! checks of freeness and stable freeness across each class.

pub mod cache;

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::scalar::Field;
use crate::arrangement::{normalize, Arrangement};
use crate::classifier::{classify_with_lattice, ClassifyOptions, Dossier};
use crate::error::{Error, Result};
use crate::lattice::{intersection_lattice, LatticeSummary};

pub use cache::Cache;

pub const DEFAULT_CAP: usize = 1_000_000;
pub const DISCLAIMER: &str =
    "finite-field and small-pool sweeps are evidence only; no characteristic-zero claim is made";

/// Normalized linear forms of P^n whose integer coefficient vectors range over `values`,
/// deduplicated, in lexicographic order of first appearance.
pub fn candidate_forms<K: Field>(n: usize, values: &[i64]) -> Vec<Vec<K>> {
    let len = n + 1;
    let mut out = Vec::new();
    let mut seen: HashSet<Vec<K>> = HashSet::new();
    if values.is_empty() {
        return out;
    }
    let mut idx = vec![0usize; len];
    loop {
        let v: Vec<K> = idx.iter().map(|&i| K::from_i64(values[i])).collect();
        if let Some(f) = normalize(v) {
            if seen.insert(f.clone()) {
                out.push(f);
            }
        }
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < values.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Coefficient values for a field: 0..p for F_p, the given pool for Q.
pub fn default_values<K: Field>(pool: &[i64]) -> Vec<i64> {
    match K::characteristic() {
        0 => pool.to_vec(),
        p => (0..p as i64).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationSpec {
    pub n: usize,
    pub ks: Vec<usize>,
    /// Coefficient values (reduced into the field).
    pub values: Vec<i64>,
    pub essential_only: bool,
    pub cap: usize,
}

#[derive(Clone, Debug)]
pub struct Enumeration<K> {
    pub arrangements: Vec<Arrangement<K>>,
    /// True when the cap stopped the enumeration early.
    pub truncated: bool,
}

/// All arrangements of k distinct normalized forms (k-subsets of the candidates in
/// lexicographic order), for each requested k, up to the cap.
pub fn enumerate<K: Field>(spec: &EnumerationSpec) -> Result<Enumeration<K>> {
    if spec.n == 0 {
        return Err(Error::InvalidArrangement("n must be at least 1".into()));
    }
    let forms = candidate_forms::<K>(spec.n, &spec.values);
    let mut arrangements = Vec::new();
    let mut truncated = false;
    'outer: for &k in &spec.ks {
        if k == 0 || k > forms.len() {
            continue;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let a = Arrangement::new(spec.n, idx.iter().map(|&i| forms[i].clone()).collect())?;
            if !spec.essential_only || a.is_essential() {
                if arrangements.len() == spec.cap {
                    truncated = true;
                    break 'outer;
                }
                arrangements.push(a);
            }
            // next k-subset in lexicographic order
            let m = forms.len();
            let Some(i) = (0..k).rev().find(|&i| idx[i] < m - k + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(Enumeration {
        arrangements,
        truncated,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Free,
    StablyFree,
}

impl Property {
    pub fn label(self) -> &'static str {
        match self {
            Property::Free => "free",
            Property::StablyFree => "stably-free",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Yes,
    No,
    Undecided,
}

impl Verdict {
    fn of(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Invariance {
    Consistent,
    Violation,
    Inconclusive,
}

/// VIOLATION iff two decided verdicts differ; otherwise inconclusive if any is undecided.
pub fn invariance(verdicts: &[Verdict]) -> Invariance {
    let decided: HashSet<Verdict> = verdicts.iter().copied().filter(|v| *v != Verdict::Undecided).collect();
    if decided.len() > 1 {
        Invariance::Violation
    } else if verdicts.contains(&Verdict::Undecided) {
        Invariance::Inconclusive
    } else {
        Invariance::Consistent
    }
}

/// Sparse intermediate cohomology rows: (i, [(twist, h^i)]).
pub type IntermediateRows = Vec<(usize, Vec<(i32, i64)>)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub forms: Vec<String>,
    pub free: Verdict,
    pub stably_free: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exponents: Option<Vec<i32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub locally_free: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub intermediate: Option<IntermediateRows>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub undecided_reason: Option<String>,
}

impl Member {
    pub fn verdict(&self, p: Property) -> Verdict {
        match p {
            Property::Free => self.free,
            Property::StablyFree => self.stably_free,
        }
    }

    fn from_dossier(d: &Dossier) -> Self {
        Member {
            forms: d.arrangement.forms.clone(),
            free: Verdict::of(d.is_free()),
            stably_free: Verdict::of(d.is_stably_free()),
            exponents: d.free.exponents.clone(),
            locally_free: Some(d.locally_free),
            intermediate: Some(d.cohomology.intermediate_support()),
            undecided_reason: None,
        }
    }

    fn undecided<K: Field>(a: &Arrangement<K>, reason: String) -> Self {
        Member {
            forms: (0..a.k()).map(|i| a.form_to_string(i)).collect(),
            free: Verdict::Undecided,
            stably_free: Verdict::Undecided,
            exponents: None,
            locally_free: None,
            intermediate: None,
            undecided_reason: Some(reason),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub members: usize,
    pub free: usize,
    pub not_free: usize,
    pub stably_free: usize,
    pub not_stably_free: usize,
    pub undecided: usize,
}

impl Tally {
    fn of(members: &[Member]) -> Self {
        let count = |f: &dyn Fn(&Member) -> bool| members.iter().filter(|m| f(m)).count();
        Tally {
            members: members.len(),
            free: count(&|m| m.free == Verdict::Yes),
            not_free: count(&|m| m.free == Verdict::No),
            stably_free: count(&|m| m.stably_free == Verdict::Yes),
            not_stably_free: count(&|m| m.stably_free == Verdict::No),
            undecided: count(&|m| m.free == Verdict::Undecided),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub hash: String,
    pub lattice: LatticeSummary,
    pub tally: Tally,
    pub members: Vec<Member>,
    pub free: Invariance,
    pub stably_free: Invariance,
}

impl ClassReport {
    pub fn invariance(&self, p: Property) -> Invariance {
        match p {
            Property::Free => self.free,
            Property::StablyFree => self.stably_free,
        }
    }
}

/// Classified member together with its lattice, before grouping.
#[derive(Clone, Debug)]
pub struct Classified {
    pub lattice: LatticeSummary,
    pub member: Member,
    /// Fresh dossier (not from the cache) with its cache key.
    pub fresh: Option<(String, Dossier)>,
    pub cached: bool,
}

/// Cache key of a classification: field, window option and normalized forms.
pub fn cache_key<K: Field>(a: &Arrangement<K>, opts: &ClassifyOptions) -> String {
    let mut text = format!("{};n={};window={:?};", K::label(), a.n(), opts.window);
    for f in a.forms() {
        let cells: Vec<String> = f.iter().map(|c| c.to_string()).collect();
        text.push_str(&cells.join(","));
        text.push(';');
    }
    cache::hex_digest(&text)
}

/// Classifies every arrangement (in parallel, results in input order), consulting the cache.
pub fn classify_all<K: Field>(
    arrs: &[Arrangement<K>],
    opts: &ClassifyOptions,
    cache: Option<&Cache>,
) -> Result<Vec<Classified>> {
    arrs.par_iter()
        .map(|a| {
            let lattice = intersection_lattice(a)?.summary();
            let key = cache_key(a, opts);
            if let Some(d) = cache.and_then(|c| c.get(&key)) {
                return Ok(Classified {
                    member: Member::from_dossier(d),
                    lattice,
                    fresh: None,
                    cached: true,
                });
            }
            match classify_with_lattice(a, opts, Some(lattice.clone())) {
                Ok(mut d) => Ok(Classified {
                    member: Member::from_dossier(&d),
                    lattice,
                    fresh: Some((key, {
                        d.timings = None;
                        d
                    })),
                    cached: false,
                }),
                Err(Error::BudgetExhausted { pairs }) => Ok(Classified {
                    member: Member::undecided(a, format!("budget exhausted after {pairs} S-pairs")),
                    lattice,
                    fresh: None,
                    cached: false,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Groups classified members by lattice canonical hash (classes sorted by hash, members in
/// input order) and evaluates both invariance properties.
pub fn group_and_check(items: &[Classified]) -> Vec<ClassReport> {
    let mut groups: BTreeMap<String, (LatticeSummary, Vec<Member>)> = BTreeMap::new();
    for it in items {
        groups
            .entry(it.lattice.canonical_hash.clone())
            .or_insert_with(|| (it.lattice.clone(), Vec::new()))
            .1
            .push(it.member.clone());
    }
    groups
        .into_iter()
        .map(|(hash, (lattice, members))| {
            let free = invariance(&members.iter().map(|m| m.free).collect::<Vec<_>>());
            let stably_free = invariance(&members.iter().map(|m| m.stably_free).collect::<Vec<_>>());
            ClassReport {
                hash,
                lattice,
                tally: Tally::of(&members),
                members,
                free,
                stably_free,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowComparison {
    pub i: usize,
    /// All decided members have the same h^i table.
    pub identical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCohomology {
    pub hash: String,
    pub decided_members: usize,
    pub rows: Vec<RowComparison>,
    /// A conjecture violation in this class also shows up as a cohomology mismatch.
    pub flagged: bool,
}

/// For each class and each intermediate i, whether every decided member shares the same
/// dimension table (compared as sparse maps, so windows need not agree).
pub fn cohomology_by_class(classes: &[ClassReport]) -> Vec<ClassCohomology> {
    classes
        .iter()
        .map(|c| {
            let tables: Vec<&IntermediateRows> = c.members.iter().filter_map(|m| m.intermediate.as_ref()).collect();
            let indices: Vec<usize> = tables.first().map(|t| t.iter().map(|(i, _)| *i).collect()).unwrap_or_default();
            let rows: Vec<RowComparison> = indices
                .iter()
                .map(|&i| {
                    let row = |t: &IntermediateRows| t.iter().find(|(j, _)| *j == i).map(|(_, r)| r.clone());
                    let first = row(tables[0]);
                    RowComparison {
                        i,
                        identical: tables.iter().all(|t| row(t) == first),
                    }
                })
                .collect();
            let violation = c.free == Invariance::Violation || c.stably_free == Invariance::Violation;
            let mismatch = rows.iter().any(|r| !r.identical);
            ClassCohomology {
                hash: c.hash.clone(),
                decided_members: tables.len(),
                rows,
                flagged: violation && mismatch,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub n: usize,
    pub ks: Vec<usize>,
    pub field: String,
    pub property: Property,
    pub arrangements: usize,
    pub truncated: bool,
    pub classes: usize,
    pub consistent: usize,
    pub violations: usize,
    pub inconclusive: usize,
    pub undecided_members: usize,
    pub disclaimer: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub summary: SearchSummary,
    pub classes: Vec<ClassReport>,
    pub cohomology: Vec<ClassCohomology>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub cache_hits: usize,
    pub cache_added: usize,
}

/// Enumerates, classifies, groups and checks; new dossiers are appended to the cache.
pub fn search<K: Field>(
    spec: &EnumerationSpec,
    property: Property,
    opts: &ClassifyOptions,
    cache: Option<&mut Cache>,
) -> Result<(SearchReport, SearchStats)> {
    let en = enumerate::<K>(spec)?;
    let items = classify_all(&en.arrangements, opts, cache.as_deref())?;
    let mut stats = SearchStats {
        cache_hits: items.iter().filter(|i| i.cached).count(),
        cache_added: 0,
    };
    if let Some(c) = cache {
        let fresh: Vec<(String, Dossier)> = items.iter().filter_map(|i| i.fresh.clone()).collect();
        stats.cache_added = c.append(&fresh)?;
    }
    let classes = group_and_check(&items);
    let cohomology = cohomology_by_class(&classes);
    let count = |inv: Invariance| classes.iter().filter(|c| c.invariance(property) == inv).count();
    let summary = SearchSummary {
        n: spec.n,
        ks: spec.ks.clone(),
        field: K::label(),
        property,
        arrangements: en.arrangements.len(),
        truncated: en.truncated,
        classes: classes.len(),
        consistent: count(Invariance::Consistent),
        violations: count(Invariance::Violation),
        inconclusive: count(Invariance::Inconclusive),
        undecided_members: items.iter().filter(|i| i.member.free == Verdict::Undecided).count(),
        disclaimer: DISCLAIMER.into(),
    };
    Ok((
        SearchReport {
            summary,
            classes,
            cohomology,
        },
        stats,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Fp, Rational};

    fn spec(n: usize, ks: Vec<usize>, p: i64) -> EnumerationSpec {
        EnumerationSpec {
            n,
            ks,
            values: (0..p).collect(),
            essential_only: false,
            cap: DEFAULT_CAP,
        }
    }

    #[test]
    fn counts_over_f2() {
        assert_eq!(enumerate::<Fp<2>>(&spec(1, vec![2], 2)).unwrap().arrangements.len(), 3);
        assert_eq!(enumerate::<Fp<2>>(&spec(2, vec![3], 2)).unwrap().arrangements.len(), 35);
        assert_eq!(candidate_forms::<Fp<5>>(2, &(0..5).collect::<Vec<_>>()).len(), 31);
    }

    #[test]
    fn rational_pool_is_deduplicated() {
        let forms = candidate_forms::<Rational>(1, &[-2, -1, 0, 1, 2]);
        // slopes: 0, +-1/2, +-1, +-2 and the point at infinity
        assert_eq!(forms.len(), 8);
    }

    #[test]
    fn cap_truncates() {
        let mut s = spec(2, vec![3], 3);
        s.cap = 10;
        let e = enumerate::<Fp<3>>(&s).unwrap();
        assert_eq!(e.arrangements.len(), 10);
        assert!(e.truncated);
    }

    #[test]
    fn invariance_rules() {
        use Verdict::*;
        assert_eq!(invariance(&[Yes, Yes]), Invariance::Consistent);
        assert_eq!(invariance(&[Yes, Undecided]), Invariance::Inconclusive);
        assert_eq!(invariance(&[Yes, No, Undecided]), Invariance::Violation);
    }

    #[test]
    fn small_sweep_partitions_and_is_consistent() {
        let s = spec(2, vec![3, 4], 3);
        let (report, _) = search::<Fp<3>>(&s, Property::Free, &ClassifyOptions::default(), None).unwrap();
        let total: usize = report.classes.iter().map(|c| c.members.len()).sum();
        assert_eq!(total, report.summary.arrangements);
        assert_eq!(report.summary.violations, 0);
    }
}
