//! Ext modules against the ring, intermediate cohomology of the associated sheaf, and the
//! Horrocks and Coanda criteria.
//!
//! Conventions: S has n+1 variables, M is saturated, F is the sheaf of M on P^n. Graded local
//! duality gives h^i(F(d)) = dim Ext^{n-i}(M, S)_{-d-n-1} for 1 <= i <= n, and
//! h^0(F(d)) = dim M_d - dim Ext^{n+1}(M, S)_{-d-n-1} + dim Ext^n(M, S)_{-d-n-1}.

use serde::{Deserialize, Serialize};

use crate::algebra::groebner::{Budget, GroebnerBasis};
use crate::algebra::module::{FreeModule, GradedMap, ModElem, OrderKind};
use crate::algebra::scalar::Field;
use crate::algebra::syzygy::{modulo, syzygy_generators};
use crate::error::{Error, Result};
use crate::hilbert::{HilbertSeries, LaurentPoly};
use crate::resolution::{minimal_free_resolution, GradedModule, Resolution};

pub const DUALITY_CONVENTION: &str =
    "h^i(F(d)) = dim Ext^(n-i)(M,S)_(-d-n-1) for 1<=i<=n; h^0(F(d)) = dim M_d - dim Ext^(n+1)_(-d-n-1) + dim Ext^n_(-d-n-1)";

/// The dual of a resolution: C^j = Hom(F_j, S) with maps d_{j+1}^T : C^j -> C^{j+1}.
pub struct DualComplex<K> {
    nvars: usize,
    modules: Vec<FreeModule>,
    maps: Vec<GradedMap<K>>,
    /// Gröbner bases of the images of d_j^T in C^j, for j = 1..=length (index j - 1).
    image_bases: Vec<GroebnerBasis<K>>,
}

impl<K: Field> DualComplex<K> {
    pub fn new(res: &Resolution<K>, budget: &Budget) -> Result<Self> {
        let nvars = res.free_modules()[0].nvars();
        let modules: Vec<FreeModule> = res.free_modules().iter().map(|f| f.dual()).collect();
        let maps: Vec<GradedMap<K>> = (1..=res.length()).map(|i| res.differential(i).transpose()).collect();
        let image_bases = maps
            .iter()
            .map(|m| GroebnerBasis::compute(m.target(), m.columns(), OrderKind::TermOverPosition, budget))
            .collect::<Result<_>>()?;
        Ok(DualComplex {
            nvars,
            modules,
            maps,
            image_bases,
        })
    }

    pub fn length(&self) -> usize {
        self.maps.len()
    }

    /// Hilbert series of C^j / im(d_j^T).
    fn cokernel_series(&self, j: usize) -> HilbertSeries {
        if j >= self.modules.len() {
            return HilbertSeries::new(self.nvars, LaurentPoly::zero());
        }
        let c = &self.modules[j];
        if j == 0 {
            return HilbertSeries::free(self.nvars, c.degrees());
        }
        HilbertSeries::from_leading_terms(self.nvars, c.degrees(), &self.image_bases[j - 1].leading_terms())
    }

    /// Exact Hilbert series of Ext^j(M, S) from dimension counting in the dual complex.
    pub fn ext_series(&self, j: usize) -> HilbertSeries {
        if j > self.length() {
            return HilbertSeries::new(self.nvars, LaurentPoly::zero());
        }
        let next = self
            .modules
            .get(j + 1)
            .map_or_else(|| HilbertSeries::new(self.nvars, LaurentPoly::zero()), |c| {
                HilbertSeries::free(self.nvars, c.degrees())
            });
        self.cokernel_series(j).add(&self.cokernel_series(j + 1)).sub(&next)
    }

    /// Presentation of Ext^j(M, S) = ker(d_{j+1}^T) / im(d_j^T).
    pub fn ext_module(&self, j: usize, budget: &Budget) -> Result<GradedModule<K>> {
        if j > self.length() {
            return Ok(GradedModule::free(FreeModule::new(self.nvars, Vec::new())));
        }
        let c = &self.modules[j];
        let (kgens, kdeg): (Vec<ModElem<K>>, Vec<i32>) = if j == self.length() {
            ((0..c.rank()).map(|i| c.unit(i)).collect(), c.degrees().to_vec())
        } else {
            let map = &self.maps[j];
            let gens = syzygy_generators(map.target(), map.columns(), c.degrees(), budget)?;
            let degs = gens.iter().map(|g| g.degree(c).expect("nonzero kernel element")).collect();
            (gens, degs)
        };
        if kgens.is_empty() {
            return Ok(GradedModule::free(FreeModule::new(self.nvars, Vec::new())));
        }
        if j == 0 {
            return GradedModule::from_submodule(c, kgens, budget);
        }
        let prev = &self.maps[j - 1];
        modulo(c, &kgens, &kdeg, prev.columns(), prev.source().degrees(), budget)
    }

    /// Exact vanishing test for Ext^j(M, S).
    pub fn ext_is_zero(&self, j: usize, budget: &Budget) -> Result<bool> {
        if j > self.length() {
            return Ok(true);
        }
        if j == self.length() {
            if j == 0 {
                return Ok(self.modules[0].rank() == 0);
            }
            return Ok(self.image_bases[j - 1].is_everything());
        }
        self.ext_module(j, budget)?.is_zero(budget)
    }
}

/// Presentation of Ext^j(M, S).
pub fn ext_module<K: Field>(m: &GradedModule<K>, j: usize, budget: &Budget) -> Result<GradedModule<K>> {
    let res = minimal_free_resolution(m, budget)?;
    DualComplex::new(&res, budget)?.ext_module(j, budget)
}

/// True iff the presented module is zero.
pub fn module_is_zero<K: Field>(m: &GradedModule<K>, budget: &Budget) -> Result<bool> {
    m.is_zero(budget)
}

/// Hilbert series and vanishing of every Ext^j(M, S), 0 <= j <= number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtProfile {
    nvars: usize,
    series: Vec<HilbertSeries>,
    zero: Vec<bool>,
}

impl ExtProfile {
    /// Computes the profile; each vanishing verdict comes from an exact module test and is
    /// cross-checked against the Hilbert series.
    pub fn compute<K: Field>(res: &Resolution<K>, budget: &Budget) -> Result<Self> {
        let dual = DualComplex::new(res, budget)?;
        let nvars = dual.nvars;
        let mut series = Vec::with_capacity(nvars + 1);
        let mut zero = Vec::with_capacity(nvars + 1);
        for j in 0..=nvars {
            let hs = dual.ext_series(j);
            let z = dual.ext_is_zero(j, budget)?;
            if z != hs.numerator.is_zero() {
                return Err(Error::Invariant(format!(
                    "Ext^{j} vanishing test disagrees with its Hilbert series {hs}"
                )));
            }
            series.push(hs);
            zero.push(z);
        }
        Ok(ExtProfile { nvars, series, zero })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Projective dimension n of the ambient P^n.
    pub fn ambient_dim(&self) -> usize {
        self.nvars - 1
    }

    pub fn series(&self, j: usize) -> &HilbertSeries {
        &self.series[j]
    }

    pub fn is_zero(&self, j: usize) -> bool {
        self.zero.get(j).copied().unwrap_or(true)
    }

    pub fn dim(&self, j: usize, e: i32) -> i64 {
        self.series.get(j).map_or(0, |s| s.hilbert_function(e))
    }

    /// Ext^j has finite length for all j >= 1: the sheaf is locally free.
    pub fn locally_free(&self) -> bool {
        self.series.iter().skip(1).all(|s| s.is_finite_length())
    }

    /// Indices i in [lo, hi] with H^i_* nonzero, i.e. Ext^{n-i} nonzero.
    fn nonvanishing(&self, lo: usize, hi: usize) -> Vec<usize> {
        let n = self.ambient_dim();
        (lo..=hi).filter(|&i| i <= n && !self.is_zero(n - i)).collect()
    }
}

/// Whether a verdict is about a vector bundle or only about the graded module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    Sheaf,
    ModuleLevelOnly,
}

impl Scope {
    fn from_local_freeness(locally_free: bool) -> Self {
        if locally_free {
            Scope::Sheaf
        } else {
            Scope::ModuleLevelOnly
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Scope::Sheaf => "sheaf",
            Scope::ModuleLevelOnly => "module-level only",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitVerdict {
    /// Twists a_i with F = sum O(a_i), when F splits.
    pub twists: Option<Vec<i32>>,
    /// Indices 1 <= i <= n-1 with H^i_*(F) nonzero.
    pub nonvanishing: Vec<usize>,
    pub scope: Scope,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableVerdict {
    pub stably_free: bool,
    /// The range 2 <= i <= n-2 is empty (n <= 3).
    pub vacuous: bool,
    pub nonvanishing: Vec<usize>,
    pub scope: Scope,
}

/// Horrocks: F splits iff H^i_*(F) = 0 for 1 <= i <= n-1.
pub fn horrocks_from_profile<K: Field>(profile: &ExtProfile, res: &Resolution<K>) -> Result<SplitVerdict> {
    let n = profile.ambient_dim();
    let nonvanishing = profile.nonvanishing(1, n.saturating_sub(1));
    let scope = Scope::from_local_freeness(profile.locally_free());
    let twists = if nonvanishing.is_empty() {
        if res.length() != 0 {
            return Err(Error::Invariant(
                "intermediate cohomology vanishes but the module is not free (input not saturated)".into(),
            ));
        }
        let mut t: Vec<i32> = res.free_modules()[0].degrees().iter().map(|d| -d).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        Some(t)
    } else {
        None
    };
    Ok(SplitVerdict {
        twists,
        nonvanishing,
        scope,
    })
}

/// Coanda: F is infinitely stably extendable iff H^i_*(F) = 0 for 2 <= i <= n-2.
pub fn coanda_from_profile(profile: &ExtProfile) -> StableVerdict {
    let n = profile.ambient_dim();
    let vacuous = n <= 3;
    let nonvanishing = if vacuous {
        Vec::new()
    } else {
        profile.nonvanishing(2, n - 2)
    };
    StableVerdict {
        stably_free: nonvanishing.is_empty(),
        vacuous,
        nonvanishing,
        scope: Scope::from_local_freeness(profile.locally_free()),
    }
}

pub fn horrocks_split<K: Field>(m: &GradedModule<K>, budget: &Budget) -> Result<SplitVerdict> {
    let res = minimal_free_resolution(m, budget)?;
    let profile = ExtProfile::compute(&res, budget)?;
    horrocks_from_profile(&profile, &res)
}

pub fn coanda_stably_free<K: Field>(m: &GradedModule<K>, budget: &Budget) -> Result<StableVerdict> {
    let res = minimal_free_resolution(m, budget)?;
    let profile = ExtProfile::compute(&res, budget)?;
    Ok(coanda_from_profile(&profile))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Window {
    /// Exactly [lo, hi].
    Explicit(i32, i32),
    /// [-radius, radius], widened to the support of every finite-length intermediate row.
    Around(i32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyRow {
    pub i: usize,
    /// Whether the whole module H^i_* vanishes; set for 1 <= i <= n-1.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub vanishes: Option<bool>,
    /// h^i(F(d)) for d = window.0 ..= window.1.
    pub dims: Vec<i64>,
}

impl CohomologyRow {
    /// Nonzero entries as (twist, dimension).
    pub fn support(&self, window_lo: i32) -> Vec<(i32, i64)> {
        self.dims
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(k, &v)| (window_lo + k as i32, v))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub n: usize,
    pub window: (i32, i32),
    pub window_note: String,
    pub convention: String,
    /// Rows i = 0..=n.
    pub rows: Vec<CohomologyRow>,
    /// dim M_d over the window.
    pub module_dims: Vec<i64>,
    /// Hilbert polynomial of M over the window.
    pub hilbert_polynomial: Vec<i64>,
    /// sum (-1)^i h^i(F(d)) equals the Hilbert polynomial at every twist of the window.
    pub euler_characteristic_ok: bool,
}

impl CohomologyReport {
    pub fn twists(&self) -> impl Iterator<Item = i32> {
        self.window.0..=self.window.1
    }

    pub fn row(&self, i: usize) -> &CohomologyRow {
        &self.rows[i]
    }

    pub fn h(&self, i: usize, d: i32) -> Option<i64> {
        if d < self.window.0 || d > self.window.1 {
            return None;
        }
        self.rows.get(i).map(|r| r.dims[(d - self.window.0) as usize])
    }

    /// Sparse form of the intermediate rows 1..=n-1, for comparisons across windows.
    pub fn intermediate_support(&self) -> Vec<(usize, Vec<(i32, i64)>)> {
        self.rows
            .iter()
            .filter(|r| r.i >= 1 && r.i < self.n)
            .map(|r| (r.i, r.support(self.window.0)))
            .collect()
    }
}

/// Cohomology table of the sheaf of M over a window of twists.
pub fn cohomology_table<K: Field>(res: &Resolution<K>, profile: &ExtProfile, window: &Window) -> CohomologyReport {
    let n = profile.ambient_dim();
    let nvars = profile.nvars() as i32;
    let (lo, hi, note) = match *window {
        Window::Explicit(a, b) => (a.min(b), a.max(b), format!("explicit window [{}, {}]", a.min(b), a.max(b))),
        Window::Around(r) => {
            let (mut lo, mut hi) = (-r, r);
            for i in 1..n {
                let s = profile.series(n - i);
                let (num, dim) = s.reduced();
                if dim == 0 && !num.is_zero() {
                    // e in [emin, emax] <=> d = -e - n - 1 in [-emax - nvars, -emin - nvars]
                    let emin = num.min_exponent().unwrap();
                    let emax = num.max_exponent().unwrap();
                    lo = lo.min(-emax - nvars);
                    hi = hi.max(-emin - nvars);
                }
            }
            let note = if (lo, hi) == (-r, r) {
                format!("default window [{lo}, {hi}]")
            } else {
                format!("default window [{}, {}] widened to [{lo}, {hi}] to cover the finite-length intermediate rows", -r, r)
            };
            (lo, hi, note)
        }
    };
    let mseries = res.hilbert_series();
    let hp = mseries.hilbert_polynomial();
    let twists: Vec<i32> = (lo..=hi).collect();
    let ext = |j: usize, d: i32| profile.dim(j, -d - nvars);
    let mut rows = Vec::with_capacity(n + 1);
    rows.push(CohomologyRow {
        i: 0,
        vanishes: None,
        dims: twists
            .iter()
            .map(|&d| mseries.hilbert_function(d) - ext(n + 1, d) + ext(n, d))
            .collect(),
    });
    for i in 1..=n {
        rows.push(CohomologyRow {
            i,
            vanishes: (i < n).then(|| profile.is_zero(n - i)),
            dims: twists.iter().map(|&d| ext(n - i, d)).collect(),
        });
    }
    let module_dims: Vec<i64> = twists.iter().map(|&d| mseries.hilbert_function(d)).collect();
    let hilbert_polynomial: Vec<i64> = twists.iter().map(|&d| hp.eval(d as i64)).collect();
    let euler_characteristic_ok = (0..twists.len()).all(|k| {
        let chi: i64 = rows
            .iter()
            .map(|r| if r.i % 2 == 0 { r.dims[k] } else { -r.dims[k] })
            .sum();
        chi == hilbert_polynomial[k]
    });
    CohomologyReport {
        n,
        window: (lo, hi),
        window_note: note,
        convention: DUALITY_CONVENTION.to_string(),
        rows,
        module_dims,
        hilbert_polynomial,
        euler_characteristic_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Poly;
    use crate::Rational;

    fn residue_field(nvars: usize) -> GradedModule<Rational> {
        let f0 = FreeModule::new(nvars, vec![0]);
        let rels = (0..nvars)
            .map(|i| ModElem::from_polys(&f0, &[Poly::var(nvars, i)]))
            .collect();
        GradedModule::new(f0, rels).unwrap()
    }

    fn profile(m: &GradedModule<Rational>) -> (Resolution<Rational>, ExtProfile) {
        let b = Budget::unlimited();
        let res = minimal_free_resolution(m, &b).unwrap();
        let p = ExtProfile::compute(&res, &b).unwrap();
        (res, p)
    }

    #[test]
    fn free_module_has_only_hom() {
        let m = GradedModule::<Rational>::free(FreeModule::new(3, vec![1, 1]));
        let (res, p) = profile(&m);
        assert!(!p.is_zero(0));
        assert!((1..=3).all(|j| p.is_zero(j)));
        let v = horrocks_from_profile(&p, &res).unwrap();
        assert_eq!(v.twists, Some(vec![-1, -1]));
        assert_eq!(v.scope, Scope::Sheaf);
    }

    #[test]
    fn residue_field_ext_concentrated_at_top() {
        let m = residue_field(3);
        let (_, p) = profile(&m);
        let nz: Vec<usize> = (0..=3).filter(|&j| !p.is_zero(j)).collect();
        assert_eq!(nz, vec![3]);
        // Ext^3(k, S) = k(3)
        assert_eq!(p.dim(3, -3), 1);
        assert_eq!(p.dim(3, -2), 0);
    }

    #[test]
    fn ext_presentation_of_residue_field() {
        let m = residue_field(3);
        let b = Budget::unlimited();
        let e3 = ext_module(&m, 3, &b).unwrap();
        assert!(!module_is_zero(&e3, &b).unwrap());
        for j in 0..3 {
            assert!(module_is_zero(&ext_module(&m, j, &b).unwrap(), &b).unwrap(), "Ext^{j}");
        }
    }

    #[test]
    fn residue_field_sheaf_is_zero() {
        let m = residue_field(3);
        let (res, p) = profile(&m);
        let t = cohomology_table(&res, &p, &Window::Around(3));
        assert!(t.euler_characteristic_ok);
        assert!(t.rows.iter().all(|r| r.dims.iter().all(|&v| v == 0)));
        assert_eq!(t.module_dims[3], 1);
    }

    #[test]
    fn cotangent_type_kernel_on_p4() {
        // ker (x0..x4): S^5 -> S(1) has pd 3 and H^1_* != 0, H^2_* = 0.
        let nv = 5;
        let target = FreeModule::new(nv, vec![-1]);
        let source = FreeModule::new(nv, vec![0; nv]);
        let cols = (0..nv)
            .map(|i| ModElem::from_polys(&target, &[Poly::<Rational>::var(nv, i)]))
            .collect();
        let map = GradedMap::new(source, target, cols).unwrap();
        let b = Budget::unlimited();
        let k = crate::algebra::syzygy::kernel(&map, &b).unwrap();
        let (res, p) = profile(&k);
        assert_eq!(res.length(), 3);
        let split = horrocks_from_profile(&p, &res).unwrap();
        assert_eq!(split.twists, None);
        assert_eq!(split.nonvanishing, vec![1]);
        let stable = coanda_from_profile(&p);
        assert!(stable.stably_free && !stable.vacuous);
        let t = cohomology_table(&res, &p, &Window::Around(5));
        assert!(t.euler_characteristic_ok);
    }
}
