//! The full dossier of an arrangement: lattice, module, resolution, freeness, stable
//! freeness and cohomology.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algebra::groebner::Budget;
use crate::algebra::module::{FreeModule, ModElem};
use crate::algebra::monomial::variable_names;
use crate::algebra::poly::Poly;
use crate::algebra::scalar::Field;
use crate::arrangement::Arrangement;
use crate::cohomology::{
    coanda_from_profile, cohomology_table, horrocks_from_profile, CohomologyReport, ExtProfile, Scope,
    SplitVerdict, StableVerdict, Window,
};
use crate::error::{Error, Result};
use crate::lattice::{intersection_lattice, LatticeSummary};
use crate::resolution::{resolve_minimal, BettiTable, GradedModule};

pub const EXPONENT_CONVENTION: &str =
    "exponents are the degrees d_i of minimal generators of the kernel of the Jacobian row; T_A = sum O(-d_i)";

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    /// Maximum number of S-pairs, shared by every Gröbner basis computation of one
    /// classification.
    pub max_pairs: Option<u64>,
    pub window: Option<(i32, i32)>,
    pub timings: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementEcho {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    pub n: usize,
    pub k: usize,
    pub forms: Vec<String>,
    pub coefficients: Vec<Vec<String>>,
    pub rank: usize,
}

impl ArrangementEcho {
    pub fn of<K: Field>(a: &Arrangement<K>) -> Self {
        ArrangementEcho {
            name: a.name().map(str::to_string),
            n: a.n(),
            k: a.k(),
            forms: (0..a.k()).map(|i| a.form_to_string(i)).collect(),
            coefficients: a
                .forms()
                .iter()
                .map(|f| f.iter().map(|c| c.to_string()).collect())
                .collect(),
            rank: a.rank(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleStats {
    pub generator_degrees: Vec<i32>,
    pub relation_degrees: Vec<i32>,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SaitoCertificate {
    /// det(E, theta_1, ..., theta_n) = c * f with c a nonzero scalar.
    Certified { c: String },
    Inconclusive { reason: String },
}

impl SaitoCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, SaitoCertificate::Certified { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeVerdict {
    pub free: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exponents: Option<Vec<i32>>,
    pub certificate: SaitoCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub lattice_ms: u64,
    pub module_ms: u64,
    pub resolution_ms: u64,
    pub cohomology_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dossier {
    pub field: String,
    pub arrangement: ArrangementEcho,
    pub lattice: LatticeSummary,
    pub module: ModuleStats,
    pub betti: BettiTable,
    pub projective_dimension: usize,
    pub locally_free: bool,
    pub free: FreeVerdict,
    pub horrocks: SplitVerdict,
    pub stably_free: StableVerdict,
    pub cohomology: CohomologyReport,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<Timings>,
}

impl Dossier {
    pub fn is_free(&self) -> bool {
        self.free.free
    }

    pub fn is_stably_free(&self) -> bool {
        self.stably_free.stably_free
    }
}

/// Determinant of a square matrix of polynomials by Laplace expansion along rows, memoized
/// on the set of remaining columns.
pub fn poly_determinant<K: Field>(m: &[Vec<Poly<K>>], nvars: usize) -> Poly<K> {
    let size = m.len();
    if size == 0 {
        return Poly::one(nvars);
    }
    let mut memo: std::collections::HashMap<u32, Poly<K>> = std::collections::HashMap::new();
    fn go<K: Field>(
        m: &[Vec<Poly<K>>],
        row: usize,
        cols: u32,
        nvars: usize,
        memo: &mut std::collections::HashMap<u32, Poly<K>>,
    ) -> Poly<K> {
        if row == m.len() {
            return Poly::one(nvars);
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Poly::zero(nvars);
        let mut sign_pos = true;
        for c in 0..m.len() {
            if cols >> c & 1 == 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let minor = go(m, row + 1, cols & !(1 << c), nvars, memo);
                let term = m[row][c].mul(&minor);
                acc = if sign_pos { acc.add(&term) } else { acc.sub(&term) };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    go(m, 0, (1u32 << size) - 1, nvars, &mut memo)
}

/// Saito's criterion: with E the Euler field and theta_1..theta_n candidate kernel elements,
/// det(E, theta_1, ..., theta_n) = c * f for a nonzero scalar c certifies freeness.
pub fn saito_check<K: Field>(a: &Arrangement<K>, thetas: &[Vec<Poly<K>>]) -> SaitoCertificate {
    let nv = a.nvars();
    if thetas.len() != a.n() {
        return SaitoCertificate::Inconclusive {
            reason: format!("{} generators given, {} needed", thetas.len(), a.n()),
        };
    }
    let mut cols: Vec<Vec<Poly<K>>> = vec![(0..nv).map(|i| Poly::var(nv, i)).collect()];
    cols.extend(thetas.iter().cloned());
    let rows: Vec<Vec<Poly<K>>> = (0..nv).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let det = poly_determinant(&rows, nv);
    if det.is_zero() {
        return SaitoCertificate::Inconclusive {
            reason: "determinant is zero".into(),
        };
    }
    let f = a.defining_polynomial();
    let (Some((dm, dc)), Some((fm, fc))) = (det.leading_term(), f.leading_term()) else {
        unreachable!("both nonzero")
    };
    if dm != fm {
        return SaitoCertificate::Inconclusive {
            reason: "determinant is not a multiple of f".into(),
        };
    }
    let c = dc.clone() / fc.clone();
    if det == f.scale(&c) {
        SaitoCertificate::Certified { c: c.to_string() }
    } else {
        SaitoCertificate::Inconclusive {
            reason: "determinant is not a multiple of f".into(),
        }
    }
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// Builds the dossier of an arrangement. Budget exhaustion is returned as
/// [`Error::BudgetExhausted`], never as a verdict.
pub fn classify<K: Field>(a: &Arrangement<K>, opts: &ClassifyOptions) -> Result<Dossier> {
    classify_with_lattice(a, opts, None)
}

/// [`classify`] reusing an already computed lattice summary.
pub fn classify_with_lattice<K: Field>(
    a: &Arrangement<K>,
    opts: &ClassifyOptions,
    lattice: Option<LatticeSummary>,
) -> Result<Dossier> {
    let budget = match opts.max_pairs {
        Some(p) => Budget::with_max_pairs(p),
        None => Budget::unlimited(),
    };
    let n = a.n();
    let k = a.k();
    let nv = a.nvars();
    let t0 = Instant::now();
    let lattice = match lattice {
        Some(l) => l,
        None => intersection_lattice(a)?.summary(),
    };
    let lattice_ms = ms(t0);

    let t1 = Instant::now();
    let module: GradedModule<K> = a.log_tangent_module(&budget)?.minimize(&budget)?;
    let ambient = FreeModule::new(nv, vec![0; nv]);
    let images: Vec<ModElem<K>> = module.ambient_images().map(|s| s.to_vec()).unwrap_or_default();
    let jac = a.jacobian_map();
    if images.iter().any(|g| !jac.apply(g).is_zero()) {
        return Err(Error::Invariant("kernel generator does not annihilate the Jacobian row".into()));
    }
    let names = variable_names(nv);
    let stats = ModuleStats {
        generator_degrees: module.generator_degrees().to_vec(),
        relation_degrees: module.relation_degrees(),
        generators: images
            .iter()
            .map(|g| {
                let parts: Vec<String> = g.to_polys(&ambient).iter().map(|p| p.to_string_with(&names)).collect();
                format!("({})", parts.join(", "))
            })
            .collect(),
    };
    let module_ms = ms(t1);

    let t2 = Instant::now();
    let res = resolve_minimal(&module, &budget)?;
    let resolution_ms = ms(t2);

    let t3 = Instant::now();
    let profile = ExtProfile::compute(&res, &budget)?;
    let horrocks = horrocks_from_profile(&profile, &res)?;
    let stable = coanda_from_profile(&profile);
    let locally_free = profile.locally_free();
    let window = match opts.window {
        Some((lo, hi)) => Window::Explicit(lo, hi),
        None => Window::Around((k + n) as i32),
    };
    let cohomology = cohomology_table(&res, &profile, &window);
    let cohomology_ms = ms(t3);

    let free = res.length() == 0;
    if free != horrocks.twists.is_some() {
        return Err(Error::Invariant(
            "projective dimension and intermediate cohomology disagree on freeness".into(),
        ));
    }
    if free && !stable.stably_free {
        return Err(Error::Invariant("free arrangement reported not stably free".into()));
    }
    if !cohomology.euler_characteristic_ok {
        return Err(Error::Invariant("Euler characteristic identity fails".into()));
    }
    let mut notes = Vec::new();
    let exponents = free.then(|| {
        let mut e = module.generator_degrees().to_vec();
        e.sort_unstable();
        e
    });
    let certificate = if free {
        let thetas: Vec<Vec<Poly<K>>> = images.iter().map(|g| g.to_polys(&ambient)).collect();
        saito_check(a, &thetas)
    } else {
        SaitoCertificate::Inconclusive {
            reason: format!(
                "the module needs {} generators, more than n = {n}",
                module.generator_degrees().len()
            ),
        }
    };
    if let Some(e) = &exponents {
        let sum: i32 = e.iter().sum();
        if sum != k as i32 - 1 {
            if K::characteristic() == 0 {
                return Err(Error::Invariant(format!("exponents {e:?} do not sum to k - 1 = {}", k - 1)));
            }
            notes.push(format!(
                "exponents sum to {sum}, not k - 1 = {} (possible in characteristic {})",
                k - 1,
                K::characteristic()
            ));
        }
        if !certificate.is_certified() {
            if K::characteristic() == 0 {
                return Err(Error::Invariant("free module without a Saito certificate".into()));
            }
            notes.push(format!(
                "Saito determinant inconclusive in characteristic {}",
                K::characteristic()
            ));
        }
    }
    if K::characteristic() != 0 && (k as u64).is_multiple_of(K::characteristic()) {
        notes.push(format!(
            "characteristic {} divides k = {k}: the Euler field lies in the kernel",
            K::characteristic()
        ));
    }
    if stable.vacuous {
        notes.push("stably free: vacuous range (n <= 3, the condition 2 <= i <= n-2 is empty)".into());
    }
    if stable.scope == Scope::ModuleLevelOnly {
        notes.push("sheaf not locally free: freeness verdicts are module-level only".into());
    }
    if K::characteristic() != 0 {
        notes.push(format!(
            "computed over {}; this does not certify the characteristic-zero answer",
            K::label()
        ));
    }
    notes.push(EXPONENT_CONVENTION.into());
    Ok(Dossier {
        field: K::label(),
        arrangement: ArrangementEcho::of(a),
        lattice,
        module: stats,
        betti: res.betti(),
        projective_dimension: res.length(),
        locally_free,
        free: FreeVerdict {
            free,
            exponents,
            certificate,
        },
        horrocks,
        stably_free: stable,
        cohomology,
        notes,
        timings: opts.timings.then_some(Timings {
            lattice_ms,
            module_ms,
            resolution_ms,
            cohomology_ms,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::catalog;
    use crate::Rational;

    fn dossier(name: &str) -> Dossier {
        let a = catalog(name).unwrap().instantiate::<Rational>().unwrap();
        classify(&a, &ClassifyOptions::default()).unwrap()
    }

    #[test]
    fn boolean_triple() {
        let d = dossier("boolean-2");
        assert!(d.is_free());
        assert_eq!(d.free.exponents, Some(vec![1, 1]));
        assert!(d.free.certificate.is_certified());
        assert!(d.is_stably_free() && d.stably_free.vacuous);
        assert!(d.locally_free);
    }

    #[test]
    fn concurrent_triple() {
        let d = dossier("concurrent-3");
        assert_eq!(d.free.exponents, Some(vec![0, 2]));
        assert!(d.free.certificate.is_certified());
    }

    #[test]
    fn generic_four_lines() {
        let d = dossier("generic-4-2");
        assert!(!d.is_free());
        assert_eq!(d.projective_dimension, 1);
        assert!(d.is_stably_free());
        assert!(d.locally_free);
        assert!(d.cohomology.rows[1].dims.iter().any(|&v| v != 0));
    }

    #[test]
    fn saito_by_hand() {
        let a = catalog("boolean-2").unwrap().instantiate::<Rational>().unwrap();
        let (x, y, z) = (Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2));
        let zero = Poly::zero(3);
        let t1 = vec![x.clone(), y.neg(), zero.clone()];
        let t2 = vec![zero, y, z.neg()];
        assert_eq!(
            saito_check(&a, &[t1, t2]),
            SaitoCertificate::Certified { c: "3".into() }
        );
    }
}
