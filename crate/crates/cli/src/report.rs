//! Text and machine renderings of reports. Both come from the same in-memory values.

use std::fmt::Write;

use logfree::arrangement::{Arrangement, CatalogEntry};
use logfree::classifier::{Dossier, SaitoCertificate};
use logfree::harness::{Invariance, SearchReport};
use logfree::lattice::{IsoVerdict, Lattice};
use logfree::Field;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "logfree-report/1";

pub struct Output {
    pub command: &'static str,
    pub text: String,
    pub json: Value,
}

impl Output {
    fn new(command: &'static str, text: String, report: impl Serialize) -> Self {
        Output {
            command,
            text,
            json: serde_json::to_value(report).expect("reports serialize"),
        }
    }

    /// The versioned machine document. Object keys come out sorted, so identical runs
    /// are byte-identical and a parse/reserialize round trip is the identity.
    pub fn json_string(&self) -> String {
        let doc = json!({
            "schema": SCHEMA,
            "command": self.command,
            "report": self.json,
        });
        serde_json::to_string_pretty(&doc).expect("reports serialize")
    }
}

/// Polynomial from coefficients of t^0, t^1, ...; highest degree first when `descending`.
pub fn poly_string(coeffs: &[i64], descending: bool) -> String {
    let mut terms: Vec<(usize, i64)> = coeffs.iter().copied().enumerate().filter(|(_, c)| *c != 0).collect();
    if descending {
        terms.reverse();
    }
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (idx, (e, c)) in terms.into_iter().enumerate() {
        let mag = c.unsigned_abs();
        if idx == 0 {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if c < 0 { " - " } else { " + " });
        }
        let mono = match e {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{e}"),
        };
        if mag != 1 || e == 0 {
            s.push_str(&mag.to_string());
        }
        s.push_str(&mono);
    }
    s
}

fn braces(v: &[i32]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn header(d: &Dossier) -> String {
    let a = &d.arrangement;
    let name = a.name.as_deref().map(|n| format!("{n}: ")).unwrap_or_default();
    format!("{name}{{{}}} in P^{} over {}\n", a.forms.join(", "), a.n, d.field)
}

fn notes(out: &mut String, d: &Dossier) {
    for n in &d.notes {
        let _ = writeln!(out, "note: {n}");
    }
}

pub fn free_line(d: &Dossier) -> String {
    if let Some(e) = &d.free.exponents {
        let cert = match &d.free.certificate {
            SaitoCertificate::Certified { c } => format!("Saito det = {c}·f"),
            SaitoCertificate::Inconclusive { reason } => format!("inconclusive ({reason})"),
        };
        format!("FREE, exponents {}, certificate: {cert}", braces(e))
    } else {
        let nz: Vec<String> = d.horrocks.nonvanishing.iter().map(|i| i.to_string()).collect();
        format!(
            "NOT FREE, projective dimension {}, H^i_* nonzero for i in {{{}}}",
            d.projective_dimension,
            nz.join(",")
        )
    }
}

pub fn stable_line(d: &Dossier) -> String {
    let s = &d.stably_free;
    let mut line = if s.vacuous {
        format!("STABLY FREE (vacuous range: n = {} <= 3)", d.arrangement.n)
    } else if s.stably_free {
        format!("STABLY FREE (H^i_* = 0 for 2 <= i <= {})", d.arrangement.n - 2)
    } else {
        let nz: Vec<String> = s.nonvanishing.iter().map(|i| i.to_string()).collect();
        format!("NOT STABLY FREE (H^i_* nonzero for i in {{{}}})", nz.join(","))
    };
    if s.scope != logfree::cohomology::Scope::Sheaf {
        let _ = write!(line, " [{}]", s.scope.label());
    }
    line
}

pub fn lattice<K: Field>(a: &Arrangement<K>, l: &Lattice) -> Output {
    let s = l.summary();
    let mut t = String::new();
    let name = a.name().map(|n| format!("{n}: ")).unwrap_or_default();
    let _ = writeln!(t, "{name}{a}");
    for i in 0..a.k() {
        let _ = writeln!(t, "  {}: {}", i + 1, a.form_to_string(i));
    }
    let _ = writeln!(
        t,
        "{} elements, rank counts {:?}, {}",
        s.elements,
        s.rank_counts,
        if s.essential { "essential" } else { "not essential" }
    );
    let _ = writeln!(t, "characteristic polynomial: {}", poly_string(&s.characteristic_polynomial, true));
    let _ = writeln!(t, "Poincaré polynomial: {}", poly_string(&s.poincare_polynomial, false));
    let _ = writeln!(t, "complement Betti numbers: {:?}", s.complement_betti);
    let _ = writeln!(t, "canonical hash: {}", s.canonical_hash);
    let _ = writeln!(t, "flats (by atoms):");
    t.push_str(&l.to_string());
    let report = json!({
        "arrangement": logfree::classifier::ArrangementEcho::of(a),
        "lattice": s,
        "flats": l.export(),
    });
    Output::new("lattice", t, report)
}

fn module_text(t: &mut String, d: &Dossier) {
    let m = &d.module;
    let _ = writeln!(t, "generators in degrees {:?}:", m.generator_degrees);
    for g in &m.generators {
        let _ = writeln!(t, "  {g}");
    }
    let _ = writeln!(t, "relations in degrees {:?}", m.relation_degrees);
    let _ = writeln!(t, "Betti table:");
    t.push_str(&d.betti.to_string());
    let _ = writeln!(t, "projective dimension: {}", d.projective_dimension);
    let _ = writeln!(t, "locally free: {}", if d.locally_free { "yes" } else { "no" });
}

pub fn module(d: &Dossier) -> Output {
    let mut t = header(d);
    module_text(&mut t, d);
    let report = json!({
        "arrangement": d.arrangement,
        "field": d.field,
        "module": d.module,
        "betti": d.betti,
        "projective_dimension": d.projective_dimension,
        "locally_free": d.locally_free,
    });
    Output::new("module", t, report)
}

pub fn free(d: &Dossier) -> Output {
    let mut t = free_line(d);
    t.push('\n');
    notes(&mut t, d);
    let report = json!({
        "arrangement": d.arrangement,
        "field": d.field,
        "free": d.free,
        "projective_dimension": d.projective_dimension,
        "horrocks": d.horrocks,
        "notes": d.notes,
    });
    Output::new("free", t, report)
}

pub fn stablefree(d: &Dossier) -> Output {
    let mut t = stable_line(d);
    t.push('\n');
    notes(&mut t, d);
    let report = json!({
        "arrangement": d.arrangement,
        "field": d.field,
        "stably_free": d.stably_free,
        "notes": d.notes,
    });
    Output::new("stablefree", t, report)
}

fn cohomology_text(t: &mut String, d: &Dossier) {
    let c = &d.cohomology;
    let twists: Vec<i32> = c.twists().collect();
    let cells = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut rows: Vec<(String, Vec<String>)> = vec![("d".into(), twists.iter().map(|d| d.to_string()).collect())];
    for r in &c.rows {
        rows.push((format!("h^{}", r.i), cells(&r.dims)));
    }
    rows.push(("dim M_d".into(), cells(&c.module_dims)));
    rows.push(("P_M(d)".into(), cells(&c.hilbert_polynomial)));
    let label_w = rows.iter().map(|r| r.0.len()).max().unwrap_or(1);
    let w = rows.iter().flat_map(|r| r.1.iter().map(|s| s.len())).max().unwrap_or(1);
    let _ = writeln!(t, "{}", c.window_note);
    for (label, vals) in &rows {
        let _ = write!(t, "{label:<label_w$}");
        for v in vals {
            let _ = write!(t, " {v:>w$}");
        }
        t.push('\n');
    }
    for r in &c.rows {
        if let Some(v) = r.vanishes {
            let _ = writeln!(t, "H^{}_* {}", r.i, if v { "= 0" } else { "!= 0" });
        }
    }
    let _ = writeln!(
        t,
        "Euler characteristic identity: {}",
        if c.euler_characteristic_ok { "holds at every twist" } else { "FAILS" }
    );
    let _ = writeln!(t, "convention: {}", c.convention);
}

pub fn cohomology(d: &Dossier) -> Output {
    let mut t = header(d);
    cohomology_text(&mut t, d);
    let twists: Vec<i32> = d.cohomology.twists().collect();
    let report = json!({
        "arrangement": d.arrangement,
        "field": d.field,
        "cohomology": d.cohomology,
        "twists": twists,
    });
    Output::new("cohomology", t, report)
}

pub fn classify(d: &Dossier) -> Output {
    let mut t = header(d);
    let l = &d.lattice;
    let _ = writeln!(
        t,
        "lattice: {} elements, rank counts {:?}, hash {}",
        l.elements, l.rank_counts, l.canonical_hash
    );
    let _ = writeln!(t, "characteristic polynomial: {}", poly_string(&l.characteristic_polynomial, true));
    let _ = writeln!(t, "Poincaré polynomial: {}", poly_string(&l.poincare_polynomial, false));
    t.push('\n');
    module_text(&mut t, d);
    t.push('\n');
    let _ = writeln!(t, "{}", free_line(d));
    let _ = writeln!(t, "{}", stable_line(d));
    t.push('\n');
    cohomology_text(&mut t, d);
    if let Some(tm) = &d.timings {
        let _ = writeln!(
            t,
            "timings (ms): lattice {}, module {}, resolution {}, cohomology {}",
            tm.lattice_ms, tm.module_ms, tm.resolution_ms, tm.cohomology_ms
        );
    }
    notes(&mut t, d);
    let twists: Vec<i32> = d.cohomology.twists().collect();
    let mut report = serde_json::to_value(d).expect("dossier serializes");
    report["twists"] = json!(twists);
    Output::new("classify", t, report)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn compare(labels: [&String; 2], ds: [&Dossier; 2], verdict: &IsoVerdict) -> Output {
    let mut t = String::new();
    match verdict {
        IsoVerdict::Isomorphic { atom_map } => {
            let pairs: Vec<String> = atom_map.iter().enumerate().map(|(i, j)| format!("{}->{}", i + 1, j + 1)).collect();
            let _ = writeln!(t, "lattices isomorphic (atom map {})", pairs.join(", "));
        }
        IsoVerdict::NotIsomorphic { reason } => {
            let _ = writeln!(t, "lattices NOT isomorphic ({reason})");
        }
    }
    let free_cell = |d: &Dossier| match &d.free.exponents {
        Some(e) => format!("yes {}", braces(e)),
        None => "no".into(),
    };
    let stable_cell = |d: &Dossier| {
        let mut s = yes_no(d.stably_free.stably_free).to_string();
        if d.stably_free.vacuous {
            s.push_str(" (vacuous)");
        }
        s
    };
    let rows: Vec<(&str, [String; 2])> = vec![
        ("", [labels[0].clone(), labels[1].clone()]),
        ("field", [ds[0].field.clone(), ds[1].field.clone()]),
        ("elements", [ds[0].lattice.elements.to_string(), ds[1].lattice.elements.to_string()]),
        ("rank counts", [format!("{:?}", ds[0].lattice.rank_counts), format!("{:?}", ds[1].lattice.rank_counts)]),
        ("free", [free_cell(ds[0]), free_cell(ds[1])]),
        ("stably free", [stable_cell(ds[0]), stable_cell(ds[1])]),
        (
            "proj. dimension",
            [ds[0].projective_dimension.to_string(), ds[1].projective_dimension.to_string()],
        ),
    ];
    let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    let w1 = rows.iter().map(|r| r.1[0].len()).max().unwrap_or(0);
    for (label, [a, b]) in &rows {
        let _ = writeln!(t, "{label:<w0$}  {a:<w1$}  {b}").map(|_| ());
    }
    let free_agrees = ds[0].is_free() == ds[1].is_free();
    let stable_agrees = ds[0].is_stably_free() == ds[1].is_stably_free();
    if verdict.is_isomorphic() && !free_agrees {
        let _ = writeln!(t, "VIOLATION: isomorphic lattices with different freeness");
    }
    if verdict.is_isomorphic() && !stable_agrees {
        let _ = writeln!(t, "VIOLATION: isomorphic lattices with different stable freeness");
    }
    let side = |label: &String, d: &Dossier| {
        json!({
            "input": label,
            "field": d.field,
            "arrangement": d.arrangement,
            "lattice": d.lattice,
            "free": d.free,
            "stably_free": d.stably_free,
            "projective_dimension": d.projective_dimension,
        })
    };
    let report = json!({
        "isomorphism": verdict,
        "left": side(labels[0], ds[0]),
        "right": side(labels[1], ds[1]),
        "free_agrees": free_agrees,
        "stably_free_agrees": stable_agrees,
    });
    Output::new("compare", t, report)
}

fn invariance_label(i: Invariance) -> &'static str {
    match i {
        Invariance::Consistent => "consistent",
        Invariance::Violation => "VIOLATION",
        Invariance::Inconclusive => "inconclusive",
    }
}

pub fn search(rep: &SearchReport) -> Output {
    let s = &rep.summary;
    let mut t = String::new();
    let ks: Vec<String> = s.ks.iter().map(|k| k.to_string()).collect();
    let _ = writeln!(
        t,
        "search: n = {}, k in {{{}}}, field {}, property {}",
        s.n,
        ks.join(","),
        s.field,
        s.property.label()
    );
    let _ = writeln!(
        t,
        "{} arrangements{}, {} lattice classes: {} consistent, {} VIOLATION, {} inconclusive",
        s.arrangements,
        if s.truncated { " (TRUNCATED at the cap)" } else { "" },
        s.classes,
        s.consistent,
        s.violations,
        s.inconclusive
    );
    if s.undecided_members > 0 {
        let _ = writeln!(t, "{} members undecided (budget exhausted)", s.undecided_members);
    }
    let header = [
        "hash", "k", "rank counts", "members", "free", "not free", "undecided", "free?", "stably free?", "h^i equal",
    ];
    let mut rows: Vec<Vec<String>> = vec![header.iter().map(|h| h.to_string()).collect()];
    for (c, coh) in rep.classes.iter().zip(&rep.cohomology) {
        let equal = if coh.rows.is_empty() {
            "-".to_string()
        } else if coh.rows.iter().all(|r| r.identical) {
            "yes".to_string()
        } else {
            let bad: Vec<String> = coh.rows.iter().filter(|r| !r.identical).map(|r| r.i.to_string()).collect();
            format!("no (i = {})", bad.join(","))
        };
        rows.push(vec![
            c.hash.clone(),
            c.lattice.hyperplanes.to_string(),
            format!("{:?}", c.lattice.rank_counts),
            c.tally.members.to_string(),
            c.tally.free.to_string(),
            c.tally.not_free.to_string(),
            c.tally.undecided.to_string(),
            invariance_label(c.free).to_string(),
            invariance_label(c.stably_free).to_string(),
            equal,
        ]);
    }
    let widths: Vec<usize> = (0..header.len()).map(|j| rows.iter().map(|r| r[j].len()).max().unwrap_or(0)).collect();
    for r in &rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(t, "{}", cells.join("  ").trim_end());
    }
    for (c, coh) in rep.classes.iter().zip(&rep.cohomology) {
        if c.invariance(s.property) != Invariance::Violation {
            continue;
        }
        let _ = writeln!(t, "VIOLATION in class {} ({})", c.hash, s.property.label());
        let yes = c.members.iter().find(|m| m.verdict(s.property) == logfree::harness::Verdict::Yes);
        let no = c.members.iter().find(|m| m.verdict(s.property) == logfree::harness::Verdict::No);
        if let (Some(y), Some(n)) = (yes, no) {
            let _ = writeln!(t, "  {}: {{{}}}", s.property.label(), y.forms.join(", "));
            let _ = writeln!(t, "  not {}: {{{}}}", s.property.label(), n.forms.join(", "));
        }
        if coh.flagged {
            let _ = writeln!(t, "  intermediate cohomology also differs within the class");
        }
    }
    let _ = writeln!(t, "note: {}", s.disclaimer);
    Output::new("search", t, rep)
}

pub fn catalog(entries: &[CatalogEntry]) -> Output {
    let w = entries.iter().map(|e| e.pattern.len()).max().unwrap_or(0);
    let mut t = String::new();
    for e in entries {
        let _ = writeln!(t, "{:<w$}  {}", e.pattern, e.description);
    }
    let report: Vec<Value> = entries
        .iter()
        .map(|e| json!({"pattern": e.pattern, "description": e.description}))
        .collect();
    Output::new("catalog", t, report)
}
