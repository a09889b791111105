//! Finite prefixes of graph and triple families, and the checks that tie a
//! graph to its cohomology triple.
//!
//! Expansion is a property of an infinite family. A report over finitely many
//! members can refute it (a zero Cheeger constant, a valence over the bound)
//! but never establish it, and the verdict vocabulary says exactly that.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::budget::Budgets;
use crate::field::{format_rational, rational_to_f64, FieldError, FieldSpec, PrimeField};
use crate::graph::{cheeger_graph_exact, spectral_cheeger_bounds, GraphError, SimplicialGraph, SpectralBounds};
use crate::pairing::{
    cheeger_constant_coordinate, cheeger_constant_exhaustive, is_pairing_connected_exhaustive, q_valence_coordinate,
    q_valence_exhaustive, DynTriple, PairingError,
};
use crate::raag::{build_triple, max_centralizer_rank, RaagError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Raag(#[from] RaagError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{0}")]
    Precondition(String),
}

/// A Cheeger constant as recorded in a report.
#[derive(Debug, Clone, PartialEq)]
pub enum CheegerValue {
    Exact(BigRational),
    /// Graph too large for exact search; only the spectral interval is known.
    Spectral(SpectralBounds),
    /// Fewer than two vertices (or `dim V < 2`).
    Undefined,
    /// Not computed, with the reason (usually an exceeded budget).
    Unavailable(String),
}

impl CheegerValue {
    fn is_zero(&self) -> bool {
        matches!(self, CheegerValue::Exact(h) if h.is_zero())
    }

    /// A value known to be at most the true constant.
    fn lower(&self) -> Option<Bound> {
        match self {
            CheegerValue::Exact(h) => Some(Bound::Exact(h.clone())),
            CheegerValue::Spectral(b) => Some(Bound::Float(b.lower)),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CheegerValue::Exact(h) => json!(format_rational(h)),
            CheegerValue::Spectral(b) => json!({ "lower": b.lower, "upper": b.upper, "lambda2": b.lambda2 }),
            CheegerValue::Undefined => json!("undefined"),
            CheegerValue::Unavailable(why) => json!({ "unavailable": why }),
        }
    }
}

impl fmt::Display for CheegerValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheegerValue::Exact(h) => f.write_str(&format_rational(h)),
            CheegerValue::Spectral(b) => write!(f, "bound [{:.6}, {:.6}]", b.lower, b.upper),
            CheegerValue::Undefined => f.write_str("undefined"),
            CheegerValue::Unavailable(_) => f.write_str("unavailable"),
        }
    }
}

/// Lower bound on a prefix infimum: exact while every entry is exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    Exact(BigRational),
    Float(f64),
}

impl Bound {
    fn as_f64(&self) -> f64 {
        match self {
            Bound::Exact(r) => rational_to_f64(r),
            Bound::Float(x) => *x,
        }
    }

    fn min(self, other: Bound) -> Bound {
        match (self, other) {
            (Bound::Exact(a), Bound::Exact(b)) => Bound::Exact(a.min(b)),
            (a, b) => Bound::Float(a.as_f64().min(b.as_f64())),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Bound::Exact(r) => json!(format_rational(r)),
            Bound::Float(x) => json!({ "lower_bound": x }),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(r) => f.write_str(&format_rational(r)),
            Bound::Float(x) => write!(f, "bound {x:.6}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QValence {
    Exhaustive(usize),
    /// Value in the distinguished basis; only an upper bound in general.
    Coordinate(usize),
}

impl QValence {
    fn exact(&self) -> Option<usize> {
        match self {
            QValence::Exhaustive(d) => Some(*d),
            QValence::Coordinate(_) => None,
        }
    }

    fn value(&self) -> usize {
        match self {
            QValence::Exhaustive(d) | QValence::Coordinate(d) => *d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ConsistentWithExpander,
    NotExpander,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ConsistentWithExpander => "consistent-with-expander",
            Verdict::NotExpander => "not-expander",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// One family member. Graph reports fill the graph columns, triple reports
/// the triple columns, and graph-with-triple reports both.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyEntry {
    pub index: usize,
    pub field: Option<FieldSpec>,
    pub vertices: Option<usize>,
    pub dim_v: Option<usize>,
    pub valence: Option<usize>,
    pub q_valence: Option<QValence>,
    pub h_graph: Option<CheegerValue>,
    pub h_triple: Option<CheegerValue>,
    /// How the Cheeger values were obtained.
    pub method: String,
    /// Graph and triple values agree, when both were computed.
    pub checks_passed: Option<bool>,
}

impl FamilyEntry {
    fn new(index: usize) -> Self {
        FamilyEntry {
            index,
            field: None,
            vertices: None,
            dim_v: None,
            valence: None,
            q_valence: None,
            h_graph: None,
            h_triple: None,
            method: String::new(),
            checks_passed: None,
        }
    }

    fn values(&self) -> impl Iterator<Item = &CheegerValue> {
        self.h_graph.iter().chain(&self.h_triple)
    }

    /// The valence that enters the bounded-valence condition, if known exactly.
    fn exact_valence(&self) -> Option<usize> {
        self.valence.or(self.q_valence.and_then(|q| q.exact()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index,
            "field": self.field.map(|f| f.to_string()),
            "n": self.vertices,
            "dimV": self.dim_v,
            "valence": self.valence,
            "qvalence": self.q_valence.map(|q| match q {
                QValence::Exhaustive(d) => json!({ "value": d, "method": "exhaustive" }),
                QValence::Coordinate(d) => json!({ "value": d, "method": "coordinate-upper-bound" }),
            }),
            "h_graph": self.h_graph.as_ref().map(CheegerValue::to_json),
            "h_triple": self.h_triple.as_ref().map(CheegerValue::to_json),
            "method": self.method,
            "checks_passed": self.checks_passed,
        })
    }

    /// Cells in the order of [`CSV_HEADER`].
    pub fn csv_row(&self) -> Vec<String> {
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        let h = |x: &Option<CheegerValue>| x.as_ref().map(|v| v.to_string()).unwrap_or_default();
        vec![
            self.index.to_string(),
            opt(self.vertices),
            opt(self.dim_v),
            opt(self.valence),
            match self.q_valence {
                Some(QValence::Exhaustive(d)) => d.to_string(),
                Some(QValence::Coordinate(d)) => format!("<={d}"),
                None => String::new(),
            },
            h(&self.h_graph),
            h(&self.h_triple),
            self.method.clone(),
            self.checks_passed.map(|b| b.to_string()).unwrap_or_default(),
        ]
    }
}

pub const CSV_HEADER: [&str; 9] = [
    "index",
    "n",
    "dimV",
    "valence",
    "qvalence",
    "h_graph",
    "h_triple",
    "method",
    "checks_passed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub entries: Vec<FamilyEntry>,
    /// Minimum of the recorded Cheeger values (spectral lower bounds where exact values are missing).
    pub prefix_infimum: Option<Bound>,
    /// Largest exactly known valence or q-valence.
    pub max_valence_seen: Option<usize>,
    /// The configured valence bound, if any.
    pub valence_bound: Option<usize>,
    /// Vertex counts or dimensions grow strictly along the prefix.
    pub sizes_increasing: bool,
    pub verdict: Verdict,
    pub note: String,
}

const PREFIX_NOTE: &str = "a finite prefix cannot establish expansion; no violation was found among the listed members";

impl FamilyReport {
    fn assemble(entries: Vec<FamilyEntry>, valence_bound: Option<usize>) -> Self {
        let prefix_infimum = entries
            .iter()
            .flat_map(|e| e.values().filter_map(CheegerValue::lower))
            .reduce(Bound::min);
        let max_valence_seen = entries.iter().filter_map(FamilyEntry::exact_valence).max();
        let sizes: Vec<usize> = entries.iter().filter_map(|e| e.vertices.or(e.dim_v)).collect();
        let sizes_increasing = sizes.windows(2).all(|w| w[0] < w[1]);
        let (verdict, note) = if let Some(e) = entries.iter().find(|e| e.values().any(CheegerValue::is_zero)) {
            (
                Verdict::NotExpander,
                format!("member {} has Cheeger constant 0", e.index),
            )
        } else if let Some(e) =
            valence_bound.and_then(|b| entries.iter().find(|e| e.exact_valence().is_some_and(|v| v > b)))
        {
            (
                Verdict::NotExpander,
                format!(
                    "member {} exceeds the valence bound {}",
                    e.index,
                    valence_bound.unwrap_or_default()
                ),
            )
        } else if let Some(e) = entries
            .iter()
            .find(|e| e.values().any(|v| matches!(v, CheegerValue::Unavailable(_))) || e.values().next().is_none())
        {
            (
                Verdict::Inconclusive,
                format!("member {} has no Cheeger value", e.index),
            )
        } else if let Some(e) = valence_bound.and_then(|b| {
            entries
                .iter()
                .find(|e| e.exact_valence().is_none() && e.q_valence.is_some_and(|q| q.value() > b))
        }) {
            (
                Verdict::Inconclusive,
                format!("member {} has only a q-valence upper bound above the bound", e.index),
            )
        } else {
            (Verdict::ConsistentWithExpander, PREFIX_NOTE.to_string())
        };
        FamilyReport {
            entries,
            prefix_infimum,
            max_valence_seen,
            valence_bound,
            sizes_increasing,
            verdict,
            note,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "entries": self.entries.iter().map(FamilyEntry::to_json).collect::<Vec<_>>(),
            "prefix_infimum": self.prefix_infimum.as_ref().map(Bound::to_json),
            "max_valence_seen": self.max_valence_seen,
            "valence_bound": self.valence_bound,
            "sizes_increasing": self.sizes_increasing,
            "verdict": self.verdict.to_string(),
            "note": self.note,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphMode {
    /// Exact search where the subset budget allows, spectral bounds elsewhere.
    Exact,
    Spectral,
}

fn graph_cheeger(g: &SimplicialGraph, mode: GraphMode, budgets: &Budgets) -> (CheegerValue, &'static str) {
    if g.vertex_count() < 2 {
        return (CheegerValue::Undefined, "none");
    }
    if mode == GraphMode::Exact {
        match cheeger_graph_exact(g, budgets.subsets) {
            Ok(r) => return (CheegerValue::Exact(r.value), "exact"),
            Err(GraphError::Budget(_) | GraphError::TooLarge(_)) => {}
            Err(e) => return (CheegerValue::Unavailable(e.to_string()), "exact"),
        }
    }
    if !g.is_connected() {
        // some component has at most half the vertices and no boundary
        return (CheegerValue::Exact(BigRational::zero()), "connectivity");
    }
    match spectral_cheeger_bounds(g) {
        Ok(b) => (CheegerValue::Spectral(b), "spectral"),
        Err(e) => (CheegerValue::Unavailable(e.to_string()), "spectral"),
    }
}

/// Per graph: vertex count, maximum valence and Cheeger constant.
pub fn graph_family_report(
    graphs: &[SimplicialGraph],
    mode: GraphMode,
    budgets: &Budgets,
    valence_bound: Option<usize>,
) -> FamilyReport {
    let entries = graphs
        .par_iter()
        .enumerate()
        .map(|(index, g)| {
            let (h, method) = graph_cheeger(g, mode, budgets);
            FamilyEntry {
                vertices: Some(g.vertex_count()),
                valence: Some(g.max_valence()),
                h_graph: Some(h),
                method: method.to_string(),
                ..FamilyEntry::new(index)
            }
        })
        .collect();
    FamilyReport::assemble(entries, valence_bound)
}

fn triple_entry(index: usize, t: &DynTriple, budgets: &Budgets) -> FamilyEntry {
    let mut e = FamilyEntry {
        field: Some(t.field_spec()),
        dim_v: Some(t.dim_v()),
        method: "exhaustive".to_string(),
        ..FamilyEntry::new(index)
    };
    let finite = t.finite();
    e.q_valence = Some(
        match finite.as_ref().ok().map(|t| q_valence_exhaustive(t, budgets.bases)) {
            Some(Ok(r)) => QValence::Exhaustive(r.value),
            _ => QValence::Coordinate(t.q_valence_coordinate()),
        },
    );
    e.h_triple = Some(match finite {
        Err(err) => CheegerValue::Unavailable(err.to_string()),
        Ok(t) => match cheeger_constant_exhaustive(t, budgets.subspaces) {
            Ok(r) => CheegerValue::Exact(r.value),
            Err(PairingError::Undefined(_)) => CheegerValue::Undefined,
            Err(err) => CheegerValue::Unavailable(err.to_string()),
        },
    });
    e
}

/// Per triple: `dim V`, q-valence (exhaustive within the basis budget, else the
/// distinguished-basis upper bound, labeled as such) and `h_V`. Budget overruns
/// are recorded in the entry. Fields may differ between members.
pub fn triple_family_report(triples: &[DynTriple], budgets: &Budgets, valence_bound: Option<usize>) -> FamilyReport {
    let entries = triples
        .par_iter()
        .enumerate()
        .map(|(index, t)| triple_entry(index, t, budgets))
        .collect();
    FamilyReport::assemble(entries, valence_bound)
}

/// Graph columns and the columns of each graph's cohomology triple over
/// `field`; `checks_passed` records `h_graph = h_triple` and `valence = qvalence`.
pub fn graph_triple_family_report(
    graphs: &[SimplicialGraph],
    field: FieldSpec,
    mode: GraphMode,
    budgets: &Budgets,
    valence_bound: Option<usize>,
) -> Result<FamilyReport, FamilyError> {
    let entries = graphs
        .par_iter()
        .enumerate()
        .map(|(index, g)| {
            let (triple, _) = crate::raag::build_triple_dyn(g, field)?;
            let mut e = triple_entry(index, &triple, budgets);
            let (h, method) = graph_cheeger(g, mode, budgets);
            e.vertices = Some(g.vertex_count());
            e.valence = Some(g.max_valence());
            e.method = format!("{method}+exhaustive");
            let h_ok = match (&h, &e.h_triple) {
                (CheegerValue::Exact(a), Some(CheegerValue::Exact(b))) => Some(a == b),
                (CheegerValue::Undefined, Some(CheegerValue::Undefined)) => Some(true),
                _ => None,
            };
            let d_ok = e.q_valence.and_then(|q| q.exact()).map(|d| d == g.max_valence());
            e.checks_passed = match (h_ok, d_ok) {
                (Some(a), Some(b)) => Some(a && b),
                (Some(false), _) | (_, Some(false)) => Some(false),
                _ => None,
            };
            e.h_graph = Some(h);
            Ok(e)
        })
        .collect::<Result<Vec<_>, FamilyError>>()?;
    Ok(FamilyReport::assemble(entries, valence_bound))
}

/// A failed check on one family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub index: usize,
    pub check: &'static str,
    pub detail: String,
}

/// Outcome of a verification run over a family.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verification {
    /// Members examined.
    pub checked: usize,
    /// Members with at least one failed check.
    pub failed: usize,
    /// Individual checks evaluated.
    pub checks: usize,
    pub failures: Vec<CheckFailure>,
}

impl Verification {
    fn from_results(results: Vec<(usize, Vec<CheckFailure>)>) -> Self {
        let mut v = Verification {
            checked: results.len(),
            ..Default::default()
        };
        for (checks, failures) in results {
            v.checks += checks;
            if !failures.is_empty() {
                v.failed += 1;
            }
            v.failures.extend(failures);
        }
        v
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// `{"checked", "failed"}`, plus `"failures"` when there are any.
    pub fn to_json(&self) -> Value {
        let mut v = json!({ "checked": self.checked, "failed": self.failed });
        if !self.failures.is_empty() {
            v["failures"] = self
                .failures
                .iter()
                .map(|f| json!({ "index": f.index, "check": f.check, "detail": f.detail }))
                .collect();
        }
        v
    }
}

struct Checker {
    index: usize,
    checks: usize,
    failures: Vec<CheckFailure>,
}

impl Checker {
    fn new(index: usize) -> Self {
        Checker {
            index,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(CheckFailure {
                index: self.index,
                check: name,
                detail: detail(),
            });
        }
    }

    fn finish(self) -> (usize, Vec<CheckFailure>) {
        (self.checks, self.failures)
    }
}

fn prime(field: FieldSpec) -> Result<PrimeField, FamilyError> {
    match field {
        FieldSpec::Prime(p) => Ok(PrimeField::new(p)?),
        FieldSpec::Rational => Err(PairingError::NonEnumerable(field).into()),
    }
}

fn optional<T>(r: Result<T, PairingError>) -> Result<Option<T>, FamilyError> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(PairingError::Undefined(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn show(h: &Option<BigRational>) -> String {
    h.as_ref().map_or("undefined".to_string(), format_rational)
}

/// For each graph and its triple over `field`:
/// `h_graph = h_V` (and = the coordinate-subspace value), `dim V = |Vert|`,
/// max centralizer rank `= d(V) + 1`, and pairing-connected iff connected.
/// Every computation is exhaustive; a budget overrun is an error.
pub fn verify_main_theorem(
    graphs: &[SimplicialGraph],
    field: FieldSpec,
    budgets: &Budgets,
) -> Result<Verification, FamilyError> {
    let f = prime(field)?;
    let results = graphs
        .par_iter()
        .enumerate()
        .map(|(index, g)| {
            let mut c = Checker::new(index);
            let t = build_triple(g, f).into_triple();
            let h_graph = match cheeger_graph_exact(g, budgets.subsets) {
                Ok(r) => Some(r.value),
                Err(GraphError::CheegerUndefined(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let h_triple = optional(cheeger_constant_exhaustive(&t, budgets.subspaces))?.map(|r| r.value);
            let h_coord = optional(cheeger_constant_coordinate(&t, budgets.subsets))?.map(|r| r.value);
            c.check("h_graph = h_V", h_graph == h_triple, || {
                format!("h_graph = {}, h_V = {}", show(&h_graph), show(&h_triple))
            });
            c.check("h_V = coordinate h", h_triple == h_coord, || {
                format!("h_V = {}, coordinate = {}", show(&h_triple), show(&h_coord))
            });
            c.check("dim V = |Vert|", t.dim_v() == g.vertex_count(), || {
                format!("dim V = {}, |Vert| = {}", t.dim_v(), g.vertex_count())
            });
            let d = q_valence_exhaustive(&t, budgets.bases)?.value;
            if g.vertex_count() > 0 {
                let r = max_centralizer_rank(g)?;
                c.check("max centralizer rank = d(V) + 1", r == d + 1, || {
                    format!("max centralizer rank = {r}, d(V) = {d}")
                });
            }
            let pc = is_pairing_connected_exhaustive(&t, budgets.subspaces)?.connected;
            c.check("pairing-connected iff connected", pc == g.is_connected(), || {
                format!("pairing-connected = {pc}, connected = {}", g.is_connected())
            });
            Ok(c.finish())
        })
        .collect::<Result<Vec<_>, FamilyError>>()?;
    Ok(Verification::from_results(results))
}

/// For each graph's triple `T` over `field` and its augmentation `T'` at the first basis vector:
/// `h(T') >= h(T)`, `d'(T') <= d'(T) + 1` for distinguished-basis valences, and
/// `T` alternating while `T'` is not.
pub fn verify_augmentation(
    graphs: &[SimplicialGraph],
    field: FieldSpec,
    budgets: &Budgets,
) -> Result<Verification, FamilyError> {
    let f = prime(field)?;
    let results = graphs
        .par_iter()
        .enumerate()
        .map(|(index, g)| {
            if g.vertex_count() == 0 {
                return Err(FamilyError::Precondition(format!(
                    "graph {index} has no vertex to augment at"
                )));
            }
            let mut c = Checker::new(index);
            let t = build_triple(g, f).into_triple();
            let a = t.augment(0)?;
            let h = optional(cheeger_constant_exhaustive(&t, budgets.subspaces))?.map(|r| r.value);
            let ha = optional(cheeger_constant_exhaustive(&a, budgets.subspaces))?.map(|r| r.value);
            c.check("h' >= h", ha >= h, || format!("h = {}, h' = {}", show(&h), show(&ha)));
            let (d, da) = (q_valence_coordinate(&t), q_valence_coordinate(&a));
            c.check("d' <= d + 1", da <= d + 1, || format!("d = {d}, d' = {da}"));
            let (alt, alt_a) = (t.is_alternating(), a.is_alternating());
            c.check("alternating flips", alt && !alt_a, || {
                format!("original alternating = {alt}, augmented alternating = {alt_a}")
            });
            Ok(c.finish())
        })
        .collect::<Result<Vec<_>, FamilyError>>()?;
    Ok(Verification::from_results(results))
}

/// `h_V`, `d(V)` and pairing-connectedness of each graph's triple agree across `fields`.
pub fn field_invariance_check(
    graphs: &[SimplicialGraph],
    fields: &[FieldSpec],
    budgets: &Budgets,
) -> Result<Verification, FamilyError> {
    let fields: Vec<PrimeField> = fields.iter().map(|&f| prime(f)).collect::<Result<_, _>>()?;
    let results = graphs
        .par_iter()
        .enumerate()
        .map(|(index, g)| {
            let mut c = Checker::new(index);
            let mut seen: Vec<(u32, Option<BigRational>, usize, bool)> = Vec::new();
            for &f in &fields {
                let t = build_triple(g, f).into_triple();
                let h = optional(cheeger_constant_exhaustive(&t, budgets.subspaces))?.map(|r| r.value);
                let d = q_valence_exhaustive(&t, budgets.bases)?.value;
                let pc = is_pairing_connected_exhaustive(&t, budgets.subspaces)?.connected;
                seen.push((f.modulus(), h, d, pc));
            }
            if let Some((p0, h0, d0, pc0)) = seen.first().cloned() {
                for (p, h, d, pc) in &seen[1..] {
                    c.check("h_V field-independent", *h == h0, || {
                        format!("GF({p0}): {}, GF({p}): {}", show(&h0), show(h))
                    });
                    c.check("d(V) field-independent", *d == d0, || {
                        format!("GF({p0}): {d0}, GF({p}): {d}")
                    });
                    c.check("pairing-connectedness field-independent", *pc == pc0, || {
                        format!("GF({p0}): {pc0}, GF({p}): {pc}")
                    });
                }
            }
            Ok(c.finish())
        })
        .collect::<Result<Vec<_>, FamilyError>>()?;
    Ok(Verification::from_results(results))
}
