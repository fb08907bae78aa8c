//! Vertex classification and the configuration checkers.
//!
//! The arc-level criteria are normative: a crossing-free set is orthogonal,
//! a hom configuration needs exactly `|w| - 1` inner-isolated vertices under
//! every arc and at most `|w|` outer-isolated vertices, a Riedtmann
//! configuration at most `|w| - 1`, and a sealed window with exactly `|w| - 1`
//! is a simple-minded system. The homological checks run alongside as
//! cross-validation.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::arc::{crosses, is_admissible, relate, Arc, Vertex, Weight};
use crate::closure::{closure_arcs, Policy};
use crate::diagram::{Diagram, Mode, PERIODIC_LENGTH_BOUND};
use crate::error::{Error, Result};
use crate::hom::{ext_dim_unchecked, hom_dim_unchecked};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Endpoint { arc: Arc },
    InnerIsolated { of: Arc },
    OuterIsolated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexStatus {
    pub vertex: Vertex,
    #[serde(flatten)]
    pub status: Status,
}

impl VertexStatus {
    pub fn is_isolated(&self) -> bool {
        !matches!(self.status, Status::Endpoint { .. })
    }
}

/// Vertex statuses of a crossing-free arc set over a range of vertices.
#[derive(Clone, Debug, Default)]
pub(crate) struct Layout {
    pub statuses: Vec<VertexStatus>,
    pub inner: HashMap<Arc, Vec<Vertex>>,
    pub outer: Vec<Vertex>,
}

pub(crate) fn layout(arcs: &[Arc], range: RangeInclusive<Vertex>) -> Layout {
    let mut ends: HashMap<Vertex, Arc> = HashMap::with_capacity(2 * arcs.len());
    for &a in arcs {
        ends.insert(a.source(), a);
        ends.insert(a.target(), a);
    }
    let mut out = Layout::default();
    for v in range {
        let status = if let Some(&arc) = ends.get(&v) {
            Status::Endpoint { arc }
        } else if let Some(&of) = arcs.iter().filter(|a| a.covers(v)).min_by_key(|a| a.len()) {
            out.inner.entry(of).or_default().push(v);
            Status::InnerIsolated { of }
        } else {
            out.outer.push(v);
            Status::OuterIsolated
        };
        out.statuses.push(VertexStatus { vertex: v, status });
    }
    out
}

/// Smallest arc of `arcs` strictly over `s`.
pub(crate) fn smallest_overarc(arcs: impl IntoIterator<Item = Arc>, s: Arc) -> Option<Arc> {
    arcs.into_iter().filter(|a| a.is_overarc_of(s)).min_by_key(|a| a.len())
}

/// Arcs around the fundamental domain of a periodic diagram, wide enough to
/// see every arc nested with or near a fundamental arc.
fn context_arcs(d: &Diagram) -> Vec<Arc> {
    match d.mode() {
        Mode::Periodic { .. } => {
            let r = d.reach();
            d.translates(-2 * r - 2, 2 * r + 2)
        }
        Mode::Window { .. } => d.arcs().iter().copied().collect(),
    }
}

fn all_crossings(fundamental: &[Arc], context: &[Arc]) -> Vec<(Arc, Arc)> {
    let mut out = Vec::new();
    for &a in fundamental {
        for &b in context {
            if a < b && crosses(a, b) {
                out.push((a, b));
            } else if b < a && crosses(a, b) && !fundamental.contains(&b) {
                out.push((b, a));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn classify_vertices(d: &Diagram) -> Result<Vec<VertexStatus>> {
    let fundamental: Vec<Arc> = d.arcs().iter().copied().collect();
    let context = context_arcs(d);
    if let Some(&(a, b)) = all_crossings(&fundamental, &context).first() {
        return Err(Error::Crossing(a, b));
    }
    Ok(layout(&context, d.vertex_range()).statuses)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassValue {
    Invalid,
    Orthogonal,
    HomConfig,
    Riedtmann,
    Sms,
}

impl fmt::Display for ClassValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassValue::Invalid => "invalid",
            ClassValue::Orthogonal => "orthogonal",
            ClassValue::HomConfig => "hom_config",
            ClassValue::Riedtmann => "riedtmann",
            ClassValue::Sms => "sms",
        })
    }
}

impl std::str::FromStr for ClassValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "invalid" => ClassValue::Invalid,
            "orthogonal" => ClassValue::Orthogonal,
            "hom_config" => ClassValue::HomConfig,
            "riedtmann" => ClassValue::Riedtmann,
            "sms" => ClassValue::Sms,
            other => return Err(Error::parse("", format!("unknown class {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Crossing { a: Arc, b: Arc },
    /// `Ext^degree(x, y)` is nonzero, or `Hom(x, x)` is not one-dimensional.
    Homological { x: Arc, y: Arc, degree: i64 },
    /// The homological verdict disagrees with crossing-freeness.
    CriteriaDisagree,
    InnerIsolatedCount { arc: Arc, count: usize, expected: usize },
    TooManyOuterIsolated { count: usize, max: usize },
    /// Periodic configurations may not have outer-isolated vertices.
    PeriodicOuterIsolated { count: usize },
    /// Only sealed windows can witness a simple-minded system.
    HasOuterArcs,
    SealedOuterIsolated { count: usize, expected: usize },
    /// An arc in the window orthogonal to the whole configuration.
    OrthogonalObject { arc: Arc },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigClass {
    #[serde(rename = "class")]
    pub value: ClassValue,
    pub violations: Vec<Violation>,
    pub vertices: Vec<VertexStatus>,
    pub outer_isolated: Vec<Vertex>,
}

impl ConfigClass {
    pub fn at_least(&self, class: ClassValue) -> bool {
        self.value >= class
    }
}

/// Default search bound for the homological checks.
pub fn default_bound(d: &Diagram) -> i64 {
    let m = d.weight().modulus();
    match d.mode() {
        Mode::Window { .. } => d.span().unwrap_or(0) + 2 * m,
        Mode::Periodic { period } => PERIODIC_LENGTH_BOUND * period + 2 * m,
    }
}

pub fn classify_configuration(d: &Diagram, bound: Option<i64>) -> ConfigClass {
    classify_impl(d, bound, true)
}

/// Classification without the homological cross-checks.
pub(crate) fn classify_fast(d: &Diagram) -> ConfigClass {
    classify_impl(d, None, false)
}

fn classify_impl(d: &Diagram, bound: Option<i64>, homological: bool) -> ConfigClass {
    let w = d.weight();
    let bound = bound.unwrap_or_else(|| default_bound(d));
    let fundamental: Vec<Arc> = d.arcs().iter().copied().collect();
    let context = context_arcs(d);
    let mut violations = Vec::new();

    let crossings = all_crossings(&fundamental, &context);
    if !crossings.is_empty() {
        violations.extend(crossings.into_iter().map(|(a, b)| Violation::Crossing { a, b }));
        return ConfigClass { value: ClassValue::Invalid, violations, vertices: Vec::new(), outer_isolated: Vec::new() };
    }
    if homological {
        let report = orthogonality(d, &fundamental, &context, bound);
        if !report.pass {
            violations.extend(
                report.failures.into_iter().map(|f| Violation::Homological { x: f.x, y: f.y, degree: f.degree }),
            );
            violations.push(Violation::CriteriaDisagree);
            return ConfigClass { value: ClassValue::Invalid, violations, vertices: Vec::new(), outer_isolated: Vec::new() };
        }
    }

    let lay = layout(&context, d.vertex_range());
    let inner_range = match d.mode() {
        Mode::Window { .. } => d.vertex_range(),
        Mode::Periodic { period } => {
            let lo = fundamental.iter().map(|a| a.target()).min().unwrap_or(0).min(0);
            let hi = fundamental.iter().map(|a| a.source()).max().unwrap_or(0).max(period - 1);
            lo..=hi
        }
    };
    let inner = if inner_range == d.vertex_range() { lay.inner.clone() } else { layout(&context, inner_range).inner };
    let expected = (w.abs() - 1) as usize;
    let outer = lay.outer.len();
    let mut value = ClassValue::Orthogonal;

    let mut hom_ok = true;
    for &a in &fundamental {
        let count = inner.get(&a).map_or(0, Vec::len);
        if count != expected {
            hom_ok = false;
            violations.push(Violation::InnerIsolatedCount { arc: a, count, expected });
        }
    }
    let periodic = d.period().is_some();
    if periodic {
        if outer > 0 {
            hom_ok = false;
            violations.push(Violation::PeriodicOuterIsolated { count: outer });
        }
    } else if outer > w.abs() as usize {
        hom_ok = false;
        violations.push(Violation::TooManyOuterIsolated { count: outer, max: w.abs() as usize });
    }

    if hom_ok {
        value = ClassValue::HomConfig;
        if periodic || outer <= expected {
            value = ClassValue::Riedtmann;
            if homological {
                for arc in orthogonal_objects(d, bound) {
                    violations.push(Violation::OrthogonalObject { arc });
                }
            }
            if !d.is_sealed() {
                violations.push(Violation::HasOuterArcs);
            } else if outer != expected {
                violations.push(Violation::SealedOuterIsolated { count: outer, expected });
            } else {
                value = ClassValue::Sms;
            }
        } else {
            violations.push(Violation::TooManyOuterIsolated { count: outer, max: expected });
        }
    }
    ConfigClass { value, violations, vertices: lay.statuses, outer_isolated: lay.outer }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomFailure {
    pub x: Arc,
    pub y: Arc,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub pass: bool,
    pub crossing_free: bool,
    /// Whether the homological verdict matches crossing-freeness.
    pub agrees: bool,
    pub failures: Vec<HomFailure>,
}

pub fn check_orthogonal_homological(d: &Diagram, bound: Option<i64>) -> OrthogonalityReport {
    let fundamental: Vec<Arc> = d.arcs().iter().copied().collect();
    let context = context_arcs(d);
    orthogonality(d, &fundamental, &context, bound.unwrap_or_else(|| default_bound(d)))
}

fn orthogonality(d: &Diagram, fundamental: &[Arc], context: &[Arc], bound: i64) -> OrthogonalityReport {
    let w = d.weight();
    let mut failures = Vec::new();
    for &x in fundamental {
        for &y in context {
            if x != y && relate(x, y).map_or(true, |r| r.distance > bound) {
                continue;
            }
            let hom = hom_dim_unchecked(w, x, y);
            if hom != (x == y) as u8 {
                failures.push(HomFailure { x, y, degree: 0 });
            }
            for k in (w.w() + 1..=-1).rev() {
                if ext_dim_unchecked(w, k, x, y) != 0 {
                    failures.push(HomFailure { x, y, degree: k });
                }
            }
            // the pair in the other order, unless it is visited anyway
            if x != y && !fundamental.contains(&y) {
                if hom_dim_unchecked(w, y, x) != 0 {
                    failures.push(HomFailure { x: y, y: x, degree: 0 });
                }
                for k in (w.w() + 1..=-1).rev() {
                    if ext_dim_unchecked(w, k, y, x) != 0 {
                        failures.push(HomFailure { x: y, y: x, degree: k });
                    }
                }
            }
        }
    }
    let crossing_free = all_crossings(fundamental, context).is_empty();
    let pass = failures.is_empty();
    OrthogonalityReport { pass, crossing_free, agrees: pass == crossing_free, failures }
}

/// Arcs near the configuration that are orthogonal to all of it, in the
/// sense that `Ext^k(s, x)` vanishes for every arc `s` and every
/// `k ∈ [w + 1, 0]`. Window diagrams test arcs inside the window; periodic
/// ones test arcs with target in the fundamental domain. Lengths are capped
/// by `bound`.
pub fn orthogonal_objects(d: &Diagram, bound: i64) -> Vec<Arc> {
    let w = d.weight();
    let context = context_arcs(d);
    let (lo, hi, tmax) = match d.mode() {
        Mode::Window { lo, hi, .. } => (lo, hi, hi),
        Mode::Periodic { period } => (0, i64::MAX, period - 1),
    };
    let mut out = Vec::new();
    for t in lo..=tmax {
        let mut len = w.abs();
        while len <= bound && t + len <= hi {
            let x = Arc::new(t + len, t).expect("positive length");
            let orthogonal = context
                .iter()
                .all(|&s| (w.w() + 1..=0).all(|k| ext_dim_unchecked(w, k, s, x) == 0));
            if orthogonal {
                out.push(x);
            }
            len += w.modulus();
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub complete: bool,
    /// Minimal arcs in the checked range that the closure misses.
    pub missing: Vec<Arc>,
    pub checked: usize,
}

/// Whether the extension closure of `∪_{i=w+1}^{0} Σ^i S` contains every
/// minimal-length arc away from the boundary. Sealed windows include their
/// virtual overarc in `S`.
pub fn minimal_arc_coverage(d: &Diagram) -> Coverage {
    let w = d.weight();
    let a = w.abs();
    let (base, range) = match d.mode() {
        Mode::Window { lo, hi, .. } => {
            let mut base: Vec<Arc> = d.arcs().iter().copied().collect();
            base.extend(d.virtual_overarc());
            (base, (lo + a)..=(hi - a))
        }
        Mode::Periodic { period } => {
            let k = d.reach() + 2;
            (d.translates(-k, k), 0..=period - 1)
        }
    };
    let x: Vec<Arc> = (w.w() + 1..=0).flat_map(|i| base.iter().map(move |s| s.suspend(i))).collect();
    let cl = closure_arcs(w, &x, Policy::Both);
    let mut missing = Vec::new();
    let mut checked = 0;
    for t in range.clone() {
        let m = Arc::new(t + a, t).expect("positive length");
        if matches!(d.mode(), Mode::Window { .. }) && m.source() > *range.end() {
            break;
        }
        checked += 1;
        if !cl.contains(&m) {
            missing.push(m);
        }
    }
    Coverage { complete: missing.is_empty(), missing, checked }
}

/// Wraps a sealed-valid window `depth` times in its virtual overarc.
pub fn unfold(d: &Diagram, depth: u32) -> Result<Diagram> {
    if !d.is_sealed() {
        return Err(Error::Unsupported("a sealed window"));
    }
    let class = classify_fast(d).value;
    if class != ClassValue::Sms {
        return Err(Error::InvalidDiagram(format!("unfold needs a sealed-valid window, got class {class}")));
    }
    let a = d.weight().abs();
    let mut cur = d.clone();
    for _ in 0..depth {
        let (lo, hi) = cur.bounds().expect("window");
        let wrap = cur.virtual_overarc().expect("sealed");
        debug_assert!(is_admissible(cur.weight(), wrap));
        let arcs = cur.arcs().iter().copied().chain(std::iter::once(wrap));
        cur = Diagram::window(cur.weight(), lo - 1, hi + a, crate::diagram::Boundary::Sealed, arcs)?;
    }
    Ok(cur)
}

/// Sealed-valid windows have a span congruent to `|w| - 1` modulo `|w| + 1`.
pub fn sealed_span_ok(w: Weight, span: i64) -> bool {
    span.rem_euclid(w.modulus()) == (w.abs() - 1) % w.modulus()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Boundary;

    fn arc(s: i64, t: i64) -> Arc {
        Arc::new(s, t).unwrap()
    }

    fn w(x: i64) -> Weight {
        Weight::new(x).unwrap()
    }

    fn sealed(wt: i64, lo: i64, hi: i64, arcs: &[(i64, i64)]) -> Diagram {
        Diagram::window(w(wt), lo, hi, Boundary::Sealed, arcs.iter().map(|&(s, t)| arc(s, t))).unwrap()
    }

    fn free(wt: i64, lo: i64, hi: i64, arcs: &[(i64, i64)]) -> Diagram {
        Diagram::window(w(wt), lo, hi, Boundary::Free, arcs.iter().map(|&(s, t)| arc(s, t))).unwrap()
    }

    #[test]
    fn vertex_examples() {
        let st = classify_vertices(&sealed(-2, -1, 5, &[(2, 0), (4, -1)])).unwrap();
        let by: HashMap<_, _> = st.iter().map(|s| (s.vertex, s.status)).collect();
        assert_eq!(by[&1], Status::InnerIsolated { of: arc(2, 0) });
        assert_eq!(by[&3], Status::InnerIsolated { of: arc(4, -1) });
        assert_eq!(by[&5], Status::OuterIsolated);
        assert_eq!(by[&0], Status::Endpoint { arc: arc(2, 0) });

        let st = classify_vertices(&sealed(-1, -1, 2, &[(1, 0), (2, -1)])).unwrap();
        assert!(st.iter().all(|s| !s.is_isolated()));

        let p = Diagram::periodic(w(-1), 2, [arc(1, 0)]).unwrap();
        assert!(classify_vertices(&p).unwrap().iter().all(|s| !s.is_isolated()));

        let bad = free(-1, 0, 5, &[(3, 0), (5, 2)]);
        assert!(matches!(classify_vertices(&bad), Err(Error::Crossing(..))));
    }

    #[test]
    fn class_examples() {
        let c = classify_configuration(&sealed(-2, -1, 5, &[(2, 0), (4, -1)]), None);
        assert_eq!(c.value, ClassValue::Sms);
        assert!(c.violations.is_empty(), "{:?}", c.violations);
        assert_eq!(c.outer_isolated, vec![5]);

        let p = Diagram::periodic(w(-1), 2, [arc(1, 0)]).unwrap();
        let c = classify_configuration(&p, None);
        assert_eq!(c.value, ClassValue::Riedtmann);
        assert!(c.violations.contains(&Violation::HasOuterArcs));

        let c = classify_configuration(&free(-2, 0, 7, &[(2, 0), (7, 5)]), None);
        assert_eq!(c.value, ClassValue::HomConfig);
        assert_eq!(c.outer_isolated, vec![3, 4]);

        let c = classify_configuration(&free(-1, 0, 5, &[(3, 0), (5, 2)]), None);
        assert_eq!(c.value, ClassValue::Invalid);
        assert_eq!(c.violations, vec![Violation::Crossing { a: arc(3, 0), b: arc(5, 2) }]);
    }

    #[test]
    fn inner_count_violation() {
        // (5,0) has three vertices under it, w = -2 wants exactly one
        let c = classify_configuration(&free(-2, 0, 5, &[(5, 0)]), None);
        assert_eq!(c.value, ClassValue::Orthogonal);
        assert!(matches!(c.violations[0], Violation::InnerIsolatedCount { count: 4, expected: 1, .. }));
    }

    #[test]
    fn homological_examples() {
        assert!(check_orthogonal_homological(&free(-2, 0, 7, &[(2, 0), (7, 5)]), None).pass);
        let r = check_orthogonal_homological(&free(-1, 0, 5, &[(3, 0), (5, 2)]), None);
        assert!(!r.pass);
        assert!(!r.crossing_free);
        assert!(r.agrees);
        // Hom((5,2),(3,0)) is the nonzero space for w = -1
        assert!(r.failures.contains(&HomFailure { x: arc(5, 2), y: arc(3, 0), degree: 0 }));
        for a in [arc(1, 0), arc(5, 0), arc(8, -3)] {
            let wt = if a.len() == 11 { -3 } else { -1 };
            let d = free(wt, -5, 10, &[(a.source(), a.target())]);
            assert!(check_orthogonal_homological(&d, None).pass);
        }
    }

    #[test]
    fn coverage_examples() {
        assert!(minimal_arc_coverage(&sealed(-1, -1, 2, &[(1, 0), (2, -1)])).complete);
        assert!(minimal_arc_coverage(&sealed(-2, -1, 5, &[(2, 0), (4, -1)])).complete);
        assert!(minimal_arc_coverage(&sealed(-1, 0, 3, &[(1, 0), (3, 2)])).complete);
        let strip = free(-1, 0, 9, &[(1, 0), (3, 2), (5, 4), (7, 6), (9, 8)]);
        let cov = minimal_arc_coverage(&strip);
        assert!(!cov.complete);
        assert!(cov.missing.iter().all(|m| m.source() % 2 == 0));
        let p = Diagram::periodic(w(-1), 2, [arc(1, 0)]).unwrap();
        assert!(!minimal_arc_coverage(&p).complete);
    }

    #[test]
    fn unfold_examples() {
        let u = unfold(&sealed(-1, -1, 2, &[(1, 0), (2, -1)]), 1).unwrap();
        assert_eq!(u.bounds(), Some((-2, 3)));
        assert!(u.contains(arc(3, -2)));
        assert_eq!(classify_configuration(&u, None).outer_isolated, Vec::<i64>::new());

        let d = sealed(-2, -1, 5, &[(2, 0), (4, -1)]);
        let u = unfold(&d, 1).unwrap();
        assert_eq!(u.bounds(), Some((-2, 7)));
        assert!(u.contains(arc(6, -2)));
        let c = classify_configuration(&u, None);
        assert_eq!(c.outer_isolated, vec![7]);
        assert_eq!(c.value, ClassValue::Sms);

        assert_eq!(unfold(&d, 0).unwrap(), d);
        assert!(unfold(&free(-2, -1, 5, &[(2, 0), (4, -1)]), 1).is_err());
    }

    #[test]
    fn sealed_spans() {
        assert!(sealed_span_ok(w(-2), 7));
        assert!(sealed_span_ok(w(-1), 4));
        assert!(!sealed_span_ok(w(-2), 5));
        assert!(!sealed_span_ok(w(-3), 4));
    }
}
