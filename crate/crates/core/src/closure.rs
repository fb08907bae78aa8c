//! Ptolemy arcs, extension closures and fountain detection.
//!
//! The closure of a finite arc set is the least set containing it that is
//! stable under adding Ptolemy arcs. Levels record how many pairwise
//! extension steps are needed, using the recursion in which one factor is
//! always an input arc.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::arc::{ensure_admissible, is_admissible, relate, Arc, RelationKind, Vertex, Weight};
use crate::diagram::{Diagram, Mode};
use crate::error::{Error, Result};
use crate::hom::{ext1_unchecked, Ext1Answer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PtolemyClass {
    #[serde(rename = "I")]
    One,
    #[serde(rename = "II")]
    Two,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PtolemyArc {
    pub arc: Arc,
    pub class: PtolemyClass,
    pub parents: (Arc, Arc),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    #[serde(rename = "class_II_only")]
    ClassTwoOnly,
    #[default]
    Both,
}

impl Policy {
    fn allows(self, class: PtolemyClass) -> bool {
        self == Policy::Both || class == PtolemyClass::Two
    }

    fn allows_answer(self, e: &Ext1Answer) -> bool {
        e.nonzero && (self == Policy::Both || e.case.is_neighbouring())
    }
}

/// Which factor of a level step must be an input arc.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recursion {
    /// `X * (X)_{n-1}`: the input arc is the first term of the triangle.
    #[default]
    Left,
    /// `(X)_{n-1} * X`: the input arc is the third term.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureResult {
    pub arcs: BTreeSet<Arc>,
    #[serde(serialize_with = "serialize_levels")]
    pub level: BTreeMap<Arc, u32>,
    pub policy: Policy,
    /// Arcs that the restricted recursion never reaches. Their level comes
    /// from the unrestricted pairwise rule instead.
    pub unstratified: BTreeSet<Arc>,
}

fn serialize_levels<S: serde::Serializer>(
    level: &BTreeMap<Arc, u32>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(level.len()))?;
    for (a, l) in level {
        seq.serialize_element(&(a, l))?;
    }
    seq.end()
}

impl ClosureResult {
    pub fn max_level(&self) -> u32 {
        self.level.values().copied().max().unwrap_or(0)
    }
}

/// Ptolemy arcs of a pair of distinct admissible arcs.
pub fn ptolemy_arcs(w: Weight, a: Arc, b: Arc) -> Result<Vec<PtolemyArc>> {
    ensure_admissible(w, a)?;
    ensure_admissible(w, b)?;
    if a == b {
        return Ok(Vec::new());
    }
    Ok(ptolemy_unchecked(w, a, b))
}

pub(crate) fn ptolemy_unchecked(w: Weight, a: Arc, b: Arc) -> Vec<PtolemyArc> {
    if a.source() + 1 < b.target() || b.source() + 1 < a.target() {
        return Vec::new();
    }
    let rel = relate(a, b).expect("distinct arcs");
    let mut out = Vec::new();
    let mut push = |arc: Arc, class| {
        if !out.iter().any(|p: &PtolemyArc| p.arc == arc) {
            out.push(PtolemyArc { arc, class, parents: (a, b) });
        }
    };
    match rel.kind {
        RelationKind::StrictCross => {
            for x in a.endpoints() {
                for y in b.endpoints() {
                    if let Some(e) = Arc::spanning(x, y) {
                        if is_admissible(w, e) {
                            push(e, PtolemyClass::One);
                        }
                    }
                }
            }
        }
        RelationKind::Nested | RelationKind::Disjoint if rel.neighbouring => {
            let ends: Vec<Vertex> = a.endpoints().into_iter().chain(b.endpoints()).collect();
            for &(hi, lo) in &rel.witnesses {
                let rest: Vec<Vertex> = ends.iter().copied().filter(|&v| v != hi && v != lo).collect();
                if let [x, y] = rest[..] {
                    if let Some(e) = Arc::spanning(x, y) {
                        debug_assert!(is_admissible(w, e));
                        push(e, PtolemyClass::Two);
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// Summands of the middle term of the nonsplit triangle `a → e → b`.
pub fn extension_middle(w: Weight, b: Arc, a: Arc) -> Result<Vec<Arc>> {
    ensure_admissible(w, a)?;
    ensure_admissible(w, b)?;
    Ok(ext1_unchecked(w, b, a).middle)
}

pub fn closure(w: Weight, input: &[Arc], policy: Policy) -> Result<ClosureResult> {
    closure_with(w, input, policy, Recursion::Left)
}

pub fn closure_with(w: Weight, input: &[Arc], policy: Policy, recursion: Recursion) -> Result<ClosureResult> {
    for &a in input {
        ensure_admissible(w, a)?;
    }
    let arcs = fixpoint(w, input, policy);
    let (level, unstratified) = levels(w, input, &arcs, policy, recursion);
    Ok(ClosureResult { arcs: arcs.into_iter().collect(), level, policy, unstratified })
}

/// Closure arcs only, without levels.
pub(crate) fn closure_arcs(w: Weight, input: &[Arc], policy: Policy) -> BTreeSet<Arc> {
    fixpoint(w, input, policy).into_iter().collect()
}

fn fixpoint(w: Weight, input: &[Arc], policy: Policy) -> Vec<Arc> {
    let mut arcs: Vec<Arc> = Vec::with_capacity(input.len());
    let mut seen = HashSet::new();
    for &a in input {
        if seen.insert(a) {
            arcs.push(a);
        }
    }
    // every pair (i, j) with j < i is examined exactly once
    let mut i = 0;
    while i < arcs.len() {
        let a = arcs[i];
        for j in 0..i {
            for p in ptolemy_unchecked(w, a, arcs[j]) {
                if policy.allows(p.class) && seen.insert(p.arc) {
                    arcs.push(p.arc);
                }
            }
        }
        i += 1;
    }
    arcs
}

fn levels(
    w: Weight,
    input: &[Arc],
    all: &[Arc],
    policy: Policy,
    recursion: Recursion,
) -> (BTreeMap<Arc, u32>, BTreeSet<Arc>) {
    let base: Vec<Arc> = {
        let mut v = input.to_vec();
        v.sort();
        v.dedup();
        v
    };
    let mut level: HashMap<Arc, u32> = base.iter().map(|&a| (a, 1)).collect();
    let mut frontier = base.clone();
    let mut n = 1;
    while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        for &q in &frontier {
            for &p in &base {
                let (b, a) = match recursion {
                    Recursion::Left => (q, p),
                    Recursion::Right => (p, q),
                };
                let e = ext1_unchecked(w, b, a);
                if policy.allows_answer(&e) {
                    next.extend(e.middle.into_iter().filter(|m| !level.contains_key(m)));
                }
            }
        }
        n += 1;
        for &m in &next {
            level.insert(m, n);
        }
        frontier = next.into_iter().collect();
    }

    let mut unstratified = BTreeSet::new();
    let mut missing: HashSet<Arc> = all.iter().copied().filter(|a| !level.contains_key(a)).collect();
    // Dijkstra-style relaxation over all generating pairs
    while !missing.is_empty() {
        let known: Vec<(Arc, u32)> = level.iter().map(|(&a, &l)| (a, l)).collect();
        let mut best: HashMap<Arc, u32> = HashMap::new();
        for (i, &(a, la)) in known.iter().enumerate() {
            for &(b, lb) in &known[i + 1..] {
                for p in ptolemy_unchecked(w, a, b) {
                    if policy.allows(p.class) && missing.contains(&p.arc) {
                        let cand = 1 + la.max(lb);
                        best.entry(p.arc).and_modify(|l| *l = (*l).min(cand)).or_insert(cand);
                    }
                }
            }
        }
        let Some(&lowest) = best.values().min() else {
            break;
        };
        for (a, l) in best {
            if l == lowest {
                level.insert(a, l);
                missing.remove(&a);
                unstratified.insert(a);
            }
        }
    }
    (level.into_iter().collect(), unstratified)
}

/// Checks that an outer-isolated vertex separates the closure.
pub fn split_check(w: Weight, input: &[Arc], v: Vertex) -> Result<bool> {
    for &a in input {
        ensure_admissible(w, a)?;
        if a.is_incident(v) || a.covers(v) {
            return Err(Error::NotOuterIsolated(v));
        }
    }
    let whole = closure_arcs(w, input, Policy::Both);
    let left: Vec<Arc> = input.iter().copied().filter(|a| a.source() < v).collect();
    let right: Vec<Arc> = input.iter().copied().filter(|a| a.target() > v).collect();
    let mut parts = closure_arcs(w, &left, Policy::Both);
    parts.extend(closure_arcs(w, &right, Policy::Both));
    let untouched = whole.iter().all(|a| !a.is_incident(v) && !a.covers(v));
    Ok(whole == parts && untouched)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FountainVerdict {
    LeftFountain,
    RightFountain,
    Fountain,
    Bounded,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FountainReport {
    pub vertex: Vertex,
    pub depths: Vec<u32>,
    pub left_counts: Vec<usize>,
    pub right_counts: Vec<usize>,
    pub verdict: FountainVerdict,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Trend {
    Growing,
    Stable,
    Irregular,
}

fn trend(counts: &[usize]) -> Trend {
    if counts.len() < 3 {
        return Trend::Irregular;
    }
    let tail = &counts[1..];
    if tail.windows(2).all(|p| p[1] > p[0]) {
        Trend::Growing
    } else if tail.windows(2).all(|p| p[1] == p[0]) {
        Trend::Stable
    } else {
        Trend::Irregular
    }
}

/// Heuristic fountain detection at `v`.
///
/// Each depth materializes a finite piece of the family: `depth` translates
/// on each side of a periodic diagram, or `depth` unfoldings of a sealed
/// window. A side counts as growing when its count strictly increases from
/// the second depth on, and as stable when it stays constant from there.
pub fn fountain_report(family: &Diagram, v: Vertex, depths: &[u32]) -> Result<FountainReport> {
    if depths.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidDiagram("fountain depths must be strictly increasing".into()));
    }
    let w = family.weight();
    let mut left_counts = Vec::with_capacity(depths.len());
    let mut right_counts = Vec::with_capacity(depths.len());
    for &depth in depths {
        let arcs: Vec<Arc> = match family.mode() {
            Mode::Periodic { .. } => family.translates(-(depth as i64), depth as i64),
            Mode::Window { .. } if family.is_sealed() => {
                crate::config::unfold(family, depth)?.arcs().iter().copied().collect()
            }
            Mode::Window { .. } => {
                return Err(Error::Unsupported("a periodic diagram or a sealed window"));
            }
        };
        let cl = closure_arcs(w, &arcs, Policy::Both);
        left_counts.push(cl.iter().filter(|a| a.source() == v).count());
        right_counts.push(cl.iter().filter(|a| a.target() == v).count());
    }
    let verdict = match (trend(&left_counts), trend(&right_counts)) {
        (Trend::Growing, Trend::Growing) => FountainVerdict::Fountain,
        (Trend::Growing, Trend::Stable) => FountainVerdict::LeftFountain,
        (Trend::Stable, Trend::Growing) => FountainVerdict::RightFountain,
        (Trend::Stable, Trend::Stable) => FountainVerdict::Bounded,
        _ => FountainVerdict::Unknown,
    };
    Ok(FountainReport { vertex: v, depths: depths.to_vec(), left_counts, right_counts, verdict })
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

    fn arcs_of(p: &[PtolemyArc]) -> BTreeSet<Arc> {
        p.iter().map(|p| p.arc).collect()
    }

    #[test]
    fn ptolemy_examples() {
        let p = ptolemy_arcs(w(-1), arc(3, 0), arc(5, 2)).unwrap();
        assert_eq!(arcs_of(&p), BTreeSet::from([arc(5, 0), arc(3, 2)]));
        assert!(p.iter().all(|p| p.class == PtolemyClass::One));

        let p = ptolemy_arcs(w(-1), arc(3, 0), arc(7, 4)).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].arc, arc(7, 0));
        assert_eq!(p[0].class, PtolemyClass::Two);
        assert_eq!(p[0].parents, (arc(3, 0), arc(7, 4)));

        assert!(ptolemy_arcs(w(-2), arc(2, 0), arc(6, 4)).unwrap().is_empty());
    }

    #[test]
    fn doubly_adjacent_pair_gives_two_arcs() {
        let p = ptolemy_arcs(w(-1), arc(1, 0), arc(2, -1)).unwrap();
        assert_eq!(arcs_of(&p), BTreeSet::from([arc(2, 1), arc(0, -1)]));
    }

    #[test]
    fn extension_middle_examples() {
        assert_eq!(extension_middle(w(-1), arc(3, 0), arc(5, 2)).unwrap(), vec![arc(5, 0), arc(3, 2)]);
        assert_eq!(extension_middle(w(-1), arc(1, 0), arc(2, -1)).unwrap(), vec![arc(0, -1)]);
        assert_eq!(extension_middle(w(-1), arc(2, -1), arc(1, 0)).unwrap(), vec![arc(2, 1)]);
        assert_eq!(extension_middle(w(-2), arc(-1, -3), arc(2, 0)).unwrap(), vec![arc(2, -3)]);
        // b = Σa has an empty middle term
        assert!(extension_middle(w(-1), arc(3, 0), arc(4, 1)).unwrap().is_empty());
    }

    #[test]
    fn closure_examples() {
        let c = closure(w(-1), &[arc(2, 1), arc(4, 3)], Policy::Both).unwrap();
        assert_eq!(c.arcs, BTreeSet::from([arc(2, 1), arc(4, 3), arc(4, 1)]));
        assert_eq!(c.level[&arc(2, 1)], 1);
        assert_eq!(c.level[&arc(4, 3)], 1);
        assert_eq!(c.level[&arc(4, 1)], 2);

        let c = closure(w(-1), &[arc(1, 0), arc(3, 2), arc(5, 4)], Policy::Both).unwrap();
        assert_eq!(c.arcs.len(), 6);
        assert_eq!(c.level[&arc(3, 0)], 2);
        assert_eq!(c.level[&arc(5, 2)], 2);
        assert_eq!(c.level[&arc(5, 0)], 3);
        assert!(c.unstratified.is_empty());

        let c = closure(w(-1), &[arc(1, 0), arc(2, -1)], Policy::Both).unwrap();
        assert_eq!(c.arcs, BTreeSet::from([arc(1, 0), arc(2, -1), arc(2, 1), arc(0, -1)]));
        assert_eq!(c.level[&arc(2, 1)], 2);
        assert_eq!(c.level[&arc(0, -1)], 2);
    }

    #[test]
    fn class_two_policy_ignores_crossings() {
        let c = closure(w(-1), &[arc(3, 0), arc(5, 2)], Policy::ClassTwoOnly).unwrap();
        assert_eq!(c.arcs.len(), 2);
        let c = closure(w(-1), &[arc(3, 0), arc(5, 2)], Policy::Both).unwrap();
        assert!(c.arcs.contains(&arc(5, 0)) && c.arcs.contains(&arc(3, 2)));
    }

    #[test]
    fn split_examples() {
        assert!(split_check(w(-1), &[arc(2, 1), arc(5, 4)], 3).unwrap());
        assert!(split_check(w(-1), &[arc(1, 0), arc(3, 2), arc(5, 4)], 6).unwrap());
        assert!(split_check(w(-2), &[arc(2, 0), arc(6, 4)], 3).unwrap());
        assert!(matches!(split_check(w(-1), &[arc(3, 0)], 1), Err(Error::NotOuterIsolated(1))));
        assert!(matches!(split_check(w(-1), &[arc(3, 0)], 3), Err(Error::NotOuterIsolated(3))));
    }

    #[test]
    fn periodic_right_fountain() {
        let d = Diagram::periodic(w(-1), 2, [arc(1, 0)]).unwrap();
        for v in [0, 2] {
            let r = fountain_report(&d, v, &[2, 3, 4, 5]).unwrap();
            assert_eq!(r.verdict, FountainVerdict::RightFountain, "{r:?}");
            assert!(r.left_counts.iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn sealed_fountains() {
        let d = Diagram::window(w(-2), 0, 3, Boundary::Sealed, [arc(2, 0)]).unwrap();
        let r = fountain_report(&d, 1, &[1, 2, 3, 4]).unwrap();
        assert_eq!(r.verdict, FountainVerdict::Bounded, "{r:?}");
        // for w = -1 every unfolding wraps around the previous window, so
        // both sides of an inner vertex keep gaining arcs
        let d = Diagram::window(w(-1), 0, 1, Boundary::Sealed, [arc(1, 0)]).unwrap();
        let r = fountain_report(&d, 0, &[2, 4, 6, 8]).unwrap();
        assert_eq!(r.verdict, FountainVerdict::Fountain, "{r:?}");
    }

    #[test]
    fn fountain_rejects_free_windows_and_bad_depths() {
        let d = Diagram::window(w(-1), 0, 1, Boundary::Free, [arc(1, 0)]).unwrap();
        assert!(fountain_report(&d, 0, &[1, 2, 3]).is_err());
        let d = Diagram::periodic(w(-1), 2, [arc(1, 0)]).unwrap();
        assert!(fountain_report(&d, 0, &[3, 2, 4]).is_err());
        assert_eq!(fountain_report(&d, 0, &[1, 2]).unwrap().verdict, FountainVerdict::Unknown);
    }
}
