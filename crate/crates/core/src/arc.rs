//! Admissible arcs of the ∞-gon and their pairwise geometry.
//!
//! An arc `(source, target)` with `source > target` is drawn above the number
//! line. For a weight `w ≤ -1` it is admissible when its length is at least
//! `|w|` and congruent to `|w|` modulo `|w| + 1`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex of the ∞-gon.
pub type Vertex = i64;

/// The Calabi-Yau weight `w ≤ -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Weight(i64);

impl Weight {
    pub fn new(w: i64) -> Result<Self> {
        if w <= -1 {
            Ok(Weight(w))
        } else {
            Err(Error::InvalidWeight(w))
        }
    }

    #[inline]
    pub fn w(self) -> i64 {
        self.0
    }

    /// `|w|`, also the minimal admissible length.
    #[inline]
    pub fn abs(self) -> i64 {
        -self.0
    }

    /// `d = w - 1`.
    #[inline]
    pub fn d(self) -> i64 {
        self.0 - 1
    }

    /// `|w| + 1 = |d|`, the number of AR components.
    #[inline]
    pub fn modulus(self) -> i64 {
        self.abs() + 1
    }

    /// Admissible lengths are exactly `|w| + j (|w| + 1)` for `j ≥ 0`.
    #[inline]
    pub fn admits_length(self, len: i64) -> bool {
        len >= self.abs() && len.rem_euclid(self.modulus()) == self.abs()
    }
}

impl TryFrom<i64> for Weight {
    type Error = Error;
    fn try_from(w: i64) -> Result<Self> {
        Weight::new(w)
    }
}

impl From<Weight> for i64 {
    fn from(w: Weight) -> i64 {
        w.0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An arc `(source, target)` with `target < source`.
///
/// Ordering is by `(target, source)`, which is the rendering and
/// serialization order used throughout the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    source: Vertex,
    target: Vertex,
}

impl Arc {
    pub fn new(source: Vertex, target: Vertex) -> Result<Self> {
        if target < source {
            Ok(Arc { source, target })
        } else {
            Err(Error::MalformedArc { start: source, end: target })
        }
    }

    /// Builds an arc from two distinct vertices in either order.
    pub fn spanning(x: Vertex, y: Vertex) -> Option<Self> {
        match x.cmp(&y) {
            Ordering::Greater => Some(Arc { source: x, target: y }),
            Ordering::Less => Some(Arc { source: y, target: x }),
            Ordering::Equal => None,
        }
    }

    #[inline]
    pub fn source(self) -> Vertex {
        self.source
    }

    #[inline]
    pub fn target(self) -> Vertex {
        self.target
    }

    #[inline]
    pub fn len(self) -> i64 {
        self.source - self.target
    }

    #[inline]
    pub fn endpoints(self) -> [Vertex; 2] {
        [self.source, self.target]
    }

    #[inline]
    pub fn is_incident(self, v: Vertex) -> bool {
        v == self.source || v == self.target
    }

    /// `v` lies strictly under the arc.
    #[inline]
    pub fn covers(self, v: Vertex) -> bool {
        self.target < v && v < self.source
    }

    /// `self` is an overarc of `inner`.
    #[inline]
    pub fn is_overarc_of(self, inner: Arc) -> bool {
        self.target < inner.target && inner.source < self.source
    }

    /// Translation by `delta` on both endpoints.
    #[inline]
    pub fn translate(self, delta: i64) -> Arc {
        Arc { source: self.source + delta, target: self.target + delta }
    }

    /// `v ↦ -v`; swaps the roles of source and target.
    #[inline]
    pub fn reflect(self) -> Arc {
        Arc { source: -self.target, target: -self.source }
    }

    /// `Σ^k`, i.e. translation by `-k`.
    #[inline]
    pub fn suspend(self, k: i64) -> Arc {
        self.translate(-k)
    }
}

impl PartialOrd for Arc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Arc {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.target, self.source).cmp(&(other.target, other.source))
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.source, self.target)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.source, self.target)
    }
}

impl Serialize for Arc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.source, self.target].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Arc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [source, target] = <[i64; 2]>::deserialize(d)?;
        Arc::new(source, target).map_err(serde::de::Error::custom)
    }
}

pub fn is_admissible(w: Weight, a: Arc) -> bool {
    w.admits_length(a.len())
}

pub(crate) fn ensure_admissible(w: Weight, a: Arc) -> Result<()> {
    if is_admissible(w, a) {
        Ok(())
    } else {
        Err(Error::Inadmissible { arc: a, w: w.w() })
    }
}

/// The functors acting on indecomposables by translation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functor {
    /// `Σ^k`
    Suspension(i64),
    /// `τ^k`
    Tau(i64),
    /// The Serre functor `S = Σ^w`.
    Serre,
}

pub fn apply_functor(w: Weight, a: Arc, f: Functor) -> Arc {
    match f {
        Functor::Suspension(k) => a.suspend(k),
        Functor::Tau(k) => a.translate(-w.d() * k),
        Functor::Serre => a.suspend(w.w()),
    }
}

/// Index of the `ZA∞` component containing `a`: `source mod (|w| + 1)`.
pub fn component_index(w: Weight, a: Arc) -> Result<i64> {
    ensure_admissible(w, a)?;
    Ok(a.source.rem_euclid(w.modulus()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    StrictCross,
    SharedVertex,
    Nested,
    Disjoint,
}

impl RelationKind {
    /// Crossing in the wide sense: a common endpoint or a strict crossing.
    pub fn is_crossing(self) -> bool {
        matches!(self, RelationKind::StrictCross | RelationKind::SharedVertex)
    }
}

/// Which of the two related arcs is the outer one, for nested pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Overarc {
    First,
    Second,
}

/// Geometric relation of two distinct arcs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub distance: i64,
    pub neighbouring: bool,
    /// Endpoint pairs `(x, x - 1)` realizing distance 1, one endpoint from
    /// each arc. Empty unless the arcs are neighbouring.
    pub witnesses: Vec<(Vertex, Vertex)>,
    pub overarc: Option<Overarc>,
}

pub fn relate(a: Arc, b: Arc) -> Result<Relation> {
    if a == b {
        return Err(Error::EqualArcs(a));
    }
    let shared = a.endpoints().iter().any(|&v| b.is_incident(v));
    let strict = (a.target < b.target && b.target < a.source && a.source < b.source)
        || (b.target < a.target && a.target < b.source && b.source < a.source);
    let (kind, overarc) = if shared {
        (RelationKind::SharedVertex, None)
    } else if strict {
        (RelationKind::StrictCross, None)
    } else if a.is_overarc_of(b) {
        (RelationKind::Nested, Some(Overarc::First))
    } else if b.is_overarc_of(a) {
        (RelationKind::Nested, Some(Overarc::Second))
    } else {
        (RelationKind::Disjoint, None)
    };
    let mut distance = i64::MAX;
    for x in a.endpoints() {
        for y in b.endpoints() {
            distance = distance.min((x - y).abs());
        }
    }
    let neighbouring = !kind.is_crossing() && distance == 1;
    let mut witnesses = Vec::new();
    if neighbouring {
        for x in a.endpoints() {
            for y in b.endpoints() {
                if (x - y).abs() == 1 {
                    witnesses.push((x.max(y), x.min(y)));
                }
            }
        }
        witnesses.sort_unstable();
    }
    Ok(Relation { kind, distance, neighbouring, witnesses, overarc })
}

/// Crossing in the wide sense (shared endpoint or strict crossing).
pub fn crosses(a: Arc, b: Arc) -> bool {
    a != b
        && (a.endpoints().iter().any(|&v| b.is_incident(v))
            || (a.target < b.target && b.target < a.source && a.source < b.source)
            || (b.target < a.target && a.target < b.source && b.source < a.source))
}

pub fn strictly_cross(a: Arc, b: Arc) -> bool {
    (a.target < b.target && b.target < a.source && a.source < b.source)
        || (b.target < a.target && a.target < b.source && b.source < a.source)
}
