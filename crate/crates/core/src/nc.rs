//! Noncrossing partitions attached to configurations for `w = -1`.
//!
//! Points of the form `2n + 0.5` are grouped by following arcs: from `x`,
//! if `x + 0.5` is the target of an arc `a`, the next point of the block is
//! `s(a) + 0.5`. The same chain rule on the points `2n - 0.5` describes the
//! Kreweras complement, which is also computed directly from its defining
//! maximality property on finite windows.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arc::{Arc, Vertex};
use crate::config::{classify_configuration, ClassValue};
use crate::diagram::{first_crossing, Boundary, Diagram, Mode};
use crate::error::{Error, Result};

/// A half-integer `n + 0.5`, stored as `2n + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfPoint(i64);

impl HalfPoint {
    pub fn from_doubled(doubled: i64) -> Self {
        debug_assert!(doubled.rem_euclid(2) == 1, "half points have odd doubles");
        HalfPoint(doubled)
    }

    /// `v + 0.5`.
    pub fn after(v: Vertex) -> Self {
        HalfPoint(2 * v + 1)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Points `2n + 0.5`, the ground set of `nc`.
    pub fn is_primary(self) -> bool {
        self.0.rem_euclid(4) == 1
    }
}

impl fmt::Display for HalfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for HalfPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NcPartition {
    pub blocks: Vec<Vec<HalfPoint>>,
    /// Indices of blocks that are infinite or that run into an open window
    /// boundary.
    pub escaping: BTreeSet<usize>,
}

impl NcPartition {
    fn from_blocks(mut blocks: Vec<Vec<HalfPoint>>, escapes: impl Fn(&[HalfPoint]) -> bool) -> Self {
        for b in &mut blocks {
            b.sort();
        }
        blocks.sort();
        let escaping = blocks.iter().enumerate().filter(|(_, b)| escapes(b)).map(|(i, _)| i).collect();
        NcPartition { blocks, escaping }
    }

    pub fn points(&self) -> Vec<HalfPoint> {
        let mut p: Vec<HalfPoint> = self.blocks.iter().flatten().copied().collect();
        p.sort();
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcPair {
    pub nc: NcPartition,
    pub kreweras: NcPartition,
}

/// No two blocks `B ≠ B'` have `a < x < b < y` with `a, b ∈ B`, `x, y ∈ B'`.
pub fn is_noncrossing(blocks: &[Vec<HalfPoint>]) -> bool {
    let mut owner: Vec<(HalfPoint, usize)> =
        blocks.iter().enumerate().flat_map(|(i, b)| b.iter().map(move |&p| (p, i))).collect();
    owner.sort();
    // a partition of a line is noncrossing iff the sequence of block labels
    // avoids the pattern i..j..i..j
    let labels: Vec<usize> = owner.iter().map(|&(_, i)| i).collect();
    let n = labels.len();
    for a in 0..n {
        for x in a + 1..n {
            if labels[x] == labels[a] {
                continue;
            }
            for b in x + 1..n {
                if labels[b] != labels[a] {
                    continue;
                }
                if labels[b + 1..].contains(&labels[x]) {
                    return false;
                }
            }
        }
    }
    true
}

/// The coarsest partition of `points` whose union with `p` is noncrossing:
/// two points share a block unless some block of `p` separates them.
pub fn kreweras(p: &NcPartition, points: &[HalfPoint]) -> NcPartition {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let separates = |a: HalfPoint, b: HalfPoint| {
        p.blocks.iter().any(|blk| {
            let inside = blk.iter().any(|&x| a < x && x < b);
            let outside = blk.iter().any(|&x| x < a || b < x);
            inside && outside
        })
    };
    let mut parent: Vec<usize> = (0..pts.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if !separates(pts[i], pts[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[rj] = ri;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<HalfPoint>> = BTreeMap::new();
    for i in 0..pts.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(pts[i]);
    }
    NcPartition::from_blocks(groups.into_values().collect(), |_| false)
}

/// Successor and predecessor maps of the chain rule.
struct Chains {
    by_target: HashMap<Vertex, Arc>,
    by_source: HashMap<Vertex, Arc>,
    period: Option<i64>,
}

impl Chains {
    fn new(arcs: &[Arc], period: Option<i64>) -> Self {
        let key = |v: Vertex| period.map_or(v, |p| v.rem_euclid(p));
        Chains {
            by_target: arcs.iter().map(|&a| (key(a.target()), a)).collect(),
            by_source: arcs.iter().map(|&a| (key(a.source()), a)).collect(),
            period,
        }
    }

    fn lookup(&self, map: &HashMap<Vertex, Arc>, v: Vertex, target: bool) -> Option<Arc> {
        match self.period {
            None => map.get(&v).copied(),
            Some(p) => map.get(&v.rem_euclid(p)).map(|&a| {
                let end = if target { a.target() } else { a.source() };
                a.translate(v - end)
            }),
        }
    }

    fn succ(&self, x: HalfPoint) -> Option<HalfPoint> {
        let y = (x.0 + 1) / 2;
        self.lookup(&self.by_target, y, true).map(|a| HalfPoint::after(a.source()))
    }

    fn pred(&self, x: HalfPoint) -> Option<HalfPoint> {
        let y = (x.0 - 1) / 2;
        self.lookup(&self.by_source, y, false).map(|a| HalfPoint::after(a.target() - 1))
    }

    /// Follows the chain in one direction; true if it never ends.
    fn runs_forever(&self, x: HalfPoint, up: bool) -> bool {
        let Some(p) = self.period else { return false };
        let modulus = 4 * p;
        let mut seen = BTreeSet::new();
        let mut cur = x;
        loop {
            if !seen.insert(cur.0.rem_euclid(modulus)) {
                return true;
            }
            match if up { self.succ(cur) } else { self.pred(cur) } {
                Some(n) => cur = n,
                None => return false,
            }
        }
    }

    /// A point identifying the block of `x`: its maximum, or for blocks
    /// without one, the first member at or above `ceiling`.
    fn block_key(&self, x: HalfPoint, ceiling: i64) -> HalfPoint {
        let mut cur = x;
        while let Some(n) = self.succ(cur) {
            if cur.0 >= ceiling {
                break;
            }
            cur = n;
        }
        cur
    }

    fn blocks(&self, points: &[HalfPoint], ceiling: i64) -> Vec<Vec<HalfPoint>> {
        let mut groups: BTreeMap<HalfPoint, Vec<HalfPoint>> = BTreeMap::new();
        for &x in points {
            groups.entry(self.block_key(x, ceiling)).or_default().push(x);
        }
        groups.into_values().collect()
    }
}

fn window_points(lo: Vertex, hi: Vertex, primary: bool) -> Vec<HalfPoint> {
    (lo - 1..=hi).map(HalfPoint::after).filter(|p| p.is_primary() == primary).collect()
}

fn free_window(arcs: &[Arc], lo: Vertex, hi: Vertex) -> NcPair {
    let chains = Chains::new(arcs, None);
    let boundary = [HalfPoint::after(lo - 1), HalfPoint::after(hi)];
    let escapes = |b: &[HalfPoint]| b.iter().any(|p| boundary.contains(p));
    let ceiling = i64::MAX;
    let nc = NcPartition::from_blocks(chains.blocks(&window_points(lo, hi, true), ceiling), escapes);
    let mut kreweras = kreweras(&nc, &window_points(lo, hi, false));
    kreweras = NcPartition::from_blocks(kreweras.blocks, escapes);
    NcPair { nc, kreweras }
}

/// Chain-rule partition of the secondary points, for comparison with the
/// genuine complement.
pub fn kreweras_by_chains(d: &Diagram) -> Result<NcPartition> {
    check_input(d)?;
    let (lo, hi) = d.bounds().ok_or(Error::Unsupported("a window diagram"))?;
    let arcs: Vec<Arc> = d.arcs().iter().copied().collect();
    let chains = Chains::new(&arcs, None);
    Ok(NcPartition::from_blocks(chains.blocks(&window_points(lo, hi, false), i64::MAX), |_| false))
}

fn check_input(d: &Diagram) -> Result<()> {
    if d.weight().w() != -1 {
        return Err(Error::Unsupported("w = -1"));
    }
    let arcs: Vec<Arc> = d.arcs().iter().copied().collect();
    if let Some((a, b)) = first_crossing(&arcs) {
        return Err(Error::Crossing(a, b));
    }
    Ok(())
}

/// The partition `nc(S)` on the points `2n + 0.5` and its Kreweras
/// complement on the points `2n - 0.5`.
///
/// Free windows flag blocks through the outermost points as escaping, since
/// their continuation is unknown. In a sealed window the virtual overarc
/// ends every chain at the boundary, so no block escapes. Periodic diagrams
/// report the blocks meeting `[0, 2p)` and flag exactly the infinite ones.
pub fn nc_partition(d: &Diagram) -> Result<NcPair> {
    check_input(d)?;
    match d.mode() {
        Mode::Window { lo, hi, boundary } => {
            let arcs: Vec<Arc> = d.arcs().iter().copied().collect();
            let mut pair = free_window(&arcs, lo, hi);
            if boundary == Boundary::Sealed {
                pair.nc.escaping.clear();
                pair.kreweras.escaping.clear();
            }
            Ok(pair)
        }
        Mode::Periodic { period } => {
            let arcs: Vec<Arc> = d.arcs().iter().copied().collect();
            let chains = Chains::new(&arcs, Some(period));
            let ceiling = 2 * (2 * period) + 1;
            let side = |primary: bool| {
                let pts: Vec<HalfPoint> =
                    (0..2 * period).map(HalfPoint::after).filter(|p| p.is_primary() == primary).collect();
                NcPartition::from_blocks(chains.blocks(&pts, ceiling), |b| {
                    chains.runs_forever(b[0], true) || chains.runs_forever(b[0], false)
                })
            };
            Ok(NcPair { nc: side(true), kreweras: side(false) })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcAgreement {
    /// The criterion only speaks about Riedtmann configurations.
    pub applicable: bool,
    pub class: ClassValue,
    pub is_sms: bool,
    pub finite_blocks: bool,
    pub agree: bool,
}

/// Compares the class of `d` with finiteness of the blocks of `nc` and its
/// complement.
pub fn sms_iff_finite_blocks(d: &Diagram) -> Result<NcAgreement> {
    let pair = nc_partition(d)?;
    let class = classify_configuration(d, None).value;
    let applicable = class >= ClassValue::Riedtmann;
    let is_sms = class == ClassValue::Sms;
    let finite_blocks = pair.nc.escaping.is_empty() && pair.kreweras.escaping.is_empty();
    Ok(NcAgreement { applicable, class, is_sms, finite_blocks, agree: !applicable || is_sms == finite_blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arc::Weight;

    fn arc(s: i64, t: i64) -> Arc {
        Arc::new(s, t).unwrap()
    }

    fn hp(x: f64) -> HalfPoint {
        HalfPoint::from_doubled((2.0 * x) as i64)
    }

    fn blocks(v: &[&[f64]]) -> Vec<Vec<HalfPoint>> {
        v.iter().map(|b| b.iter().map(|&x| hp(x)).collect()).collect()
    }

    fn window(b: Boundary, lo: i64, hi: i64, arcs: &[(i64, i64)]) -> Diagram {
        Diagram::window(Weight::new(-1).unwrap(), lo, hi, b, arcs.iter().map(|&(s, t)| arc(s, t))).unwrap()
    }

    #[test]
    fn chain_example() {
        let d = window(Boundary::Free, 0, 3, &[(2, 1), (3, 0)]);
        let pair = nc_partition(&d).unwrap();
        assert_eq!(pair.nc.blocks, blocks(&[&[0.5, 2.5]]));
        assert_eq!(pair.kreweras.blocks, blocks(&[&[-0.5, 3.5], &[1.5]]));
        assert_eq!(kreweras_by_chains(&d).unwrap().blocks, pair.kreweras.blocks);
    }

    #[test]
    fn single_arc_example() {
        let d = window(Boundary::Free, 0, 1, &[(1, 0)]);
        let pair = nc_partition(&d).unwrap();
        assert_eq!(pair.nc.blocks, blocks(&[&[0.5]]));
        assert_eq!(pair.kreweras.blocks, blocks(&[&[-0.5, 1.5]]));
        assert_eq!(pair.kreweras.escaping, BTreeSet::from([0]));
    }

    #[test]
    fn empty_diagram_is_all_singletons() {
        let d = window(Boundary::Sealed, 0, 3, &[]);
        let pair = nc_partition(&d).unwrap();
        assert!(pair.nc.blocks.iter().all(|b| b.len() == 1));
        assert!(pair.nc.escaping.is_empty() && pair.kreweras.escaping.is_empty());
        let open = nc_partition(&window(Boundary::Free, 0, 0, &[])).unwrap();
        assert_eq!(open.nc.blocks.len() + open.kreweras.blocks.len(), 2);
        // the edge points of a free window may continue outside it
        assert_eq!(open.nc.escaping.len() + open.kreweras.escaping.len(), 2);
    }

    #[test]
    fn agreement_examples() {
        let a = sms_iff_finite_blocks(&window(Boundary::Sealed, -1, 2, &[(1, 0), (2, -1)])).unwrap();
        assert!(a.applicable && a.is_sms && a.finite_blocks && a.agree);

        let strip: Vec<(i64, i64)> = (0..5).map(|k| (2 * k + 1, 2 * k)).collect();
        let a = sms_iff_finite_blocks(&window(Boundary::Free, 0, 9, &strip)).unwrap();
        assert!(a.applicable && !a.is_sms && !a.finite_blocks && a.agree);
        let pair = nc_partition(&window(Boundary::Free, 0, 9, &strip)).unwrap();
        // every target is even, so the primary points stay singletons and
        // the complement carries the single block running off both edges
        assert!(pair.nc.blocks.iter().all(|b| b.len() == 1) && pair.nc.escaping.is_empty());
        assert_eq!(pair.kreweras.blocks.len(), 1);
        assert_eq!(pair.kreweras.escaping, BTreeSet::from([0]));

        let a = sms_iff_finite_blocks(&window(Boundary::Sealed, 0, 3, &[(1, 0), (3, 2)])).unwrap();
        assert!(a.applicable && a.is_sms && a.finite_blocks && a.agree);
    }

    #[test]
    fn periodic_blocks_are_infinite() {
        let d = Diagram::periodic(Weight::new(-1).unwrap(), 2, [arc(1, 0)]).unwrap();
        let pair = nc_partition(&d).unwrap();
        assert!(pair.nc.escaping.is_empty());
        assert_eq!(pair.kreweras.blocks, blocks(&[&[1.5, 3.5]]));
        assert_eq!(pair.kreweras.escaping, BTreeSet::from([0]));
        let a = sms_iff_finite_blocks(&d).unwrap();
        assert!(a.applicable && !a.is_sms && !a.finite_blocks && a.agree);
    }

    #[test]
    fn rejects_other_weights() {
        let d = Diagram::window(Weight::new(-2).unwrap(), 0, 3, Boundary::Free, [arc(2, 0)]).unwrap();
        assert!(matches!(nc_partition(&d), Err(Error::Unsupported(_))));
    }

    #[test]
    fn noncrossing_detection() {
        assert!(is_noncrossing(&blocks(&[&[0.5, 2.5], &[1.5]])));
        assert!(!is_noncrossing(&blocks(&[&[0.5, 2.5], &[1.5, 3.5]])));
    }
}
