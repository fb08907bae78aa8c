//! Finite presentations of arc configurations.
//!
//! A window diagram lists arcs inside `[lo, hi]`. A sealed window carries an
//! implicit virtual overarc `(hi + 1, lo - 1)` standing in for the rest of an
//! infinite configuration in which every arc has an overarc. A periodic
//! diagram lists arcs with sources in `[0, period)`; the configuration is the
//! union of all translates by multiples of the period.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arc::{crosses, ensure_admissible, Arc, Vertex, Weight};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Free,
    Sealed,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Free => "free",
            Boundary::Sealed => "sealed",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Window { lo: Vertex, hi: Vertex, boundary: Boundary },
    Periodic { period: i64 },
}

/// Arc lengths in a periodic diagram must stay below this many periods.
pub const PERIODIC_LENGTH_BOUND: i64 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    weight: Weight,
    mode: Mode,
    arcs: BTreeSet<Arc>,
}

impl Diagram {
    pub fn window(
        weight: Weight,
        lo: Vertex,
        hi: Vertex,
        boundary: Boundary,
        arcs: impl IntoIterator<Item = Arc>,
    ) -> Result<Self> {
        let d = Diagram { weight, mode: Mode::Window { lo, hi, boundary }, arcs: arcs.into_iter().collect() };
        d.validate()?;
        Ok(d)
    }

    pub fn periodic(weight: Weight, period: i64, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        let d = Diagram { weight, mode: Mode::Periodic { period }, arcs: arcs.into_iter().collect() };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        for &a in &self.arcs {
            ensure_admissible(self.weight, a)?;
        }
        match self.mode {
            Mode::Window { lo, hi, boundary } => {
                if lo > hi {
                    return Err(Error::InvalidDiagram(format!("empty window [{lo}, {hi}]")));
                }
                for &a in &self.arcs {
                    if a.target() < lo || a.source() > hi {
                        return Err(Error::OutsideWindow { arc: a, lo, hi });
                    }
                }
                if boundary == Boundary::Sealed {
                    if let Some((a, b)) = first_crossing(&self.arcs.iter().copied().collect::<Vec<_>>()) {
                        return Err(Error::Crossing(a, b));
                    }
                }
            }
            Mode::Periodic { period } => {
                if period < 1 {
                    return Err(Error::InvalidDiagram(format!("period must be positive, got {period}")));
                }
                for &a in &self.arcs {
                    if !(0..period).contains(&a.source()) {
                        return Err(Error::InvalidDiagram(format!(
                            "periodic arc {a} must have its source in [0, {period})"
                        )));
                    }
                    if a.len() >= PERIODIC_LENGTH_BOUND * period {
                        return Err(Error::InvalidDiagram(format!(
                            "periodic arc {a} is longer than {} periods",
                            PERIODIC_LENGTH_BOUND
                        )));
                    }
                }
                let reach = self.reach();
                for &a in &self.arcs {
                    for k in -reach..=reach {
                        for &b in &self.arcs {
                            let bt = b.translate(k * period);
                            if a != bt && crosses(a, bt) {
                                return Err(Error::InvalidDiagram(format!(
                                    "translates cross: {a} (copy 0) and {bt} (copy {k})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn arcs(&self) -> &BTreeSet<Arc> {
        &self.arcs
    }

    pub fn contains(&self, a: Arc) -> bool {
        self.arcs.contains(&a)
    }

    pub fn bounds(&self) -> Option<(Vertex, Vertex)> {
        match self.mode {
            Mode::Window { lo, hi, .. } => Some((lo, hi)),
            Mode::Periodic { .. } => None,
        }
    }

    pub fn boundary(&self) -> Option<Boundary> {
        match self.mode {
            Mode::Window { boundary, .. } => Some(boundary),
            Mode::Periodic { .. } => None,
        }
    }

    pub fn is_sealed(&self) -> bool {
        self.boundary() == Some(Boundary::Sealed)
    }

    pub fn period(&self) -> Option<i64> {
        match self.mode {
            Mode::Periodic { period } => Some(period),
            Mode::Window { .. } => None,
        }
    }

    /// Number of vertices in a window.
    pub fn span(&self) -> Option<i64> {
        self.bounds().map(|(lo, hi)| hi - lo + 1)
    }

    /// The implicit overarc of a sealed window.
    pub fn virtual_overarc(&self) -> Option<Arc> {
        match self.mode {
            Mode::Window { lo, hi, boundary: Boundary::Sealed } => Arc::new(hi + 1, lo - 1).ok(),
            _ => None,
        }
    }

    /// Same mode, different arcs.
    pub fn with_arcs(&self, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        let d = Diagram { weight: self.weight, mode: self.mode, arcs: arcs.into_iter().collect() };
        d.validate()?;
        Ok(d)
    }

    /// Same arcs in a different window.
    pub fn rewindow(&self, lo: Vertex, hi: Vertex, boundary: Boundary) -> Result<Self> {
        Diagram::window(self.weight, lo, hi, boundary, self.arcs.iter().copied())
    }

    /// `self ∖ {old} ∪ {new}`.
    pub fn replace(&self, old: Arc, new: Arc) -> Result<Self> {
        if !self.contains(old) {
            return Err(Error::ArcNotInDiagram(old));
        }
        self.with_arcs(self.arcs.iter().copied().filter(|&a| a != old).chain(std::iter::once(new)))
    }

    /// Reflection `v ↦ -v` of the whole diagram. Periodic diagrams are
    /// re-normalized so that sources lie in the fundamental domain again.
    pub fn reflect(&self) -> Diagram {
        match self.mode {
            Mode::Window { lo, hi, boundary } => Diagram {
                weight: self.weight,
                mode: Mode::Window { lo: -hi, hi: -lo, boundary },
                arcs: self.arcs.iter().map(|a| a.reflect()).collect(),
            },
            Mode::Periodic { period } => Diagram {
                weight: self.weight,
                mode: self.mode,
                arcs: self
                    .arcs
                    .iter()
                    .map(|a| {
                        let r = a.reflect();
                        r.translate(-r.source().div_euclid(period) * period)
                    })
                    .collect(),
            },
        }
    }

    /// Number of periods on either side needed to see every arc that covers
    /// or touches the fundamental domain.
    pub fn reach(&self) -> i64 {
        match self.mode {
            Mode::Periodic { period } => {
                let max_len = self.arcs.iter().map(|a| a.len()).max().unwrap_or(0);
                (max_len + period - 1) / period + 1
            }
            Mode::Window { .. } => 0,
        }
    }

    /// Translates of a periodic diagram by `k · period` for `k` in `kmin..=kmax`.
    /// For window diagrams this is just the arc list.
    pub fn translates(&self, kmin: i64, kmax: i64) -> Vec<Arc> {
        match self.mode {
            Mode::Periodic { period } => {
                let mut out: Vec<Arc> = (kmin..=kmax)
                    .flat_map(|k| self.arcs.iter().map(move |a| a.translate(k * period)))
                    .collect();
                out.sort();
                out
            }
            Mode::Window { .. } => self.arcs.iter().copied().collect(),
        }
    }

    /// Arcs needed to classify the vertices of [`Diagram::vertex_range`].
    pub fn materialized_arcs(&self) -> Vec<Arc> {
        let r = self.reach();
        self.translates(-r - 1, r + 1)
    }

    /// Vertices classified by the checkers: the window, or one period.
    pub fn vertex_range(&self) -> std::ops::RangeInclusive<Vertex> {
        match self.mode {
            Mode::Window { lo, hi, .. } => lo..=hi,
            Mode::Periodic { period } => 0..=period - 1,
        }
    }
}

/// First pair of arcs crossing in the wide sense, in sorted order.
pub fn first_crossing(arcs: &[Arc]) -> Option<(Arc, Arc)> {
    let mut sorted = arcs.to_vec();
    sorted.sort();
    for (i, &a) in sorted.iter().enumerate() {
        for &b in &sorted[i + 1..] {
            if b.target() > a.source() {
                break;
            }
            if crosses(a, b) {
                return Some((a, b));
            }
        }
    }
    None
}
