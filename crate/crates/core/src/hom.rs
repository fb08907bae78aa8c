//! Dimensions of Hom and Ext spaces between indecomposables.
//!
//! Every computation goes through [`ext1`], which decides whether
//! `Ext^1(b, a)` is nonzero and, when it is, returns the middle term of the
//! nonsplit triangle `a → e → b → Σa`. The case list is treated as a complete
//! characterization: besides `b = Σa`, the arcs must either strictly cross
//! with an admissible pair of reconnecting arcs, or be neighbouring in one of
//! three oriented positions.
//!
//! `Hom(x, y) = Ext^1(x, Σ^{-1} y)` and `Ext^k(x, y) = Hom(x, Σ^k y)`.

use serde::{Deserialize, Serialize};

use crate::arc::{ensure_admissible, is_admissible, relate, Arc, RelationKind, Weight};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ext1Case {
    SigmaShift,
    CrossPlus,
    CrossMinus,
    NbrE1Plus,
    NbrE1Minus,
    NbrE2Minus,
    None,
}

impl Ext1Case {
    pub fn is_neighbouring(self) -> bool {
        matches!(self, Ext1Case::NbrE1Plus | Ext1Case::NbrE1Minus | Ext1Case::NbrE2Minus)
    }

    pub fn is_crossing(self) -> bool {
        matches!(self, Ext1Case::CrossPlus | Ext1Case::CrossMinus)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ext1Answer {
    pub nonzero: bool,
    /// Indecomposable summands of the middle term.
    pub middle: Vec<Arc>,
    pub case: Ext1Case,
}

impl Ext1Answer {
    fn zero() -> Self {
        Ext1Answer { nonzero: false, middle: Vec::new(), case: Ext1Case::None }
    }

    fn with(case: Ext1Case, middle: Vec<Arc>) -> Self {
        Ext1Answer { nonzero: true, middle, case }
    }
}

/// `Ext^1(b, a)` together with the middle term of `a → e → b`.
pub fn ext1(w: Weight, b: Arc, a: Arc) -> Result<Ext1Answer> {
    ensure_admissible(w, a)?;
    ensure_admissible(w, b)?;
    Ok(ext1_unchecked(w, b, a))
}

pub(crate) fn ext1_unchecked(w: Weight, b: Arc, a: Arc) -> Ext1Answer {
    if b == a.suspend(1) {
        return Ext1Answer::with(Ext1Case::SigmaShift, Vec::new());
    }
    if a == b {
        return Ext1Answer::zero();
    }
    // cheap reject before building the full relation
    if a.source() + 1 < b.target() || b.source() + 1 < a.target() {
        return Ext1Answer::zero();
    }
    let rel = relate(a, b).expect("distinct arcs");
    match rel.kind {
        RelationKind::StrictCross => {
            let pair = if b.target() < a.target() {
                (Ext1Case::CrossPlus, Arc::spanning(a.source(), b.target()), Arc::spanning(b.source(), a.target()))
            } else {
                (Ext1Case::CrossMinus, Arc::spanning(b.source(), a.source()), Arc::spanning(b.target(), a.target()))
            };
            match pair {
                (case, Some(e1), Some(e2)) => {
                    let ok1 = is_admissible(w, e1);
                    debug_assert_eq!(ok1, is_admissible(w, e2), "opposite Ptolemy arcs disagree");
                    if ok1 {
                        Ext1Answer::with(case, vec![e1, e2])
                    } else {
                        Ext1Answer::zero()
                    }
                }
                _ => Ext1Answer::zero(),
            }
        }
        RelationKind::SharedVertex => Ext1Answer::zero(),
        RelationKind::Nested | RelationKind::Disjoint if rel.neighbouring => {
            let (sa, ta, sb, tb) = (a.source(), a.target(), b.source(), b.target());
            let found = if ta == sb + 1 {
                Arc::spanning(sa, tb).map(|e| (Ext1Case::NbrE1Plus, e))
            } else if ta == tb + 1 && sa < sb {
                Arc::spanning(sb, sa).map(|e| (Ext1Case::NbrE1Minus, e))
            } else if sa == sb + 1 && ta < tb {
                Arc::spanning(tb, ta).map(|e| (Ext1Case::NbrE2Minus, e))
            } else {
                None
            };
            match found {
                Some((case, e)) => {
                    debug_assert!(is_admissible(w, e));
                    Ext1Answer::with(case, vec![e])
                }
                None => Ext1Answer::zero(),
            }
        }
        _ => Ext1Answer::zero(),
    }
}

/// `dim Hom(x, y)`, always 0 or 1.
pub fn hom_dim(w: Weight, x: Arc, y: Arc) -> Result<u8> {
    ensure_admissible(w, x)?;
    ensure_admissible(w, y)?;
    Ok(hom_dim_unchecked(w, x, y))
}

pub(crate) fn hom_dim_unchecked(w: Weight, x: Arc, y: Arc) -> u8 {
    ext1_unchecked(w, x, y.suspend(-1)).nonzero as u8
}

/// `dim Ext^k(x, y) = dim Hom(x, Σ^k y)`.
pub fn ext_dim(w: Weight, k: i64, x: Arc, y: Arc) -> Result<u8> {
    hom_dim(w, x, y.suspend(k))
}

pub(crate) fn ext_dim_unchecked(w: Weight, k: i64, x: Arc, y: Arc) -> u8 {
    hom_dim_unchecked(w, x, y.suspend(k))
}
