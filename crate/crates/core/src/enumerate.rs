//! Exhaustive enumeration of window diagrams by class.

use serde::{Deserialize, Serialize};

use crate::arc::{is_admissible, Arc, Vertex, Weight};
use crate::config::{classify_fast, ClassValue};
use crate::diagram::{Boundary, Diagram};
use crate::error::{Error, Result};

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumRequest {
    pub w: Weight,
    pub lo: Vertex,
    pub hi: Vertex,
    pub boundary: Boundary,
    /// Emitted diagrams classify at least this high.
    pub class: ClassValue,
    pub cap: usize,
}

impl EnumRequest {
    pub fn new(w: Weight, lo: Vertex, hi: Vertex, boundary: Boundary, class: ClassValue) -> Self {
        EnumRequest { w, lo, hi, boundary, class, cap: DEFAULT_CAP }
    }
}

struct Search<'a> {
    req: &'a EnumRequest,
    inner_bound: Option<usize>,
    outer_max: usize,
    out: Vec<Vec<Arc>>,
}

struct Open {
    target: Vertex,
    inner: usize,
}

impl Search<'_> {
    fn run(&mut self, v: Vertex, stack: &mut Vec<Open>, arcs: &mut Vec<Arc>, outer: usize) -> Result<()> {
        if v > self.req.hi {
            if stack.is_empty() {
                if self.out.len() >= self.req.cap {
                    return Err(Error::BudgetExceeded { cap: self.req.cap });
                }
                self.out.push(arcs.clone());
            }
            return Ok(());
        }
        // v isolated
        match stack.last_mut() {
            Some(top) => {
                if self.inner_bound.is_none_or(|b| top.inner < b) {
                    top.inner += 1;
                    self.run(v + 1, stack, arcs, outer)?;
                    stack.last_mut().expect("nonempty").inner -= 1;
                }
            }
            None => {
                if outer < self.outer_max {
                    self.run(v + 1, stack, arcs, outer + 1)?;
                }
            }
        }
        // v closes the innermost open arc
        if let Some(top) = stack.pop() {
            let a = Arc::new(v, top.target).expect("ordered");
            if is_admissible(self.req.w, a) && self.inner_bound.is_none_or(|b| top.inner == b) {
                arcs.push(a);
                self.run(v + 1, stack, arcs, outer)?;
                arcs.pop();
            }
            stack.push(top);
        }
        // v opens a new arc, which needs room for an admissible length
        if v + self.req.w.abs() <= self.req.hi {
            stack.push(Open { target: v, inner: 0 });
            self.run(v + 1, stack, arcs, outer)?;
            stack.pop();
        }
        Ok(())
    }
}

/// All diagrams on the window whose class is at least `req.class`, in
/// lexicographic order of their sorted arc lists.
///
/// Noncrossing sets are generated by a left-to-right scan that keeps the
/// open arcs on a stack, so the innermost open arc is always the smallest
/// overarc of the current vertex. Classes from hom configurations upward are
/// pruned by their isolated-vertex counts; every candidate is then confirmed
/// by the classifier.
pub fn enumerate_configs(req: &EnumRequest) -> Result<Vec<Diagram>> {
    if req.lo > req.hi {
        return Err(Error::InvalidDiagram(format!("empty window [{}, {}]", req.lo, req.hi)));
    }
    if req.class == ClassValue::Invalid {
        return enumerate_all(req);
    }
    let a = req.w.abs() as usize;
    let span = (req.hi - req.lo + 1) as usize;
    let (inner_bound, outer_max) = match req.class {
        ClassValue::Invalid | ClassValue::Orthogonal => (None, span),
        ClassValue::HomConfig => (Some(a - 1), a),
        ClassValue::Riedtmann | ClassValue::Sms => (Some(a - 1), a - 1),
    };
    let mut search = Search { req, inner_bound, outer_max, out: Vec::new() };
    search.run(req.lo, &mut Vec::new(), &mut Vec::new(), 0)?;
    let mut out = Vec::with_capacity(search.out.len());
    for mut arcs in search.out {
        arcs.sort();
        let d = Diagram::window(req.w, req.lo, req.hi, req.boundary, arcs)?;
        if classify_fast(&d).value >= req.class {
            out.push(d);
        }
    }
    out.sort_by(|x, y| x.arcs().iter().cmp(y.arcs().iter()));
    Ok(out)
}

/// Every subset of admissible arcs, crossings included.
fn enumerate_all(req: &EnumRequest) -> Result<Vec<Diagram>> {
    let arcs = admissible_arcs(req.w, req.lo, req.hi);
    if arcs.len() >= usize::BITS as usize || (1usize << arcs.len()) > req.cap {
        return Err(Error::BudgetExceeded { cap: req.cap });
    }
    let mut out = Vec::with_capacity(1 << arcs.len());
    for mask in 0usize..1 << arcs.len() {
        let pick = arcs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a);
        match Diagram::window(req.w, req.lo, req.hi, req.boundary, pick) {
            Ok(d) => out.push(d),
            // sealed windows cannot hold crossings
            Err(Error::Crossing(..)) => {}
            Err(e) => return Err(e),
        }
    }
    out.sort_by(|x, y| x.arcs().iter().cmp(y.arcs().iter()));
    Ok(out)
}

/// Admissible arcs with both endpoints in `[lo, hi]`, sorted.
pub fn admissible_arcs(w: Weight, lo: Vertex, hi: Vertex) -> Vec<Arc> {
    let mut out = Vec::new();
    for u in lo..=hi {
        let mut t = u + w.abs();
        while t <= hi {
            let a = Arc::new(t, u).expect("positive length");
            debug_assert!(is_admissible(w, a));
            out.push(a);
            t += w.modulus();
        }
    }
    out.sort();
    out
}
