//! Completions at an arc and mutation by approximations.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arc::{is_admissible, Arc, Vertex};
use crate::config::{classify_fast, layout, smallest_overarc, ClassValue, Layout};
use crate::diagram::{Diagram, Mode};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FanMethod {
    Constructive,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationFan {
    pub at: Arc,
    pub completions: BTreeSet<Arc>,
    pub proper_replacements: BTreeSet<Arc>,
    pub method: FanMethod,
}

impl MutationFan {
    fn new(at: Arc, completions: BTreeSet<Arc>, method: FanMethod) -> Self {
        let proper_replacements = completions.iter().copied().filter(|&c| c != at).collect();
        MutationFan { at, completions, proper_replacements, method }
    }
}

/// The class a replacement has to keep: sealed windows stay sealed-valid,
/// free windows stay hom configurations.
fn required_class(d: &Diagram) -> ClassValue {
    if d.is_sealed() {
        ClassValue::Sms
    } else {
        ClassValue::HomConfig
    }
}

fn check_mutable(d: &Diagram, s: Arc) -> Result<(i64, i64)> {
    let Mode::Window { lo, hi, .. } = d.mode() else {
        return Err(Error::Unsupported("a window diagram"));
    };
    if !d.contains(s) {
        return Err(Error::ArcNotInDiagram(s));
    }
    let class = classify_fast(d).value;
    let needed = required_class(d);
    if class < needed {
        return Err(Error::NotHomConfig(format!("class is {class}, mutation needs {needed}")));
    }
    Ok((lo, hi))
}

fn rest_of(d: &Diagram, s: Arc) -> Vec<Arc> {
    d.arcs().iter().copied().filter(|&a| a != s).collect()
}

/// Completions of `D ∖ {s}` built from the positions of isolated vertices.
pub fn completions_at(d: &Diagram, s: Arc) -> Result<MutationFan> {
    let (lo, hi) = check_mutable(d, s)?;
    let w = d.weight().abs() as usize;
    let rest = rest_of(d, s);
    let over = smallest_overarc(rest.iter().copied(), s);
    let mut completions = BTreeSet::new();
    if over.is_some() || d.is_sealed() {
        let lay = layout(&rest, lo..=hi);
        let mut xs = match over {
            Some(a) => lay.inner.get(&a).cloned().unwrap_or_default(),
            None => lay.outer.clone(),
        };
        xs.sort_unstable();
        if xs.len() != 2 * w {
            return Err(Error::NotHomConfig(format!(
                "expected {} isolated vertices under the overarc of {s}, found {}",
                2 * w,
                xs.len()
            )));
        }
        for i in 0..w {
            completions.insert(Arc::new(xs[w + i], xs[i]).expect("sorted vertices"));
        }
    } else {
        let lay = layout(&d.arcs().iter().copied().collect::<Vec<_>>(), lo..=hi);
        let v = &lay.outer;
        let k = v.len();
        let (t, u) = (s.source(), s.target());
        // x_0 = u, x_1..x_{|w|-1} the inner-isolated vertices of s, x_{|w|} = t
        let mut x: Vec<Vertex> = vec![u];
        let mut inner = lay.inner.get(&s).cloned().unwrap_or_default();
        inner.sort_unstable();
        x.extend(inner);
        x.push(t);
        debug_assert_eq!(x.len(), w + 1);
        let j = v.iter().filter(|&&y| y < u).count();
        let pair = |a: Vertex, b: Vertex| Arc::spanning(a, b).expect("distinct vertices");
        completions.insert(s);
        for i in 1..=j {
            completions.insert(pair(x[w - i], v[j - i]));
        }
        for i in 1..=k - j {
            completions.insert(pair(v[j + i - 1], x[i]));
        }
    }
    debug_assert!(completions.iter().all(|&c| is_admissible(d.weight(), c)));
    Ok(MutationFan::new(s, completions, FanMethod::Constructive))
}

/// Completions found by trying every admissible arc on the isolated vertices
/// of `D ∖ {s}` and classifying the result.
pub fn brute_force_completions(d: &Diagram, s: Arc) -> Result<MutationFan> {
    let (lo, hi) = check_mutable(d, s)?;
    let wt = d.weight();
    let needed = required_class(d);
    let rest = rest_of(d, s);
    let used: BTreeSet<Vertex> = rest.iter().flat_map(|a| a.endpoints()).collect();
    let free: Vec<Vertex> = (lo..=hi).filter(|v| !used.contains(v)).collect();
    let mut completions = BTreeSet::new();
    for (i, &u) in free.iter().enumerate() {
        for &t in &free[i + 1..] {
            let c = Arc::new(t, u).expect("ordered");
            if !is_admissible(wt, c) {
                continue;
            }
            let Ok(candidate) = d.with_arcs(rest.iter().copied().chain(std::iter::once(c))) else {
                continue;
            };
            if classify_fast(&candidate).value >= needed {
                completions.insert(c);
            }
        }
    }
    Ok(MutationFan::new(s, completions, FanMethod::Oracle))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxStep {
    pub at: Arc,
    pub overarc: Arc,
    pub case: u8,
    pub e1: Option<Arc>,
    pub e2: Option<Arc>,
    pub s_prime: Arc,
    /// `Σ^{-1} s'` for left mutation, `Σ s'` for right mutation.
    pub s_star: Arc,
}

fn sorted_inner(lay: &Layout, a: Arc) -> Vec<Vertex> {
    let mut v = lay.inner.get(&a).cloned().unwrap_or_default();
    v.sort_unstable();
    v
}

fn left_step(d: &Diagram, s: Arc) -> Result<ApproxStep> {
    let (lo, hi) = d.bounds().expect("checked window");
    let arcs: Vec<Arc> = d.arcs().iter().copied().collect();
    let a = smallest_overarc(arcs.iter().copied(), s).ok_or(Error::NoOverarc(s))?;
    let lay = layout(&arcs, lo..=hi);
    let inner_a = sorted_inner(&lay, a);
    let inner_s = sorted_inner(&lay, s);
    let (ss, ts) = (s.source(), s.target());
    let mk = |x: Vertex, y: Vertex| Arc::spanning(x, y);

    let (case, e1, e2, s_prime) = if inner_a.is_empty() {
        let e1 = mk(ss + 1, ts - 1);
        let e2 = if s.len() > 1 { mk(ss - 1, ts + 1) } else { None };
        let e1a = e1.expect("distinct");
        let sp = match e2 {
            Some(e2) => mk(e2.source(), e1a.target()),
            None => mk(ts, e1a.target()),
        };
        (1, e1, e2, sp)
    } else {
        let v_prime = *inner_s.first().ok_or(Error::NotHomConfig(format!("{s} has no inner-isolated vertex")))?;
        let e2 = if v_prime - 1 != ts { mk(v_prime - 1, ts + 1) } else { None };
        if let Some(&v) = inner_a.iter().find(|&&v| v > ss) {
            let e1 = if v - 1 != ss { mk(v - 1, ss + 1) } else { None };
            let sp = match (e1, e2) {
                (Some(e1), Some(e2)) => mk(e1.source(), e2.source()),
                (None, Some(e2)) => mk(ss, e2.source()),
                (Some(e1), None) => mk(e1.source(), ts),
                (None, None) => Some(s),
            };
            (2, e1, e2, sp)
        } else {
            let v = inner_a[0];
            let e1 = mk(ss + 1, v - 1);
            let e1a = e1.expect("distinct");
            let sp = match e2 {
                Some(e2) => mk(e2.source(), e1a.target()),
                None => mk(ts, e1a.target()),
            };
            (3, e1, e2, sp)
        }
    };
    let s_prime = s_prime.ok_or(Error::NotHomConfig(format!("degenerate approximation at {s}")))?;
    let s_star = s_prime.suspend(-1);
    debug_assert!(is_admissible(d.weight(), s_star), "{s_star} at {s} in {d:?}");
    Ok(ApproxStep { at: s, overarc: a, case, e1, e2, s_prime, s_star })
}

fn reflect_step(p: ApproxStep) -> ApproxStep {
    ApproxStep {
        at: p.at.reflect(),
        overarc: p.overarc.reflect(),
        case: p.case,
        e1: p.e1.map(Arc::reflect),
        e2: p.e2.map(Arc::reflect),
        s_prime: p.s_prime.reflect(),
        s_star: p.s_star.reflect(),
    }
}

/// One mutation step at `s` through a minimal approximation by the extension
/// closure of the other arcs. Right mutation is computed in the mirror image.
pub fn approx_mutate(d: &Diagram, s: Arc, direction: Direction) -> Result<ApproxStep> {
    check_mutable(d, s)?;
    match direction {
        Direction::Left => left_step(d, s),
        Direction::Right => left_step(&d.reflect(), s.reflect()).map(reflect_step),
    }
}

/// Repeated mutation, replacing the current arc by its mutation each time.
pub fn iterate_mutations(d: &Diagram, s: Arc, steps: usize, direction: Direction) -> Result<Vec<ApproxStep>> {
    let mut cur = d.clone();
    let mut at = s;
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let step = approx_mutate(&cur, at, direction)?;
        if step.s_star != at {
            cur = cur.replace(at, step.s_star)?;
        }
        at = step.s_star;
        out.push(step);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arc::Weight;
    use crate::config::unfold;
    use crate::diagram::Boundary;

    fn arc(s: i64, t: i64) -> Arc {
        Arc::new(s, t).unwrap()
    }

    fn diagram(w: i64, b: Boundary, lo: i64, hi: i64, arcs: &[(i64, i64)]) -> Diagram {
        Diagram::window(Weight::new(w).unwrap(), lo, hi, b, arcs.iter().map(|&(s, t)| arc(s, t))).unwrap()
    }

    fn set(v: &[(i64, i64)]) -> BTreeSet<Arc> {
        v.iter().map(|&(s, t)| arc(s, t)).collect()
    }

    fn running_w3() -> Diagram {
        diagram(-3, Boundary::Free, -3, 8, &[(3, 0), (7, 4), (8, -3)])
    }

    #[test]
    fn fan_examples() {
        let d = diagram(-2, Boundary::Sealed, -1, 5, &[(2, 0), (4, -1)]);
        let f = completions_at(&d, arc(2, 0)).unwrap();
        assert_eq!(f.completions, set(&[(2, 0), (3, 1)]));
        assert_eq!(f.proper_replacements, set(&[(3, 1)]));
        assert_eq!(brute_force_completions(&d, arc(2, 0)).unwrap().completions, f.completions);

        let f = completions_at(&running_w3(), arc(3, 0)).unwrap();
        assert_eq!(f.completions, set(&[(3, 0), (2, -1), (1, -2)]));
        assert_eq!(f.proper_replacements.len(), 2);
        assert_eq!(brute_force_completions(&running_w3(), arc(3, 0)).unwrap().completions, f.completions);

        let d = diagram(-1, Boundary::Sealed, -1, 2, &[(1, 0), (2, -1)]);
        let f = completions_at(&d, arc(1, 0)).unwrap();
        assert_eq!(f.completions, set(&[(1, 0)]));
        assert!(f.proper_replacements.is_empty());
    }

    #[test]
    fn outer_arc_in_free_window() {
        // single arc, nothing outer-isolated: only the arc itself
        let d = diagram(-2, Boundary::Free, 0, 2, &[(2, 0)]);
        assert_eq!(completions_at(&d, arc(2, 0)).unwrap().completions, set(&[(2, 0)]));
        assert_eq!(brute_force_completions(&d, arc(2, 0)).unwrap().completions, set(&[(2, 0)]));
        // one outer-isolated vertex on the right gives one replacement
        let d = diagram(-2, Boundary::Free, 0, 3, &[(2, 0)]);
        let f = completions_at(&d, arc(2, 0)).unwrap();
        assert_eq!(f.completions, set(&[(2, 0), (3, 1)]));
        assert_eq!(brute_force_completions(&d, arc(2, 0)).unwrap().completions, f.completions);
    }

    #[test]
    fn approx_examples() {
        let d = diagram(-1, Boundary::Sealed, -1, 2, &[(1, 0), (2, -1)]);
        let p = approx_mutate(&d, arc(1, 0), Direction::Left).unwrap();
        assert_eq!(p.case, 1);
        assert_eq!(p.e1, Some(arc(2, -1)));
        assert_eq!(p.e2, None);
        assert_eq!(p.s_prime, arc(0, -1));
        assert_eq!(p.s_star, arc(1, 0));

        let d = diagram(-2, Boundary::Sealed, -1, 5, &[(2, 0), (4, -1)]);
        let p = approx_mutate(&d, arc(2, 0), Direction::Left).unwrap();
        assert_eq!((p.case, p.e1, p.e2, p.s_prime, p.s_star), (2, None, None, arc(2, 0), arc(3, 1)));

        let p = approx_mutate(&running_w3(), arc(3, 0), Direction::Left).unwrap();
        assert_eq!(p.case, 3);
        assert_eq!(p.e1, Some(arc(4, -3)));
        assert_eq!(p.e2, None);
        assert_eq!(p.s_prime, arc(0, -3));
        assert_eq!(p.s_star, arc(1, -2));
    }

    #[test]
    fn approx_needs_a_real_overarc() {
        let d = diagram(-2, Boundary::Sealed, -1, 5, &[(2, 0), (4, -1)]);
        assert!(matches!(approx_mutate(&d, arc(4, -1), Direction::Left), Err(Error::NoOverarc(_))));
        let u = unfold(&d, 1).unwrap();
        assert!(approx_mutate(&u, arc(4, -1), Direction::Left).is_ok());
    }

    #[test]
    fn iteration_cycles() {
        let path = |d: &Diagram, s: Arc, n| -> Vec<Arc> {
            let mut v = vec![s];
            v.extend(iterate_mutations(d, s, n, Direction::Left).unwrap().iter().map(|p| p.s_star));
            v
        };
        assert_eq!(
            path(&running_w3(), arc(3, 0), 3),
            vec![arc(3, 0), arc(1, -2), arc(2, -1), arc(3, 0)]
        );
        let d = diagram(-2, Boundary::Sealed, -1, 5, &[(2, 0), (4, -1)]);
        assert_eq!(path(&d, arc(2, 0), 2), vec![arc(2, 0), arc(3, 1), arc(2, 0)]);
        let d = diagram(-1, Boundary::Sealed, -1, 2, &[(1, 0), (2, -1)]);
        assert_eq!(path(&d, arc(1, 0), 1), vec![arc(1, 0), arc(1, 0)]);
    }

    #[test]
    fn right_mutation_inverts_left() {
        let d = running_w3();
        let l = approx_mutate(&d, arc(3, 0), Direction::Left).unwrap();
        let moved = d.replace(arc(3, 0), l.s_star).unwrap();
        let r = approx_mutate(&moved, l.s_star, Direction::Right).unwrap();
        assert_eq!(r.s_star, arc(3, 0));
    }

    #[test]
    fn rejects_bad_input() {
        let d = diagram(-2, Boundary::Free, 0, 5, &[(5, 0)]);
        assert!(matches!(completions_at(&d, arc(5, 0)), Err(Error::NotHomConfig(_))));
        let d = diagram(-2, Boundary::Free, 0, 3, &[(2, 0)]);
        assert!(matches!(completions_at(&d, arc(3, 1)), Err(Error::ArcNotInDiagram(_))));
        let p = Diagram::periodic(Weight::new(-1).unwrap(), 2, [arc(1, 0)]).unwrap();
        assert!(matches!(completions_at(&p, arc(1, 0)), Err(Error::Unsupported(_))));
    }
}
