//! Mutation graphs of all configurations on a window.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::arc::{Arc, Vertex, Weight};
use crate::config::{classify_fast, ClassValue};
use crate::diagram::Boundary;
use crate::enumerate::{enumerate_configs, EnumRequest};
use crate::error::{Error, Result};
use crate::mutation::completions_at;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphNode {
    pub id: usize,
    pub arcs: Vec<Arc>,
    pub outer_isolated: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    /// The arc that is removed from `from`.
    pub at: Arc,
    /// The arc that replaces it in `to`.
    pub replacement: Arc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MutationGraph {
    pub w: Weight,
    pub lo: Vertex,
    pub hi: Vertex,
    pub boundary: Boundary,
    pub class: ClassValue,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    /// Set when the node budget ran out; the graph then only covers the
    /// first nodes in enumeration order.
    pub truncated: bool,
}

/// Default class of the nodes: sealed-valid for sealed windows, hom
/// configurations otherwise.
pub fn default_class(boundary: Boundary) -> ClassValue {
    match boundary {
        Boundary::Sealed => ClassValue::Sms,
        Boundary::Free => ClassValue::HomConfig,
    }
}

pub fn mutation_graph(
    w: Weight,
    lo: Vertex,
    hi: Vertex,
    boundary: Boundary,
    class: ClassValue,
    max_nodes: usize,
) -> Result<MutationGraph> {
    if class < default_class(boundary) {
        return Err(Error::Unsupported("a node class that mutation preserves (sms when sealed, hom_config or riedtmann when free)"));
    }
    let mut req = EnumRequest::new(w, lo, hi, boundary, class);
    req.cap = max_nodes;
    let (diagrams, truncated) = match enumerate_configs(&req) {
        Ok(d) => (d, false),
        Err(Error::BudgetExceeded { .. }) => {
            // rerun with a larger cap and keep the first `max_nodes`
            req.cap = usize::MAX;
            let mut all = enumerate_configs(&req)?;
            all.truncate(max_nodes);
            (all, true)
        }
        Err(e) => return Err(e),
    };
    let index: HashMap<Vec<Arc>, usize> =
        diagrams.iter().enumerate().map(|(i, d)| (d.arcs().iter().copied().collect(), i)).collect();
    let nodes: Vec<GraphNode> = diagrams
        .iter()
        .enumerate()
        .map(|(id, d)| GraphNode {
            id,
            arcs: d.arcs().iter().copied().collect(),
            outer_isolated: classify_fast(d).outer_isolated.len(),
        })
        .collect();
    let mut edges = BTreeSet::new();
    for (from, d) in diagrams.iter().enumerate() {
        for &s in d.arcs() {
            let fan = completions_at(d, s)?;
            for &c in &fan.proper_replacements {
                let mut key: Vec<Arc> = d.arcs().iter().copied().filter(|&a| a != s).collect();
                key.push(c);
                key.sort();
                if let Some(&to) = index.get(&key) {
                    edges.insert(GraphEdge { from, to, at: s, replacement: c });
                }
            }
        }
    }
    Ok(MutationGraph { w, lo, hi, boundary, class, nodes, edges: edges.into_iter().collect(), truncated })
}

impl MutationGraph {
    /// Graphviz text, one node per configuration labelled by its arcs.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph mutation {\n");
        for n in &self.nodes {
            let arcs: Vec<String> = n.arcs.iter().map(|a| a.to_string()).collect();
            let _ = writeln!(out, "  n{} [label=\"{}\\nouter={}\"];", n.id, arcs.join(" "), n.outer_isolated);
        }
        for e in &self.edges {
            // each mutation is found from both ends; draw it once
            if e.from < e.to {
                let _ = writeln!(out, "  n{} -- n{} [label=\"{} -> {}\"];", e.from, e.to, e.at, e.replacement);
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wt(x: i64) -> Weight {
        Weight::new(x).unwrap()
    }

    #[test]
    fn sealed_w1_has_no_edges() {
        // for w = -1 an arc has no proper replacement, so the two
        // configurations on [0, 3] stay apart
        let g = mutation_graph(wt(-1), 0, 3, Boundary::Sealed, ClassValue::Sms, 100).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert!(g.edges.is_empty());
        assert!(!g.truncated);
    }

    #[test]
    fn sealed_w2_pair_is_connected() {
        let g = mutation_graph(wt(-2), 0, 3, Boundary::Sealed, ClassValue::Sms, 100).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.edges.len(), 2);
        assert!(g.to_dot().contains("n0 -- n1"));
    }

    #[test]
    fn single_vertex_window() {
        let g = mutation_graph(wt(-1), 0, 0, Boundary::Free, ClassValue::HomConfig, 10).unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert!(g.nodes[0].arcs.is_empty());
        assert!(g.edges.is_empty());
    }

    #[test]
    fn edges_preserve_outer_counts() {
        for w in [-2, -3] {
            let g = mutation_graph(wt(w), 0, 7, Boundary::Free, ClassValue::HomConfig, 10_000).unwrap();
            assert!(!g.edges.is_empty());
            for e in &g.edges {
                assert_eq!(g.nodes[e.from].outer_isolated, g.nodes[e.to].outer_isolated);
            }
        }
    }

    #[test]
    fn budget_truncates() {
        let g = mutation_graph(wt(-1), 0, 7, Boundary::Sealed, ClassValue::Sms, 3).unwrap();
        assert!(g.truncated);
        assert_eq!(g.nodes.len(), 3);
    }
}
