use thiserror::Error;

use crate::arc::{Arc, Vertex};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("weight must be at most -1, got {0}")]
    InvalidWeight(i64),
    #[error("source must exceed target: [{start}, {end}]")]
    MalformedArc { start: Vertex, end: Vertex },
    #[error("arc {arc} is not admissible for w = {w}")]
    Inadmissible { arc: Arc, w: i64 },
    #[error("arcs must be distinct, got {0} twice")]
    EqualArcs(Arc),
    #[error("arcs {0} and {1} cross")]
    Crossing(Arc, Arc),
    #[error("arc {arc} lies outside the window [{lo}, {hi}]")]
    OutsideWindow { arc: Arc, lo: Vertex, hi: Vertex },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("vertex {0} is not outer-isolated")]
    NotOuterIsolated(Vertex),
    #[error("arc {0} is not in the diagram")]
    ArcNotInDiagram(Arc),
    #[error("diagram is not a hom configuration ({0})")]
    NotHomConfig(String),
    #[error("arc {0} has no overarc in the diagram")]
    NoOverarc(Arc),
    #[error("operation requires {0}")]
    Unsupported(&'static str),
    #[error("search budget of {cap} exceeded")]
    BudgetExceeded { cap: usize },
    #[error("render range of {0} vertices is too large")]
    Oversize(i64),
    #[error("{}", located(pointer, message))]
    Parse { pointer: String, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn located(pointer: &str, message: &str) -> String {
    if pointer.is_empty() {
        message.to_string()
    } else {
        format!("{pointer}: {message}")
    }
}

impl Error {
    pub fn parse(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { pointer: pointer.into(), message: message.into() }
    }
}
