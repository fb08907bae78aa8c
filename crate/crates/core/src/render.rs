//! SVG and plain-text pictures of arc diagrams.
//!
//! Vertices sit on a horizontal number line and every arc is drawn as a
//! semicircle above it. Sealed windows show their wrap arc dashed, periodic
//! diagrams are drawn over three periods. Arcs are emitted in (target,
//! source) order, so identical input gives identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arc::{Arc, Vertex};
use crate::config::{classify_vertices, Status};
use crate::diagram::{Diagram, Mode};
use crate::error::{Error, Result};

pub const MAX_RENDER_VERTICES: i64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RenderFormat {
    Svg,
    Ascii,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svg" => Ok(RenderFormat::Svg),
            "ascii" => Ok(RenderFormat::Ascii),
            _ => Err(Error::parse("", format!("unknown render format {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub format: RenderFormat,
    /// Pixels per vertex step.
    pub unit: u32,
    pub labels: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { format: RenderFormat::Svg, unit: 24, labels: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mark {
    Inner,
    Outer,
}

struct Scene {
    lo: Vertex,
    hi: Vertex,
    arcs: Vec<Arc>,
    wrap: Option<Arc>,
    marks: BTreeMap<Vertex, Mark>,
}

fn scene(d: &Diagram) -> Result<Scene> {
    let (lo, hi, arcs) = match d.mode() {
        Mode::Window { lo, hi, .. } => {
            let (lo, hi) = if d.is_sealed() { (lo - 1, hi + 1) } else { (lo, hi) };
            (lo, hi, d.arcs().iter().copied().collect::<Vec<_>>())
        }
        Mode::Periodic { period } => {
            let near = d.translates(-1, 1);
            let lo = near.iter().map(|a| a.target()).min().unwrap_or(0).min(-period);
            let hi = near.iter().map(|a| a.source()).max().unwrap_or(0).max(2 * period - 1);
            if hi - lo + 1 > MAX_RENDER_VERTICES {
                return Err(Error::Oversize(hi - lo + 1));
            }
            let r = (hi - lo) / period + 2;
            let arcs = d.translates(-r, r).into_iter().filter(|a| a.target() >= lo && a.source() <= hi).collect();
            (lo, hi, arcs)
        }
    };
    if hi - lo + 1 > MAX_RENDER_VERTICES {
        return Err(Error::Oversize(hi - lo + 1));
    }
    let mut marks = BTreeMap::new();
    // crossing diagrams have no well-defined isolated vertices
    if let Ok(statuses) = classify_vertices(d) {
        let period = d.period();
        let by_vertex: BTreeMap<Vertex, Status> = statuses.iter().map(|s| (s.vertex, s.status)).collect();
        for v in lo..=hi {
            let key = period.map_or(v, |p| v.rem_euclid(p));
            match by_vertex.get(&key) {
                Some(Status::InnerIsolated { .. }) => marks.insert(v, Mark::Inner),
                Some(Status::OuterIsolated) => marks.insert(v, Mark::Outer),
                _ => None,
            };
        }
    }
    let mut arcs = arcs;
    arcs.sort();
    Ok(Scene { lo, hi, arcs, wrap: d.virtual_overarc(), marks })
}

pub fn render(d: &Diagram, spec: &RenderSpec) -> Result<Vec<u8>> {
    let s = scene(d)?;
    let text = match spec.format {
        RenderFormat::Svg => svg(&s, spec),
        RenderFormat::Ascii => ascii(&s, spec),
    };
    Ok(text.into_bytes())
}

fn svg(s: &Scene, spec: &RenderSpec) -> String {
    let unit = f64::from(spec.unit.max(1));
    let longest = s.arcs.iter().chain(s.wrap.iter()).map(|a| a.len()).max().unwrap_or(0);
    let top = 8.0 + unit * longest as f64 / 2.0;
    let base = top + 8.0;
    let height = base + if spec.labels { unit } else { 8.0 };
    let width = unit * (s.hi - s.lo + 2) as f64;
    let x = |v: Vertex| unit * (v - s.lo + 1) as f64;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    out.push_str("<style>.arc{fill:none;stroke:black;stroke-width:1.5}.virtual{fill:none;stroke:gray;stroke-width:1.5;stroke-dasharray:4 3}.axis,.tick{stroke:black}.outer{fill:black}.inner{fill:white;stroke:black}text{font:10px sans-serif;text-anchor:middle}</style>\n");
    let _ = writeln!(out, r#"<line class="axis" x1="{}" y1="{base}" x2="{}" y2="{base}"/>"#, x(s.lo), x(s.hi));
    for v in s.lo..=s.hi {
        let _ = writeln!(out, r#"<line class="tick" x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#, x(v), base - 3.0, base + 3.0);
        if spec.labels {
            let _ = writeln!(out, r#"<text x="{}" y="{}">{v}</text>"#, x(v), base + unit * 0.6);
        }
    }
    let mut arc_path = |class: &str, a: Arc| {
        let r = unit * a.len() as f64 / 2.0;
        let _ = writeln!(
            out,
            r#"<path class="{class}" d="M {} {base} A {r} {r} 0 0 1 {} {base}"/>"#,
            x(a.target()),
            x(a.source())
        );
    };
    if let Some(wrap) = s.wrap {
        arc_path("virtual", wrap);
    }
    for &a in &s.arcs {
        arc_path("arc", a);
    }
    for (&v, &m) in &s.marks {
        let class = if m == Mark::Outer { "outer" } else { "inner" };
        let _ = writeln!(out, r#"<circle class="isolated {class}" cx="{}" cy="{base}" r="3"/>"#, x(v));
    }
    out.push_str("</svg>\n");
    out
}

/// One row per arc, `+---+` between its endpoints (dotted for the sealed
/// wrap), above a row of vertex markers and a row of labels. Isolated
/// vertices are marked `o` (inner) or `*` (outer), endpoints `|`.
fn ascii(s: &Scene, spec: &RenderSpec) -> String {
    let cell = if spec.labels {
        s.lo.to_string().len().max(s.hi.to_string().len()) + 1
    } else {
        2
    };
    let width = (s.hi - s.lo) as usize * cell + 1;
    let col = |v: Vertex| (v - s.lo) as usize * cell;
    let row = |a: Arc, fill: char| {
        let mut line = vec![' '; col(a.source()) + 1];
        for c in &mut line[col(a.target())..col(a.source())] {
            *c = fill;
        }
        line[col(a.target())] = '+';
        line[col(a.source())] = '+';
        line.into_iter().collect::<String>()
    };
    let mut out = String::new();
    let mut rows: Vec<(Arc, char)> = s.arcs.iter().map(|&a| (a, '-')).collect();
    rows.extend(s.wrap.map(|a| (a, '.')));
    rows.sort();
    for (a, fill) in rows {
        out.push_str(&row(a, fill));
        out.push('\n');
    }
    let mut ruler = vec![' '; width];
    for v in s.lo..=s.hi {
        ruler[col(v)] = match s.marks.get(&v) {
            Some(Mark::Inner) => 'o',
            Some(Mark::Outer) => '*',
            None => '|',
        };
    }
    out.extend(ruler);
    out.push('\n');
    if spec.labels {
        let mut labels = String::new();
        for v in s.lo..=s.hi {
            let pad = col(v).saturating_sub(labels.len());
            labels.extend(std::iter::repeat_n(' ', pad));
            labels.push_str(&v.to_string());
        }
        out.push_str(&labels);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arc::Weight;
    use crate::diagram::Boundary;

    fn window(w: i64, lo: i64, hi: i64, boundary: Boundary, arcs: &[(i64, i64)]) -> Diagram {
        let arcs = arcs.iter().map(|&(s, t)| Arc::new(s, t).unwrap());
        Diagram::window(Weight::new(w).unwrap(), lo, hi, boundary, arcs).unwrap()
    }

    fn svg_of(d: &Diagram) -> String {
        String::from_utf8(render(d, &RenderSpec::default()).unwrap()).unwrap()
    }

    fn ascii_of(d: &Diagram) -> String {
        let spec = RenderSpec { format: RenderFormat::Ascii, ..RenderSpec::default() };
        String::from_utf8(render(d, &spec).unwrap()).unwrap()
    }

    #[test]
    fn sealed_svg_has_dashed_wrap() {
        let d = window(-1, -1, 2, Boundary::Sealed, &[(1, 0), (2, -1)]);
        let out = svg_of(&d);
        assert_eq!(out.matches(r#"class="arc""#).count(), 2);
        assert_eq!(out.matches(r#"class="virtual""#).count(), 1);
        assert!(out.contains("stroke-dasharray"));
        assert_eq!(out, svg_of(&d));
    }

    #[test]
    fn ascii_rows_over_ruler() {
        let d = window(-1, 1, 4, Boundary::Free, &[(2, 1), (4, 3), (4, 1)]);
        let out = ascii_of(&d);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "+-+");
        assert_eq!(lines[1], "+-----+");
        assert_eq!(lines[2], "    +-+");
        assert_eq!(lines[3], "| | | |");
        assert_eq!(lines[4], "1 2 3 4");
    }

    #[test]
    fn empty_diagram_is_ruler_only() {
        let d = window(-2, 0, 3, Boundary::Free, &[]);
        assert_eq!(ascii_of(&d), "* * * *\n0 1 2 3\n");
        let out = svg_of(&d);
        assert!(!out.contains("<path"));
        assert_eq!(out.matches(r#"class="tick""#).count(), 4);
    }

    #[test]
    fn isolated_vertices_are_marked() {
        let d = window(-2, 0, 3, Boundary::Free, &[(2, 0)]);
        let lines: Vec<String> = ascii_of(&d).lines().map(String::from).collect();
        assert_eq!(lines[1], "| o | *");
        let out = svg_of(&d);
        assert_eq!(out.matches("isolated inner").count(), 1);
        assert_eq!(out.matches("isolated outer").count(), 1);
    }

    #[test]
    fn periodic_shows_three_periods() {
        let d = Diagram::periodic(Weight::new(-1).unwrap(), 2, [Arc::new(1, 0).unwrap()]).unwrap();
        let out = ascii_of(&d);
        assert!(out.starts_with("+--+\n      +--+\n"), "{out}");
        assert_eq!(out.lines().filter(|l| l.contains('+')).count(), 3);
    }

    #[test]
    fn oversize_is_rejected() {
        let d = window(-1, 0, 20_000, Boundary::Free, &[]);
        assert!(matches!(render(&d, &RenderSpec::default()), Err(Error::Oversize(20_001))));
    }
}
