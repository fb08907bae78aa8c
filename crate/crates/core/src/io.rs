//! JSON interchange.
//!
//! Diagrams are read from a `serde_json::Value` by hand so that every
//! problem can be reported with the JSON pointer of the offending entry.
//! All documents written by this crate carry `"format": 1`.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::arc::{Arc, Weight};
use crate::diagram::{Boundary, Diagram, Mode};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    format: u64,
    #[serde(flatten)]
    body: &'a T,
}

/// Serializes `body` with a leading `"format": 1` field. `body` must
/// serialize as a JSON object.
pub fn to_report<T: Serialize>(body: &T) -> Result<Value> {
    Ok(serde_json::to_value(Envelope { format: FORMAT_VERSION, body })?)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::parse(at, format!("missing field \"{key}\"")))
}

fn int(v: &Value, at: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::parse(at, "expected an integer"))
}

fn check_format(obj: &Map<String, Value>) -> Result<()> {
    match obj.get("format") {
        None => Ok(()),
        Some(v) if v.as_u64() == Some(FORMAT_VERSION) => Ok(()),
        Some(v) => Err(Error::parse("/format", format!("unsupported format {v}"))),
    }
}

fn parse_arc(v: &Value, at: &str) -> Result<Arc> {
    let items = v.as_array().ok_or_else(|| Error::parse(at, "expected an arc [source, target]"))?;
    if items.len() != 2 {
        return Err(Error::parse(at, format!("expected 2 entries, found {}", items.len())));
    }
    let s = int(&items[0], &format!("{at}/0"))?;
    let t = int(&items[1], &format!("{at}/1"))?;
    Arc::new(s, t).map_err(|e| Error::parse(at, e.to_string()))
}

fn parse_arcs(v: &Value, at: &str) -> Result<Vec<Arc>> {
    let items = v.as_array().ok_or_else(|| Error::parse(at, "expected an array of arcs"))?;
    items.iter().enumerate().map(|(i, a)| parse_arc(a, &format!("{at}/{i}"))).collect()
}

fn parse_weight(v: &Value, at: &str) -> Result<Weight> {
    Weight::new(int(v, at)?).map_err(|e| Error::parse(at, e.to_string()))
}

/// Points validation errors at the arc that caused them.
fn locate(err: Error, arcs: &[Arc]) -> Error {
    let index = |a: &Arc| arcs.iter().position(|b| b == a);
    match err {
        Error::Inadmissible { arc, .. } | Error::OutsideWindow { arc, .. } => match index(&arc) {
            Some(i) => Error::parse(format!("/arcs/{i}"), err.to_string()),
            None => Error::parse("/arcs", err.to_string()),
        },
        Error::Crossing(_, b) => match index(&b) {
            Some(i) => Error::parse(format!("/arcs/{i}"), err.to_string()),
            None => Error::parse("/arcs", err.to_string()),
        },
        Error::InvalidDiagram(ref m) if m.starts_with("empty window") => Error::parse("/window", err.to_string()),
        Error::InvalidDiagram(ref m) if m.starts_with("period") => Error::parse("/period", err.to_string()),
        Error::InvalidDiagram(_) => Error::parse("/arcs", err.to_string()),
        other => other,
    }
}

/// Builds a diagram from parsed JSON. `default_w` stands in for a missing
/// `"w"` field and must agree with it when both are present.
pub fn diagram_from_value(v: &Value, default_w: Option<Weight>) -> Result<Diagram> {
    let obj = v.as_object().ok_or_else(|| Error::parse("", "expected a JSON object"))?;
    check_format(obj)?;
    let w = match (obj.get("w"), default_w) {
        (Some(v), given) => {
            let w = parse_weight(v, "/w")?;
            if given.is_some_and(|g| g != w) {
                return Err(Error::parse("/w", format!("file has w = {w}, but {} was requested", given.unwrap())));
            }
            w
        }
        (None, Some(w)) => w,
        (None, None) => return Err(Error::parse("", "missing field \"w\"")),
    };
    let arcs = parse_arcs(field(obj, "arcs", "")?, "/arcs")?;
    let mode = field(obj, "mode", "")?.as_str().ok_or_else(|| Error::parse("/mode", "expected a string"))?;
    let built = match mode {
        "window" => {
            let win = field(obj, "window", "")?
                .as_object()
                .ok_or_else(|| Error::parse("/window", "expected an object"))?;
            let lo = int(field(win, "lo", "/window")?, "/window/lo")?;
            let hi = int(field(win, "hi", "/window")?, "/window/hi")?;
            let boundary = match win.get("boundary").map(|b| b.as_str()) {
                None | Some(Some("free")) => Boundary::Free,
                Some(Some("sealed")) => Boundary::Sealed,
                Some(_) => return Err(Error::parse("/window/boundary", "expected \"free\" or \"sealed\"")),
            };
            Diagram::window(w, lo, hi, boundary, arcs.iter().copied())
        }
        "periodic" => {
            let period = int(field(obj, "period", "")?, "/period")?;
            Diagram::periodic(w, period, arcs.iter().copied())
        }
        other => return Err(Error::parse("/mode", format!("unknown mode {other:?}"))),
    };
    built.map_err(|e| locate(e, &arcs))
}

pub fn parse_diagram(bytes: &[u8]) -> Result<Diagram> {
    parse_diagram_with(bytes, None)
}

pub fn parse_diagram_with(bytes: &[u8], default_w: Option<Weight>) -> Result<Diagram> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| Error::parse("", e.to_string()))?;
    diagram_from_value(&v, default_w)
}

pub fn diagram_to_value(d: &Diagram) -> Value {
    let arcs: Vec<Value> = d.arcs().iter().map(|a| json!([a.source(), a.target()])).collect();
    match d.mode() {
        Mode::Window { lo, hi, boundary } => json!({
            "format": FORMAT_VERSION,
            "w": d.weight().w(),
            "mode": "window",
            "window": { "lo": lo, "hi": hi, "boundary": boundary },
            "arcs": arcs,
        }),
        Mode::Periodic { period } => json!({
            "format": FORMAT_VERSION,
            "w": d.weight().w(),
            "mode": "periodic",
            "period": period,
            "arcs": arcs,
        }),
    }
}

pub fn serialize_diagram(d: &Diagram) -> String {
    serde_json::to_string_pretty(&diagram_to_value(d)).expect("plain JSON values")
}

/// A bare arc list, or any object with an `arcs` array and optionally `w`.
pub fn parse_arc_list(bytes: &[u8]) -> Result<(Option<Weight>, Vec<Arc>)> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| Error::parse("", e.to_string()))?;
    match &v {
        Value::Array(_) => Ok((None, parse_arcs(&v, "")?)),
        Value::Object(obj) => {
            check_format(obj)?;
            let w = obj.get("w").map(|w| parse_weight(w, "/w")).transpose()?;
            Ok((w, parse_arcs(field(obj, "arcs", "")?, "/arcs")?))
        }
        _ => Err(Error::parse("", "expected an array of arcs or an object with \"arcs\"")),
    }
}

/// Parses `"t,u"`, optionally wrapped in parentheses or brackets.
pub fn parse_arc_arg(s: &str) -> Result<Arc> {
    let trimmed = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let parts: Vec<&str> = trimmed.split(',').map(str::trim).collect();
    let [t, u] = parts[..] else {
        return Err(Error::parse("", format!("expected an arc \"t,u\", got {s:?}")));
    };
    let num = |x: &str| x.parse::<i64>().map_err(|_| Error::parse("", format!("not an integer: {x:?}")));
    Arc::new(num(t)?, num(u)?)
}

/// Parses `"lo..hi"`.
pub fn parse_window_arg(s: &str) -> Result<(i64, i64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::parse("", format!("expected a window \"lo..hi\", got {s:?}")))?;
    let num = |x: &str| x.trim().parse::<i64>().map_err(|_| Error::parse("", format!("not an integer: {x:?}")));
    Ok((num(lo)?, num(hi)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEALED: &str = r#"{"w": -2, "mode": "window", "window": {"lo": -1, "hi": 5, "boundary": "sealed"}, "arcs": [[2,0],[4,-1]]}"#;

    fn pointer(r: Result<Diagram>) -> (String, String) {
        match r {
            Err(Error::Parse { pointer, message }) => (pointer, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn sealed_example_round_trips() {
        let d = parse_diagram(SEALED.as_bytes()).unwrap();
        assert_eq!(d.arcs().len(), 2);
        assert_eq!(parse_diagram(serialize_diagram(&d).as_bytes()).unwrap(), d);
        let p = parse_diagram(br#"{"w": -1, "mode": "periodic", "period": 2, "arcs": [[1,0]]}"#).unwrap();
        assert_eq!(parse_diagram(serialize_diagram(&p).as_bytes()).unwrap(), p);
    }

    #[test]
    fn malformed_arc_has_pointer() {
        let (at, msg) = pointer(parse_diagram(
            br#"{"w": -1, "mode": "window", "window": {"lo": 0, "hi": 3}, "arcs": [[1,0],[0,2]]}"#,
        ));
        assert_eq!(at, "/arcs/1");
        assert!(msg.contains("source must exceed target"), "{msg}");
    }

    #[test]
    fn crossing_translates_are_named() {
        let (at, msg) = pointer(parse_diagram(br#"{"w": -1, "mode": "periodic", "period": 2, "arcs": [[1,-2]]}"#));
        assert_eq!(at, "/arcs");
        // the named pair must really cross once materialized
        assert!(msg.contains("(1,-2) (copy 0)") && msg.contains("(-1,-4) (copy -1)"), "{msg}");
        let rel = crate::arc::relate(Arc::new(1, -2).unwrap(), Arc::new(-1, -4).unwrap()).unwrap();
        assert!(rel.kind.is_crossing());
    }

    #[test]
    fn other_errors_have_pointers() {
        let cases: [(&[u8], &str); 6] = [
            (br#"{"mode": "window", "arcs": []}"#, ""),
            (br#"{"w": 0, "mode": "periodic", "period": 1, "arcs": []}"#, "/w"),
            (br#"{"w": -1, "mode": "spiral", "arcs": []}"#, "/mode"),
            (br#"{"w": -1, "mode": "window", "window": {"lo": 0, "hi": 3, "boundary": "open"}, "arcs": []}"#, "/window/boundary"),
            (br#"{"w": -1, "mode": "window", "window": {"lo": 0, "hi": 3}, "arcs": [[2,0]]}"#, "/arcs/0"),
            (br#"{"w": -1, "mode": "window", "window": {"lo": 0, "hi": 3}, "arcs": [[1,"x"]]}"#, "/arcs/0/1"),
        ];
        for (doc, want) in cases {
            assert_eq!(pointer(parse_diagram(doc)).0, want, "{}", String::from_utf8_lossy(doc));
        }
        assert!(matches!(parse_diagram(br#"{"format": 2}"#), Err(Error::Parse { .. })));
    }

    #[test]
    fn weight_can_come_from_outside() {
        let doc = br#"{"mode": "periodic", "period": 2, "arcs": [[1,0]]}"#;
        assert!(parse_diagram(doc).is_err());
        let w = Weight::new(-1).unwrap();
        assert_eq!(parse_diagram_with(doc, Some(w)).unwrap().weight(), w);
        let (at, _) = pointer(parse_diagram_with(SEALED.as_bytes(), Some(w)));
        assert_eq!(at, "/w");
    }

    #[test]
    fn arc_arguments() {
        assert_eq!(parse_arc_arg("3,0").unwrap(), Arc::new(3, 0).unwrap());
        assert_eq!(parse_arc_arg("(-1, -3)").unwrap(), Arc::new(-1, -3).unwrap());
        assert!(parse_arc_arg("0,3").is_err());
        assert!(parse_arc_arg("3").is_err());
        assert_eq!(parse_window_arg("-3..5").unwrap(), (-3, 5));
        assert!(parse_window_arg("3").is_err());
    }

    #[test]
    fn arc_lists() {
        let (w, arcs) = parse_arc_list(b"[[2,1],[4,3]]").unwrap();
        assert!(w.is_none());
        assert_eq!(arcs.len(), 2);
        let (w, _) = parse_arc_list(br#"{"w": -1, "arcs": [[2,1]]}"#).unwrap();
        assert_eq!(w.map(Weight::w), Some(-1));
    }

    #[test]
    fn reports_carry_the_format() {
        #[derive(Serialize)]
        struct R {
            x: u8,
        }
        assert_eq!(to_report(&R { x: 3 }).unwrap(), json!({"format": 1, "x": 3}));
    }
}
