use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use spherical_arcs::arc::{Arc, Weight};
use spherical_arcs::closure::{closure_with, fountain_report, Policy, Recursion};
use spherical_arcs::config::{classify_configuration, ClassValue};
use spherical_arcs::diagram::{Boundary, Diagram};
use spherical_arcs::enumerate::{enumerate_configs, EnumRequest, DEFAULT_CAP};
use spherical_arcs::error::{Error, Result};
use spherical_arcs::graph::{default_class, mutation_graph};
use spherical_arcs::hom::{ext1, ext_dim};
use spherical_arcs::io::{diagram_to_value, parse_arc_arg, parse_arc_list, parse_diagram_with, parse_window_arg, to_report};
use spherical_arcs::mutation::{brute_force_completions, completions_at, iterate_mutations, Direction};
use spherical_arcs::nc::{nc_partition, sms_iff_finite_blocks};
use spherical_arcs::render::{render, RenderFormat, RenderSpec};

/// Arc diagrams for negative spherical objects.
#[derive(Parser)]
#[command(name = "arcs", version)]
struct Cli {
    /// Weight w <= -1. Optional for commands that read it from a file.
    #[arg(long, global = true, allow_negative_numbers = true)]
    w: Option<i64>,
    /// Print machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    /// Accepted for compatibility; every algorithm is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Both,
    Class2,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecursionArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Free,
    Sealed,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Count,
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Svg,
    Ascii,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a diagram.
    Check {
        file: PathBuf,
        /// Exit with status 2 unless the class is exactly this one.
        #[arg(long)]
        expect: Option<ClassValue>,
        /// Coordinate bound for the homological cross-checks.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Dimension of Ext^k(x, y), with the middle term when k = 1.
    Ext {
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Extension closure of an arc set.
    Closure {
        #[arg(long)]
        arcs: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        policy: PolicyArg,
        #[arg(long, value_enum, default_value = "left")]
        recursion: RecursionArg,
        /// Print the level of every arc.
        #[arg(long)]
        levels: bool,
    },
    /// Growth of the closure pieces at a vertex.
    Fountain {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        vertex: i64,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        depths: Vec<u32>,
    },
    /// Completions of a configuration with one arc removed.
    Mutate {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Also run the brute-force search and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Approximation-based mutation. Sealed diagrams must be unfolded first
    /// so that the arc has a real overarc.
    MutateApprox {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, value_enum, default_value = "left")]
        dir: DirArg,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Mutation graph of all configurations on a window.
    Graph {
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long, value_enum, default_value = "sealed")]
        boundary: BoundaryArg,
        #[arg(long)]
        class: Option<ClassValue>,
        #[arg(long, default_value_t = 100_000)]
        max_nodes: usize,
        /// Write the graph as JSON here instead of stdout.
        #[arg(long = "out")]
        out_path: Option<PathBuf>,
        /// Also write Graphviz text here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// List or count the diagrams of a class on a window.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long, value_enum, default_value = "sealed")]
        boundary: BoundaryArg,
        #[arg(long)]
        class: Option<ClassValue>,
        #[arg(long, value_enum, default_value = "count")]
        emit: EmitArg,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Noncrossing partition and Kreweras complement of a w = -1 diagram.
    Nc { file: PathBuf },
    /// Draw a diagram.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: FormatArg,
        #[arg(long, default_value_t = 24)]
        unit: u32,
        #[arg(long)]
        no_labels: bool,
        #[arg(long = "out")]
        out_path: Option<PathBuf>,
    },
}

struct Ctx {
    w: Option<Weight>,
    json: bool,
}

impl Ctx {
    fn weight(&self) -> Result<Weight> {
        self.w.ok_or(Error::parse("", "--w is required"))
    }

    fn diagram(&self, path: &Path) -> Result<Diagram> {
        parse_diagram_with(&read(path)?, self.w)
    }

    /// JSON reports go to stdout as one document; otherwise `text` is printed.
    fn emit<T: Serialize>(&self, report: &T, text: impl FnOnce() -> String) -> Result<()> {
        if self.json {
            out(&(serde_json::to_string_pretty(&to_report(report)?)? + "\n"))
        } else {
            out(&text())
        }
    }
}

/// Writes to stdout. A closed pipe (`arcs ... | head`) is not an error.
fn out(text: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    Ok(fs::read(path)?)
}

fn list(arcs: impl IntoIterator<Item = Arc>) -> String {
    let parts: Vec<String> = arcs.into_iter().map(|a| a.to_string()).collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(" ")
    }
}

fn boundary(b: BoundaryArg) -> Boundary {
    match b {
        BoundaryArg::Free => Boundary::Free,
        BoundaryArg::Sealed => Boundary::Sealed,
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let ctx = Ctx { w: cli.w.map(Weight::new).transpose()?, json: cli.json };
    match cli.command {
        Command::Check { file, expect, bound } => {
            let d = ctx.diagram(&file)?;
            let c = classify_configuration(&d, bound);
            ctx.emit(&c, || {
                let mut s = format!("class: {}\n", c.value);
                let outer: Vec<String> = c.outer_isolated.iter().map(|v| v.to_string()).collect();
                s += &format!("outer_isolated: [{}]\n", outer.join(", "));
                if c.violations.is_empty() {
                    s += "violations: none\n";
                }
                for v in &c.violations {
                    s += &format!("violation: {}\n", serde_json::to_string(v).expect("plain data"));
                }
                s
            })?;
            if expect.is_some_and(|e| e != c.value) {
                eprintln!("expected class {}, found {}", expect.unwrap(), c.value);
                return Ok(ExitCode::from(2));
            }
        }
        Command::Ext { k, x, y } => {
            let w = ctx.weight()?;
            let (x, y) = (parse_arc_arg(&x)?, parse_arc_arg(&y)?);
            let dim = ext_dim(w, k, x, y)?;
            let e = if k == 1 { Some(ext1(w, x, y)?) } else { None };
            let report = json!({
                "w": w, "k": k, "x": x, "y": y, "dim": dim,
                "middle": e.as_ref().map(|e| &e.middle),
                "case": e.as_ref().map(|e| e.case),
            });
            ctx.emit(&report, || {
                let mut s = format!("dim: {dim}\n");
                if let Some(e) = &e {
                    s += &format!("middle: {}\n", list(e.middle.iter().copied()));
                    s += &format!("case: {}\n", serde_json::to_value(e.case).expect("unit variant").as_str().unwrap_or(""));
                }
                s
            })?;
        }
        Command::Closure { arcs, policy, recursion, levels } => {
            let (file_w, input) = parse_arc_list(&read(&arcs)?)?;
            let w = match (ctx.w, file_w) {
                (Some(a), Some(b)) if a != b => return Err(Error::parse("/w", format!("file has w = {b}, but {a} was requested"))),
                (Some(a), _) | (None, Some(a)) => a,
                (None, None) => return Err(Error::parse("", "--w is required")),
            };
            let policy = match policy {
                PolicyArg::Both => Policy::Both,
                PolicyArg::Class2 => Policy::ClassTwoOnly,
            };
            let recursion = match recursion {
                RecursionArg::Left => Recursion::Left,
                RecursionArg::Right => Recursion::Right,
            };
            let r = closure_with(w, &input, policy, recursion)?;
            ctx.emit(&r, || {
                if levels {
                    r.level.iter().map(|(a, l)| format!("{a} {l}\n")).collect()
                } else {
                    format!("{}\n", list(r.arcs.iter().copied()))
                }
            })?;
        }
        Command::Fountain { config, vertex, depths } => {
            let d = ctx.diagram(&config)?;
            let r = fountain_report(&d, vertex, &depths)?;
            ctx.emit(&r, || {
                let verdict = serde_json::to_value(r.verdict).expect("unit variant");
                format!(
                    "depths: {:?}\nleft: {:?}\nright: {:?}\nverdict: {}\n",
                    r.depths,
                    r.left_counts,
                    r.right_counts,
                    verdict.as_str().unwrap_or("")
                )
            })?;
        }
        Command::Mutate { file, at, oracle } => {
            let d = ctx.diagram(&file)?;
            let s = parse_arc_arg(&at)?;
            let fan = completions_at(&d, s)?;
            let brute = if oracle { Some(brute_force_completions(&d, s)?) } else { None };
            let agree = brute.as_ref().map(|b| b.completions == fan.completions);
            let report = json!({ "fan": fan, "oracle": brute, "agree": agree });
            ctx.emit(&report, || {
                let mut out = format!("completions: {}\n", list(fan.completions.iter().copied()));
                out += &format!("proper: {}\n", list(fan.proper_replacements.iter().copied()));
                if let Some(b) = &brute {
                    out += &format!("oracle: {}\n", list(b.completions.iter().copied()));
                    out += &format!("agree: {}\n", agree == Some(true));
                }
                out
            })?;
        }
        Command::MutateApprox { file, at, dir, steps } => {
            let d = ctx.diagram(&file)?;
            let s = parse_arc_arg(&at)?;
            let dir = match dir {
                DirArg::Left => Direction::Left,
                DirArg::Right => Direction::Right,
            };
            let trace = iterate_mutations(&d, s, steps, dir)?;
            ctx.emit(&json!({ "steps": trace }), || {
                trace
                    .iter()
                    .enumerate()
                    .map(|(i, st)| {
                        format!(
                            "{}: {} -> {} (case {}, overarc {}, s' = {})\n",
                            i + 1,
                            st.at,
                            st.s_star,
                            st.case,
                            st.overarc,
                            st.s_prime
                        )
                    })
                    .collect()
            })?;
        }
        Command::Graph { window, boundary: b, class, max_nodes, out_path, dot } => {
            let w = ctx.weight()?;
            let (lo, hi) = parse_window_arg(&window)?;
            let b = boundary(b);
            let g = mutation_graph(w, lo, hi, b, class.unwrap_or_else(|| default_class(b)), max_nodes)?;
            if let Some(path) = &dot {
                fs::write(path, g.to_dot())?;
            }
            let doc = to_report(&g)?;
            match &out_path {
                Some(path) => {
                    fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")?;
                    ctx.emit(&json!({ "nodes": g.nodes.len(), "edges": g.edges.len(), "truncated": g.truncated }), || {
                        format!("nodes: {}\nedges: {}\ntruncated: {}\n", g.nodes.len(), g.edges.len(), g.truncated)
                    })?;
                }
                None => out(&(serde_json::to_string_pretty(&doc)? + "\n"))?,
            }
        }
        Command::Enumerate { window, boundary: b, class, emit, cap } => {
            let w = ctx.weight()?;
            let (lo, hi) = parse_window_arg(&window)?;
            let b = boundary(b);
            let mut req = EnumRequest::new(w, lo, hi, b, class.unwrap_or_else(|| default_class(b)));
            req.cap = cap;
            let found = enumerate_configs(&req)?;
            match emit {
                EmitArg::Count => ctx.emit(&json!({ "request": req, "count": found.len() }), || format!("{}\n", found.len()))?,
                EmitArg::List => {
                    let docs: Vec<Value> = found.iter().map(diagram_to_value).collect();
                    ctx.emit(&json!({ "request": req, "count": found.len(), "diagrams": docs }), || {
                        found.iter().map(|d| format!("{}\n", list(d.arcs().iter().copied()))).collect()
                    })?
                }
            }
        }
        Command::Nc { file } => {
            let d = ctx.diagram(&file)?;
            let pair = nc_partition(&d)?;
            let check = sms_iff_finite_blocks(&d)?;
            ctx.emit(&json!({ "nc": pair.nc, "kreweras": pair.kreweras, "sms_iff_finite_blocks": check }), || {
                let show = |p: &spherical_arcs::nc::NcPartition| -> String {
                    p.blocks
                        .iter()
                        .enumerate()
                        .map(|(i, b)| {
                            let pts: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                            let tag = if p.escaping.contains(&i) { " escaping" } else { "" };
                            format!("  {{{}}}{tag}\n", pts.join(", "))
                        })
                        .collect()
                };
                format!(
                    "nc:\n{}kreweras:\n{}finite_blocks: {}\nclass: {}\n",
                    show(&pair.nc),
                    show(&pair.kreweras),
                    check.finite_blocks,
                    check.class
                )
            })?;
        }
        Command::Render { file, format, unit, no_labels, out_path } => {
            let d = ctx.diagram(&file)?;
            let format = match format {
                FormatArg::Svg => RenderFormat::Svg,
                FormatArg::Ascii => RenderFormat::Ascii,
            };
            let bytes = render(&d, &RenderSpec { format, unit, labels: !no_labels })?;
            match out_path {
                Some(path) => fs::write(path, bytes)?,
                None => out(&String::from_utf8_lossy(&bytes))?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
