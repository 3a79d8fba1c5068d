//! Command-line driver: expansion, cross-method verification and export.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use clusterexp::cluster::{catalan, exchange_graph, numerator_table, ClusterVariableTable};
use clusterexp::geometry::{all_triangulations, orientation_string, Orientation, Triangulation};
use clusterexp::laurent::LaurentPoly;
use clusterexp::matchings::{
    enumerate_angle_matchings, enumerate_discrete_subsets, rho_image, DiscreteMethod,
};
use clusterexp::qp::{build_qp, enumerate_cuts, minimal_cuts, ArrowClass, QuiverWithPotential};
use clusterexp::quiver::{quiver_of_triangulation, IceQuiver, QuiverMode};
use clusterexp::snake::{build_phi, enumerate_edge_matchings, EdgeKind, EdgeMatching, SnakeGraph};
use clusterexp::{expand, Error, Method, Severity};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "clusterexp",
    version,
    about = "Cluster expansions of type A cluster variables"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute one numerator f^[i,j].
    Expand {
        #[command(flatten)]
        source: Source,
        /// Interval as `i,j`; defaults to `1,n`.
        #[arg(long)]
        interval: Option<String>,
        #[arg(long, value_enum, default_value_t = MethodArg::Angles)]
        method: MethodArg,
        /// Also print the polynomial as JSON.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        seed_limit: Option<usize>,
    },
    /// Check all methods against each other and the mutation oracle.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Every orientation with up to `--max-n` diagonals.
        #[arg(long, requires = "max_n")]
        all: bool,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        seed_limit: Option<usize>,
        /// One JSON report per line instead of text.
        #[arg(long)]
        json: bool,
        /// Include wall-clock timings (output is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Write a quiver, QP, snake graph or triangulation as DOT or JSON.
    Export {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        what: Target,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Restrict to the subpolygon of this interval.
        #[arg(long)]
        interval: Option<String>,
    },
}

#[derive(Args, Debug, Default)]
struct Source {
    /// Triangulation JSON file, or `-` for stdin.
    #[arg(long)]
    input: Option<String>,
    /// Arrow directions of the path quiver, e.g. `FFB`.
    #[arg(long)]
    orientation: Option<String>,
    /// Number of diagonals; without `--orientation` all arrows point forward.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Angles,
    Discrete,
    Cuts,
    Snake,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Angles => Method::Angles,
            MethodArg::Discrete => Method::Discrete,
            MethodArg::Cuts => Method::Cuts,
            MethodArg::Snake => Method::Snake,
            MethodArg::Oracle => Method::Oracle,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Quiver,
    Ice,
    Qp,
    Snake,
    Triangulation,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Dot,
    Json,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e.severity() {
            Severity::Input => EXIT_INPUT,
            Severity::Internal => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

macro_rules! core_err {
    ($e:expr) => {
        $e.map_err(|e| Failure::from(Error::from(e)))
    };
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure {
        code: EXIT_INTERNAL,
        message: format!("write failed: {e}"),
    };
    match cli.command {
        Command::Expand {
            source,
            interval,
            method,
            json,
            seed_limit,
        } => {
            let t = load(&source)?;
            let (i, j) = parse_interval(interval.as_deref(), t.n())?;
            let f = expand(&t, i, j, method.into(), seed_limit)?;
            writeln!(out, "{f}").map_err(io)?;
            if json {
                writeln!(out, "{}", f.to_json()).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            source,
            all,
            max_n,
            seed_limit,
            json,
            timings,
        } => {
            let triangulations: Vec<Triangulation> = if all {
                let max_n = max_n.expect("enforced by clap");
                if max_n == 0 {
                    return Err(Failure::input("--max-n must be at least 1"));
                }
                (1..=max_n)
                    .flat_map(|n| Orientation::all(n).into_iter().map(move |o| (n, o)))
                    .map(|(n, o)| Triangulation::from_orientation(n, &o).map_err(Error::from))
                    .collect::<Result<_, _>>()?
            } else {
                vec![load(&source)?]
            };
            let reports: Vec<Result<RunReport, Failure>> = triangulations
                .par_iter()
                .map(|t| verify_triangulation(t, seed_limit))
                .collect();
            let mut failed = 0;
            for r in reports {
                let mut r = r?;
                if !timings {
                    for rec in &mut r.intervals {
                        rec.micros = None;
                    }
                }
                if !r.passed {
                    failed += 1;
                }
                if json {
                    writeln!(out, "{}", serde_json::to_string(&r).expect("serializable"))
                        .map_err(io)?;
                } else {
                    out.write_all(r.render_text().as_bytes()).map_err(io)?;
                }
            }
            let total = triangulations.len();
            if !json {
                writeln!(out, "verified {total} triangulations, {failed} failed").map_err(io)?;
            }
            Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Export {
            source,
            what,
            format,
            interval,
        } => {
            let t = load(&source)?;
            let t = match interval {
                Some(s) => {
                    let (i, j) = parse_interval(Some(&s), t.n())?;
                    core_err!(t.subpolygon(i, j))?
                }
                None => t,
            };
            let doc = export(&t, what, format);
            out.write_all(doc.as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

fn load(source: &Source) -> Result<Triangulation, Failure> {
    match (&source.input, &source.orientation, source.n) {
        (Some(path), None, None) => {
            let text = if path == "-" {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Failure::input(format!("cannot read stdin: {e}")))?;
                s
            } else {
                std::fs::read_to_string(path)
                    .map_err(|e| Failure::input(format!("cannot read {path}: {e}")))?
            };
            core_err!(Triangulation::from_json_str(&text))
        }
        (None, Some(o), n) => {
            let o = core_err!(Orientation::parse_sequence(o))?;
            let n = n.unwrap_or(o.len() + 1);
            core_err!(Triangulation::from_orientation(n, &o))
        }
        (None, None, Some(n)) => {
            core_err!(Triangulation::from_orientation(
                n,
                &vec![Orientation::Forward; n.saturating_sub(1)]
            ))
        }
        (None, None, None) => Err(Failure::input(
            "give a triangulation with --input, --orientation or --n",
        )),
        _ => Err(Failure::input(
            "--input cannot be combined with --orientation or --n",
        )),
    }
}

fn parse_interval(s: Option<&str>, n: usize) -> Result<(usize, usize), Failure> {
    let Some(s) = s else { return Ok((1, n)) };
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Failure::input(format!("interval {s:?} is not of the form i,j"));
    match parts.as_slice() {
        [i, j] => Ok((i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?)),
        [k] => {
            let k = k.parse().map_err(|_| bad())?;
            Ok((k, k))
        }
        _ => Err(bad()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counts {
    pub matchings: usize,
    pub discrete: usize,
    pub minimal_cuts: usize,
    pub edge_matchings: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalRecord {
    pub interval: (usize, usize),
    pub polynomials: BTreeMap<String, String>,
    pub agree: bool,
    pub counts: Counts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micros: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub n: usize,
    pub orientation: String,
    pub seed_count: usize,
    pub intervals: Vec<IntervalRecord>,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// Triangulation document and interval reproducing the first failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproduction: Option<serde_json::Value>,
}

impl RunReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let status = if self.passed { "ok" } else { "FAILED" };
        let _ = writeln!(
            s,
            "orientation {:?} (n={}): {} intervals, {} seeds, {status}",
            self.orientation,
            self.n,
            self.intervals.len(),
            self.seed_count
        );
        for r in &self.intervals {
            let c = &r.counts;
            let _ = write!(
                s,
                "  [{},{}] {} | matchings {} discrete {} cuts {} snake {} | {}",
                r.interval.0,
                r.interval.1,
                r.polynomials
                    .get("oracle")
                    .map(String::as_str)
                    .unwrap_or("?"),
                c.matchings,
                c.discrete,
                c.minimal_cuts,
                c.edge_matchings,
                if r.agree { "agree" } else { "DISAGREE" }
            );
            if let Some(us) = r.micros {
                let _ = write!(s, " | {us} us");
            }
            s.push('\n');
        }
        for c in self.checks.iter().filter(|c| !c.passed) {
            let _ = writeln!(
                s,
                "  check {} failed: {}",
                c.name,
                c.detail.as_deref().unwrap_or("")
            );
        }
        if let Some(r) = &self.reproduction {
            let _ = writeln!(s, "  reproduce with: {r}");
        }
        s
    }
}

struct Checker {
    checks: Vec<Check>,
    first_failure: Option<Option<(usize, usize)>>,
}

impl Checker {
    fn record(&mut self, name: &str, interval: Option<(usize, usize)>, problem: Option<String>) {
        let passed = problem.is_none();
        if !passed && self.first_failure.is_none() {
            self.first_failure = Some(interval);
        }
        if let Some(c) = self.checks.iter_mut().find(|c| c.name == name) {
            if c.passed && !passed {
                c.passed = false;
                c.detail = problem;
            }
        } else {
            self.checks.push(Check {
                name: name.to_string(),
                passed,
                detail: problem,
            });
        }
    }
}

/// Runs every method on every interval of `t` and checks the structural claims.
pub fn verify_triangulation(
    t: &Triangulation,
    seed_limit: Option<usize>,
) -> Result<RunReport, Failure> {
    let n = t.n();
    let q = quiver_of_triangulation(t, QuiverMode::Ice);
    let mut checker = Checker {
        checks: Vec::new(),
        first_failure: None,
    };
    let table: ClusterVariableTable = core_err!(numerator_table(&q, seed_limit))?;
    let triangulations = all_triangulations(n + 3).len();
    checker.record(
        "seed count",
        None,
        (table.seed_count != triangulations || catalan(n + 1) != triangulations as u128).then(
            || {
                format!(
                    "{} seeds, {} triangulations",
                    table.seed_count, triangulations
                )
            },
        ),
    );
    checker.record(
        "cluster variable count",
        None,
        (table.non_initial() != n * (n + 1) / 2)
            .then(|| format!("{} non-initial variables", table.non_initial())),
    );
    checker.record(
        "positivity",
        None,
        table
            .variables
            .iter()
            .find(|x| !x.all_coefficients_positive())
            .map(|x| format!("{x} has a non-positive coefficient")),
    );

    let mut intervals = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            let start = Instant::now();
            let iv = Some((i, j));
            let oracle = table
                .get(i, j)
                .expect("table covers every interval")
                .clone();
            let mut polys: BTreeMap<String, LaurentPoly> = BTreeMap::new();
            for m in [
                Method::Angles,
                Method::Discrete,
                Method::Cuts,
                Method::Snake,
            ] {
                polys.insert(m.name().to_string(), expand(t, i, j, m, seed_limit)?);
            }
            polys.insert(Method::Oracle.name().to_string(), oracle.clone());
            let agree = polys.values().all(|p| *p == oracle);
            checker.record(
                "methods agree",
                iv,
                (!agree).then(|| format!("interval [{i},{j}] disagrees")),
            );

            let sub = core_err!(t.subpolygon(i, j))?;
            let width = j - i + 1;
            let matchings = enumerate_angle_matchings(&sub);
            checker.record(
                "matching size",
                iv,
                matchings
                    .iter()
                    .find(|a| a.0.len() != width + 1)
                    .map(|a| format!("matching {:?} on [{i},{j}]", a.0)),
            );
            let sub_q = quiver_of_triangulation(&sub, QuiverMode::Ice);
            let discrete = core_err!(enumerate_discrete_subsets(
                &sub_q,
                DiscreteMethod::Backtrack
            ))?;
            let images: BTreeSet<_> = matchings
                .iter()
                .map(|a| core_err!(rho_image(&sub, a)))
                .collect::<Result<_, _>>()?;
            let discrete_set: BTreeSet<_> = discrete.iter().cloned().collect();
            checker.record(
                "rho bijection",
                iv,
                (images.len() != matchings.len() || images != discrete_set)
                    .then(|| format!("rho is not a bijection on [{i},{j}]")),
            );

            let qp = build_qp(&sub);
            let cuts = core_err!(enumerate_cuts(&qp))?;
            let minimal = core_err!(minimal_cuts(&qp))?;
            checker.record("cut bounds", iv, cut_bound_problem(&qp, &cuts));
            let minimal_set: BTreeSet<Vec<usize>> = minimal.iter().map(|c| c.0.clone()).collect();
            let discrete_ids: BTreeSet<Vec<usize>> = discrete.iter().map(|d| d.0.clone()).collect();
            checker.record(
                "minimal cuts are discrete subsets",
                iv,
                (minimal_set != discrete_ids).then(|| format!("families differ on [{i},{j}]")),
            );
            let cycle_counts = (qp.triangle_cycles().count(), qp.big_cycles().count());
            checker.record(
                "cycle counts",
                iv,
                (cycle_counts != (width + 1, width + 1))
                    .then(|| format!("{cycle_counts:?} cycles on [{i},{j}]")),
            );

            let g = SnakeGraph::of_triangulation(&sub);
            let edge_matchings = enumerate_edge_matchings(&g);
            checker.record(
                "phi bijection",
                iv,
                phi_problem(&sub, &g, &matchings, &edge_matchings)?,
            );

            intervals.push(IntervalRecord {
                interval: (i, j),
                polynomials: polys
                    .iter()
                    .map(|(k, v)| (k.clone(), v.to_string()))
                    .collect(),
                agree,
                counts: Counts {
                    matchings: matchings.len(),
                    discrete: discrete.len(),
                    minimal_cuts: minimal.len(),
                    edge_matchings: edge_matchings.len(),
                },
                micros: Some(start.elapsed().as_micros()),
            });
        }
    }
    let passed = checker.checks.iter().all(|c| c.passed);
    let reproduction = checker.first_failure.map(|iv| {
        json!({
            "triangulation": t.to_doc(),
            "interval": iv,
        })
    });
    Ok(RunReport {
        n,
        orientation: orientation_string(&t.orientation()),
        seed_count: table.seed_count,
        intervals,
        checks: checker.checks,
        passed,
        reproduction,
    })
}

fn cut_bound_problem(qp: &QuiverWithPotential, cuts: &[clusterexp::qp::Cut]) -> Option<String> {
    cuts.iter().find_map(|c| {
        let external =
            c.0.iter()
                .any(|&a| qp.arrows[a].class == ArrowClass::External);
        let size = c.0.len();
        (size < qp.rank + 1 || (size == qp.rank + 1) == external)
            .then(|| format!("cut {:?} of size {size}", c.0))
    })
}

fn phi_problem(
    sub: &Triangulation,
    g: &SnakeGraph,
    matchings: &[clusterexp::matchings::AngleMatching],
    edge_matchings: &[EdgeMatching],
) -> Result<Option<String>, Failure> {
    let phi = core_err!(build_phi(sub))?;
    let image: BTreeSet<usize> = phi.values().copied().collect();
    let edges: BTreeSet<usize> = g.boundary_edges().map(|e| e.id).collect();
    if image.len() != phi.len() || image != edges {
        return Ok(Some("phi is not a bijection onto the edges".into()));
    }
    for (&a, &e) in &phi {
        if Ok(g.label_of(e)) != sub.opposite_arc(a) {
            return Ok(Some(format!("label of phi({a}) is not its opposite side")));
        }
    }
    let pushed: BTreeSet<EdgeMatching> = matchings
        .iter()
        .map(|a| {
            let mut ids: Vec<usize> = a.0.iter().map(|x| phi[x]).collect();
            ids.sort_unstable();
            EdgeMatching(ids)
        })
        .collect();
    let expected: BTreeSet<EdgeMatching> = edge_matchings.iter().cloned().collect();
    Ok((pushed.len() != matchings.len() || pushed != expected)
        .then(|| "phi does not carry angle matchings onto perfect matchings".into()))
}

fn export(t: &Triangulation, what: Target, format: Format) -> String {
    match (what, format) {
        (Target::Quiver, f) => quiver_doc(
            &quiver_of_triangulation(t, QuiverMode::DiagonalsOnly),
            "quiver",
            f,
        ),
        (Target::Ice, f) => quiver_doc(&quiver_of_triangulation(t, QuiverMode::Ice), "ice", f),
        (Target::Qp, Format::Dot) => qp_dot(&build_qp(t)),
        (Target::Qp, Format::Json) => pretty(&build_qp(t)),
        (Target::Snake, Format::Dot) => snake_dot(&SnakeGraph::of_triangulation(t)),
        (Target::Snake, Format::Json) => pretty(&SnakeGraph::of_triangulation(t)),
        (Target::Triangulation, Format::Json) => pretty(&t.to_doc()),
        (Target::Triangulation, Format::Dot) => triangulation_dot(t),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn vertex_lines(
    s: &mut String,
    vertices: impl IntoIterator<Item = usize>,
    frozen: impl Fn(usize) -> bool,
) {
    for v in vertices {
        if frozen(v) {
            let _ = writeln!(s, "  {v} [shape=box, style=filled, fillcolor=lightgray];");
        } else {
            let _ = writeln!(s, "  {v} [shape=circle];");
        }
    }
}

fn quiver_doc(q: &IceQuiver, name: &str, format: Format) -> String {
    match format {
        Format::Json => pretty(&json!({
            "vertices": q.num_vertices(),
            "frozen": q.frozen(),
            "arrows": q.arrows(),
        })),
        Format::Dot => {
            let mut s = format!("digraph {name} {{\n");
            let shown: BTreeSet<usize> = if name == "quiver" {
                (1..=q.num_vertices())
                    .filter(|&v| !q.is_frozen(v))
                    .collect()
            } else {
                q.support()
            };
            vertex_lines(&mut s, shown, |v| q.is_frozen(v));
            for a in q.arrows() {
                let _ = writeln!(s, "  {} -> {};", a.source, a.target);
            }
            s.push_str("}\n");
            s
        }
    }
}

fn qp_dot(qp: &QuiverWithPotential) -> String {
    let mut s = String::from("digraph qp {\n");
    vertex_lines(&mut s, qp.vertices.iter().copied(), |v| {
        qp.frozen.contains(&v)
    });
    for a in &qp.arrows {
        let style = match a.class {
            ArrowClass::Ice => "",
            ArrowClass::Internal => " [color=blue]",
            ArrowClass::External => " [style=dashed]",
        };
        let _ = writeln!(s, "  {} -> {}{style};", a.source, a.target);
    }
    s.push_str("}\n");
    s
}

fn snake_dot(g: &SnakeGraph) -> String {
    let mut s = String::from("graph snake {\n  node [shape=point];\n");
    for e in &g.edges {
        let style = match e.kind {
            EdgeKind::BoundaryEdge => "",
            EdgeKind::TileDiagonal => ", style=dotted",
        };
        let _ = writeln!(
            s,
            "  v{} -- v{} [label=\"{}\"{style}];",
            e.ends.0, e.ends.1, e.label
        );
    }
    s.push_str("}\n");
    s
}

fn triangulation_dot(t: &Triangulation) -> String {
    let mut s = String::from("graph triangulation {\n");
    for c in 0..t.polygon_size() {
        let _ = writeln!(s, "  c{c} [label=\"{c}\"];");
    }
    for l in t.arc_labels() {
        let (a, b) = t.arc_ends(l).expect("arc");
        let style = if t.is_diagonal(l) { "" } else { ", penwidth=2" };
        let _ = writeln!(s, "  c{a} -- c{b} [label=\"{l}\"{style}];");
    }
    s.push_str("}\n");
    s
}

/// Seeds of the exchange graph of `t`, for callers that only need the count.
pub fn seed_count(t: &Triangulation, seed_limit: Option<usize>) -> Result<usize, Failure> {
    let q = quiver_of_triangulation(t, QuiverMode::Ice);
    let limit = seed_limit.unwrap_or_else(|| clusterexp::cluster::default_seed_limit(&q));
    Ok(core_err!(exchange_graph(&q, limit))?.seeds.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["clusterexp"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn expand_fan() {
        let (code, out, _) = call(&[
            "expand",
            "--orientation",
            "FF",
            "--interval",
            "1,3",
            "--method",
            "angles",
        ]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "x1*x2*x4*x8 + x1*x4*x7*x9 + x2*x3*x5*x9 + x3*x4*x6*x9\n"
        );
        let (code, out, _) = call(&[
            "expand",
            "--n",
            "1",
            "--interval",
            "1,1",
            "--method",
            "oracle",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.trim().split(" + ").count(), 2);
    }

    #[test]
    fn input_errors() {
        assert_eq!(call(&["expand", "--orientation", "FX"]).0, EXIT_INPUT);
        assert_eq!(
            call(&["expand", "--n", "2", "--interval", "1,3"]).0,
            EXIT_INPUT
        );
        assert_eq!(call(&["expand"]).0, EXIT_INPUT);
        assert_eq!(call(&["bogus"]).0, EXIT_INPUT);
        assert_eq!(
            call(&["expand", "--input", "/nonexistent.json"]).0,
            EXIT_INPUT
        );
        assert_eq!(call(&["verify", "--all"]).0, EXIT_INPUT);
    }

    #[test]
    fn interval_parsing() {
        assert_eq!(parse_interval(None, 4).unwrap(), (1, 4));
        assert_eq!(parse_interval(Some("2, 3"), 4).unwrap(), (2, 3));
        assert_eq!(parse_interval(Some("2"), 4).unwrap(), (2, 2));
        assert!(parse_interval(Some("a,b"), 4).is_err());
    }

    #[test]
    fn verify_fan_counts() {
        let t = Triangulation::from_orientation(3, &[Orientation::Forward; 2]).unwrap();
        let r = verify_triangulation(&t, None).unwrap();
        assert!(r.passed, "{}", r.render_text());
        assert_eq!(r.intervals.len(), 6);
        let counts: BTreeMap<(usize, usize), usize> = r
            .intervals
            .iter()
            .map(|x| (x.interval, x.counts.matchings))
            .collect();
        assert_eq!(counts[&(1, 3)], 4);
        assert_eq!(counts[&(1, 2)], 3);
        assert_eq!(seed_count(&t, None).unwrap(), 14);
    }
}
