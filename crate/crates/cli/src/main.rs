//! `vertexid`: verify identities, print truncated series and evaluate vertex graphs.

use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::json;
use vertexid_core::graphcalc::{evaluate, rotate_start, Graph, BUILTIN_GRAPHS};
use vertexid_core::identities::{self, IdentityParams, Side, Verdict};
use vertexid_core::symfunc::principal_schur;
use vertexid_core::vertex::vertex;
use vertexid_core::{first_mismatch, Error, MultiSeries, ParamRing, Partition, TruncationSpec, Window};

const ORDER_ENV: &str = "VERTEXID_DEFAULT_ORDER";
const DEFAULT_Z_ORDER: u32 = 4;
const DEFAULT_U_HALF: u32 = 16;

#[derive(Parser)]
#[command(name = "vertexid", version, about = "Exact truncated-series checks for topological vertex identities")]
struct Cli {
    /// Worker threads for the parallel sums; output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Zero the timing field so repeated runs are byte-identical.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct Order {
    /// Order in each active z variable [default: 4, or $VERTEXID_DEFAULT_ORDER].
    #[arg(long)]
    z_order: Option<u32>,
    /// q-order Q, i.e. the u-window [-2Q, 2Q] [default: u-window [-16, 16]].
    #[arg(long)]
    q_order: Option<u32>,
}

impl Order {
    fn z(self) -> anyhow::Result<u32> {
        if let Some(z) = self.z_order {
            return Ok(z);
        }
        match std::env::var(ORDER_ENV) {
            Ok(v) => v.trim().parse().with_context(|| format!("{ORDER_ENV}={v:?} is not a non-negative integer")),
            Err(_) => Ok(DEFAULT_Z_ORDER),
        }
    }

    fn u_half(self) -> u32 {
        self.q_order.map_or(DEFAULT_U_HALF, |q| 2 * q)
    }

    fn u_window(self) -> Window {
        let h = self.u_half() as i32;
        Window::new(-h, h)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a named identity on a window; exit 2 on mismatch.
    Verify {
        name: String,
        #[command(flatten)]
        order: Order,
        /// Single deformation parameter for no-theta, e.g. 5/3.
        #[arg(long)]
        theta: Option<String>,
        /// Largest partition size for per-partition identities.
        #[arg(long)]
        max_size: Option<u32>,
    },
    /// Print a truncated series: lhs:<id>, rhs:<id>, vertex:<λ;μ;ν> or schur:<λ>.
    Series {
        expr: String,
        #[command(flatten)]
        order: Order,
    },
    /// Evaluate a built-in graph or a JSON graph file.
    Graph {
        graph: String,
        #[command(flatten)]
        order: Order,
        /// Bound on the total z degree [default: the z-order, when the graph has several z variables].
        #[arg(long)]
        total: Option<u32>,
        /// Also check that every choice of starting slot gives the same series.
        #[arg(long)]
        check_rotations: bool,
    },
    /// List the registered identities.
    List,
}

struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(Error::UnknownIdentity { suggestions, .. }) = e.downcast_ref::<Error>() {
                if !suggestions.is_empty() {
                    eprintln!("did you mean: {}", suggestions.join(", "));
                }
                eprintln!("known identities: {}", identities::list().iter().map(|i| i.name).collect::<Vec<_>>().join(", "));
            }
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;
    pool.install(|| match &cli.cmd {
        Cmd::Verify { name, order, theta, max_size } => {
            let theta = theta
                .as_deref()
                .map(|s| s.trim().parse::<BigRational>().map_err(|_| anyhow!("bad --theta {s:?}; expected p or p/q")))
                .transpose()?;
            cmd_verify(&cli, name, *order, IdentityParams { theta, max_size: *max_size })
        }
        Cmd::Series { expr, order } => cmd_series(&cli, expr, *order),
        Cmd::Graph { graph, order, total, check_rotations } => cmd_graph(&cli, graph, *order, *total, *check_rotations),
        Cmd::List => Ok(cmd_list(&cli)),
    })
}

fn cmd_verify(cli: &Cli, name: &str, order: Order, params: IdentityParams) -> anyhow::Result<Outcome> {
    let spec = identities::default_window(name, order.z()?, order.u_half())?;
    let mut report = identities::verify(name, &spec, &params)?;
    if cli.deterministic {
        report.duration_ms = 0;
    }
    let stdout = if cli.json { report.to_json() + "\n" } else { report.render() };
    Ok(Outcome { stdout, code: if report.verdict == Verdict::Match { 0 } else { 2 } })
}

fn parse_partition(s: &str) -> anyhow::Result<Partition> {
    s.parse::<Partition>().with_context(|| format!("partition literal {s:?}"))
}

fn cmd_series(cli: &Cli, expr: &str, order: Order) -> anyhow::Result<Outcome> {
    let (kind, arg) = expr.split_once(':').ok_or_else(|| anyhow!("expression {expr:?} needs the form kind:argument"))?;
    let (series, ring) = match kind {
        "lhs" | "rhs" => {
            let side = if kind == "lhs" { Side::Lhs } else { Side::Rhs };
            let info = identities::lookup(arg)?;
            let spec = identities::default_window(arg, order.z()?, order.u_half())?;
            (identities::build_side(arg, side, &spec, &IdentityParams::default())?, info.ring)
        }
        "vertex" => {
            let parts: Vec<&str> = arg.split(';').collect();
            let [l, m, n] = parts[..] else {
                bail!("vertex expects three partitions separated by ';', got {arg:?}");
            };
            let spec = Arc::new(TruncationSpec::q_only(order.u_window()));
            (vertex(&parse_partition(l)?, &parse_partition(m)?, &parse_partition(n)?, &spec)?, ParamRing::Rational)
        }
        "schur" => {
            let spec = Arc::new(TruncationSpec::q_only(order.u_window()));
            (principal_schur(&parse_partition(arg)?, &spec)?, ParamRing::Rational)
        }
        other => bail!("unknown expression kind {other:?}; use lhs, rhs, vertex or schur"),
    };
    Ok(Outcome::ok(render_series(cli, json!({ "expression": expr }), &series, ring)))
}

fn render_series(cli: &Cli, mut head: serde_json::Value, s: &MultiSeries, ring: ParamRing) -> String {
    if cli.json {
        head["window"] = serde_json::to_value(s.spec()).expect("window serializes");
        head["ring"] = json!(ring.label());
        head["terms"] = serde_json::to_value(s.to_json()).expect("terms serialize");
        serde_json::to_string_pretty(&head).expect("json") + "\n"
    } else {
        format!("{}\n", s.display(ring))
    }
}

fn load_graph(arg: &str) -> anyhow::Result<Graph> {
    if let Some(g) = Graph::builtin(arg) {
        return Ok(g);
    }
    let text = std::fs::read_to_string(arg).with_context(|| {
        format!("{arg:?} is neither a built-in graph ({}) nor a readable file", BUILTIN_GRAPHS.join(", "))
    })?;
    Graph::from_json(&text).with_context(|| format!("in {arg}"))
}

fn cmd_graph(cli: &Cli, arg: &str, order: Order, total: Option<u32>, check_rotations: bool) -> anyhow::Result<Outcome> {
    let g = load_graph(arg)?;
    g.validate().with_context(|| format!("in {arg}"))?;
    let nz = g.edges.iter().filter_map(|e| e.z_index).max().unwrap_or(0) as usize;
    let z = order.z()?;
    let mut spec = TruncationSpec::new(order.u_window(), vec![Window::upto(z as i32); nz])?;
    // Without a joint bound the window grows like z^nz and four loops take minutes.
    if let Some(t) = total.or((nz > 1).then_some(z)) {
        spec = spec.with_total(t as i32)?;
    }
    let spec = Arc::new(spec);
    let series = evaluate(&g, &spec)?;

    let mut rotation_failure = None;
    if check_rotations {
        'outer: for v in 0..g.vertices.len() {
            for steps in 1..3 {
                let rotated = evaluate(&rotate_start(&g, v, steps)?, &spec)?;
                if let Some((m, a, b)) = first_mismatch(&series, &rotated)? {
                    rotation_failure = Some((v, steps, m, a, b));
                    break 'outer;
                }
            }
        }
    }
    let ring = ParamRing::Rational;
    let code = if rotation_failure.is_some() { 2 } else { 0 };
    let stdout = if cli.json {
        let rotations = match (&rotation_failure, check_rotations) {
            (_, false) => serde_json::Value::Null,
            (None, true) => json!({ "invariant": true }),
            (Some((v, steps, m, a, b)), true) => json!({
                "invariant": false,
                "vertex": v,
                "steps": steps,
                "monomial": m.to_string(),
                "original": a.display(ring),
                "rotated": b.display(ring),
            }),
        };
        render_series(cli, json!({ "graph": arg, "rotations": rotations }), &series, ring)
    } else {
        let mut out = render_series(cli, json!({}), &series, ring);
        if check_rotations {
            match &rotation_failure {
                None => out.push_str("rotations: invariant\n"),
                Some((v, steps, m, a, b)) => out.push_str(&format!(
                    "rotations: vertex {v} rotated by {steps} differs at {m}: {} vs {}\n",
                    a.display(ring),
                    b.display(ring)
                )),
            }
        }
        out
    };
    Ok(Outcome { stdout, code })
}

fn cmd_list(cli: &Cli) -> Outcome {
    let list = identities::list();
    let stdout = if cli.json {
        let v: Vec<_> = list
            .iter()
            .map(|i| json!({ "name": i.name, "description": i.description, "ring": i.ring.label(), "z_vars": i.z_vars }))
            .collect();
        serde_json::to_string_pretty(&v).expect("json") + "\n"
    } else {
        let width = list.iter().map(|i| i.name.len()).max().unwrap_or(0);
        list.iter().map(|i| format!("{:width$}  {}\n", i.name, i.description)).collect()
    };
    Outcome::ok(stdout)
}
