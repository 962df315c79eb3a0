use std::fs;
use std::cell::RefCell;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::One;

use fraccol::bounds::{emit_p_curve, emit_table, main_bound};
use fraccol::certificate::Certificate;
use fraccol::cliques::CliqueStructure;
use fraccol::graph::{named_graph, NAMED_FAMILIES};
use fraccol::lp::{chi_f_weighted, verify_reed_bounds};
use fraccol::pipeline::{
    check_conditions, check_trace, end_to_end, initial_colouring, montecarlo_slack,
    verify_theorem_initial, Mode,
};
use fraccol::rational::{fmt_q, parse_q, round_half_even};
use fraccol::sampler::{estimate, verify_exact, vertex_class};
use fraccol::structure::{find_bump, find_near_clique, pipeline_eligibility, ALL_PATTERNS};
use fraccol::{Error, Graph, Q};

thread_local! {
    static STDOUT: RefCell<String> = const { RefCell::new(String::new()) };
}

// Output is buffered and written once at exit so a closed pipe is not a panic.
macro_rules! out {
    ($($t:tt)*) => {{
        let text = format!($($t)*);
        STDOUT.with(|b| b.borrow_mut().push_str(&text));
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        let text = format!($($t)*);
        STDOUT.with(|b| {
            let mut b = b.borrow_mut();
            b.push_str(&text);
            b.push('\n');
        });
    }};
}

fn flush_stdout() {
    let text = STDOUT.with(|b| std::mem::take(&mut *b.borrow_mut()));
    let mut lock = io::stdout().lock();
    if let Err(e) = lock.write_all(text.as_bytes()).and_then(|_| lock.flush()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
        }
    }
}

const DECIMALS: usize = 6;

#[derive(Parser)]
#[command(name = "fraccol", version, about = "Exact fractional colouring toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound constants per Δ as CSV.
    Bounds {
        /// Comma-separated Δ values, each at least 6.
        #[arg(long, value_delimiter = ',', required = true)]
        delta: Vec<usize>,
        /// Emit the p(Δ, d) curve for each Δ instead of the summary table.
        #[arg(long)]
        p_curve: bool,
    },
    /// Exact weighted fractional chromatic number with a certificate.
    Chif {
        /// Edge-list file; stdin when omitted or "-".
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Whitespace-separated rational vertex weights (default all 1).
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Write the certificate as JSON to this file ("-" for stdout).
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Also check χ_f^w ≤ ρ_w.
        #[arg(long)]
        reed: bool,
    },
    /// Structure report; exit 0 iff the graph is eligible.
    Check {
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Seeded Monte Carlo estimate of the sampler marginals as CSV.
    Sample {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print exact marginals by enumeration instead.
        #[arg(long)]
        exact: bool,
    },
    /// Initial colouring phase with its checks.
    Pipeline {
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Total weight spent (default ỹ(Δ)).
        #[arg(long)]
        y: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        emit_trace: Option<PathBuf>,
        #[arg(long)]
        emit_cert: Option<PathBuf>,
        /// Also run the end-to-end bound check and composition.
        #[arg(long)]
        end_to_end: bool,
    },
    /// Check a certificate against a graph.
    Certify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Write a named graph as an edge list.
    Gen {
        #[arg(long)]
        family: String,
        /// Integer parameters, comma-separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        params: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Montecarlo,
}

/// Input problems exit with 2; failed checks with 1.
enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds { delta, p_curve } => bounds(&delta, p_curve),
        Command::Chif {
            graph,
            weights,
            cert,
            reed,
        } => chif(graph.as_deref(), weights.as_deref(), cert.as_deref(), reed),
        Command::Check { graph } => check(graph.as_deref()),
        Command::Sample {
            graph,
            trials,
            seed,
            exact,
        } => sample(graph.as_deref(), trials, seed, exact),
        Command::Pipeline {
            graph,
            y,
            mode,
            trials,
            seed,
            emit_trace,
            emit_cert,
            end_to_end,
        } => pipeline(
            graph.as_deref(),
            y.as_deref(),
            mode,
            trials,
            seed,
            emit_trace.as_deref(),
            emit_cert.as_deref(),
            end_to_end,
        ),
        Command::Certify { graph, cert } => certify(&graph, &cert),
        Command::Gen {
            family,
            params,
            out,
        } => gen(&family, &params, out.as_deref()),
    };
    flush_stdout();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_text(path: Option<&Path>) -> io::Result<String> {
    match path {
        None => read_stdin(),
        Some(p) if p == Path::new("-") => read_stdin(),
        Some(p) => fs::read_to_string(p),
    }
}

fn read_stdin() -> io::Result<String> {
    let mut s = String::new();
    io::stdin().read_to_string(&mut s)?;
    Ok(s)
}

fn read_graph(path: Option<&Path>) -> Result<Graph, Failure> {
    Ok(Graph::from_edge_list(&read_text(path)?)?)
}

fn write_out(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        None => {
            out!("{text}");
            Ok(())
        }
        Some(p) if p == Path::new("-") => {
            out!("{text}");
            Ok(())
        }
        Some(p) => fs::write(p, text),
    }
}

fn show(x: &Q) -> String {
    format!("{} ({})", fmt_q(x), round_half_even(x, DECIMALS))
}

fn bounds(deltas: &[usize], p_curve: bool) -> Outcome {
    if p_curve {
        for &d in deltas {
            outln!("# delta={d}");
            out!("{}", emit_p_curve(d)?);
        }
        return Ok(());
    }
    out!("{}", emit_table(deltas)?);
    let bad: Vec<usize> = deltas
        .iter()
        .copied()
        .filter(|&d| main_bound(d).is_ok_and(|r| !r.product_below_one_fifth))
        .collect();
    if !bad.is_empty() {
        return Err(Failure::Check(format!("ỹμ ≥ 1/5 for Δ in {bad:?}")));
    }
    Ok(())
}

fn parse_weights(text: &str, n: usize) -> Result<Vec<Q>, Failure> {
    let w = text
        .split_whitespace()
        .map(parse_q)
        .collect::<Result<Vec<_>, _>>()?;
    if w.len() != n {
        return Err(Failure::Input(format!(
            "weights file has {} entries for {n} vertices",
            w.len()
        )));
    }
    Ok(w)
}

fn chif(graph: Option<&Path>, weights: Option<&Path>, cert: Option<&Path>, reed: bool) -> Outcome {
    let g = read_graph(graph)?;
    let w = match weights {
        Some(p) => parse_weights(&fs::read_to_string(p)?, g.n())?,
        None => vec![Q::one(); g.n()],
    };
    let r = chi_f_weighted(&g, &w)?;
    outln!("{}", fmt_q(&r.value));
    outln!("# decimal {} (round half to even)", round_half_even(&r.value, DECIMALS));
    let certificate = Certificate::new(g.n(), w.clone(), r.primal.clone());
    match cert {
        Some(p) => write_out(Some(p), &(certificate.to_json() + "\n"))?,
        None => {
            for (s, wt) in &r.primal.columns {
                outln!("# column {} {:?}", fmt_q(wt), s);
            }
        }
    }
    if reed {
        let rep = verify_reed_bounds(&g, &w)?;
        outln!("# rho {}", show(&rep.reed));
        if !rep.holds {
            return Err(Failure::Check(format!(
                "χ_f^w = {} exceeds ρ_w = {}",
                rep.chi_f, rep.reed
            )));
        }
    }
    Ok(())
}

fn check(graph: Option<&Path>) -> Outcome {
    let g = read_graph(graph)?;
    let cs = CliqueStructure::new(&g);
    let report = pipeline_eligibility(&g);
    outln!("vertices: {}", g.n());
    outln!("edges: {}", g.edge_count());
    outln!("max_cliques: {}", cs.max_cliques.len());
    match find_bump(&g, &cs) {
        None => outln!("bump: none"),
        Some(b) => outln!(
            "bump: clique {:?} y1 {} y2 {} y3 {} v1 {} v2 {}",
            b.clique, b.y1, b.y2, b.y3, b.v1, b.v2
        ),
    }
    for p in ALL_PATTERNS {
        match find_near_clique(&g, cs.delta, p) {
            None => outln!("near_clique {p}: none"),
            Some(x) => outln!("near_clique {p}: {x:?}"),
        }
    }
    for line in report.lines() {
        outln!("{line}");
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Check("graph is not eligible".into()))
    }
}

fn sample(graph: Option<&Path>, trials: u64, seed: u64, exact: bool) -> Outcome {
    let g = read_graph(graph)?;
    if exact {
        let cs = CliqueStructure::new(&g);
        let r = verify_exact(&g)?;
        outln!("vertex,class,pr_s,pr_s_omega,pr_s_decimal");
        for v in 0..g.n() {
            outln!(
                "{v},{},{},{},{}",
                vertex_class(&cs, v),
                fmt_q(&r.dist.pr_s[v]),
                fmt_q(&r.dist.pr_s_omega[v]),
                round_half_even(&r.dist.pr_s[v], DECIMALS)
            );
        }
        if !r.ok() {
            return Err(Failure::Check(r.failures.join("; ")));
        }
        return Ok(());
    }
    let est = estimate(&g, trials, seed)?;
    out!("{}", est.to_csv());
    if est.pass() {
        Ok(())
    } else {
        Err(Failure::Check("a statistical check failed".into()))
    }
}

#[allow(clippy::too_many_arguments)]
fn pipeline(
    graph: Option<&Path>,
    y: Option<&str>,
    mode: ModeArg,
    trials: u64,
    seed: u64,
    emit_trace: Option<&Path>,
    emit_cert: Option<&Path>,
    run_end_to_end: bool,
) -> Outcome {
    let g = read_graph(graph)?;
    let delta = g.max_degree();
    let br = main_bound(delta)?;
    let y = match y {
        Some(s) => parse_q(s)?,
        None => br.ytilde.clone(),
    };
    let mode = match mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Montecarlo => Mode::MonteCarlo { trials, seed },
    };
    let mut failures = Vec::new();
    let (trace, ssw) = initial_colouring(&g, &y, mode)?;
    outln!("y: {}", show(&y));
    outln!("iterations: {}", trace.iterations.len());
    outln!("y_total: {}", fmt_q(&trace.y_total));
    if trace.flagged() {
        outln!("flagged: zero estimated probabilities excluded from y'");
    }
    let trace_failures = check_trace(&g, &trace, &ssw);
    failures.extend(trace_failures);
    let slack = match mode {
        Mode::Exact => Q::from_integer(0.into()),
        Mode::MonteCarlo { trials, .. } => {
            montecarlo_slack(&y, trials) * Q::from_integer((trace.iterations.len() as i64).into())
        }
    };
    let cond = check_conditions(&g, &y, &trace.final_w, &slack)?;
    for c in ['a', 'b', 'c', 'd', 'e'] {
        let status = match (cond.holds(c), cond.statistical) {
            (true, false) => "holds",
            (true, true) => "statistically supported",
            (false, _) => "fails",
        };
        outln!("condition {c}: {status}");
    }
    failures.extend(cond.failures.iter().map(|(c, m)| format!("({c}) {m}")));
    if mode == Mode::Exact && y <= br.ytilde {
        let (th, _, _) = verify_theorem_initial(&g, &y)?;
        outln!("rho_residual: {}", show(&th.rho_max));
        outln!("rho_bound: {}", show(&th.bound));
        outln!("reed_drop: {}", if th.holds { "holds" } else { "fails" });
        if !th.holds {
            failures.push(format!("ρ_(1-w) = {} > {}", th.rho_max, th.bound));
        }
    }
    if let Some(p) = emit_trace {
        write_out(Some(p), &trace.dump())?;
    }
    if let Some(p) = emit_cert {
        let cert = Certificate::new(g.n(), trace.final_w.clone(), ssw.clone());
        write_out(Some(p), &(cert.to_json() + "\n"))?;
    }
    if run_end_to_end {
        let r = end_to_end(&g)?;
        outln!("chi_f: {}", show(&r.chi_f));
        outln!("delta_minus_epsilon: {}", show(&r.bound));
        match (&r.composition, &r.skipped) {
            (Some(c), _) => {
                outln!("combined_total: {}", show(&c.combined.total));
                outln!("combined: {}", if c.combined_ok { "verified" } else { "rejected" });
                failures.extend(c.diagnostics.iter().cloned());
            }
            (None, Some(why)) => outln!("combined: skipped ({why})"),
            (None, None) => {}
        }
        if !r.ok() {
            failures.push("end-to-end check failed".into());
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        for f in &failures {
            eprintln!("{f}");
        }
        Err(Failure::Check(format!("{} failure(s)", failures.len())))
    }
}

fn certify(graph: &Path, cert: &Path) -> Outcome {
    let g = read_graph(Some(graph))?;
    let c = Certificate::from_json(&fs::read_to_string(cert)?)?;
    let r = c.verify(&g);
    if r.ok {
        outln!("pass");
        outln!("total {}", show(&c.weighting.total));
        Ok(())
    } else {
        outln!("fail");
        for d in &r.diagnostics {
            outln!("{d}");
        }
        Err(Failure::Check(r.diagnostics[0].clone()))
    }
}

fn gen(family: &str, params: &[usize], out: Option<&Path>) -> Outcome {
    let g = named_graph(family, params).map_err(|e| {
        Failure::Input(format!("{e}; families: {}", NAMED_FAMILIES.join(", ")))
    })?;
    write_out(out, &g.to_edge_list())?;
    Ok(())
}
