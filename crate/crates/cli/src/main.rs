//! `starpaths`: solvers, validators, generators and the brute-force oracle on text files.
//!
//! Exit codes: 0 for a positive instance or a valid object, 1 for a negative instance or
//! an invalid object, 2 for usage, input and internal errors (including an oracle
//! disagreement under `--oracle-check`).

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starpaths::decomp::{parse_decomposition, subdigraph_breakability, validate, ArborealDecomposition, DecompError};
use starpaths::graph::{
    find_subdigraph, is_dag, oracle_find_pattern, parse_digraph, parse_pattern, parse_undirected, validate_embedding,
    vid, write_digraph, write_pattern, Digraph, Embedding, OracleError, ParseError, PatternPath, StarShape,
    StarsPathsPattern, VertexId, DEFAULT_ORACLE_CAP,
};
use starpaths::reductions::{
    gen_antidirected, gen_caterpillar, gen_clique_to_expansion, gen_matching_to_stars,
    gen_matching_to_stars_plus_bigstar, gen_sat22, parse_antidirected_input, parse_bipartite, parse_dimacs,
    ReductionOutput, Target,
};
use starpaths::rspsi::{solve_rooted, solve_unrooted, RspsiInstance};
use starpaths::saddp::{oracle_saddp, parse_saddp, solve_saddp, validate_solution, PathSolution, SaddpError};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

#[derive(Parser)]
#[command(name = "starpaths", version, about = "Stars-paths subdigraph search over arboreal decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OracleFlags {
    /// Re-check the verdict with the brute-force oracle when the instance is small enough.
    #[arg(long)]
    oracle_check: bool,
    /// Largest pattern the oracle will attempt.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Find a stars-paths pattern in a host; rooted when the pattern file lists roots.
    SolveRspsi {
        host: PathBuf,
        pattern: PathBuf,
        /// Arboreal decomposition of the host; required unless the host is a DAG.
        #[arg(long)]
        decomp: Option<PathBuf>,
        #[command(flatten)]
        oracle: OracleFlags,
    },
    /// Solve a subset-avoiding disjoint paths instance.
    SolveSaddp {
        host: PathBuf,
        instance: PathBuf,
        #[arg(long)]
        decomp: Option<PathBuf>,
        #[command(flatten)]
        oracle: OracleFlags,
    },
    /// Check an arboreal decomposition and report its width.
    ValidateDecomp { host: PathBuf, decomp: PathBuf },
    /// Largest number of weak components a vertex set induces inside a w-guarded set.
    Breakability {
        host: PathBuf,
        #[arg(long)]
        w: usize,
        /// Comma-separated vertices of the subdigraph; all vertices when omitted.
        #[arg(long, value_delimiter = ',')]
        vertices: Option<Vec<usize>>,
    },
    /// Write a generated host, its target and a role sidecar into a directory.
    Gen {
        kind: GenKind,
        /// Source instance; not used by `random`.
        input: Option<PathBuf>,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        /// Clique size for `clique`.
        #[arg(long)]
        k: Option<usize>,
        /// Seed for `random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Host size for `random`.
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Brute-force search for a pattern or a digraph in a host.
    Oracle {
        host: PathBuf,
        target: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        cap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Clique,
    Antidirected,
    Matching,
    Bigstar,
    Sat22,
    Caterpillar,
    /// A random DAG host with a random pattern.
    Random,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{0}")]
    Input(String),
    #[error("oracle disagrees: {0}")]
    OracleMismatch(String),
}

/// A verdict and the report lines that follow it.
struct Report {
    yes: bool,
    text: String,
}

impl Report {
    fn verdict(yes: bool) -> Self {
        Report { yes, text: format!("VERDICT: {}\n", if yes { "YES" } else { "NO" }) }
    }

    fn line(&mut self, line: impl AsRef<str>) {
        self.text.push_str(line.as_ref());
        self.text.push('\n');
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn parsed<T>(path: &Path, result: Result<T, ParseError>) -> Result<T, CliError> {
    result.map_err(|e| CliError::Parse { path: path.display().to_string(), line: e.line, message: e.message })
}

fn load_digraph(path: &Path) -> Result<Digraph, CliError> {
    parsed(path, parse_digraph(&read(path)?))
}

fn load_decomposition(path: Option<&PathBuf>) -> Result<Option<ArborealDecomposition>, CliError> {
    path.map(|p| parsed(p, parse_decomposition(&read(p)?))).transpose()
}

fn joined(vs: &[VertexId]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn embedding_lines(report: &mut Report, e: &Embedding) {
    for (i, (c, leaves)) in e.star_centers.iter().zip(&e.star_leaves).enumerate() {
        let leaves = if leaves.is_empty() { String::new() } else { format!(" {}", joined(leaves)) };
        report.line(format!("star {i} center {c} leaves{leaves}"));
    }
    for (i, p) in e.path_vertices.iter().enumerate() {
        report.line(format!("path {i} {}", joined(p)));
    }
}

fn oracle_note(report: &mut Report, err: OracleError) {
    report.line(format!("oracle-check: skipped ({err})"));
}

fn solve_rspsi(host: &Path, pattern: &Path, decomp: Option<&PathBuf>, flags: &OracleFlags) -> Result<Report, CliError> {
    let d = load_digraph(host)?;
    let p = parsed(pattern, parse_pattern(&read(pattern)?))?;
    let dec = load_decomposition(decomp)?;
    let found = match p.roots() {
        Some(_) => solve_rooted(&RspsiInstance { d: d.clone(), pattern: p.clone(), decomposition: dec }),
        None => solve_unrooted(&d, &p, dec.as_ref()),
    }
    .map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(e) = &found {
        validate_embedding(&d, &p, e).map_err(|err| CliError::OracleMismatch(format!("solver returned an invalid embedding: {err}")))?;
    }
    let mut report = Report::verdict(found.is_some());
    if let Some(e) = &found {
        embedding_lines(&mut report, e);
    }
    if flags.oracle_check {
        match oracle_find_pattern(&d, &p, flags.cap) {
            Ok(o) if o.is_some() != found.is_some() => {
                return Err(CliError::OracleMismatch(format!("solver {}, oracle {}", found.is_some(), o.is_some())))
            }
            Ok(_) => report.line("oracle-check: agrees"),
            Err(err) => oracle_note(&mut report, err),
        }
    }
    Ok(report)
}

fn solution_lines(report: &mut Report, sol: &PathSolution) {
    for (i, p) in sol.paths.iter().enumerate() {
        report.line(format!("path {i} {}", joined(p)));
    }
}

fn solve_saddp_cmd(host: &Path, instance: &Path, decomp: Option<&PathBuf>, flags: &OracleFlags) -> Result<Report, CliError> {
    let d = load_digraph(host)?;
    let inst = parsed(instance, parse_saddp(&read(instance)?, d.clone()))?;
    let dec = match load_decomposition(decomp)? {
        Some(dec) => dec,
        None => starpaths::decomp::dag_decomposition(&d)
            .map_err(|_| CliError::Input("host is not a DAG; pass --decomp".into()))?,
    };
    let found = solve_saddp(&inst, &dec).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(sol) = &found {
        validate_solution(&inst, sol).map_err(|e| CliError::OracleMismatch(format!("solver returned an invalid solution: {e}")))?;
    }
    let mut report = Report::verdict(found.is_some());
    if let Some(sol) = &found {
        solution_lines(&mut report, sol);
    }
    if flags.oracle_check {
        match oracle_saddp(&inst) {
            Ok(o) if o.is_some() != found.is_some() => {
                return Err(CliError::OracleMismatch(format!("solver {}, oracle {}", found.is_some(), o.is_some())))
            }
            Ok(_) => report.line("oracle-check: agrees"),
            Err(SaddpError::TooLarge) => report.line("oracle-check: skipped (instance too large)"),
            Err(e) => return Err(CliError::Input(e.to_string())),
        }
    }
    Ok(report)
}

fn validate_decomp(host: &Path, decomp: &Path) -> Result<Report, CliError> {
    let d = load_digraph(host)?;
    let dec = parsed(decomp, parse_decomposition(&read(decomp)?))?;
    Ok(match validate(&d, &dec) {
        Ok(width) => {
            let mut r = Report::verdict(true);
            r.line(format!("width={width}"));
            r
        }
        Err(DecompError::GuardViolation { edge, certificate }) => {
            let mut r = Report::verdict(false);
            r.line(format!("violation: guard of tree arc {} -> {}", edge.0, edge.1));
            if let Some(walk) = certificate.violating_walk {
                r.line(format!("walk {}", joined(&walk)));
            }
            r
        }
        Err(e @ (DecompError::NotAPartition(_) | DecompError::BadTree(_))) => {
            let mut r = Report::verdict(false);
            r.line(format!("violation: {e}"));
            r
        }
        Err(e) => return Err(CliError::Input(e.to_string())),
    })
}

fn breakability_cmd(host: &Path, w: usize, vertices: Option<&[usize]>) -> Result<String, CliError> {
    let d = load_digraph(host)?;
    let h: BTreeSet<VertexId> = match vertices {
        Some(vs) => vs.iter().map(|&v| vid(v)).collect(),
        None => d.vertices().collect(),
    };
    let arcs: Vec<_> = d.arcs().iter().copied().filter(|(u, v)| h.contains(u) && h.contains(v)).collect();
    let b = subdigraph_breakability(&d, &h, &arcs, w).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(format!("breakability={b}\n"))
}

fn random_output(seed: u64, n: usize) -> ReductionOutput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p: f64 = rng.gen_range(0.15..0.5);
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.gen_bool(p)).collect();
    let host = Digraph::from_pairs(n, &pairs, false).expect("forward arcs are distinct");
    let pattern = loop {
        let k = rng.gen_range(1..=3);
        let stars = (0..k).map(|_| StarShape::new(rng.gen_range(0..3), rng.gen_range(0..2))).collect();
        let paths = (0..rng.gen_range(0..=2))
            .map(|_| PatternPath { from: rng.gen_range(0..k), to: rng.gen_range(0..k), vertex_count: rng.gen_range(2..=4) })
            .collect();
        if let Ok(p) = StarsPathsPattern::new(stars, paths, None) {
            break p;
        }
    };
    ReductionOutput { host, target: Target::Pattern(pattern), expected_dtw_bound: 0, roles: Default::default(), notes: [("seed".to_string(), seed.to_string())].into() }
}

fn gen(kind: GenKind, input: Option<&PathBuf>, out: &Path, k: Option<usize>, seed: u64, n: usize) -> Result<String, CliError> {
    let source = || -> Result<(&PathBuf, String), CliError> {
        let p = input.ok_or_else(|| CliError::Input("this generator needs an input file".into()))?;
        Ok((p, read(p)?))
    };
    let reduce = |r: Result<ReductionOutput, starpaths::reductions::ReductionError>| r.map_err(|e| CliError::Input(e.to_string()));
    let output = match kind {
        GenKind::Clique => {
            let (p, text) = source()?;
            let g = parsed(p, parse_undirected(&text))?;
            let k = k.ok_or_else(|| CliError::Input("`clique` needs --k".into()))?;
            reduce(gen_clique_to_expansion(&g, k))?
        }
        GenKind::Antidirected => {
            let (p, text) = source()?;
            reduce(gen_antidirected(&parsed(p, parse_antidirected_input(&text))?))?
        }
        GenKind::Matching | GenKind::Bigstar | GenKind::Caterpillar => {
            let (p, text) = source()?;
            let b = parsed(p, parse_bipartite(&text))?;
            reduce(match kind {
                GenKind::Matching => gen_matching_to_stars(&b),
                GenKind::Bigstar => gen_matching_to_stars_plus_bigstar(&b),
                _ => gen_caterpillar(&b),
            })?
        }
        GenKind::Sat22 => {
            let (p, text) = source()?;
            reduce(gen_sat22(&parsed(p, parse_dimacs(&text))?))?
        }
        GenKind::Random => random_output(seed, n),
    };
    std::fs::create_dir_all(out).map_err(|source| CliError::Io { path: out.display().to_string(), source })?;
    let mut report = String::new();
    let mut emit = |name: &str, text: &str| -> Result<(), CliError> {
        let path = out.join(name);
        write(&path, text)?;
        let _ = writeln!(report, "wrote {}", path.display());
        Ok(())
    };
    emit("host.dg", &write_digraph(&output.host))?;
    match &output.target {
        Target::Pattern(p) => emit("target.pat", &write_pattern(p))?,
        Target::Digraph(h) => emit("target.dg", &write_digraph(h))?,
    }
    emit("host.roles", &output.sidecar())?;
    let _ = writeln!(report, "vertices={} arcs={}", output.host.n(), output.host.arc_count());
    let _ = writeln!(report, "is_dag={}", is_dag(&output.host));
    let _ = writeln!(report, "expected_dtw_bound={}", output.expected_dtw_bound);
    Ok(report)
}

fn oracle_cmd(host: &Path, target: &Path, cap: usize) -> Result<Report, CliError> {
    let d = load_digraph(host)?;
    let text = read(target)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).unwrap_or("");
    let too_large = |e: OracleError| CliError::Input(e.to_string());
    if first.starts_with("digraph") {
        let h = parsed(target, parse_digraph(&text))?;
        let found = find_subdigraph(&d, &h, &[], cap).map_err(too_large)?;
        let mut report = Report::verdict(found.is_some());
        for (i, v) in found.iter().flatten().enumerate() {
            report.line(format!("map {i} {v}"));
        }
        Ok(report)
    } else {
        let p = parsed(target, parse_pattern(&text))?;
        let found = oracle_find_pattern(&d, &p, cap).map_err(too_large)?;
        let mut report = Report::verdict(found.is_some());
        if let Some(e) = &found {
            embedding_lines(&mut report, e);
        }
        Ok(report)
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let plain = |text: String| Report { yes: true, text };
    match cli.command {
        Command::SolveRspsi { host, pattern, decomp, oracle } => solve_rspsi(&host, &pattern, decomp.as_ref(), &oracle),
        Command::SolveSaddp { host, instance, decomp, oracle } => solve_saddp_cmd(&host, &instance, decomp.as_ref(), &oracle),
        Command::ValidateDecomp { host, decomp } => validate_decomp(&host, &decomp),
        Command::Breakability { host, w, vertices } => breakability_cmd(&host, w, vertices.as_deref()).map(plain),
        Command::Gen { kind, input, out, k, seed, n } => gen(kind, input.as_ref(), &out, k, seed, n).map(plain),
        Command::Oracle { host, target, cap } => oracle_cmd(&host, &target, cap),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            print!("{}", report.text);
            ExitCode::from(if report.yes { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
