//! `rigidkit`: command-line access to the rigid-relation toolkit.
//!
//! Exit status is 0 for a passing verdict or a completed construction, 1 for
//! a failing verdict and 2 for usage, input or output errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use rigidkit_core::disjoint::{build_union, UnionStructure};
use rigidkit_core::graph::{Digraph, UGraph};
use rigidkit_core::hom::{self, HomQuery};
use rigidkit_core::omega;
use rigidkit_core::phi;
use rigidkit_core::search::{self, SearchMode};
use rigidkit_core::symmetrize::{self, GadgetScheme};
use rigidkit_core::witness::{self, WitnessBound, WitnessFile, WitnessProvider, WitnessReport};

#[derive(Parser)]
#[command(name = "rigidkit", version, about = "Rigid relations at finite scale")]
struct Cli {
    /// Print the full report as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads; 0 uses one per core. Never changes the output.
    #[arg(long, global = true, env = "RIGIDKIT_WORKERS", default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the identity is the only endomorphism.
    CheckRigid { file: PathBuf },
    /// Enumerate homomorphisms between two edge-list files.
    Homs {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Fix a source vertex, as `u=v`.
        #[arg(long = "pin", value_parser = parse_pin)]
        pins: Vec<(usize, usize)>,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Count the orientation completions of a symmetric base.
    PhiCount { base: PathBuf },
    /// Build one completion from its orientation bits.
    PhiMember {
        base: PathBuf,
        /// One `0` or `1` per non-edge pair, in pair order.
        #[arg(long)]
        bits: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count homomorphisms between random pairs of distinct completions.
    PhiSweep {
        base: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the disjoint union of equal-size components.
    Union {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check the per-vertex witness condition.
    VerifyDiamond(WitnessArgs),
    /// Check the per-pair witness condition.
    VerifyStar(WitnessArgs),
    /// Look for two witness sets inducing the same local relation.
    Collide {
        file: PathBuf,
        /// `component` or a file of witness sets, one per line.
        #[arg(long, default_value = "component")]
        witness: String,
        /// Treat the input as a union of blocks of this size.
        #[arg(long)]
        blocks: Option<usize>,
    },
    /// Verify the prefix witnesses `A(i)` for every `i <= i-max`.
    OmegaVerify {
        #[arg(long)]
        i_max: usize,
        #[arg(long, default_value_t = omega::DEFAULT_SLACK)]
        slack: usize,
    },
    /// Search for rigid graphs on `n` vertices.
    SearchRigid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        symmetric: bool,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write each find as an edge-list file into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Turn a digraph into an undirected graph with the same homomorphisms.
    Symmetrize {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// `default` or a scheme file.
        #[arg(long, default_value = "default")]
        scheme: String,
    },
    /// Compare hom counts before and after symmetrizing.
    VerifyFaithful {
        /// All ordered pairs of 3-vertex digraphs.
        #[arg(long)]
        sweep3: bool,
        /// Seeded random pairs of 4-vertex digraphs.
        #[arg(long, default_value_t = 200)]
        random4: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "default")]
        scheme: String,
        /// Check a single pair instead of sweeping.
        #[arg(long, requires = "right")]
        left: Option<PathBuf>,
        #[arg(long, requires = "left")]
        right: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct WitnessArgs {
    file: PathBuf,
    /// `component`, `full` or a witness file.
    #[arg(long, default_value = "component")]
    witness: String,
    #[arg(long)]
    k: usize,
    /// Require witnesses strictly smaller than `k`.
    #[arg(long)]
    strict: bool,
    /// Treat the input as a union of blocks of this size.
    #[arg(long)]
    blocks: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

fn parse_pin(s: &str) -> Result<(usize, usize), String> {
    let (u, v) = s.split_once('=').ok_or_else(|| format!("expected u=v, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("not a vertex: {t:?}"));
    Ok((num(u)?, num(v)?))
}

struct Outcome {
    passed: bool,
    seed: Option<u64>,
    summary: String,
    report: Value,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>, report: impl Serialize) -> Self {
        let report = serde_json::to_value(report).expect("reports serialize");
        Outcome { passed, seed: None, summary: summary.into(), report }
    }

    fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

type CliResult<T> = Result<T, String>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_graph(path: &Path) -> CliResult<Digraph> {
    Digraph::decode(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_base(path: &Path) -> CliResult<UGraph> {
    UGraph::try_from(load_graph(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_scheme(spec: &str) -> CliResult<GadgetScheme> {
    if spec == "default" {
        return Ok(GadgetScheme::default_scheme());
    }
    let path = Path::new(spec);
    GadgetScheme::decode(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn core_err(e: rigidkit_core::Error) -> String {
    e.to_string()
}

enum Host {
    Graph(Digraph),
    Union(UnionStructure),
}

impl Host {
    fn load(path: &Path, blocks: Option<usize>) -> CliResult<Self> {
        let g = load_graph(path)?;
        let Some(size) = blocks else { return Ok(Host::Graph(g)) };
        if size == 0 || g.n() % size != 0 {
            return Err(format!("{} vertices do not split into blocks of {size}", g.n()));
        }
        let parts: Vec<Digraph> = (0..g.n() / size)
            .map(|c| g.induced(&(c * size..(c + 1) * size).collect::<Vec<_>>()).map(|(sub, _)| sub))
            .collect::<Result<_, _>>()
            .map_err(core_err)?;
        let u = build_union(parts).map_err(core_err)?;
        if u.flat() != &g {
            return Err(format!("{} has edges between blocks of size {size}", path.display()));
        }
        Ok(Host::Union(u))
    }

    fn graph(&self) -> &Digraph {
        match self {
            Host::Graph(g) => g,
            Host::Union(u) => u.flat(),
        }
    }
}

fn witness_provider(spec: &str, n: usize) -> CliResult<WitnessProvider> {
    match spec {
        "component" => Ok(WitnessProvider::Component),
        "full" => Ok(WitnessProvider::Full),
        file => {
            let path = Path::new(file);
            WitnessFile::parse(&read(path)?, n)
                .map_err(|e| format!("{}: {e}", path.display()))?
                .provider()
                .ok_or_else(|| format!("{file}: bare witness sets need `x:` or `x y:` keys here"))
        }
    }
}

fn witness_outcome(report: WitnessReport) -> Outcome {
    let failed = report.failures().count();
    let mut summary = format!(
        "{:?} check, k = {}{}: {} of {} entries pass",
        report.mode,
        report.k,
        if report.strict { " (strict)" } else { "" },
        report.entries.len() - failed,
        report.entries.len()
    );
    if let Some(bad) = report.failures().next() {
        let map = serde_json::to_string(&bad.counterexample).expect("maps serialize");
        summary.push_str(&format!("\nfirst failure at vertex {}: {map}", bad.vertex));
    }
    Outcome::new(report.passed, summary, report)
}

fn run(command: Command) -> CliResult<Outcome> {
    match command {
        Command::CheckRigid { file } => {
            let g = load_graph(&file)?;
            let cert = hom::is_rigid(&g);
            let summary = match &cert.counterexample {
                None => "rigid".to_string(),
                Some(map) => {
                    format!("not rigid; counterexample {}", serde_json::to_string(map).expect("maps serialize"))
                }
            };
            Ok(Outcome::new(cert.is_rigid(), summary, cert))
        }
        Command::Homs { source, target, pins, limit } => {
            let (s, t) = (load_graph(&source)?, load_graph(&target)?);
            let mut q = HomQuery::new(&s, &t);
            for (u, v) in pins {
                q = q.pin(u, v);
            }
            if let Some(l) = limit {
                q = q.limit(l);
            }
            let maps = hom::enumerate_homs(&q).map_err(core_err)?;
            let images: Vec<&Vec<usize>> = maps.iter().map(|m| &m.image).collect();
            let summary = format!("{} homomorphisms", maps.len());
            Ok(Outcome::new(true, summary, json!({ "count": maps.len(), "maps": images })))
        }
        Command::PhiCount { base } => {
            let t = phi::compute_t(&load_base(&base)?);
            let count = t.phi_count().map(|c| c.to_string()).unwrap_or_else(|| format!("2^{}", t.len()));
            let summary = format!("{} non-edge pairs, {count} completions", t.len());
            let report = json!({ "n": t.base.n(), "non_edge_pairs": t.pairs, "count": count });
            Ok(Outcome::new(true, summary, report))
        }
        Command::PhiMember { base, bits, output } => {
            let base = load_base(&base)?;
            let bits: Vec<bool> = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(format!("bits must be 0 or 1, found {other:?}")),
                })
                .collect::<CliResult<_>>()?;
            let member = phi::build_phi_member(&base, &bits).map_err(core_err)?;
            if let Some(path) = output {
                write(&path, &member.realized.encode())?;
            }
            let summary = format!("member {} with {} arcs", phi::index_of_bits(&bits), member.realized.edge_count());
            Ok(Outcome::new(true, summary, member))
        }
        Command::PhiSweep { base, samples, seed } => {
            let report = phi::phi_sweep(&load_base(&base)?, samples, seed).map_err(core_err)?;
            let summary = format!(
                "{} pairs, {} homomorphisms in total, base {}",
                report.pairs_checked,
                report.total_homs,
                if report.base_rigid { "rigid" } else { "not rigid" }
            );
            Ok(Outcome::new(report.passed(), summary, &report).seeded(seed))
        }
        Command::Union { files, output } => {
            let parts: Vec<Digraph> = files.iter().map(|f| load_graph(f)).collect::<CliResult<_>>()?;
            let u = build_union(parts).map_err(core_err)?;
            write(&output, &u.flat().encode())?;
            let summary = format!("{} components of {} vertices", u.component_count(), u.component_size());
            let report = json!({
                "components": u.component_count(),
                "component_size": u.component_size(),
                "n": u.n(),
                "edges": u.flat().edge_count(),
            });
            Ok(Outcome::new(true, summary, report))
        }
        Command::VerifyDiamond(args) => {
            let host = Host::load(&args.file, args.blocks)?;
            let provider = witness_provider(&args.witness, host.graph().n())?;
            let bound = WitnessBound::new(args.k, args.strict);
            let report = match &host {
                Host::Graph(g) => witness::verify_diamond(g, &provider, bound),
                Host::Union(u) => witness::verify_diamond(u, &provider, bound),
            }
            .map_err(core_err)?;
            Ok(witness_outcome(report))
        }
        Command::VerifyStar(args) => {
            let host = Host::load(&args.file, args.blocks)?;
            let provider = witness_provider(&args.witness, host.graph().n())?;
            let bound = WitnessBound::new(args.k, args.strict);
            let report = match &host {
                Host::Graph(g) => witness::verify_star(g, &provider, bound),
                Host::Union(u) => witness::verify_star(u, &provider, bound),
            }
            .map_err(core_err)?;
            Ok(witness_outcome(report))
        }
        Command::Collide { file, witness, blocks } => {
            let host = Host::load(&file, blocks)?;
            let sets = match witness.as_str() {
                "component" => match &host {
                    Host::Graph(g) => g.weak_components(),
                    Host::Union(u) => u.blocks(),
                },
                path => match WitnessFile::parse(&read(Path::new(path))?, host.graph().n())
                    .map_err(|e| format!("{path}: {e}"))?
                {
                    WitnessFile::Sets(sets) => sets,
                    _ => return Err(format!("{path}: collide expects bare witness sets, one per line")),
                },
            };
            let result = match &host {
                Host::Graph(g) => witness::find_witness_collision(g, &sets),
                Host::Union(u) => witness::find_witness_collision(u, &sets),
            }
            .map_err(core_err)?;
            let summary = match &result.collision {
                None => format!("{} witnesses, no collision", result.locals.len()),
                Some(c) => format!(
                    "witnesses {} and {} collide; map {}",
                    c.first,
                    c.second,
                    serde_json::to_string(&c.map).expect("maps serialize")
                ),
            };
            Ok(Outcome::new(result.collision.is_none(), summary, result))
        }
        Command::OmegaVerify { i_max, slack } => {
            let report = omega::omega_sweep(i_max, slack).map_err(core_err)?;
            let adequate = report.entries.iter().filter(|e| e.certificate.adequate).count();
            let stable = report.entries.iter().filter(|e| e.stable).count();
            let summary = format!(
                "{adequate} of {} witnesses adequate, {stable} stable over {slack} extra lengths",
                report.entries.len()
            );
            Ok(Outcome::new(report.passed, summary, report))
        }
        Command::SearchRigid { n, symmetric, mode, budget, seed, out_dir } => {
            let mode = match mode {
                Mode::Exhaustive => SearchMode::Exhaustive,
                Mode::Random => SearchMode::Random { budget: budget.ok_or("random mode needs --budget")?, seed },
            };
            let report = search::search_rigid(n, symmetric, mode).map_err(core_err)?;
            if let Some(dir) = out_dir {
                fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
                for (i, g) in report.rigid_found.iter().enumerate() {
                    write(&dir.join(format!("rigid-{i:04}.edges")), &g.encode())?;
                }
            }
            let summary =
                format!("{} rigid graphs among {} examined", report.rigid_found.len(), report.graphs_examined);
            let outcome = Outcome::new(true, summary, &report);
            Ok(match mode {
                SearchMode::Random { seed, .. } => outcome.seeded(seed),
                SearchMode::Exhaustive => outcome,
            })
        }
        Command::Symmetrize { file, output, scheme } => {
            let g = load_graph(&file)?;
            let s = symmetrize::symmetrize(&g, &load_scheme(&scheme)?);
            write(&output, &s.graph.as_digraph().encode())?;
            let summary = format!("{} vertices, {} edges", s.graph.n(), s.graph.pairs().len());
            let report = json!({ "n": s.graph.n(), "connected": s.graph.is_connected(), "carriers": s.carriers });
            Ok(Outcome::new(true, summary, report))
        }
        Command::VerifyFaithful { sweep3, random4, seed, scheme, left, right } => {
            let scheme = load_scheme(&scheme)?;
            if let (Some(l), Some(r)) = (left, right) {
                let check =
                    symmetrize::verify_faithful(&load_graph(&l)?, &load_graph(&r)?, &scheme).map_err(core_err)?;
                let summary = format!("{} vs {} homomorphisms", check.digraph_homs, check.symmetrized_homs);
                return Ok(Outcome::new(check.equal, summary, check));
            }
            let report = symmetrize::faithfulness_sweep(&scheme, sweep3, random4, seed).map_err(core_err)?;
            let total = report.exhaustive_pairs + report.random_pairs;
            let summary = format!("{} of {total} pairs have equal counts", report.equal_pairs);
            Ok(Outcome::new(report.passed, summary, &report).seeded(seed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global() {
            eprintln!("rigidkit: {e}");
            return ExitCode::from(2);
        }
    }
    let name = command_name(&cli.command);
    match run(cli.command) {
        Ok(outcome) => {
            if cli.json {
                let envelope = json!({
                    "tool": "rigidkit",
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": name,
                    "seed": outcome.seed,
                    "passed": outcome.passed,
                    "report": outcome.report,
                });
                println!("{}", serde_json::to_string_pretty(&envelope).expect("json values serialize"));
            } else {
                println!("{}", outcome.summary);
            }
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(message) => {
            eprintln!("rigidkit: {message}");
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckRigid { .. } => "check-rigid",
        Command::Homs { .. } => "homs",
        Command::PhiCount { .. } => "phi-count",
        Command::PhiMember { .. } => "phi-member",
        Command::PhiSweep { .. } => "phi-sweep",
        Command::Union { .. } => "union",
        Command::VerifyDiamond(_) => "verify-diamond",
        Command::VerifyStar(_) => "verify-star",
        Command::Collide { .. } => "collide",
        Command::OmegaVerify { .. } => "omega-verify",
        Command::SearchRigid { .. } => "search-rigid",
        Command::Symmetrize { .. } => "symmetrize",
        Command::VerifyFaithful { .. } => "verify-faithful",
    }
}
