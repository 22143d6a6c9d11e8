//! Command-line front end. Exit codes are scriptable: 0 success,
//! 1 verification failure, 2 inconclusive, 3 input or usage error.

use crate::bounds;
use crate::cert::Certificate;
use crate::certify;
use crate::error::Error;
use crate::graph::Graph;
use crate::io as gio;
use crate::oracle;
use crate::pipeline::{self, ExtractionParams};
use crate::ramsey::SearchMode;
use crate::search::SearchOutcome;
use crate::web::{self, plant_subdivision, validate_web, Web};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 3;

#[derive(Parser)]
#[command(
    name = "kweb",
    version,
    about = "Extract induced cliques, bicliques, or clean branch sets from webs \
             (short subdivisions of complete graphs), with verifiable certificates"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Constructive,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> SearchMode {
        match m {
            ModeArg::Exact => SearchMode::Exact,
            ModeArg::Constructive => SearchMode::Constructive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Edges,
    Graph6,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a host graph with a planted subdivision and its web
    Gen(GenArgs),
    /// Search a graph for a web of the requested shape
    FindWeb(FindWebArgs),
    /// Run the extraction pipeline and write a certificate
    Extract(ExtractArgs),
    /// Check a certificate against its graph and web
    Verify(VerifyArgs),
    /// Print the composed size bounds for one parameter triple
    Bounds(BoundsArgs),
    /// Brute-force ground truth for small instances
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of branch vertices
    #[arg(short = 'k', long)]
    k: u32,
    /// Path lengths: one number, a "min:max" range, or a comma list cycled
    /// over the pairs in sorted order
    #[arg(long, default_value = "2")]
    len: String,
    /// Probability of each admissible noise edge
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "graph.txt")]
    graph_out: PathBuf,
    #[arg(long, default_value = "web.json")]
    web_out: PathBuf,
    #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
    format: GraphFormat,
}

#[derive(Args)]
struct FindWebArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Shortness: every path may have length at most r + 1
    #[arg(short = 'r', long)]
    r: usize,
    /// Number of branch vertices
    #[arg(short = 'w', long)]
    w: usize,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long, default_value = "web.json")]
    web_out: PathBuf,
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    web: PathBuf,
    #[arg(short = 'r', long)]
    r: usize,
    /// Clean-set size to aim for
    #[arg(short = 's', long)]
    s: usize,
    /// Clique / biclique size to aim for
    #[arg(short = 't', long)]
    t: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long, default_value = "cert.json")]
    cert_out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    web: PathBuf,
    #[arg(long)]
    cert: PathBuf,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(short = 'r', long)]
    r: u64,
    #[arg(short = 's', long)]
    s: u64,
    #[arg(short = 't', long)]
    t: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(subcommand)]
    cmd: OracleCmd,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Least clean branch subset of one size, by exhaustive search
    CleanSet {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        web: PathBuf,
        #[arg(short = 's', long)]
        s: usize,
    },
    /// Least ground size forcing a monochromatic subset, by exhaustive search
    RamseyMin {
        #[arg(long)]
        colors: u64,
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 8)]
        max_ground: usize,
    },
    /// Exhaustive induced clique / biclique report
    Induced {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short = 't', long)]
        t: usize,
    },
}

pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT_ERROR,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

fn dispatch(cmd: Cmd) -> crate::Result<i32> {
    match cmd {
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::FindWeb(args) => cmd_find_web(args),
        Cmd::Extract(args) => cmd_extract(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Bounds(args) => cmd_bounds(args),
        Cmd::Oracle(args) => cmd_oracle(args),
    }
}

fn parse_lengths(spec: &str, k: u32, seed: u64) -> crate::Result<BTreeMap<(u32, u32), usize>> {
    let bad = |msg: &str| Error::BadParameter(format!("length spec {spec:?}: {msg}"));
    if let Ok(len) = spec.parse::<usize>() {
        return Ok(web::uniform_lengths(k, len));
    }
    if let Some((lo, hi)) = spec.split_once(':') {
        let lo: usize = lo.parse().map_err(|_| bad("bad lower bound"))?;
        let hi: usize = hi.parse().map_err(|_| bad("bad upper bound"))?;
        if lo == 0 || hi < lo {
            return Err(bad("need 1 <= min <= max"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6c656e);
        let mut m = BTreeMap::new();
        for i in 0..k {
            for j in i + 1..k {
                m.insert((i, j), rng.random_range(lo..=hi));
            }
        }
        return Ok(m);
    }
    let list: Vec<usize> = spec
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad("expected a number, min:max, or a comma list"))?;
    if list.is_empty() || list.contains(&0) {
        return Err(bad("lengths must be at least 1"));
    }
    let mut m = BTreeMap::new();
    let mut next = 0usize;
    for i in 0..k {
        for j in i + 1..k {
            m.insert((i, j), list[next % list.len()]);
            next += 1;
        }
    }
    Ok(m)
}

fn write_graph(path: &Path, g: &Graph, format: GraphFormat) -> crate::Result<()> {
    let text = match format {
        GraphFormat::Edges => gio::write_edge_list(g),
        GraphFormat::Graph6 => gio::write_graph6(g),
    };
    fs::write(path, text)?;
    Ok(())
}

fn write_web(path: &Path, web: &Web) -> crate::Result<()> {
    let mut text = serde_json::to_string_pretty(web).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn read_graph(path: &Path) -> crate::Result<Graph> {
    gio::parse_graph(&fs::read_to_string(path)?)
}

fn read_web(path: &Path) -> crate::Result<Web> {
    serde_json::from_str(&fs::read_to_string(path)?).map_err(|e| Error::Parse(e.to_string()))
}

fn cmd_gen(args: GenArgs) -> crate::Result<i32> {
    if args.k == 0 {
        return Err(Error::BadParameter("k must be at least 1".into()));
    }
    let lengths = parse_lengths(&args.len, args.k, args.seed)?;
    let (g, web) = plant_subdivision(args.k, &lengths, args.noise, args.seed)?;
    write_graph(&args.graph_out, &g, args.format)?;
    write_web(&args.web_out, &web)?;
    let prof = web::profile(&web);
    println!(
        "planted web: {} branch vertices, {} total, shortness {}; graph has {} vertices, {} edges",
        prof.w_value,
        prof.total_vertices,
        prof.r_value,
        g.vertex_count(),
        g.edge_count()
    );
    Ok(EXIT_OK)
}

fn cmd_find_web(args: FindWebArgs) -> crate::Result<i32> {
    let g = read_graph(&args.graph)?;
    match web::find_web(&g, args.r, args.w, args.budget)? {
        SearchOutcome::Found(web) => {
            write_web(&args.web_out, &web)?;
            let prof = web::profile(&web);
            println!(
                "found a web: {} branch vertices, shortness {}",
                prof.w_value, prof.r_value
            );
            Ok(EXIT_OK)
        }
        SearchOutcome::Absent => {
            println!("no such web exists (search was exhaustive)");
            Ok(EXIT_VERIFY_FAILED)
        }
        SearchOutcome::Inconclusive { steps } => {
            println!("inconclusive after {steps} steps");
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn cmd_extract(args: ExtractArgs) -> crate::Result<i32> {
    let g = read_graph(&args.graph)?;
    let web = read_web(&args.web)?;
    let report = validate_web(&g, &web);
    if !report.is_valid() {
        eprintln!("web fails validation:\n{report}");
        return Ok(EXIT_INPUT_ERROR);
    }
    let params = ExtractionParams::new(args.r, args.s, args.t, args.mode.into(), args.budget);
    let cert = pipeline::extract(&g, &web, &params)?;
    fs::write(&args.cert_out, cert.to_json())?;
    println!("outcome: {}", cert.outcome.kind());
    if cert.outcome.is_inconclusive() {
        Ok(EXIT_INCONCLUSIVE)
    } else {
        Ok(EXIT_OK)
    }
}

fn cmd_verify(args: VerifyArgs) -> crate::Result<i32> {
    let g = read_graph(&args.graph)?;
    let web = read_web(&args.web)?;
    let report = validate_web(&g, &web);
    if !report.is_valid() {
        eprintln!("web fails validation:\n{report}");
        return Ok(EXIT_INPUT_ERROR);
    }
    let cert = Certificate::from_json(&fs::read_to_string(&args.cert)?)?;
    match certify::verify_certificate(&g, &web, &cert) {
        Ok(()) => {
            println!("certificate verifies: {}", cert.outcome.kind());
            Ok(EXIT_OK)
        }
        Err(violation) => {
            println!("certificate rejected: {violation}");
            Ok(EXIT_VERIFY_FAILED)
        }
    }
}

fn cmd_bounds(args: BoundsArgs) -> crate::Result<i32> {
    let chain = bounds::bound_chain(args.r, args.s, args.t)?;
    let mut text =
        serde_json::to_string_pretty(&chain).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    print!("{text}");
    Ok(EXIT_OK)
}

fn cmd_oracle(args: OracleArgs) -> crate::Result<i32> {
    match args.cmd {
        OracleCmd::CleanSet { graph, web, s } => {
            let g = read_graph(&graph)?;
            let w = read_web(&web)?;
            let found = oracle::brute_clean_set(&g, &w, s)?;
            println!(
                "{}",
                serde_json::json!({ "found": found.is_some(), "set": found })
            );
        }
        OracleCmd::RamseyMin {
            colors,
            arity,
            target,
            max_ground,
        } => {
            let min = oracle::brute_ramsey_min(colors, arity, target, max_ground)?;
            println!("{}", serde_json::json!({ "min_ground": min }));
        }
        OracleCmd::Induced { graph, t } => {
            let g = read_graph(&graph)?;
            let rep = oracle::brute_induced(&g, t)?;
            println!(
                "{}",
                serde_json::json!({
                    "clique": rep.clique,
                    "biclique": rep.biclique.map(|(l, r)| serde_json::json!({"left": l, "right": r })),
                })
            );
        }
    }
    Ok(EXIT_OK)
}
