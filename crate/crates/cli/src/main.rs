use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rlp_core::builder::build;
use rlp_core::layout::{draw, emit_svg};
use rlp_core::oracle::{compare, oracle_intervals, oracle_verdict, DEFAULT_CAP};
use rlp_core::spq::NodeKind;
use rlp_core::tester::{compute_all_intervals, test_rooted};
use rlp_core::{
    build_spq_tree, gen_random_spterm_with, parse_spterm, term_from_json, term_to_json, GenParams, HalfIntInterval,
    Outcome, SpTerm, Verdict,
};
use serde_json::json;

const STACK: usize = 1 << 30;

#[derive(Parser)]
#[command(name = "rlp", version, about = "Rectilinear planarity testing and drawing for series-parallel graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the graph admits a drawing without bends.
    Test {
        file: PathBuf,
        /// Print the rejecting node and its child intervals.
        #[arg(long)]
        explain: bool,
    },
    /// Print the spirality interval of every tree node in post-order.
    Intervals {
        file: PathBuf,
        /// Print the annotated tree in pre-order instead.
        #[arg(long)]
        tree: bool,
        #[arg(long)]
        json: bool,
    },
    /// Draw an accepted graph as SVG.
    Draw {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write vertex coordinates as JSON.
        #[arg(long)]
        coords: Option<PathBuf>,
        /// Also write the orthogonal representation as JSON.
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long, default_value_t = 24)]
        scale: u32,
    },
    /// Run the exhaustive oracle on a small graph.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Compare oracle spirality sets with the computed intervals.
        #[arg(long)]
        compare: bool,
    },
    /// Write a random term.
    Gen {
        #[arg(long)]
        edges: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Spt)]
        format: Format,
        #[arg(long, default_value_t = GenParams::default().chain)]
        chain: f64,
        #[arg(long, default_value_t = GenParams::default().series)]
        series: f64,
        #[arg(long, default_value_t = GenParams::default().fanout3)]
        fanout3: f64,
        #[arg(long, default_value_t = GenParams::default().min_chain)]
        min_chain: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Spt,
    Json,
}

/// Failure of a command: a diagnostic and an exit code.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(2, format!("error: {e}"))
    }
}

type Run = Result<u8, Failure>;

fn read_term(path: &Path) -> Result<SpTerm, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(2, format!("error: {}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        Ok(term_from_json(&text)?.term)
    } else {
        Ok(parse_spterm(&text)?)
    }
}

fn verdict(path: &Path) -> Result<Verdict, Failure> {
    Ok(test_rooted(build_spq_tree(&read_term(path)?)?))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure(2, format!("error: {}: {e}", path.display())))
}

fn rejection(v: &Verdict) -> Option<Failure> {
    match v.outcome {
        Outcome::Accepted { .. } => None,
        Outcome::Rejected(r) => Some(Failure(1, format!("rejected: {}", r.reason))),
    }
}

fn kind(k: NodeKind) -> &'static str {
    match k {
        NodeKind::Q => "Q",
        NodeKind::S => "S",
        NodeKind::P => "P",
        NodeKind::Root => "Root",
    }
}

fn cmd_test(file: &Path, explain: bool) -> Run {
    let v = verdict(file)?;
    match v.outcome {
        Outcome::Accepted { feasible } => {
            println!("accepted");
            if explain {
                println!("root child {} feasible {feasible}", v.tree().eta());
            }
            Ok(0)
        }
        Outcome::Rejected(r) => {
            if explain {
                let tree = v.tree();
                let n = tree.node(r.node);
                let mut out = format!("node {} {} poles ({},{})", r.node, n.label(), n.poles[0], n.poles[1]);
                for &c in &n.children {
                    let _ = write!(out, "\n  child {} {} {}", c, tree.node(c).label(), v.intervals[c.idx()]);
                }
                println!("{out}");
            }
            Err(rejection(&v).expect("rejected verdict"))
        }
    }
}

fn cmd_intervals(file: &Path, tree_dump: bool, as_json: bool) -> Run {
    let rooted = build_spq_tree(&read_term(file)?)?;
    let tree = &rooted.tree;
    if tree_dump {
        print!("{}", tree.dump());
        return Ok(0);
    }
    let intervals = compute_all_intervals(tree);
    let rows: Vec<_> = tree.postorder().filter(|&id| id != tree.root()).collect();
    if as_json {
        let doc: Vec<_> = rows
            .iter()
            .map(|&id| {
                let n = tree.node(id);
                let iv = intervals[id.idx()];
                let (lo2, hi2) = match iv {
                    HalfIntInterval::Range { lo2, hi2 } => (json!(lo2), json!(hi2)),
                    HalfIntInterval::Empty => (json!(null), json!(null)),
                };
                json!({"id": id.0, "kind": kind(n.kind), "subtype": n.label(), "interval": iv.to_string(), "lo2": lo2, "hi2": hi2})
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for id in rows {
            let n = tree.node(id);
            println!("{} {} {} {}", id, kind(n.kind), n.label(), intervals[id.idx()]);
        }
    }
    Ok(0)
}

fn cmd_draw(file: &Path, output: &Path, coords: Option<&Path>, rep: Option<&Path>, scale: u32) -> Run {
    let v = verdict(file)?;
    if let Some(f) = rejection(&v) {
        return Err(f);
    }
    let c = build(&v)?;
    let drawing = draw(&c.rep)?;
    write(output, &emit_svg(&drawing, c.rep.graph(), scale))?;
    if let Some(path) = coords {
        write(path, &drawing.to_json())?;
    }
    if let Some(path) = rep {
        write(path, &c.rep.to_json())?;
    }
    Ok(0)
}

fn cmd_oracle(file: &Path, cap: usize, diff: bool) -> Run {
    let rooted = build_spq_tree(&read_term(file)?)?;
    let ov = oracle_verdict(&rooted, cap)?;
    let values: Vec<String> = ov.eta_values.iter().map(ToString::to_string).collect();
    println!("rectilinear {}", ov.rectilinear);
    println!("root child spiralities {{{}}}", values.join(","));
    if !diff {
        return Ok(0);
    }
    let sets = oracle_intervals(&rooted, cap)?;
    let intervals = compute_all_intervals(&rooted.tree);
    let mismatches = compare(&rooted.tree, &intervals, &sets);
    for m in &mismatches {
        println!("mismatch {m}");
    }
    let v = test_rooted(rooted);
    if v.accepted() != ov.rectilinear {
        println!("mismatch verdict tester {} oracle {}", v.accepted(), ov.rectilinear);
        return Ok(1);
    }
    if mismatches.is_empty() {
        println!("agree");
        Ok(0)
    } else {
        Ok(1)
    }
}

fn cmd_gen(edges: usize, seed: u64, output: Option<&Path>, format: Format, params: GenParams) -> Run {
    let term = gen_random_spterm_with(edges, seed, params)?;
    let text = match format {
        Format::Spt => format!("{term}\n"),
        Format::Json => format!("{}\n", term_to_json(&term)?),
    };
    match output {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Test { file, explain } => cmd_test(&file, explain),
        Command::Intervals { file, tree, json } => cmd_intervals(&file, tree, json),
        Command::Draw { file, output, coords, rep, scale } => {
            cmd_draw(&file, &output, coords.as_deref(), rep.as_deref(), scale)
        }
        Command::Oracle { file, cap, compare } => cmd_oracle(&file, cap, compare),
        Command::Gen { edges, seed, output, format, chain, series, fanout3, min_chain } => {
            cmd_gen(edges, seed, output.as_deref(), format, GenParams { chain, series, fanout3, min_chain })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = std::thread::Builder::new()
        .stack_size(STACK)
        .spawn(move || match run(cli) {
            Ok(code) => code,
            Err(Failure(code, msg)) => {
                eprintln!("{msg}");
                code
            }
        })
        .expect("spawn worker thread")
        .join()
        .unwrap_or(2);
    ExitCode::from(code)
}
