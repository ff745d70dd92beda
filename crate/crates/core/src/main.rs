//! Command line front end. Every command is deterministic in its arguments
//! (including the seed), so repeated runs produce byte-identical output.
//!
//! Exit codes: 0 success, 1 property failure, 2 usage or parse error,
//! 3 fuel or horizon exhaustion.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use baire_graphs::clopen::{graph_from_labeling, PairVerdict};
use baire_graphs::embed::{embed_tree, EmbedError};
use baire_graphs::hierarchy::{
    e_alpha, parse_point_spec, r_alpha_decide, HierarchyError,
};
use baire_graphs::ordinal::{parse_ordinal, Ordinal};
use baire_graphs::rank::{
    initial_game_state, rank_game_play, tstar_build, Challenger, GreedyChallenger,
    RandomChallenger, TStar,
};
use baire_graphs::seqspace::{FinSeq, Nat};
use baire_graphs::universal::{AlphaTree, UniversalTree, Variant};
use baire_graphs::verify::{rng, run_suite, PropertyOutcome, SUITE_NAMES};

#[derive(Parser)]
#[command(name = "baire", about = "Clopen graph hierarchy toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Args)]
struct RunOpts {
    /// Seed for every random choice the command makes
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format; dot is available for tree-shaped results
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Run the descent procedure on a pair of points
    RalphaDecide {
        #[arg(long)]
        alpha: String,
        /// Point spec like "0,(1)*"; the repeated group is the period
        #[arg(long)]
        x: String,
        /// Code-stream spec like "(1|in)*" with (pointer|label) entries
        #[arg(long)]
        y: String,
    },
    /// Truncated rank bound for a rectangle
    Rank {
        /// "ealpha" (with --alpha) or a path to a labeled-tree JSON file
        #[arg(long, default_value = "ealpha")]
        graph: String,
        #[arg(long, default_value = "w")]
        alpha: String,
        /// Comma-separated prefix, e.g. "0,0"
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 3)]
        branch: Nat,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Play the adversary game from a starting ordinal
    Game {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        gamma: String,
        #[arg(long, value_enum, default_value_t = ChallengerKind::Greedy)]
        challenger: ChallengerKind,
        #[arg(long, default_value_t = 1000)]
        rounds: usize,
    },
    /// Build a universal tree for the given number of schedule steps
    Universal {
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Plain)]
        variant: VariantArg,
    },
    /// Embed a labeled tree into a universal tree
    Embed {
        /// Path to the source tree JSON
        #[arg(long)]
        tree: String,
        /// "fresh" or a path to a serialized universal tree
        #[arg(long, default_value = "fresh")]
        universal: String,
        #[arg(long, default_value_t = 4096)]
        horizon: usize,
    },
    /// Run a named verification suite
    Verify {
        /// One of hierarchy, rank, universal, embed, roundtrip, all
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ChallengerKind {
    Greedy,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Plain,
    TrueClopen,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Plain => Variant::Plain,
            VariantArg::TrueClopen => Variant::TrueClopen,
        }
    }
}

struct CmdError {
    code: u8,
    msg: String,
}

impl CmdError {
    fn usage(msg: impl Into<String>) -> Self {
        CmdError { code: 2, msg: msg.into() }
    }

    fn exhausted(msg: impl Into<String>) -> Self {
        CmdError { code: 3, msg: msg.into() }
    }

    fn property(msg: impl Into<String>) -> Self {
        CmdError { code: 1, msg: msg.into() }
    }
}

impl From<HierarchyError> for CmdError {
    fn from(e: HierarchyError) -> Self {
        match e {
            HierarchyError::Fuel { .. } => CmdError::exhausted(e.to_string()),
            HierarchyError::Spec { .. } | HierarchyError::NotLimit { .. } => {
                CmdError::usage(e.to_string())
            }
            _ => CmdError::property(e.to_string()),
        }
    }
}

impl From<EmbedError> for CmdError {
    fn from(e: EmbedError) -> Self {
        match &e {
            EmbedError::Universal(u)
                if matches!(u, baire_graphs::universal::UniversalError::HorizonExhausted { .. }) =>
            {
                CmdError::exhausted(e.to_string())
            }
            _ => CmdError::property(e.to_string()),
        }
    }
}

fn parse_alpha(text: &str) -> Result<Ordinal, CmdError> {
    parse_ordinal(text).map_err(|e| CmdError::usage(format!("--alpha {text:?}: {e}")))
}

fn parse_seq(text: &str) -> Result<FinSeq, CmdError> {
    text.split(',')
        .map(|p| p.trim().parse::<Nat>())
        .collect::<Result<FinSeq, _>>()
        .map_err(|e| CmdError::usage(format!("bad sequence {text:?}: {e}")))
}

fn read_tree(path: &str) -> Result<AlphaTree, CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::usage(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CmdError::usage(format!("{path}: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// DOT rendering

fn dot_node_name(s: &[Nat]) -> String {
    let mut out = String::from("n");
    for v in s {
        out.push('_');
        out.push_str(&v.to_string());
    }
    out
}

fn tree_to_dot(tree: &AlphaTree) -> String {
    let mut out = String::from("graph universal {\n  rankdir=TB;\n");
    for n in tree.nodes() {
        out.push_str(&format!("  {} [label=\"{:?}\"];\n", dot_node_name(n), n));
    }
    for n in tree.nodes() {
        if !n.is_empty() {
            out.push_str(&format!(
                "  {} -- {} [style=bold];\n",
                dot_node_name(&n[..n.len() - 1]),
                dot_node_name(n)
            ));
        }
    }
    let mut labels: Vec<_> = tree.labels().collect();
    labels.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    for (s, t, label) in labels {
        out.push_str(&format!(
            "  {} -- {} [style=dashed, label=\"{}\"];\n",
            dot_node_name(s),
            dot_node_name(t),
            label
        ));
    }
    out.push_str("}\n");
    out
}

fn tstar_to_dot(t: &TStar) -> String {
    let mut out = String::from("digraph tstar {\n");
    for (i, node) in t.nodes.iter().enumerate() {
        let tag = match node.verdict {
            PairVerdict::In => "in",
            PairVerdict::Out => "out",
            PairVerdict::Undecided => {
                if node.truncated {
                    "truncated"
                } else {
                    "open"
                }
            }
        };
        out.push_str(&format!(
            "  n{i} [label=\"{:?}|{:?} {tag}\"];\n",
            node.s, node.t
        ));
    }
    for (i, node) in t.nodes.iter().enumerate() {
        for &c in &node.children {
            out.push_str(&format!("  n{i} -> n{c};\n"));
        }
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_ralpha_decide(alpha: &str, x: &str, y: &str) -> Result<String, CmdError> {
    let alpha = parse_alpha(alpha)?;
    let xs = parse_point_spec(x).map_err(|e| CmdError::usage(format!("--x: {e}")))?;
    let ys = parse_point_spec(y).map_err(|e| CmdError::usage(format!("--y: {e}")))?;
    let xp = xs.to_point().map_err(|e| CmdError::usage(format!("--x: {e}")))?;
    let yp = ys.to_gamma_point(&alpha).map_err(|e| CmdError::usage(format!("--y: {e}")))?;
    let trace = r_alpha_decide(&alpha, &xp, &yp)?;
    #[derive(Serialize)]
    struct Out<'a> {
        alpha: String,
        verdict: &'a baire_graphs::clopen::EdgeVerdict,
        i0: usize,
        steps: &'a [baire_graphs::hierarchy::TraceStep],
    }
    Ok(to_json(&Out {
        alpha: alpha.to_string(),
        verdict: &trace.verdict,
        i0: trace.i0,
        steps: &trace.steps,
    }))
}

fn cmd_rank(
    graph: &str,
    alpha: &str,
    s: &str,
    t: &str,
    branch: Nat,
    depth: usize,
    format: Format,
) -> Result<String, CmdError> {
    let s = parse_seq(s)?;
    let t = parse_seq(t)?;
    let tstar = if graph == "ealpha" {
        let alpha = parse_alpha(alpha)?;
        let g = e_alpha(&alpha)?;
        tstar_build(&g, &s, &t, branch, depth)
    } else {
        let tree = read_tree(graph)?;
        let g = graph_from_labeling(move |a: &[Nat], b: &[Nat]| tree.label(a, b));
        tstar_build(&g, &s, &t, branch, depth)
    }
    .map_err(|e| CmdError::property(e.to_string()))?;
    if format == Format::Dot {
        return Ok(tstar_to_dot(&tstar));
    }
    #[derive(Serialize)]
    struct Out {
        rank: String,
        complete: bool,
        nodes: usize,
    }
    Ok(to_json(&Out {
        rank: baire_graphs::rank::tree_rank(&tstar).to_string(),
        complete: tstar.complete,
        nodes: tstar.nodes.len(),
    }))
}

fn cmd_game(
    alpha: &str,
    gamma: &str,
    kind: ChallengerKind,
    rounds: usize,
    seed: u64,
) -> Result<String, CmdError> {
    let alpha = parse_alpha(alpha)?;
    let gamma = parse_ordinal(gamma).map_err(|e| CmdError::usage(format!("--gamma: {e}")))?;
    let initial =
        initial_game_state(&alpha, &gamma).map_err(|e| CmdError::usage(e.to_string()))?;
    let mut challenger: Box<dyn Challenger> = match kind {
        ChallengerKind::Greedy => Box::new(GreedyChallenger),
        ChallengerKind::Random => Box::new(RandomChallenger { rng: rng(seed) }),
    };
    let transcript = rank_game_play(&alpha, initial, challenger.as_mut(), rounds)
        .map_err(|e| CmdError::property(e.to_string()))?;
    let survived = transcript.rounds.iter().filter(|r| r.prover_move.is_some()).count();
    #[derive(Serialize)]
    struct Out<'a> {
        survived_rounds: usize,
        rounds_played: usize,
        transcript: &'a baire_graphs::rank::Transcript,
    }
    Ok(to_json(&Out {
        survived_rounds: survived,
        rounds_played: transcript.rounds.len(),
        transcript: &transcript,
    }))
}

fn cmd_universal(
    alpha: &str,
    steps: usize,
    variant: VariantArg,
    format: Format,
) -> Result<String, CmdError> {
    let alpha = parse_alpha(alpha)?;
    let mut u = UniversalTree::new(alpha, variant.into())
        .map_err(|e| CmdError::usage(e.to_string()))?;
    u.build_steps(steps);
    if format == Format::Dot {
        return Ok(tree_to_dot(&u.snapshot()));
    }
    Ok(to_json(&u))
}

fn cmd_embed(tree: &str, universal: &str, horizon: usize) -> Result<String, CmdError> {
    let tree = read_tree(tree)?;
    let mut u = if universal == "fresh" {
        UniversalTree::new(tree.alpha().clone(), Variant::Plain)
            .map_err(|e| CmdError::usage(e.to_string()))?
    } else {
        let text = fs::read_to_string(universal)
            .map_err(|e| CmdError::usage(format!("cannot read {universal}: {e}")))?;
        serde_json::from_str(&text).map_err(|e| CmdError::usage(format!("{universal}: {e}")))?
    };
    let embedding = embed_tree(&tree, &mut u, horizon)?;
    #[derive(Serialize)]
    struct Out<'a> {
        embedding: &'a baire_graphs::embed::Embedding,
        universal_nodes: usize,
    }
    Ok(to_json(&Out { embedding: &embedding, universal_nodes: u.nodes().len() }))
}

fn cmd_verify(suite: &str, seed: u64) -> Result<String, CmdError> {
    if suite != "all" && !SUITE_NAMES.contains(&suite) {
        return Err(CmdError::usage(format!(
            "unknown suite {suite:?}; known: {}, all",
            SUITE_NAMES.join(", ")
        )));
    }
    let outcomes: Vec<PropertyOutcome> =
        run_suite(suite, seed).expect("suite name checked above");
    let mut out = String::new();
    let mut failed = 0;
    for o in &outcomes {
        out.push_str(&o.to_string());
        out.push('\n');
        if !o.pass {
            failed += 1;
        }
    }
    out.push_str(&format!(
        "suite {suite}: {} properties, {failed} failed (seed {seed})\n",
        outcomes.len()
    ));
    if failed > 0 {
        // the report is the error message so it still reaches the user
        return Err(CmdError { code: 1, msg: out.trim_end().to_string() });
    }
    Ok(out)
}

fn dispatch(cli: Cli) -> Result<String, CmdError> {
    let fmt = cli.run.format;
    let dot_unsupported =
        || CmdError::usage("dot output is only available for rank and universal".to_string());
    match cli.command {
        Command::RalphaDecide { alpha, x, y } => {
            if fmt == Format::Dot {
                return Err(dot_unsupported());
            }
            cmd_ralpha_decide(&alpha, &x, &y)
        }
        Command::Rank { graph, alpha, s, t, branch, depth } => {
            cmd_rank(&graph, &alpha, &s, &t, branch, depth, fmt)
        }
        Command::Game { alpha, gamma, challenger, rounds } => {
            if fmt == Format::Dot {
                return Err(dot_unsupported());
            }
            cmd_game(&alpha, &gamma, challenger, rounds, cli.run.seed)
        }
        Command::Universal { alpha, steps, variant } => {
            cmd_universal(&alpha, steps, variant, fmt)
        }
        Command::Embed { tree, universal, horizon } => {
            if fmt == Format::Dot {
                return Err(dot_unsupported());
            }
            cmd_embed(&tree, &universal, horizon)
        }
        Command::Verify { suite } => {
            if fmt == Format::Dot {
                return Err(dot_unsupported());
            }
            cmd_verify(&suite, cli.run.seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = cli.run.out.clone();
    match dispatch(cli) {
        Ok(output) => {
            if let Some(path) = out_path {
                if let Err(e) = fs::write(&path, output) {
                    eprintln!("error: cannot write {path}: {e}");
                    return ExitCode::from(1);
                }
            } else {
                print!("{output}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
