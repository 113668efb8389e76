use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use vdgame_core::aut;
use vdgame_core::constructions::build_reveal_gadget_with;
use vdgame_core::game::{
    self, build_game, verify_exhaustive_with, GameConfig, GameState, RoundRecord, Strategy,
    Transcript,
};
use vdgame_core::group::build_group;
use vdgame_core::Graph;

use crate::api;
use crate::limits::Limits;

#[derive(Debug, Parser)]
#[command(
    name = "vdgame",
    version,
    about = "Vertex deletion game: gadgets, game graphs and verified play"
)]
pub struct Cli {
    #[command(flatten)]
    pub limits: Limits,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a reveal gadget for a group and check its invariants
    BuildGadget(BuildGadgetArgs),
    /// Build the game graph G_0 and write an empty transcript
    BuildGame(BuildGameArgs),
    /// Replay a transcript and play further rounds
    Play(PlayArgs),
    /// Play the strategy against every challenge sequence
    VerifyExhaustive(VerifyArgs),
    /// Write a graph as Graphviz DOT
    ExportDot(ExportArgs),
    /// Print the automorphism group of a graph JSON file
    Aut(AutArgs),
    /// Run the HTTP/JSON session service
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct BuildGadgetArgs {
    /// Group spec, e.g. C3, D4, S3, C2xC2, table:path
    #[arg(long)]
    pub group: String,
    /// Write the gadget graph JSON here
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub skip_verify: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BuildGameArgs {
    /// Comma-separated specs Γ_0,Γ_1,...,Γ_k
    #[arg(long, value_delimiter = ',', required = true)]
    pub groups: Vec<String>,
    #[arg(long)]
    pub rounds: usize,
    /// Write the transcript here
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write the graph JSON of G_0 here
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
    #[arg(long)]
    pub skip_verify: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    /// Transcript to resume from
    #[arg(long)]
    pub game: PathBuf,
    /// Comma-separated challenge indices; read them from stdin when absent
    #[arg(long, value_delimiter = ',')]
    pub challenges: Option<Vec<usize>>,
    /// Record orders only, skipping the isomorphism checks
    #[arg(long)]
    pub no_verify: bool,
    /// Write the updated transcript here
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write the current graph JSON here
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub groups: Vec<String>,
    #[arg(long)]
    pub rounds: usize,
    /// Delete the y copy instead of the x copy; expected to fail
    #[arg(long)]
    pub negative_control: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ExportSource {
    /// Transcript; the graph after its last round is exported
    #[arg(long)]
    pub game: Option<PathBuf>,
    /// Graph JSON file
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub source: ExportSource,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AutArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: String,
    /// Snapshot sessions here and restore them on start
    #[arg(long)]
    pub state_dir: Option<PathBuf>,
    /// Allowed CORS origin; any origin when absent
    #[arg(long)]
    pub cors_origin: Option<String>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

/// Runs one command. `Ok(true)` iff every requested verification passed.
pub fn run(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> anyhow::Result<bool> {
    let limits = cli.limits;
    match cli.command {
        Command::BuildGadget(args) => build_gadget(&limits, args, out),
        Command::BuildGame(args) => build_game_cmd(&limits, args, out),
        Command::Play(args) => play(&limits, args, input, out),
        Command::VerifyExhaustive(args) => verify(&limits, args, out),
        Command::ExportDot(args) => export_dot(&limits, args, out),
        Command::Aut(args) => aut_cmd(&limits, args, out),
        Command::Serve(args) => {
            let app = api::AppState::new(limits, args.state_dir);
            let restored = app.restore()?;
            if restored > 0 {
                eprintln!("restored {restored} sessions");
            }
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(api::serve(&args.addr, app, args.cors_origin.as_deref()))?;
            Ok(true)
        }
    }
}

fn build_gadget(
    limits: &Limits,
    args: BuildGadgetArgs,
    out: &mut dyn Write,
) -> anyhow::Result<bool> {
    let group = build_group(&args.group, limits.max_order)?;
    let (gadget, report) =
        build_reveal_gadget_with(&group, &limits.construction_options(!args.skip_verify))?;
    if let Some(path) = &args.output {
        write(path, &gadget.graph.to_json())?;
    }
    let ok = report.as_ref().is_none_or(|r| r.all_hold());
    if args.json {
        let value = json!({
            "group": args.group,
            "vertices": gadget.graph.vertex_count(),
            "x": gadget.x,
            "y": gadget.y,
            "orbit": gadget.orbit,
            "layout": { "n": gadget.layout.n, "t": gadget.layout.t, "path_len": gadget.layout.path_len },
            "invariants": report,
            "verified": gadget.verified,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
        return Ok(ok);
    }
    writeln!(
        out,
        "gadget for {}: {} vertices, x = {}, y = {}, orbit of y has {} vertices",
        args.group,
        gadget.graph.vertex_count(),
        gadget.x,
        gadget.y,
        gadget.orbit.len()
    )?;
    match report {
        None => writeln!(out, "  verification skipped")?,
        Some(r) => {
            let l = &gadget.layout;
            writeln!(
                out,
                "  [{}] Aut(H) trivial (order {})",
                mark(r.aut_h_trivial),
                r.aut_h_order
            )?;
            writeln!(out, "  [{}] H - x connected", mark(r.h_minus_x_connected))?;
            writeln!(
                out,
                "  [{}] Aut(H - x) isomorphic to {} (order {})",
                mark(r.aut_h_minus_x_matches),
                args.group,
                r.aut_h_minus_x_order
            )?;
            writeln!(
                out,
                "  [{}] y has trivial stabilizer in H - x",
                mark(r.y_stabilizer_trivial)
            )?;
            writeln!(
                out,
                "  [{}] |V(H)| = n(t+1)+1 with n = {}, t = {}",
                mark(r.size_formula),
                l.n,
                l.path_len
            )?;
        }
    }
    Ok(ok)
}

fn build_game_cmd(
    limits: &Limits,
    args: BuildGameArgs,
    out: &mut dyn Write,
) -> anyhow::Result<bool> {
    let config = GameConfig::from_specs(&args.groups, args.rounds, limits.max_order)?;
    let state = build_game(config, limits.game_options(!args.skip_verify))?;
    if let Some(path) = &args.output {
        write(path, &state.transcript().to_json())?;
    }
    if let Some(path) = &args.graph_out {
        write(path, &state.graph().to_json())?;
    }
    let check = state.initial_verification();
    let ok = check.is_none_or(|c| c.verified);
    if args.json {
        let value = json!({
            "groups": args.groups,
            "rounds": args.rounds,
            "distinct_challenges": state.config().distinct_count(),
            "vertices": state.graph().vertex_count(),
            "g0_hash": state.initial_hash(),
            "aut": { "order": check.map(|c| c.aut_order), "verified": check.map(|c| c.verified) },
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
        return Ok(ok);
    }
    writeln!(
        out,
        "G_0: {} vertices, {} edges, {} distinct challenge groups, {} rounds",
        state.graph().vertex_count(),
        state.graph().edge_count(),
        state.config().distinct_count(),
        args.rounds
    )?;
    match check {
        Some(c) => writeln!(
            out,
            "  [{}] Aut(G_0) has order {} and is isomorphic to {}",
            mark(c.verified),
            c.aut_order,
            c.expected
        )?,
        None => writeln!(out, "  verification skipped")?,
    }
    Ok(ok)
}

fn load_game(limits: &Limits, path: &Path, verify: bool) -> anyhow::Result<GameState> {
    let transcript = Transcript::from_json(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    Ok(game::replay(
        &transcript,
        limits.max_order,
        limits.game_options(verify),
    )?)
}

fn describe(state: &GameState, r: &RoundRecord) -> String {
    let name = state.config().group_names()[r.challenge].clone();
    let verdict = match (r.verified, r.partial) {
        (Some(true), false) => "isomorphic",
        (Some(true), true) => "orders match (partial)",
        (Some(false), _) => "NOT isomorphic",
        (None, _) => "unverified",
    };
    let order = r.aut_order.map_or("?".to_owned(), |o| o.to_string());
    format!(
        "round {}: challenge {} ({name}) -> deleted vertex {}, |Aut(G_{})| = {order}, {verdict}",
        r.round, r.challenge, r.deleted_vertex, r.round
    )
}

fn play(
    limits: &Limits,
    args: PlayArgs,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> anyhow::Result<bool> {
    let mut state = load_game(limits, &args.game, !args.no_verify)?;
    let replayed = state.history().len();
    let mut played: Vec<RoundRecord> = Vec::new();
    match &args.challenges {
        Some(list) => {
            for &c in list {
                let record = state.play(c)?;
                if !args.json {
                    writeln!(out, "{}", describe(&state, &record))?;
                }
                played.push(record);
            }
        }
        None => {
            let k = state.config().challenge_count();
            let mut lines = input.lines();
            while !state.is_finished() {
                if !args.json {
                    write!(
                        out,
                        "round {}/{}, challenge 1..={k}> ",
                        state.round() + 1,
                        state.config().rounds()
                    )?;
                    out.flush()?;
                }
                let Some(line) = lines.next() else { break };
                let line = line?;
                let line = line.trim();
                if line.is_empty() || line == "q" || line == "quit" {
                    break;
                }
                let Ok(c) = line.parse::<usize>() else {
                    eprintln!("not a number: {line}");
                    continue;
                };
                match state.play(c) {
                    Ok(record) => {
                        if !args.json {
                            writeln!(out, "{}", describe(&state, &record))?;
                        }
                        played.push(record);
                    }
                    Err(e @ game::GameError::BadIndex { .. }) => eprintln!("{e}"),
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    if let Some(path) = &args.output {
        write(path, &state.transcript().to_json())?;
    }
    if let Some(path) = &args.graph_out {
        write(path, &state.graph().to_json())?;
    }
    let ok = state.history().iter().all(|r| r.verified != Some(false));
    if args.json {
        let value =
            json!({ "replayed": replayed, "played": played, "transcript": state.transcript() });
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
    } else if state.is_finished() {
        writeln!(out, "game finished after {} rounds", state.round())?;
    }
    Ok(ok)
}

fn verify(limits: &Limits, args: VerifyArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    let config = GameConfig::from_specs(&args.groups, args.rounds, limits.max_order)?;
    let names = config.group_names();
    let strategy = if args.negative_control {
        Strategy::DeleteYCopy
    } else {
        Strategy::RevealX
    };
    let report = verify_exhaustive_with(config, limits.game_options(true), strategy)?;
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        return Ok(report.passed);
    }
    writeln!(
        out,
        "G_0: {} vertices, |Aut(G_0)| = {}",
        report.g0_vertices,
        report.g0_aut_order.map_or("?".into(), |o| o.to_string())
    )?;
    for s in &report.sequences {
        let rounds: Vec<String> = s
            .rounds
            .iter()
            .map(|r| {
                format!(
                    "{}:{}",
                    names[r.challenge],
                    r.aut_order.map_or("?".into(), |o| o.to_string())
                )
            })
            .collect();
        writeln!(
            out,
            "  [{}] {:?} -> {}",
            mark(s.passed),
            s.challenges,
            rounds.join(" ")
        )?;
    }
    let passed = report.sequences.iter().filter(|s| s.passed).count();
    writeln!(
        out,
        "{passed} of {} sequences passed",
        report.sequences.len()
    )?;
    Ok(report.passed)
}

fn export_dot(limits: &Limits, args: ExportArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    let graph = match (&args.source.game, &args.source.graph) {
        (Some(path), _) => load_game(limits, path, false)?.graph().clone(),
        (None, Some(path)) => Graph::from_json(&read(path)?)?,
        (None, None) => bail!("give --game or --graph"),
    };
    match &args.output {
        Some(path) => write(path, &graph.to_dot())?,
        None => write!(out, "{}", graph.to_dot())?,
    }
    Ok(true)
}

fn aut_cmd(limits: &Limits, args: AutArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    let graph = Graph::from_json(&read(&args.graph)?)?;
    let opts = limits.construction_options(true).aut;
    let group = aut::automorphisms_with(&graph, &opts)?;
    if args.json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&group.to_json_value())?
        )?;
    } else {
        writeln!(
            out,
            "|Aut| = {} with {} generators",
            group.order(),
            group.generators().len()
        )?;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[test]
    fn parses_lists_and_global_limits() {
        let cli = Cli::try_parse_from([
            "vdgame",
            "verify-exhaustive",
            "--groups",
            "C2,C3,C2xC2",
            "--rounds",
            "2",
            "--max-order",
            "24",
        ])
        .unwrap();
        assert_eq!(cli.limits.max_order, 24);
        let Command::VerifyExhaustive(args) = cli.command else {
            panic!("wrong command")
        };
        assert_eq!(args.groups, ["C2", "C3", "C2xC2"]);
    }

    #[test]
    fn export_needs_exactly_one_source() {
        assert!(Cli::try_parse_from(["vdgame", "export-dot"]).is_err());
        assert!(
            Cli::try_parse_from(["vdgame", "export-dot", "--game", "a", "--graph", "b"]).is_err()
        );
    }

    #[test]
    fn batch_play_in_process() {
        let dir = std::env::temp_dir().join(format!("vdgame-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let game = dir.join("game.json");
        let mut out = Vec::new();
        let cli = Cli::try_parse_from([
            "vdgame",
            "build-game",
            "--groups",
            "C2,C3",
            "--rounds",
            "1",
            "-o",
            game.to_str().unwrap(),
        ]);
        assert!(run(cli.unwrap(), &mut std::io::empty(), &mut out).unwrap());
        let cli = Cli::try_parse_from([
            "vdgame",
            "play",
            "--game",
            game.to_str().unwrap(),
            "--challenges",
            "1",
        ])
        .unwrap();
        out.clear();
        assert!(run(cli, &mut std::io::empty(), &mut out).unwrap());
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("|Aut(G_1)| = 3, isomorphic"), "{text}");
        std::fs::remove_dir_all(dir).unwrap();
    }
}
