use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use graphwar_core::attack::{attack_shot, recursive_efficacy};
use graphwar_core::centrality::{betweenness_edge, betweenness_vertex, closeness, degree_centrality};
use graphwar_core::game::{play, run_rep, summarize, GameConfig, RepResult};
use graphwar_core::generators;
use graphwar_core::metrics::snapshot;
use graphwar_core::{
    AttackProfile, CentralityScores, EfficacyLimits, Family, GeneratorConfig, Graph, MetricsSnapshot, Outcome,
    RepairPolicy, UswParams, Winner,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::cli::{
    AttackArgs, CentralityArgs, Context, EfficacyArgs, GameArgs, GenerateArgs, GraphArg, KindArg, MatchArgs, PlotArgs,
};
use crate::config::{parse_profiles, MatchMode};
use crate::edgelist;
use crate::error::CliError;
use crate::output::{config_hash, file_hash, num, RunDir};

/// Metric columns shared by every snapshot row.
pub const METRIC_COLUMNS: [&str; 9] = [
    "n",
    "m",
    "aipl",
    "apl",
    "cc",
    "density",
    "damage_ratio",
    "diameter",
    "efficiency",
];

fn metric_cells(s: &MetricsSnapshot) -> [String; 9] {
    [
        s.n_alive.to_string(),
        s.m_alive.to_string(),
        num(s.avg_inverse_path_length),
        num(s.avg_path_length),
        num(s.clustering_coefficient),
        num(s.density),
        num(s.damage_ratio),
        s.diameter.to_string(),
        num(s.global_efficiency),
    ]
}

fn header(prefix: &[&'static str]) -> Vec<&'static str> {
    prefix.iter().copied().chain(METRIC_COLUMNS).collect()
}

struct Input {
    path: PathBuf,
    graph: Graph,
    sha256: String,
}

fn load(path: &Path) -> Result<Input, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::Format(format!("{}: not UTF-8", path.display())))?;
    let graph = edgelist::parse(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    Ok(Input {
        path: path.to_path_buf(),
        sha256: file_hash(text.as_bytes()),
        graph,
    })
}

pub fn generate(ctx: &mut Context, args: GenerateArgs) -> Result<(), CliError> {
    let mut cfg = ctx.config.generator.clone();
    args.generator.apply(&mut cfg);
    args.usw.apply(&mut cfg.usw);
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let hash = config_hash("generate", &cfg);
    let mut run = RunDir::create(&ctx.out, ctx.force, "generate", hash, vec![cfg.seed])?;
    let t = Instant::now();
    let g = generators::generate(&cfg)?;
    run.time("generate", t);
    let path = run.write(&args.name, edgelist::render(&g).as_bytes())?;
    let sidecar = edgelist::sidecar_path(Path::new(&args.name));
    run.write(
        &sidecar.to_string_lossy(),
        edgelist::render_sidecar(&g, &cfg).as_bytes(),
    )?;
    run.note("vertices", g.vertex_count());
    run.note("edges", g.edge_count());
    run.finish()?;
    println!("{}", path.display());
    Ok(())
}

pub fn metrics(ctx: &Context, args: GraphArg) -> Result<(), CliError> {
    let input = load(&args.graph)?;
    let hash = config_hash("metrics", &input.sha256);
    let mut run = RunDir::create(&ctx.out, ctx.force, "metrics", hash, vec![])?;
    let s = snapshot(&input.graph);
    let mut row = vec!["0".to_string(), "0".to_string()];
    row.extend(metric_cells(&s));
    let cols = header(&["turn", "shot"]);
    println!("{}\n{}", cols.join(","), row.join(","));
    run.write_csv("metrics.csv", None, &cols, [row])?;
    run.finish()?;
    Ok(())
}

pub fn centrality(ctx: &Context, args: CentralityArgs) -> Result<(), CliError> {
    let input = load(&args.graph)?;
    let hash = config_hash("centrality", &(&input.sha256, format!("{:?}", args.kind)));
    let mut run = RunDir::create(&ctx.out, ctx.force, "centrality", hash, vec![])?;
    let g = &input.graph;
    let mut all: Vec<CentralityScores> = Vec::new();
    let want = |k: KindArg| args.kind == k || args.kind == KindArg::All;
    if want(KindArg::Degree) {
        all.push(degree_centrality(g));
    }
    if want(KindArg::BetweennessVertex) {
        all.push(betweenness_vertex(g));
    }
    if want(KindArg::BetweennessEdge) {
        all.push(betweenness_edge(g));
    }
    if want(KindArg::Closeness) {
        all.push(closeness(g)?);
    }
    let rows = all.iter().flat_map(|s| {
        s.scores
            .iter()
            .map(move |(c, v)| [s.kind.as_str().to_string(), c.to_string(), num(*v)])
    });
    run.write_csv("centrality.csv", None, &["kind", "component", "score"], rows)?;
    run.finish()?;
    Ok(())
}

pub fn attack(ctx: &Context, args: AttackArgs) -> Result<(), CliError> {
    let input = load(&args.graph)?;
    let profile: AttackProfile = args.profile.parse()?;
    let mut g = input.graph;
    if !g.is_connected() {
        return Err(graphwar_core::Error::DisconnectedInput.into());
    }
    let limit = args.shot_limit.unwrap_or(g.vertex_count() + g.edge_count());
    let hash = config_hash("attack", &(&input.sha256, profile.to_string(), args.seed, limit));
    let mut run = RunDir::create(&ctx.out, ctx.force, "attack", hash, vec![args.seed])?;
    let mut rng = graphwar_core::seed::rng_from_seed(args.seed);
    let mut rows = Vec::new();
    let mut connected = true;
    while connected && rows.len() < limit && g.vertex_count() > 1 {
        let removed = attack_shot(&mut g, &profile, &mut rng)?;
        connected = g.is_connected();
        let damage = g.largest_component().len() as f64 / g.vertex_count() as f64;
        rows.push([
            (rows.len() + 1).to_string(),
            removed.to_string(),
            num(damage),
            connected.to_string(),
        ]);
    }
    let shots = rows.len();
    run.write_csv(
        "attack.csv",
        Some(args.seed),
        &["shot", "removed", "damage_ratio", "is_connected"],
        rows,
    )?;
    run.note("shots", shots);
    run.note("disconnected", !connected);
    run.finish()?;
    if connected && shots == limit {
        return Err(CliError::Truncated(format!(
            "still connected after the shot limit of {limit}"
        )));
    }
    if connected {
        eprintln!(
            "graphwar: {} reduced to a single vertex without disconnecting",
            input.path.display()
        );
    }
    Ok(())
}

pub fn efficacy(ctx: &Context, args: EfficacyArgs) -> Result<(), CliError> {
    let input = load(&args.graph)?;
    let profiles = parse_profiles(&args.profiles)?;
    if !input.graph.is_connected() {
        return Err(graphwar_core::Error::DisconnectedInput.into());
    }
    let limits = EfficacyLimits {
        max_unique_graphs: args.max_unique,
        max_depth: args.max_depth,
    };
    let tokens: Vec<String> = profiles.iter().map(|p| p.to_string()).collect();
    let hash = config_hash(
        "efficacy",
        &(&input.sha256, &tokens, limits.max_unique_graphs, limits.max_depth),
    );
    let mut run = RunDir::create(&ctx.out, ctx.force, "efficacy", hash, vec![])?;
    let t = Instant::now();
    let stats: Vec<_> = profiles
        .par_iter()
        .map(|p| recursive_efficacy(&input.graph, p, limits))
        .collect();
    run.time("efficacy", t);
    let truncated = stats.iter().filter(|s| s.truncated).count();
    let rows = profiles.iter().zip(&stats).map(|(p, s)| {
        [
            p.to_string(),
            s.unique_graphs.to_string(),
            s.paths.to_string(),
            s.max_depth.to_string(),
            s.min_depth.to_string(),
            num(s.mean_depth),
            s.stddev_depth.map(num).unwrap_or_default(),
            s.truncated.to_string(),
        ]
    });
    run.write_csv(
        "efficacy.csv",
        None,
        &[
            "profile",
            "unique_graphs",
            "paths",
            "max_depth",
            "min_depth",
            "mean_depth",
            "stddev_depth",
            "truncated",
        ],
        rows,
    )?;
    run.finish()?;
    if truncated > 0 {
        return Err(CliError::Truncated(format!(
            "{truncated} profile(s) hit the exploration limit"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct GameSettingsHashed<'a> {
    graph_sha256: &'a str,
    profile: String,
    shots_per_turn: usize,
    max_turns: usize,
    seed: u64,
    repair: &'a RepairPolicy,
    observe_root: Option<usize>,
    observe_pl: usize,
    attack_enabled: bool,
}

fn game_hash(graph_sha256: &str, c: &GameConfig) -> String {
    config_hash(
        "game",
        &GameSettingsHashed {
            graph_sha256,
            profile: c.profile.to_string(),
            shots_per_turn: c.shots_per_turn,
            max_turns: c.max_turns,
            seed: c.seed,
            repair: &c.repair_policy,
            observe_root: c.observe_root,
            observe_pl: c.observe_pl,
            attack_enabled: c.attack_enabled,
        },
    )
}

pub fn game(ctx: &mut Context, args: GameArgs) -> Result<(), CliError> {
    let input = load(&args.graph)?;
    if !input.graph.is_connected() {
        return Err(graphwar_core::Error::DisconnectedInput.into());
    }
    let sidecar = edgelist::read_sidecar(&args.graph)?;
    let mut usw: UswParams = sidecar
        .as_ref()
        .map(|s| s.generator.usw.clone())
        .unwrap_or_else(|| ctx.config.generator.usw.clone());
    args.usw.apply(&mut usw);
    let settings = &mut ctx.config.game;
    args.game.apply(settings);
    if let Some(seed) = args.seed {
        settings.seed = seed;
    }
    let config = settings.to_game_config(sidecar.as_ref().map(|s| s.family), &usw)?;

    let mut run = RunDir::create(
        &ctx.out,
        ctx.force,
        "game",
        game_hash(&input.sha256, &config),
        vec![config.seed],
    )?;
    let t = Instant::now();
    let log = play(&input.graph, &config);
    run.time("play", t);

    let seed = Some(config.seed);
    let shot_rows = log.per_shot.iter().map(|s| {
        [
            s.turn.to_string(),
            s.shot.to_string(),
            s.removed.to_string(),
            num(s.damage_ratio),
            num(s.subgraph_damage_ratio),
        ]
    });
    run.write_csv(
        "shots.csv",
        seed,
        &["turn", "shot", "removed", "damage_ratio", "subgraph_damage_ratio"],
        shot_rows,
    )?;

    let mut turn_rows = Vec::new();
    let mut fired = 0;
    for t in &log.per_turn {
        let in_turn = log.per_shot.iter().filter(|s| s.turn == t.turn).count();
        let phases = [
            ("start", Some(&t.start), fired),
            ("end_attack", Some(&t.end_attack), fired + in_turn),
            ("end_repair", t.end_repair.as_ref(), fired + in_turn),
        ];
        for (phase, snap, shot) in phases {
            if let Some(s) = snap {
                let mut row = vec![t.turn.to_string(), phase.to_string(), shot.to_string()];
                row.extend(metric_cells(s));
                turn_rows.push(row);
            }
        }
        fired += in_turn;
    }
    run.write_csv("turns.csv", seed, &header(&["turn", "phase", "shot"]), turn_rows)?;

    let repair_rows = log.per_turn.iter().filter_map(|t| {
        t.repair.map(|r| {
            [
                t.turn.to_string(),
                r.vertices_restored.to_string(),
                r.edges_attempted.to_string(),
                r.edges_restored.to_string(),
            ]
        })
    });
    run.write_csv(
        "repairs.csv",
        seed,
        &["turn", "vertices_restored", "edges_attempted", "edges_restored"],
        repair_rows,
    )?;

    let summary = log.summary();
    let outcome = match log.outcome {
        Outcome::MalloryWins { turn, shot } => format!("attacker wins at turn {turn}, shot {shot}"),
        Outcome::AliceWins => "repairer wins".to_string(),
    };
    run.note("outcome", &outcome);
    run.note("turns_played", summary.turns_played);
    run.note("shots_fired", summary.shots_fired);
    if let Some(root) = log.observe_root {
        run.note("observe_root", root);
    }
    run.finish()?;
    println!(
        "{outcome} ({} shots over {} turns)",
        summary.shots_fired, summary.turns_played
    );
    match log.aborted {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct MatchHashed<'a> {
    generator: &'a GeneratorConfig,
    families: &'a [Family],
    profiles: Vec<String>,
    reps: usize,
    mode: MatchMode,
    game: &'a crate::config::GameSettings,
}

pub fn run_match(ctx: &mut Context, args: MatchArgs) -> Result<(), CliError> {
    let cfg = &mut ctx.config;
    args.generator.apply(&mut cfg.generator);
    args.usw.apply(&mut cfg.generator.usw);
    args.game.apply(&mut cfg.game);
    if let Some(seed) = args.seed {
        cfg.generator.seed = seed;
        cfg.game.seed = seed;
    }
    if let Some(f) = args.families {
        cfg.sweep.families = f;
    }
    if let Some(p) = args.profiles {
        cfg.sweep.profiles = p;
    }
    if let Some(r) = args.reps {
        cfg.sweep.reps = r;
    }
    if let Some(m) = args.mode {
        cfg.sweep.mode = m;
    }
    let sweep = &cfg.sweep;
    if sweep.reps == 0 || sweep.families.is_empty() {
        return Err(CliError::Usage(
            "match needs at least one family and one repetition".into(),
        ));
    }
    let profiles = parse_profiles(&sweep.profiles)?;

    // One (generator, game) pair per cell.
    let mut cells: Vec<(GeneratorConfig, GameConfig)> = Vec::new();
    for &family in &sweep.families {
        let generator = GeneratorConfig {
            family,
            ..cfg.generator.clone()
        };
        generator.validate()?;
        for profile in &profiles {
            let game = match sweep.mode {
                MatchMode::Disconnect => GameConfig {
                    profile: *profile,
                    shots_per_turn: usize::MAX,
                    max_turns: 1,
                    repair_policy: RepairPolicy::none(),
                    seed: cfg.game.seed,
                    ..GameConfig::default()
                },
                MatchMode::Game => {
                    let mut s = cfg.game.clone();
                    s.profile = profile.to_string();
                    s.to_game_config(Some(family), &generator.usw)?
                }
            };
            cells.push((generator.clone(), game));
        }
    }
    let units: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..sweep.reps).map(move |r| (c, r)))
        .collect();
    eprintln!(
        "match: {} families x {} profiles x {} reps = {} games",
        sweep.families.len(),
        profiles.len(),
        sweep.reps,
        units.len()
    );

    let hash = config_hash(
        "match",
        &MatchHashed {
            generator: &cfg.generator,
            families: &sweep.families,
            profiles: profiles.iter().map(|p| p.to_string()).collect(),
            reps: sweep.reps,
            mode: sweep.mode,
            game: &cfg.game,
        },
    );
    let mut run = RunDir::create(&ctx.out, ctx.force, "match", hash, vec![cfg.generator.seed])?;
    let t = Instant::now();
    let results: Vec<Result<RepResult, graphwar_core::Error>> = units
        .par_iter()
        .map(|&(c, r)| run_rep(&cells[c].0, &cells[c].1, r))
        .collect();
    run.time("games", t);

    let mut per_cell: Vec<Vec<RepResult>> = vec![Vec::new(); cells.len()];
    for (&(c, _), res) in units.iter().zip(results) {
        per_cell[c].push(res?);
    }
    let summaries: Vec<_> = cells
        .iter()
        .zip(per_cell)
        .map(|((g, game), reps)| summarize(g.family, game.profile, reps))
        .collect();

    let seed = Some(cfg.generator.seed);
    let rows = summaries.iter().map(|s| {
        [
            s.family.to_string(),
            s.profile.to_string(),
            s.reps.len().to_string(),
            s.min_shots.to_string(),
            num(s.median_shots),
            s.max_shots.to_string(),
            s.mallory_wins.to_string(),
            s.alice_wins.to_string(),
        ]
    });
    run.write_csv(
        "match.csv",
        seed,
        &[
            "family",
            "profile",
            "reps",
            "min_shots",
            "median_shots",
            "max_shots",
            "attacker_wins",
            "repairer_wins",
        ],
        rows,
    )?;
    let rep_rows = summaries.iter().flat_map(|s| {
        s.reps.iter().map(move |r| {
            [
                s.family.to_string(),
                s.profile.to_string(),
                r.rep.to_string(),
                r.graph_seed.to_string(),
                r.game_seed.to_string(),
                r.shots.to_string(),
                match r.winner {
                    Winner::Mallory => "attacker".to_string(),
                    Winner::Alice => "repairer".to_string(),
                },
                r.turns_played.to_string(),
            ]
        })
    });
    run.write_csv(
        "match_reps.csv",
        seed,
        &[
            "family",
            "profile",
            "rep",
            "graph_seed",
            "game_seed",
            "shots",
            "winner",
            "turns_played",
        ],
        rep_rows,
    )?;
    run.finish()?;
    Ok(())
}

fn read_run_csv(
    dir: &Path,
    name: &str,
) -> Result<(Option<String>, Vec<csv::StringRecord>, csv::StringRecord), CliError> {
    let path = dir.join(name);
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let hash = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix("# config_hash: "))
        .map(str::to_owned);
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let bad = |e: csv::Error| CliError::Format(format!("{}: {e}", path.display()));
    let headers = reader.headers().map_err(bad)?.clone();
    let rows = reader.records().collect::<Result<Vec<_>, _>>().map_err(bad)?;
    Ok((hash, rows, headers))
}

fn column(headers: &csv::StringRecord, name: &str, file: &str) -> Result<usize, CliError> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::Format(format!("{file}: missing column {name}")))
}

pub fn plotdata(ctx: &Context, args: PlotArgs) -> Result<(), CliError> {
    let (hash, turns, th) = read_run_csv(&args.run, "turns.csv")?;
    let (_, shots, sh) = read_run_csv(&args.run, "shots.csv")?;
    let (t_turn, t_phase, t_damage) = (
        column(&th, "turn", "turns.csv")?,
        column(&th, "phase", "turns.csv")?,
        column(&th, "damage_ratio", "turns.csv")?,
    );
    let s_damage = column(&sh, "subgraph_damage_ratio", "shots.csv")?;

    let mut rows: Vec<[String; 3]> = Vec::new();
    for (series, phase) in [("start_damage", "start"), ("end_damage", "end_attack")] {
        for r in turns.iter().filter(|r| &r[t_phase] == phase) {
            rows.push([series.into(), r[t_turn].to_string(), r[t_damage].to_string()]);
        }
    }
    for (i, r) in shots.iter().enumerate() {
        rows.push(["subgraph_damage".into(), (i + 1).to_string(), r[s_damage].to_string()]);
    }
    // Written next to the data it was derived from.
    let mut run = RunDir::create(&args.run, ctx.force, "plotdata", config_hash("plotdata", &hash), vec![])?;
    run.write_csv("plotdata.csv", None, &["series", "x", "y"], rows)?;
    run.finish()?;
    Ok(())
}
