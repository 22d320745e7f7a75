use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphwar_core::{Family, GeneratorConfig, UswParams};

use crate::commands;
use crate::config::{ExperimentConfig, GameSettings, MatchMode, RepairChoice};
use crate::error::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "GRAPHWAR_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "graphwar-out";

#[derive(Debug, Parser)]
#[command(
    name = "graphwar",
    version,
    about = "Graph robustness experiments: generate, attack, repair, measure"
)]
pub struct Cli {
    /// TOML experiment config; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory [default: config output_dir, then $GRAPHWAR_OUT_DIR, then ./graphwar-out].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overwrite existing output files.
    #[arg(long, global = true)]
    pub force: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and write it with a metadata sidecar.
    Generate(GenerateArgs),
    /// One metrics row for a graph file.
    Metrics(GraphArg),
    /// Centrality scores for every vertex or edge.
    Centrality(CentralityArgs),
    /// Shoot with one profile until the graph disconnects.
    Attack(AttackArgs),
    /// Exhaustive tie-branching attack statistics per profile.
    Efficacy(EfficacyArgs),
    /// Play one attack/repair game.
    Game(GameArgs),
    /// Shots-to-disconnection over families, profiles and repetitions.
    Match(MatchArgs),
    /// Long-format damage series from a game run directory.
    Plotdata(PlotArgs),
}

#[derive(Debug, Args)]
pub struct GeneratorFlags {
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability (er) or rewiring probability (ws).
    #[arg(long)]
    pub p: Option<f64>,
    /// Lattice degree (ws).
    #[arg(long)]
    pub k: Option<usize>,
    /// Edges per new vertex (pl).
    #[arg(long)]
    pub m_attach: Option<usize>,
    #[arg(long)]
    pub max_retries: Option<usize>,
}

impl GeneratorFlags {
    pub fn apply(&self, g: &mut GeneratorConfig) {
        set(&mut g.family, self.family);
        set(&mut g.n, self.n);
        set(&mut g.p, self.p);
        set(&mut g.k, self.k);
        set(&mut g.m_attach, self.m_attach);
        set(&mut g.max_retries, self.max_retries);
    }
}

#[derive(Debug, Args)]
pub struct UswFlags {
    /// Stored with the graph, otherwise unused.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Link threshold for the local draw.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Share of failed vertices linked after a successful draw.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Share of the graph offered to each repairing vertex.
    #[arg(long)]
    pub t: Option<f64>,
    /// Vertices selected per repair turn.
    #[arg(long = "L")]
    pub l_repair: Option<usize>,
}

impl UswFlags {
    pub fn apply(&self, u: &mut UswParams) {
        if self.alpha.is_some() {
            u.alpha = self.alpha;
        }
        set(&mut u.beta, self.beta);
        set(&mut u.gamma, self.gamma);
        set(&mut u.t, self.t);
        set(&mut u.l_repair, self.l_repair);
    }
}

#[derive(Debug, Args)]
pub struct GameFlags {
    /// Attack profile token such as B-V-H.
    #[arg(long)]
    pub profile: Option<String>,
    /// Shots per attacker turn.
    #[arg(long)]
    pub shots: Option<usize>,
    /// Turn limit.
    #[arg(long)]
    pub turns: Option<usize>,
    #[arg(long, value_enum)]
    pub repair: Option<RepairChoice>,
    /// Share of removed vertices reactivated per turn (standard repair).
    #[arg(long)]
    pub reactivation_fraction: Option<f64>,
    /// Success probability of one link attempt (standard repair).
    #[arg(long)]
    pub attempt_success_prob: Option<f64>,
    /// Reactivated vertices link to random vertices instead of old neighbours.
    #[arg(long)]
    pub fresh_links: bool,
    /// Root of the tracked neighbourhood [default: highest-degree vertex].
    #[arg(long)]
    pub observe_root: Option<usize>,
    /// Radius of the tracked neighbourhood.
    #[arg(long)]
    pub observe_pl: Option<usize>,
    /// Repair-only game.
    #[arg(long)]
    pub no_attack: bool,
}

impl GameFlags {
    pub fn apply(&self, s: &mut GameSettings) {
        set(&mut s.profile, self.profile.clone());
        set(&mut s.shots, self.shots);
        set(&mut s.turns, self.turns);
        set(&mut s.repair, self.repair);
        set(&mut s.reactivation_fraction, self.reactivation_fraction);
        set(&mut s.attempt_success_prob, self.attempt_success_prob);
        if self.fresh_links {
            s.fresh_links = true;
        }
        if self.observe_root.is_some() {
            s.observe_root = self.observe_root;
        }
        set(&mut s.observe_pl, self.observe_pl);
        if self.no_attack {
            s.attack = false;
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub generator: GeneratorFlags,
    #[command(flatten)]
    pub usw: UswFlags,
    #[arg(long)]
    pub seed: Option<u64>,
    /// File name inside the output directory.
    #[arg(long, default_value = "graph.edges")]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// Edge-list file.
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Degree,
    BetweennessVertex,
    BetweennessEdge,
    Closeness,
    All,
}

#[derive(Debug, Args)]
pub struct CentralityArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub kind: KindArg,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub profile: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stop after this many shots [default: vertices + edges].
    #[arg(long)]
    pub shot_limit: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EfficacyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Comma-separated profile tokens, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub profiles: Vec<String>,
    /// Cap on distinct graph states explored per profile.
    #[arg(long, default_value_t = graphwar_core::EfficacyLimits::default().max_unique_graphs)]
    pub max_unique: usize,
    /// Cap on removal depth [default: none].
    #[arg(long)]
    pub max_depth: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub game: GameFlags,
    #[command(flatten)]
    pub usw: UswFlags,
    /// Game seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    /// Comma-separated families (er, pl, ws, usw).
    #[arg(long, value_delimiter = ',', value_parser = parse_family)]
    pub families: Option<Vec<Family>>,
    /// Comma-separated profile tokens, or `all`.
    #[arg(long, value_delimiter = ',')]
    pub profiles: Option<Vec<String>>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<MatchMode>,
    #[command(flatten)]
    pub generator: GeneratorFlags,
    #[command(flatten)]
    pub usw: UswFlags,
    #[command(flatten)]
    pub game: GameFlags,
    /// Master seed for graphs and games.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Directory written by `game`.
    #[arg(long)]
    pub run: PathBuf,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: graphwar_core::Error| e.to_string())
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// Settings shared by every command after the config file is read.
pub struct Context {
    pub config: ExperimentConfig,
    pub out: PathBuf,
    pub force: bool,
}

impl Context {
    fn new(cli: &Cli) -> Result<Self, CliError> {
        let config = match &cli.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let out = cli
            .out
            .clone()
            .or_else(|| config.output_dir.clone())
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        Ok(Context {
            config,
            out,
            force: cli.force,
        })
    }
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    let mut ctx = Context::new(&cli)?;
    match cli.command {
        Command::Generate(a) => commands::generate(&mut ctx, a),
        Command::Metrics(a) => commands::metrics(&ctx, a),
        Command::Centrality(a) => commands::centrality(&ctx, a),
        Command::Attack(a) => commands::attack(&ctx, a),
        Command::Efficacy(a) => commands::efficacy(&ctx, a),
        Command::Game(a) => commands::game(&mut ctx, a),
        Command::Match(a) => commands::run_match(&mut ctx, a),
        Command::Plotdata(a) => commands::plotdata(&ctx, a),
    }
}

/// Parses `args` and runs the command, reporting errors on stderr.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("graphwar: {e}");
            e.exit_code()
        }
    }
}
