//! Experiment configuration files.
//!
//! A TOML file may set any of the sections below; command-line flags are
//! applied on top of it. Unknown keys are rejected.
//!
//! ```toml
//! format_version = 1
//! output_dir = "runs/ws"
//!
//! [generator]
//! family = "ws"
//! n = 1000
//! k = 10
//! p = 0.01
//! seed = 7
//!
//! [generator.usw]
//! beta = 0.95
//! gamma = 0.95
//!
//! [game]
//! profile = "D-V-H"
//! shots = 100
//! turns = 10
//! repair = "auto"
//!
//! [sweep]
//! families = ["er", "pl", "ws", "usw"]
//! profiles = ["all"]
//! reps = 10
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use graphwar_core::game::GameConfig;
use graphwar_core::{AttackProfile, Family, GeneratorConfig, RepairPolicy, UswParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub format_version: u32,
    pub output_dir: Option<PathBuf>,
    pub generator: GeneratorConfig,
    pub game: GameSettings,
    pub sweep: SweepSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            format_version: FORMAT_VERSION,
            output_dir: None,
            generator: GeneratorConfig::default(),
            game: GameSettings::default(),
            sweep: SweepSettings::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Usage(msg) => CliError::Usage(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Usage(e.to_string()))?;
        if config.format_version != FORMAT_VERSION {
            return Err(CliError::Usage(format!(
                "config format_version {} is not supported (expected {FORMAT_VERSION})",
                config.format_version
            )));
        }
        Ok(config)
    }
}

/// Which repair model the repairer uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RepairChoice {
    /// USW repair for USW graphs, standard repair otherwise.
    Auto,
    None,
    Standard,
    Usw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameSettings {
    pub profile: String,
    pub shots: usize,
    pub turns: usize,
    pub seed: u64,
    pub repair: RepairChoice,
    pub reactivation_fraction: f64,
    pub attempt_success_prob: f64,
    pub fresh_links: bool,
    pub observe_root: Option<usize>,
    pub observe_pl: usize,
    pub attack: bool,
}

impl Default for GameSettings {
    fn default() -> Self {
        let game = GameConfig::default();
        let repair = RepairPolicy::standard();
        GameSettings {
            profile: game.profile.to_string(),
            shots: game.shots_per_turn,
            turns: game.max_turns,
            seed: game.seed,
            repair: RepairChoice::Auto,
            reactivation_fraction: repair.reactivation_fraction,
            attempt_success_prob: repair.attempt_success_prob,
            fresh_links: repair.fresh_links,
            observe_root: None,
            observe_pl: game.observe_pl,
            attack: game.attack_enabled,
        }
    }
}

impl GameSettings {
    /// Game rules for a graph of `family` (unknown for plain edge lists).
    pub fn to_game_config(&self, family: Option<Family>, usw: &UswParams) -> Result<GameConfig, CliError> {
        let profile: AttackProfile = self.profile.parse()?;
        let standard = RepairPolicy {
            reactivation_fraction: self.reactivation_fraction,
            attempt_success_prob: self.attempt_success_prob,
            fresh_links: self.fresh_links,
            ..RepairPolicy::standard()
        };
        let repair_policy = match self.repair {
            RepairChoice::None => RepairPolicy::none(),
            RepairChoice::Standard => standard,
            RepairChoice::Usw => RepairPolicy::usw(usw.clone()),
            RepairChoice::Auto if family == Some(Family::Usw) => RepairPolicy::usw(usw.clone()),
            RepairChoice::Auto => standard,
        };
        let config = GameConfig {
            profile,
            shots_per_turn: self.shots,
            repair_policy,
            max_turns: self.turns,
            seed: self.seed,
            observe_root: self.observe_root,
            observe_pl: self.observe_pl,
            attack_enabled: self.attack,
        };
        config.validate()?;
        Ok(config)
    }
}

/// How `match` counts shots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    /// One unlimited attacker turn without repair: shots until disconnection.
    Disconnect,
    /// Full games with the configured shots, turns and repair.
    Game,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSettings {
    pub families: Vec<Family>,
    /// Profile tokens; `"all"` expands to the eight profiles.
    pub profiles: Vec<String>,
    pub reps: usize,
    pub mode: MatchMode,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            families: Family::ALL.to_vec(),
            profiles: vec!["all".into()],
            reps: 10,
            mode: MatchMode::Disconnect,
        }
    }
}

/// Expands `all` and parses every token, keeping first occurrences in order.
pub fn parse_profiles<S: AsRef<str>>(tokens: &[S]) -> Result<Vec<AttackProfile>, CliError> {
    let mut out: Vec<AttackProfile> = Vec::new();
    for t in tokens {
        let t = t.as_ref().trim();
        let batch = if t.eq_ignore_ascii_case("all") {
            AttackProfile::ALL.to_vec()
        } else {
            vec![t.parse::<AttackProfile>()?]
        };
        for p in batch {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no attack profiles given".into()));
    }
    Ok(out)
}
