//! The attack/repair game.
//!
//! Turns alternate, attacker first. The attacker fires up to
//! `shots_per_turn` shots with one fixed profile and stops early if the graph
//! disconnects. The game ends when the graph is disconnected at the end of an
//! attacker turn (attacker wins) or after `max_turns` turns (repairer wins).
//! The repairer does not move after the final attacker turn.

use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use crate::attack::{attack_shot, AttackProfile};
use crate::error::{Error, Result};
use crate::generators::{generate, Family, GeneratorConfig, UswParams};
use crate::graph::{ComponentRef, Graph, VertexId};
use crate::metrics::{snapshot, MetricsSnapshot};
use crate::repair::{repair_turn, RepairKind, RepairPolicy, RepairReport};
use crate::seed::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    pub profile: AttackProfile,
    pub shots_per_turn: usize,
    pub repair_policy: RepairPolicy,
    pub max_turns: usize,
    pub seed: u64,
    /// Root of the observed neighbourhood; defaults to the highest-degree vertex.
    pub observe_root: Option<VertexId>,
    pub observe_pl: usize,
    /// With the attacker disabled every turn is repair only.
    pub attack_enabled: bool,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            profile: "B-V-H".parse().expect("valid token"),
            shots_per_turn: 100,
            repair_policy: RepairPolicy::standard(),
            max_turns: 10,
            seed: 0,
            observe_root: None,
            observe_pl: 2,
            attack_enabled: true,
        }
    }
}

impl GameConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shots_per_turn == 0 {
            return Err(Error::InvalidConfig("shots_per_turn must be at least 1".into()));
        }
        if self.max_turns == 0 {
            return Err(Error::InvalidConfig("max_turns must be at least 1".into()));
        }
        self.repair_policy.validate()
    }

    /// FNV-1a hash of the attack profile and repair policy, the two things
    /// that may not change during a game.
    pub fn rules_fingerprint(&self) -> u64 {
        let mut h = Fnv1a::new();
        let _ = write!(h, "{}|{:?}", self.profile, self.repair_policy);
        h.finish()
    }
}

struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Fnv1a(0xcbf2_9ce4_8422_2325)
    }
    fn finish(&self) -> u64 {
        self.0
    }
}

impl fmt::Write for Fnv1a {
    fn write_str(&mut self, s: &str) -> fmt::Result {
        for b in s.bytes() {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotRecord {
    pub turn: usize,
    /// 1-based within the turn.
    pub shot: usize,
    pub removed: ComponentRef,
    pub damage_ratio: f64,
    pub subgraph_damage_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TurnRecord {
    pub turn: usize,
    pub start: MetricsSnapshot,
    pub end_attack: MetricsSnapshot,
    /// Absent when the game ended on this turn.
    pub end_repair: Option<MetricsSnapshot>,
    pub repair: Option<RepairReport>,
    pub rules_fingerprint: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Mallory,
    Alice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    MalloryWins { turn: usize, shot: usize },
    AliceWins,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameOutcome {
    pub winner: Winner,
    pub turns_played: usize,
    pub shots_fired: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameLog {
    pub per_shot: Vec<ShotRecord>,
    pub per_turn: Vec<TurnRecord>,
    pub outcome: Outcome,
    pub observe_root: Option<VertexId>,
    /// Set when a module error stopped the game; the log is partial.
    pub aborted: Option<Error>,
}

impl GameLog {
    pub fn summary(&self) -> GameOutcome {
        GameOutcome {
            winner: match self.outcome {
                Outcome::MalloryWins { .. } => Winner::Mallory,
                Outcome::AliceWins => Winner::Alice,
            },
            turns_played: self.per_turn.len(),
            shots_fired: self.per_shot.len(),
        }
    }
}

/// Tracks how much of the radius-`pl` ball around a root survives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedObserver {
    pub root: VertexId,
    pub pl: usize,
    pub initial_size: usize,
}

impl InducedObserver {
    pub fn new(g: &Graph, root: VertexId, pl: usize) -> Result<Self> {
        Ok(InducedObserver {
            root,
            pl,
            initial_size: g.ball_size(root, pl)?,
        })
    }

    /// Current ball size over the initial one, capped at 1; 0 once the root is gone.
    pub fn damage(&self, g: &Graph) -> f64 {
        match g.ball_size(self.root, self.pl) {
            Ok(size) => (size as f64 / self.initial_size as f64).min(1.0),
            Err(_) => 0.0,
        }
    }
}

/// Appends the post-shot damage of the whole graph and of the observed ball.
pub fn record_shot(
    log: &mut GameLog,
    g: &Graph,
    removed: ComponentRef,
    turn: usize,
    shot: usize,
    observer: Option<&InducedObserver>,
) {
    let damage_ratio = if g.vertex_count() == 0 {
        0.0
    } else {
        g.largest_component().len() as f64 / g.vertex_count() as f64
    };
    log.per_shot.push(ShotRecord {
        turn,
        shot,
        removed,
        damage_ratio,
        subgraph_damage_ratio: observer.map_or(0.0, |o| o.damage(g)),
    });
}

fn highest_degree_vertex(g: &Graph) -> Option<VertexId> {
    g.vertices().fold(None, |best, v| match best {
        Some(b) if g.degree(b) >= g.degree(v) => Some(b),
        _ => Some(v),
    })
}

/// Plays on a copy of `graph`.
pub fn play(graph: &Graph, config: &GameConfig) -> GameLog {
    let mut g = graph.clone();
    play_in_place(&mut g, config)
}

/// Plays on `g`, leaving it in its final state.
pub fn play_in_place(g: &mut Graph, config: &GameConfig) -> GameLog {
    let mut log = GameLog {
        per_shot: Vec::new(),
        per_turn: Vec::new(),
        outcome: Outcome::AliceWins,
        observe_root: None,
        aborted: None,
    };
    if let Err(e) = config.validate() {
        log.aborted = Some(e);
        return log;
    }
    let root = config.observe_root.or_else(|| highest_degree_vertex(g));
    let observer = match root.map(|r| InducedObserver::new(g, r, config.observe_pl)).transpose() {
        Ok(o) => o,
        Err(e) => {
            log.aborted = Some(e);
            return log;
        }
    };
    log.observe_root = root;

    let fingerprint = config.rules_fingerprint();
    let mut attacker_rng = rng_from_seed(derive_seed(config.seed, 0));
    let mut repair_rng = rng_from_seed(derive_seed(config.seed, 1));

    for turn in 1..=config.max_turns {
        let start = snapshot(g);
        let mut shot = 0;
        if config.attack_enabled {
            // A repair can leave a reactivated vertex without links; the
            // attacker then has nothing to do before the end-of-turn check.
            while shot < config.shots_per_turn && g.vertex_count() > 1 && g.is_connected() {
                let removed = match attack_shot(g, &config.profile, &mut attacker_rng) {
                    Ok(c) => c,
                    Err(e) => {
                        log.aborted = Some(e);
                        return log;
                    }
                };
                shot += 1;
                record_shot(&mut log, g, removed, turn, shot, observer.as_ref());
                if !g.is_connected() {
                    break;
                }
            }
        }
        let end_attack = snapshot(g);
        let mut record = TurnRecord {
            turn,
            start,
            end_attack,
            end_repair: None,
            repair: None,
            rules_fingerprint: fingerprint,
        };
        if !g.is_connected() {
            log.outcome = Outcome::MalloryWins { turn, shot };
            log.per_turn.push(record);
            break;
        }
        if turn < config.max_turns {
            match repair_turn(g, &config.repair_policy, &mut repair_rng) {
                Ok(r) => {
                    record.repair = Some(r);
                    record.end_repair = Some(snapshot(g));
                }
                Err(e) => {
                    log.per_turn.push(record);
                    log.aborted = Some(e);
                    return log;
                }
            }
        }
        log.per_turn.push(record);
    }
    log
}

/// Repair policy matching a family: USW graphs rebuild with their
/// construction parameters, the others use the standard model.
pub fn repair_policy_for(family: Family, usw: &UswParams) -> RepairPolicy {
    match family {
        Family::Usw => RepairPolicy::usw(usw.clone()),
        _ => RepairPolicy::standard(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepResult {
    pub rep: usize,
    pub graph_seed: u64,
    pub game_seed: u64,
    /// Shots fired before the game ended; equals shots-to-disconnection when the attacker won.
    pub shots: usize,
    pub winner: Winner,
    pub turns_played: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchSummary {
    pub family: Family,
    pub profile: AttackProfile,
    /// Sorted by `rep`.
    pub reps: Vec<RepResult>,
    pub min_shots: usize,
    pub median_shots: f64,
    pub max_shots: usize,
    pub mallory_wins: usize,
    pub alice_wins: usize,
}

/// Game seeds are split from the upper half of the index space so a shared
/// master seed never hands the game the generator's stream.
const GAME_STREAM: u64 = 1 << 63;

/// One independent repetition: graph seed and game seed are both derived from `rep`.
pub fn run_rep(generator: &GeneratorConfig, game: &GameConfig, rep: usize) -> Result<RepResult> {
    let graph_seed = derive_seed(generator.seed, rep as u64);
    let game_seed = derive_seed(game.seed, rep as u64 | GAME_STREAM);
    let g = generate(&GeneratorConfig {
        seed: graph_seed,
        ..generator.clone()
    })?;
    let mut config = GameConfig {
        seed: game_seed,
        ..game.clone()
    };
    if config.repair_policy.kind == RepairKind::Usw && config.repair_policy.usw.is_none() {
        config.repair_policy.usw = Some(generator.usw.clone());
    }
    let log = play(&g, &config);
    if let Some(e) = log.aborted {
        return Err(e);
    }
    let s = log.summary();
    Ok(RepResult {
        rep,
        graph_seed,
        game_seed,
        shots: s.shots_fired,
        winner: s.winner,
        turns_played: s.turns_played,
    })
}

/// Order-independent reduction of repetition results.
pub fn summarize(family: Family, profile: AttackProfile, mut reps: Vec<RepResult>) -> MatchSummary {
    reps.sort_by_key(|r| r.rep);
    let mut shots: Vec<usize> = reps.iter().map(|r| r.shots).collect();
    shots.sort_unstable();
    let median = match shots.len() {
        0 => 0.0,
        n if n % 2 == 1 => shots[n / 2] as f64,
        n => (shots[n / 2 - 1] + shots[n / 2]) as f64 / 2.0,
    };
    let mallory_wins = reps.iter().filter(|r| r.winner == Winner::Mallory).count();
    MatchSummary {
        family,
        profile,
        min_shots: shots.first().copied().unwrap_or(0),
        median_shots: median,
        max_shots: shots.last().copied().unwrap_or(0),
        mallory_wins,
        alice_wins: reps.len() - mallory_wins,
        reps,
    }
}

/// Runs `repetitions` seeded games sequentially and summarises shots fired.
pub fn run_match(generator: &GeneratorConfig, game: &GameConfig, repetitions: usize) -> Result<MatchSummary> {
    let reps = (0..repetitions)
        .map(|rep| run_rep(generator, game, rep))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(generator.family, game.profile, reps))
}
