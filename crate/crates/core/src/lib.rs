//! Graph robustness under targeted attack and local repair.
//!
//! The crate builds four families of simple connected graphs (Erdős–Rényi,
//! Barabási–Albert, Watts–Strogatz and the locally grown "unsupervised small
//! world"), scores their components by degree, betweenness and closeness, and
//! plays a turn-based game between an attacker with full knowledge of the
//! graph and a repairer that only sees local state.
//!
//! Everything here is pure computation over in-memory graphs and works with
//! `alloc` only. File formats, configuration and the command line live in the
//! `graphwar` crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod attack;
pub mod centrality;
mod error;
pub mod game;
pub mod generators;
pub mod graph;
pub mod metrics;
pub mod repair;
pub mod seed;

pub use attack::{AttackProfile, ComponentKind, EfficacyLimits, EfficacyStats, Extremal, Measure};
pub use centrality::{CentralityKind, CentralityScores};
pub use error::{Error, Result};
pub use game::{GameConfig, GameLog, GameOutcome, Outcome, Winner};
pub use generators::{Family, GeneratorConfig, UswParams};
pub use graph::{ComponentRef, Graph, VertexId};
pub use metrics::MetricsSnapshot;
pub use repair::{RepairKind, RepairPolicy, RepairReport};

/// The RNG used everywhere a seed is accepted.
pub type Rng = rand_chacha::ChaCha8Rng;
