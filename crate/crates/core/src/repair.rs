//! The repairer. Two models:
//!
//! * **Standard** (random, power-law, small-world graphs): a fraction of the
//!   removed vertices is reactivated each turn and each tries to re-form its
//!   original links, every attempt succeeding independently with a fixed
//!   probability.
//! * **USW**: a fixed number of surviving vertices rerun the attachment walk
//!   used at construction, each against its own random sample of the graph.
//!   No vertex is brought back.
//!
//! The repairer never looks at centrality. Traced variants record every
//! vertex a repair decision read so [`locality_audit`] can check that.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::generators::{attach_walk, check_probability, visit_limit, UswParams, WalkScratch};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum RepairKind {
    None,
    Standard,
    Usw,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct RepairPolicy {
    pub kind: RepairKind,
    /// Share of the removal ledger reactivated per turn, rounded up.
    pub reactivation_fraction: f64,
    /// Probability that one link attempt of a reactivated vertex succeeds.
    pub attempt_success_prob: f64,
    /// Reactivated vertices link to random alive vertices instead of their
    /// original neighbours. Off by default.
    pub fresh_links: bool,
    /// Construction parameters; required for [`RepairKind::Usw`].
    pub usw: Option<UswParams>,
}

impl Default for RepairPolicy {
    fn default() -> Self {
        RepairPolicy {
            kind: RepairKind::Standard,
            reactivation_fraction: 0.10,
            attempt_success_prob: 0.90,
            fresh_links: false,
            usw: None,
        }
    }
}

impl RepairPolicy {
    pub fn none() -> Self {
        RepairPolicy {
            kind: RepairKind::None,
            ..Default::default()
        }
    }

    pub fn standard() -> Self {
        RepairPolicy::default()
    }

    pub fn usw(params: UswParams) -> Self {
        RepairPolicy {
            kind: RepairKind::Usw,
            usw: Some(params),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("reactivation_fraction", self.reactivation_fraction)?;
        check_probability("attempt_success_prob", self.attempt_success_prob)?;
        if let Some(p) = &self.usw {
            p.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RepairReport {
    pub vertices_restored: usize,
    /// Link attempts (standard) or threshold tests (USW).
    pub edges_attempted: usize,
    pub edges_restored: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    /// The set of vertices the following reads are allowed to touch.
    Scope(Vec<VertexId>),
    /// A decision read this vertex's state.
    Read(VertexId),
    /// A decision consulted a centrality score.
    Centrality,
}

#[derive(Debug, Clone, Default)]
pub struct RepairTrace {
    pub events: Vec<TraceEvent>,
    enabled: bool,
}

impl RepairTrace {
    pub fn recording() -> Self {
        RepairTrace {
            events: Vec::new(),
            enabled: true,
        }
    }

    fn disabled() -> Self {
        RepairTrace::default()
    }

    pub fn push(&mut self, e: TraceEvent) {
        if self.enabled {
            self.events.push(e);
        }
    }
}

/// True iff every read stayed inside the scope declared before it and no
/// centrality was consulted.
pub fn locality_audit(trace: &RepairTrace) -> bool {
    let mut scope = BTreeSet::new();
    for e in &trace.events {
        match e {
            TraceEvent::Scope(vs) => scope = vs.iter().copied().collect(),
            TraceEvent::Read(v) => {
                if !scope.contains(v) {
                    return false;
                }
            }
            TraceEvent::Centrality => return false,
        }
    }
    true
}

/// `ceil(fraction * count)`, ignoring float noise just above an integer.
fn ceil_share(fraction: f64, count: usize) -> usize {
    let x = fraction * count as f64;
    (libm::ceil(x - 1e-9).max(0.0) as usize).min(count)
}

/// Dispatches on `policy.kind`.
pub fn repair_turn<R: rand::Rng + ?Sized>(g: &mut Graph, policy: &RepairPolicy, rng: &mut R) -> Result<RepairReport> {
    match policy.kind {
        RepairKind::None => Ok(RepairReport::default()),
        RepairKind::Standard => Ok(repair_turn_standard(g, policy, rng)),
        RepairKind::Usw => repair_turn_usw(g, policy, rng),
    }
}

pub fn repair_turn_standard<R: rand::Rng + ?Sized>(g: &mut Graph, policy: &RepairPolicy, rng: &mut R) -> RepairReport {
    repair_turn_standard_traced(g, policy, rng, &mut RepairTrace::disabled())
}

pub fn repair_turn_standard_traced<R: rand::Rng + ?Sized>(
    g: &mut Graph,
    policy: &RepairPolicy,
    rng: &mut R,
    trace: &mut RepairTrace,
) -> RepairReport {
    let mut report = RepairReport::default();
    let ledger: Vec<VertexId> = g.removed_vertices().keys().copied().collect();
    if ledger.is_empty() {
        return report;
    }
    if trace.enabled {
        let mut scope: BTreeSet<VertexId> = ledger.iter().copied().collect();
        for nbrs in g.removed_vertices().values() {
            scope.extend(nbrs.iter().copied());
        }
        trace.push(TraceEvent::Scope(scope.into_iter().collect()));
    }

    let count = ceil_share(policy.reactivation_fraction, ledger.len());
    let chosen: Vec<VertexId> = ledger.choose_multiple(rng, count).copied().collect();
    for v in chosen {
        trace.push(TraceEvent::Read(v));
        let original = g.restore_vertex(v).expect("taken from the ledger");
        report.vertices_restored += 1;
        let targets = if policy.fresh_links {
            let alive: Vec<VertexId> = g.vertices().filter(|&w| w != v).collect();
            (0..original.len()).filter_map(|_| alive.choose(rng).copied()).collect()
        } else {
            original
        };
        for w in targets {
            trace.push(TraceEvent::Read(w));
            report.edges_attempted += 1;
            if rng.gen_bool(policy.attempt_success_prob) && g.add_edge(v, w).expect("both alive") {
                report.edges_restored += 1;
            }
        }
    }
    report
}

pub fn repair_turn_usw<R: rand::Rng + ?Sized>(
    g: &mut Graph,
    policy: &RepairPolicy,
    rng: &mut R,
) -> Result<RepairReport> {
    repair_turn_usw_traced(g, policy, rng, &mut RepairTrace::disabled())
}

pub fn repair_turn_usw_traced<R: rand::Rng + ?Sized>(
    g: &mut Graph,
    policy: &RepairPolicy,
    rng: &mut R,
    trace: &mut RepairTrace,
) -> Result<RepairReport> {
    let params = policy.usw.as_ref().ok_or(Error::MissingUswParams)?;
    let mut report = RepairReport::default();
    let alive: Vec<VertexId> = g.vertices().collect();
    let count = params.l_repair.min(alive.len());
    if count == 0 {
        return Ok(report);
    }
    let selected: Vec<VertexId> = alive.choose_multiple(rng, count).copied().collect();
    let limit = visit_limit(alive.len());
    let mut in_pool = vec![false; g.capacity()];
    let mut scratch = WalkScratch::new();
    for v in selected {
        let others: Vec<VertexId> = alive.iter().copied().filter(|&w| w != v).collect();
        let size = ceil_share(params.t, others.len());
        if size == 0 {
            continue;
        }
        let pool: Vec<VertexId> = others.choose_multiple(rng, size).copied().collect();
        for &w in &pool {
            in_pool[w] = true;
        }
        if trace.enabled {
            let mut scope = pool.clone();
            scope.push(v);
            trace.push(TraceEvent::Scope(scope));
        }
        trace.push(TraceEvent::Read(v));
        let entry = pool[rng.gen_range(0..pool.len())];
        let outcome = attach_walk(
            g,
            v,
            entry,
            params,
            limit,
            |w| in_pool[w],
            &mut scratch,
            rng,
            |u| trace.push(TraceEvent::Read(u)),
        );
        report.edges_attempted += outcome.tests;
        report.edges_restored += outcome.created;
        for &w in &pool {
            in_pool[w] = false;
        }
    }
    Ok(report)
}
