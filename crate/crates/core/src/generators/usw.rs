//! Unsupervised small-world growth.
//!
//! Vertices join one at a time. A newcomer enters at a random existing
//! vertex and walks outward breadth-first, knowing only the neighbour lists of
//! vertices it has visited. At each visited vertex it draws `r` in `[0, 1)`:
//! if `r > beta` it links to that vertex and then to a `gamma` fraction of the
//! vertices that failed the test earlier in the same walk. The walk stops after
//! `ceil(sqrt(n)) + 5` visits, `n` being the size of the graph joined, or when
//! the queue runs dry. A walk that produced
//! no edge is repeated from a fresh entry point.
//!
//! Repair reuses [`attach_walk`] with the walk confined to a candidate pool.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::check_probability;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// How a newcomer picks its first vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
#[non_exhaustive]
pub enum AttachmentPolicy {
    #[default]
    UniformRandom,
}

/// Order in which queued vertices are tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
#[non_exhaustive]
pub enum VisitationPolicy {
    #[default]
    QueueOrder,
}

/// Discipline of the candidate queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
#[non_exhaustive]
pub enum QueuePolicy {
    #[default]
    Fifo,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct UswParams {
    /// Stored and passed through, never read by construction or repair.
    pub alpha: Option<f64>,
    /// A link is made when the local draw exceeds this threshold.
    pub beta: f64,
    /// Fraction of the walk's failed vertices linked once the threshold passes.
    pub gamma: f64,
    /// Fraction of the alive graph offered to each repairing vertex.
    pub t: f64,
    /// Vertices selected per repair turn.
    pub l_repair: usize,
    pub attachment_policy: AttachmentPolicy,
    pub visitation_policy: VisitationPolicy,
    pub queue_policy: QueuePolicy,
}

impl Default for UswParams {
    fn default() -> Self {
        UswParams {
            alpha: None,
            beta: 0.95,
            gamma: 0.95,
            t: 0.10,
            l_repair: 100,
            attachment_policy: AttachmentPolicy::UniformRandom,
            visitation_policy: VisitationPolicy::QueueOrder,
            queue_policy: QueuePolicy::Fifo,
        }
    }
}

impl UswParams {
    pub fn validate(&self) -> Result<()> {
        check_probability("beta", self.beta)?;
        check_probability("gamma", self.gamma)?;
        check_probability("t", self.t)
    }
}

/// Walks that may come back empty before the newcomer is linked to its last
/// entry point outright.
const MAX_WALKS: usize = 64;

/// `ceil(sqrt(n)) + 5`.
pub(crate) fn visit_limit(n: usize) -> usize {
    let mut r = libm::sqrt(n as f64) as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r + 5
}

/// Reusable per-walk marks, stamped by epoch so they need no clearing.
pub(crate) struct WalkScratch {
    mark: Vec<u32>,
    epoch: u32,
    queue: VecDeque<VertexId>,
    failed: Vec<VertexId>,
}

impl WalkScratch {
    pub(crate) fn new() -> Self {
        WalkScratch {
            mark: Vec::new(),
            epoch: 0,
            queue: VecDeque::new(),
            failed: Vec::new(),
        }
    }

    fn reset(&mut self, capacity: usize) {
        if self.mark.len() < capacity {
            self.mark.resize(capacity, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.fill(0);
            self.epoch = 1;
        }
        self.queue.clear();
        self.failed.clear();
    }

    fn seen(&mut self, v: VertexId) -> bool {
        let fresh = self.mark[v] != self.epoch;
        self.mark[v] = self.epoch;
        !fresh
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct WalkOutcome {
    /// Threshold draws made.
    pub tests: usize,
    pub created: usize,
}

/// One attachment walk for `v` starting at `entry`. Only vertices accepted by
/// `allowed` are queued. Every vertex whose neighbour list the walk reads is
/// passed to `touch`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn attach_walk<R, A, T>(
    g: &mut Graph,
    v: VertexId,
    entry: VertexId,
    params: &UswParams,
    limit: usize,
    allowed: A,
    scratch: &mut WalkScratch,
    rng: &mut R,
    mut touch: T,
) -> WalkOutcome
where
    R: rand::Rng + ?Sized,
    A: Fn(VertexId) -> bool,
    T: FnMut(VertexId),
{
    scratch.reset(g.capacity());
    scratch.seen(v);
    scratch.seen(entry);
    scratch.queue.push_back(entry);
    let mut out = WalkOutcome::default();
    let mut visits = 0;
    while visits < limit {
        let Some(u) = scratch.queue.pop_front() else {
            break;
        };
        visits += 1;
        touch(u);
        for &w in g.neighbors(u) {
            if allowed(w) && !scratch.seen(w) {
                scratch.queue.push_back(w);
            }
        }
        if g.has_edge(v, u) {
            continue;
        }
        out.tests += 1;
        let r: f64 = rng.gen();
        if r > params.beta {
            g.add_edge(v, u).expect("alive, distinct, absent");
            out.created += 1;
            let take = ((params.gamma * scratch.failed.len() as f64) + 0.5) as usize;
            let take = take.min(scratch.failed.len());
            let keep = scratch.failed.len() - take;
            scratch.failed.partial_shuffle(rng, take);
            for &w in &scratch.failed[keep..] {
                if g.add_edge(v, w).expect("alive, distinct") {
                    out.created += 1;
                }
            }
            scratch.failed.truncate(keep);
        } else {
            scratch.failed.push(u);
        }
    }
    out
}

/// Grows an unsupervised small world on `n` vertices. Always connected.
pub fn generate_usw<R: rand::Rng + ?Sized>(n: usize, params: &UswParams, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidConfig(alloc::format!("n must be at least 2, got {n}")));
    }
    params.validate()?;
    let mut g = Graph::with_vertices(1);
    let mut scratch = WalkScratch::new();
    for _ in 1..n {
        // The walk is bounded by the size of the graph the newcomer joins.
        let limit = visit_limit(g.vertex_count());
        let v = g.add_vertex();
        let mut entry = 0;
        for _ in 0..MAX_WALKS {
            entry = match params.attachment_policy {
                AttachmentPolicy::UniformRandom => rng.gen_range(0..v),
            };
            attach_walk(&mut g, v, entry, params, limit, |_| true, &mut scratch, rng, |_| {});
            if g.degree(v) > 0 {
                break;
            }
        }
        if g.degree(v) == 0 {
            g.add_edge(v, entry).expect("alive, distinct");
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn limit_is_ceil_sqrt_plus_five() {
        assert_eq!(visit_limit(1000), 32 + 5);
        assert_eq!(visit_limit(1024), 32 + 5);
        assert_eq!(visit_limit(1025), 33 + 5);
        assert_eq!(visit_limit(2), 2 + 5);
        assert_eq!(visit_limit(1), 1 + 5);
    }

    #[test]
    fn two_vertices_always_link() {
        for beta in [0.0, 0.5, 0.95, 1.0] {
            let params = UswParams {
                beta,
                ..Default::default()
            };
            let g = generate_usw(2, &params, &mut rng_from_seed(9)).unwrap();
            assert_eq!(g.edge_count(), 1);
        }
    }

    #[test]
    fn simple_and_connected() {
        for seed in 0..5 {
            let g = generate_usw(300, &UswParams::default(), &mut rng_from_seed(seed)).unwrap();
            assert!(g.check_invariants());
            assert!(g.is_connected());
            assert!(g.vertices().all(|v| g.degree(v) >= 1));
        }
    }

    #[test]
    fn walk_respects_pool() {
        let mut g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let params = UswParams {
            beta: 0.0,
            gamma: 1.0,
            ..Default::default()
        };
        let pool = [1usize, 2];
        let mut touched = Vec::new();
        let mut scratch = WalkScratch::new();
        attach_walk(
            &mut g,
            5,
            1,
            &params,
            10,
            |w| pool.contains(&w),
            &mut scratch,
            &mut rng_from_seed(0),
            |u| touched.push(u),
        );
        assert!(touched.iter().all(|u| pool.contains(u)));
        assert!(g.neighbors(5).iter().all(|u| pool.contains(u)));
        assert!(g.degree(5) >= 1);
    }

    #[test]
    fn rejects_bad_params() {
        let params = UswParams {
            gamma: 1.5,
            ..Default::default()
        };
        assert!(generate_usw(10, &params, &mut rng_from_seed(0)).is_err());
    }
}
