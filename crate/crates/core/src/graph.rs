//! Simple undirected graph with stable vertex labels.
//!
//! Removed vertices keep their label and the neighbour list they had at the
//! moment of removal, so a later repair can put them back. Labels are never
//! reused or renumbered.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Distance reported by [`Graph::bfs_distances`] for unreachable or absent vertices.
pub const UNREACHABLE: usize = usize::MAX;

/// A single vertex or an unordered edge. Edges are stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ComponentRef {
    Vertex(VertexId),
    Edge(VertexId, VertexId),
}

impl ComponentRef {
    pub fn edge(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            ComponentRef::Edge(u, v)
        } else {
            ComponentRef::Edge(v, u)
        }
    }
}

impl fmt::Display for ComponentRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentRef::Vertex(v) => write!(f, "{v}"),
            ComponentRef::Edge(u, v) => write!(f, "{u}-{v}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    /// Sorted neighbour lists; empty for vertices that are not alive.
    adj: Vec<Vec<VertexId>>,
    alive: Vec<bool>,
    /// Removed vertex -> neighbours it should reconnect to on restore.
    removed: BTreeMap<VertexId, Vec<VertexId>>,
    n_alive: usize,
    m: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// `n` alive vertices labelled `0..n`, no edges.
    pub fn with_vertices(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            alive: vec![true; n],
            removed: BTreeMap::new(),
            n_alive: n,
            m: 0,
        }
    }

    /// Builds a graph on `0..n`. Duplicate edges are ignored; self-loops and
    /// out-of-range endpoints are errors.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Graph::with_vertices(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.adj.push(Vec::new());
        self.alive.push(true);
        self.n_alive += 1;
        self.adj.len() - 1
    }

    /// Returns `false` and leaves the graph unchanged if the edge already exists.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        self.check_alive(u)?;
        self.check_alive(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.m += 1;
                Ok(true)
            }
        }
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check_alive(u)?;
        self.check_alive(v)?;
        let pos = self.adj[u].binary_search(&v).map_err(|_| Error::EdgeNotFound(u, v))?;
        self.adj[u].remove(pos);
        let pos = self.adj[v].binary_search(&u).expect("adjacency is symmetric");
        self.adj[v].remove(pos);
        self.m -= 1;
        Ok(())
    }

    /// Removes `v` and its incident edges; the former neighbour list goes to the removal ledger.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<()> {
        self.check_alive(v)?;
        let nbrs = core::mem::take(&mut self.adj[v]);
        for &w in &nbrs {
            let pos = self.adj[w].binary_search(&v).expect("adjacency is symmetric");
            self.adj[w].remove(pos);
        }
        self.m -= nbrs.len();
        self.alive[v] = false;
        self.n_alive -= 1;
        self.removed.insert(v, nbrs);
        Ok(())
    }

    /// Brings a removed vertex back with no edges and returns the ledgered
    /// neighbours that are currently alive. Ledgered neighbours that are
    /// themselves removed get `v` added to their own ledger entry so the edge
    /// can come back when they do.
    pub fn restore_vertex(&mut self, v: VertexId) -> Result<Vec<VertexId>> {
        let nbrs = self.removed.remove(&v).ok_or(Error::NotRemoved(v))?;
        self.alive[v] = true;
        self.n_alive += 1;
        let mut live = Vec::with_capacity(nbrs.len());
        for w in nbrs {
            if self.is_alive(w) {
                live.push(w);
            } else if let Some(entry) = self.removed.get_mut(&w) {
                if let Err(pos) = entry.binary_search(&v) {
                    entry.insert(pos, v);
                }
            }
        }
        Ok(live)
    }

    pub fn removed_vertices(&self) -> &BTreeMap<VertexId, Vec<VertexId>> {
        &self.removed
    }

    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.is_alive(u) && self.adj[u].binary_search(&v).is_ok()
    }

    /// Sorted neighbours of `v`; empty if `v` is not alive.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.adj.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    /// Alive vertex ids in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive.iter().enumerate().filter_map(|(v, &a)| a.then_some(v))
    }

    /// Alive edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            let start = nbrs.partition_point(|&w| w < u);
            nbrs[start..].iter().map(move |&v| (u, v))
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n_alive
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// One past the largest label ever allocated.
    pub fn capacity(&self) -> usize {
        self.adj.len()
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices().next() else {
            return true;
        };
        self.component_of(start).len() == self.n_alive
    }

    /// Components in order of their smallest vertex; each component is sorted.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.capacity()];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Largest component; ties go to the component holding the smallest label.
    pub fn largest_component(&self) -> Vec<VertexId> {
        let mut best: Vec<VertexId> = Vec::new();
        for comp in self.connected_components() {
            if comp.len() > best.len() {
                best = comp;
            }
        }
        best
    }

    /// Sorted vertex set of the component containing `v`.
    pub fn component_of(&self, v: VertexId) -> Vec<VertexId> {
        if !self.is_alive(v) {
            return Vec::new();
        }
        let dist = self.bfs_distances(v).expect("alive source");
        dist.iter()
            .enumerate()
            .filter_map(|(u, &d)| (d != UNREACHABLE).then_some(u))
            .collect()
    }

    /// Hop counts from `source`, indexed by label; [`UNREACHABLE`] for
    /// unreachable and non-alive vertices.
    pub fn bfs_distances(&self, source: VertexId) -> Result<Vec<usize>> {
        self.check_alive(source)?;
        let mut dist = vec![UNREACHABLE; self.capacity()];
        let mut queue = VecDeque::new();
        self.bfs_fill(source, &mut dist, &mut queue);
        Ok(dist)
    }

    /// BFS into caller-owned buffers. `dist` must be all [`UNREACHABLE`] on entry.
    pub(crate) fn bfs_fill(&self, source: VertexId, dist: &mut [usize], queue: &mut VecDeque<VertexId>) {
        dist[source] = 0;
        queue.clear();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u] + 1;
            for &w in &self.adj[u] {
                if dist[w] == UNREACHABLE {
                    dist[w] = du;
                    queue.push_back(w);
                }
            }
        }
    }

    /// Subgraph induced on the vertices within `pl` hops of `root`. Labels are
    /// kept; vertices outside the ball are simply absent.
    pub fn induced_subgraph_by_radius(&self, root: VertexId, pl: usize) -> Result<Graph> {
        let dist = self.bfs_distances(root)?;
        let keep: Vec<VertexId> = (0..self.capacity()).filter(|&v| dist[v] <= pl).collect();
        Ok(self.induced_subgraph(&keep))
    }

    /// Number of vertices within `pl` hops of `root` (the size of the induced ball).
    pub fn ball_size(&self, root: VertexId, pl: usize) -> Result<usize> {
        Ok(self.bfs_distances(root)?.iter().filter(|&&d| d <= pl).count())
    }

    /// Subgraph induced on the alive members of `keep`, same label space.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> Graph {
        let mut mask = vec![false; self.capacity()];
        for &v in keep {
            if self.is_alive(v) {
                mask[v] = true;
            }
        }
        let mut g = Graph {
            adj: vec![Vec::new(); self.capacity()],
            alive: mask.clone(),
            removed: BTreeMap::new(),
            n_alive: mask.iter().filter(|&&b| b).count(),
            m: 0,
        };
        for v in 0..self.capacity() {
            if mask[v] {
                g.adj[v] = self.adj[v].iter().copied().filter(|&w| mask[w]).collect();
                g.m += g.adj[v].len();
            }
        }
        g.m /= 2;
        g
    }

    /// Label-exact state key: alive vertex count, alive labels, then edge endpoints.
    pub fn canonical_key(&self) -> Vec<VertexId> {
        let mut key = Vec::with_capacity(1 + self.n_alive + 2 * self.m);
        key.push(self.n_alive);
        key.extend(self.vertices());
        for (u, v) in self.edges() {
            key.push(u);
            key.push(v);
        }
        key
    }

    /// Structural invariants: symmetry, sorted simple adjacency, edge count,
    /// ledger disjoint from alive vertices.
    pub fn check_invariants(&self) -> bool {
        let mut deg_sum = 0;
        for v in 0..self.capacity() {
            let nbrs = &self.adj[v];
            if !self.alive[v] && !nbrs.is_empty() {
                return false;
            }
            if !nbrs.windows(2).all(|w| w[0] < w[1]) {
                return false;
            }
            for &w in nbrs {
                if w == v || !self.is_alive(w) || self.adj[w].binary_search(&v).is_err() {
                    return false;
                }
            }
            deg_sum += nbrs.len();
        }
        deg_sum == 2 * self.m
            && self.alive.iter().filter(|&&a| a).count() == self.n_alive
            && self.removed.keys().all(|&v| !self.is_alive(v))
    }

    fn check_alive(&self, v: VertexId) -> Result<()> {
        if self.is_alive(v) {
            Ok(())
        } else {
            Err(Error::VertexNotAlive(v))
        }
    }
}
