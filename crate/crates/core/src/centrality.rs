//! Degree, betweenness (vertex and edge) and closeness centrality.
//!
//! Betweenness is unnormalised and counts unordered pairs `{s, t}`. Edge
//! betweenness includes the pair formed by the edge's own endpoints, so every
//! edge scores at least 1. Closeness is `(n - 1) / sum of distances`, higher
//! meaning more central.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{ComponentRef, Graph, VertexId, UNREACHABLE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CentralityKind {
    Degree,
    BetweennessVertex,
    BetweennessEdge,
    Closeness,
}

impl CentralityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CentralityKind::Degree => "degree",
            CentralityKind::BetweennessVertex => "betweenness-vertex",
            CentralityKind::BetweennessEdge => "betweenness-edge",
            CentralityKind::Closeness => "closeness",
        }
    }
}

/// Scores sorted by component.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub kind: CentralityKind,
    pub scores: Vec<(ComponentRef, f64)>,
}

impl CentralityScores {
    pub fn get(&self, c: ComponentRef) -> Option<f64> {
        self.scores
            .binary_search_by(|(k, _)| k.cmp(&c))
            .ok()
            .map(|i| self.scores[i].1)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn max(&self) -> Option<f64> {
        self.scores.iter().map(|&(_, s)| s).reduce(f64::max)
    }

    pub fn min(&self) -> Option<f64> {
        self.scores.iter().map(|&(_, s)| s).reduce(f64::min)
    }
}

pub fn degree_centrality(g: &Graph) -> CentralityScores {
    CentralityScores {
        kind: CentralityKind::Degree,
        scores: g
            .vertices()
            .map(|v| (ComponentRef::Vertex(v), g.degree(v) as f64))
            .collect(),
    }
}

pub fn betweenness_vertex(g: &Graph) -> CentralityScores {
    let acc = brandes(g, false);
    CentralityScores {
        kind: CentralityKind::BetweennessVertex,
        scores: g
            .vertices()
            .map(|v| (ComponentRef::Vertex(v), acc.vertex[v] / 2.0))
            .collect(),
    }
}

pub fn betweenness_edge(g: &Graph) -> CentralityScores {
    let acc = brandes(g, true);
    let mut scores = Vec::with_capacity(g.edge_count());
    for u in g.vertices() {
        let nbrs = g.neighbors(u);
        for (i, &v) in nbrs.iter().enumerate() {
            if v < u {
                continue;
            }
            let j = g.neighbors(v).binary_search(&u).expect("symmetric");
            let total = acc.edge[u][i] + acc.edge[v][j];
            scores.push((ComponentRef::Edge(u, v), total / 2.0));
        }
    }
    CentralityScores {
        kind: CentralityKind::BetweennessEdge,
        scores,
    }
}

/// Fails with [`Error::DisconnectedInput`] if some pair of alive vertices is unreachable.
pub fn closeness(g: &Graph) -> Result<CentralityScores> {
    let n = g.vertex_count();
    let mut dist = vec![UNREACHABLE; g.capacity()];
    let mut queue = VecDeque::new();
    let mut scores = Vec::with_capacity(n);
    for v in g.vertices() {
        dist.fill(UNREACHABLE);
        g.bfs_fill(v, &mut dist, &mut queue);
        let mut total = 0usize;
        for u in g.vertices() {
            if dist[u] == UNREACHABLE {
                return Err(Error::DisconnectedInput);
            }
            total += dist[u];
        }
        let score = if total == 0 { 0.0 } else { (n - 1) as f64 / total as f64 };
        scores.push((ComponentRef::Vertex(v), score));
    }
    Ok(CentralityScores {
        kind: CentralityKind::Closeness,
        scores,
    })
}

struct Accumulated {
    vertex: Vec<f64>,
    /// Parallel to the adjacency lists: `edge[w][i]` is the dependency pushed
    /// across the edge to `neighbors(w)[i]` while `w` was the farther endpoint.
    edge: Vec<Vec<f64>>,
}

/// Brandes accumulation over every alive source in ascending label order.
/// Sums are over ordered pairs; callers halve them.
fn brandes(g: &Graph, with_edges: bool) -> Accumulated {
    let cap = g.capacity();
    let mut vertex = vec![0.0; cap];
    let mut edge: Vec<Vec<f64>> = if with_edges {
        (0..cap).map(|v| vec![0.0; g.degree(v)]).collect()
    } else {
        Vec::new()
    };

    let mut dist = vec![UNREACHABLE; cap];
    let mut sigma = vec![0.0f64; cap];
    let mut delta = vec![0.0f64; cap];
    let mut order: Vec<VertexId> = Vec::with_capacity(cap);
    let mut queue = VecDeque::with_capacity(cap);

    for s in g.vertices() {
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let du = dist[u];
            for &w in g.neighbors(u) {
                if dist[w] == UNREACHABLE {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
                if dist[w] == du + 1 {
                    sigma[w] += sigma[u];
                }
            }
        }

        for &w in order.iter().rev() {
            let dw = dist[w];
            let coeff = (1.0 + delta[w]) / sigma[w];
            for (i, &v) in g.neighbors(w).iter().enumerate() {
                if dw > 0 && dist[v] == dw - 1 {
                    let c = sigma[v] * coeff;
                    delta[v] += c;
                    if with_edges {
                        edge[w][i] += c;
                    }
                }
            }
            if w != s {
                vertex[w] += delta[w];
            }
        }

        for &w in &order {
            dist[w] = UNREACHABLE;
            sigma[w] = 0.0;
            delta[w] = 0.0;
        }
    }
    Accumulated { vertex, edge }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }
    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }
    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }
    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }
    fn values(s: &CentralityScores) -> Vec<f64> {
        s.scores.iter().map(|&(_, x)| x).collect()
    }

    #[test]
    fn degree() {
        assert_eq!(values(&degree_centrality(&star(4))), vec![4.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(values(&degree_centrality(&cycle(6))), vec![2.0; 6]);
        assert_eq!(values(&degree_centrality(&path(3))), vec![1.0, 2.0, 1.0]);
    }

    #[test]
    fn vertex_betweenness() {
        assert_eq!(values(&betweenness_vertex(&path(3))), vec![0.0, 1.0, 0.0]);
        assert_eq!(values(&betweenness_vertex(&star(3))), vec![3.0, 0.0, 0.0, 0.0]);
        assert_eq!(values(&betweenness_vertex(&cycle(4))), vec![0.5; 4]);
    }

    #[test]
    fn edge_betweenness() {
        let s = betweenness_edge(&path(3));
        assert_eq!(s.get(ComponentRef::Edge(0, 1)), Some(2.0));
        assert_eq!(s.get(ComponentRef::Edge(1, 2)), Some(2.0));
        assert_eq!(values(&betweenness_edge(&complete(3))), vec![1.0; 3]);
        assert_eq!(values(&betweenness_edge(&path(2))), vec![1.0]);
    }

    #[test]
    fn closeness_values() {
        assert_eq!(values(&closeness(&complete(4)).unwrap()), vec![1.0; 4]);
        let p3 = values(&closeness(&path(3)).unwrap());
        assert_eq!(p3[1], 1.0);
        assert!((p3[0] - 2.0 / 3.0).abs() < 1e-12);
        for x in values(&closeness(&cycle(5)).unwrap()) {
            assert!((x - 4.0 / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closeness_rejects_disconnected() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(closeness(&g), Err(Error::DisconnectedInput));
    }

    #[test]
    fn disconnected_pairs_contribute_nothing() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        assert_eq!(values(&betweenness_vertex(&g)), vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn dead_vertices_are_skipped() {
        let mut g = path(4);
        g.remove_vertex(3).unwrap();
        let s = betweenness_vertex(&g);
        assert_eq!(s.len(), 3);
        assert_eq!(s.get(ComponentRef::Vertex(1)), Some(1.0));
        assert_eq!(s.get(ComponentRef::Vertex(3)), None);
    }

    #[test]
    fn transitive_graphs_score_uniformly() {
        for g in [cycle(7), cycle(8), complete(6)] {
            for s in [betweenness_vertex(&g), closeness(&g).unwrap()] {
                let v = values(&s);
                assert!(v.iter().all(|&x| x == v[0]), "{v:?}");
            }
        }
    }
}
