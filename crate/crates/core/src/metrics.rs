//! Attack-progress metrics.
//!
//! Pairwise quantities come from one BFS per alive vertex. Average path
//! length, density and diameter are taken over the largest component; the
//! inverse-distance measures run over all alive pairs with `1/inf = 0`.

use alloc::collections::VecDeque;
use alloc::vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHABLE};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricsSnapshot {
    pub n_alive: usize,
    pub m_alive: usize,
    pub avg_inverse_path_length: f64,
    pub avg_path_length: f64,
    pub clustering_coefficient: f64,
    pub density: f64,
    pub damage_ratio: f64,
    pub diameter: usize,
    pub global_efficiency: f64,
}

/// Sums gathered from all-pairs BFS.
struct PairStats {
    n: usize,
    /// Sum of `1/d` over ordered pairs of distinct alive vertices.
    inverse_sum: f64,
    lcc_size: usize,
    lcc_edges: usize,
    /// Sum of distances over ordered pairs inside the largest component.
    lcc_distance_sum: usize,
    lcc_diameter: usize,
}

fn pair_stats(g: &Graph) -> PairStats {
    let lcc = g.largest_component();
    let mut in_lcc = vec![false; g.capacity()];
    for &v in &lcc {
        in_lcc[v] = true;
    }
    let lcc_edges = lcc.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;

    let mut dist = vec![UNREACHABLE; g.capacity()];
    let mut queue = VecDeque::new();
    let mut inverse_sum = 0.0;
    let mut lcc_distance_sum = 0;
    let mut lcc_diameter = 0;
    for s in g.vertices() {
        dist.fill(UNREACHABLE);
        g.bfs_fill(s, &mut dist, &mut queue);
        for t in g.vertices() {
            let d = dist[t];
            if t == s || d == UNREACHABLE {
                continue;
            }
            inverse_sum += 1.0 / d as f64;
            if in_lcc[s] {
                lcc_distance_sum += d;
                lcc_diameter = lcc_diameter.max(d);
            }
        }
    }
    PairStats {
        n: g.vertex_count(),
        inverse_sum,
        lcc_size: lcc.len(),
        lcc_edges,
        lcc_distance_sum,
        lcc_diameter,
    }
}

fn ordered_pairs(n: usize) -> f64 {
    (n * n.saturating_sub(1)) as f64
}

fn need(needed: usize, found: usize) -> Result<()> {
    if found < needed {
        Err(Error::TooFewVertices { needed, found })
    } else {
        Ok(())
    }
}

/// Mean of `1/d(i, j)` over unordered pairs of distinct alive vertices.
pub fn avg_inverse_path_length(g: &Graph) -> Result<f64> {
    need(2, g.vertex_count())?;
    let s = pair_stats(g);
    Ok(s.inverse_sum / ordered_pairs(s.n))
}

/// Mean shortest-path length between distinct vertices of the largest component.
pub fn avg_path_length(g: &Graph) -> Result<f64> {
    let s = pair_stats(g);
    need(2, s.lcc_size)?;
    Ok(s.lcc_distance_sum as f64 / ordered_pairs(s.lcc_size))
}

/// Global transitivity: closed length-2 paths over all length-2 paths, 0 if there are none.
pub fn clustering_coefficient(g: &Graph) -> f64 {
    let mut closed = 0usize;
    let mut triples = 0usize;
    for v in g.vertices() {
        let nbrs = g.neighbors(v);
        let d = nbrs.len();
        triples += d * d.saturating_sub(1) / 2;
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if g.has_edge(a, b) {
                    closed += 1;
                }
            }
        }
    }
    if triples == 0 {
        0.0
    } else {
        closed as f64 / triples as f64
    }
}

/// Edge density of the largest component; 0 when it has fewer than two vertices.
pub fn density(g: &Graph) -> f64 {
    let lcc = g.largest_component();
    let n = lcc.len();
    if n < 2 {
        return 0.0;
    }
    let m = lcc.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
    2.0 * m as f64 / ordered_pairs(n)
}

/// Size of the largest component over the number of alive vertices.
pub fn damage_ratio(g: &Graph) -> Result<f64> {
    need(1, g.vertex_count())?;
    Ok(g.largest_component().len() as f64 / g.vertex_count() as f64)
}

/// Largest shortest-path length inside the largest component.
pub fn diameter(g: &Graph) -> Result<usize> {
    need(1, g.vertex_count())?;
    Ok(pair_stats(g).lcc_diameter)
}

/// Mean of `1/d(i, j)` over ordered pairs, normalised by `n(n - 1)`.
pub fn global_efficiency(g: &Graph) -> Result<f64> {
    need(2, g.vertex_count())?;
    let s = pair_stats(g);
    Ok(s.inverse_sum / ordered_pairs(s.n))
}

/// Every metric at once. Quantities that are undefined for tiny graphs are reported as 0.
pub fn snapshot(g: &Graph) -> MetricsSnapshot {
    let s = pair_stats(g);
    let inverse = if s.n >= 2 {
        s.inverse_sum / ordered_pairs(s.n)
    } else {
        0.0
    };
    let (apl, density) = if s.lcc_size >= 2 {
        (
            s.lcc_distance_sum as f64 / ordered_pairs(s.lcc_size),
            2.0 * s.lcc_edges as f64 / ordered_pairs(s.lcc_size),
        )
    } else {
        (0.0, 0.0)
    };
    MetricsSnapshot {
        n_alive: s.n,
        m_alive: g.edge_count(),
        avg_inverse_path_length: inverse,
        avg_path_length: apl,
        clustering_coefficient: clustering_coefficient(g),
        density,
        damage_ratio: if s.n == 0 { 0.0 } else { s.lcc_size as f64 / s.n as f64 },
        diameter: s.lcc_diameter,
        global_efficiency: inverse,
    }
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
    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }
    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn inverse_path_length() {
        assert!(close(avg_inverse_path_length(&complete(4)).unwrap(), 1.0));
        assert_eq!(avg_inverse_path_length(&Graph::with_vertices(2)).unwrap(), 0.0);
        assert!(close(avg_inverse_path_length(&path(3)).unwrap(), 5.0 / 6.0));
        assert_eq!(
            avg_inverse_path_length(&Graph::with_vertices(1)),
            Err(Error::TooFewVertices { needed: 2, found: 1 })
        );
    }

    #[test]
    fn path_length() {
        assert!(close(avg_path_length(&complete(5)).unwrap(), 1.0));
        assert!(close(avg_path_length(&path(3)).unwrap(), 4.0 / 3.0));
        assert!(close(avg_path_length(&cycle(4)).unwrap(), 4.0 / 3.0));
        assert!(avg_path_length(&Graph::with_vertices(3)).is_err());
    }

    #[test]
    fn clustering() {
        assert_eq!(clustering_coefficient(&complete(4)), 1.0);
        let star = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        assert_eq!(clustering_coefficient(&star), 0.0);
        let lattice = Graph::from_edges(20, (0..20).flat_map(|i| [(i, (i + 1) % 20), (i, (i + 2) % 20)])).unwrap();
        assert!(close(clustering_coefficient(&lattice), 0.5));
        assert_eq!(clustering_coefficient(&Graph::with_vertices(3)), 0.0);
    }

    #[test]
    fn density_values() {
        assert!(close(density(&complete(6)), 1.0));
        assert!(close(density(&path(10)), 0.2));
        assert_eq!(density(&Graph::with_vertices(1)), 0.0);
    }

    #[test]
    fn damage() {
        assert_eq!(damage_ratio(&cycle(7)).unwrap(), 1.0);
        let two_triangles = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(damage_ratio(&two_triangles).unwrap(), 0.5);
        let g = Graph::from_edges(10, (1..7).map(|i| (i - 1, i))).unwrap();
        assert!(close(damage_ratio(&g).unwrap(), 0.7));
        assert!(damage_ratio(&Graph::new()).is_err());
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&complete(5)).unwrap(), 1);
        assert_eq!(diameter(&path(6)).unwrap(), 5);
        assert_eq!(diameter(&cycle(8)).unwrap(), 4);
    }

    #[test]
    fn efficiency() {
        assert!(close(global_efficiency(&complete(3)).unwrap(), 1.0));
        assert_eq!(global_efficiency(&Graph::with_vertices(3)).unwrap(), 0.0);
        assert!(close(global_efficiency(&path(3)).unwrap(), 5.0 / 6.0));
    }

    #[test]
    fn snapshots() {
        let s = snapshot(&complete(4));
        assert_eq!(
            (s.avg_inverse_path_length, s.avg_path_length, s.clustering_coefficient),
            (1.0, 1.0, 1.0)
        );
        assert_eq!((s.density, s.damage_ratio, s.diameter), (1.0, 1.0, 1));

        let two_triangles = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let s = snapshot(&two_triangles);
        assert_eq!(s.damage_ratio, 0.5);
        assert_eq!(s.avg_path_length, 1.0);
        assert_eq!(s.diameter, 1);
        assert_eq!(s.density, 1.0);

        let s = snapshot(&Graph::with_vertices(1));
        assert_eq!(s.damage_ratio, 1.0);
        assert_eq!(s.avg_path_length, 0.0);
    }
}
