//! The attacker: profile-driven selection and removal of extremal components.
//!
//! A profile names a centrality measure, a component kind and an extremal
//! direction, written as a token such as `B-V-H`. Every shot recomputes the
//! centrality on the current graph, collects all components whose score is
//! within [`TIE_EPSILON`] of the extreme, and removes one of them uniformly at
//! random.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::centrality::{self, CentralityScores};
use crate::error::{Error, Result};
use crate::graph::{ComponentRef, Graph};

/// Absolute tolerance under which two scores count as tied.
pub const TIE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Degreeness,
    Betweenness,
    Closeness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentKind {
    Edge,
    Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extremal {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttackProfile {
    measure: Measure,
    component: ComponentKind,
    extremal: Extremal,
}

impl AttackProfile {
    /// All eight valid profiles, in the order D-V-L, D-V-H, B-E-L, B-E-H, B-V-L, B-V-H, C-V-L, C-V-H.
    pub const ALL: [AttackProfile; 8] = {
        use ComponentKind::*;
        use Extremal::*;
        use Measure::*;
        const fn p(measure: Measure, component: ComponentKind, extremal: Extremal) -> AttackProfile {
            AttackProfile {
                measure,
                component,
                extremal,
            }
        }
        [
            p(Degreeness, Vertex, Low),
            p(Degreeness, Vertex, High),
            p(Betweenness, Edge, Low),
            p(Betweenness, Edge, High),
            p(Betweenness, Vertex, Low),
            p(Betweenness, Vertex, High),
            p(Closeness, Vertex, Low),
            p(Closeness, Vertex, High),
        ]
    };

    /// Degreeness and closeness only exist for vertices.
    pub fn new(measure: Measure, component: ComponentKind, extremal: Extremal) -> Result<Self> {
        let profile = AttackProfile {
            measure,
            component,
            extremal,
        };
        if component == ComponentKind::Edge && measure != Measure::Betweenness {
            return Err(Error::InvalidCombination(profile.to_string()));
        }
        Ok(profile)
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn component(&self) -> ComponentKind {
        self.component
    }

    pub fn extremal(&self) -> Extremal {
        self.extremal
    }

    /// The same measure and component with the opposite extremal.
    pub fn flipped(&self) -> Self {
        AttackProfile {
            extremal: match self.extremal {
                Extremal::Low => Extremal::High,
                Extremal::High => Extremal::Low,
            },
            ..*self
        }
    }
}

impl fmt::Display for AttackProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.measure {
            Measure::Degreeness => 'D',
            Measure::Betweenness => 'B',
            Measure::Closeness => 'C',
        };
        let c = match self.component {
            ComponentKind::Edge => 'E',
            ComponentKind::Vertex => 'V',
        };
        let x = match self.extremal {
            Extremal::Low => 'L',
            Extremal::High => 'H',
        };
        write!(f, "{m}-{c}-{x}")
    }
}

impl FromStr for AttackProfile {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        parse_profile(token)
    }
}

/// Parses a `[DBC]-[EV]-[LH]` token.
pub fn parse_profile(token: &str) -> Result<AttackProfile> {
    let malformed = || Error::MalformedProfile(token.to_string());
    let b = token.trim().as_bytes();
    if b.len() != 5 || b[1] != b'-' || b[3] != b'-' {
        return Err(malformed());
    }
    let measure = match b[0].to_ascii_uppercase() {
        b'D' => Measure::Degreeness,
        b'B' => Measure::Betweenness,
        b'C' => Measure::Closeness,
        _ => return Err(malformed()),
    };
    let component = match b[2].to_ascii_uppercase() {
        b'E' => ComponentKind::Edge,
        b'V' => ComponentKind::Vertex,
        _ => return Err(malformed()),
    };
    let extremal = match b[4].to_ascii_uppercase() {
        b'L' => Extremal::Low,
        b'H' => Extremal::High,
        _ => return Err(malformed()),
    };
    AttackProfile::new(measure, component, extremal)
}

/// Centrality scores the profile ranks by.
pub fn profile_scores(g: &Graph, profile: &AttackProfile) -> Result<CentralityScores> {
    match (profile.measure, profile.component) {
        (Measure::Degreeness, ComponentKind::Vertex) => Ok(centrality::degree_centrality(g)),
        (Measure::Betweenness, ComponentKind::Vertex) => Ok(centrality::betweenness_vertex(g)),
        (Measure::Betweenness, ComponentKind::Edge) => Ok(centrality::betweenness_edge(g)),
        (Measure::Closeness, ComponentKind::Vertex) => centrality::closeness(g),
        _ => Err(Error::InvalidCombination(profile.to_string())),
    }
}

/// Every component whose score ties the profile's extreme. Never empty on success.
pub fn candidate_set(g: &Graph, profile: &AttackProfile) -> Result<Vec<ComponentRef>> {
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let scores = profile_scores(g, profile)?;
    let extreme = match profile.extremal {
        Extremal::High => scores.max(),
        Extremal::Low => scores.min(),
    }
    .ok_or(Error::EmptyGraph)?;
    Ok(scores
        .scores
        .iter()
        .filter(|&&(_, s)| (s - extreme).abs() <= TIE_EPSILON)
        .map(|&(c, _)| c)
        .collect())
}

pub(crate) fn remove_component(g: &mut Graph, c: ComponentRef) -> Result<()> {
    match c {
        ComponentRef::Vertex(v) => g.remove_vertex(v),
        ComponentRef::Edge(u, v) => g.remove_edge(u, v),
    }
}

/// Removes one uniformly chosen candidate and returns it.
pub fn attack_shot<R: rand::Rng + ?Sized>(g: &mut Graph, profile: &AttackProfile, rng: &mut R) -> Result<ComponentRef> {
    let candidates = candidate_set(g, profile)?;
    let pick = candidates[rng.gen_range(0..candidates.len())];
    remove_component(g, pick)?;
    Ok(pick)
}

/// Shoots until the graph disconnects and returns the number of shots. Fails
/// with [`Error::ShotLimitExceeded`] once `shot_limit` shots have been fired,
/// or earlier if the graph is down to one vertex and can no longer disconnect.
pub fn attack_until_disconnected<R: rand::Rng + ?Sized>(
    g: &mut Graph,
    profile: &AttackProfile,
    rng: &mut R,
    shot_limit: usize,
) -> Result<usize> {
    let mut shots = 0;
    loop {
        if !g.is_connected() {
            return Ok(shots);
        }
        if shots >= shot_limit || g.vertex_count() <= 1 {
            return Err(Error::ShotLimitExceeded { shots });
        }
        attack_shot(g, profile, rng)?;
        shots += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfficacyLimits {
    pub max_unique_graphs: usize,
    /// `None` leaves depth bounded only by the number of removable components.
    pub max_depth: Option<usize>,
}

impl Default for EfficacyLimits {
    fn default() -> Self {
        EfficacyLimits {
            max_unique_graphs: 500_000,
            max_depth: None,
        }
    }
}

/// Depth statistics over every root-to-leaf removal sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficacyStats {
    /// Distinct graph states reached by at least one removal.
    pub unique_graphs: usize,
    /// Number of distinct removal sequences ending at a leaf.
    pub paths: u128,
    pub max_depth: usize,
    pub min_depth: usize,
    pub mean_depth: f64,
    /// Sample standard deviation; `None` with fewer than two paths.
    pub stddev_depth: Option<f64>,
    pub truncated: bool,
}

/// Path-depth moments below one state, measured from that state.
#[derive(Debug, Clone, Copy)]
struct DepthSummary {
    paths: u128,
    sum: u128,
    sum_sq: u128,
    min: usize,
    max: usize,
}

impl DepthSummary {
    const EMPTY: DepthSummary = DepthSummary {
        paths: 0,
        sum: 0,
        sum_sq: 0,
        min: usize::MAX,
        max: 0,
    };
    const LEAF: DepthSummary = DepthSummary {
        paths: 1,
        sum: 0,
        sum_sq: 0,
        min: 0,
        max: 0,
    };

    /// Adds `child`'s paths, each one step longer.
    fn absorb_child(&mut self, child: &DepthSummary) {
        if child.paths == 0 {
            return;
        }
        self.paths += child.paths;
        self.sum += child.sum + child.paths;
        self.sum_sq += child.sum_sq + 2 * child.sum + child.paths;
        self.min = self.min.min(child.min + 1);
        self.max = self.max.max(child.max + 1);
    }
}

struct Explorer<'a> {
    profile: &'a AttackProfile,
    max_unique: usize,
    max_depth: usize,
    memo: BTreeMap<Vec<usize>, DepthSummary>,
    entered: usize,
    truncated: bool,
}

impl Explorer<'_> {
    fn explore(&mut self, g: &Graph, depth: usize) -> DepthSummary {
        if !g.is_connected() || g.vertex_count() <= 1 {
            return DepthSummary::LEAF;
        }
        if depth >= self.max_depth {
            self.truncated = true;
            return DepthSummary::LEAF;
        }
        let candidates = candidate_set(g, self.profile).expect("connected graph with a vertex");
        let mut acc = DepthSummary::EMPTY;
        for c in candidates {
            let mut child = g.clone();
            remove_component(&mut child, c).expect("candidate is present");
            let key = child.canonical_key();
            if let Some(s) = self.memo.get(&key) {
                acc.absorb_child(s);
                continue;
            }
            if self.entered >= self.max_unique {
                self.truncated = true;
                continue;
            }
            self.entered += 1;
            let s = self.explore(&child, depth + 1);
            self.memo.insert(key, s);
            acc.absorb_child(&s);
        }
        acc
    }
}

/// Applies `profile` recursively, branching over every tied candidate, until
/// each branch disconnects or shrinks to a single vertex. States are
/// de-duplicated by their exact labelled vertex and edge sets.
pub fn recursive_efficacy(g: &Graph, profile: &AttackProfile, limits: EfficacyLimits) -> EfficacyStats {
    let mut ex = Explorer {
        profile,
        max_unique: limits.max_unique_graphs,
        max_depth: limits.max_depth.unwrap_or(usize::MAX),
        memo: BTreeMap::new(),
        entered: 0,
        truncated: false,
    };
    let root = ex.explore(g, 0);
    let (mean, stddev) = if root.paths == 0 {
        (0.0, None)
    } else {
        let n = root.paths as f64;
        let mean = root.sum as f64 / n;
        let stddev = (root.paths > 1).then(|| {
            // Exact integer numerator: n * sum_sq - sum^2.
            let num = root.paths * root.sum_sq - root.sum * root.sum;
            libm::sqrt(num as f64 / (n * (n - 1.0)))
        });
        (mean, stddev)
    };
    EfficacyStats {
        unique_graphs: ex.entered,
        paths: root.paths,
        max_depth: root.max,
        min_depth: if root.paths == 0 { 0 } else { root.min },
        mean_depth: mean,
        stddev_depth: stddev,
        truncated: ex.truncated,
    }
}

/// Estimated vertex count of the ball of radius `pl` in a graph of average
/// degree `avg_degree`: `1 + sum_{i=1..pl} d (d - 1)^(i - 1)`, capped at
/// `n_cap` when given.
pub fn attacker_reach(avg_degree: f64, pl: usize, n_cap: Option<usize>) -> f64 {
    let mut total = 1.0;
    let mut shell = avg_degree;
    for _ in 0..pl {
        total += shell;
        shell *= avg_degree - 1.0;
    }
    match n_cap {
        Some(n) => total.min(n as f64),
        None => total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use alloc::vec;

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
    fn p(token: &str) -> AttackProfile {
        token.parse().unwrap()
    }

    #[test]
    fn parse_tokens() {
        let bvh = p("B-V-H");
        assert_eq!(
            (bvh.measure(), bvh.component(), bvh.extremal()),
            (Measure::Betweenness, ComponentKind::Vertex, Extremal::High)
        );
        assert_eq!(parse_profile("D-E-L"), Err(Error::InvalidCombination("D-E-L".into())));
        assert_eq!(parse_profile("C-E-H"), Err(Error::InvalidCombination("C-E-H".into())));
        let cvl = p("C-V-L");
        assert_eq!((cvl.measure(), cvl.extremal()), (Measure::Closeness, Extremal::Low));
        for bad in ["", "BVH", "B-V-X", "X-V-H", "B-V-HH", "B_V_H"] {
            assert!(matches!(parse_profile(bad), Err(Error::MalformedProfile(_))), "{bad}");
        }
        for prof in AttackProfile::ALL {
            assert_eq!(p(&prof.to_string()), prof);
        }
    }

    #[test]
    fn candidates() {
        assert_eq!(
            candidate_set(&star(3), &p("D-V-H")).unwrap(),
            vec![ComponentRef::Vertex(0)]
        );
        for prof in AttackProfile::ALL
            .iter()
            .filter(|x| x.component() == ComponentKind::Vertex)
        {
            assert_eq!(candidate_set(&cycle(5), prof).unwrap().len(), 5);
        }
        assert_eq!(
            candidate_set(&path(3), &p("B-E-H")).unwrap(),
            vec![ComponentRef::Edge(0, 1), ComponentRef::Edge(1, 2)]
        );
        assert_eq!(candidate_set(&Graph::new(), &p("D-V-H")), Err(Error::EmptyGraph));
        assert_eq!(
            candidate_set(&Graph::with_vertices(1), &p("B-E-H")),
            Err(Error::EmptyGraph)
        );
    }

    #[test]
    fn shots() {
        let mut rng = rng_from_seed(1);
        let mut g = star(3);
        assert_eq!(
            attack_shot(&mut g, &p("D-V-H"), &mut rng).unwrap(),
            ComponentRef::Vertex(0)
        );
        assert!(!g.is_connected());
        assert_eq!(g.removed_vertices().get(&0), Some(&vec![1, 2, 3]));

        let mut g = path(2);
        assert_eq!(
            attack_shot(&mut g, &p("B-E-H"), &mut rng).unwrap(),
            ComponentRef::Edge(0, 1)
        );
        assert!(!g.is_connected());
    }

    #[test]
    fn until_disconnected() {
        let mut rng = rng_from_seed(2);
        for prof in ["B-E-H", "B-E-L"] {
            assert_eq!(attack_until_disconnected(&mut path(2), &p(prof), &mut rng, 10), Ok(1));
        }
        assert_eq!(
            attack_until_disconnected(&mut complete(4), &p("D-V-L"), &mut rng, 100),
            Err(Error::ShotLimitExceeded { shots: 3 })
        );
        assert_eq!(
            attack_until_disconnected(&mut cycle(10), &p("B-V-L"), &mut rng, 0),
            Err(Error::ShotLimitExceeded { shots: 0 })
        );
    }

    #[test]
    fn efficacy_trivial_cases() {
        let s = recursive_efficacy(&path(2), &p("B-E-H"), EfficacyLimits::default());
        assert_eq!((s.unique_graphs, s.min_depth, s.max_depth, s.paths), (1, 1, 1, 1));
        assert_eq!(s.stddev_depth, None);
        assert!(!s.truncated);

        let s = recursive_efficacy(&star(3), &p("D-V-H"), EfficacyLimits::default());
        assert_eq!((s.unique_graphs, s.min_depth, s.max_depth, s.paths), (1, 1, 1, 1));
    }

    #[test]
    fn efficacy_counts_paths_through_shared_states() {
        // C4 under D-V-L: any of the 4 vertices, then either end of the P3 leaves P2,
        // then either vertex leaves one vertex. 4 * 2 * 2 = 16 sequences of depth 3.
        let s = recursive_efficacy(&cycle(4), &p("D-V-L"), EfficacyLimits::default());
        assert_eq!(s.paths, 16);
        assert_eq!((s.min_depth, s.max_depth), (3, 3));
        assert_eq!(s.mean_depth, 3.0);
        assert_eq!(s.stddev_depth, Some(0.0));
        // 4 P3s, 4 P2s (two ways each... shared), 4 singletons.
        assert_eq!(s.unique_graphs, 4 + 4 + 4);
    }

    #[test]
    fn efficacy_truncation_is_reported() {
        let limits = EfficacyLimits {
            max_unique_graphs: 2,
            max_depth: None,
        };
        let s = recursive_efficacy(&cycle(6), &p("D-V-L"), limits);
        assert!(s.truncated);
        assert!(s.unique_graphs <= 2);
        let limits = EfficacyLimits {
            max_unique_graphs: 1000,
            max_depth: Some(1),
        };
        let s = recursive_efficacy(&cycle(6), &p("D-V-L"), limits);
        assert!(s.truncated);
        assert_eq!(s.max_depth, 1);
    }

    #[test]
    fn reach() {
        assert_eq!(attacker_reach(2.0, 0, None), 1.0);
        assert_eq!(attacker_reach(3.0, 2, None), 10.0);
        assert_eq!(attacker_reach(4.0, 10, Some(50)), 50.0);
    }
}
