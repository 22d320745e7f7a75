//! Random, preferential-attachment, small-world and unsupervised-small-world
//! graph construction.
//!
//! [`generate`] is the entry point: it validates the config, runs the family
//! routine with a sub-seed derived from the config seed and retries with the
//! next sub-seed until the output is connected.

mod usw;

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::seed::{derive_seed, rng_from_seed};

pub(crate) use usw::{attach_walk, visit_limit, WalkScratch};
pub use usw::{generate_usw, AttachmentPolicy, QueuePolicy, UswParams, VisitationPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Family {
    /// Erdős–Rényi G(n, p).
    #[cfg_attr(feature = "serde", serde(rename = "er"))]
    Random,
    /// Barabási–Albert preferential attachment.
    #[cfg_attr(feature = "serde", serde(rename = "pl"))]
    PowerLaw,
    /// Watts–Strogatz ring lattice with rewiring.
    #[cfg_attr(feature = "serde", serde(rename = "ws"))]
    SmallWorld,
    /// Unsupervised small world.
    Usw,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Random, Family::PowerLaw, Family::SmallWorld, Family::Usw];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Random => "er",
            Family::PowerLaw => "pl",
            Family::SmallWorld => "ws",
            Family::Usw => "usw",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" | "random" => Ok(Family::Random),
            "pl" | "ba" | "powerlaw" | "power-law" => Ok(Family::PowerLaw),
            "ws" | "smallworld" | "small-world" => Ok(Family::SmallWorld),
            "usw" => Ok(Family::Usw),
            _ => Err(Error::InvalidConfig(format!("unknown graph family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct GeneratorConfig {
    pub family: Family,
    pub n: usize,
    /// Edge probability (random) or rewiring probability (small world).
    pub p: f64,
    /// Lattice degree for small world; even.
    pub k: usize,
    /// Edges per new vertex for power law.
    pub m_attach: usize,
    pub usw: UswParams,
    pub seed: u64,
    pub max_retries: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            family: Family::Random,
            n: 1000,
            p: 0.01,
            k: 10,
            m_attach: 1,
            usw: UswParams::default(),
            seed: 0,
            max_retries: 100,
        }
    }
}

impl GeneratorConfig {
    pub fn new(family: Family, n: usize) -> Self {
        GeneratorConfig {
            family,
            n,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidConfig(msg));
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if self.max_retries == 0 {
            return bad("max_retries must be at least 1".into());
        }
        match self.family {
            Family::Random => check_probability("p", self.p)?,
            Family::SmallWorld => {
                check_probability("p", self.p)?;
                if self.k < 2 || !self.k.is_multiple_of(2) || self.k >= self.n {
                    return bad(format!("k must be even with 2 <= k < n, got k={} n={}", self.k, self.n));
                }
            }
            Family::PowerLaw => {
                if self.m_attach == 0 || self.m_attach >= self.n {
                    return bad(format!(
                        "m_attach must satisfy 1 <= m_attach < n, got {} with n={}",
                        self.m_attach, self.n
                    ));
                }
            }
            Family::Usw => self.usw.validate()?,
        }
        Ok(())
    }
}

pub(crate) fn check_probability(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{name} must lie in [0, 1], got {x}")))
    }
}

/// Simple connected graph for `config`, deterministic in `config.seed`.
pub fn generate(config: &GeneratorConfig) -> Result<Graph> {
    config.validate()?;
    for attempt in 0..config.max_retries {
        let mut rng = rng_from_seed(derive_seed(config.seed, attempt as u64));
        let g = match config.family {
            Family::Random => generate_random(config.n, config.p, &mut rng),
            Family::PowerLaw => generate_power_law(config.n, config.m_attach, &mut rng),
            Family::SmallWorld => generate_small_world(config.n, config.k, config.p, &mut rng),
            Family::Usw => generate_usw(config.n, &config.usw, &mut rng)?,
        };
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::ConnectivityRetryExhausted {
        attempts: config.max_retries,
    })
}

/// G(n, p): every unordered pair independently with probability `p`. May be disconnected.
pub fn generate_random<R: rand::Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("fresh pair");
            }
        }
    }
    g
}

/// Barabási–Albert growth from a clique on `m_attach + 1` vertices. Each new
/// vertex links to `m_attach` distinct existing vertices drawn with
/// probability proportional to their current degree.
pub fn generate_power_law<R: rand::Rng + ?Sized>(n: usize, m_attach: usize, rng: &mut R) -> Graph {
    assert!(m_attach >= 1 && m_attach < n, "need 1 <= m_attach < n");
    let seed = m_attach + 1;
    let mut g = Graph::with_vertices(n);
    // Each edge contributes both endpoints, so a uniform draw is degree-proportional.
    let mut endpoints: Vec<VertexId> = Vec::with_capacity(2 * m_attach * n);
    for u in 0..seed {
        for v in u + 1..seed {
            g.add_edge(u, v).expect("fresh pair");
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut targets: Vec<VertexId> = Vec::with_capacity(m_attach);
    for v in seed..n {
        targets.clear();
        while targets.len() < m_attach {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            g.add_edge(v, t).expect("fresh pair");
            endpoints.push(v);
            endpoints.push(t);
        }
    }
    g
}

/// Ring lattice of degree `k`, then each lattice edge has its far endpoint
/// moved to a uniform vertex with probability `p`, rejecting self-loops and
/// duplicates. May be disconnected.
pub fn generate_small_world<R: rand::Rng + ?Sized>(n: usize, k: usize, p: f64, rng: &mut R) -> Graph {
    assert!(k >= 2 && k.is_multiple_of(2) && k < n, "need even 2 <= k < n");
    let mut g = Graph::with_vertices(n);
    for j in 1..=k / 2 {
        for i in 0..n {
            g.add_edge(i, (i + j) % n).expect("lattice edge");
        }
    }
    for j in 1..=k / 2 {
        for i in 0..n {
            if !rng.gen_bool(p) || g.degree(i) >= n - 1 {
                continue;
            }
            let old = (i + j) % n;
            let new = loop {
                let w = rng.gen_range(0..n);
                if w != i && !g.has_edge(i, w) {
                    break w;
                }
            };
            g.remove_edge(i, old).expect("lattice edge still present");
            g.add_edge(i, new).expect("checked above");
        }
    }
    g
}
