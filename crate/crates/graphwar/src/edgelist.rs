//! Plain-text edge lists.
//!
//! ```text
//! # optional comments
//! 4 3        <- vertex count, edge count
//! 0 1
//! 1 2
//! 2 3
//! ```
//!
//! Vertices are `0..n`. Blank lines and text after `#` are ignored. A graph
//! written here keeps its vertex labels; removed vertices come back as
//! isolated ones, so only intact graphs round-trip exactly.
//!
//! Generated graphs carry a JSON sidecar at `<file>.meta.json` holding the
//! generator configuration, which USW repair needs later.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use graphwar_core::{Family, GeneratorConfig, Graph};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn fields(line: &str) -> Vec<&str> {
    line.split('#').next().unwrap_or("").split_whitespace().collect()
}

pub fn parse(text: &str) -> Result<Graph, ParseError> {
    let err = |line: usize, message: String| ParseError { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut g = Graph::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let f = fields(raw);
        if f.is_empty() {
            continue;
        }
        if f.len() != 2 {
            return Err(err(line, format!("expected two integers, found {:?}", f.join(" "))));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(line, format!("{s:?} is not a non-negative integer")))
        };
        let (a, b) = (parse(f[0])?, parse(f[1])?);
        match header {
            None => {
                header = Some((a, b));
                g = Graph::with_vertices(a);
            }
            Some((n, _)) => {
                if a >= n || b >= n {
                    return Err(err(line, format!("edge {a} {b} names a vertex outside 0..{n}")));
                }
                if a == b {
                    return Err(err(line, format!("self-loop on vertex {a}")));
                }
                if !g.add_edge(a, b).map_err(|e| err(line, e.to_string()))? {
                    return Err(err(line, format!("duplicate edge {a} {b}")));
                }
            }
        }
    }
    let (_, m) = header.ok_or_else(|| err(last_line.max(1), "missing \"n m\" header".into()))?;
    if g.edge_count() != m {
        return Err(err(
            last_line,
            format!("header declares {m} edges, found {}", g.edge_count()),
        ));
    }
    Ok(g)
}

pub fn render(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.capacity(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read(path: &Path) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

/// Metadata written next to a generated graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub format_version: u32,
    pub family: Family,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub generator: GeneratorConfig,
}

pub const SIDECAR_VERSION: u32 = 1;

pub fn sidecar_path(graph: &Path) -> PathBuf {
    let mut name = graph.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// The sidecar of `graph`, if one exists.
pub fn read_sidecar(graph: &Path) -> Result<Option<Sidecar>, CliError> {
    let path = sidecar_path(graph);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let meta: Sidecar =
        serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    if meta.format_version != SIDECAR_VERSION {
        return Err(CliError::Format(format!(
            "{}: unsupported format_version {}",
            path.display(),
            meta.format_version
        )));
    }
    Ok(Some(meta))
}

pub fn render_sidecar(g: &Graph, generator: &GeneratorConfig) -> String {
    let meta = Sidecar {
        format_version: SIDECAR_VERSION,
        family: generator.family,
        seed: generator.seed,
        n: g.vertex_count(),
        m: g.edge_count(),
        generator: generator.clone(),
    };
    let mut s = serde_json::to_string_pretty(&meta).expect("sidecar serializes");
    s.push('\n');
    s
}
