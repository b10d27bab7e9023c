use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Undirected hardware connectivity graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    name: String,
    n_physical: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl CouplingGraph {
    pub fn new(
        name: impl Into<String>,
        n_physical: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::Dimension(format!("self-loop on vertex {u}")));
            }
            if u >= n_physical || v >= n_physical {
                return Err(Error::Dimension(format!("edge ({u}, {v}) outside {n_physical} vertices")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adjacency = vec![Vec::new(); n_physical];
        for &(u, v) in &set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(Self { name: name.into(), n_physical, edges: set, adjacency })
    }

    /// Square plaquette, the 4-cycle `0-1-3-2`.
    pub fn plaquette4() -> Self {
        Self::new("plaquette4", 4, [(0, 1), (1, 3), (3, 2), (2, 0)]).expect("valid preset")
    }

    /// Two parallel rails of `k` vertices joined by rungs. Vertex `(r, c)`
    /// is `r * k + c`.
    pub fn ladder(k: usize) -> Self {
        let rails = (0..2).flat_map(|r| (0..k.saturating_sub(1)).map(move |c| (r * k + c, r * k + c + 1)));
        let rungs = (0..k).map(|c| (c, k + c));
        Self::new(format!("ladder2x{k}"), 2 * k, rails.chain(rungs)).expect("valid preset")
    }

    /// Resolves a preset name: `plaquette4` or `ladder2xK`.
    pub fn preset(name: &str) -> Option<Self> {
        if name == "plaquette4" {
            return Some(Self::plaquette4());
        }
        let k: usize = name.strip_prefix("ladder2x")?.parse().ok()?;
        (k >= 1).then(|| Self::ladder(k))
    }

    /// Parses the edge-list format: a header line `n <vertex_count>` then one
    /// `u v` pair per line. Blank lines and `#` comments are ignored.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing `n <count>` header".into() })?;
        let mut parts = header.split_whitespace();
        let n = match (parts.next(), parts.next().map(str::parse::<usize>), parts.next()) {
            (Some("n"), Some(Ok(n)), None) => n,
            _ => return Err(Error::Parse { line, msg: format!("expected `n <count>`, got `{header}`") }),
        };
        let mut edges = Vec::new();
        for (line, l) in lines {
            let nums: Vec<_> = l.split_whitespace().map(str::parse::<usize>).collect();
            match nums.as_slice() {
                [Ok(u), Ok(v)] => edges.push((*u, *v)),
                _ => return Err(Error::Parse { line, msg: format!("expected `u v`, got `{l}`") }),
            }
        }
        Self::new(name, n, edges)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }
}
