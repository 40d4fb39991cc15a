//! Immutable base forests and the plain-text graph format.
//!
//! The text format is line oriented: a header `n m`, followed by `m` lines
//! `u v` with 0-indexed endpoints. Lines whose first non-blank character is
//! `#` are comments and blank lines are ignored. [`Forest::to_text`] writes
//! edges in stored order, so parsing and re-writing is byte-exact.

use std::fmt::Write as _;

use crate::bitset::{VertexSet, CAPACITY};
use crate::error::{Error, Result};

/// A simple acyclic undirected graph on vertices `0..order`.
#[derive(Clone, Debug)]
pub struct Forest {
    order: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    component_count: usize,
    // Open neighborhoods as bit sets; empty when the order exceeds CAPACITY.
    neighbors: Vec<VertexSet>,
}

impl PartialEq for Forest {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.edges == other.edges
    }
}

impl Eq for Forest {}

impl Forest {
    /// Validates `edges` and builds the forest. Edge order is preserved.
    pub fn new(order: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut dsu = Dsu::new(order);
        let mut seen = rustc_hash::FxHashSet::default();
        for &(u, v) in &edges {
            for id in [u, v] {
                if id >= order {
                    return Err(Error::InvalidVertexId { id, order });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(u, v));
            }
            if !dsu.union(u, v) {
                return Err(Error::CycleDetected(u, v));
            }
        }
        let mut adjacency = vec![Vec::new(); order];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let neighbors = if order <= CAPACITY {
            adjacency.iter().map(|l| l.iter().copied().collect()).collect()
        } else {
            Vec::new()
        };
        Ok(Forest {
            order,
            component_count: order - edges.len(),
            edges,
            adjacency,
            neighbors,
        })
    }

    pub fn empty() -> Self {
        Forest::new(0, Vec::new()).expect("empty forest is valid")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn adjacency(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Open neighborhood of `v` as a bit set. Panics when the order exceeds
    /// the bit-set capacity; callers go through [`crate::GameState::new`].
    #[inline]
    pub fn neighbor_set(&self, v: usize) -> &VertexSet {
        &self.neighbors[v]
    }

    /// Whether the order fits in a [`VertexSet`].
    pub fn fits_bitset(&self) -> bool {
        self.order <= CAPACITY
    }

    /// Component count recomputed by depth-first traversal.
    pub fn count_components_by_traversal(&self) -> usize {
        let mut seen = vec![false; self.order];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.order {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &y in &self.adjacency[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        count
    }

    /// Disjoint union, relabelling `other` to follow `self`.
    pub fn disjoint_union(&self, other: &Forest) -> Forest {
        let off = self.order;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + off, v + off)))
            .collect();
        Forest::new(self.order + other.order, edges).expect("union of forests is a forest")
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Forest> {
        assert_eq!(perm.len(), self.order);
        Forest::new(
            self.order,
            self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect(),
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.order, self.edges.len()).unwrap();
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Parses exactly one graph; trailing non-comment content is an error.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = ContentLines::new(text);
        let forest = parse_one(&mut lines)?.ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                msg: "unexpected content after the last edge".into(),
            });
        }
        Ok(forest)
    }
}

/// Parses a stream of concatenated graphs, as written by `gen enum`.
pub fn parse_graphs(text: &str) -> Result<Vec<Forest>> {
    let mut lines = ContentLines::new(text);
    let mut out = Vec::new();
    while let Some(f) = parse_one(&mut lines)? {
        out.push(f);
    }
    Ok(out)
}

struct ContentLines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> ContentLines<'a> {
    fn new(text: &'a str) -> Self {
        ContentLines {
            inner: text.lines().enumerate(),
        }
    }
}

impl<'a> Iterator for ContentLines<'a> {
    type Item = (usize, &'a str);

    fn next(&mut self) -> Option<Self::Item> {
        for (i, raw) in self.inner.by_ref() {
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Some((i + 1, t));
        }
        None
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let bad = |msg: &str| Error::Parse {
        line,
        msg: format!("{msg}: {text:?}"),
    };
    let mut it = text.split_whitespace();
    let a = it.next().ok_or_else(|| bad("expected two integers"))?;
    let b = it.next().ok_or_else(|| bad("expected two integers"))?;
    if it.next().is_some() {
        return Err(bad("expected two integers"));
    }
    let a = a.parse().map_err(|_| bad("not a non-negative integer"))?;
    let b = b.parse().map_err(|_| bad("not a non-negative integer"))?;
    Ok((a, b))
}

fn parse_one(lines: &mut ContentLines<'_>) -> Result<Option<Forest>> {
    let Some((hline, header)) = lines.next() else {
        return Ok(None);
    };
    let (n, m) = parse_pair(hline, header)?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, text) = lines.next().ok_or(Error::Parse {
            line: hline,
            msg: format!("header promises {m} edges, found {}", edges.len()),
        })?;
        edges.push(parse_pair(line, text)?);
    }
    Forest::new(n, edges).map(Some)
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
