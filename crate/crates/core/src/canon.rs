//! Memo keys for residual states.
//!
//! [`CanonMode::Raw`] keys on the alive mask itself. [`CanonMode::Iso`] keys
//! on an AHU encoding: every component is rooted at its center (the smaller
//! of the two encodings for a bicentral tree), written as a balanced
//! parenthesis string with children in sorted order, and the component
//! strings are sorted and concatenated. Two residual forests get equal iso
//! keys exactly when they are isomorphic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::state::GameState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CanonMode {
    Raw,
    #[default]
    Iso,
}

impl std::str::FromStr for CanonMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "raw" => Ok(CanonMode::Raw),
            "iso" => Ok(CanonMode::Iso),
            _ => Err(format!("unknown canon mode {s:?} (expected raw|iso)")),
        }
    }
}

/// Isomorphism-invariant code of a residual forest: packed parenthesis bits,
/// `1` for open and `0` for close, most significant bit first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoCode {
    bits: u32,
    words: Box<[u64]>,
}

impl IsoCode {
    /// Number of vertices encoded.
    pub fn order(&self) -> usize {
        self.bits as usize / 2
    }
}

impl fmt::Debug for IsoCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.bits as usize)
            .map(|i| {
                if self.words[i / 64] >> (63 - i % 64) & 1 == 1 {
                    '('
                } else {
                    ')'
                }
            })
            .collect();
        write!(f, "IsoCode({s})")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CanonKey {
    Raw(VertexSet),
    Iso(IsoCode),
}

pub fn canonical_key(state: &GameState<'_>, mode: CanonMode) -> CanonKey {
    match mode {
        CanonMode::Raw => CanonKey::Raw(state.alive()),
        CanonMode::Iso => CanonKey::Iso(iso_code(state)),
    }
}

/// Connected components of the residual graph, in order of smallest vertex.
pub fn components(state: &GameState<'_>) -> Vec<VertexSet> {
    let mut rest = state.alive();
    let mut out = Vec::new();
    while let Some(s) = rest.first() {
        let mut comp = VertexSet::singleton(s);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for x in frontier.iter() {
                next = next.union(&state.neighbors(x));
            }
            frontier = next.difference(&comp);
            comp = comp.union(&frontier);
        }
        rest = rest.difference(&comp);
        out.push(comp);
    }
    out
}

fn components_within(state: &GameState<'_>, mut rest: VertexSet) -> Vec<VertexSet> {
    let mut out = Vec::new();
    while let Some(s) = rest.first() {
        let mut comp = VertexSet::singleton(s);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for x in frontier.iter() {
                next = next.union(state.forest().neighbor_set(x));
            }
            frontier = next.intersection(&rest).difference(&comp);
            comp = comp.union(&frontier);
        }
        rest = rest.difference(&comp);
        out.push(comp);
    }
    out
}

pub fn iso_code(state: &GameState<'_>) -> IsoCode {
    ComponentCodes::new(state).code()
}

fn pack(mut codes: Vec<&[u8]>) -> IsoCode {
    codes.sort_unstable();
    let bits: usize = codes.iter().map(|c| c.len()).sum();
    let mut words = vec![0u64; bits.div_ceil(64)];
    let mut i = 0;
    for c in codes {
        for &b in c {
            if b == 1 {
                words[i / 64] |= 1 << (63 - i % 64);
            }
            i += 1;
        }
    }
    IsoCode {
        bits: bits as u32,
        words: words.into_boxed_slice(),
    }
}

/// Per-component codes of one position. Successor codes only re-encode the
/// component that loses vertices.
pub struct ComponentCodes {
    comps: Vec<(VertexSet, Vec<u8>)>,
}

impl ComponentCodes {
    pub fn new(state: &GameState<'_>) -> Self {
        let comps = components(state)
            .into_iter()
            .map(|c| (c, component_code(state, c)))
            .collect();
        ComponentCodes { comps }
    }

    /// Codes usable for [`ComponentCodes::successor_key`] in `mode`; raw
    /// keys need no encoding.
    pub fn for_mode(state: &GameState<'_>, mode: CanonMode) -> Self {
        match mode {
            CanonMode::Raw => ComponentCodes { comps: Vec::new() },
            CanonMode::Iso => ComponentCodes::new(state),
        }
    }

    pub fn code(&self) -> IsoCode {
        pack(self.comps.iter().map(|(_, c)| c.as_slice()).collect())
    }

    /// Code of `state.successor(u)`; `state` must be the position these
    /// codes were built from.
    pub fn successor_code(&self, state: &GameState<'_>, u: usize) -> IsoCode {
        let removed = state.closed_neighborhood(u);
        let hit = self
            .comps
            .iter()
            .position(|(c, _)| c.contains(u))
            .expect("u is alive");
        let child = state.successor(u);
        let fresh: Vec<Vec<u8>> = components_within(&child, self.comps[hit].0.difference(&removed))
            .into_iter()
            .map(|c| component_code(&child, c))
            .collect();
        let codes = self
            .comps
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != hit)
            .map(|(_, (_, c))| c.as_slice())
            .chain(fresh.iter().map(Vec::as_slice))
            .collect();
        pack(codes)
    }

    pub fn successor_key(&self, state: &GameState<'_>, u: usize, mode: CanonMode) -> CanonKey {
        match mode {
            CanonMode::Raw => CanonKey::Raw(state.alive_after(u)),
            CanonMode::Iso => CanonKey::Iso(self.successor_code(state, u)),
        }
    }
}

fn component_code(state: &GameState<'_>, comp: VertexSet) -> Vec<u8> {
    match comp.len() {
        1 => return vec![1, 0],
        2 => return vec![1, 1, 0, 0],
        _ => {}
    }
    let mut centers = centers(state, comp);
    let first = encode_rooted(state, centers[0]);
    match centers.pop() {
        Some(c2) if centers.len() == 1 => first.min(encode_rooted(state, c2)),
        _ => first,
    }
}

/// One or two centers, found by repeatedly stripping leaves.
fn centers(state: &GameState<'_>, comp: VertexSet) -> Vec<usize> {
    let sub = |v: usize| state.forest().neighbor_set(v).intersection(&comp);
    let mut degree = vec![0usize; state.forest().order()];
    let mut leaves = Vec::new();
    for v in comp.iter() {
        degree[v] = sub(v).len();
        if degree[v] <= 1 {
            leaves.push(v);
        }
    }
    let mut remaining = comp;
    while remaining.len() > 2 {
        for &leaf in &leaves {
            remaining.remove(leaf);
        }
        let mut next = Vec::new();
        for &leaf in &leaves {
            for w in sub(leaf).intersection(&remaining).iter() {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        leaves = next;
    }
    remaining.iter().collect()
}

/// AHU code of the component of `root`, children in sorted code order.
/// Subtree codes live side by side in one arena.
fn encode_rooted(state: &GameState<'_>, root: usize) -> Vec<u8> {
    let mut order = vec![(root, usize::MAX)];
    let mut seen = VertexSet::singleton(root);
    let mut i = 0;
    while i < order.len() {
        let v = order[i].0;
        for w in state.neighbors(v).difference(&seen).iter() {
            seen.insert(w);
            order.push((w, i));
        }
        i += 1;
    }
    let mut arena: Vec<u8> = Vec::with_capacity(4 * order.len());
    let mut span = vec![(0usize, 0usize); order.len()];
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for (i, &(_, p)) in order.iter().enumerate().skip(1) {
        kids[p].push(i);
    }
    for i in (0..order.len()).rev() {
        let mut ch = std::mem::take(&mut kids[i]);
        ch.sort_unstable_by(|&a, &b| {
            let (sa, la) = span[a];
            let (sb, lb) = span[b];
            arena[sa..sa + la].cmp(&arena[sb..sb + lb])
        });
        let start = arena.len();
        arena.push(1);
        for c in ch {
            let (s, l) = span[c];
            arena.extend_from_within(s..s + l);
        }
        arena.push(0);
        span[i] = (start, arena.len() - start);
    }
    let (s, l) = span[0];
    arena[s..s + l].to_vec()
}
