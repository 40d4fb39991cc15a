//! Residual game states and per-move metrics.

use serde::{Deserialize, Serialize};

use crate::bitset::{VertexSet, CAPACITY};
use crate::error::{Error, Result};
use crate::forest::Forest;

/// The two players.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mover {
    Sweller,
    Diminisher,
}

impl Mover {
    pub fn other(self) -> Mover {
        match self {
            Mover::Sweller => Mover::Diminisher,
            Mover::Diminisher => Mover::Sweller,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mover::Sweller => "sweller",
            Mover::Diminisher => "diminisher",
        }
    }
}

impl std::str::FromStr for Mover {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sweller" | "s" => Ok(Mover::Sweller),
            "diminisher" | "d" => Ok(Mover::Diminisher),
            _ => Err(format!("unknown player {s:?} (expected sweller|diminisher)")),
        }
    }
}

/// What a single move removes: vertices `v`, edges `e`, and the change `k`
/// in the number of isolated vertices. `m8` is the potential scaled by eight,
/// `8v - 3e - 5k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveDelta {
    pub v: u32,
    pub e: u32,
    pub k: i32,
    pub m8: i32,
}

impl MoveDelta {
    pub fn new(v: u32, e: u32, k: i32) -> Self {
        MoveDelta {
            v,
            e,
            k,
            m8: 8 * v as i32 - 3 * e as i32 - 5 * k,
        }
    }

    /// Potential in eighths for weights `alpha = alpha8/8`, `beta = beta8/8`:
    /// `8v - alpha8*e + (8 - beta8)*k`.
    pub fn potential8(&self, alpha8: i64, beta8: i64) -> i64 {
        8 * self.v as i64 - alpha8 * self.e as i64 + (8 - beta8) * self.k as i64
    }
}

/// A base forest together with the set of vertices still in play.
///
/// The residual graph is the subgraph of the base induced on `alive`.
#[derive(Clone, Copy, Debug)]
pub struct GameState<'a> {
    forest: &'a Forest,
    alive: VertexSet,
}

impl PartialEq for GameState<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.forest, other.forest) && self.alive == other.alive
    }
}

impl<'a> GameState<'a> {
    /// The initial state: every vertex alive.
    pub fn new(forest: &'a Forest) -> Result<Self> {
        if !forest.fits_bitset() {
            return Err(Error::CapacityExceeded {
                order: forest.order(),
                capacity: CAPACITY,
            });
        }
        Ok(GameState {
            forest,
            alive: VertexSet::full(forest.order()),
        })
    }

    pub fn with_alive(forest: &'a Forest, alive: VertexSet) -> Result<Self> {
        let mut s = Self::new(forest)?;
        if let Some(bad) = alive.difference(&s.alive).first() {
            return Err(Error::InvalidVertexId {
                id: bad,
                order: forest.order(),
            });
        }
        s.alive = alive;
        Ok(s)
    }

    pub fn forest(&self) -> &'a Forest {
        self.forest
    }

    pub fn alive(&self) -> VertexSet {
        self.alive
    }

    pub fn is_empty(&self) -> bool {
        self.alive.is_empty()
    }

    pub fn is_alive(&self, u: usize) -> bool {
        self.alive.contains(u)
    }

    /// Alive neighbors of `u`.
    #[inline]
    pub fn neighbors(&self, u: usize) -> VertexSet {
        self.forest.neighbor_set(u).intersection(&self.alive)
    }

    /// `N[u]` restricted to the residual graph.
    #[inline]
    pub fn closed_neighborhood(&self, u: usize) -> VertexSet {
        let mut s = self.neighbors(u);
        s.insert(u);
        s
    }

    pub fn degree(&self, u: usize) -> usize {
        self.neighbors(u).len()
    }

    /// `K(G)`: alive vertices with no alive neighbor.
    pub fn isolated_count(&self) -> usize {
        self.alive
            .iter()
            .filter(|&v| !self.forest.neighbor_set(v).intersects(&self.alive))
            .count()
    }

    /// Edge count of the residual graph.
    pub fn edge_count(&self) -> usize {
        self.alive.iter().map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Alive set after playing `u`, without validation.
    #[inline]
    pub fn alive_after(&self, u: usize) -> VertexSet {
        self.alive.difference(&self.closed_neighborhood(u))
    }

    /// The legal moves; in the residual formulation every alive vertex.
    pub fn legal_moves(&self) -> VertexSet {
        self.alive
    }

    fn check_alive(&self, u: usize) -> Result<()> {
        if self.is_alive(u) {
            Ok(())
        } else {
            Err(Error::DeadVertex(u))
        }
    }

    /// Metrics of playing `u`, computed from the neighborhood of `N[u]` only.
    pub fn move_delta(&self, u: usize) -> Result<MoveDelta> {
        self.check_alive(u)?;
        Ok(self.delta_unchecked(u))
    }

    #[inline]
    pub(crate) fn delta_unchecked(&self, u: usize) -> MoveDelta {
        let removed = self.closed_neighborhood(u);
        let after = self.alive.difference(&removed);
        let mut incident = 0usize;
        let mut internal2 = 0usize;
        let mut boundary = VertexSet::EMPTY;
        for x in removed.iter() {
            let nb = self.neighbors(x);
            incident += nb.len();
            internal2 += nb.intersection(&removed).len();
            boundary = boundary.union(&nb);
        }
        let e = incident - internal2 / 2;
        let boundary = boundary.intersection(&after);
        let newly_isolated = boundary
            .iter()
            .filter(|&b| !self.forest.neighbor_set(b).intersects(&after))
            .count() as i32;
        // Only u itself can be an isolated vertex inside N[u].
        let lost_isolated = i32::from(removed.len() == 1);
        MoveDelta::new(removed.len() as u32, e as u32, newly_isolated - lost_isolated)
    }

    /// Plays `u`, returning the successor state and the move's metrics.
    pub fn apply_move(&self, u: usize) -> Result<(GameState<'a>, MoveDelta)> {
        let delta = self.move_delta(u)?;
        let next = self.successor(u);
        debug_assert!(next.is_acyclic());
        Ok((next, delta))
    }

    #[inline]
    pub fn successor(&self, u: usize) -> GameState<'a> {
        GameState {
            forest: self.forest,
            alive: self.alive_after(u),
        }
    }

    /// Whether the residual graph is acyclic (edges = vertices - components).
    pub fn is_acyclic(&self) -> bool {
        let mut seen = VertexSet::EMPTY;
        let mut comps = 0;
        for s in self.alive.iter() {
            if seen.contains(s) {
                continue;
            }
            comps += 1;
            let mut frontier = VertexSet::singleton(s);
            seen.insert(s);
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for x in frontier.iter() {
                    next = next.union(&self.neighbors(x));
                }
                frontier = next.difference(&seen);
                seen = seen.union(&frontier);
            }
        }
        self.edge_count() + comps == self.alive.len()
    }
}
