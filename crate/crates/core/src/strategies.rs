//! Deterministic move selectors.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::canon::{CanonMode, ComponentCodes};
use crate::engine::MoveRecord;
use crate::error::{Error, Result};
use crate::generators::TkLayout;
use crate::solver::{SolveConfig, Solver};
use crate::state::{GameState, Mover};

/// A move selector. Implementations must be deterministic in
/// `(state, history)`.
pub trait Strategy: Send + Sync {
    fn name(&self) -> String;

    fn choose(&self, state: &GameState<'_>, history: &[MoveRecord]) -> Result<usize>;

    /// Summary of the history this strategy reads. `Some(t)` promises that
    /// every later choice is a function of the current alive set and `t`;
    /// `None` marks a position whose future depends on more of the history,
    /// which restricted solving then refuses to memoize.
    fn memo_tag(&self, _history: &[MoveRecord]) -> Option<u64> {
        Some(0)
    }

    /// Whether isomorphic positions with equal tags always have equal
    /// restricted-game values, so that isomorphism collapse is sound.
    fn iso_safe(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Smallest vertex id among minimizers.
    #[default]
    LowestId,
    /// Minimizer whose successor has the smallest AHU code, then smallest id.
    /// Makes the choice equivariant under relabelling.
    CanonicalResult,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrategyParams {
    pub alpha_eighths: i64,
    pub beta_eighths: i64,
    pub tie_break: TieBreak,
}

impl Default for StrategyParams {
    fn default() -> Self {
        StrategyParams {
            alpha_eighths: 3,
            beta_eighths: 13,
            tie_break: TieBreak::LowestId,
        }
    }
}

impl StrategyParams {
    /// Default weights with ties broken by the isomorphism class of the
    /// result, so that greedy play commutes with relabelling.
    pub fn iso_safe() -> Self {
        StrategyParams {
            tie_break: TieBreak::CanonicalResult,
            ..Default::default()
        }
    }

    pub fn weights(&self) -> Weights {
        Weights {
            unit: 8,
            alpha: self.alpha_eighths,
            beta: self.beta_eighths,
        }
    }
}

/// Integer weights of the potential `unit*v - alpha*e + (unit - beta)*k`;
/// the real potential is this divided by `unit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weights {
    pub unit: i64,
    pub alpha: i64,
    pub beta: i64,
}

impl Weights {
    pub fn score(&self, state: &GameState<'_>, u: usize) -> i64 {
        let d = state.delta_unchecked(u);
        self.unit * d.v as i64 - self.alpha * d.e as i64 + (self.unit - self.beta) * d.k as i64
    }
}

/// All alive vertices attaining the minimum potential, ascending.
pub fn greedy_argmin(state: &GameState<'_>, weights: Weights) -> Vec<usize> {
    let mut best = i64::MAX;
    let mut out = Vec::new();
    for u in state.alive().iter() {
        let s = weights.score(state, u);
        if s < best {
            best = s;
            out.clear();
        }
        if s == best {
            out.push(u);
        }
    }
    out
}

/// The greedy potential-minimizing move.
pub fn greedy_sweller(state: &GameState<'_>, params: &StrategyParams) -> Result<usize> {
    let minimizers = greedy_argmin(state, params.weights());
    match params.tie_break {
        TieBreak::LowestId => minimizers.first().copied(),
        TieBreak::CanonicalResult if minimizers.len() > 1 => {
            let codes = ComponentCodes::new(state);
            minimizers
                .iter()
                .map(|&u| (codes.successor_code(state, u), u))
                .min()
                .map(|(_, u)| u)
        }
        TieBreak::CanonicalResult => minimizers.first().copied(),
    }
    .ok_or(Error::EmptyState)
}

#[derive(Clone, Debug, Default)]
pub struct Greedy {
    pub params: StrategyParams,
}

impl Greedy {
    pub fn new(params: StrategyParams) -> Self {
        Greedy { params }
    }
}

impl Strategy for Greedy {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn choose(&self, state: &GameState<'_>, _history: &[MoveRecord]) -> Result<usize> {
        greedy_sweller(state, &self.params)
    }

    fn iso_safe(&self) -> bool {
        self.params.tie_break == TieBreak::CanonicalResult
    }
}

/// Diminisher's strategy on `T_k` for a Sweller-start game.
///
/// First reply: if Sweller took a center, the lowest-id legal vertex;
/// otherwise the center of the copy Sweller did not touch when legal, else
/// the other center. The copy whose center was taken is the first copy; on
/// later turns Diminisher takes the middle of an untouched leg of the second
/// copy, falling back to the lowest-id legal vertex.
///
/// After the first round both centers are gone, so the untouched legs of the
/// second copy are exactly the three-vertex path components, and once none
/// remain every component has at most two vertices and lasts exactly one
/// move. The game value therefore only depends on the isomorphism class.
#[derive(Clone, Debug)]
pub struct TkDiminisher {
    layout: TkLayout,
}

impl TkDiminisher {
    pub fn new(layout: TkLayout) -> Self {
        TkDiminisher { layout }
    }

    pub fn layout(&self) -> &TkLayout {
        &self.layout
    }

    /// Copy whose center has not been chosen.
    fn second_copy(&self, history: &[MoveRecord]) -> Option<usize> {
        history
            .iter()
            .find_map(|m| self.layout.center_copy(m.vertex))
            .map(|c| 1 - c)
    }
}

impl Strategy for TkDiminisher {
    fn name(&self) -> String {
        "tk".into()
    }

    fn choose(&self, state: &GameState<'_>, history: &[MoveRecord]) -> Result<usize> {
        if history.len().is_multiple_of(2) || history[0].mover != Mover::Sweller {
            return Err(Error::NotToMove(self.name()));
        }
        if state.forest().order() != self.layout.order() {
            return Err(Error::LayoutMismatch(format!(
                "forest order {} but layout order {}",
                state.forest().order(),
                self.layout.order()
            )));
        }
        let lowest = state.alive().first().ok_or(Error::EmptyState)?;
        if history.len() == 1 {
            let w = history[0].vertex;
            if self.layout.center_copy(w).is_some() {
                return Ok(lowest);
            }
            let touched = self.layout.copy_of(w).ok_or_else(|| {
                Error::LayoutMismatch(format!("vertex {w} is not in the layout"))
            })?;
            let preferred = [self.layout.centers[1 - touched], self.layout.centers[touched]];
            return Ok(preferred
                .into_iter()
                .find(|&c| state.is_alive(c))
                .unwrap_or(lowest));
        }
        if let Some(s2) = self.second_copy(history) {
            let untouched = self.layout.legs.iter().find(|l| {
                l.copy == s2
                    && state.is_alive(l.attach)
                    && state.is_alive(l.middle)
                    && state.is_alive(l.tip)
            });
            if let Some(leg) = untouched {
                return Ok(leg.middle);
            }
        }
        Ok(lowest)
    }

    fn memo_tag(&self, history: &[MoveRecord]) -> Option<u64> {
        match history.len() {
            0 => Some(0),
            1 => None,
            _ => Some(1 + self.second_copy(history).map_or(2, |c| c as u64)),
        }
    }

    fn iso_safe(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LowestId;

impl Strategy for LowestId {
    fn name(&self) -> String {
        "lowest".into()
    }

    fn choose(&self, state: &GameState<'_>, _history: &[MoveRecord]) -> Result<usize> {
        lowest_id(state)
    }
}

pub fn lowest_id(state: &GameState<'_>) -> Result<usize> {
    state.alive().first().ok_or(Error::EmptyState)
}

/// Uniform choice among alive vertices; the stream is selected by the move
/// number, so a replay with the same seed repeats every choice.
#[derive(Clone, Copy, Debug)]
pub struct RandomMove {
    pub seed: u64,
}

pub fn random_move(state: &GameState<'_>, seed: u64, move_number: usize) -> Result<usize> {
    let alive = state.alive();
    if alive.is_empty() {
        return Err(Error::EmptyState);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(move_number as u64);
    let i = rng.random_range(0..alive.len());
    Ok(alive.iter().nth(i).expect("index in range"))
}

impl Strategy for RandomMove {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn choose(&self, state: &GameState<'_>, history: &[MoveRecord]) -> Result<usize> {
        random_move(state, self.seed, history.len())
    }

    fn memo_tag(&self, history: &[MoveRecord]) -> Option<u64> {
        Some(history.len() as u64)
    }
}

/// Plays a lowest-id optimal move for `role`, backed by an exact solver.
pub struct Optimal {
    role: Mover,
    solver: Solver,
}

impl Optimal {
    pub fn new(role: Mover) -> Self {
        Optimal {
            role,
            solver: Solver::new(SolveConfig::default()),
        }
    }
}

impl fmt::Debug for Optimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Optimal").field("role", &self.role).finish()
    }
}

pub fn optimal(state: &GameState<'_>, mover: Mover) -> Result<usize> {
    Optimal::new(mover).choose(state, &[])
}

impl Strategy for Optimal {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn choose(&self, state: &GameState<'_>, _history: &[MoveRecord]) -> Result<usize> {
        if state.is_empty() {
            return Err(Error::EmptyState);
        }
        let result = self.solver.solve(state, self.role)?;
        Ok(result.optimal_moves[0])
    }

    fn iso_safe(&self) -> bool {
        debug_assert_eq!(self.solver.config().canon, CanonMode::Iso);
        true
    }
}

/// Builds a strategy from its command-line name: `greedy`, `tk`, `lowest`,
/// `random:<seed>` or `optimal`.
pub fn parse_strategy(
    name: &str,
    role: Mover,
    params: StrategyParams,
    layout: Option<&TkLayout>,
) -> Result<Box<dyn Strategy>> {
    let bad = || Error::PreconditionUnmet(format!("unknown strategy {name:?}"));
    Ok(match name {
        "greedy" => Box::new(Greedy::new(params)),
        "lowest" => Box::new(LowestId),
        "optimal" => Box::new(Optimal::new(role)),
        "tk" => {
            let layout = layout
                .ok_or_else(|| Error::LayoutMismatch("tk strategy needs a T_k forest".into()))?;
            Box::new(TkDiminisher::new(layout.clone()))
        }
        _ => {
            let seed = name.strip_prefix("random:").ok_or_else(bad)?;
            Box::new(RandomMove {
                seed: seed.parse().map_err(|_| bad())?,
            })
        }
    })
}
