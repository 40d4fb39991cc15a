//! Exact game values by memoized depth-first search.
//!
//! The value of a position is its remaining game length under optimal play:
//! zero for the empty state, otherwise one plus the best successor value for
//! the player to move (maximum for Sweller, minimum for Diminisher). Only
//! whole positions are memoized; components are never solved separately.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::OnceLock;

use dashmap::DashMap;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxBuildHasher, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_key, CanonKey, CanonMode, ComponentCodes};
use crate::engine::MoveRecord;
use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::par::{self, Jobs};
use crate::state::{GameState, Mover};
use crate::strategies::Strategy;

pub const DEFAULT_MEMO_LIMIT: usize = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub canon: CanonMode,
    pub memo_limit: usize,
    /// Visit moves in a seeded shuffled order instead of ascending ids.
    pub shuffle_seed: Option<u64>,
    /// Fan out over the root's moves.
    pub jobs: Jobs,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            canon: CanonMode::Iso,
            memo_limit: DEFAULT_MEMO_LIMIT,
            shuffle_seed: None,
            jobs: Jobs::Sequential,
        }
    }
}

impl SolveConfig {
    pub fn with_canon(canon: CanonMode) -> Self {
        SolveConfig {
            canon,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub visited: u64,
    pub memo_hits: u64,
    pub peak_memo: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub value: u32,
    pub optimal_moves: Vec<usize>,
    pub stats: SolveStats,
}

#[derive(Default)]
struct Counters {
    visited: AtomicU64,
    hits: AtomicU64,
    entries: AtomicUsize,
}

impl Counters {
    fn snapshot(&self) -> SolveStats {
        SolveStats {
            visited: self.visited.load(Ordering::Relaxed),
            memo_hits: self.hits.load(Ordering::Relaxed),
            peak_memo: self.entries.load(Ordering::Relaxed),
        }
    }
}

type Memo<K> = DashMap<K, u16, FxBuildHasher>;

fn insert_memo<K: std::hash::Hash + Eq>(
    memo: &Memo<K>,
    counters: &Counters,
    limit: usize,
    key: K,
    value: u16,
) -> Result<()> {
    // Concurrent writers may race on the same key; they always agree on the value.
    if memo.insert(key, value).is_none() {
        let n = counters.entries.fetch_add(1, Ordering::Relaxed) + 1;
        if n > limit {
            return Err(Error::MemoLimitExceeded(limit));
        }
    }
    Ok(())
}

/// Raw-mode memo keys are only meaningful for one forest.
fn bind_forest(owner: &OnceLock<Forest>, canon: CanonMode, forest: &Forest) -> Result<()> {
    if canon == CanonMode::Raw && owner.get_or_init(|| forest.clone()) != forest {
        return Err(Error::PreconditionUnmet(
            "a raw-mode solver is bound to the first forest it solved".into(),
        ));
    }
    Ok(())
}

fn move_order(state: &GameState<'_>, shuffle: Option<u64>) -> Vec<usize> {
    let mut moves: Vec<usize> = state.alive().iter().collect();
    if let Some(seed) = shuffle {
        let mix = state
            .alive()
            .words()
            .iter()
            .fold(seed, |acc, w| acc.rotate_left(17) ^ w.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        moves.shuffle(&mut ChaCha8Rng::seed_from_u64(mix));
    }
    moves
}

/// Exact solver for both players optimizing. In iso mode one solver (and its
/// memo) may be shared across forests and threads.
pub struct Solver {
    config: SolveConfig,
    memo: Memo<(CanonKey, Mover)>,
    counters: Counters,
    owner: OnceLock<Forest>,
}

impl Solver {
    pub fn new(config: SolveConfig) -> Self {
        Solver {
            config,
            memo: DashMap::with_hasher(FxBuildHasher),
            counters: Counters::default(),
            owner: OnceLock::new(),
        }
    }

    pub fn config(&self) -> &SolveConfig {
        &self.config
    }

    pub fn stats(&self) -> SolveStats {
        self.counters.snapshot()
    }

    /// Game value with `mover` to play.
    pub fn value(&self, state: &GameState<'_>, mover: Mover) -> Result<u32> {
        bind_forest(&self.owner, self.config.canon, state.forest())?;
        if state.is_empty() {
            return Ok(0);
        }
        let key = canonical_key(state, self.config.canon);
        self.search(state, mover, key).map(u32::from)
    }

    /// Game value plus every move that attains it.
    pub fn solve(&self, state: &GameState<'_>, mover: Mover) -> Result<SolveResult> {
        bind_forest(&self.owner, self.config.canon, state.forest())?;
        if state.is_empty() {
            return Ok(SolveResult {
                value: 0,
                optimal_moves: Vec::new(),
                stats: self.stats(),
            });
        }
        let moves: Vec<usize> = state.alive().iter().collect();
        let child_value = |&u: &usize| -> Result<u16> {
            let child = state.successor(u);
            if child.is_empty() {
                return Ok(1);
            }
            let key = canonical_key(&child, self.config.canon);
            Ok(1 + self.search(&child, mover.other(), key)?)
        };
        let values = par::map(self.config.jobs, &moves, child_value)
            .into_iter()
            .collect::<Result<Vec<u16>>>()?;
        let best = match mover {
            Mover::Sweller => *values.iter().max().unwrap(),
            Mover::Diminisher => *values.iter().min().unwrap(),
        };
        let optimal_moves = moves
            .iter()
            .zip(&values)
            .filter(|(_, &v)| v == best)
            .map(|(&u, _)| u)
            .collect();
        insert_memo(
            &self.memo,
            &self.counters,
            self.config.memo_limit,
            (canonical_key(state, self.config.canon), mover),
            best,
        )?;
        Ok(SolveResult {
            value: best as u32,
            optimal_moves,
            stats: self.stats(),
        })
    }

    fn search(&self, state: &GameState<'_>, mover: Mover, key: CanonKey) -> Result<u16> {
        let memo_key = (key, mover);
        if let Some(v) = self.memo.get(&memo_key) {
            self.counters.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(*v);
        }
        self.counters.visited.fetch_add(1, Ordering::Relaxed);
        let iso = self.config.canon == CanonMode::Iso;
        let mut seen = FxHashSet::default();
        let mut best: Option<u16> = None;
        let codes = ComponentCodes::for_mode(state, self.config.canon);
        for u in move_order(state, self.config.shuffle_seed) {
            let child = state.successor(u);
            let v = if child.is_empty() {
                1
            } else {
                let ck = codes.successor_key(state, u, self.config.canon);
                if iso && !seen.insert(ck.clone()) {
                    continue;
                }
                1 + self.search(&child, mover.other(), ck)?
            };
            best = Some(match (mover, best) {
                (_, None) => v,
                (Mover::Sweller, Some(b)) => b.max(v),
                (Mover::Diminisher, Some(b)) => b.min(v),
            });
            // Diminisher cannot do better than ending the game now.
            if mover == Mover::Diminisher && v == 1 {
                break;
            }
        }
        let best = best.expect("nonempty state has a move");
        insert_memo(
            &self.memo,
            &self.counters,
            self.config.memo_limit,
            memo_key,
            best,
        )?;
        Ok(best)
    }
}

/// One-shot exact solve with a fresh memo.
pub fn solve(state: &GameState<'_>, mover: Mover, canon: CanonMode) -> Result<SolveResult> {
    Solver::new(SolveConfig::with_canon(canon)).solve(state, mover)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Max,
    Min,
}

/// Game length when `fixed_side` always follows `strategy` and the other
/// side optimizes `objective`.
///
/// Memo entries are keyed by the canonical key of the position together with
/// the strategy's [`Strategy::memo_tag`]. Iso mode requires an
/// [`Strategy::iso_safe`] strategy.
pub struct RestrictedSolver<'s> {
    strategy: &'s dyn Strategy,
    fixed_side: Mover,
    objective: Objective,
    config: SolveConfig,
    memo: Memo<(CanonKey, u64)>,
    counters: Counters,
    owner: OnceLock<Forest>,
}

impl<'s> RestrictedSolver<'s> {
    pub fn new(
        strategy: &'s dyn Strategy,
        fixed_side: Mover,
        objective: Objective,
        config: SolveConfig,
    ) -> Result<Self> {
        if config.canon == CanonMode::Iso && !strategy.iso_safe() {
            return Err(Error::StrategyNotIsoSafe(strategy.name()));
        }
        Ok(RestrictedSolver {
            strategy,
            fixed_side,
            objective,
            config,
            memo: DashMap::with_hasher(FxBuildHasher),
            counters: Counters::default(),
            owner: OnceLock::new(),
        })
    }

    pub fn stats(&self) -> SolveStats {
        self.counters.snapshot()
    }

    /// Value of a game that starts in `state` with `mover` to play and an
    /// empty history.
    pub fn value(&self, state: &GameState<'_>, mover: Mover) -> Result<u32> {
        bind_forest(&self.owner, self.config.canon, state.forest())?;
        let mut history = Vec::new();
        self.search(state, mover, &mut history).map(u32::from)
    }

    /// One line of play realizing the value: the strategy's moves for the
    /// fixed side and the lowest-id best reply for the free side.
    pub fn line(&self, state: &GameState<'_>, mover: Mover) -> Result<Vec<usize>> {
        bind_forest(&self.owner, self.config.canon, state.forest())?;
        let mut history: Vec<MoveRecord> = Vec::new();
        let mut state = *state;
        let mut to_move = mover;
        while !state.is_empty() {
            let u = if to_move == self.fixed_side {
                self.fixed_move(&state, &history)?
            } else {
                let target = self.search(&state, to_move, &mut history)?;
                let mut pick = None;
                for u in state.alive().iter() {
                    let child = state.successor(u);
                    history.push(record(&history, &state, to_move, u));
                    let v = 1 + self.search(&child, to_move.other(), &mut history)?;
                    history.pop();
                    if v == target {
                        pick = Some(u);
                        break;
                    }
                }
                pick.expect("some move attains the value")
            };
            history.push(record(&history, &state, to_move, u));
            state = state.successor(u);
            to_move = to_move.other();
        }
        Ok(history.iter().map(|m| m.vertex).collect())
    }

    fn fixed_move(&self, state: &GameState<'_>, history: &[MoveRecord]) -> Result<usize> {
        let u = self.strategy.choose(state, history)?;
        if !state.is_alive(u) {
            return Err(Error::IllegalStrategyMove {
                strategy: self.strategy.name(),
                vertex: u,
            });
        }
        Ok(u)
    }

    fn search(
        &self,
        state: &GameState<'_>,
        to_move: Mover,
        history: &mut Vec<MoveRecord>,
    ) -> Result<u16> {
        if state.is_empty() {
            return Ok(0);
        }
        if to_move == self.fixed_side {
            let u = self.fixed_move(state, history)?;
            history.push(record(history, state, to_move, u));
            let v = self.search(&state.successor(u), to_move.other(), history);
            history.pop();
            return Ok(1 + v?);
        }
        let tag = self.strategy.memo_tag(history);
        let memo_key = tag.map(|t| (canonical_key(state, self.config.canon), t));
        if let Some(k) = &memo_key {
            if let Some(v) = self.memo.get(k) {
                self.counters.hits.fetch_add(1, Ordering::Relaxed);
                return Ok(*v);
            }
        }
        self.counters.visited.fetch_add(1, Ordering::Relaxed);
        let iso = self.config.canon == CanonMode::Iso;
        let mut seen = FxHashSet::default();
        let mut best: Option<u16> = None;
        let codes = ComponentCodes::for_mode(state, self.config.canon);
        for u in move_order(state, self.config.shuffle_seed) {
            let child = state.successor(u);
            history.push(record(history, state, to_move, u));
            if iso && !child.is_empty() {
                if let Some(t) = self.strategy.memo_tag(history) {
                    if !seen.insert((codes.successor_key(state, u, self.config.canon), t)) {
                        history.pop();
                        continue;
                    }
                }
            }
            let v = self.search(&child, to_move.other(), history);
            history.pop();
            let v = 1 + v?;
            best = Some(match (self.objective, best) {
                (_, None) => v,
                (Objective::Max, Some(b)) => b.max(v),
                (Objective::Min, Some(b)) => b.min(v),
            });
            if self.objective == Objective::Min && v == 1 {
                break;
            }
        }
        let best = best.expect("nonempty state has a move");
        if let Some(k) = memo_key {
            insert_memo(&self.memo, &self.counters, self.config.memo_limit, k, best)?;
        }
        Ok(best)
    }
}

fn record(history: &[MoveRecord], state: &GameState<'_>, mover: Mover, u: usize) -> MoveRecord {
    MoveRecord::next(history, mover, u, state.delta_unchecked(u))
}

/// One-shot restricted solve with a fresh memo.
pub fn solve_vs_fixed(
    state: &GameState<'_>,
    mover: Mover,
    fixed_side: Mover,
    strategy: &dyn Strategy,
    objective: Objective,
    canon: CanonMode,
) -> Result<u32> {
    RestrictedSolver::new(strategy, fixed_side, objective, SolveConfig::with_canon(canon))?
        .value(state, mover)
}
