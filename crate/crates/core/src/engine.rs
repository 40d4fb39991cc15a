//! Playing games between strategies and checking the resulting traces.

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::state::{GameState, MoveDelta, Mover};
use crate::strategies::Strategy;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub mover: Mover,
    pub vertex: usize,
    pub delta: MoveDelta,
    /// 1-based count of this player's moves so far.
    pub index: usize,
    /// 1-based position in the whole game.
    pub number: usize,
}

impl MoveRecord {
    /// Record for the next move after `history`.
    pub fn next(history: &[MoveRecord], mover: Mover, vertex: usize, delta: MoveDelta) -> Self {
        MoveRecord {
            mover,
            vertex,
            delta,
            index: history.iter().filter(|m| m.mover == mover).count() + 1,
            number: history.len() + 1,
        }
    }
}

/// Whose turn it is after `plies` moves.
pub fn mover_at(first: Mover, plies: usize) -> Mover {
    if plies.is_multiple_of(2) {
        first
    } else {
        first.other()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameTrace {
    pub initial: Forest,
    pub first_mover: Mover,
    pub moves: Vec<MoveRecord>,
}

impl GameTrace {
    /// Total number of moves `N`.
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// `r = floor(N / 2)`, the number of completed rounds.
    pub fn rounds(&self) -> usize {
        self.moves.len() / 2
    }

    pub fn chosen(&self) -> Vec<usize> {
        self.moves.iter().map(|m| m.vertex).collect()
    }

    /// Combined deltas of each completed round (first mover's move plus the
    /// reply), as `(v_i, e_i, k_i)` with the matching scaled potential.
    pub fn round_deltas(&self) -> Vec<MoveDelta> {
        self.moves
            .chunks_exact(2)
            .map(|p| MoveDelta {
                v: p[0].delta.v + p[1].delta.v,
                e: p[0].delta.e + p[1].delta.e,
                k: p[0].delta.k + p[1].delta.k,
                m8: p[0].delta.m8 + p[1].delta.m8,
            })
            .collect()
    }

    /// The export document `{n, C, first_mover, moves, N}`.
    pub fn export(&self) -> TraceExport {
        TraceExport {
            n: self.initial.order(),
            components: self.initial.component_count(),
            first_mover: self.first_mover,
            moves: self
                .moves
                .iter()
                .map(|m| ExportedMove {
                    mover: m.mover,
                    vertex: m.vertex,
                    v: m.delta.v,
                    e: m.delta.e,
                    k: m.delta.k,
                    m8: m.delta.m8,
                })
                .collect(),
            total: self.moves.len(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.export()).expect("trace serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct TraceExport {
    pub n: usize,
    #[serde(rename = "C")]
    pub components: usize,
    pub first_mover: Mover,
    pub moves: Vec<ExportedMove>,
    #[serde(rename = "N")]
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct ExportedMove {
    pub mover: Mover,
    pub vertex: usize,
    pub v: u32,
    pub e: u32,
    pub k: i32,
    pub m8: i32,
}

/// Plays until the residual graph is empty.
pub fn play_game(
    forest: &Forest,
    first: Mover,
    sweller: &dyn Strategy,
    diminisher: &dyn Strategy,
) -> Result<GameTrace> {
    let mut state = GameState::new(forest)?;
    let mut moves: Vec<MoveRecord> = Vec::new();
    while !state.is_empty() {
        let mover = mover_at(first, moves.len());
        let strategy = match mover {
            Mover::Sweller => sweller,
            Mover::Diminisher => diminisher,
        };
        let u = strategy.choose(&state, &moves)?;
        if !state.is_alive(u) {
            return Err(Error::IllegalStrategyMove {
                strategy: strategy.name(),
                vertex: u,
            });
        }
        let (next, delta) = state.apply_move(u)?;
        moves.push(MoveRecord::next(&moves, mover, u, delta));
        state = next;
    }
    Ok(GameTrace {
        initial: forest.clone(),
        first_mover: first,
        moves,
    })
}

/// Rebuilds a trace from a list of chosen vertices.
pub fn replay(forest: &Forest, first: Mover, vertices: &[usize]) -> Result<GameTrace> {
    let mut state = GameState::new(forest)?;
    let mut moves: Vec<MoveRecord> = Vec::new();
    for &u in vertices {
        let (next, delta) = state.apply_move(u)?;
        let mover = mover_at(first, moves.len());
        moves.push(MoveRecord::next(&moves, mover, u, delta));
        state = next;
    }
    if !state.is_empty() {
        return Err(Error::PreconditionUnmet(format!(
            "replay leaves {} vertices alive",
            state.alive().len()
        )));
    }
    Ok(GameTrace {
        initial: forest.clone(),
        first_mover: first,
        moves,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Vertices,
    Edges,
    Isolated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConservationViolated {
    pub which: Quantity,
    pub expected: i64,
    pub got: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConservationReport {
    pub sum_v: i64,
    pub sum_e: i64,
    pub sum_k: i64,
    pub violations: Vec<ConservationViolated>,
}

impl ConservationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that a complete game removed every vertex (`Σv = n`), every edge
/// (`Σe = n - C`), and that the isolated-vertex increments telescope to
/// `Σk = -K(F)`.
pub fn check_trace_conservation(trace: &GameTrace) -> Result<ConservationReport> {
    let f = &trace.initial;
    let initial_isolated = GameState::new(f)?.isolated_count() as i64;
    let sum_v: i64 = trace.moves.iter().map(|m| m.delta.v as i64).sum();
    let sum_e: i64 = trace.moves.iter().map(|m| m.delta.e as i64).sum();
    let sum_k: i64 = trace.moves.iter().map(|m| m.delta.k as i64).sum();
    let mut violations = Vec::new();
    let expectations = [
        (Quantity::Vertices, f.order() as i64, sum_v),
        (Quantity::Edges, (f.order() - f.component_count()) as i64, sum_e),
        (Quantity::Isolated, -initial_isolated, sum_k),
    ];
    for (which, expected, got) in expectations {
        if expected != got {
            violations.push(ConservationViolated { which, expected, got });
        }
    }
    Ok(ConservationReport {
        sum_v,
        sum_e,
        sum_k,
        violations,
    })
}

/// Whether the chosen vertices form a maximal independent set of the
/// initial forest.
pub fn is_maximal_independent(trace: &GameTrace) -> bool {
    let f = &trace.initial;
    let chosen: VertexSet = trace.chosen().into_iter().collect();
    if chosen.len() != trace.len() {
        return false;
    }
    let independent = chosen
        .iter()
        .all(|u| !f.neighbor_set(u).intersects(&chosen));
    let maximal = (0..f.order())
        .all(|v| chosen.contains(v) || f.neighbor_set(v).intersects(&chosen));
    independent && maximal
}
