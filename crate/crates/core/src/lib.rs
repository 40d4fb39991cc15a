//! Exact engine, strategy library and verification harness for the
//! competition-independence game on forests.
//!
//! Two players alternately pick a vertex of a forest and delete its closed
//! neighborhood until nothing is left. Sweller wants the game to last long,
//! Diminisher wants it short. The crate provides the residual-state engine
//! ([`GameState`]), exact solvers ([`solver`]), the potential-greedy and
//! `T_k` strategies ([`strategies`]) and computational checks of the known
//! bounds ([`verifier`]).

pub mod bitset;
pub mod canon;
pub mod engine;
pub mod error;
pub mod forest;
pub mod mis;
pub mod generators;
pub mod par;
pub mod solver;
pub mod state;
pub mod strategies;
pub mod verifier;

pub use bitset::{VertexSet, CAPACITY};
pub use canon::{canonical_key, CanonKey, CanonMode};
pub use engine::{check_trace_conservation, play_game, GameTrace, MoveRecord};
pub use error::{Error, Result};
pub use forest::Forest;
pub use par::Jobs;
pub use solver::{solve, solve_vs_fixed, Objective, RestrictedSolver, SolveConfig, SolveResult, Solver};
pub use state::{GameState, MoveDelta, Mover};
pub use strategies::{Strategy, StrategyParams, TieBreak};
