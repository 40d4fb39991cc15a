//! Per-round potential bound along a played game.

use serde::Serialize;

use crate::engine::{check_trace_conservation, play_game, GameTrace};
use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::par::{self, Jobs};
use crate::state::Mover;
use crate::strategies::{Strategy, StrategyParams};

/// Round bound in eighths for the default weights: `m8(S) + m8(D) <= 26`.
pub const ROUND_BOUND8: i64 = 26;
/// Bound in eighths on Sweller's lone final move of an odd game.
pub const TAIL_BOUND8: i64 = 13;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundFailure {
    /// 1-based round; the tail of an odd game is round `N/2 + 1`.
    pub round: usize,
    pub sweller_vertex: usize,
    pub diminisher_vertex: Option<usize>,
    pub lhs: i64,
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundReport {
    /// Full rounds plus the tail, if any.
    pub checked: usize,
    pub passed: usize,
    pub failures: Vec<RoundFailure>,
    /// Smallest slack `bound - lhs` seen.
    pub min_slack: Option<i64>,
}

impl RoundReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `phi(S_i) + phi(D_i) <= 2*beta` for every full round and
/// `phi(S) <= beta` for the last move of an odd game, in eighths.
pub fn check_round_bound(trace: &GameTrace, params: &StrategyParams) -> Result<RoundReport> {
    if trace.first_mover != Mover::Sweller && !trace.is_empty() {
        return Err(Error::PreconditionUnmet(
            "round bound needs Sweller to move first".into(),
        ));
    }
    let (a8, b8) = (params.alpha_eighths, params.beta_eighths);
    let mut report = RoundReport {
        checked: 0,
        passed: 0,
        failures: Vec::new(),
        min_slack: None,
    };
    for (i, pair) in trace.moves.chunks(2).enumerate() {
        let lhs: i64 = pair.iter().map(|m| m.delta.potential8(a8, b8)).sum();
        let bound = if pair.len() == 2 { 2 * b8 } else { b8 };
        report.checked += 1;
        let slack = bound - lhs;
        report.min_slack = Some(report.min_slack.map_or(slack, |s| s.min(slack)));
        if slack >= 0 {
            report.passed += 1;
        } else {
            report.failures.push(RoundFailure {
                round: i + 1,
                sweller_vertex: pair[0].vertex,
                diminisher_vertex: pair.get(1).map(|m| m.vertex),
                lhs,
                bound,
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RoundSweepFailure {
    Round {
        instance: usize,
        edges: Vec<(usize, usize)>,
        #[serde(flatten)]
        failure: RoundFailure,
    },
    Conservation {
        instance: usize,
        edges: Vec<(usize, usize)>,
        detail: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundSweepReport {
    /// Games played.
    pub checked: usize,
    pub passed: usize,
    pub failures: Vec<RoundSweepFailure>,
    /// Rounds and tails checked over all games.
    pub rounds: usize,
    pub min_slack: Option<i64>,
}

impl RoundSweepReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Plays `sweller` against `diminisher` on each forest, Sweller first, and
/// checks every round and the conservation sums.
pub fn sweep_rounds(
    forests: &[Forest],
    sweller: &dyn Strategy,
    diminisher: &dyn Strategy,
    params: &StrategyParams,
    jobs: Jobs,
) -> Result<RoundSweepReport> {
    let indexed: Vec<(usize, &Forest)> = forests.iter().enumerate().collect();
    let results = par::map(jobs, &indexed, |&(i, f)| -> Result<_> {
        let trace = play_game(f, Mover::Sweller, sweller, diminisher)?;
        let rounds = check_round_bound(&trace, params)?;
        let mut failures: Vec<RoundSweepFailure> = rounds
            .failures
            .iter()
            .map(|r| RoundSweepFailure::Round {
                instance: i,
                edges: f.edges().to_vec(),
                failure: r.clone(),
            })
            .collect();
        for v in check_trace_conservation(&trace)?.violations {
            failures.push(RoundSweepFailure::Conservation {
                instance: i,
                edges: f.edges().to_vec(),
                detail: format!("{:?}: expected {}, got {}", v.which, v.expected, v.got),
            });
        }
        Ok((rounds.checked, rounds.min_slack, failures))
    });
    let mut report = RoundSweepReport {
        checked: 0,
        passed: 0,
        failures: Vec::new(),
        rounds: 0,
        min_slack: None,
    };
    for r in results {
        let (rounds, slack, failures) = r?;
        report.checked += 1;
        report.rounds += rounds;
        report.min_slack = match (report.min_slack, slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if failures.is_empty() {
            report.passed += 1;
        }
        report.failures.extend(failures);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::replay;
    use crate::forest::Forest;
    use crate::generators::path;

    #[test]
    fn star_center_tail_fails() {
        // K_{1,3} with Sweller taking the center: one move, m8 = 32 - 9 - 0 = 23.
        let f = Forest::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let t = replay(&f, Mover::Sweller, &[0]).unwrap();
        let r = check_round_bound(&t, &StrategyParams::default()).unwrap();
        assert_eq!(r.checked, 1);
        assert_eq!(
            r.failures,
            vec![RoundFailure {
                round: 1,
                sweller_vertex: 0,
                diminisher_vertex: None,
                lhs: 23,
                bound: TAIL_BOUND8,
            }]
        );
    }

    #[test]
    fn p3_endpoint_round() {
        // Endpoint (2,2,1) m8 = 5, then K1 (1,0,-1) m8 = 13.
        let f = path(3);
        let t = replay(&f, Mover::Sweller, &[0, 2]).unwrap();
        let r = check_round_bound(&t, &StrategyParams::default()).unwrap();
        assert!(r.is_ok());
        assert_eq!(r.min_slack, Some(ROUND_BOUND8 - 18));
    }

    #[test]
    fn greedy_against_baselines() {
        use crate::strategies::{Greedy, LowestId, RandomMove};
        let forests: Vec<Forest> = (1..=12).map(path).collect();
        let greedy = Greedy::default();
        for d in [&LowestId as &dyn Strategy, &RandomMove { seed: 3 }] {
            let r = sweep_rounds(&forests, &greedy, d, &StrategyParams::default(), Jobs::Sequential).unwrap();
            assert!(r.is_ok(), "{:?}", r.failures);
            assert_eq!(r.checked, 12);
        }
    }

    #[test]
    fn diminisher_first_is_rejected() {
        let f = path(2);
        let t = replay(&f, Mover::Diminisher, &[0]).unwrap();
        assert!(check_round_bound(&t, &StrategyParams::default()).is_err());
    }
}
