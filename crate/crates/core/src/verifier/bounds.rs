//! Global bounds on the Sweller-start game: the lower bound
//! `13 I_s >= 5n + 3C`, the degree-three tree bound `8 I_s >= 3n`, and the
//! upper bound certificate for `T_k`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canon::CanonMode;
use crate::engine::{check_trace_conservation, play_game, replay, GameTrace};
use crate::error::Result;
use crate::forest::Forest;
use crate::generators::{enumerate_forests, enumerate_trees, random_forest, tree_tk};
use crate::mis::{independence_number, independent_domination_number};
use crate::par::{self, Jobs};
use crate::solver::{Objective, RestrictedSolver, SolveConfig, Solver};
use crate::state::{GameState, Mover};
use crate::strategies::{Greedy, LowestId, Optimal, RandomMove, Strategy, StrategyParams, TkDiminisher};
use crate::verifier::rounds::check_round_bound;

/// `ceil((5n + 3C) / 13)`.
pub fn lower_bound(n: usize, c: usize) -> u32 {
    (5 * n + 3 * c).div_ceil(13) as u32
}

/// `ceil(3n / 8)`, the bound for trees of maximum degree at most three.
pub fn degree_three_bound(n: usize) -> u32 {
    (3 * n).div_ceil(8) as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBoundOptions {
    /// Solve greedy Sweller against an optimal Diminisher.
    pub greedy: bool,
    /// Solve the full game.
    pub exact: bool,
    /// Check round bounds and conservation on greedy traces against an
    /// optimal, a lowest-id and a seeded random Diminisher.
    pub traces: bool,
    pub params: StrategyParams,
    pub jobs: Jobs,
}

impl Default for LowerBoundOptions {
    fn default() -> Self {
        LowerBoundOptions {
            greedy: true,
            exact: true,
            traces: true,
            params: StrategyParams::iso_safe(),
            jobs: Jobs::Sequential,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBoundRecord {
    pub instance: usize,
    pub n: usize,
    #[serde(rename = "C")]
    pub c: usize,
    pub max_degree: usize,
    pub bound: u32,
    pub greedy: Option<u32>,
    pub exact: Option<u32>,
    pub traces: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundFailure {
    BoundViolated {
        instance: usize,
        edges: Vec<(usize, usize)>,
        which: &'static str,
        bound: u32,
        value: u32,
    },
    SandwichBroken {
        instance: usize,
        edges: Vec<(usize, usize)>,
        detail: String,
    },
    RoundBoundViolated {
        instance: usize,
        edges: Vec<(usize, usize)>,
        opponent: String,
        round: usize,
        lhs: i64,
        bound: i64,
    },
    ConservationViolated {
        instance: usize,
        edges: Vec<(usize, usize)>,
        opponent: String,
        detail: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundReport {
    /// Instances examined.
    pub checked: usize,
    pub passed: usize,
    pub failures: Vec<BoundFailure>,
    /// Game traces checked for round bounds and conservation.
    pub traces: usize,
    pub records: Vec<LowerBoundRecord>,
}

impl LowerBoundReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Shared solvers for one sweep. Iso-mode memos are valid across forests.
pub struct LowerBoundChecker<'g> {
    opts: LowerBoundOptions,
    greedy: &'g Greedy,
    restricted: Option<RestrictedSolver<'g>>,
    exact: Solver,
}

impl<'g> LowerBoundChecker<'g> {
    pub fn new(greedy: &'g Greedy, opts: LowerBoundOptions) -> Result<Self> {
        let canon = if greedy.iso_safe() {
            CanonMode::Iso
        } else {
            CanonMode::Raw
        };
        let restricted = if canon == CanonMode::Iso {
            Some(RestrictedSolver::new(
                greedy,
                Mover::Sweller,
                Objective::Min,
                SolveConfig::with_canon(canon),
            )?)
        } else {
            None
        };
        Ok(LowerBoundChecker {
            opts,
            greedy,
            restricted,
            exact: Solver::new(SolveConfig::default()),
        })
    }

    fn greedy_line(&self, f: &Forest) -> Result<(u32, Vec<usize>)> {
        let state = GameState::new(f)?;
        let fresh;
        let solver = match &self.restricted {
            Some(s) => s,
            None => {
                fresh = RestrictedSolver::new(
                    self.greedy,
                    Mover::Sweller,
                    Objective::Min,
                    SolveConfig::with_canon(CanonMode::Raw),
                )?;
                &fresh
            }
        };
        let value = solver.value(&state, Mover::Sweller)?;
        let line = if self.opts.traces {
            solver.line(&state, Mover::Sweller)?
        } else {
            Vec::new()
        };
        Ok((value, line))
    }

    /// Checks one forest; `instance` labels the failures.
    pub fn check(&self, instance: usize, f: &Forest) -> Result<(LowerBoundRecord, Vec<BoundFailure>)> {
        let n = f.order();
        let c = f.component_count();
        let bound = lower_bound(n, c);
        let state = GameState::new(f)?;
        let mut failures = Vec::new();
        let edges = || f.edges().to_vec();
        let mut record = LowerBoundRecord {
            instance,
            n,
            c,
            max_degree: f.max_degree(),
            bound,
            greedy: None,
            exact: None,
            traces: 0,
        };
        let lo = independent_domination_number(&state);
        let hi = independence_number(&state);

        let mut traces: Vec<(String, GameTrace, bool)> = Vec::new();
        if self.opts.greedy {
            let (value, line) = self.greedy_line(f)?;
            record.greedy = Some(value);
            if value < bound {
                failures.push(BoundFailure::BoundViolated {
                    instance,
                    edges: edges(),
                    which: "greedy",
                    bound,
                    value,
                });
            }
            if value < lo || value > hi {
                failures.push(BoundFailure::SandwichBroken {
                    instance,
                    edges: edges(),
                    detail: format!("greedy value {value} outside [{lo}, {hi}]"),
                });
            }
            if self.opts.traces {
                if line.len() != value as usize {
                    failures.push(BoundFailure::SandwichBroken {
                        instance,
                        edges: edges(),
                        detail: format!("line of length {} for value {value}", line.len()),
                    });
                }
                traces.push(("optimal".into(), replay(f, Mover::Sweller, &line)?, true));
                traces.push((
                    "lowest".into(),
                    play_game(f, Mover::Sweller, self.greedy, &LowestId)?,
                    true,
                ));
                let random = RandomMove { seed: instance as u64 };
                traces.push((
                    random.name(),
                    play_game(f, Mover::Sweller, self.greedy, &random)?,
                    true,
                ));
            }
        }
        if self.opts.exact {
            let value = self.exact.value(&state, Mover::Sweller)?;
            record.exact = Some(value);
            if value < bound {
                failures.push(BoundFailure::BoundViolated {
                    instance,
                    edges: edges(),
                    which: "exact",
                    bound,
                    value,
                });
            }
            if c == 1 && f.max_degree() <= 3 && value < degree_three_bound(n) {
                failures.push(BoundFailure::BoundViolated {
                    instance,
                    edges: edges(),
                    which: "exact_degree_three",
                    bound: degree_three_bound(n),
                    value,
                });
            }
            let greedy_ok = record.greedy.is_none_or(|g| g <= value);
            if !greedy_ok || value > hi || value as usize > n {
                failures.push(BoundFailure::SandwichBroken {
                    instance,
                    edges: edges(),
                    detail: format!("greedy {:?}, exact {value}, upper {hi}", record.greedy),
                });
            }
            if self.opts.traces && n > 0 {
                let t = play_game(
                    f,
                    Mover::Sweller,
                    &Optimal::new(Mover::Sweller),
                    &Optimal::new(Mover::Diminisher),
                )?;
                if t.len() != value as usize {
                    failures.push(BoundFailure::SandwichBroken {
                        instance,
                        edges: edges(),
                        detail: format!("optimal play lasted {} for value {value}", t.len()),
                    });
                }
                traces.push(("optimal_vs_optimal".into(), t, false));
            }
        }
        for (opponent, trace, greedy_sweller) in &traces {
            let cons = check_trace_conservation(trace)?;
            for v in cons.violations {
                failures.push(BoundFailure::ConservationViolated {
                    instance,
                    edges: edges(),
                    opponent: opponent.clone(),
                    detail: format!("{:?}: expected {}, got {}", v.which, v.expected, v.got),
                });
            }
            if *greedy_sweller {
                for r in check_round_bound(trace, &self.opts.params)?.failures {
                    failures.push(BoundFailure::RoundBoundViolated {
                        instance,
                        edges: edges(),
                        opponent: opponent.clone(),
                        round: r.round,
                        lhs: r.lhs,
                        bound: r.bound,
                    });
                }
            }
        }
        record.traces = traces.len();
        Ok((record, failures))
    }
}

/// Single-forest check with fresh solvers.
pub fn check_global_lower_bound(f: &Forest, opts: LowerBoundOptions) -> Result<LowerBoundReport> {
    sweep_lower_bound(std::slice::from_ref(f), opts)
}

pub fn sweep_lower_bound(forests: &[Forest], opts: LowerBoundOptions) -> Result<LowerBoundReport> {
    let greedy = Greedy::new(opts.params);
    let checker = LowerBoundChecker::new(&greedy, opts)?;
    let indexed: Vec<(usize, &Forest)> = forests.iter().enumerate().collect();
    let results = par::map(opts.jobs, &indexed, |&(i, f)| checker.check(i, f));
    let mut report = LowerBoundReport {
        checked: 0,
        passed: 0,
        failures: Vec::new(),
        traces: 0,
        records: Vec::with_capacity(forests.len()),
    };
    for r in results {
        let (record, failures) = r?;
        report.checked += 1;
        report.traces += record.traces;
        if failures.is_empty() {
            report.passed += 1;
        }
        report.failures.extend(failures);
        report.records.push(record);
    }
    Ok(report)
}

/// Every tree with at most `max_n` vertices, by increasing order.
pub fn tree_corpus(max_n: usize) -> Result<Vec<Forest>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(enumerate_trees(n)?);
    }
    Ok(out)
}

/// Every nonempty forest with at most `max_n` vertices.
pub fn forest_corpus(max_n: usize) -> Result<Vec<Forest>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(enumerate_forests(n)?);
    }
    Ok(out)
}

/// `count` seeded random forests: `n` uniform in `1..=max_n`; a tree with
/// probability one half, otherwise `C` uniform in `1..=max(1, n/5)`.
/// Instance `i` depends only on `seed` and `i`.
pub fn random_ensemble(count: usize, max_n: usize, seed: u64) -> Result<Vec<Forest>> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let n = rng.random_range(1..=max_n);
            let c = if rng.random_bool(0.5) {
                1
            } else {
                rng.random_range(1..=(n / 5).max(1))
            };
            random_forest(n, c, rng.random())
        })
        .collect()
}

/// `2 + floor((k-1)/2) + 2 ceil((k+1)/2) + k`, the length Diminisher's
/// strategy on `T_k` allows at most.
pub fn tk_formula(k: usize) -> u32 {
    (2 + (k - 1) / 2 + 2 * (k + 1).div_ceil(2) + k) as u32
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TkRecord {
    pub k: usize,
    pub n: usize,
    /// Longest game Sweller can force against the fixed strategy.
    pub certified: Option<u32>,
    pub formula: u32,
    pub exact: Option<u32>,
    /// `7 * certified < 3n`.
    pub below_three_sevenths: bool,
    /// Principal lines replayed and checked for conservation.
    pub traces: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TkFailure {
    /// A value exceeded a bound: `value > bound` means the check failed.
    BoundViolated {
        k: usize,
        which: &'static str,
        value: u32,
        bound: String,
    },
    ConservationViolated {
        k: usize,
        detail: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct TkReport {
    pub checked: usize,
    pub passed: usize,
    pub failures: Vec<TkFailure>,
    pub records: Vec<TkRecord>,
}

impl TkReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn within_upper_bound(value: u32, n: usize) -> bool {
    // value <= 5n/12 + 13/6
    12 * value as usize <= 5 * n + 26
}

/// Closed-form checks only: the formula stays within `5n/12 + 13/6`, and
/// for `k >= 31` below `3n/7`.
pub fn tk_closed_form(k: usize) -> (TkRecord, Vec<TkFailure>) {
    let n = 2 * (3 * k + 1);
    let formula = tk_formula(k);
    let mut failures = Vec::new();
    if !within_upper_bound(formula, n) {
        failures.push(TkFailure::BoundViolated {
            k,
            which: "formula",
            value: formula,
            bound: "5n/12 + 13/6".into(),
        });
    }
    let below = 7 * (formula as usize) < 3 * n;
    if k >= 31 && !below {
        failures.push(TkFailure::BoundViolated {
            k,
            which: "formula",
            value: formula,
            bound: "3n/7 (strict)".into(),
        });
    }
    let record = TkRecord {
        k,
        n,
        certified: None,
        formula,
        exact: None,
        below_three_sevenths: below,
        traces: 0,
    };
    (record, failures)
}

/// Certifies the length bound on `T_k` by solving Sweller's best response to
/// the fixed Diminisher strategy; with `exact`, also solves the full game.
pub fn check_tk_upper_bound(k: usize, exact: bool) -> Result<(TkRecord, Vec<TkFailure>)> {
    let (forest, layout) = tree_tk(k);
    let (mut record, mut failures) = tk_closed_form(k);
    let n = record.n;
    let strategy = TkDiminisher::new(layout);
    let solver = RestrictedSolver::new(
        &strategy,
        Mover::Diminisher,
        Objective::Max,
        SolveConfig::default(),
    )?;
    let state = GameState::new(&forest)?;
    let certified = solver.value(&state, Mover::Sweller)?;
    record.certified = Some(certified);
    record.below_three_sevenths = 7 * (certified as usize) < 3 * n;
    let mut fail = |which, value, bound: String| {
        failures.push(TkFailure::BoundViolated { k, which, value, bound })
    };
    if certified > record.formula {
        fail("certified", certified, format!("formula {}", record.formula));
    }
    if !within_upper_bound(certified, n) {
        fail("certified", certified, "5n/12 + 13/6".into());
    }
    if k >= 31 && !record.below_three_sevenths {
        fail("certified", certified, "3n/7 (strict)".into());
    }
    let line = solver.line(&state, Mover::Sweller)?;
    if line.len() != certified as usize {
        fail("line", line.len() as u32, format!("certified {certified}"));
    }
    let mut traces = vec![replay(&forest, Mover::Sweller, &line)?];
    if exact {
        let value = Solver::new(SolveConfig::default()).value(&state, Mover::Sweller)?;
        record.exact = Some(value);
        if value > certified {
            fail("exact", value, format!("certified {certified}"));
        }
        traces.push(play_game(
            &forest,
            Mover::Sweller,
            &Optimal::new(Mover::Sweller),
            &Optimal::new(Mover::Diminisher),
        )?);
    }
    for t in &traces {
        for v in check_trace_conservation(t)?.violations {
            failures.push(TkFailure::ConservationViolated {
                k,
                detail: format!("{:?}: expected {}, got {}", v.which, v.expected, v.got),
            });
        }
    }
    record.traces = traces.len();
    Ok((record, failures))
}

/// Runs [`check_tk_upper_bound`] for each `k` in `ks` (exact solving up to
/// `exact_max_k`) and the closed form for every `k` up to `closed_max_k`.
pub fn sweep_tk(ks: &[usize], exact_max_k: usize, closed_max_k: usize, jobs: Jobs) -> Result<TkReport> {
    let solved = par::map(jobs, ks, |&k| check_tk_upper_bound(k, k <= exact_max_k));
    let mut report = TkReport {
        checked: 0,
        passed: 0,
        failures: Vec::new(),
        records: Vec::new(),
    };
    let mut push = |record, failures: Vec<TkFailure>| {
        report.checked += 1;
        if failures.is_empty() {
            report.passed += 1;
        }
        report.failures.extend(failures);
        report.records.push(record);
    };
    for r in solved {
        let (record, failures) = r?;
        push(record, failures);
    }
    for k in (1..=closed_max_k).filter(|k| !ks.contains(k)) {
        let (record, failures) = tk_closed_form(k);
        push(record, failures);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::path;

    #[test]
    fn bound_arithmetic() {
        assert_eq!(lower_bound(1, 1), 1);
        assert_eq!(lower_bound(12, 1), 5);
        assert_eq!(lower_bound(0, 0), 0);
        assert_eq!(degree_three_bound(8), 3);
        assert_eq!(degree_three_bound(9), 4);
    }

    #[test]
    fn tk_formula_values() {
        assert_eq!(
            (1..=3).map(tk_formula).collect::<Vec<_>>(),
            vec![5, 8, 10]
        );
        assert_eq!(tk_formula(31), 80);
        let (rec, fails) = tk_closed_form(31);
        assert_eq!(rec.n, 188);
        assert!(rec.below_three_sevenths);
        assert!(fails.is_empty());
        // Below k = 31 the formula is not yet under 3n/7.
        assert!(!tk_closed_form(30).0.below_three_sevenths);
    }

    #[test]
    fn small_sweep_passes() {
        let forests = vec![path(1), path(5), path(7)];
        let r = sweep_lower_bound(&forests, LowerBoundOptions::default()).unwrap();
        assert!(r.is_ok(), "{:?}", r.failures);
        assert_eq!(r.checked, 3);
        assert_eq!(r.records[2].exact, Some(3));
        assert_eq!(r.traces, 12);
    }

    #[test]
    fn ensemble_is_deterministic() {
        let a = random_ensemble(20, 30, 9).unwrap();
        let b = random_ensemble(20, 30, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|f| (1..=30).contains(&f.order())));
    }

    #[test]
    fn tk_small() {
        for (k, cap) in [(1, 5), (2, 8)] {
            let (rec, fails) = check_tk_upper_bound(k, true).unwrap();
            assert!(fails.is_empty(), "{fails:?}");
            assert!(rec.exact.unwrap() <= cap);
        }
    }
}
