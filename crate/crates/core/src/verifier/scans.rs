//! Exhaustive scans over small trees: the smallest ratio `I_s / n` and the
//! Diminisher-start bound `I_d <= 3n/4`.

use serde::Serialize;

use crate::error::Result;
use crate::generators::enumerate_trees;
use crate::par::{self, Jobs};
use crate::solver::{SolveConfig, Solver};
use crate::state::{GameState, Mover};

/// A reduced fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    /// Exact comparison `self >= num/den`.
    pub fn at_least(&self, num: u64, den: u64) -> bool {
        self.num * den >= num * self.den
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioRow {
    pub n: usize,
    pub trees: usize,
    pub min_value: u32,
    pub ratio: Ratio,
    /// A tree attaining the minimum (first in enumeration order).
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioFailure {
    pub n: usize,
    pub ratio: Ratio,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    /// Trees solved.
    pub checked: usize,
    pub passed: usize,
    /// Trees whose ratio falls outside `[5/13, 1]`.
    pub failures: Vec<RatioFailure>,
    pub rows: Vec<RatioRow>,
}

type Solved = Vec<(u32, Vec<(usize, usize)>)>;

/// Game values of all trees of each order in `from..=max_n`.
fn solve_all(max_n: usize, from: usize, mover: Mover, jobs: Jobs) -> Result<Vec<(usize, Solved)>> {
    let solver = Solver::new(SolveConfig::default());
    let mut out = Vec::new();
    for n in from..=max_n {
        let trees = enumerate_trees(n)?;
        let values = par::map(jobs, &trees, |t| -> Result<_> {
            let v = solver.value(&GameState::new(t)?, mover)?;
            Ok((v, t.edges().to_vec()))
        });
        out.push((n, values.into_iter().collect::<Result<Vec<_>>>()?));
    }
    Ok(out)
}

/// Per order `n <= max_n`, the smallest `I_s(T) / n` over all trees.
pub fn scan_ratio(max_n: usize, jobs: Jobs) -> Result<RatioReport> {
    let mut report = RatioReport {
        checked: 0,
        passed: 0,
        failures: Vec::new(),
        rows: Vec::new(),
    };
    for (n, values) in solve_all(max_n, 1, Mover::Sweller, jobs)? {
        report.checked += values.len();
        let (min_value, edges) = values
            .iter()
            .min_by_key(|(v, _)| *v)
            .cloned()
            .expect("at least one tree per order");
        let ratio = Ratio::new(min_value as u64, n as u64);
        for (value, edges) in &values {
            let r = Ratio::new(*value as u64, n as u64);
            if r.at_least(5, 13) && r.num <= r.den {
                report.passed += 1;
            } else {
                report.failures.push(RatioFailure {
                    n,
                    ratio: r,
                    edges: edges.clone(),
                });
            }
        }
        report.rows.push(RatioRow {
            n,
            trees: values.len(),
            min_value,
            ratio,
            edges,
        });
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdCounterexample {
    pub n: usize,
    pub value: u32,
    pub bound: u32,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdRow {
    pub n: usize,
    pub trees: usize,
    pub bound: u32,
    pub max_value: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdReport {
    pub checked: usize,
    pub passed: usize,
    /// Trees with `I_d > floor(3n/4)`.
    pub failures: Vec<IdCounterexample>,
    pub rows: Vec<IdRow>,
}

/// Checks `I_d(T) <= floor(3n/4)` for every tree with `2 <= n <= max_n`.
pub fn scan_conjecture_id(max_n: usize, jobs: Jobs) -> Result<IdReport> {
    let mut report = IdReport {
        checked: 0,
        passed: 0,
        failures: Vec::new(),
        rows: Vec::new(),
    };
    for (n, values) in solve_all(max_n, 2, Mover::Diminisher, jobs)? {
        let bound = (3 * n / 4) as u32;
        report.checked += values.len();
        let mut max_value = 0;
        for (value, edges) in values.iter() {
            max_value = max_value.max(*value);
            if *value <= bound {
                report.passed += 1;
            } else {
                report.failures.push(IdCounterexample {
                    n,
                    value: *value,
                    bound,
                    edges: edges.clone(),
                });
            }
        }
        report.rows.push(IdRow {
            n,
            trees: values.len(),
            bound,
            max_value,
        });
    }
    Ok(report)
}
