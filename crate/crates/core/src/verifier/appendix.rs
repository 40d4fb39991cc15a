//! Case table for the per-round bound `m_i <= 2*beta`.
//!
//! Every Diminisher move profile `(l, p)` falls into one of thirteen cases.
//! For each case the bound is evaluated twice in exact eighths: once with
//! the expressions exactly as written in the case analysis, and once
//! rebuilt from the witness guarantees (Sweller's candidate plus
//! Diminisher's move), using `k >= 0` for any move that is not an isolated
//! vertex. Both must stay at or below `26 = 8 * 2 * beta`.

use serde::Serialize;

pub use super::rounds::{ROUND_BOUND8, TAIL_BOUND8};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Case {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
    XI,
    XII,
    XIII,
}

pub const ALL_CASES: [Case; 13] = [
    Case::I,
    Case::II,
    Case::III,
    Case::IV,
    Case::V,
    Case::VI,
    Case::VII,
    Case::VIII,
    Case::IX,
    Case::X,
    Case::XI,
    Case::XII,
    Case::XIII,
];

fn m8(v: i64, e: i64, k: i64) -> i64 {
    8 * v - 3 * e - 5 * k
}

impl Case {
    /// Side condition of the case.
    pub fn applies(self, l: i64, p: i64) -> bool {
        match self {
            Case::I => p > l && l >= 4,
            Case::II => p == l && l >= 5,
            Case::III => p == l - 1 && l >= 3,
            Case::IV => p <= l - 2 && l >= 4,
            Case::V => 5 * l - 3 * p <= 4 && l >= 1,
            Case::VI => (l, p) == (2, 0),
            Case::VII => (l, p) == (3, 0),
            Case::VIII => (l, p) == (3, 1),
            Case::IX => (l, p) == (2, 1),
            Case::X => (l, p) == (1, 0),
            Case::XI => (l, p) == (4, 4),
            Case::XII => (l, p) == (3, 3),
            Case::XIII => (l, p) == (0, 0),
        }
    }

    /// The `q` used in the case; the worst one allowed, `floor(p / l)`.
    pub fn q(self, l: i64, p: i64) -> Option<i64> {
        match self {
            Case::I | Case::II | Case::III | Case::IV => Some(p / l),
            _ => None,
        }
    }

    /// Per-outcome upper bounds on `8 m_i`, as written.
    pub fn printed(self, l: i64, p: i64) -> Vec<i64> {
        let q = self.q(l, p).unwrap_or(0);
        match self {
            Case::I | Case::II | Case::III => vec![
                8 * (q + 2 + l + 1) - 3 * (q + l + l + p),
                8 * (q + 3 + l + 1) - 3 * (q + l + 2 + l + p),
            ],
            Case::IV => vec![
                -5 * (l - 2 - p) + 8 * (2 + l + 1) - 3 * (l + l + p),
                -5 * (l - 1 - p) + 8 * (3 + l + 1) - 3 * (l + 2 + l + p),
            ],
            Case::V => vec![8 * (2 + 2 * l) - 3 * (2 * l + 2 * p), 8 * (3 + 2 * l) - 3 * (2 * l + 2 * p + 2)],
            Case::VI => vec![23, 25],
            Case::VII => vec![25],
            Case::VIII => vec![22, 24],
            Case::IX => vec![25],
            Case::X => vec![26],
            Case::XI => vec![26],
            Case::XII => vec![24],
            Case::XIII => vec![21, 21],
        }
    }

    /// Per-outcome upper bounds on `8 m_i` rebuilt from the witness
    /// guarantees `(v, e, k)` of Sweller's candidate and Diminisher's
    /// `(1 + l, l + p, k_D)`.
    pub fn derived(self, l: i64, p: i64) -> Vec<i64> {
        let q = self.q(l, p).unwrap_or(0);
        // Diminisher's move deletes no isolated vertex unless it is one.
        let kd = if l == 0 { -1 } else { 0 };
        let (vd, ed) = (1 + l, l + p);
        let outcomes: Vec<(i64, i64, i64)> = match self {
            Case::I | Case::II | Case::III | Case::IV => vec![
                (q + 2, q + l, (l - p - 2).max(0)),
                (q + 3, q + l + 2, (l - p - 1).max(0)),
            ],
            Case::V => vec![(l + 1, p + l, 0), (l + 2, p + l + 2, 0)],
            Case::VI => vec![(2, 2, 1), (3, 4, 1)],
            Case::VII => vec![(2, 3, 1)],
            Case::VIII => vec![(2, 3, 1), (3, 5, 1)],
            Case::IX | Case::XI | Case::XII => vec![(2, 2, 0)],
            Case::X => vec![(2, 1, 0)],
            Case::XIII => vec![(2, 1, 0), (1, 0, -1)],
        };
        outcomes
            .into_iter()
            .map(|(vs, es, ks)| m8(vs + vd, es + ed, ks + kd))
            .collect()
    }

    /// The closing inequality in reduced integer form, which must be `>= 0`.
    pub fn reduced(self, l: i64, p: i64) -> Option<i64> {
        let q = self.q(l, p).unwrap_or(0);
        match self {
            Case::I | Case::II => Some(3 * p - 2 * l - 5 * q),
            Case::III => Some(3 * p - 2 * l),
            Case::IV => Some(3 * l - 2 * p - 8),
            Case::V => Some(4 - 5 * l + 3 * p),
            _ => None,
        }
    }

    /// Whether the written expressions omit a `k` term whose lemma bound
    /// would be negative (cases I to III with `l - p - 2 < 0`).
    pub fn drops_negative_k(self, l: i64, p: i64) -> bool {
        matches!(self, Case::I | Case::II | Case::III) && l - p - 2 < 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AppendixFailure {
    UncoveredPair {
        l: i64,
        p: i64,
    },
    CaseInequalityFails {
        case: Case,
        l: i64,
        p: i64,
        q: Option<i64>,
        form: &'static str,
        value: i64,
    },
    TailFails {
        outcome: &'static str,
        value: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TightPair {
    pub case: Case,
    pub l: i64,
    pub p: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub checked: usize,
    pub passed: usize,
    pub failures: Vec<AppendixFailure>,
    /// Pairs with `l = 0 < p`, which no position realizes.
    pub infeasible: usize,
    /// Pairs matched by each case, in case order.
    pub case_counts: Vec<(Case, usize)>,
    /// Pairs whose worst bound equals 26 exactly.
    pub tight: Vec<TightPair>,
    /// Pairs where a negative `k` lower bound is omitted from the written form.
    pub dropped_negative_k: usize,
    /// Tail bounds for an odd game: leaf and isolated vertex candidates.
    pub tail: Vec<(String, i64)>,
}

impl AppendixReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_appendix_grid(l_max: i64, p_max: i64) -> AppendixReport {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut passed = 0;
    let mut infeasible = 0;
    let mut counts = [0usize; 13];
    let mut tight = Vec::new();
    let mut dropped = 0;
    for l in 0..=l_max {
        for p in 0..=p_max {
            if l == 0 && p > 0 {
                infeasible += 1;
                continue;
            }
            checked += 1;
            let before = failures.len();
            let mut matched = false;
            for (i, case) in ALL_CASES.into_iter().enumerate() {
                if !case.applies(l, p) {
                    continue;
                }
                matched = true;
                counts[i] += 1;
                if case.drops_negative_k(l, p) {
                    dropped += 1;
                }
                let q = case.q(l, p);
                let forms = [("printed", case.printed(l, p)), ("derived", case.derived(l, p))];
                for (form, values) in forms {
                    for value in values {
                        if value > ROUND_BOUND8 {
                            failures.push(AppendixFailure::CaseInequalityFails {
                                case, l, p, q, form, value,
                            });
                        }
                    }
                }
                if let Some(r) = case.reduced(l, p) {
                    if r < 0 {
                        failures.push(AppendixFailure::CaseInequalityFails {
                            case, l, p, q, form: "reduced", value: r,
                        });
                    }
                }
                let worst = case.printed(l, p).into_iter().max().unwrap();
                if worst == ROUND_BOUND8 {
                    tight.push(TightPair { case, l, p });
                }
            }
            if !matched {
                failures.push(AppendixFailure::UncoveredPair { l, p });
            }
            if failures.len() == before {
                passed += 1;
            }
        }
    }
    let tail = vec![("leaf".to_string(), m8(2, 1, 0)), ("isolated".to_string(), m8(1, 0, -1))];
    for (name, value) in &tail {
        if *value > TAIL_BOUND8 {
            failures.push(AppendixFailure::TailFails {
                outcome: if name == "leaf" { "leaf" } else { "isolated" },
                value: *value,
            });
        }
    }
    AppendixReport {
        checked,
        passed,
        failures,
        infeasible,
        case_counts: ALL_CASES.into_iter().zip(counts).collect(),
        tight,
        dropped_negative_k: dropped,
        tail,
    }
}
