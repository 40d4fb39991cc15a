//! Existence of a good alternative Sweller move near Diminisher's reply.
//!
//! Given the position before Sweller's move, Sweller's move `ws` and
//! Diminisher's reply `wd`, each applicable clause asks for some vertex of
//! the earlier position whose `(v, e, k)` meets the clause. Clauses are
//! checked literally, including equalities on `v` and possibly negative
//! lower bounds on `k`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::par::{self, Jobs};
use crate::state::GameState;
use crate::strategies::{greedy_argmin, StrategyParams};

/// Shape of Diminisher's move in the position after Sweller's move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiminisherMoveProfile {
    /// Neighbors of `wd`.
    pub l: usize,
    /// Other edges with an endpoint among those neighbors.
    pub p: usize,
    /// `floor(p / l)` when `l >= 1`.
    pub q_cap: Option<usize>,
}

pub fn profile(post_s: &GameState<'_>, wd: usize) -> Result<DiminisherMoveProfile> {
    if !post_s.is_alive(wd) {
        return Err(Error::DeadVertex(wd));
    }
    let ys = post_s.neighbors(wd);
    let l = ys.len();
    let mut incident = 0;
    let mut internal2 = 0;
    for y in ys.iter() {
        let nb = post_s.neighbors(y);
        incident += nb.len() - 1;
        internal2 += nb.intersection(&ys).len();
    }
    let p = incident - internal2 / 2;
    Ok(DiminisherMoveProfile {
        l,
        p,
        q_cap: (l >= 1).then(|| p / l),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    /// Candidate at a lightly loaded neighbor of `wd`.
    KeyLemma,
    /// Candidate `wd` itself.
    CopyMove,
    /// Refinements for small `(l, p)`, numbered 1 to 6.
    SpecialCase(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaWitness {
    pub lemma: Lemma,
    pub candidate: usize,
    pub v: i64,
    pub e: i64,
    pub k: i64,
    /// Which alternative of the clause matched, 1 or 2.
    pub outcome: u8,
    pub q: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub profile: DiminisherMoveProfile,
    pub applicable: Vec<Lemma>,
    /// First witness (lowest candidate id) for each applicable clause.
    pub witnesses: Vec<LemmaWitness>,
    /// Applicable clauses without a witness.
    pub violations: Vec<Lemma>,
}

pub fn applicable_lemmas(l: usize, p: usize) -> Vec<Lemma> {
    let mut out = Vec::new();
    if l >= 1 {
        out.extend([Lemma::KeyLemma, Lemma::CopyMove]);
    }
    let special = match (l, p) {
        (2, 0) => Some(1),
        (3, 0) => Some(2),
        (3, 1) => Some(3),
        (2, 1) | (3, 3) | (4, 4) => Some(4),
        (1, 0) => Some(5),
        (0, 0) => Some(6),
        _ => None,
    };
    out.extend(special.map(Lemma::SpecialCase));
    out
}

/// Which alternative of `lemma` a candidate with `(v, e, k)` satisfies.
fn matches(lemma: Lemma, l: i64, p: i64, v: i64, e: i64, k: i64) -> Option<(u8, Option<i64>)> {
    match lemma {
        Lemma::KeyLemma => (0..=p / l).find_map(|q| {
            if v == q + 2 && e >= q + l && k >= l - p - 2 {
                Some((1, Some(q)))
            } else if v == q + 3 && e >= q + l + 2 && k >= l - p - 1 {
                Some((2, Some(q)))
            } else {
                None
            }
        }),
        Lemma::CopyMove => {
            if v == l + 1 && e >= p + l {
                Some((1, None))
            } else if v == l + 2 && e >= p + l + 2 {
                Some((2, None))
            } else {
                None
            }
        }
        Lemma::SpecialCase(c) => {
            let (first, second) = match c {
                1 => (v == 2 && e >= 2 && k >= 1, v == 3 && e >= 4 && k >= 1),
                2 => (v == 2 && e >= 3 && k >= 1, false),
                3 => (v == 2 && e >= 3 && k >= 1, v == 3 && e >= 5 && k >= 1),
                4 => (v == 2 && e >= 2, false),
                5 => (v == 2 && e >= 1, false),
                6 => (v == 2 && e >= 1, v == 1 && k == -1),
                _ => unreachable!("special cases are numbered 1 to 6"),
            };
            if first {
                Some((1, None))
            } else if second {
                Some((2, None))
            } else {
                None
            }
        }
    }
}

pub fn check_existence_lemmas(pre_s: &GameState<'_>, ws: usize, wd: usize) -> Result<LemmaCheck> {
    if !pre_s.is_alive(ws) {
        return Err(Error::PreconditionUnmet(format!("Sweller's move {ws} is not alive")));
    }
    let post_s = pre_s.successor(ws);
    if !post_s.is_alive(wd) {
        return Err(Error::PreconditionUnmet(format!(
            "Diminisher's move {wd} is not alive after {ws}"
        )));
    }
    let profile = profile(&post_s, wd)?;
    let (l, p) = (profile.l as i64, profile.p as i64);
    let applicable = applicable_lemmas(profile.l, profile.p);
    let deltas: Vec<(usize, i64, i64, i64)> = pre_s
        .alive()
        .iter()
        .map(|u| {
            let d = pre_s.delta_unchecked(u);
            (u, d.v as i64, d.e as i64, d.k as i64)
        })
        .collect();
    let mut witnesses = Vec::new();
    let mut violations = Vec::new();
    for &lemma in &applicable {
        let found = deltas.iter().find_map(|&(u, v, e, k)| {
            matches(lemma, l, p, v, e, k).map(|(outcome, q)| LemmaWitness {
                lemma,
                candidate: u,
                v,
                e,
                k,
                outcome,
                q,
            })
        });
        match found {
            Some(w) => witnesses.push(w),
            None => violations.push(lemma),
        }
    }
    Ok(LemmaCheck {
        profile,
        applicable,
        witnesses,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaFailure {
    pub instance: usize,
    pub edges: Vec<(usize, usize)>,
    pub n: usize,
    pub ws: usize,
    pub wd: usize,
    pub l: usize,
    pub p: usize,
    pub lemma: Lemma,
    /// Whether `ws` minimizes the greedy potential.
    pub greedy_ws: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaSweepReport {
    /// `(ws, wd)` pairs examined.
    pub checked: usize,
    pub passed: usize,
    /// Violations with a greedy-minimizing `ws`.
    pub failures: Vec<LemmaFailure>,
    /// Violations with a non-greedy `ws`.
    pub informational: Vec<LemmaFailure>,
    pub instances: usize,
    /// How often each clause applied, and how often it had a witness.
    pub clause_counts: Vec<ClauseCount>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseCount {
    pub lemma: Lemma,
    pub applicable: usize,
    pub witnessed: usize,
}

impl LemmaSweepReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn clause_index(lemma: Lemma) -> usize {
    match lemma {
        Lemma::KeyLemma => 0,
        Lemma::CopyMove => 1,
        Lemma::SpecialCase(c) => 1 + c as usize,
    }
}

/// Checks every `(ws, wd)` pair with each forest as the position before
/// Sweller's move.
pub fn sweep_lemmas(forests: &[Forest], jobs: Jobs) -> Result<LemmaSweepReport> {
    let indexed: Vec<(usize, &Forest)> = forests.iter().enumerate().collect();
    let per_instance = par::map(jobs, &indexed, |&(i, f)| -> Result<_> {
        let pre = GameState::new(f)?;
        let greedy = greedy_argmin(&pre, StrategyParams::default().weights());
        let mut pairs = 0;
        let mut clean = 0;
        let mut counts = [(0usize, 0usize); 8];
        let mut bad = Vec::new();
        for ws in pre.alive().iter() {
            let post = pre.successor(ws);
            for wd in post.alive().iter() {
                let check = check_existence_lemmas(&pre, ws, wd)?;
                pairs += 1;
                for lemma in &check.applicable {
                    counts[clause_index(*lemma)].0 += 1;
                }
                for w in &check.witnesses {
                    counts[clause_index(w.lemma)].1 += 1;
                }
                if check.violations.is_empty() {
                    clean += 1;
                }
                for lemma in check.violations {
                    bad.push(LemmaFailure {
                        instance: i,
                        edges: f.edges().to_vec(),
                        n: f.order(),
                        ws,
                        wd,
                        l: check.profile.l,
                        p: check.profile.p,
                        lemma,
                        greedy_ws: greedy.contains(&ws),
                    });
                }
            }
        }
        Ok((pairs, clean, counts, bad))
    });
    let mut report = LemmaSweepReport {
        checked: 0,
        passed: 0,
        failures: Vec::new(),
        informational: Vec::new(),
        instances: forests.len(),
        clause_counts: Vec::new(),
    };
    let mut totals = [(0usize, 0usize); 8];
    for r in per_instance {
        let (pairs, clean, counts, bad) = r?;
        report.checked += pairs;
        report.passed += clean;
        for (t, c) in totals.iter_mut().zip(counts) {
            t.0 += c.0;
            t.1 += c.1;
        }
        for f in bad {
            if f.greedy_ws {
                report.failures.push(f);
            } else {
                report.informational.push(f);
            }
        }
    }
    let lemmas = [Lemma::KeyLemma, Lemma::CopyMove]
        .into_iter()
        .chain((1..=6).map(Lemma::SpecialCase));
    report.clause_counts = lemmas
        .zip(totals)
        .map(|(lemma, (applicable, witnessed))| ClauseCount {
            lemma,
            applicable,
            witnessed,
        })
        .collect();
    Ok(report)
}
