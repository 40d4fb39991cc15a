//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Runs sequentially so the runtime budgets are single-threaded figures.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::brute_value;
use compind::canon::canonical_key;
use compind::engine::{check_trace_conservation, play_game, replay};
use compind::generators::{enumerate_forests, path, random_forest};
use compind::strategies::{greedy_argmin, greedy_sweller, Optimal, RandomMove, Greedy};
use compind::verifier::appendix::{verify_appendix_grid, Case};
use compind::verifier::bounds::{
    forest_corpus, random_ensemble, sweep_lower_bound, sweep_tk, tree_corpus, BoundFailure,
    LowerBoundOptions, TkFailure,
};
use compind::verifier::lemmas::sweep_lemmas;
use compind::{solve, CanonMode, Forest, GameState, Jobs, Mover, SolveConfig, Solver, StrategyParams, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ENSEMBLE_SEED: u64 = 2024;

type Criterion = (u8, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
    /// Traces checked for conservation, and violations among them.
    traces: usize,
    conservation_failures: usize,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail, traces: 0, conservation_failures: 0 }
    }
}

fn within(t: Instant, budget: Duration) -> (bool, String) {
    let e = t.elapsed();
    (e <= budget, format!("{:.1}s of {}s", e.as_secs_f64(), budget.as_secs()))
}

fn count_bound_conservation(f: &[BoundFailure]) -> usize {
    f.iter().filter(|x| matches!(x, BoundFailure::ConservationViolated { .. })).count()
}

fn lower_bound_sweep(forests: &[Forest], budget: Duration, expect: usize) -> Outcome {
    let t = Instant::now();
    let r = sweep_lower_bound(forests, LowerBoundOptions::default()).unwrap();
    let (fast, time) = within(t, budget);
    let mut o = Outcome::new(
        r.is_ok() && r.checked == expect && fast,
        format!("{} instances (expected {expect}), {} failures, {time}", r.checked, r.failures.len()),
    );
    for f in r.failures.iter().take(3) {
        o.detail.push_str(&format!("; {f:?}"));
    }
    o.traces = r.traces;
    o.conservation_failures = count_bound_conservation(&r.failures);
    o
}

fn criterion_1() -> Outcome {
    // Trees on 1..=12 vertices: 1+1+1+2+3+6+11+23+47+106+235+551.
    lower_bound_sweep(&tree_corpus(12).unwrap(), Duration::from_secs(600), 987)
}

fn criterion_2() -> Outcome {
    // Forests on 1..=10 vertices: 1+2+3+6+10+20+37+76+153+329.
    lower_bound_sweep(&forest_corpus(10).unwrap(), Duration::from_secs(600), 637)
}

fn criterion_3() -> Outcome {
    let forests = random_ensemble(1000, 60, ENSEMBLE_SEED).unwrap();
    let opts = LowerBoundOptions { exact: false, ..Default::default() };
    let t = Instant::now();
    let r = sweep_lower_bound(&forests, opts).unwrap();
    let rounds = r
        .failures
        .iter()
        .filter(|f| matches!(f, BoundFailure::RoundBoundViolated { .. }))
        .count();
    let mut o = Outcome::new(
        r.is_ok() && r.checked == 1000,
        format!(
            "{} forests (max n {}), {} greedy traces, {} failures ({rounds} round), {:.1}s",
            r.checked,
            forests.iter().map(Forest::order).max().unwrap(),
            r.traces,
            r.failures.len(),
            t.elapsed().as_secs_f64()
        ),
    );
    o.traces = r.traces;
    o.conservation_failures = count_bound_conservation(&r.failures);
    o
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let ks: Vec<usize> = (1..=31).collect();
    let r = sweep_tk(&ks, 3, 100, Jobs::Sequential).unwrap();
    let (fast, time) = within(t, Duration::from_secs(1800));
    let exact: Vec<Option<u32>> = r.records[..3].iter().map(|x| x.exact).collect();
    let small_ok = exact
        .iter()
        .zip([5, 8, 10])
        .all(|(v, cap)| v.is_some_and(|v| v <= cap));
    let k31 = &r.records[30];
    let k31_ok = k31.k == 31
        && k31.n == 188
        && k31.certified.is_some_and(|c| c <= 80 && 7 * c < 3 * 188);
    let mut o = Outcome::new(
        r.is_ok() && small_ok && k31_ok && fast && r.checked == 100,
        format!(
            "exact I_s for k=1..3 {:?}; k=31 certified {:?} (formula {}, 3n/7 = 564/7); {} k values with closed form; {} failures; {time}",
            exact.iter().map(|v| v.unwrap_or(0)).collect::<Vec<_>>(),
            k31.certified,
            k31.formula,
            r.checked,
            r.failures.len()
        ),
    );
    o.traces = r.records.iter().map(|x| x.traces).sum();
    o.conservation_failures = r
        .failures
        .iter()
        .filter(|f| matches!(f, TkFailure::ConservationViolated { .. }))
        .count();
    o
}

fn criterion_5() -> Outcome {
    let solver = Solver::new(SolveConfig::default());
    let mut values = Vec::new();
    let mut bad = Vec::new();
    let mut traces = 0;
    let mut cons = 0;
    for n in 1..=30 {
        let p = path(n);
        let v = solver.value(&GameState::new(&p).unwrap(), Mover::Sweller).unwrap();
        values.push(v);
        // |v - 3n/7| <= 2, in sevenths.
        if (7 * v as i64 - 3 * n as i64).abs() > 14 {
            bad.push(format!("P_{n}: {v}"));
        }
        if n <= 14 && brute_value(&p, Mover::Sweller) != v {
            bad.push(format!("P_{n}: brute force disagrees"));
        }
        let t = play_game(&p, Mover::Sweller, &Optimal::new(Mover::Sweller), &Optimal::new(Mover::Diminisher)).unwrap();
        traces += 1;
        if t.len() != v as usize || !check_trace_conservation(&t).unwrap().is_ok() {
            cons += 1;
        }
    }
    let mut o = Outcome::new(bad.is_empty() && cons == 0, format!("I_s(P_1..30) = {values:?}; {bad:?}"));
    o.traces = traces;
    o.conservation_failures = cons;
    o
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let r = sweep_lemmas(&tree_corpus(9).unwrap(), Jobs::Sequential).unwrap();
    let (fast, time) = within(t, Duration::from_secs(900));
    let witnessed = r.clause_counts.iter().all(|c| c.applicable == c.witnessed);
    Outcome::new(
        r.is_ok() && r.informational.is_empty() && witnessed && fast,
        format!(
            "{} (wS, wD) pairs over {} trees, {} violations ({} with non-greedy wS), {time}",
            r.checked,
            r.instances,
            r.failures.len(),
            r.informational.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let r = verify_appendix_grid(200, 200);
    let (fast, time) = within(t, Duration::from_secs(1));
    let tight_x = r.tight.iter().any(|p| p.case == Case::X && (p.l, p.p) == (1, 0));
    let tight_xi = r.tight.iter().any(|p| p.case == Case::XI && (p.l, p.p) == (4, 4));
    Outcome::new(
        r.is_ok() && r.checked == 201 * 201 - 200 && tight_x && tight_xi && fast,
        format!(
            "{} pairs covered ({} infeasible skipped), {} failures, tight {:?}, {time}",
            r.checked,
            r.infeasible,
            r.failures.len(),
            r.tight.iter().map(|p| format!("{:?}({},{})", p.case, p.l, p.p)).collect::<Vec<_>>()
        ),
    )
}

fn criterion_9() -> Outcome {
    let iso = Solver::new(SolveConfig::default());
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 0..=10 {
        for f in enumerate_forests(n).unwrap() {
            let s = GameState::new(&f).unwrap();
            for mover in [Mover::Sweller, Mover::Diminisher] {
                let oracle = brute_value(&f, mover);
                let raw = solve(&s, mover, CanonMode::Raw).unwrap();
                let shared = iso.solve(&s, mover).unwrap();
                checked += 1;
                if raw.value != oracle || shared.value != oracle || raw.optimal_moves != shared.optimal_moves {
                    bad.push((f.edges().to_vec(), mover));
                }
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("{checked} (forest, first mover) pairs, raw and iso vs memo-free search, {} disagreements", bad.len()),
    )
}

fn criterion_10() -> Outcome {
    let mut problems = Vec::new();

    // Greedy argmin by full scan on every position of every forest n <= 8.
    let mut positions = 0;
    for n in 1..=8 {
        for f in enumerate_forests(n).unwrap() {
            for mask in 1u32..1 << n {
                let alive: VertexSet = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                let s = GameState::with_alive(&f, alive).unwrap();
                let m8: Vec<(usize, i64)> = alive
                    .iter()
                    .map(|u| {
                        let (v, e, k) = common::brute_delta(&f, mask, u);
                        (u, 8 * v as i64 - 3 * e as i64 - 5 * k as i64)
                    })
                    .collect();
                let best = m8.iter().map(|x| x.1).min().unwrap();
                let all: Vec<usize> = m8.iter().filter(|x| x.1 == best).map(|x| x.0).collect();
                let chosen = greedy_sweller(&s, &StrategyParams::default()).unwrap();
                if greedy_argmin(&s, StrategyParams::default().weights()) != all || chosen != all[0] {
                    problems.push(format!("argmin {:?} {mask:b}", f.edges()));
                }
                positions += 1;
            }
        }
    }

    // Canonical keys under 1000 seeded relabelings.
    let mut rng = ChaCha8Rng::seed_from_u64(ENSEMBLE_SEED);
    for i in 0..1000 {
        let n = rng.random_range(1..=60);
        let c = rng.random_range(1..=(n / 4).max(1));
        let f = random_forest(n, c, rng.random()).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        for j in (1..n).rev() {
            perm.swap(j, rng.random_range(0..=j));
        }
        let g = f.relabel(&perm).unwrap();
        let alive: VertexSet = (0..n).filter(|_| rng.random_bool(0.7)).collect();
        let moved: VertexSet = alive.iter().map(|v| perm[v]).collect();
        let a = canonical_key(&GameState::with_alive(&f, alive).unwrap(), CanonMode::Iso);
        let b = canonical_key(&GameState::with_alive(&g, moved).unwrap(), CanonMode::Iso);
        if a != b {
            problems.push(format!("relabeling {i} changed the key"));
        }
    }

    // Seeded runs replay exactly: the ensemble and games on it.
    let forests = random_ensemble(1000, 60, ENSEMBLE_SEED).unwrap();
    if forests != random_ensemble(1000, 60, ENSEMBLE_SEED).unwrap() {
        problems.push("ensemble regeneration differs".into());
    }
    let greedy = Greedy::default();
    for (i, f) in forests.iter().enumerate() {
        let random = RandomMove { seed: i as u64 };
        let a = play_game(f, Mover::Sweller, &greedy, &random).unwrap();
        let b = play_game(f, Mover::Sweller, &greedy, &random).unwrap();
        let c = replay(f, Mover::Sweller, &a.chosen()).unwrap();
        if a != b || a != c || a.to_json() != c.to_json() {
            problems.push(format!("game {i} did not replay"));
        }
    }

    Outcome::new(
        problems.is_empty(),
        format!(
            "{positions} positions scanned, 1000 relabelings, {} seeded games replayed, {} problems {:?}",
            forests.len(),
            problems.len(),
            problems.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();
    let runs: [Criterion; 9] = [
        (1, "lower bound, all trees n <= 12", criterion_1),
        (2, "lower bound, all forests n <= 10", criterion_2),
        (3, "greedy guarantee, 1000 random forests n <= 60", criterion_3),
        (4, "T_k upper bound, k = 1..31", criterion_4),
        (5, "path values n = 1..30", criterion_5),
        (6, "existence lemmas, all trees n <= 9", criterion_6),
        (7, "appendix grid [0,200]^2", criterion_7),
        (9, "oracle equivalence, all forests n <= 10", criterion_9),
        (10, "property suite", criterion_10),
    ];
    for (id, name, run) in runs {
        let o = run();
        print_line(id, name, &o);
        results.push((id, name, o));
    }
    let traces: usize = results.iter().map(|r| r.2.traces).sum();
    let broken: usize = results.iter().map(|r| r.2.conservation_failures).sum();
    let c8 = Outcome::new(
        traces > 0 && broken == 0,
        format!("{traces} traces from criteria 1-5 checked for vertex, edge and isolated-vertex sums; {broken} violations"),
    );
    print_line(8, "conservation on every trace", &c8);
    results.push((8, "conservation", c8));

    let failed = results.iter().filter(|r| !r.2.pass).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn print_line(id: u8, name: &str, o: &Outcome) {
    println!(
        "criterion {id:>2} [{}] {name}: {}",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
}
