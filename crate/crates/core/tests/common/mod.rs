//! Independent reference implementations. Nothing here uses the crate's
//! search, canonical forms or metric code: only the edge list of a forest.

#![allow(dead_code)]

use compind::{Forest, Mover};

/// Adjacency masks for forests with at most 32 vertices.
pub fn masks(f: &Forest) -> Vec<u32> {
    let mut adj = vec![0u32; f.order()];
    for &(u, v) in f.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

fn closed(adj: &[u32], u: usize) -> u32 {
    adj[u] | 1 << u
}

/// Game length under optimal play, by plain minimax with no memo.
pub fn brute_value(f: &Forest, mover: Mover) -> u32 {
    let adj = masks(f);
    let full = if f.order() == 32 { u32::MAX } else { (1u32 << f.order()) - 1 };
    minimax(&adj, full, mover == Mover::Sweller)
}

fn minimax(adj: &[u32], alive: u32, maximize: bool) -> u32 {
    if alive == 0 {
        return 0;
    }
    let mut best = if maximize { 0 } else { u32::MAX };
    let mut rest = alive;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let v = 1 + minimax(adj, alive & !closed(adj, u), !maximize);
        best = if maximize { best.max(v) } else { best.min(v) };
    }
    best
}

/// `(v, e, k)` of playing `u` when `alive` is in play, from first principles:
/// count vertices, induced edges and isolated vertices before and after.
pub fn brute_delta(f: &Forest, alive: u32, u: usize) -> (u32, u32, i32) {
    let adj = masks(f);
    let after = alive & !closed(&adj, u);
    let edges = |set: u32| {
        f.edges()
            .iter()
            .filter(|&&(a, b)| set >> a & 1 == 1 && set >> b & 1 == 1)
            .count() as u32
    };
    let isolated = |set: u32| {
        (0..f.order())
            .filter(|&x| set >> x & 1 == 1 && adj[x] & set == 0)
            .count() as i32
    };
    (
        (alive & !after).count_ones(),
        edges(alive) - edges(after),
        isolated(after) - isolated(alive),
    )
}

/// Number of edges of `f` inside `set`, and its component count.
pub fn shape(f: &Forest, set: u32) -> (usize, usize) {
    let adj = masks(f);
    let e = f
        .edges()
        .iter()
        .filter(|&&(a, b)| set >> a & 1 == 1 && set >> b & 1 == 1)
        .count();
    let mut seen = 0u32;
    let mut comps = 0;
    for s in 0..f.order() {
        if set >> s & 1 == 0 || seen >> s & 1 == 1 {
            continue;
        }
        comps += 1;
        let mut stack = vec![s];
        seen |= 1 << s;
        while let Some(x) = stack.pop() {
            let mut nb = adj[x] & set & !seen;
            while nb != 0 {
                let y = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                seen |= 1 << y;
                stack.push(y);
            }
        }
    }
    (e, comps)
}

/// Textbook Prüfer decoding, quadratic time.
pub fn prufer_tree(n: usize, seq: &[usize]) -> Forest {
    if n == 1 {
        return Forest::new(1, vec![]).unwrap();
    }
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::new();
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let ends: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((ends[0], ends[1]));
    Forest::new(n, edges).unwrap()
}

/// Whether two forests are isomorphic, by backtracking over vertex maps.
pub fn isomorphic(a: &Forest, b: &Forest) -> bool {
    let n = a.order();
    if n != b.order() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();
    let (aa, ab) = (masks(a), masks(b));
    let deg_a = da.clone();
    let deg_b = db.clone();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = 0u32;
    extend(0, n, &aa, &ab, &deg_a, &deg_b, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    v: usize,
    n: usize,
    aa: &[u32],
    ab: &[u32],
    da: &[usize],
    db: &[usize],
    map: &mut [usize],
    used: &mut u32,
) -> bool {
    if v == n {
        return true;
    }
    for w in 0..n {
        if *used >> w & 1 == 1 || da[v] != db[w] {
            continue;
        }
        // Adjacency to already mapped vertices must agree.
        let ok = (0..v).all(|x| (aa[v] >> x & 1) == (ab[w] >> map[x] & 1));
        if !ok {
            continue;
        }
        map[v] = w;
        *used |= 1 << w;
        if extend(v + 1, n, aa, ab, da, db, map, used) {
            return true;
        }
        *used &= !(1 << w);
    }
    false
}

/// Representatives of all trees on `n` vertices: every Prüfer sequence,
/// deduplicated by the backtracking isomorphism test.
pub fn trees_by_prufer(n: usize) -> Vec<Forest> {
    if n == 0 {
        return Vec::new();
    }
    if n <= 2 {
        return vec![prufer_tree(n, &[])];
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    let mut reps: Vec<Forest> = Vec::new();
    loop {
        let t = prufer_tree(n, &seq);
        if !reps.iter().any(|r| isomorphic(r, &t)) {
            reps.push(t);
        }
        let mut i = 0;
        loop {
            if i == len {
                return reps;
            }
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// Forest counts from tree counts by the multiset (Euler) transform.
/// `trees[m]` is the number of trees on `m` vertices, `trees[0] = 0`.
pub fn forest_counts(trees: &[u64]) -> Vec<u64> {
    let n = trees.len() - 1;
    let mut f = vec![0u64; n + 1];
    f[0] = 1;
    for m in 1..=n {
        for _ in 0..trees[m] {
            // Add one tree type of size m with unlimited multiplicity.
            for total in m..=n {
                f[total] += f[total - m];
            }
        }
    }
    f
}

/// Memo-free value of greedy Sweller (given as a move chooser) against a
/// minimizing Diminisher.
pub fn brute_restricted(f: &Forest, choose: &dyn Fn(u32) -> usize) -> u32 {
    let adj = masks(f);
    let full = (1u32 << f.order()) - 1;
    restricted(&adj, full, true, choose)
}

fn restricted(adj: &[u32], alive: u32, sweller: bool, choose: &dyn Fn(u32) -> usize) -> u32 {
    if alive == 0 {
        return 0;
    }
    if sweller {
        let u = choose(alive);
        return 1 + restricted(adj, alive & !closed(adj, u), false, choose);
    }
    let mut best = u32::MAX;
    let mut rest = alive;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        best = best.min(1 + restricted(adj, alive & !closed(adj, u), true, choose));
    }
    best
}

/// Lowest-id minimizer of `8v - 3e - 5k`, computed with [`brute_delta`].
pub fn brute_greedy(f: &Forest, alive: u32) -> usize {
    (0..f.order())
        .filter(|&u| alive >> u & 1 == 1)
        .min_by_key(|&u| {
            let (v, e, k) = brute_delta(f, alive, u);
            8 * v as i64 - 3 * e as i64 - 5 * k as i64
        })
        .unwrap()
}
