//! Named forest families and test ensembles.
//!
//! Seeded generators draw from `ChaCha8Rng::seed_from_u64(seed)`, so a seed
//! produces the same forest on every platform.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::canon::iso_code;
use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::state::GameState;

/// Largest order accepted by [`enumerate_trees`].
pub const ENUMERATION_CAP: usize = 14;

pub fn path(n: usize) -> Forest {
    Forest::new(n, (1..n).map(|i| (i - 1, i)).collect()).expect("paths are forests")
}

/// A center (vertex 0) with `k` three-vertex legs; leg `i` is
/// `center - 3i+1 - 3i+2 - 3i+3`.
pub fn spider_sk(k: usize) -> Forest {
    let mut edges = Vec::with_capacity(3 * k);
    for i in 0..k {
        let a = 1 + 3 * i;
        edges.extend([(0, a), (a, a + 1), (a + 1, a + 2)]);
    }
    Forest::new(3 * k + 1, edges).expect("spiders are trees")
}

/// One three-vertex leg of `T_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Leg {
    /// Which copy of `S_k` the leg hangs from, 0 or 1.
    pub copy: usize,
    pub attach: usize,
    pub middle: usize,
    pub tip: usize,
}

/// Vertex roles in `T_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TkLayout {
    pub k: usize,
    pub centers: [usize; 2],
    pub legs: Vec<Leg>,
}

impl TkLayout {
    pub fn order(&self) -> usize {
        2 * (3 * self.k + 1)
    }

    /// Index (0 or 1) of the copy whose center is `v`.
    pub fn center_copy(&self, v: usize) -> Option<usize> {
        self.centers.iter().position(|&c| c == v)
    }

    /// Copy containing vertex `v`.
    pub fn copy_of(&self, v: usize) -> Option<usize> {
        self.center_copy(v).or_else(|| {
            self.legs
                .iter()
                .find(|l| l.attach == v || l.middle == v || l.tip == v)
                .map(|l| l.copy)
        })
    }

    /// Checks that `forest` has exactly the edges this layout describes.
    pub fn check(&self, forest: &Forest) -> Result<()> {
        let mismatch = |m: &str| Err(Error::LayoutMismatch(m.to_string()));
        if forest.order() != self.order() || forest.edge_count() != self.order() - 1 {
            return mismatch("order or size differs from 2(3k+1)");
        }
        let adj = |a: usize, b: usize| forest.adjacency(a).binary_search(&b).is_ok();
        if !adj(self.centers[0], self.centers[1]) {
            return mismatch("centers are not adjacent");
        }
        for leg in &self.legs {
            let c = self.centers[leg.copy];
            if !(adj(c, leg.attach) && adj(leg.attach, leg.middle) && adj(leg.middle, leg.tip)) {
                return mismatch("leg is not a path hanging from its center");
            }
        }
        Ok(())
    }

    /// Recovers the layout of a forest isomorphic to `T_k` under any labelling.
    pub fn recognize(forest: &Forest) -> Result<TkLayout> {
        let n = forest.order();
        let fail = || Error::LayoutMismatch("forest is not a T_k tree".into());
        if n < 8 || !n.is_multiple_of(2) || !(n / 2 - 1).is_multiple_of(3) || forest.edge_count() != n - 1 {
            return Err(fail());
        }
        let k = (n / 2 - 1) / 3;
        'edges: for &(a, b) in forest.edges() {
            if forest.degree(a) != k + 1 || forest.degree(b) != k + 1 {
                continue;
            }
            let mut legs = Vec::with_capacity(2 * k);
            for (copy, (c, other)) in [(a, b), (b, a)].into_iter().enumerate() {
                for &attach in forest.adjacency(c).iter().filter(|&&x| x != other) {
                    let hang = |x: usize, from: usize| -> Option<usize> {
                        match forest.adjacency(x) {
                            [p, q] if *p == from => Some(*q),
                            [p, q] if *q == from => Some(*p),
                            _ => None,
                        }
                    };
                    let Some(middle) = hang(attach, c) else { continue 'edges };
                    let Some(tip) = hang(middle, attach) else { continue 'edges };
                    if forest.degree(tip) != 1 {
                        continue 'edges;
                    }
                    legs.push(Leg { copy, attach, middle, tip });
                }
            }
            let layout = TkLayout { k, centers: [a, b], legs };
            layout.check(forest)?;
            return Ok(layout);
        }
        Err(fail())
    }
}

/// Two copies of `S_k` joined at their centers. Copy 0 uses ids
/// `0..=3k` with center 0, copy 1 uses `3k+1..=6k+1` with center `3k+1`.
pub fn tree_tk(k: usize) -> (Forest, TkLayout) {
    let half = 3 * k + 1;
    let centers = [0, half];
    let mut edges = vec![(0, half)];
    let mut legs = Vec::with_capacity(2 * k);
    for (copy, &c) in centers.iter().enumerate() {
        for i in 0..k {
            let a = c + 1 + 3 * i;
            edges.extend([(c, a), (a, a + 1), (a + 1, a + 2)]);
            legs.push(Leg {
                copy,
                attach: a,
                middle: a + 1,
                tip: a + 2,
            });
        }
    }
    let forest = Forest::new(2 * half, edges).expect("T_k is a tree");
    (forest, TkLayout { k, centers, legs })
}

/// Decodes a Prüfer sequence over `0..n` into the edges of a labelled tree.
pub fn prufer_decode(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    debug_assert_eq!(seq.len() + 2, n.max(2));
    if n < 2 {
        return Vec::new();
    }
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = leaves.pop_first().expect("a leaf always exists");
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let u = leaves.pop_first().unwrap();
    let v = leaves.pop_first().unwrap();
    edges.push((u, v));
    edges
}

fn random_tree_with(n: usize, rng: &mut ChaCha8Rng) -> Forest {
    let seq: Vec<usize> = if n >= 2 {
        (0..n - 2).map(|_| rng.random_range(0..n)).collect()
    } else {
        Vec::new()
    };
    Forest::new(n, prufer_decode(n, &seq)).expect("Prüfer decoding yields a tree")
}

/// A uniformly random labelled tree on `n` vertices.
pub fn random_tree(n: usize, seed: u64) -> Forest {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree_with(n, &mut rng)
}

/// A random forest with exactly `c` components: a random composition of `n`
/// into `c` positive parts, then a uniform labelled tree on each part.
pub fn random_forest(n: usize, c: usize, seed: u64) -> Result<Forest> {
    if c == 0 || c > n {
        return Err(Error::InvalidComponentCount { n, c });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cuts: Vec<usize> = sample(&mut rng, n - 1, c - 1)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut forest = Forest::empty();
    let mut start = 0;
    for cut in cuts {
        forest = forest.disjoint_union(&random_tree_with(cut - start, &mut rng));
        start = cut;
    }
    Ok(forest)
}

/// One representative per isomorphism class of trees on `n` vertices.
///
/// Trees on `m + 1` vertices are grown from those on `m` by attaching a leaf
/// anywhere, then deduplicated by AHU code. Output order is deterministic.
pub fn enumerate_trees(n: usize) -> Result<Vec<Forest>> {
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            requested: n,
            cap: ENUMERATION_CAP,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut level = vec![path(1)];
    for m in 1..n {
        let mut seen = FxHashSet::default();
        let mut next = Vec::new();
        for tree in &level {
            for v in 0..m {
                let mut edges = tree.edges().to_vec();
                edges.push((v, m));
                let grown = Forest::new(m + 1, edges).expect("adding a leaf keeps a tree");
                let code = iso_code(&GameState::new(&grown).expect("within capacity"));
                if seen.insert(code) {
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    Ok(level)
}

/// One representative per isomorphism class of forests on `n` vertices,
/// built as multisets of trees.
pub fn enumerate_forests(n: usize) -> Result<Vec<Forest>> {
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            requested: n,
            cap: ENUMERATION_CAP,
        });
    }
    let mut pool = Vec::new();
    for m in 1..=n {
        pool.extend(enumerate_trees(m)?);
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(
        pool: &[Forest],
        from: usize,
        left: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Forest>,
    ) {
        if left == 0 {
            let f = chosen
                .iter()
                .fold(Forest::empty(), |acc, &i| acc.disjoint_union(&pool[i]));
            out.push(f);
            return;
        }
        for i in from..pool.len() {
            if pool[i].order() <= left {
                chosen.push(i);
                rec(pool, i, left - pool[i].order(), chosen, out);
                chosen.pop();
            }
        }
    }
    rec(&pool, 0, n, &mut chosen, &mut out);
    Ok(out)
}
