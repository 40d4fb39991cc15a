//! Exact independence parameters of residual forests.
//!
//! Every finished game picks a maximal independent set, so its length lies
//! between the independent domination number and the independence number.

use crate::bitset::VertexSet;
use crate::state::GameState;

const INF: u32 = u32::MAX / 4;

/// Size of a largest independent set: take leaves greedily.
pub fn independence_number(state: &GameState<'_>) -> u32 {
    let mut alive = state.alive();
    let mut count = 0;
    while let Some(v) = alive
        .iter()
        .find(|&v| state.forest().neighbor_set(v).intersection(&alive).len() <= 1)
    {
        count += 1;
        alive = alive.difference(state.forest().neighbor_set(v));
        alive.remove(v);
    }
    count
}

/// Size of a smallest maximal independent set, by tree dynamic programming.
pub fn independent_domination_number(state: &GameState<'_>) -> u32 {
    let mut todo = state.alive();
    let mut total = 0;
    while let Some(root) = todo.first() {
        let (order, parent) = bfs(state, root);
        let n = state.forest().order();
        // in: v chosen; dom: v unchosen with a chosen child; open: v unchosen
        // and left for its parent to dominate.
        let (mut inn, mut dom, mut open) = (vec![0u32; n], vec![0u32; n], vec![0u32; n]);
        for &v in order.iter().rev() {
            let (mut a, mut c, mut b) = (1u32, 0u32, 0u32);
            let mut extra = INF;
            let mut has_child = false;
            for w in state.neighbors(v).iter().filter(|&w| parent[w] == v && w != v) {
                has_child = true;
                a = a.saturating_add(dom[w].min(open[w]));
                c = c.saturating_add(dom[w]);
                let best = inn[w].min(dom[w]);
                b = b.saturating_add(best);
                extra = extra.min(inn[w] - best);
            }
            inn[v] = a.min(INF);
            open[v] = c.min(INF);
            dom[v] = if has_child { b.saturating_add(extra).min(INF) } else { INF };
        }
        total += inn[root].min(dom[root]);
        for &v in &order {
            todo.remove(v);
        }
    }
    total
}

fn bfs(state: &GameState<'_>, root: usize) -> (Vec<usize>, Vec<usize>) {
    let mut parent = vec![usize::MAX; state.forest().order()];
    parent[root] = root;
    let mut order = vec![root];
    let mut seen = VertexSet::singleton(root);
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for w in state.neighbors(v).difference(&seen).iter() {
            seen.insert(w);
            parent[w] = v;
            order.push(w);
        }
        i += 1;
    }
    (order, parent)
}
