//! Independent reference implementations and random graph corpora shared by
//! the integration tests. Nothing here calls the code under test except to
//! build graphs.

#![allow(dead_code)]

use lrc_core::{Graph, Partition};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::with_node_count(n, edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            e.push((i, j));
        }
    }
    graph(n, &e)
}

pub fn path(n: usize) -> Graph {
    let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    graph(n, &e)
}

pub fn cycle(n: usize) -> Graph {
    let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    graph(n, &e)
}

/// Star with node 0 at the center.
pub fn star(leaves: usize) -> Graph {
    let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    graph(leaves + 1, &e)
}

pub fn erdos_renyi(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                e.push((i, j));
            }
        }
    }
    graph(n, &e)
}

/// Random graph with every degree at most `max_degree`: candidate pairs are
/// visited in random order and accepted while both ends have room.
pub fn bounded_degree(n: usize, max_degree: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    for k in (1..pairs.len()).rev() {
        let r = rng.random_range(0..=k);
        pairs.swap(k, r);
    }
    let mut deg = vec![0; n];
    let mut e = Vec::new();
    for (i, j) in pairs {
        if deg[i] < max_degree && deg[j] < max_degree && rng.random::<f64>() < p {
            deg[i] += 1;
            deg[j] += 1;
            e.push((i, j));
        }
    }
    graph(n, &e)
}

pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in g.canonical_edges() {
        a[u as usize][v as usize] = true;
        a[v as usize][u as usize] = true;
    }
    a
}

/// Floyd–Warshall hop distances; `usize::MAX` when unreachable.
pub fn all_pairs(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let inf = usize::MAX / 2;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(u, v) in g.canonical_edges() {
        d[u as usize][v as usize] = 1;
        d[v as usize][u as usize] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    for row in d.iter_mut() {
        for x in row.iter_mut() {
            if *x >= inf {
                *x = usize::MAX;
            }
        }
    }
    d
}

/// Minimum cost over every non-negative integer plan with the given
/// margins, by exhaustive enumeration. Row-major `costs`.
pub fn enumerate_transport(supply: &[u64], demand: &[u64], costs: &[u64]) -> u64 {
    fn go(
        cell: usize,
        b: usize,
        rows: &mut [u64],
        cols: &mut [u64],
        costs: &[u64],
        acc: u64,
        best: &mut u64,
    ) {
        if cell == rows.len() * b {
            if rows.iter().all(|&x| x == 0) && cols.iter().all(|&x| x == 0) {
                *best = (*best).min(acc);
            }
            return;
        }
        let (i, j) = (cell / b, cell % b);
        // The last cell of a row must take whatever the row has left.
        let hi = rows[i].min(cols[j]);
        let lo = if j == b - 1 { rows[i] } else { 0 };
        if lo > hi {
            return;
        }
        for f in lo..=hi {
            rows[i] -= f;
            cols[j] -= f;
            go(cell + 1, b, rows, cols, costs, acc + f * costs[cell], best);
            rows[i] += f;
            cols[j] += f;
        }
    }
    let mut best = u64::MAX;
    let mut rows = supply.to_vec();
    let mut cols = demand.to_vec();
    go(0, demand.len(), &mut rows, &mut cols, costs, 0, &mut best);
    best
}

/// W1 between uniform neighbor measures by plan enumeration, as the exact
/// fraction `(cost, deg(u)·deg(v))`.
pub fn w1_enumerated(g: &Graph, dist: &[Vec<usize>], u: usize, v: usize) -> (u64, u64) {
    let xs: Vec<usize> = g.neighbors(u).unwrap().iter().map(|&x| x as usize).collect();
    let ys: Vec<usize> = g.neighbors(v).unwrap().iter().map(|&y| y as usize).collect();
    let (a, b) = (xs.len() as u64, ys.len() as u64);
    let costs: Vec<u64> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| dist[x][y] as u64))
        .collect();
    let cost = enumerate_transport(&vec![b; xs.len()], &vec![a; ys.len()], &costs);
    (cost, a * b)
}

/// ARI from agreement counts over all unordered pairs of nodes.
pub fn ari_by_pairs(a: &[u64], b: &[u64]) -> f64 {
    let n = a.len();
    let (mut both, mut only_a, mut only_b, mut total) = (0f64, 0f64, 0f64, 0f64);
    for i in 0..n {
        for j in i + 1..n {
            let sa = a[i] == a[j];
            let sb = b[i] == b[j];
            total += 1.0;
            if sa && sb {
                both += 1.0;
            }
            if sa {
                only_a += 1.0;
            }
            if sb {
                only_b += 1.0;
            }
        }
    }
    let expected = only_a * only_b / total;
    let max = 0.5 * (only_a + only_b);
    (both - expected) / (max - expected)
}

pub fn random_labels(n: usize, k: u64, rng: &mut impl Rng) -> Partition {
    Partition::new((0..n).map(|_| rng.random_range(0..k)).collect())
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        let mut r = vec![0.0; v.len()];
        let mut k = 0;
        while k < idx.len() {
            let mut end = k;
            while end + 1 < idx.len() && v[idx[end + 1]] == v[idx[k]] {
                end += 1;
            }
            let avg = (k + end) as f64 / 2.0 + 1.0;
            for &i in &idx[k..=end] {
                r[i] = avg;
            }
            k = end + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..x.len() {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx).powi(2);
        syy += (ry[i] - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}
