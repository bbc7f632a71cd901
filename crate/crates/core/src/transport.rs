//! Exact integral transportation problems.
//!
//! Solves `min Σ c[i][j] f[i][j]` subject to `Σ_j f[i][j] = supply[i]`,
//! `Σ_i f[i][j] = demand[j]`, `f >= 0` with integer data, via primal-dual
//! min-cost flow: Dijkstra on reduced costs fixes node potentials, then a
//! Dinic max-flow saturates the zero reduced cost subgraph. With small
//! integer costs the number of phases is bounded by the number of distinct
//! shortest-path lengths, which keeps per-edge ORC work close to a handful of
//! max-flow passes.

const INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone, Copy)]
struct Arc {
    to: u32,
    cap: i64,
    cost: i64,
}

/// Reusable workspace. One solver per thread avoids reallocating buffers
/// for every edge.
#[derive(Debug, Default)]
pub struct TransportSolver {
    arcs: Vec<Arc>,
    head: Vec<u32>,
    next: Vec<u32>,
    potential: Vec<i64>,
    dist: Vec<i64>,
    done: Vec<bool>,
    level: Vec<u32>,
    iter: Vec<u32>,
    queue: Vec<u32>,
    peel: Peel,
}

/// Buffers for the leaf reduction in [`TransportSolver::max_weight`]. Rows
/// are nodes `0..a`, columns `a..a + b`.
#[derive(Debug, Default)]
struct Peel {
    residual: Vec<u64>,
    start: Vec<u32>,
    incident: Vec<u32>,
    live: Vec<bool>,
    degree: Vec<u32>,
    work: Vec<u32>,
    index: Vec<u32>,
    supply: Vec<u64>,
    demand: Vec<u64>,
    cells: Vec<(u32, u32, u32)>,
}

impl Peel {
    /// Saturates leaf cells that are at least as heavy as every other cell
    /// at their far end; some optimal plan always does the same. Leaves the
    /// remaining problem in `supply`, `demand` and `cells` and returns the
    /// weight already collected.
    fn reduce(&mut self, supply: &[u64], demand: &[u64], cells: &[(u32, u32, u32)]) -> u64 {
        let a = supply.len();
        let nodes = a + demand.len();
        let ends = |c: (u32, u32, u32)| (c.0 as usize, a + c.1 as usize);
        self.residual.clear();
        self.residual.extend_from_slice(supply);
        self.residual.extend_from_slice(demand);
        self.live.clear();
        self.live.extend(cells.iter().map(|&c| {
            let (i, j) = ends(c);
            c.2 > 0 && self.residual[i] > 0 && self.residual[j] > 0
        }));
        self.degree.clear();
        self.degree.resize(nodes, 0);
        self.start.clear();
        self.start.resize(nodes + 1, 0);
        for (k, &c) in cells.iter().enumerate() {
            if self.live[k] {
                let (i, j) = ends(c);
                self.degree[i] += 1;
                self.degree[j] += 1;
            }
        }
        for k in 0..nodes {
            self.start[k + 1] = self.start[k] + self.degree[k];
        }
        self.incident.clear();
        self.incident.resize(self.start[nodes] as usize, 0);
        self.index.clear();
        self.index.extend_from_slice(&self.start[..nodes]);
        for (k, &c) in cells.iter().enumerate() {
            if self.live[k] {
                let (i, j) = ends(c);
                for x in [i, j] {
                    self.incident[self.index[x] as usize] = k as u32;
                    self.index[x] += 1;
                }
            }
        }

        let mut gained = 0;
        self.work.clear();
        self.work.extend(0..nodes as u32);
        while let Some(k) = self.work.pop() {
            let k = k as usize;
            if self.degree[k] != 1 {
                continue;
            }
            let range = self.start[k] as usize..self.start[k + 1] as usize;
            let c = self.incident[range].iter().map(|&c| c as usize).find(|&c| self.live[c]).unwrap();
            let (i, j) = ends(cells[c]);
            let far = if i == k { j } else { i };
            let w = cells[c].2;
            let far_range = self.start[far] as usize..self.start[far + 1] as usize;
            let heaviest = self.incident[far_range.clone()]
                .iter()
                .filter(|&&d| self.live[d as usize])
                .map(|&d| cells[d as usize].2)
                .max()
                .unwrap();
            if w < heaviest {
                continue;
            }
            let x = self.residual[k].min(self.residual[far]);
            gained += w as u64 * x;
            self.residual[k] -= x;
            self.residual[far] -= x;
            // Either end saturated: the leaf cell is spent, and a full far
            // end retires all its cells.
            let far_full = self.residual[far] == 0;
            for d in far_range {
                let d = self.incident[d] as usize;
                if self.live[d] && (d == c || far_full) {
                    self.live[d] = false;
                    let (p, q) = ends(cells[d]);
                    self.degree[p] -= 1;
                    self.degree[q] -= 1;
                    let other = if p == far { q } else { p };
                    self.work.push(other as u32);
                }
            }
            // A lighter far end may let its other leaves qualify now.
            for d in self.start[far] as usize..self.start[far + 1] as usize {
                let d = self.incident[d] as usize;
                if self.live[d] {
                    let (p, q) = ends(cells[d]);
                    self.work.push(if p == far { q } else { p } as u32);
                }
            }
        }

        self.index.clear();
        self.index.resize(nodes, u32::MAX);
        self.supply.clear();
        self.demand.clear();
        self.cells.clear();
        for (k, &c) in cells.iter().enumerate() {
            if !self.live[k] {
                continue;
            }
            let (i, j) = ends(c);
            if self.index[i] == u32::MAX {
                self.index[i] = self.supply.len() as u32;
                self.supply.push(self.residual[i]);
            }
            if self.index[j] == u32::MAX {
                self.index[j] = self.demand.len() as u32;
                self.demand.push(self.residual[j]);
            }
            self.cells.push((self.index[i], self.index[j], c.2));
        }
        gained
    }
}

const NIL: u32 = u32::MAX;

impl TransportSolver {
    pub fn new() -> Self {
        Self::default()
    }

    fn reset(&mut self, nodes: usize) {
        self.arcs.clear();
        self.next.clear();
        self.head.clear();
        self.head.resize(nodes, NIL);
        self.potential.clear();
        self.potential.resize(nodes, 0);
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) {
        let idx = self.arcs.len() as u32;
        self.arcs.push(Arc {
            to: to as u32,
            cap,
            cost,
        });
        self.next.push(self.head[from]);
        self.head[from] = idx;
        self.arcs.push(Arc {
            to: from as u32,
            cap: 0,
            cost: -cost,
        });
        self.next.push(self.head[to]);
        self.head[to] = idx + 1;
    }

    /// Minimum total cost. `costs` is row-major `supply.len() × demand.len()`.
    ///
    /// Panics if the totals differ or the cost matrix has the wrong size.
    pub fn solve(&mut self, supply: &[u64], demand: &[u64], costs: &[u32]) -> u64 {
        let (a, b) = (supply.len(), demand.len());
        assert_eq!(costs.len(), a * b, "cost matrix shape");
        let total: u64 = supply.iter().sum();
        assert_eq!(total, demand.iter().sum::<u64>(), "unbalanced transport");
        if total == 0 {
            return 0;
        }
        let nodes = a + b + 2;
        let (source, sink) = (0, a + b + 1);
        self.reset(nodes);
        for (i, &s) in supply.iter().enumerate() {
            if s > 0 {
                self.add_arc(source, 1 + i, s as i64, 0);
            }
        }
        let first_transport = self.arcs.len();
        for (i, &s) in supply.iter().enumerate() {
            if s == 0 {
                continue;
            }
            for (j, &d) in demand.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                self.add_arc(1 + i, 1 + a + j, s.min(d) as i64, costs[i * b + j] as i64);
            }
        }
        let last_transport = self.arcs.len();
        for (j, &d) in demand.iter().enumerate() {
            if d > 0 {
                self.add_arc(1 + a + j, sink, d as i64, 0);
            }
        }

        let mut flow = 0i64;
        while flow < total as i64 {
            if !self.reprice(source, sink) {
                break;
            }
            flow += self.max_flow_admissible(source, sink);
        }
        assert_eq!(flow, total as i64, "transport problem is always feasible");

        let mut cost = 0u64;
        for k in (first_transport..last_transport).step_by(2) {
            // Flow on a forward arc equals the residual capacity of its twin.
            let sent = self.arcs[k + 1].cap;
            cost += (sent * self.arcs[k].cost) as u64;
        }
        cost
    }

    /// Largest total weight of a partial plan `f` with `Σ_j f[i][j] <= supply[i]`
    /// and `Σ_i f[i][j] <= demand[j]`, using only the listed `(row, column,
    /// weight)` cells.
    ///
    /// When every pair of a transport problem costs at most `c_max`, its
    /// optimum equals `c_max · total - max_weight` with weights `c_max - c`
    /// on the cheaper cells, so sparse cheap cells are all that is needed.
    pub fn max_weight(&mut self, supply: &[u64], demand: &[u64], cells: &[(u32, u32, u32)]) -> u64 {
        let mut peel = std::mem::take(&mut self.peel);
        let gained = peel.reduce(supply, demand, cells);
        let rest = if peel.cells.is_empty() {
            0
        } else {
            self.max_weight_flow(&peel.supply, &peel.demand, &peel.cells)
        };
        self.peel = peel;
        gained + rest
    }

    fn max_weight_flow(&mut self, supply: &[u64], demand: &[u64], cells: &[(u32, u32, u32)]) -> u64 {
        let (a, b) = (supply.len(), demand.len());
        let nodes = a + b + 2;
        let (source, sink) = (0, a + b + 1);
        self.reset(nodes);
        for (i, &s) in supply.iter().enumerate() {
            if s > 0 {
                self.add_arc(source, 1 + i, s as i64, 0);
            }
        }
        let first = self.arcs.len();
        for &(i, j, w) in cells {
            let (i, j) = (i as usize, j as usize);
            let cap = supply[i].min(demand[j]);
            if cap > 0 && w > 0 {
                self.add_arc(1 + i, 1 + a + j, cap as i64, -(w as i64));
            }
        }
        let last = self.arcs.len();
        for (j, &d) in demand.iter().enumerate() {
            if d > 0 {
                self.add_arc(1 + a + j, sink, d as i64, 0);
            }
        }
        // Few cheap cells per node: label-correcting passes with DFS on
        // tight arcs. Dense cells: the layered network gives exact initial
        // potentials, then Dijkstra and Dinic per path length. Either way
        // path lengths only grow, so stop at the first that saves nothing.
        if (last - first) / 2 <= 4 * (a + b) {
            while self.shortest_path_queue(source, sink) && self.dist[sink] < 0 {
                loop {
                    self.done.fill(false);
                    if self.augment_tight(source, sink, i64::MAX) == 0 {
                        break;
                    }
                }
            }
        } else {
            for k in (first..last).step_by(2) {
                let arc = self.arcs[k];
                let col = arc.to as usize;
                self.potential[col] = self.potential[col].min(arc.cost);
            }
            self.potential[sink] = (1 + a..=a + b).map(|c| self.potential[c]).min().unwrap_or(0);
            while self.potential[sink] < 0 {
                self.max_flow_admissible(source, sink);
                if !self.reprice(source, sink) {
                    break;
                }
            }
        }
        let mut weight = 0u64;
        for k in (first..last).step_by(2) {
            weight += (self.arcs[k + 1].cap * -self.arcs[k].cost) as u64;
        }
        weight
    }

    /// Label-correcting shortest paths from `source` over residual arcs.
    /// Returns whether `sink` is reachable.
    fn shortest_path_queue(&mut self, source: usize, sink: usize) -> bool {
        let n = self.head.len();
        self.dist.clear();
        self.dist.resize(n, INF);
        self.done.clear();
        self.done.resize(n, false);
        self.queue.clear();
        self.dist[source] = 0;
        self.queue.push(source as u32);
        self.done[source] = true;
        let mut qi = 0;
        while qi < self.queue.len() {
            let u = self.queue[qi] as usize;
            qi += 1;
            self.done[u] = false;
            let du = self.dist[u];
            let mut e = self.head[u];
            while e != NIL {
                let arc = self.arcs[e as usize];
                if arc.cap > 0 {
                    let v = arc.to as usize;
                    let cand = du + arc.cost;
                    if cand < self.dist[v] {
                        self.dist[v] = cand;
                        if !self.done[v] {
                            self.done[v] = true;
                            self.queue.push(v as u32);
                        }
                    }
                }
                e = self.next[e as usize];
            }
        }
        self.dist[sink] < INF
    }

    /// Multi-path DFS over arcs on shortest paths (`dist[v] = dist[u] + cost`),
    /// visiting each node at most once per round.
    fn augment_tight(&mut self, u: usize, sink: usize, limit: i64) -> i64 {
        if u == sink {
            return limit;
        }
        self.done[u] = true;
        let mut sent = 0;
        let mut e = self.head[u];
        while e != NIL && sent < limit {
            let arc = self.arcs[e as usize];
            let v = arc.to as usize;
            if arc.cap > 0 && !self.done[v] && self.dist[v] == self.dist[u] + arc.cost {
                let pushed = self.augment_tight(v, sink, (limit - sent).min(arc.cap));
                if pushed > 0 {
                    self.arcs[e as usize].cap -= pushed;
                    self.arcs[e as usize ^ 1].cap += pushed;
                    sent += pushed;
                }
            }
            e = self.next[e as usize];
        }
        sent
    }

    /// Dijkstra on reduced costs, then potential update. Returns false when
    /// the sink is unreachable.
    fn reprice(&mut self, source: usize, sink: usize) -> bool {
        let n = self.head.len();
        self.dist.clear();
        self.dist.resize(n, INF);
        self.done.clear();
        self.done.resize(n, false);
        self.dist[source] = 0;
        loop {
            let mut best = INF;
            let mut u = usize::MAX;
            for v in 0..n {
                if !self.done[v] && self.dist[v] < best {
                    best = self.dist[v];
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            self.done[u] = true;
            let mut e = self.head[u];
            while e != NIL {
                let arc = self.arcs[e as usize];
                if arc.cap > 0 {
                    let v = arc.to as usize;
                    let reduced = arc.cost + self.potential[u] - self.potential[v];
                    let cand = best + reduced;
                    if cand < self.dist[v] {
                        self.dist[v] = cand;
                    }
                }
                e = self.next[e as usize];
            }
        }
        let reach = self.dist[sink];
        if reach >= INF {
            return false;
        }
        for v in 0..n {
            self.potential[v] += self.dist[v].min(reach);
        }
        true
    }

    #[inline]
    fn admissible(&self, u: usize, e: usize) -> bool {
        let arc = self.arcs[e];
        arc.cap > 0 && arc.cost + self.potential[u] - self.potential[arc.to as usize] == 0
    }

    fn max_flow_admissible(&mut self, source: usize, sink: usize) -> i64 {
        let n = self.head.len();
        let mut total = 0;
        loop {
            // BFS levels over admissible residual arcs.
            self.level.clear();
            self.level.resize(n, NIL);
            self.queue.clear();
            self.level[source] = 0;
            self.queue.push(source as u32);
            let mut qi = 0;
            while qi < self.queue.len() {
                let u = self.queue[qi] as usize;
                qi += 1;
                let mut e = self.head[u];
                while e != NIL {
                    let v = self.arcs[e as usize].to as usize;
                    if self.level[v] == NIL && self.admissible(u, e as usize) {
                        self.level[v] = self.level[u] + 1;
                        self.queue.push(v as u32);
                    }
                    e = self.next[e as usize];
                }
            }
            if self.level[sink] == NIL {
                return total;
            }
            self.iter.clear();
            self.iter.extend_from_slice(&self.head);
            loop {
                let pushed = self.augment(source, sink, INF);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn augment(&mut self, u: usize, sink: usize, limit: i64) -> i64 {
        if u == sink {
            return limit;
        }
        while self.iter[u] != NIL {
            let e = self.iter[u] as usize;
            let v = self.arcs[e].to as usize;
            if self.level[v] == self.level[u] + 1 && self.admissible(u, e) {
                let pushed = self.augment(v, sink, limit.min(self.arcs[e].cap));
                if pushed > 0 {
                    self.arcs[e].cap -= pushed;
                    self.arcs[e ^ 1].cap += pushed;
                    return pushed;
                }
            }
            self.iter[u] = self.next[e];
        }
        0
    }
}

/// Convenience wrapper around a fresh [`TransportSolver`].
pub fn min_cost_transport(supply: &[u64], demand: &[u64], costs: &[u32]) -> u64 {
    TransportSolver::new().solve(supply, demand, costs)
}
