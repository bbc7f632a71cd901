//! Immutable undirected simple graph in compressed adjacency form.
//!
//! Nodes carry dense internal ids `0..n` assigned in order of first
//! appearance; the external ids read from files are kept in a bijective map
//! and used for every output. Edges are stored once per endpoint in sorted
//! neighbor lists, and the canonical edge order is `(u, v)` with `u < v`
//! sorted lexicographically on internal ids.

mod io;
mod spectral;

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

pub use io::{
    parse_community_file, parse_edge_list, parse_gml_subset, parse_label_file, write_edge_list,
    write_label_file,
};
pub use spectral::{cheeger_constant, diameter, spectral_gap};

/// Internal node id.
pub type NodeId = usize;

/// External id as it appears in input files.
pub type ExternalId = u64;

/// Counts of input pairs discarded while building a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub self_loops: usize,
    pub duplicates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    edges: Vec<(u32, u32)>,
    external: Vec<ExternalId>,
    internal: HashMap<ExternalId, NodeId>,
}

impl Graph {
    /// Builds a graph from external id pairs. Self-loops and repeated edges
    /// (in either orientation) are dropped and counted.
    pub fn from_edges(pairs: &[(ExternalId, ExternalId)]) -> Result<(Graph, BuildReport)> {
        if pairs.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut external = Vec::new();
        let mut internal = HashMap::new();
        let mut intern = |id: ExternalId| -> u32 {
            *internal.entry(id).or_insert_with(|| {
                external.push(id);
                external.len() - 1
            }) as u32
        };
        let mut internal_pairs = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            let (a, b) = (intern(a), intern(b));
            internal_pairs.push((a, b));
        }
        let (g, report) = Self::assemble(external, internal_pairs);
        Ok((g, report))
    }

    /// Builds a graph over an explicit node list (external ids, in internal
    /// order) so that nodes without edges are kept. Edge endpoints must be
    /// listed nodes.
    pub fn from_nodes_and_edges(
        nodes: &[ExternalId],
        pairs: &[(ExternalId, ExternalId)],
    ) -> Result<(Graph, BuildReport)> {
        if nodes.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, &id) in nodes.iter().enumerate() {
            if index.insert(id, i as u32).is_some() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("duplicate node id {id}"),
                });
            }
        }
        let mut internal_pairs = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            let lookup = |id: ExternalId| {
                index.get(&id).copied().ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("edge references unknown node {id}"),
                })
            };
            internal_pairs.push((lookup(a)?, lookup(b)?));
        }
        Ok(Self::assemble(nodes.to_vec(), internal_pairs))
    }

    /// Graph on nodes `0..n` whose external ids equal their internal ids.
    pub fn with_node_count(n: usize, pairs: &[(NodeId, NodeId)]) -> Result<Graph> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut internal_pairs = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            if a >= n {
                return Err(Error::NodeOutOfRange(a));
            }
            if b >= n {
                return Err(Error::NodeOutOfRange(b));
            }
            internal_pairs.push((a as u32, b as u32));
        }
        let external = (0..n as u64).collect();
        Ok(Self::assemble(external, internal_pairs).0)
    }

    fn assemble(external: Vec<ExternalId>, pairs: Vec<(u32, u32)>) -> (Graph, BuildReport) {
        let n = external.len();
        let mut report = BuildReport::default();
        let mut edges: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            if a == b {
                report.self_loops += 1;
            } else {
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        report.duplicates = before - edges.len();

        let mut degree = vec![0usize; n];
        for &(a, b) in &edges {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        // Two passes over the sorted edges: smaller neighbors first, then
        // larger ones, which leaves every list ascending.
        for &(a, b) in &edges {
            targets[cursor[b as usize]] = a;
            cursor[b as usize] += 1;
        }
        for &(a, b) in &edges {
            targets[cursor[a as usize]] = b;
            cursor[a as usize] += 1;
        }
        let internal = external
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect();
        (
            Graph {
                offsets,
                targets,
                edges,
                external,
                internal,
            },
            report,
        )
    }

    pub fn node_count(&self) -> usize {
        self.external.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` internal pairs with `u < v`, lexicographically sorted.
    pub fn canonical_edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Canonical edges translated to external ids (same order).
    pub fn external_edges(&self) -> Vec<(ExternalId, ExternalId)> {
        self.edges
            .iter()
            .map(|&(u, v)| (self.external[u as usize], self.external[v as usize]))
            .collect()
    }

    pub fn external_id(&self, node: NodeId) -> ExternalId {
        self.external[node]
    }

    pub fn external_ids(&self) -> &[ExternalId] {
        &self.external
    }

    pub fn internal_id(&self, external: ExternalId) -> Option<NodeId> {
        self.internal.get(&external).copied()
    }

    fn check(&self, node: NodeId) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange(node))
        }
    }

    pub fn degree(&self, node: NodeId) -> Result<usize> {
        self.check(node)?;
        Ok(self.deg(node))
    }

    pub fn neighbors(&self, node: NodeId) -> Result<&[u32]> {
        self.check(node)?;
        Ok(self.adj(node))
    }

    /// Number of shared neighbors of `a` and `b`.
    pub fn common_neighbor_count(&self, a: NodeId, b: NodeId) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.common(a, b))
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        a < self.node_count()
            && b < self.node_count()
            && self.adj(a).binary_search(&(b as u32)).is_ok()
    }

    pub(crate) fn require_edge(&self, a: NodeId, b: NodeId) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        if self.has_edge(a, b) {
            Ok(())
        } else {
            Err(Error::NotAnEdge(a, b))
        }
    }

    #[inline]
    pub(crate) fn deg(&self, node: NodeId) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    #[inline]
    pub(crate) fn adj(&self, node: NodeId) -> &[u32] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    #[inline]
    pub(crate) fn common(&self, a: NodeId, b: NodeId) -> usize {
        sorted_intersection_count(self.adj(a), self.adj(b))
    }

    /// Hop distances from `source`, optionally cut off at `max_depth`.
    /// Unreached nodes are absent.
    pub fn bfs_distances(
        &self,
        source: NodeId,
        max_depth: Option<usize>,
    ) -> Result<HashMap<NodeId, usize>> {
        self.check(source)?;
        let dist = self.bfs_dense(source, max_depth);
        Ok(dist
            .into_iter()
            .enumerate()
            .filter(|(_, d)| *d != usize::MAX)
            .collect())
    }

    /// BFS into a dense vector; `usize::MAX` marks unreached nodes.
    pub(crate) fn bfs_dense(&self, source: NodeId, max_depth: Option<usize>) -> Vec<usize> {
        let limit = max_depth.unwrap_or(usize::MAX);
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            let d = dist[x];
            if d == limit {
                continue;
            }
            for &y in self.adj(x) {
                let y = y as usize;
                if dist[y] == usize::MAX {
                    dist[y] = d + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Component labels numbered in order of each component's smallest node.
    pub fn connected_components(&self) -> Partition {
        let n = self.node_count();
        let mut labels = vec![u64::MAX; n];
        let mut next = 0u64;
        let mut stack = Vec::new();
        for start in 0..n {
            if labels[start] != u64::MAX {
                continue;
            }
            labels[start] = next;
            stack.push(start);
            while let Some(x) = stack.pop() {
                for &y in self.adj(x) {
                    if labels[y as usize] == u64::MAX {
                        labels[y as usize] = next;
                        stack.push(y as usize);
                    }
                }
            }
            next += 1;
        }
        Partition::new(labels)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().community_count() <= 1
    }

    /// Same node set, keeping only edges for which `keep(edge_index, u, v)`
    /// holds. `edge_index` is the position in canonical order.
    pub fn retain_edges<F>(&self, mut keep: F) -> Graph
    where
        F: FnMut(usize, NodeId, NodeId) -> bool,
    {
        let kept: Vec<(u32, u32)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, &(u, v))| keep(*i, u as usize, v as usize))
            .map(|(_, &e)| e)
            .collect();
        Self::assemble(self.external.clone(), kept).0
    }

    /// Same node set restricted to the given edges (internal ids, any
    /// orientation). Pairs that are not edges of `self` are ignored.
    pub fn remove_edges_except(&self, keep: &[(NodeId, NodeId)]) -> Graph {
        let mut set: Vec<(u32, u32)> = keep
            .iter()
            .map(|&(a, b)| (a.min(b) as u32, a.max(b) as u32))
            .collect();
        set.sort_unstable();
        self.retain_edges(|_, u, v| set.binary_search(&(u as u32, v as u32)).is_ok())
    }
}

/// Size of the intersection of two ascending lists.
#[inline]
pub fn sorted_intersection_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Disjoint community labels, one per internal node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<u64>,
}

impl Partition {
    pub fn new(labels: Vec<u64>) -> Self {
        Partition { labels }
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, node: NodeId) -> u64 {
        self.labels[node]
    }

    pub fn community_count(&self) -> usize {
        let mut l = self.labels.clone();
        l.sort_unstable();
        l.dedup();
        l.len()
    }

    /// Labels rewritten to `0..k` in order of first appearance.
    pub fn normalized(&self) -> Partition {
        let mut map = HashMap::new();
        let labels = self
            .labels
            .iter()
            .map(|l| {
                let next = map.len() as u64;
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Partition { labels }
    }

    /// Same grouping of nodes, ignoring label names.
    pub fn equivalent(&self, other: &Partition) -> bool {
        self.len() == other.len() && self.normalized() == other.normalized()
    }

    /// Node sets of each community, ordered by normalized label.
    pub fn to_cover(&self) -> Vec<Vec<NodeId>> {
        let norm = self.normalized();
        let mut sets = vec![Vec::new(); norm.community_count()];
        for (node, &l) in norm.labels.iter().enumerate() {
            sets[l as usize].push(node);
        }
        sets
    }
}

/// Possibly overlapping communities over external node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    communities: Vec<Vec<ExternalId>>,
}

impl Cover {
    /// Each community is sorted and deduplicated; empty sets are rejected.
    pub fn new(communities: Vec<Vec<ExternalId>>) -> Result<Self> {
        let mut out = Vec::with_capacity(communities.len());
        for mut c in communities {
            if c.is_empty() {
                return Err(Error::EmptySet);
            }
            c.sort_unstable();
            c.dedup();
            out.push(c);
        }
        Ok(Cover { communities: out })
    }

    pub fn communities(&self) -> &[Vec<ExternalId>] {
        &self.communities
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    /// Cover built from a partition of `g`, in external ids.
    pub fn from_partition(g: &Graph, p: &Partition) -> Cover {
        let communities = p
            .to_cover()
            .into_iter()
            .map(|set| set.into_iter().map(|n| g.external_id(n)).collect())
            .collect();
        Cover::new(communities).expect("partition communities are non-empty")
    }

    /// Checks every id against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for c in &self.communities {
            for &id in c {
                if g.internal_id(id).is_none() {
                    return Err(Error::NodeSetMismatch(format!(
                        "community member {id} is not a node of the graph"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(pairs: &[(u64, u64)]) -> Graph {
        Graph::from_edges(pairs).unwrap().0
    }

    #[test]
    fn build_drops_loops_and_duplicates() {
        let (graph, report) = Graph::from_edges(&[(0, 1), (1, 0), (1, 1), (1, 2)]).unwrap();
        assert_eq!(graph.node_count(), 3);
        assert_eq!(graph.edge_count(), 2);
        assert_eq!(graph.canonical_edges(), &[(0, 1), (1, 2)]);
        assert_eq!(report, BuildReport { self_loops: 1, duplicates: 1 });
    }

    #[test]
    fn build_remaps_in_first_appearance_order() {
        let graph = g(&[(5, 9)]);
        assert_eq!(graph.node_count(), 2);
        assert_eq!(graph.internal_id(5), Some(0));
        assert_eq!(graph.internal_id(9), Some(1));
        assert_eq!(graph.external_id(1), 9);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(Graph::from_edges(&[]), Err(Error::EmptyGraph)));
    }

    #[test]
    fn triangle_degrees() {
        let t = g(&[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(t.edge_count(), 3);
        for i in 0..3 {
            assert_eq!(t.degree(i).unwrap(), 2);
        }
        assert_eq!(t.common_neighbor_count(0, 1).unwrap(), 1);
    }

    #[test]
    fn path_and_star_queries() {
        let p = g(&[(0, 1), (1, 2)]);
        assert_eq!(p.common_neighbor_count(0, 1).unwrap(), 0);
        assert_eq!(p.neighbors(1).unwrap(), &[0, 2]);
        let s = g(&[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(s.degree(0).unwrap(), 4);
        assert_eq!(s.degree(1).unwrap(), 1);
        assert!(matches!(s.degree(7), Err(Error::NodeOutOfRange(7))));
    }

    #[test]
    fn bfs_depth_limit_and_reachability() {
        let p = g(&[(0, 1), (1, 2)]);
        let all = p.bfs_distances(0, None).unwrap();
        assert_eq!(all, HashMap::from([(0, 0), (1, 1), (2, 2)]));
        let near = p.bfs_distances(0, Some(1)).unwrap();
        assert_eq!(near, HashMap::from([(0, 0), (1, 1)]));
        let two = g(&[(0, 1), (2, 3)]);
        let d = two.bfs_distances(0, None).unwrap();
        assert!(!d.contains_key(&2) && !d.contains_key(&3));
    }

    #[test]
    fn components() {
        let two = g(&[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        assert_eq!(two.connected_components().community_count(), 2);
        assert_eq!(two.connected_components().labels(), &[0, 0, 0, 1, 1, 1]);
        let tri = g(&[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(tri.connected_components().community_count(), 1);
        let bare = Graph::with_node_count(3, &[]).unwrap();
        assert_eq!(bare.connected_components().community_count(), 3);
    }

    #[test]
    fn edge_removal_keeps_nodes() {
        let t = g(&[(0, 1), (0, 2), (1, 2)]);
        let one = t.remove_edges_except(&[(1, 0)]);
        assert_eq!((one.node_count(), one.edge_count()), (3, 1));
        let all = t.retain_edges(|_, _, _| true);
        assert_eq!(all.canonical_edges(), t.canonical_edges());
        let none = t.retain_edges(|_, _, _| false);
        assert_eq!((none.node_count(), none.edge_count()), (3, 0));
        assert_eq!(t.edge_count(), 3);
    }

    #[test]
    fn adjacency_sorted_after_assembly() {
        let graph = g(&[(3, 0), (0, 2), (2, 1), (1, 3), (0, 1)]);
        for v in 0..graph.node_count() {
            let a = graph.adj(v);
            assert!(a.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
