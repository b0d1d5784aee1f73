//! Undirected multigraphs, paths, and the path searches used by best
//! response computation.
//!
//! Every search breaks ties deterministically: first by the objective, then
//! by path length, then by the lexicographic order of the edge-id sequence
//! read from the source.

use std::cmp::Ordering;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{ArenaError, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
}

impl Edge {
    /// The endpoint opposite `node`, if `node` is an endpoint.
    pub fn other(&self, node: NodeId) -> Option<NodeId> {
        if node == self.u {
            Some(self.v)
        } else if node == self.v {
            Some(self.u)
        } else {
            None
        }
    }
}

/// Undirected multigraph with edges identified by dense ids `0..|E|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
    // (edge, far endpoint), sorted by edge id
    adjacency: Vec<Vec<(EdgeId, NodeId)>>,
}

impl Graph {
    /// Builds a graph from `(id, u, v)` triples. Ids must be exactly
    /// `0..edges.len()` in any order; self-loops are rejected, parallel
    /// edges are allowed.
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = (EdgeId, NodeId, NodeId)>) -> Result<Self> {
        if node_count == 0 {
            return Err(ArenaError::InvalidGraph("graph needs at least one node".into()));
        }
        let mut list: Vec<Edge> = edges.into_iter().map(|(id, u, v)| Edge { id, u, v }).collect();
        list.sort_by_key(|e| e.id);
        for (expected, e) in list.iter().enumerate() {
            if e.id != expected {
                return Err(ArenaError::InvalidGraph(format!(
                    "edge ids must be unique and dense in [0, {}); found id {} at position {}",
                    list.len(),
                    e.id,
                    expected
                )));
            }
            if e.u >= node_count || e.v >= node_count {
                return Err(ArenaError::InvalidGraph(format!(
                    "edge {} has endpoint outside [0, {node_count})",
                    e.id
                )));
            }
            if e.u == e.v {
                return Err(ArenaError::InvalidGraph(format!("edge {} is a self-loop", e.id)));
            }
        }
        let mut adjacency = vec![Vec::new(); node_count];
        for e in &list {
            adjacency[e.u].push((e.id, e.v));
            adjacency[e.v].push((e.id, e.u));
        }
        Ok(Graph {
            node_count,
            edges: list,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(id)
    }

    /// Incident `(edge, far endpoint)` pairs in increasing edge id.
    pub fn incident(&self, node: NodeId) -> &[(EdgeId, NodeId)] {
        &self.adjacency[node]
    }

    fn check_node(&self, node: NodeId) -> Result<()> {
        if node < self.node_count {
            Ok(())
        } else {
            Err(ArenaError::Precondition(format!(
                "node {node} outside [0, {})",
                self.node_count
            )))
        }
    }
}

/// A sequence of edges walked from `source` to `destination`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    source: NodeId,
    destination: NodeId,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn new(source: NodeId, destination: NodeId, edges: Vec<EdgeId>) -> Self {
        Path {
            source,
            destination,
            edges,
        }
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn destination(&self) -> NodeId {
        self.destination
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, edge: EdgeId) -> bool {
        self.edges.contains(&edge)
    }

    /// Nodes visited by the walk, or `None` if some edge is not incident to
    /// the current node (or does not exist).
    pub fn nodes(&self, g: &Graph) -> Option<Vec<NodeId>> {
        let mut at = self.source;
        let mut nodes = Vec::with_capacity(self.edges.len() + 1);
        nodes.push(at);
        for &e in &self.edges {
            at = g.edge(e)?.other(at)?;
            nodes.push(at);
        }
        Some(nodes)
    }

    /// True when the walk never revisits a node.
    pub fn is_node_simple(&self, g: &Graph) -> bool {
        match self.nodes(g) {
            Some(mut nodes) => {
                let n = nodes.len();
                nodes.sort_unstable();
                nodes.dedup();
                nodes.len() == n
            }
            None => false,
        }
    }
}

/// True iff `p` is an edge-simple walk in `g` from its source to its
/// destination with at least one edge when the endpoints differ.
pub fn validate_path(g: &Graph, p: &Path) -> bool {
    if p.source >= g.node_count() || p.destination >= g.node_count() {
        return false;
    }
    if p.source == p.destination {
        return p.edges.is_empty();
    }
    if p.edges.is_empty() {
        return false;
    }
    let mut seen = p.edges.clone();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    match p.nodes(g) {
        Some(nodes) => nodes.last() == Some(&p.destination),
        None => false,
    }
}

fn check_endpoints(g: &Graph, s: NodeId, t: NodeId) -> Result<()> {
    g.check_node(s)?;
    g.check_node(t)?;
    if s == t {
        return Err(ArenaError::Precondition(format!(
            "source and destination coincide (node {s})"
        )));
    }
    Ok(())
}

/// Every node-simple `s`–`t` path with at most `max_len` edges, sorted
/// lexicographically by edge-id sequence. Fails once more than `cap` paths
/// have been found.
pub fn all_simple_paths(g: &Graph, s: NodeId, t: NodeId, max_len: usize, cap: u64) -> Result<Vec<Path>> {
    check_endpoints(g, s, t)?;
    if max_len == 0 {
        return Err(ArenaError::Precondition("max_len must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut visited = vec![false; g.node_count()];
    let mut stack = Vec::new();
    visited[s] = true;
    dfs_paths(g, s, s, t, max_len, cap, &mut visited, &mut stack, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs_paths(
    g: &Graph,
    s: NodeId,
    at: NodeId,
    t: NodeId,
    max_len: usize,
    cap: u64,
    visited: &mut [bool],
    stack: &mut Vec<EdgeId>,
    out: &mut Vec<Path>,
) -> Result<()> {
    // DFS with edges in increasing id order emits paths in lexicographic order.
    for &(e, next) in g.incident(at) {
        if visited[next] {
            continue;
        }
        stack.push(e);
        if next == t {
            if out.len() as u64 >= cap {
                return Err(ArenaError::ResultTooLarge { cap });
            }
            out.push(Path::new(s, t, stack.clone()));
        } else if stack.len() < max_len {
            visited[next] = true;
            dfs_paths(g, s, next, t, max_len, cap, visited, stack, out)?;
            visited[next] = false;
        }
        stack.pop();
    }
    Ok(())
}

/// The lexicographically first node-simple path of length `<= max_len`, if
/// any, without materializing the full list.
pub fn first_simple_path(g: &Graph, s: NodeId, t: NodeId, max_len: usize) -> Result<Option<Path>> {
    check_endpoints(g, s, t)?;
    if max_len == 0 {
        return Err(ArenaError::Precondition("max_len must be at least 1".into()));
    }
    let mut visited = vec![false; g.node_count()];
    visited[s] = true;
    let mut stack = Vec::new();
    Ok(first_dfs(g, s, t, max_len, &mut visited, &mut stack).then(|| Path::new(s, t, stack)))
}

fn first_dfs(g: &Graph, at: NodeId, t: NodeId, max_len: usize, visited: &mut [bool], stack: &mut Vec<EdgeId>) -> bool {
    for &(e, next) in g.incident(at) {
        if visited[next] {
            continue;
        }
        stack.push(e);
        if next == t {
            return true;
        }
        if stack.len() < max_len {
            visited[next] = true;
            if first_dfs(g, next, t, max_len, visited, stack) {
                return true;
            }
            visited[next] = false;
        }
        stack.pop();
    }
    false
}

/// Compares two labels by (weight, length, lexicographic edge sequence).
fn label_cmp<W: Ord>(a: &(W, Vec<EdgeId>), b: &(W, Vec<EdgeId>)) -> Ordering {
    a.0.cmp(&b.0)
        .then(a.1.len().cmp(&b.1.len()))
        .then_with(|| a.1.cmp(&b.1))
}

/// Hop-layered Bellman-Ford on additive nonnegative weights. Returns the
/// minimum (weight, length, lex) walk of at most `max_hops` edges, which is
/// always node-simple: dropping a cycle never raises the weight and always
/// shortens the walk.
fn layered_min_path<W, F>(g: &Graph, s: NodeId, t: NodeId, max_hops: usize, allowed: F, weight: &[W]) -> Option<(W, Vec<EdgeId>)>
where
    W: Ord + Clone + Zero,
    for<'a> &'a W: Add<&'a W, Output = W>,
    F: Fn(EdgeId) -> bool,
{
    let n = g.node_count();
    let mut best: Vec<Option<(W, Vec<EdgeId>)>> = vec![None; n];
    best[s] = Some((W::zero(), Vec::new()));
    for _ in 0..max_hops {
        let mut next = best.clone();
        let mut changed = false;
        for u in 0..n {
            let Some((w, seq)) = &best[u] else { continue };
            for &(e, v) in g.incident(u) {
                if !allowed(e) {
                    continue;
                }
                let mut cand_seq = Vec::with_capacity(seq.len() + 1);
                cand_seq.extend_from_slice(seq);
                cand_seq.push(e);
                let cand = (w + &weight[e], cand_seq);
                let replace = match &next[v] {
                    None => true,
                    Some(cur) => label_cmp(&cand, cur) == Ordering::Less,
                };
                if replace {
                    next[v] = Some(cand);
                    changed = true;
                }
            }
        }
        best = next;
        if !changed {
            break;
        }
    }
    best[t].take()
}

fn check_weights<T>(g: &Graph, w: &[T]) -> Result<()> {
    if w.len() != g.edge_count() {
        return Err(ArenaError::Precondition(format!(
            "weight vector has {} entries for {} edges",
            w.len(),
            g.edge_count()
        )));
    }
    Ok(())
}

/// Minimum total-weight node-simple `s`–`t` path.
pub fn min_weight_path(g: &Graph, s: NodeId, t: NodeId, w: &[BigUint]) -> Result<Path> {
    min_weight_path_within(g, s, t, w, g.node_count().saturating_sub(1))
}

/// [`min_weight_path`] restricted to paths of at most `max_len` edges.
pub fn min_weight_path_within(g: &Graph, s: NodeId, t: NodeId, w: &[BigUint], max_len: usize) -> Result<Path> {
    check_endpoints(g, s, t)?;
    check_weights(g, w)?;
    layered_min_path(g, s, t, max_len, |_| true, w)
        .map(|(_, seq)| Path::new(s, t, seq))
        .ok_or(ArenaError::NoPath { from: s, to: t })
}

/// Node-simple `s`–`t` path minimizing the maximum edge load; ties broken
/// by smaller load sum, then length, then lexicographic order.
pub fn min_bottleneck_path(g: &Graph, s: NodeId, t: NodeId, load: &[u64]) -> Result<Path> {
    min_bottleneck_path_within(g, s, t, load, g.node_count().saturating_sub(1))
}

/// [`min_bottleneck_path`] restricted to paths of at most `max_len` edges.
pub fn min_bottleneck_path_within(g: &Graph, s: NodeId, t: NodeId, load: &[u64], max_len: usize) -> Result<Path> {
    check_endpoints(g, s, t)?;
    check_weights(g, load)?;
    // Phase 1: the optimal bottleneck value within the hop limit.
    let n = g.node_count();
    let mut bott: Vec<Option<u64>> = vec![None; n];
    bott[s] = Some(0);
    for _ in 0..max_len {
        let mut next = bott.clone();
        let mut changed = false;
        for u in 0..n {
            let Some(b) = bott[u] else { continue };
            for &(e, v) in g.incident(u) {
                let cand = b.max(load[e]);
                if next[v].is_none_or(|cur| cand < cur) {
                    next[v] = Some(cand);
                    changed = true;
                }
            }
        }
        bott = next;
        if !changed {
            break;
        }
    }
    let limit = bott[t].ok_or(ArenaError::NoPath { from: s, to: t })?;
    // Phase 2: among paths under that bottleneck, minimum load sum.
    layered_min_path(g, s, t, max_len, |e| load[e] <= limit, load)
        .map(|(_, seq)| Path::new(s, t, seq))
        .ok_or(ArenaError::NoPath { from: s, to: t })
}
