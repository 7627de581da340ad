//! The graph of codewords of partial weight 2 and the distance results built on it.
//!
//! Vertices are clusters of degree->1 base positions; every degree-2 variable
//! node whose two positions lie in clusters is an edge. A cycle in this graph
//! induces a codeword whose weight is the cycle length plus the node weights
//! of the traversed clusters.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::basecode::{BaseCodeSpec, BaseKind, ComponentCode};
use crate::ensemble::{BaseFamily, EnsembleSpec};
use crate::error::{Error, Result};
use crate::fraction::{self, to_f64};
use crate::graphgen::CodeInstance;

/// Minimal set of degree-one positions completing a pair of degree->1
/// positions to a base codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub weight: usize,
    pub degree_one_positions: Vec<usize>,
}

/// One edge of G: a degree-2 variable node joining two cluster positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GEdge {
    pub a: usize,
    pub b: usize,
    pub pos_a: usize,
    pub pos_b: usize,
    pub var: usize,
}

impl GEdge {
    /// Position of this edge inside `cluster`; `from_a` selects the end for self-loops.
    fn position_at(&self, cluster: usize, from_a: bool) -> usize {
        if self.a == self.b {
            if from_a {
                self.pos_a
            } else {
                self.pos_b
            }
        } else if cluster == self.a {
            self.pos_a
        } else {
            self.pos_b
        }
    }

    fn other(&self, cluster: usize) -> usize {
        if cluster == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClusterGraph {
    clusters: Vec<Vec<usize>>,
    edges: Vec<GEdge>,
    completions: HashMap<(usize, usize), Completion>,
    node_weight_bound: usize,
    adjacency: Vec<Vec<usize>>,
}

fn pair_key(p: usize, q: usize) -> (usize, usize) {
    (p.min(q), p.max(q))
}

impl ClusterGraph {
    /// Builds a graph from explicit parts. `completions` must cover every pair
    /// of edge endpoints that share a cluster.
    pub fn from_parts(
        clusters: Vec<Vec<usize>>,
        edges: Vec<GEdge>,
        completions: HashMap<(usize, usize), Completion>,
        node_weight_bound: usize,
    ) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); clusters.len()];
        for (i, e) in edges.iter().enumerate() {
            if e.a >= clusters.len() || e.b >= clusters.len() {
                return Err(Error::Structure(format!("edge {i} refers to a missing cluster")));
            }
            if !clusters[e.a].contains(&e.pos_a) || !clusters[e.b].contains(&e.pos_b) {
                return Err(Error::Structure(format!("edge {i} uses a position outside its cluster")));
            }
            adjacency[e.a].push(i);
            if e.b != e.a {
                adjacency[e.b].push(i);
            }
        }
        let completions = completions.into_iter().map(|((p, q), c)| (pair_key(p, q), c)).collect();
        let graph = Self { clusters, edges, completions, node_weight_bound, adjacency };
        for c in 0..graph.clusters.len() {
            let ends = graph.endpoints_in(c);
            for (i, &p) in ends.iter().enumerate() {
                for &q in &ends[i + 1..] {
                    if !graph.completions.contains_key(&pair_key(p, q)) {
                        return Err(Error::Bookkeeping(format!(
                            "no completion stored for positions {p} and {q} in cluster {c}"
                        )));
                    }
                }
            }
        }
        Ok(graph)
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn edges(&self) -> &[GEdge] {
        &self.edges
    }

    pub fn num_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Upper bound `a` on node weights over every pair inside a cluster.
    pub fn node_weight_bound(&self) -> usize {
        self.node_weight_bound
    }

    /// Minimal completion of the position pair `(p, q)`.
    pub fn completion(&self, p: usize, q: usize) -> Option<&Completion> {
        self.completions.get(&pair_key(p, q))
    }

    pub fn node_weight(&self, p: usize, q: usize) -> Option<usize> {
        self.completion(p, q).map(|c| c.weight)
    }

    /// Stored `(position pair, completion)` entries, sorted by pair.
    pub fn completions(&self) -> Vec<((usize, usize), &Completion)> {
        let mut all: Vec<_> = self.completions.iter().map(|(k, v)| (*k, v)).collect();
        all.sort_by_key(|(k, _)| *k);
        all
    }

    /// Number of G-edges at each cluster (self-loops count twice).
    pub fn cluster_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.clusters.len()];
        for e in &self.edges {
            deg[e.a] += 1;
            deg[e.b] += 1;
        }
        deg
    }

    fn endpoints_in(&self, c: usize) -> Vec<usize> {
        let mut ends = Vec::new();
        for &ei in &self.adjacency[c] {
            let e = &self.edges[ei];
            if e.a == c {
                ends.push(e.pos_a);
            }
            if e.b == c {
                ends.push(e.pos_b);
            }
        }
        ends
    }

    /// True if G has no cycle (self-loops and parallel edges are cycles).
    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.clusters.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Validates a closed walk given by its edge sequence and computes its weight.
    pub fn cycle_from_edges(&self, edge_ids: &[usize]) -> Result<Cycle> {
        let k = edge_ids.len();
        if k == 0 || edge_ids.iter().any(|&e| e >= self.edges.len()) {
            return Err(Error::Structure("cycle needs existing edges".into()));
        }
        let mut sorted = edge_ids.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structure("cycle repeats an edge".into()));
        }
        if k == 1 {
            let e = self.edges[edge_ids[0]];
            if e.a != e.b {
                return Err(Error::Structure("a single edge is a cycle only if it is a loop".into()));
            }
            let turn = Turn { cluster: e.a, pos_in: e.pos_b, pos_out: e.pos_a };
            return self.finish_cycle(edge_ids.to_vec(), vec![turn]);
        }
        let first = self.edges[edge_ids[0]];
        let second = self.edges[edge_ids[1]];
        // Start at the end of the first edge that is not shared with the second.
        let start = if second.a != first.b && second.b != first.b { first.b } else { first.a };
        let mut at = start;
        let mut turns = Vec::with_capacity(k);
        let mut prev_pos = None;
        for (step, &ei) in edge_ids.iter().enumerate() {
            let e = self.edges[ei];
            if e.a == e.b || (e.a != at && e.b != at) {
                return Err(Error::Structure(format!("edge {ei} does not continue the walk")));
            }
            let pos_here = e.position_at(at, true);
            if let Some(pin) = prev_pos {
                turns.push(Turn { cluster: at, pos_in: pin, pos_out: pos_here });
            } else {
                debug_assert_eq!(step, 0);
            }
            let next = e.other(at);
            prev_pos = Some(e.position_at(next, true));
            at = next;
        }
        if at != start {
            return Err(Error::Structure("edge sequence is not closed".into()));
        }
        let first_pos = first.position_at(start, true);
        turns.push(Turn { cluster: start, pos_in: prev_pos.expect("k >= 2"), pos_out: first_pos });
        let mut seen: Vec<usize> = turns.iter().map(|t| t.cluster).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structure("cycle visits a cluster twice".into()));
        }
        self.finish_cycle(edge_ids.to_vec(), turns)
    }

    fn finish_cycle(&self, edges: Vec<usize>, turns: Vec<Turn>) -> Result<Cycle> {
        let mut weight = edges.len();
        for t in &turns {
            weight += self.node_weight(t.pos_in, t.pos_out).ok_or_else(|| {
                Error::Bookkeeping(format!("missing node weight for ({}, {})", t.pos_in, t.pos_out))
            })?;
        }
        Ok(Cycle { edges, turns, weight })
    }
}

/// Passage of a cycle through a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Turn {
    pub cluster: usize,
    pub pos_in: usize,
    pub pos_out: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub edges: Vec<usize>,
    pub turns: Vec<Turn>,
    /// Cycle length plus the node weights of the traversed clusters.
    pub weight: usize,
}

impl Cycle {
    pub fn length(&self) -> usize {
        self.edges.len()
    }

    pub fn clusters(&self) -> Vec<usize> {
        self.turns.iter().map(|t| t.cluster).collect()
    }
}

/// Minimal completions for every degree->1 pair of one component.
#[derive(Debug, Default)]
struct PairTable {
    pairs: HashMap<(usize, usize), (usize, u32)>,
    max_weight: usize,
    low_partial_weight: bool,
}

fn pair_table(code: &ComponentCode, small_mask: u32) -> PairTable {
    let mut table = PairTable::default();
    for &c in code.codewords() {
        if c == 0 {
            continue;
        }
        let big = c & !small_mask;
        match big.count_ones() {
            0 | 1 => table.low_partial_weight = true,
            2 => {
                let i = big.trailing_zeros() as usize;
                let j = 31 - big.leading_zeros() as usize;
                let w = (c & small_mask).count_ones() as usize;
                // Codewords are in lexicographic order, so the first minimum wins ties.
                let entry = table.pairs.entry((i, j)).or_insert((w, c & small_mask));
                if w < entry.0 {
                    *entry = (w, c & small_mask);
                }
            }
            _ => {}
        }
    }
    table.max_weight = table.pairs.values().map(|v| v.0).max().unwrap_or(0);
    table
}

fn small_mask_of(base: &BaseCodeSpec, ci: usize) -> u32 {
    base.components()[ci]
        .positions
        .iter()
        .enumerate()
        .filter(|(_, &p)| base.degree_one_mask()[p])
        .fold(0u32, |m, (i, _)| m | 1 << i)
}

/// Clusters of a base code: one per parity check, one per block (its degree->1
/// positions), or by union-find over partial-weight-2 codewords otherwise.
pub fn find_clusters(instance: &CodeInstance) -> Result<Vec<Vec<usize>>> {
    find_clusters_in_base(instance.base())
}

pub fn find_clusters_in_base(base: &BaseCodeSpec) -> Result<Vec<Vec<usize>>> {
    match base.kind() {
        BaseKind::Ldpc | BaseKind::BlockTldpc => Ok(base
            .components()
            .iter()
            .map(|c| c.positions.iter().copied().filter(|&p| !base.degree_one_mask()[p]).collect())
            .filter(|c: &Vec<usize>| !c.is_empty())
            .collect()),
        BaseKind::Custom => find_clusters_generic(base),
    }
}

/// Cluster discovery by enumeration of every component's codewords.
pub fn find_clusters_generic(base: &BaseCodeSpec) -> Result<Vec<Vec<usize>>> {
    let mut clusters = Vec::new();
    let mut cache: HashMap<(usize, u32), Arc<PairTable>> = HashMap::new();
    for (ci, comp) in base.components().iter().enumerate() {
        let mask = small_mask_of(base, ci);
        let table = component_table(&mut cache, &comp.code, mask);
        if table.low_partial_weight {
            return Err(Error::Structure(format!(
                "component {ci} has a nonzero codeword with fewer than two degree>1 positions"
            )));
        }
        let big: Vec<usize> = (0..comp.code.length()).filter(|i| mask >> i & 1 == 0).collect();
        let mut parent: Vec<usize> = (0..comp.code.length()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(i, j) in table.pairs.keys() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for &i in &big {
            let root = find(&mut parent, i);
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, g)) => g.push(comp.positions[i]),
                None => groups.push((root, vec![comp.positions[i]])),
            }
        }
        clusters.extend(groups.into_iter().map(|(_, g)| g));
    }
    Ok(clusters)
}

fn component_table(
    cache: &mut HashMap<(usize, u32), Arc<PairTable>>,
    code: &Arc<ComponentCode>,
    mask: u32,
) -> Arc<PairTable> {
    let key = (Arc::as_ptr(code) as usize, mask);
    cache.entry(key).or_insert_with(|| Arc::new(pair_table(code, mask))).clone()
}

/// Builds G for an instance, with minimal completions for every pair of edge
/// endpoints sharing a cluster.
pub fn build_graph2(instance: &CodeInstance) -> Result<ClusterGraph> {
    let base = instance.base();
    let clusters = find_clusters(instance)?;
    let mut cluster_of = vec![usize::MAX; base.m()];
    for (c, ps) in clusters.iter().enumerate() {
        for &p in ps {
            cluster_of[p] = c;
        }
    }
    let mut edges = Vec::new();
    for v in 0..instance.n() {
        let ps = instance.positions_of(v);
        if ps.len() != 2 {
            continue;
        }
        let (p, q) = (ps[0], ps[1]);
        if cluster_of[p] == usize::MAX || cluster_of[q] == usize::MAX {
            return Err(Error::Structure(format!(
                "degree-2 variable {v} touches a position outside every cluster"
            )));
        }
        edges.push(GEdge { a: cluster_of[p], b: cluster_of[q], pos_a: p, pos_b: q, var: v });
    }

    let mut cache: HashMap<(usize, u32), Arc<PairTable>> = HashMap::new();
    let mut tables: Vec<Option<Arc<PairTable>>> = Vec::with_capacity(base.components().len());
    let mut bound = 0;
    for (ci, comp) in base.components().iter().enumerate() {
        if comp.code.is_single_parity() && small_mask_of(base, ci) == 0 {
            tables.push(None);
        } else {
            let table = component_table(&mut cache, &comp.code, small_mask_of(base, ci));
            bound = bound.max(table.max_weight);
            tables.push(Some(table));
        }
    }

    let mut endpoints: Vec<Vec<usize>> = vec![Vec::new(); clusters.len()];
    for e in &edges {
        endpoints[e.a].push(e.pos_a);
        endpoints[e.b].push(e.pos_b);
    }
    let mut completions = HashMap::new();
    for ends in &endpoints {
        for (i, &p) in ends.iter().enumerate() {
            for &q in &ends[i + 1..] {
                let (ci, li) = base.locate(p);
                let (cj, lj) = base.locate(q);
                if ci != cj {
                    return Err(Error::Bookkeeping(format!(
                        "positions {p} and {q} share a cluster but not a component"
                    )));
                }
                let completion = match &tables[ci] {
                    None => Completion { weight: 0, degree_one_positions: Vec::new() },
                    Some(table) => {
                        let &(weight, local) = table.pairs.get(&(li.min(lj), li.max(lj))).ok_or_else(|| {
                            Error::Bookkeeping(format!("no partial-weight-2 codeword on ({p}, {q})"))
                        })?;
                        let comp = &base.components()[ci];
                        let degree_one_positions = (0..comp.code.length())
                            .filter(|i| local >> i & 1 == 1)
                            .map(|i| comp.positions[i])
                            .collect();
                        Completion { weight, degree_one_positions }
                    }
                };
                completions.insert(pair_key(p, q), completion);
            }
        }
    }
    ClusterGraph::from_parts(clusters, edges, completions, bound)
}

/// `2 |E| / |Ṽ|` (zero for a graph without clusters).
pub fn average_degree(graph: &ClusterGraph) -> f64 {
    if graph.num_clusters() == 0 {
        0.0
    } else {
        2.0 * graph.num_edges() as f64 / graph.num_clusters() as f64
    }
}

/// Shortest cycle of G and, among shortest cycles, one of minimal weight.
/// Returns `None` for forests.
pub fn min_weight_cycle(graph: &ClusterGraph) -> Option<Cycle> {
    let best_len = AtomicUsize::new(usize::MAX);
    let found: Vec<(usize, usize, usize, Vec<usize>)> = (0..graph.num_edges())
        .into_par_iter()
        .filter_map(|ei| {
            let (len, weight, path) = shortest_cycle_through(graph, ei, best_len.load(Ordering::Relaxed))?;
            best_len.fetch_min(len, Ordering::Relaxed);
            Some((len, weight, ei, path))
        })
        .collect();
    let (_, _, _, path) = found.into_iter().min_by_key(|(len, w, ei, _)| (*len, *w, *ei))?;
    graph.cycle_from_edges(&path).ok()
}

/// Length of the shortest cycle through `start` with its minimal weight and edge sequence.
///
/// Layered search from one end of `start` to the other over directed edge
/// states `2·edge + direction`; node weights act as turn costs.
fn shortest_cycle_through(graph: &ClusterGraph, start: usize, limit: usize) -> Option<(usize, usize, Vec<usize>)> {
    let e0 = graph.edges[start];
    if e0.a == e0.b {
        let w = 1 + graph.node_weight(e0.pos_a, e0.pos_b)?;
        return Some((1, w, vec![start]));
    }
    let arrival = |state: usize| {
        let e = &graph.edges[state / 2];
        if state % 2 == 0 {
            e.b
        } else {
            e.a
        }
    };
    let target = e0.a;
    let s0 = 2 * start;
    let mut layer_of: HashMap<usize, usize> = HashMap::from([(s0, 0)]);
    let mut weight: HashMap<usize, usize> = HashMap::from([(s0, 1)]);
    let mut pred: HashMap<usize, usize> = HashMap::new();
    let mut frontier = vec![s0];
    let mut layer = 0;
    let mut best: Option<(usize, usize)> = None;
    while !frontier.is_empty() && best.is_none() {
        layer += 1;
        if layer + 1 > limit {
            return None;
        }
        let mut next = Vec::new();
        for &s in &frontier {
            let at = arrival(s);
            let pos_in = graph.edges[s / 2].position_at(at, true);
            for &f in &graph.adjacency[at] {
                let ef = graph.edges[f];
                if f == s / 2 || f == start || ef.a == ef.b {
                    continue;
                }
                let Some(turn) = graph.node_weight(pos_in, ef.position_at(at, true)) else {
                    continue;
                };
                let state = 2 * f + usize::from(ef.a != at);
                let w = weight[&s] + turn + 1;
                match layer_of.get(&state) {
                    Some(&l) if l < layer => continue,
                    Some(_) if weight[&state] <= w => continue,
                    Some(_) => {}
                    None => next.push(state),
                }
                layer_of.insert(state, layer);
                weight.insert(state, w);
                pred.insert(state, s);
            }
        }
        for &state in &next {
            if arrival(state) == target {
                let f = graph.edges[state / 2];
                let total = weight[&state] + graph.node_weight(f.position_at(target, true), e0.pos_a)?;
                if best.map_or(true, |(_, bw)| total < bw) {
                    best = Some((state, total));
                }
            }
        }
        next.retain(|&state| arrival(state) != target);
        frontier = next;
    }
    let (last, total) = best?;
    let mut path = vec![last / 2];
    let mut cur = last;
    while let Some(&p) = pred.get(&cur) {
        path.push(p / 2);
        cur = p;
    }
    path.reverse();
    Some((path.len(), total, path))
}

/// Codeword over the variable nodes induced by a cycle: its degree-2 nodes plus
/// the degree-one nodes of every traversed cluster's completion.
pub fn cycle_to_codeword(graph: &ClusterGraph, cycle: &Cycle, instance: &CodeInstance) -> Result<Vec<u8>> {
    let mut word = vec![0u8; instance.n()];
    for &ei in &cycle.edges {
        word[graph.edges[ei].var] ^= 1;
    }
    for t in &cycle.turns {
        let completion = graph.completion(t.pos_in, t.pos_out).ok_or_else(|| {
            Error::Bookkeeping(format!("no completion for ({}, {})", t.pos_in, t.pos_out))
        })?;
        for &p in &completion.degree_one_positions {
            word[instance.var_of(p)] ^= 1;
        }
    }
    let induced = instance.induced_assignment(&word);
    if !crate::basecode::is_codeword(instance.base(), &induced)? {
        return Err(Error::Bookkeeping("induced word violates the base code".into()));
    }
    let weight = word.iter().filter(|&&b| b == 1).count();
    if weight != cycle.weight {
        return Err(Error::Bookkeeping(format!(
            "induced word has weight {weight}, cycle weight is {}",
            cycle.weight
        )));
    }
    Ok(word)
}

/// Upper bound on the minimum distance implied by G.
#[derive(Debug, Clone, PartialEq)]
pub struct DminBound {
    /// Smallest applicable bound; `None` when G constrains nothing.
    pub value: Option<f64>,
    /// `(a+1)(2 log_{Δ-1}((Δ-2)/2 · |Ṽ| + 1) + 1)` when `Δ > 2`.
    pub moore: Option<f64>,
    /// `(a+1) g` when G has a cycle.
    pub cycle: Option<f64>,
    /// `Δ = 2` exactly: the logarithmic bound does not apply.
    pub critical: bool,
}

pub fn dmin_upper_bound(graph: &ClusterGraph) -> DminBound {
    let a1 = (graph.node_weight_bound() + 1) as f64;
    let clusters = graph.num_clusters();
    let edges = graph.num_edges();
    let delta = average_degree(graph);
    let moore = (2 * edges > 2 * clusters).then(|| {
        let v = clusters as f64;
        a1 * (2.0 * (((delta - 2.0) / 2.0) * v + 1.0).ln() / (delta - 1.0).ln() + 1.0)
    });
    let cycle = min_weight_cycle(graph).map(|c| a1 * c.length() as f64);
    let value = match (moore, cycle) {
        (Some(m), Some(c)) => Some(m.min(c)),
        (m, c) => m.or(c),
    };
    DminBound { value, moore, cycle, critical: clusters > 0 && edges == clusters }
}

/// Closed-form check for parity-check bases: `λ₂ ρ ≤ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LdpcCheck {
    pub lambda_2: BigRational,
    pub rho_bar: BigRational,
    pub product: BigRational,
    pub pass: bool,
}

/// Closed-form check for uniform clusters: `λ̃₂ · s ≤ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterCheck {
    pub tilde_lambda_2: BigRational,
    pub cluster_size: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NecessaryConditionReport {
    pub clusters: usize,
    pub edges: usize,
    pub average_degree: f64,
    pub girth: Option<usize>,
    pub min_cycle_weight: Option<usize>,
    pub node_weight_bound: usize,
    pub forest: bool,
    /// `Δ ≤ 2`, decided exactly as `|E| ≤ |Ṽ|`.
    pub pass: bool,
    pub dmin_bound: DminBound,
    pub ldpc: Option<LdpcCheck>,
    pub cluster_check: Option<ClusterCheck>,
}

impl NecessaryConditionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "clusters": self.clusters,
            "edges": self.edges,
            "average_degree": self.average_degree,
            "girth": self.girth,
            "min_cycle_weight": self.min_cycle_weight,
            "node_weight_bound": self.node_weight_bound,
            "forest": self.forest,
            "verdict": if self.pass { "PASS" } else { "FAIL" },
            "dmin_upper_bound": self.dmin_bound.value,
            "moore_bound": self.dmin_bound.moore,
            "cycle_bound": self.dmin_bound.cycle,
            "critical": self.dmin_bound.critical,
            "ldpc": self.ldpc.as_ref().map(|c| json!({
                "lambda_2": fraction::format_fraction(&c.lambda_2),
                "rho_bar": fraction::format_fraction(&c.rho_bar),
                "product": to_f64(&c.product),
                "verdict": if c.pass { "PASS" } else { "FAIL" },
            })),
            "cluster_check": self.cluster_check.as_ref().map(|c| json!({
                "tilde_lambda_2": fraction::format_fraction(&c.tilde_lambda_2),
                "cluster_size": c.cluster_size,
                "verdict": if c.pass { "PASS" } else { "FAIL" },
            })),
        })
    }
}

/// Applies the `Δ ≤ 2` test to an instance. When `nominal` is given, the
/// closed-form tests use its distributions; otherwise the realized ones.
pub fn check_necessary_condition(
    instance: &CodeInstance,
    nominal: Option<&EnsembleSpec>,
) -> Result<NecessaryConditionReport> {
    let graph = build_graph2(instance)?;
    let cycle = min_weight_cycle(&graph);
    let degrees = instance.variable_degrees();
    let deg2 = degrees.iter().filter(|&&d| d == 2).count() as i64;
    let base = instance.base();

    let ldpc = (base.kind() == BaseKind::Ldpc).then(|| {
        let (lambda_2, rho_bar) = match nominal {
            Some(EnsembleSpec { distribution, base: BaseFamily::Ldpc { rho } }) => {
                (distribution.fraction(2), rho.average_left_degree())
            }
            _ => {
                let m = instance.m() as i64;
                (
                    fraction::ratio(2 * deg2, m),
                    fraction::ratio(m, base.components().len() as i64),
                )
            }
        };
        let product = &lambda_2 * &rho_bar;
        let pass = product <= fraction::int(2);
        LdpcCheck { lambda_2, rho_bar, product, pass }
    });

    let cluster_sizes: Vec<usize> = graph.clusters().iter().map(Vec::len).collect();
    let cluster_check = match (base.kind(), cluster_sizes.first()) {
        (BaseKind::Ldpc, _) | (_, None) => None,
        (_, Some(&s)) if cluster_sizes.iter().all(|&x| x == s) => {
            let tilde = match nominal {
                Some(spec) => spec.normalized()?.fraction(2),
                None => {
                    let big = base.degree_one_mask().iter().filter(|b| !**b).count() as i64;
                    fraction::ratio(2 * deg2, big)
                }
            };
            let pass = &tilde * fraction::int(s as i64) <= fraction::int(2);
            Some(ClusterCheck { tilde_lambda_2: tilde, cluster_size: s, pass })
        }
        _ => None,
    };

    Ok(NecessaryConditionReport {
        clusters: graph.num_clusters(),
        edges: graph.num_edges(),
        average_degree: average_degree(&graph),
        girth: cycle.as_ref().map(Cycle::length),
        min_cycle_weight: cycle.as_ref().map(|c| c.weight),
        node_weight_bound: graph.node_weight_bound(),
        forest: graph.is_forest(),
        pass: graph.num_edges() <= graph.num_clusters(),
        dmin_bound: dmin_upper_bound(&graph),
        ldpc,
        cluster_check,
    })
}
