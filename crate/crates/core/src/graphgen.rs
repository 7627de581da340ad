//! Concrete code instances: the bipartite graph between variable nodes and
//! base positions.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::basecode::{
    custom_base, ldpc_base_from_degrees, make_block_tldpc_base, BaseCodeSpec, BaseDescriptor,
};
use crate::ensemble::{largest_remainder, round_to_edge_total, BaseFamily, DegreeDistribution, EnsembleSpec};
use crate::error::{Error, Result};
use crate::fraction::{self, as_count, to_f64};
use crate::gf2::SparseBinMatrix;

/// Number of degree->1 positions per block of the rate-1/2 block base.
pub const BLOCK_CLUSTER_SIZE: usize = 4;
const MAX_SWAP_TRIES: usize = 100;
const MAX_RESTARTS: u64 = 64;

/// A sparse-graph code: every base position carries exactly one edge.
#[derive(Debug, Clone)]
pub struct CodeInstance {
    n: usize,
    base: BaseCodeSpec,
    position_to_var: Vec<usize>,
    var_positions: Vec<Vec<usize>>,
    seed: u64,
    cluster_index: Option<Vec<Option<usize>>>,
}

impl CodeInstance {
    /// Validates and assembles an instance from the per-position variable assignment.
    pub fn new(
        base: BaseCodeSpec,
        n: usize,
        position_to_var: Vec<usize>,
        seed: u64,
        cluster_index: Option<Vec<Option<usize>>>,
    ) -> Result<Self> {
        if position_to_var.len() != base.m() {
            return Err(Error::LengthMismatch { expected: base.m(), actual: position_to_var.len() });
        }
        let mut var_positions = vec![Vec::new(); n];
        for (p, &v) in position_to_var.iter().enumerate() {
            if v >= n {
                return Err(Error::Construction(format!("position {p} refers to variable {v} >= n")));
            }
            var_positions[v].push(p);
        }
        if let Some(v) = var_positions.iter().position(Vec::is_empty) {
            return Err(Error::Construction(format!("variable node {v} has no edge")));
        }
        for (p, &v) in position_to_var.iter().enumerate() {
            if base.degree_one_mask()[p] && var_positions[v].len() != 1 {
                return Err(Error::Construction(format!(
                    "degree-one position {p} is attached to variable {v} of degree {}",
                    var_positions[v].len()
                )));
            }
        }
        if let Some(ci) = &cluster_index {
            if ci.len() != base.m() {
                return Err(Error::LengthMismatch { expected: base.m(), actual: ci.len() });
            }
        }
        Ok(Self { n, base, position_to_var, var_positions, seed, cluster_index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// True if degree-one variable nodes sit exactly on the degree-one positions.
    /// Hand-built instances such as the identity graph may attach degree-one
    /// nodes elsewhere; the builders always satisfy this.
    pub fn respects_degree_one_mask(&self) -> bool {
        self.position_to_var
            .iter()
            .enumerate()
            .all(|(p, &v)| (self.var_positions[v].len() == 1) == self.base.degree_one_mask()[p])
    }

    pub fn m(&self) -> usize {
        self.base.m()
    }

    pub fn base(&self) -> &BaseCodeSpec {
        &self.base
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn cluster_index(&self) -> Option<&[Option<usize>]> {
        self.cluster_index.as_deref()
    }

    /// Variable node attached to base position `p`.
    pub fn var_of(&self, p: usize) -> usize {
        self.position_to_var[p]
    }

    pub fn position_to_var(&self) -> &[usize] {
        &self.position_to_var
    }

    /// Base positions of variable node `v`, ascending.
    pub fn positions_of(&self, v: usize) -> &[usize] {
        &self.var_positions[v]
    }

    pub fn variable_degrees(&self) -> Vec<usize> {
        self.var_positions.iter().map(Vec::len).collect()
    }

    /// `(variable, position)` pairs ordered by position.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.position_to_var.iter().enumerate().map(|(p, &v)| (v, p)).collect()
    }

    /// Number of variable nodes of each degree.
    pub fn degree_histogram(&self) -> std::collections::BTreeMap<usize, usize> {
        let mut hist = std::collections::BTreeMap::new();
        for ps in &self.var_positions {
            *hist.entry(ps.len()).or_insert(0) += 1;
        }
        hist
    }

    /// `1 - (m - dim ℬ) / n`, a lower bound on the true rate.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.base.num_checks() as f64 / self.n as f64
    }

    /// Rate from the rank of the parity-check matrix.
    pub fn actual_rate(&self) -> f64 {
        let h = extract_parity_matrix(self);
        (self.n - h.rank()) as f64 / self.n as f64
    }

    /// Assignment induced on the base positions by a word over the variable nodes.
    pub fn induced_assignment(&self, word: &[u8]) -> Vec<u8> {
        self.position_to_var.iter().map(|&v| word[v] & 1).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "m": self.m(),
            "seed": self.seed,
            "base": self.base.descriptor().to_json(),
            "variable_degrees": self.variable_degrees(),
            "edges": self.edges().iter().map(|&(v, p)| [v, p]).collect::<Vec<_>>(),
            "cluster_index": self.cluster_index,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let field = |key: &str| {
            value.get(key).ok_or_else(|| Error::Parse(format!("instance is missing `{key}`")))
        };
        let n = field("n")?.as_u64().ok_or_else(|| Error::Parse("`n` must be an integer".into()))? as usize;
        let seed = field("seed")?.as_u64().unwrap_or(0);
        let base = BaseDescriptor::from_json(field("base")?)?.build()?;
        let edges = field("edges")?
            .as_array()
            .ok_or_else(|| Error::Parse("`edges` must be an array".into()))?;
        let mut position_to_var = vec![usize::MAX; base.m()];
        for e in edges {
            let pair = e
                .as_array()
                .filter(|a| a.len() == 2)
                .and_then(|a| Some((a[0].as_u64()? as usize, a[1].as_u64()? as usize)))
                .ok_or_else(|| Error::Parse("edge must be [variable, position]".into()))?;
            let (v, p) = pair;
            if p >= base.m() || position_to_var[p] != usize::MAX {
                return Err(Error::Construction(format!("position {p} is out of range or has two edges")));
            }
            position_to_var[p] = v;
        }
        if position_to_var.contains(&usize::MAX) {
            return Err(Error::Construction("some base position has no edge".into()));
        }
        let cluster_index = match value.get("cluster_index") {
            None | Some(Value::Null) => None,
            Some(v) => Some(
                v.as_array()
                    .ok_or_else(|| Error::Parse("`cluster_index` must be an array".into()))?
                    .iter()
                    .map(|c| match c {
                        Value::Null => Ok(None),
                        other => other
                            .as_u64()
                            .map(|c| Some(c as usize))
                            .ok_or_else(|| Error::Parse("bad cluster id".into())),
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let instance = Self::new(base, n, position_to_var, seed, cluster_index)?;
        if let Some(degrees) = value.get("variable_degrees").and_then(Value::as_array) {
            let stated: Vec<u64> = degrees.iter().filter_map(Value::as_u64).collect();
            let actual: Vec<u64> = instance.variable_degrees().iter().map(|&d| d as u64).collect();
            if stated != actual {
                return Err(Error::Parse("`variable_degrees` disagrees with the edge list".into()));
            }
        }
        Ok(instance)
    }
}

/// Binomial cluster-degree fractions `C(s,i) t^i (1-t)^(s-i)`.
pub fn expected_cluster_fractions(tilde_lambda_2: f64, cluster_size: usize) -> Vec<f64> {
    let t = tilde_lambda_2;
    (0..=cluster_size)
        .map(|i| binomial(cluster_size, i) * t.powi(i as i32) * (1.0 - t).powi((cluster_size - i) as i32))
        .collect()
}

/// Exact rational form of [`expected_cluster_fractions`].
pub fn expected_cluster_fractions_exact(tilde_lambda_2: &BigRational, cluster_size: usize) -> Vec<BigRational> {
    let t = tilde_lambda_2;
    let u = BigRational::one() - t;
    (0..=cluster_size)
        .map(|i| {
            fraction::int(binomial(cluster_size, i) as i64)
                * num_traits::pow(t.clone(), i)
                * num_traits::pow(u.clone(), cluster_size - i)
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Layout of the cluster graph as stars, twigs, chains and isolated clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterArrangement {
    pub clusters: usize,
    pub fractions: Vec<BigRational>,
    /// Clusters of each degree 0..=4.
    pub degree_counts: Vec<usize>,
    pub stars: usize,
    pub twigs: usize,
    pub chains: usize,
    pub isolated: usize,
    /// Interior clusters of every chain.
    pub chain_interiors: Vec<usize>,
}

impl ClusterArrangement {
    pub fn num_edges(&self) -> usize {
        12 * self.stars + 5 * self.twigs + self.chain_interiors.iter().map(|k| k + 1).sum::<usize>()
    }

    /// Degree-1 clusters used by (stars, twigs, chains).
    pub fn leaf_consumption(&self) -> (usize, usize, usize) {
        (8 * self.stars, 4 * self.twigs, 2 * self.chains)
    }

    /// Edges between abstract cluster slots `0..clusters`, laid out as stars,
    /// then twigs, then chains, then isolated slots.
    pub fn slot_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.num_edges());
        let mut next = 0usize;
        for _ in 0..self.stars {
            let center = next;
            for arm in 0..4 {
                let a = center + 1 + arm;
                edges.push((center, a));
                let leaves = center + 5 + 2 * arm;
                edges.push((a, leaves));
                edges.push((a, leaves + 1));
            }
            next += 13;
        }
        for _ in 0..self.twigs {
            let (a, b) = (next, next + 1);
            edges.push((a, b));
            edges.extend([(a, next + 2), (a, next + 3), (b, next + 4), (b, next + 5)]);
            next += 6;
        }
        for &interior in &self.chain_interiors {
            for k in 0..=interior {
                edges.push((next + k, next + k + 1));
            }
            next += interior + 2;
        }
        edges
    }
}

/// Splits the clusters into stars, twigs, chains and isolated clusters so that
/// the cluster-degree histogram is exactly `a · M`.
pub fn plan_arrangement(clusters: usize, a: &[BigRational]) -> Result<ClusterArrangement> {
    if a.len() != BLOCK_CLUSTER_SIZE + 1 {
        return Err(Error::Arrangement(format!("expected 5 fractions, got {}", a.len())));
    }
    let sum: BigRational = a.iter().cloned().sum();
    if !sum.is_one() || a.iter().any(Signed::is_negative) {
        return Err(Error::Arrangement("fractions must be nonnegative and sum to 1".into()));
    }
    let m = fraction::int(clusters as i64);
    let counts = a
        .iter()
        .map(|ai| {
            as_count(&(ai * &m)).map(|c| c as i64).ok_or_else(|| {
                Error::Arrangement(format!(
                    "{clusters} clusters times fraction {} is not an integer",
                    fraction::format_fraction(ai)
                ))
            })
        })
        .collect::<Result<Vec<i64>>>()?;
    let (c0, c1, c2, c3, c4) = (counts[0], counts[1], counts[2], counts[3], counts[4]);
    let twig_hubs = c3 - 4 * c4;
    let endpoints = c1 - 2 * c3;
    if twig_hubs < 0 {
        return Err(Error::Arrangement(format!("degree-3 clusters ({c3}) cannot supply {c4} stars")));
    }
    if endpoints < 0 {
        return Err(Error::Arrangement(format!(
            "degree-1 clusters ({c1}) cannot terminate stars and twigs"
        )));
    }
    if twig_hubs % 2 != 0 || endpoints % 2 != 0 {
        return Err(Error::Arrangement("twig hubs and chain endpoints must be even".into()));
    }
    let chains = (endpoints / 2) as usize;
    if chains == 0 && c2 > 0 {
        return Err(Error::Arrangement("degree-2 clusters need at least one chain".into()));
    }
    let chain_interiors = if chains == 0 {
        Vec::new()
    } else {
        let per = c2 as usize / chains;
        let extra = c2 as usize % chains;
        (0..chains).map(|i| per + usize::from(i < extra)).collect()
    };
    Ok(ClusterArrangement {
        clusters,
        fractions: a.to_vec(),
        degree_counts: counts.iter().map(|&c| c as usize).collect(),
        stars: c4 as usize,
        twigs: (twig_hubs / 2) as usize,
        chains,
        isolated: c0 as usize,
        chain_interiors,
    })
}

/// Structured block-base instance with `clusters` blocks: degree-2 variable
/// nodes realize the planned cluster forest; all other degree->1 positions are
/// matched to higher-degree variable nodes by a seeded random permutation.
pub fn build_structured(spec: &EnsembleSpec, clusters: usize, seed: u64) -> Result<CodeInstance> {
    if spec.base != BaseFamily::BlockTldpc {
        return Err(Error::InvalidParameter("structured construction needs the block base".into()));
    }
    let one = spec.distribution.degree_one_fraction();
    if (to_f64(&one) - 1.0 / 3.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "block base fixes the degree-one edge fraction at 1/3, got {}",
            to_f64(&one)
        )));
    }
    let tilde = spec.normalized()?;
    let a = expected_cluster_fractions_exact(&tilde.fraction(2), BLOCK_CLUSTER_SIZE);
    let plan = plan_arrangement(clusters, &a)?;

    let free_positions = BLOCK_CLUSTER_SIZE * clusters - 2 * plan.num_edges();
    let high: Vec<(u32, f64)> = tilde
        .iter()
        .filter(|(d, _)| *d >= 3)
        .map(|(d, f)| (d, to_f64(f) * (BLOCK_CLUSTER_SIZE * clusters) as f64 / d as f64))
        .collect();
    let high_counts = if high.is_empty() {
        if free_positions != 0 {
            return Err(Error::Construction("positions left over without degree >= 3 nodes".into()));
        }
        Vec::new()
    } else {
        round_to_edge_total(&high, free_positions as u64)?
    };

    for attempt in 0..MAX_RESTARTS {
        let effective = seed.wrapping_add(attempt);
        if let Some(instance) = try_structured(&plan, &high, &high_counts, effective)? {
            return Ok(instance);
        }
    }
    Err(Error::Construction("could not avoid repeated edges into a block".into()))
}

fn try_structured(
    plan: &ClusterArrangement,
    high: &[(u32, f64)],
    high_counts: &[u64],
    seed: u64,
) -> Result<Option<CodeInstance>> {
    let clusters = plan.clusters;
    let base = make_block_tldpc_base(clusters)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slot_to_block: Vec<usize> = (0..clusters).collect();
    slot_to_block.shuffle(&mut rng);
    let mut free: Vec<Vec<usize>> = (0..clusters)
        .map(|b| {
            let mut ps = vec![6 * b, 6 * b + 1, 6 * b + 3, 6 * b + 4];
            ps.shuffle(&mut rng);
            ps
        })
        .collect();

    let mut position_to_var = vec![usize::MAX; base.m()];
    let mut next_var = 0;
    for b in 0..clusters {
        for p in [6 * b + 2, 6 * b + 5] {
            position_to_var[p] = next_var;
            next_var += 1;
        }
    }
    for (sa, sb) in plan.slot_edges() {
        let (ba, bb) = (slot_to_block[sa], slot_to_block[sb]);
        let pa = free[ba].pop().expect("cluster degree at most 4");
        let pb = free[bb].pop().expect("cluster degree at most 4");
        position_to_var[pa] = next_var;
        position_to_var[pb] = next_var;
        next_var += 1;
    }

    let remaining: Vec<usize> = free.into_iter().flatten().collect();
    let mut sockets = Vec::with_capacity(remaining.len());
    for (&(degree, _), &count) in high.iter().zip(high_counts) {
        for _ in 0..count {
            sockets.extend(std::iter::repeat(next_var).take(degree as usize));
            next_var += 1;
        }
    }
    debug_assert_eq!(sockets.len(), remaining.len());
    sockets.shuffle(&mut rng);
    if !repair_collisions(&remaining, &mut sockets, |p| p / 6, &mut rng) {
        return Ok(None);
    }
    for (&p, &v) in remaining.iter().zip(&sockets) {
        position_to_var[p] = v;
    }
    let cluster_index = (0..base.m()).map(|p| (p % 3 != 2).then_some(p / 6)).collect();
    CodeInstance::new(base, next_var, position_to_var, seed, Some(cluster_index)).map(Some)
}

/// Swaps sockets until no variable lands twice in the same component.
/// Each collision gets up to [`MAX_SWAP_TRIES`] random swap attempts.
fn repair_collisions(
    positions: &[usize],
    sockets: &mut [usize],
    component_of: impl Fn(usize) -> usize,
    rng: &mut ChaCha8Rng,
) -> bool {
    let mut hits: HashMap<(usize, usize), u32> = HashMap::new();
    for (&p, &v) in positions.iter().zip(sockets.iter()) {
        *hits.entry((v, component_of(p))).or_insert(0) += 1;
    }
    let len = positions.len();
    for k in 0..len {
        let ck = component_of(positions[k]);
        if hits[&(sockets[k], ck)] <= 1 {
            continue;
        }
        let mut fixed = false;
        for _ in 0..MAX_SWAP_TRIES {
            let j = rng.gen_range(0..len);
            let cj = component_of(positions[j]);
            let (vk, vj) = (sockets[k], sockets[j]);
            if vk == vj || ck == cj {
                continue;
            }
            let vk_ok = hits.get(&(vk, cj)).copied().unwrap_or(0) == 0;
            let vj_ok = hits.get(&(vj, ck)).copied().unwrap_or(0) == 0;
            if vk_ok && vj_ok {
                *hits.get_mut(&(vk, ck)).expect("present") -= 1;
                *hits.get_mut(&(vj, cj)).expect("present") -= 1;
                *hits.entry((vk, cj)).or_insert(0) += 1;
                *hits.entry((vj, ck)).or_insert(0) += 1;
                sockets.swap(k, j);
                fixed = true;
                break;
            }
        }
        if !fixed {
            return false;
        }
    }
    true
}

/// Variable-node counts with exactly `n` nodes (largest remainder on node fractions).
fn variable_counts(lambda: &DegreeDistribution, n: usize) -> (Vec<u32>, Vec<u64>) {
    let node = lambda.node_fractions();
    let degrees: Vec<u32> = node.keys().copied().collect();
    let targets: Vec<f64> = node.values().map(|f| to_f64(f) * n as f64).collect();
    (degrees, largest_remainder(&targets, n as u64))
}

/// Check degrees whose degree sum is exactly `edges`.
///
/// Uses the minimum-deviation rounding when an exact solution exists with the
/// listed degrees; otherwise floors the check counts and closes the gap with
/// one extra check of the missing degree (or by growing one check by one).
fn check_degrees_for(rho: &DegreeDistribution, edges: usize) -> Result<Vec<usize>> {
    let targets: Vec<(u32, f64)> = rho
        .iter()
        .map(|(d, f)| (d, to_f64(f) * edges as f64 / d as f64))
        .collect();
    let counts = match round_to_edge_total(&targets, edges as u64) {
        Ok(counts) => counts,
        Err(_) => targets.iter().map(|(_, t)| t.floor() as u64).collect(),
    };
    let mut degrees: Vec<usize> = targets
        .iter()
        .zip(&counts)
        .flat_map(|(&(d, _), &c)| std::iter::repeat(d as usize).take(c as usize))
        .collect();
    let max_degree = rho.max_degree() as usize;
    let mut gap = edges as i64 - degrees.iter().sum::<usize>() as i64;
    while gap > 0 {
        if gap == 1 {
            match degrees.iter_mut().min() {
                Some(d) => *d += 1,
                None => return Err(Error::Construction("a single edge cannot form a check".into())),
            }
            gap = 0;
        } else {
            let d = (gap as usize).min(max_degree.max(2));
            degrees.push(d);
            gap -= d as i64;
        }
    }
    if gap < 0 || degrees.iter().any(|&d| d < 2) {
        return Err(Error::Construction(format!("check degrees cannot realize {edges} edges")));
    }
    degrees.sort_unstable();
    Ok(degrees)
}

/// Configuration-model LDPC instance with `n` variable nodes.
pub fn build_random_ldpc(
    lambda: &DegreeDistribution,
    rho: &DegreeDistribution,
    n: usize,
    seed: u64,
) -> Result<CodeInstance> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !lambda.degree_one_fraction().is_zero() {
        return Err(Error::InvalidParameter(
            "parity-check bases carry no degree-one positions".into(),
        ));
    }
    let (degrees, counts) = variable_counts(lambda, n);
    let mut sockets = Vec::new();
    let mut next_var = 0;
    for (&d, &c) in degrees.iter().zip(&counts) {
        for _ in 0..c {
            sockets.extend(std::iter::repeat(next_var).take(d as usize));
            next_var += 1;
        }
    }
    let base = ldpc_base_from_degrees(&check_degrees_for(rho, sockets.len())?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sockets.shuffle(&mut rng);
    CodeInstance::new(base, n, sockets, seed, None)
}

/// Configuration-model instance over `copies` components of the ensemble's
/// base family (block or custom); degree-one positions get degree-one nodes.
pub fn build_random_over_base(spec: &EnsembleSpec, copies: usize, seed: u64) -> Result<CodeInstance> {
    let base = match &spec.base {
        BaseFamily::BlockTldpc => make_block_tldpc_base(copies)?,
        BaseFamily::Custom { component, degree_one } => custom_base(component.clone(), degree_one, copies)?,
        BaseFamily::Ldpc { .. } => {
            return Err(Error::InvalidParameter("use the LDPC builder for parity-check bases".into()))
        }
    };
    let tilde = spec.normalized()?;
    let mask = base.degree_one_mask().to_vec();
    let big: Vec<usize> = (0..base.m()).filter(|&p| !mask[p]).collect();
    let targets: Vec<(u32, f64)> = tilde
        .iter()
        .map(|(d, f)| (d, to_f64(f) * big.len() as f64 / d as f64))
        .collect();
    let counts = round_to_edge_total(&targets, big.len() as u64)?;

    let mut position_to_var = vec![usize::MAX; base.m()];
    let mut next_var = 0;
    for (p, &is_one) in mask.iter().enumerate() {
        if is_one {
            position_to_var[p] = next_var;
            next_var += 1;
        }
    }
    let mut sockets = Vec::with_capacity(big.len());
    for (&(d, _), &c) in targets.iter().zip(&counts) {
        for _ in 0..c {
            sockets.extend(std::iter::repeat(next_var).take(d as usize));
            next_var += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sockets.shuffle(&mut rng);
    for (&p, &v) in big.iter().zip(&sockets) {
        position_to_var[p] = v;
    }
    CodeInstance::new(base, next_var, position_to_var, seed, None)
}

/// Parity-check matrix over the variable nodes: every dual-basis row of every
/// component with base positions replaced by their variable nodes.
pub fn extract_parity_matrix(instance: &CodeInstance) -> SparseBinMatrix {
    let mut rows = Vec::new();
    for comp in instance.base().components() {
        for &h in comp.code.checks() {
            let mut row: Vec<usize> = comp
                .positions
                .iter()
                .enumerate()
                .filter(|(i, _)| h >> i & 1 == 1)
                .map(|(_, &p)| instance.var_of(p))
                .collect();
            row.sort_unstable();
            // A variable hitting the same check twice cancels out.
            let mut reduced: Vec<usize> = Vec::with_capacity(row.len());
            for v in row {
                if reduced.last() == Some(&v) {
                    reduced.pop();
                } else {
                    reduced.push(v);
                }
            }
            if !reduced.is_empty() {
                rows.push(reduced);
            }
        }
    }
    SparseBinMatrix::new(instance.n(), rows).expect("rows are sorted and in range")
}
