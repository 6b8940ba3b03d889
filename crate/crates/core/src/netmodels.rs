//! Synthetic networks used as oracles for the fitter: preferential
//! attachment (scale-free), ring rewiring (small-world), and noisy Zipf
//! rank series.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::RankedSeries;
use crate::error::{Error, Result};
use crate::powerlaw::{self, PowerLawFit};
use crate::stats;

/// Graphs up to this size get exhaustive all-pairs path lengths in
/// [`small_world_scaling`]; larger ones are sampled.
pub const EXHAUSTIVE_LIMIT: usize = 2000;

/// Pairs drawn per graph above [`EXHAUSTIVE_LIMIT`].
pub const SAMPLED_PAIRS: usize = 20_000;

/// Simple undirected graph: no self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticGraph {
    adjacency: Vec<Vec<usize>>,
    seed: u64,
}

impl SyntheticGraph {
    /// Builds a graph from an explicit edge list.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut sets = vec![BTreeSet::new(); node_count];
        for &(u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) references a node outside 0..{node_count}"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at node {u}")));
            }
            if !sets[u].insert(v) || !sets[v].insert(u) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge ({u}, {v})"
                )));
            }
        }
        Ok(Self::from_sets(sets, 0))
    }

    fn from_sets(sets: Vec<BTreeSet<usize>>, seed: u64) -> Self {
        Self {
            adjacency: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            seed,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// One `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edge_count() * 12);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Hop distances from `source`; `usize::MAX` marks unreachable nodes.
    pub fn bfs(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let d = dist[u] + 1;
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = d;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn reachable_from_zero(&self) -> usize {
        if self.node_count() == 0 {
            return 0;
        }
        self.bfs(0).iter().filter(|&&d| d != usize::MAX).count()
    }

    pub fn is_connected(&self) -> bool {
        self.reachable_from_zero() == self.node_count()
    }
}

/// Grows a graph from a clique of `m + 1` nodes; each later node links to
/// `m` distinct existing nodes chosen with probability proportional to degree.
pub fn gen_preferential_attachment(n: usize, m: usize, seed: u64) -> Result<SyntheticGraph> {
    if m == 0 || n <= m {
        return Err(Error::InvalidParameter(format!(
            "preferential attachment needs n > m >= 1, got n={n}, m={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = vec![BTreeSet::new(); n];
    // Every edge contributes both endpoints, so uniform draws from this list
    // are degree-proportional.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * m * n);

    for u in 0..=m {
        for v in (u + 1)..=m {
            sets[u].insert(v);
            sets[v].insert(u);
            endpoints.push(u);
            endpoints.push(v);
        }
    }

    let mut targets: Vec<usize> = Vec::with_capacity(m);
    for new in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            sets[new].insert(t);
            sets[t].insert(new);
            endpoints.push(new);
            endpoints.push(t);
        }
    }
    Ok(SyntheticGraph::from_sets(sets, seed))
}

/// Ring lattice where each node links to its `k_ring / 2` clockwise
/// neighbours, then every lattice edge is rewired with probability `beta`
/// to a uniformly chosen new endpoint.
pub fn gen_small_world(n: usize, k_ring: usize, beta: f64, seed: u64) -> Result<SyntheticGraph> {
    if k_ring < 2 || !k_ring.is_multiple_of(2) || n <= k_ring {
        return Err(Error::InvalidParameter(format!(
            "small-world needs n > k_ring >= 2 with k_ring even, got n={n}, k_ring={k_ring}"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidParameter(format!(
            "rewiring probability must be in [0, 1], got {beta}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=k_ring / 2 {
            let v = (u + j) % n;
            sets[u].insert(v);
            sets[v].insert(u);
        }
    }

    if beta > 0.0 {
        for j in 1..=k_ring / 2 {
            for u in 0..n {
                if rng.random::<f64>() >= beta {
                    continue;
                }
                let v = (u + j) % n;
                if !sets[u].contains(&v) || sets[u].len() >= n - 1 {
                    continue;
                }
                let w = loop {
                    let w = rng.random_range(0..n);
                    if w != u && !sets[u].contains(&w) {
                        break w;
                    }
                };
                sets[u].remove(&v);
                sets[v].remove(&u);
                sets[u].insert(w);
                sets[w].insert(u);
            }
        }
    }
    Ok(SyntheticGraph::from_sets(sets, seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeCount {
    pub degree: usize,
    pub frequency: usize,
}

/// Degree histogram, most frequent degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeDistribution {
    pub entries: Vec<DegreeCount>,
}

impl DegreeDistribution {
    /// Power-law fit of frequency against degree. Degree 0 is skipped.
    pub fn fit_exponent(&self) -> Result<PowerLawFit> {
        let points: Vec<(f64, f64)> = self
            .entries
            .iter()
            .filter(|e| e.degree > 0)
            .map(|e| (e.degree as f64, e.frequency as f64))
            .collect();
        powerlaw::fit_points(&points)
    }
}

pub fn degree_distribution(g: &SyntheticGraph) -> DegreeDistribution {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for d in g.degrees() {
        *counts.entry(d).or_default() += 1;
    }
    let mut entries: Vec<DegreeCount> = counts
        .into_iter()
        .map(|(degree, frequency)| DegreeCount { degree, frequency })
        .collect();
    entries.sort_by(|a, b| b.frequency.cmp(&a.frequency).then(a.degree.cmp(&b.degree)));
    DegreeDistribution { entries }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathLengthSample {
    pub node_count: usize,
    pub mean_path_length: f64,
    pub pairs_sampled: usize,
}

/// Mean shortest-path hop count. `pairs_sampled == 0` means every unordered
/// pair; otherwise that many random pairs are drawn from `seed`.
pub fn mean_path_length(
    g: &SyntheticGraph,
    pairs_sampled: usize,
    seed: u64,
) -> Result<PathLengthSample> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "path length needs at least 2 nodes, got {n}"
        )));
    }
    let reached = g.reachable_from_zero();
    if reached != n {
        return Err(Error::Disconnected { reached, total: n });
    }

    if pairs_sampled == 0 {
        let total: u64 = (0..n)
            .into_par_iter()
            .map(|s| g.bfs(s)[s + 1..].iter().map(|&d| d as u64).sum::<u64>())
            .sum();
        let pairs = n * (n - 1) / 2;
        return Ok(PathLengthSample {
            node_count: n,
            mean_path_length: total as f64 / pairs as f64,
            pairs_sampled: pairs,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_source: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for _ in 0..pairs_sampled {
        let u = rng.random_range(0..n);
        let v = loop {
            let v = rng.random_range(0..n);
            if v != u {
                break v;
            }
        };
        by_source.entry(u).or_default().push(v);
    }
    let jobs: Vec<(usize, Vec<usize>)> = by_source.into_iter().collect();
    let total: u64 = jobs
        .par_iter()
        .map(|(s, targets)| {
            let dist = g.bfs(*s);
            targets.iter().map(|&t| dist[t] as u64).sum::<u64>()
        })
        .sum();
    Ok(PathLengthSample {
        node_count: n,
        mean_path_length: total as f64 / pairs_sampled as f64,
        pairs_sampled,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub samples: Vec<PathLengthSample>,
    /// Pearson correlation of mean path length with `ln N`.
    pub correlation: f64,
}

/// Mean path length of small-world graphs across several sizes, and how
/// strongly it tracks `ln N`.
pub fn small_world_scaling(
    sizes: &[usize],
    k_ring: usize,
    beta: f64,
    seed: u64,
) -> Result<ScalingReport> {
    if sizes.len() < 3 {
        return Err(Error::InsufficientData {
            context: "small-world scaling".into(),
            needed: 3,
            got: sizes.len(),
        });
    }
    if sizes.iter().all(|&s| s == sizes[0]) {
        return Err(Error::Degenerate(
            "correlation with ln N is undefined when every size is equal".into(),
        ));
    }
    let mut samples = Vec::with_capacity(sizes.len());
    for (i, &n) in sizes.iter().enumerate() {
        let graph_seed = seed.wrapping_add(i as u64);
        let g = gen_small_world(n, k_ring, beta, graph_seed)?;
        let pairs = if n <= EXHAUSTIVE_LIMIT {
            0
        } else {
            SAMPLED_PAIRS
        };
        samples.push(mean_path_length(&g, pairs, graph_seed)?);
    }
    let ln_n: Vec<f64> = samples.iter().map(|s| (s.node_count as f64).ln()).collect();
    let lengths: Vec<f64> = samples.iter().map(|s| s.mean_path_length).collect();
    let correlation = stats::pearson(&ln_n, &lengths)?;
    Ok(ScalingReport {
        samples,
        correlation,
    })
}

/// `count` values `(top / n) * (1 + e_n)` with `e_n` uniform in
/// `[-noise, noise]`, re-sorted descending.
pub fn gen_zipf_dataset(top: f64, count: usize, seed: u64, noise: f64) -> Result<RankedSeries> {
    if !(top > 0.0) || !top.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "rank-1 value must be positive, got {top}"
        )));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&noise) {
        return Err(Error::InvalidParameter(format!(
            "noise must be in [0, 1), got {noise}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (1..=count)
        .map(|n| {
            let base = top / n as f64;
            if noise == 0.0 {
                base
            } else {
                base * (1.0 + rng.random_range(-noise..=noise))
            }
        })
        .collect();
    Ok(RankedSeries::from_values("zipf", values))
}
