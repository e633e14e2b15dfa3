// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Hardware connectivity graphs and the genetic algorithm that places
//! features onto qubits.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::infometrics::{pair_mean, MIMatrix};
use crate::rng::Stream;
use crate::{Error, Result};

/// Undirected qubit coupling graph with its derived triplet set.
///
/// Edges are stored as `(lo, hi)` pairs in ascending order; triplets are
/// sorted index triples whose induced subgraph is connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardwareGraph {
    n_qubits: usize,
    edges: Vec<(usize, usize)>,
    triplets: Vec<[usize; 3]>,
    adjacency: Vec<Vec<usize>>,
}

impl HardwareGraph {
    pub fn new(n_qubits: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Graph("graph has no qubits".into()));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n_qubits || b >= n_qubits {
                return Err(Error::Graph(format!(
                    "edge ({a}, {b}) out of range for {n_qubits} qubits"
                )));
            }
            if a == b {
                return Err(Error::Graph(format!("self-loop on qubit {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::Graph(format!("duplicate edge ({a}, {b})")));
            }
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n_qubits];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let mut g = Self {
            n_qubits,
            edges,
            triplets: Vec::new(),
            adjacency,
        };
        g.triplets = enumerate_triplets(&g);
        Ok(g)
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Graph(format!("ring needs at least 3 qubits, got {n}")));
        }
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, &edges)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn triplets(&self) -> &[[usize; 3]] {
        &self.triplets
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// The first `n` qubits reached by breadth-first search from qubit 0,
    /// relabeled `0..n` in visiting order.
    pub fn connected_subgraph(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.n_qubits {
            return Err(Error::Graph(format!(
                "cannot take {n} qubits from a {}-qubit graph",
                self.n_qubits
            )));
        }
        let mut label = vec![usize::MAX; self.n_qubits];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        let mut start = 0;
        // restart from the next unvisited qubit if a component runs out
        while order.len() < n {
            while label[start] != usize::MAX {
                start += 1;
            }
            label[start] = order.len();
            order.push(start);
            queue.push_back(start);
            while let Some(q) = queue.pop_front() {
                for &nb in &self.adjacency[q] {
                    if label[nb] == usize::MAX && order.len() < n {
                        label[nb] = order.len();
                        order.push(nb);
                        queue.push_back(nb);
                    }
                }
            }
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(a, b)| label[a] < n && label[b] < n)
            .map(|&(a, b)| (label[a], label[b]))
            .collect();
        Self::new(n, &edges)
    }
}

/// Heavy-hex patch of `rows x cols` hexagons.
///
/// A honeycomb is laid out as a brick wall (vertex rows joined by
/// alternating verticals) and every honeycomb edge then receives an extra
/// qubit in its middle. Honeycomb vertices come first in row-major order,
/// followed by the edge qubits in edge order. Every qubit has degree at
/// most 3; a single hexagon gives the 12-qubit unit cell.
pub fn heavy_hex_patch(rows: usize, cols: usize) -> Result<HardwareGraph> {
    if rows == 0 || cols == 0 {
        return Err(Error::Graph("heavy-hex patch needs at least one row and column".into()));
    }
    let width = 2 * cols + 1;
    let id = |r: usize, c: usize| r * width + c;
    let mut base = Vec::new();
    for r in 0..=rows {
        for c in 0..width - 1 {
            base.push((id(r, c), id(r, c + 1)));
        }
        if r < rows {
            for c in (0..width).filter(|c| (c + r) % 2 == 0) {
                base.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    let n_base = (rows + 1) * width;
    let mut edges = Vec::with_capacity(2 * base.len());
    for (k, &(a, b)) in base.iter().enumerate() {
        let mid = n_base + k;
        edges.push((a, mid));
        edges.push((mid, b));
    }
    HardwareGraph::new(n_base + base.len(), &edges)
}

/// Every unordered triple whose induced subgraph is connected: a path of
/// length two or a triangle. Each such triple has a qubit adjacent to the
/// other two, so scanning neighbor pairs of every qubit finds them all.
pub fn enumerate_triplets(g: &HardwareGraph) -> Vec<[usize; 3]> {
    let mut out = BTreeSet::new();
    for center in 0..g.n_qubits {
        let nbrs = &g.adjacency[center];
        for (k, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[k + 1..] {
                let mut t = [center, a, b];
                t.sort_unstable();
                out.insert(t);
            }
        }
    }
    out.into_iter().collect()
}

/// Qubit-to-feature permutation: `map[q]` is the feature placed on qubit `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub map: Vec<usize>,
}

impl Assignment {
    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn new(map: Vec<usize>) -> Result<Self> {
        if !is_permutation(&map) {
            return Err(Error::InvalidArgument(format!("{map:?} is not a permutation")));
        }
        Ok(Self { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn feature(&self, qubit: usize) -> usize {
        self.map[qubit]
    }
}

pub fn is_permutation(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    for &v in map {
        if v >= map.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Relative weights of the two- and three-body terms of the fitness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessWeights {
    pub lambda2: f64,
    pub lambda3: f64,
}

impl Default for FitnessWeights {
    fn default() -> Self {
        Self {
            lambda2: 1.0,
            lambda3: 1.0,
        }
    }
}

/// `lambda2 * sum_E J[pi(i), pi(j)] + lambda3 * sum_T J[pi(i), pi(j), pi(k)]`
/// where the triple coupling is the mean of its three pairwise entries.
pub fn fitness(map: &[usize], g: &HardwareGraph, m: &MIMatrix, weights: FitnessWeights) -> Result<f64> {
    if map.len() != g.n_qubits {
        return Err(Error::LengthMismatch {
            expected: g.n_qubits,
            got: map.len(),
        });
    }
    if let Some(&bad) = map.iter().find(|&&f| f >= m.n) {
        return Err(Error::InvalidArgument(format!(
            "feature {bad} outside the {}-feature matrix",
            m.n
        )));
    }
    Ok(fitness_unchecked(map, g, m, weights))
}

fn fitness_unchecked(map: &[usize], g: &HardwareGraph, m: &MIMatrix, weights: FitnessWeights) -> f64 {
    let mut pair_sum = 0.0;
    if weights.lambda2 != 0.0 {
        for &(a, b) in &g.edges {
            pair_sum += m.get(map[a], map[b]);
        }
    }
    let mut triple_sum = 0.0;
    if weights.lambda3 != 0.0 {
        for t in &g.triplets {
            triple_sum += pair_mean(&[map[t[0]], map[t[1]], map[t[2]]], m);
        }
    }
    weights.lambda2 * pair_sum + weights.lambda3 * triple_sum
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population_size: usize,
    pub n_generations: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub elitism_count: usize,
    pub seed: u64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 200,
            n_generations: 500,
            tournament_size: 3,
            crossover_rate: 0.9,
            mutation_rate: 0.2,
            elitism_count: 1,
            seed: 0,
            lambda2: 1.0,
            lambda3: 1.0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.into()));
        if self.population_size < 2 {
            return bad("population_size must be at least 2");
        }
        if self.tournament_size == 0 {
            return bad("tournament_size must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) || !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad("crossover_rate and mutation_rate must lie in [0, 1]");
        }
        if self.elitism_count >= self.population_size {
            return bad("elitism_count must be below population_size");
        }
        if !self.lambda2.is_finite() || !self.lambda3.is_finite() {
            return bad("fitness weights must be finite");
        }
        Ok(())
    }

    pub fn weights(&self) -> FitnessWeights {
        FitnessWeights {
            lambda2: self.lambda2,
            lambda3: self.lambda3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaResult {
    pub assignment: Assignment,
    pub fitness: f64,
    /// Best-so-far fitness after initialization and after each generation.
    pub history: Vec<f64>,
}

/// Runs the genetic algorithm from a random initial population.
pub fn ga_optimize(g: &HardwareGraph, m: &MIMatrix, cfg: &GaConfig) -> Result<GaResult> {
    cfg.validate()?;
    check_sizes(g, m)?;
    let mut stream = Stream::new(cfg.seed);
    let n = g.n_qubits;
    let population = (0..cfg.population_size)
        .map(|_| {
            let mut p: Vec<usize> = (0..n).collect();
            stream.shuffle(&mut p);
            p
        })
        .collect();
    evolve(g, m, cfg, population, stream)
}

/// Runs the genetic algorithm from a caller-supplied population.
pub fn ga_optimize_from(
    g: &HardwareGraph,
    m: &MIMatrix,
    cfg: &GaConfig,
    population: Vec<Vec<usize>>,
) -> Result<GaResult> {
    cfg.validate()?;
    check_sizes(g, m)?;
    if population.len() != cfg.population_size {
        return Err(Error::LengthMismatch {
            expected: cfg.population_size,
            got: population.len(),
        });
    }
    if let Some(p) = population.iter().find(|p| p.len() != g.n_qubits || !is_permutation(p)) {
        return Err(Error::InvalidArgument(format!(
            "{p:?} is not a permutation of the qubits"
        )));
    }
    evolve(g, m, cfg, population, Stream::new(cfg.seed))
}

fn check_sizes(g: &HardwareGraph, m: &MIMatrix) -> Result<()> {
    if m.n != g.n_qubits {
        return Err(Error::InvalidArgument(format!(
            "{} features cannot fill {} qubits one-to-one",
            m.n, g.n_qubits
        )));
    }
    Ok(())
}

fn evolve(
    g: &HardwareGraph,
    m: &MIMatrix,
    cfg: &GaConfig,
    mut population: Vec<Vec<usize>>,
    mut stream: Stream,
) -> Result<GaResult> {
    let weights = cfg.weights();
    let score = |pop: &[Vec<usize>]| -> Vec<f64> { pop.iter().map(|p| fitness_unchecked(p, g, m, weights)).collect() };
    let mut scores = score(&population);
    let (mut best, mut best_fit) = fittest(&population, &scores);
    let mut history = Vec::with_capacity(cfg.n_generations + 1);
    history.push(best_fit);

    for _ in 0..cfg.n_generations {
        let mut ranked: Vec<usize> = (0..population.len()).collect();
        ranked.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        let mut next: Vec<Vec<usize>> = ranked[..cfg.elitism_count]
            .iter()
            .map(|&i| population[i].clone())
            .collect();
        while next.len() < cfg.population_size {
            let p1 = tournament(&scores, cfg.tournament_size, &mut stream);
            let p2 = tournament(&scores, cfg.tournament_size, &mut stream);
            let mut child = if stream.bernoulli(cfg.crossover_rate) {
                order_crossover(&population[p1], &population[p2], &mut stream)
            } else {
                population[p1].clone()
            };
            if stream.bernoulli(cfg.mutation_rate) {
                swap_mutation(&mut child, &mut stream);
            }
            next.push(child);
        }
        population = next;
        scores = score(&population);
        let (cand, cand_fit) = fittest(&population, &scores);
        if cand_fit > best_fit {
            best = cand;
            best_fit = cand_fit;
        }
        history.push(best_fit);
    }
    Ok(GaResult {
        assignment: Assignment { map: best },
        fitness: best_fit,
        history,
    })
}

fn fittest(population: &[Vec<usize>], scores: &[f64]) -> (Vec<usize>, f64) {
    let mut idx = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[idx] {
            idx = i;
        }
    }
    (population[idx].clone(), scores[idx])
}

/// Draws `size` contestants with replacement; the fittest wins, ties to the
/// first drawn.
fn tournament(scores: &[f64], size: usize, stream: &mut Stream) -> usize {
    let mut winner = stream.below(scores.len());
    for _ in 1..size {
        let c = stream.below(scores.len());
        if scores[c] > scores[winner] {
            winner = c;
        }
    }
    winner
}

/// Order crossover (OX): the child keeps `first[lo..=hi]` in place and
/// fills the remaining slots, starting after `hi` and wrapping, with the
/// genes of `second` in the order they appear from `hi + 1`.
pub fn order_crossover(first: &[usize], second: &[usize], stream: &mut Stream) -> Vec<usize> {
    let n = first.len();
    if n < 2 {
        return first.to_vec();
    }
    let (mut lo, mut hi) = (stream.below(n), stream.below(n));
    if lo > hi {
        core::mem::swap(&mut lo, &mut hi);
    }
    ox_with_cuts(first, second, lo, hi)
}

fn ox_with_cuts(first: &[usize], second: &[usize], lo: usize, hi: usize) -> Vec<usize> {
    let n = first.len();
    let mut child = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for i in lo..=hi {
        child[i] = first[i];
        used[first[i]] = true;
    }
    let mut slot = (hi + 1) % n;
    for k in 0..n {
        let gene = second[(hi + 1 + k) % n];
        if used[gene] {
            continue;
        }
        while child[slot] != usize::MAX {
            slot = (slot + 1) % n;
        }
        child[slot] = gene;
        used[gene] = true;
    }
    child
}

/// Swaps two distinct random positions.
pub fn swap_mutation(perm: &mut [usize], stream: &mut Stream) {
    let n = perm.len();
    if n < 2 {
        return;
    }
    let i = stream.below(n);
    let j = (i + 1 + stream.below(n - 1)) % n;
    perm.swap(i, j);
}
