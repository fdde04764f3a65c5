//! Sentence-similarity graphs and PageRank power iteration, shared by the
//! TextRank and LexRank summarizers.

use crate::vectorspace::SparseVector;

/// Undirected similarity graph over sentences: a symmetric non-negative
/// weight matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    n: usize,
    weights: Vec<f64>,
}

impl SimilarityGraph {
    /// Zero-weight graph over `n` nodes.
    pub fn new(n: usize) -> Self {
        SimilarityGraph {
            n,
            weights: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    /// Set the symmetric weight of edge `{i, j}`. Diagonal entries stay zero.
    pub fn set_weight(&mut self, i: usize, j: usize, w: f64) {
        assert!(w >= 0.0, "edge weights must be non-negative");
        if i == j {
            return;
        }
        self.weights[i * self.n + j] = w;
        self.weights[j * self.n + i] = w;
    }

    fn row_sum(&self, i: usize) -> f64 {
        self.weights[i * self.n..(i + 1) * self.n].iter().sum()
    }
}

/// Edge weighting: TextRank gates unit weights on the cosine threshold,
/// LexRank keeps the cosine itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeMode {
    Unit,
    Weighted,
}

/// PageRank parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankConfig {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub edge_threshold: f64,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig {
            damping: 0.85,
            tolerance: 1e-6,
            max_iterations: 100,
            edge_threshold: 0.1,
        }
    }
}

/// Pairwise-cosine graph over sentence vectors. An edge exists where the
/// cosine reaches `threshold`; its weight is 1 in [`EdgeMode::Unit`] mode and
/// the cosine itself in [`EdgeMode::Weighted`] mode.
pub fn build_graph(vectors: &[SparseVector], mode: EdgeMode, threshold: f64) -> SimilarityGraph {
    let n = vectors.len();
    let mut graph = SimilarityGraph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let sim = vectors[i].cosine(&vectors[j]);
            if sim >= threshold {
                let w = match mode {
                    EdgeMode::Unit => 1.0,
                    EdgeMode::Weighted => sim,
                };
                graph.set_weight(i, j, w);
            }
        }
    }
    graph
}

/// Result of a power iteration: scores sum to 1; `converged` is false when
/// the iteration hit `max_iterations` before the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct PageRankOutcome {
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration on the row-normalized weight matrix with damping `d`:
/// `p <- (1-d)/n + d * M^T p`. Dangling nodes redistribute uniformly. Stops
/// when the L1 change drops below the tolerance.
pub fn pagerank(graph: &SimilarityGraph, cfg: &RankConfig) -> PageRankOutcome {
    let n = graph.n();
    if n == 0 {
        return PageRankOutcome {
            scores: Vec::new(),
            iterations: 0,
            converged: true,
        };
    }
    let d = cfg.damping;
    let uniform = 1.0 / n as f64;
    let row_sums: Vec<f64> = (0..n).map(|i| graph.row_sum(i)).collect();

    let mut scores = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.max_iterations {
        iterations += 1;
        let mut dangling_mass = 0.0;
        next.iter_mut().for_each(|x| *x = 0.0);
        for j in 0..n {
            if row_sums[j] == 0.0 {
                dangling_mass += scores[j];
                continue;
            }
            let scale = scores[j] / row_sums[j];
            let row = &graph.weights[j * n..(j + 1) * n];
            for (i, &w) in row.iter().enumerate() {
                if w > 0.0 {
                    next[i] += scale * w;
                }
            }
        }
        let base = (1.0 - d) * uniform + d * dangling_mass * uniform;
        let mut delta = 0.0;
        for i in 0..n {
            let value = base + d * next[i];
            delta += (value - scores[i]).abs();
            next[i] = value;
        }
        std::mem::swap(&mut scores, &mut next);
        if delta < cfg.tolerance {
            converged = true;
            break;
        }
    }

    PageRankOutcome {
        scores,
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_vec(indices: &[usize]) -> SparseVector {
        SparseVector::from_pairs(indices.iter().map(|&i| (i, 1.0)).collect())
    }

    #[test]
    fn single_vector_graph_is_zero() {
        let g = build_graph(&[unit_vec(&[0])], EdgeMode::Unit, 0.1);
        assert_eq!(g.n(), 1);
        assert_eq!(g.weight(0, 0), 0.0);
    }

    #[test]
    fn identical_vectors_get_unit_edge() {
        let g = build_graph(&[unit_vec(&[0, 1]), unit_vec(&[0, 1])], EdgeMode::Unit, 0.1);
        assert_eq!(g.weight(0, 1), 1.0);
        assert_eq!(g.weight(1, 0), 1.0);
    }

    #[test]
    fn orthogonal_vectors_get_no_edge() {
        let g = build_graph(&[unit_vec(&[0]), unit_vec(&[1])], EdgeMode::Weighted, 0.1);
        assert_eq!(g.weight(0, 1), 0.0);
    }

    #[test]
    fn weighted_mode_thresholds_cosines() {
        // cosines: (0,1)=0.8, (0,2)=0.05..ish, (1,2)=0.3 by construction below
        let v0 = SparseVector::from_pairs(vec![(0, 1.0), (1, 0.75)]);
        let v1 = SparseVector::from_pairs(vec![(0, 1.0), (1, 0.0)]);
        let c01 = v0.cosine(&v1);
        assert!(c01 > 0.1);
        let v2 = SparseVector::from_pairs(vec![(2, 1.0)]);
        let g = build_graph(&[v0.clone(), v1, v2], EdgeMode::Weighted, 0.1);
        assert!((g.weight(0, 1) - c01).abs() < 1e-12);
        assert_eq!(g.weight(0, 2), 0.0);
        assert_eq!(g.weight(1, 2), 0.0);
    }

    #[test]
    fn pagerank_single_node() {
        let g = SimilarityGraph::new(1);
        let out = pagerank(&g, &RankConfig::default());
        assert_eq!(out.scores, vec![1.0]);
        assert!(out.converged);
    }

    #[test]
    fn pagerank_two_node_symmetric() {
        let mut g = SimilarityGraph::new(2);
        g.set_weight(0, 1, 1.0);
        let out = pagerank(&g, &RankConfig::default());
        assert!((out.scores[0] - 0.5).abs() < 1e-8);
        assert!((out.scores[1] - 0.5).abs() < 1e-8);
    }

    #[test]
    fn pagerank_edgeless_is_uniform() {
        let g = SimilarityGraph::new(4);
        let out = pagerank(&g, &RankConfig::default());
        for s in &out.scores {
            assert!((s - 0.25).abs() < 1e-8);
        }
        assert!(out.converged);
    }

    #[test]
    fn pagerank_path_center_wins() {
        let mut g = SimilarityGraph::new(3);
        g.set_weight(0, 1, 1.0);
        g.set_weight(1, 2, 1.0);
        let out = pagerank(&g, &RankConfig::default());
        assert!(out.converged);
        assert!(out.scores[1] > out.scores[0]);
        assert!(out.scores[1] > out.scores[2]);
        assert!((out.scores[0] - out.scores[2]).abs() < 1e-8, "path ends are exchangeable");
        let sum: f64 = out.scores.iter().sum();
        assert!((sum - 1.0).abs() < 1e-8);
    }

    #[test]
    fn pagerank_star_hub_beats_leaves() {
        let mut g = SimilarityGraph::new(5);
        for leaf in 1..5 {
            g.set_weight(0, leaf, 1.0);
        }
        let out = pagerank(&g, &RankConfig::default());
        for leaf in 1..5 {
            assert!(out.scores[0] > out.scores[leaf]);
            assert!((out.scores[1] - out.scores[leaf]).abs() < 1e-8);
        }
    }

    #[test]
    fn pagerank_reports_non_convergence() {
        let mut g = SimilarityGraph::new(3);
        g.set_weight(0, 1, 1.0);
        g.set_weight(1, 2, 1.0);
        let cfg = RankConfig { max_iterations: 1, ..RankConfig::default() };
        let out = pagerank(&g, &cfg);
        assert!(!out.converged);
        assert_eq!(out.iterations, 1);
        let sum: f64 = out.scores.iter().sum();
        assert!((sum - 1.0).abs() < 1e-8, "even a truncated run stays stochastic");
    }
}
