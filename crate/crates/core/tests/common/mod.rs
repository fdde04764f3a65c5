//! Shared helpers for the integration suites: independent oracles (dense
//! linear-solve PageRank, brute-force LCS, pair enumeration, multiset
//! intersection) and seeded synthetic corpus generators. The oracles stay
//! deliberately naive and separate from the library's implementation paths.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crynodeb::corpus::{Article, Corpus, ReferenceSummary};
use crynodeb::graphrank::SimilarityGraph;

// ---------------------------------------------------------------------------
// PageRank oracle: direct dense linear solve
// ---------------------------------------------------------------------------

/// Solve the PageRank fixed point `(I - d*A) p = (1-d)/n * 1` directly, where
/// `A[i][j]` is the probability mass flowing j -> i (uniform for dangling j).
pub fn pagerank_oracle(weights: &[Vec<f64>], damping: f64) -> Vec<f64> {
    let n = weights.len();
    assert!(n > 0);
    let uniform = 1.0 / n as f64;

    let mut transition = vec![vec![0.0; n]; n];
    for j in 0..n {
        let row_sum: f64 = weights[j].iter().sum();
        for i in 0..n {
            transition[i][j] = if row_sum == 0.0 {
                uniform
            } else {
                weights[j][i] / row_sum
            };
        }
    }

    let mut system = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            let identity = if i == j { 1.0 } else { 0.0 };
            system[i][j] = identity - damping * transition[i][j];
        }
        system[i][n] = (1.0 - damping) * uniform;
    }
    gaussian_solve(system)
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn gaussian_solve(mut m: Vec<Vec<f64>>) -> Vec<f64> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot);
        assert!(m[col][col].abs() > 1e-12, "singular system");
        for row in (col + 1)..n {
            let factor = m[row][col] / m[col][col];
            for k in col..=n {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for k in (row + 1)..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    x
}

pub fn graph_weights(graph: &SimilarityGraph) -> Vec<Vec<f64>> {
    (0..graph.n())
        .map(|i| (0..graph.n()).map(|j| graph.weight(i, j)).collect())
        .collect()
}

/// Random symmetric graph with zero diagonal; roughly `density` of the pairs
/// get a weight in (0, 1].
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> SimilarityGraph {
    let mut graph = SimilarityGraph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < density {
                graph.set_weight(i, j, rng.random_range(0.05..1.0));
            }
        }
    }
    graph
}

// ---------------------------------------------------------------------------
// Metric oracles
// ---------------------------------------------------------------------------

/// Exponential-time LCS by plain recursion; no memoization, no DP table.
pub fn lcs_brute_force<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    if a[a.len() - 1] == b[b.len() - 1] {
        1 + lcs_brute_force(&a[..a.len() - 1], &b[..b.len() - 1])
    } else {
        lcs_brute_force(&a[..a.len() - 1], b).max(lcs_brute_force(a, &b[..b.len() - 1]))
    }
}

/// O(n^2) skip-bigram enumeration into a sorted count map.
pub fn skip_bigrams_enumerated<T: Ord + Clone>(
    tokens: &[T],
    max_gap: usize,
) -> BTreeMap<(T, T), usize> {
    let mut counts = BTreeMap::new();
    for i in 0..tokens.len() {
        for j in (i + 1)..tokens.len() {
            if j - i <= max_gap + 1 {
                *counts
                    .entry((tokens[i].clone(), tokens[j].clone()))
                    .or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Sorted n-gram list of a token sequence.
pub fn ngrams_listed<T: Ord + Clone>(tokens: &[T], n: usize) -> Vec<Vec<T>> {
    if tokens.len() < n || n == 0 {
        return Vec::new();
    }
    let mut grams: Vec<Vec<T>> = (0..=tokens.len() - n)
        .map(|i| tokens[i..i + n].to_vec())
        .collect();
    grams.sort();
    grams
}

/// Multiset intersection size of two sorted lists.
pub fn multiset_intersection<T: Ord>(a: &[T], b: &[T]) -> usize {
    let mut i = 0;
    let mut j = 0;
    let mut overlap = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                overlap += 1;
                i += 1;
                j += 1;
            }
        }
    }
    overlap
}

pub fn random_tokens(rng: &mut ChaCha8Rng, max_len: usize, alphabet: u8) -> Vec<u8> {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| rng.random_range(0..alphabet)).collect()
}

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

fn word(index: usize) -> String {
    format!("gair{index}")
}

/// Draw a vocabulary index, skewed toward low indices so documents share
/// common words the way natural text does.
fn skewed_index(rng: &mut ChaCha8Rng, vocab: usize) -> usize {
    let r: f64 = rng.random::<f64>();
    ((r * r) * vocab as f64) as usize % vocab
}

pub fn sentence_text(rng: &mut ChaCha8Rng, len: usize, vocab: usize) -> String {
    let mut words: Vec<String> = (0..len.max(1)).map(|_| word(skewed_index(rng, vocab))).collect();
    let first = &mut words[0];
    let capitalized = first
        .chars()
        .next()
        .map(|c| c.to_uppercase().collect::<String>() + &first[c.len_utf8()..])
        .unwrap_or_default();
    *first = capitalized;
    format!("{}.", words.join(" "))
}

pub fn article_body(
    rng: &mut ChaCha8Rng,
    sentences: usize,
    tokens_per_sentence: std::ops::Range<usize>,
    vocab: usize,
) -> String {
    (0..sentences)
        .map(|_| {
            let len = rng.random_range(tokens_per_sentence.clone());
            sentence_text(rng, len, vocab)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// A corpus whose wiki reference starts with the article's first sentence
/// verbatim and then continues long enough that recall stays below 0.5.
pub fn lead_biased_corpus(seed: u64, n_docs: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = 400;
    let mut articles = Vec::new();
    let mut references = Vec::new();
    for d in 0..n_docs {
        let body = article_body(&mut rng, 12, 8..14, vocab);
        let article = Article::new(format!("doc{d:03}"), format!("Erthygl {d}"), body, vec![]);
        let first = article.sentences[0].text.clone();
        let first_len = article.sentences[0].tokens.len();
        // tail at least twice the lead length, so recall <= 1/3
        let tail = article_body(&mut rng, 4, first_len..(first_len + 4), vocab);
        references.push(ReferenceSummary::wiki(article.id.clone(), format!("{first} {tail}")));
        articles.push(article);
    }
    Corpus::build(articles, references, 1)
}

pub struct SyntheticSpec {
    pub n_docs: usize,
    pub sentences_per_doc: std::ops::Range<usize>,
    pub tokens_per_sentence: std::ops::Range<usize>,
    pub vocab: usize,
    pub human_refs_per_doc: std::ops::Range<usize>,
    pub human_ref_tokens: usize,
    pub min_tokens: usize,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_docs: 20,
            sentences_per_doc: 8..16,
            tokens_per_sentence: 6..16,
            vocab: 600,
            human_refs_per_doc: 1..4,
            human_ref_tokens: 60,
            min_tokens: 1,
        }
    }
}

/// A random corpus with wiki and human references for every article.
pub fn synthetic_corpus(seed: u64, spec: &SyntheticSpec) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut articles = Vec::new();
    let mut references = Vec::new();
    for d in 0..spec.n_docs {
        let n_sentences = rng.random_range(spec.sentences_per_doc.clone());
        let body = article_body(&mut rng, n_sentences, spec.tokens_per_sentence.clone(), spec.vocab);
        let id = format!("doc{d:04}");
        let article = Article::new(&id, format!("Erthygl {d}"), body, vec!["Hanes".into()]);

        // wiki reference: a handful of sentences sampled from the body
        let picks = rng.random_range(1..=3.min(article.sentences.len()));
        let wiki_text = article.sentences[..picks]
            .iter()
            .map(|s| s.text.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        references.push(ReferenceSummary::wiki(&id, wiki_text));

        let n_human = rng.random_range(spec.human_refs_per_doc.clone());
        for h in 0..n_human {
            let per_sentence = 10;
            let text = article_body(
                &mut rng,
                spec.human_ref_tokens / per_sentence,
                per_sentence..per_sentence + 1,
                spec.vocab,
            );
            let quality = rng.random_range(1..=5);
            references.push(
                ReferenceSummary::human(&id, text, Some(format!("ann{h}")), Some(quality))
                    .expect("quality within range"),
            );
        }
        articles.push(article);
    }
    Corpus::build(articles, references, spec.min_tokens)
}
