//! The five extractive systems: first-sentence, TextRank, LexRank, TFIDF
//! centroid, and TFIDF-weighted embeddings. Each one scores sentences; the
//! shared [`select`] step keeps the top fraction in original document order.

use std::cmp::Ordering;

use crate::corpus::Article;
use crate::graphrank::{self, EdgeMode, RankConfig};
use crate::vectorspace::{cosine, EmbeddingTable, SparseVector, TfidfModel};

/// Which system to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    FirstSentence,
    TextRank,
    LexRank,
    Tfidf,
    TfidfEmbedding,
}

impl System {
    pub const ALL: [System; 5] = [
        System::FirstSentence,
        System::TextRank,
        System::LexRank,
        System::Tfidf,
        System::TfidfEmbedding,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            System::FirstSentence => "first_sentence",
            System::TextRank => "textrank",
            System::LexRank => "lexrank",
            System::Tfidf => "tfidf",
            System::TfidfEmbedding => "tfidf_embedding",
        }
    }
}

impl std::str::FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().replace('-', "_").as_str() {
            "first_sentence" | "firstsent" | "1stsent" | "first" => Ok(System::FirstSentence),
            "textrank" => Ok(System::TextRank),
            "lexrank" => Ok(System::LexRank),
            "tfidf" => Ok(System::Tfidf),
            "tfidf_embedding" | "embedding" => Ok(System::TfidfEmbedding),
            other => Err(format!("unknown system '{other}'")),
        }
    }
}

/// How much of the document to keep, as a fraction of its sentences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryRequest {
    pub ratio: f64,
    pub system: System,
}

impl SummaryRequest {
    pub fn new(system: System, ratio: f64) -> Self {
        debug_assert!(ratio > 0.0 && ratio <= 1.0, "ratio must be in (0, 1]");
        SummaryRequest { ratio, system }
    }
}

/// An ordered extract: ascending sentence indices, the verbatim text, and the
/// normalized tokens used for scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSummary {
    pub doc_id: String,
    pub system: String,
    pub selected: Vec<usize>,
    pub text: String,
    pub tokens: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum SummarizeError {
    #[error("document '{0}' has no sentences")]
    EmptyDocument(String),
}

fn require_sentences(doc: &Article) -> Result<(), SummarizeError> {
    if doc.sentences.is_empty() {
        Err(SummarizeError::EmptyDocument(doc.id.clone()))
    } else {
        Ok(())
    }
}

/// The lead baseline: always the first sentence, regardless of ratio.
pub fn first_sentence(doc: &Article) -> Result<SystemSummary, SummarizeError> {
    require_sentences(doc)?;
    Ok(assemble(doc, System::FirstSentence.name(), vec![0]))
}

fn sentence_vectors(doc: &Article, model: &TfidfModel) -> Vec<SparseVector> {
    doc.sentences
        .iter()
        .map(|s| model.sentence_vector(s))
        .collect()
}

fn graph_scores(
    doc: &Article,
    model: &TfidfModel,
    cfg: &RankConfig,
    mode: EdgeMode,
) -> Result<Vec<f64>, SummarizeError> {
    require_sentences(doc)?;
    let vectors = sentence_vectors(doc, model);
    let graph = graphrank::build_graph(&vectors, mode, cfg.edge_threshold);
    Ok(graphrank::pagerank(&graph, cfg).scores)
}

/// PageRank over the unit-weight cosine graph.
pub fn score_textrank(
    doc: &Article,
    model: &TfidfModel,
    cfg: &RankConfig,
) -> Result<Vec<f64>, SummarizeError> {
    graph_scores(doc, model, cfg, EdgeMode::Unit)
}

/// PageRank over the cosine-weighted graph.
pub fn score_lexrank(
    doc: &Article,
    model: &TfidfModel,
    cfg: &RankConfig,
) -> Result<Vec<f64>, SummarizeError> {
    graph_scores(doc, model, cfg, EdgeMode::Weighted)
}

fn sparse_centroid(vectors: &[SparseVector]) -> SparseVector {
    let n = vectors.len() as f64;
    let mut pairs = Vec::new();
    for v in vectors {
        pairs.extend(v.iter().map(|(i, w)| (i, w / n)));
    }
    SparseVector::from_pairs(pairs)
}

/// Cosine of each sentence against the document's mean TFIDF vector.
pub fn score_tfidf(doc: &Article, model: &TfidfModel) -> Result<Vec<f64>, SummarizeError> {
    require_sentences(doc)?;
    let vectors = sentence_vectors(doc, model);
    let centroid = sparse_centroid(&vectors);
    Ok(vectors.iter().map(|v| v.cosine(&centroid)).collect())
}

/// Cosine of each sentence against the mean embedding vector.
pub fn score_embedding(
    doc: &Article,
    model: &TfidfModel,
    table: &EmbeddingTable,
) -> Result<Vec<f64>, SummarizeError> {
    require_sentences(doc)?;
    let vectors: Vec<Vec<f64>> = doc
        .sentences
        .iter()
        .map(|s| table.sentence_vector(s, model))
        .collect();
    let n = vectors.len() as f64;
    let mut centroid = vec![0.0; table.dim()];
    for v in &vectors {
        for (c, x) in centroid.iter_mut().zip(v) {
            *c += x / n;
        }
    }
    Ok(vectors.iter().map(|v| cosine(v, &centroid)).collect())
}

/// Keep the `max(1, ceil(ratio * n))` highest-scoring sentences, ties broken
/// toward the earlier sentence, and re-sort them into document order.
pub fn select(scores: &[f64], req: &SummaryRequest, doc: &Article) -> SystemSummary {
    let n = doc.sentences.len();
    assert_eq!(scores.len(), n, "one score per sentence");
    let k = ((req.ratio * n as f64).ceil() as usize).clamp(1, n.max(1));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut selected: Vec<usize> = order.into_iter().take(k).collect();
    selected.sort_unstable();
    assemble(doc, req.system.name(), selected)
}

fn assemble(doc: &Article, system: &str, selected: Vec<usize>) -> SystemSummary {
    let text = selected
        .iter()
        .map(|&i| doc.sentences[i].text.as_str())
        .collect::<Vec<_>>()
        .join(" ");
    let tokens = selected
        .iter()
        .flat_map(|&i| doc.sentences[i].tokens.iter().map(|t| t.normalized.clone()))
        .collect();
    SystemSummary {
        doc_id: doc.id.clone(),
        system: system.to_string(),
        selected,
        text,
        tokens,
    }
}
