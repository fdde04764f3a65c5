//! TFIDF fitting, sparse sentence vectors, embedding-weighted dense vectors,
//! and cosine similarity: the shared geometry behind LexRank, the TFIDF
//! summarizer, and the embedding summarizers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use crate::corpus::Corpus;
use crate::text::Sentence;

#[derive(Debug, thiserror::Error)]
pub enum VectorspaceError {
    #[error("corpus has no accepted articles")]
    EmptyCorpus,
    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bad embedding header: {0}")]
    BadHeader(String),
}

/// Sparse vector as strictly increasing `(index, weight)` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    pairs: Vec<(usize, f64)>,
}

impl SparseVector {
    /// Build from unordered pairs; duplicate indices are summed.
    pub fn from_pairs(mut pairs: Vec<(usize, f64)>) -> Self {
        pairs.sort_by_key(|&(i, _)| i);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(pairs.len());
        for (i, w) in pairs {
            match merged.last_mut() {
                Some((last, acc)) if *last == i => *acc += w,
                _ => merged.push((i, w)),
            }
        }
        SparseVector { pairs: merged }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.pairs.iter().map(|(_, w)| w * w).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let mut a = self.pairs.iter().peekable();
        let mut b = other.pairs.iter().peekable();
        let mut sum = 0.0;
        while let (Some(&&(ia, wa)), Some(&&(ib, wb))) = (a.peek(), b.peek()) {
            match ia.cmp(&ib) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    sum += wa * wb;
                    a.next();
                    b.next();
                }
            }
        }
        sum
    }

    pub fn cosine(&self, other: &SparseVector) -> f64 {
        let na = self.norm();
        let nb = other.norm();
        if na == 0.0 || nb == 0.0 {
            return 0.0;
        }
        self.dot(other) / (na * nb)
    }

    pub fn to_dense(&self, dim: usize) -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for &(i, w) in &self.pairs {
            out[i] = w;
        }
        out
    }
}

/// Cosine similarity of two dense vectors; 0 when either norm is 0.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (na * nb)
}

/// TFIDF statistics fitted over the accepted articles of a corpus. The
/// document unit is one article; `idf(t) = ln((1 + N) / (1 + df(t))) + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TfidfModel {
    vocabulary: BTreeMap<String, usize>,
    doc_count: usize,
    doc_freq: Vec<usize>,
    idf: Vec<f64>,
}

impl TfidfModel {
    /// Fit document frequencies and idf weights over every accepted article.
    pub fn fit(corpus: &Corpus) -> Result<Self, VectorspaceError> {
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        let mut doc_count = 0;
        for article in corpus.accepted() {
            doc_count += 1;
            let mut seen: BTreeSet<&str> = BTreeSet::new();
            for sentence in &article.sentences {
                for token in &sentence.tokens {
                    seen.insert(&token.normalized);
                }
            }
            for term in seen {
                *df.entry(term.to_string()).or_insert(0) += 1;
            }
        }
        if doc_count == 0 {
            return Err(VectorspaceError::EmptyCorpus);
        }

        let mut vocabulary = BTreeMap::new();
        let mut doc_freq = Vec::with_capacity(df.len());
        let mut idf = Vec::with_capacity(df.len());
        for (i, (term, freq)) in df.into_iter().enumerate() {
            vocabulary.insert(term, i);
            doc_freq.push(freq);
            idf.push(((1.0 + doc_count as f64) / (1.0 + freq as f64)).ln() + 1.0);
        }
        Ok(TfidfModel {
            vocabulary,
            doc_count,
            doc_freq,
            idf,
        })
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn vocab_len(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn index(&self, term: &str) -> Option<usize> {
        self.vocabulary.get(term).copied()
    }

    /// Number of articles containing `term`; 0 for out-of-vocabulary terms.
    pub fn doc_freq(&self, term: &str) -> usize {
        self.index(term).map_or(0, |i| self.doc_freq[i])
    }

    /// Smoothed idf weight; 0 for out-of-vocabulary terms.
    pub fn idf(&self, term: &str) -> f64 {
        self.index(term).map_or(0.0, |i| self.idf[i])
    }

    /// tf×idf vector of one sentence; raw term counts, out-of-vocabulary
    /// terms contribute nothing.
    pub fn sentence_vector(&self, sentence: &Sentence) -> SparseVector {
        let mut counts: HashMap<usize, f64> = HashMap::new();
        for token in &sentence.tokens {
            if let Some(i) = self.index(&token.normalized) {
                *counts.entry(i).or_insert(0.0) += 1.0;
            }
        }
        SparseVector::from_pairs(
            counts
                .into_iter()
                .map(|(i, tf)| (i, tf * self.idf[i]))
                .collect(),
        )
    }
}

/// Options for the text embedding format. The standard layout starts with a
/// `<count> <dim>` header; the headerless variant infers the dimension from
/// the first row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingFormat {
    pub has_header: bool,
}

impl Default for EmbeddingFormat {
    fn default() -> Self {
        EmbeddingFormat { has_header: true }
    }
}

/// Word-to-vector table loaded from the text vector format.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
    source_name: String,
    skipped_lines: usize,
}

impl EmbeddingTable {
    /// Load from the standard headered text format, naming the table after
    /// the file stem.
    pub fn load(path: &Path) -> Result<Self, VectorspaceError> {
        Self::load_with(path, EmbeddingFormat::default())
    }

    pub fn load_with(path: &Path, format: EmbeddingFormat) -> Result<Self, VectorspaceError> {
        let content = fs::read_to_string(path).map_err(|e| VectorspaceError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "embeddings".to_string());
        Self::parse(&content, format, name)
    }

    /// Parse the text vector format. Malformed rows are skipped and counted;
    /// duplicate words keep their first occurrence.
    pub fn parse(
        content: &str,
        format: EmbeddingFormat,
        source_name: impl Into<String>,
    ) -> Result<Self, VectorspaceError> {
        let mut lines = content.lines();
        let dim = if format.has_header {
            let header = lines
                .next()
                .ok_or_else(|| VectorspaceError::BadHeader("empty file".into()))?;
            let fields: Vec<&str> = header.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(VectorspaceError::BadHeader(format!(
                    "expected '<count> <dim>', got '{header}'"
                )));
            }
            let _count: usize = fields[0]
                .parse()
                .map_err(|_| VectorspaceError::BadHeader(format!("bad count '{}'", fields[0])))?;
            let dim: usize = fields[1]
                .parse()
                .map_err(|_| VectorspaceError::BadHeader(format!("bad dim '{}'", fields[1])))?;
            if dim == 0 {
                return Err(VectorspaceError::BadHeader("dim must be positive".into()));
            }
            Some(dim)
        } else {
            None
        };

        let mut dim = dim;
        let mut vectors: HashMap<String, Vec<f64>> = HashMap::new();
        let mut skipped = 0;
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let Some(word) = fields.next() else {
                skipped += 1;
                continue;
            };
            let values: Result<Vec<f64>, _> = fields.map(str::parse).collect();
            let values = match values {
                Ok(v) => v,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            };
            let expected = match dim {
                Some(d) => d,
                None => {
                    if values.is_empty() {
                        skipped += 1;
                        continue;
                    }
                    dim = Some(values.len());
                    values.len()
                }
            };
            if values.len() != expected {
                skipped += 1;
                continue;
            }
            vectors.entry(word.to_string()).or_insert(values);
        }

        let dim = dim.ok_or_else(|| {
            VectorspaceError::BadHeader("cannot infer dimension from an empty file".into())
        })?;
        Ok(EmbeddingTable {
            dim,
            vectors,
            source_name: source_name.into(),
            skipped_lines: skipped,
        })
    }

    /// Build a table directly; entries with the wrong dimension are ignored.
    pub fn from_entries(
        source_name: impl Into<String>,
        dim: usize,
        entries: impl IntoIterator<Item = (String, Vec<f64>)>,
    ) -> Self {
        let vectors = entries
            .into_iter()
            .filter(|(_, v)| v.len() == dim)
            .collect();
        EmbeddingTable {
            dim,
            vectors,
            source_name: source_name.into(),
            skipped_lines: 0,
        }
    }

    pub fn with_source_name(mut self, name: impl Into<String>) -> Self {
        self.source_name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    /// Rows skipped during parsing because they were malformed.
    pub fn skipped_lines(&self) -> usize {
        self.skipped_lines
    }

    /// tf×idf-weighted mean of the word vectors of a sentence, over tokens
    /// present in both the model and this table. All-out-of-vocabulary
    /// sentences map to the zero vector.
    pub fn sentence_vector(&self, sentence: &Sentence, model: &TfidfModel) -> Vec<f64> {
        let mut counts: HashMap<&str, f64> = HashMap::new();
        for token in &sentence.tokens {
            *counts.entry(token.normalized.as_str()).or_insert(0.0) += 1.0;
        }
        let mut acc = vec![0.0; self.dim];
        let mut weight_sum = 0.0;
        for (term, tf) in counts {
            let idf = model.idf(term);
            if idf == 0.0 {
                continue;
            }
            let Some(vector) = self.get(term) else {
                continue;
            };
            let w = tf * idf;
            for (a, v) in acc.iter_mut().zip(vector) {
                *a += w * v;
            }
            weight_sum += w;
        }
        if weight_sum > 0.0 {
            for a in &mut acc {
                *a /= weight_sum;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Article;
    use crate::text::split_sentences;
    use proptest::prelude::*;

    fn corpus_of(bodies: &[&str]) -> Corpus {
        let articles = bodies
            .iter()
            .enumerate()
            .map(|(i, b)| Article::new(format!("a{i}"), "", *b, vec![]))
            .collect();
        Corpus::build(articles, vec![], 1)
    }

    fn sentence(text: &str) -> Sentence {
        split_sentences(text).into_iter().next().expect("one sentence")
    }

    #[test]
    fn fit_single_article() {
        let corpus = corpus_of(&["Cymru am byth."]);
        let model = TfidfModel::fit(&corpus).unwrap();
        assert_eq!(model.doc_freq("cymru"), 1);
        // N=1, df=1: ln(2/2) + 1
        assert!((model.idf("cymru") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn idf_floor_for_ubiquitous_terms() {
        let corpus = corpus_of(&["cymru wlad", "cymru môr", "cymru hanes"]);
        let model = TfidfModel::fit(&corpus).unwrap();
        assert_eq!(model.doc_freq("cymru"), 3);
        assert!((model.idf("cymru") - 1.0).abs() < 1e-12);
        assert!(model.idf("wlad") > model.idf("cymru"));
    }

    #[test]
    fn oov_terms_have_zero_weight() {
        let corpus = corpus_of(&["cymru am byth."]);
        let model = TfidfModel::fit(&corpus).unwrap();
        assert_eq!(model.index("absennol"), None);
        assert_eq!(model.idf("absennol"), 0.0);
        assert_eq!(model.doc_freq("absennol"), 0);
    }

    #[test]
    fn fit_empty_corpus_errors() {
        let corpus = Corpus::build(vec![], vec![], 500);
        assert!(matches!(TfidfModel::fit(&corpus), Err(VectorspaceError::EmptyCorpus)));
    }

    #[test]
    fn sentence_vector_counts_raw_tf() {
        let corpus = corpus_of(&["cymru am byth."]);
        let model = TfidfModel::fit(&corpus).unwrap();
        let s = sentence("cymru cymru");
        let v = model.sentence_vector(&s);
        let idx = model.index("cymru").unwrap();
        assert_eq!(v.iter().collect::<Vec<_>>(), [(idx, 2.0)]);
    }

    #[test]
    fn sentence_vector_all_oov_is_empty() {
        let corpus = corpus_of(&["cymru am byth."]);
        let model = TfidfModel::fit(&corpus).unwrap();
        let v = model.sentence_vector(&sentence("absennol hollol"));
        assert!(v.is_empty());
    }

    #[test]
    fn disjoint_sentences_are_orthogonal() {
        let corpus = corpus_of(&["cymru môr gwlad hanes"]);
        let model = TfidfModel::fit(&corpus).unwrap();
        let a = model.sentence_vector(&sentence("cymru môr"));
        let b = model.sentence_vector(&sentence("gwlad hanes"));
        assert_eq!(a.cosine(&b), 0.0);
    }

    #[test]
    fn cosine_examples() {
        assert!((cosine(&[1.0, 2.0], &[1.0, 2.0]) - 1.0).abs() < 1e-12);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]), 0.0);
        assert!((cosine(&[1.0, 1.0], &[1.0, 0.0]) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 0.0]), 0.0);
    }

    #[test]
    fn parse_embeddings() {
        let t = EmbeddingTable::parse("2 3\na 1 0 0\nb 0 1 0", EmbeddingFormat::default(), "t")
            .unwrap();
        assert_eq!(t.dim(), 3);
        assert_eq!(t.len(), 2);
        assert_eq!(t.get("a"), Some(&[1.0, 0.0, 0.0][..]));
        assert_eq!(t.skipped_lines(), 0);
    }

    #[test]
    fn parse_embeddings_empty_with_header() {
        let t = EmbeddingTable::parse("0 300", EmbeddingFormat::default(), "t").unwrap();
        assert_eq!(t.dim(), 300);
        assert!(t.is_empty());
    }

    #[test]
    fn parse_embeddings_skips_malformed_rows() {
        let t = EmbeddingTable::parse(
            "3 3\na 1 0 0\nshort 1 0\nbad x y z\nb 0 1 0",
            EmbeddingFormat::default(),
            "t",
        )
        .unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.skipped_lines(), 2);
    }

    #[test]
    fn parse_embeddings_bad_header() {
        assert!(matches!(
            EmbeddingTable::parse("just one", EmbeddingFormat::default(), "t"),
            Err(VectorspaceError::BadHeader(_))
        ));
        assert!(matches!(
            EmbeddingTable::parse("2 0\na 1", EmbeddingFormat::default(), "t"),
            Err(VectorspaceError::BadHeader(_))
        ));
    }

    #[test]
    fn parse_embeddings_headerless() {
        let t = EmbeddingTable::parse(
            "a 1 0\nb 0 1",
            EmbeddingFormat { has_header: false },
            "t",
        )
        .unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn parse_embeddings_duplicates_keep_first() {
        let t = EmbeddingTable::parse("2 2\na 1 0\na 0 1", EmbeddingFormat::default(), "t")
            .unwrap();
        assert_eq!(t.get("a"), Some(&[1.0, 0.0][..]));
    }

    #[test]
    fn sentence_embedding_examples() {
        let corpus = corpus_of(&["un dau."]);
        let model = TfidfModel::fit(&corpus).unwrap();
        let table = EmbeddingTable::from_entries(
            "t",
            2,
            vec![("un".to_string(), vec![1.0, 0.0]), ("dau".to_string(), vec![0.0, 1.0])],
        );

        // all tokens out of vocabulary -> zero vector
        let zero = table.sentence_vector(&sentence("absennol"), &model);
        assert_eq!(zero, vec![0.0, 0.0]);

        // single known token -> exactly its embedding
        let single = table.sentence_vector(&sentence("un"), &model);
        assert_eq!(single, vec![1.0, 0.0]);

        // equal weights -> midpoint
        let mid = table.sentence_vector(&sentence("un dau"), &model);
        assert!((mid[0] - 0.5).abs() < 1e-12 && (mid[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sparse_and_dense_cosine_agree() {
        let a = SparseVector::from_pairs(vec![(0, 1.5), (3, 2.0), (7, 0.25)]);
        let b = SparseVector::from_pairs(vec![(0, 0.5), (2, 1.0), (7, 4.0)]);
        let sparse = a.cosine(&b);
        let dense = cosine(&a.to_dense(8), &b.to_dense(8));
        assert!((sparse - dense).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn cosine_scale_invariant(
            xs in proptest::collection::vec(-100.0f64..100.0, 1..8),
            ys in proptest::collection::vec(-100.0f64..100.0, 1..8),
            alpha in 0.001f64..1000.0,
            beta in 0.001f64..1000.0,
        ) {
            let n = xs.len().min(ys.len());
            let a = &xs[..n];
            let b = &ys[..n];
            let sa: Vec<f64> = a.iter().map(|x| x * alpha).collect();
            let sb: Vec<f64> = b.iter().map(|x| x * beta).collect();
            prop_assert!((cosine(a, b) - cosine(&sa, &sb)).abs() < 1e-9);
        }

        #[test]
        fn embedding_order_invariant(perm in proptest::sample::select(vec![
            ["un", "dau", "tri"], ["dau", "tri", "un"], ["tri", "un", "dau"],
            ["un", "tri", "dau"], ["tri", "dau", "un"], ["dau", "un", "tri"],
        ])) {
            let corpus = corpus_of(&["un dau tri pedwar."]);
            let model = TfidfModel::fit(&corpus).unwrap();
            let table = EmbeddingTable::from_entries("t", 2, vec![
                ("un".to_string(), vec![1.0, 0.0]),
                ("dau".to_string(), vec![0.0, 1.0]),
                ("tri".to_string(), vec![1.0, 1.0]),
            ]);
            let base = table.sentence_vector(&sentence("un dau tri"), &model);
            let shuffled = table.sentence_vector(&sentence(&perm.join(" ")), &model);
            for (x, y) in base.iter().zip(&shuffled) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
