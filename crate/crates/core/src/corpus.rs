//! Corpus ingestion: the tagged article format, JSON and CSV variants,
//! reference summaries, minimum-token validation, and corpus statistics.
//!
//! On-disk layout for the tagged format:
//!
//! ```text
//! root/articles/<id>.txt                       tagged article file
//! root/references/wiki/<id>.txt                plain-text wiki summary
//! root/references/human/<id>.<author>.txt      plain-text human summary,
//!                                              optional first line "quality: <1-5>"
//! ```
//!
//! A JSON corpus is a directory of `.json` files, each holding one article
//! object or an array of them; a CSV corpus is a directory of `.csv` files
//! with columns `id,title,category,text,wiki_summary`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::text::{self, Sentence};

/// A source document with its segmented sentences.
#[derive(Debug, Clone, PartialEq)]
pub struct Article {
    pub id: String,
    pub title: String,
    pub body: String,
    pub categories: Vec<String>,
    pub sentences: Vec<Sentence>,
}

impl Article {
    pub fn new(
        id: impl Into<String>,
        title: impl Into<String>,
        body: impl Into<String>,
        categories: Vec<String>,
    ) -> Self {
        let body = body.into();
        let sentences = text::split_sentences(&body);
        Article {
            id: id.into(),
            title: title.into(),
            body,
            categories,
            sentences,
        }
    }

    pub fn token_count(&self) -> usize {
        text::count_tokens(&self.sentences)
    }
}

/// Which pool a reference summary came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceKind {
    Wiki,
    Human,
}

impl fmt::Display for ReferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceKind::Wiki => write!(f, "wiki"),
            ReferenceKind::Human => write!(f, "human"),
        }
    }
}

/// A gold summary for one document. Wiki references never carry an author or
/// quality score; human references may carry both.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSummary {
    pub doc_id: String,
    pub kind: ReferenceKind,
    pub text: String,
    pub tokens: Vec<String>,
    pub author_id: Option<String>,
    pub quality: Option<u8>,
}

impl ReferenceSummary {
    pub fn wiki(doc_id: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        let tokens = text::normalize_tokens(&text);
        ReferenceSummary {
            doc_id: doc_id.into(),
            kind: ReferenceKind::Wiki,
            text,
            tokens,
            author_id: None,
            quality: None,
        }
    }

    pub fn human(
        doc_id: impl Into<String>,
        text: impl Into<String>,
        author_id: Option<String>,
        quality: Option<u8>,
    ) -> Result<Self, CorpusError> {
        if let Some(q) = quality {
            if !(1..=5).contains(&q) {
                return Err(CorpusError::Malformed(format!(
                    "quality score {q} outside 1-5"
                )));
            }
        }
        let text = text.into();
        let tokens = text::normalize_tokens(&text);
        Ok(ReferenceSummary {
            doc_id: doc_id.into(),
            kind: ReferenceKind::Human,
            text,
            tokens,
            author_id,
            quality,
        })
    }
}

/// Outcome of the minimum-token validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validation {
    Accepted,
    Rejected(String),
}

/// Accept an article iff it holds at least `min_tokens` tokens (inclusive).
pub fn validate_article(article: &Article, min_tokens: usize) -> Validation {
    let count = article.token_count();
    if count >= min_tokens {
        Validation::Accepted
    } else {
        Validation::Rejected(format!("{count} tokens, minimum is {min_tokens}"))
    }
}

/// An immutable set of articles plus their reference summaries, ordered by
/// article id. Articles below the token threshold stay in the collection but
/// are flagged as rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    articles: Vec<Article>,
    references: BTreeMap<String, Vec<ReferenceSummary>>,
    rejected: BTreeMap<String, String>,
    min_tokens: usize,
}

impl Corpus {
    /// Assemble a corpus from parsed parts. Articles are sorted by id;
    /// references whose `doc_id` matches no article are dropped (loaders
    /// report them before calling this).
    pub fn build(
        mut articles: Vec<Article>,
        references: Vec<ReferenceSummary>,
        min_tokens: usize,
    ) -> Self {
        articles.sort_by(|a, b| a.id.cmp(&b.id));
        let ids: BTreeSet<&str> = articles.iter().map(|a| a.id.as_str()).collect();

        let mut by_doc: BTreeMap<String, Vec<ReferenceSummary>> = BTreeMap::new();
        for r in references {
            if ids.contains(r.doc_id.as_str()) {
                by_doc.entry(r.doc_id.clone()).or_default().push(r);
            }
        }
        for refs in by_doc.values_mut() {
            refs.sort_by(|a, b| {
                (a.kind, &a.author_id, &a.text).cmp(&(b.kind, &b.author_id, &b.text))
            });
        }

        let mut rejected = BTreeMap::new();
        for a in &articles {
            if let Validation::Rejected(reason) = validate_article(a, min_tokens) {
                rejected.insert(a.id.clone(), reason);
            }
        }

        Corpus {
            articles,
            references: by_doc,
            rejected,
            min_tokens,
        }
    }

    pub fn articles(&self) -> &[Article] {
        &self.articles
    }

    pub fn get(&self, id: &str) -> Option<&Article> {
        self.articles
            .binary_search_by(|a| a.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.articles[i])
    }

    pub fn is_accepted(&self, id: &str) -> bool {
        !self.rejected.contains_key(id) && self.get(id).is_some()
    }

    /// Articles that passed the minimum-token validation, in id order.
    pub fn accepted(&self) -> impl Iterator<Item = &Article> {
        self.articles
            .iter()
            .filter(move |a| !self.rejected.contains_key(&a.id))
    }

    pub fn accepted_count(&self) -> usize {
        self.articles.len() - self.rejected.len()
    }

    pub fn rejected(&self) -> &BTreeMap<String, String> {
        &self.rejected
    }

    pub fn references(&self, doc_id: &str) -> &[ReferenceSummary] {
        self.references
            .get(doc_id)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn references_of(&self, doc_id: &str, kind: ReferenceKind) -> Vec<&ReferenceSummary> {
        self.references(doc_id)
            .iter()
            .filter(|r| r.kind == kind)
            .collect()
    }

    pub fn min_tokens(&self) -> usize {
        self.min_tokens
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }
}

/// Errors that abort a load outright. Per-file problems go into the
/// [`ParseReport`] instead.
#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed file: {0}")]
    Malformed(String),
}

impl CorpusError {
    fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CorpusError::Io {
            path: path.into(),
            source,
        }
    }
}

/// One skipped input with the reason it was skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseFailure {
    pub path: PathBuf,
    pub reason: String,
}

/// Per-file failures accumulated during a load; never aborts the load.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub failures: Vec<ParseFailure>,
}

impl ParseReport {
    fn push(&mut self, path: impl Into<PathBuf>, reason: impl Into<String>) {
        self.failures.push(ParseFailure {
            path: path.into(),
            reason: reason.into(),
        });
    }

    pub fn is_empty(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn len(&self) -> usize {
        self.failures.len()
    }
}

/// On-disk corpus flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Tagged,
    Json,
    Csv,
}

impl std::str::FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "tagged" | "txt" | "text" => Ok(CorpusFormat::Tagged),
            "json" => Ok(CorpusFormat::Json),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(format!("unknown corpus format '{other}'")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub min_tokens: usize,
    pub category_delimiters: Vec<char>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            min_tokens: 500,
            category_delimiters: vec![',', '\n'],
        }
    }
}

/// A loaded corpus together with the failures encountered while loading it.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusLoad {
    pub corpus: Corpus,
    pub report: ParseReport,
}

/// Parse one tagged article file. The content must contain exactly one
/// `<title>`, one `<text>`, and one `<category>` element, in any order.
pub fn parse_tagged(id: impl Into<String>, content: &str) -> Result<Article, CorpusError> {
    parse_tagged_with(id, content, &[',', '\n'])
}

pub fn parse_tagged_with(
    id: impl Into<String>,
    content: &str,
    category_delimiters: &[char],
) -> Result<Article, CorpusError> {
    let title = extract_tag(content, "title")?;
    let body = extract_tag(content, "text")?;
    let category = extract_tag(content, "category")?;
    let categories = split_categories(category, category_delimiters);
    Ok(Article::new(id, title.trim(), body.trim(), categories))
}

/// Render an [`Article`] back into the tagged format. Inverse of
/// [`parse_tagged`]; used to write fixture corpora.
pub fn render_tagged(article: &Article) -> String {
    format!(
        "<title>{}</title>\n<text>{}</text>\n<category>{}</category>\n",
        article.title,
        article.body,
        article.categories.join(", ")
    )
}

fn split_categories(raw: &str, delimiters: &[char]) -> Vec<String> {
    raw.split(|c| delimiters.contains(&c))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn extract_tag<'a>(content: &'a str, tag: &str) -> Result<&'a str, CorpusError> {
    let open = format!("<{tag}>");
    let close = format!("</{tag}>");
    let opens = content.matches(open.as_str()).count();
    let closes = content.matches(close.as_str()).count();
    if opens == 0 {
        return Err(CorpusError::Malformed(format!("missing {open} element")));
    }
    if opens > 1 || closes > 1 {
        return Err(CorpusError::Malformed(format!("duplicated {open} element")));
    }
    if closes == 0 {
        return Err(CorpusError::Malformed(format!("unclosed {open} element")));
    }
    let start = content.find(open.as_str()).unwrap() + open.len();
    let end = content.find(close.as_str()).unwrap();
    if end < start {
        return Err(CorpusError::Malformed(format!(
            "{close} appears before {open}"
        )));
    }
    Ok(&content[start..end])
}

/// Load a corpus from `root` with default options.
pub fn load_corpus(root: &Path, format: CorpusFormat) -> Result<CorpusLoad, CorpusError> {
    load_corpus_with(root, format, &LoadOptions::default())
}

/// Load a corpus from `root`. Unparsable files are reported, never fatal;
/// only an unreadable root aborts.
pub fn load_corpus_with(
    root: &Path,
    format: CorpusFormat,
    options: &LoadOptions,
) -> Result<CorpusLoad, CorpusError> {
    if !root.is_dir() {
        return Err(CorpusError::io(
            root,
            std::io::Error::new(std::io::ErrorKind::NotFound, "corpus root is not a directory"),
        ));
    }
    match format {
        CorpusFormat::Tagged => load_tagged(root, options),
        CorpusFormat::Json => load_json(root, options),
        CorpusFormat::Csv => load_csv(root, options),
    }
}

fn sorted_files(dir: &Path) -> Result<Vec<PathBuf>, CorpusError> {
    let mut files = Vec::new();
    let entries = fs::read_dir(dir).map_err(|e| CorpusError::io(dir, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| CorpusError::io(dir, e))?;
        let path = entry.path();
        if path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn load_tagged(root: &Path, options: &LoadOptions) -> Result<CorpusLoad, CorpusError> {
    let mut report = ParseReport::default();
    let mut articles = Vec::new();

    let articles_dir = root.join("articles");
    for path in sorted_files(&articles_dir)? {
        let content = match fs::read_to_string(&path) {
            Ok(c) => c,
            Err(e) => {
                report.push(&path, format!("unreadable: {e}"));
                continue;
            }
        };
        match parse_tagged_with(file_stem(&path), &content, &options.category_delimiters) {
            Ok(article) => articles.push(article),
            Err(e) => report.push(&path, e.to_string()),
        }
    }

    let ids: BTreeSet<String> = articles.iter().map(|a| a.id.clone()).collect();
    let mut references = Vec::new();

    let wiki_dir = root.join("references").join("wiki");
    if wiki_dir.is_dir() {
        for path in sorted_files(&wiki_dir)? {
            let id = file_stem(&path);
            let content = match fs::read_to_string(&path) {
                Ok(c) => c,
                Err(e) => {
                    report.push(&path, format!("unreadable: {e}"));
                    continue;
                }
            };
            if !ids.contains(&id) {
                report.push(&path, format!("no matching article '{id}'"));
                continue;
            }
            references.push(ReferenceSummary::wiki(id, content.trim()));
        }
    }

    let human_dir = root.join("references").join("human");
    if human_dir.is_dir() {
        for path in sorted_files(&human_dir)? {
            let stem = file_stem(&path);
            let Some((id, author)) = stem.rsplit_once('.') else {
                report.push(&path, "expected '<id>.<author>' file name");
                continue;
            };
            let content = match fs::read_to_string(&path) {
                Ok(c) => c,
                Err(e) => {
                    report.push(&path, format!("unreadable: {e}"));
                    continue;
                }
            };
            if !ids.contains(id) {
                report.push(&path, format!("no matching article '{id}'"));
                continue;
            }
            let (quality, text) = match split_quality_line(&content) {
                Ok(parts) => parts,
                Err(reason) => {
                    report.push(&path, reason);
                    continue;
                }
            };
            match ReferenceSummary::human(id, text.trim(), Some(author.to_string()), quality) {
                Ok(r) => references.push(r),
                Err(e) => report.push(&path, e.to_string()),
            }
        }
    }

    Ok(CorpusLoad {
        corpus: Corpus::build(articles, references, options.min_tokens),
        report,
    })
}

/// Split an optional leading `quality: <1-5>` line from a human summary file.
fn split_quality_line(content: &str) -> Result<(Option<u8>, &str), String> {
    let mut lines = content.splitn(2, '\n');
    let first = lines.next().unwrap_or("");
    if let Some(rest) = first.trim().strip_prefix("quality:") {
        let value: u8 = rest
            .trim()
            .parse()
            .map_err(|_| format!("bad quality line '{}'", first.trim()))?;
        if !(1..=5).contains(&value) {
            return Err(format!("quality score {value} outside 1-5"));
        }
        Ok((Some(value), lines.next().unwrap_or("")))
    } else {
        Ok((None, content))
    }
}

#[derive(Debug, Deserialize)]
struct JsonHumanSummary {
    author: Option<String>,
    quality: Option<u8>,
    text: String,
}

#[derive(Debug, Deserialize)]
struct JsonArticle {
    id: String,
    #[serde(default)]
    title: String,
    text: String,
    #[serde(default)]
    categories: Vec<String>,
    #[serde(default)]
    wiki_summary: Option<String>,
    #[serde(default)]
    human_summaries: Vec<JsonHumanSummary>,
}

fn load_json(root: &Path, options: &LoadOptions) -> Result<CorpusLoad, CorpusError> {
    let mut report = ParseReport::default();
    let mut articles = Vec::new();
    let mut references = Vec::new();
    let mut seen = BTreeSet::new();

    for path in sorted_files(root)? {
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let content = match fs::read_to_string(&path) {
            Ok(c) => c,
            Err(e) => {
                report.push(&path, format!("unreadable: {e}"));
                continue;
            }
        };
        let parsed: Vec<JsonArticle> = if content.trim_start().starts_with('[') {
            match serde_json::from_str(&content) {
                Ok(v) => v,
                Err(e) => {
                    report.push(&path, format!("invalid json: {e}"));
                    continue;
                }
            }
        } else {
            match serde_json::from_str::<JsonArticle>(&content) {
                Ok(v) => vec![v],
                Err(e) => {
                    report.push(&path, format!("invalid json: {e}"));
                    continue;
                }
            }
        };
        for entry in parsed {
            if !seen.insert(entry.id.clone()) {
                report.push(&path, format!("duplicate article id '{}'", entry.id));
                continue;
            }
            if let Some(summary) = &entry.wiki_summary {
                references.push(ReferenceSummary::wiki(entry.id.clone(), summary.trim()));
            }
            for h in &entry.human_summaries {
                match ReferenceSummary::human(
                    entry.id.clone(),
                    h.text.trim(),
                    h.author.clone(),
                    h.quality,
                ) {
                    Ok(r) => references.push(r),
                    Err(e) => report.push(&path, format!("article '{}': {e}", entry.id)),
                }
            }
            articles.push(Article::new(entry.id, entry.title, entry.text, entry.categories));
        }
    }

    Ok(CorpusLoad {
        corpus: Corpus::build(articles, references, options.min_tokens),
        report,
    })
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    id: String,
    title: String,
    category: String,
    text: String,
    #[serde(default)]
    wiki_summary: Option<String>,
}

fn load_csv(root: &Path, options: &LoadOptions) -> Result<CorpusLoad, CorpusError> {
    let mut report = ParseReport::default();
    let mut articles = Vec::new();
    let mut references = Vec::new();
    let mut seen = BTreeSet::new();

    for path in sorted_files(root)? {
        if path.extension().and_then(|e| e.to_str()) != Some("csv") {
            continue;
        }
        let mut reader = match csv::Reader::from_path(&path) {
            Ok(r) => r,
            Err(e) => {
                report.push(&path, format!("unreadable: {e}"));
                continue;
            }
        };
        for (line, record) in reader.deserialize::<CsvRow>().enumerate() {
            let row = match record {
                Ok(r) => r,
                Err(e) => {
                    report.push(&path, format!("row {}: {e}", line + 2));
                    continue;
                }
            };
            if !seen.insert(row.id.clone()) {
                report.push(&path, format!("duplicate article id '{}'", row.id));
                continue;
            }
            if let Some(summary) = &row.wiki_summary {
                if !summary.trim().is_empty() {
                    references.push(ReferenceSummary::wiki(row.id.clone(), summary.trim()));
                }
            }
            let categories = split_categories(&row.category, &options.category_delimiters);
            articles.push(Article::new(row.id, row.title, row.text, categories));
        }
    }

    Ok(CorpusLoad {
        corpus: Corpus::build(articles, references, options.min_tokens),
        report,
    })
}

/// One histogram bucket over article token counts. `hi = None` marks the
/// overflow bucket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistogramBin {
    pub lo: usize,
    pub hi: Option<usize>,
    pub count: usize,
}

/// Aggregate statistics over the accepted articles of a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub article_count: usize,
    pub rejected_count: usize,
    pub histogram: Vec<HistogramBin>,
    pub mean_article_tokens: Option<f64>,
    pub mean_wiki_summary_tokens: Option<f64>,
    pub mean_human_summary_tokens: Option<f64>,
}

/// Default bin edges: 500-token bins up to 5000, then overflow.
pub fn default_bin_edges() -> Vec<usize> {
    (1..=10).map(|i| i * 500).collect()
}

pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    corpus_stats_with(corpus, &default_bin_edges())
}

/// Statistics with explicit ascending bin edges: bins are `[0, e1), [e1, e2),
/// ..., [e_last, +inf)`.
pub fn corpus_stats_with(corpus: &Corpus, edges: &[usize]) -> CorpusStats {
    let mut histogram: Vec<HistogramBin> = Vec::with_capacity(edges.len() + 1);
    let mut lo = 0;
    for &e in edges {
        histogram.push(HistogramBin { lo, hi: Some(e), count: 0 });
        lo = e;
    }
    histogram.push(HistogramBin { lo, hi: None, count: 0 });

    let mut article_tokens = Vec::new();
    for article in corpus.accepted() {
        let count = article.token_count();
        article_tokens.push(count as f64);
        let bin = histogram
            .iter_mut()
            .find(|b| count >= b.lo && b.hi.map_or(true, |hi| count < hi))
            .expect("bins cover all counts");
        bin.count += 1;
    }

    let mut wiki_tokens = Vec::new();
    let mut human_tokens = Vec::new();
    for article in corpus.accepted() {
        for r in corpus.references(&article.id) {
            match r.kind {
                ReferenceKind::Wiki => wiki_tokens.push(r.tokens.len() as f64),
                ReferenceKind::Human => human_tokens.push(r.tokens.len() as f64),
            }
        }
    }

    CorpusStats {
        article_count: corpus.accepted_count(),
        rejected_count: corpus.rejected().len(),
        histogram,
        mean_article_tokens: mean(&article_tokens),
        mean_wiki_summary_tokens: mean(&wiki_tokens),
        mean_human_summary_tokens: mean(&human_tokens),
    }
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}
