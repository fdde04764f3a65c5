//! Batch evaluation: run every configured system over the corpus, score each
//! summary against wiki and human references at every token cap, and
//! macro-average into a report.
//!
//! Documents are evaluated independently (in parallel) and merged in id
//! order, so two runs over the same corpus and config produce byte-identical
//! reports.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Article, Corpus, ReferenceKind, ReferenceSummary};
use crate::graphrank::RankConfig;
use crate::rouge::{self, RougeScore, RougeVariant};
use crate::summarize::{self, SummarizeError, SummaryRequest, System, SystemSummary};
use crate::vectorspace::{EmbeddingTable, TfidfModel};

/// One evaluated system. Embedding systems are distinguished by the name of
/// the table they run with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemId {
    FirstSentence,
    TextRank,
    LexRank,
    Tfidf,
    Embedding(String),
}

impl SystemId {
    /// The four systems that need no embedding table.
    pub fn baseline_set() -> Vec<SystemId> {
        vec![
            SystemId::FirstSentence,
            SystemId::TextRank,
            SystemId::LexRank,
            SystemId::Tfidf,
        ]
    }

    /// Report label: `1stSent`, `TextRank`, `LexRank`, `TfIdf`, or the
    /// embedding table name.
    pub fn label(&self) -> &str {
        match self {
            SystemId::FirstSentence => "1stSent",
            SystemId::TextRank => "TextRank",
            SystemId::LexRank => "LexRank",
            SystemId::Tfidf => "TfIdf",
            SystemId::Embedding(name) => name,
        }
    }
}

/// How scores against multiple references of one kind are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiRefPolicy {
    /// Keep the reference with the highest f1.
    Best,
    /// Component-wise mean over the references.
    Average,
}

impl std::str::FromStr for MultiRefPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "best" => Ok(MultiRefPolicy::Best),
            "average" | "avg" | "mean" => Ok(MultiRefPolicy::Average),
            other => Err(format!("unknown multi-ref policy '{other}'")),
        }
    }
}

/// Full evaluation configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    /// Token caps applied to both sides of every pair; `None` = uncapped.
    pub caps: Vec<Option<usize>>,
    pub beta: f64,
    pub systems: Vec<SystemId>,
    pub reference_kinds: Vec<ReferenceKind>,
    pub multi_ref_policy: MultiRefPolicy,
    /// Fraction of source sentences each summarizer keeps.
    pub ratio: f64,
    pub rank: RankConfig,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            caps: vec![Some(50), Some(100), Some(150), Some(200), Some(250), None],
            beta: 1.0,
            systems: SystemId::baseline_set(),
            reference_kinds: vec![ReferenceKind::Wiki, ReferenceKind::Human],
            multi_ref_policy: MultiRefPolicy::Best,
            ratio: 0.5,
            rank: RankConfig::default(),
        }
    }
}

/// The fitted models the systems run with.
#[derive(Debug, Clone)]
pub struct Models {
    pub tfidf: TfidfModel,
    pub embeddings: Vec<EmbeddingTable>,
}

impl Models {
    pub fn new(tfidf: TfidfModel) -> Self {
        Models {
            tfidf,
            embeddings: Vec::new(),
        }
    }

    pub fn with_embeddings(mut self, embeddings: Vec<EmbeddingTable>) -> Self {
        self.embeddings = embeddings;
        self
    }

    pub fn embedding(&self, name: &str) -> Option<&EmbeddingTable> {
        self.embeddings.iter().find(|t| t.source_name() == name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("no references supplied")]
    NoReferences,
    #[error("config error: {0}")]
    Config(String),
    #[error("corpus has no accepted articles with sentences")]
    EmptyCorpus,
    #[error(transparent)]
    Summarize(#[from] SummarizeError),
}

/// Produce one system's summary for one document.
pub fn summarize_system(
    system: &SystemId,
    doc: &Article,
    models: &Models,
    ratio: f64,
    rank: &RankConfig,
) -> Result<SystemSummary, EvalError> {
    let summary = match system {
        SystemId::FirstSentence => summarize::first_sentence(doc)?,
        SystemId::TextRank => {
            let scores = summarize::score_textrank(doc, &models.tfidf, rank)?;
            summarize::select(&scores, &SummaryRequest::new(System::TextRank, ratio), doc)
        }
        SystemId::LexRank => {
            let scores = summarize::score_lexrank(doc, &models.tfidf, rank)?;
            summarize::select(&scores, &SummaryRequest::new(System::LexRank, ratio), doc)
        }
        SystemId::Tfidf => {
            let scores = summarize::score_tfidf(doc, &models.tfidf)?;
            summarize::select(&scores, &SummaryRequest::new(System::Tfidf, ratio), doc)
        }
        SystemId::Embedding(name) => {
            let table = models
                .embedding(name)
                .ok_or_else(|| EvalError::Config(format!("no embedding table named '{name}'")))?;
            let scores = summarize::score_embedding(doc, &models.tfidf, table)?;
            summarize::select(
                &scores,
                &SummaryRequest::new(System::TfidfEmbedding, ratio),
                doc,
            )
        }
    };
    Ok(summary)
}

/// Score one system summary against the references of one document. Both
/// sides are truncated at `cap` before scoring; the multi-reference policy
/// picks the combination.
pub fn evaluate_pair(
    sys: &SystemSummary,
    refs: &[&ReferenceSummary],
    cfg: &EvalConfig,
    cap: Option<usize>,
    metric: RougeVariant,
) -> Result<RougeScore, EvalError> {
    if refs.is_empty() {
        return Err(EvalError::NoReferences);
    }
    let sys_tokens = rouge::truncate(&sys.tokens, cap);
    let scores = refs
        .iter()
        .map(|r| rouge::score(metric, sys_tokens, rouge::truncate(&r.tokens, cap), cfg.beta));

    Ok(match cfg.multi_ref_policy {
        MultiRefPolicy::Best => {
            let mut best = RougeScore::ZERO;
            let mut first = true;
            for s in scores {
                if first || s.f1 > best.f1 {
                    best = s;
                    first = false;
                }
            }
            best
        }
        MultiRefPolicy::Average => {
            let mut sum = RougeScore::ZERO;
            let mut count = 0usize;
            for s in scores {
                sum.precision += s.precision;
                sum.recall += s.recall;
                sum.f1 += s.f1;
                count += 1;
            }
            RougeScore {
                precision: sum.precision / count as f64,
                recall: sum.recall / count as f64,
                f1: sum.f1 / count as f64,
            }
        }
    })
}

/// One macro-averaged report row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub system: String,
    pub reference: ReferenceKind,
    pub cap: Option<usize>,
    pub metric: RougeVariant,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub docs: usize,
}

/// The full system × reference × cap × metric table, plus the exclusion
/// accounting needed to reconcile row document counts with the corpus size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<ReportRow>,
    /// Accepted articles with at least one sentence.
    pub doc_total: usize,
    /// Documents lacking any reference of a kind, per kind.
    pub excluded: BTreeMap<ReferenceKind, usize>,
}

impl EvalReport {
    pub fn row(
        &self,
        system: &str,
        reference: ReferenceKind,
        cap: Option<usize>,
        metric: RougeVariant,
    ) -> Option<&ReportRow> {
        self.rows.iter().find(|r| {
            r.system == system && r.reference == reference && r.cap == cap && r.metric == metric
        })
    }
}

fn validate_config(cfg: &EvalConfig, models: &Models) -> Result<(), EvalError> {
    if cfg.systems.is_empty() {
        return Err(EvalError::Config("no systems requested".into()));
    }
    if cfg.caps.is_empty() {
        return Err(EvalError::Config("no caps requested".into()));
    }
    if cfg.reference_kinds.is_empty() {
        return Err(EvalError::Config("no reference kinds requested".into()));
    }
    if !(cfg.beta > 0.0) {
        return Err(EvalError::Config("beta must be positive".into()));
    }
    if !(cfg.ratio > 0.0 && cfg.ratio <= 1.0) {
        return Err(EvalError::Config("ratio must be in (0, 1]".into()));
    }
    for system in &cfg.systems {
        if let SystemId::Embedding(name) = system {
            if models.embedding(name).is_none() {
                return Err(EvalError::Config(format!(
                    "system '{name}' requested but no such embedding table was supplied"
                )));
            }
        }
    }
    Ok(())
}

/// Caps in emission order: ascending, uncapped last, duplicates removed.
fn normalized_caps(caps: &[Option<usize>]) -> Vec<Option<usize>> {
    let mut caps = caps.to_vec();
    caps.sort_by_key(|c| (c.is_none(), c.unwrap_or(0)));
    caps.dedup();
    caps
}

type DocScores = Vec<Option<Vec<RougeScore>>>;

fn evaluate_doc(
    doc: &Article,
    corpus: &Corpus,
    models: &Models,
    cfg: &EvalConfig,
    caps: &[Option<usize>],
) -> Result<DocScores, EvalError> {
    let summaries: Vec<SystemSummary> = cfg
        .systems
        .iter()
        .map(|s| summarize_system(s, doc, models, cfg.ratio, &cfg.rank))
        .collect::<Result<_, _>>()?;

    let mut per_kind = Vec::with_capacity(cfg.reference_kinds.len());
    for kind in &cfg.reference_kinds {
        let refs = corpus.references_of(&doc.id, *kind);
        if refs.is_empty() {
            per_kind.push(None);
            continue;
        }
        let mut flat = Vec::with_capacity(summaries.len() * caps.len() * RougeVariant::ALL.len());
        for summary in &summaries {
            for cap in caps {
                for variant in RougeVariant::ALL {
                    flat.push(evaluate_pair(summary, &refs, cfg, *cap, variant)?);
                }
            }
        }
        per_kind.push(Some(flat));
    }
    Ok(per_kind)
}

/// Evaluate every configured system over the corpus and macro-average the
/// per-document scores. Documents lacking references of a kind are excluded
/// from that kind's rows.
pub fn run_all(corpus: &Corpus, models: &Models, cfg: &EvalConfig) -> Result<EvalReport, EvalError> {
    validate_config(cfg, models)?;
    let caps = normalized_caps(&cfg.caps);

    let docs: Vec<&Article> = corpus
        .accepted()
        .filter(|a| !a.sentences.is_empty())
        .collect();
    if docs.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }

    let per_doc: Vec<DocScores> = docs
        .par_iter()
        .map(|doc| evaluate_doc(doc, corpus, models, cfg, &caps))
        .collect::<Result<_, _>>()?;

    let n_kinds = cfg.reference_kinds.len();
    let n_metrics = RougeVariant::ALL.len();
    let cells = cfg.systems.len() * caps.len() * n_metrics;
    let mut sums = vec![RougeScore::ZERO; n_kinds * cells];
    let mut included = vec![0usize; n_kinds];

    for doc_scores in &per_doc {
        for (ki, maybe) in doc_scores.iter().enumerate() {
            let Some(flat) = maybe else { continue };
            included[ki] += 1;
            for (i, s) in flat.iter().enumerate() {
                let cell = &mut sums[ki * cells + i];
                cell.precision += s.precision;
                cell.recall += s.recall;
                cell.f1 += s.f1;
            }
        }
    }

    let mut rows = Vec::with_capacity(n_kinds * cells);
    for (ci, cap) in caps.iter().enumerate() {
        for (si, system) in cfg.systems.iter().enumerate() {
            for (ki, kind) in cfg.reference_kinds.iter().enumerate() {
                for (vi, metric) in RougeVariant::ALL.iter().enumerate() {
                    let flat_index = (si * caps.len() + ci) * n_metrics + vi;
                    let sum = &sums[ki * cells + flat_index];
                    let docs_in_row = included[ki];
                    let scale = if docs_in_row == 0 {
                        0.0
                    } else {
                        1.0 / docs_in_row as f64
                    };
                    rows.push(ReportRow {
                        system: system.label().to_string(),
                        reference: *kind,
                        cap: *cap,
                        metric: *metric,
                        precision: sum.precision * scale,
                        recall: sum.recall * scale,
                        f1: sum.f1 * scale,
                        docs: docs_in_row,
                    });
                }
            }
        }
    }

    let mut excluded = BTreeMap::new();
    for (ki, kind) in cfg.reference_kinds.iter().enumerate() {
        excluded.insert(*kind, docs.len() - included[ki]);
    }

    Ok(EvalReport {
        rows,
        doc_total: docs.len(),
        excluded,
    })
}

/// Output encodings for [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Table,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "table" => Ok(ReportFormat::Table),
            other => Err(format!("unknown report format '{other}'")),
        }
    }
}

fn cap_label(cap: Option<usize>) -> String {
    match cap {
        Some(c) => c.to_string(),
        None => "none".to_string(),
    }
}

/// Render a report. Table mode shows percentages to 2 decimals in the
/// familiar side-by-side layout; csv and json keep full precision.
pub fn emit_report(report: &EvalReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut out =
                serde_json::to_string_pretty(report).expect("report serialization cannot fail");
            out.push('\n');
            out
        }
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Table => emit_table(report),
    }
}

/// Consecutive rows sharing (system, reference, cap), in report order.
fn grouped_rows(report: &EvalReport) -> Vec<Vec<&ReportRow>> {
    let mut groups: Vec<Vec<&ReportRow>> = Vec::new();
    for row in &report.rows {
        match groups.last_mut() {
            Some(group)
                if group[0].system == row.system
                    && group[0].reference == row.reference
                    && group[0].cap == row.cap =>
            {
                group.push(row);
            }
            _ => groups.push(vec![row]),
        }
    }
    groups
}

fn emit_csv(report: &EvalReport) -> String {
    let mut out = String::from("system,cap,reference,docs");
    for metric in RougeVariant::ALL {
        let tag = match metric {
            RougeVariant::Rouge1 => "rouge1",
            RougeVariant::Rouge2 => "rouge2",
            RougeVariant::RougeL => "rougeL",
            RougeVariant::RougeSu4 => "rougeSU4",
        };
        for component in ["precision", "recall", "f1"] {
            out.push_str(&format!(",{tag}_{component}"));
        }
    }
    out.push('\n');

    for group in grouped_rows(report) {
        let head = group[0];
        out.push_str(&format!(
            "{},{},{},{}",
            head.system,
            cap_label(head.cap),
            head.reference,
            head.docs
        ));
        for metric in RougeVariant::ALL {
            match group.iter().find(|r| r.metric == metric) {
                Some(r) => out.push_str(&format!(",{},{},{}", r.precision, r.recall, r.f1)),
                None => out.push_str(",,,"),
            }
        }
        out.push('\n');
    }
    out
}

fn kind_header(kind: ReferenceKind) -> &'static str {
    match kind {
        ReferenceKind::Wiki => "Wiki Refs",
        ReferenceKind::Human => "Human Refs",
    }
}

fn emit_table(report: &EvalReport) -> String {
    // Distinct kinds and (cap, system) groups in report order.
    let mut kinds: Vec<ReferenceKind> = Vec::new();
    for row in &report.rows {
        if !kinds.contains(&row.reference) {
            kinds.push(row.reference);
        }
    }
    let mut groups: Vec<(String, Option<usize>)> = Vec::new();
    for row in &report.rows {
        let key = (row.system.clone(), row.cap);
        if !groups.contains(&key) {
            groups.push(key);
        }
    }

    let labels: Vec<String> = groups
        .iter()
        .map(|(system, cap)| match cap {
            Some(c) => format!("{system}{c}"),
            None => system.clone(),
        })
        .collect();
    let label_width = labels.iter().map(String::len).max().unwrap_or(6).max(6);

    let metric_width = 8usize;
    let group_width = RougeVariant::ALL.len() * metric_width;

    let mut out = String::new();
    out.push_str(&format!(
        "documents: {} evaluated{}\n",
        report.doc_total,
        report
            .excluded
            .iter()
            .map(|(k, v)| format!("; {k} refs missing for {v}"))
            .collect::<String>()
    ));

    // kind banner
    out.push_str(&" ".repeat(label_width + 5));
    for kind in &kinds {
        let docs = report
            .rows
            .iter()
            .find(|r| r.reference == *kind)
            .map(|r| r.docs)
            .unwrap_or(0);
        let banner = format!("{} (n={})", kind_header(*kind), docs);
        out.push_str(&format!(" | {banner:^width$}", width = group_width));
    }
    out.push('\n');

    // metric header
    out.push_str(&" ".repeat(label_width + 5));
    for _ in &kinds {
        out.push_str(" | ");
        for metric in RougeVariant::ALL {
            out.push_str(&format!("{:>width$}", metric.label(), width = metric_width));
        }
    }
    out.push('\n');

    for ((system, cap), label) in groups.iter().zip(&labels) {
        for (component, pick) in [
            ("pre", 0usize),
            ("rec", 1),
            ("f1", 2),
        ] {
            if pick == 0 {
                out.push_str(&format!("{label:<label_width$} {component:<4}"));
            } else {
                out.push_str(&format!("{:<label_width$} {component:<4}", ""));
            }
            for kind in &kinds {
                out.push_str(" | ");
                for metric in RougeVariant::ALL {
                    let cell = report
                        .rows
                        .iter()
                        .find(|r| {
                            r.system == *system
                                && r.cap == *cap
                                && r.reference == *kind
                                && r.metric == metric
                        })
                        .map(|r| match pick {
                            0 => r.precision,
                            1 => r.recall,
                            _ => r.f1,
                        });
                    match cell {
                        Some(v) => out.push_str(&format!(
                            "{:>width$.2}",
                            v * 100.0,
                            width = metric_width
                        )),
                        None => out.push_str(&format!("{:>width$}", "-", width = metric_width)),
                    }
                }
            }
            out.push('\n');
        }
    }
    out
}
