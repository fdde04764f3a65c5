//! Extractive single-document summarization and ROUGE evaluation for Welsh
//! text.
//!
//! The pipeline: [`corpus`] ingests the tagged/JSON/CSV dataset formats and
//! pairs each article with its wiki and human reference summaries; [`text`]
//! provides the deterministic tokenizer and sentence splitter everything else
//! counts with; [`vectorspace`] and [`graphrank`] supply the TFIDF geometry
//! and PageRank machinery; [`summarize`] implements the five extractive
//! systems; [`rouge`] scores summaries; and [`eval`] runs the whole batch and
//! renders the macro-averaged report.

pub mod corpus;
pub mod eval;
pub mod graphrank;
pub mod rouge;
pub mod summarize;
pub mod text;
pub mod vectorspace;

pub use corpus::{Article, Corpus, CorpusFormat, ReferenceKind, ReferenceSummary};
pub use eval::{EvalConfig, EvalReport, Models, ReportFormat, SystemId};
pub use graphrank::RankConfig;
pub use rouge::{RougeScore, RougeVariant};
pub use summarize::{SummaryRequest, System, SystemSummary};
pub use vectorspace::{EmbeddingTable, TfidfModel};
