//! Command-line front end: corpus statistics, per-article summaries, and the
//! batch ROUGE evaluation.
//!
//! Exit codes: 0 on success, 1 on configuration errors, 2 when the corpus
//! cannot be loaded.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crynodeb::corpus::{self, CorpusFormat, CorpusLoad, LoadOptions, ReferenceKind};
use crynodeb::eval::{self, EvalConfig, Models, MultiRefPolicy, ReportFormat, SystemId};
use crynodeb::graphrank::RankConfig;
use crynodeb::summarize::System;
use crynodeb::vectorspace::{EmbeddingTable, TfidfModel};

#[derive(Parser)]
#[command(
    name = "crynodeb",
    version,
    about = "Extractive summarization and ROUGE evaluation for Welsh text"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print corpus statistics: article counts, token histogram, mean lengths
    Stats {
        corpus_root: PathBuf,
        #[arg(long, default_value = "tagged", value_parser = CorpusFormat::from_str)]
        corpus_format: CorpusFormat,
        /// table or csv
        #[arg(long, default_value = "table")]
        format: String,
        #[arg(long, default_value_t = 500)]
        min_tokens: usize,
    },
    /// Write one summary file per accepted article: <id>.<system>.txt
    Summarize {
        corpus_root: PathBuf,
        #[arg(long, value_parser = System::from_str)]
        system: System,
        /// Fraction of source sentences to keep
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
        /// Embedding file (required for --system tfidf_embedding)
        #[arg(long)]
        embeddings: Option<PathBuf>,
        /// Cosine threshold gating graph edges
        #[arg(long, default_value_t = 0.1)]
        threshold: f64,
        #[arg(long, default_value_t = 0.85)]
        damping: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "tagged", value_parser = CorpusFormat::from_str)]
        corpus_format: CorpusFormat,
        #[arg(long, default_value_t = 500)]
        min_tokens: usize,
    },
    /// Score every system against the references at every token cap
    Evaluate {
        corpus_root: PathBuf,
        /// Subset of: first_sentence, textrank, lexrank, tfidf, or an
        /// embedding name given via --embeddings (default: all available)
        #[arg(long, value_delimiter = ',')]
        systems: Vec<String>,
        /// Token caps, e.g. 50,100,150,200,250,none
        #[arg(long, default_value = "50,100,150,200,250,none", value_delimiter = ',')]
        caps: Vec<String>,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Reference kinds: wiki,human
        #[arg(long, default_value = "wiki,human", value_delimiter = ',')]
        refs: Vec<String>,
        #[arg(long, default_value = "best", value_parser = MultiRefPolicy::from_str)]
        multi_ref: MultiRefPolicy,
        /// Embedding tables as name=PATH (repeatable)
        #[arg(long = "embeddings")]
        embeddings: Vec<String>,
        #[arg(long, default_value = "table", value_parser = ReportFormat::from_str)]
        format: ReportFormat,
        /// Output file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
        #[arg(long, default_value_t = 0.1)]
        threshold: f64,
        #[arg(long, default_value_t = 0.85)]
        damping: f64,
        #[arg(long, default_value = "tagged", value_parser = CorpusFormat::from_str)]
        corpus_format: CorpusFormat,
        #[arg(long, default_value_t = 500)]
        min_tokens: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("corpus load failed: {0}")]
    Load(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Load(_) => 2,
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn load(root: &Path, format: CorpusFormat, min_tokens: usize) -> Result<CorpusLoad, CliError> {
    let options = LoadOptions {
        min_tokens,
        ..LoadOptions::default()
    };
    let load = corpus::load_corpus_with(root, format, &options)
        .map_err(|e| CliError::Load(e.to_string()))?;
    for failure in &load.report.failures {
        eprintln!("skipped {}: {}", failure.path.display(), failure.reason);
    }
    Ok(load)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Stats {
            corpus_root,
            corpus_format,
            format,
            min_tokens,
        } => stats(&corpus_root, corpus_format, &format, min_tokens),
        Command::Summarize {
            corpus_root,
            system,
            ratio,
            embeddings,
            threshold,
            damping,
            out,
            corpus_format,
            min_tokens,
        } => summarize_cmd(
            &corpus_root,
            system,
            ratio,
            embeddings.as_deref(),
            threshold,
            damping,
            &out,
            corpus_format,
            min_tokens,
        ),
        Command::Evaluate {
            corpus_root,
            systems,
            caps,
            beta,
            refs,
            multi_ref,
            embeddings,
            format,
            out,
            ratio,
            threshold,
            damping,
            corpus_format,
            min_tokens,
        } => evaluate_cmd(EvaluateArgs {
            corpus_root,
            systems,
            caps,
            beta,
            refs,
            multi_ref,
            embeddings,
            format,
            out,
            ratio,
            threshold,
            damping,
            corpus_format,
            min_tokens,
        }),
    }
}

fn stats(
    root: &Path,
    corpus_format: CorpusFormat,
    format: &str,
    min_tokens: usize,
) -> Result<(), CliError> {
    let load = load(root, corpus_format, min_tokens)?;
    let stats = corpus::corpus_stats(&load.corpus);

    let fmt_mean = |m: Option<f64>| m.map(|v| format!("{v:.1}")).unwrap_or_else(|| "-".into());
    match format {
        "table" => {
            println!(
                "articles: {} accepted, {} rejected",
                stats.article_count, stats.rejected_count
            );
            println!("mean article tokens: {}", fmt_mean(stats.mean_article_tokens));
            println!(
                "mean wiki summary tokens: {}",
                fmt_mean(stats.mean_wiki_summary_tokens)
            );
            println!(
                "mean human summary tokens: {}",
                fmt_mean(stats.mean_human_summary_tokens)
            );
            println!("token histogram (accepted articles):");
            for bin in &stats.histogram {
                let label = match bin.hi {
                    Some(hi) => format!("[{}, {})", bin.lo, hi),
                    None => format!("[{}, +)", bin.lo),
                };
                println!("  {label:<14} {}", bin.count);
            }
        }
        "csv" => {
            let fmt_csv_mean =
                |m: Option<f64>| m.map(|v| v.to_string()).unwrap_or_default();
            println!("key,value");
            println!("accepted,{}", stats.article_count);
            println!("rejected,{}", stats.rejected_count);
            println!("mean_article_tokens,{}", fmt_csv_mean(stats.mean_article_tokens));
            println!(
                "mean_wiki_summary_tokens,{}",
                fmt_csv_mean(stats.mean_wiki_summary_tokens)
            );
            println!(
                "mean_human_summary_tokens,{}",
                fmt_csv_mean(stats.mean_human_summary_tokens)
            );
            for bin in &stats.histogram {
                let label = match bin.hi {
                    Some(hi) => format!("hist_{}_{}", bin.lo, hi),
                    None => format!("hist_{}_plus", bin.lo),
                };
                println!("{label},{}", bin.count);
            }
        }
        other => return Err(CliError::Config(format!("unknown stats format '{other}'"))),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn summarize_cmd(
    root: &Path,
    system: System,
    ratio: f64,
    embeddings: Option<&Path>,
    threshold: f64,
    damping: f64,
    out: &Path,
    corpus_format: CorpusFormat,
    min_tokens: usize,
) -> Result<(), CliError> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(CliError::Config("--ratio must be in (0, 1]".into()));
    }
    let load = load(root, corpus_format, min_tokens)?;
    let corpus = load.corpus;

    let tfidf = TfidfModel::fit(&corpus).map_err(|e| CliError::Config(e.to_string()))?;
    let mut models = Models::new(tfidf);

    let system_id = match system {
        System::FirstSentence => SystemId::FirstSentence,
        System::TextRank => SystemId::TextRank,
        System::LexRank => SystemId::LexRank,
        System::Tfidf => SystemId::Tfidf,
        System::TfidfEmbedding => {
            let path = embeddings.ok_or_else(|| {
                CliError::Config("--system tfidf_embedding needs --embeddings PATH".into())
            })?;
            let table =
                EmbeddingTable::load(path).map_err(|e| CliError::Config(e.to_string()))?;
            let name = table.source_name().to_string();
            models.embeddings.push(table);
            SystemId::Embedding(name)
        }
    };

    fs::create_dir_all(out)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out.display())))?;
    let rank = RankConfig {
        damping,
        edge_threshold: threshold,
        ..RankConfig::default()
    };
    let mut written = 0;
    for article in corpus.accepted() {
        if article.sentences.is_empty() {
            continue;
        }
        let summary = eval::summarize_system(&system_id, article, &models, ratio, &rank)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let path = out.join(format!("{}.{}.txt", article.id, system.name()));
        fs::write(&path, format!("{}\n", summary.text))
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
        written += 1;
    }
    eprintln!("wrote {written} summaries to {}", out.display());
    Ok(())
}

struct EvaluateArgs {
    corpus_root: PathBuf,
    systems: Vec<String>,
    caps: Vec<String>,
    beta: f64,
    refs: Vec<String>,
    multi_ref: MultiRefPolicy,
    embeddings: Vec<String>,
    format: ReportFormat,
    out: Option<PathBuf>,
    ratio: f64,
    threshold: f64,
    damping: f64,
    corpus_format: CorpusFormat,
    min_tokens: usize,
}

fn evaluate_cmd(args: EvaluateArgs) -> Result<(), CliError> {
    let load = load(&args.corpus_root, args.corpus_format, args.min_tokens)?;
    let corpus = load.corpus;

    let mut tables = Vec::new();
    for spec in &args.embeddings {
        let (name, path) = spec.split_once('=').ok_or_else(|| {
            CliError::Config(format!("--embeddings expects name=PATH, got '{spec}'"))
        })?;
        let table = EmbeddingTable::load(Path::new(path))
            .map_err(|e| CliError::Config(e.to_string()))?
            .with_source_name(name);
        tables.push(table);
    }

    let systems = if args.systems.is_empty() {
        let mut all = SystemId::baseline_set();
        all.extend(tables.iter().map(|t| SystemId::Embedding(t.source_name().to_string())));
        all
    } else {
        args.systems
            .iter()
            .map(|token| parse_system_token(token, &tables))
            .collect::<Result<Vec<_>, _>>()?
    };

    let caps = args
        .caps
        .iter()
        .map(|c| parse_cap(c))
        .collect::<Result<Vec<_>, _>>()?;

    let kinds = args
        .refs
        .iter()
        .map(|r| match r.to_lowercase().as_str() {
            "wiki" => Ok(ReferenceKind::Wiki),
            "human" => Ok(ReferenceKind::Human),
            other => Err(CliError::Config(format!("unknown reference kind '{other}'"))),
        })
        .collect::<Result<Vec<_>, _>>()?;

    let tfidf = TfidfModel::fit(&corpus).map_err(|e| CliError::Config(e.to_string()))?;
    let models = Models::new(tfidf).with_embeddings(tables);
    let cfg = EvalConfig {
        caps,
        beta: args.beta,
        systems,
        reference_kinds: kinds,
        multi_ref_policy: args.multi_ref,
        ratio: args.ratio,
        rank: RankConfig {
            damping: args.damping,
            edge_threshold: args.threshold,
            ..RankConfig::default()
        },
    };

    let report =
        eval::run_all(&corpus, &models, &cfg).map_err(|e| CliError::Config(e.to_string()))?;
    let rendered = eval::emit_report(&report, args.format);
    match &args.out {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn parse_system_token(token: &str, tables: &[EmbeddingTable]) -> Result<SystemId, CliError> {
    match token.to_lowercase().replace('-', "_").as_str() {
        "first_sentence" | "firstsent" | "1stsent" => Ok(SystemId::FirstSentence),
        "textrank" => Ok(SystemId::TextRank),
        "lexrank" => Ok(SystemId::LexRank),
        "tfidf" => Ok(SystemId::Tfidf),
        _ => {
            if tables.iter().any(|t| t.source_name() == token) {
                Ok(SystemId::Embedding(token.to_string()))
            } else {
                Err(CliError::Config(format!(
                    "unknown system '{token}' (not a builtin, and no embedding table by that name)"
                )))
            }
        }
    }
}

fn parse_cap(token: &str) -> Result<Option<usize>, CliError> {
    let t = token.trim().to_lowercase();
    if t == "none" {
        return Ok(None);
    }
    let value: usize = t
        .parse()
        .map_err(|_| CliError::Config(format!("bad cap '{token}'")))?;
    if value == 0 {
        return Err(CliError::Config("caps must be positive".into()));
    }
    Ok(Some(value))
}
