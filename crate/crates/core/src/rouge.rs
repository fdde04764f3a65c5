//! ROUGE-1/2/L/SU4 with precision, recall, and F-beta, plus token-cap
//! truncation.
//!
//! Overlap counting clips per unit: a unit contributes
//! `min(count_sys, count_ref)`, so precision and recall never exceed 1. Empty
//! unit sets make the corresponding ratio 0, never an error.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

/// Precision/recall/F triple, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    pub const ZERO: RougeScore = RougeScore {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    };
}

/// The four metric variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RougeVariant {
    #[serde(rename = "rouge1")]
    Rouge1,
    #[serde(rename = "rouge2")]
    Rouge2,
    #[serde(rename = "rougeL")]
    RougeL,
    #[serde(rename = "rougeSU4")]
    RougeSu4,
}

impl RougeVariant {
    pub const ALL: [RougeVariant; 4] = [
        RougeVariant::Rouge1,
        RougeVariant::Rouge2,
        RougeVariant::RougeL,
        RougeVariant::RougeSu4,
    ];

    /// Column label in the report tables.
    pub fn label(&self) -> &'static str {
        match self {
            RougeVariant::Rouge1 => "RGE-1",
            RougeVariant::Rouge2 => "RGE-2",
            RougeVariant::RougeL => "RGE-L",
            RougeVariant::RougeSu4 => "RGE-SU4",
        }
    }
}

impl std::str::FromStr for RougeVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "rouge1" | "rouge-1" | "1" => Ok(RougeVariant::Rouge1),
            "rouge2" | "rouge-2" | "2" => Ok(RougeVariant::Rouge2),
            "rougel" | "rouge-l" | "l" => Ok(RougeVariant::RougeL),
            "rougesu4" | "rouge-su4" | "su4" => Ok(RougeVariant::RougeSu4),
            other => Err(format!("unknown rouge variant '{other}'")),
        }
    }
}

/// Metric configuration: F weighting, variant, and optional token cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RougeConfig {
    pub beta: f64,
    pub variant: RougeVariant,
    pub cap: Option<usize>,
}

impl Default for RougeConfig {
    fn default() -> Self {
        RougeConfig {
            beta: 1.0,
            variant: RougeVariant::Rouge1,
            cap: None,
        }
    }
}

/// First `cap` tokens; `None` leaves the list unchanged.
pub fn truncate<T>(tokens: &[T], cap: Option<usize>) -> &[T] {
    match cap {
        Some(c) => &tokens[..tokens.len().min(c)],
        None => tokens,
    }
}

/// Contiguous n-grams with multiplicity, keyed by token subslices.
pub fn ngram_counts<T: Eq + Hash>(tokens: &[T], n: usize) -> HashMap<&[T], usize> {
    let mut counts = HashMap::new();
    if n == 0 || tokens.len() < n {
        return counts;
    }
    for i in 0..=tokens.len() - n {
        *counts.entry(&tokens[i..i + n]).or_insert(0) += 1;
    }
    counts
}

/// Ordered pairs `(tokens[i], tokens[j])` with at most `max_gap` intervening
/// tokens, with multiplicity.
pub fn skip_bigram_counts<T: Eq + Hash>(
    tokens: &[T],
    max_gap: usize,
) -> HashMap<(&T, &T), usize> {
    let mut counts = HashMap::new();
    for i in 0..tokens.len() {
        let hi = tokens.len().min(i + max_gap + 2);
        for j in (i + 1)..hi {
            *counts.entry((&tokens[i], &tokens[j])).or_insert(0) += 1;
        }
    }
    counts
}

fn clipped_overlap<K: Eq + Hash>(a: &HashMap<K, usize>, b: &HashMap<K, usize>) -> usize {
    a.iter()
        .map(|(k, &c)| c.min(b.get(k).copied().unwrap_or(0)))
        .sum()
}

fn unit_total<K>(m: &HashMap<K, usize>) -> usize {
    m.values().sum()
}

fn ratio_score(overlap: usize, sys_units: usize, ref_units: usize, beta: f64) -> RougeScore {
    let precision = if sys_units == 0 {
        0.0
    } else {
        overlap as f64 / sys_units as f64
    };
    let recall = if ref_units == 0 {
        0.0
    } else {
        overlap as f64 / ref_units as f64
    };
    RougeScore {
        precision,
        recall,
        f1: f_measure(precision, recall, beta),
    }
}

/// `(1 + beta^2) * r * p / (r + beta^2 * p)`, or 0 when the denominator is 0.
/// beta > 1 favors recall, beta < 1 favors precision.
pub fn f_measure(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = recall + b2 * precision;
    if denom == 0.0 {
        0.0
    } else {
        (1.0 + b2) * recall * precision / denom
    }
}

/// ROUGE-N over contiguous n-grams.
pub fn rouge_n<T: Eq + Hash>(sys: &[T], reference: &[T], n: usize, beta: f64) -> RougeScore {
    let sys_counts = ngram_counts(sys, n);
    let ref_counts = ngram_counts(reference, n);
    ratio_score(
        clipped_overlap(&sys_counts, &ref_counts),
        unit_total(&sys_counts),
        unit_total(&ref_counts),
        beta,
    )
}

/// Length of the longest common subsequence (order-preserving, not
/// necessarily contiguous).
pub fn lcs_length<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut curr = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            curr[j + 1] = if x == y {
                prev[j] + 1
            } else {
                curr[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// ROUGE-L over each summary as a single token sequence.
pub fn rouge_l<T: PartialEq>(sys: &[T], reference: &[T], beta: f64) -> RougeScore {
    ratio_score(lcs_length(sys, reference), sys.len(), reference.len(), beta)
}

/// ROUGE-SU4: skip-bigrams with a maximum gap of 4, plus unigrams.
pub fn rouge_su4<T: Eq + Hash>(sys: &[T], reference: &[T], beta: f64) -> RougeScore {
    let sys_skip = skip_bigram_counts(sys, 4);
    let ref_skip = skip_bigram_counts(reference, 4);
    let sys_uni = ngram_counts(sys, 1);
    let ref_uni = ngram_counts(reference, 1);
    let overlap = clipped_overlap(&sys_skip, &ref_skip) + clipped_overlap(&sys_uni, &ref_uni);
    let sys_units = unit_total(&sys_skip) + unit_total(&sys_uni);
    let ref_units = unit_total(&ref_skip) + unit_total(&ref_uni);
    ratio_score(overlap, sys_units, ref_units, beta)
}

/// Score a pair of token lists under one variant.
pub fn score<T: Eq + Hash>(
    variant: RougeVariant,
    sys: &[T],
    reference: &[T],
    beta: f64,
) -> RougeScore {
    match variant {
        RougeVariant::Rouge1 => rouge_n(sys, reference, 1, beta),
        RougeVariant::Rouge2 => rouge_n(sys, reference, 2, beta),
        RougeVariant::RougeL => rouge_l(sys, reference, beta),
        RougeVariant::RougeSu4 => rouge_su4(sys, reference, beta),
    }
}
