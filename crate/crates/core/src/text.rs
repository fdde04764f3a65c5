//! Tokenization, normalization, and sentence segmentation.
//!
//! Everything downstream (corpus validation, TFIDF, ROUGE) counts and matches
//! the tokens produced here, so the rules are fixed and deterministic: a token
//! is a maximal run of letters/digits, apostrophe-led Welsh clitics (`'r`,
//! `'n`, `'i`, `'u`, `'w`, `'m`, `'ch`) are split off as their own tokens, and
//! punctuation is dropped unless the config keeps it.

/// One token: the surface form as it appeared plus the normalized form used
/// for matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub normalized: String,
}

impl Token {
    fn new(surface: &str, config: TokenizerConfig) -> Self {
        let normalized = if config.lowercase {
            surface.to_lowercase()
        } else {
            surface.to_string()
        };
        Token {
            surface: surface.to_string(),
            normalized,
        }
    }
}

/// Tokenizer switches. Metric and vector-space callers keep the defaults;
/// surface reproduction turns `strip_punctuation` off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    pub strip_punctuation: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            lowercase: true,
            strip_punctuation: true,
        }
    }
}

/// A segmented sentence. `start..end` are byte offsets into the source text;
/// `tokens` is the default-config tokenization of the span and is never empty
/// for a retained sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    pub index: usize,
    pub text: String,
    pub tokens: Vec<Token>,
    pub start: usize,
    pub end: usize,
}

/// Reduced function words that attach to the previous word with an apostrophe
/// and carry their own grammatical weight.
const CLITICS: [&str; 7] = ["ch", "r", "n", "i", "u", "w", "m"];

const APOSTROPHES: [char; 2] = ['\'', '\u{2019}'];

/// Words after which a `.` does not end a sentence.
const ABBREVIATIONS: [&str; 17] = [
    "dr", "mr", "mrs", "ms", "prof", "parch", "e.e", "h.y", "a.y.b", "a.y.y.b", "d.s", "o.n",
    "gw", "gol", "rhif", "t", "tt",
];

fn is_clitic(run: &str) -> bool {
    !run.is_empty() && CLITICS.contains(&run.to_lowercase().as_str())
}

/// Split raw text into tokens.
///
/// Tokens are maximal runs of alphanumeric characters (Welsh diacritics
/// included); an apostrophe-led clitic directly attached to a word becomes its
/// own token, apostrophe included. Empty input yields an empty list.
pub fn tokenize(text: &str, config: TokenizerConfig) -> Vec<Token> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let n = chars.len();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut prev_was_word = false;

    while i < n {
        let (pos, c) = chars[i];
        if c.is_alphanumeric() {
            let mut j = i;
            while j < n && chars[j].1.is_alphanumeric() {
                j += 1;
            }
            let end = if j < n { chars[j].0 } else { text.len() };
            tokens.push(Token::new(&text[pos..end], config));
            i = j;
            prev_was_word = true;
        } else if prev_was_word && APOSTROPHES.contains(&c) {
            // Clitic candidate: the run after the apostrophe must be exactly
            // one of the known clitics, terminated by a non-alphanumeric.
            let mut j = i + 1;
            while j < n && chars[j].1.is_alphanumeric() {
                j += 1;
            }
            let run_end = if j < n { chars[j].0 } else { text.len() };
            let run_start = if i + 1 < n { chars[i + 1].0 } else { text.len() };
            if is_clitic(&text[run_start..run_end]) {
                tokens.push(Token::new(&text[pos..run_end], config));
                i = j;
                prev_was_word = true;
            } else {
                if !config.strip_punctuation {
                    tokens.push(Token::new(&text[pos..pos + c.len_utf8()], config));
                }
                i += 1;
                prev_was_word = false;
            }
        } else {
            if !c.is_whitespace() && !config.strip_punctuation {
                tokens.push(Token::new(&text[pos..pos + c.len_utf8()], config));
            }
            i += 1;
            prev_was_word = false;
        }
    }
    tokens
}

/// Normalized token strings of `text` under the default config. This is the
/// token stream ROUGE and TFIDF operate on.
pub fn normalize_tokens(text: &str) -> Vec<String> {
    tokenize(text, TokenizerConfig::default())
        .into_iter()
        .map(|t| t.normalized)
        .collect()
}

/// Split raw text into sentences.
///
/// Boundaries sit at `.`, `?`, `!` followed by whitespace and an
/// uppercase/digit, and at paragraph breaks. Known abbreviations and initials
/// do not split. Sentences that tokenize to nothing are dropped; indices of
/// retained sentences run consecutively from 0.
pub fn split_sentences(text: &str) -> Vec<Sentence> {
    let mut spans = Vec::new();
    for (p_start, p_end) in paragraphs(text) {
        split_paragraph(text, p_start, p_end, &mut spans);
    }

    let mut sentences = Vec::new();
    for (raw_start, raw_end) in spans {
        let (start, end) = trim_span(text, raw_start, raw_end);
        if start >= end {
            continue;
        }
        let span = &text[start..end];
        let tokens = tokenize(span, TokenizerConfig::default());
        if tokens.is_empty() {
            continue;
        }
        sentences.push(Sentence {
            index: sentences.len(),
            text: span.to_string(),
            tokens,
            start,
            end,
        });
    }
    sentences
}

/// Total token count over a list of sentences.
pub fn count_tokens(sentences: &[Sentence]) -> usize {
    sentences.iter().map(|s| s.tokens.len()).sum()
}

/// Byte spans of paragraphs: runs of lines separated by blank lines.
fn paragraphs(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut current: Option<(usize, usize)> = None;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        if line.trim().is_empty() {
            if let Some(span) = current.take() {
                out.push(span);
            }
        } else {
            let end = line_start + line.trim_end_matches('\n').len();
            match current {
                Some((s, _)) => current = Some((s, end)),
                None => current = Some((line_start, end)),
            }
        }
    }
    if let Some(span) = current {
        out.push(span);
    }
    out
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '?' | '!')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\u{201D}' | '\u{2019}' | '\'' | ')' | ']' | '\u{00BB}')
}

fn split_paragraph(text: &str, p_start: usize, p_end: usize, spans: &mut Vec<(usize, usize)>) {
    let chars: Vec<(usize, char)> = text[p_start..p_end]
        .char_indices()
        .map(|(i, c)| (p_start + i, c))
        .collect();
    let n = chars.len();
    let mut sent_start = p_start;
    let mut i = 0;

    while i < n {
        if !is_terminator(chars[i].1) {
            i += 1;
            continue;
        }
        // Absorb a run of terminators plus trailing closing quotes/brackets.
        let run_start = i;
        let mut j = i;
        while j + 1 < n && (is_terminator(chars[j + 1].1) || is_closer(chars[j + 1].1)) {
            j += 1;
        }
        let run_has_hard_stop = (run_start..=j).any(|k| matches!(chars[k].1, '?' | '!'));
        let span_end = chars[j].0 + chars[j].1.len_utf8();

        // Look past whitespace for an uppercase letter or digit.
        let mut m = j + 1;
        if m >= n {
            break; // paragraph end flushes the remainder
        }
        if !chars[m].1.is_whitespace() {
            i = j + 1;
            continue;
        }
        while m < n && chars[m].1.is_whitespace() {
            m += 1;
        }
        if m >= n {
            break;
        }
        let next = chars[m].1;
        if !(next.is_uppercase() || next.is_ascii_digit()) {
            i = j + 1;
            continue;
        }
        if !run_has_hard_stop && abbreviation_before(text, p_start, chars[run_start].0) {
            i = j + 1;
            continue;
        }
        spans.push((sent_start, span_end));
        sent_start = chars[m].0;
        i = m;
    }

    if sent_start < p_end {
        spans.push((sent_start, p_end));
    }
}

/// True when the word immediately before the period at `dot_pos` is a known
/// abbreviation or a single-letter initial.
fn abbreviation_before(text: &str, floor: usize, dot_pos: usize) -> bool {
    let mut word: Vec<char> = Vec::new();
    for (_, c) in text[floor..dot_pos].char_indices().rev() {
        if c.is_alphanumeric() || c == '.' {
            word.push(c);
        } else {
            break;
        }
    }
    word.reverse();
    let word: String = word.into_iter().collect();
    let word = word.trim_matches('.');
    if word.is_empty() {
        return false;
    }
    let mut letters = word.chars();
    if let (Some(first), None) = (letters.next(), letters.next()) {
        if first.is_alphabetic() && first.is_uppercase() {
            return true;
        }
    }
    ABBREVIATIONS.contains(&word.to_lowercase().as_str())
}

fn trim_span(text: &str, start: usize, end: usize) -> (usize, usize) {
    let span = &text[start..end];
    let trimmed_start = span.len() - span.trim_start().len();
    let trimmed = span.trim_end();
    (start + trimmed_start, start + trimmed_start + trimmed.trim_start().len())
}
