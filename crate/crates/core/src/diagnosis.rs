//! Text analysis: sentence splitting, parsing, best-parse selection and
//! outcome classification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chart::{extract_parses, parse, Budget};
use crate::grammar::{tokenize, ErrorCode, Grammar};
use crate::omission::{MissingFilter, OmissionPolicy};

/// One diagnosed error. Spans are half open; `char_span` counts Unicode
/// scalar values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ErrorRecord {
    pub code: ErrorCode,
    pub message: String,
    pub token_span: [usize; 2],
    pub char_span: [usize; 2],
}

impl ErrorRecord {
    /// The characters of `text` covered by `char_span`.
    pub fn highlighted(&self, text: &str) -> String {
        text.chars().skip(self.char_span[0]).take(self.char_span[1] - self.char_span[0]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "errors", rename_all = "camelCase")]
pub enum Outcome {
    ErrorFree,
    /// Never empty.
    ErrorsFound(Vec<ErrorRecord>),
    NoParse,
}

impl Outcome {
    pub fn codes(&self) -> Vec<ErrorCode> {
        match self {
            Outcome::ErrorsFound(errs) => errs.iter().map(|e| e.code).collect(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SentenceReport {
    pub text: String,
    /// Character offsets of the sentence in the analyzed text.
    pub start: usize,
    pub end: usize,
    pub outcome: Outcome,
    pub chosen_parse: Option<String>,
    pub parse_count: usize,
    pub budget_exceeded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct AnalyzeOptions {
    pub policy: OmissionPolicy,
    pub budget: Budget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub text: String,
    /// Character offsets into the source text.
    pub start: usize,
    pub end: usize,
}

/// Splits after `.`, `!` or `?` when followed by whitespace or the end of
/// the text. Leading and trailing whitespace is trimmed from each sentence;
/// whitespace-only pieces are dropped.
pub fn split_sentences(text: &str) -> Vec<Sentence> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut begin = 0;
    let emit = |from: usize, to: usize, out: &mut Vec<Sentence>| {
        let mut s = from;
        let mut e = to;
        while s < e && chars[s].is_whitespace() {
            s += 1;
        }
        while e > s && chars[e - 1].is_whitespace() {
            e -= 1;
        }
        if s < e {
            out.push(Sentence { text: chars[s..e].iter().collect(), start: s, end: e });
        }
    };
    for i in 0..chars.len() {
        let boundary = matches!(chars[i], '.' | '!' | '?') && chars.get(i + 1).is_none_or(|c| c.is_whitespace());
        if boundary {
            emit(begin, i + 1, &mut out);
            begin = i + 1;
        }
    }
    emit(begin, chars.len(), &mut out);
    out
}

fn dedup_errors(errors: Vec<ErrorRecord>) -> Vec<ErrorRecord> {
    let mut out: Vec<ErrorRecord> = Vec::with_capacity(errors.len());
    for e in errors {
        if !out.iter().any(|o| o.code == e.code && o.token_span == e.token_span) {
            out.push(e);
        }
    }
    out.sort_by_key(|e| (e.token_span[0], e.token_span[1], e.code));
    out
}

/// Analyzes one sentence; offsets in the report are relative to it.
pub fn analyze_sentence(sentence: &str, grammar: &Grammar, options: &AnalyzeOptions) -> SentenceReport {
    let mut report = SentenceReport {
        text: sentence.to_owned(),
        start: 0,
        end: sentence.chars().count(),
        outcome: Outcome::NoParse,
        chosen_parse: None,
        parse_count: 0,
        budget_exceeded: false,
    };
    let filter = MissingFilter::new(options.policy);
    let Ok(chart) = parse(&tokenize(sentence), grammar, &[&filter], options.budget) else {
        return report;
    };
    if chart.budget_exceeded() {
        report.budget_exceeded = true;
        return report;
    }
    let parses = extract_parses(&chart, grammar, grammar.start());
    report.parse_count = parses.len();
    if let Some(best) = parses.into_iter().next() {
        let errors = dedup_errors(best.errors);
        report.outcome = if errors.is_empty() { Outcome::ErrorFree } else { Outcome::ErrorsFound(errors) };
        report.chosen_parse = Some(best.bracketed);
    }
    report
}

/// Analyzes every sentence of `text` in document order. Offsets in the
/// reports, including error spans, index into `text`.
pub fn analyze_text(text: &str, grammar: &Grammar, options: &AnalyzeOptions) -> Vec<SentenceReport> {
    split_sentences(text)
        .into_par_iter()
        .map(|s| {
            let mut r = analyze_sentence(&s.text, grammar, options);
            r.start = s.start;
            r.end = s.end;
            if let Outcome::ErrorsFound(errs) = &mut r.outcome {
                for e in errs {
                    e.char_span[0] += s.start;
                    e.char_span[1] += s.start;
                }
            }
            r
        })
        .collect()
}
