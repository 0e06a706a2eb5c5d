//! Corpus evaluation: load annotated sentences, analyze them and tally the
//! verdicts separately for ungrammatical and grammatical items.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnosis::{analyze_sentence, AnalyzeOptions, Outcome};
use crate::grammar::{ErrorCode, Grammar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Expected {
    Ok,
    /// Sorted, non-empty.
    Codes(Vec<ErrorCode>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusItem {
    pub sentence: String,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("corpus line {line}: {message}")]
pub struct CorpusError {
    pub line: usize,
    pub message: String,
}

/// Parses `sentence||OK` or `sentence||CODE[,CODE]*` lines. Blank lines and
/// lines starting with `#` are skipped.
pub fn load_corpus(source: &str) -> Result<Vec<CorpusItem>, CorpusError> {
    let mut items = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| CorpusError { line: i + 1, message };
        let (sentence, tags) = line.rsplit_once("||").ok_or_else(|| err("expected 'sentence||CODES'".into()))?;
        let sentence = sentence.trim();
        if sentence.is_empty() {
            return Err(err("empty sentence".into()));
        }
        let tags = tags.trim();
        let expected = if tags == "OK" {
            Expected::Ok
        } else {
            let mut codes = tags
                .split(',')
                .map(|c| c.trim().parse::<ErrorCode>().map_err(|e| err(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            codes.sort();
            codes.dedup();
            Expected::Codes(codes)
        };
        items.push(CorpusItem { sentence: sentence.to_owned(), expected });
    }
    Ok(items)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Verdict {
    ExpectedErrorFound,
    OtherErrorFound,
    WronglyErrorFree,
    NoParse,
    ErrorFree,
    SpuriousError,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::ExpectedErrorFound => "expected error found",
            Verdict::OtherErrorFound => "other error found",
            Verdict::WronglyErrorFree => "parsed as error-free",
            Verdict::NoParse => "no parse",
            Verdict::ErrorFree => "error-free",
            Verdict::SpuriousError => "spurious error",
        }
    }
}

const UNGRAMMATICAL: [Verdict; 4] =
    [Verdict::ExpectedErrorFound, Verdict::OtherErrorFound, Verdict::NoParse, Verdict::WronglyErrorFree];
const GRAMMATICAL: [Verdict; 3] = [Verdict::ErrorFree, Verdict::SpuriousError, Verdict::NoParse];

#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    pub analyze: AnalyzeOptions,
    /// Sentences left out of the evaluation.
    pub exclude: HashSet<String>,
    /// Require the found codes to equal the expected ones instead of
    /// merely overlapping them.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ItemResult {
    pub sentence: String,
    pub expected: Expected,
    pub found: Vec<ErrorCode>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Row {
    pub verdict: Verdict,
    pub count: usize,
    pub percent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tally {
    pub total: usize,
    pub rows: Vec<Row>,
}

impl Tally {
    /// Builds a tally from counts given in the category order of
    /// `verdicts`. Percentages are relative to `total`.
    fn from_counts(verdicts: &[Verdict], counts: &[usize], total: usize) -> Tally {
        let rows = verdicts
            .iter()
            .zip(counts)
            .map(|(&verdict, &count)| Row { verdict, count, percent: percent(count, total) })
            .collect();
        Tally { total, rows }
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.rows.iter().find(|r| r.verdict == v).map_or(0, |r| r.count)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EvalReport {
    pub items: Vec<ItemResult>,
    pub ungrammatical: Tally,
    pub grammatical: Tally,
}

impl EvalReport {
    pub fn from_items(items: Vec<ItemResult>) -> EvalReport {
        let count = |set: &[Verdict], ok: bool| -> Vec<usize> {
            set.iter()
                .map(|&v| items.iter().filter(|i| (i.expected == Expected::Ok) == ok && i.verdict == v).count())
                .collect()
        };
        let ungrammatical_total = items.iter().filter(|i| i.expected != Expected::Ok).count();
        let ungrammatical = Tally::from_counts(&UNGRAMMATICAL, &count(&UNGRAMMATICAL, false), ungrammatical_total);
        let grammatical = Tally::from_counts(&GRAMMATICAL, &count(&GRAMMATICAL, true), items.len() - ungrammatical_total);
        EvalReport { items, ungrammatical, grammatical }
    }

    /// A report with no items, carrying only category counts and totals.
    /// Ungrammatical counts are (expected error, other error, no parse,
    /// error-free); grammatical ones (error-free, spurious error, no parse).
    /// Totals may exceed the count sums when published tables leave items
    /// unaccounted for.
    pub fn from_counts(ungrammatical: ([usize; 4], usize), grammatical: ([usize; 3], usize)) -> EvalReport {
        EvalReport {
            items: Vec::new(),
            ungrammatical: Tally::from_counts(&UNGRAMMATICAL, &ungrammatical.0, ungrammatical.1),
            grammatical: Tally::from_counts(&GRAMMATICAL, &grammatical.0, grammatical.1),
        }
    }
}

/// Integer percentage rounded half up; 0 when `total` is 0.
pub fn percent(count: usize, total: usize) -> u32 {
    if total == 0 {
        return 0;
    }
    ((200 * count + total) / (2 * total)) as u32
}

pub fn classify(expected: &Expected, outcome: &Outcome, exact: bool) -> Verdict {
    match (expected, outcome) {
        (_, Outcome::NoParse) => Verdict::NoParse,
        (Expected::Ok, Outcome::ErrorFree) => Verdict::ErrorFree,
        (Expected::Ok, Outcome::ErrorsFound(_)) => Verdict::SpuriousError,
        (Expected::Codes(_), Outcome::ErrorFree) => Verdict::WronglyErrorFree,
        (Expected::Codes(want), Outcome::ErrorsFound(_)) => {
            let mut found = outcome.codes();
            found.sort();
            found.dedup();
            let hit = if exact { &found == want } else { found.iter().any(|c| want.contains(c)) };
            if hit {
                Verdict::ExpectedErrorFound
            } else {
                Verdict::OtherErrorFound
            }
        }
    }
}

pub fn evaluate(corpus: &[CorpusItem], grammar: &Grammar, options: &EvalOptions) -> EvalReport {
    let items = corpus
        .par_iter()
        .filter(|item| !options.exclude.contains(&item.sentence))
        .map(|item| {
            let report = analyze_sentence(&item.sentence, grammar, &options.analyze);
            let mut found = report.outcome.codes();
            found.sort();
            found.dedup();
            ItemResult {
                sentence: item.sentence.clone(),
                expected: item.expected.clone(),
                found,
                verdict: classify(&item.expected, &report.outcome, options.exact),
            }
        })
        .collect();
    EvalReport::from_items(items)
}

fn codes_text(codes: &[ErrorCode]) -> String {
    if codes.is_empty() {
        return "-".into();
    }
    codes.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(",")
}

const WIDTH: usize = 24;

/// Fixed-width text report: per-item verdicts, then the two tallies. Empty
/// sections are omitted, so an empty report is just the header.
pub fn render_report(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<WIDTH$} {:>6} {:>8}", "category", "count", "percent");
    if !report.items.is_empty() {
        out.push('\n');
        for item in &report.items {
            let expected = match &item.expected {
                Expected::Ok => "OK".to_owned(),
                Expected::Codes(c) => codes_text(c),
            };
            let _ = writeln!(
                out,
                "{:<WIDTH$} expected {:<8} found {:<8} {}",
                item.verdict.label(),
                expected,
                codes_text(&item.found),
                item.sentence
            );
        }
    }
    for (title, tally) in [("ungrammatical", &report.ungrammatical), ("grammatical", &report.grammatical)] {
        if tally.total == 0 {
            continue;
        }
        let _ = writeln!(out, "\n{:<WIDTH$} {:>6}", title, tally.total);
        for row in &tally.rows {
            let _ = writeln!(out, "  {:<w$} {:>6} {:>7}%", row.verdict.label(), row.count, row.percent, w = WIDTH - 2);
        }
    }
    out
}
