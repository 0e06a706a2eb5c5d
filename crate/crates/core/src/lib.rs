//! Error-tolerant chart parsing for learner English.
//!
//! Sentences are parsed bottom-up against a unification grammar whose
//! mal-rules describe expected errors (agreement, determiner misuse,
//! omitted copulas, subjects, objects, prepositions and relative
//! pronouns). Mal-rules weigh less than grammatical rules and the agenda
//! is processed best-first, so an error-free analysis is found first when
//! one exists. A constituent filter caps the number of non-determiner
//! omissions per sentence, which keeps the omission rules from swamping
//! the chart.
//!
//! ```
//! use malparse::{analyze_sentence, AnalyzeOptions, Grammar, Outcome};
//!
//! let grammar = Grammar::demo();
//! let report = analyze_sentence("I see a boys.", &grammar, &AnalyzeOptions::default());
//! let Outcome::ErrorsFound(errors) = &report.outcome else { panic!() };
//! assert_eq!(errors[0].code.as_str(), "ID");
//! assert_eq!(errors[0].highlighted(&report.text), "a boys");
//! ```
//!
//! Runnable programs for each capability live in `examples/`.

pub mod chart;
pub mod diagnosis;
pub mod eval;
pub mod feature;
pub mod grammar;
pub mod omission;
pub mod service;

pub use chart::{apply_rule, extract_parses, parse, Budget, Chart, ConstituentFilter, Edge, FilterAction, RankedParse};
pub use diagnosis::{
    analyze_sentence, analyze_text, split_sentences, AnalyzeOptions, ErrorRecord, Outcome, Sentence, SentenceReport,
};
pub use eval::{evaluate, load_corpus, render_report, CorpusItem, EvalOptions, EvalReport, Expected, Verdict};
pub use grammar::{lookup, tokenize, ErrorCode, Grammar, GrammarError, Token};
pub use omission::{missing_filter, omission_contribution, MissingFilter, OmissionPolicy};
