//! Parses one sentence and prints every spanning analysis, best first.
//!
//! `cargo run --example parse_sentence -- "The boy happy."`

use malparse::chart::{extract_parses, parse, Budget};
use malparse::{tokenize, Grammar, MissingFilter};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "The boy happy.".to_owned());
    let grammar = Grammar::demo();
    let tokens = tokenize(&text);
    let chart = match parse(&tokens, &grammar, &[&MissingFilter::default()], Budget::default()) {
        Ok(c) => c,
        Err(e) => return eprintln!("{e}"),
    };
    println!("{} tokens, {} edges, {} agenda pops", tokens.len(), chart.edges().len(), chart.pops());
    let parses = extract_parses(&chart, &grammar, grammar.start());
    if parses.is_empty() {
        println!("no spanning parse");
    }
    for (i, p) in parses.iter().enumerate() {
        let codes: Vec<&str> = p.errors.iter().map(|e| e.code.as_str()).collect();
        println!("#{} score {:.4} errors [{}]\n   {}", i + 1, p.score, codes.join(","), p.bracketed);
    }
}
