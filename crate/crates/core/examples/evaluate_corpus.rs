//! Evaluates the bundled learner-sentence corpus and prints the report.

use malparse::{evaluate, load_corpus, render_report, EvalOptions, Grammar};

const CORPUS: &str = include_str!("../corpus/learner.txt");

fn main() {
    let corpus = load_corpus(CORPUS).expect("bundled corpus parses");
    let report = evaluate(&corpus, &Grammar::demo(), &EvalOptions::default());
    print!("{}", render_report(&report));

    let strict = EvalOptions { exact: true, ..Default::default() };
    let report = evaluate(&corpus, &Grammar::demo(), &strict);
    println!("\nwith exact code matching:");
    for row in &report.ungrammatical.rows {
        println!("  {:<22} {:>3}", row.verdict.label(), row.count);
    }
}
