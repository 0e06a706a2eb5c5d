//! Splits a text into sentences and reports the errors found in each, with
//! character spans into the original text.

use malparse::{analyze_text, AnalyzeOptions, Grammar, Outcome};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| {
        "I am transfer student from Gallaudet. They different people. I see a boys. The boy is happy.".to_owned()
    });
    let grammar = Grammar::demo();
    for report in analyze_text(&text, &grammar, &AnalyzeOptions::default()) {
        println!("[{}..{}] {}", report.start, report.end, report.text);
        match &report.outcome {
            Outcome::ErrorFree => println!("    no errors"),
            Outcome::NoParse => println!("    no parse covers the sentence"),
            Outcome::ErrorsFound(errors) => {
                for e in errors {
                    println!("    {:<3} \"{}\" {}", e.code.as_str(), e.highlighted(&text), e.message);
                }
            }
        }
    }
}
