//! Rule weights can be overridden per deployment without editing the
//! grammar. Raising a mal-rule's weight above its grammatical competitor
//! changes which analysis ranks first.

use malparse::{analyze_sentence, AnalyzeOptions, Grammar};

fn main() {
    let sentence = "He is boy.";
    let mut g = Grammar::demo();
    let show = |g: &Grammar| {
        let r = analyze_sentence(sentence, g, &AnalyzeOptions::default());
        println!("  {:?} of {} parses  {}", r.outcome.codes(), r.parse_count, r.chosen_parse.unwrap_or_default());
    };
    println!("default weights:");
    show(&g);

    g.apply_overrides("# rule-id weight\nvp-cop-dp 0.05\npp-noprep 1.0\n").expect("valid overrides");
    println!("after overrides {:?}:", g.weight_overrides());
    show(&g);

    match g.apply_overrides("dp-det 1.5\n") {
        Ok(()) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
}
