//! The omission filter: at most one omitted non-determiner constituent per
//! sentence, with determiner omissions exempt. Also shows a custom filter.

use malparse::chart::{extract_parses, parse, Budget, Edge, FilterAction, PatternFilter};
use malparse::feature::FeatureStructure;
use malparse::{analyze_sentence, tokenize, AnalyzeOptions, Grammar, MissingFilter, OmissionPolicy};

fn main() {
    let g = Grammar::demo();
    let cases = ["Happy.", "Student always bothering me.", "Boy happy."];
    for max in [1, 2] {
        let opts = AnalyzeOptions { policy: OmissionPolicy { max_other_omissions: max, ..Default::default() }, ..Default::default() };
        println!("max other omissions = {max}");
        for s in cases {
            let r = analyze_sentence(s, &g, &opts);
            println!("  {s:<30} {:?}", r.outcome.codes());
        }
    }

    // a filter that rejects every verb phrase built by a mal-rule
    let vp = g.vocab().symbol("VP").unwrap();
    let no_mal_vp = PatternFilter {
        symbol: Some(vp),
        features: FeatureStructure::new(),
        procedure: |e: &Edge| if e.errors.is_empty() { FilterAction::Keep } else { FilterAction::Discard },
    };
    let tokens = tokenize("The boy happy.");
    let chart = parse(&tokens, &g, &[&MissingFilter::default(), &no_mal_vp], Budget::default()).unwrap();
    println!("'The boy happy.' without mal VPs: {} parses", extract_parses(&chart, &g, g.start()).len());
}
