//! Writing a grammar in the rule language, inspecting it, and printing it
//! back in canonical form.

use malparse::{analyze_sentence, AnalyzeOptions, Grammar};

const SOURCE: &str = r#"
start S
foot error
rule clause : S -> NP(agr ?a) VP(agr ?a)
mal NUM clause-agr "'{0}' does not agree with '{1}'" : S(error +) -> NP(agr ?a) VP(agr ?!a)
rule vp : VP(agr ?a) -> V(agr ?a)
mal MV no-verb : VP(error +, missing +) -> Adj
lex cats NP agr 3p
lex sleep V subcat intrans infl verb
lex lazy Adj
"#;

fn main() {
    let g = Grammar::load(SOURCE).expect("grammar loads");
    println!("{} rules, {} word forms", g.rules().len(), g.lexicon().len());
    print!("{}", g.to_dsl());
    assert_eq!(Grammar::load(&g.to_dsl()).unwrap(), g);

    for s in ["cats sleep", "cats sleeps", "cats lazy"] {
        println!("{s:<12} {:?}", analyze_sentence(s, &g, &AnalyzeOptions::default()).outcome.codes());
    }

    match Grammar::load("rule : S -> NP(agr ?x\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("error: {e}"),
    }
}
