//! Determiner agreement written two ways: one mal-rule with an
//! anti-unified variable, and its expansion into one rule per number class
//! with negated constants. Both accept the same determiner errors.

use malparse::{analyze_sentence, AnalyzeOptions, Grammar};

const SOURCE: &str = r#"
start S
rule s : S -> DP VP(agr ?a)
rule vp : VP(agr ?a) -> V(agr ?a)
rule dp : DP(agr ?a) -> Det(agr ?a) NP(agr ?a)
mal ID dp-anti "determiner '{0}' does not agree with '{1}'" : DP(agr ?a, error +) -> Det(agr ?!a) NP(agr ?a)
lex a Det agr s
lex the Det agr s|p
lex these Det agr p
lex dog NP agr 3s
lex dogs NP agr 3p
lex barks V agr 3s
lex bark V agr p
"#;

fn main() {
    let anti = Grammar::load(SOURCE).expect("grammar loads");
    let expanded = anti.expand_anti_unification();
    println!("expanded rules:\n{}", expanded.to_dsl().lines().filter(|l| l.starts_with("mal")).collect::<Vec<_>>().join("\n"));

    let opts = AnalyzeOptions::default();
    for s in ["a dog barks", "a dogs bark", "these dog barks", "the dogs bark"] {
        let x = analyze_sentence(s, &anti, &opts).outcome.codes();
        let y = analyze_sentence(s, &expanded, &opts).outcome.codes();
        assert_eq!(x, y);
        println!("{s:<18} {x:?}");
    }
}
