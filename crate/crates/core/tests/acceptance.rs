//! Acceptance suite. Prints one PASS or FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{Generator, Oracle};
use malparse::chart::{extract_parses, parse, Budget, Chart};
use malparse::eval::{percent, EvalOptions, EvalReport, Verdict};
use malparse::grammar::{tokenize, Grammar, Token, DEMO_GRAMMAR};
use malparse::{evaluate, load_corpus, render_report, MissingFilter};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/learner.txt");

fn toks(ws: &[String]) -> Vec<Token> {
    tokenize(&ws.join(" "))
}

fn filtered(g: &Grammar, tokens: &[Token]) -> Chart {
    parse(tokens, g, &[&MissingFilter::default()], Budget::default()).expect("non-empty input")
}

fn learner_sentences() -> Result<String, String> {
    let src = std::fs::read_to_string(CORPUS).map_err(|e| e.to_string())?;
    let corpus = load_corpus(&src).map_err(|e| e.to_string())?;
    for required in [
        "I am transfer student from Gallaudet.",
        "They different people.",
        "The boy happy.",
        "Is happy.",
        "Student always bothering me.",
        "I see a boys.",
        "I see other child.",
        "I see another child.",
    ] {
        ensure!(corpus.iter().any(|i| i.sentence == required), "corpus lacks '{required}'");
    }
    let controls = corpus.iter().filter(|i| i.expected == malparse::Expected::Ok).count();
    ensure!(controls >= 5, "only {controls} grammatical controls");

    let g = Grammar::demo();
    let started = Instant::now();
    let report = evaluate(&corpus, &g, &EvalOptions::default());
    let elapsed = started.elapsed();
    for item in &report.items {
        let good = matches!(item.verdict, Verdict::ExpectedErrorFound | Verdict::ErrorFree);
        ensure!(good, "'{}': {:?}, found {:?}", item.sentence, item.verdict, item.found);
    }
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("{} of {} items as expected in {elapsed:.2?}", report.items.len(), corpus.len()))
}

/// Demo grammar with its two number-class determiner mal-rules replaced by
/// the single anti-unification rule.
fn anti_grammar() -> Grammar {
    let mut src: String = DEMO_GRAMMAR
        .lines()
        .filter(|l| !l.contains(" dp-det-sg ") && !l.contains(" dp-det-pl "))
        .map(|l| format!("{l}\n"))
        .collect();
    src.push_str(
        "mal ID dp-det-anti 0.1 \"determiner '{0}' does not agree with noun '{1}'\" : \
         DP(agr ?a, error +) -> Det(agr ?!a) NP(agr ?a)\n",
    );
    Grammar::load(&src).expect("anti grammar loads")
}

fn words_with(g: &Grammar, symbol: &str) -> Vec<String> {
    let sym = g.vocab().symbol(symbol).expect("symbol");
    let mut out: Vec<String> =
        g.lexicon().iter().filter(|(_, cats)| cats.iter().any(|c| c.symbol == sym)).map(|(w, _)| w.clone()).collect();
    out.sort();
    out
}

type DpEdge = (usize, usize, String, Vec<(String, [usize; 2])>, u64);

fn dp_edges(g: &Grammar, chart: &Chart) -> Vec<DpEdge> {
    let dp = g.vocab().symbol("DP").expect("DP");
    let mut out: Vec<DpEdge> = chart
        .edges()
        .iter()
        .filter(|e| e.category.symbol == dp)
        .map(|e| {
            let errs = e.errors.iter().map(|r| (r.code.as_str().to_owned(), r.token_span)).collect();
            (e.start, e.end, g.vocab().format_category(&e.category), errs, e.score.to_bits())
        })
        .collect();
    out.sort();
    out
}

fn anti_unification_equivalence() -> Result<String, String> {
    let three = Grammar::demo();
    let one = anti_grammar();
    let dets = words_with(&three, "Det");
    let nouns = words_with(&three, "N");
    let started = Instant::now();
    let mut pairs = 0;
    let mut flagged = 0;
    for d in &dets {
        for n in &nouns {
            let t = tokenize(&format!("{d} {n}"));
            let a = dp_edges(&three, &filtered(&three, &t));
            let b = dp_edges(&one, &filtered(&one, &t));
            ensure!(a == b, "'{d} {n}': {a:?} vs {b:?}");
            flagged += a.iter().any(|e| e.0 == 0 && e.1 == 2 && !e.3.is_empty()) as usize;
            pairs += 1;
        }
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("{pairs} Det x Noun pairs identical, {flagged} flagged ID, in {elapsed:.2?}"))
}

fn one_dp_per_span() -> Result<String, String> {
    let g = Grammar::demo();
    let agr = g.builtins().agr;
    let dets = words_with(&g, "Det");
    let nouns = words_with(&g, "N");
    let det_sym = g.vocab().symbol("Det").unwrap();
    let n_sym = g.vocab().symbol("N").unwrap();
    let mut checked = 0;
    for d in &dets {
        for n in &nouns {
            let grammatical = malparse::lookup(d, &g).iter().filter(|c| c.symbol == det_sym).any(|dc| {
                malparse::lookup(n, &g).iter().filter(|c| c.symbol == n_sym).any(|nc| {
                    match (dc.features.atoms(agr), nc.features.atoms(agr)) {
                        (Some(x), Some(y)) => !x.is_disjoint(y),
                        _ => true,
                    }
                })
            });
            if !grammatical {
                continue;
            }
            let chart = filtered(&g, &tokenize(&format!("{d} {n}")));
            let mut per_span: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for e in dp_edges(&g, &chart) {
                *per_span.entry((e.0, e.1)).or_default() += 1;
            }
            ensure!(per_span.get(&(0, 2)) == Some(&1), "'{d} {n}': DP edges per span {per_span:?}");
            ensure!(per_span.values().all(|&c| c == 1), "'{d} {n}': DP edges per span {per_span:?}");
            checked += 1;
        }
    }
    Ok(format!("{checked} grammatical DPs, one DP edge per span"))
}

const VOCAB: [&str; 12] = ["the", "boy", "boys", "he", "him", "is", "happy", "see", "sees", "to", "who", "."];

fn omission_cap() -> Result<String, String> {
    let g = Grammar::demo();
    let mut oracle = Oracle::new(&g, |_| true);
    let start = g.start();
    let mut strings = 0usize;
    let mut capped = 0usize;
    let mut parsed = 0usize;
    let mut stack: Vec<Vec<String>> = VOCAB.iter().map(|w| vec![w.to_string()]).collect();
    while let Some(ws) = stack.pop() {
        if ws.len() < 5 {
            for w in VOCAB {
                let mut next = ws.clone();
                next.push(w.to_owned());
                stack.push(next);
            }
        }
        strings += 1;
        let min = oracle.min_other_omissions(&ws);
        let chart = filtered(&g, &toks(&ws));
        ensure!(!chart.budget_exceeded(), "'{}': budget exceeded", ws.join(" "));
        let spanning = extract_parses(&chart, &g, start).len();
        match min {
            Some(m) if m <= 1 => {
                ensure!(spanning > 0, "'{}': oracle finds {m} omissions, parser finds nothing", ws.join(" "));
                parsed += 1;
            }
            _ => {
                ensure!(spanning == 0, "'{}': {spanning} parses survive, oracle minimum {min:?}", ws.join(" "));
                capped += min.is_some() as usize;
            }
        }
    }
    Ok(format!("{strings} strings; {parsed} parse, {capped} need 2+ omissions and have none"))
}

fn best_first() -> Result<String, String> {
    let g = Grammar::demo();
    let gen = Generator::new(&g);
    let mut oracle = Oracle::new(&g, |r| !r.is_mal());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let budget = Budget::default();
    let mut most_edges = 0;
    for i in 0..1000 {
        let ws = gen.sentence(12, &mut rng);
        let text = ws.join(" ");
        ensure!(oracle.min_other_omissions(&ws) == Some(0), "generated '{text}' is not grammatical");
        let chart = filtered(&g, &toks(&ws));
        ensure!(chart.edges().len() < budget.max_edges, "#{i} '{text}': {} edges", chart.edges().len());
        let root = chart.first_root().ok_or_else(|| format!("#{i} '{text}': no root"))?;
        let errs = &chart.edge(root).errors;
        ensure!(errs.is_empty(), "#{i} '{text}': first root has errors {errs:?}");
        most_edges = most_edges.max(chart.edges().len());
    }
    Ok(format!("1000 sentences, first root error-free, at most {most_edges} edges"))
}

fn percentages() -> Result<String, String> {
    let report = EvalReport::from_counts(([44, 0, 23, 12], 79), ([89, 3, 8], 101));
    let ung: Vec<u32> = [Verdict::ExpectedErrorFound, Verdict::NoParse, Verdict::WronglyErrorFree]
        .iter()
        .map(|&v| report.ungrammatical.rows.iter().find(|r| r.verdict == v).unwrap().percent)
        .collect();
    let gram: Vec<u32> = report.grammatical.rows.iter().map(|r| r.percent).collect();
    ensure!(ung == [56, 29, 15], "ungrammatical {ung:?}");
    ensure!(gram == [88, 3, 8], "grammatical {gram:?}");
    let text = render_report(&report);
    for needle in ["56%", "29%", "15%", "88%", "3%", "8%"] {
        ensure!(text.contains(needle), "rendered report lacks {needle}");
    }
    ensure!(percent(44, 79) == 56, "direct percent");
    Ok("56/29/15 of 79 and 88/3/8 of 101".into())
}

fn eval_twice(extra: &[&str]) -> Result<Vec<u8>, String> {
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = Command::new(env!("CARGO_BIN_EXE_malparse"))
            .args(["eval", "--corpus", CORPUS])
            .args(extra)
            .env_remove("ICICLE_GRAMMAR")
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.success(), "exit {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr));
        outputs.push(out.stdout);
    }
    ensure!(outputs[0] == outputs[1], "outputs differ");
    Ok(outputs.remove(0))
}

fn determinism() -> Result<String, String> {
    let text = eval_twice(&[])?;
    let json = eval_twice(&["--json"])?;
    Ok(format!("text ({} bytes) and JSON ({} bytes) runs byte-identical", text.len(), json.len()))
}

fn main() {
    let criteria: [(&str, Check); 7] = [
        ("learner-sentence suite", learner_sentences),
        ("negation/anti-unification equivalence", anti_unification_equivalence),
        ("no extraneous DP parses", one_dp_per_span),
        ("omission cap", omission_cap),
        ("best-first", best_first),
        ("percentage rendering", percentages),
        ("eval determinism", determinism),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("PASS {name}: {detail} [{:.2?}]", started.elapsed()),
            Err(why) => {
                failures += 1;
                println!("FAIL {name}: {why} [{:.2?}]", started.elapsed());
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
