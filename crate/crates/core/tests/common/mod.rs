//! Test helpers: a random generator of grammatical sentences and an
//! exhaustive agenda-free recognizer used as an oracle.
#![allow(dead_code)]

use std::collections::HashMap;

use malparse::feature::{apply_foot_features, unify_values, Bindings, FeatureStructure, ValueTerm, VarId};
use malparse::grammar::{lookup, Category, Grammar, Rule, Symbol};
use malparse::omission_contribution;
use rand::seq::SliceRandom;
use rand::Rng;

fn seeded_env(rule: &Rule) -> Option<Bindings> {
    let mut env = Bindings::with_vars(rule.var_names.len());
    for (i, b) in rule.var_bounds.iter().enumerate() {
        if let Some(set) = b {
            env.narrow(VarId(i as u16), *set).ok()?;
        }
    }
    Some(env)
}

fn lhs_features(rule: &Rule, env: &Bindings) -> FeatureStructure {
    rule.lhs
        .features
        .iter()
        .filter_map(|(f, t)| match t {
            ValueTerm::Atoms(_) => Some((f, t)),
            ValueTerm::Var(v) => env.get(v).map(|s| (f, ValueTerm::Atoms(s))),
            _ => None,
        })
        .collect()
}

/// Applies `rule` to children given as categories. Written against the
/// feature primitives only, independently of the chart engine.
pub fn oracle_apply(g: &Grammar, rule: &Rule, kids: &[&Category]) -> Option<FeatureStructure> {
    let mut env = seeded_env(rule)?;
    for (pat, kid) in rule.rhs.iter().zip(kids) {
        if pat.symbol != kid.symbol {
            return None;
        }
        for (f, term) in pat.features.iter() {
            match kid.features.get(f) {
                Some(v) => {
                    unify_values(term, v, &mut env).ok()?;
                }
                None if matches!(term, ValueTerm::Atoms(_) | ValueTerm::Var(_)) => {}
                None => return None,
            }
        }
    }
    env.finalize().ok()?;
    let kid_fs: Vec<&FeatureStructure> = kids.iter().map(|k| &k.features).collect();
    apply_foot_features(&lhs_features(rule, &env), &kid_fs, g.foot_features()).ok()
}

/// For every category derivable over a token span, the fewest
/// non-determiner omission rules any derivation of it uses.
pub type Items = HashMap<Category, u32>;

/// Exhaustive bottom-up recognizer with no filters, no agenda and no
/// budget. Sub-span results are memoized by word sequence, so repeated
/// calls over a shared vocabulary stay cheap.
pub struct Oracle<'g> {
    pub grammar: &'g Grammar,
    rules: Vec<usize>,
    memo: HashMap<Vec<String>, Items>,
}

impl<'g> Oracle<'g> {
    /// `keep` selects the rules the oracle may use.
    pub fn new(grammar: &'g Grammar, keep: impl Fn(&Rule) -> bool) -> Self {
        let rules = (0..grammar.rules().len()).filter(|&i| keep(grammar.rule(i))).collect();
        Oracle { grammar, rules, memo: HashMap::new() }
    }

    pub fn items(&mut self, words: &[String]) -> Items {
        if let Some(hit) = self.memo.get(words) {
            return hit.clone();
        }
        let mut items: Items = HashMap::new();
        if words.len() == 1 {
            for c in lookup(&words[0], self.grammar) {
                items.insert(c, 0);
            }
        }
        // every split of the span into the rule's arity, children from memo
        let mut parts: HashMap<(usize, usize), Items> = HashMap::new();
        for i in 0..words.len() {
            for j in i + 1..=words.len() {
                if j - i < words.len() {
                    let sub = self.items(&words[i..j]);
                    parts.insert((i, j), sub);
                }
            }
        }
        loop {
            let mut changed = false;
            for &ri in &self.rules {
                let rule = self.grammar.rule(ri);
                let (_, other) = omission_contribution(rule);
                let mut found: Vec<(Category, u32)> = Vec::new();
                let n = words.len();
                let arity = rule.rhs.len();
                for cuts in splits(n, arity) {
                    let spans: Vec<Items> = cuts
                        .windows(2)
                        .map(|w| if w[1] - w[0] == n { items.clone() } else { parts[&(w[0], w[1])].clone() })
                        .collect();
                    for_each_combo(&spans, &mut Vec::new(), &mut |kids: &[(&Category, u32)]| {
                        let cats: Vec<&Category> = kids.iter().map(|k| k.0).collect();
                        if let Some(fs) = oracle_apply(self.grammar, rule, &cats) {
                            let cost = other + kids.iter().map(|k| k.1).sum::<u32>();
                            found.push((Category { symbol: rule.lhs.symbol, features: fs }, cost));
                        }
                    });
                }
                for (cat, cost) in found {
                    let slot = items.entry(cat).or_insert(u32::MAX);
                    if cost < *slot {
                        *slot = cost;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self.memo.insert(words.to_vec(), items.clone());
        items
    }

    /// Fewest non-determiner omissions over derivations of a full-span
    /// root, or `None` if no derivation exists.
    pub fn min_other_omissions(&mut self, words: &[String]) -> Option<u32> {
        let start = self.grammar.start();
        self.items(words).into_iter().filter(|(c, _)| c.symbol == start).map(|(_, n)| n).min()
    }
}

/// Cut points `0 = c0 < c1 < ... < ck = n` with `k = arity`.
fn splits(n: usize, arity: usize) -> Vec<Vec<usize>> {
    fn rec(pos: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 1 {
            cur.push(n);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for next in pos + 1..=n - (left - 1) {
            cur.push(next);
            rec(next, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if arity == 0 || arity > n {
        return out;
    }
    rec(0, n, arity, &mut vec![0], &mut out);
    out
}

type Kid<'a> = (&'a Category, u32);

fn for_each_combo<'a>(spans: &'a [Items], acc: &mut Vec<Kid<'a>>, f: &mut dyn FnMut(&[Kid<'a>])) {
    let Some((first, rest)) = spans.split_first() else {
        f(acc);
        return;
    };
    for (c, &n) in first {
        acc.push((c, n));
        for_each_combo(rest, acc, f);
        acc.pop();
    }
}

/// Top-down random generation from the grammatical rules only, honoring
/// feature constraints. Returns words without terminal punctuation.
pub struct Generator<'g> {
    grammar: &'g Grammar,
    words_by_symbol: HashMap<Symbol, Vec<(String, Category)>>,
    rules_by_lhs: HashMap<Symbol, Vec<usize>>,
}

impl<'g> Generator<'g> {
    pub fn new(grammar: &'g Grammar) -> Self {
        let mut words_by_symbol: HashMap<Symbol, Vec<(String, Category)>> = HashMap::new();
        let mut words: Vec<&String> = grammar.lexicon().keys().collect();
        words.sort();
        for w in words {
            for c in &grammar.lexicon()[w] {
                words_by_symbol.entry(c.symbol).or_default().push((w.clone(), c.clone()));
            }
        }
        let mut rules_by_lhs: HashMap<Symbol, Vec<usize>> = HashMap::new();
        for (i, r) in grammar.rules().iter().enumerate() {
            if !r.is_mal() {
                rules_by_lhs.entry(r.lhs.symbol).or_default().push(i);
            }
        }
        Generator { grammar, words_by_symbol, rules_by_lhs }
    }

    fn fits(want: &FeatureStructure, have: &FeatureStructure) -> bool {
        want.iter().all(|(f, w)| match (w, have.get(f)) {
            (ValueTerm::Atoms(a), Some(ValueTerm::Atoms(b))) => !a.is_disjoint(b),
            _ => true,
        })
    }

    fn expand<R: Rng>(&self, symbol: Symbol, want: &FeatureStructure, depth: u32, rng: &mut R) -> Option<(Vec<String>, Category)> {
        let lexical: Vec<&(String, Category)> = self
            .words_by_symbol
            .get(&symbol)
            .map(|v| v.iter().filter(|(_, c)| Self::fits(want, &c.features)).collect())
            .unwrap_or_default();
        let rules = self.rules_by_lhs.get(&symbol).cloned().unwrap_or_default();
        // phrasal symbols prefer rules; recursion is cut off by depth
        let try_rule = !rules.is_empty() && (lexical.is_empty() || rng.gen_bool(0.5)) && depth > 0;
        if !try_rule {
            let (w, c) = lexical.choose(rng)?;
            return Some((vec![w.clone()], (*c).clone()));
        }
        let mut order = rules.clone();
        order.shuffle(rng);
        // prefer short rules as depth runs out
        order.sort_by_key(|&r| if depth < 3 { self.grammar.rule(r).rhs.len() } else { 0 });
        for ri in order {
            if let Some(out) = self.expand_rule(ri, want, depth, rng) {
                return Some(out);
            }
        }
        None
    }

    fn expand_rule<R: Rng>(&self, ri: usize, want: &FeatureStructure, depth: u32, rng: &mut R) -> Option<(Vec<String>, Category)> {
        let rule = self.grammar.rule(ri);
        let mut env = seeded_env(rule)?;
        for (f, term) in rule.lhs.features.iter() {
            if let Some(w) = want.get(f) {
                unify_values(term, w, &mut env).ok()?;
            }
        }
        let mut words = Vec::new();
        let mut kids = Vec::new();
        for pat in &rule.rhs {
            let child_want: FeatureStructure = pat
                .features
                .iter()
                .filter_map(|(f, t)| match t {
                    ValueTerm::Atoms(_) => Some((f, t)),
                    ValueTerm::Var(v) => env.get(v).map(|s| (f, ValueTerm::Atoms(s))),
                    _ => None,
                })
                .collect();
            let (w, cat) = self.expand(pat.symbol, &child_want, depth - 1, rng)?;
            for (f, term) in pat.features.iter() {
                if let Some(v) = cat.features.get(f) {
                    unify_values(term, v, &mut env).ok()?;
                }
            }
            words.extend(w);
            kids.push(cat);
        }
        let refs: Vec<&Category> = kids.iter().collect();
        let fs = oracle_apply(self.grammar, rule, &refs)?;
        Some((words, Category { symbol: rule.lhs.symbol, features: fs }))
    }

    /// A sentence of at most `max_words` words derived from the start
    /// symbol.
    pub fn sentence<R: Rng>(&self, max_words: usize, rng: &mut R) -> Vec<String> {
        let start = self.grammar.start();
        loop {
            if let Some((words, _)) = self.expand(start, &FeatureStructure::new(), 6, rng) {
                if words.len() <= max_words {
                    return words;
                }
            }
        }
    }
}

pub fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_owned).collect()
}
