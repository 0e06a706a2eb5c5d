//! Agenda-driven bottom-up chart parser.
//!
//! Candidate edges go through the constituent filters, then onto an agenda
//! ordered by score. Popping an edge stores it and combines it with every
//! adjacent stored edge that completes a rule mentioning its symbol.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};

use crate::diagnosis::ErrorRecord;
use crate::feature::{apply_foot_features, unify_values, Bindings, Failure, FeatureStructure, ValueTerm, VarId};
use crate::grammar::{lookup, Category, Grammar, Symbol, Token};
use crate::omission::omission_contribution;

pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub category: Category,
    /// Token span, half open.
    pub start: usize,
    pub end: usize,
    pub children: Vec<EdgeId>,
    /// Index into [`Grammar::rules`]; `None` for lexical edges.
    pub rule: Option<usize>,
    pub score: f64,
    pub det_omissions: u32,
    pub other_omissions: u32,
    pub errors: Vec<ErrorRecord>,
}

impl Edge {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn is_lexical(&self) -> bool {
        self.rule.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FilterAction {
    Keep,
    Discard,
    Replace(Edge),
}

/// A procedure run on every candidate edge matching its pattern, before the
/// edge reaches the agenda. Implementations must be deterministic.
pub trait ConstituentFilter: Send + Sync {
    fn matches(&self, edge: &Edge) -> bool;
    fn apply(&self, edge: &Edge) -> FilterAction;
}

/// Filter built from a category pattern and a closure. The pattern matches
/// an edge when the symbols agree (if given) and every pattern feature
/// overlaps the edge's value for it.
pub struct PatternFilter<F> {
    pub symbol: Option<Symbol>,
    pub features: FeatureStructure,
    pub procedure: F,
}

impl<F> ConstituentFilter for PatternFilter<F>
where
    F: Fn(&Edge) -> FilterAction + Send + Sync,
{
    fn matches(&self, edge: &Edge) -> bool {
        if self.symbol.is_some_and(|s| s != edge.category.symbol) {
            return false;
        }
        self.features.iter().all(|(f, want)| match (want, edge.category.features.get(f)) {
            (ValueTerm::Atoms(w), Some(ValueTerm::Atoms(have))) => !w.is_disjoint(have),
            _ => false,
        })
    }

    fn apply(&self, edge: &Edge) -> FilterAction {
        (self.procedure)(edge)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Budget {
    pub max_edges: usize,
    pub max_pops: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_edges: 50_000, max_pops: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("no tokens to parse")]
    EmptyInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct EdgeKey {
    symbol: Symbol,
    start: usize,
    end: usize,
    features: FeatureStructure,
    children: Vec<EdgeId>,
}

impl EdgeKey {
    fn of(e: &Edge) -> EdgeKey {
        EdgeKey {
            symbol: e.category.symbol,
            start: e.start,
            end: e.end,
            features: e.category.features.clone(),
            children: e.children.clone(),
        }
    }
}

struct Pending {
    edge: Edge,
    seq: u64,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// max-heap: higher score, then shorter span, then earlier insertion
impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edge
            .score
            .total_cmp(&other.edge.score)
            .then_with(|| other.edge.len().cmp(&self.edge.len()))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Edges stored for one sentence. Edge ids are insertion (pop) order.
#[derive(Debug, Clone)]
pub struct Chart {
    tokens: Vec<Token>,
    edges: Vec<Edge>,
    by_start: Vec<HashMap<Symbol, Vec<EdgeId>>>,
    by_end: Vec<HashMap<Symbol, Vec<EdgeId>>>,
    pops: usize,
    incomplete: bool,
    first_root: Option<EdgeId>,
}

impl Chart {
    fn new(tokens: Vec<Token>) -> Chart {
        let n = tokens.len();
        Chart {
            tokens,
            edges: Vec::new(),
            by_start: vec![HashMap::new(); n + 1],
            by_end: vec![HashMap::new(); n + 1],
            pops: 0,
            incomplete: false,
            first_root: None,
        }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn pops(&self) -> usize {
        self.pops
    }

    /// True when parsing stopped on the edge or pop limit.
    pub fn budget_exceeded(&self) -> bool {
        self.incomplete
    }

    /// The first full-span start-symbol edge popped from the agenda.
    pub fn first_root(&self) -> Option<EdgeId> {
        self.first_root
    }

    pub fn edges_at(&self, start: usize, end: usize, symbol: Symbol) -> impl Iterator<Item = &Edge> + '_ {
        self.by_start
            .get(start)
            .and_then(|m| m.get(&symbol))
            .into_iter()
            .flatten()
            .map(|&id| &self.edges[id])
            .filter(move |e| e.end == end)
    }

    fn ending_at(&self, pos: usize, symbol: Symbol) -> &[EdgeId] {
        self.by_end[pos].get(&symbol).map_or(&[], Vec::as_slice)
    }

    fn starting_at(&self, pos: usize, symbol: Symbol) -> &[EdgeId] {
        self.by_start[pos].get(&symbol).map_or(&[], Vec::as_slice)
    }

    fn insert(&mut self, edge: Edge) -> EdgeId {
        let id = self.edges.len();
        self.by_start[edge.start].entry(edge.category.symbol).or_default().push(id);
        self.by_end[edge.end].entry(edge.category.symbol).or_default().push(id);
        self.edges.push(edge);
        id
    }

    /// Child sequences for the slots left of `pos`, each ending at `end`.
    fn left_fills(&self, rhs: &[Category], end: usize) -> Vec<Vec<EdgeId>> {
        let Some((last, rest)) = rhs.split_last() else {
            return vec![Vec::new()];
        };
        let mut out = Vec::new();
        for &id in self.ending_at(end, last.symbol) {
            for mut prefix in self.left_fills(rest, self.edges[id].start) {
                prefix.push(id);
                out.push(prefix);
            }
        }
        out
    }

    /// Child sequences for the slots right of `pos`, the first starting at
    /// `start`.
    fn right_fills(&self, rhs: &[Category], start: usize) -> Vec<Vec<EdgeId>> {
        let Some((first, rest)) = rhs.split_first() else {
            return vec![Vec::new()];
        };
        let mut out = Vec::new();
        for &id in self.starting_at(start, first.symbol) {
            for suffix in self.right_fills(rest, self.edges[id].end) {
                let mut seq = Vec::with_capacity(suffix.len() + 1);
                seq.push(id);
                seq.extend(suffix);
                out.push(seq);
            }
        }
        out
    }

    /// True if `candidate` would repeat a (symbol, span, features) triple
    /// already on its unary chain.
    fn revisits_unary_chain(&self, candidate: &Edge) -> bool {
        let mut cur = candidate;
        while cur.children.len() == 1 {
            let child = &self.edges[cur.children[0]];
            if child.start != candidate.start || child.end != candidate.end {
                break;
            }
            if child.category == candidate.category {
                return true;
            }
            cur = child;
        }
        false
    }
}

fn run_filters(mut edge: Edge, filters: &[&dyn ConstituentFilter]) -> Option<Edge> {
    for f in filters {
        if !f.matches(&edge) {
            continue;
        }
        match f.apply(&edge) {
            FilterAction::Keep => {}
            FilterAction::Discard => return None,
            FilterAction::Replace(e) => edge = e,
        }
    }
    Some(edge)
}

fn span_text(tokens: &[Token], start: usize, end: usize) -> String {
    tokens[start..end].iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ")
}

fn instantiate(template: &str, tokens: &[Token], start: usize, end: usize, children: &[&Edge]) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let Some(close) = after.find('}') else {
            out.push_str(&rest[open..]);
            return out;
        };
        let key = &after[..close];
        match key {
            "*" => out.push_str(&span_text(tokens, start, end)),
            _ => match key.parse::<usize>().ok().and_then(|i| children.get(i)) {
                Some(c) => out.push_str(&span_text(tokens, c.start, c.end)),
                None => out.push_str(&rest[open..open + close + 2]),
            },
        }
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    out
}

/// Builds the parent edge for `rule_idx` over adjacent `children`.
///
/// A rule constraint on a feature the child lacks is vacuous for atom sets
/// and plain variables; negated and anti-unified constraints need a value
/// to test, so they fail.
pub fn apply_rule(grammar: &Grammar, rule_idx: usize, children: &[&Edge], tokens: &[Token]) -> Result<Edge, Failure> {
    let rule = grammar.rule(rule_idx);
    if rule.rhs.len() != children.len() || children.is_empty() {
        return Err(Failure);
    }
    if children.windows(2).any(|w| w[0].end != w[1].start) {
        return Err(Failure);
    }
    let mut env = Bindings::with_vars(rule.var_names.len());
    for (i, bound) in rule.var_bounds.iter().enumerate() {
        if let Some(set) = bound {
            env.narrow(VarId(i as u16), *set)?;
        }
    }
    for (pattern, child) in rule.rhs.iter().zip(children) {
        if pattern.symbol != child.category.symbol {
            return Err(Failure);
        }
        for (f, term) in pattern.features.iter() {
            match child.category.features.get(f) {
                Some(value) => {
                    unify_values(term, value, &mut env)?;
                }
                None => match term {
                    ValueTerm::Atoms(_) | ValueTerm::Var(_) => {}
                    ValueTerm::Negated { .. } | ValueTerm::Anti(_) => return Err(Failure),
                },
            }
        }
    }
    env.finalize()?;

    let mut features = FeatureStructure::new();
    for (f, term) in rule.lhs.features.iter() {
        match term {
            ValueTerm::Atoms(_) => features.insert(f, term),
            ValueTerm::Var(v) => {
                if let Some(set) = env.get(v) {
                    features.insert(f, ValueTerm::Atoms(set));
                }
            }
            ValueTerm::Negated { .. } | ValueTerm::Anti(_) => return Err(Failure),
        }
    }
    let child_features: Vec<&FeatureStructure> = children.iter().map(|c| &c.category.features).collect();
    let features = apply_foot_features(&features, &child_features, grammar.foot_features())?;

    let start = children[0].start;
    let end = children[children.len() - 1].end;
    let (det, other) = omission_contribution(rule);
    let mut errors: Vec<ErrorRecord> = children.iter().flat_map(|c| c.errors.iter().cloned()).collect();
    if let Some(ann) = &rule.annotation {
        errors.push(ErrorRecord {
            code: ann.code,
            message: instantiate(&ann.message, tokens, start, end, children),
            token_span: [start, end],
            char_span: [tokens[start].start, tokens[end - 1].end],
        });
    }
    Ok(Edge {
        category: Category { symbol: rule.lhs.symbol, features },
        start,
        end,
        children: Vec::new(),
        rule: Some(rule_idx),
        score: grammar.weight(rule_idx) * children.iter().map(|c| c.score).product::<f64>(),
        det_omissions: det + children.iter().map(|c| c.det_omissions).sum::<u32>(),
        other_omissions: other + children.iter().map(|c| c.other_omissions).sum::<u32>(),
        errors,
    })
}

/// Parses `tokens` best-first. Stops early, flagging the chart incomplete,
/// when the budget runs out.
pub fn parse(
    tokens: &[Token],
    grammar: &Grammar,
    filters: &[&dyn ConstituentFilter],
    budget: Budget,
) -> Result<Chart, ParseError> {
    if tokens.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    let n = tokens.len();
    let mut chart = Chart::new(tokens.to_vec());
    let mut agenda = BinaryHeap::new();
    let mut seq = 0u64;
    let mut push = |agenda: &mut BinaryHeap<Pending>, edge: Edge| {
        if let Some(edge) = run_filters(edge, filters) {
            agenda.push(Pending { edge, seq });
            seq += 1;
        }
    };

    for (i, tok) in tokens.iter().enumerate() {
        for category in lookup(&tok.text, grammar) {
            let edge = Edge {
                category,
                start: i,
                end: i + 1,
                children: Vec::new(),
                rule: None,
                score: 1.0,
                det_omissions: 0,
                other_omissions: 0,
                errors: Vec::new(),
            };
            push(&mut agenda, edge);
        }
    }

    let mut seen: HashSet<EdgeKey> = HashSet::new();
    while let Some(Pending { edge, .. }) = agenda.pop() {
        if chart.pops >= budget.max_pops {
            chart.incomplete = true;
            break;
        }
        chart.pops += 1;
        if !seen.insert(EdgeKey::of(&edge)) {
            continue;
        }
        if chart.edges.len() >= budget.max_edges {
            chart.incomplete = true;
            break;
        }
        let is_root = edge.start == 0 && edge.end == n && edge.category.symbol == grammar.start();
        let id = chart.insert(edge);
        if is_root && chart.first_root.is_none() {
            chart.first_root = Some(id);
        }

        let (start, end, symbol) = {
            let e = &chart.edges[id];
            (e.start, e.end, e.category.symbol)
        };
        for &(rule_idx, pos) in grammar.rules_with_rhs(symbol) {
            let rhs = &grammar.rule(rule_idx).rhs;
            let lefts = chart.left_fills(&rhs[..pos], start);
            if lefts.is_empty() {
                continue;
            }
            let rights = chart.right_fills(&rhs[pos + 1..], end);
            for left in &lefts {
                for right in &rights {
                    let ids: Vec<EdgeId> = left.iter().copied().chain([id]).chain(right.iter().copied()).collect();
                    let kids: Vec<&Edge> = ids.iter().map(|&c| &chart.edges[c]).collect();
                    let Ok(mut cand) = apply_rule(grammar, rule_idx, &kids, tokens) else {
                        continue;
                    };
                    cand.children = ids;
                    if cand.children.len() == 1 && chart.revisits_unary_chain(&cand) {
                        continue;
                    }
                    push(&mut agenda, cand);
                }
            }
        }
    }
    Ok(chart)
}

/// A materialized parse tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    pub label: String,
    /// Error code when the node was built by a mal-rule.
    pub mal: Option<crate::grammar::ErrorCode>,
    /// Surface word for lexical nodes.
    pub word: Option<String>,
    pub children: Vec<ParseTree>,
}

impl ParseTree {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ParseTree::node_count).sum::<usize>()
    }

    /// `(S (DP (Det the) (NP (N boy))) (VP*MAL:MV* ...))`
    pub fn bracketed(&self) -> String {
        let mut out = String::new();
        self.write_bracketed(&mut out);
        out
    }

    fn write_bracketed(&self, out: &mut String) {
        out.push('(');
        out.push_str(&self.label);
        if let Some(code) = self.mal {
            out.push_str("*MAL:");
            out.push_str(code.as_str());
            out.push('*');
        }
        if let Some(w) = &self.word {
            out.push(' ');
            out.push_str(w);
        }
        for c in &self.children {
            out.push(' ');
            c.write_bracketed(out);
        }
        out.push(')');
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedParse {
    pub edge: EdgeId,
    pub score: f64,
    pub errors: Vec<ErrorRecord>,
    pub tree: ParseTree,
    pub bracketed: String,
}

fn materialize(chart: &Chart, grammar: &Grammar, id: EdgeId) -> ParseTree {
    let e = chart.edge(id);
    ParseTree {
        label: grammar.vocab().symbol_name(e.category.symbol).to_owned(),
        mal: e.rule.and_then(|r| grammar.rule(r).code()),
        word: e.is_lexical().then(|| chart.tokens()[e.start].text.clone()),
        children: e.children.iter().map(|&c| materialize(chart, grammar, c)).collect(),
    }
}

/// All full-span `root` edges as trees, best first: score descending, then
/// fewer errors, fewer nodes, and bracketed text.
pub fn extract_parses(chart: &Chart, grammar: &Grammar, root: Symbol) -> Vec<RankedParse> {
    let n = chart.token_count();
    let mut out: Vec<(usize, RankedParse)> = chart
        .starting_at(0, root)
        .iter()
        .copied()
        .filter(|&id| chart.edges[id].end == n)
        .map(|id| {
            let e = chart.edge(id);
            let tree = materialize(chart, grammar, id);
            let parse = RankedParse {
                edge: id,
                score: e.score,
                errors: e.errors.clone(),
                bracketed: tree.bracketed(),
                tree,
            };
            (parse.tree.node_count(), parse)
        })
        .collect();
    out.sort_by(|(na, a), (nb, b)| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.errors.len().cmp(&b.errors.len()))
            .then_with(|| na.cmp(nb))
            .then_with(|| a.bracketed.cmp(&b.bracketed))
    });
    out.into_iter().map(|(_, p)| p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{tokenize, ErrorCode};
    use crate::omission::MissingFilter;

    fn run(g: &Grammar, text: &str) -> Chart {
        let filter = MissingFilter::default();
        parse(&tokenize(text), g, &[&filter], Budget::default()).unwrap()
    }

    fn best(g: &Grammar, text: &str) -> Option<RankedParse> {
        let chart = run(g, text);
        extract_parses(&chart, g, g.start()).into_iter().next()
    }

    fn codes(p: &RankedParse) -> Vec<ErrorCode> {
        p.errors.iter().map(|e| e.code).collect()
    }

    #[test]
    fn grammatical_sentence_has_error_free_parse() {
        let g = Grammar::demo();
        let p = best(&g, "The boy is happy .").unwrap();
        assert!(p.errors.is_empty());
        assert_eq!(p.bracketed, "(S (S (DP (Det The) (NP (N boy))) (VP (V is) (AdjP (Adj happy)))) (Punct .))");
    }

    #[test]
    fn missing_copula() {
        let g = Grammar::demo();
        let p = best(&g, "The boy happy .").unwrap();
        assert_eq!(codes(&p), [ErrorCode::Mv]);
        assert!(p.bracketed.contains("(VP*MAL:MV* (AdjP (Adj happy)))"));
    }

    #[test]
    fn missing_subject() {
        let g = Grammar::demo();
        let p = best(&g, "Is happy .").unwrap();
        assert_eq!(codes(&p), [ErrorCode::Ms]);
    }

    #[test]
    fn determiner_error_spans_the_dp() {
        let g = Grammar::demo();
        let p = best(&g, "I see a boys .").unwrap();
        assert_eq!(codes(&p), [ErrorCode::Id]);
        assert_eq!(p.errors[0].token_span, [2, 4]);
        assert_eq!(p.errors[0].message, "determiner 'a' does not agree with noun 'boys'");
    }

    #[test]
    fn double_omission_is_filtered() {
        let g = Grammar::demo();
        assert!(best(&g, "Happy happy .").is_none());
        assert!(best(&g, "Happy .").is_none());
        // unfiltered, the only analysis stacks a missing subject on a missing copula
        let chart = parse(&tokenize("Happy ."), &g, &[], Budget::default()).unwrap();
        let all = extract_parses(&chart, &g, g.start());
        assert!(!all.is_empty());
        assert!(all.iter().all(|p| chart.edge(p.edge).other_omissions >= 2));
    }

    fn lexical(g: &Grammar, word: &str, at: usize) -> Edge {
        Edge {
            category: lookup(word, g).remove(0),
            start: at,
            end: at + 1,
            children: Vec::new(),
            rule: None,
            score: 1.0,
            det_omissions: 0,
            other_omissions: 0,
            errors: Vec::new(),
        }
    }

    fn np(g: &Grammar, noun: &str, at: usize, toks: &[Token]) -> Edge {
        let n = lexical(g, noun, at);
        apply_rule(g, g.rule_index("np-n").unwrap(), &[&n], toks).unwrap()
    }

    #[test]
    fn rule_application_over_determiners() {
        let g = Grammar::demo();
        let agr = g.builtins().agr;
        let dp = g.rule_index("dp-det").unwrap();
        let sg = g.rule_index("dp-det-sg").unwrap();

        let toks = tokenize("another child");
        let e = apply_rule(&g, dp, &[&lexical(&g, "another", 0), &np(&g, "child", 1, &toks)], &toks).unwrap();
        assert_eq!(e.category.features.atoms(agr), g.vocab().atom_set("3s"));
        assert!(e.errors.is_empty());

        let toks = tokenize("other child");
        let e = apply_rule(&g, sg, &[&lexical(&g, "other", 0), &np(&g, "child", 1, &toks)], &toks).unwrap();
        assert_eq!(e.category.features.atoms(agr), g.vocab().atom_set("3s"));
        assert_eq!(e.errors[0].code, ErrorCode::Id);

        let toks = tokenize("the child");
        assert_eq!(apply_rule(&g, sg, &[&lexical(&g, "the", 0), &np(&g, "child", 1, &toks)], &toks), Err(Failure));
    }

    #[test]
    fn scores_multiply_and_counters_sum() {
        let g = Grammar::demo();
        let chart = run(&g, "Student always bothering me .");
        let p = extract_parses(&chart, &g, g.start()).remove(0);
        let root = chart.edge(p.edge);
        let mut found: Vec<_> = codes(&p);
        found.sort();
        assert_eq!(found, [ErrorCode::Md, ErrorCode::Mv]);
        assert_eq!((root.det_omissions, root.other_omissions), (1, 1));
        assert!((root.score - 0.01).abs() < 1e-12);
    }

    #[test]
    fn parsing_is_deterministic() {
        let g = Grammar::demo();
        let a = run(&g, "The students are always bothering me .");
        let b = run(&g, "The students are always bothering me .");
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn budget_caps_edges() {
        let g = Grammar::demo();
        let budget = Budget { max_edges: 5, max_pops: 1_000 };
        let chart = parse(&tokenize("The boy is happy ."), &g, &[], budget).unwrap();
        assert_eq!(chart.edges().len(), 5);
        assert!(chart.budget_exceeded());
        assert_eq!(parse(&[], &g, &[], budget).unwrap_err(), ParseError::EmptyInput);
    }

    #[test]
    fn replace_filter_rewrites_candidates() {
        let g = Grammar::demo();
        let adj = g.vocab().symbol("Adj").unwrap();
        let filter = PatternFilter {
            symbol: Some(adj),
            features: FeatureStructure::new(),
            procedure: |e: &Edge| {
                let mut e = e.clone();
                e.score = 0.5;
                FilterAction::Replace(e)
            },
        };
        let chart = parse(&tokenize("The boy is happy ."), &g, &[&filter], Budget::default()).unwrap();
        assert!(chart.edges().iter().filter(|e| e.category.symbol == adj).all(|e| e.score == 0.5));
    }

    #[test]
    fn message_templates() {
        let toks = tokenize("a b c");
        let (x, y) = (
            Edge { start: 0, end: 1, ..lexical_stub() },
            Edge { start: 1, end: 3, ..lexical_stub() },
        );
        assert_eq!(instantiate("{0} / {1} / {*}", &toks, 0, 3, &[&x, &y]), "a / b c / a b c");
        assert_eq!(instantiate("{7} {", &toks, 0, 3, &[&x]), "{7} {");
    }

    fn lexical_stub() -> Edge {
        let g = Grammar::demo();
        lexical(&g, "the", 0)
    }
}
