//! The line-oriented grammar language.
//!
//! ```text
//! # comment
//! start S
//! foot error
//! unknown NP agr 3s ntype proper
//! rule [<id>] [<weight>] : LHS -> RHS+
//! mal <CODE> [<id>] [<weight>] ["<message>"] : LHS -> RHS+
//! lex <word> <symbol> (<feature> <value>)*
//! irregular <lemma> <form>+
//! ```
//!
//! Categories are written `Sym` or `Sym(f1 v, f2 ?x, f3 !c, f4 ?!x)`.
//! Values are atoms or `|`-alternations of atoms; `s` and `p` abbreviate
//! `1s|2s|3s` and `1p|2p|3p`. `?x:v` is a variable restricted to `v`,
//! `(?!x c)` a negated constant with a named variable.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use super::*;

#[derive(Debug, Clone)]
enum RawValue {
    Atoms(String),
    Var { name: String, bound: Option<String> },
    Negated { name: Option<String>, constant: String },
    Anti(String),
}

#[derive(Debug, Clone)]
struct RawCat {
    symbol: String,
    feats: Vec<(String, RawValue)>,
}

#[derive(Debug)]
struct RawRule {
    line: usize,
    id: Option<String>,
    weight: Option<f64>,
    mal: Option<(ErrorCode, Option<String>)>,
    lhs: RawCat,
    rhs: Vec<RawCat>,
}

#[derive(Debug, Default)]
struct Raw {
    start: Option<(usize, String)>,
    foot: Vec<String>,
    unknown: Option<RawCat>,
    rules: Vec<RawRule>,
    lex: Vec<(usize, String, RawCat)>,
    irregulars: Vec<(usize, String, Vec<String>)>,
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, GrammarError> {
        Err(GrammarError::Syntax { line: self.line, message: message.into() })
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.s.len() - trimmed.len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.s.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), GrammarError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected '{token}' at '{}'", self.rest()))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let len: usize = self.rest().chars().take_while(|&c| f(c)).map(char::len_utf8).sum();
        self.pos += len;
        &self.s[start..self.pos]
    }

    fn ident(&mut self) -> Result<String, GrammarError> {
        let id = self.take_while(|c| c.is_alphanumeric() || c == '_' || c == '-');
        if id.is_empty() {
            return self.err(format!("expected a name at '{}'", self.rest()));
        }
        Ok(id.to_owned())
    }

    fn word(&mut self) -> Result<String, GrammarError> {
        let w = self.take_while(|c| !c.is_whitespace());
        if w.is_empty() {
            return self.err("expected a word");
        }
        Ok(w.to_owned())
    }

    fn atom_expr(&mut self) -> Result<String, GrammarError> {
        let v = self.take_while(|c| c.is_alphanumeric() || "_+-|".contains(c));
        if v.is_empty() || v.split('|').any(str::is_empty) {
            return self.err(format!("expected a value at '{}'", self.rest()));
        }
        Ok(v.to_owned())
    }

    fn constant(&mut self) -> Result<String, GrammarError> {
        let c = self.atom_expr()?;
        if c.contains('|') {
            return self.err(format!("negation takes a single constant, got '{c}'"));
        }
        Ok(c)
    }

    fn quoted(&mut self) -> Result<String, GrammarError> {
        self.expect("\"")?;
        let mut out = String::new();
        let mut chars = self.rest().char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                '\\' => match chars.next() {
                    Some((_, e)) => out.push(e),
                    None => break,
                },
                c => out.push(c),
            }
        }
        self.err("unterminated string")
    }

    fn value(&mut self) -> Result<RawValue, GrammarError> {
        if self.eat("(") {
            self.expect("?!")?;
            let name = self.ident()?;
            let constant = self.constant()?;
            self.expect(")")?;
            return Ok(RawValue::Negated { name: Some(name), constant });
        }
        if self.eat("?!") {
            return Ok(RawValue::Anti(self.ident()?));
        }
        if self.eat("?") {
            let name = self.take_while(|c| c.is_alphanumeric() || c == '_').to_owned();
            if name.is_empty() {
                return self.err("expected a variable name after '?'");
            }
            let bound = if self.rest().starts_with(':') {
                self.pos += 1;
                Some(self.atom_expr()?)
            } else {
                None
            };
            return Ok(RawValue::Var { name, bound });
        }
        if self.eat("!") {
            return Ok(RawValue::Negated { name: None, constant: self.constant()? });
        }
        Ok(RawValue::Atoms(self.atom_expr()?))
    }

    fn category(&mut self) -> Result<RawCat, GrammarError> {
        let symbol = self.ident()?;
        let mut feats = Vec::new();
        if self.rest().starts_with('(') {
            self.pos += 1;
            loop {
                let name = self.ident()?;
                let value = self.value()?;
                feats.push((name, value));
                if self.eat(")") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(RawCat { symbol, feats })
    }

    /// `word Sym f v f v ...`
    fn pair_category(&mut self) -> Result<RawCat, GrammarError> {
        let symbol = self.ident()?;
        let mut feats = Vec::new();
        while !self.at_end() {
            let name = self.ident()?;
            feats.push((name, RawValue::Atoms(self.atom_expr()?)));
        }
        Ok(RawCat { symbol, feats })
    }
}

fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_quote => escaped = true,
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_rule(cur: &mut Cursor, mal: bool) -> Result<RawRule, GrammarError> {
    let line = cur.line;
    let code = if mal {
        let c = cur.ident()?;
        Some(c.parse::<ErrorCode>().or_else(|e| cur.err(e.to_string()))?)
    } else {
        None
    };
    let (mut id, mut weight, mut message) = (None, None, None);
    loop {
        match cur.peek() {
            Some(':') => {
                cur.pos += 1;
                break;
            }
            Some('"') if mal && message.is_none() => message = Some(cur.quoted()?),
            Some(c) if (c.is_ascii_digit() || c == '.') && weight.is_none() => {
                let w = cur.word()?;
                weight = Some(w.parse::<f64>().or_else(|_| cur.err(format!("bad weight '{w}'")))?);
            }
            Some(c) if c.is_alphabetic() && id.is_none() && weight.is_none() && message.is_none() => {
                id = Some(cur.ident()?)
            }
            _ => return cur.err(format!("malformed rule header at '{}'", cur.rest())),
        }
    }
    let lhs = cur.category()?;
    cur.expect("->")?;
    let mut rhs = Vec::new();
    while !cur.at_end() {
        rhs.push(cur.category()?);
    }
    if rhs.is_empty() {
        return cur.err("rule has an empty right-hand side");
    }
    Ok(RawRule { line, id, weight, mal: code.map(|c| (c, message)), lhs, rhs })
}

fn parse(source: &str) -> Result<Raw, GrammarError> {
    let mut raw = Raw::default();
    for (n, full) in source.lines().enumerate() {
        let text = strip_comment(full);
        let mut cur = Cursor { s: text, pos: 0, line: n + 1 };
        if cur.at_end() {
            continue;
        }
        let keyword = cur.ident()?;
        match keyword.as_str() {
            "start" => raw.start = Some((cur.line, cur.ident()?)),
            "foot" => raw.foot.push(cur.ident()?),
            "unknown" => raw.unknown = Some(cur.pair_category()?),
            "rule" => raw.rules.push(parse_rule(&mut cur, false)?),
            "mal" => raw.rules.push(parse_rule(&mut cur, true)?),
            "lex" => {
                let word = cur.word()?.to_lowercase();
                raw.lex.push((cur.line, word, cur.pair_category()?));
            }
            "irregular" => {
                let lemma = cur.word()?.to_lowercase();
                let mut forms = Vec::new();
                while !cur.at_end() {
                    forms.push(cur.word()?.to_lowercase());
                }
                raw.irregulars.push((cur.line, lemma, forms));
            }
            other => return cur.err(format!("unknown directive '{other}'")),
        }
        if !cur.at_end() {
            return cur.err(format!("trailing input '{}'", cur.rest()));
        }
    }
    Ok(raw)
}

fn raw_cats(raw: &Raw) -> impl Iterator<Item = &RawCat> {
    raw.rules
        .iter()
        .flat_map(|r| std::iter::once(&r.lhs).chain(&r.rhs))
        .chain(raw.lex.iter().map(|l| &l.2))
        .chain(raw.unknown.iter())
}

fn intern_sorted(raw: &Raw) -> Result<Vocab, GrammarError> {
    let mut atoms: BTreeSet<&str> = BUILTIN_ATOMS.into_iter().collect();
    let mut features: BTreeSet<&str> = BUILTIN_FEATURES.into_iter().collect();
    let mut symbols: BTreeSet<&str> = BTreeSet::new();
    let mut exprs: Vec<&str> = Vec::new();
    for cat in raw_cats(raw) {
        symbols.insert(&cat.symbol);
        for (f, v) in &cat.feats {
            features.insert(f);
            match v {
                RawValue::Atoms(e) => exprs.push(e),
                RawValue::Var { bound: Some(e), .. } => exprs.push(e),
                RawValue::Negated { constant, .. } => exprs.push(constant),
                _ => {}
            }
        }
    }
    for f in &raw.foot {
        features.insert(f);
    }
    if let Some((_, s)) = &raw.start {
        symbols.insert(s);
    }
    for e in exprs {
        for a in e.split('|') {
            if a != "s" && a != "p" {
                atoms.insert(a);
            }
        }
    }
    let mut vocab = Vocab::default();
    for a in atoms {
        if vocab.atoms.intern(a).is_none() {
            return Err(GrammarError::Invalid(format!("more than {} distinct atoms", crate::feature::MAX_ATOMS)));
        }
    }
    for f in features {
        vocab.features.intern(f);
    }
    for s in symbols {
        vocab.symbols.intern(s);
    }
    Ok(vocab)
}

struct VarScope {
    names: Vec<String>,
    bounds: Vec<Option<AtomSet>>,
}

impl VarScope {
    fn var(&mut self, name: &str) -> VarId {
        match self.names.iter().position(|n| n == name) {
            Some(i) => VarId(i as u16),
            None => {
                self.names.push(name.to_owned());
                self.bounds.push(None);
                VarId(self.names.len() as u16 - 1)
            }
        }
    }

    fn anonymous(&mut self) -> VarId {
        let name = format!("_{}", self.names.len());
        self.var(&name)
    }
}

fn convert_cat(
    vocab: &Vocab,
    raw: &RawCat,
    mut scope: Option<&mut VarScope>,
    fail: &dyn Fn(String) -> GrammarError,
) -> Result<Category, GrammarError> {
    let symbol = vocab.symbol(&raw.symbol).expect("interned");
    let mut features = FeatureStructure::new();
    let set = |e: &str| vocab.atom_set(e).ok_or_else(|| fail(format!("bad value '{e}'")));
    for (fname, v) in &raw.feats {
        let f = vocab.feature(fname).expect("interned");
        if features.get(f).is_some() {
            return Err(fail(format!("feature '{fname}' repeated in {}", raw.symbol)));
        }
        let term = match (v, scope.as_deref_mut()) {
            (RawValue::Atoms(e), _) => ValueTerm::Atoms(set(e)?),
            (RawValue::Var { name, bound }, Some(sc)) => {
                let id = sc.var(name);
                if let Some(b) = bound {
                    let b = set(b)?;
                    let slot = &mut sc.bounds[id.0 as usize];
                    let narrowed = slot.map_or(b, |old| old.intersect(b));
                    if narrowed.is_empty() {
                        return Err(fail(format!("empty domain for ?{name}")));
                    }
                    *slot = Some(narrowed);
                }
                ValueTerm::Var(id)
            }
            (RawValue::Negated { name, constant }, Some(sc)) => {
                let var = match name {
                    Some(n) => sc.var(n),
                    None => sc.anonymous(),
                };
                ValueTerm::Negated { var, excluded: set(constant)? }
            }
            (RawValue::Anti(name), Some(sc)) => ValueTerm::Anti(sc.var(name)),
            (_, None) => return Err(fail("variables are only allowed in rules".into())),
        };
        features.insert(f, term);
    }
    Ok(Category { symbol, features })
}

fn validate_template(template: &str, arity: usize) -> Result<(), String> {
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let close = rest[open..].find('}').ok_or("unclosed '{' in message")? + open;
        let key = &rest[open + 1..close];
        if key != "*" {
            let i: usize = key.parse().map_err(|_| format!("bad placeholder '{{{key}}}'"))?;
            if i >= arity {
                return Err(format!("placeholder {{{i}}} exceeds rule arity {arity}"));
            }
        }
        rest = &rest[close + 1..];
    }
    Ok(())
}

fn build_rule(vocab: &Vocab, builtins: &Builtins, index: usize, raw: &RawRule) -> Result<Rule, GrammarError> {
    let id = raw.id.clone().unwrap_or_else(|| format!("r{}", index + 1));
    let fail = |message: String| GrammarError::Validation { rule: id.clone(), message: format!("{message} (line {})", raw.line) };
    let mut scope = VarScope { names: Vec::new(), bounds: Vec::new() };
    let lhs = convert_cat(vocab, &raw.lhs, Some(&mut scope), &fail)?;
    let rhs = raw
        .rhs
        .iter()
        .map(|c| convert_cat(vocab, c, Some(&mut scope), &fail))
        .collect::<Result<Vec<_>, _>>()?;

    let weight = raw.weight.unwrap_or(if raw.mal.is_some() { 0.1 } else { 1.0 });
    if !(weight > 0.0 && weight <= 1.0) {
        return Err(fail(format!("weight {weight} outside (0, 1]")));
    }

    let mut rhs_vars = HashSet::new();
    let mut anti_vars = Vec::new();
    for (_, term) in rhs.iter().flat_map(|c| c.features.iter()) {
        match term {
            ValueTerm::Var(v) | ValueTerm::Negated { var: v, .. } => {
                rhs_vars.insert(v);
            }
            ValueTerm::Anti(v) => anti_vars.push(v),
            ValueTerm::Atoms(_) => {}
        }
    }
    for (f, term) in lhs.features.iter() {
        match term {
            ValueTerm::Atoms(_) => {}
            ValueTerm::Var(v) if rhs_vars.contains(&v) => {}
            ValueTerm::Var(v) => {
                return Err(fail(format!("?{} is not bound on the right-hand side", scope.names[v.0 as usize])))
            }
            _ => {
                return Err(fail(format!(
                    "'{}' on the left-hand side must be a value or plain variable",
                    vocab.feature_name(f)
                )))
            }
        }
    }
    for v in anti_vars {
        let partnered = rhs
            .iter()
            .flat_map(|c| c.features.iter())
            .any(|(_, t)| t == ValueTerm::Var(v));
        if !partnered {
            return Err(fail(format!("?!{} has no co-indexed plain variable", scope.names[v.0 as usize])));
        }
    }

    let missing = lhs.features.get(builtins.missing);
    let marks_missing = match missing {
        None => false,
        Some(ValueTerm::Atoms(s)) if s == builtins.plus => true,
        Some(_) => return Err(fail("'missing' may only be set to + on a mal-rule".into())),
    };
    let annotation = match &raw.mal {
        None if marks_missing => return Err(fail("'missing +' requires a mal-rule".into())),
        None => None,
        Some((code, message)) => {
            if code.is_omission() != marks_missing {
                return Err(fail(format!(
                    "code {code} {} 'missing +' on the left-hand side",
                    if code.is_omission() { "requires" } else { "forbids" }
                )));
            }
            let omission = match (marks_missing, code) {
                (false, _) => OmissionKind::None,
                (true, ErrorCode::Md) => OmissionKind::Determiner,
                (true, _) => OmissionKind::Other,
            };
            let message = message.clone().unwrap_or_else(|| code.default_message().to_owned());
            validate_template(&message, rhs.len()).map_err(&fail)?;
            Some(MalAnnotation { code: *code, message, omission })
        }
    };

    Ok(Rule {
        id,
        lhs,
        rhs,
        weight,
        annotation,
        var_names: scope.names,
        var_bounds: scope.bounds,
    })
}

/// Parses and validates grammar source.
pub fn load_grammar(source: &str) -> Result<Grammar, GrammarError> {
    let raw = parse(source)?;
    let vocab = intern_sorted(&raw)?;
    let builtins = Builtins::resolve(&vocab);

    let rules = raw
        .rules
        .iter()
        .enumerate()
        .map(|(i, r)| build_rule(&vocab, &builtins, i, r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut seen = HashSet::new();
    for r in &rules {
        if !seen.insert(r.id.as_str()) {
            return Err(GrammarError::Validation { rule: r.id.clone(), message: "duplicate rule id".into() });
        }
    }

    let lex_fail = |line: usize| move |message: String| GrammarError::Syntax { line, message };
    let source_lexicon = raw
        .lex
        .iter()
        .map(|(line, word, cat)| {
            Ok(LexEntry { word: word.clone(), category: convert_cat(&vocab, cat, None, &lex_fail(*line))? })
        })
        .collect::<Result<Vec<_>, GrammarError>>()?;

    let unknown = match &raw.unknown {
        Some(cat) => Some(convert_cat(&vocab, cat, None, &|m| GrammarError::Invalid(format!("unknown-word category: {m}")))?),
        // default: singular NP when the grammar has one
        None => vocab.symbol("NP").map(|symbol| {
            let mut features = FeatureStructure::new();
            features.insert(builtins.agr, ValueTerm::Atoms(vocab.atom_set("3s").expect("builtin")));
            Category { symbol, features }
        }),
    };

    // symbol declarations: rule heads, lexical categories, the unknown-word category
    let mut declared: HashSet<Symbol> = rules.iter().map(|r| r.lhs.symbol).collect();
    declared.extend(source_lexicon.iter().map(|e| e.category.symbol));
    declared.extend(unknown.as_ref().map(|c| c.symbol));
    for r in &rules {
        for c in &r.rhs {
            if !declared.contains(&c.symbol) {
                return Err(GrammarError::Validation {
                    rule: r.id.clone(),
                    message: format!("undeclared symbol '{}'", vocab.symbol_name(c.symbol)),
                });
            }
        }
    }
    let start = match &raw.start {
        Some((line, name)) => {
            let s = vocab.symbol(name).expect("interned");
            if !rules.iter().any(|r| r.lhs.symbol == s) {
                return Err(GrammarError::Syntax { line: *line, message: format!("start symbol '{name}' has no rules") });
            }
            s
        }
        None => rules
            .first()
            .map(|r| r.lhs.symbol)
            .ok_or_else(|| GrammarError::Invalid("grammar has no rules".into()))?,
    };

    let mut foot = Vec::new();
    for name in &raw.foot {
        let f = vocab.feature(name).expect("interned");
        if !foot.contains(&f) {
            foot.push(f);
        }
    }

    let infl_of = |word: &str| {
        source_lexicon
            .iter()
            .find(|e| e.word == word && e.category.features.get(builtins.infl).is_some())
            .and_then(|e| e.category.features.atoms(builtins.infl))
    };
    let (noun, verb) = (vocab.atom_set("noun").unwrap(), vocab.atom_set("verb").unwrap());
    let mut irregulars = Vec::new();
    for (line, lemma, forms) in &raw.irregulars {
        let fail = |message: String| GrammarError::Syntax { line: *line, message };
        let expected = match infl_of(lemma) {
            Some(k) if k == noun => 1,
            Some(k) if k == verb => 3,
            _ => return Err(fail(format!("'{lemma}' is not an inflectable noun or verb entry"))),
        };
        if forms.len() != expected {
            return Err(fail(format!("'{lemma}' needs {expected} irregular form(s), got {}", forms.len())));
        }
        irregulars.push(Irregular { lemma: lemma.clone(), forms: forms.clone() });
    }

    let mut g = Grammar {
        vocab,
        builtins,
        rules,
        foot,
        start,
        unknown,
        source_lexicon,
        irregulars,
        weight_overrides: BTreeMap::new(),
        lexicon: HashMap::new(),
        rules_by_rhs: Vec::new(),
        weights: Vec::new(),
    };
    g.reindex();
    Ok(g)
}

fn format_term(vocab: &Vocab, rule: &Rule, term: ValueTerm, shown: &mut HashSet<VarId>) -> String {
    let name = |v: VarId| rule.var_names[v.0 as usize].as_str();
    match term {
        ValueTerm::Atoms(s) => vocab.format_set(s),
        ValueTerm::Var(v) => match rule.var_bounds[v.0 as usize] {
            Some(b) if shown.insert(v) => format!("?{}:{}", name(v), vocab.format_set(b)),
            _ => format!("?{}", name(v)),
        },
        ValueTerm::Negated { var, excluded } if name(var).starts_with('_') => {
            format!("!{}", vocab.format_set(excluded))
        }
        ValueTerm::Negated { var, excluded } => format!("(?!{} {})", name(var), vocab.format_set(excluded)),
        ValueTerm::Anti(v) => format!("?!{}", name(v)),
    }
}

fn format_rule_cat(vocab: &Vocab, rule: &Rule, cat: &Category, shown: &mut HashSet<VarId>) -> String {
    let sym = vocab.symbol_name(cat.symbol);
    if cat.features.is_empty() {
        return sym.to_owned();
    }
    let feats: Vec<String> = cat
        .features
        .iter()
        .map(|(f, t)| format!("{} {}", vocab.feature_name(f), format_term(vocab, rule, t, shown)))
        .collect();
    format!("{}({})", sym, feats.join(", "))
}

fn format_pairs(vocab: &Vocab, cat: &Category) -> String {
    let mut out = vocab.symbol_name(cat.symbol).to_owned();
    for (f, t) in cat.features.iter() {
        if let ValueTerm::Atoms(s) = t {
            let _ = write!(out, " {} {}", vocab.feature_name(f), vocab.format_set(s));
        }
    }
    out
}

/// Writes a grammar back out as DSL source. Weight overrides are not part
/// of the DSL and are omitted.
pub(crate) fn serialize(g: &Grammar) -> String {
    let v = &g.vocab;
    let mut out = String::new();
    let _ = writeln!(out, "start {}", v.symbol_name(g.start));
    for &f in &g.foot {
        let _ = writeln!(out, "foot {}", v.feature_name(f));
    }
    if let Some(u) = &g.unknown {
        let _ = writeln!(out, "unknown {}", format_pairs(v, u));
    }
    for rule in &g.rules {
        let mut shown = HashSet::new();
        let head = match &rule.annotation {
            None => format!("rule {} {}", rule.id, rule.weight),
            Some(a) => format!(
                "mal {} {} {} \"{}\"",
                a.code,
                rule.id,
                rule.weight,
                a.message.replace('\\', "\\\\").replace('"', "\\\"")
            ),
        };
        let lhs = format_rule_cat(v, rule, &rule.lhs, &mut shown);
        let rhs: Vec<String> = rule.rhs.iter().map(|c| format_rule_cat(v, rule, c, &mut shown)).collect();
        let _ = writeln!(out, "{head} : {lhs} -> {}", rhs.join(" "));
    }
    for e in &g.source_lexicon {
        let _ = writeln!(out, "lex {} {}", e.word, format_pairs(v, &e.category));
    }
    for irr in &g.irregulars {
        let _ = writeln!(out, "irregular {} {}", irr.lemma, irr.forms.join(" "));
    }
    out
}
