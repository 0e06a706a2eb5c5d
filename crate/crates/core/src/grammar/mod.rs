//! Rules, lexicon and the grammar container.
//!
//! A [`Grammar`] is built from the line-oriented DSL in [`dsl`] and is
//! immutable afterwards, apart from rule-weight overrides applied once at
//! load time.

pub mod dsl;
pub mod lexicon;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::feature::{Atom, AtomSet, AtomTable, Feature, FeatureStructure, NameTable, ValueTerm, VarId};

pub use lexicon::{inflect, lookup, tokenize, Token};

/// Bundled demonstration grammar.
pub const DEMO_GRAMMAR: &str = include_str!("../../grammars/demo.gram");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u16);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Category {
    pub symbol: Symbol,
    pub features: FeatureStructure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorCode {
    /// Number agreement, typically subject-verb.
    #[serde(rename = "NUM")]
    Num,
    /// Extra determiner.
    #[serde(rename = "ED")]
    Ed,
    /// Missing determiner.
    #[serde(rename = "MD")]
    Md,
    /// Incorrect determiner.
    #[serde(rename = "ID")]
    Id,
    /// Missing verb or copula.
    #[serde(rename = "MV")]
    Mv,
    /// Missing subject.
    #[serde(rename = "MS")]
    Ms,
    /// Missing object.
    #[serde(rename = "MO")]
    Mo,
    /// Missing preposition.
    #[serde(rename = "MP")]
    Mp,
    /// Missing relative pronoun.
    #[serde(rename = "MR")]
    Mr,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 9] = [
        ErrorCode::Num,
        ErrorCode::Ed,
        ErrorCode::Md,
        ErrorCode::Id,
        ErrorCode::Mv,
        ErrorCode::Ms,
        ErrorCode::Mo,
        ErrorCode::Mp,
        ErrorCode::Mr,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Num => "NUM",
            ErrorCode::Ed => "ED",
            ErrorCode::Md => "MD",
            ErrorCode::Id => "ID",
            ErrorCode::Mv => "MV",
            ErrorCode::Ms => "MS",
            ErrorCode::Mo => "MO",
            ErrorCode::Mp => "MP",
            ErrorCode::Mr => "MR",
        }
    }

    /// Codes that describe a left-out constituent.
    pub fn is_omission(self) -> bool {
        matches!(
            self,
            ErrorCode::Md | ErrorCode::Mv | ErrorCode::Ms | ErrorCode::Mo | ErrorCode::Mp | ErrorCode::Mr
        )
    }

    pub fn default_message(self) -> &'static str {
        match self {
            ErrorCode::Num => "number agreement problem in '{*}'",
            ErrorCode::Ed => "extra determiner in '{*}'",
            ErrorCode::Md => "missing determiner before '{*}'",
            ErrorCode::Id => "incorrect determiner in '{*}'",
            ErrorCode::Mv => "missing verb before '{*}'",
            ErrorCode::Ms => "missing subject before '{*}'",
            ErrorCode::Mo => "missing object after '{*}'",
            ErrorCode::Mp => "missing preposition before '{*}'",
            ErrorCode::Mr => "missing relative pronoun before '{*}'",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown error code '{0}'")]
pub struct UnknownCode(pub String);

impl FromStr for ErrorCode {
    type Err = UnknownCode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ErrorCode::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownCode(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmissionKind {
    None,
    Determiner,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalAnnotation {
    pub code: ErrorCode,
    /// Template; `{*}` is the text of the whole constituent and `{N}` the
    /// text of the N-th right-hand-side child.
    pub message: String,
    pub omission: OmissionKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub id: String,
    pub lhs: Category,
    pub rhs: Vec<Category>,
    pub weight: f64,
    pub annotation: Option<MalAnnotation>,
    /// Names of the rule's variables, indexed by `VarId`.
    pub var_names: Vec<String>,
    /// Domain restriction per variable (`?a:s` in the DSL).
    pub var_bounds: Vec<Option<AtomSet>>,
}

impl Rule {
    pub fn is_mal(&self) -> bool {
        self.annotation.is_some()
    }

    pub fn code(&self) -> Option<ErrorCode> {
        self.annotation.as_ref().map(|a| a.code)
    }

    pub fn omission(&self) -> OmissionKind {
        self.annotation.as_ref().map_or(OmissionKind::None, |a| a.omission)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexEntry {
    pub word: String,
    pub category: Category,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Irregular {
    pub lemma: String,
    pub forms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("rule '{rule}': {message}")]
    Validation { rule: String, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("weight overrides line {line}: {message}")]
    Override { line: usize, message: String },
}

/// Interned names used by one grammar.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocab {
    pub atoms: AtomTable,
    pub features: NameTable,
    pub symbols: NameTable,
}

/// Names the engine and inflection rules rely on; always interned.
pub(crate) const BUILTIN_FEATURES: [&str; 5] = ["agr", "error", "infl", "missing", "vform"];
pub(crate) const BUILTIN_ATOMS: [&str; 13] =
    ["+", "-", "1p", "1s", "2p", "2s", "3p", "3s", "base", "fin", "ing", "noun", "verb"];
pub(crate) const SINGULAR: [&str; 3] = ["1s", "2s", "3s"];
pub(crate) const PLURAL: [&str; 3] = ["1p", "2p", "3p"];

impl Vocab {
    pub fn feature(&self, name: &str) -> Option<Feature> {
        self.features.get(name).map(Feature)
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.symbols.get(name).map(Symbol)
    }

    pub fn atom(&self, name: &str) -> Option<Atom> {
        self.atoms.get(name)
    }

    /// Atom set for a value written in the DSL (`3s`, `s`, `s|p`, ...).
    pub fn atom_set(&self, expr: &str) -> Option<AtomSet> {
        let mut out = AtomSet::EMPTY;
        for part in expr.split('|') {
            let set = match part {
                "s" => self.atoms.set(SINGULAR)?,
                "p" => self.atoms.set(PLURAL)?,
                name => AtomSet::single(self.atoms.get(name)?),
            };
            out = out.union(set);
        }
        (!out.is_empty()).then_some(out)
    }

    pub fn singular(&self) -> AtomSet {
        self.atoms.set(SINGULAR).expect("builtin atoms")
    }

    pub fn plural(&self) -> AtomSet {
        self.atoms.set(PLURAL).expect("builtin atoms")
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        self.symbols.name(s.0)
    }

    pub fn feature_name(&self, f: Feature) -> &str {
        self.features.name(f.0)
    }

    /// `s`/`p` shorthands first, then remaining atoms by name.
    pub fn format_set(&self, set: AtomSet) -> String {
        let mut parts = Vec::new();
        let mut rest = set;
        for (short, class) in [("s", self.singular()), ("p", self.plural())] {
            if class.is_subset(rest) {
                parts.push(short.to_owned());
                rest = AtomSet::from_bits(rest.bits() & !class.bits());
            }
        }
        let mut names: Vec<&str> = rest.iter().map(|a| self.atoms.name(a)).collect();
        names.sort_unstable();
        parts.extend(names.into_iter().map(str::to_owned));
        parts.join("|")
    }

    /// Resolved feature structure as `f v, f v`.
    pub fn format_features(&self, fs: &FeatureStructure) -> String {
        fs.iter()
            .map(|(f, v)| match v {
                ValueTerm::Atoms(s) => format!("{} {}", self.feature_name(f), self.format_set(s)),
                other => format!("{} {:?}", self.feature_name(f), other),
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn format_category(&self, c: &Category) -> String {
        if c.features.is_empty() {
            self.symbol_name(c.symbol).to_owned()
        } else {
            format!("{}({})", self.symbol_name(c.symbol), self.format_features(&c.features))
        }
    }
}

/// Well-known feature and atom handles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Builtins {
    pub agr: Feature,
    pub error: Feature,
    pub infl: Feature,
    pub missing: Feature,
    pub vform: Feature,
    pub plus: AtomSet,
}

impl Builtins {
    fn resolve(vocab: &Vocab) -> Builtins {
        let f = |n| vocab.feature(n).expect("builtin feature");
        Builtins {
            agr: f("agr"),
            error: f("error"),
            infl: f("infl"),
            missing: f("missing"),
            vform: f("vform"),
            plus: vocab.atom_set("+").expect("builtin atom"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Grammar {
    pub(crate) vocab: Vocab,
    pub(crate) builtins: Builtins,
    pub(crate) rules: Vec<Rule>,
    pub(crate) foot: Vec<Feature>,
    pub(crate) start: Symbol,
    pub(crate) unknown: Option<Category>,
    pub(crate) source_lexicon: Vec<LexEntry>,
    pub(crate) irregulars: Vec<Irregular>,
    pub(crate) weight_overrides: BTreeMap<String, f64>,
    // derived
    pub(crate) lexicon: HashMap<String, Vec<Category>>,
    pub(crate) rules_by_rhs: Vec<Vec<(usize, usize)>>,
    pub(crate) weights: Vec<f64>,
}

impl PartialEq for Grammar {
    fn eq(&self, other: &Self) -> bool {
        self.vocab == other.vocab
            && self.rules == other.rules
            && self.foot == other.foot
            && self.start == other.start
            && self.unknown == other.unknown
            && self.source_lexicon == other.source_lexicon
            && self.irregulars == other.irregulars
            && self.weight_overrides == other.weight_overrides
    }
}

impl Grammar {
    /// Parses and validates DSL source.
    pub fn load(source: &str) -> Result<Grammar, GrammarError> {
        dsl::load_grammar(source)
    }

    /// The bundled demonstration grammar.
    pub fn demo() -> Grammar {
        Grammar::load(DEMO_GRAMMAR).expect("bundled grammar is valid")
    }

    pub fn vocab(&self) -> &Vocab {
        &self.vocab
    }

    pub fn builtins(&self) -> Builtins {
        self.builtins
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, idx: usize) -> &Rule {
        &self.rules[idx]
    }

    pub fn rule_index(&self, id: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.id == id)
    }

    pub fn foot_features(&self) -> &[Feature] {
        &self.foot
    }

    pub fn start(&self) -> Symbol {
        self.start
    }

    /// Category given to out-of-lexicon words, if any.
    pub fn unknown_category(&self) -> Option<&Category> {
        self.unknown.as_ref()
    }

    pub fn source_lexicon(&self) -> &[LexEntry] {
        &self.source_lexicon
    }

    pub fn irregulars(&self) -> &[Irregular] {
        &self.irregulars
    }

    /// Lexicon after inflection, keyed by lowercase word form.
    pub fn lexicon(&self) -> &HashMap<String, Vec<Category>> {
        &self.lexicon
    }

    pub fn weight_overrides(&self) -> &BTreeMap<String, f64> {
        &self.weight_overrides
    }

    /// Weight used for scoring: the override if present, else the rule's own.
    pub fn weight(&self, idx: usize) -> f64 {
        self.weights[idx]
    }

    /// Rules having `sym` at some right-hand-side position.
    pub fn rules_with_rhs(&self, sym: Symbol) -> &[(usize, usize)] {
        self.rules_by_rhs.get(sym.0 as usize).map_or(&[], Vec::as_slice)
    }

    pub fn to_dsl(&self) -> String {
        dsl::serialize(self)
    }

    /// Parses a weight-override file (`<rule-id> <weight>` per line) and
    /// applies it.
    pub fn apply_overrides(&mut self, source: &str) -> Result<(), GrammarError> {
        let mut parsed = BTreeMap::new();
        for (n, raw) in source.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| GrammarError::Override { line: n + 1, message };
            let mut parts = line.split_whitespace();
            let (Some(id), Some(w), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err("expected '<rule-id> <weight>'".into()));
            };
            let w: f64 = w.parse().map_err(|_| err(format!("bad weight '{w}'")))?;
            if !(w > 0.0 && w <= 1.0) {
                return Err(err(format!("weight {w} outside (0, 1]")));
            }
            if self.rule_index(id).is_none() {
                return Err(err(format!("unknown rule id '{id}'")));
            }
            parsed.insert(id.to_owned(), w);
        }
        self.weight_overrides.extend(parsed);
        self.reindex();
        Ok(())
    }

    pub(crate) fn reindex(&mut self) {
        self.weights = self
            .rules
            .iter()
            .map(|r| self.weight_overrides.get(&r.id).copied().unwrap_or(r.weight))
            .collect();
        let mut by_rhs = vec![Vec::new(); self.vocab.symbols.len()];
        for (ri, rule) in self.rules.iter().enumerate() {
            for (pos, cat) in rule.rhs.iter().enumerate() {
                by_rhs[cat.symbol.0 as usize].push((ri, pos));
            }
        }
        self.rules_by_rhs = by_rhs;
        self.lexicon = HashMap::new();
        for e in inflect(&self.source_lexicon, &self.irregulars, &self.vocab) {
            let cats = self.lexicon.entry(e.word).or_default();
            if !cats.contains(&e.category) {
                cats.push(e.category);
            }
        }
    }

    /// Returns a copy where every rule using an anti-unification variable
    /// on `agr` is replaced by one rule per number class (singular,
    /// plural), each using a negated constant and a restricted partner
    /// variable.
    pub fn expand_anti_unification(&self) -> Grammar {
        let mut out = self.clone();
        let classes = [("sg", self.vocab.singular()), ("pl", self.vocab.plural())];
        let mut rules = Vec::with_capacity(self.rules.len());
        for rule in &self.rules {
            let anti: Vec<(usize, VarId)> = rule
                .rhs
                .iter()
                .enumerate()
                .filter_map(|(i, c)| match c.features.get(self.builtins.agr) {
                    Some(ValueTerm::Anti(v)) => Some((i, v)),
                    _ => None,
                })
                .collect();
            if anti.is_empty() {
                rules.push(rule.clone());
                continue;
            }
            for (suffix, class) in classes {
                let mut r = rule.clone();
                r.id = format!("{}-{}", rule.id, suffix);
                for &(i, v) in &anti {
                    let fresh = VarId(r.var_names.len() as u16);
                    r.var_names.push(format!("_{}", fresh.0));
                    r.var_bounds.push(None);
                    r.rhs[i]
                        .features
                        .insert(self.builtins.agr, ValueTerm::Negated { var: fresh, excluded: class });
                    let bound = r.var_bounds[v.0 as usize].map_or(class, |b| b.intersect(class));
                    r.var_bounds[v.0 as usize] = Some(bound);
                }
                rules.push(r);
            }
        }
        out.rules = rules;
        out.weight_overrides.clear();
        out.reindex();
        out
    }
}
