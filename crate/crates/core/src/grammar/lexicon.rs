//! Inflection, tokenization and word lookup.

use serde::Serialize;

use super::{Category, Grammar, Irregular, LexEntry, Vocab};
use crate::feature::{AtomSet, ValueTerm};

const DETACHED: &[char] = &['.', ',', '!', '?', ';', ':'];

/// A token with character (not byte) offsets into the text it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

/// Splits on whitespace and detaches trailing punctuation marks, one token
/// per mark.
pub fn tokenize(sentence: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut chunk = String::new();
    let mut chunk_start = 0;
    let flush = |chunk: &mut String, start: usize, tokens: &mut Vec<Token>| {
        if chunk.is_empty() {
            return;
        }
        let chars: Vec<char> = chunk.chars().collect();
        let mut body = chars.len();
        while body > 0 && DETACHED.contains(&chars[body - 1]) {
            body -= 1;
        }
        if body > 0 {
            tokens.push(Token { text: chars[..body].iter().collect(), start, end: start + body });
        }
        for (i, &c) in chars.iter().enumerate().skip(body) {
            tokens.push(Token { text: c.to_string(), start: start + i, end: start + i + 1 });
        }
        chunk.clear();
    };
    for (i, c) in sentence.chars().enumerate() {
        if c.is_whitespace() {
            flush(&mut chunk, chunk_start, &mut tokens);
        } else {
            if chunk.is_empty() {
                chunk_start = i;
            }
            chunk.push(c);
        }
    }
    let end = chunk_start;
    flush(&mut chunk, end, &mut tokens);
    tokens
}

/// All lexical categories for a word. Unknown words that start with a
/// letter or digit get the grammar's unknown-word category.
pub fn lookup(word: &str, grammar: &Grammar) -> Vec<Category> {
    let lower = word.to_lowercase();
    match grammar.lexicon.get(&lower) {
        Some(cats) if !cats.is_empty() => cats.clone(),
        _ if lower.chars().next().is_some_and(char::is_alphanumeric) => grammar.unknown.iter().cloned().collect(),
        _ => Vec::new(),
    }
}

fn is_vowel(c: char) -> bool {
    "aeiou".contains(c)
}

fn ends_consonant_then(word: &str, last: char) -> bool {
    let mut rev = word.chars().rev();
    rev.next() == Some(last) && rev.next().is_some_and(|c| c.is_alphabetic() && !is_vowel(c))
}

/// Plural nouns and third-person singular verbs.
pub fn add_s(word: &str) -> String {
    if ["s", "x", "z", "ch", "sh"].iter().any(|e| word.ends_with(e)) || ends_consonant_then(word, 'o') {
        format!("{word}es")
    } else if ends_consonant_then(word, 'y') {
        format!("{}ies", &word[..word.len() - 1])
    } else {
        format!("{word}s")
    }
}

pub fn add_ed(word: &str) -> String {
    if word.ends_with('e') {
        format!("{word}d")
    } else if ends_consonant_then(word, 'y') {
        format!("{}ied", &word[..word.len() - 1])
    } else {
        format!("{word}ed")
    }
}

pub fn add_ing(word: &str) -> String {
    if let Some(stem) = word.strip_suffix("ie") {
        format!("{stem}ying")
    } else if word.len() > 2 && word.ends_with('e') && !["ee", "ye", "oe"].iter().any(|e| word.ends_with(e)) {
        format!("{}ing", &word[..word.len() - 1])
    } else {
        format!("{word}ing")
    }
}

/// Expands entries marked `infl noun` / `infl verb` into their paradigms.
///
/// Nouns gain a plural (`agr 3p`); the base stays singular. Verbs yield a
/// non-third-singular present, a bare infinitive, `-s` (`agr 3s`), `-ed`
/// and `-ing` forms. Irregular forms listed for a lemma replace the
/// regular ones. The marker itself is dropped, so unmarked entries pass
/// through unchanged and the expansion is idempotent.
pub fn inflect(entries: &[LexEntry], irregulars: &[Irregular], vocab: &Vocab) -> Vec<LexEntry> {
    let f = |n: &str| vocab.feature(n).expect("builtin feature");
    let set = |e: &str| ValueTerm::Atoms(vocab.atom_set(e).expect("builtin atom"));
    let (infl, agr, vform) = (f("infl"), f("agr"), f("vform"));
    let noun = vocab.atom_set("noun").expect("builtin atom");
    let verb = vocab.atom_set("verb").expect("builtin atom");
    let non_3s = AtomSet::from_bits(
        vocab.singular().union(vocab.plural()).bits() & !vocab.atom_set("3s").expect("builtin").bits(),
    );

    let mut out: Vec<LexEntry> = Vec::new();
    let mut push = |word: &str, cat: Category| {
        let e = LexEntry { word: word.to_owned(), category: cat };
        if !out.contains(&e) {
            out.push(e);
        }
    };
    for e in entries {
        let Some(kind) = e.category.features.atoms(infl) else {
            push(&e.word, e.category.clone());
            continue;
        };
        let mut base = e.category.clone();
        base.features.remove(infl);
        let irregular = irregulars.iter().find(|i| i.lemma == e.word).map(|i| i.forms.as_slice());
        let with = |extra: &[(crate::feature::Feature, ValueTerm)], drop_agr: bool| {
            let mut c = base.clone();
            if drop_agr {
                c.features.remove(agr);
            }
            for &(k, v) in extra {
                c.features.insert(k, v);
            }
            c
        };
        if kind == noun {
            let singular = if base.features.get(agr).is_some() { base.clone() } else { with(&[(agr, set("3s"))], false) };
            push(&e.word, singular);
            let plural = irregular.map_or_else(|| add_s(&e.word), |f| f[0].clone());
            push(&plural, with(&[(agr, set("3p"))], false));
        } else if kind == verb {
            let (third, past, ing) = match irregular {
                Some(f) => (f[0].clone(), f[1].clone(), f[2].clone()),
                None => (add_s(&e.word), add_ed(&e.word), add_ing(&e.word)),
            };
            push(&e.word, with(&[(vform, set("fin")), (agr, ValueTerm::Atoms(non_3s))], false));
            push(&e.word, with(&[(vform, set("base"))], true));
            push(&third, with(&[(vform, set("fin")), (agr, set("3s"))], false));
            push(&past, with(&[(vform, set("fin"))], true));
            push(&ing, with(&[(vform, set("ing"))], true));
        } else {
            push(&e.word, base);
        }
    }
    out
}
