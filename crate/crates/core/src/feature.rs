//! Flat feature structures and the unification machinery used by rules.
//!
//! Values are sets of atoms (stored as a bitset over a per-grammar atom
//! table), variables, negated constants (`!c`) and anti-unification
//! variables (`?!a`). Structures are flat maps from feature name to value;
//! a missing feature is unconstrained.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Upper bound on distinct atoms in one grammar.
pub const MAX_ATOMS: usize = 128;

/// Unification failed. This is an ordinary outcome, not a fault.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("unification failure")]
pub struct Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(u8);

impl Atom {
    pub fn new(index: usize) -> Atom {
        assert!(index < MAX_ATOMS, "atom index {index} out of range");
        Atom(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of atoms. Values in feature structures are always non-empty sets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AtomSet(u128);

impl AtomSet {
    pub const EMPTY: AtomSet = AtomSet(0);

    pub fn single(atom: Atom) -> AtomSet {
        AtomSet(1u128 << atom.0)
    }

    pub fn from_bits(bits: u128) -> AtomSet {
        AtomSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, atom: Atom) -> bool {
        self.0 & (1u128 << atom.0) != 0
    }

    pub fn intersect(self, other: AtomSet) -> AtomSet {
        AtomSet(self.0 & other.0)
    }

    pub fn union(self, other: AtomSet) -> AtomSet {
        AtomSet(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: AtomSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: AtomSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Atom> {
        (0..MAX_ATOMS).filter(move |i| self.0 & (1u128 << i) != 0).map(Atom::new)
    }
}

impl FromIterator<Atom> for AtomSet {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        iter.into_iter().fold(AtomSet::EMPTY, |s, a| s.union(AtomSet::single(a)))
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

/// Interned feature name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Feature(pub u16);

/// Variable index, local to one rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u16);

/// Bidirectional name table for atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomTable {
    names: Vec<String>,
    index: HashMap<String, Atom>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `None` once the table holds `MAX_ATOMS` names.
    pub fn intern(&mut self, name: &str) -> Option<Atom> {
        if let Some(&a) = self.index.get(name) {
            return Some(a);
        }
        if self.names.len() >= MAX_ATOMS {
            return None;
        }
        let a = Atom::new(self.names.len());
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), a);
        Some(a)
    }

    pub fn get(&self, name: &str) -> Option<Atom> {
        self.index.get(name).copied()
    }

    pub fn name(&self, atom: Atom) -> &str {
        &self.names[atom.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Set of the named atoms; `None` if any name is unknown.
    pub fn set<'a, I: IntoIterator<Item = &'a str>>(&self, names: I) -> Option<AtomSet> {
        names.into_iter().map(|n| self.get(n)).collect::<Option<AtomSet>>()
    }
}

/// Bidirectional name table for features and category symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameTable {
    names: Vec<String>,
    index: HashMap<String, u16>,
}

impl NameTable {
    pub fn intern(&mut self, name: &str) -> u16 {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len() as u16;
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<u16> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: u16) -> &str {
        &self.names[i as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueTerm {
    /// Non-empty set of admissible atoms.
    Atoms(AtomSet),
    Var(VarId),
    /// Succeeds only against values disjoint from `excluded`; binds `var`
    /// to the value it met.
    Negated { var: VarId, excluded: AtomSet },
    /// Succeeds only if the value it meets shares no atom with the final
    /// value of the co-indexed plain variable.
    Anti(VarId),
}

impl ValueTerm {
    pub fn atoms(self) -> Option<AtomSet> {
        match self {
            ValueTerm::Atoms(s) => Some(s),
            _ => None,
        }
    }

    pub fn var(self) -> Option<VarId> {
        match self {
            ValueTerm::Atoms(_) => None,
            ValueTerm::Var(v) | ValueTerm::Anti(v) | ValueTerm::Negated { var: v, .. } => Some(v),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Slot {
    parent: Option<VarId>,
    value: Option<AtomSet>,
    anti: Vec<AtomSet>,
}

/// Variable environment for one rule application.
///
/// Bound values only ever narrow. Anti-unification checks against unbound
/// variables are deferred until [`Bindings::finalize`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    slots: Vec<Slot>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vars(n: usize) -> Self {
        Bindings { slots: vec![Slot::default(); n] }
    }

    fn slot_index(&mut self, v: VarId) -> usize {
        let i = v.0 as usize;
        if i >= self.slots.len() {
            self.slots.resize(i + 1, Slot::default());
        }
        i
    }

    fn root(&self, mut v: VarId) -> VarId {
        while let Some(p) = self.slots.get(v.0 as usize).and_then(|s| s.parent) {
            v = p;
        }
        v
    }

    pub fn get(&self, v: VarId) -> Option<AtomSet> {
        let r = self.root(v);
        self.slots.get(r.0 as usize).and_then(|s| s.value)
    }

    /// Intersects the variable's value with `set`, binding it if unbound.
    pub fn narrow(&mut self, v: VarId, set: AtomSet) -> Result<AtomSet, Failure> {
        let r = self.root(v);
        let i = self.slot_index(r);
        let next = match self.slots[i].value {
            Some(cur) => cur.intersect(set),
            None => set,
        };
        if next.is_empty() {
            return Err(Failure);
        }
        self.slots[i].value = Some(next);
        Ok(next)
    }

    /// Makes two variables share one value.
    pub fn alias(&mut self, a: VarId, b: VarId) -> Result<Option<AtomSet>, Failure> {
        let (ra, rb) = (self.root(a), self.root(b));
        if ra == rb {
            return Ok(self.get(ra));
        }
        let ia = self.slot_index(ra);
        let ib = self.slot_index(rb);
        let moved = std::mem::take(&mut self.slots[ia]);
        self.slots[ia].parent = Some(rb);
        self.slots[ib].anti.extend(moved.anti);
        match moved.value {
            Some(s) => self.narrow(rb, s).map(Some),
            None => Ok(self.slots[ib].value),
        }
    }

    /// Records that `v`'s final value must be disjoint from `candidate`.
    pub fn defer_anti(&mut self, v: VarId, candidate: AtomSet) {
        let r = self.root(v);
        let i = self.slot_index(r);
        self.slots[i].anti.push(candidate);
    }

    /// Runs deferred anti-unification checks. An anti check against a
    /// variable that never received a value does not fire.
    pub fn finalize(&self) -> Result<(), Failure> {
        for slot in self.slots.iter().filter(|s| s.parent.is_none()) {
            if slot.anti.is_empty() {
                continue;
            }
            let partner = slot.value.ok_or(Failure)?;
            for &cand in &slot.anti {
                if anti_unify_check(cand, partner) == AntiOutcome::NoFire {
                    return Err(Failure);
                }
            }
        }
        Ok(())
    }
}

/// Unifies two value terms, recording variable bindings in `env`.
pub fn unify_values(a: ValueTerm, b: ValueTerm, env: &mut Bindings) -> Result<ValueTerm, Failure> {
    use ValueTerm::*;
    match (a, b) {
        (Atoms(x), Atoms(y)) => {
            let r = x.intersect(y);
            if r.is_empty() {
                Err(Failure)
            } else {
                Ok(Atoms(r))
            }
        }
        (Var(v), Atoms(s)) | (Atoms(s), Var(v)) => env.narrow(v, s).map(Atoms),
        (Var(v), Var(w)) => Ok(match env.alias(v, w)? {
            Some(s) => Atoms(s),
            None => Var(env.root(w)),
        }),
        (Negated { var, excluded }, Atoms(s)) | (Atoms(s), Negated { var, excluded }) => {
            if !s.is_disjoint(excluded) {
                return Err(Failure);
            }
            env.narrow(var, s).map(Atoms)
        }
        (n @ Negated { .. }, Var(w)) | (Var(w), n @ Negated { .. }) => match env.get(w) {
            Some(s) => {
                let r = unify_values(n, Atoms(s), env)?;
                env.narrow(w, r.atoms().expect("atoms"))?;
                Ok(r)
            }
            // negation only applies to resolved values
            None => Err(Failure),
        },
        (Anti(v), Atoms(cand)) | (Atoms(cand), Anti(v)) => match env.get(v) {
            Some(partner) => match anti_unify_check(cand, partner) {
                AntiOutcome::Pass => Ok(Atoms(cand)),
                AntiOutcome::NoFire => Err(Failure),
            },
            None => {
                env.defer_anti(v, cand);
                Ok(Atoms(cand))
            }
        },
        (Anti(v), Var(w)) | (Var(w), Anti(v)) => match env.get(w) {
            Some(s) => unify_values(Anti(v), Atoms(s), env),
            None => Err(Failure),
        },
        _ => Err(Failure),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AntiOutcome {
    Pass,
    NoFire,
}

/// An anti-unified constituent may only carry values none of which could
/// unify with its partner's value.
pub fn anti_unify_check(candidate: AtomSet, partner: AtomSet) -> AntiOutcome {
    if candidate.is_disjoint(partner) {
        AntiOutcome::Pass
    } else {
        AntiOutcome::NoFire
    }
}

/// Flat feature structure, kept sorted by feature.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FeatureStructure {
    entries: Vec<(Feature, ValueTerm)>,
}

impl FeatureStructure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, f: Feature) -> Option<ValueTerm> {
        self.entries
            .binary_search_by_key(&f, |e| e.0)
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn atoms(&self, f: Feature) -> Option<AtomSet> {
        self.get(f).and_then(ValueTerm::atoms)
    }

    /// Sets `f`, replacing any previous value.
    pub fn insert(&mut self, f: Feature, v: ValueTerm) {
        match self.entries.binary_search_by_key(&f, |e| e.0) {
            Ok(i) => self.entries[i].1 = v,
            Err(i) => self.entries.insert(i, (f, v)),
        }
    }

    pub fn remove(&mut self, f: Feature) -> Option<ValueTerm> {
        match self.entries.binary_search_by_key(&f, |e| e.0) {
            Ok(i) => Some(self.entries.remove(i).1),
            Err(_) => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Feature, ValueTerm)> + '_ {
        self.entries.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_resolved(&self) -> bool {
        self.entries.iter().all(|(_, v)| matches!(v, ValueTerm::Atoms(_)))
    }
}

impl FromIterator<(Feature, ValueTerm)> for FeatureStructure {
    fn from_iter<I: IntoIterator<Item = (Feature, ValueTerm)>>(iter: I) -> Self {
        let mut fs = FeatureStructure::new();
        for (f, v) in iter {
            fs.insert(f, v);
        }
        fs
    }
}

/// Unifies two structures feature by feature; features present on one side
/// only are copied through.
pub fn unify_structures(
    a: &FeatureStructure,
    b: &FeatureStructure,
    env: &mut Bindings,
) -> Result<FeatureStructure, Failure> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let (ea, eb) = (&a.entries, &b.entries);
    while i < ea.len() || j < eb.len() {
        if j == eb.len() || (i < ea.len() && ea[i].0 < eb[j].0) {
            out.push(ea[i]);
            i += 1;
        } else if i == ea.len() || eb[j].0 < ea[i].0 {
            out.push(eb[j]);
            j += 1;
        } else {
            out.push((ea[i].0, unify_values(ea[i].1, eb[j].1, env)?));
            i += 1;
            j += 1;
        }
    }
    Ok(FeatureStructure { entries: out })
}

/// Percolates each foot feature from the children to the parent. Values
/// specified by several children must unify; the result also unifies with
/// any value the parent already carries.
pub fn apply_foot_features(
    parent: &FeatureStructure,
    children: &[&FeatureStructure],
    foot: &[Feature],
) -> Result<FeatureStructure, Failure> {
    let mut out = parent.clone();
    let mut env = Bindings::new();
    for &f in foot {
        let mut acc: Option<ValueTerm> = None;
        for child in children {
            if let Some(v) = child.get(f) {
                acc = Some(match acc {
                    None => v,
                    Some(prev) => unify_values(prev, v, &mut env)?,
                });
            }
        }
        if let Some(v) = acc {
            let merged = match out.get(f) {
                Some(own) => unify_values(own, v, &mut env)?,
                None => v,
            };
            out.insert(f, merged);
        }
    }
    Ok(out)
}
