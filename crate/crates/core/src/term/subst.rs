use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;

use super::{Name, Term};

/// A finite map from variables to terms; variables outside the domain are
/// mapped to themselves.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution(BTreeMap<Name, Term>);

impl Substitution {
    pub fn new() -> Self {
        Substitution(BTreeMap::new())
    }

    pub fn singleton(x: Name, t: Term) -> Self {
        let mut s = Substitution::new();
        s.insert(x, t);
        s
    }

    pub fn get(&self, x: &Name) -> Option<&Term> {
        self.0.get(x)
    }

    /// The image of `x`, which is `x` itself outside the domain.
    pub fn image(&self, x: &Name) -> Term {
        self.0.get(x).cloned().unwrap_or_else(|| Term::Var(x.clone()))
    }

    pub fn insert(&mut self, x: Name, t: Term) -> Option<Term> {
        self.0.insert(x, t)
    }

    pub fn remove(&mut self, x: &Name) -> Option<Term> {
        self.0.remove(x)
    }

    pub fn contains(&self, x: &Name) -> bool {
        self.0.contains_key(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Name, Term> {
        self.0.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Name> {
        self.0.keys()
    }

    /// Drops bindings `x ↦ x`.
    pub fn normalized(mut self) -> Self {
        self.0.retain(|x, t| t.as_var() != Some(x));
        self
    }

    /// `self` followed by `other`: `t.apply(&s.then(&o)) == t.apply(&s).apply(&o)`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut out: BTreeMap<Name, Term> =
            self.0.iter().map(|(x, t)| (x.clone(), t.apply(other))).collect();
        for (x, t) in &other.0 {
            out.entry(x.clone()).or_insert_with(|| t.clone());
        }
        Substitution(out).normalized()
    }

    pub fn is_idempotent(&self) -> bool {
        self.0.values().all(|t| self.0.keys().all(|x| !t.contains_var(x)))
    }

    /// Extends `self` so that `pattern.apply(self) == term`; fails on conflict.
    /// Bindings already present must agree with the new ones.
    pub fn extend_match(&mut self, pattern: &Term, term: &Term) -> bool {
        match pattern {
            Term::Var(x) => match self.0.get(x) {
                Some(bound) => bound == term,
                None => {
                    self.0.insert(x.clone(), term.clone());
                    true
                }
            },
            Term::Fun(f, pargs) => match term {
                Term::Fun(g, targs) if f == g && pargs.len() == targs.len() => pargs
                    .iter()
                    .zip(targs)
                    .all(|(p, t)| self.extend_match(p, t)),
                _ => false,
            },
        }
    }

    /// Matcher of `pattern` onto `term`. Every variable of `pattern` is bound.
    pub fn matching(pattern: &Term, term: &Term) -> Option<Substitution> {
        Self::matching_all(&[(pattern, term)])
    }

    /// A single matcher for several pattern/term pairs at once.
    pub fn matching_all(pairs: &[(&Term, &Term)]) -> Option<Substitution> {
        let mut s = Substitution::new();
        pairs
            .iter()
            .all(|(p, t)| s.extend_match(p, t))
            .then_some(s)
    }
}

impl FromIterator<(Name, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Name, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} ↦ {t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
