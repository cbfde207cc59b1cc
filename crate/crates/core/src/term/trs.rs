use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Name, Substitution, Term, TermError};

/// A rewrite rule `lhs → rhs`. No variable conditions are imposed: the
/// left-hand side may be a variable and the right-hand side may introduce
/// variables of its own.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Rule { lhs, rhs }
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    /// Some variable occurs more often on the right than on the left.
    pub fn is_duplicating(&self) -> bool {
        self.rhs
            .vars()
            .iter()
            .any(|x| self.lhs.var_count(x) < self.rhs.var_count(x))
    }

    pub fn is_left_linear(&self) -> bool {
        self.lhs.is_linear()
    }

    pub fn is_linear(&self) -> bool {
        self.lhs.is_linear() && self.rhs.is_linear()
    }

    pub fn apply(&self, sigma: &Substitution) -> Rule {
        Rule::new(self.lhs.apply(sigma), self.rhs.apply(sigma))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}", self.lhs, self.rhs)
    }
}

/// An ordered sequence of rules over a consistent signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trs {
    rules: Vec<Rule>,
    signature: BTreeMap<Name, usize>,
}

impl Trs {
    pub fn new(rules: Vec<Rule>) -> Result<Self, TermError> {
        let mut signature = BTreeMap::new();
        let mut clash = None;
        for r in &rules {
            for t in [&r.lhs, &r.rhs] {
                t.for_each_symbol(&mut |f, n| match signature.get(f) {
                    Some(&m) if m != n && clash.is_none() => {
                        clash = Some(TermError::ArityClash {
                            symbol: f.clone(),
                            first: m,
                            second: n,
                        })
                    }
                    Some(_) => {}
                    None => {
                        signature.insert(f.clone(), n);
                    }
                });
            }
        }
        match clash {
            Some(e) => Err(e),
            None => Ok(Trs { rules, signature }),
        }
    }

    pub fn empty() -> Self {
        Trs {
            rules: Vec::new(),
            signature: BTreeMap::new(),
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, index: usize) -> Option<&Rule> {
        self.rules.get(index)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn signature(&self) -> &BTreeMap<Name, usize> {
        &self.signature
    }

    pub fn variables(&self) -> BTreeSet<Name> {
        self.rules.iter().flat_map(Rule::vars).collect()
    }

    /// Checks that `t` uses every symbol of the signature with its declared arity.
    pub fn check_term(&self, t: &Term) -> Result<(), TermError> {
        let mut err = None;
        t.for_each_symbol(&mut |f, n| {
            if let Some(&m) = self.signature.get(f) {
                if m != n && err.is_none() {
                    err = Some(TermError::ArityClash {
                        symbol: f.clone(),
                        first: m,
                        second: n,
                    });
                }
            }
        });
        err.map_or(Ok(()), Err)
    }
}

impl fmt::Display for Trs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            writeln!(f, "{:>3}: {r}", i + 1)?;
        }
        Ok(())
    }
}

/// Partitions `trs` into its duplicating and non-duplicating rules, keeping
/// the relative order inside each part.
pub fn split_duplicating(trs: &Trs) -> (Trs, Trs) {
    let (dup, nondup): (Vec<Rule>, Vec<Rule>) =
        trs.rules.iter().cloned().partition(Rule::is_duplicating);
    // Sub-systems of a consistent system are consistent.
    (
        Trs::new(dup).expect("subset of a consistent signature"),
        Trs::new(nondup).expect("subset of a consistent signature"),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linearity {
    Linear,
    LeftLinear,
    Neither,
}

pub fn linearity(trs: &Trs) -> Linearity {
    if trs.rules.iter().all(Rule::is_linear) {
        Linearity::Linear
    } else if trs.rules.iter().all(Rule::is_left_linear) {
        Linearity::LeftLinear
    } else {
        Linearity::Neither
    }
}

/// Returns `r1` unchanged and a variant of `r2` whose variables are disjoint
/// from those of `r1`. Clashing variables get primes appended until fresh, so
/// the result is deterministic.
pub fn rename_apart(r1: &Rule, r2: &Rule) -> (Rule, Rule) {
    let taken1 = r1.vars();
    let mut taken: BTreeSet<Name> = taken1.union(&r2.vars()).cloned().collect();
    let mut renaming = Substitution::new();
    for x in r2.lhs.vars_ordered().into_iter().chain(r2.rhs.vars_ordered()) {
        if !taken1.contains(&x) || renaming.contains(&x) {
            continue;
        }
        let mut fresh = format!("{x}'");
        while taken.contains(&Name::new(&fresh)) {
            fresh.push('\'');
        }
        let fresh = Name::new(&fresh);
        taken.insert(fresh.clone());
        renaming.insert(x, Term::Var(fresh));
    }
    (r1.clone(), r2.apply(&renaming))
}
