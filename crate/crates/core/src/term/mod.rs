//! First-order terms, positions, substitutions, rules and syntactic unification.

mod position;
mod subst;
mod trs;
mod unify;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use position::Position;
pub use subst::Substitution;
pub use trs::{linearity, rename_apart, split_duplicating, Linearity, Rule, Trs};
pub use unify::mgu;

/// An interned identifier used for both variables and function symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("position {pos} is not a position of {term}")]
    InvalidPosition { pos: Position, term: Term },
    #[error("symbol {symbol} used with arity {first} and {second}")]
    ArityClash {
        symbol: Name,
        first: usize,
        second: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PosKind {
    Function,
    Variable,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Name),
    Fun(Name, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Name::new(name))
    }

    pub fn fun(name: &str, args: Vec<Term>) -> Term {
        Term::Fun(Name::new(name), args)
    }

    pub fn constant(name: &str) -> Term {
        Term::Fun(Name::new(name), Vec::new())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Name> {
        match self {
            Term::Var(x) => Some(x),
            Term::Fun(..) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::Fun(_, args) => args,
        }
    }

    /// All positions in pre-order, tagged as function or variable positions.
    pub fn positions(&self) -> Vec<(Position, PosKind)> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out);
        out
    }

    fn collect_positions(&self, path: &mut Vec<usize>, out: &mut Vec<(Position, PosKind)>) {
        match self {
            Term::Var(_) => out.push((Position::from(path.clone()), PosKind::Variable)),
            Term::Fun(_, args) => {
                out.push((Position::from(path.clone()), PosKind::Function));
                for (i, a) in args.iter().enumerate() {
                    path.push(i + 1);
                    a.collect_positions(path, out);
                    path.pop();
                }
            }
        }
    }

    pub fn function_positions(&self) -> Vec<Position> {
        self.positions()
            .into_iter()
            .filter(|(_, k)| *k == PosKind::Function)
            .map(|(p, _)| p)
            .collect()
    }

    /// Positions at which the variable `x` occurs, in pre-order.
    pub fn var_positions(&self, x: &Name) -> Vec<Position> {
        self.positions()
            .into_iter()
            .filter(|(p, k)| *k == PosKind::Variable && self.get(p).and_then(Term::as_var) == Some(x))
            .map(|(p, _)| p)
            .collect()
    }

    pub fn is_function_position(&self, p: &Position) -> bool {
        matches!(self.get(p), Some(Term::Fun(..)))
    }

    pub fn get(&self, p: &Position) -> Option<&Term> {
        let mut cur = self;
        for &i in p.as_slice() {
            cur = match cur {
                Term::Fun(_, args) if i >= 1 && i <= args.len() => &args[i - 1],
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&Term, TermError> {
        self.get(p).ok_or_else(|| TermError::InvalidPosition {
            pos: p.clone(),
            term: self.clone(),
        })
    }

    pub fn replace_at(&self, p: &Position, s: Term) -> Result<Term, TermError> {
        if self.get(p).is_none() {
            return Err(TermError::InvalidPosition {
                pos: p.clone(),
                term: self.clone(),
            });
        }
        let mut out = self.clone();
        let mut slot = &mut out;
        for &i in p.as_slice() {
            slot = match slot {
                Term::Fun(_, args) => &mut args[i - 1],
                Term::Var(_) => unreachable!("checked above"),
            };
        }
        *slot = s;
        Ok(out)
    }

    pub fn apply(&self, sigma: &Substitution) -> Term {
        match self {
            Term::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::Fun(f, args) => Term::Fun(f.clone(), args.iter().map(|a| a.apply(sigma)).collect()),
        }
    }

    pub fn var_count(&self, x: &Name) -> usize {
        match self {
            Term::Var(y) => usize::from(x == y),
            Term::Fun(_, args) => args.iter().map(|a| a.var_count(x)).sum(),
        }
    }

    pub fn contains_var(&self, x: &Name) -> bool {
        match self {
            Term::Var(y) => x == y,
            Term::Fun(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Variables in order of first occurrence (left to right).
    pub fn vars_ordered(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.walk_vars(&mut |x| {
            if !out.contains(x) {
                out.push(x.clone());
            }
        });
        out
    }

    fn walk_vars(&self, f: &mut impl FnMut(&Name)) {
        match self {
            Term::Var(x) => f(x),
            Term::Fun(_, args) => args.iter().for_each(|a| a.walk_vars(f)),
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<Name>) {
        self.walk_vars(&mut |x| {
            out.insert(x.clone());
        });
    }

    /// Each variable occurs at most once.
    pub fn is_linear(&self) -> bool {
        let mut seen = BTreeSet::new();
        let mut linear = true;
        self.walk_vars(&mut |x| {
            if !seen.insert(x.clone()) {
                linear = false;
            }
        });
        linear
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Fun(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Fun(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Fun(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Visit every function symbol together with its arity.
    pub fn for_each_symbol(&self, f: &mut impl FnMut(&Name, usize)) {
        if let Term::Fun(g, args) = self {
            f(g, args.len());
            args.iter().for_each(|a| a.for_each_symbol(f));
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Fun(g, args) if args.is_empty() => write!(f, "{g}"),
            Term::Fun(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "?{x}"),
            Term::Fun(g, args) if args.is_empty() => write!(f, "{g}"),
            Term::Fun(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a:?}")?;
                }
                f.write_str(")")
            }
        }
    }
}
