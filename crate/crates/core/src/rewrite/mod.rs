//! Annotated rewrite steps, conversions, parallel steps and bounded reachability.

mod parallel;
mod reach;

use std::fmt;

use thiserror::Error;

use crate::term::{Position, Rule, Substitution, Term, TermError};

pub use parallel::{
    apply_parallel, embed_parallel, lift_variable_step, sequentialize, ParallelStep, RedexPattern,
};
pub use reach::{
    joinable_within, one_step_successors, reachable_within, Reachability, DEFAULT_NODE_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("redex pattern at {pos} does not match {term}")]
    NonMatchingPattern { pos: Position, term: Term },
    #[error("redex patterns at {0} and {1} are not parallel")]
    NonParallel(Position, Position),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("reachability exceeded the cap of {cap} distinct terms")]
    ResourceExhausted { cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// One annotated step `source → target` (forward) or `source ← target`
/// (backward). `rule_index` is the 0-based index of the applied rule in the
/// system under analysis; `rule` is the (possibly renamed) variant used.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub source: Term,
    pub rule_index: usize,
    pub rule: Rule,
    pub pos: Position,
    pub subst: Substitution,
    pub dir: Direction,
    pub target: Term,
}

impl Step {
    /// The term containing the contracted redex.
    pub fn redex_side(&self) -> &Term {
        match self.dir {
            Direction::Forward => &self.source,
            Direction::Backward => &self.target,
        }
    }

    pub fn contractum_side(&self) -> &Term {
        match self.dir {
            Direction::Forward => &self.target,
            Direction::Backward => &self.source,
        }
    }

    pub fn is_valid(&self) -> bool {
        validate_step(self)
    }

    /// The same step read in the opposite direction.
    pub fn reversed(&self) -> Step {
        Step {
            source: self.target.clone(),
            target: self.source.clone(),
            dir: self.dir.flipped(),
            ..self.clone()
        }
    }

    pub fn redex_pattern(&self) -> RedexPattern {
        RedexPattern {
            pos: self.pos.clone(),
            rule_index: self.rule_index,
            rule: self.rule.clone(),
            subst: self.subst.clone(),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.dir {
            Direction::Forward => "→",
            Direction::Backward => "←",
        };
        write!(
            f,
            "{} {arrow}[{}@{}] {}",
            self.source,
            self.rule_index + 1,
            self.pos,
            self.target
        )
    }
}

/// Forward step contracting the redex of `rule` at `p` in `s`, if `s|_p` is an
/// instance of the left-hand side. Extra right-hand side variables stay unbound.
pub fn step_at(s: &Term, rule_index: usize, rule: &Rule, p: &Position) -> Result<Option<Step>, RewriteError> {
    let redex = s.subterm_at(p)?;
    let Some(subst) = Substitution::matching(&rule.lhs, redex) else {
        return Ok(None);
    };
    let target = s.replace_at(p, rule.rhs.apply(&subst))?;
    Ok(Some(Step {
        source: s.clone(),
        rule_index,
        rule: rule.clone(),
        pos: p.clone(),
        subst,
        dir: Direction::Forward,
        target,
    }))
}

/// Reconstructs a step `from → to` (or `from ← to`) by `rule` at `p` when no
/// substitution is supplied: left- and right-hand side are matched jointly
/// against redex and contractum, so variables occurring only on the right are
/// determined as well.
pub fn derive_step(
    from: &Term,
    to: &Term,
    rule_index: usize,
    rule: &Rule,
    p: &Position,
    dir: Direction,
) -> Option<Step> {
    let (redex_side, contractum_side) = match dir {
        Direction::Forward => (from, to),
        Direction::Backward => (to, from),
    };
    let redex = redex_side.get(p)?;
    let contractum = contractum_side.get(p)?;
    let subst = Substitution::matching_all(&[(&rule.lhs, redex), (&rule.rhs, contractum)])?;
    let step = Step {
        source: from.clone(),
        rule_index,
        rule: rule.clone(),
        pos: p.clone(),
        subst,
        dir,
        target: to.clone(),
    };
    validate_step(&step).then_some(step)
}

pub fn validate_step(st: &Step) -> bool {
    let (redex_side, contractum_side) = (st.redex_side(), st.contractum_side());
    match redex_side.get(&st.pos) {
        Some(redex) if *redex == st.rule.lhs.apply(&st.subst) => redex_side
            .replace_at(&st.pos, st.rule.rhs.apply(&st.subst))
            .is_ok_and(|t| t == *contractum_side),
        _ => false,
    }
}

/// A conversion: a start term followed by chained, possibly mixed-direction steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Conversion {
    pub start: Term,
    pub steps: Vec<Step>,
}

impl Conversion {
    pub fn empty(start: Term) -> Self {
        Conversion {
            start,
            steps: Vec::new(),
        }
    }

    pub fn new(start: Term, steps: Vec<Step>) -> Self {
        Conversion { start, steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &Term {
        self.steps.last().map_or(&self.start, |s| &s.target)
    }

    /// Every term visited, starting with `start`.
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.target))
    }

    pub fn is_forward(&self) -> bool {
        self.steps.iter().all(|s| s.dir == Direction::Forward)
    }

    pub fn is_valid(&self) -> bool {
        validate_conversion(self)
    }
}

pub fn validate_conversion(c: &Conversion) -> bool {
    let mut cur = &c.start;
    for st in &c.steps {
        if st.source != *cur || !validate_step(st) {
            return false;
        }
        cur = &st.target;
    }
    true
}
