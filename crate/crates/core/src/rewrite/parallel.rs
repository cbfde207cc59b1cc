//! Parallel rewrite steps decorated with their contracted redex patterns.

use crate::term::{Name, Position, Rule, Substitution, Term};

use super::{Conversion, Direction, RewriteError, Step};

/// A redex pattern `⟨pos, rule, subst⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RedexPattern {
    pub pos: Position,
    pub rule_index: usize,
    pub rule: Rule,
    pub subst: Substitution,
}

impl RedexPattern {
    pub fn matches(&self, t: &Term) -> bool {
        t.get(&self.pos) == Some(&self.rule.lhs.apply(&self.subst))
    }

    pub fn contractum(&self) -> Term {
        self.rule.rhs.apply(&self.subst)
    }

    /// Forward step contracting this pattern in `s`.
    pub fn step(&self, s: &Term) -> Result<Step, RewriteError> {
        if !self.matches(s) {
            return Err(RewriteError::NonMatchingPattern {
                pos: self.pos.clone(),
                term: s.clone(),
            });
        }
        let target = s.replace_at(&self.pos, self.contractum())?;
        Ok(Step {
            source: s.clone(),
            rule_index: self.rule_index,
            rule: self.rule.clone(),
            pos: self.pos.clone(),
            subst: self.subst.clone(),
            dir: Direction::Forward,
            target,
        })
    }

    fn prefixed(&self, q: &Position) -> RedexPattern {
        RedexPattern {
            pos: q.concat(&self.pos),
            ..self.clone()
        }
    }
}

/// A set of pairwise parallel redex patterns, kept sorted by position.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ParallelStep {
    patterns: Vec<RedexPattern>,
}

impl ParallelStep {
    pub fn empty() -> Self {
        ParallelStep::default()
    }

    pub fn new(mut patterns: Vec<RedexPattern>) -> Result<Self, RewriteError> {
        patterns.sort_by(|a, b| a.pos.cmp(&b.pos));
        for (i, a) in patterns.iter().enumerate() {
            for b in &patterns[i + 1..] {
                if !a.pos.is_parallel_to(&b.pos) {
                    return Err(RewriteError::NonParallel(a.pos.clone(), b.pos.clone()));
                }
            }
        }
        Ok(ParallelStep { patterns })
    }

    pub fn patterns(&self) -> &[RedexPattern] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// The unique `t` with `s ⇉_P t`.
pub fn apply_parallel(s: &Term, par: &ParallelStep) -> Result<Term, RewriteError> {
    let mut out = s.clone();
    for pi in &par.patterns {
        if !pi.matches(s) {
            return Err(RewriteError::NonMatchingPattern {
                pos: pi.pos.clone(),
                term: s.clone(),
            });
        }
        out = out.replace_at(&pi.pos, pi.contractum())?;
    }
    Ok(out)
}

/// Sequentializes a parallel step into single forward steps, one per pattern,
/// in position-lexicographic order.
pub fn sequentialize(s: &Term, par: &ParallelStep) -> Result<Conversion, RewriteError> {
    let mut steps = Vec::with_capacity(par.len());
    let mut cur = s.clone();
    for pi in &par.patterns {
        let st = pi.step(&cur)?;
        cur = st.target.clone();
        steps.push(st);
    }
    Ok(Conversion::new(s.clone(), steps))
}

/// Given `σ(x) →^π τ(x)` with `σ`, `τ` agreeing elsewhere, the parallel step
/// `tσ ⇉_P tτ` whose patterns all use the rule of `π`, one per occurrence of `x`.
pub fn lift_variable_step(
    t: &Term,
    sigma: &Substitution,
    tau: &Substitution,
    x: &Name,
    pi: &RedexPattern,
) -> Result<ParallelStep, RewriteError> {
    let from = sigma.image(x);
    let to = tau.image(x);
    let st = pi.step(&from).map_err(|_| {
        RewriteError::Precondition(format!("pattern at {} does not match σ({x}) = {from}", pi.pos))
    })?;
    if st.target != to {
        return Err(RewriteError::Precondition(format!(
            "σ({x}) = {from} does not rewrite to τ({x}) = {to}"
        )));
    }
    for y in sigma.domain().chain(tau.domain()) {
        if y != x && sigma.image(y) != tau.image(y) {
            return Err(RewriteError::Precondition(format!("σ and τ differ on {y}")));
        }
    }
    ParallelStep::new(t.var_positions(x).iter().map(|q| pi.prefixed(q)).collect())
}

/// The `qP` construction: every pattern position is prefixed with `q ∈ Pos(u)`.
pub fn embed_parallel(u: &Term, q: &Position, par: &ParallelStep) -> Result<ParallelStep, RewriteError> {
    u.subterm_at(q)?;
    Ok(ParallelStep {
        patterns: par.patterns.iter().map(|pi| pi.prefixed(q)).collect(),
    })
}
