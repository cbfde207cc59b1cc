//! Local peaks: classification, joins of parallel and variable peaks,
//! critical peaks, and embedding of function peaks into critical peaks.

use std::fmt;

use thiserror::Error;

use crate::rewrite::{
    embed_parallel, lift_variable_step, sequentialize, Conversion, Direction, RedexPattern,
    RewriteError, Step,
};
use crate::term::{mgu, rename_apart, PosKind, Position, Rule, Substitution, Term, Trs};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeakError {
    #[error("not a local peak: {0}")]
    InvalidPeak(String),
    #[error("expected a {expected:?} peak, found {found:?}")]
    WrongKind { expected: PeakKind, found: PeakKind },
    #[error("unsupported peak: {0}")]
    UnsupportedPeak(String),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// A local peak `t ← s → u`. Both steps are stored as forward steps from the
/// common source `s`; `left` produces `t` and `right` produces `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalPeak {
    pub left: Step,
    pub right: Step,
}

impl LocalPeak {
    pub fn new(left: Step, right: Step) -> Result<Self, PeakError> {
        if left.dir != Direction::Forward || right.dir != Direction::Forward {
            return Err(PeakError::InvalidPeak("peak steps must be forward steps".into()));
        }
        if left.source != right.source {
            return Err(PeakError::InvalidPeak(format!(
                "sources differ: {} vs {}",
                left.source, right.source
            )));
        }
        if !left.is_valid() || !right.is_valid() {
            return Err(PeakError::InvalidPeak("invalid rewrite step".into()));
        }
        Ok(LocalPeak { left, right })
    }

    pub fn source(&self) -> &Term {
        &self.left.source
    }

    pub fn left_target(&self) -> &Term {
        &self.left.target
    }

    pub fn right_target(&self) -> &Term {
        &self.right.target
    }

    pub fn mirrored(&self) -> LocalPeak {
        LocalPeak {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

impl fmt::Display for LocalPeak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ←[{}@{}] {} →[{}@{}] {}",
            self.left.target,
            self.left.rule_index + 1,
            self.left.pos,
            self.source(),
            self.right.rule_index + 1,
            self.right.pos,
            self.right.target
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeakKind {
    Parallel,
    /// The right step is above and the left redex sits at a function position of its left-hand side.
    Function,
    /// The right step is above and the left redex sits at or below one of its variables.
    Variable,
    MirroredFunction,
    MirroredVariable,
}

impl PeakKind {
    pub fn mirrored(self) -> Self {
        match self {
            PeakKind::Parallel => PeakKind::Parallel,
            PeakKind::Function => PeakKind::MirroredFunction,
            PeakKind::Variable => PeakKind::MirroredVariable,
            PeakKind::MirroredFunction => PeakKind::Function,
            PeakKind::MirroredVariable => PeakKind::Variable,
        }
    }
}

pub fn classify(pk: &LocalPeak) -> PeakKind {
    let (p, q) = (&pk.left.pos, &pk.right.pos);
    if p.is_parallel_to(q) {
        PeakKind::Parallel
    } else if let Some(rest) = p.strip_prefix(q) {
        if pk.right.rule.lhs.is_function_position(&rest) {
            PeakKind::Function
        } else {
            PeakKind::Variable
        }
    } else {
        let rest = q.strip_prefix(p).expect("p above q");
        if pk.left.rule.lhs.is_function_position(&rest) {
            PeakKind::MirroredFunction
        } else {
            PeakKind::MirroredVariable
        }
    }
}

fn expect_kind(pk: &LocalPeak, expected: PeakKind) -> Result<(), PeakError> {
    let found = classify(pk);
    if found == expected {
        Ok(())
    } else {
        Err(PeakError::WrongKind { expected, found })
    }
}

/// Joins `t ← s → u` at parallel positions: `t →^{π₂} v` and `u →^{π₁} v`.
pub fn join_parallel(pk: &LocalPeak) -> Result<(Step, Step), PeakError> {
    expect_kind(pk, PeakKind::Parallel)?;
    let t_to_v = pk.right.redex_pattern().step(pk.left_target())?;
    let u_to_v = pk.left.redex_pattern().step(pk.right_target())?;
    debug_assert_eq!(t_to_v.target, u_to_v.target);
    Ok((t_to_v, u_to_v))
}

/// Joins a variable peak: one step `t → v` with the outer rule and
/// `u →ⁿ v` with the inner rule, `n = |r₂|_x`.
pub fn join_variable(pk: &LocalPeak) -> Result<(Step, Conversion), PeakError> {
    expect_kind(pk, PeakKind::Variable)?;
    let (inner, outer) = (&pk.left, &pk.right);
    let l2 = &outer.rule.lhs;
    if !l2.is_linear() {
        return Err(PeakError::UnsupportedPeak(format!(
            "variable peak below non-left-linear rule {}",
            outer.rule
        )));
    }
    let q = &outer.pos;
    let below = inner.pos.strip_prefix(q).expect("classified as variable peak");
    let (var_pos, x) = l2
        .positions()
        .into_iter()
        .filter(|(_, k)| *k == PosKind::Variable)
        .find(|(vp, _)| vp.is_prefix_of(&below))
        .and_then(|(vp, _)| l2.get(&vp).and_then(Term::as_var).cloned().map(|x| (vp, x)))
        .expect("variable peak lies below a variable position");
    let inside = below.strip_prefix(&var_pos).expect("prefix");

    let pi = RedexPattern {
        pos: inside,
        ..inner.redex_pattern()
    };
    let sigma = &outer.subst;
    let lifted_x = sigma
        .image(&x)
        .replace_at(&pi.pos, pi.contractum())
        .map_err(RewriteError::from)?;
    let mut tau = sigma.clone();
    tau.insert(x.clone(), lifted_x);

    let t = pk.left_target();
    let v = t.replace_at(q, outer.rule.rhs.apply(&tau)).map_err(RewriteError::from)?;
    let t_to_v = Step {
        source: t.clone(),
        rule_index: outer.rule_index,
        rule: outer.rule.clone(),
        pos: q.clone(),
        subst: tau.clone(),
        dir: Direction::Forward,
        target: v.clone(),
    };
    if !t_to_v.is_valid() {
        return Err(PeakError::UnsupportedPeak("outer redex destroyed by inner step".into()));
    }

    let par = lift_variable_step(&outer.rule.rhs, sigma, &tau, &x, &pi)?;
    let par = embed_parallel(pk.right_target(), q, &par)?;
    let u_to_v = sequentialize(pk.right_target(), &par)?;
    debug_assert_eq!(u_to_v.end(), &v);
    Ok((t_to_v, u_to_v))
}

/// A critical peak `l₂μ[r₁μ]_p ← l₂μ → r₂μ` from the overlap of the inner
/// rule at function position `pos` of the outer rule's left-hand side.
/// `rule_inner` and `rule_outer` are the renamed-apart variants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CriticalPeak {
    pub inner_index: usize,
    pub outer_index: usize,
    pub rule_inner: Rule,
    pub rule_outer: Rule,
    pub pos: Position,
    pub mgu: Substitution,
    pub peak_left: Term,
    pub peak_source: Term,
    pub peak_right: Term,
}

impl CriticalPeak {
    pub fn is_trivial(&self) -> bool {
        self.peak_left == self.peak_right
    }

    pub fn inner_step(&self) -> Step {
        Step {
            source: self.peak_source.clone(),
            rule_index: self.inner_index,
            rule: self.rule_inner.clone(),
            pos: self.pos.clone(),
            subst: self.mgu.clone(),
            dir: Direction::Forward,
            target: self.peak_left.clone(),
        }
    }

    pub fn outer_step(&self) -> Step {
        Step {
            source: self.peak_source.clone(),
            rule_index: self.outer_index,
            rule: self.rule_outer.clone(),
            pos: Position::root(),
            subst: self.mgu.clone(),
            dir: Direction::Forward,
            target: self.peak_right.clone(),
        }
    }

    pub fn local_peak(&self) -> LocalPeak {
        LocalPeak {
            left: self.inner_step(),
            right: self.outer_step(),
        }
    }
}

impl fmt::Display for CriticalPeak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ←[{}@{}] {} →[{}@ε] {}",
            self.peak_left,
            self.inner_index + 1,
            self.pos,
            self.peak_source,
            self.outer_index + 1,
            self.peak_right
        )
    }
}

/// All critical peaks, ordered by outer rule index, inner rule index, then
/// position. Root overlaps of a rule with a variant of itself are included.
pub fn critical_peaks(trs: &Trs) -> Vec<CriticalPeak> {
    let mut out = Vec::new();
    for (j, outer) in trs.rules().iter().enumerate() {
        for (i, inner) in trs.rules().iter().enumerate() {
            let (outer_v, inner_v) = rename_apart(outer, inner);
            for p in outer_v.lhs.function_positions() {
                let sub = outer_v.lhs.get(&p).expect("function position");
                let Some(mu) = mgu(&inner_v.lhs, sub) else {
                    continue;
                };
                let peak_source = outer_v.lhs.apply(&mu);
                let peak_left = peak_source
                    .replace_at(&p, inner_v.rhs.apply(&mu))
                    .expect("position of the instance");
                let peak_right = outer_v.rhs.apply(&mu);
                out.push(CriticalPeak {
                    inner_index: i,
                    outer_index: j,
                    rule_inner: inner_v.clone(),
                    rule_outer: outer_v.clone(),
                    pos: p,
                    mgu: mu,
                    peak_left,
                    peak_source,
                    peak_right,
                });
            }
        }
    }
    out
}

/// Context and instance witnessing that a function peak is an instance of a
/// critical peak: `s = C[l₂μτ]`, `t = C[(l₂μ[r₁μ]_p)τ]`, `u = C[r₂μτ]` with
/// the hole of `C` at `context_pos`.
#[derive(Debug, Clone)]
pub struct FunctionPeakMatch<'a> {
    pub context_pos: Position,
    pub tau: Substitution,
    pub cp_index: usize,
    pub cp: &'a CriticalPeak,
}

pub fn match_function_peak<'a>(
    pk: &LocalPeak,
    cps: &'a [CriticalPeak],
) -> Result<Option<FunctionPeakMatch<'a>>, PeakError> {
    expect_kind(pk, PeakKind::Function)?;
    let q = &pk.right.pos;
    let below = pk.left.pos.strip_prefix(q).expect("function peak");
    let at = |t: &'_ Term| t.get(q).cloned().expect("common context");
    let (s, t, u) = (at(pk.source()), at(pk.left_target()), at(pk.right_target()));
    for (k, cp) in cps.iter().enumerate() {
        if cp.inner_index != pk.left.rule_index
            || cp.outer_index != pk.right.rule_index
            || cp.pos != below
        {
            continue;
        }
        if let Some(tau) = Substitution::matching_all(&[
            (&cp.peak_source, &s),
            (&cp.peak_left, &t),
            (&cp.peak_right, &u),
        ]) {
            return Ok(Some(FunctionPeakMatch {
                context_pos: q.clone(),
                tau,
                cp_index: k,
                cp,
            }));
        }
    }
    Ok(None)
}
