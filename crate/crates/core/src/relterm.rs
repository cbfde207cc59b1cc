//! Relative termination of duplicating rules modulo the others, shown by
//! monotone linear interpretations over the naturals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::term::{Name, Rule, Term, Trs};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelTermError {
    #[error("symbol {0} is not interpreted")]
    Uninterpreted(Name),
    #[error("argument {position} of {symbol} has coefficient 0")]
    NonMonotone { symbol: Name, position: usize },
    #[error("{symbol} is interpreted with {found} coefficients but has arity {expected}")]
    ArityMismatch {
        symbol: Name,
        expected: usize,
        found: usize,
    },
    #[error("arithmetic overflow while evaluating")]
    Overflow,
    #[error("rule {rule} is not {}", if *strict { "strictly decreasing" } else { "weakly decreasing" })]
    NotOriented { rule: Rule, strict: bool },
}

/// `f(x₁,…,xₙ) ↦ c + a₁x₁ + ⋯ + aₙxₙ` with every `aⱼ ⩾ 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PolyInterpretation {
    map: BTreeMap<Name, (u64, Vec<u64>)>,
}

impl PolyInterpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, symbol: Name, constant: u64, coeffs: Vec<u64>) -> Result<(), RelTermError> {
        if let Some(j) = coeffs.iter().position(|&a| a == 0) {
            return Err(RelTermError::NonMonotone {
                symbol,
                position: j + 1,
            });
        }
        self.map.insert(symbol, (constant, coeffs));
        Ok(())
    }

    pub fn with(mut self, symbol: &str, constant: u64, coeffs: &[u64]) -> Result<Self, RelTermError> {
        self.insert(Name::new(symbol), constant, coeffs.to_vec())?;
        Ok(self)
    }

    /// Constant 0 and all coefficients 1 for every symbol of the signature.
    pub fn trivial(signature: &BTreeMap<Name, usize>) -> Self {
        PolyInterpretation {
            map: signature
                .iter()
                .map(|(f, &n)| (f.clone(), (0, vec![1; n])))
                .collect(),
        }
    }

    pub fn get(&self, symbol: &Name) -> Option<(u64, &[u64])> {
        self.map.get(symbol).map(|(c, a)| (*c, a.as_slice()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, u64, &[u64])> {
        self.map.iter().map(|(f, (c, a))| (f, *c, a.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Every symbol of `signature` is interpreted with matching arity.
    pub fn covers(&self, signature: &BTreeMap<Name, usize>) -> Result<(), RelTermError> {
        for (f, &n) in signature {
            match self.map.get(f) {
                None => return Err(RelTermError::Uninterpreted(f.clone())),
                Some((_, a)) if a.len() != n => {
                    return Err(RelTermError::ArityMismatch {
                        symbol: f.clone(),
                        expected: n,
                        found: a.len(),
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }
}

impl fmt::Display for PolyInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (sym, c, a)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{sym} ↦ {c}")?;
            for (j, aj) in a.iter().enumerate() {
                write!(f, " + {aj}·x{}", j + 1)?;
            }
        }
        Ok(())
    }
}

/// `c + Σ aₓ·x`; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: u64,
    pub coeffs: BTreeMap<Name, u64>,
}

impl LinearForm {
    pub fn constant(c: u64) -> Self {
        LinearForm {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(x: Name) -> Self {
        LinearForm {
            constant: 0,
            coeffs: BTreeMap::from([(x, 1)]),
        }
    }

    pub fn coeff(&self, x: &Name) -> u64 {
        self.coeffs.get(x).copied().unwrap_or(0)
    }

    fn add_scaled(&mut self, k: u64, other: &LinearForm) -> Result<(), RelTermError> {
        let mul = |a: u64| k.checked_mul(a).ok_or(RelTermError::Overflow);
        self.constant = self
            .constant
            .checked_add(mul(other.constant)?)
            .ok_or(RelTermError::Overflow)?;
        for (x, &a) in &other.coeffs {
            let v = self.coeffs.entry(x.clone()).or_insert(0);
            *v = v.checked_add(mul(a)?).ok_or(RelTermError::Overflow)?;
        }
        self.coeffs.retain(|_, a| *a != 0);
        Ok(())
    }

    /// `self ⩾ other` coefficient-wise.
    pub fn geq(&self, other: &LinearForm) -> bool {
        self.constant >= other.constant && other.coeffs.iter().all(|(x, &a)| self.coeff(x) >= a)
    }

    /// Coefficient-wise `⩾` with a strictly larger constant.
    pub fn gt(&self, other: &LinearForm) -> bool {
        self.constant > other.constant && self.geq(other)
    }

    /// Value under an assignment; unassigned variables count as 0.
    pub fn value(&self, assignment: &BTreeMap<Name, u64>) -> Option<u64> {
        self.coeffs.iter().try_fold(self.constant, |acc, (x, &a)| {
            acc.checked_add(a.checked_mul(assignment.get(x).copied().unwrap_or(0))?)
        })
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (x, a) in &self.coeffs {
            write!(f, " + {a}{x}")?;
        }
        Ok(())
    }
}

pub fn eval_linear(t: &Term, ip: &PolyInterpretation) -> Result<LinearForm, RelTermError> {
    match t {
        Term::Var(x) => Ok(LinearForm::var(x.clone())),
        Term::Fun(f, args) => {
            let (c, a) = ip.get(f).ok_or_else(|| RelTermError::Uninterpreted(f.clone()))?;
            if a.len() != args.len() {
                return Err(RelTermError::ArityMismatch {
                    symbol: f.clone(),
                    expected: args.len(),
                    found: a.len(),
                });
            }
            let mut out = LinearForm::constant(c);
            for (&aj, arg) in a.iter().zip(args) {
                out.add_scaled(aj, &eval_linear(arg, ip)?)?;
            }
            Ok(out)
        }
    }
}

fn orient(rule: &Rule, ip: &PolyInterpretation, strict: bool) -> Result<(), RelTermError> {
    let l = eval_linear(&rule.lhs, ip)?;
    let r = eval_linear(&rule.rhs, ip)?;
    let ok = if strict { l.gt(&r) } else { l.geq(&r) };
    if ok {
        Ok(())
    } else {
        Err(RelTermError::NotOriented {
            rule: rule.clone(),
            strict,
        })
    }
}

/// Strict decrease on every rule of `strict_rules`, weak decrease on every
/// rule of `weak_rules`. Succeeds trivially when `strict_rules` is empty.
pub fn verify_relative(
    strict_rules: &Trs,
    weak_rules: &Trs,
    ip: &PolyInterpretation,
) -> Result<(), RelTermError> {
    if strict_rules.is_empty() {
        return Ok(());
    }
    for (f, (_, a)) in &ip.map {
        if let Some(j) = a.iter().position(|&x| x == 0) {
            return Err(RelTermError::NonMonotone {
                symbol: f.clone(),
                position: j + 1,
            });
        }
    }
    for r in strict_rules.rules() {
        orient(r, ip, true)?;
    }
    for r in weak_rules.rules() {
        orient(r, ip, false)?;
    }
    Ok(())
}

fn rule_symbols(r: &Rule) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    for side in [&r.lhs, &r.rhs] {
        side.for_each_symbol(&mut |f: &Name, _| {
            out.insert(f.clone());
        });
    }
    out
}

fn candidates(arity: usize, bound: u64) -> Vec<(u64, Vec<u64>)> {
    let mut coeff_vectors: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..arity {
        coeff_vectors = coeff_vectors
            .into_iter()
            .flat_map(|v| {
                (1..=bound).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    (0..=bound)
        .flat_map(|c| coeff_vectors.iter().map(move |v| (c, v.clone())))
        .collect()
}

/// Backtracking search over constants in `0..=bound` and coefficients in
/// `1..=bound`, symbols in name order. Returns the first interpretation that
/// passes [`verify_relative`].
pub fn search_interpretation(
    strict_rules: &Trs,
    weak_rules: &Trs,
    bound: u64,
) -> Option<PolyInterpretation> {
    let mut signature = strict_rules.signature().clone();
    signature.extend(weak_rules.signature().iter().map(|(f, n)| (f.clone(), *n)));
    if strict_rules.is_empty() {
        return Some(PolyInterpretation::trivial(&signature));
    }
    if bound == 0 && signature.values().any(|&n| n > 0) {
        return None;
    }
    let symbols: Vec<(Name, usize)> = signature.into_iter().collect();
    let pos: BTreeMap<&Name, usize> = symbols.iter().enumerate().map(|(i, (f, _))| (f, i)).collect();
    // rules become checkable once their last symbol (in search order) is assigned
    let mut checks: Vec<Vec<(&Rule, bool)>> = vec![Vec::new(); symbols.len()];
    let tagged = strict_rules
        .rules()
        .iter()
        .map(|r| (r, true))
        .chain(weak_rules.rules().iter().map(|r| (r, false)));
    for (r, strict) in tagged {
        let last = rule_symbols(r).iter().map(|f| pos[f]).max();
        match last {
            Some(k) => checks[k].push((r, strict)),
            // variable-only rules: x → x orients weakly, never strictly
            None if strict || r.lhs != r.rhs => return None,
            None => {}
        }
    }
    let cands: Vec<Vec<(u64, Vec<u64>)>> = symbols.iter().map(|(_, n)| candidates(*n, bound)).collect();

    fn go(
        k: usize,
        symbols: &[(Name, usize)],
        cands: &[Vec<(u64, Vec<u64>)>],
        checks: &[Vec<(&Rule, bool)>],
        ip: &mut PolyInterpretation,
    ) -> bool {
        if k == symbols.len() {
            return true;
        }
        for (c, a) in &cands[k] {
            ip.map.insert(symbols[k].0.clone(), (*c, a.clone()));
            if checks[k].iter().all(|(r, strict)| orient(r, ip, *strict).is_ok())
                && go(k + 1, symbols, cands, checks, ip)
            {
                return true;
            }
        }
        ip.map.remove(&symbols[k].0);
        false
    }

    let mut ip = PolyInterpretation::new();
    if go(0, &symbols, &cands, &checks, &mut ip) {
        debug_assert!(verify_relative(strict_rules, weak_rules, &ip).is_ok());
        Some(ip)
    } else {
        None
    }
}
