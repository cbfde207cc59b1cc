use std::fmt;

use crate::labeling::{
    check_eld_diagram, check_fan, valley_to_diagram, Diagram, DiagramError, DiagramSide, IndexMap,
};
use crate::peaks::{critical_peaks, CriticalPeak, LocalPeak};
use crate::relterm::verify_relative;
use crate::rewrite::{derive_step, Conversion, Direction, Reachability, RewriteError, Step};
use crate::term::{linearity, split_duplicating, Linearity, Position, Substitution, Term, Trs};

use super::model::{Certificate, Mode, PeakEntry, RelTermEvidence, SideSpec, StepDir, StepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectReason {
    NotLinear,
    NotLeftLinear,
    LabelCount,
    RelativeTermination,
    NoEntry,
    MalformedDiagram,
    NotDecreasing,
    FanViolation,
}

impl RejectReason {
    pub fn code(self) -> &'static str {
        match self {
            RejectReason::NotLinear => "not-linear",
            RejectReason::NotLeftLinear => "not-left-linear",
            RejectReason::LabelCount => "label-count",
            RejectReason::RelativeTermination => "relative-termination",
            RejectReason::NoEntry => "no-entry",
            RejectReason::MalformedDiagram => "malformed-diagram",
            RejectReason::NotDecreasing => "not-decreasing",
            RejectReason::FanViolation => "fan-violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub reason: RejectReason,
    /// Index into the critical peaks of the system, when the failure is per peak.
    pub peak: Option<usize>,
    pub detail: String,
    /// Terms violating the fan property.
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    AcceptConditional { assumption: String },
    Reject(Rejection),
    Error(String),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    pub fn code(&self) -> &'static str {
        match self {
            Verdict::Accept => "accept",
            Verdict::AcceptConditional { .. } => "accept-conditional",
            Verdict::Reject(r) => r.reason.code(),
            Verdict::Error(_) => "error",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => write!(f, "ACCEPT"),
            Verdict::AcceptConditional { assumption } => write!(f, "ACCEPT (assuming {assumption})"),
            Verdict::Reject(r) => {
                write!(f, "REJECT {}", r.reason.code())?;
                if let Some(i) = r.peak {
                    write!(f, " at critical peak {i}")?;
                }
                write!(f, ": {}", r.detail)
            }
            Verdict::Error(e) => write!(f, "ERROR {e}"),
        }
    }
}

fn reject(reason: RejectReason, peak: Option<usize>, detail: impl Into<String>) -> Verdict {
    Verdict::Reject(Rejection {
        reason,
        peak,
        detail: detail.into(),
        terms: Vec::new(),
    })
}

/// A bijective variable renaming `ρ` with `source·ρ = cp.peak_source`.
pub fn match_entry(cp: &CriticalPeak, entry: &PeakEntry) -> Option<Substitution> {
    let rho = Substitution::matching(&entry.source, &cp.peak_source)?;
    let mut images = std::collections::BTreeSet::new();
    for (_, t) in rho.iter() {
        let x = t.as_var()?;
        if !images.insert(x.clone()) {
            return None;
        }
    }
    Some(rho)
}

fn replay_step(trs: &Trs, cur: &Term, spec: &StepSpec, rho: &Substitution) -> Result<Step, String> {
    let idx = spec
        .rule
        .checked_sub(1)
        .filter(|&i| i < trs.len())
        .ok_or_else(|| format!("rule {} does not exist", spec.rule))?;
    let rule = trs.rule(idx).expect("index checked");
    let to = spec.to.apply(rho);
    let pos = Position::from(spec.pos.clone());
    let dir = match spec.dir {
        StepDir::Forward => Direction::Forward,
        StepDir::Backward => Direction::Backward,
    };
    let step = match &spec.subst {
        None => derive_step(cur, &to, idx, rule, &pos, dir),
        Some(m) => {
            let subst: Substitution = m.iter().map(|(x, t)| (x.clone(), t.apply(rho))).collect();
            let st = Step {
                source: cur.clone(),
                rule_index: idx,
                rule: rule.clone(),
                pos: pos.clone(),
                subst,
                dir,
                target: to.clone(),
            };
            st.is_valid().then_some(st)
        }
    };
    step.ok_or_else(|| {
        let arrow = if dir == Direction::Forward { "→" } else { "←" };
        format!("{cur} {arrow} {to} is not a step with rule {} at {pos}", spec.rule)
    })
}

fn replay(trs: &Trs, start: &Term, specs: &[StepSpec], rho: &Substitution) -> Result<Conversion, String> {
    let mut steps: Vec<Step> = Vec::with_capacity(specs.len());
    for spec in specs {
        let cur = steps.last().map_or(start, |s| &s.target);
        let st = replay_step(trs, cur, spec, rho)?;
        steps.push(st);
    }
    Ok(Conversion::new(start.clone(), steps))
}

fn replay_side(trs: &Trs, start: &Term, side: &SideSpec, rho: &Substitution) -> Result<DiagramSide, String> {
    let SideSpec::Conv { conv1, step, conv2 } = side else {
        return Err("expected a conversion side".into());
    };
    let conv1 = replay(trs, start, conv1, rho)?;
    let step = match step {
        Some(spec) => Some(replay_step(trs, conv1.end(), spec, rho)?),
        None => None,
    };
    let mid = step.as_ref().map_or_else(|| conv1.end().clone(), |s| s.target.clone());
    let conv2 = replay(trs, &mid, conv2, rho)?;
    Ok(DiagramSide { conv1, step, conv2 })
}

/// Rebuilds the diagram an entry describes for `peak` and checks it.
fn entry_diagram(
    trs: &Trs,
    mode: Mode,
    labels: &IndexMap,
    peak: &LocalPeak,
    entry: &PeakEntry,
    rho: &Substitution,
) -> Result<Diagram, DiagramError> {
    let structural = DiagramError::Structural;
    let d = match (&entry.left, &entry.right, mode) {
        (SideSpec::Seq(l), SideSpec::Seq(r), Mode::ValleyRl) => {
            let left = replay(trs, peak.left_target(), l, rho).map_err(structural)?;
            let right = replay(trs, peak.right_target(), r, rho).map_err(structural)?;
            valley_to_diagram(labels, peak, &left, &right)?
        }
        (l @ SideSpec::Conv { .. }, r @ SideSpec::Conv { .. }, Mode::LinearRl | Mode::ConvRl) => Diagram {
            peak: peak.clone(),
            left: replay_side(trs, peak.left_target(), l, rho).map_err(structural)?,
            right: replay_side(trs, peak.right_target(), r, rho).map_err(structural)?,
        },
        _ => return Err(structural(format!("entry shape does not fit {} mode", mode.as_str()))),
    };
    check_eld_diagram(labels, &d)?;
    Ok(d)
}

fn severity(e: &DiagramError) -> u8 {
    match e {
        DiagramError::Structural(_) => 0,
        DiagramError::UnknownRule(_) => 1,
        DiagramError::Label { .. } => 2,
    }
}

/// All diagrams for `cp` obtained from matching entries, in both
/// orientations, that pass the decreasingness check; or the most informative
/// failure.
fn peak_diagrams(
    trs: &Trs,
    cert: &Certificate,
    cp: &CriticalPeak,
) -> Result<Vec<Diagram>, Option<DiagramError>> {
    let peak = cp.local_peak();
    let mirrored = peak.mirrored();
    let mut passing = Vec::new();
    let mut worst: Option<DiagramError> = None;
    for entry in &cert.peaks {
        let Some(rho) = match_entry(cp, entry) else {
            continue;
        };
        for (pk, flip) in [(&peak, false), (&mirrored, true)] {
            match entry_diagram(trs, cert.mode, &cert.labels, pk, entry, &rho) {
                Ok(d) => passing.push(if flip { d.mirrored() } else { d }),
                Err(e) => {
                    if worst.as_ref().is_none_or(|w| severity(&e) > severity(w)) {
                        worst = Some(e);
                    }
                }
            }
        }
    }
    if passing.is_empty() {
        Err(worst)
    } else {
        Ok(passing)
    }
}

/// Checks `cert` against `trs` with the default reachability cap.
pub fn check(trs: &Trs, cert: &Certificate) -> Verdict {
    check_with(trs, cert, Reachability::default())
}

pub fn check_with(trs: &Trs, cert: &Certificate, reach: Reachability) -> Verdict {
    // (i) linearity gate
    let lin = linearity(trs);
    match cert.mode {
        Mode::LinearRl if lin != Linearity::Linear => {
            return reject(RejectReason::NotLinear, None, "linear-rl requires a linear system");
        }
        Mode::ValleyRl | Mode::ConvRl if lin == Linearity::Neither => {
            return reject(
                RejectReason::NotLeftLinear,
                None,
                format!("{} requires a left-linear system", cert.mode.as_str()),
            );
        }
        _ => {}
    }
    if !cert.labels.is_total_on(trs) {
        return reject(
            RejectReason::LabelCount,
            None,
            format!("{} labels for {} rules", cert.labels.len(), trs.len()),
        );
    }

    // (ii) relative termination of the duplicating rules
    let mut assumption = None;
    if cert.mode != Mode::LinearRl {
        let (dup, rest) = split_duplicating(trs);
        match &cert.relterm {
            RelTermEvidence::Assumed => {
                assumption = Some("relative termination of the duplicating rules".to_string())
            }
            RelTermEvidence::Interpretation(ip) => {
                if let Err(e) = verify_relative(&dup, &rest, ip) {
                    return reject(RejectReason::RelativeTermination, None, e.to_string());
                }
            }
            RelTermEvidence::None if !dup.is_empty() => {
                return reject(
                    RejectReason::RelativeTermination,
                    None,
                    "duplicating rules present but no termination evidence given",
                );
            }
            RelTermEvidence::None => {}
        }
    }

    // (iii) critical peaks, (iv) decreasing diagrams
    let cps = critical_peaks(trs);
    let mut diagrams: Vec<(usize, Vec<Diagram>)> = Vec::new();
    for (i, cp) in cps.iter().enumerate() {
        if cp.is_trivial() {
            continue;
        }
        match peak_diagrams(trs, cert, cp) {
            Ok(ds) => diagrams.push((i, ds)),
            Err(None) => {
                return reject(RejectReason::NoEntry, Some(i), format!("no entry matches {cp}"));
            }
            Err(Some(e)) => {
                let reason = match e {
                    DiagramError::Label { .. } => RejectReason::NotDecreasing,
                    _ => RejectReason::MalformedDiagram,
                };
                return reject(reason, Some(i), format!("{cp}: {e}"));
            }
        }
    }

    // (v) fan property
    if cert.mode == Mode::ConvRl {
        let bound = cert.fan_bound.unwrap_or(0);
        for (i, ds) in &diagrams {
            let cp = &cps[*i];
            let mut first_bad: Option<Vec<Term>> = None;
            for d in ds {
                match check_fan(trs, &cp.peak_source, d, bound, reach) {
                    Ok(bad) if bad.is_empty() => {
                        first_bad = None;
                        break;
                    }
                    Ok(bad) => {
                        first_bad.get_or_insert(bad);
                    }
                    Err(RewriteError::ResourceExhausted { cap }) => {
                        return Verdict::Error(format!("reachability exceeded {cap} terms at critical peak {i}"));
                    }
                    Err(e) => return Verdict::Error(e.to_string()),
                }
            }
            if let Some(bad) = first_bad {
                let names: Vec<String> = bad.iter().map(Term::to_string).collect();
                return Verdict::Reject(Rejection {
                    reason: RejectReason::FanViolation,
                    peak: Some(*i),
                    detail: format!(
                        "{cp}: not reachable from {} within {bound} steps: {}",
                        cp.peak_source,
                        names.join(", ")
                    ),
                    terms: bad,
                });
            }
        }
    }

    match assumption {
        Some(assumption) => Verdict::AcceptConditional { assumption },
        None => Verdict::Accept,
    }
}
