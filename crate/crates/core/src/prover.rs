//! Small-scale certificate search: valley joins by bounded rewriting, a
//! backtracking search for rule labels, and interpretation search for the
//! duplicating rules.

use std::collections::BTreeSet;

use crate::certificate::{Certificate, Mode, PeakEntry, RelTermEvidence, SideSpec, StepDir, StepSpec};
use crate::labeling::{greedy_split, valley_to_diagram, IndexMap};
use crate::peaks::{critical_peaks, CriticalPeak};
use crate::relterm::search_interpretation;
use crate::rewrite::{one_step_successors, Conversion, RewriteError, Step};
use crate::term::{linearity, split_duplicating, Linearity, Term, Trs};

pub const DEFAULT_JOIN_CAP: usize = 64;
pub const DEFAULT_PATH_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinMode {
    Valley,
    Conv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProverConfig {
    pub join_depth: usize,
    pub max_label: u32,
    pub coeff_bound: u64,
    pub mode: JoinMode,
    /// Candidate joins kept per peak.
    pub join_cap: usize,
    /// Rewrite sequences enumerated per peak side before giving up.
    pub path_cap: usize,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            join_depth: 3,
            max_label: 2,
            coeff_bound: 2,
            mode: JoinMode::Valley,
            join_cap: DEFAULT_JOIN_CAP,
            path_cap: DEFAULT_PATH_CAP,
        }
    }
}

pub type Join = (Conversion, Conversion);

/// Forward sequences without repeated terms from `start`, at most `depth` long.
fn paths(trs: &Trs, start: &Term, depth: usize, cap: usize) -> Result<Vec<Conversion>, RewriteError> {
    let mut out = vec![Conversion::empty(start.clone())];
    let mut frontier = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &i in &frontier {
            let conv = out[i].clone();
            let seen: BTreeSet<&Term> = conv.terms().collect();
            for st in one_step_successors(trs, conv.end()) {
                if seen.contains(&st.target) {
                    continue;
                }
                let mut steps = conv.steps.clone();
                steps.push(st);
                out.push(Conversion::new(start.clone(), steps));
                if out.len() > cap {
                    return Err(RewriteError::ResourceExhausted { cap });
                }
                next.push(out.len() - 1);
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Pairs of forward sequences from the two peak targets that meet, shortest
/// first, at most `cap` of them.
pub fn find_joins(
    trs: &Trs,
    cp: &CriticalPeak,
    depth: usize,
    cap: usize,
    path_cap: usize,
) -> Result<Vec<Join>, RewriteError> {
    let left = paths(trs, &cp.peak_left, depth, path_cap)?;
    let right = paths(trs, &cp.peak_right, depth, path_cap)?;
    let mut out = Vec::new();
    for total in 0..=2 * depth {
        for l in left.iter().filter(|l| l.len() <= total) {
            for r in right.iter().filter(|r| r.len() == total - l.len()) {
                if l.end() == r.end() {
                    out.push((l.clone(), r.clone()));
                    if out.len() == cap {
                        return Ok(out);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn labels_of(labels: &[u32], conv: &Conversion) -> Vec<u32> {
    conv.steps.iter().map(|s| labels[s.rule_index]).collect()
}

fn join_passes(labels: &[u32], cp: &CriticalPeak, (l, r): &Join) -> bool {
    let alpha = labels[cp.inner_index];
    let beta = labels[cp.outer_index];
    greedy_split(alpha, beta, &labels_of(labels, l)).is_some()
        && greedy_split(beta, alpha, &labels_of(labels, r)).is_some()
}

fn rules_of(cp: &CriticalPeak, joins: &[Join]) -> BTreeSet<usize> {
    let mut out = BTreeSet::from([cp.inner_index, cp.outer_index]);
    for (l, r) in joins {
        out.extend(l.steps.iter().chain(&r.steps).map(|s| s.rule_index));
    }
    out
}

/// Backtracking over labels `0..=max_label` for the rules in index order, so
/// that every peak has a candidate join that splits decreasingly. Rules that
/// occur in no constraint are labelled 0.
pub fn assign_labels(trs: &Trs, peaks: &[(CriticalPeak, Vec<Join>)], max_label: u32) -> Option<IndexMap> {
    let n = trs.len();
    let mut involved = BTreeSet::new();
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, (cp, joins)) in peaks.iter().enumerate() {
        if cp.is_trivial() {
            continue;
        }
        let rules = rules_of(cp, joins);
        let last = *rules.iter().max().expect("peak rules");
        due[last].push(k);
        involved.extend(rules);
    }
    let order: Vec<usize> = involved.into_iter().collect();

    fn go(
        k: usize,
        order: &[usize],
        max_label: u32,
        peaks: &[(CriticalPeak, Vec<Join>)],
        due: &[Vec<usize>],
        labels: &mut [u32],
    ) -> bool {
        let Some(&rule) = order.get(k) else {
            return true;
        };
        for v in 0..=max_label {
            labels[rule] = v;
            let ok = due[rule].iter().all(|&p| {
                let (cp, joins) = &peaks[p];
                joins.iter().any(|j| join_passes(labels, cp, j))
            });
            if ok && go(k + 1, order, max_label, peaks, due, labels) {
                return true;
            }
        }
        labels[rule] = 0;
        false
    }

    let mut labels = vec![0; n];
    go(0, &order, max_label, peaks, &due, &mut labels).then(|| IndexMap::new(labels))
}

fn step_spec(trs: &Trs, st: &Step) -> StepSpec {
    let rule = trs.rule(st.rule_index).expect("rule of the system");
    let extra_vars = !rule.rhs.vars().is_subset(&rule.lhs.vars());
    StepSpec {
        rule: st.rule_index + 1,
        pos: st.pos.as_slice().to_vec(),
        dir: StepDir::Forward,
        to: st.target.clone(),
        subst: extra_vars.then(|| st.subst.iter().map(|(x, t)| (x.clone(), t.clone())).collect()),
    }
}

fn specs(trs: &Trs, conv: &Conversion) -> Vec<StepSpec> {
    conv.steps.iter().map(|s| step_spec(trs, s)).collect()
}

/// Searches for a certificate: linear-rl for linear systems, otherwise the
/// configured mode for left-linear ones. `Ok(None)` when any search fails.
pub fn prove(trs: &Trs, cfg: &ProverConfig) -> Result<Option<Certificate>, RewriteError> {
    let mode = match (linearity(trs), cfg.mode) {
        (Linearity::Linear, _) => Mode::LinearRl,
        (Linearity::LeftLinear, JoinMode::Valley) => Mode::ValleyRl,
        (Linearity::LeftLinear, JoinMode::Conv) => Mode::ConvRl,
        (Linearity::Neither, _) => return Ok(None),
    };
    let relterm = if mode == Mode::LinearRl {
        RelTermEvidence::None
    } else {
        let (dup, rest) = split_duplicating(trs);
        if dup.is_empty() {
            RelTermEvidence::None
        } else {
            match search_interpretation(&dup, &rest, cfg.coeff_bound) {
                Some(ip) => RelTermEvidence::Interpretation(ip),
                None => return Ok(None),
            }
        }
    };

    let mut peaks = Vec::new();
    for cp in critical_peaks(trs).into_iter().filter(|cp| !cp.is_trivial()) {
        let joins = find_joins(trs, &cp, cfg.join_depth, cfg.join_cap, cfg.path_cap)?;
        if joins.is_empty() {
            return Ok(None);
        }
        peaks.push((cp, joins));
    }
    let Some(labels) = assign_labels(trs, &peaks, cfg.max_label) else {
        return Ok(None);
    };

    let mut entries = Vec::with_capacity(peaks.len());
    let mut longest = 0;
    for (cp, joins) in &peaks {
        let (l, r) = joins
            .iter()
            .find(|j| join_passes(&labels.0, cp, j))
            .expect("labels satisfy every peak");
        longest = longest.max(l.len()).max(r.len());
        let (left, right) = if mode == Mode::ValleyRl {
            (SideSpec::Seq(specs(trs, l)), SideSpec::Seq(specs(trs, r)))
        } else {
            let d = valley_to_diagram(&labels, &cp.local_peak(), l, r).expect("decreasing valley");
            let side = |s: &crate::labeling::DiagramSide| SideSpec::Conv {
                conv1: specs(trs, &s.conv1),
                step: s.step.as_ref().map(|st| step_spec(trs, st)),
                conv2: specs(trs, &s.conv2),
            };
            (side(&d.left), side(&d.right))
        };
        entries.push(PeakEntry {
            source: cp.peak_source.clone(),
            left,
            right,
        });
    }
    Ok(Some(Certificate {
        mode,
        labels,
        relterm,
        fan_bound: (mode == Mode::ConvRl).then_some(longest + 1),
        peaks: entries,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{check, parse_trs, Verdict};
    use crate::testutil::{dup_trs, ground_trs, t};

    fn peak_with(trs: &Trs, left: &str, right: &str) -> CriticalPeak {
        critical_peaks(trs)
            .into_iter()
            .find(|c| c.peak_left == t(left) && c.peak_right == t(right))
            .unwrap()
    }

    #[test]
    fn joins_of_the_ground_example() {
        let r = ground_trs();
        let cp = peak_with(&r, "b", "a");
        let joins = find_joins(&r, &cp, 1, DEFAULT_JOIN_CAP, DEFAULT_PATH_CAP).unwrap();
        assert!(joins.iter().any(|(l, rr)| l.len() == 1 && l.steps[0].rule_index == 2 && rr.is_empty()));

        let cp = peak_with(&r, "b", "d");
        let joins = find_joins(&r, &cp, 2, DEFAULT_JOIN_CAP, DEFAULT_PATH_CAP).unwrap();
        assert!(joins
            .iter()
            .any(|(l, rr)| l.steps.iter().map(|s| s.rule_index).collect::<Vec<_>>() == vec![2, 1] && rr.is_empty()));
        let lens: Vec<usize> = joins.iter().map(|(l, r)| l.len() + r.len()).collect();
        assert!(lens.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn trivial_peak_joins_immediately() {
        let r = ground_trs();
        let cp = critical_peaks(&r).into_iter().find(CriticalPeak::is_trivial).unwrap();
        let joins = find_joins(&r, &cp, 2, DEFAULT_JOIN_CAP, DEFAULT_PATH_CAP).unwrap();
        assert!(joins[0].0.is_empty() && joins[0].1.is_empty());
    }

    #[test]
    fn label_assignment_for_the_ground_example() {
        let r = ground_trs();
        let peaks: Vec<(CriticalPeak, Vec<Join>)> = critical_peaks(&r)
            .into_iter()
            .map(|cp| {
                let j = find_joins(&r, &cp, 2, DEFAULT_JOIN_CAP, DEFAULT_PATH_CAP).unwrap();
                (cp, j)
            })
            .collect();
        let labels = assign_labels(&r, &peaks, 1).unwrap();
        for (cp, joins) in peaks.iter().filter(|(c, _)| !c.is_trivial()) {
            assert!(joins.iter().any(|j| join_passes(&labels.0, cp, j)));
        }
    }

    #[test]
    fn unconstrained_rules_get_label_zero() {
        let r = parse_trs("(VAR x)(RULES f(x) -> x a -> b)").unwrap();
        assert_eq!(assign_labels(&r, &[], 3), Some(IndexMap::new(vec![0, 0])));
    }

    #[test]
    fn exhausted_label_search() {
        // b ← a → c is joined only by b → e → c, which needs labels below the peak's
        let r = parse_trs("(RULES a -> b a -> c b -> e e -> c)").unwrap();
        let peaks: Vec<(CriticalPeak, Vec<Join>)> = critical_peaks(&r)
            .into_iter()
            .filter(|c| !c.is_trivial())
            .map(|cp| {
                let j = find_joins(&r, &cp, 2, DEFAULT_JOIN_CAP, DEFAULT_PATH_CAP).unwrap();
                (cp, j)
            })
            .collect();
        assert_eq!(assign_labels(&r, &peaks, 1), Some(IndexMap::new(vec![0, 1, 0, 0])));
        assert_eq!(assign_labels(&r, &peaks, 0), None);
    }

    #[test]
    fn ground_example_round_trip() {
        let r = ground_trs();
        let cert = prove(&r, &ProverConfig::default()).unwrap().unwrap();
        assert_eq!(cert.mode, Mode::LinearRl);
        assert_eq!(check(&r, &cert), Verdict::Accept);
    }

    #[test]
    fn counterexample_has_no_certificate() {
        for mode in [JoinMode::Valley, JoinMode::Conv] {
            let cfg = ProverConfig {
                mode,
                join_depth: 4,
                ..ProverConfig::default()
            };
            assert_eq!(prove(&dup_trs(), &cfg).unwrap(), None);
        }
    }

    #[test]
    fn peak_free_system_gets_a_trivial_certificate() {
        let r = parse_trs("(VAR x)(RULES f(x) -> g(x,x) a -> b)").unwrap();
        for mode in [JoinMode::Valley, JoinMode::Conv] {
            let cfg = ProverConfig { mode, ..ProverConfig::default() };
            let cert = prove(&r, &cfg).unwrap().unwrap();
            assert!(cert.peaks.is_empty());
            assert_eq!(check(&r, &cert), Verdict::Accept);
        }
    }

    #[test]
    fn proving_is_deterministic() {
        let r = ground_trs();
        let a = prove(&r, &ProverConfig::default()).unwrap();
        let b = prove(&r, &ProverConfig::default()).unwrap();
        assert_eq!(a, b);
    }
}
