//! Rule labeling, decreasingness of local diagrams, the greedy valley split
//! and the fan property.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::peaks::LocalPeak;
use crate::rewrite::{validate_conversion, Conversion, Direction, Reachability, RewriteError, Step};
use crate::term::{Term, Trs};

/// Label per rule, indexed by 0-based rule index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexMap(pub Vec<u32>);

impl IndexMap {
    pub fn new(labels: Vec<u32>) -> Self {
        IndexMap(labels)
    }

    pub fn get(&self, rule_index: usize) -> Option<u32> {
        self.0.get(rule_index).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_total_on(&self, trs: &Trs) -> bool {
        self.0.len() == trs.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule {index} has no label ({len} labels given)")]
pub struct UnknownRule {
    pub index: usize,
    pub len: usize,
}

pub fn label_step(labels: &IndexMap, st: &Step) -> Result<u32, UnknownRule> {
    labels.get(st.rule_index).ok_or(UnknownRule {
        index: st.rule_index,
        len: labels.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Conv1,
    Step,
    Conv2,
}

/// One side of a local diagram: `conv1 · step⁼ · conv2`, read from the
/// peak's target towards the common end.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagramSide {
    pub conv1: Conversion,
    pub step: Option<Step>,
    pub conv2: Conversion,
}

impl DiagramSide {
    pub fn empty(start: Term) -> Self {
        DiagramSide {
            conv1: Conversion::empty(start.clone()),
            step: None,
            conv2: Conversion::empty(start),
        }
    }

    pub fn start(&self) -> &Term {
        &self.conv1.start
    }

    pub fn end(&self) -> &Term {
        self.conv2.end()
    }

    pub fn len(&self) -> usize {
        self.conv1.len() + usize::from(self.step.is_some()) + self.conv2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn steps(&self) -> impl Iterator<Item = &Step> {
        self.conv1
            .steps
            .iter()
            .chain(self.step.iter())
            .chain(self.conv2.steps.iter())
    }

    /// Every term on this side, in order, starting with the peak target.
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        std::iter::once(self.start()).chain(self.steps().map(|s| &s.target))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    pub peak: LocalPeak,
    pub left: DiagramSide,
    pub right: DiagramSide,
}

impl Diagram {
    pub fn mirrored(&self) -> Diagram {
        Diagram {
            peak: self.peak.mirrored(),
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("malformed diagram: {0}")]
    Structural(String),
    #[error(transparent)]
    UnknownRule(#[from] UnknownRule),
    #[error("label {label} of {side:?} {component:?} violates decreasingness for peak labels ({alpha}, {beta})")]
    Label {
        side: Side,
        component: Component,
        label: u32,
        alpha: u32,
        beta: u32,
    },
}

fn structural(msg: impl Into<String>) -> DiagramError {
    DiagramError::Structural(msg.into())
}

fn check_side(side: &DiagramSide, start: &Term, which: Side) -> Result<(), DiagramError> {
    if side.start() != start {
        return Err(structural(format!("{which:?} side does not start at {start}")));
    }
    if !validate_conversion(&side.conv1) {
        return Err(structural(format!("{which:?} first conversion is invalid")));
    }
    let mid = match &side.step {
        Some(st) => {
            if st.dir != Direction::Forward {
                return Err(structural(format!("{which:?} middle step must be forward")));
            }
            if &st.source != side.conv1.end() || !st.is_valid() {
                return Err(structural(format!("{which:?} middle step is invalid")));
            }
            &st.target
        }
        None => side.conv1.end(),
    };
    if &side.conv2.start != mid || !validate_conversion(&side.conv2) {
        return Err(structural(format!("{which:?} second conversion is invalid")));
    }
    Ok(())
}

pub fn check_diagram_structure(d: &Diagram) -> Result<(), DiagramError> {
    LocalPeak::new(d.peak.left.clone(), d.peak.right.clone()).map_err(|e| structural(e.to_string()))?;
    check_side(&d.left, d.peak.left_target(), Side::Left)?;
    check_side(&d.right, d.peak.right_target(), Side::Right)?;
    if d.left.end() != d.right.end() {
        return Err(structural(format!(
            "sides end in different terms {} and {}",
            d.left.end(),
            d.right.end()
        )));
    }
    Ok(())
}

fn check_side_labels(
    labels: &IndexMap,
    side: &DiagramSide,
    which: Side,
    (alpha, beta): (u32, u32),
    (own, other): (u32, u32),
) -> Result<(), DiagramError> {
    let fail = |component, label| DiagramError::Label {
        side: which,
        component,
        label,
        alpha,
        beta,
    };
    for st in &side.conv1.steps {
        let l = label_step(labels, st)?;
        if l >= own {
            return Err(fail(Component::Conv1, l));
        }
    }
    if let Some(st) = &side.step {
        let l = label_step(labels, st)?;
        if l > other {
            return Err(fail(Component::Step, l));
        }
    }
    for st in &side.conv2.steps {
        let l = label_step(labels, st)?;
        if l >= alpha.max(beta) {
            return Err(fail(Component::Conv2, l));
        }
    }
    Ok(())
}

/// Structure first, then labels: with `α`, `β` the labels of the left and
/// right peak steps, the left side must be `<α · ⩽β · <αβ` and the right side
/// `<β · ⩽α · <αβ`.
pub fn check_eld_diagram(labels: &IndexMap, d: &Diagram) -> Result<(), DiagramError> {
    check_diagram_structure(d)?;
    let alpha = label_step(labels, &d.peak.left)?;
    let beta = label_step(labels, &d.peak.right)?;
    check_side_labels(labels, &d.left, Side::Left, (alpha, beta), (alpha, beta))?;
    check_side_labels(labels, &d.right, Side::Right, (alpha, beta), (beta, alpha))?;
    Ok(())
}

/// Splits `σ = σ₁·σ₂·σ₃` with `σ₁ < α`, `σ₂ ⩽ β` of length at most one and
/// `σ₃ < max(α, β)`, taking the longest possible `σ₁`.
pub fn greedy_split(alpha: u32, beta: u32, seq: &[u32]) -> Option<(&[u32], &[u32], &[u32])> {
    let k = seq.iter().position(|&l| l >= alpha).unwrap_or(seq.len());
    let m = if seq.get(k).is_some_and(|&l| l <= beta) { k + 1 } else { k };
    let top = alpha.max(beta);
    seq[m..]
        .iter()
        .all(|&l| l < top)
        .then(|| (&seq[..k], &seq[k..m], &seq[m..]))
}

fn split_conversion(conv: &Conversion, k: usize, m: usize) -> DiagramSide {
    let steps = &conv.steps;
    let conv1 = Conversion::new(conv.start.clone(), steps[..k].to_vec());
    let step = (m > k).then(|| steps[k].clone());
    let mid = step.as_ref().map_or_else(|| conv1.end().clone(), |s| s.target.clone());
    DiagramSide {
        conv1,
        step,
        conv2: Conversion::new(mid, steps[m..].to_vec()),
    }
}

/// Decomposes a valley `t →* v *← u` into a diagram by splitting both joining
/// sequences greedily.
pub fn valley_to_diagram(
    labels: &IndexMap,
    peak: &LocalPeak,
    left: &Conversion,
    right: &Conversion,
) -> Result<Diagram, DiagramError> {
    for (c, side) in [(left, Side::Left), (right, Side::Right)] {
        if !c.is_forward() || !validate_conversion(c) {
            return Err(structural(format!("{side:?} joining sequence is not a valid rewrite sequence")));
        }
    }
    let alpha = label_step(labels, &peak.left)?;
    let beta = label_step(labels, &peak.right)?;
    let mut sides = Vec::with_capacity(2);
    for (conv, (own, other), which) in [(left, (alpha, beta), Side::Left), (right, (beta, alpha), Side::Right)] {
        let seq = conv
            .steps
            .iter()
            .map(|s| label_step(labels, s))
            .collect::<Result<Vec<_>, _>>()?;
        let Some((s1, s2, _)) = greedy_split(own, other, &seq) else {
            let top = own.max(other);
            let k = seq.iter().position(|&l| l >= own).unwrap_or(seq.len());
            let m = if seq.get(k).is_some_and(|&l| l <= other) { k + 1 } else { k };
            let bad = seq[m..].iter().copied().find(|&l| l >= top).unwrap_or(top);
            return Err(DiagramError::Label {
                side: which,
                component: Component::Conv2,
                label: bad,
                alpha,
                beta,
            });
        };
        sides.push(split_conversion(conv, s1.len(), s1.len() + s2.len()));
    }
    let right = sides.pop().expect("two sides");
    let left = sides.pop().expect("two sides");
    let d = Diagram {
        peak: peak.clone(),
        left,
        right,
    };
    check_diagram_structure(&d)?;
    Ok(d)
}

/// Terms of the diagram's joining conversion that are not reachable from
/// `source` in at most `bound` steps, in order of appearance (left side
/// first). Empty means the fan property holds.
pub fn check_fan(
    trs: &Trs,
    source: &Term,
    d: &Diagram,
    bound: usize,
    reach: Reachability,
) -> Result<Vec<Term>, RewriteError> {
    let reachable = reach.reachable(trs, source, bound)?;
    let mut seen = HashSet::new();
    Ok(d.left
        .terms()
        .chain(d.right.terms())
        .filter(|t| seen.insert(*t))
        .filter(|t| !reachable.contains(*t))
        .cloned()
        .collect())
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "peak {}", self.peak)?;
        for (name, side) in [("left", &self.left), ("right", &self.right)] {
            write!(f, "  {name}:")?;
            for st in side.steps() {
                write!(f, " [{st}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{derive_step, step_at};
    use crate::testutil::{dup_trs, ground_trs, p, t};

    fn fw(trs: &Trs, s: &str, rule: usize, pos: &[usize]) -> Step {
        step_at(&t(s), rule, trs.rule(rule).unwrap(), &p(pos)).unwrap().unwrap()
    }

    fn bw(trs: &Trs, from: &str, to: &str, rule: usize, pos: &[usize]) -> Step {
        derive_step(&t(from), &t(to), rule, trs.rule(rule).unwrap(), &p(pos), Direction::Backward).unwrap()
    }

    fn ground_labels() -> IndexMap {
        IndexMap::new(vec![1, 1, 0, 0, 0])
    }

    fn dup_labels() -> IndexMap {
        IndexMap::new(vec![2, 1, 1, 1, 0])
    }

    /// b ←₁ a →₁ d joined by b ←₀ c →₀ a →₁ d.
    fn fig_a() -> Diagram {
        let r = ground_trs();
        let peak = LocalPeak::new(fw(&r, "a", 0, &[]), fw(&r, "a", 1, &[])).unwrap();
        Diagram {
            peak,
            left: DiagramSide {
                conv1: Conversion::new(t("b"), vec![bw(&r, "b", "c", 4, &[]), fw(&r, "c", 3, &[])]),
                step: Some(fw(&r, "a", 1, &[])),
                conv2: Conversion::empty(t("d")),
            },
            right: DiagramSide::empty(t("d")),
        }
    }

    /// b ←₀ c →₀ a joined by b →₀ a.
    fn fig_b() -> Diagram {
        let r = ground_trs();
        let peak = LocalPeak::new(fw(&r, "c", 4, &[]), fw(&r, "c", 3, &[])).unwrap();
        Diagram {
            peak,
            left: DiagramSide {
                conv1: Conversion::empty(t("b")),
                step: Some(fw(&r, "b", 2, &[])),
                conv2: Conversion::empty(t("a")),
            },
            right: DiagramSide::empty(t("a")),
        }
    }

    /// f(b,b) ← f(a,b) → f(a,a) joined by f(b,b) ←₀ g(b) and f(a,a) ←₀ g(a) →₂ g(b).
    fn counterexample() -> Diagram {
        let r = dup_trs();
        let peak = LocalPeak::new(fw(&r, "f(a,b)", 0, &[1]), fw(&r, "f(a,b)", 1, &[])).unwrap();
        Diagram {
            peak,
            left: DiagramSide {
                conv1: Conversion::new(t("f(b,b)"), vec![bw(&r, "f(b,b)", "g(b)", 4, &[])]),
                step: None,
                conv2: Conversion::empty(t("g(b)")),
            },
            right: DiagramSide {
                conv1: Conversion::new(t("f(a,a)"), vec![bw(&r, "f(a,a)", "g(a)", 4, &[])]),
                step: Some(fw(&r, "g(a)", 0, &[1])),
                conv2: Conversion::empty(t("g(b)")),
            },
        }
    }

    #[test]
    fn step_labels() {
        let r = ground_trs();
        let st = fw(&r, "a", 0, &[]);
        assert_eq!(label_step(&ground_labels(), &st), Ok(1));
        assert_eq!(label_step(&ground_labels(), &st.reversed()), Ok(1));
        let g = fw(&dup_trs(), "g(x)", 4, &[]);
        assert_eq!(label_step(&dup_labels(), &g), Ok(0));
        assert_eq!(
            label_step(&IndexMap::new(vec![0]), &g),
            Err(UnknownRule { index: 4, len: 1 })
        );
    }

    #[test]
    fn ground_example_diagrams_are_decreasing() {
        let labels = ground_labels();
        assert_eq!(check_eld_diagram(&labels, &fig_a()), Ok(()));
        assert_eq!(check_eld_diagram(&labels, &fig_b()), Ok(()));
        assert_eq!(check_eld_diagram(&labels, &fig_a().mirrored()), Ok(()));
        assert_eq!(check_eld_diagram(&labels, &fig_b().mirrored()), Ok(()));
    }

    #[test]
    fn relabeled_join_step_fails() {
        // b → a labelled 1 exceeds β = 0
        let raised = IndexMap::new(vec![1, 1, 1, 0, 0]);
        assert!(matches!(
            check_eld_diagram(&raised, &fig_b()),
            Err(DiagramError::Label { side: Side::Left, component: Component::Step, label: 1, .. })
        ));
        // c → b labelled 1 is no longer below α = 1
        let raised = IndexMap::new(vec![1, 1, 0, 0, 1]);
        assert!(matches!(
            check_eld_diagram(&raised, &fig_a()),
            Err(DiagramError::Label { side: Side::Left, component: Component::Conv1, .. })
        ));
    }

    #[test]
    fn structural_errors_are_separate() {
        let mut d = fig_b();
        d.right = DiagramSide::empty(t("c"));
        assert!(matches!(check_eld_diagram(&ground_labels(), &d), Err(DiagramError::Structural(_))));
        let mut d = fig_b();
        d.left.step = d.left.step.map(|s| s.reversed());
        assert!(matches!(check_eld_diagram(&ground_labels(), &d), Err(DiagramError::Structural(_))));
    }

    #[test]
    fn counterexample_diagram_is_decreasing_but_lacks_the_fan_property() {
        let d = counterexample();
        assert_eq!(check_eld_diagram(&dup_labels(), &d), Ok(()));
        let bad = check_fan(&dup_trs(), &t("f(a,b)"), &d, 10, Reachability::default()).unwrap();
        assert_eq!(bad, vec![t("g(b)"), t("g(a)")]);
    }

    #[test]
    fn fan_property_of_ground_diagrams() {
        let r = ground_trs();
        // a →* c never holds
        for bound in [1, 5, 50] {
            let bad = check_fan(&r, &t("a"), &fig_a(), bound, Reachability::default()).unwrap();
            assert!(bad.contains(&t("c")));
        }
        assert!(check_fan(&r, &t("c"), &fig_b(), 2, Reachability::default()).unwrap().is_empty());
        let tight = check_fan(&r, &t("c"), &fig_b(), 0, Reachability::default()).unwrap();
        assert_eq!(tight, vec![t("b"), t("a")]);
    }

    #[test]
    fn greedy_split_examples() {
        assert_eq!(
            greedy_split(1, 2, &[0, 2, 0, 1]),
            Some((&[0][..], &[2][..], &[0, 1][..]))
        );
        assert_eq!(greedy_split(1, 1, &[1, 1]), None);
        assert_eq!(greedy_split(3, 0, &[]), Some((&[][..], &[][..], &[][..])));
    }

    #[test]
    fn valley_decomposition() {
        let r = ground_trs();
        let labels = ground_labels();
        let peak = LocalPeak::new(fw(&r, "c", 4, &[]), fw(&r, "c", 3, &[])).unwrap();
        let left = Conversion::new(t("b"), vec![fw(&r, "b", 2, &[])]);
        let d = valley_to_diagram(&labels, &peak, &left, &Conversion::empty(t("a"))).unwrap();
        assert_eq!(d, fig_b());
        let far = Conversion::new(t("b"), vec![fw(&r, "b", 2, &[]), fw(&r, "a", 0, &[]), fw(&r, "b", 2, &[])]);
        assert!(matches!(
            valley_to_diagram(&labels, &peak, &far, &Conversion::empty(t("a"))),
            Err(DiagramError::Label { label: 1, .. })
        ));
    }

    #[test]
    fn valley_diagrams_have_the_fan_property() {
        let r = dup_trs();
        let peak = LocalPeak::new(fw(&r, "f(a,a)", 0, &[1]), fw(&r, "f(a,a)", 3, &[])).unwrap();
        let left = Conversion::new(t("f(b,a)"), vec![fw(&r, "f(b,a)", 2, &[]), fw(&r, "f(a,a)", 3, &[])]);
        let d = valley_to_diagram(&dup_labels(), &peak, &left, &Conversion::empty(t("c"))).unwrap();
        assert!(check_fan(&r, &t("f(a,a)"), &d, 3, Reachability::default()).unwrap().is_empty());
        assert_eq!(d.right.start(), &t("c"));
    }
}
