//! Finite labeled abstract rewrite systems, label orders, and extended local
//! decreasingness checked by bounded witness search.

mod format;
mod orders;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

pub use format::{parse_ars, write_ars, ArsParseError};
pub use orders::{LabelOrders, OrderError, Relation};

/// Default per-segment length bound for [`check_eld`].
pub const DEFAULT_MAXLEN: usize = 4;

/// Objects and labels are identified by name; edges are `(source, label, target)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FiniteArs {
    objects: BTreeSet<String>,
    labels: BTreeSet<String>,
    edges: BTreeSet<(String, String, String)>,
}

impl FiniteArs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, o: &str) {
        self.objects.insert(o.to_string());
    }

    pub fn add_label(&mut self, l: &str) {
        self.labels.insert(l.to_string());
    }

    /// Adds the edge and any missing endpoint or label.
    pub fn add_edge(&mut self, source: &str, label: &str, target: &str) {
        self.add_object(source);
        self.add_object(target);
        self.add_label(label);
        self.edges
            .insert((source.to_string(), label.to_string(), target.to_string()));
    }

    pub fn from_edges<'a>(edges: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>) -> Self {
        let mut a = FiniteArs::new();
        for (s, l, t) in edges {
            a.add_edge(s, l, t);
        }
        a
    }

    pub fn objects(&self) -> &BTreeSet<String> {
        &self.objects
    }

    pub fn labels(&self) -> &BTreeSet<String> {
        &self.labels
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.edges
            .iter()
            .map(|(s, l, t)| (s.as_str(), l.as_str(), t.as_str()))
    }

    pub fn has_edge(&self, source: &str, label: &str, target: &str) -> bool {
        self.edges
            .contains(&(source.to_string(), label.to_string(), target.to_string()))
    }

    /// The relation `→_label` as a set of pairs.
    pub fn relation(&self, label: &str) -> BTreeSet<(String, String)> {
        self.edges
            .iter()
            .filter(|(_, l, _)| l == label)
            .map(|(s, _, t)| (s.clone(), t.clone()))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Edge `(s, α, t)` is present iff `(s, β, t)` is an input edge for some `β ⩽ α`.
pub fn coarsen(ars: &FiniteArs, ord: &LabelOrders) -> FiniteArs {
    let mut out = FiniteArs {
        objects: ars.objects.clone(),
        labels: ars.labels.clone(),
        edges: BTreeSet::new(),
    };
    for (s, beta, t) in ars.edges() {
        for alpha in &ars.labels {
            if alpha == beta || ord.ge(alpha, beta) {
                out.add_edge(s, alpha, t);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArsPeak {
    pub source: String,
    pub left_label: String,
    pub left: String,
    pub right_label: String,
    pub right: String,
}

impl fmt::Display for ArsPeak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ←{} {} →{} {}",
            self.left, self.left_label, self.source, self.right_label, self.right
        )
    }
}

/// One step of a witness conversion, read from `from` to `to`. `forward`
/// means the edge is `(from, label, to)`, otherwise `(to, label, from)`.
/// `segment` is 1..=5 in the decreasing-diagram pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    pub from: String,
    pub label: String,
    pub to: String,
    pub forward: bool,
    pub segment: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeakOutcome {
    pub peak: ArsPeak,
    /// `None` when no witness exists within the segment bound.
    pub witness: Option<Vec<WitnessStep>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EldReport {
    pub maxlen: usize,
    pub peaks: Vec<PeakOutcome>,
}

impl EldReport {
    pub fn holds(&self) -> bool {
        self.peaks.iter().all(|p| p.witness.is_some())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ArsPeak> {
        self.peaks
            .iter()
            .filter(|p| p.witness.is_none())
            .map(|p| &p.peak)
    }
}

/// Index-based view used by the searches.
struct Graph {
    names: Vec<String>,
    labels: Vec<String>,
    out: Vec<Vec<(usize, usize)>>,
    inc: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    fn new(ars: &FiniteArs) -> Self {
        let names: Vec<String> = ars.objects.iter().cloned().collect();
        let labels: Vec<String> = ars.labels.iter().cloned().collect();
        let oi: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let li: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut out = vec![Vec::new(); names.len()];
        let mut inc = vec![Vec::new(); names.len()];
        for (s, l, t) in ars.edges() {
            let (s, l, t) = (oi[s], li[l], oi[t]);
            out[s].push((l, t));
            inc[t].push((l, s));
        }
        Graph { names, labels, out, inc }
    }
}

/// Parent pointer: previous object, label, direction, segment.
type Parent = Option<(usize, usize, bool, u8)>;

struct Layer {
    parent: Vec<Parent>,
    reached: Vec<bool>,
}

fn star_segment(g: &Graph, start: &Layer, allowed: &[bool], maxlen: usize, seg: u8) -> Layer {
    let n = g.names.len();
    let mut parent = vec![None; n];
    let mut reached = start.reached.clone();
    let mut queue: VecDeque<(usize, usize)> = (0..n).filter(|&i| reached[i]).map(|i| (i, 0)).collect();
    while let Some((x, d)) = queue.pop_front() {
        if d == maxlen {
            continue;
        }
        let fw = g.out[x].iter().map(|&(l, y)| (l, y, true));
        let bw = g.inc[x].iter().map(|&(l, y)| (l, y, false));
        for (l, y, forward) in fw.chain(bw) {
            if allowed[l] && !reached[y] {
                reached[y] = true;
                parent[y] = Some((x, l, forward, seg));
                queue.push_back((y, d + 1));
            }
        }
    }
    Layer { parent, reached }
}

fn optional_segment(g: &Graph, start: &Layer, allowed: &[bool], forward: bool, seg: u8) -> Layer {
    let n = g.names.len();
    let mut parent = vec![None; n];
    let mut reached = start.reached.clone();
    for x in (0..n).filter(|&i| start.reached[i]) {
        let adj = if forward { &g.out[x] } else { &g.inc[x] };
        for &(l, y) in adj {
            if allowed[l] && !reached[y] {
                reached[y] = true;
                parent[y] = Some((x, l, forward, seg));
            }
        }
    }
    Layer { parent, reached }
}

fn search_witness(
    g: &Graph,
    ord: &LabelOrders,
    (b, alpha, beta, c): (usize, usize, usize, usize),
    maxlen: usize,
) -> Option<Vec<WitnessStep>> {
    let (a_name, b_name) = (&g.labels[alpha], &g.labels[beta]);
    let mask = |pred: &dyn Fn(&str) -> bool| g.labels.iter().map(|l| pred(l)).collect::<Vec<bool>>();
    let lt_alpha = mask(&|l| ord.gt(a_name, l));
    let lt_beta = mask(&|l| ord.gt(b_name, l));
    let lt_both = mask(&|l| ord.gt(a_name, l) || ord.gt(b_name, l));
    let le_alpha = mask(&|l| ord.ge(a_name, l));
    let le_beta = mask(&|l| ord.ge(b_name, l));

    let mut init = Layer {
        parent: vec![None; g.names.len()],
        reached: vec![false; g.names.len()],
    };
    init.reached[b] = true;
    let l1 = star_segment(g, &init, &lt_alpha, maxlen, 1);
    let l2 = optional_segment(g, &l1, &le_beta, true, 2);
    let l3 = star_segment(g, &l2, &lt_both, maxlen, 3);
    let l4 = optional_segment(g, &l3, &le_alpha, false, 4);
    let l5 = star_segment(g, &l4, &lt_beta, maxlen, 5);
    if !l5.reached[c] {
        return None;
    }
    let layers = [init, l1, l2, l3, l4, l5];
    let mut steps = Vec::new();
    let (mut cur, mut k) = (c, 5);
    while k > 0 {
        match layers[k].parent[cur] {
            Some((prev, l, forward, seg)) => {
                steps.push(WitnessStep {
                    from: g.names[prev].clone(),
                    label: g.labels[l].clone(),
                    to: g.names[cur].clone(),
                    forward,
                    segment: seg,
                });
                cur = prev;
            }
            None => k -= 1,
        }
    }
    steps.reverse();
    Some(steps)
}

/// Checks every peak `b ←_α a →_β c` (including two copies of the same edge)
/// for a conversion `↔*_{<α} · →⁼_{⩽β} · ↔*_{<αβ} · ←⁼_{⩽α} · ↔*_{<β}` with
/// each starred segment of length at most `maxlen`.
pub fn check_eld(ars: &FiniteArs, ord: &LabelOrders, maxlen: usize) -> EldReport {
    let g = Graph::new(ars);
    let mut peaks = Vec::new();
    for a in 0..g.names.len() {
        for &(alpha, b) in &g.out[a] {
            for &(beta, c) in &g.out[a] {
                let witness = search_witness(&g, ord, (b, alpha, beta, c), maxlen);
                peaks.push(PeakOutcome {
                    peak: ArsPeak {
                        source: g.names[a].clone(),
                        left_label: g.labels[alpha].clone(),
                        left: g.names[b].clone(),
                        right_label: g.labels[beta].clone(),
                        right: g.names[c].clone(),
                    },
                    witness,
                });
            }
        }
    }
    EldReport { maxlen, peaks }
}

fn reflexive_transitive_closure(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.names.len();
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &(_, y) in &g.out[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen
        })
        .collect()
}

/// Decides confluence of the finite ARS by closure computation.
pub fn confluent_bruteforce(ars: &FiniteArs) -> bool {
    let g = Graph::new(ars);
    let reach = reflexive_transitive_closure(&g);
    let n = g.names.len();
    (0..n).all(|s| {
        let succ: Vec<usize> = (0..n).filter(|&x| reach[s][x]).collect();
        succ.iter().all(|&t| {
            succ.iter()
                .all(|&u| (0..n).any(|v| reach[t][v] && reach[u][v]))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn layered() -> (FiniteArs, LabelOrders) {
        let ars = FiniteArs::from_edges([
            ("a", "1", "b"),
            ("c", "1", "d"),
            ("b", "1.5", "d"),
            ("a", "2", "c"),
        ]);
        let ord = LabelOrders::closed(
            ["1", "1.5", "2"],
            [("2", "1")],
            [("2", "1.5"), ("1.5", "1")],
        )
        .unwrap();
        (ars, ord)
    }

    fn pairs(v: &[(&str, &str)]) -> BTreeSet<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn coarsening_of_the_rational_example() {
        let (ars, ord) = layered();
        let co = coarsen(&ars, &ord);
        assert_eq!(co.relation("2"), pairs(&[("a", "b"), ("c", "d"), ("a", "c"), ("b", "d")]));
        assert_eq!(co.relation("1.5"), pairs(&[("b", "d"), ("a", "b"), ("c", "d")]));
        assert_eq!(co.relation("1"), pairs(&[("a", "b"), ("c", "d")]));
        assert_eq!(coarsen(&ars, &ord.with_identity_weak()), ars);
    }

    #[test]
    fn rational_example_is_extended_locally_decreasing() {
        let (ars, ord) = layered();
        let rep = check_eld(&ars, &ord, DEFAULT_MAXLEN);
        assert!(rep.holds());
        let peak = rep
            .peaks
            .iter()
            .find(|p| p.peak.left == "b" && p.peak.right == "c")
            .unwrap();
        let w = peak.witness.as_ref().unwrap();
        let shape: Vec<(&str, &str, bool, u8)> =
            w.iter().map(|s| (s.from.as_str(), s.label.as_str(), s.forward, s.segment)).collect();
        // d ←₁ c also fits the middle segment since 1 < 2
        assert_eq!(shape, vec![("b", "1.5", true, 2), ("d", "1", false, 3)]);

        let plain = ord.with_identity_weak();
        assert!(!check_eld(&ars, &plain, DEFAULT_MAXLEN).holds());
        assert!(check_eld(&coarsen(&ars, &ord), &plain, DEFAULT_MAXLEN).holds());
        assert!(confluent_bruteforce(&ars));
    }

    #[test]
    fn trivial_cases() {
        let one = FiniteArs::from_edges([("a", "1", "b")]);
        let ord = LabelOrders::closed(["1"], [], []).unwrap();
        assert!(check_eld(&one, &ord, 0).holds());
        assert!(confluent_bruteforce(&FiniteArs::new()));
        let fork = FiniteArs::from_edges([("a", "1", "b"), ("a", "1", "c")]);
        assert!(!confluent_bruteforce(&fork));
        let rep = check_eld(&fork, &ord, DEFAULT_MAXLEN);
        assert_eq!(rep.failures().count(), 2);
    }

    #[test]
    fn witness_segments_are_bounded() {
        // b and c are joined only through a long chain of small labels
        let mut ars = FiniteArs::from_edges([("a", "2", "b"), ("a", "2", "c")]);
        let chain: Vec<String> = std::iter::once("b".to_string())
            .chain((1..10).map(|i| format!("x{i}")))
            .chain(std::iter::once("c".to_string()))
            .collect();
        for w in chain.windows(2) {
            ars.add_edge(&w[0], "1", &w[1]);
        }
        let ord = LabelOrders::closed(["1", "2"], [("2", "1")], []).unwrap();
        assert!(!check_eld(&ars, &ord, 3).holds());
        assert!(check_eld(&ars, &ord, 4).holds());
    }
}
