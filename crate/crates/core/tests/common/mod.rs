#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rlcert_core::ars::{FiniteArs, LabelOrders};
use rlcert_core::certificate::parse_trs;
use rlcert_core::rewrite::RedexPattern;
use rlcert_core::term::{Name, Position, Rule, Substitution, Term, Trs};

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn fixture_trs(name: &str) -> Trs {
    parse_trs(&fixture(name)).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const FUNS: [(&str, usize); 5] = [("a", 0), ("b", 0), ("g", 1), ("f", 2), ("h", 2)];

pub fn var(x: &str) -> Term {
    Term::var(x)
}

/// Random term of at most `depth` over a fixed small signature and `vars`.
pub fn random_term(rng: &mut impl Rng, depth: usize, vars: &[&str]) -> Term {
    if !vars.is_empty() && (depth == 0 || rng.gen_bool(0.2)) {
        return var(vars.choose(rng).unwrap());
    }
    let choices: Vec<&(&str, usize)> = FUNS.iter().filter(|(_, n)| depth > 0 || *n == 0).collect();
    let &&(f, n) = choices.choose(rng).unwrap();
    Term::fun(f, (0..n).map(|_| random_term(rng, depth.saturating_sub(1), vars)).collect())
}

/// Random linear term; variables are drawn fresh as `x1, x2, ...`.
pub fn random_linear_term(rng: &mut impl Rng, depth: usize, next_var: &mut usize) -> Term {
    if depth == 0 || rng.gen_bool(0.25) {
        if rng.gen_bool(0.6) {
            *next_var += 1;
            return var(&format!("x{next_var}"));
        }
        return Term::constant(if rng.gen_bool(0.5) { "a" } else { "b" });
    }
    let &(f, n) = FUNS[2..].choose(rng).unwrap();
    Term::fun(f, (0..n).map(|_| random_linear_term(rng, depth - 1, next_var)).collect())
}

fn non_variable(rng: &mut impl Rng, depth: usize, next_var: &mut usize) -> Term {
    loop {
        let t = random_linear_term(rng, depth, next_var);
        if !t.is_var() {
            return t;
        }
    }
}

fn rhs_over(rng: &mut impl Rng, vars: &[Name], depth: usize, linear: bool) -> Term {
    let mut pool: Vec<Name> = vars.to_vec();
    pool.shuffle(rng);
    fn build(rng: &mut impl Rng, pool: &mut Vec<Name>, all: &[Name], depth: usize, linear: bool) -> Term {
        let leaf = depth == 0 || rng.gen_bool(0.4);
        if leaf {
            let can_var = if linear { !pool.is_empty() } else { !all.is_empty() };
            if can_var && rng.gen_bool(0.7) {
                let x = if linear { pool.pop().unwrap() } else { all.choose(rng).unwrap().clone() };
                return Term::Var(x);
            }
            return Term::constant(if rng.gen_bool(0.5) { "a" } else { "b" });
        }
        let &(f, n) = FUNS[2..].choose(rng).unwrap();
        Term::fun(f, (0..n).map(|_| build(rng, pool, all, depth - 1, linear)).collect())
    }
    build(rng, &mut pool, vars, depth, linear)
}

/// Random left-linear system with `1..=max_rules` rules over the fixed signature.
/// Right-hand sides are linear as well when `linear` is set.
pub fn random_trs(rng: &mut impl Rng, max_rules: usize, linear: bool) -> Trs {
    let n = rng.gen_range(1..=max_rules);
    let rules = (0..n)
        .map(|_| {
            let mut k = 0;
            let lhs = non_variable(rng, 2, &mut k);
            let vars = lhs.vars_ordered();
            let rhs = rhs_over(rng, &vars, 2, linear);
            Rule::new(lhs, rhs)
        })
        .collect();
    Trs::new(rules).expect("fixed signature has no arity clashes")
}

/// Random `(term, patterns)`: a random context with redexes planted at
/// pairwise parallel positions.
pub fn random_parallel_instance(rng: &mut impl Rng, trs: &Trs) -> (Term, Vec<RedexPattern>) {
    let mut s = random_term(rng, 3, &["y", "z"]);
    let mut chosen: Vec<Position> = Vec::new();
    let positions: Vec<Position> = s.positions().into_iter().map(|(p, _)| p).collect();
    for p in positions {
        if rng.gen_bool(0.35) && chosen.iter().all(|q| q.is_parallel_to(&p)) {
            chosen.push(p);
        }
    }
    let mut patterns = Vec::new();
    for p in chosen {
        let i = rng.gen_range(0..trs.len());
        let rule = trs.rule(i).unwrap().clone();
        let subst: Substitution = rule
            .vars()
            .into_iter()
            .map(|x| (x, random_term(rng, 1, &["y", "z"])))
            .collect();
        s = s.replace_at(&p, rule.lhs.apply(&subst)).unwrap();
        patterns.push(RedexPattern {
            pos: p,
            rule_index: i,
            rule,
            subst,
        });
    }
    (s, patterns)
}

/// Random ARS over at most 6 objects and 4 labels with random compatible orders.
pub fn random_ars(rng: &mut impl Rng) -> (FiniteArs, LabelOrders) {
    let n_obj = rng.gen_range(1..=6);
    let n_lab = rng.gen_range(1..=4);
    let objects: Vec<String> = (0..n_obj).map(|i| format!("o{i}")).collect();
    let labels: Vec<String> = (0..n_lab).map(|i| format!("l{i}")).collect();
    let density = rng.gen_range(0.05..0.3);
    let mut ars = FiniteArs::new();
    for o in &objects {
        ars.add_object(o);
    }
    for l in &labels {
        ars.add_label(l);
    }
    for s in &objects {
        for l in &labels {
            for t in &objects {
                if s != t && rng.gen_bool(density) {
                    ars.add_edge(s, l, t);
                }
            }
        }
    }
    // ranks: strictly greater when the rank gap is at least `gap`, weakly when not smaller
    let ranks: Vec<u32> = (0..n_lab).map(|_| rng.gen_range(0..4)).collect();
    let gap = rng.gen_range(1..=2);
    let weak_kind = rng.gen_range(0..3);
    let mut strict = Vec::new();
    let mut weak = Vec::new();
    for (i, a) in labels.iter().enumerate() {
        for (j, b) in labels.iter().enumerate() {
            if ranks[i] >= ranks[j] + gap {
                strict.push((a.as_str(), b.as_str()));
            }
            let w = match weak_kind {
                0 => i == j,
                1 => i == j || ranks[i] >= ranks[j] + gap,
                _ => ranks[i] >= ranks[j],
            };
            if w {
                weak.push((a.as_str(), b.as_str()));
            }
        }
    }
    let ord = LabelOrders::new(labels.iter().map(String::as_str), strict, weak)
        .expect("rank-based orders are valid and compatible");
    (ars, ord)
}
