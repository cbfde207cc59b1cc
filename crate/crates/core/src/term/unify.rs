//! Syntactic unification in solved-form style with an eager occurs check.

use super::{Name, Substitution, Term};

/// Most general unifier of `s` and `t`, or `None` on a symbol clash or an
/// occurs-check failure. The result is idempotent.
pub fn mgu(s: &Term, t: &Term) -> Option<Substitution> {
    let mut solved = Substitution::new();
    let mut pending = vec![(s.clone(), t.clone())];
    while let Some((l, r)) = pending.pop() {
        let l = l.apply(&solved);
        let r = r.apply(&solved);
        match (l, r) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if other.contains_var(&x) {
                    return None;
                }
                eliminate(&mut solved, x, other);
            }
            (Term::Fun(f, fargs), Term::Fun(g, gargs)) => {
                if f != g || fargs.len() != gargs.len() {
                    return None;
                }
                pending.extend(fargs.into_iter().zip(gargs).rev());
            }
        }
    }
    Some(solved)
}

// `t` is already fully instantiated by `solved`, so after rewriting the range
// with {x ↦ t} no domain variable occurs in any binding.
fn eliminate(solved: &mut Substitution, x: Name, t: Term) {
    let bind = Substitution::singleton(x.clone(), t.clone());
    *solved = solved.iter().map(|(y, u)| (y.clone(), u.apply(&bind))).collect();
    solved.insert(x, t);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }
    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn decomposition_forces_bindings() {
        let s = Term::fun("f", vec![v("x"), c("a")]);
        let t = Term::fun("f", vec![c("b"), v("y")]);
        let mu = mgu(&s, &t).unwrap();
        assert_eq!(mu.image(&Name::new("x")), c("b"));
        assert_eq!(mu.image(&Name::new("y")), c("a"));
        assert_eq!(mu.len(), 2);
    }

    #[test]
    fn occurs_check_fails() {
        assert!(mgu(&v("x"), &Term::fun("f", vec![v("x")])).is_none());
    }

    #[test]
    fn identical_terms_give_identity() {
        let t = Term::fun("f", vec![c("a"), c("a")]);
        assert!(mgu(&t, &t).unwrap().is_empty());
    }

    #[test]
    fn clash_fails() {
        assert!(mgu(&c("a"), &c("b")).is_none());
        assert!(mgu(&Term::fun("f", vec![c("a")]), &Term::fun("f", vec![c("a"), c("a")])).is_none());
    }

    #[test]
    fn chained_bindings_are_resolved() {
        // f(x, y, z) =? f(y, z, a)
        let s = Term::fun("f", vec![v("x"), v("y"), v("z")]);
        let t = Term::fun("f", vec![v("y"), v("z"), c("a")]);
        let mu = mgu(&s, &t).unwrap();
        assert!(mu.is_idempotent());
        assert_eq!(s.apply(&mu), Term::fun("f", vec![c("a"), c("a"), c("a")]));
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::var),
            prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|t| Term::fun("g", vec![t])),
                (inner.clone(), inner).prop_map(|(s, t)| Term::fun("f", vec![s, t])),
            ]
        })
    }

    proptest! {
        #[test]
        fn mgu_is_sound_and_idempotent(s in arb_term(), t in arb_term(), u in arb_term()) {
            if let Some(mu) = mgu(&s, &t) {
                prop_assert_eq!(s.apply(&mu), t.apply(&mu));
                prop_assert!(mu.is_idempotent());
                prop_assert_eq!(u.apply(&mu).apply(&mu), u.apply(&mu));
            }
        }

        #[test]
        fn every_unifier_factors_through_mgu(
            s in arb_term(),
            t in arb_term(),
            images in prop::collection::vec(arb_term(), 3),
        ) {
            // For an idempotent mgu μ, any unifier δ satisfies δ = μδ.
            let delta: Substitution = ["x", "y", "z"]
                .iter()
                .zip(images)
                .map(|(n, u)| (Name::new(n), u))
                .collect();
            if s.apply(&delta) == t.apply(&delta) {
                let mu = mgu(&s, &t);
                prop_assert!(mu.is_some());
                let mu = mu.unwrap();
                for n in ["x", "y", "z"] {
                    let x = Term::var(n);
                    prop_assert_eq!(x.apply(&mu).apply(&delta), x.apply(&delta));
                }
            }
        }
    }
}
