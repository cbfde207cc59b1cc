use std::fmt;

/// A position: a string of positive integers, `ε` being the empty string.
///
/// The derived order is lexicographic with prefixes first, which is the
/// order used whenever redex positions have to be enumerated deterministically.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Position {
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    pub fn concat(&self, other: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Position(v)
    }

    /// `self ⩽ other`: `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `self < other`: proper prefix.
    pub fn is_above(&self, other: &Position) -> bool {
        self.0.len() < other.0.len() && self.is_prefix_of(other)
    }

    pub fn is_parallel_to(&self, other: &Position) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }

    /// `self \ prefix`, defined when `prefix ⩽ self`.
    pub fn strip_prefix(&self, prefix: &Position) -> Option<Position> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|rest| Position(rest.to_vec()))
    }
}

impl From<Vec<usize>> for Position {
    fn from(v: Vec<usize>) -> Self {
        Position(v)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Position {
        Position::from(v.to_vec())
    }

    #[test]
    fn order_relations() {
        assert!(p(&[1]).is_prefix_of(&p(&[1, 2])));
        assert!(p(&[1]).is_above(&p(&[1, 2])));
        assert!(!p(&[1]).is_above(&p(&[1])));
        assert!(p(&[1]).is_parallel_to(&p(&[2])));
        assert!(!p(&[]).is_parallel_to(&p(&[2])));
        assert_eq!(p(&[1, 2, 3]).strip_prefix(&p(&[1])), Some(p(&[2, 3])));
        assert_eq!(p(&[2]).strip_prefix(&p(&[1])), None);
        assert_eq!(p(&[]).to_string(), "ε");
        assert_eq!(p(&[1, 2]).to_string(), "1.2");
    }

    fn arb_pos() -> impl Strategy<Value = Position> {
        prop::collection::vec(1usize..4, 0..5).prop_map(Position::from)
    }

    proptest! {
        #[test]
        fn concat_is_associative_with_root_identity(a in arb_pos(), b in arb_pos(), c in arb_pos()) {
            prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
            prop_assert_eq!(a.concat(&Position::root()), a.clone());
            prop_assert_eq!(Position::root().concat(&a), a);
        }

        #[test]
        fn strip_then_prepend_restores(q in arb_pos(), r in arb_pos()) {
            let p = q.concat(&r);
            let rest = p.strip_prefix(&q).unwrap();
            prop_assert_eq!(q.concat(&rest), p);
        }
    }
}
