use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("label {0} is not declared")]
    UnknownLabel(String),
    #[error("strict order is not irreflexive: {0} > {0}")]
    StrictReflexive(String),
    #[error("strict order is not transitive: {0} > {1} > {2}")]
    StrictNotTransitive(String, String, String),
    #[error("weak order is not reflexive at {0}")]
    WeakNotReflexive(String),
    #[error("weak order is not transitive: {0} ⩾ {1} ⩾ {2}")]
    WeakNotTransitive(String, String, String),
    #[error("orders are not compatible: {0} ⩾ {1} > {2} ⩾ {3} but not {0} > {3}")]
    Incompatible(String, String, String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Strict,
    Weak,
}

/// A strict order `>` and a compatible preorder `⩾` on a finite label set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelOrders {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    gt: Vec<Vec<bool>>,
    ge: Vec<Vec<bool>>,
}

fn names(v: &[String], ix: &[usize]) -> Vec<String> {
    ix.iter().map(|&i| v[i].clone()).collect()
}

impl LabelOrders {
    /// Validates the given relations as they are.
    pub fn new<'a>(
        labels: impl IntoIterator<Item = &'a str>,
        strict: impl IntoIterator<Item = (&'a str, &'a str)>,
        weak: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, OrderError> {
        let ord = Self::build(labels, strict, weak)?;
        ord.validate()?;
        Ok(ord)
    }

    /// Closes `strict` transitively and `weak` reflexively and transitively,
    /// then validates.
    pub fn closed<'a>(
        labels: impl IntoIterator<Item = &'a str>,
        strict: impl IntoIterator<Item = (&'a str, &'a str)>,
        weak: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, OrderError> {
        let mut ord = Self::build(labels, strict, weak)?;
        let n = ord.labels.len();
        for i in 0..n {
            ord.ge[i][i] = true;
        }
        transitive_closure(&mut ord.gt);
        transitive_closure(&mut ord.ge);
        ord.validate()?;
        Ok(ord)
    }

    fn build<'a>(
        labels: impl IntoIterator<Item = &'a str>,
        strict: impl IntoIterator<Item = (&'a str, &'a str)>,
        weak: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, OrderError> {
        let set: BTreeSet<String> = labels.into_iter().map(str::to_string).collect();
        let labels: Vec<String> = set.into_iter().collect();
        let index: BTreeMap<String, usize> =
            labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let n = labels.len();
        let mut ord = LabelOrders {
            labels,
            index,
            gt: vec![vec![false; n]; n],
            ge: vec![vec![false; n]; n],
        };
        for (a, b) in strict {
            let (i, j) = (ord.idx(a)?, ord.idx(b)?);
            ord.gt[i][j] = true;
        }
        for (a, b) in weak {
            let (i, j) = (ord.idx(a)?, ord.idx(b)?);
            ord.ge[i][j] = true;
        }
        Ok(ord)
    }

    fn idx(&self, l: &str) -> Result<usize, OrderError> {
        self.index
            .get(l)
            .copied()
            .ok_or_else(|| OrderError::UnknownLabel(l.to_string()))
    }

    fn validate(&self) -> Result<(), OrderError> {
        let n = self.labels.len();
        let l = &self.labels;
        for (i, name) in l.iter().enumerate() {
            if self.gt[i][i] {
                return Err(OrderError::StrictReflexive(name.clone()));
            }
            if !self.ge[i][i] {
                return Err(OrderError::WeakNotReflexive(name.clone()));
            }
        }
        for (i, j, k) in triples(n) {
            if self.gt[i][j] && self.gt[j][k] && !self.gt[i][k] {
                let v = names(l, &[i, j, k]);
                return Err(OrderError::StrictNotTransitive(v[0].clone(), v[1].clone(), v[2].clone()));
            }
            if self.ge[i][j] && self.ge[j][k] && !self.ge[i][k] {
                let v = names(l, &[i, j, k]);
                return Err(OrderError::WeakNotTransitive(v[0].clone(), v[1].clone(), v[2].clone()));
            }
        }
        for (w, x, y) in triples(n) {
            if !(self.ge[w][x] && self.gt[x][y]) {
                continue;
            }
            for z in 0..n {
                if self.ge[y][z] && !self.gt[w][z] {
                    let v = names(l, &[w, x, y, z]);
                    return Err(OrderError::Incompatible(
                        v[0].clone(),
                        v[1].clone(),
                        v[2].clone(),
                        v[3].clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The same strict order with equality as the weak order.
    pub fn with_identity_weak(&self) -> Self {
        let n = self.labels.len();
        let mut ord = self.clone();
        ord.ge = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        ord
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn contains(&self, l: &str) -> bool {
        self.index.contains_key(l)
    }

    /// `a > b`; false for undeclared labels.
    pub fn gt(&self, a: &str, b: &str) -> bool {
        matches!((self.index.get(a), self.index.get(b)), (Some(&i), Some(&j)) if self.gt[i][j])
    }

    /// `a ⩾ b`; undeclared labels are only related to themselves.
    pub fn ge(&self, a: &str, b: &str) -> bool {
        a == b || matches!((self.index.get(a), self.index.get(b)), (Some(&i), Some(&j)) if self.ge[i][j])
    }

    pub fn pairs(&self, rel: Relation) -> Vec<(String, String)> {
        let m = match rel {
            Relation::Strict => &self.gt,
            Relation::Weak => &self.ge,
        };
        let mut out = Vec::new();
        for (i, row) in m.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                if b {
                    out.push((self.labels[i].clone(), self.labels[j].clone()));
                }
            }
        }
        out
    }

    /// `{ β | ∃α ∈ set. α rel β }`.
    pub fn down_set<'a>(&self, rel: Relation, set: impl IntoIterator<Item = &'a str>) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in set {
            for b in &self.labels {
                let hit = match rel {
                    Relation::Strict => self.gt(a, b),
                    Relation::Weak => self.ge(a, b),
                };
                if hit {
                    out.insert(b.clone());
                }
            }
        }
        out
    }
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
}

#[allow(clippy::needless_range_loop)]
fn transitive_closure(m: &mut [Vec<bool>]) {
    let n = m.len();
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                for j in 0..n {
                    if m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
}
