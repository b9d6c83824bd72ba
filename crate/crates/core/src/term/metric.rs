//! Arnold–Nivat distances between mixed terms.
//!
//! `d(t,u) = inf { 2^-n : trunc_n(t) = trunc_n(u) }`. Since agreement at
//! depth `n` implies agreement at every smaller depth, the distance is
//! determined by the shallowest coinductive depth at which the two terms
//! disagree. The search below finds it with one simultaneous walk instead of
//! comparing truncations depth by depth.

use std::fmt;

use super::layer::{Layer, Slot};
use super::mixed::{Deferred, MixedTerm};
use crate::nominal::Atom;

/// A distance measured up to a finite precision. `Exactly(k)` is `2^-k`;
/// `AtMost(p)` means the terms agree through depth `p`, so only the bound
/// `2^-p` is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricResult {
    Exactly(u32),
    AtMost(u32),
}

impl MetricResult {
    pub fn exponent(self) -> u32 {
        match self {
            MetricResult::Exactly(k) | MetricResult::AtMost(k) => k,
        }
    }

    /// The distance, or its upper bound.
    pub fn value(self) -> f64 {
        (-(self.exponent() as f64)).exp2()
    }

    pub fn is_exact(self) -> bool {
        matches!(self, MetricResult::Exactly(_))
    }
}

impl fmt::Display for MetricResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricResult::Exactly(k) => write!(f, "=2^-{k}"),
            MetricResult::AtMost(p) => write!(f, "<=2^-{p}"),
        }
    }
}

/// How truncations are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// Syntactic equality, binder names included.
    Raw,
    /// Equality up to renaming of bound atoms.
    Alpha,
}

/// The least coinductive depth `< limit` at which `t` and `u` differ, i.e.
/// the largest `k` with `trunc_k(t) = trunc_k(u)`, or `None` when they agree
/// through depth `limit`.
pub fn first_difference(t: &MixedTerm, u: &MixedTerm, limit: usize, cmp: Comparison) -> Option<usize> {
    let mut search = Search {
        cmp,
        best: limit,
        left: Vec::new(),
        right: Vec::new(),
    };
    if limit > 0 {
        search.layers(t.layer(), u.layer(), 0);
    }
    (search.best < limit).then_some(search.best)
}

pub(crate) fn distance(t: &MixedTerm, u: &MixedTerm, precision: u32, cmp: Comparison) -> MetricResult {
    match first_difference(t, u, precision as usize, cmp) {
        Some(k) => MetricResult::Exactly(k as u32),
        None => MetricResult::AtMost(precision),
    }
}

/// Arnold–Nivat distance with syntactic comparison of truncations.
pub fn an_distance(t: &MixedTerm, u: &MixedTerm, precision: u32) -> MetricResult {
    distance(t, u, precision, Comparison::Raw)
}

#[derive(PartialEq)]
enum Occurrence {
    Bound(usize, usize),
    Free(Atom),
}

fn occurrence(stack: &[Vec<Atom>], a: Atom) -> Occurrence {
    for (dist, block) in stack.iter().rev().enumerate() {
        if let Some(pos) = block.iter().rposition(|b| *b == a) {
            return Occurrence::Bound(dist, pos);
        }
    }
    Occurrence::Free(a)
}

struct Search {
    cmp: Comparison,
    best: usize,
    left: Vec<Vec<Atom>>,
    right: Vec<Vec<Atom>>,
}

impl Search {
    fn found(&mut self, depth: usize) {
        self.best = self.best.min(depth);
    }

    fn layers(&mut self, l: &Layer<Deferred>, r: &Layer<Deferred>, depth: usize) {
        if depth >= self.best {
            return;
        }
        match (l, r) {
            (Layer::Var(a), Layer::Var(b)) => {
                let same = match self.cmp {
                    Comparison::Raw => a == b,
                    Comparison::Alpha => occurrence(&self.left, *a) == occurrence(&self.right, *b),
                };
                if !same {
                    self.found(depth);
                }
            }
            (Layer::Cons(f, xs), Layer::Cons(g, ys)) => {
                let heads_agree = f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| {
                        x.binders.len() == y.binders.len()
                            && matches!(
                                (&x.body, &y.body),
                                (Slot::Inductive(_), Slot::Inductive(_))
                                    | (Slot::Coinductive(_), Slot::Coinductive(_))
                            )
                            && (self.cmp == Comparison::Alpha || x.binders == y.binders)
                    });
                if !heads_agree {
                    self.found(depth);
                    return;
                }
                for (x, y) in xs.iter().zip(ys) {
                    self.left.push(x.binders.clone());
                    self.right.push(y.binders.clone());
                    match (&x.body, &y.body) {
                        (Slot::Inductive(a), Slot::Inductive(b)) => self.layers(a, b, depth),
                        (Slot::Coinductive(a), Slot::Coinductive(b)) => {
                            if depth + 1 < self.best {
                                self.layers(a.force().layer(), b.force().layer(), depth + 1)
                            }
                        }
                        _ => unreachable!("checked above"),
                    }
                    self.left.pop();
                    self.right.pop();
                }
            }
            _ => self.found(depth),
        }
    }
}
