//! α-equivalence on finite terms and truncations, its depth-bounded lift to
//! mixed terms, the α-quotient distance, and an exact decision procedure for
//! terms given by equation systems.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::nominal::{fresh_many, Atom, Permutable, Permutation};
use crate::signature::Signature;
use crate::term::{
    distance, Comparison, ENode, FiniteTerm, MetricResult, MixedTerm, Op, TermEnv, TermError,
    Truncation,
};

/// A finite term with bound occurrences replaced by indices: `up` counts the
/// binder blocks between the occurrence and its binder, `pos` is the
/// position inside that block. Free atoms and holes are kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NamelessForm {
    Bound { up: usize, pos: usize },
    Free(Atom),
    Hole,
    Cons(Op, Vec<(usize, NamelessForm)>),
}

/// Within a block a repeated atom refers to its last position, matching the
/// reading of a block as iterated single abstractions.
pub fn nameless(t: &FiniteTerm) -> NamelessForm {
    fn go(t: &FiniteTerm, stack: &mut Vec<Vec<Atom>>) -> NamelessForm {
        match t {
            FiniteTerm::Var(a) => stack
                .iter()
                .rev()
                .enumerate()
                .find_map(|(up, block)| {
                    block
                        .iter()
                        .rposition(|b| b == a)
                        .map(|pos| NamelessForm::Bound { up, pos })
                })
                .unwrap_or(NamelessForm::Free(*a)),
            FiniteTerm::Hole => NamelessForm::Hole,
            FiniteTerm::Cons(op, args) => NamelessForm::Cons(
                op.clone(),
                args.iter()
                    .map(|(bs, body)| {
                        stack.push(bs.clone());
                        let body = go(body, stack);
                        stack.pop();
                        (bs.len(), body)
                    })
                    .collect(),
            ),
        }
    }
    go(t, &mut Vec::new())
}

/// α-equivalence by the congruence rules: corresponding binder blocks are
/// both renamed to the same fresh atoms, then bodies are compared.
pub fn alpha_eq_rules(t: &FiniteTerm, u: &FiniteTerm) -> bool {
    match (t, u) {
        (FiniteTerm::Var(a), FiniteTerm::Var(b)) => a == b,
        (FiniteTerm::Hole, FiniteTerm::Hole) => true,
        (FiniteTerm::Cons(f, xs), FiniteTerm::Cons(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|((bx, tx), (by, ty))| {
                    if bx.len() != by.len() {
                        return false;
                    }
                    if bx.is_empty() {
                        return alpha_eq_rules(tx, ty);
                    }
                    let mut avoid = tx.atoms().union(&ty.atoms());
                    avoid.extend(bx.iter().chain(by).copied());
                    let zs = fresh_many(&avoid, bx.len());
                    alpha_eq_rules(&concretize(bx, tx, &zs), &concretize(by, ty, &zs))
                })
        }
        _ => false,
    }
}

/// Opens the block `binders` of `body` at the atoms `zs`, one binder at a
/// time.
fn concretize(binders: &[Atom], body: &FiniteTerm, zs: &[Atom]) -> FiniteTerm {
    let mut p = Permutation::identity();
    for (b, z) in binders.iter().zip(zs) {
        let current = p.apply(*b);
        p = Permutation::transposition(current, *z).compose(&p);
    }
    body.act(&p)
}

pub fn alpha_eq_finite(t: &FiniteTerm, u: &FiniteTerm) -> bool {
    nameless(t) == nameless(u)
}

/// α-equivalence of truncations; the hole is a constant equal only to
/// itself.
pub fn alpha_eq_trunc(a: &Truncation, b: &Truncation) -> bool {
    alpha_eq_finite(a, b)
}

/// `trunc_n(t) =α trunc_n(u)`, which by monotonicity of truncation implies
/// the same at every smaller depth.
pub fn alpha_eq_upto(t: &MixedTerm, u: &MixedTerm, n: usize) -> bool {
    alpha_eq_trunc(&t.truncate(n), &u.truncate(n))
}

/// Arnold–Nivat distance on α-classes.
pub fn alpha_distance(t: &MixedTerm, u: &MixedTerm, precision: u32) -> MetricResult {
    distance(t, u, precision, Comparison::Alpha)
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct BisimState {
    left: usize,
    right: usize,
    /// Pairs of atoms whose innermost binders were introduced together.
    paired: BTreeMap<Atom, Atom>,
    bound_left: BTreeSet<Atom>,
    bound_right: BTreeSet<Atom>,
}

impl BisimState {
    fn bind(&self, xs: &[Atom], ys: &[Atom], left: usize, right: usize) -> BisimState {
        let mut next = BisimState {
            left,
            right,
            ..self.clone()
        };
        for (a, b) in xs.iter().zip(ys) {
            next.paired.retain(|l, r| l != a && r != b);
            next.paired.insert(*a, *b);
            next.bound_left.insert(*a);
            next.bound_right.insert(*b);
        }
        next
    }

    fn same_occurrence(&self, a: Atom, b: Atom) -> bool {
        match self.paired.get(&a) {
            Some(r) => *r == b,
            None => !self.bound_left.contains(&a) && !self.bound_right.contains(&b) && a == b,
        }
    }
}

/// Decides `∀n. trunc_n(t) =α trunc_n(u)` for the roots of two guarded
/// equation systems by exploring the finitely many pairs of (expression
/// node, binder correspondence) reachable in a simultaneous unfolding.
pub fn alpha_eq_regular(sig: &Signature, t: &TermEnv, u: &TermEnv) -> Result<bool, TermError> {
    let te = t.compile(sig)?;
    let ue = u.compile(sig)?;
    let start = BisimState {
        left: te.root,
        right: ue.root,
        paired: BTreeMap::new(),
        bound_left: BTreeSet::new(),
        bound_right: BTreeSet::new(),
    };
    let mut seen = HashSet::new();
    let mut todo = vec![start];
    while let Some(state) = todo.pop() {
        let l = te.resolve(state.left);
        let r = ue.resolve(state.right);
        let state = BisimState {
            left: l,
            right: r,
            ..state
        };
        if !seen.insert(state.clone()) {
            continue;
        }
        match (&te.nodes[l], &ue.nodes[r]) {
            (ENode::Var(a), ENode::Var(b)) => {
                if !state.same_occurrence(*a, *b) {
                    return Ok(false);
                }
            }
            (ENode::Cons(f, xs), ENode::Cons(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return Ok(false);
                }
                for (x, y) in xs.iter().zip(ys) {
                    if x.binders.len() != y.binders.len() || x.mode != y.mode {
                        return Ok(false);
                    }
                    todo.push(state.bind(&x.binders, &y.binders, x.node, y.node));
                }
            }
            _ => return Ok(false),
        }
    }
    Ok(true)
}
