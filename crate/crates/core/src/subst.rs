//! Capture-avoiding substitution on mixed terms.
//!
//! Substitution is a corecursive definition with an inner recursion. Each
//! output layer is produced from one input layer in four steps:
//!
//! 1. [`freshen_binders`]: rename binders that clash with the variable or
//!    with the atoms of the replacement;
//! 2. inject every coinductive child on the right ([`Side::Pending`]);
//! 3. [`layer_subst_h`]: recurse through the inductive skeleton, replacing
//!    the variable by the head layer of the replacement, whose own children
//!    are injected on the left ([`Side::Done`]);
//! 4. [`strength_pack`]: push `(var, replacement)` under the binders of
//!    every right-injected child, producing [`SubstTask`] seeds.
//!
//! The seeds are then resolved by [`MixedTerm::corec`]: finished children
//! are shared as they are and pending ones are substituted on demand.

use thiserror::Error;

use crate::nominal::{fresh, fresh_many, Atom, Permutable, Permutation, SupportSet};
use crate::term::{Arg, Deferred, Layer, MixedTerm, Seeded, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("binder {0} is not fresh for the substitution")]
    FreshnessViolation(Atom),
}

/// A substitution still to be performed: `target[var := replacement]`.
#[derive(Debug, Clone)]
pub struct SubstTask {
    pub target: Deferred,
    pub var: Atom,
    pub replacement: MixedTerm,
}

/// A coinductive child during one substitution step: `Done` children are
/// final, `Pending` children still have the substitution applied to them.
#[derive(Debug, Clone)]
pub enum Side {
    Done(Deferred),
    Pending(Deferred),
}

/// One output layer whose coinductive slots are finished children or
/// pending substitutions.
pub type LayerWithSeeds = Layer<Seeded<SubstTask>>;

/// `t[x := u]`, computed lazily one layer at a time.
pub fn subst(t: &MixedTerm, x: Atom, u: &MixedTerm) -> MixedTerm {
    let atoms = result_atoms(t, x, u);
    let task = SubstTask {
        target: Deferred::ready(t.clone()),
        var: x,
        replacement: u.clone(),
    };
    MixedTerm::corec(subst_step, task, atoms)
}

/// The corecursive step: one layer of `target[var := replacement]`.
pub fn subst_step(task: SubstTask) -> LayerWithSeeds {
    let SubstTask {
        target,
        var,
        replacement,
    } = task;
    let t = target.force();
    let avoid = binder_avoid(var, &replacement);
    let occupied = match t.atoms() {
        Some(s) => s.clone(),
        None => t.layer().visible_atoms(),
    };
    let layer = freshen_binders(t.layer(), &avoid, &occupied).map(&mut Side::Pending);
    let layer = layer_subst_h(layer, var, &replacement, &avoid)
        .expect("binders were freshened before the inner recursion");
    strength_pack(layer, var, &replacement, &occupied)
}

/// Atoms a binder must avoid so that substituting `u` for `x` below it
/// cannot capture: `x` and the atoms of `u`.
fn binder_avoid(x: Atom, u: &MixedTerm) -> SupportSet {
    let mut avoid = match u.atoms() {
        Some(s) => s.clone(),
        None => u.layer().visible_atoms(),
    };
    avoid.insert(x);
    avoid
}

/// A finite set containing every atom of `t[x := u]`.
///
/// Freshening along any path renames at most `|avoid ∩ atoms(t)|` binders,
/// each to the least atom outside everything in sight, so all new atoms lie
/// among the first that many atoms outside `avoid ∪ atoms(t)`.
fn result_atoms(t: &MixedTerm, x: Atom, u: &MixedTerm) -> Option<SupportSet> {
    let (ta, ua) = (t.atoms()?, u.atoms()?);
    let mut avoid = ua.clone();
    avoid.insert(x);
    let clashes = ta.iter().filter(|a| avoid.contains(*a)).count();
    let mut out = ta.union(ua);
    out.extend(fresh_many(&avoid.union(ta), clashes));
    Some(out)
}

/// Renames every binder of the layer that lies in `avoid` to a fresh atom,
/// producing an α-equivalent layer. `occupied` must contain every atom of
/// the layer and of its coinductive children; replacements avoid both sets
/// and any replacement already in scope. Binders outside `avoid` are kept,
/// so the operation is idempotent.
pub fn freshen_binders(
    layer: &Layer<Deferred>,
    avoid: &SupportSet,
    occupied: &SupportSet,
) -> Layer<Deferred> {
    fn go(l: &Layer<Deferred>, avoid: &SupportSet, taken: &mut SupportSet) -> Layer<Deferred> {
        match l {
            Layer::Var(a) => Layer::Var(*a),
            Layer::Cons(op, args) => Layer::Cons(
                op.clone(),
                args.iter()
                    .map(|arg| {
                        let mut p = Permutation::identity();
                        let mut introduced = Vec::new();
                        let binders = arg
                            .binders
                            .iter()
                            .map(|b| {
                                let b = p.apply(*b);
                                if !avoid.contains(b) {
                                    return b;
                                }
                                let z = fresh(taken);
                                taken.insert(z);
                                introduced.push(z);
                                p = Permutation::transposition(b, z).compose(&p);
                                z
                            })
                            .collect();
                        let body = match &arg.body {
                            Slot::Inductive(l) => Slot::Inductive(Box::new(go(&l.act(&p), avoid, taken))),
                            Slot::Coinductive(d) => Slot::Coinductive(d.act(&p)),
                        };
                        for z in introduced {
                            taken.remove(z);
                        }
                        Arg { binders, body }
                    })
                    .collect(),
            ),
        }
    }
    let mut taken = occupied.union(avoid);
    go(layer, avoid, &mut taken)
}

/// The inner recursion over one inductive layer: `x` becomes the head layer
/// of `u` with its children marked done, other variables stay, and
/// constructors recurse into inductive arguments only.
///
/// Every binder met on the way must avoid `avoid` (`x` and the atoms of
/// `u`); otherwise the layer was not freshened and the result would capture.
pub fn layer_subst_h(
    layer: Layer<Side>,
    x: Atom,
    u: &MixedTerm,
    avoid: &SupportSet,
) -> Result<Layer<Side>, SubstError> {
    match layer {
        Layer::Var(a) if a == x => Ok(u.layer().clone().map(&mut Side::Done)),
        Layer::Var(a) => Ok(Layer::Var(a)),
        Layer::Cons(op, args) => Ok(Layer::Cons(
            op,
            args.into_iter()
                .map(|arg| {
                    let body = match arg.body {
                        Slot::Inductive(l) => {
                            if let Some(b) = arg.binders.iter().find(|b| avoid.contains(**b)) {
                                return Err(SubstError::FreshnessViolation(*b));
                            }
                            Slot::Inductive(Box::new(layer_subst_h(*l, x, u, avoid)?))
                        }
                        coinductive => coinductive,
                    };
                    Ok(Arg {
                        binders: arg.binders,
                        body,
                    })
                })
                .collect::<Result<_, _>>()?,
        )),
    }
}

/// The strength: turns each pending child `⟨ȳ⟩t` into a seed `⟨z̄⟩(t@z̄, x, u)`.
/// When the binders already avoid `x` and `u`, `z̄ = ȳ`; otherwise fresh
/// atoms outside `occupied` are chosen and the child is renamed lazily.
pub fn strength_pack(
    layer: Layer<Side>,
    x: Atom,
    u: &MixedTerm,
    occupied: &SupportSet,
) -> LayerWithSeeds {
    let avoid = binder_avoid(x, u);
    let task = |target| SubstTask {
        target,
        var: x,
        replacement: u.clone(),
    };
    fn go(
        l: Layer<Side>,
        avoid: &SupportSet,
        taken: &mut SupportSet,
        task: &dyn Fn(Deferred) -> SubstTask,
    ) -> LayerWithSeeds {
        match l {
            Layer::Var(a) => Layer::Var(a),
            Layer::Cons(op, args) => Layer::Cons(
                op,
                args.into_iter()
                    .map(|arg| match arg.body {
                        Slot::Inductive(l) => Arg {
                            binders: arg.binders,
                            body: Slot::Inductive(Box::new(go(*l, avoid, taken, task))),
                        },
                        Slot::Coinductive(Side::Done(d)) => Arg::coinductive(arg.binders, Seeded::Done(d)),
                        Slot::Coinductive(Side::Pending(d)) => {
                            let mut p = Permutation::identity();
                            let mut local = taken.clone();
                            let binders = arg
                                .binders
                                .iter()
                                .map(|b| {
                                    let b = p.apply(*b);
                                    if !avoid.contains(b) {
                                        return b;
                                    }
                                    let z = fresh(&local);
                                    local.insert(z);
                                    p = Permutation::transposition(b, z).compose(&p);
                                    z
                                })
                                .collect();
                            Arg::coinductive(binders, Seeded::Pending(task(d.act(&p))))
                        }
                    })
                    .collect(),
            ),
        }
    }
    let mut taken = occupied.union(&avoid);
    // Binders already in scope in this layer may occur free in the children.
    taken.extend_from(&layer_binders(&layer));
    go(layer, &avoid, &mut taken, &task)
}

fn layer_binders<C>(l: &Layer<C>) -> SupportSet {
    let mut out = SupportSet::new();
    if let Layer::Cons(_, args) = l {
        for arg in args {
            out.extend(arg.binders.iter().copied());
            if let Slot::Inductive(l) = &arg.body {
                out.extend_from(&layer_binders(l));
            }
        }
    }
    out
}
