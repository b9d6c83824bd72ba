use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::layer::{Arg, FiniteTerm, Layer, Op, Slot, Truncation};
use super::TermError;
use crate::nominal::{Atom, Permutable, Permutation, SupportSet};
use crate::signature::Signature;

type Init = Box<dyn FnOnce() -> MixedTerm + Send>;

struct Thunk {
    value: OnceLock<MixedTerm>,
    init: Mutex<Option<Init>>,
}

/// A suspended coinductive child. Forcing runs the suspension at most once;
/// every later force returns the memoized term.
#[derive(Clone)]
pub struct Deferred(Arc<Thunk>);

impl Deferred {
    pub fn new(f: impl FnOnce() -> MixedTerm + Send + 'static) -> Deferred {
        Deferred(Arc::new(Thunk {
            value: OnceLock::new(),
            init: Mutex::new(Some(Box::new(f))),
        }))
    }

    /// An already-forced child.
    pub fn ready(t: MixedTerm) -> Deferred {
        Deferred(Arc::new(Thunk {
            value: OnceLock::from(t),
            init: Mutex::new(None),
        }))
    }

    pub fn force(&self) -> &MixedTerm {
        self.0.value.get_or_init(|| {
            let init = self
                .0
                .init
                .lock()
                .unwrap_or_else(|e| e.into_inner())
                .take()
                .expect("suspension panicked during an earlier force");
            init()
        })
    }

    pub fn is_forced(&self) -> bool {
        self.0.value.get().is_some()
    }

    /// Lazily maps the eventual term.
    pub fn map(&self, f: impl FnOnce(&MixedTerm) -> MixedTerm + Send + 'static) -> Deferred {
        let this = self.clone();
        Deferred::new(move || f(this.force()))
    }

    pub fn ptr_eq(&self, other: &Deferred) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Permutable for Deferred {
    fn act(&self, p: &Permutation) -> Self {
        if p.is_identity() {
            return self.clone();
        }
        let p = p.clone();
        self.map(move |t| t.act(&p))
    }
}

impl fmt::Debug for Deferred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_forced() {
            f.write_str("<forced>")
        } else {
            f.write_str("<deferred>")
        }
    }
}

struct Node {
    layer: Layer<Deferred>,
    atoms: Option<Arc<SupportSet>>,
}

/// A possibly infinite term whose coinductive children are produced on
/// demand. Each term optionally carries a finite set containing every atom
/// that occurs anywhere in it; terms built from equations, finite terms,
/// permutations and substitution always have one.
#[derive(Clone)]
pub struct MixedTerm(Arc<Node>);

/// A coinductive slot produced by a corecursive step: either a finished
/// child or a seed to keep unfolding from.
#[derive(Debug, Clone)]
pub enum Seeded<S> {
    Done(Deferred),
    Pending(S),
}

impl MixedTerm {
    pub fn from_layer(layer: Layer<Deferred>, atoms: Option<SupportSet>) -> MixedTerm {
        MixedTerm::from_shared(layer, atoms.map(Arc::new))
    }

    pub(crate) fn from_shared(layer: Layer<Deferred>, atoms: Option<Arc<SupportSet>>) -> MixedTerm {
        MixedTerm(Arc::new(Node { layer, atoms }))
    }

    pub fn var(a: Atom) -> MixedTerm {
        MixedTerm::from_layer(Layer::Var(a), Some(SupportSet::singleton(a)))
    }

    /// Applies a constructor to already-built terms. Inductive arguments are
    /// spliced into this layer; coinductive ones are stored as forced
    /// children.
    pub fn cons(
        sig: &Signature,
        op: &str,
        args: Vec<(Vec<Atom>, MixedTerm)>,
    ) -> Result<MixedTerm, TermError> {
        let c = sig
            .constructor(op)
            .ok_or_else(|| TermError::UnknownConstructor(op.to_string()))?;
        check_arity(op, c.args.iter().map(|a| a.binders), args.iter().map(|(b, _)| b.len()))?;
        let mut atoms = Some(SupportSet::new());
        let args = c
            .args
            .iter()
            .zip(args)
            .map(|(spec, (binders, t))| {
                match (&mut atoms, t.atoms()) {
                    (Some(acc), Some(s)) => {
                        acc.extend_from(s);
                        acc.extend(binders.iter().copied());
                    }
                    _ => atoms = None,
                }
                if spec.mode.is_coinductive() {
                    Arg::coinductive(binders, Deferred::ready(t))
                } else {
                    Arg::inductive(binders, t.layer().clone())
                }
            })
            .collect();
        Ok(MixedTerm::from_layer(Layer::Cons(Op::from(op), args), atoms))
    }

    /// The canonical inclusion of finite terms: every coinductive child is
    /// already forced.
    pub fn embed(sig: &Signature, t: &FiniteTerm) -> Result<MixedTerm, TermError> {
        let atoms = Arc::new(t.atoms());
        embed_with(sig, t, &atoms)
    }

    /// The term observed as `step(seed)`, where every seed produced in a
    /// coinductive slot is unfolded again on demand.
    pub fn unfold<S, F>(step: F, seed: S) -> MixedTerm
    where
        S: Send + 'static,
        F: Fn(S) -> Layer<S> + Send + Sync + 'static,
    {
        MixedTerm::corec(move |s| step(s).map(&mut |s| Seeded::Pending(s)), seed, None)
    }

    /// [`MixedTerm::unfold`] for a step whose terms only ever mention atoms
    /// from `atoms`.
    pub fn unfold_within<S, F>(atoms: SupportSet, step: F, seed: S) -> MixedTerm
    where
        S: Send + 'static,
        F: Fn(S) -> Layer<S> + Send + Sync + 'static,
    {
        MixedTerm::corec(
            move |s| step(s).map(&mut |s| Seeded::Pending(s)),
            seed,
            Some(atoms),
        )
    }

    /// Corecursion with early exit: a step may place a finished term in a
    /// coinductive slot instead of a seed.
    pub fn corec<S, F>(step: F, seed: S, atoms: Option<SupportSet>) -> MixedTerm
    where
        S: Send + 'static,
        F: Fn(S) -> Layer<Seeded<S>> + Send + Sync + 'static,
    {
        corec_shared(&Arc::new(step), seed, atoms.map(Arc::new))
    }

    /// The observable head layer.
    pub fn layer(&self) -> &Layer<Deferred> {
        &self.0.layer
    }

    /// A finite set containing every atom of the term, when known.
    pub fn atoms(&self) -> Option<&SupportSet> {
        self.0.atoms.as_deref()
    }

    /// Mixed truncation at depth `n`: the budget only decreases through
    /// coinductive arguments, and an exhausted budget yields a hole.
    pub fn truncate(&self, n: usize) -> Truncation {
        if n == 0 {
            return FiniteTerm::Hole;
        }
        truncate_layer(self.layer(), n)
    }

    /// Atoms occurring (bound or free) in the truncation at `depth`.
    pub fn atoms_of(&self, depth: usize) -> SupportSet {
        self.truncate(depth).atoms()
    }

    /// Free atoms of the truncation at `depth`.
    pub fn free_vars(&self, depth: usize) -> SupportSet {
        self.truncate(depth).free_vars()
    }

    /// The finite term, if the whole term has no hole at depth `n`.
    pub fn to_finite(&self, n: usize) -> Option<FiniteTerm> {
        let t = self.truncate(n);
        (!t.has_hole()).then_some(t)
    }

    pub fn ptr_eq(&self, other: &MixedTerm) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

/// Renames every atom, bound and free. Children are wrapped, not forced.
impl Permutable for MixedTerm {
    fn act(&self, p: &Permutation) -> Self {
        if p.is_identity() {
            return self.clone();
        }
        MixedTerm::from_shared(
            self.layer().act(p),
            self.0.atoms.as_ref().map(|s| Arc::new(s.act(p))),
        )
    }
}

impl fmt::Debug for MixedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MixedTerm")
            .field("layer", self.layer())
            .field("atoms", &self.atoms())
            .finish()
    }
}

fn truncate_layer(layer: &Layer<Deferred>, n: usize) -> Truncation {
    match layer {
        Layer::Var(a) => FiniteTerm::Var(*a),
        Layer::Cons(op, args) => FiniteTerm::Cons(
            op.clone(),
            args.iter()
                .map(|arg| {
                    let body = match &arg.body {
                        Slot::Inductive(l) => truncate_layer(l, n),
                        Slot::Coinductive(d) => d.force().truncate(n - 1),
                    };
                    (arg.binders.clone(), body)
                })
                .collect(),
        ),
    }
}

fn corec_shared<S, F>(step: &Arc<F>, seed: S, atoms: Option<Arc<SupportSet>>) -> MixedTerm
where
    S: Send + 'static,
    F: Fn(S) -> Layer<Seeded<S>> + Send + Sync + 'static,
{
    let layer = step(seed).map(&mut |slot| match slot {
        Seeded::Done(d) => d,
        Seeded::Pending(next) => {
            let step = Arc::clone(step);
            let atoms = atoms.clone();
            Deferred::new(move || corec_shared(&step, next, atoms))
        }
    });
    MixedTerm::from_shared(layer, atoms)
}

pub(crate) fn check_arity(
    op: &str,
    expected: impl ExactSizeIterator<Item = usize>,
    found: impl ExactSizeIterator<Item = usize>,
) -> Result<(), TermError> {
    if expected.len() != found.len() {
        return Err(TermError::ArityMismatch {
            op: op.to_string(),
            expected: expected.len(),
            found: found.len(),
        });
    }
    for (i, (e, f)) in expected.zip(found).enumerate() {
        if e != f {
            return Err(TermError::BinderMismatch {
                op: op.to_string(),
                arg: i,
                expected: e,
                found: f,
            });
        }
    }
    Ok(())
}

fn embed_layer(
    sig: &Signature,
    t: &FiniteTerm,
    atoms: &Arc<SupportSet>,
) -> Result<Layer<Deferred>, TermError> {
    match t {
        FiniteTerm::Var(a) => Ok(Layer::Var(*a)),
        FiniteTerm::Hole => Err(TermError::UnexpectedHole),
        FiniteTerm::Cons(op, args) => {
            let c = sig
                .constructor(op)
                .ok_or_else(|| TermError::UnknownConstructor(op.to_string()))?;
            check_arity(op, c.args.iter().map(|a| a.binders), args.iter().map(|(b, _)| b.len()))?;
            let args = c
                .args
                .iter()
                .zip(args)
                .map(|(spec, (binders, body))| {
                    Ok(if spec.mode.is_coinductive() {
                        Arg::coinductive(binders.clone(), Deferred::ready(embed_with(sig, body, atoms)?))
                    } else {
                        Arg::inductive(binders.clone(), embed_layer(sig, body, atoms)?)
                    })
                })
                .collect::<Result<_, TermError>>()?;
            Ok(Layer::Cons(op.clone(), args))
        }
    }
}

fn embed_with(
    sig: &Signature,
    t: &FiniteTerm,
    atoms: &Arc<SupportSet>,
) -> Result<MixedTerm, TermError> {
    Ok(MixedTerm::from_shared(
        embed_layer(sig, t, atoms)?,
        Some(Arc::clone(atoms)),
    ))
}
