use std::fmt;
use std::sync::Arc;

use crate::nominal::{Atom, Nominal, Permutable, Permutation, SupportSet};

/// Constructor name as carried by terms.
pub type Op = Arc<str>;

/// One inductive layer of a term: a variable, or a constructor whose
/// inductive arguments are nested layers and whose coinductive arguments
/// hold a payload of type `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Layer<C> {
    Var(Atom),
    Cons(Op, Vec<Arg<C>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arg<C> {
    pub binders: Vec<Atom>,
    pub body: Slot<C>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot<C> {
    Inductive(Box<Layer<C>>),
    Coinductive(C),
}

impl<C> Arg<C> {
    pub fn inductive(binders: Vec<Atom>, body: Layer<C>) -> Arg<C> {
        Arg {
            binders,
            body: Slot::Inductive(Box::new(body)),
        }
    }

    pub fn coinductive(binders: Vec<Atom>, body: C) -> Arg<C> {
        Arg {
            binders,
            body: Slot::Coinductive(body),
        }
    }
}

impl<C> Layer<C> {
    /// Maps every coinductive payload, keeping the inductive skeleton.
    pub fn map<D>(self, f: &mut impl FnMut(C) -> D) -> Layer<D> {
        match self {
            Layer::Var(a) => Layer::Var(a),
            Layer::Cons(op, args) => Layer::Cons(
                op,
                args.into_iter()
                    .map(|arg| Arg {
                        binders: arg.binders,
                        body: match arg.body {
                            Slot::Inductive(l) => Slot::Inductive(Box::new(l.map(f))),
                            Slot::Coinductive(c) => Slot::Coinductive(f(c)),
                        },
                    })
                    .collect(),
            ),
        }
    }

    pub fn try_map<D, E>(self, f: &mut impl FnMut(C) -> Result<D, E>) -> Result<Layer<D>, E> {
        Ok(match self {
            Layer::Var(a) => Layer::Var(a),
            Layer::Cons(op, args) => Layer::Cons(
                op,
                args.into_iter()
                    .map(|arg| {
                        Ok(Arg {
                            binders: arg.binders,
                            body: match arg.body {
                                Slot::Inductive(l) => Slot::Inductive(Box::new(l.try_map(f)?)),
                                Slot::Coinductive(c) => Slot::Coinductive(f(c)?),
                            },
                        })
                    })
                    .collect::<Result<_, E>>()?,
            ),
        })
    }

    /// Coinductive payloads in left-to-right order.
    pub fn payloads(&self) -> Vec<&C> {
        fn go<'a, C>(l: &'a Layer<C>, out: &mut Vec<&'a C>) {
            if let Layer::Cons(_, args) = l {
                for arg in args {
                    match &arg.body {
                        Slot::Inductive(l) => go(l, out),
                        Slot::Coinductive(c) => out.push(c),
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Atoms occurring in the inductive skeleton (binders included).
    pub fn visible_atoms(&self) -> SupportSet {
        fn go<C>(l: &Layer<C>, out: &mut SupportSet) {
            match l {
                Layer::Var(a) => {
                    out.insert(*a);
                }
                Layer::Cons(_, args) => {
                    for arg in args {
                        out.extend(arg.binders.iter().copied());
                        if let Slot::Inductive(l) = &arg.body {
                            go(l, out);
                        }
                    }
                }
            }
        }
        let mut out = SupportSet::new();
        go(self, &mut out);
        out
    }
}

impl<C: Permutable> Permutable for Layer<C> {
    fn act(&self, p: &Permutation) -> Self {
        match self {
            Layer::Var(a) => Layer::Var(p.apply(*a)),
            Layer::Cons(op, args) => Layer::Cons(
                op.clone(),
                args.iter()
                    .map(|arg| Arg {
                        binders: arg.binders.iter().map(|b| p.apply(*b)).collect(),
                        body: match &arg.body {
                            Slot::Inductive(l) => Slot::Inductive(Box::new(l.act(p))),
                            Slot::Coinductive(c) => Slot::Coinductive(c.act(p)),
                        },
                    })
                    .collect(),
            ),
        }
    }
}

/// A finite term over the signature extended with the hole constant `*`.
///
/// Raw finite terms never contain holes; truncations may.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FiniteTerm {
    Var(Atom),
    Hole,
    Cons(Op, Vec<(Vec<Atom>, FiniteTerm)>),
}

/// The result of observing a term up to some depth.
pub type Truncation = FiniteTerm;

impl FiniteTerm {
    pub fn cons(op: &str, args: Vec<(Vec<Atom>, FiniteTerm)>) -> FiniteTerm {
        FiniteTerm::Cons(Op::from(op), args)
    }

    pub fn has_hole(&self) -> bool {
        match self {
            FiniteTerm::Hole => true,
            FiniteTerm::Var(_) => false,
            FiniteTerm::Cons(_, args) => args.iter().any(|(_, t)| t.has_hole()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            FiniteTerm::Var(_) | FiniteTerm::Hole => 1,
            FiniteTerm::Cons(_, args) => 1 + args.iter().map(|(_, t)| t.size()).sum::<usize>(),
        }
    }

    /// Every atom occurring, bound or free.
    pub fn atoms(&self) -> SupportSet {
        fn go(t: &FiniteTerm, out: &mut SupportSet) {
            match t {
                FiniteTerm::Var(a) => {
                    out.insert(*a);
                }
                FiniteTerm::Hole => {}
                FiniteTerm::Cons(_, args) => {
                    for (bs, body) in args {
                        out.extend(bs.iter().copied());
                        go(body, out);
                    }
                }
            }
        }
        let mut out = SupportSet::new();
        go(self, &mut out);
        out
    }

    /// Atoms with an occurrence not under a binder for them.
    pub fn free_vars(&self) -> SupportSet {
        fn go(t: &FiniteTerm, bound: &mut Vec<Atom>, out: &mut SupportSet) {
            match t {
                FiniteTerm::Var(a) => {
                    if !bound.contains(a) {
                        out.insert(*a);
                    }
                }
                FiniteTerm::Hole => {}
                FiniteTerm::Cons(_, args) => {
                    for (bs, body) in args {
                        let mark = bound.len();
                        bound.extend(bs.iter().copied());
                        go(body, bound, out);
                        bound.truncate(mark);
                    }
                }
            }
        }
        let mut out = SupportSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// True when `self` is `other` with some subterms replaced by holes.
    pub fn refines(&self, other: &FiniteTerm) -> bool {
        match (self, other) {
            (FiniteTerm::Hole, _) => true,
            (FiniteTerm::Var(a), FiniteTerm::Var(b)) => a == b,
            (FiniteTerm::Cons(f, xs), FiniteTerm::Cons(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs
                        .iter()
                        .zip(ys)
                        .all(|((bx, tx), (by, ty))| bx == by && tx.refines(ty))
            }
            _ => false,
        }
    }
}

impl Permutable for FiniteTerm {
    fn act(&self, p: &Permutation) -> Self {
        match self {
            FiniteTerm::Var(a) => FiniteTerm::Var(p.apply(*a)),
            FiniteTerm::Hole => FiniteTerm::Hole,
            FiniteTerm::Cons(op, args) => FiniteTerm::Cons(
                op.clone(),
                args.iter()
                    .map(|(bs, t)| (bs.iter().map(|b| p.apply(*b)).collect(), t.act(p)))
                    .collect(),
            ),
        }
    }
}

/// Raw terms: the permutation action renames bound atoms too, so the least
/// support is every atom that occurs.
impl Nominal for FiniteTerm {
    fn support(&self) -> SupportSet {
        self.atoms()
    }
}

impl fmt::Display for FiniteTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteTerm::Var(a) => write!(f, "{a}"),
            FiniteTerm::Hole => write!(f, "_"),
            FiniteTerm::Cons(op, args) => {
                write!(f, "{op}")?;
                if args.is_empty() {
                    return Ok(());
                }
                write!(f, "(")?;
                for (i, (bs, t)) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    for (j, b) in bs.iter().enumerate() {
                        write!(f, "{}{b}", if j > 0 { " " } else { "" })?;
                    }
                    if !bs.is_empty() {
                        write!(f, ". ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}
