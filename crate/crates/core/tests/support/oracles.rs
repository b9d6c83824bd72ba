//! Reference implementations used as test oracles. They are written
//! directly from the definitions and share no code with the library beyond
//! its data types.

use std::collections::HashMap;

use mixterm::nominal::{Atom, Permutable, Permutation, SupportSet};
use mixterm::subst::SubstTask;
use mixterm::term::{Arg, Deferred, Layer, Seeded, Slot};
use mixterm::{Expr, FiniteTerm, MetricResult, Mode, MixedTerm, Signature, TermEnv};

/// Permutations of `0..N` as lookup tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table(pub Vec<u32>);

pub const TABLE_SIZE: u32 = 12;

impl Table {
    pub fn identity() -> Table {
        Table((0..TABLE_SIZE).collect())
    }

    pub fn swap(a: u32, b: u32) -> Table {
        let mut t = Table::identity();
        t.0.swap(a as usize, b as usize);
        t
    }

    /// `self ∘ other`: apply `other` first.
    pub fn after(&self, other: &Table) -> Table {
        Table(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Table {
        let mut out = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u32;
        }
        Table(out)
    }

    pub fn matches(&self, p: &Permutation) -> bool {
        (0..TABLE_SIZE).all(|i| p.apply(Atom::new(i)).id() == self.0[i as usize])
            && (TABLE_SIZE..TABLE_SIZE + 4).all(|i| p.apply(Atom::new(i)) == Atom::new(i))
    }
}

/// λ-terms with bound variables as de Bruijn indices and free variables as
/// names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Db {
    Bound(usize),
    Free(Atom),
    Hole,
    Lam(Box<Db>),
    App(Box<Db>, Box<Db>),
}

pub fn to_db(t: &FiniteTerm) -> Db {
    fn go(t: &FiniteTerm, scope: &mut Vec<Atom>) -> Db {
        match t {
            FiniteTerm::Var(a) => match scope.iter().rev().position(|b| b == a) {
                Some(i) => Db::Bound(i),
                None => Db::Free(*a),
            },
            FiniteTerm::Hole => Db::Hole,
            FiniteTerm::Cons(op, args) => match (&**op, args.as_slice()) {
                ("λ", [(bs, body)]) if bs.len() == 1 => {
                    scope.push(bs[0]);
                    let b = go(body, scope);
                    scope.pop();
                    Db::Lam(Box::new(b))
                }
                ("@", [(f, m), (a, n)]) if f.is_empty() && a.is_empty() => {
                    Db::App(Box::new(go(m, scope)), Box::new(go(n, scope)))
                }
                _ => panic!("not a λ-term: {t}"),
            },
        }
    }
    go(t, &mut Vec::new())
}

/// Substitution on locally nameless terms: replacement terms have no
/// dangling indices, so no shifting is needed and nothing can be captured.
pub fn db_subst(t: &Db, x: Atom, u: &Db) -> Db {
    match t {
        Db::Free(a) if *a == x => u.clone(),
        Db::Free(_) | Db::Bound(_) | Db::Hole => t.clone(),
        Db::Lam(b) => Db::Lam(Box::new(db_subst(b, x, u))),
        Db::App(m, n) => Db::App(Box::new(db_subst(m, x, u)), Box::new(db_subst(n, x, u))),
    }
}

/// A generic nameless form: bound occurrences as (block distance, position
/// in block), the last position winning for repeated atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Indexed {
    Bound(usize, usize),
    Free(Atom),
    Hole,
    Cons(String, Vec<(usize, Indexed)>),
}

pub fn indexed(t: &FiniteTerm) -> Indexed {
    fn go(t: &FiniteTerm, blocks: &mut Vec<Vec<Atom>>) -> Indexed {
        match t {
            FiniteTerm::Var(a) => {
                for (d, block) in blocks.iter().rev().enumerate() {
                    if let Some(i) = block.iter().rposition(|b| b == a) {
                        return Indexed::Bound(d, i);
                    }
                }
                Indexed::Free(*a)
            }
            FiniteTerm::Hole => Indexed::Hole,
            FiniteTerm::Cons(op, args) => Indexed::Cons(
                op.to_string(),
                args.iter()
                    .map(|(bs, body)| {
                        blocks.push(bs.clone());
                        let b = go(body, blocks);
                        blocks.pop();
                        (bs.len(), b)
                    })
                    .collect(),
            ),
        }
    }
    go(t, &mut Vec::new())
}

pub fn alpha_same(t: &FiniteTerm, u: &FiniteTerm) -> bool {
    indexed(t) == indexed(u)
}

/// Mixed truncation of a finite term, straight from the definition.
pub fn truncate_finite(sig: &Signature, t: &FiniteTerm, n: usize) -> FiniteTerm {
    if n == 0 {
        return FiniteTerm::Hole;
    }
    match t {
        FiniteTerm::Var(a) => FiniteTerm::Var(*a),
        FiniteTerm::Hole => FiniteTerm::Hole,
        FiniteTerm::Cons(op, args) => {
            let c = sig.constructor(op).expect("known constructor");
            FiniteTerm::Cons(
                op.clone(),
                args.iter()
                    .zip(&c.args)
                    .map(|((bs, body), spec)| {
                        let budget = if spec.mode == Mode::Coinductive { n - 1 } else { n };
                        (bs.clone(), truncate_finite(sig, body, budget))
                    })
                    .collect(),
            )
        }
    }
}

/// Truncation of a guarded equation system by expanding names in place.
pub fn expand(sig: &Signature, env: &TermEnv, n: usize) -> FiniteTerm {
    let defs: HashMap<&str, &Expr> = env.equations.iter().map(|(k, e)| (k.as_str(), e)).collect();
    fn go(sig: &Signature, defs: &HashMap<&str, &Expr>, e: &Expr, n: usize) -> FiniteTerm {
        if n == 0 {
            return FiniteTerm::Hole;
        }
        match e {
            Expr::Var(a) => FiniteTerm::Var(*a),
            Expr::Hole => FiniteTerm::Hole,
            Expr::Ref(name) => go(sig, defs, defs[name.as_str()], n),
            Expr::Cons(op, args) => {
                let c = sig.constructor(op).expect("known constructor");
                FiniteTerm::Cons(
                    op.clone(),
                    args.iter()
                        .zip(&c.args)
                        .map(|((bs, body), spec)| {
                            let budget = if spec.mode == Mode::Coinductive { n - 1 } else { n };
                            (bs.clone(), go(sig, defs, body, budget))
                        })
                        .collect(),
                )
            }
        }
    }
    go(sig, &defs, &env.root, n)
}

/// The equation system as an unfold step on expressions.
pub fn unfold_env(sig: &Signature, env: &TermEnv) -> MixedTerm {
    let defs: HashMap<String, Expr> = env.equations.iter().cloned().collect();
    let sig = sig.clone();
    fn layer(sig: &Signature, defs: &HashMap<String, Expr>, e: &Expr) -> Layer<Expr> {
        match e {
            Expr::Var(a) => Layer::Var(*a),
            Expr::Ref(n) => layer(sig, defs, &defs[n]),
            Expr::Hole => panic!("holes are not terms"),
            Expr::Cons(op, args) => {
                let c = sig.constructor(op).expect("known constructor");
                Layer::Cons(
                    op.clone(),
                    args.iter()
                        .zip(&c.args)
                        .map(|((bs, body), spec)| match spec.mode {
                            Mode::Coinductive => Arg::coinductive(bs.clone(), body.clone()),
                            Mode::Inductive => Arg::inductive(bs.clone(), layer(sig, defs, body)),
                        })
                        .collect(),
                )
            }
        }
    }
    MixedTerm::unfold(move |e: Expr| layer(&sig, &defs, &e), env.root.clone())
}

/// Distance by comparing truncations depth by depth.
pub fn naive_distance(
    t: &MixedTerm,
    u: &MixedTerm,
    precision: u32,
    same: impl Fn(&FiniteTerm, &FiniteTerm) -> bool,
) -> MetricResult {
    for k in 1..=precision {
        if !same(&t.truncate(k as usize), &u.truncate(k as usize)) {
            return MetricResult::Exactly(k - 1);
        }
    }
    MetricResult::AtMost(precision)
}

/// One step of substitution computed in a single recursive pass: binders
/// clashing with `x` or the atoms of `u` are renamed as they are met, the
/// variable is replaced by the head of `u`, and coinductive children become
/// pending tasks.
pub fn direct_step(t: &MixedTerm, x: Atom, u: &MixedTerm) -> Layer<Seeded<SubstTask>> {
    let mut avoid = u.atoms().cloned().unwrap_or_else(|| u.layer().visible_atoms());
    avoid.insert(x);
    let mut taken = avoid.union(&t.atoms().cloned().unwrap_or_else(|| t.layer().visible_atoms()));
    fn go(
        l: &Layer<Deferred>,
        x: Atom,
        u: &MixedTerm,
        avoid: &SupportSet,
        taken: &mut SupportSet,
    ) -> Layer<Seeded<SubstTask>> {
        match l {
            Layer::Var(a) if *a == x => u.layer().clone().map(&mut Seeded::Done),
            Layer::Var(a) => Layer::Var(*a),
            Layer::Cons(op, args) => Layer::Cons(
                op.clone(),
                args.iter()
                    .map(|arg| {
                        let mut p = Permutation::identity();
                        let mut binders = Vec::new();
                        for b in &arg.binders {
                            let b = p.apply(*b);
                            if avoid.contains(b) {
                                let z = mixterm::fresh(taken);
                                taken.insert(z);
                                p = Permutation::transposition(b, z).compose(&p);
                                binders.push(z);
                            } else {
                                binders.push(b);
                            }
                        }
                        let body = match &arg.body {
                            Slot::Inductive(l) => Slot::Inductive(Box::new(go(&l.act(&p), x, u, avoid, taken))),
                            Slot::Coinductive(d) => Slot::Coinductive(Seeded::Pending(SubstTask {
                                target: d.act(&p),
                                var: x,
                                replacement: u.clone(),
                            })),
                        };
                        Arg { binders, body }
                    })
                    .collect(),
            ),
        }
    }
    go(t.layer(), x, u, &avoid, &mut taken)
}

/// Observes a layer of seeds to depth `n`, resolving pending tasks with
/// `resolve`.
pub fn observe_seeds(
    l: &Layer<Seeded<SubstTask>>,
    n: usize,
    resolve: &dyn Fn(&SubstTask) -> MixedTerm,
) -> FiniteTerm {
    if n == 0 {
        return FiniteTerm::Hole;
    }
    match l {
        Layer::Var(a) => FiniteTerm::Var(*a),
        Layer::Cons(op, args) => FiniteTerm::Cons(
            op.clone(),
            args.iter()
                .map(|arg| {
                    let body = match &arg.body {
                        Slot::Inductive(l) => observe_seeds(l, n, resolve),
                        Slot::Coinductive(Seeded::Done(d)) => d.force().truncate(n - 1),
                        Slot::Coinductive(Seeded::Pending(task)) => resolve(task).truncate(n - 1),
                    };
                    (arg.binders.clone(), body)
                })
                .collect(),
        ),
    }
}

/// The sequence of seed kinds (`true` for pending) in slot order.
pub fn seed_shape(l: &Layer<Seeded<SubstTask>>) -> Vec<bool> {
    l.payloads()
        .into_iter()
        .map(|s| matches!(s, Seeded::Pending(_)))
        .collect()
}
