//! Random signatures, terms, equation systems and permutations for tests.
//!
//! Generated equation systems are guarded by construction and contain at
//! most one name reference per equation, so their truncations grow linearly
//! with depth.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::nominal::{Atom, Permutation, SupportSet};
use crate::signature::{ArgSpec, Constructor, Mode, Signature};
use crate::term::{Expr, FiniteTerm, TermEnv};

/// The atoms `0..n`.
pub fn pool(n: u32) -> Vec<Atom> {
    (0..n).map(Atom::new).collect()
}

/// A product of `swaps` random transpositions of atoms from `atoms`.
pub fn permutation(rng: &mut impl Rng, atoms: &[Atom], swaps: usize) -> Permutation {
    let mut p = Permutation::identity();
    for _ in 0..swaps {
        let a = *atoms.choose(rng).expect("non-empty pool");
        let b = *atoms.choose(rng).expect("non-empty pool");
        p = Permutation::transposition(a, b).compose(&p);
    }
    p
}

/// A random signature with up to four constructors.
pub fn signature(rng: &mut impl Rng) -> Signature {
    let n = rng.gen_range(1..=4);
    let constructors = (0..n)
        .map(|i| {
            let arity = rng.gen_range(0..=3);
            let args = (0..arity)
                .map(|_| {
                    let mode = if rng.gen_bool(0.5) {
                        Mode::Coinductive
                    } else {
                        Mode::Inductive
                    };
                    ArgSpec::new(rng.gen_range(0..=2), mode)
                })
                .collect();
            Constructor::new(format!("c{i}"), args)
        })
        .collect();
    Signature::new("random", constructors)
}

/// A random finite term of height at most `depth`; binders and variables
/// are drawn from `atoms`.
pub fn finite_term(rng: &mut impl Rng, sig: &Signature, atoms: &[Atom], depth: usize) -> FiniteTerm {
    let leaves: Vec<&Constructor> = sig.constructors.iter().filter(|c| c.args.is_empty()).collect();
    let var = |rng: &mut _| FiniteTerm::Var(*atoms.choose(rng).expect("non-empty pool"));
    if sig.constructors.is_empty() || (depth == 0 && leaves.is_empty()) || rng.gen_bool(0.2) {
        return var(rng);
    }
    let c = if depth == 0 {
        leaves.choose(rng).copied().expect("checked above")
    } else {
        sig.constructors.choose(rng).expect("checked above")
    };
    let args = c
        .args
        .iter()
        .map(|a| {
            let binders = (0..a.binders).map(|_| *atoms.choose(rng).expect("non-empty pool")).collect();
            (binders, finite_term(rng, sig, atoms, depth.saturating_sub(1)))
        })
        .collect();
    FiniteTerm::cons(&c.name, args)
}

struct EnvGen<'a, R> {
    rng: &'a mut R,
    sig: &'a Signature,
    atoms: &'a [Atom],
    names: usize,
    current: usize,
    referenced: bool,
}

impl<R: Rng> EnvGen<'_, R> {
    fn expr(&mut self, depth: usize) -> Expr {
        let leaf = Expr::Var(*self.atoms.choose(self.rng).expect("non-empty pool"));
        if self.sig.constructors.is_empty() || self.rng.gen_bool(0.15) {
            return leaf;
        }
        let candidates: Vec<&Constructor> = if depth == 0 {
            self.sig.constructors.iter().filter(|c| c.args.is_empty()).collect()
        } else {
            self.sig.constructors.iter().collect()
        };
        let Some(c) = candidates.choose(self.rng).copied() else {
            return leaf;
        };
        let args = c
            .args
            .iter()
            .map(|a| {
                let binders = (0..a.binders)
                    .map(|_| *self.atoms.choose(self.rng).expect("non-empty pool"))
                    .collect();
                (binders, self.arg(a.mode, depth))
            })
            .collect();
        Expr::cons(&c.name, args)
    }

    fn arg(&mut self, mode: Mode, depth: usize) -> Expr {
        if !self.referenced {
            // Coinductive positions may refer to any name; inductive ones
            // only to later equations, which keeps every cycle guarded.
            let target = match mode {
                Mode::Coinductive if self.rng.gen_bool(0.6) => Some(self.rng.gen_range(0..self.names)),
                Mode::Inductive if self.current + 1 < self.names && self.rng.gen_bool(0.2) => {
                    Some(self.rng.gen_range(self.current + 1..self.names))
                }
                _ => None,
            };
            if let Some(j) = target {
                self.referenced = true;
                return Expr::name(&format!("T{j}"));
            }
        }
        self.expr(depth.saturating_sub(1))
    }
}

/// A random guarded equation system `T0 .. T{names-1}` with root `T0`.
pub fn regular_env(rng: &mut impl Rng, sig: &Signature, atoms: &[Atom], names: usize, depth: usize) -> TermEnv {
    let mut equations = Vec::new();
    for i in 0..names {
        let mut g = EnvGen {
            rng: &mut *rng,
            sig,
            atoms,
            names,
            current: i,
            referenced: false,
        };
        equations.push((format!("T{i}"), g.expr(depth)));
    }
    TermEnv::new(equations, Expr::name("T0"))
}

fn free_in(e: &Expr, bound: &mut Vec<Atom>, out: &mut SupportSet) {
    match e {
        Expr::Var(a) if !bound.contains(a) => {
            out.insert(*a);
        }
        Expr::Cons(_, args) => {
            for (bs, body) in args {
                let n = bound.len();
                bound.extend(bs);
                free_in(body, bound, out);
                bound.truncate(n);
            }
        }
        _ => {}
    }
}

/// Atoms occurring free in some equation read on its own. Every free atom
/// of the unfolded term is among them.
pub fn syntactic_free(env: &TermEnv) -> SupportSet {
    let mut out = SupportSet::new();
    for e in env.equations.iter().map(|(_, e)| e).chain([&env.root]) {
        free_in(e, &mut Vec::new(), &mut out);
    }
    out
}

/// An α-variant of `env`: a random permutation of `atoms` fixing
/// [`syntactic_free`], applied to every equation.
pub fn alpha_variant(rng: &mut impl Rng, env: &TermEnv, atoms: &[Atom]) -> TermEnv {
    use crate::nominal::Permutable;
    let fixed = syntactic_free(env);
    let movable: Vec<Atom> = atoms.iter().copied().filter(|a| !fixed.contains(*a)).collect();
    if movable.is_empty() {
        return env.clone();
    }
    let p = permutation(rng, &movable, 3);
    env.act(&p)
}

/// Replaces one variable occurrence of `env` by a random atom of `atoms`.
pub fn mutate(rng: &mut impl Rng, env: &TermEnv, atoms: &[Atom]) -> TermEnv {
    fn count(e: &Expr) -> usize {
        match e {
            Expr::Var(_) => 1,
            Expr::Cons(_, args) => args.iter().map(|(_, b)| count(b)).sum(),
            _ => 0,
        }
    }
    fn replace(e: &mut Expr, k: &mut usize, a: Atom) {
        match e {
            Expr::Var(v) => {
                if *k == 0 {
                    *v = a;
                }
                *k = k.wrapping_sub(1);
            }
            Expr::Cons(_, args) => args.iter_mut().for_each(|(_, b)| replace(b, k, a)),
            _ => {}
        }
    }
    let mut out = env.clone();
    let total: usize = out.equations.iter().map(|(_, e)| count(e)).sum();
    if total == 0 {
        return out;
    }
    let mut k = rng.gen_range(0..total);
    let a = *atoms.choose(rng).expect("non-empty pool");
    for (_, e) in &mut out.equations {
        replace(e, &mut k, a);
    }
    out
}
