use std::collections::HashMap;
use std::sync::Arc;

use super::layer::{Arg, FiniteTerm, Layer, Op};
use super::mixed::{check_arity, Deferred, MixedTerm};
use super::TermError;
use crate::nominal::{Atom, Permutable, Permutation, SupportSet};
use crate::signature::{Mode, Signature};

/// Term syntax over the signature, atoms, and equation names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(Atom),
    Ref(String),
    Hole,
    Cons(Op, Vec<(Vec<Atom>, Expr)>),
}

impl Expr {
    pub fn cons(op: &str, args: Vec<(Vec<Atom>, Expr)>) -> Expr {
        Expr::Cons(Op::from(op), args)
    }

    pub fn name(n: &str) -> Expr {
        Expr::Ref(n.to_string())
    }

    fn collect_atoms(&self, out: &mut SupportSet) {
        match self {
            Expr::Var(a) => {
                out.insert(*a);
            }
            Expr::Ref(_) | Expr::Hole => {}
            Expr::Cons(_, args) => {
                for (bs, e) in args {
                    out.extend(bs.iter().copied());
                    e.collect_atoms(out);
                }
            }
        }
    }

    /// The finite term, if the expression mentions no equation name.
    pub fn to_finite(&self) -> Option<FiniteTerm> {
        Some(match self {
            Expr::Var(a) => FiniteTerm::Var(*a),
            Expr::Ref(_) => return None,
            Expr::Hole => FiniteTerm::Hole,
            Expr::Cons(op, args) => FiniteTerm::Cons(
                op.clone(),
                args.iter()
                    .map(|(bs, e)| Some((bs.clone(), e.to_finite()?)))
                    .collect::<Option<_>>()?,
            ),
        })
    }
}

impl From<&FiniteTerm> for Expr {
    fn from(t: &FiniteTerm) -> Expr {
        match t {
            FiniteTerm::Var(a) => Expr::Var(*a),
            FiniteTerm::Hole => Expr::Hole,
            FiniteTerm::Cons(op, args) => Expr::Cons(
                op.clone(),
                args.iter().map(|(bs, t)| (bs.clone(), Expr::from(t))).collect(),
            ),
        }
    }
}

/// A finite system of mutually recursive term equations with a root
/// expression. Names are expanded syntactically: a binder around a name
/// captures the free atoms of that name's equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermEnv {
    pub equations: Vec<(String, Expr)>,
    pub root: Expr,
}

impl TermEnv {
    pub fn new(equations: Vec<(String, Expr)>, root: Expr) -> TermEnv {
        TermEnv { equations, root }
    }

    /// An environment without equations.
    pub fn closed(root: Expr) -> TermEnv {
        TermEnv::new(Vec::new(), root)
    }

    /// Every atom mentioned by the system. Bounds the atoms of the unfolded
    /// term at every depth.
    pub fn atoms(&self) -> SupportSet {
        let mut out = SupportSet::new();
        for (_, e) in &self.equations {
            e.collect_atoms(&mut out);
        }
        self.root.collect_atoms(&mut out);
        out
    }

    /// Checks names, constructors, arities and guardedness.
    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        self.compile(sig).map(|_| ())
    }

    pub(crate) fn compile(&self, sig: &Signature) -> Result<Arc<CompiledEnv>, TermError> {
        let mut index = HashMap::new();
        for (i, (name, _)) in self.equations.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(TermError::DuplicateName(name.clone()));
            }
        }
        let mut env = CompiledEnv {
            nodes: Vec::new(),
            names: self.equations.iter().map(|(n, _)| n.clone()).collect(),
            defs: Vec::new(),
            root: 0,
            atoms: Arc::new(self.atoms()),
        };
        let mut builder = Builder {
            sig,
            index: &index,
            env: &mut env,
        };
        let defs = self
            .equations
            .iter()
            .map(|(_, e)| builder.node(e))
            .collect::<Result<Vec<_>, _>>()?;
        let root = builder.node(&self.root)?;
        env.defs = defs;
        env.root = root;
        env.check_guarded()?;
        Ok(Arc::new(env))
    }
}

impl Permutable for Expr {
    fn act(&self, p: &Permutation) -> Expr {
        match self {
            Expr::Var(a) => Expr::Var(p.apply(*a)),
            Expr::Ref(n) => Expr::Ref(n.clone()),
            Expr::Hole => Expr::Hole,
            Expr::Cons(op, args) => Expr::Cons(
                op.clone(),
                args.iter().map(|(bs, e)| (bs.act(p), e.act(p))).collect(),
            ),
        }
    }
}

/// Renames atoms in every equation, which renames the unfolded term.
impl Permutable for TermEnv {
    fn act(&self, p: &Permutation) -> TermEnv {
        TermEnv {
            equations: self.equations.iter().map(|(n, e)| (n.clone(), e.act(p))).collect(),
            root: self.root.act(p),
        }
    }
}

impl From<Expr> for TermEnv {
    fn from(root: Expr) -> TermEnv {
        TermEnv::closed(root)
    }
}

impl MixedTerm {
    /// The unfolding of the root of a guarded equation system.
    pub fn from_equations(sig: &Signature, env: &TermEnv) -> Result<MixedTerm, TermError> {
        let compiled = env.compile(sig)?;
        let root = compiled.root;
        Ok(compiled.term_at(root))
    }
}

#[derive(Debug)]
pub(crate) enum ENode {
    Var(Atom),
    Ref(usize),
    Cons(Op, Vec<EArg>),
}

#[derive(Debug)]
pub(crate) struct EArg {
    pub binders: Vec<Atom>,
    pub mode: Mode,
    pub node: usize,
}

/// An equation system flattened into an arena of expression nodes.
#[derive(Debug)]
pub(crate) struct CompiledEnv {
    pub nodes: Vec<ENode>,
    pub names: Vec<String>,
    pub defs: Vec<usize>,
    pub root: usize,
    pub atoms: Arc<SupportSet>,
}

struct Builder<'a> {
    sig: &'a Signature,
    index: &'a HashMap<&'a str, usize>,
    env: &'a mut CompiledEnv,
}

impl Builder<'_> {
    fn push(&mut self, n: ENode) -> usize {
        self.env.nodes.push(n);
        self.env.nodes.len() - 1
    }

    fn node(&mut self, e: &Expr) -> Result<usize, TermError> {
        let n = match e {
            Expr::Var(a) => ENode::Var(*a),
            Expr::Hole => return Err(TermError::UnexpectedHole),
            Expr::Ref(name) => ENode::Ref(
                *self
                    .index
                    .get(name.as_str())
                    .ok_or_else(|| TermError::UndefinedName(name.clone()))?,
            ),
            Expr::Cons(op, args) => {
                let sig = self.sig;
                let c = sig
                    .constructor(op)
                    .ok_or_else(|| TermError::UnknownConstructor(op.to_string()))?;
                check_arity(op, c.args.iter().map(|a| a.binders), args.iter().map(|(b, _)| b.len()))?;
                let args = c
                    .args
                    .iter()
                    .zip(args)
                    .map(|(spec, (binders, body))| {
                        Ok(EArg {
                            binders: binders.clone(),
                            mode: spec.mode,
                            node: self.node(body)?,
                        })
                    })
                    .collect::<Result<_, TermError>>()?;
                ENode::Cons(op.clone(), args)
            }
        };
        Ok(self.push(n))
    }
}

impl CompiledEnv {
    /// Follows name references to a variable or constructor node.
    pub fn resolve(&self, mut node: usize) -> usize {
        while let ENode::Ref(m) = self.nodes[node] {
            node = self.defs[m];
        }
        node
    }

    pub fn term_at(self: &Arc<Self>, node: usize) -> MixedTerm {
        MixedTerm::from_shared(self.layer_at(node), Some(Arc::clone(&self.atoms)))
    }

    fn layer_at(self: &Arc<Self>, node: usize) -> Layer<Deferred> {
        match &self.nodes[self.resolve(node)] {
            ENode::Var(a) => Layer::Var(*a),
            ENode::Ref(_) => unreachable!("resolved"),
            ENode::Cons(op, args) => Layer::Cons(
                op.clone(),
                args.iter()
                    .map(|a| match a.mode {
                        Mode::Inductive => Arg::inductive(a.binders.clone(), self.layer_at(a.node)),
                        Mode::Coinductive => {
                            let env = Arc::clone(self);
                            let child = a.node;
                            Arg::coinductive(a.binders.clone(), Deferred::new(move || env.term_at(child)))
                        }
                    })
                    .collect(),
            ),
        }
    }

    /// Edges `(to, guarded)` leaving the equation `def`.
    fn edges(&self, def: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        let mut stack = vec![(self.defs[def], false)];
        while let Some((n, guarded)) = stack.pop() {
            match &self.nodes[n] {
                ENode::Var(_) => {}
                ENode::Ref(m) => out.push((*m, guarded)),
                ENode::Cons(_, args) => {
                    for a in args {
                        stack.push((a.node, guarded || a.mode.is_coinductive()));
                    }
                }
            }
        }
        out
    }

    /// Rejects any cycle of references that never crosses a coinductive
    /// argument.
    fn check_guarded(&self) -> Result<(), TermError> {
        let unguarded: Vec<Vec<usize>> = (0..self.defs.len())
            .map(|d| {
                self.edges(d)
                    .into_iter()
                    .filter(|(_, g)| !g)
                    .map(|(m, _)| m)
                    .collect()
            })
            .collect();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.defs.len()];
        let mut path = Vec::new();
        fn visit(
            v: usize,
            graph: &[Vec<usize>],
            state: &mut [u8],
            path: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            state[v] = 1;
            path.push(v);
            for &w in &graph[v] {
                if state[w] == 1 {
                    let start = path.iter().position(|&p| p == w).unwrap();
                    let mut cycle = path[start..].to_vec();
                    cycle.push(w);
                    return Some(cycle);
                }
                if state[w] == 0 {
                    if let Some(c) = visit(w, graph, state, path) {
                        return Some(c);
                    }
                }
            }
            path.pop();
            state[v] = 2;
            None
        }
        for v in 0..self.defs.len() {
            if state[v] == 0 {
                if let Some(cycle) = visit(v, &unguarded, &mut state, &mut path) {
                    return Err(TermError::Unguarded(
                        cycle.into_iter().map(|i| self.names[i].clone()).collect(),
                    ));
                }
            }
        }
        Ok(())
    }
}
