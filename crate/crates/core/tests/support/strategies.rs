//! proptest strategies for atoms, permutations and λ-terms.

use proptest::prelude::*;

use mixterm::nominal::{Atom, Permutation};
use mixterm::FiniteTerm;

pub fn atom() -> impl Strategy<Value = Atom> {
    (0u32..5).prop_map(Atom::new)
}

pub fn perm() -> impl Strategy<Value = Permutation> {
    prop::collection::vec((0u32..8, 0u32..8), 0..5).prop_map(|swaps| {
        swaps.into_iter().fold(Permutation::identity(), |p, (a, b)| {
            Permutation::transposition(Atom::new(a), Atom::new(b)).compose(&p)
        })
    })
}

pub fn lam(x: Atom, b: FiniteTerm) -> FiniteTerm {
    FiniteTerm::cons("λ", vec![(vec![x], b)])
}

pub fn app(f: FiniteTerm, a: FiniteTerm) -> FiniteTerm {
    FiniteTerm::cons("@", vec![(vec![], f), (vec![], a)])
}

pub fn lambda_term() -> impl Strategy<Value = FiniteTerm> {
    atom().prop_map(FiniteTerm::Var).prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            (atom(), inner.clone()).prop_map(|(x, b)| lam(x, b)),
            (inner.clone(), inner).prop_map(|(f, a)| app(f, a)),
        ]
    })
}
