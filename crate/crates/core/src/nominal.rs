//! Nominal-sets primitives: atoms, finitely supported permutations, the
//! permutation action, supports, freshness, and name abstraction.
//!
//! Atoms are drawn from a countable universe ordered by their integer id.
//! [`fresh`] always returns the least atom outside a given finite set, so
//! every choice made by the library is reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A name. Only equality and the total order on ids are meaningful.
#[derive(Debug, Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(u32);

impl Atom {
    pub const fn new(id: u32) -> Atom {
        Atom(id)
    }

    pub const fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

/// A finite set of atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportSet(BTreeSet<Atom>);

impl SupportSet {
    pub fn new() -> SupportSet {
        SupportSet(BTreeSet::new())
    }

    pub fn singleton(a: Atom) -> SupportSet {
        SupportSet(BTreeSet::from([a]))
    }

    pub fn contains(&self, a: Atom) -> bool {
        self.0.contains(&a)
    }

    pub fn insert(&mut self, a: Atom) -> bool {
        self.0.insert(a)
    }

    pub fn remove(&mut self, a: Atom) -> bool {
        self.0.remove(&a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.0.iter().copied()
    }

    pub fn extend_from(&mut self, other: &SupportSet) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        SupportSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &SupportSet) -> SupportSet {
        SupportSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &SupportSet) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl FromIterator<Atom> for SupportSet {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        SupportSet(iter.into_iter().collect())
    }
}

impl Extend<Atom> for SupportSet {
    fn extend<I: IntoIterator<Item = Atom>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl<'a> IntoIterator for &'a SupportSet {
    type Item = Atom;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, Atom>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// The least atom not in `avoid`.
pub fn fresh(avoid: &SupportSet) -> Atom {
    let mut candidate = 0u32;
    // `avoid` iterates in increasing order, so the first gap is the answer.
    for a in avoid.iter() {
        if a.0 != candidate {
            break;
        }
        candidate += 1;
    }
    Atom(candidate)
}

/// The `n` least atoms not in `avoid`, in increasing order.
pub fn fresh_many(avoid: &SupportSet, n: usize) -> Vec<Atom> {
    let mut taken = avoid.clone();
    (0..n)
        .map(|_| {
            let a = fresh(&taken);
            taken.insert(a);
            a
        })
        .collect()
}

/// A finitely supported bijection on atoms.
///
/// Stored in canonical form: only atoms that move are kept in the map, so
/// structural equality coincides with equality of permutations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: BTreeMap<Atom, Atom>,
}

impl Permutation {
    pub fn identity() -> Permutation {
        Permutation::default()
    }

    /// The swap `(a b)`. Equal atoms give the identity.
    pub fn transposition(a: Atom, b: Atom) -> Permutation {
        let mut map = BTreeMap::new();
        if a != b {
            map.insert(a, b);
            map.insert(b, a);
        }
        Permutation { map }
    }

    /// Builds a permutation from an explicit finite mapping, checking that it
    /// is a bijection of its domain onto itself.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Atom, Atom)>) -> Option<Permutation> {
        let mut map = BTreeMap::new();
        for (a, b) in pairs {
            if map.insert(a, b).is_some_and(|old| old != b) {
                return None;
            }
        }
        let domain: BTreeSet<Atom> = map.keys().copied().collect();
        let image: BTreeSet<Atom> = map.values().copied().collect();
        if domain != image || image.len() != map.len() {
            return None;
        }
        map.retain(|a, b| a != b);
        Some(Permutation { map })
    }

    pub fn apply(&self, a: Atom) -> Atom {
        self.map.get(&a).copied().unwrap_or(a)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let mut map = BTreeMap::new();
        for a in self.map.keys().chain(other.map.keys()) {
            let b = self.apply(other.apply(*a));
            if b != *a {
                map.insert(*a, b);
            }
        }
        Permutation { map }
    }

    pub fn invert(&self) -> Permutation {
        Permutation {
            map: self.map.iter().map(|(a, b)| (*b, *a)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    /// The atoms moved by this permutation.
    pub fn domain(&self) -> SupportSet {
        self.map.keys().copied().collect()
    }

    /// A list of transpositions whose composition (applied right to left)
    /// equals `self`.
    pub fn transpositions(&self) -> Vec<(Atom, Atom)> {
        let mut rest = self.clone();
        let mut out = Vec::new();
        while let Some((&a, &b)) = rest.map.iter().next() {
            // (a b) ∘ rest fixes a, so rest = (a b) ∘ ((a b) ∘ rest).
            out.push((a, b));
            rest = Permutation::transposition(a, b).compose(&rest);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (Atom, Atom)> + '_ {
        self.map.iter().map(|(a, b)| (*a, *b))
    }
}

/// Values carrying an action of the permutation group.
pub trait Permutable: Sized {
    fn act(&self, p: &Permutation) -> Self;
}

/// Permutable values with a computable least finite support.
pub trait Nominal: Permutable {
    fn support(&self) -> SupportSet;
}

impl Permutable for Atom {
    fn act(&self, p: &Permutation) -> Self {
        p.apply(*self)
    }
}

impl Nominal for Atom {
    fn support(&self) -> SupportSet {
        SupportSet::singleton(*self)
    }
}

impl Permutable for SupportSet {
    fn act(&self, p: &Permutation) -> Self {
        self.iter().map(|a| p.apply(a)).collect()
    }
}

impl Nominal for SupportSet {
    fn support(&self) -> SupportSet {
        self.clone()
    }
}

impl<A: Permutable, B: Permutable> Permutable for (A, B) {
    fn act(&self, p: &Permutation) -> Self {
        (self.0.act(p), self.1.act(p))
    }
}

impl<A: Nominal, B: Nominal> Nominal for (A, B) {
    fn support(&self) -> SupportSet {
        self.0.support().union(&self.1.support())
    }
}

impl<T: Permutable> Permutable for Vec<T> {
    fn act(&self, p: &Permutation) -> Self {
        self.iter().map(|v| v.act(p)).collect()
    }
}

impl<T: Nominal> Nominal for Vec<T> {
    fn support(&self) -> SupportSet {
        let mut s = SupportSet::new();
        for v in self {
            s.extend_from(&v.support());
        }
        s
    }
}

impl<T: Permutable> Permutable for Option<T> {
    fn act(&self, p: &Permutation) -> Self {
        self.as_ref().map(|v| v.act(p))
    }
}

impl<T: Nominal> Nominal for Option<T> {
    fn support(&self) -> SupportSet {
        self.as_ref().map(Nominal::support).unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NominalError {
    #[error("atom {0} is not fresh for the abstraction")]
    NotFresh(Atom),
}

/// A representative `⟨x⟩a` of an α-class of pairs `(x, a)`.
///
/// Equality is the abstraction relation, not equality of representatives.
#[derive(Debug, Clone)]
pub struct Abstraction<T> {
    binder: Atom,
    body: T,
}

impl<T> Abstraction<T> {
    pub fn new(binder: Atom, body: T) -> Abstraction<T> {
        Abstraction { binder, body }
    }

    pub fn binder(&self) -> Atom {
        self.binder
    }

    pub fn body(&self) -> &T {
        &self.body
    }

    pub fn into_parts(self) -> (Atom, T) {
        (self.binder, self.body)
    }
}

impl<T: Permutable> Abstraction<T> {
    /// Compares two abstractions with a caller-supplied body equality,
    /// renaming both binders to `witness`. The witness must avoid the
    /// supports of both bodies and both binders.
    pub fn eq_at(&self, other: &Abstraction<T>, witness: Atom, eq: impl Fn(&T, &T) -> bool) -> bool {
        let left = self.body.act(&Permutation::transposition(self.binder, witness));
        let right = other.body.act(&Permutation::transposition(other.binder, witness));
        eq(&left, &right)
    }
}

impl<T: Nominal> Abstraction<T> {
    /// The atoms a witness for [`abs_eq`] against `other` must avoid.
    pub fn witness_avoid(&self, other: &Abstraction<T>) -> SupportSet {
        let mut avoid = self.body.support().union(&other.body.support());
        avoid.insert(self.binder);
        avoid.insert(other.binder);
        avoid
    }

    /// Concretion `A @ y`.
    pub fn concrete(&self, y: Atom) -> Result<T, NominalError> {
        if self.support().contains(y) {
            return Err(NominalError::NotFresh(y));
        }
        Ok(self.body.act(&Permutation::transposition(self.binder, y)))
    }
}

impl<T: Permutable> Permutable for Abstraction<T> {
    fn act(&self, p: &Permutation) -> Self {
        Abstraction {
            binder: p.apply(self.binder),
            body: self.body.act(p),
        }
    }
}

impl<T: Nominal> Nominal for Abstraction<T> {
    fn support(&self) -> SupportSet {
        let mut s = self.body.support();
        s.remove(self.binder);
        s
    }
}

/// The abstraction relation: `⟨x⟩a ∼ ⟨x'⟩a'` iff `(x y)·a = (x' y)·a'` for
/// some `y` fresh for everything involved. One witness suffices.
pub fn abs_eq<T: Nominal + PartialEq>(a: &Abstraction<T>, b: &Abstraction<T>) -> bool {
    let witness = fresh(&a.witness_avoid(b));
    a.eq_at(b, witness, |l, r| l == r)
}

impl<T: Nominal + PartialEq> PartialEq for Abstraction<T> {
    fn eq(&self, other: &Self) -> bool {
        abs_eq(self, other)
    }
}

impl<T: Nominal + Eq> Eq for Abstraction<T> {}
