//! Mixed binding signatures: constructors whose arguments each bind a number
//! of atoms and are either inductive or coinductive.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const LAMBDA: &str = "λ";
pub const APP: &str = "@";

#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "ind")]
    Inductive,
    #[serde(rename = "coind")]
    Coinductive,
}

impl Mode {
    pub fn from_bit(coinductive: bool) -> Mode {
        if coinductive {
            Mode::Coinductive
        } else {
            Mode::Inductive
        }
    }

    pub fn is_coinductive(self) -> bool {
        self == Mode::Coinductive
    }
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArgSpec {
    pub binders: usize,
    pub mode: Mode,
}

impl ArgSpec {
    pub fn new(binders: usize, mode: Mode) -> ArgSpec {
        ArgSpec { binders, mode }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constructor {
    pub name: String,
    #[serde(default)]
    pub args: Vec<ArgSpec>,
}

impl Constructor {
    pub fn new(name: impl Into<String>, args: Vec<ArgSpec>) -> Constructor {
        Constructor {
            name: name.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate constructor `{0}`")]
    DuplicateConstructor(String),
    #[error("constructor with an empty name")]
    EmptyName,
    #[error("malformed signature file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub constructors: Vec<Constructor>,
}

impl Signature {
    pub fn new(name: impl Into<String>, constructors: Vec<Constructor>) -> Signature {
        Signature {
            name: name.into(),
            constructors,
        }
    }

    pub fn validate(&self) -> Result<(), SignatureError> {
        let mut seen = HashSet::new();
        for c in &self.constructors {
            if c.name.is_empty() {
                return Err(SignatureError::EmptyName);
            }
            if !seen.insert(c.name.as_str()) {
                return Err(SignatureError::DuplicateConstructor(c.name.clone()));
            }
        }
        Ok(())
    }

    pub fn constructor(&self, name: &str) -> Option<&Constructor> {
        self.constructors.iter().find(|c| c.name == name)
    }

    /// Parses and validates the JSON signature format.
    pub fn from_json(text: &str) -> Result<Signature, SignatureError> {
        let sig: Signature =
            serde_json::from_str(text).map_err(|e| SignatureError::Format(e.to_string()))?;
        sig.validate()?;
        Ok(sig)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("signatures always serialize")
    }

    /// `{λ, @}` with `λ: ((1,a))` and `@: ((0,b),(0,c))`.
    pub fn lambda(a: bool, b: bool, c: bool) -> Signature {
        let tag = |bit: bool| if bit { '1' } else { '0' };
        Signature::new(
            format!("lambda_{}{}{}", tag(a), tag(b), tag(c)),
            vec![
                Constructor::new(LAMBDA, vec![ArgSpec::new(1, Mode::from_bit(a))]),
                Constructor::new(
                    APP,
                    vec![
                        ArgSpec::new(0, Mode::from_bit(b)),
                        ArgSpec::new(0, Mode::from_bit(c)),
                    ],
                ),
            ],
        )
    }

    /// Right-infinitary binary trees: `node: ((0,ind),(0,coind))`, `leaf: ()`.
    pub fn rtree() -> Signature {
        Signature::new(
            "rtree",
            vec![
                Constructor::new(
                    "node",
                    vec![
                        ArgSpec::new(0, Mode::Inductive),
                        ArgSpec::new(0, Mode::Coinductive),
                    ],
                ),
                Constructor::new("leaf", vec![]),
            ],
        )
    }

    /// The mode triple `(a, b, c)` if this is structurally one of the eight
    /// λ-calculus signatures, whatever its declared name or constructor order.
    pub fn lambda_modes(&self) -> Option<(bool, bool, bool)> {
        if self.constructors.len() != 2 {
            return None;
        }
        let lam = self.constructor(LAMBDA)?;
        let app = self.constructor(APP)?;
        match (lam.args.as_slice(), app.args.as_slice()) {
            ([l], [f, x]) if l.binders == 1 && f.binders == 0 && x.binders == 0 => Some((
                l.mode.is_coinductive(),
                f.mode.is_coinductive(),
                x.mode.is_coinductive(),
            )),
            _ => None,
        }
    }

    /// First witness for each of the three non-triviality clauses.
    pub fn nontriviality(&self) -> Nontriviality<'_> {
        let find = |pred: &dyn Fn(&Constructor) -> bool| {
            self.constructors
                .iter()
                .find(|c| pred(c))
                .map(|c| c.name.as_str())
        };
        Nontriviality {
            binder: find(&|c| c.args.iter().any(|a| a.binders >= 1)),
            branching: find(&|c| c.args.len() >= 2),
            coinductive: find(&|c| c.args.iter().any(|a| a.mode.is_coinductive())),
        }
    }

    pub fn is_nontrivial(&self) -> bool {
        self.nontriviality().holds()
    }
}

/// Witnesses for non-triviality: a constructor with a binding argument, one
/// with at least two arguments, and one with a coinductive argument. The
/// three may coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Nontriviality<'a> {
    pub binder: Option<&'a str>,
    pub branching: Option<&'a str>,
    pub coinductive: Option<&'a str>,
}

impl Nontriviality<'_> {
    pub fn holds(&self) -> bool {
        self.binder.is_some() && self.branching.is_some() && self.coinductive.is_some()
    }

    /// Names of the failing clauses, in clause order.
    pub fn missing(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.binder.is_none() {
            out.push("no binding argument");
        }
        if self.branching.is_none() {
            out.push("no constructor with two arguments");
        }
        if self.coinductive.is_none() {
            out.push("no coinductive argument");
        }
        out
    }
}
