//! Key sets and monotone AND/OR formulas over guard keys: the certificate a
//! device evaluates to decide inside vs outside.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::guard::Guard;
use crate::geom::Point;

/// The set of guard keys whose cones contain some point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct KeySet(BTreeSet<String>);

impl KeySet {
    pub fn new() -> KeySet {
        KeySet(BTreeSet::new())
    }

    pub fn insert(&mut self, key: impl Into<String>) {
        self.0.insert(key.into());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.0.contains(key)
    }

    pub fn is_subset(&self, other: &KeySet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|s| s.as_str())
    }
}

impl<S: Into<String>> FromIterator<S> for KeySet {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> KeySet {
        KeySet(iter.into_iter().map(Into::into).collect())
    }
}

/// Keys of all guards whose cones contain `p`.
pub fn key_set_at(guards: &[Guard], p: &Point) -> KeySet {
    guards
        .iter()
        .filter(|g| g.cone_contains(p))
        .map(|g| g.key())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("and/or nodes need at least one child")]
    EmptyNode,
    #[error("formula references unknown key {0:?}")]
    UnknownKey(String),
}

/// Monotone Boolean formula: AND/OR tree over keys, no negation anywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonotoneFormula {
    Key(String),
    And(Vec<MonotoneFormula>),
    Or(Vec<MonotoneFormula>),
}

impl MonotoneFormula {
    pub fn key(k: impl Into<String>) -> MonotoneFormula {
        MonotoneFormula::Key(k.into())
    }

    pub fn and(children: Vec<MonotoneFormula>) -> MonotoneFormula {
        debug_assert!(!children.is_empty());
        MonotoneFormula::And(children)
    }

    pub fn or(children: Vec<MonotoneFormula>) -> MonotoneFormula {
        debug_assert!(!children.is_empty());
        MonotoneFormula::Or(children)
    }

    /// Standard evaluation; a leaf is true iff its key is broadcast at the
    /// point.
    pub fn evaluate(&self, keys: &KeySet) -> bool {
        match self {
            MonotoneFormula::Key(k) => keys.contains(k),
            MonotoneFormula::And(cs) => cs.iter().all(|c| c.evaluate(keys)),
            MonotoneFormula::Or(cs) => cs.iter().any(|c| c.evaluate(keys)),
        }
    }

    /// Every key referenced by some leaf.
    pub fn referenced_keys(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_keys(&mut out);
        out
    }

    fn collect_keys<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            MonotoneFormula::Key(k) => {
                out.insert(k.as_str());
            }
            MonotoneFormula::And(cs) | MonotoneFormula::Or(cs) => {
                for c in cs {
                    c.collect_keys(out);
                }
            }
        }
    }

    /// Checks structural invariants: nonempty nodes, leaves drawn from
    /// `known_keys`.
    pub fn validate(&self, known_keys: &BTreeSet<String>) -> Result<(), FormulaError> {
        match self {
            MonotoneFormula::Key(k) => {
                if !known_keys.contains(k) {
                    return Err(FormulaError::UnknownKey(k.clone()));
                }
            }
            MonotoneFormula::And(cs) | MonotoneFormula::Or(cs) => {
                if cs.is_empty() {
                    return Err(FormulaError::EmptyNode);
                }
                for c in cs {
                    c.validate(known_keys)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for MonotoneFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonotoneFormula::Key(k) => write!(f, "{}", k),
            MonotoneFormula::And(cs) => {
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, ")")
            }
            MonotoneFormula::Or(cs) => {
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, ")")
            }
        }
    }
}

// JSON encoding: a leaf is its key string, an internal node is
// ["and" | "or", child, child, ...].
impl Serialize for MonotoneFormula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            MonotoneFormula::Key(k) => serializer.serialize_str(k),
            MonotoneFormula::And(cs) => {
                let mut seq = serializer.serialize_seq(Some(cs.len() + 1))?;
                seq.serialize_element("and")?;
                for c in cs {
                    seq.serialize_element(c)?;
                }
                seq.end()
            }
            MonotoneFormula::Or(cs) => {
                let mut seq = serializer.serialize_seq(Some(cs.len() + 1))?;
                seq.serialize_element("or")?;
                for c in cs {
                    seq.serialize_element(c)?;
                }
                seq.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for MonotoneFormula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = MonotoneFormula;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a key string or [\"and\"|\"or\", formula, ...]")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<MonotoneFormula, E> {
                if v.is_empty() {
                    return Err(E::custom("formula key must be nonempty"));
                }
                Ok(MonotoneFormula::Key(v.to_string()))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<MonotoneFormula, A::Error> {
                let op: String = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::custom("empty formula node"))?;
                let mut children = Vec::new();
                while let Some(child) = seq.next_element::<MonotoneFormula>()? {
                    children.push(child);
                }
                if children.is_empty() {
                    return Err(de::Error::custom("and/or nodes need at least one child"));
                }
                match op.as_str() {
                    "and" => Ok(MonotoneFormula::And(children)),
                    "or" => Ok(MonotoneFormula::Or(children)),
                    other => Err(de::Error::custom(format!(
                        "unknown formula operator {other:?} (expected \"and\" or \"or\")"
                    ))),
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}
