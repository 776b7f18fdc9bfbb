//! Core domain types: networks, strategies, profiles, validation, payoffs,
//! and graph classification.

mod classify;
mod network;
mod profile;

pub use classify::{classify_graph, cycle_order, GraphClass};
pub use network::{ModelError, NetworkBuilder, SocialNetwork, ValidationError};
pub use profile::JointStrategy;

use std::fmt;

use serde::{Deserialize, Serialize};

/// Opaque agent identifier. Canonical ordering is lexicographic and is used
/// everywhere determinism matters (iteration, witness selection, tie-breaks).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub String);

impl NodeId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<T: Into<String>> From<T> for NodeId {
    fn from(s: T) -> NodeId {
        NodeId(s.into())
    }
}

/// Opaque product identifier, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProductId(pub String);

impl ProductId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ProductId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<T: Into<String>> From<T> for ProductId {
    fn from(s: T) -> ProductId {
        ProductId(s.into())
    }
}

/// One agent's choice: a product, or opting out entirely.
///
/// The derived ordering (`Null` first, then products lexicographically) is
/// the canonical strategy order; joint strategies compare lexicographically
/// over it in canonical node order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    /// The opt-out strategy: adopt nothing, payoff 0.
    Null,
    Product(ProductId),
}

impl Strategy {
    pub fn is_null(&self) -> bool {
        matches!(self, Strategy::Null)
    }

    pub fn product(&self) -> Option<&ProductId> {
        match self {
            Strategy::Null => None,
            Strategy::Product(p) => Some(p),
        }
    }
}

impl fmt::Display for Strategy {
    /// Null renders as `_`, matching the profile labels used in DOT exports
    /// and trace files.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Null => f.write_str("_"),
            Strategy::Product(p) => f.write_str(p.as_str()),
        }
    }
}

impl From<ProductId> for Strategy {
    fn from(p: ProductId) -> Strategy {
        Strategy::Product(p)
    }
}

/// Syntactic classification of a profile by how many agents opted out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NEClassification {
    /// Every agent opted out.
    Trivial,
    /// Some but not all agents opted out. Together with [`Determined`] this
    /// covers every non-trivial profile.
    ///
    /// [`Determined`]: NEClassification::Determined
    NonTrivialMixed,
    /// No agent opted out.
    Determined,
}

impl NEClassification {
    /// A determined profile is also non-trivial.
    pub fn is_non_trivial(&self) -> bool {
        !matches!(self, NEClassification::Trivial)
    }
}

impl fmt::Display for NEClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NEClassification::Trivial => "trivial",
            NEClassification::NonTrivialMixed => "non-trivial-mixed",
            NEClassification::Determined => "determined",
        })
    }
}
