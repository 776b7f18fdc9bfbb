//! The on-disk network and profile formats: JSON documents with rationals
//! kept as strings (`"p/q"`), so exactness survives any tooling.
//!
//! Serialization is canonical: keys sorted, node and edge lists sorted, all
//! rationals reduced. Parsing a canonical document and serializing it back
//! is the identity, byte for byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gadgets::EquitableShape;
use crate::model::{
    JointStrategy, ModelError, NetworkBuilder, SocialNetwork, Strategy, ValidationError,
};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("syntax error at {path}: {message} (rationals are \"p\" or \"p/q\")")]
    Rational { path: String, message: String },
    #[error("semantic error: {0}")]
    Semantic(#[from] ValidationError),
    #[error("profile error: {0}")]
    Profile(#[from] ModelError),
}

impl FormatError {
    pub fn code(&self) -> &'static str {
        match self {
            FormatError::Syntax { .. } | FormatError::Rational { .. } => "syntax-error",
            FormatError::Semantic(inner) => inner.code(),
            FormatError::Profile(_) => "invalid-profile",
        }
    }
}

// Document schema. Struct fields are declared in the canonical (sorted) key
// order serde_json will emit.

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    c0: String,
    edges: Vec<EdgeDoc>,
    nodes: Vec<NodeDoc>,
    products: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: String,
    to: String,
    weight: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
    products: Vec<String>,
    thresholds: BTreeMap<String, String>,
}

fn syntax_error(err: serde_json::Error) -> FormatError {
    FormatError::Syntax {
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    }
}

fn parse_rational(path: String, value: &str) -> Result<Rational, FormatError> {
    value.parse().map_err(|e| FormatError::Rational {
        path,
        message: format!("{e}"),
    })
}

fn parse_doc(document: &str) -> Result<NetworkDoc, FormatError> {
    serde_json::from_str(document).map_err(syntax_error)
}

fn builder_from_doc(doc: &NetworkDoc) -> Result<NetworkBuilder, FormatError> {
    let mut b = NetworkBuilder::new().c0(parse_rational("c0".into(), &doc.c0)?);
    for p in &doc.products {
        b = b.product(p.clone());
    }
    let declared: std::collections::BTreeSet<&String> = doc.products.iter().collect();
    for node in &doc.nodes {
        for p in &node.products {
            if !declared.contains(p) {
                return Err(ValidationError::UnknownProductInSet {
                    node: node.id.clone().into(),
                    product: p.clone().into(),
                }
                .into());
            }
        }
        b = b.node(node.id.clone(), node.products.iter().cloned());
        for (product, value) in &node.thresholds {
            let theta =
                parse_rational(format!("nodes[{}].thresholds[{}]", node.id, product), value)?;
            b = b.threshold(node.id.clone(), product.clone(), theta);
        }
    }
    for (k, edge) in doc.edges.iter().enumerate() {
        let w = parse_rational(format!("edges[{k}].weight"), &edge.weight)?;
        b = b.edge(edge.from.clone(), edge.to.clone(), w);
    }
    Ok(b)
}

/// Parses a network document; the result always satisfies every network
/// invariant.
pub fn parse_network(document: &str) -> Result<SocialNetwork, FormatError> {
    let doc = parse_doc(document)?;
    Ok(builder_from_doc(&doc)?.build()?)
}

/// Parses a network document but discards its weights, yielding the
/// unweighted shape for the equitable reweighting.
pub fn parse_equitable_shape(document: &str) -> Result<EquitableShape, FormatError> {
    let doc = parse_doc(document)?;
    let mut thresholds = Vec::new();
    let mut nodes = Vec::new();
    for node in &doc.nodes {
        nodes.push((
            node.id.clone().into(),
            node.products.iter().map(|p| p.clone().into()).collect(),
        ));
        for (product, value) in &node.thresholds {
            let theta =
                parse_rational(format!("nodes[{}].thresholds[{}]", node.id, product), value)?;
            thresholds.push((node.id.clone().into(), product.clone().into(), theta));
        }
    }
    let edges = doc
        .edges
        .iter()
        .map(|e| (e.from.clone().into(), e.to.clone().into()))
        .collect();
    Ok(EquitableShape {
        nodes,
        thresholds,
        edges,
        c0: parse_rational("c0".into(), &doc.c0)?,
    })
}

/// Canonical serialization: sorted keys and lists, reduced rationals,
/// trailing newline.
pub fn serialize_network(net: &SocialNetwork) -> String {
    let doc = NetworkDoc {
        c0: net.source_payoff().to_string(),
        edges: net
            .edges()
            .map(|(from, to, w)| EdgeDoc {
                from: from.to_string(),
                to: to.to_string(),
                weight: w.to_string(),
            })
            .collect(),
        nodes: net
            .nodes()
            .iter()
            .map(|id| {
                let products: Vec<String> = net
                    .product_set(id)
                    .expect("own node")
                    .iter()
                    .map(|p| p.to_string())
                    .collect();
                let thresholds = products
                    .iter()
                    .map(|p| {
                        let theta = net
                            .threshold(id, &p.clone().into())
                            .expect("own node")
                            .expect("threshold defined on P(i)");
                        (p.clone(), theta.to_string())
                    })
                    .collect();
                NodeDoc {
                    id: id.to_string(),
                    products,
                    thresholds,
                }
            })
            .collect(),
        products: net.products().iter().map(|p| p.to_string()).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("document serialization");
    out.push('\n');
    out
}

/// Parses a profile document (node id → product id or null) against a
/// network; the domain must match exactly.
pub fn parse_profile(document: &str, net: &SocialNetwork) -> Result<JointStrategy, FormatError> {
    let raw: BTreeMap<String, Option<String>> =
        serde_json::from_str(document).map_err(syntax_error)?;
    let map: BTreeMap<_, _> = raw
        .into_iter()
        .map(|(node, choice)| {
            (
                node.into(),
                match choice {
                    None => Strategy::Null,
                    Some(p) => Strategy::Product(p.into()),
                },
            )
        })
        .collect();
    Ok(JointStrategy::from_map(net, &map)?)
}

/// Canonical profile serialization; the opt-out strategy is the JSON
/// `null`.
pub fn serialize_profile(net: &SocialNetwork, s: &JointStrategy) -> String {
    let map: BTreeMap<String, Option<String>> = s
        .entries(net)
        .map(|(id, choice)| (id.to_string(), choice.product().map(|p| p.to_string())))
        .collect();
    let mut out = serde_json::to_string_pretty(&map).expect("profile serialization");
    out.push('\n');
    out
}
