//! Social network games with multiple products and an opt-out strategy.
//!
//! Agents on a weighted directed graph each pick one product (or nothing);
//! a non-source agent's payoff is the accumulated weight of same-choice
//! neighbours minus a per-product threshold, while source agents earn a
//! constant for any product. This crate models those games exactly (all
//! arithmetic is rational), decides and constructs pure Nash equilibria via
//! a brute-force oracle and polynomial special-case procedures, and analyses
//! improvement-path dynamics: the finite improvement property, weak
//! acyclicity, and scheduler-driven best-response runs.

#![forbid(unsafe_code)]

mod graph;

pub mod dynamics;
pub mod equilibria;
pub mod format;
pub mod gadgets;
pub mod metrics;
pub mod model;
pub mod rational;

pub use model::{
    classify_graph, GraphClass, JointStrategy, ModelError, NEClassification, NetworkBuilder,
    NodeId, ProductId, SocialNetwork, Strategy, ValidationError,
};
pub use rational::{ratio, Rational, RationalError};
