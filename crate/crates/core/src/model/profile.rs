//! Joint strategies: one choice per agent, aligned with the network's
//! canonical node order.

use std::collections::BTreeMap;
use std::fmt;

use super::{ModelError, NodeId, ProductId, SocialNetwork, Strategy};

/// A joint strategy (profile): the choice of every agent.
///
/// Internally a vector parallel to [`SocialNetwork::nodes`], so the derived
/// ordering is lexicographic over canonical node order with `Null` sorting
/// before any product.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JointStrategy {
    choices: Vec<Strategy>,
}

impl JointStrategy {
    /// The trivial profile: everyone opts out.
    pub fn all_null(net: &SocialNetwork) -> JointStrategy {
        JointStrategy {
            choices: vec![Strategy::Null; net.node_count()],
        }
    }

    /// Everyone adopts `product`; fails unless `product ∈ P(i)` for all `i`.
    pub fn uniform(net: &SocialNetwork, product: &ProductId) -> Result<JointStrategy, ModelError> {
        let s = JointStrategy {
            choices: vec![Strategy::Product(product.clone()); net.node_count()],
        };
        net.check_profile(&s)?;
        Ok(s)
    }

    /// Builds a profile from a per-node map; the domain must equal the
    /// network's node set and every choice must respect the product sets.
    pub fn from_map(
        net: &SocialNetwork,
        map: &BTreeMap<NodeId, Strategy>,
    ) -> Result<JointStrategy, ModelError> {
        if map.len() != net.node_count() {
            return Err(ModelError::InvalidProfile(format!(
                "profile names {} nodes, network has {}",
                map.len(),
                net.node_count()
            )));
        }
        let mut choices = Vec::with_capacity(net.node_count());
        for id in net.nodes() {
            match map.get(id) {
                Some(s) => choices.push(s.clone()),
                None => {
                    return Err(ModelError::InvalidProfile(format!(
                        "profile missing node {id}"
                    )))
                }
            }
        }
        let s = JointStrategy { choices };
        net.check_profile(&s)?;
        Ok(s)
    }

    pub(crate) fn from_choices(choices: Vec<Strategy>) -> JointStrategy {
        JointStrategy { choices }
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// Strategy at a canonical node position.
    pub fn strategy_at(&self, index: usize) -> &Strategy {
        &self.choices[index]
    }

    /// Strategy of a node by id.
    pub fn strategy_of(&self, net: &SocialNetwork, id: &NodeId) -> Result<&Strategy, ModelError> {
        Ok(&self.choices[net.node_index(id)?])
    }

    /// The profile with one coordinate replaced.
    pub fn with_strategy(&self, index: usize, s: Strategy) -> JointStrategy {
        let mut choices = self.choices.clone();
        choices[index] = s;
        JointStrategy { choices }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Strategy> {
        self.choices.iter()
    }

    /// Pairs of (node, strategy) in canonical order.
    pub fn entries<'a>(
        &'a self,
        net: &'a SocialNetwork,
    ) -> impl Iterator<Item = (&'a NodeId, &'a Strategy)> + 'a {
        net.nodes().iter().zip(self.choices.iter())
    }

    /// Compact rendering `n1=t1,n2=_` used in reports and DOT labels.
    pub fn label(&self, net: &SocialNetwork) -> String {
        let mut out = String::new();
        for (k, (id, s)) in self.entries(net).enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(id.as_str());
            out.push('=');
            out.push_str(&s.to_string());
        }
        out
    }
}

impl fmt::Display for JointStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, s) in self.choices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn net() -> SocialNetwork {
        SocialNetwork::builder()
            .node("b", ["t1"])
            .node("a", ["t1", "t2"])
            .threshold("a", "t1", ratio(1, 2))
            .threshold("a", "t2", ratio(1, 2))
            .threshold("b", "t1", ratio(1, 2))
            .edge("a", "b", ratio(1, 2))
            .build()
            .unwrap()
    }

    #[test]
    fn from_map_requires_exact_domain() {
        let net = net();
        let mut map: BTreeMap<NodeId, Strategy> = BTreeMap::new();
        map.insert("a".into(), Strategy::Product("t2".into()));
        assert!(JointStrategy::from_map(&net, &map).is_err());
        map.insert("b".into(), Strategy::Null);
        let s = JointStrategy::from_map(&net, &map).unwrap();
        // Canonical order is a, b.
        assert_eq!(s.strategy_at(0), &Strategy::Product("t2".into()));
        assert_eq!(s.strategy_at(1), &Strategy::Null);
        // b cannot choose t2.
        map.insert("b".into(), Strategy::Product("t2".into()));
        assert!(JointStrategy::from_map(&net, &map).is_err());
    }

    #[test]
    fn uniform_requires_shared_product() {
        let net = net();
        assert!(JointStrategy::uniform(&net, &"t1".into()).is_ok());
        assert!(JointStrategy::uniform(&net, &"t2".into()).is_err());
    }

    #[test]
    fn label_renders_null_as_underscore() {
        let net = net();
        let mut map: BTreeMap<NodeId, Strategy> = BTreeMap::new();
        map.insert("a".into(), Strategy::Product("t1".into()));
        map.insert("b".into(), Strategy::Null);
        let s = JointStrategy::from_map(&net, &map).unwrap();
        assert_eq!(s.label(&net), "a=t1,b=_");
        assert_eq!(s.to_string(), "(t1,_)");
    }

    #[test]
    fn ordering_puts_null_first() {
        let net = net();
        let all_null = JointStrategy::all_null(&net);
        let t1 = JointStrategy::uniform(&net, &"t1".into()).unwrap();
        assert!(all_null < t1);
    }
}
