//! Shared test helpers: an equilibrium oracle built from first principles
//! over the public accessors (no shared code with the library's payoff
//! tables or the pruned enumeration), plus ensemble convenience wrappers.

// Each test target uses a different subset of these helpers.
#![allow(dead_code)]

use sng_core::model::{JointStrategy, NodeId, SocialNetwork, Strategy};
use sng_core::rational::Rational;

/// Payoff recomputed directly from the definition: 0 for opting out, c0 for
/// a source adopting anything, supporter weight minus threshold otherwise.
pub fn naive_payoff(net: &SocialNetwork, s: &JointStrategy, id: &NodeId) -> Rational {
    let choice = s.strategy_of(net, id).expect("node exists");
    let product = match choice {
        Strategy::Null => return Rational::ZERO,
        Strategy::Product(p) => p.clone(),
    };
    if net.is_source(id).unwrap() {
        return net.source_payoff();
    }
    let supporters = net.supporters(s, id, &product).unwrap();
    let mut sum = Rational::ZERO;
    for j in supporters {
        sum = sum + net.edge_weight(j, id).unwrap().expect("supporter edge");
    }
    sum - net
        .threshold(id, &product)
        .unwrap()
        .expect("threshold on P(i)")
}

/// Best-response check from first principles.
pub fn naive_is_nash(net: &SocialNetwork, s: &JointStrategy) -> bool {
    for (idx, id) in net.nodes().iter().enumerate() {
        let current = naive_payoff(net, s, id);
        for alt in net.strategies(id).unwrap() {
            let deviated = s.with_strategy(idx, alt);
            if naive_payoff(net, &deviated, id) > current {
                return false;
            }
        }
    }
    true
}

/// Exhaustive equilibrium enumeration by scanning every joint strategy in
/// lexicographic order.
pub fn naive_enumerate(net: &SocialNetwork) -> Vec<JointStrategy> {
    let spaces: Vec<Vec<Strategy>> = net
        .nodes()
        .iter()
        .map(|id| net.strategies(id).unwrap())
        .collect();
    let n = spaces.len();
    let mut digits = vec![0usize; n];
    let mut out = Vec::new();
    loop {
        let profile = JointStrategy::from_map(
            net,
            &net.nodes()
                .iter()
                .enumerate()
                .map(|(i, id)| (id.clone(), spaces[i][digits[i]].clone()))
                .collect(),
        )
        .unwrap();
        if naive_is_nash(net, &profile) {
            out.push(profile);
        }
        let mut done = true;
        for i in (0..n).rev() {
            digits[i] += 1;
            if digits[i] < spaces[i].len() {
                done = false;
                break;
            }
            digits[i] = 0;
        }
        if done {
            return out;
        }
    }
}
