//! Property tests over seeded random ensembles: payoff locality, the
//! join-the-crowd property, threshold monotonicity of the fixpoint,
//! serialization round-trips, and efficiency-ratio sanity.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::naive_payoff;
use sng_core::dynamics::random_profile;
use sng_core::equilibria::{best_responses, compute_xt, enumerate_ne, is_nash};
use sng_core::format::{parse_network, serialize_network};
use sng_core::gadgets::{gen_random, RandomClass};
use sng_core::metrics::{efficiency, RatioVerdict};
use sng_core::model::{classify_graph, JointStrategy, SocialNetwork, Strategy};
use sng_core::rational::{ratio, Rational};

fn arb_class() -> impl proptest::strategy::Strategy<Value = RandomClass> {
    prop_oneof![
        Just(RandomClass::Dag),
        Just(RandomClass::SimpleCycle),
        Just(RandomClass::NoSource),
        Just(RandomClass::Any),
    ]
}

prop_compose! {
    fn arb_network()(class in arb_class(), n in 2usize..7, products in 1usize..4, seed in 0u64..10_000)
        -> SocialNetwork
    {
        gen_random(class, n, products, seed, Rational::ONE).unwrap()
    }
}

prop_compose! {
    fn arb_network_and_profile()(net in arb_network(), seed in 0u64..10_000)
        -> (SocialNetwork, JointStrategy)
    {
        let s = random_profile(&net, seed);
        (net, s)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// The library payoff always equals a direct re-evaluation of the
    /// definition via public accessors.
    #[test]
    fn payoff_matches_reevaluation((net, s) in arb_network_and_profile()) {
        for id in net.nodes() {
            prop_assert_eq!(net.payoff(&s, id).unwrap(), naive_payoff(&net, &s, id));
        }
    }

    /// Payoffs depend only on one's own strategy and the neighbours':
    /// mutating any non-neighbour leaves them unchanged.
    #[test]
    fn payoff_ignores_non_neighbors((net, s) in arb_network_and_profile(), pick in 0usize..64) {
        for (i, id) in net.nodes().iter().enumerate() {
            let neighbors = net.neighbors(id).unwrap();
            let others: Vec<usize> = net.nodes().iter().enumerate()
                .filter(|(j, jd)| *j != i && !neighbors.contains(jd))
                .map(|(j, _)| j)
                .collect();
            if others.is_empty() {
                continue;
            }
            let j = others[pick % others.len()];
            let before = net.payoff(&s, id).unwrap();
            for alt in net.strategies(net.node_id(j)).unwrap() {
                let mutated = s.with_strategy(j, alt);
                prop_assert_eq!(net.payoff(&mutated, id).unwrap(), before);
            }
        }
    }

    /// Join the crowd: for a non-source node adopting t, switching any
    /// neighbour to t never lowers its payoff.
    #[test]
    fn join_the_crowd_monotonicity((net, s) in arb_network_and_profile()) {
        for (i, id) in net.nodes().iter().enumerate() {
            if net.is_source(id).unwrap() {
                continue;
            }
            for t in net.product_set(id).unwrap() {
                let t = t.clone();
                let adopted = s.with_strategy(i, Strategy::Product(t.clone()));
                let base = net.payoff(&adopted, id).unwrap();
                for nb in net.neighbors(id).unwrap() {
                    let j = net.node_index(nb).unwrap();
                    if net.strategies(nb).unwrap().contains(&Strategy::Product(t.clone())) {
                        let crowd = adopted.with_strategy(j, Strategy::Product(t.clone()));
                        prop_assert!(net.payoff(&crowd, id).unwrap() >= base);
                    }
                }
            }
        }
    }

    /// The trivial profile always has zero social welfare.
    #[test]
    fn trivial_profile_has_zero_welfare(net in arb_network()) {
        let all_null = JointStrategy::all_null(&net);
        prop_assert_eq!(net.social_welfare(&all_null).unwrap(), Rational::ZERO);
    }

    /// Class flags are mutually consistent.
    #[test]
    fn graph_class_invariants(net in arb_network()) {
        let class = classify_graph(&net);
        if class.is_simple_cycle {
            prop_assert!(class.has_no_source_nodes);
        }
        if class.is_dag {
            prop_assert!(!class.has_no_source_nodes);
        }
    }

    /// Raising a threshold never enlarges the X_t fixpoint.
    #[test]
    fn xt_is_antitone_in_thresholds(seed in 0u64..10_000, bump in 1i64..4) {
        let net = gen_random(RandomClass::NoSource, 4, 2, seed, Rational::ONE).unwrap();
        for product in net.products() {
            let base = compute_xt(&net, product).unwrap();
            // Raise one threshold (the first node that can adopt).
            for id in net.nodes() {
                let Some(theta) = net.threshold(id, product).unwrap() else { continue };
                let raised = (theta + ratio(bump, 8)).min(Rational::ONE);
                if raised == theta {
                    continue;
                }
                let rebuilt = rebuild_with_threshold(&net, id, product, raised);
                let tightened = compute_xt(&rebuilt, product).unwrap();
                prop_assert!(tightened.is_subset(&base));
                break;
            }
        }
    }

    /// Parsing a serialized network is the identity, and re-serializing a
    /// canonical document is byte-identical.
    #[test]
    fn serialization_round_trip(net in arb_network()) {
        let doc = serialize_network(&net);
        let parsed = parse_network(&doc).unwrap();
        prop_assert_eq!(&parsed, &net);
        prop_assert_eq!(serialize_network(&parsed), doc);
    }

    /// Enumeration output is sorted, duplicate-free, and all equilibria.
    #[test]
    fn enumeration_is_sorted_and_valid(net in arb_network()) {
        let nes = enumerate_ne(&net, 1_000_000).unwrap();
        for pair in nes.windows(2) {
            prop_assert!(pair[0] < pair[1]);
        }
        for ne in &nes {
            prop_assert!(is_nash(&net, ne).unwrap().is_equilibrium());
        }
    }

    /// Best responses are never empty and attain the maximum payoff.
    #[test]
    fn best_responses_attain_the_maximum((net, s) in arb_network_and_profile()) {
        for (i, id) in net.nodes().iter().enumerate() {
            let brs = best_responses(&net, &s, id).unwrap();
            prop_assert!(!brs.is_empty());
            let payoff_of = |x: Strategy| net.payoff(&s.with_strategy(i, x), id).unwrap();
            let best = brs.iter().next().map(|x| payoff_of(x.clone())).unwrap();
            let all: BTreeSet<Rational> = net.strategies(id).unwrap()
                .into_iter()
                .map(payoff_of)
                .collect();
            prop_assert_eq!(all.iter().max().copied().unwrap(), best);
        }
    }

    /// Whenever both ratios are finite with positive denominators,
    /// poa ≥ pos ≥ 1.
    #[test]
    fn efficiency_ratio_ordering(net in arb_network()) {
        let report = efficiency(&net, 1_000_000).unwrap();
        if let (Some(RatioVerdict::Finite(poa)), Some(RatioVerdict::Finite(pos))) =
            (report.poa, report.pos)
        {
            prop_assert!(poa >= pos);
            prop_assert!(pos >= Rational::ONE);
        }
        if let (Some((_, best)), Some((_, worst))) = (&report.best_ne, &report.worst_ne) {
            prop_assert!(worst <= best);
            prop_assert!(*best <= report.optimum);
        }
    }
}

fn rebuild_with_threshold(
    net: &SocialNetwork,
    node: &sng_core::model::NodeId,
    product: &sng_core::model::ProductId,
    theta: Rational,
) -> SocialNetwork {
    let mut b = SocialNetwork::builder().c0(net.source_payoff());
    for p in net.products() {
        b = b.product(p.clone());
    }
    for id in net.nodes() {
        let products: Vec<_> = net.product_set(id).unwrap().into_iter().cloned().collect();
        b = b.node(id.clone(), products.clone());
        for p in products {
            let original = net.threshold(id, &p).unwrap().unwrap();
            let value = if id == node && &p == product {
                theta
            } else {
                original
            };
            b = b.threshold(id.clone(), p, value);
        }
    }
    for (from, to, w) in net.edges() {
        b = b.edge(from.clone(), to.clone(), w);
    }
    b.build().unwrap()
}
