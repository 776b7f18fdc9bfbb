//! Social optimum, price of anarchy, and price of stability by exhaustive
//! evaluation under a state guard.

use thiserror::Error;

use crate::equilibria::{classify_ne, for_each_nash};
use crate::model::{JointStrategy, NEClassification, SocialNetwork};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("state space has {states} joint strategies, exceeding the guard of {guard}")]
    GuardExceeded { states: u128, guard: u64 },
}

/// A welfare ratio under the division conventions: positive over zero is
/// infinite, zero over zero is one, and a negative denominator is reported
/// as-is instead of being folded into a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioVerdict {
    Finite(Rational),
    Infinite,
    UndefinedNegativeWelfare {
        optimum: Rational,
        welfare: Rational,
    },
}

impl std::fmt::Display for RatioVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RatioVerdict::Finite(r) => write!(f, "{r}"),
            RatioVerdict::Infinite => f.write_str("inf"),
            RatioVerdict::UndefinedNegativeWelfare { .. } => {
                f.write_str("undefined-negative-welfare")
            }
        }
    }
}

/// `optimum / welfare` under the conventions above.
pub fn welfare_ratio(optimum: Rational, welfare: Rational) -> RatioVerdict {
    if welfare.is_negative() {
        RatioVerdict::UndefinedNegativeWelfare { optimum, welfare }
    } else if welfare.is_zero() {
        if optimum.is_positive() {
            RatioVerdict::Infinite
        } else if optimum.is_zero() {
            RatioVerdict::Finite(Rational::ONE)
        } else {
            // Degenerate and unreachable in these games (the optimum is
            // never below a zero-welfare profile), kept for totality.
            RatioVerdict::UndefinedNegativeWelfare { optimum, welfare }
        }
    } else {
        RatioVerdict::Finite(optimum / welfare)
    }
}

/// Efficiency summary of a game: the optimum, the welfare range over its
/// equilibria, and the two ratios. `poa`/`pos` are present iff at least one
/// equilibrium exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfficiencyReport {
    pub optimum: Rational,
    pub optimum_profile: JointStrategy,
    pub best_ne: Option<(JointStrategy, Rational)>,
    pub worst_ne: Option<(JointStrategy, Rational)>,
    pub ne_count: usize,
    pub poa: Option<RatioVerdict>,
    pub pos: Option<RatioVerdict>,
}

fn check_guard(net: &SocialNetwork, guard: u64) -> Result<(), MetricsError> {
    let states = net.state_count();
    if states > guard as u128 {
        return Err(MetricsError::GuardExceeded { states, guard });
    }
    Ok(())
}

/// The lexicographically least profile attaining the maximal social
/// welfare.
pub fn social_optimum(
    net: &SocialNetwork,
    guard: u64,
) -> Result<(JointStrategy, Rational), MetricsError> {
    check_guard(net, guard)?;
    let n = net.node_count();
    let radices: Vec<u16> = (0..n).map(|i| net.num_strategies(i) as u16).collect();
    let mut locals = vec![0u16; n];
    let mut best_locals = locals.clone();
    let mut best = welfare_of(net, &locals);
    loop {
        // Odometer step in lexicographic order; strict improvement keeps
        // the first (least) maximiser.
        let mut done = true;
        for i in (0..n).rev() {
            locals[i] += 1;
            if locals[i] < radices[i] {
                done = false;
                break;
            }
            locals[i] = 0;
        }
        if done {
            break;
        }
        let sw = welfare_of(net, &locals);
        if sw > best {
            best = sw;
            best_locals.copy_from_slice(&locals);
        }
    }
    Ok((net.profile_from_locals(&best_locals), best))
}

fn welfare_of(net: &SocialNetwork, locals: &[u16]) -> Rational {
    (0..net.node_count())
        .map(|i| net.payoff_local(locals, i))
        .fold(Rational::ZERO, |acc, p| acc + p)
}

/// Computes the full efficiency report: optimum, best and worst equilibria
/// by social welfare (lexicographically least among ties), and the
/// anarchy/stability ratios.
pub fn efficiency(net: &SocialNetwork, guard: u64) -> Result<EfficiencyReport, MetricsError> {
    let (optimum_profile, optimum) = social_optimum(net, guard)?;
    let mut best: Option<(Vec<u16>, Rational)> = None;
    let mut worst: Option<(Vec<u16>, Rational)> = None;
    let mut ne_count = 0usize;
    for_each_nash(net, |locals| {
        let sw = welfare_of(net, locals);
        ne_count += 1;
        if best.as_ref().map_or(true, |(_, b)| sw > *b) {
            best = Some((locals.to_vec(), sw));
        }
        if worst.as_ref().map_or(true, |(_, w)| sw < *w) {
            worst = Some((locals.to_vec(), sw));
        }
        true
    });
    let decode = |pair: Option<(Vec<u16>, Rational)>| {
        pair.map(|(locals, sw)| (net.profile_from_locals(&locals), sw))
    };
    let best_ne = decode(best);
    let worst_ne = decode(worst);
    let poa = worst_ne.as_ref().map(|&(_, sw)| welfare_ratio(optimum, sw));
    let pos = best_ne.as_ref().map(|&(_, sw)| welfare_ratio(optimum, sw));
    Ok(EfficiencyReport {
        optimum,
        optimum_profile,
        best_ne,
        worst_ne,
        ne_count,
        poa,
        pos,
    })
}

/// True iff the profile classification counts as non-trivial.
pub fn is_non_trivial(s: &JointStrategy) -> bool {
    classify_ne(s) != NEClassification::Trivial
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{gen_fig1, gen_fig3, gen_pos_witness};
    use crate::model::SocialNetwork;
    use crate::rational::ratio;

    #[test]
    fn welfare_ratio_conventions() {
        assert_eq!(
            welfare_ratio(ratio(3, 4), ratio(1, 4)),
            RatioVerdict::Finite(ratio(3, 1))
        );
        assert_eq!(
            welfare_ratio(ratio(3, 10), Rational::ZERO),
            RatioVerdict::Infinite
        );
        assert_eq!(
            welfare_ratio(Rational::ZERO, Rational::ZERO),
            RatioVerdict::Finite(Rational::ONE)
        );
        assert!(matches!(
            welfare_ratio(ratio(1, 2), ratio(-1, 2)),
            RatioVerdict::UndefinedNegativeWelfare { .. }
        ));
    }

    #[test]
    fn optimum_of_all_source_network() {
        // Two isolated sources, c0 = 1: welfare 2.
        let net = SocialNetwork::builder()
            .node("a", ["t"])
            .node("b", ["t"])
            .threshold("a", "t", ratio(1, 2))
            .threshold("b", "t", ratio(1, 2))
            .build()
            .unwrap();
        let (_, sw) = social_optimum(&net, 100).unwrap();
        assert_eq!(sw, ratio(2, 1));
    }

    #[test]
    fn optimum_is_trivial_when_products_never_pay() {
        // Source-free two-cycle with thresholds above the weights.
        let net = SocialNetwork::builder()
            .node("a", ["t"])
            .node("b", ["t"])
            .threshold("a", "t", ratio(3, 4))
            .threshold("b", "t", ratio(3, 4))
            .edge("a", "b", ratio(1, 2))
            .edge("b", "a", ratio(1, 2))
            .build()
            .unwrap();
        let (profile, sw) = social_optimum(&net, 100).unwrap();
        assert_eq!(sw, Rational::ZERO);
        assert_eq!(profile, crate::model::JointStrategy::all_null(&net));
    }

    #[test]
    fn pos_witness_has_infinite_stability_price() {
        let net = gen_pos_witness();
        let report = efficiency(&net, 1_000).unwrap();
        assert_eq!(report.optimum, ratio(3, 10));
        assert_eq!(report.ne_count, 1);
        assert_eq!(report.pos, Some(RatioVerdict::Infinite));
        assert_eq!(report.poa, Some(RatioVerdict::Infinite));
    }

    #[test]
    fn sustainable_cycle_has_infinite_anarchy_price() {
        let net = gen_fig3(ratio(1, 4), ratio(1, 2)).unwrap();
        let report = efficiency(&net, 1_000).unwrap();
        // Optimum: everyone copies a predecessor, welfare 3 * 1/4.
        assert_eq!(report.optimum, ratio(3, 4));
        // Worst equilibrium is all-null (welfare 0), best is all-t1.
        assert_eq!(report.poa, Some(RatioVerdict::Infinite));
        assert_eq!(report.pos, Some(RatioVerdict::Finite(Rational::ONE)));
        let (_, best_sw) = report.best_ne.unwrap();
        let (_, worst_sw) = report.worst_ne.unwrap();
        assert!(worst_sw <= best_sw && best_sw <= report.optimum);
    }

    #[test]
    fn no_equilibrium_leaves_ratios_absent() {
        let net = gen_fig1(ratio(1, 4), ratio(1, 3), ratio(1, 2), Rational::ONE).unwrap();
        let report = efficiency(&net, 1_000).unwrap();
        assert_eq!(report.ne_count, 0);
        assert!(report.poa.is_none() && report.pos.is_none());
        assert!(report.best_ne.is_none() && report.worst_ne.is_none());
        // The optimum is still reported.
        assert!(report.optimum.is_positive());
    }

    /// Unbounded-ratio families on DAGs: one follower block makes the good
    /// equilibrium arbitrarily better than the bad one (price of anarchy),
    /// or the unreachable optimum arbitrarily better than every equilibrium
    /// (price of stability).
    fn poa_dag_family(followers: usize) -> SocialNetwork {
        let mut b = SocialNetwork::builder()
            .node("s", ["t"])
            .threshold("s", "t", ratio(1, 2))
            .node("v", ["t"])
            .threshold("v", "t", ratio(1, 2))
            .edge("s", "v", ratio(1, 2));
        for k in 0..followers {
            let id = format!("f{k}");
            b = b
                .node(id.clone(), ["t"])
                .threshold(id.clone(), "t", ratio(1, 2))
                .edge("v", id, Rational::ONE);
        }
        b.build().unwrap()
    }

    fn pos_dag_family(followers: usize) -> SocialNetwork {
        let mut b = SocialNetwork::builder()
            .node("s", ["t"])
            .threshold("s", "t", ratio(1, 2))
            .node("v", ["t"])
            .threshold("v", "t", ratio(3, 4))
            .edge("s", "v", ratio(1, 2));
        for k in 0..followers {
            let id = format!("f{k}");
            b = b
                .node(id.clone(), ["t"])
                .threshold(id.clone(), "t", ratio(1, 2))
                .edge("v", id, Rational::ONE);
        }
        b.build().unwrap()
    }

    #[test]
    fn dag_families_grow_without_bound() {
        // Anarchy: v is exactly indifferent, so both adoption and refusal
        // are equilibria; followers amplify the difference.
        let mut last = Rational::ZERO;
        for k in [1usize, 4, 8] {
            let report = efficiency(&poa_dag_family(k), 100_000).unwrap();
            let Some(RatioVerdict::Finite(poa)) = report.poa else {
                panic!("expected finite ratio");
            };
            assert_eq!(poa, Rational::ONE + ratio(k as i64, 2));
            assert!(poa > last);
            last = poa;
        }

        // Stability: v refuses in every equilibrium, yet the optimum has it
        // adopt at a small loss so the followers can profit.
        let mut last = Rational::ZERO;
        for k in [1usize, 4, 8] {
            let report = efficiency(&pos_dag_family(k), 100_000).unwrap();
            let Some(RatioVerdict::Finite(pos)) = report.pos else {
                panic!("expected finite ratio");
            };
            assert_eq!(pos, ratio(3, 4) + ratio(k as i64, 2));
            assert!(pos > last);
            last = pos;
        }
    }
}
