//! Deterministic generators for the example networks, the PARTITION
//! reduction, witness families, and seeded random ensembles.
//!
//! Generators are pure functions of their arguments: the same inputs always
//! yield the identical network, so serialized outputs are bitwise
//! reproducible.

use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::model::{NetworkBuilder, NodeId, ProductId, SocialNetwork, ValidationError};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("invalid shape: {0}")]
    InvalidShape(#[from] ValidationError),
    #[error("unsatisfiable class: {0}")]
    UnsatisfiableClass(String),
}

fn require(cond: bool, msg: &str) -> Result<(), GadgetError> {
    if cond {
        Ok(())
    } else {
        Err(GadgetError::ConstraintViolated(msg.to_string()))
    }
}

// ---------------------------------------------------------------------------
// The no-equilibrium network
// ---------------------------------------------------------------------------

/// Checks the parameter constraints shared by the no-equilibrium triangle
/// and the PARTITION reduction: 0 < θ < w1 < w2 and w1 + w2 ≤ 1.
fn check_triangle_params(theta: Rational, w1: Rational, w2: Rational) -> Result<(), GadgetError> {
    require(theta.is_positive(), "theta must be positive")?;
    require(theta < w1, "theta must be smaller than w1")?;
    require(w1 < w2, "w1 must be smaller than w2")?;
    require(
        w1 + w2 <= Rational::ONE,
        "w1 + w2 must not exceed 1 (incoming-weight bound)",
    )
}

/// The six-node network with no Nash equilibrium: a triangle of two-product
/// nodes, each also fed by a single-product source.
///
/// Nodes `1`, `2`, `3` carry product sets {t1,t2}, {t1,t3}, {t2,t3} and form
/// the cycle 1 → 2 → 3 → 1 with weight `w2`; sources `s1` ({t1}) → 1,
/// `s3` ({t3}) → 2, `s2` ({t2}) → 3 attach with weight `w1`. Every
/// threshold is `theta`, and θ < w1 < w2 makes copying the triangle
/// predecessor beat copying the source, which is what kills every profile.
pub fn gen_fig1(
    theta: Rational,
    w1: Rational,
    w2: Rational,
    c0: Rational,
) -> Result<SocialNetwork, GadgetError> {
    check_triangle_params(theta, w1, w2)?;
    Ok(
        triangle_copy(NetworkBuilder::new().c0(c0), "", "s1", "t1", theta, w1, w2)
            .build()
            .expect("parameter constraints imply a valid network"),
    )
}

/// Appends one copy of the no-equilibrium network to `b`. Node ids are
/// prefixed; the {t1}-role source is `anchor` and carries `anchor_product`
/// (`t1` in the plain copy, the renamed product in the second reduction
/// copy). The anchor's threshold is only meaningful when the reduction
/// wires selectors into it; for a standalone copy it is never consulted.
fn triangle_copy(
    b: NetworkBuilder,
    prefix: &str,
    anchor: &str,
    anchor_product: &str,
    theta: Rational,
    w1: Rational,
    w2: Rational,
) -> NetworkBuilder {
    let n = |suffix: &str| format!("{prefix}{suffix}");
    let t1 = anchor_product;
    b
        // Triangle nodes and thresholds.
        .node(n("1"), [t1, "t2"])
        .threshold(n("1"), t1, theta)
        .threshold(n("1"), "t2", theta)
        .node(n("2"), [t1, "t3"])
        .threshold(n("2"), t1, theta)
        .threshold(n("2"), "t3", theta)
        .node(n("3"), ["t2", "t3"])
        .threshold(n("3"), "t2", theta)
        .threshold(n("3"), "t3", theta)
        // Sources: anchor carries t1's role, s2 and s3 their products.
        .node(anchor, [t1])
        .threshold(anchor, t1, Rational::new(1, 2).unwrap())
        .node(n("s2"), ["t2"])
        .threshold(n("s2"), "t2", theta)
        .node(n("s3"), ["t3"])
        .threshold(n("s3"), "t3", theta)
        // Source attachments with weight w1.
        .edge(anchor, n("1"), w1)
        .edge(n("s3"), n("2"), w1)
        .edge(n("s2"), n("3"), w1)
        // The triangle itself with weight w2.
        .edge(n("1"), n("2"), w2)
        .edge(n("2"), n("3"), w2)
        .edge(n("3"), n("1"), w2)
}

// ---------------------------------------------------------------------------
// PARTITION reduction
// ---------------------------------------------------------------------------

/// A normalized PARTITION instance: positive rationals summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    values: Vec<Rational>,
}

impl PartitionInstance {
    /// Requires the values to already sum to exactly 1.
    pub fn new(values: Vec<Rational>) -> Result<PartitionInstance, GadgetError> {
        require(!values.is_empty(), "instance must be non-empty")?;
        for v in &values {
            require(v.is_positive(), "instance values must be positive")?;
        }
        let sum = values.iter().fold(Rational::ZERO, |acc, &v| acc + v);
        require(sum == Rational::ONE, "instance values must sum to 1")?;
        Ok(PartitionInstance { values })
    }

    /// Scales arbitrary positive values so they sum to 1.
    pub fn normalized(values: Vec<Rational>) -> Result<PartitionInstance, GadgetError> {
        require(!values.is_empty(), "instance must be non-empty")?;
        for v in &values {
            require(v.is_positive(), "instance values must be positive")?;
        }
        let sum = values.iter().fold(Rational::ZERO, |acc, &v| acc + v);
        PartitionInstance::new(values.into_iter().map(|v| v / sum).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Exhaustive subset-sum check: does some subset sum to exactly 1/2?
    /// Exponential in the instance size; intended for the small instances
    /// the reduction is exercised on.
    pub fn has_half_partition(&self) -> bool {
        let half = Rational::new(1, 2).unwrap();
        let n = self.values.len();
        assert!(n < 62, "subset-sum oracle limited to small instances");
        for mask in 0u64..(1u64 << n) {
            let mut sum = Rational::ZERO;
            for (i, &v) in self.values.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sum = sum + v;
                }
            }
            if sum == half {
                return true;
            }
        }
        false
    }
}

/// The reduction from PARTITION to non-trivial equilibrium existence.
///
/// Selector nodes `i01..` (one per instance value, all source nodes with
/// product set {t1, t1p}) feed nodes `pa` and `pb` with weight `a_i` each;
/// `pa` and `pb` have threshold 1/2 for their single product and stand in
/// for the {t1}-source of a plain no-equilibrium copy (`qa*`) and the
/// {t1p}-source of a copy with t1 renamed to t1p (`rb*`). The game has a
/// Nash equilibrium iff some subset of the instance sums to exactly 1/2,
/// and every equilibrium is non-trivial (the selectors are sources).
pub fn gen_partition_reduction(
    inst: &PartitionInstance,
    theta: Rational,
    w1: Rational,
    w2: Rational,
    c0: Rational,
) -> Result<SocialNetwork, GadgetError> {
    check_triangle_params(theta, w1, w2)?;
    let half = Rational::new(1, 2).unwrap();
    let width = inst.len().to_string().len();

    let mut b = NetworkBuilder::new().c0(c0);
    // Two marked copies; pa/pb play the anchor-source role but acquire
    // incoming selector edges below, making them ordinary influenced nodes.
    b = triangle_copy(b, "qa", "pa", "t1", theta, w1, w2);
    b = triangle_copy(b, "rb", "pb", "t1p", theta, w1, w2);
    b = b.threshold("pa", "t1", half).threshold("pb", "t1p", half);
    for (k, &a) in inst.values().iter().enumerate() {
        let id = format!("i{:0width$}", k + 1);
        b = b
            .node(id.clone(), ["t1", "t1p"])
            .threshold(id.clone(), "t1", half)
            .threshold(id.clone(), "t1p", half)
            .edge(id.clone(), "pa", a)
            .edge(id, "pb", a);
    }
    // Instance values in (0,1] summing to 1 keep every weight bound
    // intact, so this cannot fail.
    b.build().map_err(GadgetError::InvalidShape)
}

// ---------------------------------------------------------------------------
// Infinite-improvement-path triangle
// ---------------------------------------------------------------------------

/// The three-node cycle 1 → 2 → 3 → 1 where every node chooses between the
/// same two products, with uniform weight `w` and threshold `theta`;
/// copying one's predecessor earns w − θ > 0, which yields an infinite
/// best-response improvement path while the game stays weakly acyclic.
pub fn gen_fig3(theta: Rational, w: Rational) -> Result<SocialNetwork, GadgetError> {
    require(theta.is_positive(), "theta must be positive")?;
    require(theta < w, "theta must be smaller than w")?;
    require(w <= Rational::ONE, "w must not exceed 1")?;
    let mut b = NetworkBuilder::new();
    for id in ["1", "2", "3"] {
        b = b
            .node(id, ["t1", "t2"])
            .threshold(id, "t1", theta)
            .threshold(id, "t2", theta);
    }
    Ok(b.edge("1", "2", w)
        .edge("2", "3", w)
        .edge("3", "1", w)
        .build()
        .expect("parameter constraints imply a valid network"))
}

// ---------------------------------------------------------------------------
// Price-of-stability witness
// ---------------------------------------------------------------------------

/// A two-cycle where each product is cheap for one node and expensive for
/// the other: its only equilibrium is all-null (social welfare 0), while
/// (t1, t1) attains welfare 3/10, so the price of stability is infinite.
pub fn gen_pos_witness() -> SocialNetwork {
    let w = Rational::new(1, 2).unwrap();
    let cheap = Rational::new(1, 10).unwrap();
    let dear = Rational::new(6, 10).unwrap();
    SocialNetwork::builder()
        .node("1", ["t1", "t2"])
        .threshold("1", "t1", cheap)
        .threshold("1", "t2", dear)
        .node("2", ["t1", "t2"])
        .threshold("2", "t1", dear)
        .threshold("2", "t2", cheap)
        .edge("1", "2", w)
        .edge("2", "1", w)
        .build()
        .expect("fixed witness network is valid")
}

// ---------------------------------------------------------------------------
// Equitable networks
// ---------------------------------------------------------------------------

/// An unweighted network description: every incoming edge of a node ends up
/// carrying weight 1/|N(i)|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquitableShape {
    pub nodes: Vec<(NodeId, Vec<ProductId>)>,
    pub thresholds: Vec<(NodeId, ProductId, Rational)>,
    pub edges: Vec<(NodeId, NodeId)>,
    pub c0: Rational,
}

/// Builds the equitable network over `shape`: each incoming edge of node
/// `i` gets weight 1/|N(i)|, so the incoming sum is exactly 1 for every
/// non-source node.
pub fn gen_equitable(shape: &EquitableShape) -> Result<SocialNetwork, GadgetError> {
    let mut in_degree: std::collections::BTreeMap<&NodeId, i64> = std::collections::BTreeMap::new();
    for (from, to) in &shape.edges {
        require(from != to, "shape must have no self-loops")?;
        *in_degree.entry(to).or_insert(0) += 1;
    }
    let mut b = NetworkBuilder::new().c0(shape.c0);
    for (id, products) in &shape.nodes {
        b = b.node(id.clone(), products.iter().cloned());
    }
    for (id, product, theta) in &shape.thresholds {
        b = b.threshold(id.clone(), product.clone(), *theta);
    }
    for (from, to) in &shape.edges {
        let deg = in_degree[to];
        b = b.edge(
            from.clone(),
            to.clone(),
            Rational::new(1, deg).expect("positive in-degree"),
        );
    }
    Ok(b.build()?)
}

// ---------------------------------------------------------------------------
// Seeded random ensembles
// ---------------------------------------------------------------------------

/// Requested graph class for [`gen_random`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomClass {
    Dag,
    SimpleCycle,
    NoSource,
    /// Arbitrary digraph (possibly with sources and cycles).
    Any,
}

struct Sampler(rand_chacha::ChaCha8Rng);

impl Sampler {
    fn new(seed: u64) -> Sampler {
        Sampler(rand_chacha::ChaCha8Rng::seed_from_u64(seed))
    }

    fn below(&mut self, bound: u64) -> u64 {
        // Modulo bias is irrelevant for test-ensemble generation.
        self.0.next_u64() % bound
    }

    fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    /// A rational in (0, 1] with denominator at most 16.
    fn small_weight(&mut self) -> Rational {
        let den = 2 + self.below(15) as i64;
        let num = 1 + self.below(den as u64) as i64;
        Rational::new(num, den).unwrap()
    }

    /// A threshold from the grid {1/8, ..., 8/8}.
    fn grid_threshold(&mut self) -> Rational {
        Rational::new(1 + self.below(8) as i64, 8).unwrap()
    }
}

/// Deterministic pseudo-random network of the requested class. Identical
/// `(class, n, product_count, seed, c0)` always yields the identical
/// network; raw weights use denominators ≤ 16 and are rescaled where a
/// node's incoming sum would exceed 1.
pub fn gen_random(
    class: RandomClass,
    n: usize,
    product_count: usize,
    seed: u64,
    c0: Rational,
) -> Result<SocialNetwork, GadgetError> {
    require(n >= 1, "need at least one node")?;
    require(product_count >= 1, "need at least one product")?;
    match class {
        RandomClass::SimpleCycle | RandomClass::NoSource => {
            if n < 2 {
                return Err(GadgetError::UnsatisfiableClass(format!(
                    "{class:?} requires at least two nodes (self-loops are not allowed)"
                )));
            }
        }
        RandomClass::Dag | RandomClass::Any => {}
    }

    let mut rng = Sampler::new(seed);
    let width = n.to_string().len();
    let node_name = |i: usize| format!("n{:0width$}", i + 1);
    let products: Vec<String> = (1..=product_count).map(|p| format!("t{p}")).collect();

    // Random non-empty product set and thresholds per node.
    let mut b = NetworkBuilder::new().c0(c0);
    for p in &products {
        b = b.product(p.clone());
    }
    for i in 0..n {
        let mut set = Vec::new();
        while set.is_empty() {
            set = products
                .iter()
                .filter(|_| rng.chance(1, 2))
                .cloned()
                .collect();
        }
        b = b.node(node_name(i), set.iter().cloned());
        for p in set {
            b = b.threshold(node_name(i), p, rng.grid_threshold());
        }
    }

    // Unweighted edge skeleton per class.
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match class {
        RandomClass::Dag => {
            // Edges only forward along a random node order.
            let mut order: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                order.swap(i, rng.below(i as u64 + 1) as usize);
            }
            for a in 0..n {
                for b in a + 1..n {
                    if rng.chance(2, 5) {
                        edges.push((order[a], order[b]));
                    }
                }
            }
        }
        RandomClass::SimpleCycle => {
            // Node-name order is the cycle orientation.
            for i in 0..n {
                edges.push((i, (i + 1) % n));
            }
        }
        RandomClass::NoSource | RandomClass::Any => {
            for from in 0..n {
                for to in 0..n {
                    if from != to && rng.chance(1, 3) {
                        edges.push((from, to));
                    }
                }
            }
            if class == RandomClass::NoSource {
                // Patch an incoming edge into every source.
                let mut has_in = vec![false; n];
                for &(_, to) in &edges {
                    has_in[to] = true;
                }
                for (to, _) in has_in.iter().enumerate().filter(|(_, covered)| !**covered) {
                    let mut from = rng.below(n as u64) as usize;
                    if from == to {
                        from = (from + 1) % n;
                    }
                    edges.push((from, to));
                }
            }
        }
    }

    // Raw weights, rescaled so each incoming sum stays within 1.
    let mut weights: Vec<Rational> = (0..edges.len()).map(|_| rng.small_weight()).collect();
    for to in 0..n {
        let incoming: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].1 == to).collect();
        let sum = incoming
            .iter()
            .fold(Rational::ZERO, |acc, &e| acc + weights[e]);
        if sum > Rational::ONE {
            for &e in &incoming {
                weights[e] = weights[e] / sum;
            }
        }
    }
    for (e, &(from, to)) in edges.iter().enumerate() {
        b = b.edge(node_name(from), node_name(to), weights[e]);
    }

    Ok(b.build().expect("construction keeps every invariant"))
}
