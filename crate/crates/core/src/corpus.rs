//! The three worked examples, embedded as spec data exactly as stated.

use std::collections::BTreeMap;

use crate::graph::GraphSpec;
use crate::numeric::{EventuallyPolynomialSeq, Polynomial, Rational};
use crate::space::{EventuallyConstantSeq, MeasureSpec, WeightSpec};

/// A built-in example together with the verdict claimed for it.
#[derive(Debug, Clone)]
pub struct Example {
    pub id: &'static str,
    pub title: &'static str,
    pub measure: MeasureSpec,
    pub weight: Option<WeightSpec>,
    pub k: usize,
    pub m: usize,
    /// Classify the weighted operator `W` rather than `C`.
    pub weighted: bool,
    pub claim: &'static str,
    pub claimed_verdict: bool,
    pub note: Option<&'static str>,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn seq(prefix: &[Rational], tail: i64) -> EventuallyPolynomialSeq {
    EventuallyPolynomialSeq::new(prefix.to_vec(), Polynomial::from_ints(&[tail]))
}

/// κ = 3, η = (2, 0, 0), every branch measure 1; quasi-2-isometric `C`.
pub fn e1() -> Example {
    let graph = GraphSpec::new(3, vec![2, 0, 0]).expect("static graph");
    let one = [Rational::one()];
    let branch = BTreeMap::from([((1, 1), seq(&one, 1)), ((1, 2), seq(&one, 1))]);
    Example {
        id: "e1",
        title: "one-circuit graph, kappa=3, eta=(2,0,0), constant branch measures",
        measure: MeasureSpec::new(graph, vec![q(5, 3), q(1, 3), q(1, 1)], branch).expect("static spec"),
        weight: None,
        k: 1,
        m: 2,
        weighted: false,
        claim: "the composition operator C is quasi-2-isometry",
        claimed_verdict: true,
        note: None,
    }
}

/// κ = 3, η = (2, 1, 0), every branch measure 1; 2-quasi-2-isometric `C`.
pub fn e2() -> Example {
    let graph = GraphSpec::new(3, vec![2, 1, 0]).expect("static graph");
    let ones = [Rational::one(), Rational::one()];
    let branch = BTreeMap::from([
        ((1, 1), seq(&ones, 1)),
        ((1, 2), seq(&ones, 1)),
        ((2, 1), seq(&ones, 1)),
    ]);
    Example {
        id: "e2",
        title: "one-circuit graph, kappa=3, eta=(2,1,0), constant branch measures",
        measure: MeasureSpec::new(graph, vec![q(2, 1), q(1, 1), q(1, 1)], branch).expect("static spec"),
        weight: None,
        k: 2,
        m: 2,
        weighted: false,
        claim: "C is 2-quasi-2-isometry",
        claimed_verdict: true,
        note: None,
    }
}

/// κ = 3, η = (2, 0, 0), weight 1/2 on branches and 1 on the circuit.
///
/// The branch measure 4 for `j >= 2` is forced by `π_1²(x^1_{i,j+2})μ(x^1_{i,j+2}) = 1`
/// with `π = 1/2` there.
pub fn e3() -> Example {
    let graph = GraphSpec::new(3, vec![2, 0, 0]).expect("static graph");
    let branch = BTreeMap::from([((1, 1), seq(&[q(1, 1)], 4)), ((1, 2), seq(&[q(1, 3)], 4))]);
    let measure = MeasureSpec::new(graph.clone(), vec![q(31, 32), q(11, 12), q(1, 1)], branch).expect("static spec");
    let half = EventuallyConstantSeq::constant(q(1, 2));
    let weight = WeightSpec::new(
        graph,
        vec![Rational::one(); 3],
        BTreeMap::from([((1, 1), half.clone()), ((1, 2), half)]),
    )
    .expect("static weight");
    Example {
        id: "e3",
        title: "weighted operator on kappa=3, eta=(2,0,0), pi=1/2 on branches",
        measure,
        weight: Some(weight),
        k: 1,
        m: 2,
        weighted: true,
        claim: "W is quasi-2-isometry",
        claimed_verdict: true,
        note: Some(
            "branch measures for j >= 2 are fixed at 4 by pi_1^2 * mu = 1 with pi = 1/2; \
             the verdict below is recomputed from these inputs, not copied from the claim",
        ),
    }
}

pub fn all() -> Vec<Example> {
    vec![e1(), e2(), e3()]
}

pub fn by_id(id: &str) -> Option<Example> {
    all().into_iter().find(|e| e.id == id)
}
