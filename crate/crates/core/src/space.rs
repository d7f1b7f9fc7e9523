//! Measures and weights on the graph and their validation.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::{GraphSpec, VertexId};
use crate::numeric::{EventuallyPolynomialSeq, Polynomial, Rational};

/// Largest integer horizon the positivity and ratio scans will walk to.
const MAX_SCAN_HORIZON: usize = 1_000_000;

/// A point measure on the graph; branch measures are eventually polynomial in `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureSpec {
    graph: GraphSpec,
    circuit_mu: Vec<Rational>,
    branch_mu: BTreeMap<(usize, usize), EventuallyPolynomialSeq>,
}

impl MeasureSpec {
    /// Checks shape only (one value per circuit vertex, one sequence per branch).
    /// Positivity is checked by [`MeasureSpec::validate`].
    pub fn new(
        graph: GraphSpec,
        circuit_mu: Vec<Rational>,
        branch_mu: BTreeMap<(usize, usize), EventuallyPolynomialSeq>,
    ) -> Result<Self> {
        if circuit_mu.len() != graph.kappa() {
            return Err(Error::Validation(format!(
                "circuit_mu has {} entries but kappa is {}",
                circuit_mu.len(),
                graph.kappa()
            )));
        }
        check_branch_keys(&graph, branch_mu.keys().copied(), "branch_mu")?;
        Ok(MeasureSpec { graph, circuit_mu, branch_mu })
    }

    pub fn graph(&self) -> &GraphSpec {
        &self.graph
    }

    pub fn circuit_mu(&self) -> &[Rational] {
        &self.circuit_mu
    }

    pub fn branch_mu(&self) -> &BTreeMap<(usize, usize), EventuallyPolynomialSeq> {
        &self.branch_mu
    }

    pub fn branch_seq(&self, r: usize, i: usize) -> &EventuallyPolynomialSeq {
        &self.branch_mu[&(r, i)]
    }

    /// `μ({v})`.
    pub fn mu(&self, v: VertexId) -> Result<Rational> {
        self.graph.check_vertex(v)?;
        match v {
            VertexId::Circuit { r } => Ok(self.circuit_mu[r - 1].clone()),
            VertexId::Branch { r, i, j } => self.branch_mu[&(r, i)].at(j),
        }
    }

    /// `μ(vs)` for a finite vertex set.
    pub fn mu_sum<'a, I>(&self, vs: I) -> Result<Rational>
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        vs.into_iter().map(|v| self.mu(*v)).sum()
    }

    /// Positivity of every atom and the exact value of `sup h_1`.
    pub fn validate(&self) -> Result<ValidationReport> {
        for (r, m) in self.circuit_mu.iter().enumerate() {
            if !m.is_positive() {
                return Err(Error::Validation(format!(
                    "measure of {} is {m}, must be > 0",
                    VertexId::circuit(r + 1)
                )));
            }
        }
        let mut horizons = BTreeMap::new();
        for (&(r, i), seq) in &self.branch_mu {
            check_positive_seq(seq, r, i)?;
            horizons.insert((r, i), ratio_horizon(seq, r, i)?);
        }

        let mut best: Option<(Rational, VertexId)> = None;
        let mut consider = |value: Rational, v: VertexId| {
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, v));
            }
        };
        for r in 1..=self.graph.kappa() {
            let v = VertexId::circuit(r);
            consider(self.mu_sum(&self.graph.preimage(v, 1)?)? / self.mu(v)?, v);
        }
        let mut tail_limit_is_sup = false;
        for (&(r, i), h) in &horizons {
            let seq = &self.branch_mu[&(r, i)];
            for j in 1..=h.scan_to {
                consider(seq.at(j + 1)? / seq.at(j)?, VertexId::branch(r, i, j));
            }
            tail_limit_is_sup |= h.increasing_tail;
        }
        let (mut sup, at) = best.expect("kappa >= 1");
        let mut attained = true;
        // the ratio of a polynomial tail tends to 1
        if tail_limit_is_sup && sup < Rational::one() {
            sup = Rational::one();
            attained = false;
        }
        Ok(ValidationReport {
            sup_h1: sup,
            sup_vertex: attained.then_some(at),
            horizon: horizons.values().map(|h| h.scan_to).max().unwrap_or(0),
        })
    }
}

/// Outcome of [`MeasureSpec::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// `sup_x h_1(x) = ‖C‖²`.
    pub sup_h1: Rational,
    /// Vertex attaining the supremum, if it is attained.
    pub sup_vertex: Option<VertexId>,
    /// Largest branch index at which branch ratios were evaluated explicitly.
    pub horizon: usize,
}

struct RatioHorizon {
    scan_to: usize,
    increasing_tail: bool,
}

fn to_index(bound: BigInt, what: &str) -> Result<usize> {
    bound
        .to_usize()
        .filter(|&b| b <= MAX_SCAN_HORIZON)
        .ok_or_else(|| Error::Validation(format!("{what} horizon {bound} exceeds {MAX_SCAN_HORIZON}")))
}

/// Smallest integer index at or above which `p` has no real root.
fn root_free_from(p: &Polynomial, what: &str) -> Result<usize> {
    let bound = p.cauchy_bound().expect("nonzero polynomial").ceil();
    to_index(bound.max(BigInt::from(1)), what)
}

fn check_positive_seq(seq: &EventuallyPolynomialSeq, r: usize, i: usize) -> Result<()> {
    for (t, v) in seq.prefix().iter().enumerate() {
        if !v.is_positive() {
            return Err(Error::Validation(format!(
                "measure of {} is {v}, must be > 0",
                VertexId::branch(r, i, t + 1)
            )));
        }
    }
    let tail = seq.tail();
    match tail.leading_coefficient() {
        Some(lead) if lead.is_positive() => {}
        _ => {
            return Err(Error::Validation(format!(
                "tail polynomial {tail} of branch ({r},{i}) must have a positive leading coefficient"
            )))
        }
    }
    let start = seq.prefix_len() + 1;
    let end = root_free_from(tail, "positivity")?.max(start);
    for j in start..=end {
        let v = tail.eval_at(j as i64);
        if !v.is_positive() {
            return Err(Error::Validation(format!(
                "measure of {} is {v}, must be > 0",
                VertexId::branch(r, i, j)
            )));
        }
    }
    Ok(())
}

/// Past the returned index the tail ratio `q(j+1)/q(j)` is monotone, decided by the sign of
/// `q(j+1)² - q(j)q(j+2)` beyond its Cauchy root bound.
fn ratio_horizon(seq: &EventuallyPolynomialSeq, r: usize, i: usize) -> Result<RatioHorizon> {
    let q = seq.tail();
    let start = seq.prefix_len() + 1;
    let q1 = q.shifted(1);
    let concavity = q1.mul(&q1).sub(&q.mul(&q.shifted(2)));
    match concavity.leading_coefficient() {
        None => Ok(RatioHorizon { scan_to: start, increasing_tail: false }),
        Some(lead) => {
            let from = root_free_from(&concavity, &format!("ratio analysis of branch ({r},{i})"))?;
            Ok(RatioHorizon {
                scan_to: from.max(start),
                increasing_tail: lead.is_negative(),
            })
        }
    }
}

fn check_branch_keys(
    graph: &GraphSpec,
    keys: impl Iterator<Item = (usize, usize)>,
    field: &str,
) -> Result<()> {
    let expected: BTreeSet<_> = graph.branches().collect();
    let got: BTreeSet<_> = keys.collect();
    if let Some((r, i)) = expected.difference(&got).next() {
        return Err(Error::Validation(format!("{field} is missing branch r={r}, i={i}")));
    }
    if let Some((r, i)) = got.difference(&expected).next() {
        return Err(Error::Validation(format!(
            "{field} has branch r={r}, i={i} which is not in the graph"
        )));
    }
    Ok(())
}

/// Explicit values for `1..=prefix.len()` then a constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyConstantSeq {
    pub prefix: Vec<Rational>,
    pub tail: Rational,
}

impl EventuallyConstantSeq {
    pub fn constant(c: Rational) -> Self {
        EventuallyConstantSeq { prefix: Vec::new(), tail: c }
    }

    pub fn at(&self, j: usize) -> Result<Rational> {
        if j < 1 {
            return Err(Error::Domain("sequence index must be >= 1".into()));
        }
        Ok(self.prefix.get(j - 1).unwrap_or(&self.tail).clone())
    }
}

/// Bounded weight `π`, eventually constant along every branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSpec {
    graph: GraphSpec,
    circuit_pi: Vec<Rational>,
    branch_pi: BTreeMap<(usize, usize), EventuallyConstantSeq>,
}

impl WeightSpec {
    pub fn new(
        graph: GraphSpec,
        circuit_pi: Vec<Rational>,
        branch_pi: BTreeMap<(usize, usize), EventuallyConstantSeq>,
    ) -> Result<Self> {
        if circuit_pi.len() != graph.kappa() {
            return Err(Error::Validation(format!(
                "circuit_pi has {} entries but kappa is {}",
                circuit_pi.len(),
                graph.kappa()
            )));
        }
        check_branch_keys(&graph, branch_pi.keys().copied(), "branch_pi")?;
        Ok(WeightSpec { graph, circuit_pi, branch_pi })
    }

    /// `π ≡ c`.
    pub fn uniform(graph: &GraphSpec, c: Rational) -> Self {
        WeightSpec {
            graph: graph.clone(),
            circuit_pi: vec![c.clone(); graph.kappa()],
            branch_pi: graph
                .branches()
                .map(|b| (b, EventuallyConstantSeq::constant(c.clone())))
                .collect(),
        }
    }

    pub fn ones(graph: &GraphSpec) -> Self {
        Self::uniform(graph, Rational::one())
    }

    pub fn graph(&self) -> &GraphSpec {
        &self.graph
    }

    pub fn circuit_pi(&self) -> &[Rational] {
        &self.circuit_pi
    }

    pub fn branch_pi(&self) -> &BTreeMap<(usize, usize), EventuallyConstantSeq> {
        &self.branch_pi
    }

    pub fn branch_seq(&self, r: usize, i: usize) -> &EventuallyConstantSeq {
        &self.branch_pi[&(r, i)]
    }

    /// `π(v)`.
    pub fn pi(&self, v: VertexId) -> Result<Rational> {
        self.graph.check_vertex(v)?;
        match v {
            VertexId::Circuit { r } => Ok(self.circuit_pi[r - 1].clone()),
            VertexId::Branch { r, i, j } => self.branch_pi[&(r, i)].at(j),
        }
    }

    pub fn is_identically_one(&self) -> bool {
        let one = Rational::one();
        self.circuit_pi.iter().all(|p| *p == one)
            && self
                .branch_pi
                .values()
                .all(|s| s.tail == one && s.prefix.iter().all(|p| *p == one))
    }

    /// Must be defined over the same graph as `spec`.
    pub fn check_compatible(&self, spec: &MeasureSpec) -> Result<()> {
        if &self.graph != spec.graph() {
            return Err(Error::Validation("weight and measure are defined on different graphs".into()));
        }
        Ok(())
    }
}
