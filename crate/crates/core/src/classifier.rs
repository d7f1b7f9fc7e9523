//! Decision procedures for k-quasi-m-isometric `C` and `W`.
//!
//! Two criteria are evaluated for the unweighted operator and must agree:
//!
//! * per-vertex: the defect `Σ_p (-1)^p C(m,p) h_{p+k}(x)` vanishes at every vertex, which on a
//!   branch means `{μ(x^r_{i,k+j+1})}_{j>=0}` has degree `<= m-1`;
//! * theorem form (`m >= 2`): every such branch sequence has degree `<= m-2` and the defect
//!   vanishes at every circuit vertex.
//!
//! Branch conditions are decided exactly on the eventually-polynomial representation.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::derivatives::{h, wgram};
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::numeric::{alt_binomial_sum, binomial, Degree, EventuallyPolynomialSeq, Polynomial, Rational};
use crate::oracle::{defect_quadratic_form, Truncation};
use crate::space::{MeasureSpec, WeightSpec};

/// The pair `(k, m)` of "k-quasi-m-isometric".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DefectQuery {
    pub k: usize,
    pub m: usize,
}

impl DefectQuery {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::Domain("m must be >= 1".into()));
        }
        Ok(DefectQuery { k, m })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    PerVertex,
    TheoremForm,
    WeightedTheoremForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    Composition,
    WeightedComposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitDefect {
    pub r: usize,
    pub value: Rational,
}

/// Per-branch summary. `degree` is the degree of the branch sequence the theorem form
/// inspects, or `None` when its prefix disagrees with its tail polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchSummary {
    pub r: usize,
    pub i: usize,
    #[serde(serialize_with = "serialize_degree")]
    pub degree: Option<Degree>,
    pub theorem_condition: Option<bool>,
    pub per_vertex_condition: bool,
}

fn serialize_degree<S: Serializer>(d: &Option<Degree>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&degree_label(d))
}

fn degree_label(d: &Option<Degree>) -> String {
    match d {
        Some(d) => d.to_string(),
        None => "not-polynomial".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub operator: Operator,
    pub k: usize,
    pub m: usize,
    pub verdict: bool,
    pub strict: bool,
    pub criterion_used: Criterion,
    pub per_vertex_verdict: bool,
    pub theorem_form_verdict: Option<bool>,
    pub circuit_defects: Vec<CircuitDefect>,
    pub branch_degrees: Vec<BranchSummary>,
    pub oracle_checked: bool,
    pub oracle_agrees: Option<bool>,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    pub fn to_structured(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let op = match self.operator {
            Operator::Composition => "C",
            Operator::WeightedComposition => "W",
        };
        let name = format!("{}-quasi-{}-isometry", self.k, self.m);
        let _ = writeln!(out, "operator: {op}");
        let _ = writeln!(out, "query: k={} m={}", self.k, self.m);
        let _ = writeln!(out, "verdict: {} ({}{name})", self.verdict, if self.verdict { "" } else { "not a " });
        let _ = writeln!(out, "strict: {}", self.strict);
        let crit = serde_json::to_value(self.criterion_used).expect("enum");
        let _ = writeln!(out, "criterion: {}", crit.as_str().unwrap_or_default());
        let _ = writeln!(out, "per-vertex verdict: {}", self.per_vertex_verdict);
        match self.theorem_form_verdict {
            Some(t) => {
                let _ = writeln!(out, "theorem-form verdict: {t}");
            }
            None => {
                let _ = writeln!(out, "theorem-form verdict: n/a (m = 1)");
            }
        }
        let _ = writeln!(out, "circuit defects:");
        for d in &self.circuit_defects {
            let _ = writeln!(out, "  x_{}: {}", d.r, d.value);
        }
        let _ = writeln!(out, "branches:");
        for b in &self.branch_degrees {
            let thm = b.theorem_condition.map_or("n/a".to_string(), |t| t.to_string());
            let _ = writeln!(
                out,
                "  ({},{}): degree {}, theorem condition {}, per-vertex condition {}",
                b.r,
                b.i,
                degree_label(&b.degree),
                thm,
                b.per_vertex_condition
            );
        }
        let oracle = match (self.oracle_checked, self.oracle_agrees) {
            (true, Some(a)) => format!("checked, agrees: {a}"),
            _ => "not run".to_string(),
        };
        let _ = writeln!(out, "oracle: {oracle}");
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

fn alt_sum_of<F>(q: DefectQuery, mut term: F) -> Result<Rational>
where
    F: FnMut(usize) -> Result<Rational>,
{
    let values = (0..=q.m).map(|p| term(p + q.k)).collect::<Result<Vec<_>>>()?;
    alt_binomial_sum(&values)
}

/// `Σ_p (-1)^p C(m,p) h_{p+k}(v)` at any vertex.
pub fn vertex_defect(spec: &MeasureSpec, q: DefectQuery, v: VertexId) -> Result<Rational> {
    alt_sum_of(q, |p| h(spec, v, p))
}

/// `Σ_p (-1)^p C(m,p) h_{p+k}F_{p+k}(v)` at any vertex.
pub fn weighted_vertex_defect(spec: &MeasureSpec, w: &WeightSpec, q: DefectQuery, v: VertexId) -> Result<Rational> {
    alt_sum_of(q, |p| wgram(spec, w, v, p))
}

/// Circuit defect at `x_r`.
pub fn defect_circuit(spec: &MeasureSpec, q: DefectQuery, r: usize) -> Result<Rational> {
    vertex_defect(spec, q, VertexId::circuit(r))
}

/// `{μ(x^r_{i,k+j+1})}_{j>=0}` as a sequence indexed from 1.
pub fn branch_sequence(spec: &MeasureSpec, k: usize, r: usize, i: usize) -> EventuallyPolynomialSeq {
    spec.branch_seq(r, i).shift(k)
}

/// True iff the defect vanishes at every vertex of branch `(r, i)`.
pub fn defect_branch_all(spec: &MeasureSpec, q: DefectQuery, r: usize, i: usize) -> bool {
    branch_sequence(spec, q.k, r, i).is_polynomial_of_degree_at_most(q.m as i64 - 1)
}

/// `{π_k²(x^r_{i,k+j+1}) μ(x^r_{i,k+j+1})}_{j>=0}` as a sequence indexed from 1.
pub fn weighted_branch_sequence(
    spec: &MeasureSpec,
    w: &WeightSpec,
    k: usize,
    r: usize,
    i: usize,
) -> Result<EventuallyPolynomialSeq> {
    let mu = spec.branch_seq(r, i);
    let pi = w.branch_seq(r, i);
    // for j > len: every factor of π_k(x_{k+j}) lies in the constant weight tail
    let len = mu.prefix_len().max(pi.prefix.len());
    let prefix = (1..=len)
        .map(|j| {
            let v = VertexId::branch(r, i, k + j);
            Ok(crate::derivatives::pi_prod(w, v, k)?.pow(2) * spec.mu(v)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let factor = pi.tail.pow(2).pow(k as u32);
    let tail = mu.tail().shifted(k as i64).scale(&factor);
    Ok(EventuallyPolynomialSeq::new(prefix, tail))
}

/// True iff the weighted defect vanishes at every vertex of branch `(r, i)`.
///
/// Vertices up to the longer of the two prefixes are evaluated directly. Beyond that every
/// weight factor equals the tail constant `c`, so `μ(x_j)` times the defect is the polynomial
/// `Σ_p (-1)^p C(m,p) c^{2(k+p)} T(j+k+p)` in `j`, which is checked for being zero.
pub fn weighted_defect_branch_all(
    spec: &MeasureSpec,
    w: &WeightSpec,
    q: DefectQuery,
    r: usize,
    i: usize,
) -> Result<bool> {
    let mu = spec.branch_seq(r, i);
    let pi = w.branch_seq(r, i);
    let len = mu.prefix_len().max(pi.prefix.len());
    for j in 1..=len {
        if !weighted_vertex_defect(spec, w, q, VertexId::branch(r, i, j))?.is_zero() {
            return Ok(false);
        }
    }
    let a = pi.tail.pow(2);
    let mut tail = Polynomial::zero();
    for p in 0..=q.m {
        let mut coeff = a.pow((q.k + p) as u32) * Rational::from_big(binomial(q.m, p));
        if p % 2 == 1 {
            coeff = -coeff;
        }
        tail = tail.add(&mu.tail().shifted((q.k + p) as i64).scale(&coeff));
    }
    Ok(tail.is_zero())
}

fn circuit_defects<F>(kappa: usize, mut defect: F) -> Result<Vec<CircuitDefect>>
where
    F: FnMut(VertexId) -> Result<Rational>,
{
    (1..=kappa)
        .map(|r| Ok(CircuitDefect { r, value: defect(VertexId::circuit(r))? }))
        .collect()
}

fn classify_composition_unchecked(spec: &MeasureSpec, q: DefectQuery) -> Result<ClassificationReport> {
    let g = spec.graph();
    let circuit = circuit_defects(g.kappa(), |v| vertex_defect(spec, q, v))?;
    let circuit_ok = circuit.iter().all(|d| d.value.is_zero());

    let mut branches = Vec::new();
    for (r, i) in g.branches() {
        let seq = branch_sequence(spec, q.k, r, i);
        let theorem_condition = (q.m >= 2).then(|| seq.is_polynomial_of_degree_at_most(q.m as i64 - 2));
        branches.push(BranchSummary {
            r,
            i,
            degree: seq.polynomial_degree(),
            theorem_condition,
            per_vertex_condition: defect_branch_all(spec, q, r, i),
        });
    }
    let per_vertex = circuit_ok && branches.iter().all(|b| b.per_vertex_condition);
    let theorem = (q.m >= 2).then(|| circuit_ok && branches.iter().all(|b| b.theorem_condition == Some(true)));
    if let Some(t) = theorem {
        if t != per_vertex {
            return Err(Error::Invariant(format!(
                "theorem-form verdict {t} disagrees with per-vertex verdict {per_vertex} for k={}, m={}",
                q.k, q.m
            )));
        }
    }
    Ok(ClassificationReport {
        operator: Operator::Composition,
        k: q.k,
        m: q.m,
        verdict: per_vertex,
        strict: false,
        criterion_used: if q.m >= 2 { Criterion::TheoremForm } else { Criterion::PerVertex },
        per_vertex_verdict: per_vertex,
        theorem_form_verdict: theorem,
        circuit_defects: circuit,
        branch_degrees: branches,
        oracle_checked: false,
        oracle_agrees: None,
        notes: Vec::new(),
    })
}

/// Is `C` k-quasi-m-isometric? `strict` is filled in by comparing with `m - 1`.
pub fn classify_composition(spec: &MeasureSpec, q: DefectQuery) -> Result<ClassificationReport> {
    spec.validate()?;
    let mut report = classify_composition_unchecked(spec, q)?;
    report.strict = report.verdict
        && (q.m == 1 || !classify_composition_unchecked(spec, DefectQuery { k: q.k, m: q.m - 1 })?.verdict);
    Ok(report)
}

/// Strictness needs `m >= 2`: k-quasi-m but not k-quasi-(m-1).
pub fn classify_strict(spec: &MeasureSpec, q: DefectQuery) -> Result<ClassificationReport> {
    if q.m < 2 {
        return Err(Error::Domain("strictness is defined for m >= 2".into()));
    }
    classify_composition(spec, q)
}

/// The `k = 0` case: is `C` an m-isometry?
pub fn classify_m_isometry(spec: &MeasureSpec, m: usize) -> Result<ClassificationReport> {
    if m < 2 {
        return Err(Error::Domain("m-isometry classification requires m >= 2".into()));
    }
    let mut report = classify_composition(spec, DefectQuery::new(0, m)?)?;
    let g = spec.graph();
    if (1..g.kappa()).all(|r| g.eta_at(r) == 0) {
        report
            .notes
            .push(format!("only x_{} carries branches: single-branching-vertex case", g.kappa()));
    }
    Ok(report)
}

/// Single-vertex circuit test from the branch tails alone: for `κ = 1` and `m >= 2`, `C` is
/// k-quasi-m-isometric iff every `{μ(x_{i,k+j+1})}_{j>=0}` has degree at most `m - 2`.
/// The second flag is set when some branch attains degree exactly `m - 2`, which forces strictness.
pub fn branch_only_criterion(spec: &MeasureSpec, q: DefectQuery) -> Result<(bool, bool)> {
    let g = spec.graph();
    if g.kappa() != 1 {
        return Err(Error::Domain(format!("branch-only test needs kappa = 1, got {}", g.kappa())));
    }
    if q.m < 2 {
        return Err(Error::Domain("branch-only test requires m >= 2".into()));
    }
    let mut holds = true;
    let mut attains = false;
    for (r, i) in g.branches() {
        let seq = branch_sequence(spec, q.k, r, i);
        holds &= seq.is_polynomial_of_degree_at_most(q.m as i64 - 2);
        attains |= seq.polynomial_degree() == Some(Degree::Finite(q.m - 2));
    }
    Ok((holds, holds && attains))
}

fn classify_weighted_unchecked(spec: &MeasureSpec, w: &WeightSpec, q: DefectQuery) -> Result<ClassificationReport> {
    let g = spec.graph();
    let circuit = circuit_defects(g.kappa(), |v| weighted_vertex_defect(spec, w, q, v))?;
    let circuit_ok = circuit.iter().all(|d| d.value.is_zero());

    let mut branches = Vec::new();
    for (r, i) in g.branches() {
        let seq = weighted_branch_sequence(spec, w, q.k, r, i)?;
        branches.push(BranchSummary {
            r,
            i,
            degree: seq.polynomial_degree(),
            theorem_condition: (q.m >= 2).then(|| seq.is_polynomial_of_degree_at_most(q.m as i64 - 1)),
            per_vertex_condition: weighted_defect_branch_all(spec, w, q, r, i)?,
        });
    }
    let per_vertex = circuit_ok && branches.iter().all(|b| b.per_vertex_condition);
    let theorem = (q.m >= 2).then(|| circuit_ok && branches.iter().all(|b| b.theorem_condition == Some(true)));
    let mut notes = Vec::new();
    for b in &branches {
        if let Some(t) = b.theorem_condition {
            if t != b.per_vertex_condition {
                notes.push(format!(
                    "branch ({},{}): theorem-form branch condition is {t} but the branch-vertex defects {}",
                    b.r,
                    b.i,
                    if b.per_vertex_condition { "all vanish" } else { "do not all vanish" }
                ));
            }
        }
    }
    Ok(ClassificationReport {
        operator: Operator::WeightedComposition,
        k: q.k,
        m: q.m,
        verdict: per_vertex,
        strict: false,
        criterion_used: if q.m >= 2 { Criterion::WeightedTheoremForm } else { Criterion::PerVertex },
        per_vertex_verdict: per_vertex,
        theorem_form_verdict: theorem,
        circuit_defects: circuit,
        branch_degrees: branches,
        oracle_checked: false,
        oracle_agrees: None,
        notes,
    })
}

/// Is `W` k-quasi-m-isometric? The verdict is the per-vertex defect condition; the
/// theorem-form branch condition is reported beside it.
pub fn classify_weighted(spec: &MeasureSpec, w: &WeightSpec, q: DefectQuery) -> Result<ClassificationReport> {
    spec.validate()?;
    w.check_compatible(spec)?;
    let mut report = classify_weighted_unchecked(spec, w, q)?;
    report.strict = report.verdict
        && (q.m == 1 || !classify_weighted_unchecked(spec, w, DefectQuery { k: q.k, m: q.m - 1 })?.verdict);
    Ok(report)
}

/// Window depth at which every failing defect of the query shows up on the interior.
pub fn oracle_depth(spec: &MeasureSpec, w: Option<&WeightSpec>, q: DefectQuery) -> usize {
    let mut longest = 0;
    let mut degree = 0;
    for s in spec.branch_mu().values() {
        longest = longest.max(s.prefix_len());
        if let Degree::Finite(d) = s.tail().degree() {
            degree = degree.max(d);
        }
    }
    if let Some(w) = w {
        longest = longest.max(w.branch_pi().values().map(|s| s.prefix.len()).max().unwrap_or(0));
    }
    q.k + q.m + 6 + longest + degree
}

/// Runs the truncated-matrix oracle and records whether it reproduces the classifier's
/// per-vertex defects and verdict on its interior window.
pub fn verify_with_oracle(
    report: &mut ClassificationReport,
    spec: &MeasureSpec,
    w: Option<&WeightSpec>,
) -> Result<()> {
    let q = DefectQuery::new(report.k, report.m)?;
    let window = Truncation::new(spec.graph(), oracle_depth(spec, w, q));
    let oracle = defect_quadratic_form(spec, w, q, &window)?;
    let mut agrees = true;
    for (v, value) in &oracle {
        let expected = match w {
            Some(w) => weighted_vertex_defect(spec, w, q, *v)?,
            None => vertex_defect(spec, q, *v)?,
        };
        if expected != *value {
            agrees = false;
            report
                .notes
                .push(format!("oracle defect at {v} is {value}, classifier defect is {expected}"));
        }
    }
    let oracle_verdict = oracle.values().all(Rational::is_zero);
    if oracle_verdict != report.verdict {
        agrees = false;
        report
            .notes
            .push(format!("oracle verdict on window depth {} is {oracle_verdict}", window.depth()));
    }
    report.oracle_checked = true;
    report.oracle_agrees = Some(agrees);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::GraphSpec;
    use std::collections::BTreeMap;

    fn q(k: usize, m: usize) -> DefectQuery {
        DefectQuery::new(k, m).unwrap()
    }

    fn single_branch(circuit: Rational, seq: EventuallyPolynomialSeq) -> MeasureSpec {
        MeasureSpec::new(
            GraphSpec::new(1, vec![1]).unwrap(),
            vec![circuit],
            BTreeMap::from([((1, 1), seq)]),
        )
        .unwrap()
    }

    #[test]
    fn query_requires_positive_m() {
        assert!(DefectQuery::new(0, 0).is_err());
    }

    #[test]
    fn circuit_defect_examples() {
        let e1 = corpus::e1().measure;
        assert_eq!(defect_circuit(&e1, q(1, 2), 1).unwrap(), Rational::zero());
        assert_eq!(defect_circuit(&e1, q(1, 1), 2).unwrap(), Rational::from_integer(-2));
        let e2 = corpus::e2().measure;
        assert_eq!(defect_circuit(&e2, q(2, 2), 3).unwrap(), Rational::zero());
    }

    #[test]
    fn branch_examples() {
        let e1 = corpus::e1().measure;
        assert!(defect_branch_all(&e1, q(1, 2), 1, 1));

        let sq = single_branch(Rational::one(), EventuallyPolynomialSeq::polynomial(Polynomial::from_ints(&[0, 0, 1])));
        assert!(!defect_branch_all(&sq, q(0, 2), 1, 1));

        let odd = single_branch(
            Rational::one(),
            EventuallyPolynomialSeq::new(vec![Rational::one()], Polynomial::from_ints(&[-1, 2])),
        );
        assert!(defect_branch_all(&odd, q(0, 3), 1, 1));
    }

    #[test]
    fn e1_and_e2_verdicts() {
        let e1 = corpus::e1().measure;
        let r = classify_composition(&e1, q(1, 2)).unwrap();
        assert!(r.verdict && r.strict);
        assert_eq!(r.criterion_used, Criterion::TheoremForm);
        assert!(!classify_composition(&e1, q(1, 1)).unwrap().verdict);

        let e2 = corpus::e2().measure;
        assert!(classify_composition(&e2, q(2, 2)).unwrap().verdict);
        let r3 = classify_strict(&e2, q(2, 3)).unwrap();
        assert!(r3.verdict && !r3.strict);
    }

    #[test]
    fn e1_is_already_a_two_isometry() {
        let e1 = corpus::e1().measure;
        let r = classify_m_isometry(&e1, 2).unwrap();
        assert!(r.verdict);
        for d in &r.circuit_defects {
            assert!(d.value.is_zero());
        }
        assert!(!r.notes.iter().any(|n| n.contains("single-branching")));
        assert!(classify_m_isometry(&e1, 1).is_err());
    }

    #[test]
    fn quasi_isometry_never_holds_with_a_branch() {
        // the m = 1 circuit sum equals -Σ μ(x^r_{i,k+1}) < 0, so some circuit defect is nonzero
        let spec = single_branch(Rational::from_integer(3), EventuallyPolynomialSeq::constant(Rational::from_integer(3)));
        for k in 0..4 {
            assert!(!classify_composition(&spec, q(k, 1)).unwrap().verdict);
        }
        let r2 = classify_strict(&spec, q(0, 2)).unwrap();
        assert!(r2.verdict && r2.strict);
    }

    #[test]
    fn single_branch_linear_tail_three_isometry() {
        // κ = 1, μ(x^1_{1,j}) = j: branch degree 1 = m - 2 for m = 3, circuit condition implied.
        let spec = single_branch(Rational::from_integer(7), EventuallyPolynomialSeq::polynomial(Polynomial::identity()));
        let r = classify_m_isometry(&spec, 3).unwrap();
        assert!(r.verdict);
        assert!(r.strict);
        assert!(r.notes.iter().any(|n| n.contains("single-branching")));
        assert!(!classify_m_isometry(&spec, 2).unwrap().verdict);
    }

    #[test]
    fn strict_needs_m_at_least_two() {
        let e1 = corpus::e1().measure;
        assert!(classify_strict(&e1, q(1, 1)).is_err());
    }

    #[test]
    fn weighted_reduces_to_unweighted_for_unit_weight() {
        for ex in [corpus::e1(), corpus::e2()] {
            let ones = WeightSpec::ones(ex.measure.graph());
            for (k, m) in [(0, 1), (1, 2), (2, 2), (1, 3)] {
                let a = classify_weighted(&ex.measure, &ones, q(k, m)).unwrap();
                let b = classify_composition(&ex.measure, q(k, m)).unwrap();
                assert_eq!(a.verdict, b.verdict);
                assert_eq!(a.circuit_defects, b.circuit_defects);
                assert_eq!(a.strict, b.strict);
            }
        }
    }

    #[test]
    fn e3_recomputed_verdict() {
        let e3 = corpus::e3();
        let w = e3.weight.as_ref().unwrap();
        let mut r = classify_weighted(&e3.measure, w, q(1, 2)).unwrap();
        verify_with_oracle(&mut r, &e3.measure, Some(w)).unwrap();
        assert_eq!(r.oracle_agrees, Some(true));
        assert!(!r.verdict);
        // the constant sequence π_1²μ = 1 satisfies the stated branch-degree bound
        assert!(r.branch_degrees.iter().all(|b| b.theorem_condition == Some(true)));
        assert!(r.branch_degrees.iter().all(|b| !b.per_vertex_condition));
        assert!(r.circuit_defects.iter().any(|d| !d.value.is_zero()));
    }

    #[test]
    fn zero_weight_branch_drops_out() {
        // W kills the only branch after one step and permutes the circuit
        let g = GraphSpec::new(2, vec![1, 0]).unwrap();
        let spec = MeasureSpec::new(
            g.clone(),
            vec![Rational::one(), Rational::one()],
            BTreeMap::from([((1, 1), EventuallyPolynomialSeq::constant(Rational::new(5, 7)))]),
        )
        .unwrap();
        let w = WeightSpec::new(
            g,
            vec![Rational::one(), Rational::one()],
            BTreeMap::from([((1, 1), crate::space::EventuallyConstantSeq::constant(Rational::zero()))]),
        )
        .unwrap();
        let mut r = classify_weighted(&spec, &w, q(0, 1)).unwrap();
        verify_with_oracle(&mut r, &spec, Some(&w)).unwrap();
        assert_eq!(r.oracle_agrees, Some(true));
        // k = 0: the branch defect is wgram_0 - wgram_1 = 1 - 0
        assert!(!r.verdict);
        let r1 = classify_weighted(&spec, &w, q(1, 1)).unwrap();
        assert!(r1.verdict);
        assert!(r1.circuit_defects.iter().all(|d| d.value.is_zero()));
    }

    #[test]
    fn report_renders() {
        let e1 = corpus::e1().measure;
        let mut r = classify_composition(&e1, q(1, 2)).unwrap();
        verify_with_oracle(&mut r, &e1, None).unwrap();
        let text = r.to_text();
        assert!(text.contains("verdict: true"));
        assert!(text.contains("oracle: checked, agrees: true"));
        let json: serde_json::Value = serde_json::from_str(&r.to_structured()).unwrap();
        assert_eq!(json["verdict"], serde_json::Value::Bool(true));
        assert_eq!(json["criterion_used"], "theorem-form");
        assert_eq!(json["circuit_defects"][0]["value"], "0");
        assert_eq!(json["branch_degrees"][0]["degree"], "0");
        assert_eq!(r.to_structured(), classify_composition(&e1, q(1, 2)).map(|mut x| {
            verify_with_oracle(&mut x, &e1, None).unwrap();
            x
        }).unwrap().to_structured());
    }
}
