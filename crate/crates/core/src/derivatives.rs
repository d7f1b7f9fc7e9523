//! Closed-form Radon–Nikodym derivatives `h_p`, weight products `π_k`, the
//! conditional-expectation factor `F_p` and the diagonal of `W^{*p}W^p`.
//!
//! These follow the atom formulas directly: the circuit atom of `φ^{-p}` over
//! `x_r` is `x_{Φ₂(p+r)}` together with every branch vertex `x^s_{i,j}`,
//! `j <= p`, whose index pair satisfies `Φ₂(p+r) = Φ₂(s+j)`. The brute-force
//! counterparts live in [`crate::oracle`] and share no summation code with this
//! module.

use crate::error::Result;
use crate::graph::{phi2, GraphSpec, VertexId};
use crate::numeric::{binomial, Rational};
use crate::space::{MeasureSpec, WeightSpec};

/// Diagonal scalar of `C^{*p}C^p` (or `W^{*p}W^p`) at the basis vector of `vertex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramScalar {
    pub vertex: VertexId,
    pub p: usize,
    pub value: Rational,
}

/// Branch vertices `x^s_{i,j}` of the circuit atom over `x_r` of order `p`, together with the
/// circuit vertex index `Φ₂(p+r)`.
fn circuit_atom_terms(g: &GraphSpec, r: usize, p: usize) -> (usize, Vec<VertexId>) {
    let kappa = g.kappa();
    let target = phi2((p + r) as i64, kappa).expect("kappa >= 1");
    let mut branch = Vec::new();
    for j in 1..=p {
        for s in 1..=kappa {
            if phi2((s + j) as i64, kappa).expect("kappa >= 1") == target {
                branch.extend((1..=g.eta_at(s)).map(|i| VertexId::branch(s, i, j)));
            }
        }
    }
    (target, branch)
}

/// `h_p(v) = dμ∘φ^{-p}/dμ` at `v`.
pub fn h(spec: &MeasureSpec, v: VertexId, p: usize) -> Result<Rational> {
    spec.graph().check_vertex(v)?;
    if p == 0 {
        return Ok(Rational::one());
    }
    match v {
        VertexId::Branch { r, i, j } => Ok(spec.mu(VertexId::branch(r, i, j + p))? / spec.mu(v)?),
        VertexId::Circuit { r } => {
            let (target, branch) = circuit_atom_terms(spec.graph(), r, p);
            let mut num = spec.mu(VertexId::circuit(target))?;
            for y in branch {
                num = num + spec.mu(y)?;
            }
            Ok(num / spec.mu(v)?)
        }
    }
}

/// `h_p(v)` packaged with its vertex and order.
pub fn gram_scalar(spec: &MeasureSpec, v: VertexId, p: usize) -> Result<GramScalar> {
    Ok(GramScalar { vertex: v, p, value: h(spec, v, p)? })
}

/// `π_k(v) = π(v)·π(φ(v))·…·π(φ^{k-1}(v))`.
pub fn pi_prod(w: &WeightSpec, v: VertexId, k: usize) -> Result<Rational> {
    let g = w.graph();
    g.check_vertex(v)?;
    (0..k).map(|t| w.pi(g.iterate(v, t)?)).product()
}

/// `F_p(v)`: `K^r_{i,j+p}` on branches and `K^r_p` on the circuit; `F_0 = 1`.
pub fn f_factor(spec: &MeasureSpec, w: &WeightSpec, v: VertexId, p: usize) -> Result<Rational> {
    w.check_compatible(spec)?;
    spec.graph().check_vertex(v)?;
    if p == 0 {
        return Ok(Rational::one());
    }
    match v {
        VertexId::Branch { r, i, j } => Ok(pi_prod(w, VertexId::branch(r, i, j + p), p)?.pow(2)),
        VertexId::Circuit { r } => {
            let (target, branch) = circuit_atom_terms(spec.graph(), r, p);
            let c = VertexId::circuit(target);
            let mut num = pi_prod(w, c, p)?.pow(2) * spec.mu(c)?;
            let mut den = spec.mu(c)?;
            for y in branch {
                let m = spec.mu(y)?;
                num = num + pi_prod(w, y, p)?.pow(2) * &m;
                den = den + m;
            }
            Ok(num / den)
        }
    }
}

/// `h_p(v)·F_p(v)`, the diagonal of `W^{*p}W^p`.
pub fn wgram(spec: &MeasureSpec, w: &WeightSpec, v: VertexId, p: usize) -> Result<Rational> {
    if p == 0 {
        spec.graph().check_vertex(v)?;
        return Ok(Rational::one());
    }
    Ok(h(spec, v, p)? * f_factor(spec, w, v, p)?)
}

/// Both sides of the aggregate circuit identity
/// `Σ_r μ(x_r) Σ_p (-1)^p C(m,p) h_{p+k}(x_r) = -Σ_{r,i} Σ_{p<m} (-1)^p C(m-1,p) μ(x^r_{i,p+k+1})`.
pub fn circuit_sum_identity_sides(spec: &MeasureSpec, k: usize, m: usize) -> Result<(Rational, Rational)> {
    let g = spec.graph();
    let sign = |p: usize| if p % 2 == 0 { Rational::one() } else { -Rational::one() };

    let mut lhs = Rational::zero();
    for r in 1..=g.kappa() {
        let x = VertexId::circuit(r);
        let mut inner = Rational::zero();
        for p in 0..=m {
            inner = inner + sign(p) * Rational::from_big(binomial(m, p)) * h(spec, x, p + k)?;
        }
        lhs = lhs + spec.mu(x)? * inner;
    }

    let mut rhs = Rational::zero();
    for (r, i) in g.branches() {
        for p in 0..m {
            let term = Rational::from_big(binomial(m - 1, p)) * spec.mu(VertexId::branch(r, i, p + k + 1))?;
            rhs = rhs - sign(p) * term;
        }
    }
    Ok((lhs, rhs))
}
