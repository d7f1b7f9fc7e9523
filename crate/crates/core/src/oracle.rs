//! Brute-force verification.
//!
//! Atoms are enumerated by repeatedly taking one-step children, weights are multiplied along
//! explicit parent walks, and the operator-level defect is evaluated on a finite matrix of `C`
//! (or `W`) in the unnormalized indicator basis with inner product `⟨χ_a, χ_b⟩ = δ_ab μ(a)`.
//! Nothing here calls into [`crate::derivatives`].

use std::collections::{BTreeMap, BTreeSet};

use crate::classifier::DefectQuery;
use crate::error::{Error, Result};
use crate::graph::{GraphSpec, VertexId};
use crate::numeric::{alt_binomial_sum, Rational};
use crate::space::{MeasureSpec, WeightSpec};

/// `φ^{-p}({v})` by `p` rounds of one-step preimages.
pub fn enumerate_preimage(g: &GraphSpec, v: VertexId, p: usize) -> Result<BTreeSet<VertexId>> {
    let mut layer = BTreeSet::from([v]);
    for _ in 0..p {
        let mut next = BTreeSet::new();
        for y in &layer {
            next.extend(g.children(*y)?);
        }
        layer = next;
    }
    Ok(layer)
}

/// `π(y)π(φ(y))⋯π(φ^{p-1}(y))` by walking the parent map one step at a time.
fn walk_weight(w: &WeightSpec, y: VertexId, p: usize) -> Result<Rational> {
    let g = w.graph();
    let mut acc = Rational::one();
    let mut at = y;
    for _ in 0..p {
        acc = acc * w.pi(at)?;
        at = g.parent(at)?;
    }
    Ok(acc)
}

/// `μ(φ^{-p}({v})) / μ(v)`.
pub fn h_oracle(spec: &MeasureSpec, v: VertexId, p: usize) -> Result<Rational> {
    let atom = enumerate_preimage(spec.graph(), v, p)?;
    let mut total = Rational::zero();
    for y in &atom {
        total = total + spec.mu(*y)?;
    }
    Ok(total / spec.mu(v)?)
}

/// `‖W^p χ_v‖² / μ(v) = Σ_{y ∈ φ^{-p}(v)} π_p(y)² μ(y) / μ(v)`.
pub fn wgram_oracle(spec: &MeasureSpec, w: &WeightSpec, v: VertexId, p: usize) -> Result<Rational> {
    w.check_compatible(spec)?;
    let atom = enumerate_preimage(spec.graph(), v, p)?;
    let mut total = Rational::zero();
    for y in &atom {
        total = total + walk_weight(w, *y, p)?.pow(2) * spec.mu(*y)?;
    }
    Ok(total / spec.mu(v)?)
}

/// Finite window: every circuit vertex plus branch vertices of depth `j <= depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    depth: usize,
    vertices: Vec<VertexId>,
    index: BTreeMap<VertexId, usize>,
}

impl Truncation {
    pub fn new(g: &GraphSpec, depth: usize) -> Self {
        let vertices = g.vertices_to_depth(depth);
        let index = vertices.iter().enumerate().map(|(n, v)| (*v, n)).collect();
        Truncation { depth, vertices, index }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertices whose preimage tree of height `height` stays in the window.
    pub fn interior(&self, height: usize) -> Vec<VertexId> {
        self.vertices
            .iter()
            .copied()
            .filter(|v| match v {
                VertexId::Circuit { .. } => self.depth > height,
                VertexId::Branch { j, .. } => j + height <= self.depth,
            })
            .collect()
    }
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    entries: Vec<Rational>,
    columns: Vec<Vec<(usize, Rational)>>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, entries: vec![Rational::zero(); n * n], columns: vec![Vec::new(); n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.n + col]
    }

    fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.columns[col].retain(|(r, _)| *r != row);
        if !value.is_zero() {
            self.columns[col].push((row, value.clone()));
            self.columns[col].sort_by_key(|(r, _)| *r);
        }
        self.entries[row * self.n + col] = value;
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_zero()).count()
    }

    /// Nonzero `(row, value)` pairs of column `col`.
    pub fn column(&self, col: usize) -> &[(usize, Rational)] {
        &self.columns[col]
    }

    /// `M x` for a sparse vector.
    pub fn apply(&self, x: &BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
        let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
        for (col, coeff) in x {
            for (row, e) in &self.columns[*col] {
                let slot = out.entry(*row).or_insert_with(Rational::zero);
                *slot = &*slot + e * coeff;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// Matrix of `W` (or `C` when `w` is `None`) on the window: `M[y, v] = π(y)` when `φ(y) = v`.
pub fn truncated_matrix(spec: &MeasureSpec, w: Option<&WeightSpec>, t: &Truncation) -> Result<Matrix> {
    let g = spec.graph();
    if let Some(w) = w {
        w.check_compatible(spec)?;
    }
    let mut m = Matrix::zeros(t.len());
    for (row, y) in t.vertices().iter().enumerate() {
        let col = t.position(g.parent(*y)?).expect("parents of window vertices stay in the window");
        let value = match w {
            Some(w) => w.pi(*y)?,
            None => Rational::one(),
        };
        m.set(row, col, value);
    }
    Ok(m)
}

fn image_of_indicator(matrix: &Matrix, t: &Truncation, v: VertexId, p: usize) -> BTreeMap<usize, Rational> {
    let mut x = BTreeMap::from([(t.position(v).expect("vertex in window"), Rational::one())]);
    for _ in 0..p {
        x = matrix.apply(&x);
    }
    x
}

fn mu_inner(
    spec: &MeasureSpec,
    t: &Truncation,
    a: &BTreeMap<usize, Rational>,
    b: &BTreeMap<usize, Rational>,
) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (n, x) in a {
        if let Some(y) = b.get(n) {
            acc = acc + x * y * spec.mu(t.vertices()[*n])?;
        }
    }
    Ok(acc)
}

/// `⟨M^p χ_a, M^p χ_b⟩` in the μ-weighted inner product.
pub fn gram_entry(
    spec: &MeasureSpec,
    matrix: &Matrix,
    t: &Truncation,
    a: VertexId,
    b: VertexId,
    p: usize,
) -> Result<Rational> {
    let xa = image_of_indicator(matrix, t, a, p);
    let xb = image_of_indicator(matrix, t, b, p);
    mu_inner(spec, t, &xa, &xb)
}

/// `Σ_p (-1)^p C(m,p) ‖M^{k+p} χ_v‖² / μ(v)` on every interior vertex of the window.
pub fn defect_quadratic_form(
    spec: &MeasureSpec,
    w: Option<&WeightSpec>,
    q: DefectQuery,
    t: &Truncation,
) -> Result<BTreeMap<VertexId, Rational>> {
    let required = q.k + q.m + 2;
    if t.depth() < required {
        return Err(Error::WindowTooSmall { depth: t.depth(), required });
    }
    let matrix = truncated_matrix(spec, w, t)?;
    let mut out = BTreeMap::new();
    for v in t.interior(q.k + q.m) {
        let mut x = image_of_indicator(&matrix, t, v, q.k);
        let mut norms = Vec::with_capacity(q.m + 1);
        for p in 0..=q.m {
            if p > 0 {
                x = matrix.apply(&x);
            }
            norms.push(mu_inner(spec, t, &x, &x)?);
        }
        out.insert(v, alt_binomial_sum(&norms)? / spec.mu(v)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::numeric::EventuallyPolynomialSeq;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn h_oracle_examples() {
        let e1 = corpus::e1().measure;
        for v in e1.graph().vertices_to_depth(2) {
            assert_eq!(h_oracle(&e1, v, 0).unwrap(), Rational::one());
        }
        assert_eq!(h_oracle(&e1, VertexId::circuit(2), 2).unwrap(), Rational::from_integer(5));
        let e2 = corpus::e2().measure;
        assert_eq!(h_oracle(&e2, VertexId::circuit(1), 4).unwrap(), Rational::from_integer(3));
    }

    #[test]
    fn wgram_oracle_examples() {
        let e3 = corpus::e3();
        let w = e3.weight.as_ref().unwrap();
        assert_eq!(wgram_oracle(&e3.measure, w, VertexId::circuit(1), 1).unwrap(), q(40, 31));
        assert_eq!(wgram_oracle(&e3.measure, w, VertexId::circuit(2), 3).unwrap(), q(15, 11));
        let ones = WeightSpec::ones(e3.measure.graph());
        for v in e3.measure.graph().vertices_to_depth(3) {
            for p in 0..5 {
                assert_eq!(
                    wgram_oracle(&e3.measure, &ones, v, p).unwrap(),
                    h_oracle(&e3.measure, v, p).unwrap()
                );
            }
        }
    }

    #[test]
    fn smallest_graph_matrix() {
        let g = GraphSpec::new(1, vec![1]).unwrap();
        let spec = MeasureSpec::new(
            g.clone(),
            vec![Rational::one()],
            BTreeMap::from([((1, 1), EventuallyPolynomialSeq::constant(Rational::one()))]),
        )
        .unwrap();
        let t = Truncation::new(&g, 2);
        let m = truncated_matrix(&spec, None, &t).unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(m.nonzero_count(), 3);
        let c = t.position(VertexId::circuit(1)).unwrap();
        assert_eq!(m.get(c, c), &Rational::one());
        let b1 = t.position(VertexId::branch(1, 1, 1)).unwrap();
        let b2 = t.position(VertexId::branch(1, 1, 2)).unwrap();
        assert_eq!(m.get(b1, c), &Rational::one());
        assert_eq!(m.get(b2, b1), &Rational::one());
    }

    #[test]
    fn e1_circuit_column() {
        let e1 = corpus::e1().measure;
        let t = Truncation::new(e1.graph(), 4);
        let m = truncated_matrix(&e1, None, &t).unwrap();
        let rows: BTreeSet<VertexId> = m
            .column(t.position(VertexId::circuit(1)).unwrap())
            .iter()
            .map(|(row, _)| t.vertices()[*row])
            .collect();
        assert_eq!(
            rows,
            BTreeSet::from([VertexId::circuit(2), VertexId::branch(1, 1, 1), VertexId::branch(1, 2, 1)])
        );
    }

    #[test]
    fn zero_weight_gives_zero_matrix() {
        let e1 = corpus::e1().measure;
        let zero = WeightSpec::uniform(e1.graph(), Rational::zero());
        let t = Truncation::new(e1.graph(), 4);
        assert_eq!(truncated_matrix(&e1, Some(&zero), &t).unwrap().nonzero_count(), 0);
    }

    #[test]
    fn quadratic_form_examples() {
        let e1 = corpus::e1().measure;
        let t = Truncation::new(e1.graph(), 6);
        let d = defect_quadratic_form(&e1, None, DefectQuery::new(1, 2).unwrap(), &t).unwrap();
        assert!(!d.is_empty());
        assert!(d.values().all(Rational::is_zero));

        let d = defect_quadratic_form(&e1, None, DefectQuery::new(1, 1).unwrap(), &t).unwrap();
        assert_eq!(d[&VertexId::circuit(2)], Rational::from_integer(-2));

        let e2 = corpus::e2().measure;
        let t = Truncation::new(e2.graph(), 8);
        let d = defect_quadratic_form(&e2, None, DefectQuery::new(2, 2).unwrap(), &t).unwrap();
        assert!(d.values().all(Rational::is_zero));
    }

    #[test]
    fn window_too_small_is_rejected() {
        let e1 = corpus::e1().measure;
        let t = Truncation::new(e1.graph(), 4);
        let err = defect_quadratic_form(&e1, None, DefectQuery::new(1, 2).unwrap(), &t).unwrap_err();
        assert_eq!(err, Error::WindowTooSmall { depth: 4, required: 5 });
    }

    #[test]
    fn interior_window() {
        let e1 = corpus::e1().measure;
        let t = Truncation::new(e1.graph(), 6);
        let inner = t.interior(3);
        assert!(inner.contains(&VertexId::circuit(3)));
        assert!(inner.contains(&VertexId::branch(1, 2, 3)));
        assert!(!inner.contains(&VertexId::branch(1, 2, 4)));
    }

    #[test]
    fn off_diagonal_gram_entries_vanish() {
        let e3 = corpus::e3();
        let w = e3.weight.as_ref().unwrap();
        let t = Truncation::new(e3.measure.graph(), 8);
        let m = truncated_matrix(&e3.measure, Some(w), &t).unwrap();
        let inner = t.interior(3);
        for p in 1..=3 {
            for a in &inner {
                for b in &inner {
                    let g = gram_entry(&e3.measure, &m, &t, *a, *b, p).unwrap();
                    if a == b {
                        let expected = wgram_oracle(&e3.measure, w, *a, p).unwrap() * e3.measure.mu(*a).unwrap();
                        assert_eq!(g, expected);
                    } else {
                        assert!(g.is_zero(), "<M^{p} {a}, M^{p} {b}> = {g}");
                    }
                }
            }
        }
    }
}
