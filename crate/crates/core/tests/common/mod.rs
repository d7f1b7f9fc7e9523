#![allow(dead_code)]

use std::collections::BTreeMap;

use kqm_core::numeric::binomial;
use kqm_core::{
    EventuallyConstantSeq, EventuallyPolynomialSeq, GraphSpec, MeasureSpec, Polynomial, Rational, VertexId,
    WeightSpec,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn positive(rng: &mut StdRng) -> Rational {
    Rational::new(rng.gen_range(1..=9), rng.gen_range(1..=4))
}

fn random_graph(rng: &mut StdRng, max_kappa: usize) -> GraphSpec {
    loop {
        let kappa = rng.gen_range(1..=max_kappa);
        let eta: Vec<usize> = (0..kappa).map(|_| rng.gen_range(0..=3)).collect();
        if let Ok(g) = GraphSpec::new(kappa, eta) {
            return g;
        }
    }
}

fn random_tail(rng: &mut StdRng, max_degree: usize) -> Polynomial {
    let degree = rng.gen_range(0..=max_degree);
    Polynomial::new((0..=degree).map(|_| positive(rng)).collect())
}

/// A valid spec with κ ≤ `max_kappa`, η_r ≤ 3, prefixes of length ≤ 3 and tails of degree ≤ 2
/// with positive coefficients.
pub fn random_measure_with(rng: &mut StdRng, max_kappa: usize) -> MeasureSpec {
    let g = random_graph(rng, max_kappa);
    let circuit = (0..g.kappa()).map(|_| positive(rng)).collect();
    let branch = g
        .branches()
        .map(|(r, i)| {
            let len = rng.gen_range(0..=3);
            let prefix = (0..len).map(|_| positive(rng)).collect();
            ((r, i), EventuallyPolynomialSeq::new(prefix, random_tail(rng, 2)))
        })
        .collect();
    let spec = MeasureSpec::new(g, circuit, branch).expect("shape is consistent");
    spec.validate().expect("positive data is always valid");
    spec
}

pub fn random_measure(rng: &mut StdRng) -> MeasureSpec {
    random_measure_with(rng, 4)
}

pub fn random_weight(rng: &mut StdRng, g: &GraphSpec) -> WeightSpec {
    let circuit = (0..g.kappa()).map(|_| positive(rng)).collect();
    let branch = g
        .branches()
        .map(|(r, i)| {
            let len = rng.gen_range(0..=2);
            let prefix = (0..len).map(|_| positive(rng)).collect();
            ((r, i), EventuallyConstantSeq { prefix, tail: positive(rng) })
        })
        .collect();
    WeightSpec::new(g.clone(), circuit, branch).expect("shape is consistent")
}

/// Solves `a x = b` over the rationals. `a` must be nonsingular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular system");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip().expect("nonzero pivot");
        for row in 0..n {
            if row != col && !a[row][col].is_zero() {
                let f = &a[row][col] * &inv;
                for c in col..n {
                    let d = &f * &a[col][c];
                    a[row][c] = &a[row][c] - &d;
                }
                let d = &f * &b[col];
                b[row] = &b[row] - &d;
            }
        }
    }
    (0..n).map(|r| &b[r] / &a[r][r]).collect()
}

/// A spec that is k-quasi-m-isometric by construction: branch tails of degree ≤ m − 2 from
/// index k + 1 on, and circuit measures solving the circuit defect equations.
pub fn random_quasi_isometric(rng: &mut StdRng, k: usize, m: usize) -> MeasureSpec {
    assert!(m >= 2);
    let g = random_graph(rng, 4);
    let kappa = g.kappa();
    let branch: BTreeMap<_, _> = g
        .branches()
        .map(|(r, i)| {
            let len = rng.gen_range(0..=k.min(3));
            let prefix = (0..len).map(|_| positive(rng)).collect();
            ((r, i), EventuallyPolynomialSeq::new(prefix, random_tail(rng, m - 2)))
        })
        .collect();
    let bare = MeasureSpec::new(g.clone(), vec![Rational::zero(); kappa], branch.clone()).unwrap();

    let coeff = |p: usize| {
        let c = Rational::from_big(binomial(m, p));
        if p % 2 == 0 { c } else { -c }
    };
    let mut a = vec![vec![Rational::zero(); kappa]; kappa];
    let mut b = vec![Rational::zero(); kappa];
    for r in 1..=kappa {
        for p in 0..=m {
            let n = p + k;
            let atom = kqm_core::oracle::enumerate_preimage(&g, VertexId::circuit(r), n).unwrap();
            for v in &atom {
                match v {
                    VertexId::Circuit { r: s } => a[r - 1][s - 1] = &a[r - 1][s - 1] + &coeff(p),
                    VertexId::Branch { .. } => b[r - 1] = &b[r - 1] - &(coeff(p) * bare.mu(*v).unwrap()),
                }
            }
        }
    }
    // The all-ones vector spans the kernel, so pin the last coordinate and shift afterwards.
    a[kappa - 1] = (0..kappa).map(|s| if s + 1 == kappa { Rational::one() } else { Rational::zero() }).collect();
    b[kappa - 1] = Rational::zero();
    let x = solve(a, b);
    let low = x.iter().min().unwrap().clone();
    let shift = positive(rng) - low;
    let circuit = x.iter().map(|v| v + &shift).collect();
    let spec = MeasureSpec::new(g, circuit, branch).unwrap();
    spec.validate().expect("constructed spec is valid");
    spec
}

/// A random eventually-polynomial sequence, possibly with a zero or cancelling tail.
pub fn random_sequence(rng: &mut StdRng) -> EventuallyPolynomialSeq {
    let degree = rng.gen_range(0..=4);
    let mut coeffs: Vec<Rational> = (0..=degree)
        .map(|_| Rational::new(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
        .collect();
    if rng.gen_bool(0.2) {
        coeffs.clear();
    }
    let tail = Polynomial::new(coeffs);
    let len = rng.gen_range(0..=3);
    let prefix = (0..len)
        .map(|t| {
            if rng.gen_bool(0.5) {
                tail.eval_at(t as i64 + 1)
            } else {
                Rational::new(rng.gen_range(-5..=5), rng.gen_range(1..=3))
            }
        })
        .collect();
    EventuallyPolynomialSeq::new(prefix, tail)
}
