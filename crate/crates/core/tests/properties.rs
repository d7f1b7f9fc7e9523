mod common;

use kqm_core::classifier::{branch_only_criterion, classify_composition, classify_weighted, DefectQuery};
use kqm_core::derivatives::{f_factor, h, wgram};
use kqm_core::oracle::{enumerate_preimage, gram_entry, h_oracle, truncated_matrix, wgram_oracle, Truncation};
use kqm_core::{Rational, VertexId, WeightSpec};
use proptest::prelude::*;

fn q(k: usize, m: usize) -> DefectQuery {
    DefectQuery::new(k, m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_forms_match_enumeration(seed in any::<u64>(), p in 0usize..=8) {
        let mut rng = common::rng(seed);
        let spec = common::random_measure(&mut rng);
        let w = common::random_weight(&mut rng, spec.graph());
        for v in spec.graph().vertices_to_depth(4) {
            prop_assert_eq!(h(&spec, v, p).unwrap(), h_oracle(&spec, v, p).unwrap());
            prop_assert_eq!(wgram(&spec, &w, v, p).unwrap(), wgram_oracle(&spec, &w, v, p).unwrap());
        }
    }

    #[test]
    fn radon_nikodym_cocycle(seed in any::<u64>(), p in 0usize..=4, s in 0usize..=4) {
        let mut rng = common::rng(seed);
        let spec = common::random_measure(&mut rng);
        for v in spec.graph().vertices_to_depth(3) {
            let lhs = h(&spec, v, p + s).unwrap() * spec.mu(v).unwrap();
            let mut rhs = Rational::zero();
            for y in enumerate_preimage(spec.graph(), v, s).unwrap() {
                rhs = rhs + h(&spec, y, p).unwrap() * spec.mu(y).unwrap();
            }
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn weighted_gram_factorizes(seed in any::<u64>(), p in 0usize..=6) {
        let mut rng = common::rng(seed);
        let spec = common::random_measure(&mut rng);
        let w = common::random_weight(&mut rng, spec.graph());
        for v in spec.graph().vertices_to_depth(4) {
            let product = h(&spec, v, p).unwrap() * f_factor(&spec, &w, v, p).unwrap();
            prop_assert_eq!(product, wgram_oracle(&spec, &w, v, p).unwrap());
        }
    }

    #[test]
    fn distinct_indicators_stay_orthogonal(seed in any::<u64>(), p in 1usize..=3) {
        let mut rng = common::rng(seed);
        let spec = common::random_measure_with(&mut rng, 3);
        let w = common::random_weight(&mut rng, spec.graph());
        let t = Truncation::new(spec.graph(), 6);
        let m = truncated_matrix(&spec, Some(&w), &t).unwrap();
        let inner = t.interior(p);
        for a in &inner {
            for b in &inner {
                if a < b {
                    prop_assert!(gram_entry(&spec, &m, &t, *a, *b, p).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn verdicts_are_monotone(seed in any::<u64>(), k in 0usize..=2, m in 2usize..=3) {
        let mut rng = common::rng(seed);
        let spec = common::random_quasi_isometric(&mut rng, k, m);
        prop_assert!(classify_composition(&spec, q(k, m)).unwrap().verdict);
        prop_assert!(classify_composition(&spec, q(k + 1, m)).unwrap().verdict);
        prop_assert!(classify_composition(&spec, q(k, m + 1)).unwrap().verdict);

        let other = common::random_measure(&mut rng);
        let w = common::random_weight(&mut rng, other.graph());
        for (k, m) in [(0, 1), (1, 1), (0, 2), (1, 2), (2, 3)] {
            if classify_weighted(&other, &w, q(k, m)).unwrap().verdict {
                prop_assert!(classify_weighted(&other, &w, q(k + 1, m)).unwrap().verdict);
                prop_assert!(classify_weighted(&other, &w, q(k, m + 1)).unwrap().verdict);
            }
        }
    }

    #[test]
    fn criteria_agree(seed in any::<u64>(), k in 0usize..=3, m in 2usize..=4) {
        let mut rng = common::rng(seed);
        for spec in [common::random_measure(&mut rng), common::random_quasi_isometric(&mut rng, k.min(2), m.min(3))] {
            let r = classify_composition(&spec, q(k, m)).unwrap();
            prop_assert_eq!(r.theorem_form_verdict, Some(r.per_vertex_verdict));
        }
    }

    #[test]
    fn unit_weight_is_unweighted(seed in any::<u64>(), k in 0usize..=3, m in 1usize..=3) {
        let mut rng = common::rng(seed);
        let spec = common::random_quasi_isometric(&mut rng, k.min(2), 2);
        let ones = WeightSpec::ones(spec.graph());
        let a = classify_composition(&spec, q(k, m)).unwrap();
        let b = classify_weighted(&spec, &ones, q(k, m)).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.circuit_defects, b.circuit_defects);
    }

    #[test]
    fn single_vertex_circuit_needs_only_branches(seed in any::<u64>(), k in 0usize..=3, m in 2usize..=4) {
        let mut rng = common::rng(seed);
        let spec = common::random_measure_with(&mut rng, 1);
        let full = classify_composition(&spec, q(k, m)).unwrap();
        let (holds, attains) = branch_only_criterion(&spec, q(k, m)).unwrap();
        prop_assert_eq!(full.verdict, holds);
        if attains {
            prop_assert!(full.strict);
        }
    }
}

#[test]
fn branch_only_rejects_longer_circuits() {
    let spec = kqm_core::corpus::e1().measure;
    assert!(branch_only_criterion(&spec, q(1, 2)).is_err());
}

#[test]
fn circuit_vertices_have_full_preimages() {
    let spec = kqm_core::corpus::e2().measure;
    let atom = enumerate_preimage(spec.graph(), VertexId::circuit(1), 3).unwrap();
    assert_eq!(atom, spec.graph().preimage(VertexId::circuit(1), 3).unwrap());
}
