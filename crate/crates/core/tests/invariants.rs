use num_bigint::BigInt;
use proptest::prelude::*;

use quantred::localization::{eta, induce_decomposition, LocalizationError};
use quantred::{
    decompose, generic_directions, invariant_part, make_flag_manifold, make_projective_space,
    multiplicity_support_check, positivity_certificate, rr_character, weyl_character, ManifoldSpec,
    RootDatum, Weight,
};

fn w(v: &[i64]) -> Weight {
    Weight::new(v.to_vec())
}

/// A projective space with a torus action of rank 1 or 2.
fn projective() -> impl Strategy<Value = ManifoldSpec> {
    (1usize..=2)
        .prop_flat_map(|rank| {
            let weight = prop::collection::vec(-2i64..=2, rank);
            (
                prop::collection::btree_set(weight, 2..=3),
                1i64..=3,
                prop::collection::vec(-2i64..=2, rank),
            )
        })
        .prop_map(|(weights, k, shift)| {
            let weights: Vec<Weight> = weights.into_iter().map(Weight::new).collect();
            make_projective_space(&weights, k, &Weight::new(shift)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polarization_independence(spec in projective(), i in 0usize..5, j in 0usize..5) {
        let dirs = generic_directions(&spec, 5);
        prop_assume!(i < dirs.len() && j < dirs.len());
        let a = rr_character(&spec, "L", &dirs[i], 3).unwrap();
        let b = rr_character(&spec, "L", &dirs[j], 3).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn decomposition_is_exact(spec in projective()) {
        let d = generic_directions(&spec, 1)[0].clone();
        let tiebreak = generic_directions(&spec, 2).pop();
        match decompose(&spec, "L", &d, tiebreak.as_ref(), 3) {
            Ok(dec) => {
                let mut sum = dec.zero.terms.clone();
                for m in dec.members() {
                    sum = sum.add(m.series.terms());
                }
                prop_assert_eq!(dec.window().restrict(&sum), dec.window().restrict(&dec.total));
                prop_assert_eq!(dec.zero.first_discrepancy(&dec.zero_pointwise), None);
            }
            // the tie-break may itself be orthogonal to a tied weight
            Err(LocalizationError::OrthogonalWeight { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn support_is_polarized(spec in projective()) {
        let d = generic_directions(&spec, 1)[0].clone();
        let tiebreak = generic_directions(&spec, 2).pop();
        let Ok(dec) = decompose(&spec, "L", &d, tiebreak.as_ref(), 3) else {
            return Ok(());
        };
        for s in &dec.strata {
            if !positivity_certificate(&spec, "L", &s.beta).unwrap().strictly_positive {
                continue;
            }
            for m in &s.members {
                let eta = eta(&spec, "L", &m.beta).unwrap();
                prop_assert!(multiplicity_support_check(spec.gram(), m, eta));
            }
        }
    }

    #[test]
    fn borel_weil(which in 0usize..3, a in 1i64..=3, b in 1i64..=3) {
        let datum = [RootDatum::a2(), RootDatum::b2(), RootDatum::a1_a1()][which].clone();
        let lambda = w(&[a, b]);
        let spec = make_flag_manifold(&datum, &lambda).unwrap();
        let d = generic_directions(&spec, 1)[0].clone();
        prop_assert_eq!(
            rr_character(&spec, "L", &d, 3).unwrap(),
            weyl_character(&lambda, &datum).unwrap()
        );
    }

    #[test]
    fn certified_strata_vanish(l in 1i64..=4, k in -4i64..=4) {
        prop_assume!(k != 0);
        let spec = make_flag_manifold(&RootDatum::su2(), &w(&[2 * l])).unwrap();
        let (spec, bundle) = quantred::tensor_power(&spec, "L", k).unwrap();
        let dec = decompose(&spec, &bundle, &w(&[1]), None, 3).unwrap();
        let induced = induce_decomposition(&dec, &spec.datum).unwrap();
        for (beta, g) in &induced.strata {
            if positivity_certificate(&spec, &bundle, beta).unwrap().holds_for(1) {
                prop_assert_eq!(invariant_part(g).unwrap(), BigInt::from(0));
            }
        }
    }
}
