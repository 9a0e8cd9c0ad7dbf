use std::collections::BTreeMap;

use proptest::prelude::*;

use gl_workbench::algebra::{vn_transform, CofinElement, Element, FinModalAlgebra};
use gl_workbench::duality::{dual_frame, find_isomorphism, q_filters, QSet};
use gl_workbench::experiments::{theorem_corpus, truncated_omega_frame};
use gl_workbench::formula::{parse, subformulas, Formula};
use gl_workbench::kripke::{
    classify_frame, frame_valid, frame_valid_exhaustive, heights, ExtNat, Frame, Model,
    ValidityLimits,
};
use gl_workbench::prover::{check_proof, Prover, ProverLimits, ProverOutcome};
use gl_workbench::WorldSet;

fn formula(vars: &'static [&'static str], depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        prop::sample::select(vars).prop_map(Formula::var),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::boxed),
            (inner.clone(), inner).prop_map(|(a, b)| a.and(b)),
        ]
    })
}

fn frame(max_worlds: usize) -> impl Strategy<Value = Frame> {
    (1..=max_worlds).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let edges = (0..n * n).filter(|&i| bits[i]).map(|i| (i / n, i % n));
            Frame::numbered(n, edges).unwrap()
        })
    })
}

fn model(max_worlds: usize) -> impl Strategy<Value = Model> {
    frame(max_worlds).prop_flat_map(|f| {
        let mask = WorldSet::full(f.len()).0;
        prop::collection::vec(any::<u128>(), 3).prop_map(move |raw| {
            let valuation = ["p", "q", "r"]
                .iter()
                .zip(raw)
                .map(|(v, bits)| (v.to_string(), WorldSet(bits & mask)))
                .collect();
            Model::new(f.clone(), valuation).unwrap()
        })
    })
}

fn cofin(max_exception: u64) -> impl Strategy<Value = CofinElement> {
    (
        prop::collection::btree_set(0..=max_exception, 0..6),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(ex, cofinite, omega)| {
            if cofinite {
                CofinElement::cofinite(ex, omega)
            } else {
                CofinElement::finite(ex, omega)
            }
        })
}

proptest! {
    #[test]
    fn print_parse_round_trip(phi in formula(&["p", "q", "r"], 8)) {
        let text = phi.to_string();
        prop_assert_eq!(parse(&text).unwrap(), phi);
    }

    #[test]
    fn subformula_count_bounded_by_size(phi in formula(&["p", "q"], 6)) {
        prop_assert!(subformulas(&phi).len() <= phi.size());
        prop_assert!(subformulas(&phi).contains(&phi));
    }

    #[test]
    fn diamond_is_not_box_not(phi in formula(&["p"], 4)) {
        let text = phi.to_string();
        prop_assert_eq!(
            parse(&format!("<>({text})")).unwrap(),
            parse(&format!("~[]~({text})")).unwrap()
        );
    }

    #[test]
    fn negation_flips_truth(m in model(5), phi in formula(&["p", "q", "r"], 5)) {
        for w in 0..m.frame.len() {
            prop_assert_eq!(
                m.satisfies(w, &phi.clone().not()).unwrap(),
                !m.satisfies(w, &phi).unwrap()
            );
        }
    }

    #[test]
    fn truth_set_matches_pointwise(m in model(5), phi in formula(&["p", "q", "r"], 5)) {
        let set = m.truth_set(&phi);
        for w in 0..m.frame.len() {
            prop_assert_eq!(set.contains(w), m.satisfies(w, &phi).unwrap());
        }
        prop_assert_eq!(m.model_true(&phi), set == m.frame.worlds());
    }

    #[test]
    fn pruned_validity_matches_enumeration(f in frame(4), phi in formula(&["p", "q"], 4)) {
        let limits = ValidityLimits::default();
        prop_assert_eq!(
            frame_valid(&f, &phi, &limits).unwrap(),
            frame_valid_exhaustive(&f, &phi, &limits).unwrap()
        );
    }

    #[test]
    fn frame_validity_is_the_equation_phi_equals_top(f in frame(4), phi in formula(&["p", "q"], 4)) {
        let alg = FinModalAlgebra::from_frame(f.clone());
        let eq = alg.equation_holds(&phi, &Formula::Top, &Default::default()).unwrap();
        prop_assert_eq!(frame_valid(&f, &phi, &ValidityLimits::default()).unwrap(), eq);
    }

    #[test]
    fn heights_decrease_along_edges(f in frame(6)) {
        let h = heights(&f);
        for (a, b) in f.edges() {
            if let (ExtNat::Finite(x), ExtNat::Finite(y)) = (h[a], h[b]) {
                prop_assert!(x > y);
            }
        }
        prop_assert_eq!(classify_frame(&f).locally_finite_height, f.is_acyclic());
    }

    #[test]
    fn modal_laws_and_chain_monotonicity(f in frame(6)) {
        let alg = FinModalAlgebra::from_frame(f);
        prop_assert!(alg.check_modal_laws());
        let chain = alg.diamond_chain();
        for pair in chain.chain.windows(2) {
            prop_assert!(alg.leq(pair[1], pair[0]));
        }
    }

    #[test]
    fn duality_round_trip_on_five_worlds(f in frame(5)) {
        let alg = FinModalAlgebra::from_frame(f.clone());
        let dual = dual_frame(&alg, &q_filters(&alg, &QSet::q0()).unwrap()).unwrap();
        prop_assert!(find_isomorphism(&dual, &f).is_some());
    }

    #[test]
    fn cofin_operations_match_truncation(x in cofin(10), y in cofin(10)) {
        let window = 20;
        let oracle = FinModalAlgebra::from_frame(truncated_omega_frame(window as usize));
        let t = |e: &CofinElement| Element(e.truncate(window));
        prop_assert_eq!(t(&x.complement()), oracle.complement(t(&x)));
        prop_assert_eq!(t(&x.meet(&y)), oracle.meet(t(&x), t(&y)));
        prop_assert_eq!(t(&x.join(&y)), oracle.join(t(&x), t(&y)));
        prop_assert_eq!(t(&x.box_op()), oracle.box_op(t(&x)).unwrap());
        prop_assert_eq!(t(&x.diamond()), oracle.diamond(t(&x)));
        prop_assert_eq!(x.leq(&y), oracle.leq(t(&x), t(&y)));
    }

    #[test]
    fn cofin_text_round_trip(x in cofin(12)) {
        prop_assert_eq!(x.to_string().parse::<CofinElement>().unwrap(), x);
    }

    #[test]
    fn vn_transform_toggles_only_n(x in cofin(10), n in 0u64..15) {
        let v = BTreeMap::from([("p".to_string(), x.clone())]);
        let y = &vn_transform(&v, n)["p"];
        // Canonical form survives: the text round trip is exact.
        prop_assert_eq!(&y.to_string().parse::<CofinElement>().unwrap(), y);
        prop_assert_eq!(y.contains_nat(n), x.omega_member);
        prop_assert_eq!(y.omega_member, x.omega_member);
        for m in (0..30).filter(|&m| m != n) {
            prop_assert_eq!(y.contains_nat(m), x.contains_nat(m));
        }
    }

    #[test]
    fn prover_outputs_verify(phi in formula(&["p", "q"], 5)) {
        match Prover::new(ProverLimits::default()).prove(&phi).unwrap() {
            ProverOutcome::Proof(tree) => prop_assert!(check_proof(&tree, &phi).is_ok()),
            ProverOutcome::Countermodel(cm) => prop_assert!(cm.verify(&phi)),
        }
    }

    #[test]
    fn theorems_closed_under_substitution(
        i in 0usize..12,
        psi in formula(&["p", "q", "r"], 3),
        var in prop::sample::select(&["p", "q"][..]),
    ) {
        let phi = &theorem_corpus()[i];
        let mut prover = Prover::new(ProverLimits::default());
        prop_assert!(prover.valid(phi).unwrap());
        prop_assert!(prover.valid(&phi.substitute(var, &psi)).unwrap());
    }

    #[test]
    fn valid_formulas_closed_under_generalization(phi in formula(&["p"], 4)) {
        let mut prover = Prover::new(ProverLimits::default());
        if prover.valid(&phi).unwrap() {
            prop_assert!(prover.valid(&phi.clone().boxed()).unwrap());
        }
        let taut = phi.clone().implies(phi);
        prop_assert!(prover.valid(&taut.clone().boxed()).unwrap());
    }
}
