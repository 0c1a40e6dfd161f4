//! Property tests over randomly drawn catalog graphs and invariants.

use std::f64::consts::PI;
use std::sync::OnceLock;

use fusionkit::dims::{dim_report, inverse_cartan_sum, weyl_relation_check};
use fusionkit::exactnum::CycReal;
use fusionkit::fusion::{build_fusion, Irrep, Kind};
use fusionkit::graphs::{catalog, rigidity_check, GraphSpec, Series};
use fusionkit::modact::{adjunction_holds, annular};
use fusionkit::modular::{invariant_for, solve_splitting, verify_splitting};
use fusionkit::qdims::{discriminant_suite, trig_identity_check, vertex_qdims};
use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn sl2_graphs() -> &'static [GraphSpec] {
    static CELL: OnceLock<Vec<GraphSpec>> = OnceLock::new();
    CELL.get_or_init(|| catalog(Kind::Sl2, 28).unwrap())
}

fn sl3_graphs() -> &'static [GraphSpec] {
    static CELL: OnceLock<Vec<GraphSpec>> = OnceLock::new();
    CELL.get_or_init(|| catalog(Kind::Sl3, 12).unwrap())
}

fn any_graph() -> impl Strategy<Value = &'static GraphSpec> {
    prop_oneof![
        (0..sl2_graphs().len()).prop_map(|i| &sl2_graphs()[i]),
        (0..sl3_graphs().len()).prop_map(|i| &sl3_graphs()[i]),
    ]
}

fn sl2_graph() -> impl Strategy<Value = &'static GraphSpec> {
    (0..sl2_graphs().len()).prop_map(|i| &sl2_graphs()[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn module_property_rigidity_adjunction(g in any_graph()) {
        let sys = build_fusion(g.kind, g.level).unwrap();
        let fam = annular(&sys, g).unwrap();
        prop_assert_eq!(fam.module_property(&sys), Ok(()));
        prop_assert!(rigidity_check(g, &fam.f, &fam.irreps));
        prop_assert!(adjunction_holds(&fam));
        prop_assert!(weyl_relation_check(&fam));
    }

    #[test]
    fn perron_frobenius_vector_is_exact(g in any_graph()) {
        let sys = build_fusion(g.kind, g.level).unwrap();
        let fam = annular(&sys, g).unwrap();
        let mu = vertex_qdims(&fam, &sys);
        prop_assert!(mu[0].is_one());
        let beta = sys.quantum_dim(sys.generator());
        for a in 0..g.rank() {
            let mut lhs = CycReal::zero(g.kappa()).unwrap();
            for b in 0..g.rank() {
                lhs = &lhs + &(&CycReal::from_int(g.kappa(), g.adjacency[(a, b)]).unwrap() * &mu[b]);
            }
            prop_assert_eq!(lhs, &beta * &mu[a]);
        }
    }

    #[test]
    fn sl2_spectrum_is_the_exponents(g in sl2_graph()) {
        let inv = invariant_for(g).unwrap();
        let adj = DMatrix::from_fn(g.rank(), g.rank(), |i, j| g.adjacency[(i, j)] as f64);
        let mut eig: Vec<f64> = SymmetricEigen::new(adj).eigenvalues.iter().copied().collect();
        let sys = build_fusion(Kind::Sl2, g.level).unwrap();
        let mut want: Vec<f64> = inv
            .exponent_indices()
            .into_iter()
            .map(|i| {
                let Irrep::Sl2(n) = sys.irrep(i) else { unreachable!() };
                2.0 * ((n + 1) as f64 * PI / g.kappa() as f64).cos()
            })
            .collect();
        eig.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        prop_assert_eq!(eig.len(), want.len());
        for (a, b) in eig.iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
        }
    }

    #[test]
    fn sl2_dimension_identities(g in sl2_graph()) {
        let sys = build_fusion(Kind::Sl2, g.level).unwrap();
        let fam = annular(&sys, g).unwrap();
        let d = dim_report(&fam);
        let v = d.d_n_values();
        prop_assert!(v.iter().eq(v.iter().rev()));
        let twice = inverse_cartan_sum(&fam).unwrap() * BigRational::from_integer(2.into());
        prop_assert_eq!(twice, BigRational::from_integer(d.d_h.clone()));
        if g.series == Series::A {
            let k = i64::from(g.level);
            prop_assert!(v.iter().enumerate().all(|(n, &x)| x == (n as i64 + 1) * (k + 1 - n as i64)));
        }
    }

    #[test]
    fn trig_identity_and_commutation(g in any_graph()) {
        let sys = build_fusion(g.kind, g.level).unwrap();
        let inv = invariant_for(g).unwrap();
        let c = trig_identity_check(&sys, &inv, 1e-9);
        prop_assert!(c.within_tol && c.exact, "{} vs {}", c.sum, c.expected);
        let (s, t) = inv.commutators();
        prop_assert!(s < 1e-8 && t < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn discriminant_integral_and_closed(k in 1u32..=12, sl3 in any::<bool>()) {
        let kind = if sl3 { Kind::Sl3 } else { Kind::Sl2 };
        prop_assume!(!sl3 || k <= 8);
        let d = discriminant_suite(&build_fusion(kind, k).unwrap()).unwrap();
        prop_assert_eq!(&d.d, &d.closed_form);
        prop_assert!(d.d > BigInt::from(0));
    }

    #[test]
    fn central_charge(k in 1u32..=30) {
        prop_assert!((Kind::Sl2.central_charge(k) - 3.0 * k as f64 / (k + 2) as f64).abs() < 1e-15);
        prop_assert!((Kind::Sl3.central_charge(k) - 8.0 * k as f64 / (k + 3) as f64).abs() < 1e-15);
    }

    #[test]
    fn splitting_verified_and_deterministic(i in 0..sl2_graphs().len()) {
        let g = &sl2_graphs()[i];
        prop_assume!(g.level <= 16);
        let sys = build_fusion(g.kind, g.level).unwrap();
        let inv = invariant_for(g).unwrap();
        let a = solve_splitting(&sys, &inv, 10_000_000).unwrap();
        prop_assert_eq!(verify_splitting(&sys, &inv, &a), Ok(()));
        prop_assert_eq!(a.len() as i64, inv.trace_zzt());
        let b = solve_splitting(&sys, &inv, 10_000_000).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
    }
}
