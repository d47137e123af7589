use proptest::prelude::*;

use qdiscord::channels::{
    completely_depolarizing, default_kraus_rank, projective_channel, random_channel, Channel, MeasurementBasis,
};
use qdiscord::measures::entropy::{cond_mutual_info, dilate_on_a, info_loss, mutual_info, vn_entropy, TriDims};
use qdiscord::measures::scaling::per_projector_scaling_gap;
use qdiscord::qmat::c64;
use qdiscord::random::{complex_ginibre, haar_unitary, hs_density, rng_from_seed};
use qdiscord::states::{cq_state, random_cq_spec, random_cq_state, random_state};
use qdiscord::{BipartiteState, DimPair, QOperator, Subsystem};

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=3)
}

fn qubit_dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=2, 1usize..=3)
}

fn arbitrary_op(rows: usize, cols: usize) -> impl Strategy<Value = QOperator> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), rows * cols).prop_map(move |v| {
        let entries: Vec<_> = v.into_iter().map(|(re, im)| c64(re, im)).collect();
        QOperator::from_row_slice(rows, cols, &entries)
    })
}

fn op_pair() -> impl Strategy<Value = (QOperator, QOperator)> {
    (1usize..=4, 1usize..=4, 1usize..=3, 1usize..=3)
        .prop_flat_map(|(r1, c1, r2, c2)| (arbitrary_op(r1, c1), arbitrary_op(r2, c2)))
}

fn random_density(dim: usize, seed: u64) -> QOperator {
    hs_density(dim, &mut rng_from_seed(seed))
}

fn random_basis(dim: usize, seed: u64) -> MeasurementBasis {
    MeasurementBasis::new(haar_unitary(dim, &mut rng_from_seed(seed))).unwrap()
}

fn any_channel(d_in: usize, seed: u64) -> Channel {
    let d_out = 1 + (seed as usize) % 4;
    let rank = 1 + (seed as usize / 4) % default_kraus_rank(d_in, d_out);
    random_channel(d_in, d_out, rank, seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hs_norm_is_multiplicative((x, y) in op_pair()) {
        let lhs = x.tensor(&y).hs_norm();
        let rhs = x.hs_norm() * y.hs_norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn purity_is_multiplicative(da in 1usize..=4, db in 1usize..=4, seed: u64) {
        let rho = random_density(da, seed);
        let sigma = random_density(db, seed ^ 1);
        let lhs = rho.tensor(&sigma).purity().unwrap();
        let rhs = rho.purity().unwrap() * sigma.purity().unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace_and_is_linear((da, db) in dims(), seed: u64, t in 0.0f64..1.0) {
        let d = DimPair::new(da, db);
        let x = QOperator::from_matrix(complex_ginibre(d.total(), d.total(), &mut rng_from_seed(seed)));
        let y = QOperator::from_matrix(complex_ginibre(d.total(), d.total(), &mut rng_from_seed(seed ^ 7)));
        for keep in [Subsystem::A, Subsystem::B] {
            let px = x.partial_trace(d, keep).unwrap();
            prop_assert!((px.trace() - x.trace()).norm() <= 1e-12 * x.hs_norm().max(1.0));

            let mix = QOperator::from_matrix(x.matrix().scale(t) + y.matrix().scale(1.0 - t));
            let lhs = mix.partial_trace(d, keep).unwrap();
            let rhs = QOperator::from_matrix(px.matrix().scale(t) + y.partial_trace(d, keep).unwrap().matrix().scale(1.0 - t));
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }
    }

    #[test]
    fn eigendecomposition_reconstructs(dim in 1usize..=6, seed: u64) {
        let g = QOperator::from_matrix(complex_ginibre(dim, dim, &mut rng_from_seed(seed)));
        let h = g.hermitian_part();
        let eig = h.eig_hermitian().unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) <= 1e-10 * dim as f64);
        let v = eig.vectors.matrix();
        let gram = QOperator::from_matrix(v.adjoint() * v);
        prop_assert!(gram.max_abs_diff(&QOperator::identity(dim)) <= 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn constructors_are_valid_and_seeded((da, db) in dims(), seed: u64) {
        let s = random_state(da, db, seed);
        prop_assert!(s.rho().validate_density().is_ok());
        prop_assert_eq!(&s, &random_state(da, db, seed));
        let cq = random_cq_state(da, db, seed);
        prop_assert!(cq.rho().validate_density().is_ok());
        prop_assert_eq!(&cq, &random_cq_state(da, db, seed));
    }

    #[test]
    fn cq_state_is_weighted_block_sum((da, db) in dims(), seed: u64) {
        let spec = random_cq_spec(da, db, seed);
        let built = cq_state(&spec).unwrap();
        let mut sum = QOperator::zeros(da * db, da * db).into_matrix();
        for ((p, v), block) in spec.probs.iter().zip(&spec.basis).zip(&spec.blocks) {
            sum += QOperator::projector(v).tensor(block).matrix().scale(*p);
        }
        prop_assert!(built.rho().max_abs_diff(&QOperator::from_matrix(sum)) <= 1e-12);
    }

    #[test]
    fn channels_preserve_trace(d_in in 1usize..=4, seed: u64) {
        let ch = any_channel(d_in, seed);
        let rho = random_density(d_in, seed ^ 3);
        let out = ch.apply(&rho).unwrap();
        prop_assert!((out.trace().re - rho.trace().re).abs() <= 1e-12);
        prop_assert!(out.trace().im.abs() <= 1e-12);
        prop_assert!(out.validate_density().is_ok());
    }

    #[test]
    fn stinespring_dilation_matches_kraus_form(d_in in 1usize..=4, seed: u64) {
        let ch = any_channel(d_in, seed);
        let v = ch.stinespring();
        prop_assert!(v.isometry_deviation() <= 1e-10);
        let rho = random_density(d_in, seed ^ 5);
        let dilated = QOperator::from_matrix(v.matrix() * rho.matrix() * v.matrix().adjoint());
        let reduced = dilated.reduce(&[ch.d_out(), ch.kraus().len()], &[0]).unwrap();
        let direct = ch.apply(&rho).unwrap();
        let diff = QOperator::from_matrix(reduced.matrix() - direct.matrix());
        prop_assert!(diff.hs_norm() <= 1e-10);
        prop_assert!((dilated.trace() - rho.trace()).norm() <= 1e-12);
    }

    #[test]
    fn projective_channels_are_idempotent(dim in 1usize..=4, seed: u64) {
        let pi = projective_channel(&random_basis(dim, seed));
        let rho = random_density(dim, seed ^ 9);
        let once = pi.apply(&rho).unwrap();
        let twice = pi.apply(&once).unwrap();
        let diff = QOperator::from_matrix(twice.matrix() - once.matrix());
        prop_assert!(diff.hs_norm() <= 1e-12);
    }

    #[test]
    fn per_projector_scaling_holds_for_every_basis((da, db) in dims(), d_anc in 1usize..=3, seed: u64) {
        let s = random_state(da, db, seed);
        let sigma = random_density(d_anc, seed ^ 11);
        let basis = random_basis(da, seed ^ 13);
        prop_assert!(per_projector_scaling_gap(&s, &sigma, &basis).unwrap() <= 1e-12);
    }

    #[test]
    fn entropies_are_in_range((da, db) in dims(), seed: u64) {
        let s = random_state(da, db, seed);
        let total = vn_entropy(s.rho()).unwrap();
        prop_assert!((-1e-12..=((da * db) as f64).log2() + 1e-12).contains(&total));
        let mi = mutual_info(&s).unwrap();
        let cap = 2.0 * (da.min(db) as f64).log2();
        prop_assert!(mi >= -1e-12 && mi <= cap + 1e-9);
    }

    #[test]
    fn info_loss_is_nonnegative_and_equals_dilated_cmi((da, db) in dims(), seed: u64) {
        let s = random_state(da, db, seed);
        let ch = any_channel(da, seed ^ 17);
        let loss = info_loss(&s, &ch).unwrap();
        prop_assert!(loss >= -1e-9);
        let (tri, tri_dims) = dilate_on_a(&s, &ch).unwrap();
        let cmi = cond_mutual_info(&tri, tri_dims).unwrap();
        prop_assert!(cmi >= -1e-9);
        prop_assert!((loss - cmi).abs() <= 1e-10, "{loss} vs {cmi}");
    }

    #[test]
    fn depolarizing_a_destroys_all_correlations((da, db) in dims(), seed: u64) {
        let s = random_state(da, db, seed);
        let loss = info_loss(&s, &completely_depolarizing(da)).unwrap();
        prop_assert!((loss - mutual_info(&s).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn product_tripartite_state_has_no_cmi(a in 1usize..=3, b in 1usize..=3, c in 1usize..=2, seed: u64) {
        let rho = random_density(a, seed).tensor(&random_density(b, seed ^ 1)).tensor(&random_density(c, seed ^ 2));
        let cmi = cond_mutual_info(&rho, TriDims { d_a: a, d_b: b, d_c: c }).unwrap();
        prop_assert!(cmi.abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn json_roundtrip_is_exact((da, db) in dims(), seed: u64) {
        let s = random_state(da, db, seed);
        let back = BipartiteState::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back.rho(), s.rho());
        prop_assert_eq!(back.dims(), s.dims());

        let ch = any_channel(da, seed);
        let back = Channel::from_json(&ch.to_json()).unwrap();
        prop_assert_eq!(back.kraus(), ch.kraus());
    }

    #[test]
    fn optimizer_scaling_matches_purity((da, db) in qubit_dims(), seed: u64) {
        use qdiscord::measures::geometric_discord;
        use qdiscord::optimize::OptConfig;
        let opt = OptConfig::default();
        let s = random_state(da, db, seed);
        let sigma = random_density(2, seed ^ 19);
        let before = geometric_discord(&s, &opt).unwrap().value;
        let after = geometric_discord(&s.with_ancilla(&sigma).unwrap(), &opt).unwrap().value;
        prop_assert!((after - before * sigma.purity().unwrap()).abs() <= 1e-8);
    }
}
