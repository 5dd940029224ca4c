use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vncap::analysis::AuditReport;
use vncap::channel::{run_channel, DilationChannel};
use vncap::depolarizing::{
    analytic_transcript, classical_use_transcript, quantum_capacity, DepolParams,
};
use vncap::entropy::{venn2, von_neumann_entropy, SubsystemEntropy};
use vncap::qmat::{
    hermitian_eigenvalues, partial_trace, random_density_with, random_unitary, DensityMatrix,
    SubsystemLayout,
};

const TOL: f64 = 1e-9;

fn bipartite(seed: u64, da: usize, db: usize) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_with(da * db, &mut rng)
        .relabel(SubsystemLayout::new(vec![da, db]).unwrap())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subadditivity_and_araki_lieb(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let rho = bipartite(seed, da, db);
        let s_a = rho.entropy_of(&[0]).unwrap();
        let s_b = rho.entropy_of(&[1]).unwrap();
        let s_ab = rho.entropy_of(&[0, 1]).unwrap();
        prop_assert!(s_ab <= s_a + s_b + TOL);
        prop_assert!(s_ab >= (s_a - s_b).abs() - TOL);
    }

    #[test]
    fn mutual_information_bounds(seed in any::<u64>()) {
        let rho = bipartite(seed, 2, 3);
        let v = venn2(&rho, &[0], &[1]).unwrap();
        prop_assert!(v.mutual >= -TOL);
        prop_assert!(v.mutual <= 2.0 * v.s_a.min(v.s_b) + TOL);
    }

    #[test]
    fn partial_trace_commutes_with_mixtures(s1 in any::<u64>(), s2 in any::<u64>(), w in 0.0f64..=1.0) {
        let a = bipartite(s1, 2, 2);
        let b = bipartite(s2, 2, 2);
        let mixed = DensityMatrix::mixture(&[w, 1.0 - w], &[a.clone(), b.clone()]).unwrap();
        let lhs = partial_trace(&mixed, &[0]).unwrap();
        let rhs = DensityMatrix::mixture(
            &[w, 1.0 - w],
            &[partial_trace(&a, &[0]).unwrap(), partial_trace(&b, &[0]).unwrap()],
        )
        .unwrap();
        prop_assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-12);
    }

    #[test]
    fn spectrum_is_unitarily_invariant(seed in any::<u64>(), dim in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density_with(dim, &mut rng);
        let u = random_unitary(dim, seed.wrapping_add(1));
        let conj = rho.conjugate_by(&u).unwrap();
        let e1 = hermitian_eigenvalues(rho.matrix()).unwrap();
        let e2 = hermitian_eigenvalues(conj.matrix()).unwrap();
        for (a, b) in e1.iter().zip(&e2) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        let s1 = von_neumann_entropy(&rho).unwrap();
        let s2 = von_neumann_entropy(&conj).unwrap();
        prop_assert!((s1 - s2).abs() < 1e-10);
    }

    #[test]
    fn tensor_is_associative(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let r = |s: u64, d: usize| random_density_with(d, &mut ChaCha8Rng::seed_from_u64(s));
        let (a, b, c) = (r(s1, 2), r(s2, 3), r(s3, 2));
        let left = a.tensor(&b).tensor(&c);
        let right = a.tensor(&b.tensor(&c));
        prop_assert!(left.matrix().max_abs_diff(right.matrix()) < 1e-15);
        prop_assert_eq!(left.layout().dims(), right.layout().dims());
    }

    #[test]
    fn depolarizing_is_symmetric_in_q(p in 0.0f64..=0.75, q in 0.0f64..=1.0) {
        let a = analytic_transcript(DepolParams::new(p, q).unwrap());
        let b = analytic_transcript(DepolParams::new(p, 1.0 - q).unwrap());
        prop_assert!((a.mutual_entanglement - b.mutual_entanglement).abs() < 1e-12);
        prop_assert!((a.loss - b.loss).abs() < 1e-12);
        let ca = classical_use_transcript(DepolParams::new(p, q).unwrap());
        let cb = classical_use_transcript(DepolParams::new(p, 1.0 - q).unwrap());
        prop_assert!((ca.mutual_info - cb.mutual_info).abs() < 1e-12);
    }

    #[test]
    fn capacity_decreases_with_noise(p1 in 0.0f64..=0.75, p2 in 0.0f64..=0.75) {
        let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        prop_assert!(quantum_capacity(hi) <= quantum_capacity(lo) + 1e-12);
        let a = analytic_transcript(DepolParams::new(lo, 0.5).unwrap());
        let b = analytic_transcript(DepolParams::new(hi, 0.5).unwrap());
        prop_assert!(b.loss >= a.loss - 1e-12);
    }

    #[test]
    fn transcript_invariants_on_random_channels(seed in any::<u64>(), q in 0.0f64..=1.0, env in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = DilationChannel::random(2, env, &mut rng);
        let rho = DensityMatrix::diagonal(&[q, 1.0 - q], SubsystemLayout::single(2)).unwrap();
        let t = run_channel(&ch, &rho).unwrap();
        prop_assert!(t.check_identities(TOL).is_ok());
        prop_assert!(t.fidelity >= -TOL && t.fidelity <= 1.0 + TOL);
        prop_assert!(t.mutual_entanglement >= -TOL);
        prop_assert!(t.mutual_entanglement <= 2.0 * t.s_in + TOL);
    }

    #[test]
    fn audit_merge_keeps_totals(n1 in 0usize..4, n2 in 0usize..4) {
        let build = |n: usize| {
            let mut r = AuditReport::new();
            for i in 0..n {
                r.record(i, &[], TOL);
            }
            r
        };
        let merged = build(n1).merge(build(n2));
        prop_assert_eq!(merged.trials, n1 + n2);
        prop_assert!(merged.passed());
    }
}
