use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdfs::algebra::rewrite::{Rewriter, Strategy as RewriteStrategy};
use qdfs::algebra::sampling::{random_poly, rng_from_env};
use qdfs::algebra::{normal_order, Generator, HopfStructure, NCPoly, Word};
use qdfs::dynamics::{
    partial_trace_bath, BathSpec, DensityMatrix, DynamicsSetup, HamiltonianSpec, ModeCoupling, SpinPoly,
};
use qdfs::linalg::{c, kron_vec, max_abs, outer, real, trace, CMatrix, CVector};
use qdfs::rep::{build_operators, Preset, QState};

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..4, 0..=max_len)
        .prop_map(|ix| Word(ix.into_iter().map(|i| Generator::ALL[i]).collect()))
}

fn poly_from_seed(seed: u64) -> NCPoly {
    random_poly(&mut ChaCha8Rng::seed_from_u64(seed), 3, 3)
}

fn setup(mu: f64, g: (f64, f64), h: f64) -> DynamicsSetup {
    let bath = BathSpec {
        frequencies: vec![1.0],
        fock_cutoff: 5,
    };
    let couplings = [ModeCoupling { g: [g.0, g.1], h }];
    let spec = HamiltonianSpec::standard(&bath, &couplings, SpinPoly::zero());
    DynamicsSetup::new(build_operators(Preset::UqSu2, mu, 2).unwrap(), bath, spec).unwrap()
}

fn random_state(seed: u64, dim: usize) -> CVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = CVector::from_fn(dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let n = v.norm();
    v / real(n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rewriting_strategies_agree(w in word(6)) {
        let rw = Rewriter::default();
        let expected = normal_order(&w);
        prop_assert_eq!(rw.normalize_word(&w, RewriteStrategy::Leftmost), expected.clone());
        prop_assert_eq!(rw.normalize_word(&w, RewriteStrategy::Rightmost), expected);
    }

    #[test]
    fn star_is_an_involution(w in word(6)) {
        let p = normal_order(&w);
        prop_assert_eq!(p.star().star(), p);
    }

    #[test]
    fn star_reverses_products(a in word(4), b in word(4)) {
        let (p, q) = (normal_order(&a), normal_order(&b));
        prop_assert_eq!((&p * &q).star(), &q.star() * &p.star());
    }

    #[test]
    fn coproduct_is_multiplicative(s1 in any::<u64>(), s2 in any::<u64>()) {
        let hopf = HopfStructure::quantum_su2();
        let (p, q) = (poly_from_seed(s1), poly_from_seed(s2));
        prop_assert_eq!(hopf.coproduct(&(&p * &q)), &hopf.coproduct(&p) * &hopf.coproduct(&q));
    }

    #[test]
    fn counit_is_multiplicative(a in word(5), b in word(5)) {
        let hopf = HopfStructure::quantum_su2();
        let (p, q) = (normal_order(&a), normal_order(&b));
        prop_assert_eq!(hopf.counit(&(&p * &q)), hopf.counit(&p) * hopf.counit(&q));
    }

    #[test]
    fn antipode_is_antimultiplicative(a in word(3), b in word(3)) {
        let hopf = HopfStructure::quantum_su2();
        let (p, q) = (normal_order(&a), normal_order(&b));
        prop_assert_eq!(hopf.antipode(&(&p * &q)), &hopf.antipode(&q) * &hopf.antipode(&p));
    }
}

/// Φ is defined on generators; multiplicativity on normal-ordered products
/// means it respects the defining relations. Seeded by `QDFS_SEED`.
#[test]
fn coproduct_multiplicative_on_env_seeded_sample() {
    let hopf = HopfStructure::quantum_su2();
    let mut rng = rng_from_env();
    for _ in 0..1000 {
        let p = random_poly(&mut rng, 3, 3);
        let q = random_poly(&mut rng, 3, 3);
        assert_eq!(hopf.coproduct(&(&p * &q)), &hopf.coproduct(&p) * &hopf.coproduct(&q));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evolution_is_unitary_and_conserves_energy(
        mu in 0.2f64..1.0, gr in -0.5f64..0.5, gi in -0.5f64..0.5, h in -0.3f64..0.3,
        seed in any::<u64>(), t in 0.0f64..10.0,
    ) {
        let s = setup(mu, (gr, gi), h);
        let psi0 = random_state(seed, s.register_dim() * s.bath_dim());
        let psi = s.propagator().evolve_pure(&psi0, t);
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
        let e0 = psi0.dotc(&(&s.h * &psi0)).re;
        let e = psi.dotc(&(&s.h * &psi)).re;
        prop_assert!((e - e0).abs() < 1e-10);
    }

    #[test]
    fn evolution_is_a_one_parameter_group(seed in any::<u64>(), t1 in 0.0f64..5.0, t2 in 0.0f64..5.0) {
        let s = setup(0.7, (0.2, 0.0), 0.1);
        let p = s.propagator();
        let psi0 = random_state(seed, s.register_dim() * s.bath_dim());
        let direct = p.evolve_pure(&psi0, t1 + t2);
        let stepped = p.evolve_pure(&p.evolve_pure(&psi0, t1), t2);
        prop_assert!((direct - stepped).norm() < 1e-10);
    }

    #[test]
    fn channel_output_has_unit_trace(seed in any::<u64>(), t in 0.0f64..10.0, beta in 0.1f64..3.0) {
        let s = setup(0.7, (0.2, 0.0), 0.1);
        let v = random_state(seed, s.register_dim());
        let rho_s = DensityMatrix::pure(&v).unwrap();
        let rho_b = DensityMatrix::thermal(&s.bath.hamiltonian, beta).unwrap();
        let rho0 = DensityMatrix::product(&rho_s, &rho_b);
        let rho_t = DensityMatrix { matrix: s.propagator().evolve_mixed(&rho0.matrix, t), dims: rho0.dims };
        prop_assert!((trace(&rho_t.matrix) - real(1.0)).norm() < 1e-12);
        let reduced = partial_trace_bath(&rho_t).unwrap();
        prop_assert!((reduced.trace() - real(1.0)).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_state(s1, 4);
        let b = random_state(s2, 3);
        let rho = DensityMatrix::product(
            &DensityMatrix::pure(&a).unwrap(),
            &DensityMatrix::pure(&b).unwrap(),
        );
        let r = partial_trace_bath(&rho).unwrap();
        prop_assert!(max_abs(&(r.matrix - outer(&a, &a))) < 1e-14);
    }
}

/// `e^{−ih_B t}ζ` from the diagonal of `h_B`.
fn free_bath(h_b: &CMatrix, zeta: &CVector, t: f64) -> CVector {
    CVector::from_fn(zeta.len(), |i, _| c(0.0, -h_b[(i, i)].re * t).exp() * zeta[i])
}

/// Zero coupling: ψ(t) = u ⊗ e^{−ih_B t}ζ for any register vector.
#[test]
fn zero_coupling_leaves_register_untouched() {
    let s = setup(0.7, (0.0, 0.0), 0.0);
    let u = QState::basis("+-").unwrap();
    let zeta = random_state(7, s.bath_dim());
    for t in [0.0, 0.5, 3.0] {
        let psi = s.propagator().evolve_pure(&kron_vec(&u.amplitudes, &zeta), t);
        let expected = kron_vec(&u.amplitudes, &free_bath(&s.bath.hamiltonian, &zeta, t));
        assert!((psi - expected).norm() < 1e-12);
    }
}
