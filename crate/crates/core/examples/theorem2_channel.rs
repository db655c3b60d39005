//! The induced channel on four qubits: a mixture of the two invariant
//! projectors is left alone by the bath, ground or thermal.

use qdfs::dfs::{joint_kernel, DEFAULT_REL_TOL};
use qdfs::dynamics::{
    theorem2_check, BathSpec, DensityMatrix, DynamicsSetup, HamiltonianSpec, ModeCoupling, SpinPoly, TimeGrid,
};
use qdfs::linalg::{outer, real};
use qdfs::rep::{build_operators, Preset};

fn main() {
    let mu = 0.7;
    let ops = build_operators(Preset::UqSu2, mu, 4).unwrap();
    let kernel = joint_kernel(&ops, DEFAULT_REL_TOL);
    println!("invariant subspace on 4 qubits: dimension {}", kernel.dim());
    let b = &kernel.basis;
    let m =
        outer(&b[0].amplitudes, &b[0].amplitudes) * real(0.3) + outer(&b[1].amplitudes, &b[1].amplitudes) * real(0.7);
    let rho_s = DensityMatrix::new((&m + m.adjoint()) * real(0.5)).unwrap();

    let bath = BathSpec {
        frequencies: vec![1.0],
        fock_cutoff: 6,
    };
    let couplings = [ModeCoupling { g: [0.2, 0.0], h: 0.1 }];
    let spec = HamiltonianSpec::standard(&bath, &couplings, SpinPoly::zero());
    let setup = DynamicsSetup::new(ops, bath, spec).unwrap();
    let grid = TimeGrid {
        t_max: 10.0,
        points: 21,
    };
    for (name, rho_b) in [
        ("ground", DensityMatrix::pure(&setup.bath_ground()).unwrap()),
        (
            "thermal β=1",
            DensityMatrix::thermal(&setup.bath.hamiltonian, 1.0).unwrap(),
        ),
    ] {
        let r = theorem2_check(&setup, &rho_s, &rho_b, &grid, 1e-9).unwrap();
        println!(
            "{name:<12} max ½‖L_t(ρ) − ρ‖₁ = {:.2e}, purity {:.6}",
            r.max_trace_distance(),
            r.min_purity()
        );
    }
}
