//! Singlet ⊗ bath ground state under the default Hamiltonian: the joint
//! state stays u ⊗ e^{-i h_eff t} ζ, so the register never changes.

use qdfs::dynamics::{theorem1_check, BathSpec, DynamicsSetup, HamiltonianSpec, ModeCoupling, SpinPoly, TimeGrid};
use qdfs::rep::{build_operators, singlet_state, Preset};

fn main() {
    let mu = 0.7;
    let bath = BathSpec {
        frequencies: vec![1.0],
        fock_cutoff: 8,
    };
    let couplings = [ModeCoupling { g: [0.2, 0.0], h: 0.1 }];
    let spec = HamiltonianSpec::standard(&bath, &couplings, SpinPoly::zero());
    for term in &spec.terms {
        println!("  {term}");
    }
    let setup = DynamicsSetup::new(build_operators(Preset::UqSu2, mu, 2).unwrap(), bath, spec).unwrap();
    let grid = TimeGrid {
        t_max: 10.0,
        points: 11,
    };
    let r = theorem1_check(&setup, &singlet_state(mu), &setup.bath_ground(), &grid, 1e-9).unwrap();
    println!(
        "\n{:>5} {:>20} {:>12} {:>10}",
        "t", "1 - fidelity", "trace dist", "purity"
    );
    for i in 0..r.times.len() {
        println!(
            "{:>5.1} {:>20.3e} {:>12.3e} {:>10.6}",
            r.times[i],
            1.0 - r.fidelity[i],
            r.trace_distance[i],
            r.purity[i]
        );
    }
}
