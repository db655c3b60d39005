//! Same Hamiltonian, three initial register states. Only the invariant one
//! keeps its purity. Prints a CSV of the reduced purity against time.

use qdfs::dynamics::{pure_series, BathSpec, DynamicsSetup, HamiltonianSpec, ModeCoupling, SpinPoly, TimeGrid};
use qdfs::rep::{build_operators, singlet_state, triplet_states, Preset, QState};

fn main() {
    let mu = 0.7;
    let bath = BathSpec {
        frequencies: vec![1.0],
        fock_cutoff: 8,
    };
    let couplings = [ModeCoupling { g: [0.2, 0.0], h: 0.1 }];
    let spec = HamiltonianSpec::standard(&bath, &couplings, SpinPoly::zero());
    let setup = DynamicsSetup::new(build_operators(Preset::UqSu2, mu, 2).unwrap(), bath, spec).unwrap();
    let grid = TimeGrid {
        t_max: 10.0,
        points: 41,
    };
    let states = [
        ("singlet", singlet_state(mu)),
        ("triplet0", triplet_states(mu).unwrap()[1].clone()),
        ("plusplus", QState::basis("++").unwrap()),
    ];
    let runs: Vec<_> = states
        .iter()
        .map(|(_, u)| pure_series(&setup, u, &setup.bath_ground(), &grid).unwrap())
        .collect();
    println!("t,{}", states.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(","));
    for i in 0..grid.points {
        let cells: Vec<String> = runs.iter().map(|r| format!("{:.6}", r.purity[i])).collect();
        println!("{:.2},{}", runs[0].times[i], cells.join(","));
    }
    for ((name, _), r) in states.iter().zip(&runs) {
        eprintln!(
            "{name:<9} min purity {:.6}  min fidelity {:.6}",
            r.min_purity(),
            r.min_fidelity()
        );
    }
}
