//! The two-qubit q-singlet and q-triplet against the deformed spin
//! operators, for a few values of μ.

use qdfs::dfs::invariance_residual;
use qdfs::rep::{build_operators, singlet_state, triplet_states, Preset};

fn main() {
    println!(
        "{:>5} {:>12} {:>12} {:>12} {:>14}",
        "μ", "‖K3 s‖", "‖K+ s‖", "‖K- s‖", "‖K t0‖ max"
    );
    for mu in [0.3, 0.5, 0.7, 0.9, 1.0] {
        let ops = build_operators(Preset::UqSu2, mu, 2).unwrap();
        let r = invariance_residual(&singlet_state(mu), &ops).unwrap();
        let t0 = &triplet_states(mu).unwrap()[1];
        let t = invariance_residual(t0, &ops).unwrap();
        println!(
            "{mu:>5} {:>12.2e} {:>12.2e} {:>12.2e} {:>14.4}",
            r.k3,
            r.k_plus,
            r.k_minus,
            t.max()
        );
    }
    let s = singlet_state(0.7);
    println!("\nsinglet at μ = 0.7 (basis ++, +-, -+, --):");
    for (i, a) in s.amplitudes.iter().enumerate() {
        println!("  {i}: {:+.16}", a.re);
    }
}
