//! The literal recurrences for K3, K1, K2 compared with the U_q(su2)
//! coproduct. With the base K3 = diag(1/(2μ²), −μ²/2) the two-qubit K3
//! kills the singlet, but K1 and K2 do not.

use qdfs::dfs::{invariance_residual, joint_kernel, transverse_residual, DEFAULT_REL_TOL};
use qdfs::rep::{build_operators, singlet_state, Preset};

fn main() {
    for mu in [0.5, 0.7, 0.9, 1.0] {
        let s = singlet_state(mu);
        for preset in [Preset::UqSu2, Preset::PaperVerbatim] {
            let ops = build_operators(preset, mu, 2).unwrap();
            let r = invariance_residual(&s, &ops).unwrap();
            let (k1, k2) = transverse_residual(&s, &ops).unwrap();
            let dim = joint_kernel(&ops, DEFAULT_REL_TOL).dim();
            println!(
                "μ={mu:<4} {preset:<15} K3 {:.1e}  K1 {k1:.4}  K2 {k2:.4}  kernel dim {dim}",
                r.k3
            );
        }
    }
    let ops = build_operators(Preset::PaperVerbatim, 0.7, 1).unwrap();
    println!(
        "\nverbatim single-qubit K3 at μ=0.7: diag({:.6}, {:.6})",
        ops.k3[(0, 0)].re,
        ops.k3[(1, 1)].re
    );
}
