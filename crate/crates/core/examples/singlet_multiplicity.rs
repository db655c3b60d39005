//! Dimension of the joint kernel of K3, K+, K- on n qubits, next to the
//! number of spin-0 components of (spin ½)^⊗n.

use qdfs::dfs::{classical_singlet_count, joint_kernel, max_word_residual, DEFAULT_REL_TOL};
use qdfs::rep::{build_operators, Preset};

fn main() {
    let max_n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let mus = [0.3, 0.7, 1.0];
    print!("{:>3} {:>9}", "n", "classical");
    for mu in mus {
        print!(" {:>9}", format!("μ={mu}"));
    }
    println!(" {:>12}", "word resid.");
    for n in 1..=max_n {
        print!("{n:>3} {:>9}", classical_singlet_count(n));
        let mut worst: f64 = 0.0;
        for mu in mus {
            let ops = build_operators(Preset::UqSu2, mu, n).unwrap();
            let k = joint_kernel(&ops, DEFAULT_REL_TOL);
            worst = worst.max(max_word_residual(&k, &ops, 2));
            print!(" {:>9}", k.dim());
        }
        println!(" {worst:>12.1e}");
    }
}
