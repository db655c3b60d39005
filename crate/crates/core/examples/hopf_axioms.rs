//! Exact check of the Hopf *-algebra axioms with μ kept symbolic, plus a
//! broken antipode to show what a counterexample looks like.

use qdfs::algebra::{check_fundamental_unitarity, poly, Generator, HopfStructure, LaurentPoly};

fn main() {
    let max_len = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let hopf = HopfStructure::quantum_su2();

    println!("Φ(α) = {}", hopf.coproduct(&poly("α")));
    println!("Φ(γ) = {}", hopf.coproduct(&poly("γ")));
    println!("κ(γα*) = {}", hopf.antipode(&poly("γα*")));
    println!();

    let report = hopf.check_axioms(max_len);
    for c in &report.checks {
        println!(
            "{:<20} {:>5} cases  {}",
            c.name,
            c.cases,
            if c.passed { "ok" } else { "FAILED" }
        );
    }
    let u = check_fundamental_unitarity();
    println!("{:<20} u*u = [{}]", "unitarity", u.u_star_u.join(", "));

    let broken = hopf.with_antipode(Generator::Gamma, poly("γ").scale(&LaurentPoly::mu()));
    let r = broken.check_axioms(1);
    if let Some(c) = r.checks.iter().find(|c| !c.passed) {
        let ex = c
            .counterexample
            .as_ref()
            .expect("failed check carries a counterexample");
        println!(
            "\nwith κ(γ) = μγ: {} fails on {}: {} ≠ {}",
            c.name, ex.word, ex.lhs, ex.rhs
        );
    }
}
