//! Noiseless quantum codes from the quantum group S_μU(2).
//!
//! * [`algebra`]: exact noncommutative polynomials over `ℚ[μ, μ⁻¹]`, normal
//!   ordering, and the Hopf *-algebra structure with an axiom checker.
//! * [`rep`]: n-qubit K₃, K₊, K₋ built one qubit at a time.
//! * [`dfs`]: the joint kernel of those operators (the invariant subspace).
//! * [`dynamics`]: register + bath Hamiltonians, exact evolution, the
//!   induced channel and the two theorem checks.
//! * [`report`]: TOML configuration, JSON/CSV reports and the commands
//!   behind the `qdfs` binary.

pub mod algebra;
pub mod dfs;
pub mod dynamics;
pub mod linalg;
pub mod rep;
pub mod report;
