//! Exact computer algebra for the S_μU(2) *-Hopf algebra.

mod hopf;
mod laurent;
mod ncpoly;
pub mod rewrite;
pub mod sampling;
mod tensor;
mod word;

pub use hopf::{
    adjoint, check_fundamental_unitarity, check_hopf_axioms, check_unitarity_of, fundamental_matrix, matmul,
    AlgebraMatrix, AxiomCheck, AxiomReport, Counterexample, HopfStructure, UnitarityReport,
};
pub use laurent::LaurentPoly;
pub use ncpoly::{normal_order, poly, NCPoly};
pub use tensor::TensorPoly;
pub use word::{Generator, Monomial, ParseWordError, Word};
