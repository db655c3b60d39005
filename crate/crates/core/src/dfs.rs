//! Invariant (decoherence-free) subspaces of the spin operators.

use serde::Serialize;

use crate::linalg::{max_abs, null_space, projector, CMatrix, CVector};
use crate::rep::{build_operators, Preset, QState, RepError, SpinOperatorSet};

pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Orthonormal basis of the joint kernel of K₃, K₊, K₋.
#[derive(Clone, Debug)]
pub struct InvariantSubspace {
    pub basis: Vec<QState>,
    pub n: usize,
    pub mu: f64,
    pub preset: Preset,
    /// Relative singular-value cutoff used for the rank decision.
    pub tolerance: f64,
    /// Absolute residual bound implied by the cutoff: `tolerance · σ_max`.
    pub residual_bound: f64,
    pub singular_values: Vec<f64>,
}

impl InvariantSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors as the columns of a matrix.
    pub fn basis_matrix(&self) -> CMatrix {
        let d = 1usize << self.n;
        let mut m = CMatrix::zeros(d, self.basis.len());
        for (j, v) in self.basis.iter().enumerate() {
            m.set_column(j, &v.amplitudes);
        }
        m
    }

    pub fn projector(&self) -> CMatrix {
        projector(&self.basis_matrix())
    }

    /// Norm of the component of `v` orthogonal to the subspace.
    pub fn leakage(&self, v: &CVector) -> f64 {
        (v - self.projector() * v).norm()
    }
}

/// Null space of the stacked `[K₃; K₊; K₋]` by SVD; singular values at or
/// below `rel_tol · σ_max` count as zero.
pub fn joint_kernel(ops: &SpinOperatorSet, rel_tol: f64) -> InvariantSubspace {
    kernel_of_stack(&ops.stacked(), ops, rel_tol)
}

/// Same as [`joint_kernel`] with the operator list in a caller-chosen order.
pub fn joint_kernel_ordered(ops: &SpinOperatorSet, order: [usize; 3], rel_tol: f64) -> InvariantSubspace {
    let gens = ops.generators();
    let d = ops.dim();
    let mut m = CMatrix::zeros(3 * d, d);
    for (slot, &g) in order.iter().enumerate() {
        m.view_mut((slot * d, 0), (d, d)).copy_from(gens[g].1);
    }
    kernel_of_stack(&m, ops, rel_tol)
}

fn kernel_of_stack(stack: &CMatrix, ops: &SpinOperatorSet, rel_tol: f64) -> InvariantSubspace {
    let (basis, singular_values) = null_space(stack, rel_tol);
    let smax = singular_values.iter().copied().fold(0.0, f64::max);
    InvariantSubspace {
        basis: basis
            .column_iter()
            .map(|col| QState {
                n: ops.n,
                amplitudes: col.into_owned(),
            })
            .collect(),
        n: ops.n,
        mu: ops.mu,
        preset: ops.preset(),
        tolerance: rel_tol,
        residual_bound: rel_tol * smax,
        singular_values,
    }
}

/// `(‖K₃v‖, ‖K₊v‖, ‖K₋v‖)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residuals {
    pub k3: f64,
    pub k_plus: f64,
    pub k_minus: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.k3.max(self.k_plus).max(self.k_minus)
    }
}

pub fn invariance_residual(state: &QState, ops: &SpinOperatorSet) -> Result<Residuals, RepError> {
    check_dims(state, ops)?;
    let v = &state.amplitudes;
    Ok(Residuals {
        k3: (&ops.k3 * v).norm(),
        k_plus: (&ops.k_plus * v).norm(),
        k_minus: (&ops.k_minus * v).norm(),
    })
}

/// `(‖K₁v‖, ‖K₂v‖)`, reported for the verbatim preset where K₁, K₂ are
/// the generators the recurrences define.
pub fn transverse_residual(state: &QState, ops: &SpinOperatorSet) -> Result<(f64, f64), RepError> {
    check_dims(state, ops)?;
    let v = &state.amplitudes;
    Ok(((ops.k1() * v).norm(), (ops.k2() * v).norm()))
}

fn check_dims(state: &QState, ops: &SpinOperatorSet) -> Result<(), RepError> {
    if state.amplitudes.len() != ops.dim() {
        return Err(RepError::DimensionMismatch {
            state: state.amplitudes.len(),
            ops: ops.dim(),
        });
    }
    Ok(())
}

/// Dimension of the joint kernel; odd registers have none.
pub fn singlet_multiplicity(n: usize, mu: f64, preset: Preset) -> Result<usize, RepError> {
    singlet_multiplicity_with(n, mu, preset, DEFAULT_REL_TOL)
}

pub fn singlet_multiplicity_with(n: usize, mu: f64, preset: Preset, rel_tol: f64) -> Result<usize, RepError> {
    let ops = build_operators(preset, mu, n)?;
    if n % 2 == 1 {
        return Ok(0);
    }
    Ok(joint_kernel(&ops, rel_tol).dim())
}

/// Number of spin-0 components in `(spin ½)^{⊗n}`:
/// `C(n, n/2) − C(n, n/2 + 1)` for even n, zero for odd n.
pub fn classical_singlet_count(n: usize) -> u64 {
    if n % 2 == 1 {
        return 0;
    }
    let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
    let n = n as u64;
    binom(n, n / 2) - binom(n, n / 2 + 1)
}

/// Frobenius distance between the orthogonal projectors of two subspaces.
pub fn subspace_distance(a: &InvariantSubspace, b: &InvariantSubspace) -> f64 {
    (a.projector() - b.projector()).norm()
}

/// Largest `‖w·v‖` over basis vectors `v` and nonempty words `w` of length
/// `≤ max_len` in K₃, K₊, K₋.
pub fn max_word_residual(space: &InvariantSubspace, ops: &SpinOperatorSet, max_len: usize) -> f64 {
    let gens = ops.generators();
    let mut worst: f64 = 0.0;
    for v in &space.basis {
        let mut frontier = vec![v.amplitudes.clone()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(frontier.len() * 3);
            for x in &frontier {
                for (_, g) in gens {
                    let y = g * x;
                    worst = worst.max(y.norm());
                    next.push(y);
                }
            }
            frontier = next;
        }
    }
    worst
}

/// Largest `|⟨b_i, b_j⟩ − δ_ij|` over the basis.
pub fn orthonormality_defect(space: &InvariantSubspace) -> f64 {
    let b = space.basis_matrix();
    let gram = b.adjoint() * &b;
    max_abs(&(gram - CMatrix::identity(space.dim(), space.dim())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{singlet_state, triplet_states};

    #[test]
    fn two_qubit_kernel_is_the_q_singlet() {
        for mu in [0.3, 0.7, 1.0] {
            let ops = build_operators(Preset::UqSu2, mu, 2).unwrap();
            let k = joint_kernel(&ops, DEFAULT_REL_TOL);
            assert_eq!(k.dim(), 1);
            let overlap = k.basis[0].inner(&singlet_state(mu)).norm();
            assert!((overlap - 1.0).abs() < 1e-10, "μ={mu}");
            assert!(orthonormality_defect(&k) < 1e-10);
        }
    }

    #[test]
    fn three_qubits_have_no_invariant_vector() {
        let ops = build_operators(Preset::UqSu2, 0.6, 3).unwrap();
        assert_eq!(joint_kernel(&ops, DEFAULT_REL_TOL).dim(), 0);
        assert_eq!(singlet_multiplicity(3, 0.6, Preset::UqSu2).unwrap(), 0);
    }

    #[test]
    fn residual_examples() {
        let ops = build_operators(Preset::UqSu2, 1.0, 2).unwrap();
        let r = invariance_residual(&QState::basis("++").unwrap(), &ops).unwrap();
        assert!((r.k3 - 1.0).abs() < 1e-15);
        assert!(r.k_plus.abs() < 1e-15);
        assert!((r.k_minus - 2f64.sqrt()).abs() < 1e-15);
        let wrong = QState::basis("+++").unwrap();
        assert!(matches!(
            invariance_residual(&wrong, &ops),
            Err(RepError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn triplet_middle_is_not_invariant() {
        let ops = build_operators(Preset::UqSu2, 0.7, 2).unwrap();
        let t = &triplet_states(0.7).unwrap()[1];
        assert!(invariance_residual(t, &ops).unwrap().max() > 0.1);
    }

    #[test]
    fn verbatim_singlet_has_zero_k3_but_transverse_residuals() {
        let ops = build_operators(Preset::PaperVerbatim, 0.7, 2).unwrap();
        let s = singlet_state(0.7);
        let r = invariance_residual(&s, &ops).unwrap();
        assert!(r.k3 < 1e-12);
        let (k1, k2) = transverse_residual(&s, &ops).unwrap();
        assert!(k1 > 1e-3 || k2 > 1e-3);
    }

    #[test]
    fn classical_counts_are_catalan() {
        let counts: Vec<u64> = (1..=8).map(classical_singlet_count).collect();
        assert_eq!(counts, vec![0, 1, 0, 2, 0, 5, 0, 14]);
    }

    #[test]
    fn kernel_does_not_depend_on_operator_order() {
        let ops = build_operators(Preset::UqSu2, 0.5, 4).unwrap();
        let base = joint_kernel(&ops, DEFAULT_REL_TOL);
        for order in [[2, 1, 0], [1, 0, 2], [0, 2, 1]] {
            let other = joint_kernel_ordered(&ops, order, DEFAULT_REL_TOL);
            assert!(subspace_distance(&base, &other) < 1e-9);
        }
    }

    #[test]
    fn kernel_is_stable_under_words() {
        let ops = build_operators(Preset::UqSu2, 0.7, 4).unwrap();
        let k = joint_kernel(&ops, DEFAULT_REL_TOL);
        assert!(max_word_residual(&k, &ops, 3) <= 10.0 * k.tolerance);
    }
}
