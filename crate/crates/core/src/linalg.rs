//! Dense complex linear algebra shared by the numerical modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn diag(entries: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(entries))
}

pub fn real_diag(entries: &[f64]) -> CMatrix {
    diag(&entries.iter().map(|x| real(*x)).collect::<Vec<_>>())
}

/// Builds a matrix from row-major real entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|x| real(*x)))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |m - m†|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Frobenius inner product `tr(a† b)`.
pub fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// Only the lower triangle is read; callers check hermiticity first.
    pub fn new(m: &CMatrix) -> Self {
        let eig = SymmetricEigen::new(m.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
        Self { values, vectors }
    }

    /// `V f(Λ) V†` for a real-to-complex scalar function.
    pub fn apply<F: Fn(f64) -> Complex64>(&self, f: F) -> CMatrix {
        let d: Vec<Complex64> = self.values.iter().map(|x| f(*x)).collect();
        let mut scaled = self.vectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= d[k];
        }
        scaled * self.vectors.adjoint()
    }
}

/// Orthonormal basis (as columns) of `{x : a x = 0}` and the singular
/// values of `a`, using an SVD with a relative rank cutoff.
pub fn null_space(a: &CMatrix, rel_tol: f64) -> (CMatrix, Vec<f64>) {
    let ncols = a.ncols();
    // pad so the SVD yields a full set of right singular vectors
    let padded;
    let a = if a.nrows() < ncols {
        padded = a.clone().resize_vertically(ncols, ZERO);
        &padded
    } else {
        a
    };
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let cutoff = rel_tol * smax;
    let kernel_rows: Vec<usize> = (0..sv.len()).filter(|&k| smax == 0.0 || sv[k] <= cutoff).collect();
    let mut basis = CMatrix::zeros(ncols, kernel_rows.len());
    for (j, &k) in kernel_rows.iter().enumerate() {
        for r in 0..ncols {
            basis[(r, j)] = v_t[(k, r)].conj();
        }
    }
    (basis, sv)
}

/// Orthogonal projector onto the span of orthonormal columns.
pub fn projector(basis: &CMatrix) -> CMatrix {
    basis * basis.adjoint()
}

/// `½ ‖a − b‖₁` for Hermitian `a`, `b`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let diff = a - b;
    0.5 * HermitianEigen::new(&diff).values.iter().map(|x| x.abs()).sum::<f64>()
}

/// `tr ρ²`.
pub fn purity(rho: &CMatrix) -> f64 {
    frobenius_inner(rho, rho).re
}

/// Eigenvalues below this are rounding noise; their square roots would not be.
const SPECTRAL_FLOOR: f64 = 1e-13;

fn floored_sqrt(x: f64) -> f64 {
    if x < SPECTRAL_FLOOR {
        0.0
    } else {
        x.sqrt()
    }
}

/// Root fidelity `tr √(√ρ σ √ρ)`; equals `|⟨ψ|φ⟩|` on pure states.
pub fn root_fidelity(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let sqrt_rho = HermitianEigen::new(rho).apply(|x| real(floored_sqrt(x)));
    let inner = &sqrt_rho * sigma * &sqrt_rho;
    let inner = (&inner + inner.adjoint()) * real(0.5);
    HermitianEigen::new(&inner)
        .values
        .iter()
        .map(|x| floored_sqrt(*x))
        .sum()
}

/// Traces out the second factor of a `dim_a·dim_b` square matrix.
pub fn partial_trace_second(m: &CMatrix, dim_a: usize, dim_b: usize) -> CMatrix {
    assert_eq!(m.nrows(), dim_a * dim_b);
    CMatrix::from_fn(dim_a, dim_a, |i, j| {
        (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
    })
}

/// `tr_B |ψ⟩⟨ψ|` without forming the full outer product.
pub fn reduced_from_pure(psi: &CVector, dim_a: usize, dim_b: usize) -> CMatrix {
    assert_eq!(psi.len(), dim_a * dim_b);
    // ψ reshaped as dim_a × dim_b (row-major) is M; tr_B = M M†
    let m = CMatrix::from_fn(dim_a, dim_b, |i, k| psi[i * dim_b + k]);
    &m * m.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_eigen_of_complex_matrix() {
        let m = CMatrix::from_row_slice(2, 2, &[real(1.0), c(0.0, -1.0), c(0.0, 1.0), real(1.0)]);
        let e = HermitianEigen::new(&m);
        assert!((e.values[0] - 0.0).abs() < 1e-14);
        assert!((e.values[1] - 2.0).abs() < 1e-14);
        let back = e.apply(real);
        assert!(max_abs(&(back - &m)) < 1e-14);
    }

    #[test]
    fn null_space_of_rank_deficient_matrix() {
        let a = real_matrix(3, 3, &[1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]);
        let (basis, _) = null_space(&a, 1e-10);
        assert_eq!(basis.ncols(), 1);
        assert!(max_abs(&(&a * &basis)) < 1e-12);
        assert!((basis.column(0).norm() - 1.0).abs() < 1e-12);
        // a wide matrix still yields the complete kernel
        let wide = real_matrix(1, 3, &[1.0, 0.0, 0.0]);
        assert_eq!(null_space(&wide, 1e-10).0.ncols(), 2);
    }

    #[test]
    fn partial_trace_of_product_and_bell_state() {
        let a = real_diag(&[0.25, 0.75]);
        let b = real_diag(&[0.5, 0.2, 0.3]);
        let pt = partial_trace_second(&kron(&a, &b), 2, 3);
        assert!(max_abs(&(pt - &a)) < 1e-15);
        let s = 0.5_f64.sqrt();
        let bell = CVector::from_vec(vec![real(s), ZERO, ZERO, real(s)]);
        let red = partial_trace_second(&outer(&bell, &bell), 2, 2);
        assert!(max_abs(&(&red - real_diag(&[0.5, 0.5]))) < 1e-15);
        assert!(max_abs(&(reduced_from_pure(&bell, 2, 2) - red)) < 1e-15);
    }

    #[test]
    fn fidelity_and_distance_on_pure_states() {
        let psi = CVector::from_vec(vec![real(1.0), ZERO]);
        let phi = CVector::from_vec(vec![real(0.6), real(0.8)]);
        let f = root_fidelity(&outer(&psi, &psi), &outer(&phi, &phi));
        assert!((f - 0.6).abs() < 1e-12);
        let d = trace_distance(&outer(&psi, &psi), &outer(&phi, &phi));
        assert!((d - 0.8).abs() < 1e-12);
        assert!((purity(&real_diag(&[0.5, 0.5])) - 0.5).abs() < 1e-15);
    }
}
