//! Register + bath Hamiltonians of the form `h = Σ_a P_a(K₃, K₊, K₋) ⊗ T_a`,
//! exact unitary evolution, and the induced channel on the register.
//!
//! Ordering of the joint space is register ⊗ bath (bath index fastest).
//! ħ = 1 throughout.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dfs::{invariance_residual, joint_kernel, DEFAULT_REL_TOL};
use crate::linalg::{
    frobenius_inner, hermiticity_defect, identity, kron, kron_vec, max_abs, outer, partial_trace_second, purity, real,
    reduced_from_pure, root_fidelity, trace, trace_distance, CMatrix, CVector, HermitianEigen, ZERO,
};
use crate::rep::{Preset, QState, RepError, SpinOperatorSet};

/// Absolute hermiticity tolerance, scaled by `max(1, max|h_ij|)`.
pub const HERMITICITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("Fock cutoff must be at least 2 (got {0})")]
    InvalidCutoff(usize),
    #[error("bath needs at least one mode")]
    EmptyBath,
    #[error("bath mode {mode} out of range ({modes} modes)")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error(
        "Hamiltonian is not Hermitian (defect {defect:.3e}); largest anti-Hermitian contribution from term {term}"
    )]
    NonHermitian { term: usize, defect: f64 },
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("density matrix has no recorded register ⊗ bath structure")]
    MissingBipartite,
    #[error("register state is not invariant: residual {residual:.3e} exceeds {tolerance:.1e}")]
    NotInvariant { residual: f64, tolerance: f64 },
    #[error("register state leaks outside the invariant subspace by {leakage:.3e} (tolerance {tolerance:.1e})")]
    Leakage { leakage: f64, tolerance: f64 },
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Harmonic bath modes with a common Fock cutoff.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSpec {
    pub frequencies: Vec<f64>,
    pub fock_cutoff: usize,
}

impl BathSpec {
    pub fn modes(&self) -> usize {
        self.frequencies.len()
    }

    pub fn dim(&self) -> usize {
        self.fock_cutoff.pow(self.frequencies.len() as u32)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if self.fock_cutoff < 2 {
            return Err(DynamicsError::InvalidCutoff(self.fock_cutoff));
        }
        if self.frequencies.is_empty() {
            return Err(DynamicsError::EmptyBath);
        }
        Ok(())
    }
}

/// Truncated ladder operators on the full bath space and `h_B = Σ ω_k b_k†b_k`.
#[derive(Clone, Debug)]
pub struct BathOperators {
    pub annihilators: Vec<CMatrix>,
    pub creators: Vec<CMatrix>,
    pub hamiltonian: CMatrix,
}

impl BathOperators {
    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }
}

/// `b|n⟩ = √n|n−1⟩` on one mode; `b†` has no image above the cutoff.
pub fn single_mode_annihilator(cutoff: usize) -> CMatrix {
    let mut b = CMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        b[(n - 1, n)] = real((n as f64).sqrt());
    }
    b
}

pub fn bath_operators(spec: &BathSpec) -> Result<BathOperators, DynamicsError> {
    spec.validate()?;
    let m = spec.modes();
    let cut = spec.fock_cutoff;
    let b1 = single_mode_annihilator(cut);
    let embed = |op: &CMatrix, k: usize| {
        let left = identity(cut.pow(k as u32));
        let right = identity(cut.pow((m - k - 1) as u32));
        kron(&kron(&left, op), &right)
    };
    let annihilators: Vec<CMatrix> = (0..m).map(|k| embed(&b1, k)).collect();
    let creators: Vec<CMatrix> = annihilators.iter().map(|b| b.adjoint()).collect();
    let mut hamiltonian = CMatrix::zeros(spec.dim(), spec.dim());
    for k in 0..m {
        hamiltonian += (&creators[k] * &annihilators[k]) * real(spec.frequencies[k]);
    }
    Ok(BathOperators {
        annihilators,
        creators,
        hamiltonian,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpinSymbol {
    K3,
    KPlus,
    KMinus,
}

/// Polynomial in K₃, K₊, K₋ with complex coefficients; words are operator
/// products read left to right, the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpinPoly {
    pub terms: Vec<(Complex64, Vec<SpinSymbol>)>,
}

impl SpinPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self {
            terms: vec![(c, Vec::new())],
        }
    }

    pub fn symbol(s: SpinSymbol) -> Self {
        Self {
            terms: vec![(real(1.0), vec![s])],
        }
    }

    pub fn word(c: Complex64, word: &[SpinSymbol]) -> Self {
        Self {
            terms: vec![(c, word.to_vec())],
        }
    }

    pub fn plus(mut self, other: SpinPoly) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| *c == ZERO)
    }

    /// Substitutes the register operators.
    pub fn eval(&self, ops: &SpinOperatorSet) -> CMatrix {
        let d = ops.dim();
        let mut out = CMatrix::zeros(d, d);
        for (c, word) in &self.terms {
            let mut m = identity(d);
            for s in word {
                m *= match s {
                    SpinSymbol::K3 => &ops.k3,
                    SpinSymbol::KPlus => &ops.k_plus,
                    SpinSymbol::KMinus => &ops.k_minus,
                };
            }
            out += m * *c;
        }
        out
    }

    /// The character with `χ(K) = 0`, `χ(1) = 1`, extended multiplicatively:
    /// only the constant term survives.
    pub fn chi(&self) -> Complex64 {
        self.terms.iter().filter(|(_, w)| w.is_empty()).map(|(c, _)| *c).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BathSymbol {
    Annihilate(usize),
    Create(usize),
}

/// Polynomial in the `b_k`, `b_k†`; the empty word is the bath identity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BathExpr {
    pub terms: Vec<(Complex64, Vec<BathSymbol>)>,
}

impl BathExpr {
    pub fn identity() -> Self {
        Self {
            terms: vec![(real(1.0), Vec::new())],
        }
    }

    pub fn word(c: Complex64, word: &[BathSymbol]) -> Self {
        Self {
            terms: vec![(c, word.to_vec())],
        }
    }

    pub fn plus(mut self, other: BathExpr) -> Self {
        self.terms.extend(other.terms);
        self
    }

    /// `Σ ω_k b_k† b_k`.
    pub fn free_hamiltonian(spec: &BathSpec) -> Self {
        Self {
            terms: spec
                .frequencies
                .iter()
                .enumerate()
                .map(|(k, w)| (real(*w), vec![BathSymbol::Create(k), BathSymbol::Annihilate(k)]))
                .collect(),
        }
    }

    /// Formal adjoint: conjugated coefficients, reversed words, b ↔ b†.
    pub fn adjoint(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(c, w)| {
                    let w = w
                        .iter()
                        .rev()
                        .map(|s| match s {
                            BathSymbol::Annihilate(k) => BathSymbol::Create(*k),
                            BathSymbol::Create(k) => BathSymbol::Annihilate(*k),
                        })
                        .collect();
                    (c.conj(), w)
                })
                .collect(),
        }
    }

    pub fn scale(&self, f: Complex64) -> Self {
        Self {
            terms: self.terms.iter().map(|(c, w)| (c * f, w.clone())).collect(),
        }
    }

    pub fn eval(&self, bath: &BathOperators) -> Result<CMatrix, DynamicsError> {
        let d = bath.dim();
        let modes = bath.annihilators.len();
        let mut out = CMatrix::zeros(d, d);
        for (c, word) in &self.terms {
            let mut m = identity(d);
            for s in word {
                let (k, op) = match s {
                    BathSymbol::Annihilate(k) => (*k, &bath.annihilators),
                    BathSymbol::Create(k) => (*k, &bath.creators),
                };
                let op = op.get(k).ok_or(DynamicsError::ModeOutOfRange { mode: k, modes })?;
                m *= op;
            }
            out += m * *c;
        }
        Ok(out)
    }
}

/// One summand `P(K) ⊗ T`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingTerm {
    pub system: SpinPoly,
    pub bath: BathExpr,
}

impl fmt::Display for SpinSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpinSymbol::K3 => "K3",
            SpinSymbol::KPlus => "K+",
            SpinSymbol::KMinus => "K-",
        })
    }
}

impl fmt::Display for BathSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BathSymbol::Annihilate(k) => write!(f, "b{k}"),
            BathSymbol::Create(k) => write!(f, "b{k}†"),
        }
    }
}

fn write_sum<S: fmt::Display>(f: &mut fmt::Formatter<'_>, terms: &[(Complex64, Vec<S>)]) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (c, w)) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str(" + ")?;
        }
        write!(f, "({c})")?;
        for s in w {
            write!(f, "·{s}")?;
        }
    }
    Ok(())
}

impl fmt::Display for CouplingTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_sum(f, &self.system.terms)?;
        f.write_str("] ⊗ [")?;
        write_sum(f, &self.bath.terms)?;
        f.write_str("]")
    }
}

/// The full list of summands, `h_S`, `h_B` and `h_I` included.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HamiltonianSpec {
    pub terms: Vec<CouplingTerm>,
}

/// Per-mode coefficients of `T = Σ g_k b_k` and `T′ = Σ h_k (b_k + b_k†)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeCoupling {
    /// `[re, im]` of `g_k`.
    pub g: [f64; 2],
    pub h: f64,
}

impl HamiltonianSpec {
    /// `h = h_S ⊗ 1 + 1 ⊗ h_B + K₊⊗T + K₋⊗T† + K₃⊗T′`.
    pub fn standard(bath: &BathSpec, couplings: &[ModeCoupling], system: SpinPoly) -> Self {
        let mut t = BathExpr::default();
        let mut t_prime = BathExpr::default();
        for (k, mc) in couplings.iter().enumerate() {
            t = t.plus(BathExpr::word(
                Complex64::new(mc.g[0], mc.g[1]),
                &[BathSymbol::Annihilate(k)],
            ));
            t_prime = t_prime
                .plus(BathExpr::word(real(mc.h), &[BathSymbol::Annihilate(k)]))
                .plus(BathExpr::word(real(mc.h), &[BathSymbol::Create(k)]));
        }
        let mut terms = Vec::new();
        if !system.is_zero() {
            terms.push(CouplingTerm {
                system,
                bath: BathExpr::identity(),
            });
        }
        terms.push(CouplingTerm {
            system: SpinPoly::constant(real(1.0)),
            bath: BathExpr::free_hamiltonian(bath),
        });
        if !t.terms.is_empty() {
            terms.push(CouplingTerm {
                system: SpinPoly::symbol(SpinSymbol::KPlus),
                bath: t.clone(),
            });
            terms.push(CouplingTerm {
                system: SpinPoly::symbol(SpinSymbol::KMinus),
                bath: t.adjoint(),
            });
            terms.push(CouplingTerm {
                system: SpinPoly::symbol(SpinSymbol::K3),
                bath: t_prime,
            });
        }
        Self { terms }
    }

    /// Multiplies every bath operator by `f`.
    pub fn scale_bath(&self, f: Complex64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| CouplingTerm {
                    system: t.system.clone(),
                    bath: t.bath.scale(f),
                })
                .collect(),
        }
    }
}

/// `h = Σ P_a(K) ⊗ T_a`, rejected unless Hermitian.
pub fn assemble_hamiltonian(
    ops: &SpinOperatorSet,
    bath: &BathOperators,
    spec: &HamiltonianSpec,
) -> Result<CMatrix, DynamicsError> {
    let dim = ops.dim() * bath.dim();
    let mut h = CMatrix::zeros(dim, dim);
    let mut parts = Vec::with_capacity(spec.terms.len());
    for term in &spec.terms {
        let m = kron(&term.system.eval(ops), &term.bath.eval(bath)?);
        h += &m;
        parts.push(m);
    }
    let defect = hermiticity_defect(&h);
    if defect > HERMITICITY_TOL * max_abs(&h).max(1.0) {
        let residual = &h - h.adjoint();
        let term = parts
            .iter()
            .enumerate()
            .map(|(i, m)| (i, frobenius_inner(&(m - m.adjoint()), &residual).norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        return Err(DynamicsError::NonHermitian { term, defect });
    }
    // exact symmetrization removes rounding-level asymmetry
    Ok((&h + h.adjoint()) * real(0.5))
}

/// `h_eff = Σ χ(P_a) T_a` on the bath.
pub fn chi_effective(bath: &BathOperators, spec: &HamiltonianSpec) -> Result<CMatrix, DynamicsError> {
    let d = bath.dim();
    let mut out = CMatrix::zeros(d, d);
    for term in &spec.terms {
        let chi = term.system.chi();
        if chi != ZERO {
            out += term.bath.eval(bath)? * chi;
        }
    }
    Ok(out)
}

/// A density matrix, optionally tagged with register ⊗ bath dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub matrix: CMatrix,
    pub dims: Option<(usize, usize)>,
}

pub const TRACE_TOL: f64 = 1e-12;
pub const NEGATIVITY_TOL: f64 = 1e-10;

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self, DynamicsError> {
        if !matrix.is_square() {
            return Err(DynamicsError::InvalidDensity("not square".into()));
        }
        let herm = hermiticity_defect(&matrix);
        if herm > 1e-12 {
            return Err(DynamicsError::InvalidDensity(format!(
                "not Hermitian (defect {herm:.3e})"
            )));
        }
        let tr = trace(&matrix);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(DynamicsError::InvalidDensity(format!("trace {tr} ≠ 1")));
        }
        let min = HermitianEigen::new(&matrix).values.first().copied().unwrap_or(0.0);
        if min < -NEGATIVITY_TOL {
            return Err(DynamicsError::InvalidDensity(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { matrix, dims: None })
    }

    pub fn pure(v: &CVector) -> Result<Self, DynamicsError> {
        let n = v.norm();
        if (n - 1.0).abs() > 1e-12 {
            return Err(DynamicsError::InvalidDensity(format!("state norm {n} ≠ 1")));
        }
        Ok(Self {
            matrix: outer(v, v),
            dims: None,
        })
    }

    /// `ρ_S ⊗ ρ_B` with the bipartition recorded.
    pub fn product(register: &DensityMatrix, bath: &DensityMatrix) -> Self {
        Self {
            matrix: kron(&register.matrix, &bath.matrix),
            dims: Some((register.dim(), bath.dim())),
        }
    }

    /// `e^{−βh}/Z` for Hermitian `h`.
    pub fn thermal(h: &CMatrix, beta: f64) -> Result<Self, DynamicsError> {
        let eig = HermitianEigen::new(h);
        let e0 = eig.values.first().copied().unwrap_or(0.0);
        let z: f64 = eig.values.iter().map(|e| (-beta * (e - e0)).exp()).sum();
        let matrix = eig.apply(|e| real((-beta * (e - e0)).exp() / z));
        Self::new((&matrix + matrix.adjoint()) * real(0.5))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        trace(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        purity(&self.matrix)
    }
}

/// `tr_B ρ`.
pub fn partial_trace_bath(rho: &DensityMatrix) -> Result<DensityMatrix, DynamicsError> {
    let (dv, db) = rho.dims.ok_or(DynamicsError::MissingBipartite)?;
    Ok(DensityMatrix {
        matrix: partial_trace_second(&rho.matrix, dv, db),
        dims: None,
    })
}

/// `U(t) = e^{−iht}` from one Hermitian eigendecomposition, reused for
/// every time.
#[derive(Clone, Debug)]
pub struct Propagator {
    eig: HermitianEigen,
}

impl Propagator {
    pub fn new(h: &CMatrix) -> Result<Self, DynamicsError> {
        let defect = hermiticity_defect(h);
        if defect > HERMITICITY_TOL * max_abs(h).max(1.0) {
            return Err(DynamicsError::NotHermitian(defect));
        }
        Ok(Self {
            eig: HermitianEigen::new(h),
        })
    }

    pub fn dim(&self) -> usize {
        self.eig.values.len()
    }

    pub fn unitary(&self, t: f64) -> CMatrix {
        self.eig.apply(|e| Complex64::from_polar(1.0, -e * t))
    }

    pub fn evolve_pure(&self, psi: &CVector, t: f64) -> CVector {
        let v = &self.eig.vectors;
        let mut coeffs = v.adjoint() * psi;
        for (k, x) in coeffs.iter_mut().enumerate() {
            *x *= Complex64::from_polar(1.0, -self.eig.values[k] * t);
        }
        v * coeffs
    }

    /// `U(t) ρ U(t)†`.
    pub fn evolve_mixed(&self, rho: &CMatrix, t: f64) -> CMatrix {
        self.evolve_in_eigenbasis(&self.to_eigenbasis(rho), t)
    }

    fn to_eigenbasis(&self, rho: &CMatrix) -> CMatrix {
        let v = &self.eig.vectors;
        v.adjoint() * rho * v
    }

    fn evolve_in_eigenbasis(&self, rho_eig: &CMatrix, t: f64) -> CMatrix {
        let e = &self.eig.values;
        let phased = CMatrix::from_fn(rho_eig.nrows(), rho_eig.ncols(), |j, k| {
            rho_eig[(j, k)] * Complex64::from_polar(1.0, -(e[j] - e[k]) * t)
        });
        let v = &self.eig.vectors;
        v * phased * v.adjoint()
    }
}

pub fn evolve_pure(h: &CMatrix, psi: &CVector, t: f64) -> Result<CVector, DynamicsError> {
    Ok(Propagator::new(h)?.evolve_pure(psi, t))
}

pub fn evolve_mixed(h: &CMatrix, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix, DynamicsError> {
    Ok(DensityMatrix {
        matrix: Propagator::new(h)?.evolve_mixed(&rho.matrix, t),
        dims: rho.dims,
    })
}

/// Evenly spaced times on `[0, t_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_max: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![0.0],
            p => (0..p).map(|i| self.t_max * i as f64 / (p - 1) as f64).collect(),
        }
    }
}

/// Everything derived once per configuration.
#[derive(Clone, Debug)]
pub struct DynamicsSetup {
    pub ops: SpinOperatorSet,
    pub bath_spec: BathSpec,
    pub bath: BathOperators,
    pub spec: HamiltonianSpec,
    pub h: CMatrix,
    pub h_eff: CMatrix,
    propagator: Propagator,
    bath_propagator: Propagator,
}

impl DynamicsSetup {
    pub fn new(ops: SpinOperatorSet, bath_spec: BathSpec, spec: HamiltonianSpec) -> Result<Self, DynamicsError> {
        let bath = bath_operators(&bath_spec)?;
        let h = assemble_hamiltonian(&ops, &bath, &spec)?;
        let h_eff = chi_effective(&bath, &spec)?;
        let propagator = Propagator::new(&h)?;
        let bath_propagator = Propagator::new(&h_eff)?;
        Ok(Self {
            ops,
            bath_spec,
            bath,
            spec,
            h,
            h_eff,
            propagator,
            bath_propagator,
        })
    }

    pub fn register_dim(&self) -> usize {
        self.ops.dim()
    }

    pub fn bath_dim(&self) -> usize {
        self.bath.dim()
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    pub fn metadata(&self) -> EvolutionMetadata {
        EvolutionMetadata {
            mu: self.ops.mu,
            n: self.ops.n,
            preset: self.ops.preset(),
            bath: self.bath_spec.clone(),
            couplings: self.spec.terms.iter().map(|t| t.to_string()).collect(),
        }
    }

    /// Bath ground state `|0…0⟩`.
    pub fn bath_ground(&self) -> CVector {
        let mut v = CVector::zeros(self.bath_dim());
        v[0] = real(1.0);
        v
    }
}

/// Parameters a time series was produced with.
#[derive(Clone, Debug, Serialize)]
pub struct EvolutionMetadata {
    pub mu: f64,
    pub n: usize,
    pub preset: Preset,
    pub bath: BathSpec,
    pub couplings: Vec<String>,
}

/// Time series emitted by the theorem drivers.
#[derive(Clone, Debug, Serialize)]
pub struct EvolutionReport {
    pub kind: String,
    pub metadata: EvolutionMetadata,
    pub times: Vec<f64>,
    pub fidelity: Vec<f64>,
    pub trace_distance: Vec<f64>,
    pub purity: Vec<f64>,
    pub energy: Vec<f64>,
}

impl EvolutionReport {
    pub fn min_fidelity(&self) -> f64 {
        self.fidelity.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_trace_distance(&self) -> f64 {
        self.trace_distance.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_purity(&self) -> f64 {
        self.purity.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest deviation of the energy from its initial value.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energy.first().copied().unwrap_or(0.0);
        self.energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max)
    }
}

struct Sample {
    fidelity: f64,
    trace_distance: f64,
    purity: f64,
    energy: f64,
}

fn collect(kind: &str, setup: &DynamicsSetup, times: Vec<f64>, samples: Vec<Sample>) -> EvolutionReport {
    EvolutionReport {
        kind: kind.to_string(),
        metadata: setup.metadata(),
        fidelity: samples.iter().map(|s| s.fidelity).collect(),
        trace_distance: samples.iter().map(|s| s.trace_distance).collect(),
        purity: samples.iter().map(|s| s.purity).collect(),
        energy: samples.iter().map(|s| s.energy).collect(),
        times,
    }
}

/// Pure-state run from `u ⊗ ζ` without checking that `u` is invariant.
///
/// Columns: `|⟨u⊗e^{−ih_eff t}ζ, ψ(t)⟩|`, trace distance of `tr_B|ψ⟩⟨ψ|`
/// to `|u⟩⟨u|`, its purity, and `⟨ψ|h|ψ⟩`.
pub fn pure_series(
    setup: &DynamicsSetup,
    u: &QState,
    zeta: &CVector,
    grid: &TimeGrid,
) -> Result<EvolutionReport, DynamicsError> {
    let dv = setup.register_dim();
    let db = setup.bath_dim();
    if u.amplitudes.len() != dv {
        return Err(DynamicsError::DimensionMismatch {
            expected: dv,
            got: u.amplitudes.len(),
        });
    }
    if zeta.len() != db {
        return Err(DynamicsError::DimensionMismatch {
            expected: db,
            got: zeta.len(),
        });
    }
    let psi0 = kron_vec(&u.amplitudes, zeta);
    let target = outer(&u.amplitudes, &u.amplitudes);
    let times = grid.times();
    let samples = times
        .par_iter()
        .map(|&t| {
            let psi = setup.propagator.evolve_pure(&psi0, t);
            let zeta_eff = setup.bath_propagator.evolve_pure(zeta, t);
            let predicted = kron_vec(&u.amplitudes, &zeta_eff);
            let reduced = reduced_from_pure(&psi, dv, db);
            Sample {
                fidelity: predicted.dotc(&psi).norm(),
                trace_distance: trace_distance(&reduced, &target),
                purity: purity(&reduced),
                energy: psi.dotc(&(&setup.h * &psi)).re,
            }
        })
        .collect();
    Ok(collect("pure", setup, times, samples))
}

/// Checks the factorization `e^{−iht}(u⊗ζ) = u ⊗ e^{−ih_eff t}ζ` for an
/// invariant register vector `u`.
pub fn theorem1_check(
    setup: &DynamicsSetup,
    u: &QState,
    zeta: &CVector,
    grid: &TimeGrid,
    invariance_tol: f64,
) -> Result<EvolutionReport, DynamicsError> {
    let residual = invariance_residual(u, &setup.ops)?.max();
    if residual > invariance_tol {
        return Err(DynamicsError::NotInvariant {
            residual,
            tolerance: invariance_tol,
        });
    }
    let mut r = pure_series(setup, u, zeta, grid)?;
    r.kind = "theorem1".to_string();
    Ok(r)
}

/// Mixed-state run of the induced channel `ρ_S ↦ tr_B U(ρ_S⊗ρ_B)U†`
/// without the invariance precondition.
///
/// Columns: root fidelity and trace distance between the channel output and
/// `ρ_S`, purity of the output, and `tr(ρ(t)h)`.
pub fn channel_series(
    setup: &DynamicsSetup,
    rho_s: &DensityMatrix,
    rho_b: &DensityMatrix,
    grid: &TimeGrid,
) -> Result<EvolutionReport, DynamicsError> {
    let dv = setup.register_dim();
    let db = setup.bath_dim();
    if rho_s.dim() != dv {
        return Err(DynamicsError::DimensionMismatch {
            expected: dv,
            got: rho_s.dim(),
        });
    }
    if rho_b.dim() != db {
        return Err(DynamicsError::DimensionMismatch {
            expected: db,
            got: rho_b.dim(),
        });
    }
    let rho0 = DensityMatrix::product(rho_s, rho_b);
    let rho0_eig = setup.propagator.to_eigenbasis(&rho0.matrix);
    let times = grid.times();
    let samples = times
        .par_iter()
        .map(|&t| {
            let rho_t = setup.propagator.evolve_in_eigenbasis(&rho0_eig, t);
            let reduced = partial_trace_second(&rho_t, dv, db);
            let reduced = (&reduced + reduced.adjoint()) * real(0.5);
            Sample {
                fidelity: root_fidelity(&rho_s.matrix, &reduced),
                trace_distance: trace_distance(&reduced, &rho_s.matrix),
                purity: purity(&reduced),
                energy: frobenius_inner(&rho_t, &setup.h).re,
            }
        })
        .collect();
    Ok(collect("channel", setup, times, samples))
}

/// Checks that the induced channel fixes `ρ_S` supported on the invariant
/// subspace, for an arbitrary bath state.
pub fn theorem2_check(
    setup: &DynamicsSetup,
    rho_s: &DensityMatrix,
    rho_b: &DensityMatrix,
    grid: &TimeGrid,
    leakage_tol: f64,
) -> Result<EvolutionReport, DynamicsError> {
    let leakage = invariant_leakage(setup, rho_s);
    if leakage > leakage_tol {
        return Err(DynamicsError::Leakage {
            leakage,
            tolerance: leakage_tol,
        });
    }
    let mut r = channel_series(setup, rho_s, rho_b, grid)?;
    r.kind = "theorem2".to_string();
    Ok(r)
}

/// `‖ρ − PρP‖_F` with `P` the projector on the joint kernel.
pub fn invariant_leakage(setup: &DynamicsSetup, rho_s: &DensityMatrix) -> f64 {
    let p = joint_kernel(&setup.ops, DEFAULT_REL_TOL).projector();
    if p.nrows() != rho_s.dim() {
        return f64::INFINITY;
    }
    (&rho_s.matrix - &p * &rho_s.matrix * &p).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real_diag};
    use crate::rep::{build_operators, singlet_state};

    fn one_mode(cutoff: usize) -> BathSpec {
        BathSpec {
            frequencies: vec![1.0],
            fock_cutoff: cutoff,
        }
    }

    fn default_couplings() -> Vec<ModeCoupling> {
        vec![ModeCoupling { g: [0.2, 0.0], h: 0.1 }]
    }

    #[test]
    fn number_operator_and_truncated_commutator() {
        let b = bath_operators(&one_mode(3)).unwrap();
        assert!(max_abs(&(&b.hamiltonian - real_diag(&[0.0, 1.0, 2.0]))) < 1e-15);
        let b4 = bath_operators(&one_mode(4)).unwrap();
        let n = &b4.creators[0] * &b4.annihilators[0];
        assert!(max_abs(&(n - real_diag(&[0.0, 1.0, 2.0, 3.0]))) < 1e-14);
        let comm = &b4.annihilators[0] * &b4.creators[0] - &b4.creators[0] * &b4.annihilators[0];
        assert!(max_abs(&(comm - real_diag(&[1.0, 1.0, 1.0, -3.0]))) < 1e-14);
        assert_eq!(
            bath_operators(&one_mode(1)).unwrap_err(),
            DynamicsError::InvalidCutoff(1)
        );
    }

    #[test]
    fn two_modes_have_product_dimension() {
        let spec = BathSpec {
            frequencies: vec![1.0, 2.5],
            fock_cutoff: 3,
        };
        let b = bath_operators(&spec).unwrap();
        assert_eq!(b.dim(), 9);
        // modes commute
        let comm = &b.annihilators[0] * &b.creators[1] - &b.creators[1] * &b.annihilators[0];
        assert!(max_abs(&comm) < 1e-15);
    }

    #[test]
    fn default_hamiltonian_is_hermitian_and_zero_coupling_is_free_bath() {
        let ops = build_operators(Preset::UqSu2, 0.7, 2).unwrap();
        let bath = bath_operators(&one_mode(8)).unwrap();
        let spec = HamiltonianSpec::standard(&one_mode(8), &default_couplings(), SpinPoly::zero());
        let h = assemble_hamiltonian(&ops, &bath, &spec).unwrap();
        assert!(hermiticity_defect(&h) < 1e-15);
        let free = HamiltonianSpec::standard(&one_mode(8), &[], SpinPoly::zero());
        let h0 = assemble_hamiltonian(&ops, &bath, &free).unwrap();
        assert!(max_abs(&(h0 - kron(&identity(4), &bath.hamiltonian))) < 1e-15);
    }

    #[test]
    fn non_hermitian_term_is_named() {
        let ops = build_operators(Preset::UqSu2, 0.7, 2).unwrap();
        let bath = bath_operators(&one_mode(4)).unwrap();
        let mut spec = HamiltonianSpec::standard(&one_mode(4), &default_couplings(), SpinPoly::zero());
        // drop the K₋⊗T† partner
        spec.terms.remove(2);
        match assemble_hamiltonian(&ops, &bath, &spec) {
            Err(DynamicsError::NonHermitian { term, .. }) => assert_eq!(term, 1),
            other => panic!("expected NonHermitian, got {other:?}"),
        }
    }

    #[test]
    fn classical_limit_matches_spin_boson_form() {
        // μ = 1: K± = S±, K₃ = Sᶻ, so h_I = g S⁺b + g* S⁻b† + h Sᶻ(b + b†)
        let ops = build_operators(Preset::UqSu2, 1.0, 2).unwrap();
        let (sz, sp, sm) = crate::rep::classical_total_spin(2);
        let bath = bath_operators(&one_mode(5)).unwrap();
        let g = c(0.2, 0.1);
        let couplings = [ModeCoupling {
            g: [g.re, g.im],
            h: 0.1,
        }];
        let spec = HamiltonianSpec::standard(&one_mode(5), &couplings, SpinPoly::zero());
        let h = assemble_hamiltonian(&ops, &bath, &spec).unwrap();
        let b = &bath.annihilators[0];
        let bd = &bath.creators[0];
        let expected = kron(&identity(4), &bath.hamiltonian)
            + kron(&sp, b) * g
            + kron(&sm, bd) * g.conj()
            + kron(&sz, &(b + bd)) * real(0.1);
        assert!(max_abs(&(h - expected)) < 1e-14);
    }

    #[test]
    fn chi_keeps_constant_terms_only() {
        assert_eq!(SpinPoly::symbol(SpinSymbol::K3).chi(), ZERO);
        let p = SpinPoly::constant(real(2.0)).plus(SpinPoly::word(real(1.0), &[SpinSymbol::KPlus, SpinSymbol::KMinus]));
        assert_eq!(p.chi(), real(2.0));
        let bath = bath_operators(&one_mode(6)).unwrap();
        let spec = HamiltonianSpec::standard(&one_mode(6), &default_couplings(), SpinPoly::zero());
        let h_eff = chi_effective(&bath, &spec).unwrap();
        assert!(max_abs(&(&h_eff - &bath.hamiltonian)) < 1e-15);
        let doubled = chi_effective(&bath, &spec.scale_bath(real(2.0))).unwrap();
        assert!(max_abs(&(doubled - h_eff * real(2.0))) < 1e-14);
    }

    #[test]
    fn evolution_basics() {
        let h = real_diag(&[1.0, -1.0]);
        let psi = CVector::from_vec(vec![real(0.6), real(0.8)]);
        assert!((evolve_pure(&h, &psi, 0.0).unwrap() - &psi).norm() < 1e-15);
        let u = Propagator::new(&h).unwrap().unitary(std::f64::consts::FRAC_PI_2);
        assert!((u[(0, 0)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((u[(1, 1)] - c(0.0, 1.0)).norm() < 1e-15);
        let not_h = CMatrix::from_row_slice(2, 2, &[ZERO, real(1.0), ZERO, ZERO]);
        assert!(matches!(Propagator::new(&not_h), Err(DynamicsError::NotHermitian(_))));
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(real_diag(&[0.5, 0.6])).is_err());
        assert!(DensityMatrix::new(real_diag(&[1.2, -0.2])).is_err());
        let ok = DensityMatrix::new(real_diag(&[0.3, 0.7])).unwrap();
        assert!(partial_trace_bath(&ok).is_err());
        let th = DensityMatrix::thermal(&real_diag(&[0.0, 1.0]), 1.0).unwrap();
        let p0 = 1.0 / (1.0 + (-1.0f64).exp());
        assert!((th.matrix[(0, 0)].re - p0).abs() < 1e-14);
    }

    #[test]
    fn singlet_factorizes_with_ground_bath() {
        let ops = build_operators(Preset::UqSu2, 0.7, 2).unwrap();
        let spec = HamiltonianSpec::standard(&one_mode(6), &default_couplings(), SpinPoly::zero());
        let setup = DynamicsSetup::new(ops, one_mode(6), spec).unwrap();
        let grid = TimeGrid { t_max: 5.0, points: 11 };
        let r = theorem1_check(&setup, &singlet_state(0.7), &setup.bath_ground(), &grid, 1e-9).unwrap();
        assert!(r.min_fidelity() > 1.0 - 1e-9);
        assert!(r.max_trace_distance() < 1e-9);
        let plus = QState::basis("++").unwrap();
        assert!(matches!(
            theorem1_check(&setup, &plus, &setup.bath_ground(), &grid, 1e-9),
            Err(DynamicsError::NotInvariant { .. })
        ));
    }

    #[test]
    fn leaking_register_state_is_rejected() {
        let ops = build_operators(Preset::UqSu2, 0.7, 2).unwrap();
        let spec = HamiltonianSpec::standard(&one_mode(4), &default_couplings(), SpinPoly::zero());
        let setup = DynamicsSetup::new(ops, one_mode(4), spec).unwrap();
        let rho_s = DensityMatrix::pure(&QState::basis("++").unwrap().amplitudes).unwrap();
        let rho_b = DensityMatrix::pure(&setup.bath_ground()).unwrap();
        let grid = TimeGrid { t_max: 1.0, points: 2 };
        assert!(matches!(
            theorem2_check(&setup, &rho_s, &rho_b, &grid, 1e-9),
            Err(DynamicsError::Leakage { .. })
        ));
    }

    #[test]
    fn time_grid_endpoints() {
        let g = TimeGrid {
            t_max: 10.0,
            points: 101,
        };
        let t = g.times();
        assert_eq!(t.len(), 101);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[100], 10.0);
        assert!((t[1] - 0.1).abs() < 1e-15);
    }
}
