//! n-qubit representations of the quantum Lie algebra generators K₃, K₊, K₋.
//!
//! Operators are built one qubit at a time, appending the new factor on the
//! right. Every generator extends by the same shape of rule:
//!
//! ```text
//! K(n+1) = K(n) ⊗ W  +  D^{⊗n} ⊗ c
//! ```
//!
//! with `c` the single-qubit contribution, `W` a diagonal twist on the new
//! qubit and `D` a diagonal twist replicated over the existing register.
//! Two presets ship:
//!
//! * `uq-su2`: `ΔK₃ = K₃⊗1 + 1⊗K₃`, `ΔK± = K±⊗q^{K₃} + q^{−K₃}⊗K±`, `q = 1/μ`.
//! * `paper-verbatim`: the literal recurrences
//!   `K₃(ψ⊗|±⟩) = μ^{∓2}K₃ψ⊗|±⟩ ± ½ψ⊗|±⟩`,
//!   `K_j(ψ⊗|±⟩) = μ^{∓1}K_jψ⊗|±⟩ ± ½ψ⊗|±⟩` (`j = 1, 2`), `K± = K₁ ± iK₂`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::{c, identity, kron, real, real_diag, real_matrix, CMatrix, CVector, I, ONE, ZERO};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepError {
    #[error("unknown preset {0:?} (expected \"uq-su2\" or \"paper-verbatim\")")]
    UnknownPreset(String),
    #[error("deformation parameter μ must be nonzero")]
    ZeroMu,
    #[error("preset uq-su2 needs μ > 0 so that q^(±1/2) is real (got μ = {0})")]
    NonPositiveMu(f64),
    #[error("qubit count must be at least 1")]
    NoQubits,
    #[error("base override for {0} must be a 2×2 matrix")]
    BadOverride(&'static str),
    #[error("dimension mismatch: state has length {state}, operators act on {ops}")]
    DimensionMismatch { state: usize, ops: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "uq-su2")]
    UqSu2,
    #[serde(rename = "paper-verbatim")]
    PaperVerbatim,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::UqSu2 => "uq-su2",
            Preset::PaperVerbatim => "paper-verbatim",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Preset {
    type Err = RepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uq-su2" => Ok(Preset::UqSu2),
            "paper-verbatim" => Ok(Preset::PaperVerbatim),
            other => Err(RepError::UnknownPreset(other.to_string())),
        }
    }
}

/// How one generator grows by a qubit: `K ⊗ right_twist + left_twist^{⊗n} ⊗ contribution`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorExtension {
    pub contribution: CMatrix,
    pub right_twist: CMatrix,
    pub left_twist: CMatrix,
}

impl GeneratorExtension {
    fn untwisted(contribution: CMatrix) -> Self {
        Self {
            contribution,
            right_twist: identity(2),
            left_twist: identity(2),
        }
    }
}

/// Extension data for K₃, K₊, K₋.
#[derive(Clone, Debug, PartialEq)]
pub struct CoproductRule {
    pub preset: Preset,
    pub k3: GeneratorExtension,
    pub k_plus: GeneratorExtension,
    pub k_minus: GeneratorExtension,
}

impl CoproductRule {
    /// `q = 1/μ`; `q^{±K₃}` on one qubit is `diag(q^{±1/2}, q^{∓1/2})`.
    pub fn uq_su2(mu: f64) -> Self {
        let q = 1.0 / mu;
        let q_k3 = real_diag(&[q.sqrt(), 1.0 / q.sqrt()]);
        let q_minus_k3 = real_diag(&[1.0 / q.sqrt(), q.sqrt()]);
        let twisted = |contribution: CMatrix| GeneratorExtension {
            contribution,
            right_twist: q_k3.clone(),
            left_twist: q_minus_k3.clone(),
        };
        Self {
            preset: Preset::UqSu2,
            k3: GeneratorExtension::untwisted(spin_z()),
            k_plus: twisted(raising()),
            k_minus: twisted(lowering()),
        }
    }

    /// The recurrences taken literally. K₁ and K₂ share the contribution
    /// `diag(½, −½)` and twist `diag(1/μ, μ)`, so K± = K₁ ± iK₂ extend with
    /// contribution `(1 ± i)·diag(½, −½)` and the same twist.
    pub fn paper_verbatim(mu: f64) -> Self {
        let half = spin_z();
        let kj_twist = real_diag(&[1.0 / mu, mu]);
        let kj = |phase: f64| GeneratorExtension {
            contribution: &half * c(1.0, phase),
            right_twist: kj_twist.clone(),
            left_twist: identity(2),
        };
        Self {
            preset: Preset::PaperVerbatim,
            k3: GeneratorExtension {
                contribution: half.clone(),
                right_twist: real_diag(&[1.0 / (mu * mu), mu * mu]),
                left_twist: identity(2),
            },
            k_plus: kj(1.0),
            k_minus: kj(-1.0),
        }
    }
}

/// Optional single-qubit base operators for the verbatim preset.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BaseOverrides {
    pub k3: Option<CMatrix>,
    pub k1: Option<CMatrix>,
    pub k2: Option<CMatrix>,
}

fn spin_z() -> CMatrix {
    real_diag(&[0.5, -0.5])
}

/// `|−⟩ ↦ |+⟩` with `|+⟩` first in the basis.
fn raising() -> CMatrix {
    real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0])
}

fn lowering() -> CMatrix {
    real_matrix(2, 2, &[0.0, 0.0, 1.0, 0.0])
}

/// The operator triple on an n-qubit register together with the rule used
/// to build it.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinOperatorSet {
    pub n: usize,
    pub mu: f64,
    pub rule: CoproductRule,
    pub k3: CMatrix,
    pub k_plus: CMatrix,
    pub k_minus: CMatrix,
    // D^{⊗n} for K₃, K₊, K₋
    left_powers: [CMatrix; 3],
}

impl SpinOperatorSet {
    pub fn dim(&self) -> usize {
        self.k3.nrows()
    }

    pub fn preset(&self) -> Preset {
        self.rule.preset
    }

    /// `K₁ = (K₊ + K₋)/2`.
    pub fn k1(&self) -> CMatrix {
        (&self.k_plus + &self.k_minus) * real(0.5)
    }

    /// `K₂ = (K₊ − K₋)/(2i)`.
    pub fn k2(&self) -> CMatrix {
        (&self.k_plus - &self.k_minus) * (-I * 0.5)
    }

    /// `[(name, operator)]` in the order K₃, K₊, K₋.
    pub fn generators(&self) -> [(&'static str, &CMatrix); 3] {
        [("K3", &self.k3), ("K+", &self.k_plus), ("K-", &self.k_minus)]
    }

    /// `[K₃; K₊; K₋]` stacked vertically.
    pub fn stacked(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(3 * d, d);
        m.view_mut((0, 0), (d, d)).copy_from(&self.k3);
        m.view_mut((d, 0), (d, d)).copy_from(&self.k_plus);
        m.view_mut((2 * d, 0), (d, d)).copy_from(&self.k_minus);
        m
    }

    /// Appends one qubit on the right.
    pub fn extend_by_qubit(&self) -> SpinOperatorSet {
        let step = |k: &CMatrix, left: &CMatrix, ext: &GeneratorExtension| {
            kron(k, &ext.right_twist) + kron(left, &ext.contribution)
        };
        let rule = &self.rule;
        SpinOperatorSet {
            n: self.n + 1,
            mu: self.mu,
            k3: step(&self.k3, &self.left_powers[0], &rule.k3),
            k_plus: step(&self.k_plus, &self.left_powers[1], &rule.k_plus),
            k_minus: step(&self.k_minus, &self.left_powers[2], &rule.k_minus),
            left_powers: [
                kron(&self.left_powers[0], &rule.k3.left_twist),
                kron(&self.left_powers[1], &rule.k_plus.left_twist),
                kron(&self.left_powers[2], &rule.k_minus.left_twist),
            ],
            rule: self.rule.clone(),
        }
    }
}

/// Single-qubit operators for a preset.
///
/// `uq-su2`: the spin-½ matrices (the deformation only enters on extension).
/// `paper-verbatim`: `K₃ = diag(1/(2μ²), −μ²/2)`, the diagonal base for which
/// the verbatim K₃ recurrence annihilates the q-singlet at n = 2, and
/// classical `K₁ = σx/2`, `K₂ = σy/2`.
pub fn base_operators(preset: Preset, mu: f64) -> Result<SpinOperatorSet, RepError> {
    base_operators_with(preset, mu, &BaseOverrides::default())
}

pub fn base_operators_with(preset: Preset, mu: f64, overrides: &BaseOverrides) -> Result<SpinOperatorSet, RepError> {
    if mu == 0.0 || !mu.is_finite() {
        return Err(RepError::ZeroMu);
    }
    let check = |m: &Option<CMatrix>, name: &'static str| match m {
        Some(m) if m.shape() != (2, 2) => Err(RepError::BadOverride(name)),
        _ => Ok(()),
    };
    check(&overrides.k3, "K3")?;
    check(&overrides.k1, "K1")?;
    check(&overrides.k2, "K2")?;
    let (rule, k3, k_plus, k_minus) = match preset {
        Preset::UqSu2 => {
            if mu < 0.0 {
                return Err(RepError::NonPositiveMu(mu));
            }
            let k3 = overrides.k3.clone().unwrap_or_else(spin_z);
            (CoproductRule::uq_su2(mu), k3, raising(), lowering())
        }
        Preset::PaperVerbatim => {
            let k3 = overrides
                .k3
                .clone()
                .unwrap_or_else(|| real_diag(&[1.0 / (2.0 * mu * mu), -mu * mu / 2.0]));
            let k1 = overrides
                .k1
                .clone()
                .unwrap_or_else(|| real_matrix(2, 2, &[0.0, 0.5, 0.5, 0.0]));
            let k2 = overrides
                .k2
                .clone()
                .unwrap_or_else(|| CMatrix::from_row_slice(2, 2, &[ZERO, -I * 0.5, I * 0.5, ZERO]));
            let kp = &k1 + &k2 * I;
            let km = &k1 - &k2 * I;
            (CoproductRule::paper_verbatim(mu), k3, kp, km)
        }
    };
    let left_powers = [
        rule.k3.left_twist.clone(),
        rule.k_plus.left_twist.clone(),
        rule.k_minus.left_twist.clone(),
    ];
    Ok(SpinOperatorSet {
        n: 1,
        mu,
        rule,
        k3,
        k_plus,
        k_minus,
        left_powers,
    })
}

/// Base operators followed by `n − 1` right extensions.
pub fn build_operators(preset: Preset, mu: f64, n: usize) -> Result<SpinOperatorSet, RepError> {
    build_operators_with(preset, mu, n, &BaseOverrides::default())
}

pub fn build_operators_with(
    preset: Preset,
    mu: f64,
    n: usize,
    overrides: &BaseOverrides,
) -> Result<SpinOperatorSet, RepError> {
    if n == 0 {
        return Err(RepError::NoQubits);
    }
    let mut ops = base_operators_with(preset, mu, overrides)?;
    for _ in 1..n {
        ops = ops.extend_by_qubit();
    }
    Ok(ops)
}

/// Classical total-spin operators `(Sᶻ, S⁺, S⁻)` on n qubits, built as sums
/// of single-site terms (independent of the extension machinery).
pub fn classical_total_spin(n: usize) -> (CMatrix, CMatrix, CMatrix) {
    let dim = 1usize << n;
    let site = |op: &CMatrix, k: usize| {
        let left = identity(1 << k);
        let right = identity(1 << (n - k - 1));
        kron(&kron(&left, op), &right)
    };
    let mut sz = CMatrix::zeros(dim, dim);
    let mut sp = CMatrix::zeros(dim, dim);
    let mut sm = CMatrix::zeros(dim, dim);
    for k in 0..n {
        sz += site(&spin_z(), k);
        sp += site(&raising(), k);
        sm += site(&lowering(), k);
    }
    (sz, sp, sm)
}

/// A register state; qubit 0 is the most significant index bit and `|+⟩`
/// precedes `|−⟩` in each factor.
#[derive(Clone, Debug, PartialEq)]
pub struct QState {
    pub n: usize,
    pub amplitudes: CVector,
}

impl QState {
    pub fn new(n: usize, amplitudes: CVector) -> Result<Self, RepError> {
        if amplitudes.len() != 1 << n {
            return Err(RepError::DimensionMismatch {
                state: amplitudes.len(),
                ops: 1 << n,
            });
        }
        Ok(Self { n, amplitudes })
    }

    /// Product basis state from a pattern like `"+-+"`.
    pub fn basis(pattern: &str) -> Option<Self> {
        let mut index = 0usize;
        for ch in pattern.chars() {
            index <<= 1;
            match ch {
                '+' => {}
                '-' => index |= 1,
                _ => return None,
            }
        }
        let n = pattern.chars().count();
        let mut v = CVector::zeros(1 << n);
        v[index] = ONE;
        Some(Self { n, amplitudes: v })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(&self) -> Self {
        Self {
            n: self.n,
            amplitudes: &self.amplitudes / real(self.norm()),
        }
    }

    pub fn inner(&self, other: &QState) -> num_complex::Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// `(|+−⟩ − μ|−+⟩)/√(1+μ²)`.
pub fn singlet_state(mu: f64) -> QState {
    let s = 1.0 / (1.0 + mu * mu).sqrt();
    let amplitudes = CVector::from_vec(vec![ZERO, real(s), real(-mu * s), ZERO]);
    QState { n: 2, amplitudes }
}

/// `|++⟩`, `(μ/√(1+μ²))(|+−⟩ + μ⁻¹|−+⟩)`, `|−−⟩`.
pub fn triplet_states(mu: f64) -> Result<[QState; 3], RepError> {
    if mu == 0.0 {
        return Err(RepError::ZeroMu);
    }
    let s = mu / (1.0 + mu * mu).sqrt();
    let middle = CVector::from_vec(vec![ZERO, real(s), real(s / mu), ZERO]);
    Ok([
        QState::basis("++").expect("valid pattern"),
        QState {
            n: 2,
            amplitudes: middle,
        },
        QState::basis("--").expect("valid pattern"),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    const MUS: [f64; 5] = [0.3, 0.5, 0.7, 0.9, 1.0];

    #[test]
    fn uq_base_is_spin_half_for_every_mu() {
        for mu in [1.0, 0.7] {
            let ops = base_operators(Preset::UqSu2, mu).unwrap();
            let (sz, sp, sm) = classical_total_spin(1);
            assert_eq!(ops.k3, sz);
            assert_eq!(ops.k_plus, sp);
            assert_eq!(ops.k_minus, sm);
        }
        let q: f64 = 1.0 / 0.7;
        let r = CoproductRule::uq_su2(0.7);
        assert!((r.k_plus.right_twist[(0, 0)].re - f64::sqrt(q)).abs() < 1e-15);
    }

    #[test]
    fn verbatim_base_k3() {
        let ops = base_operators(Preset::PaperVerbatim, 0.7).unwrap();
        assert!((ops.k3[(0, 0)].re - 1.0 / 0.98).abs() < 1e-15);
        assert!((ops.k3[(1, 1)].re + 0.245).abs() < 1e-15);
        // classical halves: K₊ = |+⟩⟨−|
        assert!(max_abs(&(&ops.k_plus - raising())) < 1e-15);
    }

    #[test]
    fn base_errors() {
        assert_eq!(base_operators(Preset::UqSu2, 0.0), Err(RepError::ZeroMu));
        assert_eq!("su3".parse::<Preset>(), Err(RepError::UnknownPreset("su3".into())));
        assert!(matches!(
            build_operators(Preset::UqSu2, 0.5, 0),
            Err(RepError::NoQubits)
        ));
        assert!(matches!(
            base_operators(Preset::UqSu2, -0.5),
            Err(RepError::NonPositiveMu(_))
        ));
        let bad = BaseOverrides {
            k3: Some(identity(3)),
            ..Default::default()
        };
        assert!(base_operators_with(Preset::PaperVerbatim, 0.5, &bad).is_err());
    }

    #[test]
    fn classical_lowering_on_two_qubits() {
        let ops = build_operators(Preset::UqSu2, 1.0, 2).unwrap();
        let out = &ops.k_minus * &QState::basis("++").unwrap().amplitudes;
        let expected = QState::basis("-+").unwrap().amplitudes + QState::basis("+-").unwrap().amplitudes;
        assert!((out - expected).norm() < 1e-15);
    }

    #[test]
    fn deformed_lowering_on_two_qubits() {
        // K₋|++⟩ = q^{1/2}|−+⟩ + q^{−1/2}|+−⟩, q = 2
        let ops = build_operators(Preset::UqSu2, 0.5, 2).unwrap();
        let out = &ops.k_minus * &QState::basis("++").unwrap().amplitudes;
        let q: f64 = 2.0;
        let expected = QState::basis("-+").unwrap().amplitudes * real(q.sqrt())
            + QState::basis("+-").unwrap().amplitudes * real(1.0 / q.sqrt());
        assert!((out - expected).norm() < 1e-14);
    }

    #[test]
    fn verbatim_k3_kills_mixed_sector() {
        for mu in MUS {
            let ops = build_operators(Preset::PaperVerbatim, mu, 2).unwrap();
            for p in ["+-", "-+"] {
                let v = &ops.k3 * &QState::basis(p).unwrap().amplitudes;
                assert!(v.norm() < 1e-14, "μ={mu} {p}");
            }
        }
    }

    #[test]
    fn standard_preset_is_star_closed() {
        for mu in MUS {
            for n in 1..=4 {
                let ops = build_operators(Preset::UqSu2, mu, n).unwrap();
                assert!(max_abs(&(ops.k_plus.adjoint() - &ops.k_minus)) < 1e-12);
                assert!(max_abs(&(ops.k3.adjoint() - &ops.k3)) < 1e-12);
            }
        }
        let ops = build_operators(Preset::UqSu2, 0.7, 4).unwrap();
        assert_eq!(ops.dim(), 16);
    }

    #[test]
    fn classical_limit_matches_site_sums() {
        for n in 1..=4 {
            let (sz, sp, sm) = classical_total_spin(n);
            let ops = build_operators(Preset::UqSu2, 1.0, n).unwrap();
            assert!(max_abs(&(&ops.k3 - &sz)) < 1e-12);
            assert!(max_abs(&(&ops.k_plus - &sp)) < 1e-12);
            assert!(max_abs(&(&ops.k_minus - &sm)) < 1e-12);
            // verbatim K₃ is classical at μ = 1; K₁/K₂ are not (diagonal contribution)
            let v = build_operators(Preset::PaperVerbatim, 1.0, n).unwrap();
            assert!(max_abs(&(&v.k3 - &sz)) < 1e-12);
            if n > 1 {
                assert!(max_abs(&(&v.k_plus - &sp)) > 0.1);
            }
        }
    }

    #[test]
    fn build_is_deterministic_and_n1_is_base() {
        let a = build_operators(Preset::UqSu2, 0.7, 3).unwrap();
        let b = build_operators(Preset::UqSu2, 0.7, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            build_operators(Preset::PaperVerbatim, 0.7, 1).unwrap(),
            base_operators(Preset::PaperVerbatim, 0.7).unwrap()
        );
    }

    #[test]
    fn singlet_and_triplet_values() {
        let s = singlet_state(0.7);
        assert!((s.amplitudes[1].re - 0.819_231_920_519_040_9).abs() < 1e-12);
        assert!((s.amplitudes[2].re + 0.573_462_344_363_328_6).abs() < 1e-12);
        assert_eq!(singlet_state(0.0), QState::basis("+-").unwrap());
        let t = triplet_states(0.7).unwrap();
        assert!((t[1].amplitudes[1].re - 0.573_462_344_363_328_6).abs() < 1e-12);
        assert!((t[1].amplitudes[2].re - 0.819_231_920_519_040_9).abs() < 1e-12);
        assert!(triplet_states(0.0).is_err());
        let classical = singlet_state(1.0);
        assert!((classical.amplitudes[1].re - 0.5_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn singlet_and_triplets_form_orthonormal_basis() {
        for mu in MUS.iter().chain(&[-0.4, 2.0]) {
            let mut states = vec![singlet_state(*mu)];
            states.extend(triplet_states(*mu).unwrap());
            for (i, a) in states.iter().enumerate() {
                for (j, b) in states.iter().enumerate() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((a.inner(b).norm() - expected).abs() < 1e-12, "μ={mu} {i}{j}");
                }
            }
        }
    }
}
