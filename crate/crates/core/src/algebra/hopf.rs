//! The *-Hopf structure of S_μU(2) and mechanical checks of its axioms.
//!
//! Generator data:
//!
//! ```text
//! Φ(α) = α⊗α − μ γ*⊗γ        Φ(γ) = γ⊗α + α*⊗γ
//! e(α) = 1                   e(γ) = 0
//! κ(α) = α*   κ(α*) = α      κ(γ) = −μγ   κ(γ*) = −μ⁻¹γ*
//! ```
//!
//! `Φ(α*)`, `Φ(γ*)` follow from `Φ∘* = (*⊗*)∘Φ` and `e(a*) = conj e(a)`.
//! Φ and e extend multiplicatively, κ antimultiplicatively.

use serde::Serialize;

use super::laurent::LaurentPoly;
use super::ncpoly::{normal_order, NCPoly};
use super::tensor::TensorPoly;
use super::word::{Generator, Monomial, Word};

/// Coproduct, counit and antipode given by their values on generators.
#[derive(Clone, Debug)]
pub struct HopfStructure {
    coproduct: [TensorPoly; 4],
    counit: [LaurentPoly; 4],
    antipode: [NCPoly; 4],
}

impl Default for HopfStructure {
    fn default() -> Self {
        Self::quantum_su2()
    }
}

impl HopfStructure {
    /// The S_μU(2) structure with μ symbolic.
    pub fn quantum_su2() -> Self {
        use Generator::*;
        let g = NCPoly::generator;
        let mu = LaurentPoly::mu;
        let phi_alpha = TensorPoly::from_summands(&[(g(Alpha), g(Alpha)), (g(GammaStar).scale(&-mu()), g(Gamma))]);
        let phi_gamma = TensorPoly::from_summands(&[(g(Gamma), g(Alpha)), (g(AlphaStar), g(Gamma))]);
        let star2 = |t: &TensorPoly| t.map_all(NCPoly::star);
        let phi_alpha_star = star2(&phi_alpha);
        let phi_gamma_star = star2(&phi_gamma);
        Self {
            coproduct: [phi_alpha, phi_alpha_star, phi_gamma, phi_gamma_star],
            counit: [
                LaurentPoly::one(),
                LaurentPoly::one(),
                LaurentPoly::zero(),
                LaurentPoly::zero(),
            ],
            antipode: [
                g(AlphaStar),
                g(Alpha),
                g(Gamma).scale(&-mu()),
                g(GammaStar).scale(&-LaurentPoly::mu_pow(-1)),
            ],
        }
    }

    /// Overrides the antipode on one generator. Exists so the axiom checker
    /// can be exercised against a deliberately broken structure.
    pub fn with_antipode(mut self, g: Generator, image: NCPoly) -> Self {
        self.antipode[g.index()] = image;
        self
    }

    pub fn with_coproduct(mut self, g: Generator, image: TensorPoly) -> Self {
        assert_eq!(image.arity(), 2);
        self.coproduct[g.index()] = image;
        self
    }

    pub fn coproduct_generator(&self, g: Generator) -> &TensorPoly {
        &self.coproduct[g.index()]
    }

    /// Φ on a raw word: the product of the generator images.
    pub fn coproduct_word(&self, word: &Word) -> TensorPoly {
        word.letters()
            .iter()
            .fold(TensorPoly::one(2), |acc, g| &acc * &self.coproduct[g.index()])
    }

    pub fn coproduct_monomial(&self, m: &Monomial) -> TensorPoly {
        self.coproduct_word(&m.to_word())
    }

    pub fn coproduct(&self, p: &NCPoly) -> TensorPoly {
        let mut out = TensorPoly::zero(2);
        for (m, c) in p.terms() {
            out += &self.coproduct_monomial(m).scale(c);
        }
        out
    }

    pub fn counit_monomial(&self, m: &Monomial) -> LaurentPoly {
        m.to_word()
            .letters()
            .iter()
            .fold(LaurentPoly::one(), |acc, g| &acc * &self.counit[g.index()])
    }

    pub fn counit(&self, p: &NCPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in p.terms() {
            out += &(c * &self.counit_monomial(m));
        }
        out
    }

    /// κ on a raw word: `κ(g1…gk) = κ(gk)…κ(g1)`.
    pub fn antipode_word(&self, word: &Word) -> NCPoly {
        word.letters()
            .iter()
            .rev()
            .fold(NCPoly::one(), |acc, g| &acc * &self.antipode[g.index()])
    }

    pub fn antipode(&self, p: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (m, c) in p.terms() {
            out += &self.antipode_word(&m.to_word()).scale(c);
        }
        out
    }

    /// Runs every Hopf-axiom group on all words of length `0..=max_word_len`.
    pub fn check_axioms(&self, max_word_len: usize) -> AxiomReport {
        let words = Word::all_up_to(max_word_len);
        let checks = vec![
            self.run_check("coassociativity", &words, |a| {
                let phi = self.coproduct(a);
                let left = phi.expand_slot(0, 2, |m| self.coproduct_monomial(m));
                let right = phi.expand_slot(1, 2, |m| self.coproduct_monomial(m));
                (left.to_string(), right.to_string(), left == right)
            }),
            self.run_check("counit", &words, |a| {
                let phi = self.coproduct(a);
                let scalar = |m: &Monomial| TensorPoly::pure(&[]).scale(&self.counit_monomial(m));
                let left = phi.expand_slot(0, 0, scalar).into_element();
                let right = phi.expand_slot(1, 0, scalar).into_element();
                let ok = &left == a && &right == a;
                (format!("{left} | {right}"), a.to_string(), ok)
            }),
            self.run_check("antipode", &words, |a| {
                let phi = self.coproduct(a);
                let left = phi.map_slot(0, |m| self.antipode(&NCPoly::monomial(*m))).contract();
                let right = phi.map_slot(1, |m| self.antipode(&NCPoly::monomial(*m))).contract();
                let unit = NCPoly::scalar(self.counit(a));
                let ok = left == unit && right == unit;
                (format!("{left} | {right}"), unit.to_string(), ok)
            }),
            self.run_check("star_compatibility", &words, |a| {
                let left = self.coproduct(&a.star());
                let right = self.coproduct(a).map_all(NCPoly::star);
                (left.to_string(), right.to_string(), left == right)
            }),
        ];
        AxiomReport { max_word_len, checks }
    }

    fn run_check<F>(&self, name: &str, words: &[Word], f: F) -> AxiomCheck
    where
        F: Fn(&NCPoly) -> (String, String, bool),
    {
        let mut cases = 0;
        for w in words {
            let a = normal_order(w);
            let (lhs, rhs, ok) = f(&a);
            cases += 1;
            if !ok {
                return AxiomCheck {
                    name: name.to_string(),
                    passed: false,
                    cases,
                    counterexample: Some(Counterexample {
                        word: w.to_string(),
                        lhs,
                        rhs,
                    }),
                };
            }
        }
        AxiomCheck {
            name: name.to_string(),
            passed: true,
            cases,
            counterexample: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Counterexample {
    pub word: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of one axiom group.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub max_word_len: usize,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Convenience wrapper over [`HopfStructure::check_axioms`] for the
/// standard structure.
pub fn check_hopf_axioms(max_word_len: usize) -> AxiomReport {
    HopfStructure::quantum_su2().check_axioms(max_word_len)
}

/// A 2×2 matrix with entries in the algebra.
pub type AlgebraMatrix = [[NCPoly; 2]; 2];

/// `u = (α, −μγ*; γ, α*)`.
pub fn fundamental_matrix() -> AlgebraMatrix {
    use Generator::*;
    [
        [
            NCPoly::generator(Alpha),
            NCPoly::generator(GammaStar).scale(&-LaurentPoly::mu()),
        ],
        [NCPoly::generator(Gamma), NCPoly::generator(AlphaStar)],
    ]
}

/// Entrywise star followed by transposition.
pub fn adjoint(m: &AlgebraMatrix) -> AlgebraMatrix {
    [[m[0][0].star(), m[1][0].star()], [m[0][1].star(), m[1][1].star()]]
}

pub fn matmul(a: &AlgebraMatrix, b: &AlgebraMatrix) -> AlgebraMatrix {
    let entry = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitarityReport {
    pub passed: bool,
    /// `u*u` entries, row-major, rendered.
    pub u_star_u: Vec<String>,
    pub u_u_star: Vec<String>,
    pub classical_limit_passed: bool,
}

/// Checks `u*u = uu* = 1` exactly, symbolically in μ and at μ = 1.
pub fn check_fundamental_unitarity() -> UnitarityReport {
    check_unitarity_of(&fundamental_matrix())
}

pub fn check_unitarity_of(u: &AlgebraMatrix) -> UnitarityReport {
    let ud = adjoint(u);
    let left = matmul(&ud, u);
    let right = matmul(u, &ud);
    let is_identity = |m: &AlgebraMatrix| {
        m[0][0] == NCPoly::one() && m[1][1] == NCPoly::one() && m[0][1].is_zero() && m[1][0].is_zero()
    };
    let one = num_rational::BigRational::from_integer(1.into());
    let specialize = |m: &AlgebraMatrix| -> AlgebraMatrix {
        [
            [m[0][0].specialize(&one), m[0][1].specialize(&one)],
            [m[1][0].specialize(&one), m[1][1].specialize(&one)],
        ]
    };
    let render = |m: &AlgebraMatrix| m.iter().flatten().map(|p| p.to_string()).collect();
    UnitarityReport {
        passed: is_identity(&left) && is_identity(&right),
        classical_limit_passed: is_identity(&specialize(&left)) && is_identity(&specialize(&right)),
        u_star_u: render(&left),
        u_u_star: render(&right),
    }
}

impl UnitarityReport {
    pub fn as_check(&self) -> AxiomCheck {
        let passed = self.passed && self.classical_limit_passed;
        AxiomCheck {
            name: "fundamental_unitarity".to_string(),
            passed,
            cases: 2,
            counterexample: (!passed).then(|| Counterexample {
                word: "u".to_string(),
                lhs: format!(
                    "u*u = [{}]; uu* = [{}]",
                    self.u_star_u.join(", "),
                    self.u_u_star.join(", ")
                ),
                rhs: "[1, 0, 0, 1]".to_string(),
            }),
        }
    }
}
