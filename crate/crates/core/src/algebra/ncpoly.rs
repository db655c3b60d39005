//! Normal-ordered elements of the S_μU(2) function algebra.
//!
//! Defining relations:
//!
//! ```text
//! αα* + μ²γ*γ = 1,   α*α + γ*γ = 1,   γ*γ = γγ*,   αγ = μγα,   αγ* = μγ*α
//! ```
//!
//! Taking adjoints of the last two gives the remaining exchange rules, so the
//! full rewrite table used here is
//!
//! ```text
//! γα  → μ⁻¹ αγ        γα*  → μ α*γ
//! γ*α → μ⁻¹ αγ*       γ*α* → μ α*γ*
//! γ*γ → γγ*
//! αα* → 1 − μ² γγ*    α*α  → 1 − γγ*
//! ```
//!
//! and the irreducible words are `α^k γ^m γ*^n` and `α*^k γ^m γ*^n`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_rational::BigRational;

use super::laurent::LaurentPoly;
use super::word::{Generator, Monomial, Word};

/// A linear combination of normal monomials with Laurent-polynomial
/// coefficients. Keys are always normal and coefficients never zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NCPoly {
    terms: BTreeMap<Monomial, LaurentPoly>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(LaurentPoly::one())
    }

    pub fn scalar(c: LaurentPoly) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: LaurentPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, LaurentPoly::one())
    }

    pub fn generator(g: Generator) -> Self {
        Self::monomial(Monomial::generator(g))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> LaurentPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The coefficient of the unit monomial.
    pub fn constant_term(&self) -> LaurentPoly {
        self.coeff(&Monomial::ONE)
    }

    pub fn add_term(&mut self, m: Monomial, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, &(v * c));
        }
        out
    }

    /// Right multiplication by a single generator, in closed form.
    pub fn mul_generator(&self, g: Generator) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (m2, c2) in monomial_times_generator(m, g) {
                out.add_term(m2, &(c * &c2));
            }
        }
        out
    }

    /// The adjoint: antimultiplicative, antilinear, involutive.
    pub fn star(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let reversed = normal_order(&m.to_word().star());
            out += &reversed.scale(&c.conj());
        }
        out
    }

    /// Replaces μ by an exact rational value in every coefficient.
    pub fn specialize(&self, mu: &BigRational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, &LaurentPoly::constant(c.specialize(mu)));
        }
        out
    }

    /// Highest monomial degree present (0 for scalars and zero).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }
}

/// `m · g` expanded in the normal basis.
fn monomial_times_generator(m: &Monomial, g: Generator) -> Vec<(Monomial, LaurentPoly)> {
    let Monomial {
        alpha: a,
        gamma: gm,
        gamma_star: gs,
    } = *m;
    let s = (gm + gs) as i32;
    match g {
        Generator::Gamma => vec![(Monomial::new(a, gm + 1, gs), LaurentPoly::one())],
        Generator::GammaStar => vec![(Monomial::new(a, gm, gs + 1), LaurentPoly::one())],
        // γ^m γ*^n α = μ^{-(m+n)} α γ^m γ*^n
        Generator::Alpha => {
            let c = LaurentPoly::mu_pow(-s);
            if a >= 0 {
                vec![(Monomial::new(a + 1, gm, gs), c)]
            } else {
                // α*α = 1 − γγ*
                vec![
                    (Monomial::new(a + 1, gm, gs), c.clone()),
                    (Monomial::new(a + 1, gm + 1, gs + 1), -c),
                ]
            }
        }
        // γ^m γ*^n α* = μ^{m+n} α* γ^m γ*^n
        Generator::AlphaStar => {
            let c = LaurentPoly::mu_pow(s);
            if a <= 0 {
                vec![(Monomial::new(a - 1, gm, gs), c)]
            } else {
                // αα* = 1 − μ²γγ*
                vec![
                    (Monomial::new(a - 1, gm, gs), c),
                    (Monomial::new(a - 1, gm + 1, gs + 1), -LaurentPoly::mu_pow(s + 2)),
                ]
            }
        }
    }
}

/// Expands an arbitrary word into the normal basis.
///
/// Idempotent on normal words and total; the result is independent of
/// rewrite order (see [`super::rewrite`] for the order-free engine this is
/// checked against).
pub fn normal_order(word: &Word) -> NCPoly {
    word.letters()
        .iter()
        .fold(NCPoly::one(), |acc, g| acc.mul_generator(*g))
}

impl From<Monomial> for NCPoly {
    fn from(m: Monomial) -> Self {
        NCPoly::monomial(m)
    }
}

impl From<Generator> for NCPoly {
    fn from(g: Generator) -> Self {
        NCPoly::generator(g)
    }
}

impl AddAssign<&NCPoly> for NCPoly {
    fn add_assign(&mut self, rhs: &NCPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c);
        }
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for NCPoly {
    type Output = NCPoly;
    fn add(mut self, rhs: NCPoly) -> NCPoly {
        self += &rhs;
        self
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(&-LaurentPoly::one())
    }
}

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -&self
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        self + &(-rhs)
    }
}

impl Sub for NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: NCPoly) -> NCPoly {
        &self - &rhs
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (m2, c2) in &rhs.terms {
            let letters = m2.to_word();
            let prod = letters
                .letters()
                .iter()
                .fold(self.clone(), |acc, g| acc.mul_generator(*g));
            out += &prod.scale(c2);
        }
        out
    }
}

impl Mul for NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: NCPoly) -> NCPoly {
        &self * &rhs
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})·{m}")?;
            }
        }
        Ok(())
    }
}

/// Parses a word and normal-orders it.
///
/// # Panics
/// On a malformed word; intended for fixtures and examples.
pub fn poly(word: &str) -> NCPoly {
    normal_order(&word.parse().expect("valid word"))
}

impl NCPoly {
    /// Scalar multiple by an integer, convenient for building test fixtures.
    pub fn times(&self, c: i64) -> NCPoly {
        self.scale(&LaurentPoly::from_integer(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn gamma_alpha_reorders_with_inverse_mu() {
        // αγ = μγα  ⇒  γα = μ⁻¹αγ
        assert_eq!(poly("γα"), poly("αγ").scale(&LaurentPoly::mu_pow(-1)));
    }

    #[test]
    fn alpha_alpha_star_is_one_minus_mu_squared_gamma_star_gamma() {
        let expected = &NCPoly::one() - &poly("γγ*").scale(&LaurentPoly::mu_pow(2));
        assert_eq!(poly("αα*"), expected);
        // γ*γ and γγ* normalize to the same monomial
        assert_eq!(poly("γ*γ"), poly("γγ*"));
    }

    #[test]
    fn normal_words_are_fixed_points() {
        assert_eq!(poly("α"), NCPoly::generator(Generator::Alpha));
        for m in Monomial::all_up_to(4) {
            assert_eq!(normal_order(&m.to_word()), NCPoly::monomial(m));
        }
    }

    #[test]
    fn both_sides_of_every_defining_relation_agree() {
        let mu2 = LaurentPoly::mu_pow(2);
        let mu = LaurentPoly::mu();
        assert_eq!(&poly("αα*") + &poly("γ*γ").scale(&mu2), NCPoly::one());
        assert_eq!(&poly("α*α") + &poly("γ*γ"), NCPoly::one());
        assert_eq!(poly("αγ"), poly("γα").scale(&mu));
        assert_eq!(poly("αγ*"), poly("γ*α").scale(&mu));
    }

    #[test]
    fn scattered_words_agree() {
        assert_eq!(poly("α*αγγ*"), poly("γγ*α*α"));
    }

    #[test]
    fn star_examples() {
        assert_eq!(poly("α").star(), poly("α*"));
        // (αγ)* = γ*α* = μ α*γ*
        assert_eq!(poly("αγ").star(), poly("α*γ*").scale(&LaurentPoly::mu()));
        let selfadj = &NCPoly::one() - &poly("γ*γ").scale(&LaurentPoly::mu_pow(2));
        assert_eq!(selfadj.star(), selfadj);
    }

    #[test]
    fn multiplication_matches_concatenation() {
        for a in crate::algebra::Word::all_up_to(2) {
            for b in crate::algebra::Word::all_up_to(2) {
                assert_eq!(
                    &normal_order(&a) * &normal_order(&b),
                    normal_order(&a.concat(&b)),
                    "{a} · {b}"
                );
            }
        }
    }

    #[test]
    fn specialization_at_one_gives_commutative_shadow() {
        let one = BigRational::one();
        assert_eq!(poly("γα").specialize(&one), poly("αγ").specialize(&one));
    }
}
