//! Exact Laurent polynomials in the deformation parameter μ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A finite sum `Σ c_k μ^k` with `k ∈ ℤ` and exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_integer(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    /// `c · μ^exp`.
    pub fn monomial(c: BigRational, exp: i32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// `μ^exp` with unit coefficient.
    pub fn mu_pow(exp: i32) -> Self {
        Self::monomial(BigRational::one(), exp)
    }

    pub fn mu() -> Self {
        Self::mu_pow(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// Iterates `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Coefficient of `μ^exp` (zero when absent).
    pub fn coeff(&self, exp: i32) -> BigRational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Multiplies every term by `μ^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(k, c)| (k + shift, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Complex conjugation. The coefficients are rational and μ is real, so
    /// this is the identity; it exists so antilinear maps say what they mean.
    pub fn conj(&self) -> Self {
        self.clone()
    }

    /// Substitutes an exact nonzero rational value for μ.
    ///
    /// # Panics
    /// If `mu` is zero and a negative power is present.
    pub fn specialize(&self, mu: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (k, c) in &self.coeffs {
            let p = if *k >= 0 {
                num_traits::pow(mu.clone(), *k as usize)
            } else {
                assert!(!mu.is_zero(), "negative power of μ at μ = 0");
                num_traits::pow(mu.recip(), (-*k) as usize)
            };
            acc += c * p;
        }
        acc
    }

    /// Floating-point evaluation at `mu`.
    pub fn eval(&self, mu: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, c)| c.to_f64().unwrap_or(f64::NAN) * mu.powi(*k))
            .sum()
    }

    fn add_term(&mut self, exp: i32, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (k, c) in &rhs.coeffs {
            self.add_term(*k, c);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &rhs.coeffs {
                out.add_term(ka + kb, &(ca * cb));
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // highest power first reads more naturally
        for (i, (k, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let unit = mag.is_one();
            if !unit || *k == 0 {
                write!(f, "{mag}")?;
            }
            if *k != 0 {
                if !unit {
                    f.write_str("·")?;
                }
                if *k == 1 {
                    f.write_str("μ")?;
                } else {
                    write!(f, "μ^{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cancellation_leaves_no_zero_coefficients() {
        let a = LaurentPoly::mu() + LaurentPoly::one();
        let b = &a - &LaurentPoly::mu();
        assert_eq!(b, LaurentPoly::one());
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).terms().count(), 0);
    }

    #[test]
    fn multiplication_adds_exponents() {
        let a = LaurentPoly::mu_pow(-1) + LaurentPoly::mu();
        let sq = &a * &a;
        // μ^-2 + 2 + μ^2
        assert_eq!(sq.coeff(-2), r(1, 1));
        assert_eq!(sq.coeff(0), r(2, 1));
        assert_eq!(sq.coeff(2), r(1, 1));
        assert_eq!(sq.terms().count(), 3);
    }

    #[test]
    fn specialization_and_eval_agree() {
        let p = LaurentPoly::monomial(r(3, 2), -2) - LaurentPoly::mu_pow(3);
        let exact = p.specialize(&r(1, 2));
        assert_eq!(exact, r(6, 1) - r(1, 8));
        assert!((p.eval(0.5) - exact.to_f64().unwrap()).abs() < 1e-15);
    }

    #[test]
    fn display_is_readable() {
        let p = LaurentPoly::one() - LaurentPoly::monomial(r(1, 1), 2);
        assert_eq!(p.to_string(), "-μ^2 + 1");
        assert_eq!(LaurentPoly::monomial(r(-1, 2), -1).to_string(), "-1/2·μ^-1");
    }
}
