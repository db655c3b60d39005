//! Elements of the k-fold tensor power 𝒜⊗…⊗𝒜, stored in canonical form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::laurent::LaurentPoly;
use super::ncpoly::NCPoly;
use super::word::Monomial;

/// A sum of pure tensors, expanded bilinearly over normal monomials.
///
/// Keys are tuples of normal monomials (one per factor), so two tensors are
/// equal iff their canonical maps are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPoly {
    arity: usize,
    terms: BTreeMap<Vec<Monomial>, LaurentPoly>,
}

impl TensorPoly {
    pub fn zero(arity: usize) -> Self {
        Self {
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// `1 ⊗ … ⊗ 1`.
    pub fn one(arity: usize) -> Self {
        let mut t = Self::zero(arity);
        t.add_term(vec![Monomial::ONE; arity], &LaurentPoly::one());
        t
    }

    /// The pure tensor `p_1 ⊗ … ⊗ p_k`.
    pub fn pure(factors: &[NCPoly]) -> Self {
        let mut acc: Vec<(Vec<Monomial>, LaurentPoly)> = vec![(Vec::new(), LaurentPoly::one())];
        for f in factors {
            let mut next = Vec::new();
            for (key, c) in &acc {
                for (m, cm) in f.terms() {
                    let mut k = key.clone();
                    k.push(*m);
                    next.push((k, c * cm));
                }
            }
            acc = next;
        }
        let mut t = Self::zero(factors.len());
        for (k, c) in acc {
            t.add_term(k, &c);
        }
        t
    }

    /// Canonical form of a list of two-factor summands `Σ a_i ⊗ b_i`.
    pub fn from_summands(summands: &[(NCPoly, NCPoly)]) -> Self {
        let mut t = Self::zero(2);
        for (a, b) in summands {
            t += &Self::pure(&[a.clone(), b.clone()]);
        }
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
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

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: Vec<Monomial>, c: &LaurentPoly) {
        assert_eq!(key.len(), self.arity, "tensor arity mismatch");
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.arity);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &(v * c));
        }
        out
    }

    /// Replaces factor `slot` of every summand by the tensor `f(monomial)`,
    /// raising the arity by `f`'s arity minus one. Used for `Φ⊗id`,
    /// `id⊗Φ` and `e⊗id` (an arity-0 image).
    pub fn expand_slot<F>(&self, slot: usize, image_arity: usize, f: F) -> Self
    where
        F: Fn(&Monomial) -> TensorPoly,
    {
        assert!(slot < self.arity);
        let mut out = Self::zero(self.arity - 1 + image_arity);
        for (key, c) in &self.terms {
            let img = f(&key[slot]);
            debug_assert_eq!(img.arity, image_arity);
            for (ik, ic) in &img.terms {
                let mut k = key[..slot].to_vec();
                k.extend_from_slice(ik);
                k.extend_from_slice(&key[slot + 1..]);
                out.add_term(k, &(c * ic));
            }
        }
        out
    }

    /// Applies a linear map `𝒜 → 𝒜` on factor `slot`.
    pub fn map_slot<F>(&self, slot: usize, f: F) -> Self
    where
        F: Fn(&Monomial) -> NCPoly,
    {
        self.expand_slot(slot, 1, |m| TensorPoly::pure(&[f(m)]))
    }

    /// Applies an antilinear map factorwise, e.g. `*⊗*`.
    pub fn map_all<F>(&self, f: F) -> Self
    where
        F: Fn(&NCPoly) -> NCPoly,
    {
        let mut out = Self::zero(self.arity);
        for (key, c) in &self.terms {
            let factors: Vec<NCPoly> = key.iter().map(|m| f(&NCPoly::monomial(*m))).collect();
            out += &Self::pure(&factors).scale(&c.conj());
        }
        out
    }

    /// Multiplies all factors together: `m(a ⊗ b) = ab`.
    pub fn contract(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for (key, c) in &self.terms {
            let prod = key.iter().fold(NCPoly::one(), |acc, m| &acc * &NCPoly::monomial(*m));
            out += &prod.scale(c);
        }
        out
    }

    /// For an arity-0 tensor, the scalar it holds; for arity 1 the element.
    pub fn into_element(self) -> NCPoly {
        assert!(self.arity <= 1, "cannot flatten arity {} tensor", self.arity);
        let mut out = NCPoly::zero();
        for (key, c) in self.terms {
            let m = key.first().copied().unwrap_or(Monomial::ONE);
            out.add_term(m, &c);
        }
        out
    }
}

impl AddAssign<&TensorPoly> for TensorPoly {
    fn add_assign(&mut self, rhs: &TensorPoly) {
        assert_eq!(self.arity, rhs.arity, "tensor arity mismatch");
        for (k, c) in &rhs.terms {
            self.add_term(k.clone(), c);
        }
    }
}

impl Add for &TensorPoly {
    type Output = TensorPoly;
    fn add(self, rhs: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &TensorPoly {
    type Output = TensorPoly;
    fn neg(self) -> TensorPoly {
        self.scale(&-LaurentPoly::one())
    }
}

impl Sub for &TensorPoly {
    type Output = TensorPoly;
    fn sub(self, rhs: &TensorPoly) -> TensorPoly {
        self + &(-rhs)
    }
}

/// Componentwise product `(a⊗b)(c⊗d) = ac ⊗ bd`.
impl Mul for &TensorPoly {
    type Output = TensorPoly;
    fn mul(self, rhs: &TensorPoly) -> TensorPoly {
        assert_eq!(self.arity, rhs.arity, "tensor arity mismatch");
        let mut out = TensorPoly::zero(self.arity);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let factors: Vec<NCPoly> = ka
                    .iter()
                    .zip(kb)
                    .map(|(a, b)| &NCPoly::monomial(*a) * &NCPoly::monomial(*b))
                    .collect();
                out += &TensorPoly::pure(&factors).scale(&(ca * cb));
            }
        }
        out
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (key, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "({c})·")?;
            }
            let parts: Vec<String> = key.iter().map(|m| m.to_string()).collect();
            f.write_str(&parts.join("⊗"))?;
        }
        Ok(())
    }
}
