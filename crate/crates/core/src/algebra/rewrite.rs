//! Position-independent rewriting on words.
//!
//! [`super::normal_order`] folds letters in with closed-form
//! products. This module is the second route: a plain rewrite system over
//! adjacent letter pairs that may be fired at any redex, in any order. The
//! confluence check compares every one-step divergence against the closed
//! form, which together with termination (Newman) pins the normal form.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use super::laurent::LaurentPoly;
use super::ncpoly::{normal_order, NCPoly};
use super::word::{Generator, Monomial, Word};

use Generator::{Alpha, AlphaStar, Gamma, GammaStar};

/// `lhs[0] lhs[1] → Σ coeff · word`.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub lhs: [Generator; 2],
    pub rhs: Vec<(LaurentPoly, Word)>,
}

/// The complete rewrite table: the five defining relations and the two
/// exchange rules obtained from them by taking adjoints.
pub fn rules() -> Vec<RewriteRule> {
    let one = LaurentPoly::one;
    let mu = LaurentPoly::mu_pow;
    let w = |v: &[Generator]| Word(v.to_vec());
    vec![
        // αγ = μγα
        RewriteRule {
            lhs: [Gamma, Alpha],
            rhs: vec![(mu(-1), w(&[Alpha, Gamma]))],
        },
        // αγ* = μγ*α
        RewriteRule {
            lhs: [GammaStar, Alpha],
            rhs: vec![(mu(-1), w(&[Alpha, GammaStar]))],
        },
        // adjoint of αγ* = μγ*α
        RewriteRule {
            lhs: [Gamma, AlphaStar],
            rhs: vec![(mu(1), w(&[AlphaStar, Gamma]))],
        },
        // adjoint of αγ = μγα
        RewriteRule {
            lhs: [GammaStar, AlphaStar],
            rhs: vec![(mu(1), w(&[AlphaStar, GammaStar]))],
        },
        RewriteRule {
            lhs: [GammaStar, Gamma],
            rhs: vec![(one(), w(&[Gamma, GammaStar]))],
        },
        // αα* + μ²γ*γ = 1
        RewriteRule {
            lhs: [Alpha, AlphaStar],
            rhs: vec![(one(), Word::empty()), (-mu(2), w(&[GammaStar, Gamma]))],
        },
        // α*α + γ*γ = 1
        RewriteRule {
            lhs: [AlphaStar, Alpha],
            rhs: vec![(one(), Word::empty()), (-one(), w(&[GammaStar, Gamma]))],
        },
    ]
}

/// Where to fire the next rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Linear combination of (not necessarily normal) words.
pub type WordSum = BTreeMap<Word, LaurentPoly>;

/// Rewrite engine parameterized by its rule table.
#[derive(Clone, Debug)]
pub struct Rewriter {
    rules: Vec<RewriteRule>,
}

impl Default for Rewriter {
    fn default() -> Self {
        Self { rules: rules() }
    }
}

impl Rewriter {
    pub fn with_rules(rules: Vec<RewriteRule>) -> Self {
        Self { rules }
    }

    /// All `(position, rule index)` pairs matching inside `word`.
    pub fn redexes(&self, word: &Word) -> Vec<(usize, usize)> {
        let l = word.letters();
        let mut out = Vec::new();
        for pos in 0..l.len().saturating_sub(1) {
            for (ri, r) in self.rules.iter().enumerate() {
                if r.lhs == [l[pos], l[pos + 1]] {
                    out.push((pos, ri));
                }
            }
        }
        out
    }

    /// Fires rule `rule` at `pos`.
    pub fn rewrite_at(&self, word: &Word, pos: usize, rule: usize) -> WordSum {
        let l = word.letters();
        let r = &self.rules[rule];
        debug_assert_eq!(r.lhs, [l[pos], l[pos + 1]]);
        let mut out = WordSum::new();
        for (c, rhs) in &r.rhs {
            let mut v = l[..pos].to_vec();
            v.extend_from_slice(rhs.letters());
            v.extend_from_slice(&l[pos + 2..]);
            add_word(&mut out, Word(v), c);
        }
        out
    }

    /// Rewrites until no redex remains, always firing at the chosen end.
    pub fn normalize(&self, start: WordSum, strategy: Strategy) -> NCPoly {
        let mut pending = start;
        let mut done = NCPoly::zero();
        while let Some((word, coeff)) = pending.pop_first() {
            let redexes = self.redexes(&word);
            let pick = match strategy {
                Strategy::Leftmost => redexes.first(),
                Strategy::Rightmost => redexes.last(),
            };
            match pick {
                None => {
                    let m = Monomial::from_normal_word(&word).expect("irreducible word must be normal");
                    done.add_term(m, &coeff);
                }
                Some(&(pos, rule)) => {
                    for (w, c) in self.rewrite_at(&word, pos, rule) {
                        add_word(&mut pending, w, &(&c * &coeff));
                    }
                }
            }
        }
        done
    }

    pub fn normalize_word(&self, word: &Word, strategy: Strategy) -> NCPoly {
        let mut start = WordSum::new();
        start.insert(word.clone(), LaurentPoly::constant(BigRational::one()));
        self.normalize(start, strategy)
    }
}

fn add_word(sum: &mut WordSum, w: Word, c: &LaurentPoly) {
    let e = sum.entry(w.clone()).or_default();
    *e += c;
    if e.is_zero() {
        sum.remove(&w);
    }
}

/// A word whose rewrite outcomes disagree.
#[derive(Clone, Debug)]
pub struct ConfluenceFailure {
    pub word: Word,
    pub route: String,
    pub got: NCPoly,
    pub expected: NCPoly,
}

/// Exhaustive confluence check on every word of length `≤ max_len`.
///
/// For each word: the leftmost and rightmost strategies, and every single
/// first step followed by leftmost normalization, must all reproduce the
/// closed-form normal order. Returns the number of words checked.
pub fn check_confluence(max_len: usize) -> Result<usize, Box<ConfluenceFailure>> {
    let rw = Rewriter::default();
    let mut checked = 0;
    for word in Word::all_up_to(max_len) {
        let expected = normal_order(&word);
        let mut routes = vec![
            ("leftmost".to_string(), rw.normalize_word(&word, Strategy::Leftmost)),
            ("rightmost".to_string(), rw.normalize_word(&word, Strategy::Rightmost)),
        ];
        for (pos, rule) in rw.redexes(&word) {
            let stepped = rw.rewrite_at(&word, pos, rule);
            routes.push((
                format!("rule {rule} at {pos}, then leftmost"),
                rw.normalize(stepped, Strategy::Leftmost),
            ));
        }
        for (route, got) in routes {
            if got != expected {
                return Err(Box::new(ConfluenceFailure {
                    word,
                    route,
                    got,
                    expected,
                }));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_words_are_exactly_normal_words() {
        let rw = Rewriter::default();
        for w in Word::all_up_to(4) {
            assert_eq!(rw.redexes(&w).is_empty(), w.is_normal(), "{w}");
        }
    }

    #[test]
    fn confluent_up_to_length_four() {
        let n = check_confluence(4).map_err(|f| f.word.to_string()).unwrap();
        assert_eq!(n, 1 + 4 + 16 + 64 + 256);
    }

    #[test]
    fn broken_table_is_caught() {
        // drop the μ from αγ = μγα
        let mut table = rules();
        table[0].rhs[0].0 = LaurentPoly::one();
        let rw = Rewriter::with_rules(table);
        let w: Word = "γα".parse().unwrap();
        assert_ne!(rw.normalize_word(&w, Strategy::Leftmost), normal_order(&w));
    }
}
