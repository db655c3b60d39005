//! Generators, raw words and normal-ordered monomials.

use std::fmt;
use std::str::FromStr;

/// One of the four generators α, α*, γ, γ*.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Alpha,
    AlphaStar,
    Gamma,
    GammaStar,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::Alpha,
        Generator::AlphaStar,
        Generator::Gamma,
        Generator::GammaStar,
    ];

    pub fn star(self) -> Generator {
        match self {
            Generator::Alpha => Generator::AlphaStar,
            Generator::AlphaStar => Generator::Alpha,
            Generator::Gamma => Generator::GammaStar,
            Generator::GammaStar => Generator::Gamma,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Generator::Alpha => "α",
            Generator::AlphaStar => "α*",
            Generator::Gamma => "γ",
            Generator::GammaStar => "γ*",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// An arbitrary finite word in the generators; the empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    /// Reverses the word and stars every letter: `(g1 g2 … gk)* = gk* … g1*`.
    pub fn star(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.star()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// All words of length exactly `len`, in lexicographic generator order.
    pub fn all_of_length(len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    Generator::ALL.iter().map(move |g| {
                        let mut v = w.0.clone();
                        v.push(*g);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }

    /// All words of length `0..=max_len`.
    pub fn all_up_to(max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(Word::all_of_length).collect()
    }

    /// True when no rewrite rule applies, i.e. the word has the shape
    /// `α^k γ^m γ*^n` or `α*^k γ^m γ*^n`.
    pub fn is_normal(&self) -> bool {
        Monomial::from_normal_word(self).is_some()
    }
}

impl From<Vec<Generator>> for Word {
    fn from(v: Vec<Generator>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for g in &self.0 {
            f.write_str(g.symbol())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse word {input:?}: {reason}")]
pub struct ParseWordError {
    pub input: String,
    pub reason: String,
}

impl FromStr for Word {
    type Err = ParseWordError;

    /// Accepts the Unicode symbols (`αα*γ*`) or ASCII letters `a`, `A`, `g`,
    /// `G` for α, α*, γ, γ*. `"1"` and `""` are the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let base = match c {
                'α' | 'a' => Generator::Alpha,
                'γ' | 'g' => Generator::Gamma,
                'A' => Generator::AlphaStar,
                'G' => Generator::GammaStar,
                ' ' | '·' => continue,
                other => {
                    return Err(ParseWordError {
                        input: s.to_string(),
                        reason: format!("unexpected character {other:?}"),
                    })
                }
            };
            if chars.peek() == Some(&'*') {
                chars.next();
                out.push(base.star());
            } else {
                out.push(base);
            }
        }
        Ok(Word(out))
    }
}

/// A normal-ordered basis monomial `α^k γ^m γ*^n` (`alpha = k > 0`),
/// `α*^k γ^m γ*^n` (`alpha = -k < 0`) or `γ^m γ*^n` (`alpha = 0`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub alpha: i32,
    pub gamma: u32,
    pub gamma_star: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        alpha: 0,
        gamma: 0,
        gamma_star: 0,
    };

    pub fn new(alpha: i32, gamma: u32, gamma_star: u32) -> Self {
        Monomial {
            alpha,
            gamma,
            gamma_star,
        }
    }

    pub fn generator(g: Generator) -> Self {
        match g {
            Generator::Alpha => Monomial::new(1, 0, 0),
            Generator::AlphaStar => Monomial::new(-1, 0, 0),
            Generator::Gamma => Monomial::new(0, 1, 0),
            Generator::GammaStar => Monomial::new(0, 0, 1),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Monomial::ONE
    }

    pub fn degree(&self) -> usize {
        self.alpha.unsigned_abs() as usize + self.gamma as usize + self.gamma_star as usize
    }

    /// The monomial spelled out as a word.
    pub fn to_word(&self) -> Word {
        let a = if self.alpha >= 0 {
            Generator::Alpha
        } else {
            Generator::AlphaStar
        };
        let mut v = Vec::with_capacity(self.degree());
        v.extend(std::iter::repeat_n(a, self.alpha.unsigned_abs() as usize));
        v.extend(std::iter::repeat_n(Generator::Gamma, self.gamma as usize));
        v.extend(std::iter::repeat_n(Generator::GammaStar, self.gamma_star as usize));
        Word(v)
    }

    /// Parses an irreducible word; `None` if the word is not normal-ordered.
    pub fn from_normal_word(word: &Word) -> Option<Monomial> {
        let letters = word.letters();
        let mut i = 0;
        let mut alpha = 0i32;
        if let Some(&first) = letters.first() {
            if matches!(first, Generator::Alpha | Generator::AlphaStar) {
                while i < letters.len() && letters[i] == first {
                    i += 1;
                }
                alpha = if first == Generator::Alpha {
                    i as i32
                } else {
                    -(i as i32)
                };
            }
        }
        let start = i;
        while i < letters.len() && letters[i] == Generator::Gamma {
            i += 1;
        }
        let gamma = (i - start) as u32;
        let start = i;
        while i < letters.len() && letters[i] == Generator::GammaStar {
            i += 1;
        }
        let gamma_star = (i - start) as u32;
        (i == letters.len()).then_some(Monomial {
            alpha,
            gamma,
            gamma_star,
        })
    }

    /// Every normal monomial of total degree at most `max_degree`.
    pub fn all_up_to(max_degree: usize) -> Vec<Monomial> {
        let d = max_degree as i32;
        let mut out = Vec::new();
        for alpha in -d..=d {
            for gamma in 0..=(d - alpha.abs()) {
                for gamma_star in 0..=(d - alpha.abs() - gamma) {
                    out.push(Monomial::new(alpha, gamma as u32, gamma_star as u32));
                }
            }
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut part = |sym: &str, p: u32| -> fmt::Result {
            match p {
                0 => Ok(()),
                1 => f.write_str(sym),
                _ => write!(f, "{sym}^{p}"),
            }
        };
        if self.alpha >= 0 {
            part("α", self.alpha as u32)?;
        } else {
            part("α*", self.alpha.unsigned_abs())?;
        }
        part("γ", self.gamma)?;
        part("γ*", self.gamma_star)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::*;

    #[test]
    fn normal_word_recognition() {
        assert!(Word(vec![Alpha, Alpha, Gamma, GammaStar]).is_normal());
        assert!(Word(vec![AlphaStar, GammaStar, GammaStar]).is_normal());
        assert!(Word::empty().is_normal());
        assert!(!Word(vec![Gamma, Alpha]).is_normal());
        assert!(!Word(vec![Alpha, AlphaStar]).is_normal());
        assert!(!Word(vec![GammaStar, Gamma]).is_normal());
    }

    #[test]
    fn monomial_word_round_trip() {
        for m in Monomial::all_up_to(4) {
            assert_eq!(Monomial::from_normal_word(&m.to_word()), Some(m));
        }
        // 9 alpha choices... just pin the count for degree ≤ 1
        assert_eq!(Monomial::all_up_to(1).len(), 5);
    }

    #[test]
    fn star_reverses_word() {
        let w: Word = "αγ*".parse().unwrap();
        assert_eq!(w.star(), Word(vec![Gamma, AlphaStar]));
        assert_eq!(w.star().star(), w);
    }

    #[test]
    fn parse_ascii_and_unicode() {
        let a: Word = "aA g G".parse().unwrap();
        let b: Word = "αα*γγ*".parse().unwrap();
        assert_eq!(a, b);
        assert!("αx".parse::<Word>().is_err());
        assert_eq!(Word::all_up_to(2).len(), 1 + 4 + 16);
    }
}
