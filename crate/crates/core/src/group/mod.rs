//! Group oracles: a generator alphabet plus an engine that multiplies
//! canonical element encodings on the right by generators.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub mod extended;
pub mod free;
pub mod heisenberg;
pub mod racg;
pub mod zd;

/// Index of a generator in its alphabet.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(pub u8);

impl Generator {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub type Word = Vec<Generator>;

/// Ordered generator labels together with the formal-inverse involution.
///
/// The order of `symbols` is the order used for shortlex comparisons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorAlphabet {
    symbols: Vec<String>,
    inverse: Vec<Generator>,
}

impl GeneratorAlphabet {
    pub fn new(symbols: Vec<String>, inverse: Vec<usize>) -> Result<Self> {
        if symbols.len() != inverse.len() {
            return Err(Error::config("inverse map must cover every symbol"));
        }
        if symbols.len() > u8::MAX as usize {
            return Err(Error::config("at most 255 generators are supported"));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::config(format!("bad generator label {s:?}")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::config(format!("duplicate generator label {s:?}")));
            }
        }
        for (i, &j) in inverse.iter().enumerate() {
            if j >= symbols.len() || inverse[j] != i {
                return Err(Error::config(format!(
                    "inverse map is not an involution at {:?}",
                    symbols[i]
                )));
            }
        }
        Ok(Self {
            symbols,
            inverse: inverse.into_iter().map(|j| Generator(j as u8)).collect(),
        })
    }

    /// `a, a^-1, b, b^-1, ...` for the given base names.
    pub fn paired<S: AsRef<str>>(names: &[S]) -> Self {
        let mut symbols = Vec::with_capacity(2 * names.len());
        let mut inverse = Vec::with_capacity(2 * names.len());
        for (i, n) in names.iter().enumerate() {
            symbols.push(n.as_ref().to_string());
            symbols.push(format!("{}^-1", n.as_ref()));
            inverse.push(2 * i + 1);
            inverse.push(2 * i);
        }
        Self::new(symbols, inverse).expect("paired alphabet is well formed")
    }

    /// Every generator is its own inverse (Coxeter generators).
    pub fn involutions<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::new(
            names.iter().map(|n| n.as_ref().to_string()).collect(),
            (0..names.len()).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        (0..self.symbols.len()).map(|i| Generator(i as u8))
    }

    pub fn symbol(&self, g: Generator) -> &str {
        &self.symbols[g.index()]
    }

    pub fn inverse(&self, g: Generator) -> Generator {
        self.inverse[g.index()]
    }

    pub fn lookup(&self, label: &str) -> Option<Generator> {
        self.symbols.iter().position(|s| s == label).map(|i| Generator(i as u8))
    }

    /// Resolves one token: an exact label, `x^-1` / `x⁻¹` for the inverse of
    /// `x`, or a single upper-case letter for the inverse of its lower-case
    /// form when that spelling is not itself a label.
    pub fn parse_token(&self, tok: &str) -> Option<Generator> {
        if let Some(g) = self.lookup(tok) {
            return Some(g);
        }
        for suffix in ["^-1", "⁻¹"] {
            if let Some(base) = tok.strip_suffix(suffix) {
                return self.lookup(base).map(|g| self.inverse(g));
            }
        }
        let mut chars = tok.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            if c.is_ascii_uppercase() {
                return self
                    .lookup(&c.to_ascii_lowercase().to_string())
                    .map(|g| self.inverse(g));
            }
        }
        None
    }

    /// Parses a whitespace-separated word. `1` and `ε` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut word = Word::new();
        for tok in text.split_whitespace() {
            if tok == "1" || tok == "ε" {
                continue;
            }
            match self.parse_token(tok) {
                Some(g) => word.push(g),
                None => return Err(Error::invalid(format!("unknown generator label {tok:?}"))),
            }
        }
        Ok(word)
    }

    pub fn render_word(&self, word: &[Generator]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        word.iter().map(|&g| self.symbol(g)).collect::<Vec<_>>().join(" ")
    }

    pub fn invert_word(&self, word: &[Generator]) -> Word {
        word.iter().rev().map(|&g| self.inverse(g)).collect()
    }
}

/// Canonical encoding of a group element: equal elements have identical bytes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub SmallVec<[u8; 16]>);

impl Element {
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Element(SmallVec::from_slice(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", hex::encode(&self.0))
    }
}

/// Membership predicate of a subgroup.
pub trait Membership: Send + Sync {
    fn contains(&self, x: &Element) -> bool;
}

/// Closed-form distance `d_S(x, H)` for a particular subgroup.
pub type DistanceFormula = Arc<dyn Fn(&Element) -> u64 + Send + Sync>;

/// One concrete finitely generated group.
pub trait GroupOracle: Send + Sync {
    fn alphabet(&self) -> &GeneratorAlphabet;

    fn identity(&self) -> Element;

    fn right_multiply(&self, g: &Element, s: Generator) -> Element;

    /// Word length `|g|_S` when the family has a closed form for it.
    fn exact_word_length(&self, _g: &Element) -> Option<u64> {
        None
    }

    /// Human-readable form of an element.
    fn render(&self, g: &Element) -> String;

    /// Parses a word in configuration files. Families may accept derived
    /// labels here that are not generators of the Cayley graph.
    fn parse_word(&self, text: &str) -> Result<Word> {
        self.alphabet().parse_word(text)
    }

    /// Membership test for the subgroup generated by `gens`.
    fn subgroup_membership(&self, gens: &[Element]) -> Result<Box<dyn Membership>>;

    /// A named closed-form distance to the subgroup generated by `gens`.
    fn distance_formula(&self, tag: &str, _gens: &[Element]) -> Result<DistanceFormula> {
        Err(Error::config(format!(
            "distance formula {tag:?} is not available for this group"
        )))
    }
}

/// Left-to-right right multiplication of `word` starting from `start`.
pub fn multiply_word(oracle: &dyn GroupOracle, start: &Element, word: &[Generator]) -> Element {
    word.iter()
        .fold(start.clone(), |acc, &s| oracle.right_multiply(&acc, s))
}

/// The element represented by `word`.
pub fn word_to_element(oracle: &dyn GroupOracle, word: &[Generator]) -> Result<Element> {
    let n = oracle.alphabet().len();
    if let Some(bad) = word.iter().find(|g| g.index() >= n) {
        return Err(Error::invalid(format!("generator index {} out of range", bad.0)));
    }
    Ok(multiply_word(oracle, &oracle.identity(), word))
}

/// Parses and evaluates a textual word.
pub fn parse_element(oracle: &dyn GroupOracle, text: &str) -> Result<Element> {
    let word = oracle.parse_word(text)?;
    word_to_element(oracle, &word)
}

/// Membership in the trivial subgroup.
pub struct TrivialMembership(pub Element);

impl Membership for TrivialMembership {
    fn contains(&self, x: &Element) -> bool {
        *x == self.0
    }
}

/// True when every generator is the identity.
pub(crate) fn all_trivial(oracle: &dyn GroupOracle, gens: &[Element]) -> bool {
    let e = oracle.identity();
    gens.iter().all(|g| *g == e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paired_alphabet_parses_inverse_spellings() {
        let a = GeneratorAlphabet::paired(&["a", "b"]);
        let w = a.parse_word("a a^-1 A b⁻¹ B b").unwrap();
        assert_eq!(
            w,
            vec![
                Generator(0),
                Generator(1),
                Generator(1),
                Generator(3),
                Generator(3),
                Generator(2)
            ]
        );
        assert_eq!(a.render_word(&a.invert_word(&w)), "b^-1 b b a a a^-1");
    }

    #[test]
    fn unknown_label_is_rejected() {
        let a = GeneratorAlphabet::paired(&["a", "b"]);
        assert!(matches!(a.parse_word("a z"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn alphabet_validation() {
        assert!(GeneratorAlphabet::new(vec!["a".into(), "b".into()], vec![1, 1]).is_err());
        assert!(GeneratorAlphabet::new(vec!["a".into(), "a".into()], vec![0, 1]).is_err());
        assert!(GeneratorAlphabet::involutions(&["s1", "s2"]).is_ok());
    }
}
