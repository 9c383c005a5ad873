//! A group oracle whose generating set is extended by extra words.

use std::sync::Arc;

use super::{multiply_word, DistanceFormula, Element, Generator, GeneratorAlphabet, GroupOracle, Membership, Word};
use crate::error::{Error, Result};

/// Adds `h1, h1^-1, h2, ...` standing for the given words to the generating
/// set of `inner`. Elements and membership are those of `inner`; the word
/// metric changes, so closed-form distances of `inner` are not offered.
pub struct ExtendedOracle {
    inner: Arc<dyn GroupOracle>,
    alphabet: GeneratorAlphabet,
    extra: Vec<Word>,
}

impl ExtendedOracle {
    pub fn new(inner: Arc<dyn GroupOracle>, words: &[Word]) -> Result<Self> {
        let base = inner.alphabet();
        let mut symbols: Vec<String> = base.symbols().to_vec();
        let mut inverse: Vec<usize> = base.generators().map(|g| base.inverse(g).index()).collect();
        let mut extra = Vec::new();
        for (i, w) in words.iter().enumerate() {
            let n = symbols.len();
            symbols.push(format!("h{}", i + 1));
            symbols.push(format!("h{}^-1", i + 1));
            inverse.push(n + 1);
            inverse.push(n);
            extra.push(w.clone());
            extra.push(base.invert_word(w));
        }
        if symbols.len() > u8::MAX as usize {
            return Err(Error::config("too many generators after extension"));
        }
        Ok(Self {
            alphabet: GeneratorAlphabet::new(symbols, inverse)?,
            inner,
            extra,
        })
    }

    pub fn inner(&self) -> &Arc<dyn GroupOracle> {
        &self.inner
    }

    /// The word over the inner alphabet for an extended generator.
    pub fn expand(&self, s: Generator) -> Word {
        let base = self.inner.alphabet().len();
        if s.index() < base {
            vec![s]
        } else {
            self.extra[s.index() - base].clone()
        }
    }
}

impl GroupOracle for ExtendedOracle {
    fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    fn identity(&self) -> Element {
        self.inner.identity()
    }

    fn right_multiply(&self, g: &Element, s: Generator) -> Element {
        let base = self.inner.alphabet().len();
        if s.index() < base {
            self.inner.right_multiply(g, s)
        } else {
            multiply_word(self.inner.as_ref(), g, &self.extra[s.index() - base])
        }
    }

    fn render(&self, g: &Element) -> String {
        self.inner.render(g)
    }

    fn parse_word(&self, text: &str) -> Result<Word> {
        let mut out = Word::new();
        for tok in text.split_whitespace() {
            match self.alphabet.parse_token(tok) {
                Some(g) if g.index() >= self.inner.alphabet().len() => out.push(g),
                _ => out.extend(self.inner.parse_word(tok)?),
            }
        }
        Ok(out)
    }

    fn subgroup_membership(&self, gens: &[Element]) -> Result<Box<dyn Membership>> {
        self.inner.subgroup_membership(gens)
    }

    fn distance_formula(&self, tag: &str, _gens: &[Element]) -> Result<DistanceFormula> {
        Err(Error::config(format!(
            "distance formula {tag:?} does not apply once the generating set is extended"
        )))
    }
}
