//! The integer Heisenberg group `⟨a, b, c | [b, a] = c, c central⟩`.
//!
//! Elements are stored in the normal form `a^k b^ℓ c^p` as the triple
//! `(k, ℓ, p)`. With `(k₁,ℓ₁,p₁)(k₂,ℓ₂,p₂) = (k₁+k₂, ℓ₁+ℓ₂, p₁+p₂+ℓ₁k₂)`.

use std::marker::PhantomData;
use std::sync::Arc;

use smallvec::SmallVec;

use super::{
    all_trivial, DistanceFormula, Element, Generator, GeneratorAlphabet, GroupOracle, Membership, TrivialMembership,
    Word,
};
use crate::error::{Error, Result};
use crate::scalar::ExactInt;

/// Normal-form exponents `(k, ℓ, p)` of `a^k b^ℓ c^p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triple<T> {
    pub k: T,
    pub l: T,
    pub p: T,
}

impl<T: ExactInt> Triple<T> {
    pub fn new(k: T, l: T, p: T) -> Self {
        Self { k, l, p }
    }

    pub fn from_i64(k: i64, l: i64, p: i64) -> Self {
        Self::new(T::from_i64_exact(k), T::from_i64_exact(l), T::from_i64_exact(p))
    }

    pub fn identity() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn product(&self, o: &Self) -> Self {
        Self::new(
            self.k.add_exact(&o.k),
            self.l.add_exact(&o.l),
            self.p.add_exact(&o.p).add_exact(&self.l.mul_exact(&o.k)),
        )
    }

    pub fn inverse(&self) -> Self {
        Self::new(
            -self.k.clone(),
            -self.l.clone(),
            self.l.mul_exact(&self.k).sub_exact(&self.p),
        )
    }

    /// `self^m`, using `p·m + kℓ·m(m−1)/2` for the central coordinate.
    pub fn pow(&self, m: &T) -> Self {
        let two = T::from_i64_exact(2);
        let m1 = m.sub_exact(&T::one());
        let tri = m.mul_exact(&m1) / two;
        Self::new(
            self.k.mul_exact(m),
            self.l.mul_exact(m),
            self.p
                .mul_exact(m)
                .add_exact(&self.k.mul_exact(&self.l).mul_exact(&tri)),
        )
    }
}

/// One of the six letters `a^±1, b^±1, c^±1`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum HeisenbergLetter {
    A,
    AInv,
    B,
    BInv,
    C,
    CInv,
}

/// Right multiplication of a normal form by one letter.
pub fn heisenberg_multiply<T: ExactInt>(x: &Triple<T>, s: HeisenbergLetter) -> Triple<T> {
    let one = T::one();
    let (k, l, p) = (&x.k, &x.l, &x.p);
    match s {
        HeisenbergLetter::A => Triple::new(k.add_exact(&one), l.clone(), p.add_exact(l)),
        HeisenbergLetter::AInv => Triple::new(k.sub_exact(&one), l.clone(), p.sub_exact(l)),
        HeisenbergLetter::B => Triple::new(k.clone(), l.add_exact(&one), p.clone()),
        HeisenbergLetter::BInv => Triple::new(k.clone(), l.sub_exact(&one), p.clone()),
        HeisenbergLetter::C => Triple::new(k.clone(), l.clone(), p.add_exact(&one)),
        HeisenbergLetter::CInv => Triple::new(k.clone(), l.clone(), p.sub_exact(&one)),
    }
}

const LETTERS: [HeisenbergLetter; 6] = [
    HeisenbergLetter::A,
    HeisenbergLetter::AInv,
    HeisenbergLetter::B,
    HeisenbergLetter::BInv,
    HeisenbergLetter::C,
    HeisenbergLetter::CInv,
];

/// Heisenberg group oracle.
///
/// The Cayley graph uses `{a, b}` by default; `with_c` adds `c` to the
/// generating set. Without `c`, configuration words may still write `c`,
/// which expands to `b a b⁻¹ a⁻¹`.
#[derive(Clone, Debug)]
pub struct HeisenbergGroup<T> {
    include_c: bool,
    alphabet: GeneratorAlphabet,
    _scalar: PhantomData<fn() -> T>,
}

impl<T: ExactInt> Default for HeisenbergGroup<T> {
    fn default() -> Self {
        Self::new(false)
    }
}

impl<T: ExactInt> HeisenbergGroup<T> {
    pub fn new(include_c: bool) -> Self {
        let names: &[&str] = if include_c { &["a", "b", "c"] } else { &["a", "b"] };
        Self {
            include_c,
            alphabet: GeneratorAlphabet::paired(names),
            _scalar: PhantomData,
        }
    }

    pub fn with_c() -> Self {
        Self::new(true)
    }

    pub fn includes_c(&self) -> bool {
        self.include_c
    }

    pub fn encode(&self, t: &Triple<T>) -> Element {
        let mut out = SmallVec::new();
        t.k.encode_into(&mut out);
        t.l.encode_into(&mut out);
        t.p.encode_into(&mut out);
        Element(out)
    }

    pub fn decode(&self, x: &Element) -> Triple<T> {
        let bytes = x.as_bytes();
        let (k, i) = T::decode_from(bytes);
        let (l, j) = T::decode_from(&bytes[i..]);
        let (p, _) = T::decode_from(&bytes[i + j..]);
        Triple::new(k, l, p)
    }

    pub fn element(&self, k: i64, l: i64, p: i64) -> Element {
        self.encode(&Triple::from_i64(k, l, p))
    }

    pub fn letter(&self, s: Generator) -> HeisenbergLetter {
        LETTERS[s.index()]
    }
}

impl<T: ExactInt> GroupOracle for HeisenbergGroup<T> {
    fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    fn identity(&self) -> Element {
        self.encode(&Triple::identity())
    }

    fn right_multiply(&self, g: &Element, s: Generator) -> Element {
        self.encode(&heisenberg_multiply(&self.decode(g), self.letter(s)))
    }

    fn render(&self, g: &Element) -> String {
        let t = self.decode(g);
        format!("a^{} b^{} c^{}", t.k, t.l, t.p)
    }

    fn parse_word(&self, text: &str) -> Result<Word> {
        if self.include_c {
            return self.alphabet.parse_word(text);
        }
        let mut out = Word::new();
        for tok in text.split_whitespace() {
            let expanded = match tok {
                "c" => "b a b^-1 a^-1",
                "c^-1" | "c⁻¹" | "C" => "a b a^-1 b^-1",
                other => other,
            };
            out.extend(self.alphabet.parse_word(expanded)?);
        }
        Ok(out)
    }

    /// Cyclic subgroups (any generator) and the trivial subgroup.
    fn subgroup_membership(&self, gens: &[Element]) -> Result<Box<dyn Membership>> {
        if all_trivial(self, gens) {
            return Ok(Box::new(TrivialMembership(self.identity())));
        }
        let e = self.identity();
        let nontrivial: Vec<&Element> = gens.iter().filter(|g| **g != e).collect();
        let g = nontrivial[0];
        if nontrivial
            .iter()
            .any(|h| *h != g && **h != self.encode(&self.decode(g).inverse()))
        {
            return Err(Error::config(
                "Heisenberg subgroups are supported only when cyclic (one generator)",
            ));
        }
        Ok(Box::new(CyclicMembership {
            group: self.clone(),
            gen: self.decode(g),
        }))
    }

    /// `heisenberg-center`: H = ⟨c⟩ and `d_S(a^k b^ℓ c^p, H) = |k| + |ℓ|`.
    fn distance_formula(&self, tag: &str, gens: &[Element]) -> Result<DistanceFormula> {
        if tag != "heisenberg-center" {
            return Err(Error::config(format!(
                "Heisenberg group has no distance formula {tag:?}"
            )));
        }
        let c = self.element(0, 0, 1);
        let c_inv = self.element(0, 0, -1);
        let e = self.identity();
        let generates_center = gens.iter().all(|g| *g == c || *g == c_inv || *g == e) && gens.iter().any(|g| *g != e);
        if !generates_center {
            return Err(Error::config("heisenberg-center requires H = ⟨c⟩"));
        }
        let group = self.clone();
        Ok(Arc::new(move |x: &Element| {
            let t = group.decode(x);
            let k = t.k.abs().to_u64().expect("exponent fits u64");
            let l = t.l.abs().to_u64().expect("exponent fits u64");
            k + l
        }))
    }
}

struct CyclicMembership<T> {
    group: HeisenbergGroup<T>,
    gen: Triple<T>,
}

impl<T: ExactInt> Membership for CyclicMembership<T> {
    fn contains(&self, x: &Element) -> bool {
        let t = self.group.decode(x);
        let g = &self.gen;
        let m = if !g.k.is_zero() {
            if !(t.k.clone() % g.k.clone()).is_zero() {
                return false;
            }
            t.k.clone() / g.k.clone()
        } else if !g.l.is_zero() {
            if !t.k.is_zero() || !(t.l.clone() % g.l.clone()).is_zero() {
                return false;
            }
            t.l.clone() / g.l.clone()
        } else {
            if !t.k.is_zero() || !t.l.is_zero() || !(t.p.clone() % g.p.clone()).is_zero() {
                return false;
            }
            return true;
        };
        g.pow(&m) == t
    }
}
