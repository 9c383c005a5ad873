//! Free groups, with elements stored as freely reduced words.

use std::collections::HashMap;
use std::sync::Arc;

use super::{
    all_trivial, DistanceFormula, Element, Generator, GeneratorAlphabet, GroupOracle, Membership, TrivialMembership,
};
use crate::error::{Error, Result};

/// Free group of the given rank on `a, b, c, ...`.
#[derive(Clone, Debug)]
pub struct FreeGroup {
    rank: usize,
    alphabet: GeneratorAlphabet,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::config(format!("free group rank must be in 1..=26, got {rank}")));
        }
        let names: Vec<String> = (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        Ok(Self {
            rank,
            alphabet: GeneratorAlphabet::paired(&names),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The reduced word of an element.
    pub fn letters(x: &Element) -> impl Iterator<Item = Generator> + '_ {
        x.as_bytes().iter().map(|&b| Generator(b))
    }
}

impl GroupOracle for FreeGroup {
    fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    fn identity(&self) -> Element {
        Element::from_bytes(&[])
    }

    fn right_multiply(&self, g: &Element, s: Generator) -> Element {
        let mut out = g.clone();
        if out.0.last() == Some(&self.alphabet.inverse(s).0) {
            out.0.pop();
        } else {
            out.0.push(s.0);
        }
        out
    }

    fn exact_word_length(&self, g: &Element) -> Option<u64> {
        Some(g.as_bytes().len() as u64)
    }

    fn render(&self, g: &Element) -> String {
        let word: Vec<Generator> = Self::letters(g).collect();
        self.alphabet.render_word(&word)
    }

    fn subgroup_membership(&self, gens: &[Element]) -> Result<Box<dyn Membership>> {
        if all_trivial(self, gens) {
            return Ok(Box::new(TrivialMembership(self.identity())));
        }
        Ok(Box::new(StallingsGraph::fold(gens)))
    }

    /// `free-cyclic-generator`: H = ⟨s⟩ for a single generator `s`; the
    /// distance drops the leading run of `s^±1` letters.
    fn distance_formula(&self, tag: &str, gens: &[Element]) -> Result<DistanceFormula> {
        if tag != "free-cyclic-generator" {
            return Err(Error::config(format!("free group has no distance formula {tag:?}")));
        }
        let bases: Vec<u8> = gens
            .iter()
            .filter(|g| !g.as_bytes().is_empty())
            .map(|g| match g.as_bytes() {
                [s] => Ok(s / 2),
                _ => Err(Error::config("free-cyclic-generator needs H generated by one letter")),
            })
            .collect::<Result<_>>()?;
        let base = match bases.as_slice() {
            [first, rest @ ..] if rest.iter().all(|b| b == first) => *first,
            _ => return Err(Error::config("free-cyclic-generator needs H generated by one letter")),
        };
        Ok(Arc::new(move |x: &Element| {
            let lead = x.as_bytes().iter().take_while(|&&s| s / 2 == base).count();
            (x.as_bytes().len() - lead) as u64
        }))
    }
}

/// Folded Stallings graph of a finitely generated subgroup.
///
/// Edges are labelled by positive generator index (`letter / 2`); a word is
/// in the subgroup iff reading it from the base vertex returns to the base.
#[derive(Debug)]
pub struct StallingsGraph {
    forward: HashMap<(u32, u8), u32>,
    backward: HashMap<(u32, u8), u32>,
}

impl StallingsGraph {
    pub fn fold(gens: &[Element]) -> Self {
        let mut edges: Vec<(u32, u8, u32)> = Vec::new();
        let mut next_vertex = 1u32;
        for g in gens {
            let word = g.as_bytes();
            if word.is_empty() {
                continue;
            }
            let mut at = 0u32;
            for (i, &s) in word.iter().enumerate() {
                let to = if i + 1 == word.len() {
                    0
                } else {
                    next_vertex += 1;
                    next_vertex - 1
                };
                if s % 2 == 0 {
                    edges.push((at, s / 2, to));
                } else {
                    edges.push((to, s / 2, at));
                }
                at = to;
            }
        }
        let mut parent: Vec<u32> = (0..next_vertex).collect();
        fn find(parent: &mut [u32], mut v: u32) -> u32 {
            while parent[v as usize] != v {
                parent[v as usize] = parent[parent[v as usize] as usize];
                v = parent[v as usize];
            }
            v
        }
        loop {
            for e in edges.iter_mut() {
                e.0 = find(&mut parent, e.0);
                e.2 = find(&mut parent, e.2);
            }
            edges.sort_unstable();
            edges.dedup();
            let mut merge = None;
            let mut out: HashMap<(u32, u8), u32> = HashMap::new();
            let mut inc: HashMap<(u32, u8), u32> = HashMap::new();
            for &(u, l, v) in &edges {
                if let Some(&w) = out.get(&(u, l)) {
                    if w != v {
                        merge = Some((w, v));
                        break;
                    }
                }
                if let Some(&w) = inc.get(&(v, l)) {
                    if w != u {
                        merge = Some((w, u));
                        break;
                    }
                }
                out.insert((u, l), v);
                inc.insert((v, l), u);
            }
            match merge {
                Some((x, y)) => {
                    // Keep the base vertex as its own representative.
                    let (x, y) = (find(&mut parent, x), find(&mut parent, y));
                    let (keep, drop) = if y == 0 { (y, x) } else { (x, y) };
                    parent[drop as usize] = keep;
                }
                None => {
                    return Self {
                        forward: out,
                        backward: inc,
                    }
                }
            }
        }
    }

    pub fn accepts(&self, word: impl IntoIterator<Item = Generator>) -> bool {
        let mut at = 0u32;
        for s in word {
            let key = (at, s.0 / 2);
            let next = if s.0 % 2 == 0 {
                self.forward.get(&key)
            } else {
                self.backward.get(&key)
            };
            match next {
                Some(&v) => at = v,
                None => return false,
            }
        }
        at == 0
    }
}

impl Membership for StallingsGraph {
    fn contains(&self, x: &Element) -> bool {
        self.accepts(FreeGroup::letters(x))
    }
}
