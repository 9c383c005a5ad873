//! A group oracle backed by a confluent rewriting system.

use std::collections::HashSet;

use super::{ConfluenceStatus, RewritingSystem};
use crate::error::{Error, Result};
use crate::group::{all_trivial, Element, Generator, GeneratorAlphabet, GroupOracle, Membership, TrivialMembership};

/// Elements are irreducible words of the system.
pub struct RewritingGroup {
    system: RewritingSystem,
    /// Powers `g^m` with `|m| ≤ max_power` accepted by cyclic membership.
    max_power: u32,
}

impl RewritingGroup {
    /// Requires a confluent system in which every letter has an inverse
    /// that cancels with it.
    pub fn new(system: RewritingSystem, max_pairs: usize, max_power: u32) -> Result<Self> {
        let report = system.critical_pair_check(max_pairs);
        if report.status != ConfluenceStatus::Confluent {
            return Err(Error::config(format!(
                "rewriting system is not known to be confluent ({:?})",
                report.status
            )));
        }
        let a = system.alphabet();
        for g in a.generators() {
            if !system.normalize(&[g, a.inverse(g)])?.is_empty() {
                return Err(Error::config(format!(
                    "{} {} does not reduce to the empty word",
                    a.symbol(g),
                    a.symbol(a.inverse(g))
                )));
            }
        }
        Ok(Self { system, max_power })
    }

    pub fn system(&self) -> &RewritingSystem {
        &self.system
    }

    fn word(x: &Element) -> Vec<Generator> {
        x.as_bytes().iter().map(|&b| Generator(b)).collect()
    }
}

impl GroupOracle for RewritingGroup {
    fn alphabet(&self) -> &GeneratorAlphabet {
        self.system.alphabet()
    }

    fn identity(&self) -> Element {
        Element::from_bytes(&[])
    }

    fn right_multiply(&self, g: &Element, s: Generator) -> Element {
        let mut w = Self::word(g);
        w.push(s);
        let nf = self
            .system
            .normalize(&w)
            .expect("confluent system normalizes within the step budget");
        Element(nf.iter().map(|g| g.0).collect())
    }

    fn render(&self, g: &Element) -> String {
        self.system.alphabet().render_word(&Self::word(g))
    }

    /// Trivial or cyclic subgroups; cyclic membership checks powers up to
    /// the configured bound.
    fn subgroup_membership(&self, gens: &[Element]) -> Result<Box<dyn Membership>> {
        if all_trivial(self, gens) {
            return Ok(Box::new(TrivialMembership(self.identity())));
        }
        let e = self.identity();
        let nontrivial: Vec<&Element> = gens.iter().filter(|g| **g != e).collect();
        if nontrivial.len() != 1 {
            return Err(Error::config(
                "rewriting-system groups support only trivial or cyclic subgroups",
            ));
        }
        let g = nontrivial[0];
        let a = self.alphabet();
        let g_inv = crate::group::word_to_element(self, &a.invert_word(&Self::word(g)))?;
        let mut powers = HashSet::new();
        powers.insert(e.clone());
        let (mut up, mut down) = (e.clone(), e);
        for _ in 0..self.max_power {
            up = crate::group::multiply_word(self, &up, &Self::word(g));
            down = crate::group::multiply_word(self, &down, &Self::word(&g_inv));
            powers.insert(up.clone());
            powers.insert(down.clone());
        }
        Ok(Box::new(PowerSet(powers)))
    }
}

struct PowerSet(HashSet<Element>);

impl Membership for PowerSet {
    fn contains(&self, x: &Element) -> bool {
        self.0.contains(x)
    }
}
