//! Subgroup specifications and intrinsic word lengths.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{multiply_word, word_to_element, DistanceFormula, Element, GroupOracle, Membership, Word};

/// A subgroup H: membership predicate, generating words and an optional
/// exact distance `d_S(x, H)`.
pub struct SubgroupSpec {
    generating_words: Vec<Word>,
    generators: Vec<Element>,
    member: Box<dyn Membership>,
    exact_distance: Option<DistanceFormula>,
    formula_tag: Option<String>,
}

impl SubgroupSpec {
    /// Builds and sanity-checks a subgroup: the identity, every generator
    /// and every product of two generators (or inverses) must be members,
    /// and a configured formula must vanish exactly on those elements.
    pub fn new(oracle: &dyn GroupOracle, words: Vec<Word>, formula: Option<&str>) -> Result<Self> {
        let generators = words
            .iter()
            .map(|w| word_to_element(oracle, w))
            .collect::<Result<Vec<_>>>()?;
        let member = oracle.subgroup_membership(&generators)?;
        let exact_distance = formula
            .map(|tag| oracle.distance_formula(tag, &generators))
            .transpose()?;
        let spec = Self {
            formula_tag: formula.map(str::to_string),
            generating_words: words,
            generators,
            member,
            exact_distance,
        };
        spec.spot_check(oracle)?;
        Ok(spec)
    }

    pub fn trivial(oracle: &dyn GroupOracle) -> Result<Self> {
        Self::new(oracle, Vec::new(), None)
    }

    fn spot_check(&self, oracle: &dyn GroupOracle) -> Result<()> {
        let a = oracle.alphabet();
        let mut samples = vec![oracle.identity()];
        let signed: Vec<Word> = self
            .generating_words
            .iter()
            .flat_map(|w| [w.clone(), a.invert_word(w)])
            .collect();
        for u in &signed {
            let x = word_to_element(oracle, u)?;
            for v in &signed {
                samples.push(multiply_word(oracle, &x, v));
            }
            samples.push(x);
        }
        for x in &samples {
            if !self.member(x) {
                return Err(Error::config(format!(
                    "membership test rejects {} although it lies in the generated subgroup",
                    oracle.render(x)
                )));
            }
            if let Some(d) = self.exact_distance(x) {
                if d != 0 {
                    return Err(Error::config(format!(
                        "distance formula gives {d} for subgroup element {}",
                        oracle.render(x)
                    )));
                }
            }
        }
        if let Some(f) = &self.exact_distance {
            for s in a.generators() {
                let x = oracle.right_multiply(&oracle.identity(), s);
                if (f(&x) == 0) != self.member(&x) {
                    return Err(Error::config(format!(
                        "distance formula and membership disagree on {}",
                        oracle.render(&x)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn member(&self, x: &Element) -> bool {
        self.member.contains(x)
    }

    pub fn exact_distance(&self, x: &Element) -> Option<u64> {
        self.exact_distance.as_ref().map(|f| f(x))
    }

    pub fn has_formula(&self) -> bool {
        self.exact_distance.is_some()
    }

    pub fn formula_tag(&self) -> Option<&str> {
        self.formula_tag.as_deref()
    }

    pub fn generating_words(&self) -> &[Word] {
        &self.generating_words
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn is_trivial(&self, oracle: &dyn GroupOracle) -> bool {
        let e = oracle.identity();
        self.generators.iter().all(|g| *g == e)
    }
}

/// Closed-form distance to H, or `None` when the caller has to fall back
/// to breadth-first search.
pub fn subgroup_distance_oracle(spec: &SubgroupSpec, x: &Element) -> Option<u64> {
    spec.exact_distance(x)
}

/// Breadth-first enumeration of H in its own Cayley graph over the
/// generating words and their inverses, one `|·|_T` layer at a time.
pub struct TLengthBfs<'a> {
    oracle: &'a dyn GroupOracle,
    steps: Vec<Word>,
    seen: HashMap<Element, u64>,
    layer: Vec<Element>,
    length: u64,
}

impl<'a> TLengthBfs<'a> {
    pub fn new(oracle: &'a dyn GroupOracle, spec: &SubgroupSpec) -> Self {
        let a = oracle.alphabet();
        let e = oracle.identity();
        let mut steps: Vec<Word> = Vec::new();
        for w in spec.generating_words() {
            for v in [w.clone(), a.invert_word(w)] {
                let x = multiply_word(oracle, &e, &v);
                if x != e && !steps.iter().any(|s| multiply_word(oracle, &e, s) == x) {
                    steps.push(v);
                }
            }
        }
        let mut seen = HashMap::new();
        seen.insert(e.clone(), 0);
        Self {
            oracle,
            steps,
            seen,
            layer: vec![e],
            length: 0,
        }
    }

    /// The current layer: elements of T-length [`Self::length`], in
    /// discovery order.
    pub fn layer(&self) -> &[Element] {
        &self.layer
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn visited(&self) -> usize {
        self.seen.len()
    }

    pub fn t_length(&self, x: &Element) -> Option<u64> {
        self.seen.get(x).copied()
    }

    /// Moves to the next layer. Returns false when H is exhausted.
    pub fn advance(&mut self) -> bool {
        let mut next = Vec::new();
        for x in &self.layer {
            for s in &self.steps {
                let y = multiply_word(self.oracle, x, s);
                if !self.seen.contains_key(&y) {
                    self.seen.insert(y.clone(), self.length + 1);
                    next.push(y);
                }
            }
        }
        self.length += 1;
        self.layer = next;
        !self.layer.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::heisenberg::HeisenbergGroup;
    use crate::group::parse_element;
    use crate::group::racg::RacgGroup;
    use crate::group::zd::ZdGroup;
    use num_bigint::BigInt;

    #[test]
    fn distance_oracle_examples() {
        let h = HeisenbergGroup::<BigInt>::default();
        let spec = SubgroupSpec::new(&h, vec![h.parse_word("c").unwrap()], Some("heisenberg-center")).unwrap();
        assert_eq!(subgroup_distance_oracle(&spec, &h.element(2, 1, 5)), Some(3));
        assert_eq!(subgroup_distance_oracle(&spec, &h.element(0, 0, 9)), Some(0));

        let z = ZdGroup::<i64>::new(2).unwrap();
        let axis = SubgroupSpec::new(&z, vec![z.parse_word("a").unwrap()], Some("zd-coordinate")).unwrap();
        assert_eq!(subgroup_distance_oracle(&axis, &z.element(&[3, 4])), Some(4));
        let plain = SubgroupSpec::new(&z, vec![z.parse_word("a").unwrap()], None).unwrap();
        assert_eq!(subgroup_distance_oracle(&plain, &z.element(&[3, 4])), None);
    }

    #[test]
    fn mismatched_formula_is_rejected() {
        let z = ZdGroup::<i64>::new(2).unwrap();
        assert!(SubgroupSpec::new(&z, vec![z.parse_word("a b").unwrap()], Some("zd-coordinate")).is_err());
        let p = RacgGroup::pentagon();
        assert!(SubgroupSpec::new(&p, vec![p.parse_word("s1 s2").unwrap()], Some("racg-rotation")).is_err());
    }

    #[test]
    fn t_lengths_of_center() {
        let h = HeisenbergGroup::<BigInt>::default();
        let spec = SubgroupSpec::new(&h, vec![h.parse_word("c").unwrap()], None).unwrap();
        let mut bfs = TLengthBfs::new(&h, &spec);
        for _ in 0..5 {
            assert!(bfs.advance());
        }
        assert_eq!(bfs.t_length(&h.element(0, 0, -5)), Some(5));
        assert_eq!(bfs.t_length(&h.element(0, 0, 3)), Some(3));
        assert_eq!(bfs.layer().len(), 2);
    }

    #[test]
    fn finite_subgroup_exhausts() {
        let p = RacgGroup::pentagon();
        let spec = SubgroupSpec::new(&p, vec![p.parse_word("s1").unwrap(), p.parse_word("s2").unwrap()], None).unwrap();
        let mut bfs = TLengthBfs::new(&p, &spec);
        while bfs.advance() {}
        assert_eq!(bfs.visited(), 4);
        assert!(spec.member(&parse_element(&p, "s2 s1").unwrap()));
    }
}
