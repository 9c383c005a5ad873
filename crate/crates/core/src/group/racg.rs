//! Right-angled Coxeter groups with shortlex normal forms.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use super::{
    all_trivial, DistanceFormula, Element, Generator, GeneratorAlphabet, GroupOracle, Membership, TrivialMembership,
};
use crate::error::{Error, Result};

/// Commutation graph: generators `i` and `j` commute iff adjacent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationGraph {
    n: usize,
    adj: Vec<bool>,
}

impl CommutationGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![false; n * n];
        for &(i, j) in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::config(format!("bad commutation edge ({i}, {j})")));
            }
            adj[i * n + j] = true;
            adj[j * n + i] = true;
        }
        Ok(Self { n, adj })
    }

    /// The n-cycle `0–1–…–(n−1)–0`.
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, &edges).expect("cycle edges are valid")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn adjacent(&self, i: u8, j: u8) -> bool {
        self.adj[i as usize * self.n + j as usize]
    }
}

/// Right multiplication of a shortlex normal form by one generator, in
/// linear time. The result is again the shortlex normal form.
pub fn racg_right_multiply(graph: &CommutationGraph, w: &mut Vec<u8>, s: u8) {
    let mut j0 = w.len();
    while j0 > 0 && graph.adjacent(s, w[j0 - 1]) {
        j0 -= 1;
    }
    if j0 > 0 && w[j0 - 1] == s {
        // s is a right descent: its last occurrence is followed only by
        // letters commuting with it.
        w.remove(j0 - 1);
        return;
    }
    let at = (j0..w.len()).find(|&j| s < w[j]).unwrap_or(w.len());
    w.insert(at, s);
}

/// Shortlex normal form of an arbitrary word.
pub fn racg_normal_form(graph: &CommutationGraph, word: &[u8]) -> Vec<u8> {
    let mut w = Vec::with_capacity(word.len());
    for &s in word {
        racg_right_multiply(graph, &mut w, s);
    }
    w
}

/// Shortlex least word among everything reachable from `word` by deleting
/// adjacent equal letters and swapping adjacent commuting letters. Explores
/// the full orbit, so only usable for short words.
pub fn racg_normal_form_exhaustive(graph: &CommutationGraph, word: &[u8]) -> Vec<u8> {
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(word.to_vec());
    queue.push_back(word.to_vec());
    let mut best = word.to_vec();
    while let Some(w) = queue.pop_front() {
        if (w.len(), &w) < (best.len(), &best) {
            best = w.clone();
        }
        for i in 0..w.len().saturating_sub(1) {
            let (x, y) = (w[i], w[i + 1]);
            let next = if x == y {
                let mut v = w[..i].to_vec();
                v.extend_from_slice(&w[i + 2..]);
                v
            } else if graph.adjacent(x, y) {
                let mut v = w.clone();
                v.swap(i, i + 1);
                v
            } else {
                continue;
            };
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    best
}

/// Number of letters of `J` that can be stripped from the left of a
/// reduced word, leaving the minimal-length representative of `W_J · x`.
/// Returns `(stripped, remaining_length)`.
pub fn strip_left_descents(graph: &CommutationGraph, word: &[u8], j: &[bool]) -> (usize, usize) {
    let mut w = word.to_vec();
    let mut stripped = 0;
    'outer: loop {
        for i in 0..w.len() {
            let s = w[i];
            if j[s as usize] && w[..i].iter().all(|&t| t != s && graph.adjacent(s, t)) {
                w.remove(i);
                stripped += 1;
                continue 'outer;
            }
        }
        return (stripped, w.len());
    }
}

/// A right-angled Coxeter group.
#[derive(Clone, Debug)]
pub struct RacgGroup {
    graph: CommutationGraph,
    alphabet: GeneratorAlphabet,
}

impl RacgGroup {
    pub fn new(names: &[String], graph: CommutationGraph) -> Result<Self> {
        if names.len() != graph.len() {
            return Err(Error::config("commutation graph size differs from generator count"));
        }
        Ok(Self {
            alphabet: GeneratorAlphabet::involutions(names)?,
            graph,
        })
    }

    /// The right-angled pentagon group on `s1 … s5`.
    pub fn pentagon() -> Self {
        let names: Vec<String> = (1..=5).map(|i| format!("s{i}")).collect();
        Self::new(&names, CommutationGraph::cycle(5)).expect("pentagon is well formed")
    }

    pub fn graph(&self) -> &CommutationGraph {
        &self.graph
    }

    fn letter_mask(&self, gens: &[Element]) -> Option<Vec<bool>> {
        let mut mask = vec![false; self.graph.len()];
        for g in gens {
            match g.as_bytes() {
                [] => {}
                [s] => mask[*s as usize] = true,
                _ => return None,
            }
        }
        Some(mask)
    }

    /// `(i, j)` when H is generated by the single product `s_i s_j` (or its
    /// inverse) of two non-commuting generators.
    fn rotation_pair(&self, gens: &[Element]) -> Option<(u8, u8)> {
        let mut pair = None;
        for g in gens {
            match g.as_bytes() {
                [] => {}
                &[x, y] if !self.graph.adjacent(x, y) => {
                    let p = (x.min(y), x.max(y));
                    if pair.is_some_and(|q| q != p) {
                        return None;
                    }
                    pair = Some(p);
                }
                _ => return None,
            }
        }
        pair
    }
}

impl GroupOracle for RacgGroup {
    fn alphabet(&self) -> &GeneratorAlphabet {
        &self.alphabet
    }

    fn identity(&self) -> Element {
        Element::from_bytes(&[])
    }

    fn right_multiply(&self, g: &Element, s: Generator) -> Element {
        let mut w = g.as_bytes().to_vec();
        racg_right_multiply(&self.graph, &mut w, s.0);
        Element::from_bytes(&w)
    }

    fn exact_word_length(&self, g: &Element) -> Option<u64> {
        Some(g.as_bytes().len() as u64)
    }

    fn render(&self, g: &Element) -> String {
        let w: Vec<Generator> = g.as_bytes().iter().map(|&b| Generator(b)).collect();
        self.alphabet.render_word(&w)
    }

    /// Special subgroups `W_J` and rotation subgroups `⟨s_i s_j⟩` with
    /// `s_i, s_j` non-commuting.
    fn subgroup_membership(&self, gens: &[Element]) -> Result<Box<dyn Membership>> {
        if all_trivial(self, gens) {
            return Ok(Box::new(TrivialMembership(self.identity())));
        }
        if let Some(mask) = self.letter_mask(gens) {
            return Ok(Box::new(ParabolicMembership { mask }));
        }
        if let Some((i, j)) = self.rotation_pair(gens) {
            return Ok(Box::new(RotationMembership { i, j }));
        }
        Err(Error::config(
            "right-angled Coxeter subgroups must be special (single letters) or ⟨s_i s_j⟩ with s_i, s_j non-commuting",
        ))
    }

    fn distance_formula(&self, tag: &str, gens: &[Element]) -> Result<DistanceFormula> {
        match tag {
            "racg-parabolic" => {
                let mask = self
                    .letter_mask(gens)
                    .ok_or_else(|| Error::config("racg-parabolic needs single-letter generators"))?;
                let graph = self.graph.clone();
                Ok(Arc::new(move |x: &Element| {
                    strip_left_descents(&graph, x.as_bytes(), &mask).1 as u64
                }))
            }
            "racg-rotation" => {
                let (i, j) = self
                    .rotation_pair(gens)
                    .ok_or_else(|| Error::config("racg-rotation needs H = ⟨s_i s_j⟩ with s_i, s_j non-commuting"))?;
                let mut mask = vec![false; self.graph.len()];
                mask[i as usize] = true;
                mask[j as usize] = true;
                let graph = self.graph.clone();
                Ok(Arc::new(move |x: &Element| {
                    let (stripped, rest) = strip_left_descents(&graph, x.as_bytes(), &mask);
                    (rest + stripped % 2) as u64
                }))
            }
            _ => Err(Error::config(format!(
                "right-angled Coxeter group has no distance formula {tag:?}"
            ))),
        }
    }
}

struct ParabolicMembership {
    mask: Vec<bool>,
}

impl Membership for ParabolicMembership {
    fn contains(&self, x: &Element) -> bool {
        x.as_bytes().iter().all(|&s| self.mask[s as usize])
    }
}

struct RotationMembership {
    i: u8,
    j: u8,
}

impl Membership for RotationMembership {
    fn contains(&self, x: &Element) -> bool {
        let w = x.as_bytes();
        w.len().is_multiple_of(2) && w.iter().all(|&s| s == self.i || s == self.j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_element;
    use proptest::prelude::*;

    fn pentagon_word(text: &str) -> Vec<u8> {
        let g = RacgGroup::pentagon();
        g.alphabet().parse_word(text).unwrap().iter().map(|s| s.0).collect()
    }

    #[test]
    fn normal_form_examples() {
        let g = RacgGroup::pentagon();
        let graph = g.graph();
        assert!(racg_normal_form(graph, &pentagon_word("s1 s1")).is_empty());
        assert_eq!(racg_normal_form(graph, &pentagon_word("s2 s1 s2")), pentagon_word("s1"));
        let alt = pentagon_word("s1 s3 s1 s3 s1 s3");
        assert_eq!(racg_normal_form(graph, &alt), alt);
        assert_eq!(racg_normal_form_exhaustive(graph, &alt), alt);
        assert_eq!(parse_element(&g, "s1 s2 s1 s2").unwrap(), g.identity());
    }

    #[test]
    fn rotation_formula_small_cases() {
        let g = RacgGroup::pentagon();
        let h = [parse_element(&g, "s1 s3").unwrap()];
        let d = g.distance_formula("racg-rotation", &h).unwrap();
        assert_eq!(d(&parse_element(&g, "s1").unwrap()), 1);
        assert_eq!(d(&parse_element(&g, "s3 s1 s3 s1").unwrap()), 0);
        assert_eq!(d(&parse_element(&g, "s1 s4").unwrap()), 2);
        assert_eq!(d(&parse_element(&g, "s2").unwrap()), 1);
        let m = g.subgroup_membership(&h).unwrap();
        assert!(m.contains(&parse_element(&g, "s3 s1").unwrap()));
        assert!(!m.contains(&parse_element(&g, "s3").unwrap()));
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Vec<u8>> {
        proptest::collection::vec(0u8..5, 0..=max)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        #[test]
        fn fast_matches_exhaustive(w in arb_word(9)) {
            let g = RacgGroup::pentagon();
            prop_assert_eq!(racg_normal_form(g.graph(), &w), racg_normal_form_exhaustive(g.graph(), &w));
        }

        #[test]
        fn normal_form_is_idempotent(w in arb_word(40)) {
            let g = RacgGroup::pentagon();
            let nf = racg_normal_form(g.graph(), &w);
            prop_assert_eq!(racg_normal_form(g.graph(), &nf), nf);
        }

        #[test]
        fn fast_matches_exhaustive_on_other_graphs(
            w in proptest::collection::vec(0u8..4, 0..=8),
            edges in proptest::collection::vec((0usize..4, 0usize..4), 0..6),
        ) {
            let edges: Vec<(usize, usize)> = edges.into_iter().filter(|(i, j)| i != j).collect();
            let graph = CommutationGraph::new(4, &edges).unwrap();
            prop_assert_eq!(racg_normal_form(&graph, &w), racg_normal_form_exhaustive(&graph, &w));
        }

        #[test]
        fn right_multiplication_is_an_involution(w in arb_word(20), s in 0u8..5) {
            let g = RacgGroup::pentagon();
            let x = Element::from_bytes(&racg_normal_form(g.graph(), &w));
            let y = g.right_multiply(&g.right_multiply(&x, Generator(s)), Generator(s));
            prop_assert_eq!(x, y);
        }

        #[test]
        fn commuting_swaps_give_same_element(w in arb_word(16), at in 0usize..16) {
            let g = RacgGroup::pentagon();
            let mut v = w.clone();
            if at + 1 < v.len() && g.graph().adjacent(v[at], v[at + 1]) {
                v.swap(at, at + 1);
            }
            prop_assert_eq!(racg_normal_form(g.graph(), &w), racg_normal_form(g.graph(), &v));
        }
    }
}
