//! Balls in Cayley graphs: enumeration, distance-to-subgroup annotation,
//! boundary sets and complement components.

use std::hash::BuildHasher;

use hashbrown::HashTable;
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;

use crate::error::{Error, Result};
use crate::group::{Element, Generator, GroupOracle, Word};
use crate::subgroup::SubgroupSpec;

mod annotate;
pub mod cache;

pub use annotate::{
    annotate_subgroup_distance, boundary_set, complement_components, AnnotatedBall, ComplementLabeling,
};

/// Marks a missing neighbor or parent.
pub const NONE: u32 = u32::MAX;

/// Parents expanded per parallel block during enumeration.
const BLOCK: usize = 1 << 15;

/// The ball `B(e, R)` with ids in breadth-first, shortlex-of-first-word
/// order, word lengths, a BFS tree and the neighbor table.
#[derive(Clone)]
pub struct BallIndex {
    radius: u32,
    n_gens: usize,
    elements: Vec<Element>,
    hashes: Vec<u64>,
    table: HashTable<u32>,
    word_length: Vec<u32>,
    parent: Vec<u32>,
    parent_gen: Vec<u8>,
    neighbors: Vec<u32>,
    /// First id of each sphere; `layer_start[R + 1]` is the element count.
    layer_start: Vec<u32>,
}

fn hash_of(x: &Element) -> u64 {
    FxBuildHasher.hash_one(x)
}

impl BallIndex {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn generator_count(&self) -> usize {
        self.n_gens
    }

    pub fn element(&self, id: u32) -> &Element {
        &self.elements[id as usize]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn word_length(&self, id: u32) -> u32 {
        self.word_length[id as usize]
    }

    pub fn word_lengths(&self) -> &[u32] {
        &self.word_length
    }

    pub fn lookup(&self, x: &Element) -> Option<u32> {
        let h = hash_of(x);
        self.table.find(h, |&id| self.elements[id as usize] == *x).copied()
    }

    /// Neighbor `id · s`, or `None` when it lies outside the ball.
    pub fn neighbor(&self, id: u32, s: Generator) -> Option<u32> {
        let n = self.neighbors[id as usize * self.n_gens + s.index()];
        (n != NONE).then_some(n)
    }

    pub fn neighbor_row(&self, id: u32) -> &[u32] {
        let i = id as usize * self.n_gens;
        &self.neighbors[i..i + self.n_gens]
    }

    /// Ids of the sphere `S(e, r)`.
    pub fn sphere(&self, r: u32) -> std::ops::Range<u32> {
        assert!(r <= self.radius);
        self.layer_start[r as usize]..self.layer_start[r as usize + 1]
    }

    /// `|B(e, r)|`.
    pub fn growth(&self, r: u32) -> Result<u64> {
        if r > self.radius {
            return Err(Error::needs_radius("growth", r, self.radius));
        }
        Ok(self.layer_start[r as usize + 1] as u64)
    }

    /// The shortlex-least geodesic word of an element, read off the BFS tree.
    pub fn geodesic_word(&self, id: u32) -> Word {
        let mut word = Vec::with_capacity(self.word_length(id) as usize);
        let mut at = id;
        while self.parent[at as usize] != NONE {
            word.push(Generator(self.parent_gen[at as usize]));
            at = self.parent[at as usize];
        }
        word.reverse();
        word
    }

    /// Ids along the BFS tree from the identity to `id`.
    pub fn geodesic_path(&self, id: u32) -> Vec<u32> {
        let mut path = vec![id];
        let mut at = id;
        while self.parent[at as usize] != NONE {
            at = self.parent[at as usize];
            path.push(at);
        }
        path.reverse();
        path
    }

    fn insert(&mut self, x: Element, hash: u64, length: u32, parent: u32, gen: u8) -> u32 {
        let id = self.elements.len() as u32;
        let hashes = &self.hashes;
        self.table.insert_unique(hash, id, |&j| hashes[j as usize]);
        self.elements.push(x);
        self.hashes.push(hash);
        self.word_length.push(length);
        self.parent.push(parent);
        self.parent_gen.push(gen);
        self.neighbors.extend(std::iter::repeat_n(NONE, self.n_gens));
        id
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        radius: u32,
        n_gens: usize,
        elements: Vec<Element>,
        word_length: Vec<u32>,
        parent: Vec<u32>,
        parent_gen: Vec<u8>,
        neighbors: Vec<u32>,
    ) -> Result<Self> {
        let n = elements.len();
        if word_length.len() != n || parent.len() != n || parent_gen.len() != n || neighbors.len() != n * n_gens {
            return Err(Error::invalid("inconsistent ball tables"));
        }
        let hashes: Vec<u64> = elements.iter().map(hash_of).collect();
        let mut table = HashTable::with_capacity(n);
        for (id, &h) in hashes.iter().enumerate() {
            table.insert_unique(h, id as u32, |&j| hashes[j as usize]);
        }
        let mut layer_start = vec![0u32; radius as usize + 2];
        for (id, &l) in word_length.iter().enumerate() {
            if l > radius || (id > 0 && l < word_length[id - 1]) {
                return Err(Error::invalid("word lengths are not sorted by layer"));
            }
        }
        for r in 0..=radius as usize + 1 {
            layer_start[r] = word_length.partition_point(|&l| (l as usize) < r) as u32;
        }
        Ok(Self {
            radius,
            n_gens,
            elements,
            hashes,
            table,
            word_length,
            parent,
            parent_gen,
            neighbors,
            layer_start,
        })
    }

    pub(crate) fn parents(&self) -> (&[u32], &[u8]) {
        (&self.parent, &self.parent_gen)
    }

    pub(crate) fn neighbor_table(&self) -> &[u32] {
        &self.neighbors
    }
}

/// Enumerates `B(e, R)` layer by layer.
///
/// Products of a layer are computed in parallel on the current rayon pool;
/// insertion is sequential in parent-id then generator order, so ids and
/// every table are independent of the worker count. Refuses to return a
/// partial ball when `budget` elements would be exceeded.
pub fn enumerate_ball(oracle: &dyn GroupOracle, radius: u32, budget: usize) -> Result<BallIndex> {
    let n_gens = oracle.alphabet().len();
    let mut ball = BallIndex {
        radius,
        n_gens,
        elements: Vec::new(),
        hashes: Vec::new(),
        table: HashTable::new(),
        word_length: Vec::new(),
        parent: Vec::new(),
        parent_gen: Vec::new(),
        neighbors: Vec::new(),
        layer_start: vec![0],
    };
    let e = oracle.identity();
    let h = hash_of(&e);
    ball.insert(e, h, 0, NONE, 0);
    for layer in 0..=radius {
        let lo = ball.layer_start[layer as usize] as usize;
        let hi = ball.elements.len();
        ball.layer_start.push(hi as u32);
        for block in (lo..hi).step_by(BLOCK) {
            let end = (block + BLOCK).min(hi);
            let products: Vec<Vec<(Element, u64)>> = ball.elements[block..end]
                .par_iter()
                .map(|x| {
                    oracle
                        .alphabet()
                        .generators()
                        .map(|s| {
                            let y = oracle.right_multiply(x, s);
                            let h = hash_of(&y);
                            (y, h)
                        })
                        .collect()
                })
                .collect();
            for (offset, row) in products.into_iter().enumerate() {
                let id = (block + offset) as u32;
                for (s, (y, h)) in row.into_iter().enumerate() {
                    let found = ball.table.find(h, |&j| ball.elements[j as usize] == y).copied();
                    let target = match found {
                        Some(j) => j,
                        None if layer < radius => {
                            if ball.elements.len() >= budget {
                                return Err(Error::budget(format!(
                                    "ball of radius {radius} exceeds {budget} elements (reached layer {})",
                                    layer + 1
                                )));
                            }
                            ball.insert(y, h, layer + 1, id, s as u8)
                        }
                        None => NONE,
                    };
                    ball.neighbors[id as usize * n_gens + s] = target;
                }
            }
        }
    }
    // layer_start gained one entry per layer plus the initial 0.
    ball.layer_start.truncate(radius as usize + 2);
    debug_assert_eq!(*ball.layer_start.last().unwrap() as usize, ball.elements.len());
    Ok(ball)
}

/// Runs `f` on a dedicated pool with `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Ball and annotation in one step.
pub fn annotated_ball(
    oracle: &dyn GroupOracle,
    spec: &SubgroupSpec,
    radius: u32,
    budget: usize,
) -> Result<AnnotatedBall> {
    let ball = enumerate_ball(oracle, radius, budget)?;
    annotate_subgroup_distance(ball, spec)
}
