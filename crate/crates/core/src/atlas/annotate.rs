use std::collections::VecDeque;

use rayon::prelude::*;

use super::{BallIndex, NONE};
use crate::error::{Error, Result};
use crate::subgroup::SubgroupSpec;

/// A ball with `dist_to_H` per element and the radius `valid_core` inside
/// which those distances are exact.
#[derive(Clone)]
pub struct AnnotatedBall {
    pub base: BallIndex,
    dist: Vec<u32>,
    valid_core: u32,
    exact: bool,
}

impl AnnotatedBall {
    pub fn radius(&self) -> u32 {
        self.base.radius()
    }

    pub fn valid_core(&self) -> u32 {
        self.valid_core
    }

    /// True when distances come from a closed formula rather than BFS.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn dist(&self, id: u32) -> u32 {
        self.dist[id as usize]
    }

    pub fn dists(&self) -> &[u32] {
        &self.dist
    }

    /// Inside the certified region `|x|_S ≤ valid_core`.
    pub fn in_core(&self, id: u32) -> bool {
        self.base.word_length(id) <= self.valid_core
    }

    pub fn check_level(&self, what: &str, r: u32) -> Result<()> {
        if r > self.valid_core {
            return Err(Error::needs_radius(
                what,
                if self.exact { r } else { 2 * r },
                self.base.radius(),
            ));
        }
        Ok(())
    }

    pub(crate) fn from_parts(base: BallIndex, dist: Vec<u32>, valid_core: u32, exact: bool) -> Result<Self> {
        if dist.len() != base.element_count() || valid_core > base.radius() {
            return Err(Error::invalid("inconsistent annotation"));
        }
        Ok(Self {
            base,
            dist,
            valid_core,
            exact,
        })
    }
}

/// Annotates every element with its distance to H: the configured formula
/// when there is one (`valid_core = R`), otherwise a multi-source BFS from
/// the members inside the ball (`valid_core = ⌊R/2⌋`, since a nearest
/// member of an element of length ≤ R/2 and a geodesic to it stay in the
/// ball).
pub fn annotate_subgroup_distance(ball: BallIndex, spec: &SubgroupSpec) -> Result<AnnotatedBall> {
    let n = ball.element_count();
    if spec.has_formula() {
        let dist: Vec<u32> = ball
            .elements()
            .par_iter()
            .map(|x| {
                let d = spec.exact_distance(x).expect("formula present");
                u32::try_from(d).expect("distance fits u32")
            })
            .collect();
        let core = ball.radius();
        return AnnotatedBall::from_parts(ball, dist, core, true);
    }
    let member: Vec<bool> = ball.elements().par_iter().map(|x| spec.member(x)).collect();
    if !member[0] {
        return Err(Error::config("membership test rejects the identity"));
    }
    let mut dist = vec![NONE; n];
    let mut queue = VecDeque::new();
    for (id, &m) in member.iter().enumerate() {
        if m {
            dist[id] = 0;
            queue.push_back(id as u32);
        }
    }
    while let Some(v) = queue.pop_front() {
        let dv = dist[v as usize];
        for &w in ball.neighbor_row(v) {
            if w != NONE && dist[w as usize] == NONE {
                dist[w as usize] = dv + 1;
                queue.push_back(w);
            }
        }
    }
    let core = ball.radius() / 2;
    AnnotatedBall::from_parts(ball, dist, core, false)
}

/// `∂N_r(H)` inside the reliable region: ids with `dist_to_H = r` and
/// `|x|_S ≤ valid_core`.
pub fn boundary_set(aball: &AnnotatedBall, r: u32) -> Result<Vec<u32>> {
    if r == 0 {
        return Err(Error::invalid("boundary level must be at least 1"));
    }
    aball.check_level("boundary set", r)?;
    Ok((0..aball.base.element_count() as u32)
        .filter(|&id| aball.in_core(id) && aball.dist(id) == r)
        .collect())
}

/// Connected components of `{dist_to_H ≥ r}` inside the reliable region.
///
/// Component ids are numbered by smallest member id. A component touches
/// the frontier when it contains an element of word length `valid_core`.
#[derive(Clone, Debug)]
pub struct ComplementLabeling {
    pub r: u32,
    pub frontier: u32,
    /// Component id per element, [`NONE`] outside the region.
    pub component: Vec<u32>,
    pub touches_frontier: Vec<bool>,
    pub size: Vec<u64>,
    pub max_dist: Vec<u32>,
}

impl ComplementLabeling {
    pub fn component_count(&self) -> usize {
        self.size.len()
    }

    pub fn label(&self, id: u32) -> Option<u32> {
        let c = self.component[id as usize];
        (c != NONE).then_some(c)
    }

    pub fn frontier_components(&self) -> usize {
        self.touches_frontier.iter().filter(|&&t| t).count()
    }

    /// Components that reach the frontier and get more than halfway from
    /// level `r` to the frontier in distance from H: the computable stand-in
    /// for deep components. A bounded neighborhood of H fails the second
    /// condition once the frontier is far enough out.
    pub fn deep_estimate(&self) -> usize {
        let threshold = (self.r + self.frontier) / 2;
        (0..self.size.len())
            .filter(|&c| self.touches_frontier[c] && self.max_dist[c] > threshold)
            .count()
    }
}

fn find(parent: &mut [u32], mut v: u32) -> u32 {
    while parent[v as usize] != v {
        let p = parent[v as usize];
        parent[v as usize] = parent[p as usize];
        v = p;
    }
    v
}

pub fn complement_components(aball: &AnnotatedBall, r: u32) -> Result<ComplementLabeling> {
    aball.check_level("complement components", r)?;
    let n = aball.base.element_count();
    let frontier = aball.valid_core();
    let inside = |id: u32| aball.in_core(id) && aball.dist(id) >= r;
    let mut parent: Vec<u32> = (0..n as u32).collect();
    for v in 0..n as u32 {
        if !inside(v) {
            continue;
        }
        for &w in aball.base.neighbor_row(v) {
            if w != NONE && w < v && inside(w) {
                let (a, b) = (find(&mut parent, v), find(&mut parent, w));
                if a != b {
                    // The smaller root wins, so roots are minimal ids.
                    let (lo, hi) = (a.min(b), a.max(b));
                    parent[hi as usize] = lo;
                }
            }
        }
    }
    let mut component = vec![NONE; n];
    let mut touches_frontier = Vec::new();
    let mut size = Vec::new();
    let mut max_dist = Vec::new();
    for v in 0..n as u32 {
        if !inside(v) {
            continue;
        }
        let root = find(&mut parent, v);
        let c = if root == v {
            touches_frontier.push(false);
            size.push(0);
            max_dist.push(0);
            (size.len() - 1) as u32
        } else {
            component[root as usize]
        };
        component[v as usize] = c;
        let ci = c as usize;
        size[ci] += 1;
        max_dist[ci] = max_dist[ci].max(aball.dist(v));
        if aball.base.word_length(v) == frontier {
            touches_frontier[ci] = true;
        }
    }
    Ok(ComplementLabeling {
        r,
        frontier,
        component,
        touches_frontier,
        size,
        max_dist,
    })
}
