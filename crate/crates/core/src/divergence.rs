//! Relative divergence samples δⁿ_ρ(r), σⁿ_ρ(r) and the axis divergence
//! of a cyclic subgroup, computed by breadth-first search in complements
//! of neighborhoods of H inside an annotated ball.

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::atlas::{complement_components, AnnotatedBall, BallIndex, ComplementLabeling, NONE};
use crate::error::{Error, Result};
use crate::group::{multiply_word, Generator, GroupOracle};

/// Number of base points evaluated per parallel batch before the pair
/// budget is checked.
const BATCH: usize = 64;

/// `(ρ, n, r)` for one divergence sample.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DivergenceParams {
    pub rho: Ratio<u32>,
    pub n: u32,
    pub r: u32,
}

impl DivergenceParams {
    pub fn new(rho: Ratio<u32>, n: u32, r: u32) -> Result<Self> {
        if *rho.numer() == 0 || rho > Ratio::from_integer(1) {
            return Err(Error::invalid(format!("ρ must lie in (0, 1], got {rho}")));
        }
        if n < 2 {
            return Err(Error::invalid(format!("n must be at least 2, got {n}")));
        }
        if r == 0 {
            return Err(Error::invalid("r must be positive"));
        }
        Ok(Self { rho, n, r })
    }

    /// The complement level `⌈ρr⌉`.
    pub fn level(&self) -> u32 {
        (self.rho * self.r).ceil().to_integer()
    }
}

/// Parses `P/Q` or an integer.
pub fn parse_rho(text: &str) -> Result<Ratio<u32>> {
    let bad = || Error::invalid(format!("cannot parse ρ = {text:?}; expected P/Q"));
    let rho = match text.split_once('/') {
        Some((p, q)) => {
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            let q: u32 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ratio::new(p, q)
        }
        None => Ratio::from_integer(text.trim().parse().map_err(|_| bad())?),
    };
    Ok(rho)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// Any path leaving the reliable region is longer than the value, so
    /// the value is the true complement distance of its pair.
    InteriorCertified,
    /// Paths outside the reliable region might change the value.
    FrontierLimited,
}

impl fmt::Display for Certification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certification::InteriorCertified => "interior_certified",
            Certification::FrontierLimited => "frontier_limited",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    Upper,
    Lower,
    Axis,
}

impl fmt::Display for SampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SampleKind::Upper => "upper",
            SampleKind::Lower => "lower",
            SampleKind::Axis => "axis",
        })
    }
}

/// A nonnegative integer or ∞.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Extended {
    Finite(u64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<u64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Extended::Infinite
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => s.serialize_u64(*v),
            Extended::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Result of one complement BFS between two points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementDistance {
    pub value: Extended,
    pub flag: Certification,
    /// Element ids from `x` to `y` when finite.
    pub path: Vec<u32>,
}

/// One δ, σ or axis sample.
#[derive(Clone, Debug, Serialize)]
pub struct DivergenceSample {
    pub kind: SampleKind,
    pub r: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_rho")]
    pub rho: Option<Ratio<u32>>,
    /// Complement level actually used: `⌈ρr⌉`, or `r` for the axis.
    pub level: u32,
    pub value: Extended,
    /// Qualifying pairs evaluated.
    pub pair_count: u64,
    pub flag: Certification,
    /// The pair budget cut the enumeration short.
    pub pruned: bool,
    /// Pairs whose connectivity at level r could not be decided inside
    /// the reliable region.
    pub undetermined_pairs: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(String, String)>,
    #[serde(skip)]
    pub witness_path: Vec<u32>,
}

fn ser_rho<S: Serializer>(rho: &Option<Ratio<u32>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match rho {
        Some(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

/// Reusable BFS buffers; only touched entries are reset.
struct Scratch {
    dist: Vec<u32>,
    parent: Vec<u32>,
    touched: Vec<u32>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![NONE; n],
            parent: vec![NONE; n],
            touched: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v as usize] = NONE;
            self.parent[v as usize] = NONE;
        }
        self.touched.clear();
    }

    fn visit(&mut self, v: u32, d: u32, p: u32) {
        self.dist[v as usize] = d;
        self.parent[v as usize] = p;
        self.touched.push(v);
    }

    fn path_to(&self, mut v: u32) -> Vec<u32> {
        let mut path = vec![v];
        while self.parent[v as usize] != NONE {
            v = self.parent[v as usize];
            path.push(v);
        }
        path.reverse();
        path
    }

    /// Layered BFS from `sources` inside `allowed`. `on_layer` sees each
    /// completed layer and returns true to stop. Returns true when stopped
    /// early.
    fn bfs(
        &mut self,
        ball: &BallIndex,
        sources: &[u32],
        allowed: impl Fn(u32) -> bool,
        max_depth: u32,
        mut on_layer: impl FnMut(&Self, u32, &[u32]) -> bool,
    ) -> bool {
        self.reset();
        let mut layer: Vec<u32> = Vec::new();
        for &s in sources {
            if self.dist[s as usize] == NONE {
                self.visit(s, 0, NONE);
                layer.push(s);
            }
        }
        let mut depth = 0;
        loop {
            if on_layer(self, depth, &layer) {
                return true;
            }
            if depth == max_depth || layer.is_empty() {
                return false;
            }
            let mut next = Vec::new();
            for &v in &layer {
                for &w in ball.neighbor_row(v) {
                    if w != NONE && self.dist[w as usize] == NONE && allowed(w) {
                        self.visit(w, depth + 1, v);
                        next.push(w);
                    }
                }
            }
            layer = next;
            depth += 1;
        }
    }
}

/// Length bound beyond which a path between `x` and `y` could leave a
/// region of radius `frontier`.
fn escape_bound(frontier: u32, lx: u32, ly: u32) -> u64 {
    2 * (frontier as u64 + 1) - lx as u64 - ly as u64
}

/// `d_s(x, y)` in the complement `{dist_to_H ≥ s}` of the reliable region.
pub fn complement_distance(aball: &AnnotatedBall, s: u32, x: u32, y: u32) -> Result<ComplementDistance> {
    aball.check_level("complement distance", s)?;
    for v in [x, y] {
        if v as usize >= aball.base.element_count() || !aball.in_core(v) {
            return Err(Error::invalid(format!("element {v} is outside the reliable region")));
        }
        if aball.dist(v) < s {
            return Err(Error::invalid(format!(
                "element {v} has dist_to_H {} < level {s}",
                aball.dist(v)
            )));
        }
    }
    let ball = &aball.base;
    let core = aball.valid_core();
    let mut scratch = Scratch::new(ball.element_count());
    let mut touched_frontier = false;
    let found = scratch.bfs(
        ball,
        &[x],
        |v| aball.in_core(v) && aball.dist(v) >= s,
        u32::MAX,
        |_, _, layer| {
            touched_frontier |= layer.iter().any(|&v| ball.word_length(v) == core);
            layer.contains(&y)
        },
    );
    if found {
        let d = scratch.dist[y as usize] as u64;
        let certified = d <= escape_bound(core, ball.word_length(x), ball.word_length(y));
        Ok(ComplementDistance {
            value: Extended::Finite(d),
            flag: if certified {
                Certification::InteriorCertified
            } else {
                Certification::FrontierLimited
            },
            path: scratch.path_to(y),
        })
    } else {
        Ok(ComplementDistance {
            value: Extended::Infinite,
            flag: if touched_frontier {
                Certification::FrontierLimited
            } else {
                Certification::InteriorCertified
            },
            path: Vec::new(),
        })
    }
}

/// Level-r structure shared by all base points of one sample.
struct LevelContext {
    labels: ComplementLabeling,
    /// `∂N_r(H)` in the reliable region, ascending ids.
    boundary: Vec<u32>,
    /// Boundary points per component.
    boundary_per_component: Vec<u64>,
    /// The coset-reduced base points `S(e, r) ∩ ∂N_r(H)`.
    base_points: Vec<u32>,
}

impl LevelContext {
    fn new(aball: &AnnotatedBall, r: u32) -> Result<Self> {
        let labels = complement_components(aball, r)?;
        let boundary = crate::atlas::boundary_set(aball, r)?;
        let mut boundary_per_component = vec![0u64; labels.component_count()];
        for &y in &boundary {
            boundary_per_component[labels.label(y).expect("boundary lies in the complement") as usize] += 1;
        }
        let base_points = aball.base.sphere(r).filter(|&x| aball.dist(x) == r).collect();
        Ok(Self {
            labels,
            boundary,
            boundary_per_component,
            base_points,
        })
    }

    /// Whether `x` and `y` are joined in `{dist_to_H ≥ r}` of the whole
    /// Cayley graph: `Some(true)` if joined inside the region, `Some(false)`
    /// if one of their components is sealed off from the frontier, `None`
    /// otherwise.
    fn connected(&self, x: u32, y: u32) -> Option<bool> {
        let (cx, cy) = (self.labels.component[x as usize], self.labels.component[y as usize]);
        if cx == cy {
            Some(true)
        } else if self.labels.touches_frontier[cx as usize] && self.labels.touches_frontier[cy as usize] {
            None
        } else {
            Some(false)
        }
    }
}

/// Per-base-point outcome, reduced deterministically afterwards.
struct PointResult {
    x: u32,
    /// (value, y, certified, path) of the best pair for this x.
    best: Option<(u64, u32, bool, Vec<u32>)>,
    pairs: u64,
    undetermined: u64,
    /// Qualifying y in ascending order with values, for pair-budget cuts.
    per_pair: Vec<(u32, u64, bool)>,
}

fn render_pair(oracle: &dyn GroupOracle, ball: &BallIndex, x: u32, y: u32) -> (String, String) {
    (oracle.render(ball.element(x)), oracle.render(ball.element(y)))
}

fn check_formula_consistency(aball: &AnnotatedBall, oracle: &dyn GroupOracle) -> Result<()> {
    if aball.base.generator_count() != oracle.alphabet().len() {
        return Err(Error::config("atlas generator count does not match the group"));
    }
    Ok(())
}

/// δⁿ_ρ(r): the largest complement distance at level `⌈ρr⌉` over pairs
/// `x, y ∈ ∂N_r(H)` with `d_S(x, y) ≤ nr` joined in the complement at
/// level r. The first point ranges over `S(e, r) ∩ ∂N_r(H)`, which covers
/// every pair up to left translation by H. The supremum of no pairs is 0.
pub fn upper_divergence_sample(
    oracle: &dyn GroupOracle,
    aball: &AnnotatedBall,
    params: DivergenceParams,
    pair_budget: u64,
) -> Result<DivergenceSample> {
    check_formula_consistency(aball, oracle)?;
    let DivergenceParams { n, r, .. } = params;
    let reach = r + n * r;
    if aball.valid_core() < reach {
        return Err(Error::needs_radius(
            format!("upper divergence at r={r}, n={n}"),
            if aball.is_exact() { reach } else { 2 * reach },
            aball.radius(),
        ));
    }
    let s = params.level();
    let ctx = LevelContext::new(aball, r)?;
    let ball = &aball.base;
    let core = aball.valid_core();
    let count = ball.element_count();

    let eval = |scratch: &mut Scratch, x: u32| -> PointResult {
        // Ambient BFS to depth nr is exact: it stays within length r + nr.
        let mut candidates = Vec::new();
        let mut undetermined = 0;
        scratch.bfs(
            ball,
            &[x],
            |_| true,
            n * r,
            |_, _, layer| {
                for &y in layer {
                    if aball.dist(y) == r {
                        match ctx.connected(x, y) {
                            Some(true) => candidates.push(y),
                            Some(false) => {}
                            None => undetermined += 1,
                        }
                    }
                }
                false
            },
        );
        candidates.sort_unstable();
        let mut remaining = candidates.len();
        let mut per_pair = Vec::with_capacity(candidates.len());
        let mut best: Option<(u64, u32, bool, Vec<u32>)> = None;
        scratch.bfs(
            ball,
            &[x],
            |v| aball.in_core(v) && aball.dist(v) >= s,
            u32::MAX,
            |sc, depth, layer| {
                for &y in layer {
                    if candidates.binary_search(&y).is_ok() {
                        remaining -= 1;
                        let d = depth as u64;
                        let certified = d <= escape_bound(core, r, ball.word_length(y));
                        per_pair.push((y, d, certified));
                        let better = match &best {
                            None => true,
                            Some((bd, by, _, _)) => d > *bd || (d == *bd && y < *by),
                        };
                        if better {
                            best = Some((d, y, certified, sc.path_to(y)));
                        }
                    }
                }
                remaining == 0
            },
        );
        debug_assert_eq!(remaining, 0, "level-r connection implies level-s connection");
        per_pair.sort_unstable();
        PointResult {
            x,
            best,
            pairs: candidates.len() as u64,
            undetermined,
            per_pair,
        }
    };

    let results = evaluate_in_batches(&ctx.base_points, count, pair_budget, eval);
    let reduced = reduce(results, pair_budget, |a, b| a > b);
    Ok(finish(
        oracle,
        ball,
        SampleKind::Upper,
        params,
        s,
        reduced,
        Extended::Finite(0),
    ))
}

/// σⁿ_ρ(r): the smallest complement distance at level `⌈ρr⌉` over pairs
/// `x, y ∈ ∂N_r(H)` with `d_S(x, y) ≥ nr` joined in the complement at
/// level r, with y restricted to the reliable region. ∞ when no pair
/// qualifies. Always an upper bound for the value in the whole graph.
pub fn lower_divergence_sample(
    oracle: &dyn GroupOracle,
    aball: &AnnotatedBall,
    params: DivergenceParams,
    pair_budget: u64,
) -> Result<DivergenceSample> {
    check_formula_consistency(aball, oracle)?;
    let DivergenceParams { n, r, .. } = params;
    aball.check_level(&format!("lower divergence at r={r}"), r)?;
    let s = params.level();
    let ctx = LevelContext::new(aball, r)?;
    let ball = &aball.base;
    let core = aball.valid_core();
    let radius = aball.radius();
    let nr = n * r;
    let alphabet = oracle.alphabet();

    let eval = |scratch: &mut Scratch, x: u32| -> PointResult {
        let x_label = ctx.labels.component[x as usize];
        // Points with d_S(x, y) < nr. A path leaving the ball is longer
        // than 2(R+1) − |x| − |y|; only when that is below nr can the ball
        // BFS miss a short connection, and then the product x⁻¹y decides.
        let mut near = vec![];
        scratch.bfs(
            ball,
            &[x],
            |_| true,
            nr.saturating_sub(1),
            |_, _, layer| {
                near.extend(
                    layer
                        .iter()
                        .copied()
                        .filter(|&y| aball.dist(y) == r && aball.in_core(y)),
                );
                false
            },
        );
        let mut ambient_unknown = 0u64;
        let x_inv = alphabet.invert_word(&ball.geodesic_word(x));
        for &y in &ctx.boundary {
            if scratch.dist[y as usize] == NONE && escape_bound(radius, r, ball.word_length(y)) < nr as u64 {
                let z = multiply_word(
                    oracle,
                    &multiply_word(oracle, &oracle.identity(), &x_inv),
                    &ball.geodesic_word(y),
                );
                match ball.lookup(&z) {
                    Some(id) if ball.word_length(id) < nr => near.push(y),
                    Some(_) => {}
                    None if radius + 1 >= nr => {}
                    None => ambient_unknown += 1,
                }
            }
        }
        near.sort_unstable();
        near.dedup();
        let mut far_per_component = ctx.boundary_per_component.clone();
        for &y in &near {
            far_per_component[ctx.labels.component[y as usize] as usize] -= 1;
        }
        let pairs = far_per_component[x_label as usize];
        let mut undetermined = ambient_unknown;
        if ctx.labels.touches_frontier[x_label as usize] {
            for (c, &k) in far_per_component.iter().enumerate() {
                if c as u32 != x_label && ctx.labels.touches_frontier[c] {
                    undetermined += k;
                }
            }
        }
        let mut best = None;
        if pairs > 0 {
            scratch.bfs(
                ball,
                &[x],
                |v| aball.in_core(v) && aball.dist(v) >= s,
                u32::MAX,
                |sc, depth, layer| {
                    let hit = layer
                        .iter()
                        .copied()
                        .filter(|&y| {
                            aball.dist(y) == r
                                && ctx.labels.component[y as usize] == x_label
                                && near.binary_search(&y).is_err()
                        })
                        .min();
                    if let Some(y) = hit {
                        let d = depth as u64;
                        let certified = d <= escape_bound(core, r, ball.word_length(y));
                        best = Some((d, y, certified, sc.path_to(y)));
                        true
                    } else {
                        false
                    }
                },
            );
        }
        PointResult {
            x,
            best,
            pairs,
            undetermined,
            per_pair: Vec::new(),
        }
    };

    // One BFS per base point counts all of its pairs, so the budget only
    // stops whole base points.
    let results = evaluate_in_batches(&ctx.base_points, ball.element_count(), pair_budget, eval);
    let pruned = results.len() < ctx.base_points.len();
    let mut reduced = reduce(results, u64::MAX, |a, b| a < b);
    reduced.pruned = pruned;
    Ok(finish(
        oracle,
        ball,
        SampleKind::Lower,
        params,
        s,
        reduced,
        Extended::Infinite,
    ))
}

/// Evaluates base points in id order, in parallel batches, stopping once
/// `pair_budget` qualifying pairs have been seen.
fn evaluate_in_batches(
    points: &[u32],
    n: usize,
    pair_budget: u64,
    eval: impl Fn(&mut Scratch, u32) -> PointResult + Sync,
) -> Vec<PointResult> {
    let mut out = Vec::with_capacity(points.len());
    let mut pairs = 0u64;
    for batch in points.chunks(BATCH) {
        let part: Vec<PointResult> = batch
            .par_iter()
            .map_init(|| Scratch::new(n), |scratch, &x| eval(scratch, x))
            .collect();
        pairs += part.iter().map(|p| p.pairs).sum::<u64>();
        out.extend(part);
        if pairs >= pair_budget {
            break;
        }
    }
    out
}

struct Reduced {
    best: Option<(u64, u32, u32, bool, Vec<u32>)>,
    pairs: u64,
    undetermined: u64,
    pruned: bool,
}

/// Combines per-point results. `better(a, b)` compares values; ties go to
/// the smallest `(x, y)`. With a finite budget, pairs beyond the first
/// `pair_budget` in `(x, y)` order are dropped.
fn reduce(results: Vec<PointResult>, pair_budget: u64, better: impl Fn(u64, u64) -> bool) -> Reduced {
    let mut best: Option<(u64, u32, u32, bool, Vec<u32>)> = None;
    let mut pairs = 0u64;
    let mut undetermined = 0u64;
    let mut pruned = false;
    let consider = |cand: (u64, u32, u32, bool, Vec<u32>), best: &mut Option<(u64, u32, u32, bool, Vec<u32>)>| {
        let replace = match best {
            None => true,
            Some(b) => better(cand.0, b.0) || (cand.0 == b.0 && (cand.1, cand.2) < (b.1, b.2)),
        };
        if replace {
            *best = Some(cand);
        }
    };
    for p in results {
        undetermined += p.undetermined;
        if pairs + p.pairs <= pair_budget {
            pairs += p.pairs;
            if let Some((d, y, c, path)) = p.best {
                consider((d, p.x, y, c, path), &mut best);
            }
        } else {
            // Keep only the first pairs of this point in y order.
            pruned = true;
            let keep = (pair_budget - pairs) as usize;
            pairs = pair_budget;
            let kept = &p.per_pair[..keep.min(p.per_pair.len())];
            if let Some(&(y, d, c)) = kept.iter().fold(None, |acc: Option<&(u32, u64, bool)>, e| match acc {
                None => Some(e),
                Some(a) if better(e.1, a.1) => Some(e),
                Some(a) => Some(a),
            }) {
                let path = match &p.best {
                    Some((bd, by, _, path)) if *bd == d && *by == y => path.clone(),
                    _ => Vec::new(),
                };
                consider((d, p.x, y, c, path), &mut best);
            }
            break;
        }
    }
    Reduced {
        best,
        pairs,
        undetermined,
        pruned,
    }
}

fn finish(
    oracle: &dyn GroupOracle,
    ball: &BallIndex,
    kind: SampleKind,
    params: DivergenceParams,
    level: u32,
    red: Reduced,
    empty: Extended,
) -> DivergenceSample {
    let (value, flag, witness, witness_path) = match red.best {
        Some((d, x, y, certified, path)) => (
            Extended::Finite(d),
            if certified && red.undetermined == 0 && !red.pruned {
                Certification::InteriorCertified
            } else {
                Certification::FrontierLimited
            },
            Some(render_pair(oracle, ball, x, y)),
            path,
        ),
        None => (
            empty,
            if red.undetermined == 0 && !red.pruned {
                Certification::InteriorCertified
            } else {
                Certification::FrontierLimited
            },
            None,
            Vec::new(),
        ),
    };
    DivergenceSample {
        kind,
        r: params.r,
        n: Some(params.n),
        rho: Some(params.rho),
        level,
        value,
        pair_count: red.pairs,
        flag,
        pruned: red.pruned,
        undetermined_pairs: red.undetermined,
        witness,
        witness_path,
    }
}

/// Divergence of the axis of `⟨h⟩` for a generator `h`: the shortest path
/// avoiding the open ball `{|v| < r}` from a point `h^-i` to a point `h^j`
/// (`i, j ≥ 1`) outside that ball.
pub fn axis_divergence(oracle: &dyn GroupOracle, ball: &BallIndex, h: Generator, r: u32) -> Result<DivergenceSample> {
    if h.index() >= ball.generator_count() {
        return Err(Error::invalid("axis generator is not a generator of the atlas"));
    }
    if r == 0 {
        return Err(Error::invalid("r must be positive"));
    }
    let radius = ball.radius();
    if radius < 3 * r {
        return Err(Error::needs_radius(format!("axis divergence at r={r}"), 3 * r, radius));
    }
    let h_inv = oracle.alphabet().inverse(h);
    let walk = |s: Generator| {
        let mut out = Vec::new();
        let mut at = 0u32;
        while let Some(next) = ball.neighbor(at, s) {
            if next == 0 || out.contains(&next) {
                break;
            }
            out.push(next);
            at = next;
        }
        out
    };
    let forward = walk(h);
    let backward = walk(h_inv);
    let sources: Vec<u32> = backward.iter().copied().filter(|&v| ball.word_length(v) >= r).collect();
    let targets: Vec<u32> = forward.iter().copied().filter(|&v| ball.word_length(v) >= r).collect();
    if sources.is_empty() || targets.is_empty() {
        return Err(Error::needs_radius(
            format!("axis divergence at r={r}: the axis leaves the atlas before clearing the ball"),
            radius + 1,
            radius,
        ));
    }
    let mut target_mask = vec![false; ball.element_count()];
    for &t in &targets {
        target_mask[t as usize] = true;
    }
    let mut scratch = Scratch::new(ball.element_count());
    let mut hit = None;
    let mut touched_frontier = false;
    scratch.bfs(
        ball,
        &sources,
        |v| ball.word_length(v) >= r,
        u32::MAX,
        |sc, depth, layer| {
            touched_frontier |= layer.iter().any(|&v| ball.word_length(v) == radius);
            if let Some(&t) = layer.iter().filter(|&&v| target_mask[v as usize]).min() {
                hit = Some((depth as u64, t, sc.path_to(t)));
                true
            } else {
                false
            }
        },
    );
    let (value, flag, witness, witness_path) = match hit {
        Some((d, t, path)) => {
            let start = path[0];
            let certified = d <= escape_bound(radius, ball.word_length(start), ball.word_length(t));
            (
                Extended::Finite(d),
                if certified {
                    Certification::InteriorCertified
                } else {
                    Certification::FrontierLimited
                },
                Some(render_pair(oracle, ball, start, t)),
                path,
            )
        }
        None => (
            Extended::Infinite,
            if touched_frontier {
                Certification::FrontierLimited
            } else {
                Certification::InteriorCertified
            },
            None,
            Vec::new(),
        ),
    };
    Ok(DivergenceSample {
        kind: SampleKind::Axis,
        r,
        n: None,
        rho: None,
        level: r,
        value,
        pair_count: (sources.len() * targets.len()) as u64,
        flag,
        pruned: false,
        undetermined_pairs: 0,
        witness,
        witness_path,
    })
}

/// Samples for each radius in `radii`; errors are kept per row.
pub fn divergence_profile(
    oracle: &dyn GroupOracle,
    aball: &AnnotatedBall,
    kind: SampleKind,
    rho: Ratio<u32>,
    n: u32,
    radii: &[u32],
    pair_budget: u64,
    axis_generator: Option<Generator>,
) -> Vec<Result<DivergenceSample>> {
    radii
        .iter()
        .map(|&r| match kind {
            SampleKind::Upper => {
                DivergenceParams::new(rho, n, r).and_then(|p| upper_divergence_sample(oracle, aball, p, pair_budget))
            }
            SampleKind::Lower => {
                DivergenceParams::new(rho, n, r).and_then(|p| lower_divergence_sample(oracle, aball, p, pair_budget))
            }
            SampleKind::Axis => match axis_generator {
                Some(h) => axis_divergence(oracle, &aball.base, h, r),
                None => Err(Error::config("axis divergence needs H generated by a single generator")),
            },
        })
        .collect()
}

/// Checks that a witness path is a walk in the Cayley graph from the
/// witness pair's first point to its second, staying at `dist_to_H ≥ level`.
pub fn replay_witness(aball: &AnnotatedBall, sample: &DivergenceSample) -> bool {
    let path = &sample.witness_path;
    let Some(len) = sample.value.finite() else {
        return path.is_empty();
    };
    if path.len() as u64 != len + 1 {
        return false;
    }
    let ball = &aball.base;
    let level_ok = |v: u32| match sample.kind {
        SampleKind::Axis => ball.word_length(v) >= sample.level,
        _ => aball.dist(v) >= sample.level,
    };
    path.iter().all(|&v| level_ok(v)) && path.windows(2).all(|w| ball.neighbor_row(w[0]).contains(&w[1]))
}
