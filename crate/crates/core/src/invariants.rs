//! Subgroup distortion, growth, filtered-ends estimates, H-perpendicular
//! ray prefixes and quasigeodesic checks.

use std::collections::HashMap;

use num_traits::Float;
use serde::Serialize;

use crate::atlas::{complement_components, AnnotatedBall, BallIndex, NONE};
use crate::error::{Error, Result};
use crate::group::{multiply_word, Element, GroupOracle, Word};
use crate::subgroup::{SubgroupSpec, TLengthBfs};

/// Largest number of subgroup elements a T-length search may visit.
pub const DEFAULT_T_BUDGET: usize = 5_000_000;

/// A distortion value with its witness element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistortionValue {
    pub r: u32,
    pub value: u64,
    /// Rendered witness, absent when the value comes from an empty set.
    pub witness: Option<String>,
    /// `|witness|_S`, or `None` when it lies outside the atlas.
    pub witness_length: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn visit_budget_error(what: &str, budget: usize) -> Error {
    Error::budget(format!(
        "{what}: T-length search visited more than {budget} subgroup elements"
    ))
}

/// `Dist(r) = max{|h|_T : h ∈ H, |h|_S ≤ r}`.
///
/// Members of the ball come from the annotation (`dist_to_H = 0`), so
/// `r ≤ valid_core` is required; their T-lengths come from a breadth-first
/// search of H over its own generators.
pub fn upper_distortion(
    oracle: &dyn GroupOracle,
    aball: &AnnotatedBall,
    spec: &SubgroupSpec,
    r: u32,
    t_budget: usize,
) -> Result<DistortionValue> {
    aball.check_level(&format!("upper distortion at r={r}"), r)?;
    let ball = &aball.base;
    let targets: HashMap<&Element, u32> = (0..ball.sphere(r).end)
        .filter(|&id| aball.dist(id) == 0)
        .map(|id| (ball.element(id), id))
        .collect();
    if targets.len() == 1 {
        return Ok(DistortionValue {
            r,
            value: 0,
            witness: Some(oracle.render(&oracle.identity())),
            witness_length: Some(0),
            note: Some("H meets the ball only in the identity".into()),
        });
    }
    let mut bfs = TLengthBfs::new(oracle, spec);
    let mut found = 0usize;
    let mut best: Option<(u64, u32)> = None;
    loop {
        let mut layer_best = None;
        for h in bfs.layer() {
            if let Some(&id) = targets.get(h) {
                found += 1;
                layer_best = Some(layer_best.map_or(id, |b: u32| b.min(id)));
            }
        }
        if let Some(id) = layer_best {
            best = Some((bfs.length(), id));
        }
        if found == targets.len() {
            break;
        }
        if !bfs.advance() {
            return Err(Error::config(
                "membership accepts ball elements that the generating words never reach",
            ));
        }
        if bfs.visited() > t_budget {
            return Err(visit_budget_error("upper distortion", t_budget));
        }
    }
    let (value, id) = best.expect("identity is always found");
    Ok(DistortionValue {
        r,
        value,
        witness: Some(oracle.render(ball.element(id))),
        witness_length: Some(ball.word_length(id)),
        note: None,
    })
}

/// `dist(r) = min{|h|_T : h ∈ H, |h|_S ≥ r}`, 0 when the set is empty.
///
/// H is enumerated by increasing T-length; `|h|_S` is exact inside the
/// ball and exceeds the radius outside it, so the first qualifying layer
/// gives the true minimum.
pub fn lower_distortion(
    oracle: &dyn GroupOracle,
    ball: &BallIndex,
    spec: &SubgroupSpec,
    r: u32,
    t_budget: usize,
) -> Result<DistortionValue> {
    if r > ball.radius() {
        return Err(Error::needs_radius(
            format!("lower distortion at r={r}"),
            r,
            ball.radius(),
        ));
    }
    let mut bfs = TLengthBfs::new(oracle, spec);
    loop {
        let mut inside: Option<u32> = None;
        let mut outside: Option<&Element> = None;
        for h in bfs.layer() {
            match ball.lookup(h) {
                Some(id) if ball.word_length(id) >= r => inside = Some(inside.map_or(id, |b| b.min(id))),
                Some(_) => {}
                None => {
                    outside.get_or_insert(h);
                }
            }
        }
        if let Some(id) = inside {
            return Ok(DistortionValue {
                r,
                value: bfs.length(),
                witness: Some(oracle.render(ball.element(id))),
                witness_length: Some(ball.word_length(id)),
                note: None,
            });
        }
        if let Some(h) = outside {
            return Ok(DistortionValue {
                r,
                value: bfs.length(),
                witness: Some(oracle.render(h)),
                witness_length: None,
                note: None,
            });
        }
        if !bfs.advance() {
            return Ok(DistortionValue {
                r,
                value: 0,
                witness: None,
                witness_length: None,
                note: Some("H is finite and has no element this long; the minimum of the empty set is 0".into()),
            });
        }
        if bfs.visited() > t_budget {
            return Err(visit_budget_error("lower distortion", t_budget));
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DistortionRow {
    pub r: u32,
    pub upper: DistortionValue,
    pub lower: DistortionValue,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DistortionTable {
    pub rows: Vec<DistortionRow>,
}

impl DistortionTable {
    pub fn radii(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.r).collect()
    }

    pub fn upper_values(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.upper.value).collect()
    }

    pub fn lower_values(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.lower.value).collect()
    }

    pub fn upper_at(&self, r: u32) -> Option<u64> {
        self.rows.iter().find(|row| row.r == r).map(|row| row.upper.value)
    }
}

pub fn distortion_table(
    oracle: &dyn GroupOracle,
    aball: &AnnotatedBall,
    spec: &SubgroupSpec,
    radii: &[u32],
    t_budget: usize,
) -> Result<DistortionTable> {
    let rows = radii
        .iter()
        .map(|&r| {
            Ok(DistortionRow {
                r,
                upper: upper_distortion(oracle, aball, spec, r, t_budget)?,
                lower: lower_distortion(oracle, &aball.base, spec, r, t_budget)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DistortionTable { rows })
}

/// `|B(e, r)|`.
pub fn growth(ball: &BallIndex, r: u32) -> Result<u64> {
    ball.growth(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationRow {
    pub r: u32,
    pub lower: u64,
    pub bound: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationReport {
    pub holds: bool,
    pub rows: Vec<DominationRow>,
}

impl DominationReport {
    fn from_rows(rows: Vec<DominationRow>) -> Self {
        Self {
            holds: rows.iter().all(|r| r.holds),
            rows,
        }
    }
}

/// `dist(r) ≤ Growth(2r)` at every row of the table.
pub fn growth_dominates_lower_distortion_check(table: &DistortionTable, ball: &BallIndex) -> Result<DominationReport> {
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let bound = ball.growth(2 * row.r)?;
            Ok(DominationRow {
                r: row.r,
                lower: row.lower.value,
                bound,
                holds: row.lower.value <= bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DominationReport::from_rows(rows))
}

/// `dist(r) ≤ Dist(2r)` for every row of `lower`, reading `Dist` from
/// `upper`.
pub fn lower_below_upper_check(lower: &DistortionTable, upper: &DistortionTable) -> Result<DominationReport> {
    let rows = lower
        .rows
        .iter()
        .map(|row| {
            let bound = upper
                .upper_at(2 * row.r)
                .ok_or_else(|| Error::invalid(format!("the table has no upper distortion at r={}", 2 * row.r)))?;
            Ok(DominationRow {
                r: row.r,
                lower: row.lower.value,
                bound,
                holds: row.lower.value <= bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DominationReport::from_rows(rows))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndsRow {
    pub r: u32,
    /// Deep-component estimate at the largest usable atlas.
    pub estimate: usize,
    pub frontier_radius: u32,
    /// The two largest usable atlases agree.
    pub stabilized: bool,
    /// `(valid_core, estimate)` for every atlas whose core reaches r.
    pub history: Vec<(u32, usize)>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EndsProfile {
    pub rows: Vec<EndsRow>,
}

/// Deep-component estimates of `{dist_to_H ≥ r}` for every `r`, across
/// atlases of increasing radius.
pub fn filtered_ends_profile(atlases: &[&AnnotatedBall], radii: &[u32]) -> Result<EndsProfile> {
    let mut sorted: Vec<&AnnotatedBall> = atlases.to_vec();
    sorted.sort_by_key(|a| a.valid_core());
    let largest = sorted.last().ok_or_else(|| Error::invalid("no atlases given"))?;
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        if r == 0 {
            return Err(Error::invalid("ends level must be at least 1"));
        }
        largest.check_level(&format!("filtered ends at r={r}"), r)?;
        let mut history = Vec::new();
        for a in &sorted {
            if r < a.valid_core() {
                history.push((a.valid_core(), complement_components(a, r)?.deep_estimate()));
            }
        }
        let Some(&(frontier_radius, estimate)) = history.last() else {
            return Err(Error::needs_radius(
                format!("filtered ends at r={r}"),
                if largest.is_exact() { r + 1 } else { 2 * (r + 1) },
                largest.radius(),
            ));
        };
        let stabilized = history.len() >= 2 && history[history.len() - 2].1 == estimate;
        rows.push(EndsRow {
            r,
            estimate,
            frontier_radius,
            stabilized,
            history,
        });
    }
    Ok(EndsProfile { rows })
}

/// A geodesic from e of length `L` along which the distance to H grows by
/// one at each step. The endpoint is the smallest id with `|z|_S = L` and
/// `dist_to_H(z) = L`; every geodesic to it has the property.
pub fn perpendicular_ray_prefix(aball: &AnnotatedBall, len: u32) -> Result<Vec<u32>> {
    aball.check_level(&format!("perpendicular ray of length {len}"), len)?;
    let z = aball.base.sphere(len).find(|&id| aball.dist(id) == len).ok_or_else(|| {
        Error::needs_radius(
            format!("perpendicular ray of length {len}: no element of the sphere is that far from H, which suggests H has finite index"),
            len,
            aball.radius(),
        )
    })?;
    Ok(aball.base.geodesic_path(z))
}

/// Walks `word` from the element `start` through the atlas.
pub fn path_from_word(ball: &BallIndex, start: u32, word: &Word) -> Result<Vec<u32>> {
    let mut path = Vec::with_capacity(word.len() + 1);
    path.push(start);
    let mut at = start;
    for &s in word {
        at = ball
            .neighbor(at, s)
            .ok_or_else(|| Error::needs_radius("path leaves the atlas", ball.radius() + 1, ball.radius()))?;
        path.push(at);
    }
    Ok(path)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum QuasiGeodesicVerdict {
    True,
    /// The subpath from index `i` to index `j` is too long.
    False {
        i: usize,
        j: usize,
        length: u64,
        distance: u64,
    },
    /// Some subpath's endpoint distance exceeds the atlas and the bound
    /// could not be decided.
    Unknown {
        i: usize,
        j: usize,
    },
}

/// Whether every subpath q of `path` satisfies `ℓ(q) ≤ L·d(q₋, q₊) + C`.
/// Endpoint distances are `|p_i⁻¹ p_j|_S`, looked up in the atlas.
pub fn quasigeodesic_check<F: Float>(
    oracle: &dyn GroupOracle,
    ball: &BallIndex,
    path: &[u32],
    l: F,
    c: F,
) -> Result<QuasiGeodesicVerdict> {
    for w in path.windows(2) {
        if !ball.neighbor_row(w[0]).contains(&w[1]) || w[1] == NONE {
            return Err(Error::invalid(format!(
                "path vertices {} and {} are not adjacent",
                w[0], w[1]
            )));
        }
    }
    let alphabet = oracle.alphabet();
    let words: Vec<Word> = path.iter().map(|&v| ball.geodesic_word(v)).collect();
    let e = oracle.identity();
    let as_f = |v: u64| F::from(v).expect("u64 converts to a float");
    let mut unknown = None;
    for i in 0..path.len() {
        let inv = multiply_word(oracle, &e, &alphabet.invert_word(&words[i]));
        for j in i + 1..path.len() {
            let length = (j - i) as u64;
            let z = multiply_word(oracle, &inv, &words[j]);
            match ball.lookup(&z) {
                Some(id) => {
                    let d = ball.word_length(id) as u64;
                    if as_f(length) > l * as_f(d) + c {
                        return Ok(QuasiGeodesicVerdict::False {
                            i,
                            j,
                            length,
                            distance: d,
                        });
                    }
                }
                None => {
                    if as_f(length) > l * as_f(ball.radius() as u64 + 1) + c && unknown.is_none() {
                        unknown = Some((i, j));
                    }
                }
            }
        }
    }
    Ok(match unknown {
        Some((i, j)) => QuasiGeodesicVerdict::Unknown { i, j },
        None => QuasiGeodesicVerdict::True,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{annotated_ball, enumerate_ball};
    use crate::group::free::FreeGroup;
    use crate::group::heisenberg::HeisenbergGroup;
    use crate::group::racg::RacgGroup;
    use crate::group::zd::ZdGroup;
    use num_bigint::BigInt;
    use num_traits::Signed;

    fn z2_axis(radius: u32) -> (ZdGroup<i64>, SubgroupSpec, AnnotatedBall) {
        let z = ZdGroup::<i64>::new(2).unwrap();
        let spec = SubgroupSpec::new(&z, vec![z.parse_word("a").unwrap()], Some("zd-coordinate")).unwrap();
        let ab = annotated_ball(&z, &spec, radius, 1_000_000).unwrap();
        (z, spec, ab)
    }

    fn heisenberg_center(radius: u32) -> (HeisenbergGroup<BigInt>, SubgroupSpec, AnnotatedBall) {
        let h = HeisenbergGroup::<BigInt>::default();
        let spec = SubgroupSpec::new(&h, vec![h.parse_word("c").unwrap()], Some("heisenberg-center")).unwrap();
        let ab = annotated_ball(&h, &spec, radius, 1_000_000).unwrap();
        (h, spec, ab)
    }

    #[test]
    fn axis_is_undistorted() {
        let (z, spec, ab) = z2_axis(8);
        assert_eq!(upper_distortion(&z, &ab, &spec, 5, DEFAULT_T_BUDGET).unwrap().value, 5);
        assert_eq!(
            lower_distortion(&z, &ab.base, &spec, 5, DEFAULT_T_BUDGET)
                .unwrap()
                .value,
            5
        );
    }

    #[test]
    fn heisenberg_center_distortion_by_brute_force() {
        let (h, spec, ab) = heisenberg_center(8);
        // |c^p|_S straight from the ball.
        let len_of_p = |p: i64| ab.base.lookup(&h.element(0, 0, p)).map(|id| ab.base.word_length(id));
        assert_eq!(upper_distortion(&h, &ab, &spec, 1, DEFAULT_T_BUDGET).unwrap().value, 0);
        let hc = HeisenbergGroup::<BigInt>::with_c();
        let cspec = SubgroupSpec::new(&hc, vec![hc.parse_word("c").unwrap()], None).unwrap();
        let cab = annotated_ball(&hc, &cspec, 4, 100_000).unwrap();
        assert_eq!(
            upper_distortion(&hc, &cab, &cspec, 1, DEFAULT_T_BUDGET).unwrap().value,
            1
        );
        let upper4 = upper_distortion(&h, &ab, &spec, 4, DEFAULT_T_BUDGET).unwrap();
        let brute = (0..100i64)
            .filter(|&p| len_of_p(p).is_some_and(|l| l <= 4))
            .max()
            .unwrap();
        assert_eq!(upper4.value, brute as u64);
        assert_eq!(upper4.value, 1);
        let lower4 = lower_distortion(&h, &ab.base, &spec, 4, DEFAULT_T_BUDGET).unwrap();
        let brute = (0..100i64).find(|&p| len_of_p(p).is_none_or(|l| l >= 4)).unwrap();
        assert_eq!(lower4.value, brute as u64);
        let upper8 = upper_distortion(&h, &ab, &spec, 8, DEFAULT_T_BUDGET).unwrap();
        assert_eq!(upper8.value, 4);
        assert_eq!(upper8.witness_length, Some(8));
    }

    #[test]
    fn finite_subgroup_lower_distortion_is_zero() {
        let p = RacgGroup::pentagon();
        let spec = SubgroupSpec::new(&p, vec![p.parse_word("s1").unwrap(), p.parse_word("s2").unwrap()], None).unwrap();
        let ball = enumerate_ball(&p, 4, 100_000).unwrap();
        let v = lower_distortion(&p, &ball, &spec, 3, DEFAULT_T_BUDGET).unwrap();
        assert_eq!(v.value, 0);
        assert!(v.note.is_some());
        assert_eq!(
            lower_distortion(&p, &ball, &spec, 2, DEFAULT_T_BUDGET).unwrap().value,
            2
        );
    }

    #[test]
    fn trivial_subgroup_upper_distortion() {
        let f = FreeGroup::new(2).unwrap();
        let spec = SubgroupSpec::trivial(&f).unwrap();
        let ab = annotated_ball(&f, &spec, 4, 100_000).unwrap();
        let v = upper_distortion(&f, &ab, &spec, 2, DEFAULT_T_BUDGET).unwrap();
        assert_eq!(v.value, 0);
        assert!(v.note.is_some());
    }

    #[test]
    fn growth_examples_and_domination() {
        let (z, spec, ab) = z2_axis(16);
        assert_eq!(growth(&ab.base, 2).unwrap(), 13);
        let f = FreeGroup::new(2).unwrap();
        assert_eq!(growth(&enumerate_ball(&f, 3, 1000).unwrap(), 3).unwrap(), 53);
        let radii: Vec<u32> = (1..=8).collect();
        let table = distortion_table(&z, &ab, &spec, &radii, DEFAULT_T_BUDGET).unwrap();
        assert!(growth_dominates_lower_distortion_check(&table, &ab.base).unwrap().holds);
        let (h, hspec, hab) = heisenberg_center(10);
        let t = distortion_table(&h, &hab, &hspec, &[1, 2, 3, 4, 5], DEFAULT_T_BUDGET).unwrap();
        assert!(growth_dominates_lower_distortion_check(&t, &hab.base).unwrap().holds);
        let doubled = distortion_table(&h, &hab, &hspec, &[2, 4, 6, 8, 10], DEFAULT_T_BUDGET).unwrap();
        // dist(1) = |c|_T = 1 but nothing but e has length ≤ 2.
        let rep = lower_below_upper_check(&t, &doubled).unwrap();
        assert!(!rep.rows[0].holds);
        assert!(rep.rows[1..].iter().all(|row| row.holds));
        assert!(lower_below_upper_check(&doubled, &t).is_err());
        for w in doubled.upper_values().windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn ends_examples() {
        let (_, _, a) = z2_axis(8);
        let (_, _, b) = z2_axis(10);
        let prof = filtered_ends_profile(&[&a, &b], &[2, 3]).unwrap();
        for row in &prof.rows {
            assert_eq!(row.estimate, 2);
            assert!(row.stabilized);
            assert_eq!(row.frontier_radius, 10);
        }
        let (_, _, h1) = heisenberg_center(8);
        let (_, _, h2) = heisenberg_center(10);
        let prof = filtered_ends_profile(&[&h1, &h2], &[2]).unwrap();
        assert_eq!(prof.rows[0].estimate, 1);
        assert!(prof.rows[0].stabilized);
        assert!(filtered_ends_profile(&[&a], &[9]).is_err());
    }

    #[test]
    fn finite_index_has_no_deep_components() {
        let z = ZdGroup::<i64>::new(2).unwrap();
        let spec = SubgroupSpec::new(
            &z,
            vec![z.parse_word("a a").unwrap(), z.parse_word("b b").unwrap()],
            None,
        )
        .unwrap();
        let a = annotated_ball(&z, &spec, 16, 100_000).unwrap();
        let b = annotated_ball(&z, &spec, 20, 100_000).unwrap();
        let prof = filtered_ends_profile(&[&a, &b], &[1, 2]).unwrap();
        for row in &prof.rows {
            assert_eq!(row.estimate, 0);
        }
    }

    #[test]
    fn perpendicular_rays() {
        let (z, _, ab) = z2_axis(6);
        let path = perpendicular_ray_prefix(&ab, 3).unwrap();
        let coords: Vec<Vec<i64>> = path.iter().map(|&v| z.decode(ab.base.element(v))).collect();
        assert_eq!(coords, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![0, 3]]);

        let (h, _, hab) = heisenberg_center(6);
        let path = perpendicular_ray_prefix(&hab, 3).unwrap();
        for (i, &v) in path.iter().enumerate() {
            let t = h.decode(hab.base.element(v));
            assert_eq!(t.k.abs() + t.l.abs(), BigInt::from(i));
            assert_eq!(hab.dist(v) as usize, i);
        }

        let f = FreeGroup::new(2).unwrap();
        let spec = SubgroupSpec::new(&f, vec![f.parse_word("a").unwrap()], None).unwrap();
        let fab = annotated_ball(&f, &spec, 8, 100_000).unwrap();
        let path = perpendicular_ray_prefix(&fab, 4).unwrap();
        assert_eq!(f.render(fab.base.element(path[4])), "b a a a");
        assert!(path.iter().enumerate().all(|(i, &v)| fab.dist(v) as usize == i));
    }

    #[test]
    fn quasigeodesic_examples() {
        let (z, _, ab) = z2_axis(12);
        let check = |w: &str, l: f64, c: f64| {
            let path = path_from_word(&ab.base, 0, &z.parse_word(w).unwrap()).unwrap();
            quasigeodesic_check(&z, &ab.base, &path, l, c).unwrap()
        };
        assert_eq!(check("a a a a a", 1.0, 0.0), QuasiGeodesicVerdict::True);
        assert_eq!(check("a b a b a b", 1.0, 0.0), QuasiGeodesicVerdict::True);
        assert!(matches!(
            check("a b A B a b A B", 1.0, 1.0),
            QuasiGeodesicVerdict::False { .. }
        ));
        assert!(matches!(
            check("a b A B", 1.0, 3.0),
            QuasiGeodesicVerdict::False {
                length: 4,
                distance: 0,
                ..
            }
        ));
        let short = path_from_word(&ab.base, 0, &z.parse_word("a a a").unwrap()).unwrap();
        assert_eq!(
            quasigeodesic_check(&z, &ab.base, &short, 1.0f32, 0.0f32).unwrap(),
            QuasiGeodesicVerdict::True
        );
    }
}
