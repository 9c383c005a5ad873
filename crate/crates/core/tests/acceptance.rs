//! Acceptance criteria, one PASS/FAIL line each. Oracles here are written
//! independently of the library: grid searches for ℤ², unipotent matrices
//! for the Heisenberg group, reduced-word enumeration for F₂.

use std::collections::{HashMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reldiv::asymptotics::{classify, ClassifyConfig, GrowthClass, SampledFunction};
use reldiv::atlas::{annotated_ball, AnnotatedBall};
use reldiv::config::{GroupConfig, Setup, SubgroupConfig};
use reldiv::divergence::{
    axis_divergence, lower_divergence_sample, upper_divergence_sample, DivergenceParams, DivergenceSample, Extended,
};
use reldiv::group::{Generator, GroupOracle};
use reldiv::invariants::{
    distortion_table, filtered_ends_profile, growth_dominates_lower_distortion_check, lower_below_upper_check,
    DistortionTable, DEFAULT_T_BUDGET,
};
use reldiv::recipes::{run_recipe, RecipeOptions};
use reldiv::rewrite::shipped;
use reldiv::rewrite::symbolic::{gromov_witness, DEFAULT_WITNESS_CAP};

fn verdict(criterion: &str, ok: bool, detail: impl AsRef<str>) {
    println!(
        "{} criterion {criterion}: {}",
        if ok { "PASS" } else { "FAIL" },
        detail.as_ref()
    );
    assert!(ok, "criterion {criterion}: {}", detail.as_ref());
}

fn atlas(setup: &Setup, radius: u32) -> AnnotatedBall {
    annotated_ball(setup.oracle.as_ref(), &setup.spec, radius, 10_000_000).unwrap()
}

fn values(samples: &[DivergenceSample]) -> Vec<Extended> {
    samples.iter().map(|s| s.value).collect()
}

fn profile(samples: &[DivergenceSample]) -> SampledFunction<f64> {
    let pairs: Vec<(u32, Option<u64>)> = samples.iter().map(|s| (s.r, s.value.finite())).collect();
    SampledFunction::from_integers("profile", &pairs).unwrap()
}

// Heisenberg matrices [[1, x, z], [0, 1, y], [0, 0, 1]] stored as (x, y, z).
type Unipotent = (i64, i64, i64);

fn mat_mul(m: Unipotent, n: Unipotent) -> Unipotent {
    (m.0 + n.0, m.1 + n.1, m.2 + n.2 + m.0 * n.1)
}

fn heisenberg_letter(symbol: &str) -> Unipotent {
    match symbol {
        "a" => (1, 0, 0),
        "a^-1" | "A" => (-1, 0, 0),
        "b" => (0, 1, 0),
        "b^-1" | "B" => (0, -1, 0),
        // c = b a b^-1 a^-1, which is the matrix with z = -1.
        "c" => (0, 0, -1),
        "c^-1" | "C" => (0, 0, 1),
        other => panic!("unexpected letter {other}"),
    }
}

/// Coordinates (k, l, p) of the normal form a^k b^l c^p.
fn normal_coordinates(m: Unipotent) -> (i64, i64, i64) {
    (m.0, m.1, m.0 * m.1 - m.2)
}

fn evaluate(oracle: &dyn GroupOracle, word: &[Generator]) -> Unipotent {
    word.iter().fold((0, 0, 0), |m, &g| {
        mat_mul(m, heisenberg_letter(oracle.alphabet().symbol(g)))
    })
}

#[test]
fn criterion_1_heisenberg_distance_formula() {
    let start = Instant::now();
    let setup = Setup::new(GroupConfig::heisenberg(), SubgroupConfig::new(&["c"], None)).unwrap();
    let aball = atlas(&setup, 8);
    let mut checked = 0;
    let mut mismatches = 0;
    for id in 0..aball.base.element_count() as u32 {
        if !aball.in_core(id) {
            continue;
        }
        let m = evaluate(setup.oracle.as_ref(), &aball.base.geodesic_word(id));
        let (k, l, _) = normal_coordinates(m);
        checked += 1;
        if aball.dist(id) as i64 != k.abs() + l.abs() {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "1",
        mismatches == 0 && checked > 0 && elapsed < Duration::from_secs(120),
        format!(
            "{checked} elements in the valid core (radius {}), {mismatches} mismatches, {:.2?}",
            aball.valid_core(),
            elapsed
        ),
    );
}

fn heisenberg_distortion() -> (DistortionTable, DistortionTable, AnnotatedBall) {
    let setup = Setup::new(
        GroupConfig::heisenberg(),
        SubgroupConfig::new(&["c"], Some("heisenberg-center")),
    )
    .unwrap();
    let aball = atlas(&setup, 20);
    let radii: Vec<u32> = (2..=20).collect();
    let full = distortion_table(setup.oracle.as_ref(), &aball, &setup.spec, &radii, DEFAULT_T_BUDGET).unwrap();
    let sampled = DistortionTable {
        rows: full.rows[..9].to_vec(),
    };
    (sampled, full, aball)
}

#[test]
fn criterion_2_heisenberg_distortion_bounds() {
    let (sampled, full, aball) = heisenberg_distortion();
    let cfg = ClassifyConfig::default();
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, vals) in [("Dist", sampled.upper_values()), ("dist", sampled.lower_values())] {
        let pairs: Vec<(u32, Option<u64>)> = sampled.radii().into_iter().zip(vals.into_iter().map(Some)).collect();
        let report = classify(&SampledFunction::<f64>::from_integers(name, &pairs).unwrap(), &cfg);
        let slope = report.slope.unwrap_or(f64::NAN);
        ok &= (1.5..=2.5).contains(&slope);
        detail.push(format!("{name} degree estimate {slope:.3}"));
    }
    let below = lower_below_upper_check(&sampled, &full).unwrap();
    let growth = growth_dominates_lower_distortion_check(&sampled, &aball.base).unwrap();
    ok &= below.holds && growth.holds;
    detail.push(format!("dist(r) <= Dist(2r): {}", below.holds));
    detail.push(format!("dist(r) <= Growth(2r): {}", growth.holds));
    verdict("2 (degree estimates and inequalities)", ok, detail.join(", "));
}

#[test]
fn criterion_2_heisenberg_distortion_classified_polynomial() {
    let (sampled, _, _) = heisenberg_distortion();
    let cfg = ClassifyConfig::default();
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, vals) in [("Dist", sampled.upper_values()), ("dist", sampled.lower_values())] {
        let pairs: Vec<(u32, Option<u64>)> = sampled.radii().into_iter().zip(vals.into_iter().map(Some)).collect();
        let report = classify(&SampledFunction::<f64>::from_integers(name, &pairs).unwrap(), &cfg);
        ok &= matches!(report.class, GrowthClass::Polynomial { .. });
        detail.push(format!("{name}: {} (leaning {:?})", report.class, report.leaning));
    }
    verdict("2 (classification)", ok, detail.join(", "));
}

#[test]
fn criterion_3_heisenberg_upper_divergence() {
    let setup = Setup::new(
        GroupConfig::heisenberg(),
        SubgroupConfig::new(&["c"], Some("heisenberg-center")),
    )
    .unwrap();
    let aball = atlas(&setup, 16);
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [2, 3] {
        let samples: Vec<DivergenceSample> = (2..=4)
            .map(|r| {
                let p = DivergenceParams::new(Ratio::new(1, 2), n, r).unwrap();
                upper_divergence_sample(setup.oracle.as_ref(), &aball, p, u64::MAX).unwrap()
            })
            .collect();
        let bounded = samples
            .iter()
            .all(|s| s.value.finite().is_some_and(|v| v <= 50 * (n * s.r) as u64));
        let report = classify(&profile(&samples), &ClassifyConfig::default());
        let class = report.effective_class();
        let linear_ok = matches!(
            (&report.class, class),
            (GrowthClass::Linear | GrowthClass::Bounded, _)
                | (GrowthClass::Indeterminate, GrowthClass::Linear | GrowthClass::Bounded)
        );
        ok &= bounded && linear_ok;
        detail.push(format!(
            "n={n}: {:?}, class {} leaning {:?}",
            values(&samples),
            report.class,
            report.leaning
        ));
    }
    verdict("3", ok, detail.join("; "));
}

/// Brute-force ℤ² divergence relative to the x-axis on the box
/// |x|, |y| ≤ side, by breadth-first search on grid points.
struct Grid {
    side: i64,
}

impl Grid {
    fn inside(&self, p: (i64, i64)) -> bool {
        p.0.abs() <= self.side && p.1.abs() <= self.side
    }

    fn neighbors(&self, p: (i64, i64)) -> impl Iterator<Item = (i64, i64)> + '_ {
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .map(move |(dx, dy)| (p.0 + dx, p.1 + dy))
            .filter(|&q| self.inside(q))
    }

    /// Distances from `from` within `{|y| ≥ level}`.
    fn bfs(&self, from: (i64, i64), level: i64) -> HashMap<(i64, i64), u64> {
        let mut dist = HashMap::from([(from, 0u64)]);
        let mut queue = VecDeque::from([from]);
        while let Some(p) = queue.pop_front() {
            let d = dist[&p];
            for q in self.neighbors(p) {
                if q.1.abs() >= level && !dist.contains_key(&q) {
                    dist.insert(q, d + 1);
                    queue.push_back(q);
                }
            }
        }
        dist
    }

    fn boundary(&self, r: i64) -> Vec<(i64, i64)> {
        (-self.side..=self.side).flat_map(|x| [(x, r), (x, -r)]).collect()
    }

    /// (δ, σ) at (ρ, n, r).
    fn divergence(&self, rho: Ratio<u32>, n: i64, r: i64) -> (u64, Option<u64>) {
        let level = (Ratio::from_integer(r as u32) * rho).ceil().to_integer() as i64;
        let boundary = self.boundary(r);
        let mut sup = 0;
        let mut inf: Option<u64> = None;
        for &x in &boundary {
            let same_component = self.bfs(x, r);
            let complement = self.bfs(x, level);
            for &y in &boundary {
                if x == y || !same_component.contains_key(&y) {
                    continue;
                }
                let d = ((x.0 - y.0).abs() + (x.1 - y.1).abs()) as u64;
                let c = complement[&y];
                if d <= (n * r) as u64 {
                    sup = sup.max(c);
                }
                if d >= (n * r) as u64 {
                    inf = Some(inf.map_or(c, |i| i.min(c)));
                }
            }
        }
        (sup, inf)
    }
}

#[test]
fn criterion_4_z2_axis_matches_grid_oracle() {
    let setup = Setup::new(GroupConfig::zd(2), SubgroupConfig::new(&["a"], Some("zd-coordinate"))).unwrap();
    let aball = atlas(&setup, 16);
    let grid = Grid { side: 14 };
    let n = 2;
    let mut ok = true;
    let mut detail = Vec::new();
    for rho in [Ratio::new(1, 2), Ratio::new(1, 1)] {
        let mut got = Vec::new();
        let mut want = Vec::new();
        for r in 2..=5u32 {
            let p = DivergenceParams::new(rho, n, r).unwrap();
            let upper = upper_divergence_sample(setup.oracle.as_ref(), &aball, p, u64::MAX).unwrap();
            let lower = lower_divergence_sample(setup.oracle.as_ref(), &aball, p, u64::MAX).unwrap();
            let (delta, sigma) = grid.divergence(rho, n as i64, r as i64);
            ok &= upper.value == Extended::Finite(delta) && lower.value.finite() == sigma;
            ok &= delta == (n * r) as u64 && sigma == Some((n * r) as u64);
            got.push((upper.value.to_string(), lower.value.to_string()));
            want.push((delta, sigma.map_or("inf".into(), |s| s.to_string())));
        }
        detail.push(format!("rho={rho}: library (delta, sigma) {got:?}, grid {want:?}"));
    }
    let small = atlas(&setup, 12);
    let ends = filtered_ends_profile(&[&small, &aball], &[1, 2, 3]).unwrap();
    let ends_ok = ends.rows.iter().all(|r| r.estimate == 2 && r.stabilized);
    ok &= ends_ok;
    detail.push(format!(
        "ends {:?}",
        ends.rows
            .iter()
            .map(|r| (r.r, r.estimate, r.stabilized))
            .collect::<Vec<_>>()
    ));
    verdict("4", ok, detail.join("; "));
}

/// Number of reduced words of length ≤ r in F₂, by enumeration.
fn reduced_words(r: u32) -> u64 {
    let inverse = |g: u8| g ^ 1;
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    let mut seen: HashSet<Vec<u8>> = HashSet::from([Vec::new()]);
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..4u8 {
                if w.last().is_some_and(|&l| l == inverse(g)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(g);
                if seen.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    seen.len() as u64
}

#[test]
fn criterion_5_free_group_tree_behavior() {
    let setup = Setup::new(
        GroupConfig::free(2),
        SubgroupConfig::new(&["a"], Some("free-cyclic-generator")),
    )
    .unwrap();
    let aball = atlas(&setup, 12);
    let mut ok = true;
    let counts: Vec<(u64, u64)> = (0..=12)
        .map(|r| (aball.base.growth(r).unwrap(), reduced_words(r)))
        .collect();
    let counts_ok = counts
        .iter()
        .enumerate()
        .all(|(r, &(got, brute))| got == brute && got == 2 * 3u64.pow(r as u32) - 1);
    ok &= counts_ok;
    let sigma: Vec<DivergenceSample> = (2..=4)
        .map(|r| {
            let p = DivergenceParams::new(Ratio::new(1, 2), 2, r).unwrap();
            lower_divergence_sample(setup.oracle.as_ref(), &aball, p, u64::MAX).unwrap()
        })
        .collect();
    let h = setup.oracle.alphabet().lookup("a").unwrap();
    let axis: Vec<DivergenceSample> = (1..=4)
        .map(|r| axis_divergence(setup.oracle.as_ref(), &aball.base, h, r).unwrap())
        .collect();
    ok &= sigma.iter().all(|s| s.value.is_infinite()) && axis.iter().all(|s| s.value.is_infinite());
    verdict(
        "5",
        ok,
        format!(
            "ball sizes match enumeration and 2*3^r-1 for r<=12: {counts_ok}; sigma {:?}; axis {:?}",
            values(&sigma),
            values(&axis)
        ),
    );
}

fn pentagon() -> (Setup, AnnotatedBall, Duration) {
    let start = Instant::now();
    let setup = Setup::new(
        GroupConfig::pentagon(),
        SubgroupConfig::new(&["s1 s3"], Some("racg-rotation")),
    )
    .unwrap();
    let aball = atlas(&setup, 14);
    (setup, aball, start.elapsed())
}

fn pentagon_sigma(setup: &Setup, aball: &AnnotatedBall) -> Vec<DivergenceSample> {
    (2..=4)
        .map(|r| {
            let p = DivergenceParams::new(Ratio::new(1, 2), 2, r).unwrap();
            lower_divergence_sample(setup.oracle.as_ref(), aball, p, u64::MAX).unwrap()
        })
        .collect()
}

#[test]
fn criterion_6_pentagon_growth_and_sigma_bound() {
    let (setup, aball, built) = pentagon();
    let start = Instant::now();
    let growth: Vec<(u32, Option<u64>)> = (2..=8).map(|r| (r, Some(aball.base.growth(r).unwrap()))).collect();
    let gc = classify(
        &SampledFunction::<f64>::from_integers("growth", &growth).unwrap(),
        &ClassifyConfig::default(),
    );
    let sigma = pentagon_sigma(&setup, &aball);
    let at_least_nr = sigma
        .iter()
        .all(|s| s.value.finite().is_none_or(|v| v >= 2 * s.r as u64));
    let elapsed = built + start.elapsed();
    let elements = aball.base.element_count();
    verdict(
        "6 (growth, sigma >= nr, budget)",
        gc.class == GrowthClass::Exponential
            && at_least_nr
            && elapsed < Duration::from_secs(600)
            && elements <= 10_000_000,
        format!(
            "growth {}, sigma {:?}, {elements} elements, {:.2?}",
            gc.class,
            values(&sigma),
            elapsed
        ),
    );
}

#[test]
fn criterion_6_pentagon_sigma_superlinear() {
    let (setup, aball, _) = pentagon();
    let sigma = pentagon_sigma(&setup, &aball);
    let report = classify(&profile(&sigma), &ClassifyConfig::default());
    verdict(
        "6 (sigma classified superlinear)",
        report.effective_class().superlinear(),
        format!(
            "sigma {:?}: {} leaning {:?}",
            values(&sigma),
            report.class,
            report.leaning
        ),
    );
}

#[test]
fn criterion_7_gromov_witness_rewrites() {
    let mut ok = true;
    let mut detail = Vec::new();
    for n in 0..=4u32 {
        let w = gromov_witness(n, DEFAULT_WITNESS_CAP).unwrap();
        let mut expected = BigInt::from(1);
        for _ in 0..(1u32 << n) {
            expected *= 2;
        }
        ok &= w.verified && w.target_exponent == expected && w.target == format!("a^{expected}");
        detail.push(format!("n={n}: {}", w.target));
    }
    verdict("7 (verified, exponent 2^(2^n))", ok, detail.join(", "));
}

#[test]
fn criterion_7_gromov_witness_length() {
    let mut ok = true;
    let mut detail = Vec::new();
    for n in 0..=4u32 {
        let w = gromov_witness(n, DEFAULT_WITNESS_CAP).unwrap();
        let letters = w.witness.split_whitespace().count() as u64;
        ok &= letters == w.witness_length && w.witness_length == 4 * n as u64 + 2;
        detail.push(format!("n={n}: {letters} letters, 4n+2 = {}", 4 * n + 2));
    }
    verdict("7 (witness length 4n+2)", ok, detail.join(", "));
}

#[test]
fn criterion_8_rewriting_confluence_and_normal_forms() {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, system) in [("Z^2", shipped::z2()), ("Heisenberg", shipped::heisenberg())] {
        let report = system.critical_pair_check(usize::MAX);
        ok &= report.unresolved_pairs.is_empty() && report.pairs_checked == report.pairs_total;
        detail.push(format!(
            "{name}: {} pairs, {} unresolved",
            report.pairs_total,
            report.unresolved_pairs.len()
        ));
    }
    let system = shipped::heisenberg();
    let alphabet = system.alphabet();
    let letter = |s: &str| alphabet.lookup(s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut agree = 0;
    for _ in 0..1000 {
        let word: Vec<Generator> = (0..12).map(|_| Generator(rng.gen_range(0..6u8))).collect();
        let m = word
            .iter()
            .fold((0, 0, 0), |m, &g| mat_mul(m, heisenberg_letter(alphabet.symbol(g))));
        let (k, l, p) = normal_coordinates(m);
        let mut expected = Vec::new();
        for (count, pos, neg) in [(k, "a", "A"), (l, "b", "B"), (p, "c", "C")] {
            let g = letter(if count >= 0 { pos } else { neg });
            expected.extend(std::iter::repeat_n(g, count.unsigned_abs() as usize));
        }
        if system.normalize(&word).unwrap() == expected {
            agree += 1;
        }
    }
    ok &= agree == 1000;
    detail.push(format!("{agree}/1000 random words match the matrix normal form"));
    verdict("8", ok, detail.join("; "));
}

#[test]
fn criterion_9_recipes_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for recipe in ["z2-axis", "heisenberg-distortion"] {
        let mut outputs = Vec::new();
        for threads in [1, 8] {
            let opts = RecipeOptions {
                out_dir: dir.path().join(format!("t{threads}")),
                threads,
                ..RecipeOptions::default()
            };
            let report = run_recipe(recipe, &opts).unwrap();
            let mut csvs: Vec<(String, Vec<u8>)> = report
                .files
                .iter()
                .filter(|p| p.extension().is_some_and(|e| e == "csv"))
                .map(|p| {
                    (
                        p.file_name().unwrap().to_string_lossy().into_owned(),
                        std::fs::read(p).unwrap(),
                    )
                })
                .collect();
            csvs.sort();
            outputs.push(csvs);
        }
        let same = outputs[0] == outputs[1] && !outputs[0].is_empty();
        ok &= same;
        detail.push(format!("{recipe}: {} CSV files, identical {same}", outputs[0].len()));
    }
    verdict("9", ok, detail.join("; "));
}
