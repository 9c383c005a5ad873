//! Named reproduction runs: each builds its atlases, computes a profile,
//! checks it and writes CSV, JSON and a plain-text summary.

use std::path::{Path, PathBuf};

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::asymptotics::{classify, ClassifyConfig, GrowthClass, GrowthClassReport, SampledFunction};
use crate::atlas::cache::{load_ball, save_ball, AtlasHeader};
use crate::atlas::{annotated_ball, complement_components, with_threads, AnnotatedBall};
use crate::config::{GroupConfig, Setup, SubgroupConfig};
use crate::divergence::{
    axis_divergence, lower_divergence_sample, upper_divergence_sample, DivergenceParams, DivergenceSample, Extended,
};
use crate::error::{Error, Result};
use crate::invariants::{
    distortion_table, filtered_ends_profile, growth_dominates_lower_distortion_check, lower_below_upper_check,
    DistortionTable, EndsProfile, DEFAULT_T_BUDGET,
};
use crate::report::{comment_header, divergence_csv, table_csv, TOOL_VERSION};
use crate::rewrite::symbolic::{gromov_witness, DEFAULT_WITNESS_CAP};

pub const RECIPES: [&str; 7] = [
    "heisenberg-divergence",
    "heisenberg-distortion",
    "z2-axis",
    "f2-axis",
    "pentagon-lower-div",
    "gromov-witness",
    "ends-survey",
];

#[derive(Clone, Debug)]
pub struct RecipeOptions {
    pub out_dir: PathBuf,
    /// Worker threads, 0 for the rayon default.
    pub threads: usize,
    pub budget_elems: usize,
    pub budget_pairs: u64,
    pub cache_dir: Option<PathBuf>,
    /// Restricts `gromov-witness` to a single n.
    pub n: Option<u32>,
}

impl Default for RecipeOptions {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("out"),
            threads: 0,
            budget_elems: 10_000_000,
            budget_pairs: u64::MAX,
            cache_dir: None,
            n: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Digests {
    pub label: String,
    pub group: String,
    pub subgroup: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecipeReport {
    pub recipe: String,
    pub claim: String,
    pub tool_version: String,
    pub digests: Vec<Digests>,
    pub checks: Vec<Check>,
    /// Set when a budget or radius limit stopped the run early.
    pub partial: Option<String>,
    pub files: Vec<PathBuf>,
    #[serde(skip)]
    data: serde_json::Map<String, Value>,
    #[serde(skip)]
    tables: Vec<(String, String)>,
}

impl RecipeReport {
    fn new(recipe: &str, claim: &str) -> Self {
        Self {
            recipe: recipe.into(),
            claim: claim.into(),
            tool_version: TOOL_VERSION.into(),
            digests: Vec::new(),
            checks: Vec::new(),
            partial: None,
            files: Vec::new(),
            data: serde_json::Map::new(),
            tables: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// 0 when every check passed, 2 on a failed check, 3 when partial.
    pub fn exit_code(&self) -> i32 {
        if self.partial.is_some() {
            3
        } else if self.all_passed() {
            0
        } else {
            2
        }
    }

    fn setup(&mut self, label: &str, setup: &Setup) {
        self.digests.push(Digests {
            label: label.into(),
            group: setup.group_digest(),
            subgroup: setup.subgroup_digest(),
        });
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn data(&mut self, key: &str, value: impl Serialize) {
        self.data
            .insert(key.into(), serde_json::to_value(value).expect("report data serializes"));
    }

    fn table(&mut self, file: &str, body: String) {
        self.tables.push((file.into(), body));
    }

    fn provenance(&self) -> String {
        let mut entries = vec![
            ("recipe".to_string(), self.recipe.clone()),
            ("claim".to_string(), self.claim.clone()),
            ("tool".to_string(), self.tool_version.clone()),
        ];
        for d in &self.digests {
            entries.push((format!("group digest ({})", d.label), d.group.clone()));
            entries.push((format!("subgroup digest ({})", d.label), d.subgroup.clone()));
        }
        if let Some(p) = &self.partial {
            entries.push(("PARTIAL".into(), p.clone()));
        }
        let borrowed: Vec<(&str, &str)> = entries.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        comment_header(&borrowed)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("recipe: {}\n", self.recipe));
        s.push_str(&format!("claim: {}\n", self.claim));
        s.push_str(&format!("tool: {}\n", self.tool_version));
        for d in &self.digests {
            s.push_str(&format!(
                "digests ({}): group {} subgroup {}\n",
                d.label, d.group, d.subgroup
            ));
        }
        if let Some(p) = &self.partial {
            s.push_str(&format!("PARTIAL: {p}\n"));
        }
        s.push_str("checks:\n");
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("  {mark} {}: {}\n", c.name, c.detail));
        }
        let verdict = match self.exit_code() {
            0 => "all checks passed",
            2 => "some checks failed",
            _ => "incomplete",
        };
        s.push_str(&format!("result: {verdict}\n"));
        s
    }

    fn write(&mut self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let header = self.provenance();
        let mut files = Vec::new();
        for (name, body) in &self.tables {
            let path = dir.join(name);
            std::fs::write(&path, format!("{header}{body}"))?;
            files.push(path);
        }
        let json_path = dir.join(format!("{}.json", self.recipe));
        let summary_path = dir.join("summary.txt");
        files.push(json_path.clone());
        files.push(summary_path.clone());
        self.files = files;
        let mut doc = serde_json::to_value(&*self).expect("report serializes");
        doc["data"] = Value::Object(self.data.clone());
        doc.as_object_mut().expect("object").remove("files");
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        std::fs::write(&json_path, text)?;
        std::fs::write(&summary_path, self.summary())?;
        Ok(())
    }
}

/// File name of a cached atlas: digest prefixes and radius.
pub fn atlas_file_name(setup: &Setup, radius: u32) -> String {
    format!(
        "{}-{}-R{radius}.atlas",
        &setup.group_digest()[..16],
        &setup.subgroup_digest()[..16]
    )
}

/// Loads the atlas from `cache_dir` when a matching file exists, otherwise
/// enumerates it and stores it there. A file whose header names other
/// configs is rebuilt.
pub fn cached_atlas(setup: &Setup, radius: u32, budget: usize, cache_dir: Option<&Path>) -> Result<AnnotatedBall> {
    let header = AtlasHeader::from_hex(&setup.group_digest(), &setup.subgroup_digest())?;
    let path = cache_dir.map(|d| d.join(atlas_file_name(setup, radius)));
    if let Some(path) = &path {
        if path.exists() {
            let (aball, found) = load_ball(path)?;
            if found == header && aball.radius() == radius {
                return Ok(aball);
            }
        }
    }
    let aball = annotated_ball(setup.oracle.as_ref(), &setup.spec, radius, budget)?;
    if let Some(path) = &path {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        save_ball(&aball, &header, path)?;
    }
    Ok(aball)
}

type RecipeBody = fn(&mut RecipeReport, &RecipeOptions) -> Result<()>;

/// Runs a recipe and writes its outputs under `opts.out_dir/<name>`.
///
/// Budget and radius failures produce a partial report (exit code 3);
/// configuration and I/O errors are returned.
pub fn run_recipe(name: &str, opts: &RecipeOptions) -> Result<RecipeReport> {
    let (claim, body): (&str, RecipeBody) = match name {
        "heisenberg-distortion" => (
            "the center of the Heisenberg group has quadratic upper and lower distortion, and dist(r) is bounded by Dist(2r) and by the growth function at 2r",
            heisenberg_distortion,
        ),
        "heisenberg-divergence" => (
            "the upper relative divergence of the Heisenberg group with respect to its center is at most linear, with delta(r) <= 50nr",
            heisenberg_divergence,
        ),
        "z2-axis" => (
            "for Z^2 relative to a coordinate axis, upper and lower relative divergence are both nr and the axis has two deep complementary components",
            z2_axis,
        ),
        "f2-axis" => (
            "in the free group F2, the complement of a cyclic subgroup's neighborhood disconnects every far pair, so lower relative divergence and axis divergence are infinite",
            f2_axis,
        ),
        "pentagon-lower-div" => (
            "the right-angled Coxeter group of the pentagon grows exponentially and its lower relative divergence with respect to <s1 s3> is superlinear",
            pentagon_lower_div,
        ),
        "gromov-witness" => (
            "in <a,b,c | b a b^-1 = a^2, c b c^-1 = b^2> the word c^n b c^-n a c^n b^-1 c^-n equals a^(2^(2^n))",
            gromov,
        ),
        "ends-survey" => (
            "deep complementary components: two for an axis of Z^2, one for the center of the Heisenberg group, none for a finite-index subgroup, unboundedly many for a cyclic subgroup of F2",
            ends_survey,
        ),
        other => {
            return Err(Error::config(format!(
                "unknown recipe {other:?}; known recipes: {}",
                RECIPES.join(", ")
            )))
        }
    };
    let mut report = RecipeReport::new(name, claim);
    let outcome = with_threads(opts.threads, || body(&mut report, opts))?;
    match outcome {
        Ok(()) => {}
        Err(e @ (Error::Budget(_) | Error::NeedsLargerRadius { .. })) => report.partial = Some(e.to_string()),
        Err(e) => return Err(e),
    }
    report.write(&opts.out_dir.join(name))?;
    Ok(report)
}

const GROMOV_PRESENTATION: &str = "<a, b, c | b a b^-1 = a^2, c b c^-1 = b^2>";

fn atlas(setup: &Setup, radius: u32, opts: &RecipeOptions) -> Result<AnnotatedBall> {
    cached_atlas(setup, radius, opts.budget_elems, opts.cache_dir.as_deref())
}

fn report_class(report: &GrowthClassReport<f64>) -> String {
    match (&report.class, &report.leaning) {
        (GrowthClass::Indeterminate, Some(l)) => format!("indeterminate, leaning {l}"),
        (c, _) => c.to_string(),
    }
}

fn fmt_slope(report: &GrowthClassReport<f64>) -> String {
    report.slope.map_or("none".into(), |s| format!("{s:.3}"))
}

fn profile(tag: &str, samples: &[DivergenceSample]) -> Result<SampledFunction<f64>> {
    let pairs: Vec<(u32, Option<u64>)> = samples.iter().map(|s| (s.r, s.value.finite())).collect();
    SampledFunction::from_integers(tag, &pairs)
}

fn values(samples: &[DivergenceSample]) -> String {
    samples
        .iter()
        .map(|s| s.value.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn heisenberg_center() -> Result<Setup> {
    Setup::new(
        GroupConfig::heisenberg(),
        SubgroupConfig::new(&["c"], Some("heisenberg-center")),
    )
}

fn z2_axis_setup() -> Result<Setup> {
    Setup::new(GroupConfig::zd(2), SubgroupConfig::new(&["a"], Some("zd-coordinate")))
}

fn f2_axis_setup() -> Result<Setup> {
    Setup::new(
        GroupConfig::free(2),
        SubgroupConfig::new(&["a"], Some("free-cyclic-generator")),
    )
}

fn heisenberg_distortion(rep: &mut RecipeReport, opts: &RecipeOptions) -> Result<()> {
    let setup = heisenberg_center()?;
    rep.setup("heisenberg, <c>", &setup);
    let aball = atlas(&setup, 20, opts)?;
    let all: Vec<u32> = (1..=20).collect();
    let table = distortion_table(setup.oracle.as_ref(), &aball, &setup.spec, &all, DEFAULT_T_BUDGET)?;
    let radii: Vec<u32> = (2..=10).collect();
    let mut rows = Vec::new();
    for &r in &radii {
        let row = &table.rows[r as usize - 1];
        rows.push(vec![
            r.to_string(),
            row.upper.value.to_string(),
            row.lower.value.to_string(),
            table.upper_at(2 * r).expect("table covers 2r").to_string(),
            aball.base.growth(2 * r)?.to_string(),
        ]);
    }
    rep.table(
        "distortion.csv",
        table_csv(&["r", "upper", "lower", "upper_2r", "growth_2r"], &rows),
    );
    let sample = |upper: bool| -> Result<SampledFunction<f64>> {
        let pairs: Vec<(u32, Option<u64>)> = radii
            .iter()
            .map(|&r| {
                let row = &table.rows[r as usize - 1];
                (r, Some(if upper { row.upper.value } else { row.lower.value }))
            })
            .collect();
        SampledFunction::from_integers(if upper { "Dist" } else { "dist" }, &pairs)
    };
    let cfg = ClassifyConfig::default();
    let mut classes = Vec::new();
    for upper in [true, false] {
        let f = sample(upper)?;
        let c = classify(&f, &cfg);
        let name = &f.tag;
        let in_range = c.slope.is_some_and(|s| (1.5..=2.5).contains(&s));
        rep.check(
            format!("{name} degree estimate in [1.5, 2.5]"),
            in_range,
            format!("log-log slope {}", fmt_slope(&c)),
        );
        rep.check(
            format!("{name} classified polynomial"),
            matches!(c.class, GrowthClass::Polynomial { .. }),
            report_class(&c),
        );
        classes.push(c);
    }
    let sampled = DistortionTable {
        rows: table.rows[1..10].to_vec(),
    };
    let below = lower_below_upper_check(&sampled, &table)?;
    rep.check(
        "dist(r) <= Dist(2r) for r = 2..10",
        below.holds,
        format!("{} rows", below.rows.len()),
    );
    let growth = growth_dominates_lower_distortion_check(&sampled, &aball.base)?;
    rep.check(
        "dist(r) <= Growth(2r) for r = 2..10",
        growth.holds,
        format!("{} rows", growth.rows.len()),
    );
    rep.data("classification", &classes);
    rep.data("distortion", &sampled.rows);
    Ok(())
}

fn heisenberg_divergence(rep: &mut RecipeReport, opts: &RecipeOptions) -> Result<()> {
    let setup = heisenberg_center()?;
    rep.setup("heisenberg, <c>", &setup);

    let bfs_setup = Setup::new(GroupConfig::heisenberg(), SubgroupConfig::new(&["c"], None))?;
    rep.setup("heisenberg, <c>, breadth-first distances", &bfs_setup);
    let bfs = atlas(&bfs_setup, 8, opts)?;
    let formula = setup.spec.clone();
    let mut mismatches = 0u64;
    let mut checked = 0u64;
    for id in 0..bfs.base.element_count() as u32 {
        if bfs.in_core(id) {
            checked += 1;
            if formula.exact_distance(bfs.base.element(id)) != Some(bfs.dist(id) as u64) {
                mismatches += 1;
            }
        }
    }
    rep.check(
        "breadth-first distance to <c> equals |k|+|l| on the valid core of the R=8 atlas",
        mismatches == 0 && checked > 0,
        format!("{checked} elements, {mismatches} mismatches"),
    );

    let aball = atlas(&setup, 16, opts)?;
    let rho = Ratio::new(1, 2);
    let radii = [2u32, 3, 4];
    let mut all = Vec::new();
    for n in [2u32, 3] {
        let mut samples = Vec::new();
        for &r in &radii {
            let p = DivergenceParams::new(rho, n, r)?;
            samples.push(upper_divergence_sample(
                setup.oracle.as_ref(),
                &aball,
                p,
                opts.budget_pairs,
            )?);
        }
        let bound_ok = samples
            .iter()
            .all(|s| s.value.finite().is_some_and(|v| v <= 50 * (n * s.r) as u64));
        rep.check(
            format!("delta(rho=1/2, n={n}) <= 50nr for r = 2..4"),
            bound_ok,
            format!("values {}", values(&samples)),
        );
        let c = classify(&profile(&format!("delta n={n}"), &samples)?, &ClassifyConfig::default());
        rep.check(
            format!("delta(rho=1/2, n={n}) not superlinear"),
            !c.effective_class().superlinear(),
            report_class(&c),
        );
        rep.table(&format!("delta_n{n}.csv"), divergence_csv(&samples));
        all.push(json!({ "n": n, "samples": samples, "classification": c }));
    }
    rep.data("upper_divergence", all);
    Ok(())
}

fn z2_axis(rep: &mut RecipeReport, opts: &RecipeOptions) -> Result<()> {
    let setup = z2_axis_setup()?;
    rep.setup("Z^2, <a>", &setup);
    let aball = atlas(&setup, 16, opts)?;
    let radii = [2u32, 3, 4, 5];
    let n = 2;
    let mut data = Vec::new();
    for (p, q) in [(1u32, 2u32), (1, 1)] {
        let rho = Ratio::new(p, q);
        for upper in [false, true] {
            let mut samples = Vec::new();
            for &r in &radii {
                let params = DivergenceParams::new(rho, n, r)?;
                samples.push(if upper {
                    upper_divergence_sample(setup.oracle.as_ref(), &aball, params, opts.budget_pairs)?
                } else {
                    lower_divergence_sample(setup.oracle.as_ref(), &aball, params, opts.budget_pairs)?
                });
            }
            let name = if upper { "delta" } else { "sigma" };
            let exact = samples.iter().all(|s| s.value == Extended::Finite((n * s.r) as u64));
            rep.check(
                format!("{name}(rho={p}/{q}, n=2) = nr for r = 2..5"),
                exact,
                format!("values {}", values(&samples)),
            );
            let c = classify(&profile(name, &samples)?, &ClassifyConfig::default());
            rep.check(
                format!("{name}(rho={p}/{q}, n=2) classified linear"),
                c.class == GrowthClass::Linear,
                report_class(&c),
            );
            rep.table(&format!("{name}_rho{p}_{q}.csv"), divergence_csv(&samples));
            data.push(
                json!({ "kind": name, "rho": format!("{p}/{q}"), "n": n, "samples": samples, "classification": c }),
            );
        }
    }
    rep.data("divergence", data);

    let h = setup.oracle.alphabet().lookup("a").expect("Z^2 has generator a");
    let axis: Vec<DivergenceSample> = (1..=5)
        .map(|r| axis_divergence(setup.oracle.as_ref(), &aball.base, h, r))
        .collect::<Result<_>>()?;
    rep.check(
        "axis divergence finite for r = 1..5",
        axis.iter().all(|s| !s.value.is_infinite()),
        format!("values {}", values(&axis)),
    );
    rep.table("axis.csv", divergence_csv(&axis));
    rep.data("axis", &axis);

    let small = atlas(&setup, 12, opts)?;
    let ends = filtered_ends_profile(&[&small, &aball], &[1, 2, 3])?;
    let ok = ends.rows.iter().all(|row| row.estimate == 2 && row.stabilized);
    rep.check(
        "filtered ends estimate stabilizes at 2",
        ok,
        ends.rows
            .iter()
            .map(|row| format!("r={}: {} (stabilized {})", row.r, row.estimate, row.stabilized))
            .collect::<Vec<_>>()
            .join("; "),
    );
    rep.table("ends.csv", ends_csv(&ends));
    rep.data("ends", &ends);
    Ok(())
}

fn ends_csv(ends: &EndsProfile) -> String {
    let rows: Vec<Vec<String>> = ends
        .rows
        .iter()
        .map(|row| {
            vec![
                row.r.to_string(),
                row.estimate.to_string(),
                row.frontier_radius.to_string(),
                row.stabilized.to_string(),
            ]
        })
        .collect();
    table_csv(&["r", "estimate", "frontier_radius", "stabilized"], &rows)
}

fn f2_axis(rep: &mut RecipeReport, opts: &RecipeOptions) -> Result<()> {
    let setup = f2_axis_setup()?;
    rep.setup("F2, <a>", &setup);
    let radius = 12;
    let aball = atlas(&setup, radius, opts)?;
    let mut counts = Vec::new();
    let mut mismatch = None;
    for r in 0..=radius {
        let got = aball.base.growth(r)?;
        let expected = 2 * 3u64.pow(r) - 1;
        if got != expected && mismatch.is_none() {
            mismatch = Some(r);
        }
        counts.push(vec![r.to_string(), got.to_string(), expected.to_string()]);
    }
    rep.check(
        "ball sizes equal 2*3^r - 1 for r = 0..12",
        mismatch.is_none(),
        mismatch.map_or("all radii agree".into(), |r| format!("first mismatch at r={r}")),
    );
    rep.table("growth.csv", table_csv(&["r", "count", "closed_form"], &counts));

    let n = 2;
    let mut sigma = Vec::new();
    for r in 2..=4 {
        let p = DivergenceParams::new(Ratio::new(1, 2), n, r)?;
        sigma.push(lower_divergence_sample(
            setup.oracle.as_ref(),
            &aball,
            p,
            opts.budget_pairs,
        )?);
    }
    rep.check(
        "sigma(rho=1/2, n=2) infinite for r = 2..4",
        sigma.iter().all(|s| s.value.is_infinite()),
        format!("values {}", values(&sigma)),
    );
    rep.table("sigma.csv", divergence_csv(&sigma));

    let h = setup.oracle.alphabet().lookup("a").expect("F2 has generator a");
    let axis: Vec<DivergenceSample> = (1..=4)
        .map(|r| axis_divergence(setup.oracle.as_ref(), &aball.base, h, r))
        .collect::<Result<_>>()?;
    rep.check(
        "axis divergence infinite for r = 1..4",
        axis.iter().all(|s| s.value.is_infinite()),
        format!("values {}", values(&axis)),
    );
    rep.table("axis.csv", divergence_csv(&axis));
    rep.data("sigma", &sigma);
    rep.data("axis", &axis);
    Ok(())
}

fn pentagon_lower_div(rep: &mut RecipeReport, opts: &RecipeOptions) -> Result<()> {
    let setup = Setup::new(
        GroupConfig::pentagon(),
        SubgroupConfig::new(&["s1 s3"], Some("racg-rotation")),
    )?;
    rep.setup("pentagon RACG, <s1 s3>", &setup);
    let aball = atlas(&setup, 14, opts)?;
    let growth = SampledFunction::from_integers(
        "growth",
        &(2..=8)
            .map(|r| Ok((r, Some(aball.base.growth(r)?))))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let gc = classify(&growth, &ClassifyConfig::default());
    rep.check(
        "growth on r = 2..8 classified exponential",
        gc.class == GrowthClass::Exponential,
        report_class(&gc),
    );
    let rows: Vec<Vec<String>> = growth
        .points()
        .iter()
        .map(|p| vec![p.r.to_string(), format!("{}", p.value.expect("finite"))])
        .collect();
    rep.table("growth.csv", table_csv(&["r", "count"], &rows));

    let sample_family = |rho: Ratio<u32>, n: u32| -> Result<Vec<DivergenceSample>> {
        (2..=4)
            .map(|r| {
                let p = DivergenceParams::new(rho, n, r)?;
                lower_divergence_sample(setup.oracle.as_ref(), &aball, p, opts.budget_pairs)
            })
            .collect()
    };
    let n = 2;
    let sigma = sample_family(Ratio::new(1, 2), n)?;
    rep.check(
        "sigma(rho=1/2, n=2) >= nr for r = 2..4",
        sigma
            .iter()
            .all(|s| s.value.finite().is_none_or(|v| v >= (n * s.r) as u64)),
        format!("values {}", values(&sigma)),
    );
    let sc = classify(&profile("sigma", &sigma)?, &ClassifyConfig::default());
    rep.check(
        "sigma(rho=1/2, n=2) classified superlinear",
        sc.effective_class().superlinear(),
        report_class(&sc),
    );
    rep.table("sigma.csv", divergence_csv(&sigma));

    // Larger multiples of r show the growth the n=2 window cannot.
    let wide = sample_family(Ratio::new(1, 1), 3)?;
    rep.table("sigma_rho1_n3.csv", divergence_csv(&wide));
    rep.data("growth", &gc);
    rep.data("sigma", json!({ "samples": sigma, "classification": sc }));
    rep.data("sigma_rho1_n3", &wide);
    Ok(())
}

fn gromov(rep: &mut RecipeReport, opts: &RecipeOptions) -> Result<()> {
    rep.digests.push(Digests {
        label: "presentation".into(),
        group: hex::encode(Sha256::digest(GROMOV_PRESENTATION.as_bytes())),
        subgroup: String::new(),
    });
    let ns: Vec<u32> = match opts.n {
        Some(n) => vec![n],
        None => (0..=4).collect(),
    };
    let mut witnesses = Vec::new();
    for &n in &ns {
        witnesses.push(gromov_witness(n, DEFAULT_WITNESS_CAP)?);
    }
    for w in &witnesses {
        let n = w.n;
        rep.check(format!("n={n}: rewrites to a power of a"), w.verified, w.target.clone());
        let expected = num_bigint::BigInt::from(2u32).pow(1u32 << n);
        rep.check(
            format!("n={n}: exponent is 2^(2^n)"),
            w.target_exponent == expected,
            format!("exponent {}", w.target_exponent),
        );
        rep.check(
            format!("n={n}: witness length is 4n+2"),
            w.witness_length == 4 * n as u64 + 2,
            format!("length {}", w.witness_length),
        );
    }
    let rows: Vec<Vec<String>> = witnesses
        .iter()
        .map(|w| {
            vec![
                w.n.to_string(),
                w.witness_length.to_string(),
                w.target_exponent.to_string(),
                w.law_applications.to_string(),
                w.verified.to_string(),
            ]
        })
        .collect();
    rep.table(
        "witness.csv",
        table_csv(&["n", "length", "exponent", "law_applications", "verified"], &rows),
    );
    rep.data("witnesses", &witnesses);
    Ok(())
}

fn ends_survey(rep: &mut RecipeReport, opts: &RecipeOptions) -> Result<()> {
    struct Case {
        label: &'static str,
        setup: Setup,
        radii: [u32; 2],
        levels: Vec<u32>,
    }
    let cases = vec![
        Case {
            label: "Z^2, <a>",
            setup: z2_axis_setup()?,
            radii: [12, 16],
            levels: vec![1, 2, 3],
        },
        Case {
            label: "heisenberg, <c>",
            setup: heisenberg_center()?,
            radii: [10, 14],
            levels: vec![1, 2, 3],
        },
        Case {
            label: "Z^2, <a^2, b^2>",
            setup: Setup::new(GroupConfig::zd(2), SubgroupConfig::new(&["a a", "b b"], None))?,
            radii: [12, 16],
            levels: vec![1, 2, 3],
        },
        Case {
            label: "F2, <a>",
            setup: f2_axis_setup()?,
            radii: [8, 11],
            levels: vec![1, 2, 3, 4],
        },
    ];
    let mut rows = Vec::new();
    let mut data = Vec::new();
    for case in &cases {
        rep.setup(case.label, &case.setup);
        let small = atlas(&case.setup, case.radii[0], opts)?;
        let large = atlas(&case.setup, case.radii[1], opts)?;
        let ends = filtered_ends_profile(&[&small, &large], &case.levels)?;
        let estimates: Vec<usize> = ends.rows.iter().map(|r| r.estimate).collect();
        let detail = format!("estimates {estimates:?} at r = {:?}", case.levels);
        match case.label {
            "F2, <a>" => rep.check(
                "F2, <a>: estimate grows with r",
                estimates.windows(2).all(|w| w[1] > w[0]) && estimates[0] >= 2,
                detail,
            ),
            label => {
                let expected = match label {
                    "Z^2, <a>" => 2,
                    "heisenberg, <c>" => 1,
                    _ => 0,
                };
                rep.check(
                    format!("{label}: estimate stabilizes at {expected}"),
                    ends.rows.iter().all(|r| r.estimate == expected && r.stabilized),
                    detail,
                );
            }
        }
        for row in &ends.rows {
            rows.push(vec![
                case.label.to_string(),
                row.r.to_string(),
                row.estimate.to_string(),
                row.frontier_radius.to_string(),
                row.stabilized.to_string(),
            ]);
        }
        let components: Vec<usize> = case
            .levels
            .iter()
            .map(|&r| complement_components(&large, r).map(|c| c.component_count()))
            .collect::<Result<_>>()?;
        data.push(json!({ "case": case.label, "ends": ends, "components": components }));
    }
    rep.table(
        "ends.csv",
        table_csv(&["case", "r", "estimate", "frontier_radius", "stabilized"], &rows),
    );
    rep.data("ends", data);
    Ok(())
}
