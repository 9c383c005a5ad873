use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reldiv::asymptotics::{classify, dominates, ClassifyConfig, DominationGrid, SampledFunction};
use reldiv::atlas::{complement_components, with_threads, AnnotatedBall};
use reldiv::config::{GroupConfig, Setup, SubgroupConfig};
use reldiv::divergence::{divergence_profile, parse_rho, SampleKind};
use reldiv::invariants::{distortion_table, filtered_ends_profile, perpendicular_ray_prefix, DEFAULT_T_BUDGET};
use reldiv::recipes::{cached_atlas, run_recipe, RecipeOptions, RECIPES};
use reldiv::report::{comment_header, divergence_csv, emit_plot_data, table_csv, TOOL_VERSION};
use reldiv::rewrite::{ConfluenceStatus, RewritingSystem};
use reldiv::{Error, Result};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "reldiv",
    version,
    about = "Relative divergence, subgroup distortion and filtered ends on Cayley graph balls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Largest number of group elements an atlas may hold.
    #[arg(long, global = true, default_value_t = 10_000_000, value_parser = positive_usize)]
    budget_elems: usize,
    /// Largest number of qualifying pairs evaluated per divergence sample.
    #[arg(long, global = true, default_value_t = u64::MAX, value_parser = positive_u64)]
    budget_pairs: u64,
    /// Directory for cached atlases.
    #[arg(long, global = true, env = "RELDIV_CACHE_DIR")]
    atlas_cache: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Target {
    /// Group config file, or one of z2, z3, heisenberg, f2, pentagon.
    #[arg(long)]
    group: String,
    /// Subgroup config file, or inline generating words separated by
    /// commas with an optional `@formula` suffix, e.g. `c@heisenberg-center`.
    #[arg(long, default_value = "")]
    subgroup: String,
    /// Atlas radius; computed from the schedule when omitted.
    #[arg(long)]
    atlas_radius: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate and annotate a ball, storing it in the cache.
    Atlas {
        #[command(subcommand)]
        action: AtlasCommand,
    },
    /// Distortion, growth, filtered ends and perpendicular rays.
    Invariants {
        #[command(subcommand)]
        action: InvariantCommand,
    },
    /// Upper, lower and axis divergence profiles.
    Divergence {
        #[arg(value_enum)]
        kind: DivergenceKind,
        #[command(flatten)]
        target: Target,
        /// Radii as `a..b` (inclusive) or a comma list.
        #[arg(long)]
        radii: String,
        #[arg(long, default_value = "1/2")]
        rho: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Output file: `.json` for JSON, anything else for CSV. Stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a sampled profile and compare it with another.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Column holding the values.
        #[arg(long, default_value = "value")]
        column: String,
        /// Second profile for domination checks in both directions.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Rewriting-system tools.
    Rewrite {
        #[command(subcommand)]
        action: RewriteCommand,
    },
    /// Run a named reproduction recipe.
    Run {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(RECIPES))]
        recipe: String,
        /// Single n for gromov-witness.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Split a profile CSV into two-column data files, one per series.
    PlotData {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum AtlasCommand {
    Build {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        radius: u32,
    },
}

#[derive(Subcommand)]
enum InvariantCommand {
    /// Upper and lower distortion of the subgroup.
    Distortion {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        radii: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ball sizes.
    Growth {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        radii: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deep-component estimates of the complement, over two atlas radii.
    Ends {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        radii: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A geodesic along which the distance to the subgroup grows by one per step.
    Ray {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        len: u32,
    },
}

#[derive(Subcommand)]
enum RewriteCommand {
    /// Critical-pair confluence check of a rules file.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        max_pairs: usize,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum DivergenceKind {
    Upper,
    Lower,
    Axis,
}

fn positive_usize(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> std::result::Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_radii(text: &str) -> Result<Vec<u32>> {
    let bad = || Error::config(format!("bad radii {text:?}; use a..b or a comma list"));
    let radii: Vec<u32> = if let Some((a, b)) = text.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        text.split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config(format!(
            "radii {text:?} must be non-empty and strictly increasing"
        )));
    }
    Ok(radii)
}

fn group_config(arg: &str) -> Result<GroupConfig> {
    match arg {
        "z2" => Ok(GroupConfig::zd(2)),
        "z3" => Ok(GroupConfig::zd(3)),
        "heisenberg" => Ok(GroupConfig::heisenberg()),
        "f2" => Ok(GroupConfig::free(2)),
        "pentagon" => Ok(GroupConfig::pentagon()),
        path => GroupConfig::load(Path::new(path)),
    }
}

fn subgroup_config(arg: &str) -> Result<SubgroupConfig> {
    if arg.ends_with(".toml") {
        return SubgroupConfig::load(Path::new(arg));
    }
    let (words, formula) = match arg.split_once('@') {
        Some((w, f)) => (w, Some(f.trim())),
        None => (arg, None),
    };
    let words: Vec<&str> = words.split(',').map(str::trim).filter(|w| !w.is_empty()).collect();
    Ok(SubgroupConfig::new(&words, formula))
}

fn setup(target: &Target) -> Result<Setup> {
    Setup::new(group_config(&target.group)?, subgroup_config(&target.subgroup)?)
}

/// Picks the atlas radius: the override when given, otherwise the smallest
/// radius whose valid core reaches `want`. An override whose core falls
/// below `need` is rejected before any enumeration.
fn plan_radius(setup: &Setup, target: &Target, want: u32, need: u32) -> Result<u32> {
    let exact = setup.spec.has_formula();
    let radius_for = |core: u32| if exact { core } else { 2 * core };
    let radius = target.atlas_radius.unwrap_or(radius_for(want));
    let core = if exact { radius } else { radius / 2 };
    eprintln!(
        "atlas radius {radius}, valid core {core} (schedule wants {want}, {})",
        if exact {
            "distance formula"
        } else {
            "breadth-first distances"
        }
    );
    if core < need {
        return Err(Error::needs_radius("the radii schedule", radius_for(need), radius));
    }
    Ok(radius)
}

fn load(setup: &Setup, radius: u32, common: &Common) -> Result<AnnotatedBall> {
    cached_atlas(setup, radius, common.budget_elems, common.atlas_cache.as_deref())
}

fn provenance(setup: &Setup) -> String {
    comment_header(&[
        ("tool", TOOL_VERSION),
        ("group digest", &setup.group_digest()),
        ("subgroup digest", &setup.subgroup_digest()),
    ])
}

fn emit(out: Option<&Path>, csv: String, json: serde_json::Value) -> Result<()> {
    match out {
        Some(path) if path.extension().is_some_and(|e| e == "json") => {
            std::fs::write(path, serde_json::to_string_pretty(&json).expect("json") + "\n")?
        }
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    let common = cli.common.clone();
    match cli.command {
        Command::Atlas {
            action: AtlasCommand::Build { target, radius },
        } => {
            let setup = setup(&target)?;
            if common.atlas_cache.is_none() {
                return Err(Error::config("atlas build needs --atlas-cache or RELDIV_CACHE_DIR"));
            }
            let aball = load(&setup, radius, &common)?;
            println!(
                "{} elements, radius {}, valid core {}",
                aball.base.element_count(),
                aball.radius(),
                aball.valid_core()
            );
            Ok(0)
        }
        Command::Invariants { action } => invariants(action, &common),
        Command::Divergence {
            kind,
            target,
            radii,
            rho,
            n,
            out,
        } => {
            let setup = setup(&target)?;
            let radii = parse_radii(&radii)?;
            let rho = parse_rho(&rho)?;
            let max = *radii.last().expect("non-empty");
            let (kind, core, axis) = match kind {
                DivergenceKind::Upper => (SampleKind::Upper, (max + n * max, max + n * max), None),
                DivergenceKind::Lower => (SampleKind::Lower, (max + n * max, max), None),
                DivergenceKind::Axis => {
                    let gens = setup.spec.generating_words();
                    let h = match gens {
                        [w] if w.len() == 1 => w[0],
                        _ => {
                            return Err(Error::config(
                                "axis divergence needs a subgroup generated by one generator",
                            ))
                        }
                    };
                    (SampleKind::Axis, (3 * max, 3 * max), Some(h))
                }
            };
            let radius = match kind {
                SampleKind::Axis => {
                    let radius = target.atlas_radius.unwrap_or(core.0);
                    eprintln!("atlas radius {radius} (axis at r={max} needs {})", core.0);
                    if radius < core.0 {
                        return Err(Error::needs_radius("the radii schedule", core.0, radius));
                    }
                    radius
                }
                _ => plan_radius(&setup, &target, core.0, core.1)?,
            };
            let aball = load(&setup, radius, &common)?;
            let rows = with_threads(common.threads, || {
                divergence_profile(
                    setup.oracle.as_ref(),
                    &aball,
                    kind,
                    rho,
                    n,
                    &radii,
                    common.budget_pairs,
                    axis,
                )
            })?;
            let mut samples = Vec::new();
            let mut failure = None;
            for row in rows {
                match row {
                    Ok(s) => samples.push(s),
                    Err(e) => {
                        failure = Some(e);
                        break;
                    }
                }
            }
            let csv = format!("{}{}", provenance(&setup), divergence_csv(&samples));
            let json = json!({
                "tool": TOOL_VERSION,
                "group_digest": setup.group_digest(),
                "subgroup_digest": setup.subgroup_digest(),
                "samples": samples,
                "partial": failure.as_ref().map(|e| e.to_string()),
            });
            emit(out.as_deref(), csv, json)?;
            match failure {
                Some(e) => {
                    eprintln!("partial profile: {e}");
                    Ok(e.exit_code())
                }
                None => Ok(0),
            }
        }
        Command::Classify {
            input,
            out,
            column,
            against,
        } => {
            let read = |p: &Path| -> Result<SampledFunction<f64>> {
                let text = std::fs::read_to_string(p)?;
                SampledFunction::from_csv_column(p.display().to_string(), &text, &column)
            };
            let f = read(&input)?;
            let report = classify(&f, &ClassifyConfig::default());
            let mut doc = json!({ "tool": TOOL_VERSION, "classification": report });
            if let Some(g_path) = against {
                let g = read(&g_path)?;
                let grid = DominationGrid::default();
                doc["dominated_by_other"] = serde_json::to_value(dominates(&f, &g, grid)).expect("json");
                doc["dominates_other"] = serde_json::to_value(dominates(&g, &f, grid)).expect("json");
            }
            let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Rewrite {
            action: RewriteCommand::Check { file, max_pairs },
        } => {
            let text = std::fs::read_to_string(&file)?;
            let system = RewritingSystem::parse(&text)?;
            let report = with_threads(common.threads, || system.critical_pair_check(max_pairs))?;
            println!("{}", serde_json::to_string_pretty(&report).expect("json"));
            Ok(match report.status {
                ConfluenceStatus::Confluent => 0,
                ConfluenceStatus::NotConfluent => 2,
                ConfluenceStatus::UnknownBudgetExhausted => 3,
            })
        }
        Command::Run { recipe, n, out } => {
            let opts = RecipeOptions {
                out_dir: out,
                threads: common.threads,
                budget_elems: common.budget_elems,
                budget_pairs: common.budget_pairs,
                cache_dir: common.atlas_cache.clone(),
                n,
            };
            let report = run_recipe(&recipe, &opts)?;
            print!("{}", report.summary());
            Ok(report.exit_code())
        }
        Command::PlotData { input, out } => {
            let text = std::fs::read_to_string(&input)?;
            let data = emit_plot_data(&text)?;
            std::fs::create_dir_all(&out)?;
            let stem = input
                .file_stem()
                .map_or("profile".into(), |s| s.to_string_lossy().into_owned());
            for series in &data.series {
                let path = out.join(format!("{stem}.{}.dat", series.column));
                std::fs::write(&path, &series.data)?;
                println!("{} ({} rows)", path.display(), series.rows);
            }
            for w in &data.warnings {
                eprintln!("warning: {w}");
            }
            Ok(0)
        }
    }
}

fn invariants(action: InvariantCommand, common: &Common) -> Result<i32> {
    match action {
        InvariantCommand::Distortion { target, radii, out } => {
            let setup = setup(&target)?;
            let radii = parse_radii(&radii)?;
            let max = *radii.last().expect("non-empty");
            let aball = load(&setup, plan_radius(&setup, &target, max, max)?, common)?;
            let table = with_threads(common.threads, || {
                distortion_table(setup.oracle.as_ref(), &aball, &setup.spec, &radii, DEFAULT_T_BUDGET)
            })??;
            let rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| vec![r.r.to_string(), r.upper.value.to_string(), r.lower.value.to_string()])
                .collect();
            let csv = format!("{}{}", provenance(&setup), table_csv(&["r", "upper", "lower"], &rows));
            emit(
                out.as_deref(),
                csv,
                json!({ "tool": TOOL_VERSION, "group_digest": setup.group_digest(), "rows": table.rows }),
            )?;
            Ok(0)
        }
        InvariantCommand::Growth { target, radii, out } => {
            let setup = setup(&target)?;
            let radii = parse_radii(&radii)?;
            let max = *radii.last().expect("non-empty");
            let radius = target.atlas_radius.unwrap_or(max);
            let aball = load(&setup, radius, common)?;
            let rows = radii
                .iter()
                .map(|&r| Ok(vec![r.to_string(), aball.base.growth(r)?.to_string()]))
                .collect::<Result<Vec<_>>>()?;
            let csv = format!("{}{}", provenance(&setup), table_csv(&["r", "value"], &rows));
            emit(
                out.as_deref(),
                csv,
                json!({ "tool": TOOL_VERSION, "group_digest": setup.group_digest(), "rows": rows }),
            )?;
            Ok(0)
        }
        InvariantCommand::Ends { target, radii, out } => {
            let setup = setup(&target)?;
            let radii = parse_radii(&radii)?;
            let max = *radii.last().expect("non-empty");
            let outer = plan_radius(&setup, &target, 2 * max + 4, max + 1)?;
            let inner = if setup.spec.has_formula() {
                outer * 3 / 4
            } else {
                outer - 2
            };
            let small = load(&setup, inner, common)?;
            let large = load(&setup, outer, common)?;
            let profile = filtered_ends_profile(&[&small, &large], &radii)?;
            let rows: Vec<Vec<String>> = profile
                .rows
                .iter()
                .map(|row| {
                    Ok(vec![
                        row.r.to_string(),
                        row.estimate.to_string(),
                        row.frontier_radius.to_string(),
                        row.stabilized.to_string(),
                        complement_components(&large, row.r)?.component_count().to_string(),
                    ])
                })
                .collect::<Result<_>>()?;
            let csv = format!(
                "{}{}",
                provenance(&setup),
                table_csv(&["r", "estimate", "frontier_radius", "stabilized", "components"], &rows)
            );
            emit(
                out.as_deref(),
                csv,
                json!({ "tool": TOOL_VERSION, "group_digest": setup.group_digest(), "ends": profile }),
            )?;
            Ok(0)
        }
        InvariantCommand::Ray { target, len } => {
            let setup = setup(&target)?;
            let aball = load(&setup, plan_radius(&setup, &target, len, len)?, common)?;
            let path = perpendicular_ray_prefix(&aball, len)?;
            for id in path {
                let word = setup.oracle.alphabet().render_word(&aball.base.geodesic_word(id));
                println!(
                    "{}\t{}",
                    aball.dist(id),
                    if word.is_empty() { "e".into() } else { word }
                );
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
