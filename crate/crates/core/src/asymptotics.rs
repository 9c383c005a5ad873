//! Growth classes of sampled functions and the domination relation
//! `f(x) ≤ g(Ax) + Bx for x > C`, evaluated on samples.
//!
//! Every verdict here is empirical: it describes the samples at hand, not
//! the functions they came from.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::FitFloat;

pub const EMPIRICAL_NOTE: &str = "empirical, desk-scale";

/// One sample; `None` is ∞.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "F: Serialize"))]
pub struct Sample<F> {
    pub r: u32,
    #[serde(serialize_with = "ser_value")]
    pub value: Option<F>,
}

fn ser_value<F: Serialize, S: serde::Serializer>(v: &Option<F>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => x.serialize(s),
        None => s.serialize_str("inf"),
    }
}

/// Samples `(r, f(r))` at strictly increasing radii.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledFunction<F> {
    pub tag: String,
    points: Vec<Sample<F>>,
}

impl<F: FitFloat> SampledFunction<F> {
    pub fn new(tag: impl Into<String>, points: Vec<Sample<F>>) -> Result<Self> {
        for w in points.windows(2) {
            if w[0].r >= w[1].r {
                return Err(Error::invalid(format!(
                    "sample radii must increase strictly, got {} then {}",
                    w[0].r, w[1].r
                )));
            }
        }
        if let Some(p) = points.iter().find(|p| p.value.is_some_and(|v| !(v >= F::zero()))) {
            return Err(Error::invalid(format!("negative or NaN sample at r={}", p.r)));
        }
        Ok(Self {
            tag: tag.into(),
            points,
        })
    }

    pub fn from_pairs(tag: impl Into<String>, pairs: &[(u32, Option<F>)]) -> Result<Self> {
        Self::new(tag, pairs.iter().map(|&(r, value)| Sample { r, value }).collect())
    }

    pub fn from_integers(tag: impl Into<String>, pairs: &[(u32, Option<u64>)]) -> Result<Self> {
        let conv = |v: u64| F::from_u64(v).expect("u64 converts to a float");
        Self::new(
            tag,
            pairs.iter().map(|&(r, v)| Sample { r, value: v.map(conv) }).collect(),
        )
    }

    /// `r ↦ f(r)` for `r` in `radii`.
    pub fn from_fn(tag: impl Into<String>, radii: impl IntoIterator<Item = u32>, f: impl Fn(u32) -> F) -> Result<Self> {
        Self::new(
            tag,
            radii.into_iter().map(|r| Sample { r, value: Some(f(r)) }).collect(),
        )
    }

    /// Reads a CSV with columns `r` and `value` (others are ignored);
    /// `inf` marks ∞.
    pub fn from_csv(tag: impl Into<String>, text: &str) -> Result<Self> {
        Self::from_csv_column(tag, text, "value")
    }

    /// Reads columns `r` and `column`; `inf` or `∞` mark infinite values.
    pub fn from_csv_column(tag: impl Into<String>, text: &str, column: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| Error::Parse {
                line: 1,
                reason: e.to_string(),
            })?
            .clone();
        let col = |name: &str| {
            headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
                line: 1,
                reason: format!("missing column {name:?}"),
            })
        };
        let (rc, vc) = (col("r")?, col(column)?);
        let mut points = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                reason: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let field = |i: usize| record.get(i).unwrap_or("");
            let r = field(rc).parse::<u32>().map_err(|_| Error::Parse {
                line,
                reason: format!("bad radius {:?}", field(rc)),
            })?;
            let value = match field(vc) {
                "inf" | "∞" => None,
                s => Some(
                    s.parse::<f64>()
                        .ok()
                        .and_then(F::from_f64)
                        .ok_or_else(|| Error::Parse {
                            line,
                            reason: format!("bad value {s:?}"),
                        })?,
                ),
            };
            points.push(Sample { r, value });
        }
        Self::new(tag, points)
    }

    pub fn points(&self) -> &[Sample<F>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Multiplies every finite value by `alpha`.
    pub fn scaled(&self, alpha: F) -> Self {
        Self {
            tag: self.tag.clone(),
            points: self
                .points
                .iter()
                .map(|p| Sample {
                    r: p.r,
                    value: p.value.map(|v| v * alpha),
                })
                .collect(),
        }
    }

    /// The value at the first sample with radius at least `x`, rounding
    /// the argument up so a nondecreasing function is never underestimated.
    fn at_or_above(&self, x: u64) -> Option<Option<F>> {
        self.points.iter().find(|p| p.r as u64 >= x).map(|p| p.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum GrowthClass {
    Bounded,
    Linear,
    Polynomial { degree: u32 },
    Exponential,
    Infinite,
    Indeterminate,
}

impl GrowthClass {
    fn from_slope<F: FitFloat>(slope: F) -> Self {
        let d = slope.round().to_i64().unwrap_or(0);
        match d {
            i64::MIN..=0 => GrowthClass::Bounded,
            1 => GrowthClass::Linear,
            d => GrowthClass::Polynomial { degree: d as u32 },
        }
    }

    /// Bounded or linear.
    pub fn at_most_linear(&self) -> bool {
        matches!(self, GrowthClass::Bounded | GrowthClass::Linear)
    }

    /// Polynomial of degree at least 2, exponential or infinite.
    pub fn superlinear(&self) -> bool {
        matches!(
            self,
            GrowthClass::Polynomial { .. } | GrowthClass::Exponential | GrowthClass::Infinite
        )
    }
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthClass::Bounded => f.write_str("bounded"),
            GrowthClass::Linear => f.write_str("linear"),
            GrowthClass::Polynomial { degree } => write!(f, "polynomial(degree {degree})"),
            GrowthClass::Exponential => f.write_str("exponential"),
            GrowthClass::Infinite => f.write_str("infinite"),
            GrowthClass::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

/// Ordinary least squares `y = slope·x + intercept`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct LinearFit<F> {
    pub slope: F,
    pub intercept: F,
    /// Standard error of the slope; needs three points.
    pub slope_stderr: Option<F>,
    /// Residual sum of squares.
    pub rss: F,
}

pub fn least_squares<F: FitFloat>(xs: &[F], ys: &[F]) -> Option<LinearFit<F>> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = F::from_usize(n).expect("usize converts to a float");
    let mx = xs.iter().fold(F::zero(), |a, &b| a + b) / nf;
    let my = ys.iter().fold(F::zero(), |a, &b| a + b) / nf;
    let sxx = xs.iter().fold(F::zero(), |a, &x| a + (x - mx) * (x - mx));
    if sxx <= F::zero() {
        return None;
    }
    let sxy = xs.iter().zip(ys).fold(F::zero(), |a, (&x, &y)| a + (x - mx) * (y - my));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss = xs.iter().zip(ys).fold(F::zero(), |a, (&x, &y)| {
        let e = y - slope * x - intercept;
        a + e * e
    });
    let slope_stderr = (n > 2).then(|| (rss / (nf - F::from_u8(2).expect("2")) / sxx).sqrt());
    Some(LinearFit {
        slope,
        intercept,
        slope_stderr,
        rss,
    })
}

#[derive(Copy, Clone, Debug)]
pub struct ClassifyConfig<F> {
    /// Residuals within this relative margin of each other are comparable
    /// and the verdict is indeterminate.
    pub margin: F,
    /// Fewer finite samples than this give an indeterminate verdict.
    pub min_samples: usize,
}

impl<F: FitFloat> Default for ClassifyConfig<F> {
    fn default() -> Self {
        Self {
            margin: F::from_f64(0.25).expect("0.25"),
            min_samples: 4,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthClassReport<F> {
    pub tag: String,
    #[serde(flatten)]
    pub class: GrowthClass,
    /// Best guess behind an indeterminate verdict.
    pub leaning: Option<GrowthClass>,
    /// Log–log slope, the degree estimate.
    pub slope: Option<F>,
    /// `slope ± 2·stderr`.
    pub degree_interval: Option<(F, F)>,
    /// `log f` against `log r`.
    pub polynomial_fit: Option<LinearFit<F>>,
    /// `log f` against `r`.
    pub exponential_fit: Option<LinearFit<F>>,
    /// Radii of the tail the fits used.
    pub fitted_radii: Vec<u32>,
    pub finite_samples: usize,
    pub infinite_samples: usize,
    pub note: String,
}

impl<F: FitFloat> GrowthClassReport<F> {
    fn bare(f: &SampledFunction<F>, class: GrowthClass, finite: usize, infinite: usize) -> Self {
        Self {
            tag: f.tag.clone(),
            class,
            leaning: None,
            slope: None,
            degree_interval: None,
            polynomial_fit: None,
            exponential_fit: None,
            fitted_radii: Vec::new(),
            finite_samples: finite,
            infinite_samples: infinite,
            note: EMPIRICAL_NOTE.into(),
        }
    }

    /// The class, or the leaning when indeterminate.
    pub fn effective_class(&self) -> &GrowthClass {
        match (&self.class, &self.leaning) {
            (GrowthClass::Indeterminate, Some(l)) => l,
            (c, _) => c,
        }
    }
}

/// Classifies the growth of `f` from its tail.
///
/// The fits use the last `max(min_samples, ⌈n/2⌉)` finite samples, so
/// transients at small radii do not dominate; zero values are left out of
/// the logarithmic fits. A constant tail is bounded. Otherwise the
/// polynomial fit (log–log) and the exponential fit (log–linear) compete
/// on residual; comparable residuals give an indeterminate verdict leaning
/// polynomial.
pub fn classify<F: FitFloat>(f: &SampledFunction<F>, cfg: &ClassifyConfig<F>) -> GrowthClassReport<F> {
    let finite: Vec<(u32, F)> = f.points.iter().filter_map(|p| p.value.map(|v| (p.r, v))).collect();
    let infinite = f.len() - finite.len();
    let mut report = GrowthClassReport::bare(f, GrowthClass::Indeterminate, finite.len(), infinite);
    if finite.is_empty() {
        if infinite > 0 {
            report.class = GrowthClass::Infinite;
        }
        return report;
    }
    if infinite > 0 {
        report.note = format!("{EMPIRICAL_NOTE}; {infinite} infinite samples excluded from the fits");
    }
    let enough = finite.len() >= cfg.min_samples;
    let tail_len = cfg.min_samples.max(finite.len().div_ceil(2)).min(finite.len());
    let tail = &finite[finite.len() - tail_len..];
    report.fitted_radii = tail.iter().map(|&(r, _)| r).collect();

    let chosen = if tail.iter().all(|&(_, v)| v == tail[0].1) {
        Some(GrowthClass::Bounded)
    } else {
        let pts: Vec<(F, F)> = tail
            .iter()
            .filter(|&&(r, v)| r > 0 && v > F::zero())
            .map(|&(r, v)| (F::from_u32(r).expect("u32 converts to a float"), v.ln()))
            .collect();
        let ys: Vec<F> = pts.iter().map(|p| p.1).collect();
        let log_r: Vec<F> = pts.iter().map(|p| p.0.ln()).collect();
        let r: Vec<F> = pts.iter().map(|p| p.0).collect();
        let poly = least_squares(&log_r, &ys);
        let exp = least_squares(&r, &ys);
        report.polynomial_fit = poly;
        report.exponential_fit = exp;
        if let Some(p) = poly {
            report.slope = Some(p.slope);
            let two = F::from_u8(2).expect("2");
            report.degree_interval = p.slope_stderr.map(|se| (p.slope - two * se, p.slope + two * se));
        }
        match (poly, exp) {
            (Some(p), Some(e)) => {
                let poly_class = GrowthClass::from_slope(p.slope);
                let (lo, hi) = if p.rss <= e.rss { (p.rss, e.rss) } else { (e.rss, p.rss) };
                let tiny = F::from_f64(1e-12).expect("1e-12");
                if hi <= tiny || p.rss <= e.rss && hi - lo > cfg.margin * hi {
                    Some(poly_class)
                } else if hi - lo <= cfg.margin * hi {
                    report.leaning = Some(poly_class);
                    None
                } else {
                    Some(GrowthClass::Exponential)
                }
            }
            _ => None,
        }
    };
    match chosen {
        Some(c) if enough => report.class = c,
        Some(c) => report.leaning = Some(c),
        None => {}
    }
    report
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    True,
    False,
    Indeterminate,
}

#[derive(Copy, Clone, Debug)]
pub struct DominationGrid {
    pub a_max: u32,
    pub b_max: u32,
}

impl Default for DominationGrid {
    fn default() -> Self {
        Self { a_max: 8, b_max: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominationResult {
    pub verdict: Verdict,
    /// The witnessing constants when the verdict is true.
    pub a: Option<u32>,
    pub b: Option<u32>,
    pub c: Option<u32>,
    /// Samples of f beyond C that satisfied the inequality.
    pub checked_points: usize,
    pub note: String,
}

/// Whether `f(x) ≤ g(Ax) + Bx` for all sampled `x > C`, searching
/// `A ∈ 1..=a_max`, `B ∈ 0..=b_max`.
///
/// `g(Ax)` is read at the first sample of g at or above `Ax`. C is the
/// largest sample of f where the inequality fails or g cannot be read, and
/// at least half of f's samples must lie beyond it. The smallest B is
/// reported, then the smallest A.
pub fn dominates<F: FitFloat>(
    f: &SampledFunction<F>,
    g: &SampledFunction<F>,
    grid: DominationGrid,
) -> DominationResult {
    let indeterminate = |note: &str| DominationResult {
        verdict: Verdict::Indeterminate,
        a: None,
        b: None,
        c: None,
        checked_points: 0,
        note: format!("{EMPIRICAL_NOTE}; {note}"),
    };
    let n = f.len();
    let need = n.div_ceil(2).max(1);
    if n < 2 {
        return indeterminate("fewer than two samples of f");
    }
    let overlap = f.points.iter().filter(|p| g.at_or_above(p.r as u64).is_some()).count();
    if overlap < need {
        return indeterminate("insufficient overlap between the sampled radii");
    }
    for b in 0..=grid.b_max {
        for a in 1..=grid.a_max {
            let holds = |p: &Sample<F>| match g.at_or_above(a as u64 * p.r as u64) {
                None => false,
                Some(None) => true,
                Some(Some(gv)) => match p.value {
                    None => false,
                    Some(fv) => fv <= gv + F::from_u64(b as u64 * p.r as u64).expect("u64 converts to a float"),
                },
            };
            let c = f.points.iter().filter(|p| !holds(p)).map(|p| p.r).max();
            let beyond = f.points.iter().filter(|p| c.is_none_or(|c| p.r > c)).count();
            if beyond >= need {
                return DominationResult {
                    verdict: Verdict::True,
                    a: Some(a),
                    b: Some(b),
                    c: Some(c.unwrap_or(0)),
                    checked_points: beyond,
                    note: EMPIRICAL_NOTE.into(),
                };
            }
        }
    }
    DominationResult {
        verdict: Verdict::False,
        a: None,
        b: None,
        c: None,
        checked_points: 0,
        note: format!(
            "{EMPIRICAL_NOTE}; no A ≤ {} and B ≤ {} works on the samples",
            grid.a_max, grid.b_max
        ),
    }
}

/// `(ρ, n)` points at which divergence families are compared.
pub const FAMILY_GRID: [((u32, u32), u32); 4] = [((1, 2), 2), ((1, 2), 3), ((1, 1), 2), ((1, 1), 3)];

/// One member of a divergence family, indexed by `(ρ, n)`.
#[derive(Clone, Debug)]
pub struct FamilyMember<F> {
    pub rho: (u32, u32),
    pub n: u32,
    pub samples: SampledFunction<F>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixCell {
    pub rho: String,
    pub n: u32,
    pub result: DominationResult,
}

/// Domination verdicts of `f` by `g` at every `(ρ, n)` present in both
/// families, in the order of `f`.
pub fn domination_matrix<F: FitFloat>(
    f: &[FamilyMember<F>],
    g: &[FamilyMember<F>],
    grid: DominationGrid,
) -> Vec<MatrixCell> {
    f.iter()
        .filter_map(|fm| {
            let gm = g.iter().find(|gm| gm.rho == fm.rho && gm.n == fm.n)?;
            Some(MatrixCell {
                rho: format!("{}/{}", fm.rho.0, fm.rho.1),
                n: fm.n,
                result: dominates(&fm.samples, &gm.samples, grid),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(tag: &str, start: u32, values: &[u64]) -> SampledFunction<f64> {
        let pairs: Vec<(u32, Option<u64>)> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (start + i as u32, Some(v)))
            .collect();
        SampledFunction::from_integers(tag, &pairs).unwrap()
    }

    fn powers(d: i32) -> SampledFunction<f64> {
        SampledFunction::from_fn("pow", 2..=12, |r| (r as f64).powi(d)).unwrap()
    }

    #[test]
    fn sample_validation() {
        assert!(SampledFunction::<f64>::from_pairs("x", &[(2, Some(1.0)), (2, Some(2.0))]).is_err());
        assert!(SampledFunction::<f64>::from_pairs("x", &[(2, Some(-1.0))]).is_err());
        assert!(SampledFunction::<f64>::from_pairs("x", &[(2, None), (3, Some(0.0))]).is_ok());
    }

    #[test]
    fn csv_reading() {
        let f = SampledFunction::<f64>::from_csv("t", "r,value,flag\n2,4,x\n3,inf,y\n").unwrap();
        assert_eq!(f.points()[1].value, None);
        match SampledFunction::<f64>::from_csv("t", "r,value\n2,4\nx,5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(SampledFunction::<f64>::from_csv("t", "r,v\n").is_err());
    }

    #[test]
    fn classify_examples() {
        let cfg = ClassifyConfig::default();
        assert_eq!(
            classify(&ints("sigma", 2, &[4, 6, 8, 10]), &cfg).class,
            GrowthClass::Linear
        );
        // Stair-stepped quadratic data over a short tail: the two fits come
        // out within the margin of each other.
        for values in [[0, 0, 1, 1, 2, 2, 4, 4, 6], [1, 1, 1, 2, 2, 3, 3, 5, 5]] {
            let rep = classify(&ints("h", 2, &values), &cfg);
            assert_eq!(rep.class, GrowthClass::Indeterminate, "{rep:?}");
            assert_eq!(rep.leaning, Some(GrowthClass::Polynomial { degree: 2 }));
            assert!((1.5..=2.5).contains(&rep.slope.unwrap()));
        }
        let growth = ints("g", 2, &[21, 61, 166, 441, 1161, 3046, 7981]);
        assert_eq!(classify(&growth, &cfg).class, GrowthClass::Exponential);
        assert_eq!(
            classify(&ints("c", 2, &[3, 3, 3, 3, 3]), &cfg).class,
            GrowthClass::Bounded
        );
    }

    #[test]
    fn few_samples_and_infinities() {
        let cfg = ClassifyConfig::default();
        let rep = classify(&ints("s", 2, &[8, 12, 16]), &cfg);
        assert_eq!(rep.class, GrowthClass::Indeterminate);
        assert_eq!(rep.leaning, Some(GrowthClass::Linear));
        let inf = SampledFunction::<f64>::from_pairs("i", &[(2, None), (3, None)]).unwrap();
        assert_eq!(classify(&inf, &cfg).class, GrowthClass::Infinite);
        let mixed = SampledFunction::<f64>::from_pairs(
            "m",
            &[
                (1, None),
                (2, Some(2.0)),
                (3, Some(3.0)),
                (4, Some(4.0)),
                (5, Some(5.0)),
            ],
        )
        .unwrap();
        let rep = classify(&mixed, &cfg);
        assert_eq!(rep.class, GrowthClass::Linear);
        assert_eq!(rep.infinite_samples, 1);
        let empty = SampledFunction::<f64>::new("e", vec![]).unwrap();
        assert_eq!(classify(&empty, &cfg).class, GrowthClass::Indeterminate);
    }

    #[test]
    fn exact_powers() {
        let cfg = ClassifyConfig::default();
        assert_eq!(classify(&powers(1), &cfg).class, GrowthClass::Linear);
        for d in 2..=3 {
            let rep = classify(&powers(d), &cfg);
            assert_eq!(rep.class, GrowthClass::Polynomial { degree: d as u32 });
            assert!((rep.slope.unwrap() - d as f64).abs() < 1e-9);
        }
        let single = SampledFunction::<f32>::from_fn("f32", 2..=12, |r| (r as f32).powi(2)).unwrap();
        assert_eq!(
            classify(&single, &ClassifyConfig::default()).class,
            GrowthClass::Polynomial { degree: 2 }
        );
    }

    #[test]
    fn domination_examples() {
        let lin = SampledFunction::<f64>::from_fn("r", 1..=12, |r| r as f64).unwrap();
        let quad = SampledFunction::<f64>::from_fn("r2", 1..=12, |r| (r * r) as f64).unwrap();
        let res = dominates(&lin, &quad, DominationGrid::default());
        assert_eq!(res.verdict, Verdict::True);
        assert_eq!((res.a, res.b), (Some(1), Some(0)));
        let quad212 = SampledFunction::<f64>::from_fn("r2", 2..=12, |r| (r * r) as f64).unwrap();
        let lin212 = SampledFunction::<f64>::from_fn("r", 2..=12, |r| r as f64).unwrap();
        assert_eq!(
            dominates(&quad212, &lin212, DominationGrid::default()).verdict,
            Verdict::False
        );
        let same = dominates(&quad, &quad, DominationGrid::default());
        assert_eq!(
            (same.verdict, same.a, same.b, same.c),
            (Verdict::True, Some(1), Some(0), Some(0))
        );
        let short = SampledFunction::<f64>::from_fn("s", 20..=21, |r| r as f64).unwrap();
        assert_eq!(
            dominates(&short, &lin, DominationGrid::default()).verdict,
            Verdict::Indeterminate
        );
    }

    #[test]
    fn infinite_samples_in_domination() {
        let f = SampledFunction::<f64>::from_pairs("f", &[(1, None), (2, None), (3, None)]).unwrap();
        let g = SampledFunction::<f64>::from_pairs("g", &[(1, Some(1.0)), (2, Some(2.0)), (3, Some(3.0))]).unwrap();
        assert_eq!(dominates(&f, &g, DominationGrid::default()).verdict, Verdict::False);
        assert_eq!(dominates(&g, &f, DominationGrid::default()).verdict, Verdict::True);
    }

    #[test]
    fn matrix_matches_pairs() {
        let mk = |rho, n, k: f64| FamilyMember {
            rho,
            n,
            samples: SampledFunction::<f64>::from_fn("d", 2..=8, move |r| k * r as f64).unwrap(),
        };
        let f: Vec<_> = FAMILY_GRID.iter().map(|&(rho, n)| mk(rho, n, n as f64)).collect();
        let g: Vec<_> = FAMILY_GRID.iter().take(2).map(|&(rho, n)| mk(rho, n, 1.0)).collect();
        let m = domination_matrix(&f, &g, DominationGrid::default());
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].rho, "1/2");
        assert!(m.iter().all(|c| c.result.verdict == Verdict::True));
    }

    fn monotone(len: usize) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0u32..50, len).prop_map(|steps| {
            steps
                .iter()
                .scan(1u32, |acc, s| {
                    *acc += s;
                    Some(*acc)
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn classify_is_scale_invariant(values in monotone(8), alpha in 0.01f64..100.0) {
            let f = SampledFunction::<f64>::from_fn("f", 2..=9, |r| values[(r - 2) as usize] as f64).unwrap();
            let cfg = ClassifyConfig::default();
            let a = classify(&f, &cfg);
            let b = classify(&f.scaled(alpha), &cfg);
            prop_assert_eq!(a.class, b.class);
            prop_assert_eq!(a.leaning, b.leaning);
        }

        #[test]
        fn dominates_is_reflexive(values in monotone(10)) {
            let f = SampledFunction::<f64>::from_fn("f", 1..=10, |r| values[(r - 1) as usize] as f64).unwrap();
            let res = dominates(&f, &f, DominationGrid::default());
            prop_assert_eq!(res.verdict, Verdict::True);
            prop_assert_eq!((res.a, res.b), (Some(1), Some(0)));
        }

        #[test]
        fn dominates_is_transitive(base in monotone(10), d1 in prop::collection::vec(0u32..5, 10), d2 in prop::collection::vec(0u32..5, 10)) {
            let f = SampledFunction::<f64>::from_fn("f", 1..=10, |r| base[(r - 1) as usize] as f64).unwrap();
            let g = SampledFunction::<f64>::from_fn("g", 1..=10, |r| (base[(r - 1) as usize] + d1[(r - 1) as usize]) as f64).unwrap();
            let h = SampledFunction::<f64>::from_fn("h", 1..=10, |r| {
                let i = (r - 1) as usize;
                (base[i] + d1[i] + d2[i]) as f64
            }).unwrap();
            let grid = DominationGrid::default();
            prop_assume!(dominates(&f, &g, grid).verdict == Verdict::True);
            prop_assume!(dominates(&g, &h, grid).verdict == Verdict::True);
            prop_assert_eq!(dominates(&f, &h, grid).verdict, Verdict::True);
        }
    }
}
