//! One function per subcommand. Each returns both renderings of its
//! report; the caller picks one.

use std::fmt::Write as _;
use std::path::Path;

use coarse_lip_core::ml::{
    check_ml_defect, reconstruct, verify_theorem2, BoundCheck, MlDefectReport, SampleConfig, ReconstructionBounds, Witness,
    Worst,
};
use coarse_lip_core::rough::{defect, IsometryDefect};
use coarse_lip_core::scaling::{assemble_report, run_level, Family, ScalingExperiment, ScalingReport};
use coarse_lip_core::{
    lambda_decompose, lambda_dist_closed, lipschitzise, nearest_lambda, ExtReal, MapPair, MetricSpace,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::formats::{load_function, load_oracle, load_pair, load_space, load_values, FunctionFile, OracleDescriptor, SpaceFile};
use crate::parallel;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub budget: usize,
    pub tol: f64,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: 0, samples: 64, budget: 5, tol: 1e-9, threads: 1 }
    }
}

impl RunConfig {
    fn sampling(&self) -> SampleConfig {
        SampleConfig { seed: self.seed, samples: self.samples, ..SampleConfig::default() }
    }
}

pub struct Output {
    pub json: String,
    pub text: String,
}

impl Output {
    fn new<T: Serialize>(value: &T, text: String) -> Self {
        let json = serde_json::to_string_pretty(value).expect("reports serialize");
        Output { json, text }
    }
}

fn point(space: &MetricSpace, name: &str) -> Result<usize, CliError> {
    space.index_of(name).ok_or_else(|| CliError::UnknownPoint(name.to_owned()))
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn space_text(s: &MetricSpace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", s.labels().join(" "));
    for i in 0..s.len() {
        let row: Vec<String> = (0..s.len()).map(|j| s.d(i, j).to_string()).collect();
        let _ = writeln!(out, "{}: {}", s.labels()[i], row.join(" "));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub points: usize,
    pub components: usize,
}

pub fn validate(path: &Path, cfg: &RunConfig) -> Result<Output, CliError> {
    let s = load_space(path, cfg.tol)?;
    let k = s.components().len();
    let text = format!("valid, {}\n", plural(k, "component"));
    Ok(Output::new(&ValidateReport { valid: true, points: s.len(), components: k }, text))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentsReport {
    pub components: Vec<Vec<String>>,
}

pub fn components(path: &Path, cfg: &RunConfig) -> Result<Output, CliError> {
    let s = load_space(path, cfg.tol)?;
    let components: Vec<Vec<String>> = s
        .components()
        .blocks
        .iter()
        .map(|b| b.iter().map(|&i| s.labels()[i].clone()).collect())
        .collect();
    let mut text = String::new();
    for (i, c) in components.iter().enumerate() {
        let _ = writeln!(text, "{i}: {}", c.join(" "));
    }
    Ok(Output::new(&ComponentsReport { components }, text))
}

pub fn cutoff(path: &Path, r: ExtReal, cfg: &RunConfig) -> Result<Output, CliError> {
    let s = load_space(path, cfg.tol)?.cutoff(r)?;
    Ok(Output::new(&SpaceFile::from_space(&s), space_text(&s)))
}

pub fn scale(path: &Path, factor: f64, cfg: &RunConfig) -> Result<Output, CliError> {
    let s = load_space(path, cfg.tol)?.scale(factor)?;
    Ok(Output::new(&SpaceFile::from_space(&s), space_text(&s)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaDistReport {
    pub distance: ExtReal,
}

pub fn lambda_dist(path: &Path, x: &str, r: ExtReal, y: &str, s: ExtReal, cfg: &RunConfig) -> Result<Output, CliError> {
    let space = load_space(path, cfg.tol)?;
    let distance = lambda_dist_closed(&space, point(&space, x)?, r, point(&space, y)?, s)?;
    Ok(Output::new(&LambdaDistReport { distance }, format!("{distance}\n")))
}

fn values_text(labels: &[String], values: &[ExtReal]) -> String {
    let mut out = String::new();
    for (l, v) in labels.iter().zip(values) {
        let _ = writeln!(out, "{l}: {v}");
    }
    out
}

pub fn lipschitzise_cmd(path: &Path, epsilon: f64, cfg: &RunConfig) -> Result<Output, CliError> {
    let (space, values) = load_values(path, cfg.tol)?;
    let f = lipschitzise(&space, &values, epsilon)?;
    let text = values_text(space.labels(), f.values());
    Ok(Output::new(&FunctionFile::inline(&f), text))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cone {
    pub center: String,
    pub radius: ExtReal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub cones: Vec<Cone>,
}

pub fn decompose(path: &Path, cfg: &RunConfig) -> Result<Output, CliError> {
    let f = load_function(path, cfg.tol)?;
    let labels = f.space().labels();
    let cones: Vec<Cone> = lambda_decompose(&f)
        .into_iter()
        .map(|c| Cone { center: labels[c.center].clone(), radius: c.radius })
        .collect();
    let mut text = String::new();
    for c in &cones {
        let _ = writeln!(text, "Λ({}, {})", c.center, c.radius);
    }
    Ok(Output::new(&DecomposeReport { cones }, text))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearestReport {
    pub center: String,
    pub radius: ExtReal,
    pub distance: ExtReal,
}

pub fn nearest(path: &Path, cfg: &RunConfig) -> Result<Output, CliError> {
    let f = load_function(path, cfg.tol)?;
    let n = nearest_lambda(&f);
    let report = NearestReport { center: f.space().labels()[n.center].clone(), radius: n.radius, distance: n.distance };
    let text = format!("Λ({}, {}) at distance {}\n", report.center, report.radius, report.distance);
    Ok(Output::new(&report, text))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoughDistReport {
    pub distance: ExtReal,
    pub witness: MapPair,
    pub defect: IsometryDefect,
}

pub fn rough_dist(x: &Path, y: &Path, cfg: &RunConfig) -> Result<Output, CliError> {
    let (x, y) = (load_space(x, cfg.tol)?, load_space(y, cfg.tol)?);
    let (distance, witness) = parallel::rough_distance(&x, &y, cfg.budget, cfg.threads)?;
    let d = defect(&witness, &x, &y)?;
    let text = format!(
        "rough distance {distance}\nforward {:?}\nbackward {:?}\n",
        witness.forward, witness.backward
    );
    Ok(Output::new(&RoughDistReport { distance, witness, defect: d }, text))
}

pub fn lift_cmd(x: &Path, y: &Path, pair: &Path, cfg: &RunConfig) -> Result<Output, CliError> {
    let (xs, ys) = (load_space(x, cfg.tol)?, load_space(y, cfg.tol)?);
    let pair = load_pair(pair)?;
    let desc = OracleDescriptor::lifted(&xs, &ys, &pair);
    let oracle = desc.build(Path::new("."), cfg.tol)?;
    let text = format!("lifted oracle, declared epsilon {}\n", oracle.as_dyn().epsilon());
    Ok(Output::new(&desc, text))
}

/// A measured defect against the declared `ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub measured: ExtReal,
    pub bound: f64,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    fn new(w: &Worst, bound: f64, tol: f64) -> Self {
        Check {
            measured: w.measured,
            bound,
            ok: w.measured.le_tol(ExtReal::new(bound).expect("bound is finite"), tol),
            witness: w.witness.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlCheckReport {
    pub epsilon: f64,
    pub pool_x: usize,
    pub pool_y: usize,
    pub iso_embed: Check,
    pub join: Check,
    pub meet: Check,
    pub join_pair: Check,
    pub roundtrip: Check,
    pub zero: Check,
    pub infinity: Check,
    pub monotonicity: Check,
    pub ok: bool,
}

impl MlCheckReport {
    fn from_defects(r: &MlDefectReport, tol: f64) -> Self {
        let c = |w: &Worst| Check::new(w, r.epsilon, tol);
        let mut out = MlCheckReport {
            epsilon: r.epsilon,
            pool_x: r.pool_x,
            pool_y: r.pool_y,
            iso_embed: c(&r.iso_embed),
            join: c(&r.join_defect),
            meet: c(&r.meet_defect),
            join_pair: c(&r.join_pair_defect),
            roundtrip: c(&r.roundtrip),
            zero: c(&r.zero_defect),
            infinity: c(&r.infinity_defect),
            monotonicity: c(&r.monotonicity),
            ok: false,
        };
        out.ok = out.named().iter().all(|(_, c)| c.ok);
        out
    }

    pub fn named(&self) -> [(&'static str, &Check); 8] {
        [
            ("iso_embed", &self.iso_embed),
            ("join", &self.join),
            ("meet", &self.meet),
            ("join_pair", &self.join_pair),
            ("roundtrip", &self.roundtrip),
            ("zero", &self.zero),
            ("infinity", &self.infinity),
            ("monotonicity", &self.monotonicity),
        ]
    }
}

fn check_line(out: &mut String, name: &str, measured: ExtReal, bound: f64, ok: bool) {
    let _ = writeln!(out, "{name:<28} {measured:>12} <= {bound:<12} {}", if ok { "ok" } else { "FAIL" });
}

pub fn ml_check(path: &Path, cfg: &RunConfig) -> Result<Output, CliError> {
    let oracle = load_oracle(path, cfg.tol)?;
    let report = MlCheckReport::from_defects(&check_ml_defect(oracle.as_dyn(), &cfg.sampling()), cfg.tol);
    let mut text = format!("declared epsilon {}\n", report.epsilon);
    for (name, c) in report.named() {
        check_line(&mut text, name, c.measured, c.bound, c.ok);
    }
    Ok(Output::new(&report, text))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructReport {
    pub epsilon: f64,
    pub pair: MapPair,
    pub defect: BoundCheck,
}

pub fn reconstruct_cmd(path: &Path, cfg: &RunConfig) -> Result<Output, CliError> {
    let oracle = load_oracle(path, cfg.tol)?;
    let o = oracle.as_dyn();
    let pair = reconstruct(o)?;
    let d = defect(&pair, o.x(), o.y())?;
    let report = ReconstructReport { epsilon: o.epsilon(), defect: BoundCheck::new(d.overall, 88.0 * o.epsilon()), pair };
    let mut text = format!("forward {:?}\nbackward {:?}\n", report.pair.forward, report.pair.backward);
    check_line(&mut text, "defect", report.defect.measured, report.defect.bound, report.defect.ok);
    Ok(Output::new(&report, text))
}

pub fn verify_thm2(path: &Path, cfg: &RunConfig) -> Result<Output, CliError> {
    let oracle = load_oracle(path, cfg.tol)?;
    let o = oracle.as_dyn();
    let pair = reconstruct(o)?;
    let report: ReconstructionBounds = verify_theorem2(o, &pair, &cfg.sampling())?;
    let mut text = format!("declared epsilon {}, {} probes\n", report.epsilon, report.probes);
    for (name, c) in [
        ("isometry defect", &report.isometry_defect),
        ("kappa vs lift", &report.kappa_near_lift),
        ("cone residual", &report.cone_residual),
        ("cone residual, large r", &report.cone_residual_large_radius),
        ("cone image", &report.cone_image),
    ] {
        check_line(&mut text, name, c.measured, c.bound, c.ok);
    }
    let _ = writeln!(text, "kappa vs lift within 61 epsilon: {}", report.kappa_near_lift_within_61);
    Ok(Output::new(&report, text))
}

pub fn scaling_experiment(family: Family, levels: Vec<usize>, reference: usize, cfg: &RunConfig) -> Result<Output, CliError> {
    let exp = ScalingExperiment { samples: cfg.samples, seed: cfg.seed, tolerance: cfg.tol, ..ScalingExperiment::new(family, levels, reference) };
    exp.validate()?;
    let levels = parallel::map_ordered(&exp.levels, cfg.threads, |&n| run_level(&exp, n))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let report: ScalingReport = assemble_report(&exp, levels);
    let mut text = String::new();
    for l in &report.levels {
        check_line(&mut text, &format!("n = {} (eps_n = {})", l.n, l.epsilon), l.measured, l.bound, l.ok);
    }
    let _ = writeln!(
        text,
        "eps_n decreasing: {}, measured non-increasing: {}",
        report.epsilon_decreasing, report.measured_non_increasing
    );
    Ok(Output::new(&report, text))
}

/// Reads a radius: a nonnegative number or `inf`.
pub fn parse_ext(s: &str) -> Result<ExtReal, String> {
    if s == "inf" {
        return Ok(ExtReal::INF);
    }
    let v: f64 = s.parse().map_err(|_| format!("expected a number or \"inf\", got {s:?}"))?;
    ExtReal::new(v).map_err(|e| e.to_string())
}
