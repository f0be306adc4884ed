//! Scaling of spaces and functions, the Lipschitzized scaling `α_ℓ`, and
//! grid experiments where finer resolutions approach a reference space.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::Error;
use crate::ext::{ExtReal, TOL};
use crate::lambda::envelope;
use crate::lattice::LipFn;
use crate::metric::{MetricSpace, Space};
use crate::ml::{check_ml_defect, lift, SampleConfig};
use crate::rough::{defect, MapPair};

/// `α_ℓ(f) = ⋁_x Λ(x, ℓ·f(x))`; `α_0` is the constant `0`.
pub fn lipschitzized_scaling(f: &LipFn, ell: f64) -> Result<LipFn, Error> {
    if !(ell >= 0.0 && ell.is_finite()) {
        return Err(Error::InvalidParameter("scaling factor must be finite and nonnegative"));
    }
    if ell == 0.0 {
        return Ok(LipFn::zero(f.space().clone()));
    }
    let scaled: Vec<ExtReal> = f.values().iter().map(|v| v.scale(ell)).collect::<Result<_, _>>()?;
    envelope(f.space(), &scaled)
}

/// `f ↦ ℓ·f`, read as a function on `scale(X, ℓ)`.
pub fn rescale_lipfn(f: &LipFn, ell: f64) -> Result<LipFn, Error> {
    let space = Arc::new(f.space().scale(ell)?);
    let values = f.values().iter().map(|v| v.scale(ell)).collect::<Result<_, _>>()?;
    LipFn::new(space, values)
}

/// Grid families indexed by resolution `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Family {
    /// `n + 1` points at spacing `1/n` on `[0, 1]`.
    Path,
    /// Two disjoint copies of the path, at infinite distance.
    TwoPath,
}

impl Family {
    fn copies(self) -> usize {
        match self {
            Family::Path => 1,
            Family::TwoPath => 2,
        }
    }

    fn coords(n: usize) -> Vec<f64> {
        (0..=n).map(|i| i as f64 / n as f64).collect()
    }

    pub fn space(self, n: usize) -> Result<MetricSpace, Error> {
        if n == 0 {
            return Err(Error::InvalidParameter("resolution must be positive"));
        }
        let path = MetricSpace::line(&Self::coords(n))?;
        match self {
            Family::Path => Ok(path),
            Family::TwoPath => path.disjoint_union(&path),
        }
    }
}

/// Nearest point of `to` for each point of `from` (ties to the lower index).
fn round_coords(from: &[f64], to: &[f64]) -> Vec<usize> {
    from.iter()
        .map(|&a| {
            let mut best = 0;
            for (j, &b) in to.iter().enumerate() {
                if (a - b).abs() < (a - to[best]).abs() {
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Nearest-point rounding between the level-`n` and level-`reference`
/// spaces of `family`, as a pair `(level → reference, reference → level)`.
pub fn rounding_pair(family: Family, n: usize, reference: usize) -> MapPair {
    let (a, b) = (Family::coords(n), Family::coords(reference));
    let (fwd, bwd) = (round_coords(&a, &b), round_coords(&b, &a));
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for copy in 0..family.copies() {
        forward.extend(fwd.iter().map(|&j| j + copy * b.len()));
        backward.extend(bwd.iter().map(|&i| i + copy * a.len()));
    }
    MapPair::new(forward, backward)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingExperiment {
    pub family: Family,
    pub levels: Vec<usize>,
    pub reference: usize,
    pub samples: usize,
    pub seed: u64,
    /// Slack for the monotonicity flags.
    pub tolerance: f64,
}

impl ScalingExperiment {
    pub fn new(family: Family, levels: Vec<usize>, reference: usize) -> Self {
        ScalingExperiment { family, levels, reference, samples: 64, seed: 0, tolerance: TOL }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.levels.is_empty() {
            return Err(Error::InvalidParameter("at least one level is required"));
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("levels must be strictly increasing"));
        }
        if self.levels[0] == 0 {
            return Err(Error::InvalidParameter("resolution must be positive"));
        }
        if *self.levels.last().expect("nonempty") > self.reference {
            return Err(Error::InvalidParameter("reference must be at least the finest level"));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::InvalidParameter("tolerance must be nonnegative"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LevelReport {
    pub n: usize,
    pub points: usize,
    /// Defect of the rounding pair.
    pub epsilon: f64,
    pub bound: f64,
    /// Largest sampled ml defect of the lifted pair.
    pub measured: ExtReal,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingReport {
    pub family: Family,
    pub reference: usize,
    pub seed: u64,
    pub levels: Vec<LevelReport>,
    pub epsilon_decreasing: bool,
    pub measured_non_increasing: bool,
    pub all_ok: bool,
}

/// One level of an experiment; levels are independent of each other.
pub fn run_level(exp: &ScalingExperiment, n: usize) -> Result<LevelReport, Error> {
    let x: Space = Arc::new(exp.family.space(n)?);
    let y: Space = Arc::new(exp.family.space(exp.reference)?);
    let pair = rounding_pair(exp.family, n, exp.reference);
    let eps = defect(&pair, &x, &y)?
        .overall
        .finite()
        .ok_or(Error::Precondition("rounding pair has infinite defect"))?;
    let oracle = lift(pair, x.clone(), y)?;
    let cfg = SampleConfig { seed: exp.seed, samples: exp.samples, ..SampleConfig::default() };
    let measured = check_ml_defect(&oracle, &cfg).max_defect();
    let bound = 4.0 * eps;
    Ok(LevelReport {
        n,
        points: x.len(),
        epsilon: eps,
        bound,
        measured,
        ok: measured.le_tol(ExtReal::clamped(bound), TOL),
    })
}

/// Assembles per-level reports in level order.
pub fn assemble_report(exp: &ScalingExperiment, levels: Vec<LevelReport>) -> ScalingReport {
    let tau = ExtReal::clamped(exp.tolerance);
    let epsilon_decreasing = levels.windows(2).all(|w| w[1].epsilon < w[0].epsilon);
    let measured_non_increasing = levels.windows(2).all(|w| w[1].measured.le_tol(w[0].measured + tau, 0.0));
    let all_ok = levels.iter().all(|l| l.ok);
    ScalingReport {
        family: exp.family,
        reference: exp.reference,
        seed: exp.seed,
        levels,
        epsilon_decreasing,
        measured_non_increasing,
        all_ok,
    }
}

pub fn run_scaling_experiment(exp: &ScalingExperiment) -> Result<ScalingReport, Error> {
    exp.validate()?;
    let levels = exp.levels.iter().map(|&n| run_level(exp, n)).collect::<Result<Vec<_>, _>>()?;
    Ok(assemble_report(exp, levels))
}
