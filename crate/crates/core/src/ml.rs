//! ml-isomorphisms between Lipschitz lattices.
//!
//! An oracle is a pair `κ: Lip Y → Lip X`, `κ′: Lip X → Lip Y` with a
//! declared `ε`. This module lifts rough isometries to oracles
//! (`κ(f) = envelope(f∘η)`, declared `4ε`), measures the defining axioms on
//! seeded samples, and runs the inverse reconstruction of a rough isometry
//! from an oracle using cone probes.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::Error;
use crate::ext::{max_of, ExtReal, TOL};
use crate::lambda::{envelope, lambda_realize, lambda_value, nearest_lambda, NearestLambda};
use crate::lattice::{join, meet, same_space, sup_dist, LipFn};
use crate::metric::Space;
use crate::rough::{defect, IsometryDefect, MapPair};
use crate::sample::{lip_pool, random_radius, rng};

/// Black-box pair of lattice maps with a declared defect.
///
/// Implementations must be pure: equal inputs give equal outputs.
pub trait MlOracle {
    /// Target of `κ`, domain of `κ′`.
    fn x(&self) -> &Space;
    /// Domain of `κ`, target of `κ′`.
    fn y(&self) -> &Space;
    fn epsilon(&self) -> f64;
    /// `κ: Lip Y → Lip X`.
    fn kappa(&self, f: &LipFn) -> LipFn;
    /// `κ′: Lip X → Lip Y`.
    fn kappa_prime(&self, g: &LipFn) -> LipFn;
}

impl<T: MlOracle + ?Sized> MlOracle for &T {
    fn x(&self) -> &Space {
        (**self).x()
    }
    fn y(&self) -> &Space {
        (**self).y()
    }
    fn epsilon(&self) -> f64 {
        (**self).epsilon()
    }
    fn kappa(&self, f: &LipFn) -> LipFn {
        (**self).kappa(f)
    }
    fn kappa_prime(&self, g: &LipFn) -> LipFn {
        (**self).kappa_prime(g)
    }
}

impl<T: MlOracle + ?Sized> MlOracle for alloc::boxed::Box<T> {
    fn x(&self) -> &Space {
        (**self).x()
    }
    fn y(&self) -> &Space {
        (**self).y()
    }
    fn epsilon(&self) -> f64 {
        (**self).epsilon()
    }
    fn kappa(&self, f: &LipFn) -> LipFn {
        (**self).kappa(f)
    }
    fn kappa_prime(&self, g: &LipFn) -> LipFn {
        (**self).kappa_prime(g)
    }
}

/// Which half of an oracle a measurement concerns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    Kappa,
    KappaPrime,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Kappa => Side::KappaPrime,
            Side::KappaPrime => Side::Kappa,
        }
    }

    fn apply<O: MlOracle + ?Sized>(self, oracle: &O, f: &LipFn) -> LipFn {
        match self {
            Side::Kappa => oracle.kappa(f),
            Side::KappaPrime => oracle.kappa_prime(f),
        }
    }

    fn domain<O: MlOracle + ?Sized>(self, oracle: &O) -> Space {
        match self {
            Side::Kappa => oracle.y().clone(),
            Side::KappaPrime => oracle.x().clone(),
        }
    }

    fn codomain<O: MlOracle + ?Sized>(self, oracle: &O) -> Space {
        self.other().domain(oracle)
    }
}

/// Oracle from closures.
pub struct FnOracle<K, KP> {
    pub x: Space,
    pub y: Space,
    pub epsilon: f64,
    pub kappa: K,
    pub kappa_prime: KP,
}

impl<K, KP> MlOracle for FnOracle<K, KP>
where
    K: Fn(&LipFn) -> LipFn,
    KP: Fn(&LipFn) -> LipFn,
{
    fn x(&self) -> &Space {
        &self.x
    }
    fn y(&self) -> &Space {
        &self.y
    }
    fn epsilon(&self) -> f64 {
        self.epsilon
    }
    fn kappa(&self, f: &LipFn) -> LipFn {
        (self.kappa)(f)
    }
    fn kappa_prime(&self, g: &LipFn) -> LipFn {
        (self.kappa_prime)(g)
    }
}

/// `κ = κ′ = id` on one space.
#[derive(Clone, Debug)]
pub struct IdentityOracle(pub Space);

impl MlOracle for IdentityOracle {
    fn x(&self) -> &Space {
        &self.0
    }
    fn y(&self) -> &Space {
        &self.0
    }
    fn epsilon(&self) -> f64 {
        0.0
    }
    fn kappa(&self, f: &LipFn) -> LipFn {
        f.clone()
    }
    fn kappa_prime(&self, g: &LipFn) -> LipFn {
        g.clone()
    }
}

fn pull_back(f: &LipFn, map: &[usize]) -> Vec<ExtReal> {
    map.iter().map(|&t| f.at(t)).collect()
}

/// Oracle induced by a rough isometry: `κ(f) = envelope(f∘η)` and
/// `κ′(g) = envelope(g∘η′)`, declared `4·defect`.
#[derive(Clone, Debug)]
pub struct LiftedOracle {
    x: Space,
    y: Space,
    pair: MapPair,
    pair_defect: IsometryDefect,
    epsilon: f64,
}

/// Lifts a finite-defect pair `η: X → Y`, `η′: Y → X`.
pub fn lift(pair: MapPair, x: Space, y: Space) -> Result<LiftedOracle, Error> {
    let pair_defect = defect(&pair, &x, &y)?;
    let eps = pair_defect
        .overall
        .finite()
        .ok_or(Error::Precondition("pair defect must be finite"))?;
    Ok(LiftedOracle { x, y, pair, pair_defect, epsilon: 4.0 * eps })
}

impl LiftedOracle {
    pub fn pair(&self) -> &MapPair {
        &self.pair
    }

    pub fn pair_defect(&self) -> &IsometryDefect {
        &self.pair_defect
    }

    /// Adds a fixed nonnegative vector on `X` before the envelope in `κ`.
    pub fn perturbed(self, perturbation: Vec<f64>) -> Result<PerturbedLift, Error> {
        if perturbation.len() != self.x.len() {
            return Err(Error::LengthMismatch { expected: self.x.len(), found: perturbation.len() });
        }
        let shift = perturbation
            .iter()
            .map(|&v| ExtReal::new(v))
            .collect::<Result<Vec<_>, _>>()?;
        let c = perturbation.iter().copied().fold(0.0, f64::max);
        let base = self.pair_defect.overall.to_f64();
        Ok(PerturbedLift { epsilon: 4.0 * base + 4.0 * c, base: self, shift })
    }
}

impl MlOracle for LiftedOracle {
    fn x(&self) -> &Space {
        &self.x
    }
    fn y(&self) -> &Space {
        &self.y
    }
    fn epsilon(&self) -> f64 {
        self.epsilon
    }
    fn kappa(&self, f: &LipFn) -> LipFn {
        envelope(&self.x, &pull_back(f, &self.pair.forward)).expect("η is total")
    }
    fn kappa_prime(&self, g: &LipFn) -> LipFn {
        envelope(&self.y, &pull_back(g, &self.pair.backward)).expect("η′ is total")
    }
}

/// Lifted oracle whose `κ` is `f ↦ envelope(f∘η + p)` for a fixed
/// `p ∈ [0, c]^X`.
///
/// `κ` stays within `δ = ε + 2c` of `f ↦ f∘η`, which makes the pair a
/// `(2ε + 2δ)`- and in particular a `(4ε + 4c)`-ml-isomorphism; the latter
/// is declared.
#[derive(Clone, Debug)]
pub struct PerturbedLift {
    base: LiftedOracle,
    shift: Vec<ExtReal>,
    epsilon: f64,
}

impl PerturbedLift {
    pub fn base(&self) -> &LiftedOracle {
        &self.base
    }

    pub fn perturbation(&self) -> Vec<f64> {
        self.shift.iter().map(|v| v.to_f64()).collect()
    }

    /// Guaranteed nearness `δ` of `κ` to `f ↦ f∘η`.
    pub fn nearness_to_pullback(&self) -> f64 {
        self.base.pair_defect.overall.to_f64() + 2.0 * self.shift.iter().map(|v| v.to_f64()).fold(0.0, f64::max)
    }
}

impl MlOracle for PerturbedLift {
    fn x(&self) -> &Space {
        &self.base.x
    }
    fn y(&self) -> &Space {
        &self.base.y
    }
    fn epsilon(&self) -> f64 {
        self.epsilon
    }
    fn kappa(&self, f: &LipFn) -> LipFn {
        let raised: Vec<ExtReal> = pull_back(f, &self.base.pair.forward)
            .into_iter()
            .zip(&self.shift)
            .map(|(v, &s)| v + s)
            .collect();
        envelope(&self.base.x, &raised).expect("η is total")
    }
    fn kappa_prime(&self, g: &LipFn) -> LipFn {
        self.base.kappa_prime(g)
    }
}

/// `(κ, κ′)` where `κ′` picks a `δ`-preimage under `κ`.
pub struct Promoted<K, C> {
    x: Space,
    y: Space,
    kappa: K,
    chooser: C,
    hom_epsilon: f64,
    delta: f64,
}

impl<K, C> Promoted<K, C> {
    /// `2ε + 2δ`, the bound as stated for the promotion.
    pub fn stated_epsilon(&self) -> f64 {
        2.0 * self.hom_epsilon + 2.0 * self.delta
    }

    /// `2ε + 3δ`, the bound the argument actually establishes.
    pub fn proved_epsilon(&self) -> f64 {
        2.0 * self.hom_epsilon + 3.0 * self.delta
    }
}

impl<K, C> MlOracle for Promoted<K, C>
where
    K: Fn(&LipFn) -> LipFn,
    C: Fn(&LipFn) -> LipFn,
{
    fn x(&self) -> &Space {
        &self.x
    }
    fn y(&self) -> &Space {
        &self.y
    }
    fn epsilon(&self) -> f64 {
        self.proved_epsilon()
    }
    fn kappa(&self, f: &LipFn) -> LipFn {
        (self.kappa)(f)
    }
    fn kappa_prime(&self, g: &LipFn) -> LipFn {
        (self.chooser)(g)
    }
}

/// Completes a `δ`-surjective `ε`-ml-homomorphism `κ` to a pair, with
/// `κ′(g)` chosen by `chooser` so that `d_∞(κκ′g, g) ≤ δ`. The chooser is
/// checked on every probe; the declared defect is `2ε + 3δ`.
pub fn promote_surjective_homomorphism<K, C>(
    x: Space,
    y: Space,
    kappa: K,
    epsilon: f64,
    chooser: C,
    delta: f64,
    probes: &[LipFn],
) -> Result<Promoted<K, C>, Error>
where
    K: Fn(&LipFn) -> LipFn,
    C: Fn(&LipFn) -> LipFn,
{
    if !(epsilon >= 0.0 && delta >= 0.0) {
        return Err(Error::InvalidParameter("epsilon and delta must be nonnegative"));
    }
    for (index, g) in probes.iter().enumerate() {
        let back = kappa(&chooser(g));
        let distance = sup_dist(&back, g)?;
        if !distance.le_tol(ExtReal::clamped(delta), TOL) {
            return Err(Error::WitnessChooserFailed { index, distance: distance.to_f64(), delta });
        }
    }
    Ok(Promoted { x, y, kappa, chooser, hom_epsilon: epsilon, delta })
}

/// Inputs of a worst case. `samples` index the sample pool of the domain
/// of `side` (`Lip Y` for `κ`, `Lip X` for `κ′`); an empty list is the
/// empty family.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    pub side: Side,
    pub samples: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Worst {
    pub measured: ExtReal,
    pub witness: Option<Witness>,
}

impl Worst {
    fn offer(&mut self, value: ExtReal, side: Side, samples: &[usize]) {
        if self.witness.is_none() || value > self.measured {
            self.measured = value;
            self.witness = Some(Witness { side, samples: samples.to_vec() });
        }
    }
}

/// Sampling parameters for defect scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    /// Random functions per space, on top of the structured ones.
    pub samples: usize,
    /// Random families drawn for each family size.
    pub families_per_size: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { seed: 0, samples: 64, families_per_size: 16 }
    }
}

impl SampleConfig {
    pub fn with_seed(seed: u64) -> Self {
        SampleConfig { seed, ..Self::default() }
    }
}

/// Measured violations of the ml-isomorphism axioms.
///
/// `join_pair_defect` covers two-element joins only, including every pair
/// `(f, f ∨ g)` used for `monotonicity`, so that
/// `monotonicity ≤ join_pair_defect ≤ join_defect` holds on every sample.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MlDefectReport {
    pub epsilon: f64,
    pub pool_x: usize,
    pub pool_y: usize,
    pub iso_embed: Worst,
    pub join_defect: Worst,
    pub meet_defect: Worst,
    pub join_pair_defect: Worst,
    pub roundtrip: Worst,
    pub zero_defect: Worst,
    pub infinity_defect: Worst,
    pub monotonicity: Worst,
}

impl MlDefectReport {
    /// Largest measured axiom defect.
    pub fn max_defect(&self) -> ExtReal {
        max_of(
            [
                &self.iso_embed,
                &self.join_defect,
                &self.meet_defect,
                &self.join_pair_defect,
                &self.roundtrip,
                &self.zero_defect,
                &self.infinity_defect,
                &self.monotonicity,
            ]
            .iter()
            .map(|w| w.measured),
        )
    }
}

/// Sample pools for both sides, deterministic in the seed.
pub fn sample_pools<O: MlOracle + ?Sized>(oracle: &O, cfg: &SampleConfig) -> (Vec<LipFn>, Vec<LipFn>) {
    let mut r = rng(cfg.seed);
    let pool_y = lip_pool(&mut r, oracle.y(), cfg.samples);
    let pool_x = lip_pool(&mut r, oracle.x(), cfg.samples);
    (pool_x, pool_y)
}

/// Measures every axiom of an `ε`-ml-isomorphism on seeded samples:
/// isometric embedding, arbitrary joins and meets (sizes 0, 1, 2, 5 and
/// the point count), round trips, `κ(0)` and `κ(∞)`, and monotonicity.
pub fn check_ml_defect<O: MlOracle + ?Sized>(oracle: &O, cfg: &SampleConfig) -> MlDefectReport {
    let (pool_x, pool_y) = sample_pools(oracle, cfg);
    let mut r = rng(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut report = MlDefectReport {
        epsilon: oracle.epsilon(),
        pool_x: pool_x.len(),
        pool_y: pool_y.len(),
        iso_embed: Worst::default(),
        join_defect: Worst::default(),
        meet_defect: Worst::default(),
        join_pair_defect: Worst::default(),
        roundtrip: Worst::default(),
        zero_defect: Worst::default(),
        infinity_defect: Worst::default(),
        monotonicity: Worst::default(),
    };
    let images_y: Vec<LipFn> = pool_y.iter().map(|f| oracle.kappa(f)).collect();
    let images_x: Vec<LipFn> = pool_x.iter().map(|g| oracle.kappa_prime(g)).collect();
    measure_side(oracle, Side::Kappa, &pool_y, &images_y, &mut r, cfg, &mut report);
    measure_side(oracle, Side::KappaPrime, &pool_x, &images_x, &mut r, cfg, &mut report);
    report
}

fn dist(f: &LipFn, g: &LipFn) -> ExtReal {
    sup_dist(f, g).expect("oracle outputs live on the declared spaces")
}

fn measure_side<O: MlOracle + ?Sized, R: Rng>(
    oracle: &O,
    side: Side,
    pool: &[LipFn],
    images: &[LipFn],
    rng: &mut R,
    cfg: &SampleConfig,
    report: &mut MlDefectReport,
) {
    let dom = side.domain(oracle);
    let cod = side.codomain(oracle);
    for (f, img) in pool.iter().zip(images) {
        assert!(same_space(f.space(), &dom) && same_space(img.space(), &cod), "oracle output on wrong space");
    }

    for i in 0..pool.len() {
        for j in (i + 1)..pool.len() {
            let d = dist(&pool[i], &pool[j]).dist(dist(&images[i], &images[j]));
            report.iso_embed.offer(d, side, &[i, j]);
        }
    }

    // empty families: ⋁∅ = 0 and ⋀∅ = ∞
    let zero = dist(&side.apply(oracle, &LipFn::zero(dom.clone())), &LipFn::zero(cod.clone()));
    report.zero_defect.offer(zero, side, &[]);
    report.join_defect.offer(zero, side, &[]);
    let inf = dist(&side.apply(oracle, &LipFn::infinite(dom.clone())), &LipFn::infinite(cod.clone()));
    report.infinity_defect.offer(inf, side, &[]);
    report.meet_defect.offer(inf, side, &[]);

    let mut sizes = vec![1, 2, 5, dom.len()];
    sizes.sort_unstable();
    sizes.dedup();
    for &k in &sizes {
        for _ in 0..cfg.families_per_size {
            let idx: Vec<usize> = (0..k).map(|_| rng.random_range(0..pool.len())).collect();
            let members = idx.iter().map(|&i| &pool[i]);
            let imgs = idx.iter().map(|&i| &images[i]);
            let j = dist(
                &side.apply(oracle, &join(&dom, members.clone()).expect("same space")),
                &join(&cod, imgs.clone()).expect("same space"),
            );
            report.join_defect.offer(j, side, &idx);
            if k == 2 {
                report.join_pair_defect.offer(j, side, &idx);
            }
            let m = dist(
                &side.apply(oracle, &meet(&dom, members).expect("same space")),
                &meet(&cod, imgs).expect("same space"),
            );
            report.meet_defect.offer(m, side, &idx);
        }
    }

    // f ≤ f ∨ g: monotonicity defect max(κf − κ(f∨g)) and the join of (f, f∨g)
    for _ in 0..2 * cfg.families_per_size {
        let (a, b) = (rng.random_range(0..pool.len()), rng.random_range(0..pool.len()));
        let upper = pool[a].join(&pool[b]).expect("same space");
        let k_upper = side.apply(oracle, &upper);
        let k_lower = &images[a];
        let mono = max_of(k_lower.values().iter().zip(k_upper.values()).map(|(l, u)| l.monus(*u)));
        report.monotonicity.offer(mono, side, &[a, b]);
        let j = dist(&k_upper, &k_lower.join(&k_upper).expect("same space"));
        report.join_pair_defect.offer(j, side, &[a, b]);
        report.join_defect.offer(j, side, &[a, b]);
    }

    for (i, img) in images.iter().enumerate() {
        let back = side.other().apply(oracle, img);
        report.roundtrip.offer(dist(&back, &pool[i]), side, &[i]);
    }
}

fn probe_side<O: MlOracle + ?Sized>(oracle: &O, side: Side, point: usize, radius: ExtReal) -> Result<NearestLambda, Error> {
    let cone = lambda_realize(&side.domain(oracle), point, radius)?;
    Ok(nearest_lambda(&side.apply(oracle, &cone)))
}

/// Nearest cone to `κ′(Λ(x, r))` in `Lip Y`, for finite `r`.
pub fn lambda_image<O: MlOracle + ?Sized>(oracle: &O, x: usize, r: ExtReal) -> Result<NearestLambda, Error> {
    if r.is_inf() {
        return Err(Error::Precondition("probe radius must be finite"));
    }
    probe_side(oracle, Side::KappaPrime, x, r)
}

/// Probe radius used by [`reconstruct`]: `22ε`, or `1` when `ε = 0`.
pub fn probe_radius(epsilon: f64) -> f64 {
    if epsilon > 0.0 {
        22.0 * epsilon
    } else {
        1.0
    }
}

fn reconstruct_map<O: MlOracle + ?Sized>(oracle: &O, side: Side) -> Result<Vec<usize>, Error> {
    let eps = oracle.epsilon();
    let radius = ExtReal::clamped(probe_radius(eps));
    let allowed = 6.0 * eps;
    (0..side.domain(oracle).len())
        .map(|point| {
            let hit = probe_side(oracle, side, point, radius)?;
            if hit.radius.is_inf() || !hit.distance.le_tol(ExtReal::clamped(allowed), TOL) {
                return Err(Error::ProbeFailed { point, residual: hit.distance.to_f64(), bound: allowed });
            }
            Ok(hit.center)
        })
        .collect()
}

/// Rough isometry recovered from an oracle: `η(x)` is the centre of the
/// cone nearest to `κ′(Λ(x, 22ε))`, and `η′` comes from `κ` the same way.
pub fn reconstruct<O: MlOracle + ?Sized>(oracle: &O) -> Result<MapPair, Error> {
    Ok(MapPair::new(
        reconstruct_map(oracle, Side::KappaPrime)?,
        reconstruct_map(oracle, Side::Kappa)?,
    ))
}

/// A measured quantity next to the bound it is held to.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundCheck {
    pub measured: ExtReal,
    pub bound: f64,
    pub ok: bool,
}

impl BoundCheck {
    pub fn new(measured: ExtReal, bound: f64) -> Self {
        BoundCheck { measured, bound, ok: measured.le_tol(ExtReal::clamped(bound), TOL) }
    }
}

/// Quantitative content of the reconstruction: isometry defect (`88ε`),
/// nearness of `κ` to the lift of the reconstructed pair (`62ε`, and
/// whether `61ε` also held), per-cone residuals `Λ(ηx, r)` vs `κ′Λ(x, r)`
/// (`59ε`, and `43ε` for `38ε ≤ r < ∞`), and single-cone images (`6ε`).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReconstructionBounds {
    pub epsilon: f64,
    pub pair: MapPair,
    pub isometry_defect: BoundCheck,
    pub kappa_near_lift: BoundCheck,
    pub kappa_near_lift_within_61: bool,
    pub cone_residual: BoundCheck,
    pub cone_residual_large_radius: BoundCheck,
    pub cone_image: BoundCheck,
    pub probes: usize,
}

impl ReconstructionBounds {
    pub fn all_ok(&self) -> bool {
        self.isometry_defect.ok
            && self.kappa_near_lift.ok
            && self.cone_residual.ok
            && self.cone_residual_large_radius.ok
            && self.cone_image.ok
    }
}

/// Radii probed by [`verify_theorem2`]: multiples of `ε` around the case
/// thresholds, scale-relative radii, seeded random radii, and `∞`.
fn probe_radii<R: Rng>(rng: &mut R, eps: f64, diameter: f64) -> Vec<ExtReal> {
    let mut radii: Vec<ExtReal> = [0.0, 1.0, 6.0, 22.0, 30.0, 37.5, 38.0, 43.0, 60.0, 100.0]
        .iter()
        .map(|k| ExtReal::clamped(k * eps))
        .collect();
    for r in [0.5, 1.0, diameter / 2.0, diameter, diameter + 1.0] {
        radii.push(ExtReal::clamped(r));
    }
    for _ in 0..4 {
        radii.push(random_radius(rng, 2.0 * diameter + 2.0));
    }
    radii.push(ExtReal::INF);
    radii.sort();
    radii.dedup();
    radii
}

pub fn verify_theorem2<O: MlOracle + ?Sized>(
    oracle: &O,
    pair: &MapPair,
    cfg: &SampleConfig,
) -> Result<ReconstructionBounds, Error> {
    let eps = oracle.epsilon();
    let (x, y) = (oracle.x(), oracle.y());
    let pair_defect = defect(pair, x, y)?;
    let (_, pool_y) = sample_pools(oracle, cfg);

    let mut near = ExtReal::ZERO;
    for f in &pool_y {
        let lifted = envelope(x, &pull_back(f, &pair.forward))?;
        near = near.max(sup_dist(&oracle.kappa(f), &lifted)?);
    }

    let mut r = rng(cfg.seed ^ 0x5851_f42d_4c95_7f2d);
    let diameter = x.max_finite_distance().max(y.max_finite_distance());
    let radii = probe_radii(&mut r, eps, diameter);
    let large = ExtReal::clamped(38.0 * eps);
    let (mut residual, mut residual_large, mut image) = (ExtReal::ZERO, ExtReal::ZERO, ExtReal::ZERO);
    let mut probes = 0;
    for (side, map) in [(Side::KappaPrime, &pair.forward), (Side::Kappa, &pair.backward)] {
        let dom = side.domain(oracle);
        let cod = side.codomain(oracle);
        for (point, &target) in map.iter().enumerate() {
            for &radius in &radii {
                let out = side.apply(oracle, &lambda_realize(&dom, point, radius)?);
                let res = sup_dist(&lambda_realize(&cod, target, radius)?, &out)?;
                residual = residual.max(res);
                if radius.is_finite() {
                    if radius >= large {
                        residual_large = residual_large.max(res);
                    }
                    image = image.max(nearest_lambda(&out).distance);
                }
                probes += 1;
            }
        }
    }

    let near_check = BoundCheck::new(near, 62.0 * eps);
    Ok(ReconstructionBounds {
        epsilon: eps,
        pair: pair.clone(),
        isometry_defect: BoundCheck::new(pair_defect.overall, 88.0 * eps),
        kappa_near_lift: near_check,
        kappa_near_lift_within_61: near.le_tol(ExtReal::clamped(61.0 * eps), TOL),
        cone_residual: BoundCheck::new(residual, 59.0 * eps),
        cone_residual_large_radius: BoundCheck::new(residual_large, 43.0 * eps),
        cone_image: BoundCheck::new(image, 6.0 * eps),
        probes,
    })
}

/// `d_∞(⋁_x Λ(x, f(ηx)), ⋁_y Λ(η′y, f(y)))` on `X`, for `f ∈ Lip Y`.
pub fn lambda_exchange_defect(
    pair: &MapPair,
    x: &Space,
    y: &Space,
    f: &LipFn,
) -> Result<ExtReal, Error> {
    pair.check(x, y)?;
    if !same_space(f.space(), y) {
        return Err(Error::SpaceMismatch);
    }
    let left = envelope(x, &pull_back(f, &pair.forward))?;
    let right: Vec<ExtReal> = (0..x.len())
        .map(|z| max_of((0..y.len()).map(|t| lambda_value(x, pair.backward[t], f.at(t), z))))
        .collect();
    Ok(crate::lattice::sup_dist_values(left.values(), &right))
}
