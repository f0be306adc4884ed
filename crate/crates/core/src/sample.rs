//! Seeded generators for spaces, Lipschitz functions and map pairs.
//!
//! Coordinates, weights and radii are small dyadic rationals, so that sums
//! and differences stay exact in `f64` and lattice identities can be
//! checked with zero tolerance.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::ext::ExtReal;
use crate::lambda::{envelope, lambda_realize};
use crate::lattice::{join, LipFn};
use crate::metric::{MetricSpace, Space};
use crate::rough::{defect, MapPair};

/// The generator used everywhere a seed is accepted.
pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Denominator of every generated dyadic value.
pub const DYADIC: f64 = 8.0;

fn dyadic<R: Rng>(rng: &mut R, max_units: u32) -> f64 {
    rng.random_range(0..=max_units) as f64 / DYADIC
}

/// Parameters a space is built from; kept so the space can be jittered.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceShape {
    Line(Vec<f64>),
    Plane(Vec<(f64, f64)>),
    Graph { n: usize, edges: Vec<(usize, usize, f64)> },
    Union(Box<SpaceShape>, Box<SpaceShape>),
}

impl SpaceShape {
    pub fn len(&self) -> usize {
        match self {
            SpaceShape::Line(c) => c.len(),
            SpaceShape::Plane(p) => p.len(),
            SpaceShape::Graph { n, .. } => *n,
            SpaceShape::Union(a, b) => a.len() + b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn build(&self) -> Result<MetricSpace, Error> {
        match self {
            SpaceShape::Line(c) => MetricSpace::line(c),
            SpaceShape::Plane(p) => MetricSpace::plane_l1(p),
            SpaceShape::Graph { n, edges } => MetricSpace::graph(*n, edges),
            SpaceShape::Union(a, b) => a.build()?.disjoint_union(&b.build()?),
        }
    }

    /// Moves coordinates (or reweights edges) by at most `amount` dyadic
    /// units. Point order is preserved; the result may fail to build if
    /// points collide, in which case the caller retries.
    pub fn jitter<R: Rng>(&self, rng: &mut R, amount: u32) -> SpaceShape {
        let shift = |rng: &mut R| {
            let k = rng.random_range(0..=2 * amount) as f64 - amount as f64;
            k / DYADIC
        };
        match self {
            SpaceShape::Line(c) => SpaceShape::Line(c.iter().map(|v| v + shift(rng)).collect()),
            SpaceShape::Plane(p) => {
                SpaceShape::Plane(p.iter().map(|&(a, b)| (a + shift(rng), b + shift(rng))).collect())
            }
            SpaceShape::Graph { n, edges } => SpaceShape::Graph {
                n: *n,
                edges: edges
                    .iter()
                    .map(|&(a, b, w)| (a, b, (w + shift(rng)).max(1.0 / DYADIC)))
                    .collect(),
            },
            SpaceShape::Union(a, b) => {
                SpaceShape::Union(Box::new(a.jitter(rng, amount)), Box::new(b.jitter(rng, amount)))
            }
        }
    }
}

fn distinct_dyadics<R: Rng>(rng: &mut R, n: usize, max_units: u32) -> Vec<f64> {
    let mut units: Vec<u32> = (0..=max_units).collect();
    units.shuffle(rng);
    units.truncate(n);
    units.into_iter().map(|u| u as f64 / DYADIC).collect()
}

/// A connected random shape with `n ≥ 1` points.
pub fn random_connected_shape<R: Rng>(rng: &mut R, n: usize) -> SpaceShape {
    match rng.random_range(0..3) {
        0 => SpaceShape::Line(distinct_dyadics(rng, n, 8 * n as u32 + 8)),
        1 => {
            let mut pts: Vec<(f64, f64)> = Vec::new();
            while pts.len() < n {
                let p = (dyadic(rng, 24), dyadic(rng, 24));
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            SpaceShape::Plane(pts)
        }
        _ => {
            // random spanning tree plus a few chords
            let mut edges = Vec::new();
            for v in 1..n {
                let u = rng.random_range(0..v);
                edges.push((u, v, 1.0 + dyadic(rng, 16)));
            }
            for _ in 0..n / 2 {
                let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
                if a != b {
                    edges.push((a, b, 1.0 + dyadic(rng, 16)));
                }
            }
            SpaceShape::Graph { n, edges }
        }
    }
}

/// Random shape with `1..=max_points` points; about one in four has two
/// components.
pub fn random_shape<R: Rng>(rng: &mut R, max_points: usize) -> SpaceShape {
    let n = rng.random_range(1..=max_points.max(1));
    if n >= 2 && rng.random_bool(0.25) {
        let k = rng.random_range(1..n);
        SpaceShape::Union(
            Box::new(random_connected_shape(rng, k)),
            Box::new(random_connected_shape(rng, n - k)),
        )
    } else {
        random_connected_shape(rng, n)
    }
}

pub fn random_space<R: Rng>(rng: &mut R, max_points: usize) -> MetricSpace {
    random_shape(rng, max_points)
        .build()
        .expect("generated shapes are valid metric spaces")
}

/// Random dyadic radius in `[0, scale]`.
pub fn random_radius<R: Rng>(rng: &mut R, scale: f64) -> ExtReal {
    let units = (scale * DYADIC) as u32 + 1;
    ExtReal::clamped(dyadic(rng, units))
}

/// Join of a few random cones, sometimes raised to `∞` on one component.
pub fn random_lipfn<R: Rng>(rng: &mut R, space: &Space) -> LipFn {
    let n = space.len();
    let scale = space.max_finite_distance() + 2.0;
    let cones = rng.random_range(1..=n.min(4));
    let mut values = vec![ExtReal::ZERO; n];
    for _ in 0..cones {
        let x = rng.random_range(0..n);
        values[x] = values[x].max(random_radius(rng, scale));
    }
    let mut f = envelope(space, &values).expect("length matches");
    if rng.random_bool(1.0 / 6.0) {
        let x = rng.random_range(0..n);
        let inf = lambda_realize(space, x, ExtReal::INF).expect("index in range");
        f = join(space, [&f, &inf]).expect("same space");
    }
    f
}

/// Sample of `Lip X`: zero, `∞`, constants, `∞` on each component, one
/// cone per point, then `random` seeded random functions.
pub fn lip_pool<R: Rng>(rng: &mut R, space: &Space, random: usize) -> Vec<LipFn> {
    let scale = space.max_finite_distance() + 2.0;
    let mut pool = vec![
        LipFn::zero(space.clone()),
        LipFn::infinite(space.clone()),
        LipFn::constant(space.clone(), ExtReal::clamped(0.5)),
        LipFn::constant(space.clone(), ExtReal::clamped(scale)),
    ];
    for block in space.components().blocks {
        pool.push(lambda_realize(space, block[0], ExtReal::INF).expect("index in range"));
    }
    for x in 0..space.len() {
        let r = random_radius(rng, scale);
        pool.push(lambda_realize(space, x, r).expect("index in range"));
    }
    for _ in 0..random {
        pool.push(random_lipfn(rng, space));
    }
    pool
}

pub fn random_map<R: Rng>(rng: &mut R, domain: usize, target: usize) -> Vec<usize> {
    (0..domain).map(|_| rng.random_range(0..target)).collect()
}

/// Nearest-point map from `domain` into `target` restricted to `image`
/// (lowest index on ties).
fn nearest_in(domain: &MetricSpace, image: &[usize], p: usize) -> usize {
    let mut best = image[0];
    for &q in image {
        if domain.d(p, q) < domain.d(p, best) {
            best = q;
        }
    }
    best
}

/// A test instance: spaces `X`, `Y` and a finite-defect pair between them.
#[derive(Clone, Debug)]
pub struct Instance {
    pub x: MetricSpace,
    pub y: MetricSpace,
    pub pair: MapPair,
}

/// Random instance with finite defect, mixing near-isometries (jittered
/// copies, possibly relabelled), subspace inclusions with nearest-point
/// retractions, and arbitrary maps between connected spaces.
pub fn random_instance<R: Rng>(rng: &mut R, max_points: usize) -> Instance {
    loop {
        if let Some(inst) = try_instance(rng, max_points) {
            let d = defect(&inst.pair, &inst.x, &inst.y).expect("pair in range");
            if d.overall.is_finite() {
                return inst;
            }
        }
    }
}

fn try_instance<R: Rng>(rng: &mut R, max_points: usize) -> Option<Instance> {
    match rng.random_range(0..4) {
        0 | 1 => {
            let shape = random_shape(rng, max_points);
            let x = shape.build().ok()?;
            let y = shape.jitter(rng, 2).build().ok()?;
            let n = x.len();
            let mut perm: Vec<usize> = (0..n).collect();
            if rng.random_bool(0.5) {
                perm.shuffle(rng);
            }
            // relabel Y by `perm`: point i of X corresponds to point perm[i]
            let mut rows = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    rows[perm[i]][perm[j]] = y.d(i, j).to_f64();
                }
            }
            let y = crate::metric::validate_metric(y.labels().to_vec(), &rows).ok()?;
            let mut inv = vec![0; n];
            for (i, &p) in perm.iter().enumerate() {
                inv[p] = i;
            }
            Some(Instance { x, y, pair: MapPair::new(perm, inv) })
        }
        2 => {
            let y = random_space(rng, max_points);
            let blocks = y.components().blocks;
            let mut keep: Vec<usize> = blocks.iter().map(|b| b[rng.random_range(0..b.len())]).collect();
            for p in 0..y.len() {
                if !keep.contains(&p) && rng.random_bool(0.5) {
                    keep.push(p);
                }
            }
            keep.sort_unstable();
            let rows: Vec<Vec<f64>> = keep
                .iter()
                .map(|&a| keep.iter().map(|&b| y.d(a, b).to_f64()).collect())
                .collect();
            let labels = keep.iter().map(|&a| y.labels()[a].clone()).collect();
            let x = crate::metric::validate_metric(labels, &rows).ok()?;
            let backward = (0..y.len())
                .map(|p| {
                    let q = nearest_in(&y, &keep, p);
                    keep.iter().position(|&k| k == q).expect("q is kept")
                })
                .collect();
            Some(Instance { x, y, pair: MapPair::new(keep, backward) })
        }
        _ => {
            let nx = rng.random_range(1..=max_points);
            let ny = rng.random_range(1..=max_points);
            let x = random_connected_shape(rng, nx).build().ok()?;
            let y = random_connected_shape(rng, ny).build().ok()?;
            let pair = MapPair::new(random_map(rng, nx, ny), random_map(rng, ny, nx));
            Some(Instance { x, y, pair })
        }
    }
}

/// A space with at least one nontrivial isometry: a line symmetric about
/// its midpoint, an equal-weight cycle, or two copies of one shape.
pub fn symmetric_space<R: Rng>(rng: &mut R, max_points: usize) -> MetricSpace {
    loop {
        let built = match rng.random_range(0..3) {
            0 => {
                let half = rng.random_range(1..=(max_points / 2).max(1));
                let mut c = distinct_dyadics(rng, half, 24);
                for v in c.iter_mut() {
                    *v += 1.0 / DYADIC;
                }
                let mut coords: Vec<f64> = c.iter().map(|v| -v).collect();
                coords.extend(c);
                if max_points % 2 == 1 && coords.len() < max_points && rng.random_bool(0.5) {
                    coords.push(0.0);
                }
                MetricSpace::line(&coords)
            }
            1 => {
                let n = rng.random_range(3..=max_points.max(3));
                let w = 1.0 + dyadic(rng, 8);
                let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, w)).collect();
                MetricSpace::graph(n, &edges)
            }
            _ => {
                let k = rng.random_range(1..=(max_points / 2).max(1));
                let shape = random_connected_shape(rng, k);
                SpaceShape::Union(Box::new(shape.clone()), Box::new(shape)).build()
            }
        };
        if let Ok(space) = built {
            return space;
        }
    }
}
