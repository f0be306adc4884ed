//! Λ-functions (cones) `Λ(x, r)(y) = (r − d(x,y)) ∨ 0` and the
//! constructions built from them: decomposition, the Lipschitz envelope,
//! and recognition of single cones.

use alloc::vec::Vec;

use crate::error::Error;
use crate::ext::{max_of, ExtReal, TOL};
use crate::lattice::{check_len, join, sup_dist, sup_dist_values, LipFn};
use crate::metric::{MetricSpace, Space};

/// The cone of height `radius` centred at point `center`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LambdaFn {
    pub center: usize,
    pub radius: ExtReal,
}

impl LambdaFn {
    pub fn new(center: usize, radius: ExtReal) -> Self {
        LambdaFn { center, radius }
    }

    pub fn is_finite(&self) -> bool {
        self.radius.is_finite()
    }

    pub fn realize(&self, space: &Space) -> Result<LipFn, Error> {
        lambda_realize(space, self.center, self.radius)
    }
}

/// `Λ(x,r)(y)`. Points at infinite distance get `0`; `Λ(x,∞)` is `∞` on
/// the component of `x`.
#[inline]
pub fn lambda_value(space: &MetricSpace, center: usize, radius: ExtReal, y: usize) -> ExtReal {
    radius.monus(space.d(center, y))
}

fn cone_values(space: &MetricSpace, center: usize, radius: ExtReal) -> Vec<ExtReal> {
    (0..space.len()).map(|y| lambda_value(space, center, radius, y)).collect()
}

pub fn lambda_realize(space: &Space, center: usize, radius: ExtReal) -> Result<LipFn, Error> {
    space.check_index(center)?;
    Ok(LipFn::from_raw(space.clone(), cone_values(space, center, radius)))
}

/// Closed form of `d_∞(Λ(x,r), Λ(y,s))`:
///
/// * `r ∨ s` if `d(x,y) ≥ r ∧ s`,
/// * `|r − s| + d(x,y)` if `d(x,y) ≤ r ∧ s < ∞`,
/// * `0` if `d(x,y) < r ∧ s = ∞`.
pub fn lambda_dist_closed(
    space: &MetricSpace,
    x: usize,
    r: ExtReal,
    y: usize,
    s: ExtReal,
) -> Result<ExtReal, Error> {
    space.check_index(x)?;
    space.check_index(y)?;
    let d = space.d(x, y);
    let (lo, hi) = (r.min(s), r.max(s));
    Ok(if d >= lo {
        hi
    } else if lo.is_finite() {
        r.dist(s) + d
    } else {
        ExtReal::ZERO
    })
}

/// `{Λ(x, f(x)) : x ∈ X}`, whose join is `f` again.
pub fn lambda_decompose(f: &LipFn) -> Vec<LambdaFn> {
    f.values()
        .iter()
        .enumerate()
        .map(|(x, &r)| LambdaFn::new(x, r))
        .collect()
}

/// Join of the realizations of a cone family.
pub fn join_cones(space: &Space, cones: &[LambdaFn]) -> Result<LipFn, Error> {
    let realized = cones
        .iter()
        .map(|c| c.realize(space))
        .collect::<Result<Vec<_>, _>>()?;
    join(space, &realized)
}

/// `⋁_x Λ(x, g(x))` without any precondition on `g`. The result is always
/// 1-Lipschitz and dominates `g`.
pub fn envelope(space: &Space, values: &[ExtReal]) -> Result<LipFn, Error> {
    check_len(space, values.len())?;
    let n = space.len();
    let out = (0..n)
        .map(|y| max_of((0..n).map(|x| lambda_value(space, x, values[x], y))))
        .collect();
    Ok(LipFn::from_raw(space.clone(), out))
}

/// Lipschitz envelope of a `(1, ε)`-Lipschitz `g`; the result lies within
/// `ε` of `g` and above it.
pub fn lipschitzise(space: &Space, values: &[ExtReal], epsilon: f64) -> Result<LipFn, Error> {
    check_len(space, values.len())?;
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParameter("epsilon must be nonnegative"));
    }
    if !crate::lattice::is_k_eps_lipschitz_tol(space, values, 1.0, epsilon, TOL) {
        let (x, y) = first_violation(space, values, epsilon);
        return Err(Error::NotEpsLipschitz { epsilon, x, y });
    }
    envelope(space, values)
}

fn first_violation(space: &MetricSpace, values: &[ExtReal], eps: f64) -> (usize, usize) {
    let slack = ExtReal::clamped(eps);
    for x in 0..values.len() {
        for y in (x + 1)..values.len() {
            if !values[x].dist(values[y]).le_tol(space.d(x, y) + slack, TOL) {
                return (x, y);
            }
        }
    }
    (0, 0)
}

/// Best single-cone approximation of a function.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NearestLambda {
    pub center: usize,
    pub radius: ExtReal,
    pub distance: ExtReal,
}

/// Value of `s ↦ d_∞(Λ(y,s), g)`.
fn cone_objective(space: &MetricSpace, g: &[ExtReal], center: usize, radius: ExtReal) -> ExtReal {
    max_of((0..g.len()).map(|z| lambda_value(space, center, radius, z).dist(g[z])))
}

/// Candidate radii for centre `y`: every breakpoint of the per-point terms
/// `s ↦ |(s − d_z)∨0 − g_z|` and every pairwise crossing of their linear
/// pieces. The objective is piecewise linear, so its minimum over `s ≥ 0`
/// is attained at one of these.
fn candidate_radii(space: &MetricSpace, g: &[ExtReal], y: usize) -> Vec<f64> {
    let terms: Vec<(f64, f64)> = (0..g.len())
        .filter_map(|z| Some((space.d(y, z).finite()?, g[z].finite()?)))
        .collect();
    let mut out = Vec::with_capacity(1 + 2 * terms.len() + 3 * terms.len() * terms.len());
    out.push(0.0);
    for &(d, v) in &terms {
        out.push(d);
        out.push(d + v);
        for &(d2, v2) in &terms {
            out.push(d + v - v2);
            out.push(d + v + v2);
            out.push((d + v + d2 + v2) / 2.0);
        }
    }
    out.retain(|s| *s >= 0.0);
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Cone `Λ(y, s)` minimizing `d_∞(Λ(y,s), g)` over all centres and radii.
///
/// Ties (within [`TOL`]) go to the lowest centre index, then the smallest
/// radius. Centres where `g` is `∞` only pair with radius `∞`.
pub fn nearest_lambda(g: &LipFn) -> NearestLambda {
    let space = g.space();
    let values = g.values();
    let mut best: Option<NearestLambda> = None;
    let mut offer = |center: usize, radius: ExtReal, distance: ExtReal| {
        let better = match best {
            None => true,
            Some(b) => match (distance.finite(), b.distance.finite()) {
                (Some(a), Some(c)) => a < c - TOL,
                (Some(_), None) => true,
                _ => false,
            },
        };
        if better {
            best = Some(NearestLambda { center, radius, distance });
        }
    };
    for y in 0..space.len() {
        if values[y].is_inf() {
            offer(y, ExtReal::INF, cone_objective(space, values, y, ExtReal::INF));
            continue;
        }
        for s in candidate_radii(space, values, y) {
            let r = ExtReal::clamped(s);
            offer(y, r, cone_objective(space, values, y, r));
        }
    }
    best.expect("spaces are nonempty")
}

/// If `f` is (within `tol`) a finite cone, its centre and radius. The centre
/// is the lowest-index maximum point that works.
pub fn is_finite_lambda(f: &LipFn, tol: f64) -> Option<(usize, ExtReal)> {
    let values = f.values();
    if values.iter().any(|v| v.is_inf()) {
        return None;
    }
    let top = f.sup().finite()?;
    let space = f.space();
    (0..values.len())
        .filter(|&x| values[x].finite().is_some_and(|v| v >= top - tol))
        .find(|&x| {
            let cone = cone_values(space, x, values[x]);
            sup_dist_values(&cone, values).le_tol(ExtReal::ZERO, tol)
        })
        .map(|x| (x, values[x]))
}

/// For a finite cone `p` within `R` of `⋁ family`, the index of the member
/// closest to `p` provided it is within `R + δ`.
///
/// `None` means the member search failed, which a finite cone never allows
/// for a nonempty family.
pub fn lambda_irreducibility_witness(
    space: &Space,
    p: LambdaFn,
    family: &[LipFn],
    radius: ExtReal,
    delta: f64,
) -> Result<Option<usize>, Error> {
    if !p.is_finite() {
        return Err(Error::Precondition("cone must be finite"));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("delta must be positive"));
    }
    let p = p.realize(space)?;
    let joined = join(space, family)?;
    if !sup_dist(&p, &joined)?.le_tol(radius, TOL) {
        return Err(Error::Precondition("family join is farther than R from the cone"));
    }
    let bound = radius + ExtReal::clamped(delta);
    let mut best: Option<(usize, ExtReal)> = None;
    for (j, f) in family.iter().enumerate() {
        let d = sup_dist(&p, f)?;
        if best.is_none_or(|(_, b)| d < b) {
            best = Some((j, d));
        }
    }
    Ok(best.filter(|&(_, d)| d.le_tol(bound, TOL)).map(|(j, _)| j))
}
