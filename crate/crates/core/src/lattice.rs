//! `Lip X`: 1-Lipschitz functions into `[0, ∞]` as a complete lattice
//! under pointwise meet and join, with the supremum metric.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::ext::{max_of, ExtReal, TOL};
use crate::metric::{MetricSpace, Space};

/// A 1-Lipschitz function `X → [0, ∞]`, one value per point.
#[derive(Clone, Debug)]
pub struct LipFn {
    space: Space,
    values: Vec<ExtReal>,
}

impl PartialEq for LipFn {
    fn eq(&self, other: &Self) -> bool {
        self.same_space(other) && self.values == other.values
    }
}

impl LipFn {
    /// Checks length and the 1-Lipschitz condition up to [`TOL`].
    pub fn new(space: Space, values: Vec<ExtReal>) -> Result<Self, Error> {
        Self::with_tol(space, values, TOL)
    }

    pub fn with_tol(space: Space, values: Vec<ExtReal>, tol: f64) -> Result<Self, Error> {
        check_len(&space, values.len())?;
        if let Some((x, y)) = lipschitz_violation(&space, &values, 1.0, 0.0, tol) {
            return Err(Error::NotLipschitz { x, y });
        }
        Ok(LipFn { space, values })
    }

    /// Caller guarantees the Lipschitz condition (up to rounding).
    pub(crate) fn from_raw(space: Space, values: Vec<ExtReal>) -> Self {
        debug_assert_eq!(space.len(), values.len());
        LipFn { space, values }
    }

    pub fn constant(space: Space, c: ExtReal) -> Self {
        let n = space.len();
        LipFn { space, values: vec![c; n] }
    }

    pub fn zero(space: Space) -> Self {
        Self::constant(space, ExtReal::ZERO)
    }

    pub fn infinite(space: Space) -> Self {
        Self::constant(space, ExtReal::INF)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn into_values(self) -> Vec<ExtReal> {
        self.values
    }

    #[inline]
    pub fn at(&self, i: usize) -> ExtReal {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn same_space(&self, other: &LipFn) -> bool {
        same_space(&self.space, &other.space)
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &LipFn) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// Largest value, `0` never exceeded from below.
    pub fn sup(&self) -> ExtReal {
        max_of(self.values.iter().copied())
    }

    pub fn meet(&self, other: &LipFn) -> Result<LipFn, Error> {
        meet(&self.space, [self, other])
    }

    pub fn join(&self, other: &LipFn) -> Result<LipFn, Error> {
        join(&self.space, [self, other])
    }
}

pub(crate) fn same_space(a: &Space, b: &Space) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn check_len(space: &MetricSpace, found: usize) -> Result<(), Error> {
    if space.len() == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected: space.len(), found })
    }
}

/// `k·d`; `0·d` is taken as `0` for every `d` so that `k = 0` means
/// "oscillation at most `ε`".
fn scaled(d: ExtReal, k: f64) -> ExtReal {
    if k == 0.0 {
        ExtReal::ZERO
    } else {
        d.scale(k).unwrap_or(ExtReal::INF)
    }
}

fn lipschitz_violation(
    space: &MetricSpace,
    values: &[ExtReal],
    k: f64,
    eps: f64,
    tol: f64,
) -> Option<(usize, usize)> {
    let slack = ExtReal::clamped(eps);
    let n = values.len();
    for x in 0..n {
        for y in (x + 1)..n {
            let bound = scaled(space.d(x, y), k) + slack;
            if !values[x].dist(values[y]).le_tol(bound, tol) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Exact `(K, ε)`-Lipschitz test: `|f(x) − f(y)| ≤ K·d(x,y) + ε` for all
/// pairs, under extended-real conventions.
pub fn is_k_eps_lipschitz(space: &MetricSpace, values: &[ExtReal], k: f64, eps: f64) -> bool {
    is_k_eps_lipschitz_tol(space, values, k, eps, 0.0)
}

pub fn is_k_eps_lipschitz_tol(
    space: &MetricSpace,
    values: &[ExtReal],
    k: f64,
    eps: f64,
    tol: f64,
) -> bool {
    values.len() == space.len()
        && k >= 0.0
        && eps >= 0.0
        && lipschitz_violation(space, values, k, eps, tol).is_none()
}

/// Smallest `ε` for which `values` is `(1, ε)`-Lipschitz.
pub fn min_lipschitz_eps(space: &MetricSpace, values: &[ExtReal]) -> ExtReal {
    let n = values.len();
    let mut eps = ExtReal::ZERO;
    for x in 0..n {
        for y in (x + 1)..n {
            eps = eps.max(values[x].dist(values[y]).monus(space.d(x, y)));
        }
    }
    eps
}

fn fold<'a, I>(space: &Space, family: I, empty: ExtReal, pick: fn(ExtReal, ExtReal) -> ExtReal) -> Result<LipFn, Error>
where
    I: IntoIterator<Item = &'a LipFn>,
{
    let mut values = vec![empty; space.len()];
    let mut first = true;
    for f in family {
        if !same_space(space, &f.space) {
            return Err(Error::SpaceMismatch);
        }
        if first {
            values.copy_from_slice(&f.values);
            first = false;
        } else {
            for (v, &w) in values.iter_mut().zip(&f.values) {
                *v = pick(*v, w);
            }
        }
    }
    Ok(LipFn { space: space.clone(), values })
}

/// Pointwise infimum; the empty meet is the constant `∞`.
pub fn meet<'a, I: IntoIterator<Item = &'a LipFn>>(space: &Space, family: I) -> Result<LipFn, Error> {
    fold(space, family, ExtReal::INF, ExtReal::min)
}

/// Pointwise supremum; the empty join is the constant `0`.
pub fn join<'a, I: IntoIterator<Item = &'a LipFn>>(space: &Space, family: I) -> Result<LipFn, Error> {
    fold(space, family, ExtReal::ZERO, ExtReal::max)
}

/// `d_∞(f, g) = max_x |f(x) − g(x)|`.
pub fn sup_dist(f: &LipFn, g: &LipFn) -> Result<ExtReal, Error> {
    if !f.same_space(g) {
        return Err(Error::SpaceMismatch);
    }
    Ok(sup_dist_values(&f.values, &g.values))
}

/// Supremum distance of raw value vectors of equal length.
pub fn sup_dist_values(a: &[ExtReal], b: &[ExtReal]) -> ExtReal {
    debug_assert_eq!(a.len(), b.len());
    max_of(a.iter().zip(b).map(|(x, y)| x.dist(*y)))
}
