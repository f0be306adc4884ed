//! Rough isometries between finite spaces: distortion of map pairs and
//! the exact rough distance by branch-and-bound over all map pairs.

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::error::Error;
use crate::ext::{ExtReal, TOL};
use crate::metric::MetricSpace;

/// Forward map `η: X → Y` and backward map `η′: Y → X` as index arrays.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MapPair {
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
}

impl MapPair {
    pub fn new(forward: Vec<usize>, backward: Vec<usize>) -> Self {
        MapPair { forward, backward }
    }

    pub fn identity(n: usize) -> Self {
        let id: Vec<usize> = (0..n).collect();
        MapPair { forward: id.clone(), backward: id }
    }

    /// The same pair read from `Y` to `X`.
    pub fn swapped(&self) -> Self {
        MapPair { forward: self.backward.clone(), backward: self.forward.clone() }
    }

    /// Checks both maps are total and in range.
    pub fn check(&self, x: &MetricSpace, y: &MetricSpace) -> Result<(), Error> {
        check_map(&self.forward, x.len(), y.len())?;
        check_map(&self.backward, y.len(), x.len())
    }
}

fn check_map(map: &[usize], domain: usize, target: usize) -> Result<(), Error> {
    if map.len() != domain {
        return Err(Error::LengthMismatch { expected: domain, found: map.len() });
    }
    match map.iter().find(|&&i| i >= target) {
        Some(&index) => Err(Error::IndexOutOfRange { index, len: target }),
        None => Ok(()),
    }
}

/// Distortion and displacement of a [`MapPair`].
///
/// `overall` is the smallest `ε` for which the pair is an `ε`-isometry.
/// The surjectivity radii are diagnostics and do not enter `overall`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IsometryDefect {
    pub embed_fwd: ExtReal,
    pub embed_bwd: ExtReal,
    pub near_fwd: ExtReal,
    pub near_bwd: ExtReal,
    pub overall: ExtReal,
    pub surjective_fwd: ExtReal,
    pub surjective_bwd: ExtReal,
}

impl IsometryDefect {
    pub fn is_eps_isometry(&self, eps: ExtReal) -> bool {
        self.overall <= eps
    }
}

/// `max_x d(αx, βx)`.
pub fn nearness(alpha: &[usize], beta: &[usize], target: &MetricSpace) -> Result<ExtReal, Error> {
    if alpha.len() != beta.len() {
        return Err(Error::LengthMismatch { expected: alpha.len(), found: beta.len() });
    }
    let mut worst = ExtReal::ZERO;
    for (&a, &b) in alpha.iter().zip(beta) {
        target.check_index(a)?;
        target.check_index(b)?;
        worst = worst.max(target.d(a, b));
    }
    Ok(worst)
}

/// Largest additive distortion `|d_X(a,b) − d_Y(ηa,ηb)|`.
pub fn embedding_distortion(map: &[usize], domain: &MetricSpace, target: &MetricSpace) -> ExtReal {
    let n = domain.len();
    let mut worst = ExtReal::ZERO;
    for a in 0..n {
        for b in (a + 1)..n {
            worst = worst.max(domain.d(a, b).dist(target.d(map[a], map[b])));
        }
    }
    worst
}

/// Smallest `ε` such that every target point lies within `ε` of the image.
pub fn surjectivity_radius(map: &[usize], target: &MetricSpace) -> ExtReal {
    (0..target.len())
        .map(|t| map.iter().map(|&m| target.d(m, t)).min().unwrap_or(ExtReal::INF))
        .fold(ExtReal::ZERO, ExtReal::max)
}

pub fn defect(pair: &MapPair, x: &MetricSpace, y: &MetricSpace) -> Result<IsometryDefect, Error> {
    pair.check(x, y)?;
    let embed_fwd = embedding_distortion(&pair.forward, x, y);
    let embed_bwd = embedding_distortion(&pair.backward, y, x);
    let back_forth: Vec<usize> = pair.forward.iter().map(|&t| pair.backward[t]).collect();
    let forth_back: Vec<usize> = pair.backward.iter().map(|&t| pair.forward[t]).collect();
    let id_x: Vec<usize> = (0..x.len()).collect();
    let id_y: Vec<usize> = (0..y.len()).collect();
    let near_fwd = nearness(&back_forth, &id_x, x)?;
    let near_bwd = nearness(&forth_back, &id_y, y)?;
    Ok(IsometryDefect {
        embed_fwd,
        embed_bwd,
        near_fwd,
        near_bwd,
        overall: embed_fwd.max(embed_bwd).max(near_fwd).max(near_bwd),
        surjective_fwd: surjectivity_radius(&pair.forward, y),
        surjective_bwd: surjectivity_radius(&pair.backward, x),
    })
}

/// Best-known defect shared between search partitions. Only ever lowered.
///
/// Stored as `f64` bits: for nonnegative floats the bit order agrees with
/// the numeric order, and `∞` maps to the infinite bit pattern.
#[derive(Debug)]
pub struct SharedBound(AtomicU64);

impl SharedBound {
    pub fn new() -> Self {
        SharedBound(AtomicU64::new(f64::INFINITY.to_bits()))
    }

    pub fn get(&self) -> ExtReal {
        ExtReal::clamped(f64::from_bits(self.0.load(Ordering::Relaxed)))
    }

    pub fn lower(&self, value: ExtReal) {
        self.0.fetch_min(value.to_f64().to_bits(), Ordering::Relaxed);
    }
}

impl Default for SharedBound {
    fn default() -> Self {
        Self::new()
    }
}

/// Exhaustive rough-distance search between two small spaces.
///
/// The forward maps are split into partitions by the image of point 0, so
/// partitions can run on separate workers sharing a [`SharedBound`].
/// Merging partition results with [`RoughSearch::merge`] gives the same
/// answer regardless of schedule.
#[derive(Debug)]
pub struct RoughSearch<'a> {
    x: &'a MetricSpace,
    y: &'a MetricSpace,
}

/// Result of one partition: its best defect and the lexicographically
/// first pair attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionResult {
    pub partition: usize,
    pub epsilon: ExtReal,
    pub witness: MapPair,
}

/// Number of map pairs `|Y|^|X| · |X|^|Y|`, saturating.
pub fn search_size(nx: usize, ny: usize) -> u128 {
    let pow = |b: usize, e: usize| -> u128 {
        (0..e).fold(1u128, |acc, _| acc.saturating_mul(b as u128))
    };
    pow(ny, nx).saturating_mul(pow(nx, ny))
}

impl<'a> RoughSearch<'a> {
    /// `budget` caps the point count: the search is allowed when its size
    /// does not exceed that of two `budget`-point spaces.
    pub fn new(x: &'a MetricSpace, y: &'a MetricSpace, budget: usize) -> Result<Self, Error> {
        let required = search_size(x.len(), y.len());
        let allowed = search_size(budget, budget);
        if required > allowed {
            return Err(Error::BudgetExceeded { required, allowed });
        }
        Ok(RoughSearch { x, y })
    }

    pub fn partitions(&self) -> usize {
        self.y.len()
    }

    pub fn run_partition(&self, partition: usize, bound: &SharedBound) -> Option<PartitionResult> {
        let mut state = SearchState {
            x: self.x,
            y: self.y,
            fwd: vec![0; self.x.len()],
            bwd: vec![0; self.y.len()],
            best: None,
            bound,
        };
        state.fwd[0] = partition;
        state.extend_forward(1, ExtReal::ZERO);
        state.best.map(|(epsilon, witness)| PartitionResult { partition, epsilon, witness })
    }

    /// Smallest defect; ties go to the lowest partition.
    pub fn merge<I: IntoIterator<Item = PartitionResult>>(results: I) -> Option<(ExtReal, MapPair)> {
        results
            .into_iter()
            .min_by(|a, b| a.epsilon.cmp(&b.epsilon).then(a.partition.cmp(&b.partition)))
            .map(|r| (r.epsilon, r.witness))
    }

    pub fn run(&self) -> (ExtReal, MapPair) {
        let bound = SharedBound::new();
        let results: Vec<_> = (0..self.partitions())
            .filter_map(|p| self.run_partition(p, &bound))
            .collect();
        Self::merge(results).expect("at least one map pair exists")
    }
}

struct SearchState<'a, 'b> {
    x: &'a MetricSpace,
    y: &'a MetricSpace,
    fwd: Vec<usize>,
    bwd: Vec<usize>,
    best: Option<(ExtReal, MapPair)>,
    bound: &'b SharedBound,
}

impl SearchState<'_, '_> {
    fn pruned(&self, partial: ExtReal) -> bool {
        partial > self.bound.get()
    }

    fn extend_forward(&mut self, next: usize, partial: ExtReal) {
        if self.pruned(partial) {
            return;
        }
        if next == self.x.len() {
            self.extend_backward(0, partial);
            return;
        }
        for t in 0..self.y.len() {
            let mut p = partial;
            for a in 0..next {
                p = p.max(self.x.d(a, next).dist(self.y.d(self.fwd[a], t)));
            }
            self.fwd[next] = t;
            self.extend_forward(next + 1, p);
        }
    }

    fn extend_backward(&mut self, next: usize, partial: ExtReal) {
        if self.pruned(partial) {
            return;
        }
        if next == self.y.len() {
            let improves = self.best.as_ref().is_none_or(|(b, _)| partial < *b);
            if improves {
                self.best = Some((partial, MapPair::new(self.fwd.clone(), self.bwd.clone())));
                self.bound.lower(partial);
            }
            return;
        }
        for s in 0..self.x.len() {
            let mut p = partial;
            for b in 0..next {
                p = p.max(self.y.d(b, next).dist(self.x.d(self.bwd[b], s)));
            }
            // η′ at `next` is now known: η∘η′ at `next`, and η′∘η wherever η hits `next`
            p = p.max(self.y.d(next, self.fwd[s]));
            for a in 0..self.x.len() {
                if self.fwd[a] == next {
                    p = p.max(self.x.d(a, s));
                }
            }
            self.bwd[next] = s;
            self.extend_backward(next + 1, p);
        }
    }
}

/// Exact rough distance: the minimum overall defect over all map pairs,
/// with the lexicographically first minimizing pair.
pub fn rough_distance_exact(
    x: &MetricSpace,
    y: &MetricSpace,
    budget: usize,
) -> Result<(ExtReal, MapPair), Error> {
    Ok(RoughSearch::new(x, y, budget)?.run())
}

pub const DEFAULT_BUDGET: usize = 5;

/// Every distance-preserving bijection `X → Y` (up to [`TOL`]), in
/// lexicographic order.
pub fn isometries(x: &MetricSpace, y: &MetricSpace) -> Vec<Vec<usize>> {
    fn extend(x: &MetricSpace, y: &MetricSpace, map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let next = map.len();
        if next == x.len() {
            out.push(map.clone());
            return;
        }
        for t in 0..y.len() {
            if used[t] || (0..next).any(|a| !x.d(a, next).approx_eq(y.d(map[a], t), TOL)) {
                continue;
            }
            used[t] = true;
            map.push(t);
            extend(x, y, map, used, out);
            map.pop();
            used[t] = false;
        }
    }
    let mut out = Vec::new();
    if x.len() == y.len() {
        extend(x, y, &mut Vec::new(), &mut vec![false; y.len()], &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: f64) -> ExtReal {
        ExtReal::new(v).unwrap()
    }

    /// Plain enumeration of every map pair, independent of the pruned search.
    fn brute_force(x: &MetricSpace, y: &MetricSpace) -> ExtReal {
        let (n, m) = (x.len(), y.len());
        let maps = |dom: usize, tgt: usize| -> Vec<Vec<usize>> {
            let mut all = vec![vec![]];
            for _ in 0..dom {
                all = all
                    .into_iter()
                    .flat_map(|p: Vec<usize>| {
                        (0..tgt).map(move |t| {
                            let mut q = p.clone();
                            q.push(t);
                            q
                        })
                    })
                    .collect();
            }
            all
        };
        let mut best = ExtReal::INF;
        for f in maps(n, m) {
            for b in maps(m, n) {
                best = best.min(defect(&MapPair::new(f.clone(), b), x, y).unwrap().overall);
            }
        }
        best
    }

    #[test]
    fn nearness_examples() {
        let s = MetricSpace::line(&[0.0, 1.0, 3.0]).unwrap();
        assert_eq!(nearness(&[0, 1, 2], &[0, 1, 2], &s).unwrap(), ExtReal::ZERO);
        assert_eq!(nearness(&[0, 1, 2], &[1, 0, 2], &s).unwrap(), e(1.0));
        let two = s.disjoint_union(&s).unwrap();
        assert_eq!(nearness(&[0], &[3], &two).unwrap(), ExtReal::INF);
        assert!(nearness(&[0, 1], &[0], &s).is_err());
    }

    #[test]
    fn defect_examples() {
        let x = MetricSpace::line(&[0.0, 2.0]).unwrap();
        let y = MetricSpace::line(&[0.0, 1.0, 2.0]).unwrap();
        let id = defect(&MapPair::identity(3), &y, &y).unwrap();
        assert_eq!(id.overall, ExtReal::ZERO);

        let pair = MapPair::new(vec![0, 2], vec![0, 0, 1]);
        let d = defect(&pair, &x, &y).unwrap();
        assert_eq!(d.embed_fwd, ExtReal::ZERO);
        assert_eq!(d.embed_bwd, e(1.0));
        assert_eq!(d.near_fwd, ExtReal::ZERO);
        assert_eq!(d.near_bwd, e(1.0));
        assert_eq!(d.overall, e(1.0));
        assert_eq!(d.surjective_fwd, e(1.0));

        // collapsing a diameter-3 space to one point distorts by 3
        let line = MetricSpace::line(&[0.0, 1.0, 3.0]).unwrap();
        let point = MetricSpace::line(&[0.0]).unwrap();
        let collapse = defect(&MapPair::new(vec![0, 0, 0], vec![1]), &line, &point).unwrap();
        assert_eq!(collapse.embed_fwd, e(3.0));

        assert!(defect(&MapPair::new(vec![0, 5], vec![0, 0, 1]), &x, &y).is_err());
    }

    #[test]
    fn rough_distance_examples() {
        let x = MetricSpace::line(&[0.0, 2.0]).unwrap();
        let y = MetricSpace::line(&[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(rough_distance_exact(&y, &y, 5).unwrap(), (ExtReal::ZERO, MapPair::identity(3)));
        let (eps, w) = rough_distance_exact(&x, &y, 5).unwrap();
        assert_eq!(eps, e(1.0));
        assert_eq!(defect(&w, &x, &y).unwrap().overall, e(1.0));
        assert_eq!(brute_force(&x, &y), e(1.0));

        let point = MetricSpace::line(&[0.0]).unwrap();
        let pair = MetricSpace::line(&[0.0, 2.0]).unwrap();
        assert_eq!(brute_force(&point, &pair), e(2.0));
        assert_eq!(rough_distance_exact(&point, &pair, 5).unwrap().0, e(2.0));
    }

    #[test]
    fn matches_brute_force_on_mixed_components() {
        let a = MetricSpace::line(&[0.0, 1.0]).unwrap();
        let b = MetricSpace::line(&[0.0]).unwrap();
        let x = a.disjoint_union(&b).unwrap();
        let y = MetricSpace::line(&[0.0, 1.5, 2.0]).unwrap();
        assert_eq!(rough_distance_exact(&x, &y, 5).unwrap().0, brute_force(&x, &y));
        assert_eq!(rough_distance_exact(&x, &y, 5).unwrap().0, ExtReal::INF);
        let z = MetricSpace::line(&[0.0, 1.25]).unwrap().disjoint_union(&b).unwrap();
        assert_eq!(rough_distance_exact(&x, &z, 5).unwrap().0, brute_force(&x, &z));
    }

    #[test]
    fn isometries_of_a_path() {
        let p = MetricSpace::unit_path(4).unwrap();
        assert_eq!(isometries(&p, &p), vec![vec![0, 1, 2, 3], vec![3, 2, 1, 0]]);
        let q = MetricSpace::line(&[0.0, 1.0, 3.0]).unwrap();
        assert_eq!(isometries(&q, &q).len(), 1);
    }

    #[test]
    fn budget_is_a_hard_error() {
        let six = MetricSpace::unit_path(6).unwrap();
        assert!(matches!(
            rough_distance_exact(&six, &six, 5),
            Err(Error::BudgetExceeded { required, allowed }) if required == 6u128.pow(12) && allowed == 5u128.pow(10)
        ));
        assert!(RoughSearch::new(&six, &six, 6).is_ok());
    }
}
