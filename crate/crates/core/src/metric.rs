//! Finite extended metric spaces.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Violation};
use crate::ext::{ExtReal, TOL};

/// Shared handle to a validated space. Functions and oracles hold one.
pub type Space = Arc<MetricSpace>;

/// A finite set of labelled points with a validated symmetric
/// `[0, ∞]`-valued metric.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpace {
    labels: Vec<String>,
    dist: Vec<ExtReal>,
}

/// Partition of a space into finite-distance components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    pub blocks: Vec<Vec<usize>>,
    pub block_of: Vec<usize>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Validates a raw matrix, where `f64::INFINITY` encodes `∞`.
pub fn validate_metric(labels: Vec<String>, matrix: &[Vec<f64>]) -> Result<MetricSpace, Error> {
    validate_metric_with_tol(labels, matrix, TOL)
}

/// [`validate_metric`] with an explicit tolerance for symmetry and the
/// triangle inequality. Every violation is collected before failing.
pub fn validate_metric_with_tol(
    labels: Vec<String>,
    matrix: &[Vec<f64>],
    tol: f64,
) -> Result<MetricSpace, Error> {
    let n = labels.len();
    let mut violations = Vec::new();
    if n == 0 {
        violations.push(Violation::Empty);
    }
    if matrix.len() != n {
        violations.push(Violation::RowCount { labels: n, rows: matrix.len() });
    }
    for (row, r) in matrix.iter().enumerate() {
        if r.len() != n {
            violations.push(Violation::NotSquare { row, len: r.len(), expected: n });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if labels[i] == labels[j] {
                violations.push(Violation::DuplicateLabel {
                    label: labels[i].clone(),
                    first: i,
                    second: j,
                });
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidMetric(violations));
    }

    let mut dist = vec![ExtReal::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            let v = matrix[i][j];
            match ExtReal::from_f64(v) {
                Ok(e) => dist[i * n + j] = e,
                Err(_) => violations.push(Violation::Negative { i, j, value: v }),
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidMetric(violations));
    }
    for i in 0..n {
        if dist[i * n + i] != ExtReal::ZERO {
            violations.push(Violation::NonZeroDiagonal { i, value: matrix[i][i] });
        }
        for j in (i + 1)..n {
            let (a, b) = (dist[i * n + j], dist[j * n + i]);
            if !a.approx_eq(b, tol) {
                violations.push(Violation::Asymmetric { i, j, dij: a.to_f64(), dji: b.to_f64() });
            } else {
                dist[j * n + i] = a;
            }
            if a == ExtReal::ZERO || b == ExtReal::ZERO {
                violations.push(Violation::ZeroOffDiagonal { i, j });
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidMetric(violations));
    }
    for x in 0..n {
        for z in (x + 1)..n {
            let dxz = dist[x * n + z];
            for y in 0..n {
                if y == x || y == z {
                    continue;
                }
                if !dxz.le_tol(dist[x * n + y] + dist[y * n + z], tol) {
                    violations.push(Violation::Triangle { x, y, z });
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(MetricSpace { labels, dist })
    } else {
        Err(Error::InvalidMetric(violations))
    }
}

impl MetricSpace {
    /// Validates a matrix of extended reals.
    pub fn new(labels: Vec<String>, matrix: &[Vec<ExtReal>]) -> Result<Self, Error> {
        let raw: Vec<Vec<f64>> = matrix
            .iter()
            .map(|row| row.iter().map(|e| e.to_f64()).collect())
            .collect();
        validate_metric(labels, &raw)
    }

    /// Points `coords` on the real line; labels are `p0, p1, ...`.
    pub fn line(coords: &[f64]) -> Result<Self, Error> {
        let labels = default_labels(coords.len());
        let rows: Vec<Vec<f64>> = coords
            .iter()
            .map(|a| coords.iter().map(|b| (a - b).abs()).collect())
            .collect();
        validate_metric(labels, &rows)
    }

    /// `{0, 1, …, n − 1}` on the line.
    pub fn unit_path(n: usize) -> Result<Self, Error> {
        let coords: Vec<f64> = (0..n).map(|i| i as f64).collect();
        Self::line(&coords)
    }

    /// Points in the plane under the `ℓ¹` metric.
    pub fn plane_l1(points: &[(f64, f64)]) -> Result<Self, Error> {
        let labels = default_labels(points.len());
        let rows: Vec<Vec<f64>> = points
            .iter()
            .map(|a| {
                points
                    .iter()
                    .map(|b| (a.0 - b.0).abs() + (a.1 - b.1).abs())
                    .collect()
            })
            .collect();
        validate_metric(labels, &rows)
    }

    /// Shortest-path metric of a weighted undirected graph. Unreachable
    /// pairs end up at `∞`.
    pub fn graph(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, Error> {
        let mut d = vec![vec![f64::INFINITY; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for &(a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange { index: a.max(b), len: n });
            }
            if a != b && w < d[a][b] {
                d[a][b] = w;
                d[b][a] = w;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        validate_metric(default_labels(n), &d)
    }

    /// Disjoint union; every cross distance is `∞`. Labels of the second
    /// space get a `'` suffix when they clash.
    pub fn disjoint_union(&self, other: &MetricSpace) -> Result<Self, Error> {
        let n = self.len();
        let m = other.len();
        let mut labels = self.labels.clone();
        for l in &other.labels {
            let mut l = l.clone();
            while labels.contains(&l) {
                l.push('\'');
            }
            labels.push(l);
        }
        let mut rows = vec![vec![f64::INFINITY; n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                rows[i][j] = self.d(i, j).to_f64();
            }
        }
        for i in 0..m {
            for j in 0..m {
                rows[n + i][n + j] = other.d(i, j).to_f64();
            }
        }
        validate_metric(labels, &rows)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> ExtReal {
        self.dist[i * self.len() + j]
    }

    /// Rows of the distance matrix.
    pub fn matrix(&self) -> Vec<Vec<ExtReal>> {
        self.dist.chunks(self.len()).map(|r| r.to_vec()).collect()
    }

    /// Largest finite distance (0 for a one-point space).
    pub fn max_finite_distance(&self) -> f64 {
        self.dist
            .iter()
            .filter_map(|e| e.finite())
            .fold(0.0, f64::max)
    }

    pub fn check_index(&self, index: usize) -> Result<(), Error> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, len: self.len() })
        }
    }

    pub fn components(&self) -> ComponentPartition {
        components(self)
    }

    pub fn cutoff(&self, r: ExtReal) -> Result<MetricSpace, Error> {
        cutoff(self, r)
    }

    pub fn scale(&self, factor: f64) -> Result<MetricSpace, Error> {
        scale(self, factor)
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Finite-distance components, via union-find over finite edges.
pub fn components(space: &MetricSpace) -> ComponentPartition {
    let n = space.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if space.d(i, j).is_finite() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_block = vec![usize::MAX; n];
    let mut block_of = vec![0; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if root_block[root] == usize::MAX {
            root_block[root] = blocks.len();
            blocks.push(Vec::new());
        }
        block_of[i] = root_block[root];
        blocks[root_block[root]].push(i);
    }
    ComponentPartition { blocks, block_of }
}

/// Cut-off metric `d_r = r ∧ d`.
pub fn cutoff(space: &MetricSpace, r: ExtReal) -> Result<MetricSpace, Error> {
    if r == ExtReal::ZERO {
        return Err(Error::ZeroCutoff);
    }
    Ok(MetricSpace {
        labels: space.labels.clone(),
        dist: space.dist.iter().map(|&d| d.min(r)).collect(),
    })
}

/// Rescaled metric `ℓ·d`, with `ℓ·∞ = ∞`.
pub fn scale(space: &MetricSpace, factor: f64) -> Result<MetricSpace, Error> {
    let dist = space
        .dist
        .iter()
        .map(|d| d.scale(factor))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MetricSpace { labels: space.labels.clone(), dist })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    const INF: f64 = f64::INFINITY;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn three_point_line_is_valid() {
        let m = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 2.0], vec![3.0, 2.0, 0.0]];
        let s = validate_metric(labels(&["a", "b", "c"]), &m).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.components().len(), 1);
    }

    #[test]
    fn single_point_is_valid() {
        assert!(validate_metric(labels(&["a"]), &[vec![0.0]]).is_ok());
    }

    #[test]
    fn triangle_violation_is_reported_with_triple() {
        let m = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        match validate_metric(labels(&["a", "b", "c"]), &m) {
            Err(Error::InvalidMetric(v)) => {
                assert_eq!(v, vec![Violation::Triangle { x: 0, y: 1, z: 2 }]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn every_violation_kind() {
        let bad = |m: Vec<Vec<f64>>| match validate_metric(labels(&["a", "b"]), &m) {
            Err(Error::InvalidMetric(v)) => v,
            other => panic!("unexpected {other:?}"),
        };
        assert!(matches!(bad(vec![vec![0.0, 1.0]])[0], Violation::RowCount { .. }));
        assert!(matches!(bad(vec![vec![0.0, 1.0], vec![1.0]])[0], Violation::NotSquare { row: 1, .. }));
        assert!(matches!(bad(vec![vec![0.0, -1.0], vec![1.0, 0.0]])[0], Violation::Negative { i: 0, j: 1, .. }));
        assert!(matches!(bad(vec![vec![0.0, 0.0], vec![0.0, 0.0]])[0], Violation::ZeroOffDiagonal { i: 0, j: 1 }));
        assert!(matches!(bad(vec![vec![0.0, 1.0], vec![2.0, 0.0]])[0], Violation::Asymmetric { i: 0, j: 1, .. }));
        assert!(matches!(bad(vec![vec![1.0, 1.0], vec![1.0, 0.0]])[0], Violation::NonZeroDiagonal { i: 0, .. }));
        let dup = validate_metric(labels(&["a", "a"]), &[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(matches!(dup, Err(Error::InvalidMetric(ref v)) if matches!(v[0], Violation::DuplicateLabel { .. })));
        let empty = validate_metric(Vec::new(), &[]);
        assert_eq!(empty, Err(Error::InvalidMetric(vec![Violation::Empty])));
    }

    #[test]
    fn component_examples() {
        let two = validate_metric(labels(&["a", "b"]), &[vec![0.0, INF], vec![INF, 0.0]]).unwrap();
        assert_eq!(two.components().len(), 2);
        let four = validate_metric(
            labels(&["a", "b", "c", "d"]),
            &[
                vec![0.0, 1.0, INF, INF],
                vec![1.0, 0.0, INF, INF],
                vec![INF, INF, 0.0, 2.0],
                vec![INF, INF, 2.0, 0.0],
            ],
        )
        .unwrap();
        let p = four.components();
        assert_eq!(p.blocks, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(p.block_of, vec![0, 0, 1, 1]);
    }

    #[test]
    fn cutoff_examples() {
        let s = MetricSpace::line(&[0.0, 1.0, 3.0]).unwrap();
        let c = s.cutoff(ExtReal::new(2.0).unwrap()).unwrap();
        assert_eq!(c.d(0, 2), ExtReal::new(2.0).unwrap());
        assert_eq!(c.d(0, 1), ExtReal::new(1.0).unwrap());
        assert_eq!(c.d(1, 2), ExtReal::new(2.0).unwrap());
        assert_eq!(s.cutoff(ExtReal::INF).unwrap(), s);
        assert_eq!(s.cutoff(ExtReal::new(3.0).unwrap()).unwrap(), s);
        assert_eq!(s.cutoff(ExtReal::ZERO), Err(Error::ZeroCutoff));
    }

    #[test]
    fn scale_examples() {
        let s = MetricSpace::line(&[0.0, 1.0, 3.0]).unwrap();
        assert_eq!(s.scale(1.0).unwrap(), s);
        assert_eq!(s.scale(0.5).unwrap(), MetricSpace::line(&[0.0, 0.5, 1.5]).unwrap());
        let two = s.disjoint_union(&s).unwrap();
        assert!(two.scale(3.0).unwrap().d(0, 4).is_inf());
        assert!(s.scale(0.0).is_err());
        assert!(s.scale(-1.0).is_err());
    }

    #[test]
    fn graph_metric_handles_disconnected() {
        let g = MetricSpace::graph(4, &[(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        assert_eq!(g.d(0, 2), ExtReal::new(3.0).unwrap());
        assert!(g.d(0, 3).is_inf());
        assert_eq!(g.components().len(), 2);
    }
}
