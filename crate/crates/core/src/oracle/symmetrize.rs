use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{OracleError, RasterDomain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// The line `y = at`.
    Horizontal,
    /// The line `x = at`.
    Vertical,
}

/// An axis-parallel line in world coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub axis: Axis,
    pub at: f64,
}

impl Line {
    pub fn horizontal(y: f64) -> Line {
        Line {
            axis: Axis::Horizontal,
            at: y,
        }
    }

    pub fn vertical(x: f64) -> Line {
        Line {
            axis: Axis::Vertical,
            at: x,
        }
    }

    /// Position of the line in index units of `d`'s lattice.
    fn index(&self, d: &RasterDomain) -> f64 {
        let k = match self.axis {
            Axis::Horizontal => 1,
            Axis::Vertical => 0,
        };
        (self.at - d.anchor()[k]) / d.h()
    }
}

/// A line together with a choice of side. `H₁` is the half-plane where the
/// coordinate exceeds `at` when `positive`, and lies below it otherwise.
/// Cells on the line belong to `H₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedLine {
    pub line: Line,
    pub positive: bool,
}

impl OrientedLine {
    pub fn new(line: Line, positive: bool) -> Self {
        OrientedLine { line, positive }
    }

    pub fn flipped(&self) -> Self {
        OrientedLine {
            positive: !self.positive,
            ..*self
        }
    }
}

/// Splits a global index into (column key, position along the column), where
/// columns run perpendicular to `axis`.
fn split(axis: Axis, (i, j): (i64, i64)) -> (i64, i64) {
    match axis {
        Axis::Horizontal => (i, j),
        Axis::Vertical => (j, i),
    }
}

fn join(axis: Axis, key: i64, pos: i64) -> (i64, i64) {
    match axis {
        Axis::Horizontal => (key, pos),
        Axis::Vertical => (pos, key),
    }
}

fn columns(d: &RasterDomain, axis: Axis) -> BTreeMap<i64, Vec<i64>> {
    let mut cols: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for c in d.cells() {
        let (key, pos) = split(axis, c);
        cols.entry(key).or_default().push(pos);
    }
    for v in cols.values_mut() {
        v.sort_unstable();
    }
    cols
}

/// First index of a run of `k` cells centred on `c` (index units).
fn centred_start(c: f64, k: usize) -> i64 {
    (c - (k as f64 - 1.0) / 2.0 + 0.5).floor() as i64
}

/// Steiner symmetrisation: every column perpendicular to `axis` keeps its
/// cell count and becomes a single run centred on the line.
pub fn steiner_symmetrize(d: &RasterDomain, axis: Line) -> Result<RasterDomain, OracleError> {
    let c = axis.index(d);
    let cells = columns(d, axis.axis).into_iter().flat_map(|(key, pos)| {
        let s = centred_start(c, pos.len());
        (s..s + pos.len() as i64).map(move |p| join(axis.axis, key, p))
    });
    RasterDomain::from_cells(d.h(), d.anchor(), cells.collect::<Vec<_>>())
}

/// Moves each column's run a fraction `alpha` of the way to its Steiner
/// position. Columns must be single runs.
pub fn continuous_steiner(d: &RasterDomain, axis: Line, alpha: f64) -> Result<RasterDomain, OracleError> {
    let c = axis.index(d);
    let alpha = alpha.clamp(0.0, 1.0);
    let mut cells = Vec::with_capacity(d.count());
    for (key, pos) in columns(d, axis.axis) {
        let (a, k) = (pos[0], pos.len());
        if pos[k - 1] - a + 1 != k as i64 {
            return Err(OracleError::NonConvexColumn(key));
        }
        let s = centred_start(c, k);
        let start = (a as f64 + alpha * (s - a) as f64 + 0.5).floor() as i64;
        cells.extend((start..start + k as i64).map(|p| join(axis.axis, key, p)));
    }
    RasterDomain::from_cells(d.h(), d.anchor(), cells)
}

/// Two-point rearrangement about `line`. The line is snapped to the nearest
/// lattice row or half-row so that reflection maps cells to cells.
pub fn polarize(d: &RasterDomain, line: OrientedLine) -> Result<RasterDomain, OracleError> {
    let axis = line.line.axis;
    let c2 = (2.0 * line.line.index(d)).round() as i64;
    let in_h1 = |pos: i64| if line.positive { 2 * pos >= c2 } else { 2 * pos <= c2 };
    let reflect = |cell: (i64, i64)| {
        let (key, pos) = split(axis, cell);
        join(axis, key, c2 - pos)
    };
    let mut out = Vec::with_capacity(d.count());
    for cell in d.cells() {
        let mirror = reflect(cell);
        let (_, pos) = split(axis, cell);
        let both = d.contains(mirror.0, mirror.1);
        if in_h1(pos) {
            out.push(cell);
            // the mirror of an H₁ cell lies in H₂ unless the cell is on the line
            if !both && mirror != cell {
                continue;
            }
        } else if both {
            out.push(cell);
        } else {
            out.push(mirror);
        }
    }
    RasterDomain::from_cells(d.h(), d.anchor(), out)
}

/// Rotates `polygon` about `p` so that the line through `p` along `dir`
/// becomes the horizontal line `y = p[1]`, with its left side on top.
pub fn align_line(polygon: &[[f64; 2]], p: [f64; 2], dir: [f64; 2]) -> Vec<[f64; 2]> {
    let len = dir[0].hypot(dir[1]);
    let (c, s) = (dir[0] / len, dir[1] / len);
    polygon
        .iter()
        .map(|q| {
            let (x, y) = (q[0] - p[0], q[1] - p[1]);
            [p[0] + c * x + s * y, p[1] - s * x + c * y]
        })
        .collect()
}

/// Mirror image of `polygon` in an axis-parallel line.
pub fn reflect_polygon(polygon: &[[f64; 2]], line: Line) -> Vec<[f64; 2]> {
    polygon
        .iter()
        .rev()
        .map(|q| match line.axis {
            Axis::Horizontal => [q[0], 2.0 * line.at - q[1]],
            Axis::Vertical => [2.0 * line.at - q[0], q[1]],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{point_strictly_inside, rasterize, rasterize_anchored};

    fn tri() -> Vec<[f64; 2]> {
        vec![[0.0, 0.0], [1.0, 0.0], [0.15, 0.8]]
    }

    #[test]
    fn steiner_preserves_columns() {
        let d = rasterize(&tri(), 40.0).unwrap();
        let s = steiner_symmetrize(&d, Line::horizontal(0.4)).unwrap();
        assert_eq!(s.count(), d.count());
        assert_eq!(s.column_counts(), d.column_counts());
        let v = steiner_symmetrize(&d, Line::vertical(0.5)).unwrap();
        assert_eq!(v.row_counts(), d.row_counts());
    }

    #[test]
    fn symmetric_domain_is_fixed() {
        // isosceles triangle symmetric about x = 1/2, a lattice column at even resolution
        let t = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.9]];
        let d = rasterize(&t, 32.0).unwrap();
        assert_eq!(steiner_symmetrize(&d, Line::vertical(0.5)).unwrap(), d);
        assert_eq!(continuous_steiner(&d, Line::vertical(0.5), 0.5).unwrap(), d);
        let line = OrientedLine::new(Line::vertical(0.5), true);
        assert_eq!(polarize(&d, line).unwrap(), d);
        assert_eq!(polarize(&d, line.flipped()).unwrap(), d);
    }

    #[test]
    fn continuous_endpoints() {
        let d = rasterize(&tri(), 40.0).unwrap();
        let axis = Line::horizontal(0.3);
        assert_eq!(continuous_steiner(&d, axis, 0.0).unwrap(), d);
        assert_eq!(continuous_steiner(&d, axis, 1.0).unwrap(), steiner_symmetrize(&d, axis).unwrap());
        for a in [0.25, 0.5, 0.75] {
            assert_eq!(continuous_steiner(&d, axis, a).unwrap().count(), d.count());
        }
    }

    #[test]
    fn continuous_rejects_split_columns() {
        let d = RasterDomain::from_cells(1.0, [0.0, 0.0], [(0, 0), (0, 2), (1, 0), (1, 1), (1, 2)]).unwrap();
        assert_eq!(
            continuous_steiner(&d, Line::horizontal(5.0), 0.5),
            Err(OracleError::NonConvexColumn(0))
        );
    }

    #[test]
    fn polarization_against_geometry() {
        // oblique line through the triangle, rotated to horizontal
        let t = tri();
        let (p, dir) = ([0.2, 0.1], [1.0, 0.6]);
        let rotated = align_line(&t, p, dir);
        let res = 50.0;
        let d = rasterize_anchored(&rotated, res, p).unwrap();
        let line = OrientedLine::new(Line::horizontal(p[1]), true);
        let out = polarize(&d, line).unwrap();
        assert_eq!(out.count(), d.count());
        let mirror = reflect_polygon(&rotated, line.line);
        let eps = 1e-12;
        let inside = |q: [f64; 2]| point_strictly_inside(q, &rotated, eps);
        let inside_mirror = |q: [f64; 2]| point_strictly_inside(q, &mirror, eps);
        let (lo, hi) = (-40, 80);
        for j in lo..hi {
            for i in lo..hi {
                let q = d.position(i, j);
                let upper = j >= 0;
                let want = if upper {
                    inside(q) || inside_mirror(q)
                } else {
                    inside(q) && inside_mirror(q)
                };
                assert_eq!(out.contains(i, j), want, "cell ({i},{j})");
            }
        }
        let other = polarize(&d, line.flipped()).unwrap();
        assert_eq!(other.count(), out.count());
        assert_ne!(other, out);
    }

    #[test]
    fn align_line_maps_direction() {
        let q = align_line(&[[1.0, 1.0], [0.0, 1.0]], [0.0, 0.0], [1.0, 1.0]);
        assert!((q[0][0] - 2f64.sqrt()).abs() < 1e-15 && q[0][1].abs() < 1e-15);
        // a point left of the direction ends up above the line
        assert!(q[1][1] > 0.0);
    }
}
