use serde::{Deserialize, Serialize};

use super::OracleError;

/// A set of lattice nodes `anchor + h·(i, j)` stored as a bitmap over the
/// global index box `[i0, i0 + width) × [j0, j0 + height)`.
#[derive(Debug, Clone)]
pub struct RasterDomain {
    h: f64,
    anchor: [f64; 2],
    i0: i64,
    j0: i64,
    width: usize,
    height: usize,
    cells: Vec<bool>,
}

/// Sidecar header written next to a PGM bitmap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RasterHeader {
    pub spacing: f64,
    /// World coordinates of the lower-left cell of the bitmap.
    pub offset: [f64; 2],
    /// Global lattice index of the lower-left cell. It fixes which nodes
    /// survive coarsening; absent means `(0, 0)`.
    #[serde(default)]
    pub index: [i64; 2],
    pub width: usize,
    pub height: usize,
    /// Half-plane receiving cells that lie on a polarisation line.
    pub online_cells: String,
}

impl PartialEq for RasterDomain {
    fn eq(&self, other: &Self) -> bool {
        self.same_lattice(other)
            && self.i0 == other.i0
            && self.j0 == other.j0
            && self.width == other.width
            && self.height == other.height
            && self.cells == other.cells
    }
}

impl RasterDomain {
    /// Builds the tightest bitmap holding the given global indices.
    pub fn from_cells(h: f64, anchor: [f64; 2], cells: impl IntoIterator<Item = (i64, i64)>) -> Result<Self, OracleError> {
        let cells: Vec<(i64, i64)> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(OracleError::EmptyDomain);
        }
        let i0 = cells.iter().map(|c| c.0).min().unwrap();
        let i1 = cells.iter().map(|c| c.0).max().unwrap();
        let j0 = cells.iter().map(|c| c.1).min().unwrap();
        let j1 = cells.iter().map(|c| c.1).max().unwrap();
        let width = (i1 - i0 + 1) as usize;
        let height = (j1 - j0 + 1) as usize;
        let mut bits = vec![false; width * height];
        for (i, j) in cells {
            bits[(j - j0) as usize * width + (i - i0) as usize] = true;
        }
        Ok(RasterDomain {
            h,
            anchor,
            i0,
            j0,
            width,
            height,
            cells: bits,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn anchor(&self) -> [f64; 2] {
        self.anchor
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Global index of the lower-left corner of the bitmap.
    pub fn corner(&self) -> (i64, i64) {
        (self.i0, self.j0)
    }

    pub fn origin(&self) -> [f64; 2] {
        self.position(self.i0, self.j0)
    }

    /// World coordinates of the node with global index `(i, j)`.
    pub fn position(&self, i: i64, j: i64) -> [f64; 2] {
        [self.anchor[0] + i as f64 * self.h, self.anchor[1] + j as f64 * self.h]
    }

    /// Membership by global index; anything outside the bitmap is exterior.
    pub fn contains(&self, i: i64, j: i64) -> bool {
        let (x, y) = (i - self.i0, j - self.j0);
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height && self.cells[y as usize * self.width + x as usize]
    }

    pub(crate) fn bits(&self) -> &[bool] {
        &self.cells
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Cell count times `h²`.
    pub fn area(&self) -> f64 {
        self.count() as f64 * self.h * self.h
    }

    /// Global indices of all cells, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (0..self.height).flat_map(move |y| {
            (0..self.width)
                .filter(move |&x| self.cells[y * self.width + x])
                .map(move |x| (self.i0 + x as i64, self.j0 + y as i64))
        })
    }

    pub fn same_lattice(&self, other: &Self) -> bool {
        let tol = 1e-9 * self.h;
        (self.h - other.h).abs() <= tol
            && (self.anchor[0] - other.anchor[0]).abs() <= tol
            && (self.anchor[1] - other.anchor[1]).abs() <= tol
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool, OracleError> {
        if !self.same_lattice(other) {
            return Err(OracleError::LatticeMismatch);
        }
        Ok(self.cells().all(|(i, j)| other.contains(i, j)))
    }

    /// Number of cells in each column `i`, keyed by global index.
    pub fn column_counts(&self) -> Vec<(i64, usize)> {
        (0..self.width)
            .map(|x| {
                let n = (0..self.height).filter(|&y| self.cells[y * self.width + x]).count();
                (self.i0 + x as i64, n)
            })
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    /// Number of cells in each row `j`, keyed by global index.
    pub fn row_counts(&self) -> Vec<(i64, usize)> {
        (0..self.height)
            .map(|y| {
                let n = self.cells[y * self.width..(y + 1) * self.width].iter().filter(|&&c| c).count();
                (self.j0 + y as i64, n)
            })
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    /// Number of 4-connected components.
    pub fn components(&self) -> usize {
        let (w, h) = (self.width, self.height);
        let mut seen = vec![false; w * h];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..w * h {
            if !self.cells[start] || seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(p) = stack.pop() {
                let (x, y) = (p % w, p / w);
                let mut visit = |q: usize| {
                    if self.cells[q] && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                };
                if x > 0 {
                    visit(p - 1);
                }
                if x + 1 < w {
                    visit(p + 1);
                }
                if y > 0 {
                    visit(p - w);
                }
                if y + 1 < h {
                    visit(p + w);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }

    /// The nodes with even global indices, as a raster of spacing `2h`.
    pub fn coarsen(&self) -> Result<RasterDomain, OracleError> {
        let cells = self
            .cells()
            .filter(|&(i, j)| i.rem_euclid(2) == 0 && j.rem_euclid(2) == 0)
            .map(|(i, j)| (i.div_euclid(2), j.div_euclid(2)));
        RasterDomain::from_cells(2.0 * self.h, self.anchor, cells)
    }

    /// The same cells on a lattice scaled by `factor` about the world origin.
    pub fn scaled(&self, factor: f64) -> RasterDomain {
        RasterDomain {
            h: self.h * factor,
            anchor: [self.anchor[0] * factor, self.anchor[1] * factor],
            ..self.clone()
        }
    }

    pub fn header(&self) -> RasterHeader {
        RasterHeader {
            spacing: self.h,
            offset: self.origin(),
            index: [self.i0, self.j0],
            width: self.width,
            height: self.height,
            online_cells: "H1".to_string(),
        }
    }

    /// Binary PGM, top row first, interior cells white.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        for y in (0..self.height).rev() {
            out.extend(self.cells[y * self.width..(y + 1) * self.width].iter().map(|&c| if c { 255u8 } else { 0 }));
        }
        out
    }

    /// Reads a PGM written by [`RasterDomain::to_pgm`]; any nonzero pixel is
    /// an interior cell. The lattice is anchored at the header offset.
    pub fn from_pgm(bytes: &[u8], header: &RasterHeader) -> Result<RasterDomain, OracleError> {
        let bad = |m: &str| OracleError::Format(m.to_string());
        let mut fields = Vec::new();
        let mut pos = 0;
        while fields.len() < 4 {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(bad("truncated header"));
            }
            fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("header is not ASCII"))?);
        }
        if fields[0] != "P5" {
            return Err(bad("expected P5 magic"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad("bad header number"));
        let (w, h, max) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
        if max == 0 || max > 255 {
            return Err(bad("maxval must be in 1..=255"));
        }
        if (w, h) != (header.width, header.height) {
            return Err(bad("bitmap size disagrees with header"));
        }
        let data = bytes.get(pos + 1..pos + 1 + w * h).ok_or_else(|| bad("truncated pixel data"))?;
        let cells = (0..h).flat_map(|y| {
            let row = &data[(h - 1 - y) * w..(h - y) * w];
            row.iter()
                .enumerate()
                .filter(|(_, &p)| p != 0)
                .map(move |(x, _)| (x as i64, y as i64))
                .collect::<Vec<_>>()
        });
        let [i0, j0] = header.index;
        let anchor = [header.offset[0] - i0 as f64 * header.spacing, header.offset[1] - j0 as f64 * header.spacing];
        RasterDomain::from_cells(header.spacing, anchor, cells.map(|(x, y)| (x + i0, y + j0)))
    }
}

fn edge_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

/// Crossing-number test that also rejects points within `eps` of an edge.
pub fn point_strictly_inside(p: [f64; 2], polygon: &[[f64; 2]], eps: f64) -> bool {
    let n = polygon.len();
    let mut inside = false;
    for k in 0..n {
        let (a, b) = (polygon[k], polygon[(k + 1) % n]);
        if edge_distance(p, a, b) <= eps {
            return false;
        }
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Nodes of the lattice `anchor + ℤ²/resolution` strictly inside `polygon`.
pub fn rasterize_anchored(polygon: &[[f64; 2]], resolution: f64, anchor: [f64; 2]) -> Result<RasterDomain, OracleError> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(OracleError::InvalidResolution(resolution));
    }
    if polygon.len() < 3 {
        return Err(OracleError::EmptyDomain);
    }
    let h = 1.0 / resolution;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in polygon {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let eps = 1e-12 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1.0);
    let range = |k: usize| ((lo[k] - anchor[k]) / h).floor() as i64..=((hi[k] - anchor[k]) / h).ceil() as i64;
    let mut cells = Vec::new();
    for j in range(1) {
        let y = anchor[1] + j as f64 * h;
        for i in range(0) {
            let x = anchor[0] + i as f64 * h;
            if point_strictly_inside([x, y], polygon, eps) {
                cells.push((i, j));
            }
        }
    }
    RasterDomain::from_cells(h, anchor, cells)
}

/// Cells per unit length that put `cells` cells across the larger side of
/// the polygon's bounding box.
pub fn resolution_across(polygon: &[[f64; 2]], cells: f64) -> f64 {
    let extent = |k: usize| {
        let lo = polygon.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
        let hi = polygon.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    cells / extent(0).max(extent(1))
}

/// Raster on the lattice anchored at the lower-left corner of the bounding box.
pub fn rasterize(polygon: &[[f64; 2]], resolution: f64) -> Result<RasterDomain, OracleError> {
    let anchor = [
        polygon.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
        polygon.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min),
    ];
    rasterize_anchored(polygon, resolution, anchor)
}
