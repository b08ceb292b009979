use serde::{Deserialize, Serialize};

use super::{OracleError, RasterDomain, ITERATION_CAP};

const NONE: u32 = u32::MAX;
/// Grids at or below this many unknowns are solved by dense Cholesky.
const DIRECT_SIZE: usize = 400;
/// Coarse grids with fewer cells than this are not used for extrapolation.
const MIN_LEVEL_CELLS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Grids used for extrapolation: the input raster and its coarsenings.
    pub levels: usize,
    /// Relative change of the Rayleigh quotient at which iteration stops.
    pub tol: f64,
    /// Budget of preconditioned CG iterations per call.
    pub iteration_cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            levels: 3,
            tol: 1e-10,
            iteration_cap: ITERATION_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    /// Cells per unit length, finest first.
    pub resolutions: Vec<f64>,
    /// Discrete eigenvalues on each grid, finest first.
    pub levels: Vec<Vec<f64>>,
    /// Observed convergence order used for each eigenvalue.
    pub orders: Vec<f64>,
    pub extrapolated: Vec<f64>,
    /// `|extrapolated − finest|`; an estimate, not a guarantee.
    pub error: Vec<f64>,
    pub iterations: usize,
    /// 4-connected components of the finest raster. The spectrum of a split
    /// raster is the union of its components' spectra.
    pub components: usize,
}

impl EigenResult {
    /// Extrapolated `λ_k`, `k` counted from 1.
    pub fn lambda(&self, k: usize) -> Option<f64> {
        self.extrapolated.get(k.checked_sub(1)?).copied()
    }

    pub fn lambda1(&self) -> f64 {
        self.extrapolated[0]
    }

    pub fn lambda2(&self) -> Option<f64> {
        self.lambda(2)
    }

    pub fn tolerance(&self, k: usize) -> Option<f64> {
        self.error.get(k.checked_sub(1)?).copied()
    }

    pub fn finest(&self, k: usize) -> Option<f64> {
        self.levels.first()?.get(k.checked_sub(1)?).copied()
    }
}

/// Unknowns of one raster with their 5-point neighbours.
struct Grid {
    h: f64,
    nbr: Vec<[u32; 4]>,
    /// Global lattice index of each unknown.
    nodes: Vec<(i64, i64)>,
}

impl Grid {
    fn new(d: &RasterDomain) -> Grid {
        let (w, ht) = (d.width(), d.height());
        let (i0, j0) = d.corner();
        let bits = d.bits();
        let mut index = vec![NONE; w * ht];
        let mut nodes = Vec::new();
        for (p, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
            index[p] = nodes.len() as u32;
            nodes.push((i0 + (p % w) as i64, j0 + (p / w) as i64));
        }
        let nbr = nodes
            .iter()
            .map(|&(i, j)| {
                let (x, y) = ((i - i0) as usize, (j - j0) as usize);
                let at = |x: usize, y: usize| index[y * w + x];
                [
                    if x > 0 { at(x - 1, y) } else { NONE },
                    if x + 1 < w { at(x + 1, y) } else { NONE },
                    if y > 0 { at(x, y - 1) } else { NONE },
                    if y + 1 < ht { at(x, y + 1) } else { NONE },
                ]
            })
            .collect();
        Grid { h: d.h(), nbr, nodes }
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let s = 1.0 / (self.h * self.h);
        for (p, nb) in self.nbr.iter().enumerate() {
            let mut acc = 4.0 * x[p];
            for &q in nb {
                if q != NONE {
                    acc -= x[q as usize];
                }
            }
            y[p] = acc * s;
        }
    }

    fn gs_sweep(&self, x: &mut [f64], b: &[f64], forward: bool) {
        let h2 = self.h * self.h;
        let mut relax = |p: usize| {
            let mut acc = b[p] * h2;
            for &q in &self.nbr[p] {
                if q != NONE {
                    acc += x[q as usize];
                }
            }
            x[p] = 0.25 * acc;
        };
        if forward {
            (0..self.len()).for_each(&mut relax);
        } else {
            (0..self.len()).rev().for_each(&mut relax);
        }
    }

    fn dense_cholesky(&self) -> Vec<f64> {
        let n = self.len();
        let s = 1.0 / (self.h * self.h);
        let mut a = vec![0.0; n * n];
        for (p, nb) in self.nbr.iter().enumerate() {
            a[p * n + p] = 4.0 * s;
            for &q in nb {
                if q != NONE {
                    a[p * n + q as usize] = -s;
                }
            }
        }
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= a[j * n + k] * a[j * n + k];
            }
            let d = d.sqrt();
            a[j * n + j] = d;
            for i in j + 1..n {
                let mut v = a[i * n + j];
                for k in 0..j {
                    v -= a[i * n + k] * a[j * n + k];
                }
                a[i * n + j] = v / d;
            }
        }
        a
    }
}

/// Bilinear interpolation from the grid of even nodes.
struct Prolongation {
    from: Vec<[u32; 4]>,
    weight: Vec<f64>,
}

impl Prolongation {
    fn new(fine: &Grid, coarse: &Grid) -> Prolongation {
        let lookup: std::collections::HashMap<(i64, i64), u32> =
            coarse.nodes.iter().enumerate().map(|(k, &n)| (n, k as u32)).collect();
        let get = |i: i64, j: i64| lookup.get(&(i, j)).copied().unwrap_or(NONE);
        let mut from = Vec::with_capacity(fine.len());
        let mut weight = Vec::with_capacity(fine.len());
        for &(i, j) in &fine.nodes {
            let (ci, cj) = (i.div_euclid(2), j.div_euclid(2));
            let (oi, oj) = (i.rem_euclid(2) == 1, j.rem_euclid(2) == 1);
            let entry = match (oi, oj) {
                (false, false) => ([get(ci, cj), NONE, NONE, NONE], 1.0),
                (true, false) => ([get(ci, cj), get(ci + 1, cj), NONE, NONE], 0.5),
                (false, true) => ([get(ci, cj), get(ci, cj + 1), NONE, NONE], 0.5),
                (true, true) => ([get(ci, cj), get(ci + 1, cj), get(ci, cj + 1), get(ci + 1, cj + 1)], 0.25),
            };
            from.push(entry.0);
            weight.push(entry.1);
        }
        Prolongation { from, weight }
    }

    fn prolong_add(&self, xc: &[f64], xf: &mut [f64]) {
        for (p, src) in self.from.iter().enumerate() {
            let s: f64 = src.iter().filter(|&&q| q != NONE).map(|&q| xc[q as usize]).sum();
            xf[p] += self.weight[p] * s;
        }
    }

    /// `¼·Pᵀ`.
    fn restrict(&self, rf: &[f64], rc: &mut [f64]) {
        rc.iter_mut().for_each(|v| *v = 0.0);
        for (p, src) in self.from.iter().enumerate() {
            let v = 0.25 * self.weight[p] * rf[p];
            for &q in src.iter().filter(|&&q| q != NONE) {
                rc[q as usize] += v;
            }
        }
    }
}

/// Geometric multigrid V-cycle on a chain of coarsened rasters, used as a
/// symmetric preconditioner.
struct Hierarchy {
    grids: Vec<Grid>,
    transfer: Vec<Prolongation>,
    cholesky: Option<Vec<f64>>,
}

impl Hierarchy {
    fn new(domains: &[RasterDomain]) -> Hierarchy {
        let mut grids: Vec<Grid> = Vec::new();
        for d in domains {
            grids.push(Grid::new(d));
            if grids.last().unwrap().len() <= DIRECT_SIZE {
                break;
            }
        }
        let transfer = grids.windows(2).map(|w| Prolongation::new(&w[0], &w[1])).collect();
        let last = grids.last().unwrap();
        let cholesky = (last.len() <= DIRECT_SIZE).then(|| last.dense_cholesky());
        Hierarchy { grids, transfer, cholesky }
    }

    fn vcycle(&self, level: usize, b: &[f64], x: &mut [f64]) {
        let g = &self.grids[level];
        x.iter_mut().for_each(|v| *v = 0.0);
        if level + 1 == self.grids.len() {
            match &self.cholesky {
                Some(l) => cholesky_solve(l, g.len(), b, x),
                None => {
                    for _ in 0..20 {
                        g.gs_sweep(x, b, true);
                        g.gs_sweep(x, b, false);
                    }
                }
            }
            return;
        }
        for _ in 0..2 {
            g.gs_sweep(x, b, true);
        }
        let mut r = vec![0.0; g.len()];
        g.apply(x, &mut r);
        r.iter_mut().zip(b).for_each(|(r, b)| *r = b - *r);
        let nc = self.grids[level + 1].len();
        let mut bc = vec![0.0; nc];
        self.transfer[level].restrict(&r, &mut bc);
        let mut xc = vec![0.0; nc];
        self.vcycle(level + 1, &bc, &mut xc);
        self.transfer[level].prolong_add(&xc, x);
        for _ in 0..2 {
            g.gs_sweep(x, b, false);
        }
    }
}

fn cholesky_solve(l: &[f64], n: usize, b: &[f64], x: &mut [f64]) {
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v -= l[i * n + k] * x[k];
        }
        x[i] = v / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut v = x[i];
        for k in i + 1..n {
            v -= l[k * n + i] * x[k];
        }
        x[i] = v / l[i * n + i];
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

enum SolveFailure {
    /// Non-positive curvature: the shift is above the spectrum's bottom.
    Indefinite,
    Budget,
}

struct Solver<'a> {
    h: &'a Hierarchy,
    iterations: usize,
    cap: usize,
}

impl Solver<'_> {
    /// Preconditioned CG for `(A − σ)x = b`.
    fn pcg(&mut self, sigma: f64, b: &[f64], x: &mut [f64]) -> Result<(), SolveFailure> {
        let g = &self.h.grids[0];
        let n = g.len();
        let op = |v: &[f64], out: &mut [f64]| {
            g.apply(v, out);
            out.iter_mut().zip(v).for_each(|(o, v)| *o -= sigma * v);
        };
        x.iter_mut().for_each(|v| *v = 0.0);
        let mut r = b.to_vec();
        let target = 1e-7 * norm(&r);
        let mut z = vec![0.0; n];
        self.h.vcycle(0, &r, &mut z);
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut ap = vec![0.0; n];
        while norm(&r) > target {
            if self.iterations >= self.cap {
                return Err(SolveFailure::Budget);
            }
            self.iterations += 1;
            op(&p, &mut ap);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) || !(rz > 0.0) {
                return Err(SolveFailure::Indefinite);
            }
            let alpha = rz / pap;
            x.iter_mut().zip(&p).for_each(|(x, p)| *x += alpha * p);
            r.iter_mut().zip(&ap).for_each(|(r, a)| *r -= alpha * a);
                self.h.vcycle(0, &r, &mut z);
                let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            p.iter_mut().zip(&z).for_each(|(p, z)| *p = z + beta * *p);
        }
        Ok(())
    }

    fn residual(&self, x: &[f64], rho: f64) -> f64 {
        let mut ax = vec![0.0; x.len()];
        self.h.grids[0].apply(x, &mut ax);
        ax.iter().zip(x).map(|(a, x)| (a - rho * x).powi(2)).sum::<f64>().sqrt() / (rho * norm(x))
    }

    /// Block inverse iteration with Rayleigh–Ritz on `x.len()` vectors; the
    /// first `k` Ritz values are tracked for convergence.
    fn subspace_iteration(&mut self, mut x: Vec<Vec<f64>>, sigma: f64, k: usize, tol: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>), OracleError> {
        let n = x[0].len();
        orthonormalize(&mut x);
        let mut theta = self.ritz(&mut x);
        let mut shift = sigma;
        let mut y = vec![vec![0.0; n]; x.len()];
        loop {
            let mut failed = None;
            for (xi, yi) in x.iter().zip(y.iter_mut()) {
                if let Err(e) = self.pcg(shift, xi, yi) {
                    failed = Some(e);
                    break;
                }
            }
            match failed {
                None => {}
                Some(SolveFailure::Indefinite) if shift != 0.0 => {
                    shift = 0.0;
                    continue;
                }
                Some(_) => {
                    return Err(OracleError::ConvergenceError {
                        iterations: self.iterations,
                        residual: self.residual(&x[0], theta[0]),
                    })
                }
            }
            std::mem::swap(&mut x, &mut y);
            orthonormalize(&mut x);
            let next = self.ritz(&mut x);
            let done = (0..k).all(|i| (next[i] - theta[i]).abs() <= tol * next[i]);
            theta = next;
            if done {
                return Ok((theta, x));
            }
        }
    }

    /// Replaces the orthonormal block `x` by its Ritz vectors, ascending.
    fn ritz(&self, x: &mut [Vec<f64>]) -> Vec<f64> {
        let b = x.len();
        let n = x[0].len();
        let g = &self.h.grids[0];
        let ax: Vec<Vec<f64>> = x
            .iter()
            .map(|v| {
                let mut out = vec![0.0; n];
                g.apply(v, &mut out);
                out
            })
            .collect();
        let mut h = vec![vec![0.0; b]; b];
        for i in 0..b {
            for j in 0..b {
                h[i][j] = 0.5 * (dot(&x[i], &ax[j]) + dot(&x[j], &ax[i]));
            }
        }
        let (vals, vecs) = jacobi_eigen(h);
        let old: Vec<Vec<f64>> = x.to_vec();
        for (c, xi) in x.iter_mut().enumerate() {
            for (p, v) in xi.iter_mut().enumerate() {
                *v = (0..b).map(|r| old[r][p] * vecs[r][c]).sum();
            }
        }
        vals
    }
}

fn orthonormalize(x: &mut [Vec<f64>]) {
    for i in 0..x.len() {
        for _ in 0..2 {
            for j in 0..i {
                let c = dot(&x[i], &x[j]);
                let (head, tail) = x.split_at_mut(i);
                tail[0].iter_mut().zip(&head[j]).for_each(|(a, b)| *a -= c * b);
            }
        }
        let nx = norm(&x[i]);
        x[i].iter_mut().for_each(|v| *v /= nx);
    }
}

/// Cyclic Jacobi for a small symmetric matrix; eigenvalues ascending, with
/// eigenvectors as the columns of the second result.
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let vals = order.iter().map(|&i| a[i][i]).collect();
    let vecs = (0..n).map(|r| order.iter().map(|&c| v[r][c]).collect()).collect();
    (vals, vecs)
}

/// Eigenpairs of one raster.
#[derive(Debug, Clone)]
pub struct LevelSolution {
    pub values: Vec<f64>,
    /// Unit eigenvectors indexed like [`RasterDomain::cells`].
    pub vectors: Vec<Vec<f64>>,
    pub iterations: usize,
}

fn start_vector(nodes: &[(i64, i64)], seed: u64) -> Vec<f64> {
    // deterministic noise on top of a constant, so no symmetry class is missed
    nodes
        .iter()
        .map(|&(i, j)| {
            let mut z = (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (j as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F) ^ seed;
            z ^= z >> 29;
            z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z ^= z >> 32;
            1.0 + (z % 1000) as f64 / 1000.0
        })
        .collect()
}

/// Solves for `k` eigenpairs plus one guard vector; returns the full block
/// so that finer grids can start from it.
fn solve_chain(chain: &[RasterDomain], k: usize, guess: Option<(&[Vec<f64>], &[f64])>, opts: &SolverOptions, spent: usize) -> Result<(LevelSolution, Vec<Vec<f64>>), OracleError> {
    let hier = Hierarchy::new(chain);
    let mut solver = Solver {
        h: &hier,
        iterations: spent,
        cap: opts.iteration_cap,
    };
    let n = hier.grids[0].len();
    let k = k.min(n);
    let b = (k + 1).min(n);
    let (x0, sigma) = match guess {
        Some((vecs, vals)) if vecs.len() == b && !hier.transfer.is_empty() => {
            let x = vecs
                .iter()
                .map(|v| {
                    let mut x = vec![0.0; n];
                    hier.transfer[0].prolong_add(v, &mut x);
                    x
                })
                .collect();
            // coarse rasters sit below the fine spectrum; stay under it
            (x, 0.8 * vals[0])
        }
        _ => ((0..b as u64).map(|s| start_vector(&hier.grids[0].nodes, s)).collect(), 0.0),
    };
    let (values, vectors) = solver.subspace_iteration(x0, sigma, k, opts.tol)?;
    let sol = LevelSolution {
        values: values[..k].to_vec(),
        vectors: vectors[..k].to_vec(),
        iterations: solver.iterations - spent,
    };
    Ok((sol, vectors))
}

fn coarsening_chain(d: &RasterDomain) -> Vec<RasterDomain> {
    let mut chain = vec![d.clone()];
    while chain.last().unwrap().count() > DIRECT_SIZE {
        match chain.last().unwrap().coarsen() {
            Ok(c) => chain.push(c),
            Err(_) => break,
        }
    }
    chain
}

/// The `k` smallest discrete eigenvalues of a single raster.
pub fn solve_level(d: &RasterDomain, k: usize, opts: &SolverOptions) -> Result<LevelSolution, OracleError> {
    Ok(solve_chain(&coarsening_chain(d), k, None, opts, 0)?.0)
}

/// `λ₁` (and `λ₂` for `k = 2`) of a raster, extrapolated from the raster and
/// its coarsenings.
pub fn eigs_with(d: &RasterDomain, k: usize, opts: &SolverOptions) -> Result<EigenResult, OracleError> {
    let k = k.clamp(1, 2);
    let mut chain = vec![d.clone()];
    while chain.len() < opts.levels.max(1) {
        match chain.last().unwrap().coarsen() {
            Ok(c) if c.count() >= MIN_LEVEL_CELLS.max(k + 1) => chain.push(c),
            _ => break,
        }
    }
    let levels = chain.len();
    let mut solutions: Vec<LevelSolution> = Vec::new();
    let mut block: Vec<Vec<f64>> = Vec::new();
    let mut spent = 0;
    for l in (0..levels).rev() {
        let guess = solutions.last().map(|s| (block.as_slice(), s.values.as_slice()));
        let (sol, full) = solve_chain(&coarsening_chain(&chain[l]), k, guess, opts, spent)?;
        spent += sol.iterations;
        solutions.push(sol);
        block = full;
    }
    solutions.reverse();
    let mut orders = Vec::new();
    let mut extrapolated = Vec::new();
    let mut error = Vec::new();
    for m in 0..solutions[0].values.len() {
        let at = |l: usize| solutions[l].values[m];
        // staircase boundaries converge at first order unless three grids
        // show otherwise
        let p = match levels {
            1 => f64::NAN,
            2 => 1.0,
            _ => {
                let ratio = (at(2) - at(1)) / (at(1) - at(0));
                if ratio.is_finite() && ratio > 1.0 {
                    ratio.log2().clamp(1.0, 2.0)
                } else {
                    1.0
                }
            }
        };
        let extra = |p: f64| at(0) + (at(0) - at(1)) / (2f64.powf(p) - 1.0);
        orders.push(p);
        if levels == 1 {
            extrapolated.push(at(0));
            // a lone grid carries no error information
            error.push(at(0));
        } else {
            let e = extra(p);
            extrapolated.push(e);
            error.push((e - at(0)).abs().max((extra(1.0) - e).abs()));
        }
    }
    Ok(EigenResult {
        resolutions: chain.iter().map(|c| 1.0 / c.h()).collect(),
        levels: solutions.iter().map(|s| s.values.clone()).collect(),
        orders,
        extrapolated,
        error,
        iterations: spent,
        components: d.components(),
    })
}

pub fn eigs(d: &RasterDomain, k: usize) -> Result<EigenResult, OracleError> {
    eigs_with(d, k, &SolverOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::rasterize;
    use std::f64::consts::PI;

    const SQUARE: [[f64; 2]; 4] = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];

    #[test]
    fn square_matches_discrete_spectrum() {
        // 5-point eigenvalues on the (n−1)² interior nodes are known in closed form
        let n = 32.0;
        let d = rasterize(&SQUARE, n).unwrap();
        let s = solve_level(&d, 2, &SolverOptions::default()).unwrap();
        let mode = |k: f64| 4.0 * n * n * (k * PI / (2.0 * n)).sin().powi(2);
        assert!((s.values[0] - 2.0 * mode(1.0)).abs() < 1e-8 * s.values[0]);
        assert!((s.values[1] - mode(1.0) - mode(2.0)).abs() < 1e-8 * s.values[1]);
    }

    #[test]
    fn deflated_vector_is_orthogonal() {
        let t = [[0.0, 0.0], [1.0, 0.0], [0.3, 0.7]];
        let d = rasterize(&t, 48.0).unwrap();
        let s = solve_level(&d, 2, &SolverOptions::default()).unwrap();
        assert!(s.values[1] > s.values[0]);
        assert!(dot(&s.vectors[0], &s.vectors[1]).abs() < 1e-8);
        assert!((norm(&s.vectors[0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multigrid_agrees_with_direct_solve() {
        // a grid small enough for the dense path against one that needs cycles
        let t = [[0.0, 0.0], [1.0, 0.0], [0.4, 0.9]];
        for res in [16.0, 64.0] {
            let d = rasterize(&t, res).unwrap();
            let s = solve_level(&d, 1, &SolverOptions::default()).unwrap();
            let g = Grid::new(&d);
            let mut ax = vec![0.0; g.len()];
            g.apply(&s.vectors[0], &mut ax);
            let r: f64 = ax.iter().zip(&s.vectors[0]).map(|(a, x)| (a - s.values[0] * x).powi(2)).sum::<f64>().sqrt();
            assert!(r < 1e-4 * s.values[0], "res {res}: {r}");
        }
    }

    #[test]
    fn unit_square_extrapolated() {
        let d = rasterize(&SQUARE, 128.0).unwrap();
        let e = eigs(&d, 2).unwrap();
        assert_eq!(e.resolutions, vec![128.0, 64.0, 32.0]);
        assert!((e.lambda1() / (2.0 * PI * PI) - 1.0).abs() < 1e-3);
        assert!((e.lambda2().unwrap() / (5.0 * PI * PI) - 1.0).abs() < 2e-3);
        assert!((e.orders[0] - 2.0).abs() < 0.05);
    }

    #[test]
    fn split_raster_spectrum_is_union() {
        // a 20×20 block and a 10×10 block three columns apart
        let big = (0..20).flat_map(|i| (0..20).map(move |j| (i, j)));
        let small = (23..33).flat_map(|i| (0..10).map(move |j| (i, j)));
        let h = 0.05;
        let d = RasterDomain::from_cells(h, [0.0, 0.0], big.chain(small).collect::<Vec<_>>()).unwrap();
        let s = solve_level(&d, 2, &SolverOptions::default()).unwrap();
        let mode = |n: f64, a: f64| 4.0 / (h * h) * (a * PI / (2.0 * (n + 1.0))).sin().powi(2);
        // both lowest modes live on the larger block
        let want = [2.0 * mode(20.0, 1.0), mode(20.0, 1.0) + mode(20.0, 2.0)];
        assert!(2.0 * mode(10.0, 1.0) > want[1]);
        for (got, want) in s.values.iter().zip(want) {
            assert!((got - want).abs() < 1e-8 * want, "{got} vs {want}");
        }
        assert_eq!(eigs(&d, 1).unwrap().components, 2);
    }

    #[test]
    fn iteration_cap_reported() {
        let d = rasterize(&SQUARE, 64.0).unwrap();
        let opts = SolverOptions {
            iteration_cap: 3,
            ..SolverOptions::default()
        };
        assert!(matches!(eigs_with(&d, 1, &opts), Err(OracleError::ConvergenceError { .. })));
    }
}
