//! Grid scans: positivity of the residual contangle and its monotonicity in
//! squeezing, party number and number of traced modes.

use rayon::prelude::*;

use crate::config::Tolerances;
use crate::error::{domain, Result};
use crate::gaussian::check_squeezing;

use super::decomposition::gaussian_decomposition;
use super::residual::ResidualEvaluator;

/// Cartesian grid over kept modes `N`, traced modes `M` and average squeezing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanGrid {
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub r_bar: Vec<f64>,
}

impl ScanGrid {
    pub fn new(n: Vec<usize>, m: Vec<usize>, r_bar: Vec<f64>) -> Result<Self> {
        if let Some(bad) = n.iter().find(|&&v| v < 2) {
            return Err(domain(format!("grid contains N = {bad}; need N >= 2")));
        }
        for &r in &r_bar {
            check_squeezing(r)?;
        }
        Ok(ScanGrid { n, m, r_bar })
    }

    pub fn len(&self) -> usize {
        self.n.len() * self.m.len() * self.r_bar.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub n: usize,
    pub m: usize,
    pub r_bar: f64,
    pub value: f64,
}

/// Residuals over a [`ScanGrid`], indexed `[n][m][r_bar]` by grid position.
#[derive(Debug, Clone)]
pub struct ResidualCube {
    pub grid: ScanGrid,
    values: Vec<f64>,
    bits: Vec<usize>,
}

impl ResidualCube {
    fn index(&self, i_n: usize, i_m: usize, i_r: usize) -> usize {
        (i_n * self.grid.m.len() + i_m) * self.grid.r_bar.len() + i_r
    }

    pub fn value(&self, i_n: usize, i_m: usize, i_r: usize) -> f64 {
        self.values[self.index(i_n, i_m, i_r)]
    }

    /// Working precision the point was accepted at (0 for exact zeros).
    pub fn bits(&self, i_n: usize, i_m: usize, i_r: usize) -> usize {
        self.bits[self.index(i_n, i_m, i_r)]
    }

    pub fn point(&self, i_n: usize, i_m: usize, i_r: usize) -> GridPoint {
        GridPoint {
            n: self.grid.n[i_n],
            m: self.grid.m[i_m],
            r_bar: self.grid.r_bar[i_r],
            value: self.value(i_n, i_m, i_r),
        }
    }

    /// Points in grid order: `N`-major, then `M`, then squeezing.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        let (nn, nm, nr) = (self.grid.n.len(), self.grid.m.len(), self.grid.r_bar.len());
        (0..nn).flat_map(move |a| (0..nm).flat_map(move |b| (0..nr).map(move |c| self.point(a, b, c))))
    }

    pub fn max_bits(&self) -> usize {
        self.bits.iter().copied().max().unwrap_or(0)
    }
}

/// Evaluates the residual contangle at every grid point.
///
/// Work is split by squeezing value; each worker owns one evaluator so term
/// tables are shared between all `(N, M)` with the same total mode count.
pub fn evaluate_cube(grid: &ScanGrid, tol: &Tolerances) -> Result<ResidualCube> {
    let grid = ScanGrid::new(grid.n.clone(), grid.m.clone(), grid.r_bar.clone())?;
    // Ascending N within each M lets the evaluator reuse the last accepted precision.
    let mut n_order: Vec<usize> = (0..grid.n.len()).collect();
    n_order.sort_by_key(|&i| grid.n[i]);

    let columns: Vec<Vec<(f64, usize)>> = grid
        .r_bar
        .par_iter()
        .map(|&r| {
            let mut ev = ResidualEvaluator::new(r, *tol)?;
            let mut col = vec![(0.0, 0); grid.n.len() * grid.m.len()];
            for i_m in 0..grid.m.len() {
                for &i_n in &n_order {
                    let out = ev.residual(grid.n[i_n], grid.m[i_m])?;
                    col[i_n * grid.m.len() + i_m] = (out.value, out.bits);
                }
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;

    let nr = grid.r_bar.len();
    let mut values = vec![0.0; grid.len()];
    let mut bits = vec![0; grid.len()];
    for (i_r, col) in columns.into_iter().enumerate() {
        for (nm_idx, (v, b)) in col.into_iter().enumerate() {
            values[nm_idx * nr + i_r] = v;
            bits[nm_idx * nr + i_r] = b;
        }
    }
    Ok(ResidualCube { grid, values, bits })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport {
    pub evaluated: usize,
    /// Smallest value; ties go to the lowest grid index.
    pub min: Option<GridPoint>,
    /// Points below `-tol.positivity_floor`.
    pub violations: Vec<GridPoint>,
    pub max_bits: usize,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `G_res >= -tol.positivity_floor` on every grid point.
pub fn positivity_scan(grid: &ScanGrid, tol: &Tolerances) -> Result<PositivityReport> {
    let cube = evaluate_cube(grid, tol)?;
    Ok(positivity_of(&cube, tol))
}

pub fn positivity_of(cube: &ResidualCube, tol: &Tolerances) -> PositivityReport {
    let mut min: Option<GridPoint> = None;
    let mut violations = Vec::new();
    for p in cube.points() {
        if min.is_none_or(|m| p.value < m.value) {
            min = Some(p);
        }
        if p.value < -tol.positivity_floor {
            violations.push(p);
        }
    }
    PositivityReport {
        evaluated: cube.grid.len(),
        min,
        violations,
        max_bits: cube.max_bits(),
    }
}

/// Parameter along which monotonicity is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Strict increase in the average squeezing.
    RBar,
    /// Non-increase in the number of kept modes.
    N,
    /// Non-increase in the number of traced modes.
    M,
}

/// Consecutive grid points (along the scanned axis) that break the expected order.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityViolation {
    pub before: GridPoint,
    pub after: GridPoint,
    /// `Some(K)` when the violation is in the `K`-partite term of the decomposition.
    pub term: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub axis: Axis,
    pub pairs_checked: usize,
    pub term_pairs_checked: usize,
    pub violations: Vec<MonotonicityViolation>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn sorted_indices<T: PartialOrd>(v: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).expect("grid values are finite"));
    idx
}

/// Checks the residual along `axis` for every fixed pair of the other two parameters.
///
/// Along the squeezing axis every `K`-partite term of the strong-monogamy
/// decomposition is also required to be nondecreasing.
pub fn monotonicity_scan(axis: Axis, grid: &ScanGrid, tol: &Tolerances) -> Result<MonotonicityReport> {
    let cube = evaluate_cube(grid, tol)?;
    let mut report = monotonicity_of(&cube, axis);
    if axis == Axis::RBar {
        check_promiscuity(&cube.grid, tol, &mut report)?;
    }
    Ok(report)
}

/// Residual-only monotonicity check on an already evaluated cube.
pub fn monotonicity_of(cube: &ResidualCube, axis: Axis) -> MonotonicityReport {
    let g = &cube.grid;
    let (on, om, or) = (sorted_indices(&g.n), sorted_indices(&g.m), sorted_indices(&g.r_bar));
    let mut report = MonotonicityReport {
        axis,
        pairs_checked: 0,
        term_pairs_checked: 0,
        violations: Vec::new(),
    };
    let mut check = |a: GridPoint, b: GridPoint| {
        report.pairs_checked += 1;
        let ok = match axis {
            Axis::RBar => b.value > a.value,
            Axis::N | Axis::M => b.value <= a.value,
        };
        if !ok {
            report.violations.push(MonotonicityViolation {
                before: a,
                after: b,
                term: None,
            });
        }
    };
    match axis {
        Axis::RBar => {
            for &i in &on {
                for &j in &om {
                    for w in or.windows(2) {
                        check(cube.point(i, j, w[0]), cube.point(i, j, w[1]));
                    }
                }
            }
        }
        Axis::N => {
            for &j in &om {
                for &k in &or {
                    for w in on.windows(2) {
                        check(cube.point(w[0], j, k), cube.point(w[1], j, k));
                    }
                }
            }
        }
        Axis::M => {
            for &i in &on {
                for &k in &or {
                    for w in om.windows(2) {
                        check(cube.point(i, w[0], k), cube.point(i, w[1], k));
                    }
                }
            }
        }
    }
    report
}

fn check_promiscuity(grid: &ScanGrid, tol: &Tolerances, report: &mut MonotonicityReport) -> Result<()> {
    let pairs: Vec<(usize, usize)> = grid
        .n
        .iter()
        .flat_map(|&n| grid.m.iter().map(move |&m| (n, m)))
        .collect();
    // terms[r][pair] = genuine K-partite values of that state.
    let terms: Vec<Vec<Vec<(usize, f64)>>> = grid
        .r_bar
        .par_iter()
        .map(|&r| {
            let mut ev = ResidualEvaluator::new(r, *tol)?;
            pairs
                .iter()
                .map(|&(n, m)| Ok(gaussian_decomposition(&mut ev, n, m)?.genuine_terms()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let order = sorted_indices(&grid.r_bar);
    for (pi, &(n, m)) in pairs.iter().enumerate() {
        for w in order.windows(2) {
            let (lo, hi) = (&terms[w[0]][pi], &terms[w[1]][pi]);
            for (&(k, before), &(_, after)) in lo.iter().zip(hi) {
                report.term_pairs_checked += 1;
                if after < before {
                    let at = |i: usize, value| GridPoint { n, m, r_bar: grid.r_bar[i], value };
                    report.violations.push(MonotonicityViolation {
                        before: at(w[0], before),
                        after: at(w[1], after),
                        term: Some(k),
                    });
                }
            }
        }
    }
    Ok(())
}
