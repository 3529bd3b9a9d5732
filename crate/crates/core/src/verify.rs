//! Named verification suites over built-in grids.
//!
//! Each suite re-checks one family of invariants and returns a
//! [`SuiteReport`] with the number of checks, the worst observed error (or
//! smallest margin) and the run time. The grids are the acceptance grids.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::closed_forms::{bipartite_contangle_one_vs_k, det_reduced, ContangleValue};
use crate::config::{rel_diff, Tolerances};
use crate::error::{domain, Error, Result};
use crate::gaussian::{is_physical, reduced_standard_form};
use crate::monogamy::{
    comparison_alternating_sum, evaluate_cube, gamma_closed_form, molecular_residual, monotonicity_of,
    monotonicity_scan, partitions_of, positivity_of, recursive_decomposition, residual_contangle,
    symmetric_closed_form, Axis, ComparisonSequence, MoleculePartition, ResidualEvaluator, ScanGrid,
};
use crate::teleportation::{fidelity_from_squeezing, residual_from_fidelity, squeezing_from_fidelity};
use crate::SymmetricState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Positivity,
    Monotonicity,
    Oracle,
    Recursion,
    Gamma,
    Fidelity,
    Scale,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 7] = [
        Suite::Positivity,
        Suite::Monotonicity,
        Suite::Oracle,
        Suite::Recursion,
        Suite::Gamma,
        Suite::Fidelity,
        Suite::Scale,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Positivity => "positivity",
            Suite::Monotonicity => "monotonicity",
            Suite::Oracle => "oracle",
            Suite::Recursion => "recursion",
            Suite::Gamma => "gamma",
            Suite::Fidelity => "fidelity",
            Suite::Scale => "scale",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::INDIVIDUAL
            .iter()
            .chain(std::iter::once(&Suite::All))
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| domain(format!("unknown suite '{s}'")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Human-readable worst-case margins.
    pub margins: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            checks: 0,
            failures: Vec::new(),
            margins: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}] {}: {} checks, {} failures, {:.2?}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.checks,
            self.failures.len(),
            self.elapsed
        )?;
        for m in &self.margins {
            writeln!(f, "    {m}")?;
        }
        for fail in self.failures.iter().take(20) {
            writeln!(f, "    failure: {fail}")?;
        }
        if self.failures.len() > 20 {
            writeln!(f, "    ... {} more", self.failures.len() - 20)?;
        }
        Ok(())
    }
}

/// `lo, lo + step, ..., hi` computed by index to avoid drift.
pub fn float_steps(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count).map(|i| lo + step * i as f64).collect()
}

/// Runs one suite (or every suite for [`Suite::All`]).
pub fn run(suite: Suite, tol: &Tolerances) -> Result<Vec<SuiteReport>> {
    if suite == Suite::All {
        return Suite::INDIVIDUAL.iter().map(|&s| run_one(s, tol)).collect();
    }
    Ok(vec![run_one(suite, tol)?])
}

fn run_one(suite: Suite, tol: &Tolerances) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut report = SuiteReport::new(suite);
    match suite {
        Suite::Positivity => positivity(tol, &mut report)?,
        Suite::Monotonicity => monotonicity(tol, &mut report)?,
        Suite::Oracle => oracle(tol, &mut report)?,
        Suite::Recursion => recursion(tol, &mut report)?,
        Suite::Gamma => gamma(tol, &mut report)?,
        Suite::Fidelity => fidelity(tol, &mut report)?,
        Suite::Scale => scale(tol, &mut report)?,
        Suite::All => unreachable!("expanded by run"),
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Grid of the positivity check: `N in 2..=100`, `M in 0..=20`, `r in {0.05, ..., 3.0}`.
pub fn positivity_grid() -> ScanGrid {
    ScanGrid {
        n: (2..=100).collect(),
        m: (0..=20).collect(),
        r_bar: float_steps(0.05, 3.0, 0.05),
    }
}

/// Large-`N` pure-state spot checks `(N, r)`.
pub const POSITIVITY_SPOTS: [(usize, f64); 4] = [(500, 0.5), (500, 1.15), (1000, 0.5), (1000, 1.15)];

fn positivity(tol: &Tolerances, report: &mut SuiteReport) -> Result<()> {
    let cube = evaluate_cube(&positivity_grid(), tol)?;
    let pos = positivity_of(&cube, tol);
    report.checks += pos.evaluated;
    for v in &pos.violations {
        report.failures.push(format!("G_res({}, {}, {}) = {:e}", v.n, v.m, v.r_bar, v.value));
    }
    if let Some(min) = pos.min {
        report.margins.push(format!(
            "grid minimum {:e} at N = {}, M = {}, r = {} (floor -{:e}); max precision {} bits",
            min.value, min.n, min.m, min.r_bar, tol.positivity_floor, pos.max_bits
        ));
    }
    for (n, r) in POSITIVITY_SPOTS {
        let out = ResidualEvaluator::new(r, *tol)?.residual(n, 0)?;
        report.check(out.value >= -tol.positivity_floor, || format!("G_res({n}, 0, {r}) = {:e}", out.value));
        report
            .margins
            .push(format!("spot N = {n}, r = {r}: {:e} at {} bits", out.value, out.bits));
    }
    Ok(())
}

fn monotonicity(tol: &Tolerances, report: &mut SuiteReport) -> Result<()> {
    let along_r = ScanGrid::new((3..=8).collect(), vec![0, 2], float_steps(0.1, 3.0, 0.1))?;
    let rep = monotonicity_scan(Axis::RBar, &along_r, tol)?;
    report.checks += rep.pairs_checked + rep.term_pairs_checked;
    for v in &rep.violations {
        report.failures.push(format!("squeezing axis: {v:?}"));
    }
    report.margins.push(format!(
        "squeezing axis: {} residual steps, {} K-partite steps",
        rep.pairs_checked, rep.term_pairs_checked
    ));

    let along_n = ScanGrid::new((2..=100).collect(), vec![0], vec![0.5, 1.0])?;
    let cube = evaluate_cube(&along_n, tol)?;
    let rep = monotonicity_of(&cube, Axis::N);
    report.checks += rep.pairs_checked;
    for v in &rep.violations {
        report.failures.push(format!("party axis: {v:?}"));
    }
    let tail = cube.value(along_n.n.len() - 1, 0, 1) / cube.value(0, 0, 1);
    report.margins.push(format!("party axis: G(100)/G(2) at r = 1 is {tail:e}"));

    let along_m = ScanGrid::new((2..=10).collect(), (0..=10).collect(), vec![0.5, 1.0])?;
    let rep = monotonicity_of(&evaluate_cube(&along_m, tol)?, Axis::M);
    report.checks += rep.pairs_checked;
    for v in &rep.violations {
        report.failures.push(format!("traced axis: {v:?}"));
    }

    large_n_sweep(tol, report)?;

    for total in [6usize, 12] {
        for r in [0.5, 1.0] {
            let parts = partitions_of(total, r)?;
            for w in parts.windows(2) {
                report.check(w[1].1 > w[0].1, || {
                    format!(
                        "{total} modes, r = {r}: size {} gives {} <= size {} gives {}",
                        w[1].0.size, w[1].1, w[0].0.size, w[0].1
                    )
                });
            }
        }
    }
    Ok(())
}

/// Party counts of the large-`N` sweep: every `N <= 10`, then roughly
/// logarithmic steps up to 1000.
pub fn sweep_parties() -> Vec<usize> {
    let mut n: Vec<usize> = (2..=10).collect();
    let (lo, hi, count) = (10f64.ln(), 1000f64.ln(), 12);
    n.extend((1..=count).map(|i| (lo + (hi - lo) * i as f64 / count as f64).exp().round() as usize));
    n.dedup();
    n
}

/// Squeezing values of the large-`N` sweep, up to about 10 dB.
pub fn sweep_squeezing() -> Vec<f64> {
    let mut r = vec![0.05];
    r.extend(float_steps(0.1, 1.1, 0.1));
    r.push(1.15);
    r
}

/// Pure states, `N` up to 1000: residuals compared in extended precision,
/// since the largest `N` underflow binary64 at small squeezing.
fn large_n_sweep(tol: &Tolerances, report: &mut SuiteReport) -> Result<()> {
    let ns = sweep_parties();
    let rs = sweep_squeezing();
    let mut surface = Vec::with_capacity(rs.len());
    for &r in &rs {
        let mut ev = ResidualEvaluator::new(r, *tol)?;
        let row = ns.iter().map(|&n| ev.residual_big(n, 0)).collect::<Result<Vec<_>>>()?;
        surface.push(row);
    }
    for (i_r, row) in surface.iter().enumerate() {
        for (i_n, g) in row.iter().enumerate() {
            let (n, r) = (ns[i_n], rs[i_r]);
            report.check(!g.value.is_negative() || g.to_f64() >= -tol.positivity_floor, || {
                format!("large-N sweep: G({n}, 0, {r}) = {}", g.value)
            });
            if i_r > 0 {
                let prev = &surface[i_r - 1][i_n].value;
                report.check(g.value > *prev, || format!("large-N sweep: not increasing in r at N = {n}, r = {r}"));
            }
            if i_n > 0 {
                report.check(g.value <= row[i_n - 1].value, || {
                    format!("large-N sweep: increasing in N at N = {n}, r = {r}")
                });
            }
        }
        let (first, last) = (row[0].to_f64(), row[row.len() - 1].to_f64());
        report.check(last <= TAIL_RATIO * first, || {
            format!("large-N sweep: G({}) / G(2) = {:e} at r = {}", ns[ns.len() - 1], last / first, rs[i_r])
        });
    }
    let top = &surface[rs.len() - 1];
    report.margins.push(format!(
        "large-N sweep: {} x {} points, G({}, 0, {}) = {:e}, max precision {} bits",
        ns.len(),
        rs.len(),
        ns[ns.len() - 1],
        rs[rs.len() - 1],
        top[top.len() - 1].to_f64(),
        surface.iter().flatten().map(|g| g.bits).max().unwrap_or(0)
    ));
    Ok(())
}

/// "Tends to zero" at the largest `N`: `G(N_max) <= TAIL_RATIO * G(2)` at every squeezing.
pub const TAIL_RATIO: f64 = 1e-12;

fn oracle(tol: &Tolerances, report: &mut SuiteReport) -> Result<()> {
    let mut worst = 0.0f64;
    for n in 1..=12 {
        for r in float_steps(0.0, 2.0, 0.25) {
            for k in 1..=n {
                let cm = reduced_standard_form(k, n, r)?;
                let gap = rel_diff(cm.determinant(), det_reduced(k, n, r)?);
                worst = worst.max(gap);
                report.check(gap <= tol.det_oracle_rel, || format!("det K = {k}, N = {n}, r = {r}: rel {gap:e}"));
                report.check(is_physical(&cm, tol)?, || format!("unphysical reduction K = {k}, N = {n}, r = {r}"));
            }
        }
    }
    report
        .margins
        .push(format!("worst determinant gap {worst:e} (bound {:e})", tol.det_oracle_rel));
    Ok(())
}

fn recursion(tol: &Tolerances, report: &mut SuiteReport) -> Result<()> {
    let mut worst = 0.0f64;
    for n in 3..=8usize {
        for m in [0usize, 1, 3] {
            for r in float_steps(0.0, 2.0, 0.25) {
                let t = n + m;
                let d = recursive_decomposition(n, |_, others| bipartite_contangle_one_vs_k(others.len(), t, r))?;
                let bip = (1..n)
                    .map(|k| bipartite_contangle_one_vs_k(k, t, r))
                    .collect::<Result<Vec<ContangleValue>>>()?;
                let closed = symmetric_closed_form(&bip, n)?.value();
                let gap = rel_diff(d.strong_residual, closed);
                worst = worst.max(gap);
                report.check(gap <= tol.recursion_rel, || format!("N = {n}, M = {m}, r = {r}: rel {gap:e}"));
                let scale = d.bipartite_total.abs();
                report.check(d.bookkeeping_error().abs() <= tol.bookkeeping_rel * scale, || {
                    format!("bookkeeping N = {n}, M = {m}, r = {r}")
                });
                report.check(d.strong_residual <= d.weak_residual + tol.strong_vs_weak_abs, || {
                    format!("strong > weak at N = {n}, M = {m}, r = {r}")
                });
            }
        }
    }
    report
        .margins
        .push(format!("worst recursion/closed-form gap {worst:e} (bound {:e})", tol.recursion_rel));

    let mut worst = 0.0f64;
    for m in 0..=10usize {
        let mut ev = ResidualEvaluator::new(0.0, *tol)?;
        for r in float_steps(0.1, 3.0, 0.1) {
            if ev.r_bar() != r {
                ev = ResidualEvaluator::new(r, *tol)?;
            }
            let strong = ev.residual(3, m)?.value;
            let weak = ev.weak_residual(3, m)?.value;
            let gap = rel_diff(strong, weak);
            worst = worst.max(gap);
            report.check(gap <= tol.recursion_rel, || format!("N = 3, M = {m}, r = {r}: strong {strong} weak {weak}"));
        }
    }
    report.margins.push(format!("worst N = 3 strong/weak gap {worst:e}"));
    Ok(())
}

fn gamma(tol: &Tolerances, report: &mut SuiteReport) -> Result<()> {
    let mut worst = 0.0f64;
    for n in 2..=30 {
        for b in [0.5, 1.0, 2.0] {
            for c in [0.5, 1.0, 2.0] {
                let sum = comparison_alternating_sum(&ComparisonSequence::new(1.0, b, c, n)?)?;
                let closed = gamma_closed_form(b, c, n)?;
                let gap = rel_diff(sum, closed);
                worst = worst.max(gap);
                report.check(gap <= tol.gamma_rel, || format!("N = {n}, b = {b}, c = {c}: {sum} vs {closed}"));
            }
        }
    }
    let third = comparison_alternating_sum(&ComparisonSequence::new(1.0, 1.0, 1.0, 4)?)?;
    report.check(rel_diff(third, 1.0 / 3.0) <= tol.gamma_rel, || format!("N = 4, b = c = 1 gives {third}"));
    report.margins.push(format!("worst Gamma-identity gap {worst:e} (bound {:e})", tol.gamma_rel));
    Ok(())
}

fn fidelity(tol: &Tolerances, report: &mut SuiteReport) -> Result<()> {
    let grid = float_steps(0.0, 3.0, 0.05);
    let mut worst = 0.0f64;
    for n in 2..=100 {
        let mut prev = f64::NEG_INFINITY;
        for &r in &grid {
            let f = fidelity_from_squeezing(n, r)?;
            let back = squeezing_from_fidelity(n, f)?;
            worst = worst.max((back - r).abs());
            report.check((back - r).abs() <= tol.fidelity_roundtrip_abs, || format!("roundtrip N = {n}, r = {r}: {back}"));
            report.check(f > prev, || format!("fidelity not increasing at N = {n}, r = {r}"));
            if n > 2 {
                let before = fidelity_from_squeezing(n - 1, r)?;
                report.check(r == 0.0 || f < before, || format!("fidelity not decreasing in N at N = {n}, r = {r}"));
            }
            prev = f;
        }
        report.check(fidelity_from_squeezing(n, 0.0)? == 0.5, || format!("F(0) != 1/2 at N = {n}"));
    }
    report
        .margins
        .push(format!("worst roundtrip error {worst:e} (bound {:e})", tol.fidelity_roundtrip_abs));
    for n in [2usize, 3, 4, 10, 50] {
        let mut prev = -1.0;
        for f in float_steps(0.5, 0.95, 0.05) {
            let g = residual_from_fidelity(n, f)?.value();
            report.check(g > prev, || format!("residual not increasing in F at N = {n}, F = {f}"));
            prev = g;
        }
    }
    Ok(())
}

fn scale(tol: &Tolerances, report: &mut SuiteReport) -> Result<()> {
    let mut worst = 0.0f64;
    for size in [1usize, 2, 3, 5] {
        for count in 2..=10 {
            for r in [0.5, 1.0] {
                let rep = molecular_residual(&MoleculePartition::new(size, count)?, 0, r)?;
                let direct = residual_contangle(&SymmetricState::new(count, 0, r)?)?.value();
                let gap = rel_diff(rep.residual.value(), direct).max(rep.max_det_rel_diff);
                worst = worst.max(gap);
                report.check(gap <= tol.molecular_rel, || format!("n = {size}, N = {count}, r = {r}: rel {gap:e}"));
            }
        }
    }
    report
        .margins
        .push(format!("worst molecular gap {worst:e} (bound {:e})", tol.molecular_rel));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::INDIVIDUAL.iter().chain([Suite::All].iter()) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn float_steps_hit_endpoints() {
        let g = float_steps(0.05, 3.0, 0.05);
        assert_eq!(g.len(), 60);
        assert!((g[59] - 3.0).abs() < 1e-12);
        assert_eq!(float_steps(0.0, 2.0, 0.25).len(), 9);
    }

    #[test]
    fn large_n_axes() {
        let n = sweep_parties();
        assert_eq!(n[..9], [2, 3, 4, 5, 6, 7, 8, 9, 10]);
        assert_eq!(n.last(), Some(&1000));
        assert!(n.windows(2).all(|w| w[0] < w[1]));
        let r = sweep_squeezing();
        assert_eq!(r.len(), 13);
        assert_eq!((r[0], r[12]), (0.05, 1.15));
    }

    #[test]
    fn fast_suites_pass() {
        let tol = Tolerances::DEFAULT;
        for suite in [Suite::Gamma, Suite::Scale, Suite::Oracle] {
            let reps = run(suite, &tol).unwrap();
            assert!(reps[0].passed(), "{}", reps[0]);
        }
    }
}
