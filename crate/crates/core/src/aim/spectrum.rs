//! Energy scanning, root refinement and convergence tracking across `k`.

use super::{delta_sequence, delta_value, AimConfig, AimProblem, DeltaValue, Warning};
use crate::error::{Error, Result};
use crate::numerics::PScalar;

/// History of one root candidate across iteration counts.
#[derive(Clone, Debug)]
pub struct RootTrace {
    pub k_history: Vec<(usize, PScalar)>,
    pub converged: bool,
    pub final_k: usize,
    pub warnings: Vec<Warning>,
}

impl RootTrace {
    pub fn estimate(&self) -> &PScalar {
        &self.k_history.last().expect("a trace holds at least one estimate").1
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumRoot {
    pub n: usize,
    pub energy: PScalar,
    pub trace: RootTrace,
}

/// Converged eigenvalues in ascending order, plus the candidates that never
/// settled.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub roots: Vec<SpectrumRoot>,
    pub unconverged: Vec<RootTrace>,
    pub warnings: Vec<Warning>,
    pub config: AimConfig,
}

impl SpectrumResult {
    pub fn energies(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.energy.to_f64()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct RootScan {
    pub roots: Vec<PScalar>,
    pub warnings: Vec<Warning>,
}

fn energy_grid(config: &AimConfig) -> Vec<PScalar> {
    let p = config.precision;
    let lo = PScalar::from_f64(config.e_min, p);
    let hi = PScalar::from_f64(config.e_max, p);
    let n = config.e_grid_points;
    let step = &(&hi - &lo) / &PScalar::from_u64(n as u64 - 1, p);
    (0..n).map(|i| if i + 1 == n { hi.clone() } else { &lo + &step.scale_u64(i as u64) }).collect()
}

/// Sign used for bracketing; exact zeros count as positive.
fn bracket_sign(v: &PScalar) -> i8 {
    if v.signum() < 0 {
        -1
    } else {
        1
    }
}

fn sign_change_cells(values: &[Option<PScalar>]) -> Vec<usize> {
    values
        .windows(2)
        .enumerate()
        .filter_map(|(i, w)| match (&w[0], &w[1]) {
            (Some(a), Some(b)) if bracket_sign(a) != bracket_sign(b) => Some(i),
            _ => None,
        })
        .collect()
}

/// Evaluates `Δ_k` for one fixed `k`, collecting precision diagnostics.
struct DeltaEvaluator<'a> {
    problem: &'a dyn AimProblem,
    x0: PScalar,
    k: usize,
    warnings: Vec<Warning>,
}

impl<'a> DeltaEvaluator<'a> {
    fn new(problem: &'a dyn AimProblem, x0: &PScalar, k: usize) -> Self {
        DeltaEvaluator { problem, x0: x0.clone(), k, warnings: Vec::new() }
    }

    fn note(&mut self, energy: &PScalar, d: &DeltaValue) {
        if d.precision_exhausted() && self.warnings.is_empty() {
            self.warnings.push(Warning::PrecisionExhausted {
                k: self.k,
                energy: energy.to_f64(),
                retained_bits: d.retained_bits.unwrap_or(0),
            });
        }
    }

    fn eval(&mut self, energy: &PScalar) -> Result<PScalar> {
        let d = delta_value(self.problem, energy, self.k, &self.x0)?;
        if !d.value.is_finite() {
            return Err(Error::NonFinite(format!("delta_{} at E={}", self.k, energy.to_f64())));
        }
        self.note(energy, &d);
        Ok(d.value)
    }
}

/// Shrinks a sign-change bracket to width <= `tol` with Illinois steps,
/// falling back to bisection whenever a step fails to halve the bracket.
/// Returns the bracket midpoint.
fn refine_bracket(
    f: &mut impl FnMut(&PScalar) -> Result<PScalar>,
    mut lo: PScalar,
    mut hi: PScalar,
    mut f_lo: PScalar,
    mut f_hi: PScalar,
    tol: &PScalar,
) -> Result<PScalar> {
    let p = lo.precision();
    let half = PScalar::from_ratio(1, 2, p);
    let margin = tol * &half;
    let mut retained = 0i8;
    let mut stalls = 0;
    let lo_sign = bracket_sign(&f_lo);
    debug_assert_ne!(lo_sign, bracket_sign(&f_hi));
    loop {
        let width = &hi - &lo;
        if width <= *tol {
            break;
        }
        let mid = &(&lo + &hi) * &half;
        let mut c = if stalls >= 2 { mid.clone() } else { &(&(&lo * &f_hi) - &(&hi * &f_lo)) / &(&f_hi - &f_lo) };
        if !c.is_finite() || c <= lo || c >= hi {
            c = mid;
        }
        let floor = &lo + &margin;
        let ceil = &hi - &margin;
        if c < floor {
            c = floor;
        } else if c > ceil {
            c = ceil;
        }
        let f_c = f(&c)?;
        if f_c.is_zero() {
            return Ok(c);
        }
        if bracket_sign(&f_c) == lo_sign {
            lo = c;
            f_lo = f_c;
            if retained == 1 {
                f_hi = &f_hi * &half;
            }
            retained = 1;
        } else {
            hi = c;
            f_hi = f_c;
            if retained == -1 {
                f_lo = &f_lo * &half;
            }
            retained = -1;
        }
        if &hi - &lo > &width * &half {
            stalls += 1;
        } else {
            stalls = 0;
        }
    }
    Ok(&(&lo + &hi) * &half)
}

/// Roots of `Δ_k` on the configured energy grid, refined to `root_tol`.
pub fn scan_roots(problem: &dyn AimProblem, k: usize, config: &AimConfig) -> Result<RootScan> {
    config.validate()?;
    if k == 0 {
        return Err(Error::InvalidInput("Δ_k needs k >= 1".into()));
    }
    let x0 = config.x0_scalar();
    let grid = energy_grid(config);
    let mut warnings = Vec::new();
    let mut values = Vec::with_capacity(grid.len());
    for e in &grid {
        let d = delta_value(problem, e, k, &x0)?;
        if d.value.is_finite() {
            values.push(Some(d.value));
        } else {
            warnings.push(Warning::NonFiniteDelta { k, energy: e.to_f64() });
            values.push(None);
        }
    }
    let tol = PScalar::from_f64(config.root_tol, config.precision);
    let mut eval = DeltaEvaluator::new(problem, &x0, k);
    let mut roots = Vec::new();
    for cell in sign_change_cells(&values) {
        let (Some(f_lo), Some(f_hi)) = (&values[cell], &values[cell + 1]) else { continue };
        let mut f = |e: &PScalar| eval.eval(e);
        match refine_bracket(&mut f, grid[cell].clone(), grid[cell + 1].clone(), f_lo.clone(), f_hi.clone(), &tol) {
            Ok(r) => roots.push(r),
            Err(Error::NonFinite(_)) => warnings.push(Warning::NonFiniteDelta { k, energy: grid[cell].to_f64() }),
            Err(e) => return Err(e),
        }
    }
    warnings.append(&mut eval.warnings);
    Ok(RootScan { roots, warnings })
}

#[derive(Debug)]
struct Chain {
    trace: RootTrace,
}

impl Chain {
    fn last(&self) -> &PScalar {
        self.trace.estimate()
    }

    fn last_f64(&self) -> f64 {
        self.last().to_f64()
    }

    /// Typical movement between the last two estimates.
    fn last_step(&self) -> Option<f64> {
        let h = &self.trace.k_history;
        (h.len() >= 2).then(|| (&h[h.len() - 1].1 - &h[h.len() - 2].1).abs().to_f64())
    }

    fn settled(&self, config: &AimConfig) -> bool {
        let h = &self.trace.k_history;
        let w = config.stability_window;
        if h.len() < w {
            return false;
        }
        let tail = &h[h.len() - w..];
        let scale = config.stability_scale(self.last_f64());
        let max = tail.iter().map(|(_, e)| e).fold(&tail[0].1, |m, e| if e > m { e } else { m });
        let min = tail.iter().map(|(_, e)| e).fold(&tail[0].1, |m, e| if e < m { e } else { m });
        (max - min).to_f64() <= scale
    }
}

fn checkpoints(config: &AimConfig) -> Vec<usize> {
    let mut ks: Vec<usize> = (config.k_step..=config.k_max).step_by(config.k_step).collect();
    if ks.last() != Some(&config.k_max) {
        ks.push(config.k_max);
    }
    ks
}

fn in_cell(e: &PScalar, lo: &PScalar, hi: &PScalar) -> bool {
    e >= lo && e <= hi
}

/// Tracks `Δ_k` roots for increasing `k` and keeps those that stop moving.
///
/// The energy grid is evaluated once through `k_max`, which yields the signs
/// of every `Δ_k` at every grid energy. At each checkpoint `k` a sign-change
/// cell that was also present at the previous checkpoint is refined to
/// `root_tol`; the estimate joins the nearest open chain within
/// `stability_tol × 10³`. A chain whose last `stability_window` estimates
/// agree within `stability_tol` is converged and no longer refined.
pub fn converge_spectrum(problem: &dyn AimProblem, config: &AimConfig) -> Result<SpectrumResult> {
    config.validate()?;
    let p = config.precision;
    let x0 = config.x0_scalar();
    let grid = energy_grid(config);
    let mut warnings = Vec::new();

    // table[i][k - 1] = Δ_k(E_i)
    let mut table: Vec<Vec<Option<PScalar>>> = Vec::with_capacity(grid.len());
    for e in &grid {
        let seq = delta_sequence(problem, e, &x0, config.k_max)?;
        let mut row = Vec::with_capacity(seq.len());
        let mut flagged = false;
        for (i, d) in seq.into_iter().enumerate() {
            if d.value.is_finite() {
                row.push(Some(d.value));
            } else {
                if !flagged {
                    warnings.push(Warning::NonFiniteDelta { k: i + 1, energy: e.to_f64() });
                    flagged = true;
                }
                row.push(None);
            }
        }
        table.push(row);
    }

    let tol = PScalar::from_f64(config.root_tol, p);
    let mut chains: Vec<Chain> = Vec::new();
    let mut prev_cells: Vec<usize> = Vec::new();
    for k in checkpoints(config) {
        let column: Vec<Option<PScalar>> = table.iter().map(|row| row[k - 1].clone()).collect();
        let cells = sign_change_cells(&column);
        for &cell in &cells {
            if !prev_cells.contains(&cell) {
                continue;
            }
            let (lo, hi) = (&grid[cell], &grid[cell + 1]);
            if chains.iter().any(|c| c.trace.converged && in_cell(c.last(), lo, hi)) {
                continue;
            }
            let hint = chains
                .iter()
                .filter(|c| !c.trace.converged && in_cell(c.last(), lo, hi))
                .max_by_key(|c| c.trace.final_k)
                .map(|c| {
                    let e = c.last_f64();
                    let radius = c
                        .last_step()
                        .map(|s| 2.0 * s)
                        .unwrap_or(0.0)
                        .max(1e3 * config.stability_scale(e))
                        .max(8.0 * config.root_tol);
                    (c.last().clone(), radius)
                });
            let (Some(f_lo), Some(f_hi)) = (&column[cell], &column[cell + 1]) else { continue };
            let mut eval = DeltaEvaluator::new(problem, &x0, k);
            let located = locate(&mut eval, (lo, hi), (f_lo, f_hi), hint, &tol);
            let root = match located {
                Ok(r) => r,
                Err(Error::NonFinite(_)) => {
                    warnings.push(Warning::NonFiniteDelta { k, energy: lo.to_f64() });
                    continue;
                }
                Err(e) => return Err(e),
            };
            let root_f = root.to_f64();
            let radius = 1e3 * config.stability_scale(root_f);
            let nearest = chains
                .iter_mut()
                .filter(|c| !c.trace.converged)
                .map(|c| ((c.last_f64() - root_f).abs(), c))
                .filter(|(d, _)| *d <= radius)
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .map(|(_, c)| c);
            let chain = match nearest {
                Some(c) => c,
                None => {
                    chains.push(Chain {
                        trace: RootTrace { k_history: Vec::new(), converged: false, final_k: k, warnings: Vec::new() },
                    });
                    chains.last_mut().expect("just pushed")
                }
            };
            chain.trace.k_history.push((k, root));
            chain.trace.final_k = k;
            chain.trace.warnings.extend(eval.warnings);
            if chain.settled(config) {
                chain.trace.converged = true;
            }
        }
        prev_cells = cells;
    }

    Ok(assemble(chains, &grid, warnings, config))
}

fn locate(
    eval: &mut DeltaEvaluator<'_>,
    (lo, hi): (&PScalar, &PScalar),
    (f_lo, f_hi): (&PScalar, &PScalar),
    hint: Option<(PScalar, f64)>,
    tol: &PScalar,
) -> Result<PScalar> {
    let mut f = |e: &PScalar| eval.eval(e);
    if let Some((center, radius)) = hint {
        let p = center.precision();
        let r = PScalar::from_f64(radius, p);
        let a = (&center - &r).max(lo).clone();
        let b = {
            let up = &center + &r;
            if up > *hi {
                hi.clone()
            } else {
                up
            }
        };
        if a < b {
            let f_a = if a == *lo { f_lo.clone() } else { f(&a)? };
            let f_b = if b == *hi { f_hi.clone() } else { f(&b)? };
            if bracket_sign(&f_a) != bracket_sign(&f_b) {
                return refine_bracket(&mut f, a, b, f_a, f_b, tol);
            }
            if bracket_sign(f_lo) != bracket_sign(&f_a) {
                return refine_bracket(&mut f, lo.clone(), a, f_lo.clone(), f_a, tol);
            }
            return refine_bracket(&mut f, b, hi.clone(), f_b, f_hi.clone(), tol);
        }
    }
    refine_bracket(&mut f, lo.clone(), hi.clone(), f_lo.clone(), f_hi.clone(), tol)
}

fn assemble(chains: Vec<Chain>, grid: &[PScalar], warnings: Vec<Warning>, config: &AimConfig) -> SpectrumResult {
    let cell_of = |e: &PScalar| grid.windows(2).position(|w| in_cell(e, &w[0], &w[1]));
    let (done, open): (Vec<Chain>, Vec<Chain>) = chains.into_iter().partition(|c| c.trace.converged);

    let mut converged: Vec<RootTrace> = done.into_iter().map(|c| c.trace).collect();
    converged.sort_by(|a, b| a.estimate().partial_cmp(b.estimate()).expect("finite roots"));
    let settled_cells: Vec<Option<usize>> = converged.iter().map(|t| cell_of(t.estimate())).collect();

    // one open candidate per cell, the most recent, and none where a root settled
    let mut unconverged: Vec<RootTrace> = Vec::new();
    let mut seen: Vec<Option<usize>> = Vec::new();
    let mut open: Vec<RootTrace> = open.into_iter().map(|c| c.trace).collect();
    open.sort_by_key(|t| std::cmp::Reverse(t.final_k));
    for t in open {
        let cell = cell_of(t.estimate());
        if settled_cells.contains(&cell) || seen.contains(&cell) {
            continue;
        }
        seen.push(cell);
        unconverged.push(t);
    }
    unconverged.sort_by(|a, b| a.estimate().partial_cmp(b.estimate()).expect("finite roots"));

    let roots = converged
        .into_iter()
        .enumerate()
        .map(|(n, trace)| SpectrumRoot { n, energy: trace.estimate().clone(), trace })
        .collect();
    SpectrumResult { roots, unconverged, warnings, config: config.clone() }
}
