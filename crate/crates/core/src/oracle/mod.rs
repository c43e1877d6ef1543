//! Finite-difference eigensolver for the radial equation
//! `-½R'' + [V(r) + C(r)] R = E R` with Dirichlet ends, used as an independent
//! check on the AIM spectrum.
//!
//! The three-point stencil on a uniform grid gives a symmetric tridiagonal
//! matrix whose eigenvalues carry an O(h²) error; [`refine_richardson`]
//! removes it by Romberg extrapolation over successively halved grids.

mod tridiag;

pub use tridiag::{lowest_eigenvalues, TridiagonalOperator};

use crate::error::{invalid, Result};
use crate::potential::{exact_centrifugal, pekeris_centrifugal, potential_value, PotentialParams};

/// Uniform grid of `n_points` interior nodes strictly between `r_min` and `r_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialGrid {
    r_min: f64,
    r_max: f64,
    n_points: usize,
}

impl RadialGrid {
    pub const MIN_POINTS: usize = 100;

    pub fn new(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_min > 0.0) {
            return invalid(format!("r_min must be > 0, got {r_min}"));
        }
        if !(r_max > r_min) || !r_max.is_finite() {
            return invalid(format!("r_max must exceed r_min, got [{r_min}, {r_max}]"));
        }
        if n_points < Self::MIN_POINTS {
            return invalid(format!("need at least {} interior points, got {n_points}", Self::MIN_POINTS));
        }
        Ok(RadialGrid { r_min, r_max, n_points })
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn h(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_points as f64 + 1.0)
    }

    /// Interior node `i` for `i` in `1..=n_points`.
    pub fn node(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.h()
    }

    /// Same interval with half the spacing.
    pub fn halved(&self) -> Self {
        RadialGrid { n_points: 2 * self.n_points + 1, ..*self }
    }
}

/// Which centrifugal term enters the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentrifugalMode {
    /// `ℓ(ℓ+1)/(2r²)`.
    Exact,
    /// The Pekeris-type exponential approximation.
    Pekeris,
    /// No centrifugal term.
    None,
}

/// Three-point discretization of `-½ d²/dr² + w(r)` on `grid`.
pub fn assemble_with(grid: &RadialGrid, mut w: impl FnMut(f64) -> Result<f64>) -> Result<TridiagonalOperator> {
    let h = grid.h();
    let kin = 1.0 / (h * h);
    let diagonal = (1..=grid.n_points()).map(|i| w(grid.node(i)).map(|v| kin + v)).collect::<Result<Vec<_>>>()?;
    let off = vec![-0.5 * kin; grid.n_points() - 1];
    TridiagonalOperator::new(diagonal, off)
}

/// Effective potential `V(r) + C(r)` for the chosen centrifugal mode.
pub fn effective_potential(params: &PotentialParams, mode: CentrifugalMode, r: f64) -> Result<f64> {
    let c = match mode {
        CentrifugalMode::Exact => exact_centrifugal(params.ell, r)?,
        CentrifugalMode::Pekeris => pekeris_centrifugal(params.lambda(), params.ell, r)?,
        CentrifugalMode::None => 0.0,
    };
    Ok(potential_value(params, r)? + c)
}

pub fn assemble_hamiltonian(
    params: &PotentialParams,
    grid: &RadialGrid,
    mode: CentrifugalMode,
) -> Result<TridiagonalOperator> {
    params.validate()?;
    assemble_with(grid, |r| effective_potential(params, mode, r))
}

/// Extrapolated eigenvalue and the spread of the last two extrapolants.
#[derive(Clone, Debug, PartialEq)]
pub struct RichardsonEstimate {
    pub energy: f64,
    pub error_estimate: f64,
    /// False when the raw sequence E(h), E(h/2), … did not approach its limit
    /// monotonically with shrinking steps; `error_estimate` is then widened.
    pub monotone: bool,
    /// Raw eigenvalues on each grid, coarsest first.
    pub raw: Vec<f64>,
}

/// Romberg table over grids `h, h/2, …` assuming an even-power error series
/// starting at `h²`.
pub fn richardson_extrapolate(raw: &[f64]) -> RichardsonEstimate {
    let levels = raw.len();
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(levels);
    for i in 0..levels {
        let mut row = vec![raw[i]];
        for j in 1..=i {
            let factor = 4f64.powi(j as i32) - 1.0;
            let v = row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / factor;
            row.push(v);
        }
        table.push(row);
    }
    let energy = table[levels - 1][levels - 1];
    let mut error_estimate = if levels >= 2 { (energy - table[levels - 2][levels - 2]).abs() } else { f64::INFINITY };
    let diffs: Vec<f64> = raw.windows(2).map(|w| w[1] - w[0]).collect();
    let monotone = diffs.windows(2).all(|d| d[0] * d[1] > 0.0 && d[1].abs() < d[0].abs());
    if !monotone {
        let widest = diffs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        error_estimate = error_estimate.max(widest);
    }
    RichardsonEstimate { energy, error_estimate, monotone, raw: raw.to_vec() }
}

/// The `count` lowest eigenvalues of `-½ d²/dr² + w(r)`, each extrapolated
/// over `levels` successively halved grids.
pub fn refine_richardson_with(
    base_grid: &RadialGrid,
    levels: usize,
    count: usize,
    mut w: impl FnMut(f64) -> Result<f64>,
) -> Result<Vec<RichardsonEstimate>> {
    if levels < 2 {
        return invalid(format!("Richardson refinement needs at least 2 levels, got {levels}"));
    }
    let mut per_level: Vec<Vec<f64>> = Vec::with_capacity(levels);
    let mut grid = *base_grid;
    for _ in 0..levels {
        let op = assemble_with(&grid, &mut w)?;
        per_level.push(lowest_eigenvalues(&op, count)?);
        grid = grid.halved();
    }
    Ok((0..count)
        .map(|i| {
            let raw: Vec<f64> = per_level.iter().map(|ev| ev[i]).collect();
            richardson_extrapolate(&raw)
        })
        .collect())
}

pub fn refine_richardson(
    params: &PotentialParams,
    mode: CentrifugalMode,
    base_grid: &RadialGrid,
    levels: usize,
    count: usize,
) -> Result<Vec<RichardsonEstimate>> {
    params.validate()?;
    refine_richardson_with(base_grid, levels, count, |r| effective_potential(params, mode, r))
}

/// Grid and refinement settings for [`oracle_spectrum`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub r_min: f64,
    /// Fixed outer radius; when `None` it is sized from the shallowest state.
    pub r_max: Option<f64>,
    /// Interior points of the coarsest grid at the reference radius `25/λ`;
    /// scaled with `r_max` to keep the spacing.
    pub n_points: usize,
    pub levels: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { r_min: 1e-12, r_max: None, n_points: 20_000, levels: 3 }
    }
}

/// Energy at which the continuum starts for the chosen mode.
pub fn continuum_threshold(params: &PotentialParams, mode: CentrifugalMode) -> f64 {
    match mode {
        CentrifugalMode::Pekeris => params.pekeris_asymptote(),
        _ => 0.0,
    }
}

/// `max(12/λ + 3/√(2·binding), 25/λ)` where `binding` is the depth of the
/// shallowest state below the continuum.
pub fn default_r_max(params: &PotentialParams, binding: Option<f64>) -> f64 {
    let lambda = params.lambda();
    let floor = 25.0 / lambda;
    match binding {
        Some(b) if b > 0.0 => (12.0 / lambda + 3.0 / (2.0 * b).sqrt()).max(floor),
        _ => floor,
    }
}

fn grid_for(params: &PotentialParams, cfg: &OracleConfig, r_max: f64) -> Result<RadialGrid> {
    let reference = 25.0 / params.lambda();
    let n = ((cfg.n_points as f64) * (r_max / reference)).round().max(cfg.n_points as f64) as usize;
    RadialGrid::new(cfg.r_min, r_max, n)
}

/// Number of eigenvalues of the coarsest-grid Hamiltonian below the continuum.
pub fn bound_state_count(params: &PotentialParams, mode: CentrifugalMode, cfg: &OracleConfig) -> Result<usize> {
    let r_max = cfg.r_max.unwrap_or_else(|| default_r_max(params, None));
    let op = assemble_hamiltonian(params, &grid_for(params, cfg, r_max)?, mode)?;
    Ok(op.sturm_count(continuum_threshold(params, mode)))
}

/// Richardson-refined bound states (at most `max_count`), deepest first.
/// Without a fixed `r_max` the box is widened until it holds the shallowest
/// returned state's tail.
pub fn oracle_spectrum(
    params: &PotentialParams,
    mode: CentrifugalMode,
    max_count: usize,
    cfg: &OracleConfig,
) -> Result<Vec<RichardsonEstimate>> {
    let threshold = continuum_threshold(params, mode);
    let count = bound_state_count(params, mode, cfg)?.min(max_count);
    if count == 0 {
        return Ok(Vec::new());
    }
    let r_max = match cfg.r_max {
        Some(r) => r,
        None => {
            let coarse = assemble_hamiltonian(params, &grid_for(params, cfg, default_r_max(params, None))?, mode)?;
            let shallow = *lowest_eigenvalues(&coarse, count)?.last().expect("count > 0");
            default_r_max(params, Some(threshold - shallow))
        }
    };
    let grid = grid_for(params, cfg, r_max)?;
    refine_richardson(params, mode, &grid, cfg.levels, count)
}
