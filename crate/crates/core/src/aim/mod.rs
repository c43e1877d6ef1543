//! Asymptotic iteration method.
//!
//! For `f'' = λ₀(x) f' + s₀(x) f` the method iterates
//!
//! ```text
//! λ_k = λ'_{k-1} + s_{k-1} + λ₀ λ_{k-1}
//! s_k = s'_{k-1} + s₀ λ_{k-1}
//! ```
//!
//! and quantizes the energy through the zeros of
//! `Δ_k(x₀) = λ_k s_{k-1} - λ_{k-1} s_k`. Both sequences are carried as Taylor
//! jets about `x₀`; each iteration consumes one derivative order.

mod spectrum;

pub use spectrum::{converge_spectrum, scan_roots, RootScan, RootTrace, SpectrumResult, SpectrumRoot};

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{Jet, PScalar, Precision, RationalJet};

/// The two coefficient functions of the canonical second-order equation.
///
/// Builders return exact rational representations about `x0`; a dense jet that
/// is only valid through some degree may be wrapped with
/// [`RationalJet::polynomial`] as long as that degree is at least
/// [`AimConfig::jet_degree`]. Either function may depend on the trial energy.
pub trait AimProblem: Sync {
    fn lambda0(&self, energy: &PScalar, x0: &PScalar) -> Result<RationalJet>;
    fn s0(&self, energy: &PScalar, x0: &PScalar) -> Result<RationalJet>;
}

/// Solver settings. Real-valued inputs are plain `f64`s and are lifted to the
/// working precision when a run starts.
#[derive(Clone, Debug, PartialEq)]
pub struct AimConfig {
    pub x0: f64,
    pub k_max: usize,
    pub precision: Precision,
    pub e_min: f64,
    pub e_max: f64,
    pub e_grid_points: usize,
    /// Absolute bracket width at which root refinement stops.
    pub root_tol: f64,
    pub stability_window: usize,
    /// Absolute below |E| = 1, relative above.
    pub stability_tol: f64,
    /// Stride between the iteration counts at which roots are refined.
    pub k_step: usize,
}

impl Default for AimConfig {
    fn default() -> Self {
        AimConfig {
            x0: 0.0,
            k_max: 120,
            precision: Precision::DEFAULT,
            e_min: -1000.0,
            e_max: -1e-11,
            e_grid_points: 160,
            root_tol: 1e-11,
            stability_window: 3,
            stability_tol: 1e-10,
            k_step: 5,
        }
    }
}

impl AimConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.k_max < 2 {
            return fail(format!("k_max must be >= 2, got {}", self.k_max));
        }
        if !(self.e_min < self.e_max) || !self.e_min.is_finite() || !self.e_max.is_finite() {
            return fail(format!("need e_min < e_max, got [{}, {}]", self.e_min, self.e_max));
        }
        if self.e_grid_points < 16 {
            return fail(format!("e_grid_points must be >= 16, got {}", self.e_grid_points));
        }
        if self.stability_window < 2 {
            return fail(format!("stability_window must be >= 2, got {}", self.stability_window));
        }
        if !(self.root_tol > 0.0) || !(self.stability_tol > 0.0) {
            return fail("root_tol and stability_tol must be positive".into());
        }
        if self.k_step == 0 {
            return fail("k_step must be >= 1".into());
        }
        if !self.x0.is_finite() {
            return fail(format!("x0 must be finite, got {}", self.x0));
        }
        Precision::new(self.precision.bits())?;
        Ok(())
    }

    /// Jet degree the recurrence starts from.
    pub fn jet_degree(&self) -> usize {
        self.k_max + 2
    }

    pub fn x0_scalar(&self) -> PScalar {
        PScalar::from_f64(self.x0, self.precision)
    }

    /// `stability_tol` scaled to an energy: absolute for |E| < 1, relative otherwise.
    pub fn stability_scale(&self, energy: f64) -> f64 {
        self.stability_tol * energy.abs().max(1.0)
    }
}

/// Constant terms of `λ_k` and `s_k` at `x₀`.
#[derive(Clone, Debug)]
pub struct AimStep {
    pub k: usize,
    pub lambda: PScalar,
    pub s: PScalar,
}

/// Runs the recurrence from `k = 0` to `k_max` at one trial energy.
pub fn aim_iterate(problem: &dyn AimProblem, energy: &PScalar, config: &AimConfig) -> Result<Vec<AimStep>> {
    iterate_to(problem, energy, &config.x0_scalar(), config.k_max, config.jet_degree())
}

pub(crate) fn iterate_to(
    problem: &dyn AimProblem,
    energy: &PScalar,
    x0: &PScalar,
    k_max: usize,
    degree: usize,
) -> Result<Vec<AimStep>> {
    if degree < k_max {
        return Err(Error::Config(format!(
            "jet degree {degree} cannot reach k = {k_max}; need degree >= {}",
            k_max + 2
        )));
    }
    let lambda0 = problem.lambda0(energy, x0)?;
    let s0 = problem.s0(energy, x0)?;
    let mut lambda = lambda0.to_jet(degree)?;
    let mut s = s0.to_jet(degree)?;
    let mut steps = Vec::with_capacity(k_max + 1);
    steps.push(AimStep { k: 0, lambda: lambda.value().clone(), s: s.value().clone() });
    for k in 1..=k_max {
        let (next_lambda, next_s) = advance(&lambda0, &s0, &lambda, &s, degree - k)?;
        lambda = next_lambda;
        s = next_s;
        steps.push(AimStep { k, lambda: lambda.value().clone(), s: s.value().clone() });
    }
    Ok(steps)
}

fn advance(lambda0: &RationalJet, s0: &RationalJet, lambda: &Jet, s: &Jet, out_degree: usize) -> Result<(Jet, Jet)> {
    let next_lambda = lambda.diff()?.add(s)?.add(&lambda0.mul_jet(lambda, out_degree)?)?.truncated(out_degree);
    let next_s = s.diff()?.add(&s0.mul_jet(lambda, out_degree)?)?.truncated(out_degree);
    Ok((next_lambda, next_s))
}

/// `Δ_k` at `x₀` plus the number of mantissa bits that survived the final
/// subtraction.
#[derive(Clone, Debug)]
pub struct DeltaValue {
    pub value: PScalar,
    pub retained_bits: Option<i64>,
}

impl DeltaValue {
    fn from_steps(prev: &AimStep, cur: &AimStep) -> Self {
        let lead = &cur.lambda * &prev.s;
        let trail = &prev.lambda * &cur.s;
        let value = &lead - &trail;
        let bits = value.precision().bits() as i64;
        let retained_bits = match (value.binary_exponent(), lead.binary_exponent(), trail.binary_exponent()) {
            (Some(d), a, b) => a.max(b).map(|top| bits - (top - d)),
            _ => None,
        };
        DeltaValue { value, retained_bits }
    }

    /// Fewer than half the mantissa bits survived cancellation.
    pub fn precision_exhausted(&self) -> bool {
        let half = self.value.precision().bits() as i64 / 2;
        matches!(self.retained_bits, Some(b) if b < half)
    }
}

/// `Δ_k(x₀)` at trial energy `energy`.
pub fn delta_at(problem: &dyn AimProblem, energy: &PScalar, k: usize, config: &AimConfig) -> Result<PScalar> {
    Ok(delta_value(problem, energy, k, &config.x0_scalar())?.value)
}

pub(crate) fn delta_value(problem: &dyn AimProblem, energy: &PScalar, k: usize, x0: &PScalar) -> Result<DeltaValue> {
    if k == 0 {
        return Err(Error::InvalidInput("Δ_k needs k >= 1".into()));
    }
    let steps = iterate_to(problem, energy, x0, k, k + 2)?;
    Ok(DeltaValue::from_steps(&steps[k - 1], &steps[k]))
}

/// `Δ_1 … Δ_{k_max}` from a single pass of the recurrence.
pub fn delta_sequence(
    problem: &dyn AimProblem,
    energy: &PScalar,
    x0: &PScalar,
    k_max: usize,
) -> Result<Vec<DeltaValue>> {
    let steps = iterate_to(problem, energy, x0, k_max, k_max + 2)?;
    Ok(steps.windows(2).map(|w| DeltaValue::from_steps(&w[0], &w[1])).collect())
}

/// Diagnostics attached to traces and results.
#[derive(Clone, Debug, PartialEq)]
pub enum Warning {
    /// Fewer than half the mantissa bits survived in `Δ_k`.
    PrecisionExhausted { k: usize, energy: f64, retained_bits: i64 },
    /// `Δ_k` was not finite at a grid energy; the point was skipped.
    NonFiniteDelta { k: usize, energy: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::PrecisionExhausted { k, energy, retained_bits } => {
                write!(f, "precision-exhaustion: only {retained_bits} bits retained in delta_{k} at E={energy}")
            }
            Warning::NonFiniteDelta { k, energy } => {
                write!(f, "non-finite delta_{k} at E={energy}; grid point skipped")
            }
        }
    }
}

/// `f'' = 2x f' - 2E f`, whose eigenvalues are `E = 0, 1, 2, …`.
#[derive(Clone, Copy, Debug, Default)]
pub struct HermiteProblem;

impl AimProblem for HermiteProblem {
    fn lambda0(&self, _energy: &PScalar, x0: &PScalar) -> Result<RationalJet> {
        let p = x0.precision();
        let two = PScalar::from_i64(2, p);
        Ok(RationalJet::polynomial(Jet::new(x0.clone(), vec![&two * x0, two])?))
    }

    fn s0(&self, energy: &PScalar, x0: &PScalar) -> Result<RationalJet> {
        let p = x0.precision();
        let c = -(&PScalar::from_i64(2, p) * energy);
        Ok(RationalJet::polynomial(Jet::constant(x0, c)))
    }
}
