//! The short-range potential `V(r) = V₀ (e^{-λr} - γ) / (e^{λr} - 1)`, its
//! Pekeris-type centrifugal term, and the map `x = 1 - 2e^{-λr}` that brings
//! the radial equation into the canonical AIM form with
//!
//! ```text
//! λ₀(x) = 1 / (1 - x)
//! s₀(x) = (12V₀x³ + ηx² + ξx + ν) / (12λ²(x + 1)²(x - 1)²)
//! ```

use crate::aim::AimProblem;
use crate::error::{invalid, Error, Result};
use crate::numerics::{recenter_polynomial, Jet, PScalar, Precision, RationalJet};

/// Potential strength `v0`, shape `gamma ∈ (0, 1)`, range `λ = √lambda_sq`
/// and angular momentum `ell`. Atomic units throughout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialParams {
    pub v0: f64,
    pub gamma: f64,
    pub lambda_sq: f64,
    pub ell: u32,
}

impl PotentialParams {
    pub fn new(v0: f64, gamma: f64, lambda: f64, ell: u32) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return invalid(format!("lambda must be > 0, got {lambda}"));
        }
        Self::with_lambda_sq(v0, gamma, lambda * lambda, ell)
    }

    /// Takes `λ²` directly, so that `λ = √2` is exact.
    pub fn with_lambda_sq(v0: f64, gamma: f64, lambda_sq: f64, ell: u32) -> Result<Self> {
        let p = PotentialParams { v0, gamma, lambda_sq, ell };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return invalid(format!("gamma must lie in (0, 1), got {}", self.gamma));
        }
        if !(self.lambda_sq > 0.0) || !self.lambda_sq.is_finite() {
            return invalid(format!("lambda must be > 0, got lambda^2 = {}", self.lambda_sq));
        }
        if self.v0 == 0.0 || !self.v0.is_finite() {
            return invalid(format!("V0 must be finite and nonzero, got {}", self.v0));
        }
        Ok(())
    }

    /// Non-fatal remarks about the parameter set.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.v0 > 0.0 {
            w.push(format!("V0 = {} > 0: the 1/r singularity is repulsive", self.v0));
        }
        w
    }

    pub fn lambda(&self) -> f64 {
        self.lambda_sq.sqrt()
    }

    pub fn with_ell(&self, ell: u32) -> Self {
        PotentialParams { ell, ..*self }
    }

    /// `ℓ(ℓ + 1)`.
    pub fn ell_factor(&self) -> f64 {
        let l = f64::from(self.ell);
        l * (l + 1.0)
    }

    /// Large-r limit of the Pekeris centrifugal term, `λ²ℓ(ℓ+1)/24`.
    pub fn pekeris_asymptote(&self) -> f64 {
        self.lambda_sq * self.ell_factor() / 24.0
    }

    fn lifted(&self, p: Precision) -> Lifted {
        let l = self.ell as i64;
        Lifted {
            v0: PScalar::from_f64(self.v0, p),
            gamma: PScalar::from_f64(self.gamma, p),
            lambda_sq: PScalar::from_f64(self.lambda_sq, p),
            ell_factor: PScalar::from_i64(l * (l + 1), p),
        }
    }
}

struct Lifted {
    v0: PScalar,
    gamma: PScalar,
    lambda_sq: PScalar,
    ell_factor: PScalar,
}

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        invalid(format!("radius must be > 0, got {r}"))
    }
}

/// `V(r)`. The denominator is formed with `exp_m1`, which stays exact as
/// `λr → 0` where the naive difference loses every digit.
pub fn potential_value(params: &PotentialParams, r: f64) -> Result<f64> {
    check_r(r)?;
    let u = params.lambda() * r;
    Ok(params.v0 * ((-u).exp() - params.gamma) / u.exp_m1())
}

/// Full centrifugal energy under the Pekeris-type approximation,
/// `λ²ℓ(ℓ+1)/2 · (1/12 + e^{λr}/(e^{λr} - 1)²)`, using
/// `e^{u}/(e^{u} - 1)² = 1/(4 sinh²(u/2))`.
pub fn pekeris_centrifugal(lambda: f64, ell: u32, r: f64) -> Result<f64> {
    check_r(r)?;
    if ell == 0 {
        return Ok(0.0);
    }
    let l = f64::from(ell);
    let sh = (0.5 * lambda * r).sinh();
    Ok(lambda * lambda * l * (l + 1.0) / 2.0 * (1.0 / 12.0 + 1.0 / (4.0 * sh * sh)))
}

/// Exact centrifugal energy `ℓ(ℓ+1)/(2r²)`.
pub fn exact_centrifugal(ell: u32, r: f64) -> Result<f64> {
    check_r(r)?;
    let l = f64::from(ell);
    Ok(l * (l + 1.0) / (2.0 * r * r))
}

/// `x = 1 - 2e^{-λr}`.
pub fn transform_x(lambda: f64, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return invalid(format!("radius must be >= 0, got {r}"));
    }
    Ok(1.0 - 2.0 * (-lambda * r).exp())
}

/// `r = -ln((1 - x)/2) / λ` for `x ∈ [-1, 1)`.
pub fn inverse_r(lambda: f64, x: f64) -> Result<f64> {
    if x >= 1.0 {
        return Err(Error::Singularity("x = 1 maps to r = infinity".into()));
    }
    if !(x >= -1.0) {
        return invalid(format!("x must lie in [-1, 1), got {x}"));
    }
    Ok(-(0.5 * (1.0 - x)).ln() / lambda)
}

/// Extended-precision `x = 1 - 2e^{-λr}`.
pub fn transform_x_p(lambda: &PScalar, r: &PScalar) -> PScalar {
    let p = r.precision();
    let two = PScalar::from_i64(2, p);
    &PScalar::one(p) - &(&two * &(-(lambda * r)).exp())
}

/// Extended-precision inverse of [`transform_x_p`].
pub fn inverse_r_p(lambda: &PScalar, x: &PScalar) -> Result<PScalar> {
    let p = x.precision();
    let one = PScalar::one(p);
    if *x >= one {
        return Err(Error::Singularity("x = 1 maps to r = infinity".into()));
    }
    let half = PScalar::from_ratio(1, 2, p);
    Ok(-(&(&(&one - x) * &half).ln() / lambda))
}

/// Extended-precision `V(r)`.
pub fn potential_value_p(params: &PotentialParams, r: &PScalar) -> Result<PScalar> {
    let p = r.precision();
    if r.signum() <= 0 {
        return invalid("radius must be > 0");
    }
    let c = params.lifted(p);
    let u = &c.lambda_sq.sqrt() * r;
    let num = &(-&u).exp() - &c.gamma;
    let den = &u.exp() - &PScalar::one(p);
    Ok(&(&c.v0 * &num) / &den)
}

/// Extended-precision Pekeris centrifugal term.
pub fn pekeris_centrifugal_p(params: &PotentialParams, r: &PScalar) -> Result<PScalar> {
    let p = r.precision();
    if r.signum() <= 0 {
        return invalid("radius must be > 0");
    }
    let c = params.lifted(p);
    let e = (&c.lambda_sq.sqrt() * r).exp();
    let em1 = &e - &PScalar::one(p);
    let shape = &PScalar::from_ratio(1, 12, p) + &(&e / &(&em1 * &em1));
    Ok(&(&(&c.lambda_sq * &c.ell_factor) * &PScalar::from_ratio(1, 2, p)) * &shape)
}

/// The three energy-dependent coefficients of the cubic numerator of `s₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicCoefficients<T> {
    pub eta: T,
    pub xi: T,
    pub nu: T,
}

pub fn cubic_coefficients(params: &PotentialParams, energy: f64) -> CubicCoefficients<f64> {
    let l = params.ell_factor() * params.lambda_sq;
    let (v0, g, e) = (params.v0, params.gamma, energy);
    CubicCoefficients {
        eta: l + 12.0 * (2.0 * g - 1.0) * v0 - 24.0 * e,
        xi: -22.0 * l - 12.0 * v0 - 48.0 * e,
        nu: 25.0 * l + (12.0 - 24.0 * g) * v0 - 24.0 * e,
    }
}

pub fn cubic_coefficients_p(params: &PotentialParams, energy: &PScalar) -> CubicCoefficients<PScalar> {
    let p = energy.precision();
    let c = params.lifted(p);
    let int = |v: i64| PScalar::from_i64(v, p);
    let l = &c.ell_factor * &c.lambda_sq;
    let two_g = &int(2) * &c.gamma;
    CubicCoefficients {
        eta: &(&l + &(&(&int(12) * &(&two_g - &int(1))) * &c.v0)) - &(&int(24) * energy),
        xi: &(&(&int(-22) * &l) - &(&int(12) * &c.v0)) - &(&int(48) * energy),
        nu: &(&(&int(25) * &l) + &(&(&int(12) - &(&int(12) * &two_g)) * &c.v0)) - &(&int(24) * energy),
    }
}

/// `12V₀x³ + ηx² + ξx + ν`, ascending powers of `x`.
fn s0_numerator(params: &PotentialParams, energy: &PScalar) -> [PScalar; 4] {
    let p = energy.precision();
    let c = cubic_coefficients_p(params, energy);
    [c.nu, c.xi, c.eta, &PScalar::from_i64(12, p) * &PScalar::from_f64(params.v0, p)]
}

/// `12λ²(x + 1)²(x - 1)² = 12λ²(x⁴ - 2x² + 1)`, ascending powers of `x`.
fn s0_denominator(params: &PotentialParams, p: Precision) -> [PScalar; 5] {
    let k = &PScalar::from_i64(12, p) * &PScalar::from_f64(params.lambda_sq, p);
    let zero = PScalar::zero(p);
    [k.clone(), zero.clone(), &k * &PScalar::from_i64(-2, p), zero, k]
}

fn check_x0(x0: &PScalar) -> Result<()> {
    let one = PScalar::one(x0.precision());
    if x0.abs() < one {
        Ok(())
    } else {
        Err(Error::Singularity(format!("x0 = {} is outside (-1, 1)", x0.to_f64())))
    }
}

/// `λ₀ = 1/(1 - x)` about `x0` as a rational jet.
pub fn lambda0_rational(x0: &PScalar) -> Result<RationalJet> {
    check_x0(x0)?;
    let p = x0.precision();
    let num = Jet::constant(x0, PScalar::one(p));
    let den = Jet::new(x0.clone(), vec![&PScalar::one(p) - x0, PScalar::from_i64(-1, p)])?;
    RationalJet::new(num, den)
}

/// `s₀` about `x0` as a rational jet.
pub fn s0_rational(params: &PotentialParams, energy: &PScalar, x0: &PScalar) -> Result<RationalJet> {
    check_x0(x0)?;
    let p = x0.precision();
    let energy = energy.with_precision(p);
    let num = recenter_polynomial(&s0_numerator(params, &energy), x0, 3);
    let den = recenter_polynomial(&s0_denominator(params, p), x0, 4);
    RationalJet::new(num, den)
}

/// Dense jet of `λ₀ = 1/(1 - x)`; coefficient `m` is `1/(1 - x0)^(m+1)`.
pub fn build_lambda0_jet(x0: &PScalar, degree: usize) -> Result<Jet> {
    lambda0_rational(x0)?.to_jet(degree)
}

/// Dense jet of `s₀`: the recentred cubic numerator jet-divided by the
/// recentred quartic denominator.
pub fn build_s0_jet(params: &PotentialParams, energy: &PScalar, x0: &PScalar, degree: usize) -> Result<Jet> {
    s0_rational(params, energy, x0)?.to_jet(degree)
}

/// `2(V(r) + L(r) - E)/(λ²(1 - x)²)` at `r = r(x)`: the radial equation
/// substituted directly, without the cubic rearrangement.
pub fn s0_direct_p(params: &PotentialParams, energy: &PScalar, x: &PScalar) -> Result<PScalar> {
    let p = x.precision();
    let lambda_sq = PScalar::from_f64(params.lambda_sq, p);
    let r = inverse_r_p(&lambda_sq.sqrt(), x)?;
    let v = potential_value_p(params, &r)?;
    let l = pekeris_centrifugal_p(params, &r)?;
    let one_minus = &PScalar::one(p) - x;
    let den = &lambda_sq * &(&one_minus * &one_minus);
    Ok(&(&PScalar::from_i64(2, p) * &(&(&v + &l) - energy)) / &den)
}

/// Difference between the cubic form of `s₀` and [`s0_direct_p`] at `x`,
/// relative to `2(|V| + |L| + |E|)/(λ²(1 - x)²)`.
pub fn transform_identity_residual(params: &PotentialParams, energy: &PScalar, x: &PScalar) -> Result<PScalar> {
    let p = x.precision();
    let energy = energy.with_precision(p);
    let cubic = s0_rational(params, &energy, x)?.value();
    let direct = s0_direct_p(params, &energy, x)?;
    let lambda_sq = PScalar::from_f64(params.lambda_sq, p);
    let r = inverse_r_p(&lambda_sq.sqrt(), x)?;
    let one_minus = &PScalar::one(p) - x;
    let terms = &(&potential_value_p(params, &r)?.abs() + &pekeris_centrifugal_p(params, &r)?.abs()) + &energy.abs();
    let scale = &(&PScalar::from_i64(2, p) * &terms) / &(&lambda_sq * &(&one_minus * &one_minus));
    Ok(&(&cubic - &direct).abs() / &scale)
}

/// `κ = √(2(λ²ℓ(ℓ+1)/24 - E))/λ`, the decay rate of the bound state in units
/// of `λr`. Requires `E` below the continuum threshold.
pub fn decay_exponent_p(params: &PotentialParams, energy: &PScalar) -> Result<PScalar> {
    let p = energy.precision();
    let c = params.lifted(p);
    let threshold = &(&c.lambda_sq * &c.ell_factor) / &PScalar::from_i64(24, p);
    let gap = &threshold - energy;
    if gap.signum() <= 0 {
        return invalid(format!(
            "energy {} is not below the continuum threshold {}",
            energy.to_f64(),
            params.pekeris_asymptote()
        ));
    }
    Ok((&(&PScalar::from_i64(2, p) * &gap) / &c.lambda_sq).sqrt())
}

/// `λ₀` for `f` in `ψ = (1-x)^κ (1+x)^{ℓ+1} f`:
/// `[(1 + 2κ - 2(ℓ+1)) + (1 + 2κ + 2(ℓ+1))x] / (1 - x²)`.
pub fn factored_lambda0_rational(params: &PotentialParams, energy: &PScalar, x0: &PScalar) -> Result<RationalJet> {
    check_x0(x0)?;
    let p = x0.precision();
    let energy = energy.with_precision(p);
    let kappa = decay_exponent_p(params, &energy)?;
    let a = &PScalar::one(p) + &(&PScalar::from_i64(2, p) * &kappa);
    let b = PScalar::from_i64(2 * (i64::from(params.ell) + 1), p);
    let num = recenter_polynomial(&[&a - &b, &a + &b], x0, 1);
    let one = PScalar::one(p);
    let den = recenter_polynomial(&[one.clone(), PScalar::zero(p), -one], x0, 2);
    RationalJet::new(num, den)
}

/// `s₀` for `f`: the cubic numerator plus
/// `12λ²[-κ²(1+x)² + (ℓ+1)(1+2κ)(1-x²) - ℓ(ℓ+1)(1-x)²]`, over the same
/// quartic denominator.
pub fn factored_s0_rational(params: &PotentialParams, energy: &PScalar, x0: &PScalar) -> Result<RationalJet> {
    check_x0(x0)?;
    let p = x0.precision();
    let energy = energy.with_precision(p);
    let kappa = decay_exponent_p(params, &energy)?;
    let k2 = &kappa * &kappa;
    let ell1 = PScalar::from_i64(i64::from(params.ell) + 1, p);
    let c = &ell1 * &(&PScalar::one(p) + &(&PScalar::from_i64(2, p) * &kappa));
    let l = PScalar::from_f64(params.ell_factor(), p);
    let scale = &PScalar::from_i64(12, p) * &PScalar::from_f64(params.lambda_sq, p);
    let two = PScalar::from_i64(2, p);
    let extra = [&(&c - &k2) - &l, &two * &(&l - &k2), -(&(&k2 + &c) + &l)];
    let mut num = s0_numerator(params, &energy);
    for (n, e) in num.iter_mut().zip(&extra) {
        *n = &*n + &(&scale * e);
    }
    let num = recenter_polynomial(&num, x0, 3);
    let den = recenter_polynomial(&s0_denominator(params, p), x0, 4);
    RationalJet::new(num, den)
}

/// Which unknown the AIM iterates on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Formulation {
    /// The radial function itself, with `λ₀ = 1/(1-x)` and the cubic `s₀`.
    Direct,
    /// `f` in `ψ = (1-x)^κ (1+x)^{ℓ+1} f`, with both boundary behaviours
    /// divided out.
    #[default]
    Factored,
}

/// The radial problem in AIM form.
#[derive(Clone, Copy, Debug)]
pub struct PotentialProblem {
    pub params: PotentialParams,
    pub formulation: Formulation,
}

impl AimProblem for PotentialProblem {
    fn lambda0(&self, energy: &PScalar, x0: &PScalar) -> Result<RationalJet> {
        match self.formulation {
            Formulation::Direct => lambda0_rational(x0),
            Formulation::Factored => factored_lambda0_rational(&self.params, energy, x0),
        }
    }

    fn s0(&self, energy: &PScalar, x0: &PScalar) -> Result<RationalJet> {
        match self.formulation {
            Formulation::Direct => s0_rational(&self.params, energy, x0),
            Formulation::Factored => factored_s0_rational(&self.params, energy, x0),
        }
    }
}

pub fn make_aim_problem(params: &PotentialParams) -> PotentialProblem {
    PotentialProblem { params: *params, formulation: Formulation::default() }
}

pub fn make_aim_problem_with(params: &PotentialParams, formulation: Formulation) -> PotentialProblem {
    PotentialProblem { params: *params, formulation }
}
