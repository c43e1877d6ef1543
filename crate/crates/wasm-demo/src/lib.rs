//! Browser bindings for the demo page. Each export takes plain numbers and
//! returns a JSON string; the same computations are available natively as
//! the `*_data` functions.

use aim_spectrum::aim::delta_at;
use aim_spectrum::numerics::{PScalar, Precision};
use aim_spectrum::potential::{pekeris_centrifugal, potential_value};
use aim_spectrum::{converge_spectrum, make_aim_problem, AimConfig, PotentialParams};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct Curve {
    pub r: Vec<f64>,
    pub potential: Vec<f64>,
    /// `V(r)` plus the approximated centrifugal term.
    pub effective: Vec<f64>,
    pub threshold: f64,
}

#[derive(Debug, Serialize)]
pub struct DeltaScan {
    pub k: usize,
    pub energy: Vec<f64>,
    /// `sign(Δ_k) · log10(1 + |Δ_k|)`, finite however large `Δ_k` gets.
    pub signed_log: Vec<f64>,
    /// Grid intervals where `Δ_k` changes sign.
    pub sign_changes: Vec<(f64, f64)>,
}

#[derive(Debug, Serialize)]
pub struct Level {
    pub n: usize,
    pub energy: f64,
    pub converged_k: usize,
}

#[derive(Debug, Serialize)]
pub struct Spectrum {
    pub levels: Vec<Level>,
    pub unconverged: Vec<f64>,
    pub warnings: Vec<String>,
}

fn params(v0: f64, gamma: f64, lambda_sq: f64, ell: u32) -> aim_spectrum::Result<PotentialParams> {
    PotentialParams::with_lambda_sq(v0, gamma, lambda_sq, ell)
}

pub fn curve_data(
    v0: f64,
    gamma: f64,
    lambda_sq: f64,
    ell: u32,
    r_max: f64,
    points: usize,
) -> aim_spectrum::Result<Curve> {
    let p = params(v0, gamma, lambda_sq, ell)?;
    let points = points.max(2);
    let r: Vec<f64> = (1..=points).map(|i| r_max * i as f64 / points as f64).collect();
    let mut potential = Vec::with_capacity(points);
    let mut effective = Vec::with_capacity(points);
    for &ri in &r {
        let v = potential_value(&p, ri)?;
        potential.push(v);
        effective.push(v + pekeris_centrifugal(p.lambda(), ell, ri)?);
    }
    Ok(Curve { r, potential, effective, threshold: p.pekeris_asymptote() })
}

fn signed_log(d: &PScalar) -> f64 {
    if d.is_zero() {
        return 0.0;
    }
    let one = PScalar::one(d.precision());
    let mag = (&d.abs() + &one).ln().to_f64() / std::f64::consts::LN_10;
    f64::from(d.signum()) * mag
}

#[allow(clippy::too_many_arguments)]
pub fn delta_scan_data(
    v0: f64,
    gamma: f64,
    lambda_sq: f64,
    ell: u32,
    k: usize,
    e_min: f64,
    e_max: f64,
    points: usize,
) -> aim_spectrum::Result<DeltaScan> {
    let p = params(v0, gamma, lambda_sq, ell)?;
    let cfg = AimConfig { k_max: k.max(2), e_min, e_max, ..AimConfig::default() };
    cfg.validate()?;
    let problem = make_aim_problem(&p);
    let points = points.max(2);
    let energy: Vec<f64> = (0..points).map(|i| e_min + (e_max - e_min) * i as f64 / (points - 1) as f64).collect();
    let mut signed = Vec::with_capacity(points);
    for &e in &energy {
        let d = delta_at(&problem, &PScalar::from_f64(e, cfg.precision), k, &cfg)?;
        signed.push(signed_log(&d));
    }
    let sign_changes = energy
        .windows(2)
        .zip(signed.windows(2))
        .filter(|(_, s)| s[0] * s[1] < 0.0)
        .map(|(e, _)| (e[0], e[1]))
        .collect();
    Ok(DeltaScan { k, energy, signed_log: signed, sign_changes })
}

#[allow(clippy::too_many_arguments)]
pub fn spectrum_data(
    v0: f64,
    gamma: f64,
    lambda_sq: f64,
    ell: u32,
    e_min: f64,
    e_max: f64,
    k_max: usize,
    precision_bits: usize,
) -> aim_spectrum::Result<Spectrum> {
    let p = params(v0, gamma, lambda_sq, ell)?;
    let cfg = AimConfig {
        k_max,
        precision: Precision::new(precision_bits)?,
        e_min,
        e_max: e_max.min(p.pekeris_asymptote() - 1e-9),
        e_grid_points: 80,
        ..AimConfig::default()
    };
    let res = converge_spectrum(&make_aim_problem(&p), &cfg)?;
    Ok(Spectrum {
        levels: res
            .roots
            .iter()
            .map(|r| Level { n: r.n, energy: r.energy.to_f64(), converged_k: r.trace.final_k })
            .collect(),
        unconverged: res.unconverged.iter().map(|t| t.estimate().to_f64()).collect(),
        warnings: p.warnings().into_iter().chain(res.warnings.iter().map(ToString::to_string)).collect(),
    })
}

fn to_js<T: Serialize>(r: aim_spectrum::Result<T>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
        .and_then(|v| serde_json::to_string(&v).map_err(|e| JsValue::from_str(&e.to_string())))
}

#[wasm_bindgen]
pub fn potential_curve(
    v0: f64,
    gamma: f64,
    lambda_sq: f64,
    ell: u32,
    r_max: f64,
    points: usize,
) -> Result<String, JsValue> {
    to_js(curve_data(v0, gamma, lambda_sq, ell, r_max, points))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn delta_scan(
    v0: f64,
    gamma: f64,
    lambda_sq: f64,
    ell: u32,
    k: usize,
    e_min: f64,
    e_max: f64,
    points: usize,
) -> Result<String, JsValue> {
    to_js(delta_scan_data(v0, gamma, lambda_sq, ell, k, e_min, e_max, points))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn solve_spectrum(
    v0: f64,
    gamma: f64,
    lambda_sq: f64,
    ell: u32,
    e_min: f64,
    e_max: f64,
    k_max: usize,
    precision_bits: usize,
) -> Result<String, JsValue> {
    to_js(spectrum_data(v0, gamma, lambda_sq, ell, e_min, e_max, k_max, precision_bits))
}
