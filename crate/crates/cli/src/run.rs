//! Solver runs and the serializable reports they produce.

use aim_spectrum::oracle::{oracle_spectrum, CentrifugalMode, OracleConfig};
use aim_spectrum::potential::potential_value;
use aim_spectrum::{converge_spectrum, make_aim_problem_with, AimConfig, Formulation, PotentialParams, Precision};
use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use crate::reference::{self, ReferenceTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Aim,
    OracleExact,
    OraclePekeris,
}

impl Method {
    fn mode(self) -> Option<CentrifugalMode> {
        match self {
            Method::Aim => None,
            Method::OracleExact => Some(CentrifugalMode::Exact),
            Method::OraclePekeris => Some(CentrifugalMode::Pekeris),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsDto {
    pub v0: f64,
    pub gamma: f64,
    pub lambda_sq: f64,
    pub ell: u32,
}

impl From<&PotentialParams> for ParamsDto {
    fn from(p: &PotentialParams) -> Self {
        ParamsDto { v0: p.v0, gamma: p.gamma, lambda_sq: p.lambda_sq, ell: p.ell }
    }
}

/// AIM settings as given on the command line; open bracket ends are filled
/// per problem by [`resolve_bracket`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AimSettings {
    pub x0: f64,
    pub k_max: usize,
    pub precision_bits: usize,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub e_grid_points: usize,
    pub root_tol: f64,
    pub stability_window: usize,
    pub stability_tol: f64,
    pub k_step: usize,
    pub formulation: FormulationDto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulationDto {
    Factored,
    Direct,
}

impl From<FormulationDto> for Formulation {
    fn from(f: FormulationDto) -> Self {
        match f {
            FormulationDto::Factored => Formulation::Factored,
            FormulationDto::Direct => Formulation::Direct,
        }
    }
}

impl Default for AimSettings {
    fn default() -> Self {
        let d = AimConfig::default();
        AimSettings {
            x0: d.x0,
            k_max: d.k_max,
            precision_bits: d.precision.bits(),
            e_min: None,
            e_max: None,
            e_grid_points: d.e_grid_points,
            root_tol: d.root_tol,
            stability_window: d.stability_window,
            stability_tol: d.stability_tol,
            k_step: d.k_step,
            formulation: FormulationDto::Factored,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSettings {
    pub r_min: f64,
    pub r_max: Option<f64>,
    pub n_points: usize,
    pub levels: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        let d = OracleConfig::default();
        OracleSettings { r_min: d.r_min, r_max: d.r_max, n_points: d.n_points, levels: d.levels }
    }
}

impl From<&OracleSettings> for OracleConfig {
    fn from(s: &OracleSettings) -> Self {
        OracleConfig { r_min: s.r_min, r_max: s.r_max, n_points: s.n_points, levels: s.levels }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub v0: f64,
    pub gamma: f64,
    pub lambda_sq: f64,
    pub method: Method,
    pub aim: AimSettings,
    pub oracle: OracleSettings,
}

impl RunConfig {
    pub fn params(&self, ell: u32) -> Result<PotentialParams> {
        Ok(PotentialParams::with_lambda_sq(self.v0, self.gamma, self.lambda_sq, ell)?)
    }
}

/// One eigenvalue, or one candidate that never settled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub ell: u32,
    pub n: Option<usize>,
    pub energy: f64,
    pub converged: bool,
    pub converged_k: Option<usize>,
    /// Richardson spread for oracle levels.
    pub error_estimate: Option<f64>,
    pub k_history: Vec<(usize, f64)>,
    pub warnings: Vec<String>,
}

/// Per-problem bracket and solver snapshot used for a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub method: Method,
    /// `None` when the search is unbounded below.
    pub e_min: Option<f64>,
    pub e_max: f64,
    pub aim: Option<AimSettings>,
    pub oracle: Option<OracleSettings>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub params: ParamsDto,
    pub roots: Vec<Level>,
    pub unconverged: Vec<Level>,
    pub warnings: Vec<String>,
    pub config: ConfigSnapshot,
}

impl SpectrumReport {
    pub fn energies(&self) -> Vec<f64> {
        self.roots.iter().map(|l| l.energy).collect()
    }
}

/// Coarse oracle used only to size the energy bracket.
fn bracket_oracle() -> OracleConfig {
    OracleConfig { n_points: 4000, levels: 2, ..OracleConfig::default() }
}

/// `[e_min, e_max]` for one problem. Open ends default to
/// `1.25 ×` the deepest Pekeris-oracle level and `-root_tol`; without any
/// oracle level the lower end falls back to `1.25 V(0.1/λ)`.
pub fn resolve_bracket(params: &PotentialParams, aim: &AimSettings) -> Result<(f64, f64)> {
    let threshold = params.pekeris_asymptote();
    let e_max = aim.e_max.unwrap_or(-aim.root_tol);
    if e_max >= threshold {
        bail!("e-max = {e_max} must lie below the continuum threshold {threshold}");
    }
    let e_min = match aim.e_min {
        Some(v) => v,
        None => {
            let deepest =
                oracle_spectrum(params, CentrifugalMode::Pekeris, 1, &bracket_oracle())?.first().map(|e| e.energy);
            let guess = match deepest {
                Some(e) => 1.25 * e,
                None => 1.25 * potential_value(params, 0.1 / params.lambda())?.min(-1.0),
            };
            if guess < e_max {
                guess
            } else {
                e_max - (0.25 * e_max.abs()).max(1.0)
            }
        }
    };
    if !(e_min < e_max) {
        bail!("need e-min < e-max, got [{e_min}, {e_max}]");
    }
    Ok((e_min, e_max))
}

pub fn aim_config(aim: &AimSettings, e_min: f64, e_max: f64) -> Result<AimConfig> {
    let cfg = AimConfig {
        x0: aim.x0,
        k_max: aim.k_max,
        precision: Precision::new(aim.precision_bits)?,
        e_min,
        e_max,
        e_grid_points: aim.e_grid_points,
        root_tol: aim.root_tol,
        stability_window: aim.stability_window,
        stability_tol: aim.stability_tol,
        k_step: aim.k_step,
    };
    cfg.validate()?;
    if !(aim.x0 > -1.0 && aim.x0 < 1.0) {
        bail!("x0 must lie in (-1, 1), got {}", aim.x0);
    }
    Ok(cfg)
}

/// Checks every setting without running a solver.
pub fn validate(run: &RunConfig, ell: u32) -> Result<PotentialParams> {
    let params = run.params(ell)?;
    if run.method == Method::Aim {
        let lo = run.aim.e_min.unwrap_or(-2.0);
        let hi = run.aim.e_max.unwrap_or(-run.aim.root_tol);
        aim_config(&run.aim, lo.min(hi - 1.0), hi)?;
    } else {
        let o = &run.oracle;
        if !(o.r_min > 0.0) || o.n_points < 100 || o.levels < 2 || o.r_max.is_some_and(|r| !(r > o.r_min)) {
            bail!("oracle settings need r-min > 0, r-max > r-min, fd-points >= 100 and fd-levels >= 2");
        }
    }
    Ok(params)
}

pub fn solve(run: &RunConfig, ell: u32) -> Result<SpectrumReport> {
    let params = validate(run, ell)?;
    let mut warnings = params.warnings();
    match run.method.mode() {
        None => {
            let (e_min, e_max) = resolve_bracket(&params, &run.aim)?;
            let cfg = aim_config(&run.aim, e_min, e_max)?;
            let problem = make_aim_problem_with(&params, run.aim.formulation.into());
            let res = converge_spectrum(&problem, &cfg)?;
            warnings.extend(res.warnings.iter().map(ToString::to_string));
            let roots = res
                .roots
                .iter()
                .map(|r| Level {
                    ell,
                    n: Some(r.n),
                    energy: r.energy.to_f64(),
                    converged: true,
                    converged_k: Some(r.trace.final_k),
                    error_estimate: None,
                    k_history: r.trace.k_history.iter().map(|(k, e)| (*k, e.to_f64())).collect(),
                    warnings: r.trace.warnings.iter().map(ToString::to_string).collect(),
                })
                .collect();
            let unconverged = res
                .unconverged
                .iter()
                .map(|t| Level {
                    ell,
                    n: None,
                    energy: t.estimate().to_f64(),
                    converged: false,
                    converged_k: None,
                    error_estimate: None,
                    k_history: t.k_history.iter().map(|(k, e)| (*k, e.to_f64())).collect(),
                    warnings: t.warnings.iter().map(ToString::to_string).collect(),
                })
                .collect();
            Ok(SpectrumReport {
                params: (&params).into(),
                roots,
                unconverged,
                warnings,
                config: ConfigSnapshot {
                    method: run.method,
                    e_min: Some(e_min),
                    e_max,
                    aim: Some(run.aim),
                    oracle: None,
                },
            })
        }
        Some(mode) => {
            let threshold = aim_spectrum::oracle::continuum_threshold(&params, mode);
            let e_min = run.aim.e_min.unwrap_or(f64::NEG_INFINITY);
            let e_max = run.aim.e_max.unwrap_or(threshold);
            let levels = oracle_spectrum(&params, mode, usize::MAX, &(&run.oracle).into())?;
            let roots: Vec<Level> = levels
                .iter()
                .filter(|e| e.energy >= e_min && e.energy <= e_max)
                .enumerate()
                .map(|(n, e)| Level {
                    ell,
                    n: Some(n),
                    energy: e.energy,
                    converged: true,
                    converged_k: None,
                    error_estimate: Some(e.error_estimate),
                    k_history: Vec::new(),
                    warnings: if e.monotone {
                        Vec::new()
                    } else {
                        vec!["non-monotone grid sequence; error estimate widened".into()]
                    },
                })
                .collect();
            Ok(SpectrumReport {
                params: (&params).into(),
                roots,
                unconverged: Vec::new(),
                warnings,
                config: ConfigSnapshot {
                    method: run.method,
                    e_min: run.aim.e_min,
                    e_max,
                    aim: None,
                    oracle: Some(run.oracle),
                },
            })
        }
    }
}

/// `|E_c - E_r| / max(|E_r|, 1)`.
pub fn rel_diff(computed: f64, reference: f64) -> f64 {
    (computed - reference).abs() / reference.abs().max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub ell: u32,
    pub n: usize,
    pub e_reference: f64,
    pub e_computed: Option<f64>,
    pub abs_diff: Option<f64>,
    pub rel_diff: Option<f64>,
    pub converged_k: Option<usize>,
    pub warnings: Vec<String>,
    /// Complex-scaling column of the reference table, when present.
    pub csm_reference: Option<f64>,
    pub csm_rel_diff: Option<f64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub tolerance: f64,
    pub max_rel_diff: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub max_rel_diff: Option<f64>,
    pub max_csm_rel_diff: Option<f64>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub title: String,
    pub reference_source: String,
    pub banner: Option<String>,
    pub params: ParamsDto,
    pub rows: Vec<ComparisonRow>,
    pub summary: Summary,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.summary.checks.iter().all(|c| c.pass)
    }
}

fn max_of(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    values.flatten().fold(None, |m, v| Some(m.map_or(v, |m: f64| m.max(v))))
}

fn check(label: &str, tolerance: f64, rows: &[&ComparisonRow]) -> Check {
    let max = max_of(rows.iter().map(|r| r.rel_diff));
    let pass = rows.iter().all(|r| r.rel_diff.is_some_and(|d| d <= tolerance));
    Check { label: label.into(), tolerance, max_rel_diff: max, pass }
}

/// The converged level nearest `reference`.
fn nearest(levels: &[Level], reference: f64) -> Option<&Level> {
    levels.iter().min_by(|a, b| (a.energy - reference).abs().total_cmp(&(b.energy - reference).abs()))
}

fn pair(ell: u32, n: usize, reference: f64, found: Option<&Level>) -> ComparisonRow {
    ComparisonRow {
        ell,
        n,
        e_reference: reference,
        e_computed: found.map(|l| l.energy),
        abs_diff: found.map(|l| (l.energy - reference).abs()),
        rel_diff: found.map(|l| rel_diff(l.energy, reference)),
        converged_k: found.and_then(|l| l.converged_k),
        warnings: match found {
            Some(l) => l.warnings.clone(),
            None => vec!["no converged level".into()],
        },
        csm_reference: None,
        csm_rel_diff: None,
        note: None,
    }
}

pub const TABLE4_BANNER: &str = "WARNING: this table lists the same parameters as table 3 yet its l=0 entries \
disagree with table 3, although both solve the identical equation at l=0. Its values are reproduced for \
layout only and are not a pass/fail gate; cells that disagree with both the finite-difference oracle and \
table 3 are flagged.";

fn table_run(table: &ReferenceTable, aim: &AimSettings) -> RunConfig {
    RunConfig {
        v0: table.v0,
        gamma: table.gamma,
        lambda_sq: table.lambda_sq,
        method: Method::Aim,
        aim: *aim,
        oracle: OracleSettings::default(),
    }
}

/// Solves every angular momentum of a reference table and pairs each level
/// with its reference value.
pub fn table_report(id: u8, aim: &AimSettings) -> Result<ComparisonReport> {
    let table = reference::load(id)?;
    let run = table_run(&table, aim);
    let spectra = table.ells().into_iter().map(|ell| solve(&run, ell)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(table.rows.len());
    for r in &table.rows {
        let spectrum = spectra.iter().find(|s| s.params.ell == r.ell).expect("one spectrum per ell");
        let found = if id == 4 { spectrum.roots.get(r.n) } else { nearest(&spectrum.roots, r.aim) };
        let mut row = pair(r.ell, r.n, r.aim, found);
        row.csm_reference = r.csm;
        row.csm_rel_diff = r.csm.zip(row.e_computed).map(|(c, e)| rel_diff(e, c));
        row.note = r.note.clone();
        rows.push(row);
    }
    let params = run.params(0)?;
    let (banner, checks) = if id == 4 {
        flag_table4(&run, &mut rows)?;
        (Some(TABLE4_BANNER.to_string()), Vec::new())
    } else {
        let s: Vec<&ComparisonRow> = rows.iter().filter(|r| r.ell == 0).collect();
        let p: Vec<&ComparisonRow> = rows.iter().filter(|r| r.ell > 0).collect();
        (None, vec![check("l=0 rows vs reference AIM", 1e-8, &s), check("l>=1 rows vs reference AIM", 1e-6, &p)])
    };
    let summary = Summary {
        max_rel_diff: max_of(rows.iter().map(|r| r.rel_diff)),
        max_csm_rel_diff: max_of(rows.iter().map(|r| r.csm_rel_diff)),
        checks,
    };
    Ok(ComparisonReport {
        title: format!("table {id}"),
        reference_source: "reference AIM column".into(),
        banner,
        params: (&params).into(),
        rows,
        summary,
    })
}

/// Marks table 4 cells that match neither the Pekeris oracle nor table 3.
fn flag_table4(run: &RunConfig, rows: &mut [ComparisonRow]) -> Result<()> {
    let table3 = reference::load(3)?;
    let oracle = OracleConfig::default();
    let mut ell_cache: Vec<(u32, Vec<f64>)> = Vec::new();
    for row in rows.iter_mut() {
        if !ell_cache.iter().any(|(l, _)| *l == row.ell) {
            let levels = oracle_spectrum(&run.params(row.ell)?, CentrifugalMode::Pekeris, 8, &oracle)?;
            ell_cache.push((row.ell, levels.iter().map(|e| e.energy).collect()));
        }
        let levels = &ell_cache.iter().find(|(l, _)| *l == row.ell).expect("cached").1;
        let agrees_oracle = levels.get(row.n).is_some_and(|&e| rel_diff(row.e_reference, e) <= 1e-5);
        let agrees_t3 = table3.row(row.ell, row.n).is_some_and(|t| rel_diff(row.e_reference, t.aim) <= 1e-5);
        if !agrees_oracle && !agrees_t3 {
            row.warnings.push(match levels.get(row.n) {
                Some(e) => format!("reference value disagrees with oracle ({e}) and table 3"),
                None => "reference value disagrees with table 3; oracle finds no such bound state".into(),
            });
        }
    }
    Ok(())
}

/// AIM against one of the finite-difference oracles on the same problem.
pub fn compare_report(run: &RunConfig, ell: u32) -> Result<(ComparisonReport, SpectrumReport)> {
    let oracle_method = if run.method == Method::Aim { Method::OraclePekeris } else { run.method };
    let aim = solve(&RunConfig { method: Method::Aim, ..run.clone() }, ell)?;
    let reference = solve(&RunConfig { method: oracle_method, ..run.clone() }, ell)?;
    let lo = aim.config.e_min.unwrap_or(f64::NEG_INFINITY);
    let rows: Vec<ComparisonRow> = reference
        .roots
        .iter()
        .filter(|l| l.energy >= lo)
        .map(|l| {
            let mut row = pair(ell, l.n.unwrap_or(0), l.energy, nearest(&aim.roots, l.energy));
            row.warnings.extend(l.warnings.iter().cloned());
            row
        })
        .collect();
    let all: Vec<&ComparisonRow> = rows.iter().collect();
    let summary = Summary {
        max_rel_diff: max_of(rows.iter().map(|r| r.rel_diff)),
        max_csm_rel_diff: None,
        checks: vec![check("AIM vs oracle", 1e-5, &all)],
    };
    let source = match oracle_method {
        Method::OracleExact => "oracle-exact",
        _ => "oracle-pekeris",
    };
    Ok((
        ComparisonReport {
            title: format!("AIM vs {source}, l={ell}"),
            reference_source: source.into(),
            banner: None,
            params: aim.params,
            rows,
            summary,
        },
        aim,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub ell: u32,
    pub n: usize,
    pub energy: Option<f64>,
    pub converged_k: Option<usize>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monotonicity {
    pub n: usize,
    pub converged_cells: usize,
    /// Whether `E_n(ℓ)` is nondecreasing over the converged cells.
    pub nondecreasing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub method: Method,
    pub v0: f64,
    pub gamma: f64,
    pub lambda_sq: f64,
    pub ell_min: u32,
    pub ell_max: u32,
    pub n_max: usize,
    pub cells: Vec<SweepCell>,
    pub monotonicity: Vec<Monotonicity>,
}

pub fn sweep_report(run: &RunConfig, ell_min: u32, ell_max: u32, n_max: usize) -> Result<SweepReport> {
    if ell_max < ell_min {
        bail!("ell-max = {ell_max} is below ell = {ell_min}");
    }
    let mut cells = Vec::new();
    for ell in ell_min..=ell_max {
        let spectrum = solve(run, ell)?;
        for n in 0..=n_max {
            cells.push(match spectrum.roots.get(n) {
                Some(l) => SweepCell {
                    ell,
                    n,
                    energy: Some(l.energy),
                    converged_k: l.converged_k,
                    warnings: l.warnings.clone(),
                },
                None => SweepCell { ell, n, energy: None, converged_k: None, warnings: vec!["unconverged".into()] },
            });
        }
    }
    let monotonicity = (0..=n_max)
        .map(|n| {
            let series: Vec<f64> = cells.iter().filter(|c| c.n == n).filter_map(|c| c.energy).collect();
            Monotonicity { n, converged_cells: series.len(), nondecreasing: series.windows(2).all(|w| w[0] <= w[1]) }
        })
        .collect();
    Ok(SweepReport {
        method: run.method,
        v0: run.v0,
        gamma: run.gamma,
        lambda_sq: run.lambda_sq,
        ell_min,
        ell_max,
        n_max,
        cells,
        monotonicity,
    })
}
