//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
//! if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use aim_spectrum::aim::{delta_at, scan_roots, AimConfig, HermiteProblem};
use aim_spectrum::numerics::{PScalar, Precision};
use aim_spectrum::oracle::{refine_richardson_with, RadialGrid};
use aim_spectrum::potential::{pekeris_centrifugal_p, transform_identity_residual, PotentialParams};
use aim_spectrum_cli::reference::{self, ReferenceTable};
use aim_spectrum_cli::run::{self, AimSettings, Method, OracleSettings, RunConfig, SpectrumReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }

    fn error(e: anyhow::Error) -> Self {
        Outcome::new(false, format!("error: {e:#}"))
    }
}

fn run_config(t: &ReferenceTable, method: Method) -> RunConfig {
    RunConfig {
        v0: t.v0,
        gamma: t.gamma,
        lambda_sq: t.lambda_sq,
        method,
        aim: AimSettings::default(),
        oracle: OracleSettings::default(),
    }
}

fn solve(t: &ReferenceTable, ell: u32, method: Method, aim: AimSettings) -> anyhow::Result<SpectrumReport> {
    run::solve(&RunConfig { aim, ..run_config(t, method) }, ell)
}

/// Worst relative difference of `computed[n]` against `reference(row)` over
/// the rows selected, or `None` if some row has no computed level.
struct Tally {
    worst: f64,
    missing: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { worst: 0.0, missing: Vec::new() }
    }

    fn add(&mut self, label: String, computed: Option<f64>, reference: f64) {
        match computed {
            Some(c) => self.worst = self.worst.max(run::rel_diff(c, reference)),
            None => self.missing.push(label),
        }
    }

    fn outcome(&self, tol: f64, rows: usize, extra: &str) -> Outcome {
        let pass = self.missing.is_empty() && self.worst <= tol;
        let mut d = format!("{rows} rows, max rel diff {:.2e} (tol {tol:e}){extra}", self.worst);
        if !self.missing.is_empty() {
            d += &format!(", missing {}", self.missing.join(" "));
        }
        Outcome::new(pass, d)
    }
}

struct AimRuns {
    tables: Vec<ReferenceTable>,
    /// `(table, ell) -> report`
    reports: Vec<(u8, u32, SpectrumReport)>,
    s_wave_time: Duration,
}

impl AimRuns {
    fn get(&self, id: u8, ell: u32) -> &SpectrumReport {
        &self.reports.iter().find(|(i, l, _)| *i == id && *l == ell).unwrap().2
    }
}

fn aim_runs() -> anyhow::Result<AimRuns> {
    let tables: Vec<ReferenceTable> = (1..=3).map(reference::load).collect::<anyhow::Result<_>>()?;
    let mut reports = Vec::new();
    let mut s_wave_time = Duration::ZERO;
    for t in &tables {
        for ell in t.ells() {
            let start = Instant::now();
            let r = solve(t, ell, Method::Aim, AimSettings::default())?;
            if ell == 0 {
                s_wave_time += start.elapsed();
            }
            reports.push((t.id, ell, r));
        }
    }
    Ok(AimRuns { tables, reports, s_wave_time })
}

fn aim_vs_printed(runs: &AimRuns, s_wave: bool) -> Outcome {
    let mut tally = Tally::new();
    let mut rows = 0;
    for t in &runs.tables {
        for row in t.rows.iter().filter(|r| (r.ell == 0) == s_wave) {
            rows += 1;
            let e = runs.get(t.id, row.ell).roots.get(row.n).map(|l| l.energy);
            tally.add(format!("T{}/l{}/n{}", t.id, row.ell, row.n), e, row.aim);
        }
    }
    if s_wave {
        let secs = runs.s_wave_time.as_secs_f64();
        let mut o = tally.outcome(1e-8, rows, &format!(", {secs:.1} s"));
        o.pass &= secs <= 120.0;
        o
    } else {
        tally.outcome(1e-6, rows, "")
    }
}

fn oracle_vs(runs: &AimRuns, method: Method) -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let mut tally = Tally::new();
    let mut rows = 0;
    for t in &runs.tables {
        for ell in t.ells() {
            let oracle = solve(t, ell, method, AimSettings::default())?;
            for row in t.rows.iter().filter(|r| r.ell == ell) {
                rows += 1;
                let e = oracle.roots.get(row.n).map(|l| l.energy);
                let label = format!("T{}/l{}/n{}", t.id, row.ell, row.n);
                match method {
                    Method::OracleExact => tally.add(label, e, row.csm.expect("tables 1-3 carry CSM values")),
                    _ => match runs.get(t.id, ell).roots.get(row.n) {
                        Some(aim) => tally.add(label, e, aim.energy),
                        None => tally.missing.push(label + "(aim)"),
                    },
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let mut o = tally.outcome(1e-5, rows, &format!(", {secs:.1} s"));
    if method == Method::OracleExact {
        o.pass &= secs <= 300.0;
    }
    Ok(o)
}

fn transform_identity() -> Outcome {
    let p = Precision::new(256).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    let draws = 1000;
    let mut worst: Option<i64> = None;
    for _ in 0..draws {
        let params = PotentialParams::new(
            rng.gen_range(-300.0..=-10.0),
            rng.gen_range(0.05..0.95),
            rng.gen_range(0.5..=3.0),
            rng.gen_range(0..=5u32),
        )
        .unwrap();
        let energy = PScalar::from_f64(rng.gen_range(-2000.0..=0.0), p);
        let x = PScalar::from_f64(rng.gen_range(-0.99..0.99), p);
        match transform_identity_residual(&params, &energy, &x) {
            Ok(res) => {
                if let Some(e) = res.binary_exponent() {
                    worst = Some(worst.map_or(e, |w| w.max(e)));
                }
            }
            Err(e) => return Outcome::new(false, format!("draw failed: {e}")),
        }
    }
    let shown = worst.map_or("exactly 0".into(), |e| format!("2^{e}"));
    Outcome::new(worst.map_or(true, |e| e < -236), format!("{draws} draws, worst residual {shown}"))
}

fn hermite() -> Outcome {
    let p = Precision::new(256).unwrap();
    let cfg = AimConfig { k_max: 4, precision: p, ..AimConfig::default() };
    let closed_form = [-3.25, 0.0, 0.5, 1.0, 7.125].iter().all(|&e| {
        delta_at(&HermiteProblem, &PScalar::from_f64(e, p), 1, &cfg).is_ok_and(|d| d.to_f64() == 4.0 * e * (e - 1.0))
    });
    let mut worst: f64 = 0.0;
    let mut sets_ok = true;
    for k in 1..=8 {
        let cfg = AimConfig {
            k_max: k.max(2),
            precision: Precision::new(192).unwrap(),
            e_min: -0.5,
            e_max: k as f64 + 0.5,
            e_grid_points: 16 * (k + 1),
            root_tol: 1e-13,
            ..AimConfig::default()
        };
        match scan_roots(&HermiteProblem, k, &cfg) {
            Ok(scan) => {
                sets_ok &= scan.roots.len() == k + 1;
                for (n, r) in scan.roots.iter().enumerate() {
                    worst = worst.max((r.to_f64() - n as f64).abs());
                }
            }
            Err(_) => sets_ok = false,
        }
    }
    Outcome::new(
        closed_form && sets_ok && worst <= 1e-12,
        format!("Delta_1 closed form {closed_form}, root sets complete {sets_ok}, max |root - n| {worst:.1e}"),
    )
}

fn oracle_validation() -> Outcome {
    let run = || -> aim_spectrum::Result<(f64, f64, f64)> {
        let box_grid = RadialGrid::new(1e-12, 1.0, 250)?;
        let e_box = refine_richardson_with(&box_grid, 3, 1, |_| Ok(0.0))?[0].energy;
        let h_grid = RadialGrid::new(1e-12, 60.0, 20_000)?;
        let h = refine_richardson_with(&h_grid, 3, 2, |r| Ok(-1.0 / r))?;
        Ok(((e_box - PI * PI / 2.0).abs(), (h[0].energy + 0.5).abs(), (h[1].energy + 0.125).abs()))
    };
    match run() {
        Ok((b, h1, h2)) => Outcome::new(
            b <= 1e-8 && h1 <= 1e-6 && h2 <= 1e-6,
            format!("box |E1 - pi^2/2| {b:.1e}, hydrogen |E1 + 1/2| {h1:.1e}, |E2 + 1/8| {h2:.1e}"),
        ),
        Err(e) => Outcome::new(false, format!("error: {e}")),
    }
}

fn x0_invariance(runs: &AimRuns) -> anyhow::Result<Outcome> {
    let t = &runs.tables[0];
    let mut spectra = vec![(0.0, runs.get(1, 0).energies())];
    for x0 in [-0.5, 0.25] {
        spectra.push((x0, solve(t, 0, Method::Aim, AimSettings { x0, ..AimSettings::default() })?.energies()));
    }
    let counts: Vec<usize> = spectra.iter().map(|s| s.1.len()).collect();
    let mut worst: f64 = 0.0;
    for (i, a) in spectra.iter().enumerate() {
        for b in &spectra[i + 1..] {
            for (x, y) in a.1.iter().zip(&b.1) {
                worst = worst.max(run::rel_diff(*x, *y));
            }
        }
    }
    let same = counts.iter().all(|&c| c == counts[0] && c == 3);
    Ok(Outcome::new(same && worst <= 1e-9, format!("levels per x0 {counts:?}, max pairwise diff {worst:.1e}")))
}

fn pekeris_bound() -> Outcome {
    let p = Precision::new(256).unwrap();
    let mut worst_ratio: f64 = 0.0;
    let mut samples = 0;
    for lambda_sq in [0.25, 2.0, 9.0] {
        let params = PotentialParams::with_lambda_sq(-100.0, 0.3, lambda_sq, 1).unwrap();
        let lambda = params.lambda();
        // λr from 1e-6 to 0.1 on a log grid
        for i in 0..=50 {
            let u = 10f64.powf(-6.0 + 5.0 * f64::from(i) / 50.0);
            let r = PScalar::from_f64(u / lambda, p);
            let approx = pekeris_centrifugal_p(&params, &r).unwrap();
            let diff = (&approx - &(&r * &r).recip()).abs().to_f64();
            let rf = r.to_f64();
            let bound = 1.1 * lambda_sq * lambda_sq * rf * rf / 240.0;
            worst_ratio = worst_ratio.max(diff / bound);
            samples += 1;
        }
    }
    Outcome::new(worst_ratio <= 1.0, format!("{samples} samples, worst |error| / bound {worst_ratio:.4}"))
}

fn sweep() -> anyhow::Result<Outcome> {
    let t = reference::load(3)?;
    let start = Instant::now();
    let report = run::sweep_report(&run_config(&t, Method::Aim), 0, 5, 3)?;
    let grid_ok = report.cells.len() == 24
        && report.cells.iter().all(|c| c.energy.is_some() != c.warnings.iter().any(|w| w == "unconverged"));
    let mut tally = Tally::new();
    let mut converged = 0;
    let mut aim_missed = 0;
    for ell in 0..=5 {
        let oracle = solve(&t, ell, Method::OraclePekeris, AimSettings::default())?;
        let cells: Vec<_> = report.cells.iter().filter(|c| c.ell == ell).collect();
        aim_missed +=
            oracle.roots.iter().filter(|o| cells.get(o.n.unwrap_or(0)).is_some_and(|c| c.energy.is_none())).count();
        for c in cells {
            if let Some(e) = c.energy {
                converged += 1;
                match oracle.roots.get(c.n) {
                    Some(o) => tally.add(String::new(), Some(e), o.energy),
                    None => tally.missing.push(format!("l{}/n{}(oracle)", c.ell, c.n)),
                }
            }
        }
    }
    let mut o = tally.outcome(
        1e-5,
        converged,
        &format!(
            " over converged cells, 6x4 grid {grid_ok}, {aim_missed} oracle levels left unconverged, {:.1} s",
            start.elapsed().as_secs_f64()
        ),
    );
    o.pass &= grid_ok;
    Ok(o)
}

fn main() {
    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();
    let runs = aim_runs();
    let with_runs = |f: &dyn Fn(&AimRuns) -> anyhow::Result<Outcome>| match &runs {
        Ok(r) => f(r).unwrap_or_else(Outcome::error),
        Err(e) => Outcome::new(false, format!("AIM runs failed: {e:#}")),
    };
    results.push((1, "AIM reproduces l=0 table values", with_runs(&|r| Ok(aim_vs_printed(r, true)))));
    results.push((2, "AIM reproduces l>=1 table values", with_runs(&|r| Ok(aim_vs_printed(r, false)))));
    results.push((3, "oracle-exact matches CSM values", with_runs(&|r| oracle_vs(r, Method::OracleExact))));
    results.push((4, "oracle-pekeris matches AIM", with_runs(&|r| oracle_vs(r, Method::OraclePekeris))));
    results.push((5, "transform identity residual", transform_identity()));
    results.push((6, "Hermite engine validation", hermite()));
    results.push((7, "box and hydrogen oracle validation", oracle_validation()));
    results.push((8, "x0 invariance of Table 1 l=0", with_runs(&x0_invariance)));
    results.push((9, "Pekeris small-r error bound", pekeris_bound()));
    results.push((10, "l-sweep grid vs oracle-pekeris", sweep().unwrap_or_else(Outcome::error)));

    let mut failed = 0;
    for (n, label, o) in &results {
        println!("{} {n:>2} {label}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
