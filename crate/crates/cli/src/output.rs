//! CSV, JSON and plain-text rendering.

use std::fmt::Write as _;

use anyhow::Result;
use serde::Serialize;

use crate::run::{ComparisonReport, SpectrumReport, SweepReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Human,
}

/// `x` rounded to 12 significant digits, in positional notation where that
/// stays readable.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000000000".into();
    }
    let sci = format!("{x:.11e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..=11).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub const SPECTRUM_HEADER: [&str; 5] = ["ell", "n", "energy", "converged_k", "warnings"];

pub fn spectrum(reports: &[SpectrumReport], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            if let [one] = reports {
                json(one)
            } else {
                json(&reports)
            }
        }
        Format::Csv => csv_string(
            &SPECTRUM_HEADER,
            reports.iter().flat_map(|r| {
                r.roots.iter().map(|l| {
                    vec![l.ell.to_string(), opt(l.n), l.energy.to_string(), opt(l.converged_k), l.warnings.join("; ")]
                })
            }),
        ),
        Format::Human => {
            let mut s = String::new();
            for r in reports {
                let p = &r.params;
                writeln!(
                    s,
                    "V0={} gamma={} lambda^2={} l={}  method={:?}  bracket=[{}, {:.6e}]",
                    p.v0,
                    p.gamma,
                    p.lambda_sq,
                    p.ell,
                    r.config.method,
                    r.config.e_min.map_or("-inf".into(), |e| format!("{e:.6e}")),
                    r.config.e_max
                )?;
                writeln!(s, "{:>3} {:>3} {:>22} {:>5}", "l", "n", "energy", "k")?;
                for l in &r.roots {
                    writeln!(s, "{:>3} {:>3} {:>22} {:>5}", l.ell, opt(l.n), sig12(l.energy), opt(l.converged_k))?;
                    for w in &l.warnings {
                        writeln!(s, "        warning: {w}")?;
                    }
                }
                if r.roots.is_empty() {
                    writeln!(s, "  no converged levels")?;
                }
                for u in &r.unconverged {
                    writeln!(
                        s,
                        "  unconverged candidate near {} (last k={})",
                        sig12(u.energy),
                        opt(u.k_history.last().map(|h| h.0))
                    )?;
                }
                for w in &r.warnings {
                    writeln!(s, "  warning: {w}")?;
                }
            }
            Ok(s)
        }
    }
}

pub fn comparison(report: &ComparisonReport, format: Format) -> Result<String> {
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let header = [
                "ell",
                "n",
                "energy",
                "converged_k",
                "warnings",
                "reference",
                "abs_diff",
                "rel_diff",
                "csm_reference",
                "csm_rel_diff",
            ];
            csv_string(
                &header,
                report.rows.iter().map(|r| {
                    vec![
                        r.ell.to_string(),
                        r.n.to_string(),
                        opt(r.e_computed),
                        opt(r.converged_k),
                        r.warnings.join("; "),
                        r.e_reference.to_string(),
                        opt(r.abs_diff),
                        opt(r.rel_diff),
                        opt(r.csm_reference),
                        opt(r.csm_rel_diff),
                    ]
                }),
            )
        }
        Format::Human => {
            let mut s = String::new();
            if let Some(b) = &report.banner {
                writeln!(s, "{b}\n")?;
            }
            let p = &report.params;
            writeln!(
                s,
                "{}: V0={} gamma={} lambda^2={}  reference: {}",
                report.title, p.v0, p.gamma, p.lambda_sq, report.reference_source
            )?;
            writeln!(s, "{:>3} {:>3} {:>22} {:>22} {:>10} {:>5}", "l", "n", "reference", "computed", "rel diff", "k")?;
            for r in &report.rows {
                writeln!(
                    s,
                    "{:>3} {:>3} {:>22} {:>22} {:>10} {:>5}",
                    r.ell,
                    r.n,
                    sig12(r.e_reference),
                    r.e_computed.map(sig12).unwrap_or_else(|| "unconverged".into()),
                    r.rel_diff.map(|d| format!("{d:.2e}")).unwrap_or_default(),
                    opt(r.converged_k)
                )?;
                if let Some(c) = r.csm_reference {
                    writeln!(
                        s,
                        "          csm {:>22}  rel diff {}",
                        sig12(c),
                        r.csm_rel_diff.map(|d| format!("{d:.2e}")).unwrap_or_default()
                    )?;
                }
                for w in r.warnings.iter().chain(&r.note) {
                    writeln!(s, "          note: {w}")?;
                }
            }
            for c in &report.summary.checks {
                writeln!(
                    s,
                    "{} {} (tol {:e}, max rel diff {})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.label,
                    c.tolerance,
                    c.max_rel_diff.map(|d| format!("{d:.2e}")).unwrap_or_else(|| "n/a".into())
                )?;
            }
            Ok(s)
        }
    }
}

pub fn sweep(report: &SweepReport, format: Format) -> Result<String> {
    match format {
        Format::Json => json(report),
        Format::Csv => csv_string(
            &SPECTRUM_HEADER,
            report.cells.iter().map(|c| {
                vec![
                    c.ell.to_string(),
                    c.n.to_string(),
                    c.energy.map(|e| e.to_string()).unwrap_or_else(|| "unconverged".into()),
                    opt(c.converged_k),
                    c.warnings.join("; "),
                ]
            }),
        ),
        Format::Human => {
            let mut s = String::new();
            writeln!(
                s,
                "V0={} gamma={} lambda^2={}  method={:?}",
                report.v0, report.gamma, report.lambda_sq, report.method
            )?;
            write!(s, "{:>3}", "l")?;
            for n in 0..=report.n_max {
                write!(s, " {:>22}", format!("E{n}"))?;
            }
            writeln!(s)?;
            for ell in report.ell_min..=report.ell_max {
                write!(s, "{ell:>3}")?;
                for c in report.cells.iter().filter(|c| c.ell == ell) {
                    write!(s, " {:>22}", c.energy.map(sig12).unwrap_or_else(|| "unconverged".into()))?;
                }
                writeln!(s)?;
            }
            s.push_str(&monotonicity_lines(report));
            Ok(s)
        }
    }
}

pub fn monotonicity_lines(report: &SweepReport) -> String {
    report
        .monotonicity
        .iter()
        .map(|m| {
            format!(
                "E{}(l): {} over {} converged cells\n",
                m.n,
                if m.nondecreasing { "nondecreasing" } else { "NOT nondecreasing" },
                m.converged_cells
            )
        })
        .collect()
}
