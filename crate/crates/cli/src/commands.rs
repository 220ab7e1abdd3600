use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use log::{info, warn};
use qem_core::chem::{exact_ground_energy, CoefficientTable, ObservableSum};
use qem_core::densesim::ProbabilityVector;
use qem_core::mitigation::io::{
    format_float, read_histogram, read_response, write_response, write_spectrum,
};
use qem_core::mitigation::{brem_unfold, BremOptions};
use qem_core::vqe::{calibrate, gate_error_sweep, run_scan, RunMode, ScanConfig};
use qem_core::Error;

use crate::config::{Campaign, SweepPlan};
use crate::error::{CliError, CliResult};

pub const ENERGY_CURVE_HEADER: &str =
    "family,scenario,r_angstrom,theta_star,e_raw_ha,e_mitigated_ha,e_exact_ha,retention_ratio,shots,seed";
pub const NOISE_SWEEP_HEADER: &str = "gate_error_rate,variant,abs_energy_error_ha";
pub const EXACT_CURVE_HEADER: &str = "r_angstrom,e_exact_ha";

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn write_out(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Core(Error::Io(e)))
}

struct CurveRow {
    family: &'static str,
    scenario: String,
    r: f64,
    line: String,
}

pub fn run_vqe(campaign: &Campaign, out: &Path) -> CliResult<()> {
    let mut rows = Vec::new();
    for scenario in &campaign.scenarios {
        for &family in &campaign.families {
            info!("running {family} under {}", scenario.label);
            let cfg = ScanConfig {
                family,
                noise: scenario.noise.clone(),
                ..campaign.template.clone()
            };
            let (shots, seed) = match cfg.mode {
                RunMode::Exact => (String::new(), String::new()),
                RunMode::Shots(s) => (s.to_string(), cfg.seed.to_string()),
            };
            for rec in run_scan(&cfg, &campaign.table)? {
                let line = [
                    family.label().to_string(),
                    scenario.label.clone(),
                    format_float(rec.r),
                    format_float(rec.theta_star()),
                    format_float(rec.e_raw),
                    opt(rec.e_mitigated),
                    format_float(rec.e_exact),
                    opt(rec.retention_ratio),
                    shots.clone(),
                    seed.clone(),
                ]
                .join(",");
                rows.push(CurveRow {
                    family: family.label(),
                    scenario: scenario.label.clone(),
                    r: rec.r,
                    line,
                });
            }
        }
    }
    rows.sort_by(|a, b| {
        (a.family, &a.scenario)
            .cmp(&(b.family, &b.scenario))
            .then(a.r.total_cmp(&b.r))
    });
    let mut text = format!("{ENERGY_CURVE_HEADER}\n");
    for row in rows {
        text.push_str(&row.line);
        text.push('\n');
    }
    write_out(out, &text)
}

pub fn sweep(plan: &SweepPlan, out: &Path) -> CliResult<()> {
    let rows = gate_error_sweep(
        &plan.rates,
        plan.r,
        &plan.variants,
        plan.theta_points,
        &plan.table,
    )?;
    let mut text = format!("{NOISE_SWEEP_HEADER}\n");
    for row in rows {
        writeln!(
            text,
            "{},{},{}",
            format_float(row.rate),
            row.variant,
            format_float(row.abs_error)
        )
        .expect("writing to a string");
    }
    write_out(out, &text)
}

pub fn unfold(histogram: &Path, response: &Path, opts: BremOptions, out: &Path) -> CliResult<()> {
    let h = read_histogram(histogram)?;
    if h.shots() == 0 {
        return Err(Error::EmptyTable(histogram.to_path_buf()).into());
    }
    let r = read_response(response)?;
    if r.n_qubits() != h.n_bits() {
        return Err(Error::Arity {
            expected: r.n_qubits(),
            got: h.n_bits(),
        }
        .into());
    }
    let measured = ProbabilityVector::new(h.frequencies())?;
    let unfolded = brem_unfold(&measured, &r, opts)?;
    if !unfolded.converged {
        warn!(
            "unfolding stopped after {} iterations without converging",
            unfolded.iterations
        );
    }
    write_spectrum(out, &unfolded.spectrum)?;
    Ok(())
}

pub fn exact_curve(table: &CoefficientTable, out: &Path) -> CliResult<()> {
    let mut text = format!("{EXACT_CURVE_HEADER}\n");
    for row in table.rows() {
        let e = exact_ground_energy(&ObservableSum::from_coefficients(&row.g));
        writeln!(text, "{},{}", format_float(row.r), format_float(e)).expect("writing to a string");
    }
    write_out(out, &text)
}

/// Response matrix of the campaign's single family under its single
/// scenario.
pub fn calibrate_response(campaign: &Campaign, out: &Path) -> CliResult<()> {
    let (family, scenario) = match (&campaign.families[..], &campaign.scenarios[..]) {
        ([f], [s]) => (*f, s),
        _ => {
            return Err(CliError::Config(
                "calibrate needs exactly one family and one noise scenario".into(),
            ))
        }
    };
    let t = &campaign.template;
    let r = calibrate(
        family.width(),
        &family.noise_model(&scenario.noise),
        t.mode,
        t.calibration_shots,
        t.seed,
    )?;
    write_response(out, &r)?;
    Ok(())
}
