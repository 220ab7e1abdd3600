//! Experiment configuration files.
//!
//! A config is a TOML document with the sections `[chem]`, `[scan]`,
//! `[noise]`, `[run]`, `[mitigation]` and `[sweep]`. Every key is optional
//! and unknown keys are rejected.

use std::path::{Path, PathBuf};

use qem_core::chem::{load_coefficients, CoefficientTable};
use qem_core::circuits::BGateForm;
use qem_core::mitigation::BremOptions;
use qem_core::noise::{NoiseModel, ReadoutError};
use qem_core::vqe::{BremOrder, CircuitFamily, RSelection, RunMode, ScanConfig};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub chem: ChemSection,
    pub scan: ScanSection,
    pub noise: NoiseSection,
    pub run: RunSection,
    pub mitigation: MitigationSection,
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChemSection {
    /// Bundled table when absent.
    pub coefficients_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RList {
    Keyword(String),
    Values(Vec<f64>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSection {
    pub theta_points: usize,
    /// `"all"` or a list of bond lengths in Å.
    pub r_list: RList,
}

impl Default for ScanSection {
    fn default() -> Self {
        Self {
            theta_points: 257,
            r_list: RList::Keyword("all".into()),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSection {
    pub depolarizing_1q: f64,
    pub depolarizing_2q: f64,
    pub readout_p01: f64,
    pub readout_p10: f64,
}

impl NoiseSection {
    pub fn model(&self) -> NoiseModel {
        NoiseModel::depolarizing(self.depolarizing_1q, self.depolarizing_2q).with_readout(
            ReadoutError {
                p01: self.readout_p01,
                p10: self.readout_p10,
            },
        )
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Families {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub family: Families,
    /// `exact` or `shots`.
    pub mode: String,
    pub shots: u64,
    pub seed: u64,
    /// Label written to the `scenario` column.
    pub scenario: String,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            family: Families::Many(vec!["bare".into(), "encoded".into(), "duplicate".into()]),
            mode: "shots".into(),
            shots: 8192,
            seed: 0,
            scenario: "custom".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MitigationSection {
    pub brem: bool,
    pub brem_max_iters: usize,
    pub brem_tol: f64,
    /// Noiseless beam-splitter gates in duplicate circuits.
    pub ideal_b: bool,
    /// `unfold-then-postselect` or `postselect-then-unfold`.
    pub brem_order: String,
    pub calibration_shots: u64,
    /// `exact` or `decomposed`.
    pub b_gate: String,
    pub measure_yy: bool,
}

impl Default for MitigationSection {
    fn default() -> Self {
        let brem = BremOptions::default();
        Self {
            brem: false,
            brem_max_iters: brem.max_iters,
            brem_tol: brem.tol,
            ideal_b: false,
            brem_order: "unfold-then-postselect".into(),
            calibration_shots: 8192,
            b_gate: "exact".into(),
            measure_yy: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub rates: Vec<f64>,
    pub r: f64,
    pub variants: Vec<String>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            rates: (0..=50).map(|k| k as f64 / 100.0).collect(),
            r: 0.75,
            variants: CircuitFamily::ALL
                .iter()
                .map(|f| f.label().into())
                .collect(),
        }
    }
}

/// One noise setting of a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub noise: NoiseModel,
}

/// A resolved `run-vqe` campaign: every family runs under every scenario.
#[derive(Debug, Clone)]
pub struct Campaign {
    pub table: CoefficientTable,
    pub families: Vec<CircuitFamily>,
    pub scenarios: Vec<Scenario>,
    /// Shared scan settings; family and noise are set per job.
    pub template: ScanConfig,
}

#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub table: CoefficientTable,
    pub rates: Vec<f64>,
    pub r: f64,
    pub variants: Vec<CircuitFamily>,
    pub theta_points: usize,
}

fn invalid(key: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("`{key}`: {message}"))
}

pub fn parse_config(text: &str, origin: &Path) -> CliResult<ExperimentConfig> {
    toml::from_str(text).map_err(|e| CliError::Config(format!("{}: {e}", origin.display())))
}

pub fn load_config(path: &Path) -> CliResult<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text, path)
}

fn parse_family(key: &str, s: &str) -> CliResult<CircuitFamily> {
    s.parse().map_err(|e| invalid(key, e))
}

impl ExperimentConfig {
    pub fn table(&self) -> CliResult<CoefficientTable> {
        match &self.chem.coefficients_path {
            Some(p) => Ok(load_coefficients(p)?),
            None => Ok(CoefficientTable::bundled()),
        }
    }

    pub fn families(&self) -> CliResult<Vec<CircuitFamily>> {
        let names = match &self.run.family {
            Families::One(s) => vec![s.clone()],
            Families::Many(v) => v.clone(),
        };
        if names.is_empty() {
            return Err(invalid("run.family", "no families listed"));
        }
        names
            .iter()
            .map(|s| parse_family("run.family", s))
            .collect()
    }

    fn r_selection(&self) -> CliResult<RSelection> {
        match &self.scan.r_list {
            RList::Keyword(k) if k == "all" => Ok(RSelection::All),
            RList::Keyword(k) => Err(invalid(
                "scan.r_list",
                format!("expected \"all\" or a list, got {k:?}"),
            )),
            RList::Values(v) if v.is_empty() => Err(invalid("scan.r_list", "empty list")),
            RList::Values(v) => Ok(RSelection::List(v.clone())),
        }
    }

    fn mode(&self) -> CliResult<RunMode> {
        match self.run.mode.as_str() {
            "exact" => Ok(RunMode::Exact),
            "shots" if self.run.shots == 0 => Err(invalid("run.shots", "must be positive")),
            "shots" => Ok(RunMode::Shots(self.run.shots)),
            other => Err(invalid(
                "run.mode",
                format!("expected exact or shots, got {other:?}"),
            )),
        }
    }

    /// Scan settings shared by every job, with the family left at its
    /// default.
    pub fn template(&self) -> CliResult<ScanConfig> {
        let m = &self.mitigation;
        if m.brem_max_iters == 0 {
            return Err(invalid("mitigation.brem_max_iters", "must be positive"));
        }
        if m.brem_tol.is_nan() || m.brem_tol <= 0.0 {
            return Err(invalid("mitigation.brem_tol", "must be positive"));
        }
        if m.calibration_shots == 0 {
            return Err(invalid("mitigation.calibration_shots", "must be positive"));
        }
        if self.scan.theta_points < 2 {
            return Err(invalid("scan.theta_points", "must be at least 2"));
        }
        let brem_order = match m.brem_order.as_str() {
            "unfold-then-postselect" => BremOrder::UnfoldThenPostSelect,
            "postselect-then-unfold" => BremOrder::PostSelectThenUnfold,
            other => {
                return Err(invalid(
                    "mitigation.brem_order",
                    format!("unknown order {other:?}"),
                ))
            }
        };
        let b_form = match m.b_gate.as_str() {
            "exact" => BGateForm::Exact,
            "decomposed" => BGateForm::Decomposed,
            other => {
                return Err(invalid(
                    "mitigation.b_gate",
                    format!("unknown form {other:?}"),
                ))
            }
        };
        Ok(ScanConfig {
            theta_points: self.scan.theta_points,
            r_selection: self.r_selection()?,
            mode: self.mode()?,
            brem: m.brem,
            brem_options: BremOptions {
                max_iters: m.brem_max_iters,
                tol: m.brem_tol,
            },
            brem_order,
            calibration_shots: m.calibration_shots,
            measure_yy: m.measure_yy,
            b_form,
            seed: self.run.seed,
            ..ScanConfig::default()
        })
    }

    pub fn noise_model(&self) -> CliResult<NoiseModel> {
        let model = self
            .noise
            .model()
            .with_ideal_beam_splitters(self.mitigation.ideal_b);
        model.validate().map_err(|e| invalid("noise", e))?;
        Ok(model)
    }

    pub fn campaign(&self) -> CliResult<Campaign> {
        if self.run.scenario.is_empty() || self.run.scenario.contains([',', '\n', '"']) {
            return Err(invalid(
                "run.scenario",
                "must be non-empty without commas or quotes",
            ));
        }
        Ok(Campaign {
            table: self.table()?,
            families: self.families()?,
            scenarios: vec![Scenario {
                label: self.run.scenario.clone(),
                noise: self.noise_model()?,
            }],
            template: self.template()?,
        })
    }

    pub fn sweep_plan(&self) -> CliResult<SweepPlan> {
        let s = &self.sweep;
        if s.rates.is_empty() {
            return Err(invalid("sweep.rates", "empty list"));
        }
        if let Some(bad) = s.rates.iter().find(|p| !(0.0..=0.5).contains(*p)) {
            return Err(invalid(
                "sweep.rates",
                format!("rate {bad} outside [0, 0.5]"),
            ));
        }
        if s.variants.is_empty() {
            return Err(invalid("sweep.variants", "no variants listed"));
        }
        if self.scan.theta_points < 2 {
            return Err(invalid("scan.theta_points", "must be at least 2"));
        }
        Ok(SweepPlan {
            table: self.table()?,
            rates: s.rates.clone(),
            r: s.r,
            variants: s
                .variants
                .iter()
                .map(|v| parse_family("sweep.variants", v))
                .collect::<CliResult<_>>()?,
            theta_points: self.scan.theta_points,
        })
    }
}
