//! Named campaigns covering the simulated noise scenarios.

use qem_core::noise::{NoiseModel, ReadoutError};

use crate::config::{Campaign, ExperimentConfig, Scenario, SweepPlan};
use crate::error::{CliError, CliResult};

const READOUT_RATES: [&str; 3] = ["0.5", "2", "4"];
const DEPOLARIZING_RATES: [&str; 4] = ["0.1", "0.5", "1", "2"];
const MIXED_DEPOLARIZING: [&str; 3] = ["0.4", "1.2", "2"];
const MIXED_READOUT: [&str; 3] = ["1", "2", "3"];

pub const SWEEP_PRESET: &str = "gate-error-sweep";

pub enum Preset {
    Campaign(Campaign),
    Sweep(SweepPlan),
}

fn pct(s: &str) -> f64 {
    s.parse::<f64>().expect("preset rate") / 100.0
}

fn readout(rate: &str) -> Scenario {
    let p = pct(rate);
    Scenario {
        label: format!("readout-{rate}pct"),
        noise: NoiseModel::readout_only(ReadoutError { p01: p, p10: p }),
    }
}

fn depolarizing(rate: &str) -> Scenario {
    let p = pct(rate);
    Scenario {
        label: format!("depolarizing-{rate}pct"),
        noise: NoiseModel::depolarizing(p, p),
    }
}

fn mixed(readout_rate: &str, dep_rate: &str) -> Scenario {
    let (r, d) = (pct(readout_rate), pct(dep_rate));
    Scenario {
        label: format!("readout-{readout_rate}pct-depolarizing-{dep_rate}pct"),
        noise: NoiseModel::depolarizing(d, d).with_readout(ReadoutError { p01: r, p10: r }),
    }
}

fn scenarios(name: &str) -> Option<(Vec<Scenario>, bool)> {
    if name == "noise-free" {
        return Some((
            vec![Scenario {
                label: "noise-free".into(),
                noise: NoiseModel::noiseless(),
            }],
            false,
        ));
    }
    if name == "readout-only" {
        return Some((READOUT_RATES.map(readout).to_vec(), true));
    }
    if name == "depolarizing-only" {
        return Some((DEPOLARIZING_RATES.map(depolarizing).to_vec(), true));
    }
    if let Some(rate) = name
        .strip_prefix("readout-only-")
        .and_then(|s| s.strip_suffix("pct"))
    {
        return READOUT_RATES
            .contains(&rate)
            .then(|| (vec![readout(rate)], true));
    }
    if let Some(rate) = name
        .strip_prefix("depolarizing-only-")
        .and_then(|s| s.strip_suffix("pct"))
    {
        return DEPOLARIZING_RATES
            .contains(&rate)
            .then(|| (vec![depolarizing(rate)], true));
    }
    if let Some(rate) = name
        .strip_prefix("mixed-")
        .and_then(|s| s.strip_suffix("pct-readout"))
    {
        return MIXED_READOUT.contains(&rate).then(|| {
            (
                MIXED_DEPOLARIZING.iter().map(|d| mixed(rate, d)).collect(),
                true,
            )
        });
    }
    None
}

/// Every preset name, campaigns first.
pub fn names() -> Vec<String> {
    let mut out = vec![
        "noise-free".to_string(),
        "readout-only".into(),
        "depolarizing-only".into(),
    ];
    out.extend(READOUT_RATES.iter().map(|r| format!("readout-only-{r}pct")));
    out.extend(
        DEPOLARIZING_RATES
            .iter()
            .map(|r| format!("depolarizing-only-{r}pct")),
    );
    out.extend(
        MIXED_READOUT
            .iter()
            .map(|r| format!("mixed-{r}pct-readout")),
    );
    out.push(SWEEP_PRESET.into());
    out
}

/// Campaign presets run all three families at every bond length with
/// 257 angles and 8192 shots; the sweep preset evaluates rates 0..=50% in
/// exact mode at 0.75 Å.
pub fn resolve(name: &str) -> CliResult<Preset> {
    let base = ExperimentConfig::default();
    if name == SWEEP_PRESET {
        return Ok(Preset::Sweep(base.sweep_plan()?));
    }
    let (scenarios, brem) = scenarios(name).ok_or_else(|| {
        CliError::Config(format!(
            "unknown preset `{name}` (known: {})",
            names().join(", ")
        ))
    })?;
    let mut template = base.template()?;
    template.brem = brem;
    Ok(Preset::Campaign(Campaign {
        table: base.table()?,
        families: base.families()?,
        scenarios,
        template,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_name_resolves() {
        for n in names() {
            assert!(resolve(&n).is_ok(), "{n}");
        }
        assert!(resolve("readout-only-3pct").is_err());
        assert!(resolve("mixed-4pct-readout").is_err());
    }

    #[test]
    fn mixed_preset_spans_three_gate_rates() {
        let Preset::Campaign(c) = resolve("mixed-1pct-readout").unwrap() else {
            panic!("campaign expected");
        };
        let rates: Vec<f64> = c.scenarios.iter().map(|s| s.noise.p2).collect();
        assert_eq!(rates, vec![0.004, 0.012, 0.02]);
        assert!(c.scenarios.iter().all(|s| s.noise.readout.p01 == 0.01));
        assert!(c.template.brem);
        assert_eq!(c.families.len(), 3);
    }

    #[test]
    fn labels_are_csv_safe() {
        for n in names() {
            if let Ok(Preset::Campaign(c)) = resolve(&n) {
                assert!(c.scenarios.iter().all(|s| !s.label.contains(',')));
            }
        }
    }
}
