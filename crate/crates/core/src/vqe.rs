//! Grid-search VQE driver: θ scans per bond length for each circuit family,
//! raw and mitigated energy assembly, and the gate-error sweep.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use log::{debug, warn};
use rayon::prelude::*;

use crate::chem::{
    assemble_energy, exact_ground_energy, CoefficientTable, ObservableSum, TermExpectations,
};
use crate::circuits::{
    bare_ansatz, calibration_circuits, duplicate_circuit, encoded_ansatz, AnsatzParams, BGateForm,
    DuplicateOptions, DuplicateReadout, MeasurementBasis,
};
use crate::densesim::{sample_shots, Circuit, ProbabilityVector, ShotHistogram};
use crate::error::{Error, Result};
use crate::mitigation::{
    brem_unfold, decode_all, duplicate_estimate, duplicate_estimate_exact,
    estimate_response_matrix, expectation_from_distribution, postselect_distribution, BremOptions,
    DuplicateEstimate, ResponseMatrix,
};
use crate::noise::{noisy_distribution, NoiseModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CircuitFamily {
    Bare,
    Encoded,
    Duplicate,
    /// Duplicate circuit whose beam-splitter gates are noiseless.
    DuplicateIdealB,
    /// Duplicate circuit with single-qubit gate noise switched off.
    Duplicate2qNoiseOnly,
}

impl CircuitFamily {
    pub const ALL: [CircuitFamily; 5] = [
        Self::Bare,
        Self::Encoded,
        Self::Duplicate,
        Self::DuplicateIdealB,
        Self::Duplicate2qNoiseOnly,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::Bare => "bare",
            Self::Encoded => "encoded",
            Self::Duplicate => "duplicate",
            Self::DuplicateIdealB => "duplicate_ideal_b",
            Self::Duplicate2qNoiseOnly => "duplicate_2q_noise_only",
        }
    }

    pub fn is_duplicate(self) -> bool {
        matches!(
            self,
            Self::Duplicate | Self::DuplicateIdealB | Self::Duplicate2qNoiseOnly
        )
    }

    /// Number of measured qubits, which is also the calibration width.
    pub fn width(self) -> usize {
        match self {
            Self::Bare => 2,
            Self::Encoded => crate::circuits::ENCODED_WIDTH,
            _ => 4,
        }
    }

    /// The noise model this family runs under, derived from the scenario's.
    pub fn noise_model(self, base: &NoiseModel) -> NoiseModel {
        let mut m = base.clone();
        match self {
            Self::DuplicateIdealB => m.ideal_beam_splitters = true,
            Self::Duplicate2qNoiseOnly => m.p1 = 0.0,
            _ => {}
        }
        m
    }
}

impl fmt::Display for CircuitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CircuitFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.label() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown circuit family `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Exact,
    Shots(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum RSelection {
    All,
    List(Vec<f64>),
}

/// Order of readout unfolding and post-selection for the encoded family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BremOrder {
    #[default]
    UnfoldThenPostSelect,
    PostSelectThenUnfold,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub family: CircuitFamily,
    pub theta_points: usize,
    pub r_selection: RSelection,
    pub mode: RunMode,
    pub noise: NoiseModel,
    pub brem: bool,
    pub brem_options: BremOptions,
    pub brem_order: BremOrder,
    pub calibration_shots: u64,
    /// Measure ⟨Y₁Y₂⟩ directly instead of using −⟨X₁X₂⟩.
    pub measure_yy: bool,
    pub b_form: BGateForm,
    pub seed: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            family: CircuitFamily::Bare,
            theta_points: 257,
            r_selection: RSelection::All,
            mode: RunMode::Exact,
            noise: NoiseModel::noiseless(),
            brem: false,
            brem_options: BremOptions::default(),
            brem_order: BremOrder::default(),
            calibration_shots: 8192,
            measure_yy: false,
            b_form: BGateForm::Exact,
            seed: 0,
        }
    }
}

/// Minimum-energy result at one bond length.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyRecord {
    pub r: f64,
    pub theta_star_raw: f64,
    pub e_raw: f64,
    pub theta_star_mitigated: Option<f64>,
    pub e_mitigated: Option<f64>,
    pub e_exact: f64,
    /// Mean post-selection retention over the measured bases at the
    /// mitigated optimum (encoded family).
    pub retention_ratio: Option<f64>,
    /// Duplicate-estimator denominator `Tr(ρ²)` at the raw optimum.
    pub denominator: Option<f64>,
}

impl EnergyRecord {
    /// Optimum angle of the mitigated curve when there is one, else of the
    /// raw curve.
    pub fn theta_star(&self) -> f64 {
        self.theta_star_mitigated.unwrap_or(self.theta_star_raw)
    }

    /// Energy produced by the family's own mitigation scheme without
    /// readout unfolding: raw for bare and duplicate circuits (the duplicate
    /// estimator is itself the scheme), post-selected for the encoded one.
    pub fn scheme_energy(&self, family: CircuitFamily) -> f64 {
        match family {
            CircuitFamily::Encoded => self.e_mitigated.unwrap_or(self.e_raw),
            _ => self.e_raw,
        }
    }
}

/// `n` evenly spaced angles over `[−π, π]`, endpoints included.
pub fn theta_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Parameter(format!(
            "theta_points must be at least 2, got {n}"
        )));
    }
    let step = 2.0 * PI / (n - 1) as f64;
    Ok((0..n)
        .map(|k| {
            if k == n - 1 {
                PI
            } else {
                -PI + k as f64 * step
            }
        })
        .collect())
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one sampling task, a hash of its coordinates.
pub fn task_seed(master: u64, r_index: u64, theta_index: u64, circuit_id: u64) -> u64 {
    [r_index, theta_index, circuit_id]
        .into_iter()
        .fold(splitmix64(master), |h, x| splitmix64(h ^ splitmix64(x)))
}

const CALIBRATION_TASK: u64 = u64::MAX;

/// One energy sample on the θ grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPoint {
    pub theta: f64,
    pub energy: f64,
}

/// Smallest energy; energies within 1e-12 tie and the smaller θ wins.
pub fn min_over_theta(points: &[ThetaPoint]) -> Result<ThetaPoint> {
    let mut best: Option<ThetaPoint> = None;
    for &p in points {
        best = match best {
            None => Some(p),
            Some(b) if p.energy < b.energy - 1e-12 => Some(p),
            Some(b) if (p.energy - b.energy).abs() <= 1e-12 && p.theta < b.theta => Some(p),
            keep => keep,
        };
    }
    best.ok_or_else(|| Error::Parameter("no θ points to minimize over".into()))
}

/// One measured circuit of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Setting {
    basis: MeasurementBasis,
    folded: bool,
}

fn settings(family: CircuitFamily, measure_yy: bool) -> Vec<Setting> {
    let plain = |basis| Setting {
        basis,
        folded: false,
    };
    let folded = |basis| Setting {
        basis,
        folded: true,
    };
    let mut out = if family.is_duplicate() {
        vec![
            plain(MeasurementBasis::ZZ),
            folded(MeasurementBasis::ZZ),
            folded(MeasurementBasis::XX),
        ]
    } else {
        vec![plain(MeasurementBasis::ZZ), plain(MeasurementBasis::XX)]
    };
    if measure_yy {
        out.push(if family.is_duplicate() {
            folded(MeasurementBasis::YY)
        } else {
            plain(MeasurementBasis::YY)
        });
    }
    out
}

fn build(family: CircuitFamily, s: Setting, theta: f64, b_form: BGateForm) -> Result<Circuit> {
    let p = AnsatzParams::new(theta)?;
    match family {
        CircuitFamily::Bare => bare_ansatz(p, s.basis),
        CircuitFamily::Encoded => encoded_ansatz(p, s.basis),
        _ => duplicate_circuit(
            p,
            s.basis,
            DuplicateOptions {
                readout: if s.folded {
                    DuplicateReadout::ParityFolded
                } else {
                    DuplicateReadout::Direct
                },
                b_form,
            },
        ),
    }
}

/// Measured data of one setting: exact distribution or sampled counts.
enum Observed {
    Exact(ProbabilityVector),
    Shots(ShotHistogram),
}

impl Observed {
    fn distribution(&self) -> Result<ProbabilityVector> {
        match self {
            Observed::Exact(p) => Ok(p.clone()),
            Observed::Shots(h) => ProbabilityVector::new(h.frequencies()),
        }
    }

    fn shots(&self) -> Option<u64> {
        match self {
            Observed::Exact(_) => None,
            Observed::Shots(h) => Some(h.shots()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct PartialTerms {
    z1: Option<f64>,
    z2: Option<f64>,
    z1z2: Option<f64>,
    x1x2: Option<f64>,
    y1y2: Option<f64>,
}

impl PartialTerms {
    fn complete(self) -> Result<TermExpectations> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::Parameter(format!("term {name} was not measured")))
        };
        Ok(TermExpectations {
            z1: need(self.z1, "Z1")?,
            z2: need(self.z2, "Z2")?,
            z1z2: need(self.z1z2, "Z1Z2")?,
            x1x2: need(self.x1x2, "X1X2")?,
            y1y2: self.y1y2,
        })
    }

    fn absorb_logical(&mut self, basis: MeasurementBasis, d: &ProbabilityVector) -> Result<()> {
        let e = |bits: &[usize]| expectation_from_distribution(d, bits);
        match basis {
            MeasurementBasis::ZZ => {
                self.z1 = Some(e(&[0])?);
                self.z2 = Some(e(&[1])?);
                self.z1z2 = Some(e(&[0, 1])?);
            }
            MeasurementBasis::XX => self.x1x2 = Some(e(&[0, 1])?),
            MeasurementBasis::YY => self.y1y2 = Some(e(&[0, 1])?),
        }
        Ok(())
    }
}

/// Evaluation of every setting at one θ (and one r in shot mode).
struct ThetaEval {
    raw: TermExpectations,
    mitigated: Option<TermExpectations>,
    retention: Option<f64>,
    denominator: Option<f64>,
    /// Post-selection discarded every shot in some basis.
    skipped: bool,
}

struct Evaluator<'a> {
    cfg: &'a ScanConfig,
    settings: Vec<Setting>,
    response: Option<ResponseMatrix>,
    logical_response: Option<ResponseMatrix>,
}

/// Physical ratio estimates lie in [−1, 1]; sampled ratios can overshoot.
fn clamp_ratio(e: &DuplicateEstimate) -> f64 {
    if e.ratio.abs() > 1.0 {
        debug!("clamping duplicate ratio {}", e.ratio);
    }
    e.ratio.clamp(-1.0, 1.0)
}

fn guarded_exact(
    p: &ProbabilityVector,
    bits: &[usize],
    shots: Option<u64>,
) -> Result<DuplicateEstimate> {
    let e = duplicate_estimate_exact(p, bits)?;
    if let Some(s) = shots {
        let floor = 10.0 / s as f64;
        if e.denominator.abs() < floor {
            return Err(Error::UnstableDenominator {
                denominator: e.denominator,
                floor,
            });
        }
    }
    Ok(e)
}

impl Evaluator<'_> {
    fn unfold(&self, p: &ProbabilityVector, r: &ResponseMatrix) -> Result<ProbabilityVector> {
        Ok(brem_unfold(p, r, self.cfg.brem_options)?.spectrum)
    }

    fn evaluate(&self, observed: &[Observed]) -> Result<ThetaEval> {
        match self.cfg.family {
            CircuitFamily::Bare => self.evaluate_bare(observed),
            CircuitFamily::Encoded => self.evaluate_encoded(observed),
            _ => self.evaluate_duplicate(observed),
        }
    }

    fn evaluate_bare(&self, observed: &[Observed]) -> Result<ThetaEval> {
        let mut raw = PartialTerms::default();
        let mut mit = PartialTerms::default();
        for (s, o) in self.settings.iter().zip(observed) {
            let d = o.distribution()?;
            raw.absorb_logical(s.basis, &d)?;
            if let Some(r) = &self.response {
                mit.absorb_logical(s.basis, &self.unfold(&d, r)?)?;
            }
        }
        Ok(ThetaEval {
            raw: raw.complete()?,
            mitigated: self.response.as_ref().map(|_| mit.complete()).transpose()?,
            retention: None,
            denominator: None,
            skipped: false,
        })
    }

    fn evaluate_encoded(&self, observed: &[Observed]) -> Result<ThetaEval> {
        let mut raw = PartialTerms::default();
        let mut mit = PartialTerms::default();
        let mut retention = 0.0;
        let mut discarded_all = false;
        for (s, o) in self.settings.iter().zip(observed) {
            let d = o.distribution()?;
            raw.absorb_logical(s.basis, &decode_all(d.probs())?)?;
            let selected = match (&self.response, self.cfg.brem_order) {
                (Some(r), BremOrder::UnfoldThenPostSelect) => {
                    postselect_distribution(&self.unfold(&d, r)?)
                }
                _ => postselect_distribution(&d),
            };
            match selected {
                Ok(ps) => {
                    retention += ps.retention_ratio;
                    let logical = match (&self.logical_response, self.cfg.brem_order) {
                        (Some(r), BremOrder::PostSelectThenUnfold) => {
                            self.unfold(&ps.logical, r)?
                        }
                        _ => ps.logical,
                    };
                    mit.absorb_logical(s.basis, &logical)?;
                }
                Err(Error::AllDiscarded(_)) => discarded_all = true,
                Err(e) => return Err(e),
            }
        }
        let mitigated = if discarded_all {
            None
        } else {
            Some(mit.complete()?)
        };
        Ok(ThetaEval {
            raw: raw.complete()?,
            mitigated,
            retention: (!discarded_all).then(|| retention / self.settings.len() as f64),
            denominator: None,
            skipped: discarded_all,
        })
    }

    fn evaluate_duplicate(&self, observed: &[Observed]) -> Result<ThetaEval> {
        let mut raw = PartialTerms::default();
        let mut mit = PartialTerms::default();
        let mut denominator = None;
        for (s, o) in self.settings.iter().zip(observed) {
            let raw_est = |bits: &[usize]| -> Result<DuplicateEstimate> {
                match o {
                    Observed::Exact(p) => duplicate_estimate_exact(p, bits),
                    Observed::Shots(h) => duplicate_estimate(h, bits),
                }
            };
            let unfolded = match &self.response {
                Some(r) => Some(self.unfold(&o.distribution()?, r)?),
                None => None,
            };
            let mit_est = |bits: &[usize]| -> Result<Option<DuplicateEstimate>> {
                unfolded
                    .as_ref()
                    .map(|u| guarded_exact(u, bits, o.shots()))
                    .transpose()
            };
            match (s.basis, s.folded) {
                (MeasurementBasis::ZZ, false) => {
                    let z1 = raw_est(&[0])?;
                    denominator = Some(z1.denominator);
                    raw.z1 = Some(clamp_ratio(&z1));
                    raw.z2 = Some(clamp_ratio(&raw_est(&[1])?));
                    mit.z1 = mit_est(&[0])?.map(|e| clamp_ratio(&e));
                    mit.z2 = mit_est(&[1])?.map(|e| clamp_ratio(&e));
                }
                (basis, true) => {
                    let r = Some(clamp_ratio(&raw_est(&[1])?));
                    let m = mit_est(&[1])?.map(|e| clamp_ratio(&e));
                    match basis {
                        MeasurementBasis::ZZ => (raw.z1z2, mit.z1z2) = (r, m),
                        MeasurementBasis::XX => (raw.x1x2, mit.x1x2) = (r, m),
                        MeasurementBasis::YY => (raw.y1y2, mit.y1y2) = (r, m),
                    }
                }
                (basis, false) => {
                    return Err(Error::Parameter(format!(
                        "unfolded duplicate setting in basis {}",
                        basis.label()
                    )))
                }
            }
        }
        Ok(ThetaEval {
            raw: raw.complete()?,
            mitigated: self.response.as_ref().map(|_| mit.complete()).transpose()?,
            retention: None,
            denominator,
            skipped: false,
        })
    }
}

/// Response matrix of the family's measured register under its noise
/// model: exact in exact mode, estimated from sampled calibration circuits
/// otherwise.
pub fn calibrate(
    width: usize,
    model: &NoiseModel,
    mode: RunMode,
    calibration_shots: u64,
    seed: u64,
) -> Result<ResponseMatrix> {
    let circuits = calibration_circuits(width)?;
    let dists: Vec<ProbabilityVector> = circuits
        .par_iter()
        .map(|c| noisy_distribution(c, model))
        .collect::<Result<_>>()?;
    match mode {
        RunMode::Exact => {
            let dim = 1 << width;
            let mut data = vec![0.0; dim * dim];
            for (i, d) in dists.iter().enumerate() {
                for (j, p) in d.probs().iter().enumerate() {
                    data[j * dim + i] = *p;
                }
            }
            ResponseMatrix::new(width, data)
        }
        RunMode::Shots(_) => {
            let hs: Vec<ShotHistogram> = dists
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    sample_shots(
                        d,
                        calibration_shots,
                        task_seed(seed, CALIBRATION_TASK, i as u64, 0),
                    )
                })
                .collect::<Result<_>>()?;
            estimate_response_matrix(&hs)
        }
    }
}

fn selected_rows(cfg: &ScanConfig, table: &CoefficientTable) -> Result<Vec<usize>> {
    match &cfg.r_selection {
        RSelection::All => Ok((0..table.len()).collect()),
        RSelection::List(rs) => {
            let mut idx: Vec<usize> = rs
                .iter()
                .map(|r| table.index_of(*r))
                .collect::<Result<_>>()?;
            idx.sort_unstable();
            idx.dedup();
            Ok(idx)
        }
    }
}

/// Runs the θ scan at every selected bond length and returns one record per
/// bond length, ordered by `r`.
pub fn run_scan(cfg: &ScanConfig, table: &CoefficientTable) -> Result<Vec<EnergyRecord>> {
    if table.is_empty() {
        return Err(Error::Parameter("coefficient table is empty".into()));
    }
    if let RunMode::Shots(0) = cfg.mode {
        return Err(Error::Parameter("shot count must be positive".into()));
    }
    let model = cfg.family.noise_model(&cfg.noise);
    model.validate()?;
    let thetas = theta_grid(cfg.theta_points)?;
    let rows = selected_rows(cfg, table)?;
    let settings = settings(cfg.family, cfg.measure_yy);

    let (response, logical_response) = if cfg.brem {
        let r = calibrate(
            cfg.family.width(),
            &model,
            cfg.mode,
            cfg.calibration_shots,
            cfg.seed,
        )?;
        let logical = if cfg.family == CircuitFamily::Encoded
            && cfg.brem_order == BremOrder::PostSelectThenUnfold
        {
            Some(calibrate(
                2,
                &model,
                cfg.mode,
                cfg.calibration_shots,
                cfg.seed ^ 0x5eed,
            )?)
        } else {
            None
        };
        (Some(r), logical)
    } else {
        (None, None)
    };
    let evaluator = Evaluator {
        cfg,
        settings: settings.clone(),
        response,
        logical_response,
    };

    // distributions depend on θ only, so they are shared across bond lengths
    let dists: Vec<Vec<ProbabilityVector>> = thetas
        .par_iter()
        .map(|&t| {
            settings
                .iter()
                .map(|&s| noisy_distribution(&build(cfg.family, s, t, cfg.b_form)?, &model))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let exact_evals: Option<Vec<ThetaEval>> = match cfg.mode {
        RunMode::Exact => Some(
            dists
                .par_iter()
                .map(|ds| {
                    let obs: Vec<Observed> = ds.iter().cloned().map(Observed::Exact).collect();
                    evaluator.evaluate(&obs)
                })
                .collect::<Result<_>>()?,
        ),
        RunMode::Shots(_) => None,
    };

    rows.par_iter()
        .map(|&ri| {
            let row = &table.rows()[ri];
            let sampled: Vec<ThetaEval>;
            let evals: &[ThetaEval] = match (&exact_evals, cfg.mode) {
                (Some(e), _) => e,
                (None, RunMode::Shots(shots)) => {
                    sampled = dists
                        .iter()
                        .enumerate()
                        .map(|(ti, ds)| {
                            let obs: Vec<Observed> = ds
                                .iter()
                                .enumerate()
                                .map(|(ci, d)| {
                                    let seed = task_seed(cfg.seed, ri as u64, ti as u64, ci as u64);
                                    sample_shots(d, shots, seed).map(Observed::Shots)
                                })
                                .collect::<Result<_>>()?;
                            evaluator.evaluate(&obs)
                        })
                        .collect::<Result<_>>()?;
                    &sampled
                }
                (None, RunMode::Exact) => unreachable!("exact evaluations are precomputed"),
            };
            record_for_row(row.r, &row.g, &thetas, evals)
        })
        .collect()
}

fn record_for_row(
    r: f64,
    g: &[f64; 6],
    thetas: &[f64],
    evals: &[ThetaEval],
) -> Result<EnergyRecord> {
    let mut raw = Vec::with_capacity(thetas.len());
    let mut mitigated = Vec::with_capacity(thetas.len());
    let mut skipped = 0;
    let mut any_mitigation = false;
    for (&theta, ev) in thetas.iter().zip(evals) {
        raw.push(ThetaPoint {
            theta,
            energy: assemble_energy(g, &ev.raw)?,
        });
        match &ev.mitigated {
            Some(m) => {
                any_mitigation = true;
                mitigated.push(ThetaPoint {
                    theta,
                    energy: assemble_energy(g, m)?,
                });
            }
            None if ev.skipped => skipped += 1,
            None => {}
        }
    }
    if skipped > 0 {
        warn!("r = {r}: {skipped} θ points discarded every shot and were skipped");
    }
    let best_raw = min_over_theta(&raw)?;
    let best_mit = if any_mitigation {
        Some(min_over_theta(&mitigated)?)
    } else {
        None
    };
    let at = |theta: f64| thetas.iter().position(|t| *t == theta).expect("grid angle");
    let retention = best_mit.and_then(|m| evals[at(m.theta)].retention);
    let denominator = evals[at(best_raw.theta)].denominator;
    Ok(EnergyRecord {
        r,
        theta_star_raw: best_raw.theta,
        e_raw: best_raw.energy,
        theta_star_mitigated: best_mit.map(|m| m.theta),
        e_mitigated: best_mit.map(|m| m.energy),
        e_exact: exact_ground_energy(&ObservableSum::from_coefficients(g)),
        retention_ratio: retention,
        denominator,
    })
}

/// One row of the gate-error sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub rate: f64,
    pub variant: CircuitFamily,
    pub abs_error: f64,
}

/// Exact-mode ground-energy error of each variant at one bond length with
/// depolarizing rate `p1 = p2 = rate`, no readout error and no unfolding.
pub fn gate_error_sweep(
    rates: &[f64],
    r: f64,
    variants: &[CircuitFamily],
    theta_points: usize,
    table: &CoefficientTable,
) -> Result<Vec<SweepRow>> {
    if let Some(bad) = rates.iter().find(|p| !(0.0..=0.5).contains(*p)) {
        return Err(Error::Parameter(format!(
            "sweep rate {bad} outside [0, 0.5]"
        )));
    }
    let mut out = Vec::with_capacity(rates.len() * variants.len());
    for &variant in variants {
        for &rate in rates {
            let cfg = ScanConfig {
                family: variant,
                theta_points,
                r_selection: RSelection::List(vec![r]),
                noise: NoiseModel::depolarizing(rate, rate),
                b_form: BGateForm::Exact,
                ..ScanConfig::default()
            };
            let rec = run_scan(&cfg, table)?
                .pop()
                .ok_or_else(|| Error::Parameter("sweep produced no record".into()))?;
            out.push(SweepRow {
                rate,
                variant,
                abs_error: (rec.scheme_energy(variant) - rec.e_exact).abs(),
            });
        }
    }
    Ok(out)
}
