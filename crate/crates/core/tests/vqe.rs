use qem_core::chem::{exact_ground_energy, hamiltonian, CoefficientTable, ObservableSum};
use qem_core::noise::{NoiseModel, ReadoutError};
use qem_core::vqe::{
    gate_error_sweep, run_scan, theta_grid, BremOrder, CircuitFamily, EnergyRecord, RSelection,
    RunMode, ScanConfig,
};

fn closed_form(g: &[f64; 6], theta: f64) -> f64 {
    g[0] + g[3] + (g[1] + g[2]) * (2.0 * theta).cos() + (g[5] - g[4]) * (2.0 * theta).sin()
}

fn grid_minimum(g: &[f64; 6], n: usize) -> f64 {
    theta_grid(n)
        .unwrap()
        .into_iter()
        .map(|t| closed_form(g, t))
        .fold(f64::INFINITY, f64::min)
}

fn scan(cfg: ScanConfig) -> Vec<EnergyRecord> {
    run_scan(&cfg, &CoefficientTable::bundled()).unwrap()
}

fn at(rs: &[f64], family: CircuitFamily, noise: NoiseModel) -> ScanConfig {
    ScanConfig {
        family,
        r_selection: RSelection::List(rs.to_vec()),
        noise,
        ..ScanConfig::default()
    }
}

#[test]
fn continuous_ansatz_minimum_is_the_ground_energy() {
    for row in CoefficientTable::bundled().rows() {
        let g = &row.g;
        let analytic = g[0] + g[3] - (g[1] + g[2]).hypot(g[5] - g[4]);
        let exact = exact_ground_energy(&ObservableSum::from_coefficients(g));
        assert!((analytic - exact).abs() < 1e-9, "r = {}", row.r);
    }
}

#[test]
fn noise_free_scan_reaches_grid_optimum() {
    let table = CoefficientTable::bundled();
    let recs = scan(ScanConfig::default());
    assert_eq!(recs.len(), table.len());
    for (rec, row) in recs.iter().zip(table.rows()) {
        assert_eq!(rec.r, row.r);
        assert!((rec.e_raw - grid_minimum(&row.g, 257)).abs() < 1e-9);
        assert!(
            rec.e_raw >= rec.e_exact - 1e-12,
            "variational bound at r = {}",
            rec.r
        );
        assert!(rec.e_raw - rec.e_exact <= 1e-3, "grid gap at r = {}", rec.r);
        assert!((closed_form(&row.g, rec.theta_star_raw) - rec.e_raw).abs() < 1e-9);
    }
}

#[test]
fn finer_grid_closes_the_gap() {
    let table = CoefficientTable::bundled();
    let row = table.row(0.75).unwrap();
    let exact = exact_ground_energy(&hamiltonian(&table, 0.75).unwrap());
    let coarse = grid_minimum(&row.g, 257) - exact;
    let fine = grid_minimum(&row.g, 4097) - exact;
    assert!(coarse <= 1e-3 && fine <= coarse && fine < 1e-5);
}

#[test]
fn direct_yy_measurement_matches_identity() {
    let rs = [0.5, 0.75, 1.5, 2.5];
    let noise = NoiseModel::noiseless();
    for family in [
        CircuitFamily::Bare,
        CircuitFamily::Encoded,
        CircuitFamily::Duplicate,
    ] {
        let implied = scan(at(&rs, family, noise.clone()));
        let direct = scan(ScanConfig {
            measure_yy: true,
            ..at(&rs, family, noise.clone())
        });
        for (a, b) in implied.iter().zip(&direct) {
            assert!((a.e_raw - b.e_raw).abs() < 1e-9, "{family} r = {}", a.r);
        }
    }
}

#[test]
fn every_family_is_exact_without_noise() {
    for family in CircuitFamily::ALL {
        let rec = &scan(at(&[0.75], family, NoiseModel::noiseless()))[0];
        let g = CoefficientTable::bundled().row(0.75).unwrap().g;
        let e = rec.scheme_energy(family);
        assert!((e - grid_minimum(&g, 257)).abs() < 1e-9, "{family}");
        if family.is_duplicate() {
            assert!((rec.denominator.unwrap() - 1.0).abs() < 1e-9);
        }
        if family == CircuitFamily::Encoded {
            assert!((rec.retention_ratio.unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn error_grows_with_gate_noise() {
    for family in [
        CircuitFamily::Bare,
        CircuitFamily::Encoded,
        CircuitFamily::Duplicate,
    ] {
        let errors: Vec<f64> = [0.0, 0.01, 0.03, 0.06]
            .into_iter()
            .map(|p| {
                let rec = &scan(at(&[0.75], family, NoiseModel::depolarizing(p, p)))[0];
                (rec.scheme_energy(family) - rec.e_exact).abs()
            })
            .collect();
        assert!(
            errors.windows(2).all(|w| w[1] > w[0]),
            "{family}: {errors:?}"
        );
    }
}

#[test]
fn duplicate_beats_bare_at_two_percent() {
    let noise = NoiseModel::depolarizing(0.02, 0.02);
    let bare = scan(ScanConfig {
        noise: noise.clone(),
        ..ScanConfig::default()
    });
    let dup = scan(ScanConfig {
        family: CircuitFamily::Duplicate,
        noise,
        ..ScanConfig::default()
    });
    for (b, d) in bare.iter().zip(&dup) {
        assert!(
            (d.e_raw - d.e_exact).abs() < (b.e_raw - b.e_exact).abs(),
            "r = {}",
            b.r
        );
    }
}

#[test]
fn sweep_at_zero_rate_is_noise_free() {
    let table = CoefficientTable::bundled();
    let g = table.row(0.75).unwrap().g;
    let floor = grid_minimum(&g, 257) - exact_ground_energy(&ObservableSum::from_coefficients(&g));
    let rows = gate_error_sweep(&[0.0], 0.75, &CircuitFamily::ALL, 257, &table).unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert!((row.abs_error - floor).abs() < 1e-9, "{}", row.variant);
    }
}

#[test]
fn sweep_rejects_out_of_range_rates() {
    let table = CoefficientTable::bundled();
    assert!(gate_error_sweep(&[0.6], 0.75, &[CircuitFamily::Bare], 17, &table).is_err());
}

#[test]
fn exact_unfolding_removes_readout_error() {
    let noise = NoiseModel::readout_only(ReadoutError {
        p01: 0.04,
        p10: 0.04,
    });
    for family in [
        CircuitFamily::Bare,
        CircuitFamily::Encoded,
        CircuitFamily::Duplicate,
    ] {
        let rec = &scan(ScanConfig {
            brem: true,
            ..at(&[0.75, 2.0], family, noise.clone())
        });
        for r in rec {
            let e = r.e_mitigated.unwrap();
            assert!((e - r.e_exact).abs() < 2e-3, "{family} r = {}: {e}", r.r);
            assert!((r.e_raw - r.e_exact).abs() > (e - r.e_exact).abs());
        }
    }
}

#[test]
fn unfolding_orders_agree_under_mixed_noise() {
    let noise = NoiseModel::depolarizing(0.004, 0.004).with_readout(ReadoutError {
        p01: 0.01,
        p10: 0.01,
    });
    let run = |order| {
        scan(ScanConfig {
            brem: true,
            brem_order: order,
            ..at(&[0.75], CircuitFamily::Encoded, noise.clone())
        })
        .remove(0)
    };
    let first = run(BremOrder::UnfoldThenPostSelect);
    let second = run(BremOrder::PostSelectThenUnfold);
    for rec in [&first, &second] {
        let e = rec.e_mitigated.unwrap();
        assert!((e - rec.e_exact).abs() < (rec.e_raw - rec.e_exact).abs());
    }
    assert!((first.e_mitigated.unwrap() - second.e_mitigated.unwrap()).abs() < 0.02);
}

#[test]
fn sampled_scans_are_deterministic() {
    let cfg = ScanConfig {
        family: CircuitFamily::Duplicate,
        theta_points: 33,
        mode: RunMode::Shots(2048),
        noise: NoiseModel::depolarizing(0.01, 0.01).with_readout(ReadoutError {
            p01: 0.02,
            p10: 0.02,
        }),
        brem: true,
        r_selection: RSelection::List(vec![0.5, 0.75, 1.0]),
        seed: 17,
        ..ScanConfig::default()
    };
    let table = CoefficientTable::bundled();
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_scan(&cfg, &table).unwrap());
    let parallel = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| run_scan(&cfg, &table).unwrap());
    assert_eq!(serial, parallel);
    let reseeded = run_scan(
        &ScanConfig {
            seed: 18,
            ..cfg.clone()
        },
        &table,
    )
    .unwrap();
    assert_ne!(serial, reseeded);
}

#[test]
fn sampled_noise_free_energies_stay_close() {
    let recs = scan(ScanConfig {
        mode: RunMode::Shots(8192),
        r_selection: RSelection::List(vec![0.5, 0.75, 1.5, 3.0]),
        seed: 3,
        ..ScanConfig::default()
    });
    for rec in recs {
        assert!((rec.e_raw - rec.e_exact).abs() <= 0.01, "r = {}", rec.r);
    }
}
