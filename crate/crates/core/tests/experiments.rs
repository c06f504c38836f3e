use harmonic_chain::experiments::{
    run_scenario, status, write_csv, IntRange, ResultTable, ScenarioConfig, ScenarioKind,
};
use harmonic_chain::{bipartite_log_negativity, chain_covariance, nn_closed_form, ChainSpec, GroupSelection};

fn lookup(t: &ResultTable, n1: f64, n2: f64) -> f64 {
    let (i1, i2, iv) = (
        t.column_index("n1").unwrap(),
        t.column_index("n2").unwrap(),
        t.column_index("N").unwrap(),
    );
    t.rows().iter().find(|r| r[i1] == n1 && r[i2] == n2).unwrap()[iv]
}

#[test]
fn ring_grid_is_symmetric() {
    let t = run_scenario(&ScenarioConfig::new(ScenarioKind::BisectionGrid)).unwrap();
    assert_eq!(t.len(), 900);
    for n1 in 1..=30 {
        for n2 in 1..=30 {
            let (a, b) = (lookup(&t, n1 as f64, n2 as f64), lookup(&t, n2 as f64, n1 as f64));
            if n1 + n2 >= 3 {
                assert!((a - b).abs() <= 1e-9, "({n1},{n2}): {a} vs {b}");
            }
        }
    }
    let diag = nn_closed_form(20.0);
    for n in 2..=30 {
        assert!((lookup(&t, n as f64, n as f64) - diag).abs() < 1e-8);
    }
}

#[test]
fn terminated_grid_grows_with_n2_for_small_n1() {
    let t = run_scenario(&ScenarioConfig::new(ScenarioKind::TerminatedGrid)).unwrap();
    for n1 in 1..=3 {
        let row: Vec<f64> = (1..=30).map(|n2| lookup(&t, n1 as f64, n2 as f64)).collect();
        for (k, w) in row.windows(2).enumerate() {
            assert!(w[1] >= w[0] - 1e-12, "n1={n1}, n2={}: {} -> {}", k + 1, w[0], w[1]);
        }
    }
}

#[test]
fn separation_zero_beyond_contact() {
    let t = run_scenario(&ScenarioConfig::new(ScenarioKind::SeparationScan)).unwrap();
    let (gs, sep, n) = (
        t.column_index("group_size").unwrap(),
        t.column_index("separation").unwrap(),
        t.column_index("N").unwrap(),
    );
    let singles: Vec<&Vec<f64>> = t.rows().iter().filter(|r| r[gs] == 1.0).collect();
    assert!(singles[0][n] > 0.0);
    assert!(singles[1..].iter().all(|r| r[sep] >= 1.0 && r[n] == 0.0));
}

#[test]
fn thermal_scan_zero_temperature_is_ground() {
    let mut cfg = ScenarioConfig::new(ScenarioKind::ThermalScan);
    cfg.ranges.n = Some(IntRange::single(20));
    let t = run_scenario(&cfg).unwrap();
    let first = &t.rows()[0];
    assert_eq!(first[t.column_index("beta").unwrap()], f64::INFINITY);
    let spec = ChainSpec::ring(20, vec![20.0]).unwrap();
    let ground = bipartite_log_negativity(
        &chain_covariance(&spec).unwrap(),
        &GroupSelection::symmetric_bisection(20).unwrap(),
    )
    .unwrap()
    .log_negativity;
    assert_eq!(first[t.column_index("N").unwrap()], ground);
    let last = t.rows().last().unwrap();
    assert_eq!(last[t.column_index("N").unwrap()], 0.0);
}

#[test]
fn convergence_reaches_plateau() {
    let mut cfg = ScenarioConfig::new(ScenarioKind::ConvergenceRatio);
    cfg.chain.coupling_sets = vec![vec![0.5], vec![100.0]];
    cfg.ranges.n1 = Some(IntRange::new(1, 40));
    let t = run_scenario(&cfg).unwrap();
    let ratio = t.column("ratio").unwrap();
    let n_inf = t.column("N_inf").unwrap();
    assert_eq!(n_inf[0], nn_closed_form(0.5));
    // at n1 = 10 weak coupling has saturated, strong coupling has not
    assert!((ratio[9] - 1.0).abs() < 1e-6);
    assert!(ratio[40 + 9] < 0.99);
    // n1 = n2 is the symmetric bisection
    assert!((ratio[19] - 1.0).abs() < 1e-8 && (ratio[40 + 19] - 1.0).abs() < 1e-8);
    assert!(t.column("status").unwrap().iter().all(|&s| s == status::OK));
}

#[test]
fn even_odd_scan_tracks_rate() {
    let t = run_scenario(&ScenarioConfig::new(ScenarioKind::EvenOddScaling)).unwrap();
    let last = t.rows().last().unwrap();
    let per = last[t.column_index("N_per_n").unwrap()];
    let rate = last[t.column_index("rate").unwrap()];
    assert!((per - rate).abs() < 1e-3);
}

#[test]
fn correlations_and_q_spectrum_tables() {
    let t = run_scenario(&ScenarioConfig::new(ScenarioKind::ClassicalCorrelations)).unwrap();
    let c = t.column("correlation").unwrap();
    assert_eq!(c.len(), 40);
    assert!(c[..=20].windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));

    let t = run_scenario(&ScenarioConfig::new(ScenarioKind::QSpectrumScan)).unwrap();
    assert_eq!(t.len(), 41 * 20);
    let q = t.column("q").unwrap();
    for block in q.chunks(20) {
        let log_sum: f64 = block.iter().map(|x| x.ln()).sum();
        assert!(log_sum.abs() < 1e-8);
    }
}

#[test]
fn csv_file_round_trip() {
    let mut cfg = ScenarioConfig::new(ScenarioKind::EnergyVsNegativity);
    cfg.chain.n = Some(10);
    let t = run_scenario(&cfg).unwrap();
    let path = std::env::temp_dir().join(format!("hc-roundtrip-{}.csv", std::process::id()));
    write_csv(&t, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.ends_with('\n'));
    assert_eq!(text, t.to_csv_string());
    let back = ResultTable::from_csv(&text).unwrap();
    assert_eq!(back.columns(), t.columns());
    assert_eq!(back.to_csv_string(), text);
}

#[test]
fn parallel_matches_serial() {
    let mut cfg = ScenarioConfig::new(ScenarioKind::TerminatedGrid);
    cfg.ranges.n1 = Some(IntRange::new(1, 10));
    cfg.ranges.n2 = Some(IntRange::new(1, 10));
    let parallel = run_scenario(&cfg).unwrap().to_csv_string();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| run_scenario(&cfg).unwrap().to_csv_string());
    assert_eq!(parallel, serial);
}

#[test]
fn invalid_config_is_rejected() {
    let mut cfg = ScenarioConfig::new(ScenarioKind::BisectionGrid);
    cfg.ranges.n1 = Some(IntRange::new(5, 2));
    assert!(run_scenario(&cfg).is_err());
    let mut cfg = ScenarioConfig::new(ScenarioKind::SeparationScan);
    cfg.ranges.group_sizes = Some(vec![]);
    assert!(run_scenario(&cfg).is_err());
}
