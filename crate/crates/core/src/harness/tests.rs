use super::*;

fn small(cfg: &mut ExperimentConfig) {
    cfg.trials = 40;
    cfg.framesync.calib_trials = 20_000;
    cfg.framesync.rss_trials = 10_000;
    cfg.sweep.esn0_db = vec![10.0];
    cfg.sweep.ebn0_db = vec![6.0];
    cfg.sweep.l0 = vec![32];
    cfg.sweep.dp = vec![2];
    cfg.sweep.d = vec![4];
    cfg.sweep.q = vec![0.0, 1.0];
    cfg.sweep.roc_points = 10;
    cfg.sweep.fig5_l0 = vec![16, 32];
    cfg.l0 = 32;
    cfg.l_pay = 64;
}

#[test]
fn csv_is_a_pure_function_of_the_config() {
    let mut cfg = ExperimentConfig::default();
    small(&mut cfg);
    cfg.schemes = vec![SchemeSpec::msk()];
    let a = to_csv("mse-sweep", &cfg, &run_mse_sweep(&cfg).unwrap()).unwrap();
    let b = to_csv("mse-sweep", &cfg, &run_mse_sweep(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with(&format!(
        "# cpmsync experiment=mse-sweep schema=1 config_hash={}",
        cfg.hash()
    )));
    assert_eq!(
        a.lines().nth(1),
        Some("scheme,esn0_db,param,mse,trials,seed")
    );

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let c = pool.install(|| to_csv("mse-sweep", &cfg, &run_mse_sweep(&cfg).unwrap()).unwrap());
    assert_eq!(a, c);
    cfg.seed += 1;
    assert_ne!(
        a,
        to_csv("mse-sweep", &cfg, &run_mse_sweep(&cfg).unwrap()).unwrap()
    );
}

#[test]
fn noiseless_mse_is_the_pipeline_floor() {
    let mut cfg = ExperimentConfig::default();
    small(&mut cfg);
    cfg.schemes = vec![SchemeSpec::msk()];
    cfg.sweep.esn0_db = vec![f64::INFINITY, 20.0];
    let rows = run_mse_sweep(&cfg).unwrap();
    let get = |e: f64, p: &str| {
        rows.iter()
            .find(|r| r.esn0_db == e && r.param == p)
            .unwrap()
            .mse
    };
    for p in ["freq", "phase", "timing"] {
        assert!(get(f64::INFINITY, p) < get(20.0, p), "{p}");
    }
    // L0 = 32 floors: rms fd Ts ~2e-4, timing ~0.013 symbol.
    assert!(get(f64::INFINITY, "freq") < 1e-7);
    assert!(get(f64::INFINITY, "timing") < 4e-4);
}

#[test]
fn framesync_sweep_rows() {
    let mut cfg = ExperimentConfig::default();
    small(&mut cfg);
    cfg.framesync.sps = Some(1);
    cfg.sweep.esn0_db = vec![f64::INFINITY];
    let rows = run_framesync_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 2);
    // Noiseless: every window locks exactly.
    for r in &rows {
        assert_eq!((r.pfl, r.bias), (0.0, 0.0), "{r:?}");
    }
    let csv = to_csv("framesync-sweep", &cfg, &rows).unwrap();
    assert_eq!(csv.lines().nth(1), Some("q,D,esn0_db,L0,pfl,bias,trials"));
}

#[test]
fn roc_is_monotone() {
    let mut cfg = ExperimentConfig::default();
    small(&mut cfg);
    cfg.framesync.sps = Some(1);
    cfg.sweep.esn0_db = vec![1.0];
    let rows = run_roc(&cfg).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].gamma >= w[0].gamma);
        assert!(w[1].pfa <= w[0].pfa && w[1].pd <= w[0].pd);
    }
    assert_eq!(rows.len(), 10 + cfg.sweep.pfa.len());
}

#[test]
fn threshold_table_round_trip() {
    let mut cfg = ExperimentConfig::default();
    small(&mut cfg);
    cfg.sweep.pfa = vec![1e-2];
    let rows = run_calibrate_threshold(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    write_csv(&path, "calibrate-threshold", &cfg, &rows).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        text.lines().nth(1),
        Some("scheme,Np,Dp,esn0_db,target_pfa,gamma")
    );
    let t = ThresholdTable::load(&path).unwrap();
    assert_eq!(t.rows, rows);
    let r = &rows[0];
    assert_eq!(
        t.lookup(&r.scheme, r.np, r.dp, r.esn0_db, r.target_pfa),
        Some(r.gamma)
    );
    assert_eq!(
        t.lookup(&r.scheme, r.np + 1, r.dp, r.esn0_db, r.target_pfa),
        None
    );

    cfg.sweep.pfa = vec![1e-3];
    assert!(matches!(
        run_calibrate_threshold(&cfg),
        Err(crate::Error::Unreliable(_))
    ));
}

#[test]
fn ber_modes_at_high_snr() {
    let mut cfg = ExperimentConfig::default();
    small(&mut cfg);
    cfg.schemes = vec![SchemeSpec::gmsk()];
    cfg.framesync.target_pfa = 1e-2;
    cfg.sweep.ebn0_db = vec![12.0];
    let rows = run_ber(&cfg).unwrap();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(r.bits, 40 * 64);
        assert_eq!(r.ber, 0.0, "{r:?}");
    }
    let csv = to_csv("ber", &cfg, &rows).unwrap();
    assert!(csv.contains(",ideal_sync\n") && csv.contains(",full_chain\n"));
}

#[test]
fn fig5_rows() {
    let mut cfg = ExperimentConfig::default();
    small(&mut cfg);
    let rows = run_fig5(&cfg).unwrap();
    assert_eq!(rows.len(), 7 * 2);
    let one_rc = rows
        .iter()
        .find(|r| r.scheme == "1RC M=2 h=1/2" && r.l0 == 32)
        .unwrap();
    assert!((one_rc.e_a_normalized - 0.125).abs() < 1e-3);
}

#[test]
fn ber_interpolation() {
    let pts = [(0.0, 1e-1), (2.0, 1e-2), (4.0, 1e-4)];
    assert!((ebn0_at_ber(&pts, 1e-2).unwrap() - 2.0).abs() < 1e-12);
    assert!((ebn0_at_ber(&pts, 1e-3).unwrap() - 3.0).abs() < 1e-12);
    assert_eq!(ebn0_at_ber(&pts, 1e-5), None);
}

#[test]
fn offsets_are_in_range() {
    let mut rng = crate::rng::rng_from_seed(3);
    for _ in 0..1000 {
        let (nu, th, e) = draw_offsets(&mut rng, 2);
        assert!(
            (-0.25..0.25).contains(&nu) && (0.0..2.0 * PI).contains(&th) && e > -0.5 && e < 0.5
        );
    }
}
