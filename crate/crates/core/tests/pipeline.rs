//! Receive chain exercised through the public harness API.

use cpm_sync::harness::*;

fn cfg() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.trials = 60;
    cfg.l0 = 32;
    cfg.l_pay = 128;
    cfg.framesync.calib_trials = 20_000;
    cfg.framesync.rss_trials = 10_000;
    cfg.framesync.target_pfa = 1e-2;
    cfg.sweep.esn0_db = vec![12.0];
    cfg.sweep.pfa = vec![1e-2];
    cfg.sweep.dp = vec![4];
    cfg.sweep.l0 = vec![32];
    cfg
}

#[test]
fn estimator_errors_shrink_with_snr() {
    let cfg = cfg();
    let scheme = &cfg.schemes().unwrap()[0];
    let rms = |esn0: f64| {
        let t = mse_trials(&cfg, scheme, esn0).unwrap();
        let n = t.len() as f64;
        (
            t.iter().map(|e| e.0 * e.0).sum::<f64>() / n,
            t.iter().map(|e| e.1 * e.1).sum::<f64>() / n,
        )
    };
    let (lo, hi) = (rms(5.0), rms(25.0));
    assert!(hi.0 < lo.0 / 10.0, "{lo:?} {hi:?}");
    assert!(hi.1 < lo.1 / 10.0, "{lo:?} {hi:?}");
}

#[test]
fn full_chain_is_clean_at_high_snr() {
    let cfg = cfg();
    for spec in [SchemeSpec::msk(), SchemeSpec::gmsk()] {
        let scheme = spec.build().unwrap();
        let rx = BurstReceiver::new(&cfg, &scheme).unwrap();
        let esn0 = esn0_from_ebn0(&scheme, 12.0);
        let gamma = detector_threshold(&cfg, None, &scheme, esn0).unwrap();
        let s = ber_point(&cfg, &rx, 12.0, SyncMode::FullChain, gamma).unwrap();
        assert_eq!(s.bits, cfg.trials * cfg.l_pay);
        assert_eq!((s.errors, s.missed), (0, 0), "{}", scheme.label());
    }
}

#[test]
fn threshold_table_feeds_the_ber_chain() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("thr.csv");
    let mut cfg = cfg();
    let rows = run_calibrate_threshold(&cfg).unwrap();
    write_csv(&path, "calibrate-threshold", &cfg, &rows).unwrap();

    let header = std::fs::read_to_string(&path).unwrap();
    assert!(header.contains(&format!("config_hash={}", cfg.hash())));
    assert!(header
        .lines()
        .nth(1)
        .is_some_and(|l| l == "scheme,Np,Dp,esn0_db,target_pfa,gamma"));

    let table = ThresholdTable::load(&path).unwrap();
    let scheme = &cfg.schemes().unwrap()[0];
    cfg.framesync.dp = 4;
    let g = detector_threshold(&cfg, Some(&table), scheme, 12.0).unwrap();
    assert_eq!(g, rows[0].gamma);
}
