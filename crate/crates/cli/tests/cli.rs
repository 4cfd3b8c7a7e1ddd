use std::process::Command;

fn cpmsync(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cpmsync"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn fig5_to_stdout() {
    let out = cpmsync(&["fig5"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# cpmsync experiment=fig5 schema=1 config_hash="));
    assert_eq!(
        lines.next(),
        Some("scheme,L0,e_a,e_a_normalized,e_a_analytic_normalized")
    );
    assert!(text.contains("MSK,64,0.0,"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "seed = 1\ntrials = 1000\nl0 = 32\n[[schemes]]\nm = 2\nh = \"1/2\"\npulse = \"REC\"\nl = 1\n[sweep]\nesn0_db = [10.0]\n",
    )
    .unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let o = cpmsync(&[
            "mse-sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "9",
            "--trials",
            "20",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read_to_string(out).unwrap()
    };
    let a = run("a.csv", "1");
    assert!(a.contains("seed=9"));
    assert!(a.lines().nth(2).unwrap().ends_with(",20,9"));
    assert_eq!(a, run("b.csv", "2"));
}

#[test]
fn bad_config_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "trials = 0\n").unwrap();
    let o = cpmsync(&["roc", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("trials"));
}
