use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pitt-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("PITT_LAB_THREADS").output().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

const SHELL: [&str; 8] = ["--weight", "counterexample", "--n", "2", "--p", "1.25", "--q", "1.5"];

#[test]
fn moment_condition_holds_for_the_shell_weight() {
    let o = run(&[&["check", "new-pitt"][..], &SHELL].concat());
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["equation_tag"], "moment-integral");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn rearrangement_condition_fails_for_the_shell_weight() {
    let o = run(&[&["check", "heinig"][..], &SHELL].concat());
    assert_eq!(o.status.code(), Some(1));
    assert!(json(&o)["witness"].is_object());
}

#[test]
fn ranges_report() {
    let o = run(&["check", "ranges", "--n", "3", "--p", "1.45"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["tao"], false);
}

#[test]
fn exit_codes_for_gates_and_bad_input() {
    let o = run(&["check", "heinig", "--n", "2", "--p", "1.5", "--q", "1.2"]);
    assert_eq!(o.status.code(), Some(2), "q < p is outside the rearrangement range");
    assert_eq!(run(&["check", "heinig", "--weight", "power:x"]).status.code(), Some(3));
    assert_eq!(run(&["check", "nonsense"]).status.code(), Some(3));
    assert_eq!(run(&["check", "new-pitt", "--p", "0.5"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
}

#[test]
fn power_box_and_subspace() {
    let o = run(&["check", "power-box", "--n", "1", "--a", "0.5", "--b", "-0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["check", "power-box", "--n", "3", "--a", "1.4", "--b", "-1.4"]);
    assert_eq!(o.status.code(), Some(0));
    let point = ["--n", "3", "--p", "1.5", "--q", "1.5", "--a", "-0.3", "--b", "-1.2"];
    let o = run(&[&["check", "power-box"][..], &point].concat());
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[&["check", "subspace"][..], &point].concat());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bessel_table_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["experiment", "bessel-table", "--alpha", "0.5", "--zeros", "3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let zeros = json(&o)["summary"]["zeros"].clone();
    for k in 0..3 {
        let z = zeros[k].as_f64().unwrap();
        assert!((z - (k + 1) as f64 * std::f64::consts::PI).abs() < 1e-12);
    }
    assert!(dir.path().join("bessel-table-0.5-3.csv").exists());
}

#[test]
fn section4_experiment_writes_the_ratio_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["experiment", "section4", "--n", "2", "--p", "1.25", "--q", "1.5", "--N", "1e5", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("section4-2-1.25-1.5.csv")).unwrap();
    let last: Vec<f64> = csv.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 1e5);
    let harmonic: f64 = (1..=100_000).map(|k| 1.0 / k as f64).sum();
    assert!((last[3] - harmonic / 1e5f64.ln()).abs() < 1e-9);
}

#[test]
fn dilation_sweep_experiment_has_a_constant_ratio_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["experiment", "dilation-sweep", "--a", "0.5", "--b", "-0.5", "--p", "2", "--q", "2", "--n", "1", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("dilation-sweep-1-2-2.csv")).unwrap();
    let ratios: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert_eq!(ratios.len(), 4);
    assert!(ratios.iter().all(|r| (r / ratios[0] - 1.0).abs() < 1e-6));
    // off the relation the gate fails: exit 2, artifacts still written
    let dir2 = tempfile::tempdir().unwrap();
    let o = run(&["experiment", "dilation-sweep", "--a", "0.6", "--b", "-0.5", "--out", dir2.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(dir2.path().join("dilation-sweep-1-2-2.json").exists());
}

#[test]
fn config_file_fills_gaps_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# shell weight\nweight = counterexample\nn = 2\np = 1.25\nq = 1.5\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(run(&["check", "new-pitt", "--config", c]).status.code(), Some(0));
    // the flag replaces the file's weight
    assert_eq!(run(&["check", "new-pitt", "--config", c, "--weight", "constant"]).status.code(), Some(1));
    assert_eq!(run(&["check", "heinig", "--config", c]).status.code(), Some(1));
    std::fs::write(&cfg, "n = 2\ncolour = blue\n").unwrap();
    assert_eq!(run(&["check", "new-pitt", "--config", c]).status.code(), Some(3));
}

#[test]
fn thread_count_does_not_change_results() {
    let args = [&["check", "nec-radial"][..], &SHELL].concat();
    let one = bin().args(&args).args(["--threads", "1"]).output().unwrap();
    let env = bin().args(&args).env("PITT_LAB_THREADS", "3").output().unwrap();
    assert_eq!(one.status.code(), env.status.code());
    assert_eq!(one.stdout, env.stdout);
    let bad = bin().args(&args).env("PITT_LAB_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(3));
}
