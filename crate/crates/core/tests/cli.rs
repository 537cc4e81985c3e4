use std::process::{Command, Output};

fn tmu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmu")).args(args).output().expect("tmu runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bb_search_prints_json() {
    let o = tmu(&["bb-search", "2", "2", "--cutoff", "1000"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["s_steps"], 6);
    assert_eq!(v["sigma"], 4);
}

#[test]
fn registry_lookup() {
    let o = tmu(&["bb-search", "4", "2", "--registry"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["s_steps"], 107);
    let o = tmu(&["bb-search", "7", "2", "--registry"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn score() {
    let o = tmu(&["score", "--x", "1", "--a", "1"]);
    assert_eq!(stdout(&o).trim(), "0.5");
    let o = tmu(&["score", "--x", "1", "--a", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let o = tmu(&["score", "--bb", "5,5,5", "--random", "0,1,2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], true);
}

#[test]
fn exit_codes() {
    let o = tmu(&["experiment", "--config", "/definitely/not/here.toml"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
    assert_eq!(tmu(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(tmu(&["bb-search", "two", "2"]).status.code(), Some(2));
    assert_eq!(tmu(&["run", "2", "2", "--table", "1RB", "--rule", "3"]).status.code(), Some(2));
}

#[test]
fn run_and_transforms() {
    let o = tmu(&["run", "2", "2", "--steps", "10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 11);
    assert!(text.contains("outcome=halted"));
    let o = tmu(&["transforms", "3", "2", "--count"]);
    assert_eq!(stdout(&o).trim(), "504");
    let o = tmu(&["transforms", "2", "1"]);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn behaviour_and_emulate() {
    let o = tmu(&["behaviour", "3", "2", "--first", "1", "--last", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data, ["input,outcome,steps,compressed_length", "1,halted,1,18"]);

    let o = tmu(&["emulate", "2", "3", "--initial", "102", "--sample", "20", "--include-self", "--block-size", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().count() > 1);
}

#[test]
fn experiment_threads_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    std::fs::write(
        &config,
        "n = 2\nk = 2\ncandidate_sample = 40\nrandom_emulators = 4\nbb_trials = 3\nblock_sizes = [1, 2]\nsteps = 2\nseed = 9\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("out{threads}"));
        let o = tmu(&[
            "experiment",
            "--config",
            config.to_str().unwrap(),
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let files: Vec<Vec<u8>> = ["emulations.csv", "counts.csv", "summary.json"]
            .iter()
            .map(|f| std::fs::read(out.join(f)).unwrap())
            .collect();
        outputs.push(files);
    }
    assert_eq!(outputs[0], outputs[1]);
    let counts = String::from_utf8(outputs[0][1].clone()).unwrap();
    assert!(counts.starts_with("# tool=tm-universality"));
    assert!(counts.contains("# seed=9"));

    // a seed on the command line overrides the file
    let o = tmu(&["experiment", "--config", config.to_str().unwrap(), "--seed", "10"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 10);
}
