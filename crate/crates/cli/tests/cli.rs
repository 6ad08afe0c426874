use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use relaycap::channel::{example_bec_channel, example_bsc_channel};
use relaycap_cli::channel_file::parse_channel_file;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relaycap"))
}

fn channel(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("channels").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn values(csv: &str) -> Vec<(String, f64)> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1].to_string(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn bundled_channels_match_the_examples() {
    let bec = parse_channel_file(&fs::read_to_string(channel("bec_example.chan")).unwrap()).unwrap();
    assert_eq!(bec, example_bec_channel());

    let bsc = parse_channel_file(&fs::read_to_string(channel("bsc_example.chan")).unwrap()).unwrap();
    let want = example_bsc_channel(0.2, 0.1, 0.55).unwrap();
    let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-15);
    assert!(close(bsc.sender_to_relay().probs(), want.sender_to_relay().probs()));
    assert!(close(bsc.direct().probs(), want.direct().probs()));
}

#[test]
fn bounds_csv_for_the_bsc_example() {
    let c = channel("bsc_example.chan");
    let o = run(&["bounds", "--channel", c.to_str().unwrap(), "--kinds", "df,cf"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("channel,bound,value,converged,card_u,card_v,card_yhat,evaluations,witness,caveat\n"));
    let v = values(&text);
    assert_eq!(v[0].0, "df");
    assert!((v[0].1 - 0.2203).abs() < 1e-3);
    assert_eq!(v[1].0, "cf");
    assert!(v[1].1 <= v[0].1 + 0.2);
}

#[test]
fn bounds_writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let c = channel("bec_example.chan");
    let o = run(&[
        "bounds",
        "--channel",
        c.to_str().unwrap(),
        "--kinds",
        "df",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v = values(&fs::read_to_string(out).unwrap());
    assert!((v[0].1 - 0.3219).abs() < 1e-3);
}

#[test]
fn exit_codes() {
    let o = run(&["bounds", "--channel", "/nonexistent/x.chan"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.chan");
    fs::write(&bad, format!(
            "alphabet x1 2\nalphabet x2 2\nalphabet y2 2\nalphabet y3 2\nrelay_channel\n0.5 0.4\n0.5 0.5\ndirect_channel\n{}",
            "0.5 0.5\n".repeat(8)
        )).unwrap();
    let o = run(&["bounds", "--channel", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6"));

    let c = channel("bsc_example.chan");
    let c = c.to_str().unwrap();
    assert_eq!(run(&["bounds", "--channel", c, "--grid", "0"]).status.code(), Some(3));
    assert_eq!(
        run(&["bounds", "--channel", c, "--kinds", "nope"]).status.code(),
        Some(3)
    );
    let o = run(&[
        "simulate",
        "--channel",
        c,
        "--witness-from-bound",
        "--n",
        "8",
        "--rate",
        "0.2",
        "--trials",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn capacity_requires_a_degraded_channel() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("r.chan");
    let o = run(&["random-channel", "--seed", "4"]);
    fs::write(&f, &o.stdout).unwrap();
    let o = run(&["bounds", "--channel", f.to_str().unwrap(), "--kinds", "capacity"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn witness_files_round_trip_into_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let c = channel("bec_example.chan");
    let c = c.to_str().unwrap();
    let o = run(&[
        "bounds",
        "--channel",
        c,
        "--kinds",
        "gp-df",
        "--witness-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let w = dir.path().join("gp-df.witness");
    assert!(stdout(&o).contains(w.to_str().unwrap()));

    let sim = |seed: &str| {
        let o = run(&[
            "simulate",
            "--channel",
            c,
            "--witness",
            w.to_str().unwrap(),
            "--n",
            "8,10",
            "--rate",
            "0.3",
            "--trials",
            "100",
            "--seed",
            seed,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    let a = sim("7");
    assert_eq!(a, sim("7"));
    assert!(a.starts_with("n,rate,p_err,ci,relay_fail,multicode_fail,decode_fail\n"));
    assert_eq!(a.lines().count(), 3);
}

#[test]
fn verify_examples_passes_and_fails_at_tiny_tolerance() {
    let o = run(&["verify-examples"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 5);

    let o = run(&["verify-examples", "--tolerance", "1e-9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}
