use std::process::{Command, Output};

fn kldist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kldist")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column<'a>(csv: &'a str, name: &str) -> Vec<&'a str> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap()).collect()
}

#[test]
fn exit_codes() {
    assert_eq!(kldist(&["--help"]).status.code(), Some(0));
    assert_eq!(kldist(&["benchmark", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(kldist(&["estimate", "--est", "addconst_dp", "--counts", "1,2"]).status.code(), Some(2));
    assert_eq!(kldist(&["benchmark", "--dist", "file", "--file", "/nonexistent/corpus.txt"]).status.code(), Some(1));
}

#[test]
fn benchmark_emits_one_row_per_estimator() {
    let csv = stdout(&kldist(&[
        "benchmark", "--dist", "powerlaw", "--beta", "2", "--n", "1000", "--d", "10000", "--eps", "1", "--trials", "5",
    ]));
    assert_eq!(csv.lines().next().unwrap(), "n,d,eps,estimator,loss_kind,mean,std,trials,seed");
    assert_eq!(column(&csv, "estimator"), ["addconst", "addconst_dp", "gt", "st", "st_dp"]);
    assert!(column(&csv, "loss_kind").iter().all(|&k| k == "KL"));
    assert!(column(&csv, "trials").iter().all(|&t| t == "5"));
}

#[test]
fn token_file_drives_estimate_and_benchmark() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.txt");
    let mut text = String::from("# d=200\n");
    for id in 0..200u32 {
        text.push_str(&format!("{id},{}\n", 4000 / (id + 1)));
    }
    std::fs::write(&corpus, text).unwrap();
    let corpus = corpus.to_str().unwrap();

    let est = stdout(&kldist(&["estimate", "--est", "gt", "--file", corpus]));
    assert_eq!(est.lines().count(), 200);
    let total: f64 = est.lines().map(|l| l.split_once(',').unwrap().1.parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-6);

    let out = dir.path().join("results.csv");
    let args = ["benchmark", "--dist", "file", "--file", corpus, "--n", "500", "--trials", "3", "--estimators", "st,addconst"];
    let status = Command::new(env!("CARGO_BIN_EXE_kldist")).args(args).arg("--out").arg(&out).status().unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(column(&csv, "d"), ["200", "200"]);
    assert_eq!(column(&csv, "loss_kind"), ["NLL", "NLL"]);
}

#[test]
fn gridsearch_covers_the_default_grid() {
    let csv = stdout(&kldist(&["gridsearch", "--d", "500", "--n", "300", "--trials", "2"]));
    assert_eq!(csv.lines().next().unwrap(), "alpha,tau_mult,mean,std,trials");
    let means: Vec<f64> = column(&csv, "mean").iter().map(|m| m.parse().unwrap()).collect();
    assert_eq!(means.len(), 56);
    assert!(means.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn bounds_prints_private_block_only_with_eps() {
    let plain = stdout(&kldist(&["bounds", "--dist", "uniform", "--d", "100", "--n", "100"]));
    assert!(plain.starts_with("d=100\nn=100\nnondp_minimax=0.693147181\n"));
    assert!(!plain.contains("\ndp_minimax"));
    let private = stdout(&kldist(&["bounds", "--dist", "uniform", "--d", "100", "--n", "100", "--eps", "0.5"]));
    assert!(private.contains("\ndp_minimax=1.09861229\n"));
}

#[test]
fn kl_error_falls_as_the_sample_grows() {
    let csv = stdout(&kldist(&[
        "benchmark", "--dist", "powerlaw", "--beta", "1", "--d", "50000", "--n", "1000,10000,100000", "--trials", "5",
        "--estimators", "st,addconst_dp",
    ]));
    let means: Vec<f64> = column(&csv, "mean").iter().map(|m| m.parse().unwrap()).collect();
    for series in [[means[0], means[2], means[4]], [means[1], means[3], means[5]]] {
        assert!(series[0] > series[1] && series[1] > series[2], "{csv}");
    }
}
