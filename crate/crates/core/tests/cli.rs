use std::process::Command;

use binomial_jcm::cli::{parse_csv, EXIT_BAD_ARGS, EXIT_NUMERICAL};
use binomial_jcm::dynamics::{inversion_series, JcmConfig};
use binomial_jcm::states::sbs_amplitudes;
use binomial_jcm::Epsilon;

fn bsjcm(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_bsjcm"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn inversion_csv_round_trips_every_digit() {
    let out = bsjcm(&[
        "inversion",
        "--M",
        "200",
        "--eta",
        "0.6",
        "--epsilon",
        "1",
        "--tmax",
        "10",
        "--steps",
        "101",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let parsed = parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(parsed.header, ("T".to_string(), "value".to_string()));
    assert!(parsed.metadata[0].1.starts_with("bsjcm "));

    let state = sbs_amplitudes(200, 0.6, Epsilon::Plus).unwrap();
    let want = inversion_series(&state, &JcmConfig::new(1, 10.0, 101).unwrap(), 1).unwrap();
    assert_eq!(parsed.rows.len(), want.len());
    for ((t, v), (wt, wv)) in parsed.rows.iter().zip(want.iter()) {
        assert_eq!(t.parse::<f64>().unwrap(), wt);
        assert_eq!(*v, *wv);
    }
}

#[test]
fn output_file_and_stdout_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.csv");
    let args = [
        "rescaled-q",
        "--M",
        "100",
        "--eta",
        "0.3",
        "--tmax",
        "5",
        "--steps",
        "50",
    ];
    let stdout = bsjcm(&args).stdout;
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert!(bsjcm(&with_file).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn reproduce_writes_one_file_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    for fig in ["fig1a", "fig2b", "fig3", "fig4c"] {
        let out = bsjcm(&[
            "reproduce",
            fig,
            "--out-dir",
            dir.path().to_str().unwrap(),
            "--tmax",
            "5",
            "--steps",
            "20",
        ]);
        assert!(
            out.status.success(),
            "{fig}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let written: Vec<String> = String::from_utf8_lossy(&out.stderr)
            .lines()
            .filter_map(|l| l.strip_prefix("wrote ").map(str::to_string))
            .collect();
        assert!(!written.is_empty(), "{fig}");
        for path in written {
            assert!(path.contains(fig), "{path}");
            let text = std::fs::read_to_string(&path).unwrap();
            assert!(text.starts_with("# artifact: bsjcm "));
            assert!(!parse_csv(&text).unwrap().rows.is_empty());
        }
    }
}

#[test]
fn compare_reports_metrics() {
    let out = bsjcm(&[
        "compare",
        "--M",
        "370",
        "--eta",
        "0.1",
        "--against",
        "coherent",
        "--tmax",
        "25",
        "--steps",
        "500",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let parsed = parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let names: Vec<&str> = parsed.rows.iter().map(|(k, _)| k.as_str()).collect();
    assert_eq!(names, ["sup_norm", "rms", "pearson", "grid_size"]);
    assert!(parsed.rows[2].1 > 0.999);
    assert_eq!(parsed.rows[3].1, 500.0);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bsjcm(args).status.code().unwrap();
    assert_eq!(code(&["pnd", "--M", "10", "--eta", "0.5"]), 0);
    assert_eq!(code(&["pnd", "--M", "10", "--eta", "1.5"]), EXIT_BAD_ARGS);
    assert_eq!(
        code(&["pnd", "--M", "10", "--eta", "0.5", "--epsilon", "2"]),
        EXIT_BAD_ARGS
    );
    assert_eq!(code(&["inversion", "--eta", "0.5"]), EXIT_BAD_ARGS);
    assert_eq!(code(&["no-such-command"]), EXIT_BAD_ARGS);
    assert_eq!(
        code(&["rescaled-w", "--M", "10", "--eta", "0.5"]),
        EXIT_BAD_ARGS
    );
    assert_eq!(
        code(&["pnd", "--state", "coherent", "--alpha", "3", "--cutoff", "10"]),
        EXIT_NUMERICAL
    );
    let err = bsjcm(&["pnd", "--M", "10", "--eta", "1.5"]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("eta"));
}
