//! End-to-end checks of the binary's contracts: CSV columns, JSON shapes,
//! exit codes, and reproducibility.

use std::process::{Command, Output};

fn freelevy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freelevy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn density_free_gamma_value_at_one() {
    let out = freelevy(&[
        "density",
        "--catalog",
        "free_gamma",
        "--params",
        "t=1,c=1",
        "--range",
        "0:6",
        "--n",
        "601",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,f"));
    let best = text
        .lines()
        .filter(|l| !l.starts_with('x') && !l.starts_with('#'))
        .map(|l| {
            let (x, f) = l.split_once(',').unwrap();
            (x.parse::<f64>().unwrap(), f.parse::<f64>().unwrap())
        })
        .min_by(|a, b| (a.0 - 1.0).abs().partial_cmp(&(b.0 - 1.0).abs()).unwrap())
        .unwrap();
    assert!(
        (best.1 - 1.0 / std::f64::consts::PI).abs() < 1e-5,
        "f(1) = {}",
        best.1
    );
}

#[test]
fn bdlp_emits_tag_and_levy_csv() {
    let dir = std::env::temp_dir().join("freelevy-cli-test-bdlp");
    std::fs::create_dir_all(&dir).unwrap();
    let levy = dir.join("levy.csv");
    let out = freelevy(&[
        "bdlp",
        "--catalog",
        "free_gamma",
        "--params",
        "t=1,c=1",
        "--emit-levy",
        levy.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let payload: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(payload["cumulant"], "z/sqrt(1-4z)");

    let csv = std::fs::read_to_string(&levy).unwrap();
    assert!(csv.starts_with("x,density\n"));
    let (x, d) = csv
        .lines()
        .skip(1)
        .map(|l| {
            let (x, d) = l.split_once(',').unwrap();
            (x.parse::<f64>().unwrap(), d.parse::<f64>().unwrap())
        })
        .min_by(|a, b| (a.0 - 1.0).abs().partial_cmp(&(b.0 - 1.0).abs()).unwrap())
        .unwrap();
    let expected = 1.0 / (std::f64::consts::PI * x * (x * (4.0 - x)).sqrt());
    assert!((d - expected).abs() < 1e-6 * expected, "{d} vs {expected}");
}

#[test]
fn sd_test_rejects_atomic_levy_measure() {
    let out = freelevy(&[
        "sd-test",
        "--triplet",
        r#"{"a":0,"eta":1,"nu":{"kind":"atoms","atoms":[[1.0,1.0]]}}"#,
    ]);
    assert!(out.status.success());
    let payload: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(payload["is_sd"], false);
}

#[test]
fn config_errors_exit_1() {
    // no input source
    let out = freelevy(&["density", "--range", "0:1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stderr).unwrap().trim()).unwrap();
    assert_eq!(err["exit_code"], 1);
}

#[test]
fn domain_rejections_exit_2() {
    // free Poisson is not selfdecomposable, so bdlp must refuse
    let out = freelevy(&["bdlp", "--catalog", "free_poisson", "--params", "lambda=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cumulant_grid_csv_contract() {
    let out = freelevy(&["cumulant", "--catalog", "semicircle", "--params", "a=1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("re_z,im_z,re_C,im_C\n"));
    // C(z) = z² on the first default grid point z = -1 - i: z² = 2i
    let first = text.lines().nth(1).unwrap();
    let cols: Vec<f64> = first.split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(cols[0], -1.0);
    assert_eq!(cols[1], -1.0);
    assert!((cols[2] - 0.0).abs() < 1e-14 && (cols[3] - 2.0).abs() < 1e-14);
}

#[test]
fn convolve_semicircles_gives_triplet() {
    let out = freelevy(&[
        "convolve",
        "--catalog-a",
        "semicircle",
        "--params-a",
        "a=1",
        "--catalog-b",
        "semicircle",
        "--params-b",
        "a=1",
    ]);
    assert!(out.status.success());
    let payload: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(payload["triplet"]["a"], 2.0);
}

#[test]
fn rmt_small_run_is_reproducible() {
    let args = [
        "rmt",
        "--model",
        "gaussian_hermitian",
        "--n",
        "80",
        "--seeds",
        "1,2,3",
    ];
    let a = stdout(&freelevy(&args));
    let b = stdout(&freelevy(&args));
    assert_eq!(a, b);
    let payload: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert!(payload["median_ks"].as_f64().unwrap() < 0.25);
}

#[test]
fn marginal_of_semicircle_has_scaled_triplet() {
    let out = freelevy(&[
        "marginal",
        "--catalog",
        "semicircle",
        "--params",
        "a=1",
        "--h",
        "0.5",
        "--t",
        "4",
    ]);
    assert!(out.status.success());
    let payload: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(payload["triplet"]["a"], 4.0);
}
