//! End-to-end CLI checks through the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pleaders")
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn pleaders")
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pleaders-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn gen_writes_signal_and_meta() {
    let dir = tmpdir("gen");
    let out = run(&dir, &[
        "gen", "cusp", "--alpha", "0.6", "--levels", "10", "--name", "c",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("c.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + (1 << 10));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("c.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["meta"]["generator"]["kind"], "cusp");
    assert_eq!(meta["meta"]["levels"], 10);
}

#[test]
fn gen_comb_meta_carries_tooth_resolution() {
    let dir = tmpdir("comb");
    let out = run(&dir, &[
        "gen", "comb", "--alpha", "-0.2", "--gamma", "3", "--levels", "16", "--name", "f",
    ]);
    assert!(out.status.success());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("f.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["meta"]["comb"]["l_max"], 5);
    assert_eq!(meta["meta"]["comb"]["resolution_warning"], true);
}

#[test]
fn wgn_same_seed_is_bit_identical() {
    let dir = tmpdir("wgn");
    for name in ["a", "b"] {
        let out = run(&dir, &[
            "gen", "wgn", "--seed", "7", "--levels", "10", "--name", name,
        ]);
        assert!(out.status.success());
    }
    let a = std::fs::read(dir.join("a.csv")).unwrap();
    let b = std::fs::read(dir.join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn invalid_parameters_exit_2() {
    let dir = tmpdir("usage");
    // even integer cusp exponent is rejected by the generator
    let out = run(&dir, &["gen", "cusp", "--alpha", "2", "--levels", "10"]);
    assert_eq!(out.status.code(), Some(2));
    // unreadable input
    let out = run(&dir, &["analyze", "--input", "missing.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_emits_reproducible_tables() {
    let dir = tmpdir("analyze");
    assert!(run(&dir, &[
        "gen", "cusp", "--alpha", "0.6", "--levels", "12", "--name", "c",
    ])
    .status
    .success());
    for out_dir in ["r1", "r2"] {
        let out = run(&dir, &["analyze", "--input", "c.csv", "--out", out_dir]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for file in ["profile.csv", "scaling.csv", "summary.json", "config_echo.json"] {
        let a = std::fs::read(dir.join("r1").join(file)).unwrap();
        let b = std::fs::read(dir.join("r2").join(file)).unwrap();
        assert_eq!(a, b, "{file} not reproducible");
    }
    // profile column ~ 0.6 for the valid finite rows
    let profile = std::fs::read_to_string(dir.join("r1/profile.csv")).unwrap();
    for line in profile.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols[0] == "inf" || cols[6] != "1" {
            continue;
        }
        let h: f64 = cols[1].parse().unwrap();
        assert!((h - 0.6).abs() < 0.15, "row {line}");
    }
}

#[test]
fn classify_reference_labels() {
    let dir = tmpdir("classify");
    let cases = [
        (
            vec!["gen", "cusp", "--alpha", "-0.4", "--levels", "16", "--name", "cusp"],
            "cusp.csv",
            "canonical",
        ),
        (
            vec![
                "gen", "chirp", "--alpha", "-0.3", "--beta", "1", "--levels", "16", "--name",
                "chirp",
            ],
            "chirp.csv",
            "oscillating_balanced",
        ),
        (
            vec![
                "gen", "comb", "--alpha", "-0.2", "--gamma", "3", "--levels", "16", "--name",
                "comb",
            ],
            "comb.csv",
            "oscillating_lacunary",
        ),
        (
            // p0 = +inf exercises the non-finite JSON round-trip
            vec![
                "gen", "general-comb", "--pieces", "0:0.5,1:0", "--levels", "16", "--name", "gc",
            ],
            "gc.csv",
            "oscillating_lacunary",
        ),
        (
            vec!["gen", "wgn", "--seed", "7", "--levels", "16", "--name", "wgn"],
            "wgn.csv",
            "inadmissible",
        ),
    ];
    for (gen_args, input, want) in cases {
        assert!(run(&dir, &gen_args).status.success());
        let out_dir = format!("{want}-out");
        let out = run(&dir, &["classify", "--input", input, "--out", &out_dir]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let report: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.join(&out_dir).join("report.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(report["label"], want, "signal {input}");
        assert_eq!(report["schema_version"], 1);
    }
}

#[test]
fn analyze_wgn_exits_3_with_partial_outputs() {
    // every profile entry is inadmissible for white noise: the pointwise
    // estimation fails (exit 3) but the global diagnostics are written
    let dir = tmpdir("wgn3");
    assert!(run(&dir, &[
        "gen", "wgn", "--seed", "3", "--levels", "14", "--name", "w",
    ])
    .status
    .success());
    let out = run(&dir, &["analyze", "--input", "w.csv", "--out", "a"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let scaling = std::fs::read_to_string(dir.join("a/scaling.csv")).unwrap();
    for line in scaling.lines().skip(1) {
        assert!(line.ends_with(",0"), "admissible row in {line}");
    }
    assert!(dir.join("a/profile.csv").exists());
    assert!(dir.join("a/summary.json").exists());
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tmpdir("config");
    assert!(run(&dir, &[
        "gen", "cusp", "--alpha", "0.6", "--levels", "12", "--name", "c",
    ])
    .status
    .success());
    std::fs::write(
        dir.join("cfg.json"),
        r#"{"wavelet_order": 4, "p_grid": ["1", "2"]}"#,
    )
    .unwrap();
    let out = run(&dir, &[
        "analyze", "--config", "cfg.json", "--input", "c.csv", "--out", "cfgd",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let echo: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("cfgd/config_echo.json")).unwrap())
            .unwrap();
    assert_eq!(echo["resolved"]["wavelet_order"], 4);
    assert_eq!(echo["resolved"]["p_grid"].as_array().unwrap().len(), 2);

    // explicit flag wins over the file value
    let out = run(&dir, &[
        "analyze", "--config", "cfg.json", "--wavelet-order", "2", "--input", "c.csv", "--out",
        "cfgd2",
    ]);
    assert!(out.status.success());
    let echo: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("cfgd2/config_echo.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(echo["resolved"]["wavelet_order"], 2);
}
