// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use spinbath::output::{read_summary, read_timeseries, SUMMARY_HEADER, TIMESERIES_HEADER};
use spinbath::PRESETS;

fn spinbath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinbath"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL: &str = "n_env = 8\nt_max = 12\n";

#[test]
fn presets_are_listed() {
    let out = spinbath(&["presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for p in PRESETS {
        assert!(text.contains(p.name), "{}", p.name);
    }
}

#[test]
fn run_writes_table_layout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out_dir = dir.path().join("out");
    let out = spinbath(&[
        "run",
        "--preset",
        "fig2",
        "--config",
        &cfg,
        "--seed",
        "5",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let series_text = fs::read_to_string(out_dir.join("timeseries.csv")).unwrap();
    assert_eq!(series_text.lines().next(), Some(TIMESERIES_HEADER));
    assert_eq!(
        read_timeseries(&out_dir.join("timeseries.csv"))
            .unwrap()
            .len(),
        13
    );
    let summary_text = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert_eq!(summary_text.lines().next(), Some(SUMMARY_HEADER));
    let summary = read_summary(&out_dir.join("summary.csv")).unwrap();
    assert!(summary.e_psi > summary.e0);

    let manifest = fs::read_to_string(out_dir.join("manifest.txt")).unwrap();
    assert!(manifest.contains("seed = 5"));
    assert!(manifest.contains("topology = triangular_nn"));
    assert!(manifest.contains("n_env = 8"));

    let ground = spinbath(&[
        "ground", "--preset", "fig2", "--config", &cfg, "--seed", "5",
    ]);
    let text = String::from_utf8(ground.stdout).unwrap();
    let e0: f64 = text
        .lines()
        .next()
        .unwrap()
        .split('=')
        .nth(1)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert_eq!(e0, summary.e0);
}

#[test]
fn reruns_and_sweeps_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    for name in ["a", "b"] {
        assert!(
            spinbath(&["run", "--config", &cfg, "--seed", "2", "--out", &path(name)])
                .status
                .success()
        );
    }
    for (name, workers) in [("s1", "1"), ("s3", "3")] {
        let out = spinbath(&[
            "sweep",
            "--config",
            &cfg,
            "--seeds",
            "1,2,3",
            "--workers",
            workers,
            "--out",
            &path(name),
        ]);
        assert!(out.status.success());
    }
    // manifests differ only in the recorded output directory
    let read = |sub: &str, file: &str| {
        let text = fs::read_to_string(dir.path().join(sub).join(file)).unwrap();
        text.lines()
            .filter(|l| !l.starts_with("output_path"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    for file in ["timeseries.csv", "summary.csv", "manifest.txt"] {
        let a = read("a", file);
        for other in ["b", "s1/seed_2", "s3/seed_2"] {
            assert!(a == read(other, file), "{other}/{file}");
        }
    }
    assert!(
        fs::read_to_string(dir.path().join("s1/seed_2/manifest.txt"))
            .unwrap()
            .contains("seed_2")
    );
    let table = fs::read_to_string(dir.path().join("s3/sweep.csv")).unwrap();
    assert_eq!(table.lines().count(), 4);
    assert_eq!(
        table,
        fs::read_to_string(dir.path().join("s1/sweep.csv")).unwrap()
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| spinbath(args).status.code().unwrap();

    let bad_key = write_config(dir.path(), "n_env = 6\nwibble = 1\n");
    assert_eq!(code(&["run", "--config", &bad_key]), 2);
    assert_eq!(code(&["run", "--preset", "fig9"]), 2);
    assert_eq!(code(&["run", "--config", "/nonexistent/run.cfg"]), 4);

    let unreachable = write_config(dir.path(), "n_env = 4\nt_max = 1\nlanczos_tol = 1e-30\n");
    assert_eq!(code(&["ground", "--config", &unreachable]), 3);

    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let cfg = write_config(dir.path(), "n_env = 4\nt_max = 1\n");
    let out = blocker.join("sub");
    assert_eq!(
        code(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]),
        4
    );
}
