//! Black-box tests of the command-line binary: JSON reports, file pipelines,
//! error-to-exit-code mapping.

use serde_json::Value;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dnacode"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({}): {}",
            e,
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn tables_match_reference_columns() {
    let out = bin().arg("tables").output().unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    for row in v["dominant_growth"].as_array().unwrap() {
        let computed = row["one_plus_log2"].as_f64().unwrap();
        let printed = row["printed"].as_f64().unwrap();
        assert!(
            (computed - printed).abs() <= 0.002,
            "m={}: {} vs {}",
            row["m"],
            computed,
            printed
        );
    }
    assert_eq!(
        v["f0_ell4"]["7"].as_array().unwrap().len(),
        4,
        "f0(4,7) has four members"
    );
    let root = v["ell4_example"]["root"].as_f64().unwrap();
    assert!((root - 1.3247).abs() < 1e-4);
}

#[test]
fn count_reports_exact_decimal_strings() {
    let out = bin()
        .args(["count", "--family", "f", "--ell", "4", "--n", "100"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["count"], "3059961912097");
    assert_eq!(v["manifest"]["subcommand"], "count");
}

#[test]
fn c1_pipeline_round_trips_and_rejects_corruption() {
    let input = tmp("c1_payload.bin");
    let encoded = tmp("c1_words.fa");
    let decoded = tmp("c1_out.bin");
    fs::write(&input, b"framing across records").unwrap();
    let c1 = ["--m", "3", "--ell", "4", "--n", "11", "--t", "3"];
    let ok = bin()
        .arg("c1")
        .arg("encode")
        .args(c1)
        .args(["--input", input.to_str().unwrap(), "--output", encoded.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(ok.success());
    let ok = bin()
        .arg("c1")
        .arg("decode")
        .args(c1)
        .args(["--input", encoded.to_str().unwrap(), "--output", decoded.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(ok.success());
    assert_eq!(fs::read(&decoded).unwrap(), b"framing across records");

    // flip one nucleotide; the construction detects but cannot correct
    let text = fs::read_to_string(&encoded).unwrap();
    let broken: String = {
        let mut done = false;
        text.chars()
            .map(|c| {
                if !done && c == 'T' {
                    done = true;
                    'A'
                } else {
                    c
                }
            })
            .collect()
    };
    let corrupted = tmp("c1_corrupt.fa");
    fs::write(&corrupted, broken).unwrap();
    let out = bin()
        .arg("c1")
        .arg("decode")
        .args(c1)
        .args(["--input", corrupted.to_str().unwrap(), "--output", decoded.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "corruption maps to exit 3");
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "decode");
}

#[test]
fn c2_pipeline_corrects_injected_substitutions() {
    let input = tmp("c2_payload.bin");
    let encoded = tmp("c2_words.fa");
    let corrupted = tmp("c2_corrupt.fa");
    let decoded = tmp("c2_out.bin");
    fs::write(&input, b"substitution channel").unwrap();
    let c2 = [
        "--ell", "4", "--eps", "1/5", "--n", "7", "--q", "5", "--r", "2",
    ];
    assert!(bin()
        .arg("c2")
        .arg("encode")
        .args(c2)
        .args(["--input", input.to_str().unwrap(), "--output", encoded.to_str().unwrap()])
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .args(["simulate", "--inject", "--mode", "sub", "--seed", "11"])
        .args(["--input", encoded.to_str().unwrap(), "--output", corrupted.to_str().unwrap()])
        .status()
        .unwrap()
        .success());
    assert_ne!(
        fs::read_to_string(&encoded).unwrap(),
        fs::read_to_string(&corrupted).unwrap(),
        "injection must change the file"
    );
    assert!(bin()
        .arg("c2")
        .arg("decode")
        .args(c2)
        .args(["--input", corrupted.to_str().unwrap(), "--output", decoded.to_str().unwrap()])
        .status()
        .unwrap()
        .success());
    assert_eq!(fs::read(&decoded).unwrap(), b"substitution channel");
}

#[test]
fn c3_pipeline_corrects_injected_edits() {
    let input = tmp("c3_payload.bin");
    let encoded = tmp("c3_words.fa");
    let corrupted = tmp("c3_corrupt.fa");
    let decoded = tmp("c3_out.bin");
    fs::write(&input, b"edit channel").unwrap();
    let c3 = [
        "--ell", "4", "--eps", "1/5", "--n", "7", "--q", "5", "--r", "2",
    ];
    let build = bin().arg("c3").arg("build").args(c3).output().unwrap();
    assert!(build.status.success());
    let v = json_of(&build);
    let a0 = v["a0"].as_u64().unwrap().to_string();
    let b0 = v["b0"].as_u64().unwrap().to_string();
    assert!(v["subcode_size"].as_u64().unwrap() >= v["pigeonhole_bound"].as_u64().unwrap());

    assert!(bin()
        .arg("c3")
        .arg("encode")
        .args(c3)
        .args(["--input", input.to_str().unwrap(), "--output", encoded.to_str().unwrap()])
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .args(["simulate", "--inject", "--mode", "edit", "--seed", "5"])
        .args(["--input", encoded.to_str().unwrap(), "--output", corrupted.to_str().unwrap()])
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .arg("c3")
        .arg("decode")
        .args(c3)
        .args(["--a0", &a0, "--b0", &b0])
        .args(["--input", corrupted.to_str().unwrap(), "--output", decoded.to_str().unwrap()])
        .status()
        .unwrap()
        .success());
    assert_eq!(fs::read(&decoded).unwrap(), b"edit channel");
}

#[test]
fn verify_flags_violations_with_exit_4() {
    let clean = tmp("verify_clean.fa");
    fs::write(&clean, ">w0\nTCTCTC\n").unwrap();
    let out = bin()
        .args(["verify", "--rll", "3", "--input", clean.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["all_pass"], true);

    let dirty = tmp("verify_dirty.fa");
    fs::write(&dirty, ">w0\nAAAAGC\n").unwrap();
    let out = bin()
        .args(["verify", "--rll", "3", "--input", dirty.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let v = json_of(&out);
    assert_eq!(v["all_pass"], false);
    assert_eq!(v["records"][0]["rll"], false);
}

#[test]
fn exhaustive_campaign_reports_clean_sweep() {
    let out = bin()
        .args([
            "simulate", "--construction", "c2", "--mode", "exhaustive", "--cap", "200000",
            "--ell", "4", "--eps", "1/5", "--n", "7", "--q", "5", "--r", "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["report"]["trials"], 123750);
    assert_eq!(v["report"]["successes"], 123750);
    assert_eq!(v["manifest"]["rng"], "chacha12");
}

#[test]
fn random_campaigns_reproduce_bit_for_bit() {
    let run = || {
        bin()
            .args([
                "simulate", "--construction", "c2", "--mode", "sub", "--trials", "64",
                "--seed", "9", "--ell", "4", "--eps", "1/5", "--n", "7", "--q", "5", "--r", "2",
            ])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn invalid_parameters_exit_2() {
    let out = bin()
        .args([
            "c2", "build", "--ell", "4", "--eps", "1/5", "--n", "7", "--q", "6", "--r", "2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "validation");
}

#[test]
fn incompatible_mode_exit_2() {
    let out = bin()
        .args([
            "simulate", "--construction", "c2", "--mode", "edit", "--trials", "8",
            "--ell", "4", "--eps", "1/5", "--n", "7", "--q", "5", "--r", "2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
