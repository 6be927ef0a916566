//! End-to-end tests driving the `aidsim` binary through its exit codes
//! and output files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use aidsim_cli::config::{CodeSpec, RunConfig};
use aidsim_core::gf2::{example_4x8, to_alist, ParityCheckMatrix};
use tempfile::TempDir;

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aidsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_alist_fixture(dir: &Path) -> PathBuf {
    let h = ParityCheckMatrix::from_dense(&example_4x8()).unwrap();
    let path = dir.join("code.alist");
    fs::write(&path, to_alist(&h)).unwrap();
    path
}

/// Small-code config writing into `dir`/out, customized by `mutate`.
fn write_config(dir: &Path, mutate: impl FnOnce(&mut RunConfig)) -> PathBuf {
    let mut cfg = RunConfig {
        code: CodeSpec::Alist {
            path: write_alist_fixture(dir),
        },
        compare_code: None,
        output_dir: dir.join("out"),
        ..RunConfig::default()
    };
    mutate(&mut cfg);
    let path = dir.join("config.json");
    fs::write(&path, cfg.canonical_json().unwrap()).unwrap();
    path
}

#[test]
fn checked_in_default_config_equals_builtin_defaults() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.json");
    let text = fs::read_to_string(&path).expect("configs/default.json is checked in");
    let parsed: RunConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed, RunConfig::default());
    assert_eq!(text, RunConfig::default().canonical_json().unwrap());
}

#[test]
fn encode_then_decode_round_trips_messages() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), |_| {});
    let message = "10110\n01101\n11111\n";
    let message_path = dir.path().join("message.txt");
    fs::write(&message_path, message).unwrap();

    let out = run_cli(&[
        "--config",
        config.to_str().unwrap(),
        "encode",
        message_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_of(&out));
    let codewords = fs::read_to_string(dir.path().join("out/codewords.txt")).unwrap();
    assert!(codewords.starts_with("# tool: aidsim"));
    let lines: Vec<&str> = codewords.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l.len() == 8));

    // Noiseless channel: the sign of each LLR is the transmitted bit.
    let llrs: String = lines
        .iter()
        .map(|line| {
            line.chars()
                .map(|c| if c == '0' { "4.0" } else { "-4.0" })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n");
    let llr_path = dir.path().join("llrs.txt");
    fs::write(&llr_path, llrs).unwrap();

    let out = run_cli(&[
        "--config",
        config.to_str().unwrap(),
        "decode",
        llr_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_of(&out));
    let decoded = fs::read_to_string(dir.path().join("out/decoded.txt")).unwrap();
    let recovered: Vec<&str> = decoded.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(recovered.join("\n") + "\n", message);
}

#[test]
fn zero_message_encodes_to_the_zero_codeword() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), |_| {});
    let message_path = dir.path().join("message.txt");
    fs::write(&message_path, "00000").unwrap();
    let out = run_cli(&[
        "--config",
        config.to_str().unwrap(),
        "encode",
        message_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_of(&out));
    let codewords = fs::read_to_string(dir.path().join("out/codewords.txt")).unwrap();
    let data: Vec<&str> = codewords.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data, ["00000000"]);
}

#[test]
fn encode_rejects_a_partial_frame_with_exit_2() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), |_| {});
    let message_path = dir.path().join("message.txt");
    fs::write(&message_path, "101").unwrap();
    let out = run_cli(&[
        "--config",
        config.to_str().unwrap(),
        "encode",
        message_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("multiple of k"));
}

#[test]
fn energy_rejects_zero_iterations_with_exit_2() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), |_| {});
    let out = run_cli(&[
        "--config",
        config.to_str().unwrap(),
        "energy",
        "--iterations",
        "0",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("at least 1"));
}

#[test]
fn energy_decode_power_term_is_linear_in_iterations() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), |_| {});
    let mut decode_terms = Vec::new();
    for (sub, iters) in [("a", "10"), ("b", "20")] {
        let out_dir = dir.path().join(sub);
        let out = run_cli(&[
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "energy",
            "--iterations",
            iters,
        ]);
        assert_eq!(exit_code(&out), 0, "{}", stderr_of(&out));
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out_dir.join("energy.json")).unwrap())
                .unwrap();
        let report = &json["report"];
        decode_terms.push(
            report["total_power_early_w"].as_f64().unwrap()
                - report["transmit_power_w"].as_f64().unwrap(),
        );
    }
    assert!(decode_terms[0] > 0.0);
    assert!((decode_terms[1] - 2.0 * decode_terms[0]).abs() <= 1e-15 * decode_terms[1]);
}

#[test]
fn ber_sweep_writes_reports_on_an_easy_point() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), |cfg| {
        cfg.sweep.ebno_db_grid = vec![0.0];
        cfg.sweep.max_bits = 400_000;
        cfg.sweep.min_bit_errors = 100;
    });
    let out = run_cli(&["--config", config.to_str().unwrap(), "ber-sweep"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_of(&out));

    let csv = fs::read_to_string(dir.path().join("out/ber_sweep.csv")).unwrap();
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(
        lines.next().unwrap(),
        "ebno_db,bits,bit_errors,ber,ci_low,ci_high,mean_iters,frames"
    );
    assert_eq!(lines.count(), 1);
    assert!(!dir.path().join("out/ber_sweep_compare.csv").exists());
    assert!(dir.path().join("out/ber_vs_ebno_rate0.50.dat").exists());

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/ber_sweep.json")).unwrap())
            .unwrap();
    assert!(json["provenance"]["config_sha256"].is_string());
    assert!(json["rate_ordering_holds"].is_null());
    let point = &json["curves"][0]["points"][0];
    assert!(point["bit_errors"].as_u64().unwrap() >= 100);
    assert!(!point["low_confidence"].as_bool().unwrap());
}

#[test]
fn ber_sweep_flags_a_starved_point_with_exit_3() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), |cfg| {
        cfg.sweep.ebno_db_grid = vec![7.0];
        cfg.sweep.max_bits = 4096;
        cfg.sweep.min_bit_errors = 1000;
    });
    let out = run_cli(&["--config", config.to_str().unwrap(), "ber-sweep"]);
    assert_eq!(exit_code(&out), 3, "{}", stderr_of(&out));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/ber_sweep.json")).unwrap())
            .unwrap();
    assert!(json["curves"][0]["points"][0]["low_confidence"]
        .as_bool()
        .unwrap());
}

#[test]
fn aid_reports_an_unreachable_target_with_exit_4() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), |cfg| {
        cfg.decoder.max_iterations = 1;
        cfg.aid.ebno_db = 0.0;
        cfg.aid.frames = 50;
        cfg.aid.target_ber = 1e-9;
        cfg.aid.fixed_iterations = 1;
    });
    let out = run_cli(&["--config", config.to_str().unwrap(), "aid"]);
    assert_eq!(exit_code(&out), 4, "{}", stderr_of(&out));

    // The partial curve is still written.
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/aid.json")).unwrap())
            .unwrap();
    assert!(json["calibration"]["l_star"].is_null());
    assert!(json["energy"]["savings"].is_null());
    assert_eq!(json["calibration"]["levels"].as_array().unwrap().len(), 1);
    assert!(dir.path().join("out/ber_vs_iterations.dat").exists());
    assert!(dir.path().join("out/energy_vs_iterations.dat").exists());
}

#[test]
fn seed_flag_overrides_the_config_seed() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), |cfg| {
        cfg.sweep.ebno_db_grid = vec![2.0];
        cfg.sweep.max_bits = 40_000;
        cfg.sweep.min_bit_errors = 50;
    });
    let mut bers = Vec::new();
    for (sub, seed) in [("s1", "101"), ("s2", "202")] {
        let out_dir = dir.path().join(sub);
        let out = run_cli(&[
            "--config",
            config.to_str().unwrap(),
            "--seed",
            seed,
            "--out",
            out_dir.to_str().unwrap(),
            "ber-sweep",
        ]);
        let code = exit_code(&out);
        assert!(code == 0 || code == 3, "{}", stderr_of(&out));
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out_dir.join("ber_sweep.json")).unwrap())
                .unwrap();
        assert_eq!(
            json["provenance"]["master_seed"].as_u64().unwrap(),
            seed.parse::<u64>().unwrap()
        );
        bers.push(json["curves"][0]["points"][0]["ber"].as_f64().unwrap());
    }
    assert_ne!(bers[0], bers[1], "different seeds draw different noise");
}
