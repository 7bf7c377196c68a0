//! End-to-end checks of the command-line surface: artifact generation,
//! determinism, exit codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_caspr"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("caspr-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn density_prints_exact_values_and_succeeds() {
    let out = bin().arg("density").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("V = 3645"));
    assert!(text.contains("rho1"));
    assert!(text.contains("exact equality rho1 = rho2: true"));
}

#[test]
fn cohomology_reports_published_totals() {
    let out = bin().arg("cohomology").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Cech H1 = C^4, Cech H2 = C^10"));
    let out = bin().args(["cohomology", "--integral"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("direct limit rank 4"));
    assert!(text.contains("direct limit rank 10"));
}

#[test]
fn inflate_render_reproject_pipeline() {
    let patch_path = tmp("patch4.txt");
    let status = bin()
        .args(["inflate", "--seed", "Psi", "--steps", "4", "--out"])
        .arg(&patch_path)
        .status()
        .unwrap();
    assert!(status.success());
    let svg_path = tmp("patch4.svg");
    let status = bin()
        .arg("render")
        .arg(&patch_path)
        .arg("--svg")
        .arg(&svg_path)
        .args(["--color-by", "type"])
        .status()
        .unwrap();
    assert!(status.success());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<?xml"));
    let hex_path = tmp("patch4-hex.txt");
    let status = bin()
        .args(["reproject", "--target", "hex", "--in"])
        .arg(&patch_path)
        .arg("--out")
        .arg(&hex_path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&hex_path).unwrap();
    assert!(text.contains("projection hex"));
}

#[test]
fn window_files_are_byte_identical_for_equal_seeds() {
    let a = tmp("cloud-a.csv");
    let b = tmp("cloud-b.csv");
    for path in [&a, &b] {
        let status = bin()
            .args(["window", "--method", "chaos", "--points", "2000", "--seed", "7", "--out"])
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn exit_codes_distinguish_usage_and_data_errors() {
    // Unknown tile name: usage error 2.
    let out = bin()
        .args(["inflate", "--seed", "Bogus", "--steps", "2", "--out", "/tmp/x.txt"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Odd step count: usage error 2.
    let out = bin()
        .args(["inflate", "--seed", "Psi", "--steps", "3", "--out", "/tmp/x.txt"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Missing input file: data error 3.
    let out = bin()
        .args(["render", "/nonexistent/file.txt", "--svg", "/tmp/x.svg"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // Unknown flag: clap uses exit code 2.
    let out = bin().args(["inflate", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_dir_environment_variable_is_honored() {
    let dir = std::env::temp_dir().join("caspr-out-dir-test");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let status = bin()
        .args(["inflate", "--seed", "Gamma", "--steps", "2", "--out", "small.txt"])
        .env("CASPR_OUT_DIR", &dir)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.join("small.txt").exists());
}
