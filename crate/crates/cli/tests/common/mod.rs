use std::path::PathBuf;

/// Canonical invocations and the golden file each one must reproduce.
pub const GOLDEN_CASES: [(&str, &[&str]); 4] = [
    (
        "spectrum_d2_tau10.csv",
        &["spectrum", "--dim", "2", "--tau", "10", "--lmax", "5", "--count", "6", "--format", "csv", "--reproducible"],
    ),
    (
        "spectrum_d3_tau1.json",
        &["spectrum", "--dim", "3", "--tau", "1", "--lmax", "6", "--count", "8", "--format", "json", "--reproducible"],
    ),
    (
        "fundamental_d3_tau10.json",
        &["fundamental", "--dim", "3", "--tau", "10", "--format", "json", "--reproducible"],
    ),
    (
        "fundamental_d2_tau1_r2.csv",
        &["fundamental", "--dim", "2", "--tau", "1", "--radius", "2", "--format", "csv", "--reproducible"],
    ),
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Stdout of the binary, panicking on a non-zero exit.
pub fn produce(args: &[&str]) -> String {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_freeplate")).args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}
