//! End-to-end tests of the `biborate` binary: exit codes, determinism, and
//! the manifest replay loop.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_biborate"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn crystals_list_contains_the_shipped_set() {
    let out = bin().args(["crystals", "list"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["BBO", "CLBO", "BiBO", "LBO", "GdCOB"] {
        assert!(text.contains(name), "missing {name} in listing");
    }
    assert!(text.contains("14 crystals"));
}

#[test]
fn unknown_crystal_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["jsa", "--crystal", "KDP", "--condition", "gvm1", "--bandwidth-nm", "1"],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("unknown crystal"), "stderr: {err}");
    assert!(err.contains("nearest"), "stderr should suggest nearest matches: {err}");
}

#[test]
fn unsatisfied_condition_exits_with_no_solution_code() {
    let dir = tempfile::tempdir().unwrap();
    // This plane/condition combination has no GVM intersection.
    let out = run_in(
        dir.path(),
        &[
            "jsa",
            "--crystal",
            "LBO",
            "--plane",
            "xz",
            "--condition",
            "gvm1",
            "--bandwidth-nm",
            "1",
        ],
    );
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn tables_render_not_satisfied_cells_and_exit_zero() {
    let out = bin()
        .args(["tables", "--crystal", "LBO", "--plane", "xz"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("not satisfied"));
    assert!(text.contains("gvm3"));
    assert!(text.contains("| LBO |"), "markdown row expected: {text}");
}

#[test]
fn tables_csv_format() {
    let out = bin()
        .args(["tables", "--crystal", "CLBO", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("crystal,plane,condition,status"));
    assert_eq!(text.lines().filter(|l| l.starts_with("CLBO")).count(), 3);
}

#[test]
fn jsa_hom_roundtrip_with_manifest_replay() {
    let dir = tempfile::tempdir().unwrap();
    // Small grid keeps the test fast; fixed bandwidth keeps it deterministic.
    let jsa_args = [
        "jsa",
        "--crystal",
        "BBO",
        "--condition",
        "gvm3",
        "--length-mm",
        "20",
        "--bandwidth-nm",
        "2",
        "--grid",
        "101",
        "--out",
        "pair.csv",
    ];
    let first = run_in(dir.path(), &jsa_args);
    assert!(first.status.success(), "stderr: {}", String::from_utf8_lossy(&first.stderr));
    assert!(stdout(&first).contains("purity ="));
    let csv_path = dir.path().join("pair.csv");
    let manifest_path = dir.path().join("pair.csv.manifest.toml");
    assert!(csv_path.exists() && manifest_path.exists());
    let bytes_first = std::fs::read(&csv_path).unwrap();

    // Re-running the identical command reproduces the file byte-for-byte.
    let second = run_in(dir.path(), &jsa_args);
    assert!(second.status.success());
    assert_eq!(bytes_first, std::fs::read(&csv_path).unwrap());

    // Replay from the manifest verifies the hashes.
    let replay = run_in(
        dir.path(),
        &["manifest", "replay", "pair.csv.manifest.toml", "--check-only"],
    );
    assert!(replay.status.success(), "stderr: {}", String::from_utf8_lossy(&replay.stderr));
    assert!(stdout(&replay).contains("REPRODUCED pair.csv"));

    // A full replay rewrites the outputs; a clobbered file is restored.
    std::fs::write(&csv_path, b"clobbered").unwrap();
    let replay2 = run_in(dir.path(), &["manifest", "replay", "pair.csv.manifest.toml"]);
    assert!(replay2.status.success());
    assert_eq!(bytes_first, std::fs::read(&csv_path).unwrap());
    let hom = run_in(
        dir.path(),
        &["hom", "--mode", "same-source", "pair.csv", "--out", "dip.csv"],
    );
    assert!(hom.status.success(), "stderr: {}", String::from_utf8_lossy(&hom.stderr));
    let text = stdout(&hom);
    assert!(text.contains("visibility"));
    let dip = std::fs::read_to_string(dir.path().join("dip.csv")).unwrap();
    assert!(dip.contains("# visibility:"));
    assert!(dip.contains("tau_fs,probability"));

    // Independent-source mode accepts one file used twice.
    let hom4 = run_in(
        dir.path(),
        &["hom", "--mode", "independent", "pair.csv", "--out", "dip4.csv"],
    );
    assert!(hom4.status.success());
}

#[test]
fn optimizer_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "jsa",
        "--crystal",
        "BBO",
        "--condition",
        "gvm3",
        "--optimize-bandwidth",
        "--grid",
        "101",
        "--out",
        "opt.csv",
    ];
    let first = run_in(dir.path(), &args);
    assert!(first.status.success(), "stderr: {}", String::from_utf8_lossy(&first.stderr));
    assert!(stdout(&first).contains("optimal bandwidth"));
    let bytes = std::fs::read(dir.path().join("opt.csv")).unwrap();
    let replay = run_in(
        dir.path(),
        &["manifest", "replay", "opt.csv.manifest.toml", "--check-only"],
    );
    assert!(replay.status.success(), "stderr: {}", String::from_utf8_lossy(&replay.stderr));
    assert!(stdout(&replay).contains("REPRODUCED opt.csv"));
    assert_eq!(bytes, std::fs::read(dir.path().join("opt.csv")).unwrap());
}

#[test]
fn hom_rejects_missing_and_malformed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let missing = run_in(dir.path(), &["hom", "--mode", "same-source", "nope.csv"]);
    assert_eq!(missing.status.code(), Some(4));
    std::fs::write(dir.path().join("bad.csv"), "not,a,jsa\n1,2,3\n").unwrap();
    let bad = run_in(dir.path(), &["hom", "--mode", "same-source", "bad.csv"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn data_env_var_overrides_the_embedded_set() {
    let dir = tempfile::tempdir().unwrap();
    // A one-crystal data file: the listing should show only that crystal.
    let text = biborate::crystal::to_toml_string(&{
        let set = biborate::crystal::load_default().unwrap();
        let bbo = set.get("BBO").unwrap().clone();
        biborate::crystal::CrystalSet::from_crystals(vec![bbo]).unwrap()
    })
    .unwrap();
    let path = dir.path().join("only_bbo.toml");
    std::fs::write(&path, text).unwrap();
    let out = bin()
        .env("BIBORATE_CRYSTAL_DATA", &path)
        .args(["crystals", "list"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let listing = stdout(&out);
    assert!(listing.contains("BBO"));
    assert!(!listing.contains("CLBO"));
    assert!(listing.contains("1 crystals"));
}

#[test]
fn replay_detects_data_change() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "tables",
            "--crystal",
            "CLBO",
            "--format",
            "csv",
            "--out",
            "t.csv",
        ],
    );
    assert!(out.status.success());
    // Replay against the unchanged embedded data reproduces the table.
    let ok = run_in(dir.path(), &["manifest", "replay", "t.csv.manifest.toml", "--check-only"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("REPRODUCED t.csv"));
    // Point replay at a different data file: checksum mismatch.
    let set = biborate::crystal::load_default().unwrap();
    let clbo = set.get("CLBO").unwrap().clone();
    let text = biborate::crystal::to_toml_string(
        &biborate::crystal::CrystalSet::from_crystals(vec![clbo]).unwrap(),
    )
    .unwrap();
    let path = dir.path().join("other.toml");
    std::fs::write(&path, text).unwrap();
    let replay = bin()
        .current_dir(dir.path())
        .env("BIBORATE_CRYSTAL_DATA", &path)
        .args(["manifest", "replay", "t.csv.manifest.toml"])
        .output()
        .unwrap();
    assert!(!replay.status.success());
    assert!(String::from_utf8_lossy(&replay.stderr).contains("checksum mismatch"));
}
