use std::path::{Path, PathBuf};
use std::process::Command;

use cff::cli::{execute, Cli};
use cff::formats;
use clap::Parser;
use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_owned()
}

fn golden(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

fn run(args: &[&str]) -> anyhow::Result<(bool, String)> {
    let cli = Cli::try_parse_from(std::iter::once("cff").chain(args.iter().copied()))?;
    let mut out = Vec::new();
    let ok = execute(cli, &mut out)?;
    Ok((ok, String::from_utf8(out).unwrap()))
}

fn ok(args: &[&str]) -> String {
    let (ok, out) = run(args).unwrap();
    assert!(ok, "{args:?}: {out}");
    out
}

fn bin(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_cff")).args(args).output().unwrap();
    (
        o.status.code().unwrap(),
        String::from_utf8(o.stdout).unwrap(),
        String::from_utf8(o.stderr).unwrap(),
    )
}

#[test]
fn golden_outputs() {
    assert_eq!(
        ok(&["gen", "--q", "4", "--k", "1", "--d", "2"]),
        golden("gen_q4_k1_d2.cff")
    );
    assert_eq!(ok(&["--format", "csv", "tables", "d2"]), golden("tables_d2.csv"));
    assert_eq!(
        ok(&["design", "bush", "--q", "3", "--t", "2"]),
        golden("bush_q3_t2.design")
    );
    let m = formats::matrix_from_text(&golden("gen_q4_k1_d2.cff")).unwrap();
    assert_eq!(
        cff_core::cff::verify_cff_exhaustive(&m, 2).unwrap(),
        cff_core::cff::CffVerdict::CoverFree
    );
}

#[test]
fn outputs_do_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let base = ok(&["gen", "--q", "5", "--k", "2"]);
    let path = dir.path().join("m.cff");
    std::fs::write(&path, &base).unwrap();
    let p = path.to_str().unwrap();
    let mut seen = Vec::new();
    for w in ["1", "2", "4"] {
        let (good, out) = run(&["--workers", w, "verify", p, "--mode", "exhaustive", "--d", "3"]).unwrap();
        assert!(!good);
        seen.push(out);
    }
    assert!(seen.windows(2).all(|s| s[0] == s[1]));
    let witness = seen[0].lines().nth(1).unwrap();
    let v: Value = serde_json::from_str(witness).unwrap();
    assert_eq!(v["witness"]["covering"].as_array().unwrap().len(), 3);
}

#[test]
fn gen_writes_matrix_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub/c.cff");
    let out = ok(&[
        "gen",
        "--q",
        "9",
        "--k",
        "2",
        "--d",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.contains("3-CFF(63, 729)"), "{out}");
    let (m, side) = formats::load_matrix(&path).unwrap();
    let side = side.unwrap();
    assert_eq!(side.field.unwrap().to_field().unwrap().order(), 9);
    assert_eq!(m.row_labels.as_ref().unwrap().len(), 63);
    let p = path.to_str().unwrap();
    let cert = ok(&["verify", p, "--mode", "certificate"]);
    assert!(cert.contains("certifies d = 3"), "{cert}");
    assert!(!run(&["verify", p, "--mode", "certificate", "--d", "4"]).unwrap().0);
}

#[test]
fn gen_with_prime_and_degree() {
    assert_eq!(
        ok(&["gen", "--q", "2", "--m", "2", "--k", "1"]),
        ok(&["gen", "--q", "4", "--k", "1"])
    );
}

#[test]
fn gen_rejects_impossible_d() {
    let e = run(&["gen", "--q", "3", "--k", "1", "--d", "3"]).unwrap_err();
    assert!(e.to_string().contains("d*k + 1"), "{e}");
    assert!(run(&["gen", "--q", "6", "--k", "1"]).is_err());
    assert!(run(&["--format", "csv", "gen", "--q", "3", "--k", "1"]).is_err());
}

#[test]
fn json_outputs_parse() {
    let v: Value = serde_json::from_str(&ok(&["--format", "json", "gen", "--q", "3", "--k", "1"])).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
    let v: Value = serde_json::from_str(&ok(&["--format", "json", "tables", "d3"])).unwrap();
    assert_eq!(v["rows"][3]["ratio"], "1.54 × 10^105211");
    let v: Value = serde_json::from_str(&ok(&[
        "--format",
        "json",
        "decode",
        &fixture("gt_9x12.cff"),
        "--outcomes",
        "001010111",
    ]))
    .unwrap();
    assert_eq!(v["defectives"], serde_json::json!([3, 12]));
}

#[test]
fn decode_forms() {
    let t1 = fixture("gt_9x12.cff");
    assert_eq!(ok(&["decode", &t1, "--outcomes", "0,0,1,0,1,0,1,1,1"]).trim(), "3 12");
    assert_eq!(ok(&["decode", &t1, "--outcomes", "000000000"]).trim(), "");
    assert!(run(&["decode", &t1, "--outcomes", "0101"]).is_err());
    let s = ok(&["decode", &t1, "--selftest", "--trials", "200", "--seed", "9"]);
    assert!(s.contains("200/200"), "{s}");
}

#[test]
fn embed_manifest_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    ok(&["embed", "--q", "2", "--schedule", "1:1", "--levels", "3", "--out", d]);
    let manifest = dir.path().join("manifest.json");
    let m = manifest.to_str().unwrap();
    ok(&["verify", m, "--mode", "embedding"]);
    let loaded = formats::load_manifest(&manifest).unwrap();
    assert_eq!(loaded.levels.len(), 3);
    assert_eq!(loaded.levels[2].n, "256");

    // Flip a corner bit in level 1 and the family check fails.
    let l1 = dir.path().join("level1.cff");
    let (mut mat, _) = formats::load_matrix(&l1).unwrap();
    mat.set(0, 0, !mat.get(0, 0));
    std::fs::write(&l1, formats::matrix_to_text(&mat)).unwrap();
    let (good, out) = run(&["verify", m, "--mode", "embedding"]).unwrap();
    assert!(!good);
    assert!(out.contains("corner_mismatch"), "{out}");
}

#[test]
fn monotone_and_nested() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = ok(&[
        "embed",
        "--q",
        "3",
        "--monotone",
        "--k",
        "1",
        "--d",
        "2",
        "--levels",
        "2",
        "--out",
        d,
    ]);
    assert!(out.contains("t=27 n=81"), "{out}");
    let m = dir.path().join("manifest.json");
    ok(&["verify", m.to_str().unwrap(), "--mode", "monotone"]);
    ok(&["verify", m.to_str().unwrap(), "--mode", "nested"]);
    // A sequence that grows d is not monotone.
    let dir2 = tempfile::tempdir().unwrap();
    ok(&[
        "embed",
        "--q",
        "3",
        "--schedule",
        "1:2,2:4",
        "--out",
        dir2.path().to_str().unwrap(),
    ]);
    let m2 = dir2.path().join("manifest.json");
    assert!(!run(&["verify", m2.to_str().unwrap(), "--mode", "monotone"]).unwrap().0);
}

#[test]
fn designs_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let oa = dir.path().join("b.design");
    let o = oa.to_str().unwrap();
    ok(&["design", "bush", "--q", "4", "--t", "2", "--out", o]);
    ok(&["design", "verify", o]);
    ok(&["verify", o, "--mode", "oa"]);
    ok(&["verify", o, "--mode", "pa"]);
    let shf = dir.path().join("b.shf");
    ok(&[
        "design",
        "convert",
        o,
        "--to",
        "shf",
        "--w",
        "2",
        "--out",
        shf.to_str().unwrap(),
    ]);
    ok(&["verify", shf.to_str().unwrap(), "--mode", "shf"]);
    let cff = dir.path().join("b.cff");
    ok(&[
        "design",
        "convert",
        shf.to_str().unwrap(),
        "--to",
        "cff",
        "--out",
        cff.to_str().unwrap(),
    ]);
    let (m, _) = formats::load_matrix(&cff).unwrap();
    assert_eq!((m.rows(), m.cols(), m.d_claimed), (16, 16, 2));
    ok(&["verify", cff.to_str().unwrap(), "--mode", "exhaustive"]);

    // The 2 x 6 family separates any column from all five others.
    let fig = fixture("shf_2x6.shf");
    ok(&["verify", &fig, "--mode", "shf"]);
    ok(&["verify", &fig, "--mode", "shf", "--w", "5"]);
    assert!(run(&["verify", &fig, "--mode", "shf", "--w", "6"]).is_err());
}

#[test]
fn broken_design_reports_the_first_projection() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.design");
    let mut text = golden("bush_q3_t2.design");
    text = text.replacen("1 1 1", "0 1 1", 1);
    std::fs::write(&p, text).unwrap();
    let (good, out) = run(&["--format", "json", "design", "verify", p.to_str().unwrap()]).unwrap();
    assert!(!good);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["columns"], serde_json::json!([1, 2]));
}

#[test]
fn exit_codes() {
    let t2 = fixture("c3_1.cff");
    let (code, out, _) = bin(&["verify", &t2, "--mode", "exhaustive"]);
    assert_eq!((code, out.trim()), (0, "ok: 2-CFF(9, 9)"));
    let (code, out, _) = bin(&["verify", &t2, "--mode", "exhaustive", "--d", "3"]);
    assert_eq!(code, 1);
    assert!(out.contains(r#""witness":{"covering":[1,2,3],"target":4}"#), "{out}");
    let (code, _, err) = bin(&["verify", "/nonexistent.cff", "--mode", "exhaustive"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
    let (code, _, err) = bin(&["--budget", "5", "verify", &t2, "--mode", "exhaustive"]);
    assert_eq!(code, 2);
    assert!(err.contains("budget"), "{err}");
    let (code, out, _) = bin(&["tables", "k3"]);
    assert_eq!(code, 0);
    assert!(out.contains("65536^4"));
}
