use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn otlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otlab")).args(args).env_remove("OTLAB_PRECISION").output().unwrap()
}

fn path(rel: &str) -> String {
    root().join(rel).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("otlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn inoue_is_certified() {
    let out = otlab(&["analyze", &path("corpus/inoue.toml")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let j = json(&out);
    assert_eq!(j["status"], "certified");
    assert_eq!(j["field"]["signature"]["s"], 1);
    assert_eq!(j["pluriclosed"]["units"]["verdict"], "Holds");
}

#[test]
fn degree_twelve_reports_the_mismatch() {
    let out = otlab(&["analyze", &path("corpus/deg12.toml")]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    let j = json(&out);
    assert_eq!((j["field"]["signature"]["s"].as_u64(), j["field"]["signature"]["t"].as_u64()), (Some(2), Some(5)));
    assert_eq!(j["pluriclosed"]["units"]["verdict"], "Fails");
    assert_eq!(j["status"], "mismatch");
    assert!(j["issues"]["mismatch"][0].as_str().unwrap().starts_with("MismatchReport"));
}

#[test]
fn output_is_byte_identical_with_sorted_keys() {
    let a = otlab(&["analyze", &path("corpus/one_two.toml")]);
    let b = otlab(&["analyze", &path("corpus/one_two.toml")]);
    assert_eq!(a.stdout, b.stdout);
    let j = json(&a);
    let keys: Vec<&String> = j.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    // 40 significant digits
    let root = j["field"]["real_roots"][0].as_str().unwrap();
    assert_eq!(root.chars().filter(|c| c.is_ascii_digit()).count(), 40, "{root}");
    let text = String::from_utf8(a.stdout).unwrap();
    let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
    assert!(pos("cohomology") < pos("datum") && pos("datum") < pos("field"));
}

#[test]
fn markdown_and_out_file() {
    let dir = std::env::temp_dir().join(format!("otlab-md-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("inoue.md");
    let out = otlab(&["analyze", &path("corpus/inoue.toml"), "--md", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let md = std::fs::read_to_string(&target).unwrap();
    assert!(md.starts_with("# Report: inoue"), "{md}");
    assert!(md.contains("| pluriclosed | Holds |"));
}

#[test]
fn precision_flag_beats_the_environment() {
    let file = path("corpus/inoue.toml");
    let env = Command::new(env!("CARGO_BIN_EXE_otlab")).args(["analyze", &file]).env("OTLAB_PRECISION", "192").output().unwrap();
    assert_eq!(json(&env)["datum"]["precision_bits"], 192);
    let flag = Command::new(env!("CARGO_BIN_EXE_otlab"))
        .args(["analyze", &file, "--precision", "320"])
        .env("OTLAB_PRECISION", "192")
        .output()
        .unwrap();
    assert_eq!(json(&flag)["datum"]["precision_bits"], 320);
    let bad = Command::new(env!("CARGO_BIN_EXE_otlab")).args(["analyze", &file]).env("OTLAB_PRECISION", "lots").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("OTLAB_PRECISION"));
}

#[test]
fn malformed_files_exit_2_and_name_the_field() {
    let cases = [
        ("float.toml", "label = \"x\"\npoly = [-1, -1, 0, 1]\nunits = [[0, 1.5, 0]]\n", "units"),
        ("missing.toml", "label = \"x\"\nunits = [[0, 1, 0]]\n", "poly"),
        ("short.toml", "label = \"x\"\npoly = [1, 0, 1]\nunits = []\n", "poly"),
        ("extra.toml", "label = \"x\"\npoly = [-1, -1, 0, 1]\nunits = [[0, 1, 0]]\ncolour = 3\n", "colour"),
        ("rank.toml", "label = \"x\"\npoly = [-1, -1, 0, 1]\nunits = [[0, 1, 0], [1, 1, 0]]\n", "UnitError::WrongRank"),
        ("nonunit.toml", "label = \"x\"\npoly = [-1, -1, 0, 1]\nunits = [[2, 0, 0]]\n", "UnitError::NotAUnit"),
        ("reducible.toml", "label = \"x\"\npoly = [-1, 0, 0, 1]\nunits = [[0, 1, 0]]\n", "PolyError::Reducible"),
    ];
    for (name, text, needle) in cases {
        let out = otlab(&["analyze", &scratch(name, text)]);
        assert_eq!(out.status.code(), Some(2), "{name}: {}", stderr(&out));
        assert!(stderr(&out).contains(needle), "{name}: {}", stderr(&out));
    }
}

#[test]
fn verify_deg12_passes() {
    let out = otlab(&["verify-deg12"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["checks"].as_array().unwrap().len(), 7);
    let md = otlab(&["verify-deg12", "--md"]);
    assert!(String::from_utf8(md.stdout).unwrap().contains("largest real root"));
}

#[test]
fn square_fixture_has_no_zigzags() {
    let out = otlab(&["zigzag", &path("fixtures/square.txt")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let j = json(&out);
    let d = &j["decomposition"];
    assert!(d["odd"].as_array().unwrap().is_empty() && d["even"].as_array().unwrap().is_empty());
    assert_eq!(d["squares"].as_array().unwrap().len(), 1);
    assert!(j["column"].as_array().unwrap().is_empty());
}

#[test]
fn random_fixture_matches_its_manifest() {
    let out = otlab(&["zigzag", &path("fixtures/random_sum_seed42.txt")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["manifest_matches"], true);
    // the shipped fixture is what the generator writes today
    let regenerated = otlab(&["synth", "--seed", "42"]);
    assert_eq!(String::from_utf8(regenerated.stdout).unwrap(), std::fs::read_to_string(path("fixtures/random_sum_seed42.txt")).unwrap());
}

#[test]
fn archived_model_complex_matches_the_tables() {
    let out = otlab(&["zigzag", &path("fixtures/vb_inoue.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let z = json(&out);
    assert_eq!(z["manifest_matches"], true);
    let a = json(&otlab(&["analyze", &path("corpus/inoue.toml")]));
    assert_eq!(z["decomposition"]["odd"], a["cohomology"]["zigzags"]);
    let bc = &a["cohomology"]["bott_chern"];
    for e in z["bott_chern"].as_array().unwrap() {
        let (p, q) = (e["p"].as_u64().unwrap() as usize, e["q"].as_u64().unwrap() as usize);
        assert_eq!(e["dim"], bc[p][q], "({p},{q})");
    }
}

#[test]
fn broken_fixtures_exit_2() {
    let not_complex = "mode exact\ngen a 0 0\ngen b 1 0\ngen c 1 1\nd1 a b 1\nd2 b c 1\n";
    let out = otlab(&["zigzag", &scratch("nc.txt", not_complex)]);
    // a -> b -> c is d2 d1 != 0
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("DcError::NotAComplex"), "{}", stderr(&out));
    let out = otlab(&["zigzag", &scratch("junk.txt", "mode exact\nwibble\n")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"));
}

#[test]
fn search_finds_the_cubic() {
    let out = otlab(&["search-pluriclosed", "--degree", "3", "--height", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    let polys: Vec<Vec<i64>> =
        j["candidates"].as_array().unwrap().iter().map(|c| serde_json::from_value(c["poly"].clone()).unwrap()).collect();
    assert!(polys.contains(&vec![-1, -1, 0, 1]));
    // the mirror x^3 - x + 1 needs the unit -a
    let mirror = j["candidates"].as_array().unwrap().iter().find(|c| c["poly"] == serde_json::json!([1, -1, 0, 1])).unwrap();
    assert_eq!(mirror["unit"], "-a");
}

#[test]
fn search_at_height_zero_is_empty() {
    let j = json(&otlab(&["search-pluriclosed", "--degree", "5", "--height", "0"]));
    assert!(j["candidates"].as_array().unwrap().is_empty());
}

#[test]
fn degree_eight_scan_finds_nothing() {
    let j = json(&otlab(&["search-pluriclosed", "--min-degree", "8", "--degree", "8", "--height", "1"]));
    assert!(j["mixed_signature"].as_u64().unwrap() > 0);
    assert!(j["candidates"].as_array().unwrap().is_empty(), "{}", j["candidates"]);
}

#[test]
fn oversized_search_is_refused() {
    let out = otlab(&["search-pluriclosed", "--degree", "9", "--height", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("BoundTooLarge"));
    let out = otlab(&["search-pluriclosed", "--degree", "10", "--height", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
