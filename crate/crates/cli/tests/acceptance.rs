//! Runs the eight acceptance criteria and prints one PASS/FAIL line for
//! each. Criterion 3 is known to fail on the degree-12 datum: some of
//! its relations have complex parts of different sizes, and the model
//! complex then puts zigzags off the diagonal. The test asserts exactly
//! that failure and nothing weaker.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use otlab_cli::{analyze, DatumFile, Status};
use otlab_core::dcomplex::synth::{random_sum, SynthConfig};
use otlab_core::dcomplex::zigzag_decompose;
use otlab_core::invariants::{binom, cohomological_pluriclosed_test};
use otlab_core::otcomplex::{identity_report, verify_structure_identities, CoframeAlgebra};
use otlab_core::polyfield::{irreducibility_certificate, usable_primes, FieldDatum, Irreducibility, Polynomial};
use otlab_core::relations::RelationSet;
use otlab_core::units::{build_unit_system, check_lck_condition, check_pluriclosed_condition, UnitSystem, Verdict, DEG12_POLY};
use otlab_core::Precision;
use rug::Float;
use serde_json::Value;

const CORPUS: [&str; 4] = ["inoue", "one_two", "pluriclosed22", "deg12"];

struct Run {
    name: &'static str,
    datum: DatumFile,
    units: UnitSystem,
    status: Status,
    json: Value,
    elapsed: Duration,
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn load(name: &'static str) -> Run {
    let datum = DatumFile::read(&root().join(format!("corpus/{name}.toml"))).unwrap();
    let start = Instant::now();
    let out = analyze(&datum, 256).unwrap();
    let elapsed = start.elapsed();
    let f = FieldDatum::new(Polynomial::new(datum.poly.clone()).unwrap(), Precision::new(256)).unwrap();
    let units = build_unit_system(f, datum.units.clone()).unwrap();
    Run { name, datum, units, status: out.status, json: out.json, elapsed }
}

fn usizes(v: &Value) -> Vec<usize> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect()
}

fn table(v: &Value) -> Vec<Vec<usize>> {
    v.as_array().unwrap().iter().map(usizes).collect()
}

fn verdict(v: &Value) -> String {
    v["verdict"].as_str().unwrap().to_string()
}

type Outcome = Result<String, String>;

fn check(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_otlab")).arg("verify-deg12").output().unwrap();
    let elapsed = start.elapsed();
    check(out.status.code() == Some(0), format!("verify-deg12 exited {:?}", out.status.code()))?;
    let j: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = j["checks"].as_array().unwrap();
    check(checks.len() == 7 && j["all_passed"] == true, format!("{} checks, all_passed {}", checks.len(), j["all_passed"]))?;
    check(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;

    // independent of the report: roots of F straight from the root finder
    let f = Polynomial::from_i64(&DEG12_POLY).unwrap();
    let k = FieldDatum::new(f.clone(), Precision::new(256)).unwrap();
    let top = k.roots.real.iter().max_by(|a, b| a.partial_cmp(b).unwrap()).unwrap().to_f64();
    check((top - 21.651145).abs() < 5e-7, format!("largest real root {top}"))?;
    let unimodular = k
        .roots
        .complex
        .iter()
        .filter(|z| {
            let gap = Float::with_val(256, z.abs_ref()) - 1u32;
            gap.abs() < 1e-60
        })
        .count();
    check(2 * unimodular == 6, format!("{} unimodular roots", 2 * unimodular))?;
    let cert = irreducibility_certificate(&f, &usable_primes(&f, 20)).unwrap();
    check(matches!(cert, Irreducibility::Irreducible { .. }), format!("certificate {cert:?}"))?;
    Ok(format!("7/7 checks in {:.2} s, largest real root {top:.6}, 6 unimodular roots, irreducible", elapsed.as_secs_f64()))
}

fn criterion2(runs: &[Run]) -> Outcome {
    let expected = [("inoue", "Holds"), ("one_two", "Fails"), ("pluriclosed22", "Holds"), ("deg12", "Fails")];
    let mut parts = vec![];
    for (r, (name, want)) in runs.iter().zip(expected) {
        assert_eq!(r.name, name);
        let p = &r.json["pluriclosed"];
        let (u, rel, coh) = (verdict(&p["units"]), verdict(&p["relations"]), verdict(&p["cohomology"]));
        check(u == want && rel == want && coh == want, format!("{name}: units {u}, relations {rel}, cohomology {coh}, expected {want}"))?;
        let direct = check_pluriclosed_condition(&r.units).unwrap().verdict;
        check(direct.to_string() == coh, format!("{name}: units check {direct} against cohomology {coh}"))?;
        parts.push(format!("{name} {want}"));
    }
    // synthetic s != t relation data, no field behind them
    for (s, t) in [(1, 2), (2, 3), (3, 1)] {
        let r = RelationSet::from_parts(s, t, vec![vec![]], vec![(vec![], vec![])]);
        let v = cohomological_pluriclosed_test(&r).0;
        check(v == Verdict::Fails, format!("synthetic ({s},{t}) gave {v}"))?;
    }
    parts.push("synthetic (1,2), (2,3), (3,1) Fails".into());
    Ok(parts.join(", "))
}

const DEG12_FAILED: [&str; 3] = ["Bott-Chern", "Aeppli", "zigzag multiplicities"];

fn criterion3(runs: &[Run]) -> Outcome {
    let mut failures = vec![];
    let mut parts = vec![];
    for r in runs {
        let cc = &r.json["cross_check"];
        let checks = cc["checks"].as_array().ok_or_else(|| format!("{}: no cross-check: {}", r.name, cc["error"]))?;
        let failed: Vec<&str> = checks.iter().filter(|c| c["status"] == "failed").map(|c| c["name"].as_str().unwrap()).collect();
        let small = r.units.s() <= 2 && r.units.t() <= 2;
        if small && r.elapsed > Duration::from_secs(60) {
            failures.push(format!("{} took {:?}", r.name, r.elapsed));
        }
        if failed.is_empty() {
            parts.push(format!("{} agrees ({:.1} s)", r.name, r.elapsed.as_secs_f64()));
        } else {
            let details: Vec<String> = checks
                .iter()
                .filter(|c| c["status"] == "failed")
                .map(|c| format!("{} at {}", c["name"].as_str().unwrap(), c["detail"].as_str().unwrap_or("?")))
                .collect();
            failures.push(format!("{}: {}", r.name, details.join("; ")));
        }
    }
    if failures.is_empty() {
        Ok(parts.join(", "))
    } else {
        Err(format!(
            "{}; the closed forms place every zigzag of a graded piece on the diagonal, which needs |K| = |L| for all its relations",
            failures.join(", ")
        ))
    }
}

/// The documented state of criterion 3: balanced data agree in full;
/// on the degree-12 datum exactly the diagonal-placement tables fail,
/// while the per-relation placement agrees everywhere.
fn assert_criterion3_finding(runs: &[Run]) {
    for r in runs {
        let checks = r.json["cross_check"]["checks"].as_array().unwrap();
        let failed: Vec<&str> = checks.iter().filter(|c| c["status"] == "failed").map(|c| c["name"].as_str().unwrap()).collect();
        let unbalanced = r.json["cohomology"]["unbalanced_relations"].as_array().unwrap().len();
        if r.name == "deg12" {
            assert_eq!(failed, DEG12_FAILED);
            assert_eq!(unbalanced, 4);
            assert_eq!(r.status, Status::Mismatch);
            for name in ["witness Bott-Chern", "witness Aeppli", "witness zigzag multiplicities", "Dolbeault total", "de Rham"] {
                let c = checks.iter().find(|c| c["name"] == name).unwrap();
                assert_eq!(c["status"], "passed", "{name}");
            }
        } else {
            assert!(failed.is_empty(), "{}: {failed:?}", r.name);
            assert_eq!(unbalanced, 0);
            assert_eq!(r.status, Status::Certified, "{}", r.name);
        }
    }
}

fn criterion4(runs: &[Run]) -> Outcome {
    for r in runs {
        let s = r.units.s();
        let betti = usizes(&r.json["cohomology"]["betti"]);
        let hodge = table(&r.json["cohomology"]["hodge"]);
        check(betti[1] == s && betti[2] == binom(s, 2), format!("{}: b1 {}, b2 {}", r.name, betti[1], betti[2]))?;
        check(hodge[0][1] == s, format!("{}: h01 {}", r.name, hodge[0][1]))?;
        let n = betti.len() - 1;
        check((0..=n).all(|k| betti[k] == betti[n - k]), format!("{}: Poincaré symmetry {betti:?}", r.name))?;
        // the model complex's de Rham numbers, computed by linear algebra
        let vb: Vec<usize> = (0..=n)
            .map(|k| {
                r.json["cross_check"]["vb"]["de_rham"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .find(|e| e["degree"] == k)
                    .map_or(0, |e| e["dim"].as_u64().unwrap() as usize)
            })
            .collect();
        check(vb == betti, format!("{}: model de Rham {vb:?} against {betti:?}", r.name))?;
    }
    let p = runs.iter().find(|r| r.name == "pluriclosed22").unwrap();
    let betti = usizes(&p.json["cohomology"]["betti"]);
    check(betti == [1, 2, 1, 2, 4, 2, 1, 2, 1], format!("pluriclosed betti {betti:?}"))?;
    check(p.json["cohomology"]["euler_characteristic"] == 0, "Euler characteristic".into())?;
    Ok("b1 = s, b2 = C(s,2), h01 = s on all four; s = 2 pluriclosed betti (1,2,1,2,4,2,1,2,1), Euler characteristic 0".into())
}

fn criterion5(runs: &[Run]) -> Outcome {
    for r in runs {
        let ranks = r.json["cross_check"]["vb"]["frolicher_ranks"].as_u64().unwrap();
        check(ranks == 0, format!("{}: {ranks} nonzero page ranks", r.name))?;
        let betti = usizes(&r.json["cohomology"]["betti"]);
        let hodge = table(&r.json["cohomology"]["hodge"]);
        for (k, &b) in betti.iter().enumerate() {
            let sum: usize = (0..=k).filter(|&p| p < hodge.len() && k - p < hodge.len()).map(|p| hodge[p][k - p]).sum();
            check(sum == b, format!("{}: degree {k} Hodge sum {sum}, betti {b}", r.name))?;
        }
    }
    Ok("no d_r with r >= 1 on any model complex; Hodge sums equal betti numbers".into())
}

fn criterion6() -> Outcome {
    let cfg = SynthConfig::default();
    let mut exact = 0;
    let mut agree = 0;
    for seed in 0..100u64 {
        let (c, m) = random_sum(seed, &cfg);
        let z = zigzag_decompose(&c).map_err(|e| format!("seed {seed}: {e}"))?;
        if m.matches(&z) {
            exact += 1;
        }
        let zf = zigzag_decompose(&c.to_float(Precision::new(128))).map_err(|e| format!("seed {seed} float: {e}"))?;
        if zf.odd == z.odd && zf.even == z.even && zf.squares == z.squares {
            agree += 1;
        }
    }
    check(exact == 100 && agree == 100, format!("recovered {exact}/100, float agrees {agree}/100"))?;
    Ok("recovered 100/100, exact and float agree 100/100".into())
}

fn criterion7(runs: &[Run]) -> Outcome {
    let mut worst = 0f64;
    for r in runs {
        let rep = verify_structure_identities(&r.units).map_err(|e| format!("{}: {e}", r.name))?;
        worst = worst.max(rep.max_residual());
        check(rep.max_residual() < 1e-60, format!("{}: residual {:e}", r.name, rep.max_residual()))?;
    }
    let u = &runs.iter().find(|r| r.name == "pluriclosed22").unwrap().units;
    let mut b = u.b.clone();
    b[0][0] += Float::with_val(u.bits(), 1e-3);
    let rep = identity_report(&CoframeAlgebra::new(&b, &u.c, u.t(), u.precision()), &u.b);
    check(!rep.all_passed(), "perturbed b passed every identity".into())?;
    Ok(format!("max residual {worst:.1e} over the corpus; perturbed b fails"))
}

fn criterion8(runs: &[Run]) -> Outcome {
    let constant = [
        ("Kähler", "Never"),
        ("taming symplectic", "Never"),
        ("balanced", "Never"),
        ("Gauduchon", "Always"),
        ("strongly Gauduchon", "Never"),
        ("locally conformally balanced", "Always"),
    ];
    for r in runs {
        let rows = r.json["metrics"].as_array().unwrap();
        let get = |p: &str| rows.iter().find(|m| m["property"] == p).map(|m| m["verdict"].as_str().unwrap().to_string());
        for (p, v) in constant {
            check(get(p).as_deref() == Some(v), format!("{}: {p} row {:?}", r.name, get(p)))?;
        }
        let n = r.units.s() + r.units.t();
        for p in ["special k-Gauduchon", "astheno-Kähler"] {
            let row = get(p);
            check(row.is_some() == (n >= 4), format!("{}: {p} row present {} with n = {n}", r.name, row.is_some()))?;
            check(row.as_ref().is_none_or(|v| v == "Never"), format!("{}: {p} {row:?}", r.name))?;
        }
        let pc = check_pluriclosed_condition(&r.units).unwrap().verdict.to_string();
        check(get("pluriclosed") == Some(pc.clone()), format!("{}: pluriclosed row against {pc}", r.name))?;
        let lck = check_lck_condition(&r.units).unwrap().0;
        let want = if r.units.t() == 1 { Verdict::Holds } else { Verdict::Fails };
        check(lck == want, format!("{}: lck check {lck} with t = {}", r.name, r.units.t()))?;
        check(get("locally conformally Kähler") == Some(lck.to_string()), format!("{}: lck row", r.name))?;
        check(rows.len() == if n >= 4 { 10 } else { 8 }, format!("{}: {} rows", r.name, rows.len()))?;
    }
    Ok("constant rows exact, pluriclosed and LCK rows follow the unit checks, n >= 4 rows present exactly when n >= 4".into())
}

#[test]
fn acceptance_criteria() {
    let runs: Vec<Run> = CORPUS.iter().map(|n| load(n)).collect();
    for r in &runs {
        assert_eq!(r.datum.label, r.name);
    }
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "degree-12 verification", criterion1()),
        (2, "pluriclosed criterion", criterion2(&runs)),
        (3, "closed forms against direct computation", criterion3(&runs)),
        (4, "known constants", criterion4(&runs)),
        (5, "Frölicher degeneration", criterion5(&runs)),
        (6, "double-complex engine on 100 random sums", criterion6()),
        (7, "structure identities", criterion7(&runs)),
        (8, "metric report", criterion8(&runs)),
    ];
    // written to the raw handle so the lines show even when output is captured
    let mut err = std::io::stderr();
    for (n, name, r) in &results {
        let line = match r {
            Ok(d) => format!("criterion {n} PASS {name}: {d}"),
            Err(d) => format!("criterion {n} FAIL {name}: {d}"),
        };
        writeln!(err, "{line}").unwrap();
    }
    for (n, name, r) in &results {
        if *n == 3 {
            assert!(r.is_err(), "criterion 3 now passes; update the finding");
            assert_criterion3_finding(&runs);
        } else {
            assert!(r.is_ok(), "criterion {n} ({name}): {}", r.as_ref().unwrap_err());
        }
    }
}
