//! The full pipeline for one datum.

use otlab_core::invariants::{cohomological_pluriclosed_test, cohomology_report, CohomologyReport, SHAPE_CONVENTION};
use otlab_core::otcomplex::{identity_report, oracle_cross_check, CheckStatus, CoframeAlgebra, CrossCheckReport, OtError};
use otlab_core::polyfield::{irreducibility_certificate, usable_primes, FieldDatum, Irreducibility, Polynomial};
use otlab_core::relations::{enumerate_relations, pluriclosed_relation_structure, RelationSet};
use otlab_core::units::{build_unit_system, check_pluriclosed_condition, metric_report, UnitSystem, Verdict};
use otlab_core::dcomplex::DcError;
use otlab_core::Precision;
use serde_json::{json, Map, Value};

use crate::datum::DatumFile;
use crate::report::{self, Md};
use crate::{error_name, poly_error, unit_error, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Certified,
    Mismatch,
    Ambiguous,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Certified => "certified",
            Status::Mismatch => "mismatch",
            Status::Ambiguous => "ambiguous",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Certified => 0,
            Status::Mismatch => 3,
            Status::Ambiguous => 4,
        }
    }
}

pub struct Outcome {
    pub status: Status,
    pub json: Value,
    pub markdown: String,
}

struct Issues {
    mismatch: Vec<String>,
    ambiguous: Vec<String>,
}

impl Issues {
    fn status(&self) -> Status {
        if !self.ambiguous.is_empty() {
            Status::Ambiguous
        } else if !self.mismatch.is_empty() {
            Status::Mismatch
        } else {
            Status::Certified
        }
    }
}

fn irreducibility_json(c: &Irreducibility) -> Value {
    let patterns = |ps: &[(u64, Vec<usize>)]| -> Value {
        ps.iter().map(|(p, d)| json!({ "prime": p, "factor_degrees": d })).collect()
    };
    match c {
        Irreducibility::Irreducible { patterns: ps } => json!({ "verdict": "irreducible", "patterns": patterns(ps) }),
        Irreducibility::Inconclusive { patterns: ps } => json!({ "verdict": "inconclusive", "patterns": patterns(ps) }),
        Irreducibility::Reducible { factor } => {
            json!({ "verdict": "reducible", "factor": factor.iter().map(|c| c.to_string()).collect::<Vec<_>>() })
        }
    }
}

fn datum_json(d: &DatumFile, bits: u32) -> Value {
    json!({
        "label": d.label,
        "poly": d.poly.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "units": d.units.iter().map(|u| u.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "precision_bits": bits,
        "note": d.note,
    })
}

fn field_json(u: &UnitSystem) -> Value {
    let roots = &u.field.roots;
    json!({
        "degree": u.field.degree(),
        "signature": { "s": u.s(), "t": u.t() },
        "real_roots": roots.real.iter().map(report::float).collect::<Vec<_>>(),
        "complex_roots": roots.complex.iter().map(report::complex).collect::<Vec<_>>(),
        "root_residual": report::small(roots.residual.to_f64()),
    })
}

fn units_json(u: &UnitSystem) -> Value {
    let mat = |m: &[Vec<rug::Float>]| -> Value { m.iter().map(|r| r.iter().map(report::float).collect::<Vec<_>>()).collect() };
    json!({
        "log_matrix": mat(&u.log_matrix),
        "b": mat(&u.b),
        "c": mat(&u.c),
    })
}

fn relations_json(r: &RelationSet) -> Value {
    json!({
        "derham": r.derham,
        "dolbeault": r.dolbeault.iter().map(|(i, j)| json!({ "holomorphic": i, "antiholomorphic": j })).collect::<Vec<_>>(),
        "rho": r.rho.iter().map(|(m, n)| json!({ "size": m, "count": n })).collect::<Vec<_>>(),
        "rho_pm": r.rho_pm.iter().map(|(&(p, m), n)| json!({ "p": p, "m": m, "count": n })).collect::<Vec<_>>(),
        "ambiguity_flags": r.ambiguity_flags,
    })
}

fn euler(betti: &[usize]) -> i64 {
    betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
}

fn cohomology_json(c: &CohomologyReport) -> Value {
    json!({
        "betti": c.betti,
        "euler_characteristic": euler(&c.betti),
        "hodge": report::table(&c.hodge),
        "vrb_hodge": c.vrb_hodge.iter().map(|t| report::table(t)).collect::<Vec<_>>(),
        "bott_chern": report::table(&c.bott_chern),
        "aeppli": report::table(&c.aeppli),
        "frolicher_degenerate": c.frolicher_degenerate,
        "zigzags": report::odd_shapes(&c.zigzags.odd.iter().map(|(&(d, p, q), &n)| ((d as i64, p as i64, q as i64), n)).collect()),
        "shape_convention": SHAPE_CONVENTION,
        "unbalanced_relations": c.unbalanced.iter().map(|(i, j)| json!({ "holomorphic": i, "antiholomorphic": j })).collect::<Vec<_>>(),
        "witness_zigzags": report::odd_shapes(&c.witness_zigzags.odd.iter().map(|(&(d, p, q), &n)| ((d as i64, p as i64, q as i64), n)).collect()),
        "witness_bott_chern": report::table(&c.witness_bott_chern),
        "witness_aeppli": report::table(&c.witness_aeppli),
    })
}

fn status_name(s: &CheckStatus) -> &'static str {
    match s {
        CheckStatus::Passed => "passed",
        CheckStatus::Failed => "failed",
        CheckStatus::Skipped => "skipped",
    }
}

fn cross_check_json(c: &CrossCheckReport) -> Value {
    let vb = &c.vb;
    json!({
        "passed": c.passed(),
        "checks": c.checks.iter().map(|k| json!({ "name": k.name, "status": status_name(&k.status), "detail": k.detail })).collect::<Vec<_>>(),
        "grades": c.grades,
        "shared_witnesses": c.shared_witnesses,
        "vb": {
            "dimension": vb.dimension,
            "column": report::dim_table(&vb.column),
            "row": report::dim_table(&vb.row),
            "de_rham": vb.de_rham.iter().map(|(k, n)| json!({ "degree": k, "dim": n })).collect::<Vec<_>>(),
            "bott_chern": report::dim_table(&vb.bott_chern),
            "aeppli": report::dim_table(&vb.aeppli),
            "odd_zigzags": report::odd_shapes(&vb.odd_zigzags),
            "even_zigzags": vb.even_zigzags,
            "squares": vb.squares,
            "frolicher_ranks": vb.frolicher_ranks,
        },
    })
}

fn verdict_value(v: Verdict, w: &Option<String>) -> Value {
    json!({ "verdict": v.to_string(), "witness": w })
}

/// Runs every stage on `d` at `bits` of precision. Input problems are
/// returned as errors; disagreements and refusals end up in the status.
pub fn analyze(d: &DatumFile, bits: u32) -> Result<Outcome, CliError> {
    let prec = Precision::new(bits);
    let poly = Polynomial::new(d.poly.clone()).map_err(poly_error)?;
    let primes = usable_primes(&poly, 24);
    let irr = irreducibility_certificate(&poly, &primes).map_err(poly_error)?;
    if let Irreducibility::Reducible { factor } = &irr {
        let f: Vec<String> = factor.iter().map(|c| c.to_string()).collect();
        return Err(CliError::Validation(format!("PolyError::Reducible: polynomial has the factor [{}]", f.join(", "))));
    }
    let field = FieldDatum::new(poly, prec).map_err(poly_error)?;
    let u = build_unit_system(field, d.units.clone()).map_err(unit_error)?;
    let r = enumerate_relations(&u).map_err(|e| CliError::Validation(format!("{}: {e}", error_name("RelationError", &e))))?;

    let mut issues = Issues { mismatch: vec![], ambiguous: vec![] };
    if matches!(irr, Irreducibility::Inconclusive { .. }) {
        issues.ambiguous.push("irreducibility certificate is inconclusive".into());
    }
    for f in &r.ambiguity_flags {
        issues.ambiguous.push(format!("relation screen: {f}"));
    }

    let metrics = metric_report(&u);
    for m in &metrics {
        if m.verdict == Verdict::Undecided {
            issues.ambiguous.push(format!("{}: {}", m.property.name(), m.witness.as_deref().unwrap_or("undecided")));
        }
    }

    let units_side = check_pluriclosed_condition(&u);
    let rel_side = pluriclosed_relation_structure(&r);
    let coh_side = cohomological_pluriclosed_test(&r);
    let units_verdict = match &units_side {
        Ok(c) => verdict_value(c.verdict, &c.witness),
        Err(e) => verdict_value(Verdict::Undecided, &Some(e.to_string())),
    };
    if let Ok(c) = &units_side {
        if c.verdict != coh_side.0 || c.verdict != rel_side.0 {
            issues.mismatch.push(format!(
                "pluriclosed verdicts disagree: units {}, relations {}, cohomology {}",
                c.verdict, rel_side.0, coh_side.0
            ));
        }
    }

    let coh = cohomology_report(&r);

    let ids = identity_report(&CoframeAlgebra::from_units(&u), &u.b);
    for c in ids.checks.iter().filter(|c| !c.passed) {
        issues.mismatch.push(format!("IdentityFailed: {} (residual {:e})", c.name, c.residual));
    }

    let cross = match oracle_cross_check(&u, &r) {
        Ok(c) => cross_check_json(&c),
        Err(OtError::Mismatch(c)) => {
            issues.mismatch.push(format!("MismatchReport: {}", c.summary()));
            cross_check_json(&c)
        }
        Err(e @ (OtError::AmbiguousNumeric(_) | OtError::Complex(DcError::RankUnstable { .. }))) => {
            issues.ambiguous.push(e.to_string());
            json!({ "error": e.to_string() })
        }
        Err(e) => {
            issues.mismatch.push(format!("{}: {e}", error_name("OtError", &e)));
            json!({ "error": e.to_string() })
        }
    };

    let status = issues.status();
    let mut root = Map::new();
    root.insert("datum".into(), datum_json(d, bits));
    root.insert("field".into(), field_json(&u));
    root.insert("irreducibility".into(), irreducibility_json(&irr));
    root.insert("units".into(), units_json(&u));
    root.insert(
        "metrics".into(),
        metrics
            .iter()
            .map(|m| json!({ "property": m.property.name(), "verdict": m.verdict.to_string(), "witness": m.witness }))
            .collect(),
    );
    root.insert(
        "pluriclosed".into(),
        json!({
            "units": units_verdict,
            "relations": verdict_value(rel_side.0, &rel_side.1),
            "cohomology": verdict_value(coh_side.0, &coh_side.1),
        }),
    );
    root.insert("relations".into(), relations_json(&r));
    root.insert("cohomology".into(), cohomology_json(&coh));
    root.insert(
        "identities".into(),
        ids.checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "residual": report::small(c.residual), "comparisons": c.comparisons }))
            .collect(),
    );
    root.insert("cross_check".into(), cross);
    root.insert("status".into(), json!(status.name()));
    root.insert("issues".into(), json!({ "mismatch": issues.mismatch, "ambiguous": issues.ambiguous }));
    let json = Value::Object(root);
    let markdown = markdown(&json, &coh);
    Ok(Outcome { status, json, markdown })
}

fn s(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "".into(),
        other => other.to_string(),
    }
}

fn markdown(j: &Value, coh: &CohomologyReport) -> String {
    let mut md = Md::default();
    md.h(1, &format!("Report: {}", s(&j["datum"]["label"])));
    let sig = &j["field"]["signature"];
    md.para(format!(
        "Polynomial coefficients (ascending): {}. Signature (s, t) = ({}, {}). Precision {} bits. Status: **{}**.",
        j["datum"]["poly"].as_array().unwrap().iter().map(s).collect::<Vec<_>>().join(", "),
        sig["s"],
        sig["t"],
        j["datum"]["precision_bits"],
        s(&j["status"]),
    ));
    md.h(2, "Metrics");
    let rows: Vec<Vec<String>> = j["metrics"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| vec![s(&m["property"]), s(&m["verdict"]), s(&m["witness"])])
        .collect();
    md.rows(&["property", "verdict", "witness"], &rows);
    md.h(2, "Pluriclosed criterion");
    let p = &j["pluriclosed"];
    let rows: Vec<Vec<String>> = ["units", "relations", "cohomology"]
        .iter()
        .map(|k| vec![k.to_string(), s(&p[k]["verdict"]), s(&p[k]["witness"])])
        .collect();
    md.rows(&["side", "verdict", "witness"], &rows);
    md.h(2, "Cohomology");
    md.para(format!(
        "Betti numbers: {:?}. Euler characteristic {}.",
        coh.betti,
        j["cohomology"]["euler_characteristic"]
    ));
    md.para("Dolbeault numbers h^{p,q}:");
    md.grid(&coh.hodge);
    md.para("Bott-Chern numbers:");
    md.grid(&coh.bott_chern);
    md.para("Aeppli numbers:");
    md.grid(&coh.aeppli);
    let zz: Vec<Vec<String>> = coh
        .zigzags
        .odd
        .iter()
        .map(|(&(d, p, q), &n)| vec![d.to_string(), p.to_string(), q.to_string(), n.to_string()])
        .collect();
    md.para("Odd zigzags S_d^{p,q}:");
    md.rows(&["d", "p", "q", "mult"], &zz);
    if !coh.unbalanced.is_empty() {
        md.para(format!(
            "{} relations have unequal holomorphic and antiholomorphic complex parts; per-relation placement gives:",
            coh.unbalanced.len()
        ));
        md.para("Bott-Chern numbers (per-relation placement):");
        md.grid(&coh.witness_bott_chern);
    }
    md.h(2, "Structure identities");
    let rows: Vec<Vec<String>> = j["identities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| vec![s(&c["name"]), s(&c["passed"]), s(&c["residual"])])
        .collect();
    md.rows(&["identity", "passed", "residual"], &rows);
    md.h(2, "Direct computation on the model complex");
    if let Some(checks) = j["cross_check"]["checks"].as_array() {
        md.para(format!("Model dimension {}.", j["cross_check"]["vb"]["dimension"]));
        let rows: Vec<Vec<String>> =
            checks.iter().map(|c| vec![s(&c["name"]), s(&c["status"]), s(&c["detail"])]).collect();
        md.rows(&["check", "status", "detail"], &rows);
    } else {
        md.para(format!("Not available: {}", s(&j["cross_check"]["error"])));
    }
    let issues: Vec<String> = ["mismatch", "ambiguous"]
        .iter()
        .flat_map(|k| j["issues"][k].as_array().unwrap().iter().map(move |v| format!("- {k}: {}", s(v))))
        .collect();
    if !issues.is_empty() {
        md.h(2, "Issues");
        for i in issues {
            md.line(i);
        }
    }
    md.0
}
