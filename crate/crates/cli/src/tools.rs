//! The smaller subcommands: the degree-12 check, fixture
//! decomposition, and writing fixtures.

use std::path::Path;

use otlab_core::dcomplex::fixture::{parse_fixture, read_mode, write_fixture, Manifest, Mode};
use otlab_core::dcomplex::synth::{random_sum, SynthConfig};
use otlab_core::dcomplex::{
    aeppli_dims, bott_chern_dims, column_cohomology, de_rham_dims, row_cohomology, zigzag_decompose, DcError, DoubleComplex, LinAlg,
};
use otlab_core::invariants::witness_zigzags;
use otlab_core::otcomplex::{build_vb_complex, OtError};
use otlab_core::polyfield::{FieldDatum, Polynomial};
use otlab_core::relations::enumerate_relations;
use otlab_core::units::{build_unit_system, verify_degree12_example};
use otlab_core::{GaussRat, MpC, Precision};
use serde_json::{json, Value};

use crate::datum::DatumFile;
use crate::report::{self, Md};
use crate::{error_name, poly_error, unit_error, CliError};

/// Report plus the exit code it calls for.
pub struct ToolOutput {
    pub code: i32,
    pub json: Value,
    pub markdown: String,
}

pub fn verify_deg12(bits: u32) -> Result<ToolOutput, CliError> {
    let rep = verify_degree12_example(Precision::new(bits)).map_err(poly_error)?;
    let ok = rep.all_passed();
    let checks: Vec<Value> = rep
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "residual": c.residual.map(report::small), "detail": c.detail }))
        .collect();
    let mut md = Md::default();
    md.h(1, "Degree-12 verification");
    md.para(format!("Precision {} bits. All checks passed: **{ok}**.", rep.bits));
    let rows: Vec<Vec<String>> = rep
        .checks
        .iter()
        .map(|c| vec![c.name.clone(), c.passed.to_string(), c.residual.map(|r| format!("{r:.3e}")).unwrap_or_default(), c.detail.clone()])
        .collect();
    md.rows(&["check", "passed", "residual", "detail"], &rows);
    Ok(ToolOutput {
        code: if ok { 0 } else { 3 },
        json: json!({ "precision_bits": rep.bits, "all_passed": ok, "checks": checks }),
        markdown: md.0,
    })
}

fn dc_error(e: DcError) -> CliError {
    let msg = format!("{}: {e}", error_name("DcError", &e));
    match e {
        DcError::RankUnstable { .. } => CliError::Ambiguous(msg),
        _ => CliError::Validation(msg),
    }
}

fn decompose_report<S: LinAlg>(c: &DoubleComplex<S>, expected: Option<&Manifest>) -> Result<ToolOutput, CliError> {
    let z = zigzag_decompose(c).map_err(dc_error)?;
    let matches = expected.map(|m| m.matches(&z));
    let mut md = Md::default();
    md.h(1, "Zigzag decomposition");
    md.para(format!(
        "Total dimension {}. {} odd shapes, {} even shapes, {} squares.",
        c.total_dim(),
        z.odd.values().sum::<usize>(),
        z.even.values().sum::<usize>(),
        z.square_count()
    ));
    let rows: Vec<Vec<String>> = z
        .odd
        .iter()
        .map(|(&(d, p, q), &n)| vec![d.to_string(), p.to_string(), q.to_string(), n.to_string()])
        .collect();
    md.rows(&["d", "p", "q", "mult"], &rows);
    let column = column_cohomology(c).map_err(dc_error)?;
    let bott_chern = bott_chern_dims(c).map_err(dc_error)?;
    md.para("Column cohomology:");
    md.dim_grid(&column);
    md.para("Bott-Chern:");
    md.dim_grid(&bott_chern);
    if let Some(m) = matches {
        md.para(format!("Embedded manifest matches: **{m}**."));
    }
    let json = json!({
        "total_dimension": c.total_dim(),
        "decomposition": report::decomposition(&z),
        "column": report::dim_table(&column),
        "row": report::dim_table(&row_cohomology(c).map_err(dc_error)?),
        "bott_chern": report::dim_table(&bott_chern),
        "aeppli": report::dim_table(&aeppli_dims(c).map_err(dc_error)?),
        "de_rham": de_rham_dims(c).map_err(dc_error)?.iter().map(|(k, n)| json!({ "degree": k, "dim": n })).collect::<Vec<_>>(),
        "manifest_matches": matches,
    });
    Ok(ToolOutput { code: if matches == Some(false) { 3 } else { 0 }, json, markdown: md.0 })
}

pub fn zigzag(path: &Path) -> Result<ToolOutput, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    match read_mode(&text).map_err(dc_error)? {
        Mode::Exact => {
            let f = parse_fixture::<GaussRat>(&text, ()).map_err(dc_error)?;
            decompose_report(&f.complex, f.expected.as_ref())
        }
        Mode::Float(prec) => {
            let f = parse_fixture::<MpC>(&text, prec).map_err(dc_error)?;
            decompose_report(&f.complex, f.expected.as_ref())
        }
    }
}

pub fn synth(seed: u64, cfg: &SynthConfig) -> String {
    let (c, m) = random_sum(seed, cfg);
    format!("# random direct sum, seed {seed}\n{}", write_fixture(&c, Some(&m)))
}

/// The model complex of a datum as a float fixture. The odd shapes in
/// the manifest come from the per-relation tables; squares follow from
/// the dimensions.
pub fn export_vb(d: &DatumFile, bits: u32) -> Result<String, CliError> {
    let prec = Precision::new(bits);
    let poly = Polynomial::new(d.poly.clone()).map_err(poly_error)?;
    let field = FieldDatum::new(poly, prec).map_err(poly_error)?;
    let u = build_unit_system(field, d.units.clone()).map_err(unit_error)?;
    let r = enumerate_relations(&u).map_err(|e| CliError::Validation(format!("{}: {e}", error_name("RelationError", &e))))?;
    let vb = build_vb_complex(&u, &r, None).map_err(|e| match e {
        OtError::Complex(e) => dc_error(e),
        e => CliError::Mismatch(format!("{}: {e}", error_name("OtError", &e))),
    })?;
    let z = zigzag_decompose(&vb.complex).map_err(dc_error)?;
    let mut m = Manifest { squares: z.squares.clone(), ..Manifest::default() };
    for (&(dd, p, q), &n) in &witness_zigzags(&r).odd {
        m.odd.insert((dd as i32, p as i32, q as i32), n);
    }
    Ok(format!("# model complex of {}\n{}", d.label, write_fixture(&vb.complex, Some(&m))))
}
