//! Unit subgroups, the matrices b and c, and metric-structure criteria.

mod deg12;

use std::fmt;

use rug::float::Constant;
use rug::{Complex, Float, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::polyfield::{eval_embedding, resultant, FieldDatum, PolyError};
use crate::precision::{Closeness, Precision};

pub use deg12::{verify_degree12_example, verify_degree12_with, Deg12Check, Deg12Report, DEG12_POLY};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnitError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("signature (s, t) = ({s}, {t}) needs s >= 1 and t >= 1")]
    UnsupportedSignature { s: usize, t: usize },
    #[error("expected {expected} generators, got {got}")]
    WrongRank { got: usize, expected: usize },
    #[error("generator {index} has norm {norm}, not a unit")]
    NotAUnit { index: usize, norm: String },
    #[error("generator {generator} is not positive at real embedding {embedding}")]
    NotTotallyPositive { generator: usize, embedding: usize },
    #[error("log matrix is singular")]
    LogMatrixSingular,
    #[error("residual {0:e} exceeds tolerance")]
    ResidualTooLarge(f64),
    #[error("ambiguous numeric comparison: {0}")]
    AmbiguousNumeric(String),
}

/// An admissible unit subgroup U of rank s with its derived data.
///
/// `sigma[i][j]` is σ_{i+1}(u_j) over all s+2t embeddings,
/// `log_matrix[k][j]` is log σ_{k+1}(u_j) for the real embeddings, and
/// `b`, `c` are s×t with, for every generator u,
/// 2 log|σ_{s+i}(u)| = Σ_k b[k][i] log σ_k(u) and
/// arg σ_{s+i}(u) = Σ_k c[k][i] log σ_k(u), arg principal in (-π, π].
#[derive(Clone, Debug)]
pub struct UnitSystem {
    pub field: FieldDatum,
    pub generators: Vec<Vec<Rational>>,
    pub sigma: Vec<Vec<Complex>>,
    pub log_matrix: Vec<Vec<Float>>,
    pub b: Vec<Vec<Float>>,
    pub c: Vec<Vec<Float>>,
}

impl UnitSystem {
    pub fn s(&self) -> usize {
        self.field.s
    }

    pub fn t(&self) -> usize {
        self.field.t
    }

    pub fn precision(&self) -> Precision {
        self.field.precision
    }

    pub fn bits(&self) -> u32 {
        self.field.precision.bits()
    }
}

/// Solves A X = R by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot drops to the tolerance.
pub(crate) fn solve(a: &[Vec<Float>], rhs: &[Vec<Float>], prec: Precision) -> Option<Vec<Vec<Float>>> {
    let n = a.len();
    let m = rhs.first().map_or(0, |r| r.len());
    let bits = prec.bits();
    let mut aug: Vec<Vec<Float>> = (0..n)
        .map(|i| a[i].iter().chain(rhs[i].iter()).map(|x| Float::with_val(bits, x)).collect())
        .collect();
    let eps = prec.eps();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| {
            Float::with_val(bits, aug[x][col].abs_ref())
                .partial_cmp(&Float::with_val(bits, aug[y][col].abs_ref()))
                .unwrap()
        })?;
        if Float::with_val(bits, aug[piv][col].abs_ref()) <= eps {
            return None;
        }
        aug.swap(col, piv);
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = Float::with_val(bits, &aug[r][col] / &aug[col][col]);
            for k in col..n + m {
                let v = Float::with_val(bits, &f * &aug[col][k]);
                aug[r][k] -= v;
            }
        }
    }
    Some(
        (0..n)
            .map(|i| (0..m).map(|k| Float::with_val(bits, &aug[i][n + k] / &aug[i][i])).collect())
            .collect(),
    )
}

fn arg(z: &Complex, bits: u32) -> Float {
    Float::with_val(bits, z.arg_ref())
}

fn log_abs(z: &Complex, bits: u32) -> Float {
    Float::with_val(bits, z.abs_ref()).ln()
}

pub fn build_unit_system(field: FieldDatum, generators: Vec<Vec<Rational>>) -> Result<UnitSystem, UnitError> {
    let (s, t) = (field.s, field.t);
    if s == 0 || t == 0 {
        return Err(UnitError::UnsupportedSignature { s, t });
    }
    if generators.len() != s {
        return Err(UnitError::WrongRank { got: generators.len(), expected: s });
    }
    let prec = field.precision;
    let bits = prec.bits();
    for (j, g) in generators.iter().enumerate() {
        if g.len() != field.degree() {
            return Err(PolyError::ElementLength { got: g.len(), expected: field.degree() }.into());
        }
        let norm = resultant(&field.poly, g);
        if norm != 1 && norm != -1 {
            return Err(UnitError::NotAUnit { index: j + 1, norm: norm.to_string() });
        }
    }
    let mut sigma = vec![];
    for i in 1..=s + 2 * t {
        let row = generators
            .iter()
            .map(|g| eval_embedding(&field, g, i))
            .collect::<Result<Vec<_>, _>>()?;
        sigma.push(row);
    }
    for k in 0..s {
        for j in 0..s {
            let v = sigma[k][j].real();
            if v.is_sign_negative() || prec.classify(v) != Closeness::Distinct {
                return Err(UnitError::NotTotallyPositive { generator: j + 1, embedding: k + 1 });
            }
        }
    }
    let log_matrix: Vec<Vec<Float>> = (0..s)
        .map(|k| (0..s).map(|j| Float::with_val(bits, sigma[k][j].real()).ln()).collect())
        .collect();
    // row j of the system: Σ_k x_k log σ_k(u_j)
    let a: Vec<Vec<Float>> = (0..s).map(|j| (0..s).map(|k| log_matrix[k][j].clone()).collect()).collect();
    let rhs: Vec<Vec<Float>> = (0..s)
        .map(|j| {
            let mut row: Vec<Float> = (0..t).map(|i| log_abs(&sigma[s + i][j], bits) * 2u32).collect();
            row.extend((0..t).map(|i| arg(&sigma[s + i][j], bits)));
            row
        })
        .collect();
    let x = solve(&a, &rhs, prec).ok_or(UnitError::LogMatrixSingular)?;
    let b: Vec<Vec<Float>> = (0..s).map(|k| x[k][..t].to_vec()).collect();
    let c: Vec<Vec<Float>> = (0..s).map(|k| x[k][t..].to_vec()).collect();

    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let mut worst = Float::new(bits);
    for j in 0..s {
        for i in 0..t {
            let mut lhs_b = Float::new(bits);
            let mut lhs_c = Float::new(bits);
            for k in 0..s {
                lhs_b += Float::with_val(bits, &b[k][i] * &log_matrix[k][j]);
                lhs_c += Float::with_val(bits, &c[k][i] * &log_matrix[k][j]);
            }
            let rb = Float::with_val(bits, lhs_b / 2u32 - log_abs(&sigma[s + i][j], bits)).abs();
            let diff = lhs_c - arg(&sigma[s + i][j], bits);
            let turns = Float::with_val(bits, &diff / &two_pi).round();
            let rc = Float::with_val(bits, diff - turns * &two_pi).abs();
            worst.max_mut(&rb);
            worst.max_mut(&rc);
        }
    }
    if worst > prec.eps() {
        return Err(UnitError::ResidualTooLarge(worst.to_f64()));
    }
    Ok(UnitSystem { field, generators, sigma, log_matrix, b, c })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Always,
    Never,
    Holds,
    Fails,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MetricProperty {
    Kahler,
    TamingSymplectic,
    Balanced,
    Pluriclosed,
    SpecialKGauduchon,
    AsthenoKahler,
    Gauduchon,
    StronglyGauduchon,
    LocallyConformallyKahler,
    LocallyConformallyBalanced,
}

impl MetricProperty {
    pub fn name(&self) -> &'static str {
        match self {
            MetricProperty::Kahler => "Kähler",
            MetricProperty::TamingSymplectic => "taming symplectic",
            MetricProperty::Balanced => "balanced",
            MetricProperty::Pluriclosed => "pluriclosed",
            MetricProperty::SpecialKGauduchon => "special k-Gauduchon",
            MetricProperty::AsthenoKahler => "astheno-Kähler",
            MetricProperty::Gauduchon => "Gauduchon",
            MetricProperty::StronglyGauduchon => "strongly Gauduchon",
            MetricProperty::LocallyConformallyKahler => "locally conformally Kähler",
            MetricProperty::LocallyConformallyBalanced => "locally conformally balanced",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricVerdict {
    pub property: MetricProperty,
    pub verdict: Verdict,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PluriclosedCheck {
    pub verdict: Verdict,
    /// π(k) for each real index k (0-based complex index), when it holds.
    pub pairing: Option<Vec<usize>>,
    pub witness: Option<String>,
}

fn perfect_matching(compat: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = compat.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(k: usize, compat: &[Vec<bool>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for i in 0..compat[k].len() {
            if compat[k][i] && !seen[i] {
                seen[i] = true;
                if owner[i].is_none_or(|o| augment(o, compat, seen, owner)) {
                    owner[i] = Some(k);
                    return true;
                }
            }
        }
        false
    }
    for k in 0..n {
        let mut seen = vec![false; n];
        if !augment(k, compat, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut pi = vec![0; n];
    for (i, o) in owner.iter().enumerate() {
        pi[o.unwrap()] = i;
    }
    Some(pi)
}

/// Tests whether there is a bijection π of {1..s} with
/// σ_k(u)|σ_{s+π(k)}(u)|² = 1 for all u in U.
pub fn check_pluriclosed_condition(u: &UnitSystem) -> Result<PluriclosedCheck, UnitError> {
    let (s, t) = (u.s(), u.t());
    if s != t {
        return Ok(PluriclosedCheck {
            verdict: Verdict::Fails,
            pairing: None,
            witness: Some(format!("s = {s} differs from t = {t}")),
        });
    }
    let prec = u.precision();
    let bits = prec.bits();
    let mut compat = vec![vec![true; t]; s];
    for k in 0..s {
        for i in 0..t {
            for j in 0..s {
                let m = Float::with_val(bits, u.sigma[s + i][j].norm_ref());
                let p = Float::with_val(bits, u.sigma[k][j].real() * &m) - 1u32;
                match prec.classify(&p) {
                    Closeness::Equal => {}
                    Closeness::Distinct => compat[k][i] = false,
                    Closeness::Ambiguous => {
                        return Err(UnitError::AmbiguousNumeric(format!(
                            "σ_{}(u_{})|σ_{}(u_{})|² - 1 = {:e}",
                            k + 1,
                            j + 1,
                            s + i + 1,
                            j + 1,
                            p.to_f64()
                        )))
                    }
                }
            }
        }
    }
    match perfect_matching(&compat) {
        Some(pi) => Ok(PluriclosedCheck { verdict: Verdict::Holds, pairing: Some(pi), witness: None }),
        None => {
            let lonely = (0..s).find(|&k| compat[k].iter().all(|c| !c));
            let witness = match lonely {
                Some(k) => format!("real embedding {} has no compatible complex embedding", k + 1),
                None => "compatible pairs admit no bijection".to_string(),
            };
            Ok(PluriclosedCheck { verdict: Verdict::Fails, pairing: None, witness: Some(witness) })
        }
    }
}

/// Tests whether all complex embeddings of each generator share one modulus.
pub fn check_lck_condition(u: &UnitSystem) -> Result<(Verdict, Option<String>), UnitError> {
    let (s, t) = (u.s(), u.t());
    let prec = u.precision();
    let bits = prec.bits();
    for j in 0..s {
        let m0 = Float::with_val(bits, u.sigma[s][j].abs_ref());
        for i in 1..t {
            let mi = Float::with_val(bits, u.sigma[s + i][j].abs_ref());
            let d = Float::with_val(bits, &mi - &m0) / &m0;
            match prec.classify(&d) {
                Closeness::Equal => {}
                Closeness::Distinct => {
                    return Ok((
                        Verdict::Fails,
                        Some(format!(
                            "|σ_{}(u_{})| differs from |σ_{}(u_{})|",
                            s + 1,
                            j + 1,
                            s + i + 1,
                            j + 1
                        )),
                    ))
                }
                Closeness::Ambiguous => {
                    return Err(UnitError::AmbiguousNumeric(format!(
                        "moduli of σ_{} and σ_{} at u_{}",
                        s + 1,
                        s + i + 1,
                        j + 1
                    )))
                }
            }
        }
    }
    Ok((Verdict::Holds, None))
}

pub fn metric_report(u: &UnitSystem) -> Vec<MetricVerdict> {
    use MetricProperty::*;
    let n = u.s() + u.t();
    let fixed = |property, verdict| MetricVerdict { property, verdict, witness: None };
    let mut rows = vec![fixed(Kahler, Verdict::Never), fixed(TamingSymplectic, Verdict::Never), fixed(Balanced, Verdict::Never)];
    rows.push(match check_pluriclosed_condition(u) {
        Ok(c) => MetricVerdict {
            property: Pluriclosed,
            verdict: c.verdict,
            witness: c.witness.or(c.pairing.map(|pi| {
                let pairs: Vec<String> = pi.iter().enumerate().map(|(k, i)| format!("{}->{}", k + 1, u.s() + i + 1)).collect();
                format!("pairing {}", pairs.join(", "))
            })),
        },
        Err(e) => MetricVerdict { property: Pluriclosed, verdict: Verdict::Undecided, witness: Some(e.to_string()) },
    });
    if n >= 4 {
        rows.push(fixed(SpecialKGauduchon, Verdict::Never));
        rows.push(fixed(AsthenoKahler, Verdict::Never));
    }
    rows.push(fixed(Gauduchon, Verdict::Always));
    rows.push(fixed(StronglyGauduchon, Verdict::Never));
    rows.push(match check_lck_condition(u) {
        Ok((v, w)) => MetricVerdict { property: LocallyConformallyKahler, verdict: v, witness: w },
        Err(e) => MetricVerdict { property: LocallyConformallyKahler, verdict: Verdict::Undecided, witness: Some(e.to_string()) },
    });
    rows.push(fixed(LocallyConformallyBalanced, Verdict::Always));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfield::Polynomial;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    fn inoue() -> UnitSystem {
        let f = Polynomial::from_i64(&[-1, -1, 0, 1]).unwrap();
        let k = FieldDatum::new(f, Precision::default()).unwrap();
        build_unit_system(k, vec![q(&[0, 1, 0])]).unwrap()
    }

    #[test]
    fn inoue_b_is_minus_one() {
        let u = inoue();
        // N(α) = 1 forces α|σ_2(α)|² = 1
        let b = u.b[0][0].to_f64();
        assert!((b + 1.0).abs() < 1e-15, "{b}");
        let r = Float::with_val(256, &u.b[0][0] + 1u32).abs();
        assert!(r.to_f64() < 1e-70);
    }

    #[test]
    fn rejects_non_units_and_negative_units() {
        let f = Polynomial::from_i64(&[-1, -1, 0, 1]).unwrap();
        let k = FieldDatum::new(f, Precision::default()).unwrap();
        assert!(matches!(build_unit_system(k.clone(), vec![q(&[2, 1, 0])]), Err(UnitError::NotAUnit { .. })));
        // -α is a unit but negative at the real place
        assert!(matches!(
            build_unit_system(k.clone(), vec![q(&[0, -1, 0])]),
            Err(UnitError::NotTotallyPositive { .. })
        ));
        // 1 is totally positive but its log vector vanishes
        assert!(matches!(build_unit_system(k, vec![q(&[1, 0, 0])]), Err(UnitError::LogMatrixSingular)));
    }

    #[test]
    fn inoue_metric_rows() {
        let u = inoue();
        let rows = metric_report(&u);
        let get = |p: MetricProperty| rows.iter().find(|r| r.property == p).map(|r| r.verdict);
        assert_eq!(get(MetricProperty::Pluriclosed), Some(Verdict::Holds));
        assert_eq!(get(MetricProperty::LocallyConformallyKahler), Some(Verdict::Holds));
        assert_eq!(get(MetricProperty::AsthenoKahler), None);
        assert_eq!(rows.len(), 8);
    }

    #[test]
    fn matching_is_exhaustive() {
        let c = vec![vec![true, true], vec![true, false]];
        assert_eq!(perfect_matching(&c), Some(vec![1, 0]));
        let d = vec![vec![true, false], vec![true, false]];
        assert_eq!(perfect_matching(&d), None);
    }
}
