//! Symbolic identities in the coframe algebra behind the non-existence
//! of astheno-Kähler and strongly Gauduchon metrics.

use rug::{Complex, Float};
use serde::Serialize;

use super::algebra::{CoframeAlgebra, Form};
use super::OtError;
use crate::units::UnitSystem;

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    /// max |lhs - rhs| over all coefficients, as f64
    pub residual: f64,
    /// number of coefficient comparisons made
    pub comparisons: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

fn cx(bits: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(bits, (re, im))
}

/// Checks the identities in `alg` against expectations computed from `b`.
/// Passing a perturbed algebra with the original `b` is the negative
/// control.
pub fn identity_report(alg: &CoframeAlgebra, b: &[Vec<Float>]) -> IdentityReport {
    let bits = alg.bits();
    let eps = alg.precision.eps();
    let s = alg.s;
    let mut checks = vec![];
    let mut push = |name: &str, residual: Float, comparisons: usize| {
        checks.push(IdentityCheck { name: name.into(), passed: residual <= eps, residual: residual.to_f64(), comparisons });
    };

    push("d^2 = 0 on generators", alg.d_squared_residual(), 2 * alg.n());

    // (a) η = -i Σ_{k,l} ω^k∧ω̄^l; ∂∂̄η = (i/2) Σ_{k<l} ω^k∧ω̄^k∧ω^l∧ω̄^l
    let mut eta = Form::zero(bits);
    for k in 0..s {
        for l in 0..s {
            eta = eta.add(&alg.prod(&[alg.omega(k), alg.omega_bar(l)]).scale(&cx(bits, 0.0, -1.0)));
        }
    }
    let lhs = alg.del(&alg.dbar(&eta));
    let mut rhs = Form::zero(bits);
    for k in 0..s {
        for l in k + 1..s {
            let m = alg.prod(&[alg.omega(k), alg.omega_bar(k), alg.omega(l), alg.omega_bar(l)]);
            rhs = rhs.add(&m.scale(&cx(bits, 0.0, 0.5)));
        }
    }
    push("ddbar eta", lhs.sub(&rhs).max_abs(), lhs.terms.len().max(rhs.terms.len()));

    // (b) τ = ½ Σ ω̄^i: ∂̄τ = 0, ∂τ = (i/4) Σ ω^i∧ω̄^i
    let mut tau = Form::zero(bits);
    let mut want = Form::zero(bits);
    for k in 0..s {
        tau = tau.add(&alg.prod(&[alg.omega_bar(k)]).scale(&cx(bits, 0.5, 0.0)));
        want = want.add(&alg.prod(&[alg.omega(k), alg.omega_bar(k)]).scale(&cx(bits, 0.0, 0.25)));
    }
    let (del_tau, dbar_tau) = alg.split_d(&tau);
    let mut r = dbar_tau.max_abs();
    r.max_mut(&del_tau.sub(&want).max_abs());
    push("dbar tau = 0 and del tau positive", r, s);

    // (c) coefficient of ω^l∧ω̄^h∧γ^I∧γ̄^I in ∂∂̄(γ^I∧γ̄^I), l ≠ h
    let mut worst = Float::new(bits);
    let mut count = 0;
    for mask in 1u32..1 << alg.t {
        let idx: Vec<usize> = (0..alg.t).filter(|i| mask >> i & 1 == 1).collect();
        let pairs: Vec<usize> = idx.iter().flat_map(|&i| [alg.gamma(i), alg.gamma_bar(i)]).collect();
        let form = alg.prod(&pairs);
        let ddb = alg.del(&alg.dbar(&form));
        let sum_b = |row: usize| -> Float {
            let mut acc = Float::new(bits);
            for &i in &idx {
                acc += &b[row][i];
            }
            acc
        };
        for l in 0..s {
            for h in 0..s {
                if l == h {
                    continue;
                }
                let mut gens = vec![alg.omega(l), alg.omega_bar(h)];
                gens.extend(&pairs);
                let got = ddb.coeff_ordered(&gens);
                let expect = Float::with_val(bits, sum_b(l) * sum_b(h)) / 4u32;
                let diff = Float::with_val(bits, Complex::with_val(bits, &got - &expect).abs_ref());
                worst.max_mut(&diff);
                count += 1;
            }
        }
    }
    push("ddbar gamma_I coefficients", worst, count);

    IdentityReport { checks }
}

/// All identities for the structure equations of `u`; the first failing
/// one is returned as an error.
pub fn verify_structure_identities(u: &UnitSystem) -> Result<IdentityReport, OtError> {
    let report = identity_report(&CoframeAlgebra::from_units(u), &u.b);
    if let Some(bad) = report.checks.iter().find(|c| !c.passed) {
        return Err(OtError::IdentityFailed { name: bad.name.clone(), residual: bad.residual });
    }
    Ok(report)
}
