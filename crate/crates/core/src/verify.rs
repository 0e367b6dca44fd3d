//! Numerical verification of multistationarity witnesses.

use serde::{Deserialize, Serialize};

use crate::error::{MsaError, Result};
use crate::kinetics::KineticSystem;
use crate::linalg::RationalMatrix;
use crate::rational::{to_f64, Rational};

/// Default relative tolerance for residuals and compatibility.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Two equilibria and the rate constants that make them equilibria.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub mu: Vec<f64>,
    pub sigma: Vec<Rational>,
    pub c_star: Vec<f64>,
    pub c_double_star: Vec<f64>,
    pub kappa: Vec<f64>,
    pub k: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub residual_c_star: f64,
    pub residual_c_double_star: f64,
    pub compat_defect: f64,
    pub distinct: bool,
    pub positive: bool,
    pub tol: f64,
    pub pass: bool,
}

/// `‖f(c)‖∞` divided by the largest single-reaction flux.
pub fn relative_residual(system: &KineticSystem, k: &[f64], c: &[f64]) -> Result<f64> {
    let flux = system.fluxes_with(k, c)?;
    let f = system.sfrf_with(k, c)?;
    let scale = flux.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let top = f.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    Ok(if scale > 0.0 { top / scale } else { top })
}

fn in_column_space(n: &RationalMatrix, v: &[Rational]) -> bool {
    let mut cols: Vec<Vec<Rational>> = (0..n.cols()).map(|j| n.column(j)).collect();
    let before = n.rank();
    cols.push(v.to_vec());
    RationalMatrix::from_columns(n.rows(), &cols).rank() == before
}

/// Relative distance from `d` to the column space of `n`, by Gram–Schmidt projection.
fn least_squares_defect(n: &RationalMatrix, d: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for j in 0..n.cols() {
        let mut q: Vec<f64> = n.column(j).iter().map(to_f64).collect();
        let original = norm(&q);
        for b in &basis {
            let p: f64 = q.iter().zip(b).map(|(x, y)| x * y).sum();
            q.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        let len = norm(&q);
        if len > 1e-10 * original.max(1.0) {
            basis.push(q.into_iter().map(|x| x / len).collect());
        }
    }
    let mut r = d.to_vec();
    for b in &basis {
        let p: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
        r.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
    }
    let dn = norm(d);
    if dn > 0.0 {
        norm(&r) / dn
    } else {
        0.0
    }
}

/// Checks both equilibria, their compatibility class and positivity.
///
/// Residuals are evaluated with the witness rate constants `k`.
pub fn check_witness(system: &KineticSystem, witness: &Witness, tol: f64) -> Result<VerificationReport> {
    let m = system.network().num_species();
    for c in [&witness.c_star, &witness.c_double_star] {
        if c.len() != m {
            return Err(MsaError::Dimension { expected: m, got: c.len() });
        }
        if let Some((index, &value)) = c.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(MsaError::NonPositiveConcentration { index, value });
        }
    }
    let residual_c_star = relative_residual(system, &witness.k, &witness.c_star)?;
    let residual_c_double_star = relative_residual(system, &witness.k, &witness.c_double_star)?;

    let n = system.network().stoichiometric_matrix();
    let d: Vec<f64> = witness
        .c_star
        .iter()
        .zip(&witness.c_double_star)
        .map(|(a, b)| a - b)
        .collect();
    let sigma_usable = witness.sigma.len() == m
        && witness.sigma.iter().any(|s| *s != Rational::from_integer(0.into()))
        && in_column_space(&n, &witness.sigma);
    let compat_defect = if sigma_usable {
        let sigma: Vec<f64> = witness.sigma.iter().map(to_f64).collect();
        let scale = sigma.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let gap = d.iter().zip(&sigma).fold(0.0_f64, |acc, (x, s)| acc.max((x - s).abs()));
        gap / scale
    } else {
        least_squares_defect(&n, &d)
    };
    let distinct = d.iter().any(|v| *v != 0.0);
    let positive = true;
    let pass = residual_c_star <= tol
        && residual_c_double_star <= tol
        && compat_defect <= tol
        && distinct
        && positive;
    Ok(VerificationReport {
        residual_c_star,
        residual_c_double_star,
        compat_defect,
        distinct,
        positive,
        tol,
        pass,
    })
}
