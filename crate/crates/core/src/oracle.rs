//! Direct time-domain recomputation of ACCF sums, used to cross-check the
//! polynomial-product path.
//!
//! For every column pair (μ, ν) and shift τ this evaluates
//! Σ_m Σ_k x_{m,μ}[k]·x*_{m,ν}[k+τ] twice: exactly, by counting exponent
//! differences modulo q, and in double precision.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlation::AccfMatrix;
use crate::cyclotomic::CycInt;
use crate::error::Result;
use crate::polymat::CodeGrid;

/// Exact and floating ACCF sum S_{x_μ,x_ν}[τ] by the double loop.
pub fn direct_accf_sum(grid: &CodeGrid, mu: usize, nu: usize, tau: i64) -> (CycInt, Complex64) {
    let q = grid.modulus;
    let len = grid.length as i64;
    let mut counts = vec![0i64; q as usize];
    let mut float = Complex64::new(0.0, 0.0);
    let step = -2.0 * std::f64::consts::PI / q as f64;
    for m in 0..grid.rows {
        let (x, y) = (grid.sequence(m, mu), grid.sequence(m, nu));
        for k in 0..len {
            let j = k + tau;
            if !(0..len).contains(&j) {
                continue;
            }
            let d = (x[k as usize] + q - y[j as usize]) % q;
            counts[d as usize] += 1;
            float += Complex64::from_polar(1.0, step * d as f64);
        }
    }
    let exact = CycInt::from_coeffs(q, counts).expect("grid modulus is valid");
    (exact, float)
}

/// Outcome of comparing the oracle against a polynomial-path ACCF matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleOutcome {
    pub coefficients_checked: usize,
    pub exact_agreement: bool,
    pub max_float_error: f64,
    pub float_agreement: bool,
    /// First (μ, ν, τ) where the exact values differ.
    pub first_disagreement: Option<(usize, usize, i64)>,
}

impl OracleOutcome {
    pub fn agrees(&self) -> bool {
        self.exact_agreement && self.float_agreement
    }
}

/// Absolute tolerance for the floating comparison.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Coefficient triple (μ, ν, τ).
type Triple = (usize, usize, i64);

/// Recomputes every coefficient of `accf` from the time-domain grid.
pub fn compare(grid: &CodeGrid, accf: &AccfMatrix) -> Result<OracleOutcome> {
    let k = grid.cols;
    let reach = grid.length as i64 - 1;
    let per_pair: Vec<(f64, Option<Triple>)> = (0..k * k)
        .into_par_iter()
        .map(|idx| {
            let (mu, nu) = (idx / k, idx % k);
            let poly = accf.get(mu, nu);
            let mut worst = 0.0f64;
            let mut mismatch = None;
            for tau in -reach..=reach {
                let (exact, float) = direct_accf_sum(grid, mu, nu, tau);
                let fast = poly.coeff(tau);
                if mismatch.is_none() && exact != fast {
                    mismatch = Some((mu, nu, tau));
                }
                worst = worst.max((float - fast.to_complex()).norm());
            }
            let outside = poly.terms().iter().find(|(d, _)| d.abs() > reach);
            if let (None, Some((d, _))) = (mismatch, outside) {
                mismatch = Some((mu, nu, *d));
            }
            (worst, mismatch)
        })
        .collect();
    let max_float_error = per_pair.iter().map(|(e, _)| *e).fold(0.0, f64::max);
    let first_disagreement = per_pair.iter().find_map(|(_, m)| *m);
    Ok(OracleOutcome {
        coefficients_checked: k * k * (2 * grid.length - 1),
        exact_agreement: first_disagreement.is_none(),
        max_float_error,
        float_agreement: max_float_error < FLOAT_TOLERANCE,
        first_disagreement,
    })
}
