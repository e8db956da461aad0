//! Aperiodic correlation of sequence sets and the PU/ZPU verdicts built on it.
//!
//! Correlations are Laurent polynomials whose coefficient at delay τ is
//! R_{x,y}[τ] = Σ_k x[k]·y*[k+τ]. With that labeling R_{x,y}(z) is the
//! reflection of x(z)·ỹ(z), and S_{x_μ,x_ν} is the reflection of entry
//! (ν, μ) of X̃(z)·X(z).

use rayon::prelude::*;

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::polymat::{sum_of_products, LaurentPoly, PolyMatrix};

/// Aperiodic cross-correlation R_{x,y}.
///
/// Two sequences that both start at delay 0 with contiguous support must
/// have the same length.
pub fn accf(x: &LaurentPoly, y: &LaurentPoly) -> Result<LaurentPoly> {
    if let (Some(lx), Some(ly)) = (sequence_length(x), sequence_length(y)) {
        if lx != ly {
            return Err(Error::LengthMismatch(lx, ly));
        }
    }
    x.reflect().mul(&y.conj())
}

fn sequence_length(p: &LaurentPoly) -> Option<usize> {
    let len = p.terms().len();
    (p.min_delay() == Some(0) && p.max_delay() == Some(len as i64 - 1)).then_some(len)
}

/// ACCF sum S_{X,Y} = Σ_m R_{x_m, y_m}.
pub fn accf_sum(xs: &[&LaurentPoly], ys: &[&LaurentPoly]) -> Result<LaurentPoly> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(format!(
            "sequence sets have different sizes {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    for (x, y) in xs.iter().zip(ys) {
        if let (Some(lx), Some(ly)) = (sequence_length(x), sequence_length(y)) {
            if lx != ly {
                return Err(Error::LengthMismatch(lx, ly));
            }
        }
    }
    let reflected: Vec<LaurentPoly> = xs.iter().map(|x| x.reflect()).collect();
    let conjugated: Vec<LaurentPoly> = ys.iter().map(|y| y.conj()).collect();
    let pairs: Vec<_> = reflected.iter().zip(&conjugated).collect();
    sum_of_products(&pairs)
}

/// Zone extraction f_Z: keeps the coefficients with |τ| ≤ Z − 1.
pub fn zone_extract(s: &LaurentPoly, z: usize) -> Result<LaurentPoly> {
    if z == 0 {
        return Err(Error::ZoneOutOfRange { z, len: 0 });
    }
    let reach = z as i64 - 1;
    Ok(s.filter_delays(|d| d.abs() <= reach))
}

/// The K×K grid of ACCF sums between the columns of a code matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AccfMatrix {
    size: usize,
    entries: Vec<LaurentPoly>,
}

impl AccfMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    /// S_{x_μ, x_ν}.
    pub fn get(&self, mu: usize, nu: usize) -> &LaurentPoly {
        &self.entries[mu * self.size + nu]
    }

    /// The same data as the matrix X̃(z)·X(z): entry (ν, μ) is S_{x_μ,x_ν} reflected.
    pub fn to_polymatrix(&self) -> Result<PolyMatrix> {
        let k = self.size;
        let entries = (0..k * k)
            .map(|idx| self.get(idx % k, idx / k).reflect())
            .collect();
        PolyMatrix::new(k, k, entries)
    }

    fn zero_lag(&self, mu: usize, nu: usize) -> CycInt {
        self.get(mu, nu).coeff(0)
    }

    /// Earliest violation of c·δ(μ−ν) ordered by |τ|, then μ, then ν, then τ ≥ 0 first.
    pub fn first_violation(&self) -> Option<Violation> {
        let k = self.size;
        let energy = self.zero_lag(0, 0);
        (0..k * k)
            .into_par_iter()
            .filter_map(|idx| {
                let (mu, nu) = (idx / k, idx % k);
                let poly = self.get(mu, nu);
                poly.terms()
                    .iter()
                    .filter(|(tau, value)| {
                        mu != nu || *tau != 0 || energy.is_zero() || *value != energy
                    })
                    .min_by_key(|(tau, _)| (tau.abs(), *tau < 0))
                    .map(|(tau, value)| Violation {
                        mu,
                        nu,
                        tau: *tau,
                        value: value.clone(),
                    })
                    .or_else(|| {
                        (mu == nu && energy.is_zero()).then(|| Violation {
                            mu,
                            nu,
                            tau: 0,
                            value: energy.clone(),
                        })
                    })
            })
            .min_by_key(|v| (v.tau.abs(), v.mu, v.nu, v.tau < 0))
    }

    /// Whether f_Z applied to every entry yields c·δ(μ−ν) for a single nonzero c.
    pub fn zone_is_scaled_identity(&self, z: usize) -> Result<bool> {
        let k = self.size;
        let c = self.zero_lag(0, 0);
        if c.is_zero() {
            return Ok(false);
        }
        for mu in 0..k {
            for nu in 0..k {
                let zone = zone_extract(self.get(mu, nu), z)?;
                let expected = if mu == nu {
                    LaurentPoly::constant(c.clone())
                } else {
                    LaurentPoly::zero(c.modulus())
                };
                if zone != expected {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A correlation coefficient S_{x_μ,x_ν}[τ] that breaks the zero-correlation pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub mu: usize,
    pub nu: usize,
    pub tau: i64,
    pub value: CycInt,
}

/// All pairwise ACCF sums S_{x_μ,x_ν} of the columns of `x`.
pub fn accf_sum_matrix(x: &PolyMatrix) -> Result<AccfMatrix> {
    let k = x.cols();
    let reflected: Vec<LaurentPoly> = x.entries().par_iter().map(LaurentPoly::reflect).collect();
    let conjugated: Vec<LaurentPoly> = x.entries().par_iter().map(LaurentPoly::conj).collect();
    let upper: Vec<(usize, usize)> = (0..k)
        .flat_map(|mu| (mu..k).map(move |nu| (mu, nu)))
        .collect();
    let computed = upper
        .par_iter()
        .map(|&(mu, nu)| {
            let pairs: Vec<_> = (0..x.rows())
                .map(|m| (&reflected[m * k + mu], &conjugated[m * k + nu]))
                .collect();
            sum_of_products(&pairs)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut entries = vec![LaurentPoly::zero(x.modulus()); k * k];
    for ((mu, nu), s) in upper.into_iter().zip(computed) {
        if mu != nu {
            entries[nu * k + mu] = s.tilde();
        }
        entries[mu * k + nu] = s;
    }
    Ok(AccfMatrix { size: k, entries })
}

/// Length used for zone bounds: the span of the matrix support.
fn effective_length(x: &PolyMatrix) -> usize {
    match (x.min_delay(), x.max_delay()) {
        (Some(lo), Some(hi)) => (hi - lo + 1) as usize,
        _ => 0,
    }
}

/// X̃(z)·X(z) = c·I_K exactly.
pub fn is_pu(x: &PolyMatrix) -> Result<bool> {
    Ok(accf_sum_matrix(x)?.first_violation().is_none())
}

/// Zone-extracted ACCF sums equal c·δ(μ−ν) at width Z.
pub fn is_zpu(x: &PolyMatrix, z: usize) -> Result<bool> {
    let len = effective_length(x);
    if z == 0 || z > len {
        return Err(Error::ZoneOutOfRange { z, len });
    }
    accf_sum_matrix(x)?.zone_is_scaled_identity(z)
}

/// Largest Z with the ZPU property; 0 when the zero-lag Gram is not c·I.
pub fn zcz_width(x: &PolyMatrix) -> Result<usize> {
    let len = effective_length(x);
    Ok(width_from(&accf_sum_matrix(x)?.first_violation(), len))
}

fn width_from(violation: &Option<Violation>, len: usize) -> usize {
    violation
        .as_ref()
        .map_or(len, |v| (v.tau.unsigned_abs() as usize).min(len))
}

/// Everything the verifier reports about a unimodular code matrix.
#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub rows: usize,
    pub cols: usize,
    pub length: usize,
    pub modulus: u32,
    pub accf_matrix: AccfMatrix,
    /// The zero-lag autocorrelation sum of the first code.
    pub energy: CycInt,
    pub zcz_width: usize,
    pub is_pu: bool,
    /// M·⌊L/Z*⌋, absent when Z* = 0.
    pub bound: Option<usize>,
    pub optimal: bool,
    pub first_violation: Option<Violation>,
}

impl CorrelationReport {
    pub fn is_zpu_at(&self, z: usize) -> Result<bool> {
        if z == 0 || z > self.length {
            return Err(Error::ZoneOutOfRange {
                z,
                len: self.length,
            });
        }
        self.accf_matrix.zone_is_scaled_identity(z)
    }

    /// Set-size bound K ≤ M·⌊L/Z*⌋ holds (vacuous when Z* = 0).
    pub fn within_bound(&self) -> bool {
        self.bound.is_none_or(|b| self.cols <= b)
    }
}

pub(crate) fn require_unimodular(x: &PolyMatrix) -> Result<usize> {
    Ok(x.to_time_domain()?.length)
}

/// Full verification report, including the optimality verdict K = M·⌊L/Z*⌋.
pub fn check_optimal(x: &PolyMatrix) -> Result<CorrelationReport> {
    let length = require_unimodular(x)?;
    let accf_matrix = accf_sum_matrix(x)?;
    let first_violation = accf_matrix.first_violation();
    let zcz_width = width_from(&first_violation, length);
    let bound = (zcz_width > 0).then(|| x.rows() * (length / zcz_width));
    Ok(CorrelationReport {
        rows: x.rows(),
        cols: x.cols(),
        length,
        modulus: x.modulus(),
        energy: accf_matrix.get(0, 0).coeff(0),
        zcz_width,
        is_pu: first_violation.is_none(),
        bound,
        optimal: bound == Some(x.cols()),
        first_violation,
        accf_matrix,
    })
}

fn unimodular_set_length(xs: &[&LaurentPoly]) -> Result<usize> {
    let first = xs
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty sequence set".into()))?;
    let len = first.max_delay().map_or(0, |d| d + 1) as usize;
    for x in xs {
        x.sequence_exponents(len)?;
    }
    Ok(len)
}

fn check_zone(z: usize, len: usize) -> Result<()> {
    if z == 0 || z > len {
        return Err(Error::ZoneOutOfRange { z, len });
    }
    Ok(())
}

/// Z-complementary code: AACF sum is M·L at τ = 0 and vanishes for 1 ≤ |τ| < Z.
pub fn is_zcc(xs: &[&LaurentPoly], z: usize) -> Result<bool> {
    let len = unimodular_set_length(xs)?;
    check_zone(z, len)?;
    let s = zone_extract(&accf_sum(xs, xs)?, z)?;
    let target = CycInt::from_int(s.modulus(), (xs.len() * len) as i64)?;
    Ok(s == LaurentPoly::constant(target))
}

/// Z-complementary mates: the ACCF sum vanishes for |τ| < Z.
pub fn is_z_mate(xs: &[&LaurentPoly], ys: &[&LaurentPoly], z: usize) -> Result<bool> {
    let len = unimodular_set_length(xs)?;
    let len_y = unimodular_set_length(ys)?;
    if len != len_y {
        return Err(Error::LengthMismatch(len, len_y));
    }
    check_zone(z, len)?;
    Ok(zone_extract(&accf_sum(xs, ys)?, z)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::RootScalar;

    fn signs(s: &str) -> LaurentPoly {
        let e: Vec<u32> = s.chars().map(|c| u32::from(c == '-')).collect();
        LaurentPoly::from_sequence(2, &e).unwrap()
    }

    fn coeffs(p: &LaurentPoly, taus: impl Iterator<Item = i64>) -> Vec<i64> {
        taus.map(|t| p.coeff(t).to_integer().unwrap()).collect()
    }

    #[test]
    fn two_term_cross_correlation() {
        let r = accf(&signs("++"), &signs("+-")).unwrap();
        assert_eq!(coeffs(&r, -1..=1), vec![1, 0, -1]);
    }

    #[test]
    fn autocorrelation_peak_is_length() {
        let x = LaurentPoly::from_sequence(6, &[0, 5, 2, 3, 1]).unwrap();
        assert_eq!(accf(&x, &x).unwrap().coeff(0).to_integer(), Some(5));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert_eq!(
            accf(&signs("++"), &signs("+++")),
            Err(Error::LengthMismatch(2, 3))
        );
    }

    #[test]
    fn acf_sum_of_small_sets() {
        let (x0, x1) = (signs("+++++"), signs("+-+-+"));
        let (y0, y1) = (signs("+++--"), signs("+--+-"));
        let s = accf_sum(&[&x0, &x1], &[&y0, &y1]).unwrap();
        assert_eq!(
            coeffs(&s, (-4..=4).rev()),
            vec![-2, 0, -4, 2, 0, 2, 4, 0, 2]
        );
        let z3 = zone_extract(&s, 3).unwrap();
        assert_eq!(z3.to_string(), "4z^2 + 2z + 2z^-1 - 4z^-2");
        assert_eq!(zone_extract(&s, 5).unwrap(), s);
        assert_eq!(zone_extract(&s, 1).unwrap().terms().len(), 0);
        assert!(zone_extract(&s, 0).is_err());
    }

    #[test]
    fn hermitian_symmetry() {
        let x = LaurentPoly::from_sequence(3, &[0, 1, 2, 2]).unwrap();
        let y = LaurentPoly::from_sequence(3, &[1, 1, 0, 2]).unwrap();
        let rxy = accf(&x, &y).unwrap();
        let ryx = accf(&y, &x).unwrap();
        for tau in -3..=3 {
            assert_eq!(rxy.coeff(-tau), ryx.coeff(tau).conj());
        }
    }

    fn h2() -> PolyMatrix {
        PolyMatrix::from_roots(2, 2, &[0, 0, 0, 1].map(|e| RootScalar::new(2, e).unwrap())).unwrap()
    }

    #[test]
    fn delayed_unitary_is_pu() {
        let x = PolyMatrix::delay_diag(2, 1).unwrap().matmul(&h2()).unwrap();
        assert!(is_pu(&x).unwrap());
        let acc = accf_sum_matrix(&x).unwrap();
        assert_eq!(acc.get(1, 1).coeff(0).to_integer(), Some(2));
    }

    #[test]
    fn matrix_form_matches_paraconjugate_product() {
        let x = PolyMatrix::new(
            2,
            3,
            ["++-", "+-+", "--+", "+++", "-+-", "++-"]
                .map(signs)
                .to_vec(),
        )
        .unwrap();
        let acc = accf_sum_matrix(&x).unwrap();
        assert_eq!(acc.to_polymatrix().unwrap(), x.tilde().matmul(&x).unwrap());
        for mu in 0..3 {
            for nu in 0..3 {
                let direct = accf_sum(&x.column(mu), &x.column(nu)).unwrap();
                assert_eq!(acc.get(mu, nu), &direct);
            }
        }
    }

    #[test]
    fn zone_bounds_are_checked() {
        let x = PolyMatrix::new(1, 1, vec![signs("++-")]).unwrap();
        assert!(matches!(is_zpu(&x, 0), Err(Error::ZoneOutOfRange { .. })));
        assert!(matches!(is_zpu(&x, 4), Err(Error::ZoneOutOfRange { .. })));
        assert!(is_zpu(&x, 1).unwrap());
    }

    #[test]
    fn optimality_refuses_non_unimodular() {
        let x = PolyMatrix::delay_diag(2, 1).unwrap();
        assert!(matches!(check_optimal(&x), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn mate_and_zcc_on_a_golay_pair() {
        let (a, b) = (signs("++"), signs("+-"));
        assert!(is_zcc(&[&a, &b], 2).unwrap());
        let (c, d) = (signs("-+"), signs("--"));
        assert!(is_z_mate(&[&a, &b], &[&c, &d], 2).unwrap());
        assert!(!is_z_mate(&[&a, &b], &[&a, &b], 1).unwrap());
    }
}
