//! Generators for PU and ZPU matrices.
//!
//! * [`pu_recursive`] builds M×M PU matrices of length P^N by repeatedly
//!   interleaving delayed BH stages.
//! * [`unifying_construct`] combines a K×K PU matrix with an M×M PU matrix
//!   into an M×K ZPU matrix of width M, interleaving or concatenating the
//!   component sequences.
//! * [`seed_zpu`] is the optimal special case built from two BH matrices.
//! * [`extend_zcz`] multiplies both the length and the zone width of a ZPU
//!   matrix by M.
//!
//! [`catalog_families`] chains the last two and verifies every member.

use rayon::prelude::*;
use serde::Serialize;

use crate::bh::BhMatrix;
use crate::correlation::{check_optimal, is_pu, is_zpu};
use crate::error::{Error, Result};
use crate::polymat::{check_permutation, PolyMatrix};

/// Parameters of the recursive PU generator.
///
/// Stage n (1-based) computes
/// G_n = (I_{M/P}⊗A_n)·(I_{M/P}⊗diag(1, z⁻¹, …, z^{-(P-1)}))(z^{P^{π(n-1)}})·P_n·G_{n-1}·Q_n
/// starting from G_0 = U_0. Permutation matrices are given as index maps:
/// row i of P_n·G is row `row_perms[n-1][i]` of G, and column j of G·Q_n is
/// column `col_perms[n-1][j]` of G. Omitted maps default to the identity.
#[derive(Debug, Clone)]
pub struct PuRecipe {
    pub p: usize,
    pub stages: Vec<BhMatrix>,
    pub u0: BhMatrix,
    pub pi: Option<Vec<usize>>,
    pub row_perms: Option<Vec<Vec<usize>>>,
    pub col_perms: Option<Vec<Vec<usize>>>,
}

impl PuRecipe {
    /// N identical stages with identity permutations.
    pub fn uniform(a: BhMatrix, u0: BhMatrix, n: usize) -> Self {
        Self {
            p: a.order(),
            stages: vec![a; n],
            u0,
            pi: None,
            row_perms: None,
            col_perms: None,
        }
    }

    fn validate(&self) -> Result<()> {
        let m = self.u0.order();
        if self.p == 0 || !m.is_multiple_of(self.p) {
            return Err(Error::Precondition(format!(
                "P={} does not divide M={m}",
                self.p
            )));
        }
        if let Some(a) = self.stages.iter().find(|a| a.order() != self.p) {
            return Err(Error::Precondition(format!(
                "stage matrix has order {}, expected P={}",
                a.order(),
                self.p
            )));
        }
        let n = self.stages.len();
        if let Some(pi) = &self.pi {
            check_permutation(pi, n)?;
        }
        for perms in [&self.row_perms, &self.col_perms].into_iter().flatten() {
            if perms.len() != n {
                return Err(Error::InvalidPermutation(format!(
                    "{} permutations supplied for {n} stages",
                    perms.len()
                )));
            }
            for perm in perms {
                check_permutation(perm, m)?;
            }
        }
        Ok(())
    }
}

fn block_diag_repeat(a: &PolyMatrix, copies: usize) -> Result<PolyMatrix> {
    PolyMatrix::identity(copies)?.kron(a)
}

/// M×M PU matrix of length P^N from the recursive generator.
pub fn pu_recursive(r: &PuRecipe) -> Result<PolyMatrix> {
    r.validate()?;
    let m = r.u0.order();
    let blocks = m / r.p;
    let mut g = r.u0.to_polymatrix();
    for (idx, a) in r.stages.iter().enumerate() {
        let power = r.pi.as_ref().map_or(idx, |pi| pi[idx]);
        let step = (r.p as u64)
            .checked_pow(power as u32)
            .ok_or_else(|| Error::InvalidArgument("stage delay overflows".into()))?;
        let u = block_diag_repeat(&a.to_polymatrix(), blocks)?;
        let d = block_diag_repeat(&PolyMatrix::delay_diag(r.p, step)?, blocks)?;
        if let Some(perms) = &r.row_perms {
            g = g.permute_rows(&perms[idx])?;
        }
        if let Some(perms) = &r.col_perms {
            g = g.permute_cols(&perms[idx])?;
        }
        g = u.matmul(&d)?.matmul(&g)?;
    }
    Ok(g)
}

/// How the K×K component sequences are laid out in the unifying construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnifyingMode {
    /// (1_P⊗G¹(z^{K·L₀}))·D_K(z)·G⁰(z^K): component sequences are interleaved.
    Interleave,
    /// (1_P⊗G¹(z^{K·L₀}))·D_K(z^{L₀})·G⁰(z): component sequences are concatenated.
    Concatenate,
}

/// Sequence length of a causal matrix: one past the largest delay.
pub fn causal_length(x: &PolyMatrix) -> Result<usize> {
    match (x.min_delay(), x.max_delay()) {
        (Some(lo), Some(hi)) if lo >= 0 => Ok(hi as usize + 1),
        _ => Err(Error::Precondition(
            "matrix is not causal with nonzero support".into(),
        )),
    }
}

fn require_pu(x: &PolyMatrix, what: &str) -> Result<()> {
    if !is_pu(x)? {
        return Err(Error::Precondition(format!("{what} is not paraunitary")));
    }
    Ok(())
}

fn require_zpu(x: &PolyMatrix, z: usize, what: &str) -> Result<()> {
    if !is_zpu(x, z)? {
        return Err(Error::Precondition(format!("{what} is not ZPU at Z={z}")));
    }
    Ok(())
}

/// M×K ZPU matrix of length K·L₀·L₁ and zone width M from a K×K PU matrix
/// `g0` and an M×M PU matrix `g1`.
pub fn unifying_construct(
    g0: &PolyMatrix,
    g1: &PolyMatrix,
    mode: UnifyingMode,
) -> Result<PolyMatrix> {
    let (k, m) = (g0.rows(), g1.rows());
    if g0.cols() != k || g1.cols() != m {
        return Err(Error::Precondition(
            "both component matrices must be square".into(),
        ));
    }
    if k % m != 0 {
        return Err(Error::Precondition(format!("M={m} does not divide K={k}")));
    }
    require_pu(g0, "G0")?;
    require_pu(g1, "G1")?;
    let l0 = causal_length(g0)? as u64;
    causal_length(g1)?;
    let p = k / m;
    let outer = PolyMatrix::ones_row(p)?.kron(&g1.substitute(k as u64 * l0)?)?;
    let (delay, inner) = match mode {
        UnifyingMode::Interleave => (PolyMatrix::delay_diag(k, 1)?, g0.substitute(k as u64)?),
        UnifyingMode::Concatenate => (PolyMatrix::delay_diag(k, l0)?, g0.clone()),
    };
    outer.matmul(&delay)?.matmul(&inner)
}

/// (1_P⊗U_M)·D_K(z)·U_K: an optimal M×K ZPU matrix of length K and width M.
pub fn seed_zpu(um: &BhMatrix, uk: &BhMatrix) -> Result<PolyMatrix> {
    let (m, k) = (um.order(), uk.order());
    if k % m != 0 {
        return Err(Error::Precondition(format!("M={m} does not divide K={k}")));
    }
    PolyMatrix::ones_row(k / m)?
        .kron(&um.to_polymatrix())?
        .matmul(&PolyMatrix::delay_diag(k, 1)?)?
        .matmul(&uk.to_polymatrix())
}

/// U_M·D_M(z)·G(z^M) for a ZPU matrix G at width Z; the result has length
/// M·L and width M·Z.
pub fn extend_zcz(um: &BhMatrix, g: &PolyMatrix, z: usize) -> Result<PolyMatrix> {
    let m = um.order();
    if g.rows() != m {
        return Err(Error::DimensionMismatch {
            op: "extend_zcz",
            left_rows: m,
            left_cols: m,
            right_rows: g.rows(),
            right_cols: g.cols(),
        });
    }
    require_zpu(g, z, "input")?;
    um.to_polymatrix()
        .matmul(&PolyMatrix::delay_diag(m, 1)?)?
        .matmul(&g.substitute(m as u64)?)
}

/// X·Y for a PU matrix X and a ZPU matrix Y at width Z.
pub fn zpu_product(x: &PolyMatrix, y: &PolyMatrix, z: usize) -> Result<PolyMatrix> {
    require_pu(x, "left factor")?;
    require_zpu(y, z, "right factor")?;
    x.matmul(y)
}

/// X⊗Y for a ZPU matrix X at width Z and a PU matrix Y.
pub fn zpu_kron(x: &PolyMatrix, y: &PolyMatrix, z: usize) -> Result<PolyMatrix> {
    require_zpu(x, z, "left factor")?;
    require_pu(y, "right factor")?;
    x.kron(y)
}

/// BH names for the seed of one catalog family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeedChoice {
    pub um: String,
    pub uk: String,
}

impl SeedChoice {
    pub fn new(um: &str, uk: &str) -> Self {
        Self {
            um: um.to_string(),
            uk: uk.to_string(),
        }
    }
}

/// Seeds enumerated by default.
pub fn default_seeds() -> Vec<SeedChoice> {
    [("H2", "H4"), ("F3", "BH63"), ("H4", "H8"), ("F3", "F6")]
        .into_iter()
        .map(|(a, b)| SeedChoice::new(a, b))
        .collect()
}

/// One verified member of a seed-and-extend family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogRow {
    pub m: usize,
    pub k: usize,
    pub l: usize,
    pub z: usize,
    pub q: u32,
    pub energy: i64,
    pub optimal: bool,
    pub seed: SeedChoice,
    pub extensions: usize,
    pub command: String,
}

fn reproduction_command(seed: &SeedChoice, extensions: usize) -> String {
    let base = format!("zccs construct seed --um {} --uk {}", seed.um, seed.uk);
    match extensions {
        0 => base,
        n => format!(
            "{base} | zccs construct extend --um {} --seed - --repeat {n}",
            seed.um
        ),
    }
}

fn family(seed: &SeedChoice, max_l: usize) -> Result<Vec<CatalogRow>> {
    let um = BhMatrix::by_name(&seed.um)?;
    let uk = BhMatrix::by_name(&seed.uk)?;
    let mut rows = Vec::new();
    let mut g = seed_zpu(&um, &uk)?;
    let mut z = um.order();
    let mut extensions = 0;
    while causal_length(&g)? <= max_l {
        let report = check_optimal(&g)?;
        rows.push(CatalogRow {
            m: report.rows,
            k: report.cols,
            l: report.length,
            z: report.zcz_width,
            q: report.modulus,
            energy: report.energy.to_integer().unwrap_or(0),
            optimal: report.optimal,
            seed: seed.clone(),
            extensions,
            command: reproduction_command(seed, extensions),
        });
        if causal_length(&g)? * um.order() > max_l {
            break;
        }
        g = extend_zcz(&um, &g, z)?;
        z *= um.order();
        extensions += 1;
    }
    Ok(rows)
}

/// Every member of each seed family with length at most `max_l`, each
/// constructed and verified, ordered by (M, K, L).
pub fn catalog_families(max_l: usize, seeds: &[SeedChoice]) -> Result<Vec<CatalogRow>> {
    let mut rows: Vec<CatalogRow> = seeds
        .par_iter()
        .map(|s| family(s, max_l))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    rows.sort_by(|a, b| {
        (a.m, a.k, a.l, a.q, &a.seed.um, &a.seed.uk)
            .cmp(&(b.m, b.k, b.l, b.q, &b.seed.um, &b.seed.uk))
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::zcz_width;

    fn bh(name: &str) -> BhMatrix {
        BhMatrix::by_name(name).unwrap()
    }

    #[test]
    fn zero_stages_returns_u0() {
        let g = pu_recursive(&PuRecipe::uniform(bh("H2"), bh("BH63"), 0)).unwrap();
        assert_eq!(g, bh("BH63").to_polymatrix());
    }

    #[test]
    fn binary_recursive_pu() {
        let g = pu_recursive(&PuRecipe::uniform(bh("H2"), bh("H2"), 2)).unwrap();
        assert_eq!(causal_length(&g).unwrap(), 4);
        let report = check_optimal(&g).unwrap();
        assert!(report.is_pu);
        assert_eq!(report.energy.to_integer(), Some(8));
    }

    #[test]
    fn recipe_validation() {
        let bad = PuRecipe::uniform(bh("F3"), bh("H4"), 1);
        assert!(matches!(pu_recursive(&bad), Err(Error::Precondition(_))));
        let mut r = PuRecipe::uniform(bh("H2"), bh("H4"), 2);
        r.pi = Some(vec![0, 0]);
        assert!(matches!(
            pu_recursive(&r),
            Err(Error::InvalidPermutation(_))
        ));
    }

    #[test]
    fn seed_requires_divisibility() {
        assert!(matches!(
            seed_zpu(&bh("F3"), &bh("H4")),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn square_seed_is_pu() {
        let g = seed_zpu(&bh("H2"), &bh("H2")).unwrap();
        assert_eq!(causal_length(&g).unwrap(), 2);
        assert!(is_pu(&g).unwrap());
    }

    #[test]
    fn corollary_with_single_block_is_pu() {
        let g = pu_recursive(&PuRecipe::uniform(bh("H2"), bh("H2"), 1)).unwrap();
        for mode in [UnifyingMode::Interleave, UnifyingMode::Concatenate] {
            let x = unifying_construct(&g, &g, mode).unwrap();
            assert_eq!(causal_length(&x).unwrap(), 8);
            assert!(is_pu(&x).unwrap(), "{mode:?}");
        }
    }

    #[test]
    fn unifying_rejects_non_pu() {
        let g0 = seed_zpu(&bh("H2"), &bh("H4")).unwrap();
        let g1 = PolyMatrix::identity(2).unwrap();
        assert!(unifying_construct(&g0, &g1, UnifyingMode::Interleave).is_err());
    }

    #[test]
    fn extension_checks_its_input() {
        let g = seed_zpu(&bh("H2"), &bh("H4")).unwrap();
        assert!(matches!(
            extend_zcz(&bh("H2"), &g, 3),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            extend_zcz(&bh("F3"), &g, 2),
            Err(Error::DimensionMismatch { .. })
        ));
        let e = extend_zcz(&bh("H2"), &g, 2).unwrap();
        assert_eq!(zcz_width(&e).unwrap(), 4);
    }

    #[test]
    fn identity_and_unit_factors() {
        let y = seed_zpu(&bh("H2"), &bh("H4")).unwrap();
        assert_eq!(
            zpu_product(&PolyMatrix::identity(2).unwrap(), &y, 2).unwrap(),
            y
        );
        let one = PolyMatrix::identity(1).unwrap();
        assert_eq!(zpu_kron(&y, &one, 2).unwrap(), y);
    }

    #[test]
    fn small_catalog() {
        let rows = catalog_families(10, &default_seeds()).unwrap();
        let shape: Vec<_> = rows.iter().map(|r| (r.m, r.k, r.l, r.z)).collect();
        assert_eq!(
            shape,
            vec![
                (2, 4, 4, 2),
                (2, 4, 8, 4),
                (3, 6, 6, 3),
                (3, 6, 6, 3),
                (4, 8, 8, 4)
            ]
        );
        assert!(rows.iter().all(|r| r.optimal));
        assert_eq!(
            rows[1].command,
            "zccs construct seed --um H2 --uk H4 | zccs construct extend --um H2 --seed - --repeat 1"
        );
    }
}
