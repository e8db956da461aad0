//! Butson-type Hadamard matrices BH(M, q).
//!
//! A BH(M, q) matrix is an M×M matrix of q-th roots of unity with
//! Uᴴ·U = M·I. Every constructor verifies that identity exactly before
//! returning, so a [`BhMatrix`] value is always a genuine BH matrix.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{check_modulus, coeffs_are_zero, RootScalar};
use crate::error::{Error, Result};
use crate::polymat::{check_permutation, PolyMatrix};

const CATALOG: &str = "F<M> (DFT, 1 <= M <= 64), H<M> (Sylvester, M a power of 2 up to 1024), BH63 (spectral BH(6,3))";

/// A verified BH(M, q) matrix stored as row-major exponents of ω_q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BhMatrix {
    order: usize,
    phase: u32,
    exponents: Vec<u32>,
}

/// Operations that map BH matrices to BH matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum EquivOp {
    /// Row i of the result is row perm[i] of the input.
    RowPerm { perm: Vec<usize> },
    /// Column j of the result is column perm[j] of the input.
    ColPerm { perm: Vec<usize> },
    /// Multiplies one row by ω_q^exponent.
    RowScale { row: usize, exponent: u32 },
    /// Multiplies one column by ω_q^exponent.
    ColScale { col: usize, exponent: u32 },
}

/// Inline JSON form of a user-supplied matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BhGrid {
    pub q: u32,
    pub grid: Vec<Vec<u32>>,
}

impl BhMatrix {
    /// Verifies and wraps a row-major exponent grid.
    pub fn new(phase: u32, order: usize, exponents: Vec<u32>) -> Result<Self> {
        check_modulus(phase as u64)?;
        if order == 0 || exponents.len() != order * order {
            return Err(Error::NotBh(format!(
                "{} exponents do not form a nonempty {order}x{order} grid",
                exponents.len()
            )));
        }
        let exponents: Vec<u32> = exponents.into_iter().map(|e| e % phase).collect();
        let m = Self {
            order,
            phase,
            exponents,
        };
        m.verify()?;
        Ok(m)
    }

    fn verify(&self) -> Result<()> {
        let (n, q) = (self.order, self.phase as usize);
        let mut counts = vec![0i64; q];
        for j in 0..n {
            for k in j + 1..n {
                counts.iter_mut().for_each(|c| *c = 0);
                for r in 0..n {
                    let d = (self.exp(r, k) as usize + q - self.exp(r, j) as usize) % q;
                    counts[d] += 1;
                }
                if !coeffs_are_zero(self.phase, &counts) {
                    return Err(Error::NotBh(format!(
                        "columns {j} and {k} are not orthogonal"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn from_grid(grid: &BhGrid) -> Result<Self> {
        let n = grid.grid.len();
        if grid.grid.iter().any(|row| row.len() != n) {
            return Err(Error::NotBh("grid is not square".into()));
        }
        if let Some(e) = grid.grid.iter().flatten().find(|&&e| e >= grid.q) {
            return Err(Error::NotBh(format!(
                "exponent {e} is not below q={}",
                grid.q
            )));
        }
        Self::new(grid.q, n, grid.grid.concat())
    }

    pub fn to_grid(&self) -> BhGrid {
        BhGrid {
            q: self.phase,
            grid: self
                .exponents
                .chunks(self.order)
                .map(<[u32]>::to_vec)
                .collect(),
        }
    }

    /// DFT matrix F_M with entry (j, k) = ω_M^{jk}.
    pub fn dft(order: usize) -> Result<Self> {
        let q = check_modulus(order as u64)?;
        let exps = (0..order * order)
            .map(|i| ((i / order) * (i % order) % order) as u32)
            .collect();
        Self::new(q.max(1), order, exps)
    }

    /// Sylvester-Hadamard matrix of order 2^m with entry (−1)^{popcount(j & k)}.
    pub fn sylvester(m: u32) -> Result<Self> {
        if m > 10 {
            return Err(Error::InvalidArgument(format!(
                "Sylvester order 2^{m} exceeds the supported 2^10"
            )));
        }
        let n = 1usize << m;
        let exps = (0..n * n)
            .map(|i| ((i / n) & (i % n)).count_ones() % 2)
            .collect();
        Self::new(2, n, exps)
    }

    /// The spectral BH(6, 3) matrix.
    pub fn spectral_bh63() -> Self {
        #[rustfmt::skip]
        let exps = vec![
            0, 0, 0, 0, 0, 0,
            0, 0, 1, 1, 2, 2,
            0, 1, 0, 2, 2, 1,
            0, 1, 2, 0, 1, 2,
            0, 2, 2, 1, 0, 1,
            0, 2, 1, 2, 1, 0,
        ];
        Self::new(3, 6, exps).expect("spectral BH(6,3) is unitary")
    }

    /// Looks up a catalog name: `F<M>`, `H<M>` or `BH63`.
    pub fn by_name(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownBh {
            name: name.to_string(),
            catalog: CATALOG.to_string(),
        };
        let upper = name.trim().to_ascii_uppercase();
        if upper == "BH63" {
            return Ok(Self::spectral_bh63());
        }
        let (kind, digits) = upper.split_at(upper.len().min(1));
        let m: usize = digits.parse().map_err(|_| unknown())?;
        match kind {
            "F" if (1..=64).contains(&m) => Self::dft(m),
            "H" if m.is_power_of_two() && m <= 1024 => Self::sylvester(m.trailing_zeros()),
            _ => Err(unknown()),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn exp(&self, row: usize, col: usize) -> u32 {
        self.exponents[row * self.order + col]
    }

    pub fn entry(&self, row: usize, col: usize) -> RootScalar {
        RootScalar::new(self.phase, self.exp(row, col) as u64).expect("phase validated")
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// The matrix as a constant polynomial matrix over ω_q.
    pub fn to_polymatrix(&self) -> PolyMatrix {
        let roots: Vec<RootScalar> = (0..self.order * self.order)
            .map(|i| self.entry(i / self.order, i % self.order))
            .collect();
        PolyMatrix::from_roots(self.order, self.order, &roots).expect("valid constant matrix")
    }

    pub fn apply(&self, op: &EquivOp) -> Result<Self> {
        let n = self.order;
        let q = self.phase;
        let mut exps = self.exponents.clone();
        match op {
            EquivOp::RowPerm { perm } => {
                check_permutation(perm, n)?;
                for (i, &src) in perm.iter().enumerate() {
                    exps[i * n..(i + 1) * n]
                        .copy_from_slice(&self.exponents[src * n..(src + 1) * n]);
                }
            }
            EquivOp::ColPerm { perm } => {
                check_permutation(perm, n)?;
                for r in 0..n {
                    for (j, &src) in perm.iter().enumerate() {
                        exps[r * n + j] = self.exp(r, src);
                    }
                }
            }
            EquivOp::RowScale { row, exponent } => {
                self.check_index(*row)?;
                for e in &mut exps[row * n..(row + 1) * n] {
                    *e = (*e + exponent % q) % q;
                }
            }
            EquivOp::ColScale { col, exponent } => {
                self.check_index(*col)?;
                for r in 0..n {
                    exps[r * n + col] = (exps[r * n + col] + exponent % q) % q;
                }
            }
        }
        Self::new(q, n, exps)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.order {
            return Err(Error::InvalidArgument(format!(
                "index {i} out of range for order {}",
                self.order
            )));
        }
        Ok(())
    }

    /// Scales rows and then columns so the first column and first row are all ones.
    pub fn normalize(&self) -> Result<Self> {
        let q = self.phase;
        let mut m = self.clone();
        for r in 0..self.order {
            let e = m.exp(r, 0);
            if e != 0 {
                m = m.apply(&EquivOp::RowScale {
                    row: r,
                    exponent: q - e,
                })?;
            }
        }
        for c in 0..self.order {
            let e = m.exp(0, c);
            if e != 0 {
                m = m.apply(&EquivOp::ColScale {
                    col: c,
                    exponent: q - e,
                })?;
            }
        }
        Ok(m)
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.order).all(|i| self.exp(i, 0) == 0 && self.exp(0, i) == 0)
    }
}

/// Whether a BH(M, q) matrix is listed as known to exist for M ≤ 19.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Existence {
    Known,
    Unknown,
}

const EXISTENCE: &[(usize, &[u32])] = &[
    (2, &[2, 6]),
    (3, &[3, 6]),
    (4, &[2, 4, 6]),
    (5, &[5]),
    (6, &[3, 4, 6]),
    (7, &[6, 7]),
    (8, &[2, 4, 6, 8]),
    (9, &[3, 6, 9]),
    (10, &[4, 5, 6, 10]),
    (11, &[11]),
    (12, &[2, 3, 4, 6, 12]),
    (13, &[6, 13]),
    (14, &[4, 6, 7, 10, 14]),
    (15, &[15]),
    (16, &[2, 4, 6, 8, 16]),
    (17, &[17]),
    (18, &[6, 18]),
    (19, &[6, 19]),
];

/// Advisory existence data for small orders; absence does not rule a matrix out.
pub fn existence_lookup(order: usize, phase: u32) -> Existence {
    let listed = EXISTENCE
        .iter()
        .any(|(m, qs)| *m == order && qs.contains(&phase));
    if listed {
        Existence::Known
    } else {
        Existence::Unknown
    }
}
