//! Laurent polynomials in z⁻¹ with cyclotomic coefficients, and matrices of them.
//!
//! A [`LaurentPoly`] maps a delay d to the coefficient of z^{-d}. Terms are
//! kept sparse and sorted, since construction intermediates such as delay
//! diagonals and substituted matrices are mostly monomials. Products go
//! through a dense flat accumulator with a fast path for monomial
//! coefficients, which is the common case for unimodular codes.

use std::fmt;

use rayon::prelude::*;

use crate::cyclotomic::{coeffs_are_zero, common_modulus, CycInt, RootScalar};
use crate::error::{Error, Result};

/// A finitely supported Laurent polynomial Σ_d c_d·z^{-d}.
#[derive(Debug, Clone)]
pub struct LaurentPoly {
    modulus: u32,
    terms: Vec<(i64, CycInt)>,
}

impl LaurentPoly {
    pub fn zero(modulus: u32) -> Self {
        Self {
            modulus,
            terms: Vec::new(),
        }
    }

    pub fn constant(value: CycInt) -> Self {
        Self::monomial(0, value)
    }

    /// value·z^{-delay}.
    pub fn monomial(delay: i64, value: CycInt) -> Self {
        let modulus = value.modulus();
        let terms = if value.is_zero() {
            Vec::new()
        } else {
            vec![(delay, value)]
        };
        Self { modulus, terms }
    }

    /// Collects terms, merging repeated delays and dropping zeros.
    pub fn from_terms(
        modulus: u32,
        terms: impl IntoIterator<Item = (i64, CycInt)>,
    ) -> Result<Self> {
        let mut raw: Vec<(i64, CycInt)> = terms
            .into_iter()
            .map(|(d, c)| Ok((d, c.lift(modulus)?)))
            .collect::<Result<_>>()?;
        raw.sort_by_key(|(d, _)| *d);
        let mut out: Vec<(i64, CycInt)> = Vec::with_capacity(raw.len());
        for (d, c) in raw {
            match out.last_mut() {
                Some((ld, lc)) if *ld == d => *lc = lc.checked_add(&c)?,
                _ => out.push((d, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Ok(Self {
            modulus,
            terms: out,
        })
    }

    /// The z-transform Σ_k ω_q^{e_k}·z^{-k} of a unimodular sequence.
    pub fn from_sequence(modulus: u32, exponents: &[u32]) -> Result<Self> {
        let terms = exponents
            .iter()
            .enumerate()
            .map(|(k, &e)| Ok((k as i64, RootScalar::new(modulus, e as u64)?.to_cyc())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { modulus, terms })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Nonzero terms sorted by delay.
    pub fn terms(&self) -> &[(i64, CycInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of z^{-delay}.
    pub fn coeff(&self, delay: i64) -> CycInt {
        match self.terms.binary_search_by_key(&delay, |(d, _)| *d) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => CycInt::from_coeffs_unchecked(self.modulus, vec![0; self.modulus as usize]),
        }
    }

    pub fn min_delay(&self) -> Option<i64> {
        self.terms.first().map(|(d, _)| *d)
    }

    pub fn max_delay(&self) -> Option<i64> {
        self.terms.last().map(|(d, _)| *d)
    }

    pub fn l1_norm(&self) -> u128 {
        self.terms.iter().map(|(_, c)| c.l1_norm()).sum()
    }

    pub fn lift(&self, target: u32) -> Result<Self> {
        if target == self.modulus {
            return Ok(self.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(d, c)| Ok((*d, c.lift(target)?)))
            .collect::<Result<_>>()?;
        Ok(Self {
            modulus: target,
            terms,
        })
    }

    /// Conjugates every coefficient; delays are unchanged.
    pub fn conj(&self) -> Self {
        Self {
            modulus: self.modulus,
            terms: self.terms.iter().map(|(d, c)| (*d, c.conj())).collect(),
        }
    }

    /// Negates every delay: p(z) ↦ p(z⁻¹).
    pub fn reflect(&self) -> Self {
        Self {
            modulus: self.modulus,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(d, c)| (-d, c.clone()))
                .collect(),
        }
    }

    /// Scalar paraconjugate p*(z⁻¹).
    pub fn tilde(&self) -> Self {
        Self {
            modulus: self.modulus,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(d, c)| (-d, c.conj()))
                .collect(),
        }
    }

    /// p(z^t): every delay d becomes d·t.
    pub fn substitute(&self, t: u64) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidArgument(
                "substitution power must be at least 1".into(),
            ));
        }
        let terms = self
            .terms
            .iter()
            .map(|(d, c)| {
                d.checked_mul(t as i64)
                    .map(|nd| (nd, c.clone()))
                    .ok_or_else(|| Error::InvalidArgument("delay overflow in substitution".into()))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            modulus: self.modulus,
            terms,
        })
    }

    /// z^{-shift}·p(z).
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            modulus: self.modulus,
            terms: self
                .terms
                .iter()
                .map(|(d, c)| (d + shift, c.clone()))
                .collect(),
        }
    }

    /// Keeps the terms whose delay satisfies the predicate.
    pub fn filter_delays(&self, keep: impl Fn(i64) -> bool) -> Self {
        Self {
            modulus: self.modulus,
            terms: self
                .terms
                .iter()
                .filter(|(d, _)| keep(*d))
                .cloned()
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            modulus: self.modulus,
            terms: self.terms.iter().map(|(d, c)| (*d, c.neg())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let q = common_modulus(self.modulus, other.modulus)?;
        Self::from_terms(q, self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        sum_of_products(&[(self, other)])
    }

    /// Coefficient exponents of a unimodular sequence occupying delays [0, len).
    pub fn sequence_exponents(&self, len: usize) -> Result<Vec<u32>> {
        if self.terms.len() != len
            || self.min_delay().unwrap_or(0) != 0
            || self.max_delay().map_or(0, |d| d + 1) != len as i64
        {
            return Err(Error::NotUnimodular(format!(
                "entry support is not the contiguous range [0, {len})"
            )));
        }
        self.terms
            .iter()
            .map(|(d, c)| {
                c.as_root().map(|r| r.exponent()).ok_or_else(|| {
                    Error::NotUnimodular(format!(
                        "coefficient {c} at delay {d} is not a root of unity"
                    ))
                })
            })
            .collect()
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((da, ca), (db, cb))| da == db && ca == cb)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            let power = -d;
            let (neg, body) = match c.to_integer() {
                Some(n) => (n < 0, n.unsigned_abs().to_string()),
                None => (false, format!("({})", strip_modulus(&c.to_string()))),
            };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let body = if body == "1" && power != 0 {
                String::new()
            } else {
                body
            };
            match power {
                0 => write!(f, "{body}")?,
                1 => write!(f, "{body}z")?,
                p => write!(f, "{body}z^{p}")?,
            }
        }
        Ok(())
    }
}

fn strip_modulus(s: &str) -> &str {
    s.rsplit_once(" (q=").map_or(s, |(head, _)| head)
}

/// Coefficient layout used inside product accumulation.
struct Expanded {
    monos: Vec<(i64, usize, i64)>,
    general: Vec<(i64, Vec<i64>)>,
    l1: u128,
}

impl Expanded {
    fn new(p: &LaurentPoly) -> Self {
        let mut monos = Vec::new();
        let mut general = Vec::new();
        for (d, c) in &p.terms {
            match c.as_monomial() {
                Some((e, v)) => monos.push((*d, e as usize, v)),
                None => general.push((*d, c.coeffs().to_vec())),
            }
        }
        Self {
            monos,
            general,
            l1: p.l1_norm(),
        }
    }
}

fn accumulate(acc: &mut [i64], q: usize, lo: i64, a: &Expanded, b: &Expanded) {
    for &(da, ea, ca) in &a.monos {
        for &(db, eb, cb) in &b.monos {
            let e = ea + eb;
            let e = if e >= q { e - q } else { e };
            acc[(da + db - lo) as usize * q + e] += ca * cb;
        }
    }
    let mut general_pair = |da: i64, ca: &[i64], db: i64, cb: &[i64]| {
        let base = (da + db - lo) as usize * q;
        for (i, &x) in ca.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, &y) in cb.iter().enumerate().filter(|(_, y)| **y != 0) {
                acc[base + (i + j) % q] += x * y;
            }
        }
    };
    let mono_coeffs = |e: usize, c: i64| {
        let mut v = vec![0; q];
        v[e] = c;
        v
    };
    for (da, ca) in &a.general {
        for (db, cb) in &b.general {
            general_pair(*da, ca, *db, cb);
        }
        for &(db, eb, cb) in &b.monos {
            general_pair(*da, ca, db, &mono_coeffs(eb, cb));
        }
    }
    for &(da, ea, ca) in &a.monos {
        for (db, cb) in &b.general {
            general_pair(da, &mono_coeffs(ea, ca), *db, cb);
        }
    }
}

fn accumulate_expanded(q: u32, pairs: &[(&Expanded, &Expanded, i64, i64)]) -> Result<LaurentPoly> {
    let live: Vec<_> = pairs
        .iter()
        .filter(|(a, b, ..)| a.l1 > 0 && b.l1 > 0)
        .collect();
    if live.is_empty() {
        return Ok(LaurentPoly::zero(q));
    }
    let bound: u128 = live
        .iter()
        .map(|(a, b, ..)| a.l1.saturating_mul(b.l1))
        .sum();
    if bound > i64::MAX as u128 {
        return Err(Error::CoefficientOverflow("polynomial product"));
    }
    let lo = live.iter().map(|(.., lo, _)| *lo).min().unwrap();
    let hi = live.iter().map(|(.., hi)| *hi).max().unwrap();
    let qs = q as usize;
    let span = (hi - lo + 1) as usize;
    let mut acc = vec![0i64; span * qs];
    for (a, b, ..) in live {
        accumulate(&mut acc, qs, lo, a, b);
    }
    let terms = acc
        .chunks_exact(qs)
        .enumerate()
        .filter(|(_, c)| !coeffs_are_zero(q, c))
        .map(|(i, c)| (lo + i as i64, CycInt::from_coeffs_unchecked(q, c.to_vec())))
        .collect();
    Ok(LaurentPoly { modulus: q, terms })
}

fn delay_range(a: &LaurentPoly, b: &LaurentPoly) -> (i64, i64) {
    match (a.min_delay(), b.min_delay()) {
        (Some(amin), Some(bmin)) => (amin + bmin, a.max_delay().unwrap() + b.max_delay().unwrap()),
        _ => (0, 0),
    }
}

/// Σ_i a_i·b_i evaluated exactly into a single accumulator.
pub fn sum_of_products(pairs: &[(&LaurentPoly, &LaurentPoly)]) -> Result<LaurentPoly> {
    let q = pairs.iter().try_fold(1u32, |q, (a, b)| {
        common_modulus(common_modulus(q, a.modulus)?, b.modulus)
    })?;
    let lifted: Vec<(LaurentPoly, LaurentPoly)> = pairs
        .iter()
        .map(|(a, b)| Ok((a.lift(q)?, b.lift(q)?)))
        .collect::<Result<_>>()?;
    let expanded: Vec<(Expanded, Expanded, i64, i64)> = lifted
        .iter()
        .map(|(a, b)| {
            let (lo, hi) = delay_range(a, b);
            (Expanded::new(a), Expanded::new(b), lo, hi)
        })
        .collect();
    let refs: Vec<_> = expanded
        .iter()
        .map(|(a, b, lo, hi)| (a, b, *lo, *hi))
        .collect();
    accumulate_expanded(q, &refs)
}

/// An M×K matrix of Laurent polynomials over a shared modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    modulus: u32,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    /// Builds a matrix from row-major entries, lifting them to the lcm of their moduli.
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let modulus = entries
            .iter()
            .try_fold(1u32, |q, e| common_modulus(q, e.modulus))?;
        let entries = entries
            .into_iter()
            .map(|e| e.lift(modulus))
            .collect::<Result<_>>()?;
        Ok(Self {
            rows,
            cols,
            modulus,
            entries,
        })
    }

    /// A constant matrix of roots of unity, row-major.
    pub fn from_roots(rows: usize, cols: usize, roots: &[RootScalar]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            roots
                .iter()
                .map(|r| LaurentPoly::constant(r.to_cyc()))
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::delay_diag(n, 0)
    }

    /// The all-ones 1×n row 1_n.
    pub fn ones_row(n: usize) -> Result<Self> {
        let one = CycInt::from_int(1, 1)?;
        Self::new(1, n, vec![LaurentPoly::constant(one); n])
    }

    /// diag(1, z^{-step}, …, z^{-(k-1)·step}); step 0 yields the identity.
    pub fn delay_diag(k: usize, step: u64) -> Result<Self> {
        let one = CycInt::from_int(1, 1)?;
        let mut entries = vec![LaurentPoly::zero(1); k * k];
        for i in 0..k {
            entries[i * k + i] = LaurentPoly::monomial(i as i64 * step as i64, one.clone());
        }
        Self::new(k, k, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn get(&self, row: usize, col: usize) -> &LaurentPoly {
        &self.entries[row * self.cols + col]
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn column(&self, col: usize) -> Vec<&LaurentPoly> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn max_delay(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.max_delay()).max()
    }

    pub fn min_delay(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.min_delay()).min()
    }

    pub fn lift(&self, target: u32) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.lift(target))
            .collect::<Result<_>>()?;
        Ok(Self {
            modulus: target,
            entries,
            ..*self
        })
    }

    fn map_entries(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        Self {
            entries: self.entries.iter().map(f).collect(),
            ..*self
        }
    }

    /// Paraconjugate X̃(z) = Xᴴ(z⁻¹).
    pub fn tilde(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).tilde());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            modulus: self.modulus,
            entries,
        }
    }

    /// Entrywise coefficient conjugation X*(z).
    pub fn conjugate(&self) -> Self {
        self.map_entries(LaurentPoly::conj)
    }

    /// X(z^t).
    pub fn substitute(&self, t: u64) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.substitute(t))
            .collect::<Result<_>>()?;
        Ok(Self { entries, ..*self })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let q = common_modulus(self.modulus, other.modulus)?;
        let a = self.lift(q)?;
        let b = other.lift(q)?;
        let ea: Vec<Expanded> = a.entries.par_iter().map(Expanded::new).collect();
        let eb: Vec<Expanded> = b.entries.par_iter().map(Expanded::new).collect();
        let (n, c) = (self.cols, other.cols);
        let entries = (0..self.rows * c)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / c, idx % c);
                let pairs: Vec<_> = (0..n)
                    .map(|k| {
                        let (lo, hi) = delay_range(&a.entries[i * n + k], &b.entries[k * c + j]);
                        (&ea[i * n + k], &eb[k * c + j], lo, hi)
                    })
                    .collect();
                accumulate_expanded(q, &pairs)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows: self.rows,
            cols: c,
            modulus: q,
            entries,
        })
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        let (r2, c2) = (other.rows, other.cols);
        let rows = self.rows * r2;
        let cols = self.cols * c2;
        let entries = (0..rows * cols)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / cols, idx % cols);
                self.get(i / r2, j / c2).mul(other.get(i % r2, j % c2))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols, entries)
    }

    /// Row i of the result is row perm[i] of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.rows)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for &src in perm {
            entries.extend_from_slice(&self.entries[src * self.cols..(src + 1) * self.cols]);
        }
        Ok(Self { entries, ..*self })
    }

    /// Column j of the result is column perm[j] of `self`.
    pub fn permute_cols(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.cols)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for r in 0..self.rows {
            for &src in perm {
                entries.push(self.get(r, src).clone());
            }
        }
        Ok(Self { entries, ..*self })
    }

    /// Dense exponent grid, valid when every entry is a unimodular sequence on [0, L).
    pub fn to_time_domain(&self) -> Result<CodeGrid> {
        let length = self
            .max_delay()
            .map(|d| d + 1)
            .filter(|&l| l > 0)
            .ok_or_else(|| Error::NotUnimodular("matrix has no causal support".into()))?
            as usize;
        let mut exponents = Vec::with_capacity(self.rows * self.cols * length);
        for k in 0..self.cols {
            for m in 0..self.rows {
                let seq = self
                    .get(m, k)
                    .sequence_exponents(length)
                    .map_err(|e| match e {
                        Error::NotUnimodular(msg) => {
                            Error::NotUnimodular(format!("entry ({m}, {k}): {msg}"))
                        }
                        other => other,
                    })?;
                exponents.extend(seq);
            }
        }
        Ok(CodeGrid {
            modulus: self.modulus,
            rows: self.rows,
            cols: self.cols,
            length,
            exponents,
        })
    }

    pub fn from_time_domain(grid: &CodeGrid) -> Result<Self> {
        let mut entries = Vec::with_capacity(grid.rows * grid.cols);
        for m in 0..grid.rows {
            for k in 0..grid.cols {
                entries.push(LaurentPoly::from_sequence(
                    grid.modulus,
                    grid.sequence(m, k),
                )?);
            }
        }
        Self::new(grid.rows, grid.cols, entries)
    }

    /// True when every entry is a unimodular sequence on a common [0, L).
    pub fn is_unimodular(&self) -> bool {
        self.to_time_domain().is_ok()
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} does not match dimension {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(format!(
                "{perm:?} is not a bijection on 0..{n}"
            )));
        }
    }
    Ok(())
}

/// Time-domain exponent table of a unimodular code set.
///
/// Indexed as (row m, column k, time l); each column k is one code of M
/// sequences, matching the table layout of a published code set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeGrid {
    pub modulus: u32,
    pub rows: usize,
    pub cols: usize,
    pub length: usize,
    exponents: Vec<u32>,
}

impl CodeGrid {
    /// `exponents` is ordered code by code: index (k·M + m)·L + l.
    pub fn new(
        modulus: u32,
        rows: usize,
        cols: usize,
        length: usize,
        exponents: Vec<u32>,
    ) -> Result<Self> {
        crate::cyclotomic::check_modulus(modulus as u64)?;
        if rows == 0 || cols == 0 || length == 0 {
            return Err(Error::InvalidArgument(format!(
                "grid dimensions must be positive, got M={rows} K={cols} L={length}"
            )));
        }
        if exponents.len() != rows * cols * length {
            return Err(Error::InvalidArgument(format!(
                "grid holds {} exponents, expected {}",
                exponents.len(),
                rows * cols * length
            )));
        }
        if let Some(e) = exponents.iter().find(|&&e| e >= modulus) {
            return Err(Error::InvalidArgument(format!(
                "exponent {e} is not below q={modulus}"
            )));
        }
        Ok(Self {
            modulus,
            rows,
            cols,
            length,
            exponents,
        })
    }

    pub fn sequence(&self, m: usize, k: usize) -> &[u32] {
        let start = (k * self.rows + m) * self.length;
        &self.exponents[start..start + self.length]
    }

    pub fn get(&self, m: usize, k: usize, l: usize) -> u32 {
        self.sequence(m, k)[l]
    }

    pub fn set(&mut self, m: usize, k: usize, l: usize, exponent: u32) {
        let idx = (k * self.rows + m) * self.length + l;
        self.exponents[idx] = exponent % self.modulus;
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Re-expresses every exponent over a multiple of the modulus.
    pub fn lift(&self, target: u32) -> Result<Self> {
        let step = RootScalar::new(self.modulus, 1)?.lift(target)?.exponent();
        Ok(Self {
            modulus: target,
            exponents: self.exponents.iter().map(|e| e * step).collect(),
            ..*self
        })
    }
}
