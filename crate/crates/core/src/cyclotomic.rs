//! Exact arithmetic over the ring Z[ω_q] of cyclotomic integers.
//!
//! Every sequence entry in this crate is a root of unity ω_q^e with
//! ω_q = exp(-2πi/q), and every correlation value is an integer combination
//! of such roots. [`CycInt`] stores that combination as a length-q integer
//! vector. The representation is not unique (1 + ω_3 + ω_3² = 0), so zero
//! tests and equality reduce modulo the q-th cyclotomic polynomial Φ_q.
//!
//! Moduli are capped at [`MAX_MODULUS`].

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported phase modulus.
pub const MAX_MODULUS: u32 = 64;

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Validates a modulus against the supported range.
pub fn check_modulus(q: u64) -> Result<u32> {
    if q == 0 || q > MAX_MODULUS as u64 {
        return Err(Error::ModulusOutOfRange(q));
    }
    Ok(q as u32)
}

/// Least common multiple of two moduli, rejected if it leaves the supported range.
pub fn common_modulus(a: u32, b: u32) -> Result<u32> {
    check_modulus(lcm(a as u64, b as u64))
}

/// Exact quotient of `num` by the monic polynomial `den` (coefficients low to high).
fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "division was not exact");
    quot
}

fn compute_cyclotomic(q: u32) -> Vec<i64> {
    let mut poly = vec![0i64; q as usize + 1];
    poly[0] = -1;
    poly[q as usize] = 1;
    for d in 1..q {
        if q.is_multiple_of(d) {
            poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    poly
}

fn cyclotomic_table() -> &'static [Vec<i64>] {
    static TABLE: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: Vec<Vec<i64>> = vec![Vec::new()];
        for q in 1..=MAX_MODULUS {
            let mut poly = vec![0i64; q as usize + 1];
            poly[0] = -1;
            poly[q as usize] = 1;
            for d in 1..q {
                if q % d == 0 {
                    poly = exact_div_monic(&poly, &table[d as usize]);
                }
            }
            table.push(poly);
        }
        table
    })
}

/// Coefficients (constant term first) of the q-th cyclotomic polynomial Φ_q.
///
/// Computed by exact division of x^q − 1 by Φ_d for every proper divisor d.
/// Values for q up to [`MAX_MODULUS`] are cached.
///
/// # Panics
///
/// Panics if `q == 0`.
pub fn cyclotomic_polynomial(q: u32) -> Vec<i64> {
    assert!(q > 0, "cyclotomic_polynomial: q must be positive");
    if q <= MAX_MODULUS {
        cyclotomic_table()[q as usize].clone()
    } else {
        compute_cyclotomic(q)
    }
}

fn with_cyclotomic<R>(q: u32, f: impl FnOnce(&[i64]) -> R) -> R {
    if q <= MAX_MODULUS {
        f(&cyclotomic_table()[q as usize])
    } else {
        f(&compute_cyclotomic(q))
    }
}

/// Remainder of Σ coeffs[j]·x^j modulo Φ_q, of length deg Φ_q.
fn remainder_mod_phi(q: u32, coeffs: &[i64]) -> Vec<i128> {
    with_cyclotomic(q, |phi| {
        let deg = phi.len() - 1;
        let mut rem: Vec<i128> = coeffs.iter().map(|&c| c as i128).collect();
        for i in (deg..rem.len()).rev() {
            let c = rem[i];
            if c != 0 {
                for (j, &p) in phi.iter().enumerate() {
                    rem[i - deg + j] -= c * p as i128;
                }
            }
        }
        rem.truncate(deg);
        rem
    })
}

/// Zero test for a length-q coefficient vector, by reduction modulo Φ_q.
pub(crate) fn coeffs_are_zero(q: u32, coeffs: &[i64]) -> bool {
    if coeffs.iter().all(|&c| c == 0) {
        return true;
    }
    match q {
        1 => false,
        2 => coeffs[0] == coeffs[1],
        _ if is_prime(q) => coeffs.iter().all(|&c| c == coeffs[0]),
        _ => remainder_mod_phi(q, coeffs).iter().all(|&r| r == 0),
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn omega_pow(q: u32, e: u32) -> Complex64 {
    let theta = -2.0 * std::f64::consts::PI * (e as f64) / (q as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// A q-th root of unity ω_q^e, stored as its exponent.
///
/// Equality is structural: ω_2^1 and ω_6^3 are the same complex number but
/// compare unequal until lifted to a common modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootScalar {
    modulus: u32,
    exponent: u32,
}

impl RootScalar {
    /// ω_q^e; the exponent is reduced modulo q.
    pub fn new(modulus: u32, exponent: u64) -> Result<Self> {
        let modulus = check_modulus(modulus as u64)?;
        Ok(Self {
            modulus,
            exponent: (exponent % modulus as u64) as u32,
        })
    }

    pub fn one(modulus: u32) -> Result<Self> {
        Self::new(modulus, 0)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Product of two roots, lifted to the lcm of their moduli.
    pub fn mul(&self, other: &RootScalar) -> Result<RootScalar> {
        let q = common_modulus(self.modulus, other.modulus)?;
        let a = self.lift(q)?;
        let b = other.lift(q)?;
        Ok(RootScalar {
            modulus: q,
            exponent: (a.exponent + b.exponent) % q,
        })
    }

    pub fn conj(&self) -> RootScalar {
        RootScalar {
            modulus: self.modulus,
            exponent: (self.modulus - self.exponent) % self.modulus,
        }
    }

    /// Re-expresses ω_q^e as ω_{q'}^{e·q'/q}.
    pub fn lift(&self, target: u32) -> Result<RootScalar> {
        let target = check_modulus(target as u64)?;
        if target % self.modulus != 0 {
            return Err(Error::NotDivisible {
                from: self.modulus,
                to: target,
            });
        }
        Ok(RootScalar {
            modulus: target,
            exponent: self.exponent * (target / self.modulus),
        })
    }

    pub fn to_complex(&self) -> Complex64 {
        omega_pow(self.modulus, self.exponent)
    }

    pub fn to_cyc(&self) -> CycInt {
        let mut coeffs = vec![0; self.modulus as usize];
        coeffs[self.exponent as usize] = 1;
        CycInt {
            modulus: self.modulus,
            coeffs,
        }
    }
}

/// An element Σ_j coeffs[j]·ω_q^j of Z[ω_q].
#[derive(Debug, Clone)]
pub struct CycInt {
    modulus: u32,
    coeffs: Vec<i64>,
}

impl CycInt {
    pub fn zero(modulus: u32) -> Result<Self> {
        let modulus = check_modulus(modulus as u64)?;
        Ok(Self {
            modulus,
            coeffs: vec![0; modulus as usize],
        })
    }

    pub fn from_int(modulus: u32, value: i64) -> Result<Self> {
        let mut v = Self::zero(modulus)?;
        v.coeffs[0] = value;
        Ok(v)
    }

    pub fn from_coeffs(modulus: u32, coeffs: Vec<i64>) -> Result<Self> {
        let modulus = check_modulus(modulus as u64)?;
        if coeffs.len() != modulus as usize {
            return Err(Error::CoefficientLength {
                modulus,
                len: coeffs.len(),
            });
        }
        Ok(Self { modulus, coeffs })
    }

    pub(crate) fn from_coeffs_unchecked(modulus: u32, coeffs: Vec<i64>) -> Self {
        debug_assert_eq!(coeffs.len(), modulus as usize);
        Self { modulus, coeffs }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Decides Σ coeffs[j]·ω^j = 0 exactly (remainder modulo Φ_q).
    pub fn is_zero(&self) -> bool {
        coeffs_are_zero(self.modulus, &self.coeffs)
    }

    /// Canonical representative: the remainder modulo Φ_q.
    pub fn reduced(&self) -> Vec<i128> {
        remainder_mod_phi(self.modulus, &self.coeffs)
    }

    /// Sum of absolute coefficient values; bounds |value| and drives overflow checks.
    pub fn l1_norm(&self) -> u128 {
        self.coeffs.iter().map(|c| c.unsigned_abs() as u128).sum()
    }

    /// If exactly one coefficient is nonzero, its index and value.
    pub(crate) fn as_monomial(&self) -> Option<(u32, i64)> {
        let mut found = None;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((j as u32, c));
            }
        }
        found
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| omega_pow(self.modulus, j as u32) * c as f64)
            .sum()
    }

    /// The value as a rational integer, if it is one.
    pub fn to_integer(&self) -> Option<i64> {
        let guess = self.to_complex().re.round() as i64;
        let mut diff = self.coeffs.clone();
        diff[0] = diff[0].checked_sub(guess)?;
        coeffs_are_zero(self.modulus, &diff).then_some(guess)
    }

    /// The value as a single root of unity ω_q^e, if it is one.
    pub fn as_root(&self) -> Option<RootScalar> {
        let q = self.modulus;
        match self.as_monomial() {
            Some((j, 1)) => {
                return Some(RootScalar {
                    modulus: q,
                    exponent: j,
                })
            }
            Some((j, -1)) if q.is_multiple_of(2) => {
                return Some(RootScalar {
                    modulus: q,
                    exponent: (j + q / 2) % q,
                })
            }
            Some(_) => return None,
            None => {}
        }
        let z = self.to_complex();
        if (z.norm() - 1.0).abs() > 1e-6 {
            return None;
        }
        let turns = -z.arg() / (2.0 * std::f64::consts::PI) * q as f64;
        let e = (turns.round() as i64).rem_euclid(q as i64) as u32;
        let mut diff = self.coeffs.clone();
        diff[e as usize] -= 1;
        coeffs_are_zero(q, &diff).then_some(RootScalar {
            modulus: q,
            exponent: e,
        })
    }

    /// Complex conjugate: ω^j ↦ ω^{q−j}.
    pub fn conj(&self) -> CycInt {
        let q = self.modulus as usize;
        let mut coeffs = vec![0; q];
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs[(q - j) % q] = c;
        }
        CycInt {
            modulus: self.modulus,
            coeffs,
        }
    }

    pub fn neg(&self) -> CycInt {
        CycInt {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Result<CycInt> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.checked_mul(k))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::CoefficientOverflow("scale"))?;
        Ok(CycInt {
            modulus: self.modulus,
            coeffs,
        })
    }

    /// Re-expresses the value over ω_{q'}; index j moves to j·q'/q.
    pub fn lift(&self, target: u32) -> Result<CycInt> {
        let target = check_modulus(target as u64)?;
        self.lift_unbounded(target)
    }

    fn lift_unbounded(&self, target: u32) -> Result<CycInt> {
        if !target.is_multiple_of(self.modulus) {
            return Err(Error::NotDivisible {
                from: self.modulus,
                to: target,
            });
        }
        if target == self.modulus {
            return Ok(self.clone());
        }
        let step = (target / self.modulus) as usize;
        let mut coeffs = vec![0; target as usize];
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs[j * step] = c;
        }
        Ok(CycInt {
            modulus: target,
            coeffs,
        })
    }

    fn same_modulus(&self, other: &CycInt) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(())
    }

    /// Sum of two values over the same modulus.
    pub fn checked_add(&self, other: &CycInt) -> Result<CycInt> {
        self.same_modulus(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::CoefficientOverflow("add"))?;
        Ok(CycInt {
            modulus: self.modulus,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &CycInt) -> Result<CycInt> {
        self.checked_add(&other.neg())
    }

    /// Product of two values over the same modulus: cyclic convolution of
    /// the coefficient vectors, since ω^q = 1.
    pub fn checked_mul(&self, other: &CycInt) -> Result<CycInt> {
        self.same_modulus(other)?;
        let q = self.modulus as usize;
        let mut coeffs = vec![0i64; q];
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, &b) in other.coeffs.iter().enumerate().filter(|(_, b)| **b != 0) {
                let k = (i + j) % q;
                coeffs[k] = a
                    .checked_mul(b)
                    .and_then(|p| coeffs[k].checked_add(p))
                    .ok_or(Error::CoefficientOverflow("mul"))?;
            }
        }
        Ok(CycInt {
            modulus: self.modulus,
            coeffs,
        })
    }

    fn lifted_pair(&self, other: &CycInt) -> Result<(CycInt, CycInt)> {
        let q = common_modulus(self.modulus, other.modulus)?;
        Ok((self.lift(q)?, other.lift(q)?))
    }

    /// Sum, lifting mixed moduli to their lcm.
    pub fn add(&self, other: &CycInt) -> Result<CycInt> {
        let (a, b) = self.lifted_pair(other)?;
        a.checked_add(&b)
    }

    pub fn sub(&self, other: &CycInt) -> Result<CycInt> {
        let (a, b) = self.lifted_pair(other)?;
        a.checked_sub(&b)
    }

    /// Product, lifting mixed moduli to their lcm.
    pub fn mul(&self, other: &CycInt) -> Result<CycInt> {
        let (a, b) = self.lifted_pair(other)?;
        a.checked_mul(&b)
    }
}

impl PartialEq for CycInt {
    fn eq(&self, other: &Self) -> bool {
        let q = lcm(self.modulus as u64, other.modulus as u64) as u32;
        let (Ok(a), Ok(b)) = (self.lift_unbounded(q), other.lift_unbounded(q)) else {
            return false;
        };
        let diff: Option<Vec<i64>> = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x.checked_sub(*y))
            .collect();
        diff.is_some_and(|d| coeffs_are_zero(q, &d))
    }
}

impl From<RootScalar> for CycInt {
    fn from(r: RootScalar) -> Self {
        r.to_cyc()
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.to_integer() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0) {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.unsigned_abs();
            match (j, mag) {
                (0, m) => write!(f, "{m}")?,
                (_, 1) => write!(f, "w^{j}")?,
                (_, m) => write!(f, "{m}w^{j}")?,
            }
        }
        write!(f, " (q={})", self.modulus)
    }
}
