//! Serializable summaries of verification results.

use std::fmt;

use serde::Serialize;

use crate::correlation::{CorrelationReport, Violation};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationSummary {
    pub mu: usize,
    pub nu: usize,
    pub tau: i64,
    pub value: String,
}

impl From<&Violation> for ViolationSummary {
    fn from(v: &Violation) -> Self {
        Self {
            mu: v.mu,
            nu: v.nu,
            tau: v.tau,
            value: v.value.to_string(),
        }
    }
}

/// Outcome of checking a claimed zone width.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub z: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub q: u32,
    pub m: usize,
    pub k: usize,
    pub l: usize,
    pub energy: String,
    pub zcz_width: usize,
    pub is_pu: bool,
    pub is_zpu: bool,
    pub bound: Option<usize>,
    pub within_bound: bool,
    pub optimal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claim: Option<ClaimCheck>,
    pub first_violation: Option<ViolationSummary>,
}

impl VerifySummary {
    /// Summarizes a report, checking `claimed_z` when given. A claim outside
    /// [1, L] does not hold.
    pub fn new(report: &CorrelationReport, claimed_z: Option<usize>) -> Result<Self> {
        let claim = claimed_z
            .map(|z| -> Result<ClaimCheck> {
                let holds = (1..=report.length).contains(&z) && report.is_zpu_at(z)?;
                Ok(ClaimCheck { z, holds })
            })
            .transpose()?;
        Ok(Self {
            q: report.modulus,
            m: report.rows,
            k: report.cols,
            l: report.length,
            energy: report.energy.to_string(),
            zcz_width: report.zcz_width,
            is_pu: report.is_pu,
            is_zpu: report.zcz_width >= 1,
            bound: report.bound,
            within_bound: report.within_bound(),
            optimal: report.optimal,
            claim,
            first_violation: report.first_violation.as_ref().map(ViolationSummary::from),
        })
    }

    /// False when a claimed width fails.
    pub fn claim_holds(&self) -> bool {
        self.claim.as_ref().is_none_or(|c| c.holds)
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "shape       q={} M={} K={} L={}",
            self.q, self.m, self.k, self.l
        )?;
        writeln!(f, "energy      {}", self.energy)?;
        writeln!(f, "zcz width   {}", self.zcz_width)?;
        writeln!(f, "PU          {}", yes_no(self.is_pu))?;
        writeln!(f, "ZPU         {}", yes_no(self.is_zpu))?;
        match self.bound {
            Some(b) => writeln!(
                f,
                "bound       K={} <= M*floor(L/Z)={} ({})",
                self.k,
                b,
                if self.within_bound {
                    "holds"
                } else {
                    "VIOLATED"
                }
            )?,
            None => writeln!(f, "bound       undefined (no zero correlation zone)")?,
        }
        writeln!(f, "optimal     {}", yes_no(self.optimal))?;
        if let Some(c) = &self.claim {
            writeln!(
                f,
                "claimed Z   {} ({})",
                c.z,
                if c.holds { "holds" } else { "FAILS" }
            )?;
        }
        if let Some(v) = &self.first_violation {
            writeln!(
                f,
                "first violation  mu={} nu={} tau={} value={}",
                v.mu, v.nu, v.tau, v.value
            )?;
        }
        Ok(())
    }
}
