//! The `verify` battery: every check that applies to one (rep, q).

use std::fmt::Write as _;

use serde::Serialize;

use pvsft_core::census::{full_census, oracle_ft_matrix, CensusConfig, SubspaceSpec};
use pvsft_core::counts::spanning_family;
use pvsft_core::ffield::is_prime;
use pvsft_core::ftsolver::{
    delta_check, ft_apply, phip_expected, phip_vector, quadratic_twist_check, quadratic_twist_pointwise,
    solve_ft_matrix, subspace_identity_check, sym22_remark_check, verify_lemma, FTMatrix, Provider,
};
use pvsft_core::paperdata::{expected_ft_matrix, expected_psi_hat, singular_indicator};
use pvsft_core::reps::{RepKind, Space};
use pvsft_core::Result;

/// Enumerations above this many elements need `--slow`.
const FAST_LIMIT: u128 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub rep: RepKind,
    pub q: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let _ = write!(out, "{tag} {}", c.name);
            if !c.detail.is_empty() {
                let _ = write!(out, ": {}", c.detail);
            }
            out.push('\n');
        }
        let _ = write!(
            out,
            "{} at q = {}: {}",
            self.rep,
            self.q,
            if self.passed { "all checks passed" } else { "FAILED" }
        );
        out
    }
}

struct Battery {
    checks: Vec<Check>,
}

impl Battery {
    fn record(&mut self, name: &str, outcome: Result<bool>) {
        let (status, detail) = match outcome {
            Ok(true) => (Status::Pass, String::new()),
            Ok(false) => (Status::Fail, String::new()),
            Err(e) => (Status::Fail, e.to_string()),
        };
        self.checks.push(Check {
            name: name.into(),
            status,
            detail,
        });
    }

    fn skip(&mut self, name: &str, why: &str) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Skip,
            detail: why.into(),
        });
    }
}

fn size_at(p: u64, dim: usize) -> u128 {
    (p as u128).pow(dim as u32)
}

pub fn run_battery(kind: RepKind, q: u64, slow: bool, cfg: &CensusConfig) -> Result<Report> {
    let m = solve_ft_matrix(kind, q, &Provider::Formula)?;
    let mut b = Battery { checks: Vec::new() };

    let lemma = verify_lemma(&m);
    b.record("lemma: S·M symmetric", Ok(lemma.symmetric_ok));
    b.record("lemma: q^dim·M² = I", Ok(lemma.involution_ok));
    b.record("transform of 1 is δ₀", delta_check(&m));
    b.record("denominators divide 24", Ok(m.denominators_ok()));
    b.record("theorem matrix", expected_ft_matrix(kind, q).map(|t| t == m));

    let enumerable = is_prime(q) && (slow || size_at(q, kind.dim()) <= FAST_LIMIT);
    let space = if is_prime(q) { Some(Space::new(kind, q)?) } else { None };
    match (&space, enumerable) {
        (Some(s), true) => {
            b.record(
                "census vs orbit sizes",
                full_census(s, cfg).map(|c| c.to_rationals() == m.orbit_sizes()),
            );
            b.record("oracle character sums", oracle_ft_matrix(s, cfg).map(|o| o == m.matrix));
            b.record(
                "enumerated counts provider",
                solve_ft_matrix(kind, q, &Provider::Enumeration(cfg.clone())).map(|e| e == m),
            );
        }
        _ => {
            let why = if space.is_none() {
                "q is not prime"
            } else {
                "large enumeration; pass --slow"
            };
            for name in [
                "census vs orbit sizes",
                "oracle character sums",
                "enumerated counts provider",
            ] {
                b.skip(name, why);
            }
        }
    }

    // subspace identity for every spanning-family member small enough to walk
    if let Some(s) = &space {
        let table = pvsft_core::counts::count_table(kind);
        let mut all = Ok(true);
        let mut tried = 0;
        for member in spanning_family(kind).members {
            let e = table.entry(&member.id)?;
            if !slow && size_at(q, e.dim) > FAST_LIMIT {
                continue;
            }
            tried += 1;
            match subspace_identity_check(s, &SubspaceSpec::Mask(e.mask_bits()), &m, cfg) {
                Ok(true) => {}
                other => {
                    all = other;
                    break;
                }
            }
        }
        if tried > 0 {
            b.record(&format!("subspace identity ({tried} family members)"), all);
        } else {
            b.skip("subspace identity", "large enumeration; pass --slow");
        }
    }

    corollaries(kind, &m, slow, &mut b);

    let passed = b.checks.iter().all(|c| c.status != Status::Fail);
    Ok(Report {
        rep: kind,
        q,
        passed,
        checks: b.checks,
    })
}

fn psi_hat_check(m: &FTMatrix) -> Result<bool> {
    let got = ft_apply(m, &singular_indicator(m.rep)?)?;
    Ok(got == expected_psi_hat(m.rep)?.eval(m.q))
}

fn corollaries(kind: RepKind, m: &FTMatrix, slow: bool, b: &mut Battery) {
    match kind {
        RepKind::Sym32 => {
            b.record("singular-set transform", psi_hat_check(m));
            b.record(
                "P¹ zero count transform",
                ft_apply(m, &phip_vector(m.q)).map(|f| f == phip_expected(m.q)),
            );
            b.record("quadratic twist eigenvector", quadratic_twist_check(m));
            if is_prime(m.q) && (slow || m.q <= 7) {
                b.record("quadratic twist pointwise", quadratic_twist_pointwise(m.q));
            } else {
                b.skip("quadratic twist pointwise", "q⁸ character sum; pass --slow");
            }
        }
        RepKind::Sym22 => b.record("quadratic character remark", sym22_remark_check(m)),
        RepKind::Pair23 => b.record("singular-set transform", psi_hat_check(m)),
        RepKind::Sym23 | RepKind::Pair22 => {}
    }
}
