//! Verification reports: named checks run on a catalog object, with a
//! status, the scope actually covered and a detail line.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::CatalogObject;
use crate::error::{Error, Result};
use crate::structure::{
    associated_endomorphism, check_conditions, faithfulness, is_finite_state, is_recurrent, kernel_of_psi,
    psi_kernel, transitivity, verify_homomorphism, FaithfulnessVerdict, FiniteStateVerdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Conditions,
    Homo,
    Faithful,
    Transitive,
    States,
    Recurrent,
    Kernel,
}

impl CheckKind {
    pub const ALL: [CheckKind; 7] = [
        CheckKind::Conditions,
        CheckKind::Homo,
        CheckKind::Faithful,
        CheckKind::Transitive,
        CheckKind::States,
        CheckKind::Recurrent,
        CheckKind::Kernel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Conditions => "conditions",
            CheckKind::Homo => "homomorphism",
            CheckKind::Faithful => "faithful",
            CheckKind::Transitive => "transitive",
            CheckKind::States => "states",
            CheckKind::Recurrent => "recurrent",
            CheckKind::Kernel => "kernel",
        }
    }

    /// What the check exercises.
    pub fn anchor(self) -> &'static str {
        match self {
            CheckKind::Conditions => "compatibility identities for the L_0 profile",
            CheckKind::Homo => "ψ([a,b]) = [ψ(a), ψ(b)]",
            CheckKind::Faithful => "joint kernel of the level actions vs greatest θ-invariant ideal in H",
            CheckKind::Transitive => "X^⊗m cyclic with generator x^(p-1)⊗…⊗x^(p-1)",
            CheckKind::States => "iterated state spaces stay finite dimensional",
            CheckKind::Recurrent => "θ(H) = L",
            CheckKind::Kernel => "Ker ψ from θ-iterates vs the ψ matrix",
        }
    }
}

impl FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "conditions" => CheckKind::Conditions,
            "homo" | "homomorphism" => CheckKind::Homo,
            "faithful" => CheckKind::Faithful,
            "transitive" => CheckKind::Transitive,
            "states" => CheckKind::States,
            "recurrent" => CheckKind::Recurrent,
            "kernel" => CheckKind::Kernel,
            other => return Err(Error::Parse(format!("unknown check {other}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not applicable to this object, or not decided within the bounds.
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub scope: String,
    pub anchor: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub structure: String,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    /// True when every check passed or was skipped, and none failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.structure);
        for c in &self.checks {
            out.push_str(&format!("  {:<8} {:<13} [{}] {}\n", c.status.to_string(), c.name, c.scope, c.detail));
        }
        out
    }
}

fn result(kind: CheckKind, status: CheckStatus, scope: impl Into<String>, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: kind.name().into(),
        status,
        scope: scope.into(),
        anchor: kind.anchor().into(),
        detail: detail.into(),
    }
}

fn skipped(kind: CheckKind, why: &str) -> CheckResult {
    result(kind, CheckStatus::Skipped, "-", why)
}

fn pass_if(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

fn dims(v: &[usize]) -> String {
    format!("{v:?}")
}

fn run_check(object: &CatalogObject, kind: CheckKind, level: usize) -> Result<CheckResult> {
    let l = &object.algebra;
    let truncation = match l.degree_bound() {
        Some(d) => format!(", degree ≤ {d}"),
        None => String::new(),
    };
    let no_psi = || {
        let why = match object.issues.first() {
            Some(issue) => format!("no structure: {issue}"),
            None => "no structure".into(),
        };
        skipped(kind, &why)
    };
    Ok(match kind {
        CheckKind::Conditions => match (&object.ve, &object.profile) {
            (Some(ve), Some(profile)) => {
                let r = check_conditions(profile, ve)?;
                let scope = format!(
                    "{profile}: {} instances, {} skipped at the truncation",
                    r.instances_checked, r.instances_skipped
                );
                match &r.failure {
                    None => result(kind, CheckStatus::Pass, scope, r.notes.join("; ")),
                    Some(f) => result(
                        kind,
                        CheckStatus::Fail,
                        scope,
                        format!("{} [{}]: {}", f.identity, f.stage, f.witness),
                    ),
                }
            }
            _ => skipped(kind, "no virtual endomorphism"),
        },
        CheckKind::Homo => match &object.psi {
            Some(psi) => {
                let r = verify_homomorphism(psi)?;
                let scope = format!("{} basis pairs, {} skipped{truncation}", r.pairs_checked, r.pairs_skipped);
                match &r.counterexample {
                    None => result(kind, CheckStatus::Pass, scope, ""),
                    Some(c) => result(
                        kind,
                        CheckStatus::Fail,
                        scope,
                        format!(
                            "pair ({}, {}): ψ([a,b]) = {}, [ψ(a),ψ(b)] = {}",
                            c.left, c.right, c.image_of_bracket, c.bracket_of_images
                        ),
                    ),
                }
            }
            None => no_psi(),
        },
        CheckKind::Faithful => match &object.psi {
            Some(psi) => {
                let r = faithfulness(psi, object.ve.as_ref(), level)?;
                let scope = format!(
                    "kernel chain {}, level kernels {} for m ≤ {level}{truncation}",
                    dims(&r.chain_dims),
                    dims(&r.level_kernel_dims)
                );
                let mut detail = match &r.verdict {
                    FaithfulnessVerdict::Faithful => "joint kernel 0".to_string(),
                    FaithfulnessVerdict::NotFaithful { witness } => format!("{witness} acts trivially on every level"),
                    FaithfulnessVerdict::Undecided { reason } => reason.clone(),
                };
                if let Some(d) = r.invariant_ideal_dim {
                    detail.push_str(&format!("; greatest θ-invariant ideal in H has dim {d}"));
                }
                if !r.routes_agree {
                    detail.push_str("; routes disagree");
                }
                for note in &r.notes {
                    detail.push_str(&format!("; {note}"));
                }
                let status = match r.verdict {
                    FaithfulnessVerdict::Faithful if r.routes_agree => CheckStatus::Pass,
                    FaithfulnessVerdict::Undecided { .. } if r.routes_agree => CheckStatus::Skipped,
                    _ => CheckStatus::Fail,
                };
                result(kind, status, scope, detail)
            }
            None => no_psi(),
        },
        CheckKind::Transitive => match &object.psi {
            Some(_) if l.field().characteristic() == 0 => skipped(kind, "defined in characteristic p only"),
            Some(psi) => match transitivity(psi, level) {
                Ok(r) => result(
                    kind,
                    pass_if(r.transitive),
                    format!("m ≤ {level}"),
                    format!(
                        "orbit dims {}, module dims {}, θ(H) = L: {}",
                        dims(&r.orbit_dims),
                        dims(&r.module_dims),
                        r.theta_onto
                    ),
                ),
                Err(Error::DimensionCap { dim, cap }) => {
                    skipped(kind, &format!("dimension {dim} exceeds the cap {cap}"))
                }
                Err(e) => return Err(e),
            },
            None => no_psi(),
        },
        CheckKind::States => match &object.psi {
            Some(psi) => {
                let bound = l.dim() + 1;
                let mut parts = Vec::new();
                let mut all = true;
                for b in 0..l.dim() {
                    match is_finite_state(psi, &l.basis_element(b), bound) {
                        FiniteStateVerdict::FiniteState { dim, .. } => parts.push(format!("{}: {dim}", l.symbol(b))),
                        FiniteStateVerdict::NotDeterminedWithinBound { .. } => {
                            all = false;
                            parts.push(format!("{}: undetermined", l.symbol(b)));
                        }
                    }
                }
                let status = if all { CheckStatus::Pass } else { CheckStatus::Skipped };
                result(
                    kind,
                    status,
                    format!("state closures of basis elements, bound {bound}{truncation}"),
                    parts.join(", "),
                )
            }
            None => no_psi(),
        },
        CheckKind::Recurrent => {
            let owned;
            let ve = match (&object.ve, &object.psi) {
                (Some(ve), _) => ve,
                (None, Some(psi)) => {
                    owned = associated_endomorphism(psi)?;
                    &owned
                }
                (None, None) => return Ok(no_psi()),
            };
            let r = is_recurrent(ve);
            let detail = match &r.missing {
                None => format!("image dim {}", r.image_dim),
                Some(s) => format!("image dim {}, {s} not hit", r.image_dim),
            };
            result(kind, pass_if(r.recurrent), format!("{} basis targets{truncation}", r.targets), detail)
        }
        CheckKind::Kernel => match (&object.ve, &object.psi) {
            (Some(ve), Some(psi)) if !l.is_truncated() => {
                let from_theta = kernel_of_psi(ve)?;
                let direct = psi_kernel(psi);
                let detail = format!("dim {} from θ-iterates, dim {} from ψ", from_theta.dim(), direct.dim());
                result(kind, pass_if(from_theta == direct), "finite basis", detail)
            }
            (Some(_), Some(_)) => skipped(kind, "needs a finite-dimensional algebra"),
            (None, _) => skipped(kind, "no virtual endomorphism"),
            (_, None) => no_psi(),
        },
    })
}

/// Runs the checks concurrently and assembles them in the requested order.
pub fn verify(object: &CatalogObject, checks: &[CheckKind], level: usize) -> Result<VerificationReport> {
    let results = checks
        .par_iter()
        .map(|&kind| run_check(object, kind, level))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        structure: format!("{} {}", object.entry, describe_params(object)),
        checks: results,
    })
}

fn describe_params(object: &CatalogObject) -> String {
    let p = &object.params;
    let field = match p.p {
        0 => "Q".to_string(),
        q => format!("F_{q}"),
    };
    let mut s = format!("over {field} (n = {}, D = {})", p.n, p.degree);
    if let Some(profile) = &p.profile {
        s.push_str(&format!(" profile {profile}"));
    }
    s
}
