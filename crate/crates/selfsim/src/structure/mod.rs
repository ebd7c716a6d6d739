//! Self-similar structures `ψ : L → L ≀ Der X`, virtual endomorphisms, the
//! constructions that turn one into the other, and the analyses run on them.

mod analysis;
mod build;
mod endo;
mod profile;

pub use analysis::{
    contracting_check, faithfulness, invariant_ideal, is_finite_state, is_recurrent, iterated_states, kernel_chain,
    kernel_of_psi, psi_kernel, states, transitivity, weakly_branched_witness_test, ContractionReport,
    ElementContraction, FaithfulnessReport, FaithfulnessVerdict, FiniteStateVerdict,
    RecurrenceReport, TransitivityReport, WeaklyBranchedReport,
};
pub use build::{associated_endomorphism, build_psi, build_psi_diagonal, build_psi_twisted, build_psi_with};
pub use endo::VirtualEndomorphism;
pub use profile::{check_conditions, ConditionFailure, ConditionProfile, ConditionReport};

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, LieElement};
use crate::wreath::{LevelEngine, WreathElement, WreathProduct};

/// A Lie homomorphism `ψ : L → L ≀ Der X` given on the basis of `L`.
#[derive(Clone, Debug)]
pub struct SelfSimilarStructure {
    name: String,
    provenance: String,
    wreath: Arc<WreathProduct>,
    images: Arc<Vec<WreathElement>>,
}

impl SelfSimilarStructure {
    /// One image per basis element of the algebra.
    pub fn new(
        name: impl Into<String>,
        provenance: impl Into<String>,
        wreath: WreathProduct,
        images: Vec<WreathElement>,
    ) -> Result<Self> {
        if images.len() != wreath.algebra().dim() {
            return Err(Error::InvalidParameter(format!(
                "expected {} images, got {}",
                wreath.algebra().dim(),
                images.len()
            )));
        }
        Ok(SelfSimilarStructure {
            name: name.into(),
            provenance: provenance.into(),
            wreath: Arc::new(wreath),
            images: Arc::new(images),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn wreath(&self) -> &Arc<WreathProduct> {
        &self.wreath
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        self.wreath.algebra()
    }

    pub fn images(&self) -> &[WreathElement] {
        &self.images
    }

    /// `ψ(a)` by linearity.
    pub fn psi(&self, a: &LieElement) -> WreathElement {
        let mut out = self.wreath.zero();
        for (b, c) in a.coeffs() {
            out.add_scaled(c, &self.images[*b]);
        }
        out
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Replaces the image of one basis element.
    pub fn with_image(&self, symbol: &str, image: WreathElement) -> Result<Self> {
        let index = self
            .algebra()
            .index_of(symbol)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown basis symbol {symbol}")))?;
        let mut images = (*self.images).clone();
        images[index] = image;
        Ok(SelfSimilarStructure {
            name: self.name.clone(),
            provenance: format!("{} (modified at {symbol})", self.provenance),
            wreath: self.wreath.clone(),
            images: Arc::new(images),
        })
    }

    /// A level engine using the dimension cap from the environment.
    pub fn engine(&self) -> LevelEngine {
        LevelEngine::new(self.wreath.clone(), self.images.clone())
    }

    pub fn engine_with_cap(&self, cap: usize) -> LevelEngine {
        LevelEngine::with_cap(self.wreath.clone(), self.images.clone(), cap)
    }

    /// Readable `symbol ↦ ψ(symbol)` lines.
    pub fn describe(&self) -> Vec<String> {
        let l = self.algebra();
        (0..l.dim())
            .map(|b| format!("ψ({}) = {}", l.symbol(b), self.wreath.format(&self.images[b])))
            .collect()
    }
}

/// A basis pair on which `ψ` fails to respect brackets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomomorphismCounterexample {
    pub left: String,
    pub right: String,
    /// `ψ([a, b])`.
    pub image_of_bracket: String,
    /// `[ψ(a), ψ(b)]`.
    pub bracket_of_images: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomomorphismReport {
    pub pairs_checked: usize,
    /// Pairs whose bracket leaves the truncation.
    pub pairs_skipped: usize,
    pub counterexample: Option<HomomorphismCounterexample>,
}

impl HomomorphismReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

enum PairOutcome {
    Agree,
    Skipped,
    Differ(HomomorphismCounterexample),
}

/// Checks `ψ([a, b]) = [ψ(a), ψ(b)]` on all basis pairs `a < b`, in basis
/// order. Pairs that leave the truncation on either side are skipped.
pub fn verify_homomorphism(psi: &SelfSimilarStructure) -> Result<HomomorphismReport> {
    let l = psi.algebra();
    let w = psi.wreath();
    let n = l.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let outcomes = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<PairOutcome> {
            let bracket = match l.bracket(&l.basis_element(i), &l.basis_element(j)) {
                Ok(b) => b,
                Err(Error::TruncationExceeded(_)) => return Ok(PairOutcome::Skipped),
                Err(e) => return Err(e),
            };
            let rhs = match w.bracket(&psi.images[i], &psi.images[j]) {
                Ok(r) => r,
                Err(Error::TruncationExceeded(_)) => return Ok(PairOutcome::Skipped),
                Err(e) => return Err(e),
            };
            let lhs = psi.psi(&bracket);
            Ok(if lhs == rhs {
                PairOutcome::Agree
            } else {
                PairOutcome::Differ(HomomorphismCounterexample {
                    left: l.symbol(i).to_string(),
                    right: l.symbol(j).to_string(),
                    image_of_bracket: w.format(&lhs),
                    bracket_of_images: w.format(&rhs),
                })
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = HomomorphismReport {
        pairs_checked: 0,
        pairs_skipped: 0,
        counterexample: None,
    };
    for outcome in outcomes {
        match outcome {
            PairOutcome::Agree => report.pairs_checked += 1,
            PairOutcome::Skipped => report.pairs_skipped += 1,
            PairOutcome::Differ(c) => {
                report.pairs_checked += 1;
                if report.counterexample.is_none() {
                    report.counterexample = Some(c);
                }
            }
        }
    }
    Ok(report)
}
