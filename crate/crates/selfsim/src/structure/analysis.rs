use serde::Serialize;

use super::profile::tuples;
use super::{associated_endomorphism, SelfSimilarStructure, VirtualEndomorphism};
use crate::error::{Error, Result};
use crate::lie::LieElement;
use crate::linalg::{greatest_invariant_subspace, kernel_vectors, span_closure, LinearOperator, SparseMatrix, SparseVec, Subspace};
use crate::truncalg::Monomial;
use crate::wreath::level_kernel;

fn combine(family: &[LieElement], combo: &SparseVec) -> SparseVec {
    let mut v = SparseVec::new();
    for (i, c) in combo {
        v.add_scaled(c, family[*i].coeffs());
    }
    v
}

/// `{h ∈ H : θ(y^I ∘ h) = 0 for all I ∈ [0, m-1]^n}`, the kernel of the `ψ`
/// built from `ve`.
pub fn kernel_of_psi(ve: &VirtualEndomorphism) -> Result<Subspace> {
    let l = ve.algebra();
    let letters = ve.section();
    let exps = tuples(letters.len(), ve.order());
    let columns = ve
        .domain()
        .iter()
        .map(|h| {
            let mut column = SparseVec::new();
            for (k, t) in exps.iter().enumerate() {
                let state = ve.theta(&l.ad_word(&letters, t, h)?)?;
                for (b, c) in state.coeffs() {
                    column.add_term(k * l.dim() + b, c);
                }
            }
            Ok(column)
        })
        .collect::<Result<Vec<_>>>()?;
    let vectors: Vec<SparseVec> = kernel_vectors(ve.field(), &columns)
        .iter()
        .map(|combo| combine(ve.domain(), combo))
        .collect();
    Ok(Subspace::span(ve.field(), l.dim(), &vectors))
}

/// The kernel of `ψ` read directly off the flattened images.
pub fn psi_kernel(psi: &SelfSimilarStructure) -> Subspace {
    let field = psi.algebra().field();
    let columns: Vec<SparseVec> = psi.images().iter().map(|u| psi.wreath().flatten(u)).collect();
    kernel(field, psi.algebra().dim(), &columns)
}

fn kernel(field: crate::field::FieldSpec, dim: usize, columns: &[SparseVec]) -> Subspace {
    Subspace::span(field, dim, &kernel_vectors(field, columns))
}

/// The state coefficient at each monomial, as linear maps `L → L`.
fn state_maps(psi: &SelfSimilarStructure) -> Vec<SparseMatrix> {
    let l = psi.algebra();
    psi.wreath()
        .alphabet()
        .basis()
        .iter()
        .map(|m| {
            let columns = psi
                .images()
                .iter()
                .map(|u| u.tensor_part().get(m).map(|a| a.coeffs().clone()).unwrap_or_default())
                .collect();
            SparseMatrix::from_columns(l.dim(), columns)
        })
        .filter(|s| !s.is_zero())
        .collect()
}

/// `K_0 = Ker(πψ)` and `K_{i+1} = {a ∈ K_0 : every state of a lies in K_i}`,
/// so that `K_i` is the kernel of the action on `X^{⊗(i+1)}`. Stops early
/// once the chain is stable; the last entry is then the joint kernel.
pub fn kernel_chain(psi: &SelfSimilarStructure, depth: usize) -> Vec<Subspace> {
    let l = psi.algebra();
    let field = l.field();
    let w = psi.wreath();
    let der_columns: Vec<SparseVec> = psi
        .images()
        .iter()
        .map(|u| w.alphabet().derivation_to_vec(u.project_der()))
        .collect();
    let k0 = kernel(field, l.dim(), &der_columns);
    let maps = state_maps(psi);
    let mut chain = vec![k0.clone()];
    while chain.len() <= depth {
        let current = chain.last().expect("nonempty");
        let basis = k0.basis();
        let columns: Vec<SparseVec> = basis
            .iter()
            .map(|v| {
                let mut column = SparseVec::new();
                for (k, s) in maps.iter().enumerate() {
                    for (idx, c) in &current.reduce(&s.mul_vec(v)) {
                        column.add_term(k * l.dim() + idx, c);
                    }
                }
                column
            })
            .collect();
        let vectors: Vec<SparseVec> = kernel_vectors(field, &columns)
            .iter()
            .map(|combo| {
                let mut v = SparseVec::new();
                for (i, c) in combo {
                    v.add_scaled(c, &basis[*i]);
                }
                v
            })
            .collect();
        let next = Subspace::span(field, l.dim(), &vectors);
        let stable = &next == current;
        chain.push(next);
        if stable {
            break;
        }
    }
    chain
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FaithfulnessVerdict {
    Faithful,
    NotFaithful { witness: String },
    /// The kernel chain did not stabilize within the level bound.
    Undecided { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaithfulnessReport {
    pub verdict: FaithfulnessVerdict,
    /// Dimensions of the kernels on `X^{⊗1}, X^{⊗2}, …` from the chain.
    pub chain_dims: Vec<usize>,
    /// Dimension of the greatest `θ`-invariant ideal inside `H`, when `L`
    /// is finite dimensional.
    pub invariant_ideal_dim: Option<usize>,
    /// Level kernels from explicit level matrices, up to the dimension cap.
    pub level_kernel_dims: Vec<usize>,
    pub routes_agree: bool,
    pub notes: Vec<String>,
}

impl FaithfulnessReport {
    pub fn faithful(&self) -> bool {
        self.verdict == FaithfulnessVerdict::Faithful
    }
}

/// The greatest ideal of `L` inside `H` with `θ(J) ⊆ J`.
pub fn invariant_ideal(ve: &VirtualEndomorphism) -> Result<Subspace> {
    let l = ve.algebra();
    let ads = (0..l.dim())
        .map(|b| l.ad_matrix(&l.basis_element(b)))
        .collect::<Result<Vec<_>>>()?;
    let theta = |v: &SparseVec| -> Result<SparseVec> {
        Ok(ve.theta(&LieElement::from_vec(v.clone()))?.into_vec())
    };
    let mut operators: Vec<&dyn LinearOperator> = ads.iter().map(|m| m as &dyn LinearOperator).collect();
    operators.push(&theta);
    greatest_invariant_subspace(ve.ideal(), &operators)
}

/// Decides faithfulness by the kernel chain, cross-checked against the
/// greatest `θ`-invariant ideal (finite-dimensional `L`) and against level
/// kernels computed from explicit matrices for levels up to `max_level`.
pub fn faithfulness(
    psi: &SelfSimilarStructure,
    ve: Option<&VirtualEndomorphism>,
    max_level: usize,
) -> Result<FaithfulnessReport> {
    let l = psi.algebra();
    let mut notes = Vec::new();
    let chain = kernel_chain(psi, l.dim() + 1);
    let stable = chain.len() >= 2 && chain[chain.len() - 1] == chain[chain.len() - 2];
    let limit = chain.last().expect("nonempty");
    if l.is_truncated() {
        notes.push(format!(
            "checked on the degree ≤ {} truncation",
            l.degree_bound().unwrap_or_default()
        ));
    }

    let invariant = if l.is_truncated() {
        None
    } else {
        let owned;
        let ve = match ve {
            Some(v) => v,
            None => {
                owned = associated_endomorphism(psi)?;
                &owned
            }
        };
        Some(invariant_ideal(ve)?)
    };

    let engine = psi.engine();
    let mut level_kernel_dims = Vec::new();
    let mut engine_agrees = true;
    for level in 1..=max_level {
        let k = match level_kernel(&engine, level) {
            Ok(k) => k,
            Err(Error::DimensionCap { dim, cap }) => {
                notes.push(format!("level {level} skipped: dimension {dim} exceeds the cap {cap}"));
                break;
            }
            Err(Error::TruncationExceeded(_)) => {
                notes.push("level matrices skipped: the degree-truncated alphabet is not closed under products".into());
                break;
            }
            Err(e) => return Err(e),
        };
        let from_chain = chain.get(level - 1).unwrap_or(limit);
        engine_agrees &= &k == from_chain;
        level_kernel_dims.push(k.dim());
    }

    let invariant_agrees = match &invariant {
        Some(j) if stable => j == limit,
        _ => true,
    };
    let verdict = if !stable {
        FaithfulnessVerdict::Undecided {
            reason: format!("kernel chain not stable after {} levels", chain.len()),
        }
    } else if limit.is_zero() {
        FaithfulnessVerdict::Faithful
    } else {
        FaithfulnessVerdict::NotFaithful {
            witness: l.format(&LieElement::from_vec(limit.basis()[0].clone())),
        }
    };
    Ok(FaithfulnessReport {
        verdict,
        chain_dims: chain.iter().map(Subspace::dim).collect(),
        invariant_ideal_dim: invariant.as_ref().map(Subspace::dim),
        level_kernel_dims,
        routes_agree: engine_agrees && invariant_agrees,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    /// `(orbit dimension, dim X^{⊗m})` for `m = 1, 2, …`.
    pub orbit_dims: Vec<usize>,
    pub module_dims: Vec<usize>,
    pub transitive: bool,
    /// Whether `θ(H) = L` for the associated virtual endomorphism.
    pub theta_onto: bool,
}

/// Span closure of `x^{p-1} ⊗ … ⊗ x^{p-1}` under the level operators of
/// the basis, at each level `1..=max_level`.
pub fn transitivity(psi: &SelfSimilarStructure, max_level: usize) -> Result<TransitivityReport> {
    let field = psi.algebra().field();
    if field.characteristic() == 0 {
        return Err(Error::HypothesisViolated(
            "transitivity is defined in characteristic p only".into(),
        ));
    }
    let x = psi.wreath().alphabet();
    let top = x
        .monomial_index(&Monomial(vec![field.characteristic() - 1; x.nvars()]))
        .expect("top monomial");
    let engine = psi.engine();
    let mut orbit_dims = Vec::new();
    let mut module_dims = Vec::new();
    for level in 1..=max_level {
        let dim = engine.level_dim(level)?;
        let mut index = 0;
        for _ in 0..level {
            index = index * x.dim() + top;
        }
        let seed = Subspace::span(field, dim, &[SparseVec::unit(index, field)]);
        let matrices = (0..psi.algebra().dim())
            .map(|b| engine.basis_matrix(b, level))
            .collect::<Result<Vec<_>>>()?;
        let operators: Vec<&dyn LinearOperator> = matrices.iter().map(|m| m.as_ref() as &dyn LinearOperator).collect();
        orbit_dims.push(span_closure(&seed, &operators)?.dim());
        module_dims.push(dim);
    }
    let ve = associated_endomorphism(psi)?;
    Ok(TransitivityReport {
        transitive: orbit_dims == module_dims,
        orbit_dims,
        module_dims,
        theta_onto: is_recurrent(&ve).recurrent,
    })
}

/// `S(Y)`: the smallest subspace `V` with `ψ(Y) ⊆ (X ⊗ V) ⋉ Der X`.
pub fn states(psi: &SelfSimilarStructure, elements: &[LieElement]) -> Subspace {
    let l = psi.algebra();
    let mut out = Subspace::zero(l.field(), l.dim());
    for a in elements {
        for (_, s) in psi.psi(a).states() {
            out.insert(s.coeffs());
        }
    }
    out
}

fn states_of_subspace(psi: &SelfSimilarStructure, v: &Subspace) -> Subspace {
    let elements: Vec<LieElement> = v.basis().iter().map(|b| LieElement::from_vec(b.clone())).collect();
    states(psi, &elements)
}

/// `S^i(Y) = S(S^{i-1}(Y))`, with `S^0(Y) = span Y`.
pub fn iterated_states(psi: &SelfSimilarStructure, elements: &[LieElement], i: usize) -> Subspace {
    let l = psi.algebra();
    let seed: Vec<SparseVec> = elements.iter().map(|e| e.coeffs().clone()).collect();
    let mut current = Subspace::span(l.field(), l.dim(), &seed);
    for _ in 0..i {
        current = states_of_subspace(psi, &current);
    }
    current
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FiniteStateVerdict {
    FiniteState { dim: usize, steps: usize },
    NotDeterminedWithinBound { bound: usize, dim: usize },
}

/// Grows `V_0 = span{a}`, `V_{k+1} = V_k + S(V_k)` until it stabilizes or
/// `bound` steps have passed.
pub fn is_finite_state(psi: &SelfSimilarStructure, a: &LieElement, bound: usize) -> FiniteStateVerdict {
    let l = psi.algebra();
    let mut current = Subspace::span(l.field(), l.dim(), &[a.coeffs().clone()]);
    for step in 0..bound {
        let next = current.sum(&states_of_subspace(psi, &current));
        if next == current {
            return FiniteStateVerdict::FiniteState { dim: current.dim(), steps: step };
        }
        current = next;
    }
    FiniteStateVerdict::NotDeterminedWithinBound {
        bound,
        dim: current.dim(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementContraction {
    pub element: String,
    /// Least `m_0 ≥ 1` with `S^m(a)` inside the nucleus for every checked
    /// `m ≥ m_0`; `None` when `S^bound(a)` still escapes.
    pub m0: Option<usize>,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionReport {
    pub bound: usize,
    pub elements: Vec<ElementContraction>,
}

impl ContractionReport {
    pub fn contracting(&self) -> bool {
        self.elements.iter().all(|e| e.m0.is_some())
    }
}

pub fn contracting_check(
    psi: &SelfSimilarStructure,
    nucleus: &Subspace,
    elements: &[LieElement],
    bound: usize,
) -> ContractionReport {
    let l = psi.algebra();
    let entries = elements
        .iter()
        .map(|a| {
            let mut current = Subspace::span(l.field(), l.dim(), &[a.coeffs().clone()]);
            let mut dims = Vec::new();
            let mut last_escape = 0;
            for m in 1..=bound {
                current = states_of_subspace(psi, &current);
                dims.push(current.dim());
                if !current.is_subspace_of(nucleus) {
                    last_escape = m;
                }
            }
            ElementContraction {
                element: l.format(a),
                m0: (last_escape < bound).then_some(last_escape + 1),
                dims,
            }
        })
        .collect();
    ContractionReport { bound, elements: entries }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceReport {
    pub recurrent: bool,
    pub image_dim: usize,
    /// Basis symbols the image has to reach.
    pub targets: usize,
    pub missing: Option<String>,
}

/// Whether `θ(H) = L`. For truncated algebras only basis elements of degree
/// at most `D - 1` are required.
pub fn is_recurrent(ve: &VirtualEndomorphism) -> RecurrenceReport {
    let l = ve.algebra();
    let images: Vec<SparseVec> = ve.images().iter().map(|e| e.coeffs().clone()).collect();
    let image = Subspace::span(l.field(), l.dim(), &images);
    let targets: Vec<usize> = match (l.degrees(), l.degree_bound()) {
        (Some(deg), Some(d)) => (0..l.dim()).filter(|&b| deg[b] < d).collect(),
        _ => (0..l.dim()).collect(),
    };
    let missing = targets
        .iter()
        .find(|&&b| !image.contains(&SparseVec::unit(b, l.field())))
        .map(|&b| l.symbol(b).to_string());
    RecurrenceReport {
        recurrent: missing.is_none(),
        image_dim: image.dim(),
        targets: targets.len(),
        missing,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeaklyBranchedReport {
    pub contains: bool,
    /// First `z ⊗ k` outside `ψ(K)`.
    pub missing: Option<String>,
    /// `dim(ψ(K) ∩ (x_1 ⊗ L))`.
    pub obstruction_dim: usize,
}

/// Tests `X ⊗ K ⊆ ψ(K)` for the given ideal `K`, and measures
/// `ψ(K) ∩ (x_1 ⊗ L)`. Brackets leaving the truncation are not used to
/// decide whether `K` is an ideal.
pub fn weakly_branched_witness_test(psi: &SelfSimilarStructure, ideal: &Subspace) -> Result<WeaklyBranchedReport> {
    let l = psi.algebra();
    let w = psi.wreath();
    let x = w.alphabet();
    let field = l.field();
    for k in ideal.basis() {
        let k = LieElement::from_vec(k.clone());
        for b in 0..l.dim() {
            match l.bracket(&l.basis_element(b), &k) {
                Ok(v) if !ideal.contains(v.coeffs()) => {
                    return Err(Error::InvalidParameter(format!(
                        "K is not an ideal: [{}, {}] = {}",
                        l.symbol(b),
                        l.format(&k),
                        l.format(&v)
                    )))
                }
                Ok(_) | Err(Error::TruncationExceeded(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let images: Vec<SparseVec> = ideal
        .basis()
        .iter()
        .map(|k| w.flatten(&psi.psi(&LieElement::from_vec(k.clone()))))
        .collect();
    let flat = w.flat_dim();
    let image = Subspace::span(field, flat, &images);
    let mut missing = None;
    'outer: for m in x.basis() {
        for k in ideal.basis() {
            let k = LieElement::from_vec(k.clone());
            let target = w.tensor(&x.monomial(m.clone()), &k);
            if !image.contains(&w.flatten(&target)) {
                missing = Some(w.format(&target));
                break 'outer;
            }
        }
    }
    let obstruction_dim = if x.nvars() == 0 || x.dim() < 2 {
        0
    } else {
        let x1: Vec<SparseVec> = (0..l.dim())
            .map(|b| w.flatten(&w.tensor(&x.var(0), &l.basis_element(b))))
            .collect();
        image.intersection(&Subspace::span(field, flat, &x1)).dim()
    };
    Ok(WeaklyBranchedReport {
        contains: missing.is_none(),
        missing,
        obstruction_dim,
    })
}
