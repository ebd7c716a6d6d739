use std::sync::Arc;

use super::profile::tuples;
use super::{check_conditions, verify_homomorphism, ConditionProfile, SelfSimilarStructure, VirtualEndomorphism};
use crate::error::{Error, Result};
use crate::field::{factorial_inverse, FieldSpec};
use crate::lie::LieElement;
use crate::linalg::{kernel_vectors, CoordinateSolver, SparseVec, Subspace};
use crate::truncalg::{parse_sl_symbol, sl_derivation, sl_matrix_algebra, sl_realization, sl_unit, Monomial, TruncPolyAlgebra};
use crate::wreath::WreathProduct;

/// `ψ(h) = Σ_I (I!)^{-1} x^I ⊗ θ(y^I ∘ h)` on `H` and the profile's
/// derivations on `L_0`, after the conditions pass. The result is checked
/// with [`verify_homomorphism`] before it is returned.
pub fn build_psi(ve: &VirtualEndomorphism, profile: &ConditionProfile) -> Result<SelfSimilarStructure> {
    let alphabet = profile.alphabet(ve.field(), ve.complement().len(), ve.order())?;
    build_psi_with(ve, profile, alphabet)
}

/// [`build_psi`] over a caller-chosen alphabet, for instance a larger degree
/// bound in characteristic 0.
pub fn build_psi_with(
    ve: &VirtualEndomorphism,
    profile: &ConditionProfile,
    alphabet: TruncPolyAlgebra,
) -> Result<SelfSimilarStructure> {
    let report = check_conditions(profile, ve)?;
    if let Some(f) = &report.failure {
        return Err(Error::ConditionsFailed(format!("{} [{}]: {}", f.identity, f.stage, f.witness)));
    }
    let n = profile.nvars(ve.complement().len());
    if alphabet.nvars() != n {
        return Err(Error::InvalidParameter(format!(
            "the profile needs {n} variables, the alphabet has {}",
            alphabet.nvars()
        )));
    }
    let l = ve.algebra().clone();
    let field = ve.field();
    let wreath = WreathProduct::new(alphabet.clone(), l.clone());
    let (_, derivations) = profile.l0_basis(&alphabet, ve.complement().len());
    let letters = ve.section();

    let mut generators = Vec::new();
    for h in ve.domain() {
        let mut image = wreath.zero();
        for t in tuples(n, ve.order()) {
            let m = Monomial(t.clone());
            if !alphabet.survives(&m) {
                continue;
            }
            let state = ve.theta(&l.ad_word(&letters, &t, h)?)?;
            let mut c = field.one();
            for &e in &t {
                c = c * factorial_inverse(e, field)?;
            }
            image.add_tensor_term(m, &state.scaled(&c));
        }
        generators.push(image);
    }
    for d in derivations {
        generators.push(wreath.from_derivation(d));
    }

    let family: Vec<SparseVec> = ve
        .domain()
        .iter()
        .chain(ve.complement())
        .map(|e| e.coeffs().clone())
        .collect();
    let solver = CoordinateSolver::new(field, &family)
        .map_err(|_| Error::Decomposition("H and L_0 overlap".into()))?;
    let images = (0..l.dim())
        .map(|b| {
            let coords = solver
                .solve(l.basis_element(b).coeffs())
                .ok_or_else(|| Error::Decomposition(format!("{} is outside H + L_0", l.symbol(b))))?;
            let mut out = wreath.zero();
            for (k, c) in &coords {
                out.add_scaled(c, &generators[*k]);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let psi = SelfSimilarStructure::new(
        format!("psi[{profile}]"),
        format!("built from θ on {} with profile {profile}", l.name()),
        wreath,
        images,
    )?;
    checked(psi)
}

fn checked(psi: SelfSimilarStructure) -> Result<SelfSimilarStructure> {
    let report = verify_homomorphism(&psi)?;
    match report.counterexample {
        None => Ok(psi),
        Some(c) => Err(Error::NotHomomorphism(format!(
            "({}, {}): {} ≠ {}",
            c.left, c.right, c.image_of_bracket, c.bracket_of_images
        ))),
    }
}

fn sl_alphabet(n: usize, field: FieldSpec) -> Result<TruncPolyAlgebra> {
    match field.characteristic() {
        0 => TruncPolyAlgebra::new(field, n, Some(4)),
        _ => TruncPolyAlgebra::new(field, n, None),
    }
}

/// The twisted structure on `sl_{n+1}`: `E_{i,n+1} ↦ ∂_i`,
/// `E_{i,j} ↦ 1⊗E_{i,j} + der(E_{i,j})` and
/// `E_{n+1,i} ↦ Σ_j x_j ⊗ (E_{j,i} - δ_{i,j} E_{n+1,n+1}) + 1⊗E_{n+1,i} + der(E_{n+1,i})`.
pub fn build_psi_twisted(n: usize, field: FieldSpec) -> Result<SelfSimilarStructure> {
    let l = Arc::new(sl_matrix_algebra(n, field)?);
    let x = sl_alphabet(n, field)?;
    let wreath = WreathProduct::new(x.clone(), l.clone());
    let images = l
        .symbols()
        .iter()
        .map(|s| {
            let (a, b) = parse_sl_symbol(s).expect("generated symbol");
            let der = wreath.from_derivation(sl_derivation(&x, a, b)?);
            if b == n + 1 {
                return Ok(der);
            }
            let mut out = wreath.tensor(&x.one(), &sl_unit(&l, n, a, b)).plus(&der);
            if a == n + 1 {
                for j in 1..=n {
                    let mut coeff = sl_unit(&l, n, j, b);
                    if j == b {
                        coeff = coeff.minus(&sl_unit(&l, n, n + 1, n + 1));
                    }
                    out = out.plus(&wreath.tensor(&x.var(j - 1), &coeff));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let psi = SelfSimilarStructure::new(
        "sl_twisted",
        format!("twisted self-similar sl_{} over {}", n + 1, field_name(field)),
        wreath,
        images,
    )?;
    checked(psi)
}

/// `ψ(a) = 1⊗a + der(a)` on `sl_{n+1}`.
pub fn build_psi_diagonal(n: usize, field: FieldSpec) -> Result<SelfSimilarStructure> {
    let realization = sl_realization(n, field)?;
    let l = Arc::new(realization.algebra.clone());
    let x = realization.alphabet.clone();
    let wreath = WreathProduct::new(x.clone(), l.clone());
    let images = (0..l.dim())
        .map(|b| {
            wreath
                .tensor(&x.one(), &l.basis_element(b))
                .plus(&wreath.from_derivation(realization.images[b].clone()))
        })
        .collect();
    let psi = SelfSimilarStructure::new(
        "sl_diagonal",
        format!("diagonal self-similar sl_{} over {}", n + 1, field_name(field)),
        wreath,
        images,
    )?;
    checked(psi)
}

fn field_name(field: FieldSpec) -> String {
    match field.characteristic() {
        0 => "Q".into(),
        p => format!("F_{p}"),
    }
}

/// `H = Ker(πψ)` with `θ = (ε ⊗ id)ψ` on its echelon basis. The complement
/// is left empty. The order is `p` in characteristic `p`; in characteristic
/// 0 it is one more than the largest exponent of any variable in the
/// images.
pub fn associated_endomorphism(psi: &SelfSimilarStructure) -> Result<VirtualEndomorphism> {
    let l = psi.algebra();
    let w = psi.wreath();
    let field = l.field();
    let columns: Vec<SparseVec> = psi
        .images()
        .iter()
        .map(|u| w.alphabet().derivation_to_vec(u.project_der()))
        .collect();
    let ideal = Subspace::span(field, l.dim(), &kernel_vectors(field, &columns));
    let domain: Vec<LieElement> = ideal.basis().iter().map(|v| LieElement::from_vec(v.clone())).collect();
    let images = domain.iter().map(|h| w.augment(&psi.psi(h))).collect();
    let order = match field.characteristic() {
        0 => {
            let top = psi
                .images()
                .iter()
                .flat_map(|u| u.tensor_part().keys())
                .flat_map(|m| m.0.iter().copied())
                .max()
                .unwrap_or(0);
            Some(top + 1)
        }
        _ => None,
    };
    VirtualEndomorphism::new(l.clone(), domain, images, Vec::new(), Vec::new(), order)
}
