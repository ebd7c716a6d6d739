use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lie::{LieAlgebra, LieElement, SemidirectDecomposition};
use crate::linalg::{CoordinateSolver, SparseVec, Subspace};

/// A linear map `θ : H → L` on an ideal `H`, together with a complement
/// `L_0`, the section basis `y_1..y_n` inside it and the order `m`.
///
/// `θ` is given on a linearly independent family spanning `H`.
#[derive(Clone)]
pub struct VirtualEndomorphism {
    algebra: Arc<LieAlgebra>,
    ideal: Subspace,
    domain: Vec<LieElement>,
    images: Vec<LieElement>,
    solver: Arc<CoordinateSolver>,
    complement: Vec<LieElement>,
    section: Vec<usize>,
    order: u32,
}

impl std::fmt::Debug for VirtualEndomorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VirtualEndomorphism")
            .field("algebra", &self.algebra.name())
            .field("ideal_dim", &self.ideal.dim())
            .field("complement", &self.complement.len())
            .field("section", &self.section)
            .field("order", &self.order)
            .finish()
    }
}

impl VirtualEndomorphism {
    /// `order` is forced to `p` in characteristic `p` and required in
    /// characteristic 0.
    pub fn new(
        algebra: Arc<LieAlgebra>,
        domain: Vec<LieElement>,
        images: Vec<LieElement>,
        complement: Vec<LieElement>,
        section: Vec<usize>,
        order: Option<u32>,
    ) -> Result<Self> {
        let field = algebra.field();
        if domain.len() != images.len() {
            return Err(Error::InvalidParameter(format!(
                "θ needs one image per spanning vector ({} vs {})",
                domain.len(),
                images.len()
            )));
        }
        if let Some(&bad) = section.iter().find(|&&s| s >= complement.len()) {
            return Err(Error::InvalidParameter(format!("section index {bad} outside the complement")));
        }
        let order = match (field.characteristic(), order) {
            (0, Some(m)) if m >= 1 => m,
            (0, _) => return Err(Error::InvalidParameter("char 0 needs an order m ≥ 1".into())),
            (p, None) => p,
            (p, Some(m)) if m == p => p,
            (p, Some(m)) => {
                return Err(Error::HypothesisViolated(format!(
                    "in characteristic p the order must be m = p (p = {p}, m = {m})"
                )))
            }
        };
        let vectors: Vec<SparseVec> = domain.iter().map(|h| h.coeffs().clone()).collect();
        let solver = CoordinateSolver::new(field, &vectors)
            .map_err(|_| Error::InvalidParameter("the spanning family of H is dependent".into()))?;
        let ideal = Subspace::span(field, algebra.dim(), &vectors);
        Ok(VirtualEndomorphism {
            algebra,
            ideal,
            domain,
            images,
            solver: Arc::new(solver),
            complement,
            section,
            order,
        })
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    /// `H` in canonical echelon form.
    pub fn ideal(&self) -> &Subspace {
        &self.ideal
    }

    /// The spanning family `θ` is given on.
    pub fn domain(&self) -> &[LieElement] {
        &self.domain
    }

    pub fn images(&self) -> &[LieElement] {
        &self.images
    }

    /// The basis of `L_0`.
    pub fn complement(&self) -> &[LieElement] {
        &self.complement
    }

    pub fn section_indices(&self) -> &[usize] {
        &self.section
    }

    /// `y_1..y_n`.
    pub fn section(&self) -> Vec<LieElement> {
        self.section.iter().map(|&i| self.complement[i].clone()).collect()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn decomposition(&self) -> SemidirectDecomposition {
        SemidirectDecomposition::new(self.ideal.clone(), self.complement.clone())
    }

    /// `θ(h)`; fails when `h ∉ H`.
    pub fn theta(&self, h: &LieElement) -> Result<LieElement> {
        let coords = self.solver.solve(h.coeffs()).ok_or_else(|| {
            Error::NotInSubspace(format!("{} is not in H", self.algebra.format(h)))
        })?;
        let mut out = LieElement::zero();
        for (k, c) in &coords {
            out.add_scaled(c, &self.images[*k]);
        }
        Ok(out)
    }

    /// First pair of spanning vectors with `θ([h1, h2]) ≠ [θ(h1), θ(h2)]`,
    /// formatted as `(h1, h2, lhs, rhs)`. Pairs leaving the truncation are
    /// skipped.
    pub fn homomorphism_defect(&self) -> Result<Option<[String; 4]>> {
        let l = &self.algebra;
        for i in 0..self.domain.len() {
            for j in i + 1..self.domain.len() {
                let bracket = match l.bracket(&self.domain[i], &self.domain[j]) {
                    Ok(b) => b,
                    Err(Error::TruncationExceeded(_)) => continue,
                    Err(e) => return Err(e),
                };
                let lhs = self.theta(&bracket)?;
                let rhs = match l.bracket(&self.images[i], &self.images[j]) {
                    Ok(b) => b,
                    Err(Error::TruncationExceeded(_)) => continue,
                    Err(e) => return Err(e),
                };
                if lhs != rhs {
                    return Ok(Some([
                        l.format(&self.domain[i]),
                        l.format(&self.domain[j]),
                        l.format(&lhs),
                        l.format(&rhs),
                    ]));
                }
            }
        }
        Ok(None)
    }

    /// The same data with a different section or complement.
    pub fn with_complement(&self, complement: Vec<LieElement>, section: Vec<usize>) -> Result<Self> {
        Self::new(
            self.algebra.clone(),
            self.domain.clone(),
            self.images.clone(),
            complement,
            section,
            Some(self.order),
        )
    }
}
