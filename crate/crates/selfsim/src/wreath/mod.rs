//! The wreath product `L ≀ Der X = (X ⊗ L) ⋉ Der X`.
//!
//! Brackets follow two rules extended bilinearly:
//! `[x_1 ⊗ a_1, x_2 ⊗ a_2] = x_1 x_2 ⊗ [a_1, a_2]` and `[δ, x ⊗ a] = δ(x) ⊗ a`,
//! with derivation parts bracketed in `Der X`.

mod level;

pub use level::{
    level_action, level_kernel, level_operator_matrix, level_portrait, portrait_kernel,
    LevelEngine, LevelPortrait, TensorLevelVector, DEFAULT_MAX_DIM,
};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::Result;
use crate::field::Scalar;
use crate::lie::{AxiomReport, AxiomViolation, LieAlgebra, LieElement};
use crate::linalg::SparseVec;
use crate::truncalg::{Derivation, Monomial, TruncPoly, TruncPolyAlgebra};

/// An element `Σ m ⊗ a_m + δ` of the wreath product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathElement {
    tensor: BTreeMap<Monomial, LieElement>,
    der: Derivation,
}

impl WreathElement {
    pub fn tensor_part(&self) -> &BTreeMap<Monomial, LieElement> {
        &self.tensor
    }

    /// The projection `π` onto `Der X`.
    pub fn project_der(&self) -> &Derivation {
        &self.der
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.is_empty() && self.der.is_zero()
    }

    /// `self += c ⊗ a` at monomial `m`.
    pub fn add_tensor_term(&mut self, m: Monomial, a: &LieElement) {
        if a.is_zero() {
            return;
        }
        let slot = self.tensor.entry(m.clone()).or_default();
        *slot = slot.plus(a);
        if slot.is_zero() {
            self.tensor.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &WreathElement) {
        for (m, a) in &other.tensor {
            self.add_tensor_term(m.clone(), &a.scaled(c));
        }
        self.der.add_scaled(c, &other.der);
    }

    pub fn scaled(&self, c: &Scalar) -> WreathElement {
        let mut out = WreathElement {
            tensor: BTreeMap::new(),
            der: Derivation::zero(self.der.images().len()),
        };
        out.add_scaled(c, self);
        out
    }

    pub fn plus(&self, other: &WreathElement) -> WreathElement {
        let mut out = self.clone();
        out.add_scaled(&one_like(other, self), other);
        out
    }

    pub fn minus(&self, other: &WreathElement) -> WreathElement {
        let mut out = self.clone();
        out.add_scaled(&-one_like(other, self), other);
        out
    }

    /// The states: the `L`-coefficients of the tensor part.
    pub fn states(&self) -> impl Iterator<Item = (&Monomial, &LieElement)> {
        self.tensor.iter()
    }
}

fn one_like(a: &WreathElement, b: &WreathElement) -> Scalar {
    let sample = a
        .tensor
        .values()
        .chain(b.tensor.values())
        .flat_map(|e| e.coeffs().iter().map(|(_, c)| c.clone()))
        .chain(
            a.der
                .images()
                .iter()
                .chain(b.der.images())
                .flat_map(|p| p.terms().values().cloned()),
        )
        .next();
    match sample {
        Some(c) => c.field().one(),
        // Both sides are zero; any unit works since nothing gets scaled.
        None => crate::field::FieldSpec::Rational.one(),
    }
}

/// The ambient wreath product for a given alphabet and algebra.
#[derive(Clone, Debug)]
pub struct WreathProduct {
    alphabet: TruncPolyAlgebra,
    algebra: Arc<LieAlgebra>,
}

impl WreathProduct {
    pub fn new(alphabet: TruncPolyAlgebra, algebra: Arc<LieAlgebra>) -> Self {
        assert_eq!(alphabet.field(), algebra.field(), "alphabet and algebra over different fields");
        WreathProduct { alphabet, algebra }
    }

    pub fn alphabet(&self) -> &TruncPolyAlgebra {
        &self.alphabet
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn zero(&self) -> WreathElement {
        WreathElement {
            tensor: BTreeMap::new(),
            der: Derivation::zero(self.alphabet.nvars()),
        }
    }

    pub fn from_derivation(&self, d: Derivation) -> WreathElement {
        WreathElement {
            tensor: BTreeMap::new(),
            der: d,
        }
    }

    /// `u ⊗ a` for a polynomial `u`.
    pub fn tensor(&self, u: &TruncPoly, a: &LieElement) -> WreathElement {
        let mut out = self.zero();
        for (m, c) in u.terms() {
            out.add_tensor_term(m.clone(), &a.scaled(c));
        }
        out
    }

    /// `m ⊗ a` for a monomial given by exponents.
    pub fn monomial_tensor(&self, exponents: &[u32], a: &LieElement) -> Result<WreathElement> {
        Ok(self.tensor(&self.alphabet.monomial_checked(exponents)?, a))
    }

    /// `δ` applied to the tensor factor: `Σ δ(m) ⊗ a_m`.
    fn act_on_tensor(&self, d: &Derivation, u: &WreathElement, out: &mut WreathElement, sign: &Scalar) -> Result<()> {
        if d.is_zero() {
            return Ok(());
        }
        for (m, a) in &u.tensor {
            let image = self.alphabet.apply_derivation(d, &self.alphabet.monomial(m.clone()))?;
            for (n, c) in image.terms() {
                out.add_tensor_term(n.clone(), &a.scaled(&(sign * c)));
            }
        }
        Ok(())
    }

    pub fn bracket(&self, u: &WreathElement, v: &WreathElement) -> Result<WreathElement> {
        let field = self.alphabet.field();
        let mut out = self.zero();
        let mut raw: BTreeMap<Monomial, LieElement> = BTreeMap::new();
        for (m1, a1) in &u.tensor {
            for (m2, a2) in &v.tensor {
                let m = m1.times(m2);
                if !self.alphabet.survives(&m) {
                    continue;
                }
                let b = self.algebra.bracket(a1, a2)?;
                let slot = raw.entry(m).or_default();
                *slot = slot.plus(&b);
            }
        }
        for (m, a) in raw {
            if !a.is_zero() {
                self.alphabet.check_region(&m)?;
                out.add_tensor_term(m, &a);
            }
        }
        self.act_on_tensor(&u.der, v, &mut out, &field.one())?;
        self.act_on_tensor(&v.der, u, &mut out, &-field.one())?;
        out.der = self.alphabet.derivation_bracket(&u.der, &v.der)?;
        Ok(out)
    }

    /// `(ε ⊗ id)`: the coefficient of the constant monomial.
    pub fn augment(&self, u: &WreathElement) -> LieElement {
        u.tensor
            .get(&Monomial::one(self.alphabet.nvars()))
            .cloned()
            .unwrap_or_default()
    }

    /// Dimension of the coordinate space used by [`flatten`](Self::flatten).
    pub fn flat_dim(&self) -> usize {
        self.alphabet.dim() * self.algebra.dim() + self.alphabet.derivation_space_dim()
    }

    /// Coordinates: `monomial * dim L + basis` for tensor terms, then the
    /// derivation coordinates offset by `dim X * dim L`.
    pub fn flatten(&self, u: &WreathElement) -> SparseVec {
        let dim_l = self.algebra.dim();
        let offset = self.alphabet.dim() * dim_l;
        let mut out = SparseVec::new();
        for (m, a) in &u.tensor {
            let mi = self.alphabet.monomial_index(m).expect("monomial inside the region");
            for (b, c) in a.coeffs() {
                out.add_term(mi * dim_l + b, c);
            }
        }
        for (k, c) in &self.alphabet.derivation_to_vec(&u.der) {
            out.add_term(offset + k, c);
        }
        out
    }

    pub fn unflatten(&self, v: &SparseVec) -> WreathElement {
        let dim_l = self.algebra.dim();
        let offset = self.alphabet.dim() * dim_l;
        let mut out = self.zero();
        let mut der = SparseVec::new();
        for (k, c) in v {
            if *k < offset {
                let m = self.alphabet.basis()[k / dim_l].clone();
                out.add_tensor_term(m, &LieElement::from_vec(SparseVec::unit(k % dim_l, c.field()).scaled(c)));
            } else {
                der.add_term(k - offset, c);
            }
        }
        out.der = self.alphabet.derivation_from_vec(&der);
        out
    }

    /// Exhaustive antisymmetry and Jacobi check on the flat basis of
    /// `(X ⊗ L) ⋉ Der X`.
    pub fn verify_axioms(&self) -> Result<AxiomReport> {
        let basis: Vec<WreathElement> = (0..self.flat_dim())
            .map(|k| self.unflatten(&SparseVec::unit(k, self.algebra.field())))
            .collect();
        let name = |k: usize| self.format(&basis[k]);
        let mut report = AxiomReport {
            pairs_checked: 0,
            triples_checked: 0,
            triples_skipped: 0,
            violation: None,
        };
        for i in 0..basis.len() {
            for j in i..basis.len() {
                report.pairs_checked += 1;
                let sum = self.bracket(&basis[i], &basis[j])?.plus(&self.bracket(&basis[j], &basis[i])?);
                if !sum.is_zero() || (i == j && !self.bracket(&basis[i], &basis[i])?.is_zero()) {
                    report.violation = Some(AxiomViolation::Antisymmetry { left: name(i), right: name(j) });
                    return Ok(report);
                }
            }
        }
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let ij = self.bracket(&basis[i], &basis[j])?;
                for k in j + 1..basis.len() {
                    let r = self
                        .bracket(&basis[i], &self.bracket(&basis[j], &basis[k])?)?
                        .plus(&self.bracket(&basis[j], &self.bracket(&basis[k], &basis[i])?)?)
                        .plus(&self.bracket(&basis[k], &ij)?);
                    if !r.is_zero() {
                        report.violation = Some(AxiomViolation::Jacobi {
                            a: name(i),
                            b: name(j),
                            c: name(k),
                            residual: self.format(&r),
                        });
                        return Ok(report);
                    }
                    report.triples_checked += 1;
                }
            }
        }
        Ok(report)
    }

    /// Readable form such as `1⊗q1 - x⊗a0 + d`.
    pub fn format(&self, u: &WreathElement) -> String {
        let mut parts = Vec::new();
        for (m, a) in &u.tensor {
            let text = self.algebra.format(a);
            let wrapped = if a.coeffs().nnz() > 1 { format!("({text})") } else { text };
            parts.push(format!("{m}⊗{wrapped}"));
        }
        if !u.der.is_zero() {
            parts.push(self.alphabet.format_derivation(&u.der));
        }
        if parts.is_empty() {
            return "0".into();
        }
        parts.join(" + ").replace("+ -", "- ").replace("⊗-", "⊗(-1)*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::lie::sl2;

    fn setup() -> WreathProduct {
        let f3 = FieldSpec::prime(3).unwrap();
        WreathProduct::new(TruncPolyAlgebra::new(f3, 1, None).unwrap(), Arc::new(sl2(f3)))
    }

    #[test]
    fn bracket_rules() {
        let w = setup();
        let x = w.alphabet().clone();
        let l = w.algebra().clone();
        let (e, f) = (l.element("e").unwrap(), l.element("f").unwrap());
        let d = w.from_derivation(x.partial(0));
        let xe = w.tensor(&x.var(0), &e);
        assert_eq!(w.bracket(&d, &xe).unwrap(), w.tensor(&x.one(), &e));
        let xf = w.tensor(&x.var(0), &f);
        let x2 = x.mul(&x.var(0), &x.var(0)).unwrap();
        assert_eq!(w.bracket(&xe, &xf).unwrap(), w.tensor(&x2, &l.element("h").unwrap()));
        let u = xe.plus(&d);
        assert!(w.bracket(&u, &u).unwrap().is_zero());
    }

    #[test]
    fn projection_and_flatten() {
        let w = setup();
        let x = w.alphabet().clone();
        let e = w.algebra().element("e").unwrap();
        let u = w.tensor(&x.one(), &e).plus(&w.from_derivation(x.partial(0)));
        assert_eq!(u.project_der(), &x.partial(0));
        assert_eq!(w.augment(&u), e);
        assert_eq!(w.unflatten(&w.flatten(&u)), u);
        assert_eq!(w.format(&u), "1⊗e + d");
    }
}
