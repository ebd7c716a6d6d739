//! Actions on the levels `X^{⊗m}` induced by a self-similar structure.
//!
//! A basis element `a` with image `ψ(a) = Σ_z z ⊗ a_z + δ_a` acts by
//! `a·(v ⊗ w) = Σ_z (z v) ⊗ (a_z·w) + δ_a(v) ⊗ w`.
//! Tuples of basis monomials are indexed with the first factor most significant.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use super::{WreathElement, WreathProduct};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::lie::LieElement;
use crate::linalg::{kernel, SparseMatrix, SparseVec, Subspace};
use crate::truncalg::TruncPolyAlgebra;

/// Default cap on `dim X^{⊗m}`, overridden by `SELFSIM_MAX_DIM`.
pub const DEFAULT_MAX_DIM: usize = 729;

fn env_cap() -> usize {
    std::env::var("SELFSIM_MAX_DIM")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

fn level_dim(alphabet: &TruncPolyAlgebra, level: usize, cap: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..level {
        dim = dim
            .checked_mul(alphabet.dim())
            .filter(|d| *d <= cap)
            .ok_or(Error::DimensionCap {
                dim: alphabet.dim().saturating_pow(level as u32),
                cap,
            })?;
    }
    Ok(dim)
}

/// A vector of `X^{⊗m}` keyed by tuples of monomial indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorLevelVector {
    pub level: usize,
    pub terms: BTreeMap<Vec<usize>, Scalar>,
}

impl TensorLevelVector {
    pub fn zero(level: usize) -> Self {
        TensorLevelVector {
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(tuple: Vec<usize>, one: Scalar) -> Self {
        let mut out = Self::zero(tuple.len());
        out.terms.insert(tuple, one);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, tuple: Vec<usize>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&tuple) {
            Some(existing) => {
                *existing = &*existing + c;
                if existing.is_zero() {
                    self.terms.remove(&tuple);
                }
            }
            None => {
                self.terms.insert(tuple, c.clone());
            }
        }
    }

    /// Flat coordinates with the first factor most significant.
    pub fn to_sparse(&self, base: usize) -> SparseVec {
        self.terms
            .iter()
            .map(|(t, c)| (t.iter().fold(0, |acc, i| acc * base + i), c.clone()))
            .collect()
    }

    pub fn from_sparse(v: &SparseVec, base: usize, level: usize) -> Self {
        let mut out = Self::zero(level);
        for (k, c) in v {
            let mut tuple = vec![0; level];
            let mut rest = *k;
            for slot in tuple.iter_mut().rev() {
                *slot = rest % base;
                rest /= base;
            }
            out.add_term(tuple, c);
        }
        out
    }
}

/// Direct recursive evaluation of `a·t` on `X^{⊗m}`.
pub fn level_action(
    wreath: &WreathProduct,
    images: &[WreathElement],
    a: &LieElement,
    t: &TensorLevelVector,
) -> Result<TensorLevelVector> {
    let mut out = TensorLevelVector::zero(t.level);
    if t.level == 0 {
        return Ok(out);
    }
    let x = wreath.alphabet();
    let image = combine(wreath, images, a);
    for (tuple, c) in &t.terms {
        let head = x.monomial(x.basis()[tuple[0]].clone());
        let tail = TensorLevelVector {
            level: t.level - 1,
            terms: BTreeMap::from([(tuple[1..].to_vec(), c.clone())]),
        };
        for (z, az) in image.states() {
            let moved = x.mul(&x.monomial(z.clone()), &head)?;
            if moved.is_zero() {
                continue;
            }
            let inner = level_action(wreath, images, az, &tail)?;
            for (m, mc) in moved.terms() {
                let mi = x.monomial_index(m).expect("basis monomial");
                for (rest, rc) in &inner.terms {
                    let mut key = vec![mi];
                    key.extend_from_slice(rest);
                    out.add_term(key, &(mc * rc));
                }
            }
        }
        let shifted = x.apply_derivation(image.project_der(), &head)?;
        for (m, mc) in shifted.terms() {
            let mi = x.monomial_index(m).expect("basis monomial");
            let mut key = vec![mi];
            key.extend_from_slice(&tuple[1..]);
            out.add_term(key, &(mc * c));
        }
    }
    Ok(out)
}

fn combine(wreath: &WreathProduct, images: &[WreathElement], a: &LieElement) -> WreathElement {
    let mut out = wreath.zero();
    for (b, c) in a.coeffs() {
        out.add_scaled(c, &images[*b]);
    }
    out
}

/// Memoized matrices of the basis elements on every level.
pub struct LevelEngine {
    wreath: Arc<WreathProduct>,
    images: Arc<Vec<WreathElement>>,
    cap: usize,
    cache: Mutex<HashMap<(usize, usize), Arc<SparseMatrix>>>,
}

impl LevelEngine {
    /// Uses the cap from `SELFSIM_MAX_DIM` (default 729).
    pub fn new(wreath: Arc<WreathProduct>, images: Arc<Vec<WreathElement>>) -> Self {
        Self::with_cap(wreath, images, env_cap())
    }

    pub fn with_cap(wreath: Arc<WreathProduct>, images: Arc<Vec<WreathElement>>, cap: usize) -> Self {
        assert_eq!(images.len(), wreath.algebra().dim(), "one image per basis element");
        LevelEngine {
            wreath,
            images,
            cap,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn wreath(&self) -> &WreathProduct {
        &self.wreath
    }

    pub fn images(&self) -> &[WreathElement] {
        &self.images
    }

    pub fn level_dim(&self, level: usize) -> Result<usize> {
        level_dim(self.wreath.alphabet(), level, self.cap)
    }

    /// The matrix of basis element `b` on `X^{⊗level}`.
    pub fn basis_matrix(&self, b: usize, level: usize) -> Result<Arc<SparseMatrix>> {
        self.ensure(level)?;
        Ok(self.cache.lock().unwrap()[&(b, level)].clone())
    }

    fn ensure(&self, level: usize) -> Result<()> {
        let dim_l = self.wreath.algebra().dim();
        if (0..dim_l).all(|b| self.cache.lock().unwrap().contains_key(&(b, level))) {
            return Ok(());
        }
        let dim = self.level_dim(level)?;
        if level == 0 {
            let mut cache = self.cache.lock().unwrap();
            for b in 0..dim_l {
                cache.insert((b, 0), Arc::new(SparseMatrix::zero(1, 1)));
            }
            return Ok(());
        }
        self.ensure(level - 1)?;
        let previous: Vec<Arc<SparseMatrix>> = {
            let cache = self.cache.lock().unwrap();
            (0..dim_l).map(|b| cache[&(b, level - 1)].clone()).collect()
        };
        let x = self.wreath.alphabet();
        let inner_dim = dim / x.dim();
        // Per basis element: multiplication matrices of the states and the
        // derivation matrix.
        let built = (0..dim_l)
            .into_par_iter()
            .map(|b| -> Result<SparseMatrix> {
                let image = &self.images[b];
                let states = image
                    .states()
                    .map(|(z, az)| Ok((x.multiplication_matrix(&x.monomial(z.clone()))?, az)))
                    .collect::<Result<Vec<_>>>()?;
                let der = x.derivation_matrix(image.project_der())?;
                let columns = (0..dim)
                    .into_par_iter()
                    .map(|col| {
                        let (v1, rest) = (col / inner_dim, col % inner_dim);
                        let mut out = SparseVec::new();
                        for (mult, az) in &states {
                            let moved = mult.column(v1);
                            if moved.is_zero() {
                                continue;
                            }
                            let mut inner = SparseVec::new();
                            for (c, coeff) in az.coeffs() {
                                inner.add_scaled(coeff, previous[*c].column(rest));
                            }
                            for (r1, c1) in moved {
                                for (r2, c2) in &inner {
                                    out.add_term(r1 * inner_dim + r2, &(c1 * c2));
                                }
                            }
                        }
                        for (r1, c1) in der.column(v1) {
                            out.add_term(r1 * inner_dim + rest, c1);
                        }
                        out
                    })
                    .collect();
                Ok(SparseMatrix::from_columns(dim, columns))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut cache = self.cache.lock().unwrap();
        for (b, m) in built.into_iter().enumerate() {
            cache.insert((b, level), Arc::new(m));
        }
        Ok(())
    }
}

/// The matrix of an arbitrary element on `X^{⊗level}`.
pub fn level_operator_matrix(engine: &LevelEngine, a: &LieElement, level: usize) -> Result<SparseMatrix> {
    let dim = engine.level_dim(level)?;
    let mut out = SparseMatrix::zero(dim, dim);
    for (b, c) in a.coeffs() {
        out.add_scaled(c, engine.basis_matrix(*b, level)?.as_ref());
    }
    Ok(out)
}

/// Elements of `L` acting trivially on `X^{⊗level}`.
pub fn level_kernel(engine: &LevelEngine, level: usize) -> Result<Subspace> {
    let field = engine.wreath().algebra().field();
    let columns = (0..engine.wreath().algebra().dim())
        .map(|b| Ok(engine.basis_matrix(b, level)?.flatten()))
        .collect::<Result<Vec<_>>>()?;
    Ok(kernel(field, &columns))
}

/// The portrait components of an element: `comp_0 = δ_a`,
/// `comp_j(a) = Σ_z z ⊗ comp_{j-1}(a_z)` in `X^{⊗j} ⊗ Der X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelPortrait {
    /// Coordinates `tuple * dim Der X + derivation coordinate`.
    pub components: Vec<SparseVec>,
}

impl LevelPortrait {
    pub fn depth(&self) -> usize {
        self.components.len()
    }

    pub fn vanishes_through(&self, j: usize) -> bool {
        self.components.iter().take(j + 1).all(SparseVec::is_zero)
    }
}

fn basis_portraits(wreath: &WreathProduct, images: &[WreathElement], depth: usize) -> Vec<Vec<SparseVec>> {
    let x = wreath.alphabet();
    let der_dim = x.derivation_space_dim();
    let dim_l = images.len();
    let mut table: Vec<Vec<SparseVec>> = vec![Vec::with_capacity(depth); dim_l];
    for (b, image) in images.iter().enumerate() {
        table[b].push(x.derivation_to_vec(image.project_der()));
    }
    for j in 1..depth {
        let block = x.dim().pow(j as u32 - 1) * der_dim;
        let next: Vec<SparseVec> = images
            .iter()
            .map(|image| {
                let mut out = SparseVec::new();
                for (z, az) in image.states() {
                    let zi = x.monomial_index(z).expect("basis monomial");
                    for (c, coeff) in az.coeffs() {
                        for (k, v) in &table[*c][j - 1] {
                            out.add_term(zi * block + k, &(coeff * v));
                        }
                    }
                }
                out
            })
            .collect();
        for (b, v) in next.into_iter().enumerate() {
            table[b].push(v);
        }
    }
    table
}

/// Components `0..depth` of the portrait of `a`.
pub fn level_portrait(wreath: &WreathProduct, images: &[WreathElement], a: &LieElement, depth: usize) -> LevelPortrait {
    let table = basis_portraits(wreath, images, depth);
    let components = (0..depth)
        .map(|j| {
            let mut out = SparseVec::new();
            for (b, c) in a.coeffs() {
                out.add_scaled(c, &table[*b][j]);
            }
            out
        })
        .collect();
    LevelPortrait { components }
}

/// Elements whose portrait components `0..=j` all vanish. This coincides
/// with the kernel of the action on level `j + 1`.
pub fn portrait_kernel(wreath: &WreathProduct, images: &[WreathElement], j: usize) -> Subspace {
    let table = basis_portraits(wreath, images, j + 1);
    let x = wreath.alphabet();
    let der_dim = x.derivation_space_dim();
    let columns: Vec<SparseVec> = table
        .iter()
        .map(|comps| {
            let mut out = SparseVec::new();
            let mut offset = 0;
            for (i, comp) in comps.iter().enumerate() {
                for (k, v) in comp {
                    out.add_term(offset + k, v);
                }
                offset += x.dim().pow(i as u32) * der_dim;
            }
            out
        })
        .collect();
    kernel(wreath.algebra().field(), &columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::lie::LieAlgebra;

    /// One-dimensional `L = ⟨a⟩` with `ψ(a) = 1 ⊗ a + d`: an additive odometer.
    fn odometer(p: u32) -> (Arc<WreathProduct>, Arc<Vec<WreathElement>>) {
        let field = FieldSpec::prime(p).unwrap();
        let l = Arc::new(LieAlgebra::new("odometer", field, vec!["a".into()]).unwrap());
        let x = TruncPolyAlgebra::new(field, 1, None).unwrap();
        let w = WreathProduct::new(x.clone(), l.clone());
        let image = w.tensor(&x.one(), &l.basis_element(0)).plus(&w.from_derivation(x.partial(0)));
        (Arc::new(w), Arc::new(vec![image]))
    }

    fn kron(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
        let (n, m) = (a.rows(), b.rows());
        let mut cols = Vec::new();
        for i in 0..a.cols() {
            for j in 0..b.cols() {
                let mut v = SparseVec::new();
                for (r1, c1) in a.column(i) {
                    for (r2, c2) in b.column(j) {
                        v.add_term(r1 * m + r2, &(c1 * c2));
                    }
                }
                cols.push(v);
            }
        }
        SparseMatrix::from_columns(n * m, cols)
    }

    #[test]
    fn engine_matches_kronecker_recursion() {
        let (w, images) = odometer(3);
        let engine = LevelEngine::with_cap(w.clone(), images.clone(), 729);
        let field = w.alphabet().field();
        let d = w.alphabet().derivation_matrix(&w.alphabet().partial(0)).unwrap();
        let mut expected = d.clone();
        for level in 1..=4 {
            assert_eq!(*engine.basis_matrix(0, level).unwrap(), expected);
            let identity = SparseMatrix::identity(3, field);
            expected = kron(&d, &SparseMatrix::identity(expected.rows(), field));
            let prev = engine.basis_matrix(0, level).unwrap();
            expected.add_scaled(&field.one(), &kron(&identity, &prev));
        }
    }

    #[test]
    fn engine_matches_direct_action() {
        let (w, images) = odometer(3);
        let engine = LevelEngine::with_cap(w.clone(), images.clone(), 729);
        let a = w.algebra().basis_element(0);
        let m = engine.basis_matrix(0, 3).unwrap();
        let one = w.alphabet().field().one();
        for col in 0..27 {
            let t = TensorLevelVector::from_sparse(&SparseVec::unit(col, w.alphabet().field()), 3, 3);
            let direct = level_action(&w, &images, &a, &t).unwrap();
            assert_eq!(direct.to_sparse(3), *m.column(col));
            assert_eq!(t.terms.values().next(), Some(&one));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let (w, images) = odometer(3);
        let engine = LevelEngine::with_cap(w, images, 30);
        assert!(engine.basis_matrix(0, 3).is_ok());
        assert_eq!(
            engine.basis_matrix(0, 4).unwrap_err(),
            Error::DimensionCap { dim: 81, cap: 30 }
        );
    }

    #[test]
    fn portrait_kernel_is_shifted_level_kernel() {
        let (w, images) = odometer(3);
        let engine = LevelEngine::with_cap(w.clone(), images.clone(), 729);
        for j in 0..3 {
            assert_eq!(portrait_kernel(&w, &images, j), level_kernel(&engine, j + 1).unwrap());
        }
        assert!(level_kernel(&engine, 0).unwrap().is_full());
        let p = level_portrait(&w, &images, &w.algebra().basis_element(0), 3);
        assert!(!p.vanishes_through(0));
        assert_eq!(p.depth(), 3);
    }
}
