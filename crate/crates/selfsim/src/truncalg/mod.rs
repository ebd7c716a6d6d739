//! The alphabet algebra `X` and its derivations.
//!
//! In characteristic `p` the algebra is `k[x_1..x_n]/(x_1^p, …, x_n^p)` of
//! dimension `p^n`. In characteristic zero it is `k[x_1..x_n]` truncated at a
//! total degree `D`, and any result with a surviving term above `D` is an
//! error.

mod named;

pub(crate) use named::frank_basis;

pub use named::{
    frank, from_derivations, heisenberg_realization, jacobson_witt, named_derivation_algebra,
    parse_sl_symbol, sl_derivation, sl_matrix_algebra, sl_realization, sl_unit, witt,
    DerivationRealization,
};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{SparseMatrix, SparseVec};

/// An exponent vector `x_1^{z_1} … x_n^{z_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut z = vec![0; nvars];
        z[i] = 1;
        Monomial(z)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|z| *z == 0)
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Comma-joined exponents, the JSON key form.
    pub fn key(&self) -> String {
        self.0.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn from_key(key: &str) -> Result<Self> {
        key.split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Monomial)
            .map_err(|_| Error::Parse(format!("bad monomial key {key:?}")))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let single = self.0.len() == 1;
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, z)| **z > 0)
            .map(|(i, z)| {
                let var = if single { "x".to_string() } else { format!("x{}", i + 1) };
                if *z == 1 {
                    var
                } else {
                    format!("{var}^{z}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A polynomial in `X`: sparse monomial coefficients, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl TruncPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m);
        match slot {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &TruncPoly) {
        for (m, d) in &other.terms {
            self.add_term(m.clone(), &(c * d));
        }
    }

    pub fn plus(&self, other: &TruncPoly) -> TruncPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn minus(&self, other: &TruncPoly) -> TruncPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> TruncPoly {
        let mut out = TruncPoly::zero();
        out.add_scaled(c, self);
        out
    }
}

/// A derivation of `X`, given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    images: Vec<TruncPoly>,
}

impl Derivation {
    pub fn zero(nvars: usize) -> Self {
        Derivation {
            images: vec![TruncPoly::zero(); nvars],
        }
    }

    pub fn from_images(images: Vec<TruncPoly>) -> Self {
        Derivation { images }
    }

    /// `δ(x_i)`.
    pub fn image(&self, i: usize) -> &TruncPoly {
        &self.images[i]
    }

    pub fn images(&self) -> &[TruncPoly] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(TruncPoly::is_zero)
    }

    pub fn plus(&self, other: &Derivation) -> Derivation {
        Derivation {
            images: self.images.iter().zip(&other.images).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn minus(&self, other: &Derivation) -> Derivation {
        Derivation {
            images: self.images.iter().zip(&other.images).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Derivation {
        Derivation {
            images: self.images.iter().map(|a| a.scaled(c)).collect(),
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &Derivation) {
        for (a, b) in self.images.iter_mut().zip(&other.images) {
            a.add_scaled(c, b);
        }
    }
}

/// The truncated polynomial algebra `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncPolyAlgebra {
    field: FieldSpec,
    nvars: usize,
    degree_bound: Option<u32>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl TruncPolyAlgebra {
    /// `k[x_1..x_n]/(x_i^p)` in characteristic `p`; in characteristic zero a
    /// total-degree bound is required.
    pub fn new(field: FieldSpec, nvars: usize, degree_bound: Option<u32>) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidParameter("X needs at least one variable".into()));
        }
        let p = field.characteristic();
        let mut basis = Vec::new();
        let mut z = vec![0u32; nvars];
        let admissible = |z: &[u32]| match (p, degree_bound) {
            (0, Some(d)) => z.iter().sum::<u32>() <= d,
            (0, None) => false,
            (_, _) => true,
        };
        let cap = match (p, degree_bound) {
            (0, Some(d)) => d,
            (0, None) => {
                return Err(Error::InvalidParameter(
                    "characteristic zero needs a degree bound for X".into(),
                ))
            }
            (_, Some(_)) => {
                return Err(Error::InvalidParameter(
                    "a degree bound applies to characteristic zero only".into(),
                ))
            }
            (p, None) => p - 1,
        };
        // Lexicographic enumeration, last variable fastest.
        loop {
            if admissible(&z) {
                basis.push(Monomial(z.clone()));
            }
            let mut k = nvars;
            loop {
                if k == 0 {
                    let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                    return Ok(TruncPolyAlgebra {
                        field,
                        nvars,
                        degree_bound,
                        basis,
                        index,
                    });
                }
                k -= 1;
                if z[k] < cap {
                    z[k] += 1;
                    break;
                }
                z[k] = 0;
            }
        }
    }

    /// `k[x]/(x^p)`.
    pub fn cyclic(p: u32) -> Result<Self> {
        Self::new(FieldSpec::prime(p)?, 1, None)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree_bound(&self) -> Option<u32> {
        self.degree_bound
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn monomial_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Whether `m` survives the relations (`x_i^p = 0`) in characteristic `p`.
    pub fn survives(&self, m: &Monomial) -> bool {
        let p = self.field.characteristic();
        p == 0 || m.0.iter().all(|z| *z < p)
    }

    /// Rejects a monomial above the degree bound (characteristic zero).
    pub fn check_region(&self, m: &Monomial) -> Result<()> {
        match self.degree_bound {
            Some(d) if m.degree() > d => Err(Error::TruncationExceeded(format!(
                "term {m} of degree {} exceeds {d}",
                m.degree()
            ))),
            _ => Ok(()),
        }
    }

    /// Drops vanishing monomials (char `p`) or rejects terms above the degree
    /// bound (char 0).
    fn settle(&self, raw: TruncPoly) -> Result<TruncPoly> {
        let mut out = TruncPoly::zero();
        for (m, c) in raw.terms {
            if !self.survives(&m) {
                continue;
            }
            self.check_region(&m)?;
            out.terms.insert(m, c);
        }
        Ok(out)
    }

    pub fn one(&self) -> TruncPoly {
        self.monomial(Monomial::one(self.nvars))
    }

    /// `x_i` (zero-based `i`).
    pub fn var(&self, i: usize) -> TruncPoly {
        self.monomial(Monomial::var(self.nvars, i))
    }

    pub fn monomial(&self, m: Monomial) -> TruncPoly {
        let mut p = TruncPoly::zero();
        if self.survives(&m) {
            p.add_term(m, &self.field.one());
        }
        p
    }

    /// A monomial from its exponents, checked against the region.
    pub fn monomial_checked(&self, exponents: &[u32]) -> Result<TruncPoly> {
        if exponents.len() != self.nvars {
            return Err(Error::InvalidParameter("wrong number of exponents".into()));
        }
        let m = Monomial(exponents.to_vec());
        let mut raw = TruncPoly::zero();
        raw.add_term(m, &self.field.one());
        self.settle(raw)
    }

    pub fn mul(&self, u: &TruncPoly, v: &TruncPoly) -> Result<TruncPoly> {
        let mut raw = TruncPoly::zero();
        for (a, ca) in &u.terms {
            for (b, cb) in &v.terms {
                let m = a.times(b);
                if self.survives(&m) {
                    raw.add_term(m, &(ca * cb));
                }
            }
        }
        self.settle(raw)
    }

    /// The constant coefficient `ε(u)`.
    pub fn augmentation(&self, u: &TruncPoly) -> Scalar {
        u.coeff(&Monomial::one(self.nvars)).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> Derivation {
        let mut images = vec![TruncPoly::zero(); self.nvars];
        images[i] = self.one();
        Derivation { images }
    }

    /// `f ∂/∂x_i`.
    pub fn derivation_term(&self, f: TruncPoly, i: usize) -> Derivation {
        let mut images = vec![TruncPoly::zero(); self.nvars];
        images[i] = f;
        Derivation { images }
    }

    /// Leibniz extension: `δ(u) = Σ_i ∂u/∂x_i · δ(x_i)`.
    pub fn apply_derivation(&self, delta: &Derivation, u: &TruncPoly) -> Result<TruncPoly> {
        let mut raw = TruncPoly::zero();
        for (m, c) in &u.terms {
            for (i, image) in delta.images.iter().enumerate() {
                let z = m.0[i];
                if z == 0 || image.is_zero() {
                    continue;
                }
                let coeff = c * self.field.from_i64(z as i64);
                if coeff.is_zero() {
                    continue;
                }
                let mut lowered = m.clone();
                lowered.0[i] -= 1;
                for (n, d) in &image.terms {
                    let prod = lowered.times(n);
                    if self.survives(&prod) {
                        raw.add_term(prod, &(&coeff * d));
                    }
                }
            }
        }
        self.settle(raw)
    }

    /// `[δ1, δ2] = δ1 δ2 - δ2 δ1`, evaluated on the generators.
    pub fn derivation_bracket(&self, d1: &Derivation, d2: &Derivation) -> Result<Derivation> {
        let images = (0..self.nvars)
            .map(|i| {
                let a = self.apply_derivation(d1, &d2.images[i])?;
                let b = self.apply_derivation(d2, &d1.images[i])?;
                Ok(a.minus(&b))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation { images })
    }

    /// Coordinates in the monomial basis.
    pub fn to_vec(&self, u: &TruncPoly) -> SparseVec {
        u.terms
            .iter()
            .map(|(m, c)| (self.index[m], c.clone()))
            .collect()
    }

    pub fn from_vec(&self, v: &SparseVec) -> TruncPoly {
        let mut out = TruncPoly::zero();
        for (i, c) in v {
            out.add_term(self.basis[*i].clone(), c);
        }
        out
    }

    /// Coordinates of a derivation: index `i * dim X + monomial` holds the
    /// coefficient of `monomial · ∂/∂x_i`.
    pub fn derivation_to_vec(&self, d: &Derivation) -> SparseVec {
        let dim = self.dim();
        let mut out = SparseVec::new();
        for (i, image) in d.images.iter().enumerate() {
            for (m, c) in &image.terms {
                out.add_term(i * dim + self.index[m], c);
            }
        }
        out
    }

    pub fn derivation_from_vec(&self, v: &SparseVec) -> Derivation {
        let dim = self.dim();
        let mut images = vec![TruncPoly::zero(); self.nvars];
        for (k, c) in v {
            images[k / dim].add_term(self.basis[k % dim].clone(), c);
        }
        Derivation { images }
    }

    /// Dimension of `Der X` as a coordinate space.
    pub fn derivation_space_dim(&self) -> usize {
        self.nvars * self.dim()
    }

    /// The matrix of `δ` acting on `X`.
    pub fn derivation_matrix(&self, d: &Derivation) -> Result<SparseMatrix> {
        let columns = self
            .basis
            .iter()
            .map(|m| Ok(self.to_vec(&self.apply_derivation(d, &self.monomial(m.clone()))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix::from_columns(self.dim(), columns))
    }

    /// The matrix of multiplication by `u`.
    pub fn multiplication_matrix(&self, u: &TruncPoly) -> Result<SparseMatrix> {
        let columns = self
            .basis
            .iter()
            .map(|m| Ok(self.to_vec(&self.mul(u, &self.monomial(m.clone()))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix::from_columns(self.dim(), columns))
    }

    pub fn format_poly(&self, u: &TruncPoly) -> String {
        crate::lie::format_combination(&self.to_vec(u), |i| self.basis[i].to_string())
            .replace("*1", "")
    }

    /// Human-readable derivation such as `x^2*d1` or `d1 - x*d2`.
    pub fn format_derivation(&self, d: &Derivation) -> String {
        let dim = self.dim();
        let single = self.nvars == 1;
        crate::lie::format_combination(&self.derivation_to_vec(d), |k| {
            let var = if single { "d".to_string() } else { format!("d{}", k / dim + 1) };
            let m = &self.basis[k % dim];
            if m.is_one() {
                var
            } else {
                format!("{m}*{var}")
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x5() -> TruncPolyAlgebra {
        TruncPolyAlgebra::cyclic(5).unwrap()
    }

    fn xpow(x: &TruncPolyAlgebra, k: u32) -> TruncPoly {
        x.monomial(Monomial(vec![k]))
    }

    #[test]
    fn dimensions_and_ordering() {
        let x = TruncPolyAlgebra::new(FieldSpec::prime(3).unwrap(), 2, None).unwrap();
        assert_eq!(x.dim(), 9);
        assert_eq!(x.basis()[1], Monomial(vec![0, 1]));
        assert_eq!(x.basis()[3], Monomial(vec![1, 0]));
        let q = TruncPolyAlgebra::new(FieldSpec::Rational, 2, Some(2)).unwrap();
        assert_eq!(q.dim(), 6);
        assert!(TruncPolyAlgebra::new(FieldSpec::Rational, 1, None).is_err());
    }

    #[test]
    fn multiplication() {
        let x = x5();
        let f = x.field();
        assert_eq!(x.mul(&xpow(&x, 1), &xpow(&x, 2)).unwrap(), xpow(&x, 3));
        assert!(x.mul(&xpow(&x, 3), &xpow(&x, 2)).unwrap().is_zero());
        let one_plus_x = x.one().plus(&xpow(&x, 1));
        let mut expected = x.one();
        expected.add_scaled(&f.from_i64(2), &xpow(&x, 1));
        expected.add_scaled(&f.one(), &xpow(&x, 2));
        assert_eq!(x.mul(&one_plus_x, &one_plus_x).unwrap(), expected);
    }

    #[test]
    fn char_zero_truncation_errors() {
        let q = TruncPolyAlgebra::new(FieldSpec::Rational, 1, Some(3)).unwrap();
        let x2 = q.monomial(Monomial(vec![2]));
        assert!(matches!(q.mul(&x2, &x2), Err(Error::TruncationExceeded(_))));
        let x3 = q.monomial(Monomial(vec![3]));
        assert!(q.apply_derivation(&q.derivation_term(x2.clone(), 0), &x3).is_err());
        // a cancelling product stays legal
        let diff = x2.minus(&x2);
        assert!(q.mul(&diff, &x2).unwrap().is_zero());
    }

    #[test]
    fn augmentation() {
        let x = TruncPolyAlgebra::new(FieldSpec::prime(5).unwrap(), 2, None).unwrap();
        let f = x.field();
        let u = x.one().scaled(&f.from_i64(1)).plus(&x.var(0).scaled(&f.from_i64(3)));
        assert_eq!(x.augmentation(&u), f.one());
        assert!(x.augmentation(&x.mul(&x.var(0), &x.var(1)).unwrap()).is_zero());
        assert!(x.augmentation(&TruncPoly::zero()).is_zero());
    }

    #[test]
    fn derivations() {
        let x = x5();
        let f = x.field();
        let d = x.partial(0);
        assert_eq!(x.apply_derivation(&d, &xpow(&x, 3)).unwrap(), xpow(&x, 2).scaled(&f.from_i64(3)));
        let e1 = x.derivation_term(xpow(&x, 2), 0);
        assert_eq!(x.apply_derivation(&e1, &xpow(&x, 2)).unwrap(), xpow(&x, 3).scaled(&f.from_i64(2)));
        let d1 = TruncPolyAlgebra::new(f, 2, None).unwrap();
        assert!(d1.derivation_bracket(&d1.partial(0), &d1.partial(1)).unwrap().is_zero());
    }

    #[test]
    fn leibniz_on_all_monomial_pairs() {
        let x = TruncPolyAlgebra::new(FieldSpec::prime(3).unwrap(), 2, None).unwrap();
        let delta = Derivation::from_images(vec![
            x.mul(&x.var(0), &x.var(1)).unwrap().plus(&x.one()),
            x.var(0).scaled(&x.field().from_i64(2)),
        ]);
        for a in x.basis() {
            for b in x.basis() {
                let (u, v) = (x.monomial(a.clone()), x.monomial(b.clone()));
                let lhs = x.apply_derivation(&delta, &x.mul(&u, &v).unwrap()).unwrap();
                let rhs = x
                    .mul(&x.apply_derivation(&delta, &u).unwrap(), &v)
                    .unwrap()
                    .plus(&x.mul(&u, &x.apply_derivation(&delta, &v).unwrap()).unwrap());
                assert_eq!(lhs, rhs, "{a} {b}");
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let x = TruncPolyAlgebra::new(FieldSpec::prime(3).unwrap(), 2, None).unwrap();
        let d = x.derivation_term(x.var(1), 0).plus(&x.partial(1));
        assert_eq!(x.derivation_from_vec(&x.derivation_to_vec(&d)), d);
        assert_eq!(x.format_derivation(&d), "x2*d1 + d2");
        assert_eq!(Monomial::from_key(&Monomial(vec![1, 0]).key()).unwrap(), Monomial(vec![1, 0]));
    }
}
